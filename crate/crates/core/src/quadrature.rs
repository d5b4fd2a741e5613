//! Periodic product rule for `⟨ln f⟩` over the momentum torus `[0, 2π)²`.
//!
//! The midpoint grid never lands on `θ ∈ {0, π}`, where a critical integrand
//! vanishes, and pairs samples symmetrically around those points, which is
//! enough for the logarithmic singularity to be integrable at modest order.

use crate::sum::Neumaier;
use core::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    /// First grid has `start × start` points.
    pub start: usize,
    /// Stop doubling beyond this many points per axis.
    pub max: usize,
    /// Absolute agreement required between successive doublings.
    pub tol: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { start: 16, max: 512, tol: 1e-13 }
    }
}

/// Value with its convergence certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Value on the previous (half-size) grid.
    pub previous: f64,
    /// Points per axis of the last grid.
    pub order: usize,
    pub converged: bool,
    /// Whether the integrand changed sign on the grid.
    pub sign_change: bool,
}

impl QuadResult {
    pub fn into_result(self) -> crate::Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(crate::Error::NotConverged { last: self.value, previous: self.previous })
        }
    }

    /// Multiply value and previous by `c`.
    pub fn scaled(mut self, c: f64) -> Self {
        self.value *= c;
        self.previous *= c;
        self
    }
}

/// Mean of `ln |f|` on a `k × k` midpoint grid.
pub fn grid_log_mean<F: Fn(f64, f64) -> f64>(f: &F, k: usize) -> (f64, bool) {
    let h = 2.0 * PI / k as f64;
    let mut acc = Neumaier::new();
    let mut pos = false;
    let mut neg = false;
    for i in 0..k {
        let a = (i as f64 + 0.5) * h;
        for j in 0..k {
            let b = (j as f64 + 0.5) * h;
            let v = f(a, b);
            pos |= v > 0.0;
            neg |= v < 0.0;
            acc.add(libm::log(libm::fabs(v)));
        }
    }
    (acc.value() / (k * k) as f64, pos && neg)
}

/// `⟨ln |f|⟩` with grid doubling until two successive values agree.
pub fn periodic_log_mean<F: Fn(f64, f64) -> f64>(f: F, opts: &QuadOptions) -> QuadResult {
    let mut k = opts.start.max(2);
    let (mut prev, mut sc) = grid_log_mean(&f, k);
    loop {
        let next_k = 2 * k;
        if next_k > opts.max {
            return QuadResult { value: prev, previous: f64::NAN, order: k, converged: false, sign_change: sc };
        }
        let (v, s) = grid_log_mean(&f, next_k);
        sc |= s;
        if libm::fabs(v - prev) <= opts.tol {
            return QuadResult { value: v, previous: prev, order: next_k, converged: true, sign_change: sc };
        }
        k = next_k;
        if 2 * k > opts.max {
            return QuadResult { value: v, previous: prev, order: k, converged: false, sign_change: sc };
        }
        prev = v;
    }
}
