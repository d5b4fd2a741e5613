//! Closed-form free energies: cosine-series integrands for each crease
//! pattern, Barreto's Mars logarithm and the kite transfer matrix.
//!
//! An integrand is `A + Σ 2·c·cos(pθ1 + qθ2)` and the free energy is
//! `(1/kπ²) ∬ ln(...)`, i.e. `(4/k)·⟨ln⟩` over the momentum torus.
//! Every table below is written out once, term by term; each also has a
//! dimer counterpart in [`dimer_integrand`] sampled in the same momentum
//! convention so the two can be compared harmonic by harmonic.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dimer::Cell;
use crate::lattice::Shape;
use crate::model::{CpKind, Site};
use crate::quadrature::{periodic_log_mean, QuadOptions, QuadResult};
use crate::vertex::OddWeights;
use crate::{Error, Result};

/// One harmonic `2·coef·cos(p θ1 + q θ2)`, or the constant when `p = q = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub label: char,
    pub p: i32,
    pub q: i32,
    pub coef: f64,
}

/// A cosine-series integrand with its `1/(kπ²)` prefactor.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierIntegrand {
    pub terms: Vec<Term>,
    /// `k` in the prefactor `1/(kπ²)`: 32, 16 or 8.
    pub prefactor_k: f64,
}

/// Harmonic positions of the labels in the four-unit (Miura) form.
pub const MIURA_HARMONICS: [(char, i32, i32); 13] = [
    ('A', 0, 0),
    ('B', 1, 0),
    ('C', 0, 1),
    ('D', 1, 1),
    ('E', 1, -1),
    ('F', 2, 0),
    ('G', 0, 2),
    ('H', 2, 1),
    ('I', 2, -1),
    ('J', 1, 2),
    ('K', 1, -2),
    ('L', 2, 2),
    ('M', 2, -2),
];

const SQUARE_COLUMN_HARMONICS: [(char, i32, i32); 8] = [
    ('A', 0, 0),
    ('B', 1, 0),
    ('C', 0, 1),
    ('D', 1, -1),
    ('E', 1, 1),
    ('G', 0, 2),
    ('H', 1, -2),
    ('I', 1, 2),
];

const SQUARE_BIPARTITE_HARMONICS: [(char, i32, i32); 7] =
    [('A', 0, 0), ('B', 1, 0), ('C', 0, 1), ('D', 1, -1), ('E', 1, 1), ('F', 2, 0), ('G', 0, 2)];

const SQUARE_HOMOGENEOUS_HARMONICS: [(char, i32, i32); 5] =
    [('A', 0, 0), ('B', 1, 0), ('C', 0, 1), ('D', 1, -1), ('E', 1, 1)];

fn build(table: &[(char, i32, i32)], coefs: &[(char, f64)], k: f64) -> FourierIntegrand {
    let terms = coefs
        .iter()
        .map(|&(label, coef)| {
            let &(_, p, q) = table.iter().find(|t| t.0 == label).expect("label in table");
            Term { label, p, q, coef }
        })
        .collect();
    FourierIntegrand { terms, prefactor_k: k }
}

impl FourierIntegrand {
    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                if t.p == 0 && t.q == 0 {
                    t.coef
                } else {
                    2.0 * t.coef * libm::cos(t.p as f64 * t1 + t.q as f64 * t2)
                }
            })
            .sum()
    }

    pub fn coefficient(&self, label: char) -> f64 {
        self.terms.iter().filter(|t| t.label == label).map(|t| t.coef).sum()
    }

    /// `(1/kπ²) ∬ ln(...)` with its convergence record.
    pub fn free_energy(&self, opts: &QuadOptions) -> QuadResult {
        periodic_log_mean(|a, b| self.eval(a, b), opts).scaled(4.0 / self.prefactor_k)
    }

    /// Largest |coefficient| other than the constant.
    pub fn max_harmonic(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.p != 0 || t.q != 0)
            .fold(0.0, |m, t| m.max(libm::fabs(t.coef)))
    }
}

/// Fourier coefficient of the real even function `f` at harmonic `(p, q)`,
/// normalised to match [`Term::coef`], from a `k × k` grid (exact for
/// trigonometric polynomials of degree below `k/2`).
pub fn harmonic_coefficient<F: Fn(f64, f64) -> f64>(f: &F, p: i32, q: i32, k: usize) -> f64 {
    let h = 2.0 * PI / k as f64;
    let mut s = 0.0;
    for i in 0..k {
        for j in 0..k {
            let (a, b) = (i as f64 * h, j as f64 * h);
            s += f(a, b) * libm::cos(p as f64 * a + q as f64 * b);
        }
    }
    s / (k * k) as f64
}

/// All harmonics `(p, q)` with `|p|, |q| ≤ deg`, one of each `±` pair,
/// with their numerical coefficients.
pub fn fourier_modes<F: Fn(f64, f64) -> f64>(f: &F, deg: i32, k: usize) -> Vec<(i32, i32, f64)> {
    let mut out = Vec::new();
    for p in 0..=deg {
        for q in -deg..=deg {
            if p == 0 && q < 0 {
                continue;
            }
            out.push((p, q, harmonic_coefficient(f, p, q, k)));
        }
    }
    out
}

pub fn check_mask(cp: CpKind, site: Site, w: &OddWeights) -> Result<()> {
    if !w.is_valid() {
        return Err(Error::InvalidWeight);
    }
    for &i in cp.disallowed(site) {
        if w.get(i) != 0.0 {
            return Err(Error::MaskViolation { site, index: i });
        }
    }
    Ok(())
}

/// The Miura-ori four-unit integrand, prefactor `1/32π²`.
pub fn miura_integrand(
    t: &OddWeights,
    u: &OddWeights,
    v: &OddWeights,
    w: &OddWeights,
) -> Result<FourierIntegrand> {
    check_mask(CpKind::Miura, Site::T, t)?;
    check_mask(CpKind::Miura, Site::U, u)?;
    check_mask(CpKind::Miura, Site::V, v)?;
    check_mask(CpKind::Miura, Site::W, w)?;
    let [t1, t2, _, _, t5, t6, t7, t8] = t.0;
    let [_, _, u3, u4, u5, u6, u7, u8] = u.0;
    let [v1, v2, _, _, v5, v6, v7, v8] = v.0;
    let [_, _, w3, w4, w5, w6, w7, w8] = w.0;
    let sq = |x: f64| x * x;
    let g0 = t1 * u3 * v2 * w4 + t2 * u4 * v1 * w3;

    let a = sq(u3) * sq(v2) * sq(w4) * sq(t1)
        + sq(t2) * sq(u4) * sq(w3) * sq(v1)
        + (sq(v5) * sq(w6) + sq(v7) * sq(w8)) * (sq(t5) * sq(u6) + sq(t7) * sq(u8))
        + (sq(v5) * sq(w7) + sq(v7) * sq(w5)) * (sq(t5) * sq(u7) + sq(t7) * sq(u5))
        + (sq(v6) * sq(w5) + sq(v8) * sq(w7)) * (sq(t6) * sq(u5) + sq(t8) * sq(u7))
        + (sq(v6) * sq(w8) + sq(v8) * sq(w6)) * (sq(t6) * sq(u8) + sq(t8) * sq(u6))
        + 2.0 * t1 * t2 * v1 * v2 * u3 * u4 * w3 * w4
        + 2.0 * t5 * t6 * u5 * u6 * v7 * v8 * w7 * w8
        + 2.0 * t7 * t8 * u7 * u8 * v5 * v6 * w5 * w6
        + 2.0 * g0 * (t5 * u6 * v7 * w8 + t6 * u5 * v8 * w7 + t7 * u8 * v5 * w6 + t8 * u7 * v6 * w5)
        + 2.0 * (t7 * u5 * v5 * w7 + t8 * u6 * v6 * w8) * (t5 * u7 * v7 * w5 + t6 * u8 * v8 * w6)
        + 2.0 * (t7 * u8 * v7 * w8 + t8 * u7 * v8 * w7) * (t5 * u6 * v5 * w6 + t6 * u5 * v6 * w5);

    let b = (-sq(v5) * w6 * w7 + sq(v7) * w5 * w8) * (sq(t5) * u6 * u7 - sq(t7) * u5 * u8)
        + (-v5 * v8 * sq(w6) + v6 * v7 * sq(w8)) * (t5 * t8 * sq(u6) - t6 * t7 * sq(u8))
        + (-v5 * v8 * sq(w7) + v6 * v7 * sq(w5)) * (t5 * t8 * sq(u7) - t6 * t7 * sq(u5))
        + (sq(v6) * w5 * w8 - sq(v8) * w6 * w7) * (-sq(t6) * u5 * u8 + sq(t8) * u6 * u7)
        + (u5 * u7 * w5 * w7 + u6 * u8 * w6 * w8) * (t5 * t6 * v7 * v8 + t7 * t8 * v5 * v6)
        + (u5 * u6 * w7 * w8 + u7 * u8 * w5 * w6) * (t5 * t7 * v5 * v7 + t6 * t8 * v6 * v8)
        + g0 * (t5 * u7 * v7 * w5 + t6 * u8 * v8 * w6 + t7 * u5 * v5 * w7 + t8 * u6 * v6 * w8);

    let c = (-sq(u6) * w6 * w8 + sq(u7) * w5 * w7) * (-sq(t5) * v5 * v7 + sq(t8) * v6 * v8)
        + (sq(u5) * w5 * w7 - sq(u8) * w6 * w8) * (sq(t6) * v6 * v8 - sq(t7) * v5 * v7)
        - u5 * u7
            * (t5 * t7 * (sq(v5) * sq(w7) + sq(v7) * sq(w5))
                - t6 * t8 * (sq(v6) * sq(w5) + sq(v8) * sq(w7)))
        + u6 * u8
            * (t5 * t7 * (sq(v5) * sq(w6) + sq(v7) * sq(w8))
                - t6 * t8 * (sq(v6) * sq(w8) + sq(v8) * sq(w6)))
        + (v5 * v8 * w6 * w7 + v6 * v7 * w5 * w8) * (t5 * t6 * u5 * u6 + t7 * t8 * u7 * u8)
        + (v5 * v6 * w5 * w6 + v7 * v8 * w7 * w8) * (t5 * t8 * u6 * u7 + t6 * t7 * u5 * u8)
        + g0 * (t5 * u6 * v5 * w6 + t6 * u5 * v6 * w5 + t7 * u8 * v7 * w8 + t8 * u7 * v8 * w7);

    // shared brackets of D and E
    let p1 = u8 * (sq(t6) * v6 * v8 - sq(t7) * v5 * v7) * u5 + u6 * u7 * (sq(t5) * v5 * v7 - sq(t8) * v6 * v8);
    let p2 = t7 * (-sq(v5) * w6 * w7 + sq(v7) * w5 * w8) * t5 - t6 * t8 * (sq(v6) * w5 * w8 - sq(v8) * w6 * w7);
    let p3 = t8 * (-sq(u6) * w6 * w8 + sq(u7) * w5 * w7) * t5 - t6 * t7 * (sq(u5) * w5 * w7 - sq(u8) * w6 * w8);
    let p4 = -u7 * (v5 * v8 * sq(w7) - v6 * v7 * sq(w5)) * u5 + u6 * u8 * (v5 * v8 * sq(w6) - v6 * v7 * sq(w8));

    let d = -p1 * w7 * w8 + p2 * u7 * u8 - p3 * v6 * v5 + p4 * t6 * t5
        - (t5 * u7 * v5 * w7 + t6 * u8 * v6 * w8) * g0;
    let e = p1 * w5 * w6 - p2 * u5 * u6 - p4 * t8 * t7 + p3 * v7 * v8
        - g0 * (t7 * u5 * v7 * w5 + t8 * u6 * v8 * w6);

    let xf = t5 * t8 * u6 * u7 + t6 * t7 * u5 * u8;
    let xg = t5 * t7 * v5 * v7 + t6 * t8 * v6 * v8;
    let yf = v5 * v8 * w6 * w7 + v6 * v7 * w5 * w8;
    let yg = u5 * u7 * w5 * w7 + u6 * u8 * w6 * w8;
    let f = t5 * t6 * u7 * u8 * v7 * v8 * w5 * w6 + t7 * t8 * u5 * u6 * v5 * v6 * w7 * w8 + yf * xf;
    let g = t5 * t6 * u5 * u6 * v5 * v6 * w5 * w6 + t7 * t8 * u7 * u8 * v7 * v8 * w7 * w8 + yg * xg;
    let h = -w7 * w8 * v5 * v6 * xf - u7 * u8 * t5 * t6 * yf;
    let i = -w5 * w6 * v7 * v8 * xf - u5 * u6 * t7 * t8 * yf;
    let j = -u7 * u8 * w7 * w8 * xg - v5 * v6 * t5 * t6 * yg;
    let k = -u5 * u6 * w5 * w6 * xg - v7 * v8 * t7 * t8 * yg;
    let l = t5 * t6 * u7 * u8 * v5 * v6 * w7 * w8;
    let m = t7 * t8 * u5 * u6 * v7 * v8 * w5 * w6;

    Ok(build(
        &MIURA_HARMONICS,
        &[
            ('A', a),
            ('B', b),
            ('C', c),
            ('D', d),
            ('E', e),
            ('F', f),
            ('G', g),
            ('H', h),
            ('I', i),
            ('J', j),
            ('K', k),
            ('L', l),
            ('M', m),
        ],
        32.0,
    ))
}

/// The trapezoid integrand, prefactor `1/16π²`.
pub fn trapezoid_integrand(v: &OddWeights, w: &OddWeights) -> Result<FourierIntegrand> {
    check_mask(CpKind::Trapezoid, Site::V, v)?;
    check_mask(CpKind::Trapezoid, Site::W, w)?;
    let [v1, v2, _, _, v5, v6, v7, v8] = v.0;
    let [_, _, w3, w4, w5, w6, w7, w8] = w.0;
    let sq = |x: f64| x * x;
    Ok(build(
        &MIURA_HARMONICS,
        &[
            (
                'A',
                sq(v1) * sq(w3)
                    + 2.0 * v1 * v2 * w3 * w4
                    + sq(v2) * sq(w4)
                    + sq(v5) * sq(w7)
                    + sq(v6) * sq(w8)
                    + sq(v7) * sq(w5)
                    + sq(v8) * sq(w6),
            ),
            ('B', -v5 * v7 * w5 * w7 - v6 * v8 * w6 * w8),
            ('C', (v7 * w5 + v8 * w6) * (v1 * w3 + v2 * w4)),
            ('D', -(v5 * w7 + v6 * w8) * (v1 * w3 + v2 * w4)),
            ('G', v7 * v8 * w6 * w5),
            ('J', -v5 * v8 * w6 * w7 - v6 * v7 * w5 * w8),
            ('L', v5 * v6 * w7 * w8),
        ],
        16.0,
    ))
}

/// The kite integrand as printed, prefactor `1/16π²`.
pub fn kite_integrand(v: &OddWeights, w: &OddWeights) -> Result<FourierIntegrand> {
    check_mask(CpKind::Kite, Site::V, v)?;
    check_mask(CpKind::Kite, Site::W, w)?;
    let [v1, v2, _, _, _, _, v7, v8] = v.0;
    let [_, _, w3, w4, w5, w6, _, _] = w.0;
    let sq = |x: f64| x * x;
    Ok(build(
        &MIURA_HARMONICS,
        &[
            (
                'A',
                sq(v1) * sq(w3) + sq(v2) * sq(w4) + sq(v7) * sq(w5) + 2.0 * v7 * v8 * w5 * w6 + sq(v8) * sq(w6),
            ),
            ('C', (v7 * w5 + v8 * w6) * (v1 * w3 + v2 * w4)),
            ('G', w3 * w4 * v7 * v8),
        ],
        16.0,
    ))
}

/// Barreto's Mars: `⅛ ln[(t1u3v2w4 + t2u4v1w3 + t5u6v7w8 + t6u5v8w7)² − 2u3u4w3w4(t1t2v1v2 − t5t6v7v8)]`.
pub fn barreto_free_energy(t: &OddWeights, u: &OddWeights, v: &OddWeights, w: &OddWeights) -> Result<f64> {
    let arg = barreto_argument(t, u, v, w)?;
    assert!(arg > 0.0, "argument has only positive terms for non-negative weights");
    Ok(libm::log(arg) / 8.0)
}

/// The argument of Barreto's logarithm (the constant `A`).
pub fn barreto_argument(t: &OddWeights, u: &OddWeights, v: &OddWeights, w: &OddWeights) -> Result<f64> {
    check_mask(CpKind::BarretoMars, Site::T, t)?;
    check_mask(CpKind::BarretoMars, Site::U, u)?;
    check_mask(CpKind::BarretoMars, Site::V, v)?;
    check_mask(CpKind::BarretoMars, Site::W, w)?;
    let s = t.get(1) * u.get(3) * v.get(2) * w.get(4)
        + t.get(2) * u.get(4) * v.get(1) * w.get(3)
        + t.get(5) * u.get(6) * v.get(7) * w.get(8)
        + t.get(6) * u.get(5) * v.get(8) * w.get(7);
    Ok(s * s
        - 2.0
            * u.get(3)
            * u.get(4)
            * w.get(3)
            * w.get(4)
            * (t.get(1) * t.get(2) * v.get(1) * v.get(2) - t.get(5) * t.get(6) * v.get(7) * v.get(8)))
}

/// Square lattice variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareVariant {
    Homogeneous,
    ColumnTwo,
    BipartiteTwo,
}

/// The three printed square-lattice integrands with their printed prefactors.
/// For the homogeneous variant see [`homogeneous_integrand`] for the form
/// reconciled with the lattice.
pub fn square_integrand(variant: SquareVariant, v: &OddWeights, w: &OddWeights) -> Result<FourierIntegrand> {
    if !v.is_valid() || !w.is_valid() {
        return Err(Error::InvalidWeight);
    }
    let [v1, v2, v3, v4, v5, v6, v7, v8] = v.0;
    let [w1, w2, w3, w4, w5, w6, w7, w8] = w.0;
    let sq = |x: f64| x * x;
    Ok(match variant {
        SquareVariant::ColumnTwo => build(
            &SQUARE_COLUMN_HARMONICS,
            &[
                (
                    'A',
                    (sq(v5) + sq(v8)) * (sq(w6) + sq(w7))
                        + (sq(v6) + sq(v7)) * (sq(w5) + sq(w8))
                        + 2.0 * v1 * v3 * w1 * w3
                        + 2.0 * v2 * v4 * w2 * w4
                        + 2.0 * v5 * v8 * w6 * w7
                        + 2.0 * v6 * v7 * w5 * w8,
                ),
                (
                    'B',
                    v1 * v2 * w3 * w4 + v3 * v4 * w1 * w2 - v5 * v6 * w7 * w8 - v7 * v8 * w5 * w6
                        - (v5 * v7 - v6 * v8) * (w5 * w7 - w6 * w8),
                ),
                (
                    'C',
                    w5 * w8 * (sq(v6) + sq(v7)) - w6 * w7 * (sq(v5) + sq(v8)) - v5 * v8 * (sq(w6) + sq(w7))
                        + v6 * v7 * (sq(w5) + sq(w8)),
                ),
                ('D', (v3 * v4 - v5 * v6) * (w5 * w7 - w6 * w8) - (v5 * v7 - v6 * v8) * (w3 * w4 - w5 * w6)),
                ('E', (v1 * v2 - v5 * v6) * (w5 * w7 - w6 * w8) - (v5 * v7 - v6 * v8) * (w1 * w2 - w5 * w6)),
                ('G', v8 * v5 * w7 * w6 + v7 * v6 * w8 * w5 - v3 * v1 * w3 * w1 - v4 * v2 * w4 * w2),
                ('H', (v1 * v2 - v7 * v8) * (w1 * w2 - w7 * w8)),
                ('I', (v1 * v2 - v5 * v6) * (w1 * w2 - w5 * w6)),
            ],
            16.0,
        ),
        SquareVariant::BipartiteTwo => build(
            &SQUARE_BIPARTITE_HARMONICS,
            &[
                (
                    'A',
                    sq(w8) * sq(v6)
                        + sq(w7) * sq(v5)
                        + sq(w5) * sq(v7)
                        + sq(w6) * sq(v8)
                        + sq(w3) * sq(v1)
                        + sq(w4) * sq(v2)
                        + sq(w1) * sq(v3)
                        + sq(w2) * sq(v4)
                        + 2.0 * (v8 * v7 + v5 * v6) * (w8 * w7 + w5 * w6),
                ),
                ('B', (v1 * w3 + v2 * w4) * (v7 * w5 + v8 * w6) - (v3 * w1 + v4 * w2) * (v5 * w7 + v6 * w8)),
                ('C', (v3 * w1 + v4 * w2) * (v7 * w5 + v8 * w6) - (v1 * w3 + v2 * w4) * (v5 * w7 + v6 * w8)),
                ('D', v1 * v4 * w2 * w3 + v2 * v3 * w1 * w4 - v6 * v8 * w6 * w8 - v5 * v7 * w5 * w7),
                ('E', v1 * v3 * w1 * w3 + v2 * v4 * w2 * w4 - v6 * v7 * w5 * w8 - v5 * v8 * w6 * w7),
                ('F', -(v1 * v2 - v5 * v6) * (w1 * w2 - w5 * w6)),
                ('G', -(v1 * v2 - v7 * v8) * (w1 * w2 - w7 * w8)),
            ],
            16.0,
        ),
        SquareVariant::Homogeneous => build(
            &SQUARE_HOMOGENEOUS_HARMONICS,
            &[
                (
                    'A',
                    (v1 * v2 + v3 * v4) * (v5 * v6 + v7 * v8)
                        + sq(v1) * sq(v4)
                        + sq(v2) * sq(v3)
                        + sq(v5) * sq(v7)
                        + sq(v6) * sq(v8),
                ),
                ('B', 2.0 * v5 * v6 * v7 * v8 - sq(v1) * sq(v4) - sq(v2) * sq(v3)),
                ('C', 2.0 * v1 * v2 * v3 * v4 - sq(v5) * sq(v7) - sq(v6) * sq(v8)),
                ('D', (v1 * v2 - v7 * v8) * (v5 * v6 - v3 * v4)),
                ('E', (v1 * v2 - v5 * v6) * (v7 * v8 - v3 * v4)),
            ],
            8.0,
        ),
    })
}

/// Homogeneous integrand that reproduces `lim ln Z / MN`.
///
/// It is the printed homogeneous form with `v3 ↔ v4`, the `cos θ1` and
/// `cos θ2` labels exchanged, the constant doubled and the prefactor halved to
/// `1/16π²`; the `D` and `E` terms are written in the squared form they take
/// on the free-fermion surface.
pub fn homogeneous_integrand(v: &OddWeights) -> Result<FourierIntegrand> {
    let printed = square_integrand(SquareVariant::Homogeneous, &swap34(v), v)?;
    let [v1, v2, _, _, v5, v6, v7, v8] = v.0;
    Ok(build(
        &SQUARE_HOMOGENEOUS_HARMONICS,
        &[
            ('A', 2.0 * printed.coefficient('A')),
            ('B', printed.coefficient('C')),
            ('C', printed.coefficient('B')),
            ('D', (v1 * v2 - v7 * v8) * (v1 * v2 - v7 * v8)),
            ('E', (v1 * v2 - v5 * v6) * (v1 * v2 - v5 * v6)),
        ],
        16.0,
    ))
}

fn swap34(v: &OddWeights) -> OddWeights {
    let mut o = *v;
    o.0.swap(2, 3);
    o
}

/// Symmetric Miura form: `1 + 4y⁴ + 16y⁸ + 4y⁴(cos θ1 + cos θ2 − cos θ1 cos θ2)` with prefactor `1/16π²`.
pub fn miura_symmetric_integrand(y: f64) -> FourierIntegrand {
    let y4 = y * y * y * y;
    // cos θ1 cos θ2 = ½[cos(θ1+θ2) + cos(θ1−θ2)]
    build(
        &MIURA_HARMONICS,
        &[('A', 1.0 + 4.0 * y4 + 16.0 * y4 * y4), ('B', 2.0 * y4), ('C', 2.0 * y4), ('D', -y4), ('E', -y4)],
        16.0,
    )
}

/// Symmetric trapezoid form: `1 + 4y⁴ + 2y²[cos θ2 − cos(θ1 + θ2)]` with prefactor `1/8π²`.
pub fn trapezoid_symmetric_integrand(y: f64) -> FourierIntegrand {
    let y2 = y * y;
    build(&MIURA_HARMONICS, &[('A', 1.0 + 4.0 * y2 * y2), ('C', y2), ('D', -y2)], 8.0)
}

/// Which printed form a dimer determinant is matched to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintedForm {
    /// Four-unit `D(θ1, θ2)`; units `[v, w, t, u]`.
    FourUnit,
    /// Bipartite cell in the trapezoid (and kite) momentum convention; units `[v, w]`.
    Trapezoid,
    /// Column-two cell in the printed column-staggered convention.
    SquareColumn,
    /// Bipartite cell in the printed bipartite convention.
    SquareBipartite,
    /// Homogeneous lattice; unit `[v]`.
    SquareHomogeneous,
}

/// The dimer determinant sampled in the momentum convention of a printed form.
pub fn dimer_integrand(form: PrintedForm, units: &[OddWeights]) -> Result<impl Fn(f64, f64) -> f64> {
    let (cell, map): (Cell, fn(f64, f64) -> (f64, f64)) = match form {
        PrintedForm::FourUnit => {
            let u: [OddWeights; 4] = units.try_into().map_err(|_| Error::IncompatibleShape)?;
            (Cell::four_unit(&u)?, |a, b| (a, b))
        }
        PrintedForm::Trapezoid => (Cell::bipartite(&units[0], &units[1])?, |a, b| (-a - b, b)),
        PrintedForm::SquareColumn => (Cell::column_two(&units[0], &units[1])?, |a, b| (-b, a)),
        PrintedForm::SquareBipartite => (Cell::bipartite(&units[0], &units[1])?, |a, b| (b, -a)),
        PrintedForm::SquareHomogeneous => (Cell::column_two(&units[0], &units[0])?, |a, b| (-b / 2.0, a)),
    };
    Ok(move |a: f64, b: f64| {
        let (p1, p2) = map(a, b);
        cell.det(p1, p2).re
    })
}

/// Eigenvalues of the kite transfer matrix and their discriminant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KiteSpectrum {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub discriminant: f64,
}

/// The eight allowed `(v, w)` pairs of a kite unit, in transfer-matrix order.
pub const KITE_PAIRS: [(usize, usize); 8] = [(1, 3), (1, 5), (8, 4), (8, 6), (2, 4), (2, 6), (7, 3), (7, 5)];

/// The printed 8×8 kite transfer matrix; its blank entry is read as zero.
pub fn kite_transfer_matrix(v: &OddWeights, w: &OddWeights) -> [[f64; 8]; 8] {
    let p = |a: usize, b: usize| v.get(a) * w.get(b);
    let top = [p(1, 3), 0.0, 0.0, p(8, 6), 0.0, p(2, 6), p(7, 3), 0.0];
    let bottom = [0.0, p(1, 5), p(8, 4), 0.0, p(2, 4), 0.0, 0.0, p(7, 5)];
    core::array::from_fn(|r| if r < 4 { top } else { bottom })
}

pub fn kite_spectrum(v: &OddWeights, w: &OddWeights) -> Result<KiteSpectrum> {
    check_mask(CpKind::Kite, Site::V, v)?;
    check_mask(CpKind::Kite, Site::W, w)?;
    let (a, b, c, d) = (v.get(1) * w.get(3), v.get(2) * w.get(4), v.get(7) * w.get(5), v.get(8) * w.get(6));
    let disc = (a - b) * (a - b)
        + (c - d) * (c - d)
        + 2.0 * (a + b) * (c + d)
        + 4.0 * v.get(1) * v.get(2) * w.get(5) * w.get(6)
        + 4.0 * v.get(7) * v.get(8) * w.get(3) * w.get(4);
    let s = libm::sqrt(disc.max(0.0));
    Ok(KiteSpectrum { lambda_plus: 0.5 * (a + b + c + d + s), lambda_minus: 0.5 * (a + b + c + d - s), discriminant: disc })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn powered(w: &OddWeights, p: usize) -> OddWeights {
    OddWeights(w.0.map(|x| libm::pow(x, p as f64)))
}

/// One-dimensional kite chain of `n` units: `λ₊ⁿ + λ₋ⁿ`.
pub fn kite_chain_z(v: &OddWeights, w: &OddWeights, n: usize) -> Result<f64> {
    let s = kite_spectrum(v, w)?;
    Ok(libm::pow(s.lambda_plus, n as f64) + libm::pow(s.lambda_minus, n as f64))
}

/// Kite partition function on an `M × N` torus.
///
/// Configurations are constant along the antidiagonals `(x, y) → (x+1, y−1)`,
/// of which there are `g = gcd(M, N)`, each of length `MN/g`. The torus is a
/// chain of `g/2` units with every weight raised to the power `MN/g`.
#[allow(non_snake_case)]
pub fn kite_Z(v: &OddWeights, w: &OddWeights, shape: Shape) -> Result<f64> {
    if shape.m % 2 != 0 || shape.n % 2 != 0 {
        return Err(Error::IncompatibleShape);
    }
    let g = gcd(shape.m, shape.n);
    let p = shape.sites() / g;
    kite_chain_z(&powered(v, p), &powered(w, p), g / 2)
}

/// The row construction read literally: weights to the `M`-th power and a
/// chain of `N/2` units. Agrees with [`kite_Z`] exactly when `N` divides `M`.
#[allow(non_snake_case)]
pub fn kite_Z_literal(v: &OddWeights, w: &OddWeights, shape: Shape) -> Result<f64> {
    if shape.m % 2 != 0 || shape.n % 2 != 0 {
        return Err(Error::IncompatibleShape);
    }
    kite_chain_z(&powered(v, shape.m), &powered(w, shape.m), shape.n / 2)
}

/// Per-site kite free energy, `½ ln λ₊` (two vertices per unit).
pub fn kite_free_energy(v: &OddWeights, w: &OddWeights) -> Result<f64> {
    Ok(0.5 * libm::log(kite_spectrum(v, w)?.lambda_plus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kite_unit_weights() {
        let v = OddWeights([1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        let w = OddWeights([0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        let s = kite_spectrum(&v, &w).unwrap();
        assert_eq!((s.discriminant, s.lambda_plus, s.lambda_minus), (16.0, 4.0, 0.0));
        assert_eq!(kite_chain_z(&v, &w, 3).unwrap(), 64.0);
    }

    #[test]
    fn barreto_at_one() {
        let m = crate::model::symmetric_defect_weights(CpKind::BarretoMars, 1.0).unwrap();
        let f = barreto_free_energy(&m.t, &m.u, &m.v, &m.w).unwrap();
        assert!((f - 0.5 * libm::log(2.0)).abs() < 1e-15);
    }

    #[test]
    fn constant_integrand() {
        let f = build(&MIURA_HARMONICS, &[('A', 5.0)], 16.0);
        let r = f.free_energy(&QuadOptions::default());
        assert!((r.value - 0.25 * libm::log(5.0)).abs() < 1e-15);
    }
}
