//! Simple square pattern with Maekawa defects: the crease-reversal symmetric
//! 16-vertex model, its weak-graph image (an even 8-vertex model) and the
//! even free-fermion solution.
//!
//! Weights are labelled as printed: `ω1..ω8` on the even configurations,
//! `v1..v8` on the odd ones. The printed transform only agrees with a direct
//! weak-graph expansion if its `v5, v6` sit on our L-only configuration and
//! its complement and `v7, v8` on the R-only one, so [`SixteenVertexWeights::tables`]
//! places them that way. When `v5 = v7` the distinction disappears.

use alloc::vec;
use alloc::vec::Vec;

use crate::dimer::{finite_Z_cell, Cell};
use crate::lattice::Shape;
use crate::quadrature::{periodic_log_mean, QuadOptions, QuadResult};
use crate::transitions::{ConditionSet, ResidualSet};
use crate::vertex::{EvenWeights, OddWeights, EVEN_BITS, ODD_BITS};
use crate::{Error, Result};

/// The transform's output: even 8-vertex weights, possibly negative.
pub type TransformedEvenWeights = EvenWeights;

/// Crease-reversal symmetric 16-vertex weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SixteenVertexWeights {
    pub omega: [f64; 8],
    pub v: [f64; 8],
}

/// Signs of the printed transform, rows `w̃1..w̃8`, columns
/// `ω1 ω3 ω5 ω7 v1 v3 v5 v7`.
const SIGNS: [[i8; 8]; 8] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, -1, -1, -1, -1],
    [1, 1, -1, -1, -1, -1, 1, 1],
    [1, 1, -1, -1, 1, 1, -1, -1],
    [1, -1, 1, -1, -1, 1, 1, -1],
    [1, -1, 1, -1, 1, -1, -1, 1],
    [1, -1, -1, 1, -1, 1, -1, 1],
    [1, -1, -1, 1, 1, -1, 1, -1],
];

/// Our odd label carrying each printed odd label.
const ODD_SLOT: [usize; 8] = [1, 2, 3, 4, 7, 8, 5, 6];

impl SixteenVertexWeights {
    /// Checks finiteness, non-negativity and `ω_{2i} = ω_{2i-1}`, `v_{2i} = v_{2i-1}`.
    pub fn new(omega: [f64; 8], v: [f64; 8]) -> Result<Self> {
        if !omega.iter().chain(&v).all(|x| x.is_finite() && *x >= 0.0) {
            return Err(Error::InvalidWeight);
        }
        for i in 0..4 {
            for a in [omega, v] {
                let (p, q) = (a[2 * i], a[2 * i + 1]);
                if libm::fabs(p - q) > 1e-12 * p.max(q) {
                    return Err(Error::SymmetryViolation);
                }
            }
        }
        Ok(SixteenVertexWeights { omega, v })
    }

    /// From `(ω1, ω3, ω5, ω7)` and `(v1, v3, v5, v7)`.
    pub fn symmetric(omega: [f64; 4], v: [f64; 4]) -> Result<Self> {
        let d = |a: [f64; 4]| [a[0], a[0], a[1], a[1], a[2], a[2], a[3], a[3]];
        Self::new(d(omega), d(v))
    }

    /// All Maekawa defects at weight `omega`.
    pub fn equal_omega(omega: f64, v: [f64; 4]) -> Result<Self> {
        Self::symmetric([omega; 4], v)
    }

    /// `ω_i`, 1-based.
    pub fn w(&self, i: usize) -> f64 {
        self.omega[i - 1]
    }

    /// `v_i`, 1-based.
    pub fn vi(&self, i: usize) -> f64 {
        self.v[i - 1]
    }

    /// `ω1 ω3 ω5 ω7 v1 v3 v5 v7`.
    pub fn representatives(&self) -> [f64; 8] {
        [self.w(1), self.w(3), self.w(5), self.w(7), self.vi(1), self.vi(3), self.vi(5), self.vi(7)]
    }

    /// `ω1ω3 + ω5ω7 − v1v3 − v5v7`; zero on the solvable family.
    pub fn free_fermion_residual(&self) -> f64 {
        self.w(1) * self.w(3) + self.w(5) * self.w(7) - self.vi(1) * self.vi(3) - self.vi(5) * self.vi(7)
    }

    pub fn is_solvable(&self, rel_tol: f64) -> bool {
        let scale = self.representatives().iter().fold(0.0f64, |m, x| m.max(*x));
        libm::fabs(self.free_fermion_residual()) <= rel_tol * (scale * scale).max(f64::MIN_POSITIVE)
    }

    /// Weight table over the sixteen neighbourhoods, indexed by `U D L R` bits.
    pub fn table(&self) -> [f64; 16] {
        let mut t = [0.0; 16];
        for i in 0..8 {
            t[EVEN_BITS[i] as usize] = self.omega[i];
            t[ODD_BITS[ODD_SLOT[i] - 1] as usize] = self.v[i];
        }
        t
    }

    /// One table per site for enumeration; no Maekawa filter.
    pub fn tables(&self, shape: Shape) -> Vec<[f64; 16]> {
        vec![self.table(); shape.sites()]
    }
}

/// The printed ½-combinations.
pub fn weak_graph_transform(s: &SixteenVertexWeights) -> TransformedEvenWeights {
    let r = s.representatives();
    let mut out = [0.0; 8];
    for (o, row) in out.iter_mut().zip(&SIGNS) {
        *o = 0.5 * row.iter().zip(&r).map(|(&g, x)| f64::from(g) * x).sum::<f64>();
    }
    EvenWeights(out)
}

/// Inverse of [`weak_graph_transform`]: the sign matrix is orthogonal with
/// `S Sᵀ = 8`, so the representatives are `¼ Sᵀ w̃`.
pub fn inverse_weak_graph_transform(w: &TransformedEvenWeights) -> Result<SixteenVertexWeights> {
    let mut r = [0.0; 8];
    for (j, rj) in r.iter_mut().enumerate() {
        *rj = 0.25 * (0..8).map(|i| f64::from(SIGNS[i][j]) * w.0[i]).sum::<f64>();
    }
    SixteenVertexWeights::symmetric([r[0], r[1], r[2], r[3]], [r[4], r[5], r[6], r[7]])
}

/// Even weight tables, indexed like [`SixteenVertexWeights::table`].
pub fn even_tables(w: &EvenWeights, shape: Shape) -> Vec<[f64; 16]> {
    let mut t = [0.0; 16];
    for (b, slot) in t.iter_mut().enumerate() {
        *slot = w.by_bits(b as u8);
    }
    vec![t; shape.sites()]
}

/// Column-two odd model with the same partition function on tori with an
/// even number of columns: reversing R(x, y) at even `x` flips the parity of
/// every vertex. Returns the weights at even and at odd columns.
pub fn even_to_odd(w: &EvenWeights) -> (OddWeights, OddWeights) {
    let mut v = OddWeights([0.0; 8]);
    let mut u = OddWeights([0.0; 8]);
    for i in 0..8 {
        v.0[i] = w.by_bits(ODD_BITS[i] ^ 0b0001);
        u.0[i] = w.by_bits(ODD_BITS[i] ^ 0b0010);
    }
    (v, u)
}

/// Coefficients `A..E` of the even free-fermion integrand. The two printed
/// forms of `D` and of `E` must agree, which is the free-fermion condition.
pub fn even_ff_coefficients(w: &EvenWeights) -> Result<[f64; 5]> {
    let x = |i: usize| w.get(i);
    let scale = w.0.iter().fold(0.0f64, |m, a| m.max(a * a)).max(f64::MIN_POSITIVE);
    let d1 = x(3) * x(4) - x(7) * x(8);
    let d2 = x(5) * x(6) - x(1) * x(2);
    let e1 = x(3) * x(4) - x(5) * x(6);
    let e2 = x(7) * x(8) - x(1) * x(2);
    let off = libm::fabs(d1 - d2).max(libm::fabs(e1 - e2));
    if off > 1e-10 * scale {
        return Err(Error::NotFreeFermion { residual: w.free_fermion_residual() });
    }
    Ok([
        x(1) * x(1) + x(2) * x(2) + x(3) * x(3) + x(4) * x(4),
        x(1) * x(3) - x(2) * x(4),
        x(1) * x(4) - x(2) * x(3),
        d1,
        e1,
    ])
}

/// `A + 2B cos θ1 + 2C cos θ2 + 2D cos(θ1 − θ2) + 2E cos(θ1 + θ2)`.
pub fn even_ff_integrand(c: &[f64; 5], t1: f64, t2: f64) -> f64 {
    c[0] + 2.0 * c[1] * libm::cos(t1)
        + 2.0 * c[2] * libm::cos(t2)
        + 2.0 * c[3] * libm::cos(t1 - t2)
        + 2.0 * c[4] * libm::cos(t1 + t2)
}

/// Per-site `-βf` of the even free-fermion model: half the mean log of the
/// integrand. The integrand is a modulus squared; `sign_change` on the
/// result flags a violation.
pub fn even_ff_free_energy(w: &EvenWeights, opts: &QuadOptions) -> Result<QuadResult> {
    let c = even_ff_coefficients(w)?;
    Ok(periodic_log_mean(|a, b| even_ff_integrand(&c, a, b), opts).scaled(0.5))
}

/// `-βf` of the 16-vertex model through its weak-graph image.
pub fn sixteen_free_energy(s: &SixteenVertexWeights, opts: &QuadOptions) -> Result<QuadResult> {
    even_ff_free_energy(&weak_graph_transform(s), opts)
}

/// The dimer cell of the odd image of `w`.
pub fn even_cell(w: &EvenWeights) -> Result<Cell> {
    let (v, u) = even_to_odd(w);
    Cell::column_two_signed(&v, &u)
}

/// Finite-torus partition function of the even model through the Pfaffians
/// of its odd image. Needs an even number of columns.
#[allow(non_snake_case)]
pub fn even_finite_Z(w: &EvenWeights, shape: Shape) -> Result<f64> {
    if shape.n % 2 != 0 {
        return Err(Error::IncompatibleShape);
    }
    finite_Z_cell(&even_cell(w)?, shape.m, shape.n / 2, shape)
}

/// Finite-torus partition function of the 16-vertex model.
#[allow(non_snake_case)]
pub fn sixteen_finite_Z(s: &SixteenVertexWeights, shape: Shape) -> Result<f64> {
    even_finite_Z(&weak_graph_transform(s), shape)
}

/// Per-site `-βf` from the odd image's momentum determinant, an independent
/// route to [`even_ff_free_energy`].
pub fn even_dimer_free_energy(w: &EvenWeights, opts: &QuadOptions) -> Result<QuadResult> {
    let cell = even_cell(w)?;
    Ok(periodic_log_mean(|a, b| cell.det(a, b).re, opts).scaled(0.25))
}

/// The four printed conditions, each as `left − right`.
pub fn maekawa_transitions(s: &SixteenVertexWeights) -> ResidualSet {
    let (o13, o57) = (s.w(1) + s.w(3), s.w(5) + s.w(7));
    let (v13, v57) = (s.vi(1) + s.vi(3), s.vi(5) + s.vi(7));
    ResidualSet::new(
        ConditionSet::SixteenVertex,
        vec![o13 - o57 - v13 - v57, o57 - o13 - v13 - v57, v13 - o13 - o57 - v57, v57 - o13 - o57 - v13],
    )
}

/// The equal-ω pair `v1 + v3 = 4ω + v5 + v7` and its mirror.
pub fn equal_omega_transitions(s: &SixteenVertexWeights) -> Result<ResidualSet> {
    let o = s.w(1);
    if (1..=8).any(|i| s.w(i) != o) {
        return Err(Error::Unsupported);
    }
    let (v13, v57) = (s.vi(1) + s.vi(3), s.vi(5) + s.vi(7));
    Ok(ResidualSet::new(ConditionSet::SixteenVertexEqual, vec![v13 - 4.0 * o - v57, v57 - 4.0 * o - v13]))
}
