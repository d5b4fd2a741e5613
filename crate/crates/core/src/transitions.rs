//! Phase-transition conditions and a root locator along one-parameter
//! weight families.
//!
//! Every condition is kept in the printed form, with `±` branches expanded
//! into separate entries so each root can be attributed to one branch. For
//! the free-fermion models each entry squared is the momentum-space
//! integrand at one of `θ ∈ {0, π}²`, which the tests check.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::freeenergy::{barreto_argument, kite_spectrum};
use crate::model::{CpKind, CreaseWeights, Staggering, StaggeredModel};
use crate::vertex::OddWeights;
use crate::{Error, Result};

/// Which printed condition list a residual set comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionSet {
    MiuraAsymmetric,
    /// `t`, `u` the crease inversions of `v`, `w`.
    MiuraSymmetric,
    Trapezoid,
    /// The constant integrand; no printed condition.
    BarretoMars,
    /// The integrand at `θ ∈ {0, π}²`; no printed condition.
    Kite,
    SquareHomogeneous,
    SquareColumnTwo,
    SquareBipartiteTwo,
    FourUnitOmega,
    CreaseWeights,
    SixteenVertex,
    /// Equal Maekawa-defect weights `ω`.
    SixteenVertexEqual,
}

impl ConditionSet {
    /// Degree of each residual as a homogeneous polynomial in the weights.
    pub fn degrees(self) -> &'static [u32] {
        match self {
            ConditionSet::MiuraAsymmetric => &[4; 4],
            ConditionSet::MiuraSymmetric => &[2, 2, 4, 4],
            ConditionSet::Trapezoid => &[2; 4],
            ConditionSet::BarretoMars => &[8],
            ConditionSet::Kite => &[4],
            ConditionSet::SquareHomogeneous => &[2, 2, 2, 4],
            ConditionSet::SquareColumnTwo => &[2; 4],
            ConditionSet::SquareBipartiteTwo => &[2; 4],
            ConditionSet::FourUnitOmega => &[4; 4],
            ConditionSet::CreaseWeights => &[8; 4],
            ConditionSet::SixteenVertex => &[1; 4],
            ConditionSet::SixteenVertexEqual => &[1; 2],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSet {
    pub set: ConditionSet,
    pub residuals: Vec<f64>,
}

impl ResidualSet {
    pub fn new(set: ConditionSet, residuals: Vec<f64>) -> Self {
        debug_assert_eq!(residuals.len(), set.degrees().len());
        ResidualSet { set, residuals }
    }
}

const PM: [f64; 2] = [1.0, -1.0];

fn valid(units: &[&OddWeights]) -> Result<()> {
    if units.iter().all(|u| u.is_valid()) {
        Ok(())
    } else {
        Err(Error::InvalidWeight)
    }
}

/// The two Miura-ori conditions, `+` then `−` branch of each. The two `±`
/// inside a condition move together; the mixed choices are not conditions
/// (the four entries are the square roots of the integrand at `{0, π}²`).
pub fn miura_residuals(t: &OddWeights, u: &OddWeights, v: &OddWeights, w: &OddWeights) -> Result<ResidualSet> {
    valid(&[t, u, v, w])?;
    let (t, u, v, w) = (|i| t.get(i), |i| u.get(i), |i| v.get(i), |i| w.get(i));
    let g = t(1) * v(2) * w(4) * u(3) + v(1) * w(3) * t(2) * u(4);
    let mut r = Vec::with_capacity(4);
    let first = g
        + (v(5) * w(6) + v(7) * w(8)) * (t(5) * u(6) + t(7) * u(8))
        + (v(6) * w(5) + v(8) * w(7)) * (t(6) * u(5) + t(8) * u(7));
    let p = (v(5) * w(7) - v(7) * w(5)) * (t(5) * u(7) - t(7) * u(5));
    let q = (v(6) * w(8) - v(8) * w(6)) * (t(6) * u(8) - t(8) * u(6));
    for s in PM {
        r.push(first + s * (p + q));
    }
    let p = (v(5) * w(7) + v(7) * w(5)) * (t(5) * u(7) + t(7) * u(5));
    let q = (v(6) * w(8) + v(8) * w(6)) * (t(6) * u(8) + t(8) * u(6));
    let rest = -(v(5) * w(6) - v(7) * w(8)) * (t(5) * u(6) - t(7) * u(8))
        - (v(6) * w(5) - v(8) * w(7)) * (t(6) * u(5) - t(8) * u(7));
    for s in PM {
        r.push(g + s * (p + q) + rest);
    }
    Ok(ResidualSet::new(ConditionSet::MiuraAsymmetric, r))
}

/// Miura-ori with `t`, `u` the crease inversions of `v`, `w`:
/// `v1w3 ± v2w4` and the two quartic conditions.
pub fn miura_symmetric_residuals(v: &OddWeights, w: &OddWeights) -> Result<ResidualSet> {
    valid(&[v, w])?;
    let (v, w) = (|i| v.get(i), |i| w.get(i));
    let sq = v(1) * v(1) * w(3) * w(3) + v(2) * v(2) * w(4) * w(4);
    Ok(ResidualSet::new(
        ConditionSet::MiuraSymmetric,
        alloc::vec![
            v(1) * w(3) + v(2) * w(4),
            v(1) * w(3) - v(2) * w(4),
            sq + 2.0 * (v(5) * w(6) + v(7) * w(8)) * (v(6) * w(5) + v(8) * w(7))
                - 2.0 * (v(5) * w(7) - v(7) * w(5)) * (v(6) * w(8) - v(8) * w(6)),
            sq - 2.0 * (v(5) * w(6) - v(7) * w(8)) * (v(6) * w(5) - v(8) * w(7))
                + 2.0 * (v(5) * w(7) + v(7) * w(5)) * (v(6) * w(8) + v(8) * w(6)),
        ],
    ))
}

/// `v1w3 + v2w4 ± (v5w7 + v6w8) ± (v7w5 + v8w6)` in the order `++`, `−−`, `+−`, `−+`.
pub fn trapezoid_residuals(v: &OddWeights, w: &OddWeights) -> Result<ResidualSet> {
    valid(&[v, w])?;
    let a = v.get(1) * w.get(3) + v.get(2) * w.get(4);
    let b = v.get(5) * w.get(7) + v.get(6) * w.get(8);
    let c = v.get(7) * w.get(5) + v.get(8) * w.get(6);
    Ok(ResidualSet::new(ConditionSet::Trapezoid, alloc::vec![a + b + c, a - b - c, a + b - c, a - b + c]))
}

/// Homogeneous square lattice. The first printed condition asks both
/// `v1v2 + v3v4` and `v5v6 + v7v8` to vanish; on the free-fermion surface
/// they are equal and the entry is the former.
pub fn homogeneous_residuals(v: &OddWeights) -> Result<ResidualSet> {
    valid(&[v])?;
    let v = |i| v.get(i);
    let a = v(1) * v(2) + v(3) * v(4);
    let b = v(5) * v(6) + v(7) * v(8);
    let c = v(1) * v(3) - v(2) * v(4);
    let d = v(5) * v(7) - v(6) * v(8);
    Ok(ResidualSet::new(
        ConditionSet::SquareHomogeneous,
        alloc::vec![a, v(1) * v(3) + v(2) * v(4), v(5) * v(7) + v(6) * v(8), a * b + c * c + d * d],
    ))
}

pub fn column_two_residuals(v: &OddWeights, w: &OddWeights) -> Result<ResidualSet> {
    valid(&[v, w])?;
    let (v, w) = (|i| v.get(i), |i| w.get(i));
    let a = (v(5) + v(8)) * (w(6) + w(7));
    let b = (v(6) - v(7)) * (w(5) - w(8));
    let c = (v(6) + v(7)) * (w(5) + w(8));
    let d = (v(5) - v(8)) * (w(6) - w(7));
    Ok(ResidualSet::new(ConditionSet::SquareColumnTwo, alloc::vec![a + b, a - b, c + d, c - d]))
}

pub fn bipartite_residuals(v: &OddWeights, w: &OddWeights) -> Result<ResidualSet> {
    valid(&[v, w])?;
    let (v, w) = (|i| v.get(i), |i| w.get(i));
    let a = v(1) * w(3) + v(2) * w(4);
    let b = v(3) * w(1) + v(4) * w(2);
    let c = v(5) * w(7) + v(6) * w(8);
    let d = v(7) * w(5) + v(8) * w(6);
    Ok(ResidualSet::new(
        ConditionSet::SquareBipartiteTwo,
        alloc::vec![-a + b + c + d, a - b + c + d, a + b - c + d, a + b + c - d],
    ))
}

/// `Ω1 … Ω4` of the four-unit column-staggered lattice.
pub fn omegas(t: &OddWeights, u: &OddWeights, v: &OddWeights, w: &OddWeights) -> [f64; 4] {
    let (t, u, v, w) = (|i| t.get(i), |i| u.get(i), |i| v.get(i), |i| w.get(i));
    let o1 = t(1) * u(1) * v(2) * w(2)
        + t(2) * u(2) * v(1) * w(1)
        + t(3) * u(3) * v(4) * w(4)
        + t(4) * u(4) * v(3) * w(3)
        + t(5) * u(7) * v(7) * w(5)
        + t(6) * u(8) * v(8) * w(6)
        + t(7) * u(5) * v(5) * w(7)
        + t(8) * u(6) * v(6) * w(8);
    let o2 = t(1) * u(1) * v(3) * w(3)
        + t(2) * u(2) * v(4) * w(4)
        + t(3) * u(3) * v(1) * w(1)
        + t(4) * u(4) * v(2) * w(2)
        + t(5) * u(7) * v(5) * w(7)
        + t(6) * u(8) * v(6) * w(8)
        + t(7) * u(5) * v(7) * w(5)
        + t(8) * u(6) * v(8) * w(6);
    let o3 = t(1) * u(3) * v(2) * w(4)
        + t(2) * v(1) * u(4) * w(3)
        + t(3) * u(1) * v(4) * w(2)
        + t(4) * u(2) * v(3) * w(1)
        + t(5) * u(6) * v(7) * w(8)
        + t(6) * u(5) * v(8) * w(7)
        + t(7) * u(8) * v(5) * w(6)
        + t(8) * u(7) * v(6) * w(5);
    let o4 = t(1) * u(3) * v(3) * w(1)
        + t(2) * u(4) * v(4) * w(2)
        + t(3) * u(1) * v(1) * w(3)
        + t(4) * u(2) * v(2) * w(4)
        + t(5) * u(6) * v(5) * w(6)
        + t(6) * u(5) * v(6) * w(5)
        + t(7) * u(8) * v(7) * w(8)
        + t(8) * u(7) * v(8) * w(7);
    [o1, o2, o3, o4]
}

/// `−Ω1 + Ω2 + Ω3 + Ω4` and its three sign permutations.
pub fn omega_residuals(t: &OddWeights, u: &OddWeights, v: &OddWeights, w: &OddWeights) -> Result<ResidualSet> {
    valid(&[t, u, v, w])?;
    let o = omegas(t, u, v, w);
    let s: f64 = o.iter().sum();
    Ok(ResidualSet::new(ConditionSet::FourUnitOmega, (0..4).map(|i| s - 2.0 * o[i]).collect()))
}

/// The two crease-weight conditions at unit vertex weights, `+` then `−`
/// branch of each; as for Miura-ori the two `±` of a condition move together.
pub fn crease_weight_residuals(c: &CreaseWeights) -> Result<ResidualSet> {
    let all = [c.a, c.b, c.c, c.d, c.e, c.f, c.g, c.h];
    if !all.iter().all(|p| p.m.is_finite() && p.v.is_finite() && p.m >= 0.0 && p.v >= 0.0) {
        return Err(Error::InvalidWeight);
    }
    let (am, av, bm, bv, cm, cv, dm, dv) = (c.a.m, c.a.v, c.b.m, c.b.v, c.c.m, c.c.v, c.d.m, c.d.v);
    let (em, ev, fm, fv, gm, gv, hm, hv) = (c.e.m, c.e.v, c.f.m, c.f.v, c.g.m, c.g.v, c.h.m, c.h.v);
    let x1 = (fm * hm - fv * hv) * (bm * dm - bv * dv);
    let x2 = (fm * hm + fv * hv) * (bm * dm + bv * dv);
    let x3 = (fm * hv - fv * hm) * (bm * dv - bv * dm);
    let x4 = (fm * hv + fv * hm) * (bm * dv + bv * dm);
    let p1 = am * cm * ev * gv + av * cv * em * gm;
    let p2 = am * cv * ev * gm + av * cm * em * gv;
    let p3 = am * cm * em * gm + av * cv * ev * gv;
    let p4 = am * cv * em * gv + av * cm * ev * gm;
    let mut r = Vec::with_capacity(4);
    for s in PM {
        r.push(s * (x1 * p1 + x3 * p3) - x2 * p2 - x4 * p4);
    }
    for s in PM {
        r.push(s * (x1 * p2 + x3 * p4) + x2 * p1 + x4 * p3);
    }
    Ok(ResidualSet::new(ConditionSet::CreaseWeights, r))
}

/// The four corners `θ ∈ {0, π}²` in the order `(0,0), (0,π), (π,0), (π,π)`.
pub const CORNERS: [(f64, f64); 4] = [(0.0, 0.0), (0.0, PI), (PI, 0.0), (PI, PI)];

/// The residual set that applies to `model`.
pub fn transition_residuals(model: &StaggeredModel) -> Result<ResidualSet> {
    model.validate()?;
    let (v, w, t, u) = (&model.v, &model.w, &model.t, &model.u);
    match (model.cp, model.staggering) {
        (CpKind::Miura, _) => miura_residuals(t, u, v, w),
        (CpKind::Trapezoid, _) => trapezoid_residuals(v, w),
        (CpKind::BarretoMars, _) => {
            Ok(ResidualSet::new(ConditionSet::BarretoMars, alloc::vec![barreto_argument(t, u, v, w)?]))
        }
        (CpKind::Kite, _) => {
            // effectively one-dimensional: only a degenerate transfer-matrix
            // spectrum is singular, corner zeros of the integrand are not
            Ok(ResidualSet::new(ConditionSet::Kite, vec![kite_spectrum(v, w)?.discriminant]))
        }
        (CpKind::SimpleSquare, Staggering::Homogeneous) => homogeneous_residuals(v),
        (CpKind::SimpleSquare, Staggering::ColumnTwo) => column_two_residuals(v, w),
        (CpKind::SimpleSquare, Staggering::BipartiteTwo) => bipartite_residuals(v, w),
        (CpKind::SimpleSquare, Staggering::ColumnFour) => omega_residuals(t, u, v, w),
    }
}

/// How a root was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// The residual changes sign; refined by bisection.
    SignChange,
    /// The residual touches zero without crossing; refined by bisecting its
    /// derivative.
    Tangent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub parameter: f64,
    /// Indices of every condition vanishing here.
    pub conditions: Vec<usize>,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub kind: RootKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocateOptions {
    /// Scan points on the interval.
    pub samples: usize,
    /// Space the scan evenly in `ln p` (requires a positive interval).
    pub log_spaced: bool,
    /// Roots closer than this are merged.
    pub merge_tol: f64,
    /// A tangent touch counts as a root when `|r| ≤ zero_tol · scale`, the
    /// scale being the largest `|r|` seen on the scan.
    pub zero_tol: f64,
}

impl Default for LocateOptions {
    fn default() -> Self {
        LocateOptions { samples: 4000, log_spaced: true, merge_tol: 1e-9, zero_tol: 1e-12 }
    }
}

/// Roots of the residuals of a weight family on `[lo, hi]`.
///
/// Parameters where `family` fails (negative or invalid weights) are treated
/// as non-physical and never bracket a root. Exact zeros on the scan grid,
/// sign changes and tangent touches are all reported.
pub fn locate_critical<F>(family: F, lo: f64, hi: f64, opts: &LocateOptions) -> Vec<CriticalPoint>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let n = opts.samples.max(3);
    let log = opts.log_spaced && lo > 0.0;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            if log {
                libm::exp(libm::log(lo) + s * (libm::log(hi) - libm::log(lo)))
            } else {
                lo + s * (hi - lo)
            }
        })
        .collect();
    let values: Vec<Option<Vec<f64>>> = grid.iter().map(|&p| family(p).ok()).collect();
    let ncond = values.iter().flatten().map(|r| r.len()).max().unwrap_or(0);
    let scale = values.iter().flatten().flat_map(|r| r.iter()).fold(0.0f64, |m, x| m.max(libm::fabs(*x)));
    let eval = |p: f64, k: usize| family(p).ok().map(|r| r[k]);

    let mut found: Vec<CriticalPoint> = Vec::new();
    for k in 0..ncond {
        let r = |i: usize| values[i].as_ref().map(|v| v[k]);
        for i in 0..n - 1 {
            let (Some(a), Some(b)) = (r(i), r(i + 1)) else { continue };
            if a == 0.0 {
                push(&mut found, grid[i], k, (grid[i], grid[i]), 0.0, RootKind::SignChange, opts);
            } else if (a < 0.0) != (b < 0.0) && b != 0.0 {
                if let Some((p, res, br)) = bisect(|x| eval(x, k), grid[i], grid[i + 1], a) {
                    push(&mut found, p, k, br, res, RootKind::SignChange, opts);
                }
            }
            if i > 0 {
                let Some(c) = r(i - 1) else { continue };
                // local minimum of |r| without a crossing
                if (c < 0.0) == (a < 0.0)
                    && (b < 0.0) == (a < 0.0)
                    && libm::fabs(a) < libm::fabs(c)
                    && libm::fabs(a) <= libm::fabs(b)
                {
                    if let Some((p, res, br)) = tangent(|x| eval(x, k), grid[i - 1], grid[i + 1]) {
                        if libm::fabs(res) <= opts.zero_tol * scale.max(1.0) {
                            push(&mut found, p, k, br, res, RootKind::Tangent, opts);
                        }
                    }
                }
            }
        }
        if let Some(Some(last)) = values.last().map(|v| v.as_ref().map(|v| v[k])) {
            if last == 0.0 {
                push(&mut found, grid[n - 1], k, (grid[n - 1], grid[n - 1]), 0.0, RootKind::SignChange, opts);
            }
        }
    }
    found.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
    found
}

fn push(
    found: &mut Vec<CriticalPoint>,
    p: f64,
    k: usize,
    bracket: (f64, f64),
    residual: f64,
    kind: RootKind,
    opts: &LocateOptions,
) {
    if let Some(c) = found.iter_mut().find(|c| libm::fabs(c.parameter - p) <= opts.merge_tol) {
        if !c.conditions.contains(&k) {
            c.conditions.push(k);
        }
        if libm::fabs(residual) < libm::fabs(c.residual) {
            c.residual = residual;
        }
        return;
    }
    found.push(CriticalPoint { parameter: p, conditions: alloc::vec![k], bracket, residual, kind });
}

fn bisect<G: Fn(f64) -> Option<f64>>(g: G, mut a: f64, mut b: f64, fa: f64) -> Option<(f64, f64, (f64, f64))> {
    let neg_a = fa < 0.0;
    let bracket = (a, b);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = g(m)?;
        if fm == 0.0 {
            return Some((m, 0.0, bracket));
        }
        if (fm < 0.0) == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
    let (ga, gb) = (g(a)?, g(b)?);
    Some(if libm::fabs(ga) <= libm::fabs(gb) { (a, ga, bracket) } else { (b, gb, bracket) })
}

/// Touch point of `g` in `[a, b]`: bisection on a centred-difference slope.
fn tangent<G: Fn(f64) -> Option<f64>>(g: G, a: f64, b: f64) -> Option<(f64, f64, (f64, f64))> {
    // truncation shifts the slope zero by O(h²), rounding by O(ε/h)
    let h = 1e-5 * libm::fabs(a + b).max(b - a);
    let slope = |x: f64| Some(g(x + h)? - g(x - h)?);
    let (mut lo, mut hi) = (a, b);
    let (sa, sb) = (slope(lo)?, slope(hi)?);
    if (sa < 0.0) == (sb < 0.0) {
        return None;
    }
    let neg_lo = sa < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        let s = slope(m)?;
        if s == 0.0 {
            lo = m;
            hi = m;
            break;
        }
        if (s < 0.0) == neg_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
    let p = 0.5 * (lo + hi);
    Some((p, g(p)?, (a, b)))
}
