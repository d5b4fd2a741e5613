//! Dimer (Pfaffian) solution of free-fermion odd 8-vertex models.
//!
//! Each vertex becomes a five-node cluster `U D L R C`; lattice edges join
//! `R` to the right neighbour's `L` and `U` to the upper neighbour's `D`.
//! Bond weights `z1..z8` inside a cluster reproduce the eight vertex weights
//! exactly when the unit is free-fermion.
//!
//! Finite tori are handled by four Pfaffians with periodic/antiperiodic
//! boundary signs, either directly in real space or factorised over
//! momenta. The horizontal bond sign is `+1` and the vertical one `(-1)^x`,
//! which needs an even number of columns.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::lattice::Shape;
use crate::linalg::{det_complex, pfaffian_real};
use crate::model::{Staggering, StaggeredModel};
use crate::quadrature::{periodic_log_mean, QuadOptions, QuadResult};
use crate::vertex::OddWeights;
use crate::{Error, Result};

const U: usize = 0;
const D: usize = 1;
const L: usize = 2;
const R: usize = 3;
const C: usize = 4;

/// Cluster bond weights `z1..z8`, stored 0-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BondWeights(pub [f64; 8]);

impl BondWeights {
    #[inline]
    pub fn z(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    /// The vertex weights the cluster produces.
    pub fn to_vertex(&self) -> OddWeights {
        let z = |i| self.z(i);
        OddWeights([
            z(1) * z(8) + z(3) * z(7),
            z(6),
            z(4) * z(8) + z(2) * z(7),
            z(5),
            z(1) * z(6) + z(4) * z(5),
            z(8),
            z(3) * z(6) + z(2) * z(5),
            z(7),
        ])
    }

    /// The antisymmetric 5×5 cluster block in `U D L R C` order.
    pub fn block(&self) -> [[f64; 5]; 5] {
        let z = |i| self.z(i);
        let mut t = [[0.0; 5]; 5];
        let upper = [
            (U, L, z(1)),
            (U, R, z(3)),
            (U, C, z(5)),
            (D, L, z(4)),
            (D, R, z(2)),
            (D, C, -z(6)),
            (L, C, -z(7)),
            (R, C, z(8)),
        ];
        for (i, j, val) in upper {
            t[i][j] += val;
            t[j][i] -= val;
        }
        t
    }
}

/// Bond weights for a free-fermion unit.
///
/// With `v2·v6 ≠ 0` the gauge `z2 = 1` is used. Otherwise `z5..z8` are fixed
/// by `v4, v2, v8, v6` and the remaining linear system for `z1..z4` is solved
/// by pivoted elimination with free unknowns set to zero.
pub fn vertex_to_bond(w: &OddWeights) -> Result<BondWeights> {
    if !w.is_valid() {
        return Err(Error::InvalidWeight);
    }
    gauge(w)
}

/// As [`vertex_to_bond`] but for real weights of either sign, which arise
/// from weak-graph images. The Pfaffian expansion does not care about signs.
pub fn vertex_to_bond_signed(w: &OddWeights) -> Result<BondWeights> {
    if !w.0.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidWeight);
    }
    gauge(w)
}

fn gauge(w: &OddWeights) -> Result<BondWeights> {
    if !w.is_free_fermion(1e-10) {
        return Err(Error::NotFreeFermion { residual: w.free_fermion_residual() });
    }
    let v = |i| w.get(i);
    let z = if v(2) != 0.0 && v(6) != 0.0 {
        let z1 = (v(4) * v(8) + v(5) * v(6) - v(3) * v(4)) / (v(2) * v(6));
        BondWeights([
            z1,
            1.0,
            (v(7) - v(4)) / v(2),
            (v(3) - v(8)) / v(6),
            v(4),
            v(2),
            v(8),
            v(6),
        ])
    } else {
        general_gauge(w)?
    };
    let back = z.to_vertex();
    let scale = w.0.iter().fold(0.0f64, |a, b| a.max(libm::fabs(*b))).max(f64::MIN_POSITIVE);
    for i in 0..8 {
        if libm::fabs(back.0[i] - w.0[i]) > 1e-10 * scale {
            return Err(Error::GaugeFailure);
        }
    }
    Ok(z)
}

fn general_gauge(w: &OddWeights) -> Result<BondWeights> {
    let v = |i| w.get(i);
    let (z5, z6, z7, z8) = (v(4), v(2), v(8), v(6));
    // unknowns z1 z2 z3 z4
    let mut a = [
        [z8, 0.0, z7, 0.0, v(1)],
        [0.0, z7, 0.0, z8, v(3)],
        [z6, 0.0, 0.0, z5, v(5)],
        [0.0, z5, z6, 0.0, v(7)],
    ];
    let scale = a.iter().flat_map(|r| r[..4].iter()).fold(0.0f64, |m, x| m.max(libm::fabs(*x)));
    let tol = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let mut pivot_col = [usize::MAX; 4];
    let mut row = 0;
    for col in 0..4 {
        let p = (row..4).max_by(|&i, &j| libm::fabs(a[i][col]).total_cmp(&libm::fabs(a[j][col])));
        let Some(p) = p else { break };
        if libm::fabs(a[p][col]) <= tol {
            continue;
        }
        a.swap(row, p);
        for r in 0..4 {
            if r != row {
                let f = a[r][col] / a[row][col];
                for c in 0..5 {
                    a[r][c] -= f * a[row][c];
                }
            }
        }
        pivot_col[row] = col;
        row += 1;
        if row == 4 {
            break;
        }
    }
    let mut x = [0.0; 4];
    for r in 0..row {
        let c = pivot_col[r];
        x[c] = a[r][4] / a[r][c];
    }
    Ok(BondWeights([x[0], x[1], x[2], x[3], z5, z6, z7, z8]))
}

/// A periodic cell of vertices for Bloch matrices.
#[derive(Clone, Debug)]
pub struct Cell {
    pub sites: Vec<(i64, i64)>,
    /// Translation carrying phase `φ1`.
    pub a1: (i64, i64),
    /// Translation carrying phase `φ2`.
    pub a2: (i64, i64),
    pub bonds: Vec<BondWeights>,
    /// Sign of the vertical bond leaving site `(x, y)` upwards.
    pub vertical_sign: fn(i64, i64) -> f64,
}

fn alternating_x(x: i64, _y: i64) -> f64 {
    if x.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn alternating_xy_odd(x: i64, y: i64) -> f64 {
    if (x + y).rem_euclid(2) == 1 {
        1.0
    } else {
        -1.0
    }
}

impl Cell {
    /// Two sites `v (0,0)`, `w (1,0)`; `a1 = (0,1)`, `a2 = (2,0)`.
    pub fn column_two(v: &OddWeights, w: &OddWeights) -> Result<Cell> {
        Ok(Cell {
            sites: vec![(0, 0), (1, 0)],
            a1: (0, 1),
            a2: (2, 0),
            bonds: vec![vertex_to_bond(v)?, vertex_to_bond(w)?],
            vertical_sign: alternating_x,
        })
    }

    /// [`Cell::column_two`] for weights of either sign.
    pub fn column_two_signed(v: &OddWeights, w: &OddWeights) -> Result<Cell> {
        Ok(Cell {
            sites: vec![(0, 0), (1, 0)],
            a1: (0, 1),
            a2: (2, 0),
            bonds: vec![vertex_to_bond_signed(v)?, vertex_to_bond_signed(w)?],
            vertical_sign: alternating_x,
        })
    }

    /// Four sites `v w t u` on the 2×2 block; `a1 = (0,2)`, `a2 = (2,0)`.
    pub fn four_unit(units: &[OddWeights; 4]) -> Result<Cell> {
        let mut bonds = Vec::with_capacity(4);
        for u in units {
            bonds.push(vertex_to_bond(u)?);
        }
        Ok(Cell {
            sites: vec![(0, 0), (1, 0), (0, 1), (1, 1)],
            a1: (0, 2),
            a2: (2, 0),
            bonds,
            vertical_sign: alternating_x,
        })
    }

    /// Two sites on the checkerboard cell, `a1 = (1,1)`, `a2 = (1,-1)`.
    pub fn bipartite(v: &OddWeights, w: &OddWeights) -> Result<Cell> {
        Ok(Cell {
            sites: vec![(0, 0), (1, 0)],
            a1: (1, 1),
            a2: (1, -1),
            bonds: vec![vertex_to_bond(v)?, vertex_to_bond(w)?],
            vertical_sign: alternating_xy_odd,
        })
    }

    /// The whole torus as one cell, sites in row-major order.
    pub fn torus(model: &StaggeredModel, shape: Shape) -> Result<Cell> {
        let mut sites = Vec::with_capacity(shape.sites());
        let mut bonds = Vec::with_capacity(shape.sites());
        let mut cache: [Option<BondWeights>; 4] = [None; 4];
        for y in 0..shape.m {
            for x in 0..shape.n {
                let s = model.staggering.site(x, y);
                let b = match cache[s.slot()] {
                    Some(b) => b,
                    None => {
                        let b = vertex_to_bond(model.unit(s))?;
                        cache[s.slot()] = Some(b);
                        b
                    }
                };
                sites.push((x as i64, y as i64));
                bonds.push(b);
            }
        }
        Ok(Cell {
            sites,
            a1: (0, shape.m as i64),
            a2: (shape.n as i64, 0),
            bonds,
            vertical_sign: alternating_x,
        })
    }

    pub fn dim(&self) -> usize {
        5 * self.sites.len()
    }

    fn locate(&self, p: (i64, i64)) -> (usize, i64, i64) {
        let (a1, a2) = (self.a1, self.a2);
        let det = a1.0 * a2.1 - a2.0 * a1.1;
        for (j, c) in self.sites.iter().enumerate() {
            let d = (p.0 - c.0, p.1 - c.1);
            let n1 = d.0 * a2.1 - a2.0 * d.1;
            let n2 = a1.0 * d.1 - d.0 * a1.1;
            if n1 % det == 0 && n2 % det == 0 {
                return (j, n1 / det, n2 / det);
            }
        }
        unreachable!("cell does not tile the plane")
    }

    /// Bloch matrix at phases `(φ1, φ2)`, row-major `dim × dim`.
    pub fn bloch(&self, phi1: f64, phi2: f64) -> Vec<Complex64> {
        let n = self.dim();
        let mut k = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, (&(x, y), b)) in self.sites.iter().zip(&self.bonds).enumerate() {
            let t = b.block();
            for (p, row) in t.iter().enumerate() {
                for (q, &val) in row.iter().enumerate() {
                    k[(5 * i + p) * n + 5 * i + q] += val;
                }
            }
            let links = [((x + 1, y), R, L, 1.0), ((x, y + 1), U, D, (self.vertical_sign)(x, y))];
            for (target, from, to, sign) in links {
                let (j, m1, m2) = self.locate(target);
                let ph = Complex64::from_polar(1.0, m1 as f64 * phi1 + m2 as f64 * phi2);
                k[(5 * i + from) * n + 5 * j + to] += ph * sign;
                k[(5 * j + to) * n + 5 * i + from] -= ph.conj() * sign;
            }
        }
        k
    }

    /// `det K(φ1, φ2)`.
    pub fn det(&self, phi1: f64, phi2: f64) -> Complex64 {
        let mut k = self.bloch(phi1, phi2);
        det_complex(&mut k, self.dim())
    }

    /// Pfaffian of the Bloch matrix at a real point (`φ ∈ {0, π}`).
    pub fn pfaffian_real(&self, phi1: f64, phi2: f64) -> f64 {
        let k = self.bloch(phi1, phi2);
        let mut re: Vec<f64> = k.iter().map(|c| c.re).collect();
        pfaffian_real(&mut re, self.dim())
    }
}

/// The 20×20 four-unit matrix at momentum `(θ1, θ2)`; `θ1` runs along the
/// columns of the lattice (vertical translations), `θ2` along rows.
pub fn cluster_matrix(units: &[OddWeights; 4], theta1: f64, theta2: f64) -> Result<Vec<Complex64>> {
    Ok(Cell::four_unit(units)?.bloch(theta1, theta2))
}

/// `D(θ1, θ2)` of the four-unit cell, coarser staggerings embedded by
/// duplicating weights.
pub fn momentum_determinant(model: &StaggeredModel, theta1: f64, theta2: f64) -> Result<Complex64> {
    Ok(Cell::four_unit(&model.four_units())?.det(theta1, theta2))
}

fn require_free_fermion(model: &StaggeredModel) -> Result<()> {
    model.validate()?;
    for &s in model.staggering.sites() {
        let u = model.unit(s);
        if !u.is_free_fermion(1e-10) {
            return Err(Error::NotFreeFermion { residual: u.free_fermion_residual() });
        }
    }
    Ok(())
}

fn torus_sign(shape: Shape) -> f64 {
    if (shape.sites() / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn combine(p: [[f64; 2]; 2], shape: Shape) -> f64 {
    // p[a][b]: a = 0 periodic / 1 antiperiodic vertically, b likewise horizontally
    torus_sign(shape) * 0.5 * (-p[0][0] + p[0][1] + p[1][0] + p[1][1])
}

fn check_shape(model: &StaggeredModel, shape: Shape) -> Result<()> {
    if !model.staggering.fits(shape) || shape.n % 2 != 0 {
        return Err(Error::IncompatibleShape);
    }
    Ok(())
}

/// Finite-torus partition function from four real-space Pfaffians.
#[allow(non_snake_case)]
pub fn finite_Z_realspace(model: &StaggeredModel, shape: Shape) -> Result<f64> {
    require_free_fermion(model)?;
    check_shape(model, shape)?;
    let cell = Cell::torus(model, shape)?;
    let mut p = [[0.0; 2]; 2];
    for (a, row) in p.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = cell.pfaffian_real(PI * a as f64, PI * b as f64);
        }
    }
    Ok(combine(p, shape))
}

/// Sector product over a momentum grid of `n1 × n2` points with half-integer
/// shifts `d1, d2 ∈ {0, ½}`: a determinant per conjugate pair and a real
/// Pfaffian at each self-conjugate momentum.
fn sector_product(cell: &Cell, n1: usize, n2: usize, d1: f64, d2: f64) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    let key = |a: f64, n: usize| -> i64 { (libm::round(2.0 * a) as i64).rem_euclid(2 * n as i64) };
    let mut done: Vec<(i64, i64)> = Vec::new();
    for a in 0..n1 {
        for b in 0..n2 {
            let ka = a as f64 + d1;
            let kb = b as f64 + d2;
            let k = (key(ka, n1), key(kb, n2));
            if done.contains(&k) {
                continue;
            }
            let kc = (key(-ka, n1), key(-kb, n2));
            let phi1 = 2.0 * PI * ka / n1 as f64;
            let phi2 = 2.0 * PI * kb / n2 as f64;
            if k == kc {
                prod *= cell.pfaffian_real(phi1, phi2);
                done.push(k);
            } else {
                prod *= cell.det(phi1, phi2);
                done.push(k);
                done.push(kc);
            }
        }
    }
    prod
}

/// Finite-torus partition function from momentum-space sector products.
/// Homogeneous and column-two models use the two-site cell, the others the
/// four-unit cell.
#[allow(non_snake_case)]
pub fn finite_Z(model: &StaggeredModel, shape: Shape) -> Result<f64> {
    require_free_fermion(model)?;
    check_shape(model, shape)?;
    let (cell, n1, n2) = match model.staggering {
        Staggering::Homogeneous | Staggering::ColumnTwo => {
            (Cell::column_two(&model.v, &model.w)?, shape.m, shape.n / 2)
        }
        Staggering::BipartiteTwo | Staggering::ColumnFour => {
            if shape.m % 2 != 0 {
                return Err(Error::IncompatibleShape);
            }
            (Cell::four_unit(&model.four_units())?, shape.m / 2, shape.n / 2)
        }
    };
    finite_Z_cell(&cell, n1, n2, shape)
}

/// Sector combination for a cell repeated `n1 × n2` times along `a1, a2` to
/// fill `shape`. The caller is responsible for the cell tiling the torus.
#[allow(non_snake_case)]
pub fn finite_Z_cell(cell: &Cell, n1: usize, n2: usize, shape: Shape) -> Result<f64> {
    if shape.n % 2 != 0 || n1 * n2 * cell.sites.len() != shape.sites() {
        return Err(Error::IncompatibleShape);
    }
    let mut p = [[0.0; 2]; 2];
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for (a, row) in p.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let c = sector_product(cell, n1, n2, 0.5 * a as f64, 0.5 * b as f64);
            scale = scale.max(c.norm());
            worst = worst.max(libm::fabs(c.im));
            *slot = c.re;
        }
    }
    if worst > 1e-8 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::SectorSign { imag: worst });
    }
    Ok(combine(p, shape))
}

/// Momentum-space integrand `det K` of the cell natural to the staggering,
/// with the number of vertices per cell.
pub fn natural_cell(model: &StaggeredModel) -> Result<Cell> {
    require_free_fermion(model)?;
    match model.staggering {
        Staggering::Homogeneous | Staggering::ColumnTwo => Cell::column_two(&model.v, &model.w),
        Staggering::BipartiteTwo | Staggering::ColumnFour => Cell::four_unit(&model.four_units()),
    }
}

/// Per-site `-βf = lim ln Z / MN` from `½ ⟨ln det K⟩ / (sites per cell)`.
pub fn thermo_free_energy(model: &StaggeredModel, opts: &QuadOptions) -> Result<QuadResult> {
    let cell = natural_cell(model)?;
    let per = 2.0 * cell.sites.len() as f64;
    let mut r = periodic_log_mean(|a, b| cell.det(a, b).re, opts);
    r.value /= per;
    r.previous /= per;
    Ok(r)
}
