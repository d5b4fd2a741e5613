//! Crease-pattern catalogue, staggered weight sets and crease-weight transforms.
//!
//! Unit cells put `v` at the origin. Column-four staggering uses
//! `v (0,0)`, `w (1,0)`, `t (0,1)`, `u (1,1)`; column-two alternates `v`/`w`
//! along a row; bipartite puts `v` where `x + y` is even.

use crate::lattice::{Shape, TorusConfig};
use crate::vertex::{Crease, Neighborhood, OddWeights, ODD_BITS};
use crate::{Error, Result};

/// The five crease patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CpKind {
    Miura,
    Trapezoid,
    BarretoMars,
    Kite,
    SimpleSquare,
}

/// How the weight sets repeat over the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Staggering {
    Homogeneous,
    ColumnTwo,
    BipartiteTwo,
    ColumnFour,
}

/// Sublattice class of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    V,
    W,
    T,
    U,
}

impl Site {
    pub const ALL: [Site; 4] = [Site::V, Site::W, Site::T, Site::U];

    pub fn slot(self) -> usize {
        match self {
            Site::V => 0,
            Site::W => 1,
            Site::T => 2,
            Site::U => 3,
        }
    }
}

impl Staggering {
    pub fn site(self, x: usize, y: usize) -> Site {
        match self {
            Staggering::Homogeneous => Site::V,
            Staggering::ColumnTwo => {
                if x % 2 == 0 {
                    Site::V
                } else {
                    Site::W
                }
            }
            Staggering::BipartiteTwo => {
                if (x + y) % 2 == 0 {
                    Site::V
                } else {
                    Site::W
                }
            }
            Staggering::ColumnFour => match (x % 2, y % 2) {
                (0, 0) => Site::V,
                (1, 0) => Site::W,
                (0, _) => Site::T,
                _ => Site::U,
            },
        }
    }

    /// Row and column periods of the unit cell.
    pub fn period(self) -> (usize, usize) {
        match self {
            Staggering::Homogeneous => (1, 1),
            Staggering::ColumnTwo => (1, 2),
            Staggering::BipartiteTwo | Staggering::ColumnFour => (2, 2),
        }
    }

    pub fn fits(self, shape: Shape) -> bool {
        let (pm, pn) = self.period();
        shape.m % pm == 0 && shape.n % pn == 0
    }

    pub fn sites(self) -> &'static [Site] {
        match self {
            Staggering::Homogeneous => &[Site::V],
            Staggering::ColumnTwo | Staggering::BipartiteTwo => &[Site::V, Site::W],
            Staggering::ColumnFour => &Site::ALL,
        }
    }
}

impl CpKind {
    pub const ALL: [CpKind; 5] =
        [CpKind::Miura, CpKind::Trapezoid, CpKind::BarretoMars, CpKind::Kite, CpKind::SimpleSquare];

    /// The staggering the pattern's angles force.
    pub fn natural_staggering(self) -> Staggering {
        match self {
            CpKind::Miura | CpKind::BarretoMars => Staggering::ColumnFour,
            CpKind::Trapezoid | CpKind::Kite => Staggering::BipartiteTwo,
            CpKind::SimpleSquare => Staggering::ColumnTwo,
        }
    }

    /// Disallowed odd indices at a site class. Bipartite patterns treat `t`
    /// as `w` and `u` as `v`.
    pub fn disallowed(self, site: Site) -> &'static [usize] {
        use Site::*;
        match (self, site) {
            (CpKind::Miura, V | T) => &[3, 4],
            (CpKind::Miura, W | U) => &[1, 2],
            (CpKind::Trapezoid, V | U) => &[3, 4],
            (CpKind::Trapezoid, W | T) => &[1, 2],
            (CpKind::BarretoMars, V) => &[3, 4, 5, 6],
            (CpKind::BarretoMars, W) => &[1, 2, 5, 6],
            (CpKind::BarretoMars, T) => &[3, 4, 7, 8],
            (CpKind::BarretoMars, U) => &[1, 2, 7, 8],
            (CpKind::Kite, V | U) => &[3, 4, 5, 6],
            (CpKind::Kite, W | T) => &[1, 2, 7, 8],
            (CpKind::SimpleSquare, _) => &[],
        }
    }

    pub fn allowed(self, site: Site, index: usize) -> bool {
        !self.disallowed(site).contains(&index)
    }

    /// Allowed-weight mask over indices 1..=8 (entry `i-1`).
    pub fn mask(self, site: Site) -> [bool; 8] {
        let mut m = [true; 8];
        for &i in self.disallowed(site) {
            m[i - 1] = false;
        }
        m
    }

    /// Ground-state index at each site class. The simple square has no forced ground
    /// state; a column pattern with straight valley verticals is used as reference.
    pub fn ground_index(self, site: Site) -> usize {
        use Site::*;
        match (self, site) {
            (CpKind::Miura, V) => 1,
            (CpKind::Miura, W) => 3,
            (CpKind::Miura, T) => 2,
            (CpKind::Miura, U) => 4,
            (CpKind::Trapezoid, V | U) => 1,
            (CpKind::Trapezoid, W | T) => 3,
            (CpKind::BarretoMars, V) => 7,
            (CpKind::BarretoMars, W) => 8,
            (CpKind::BarretoMars, T) => 5,
            (CpKind::BarretoMars, U) => 6,
            (CpKind::Kite, V | U) => 8,
            (CpKind::Kite, W | T) => 6,
            (CpKind::SimpleSquare, V | T) => 5,
            (CpKind::SimpleSquare, W | U) => 7,
        }
    }

    /// Whether fully reversed vertices carry the extra factor 2 forced by the
    /// free-fermion condition.
    fn doubles_full_reversal(self) -> bool {
        matches!(self, CpKind::Miura | CpKind::Trapezoid)
    }

    /// Ground-state crease assignment on a torus tiled by the natural cell.
    pub fn ground_state(self, shape: Shape) -> Result<TorusConfig> {
        let st = self.natural_staggering();
        if !st.fits(shape) {
            return Err(Error::IncompatibleShape);
        }
        let mut cfg = TorusConfig::uniform(shape, Crease::Valley);
        for y in 0..shape.m {
            for x in 0..shape.n {
                let nb = Neighborhood::from_bits(ODD_BITS[self.ground_index(st.site(x, y)) - 1]);
                cfg.edges[shape.right_edge(x, y)] = nb.right;
                cfg.edges[shape.up_edge(x, y)] = nb.up;
            }
        }
        debug_assert!((0..shape.m).all(|y| (0..shape.n).all(|x| {
            let g = ODD_BITS[self.ground_index(st.site(x, y)) - 1];
            cfg.neighborhood(x, y).bits() == g
        })));
        Ok(cfg)
    }
}

/// Up to four weight sets on a staggering. Unused slots are ignored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaggeredModel {
    pub cp: CpKind,
    pub staggering: Staggering,
    pub v: OddWeights,
    pub w: OddWeights,
    pub t: OddWeights,
    pub u: OddWeights,
}

impl StaggeredModel {
    pub fn new(cp: CpKind, staggering: Staggering, units: &[OddWeights]) -> Result<Self> {
        let need = staggering.sites().len();
        if units.len() != need {
            return Err(Error::IncompatibleShape);
        }
        let pick = |i: usize| units[i.min(need - 1)];
        let (v, w, t, u) = match staggering {
            Staggering::Homogeneous => (pick(0), pick(0), pick(0), pick(0)),
            Staggering::ColumnTwo => (pick(0), pick(1), pick(0), pick(1)),
            Staggering::BipartiteTwo => (pick(0), pick(1), pick(1), pick(0)),
            Staggering::ColumnFour => (pick(0), pick(1), pick(2), pick(3)),
        };
        let m = StaggeredModel { cp, staggering, v, w, t, u };
        m.validate()?;
        Ok(m)
    }

    /// Simple-square model with a single weight set.
    pub fn homogeneous(v: OddWeights) -> Result<Self> {
        Self::new(CpKind::SimpleSquare, Staggering::Homogeneous, &[v])
    }

    pub fn unit(&self, site: Site) -> &OddWeights {
        match site {
            Site::V => &self.v,
            Site::W => &self.w,
            Site::T => &self.t,
            Site::U => &self.u,
        }
    }

    pub fn unit_at(&self, x: usize, y: usize) -> &OddWeights {
        self.unit(self.staggering.site(x, y))
    }

    /// Weights in the column-four slots `[v, w, t, u]`, duplicating when the
    /// staggering is coarser.
    pub fn four_units(&self) -> [OddWeights; 4] {
        [self.v, self.w, self.t, self.u]
    }

    /// Non-negative finite weights, zero on every masked index.
    pub fn validate(&self) -> Result<()> {
        for &site in self.staggering.sites() {
            let u = self.unit(site);
            if !u.is_valid() {
                return Err(Error::InvalidWeight);
            }
            for &i in self.cp.disallowed(site) {
                if u.get(i) != 0.0 {
                    return Err(Error::MaskViolation { site, index: i });
                }
            }
        }
        if self.staggering == Staggering::BipartiteTwo && (self.t != self.w || self.u != self.v) {
            return Err(Error::IncompatibleShape);
        }
        Ok(())
    }

    /// Largest |free-fermion residual| over the units in use.
    pub fn free_fermion_residual(&self) -> f64 {
        self.staggering
            .sites()
            .iter()
            .map(|&s| libm::fabs(self.unit(s).free_fermion_residual()))
            .fold(0.0, f64::max)
    }

    pub fn is_free_fermion(&self, rel_tol: f64) -> bool {
        self.staggering.sites().iter().all(|&s| self.unit(s).is_free_fermion(rel_tol))
    }

    /// Re-express on the column-four cell.
    pub fn promoted(&self) -> StaggeredModel {
        StaggeredModel { staggering: Staggering::ColumnFour, ..*self }
    }

    /// Replace every weight with its `p`-th power.
    pub fn powered(&self, p: i32) -> StaggeredModel {
        let pw = |u: &OddWeights| OddWeights(u.0.map(|x| libm::pow(x, p as f64)));
        StaggeredModel { v: pw(&self.v), w: pw(&self.w), t: pw(&self.t), u: pw(&self.u), ..*self }
    }
}

/// The one-parameter defect family: ground-state weights 1, each reversed crease
/// contributing a factor `y` split evenly over its two vertices. Miura and
/// trapezoid fully reversed vertices carry the factor 2 their free-fermion
/// condition forces.
pub fn symmetric_defect_weights(cp: CpKind, y: f64) -> Result<StaggeredModel> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidWeight);
    }
    Ok(defect_family(cp, y))
}

/// As [`symmetric_defect_weights`] but also admits `y = 0` (ground state only).
pub fn defect_family(cp: CpKind, y: f64) -> StaggeredModel {
    let st = cp.natural_staggering();
    let mut units = [OddWeights::ZERO; 4];
    for site in Site::ALL {
        let g = ODD_BITS[cp.ground_index(site) - 1];
        let mut w = OddWeights::ZERO;
        for i in 1..=8 {
            if !cp.allowed(site, i) {
                continue;
            }
            let d = (ODD_BITS[i - 1] ^ g).count_ones();
            let mut val = match d {
                0 => 1.0,
                2 => y,
                _ => y * y,
            };
            if d == 4 && cp.doubles_full_reversal() {
                val *= 2.0;
            }
            w.set(i, val);
        }
        units[site.slot()] = w;
    }
    let [v, w, t, u] = units;
    StaggeredModel { cp, staggering: st, v, w, t, u }
}

/// Mountain and valley weights of one crease.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CreasePair {
    pub m: f64,
    pub v: f64,
}

impl CreasePair {
    pub const ONE: CreasePair = CreasePair { m: 1.0, v: 1.0 };

    #[inline]
    fn of(&self, c: Crease) -> f64 {
        match c {
            Crease::Mountain => self.m,
            Crease::Valley => self.v,
        }
    }
}

/// Crease weights `a..h` on the four-vertex unit. `a`, `b` are the lower and
/// right creases of `v`; `c`, `d` of `w`; `e`, `f` of `t`; `g`, `h` of `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CreaseWeights {
    pub a: CreasePair,
    pub b: CreasePair,
    pub c: CreasePair,
    pub d: CreasePair,
    pub e: CreasePair,
    pub f: CreasePair,
    pub g: CreasePair,
    pub h: CreasePair,
}

impl CreaseWeights {
    pub const ONE: CreaseWeights = CreaseWeights {
        a: CreasePair::ONE,
        b: CreasePair::ONE,
        c: CreasePair::ONE,
        d: CreasePair::ONE,
        e: CreasePair::ONE,
        f: CreasePair::ONE,
        g: CreasePair::ONE,
        h: CreasePair::ONE,
    };

    pub fn is_valid(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h]
            .iter()
            .all(|p| p.m > 0.0 && p.v > 0.0 && p.m.is_finite() && p.v.is_finite())
    }

    fn lower_right(&self, site: Site) -> (CreasePair, CreasePair) {
        match site {
            Site::V => (self.a, self.b),
            Site::W => (self.c, self.d),
            Site::T => (self.e, self.f),
            Site::U => (self.g, self.h),
        }
    }
}

/// Multiply every vertex weight by the weights of its lower and right creases.
/// The result lives on the column-four cell.
pub fn apply_crease_weights(m: &StaggeredModel, c: &CreaseWeights) -> StaggeredModel {
    let mut out = m.promoted();
    for site in Site::ALL {
        let (lower, right) = c.lower_right(site);
        let unit = match site {
            Site::V => &mut out.v,
            Site::W => &mut out.w,
            Site::T => &mut out.t,
            Site::U => &mut out.u,
        };
        for i in 1..=8 {
            let nb = Neighborhood::from_bits(ODD_BITS[i - 1]);
            let val = unit.get(i) * lower.of(nb.down) * right.of(nb.right);
            unit.set(i, val);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miura_family_at_half() {
        let m = symmetric_defect_weights(CpKind::Miura, 0.5).unwrap();
        assert_eq!(m.v.0, [1.0, 0.5, 0.0, 0.0, 0.5, 0.5, 0.5, 0.5]);
        assert_eq!(m.t, m.v.crease_reversed());
        assert_eq!(m.t.get(2), 1.0);
        assert_eq!(m.w.get(3), 1.0);
        assert_eq!(m.u.get(4), 1.0);
        assert!(m.is_free_fermion(1e-14));
        m.validate().unwrap();
    }

    #[test]
    fn barreto_family() {
        let y = 0.7;
        let m = symmetric_defect_weights(CpKind::BarretoMars, y).unwrap();
        for (u, g, full) in [(m.t, 5, 6), (m.u, 6, 5), (m.v, 7, 8), (m.w, 8, 7)] {
            assert_eq!(u.get(g), 1.0);
            assert!((u.get(full) - y * y).abs() < 1e-15);
        }
        for (u, idx) in [(m.t, [1, 2]), (m.u, [3, 4]), (m.v, [1, 2]), (m.w, [3, 4])] {
            assert_eq!(u.get(idx[0]), y);
            assert_eq!(u.get(idx[1]), y);
        }
        let one = symmetric_defect_weights(CpKind::BarretoMars, 1.0).unwrap();
        for site in Site::ALL {
            for i in 1..=8 {
                let expect = if CpKind::BarretoMars.allowed(site, i) { 1.0 } else { 0.0 };
                assert_eq!(one.unit(site).get(i), expect);
            }
        }
    }

    #[test]
    fn every_family_is_free_fermion() {
        for cp in CpKind::ALL {
            for y in [0.1, 0.5, 1.0, 2.3] {
                let m = symmetric_defect_weights(cp, y).unwrap();
                assert!(m.is_free_fermion(1e-14), "{cp:?} {y}");
                m.validate().unwrap();
            }
        }
    }

    #[test]
    fn rejects_bad_fugacity() {
        assert!(symmetric_defect_weights(CpKind::Miura, 0.0).is_err());
        assert!(symmetric_defect_weights(CpKind::Miura, -1.0).is_err());
    }

    #[test]
    fn ground_states_tile() {
        for cp in CpKind::ALL {
            let g = cp.ground_state(Shape::new(4, 4)).unwrap();
            let st = cp.natural_staggering();
            for y in 0..4 {
                for x in 0..4 {
                    let c = crate::vertex::classify_vertex(g.neighborhood(x, y));
                    assert_eq!(c.index, cp.ground_index(st.site(x, y)));
                }
            }
        }
    }

    #[test]
    fn crease_weight_column_a() {
        let m = StaggeredModel::new(
            CpKind::SimpleSquare,
            Staggering::ColumnFour,
            &[OddWeights::ONES; 4],
        )
        .unwrap();
        let mut c = CreaseWeights::ONE;
        c.a.m = 2.0;
        let out = apply_crease_weights(&m, &c);
        assert_eq!(out.v.0, [2.0, 1.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        assert_eq!(out.w, OddWeights::ONES);
        assert_eq!(apply_crease_weights(&m, &CreaseWeights::ONE), m);
    }

    #[test]
    fn crease_weight_table_as_printed() {
        // (lower, right) states per index, M = mountain, V = valley
        const T: [(char, char); 8] = [
            ('m', 'v'),
            ('v', 'm'),
            ('v', 'v'),
            ('m', 'm'),
            ('v', 'm'),
            ('m', 'v'),
            ('v', 'v'),
            ('m', 'm'),
        ];
        for (i, &(lo, ri)) in T.iter().enumerate() {
            let nb = Neighborhood::from_bits(ODD_BITS[i]);
            assert_eq!(nb.down == Crease::Mountain, lo == 'm');
            assert_eq!(nb.right == Crease::Mountain, ri == 'm');
        }
    }
}
