//! Face 3-colourings of the Miura-ori, trapezoid and kite patterns.
//!
//! Face `(x, y)` has vertex `(x, y)` as its lower-left corner, so edge
//! U(x, y) separates faces `(x-1, y)` and `(x, y)`, and edge R(x, y)
//! separates faces `(x, y-1)` and `(x, y)`. Crossing an edge along its arrow
//! adds 1 to the colour for a valley and subtracts 1 for a mountain (mod 3).
//! Arrows are stored as signs `(a_U, a_R)` for crossing east and north:
//!
//! - Miura-ori (and the Barreto's Mars ground state): `(-1, -(-1)^x)`
//! - trapezoid: `(-1, -(-1)^(x+y))`
//! - kite: `((-1)^(x+y), 1)`
//!
//! With these signs the colour change around a vertex cancels exactly on the
//! pattern's allowed odd vertices, and the ground states colour as the
//! `{0, 1}` checkerboard with colour 0 on face (0, 0). The kite needs its own
//! vertical arrows: with the trapezoid ones its ground state winds by `-N`
//! around the torus.

use alloc::vec;
use alloc::vec::Vec;

use crate::enumerate::{check_budget, odd_tables, unit_weight_model, walk_all};
use crate::lattice::{Shape, TorusConfig};
use crate::model::CpKind;
use crate::vertex::{classify_vertex, Crease, Parity};
use crate::{Error, Result};

/// Colours in `{0, 1, 2}`, face `(x, y)` at index `y·N + x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FaceColoring {
    pub shape: Shape,
    pub colors: Vec<u8>,
}

impl FaceColoring {
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.colors[self.shape.site(x, y)]
    }

    /// No two edge-adjacent faces share a colour (toroidal adjacency).
    pub fn is_proper(&self) -> bool {
        let s = self.shape;
        (0..s.m).all(|y| {
            (0..s.n).all(|x| {
                let c = self.get(x, y);
                c < 3 && c != self.get((x + 1) % s.n, y) && c != self.get(x, (y + 1) % s.m)
            })
        })
    }

    /// All colours shifted by `k` (mod 3).
    pub fn shifted(&self, k: u8) -> FaceColoring {
        FaceColoring { shape: self.shape, colors: self.colors.iter().map(|c| (c + k) % 3).collect() }
    }
}

/// Colour fugacities `z0, z1, z2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColorFugacities(pub [f64; 3]);

impl ColorFugacities {
    pub const UNIT: ColorFugacities = ColorFugacities([1.0; 3]);

    /// The defect family: ground-state colours at fugacity 1, the third at `z`.
    pub fn defect(z: f64) -> Self {
        ColorFugacities([1.0, 1.0, z])
    }

    fn check(&self, allow_zero: bool) -> Result<()> {
        let ok = self.0.iter().all(|&z| z.is_finite() && if allow_zero { z >= 0.0 } else { z > 0.0 });
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidWeight)
        }
    }
}

type Arrows = fn(usize, usize) -> (i8, i8);

fn alt(k: usize) -> i8 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn arrows(cp: CpKind) -> Result<Arrows> {
    match cp {
        CpKind::Miura | CpKind::BarretoMars => Ok(|x, _| (-1, -alt(x))),
        CpKind::Trapezoid => Ok(|x, y| (-1, -alt(x + y))),
        CpKind::Kite => Ok(|x, y| (alt(x + y), 1)),
        CpKind::SimpleSquare => Err(Error::Unsupported),
    }
}

fn delta(c: Crease) -> i8 {
    match c {
        Crease::Valley => 1,
        Crease::Mountain => -1,
    }
}

fn step(color: u8, d: i8) -> u8 {
    ((color as i8 + d).rem_euclid(3)) as u8
}

/// Colour difference `b - a` read as ±1.
fn signed_diff(a: u8, b: u8) -> Option<i8> {
    match (3 + b - a) % 3 {
        1 => Some(1),
        2 => Some(-1),
        _ => None,
    }
}

/// Colour the faces of `cfg` starting from `seed` on face (0, 0).
///
/// Local inconsistency means a vertex outside the pattern's allowed set;
/// a configuration can also be locally fine but wind by a non-multiple of 3
/// around the torus. Both give `ColoringInconsistent`. For Barreto's Mars
/// only the ground state has a colouring.
pub fn creases_to_coloring(cfg: &TorusConfig, cp: CpKind, seed: u8) -> Result<FaceColoring> {
    let a = arrows(cp)?;
    let s = cfg.shape;
    if !cp.natural_staggering().fits(s) {
        return Err(Error::IncompatibleShape);
    }
    if cp == CpKind::BarretoMars && *cfg != cp.ground_state(s)? {
        return Err(Error::Unsupported);
    }
    let mut colors = vec![0u8; s.sites()];
    colors[0] = seed % 3;
    for x in 1..s.n {
        colors[x] = step(colors[x - 1], a(x, 0).0 * delta(cfg.edges[s.up_edge(x, 0)]));
    }
    for y in 1..s.m {
        for x in 0..s.n {
            let d = a(x, y).1 * delta(cfg.edges[s.right_edge(x, y)]);
            colors[s.site(x, y)] = step(colors[s.site(x, y - 1)], d);
        }
    }
    let fc = FaceColoring { shape: s, colors };
    for y in 0..s.m {
        for x in 0..s.n {
            let here = fc.get(x, y);
            let west = fc.get((x + s.n - 1) % s.n, y);
            let south = fc.get(x, (y + s.m - 1) % s.m);
            let (au, ar) = a(x, y);
            if step(west, au * delta(cfg.edges[s.up_edge(x, y)])) != here
                || step(south, ar * delta(cfg.edges[s.right_edge(x, y)])) != here
            {
                return Err(Error::ColoringInconsistent);
            }
        }
    }
    Ok(fc)
}

/// Read creases back off a proper colouring. For the kite the image can
/// violate the pattern's masks (the map onto colourings is not surjective),
/// which is reported as a `MaskViolation`.
pub fn coloring_to_creases(fc: &FaceColoring, cp: CpKind) -> Result<TorusConfig> {
    let a = arrows(cp)?;
    if cp == CpKind::BarretoMars {
        return Err(Error::Unsupported);
    }
    let s = fc.shape;
    if !cp.natural_staggering().fits(s) {
        return Err(Error::IncompatibleShape);
    }
    if fc.colors.len() != s.sites() {
        return Err(Error::ImproperColoring);
    }
    let crease = |d: i8| if d > 0 { Crease::Valley } else { Crease::Mountain };
    let mut cfg = TorusConfig::uniform(s, Crease::Valley);
    for y in 0..s.m {
        for x in 0..s.n {
            let here = fc.get(x, y);
            let west = fc.get((x + s.n - 1) % s.n, y);
            let south = fc.get(x, (y + s.m - 1) % s.m);
            let dw = signed_diff(west, here).ok_or(Error::ImproperColoring)?;
            let ds = signed_diff(south, here).ok_or(Error::ImproperColoring)?;
            let (au, ar) = a(x, y);
            cfg.edges[s.up_edge(x, y)] = crease(au * dw);
            cfg.edges[s.right_edge(x, y)] = crease(ar * ds);
        }
    }
    let st = cp.natural_staggering();
    for y in 0..s.m {
        for x in 0..s.n {
            let site = st.site(x, y);
            let c = classify_vertex(cfg.neighborhood(x, y));
            // arrow signs cancel only on odd vertices
            debug_assert_eq!(c.parity, Parity::Odd);
            let idx = c.index;
            if !cp.allowed(site, idx) {
                return Err(Error::MaskViolation { site, index: idx });
            }
        }
    }
    Ok(cfg)
}

/// Locally flat-foldable configurations split by whether they colour
/// consistently around the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorableCount {
    pub consistent: u64,
    pub winding: u64,
}

/// Enumerate the flat-foldable configurations of `cp` and try to colour each.
pub fn count_colorable(cp: CpKind, shape: Shape) -> Result<ColorableCount> {
    check_budget(shape)?;
    arrows(cp)?;
    let tables = odd_tables(&unit_weight_model(cp), shape)?;
    let mut out = ColorableCount { consistent: 0, winding: 0 };
    let mut err = None;
    walk_all(shape, &tables, None, |bits, _: &f64, _| {
        match creases_to_coloring(&TorusConfig::from_bits(shape, bits), cp, 0) {
            Ok(_) => out.consistent += 1,
            Err(Error::ColoringInconsistent) => out.winding += 1,
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Largest row width [`count_colorings`] accepts.
pub const MAX_ROW: usize = 8;

/// Proper colourings of a ring of `n` faces.
fn ring_states(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut row = vec![0u8; n];
    loop {
        if (0..n).all(|i| row[i] != row[(i + 1) % n]) {
            out.push(row.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            row[i] += 1;
            if row[i] < 3 {
                break;
            }
            row[i] = 0;
            i += 1;
        }
    }
}

fn matmul(a: &[f64], b: &[f64], k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k * k];
    for i in 0..k {
        for l in 0..k {
            let x = a[i * k + l];
            if x != 0.0 {
                for j in 0..k {
                    c[i * k + j] += x * b[l * k + j];
                }
            }
        }
    }
    c
}

/// Weighted count of proper 3-colourings of the M×N torus faces, each face
/// weighted by the fugacity of its colour. Row transfer matrix, traced.
pub fn count_colorings(shape: Shape, z: ColorFugacities) -> Result<f64> {
    z.check(true)?;
    if shape.n > MAX_ROW {
        return Err(Error::BudgetExceeded { edges: shape.edges() });
    }
    let rows = ring_states(shape.n);
    let k = rows.len();
    if k == 0 {
        return Ok(0.0);
    }
    let weight: Vec<f64> = rows.iter().map(|r| r.iter().map(|&c| z.0[c as usize]).product()).collect();
    let mut t = vec![0.0; k * k];
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            if a.iter().zip(b).all(|(p, q)| p != q) {
                t[i * k + j] = weight[j];
            }
        }
    }
    let mut acc: Option<Vec<f64>> = None;
    let mut e = shape.m;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => t.clone(),
                Some(p) => matmul(&p, &t, k),
            });
        }
        e >>= 1;
        if e > 0 {
            t = matmul(&t, &t, k);
        }
    }
    let p = acc.unwrap_or_default();
    Ok((0..k).map(|i| p[i * k + i]).sum())
}

/// Colour-dependent even 6-vertex weights `ω_{i,j}`, `i = 1..6`, `j = 0..2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColoredSixVertex(pub [[f64; 3]; 6]);

impl ColoredSixVertex {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i - 1][j % 3]
    }
}

/// Fourth-root and square-root relations from colour fugacities, with
/// colour indices taken mod 3.
pub fn colored_sixvertex_weights(z: ColorFugacities) -> Result<ColoredSixVertex> {
    z.check(false)?;
    let f = |j: usize| z.0[j % 3];
    let mut w = [[0.0; 3]; 6];
    for j in 0..3 {
        let (zj, zm, zp) = (f(j), f(j + 2), f(j + 1));
        let root4 = |x: f64| libm::sqrt(libm::sqrt(x));
        w[0][j] = root4(zj * zj * zm * zp);
        w[1][j] = w[0][j];
        w[2][j] = root4(zj * zm * zm * zp);
        w[3][j] = root4(zj * zm * zp * zp);
        w[4][j] = zj * zm;
        // ω_{6,j-1} = ω_{5,j}
        w[5][(j + 2) % 3] = zj * zm;
    }
    Ok(ColoredSixVertex(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_state_counts() {
        // 2^n + 2(-1)^n proper colourings of an n-cycle
        for n in 2..=7 {
            let want = (1i64 << n) + if n % 2 == 0 { 2 } else { -2 };
            assert_eq!(ring_states(n).len() as i64, want);
        }
    }

    #[test]
    fn signed_differences() {
        assert_eq!(signed_diff(0, 1), Some(1));
        assert_eq!(signed_diff(0, 2), Some(-1));
        assert_eq!(signed_diff(2, 0), Some(1));
        assert_eq!(signed_diff(1, 1), None);
    }

    #[test]
    fn symmetric_point() {
        let w = colored_sixvertex_weights(ColorFugacities::UNIT).unwrap();
        assert!(w.0.iter().flatten().all(|&x| (x - 1.0).abs() < 1e-15));
    }
}
