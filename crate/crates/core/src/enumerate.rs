//! Exhaustive enumeration of crease assignments on small tori.
//!
//! Every routine works from per-vertex weight tables indexed by the 4-bit
//! neighbourhood, so the same walkers serve odd 8-vertex models (even entries
//! zero) and the 16-vertex model. A zero entry means "not allowed".
//!
//! Two independent walkers are provided. [`walk_block`] assigns edges in index
//! order and prunes as soon as a vertex is complete; [`gray_scan_block`] visits
//! every one of the `2^E` assignments in Gray-code order with incremental
//! vertex re-scoring. Both split the edge space into `2^k` blocks by fixing the
//! first (resp. last) `k` edges; block sums are reduced in block order so the
//! result does not depend on how blocks are scheduled.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Mul;

use num_traits::{One, Zero};

use crate::lattice::{Shape, TorusConfig};
use crate::model::{CpKind, StaggeredModel};
use crate::sum::Neumaier;
use crate::vertex::Neighborhood;
use crate::{Error, Result};

/// Full enumeration is limited to this many edges.
pub const EDGE_BUDGET: usize = 32;

/// log2 of the number of blocks the edge space is cut into.
pub const BLOCK_BITS: usize = 10;

/// Weighted sum and number of admissible configurations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactPartition {
    pub value: f64,
    pub config_count: u64,
}

/// Which fugacity the density is taken with respect to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefectFamily {
    /// Per-crease fugacity `y`: density counts reversed creases per site.
    CreaseY,
    /// `z = y^4`: a quarter of the `y` density.
    CreaseZ,
}

/// Block partial sums of an enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlockSum {
    pub z: Neumaier,
    /// Σ weight · (number of edges differing from the reference).
    pub n1: Neumaier,
    pub count: u64,
}

impl BlockSum {
    pub fn merge(&mut self, o: &BlockSum) {
        self.z.merge(&o.z);
        self.n1.merge(&o.n1);
        self.count += o.count;
    }
}

pub fn check_budget(shape: Shape) -> Result<()> {
    if shape.edges() > EDGE_BUDGET {
        Err(Error::BudgetExceeded { edges: shape.edges() })
    } else {
        Ok(())
    }
}

/// Weight tables of a staggered odd model, one per site in site order.
pub fn odd_tables(model: &StaggeredModel, shape: Shape) -> Result<Vec<[f64; 16]>> {
    if !model.staggering.fits(shape) {
        return Err(Error::IncompatibleShape);
    }
    model.validate()?;
    let mut out = Vec::with_capacity(shape.sites());
    for y in 0..shape.m {
        for x in 0..shape.n {
            let u = model.unit_at(x, y);
            let mut t = [0.0; 16];
            for (b, slot) in t.iter_mut().enumerate() {
                *slot = u.by_bits(b as u8);
            }
            out.push(t);
        }
    }
    Ok(out)
}

/// Map each table entry through `f` (e.g. into exact rationals).
pub fn convert_tables<T, F: Fn(f64) -> T>(tables: &[[f64; 16]], f: F) -> Vec<[T; 16]> {
    tables.iter().map(|t| core::array::from_fn(|i| f(t[i]))).collect()
}

/// Static structure shared by both walkers.
struct Layout {
    shape: Shape,
    stars: Vec<[usize; 4]>,
    /// Vertices whose last edge (in index order) is `e`.
    complete_after: Vec<Vec<usize>>,
    /// Vertices touching edge `e`, deduplicated.
    touching: Vec<Vec<usize>>,
}

impl Layout {
    fn new(shape: Shape) -> Self {
        let e = shape.edges();
        let mut stars = Vec::with_capacity(shape.sites());
        let mut complete_after = vec![Vec::new(); e];
        let mut touching = vec![Vec::new(); e];
        for y in 0..shape.m {
            for x in 0..shape.n {
                let v = shape.site(x, y);
                let s = shape.star(x, y);
                complete_after[*s.iter().max().unwrap()].push(v);
                for &edge in &s {
                    if !touching[edge].contains(&v) {
                        touching[edge].push(v);
                    }
                }
                stars.push(s);
            }
        }
        Layout { shape, stars, complete_after, touching }
    }

    #[inline]
    fn nb_bits(&self, v: usize, bits: &[u8]) -> usize {
        let [u, d, l, r] = self.stars[v];
        ((bits[u] << 3) | (bits[d] << 2) | (bits[l] << 1) | bits[r]) as usize
    }
}

struct Dfs<'a, T, F> {
    lay: &'a Layout,
    tables: &'a [[T; 16]],
    reference: Option<&'a [u8]>,
    bits: Vec<u8>,
    fixed: usize,
    block: usize,
    visit: F,
}

impl<T, F> Dfs<'_, T, F>
where
    T: Clone + Zero + for<'x> Mul<&'x T, Output = T>,
    F: FnMut(&[u8], &T, u32),
{
    fn go(&mut self, e: usize, prod: T, defects: u32) {
        let total = self.lay.shape.edges();
        if e == total {
            (self.visit)(&self.bits, &prod, defects);
            return;
        }
        let choices: &[u8] = if e < self.fixed {
            if (self.block >> e) & 1 == 1 {
                &[1]
            } else {
                &[0]
            }
        } else {
            &[0, 1]
        };
        for &b in choices {
            self.bits[e] = b;
            let d = defects + self.reference.map_or(0, |r| u32::from(r[e] != b));
            let mut p = prod.clone();
            let mut ok = true;
            for &v in &self.lay.complete_after[e] {
                let w = &self.tables[v][self.lay.nb_bits(v, &self.bits)];
                if w.is_zero() {
                    ok = false;
                    break;
                }
                p = p * w;
            }
            if ok {
                self.go(e + 1, p, d);
            }
        }
    }
}

/// Number of blocks used for a shape.
pub fn block_count(shape: Shape) -> usize {
    1 << BLOCK_BITS.min(shape.edges())
}

/// Depth-first walk over one block: edges `0..k` are fixed to the bits of
/// `block`. `visit` gets the edge bits, the configuration weight and the
/// number of edges differing from `reference`.
pub fn walk_block<T, F>(
    shape: Shape,
    tables: &[[T; 16]],
    reference: Option<&[u8]>,
    block: usize,
    visit: F,
) where
    T: Clone + Zero + One + for<'x> Mul<&'x T, Output = T>,
    F: FnMut(&[u8], &T, u32),
{
    assert_eq!(tables.len(), shape.sites());
    let lay = Layout::new(shape);
    let fixed = BLOCK_BITS.min(shape.edges());
    let mut dfs = Dfs {
        lay: &lay,
        tables,
        reference,
        bits: vec![0; shape.edges()],
        fixed,
        block,
        visit,
    };
    dfs.go(0, T::one(), 0);
}

/// Walk every block in order.
pub fn walk_all<T, F>(shape: Shape, tables: &[[T; 16]], reference: Option<&[u8]>, mut visit: F)
where
    T: Clone + Zero + One + for<'x> Mul<&'x T, Output = T>,
    F: FnMut(&[u8], &T, u32),
{
    for b in 0..block_count(shape) {
        walk_block(shape, tables, reference, b, &mut visit);
    }
}

/// Floating-point sums of one block.
pub fn block_sum(shape: Shape, tables: &[[f64; 16]], reference: Option<&[u8]>, block: usize) -> BlockSum {
    let mut s = BlockSum::default();
    walk_block(shape, tables, reference, block, |_, &w, d| {
        s.z.add(w);
        s.n1.add(w * f64::from(d));
        s.count += 1;
    });
    s
}

/// Reduce all blocks in order.
pub fn total_sum(shape: Shape, tables: &[[f64; 16]], reference: Option<&[u8]>) -> BlockSum {
    let mut s = BlockSum::default();
    for b in 0..block_count(shape) {
        s.merge(&block_sum(shape, tables, reference, b));
    }
    s
}

/// Gray-code scan of one block. The high `k` edges are fixed by `block`; the
/// low edges run through the reflected Gray sequence, one crease flip per step.
pub fn gray_scan_block<F>(shape: Shape, tables: &[[f64; 16]], block: usize, mut visit: F)
where
    F: FnMut(&[u8], f64),
{
    let lay = Layout::new(shape);
    let e = shape.edges();
    let k = BLOCK_BITS.min(e);
    let low = e - k;
    let mut bits = vec![0u8; e];
    for i in 0..k {
        bits[low + i] = ((block >> i) & 1) as u8;
    }
    let nv = shape.sites();
    let mut invalid = 0usize;
    let mut valid = vec![false; nv];
    for (v, ok) in valid.iter_mut().enumerate() {
        *ok = tables[v][lay.nb_bits(v, &bits)] != 0.0;
        invalid += usize::from(!*ok);
    }
    let emit = |bits: &[u8], visit: &mut F| {
        let mut w = 1.0;
        for (v, t) in tables.iter().enumerate() {
            w *= t[lay.nb_bits(v, bits)];
        }
        visit(bits, w);
    };
    if invalid == 0 {
        emit(&bits, &mut visit);
    }
    let steps: u64 = 1u64 << low;
    for i in 1..steps {
        let edge = i.trailing_zeros() as usize;
        bits[edge] ^= 1;
        for &v in &lay.touching[edge] {
            let now = tables[v][lay.nb_bits(v, &bits)] != 0.0;
            if now != valid[v] {
                if now {
                    invalid -= 1;
                } else {
                    invalid += 1;
                }
                valid[v] = now;
            }
        }
        if invalid == 0 {
            emit(&bits, &mut visit);
        }
    }
}

/// Gray-code route to Z and the admissible count.
pub fn gray_partition(shape: Shape, tables: &[[f64; 16]]) -> ExactPartition {
    let mut z = Neumaier::new();
    let mut count = 0u64;
    for b in 0..block_count(shape) {
        gray_scan_block(shape, tables, b, |_, w| {
            z.add(w);
            count += 1;
        });
    }
    ExactPartition { value: z.value(), config_count: count }
}

/// Partition function and admissible count by exhaustive enumeration.
#[allow(non_snake_case)]
pub fn enumerate_Z(model: &StaggeredModel, shape: Shape) -> Result<ExactPartition> {
    check_budget(shape)?;
    let t = odd_tables(model, shape)?;
    let s = total_sum(shape, &t, None);
    Ok(ExactPartition { value: s.z.value(), config_count: s.count })
}

/// Reference configuration for defect counting: the pattern's ground state.
pub fn defect_reference(cp: CpKind, shape: Shape) -> Result<TorusConfig> {
    cp.ground_state(shape)
}

/// Mean number of reversed creases (relative to the ground state) per site.
pub fn enumerate_density(model: &StaggeredModel, shape: Shape, family: DefectFamily) -> Result<f64> {
    check_budget(shape)?;
    let t = odd_tables(model, shape)?;
    let reference = defect_reference(model.cp, shape)?.bits();
    let s = total_sum(shape, &t, Some(&reference));
    let z = s.z.value();
    if z == 0.0 {
        return Ok(0.0);
    }
    let rho = s.n1.value() / z / shape.sites() as f64;
    Ok(match family {
        DefectFamily::CreaseY => rho,
        DefectFamily::CreaseZ => rho / 4.0,
    })
}

/// Model with weight 1 on every allowed index of `cp`.
pub fn unit_weight_model(cp: CpKind) -> StaggeredModel {
    let st = cp.natural_staggering();
    let mut units = [crate::vertex::OddWeights::ZERO; 4];
    for site in crate::model::Site::ALL {
        for i in 1..=8 {
            if cp.allowed(site, i) {
                units[site.slot()].set(i, 1.0);
            }
        }
    }
    let [v, w, t, u] = units;
    StaggeredModel { cp, staggering: st, v, w, t, u }
}

/// Number of locally flat-foldable assignments of `cp` on the torus.
pub fn count_flat_foldable(cp: CpKind, shape: Shape) -> Result<u64> {
    Ok(enumerate_Z(&unit_weight_model(cp), shape)?.config_count)
}

/// Row-to-row transfer matrix for row `y`, indexed `[down bits][up bits]`
/// with bit `x` for column `x`. The horizontal ring of each row is traced
/// out with 2×2 matrices, so the cost is `4^N · N`.
pub fn row_transfer(shape: Shape, tables: &[[f64; 16]], y: usize) -> Vec<f64> {
    let n = shape.n;
    let s = 1usize << n;
    let mut t = vec![0.0; s * s];
    for d in 0..s {
        for u in 0..s {
            // ring over horizontal edges h_{x-1} (left) -> h_x (right)
            let mut acc = [[1.0, 0.0], [0.0, 1.0]];
            for x in 0..n {
                let tab = &tables[shape.site(x, y)];
                let ub = (u >> x) & 1;
                let db = (d >> x) & 1;
                let mut w = [[0.0; 2]; 2];
                for (l, row) in w.iter_mut().enumerate() {
                    for (r, slot) in row.iter_mut().enumerate() {
                        *slot = tab[(ub << 3) | (db << 2) | (l << 1) | r];
                    }
                }
                let mut next = [[0.0; 2]; 2];
                for (i, row) in next.iter_mut().enumerate() {
                    for (j, slot) in row.iter_mut().enumerate() {
                        *slot = acc[i][0] * w[0][j] + acc[i][1] * w[1][j];
                    }
                }
                acc = next;
            }
            t[d * s + u] = acc[0][0] + acc[1][1];
        }
    }
    t
}

fn matmul(a: &[f64], b: &[f64], s: usize) -> Vec<f64> {
    let mut c = vec![0.0; s * s];
    for i in 0..s {
        for k in 0..s {
            let aik = a[i * s + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..s {
                c[i * s + j] += aik * b[k * s + j];
            }
        }
    }
    c
}

/// Partition function by the row transfer matrix, `Tr(T_{M-1} ... T_0)`.
/// Works for any table set, including 16-vertex tables; `N` up to about 10.
#[allow(non_snake_case)]
pub fn transfer_Z(shape: Shape, tables: &[[f64; 16]]) -> f64 {
    let s = 1usize << shape.n;
    let mut p: Option<Vec<f64>> = None;
    for y in 0..shape.m {
        let t = row_transfer(shape, tables, y);
        p = Some(match p {
            None => t,
            Some(acc) => matmul(&acc, &t, s),
        });
    }
    let p = p.unwrap();
    (0..s).map(|i| p[i * s + i]).sum()
}

/// Transfer-matrix partition function of an odd model. No edge budget.
#[allow(non_snake_case)]
pub fn transfer_Z_model(model: &StaggeredModel, shape: Shape) -> Result<f64> {
    Ok(transfer_Z(shape, &odd_tables(model, shape)?))
}

/// Neighbourhood of vertex `v` in a bit vector, for callers that inspect
/// visited configurations.
pub fn neighborhood_of(shape: Shape, bits: &[u8], x: usize, y: usize) -> Neighborhood {
    let [u, d, l, r] = shape.star(x, y);
    Neighborhood::from_bits((bits[u] << 3) | (bits[d] << 2) | (bits[l] << 1) | bits[r])
}
