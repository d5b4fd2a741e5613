//! Threaded and exact-rational runs of the core enumerators.
//!
//! Blocks of the edge space are handed out round-robin to scoped threads;
//! their sums are merged in block order afterwards, so the floating-point
//! result is the same for any thread count.

use std::num::NonZeroUsize;
use std::thread;

use flatfold_core::enumerate::{
    block_count, block_sum, check_budget, convert_tables, odd_tables, walk_block, BlockSum, ExactPartition,
};
use flatfold_core::{OddWeights, Result, Shape, StaggeredModel};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub fn default_threads() -> usize {
    thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)
}

/// Run `f` on every block index across `threads` threads; results come back
/// in block order.
fn per_block<T: Send, F: Fn(usize) -> T + Sync>(blocks: usize, threads: usize, f: F) -> Vec<T> {
    let threads = threads.clamp(1, blocks.max(1));
    let mut out: Vec<(usize, T)> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let f = &f;
                s.spawn(move || (t..blocks).step_by(threads).map(|b| (b, f(b))).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("enumeration thread panicked")).collect()
    });
    out.sort_by_key(|(b, _)| *b);
    out.into_iter().map(|(_, x)| x).collect()
}

/// Parallel [`flatfold_core::enumerate::total_sum`].
pub fn par_total_sum(shape: Shape, tables: &[[f64; 16]], reference: Option<&[u8]>, threads: usize) -> BlockSum {
    let parts = per_block(block_count(shape), threads, |b| block_sum(shape, tables, reference, b));
    let mut s = BlockSum::default();
    for p in &parts {
        s.merge(p);
    }
    s
}

/// Parallel `enumerate_Z`.
#[allow(non_snake_case)]
pub fn par_enumerate_Z(model: &StaggeredModel, shape: Shape, threads: usize) -> Result<ExactPartition> {
    check_budget(shape)?;
    let t = odd_tables(model, shape)?;
    let s = par_total_sum(shape, &t, None, threads);
    Ok(ExactPartition { value: s.z.value(), config_count: s.count })
}

/// Exact value of a binary double.
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("weights are finite")
}

/// Exact sum over arbitrary weight tables; every product is formed in
/// rational arithmetic from the binary values of the weights.
pub fn exact_sum(shape: Shape, tables: &[[f64; 16]], threads: usize) -> Result<(BigRational, u64)> {
    check_budget(shape)?;
    let q = convert_tables(tables, rational);
    let parts = per_block(block_count(shape), threads, |b| {
        let mut z = BigRational::zero();
        let mut n = 0u64;
        walk_block(shape, &q, None, b, |_, w: &BigRational, _| {
            z += w;
            n += 1;
        });
        (z, n)
    });
    Ok(parts.into_iter().fold((BigRational::zero(), 0), |(z, n), (a, b)| (z + a, n + b)))
}

/// Exact partition function of an odd model.
#[allow(non_snake_case)]
pub fn exact_Z(model: &StaggeredModel, shape: Shape, threads: usize) -> Result<(BigRational, u64)> {
    exact_sum(shape, &odd_tables(model, shape)?, threads)
}

/// `w1·w2 + w3·w4 − w5·w6 − w7·w8` of the binary weights, exactly.
pub fn exact_ff_residual(w: &OddWeights) -> BigRational {
    let p = |a: usize, b: usize| rational(w.get(a)) * rational(w.get(b));
    p(1, 2) + p(3, 4) - p(5, 6) - p(7, 8)
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
