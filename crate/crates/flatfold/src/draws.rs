//! Seeded random free-fermion weight draws.

use flatfold_core::model::{CpKind, Site, Staggering, StaggeredModel};
use flatfold_core::{OddWeights, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weights in `[0.3, 1.5)` on the allowed indices of `site`, with one weight
/// of the `w1·w2` or `w3·w4` product solved from the free-fermion condition.
pub fn ff_unit<R: Rng>(r: &mut R, cp: CpKind, site: Site) -> OddWeights {
    let ok = |i: usize| cp.allowed(site, i);
    let (solve, partner) = if ok(1) && ok(2) { (1, 2) } else { (3, 4) };
    loop {
        let mut w = OddWeights::ZERO;
        for i in 1..=8 {
            if ok(i) {
                w.set(i, r.gen_range(0.3..1.5));
            }
        }
        w.set(solve, 0.0);
        let rest = w.get(5) * w.get(6) + w.get(7) * w.get(8) - w.get(1) * w.get(2) - w.get(3) * w.get(4);
        let x = rest / w.get(partner);
        if x > 0.05 {
            w.set(solve, x);
            return w;
        }
    }
}

/// A random free-fermion model of `cp` on `staggering`.
pub fn ff_model<R: Rng>(r: &mut R, cp: CpKind, staggering: Staggering) -> Result<StaggeredModel> {
    let units: Vec<OddWeights> = staggering.sites().iter().map(|&s| ff_unit(r, cp, s)).collect();
    StaggeredModel::new(cp, staggering, &units)
}
