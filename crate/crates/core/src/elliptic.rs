//! Complete elliptic integrals by the arithmetic-geometric mean.
//!
//! Arguments are moduli `k` (not parameters `m = k²`): this is the reading
//! under which the lattice-gas density reproduces its low-fugacity series.

use core::f64::consts::PI;

/// `AGM(a, b)` for `a, b ≥ 0`.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if libm::fabs(a - b) <= 4e-16 * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = libm::sqrt(a * b);
        a = m;
    }
    0.5 * (a + b)
}

/// `K(k)` and `E(k)` from the complementary modulus `k' = √(1 − k²)`,
/// which keeps precision when `k` is close to one.
pub fn complete_from_complement(kp: f64) -> (f64, f64) {
    let c = complete(libm::sqrt((1.0 - kp) * (1.0 + kp)), kp);
    (c.k, c.e)
}

/// `K`, `E` and `K − E` for a consistent pair `(k, k')`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complete {
    pub k: f64,
    pub e: f64,
    /// `K − E` without the cancellation of subtracting the two.
    pub k_minus_e: f64,
}

/// Both moduli are passed so that neither `k²` nor `k'` is recomputed by
/// subtraction.
pub fn complete(k: f64, kp: f64) -> Complete {
    let mut a = 1.0;
    let mut b = kp;
    let mut sum = 0.5 * k * k;
    let mut pow = 0.5;
    for _ in 0..64 {
        if libm::fabs(a - b) <= 4e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = libm::sqrt(a * b);
        let cn = 0.5 * (a - b);
        pow *= 2.0;
        sum += pow * cn * cn;
        a = an;
        b = bn;
    }
    let kk = PI / (a + b);
    Complete { k: kk, e: kk * (1.0 - sum), k_minus_e: kk * sum }
}

/// `1 − AGM(1, 1 − ε)`, accurate for small `ε`.
pub fn agm_deficit(eps: f64) -> f64 {
    let (mut da, mut db) = (0.0f64, eps);
    for _ in 0..64 {
        if libm::fabs(da - db) <= 4e-16 * da.max(db).max(f64::MIN_POSITIVE) {
            break;
        }
        let na = 0.5 * (da + db);
        // 1 − √((1 − da)(1 − db))
        let nb = (da + db - da * db) / (1.0 + libm::sqrt((1.0 - da) * (1.0 - db)));
        da = na;
        db = nb;
    }
    0.5 * (da + db)
}

/// Complete elliptic integral of the first kind, modulus `k ∈ [0, 1)`.
pub fn ellip_k(k: f64) -> f64 {
    complete_from_complement(libm::sqrt((1.0 - k) * (1.0 + k))).0
}

/// Complete elliptic integral of the second kind, modulus `k ∈ [0, 1]`.
pub fn ellip_e(k: f64) -> f64 {
    if k == 1.0 {
        return 1.0;
    }
    complete_from_complement(libm::sqrt((1.0 - k) * (1.0 + k))).1
}
