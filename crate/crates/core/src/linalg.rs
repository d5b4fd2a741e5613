//! Dense determinants and Pfaffians, row-major.

use alloc::vec::Vec;
use num_complex::Complex64;

/// Determinant by LU with partial pivoting. `a` is destroyed.
pub fn det_complex(a: &mut [Complex64], n: usize) -> Complex64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm_sqr();
        for r in k + 1..n {
            let v = a[r * n + k].norm_sqr();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        let inv = piv.inv();
        for r in k + 1..n {
            let f = a[r * n + k] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in k + 1..n {
                let t = a[k * n + c];
                a[r * n + c] -= f * t;
            }
        }
    }
    det
}

/// Pfaffian of a real antisymmetric matrix by pivoted Gaussian elimination
/// on row/column pairs. `a` is destroyed.
pub fn pfaffian_real(a: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    if n % 2 == 1 {
        return 0.0;
    }
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        // largest entry in column k below the diagonal
        let mut p = k + 1;
        let mut best = libm::fabs(a[(k + 1) * n + k]);
        for r in k + 2..n {
            let v = libm::fabs(a[r * n + k]);
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if p != k + 1 {
            swap_sym(a, n, k + 1, p);
            pf = -pf;
        }
        let akk1 = a[k * n + k + 1];
        pf *= akk1;
        if k + 2 < n {
            // eliminate couplings of rows k, k+1 with the rest
            let tau: Vec<f64> = (k + 2..n).map(|j| a[k * n + j] / akk1).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[i * n + k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[i * n + j] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

fn swap_sym(a: &mut [f64], n: usize, i: usize, j: usize) {
    for c in 0..n {
        a.swap(i * n + c, j * n + c);
    }
    for r in 0..n {
        a.swap(r * n + i, r * n + j);
    }
}

/// Determinant of a real matrix.
pub fn det_real(a: &[f64], n: usize) -> f64 {
    let mut c: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    det_complex(&mut c, n).re
}
