//! Printed cosine tables against the dimer determinant, harmonic by harmonic.

use flatfold_core::dimer::thermo_free_energy;
use flatfold_core::enumerate::transfer_Z_model;
use flatfold_core::freeenergy::*;
use flatfold_core::model::{CpKind, Staggering, StaggeredModel};
use flatfold_core::quadrature::QuadOptions;
use flatfold_core::{OddWeights, Shape};

struct Lcg(u64);
impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Random free-fermion weights with the listed indices zeroed; the free
/// index is solved for.
fn random_unit(r: &mut Lcg, zero: &[usize], solve: usize) -> OddWeights {
    loop {
        let mut v = OddWeights([0.0; 8]);
        for i in 1..=8 {
            if !zero.contains(&i) {
                v.set(i, 0.3 + 1.2 * r.next());
            }
        }
        let partner = match solve {
            1 => 2,
            2 => 1,
            3 => 4,
            4 => 3,
            _ => unreachable!(),
        };
        v.set(solve, 0.0);
        let rest = v.get(5) * v.get(6) + v.get(7) * v.get(8) - v.get(1) * v.get(2) - v.get(3) * v.get(4);
        v.set(solve, rest / v.get(partner));
        if v.get(solve) > 0.0 {
            return v;
        }
    }
}

fn compare(printed: &FourierIntegrand, det: impl Fn(f64, f64) -> f64, scale: f64, what: &str) {
    let f = |a: f64, b: f64| det(a, b) * scale;
    let tol = 1e-11 * printed.coefficient('A');
    for (p, q, c) in fourier_modes(&f, 3, 16) {
        let want: f64 = printed
            .terms
            .iter()
            .filter(|t| (t.p, t.q) == (p, q) || (t.p, t.q) == (-p, -q))
            .map(|t| t.coef)
            .sum();
        assert!((c - want).abs() < tol, "{what} ({p},{q}): determinant {c} printed {want}");
    }
}

#[test]
fn miura_table() {
    let mut r = Lcg(3);
    for _ in 0..6 {
        let v = random_unit(&mut r, &[3, 4], 1);
        let w = random_unit(&mut r, &[1, 2], 3);
        let t = random_unit(&mut r, &[3, 4], 2);
        let u = random_unit(&mut r, &[1, 2], 4);
        let printed = miura_integrand(&t, &u, &v, &w).unwrap();
        let det = dimer_integrand(PrintedForm::FourUnit, &[v, w, t, u]).unwrap();
        compare(&printed, det, 1.0, "miura");
    }
}

#[test]
fn trapezoid_table() {
    let mut r = Lcg(5);
    for _ in 0..6 {
        let v = random_unit(&mut r, &[3, 4], 1);
        let w = random_unit(&mut r, &[1, 2], 3);
        let printed = trapezoid_integrand(&v, &w).unwrap();
        let det = dimer_integrand(PrintedForm::Trapezoid, &[v, w]).unwrap();
        compare(&printed, det, 1.0, "trapezoid");
    }
}

#[test]
fn kite_table() {
    let mut r = Lcg(7);
    for _ in 0..6 {
        let v = random_unit(&mut r, &[3, 4, 5, 6], 1);
        let w = random_unit(&mut r, &[1, 2, 7, 8], 3);
        let printed = kite_integrand(&v, &w).unwrap();
        let trap = trapezoid_integrand(&v, &w).unwrap();
        let det = dimer_integrand(PrintedForm::Trapezoid, &[v, w]).unwrap();
        compare(&printed, det, 1.0, "kite");
        for label in ['A', 'B', 'C', 'D', 'G', 'J', 'L'] {
            assert!((printed.coefficient(label) - trap.coefficient(label)).abs() < 1e-12);
        }
    }
}

#[test]
fn square_column_and_bipartite_tables() {
    let mut r = Lcg(9);
    for _ in 0..6 {
        let v = random_unit(&mut r, &[], 1);
        let w = random_unit(&mut r, &[], 2);
        let sc = square_integrand(SquareVariant::ColumnTwo, &v, &w).unwrap();
        compare(&sc, dimer_integrand(PrintedForm::SquareColumn, &[v, w]).unwrap(), 1.0, "column");
        let sb = square_integrand(SquareVariant::BipartiteTwo, &v, &w).unwrap();
        compare(&sb, dimer_integrand(PrintedForm::SquareBipartite, &[v, w]).unwrap(), 1.0, "bipartite");
    }
}

#[test]
fn square_homogeneous_reconciled() {
    let mut r = Lcg(13);
    for _ in 0..6 {
        let v = random_unit(&mut r, &[], 3);
        let rec = homogeneous_integrand(&v).unwrap();
        compare(&rec, dimer_integrand(PrintedForm::SquareHomogeneous, &[v]).unwrap(), 1.0, "homogeneous");
        let m = StaggeredModel::homogeneous(v).unwrap();
        let a = rec.free_energy(&QuadOptions::default()).into_result().unwrap();
        let b = thermo_free_energy(&m, &QuadOptions::default()).unwrap().into_result().unwrap();
        assert!((a - b).abs() < 1e-12, "{a} {b}");
    }
}

#[test]
fn printed_homogeneous_at_unit_weights() {
    let ones = OddWeights::ONES;
    let printed = square_integrand(SquareVariant::Homogeneous, &ones, &ones).unwrap();
    let p = printed.free_energy(&QuadOptions::default()).value;
    let c = homogeneous_integrand(&ones).unwrap().free_energy(&QuadOptions::default()).value;
    assert!((p - 0.5 * 8f64.ln()).abs() < 1e-14);
    assert!((c - 2f64.ln()).abs() < 1e-14);
    // every one of the 2^{MN+1} unit-weight states on the torus
    let m = StaggeredModel::homogeneous(ones).unwrap();
    let z = transfer_Z_model(&m, Shape::new(4, 4)).unwrap();
    assert_eq!(z, 2f64.powi(17));
}

#[test]
fn barreto_has_no_harmonics() {
    let mut r = Lcg(17);
    for _ in 0..6 {
        let v = random_unit(&mut r, &[3, 4, 5, 6], 1);
        let w = random_unit(&mut r, &[1, 2, 5, 6], 3);
        let t = random_unit(&mut r, &[3, 4, 7, 8], 2);
        let u = random_unit(&mut r, &[1, 2, 7, 8], 4);
        let a = barreto_argument(&t, &u, &v, &w).unwrap();
        let det = dimer_integrand(PrintedForm::FourUnit, &[v, w, t, u]).unwrap();
        let only_a = FourierIntegrand { terms: vec![Term { label: 'A', p: 0, q: 0, coef: a }], prefactor_k: 32.0 };
        compare(&only_a, det, 1.0, "barreto");
        let m = StaggeredModel::new(CpKind::BarretoMars, Staggering::ColumnFour, &[v, w, t, u]).unwrap();
        let f = thermo_free_energy(&m, &QuadOptions::default()).unwrap().value;
        assert!((f - barreto_free_energy(&t, &u, &v, &w).unwrap()).abs() < 1e-13);
    }
}

#[test]
fn symmetric_forms() {
    for y in [0.3, 0.6, 0.70710678, 0.9, 1.4] {
        let m = flatfold_core::model::defect_family(CpKind::Miura, y);
        let sym = miura_symmetric_integrand(y).free_energy(&QuadOptions::default()).value;
        let full = thermo_free_energy(&m, &QuadOptions::default()).unwrap().value;
        assert!((sym - full).abs() < 1e-9, "miura y={y}: {sym} {full}");
        let m = flatfold_core::model::defect_family(CpKind::Trapezoid, y);
        let sym = trapezoid_symmetric_integrand(y).free_energy(&QuadOptions::default()).value;
        let full = thermo_free_energy(&m, &QuadOptions::default()).unwrap().value;
        assert!((sym - full).abs() < 1e-9, "trapezoid y={y}: {sym} {full}");
    }
}

#[test]
fn kite_torus_against_transfer_matrix() {
    let mut r = Lcg(19);
    for _ in 0..3 {
        let v = random_unit(&mut r, &[3, 4, 5, 6], 1);
        let w = random_unit(&mut r, &[1, 2, 7, 8], 3);
        let m = StaggeredModel::new(CpKind::Kite, Staggering::BipartiteTwo, &[v, w]).unwrap();
        for (a, b) in [(2, 2), (2, 4), (4, 2), (4, 4), (2, 6), (6, 2), (4, 6), (6, 4)] {
            let s = Shape::new(a, b);
            let z = transfer_Z_model(&m, s).unwrap();
            let k = kite_Z(&v, &w, s).unwrap();
            assert!(((k - z) / z).abs() < 1e-12, "{a}x{b}: {k} {z}");
            if a % b == 0 {
                let l = kite_Z_literal(&v, &w, s).unwrap();
                assert!(((l - z) / z).abs() < 1e-12);
            }
        }
    }
}
