use flatfold::draws::{ff_model, ff_unit, rng};
use flatfold::enumeration::{exact_Z, exact_ff_residual, par_enumerate_Z, par_total_sum, rational, to_f64};
use flatfold_core::enumerate::{enumerate_Z, odd_tables, total_sum};
use flatfold_core::model::{defect_family, symmetric_defect_weights, CpKind, Site, Staggering};
use flatfold_core::sixteen::SixteenVertexWeights;
use flatfold_core::Shape;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn thread_count_does_not_change_the_sum() {
    let m = defect_family(CpKind::Miura, 0.37);
    let s = Shape::new(4, 4);
    let t = odd_tables(&m, s).unwrap();
    let serial = total_sum(s, &t, None);
    for threads in [1, 2, 3, 8] {
        let p = par_total_sum(s, &t, None, threads);
        assert_eq!(p.z.value().to_bits(), serial.z.value().to_bits());
        assert_eq!(p.count, serial.count);
    }
    assert_eq!(par_enumerate_Z(&m, s, 4).unwrap(), enumerate_Z(&m, s).unwrap());
}

#[test]
fn exact_partition_functions() {
    // Miura at y = 1/2 on 2×4: every weight is dyadic, so Z is exactly 657/256
    let m = defect_family(CpKind::Miura, 0.5);
    let (z, n) = exact_Z(&m, Shape::new(2, 4), 2).unwrap();
    assert_eq!(z.to_string(), "657/256");
    assert_eq!(n, 114);
    // Barreto's Mars: (1 + y⁴)^{MN/2} with y⁴ = 1/16
    let m = defect_family(CpKind::BarretoMars, 0.5);
    let s = Shape::new(4, 4);
    let (z, _) = exact_Z(&m, s, 4).unwrap();
    let base = rational(1.0) + rational(1.0 / 16.0);
    assert_eq!(z, num_traits::pow(base, s.sites() / 2));
}

#[test]
fn float_oracle_agrees_with_the_exact_one() {
    let mut r = rng(3);
    for st in [Staggering::Homogeneous, Staggering::ColumnTwo, Staggering::BipartiteTwo, Staggering::ColumnFour] {
        let m = ff_model(&mut r, CpKind::SimpleSquare, st).unwrap();
        let s = Shape::new(2, 4);
        let e = enumerate_Z(&m, s).unwrap().value;
        let q = to_f64(&exact_Z(&m, s, 2).unwrap().0);
        assert!(((e - q) / q).abs() < 1e-15, "{st:?}: {e} {q}");
    }
}

#[test]
fn defect_weights_are_exactly_free_fermion() {
    // dyadic y keeps y² exact in binary, so the check is in exact arithmetic
    for cp in [CpKind::Miura, CpKind::Trapezoid, CpKind::BarretoMars, CpKind::Kite, CpKind::SimpleSquare] {
        for y in [0.25, 0.5, 0.75, 1.0, 1.25, 3.0] {
            let m = symmetric_defect_weights(cp, y).unwrap();
            for w in m.four_units() {
                assert!(exact_ff_residual(&w).is_zero(), "{cp:?} y={y}");
            }
        }
    }
}

#[test]
fn sixteen_vertex_exact_sum() {
    let x = SixteenVertexWeights::symmetric([1.0, 0.5, 0.25, 0.75], [0.5, 1.0, 0.25, 0.5]).unwrap();
    let s = Shape::new(2, 2);
    let (z, n) = flatfold::enumeration::exact_sum(s, &x.tables(s), 2).unwrap();
    assert_eq!(n, 1 << s.edges());
    let f = total_sum(s, &x.tables(s), None).z.value();
    assert_eq!(to_f64(&z), f);
    assert!(z > BigRational::zero());
}

proptest! {
    #[test]
    fn draws_respect_masks_and_free_fermion(seed in 0u64..5000) {
        let mut r = rng(seed);
        for cp in [CpKind::Miura, CpKind::Trapezoid, CpKind::BarretoMars, CpKind::Kite, CpKind::SimpleSquare] {
            for site in Site::ALL {
                let w = ff_unit(&mut r, cp, site);
                prop_assert!(w.is_free_fermion(1e-12));
                for i in 1..=8 {
                    prop_assert_eq!(w.get(i) > 0.0, cp.allowed(site, i));
                }
            }
        }
    }
}
