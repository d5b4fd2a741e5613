use flatfold_core::coloring::*;
use flatfold_core::enumerate::{count_flat_foldable, odd_tables, unit_weight_model, walk_all};
use flatfold_core::{CpKind, Error, Shape, TorusConfig};

/// Brute force over all 3^(MN) face colourings.
fn brute_colorings(s: Shape, z: [f64; 3]) -> f64 {
    let k = s.sites();
    let mut total = 0.0;
    for code in 0..3usize.pow(k as u32) {
        let mut c = code;
        let colors: Vec<u8> = (0..k)
            .map(|_| {
                let d = (c % 3) as u8;
                c /= 3;
                d
            })
            .collect();
        let fc = FaceColoring { shape: s, colors };
        if fc.is_proper() {
            total += fc.colors.iter().map(|&c| z[c as usize]).product::<f64>();
        }
    }
    total
}

fn configs(cp: CpKind, s: Shape) -> Vec<TorusConfig> {
    let t = odd_tables(&unit_weight_model(cp), s).unwrap();
    let mut out = vec![];
    walk_all(s, &t, None, |bits, _: &f64, _| out.push(TorusConfig::from_bits(s, bits)));
    out
}

#[test]
fn ground_states_are_checkerboards() {
    for cp in [CpKind::Miura, CpKind::Trapezoid, CpKind::Kite, CpKind::BarretoMars] {
        let s = Shape::new(4, 4);
        let g = cp.ground_state(s).unwrap();
        let fc = creases_to_coloring(&g, cp, 0).unwrap();
        assert!(fc.is_proper());
        if cp == CpKind::BarretoMars {
            continue;
        }
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(fc.get(x, y), ((x + y) % 2) as u8, "{cp:?}");
            }
        }
        let one = creases_to_coloring(&g, cp, 1).unwrap();
        assert_eq!(one, fc.shifted(1));
        assert_eq!(coloring_to_creases(&fc, cp).unwrap(), g);
        assert_eq!(coloring_to_creases(&fc.shifted(1), cp).unwrap(), g);
    }
}

#[test]
fn face_flip_introduces_the_third_colour() {
    for cp in [CpKind::Miura, CpKind::Trapezoid] {
        let s = Shape::new(4, 4);
        let g = creases_to_coloring(&cp.ground_state(s).unwrap(), cp, 0).unwrap();
        for (fx, fy) in [(1, 1), (2, 1), (3, 2)] {
            let mut cfg = cp.ground_state(s).unwrap();
            cfg.flip_face(fx, fy);
            let fc = creases_to_coloring(&cfg, cp, 0).unwrap();
            let changed: Vec<_> = (0..16).filter(|&i| fc.colors[i] != g.colors[i]).collect();
            assert_eq!(changed, vec![s.site(fx, fy)]);
            assert_eq!(fc.colors[s.site(fx, fy)], 2);
        }
    }
}

#[test]
fn fibres_round_trip() {
    for cp in [CpKind::Miura, CpKind::Trapezoid] {
        for s in [Shape::new(2, 2), Shape::new(2, 4), Shape::new(4, 4)] {
            for cfg in configs(cp, s) {
                let Ok(c0) = creases_to_coloring(&cfg, cp, 0) else { continue };
                let fib: Vec<_> = (0..3).map(|k| creases_to_coloring(&cfg, cp, k).unwrap()).collect();
                assert!(fib[0] != fib[1] && fib[1] != fib[2] && fib[0] != fib[2]);
                for f in &fib {
                    assert!(f.is_proper());
                    assert_eq!(coloring_to_creases(f, cp).unwrap(), cfg);
                }
                assert_eq!(c0, fib[0]);
            }
        }
    }
}

#[test]
fn every_proper_colouring_is_flat_foldable() {
    let s = Shape::new(2, 4);
    for cp in [CpKind::Miura, CpKind::Trapezoid] {
        let mut n = 0;
        for code in 0..3usize.pow(8) {
            let mut c = code;
            let colors = (0..8)
                .map(|_| {
                    let d = (c % 3) as u8;
                    c /= 3;
                    d
                })
                .collect();
            let fc = FaceColoring { shape: s, colors };
            if !fc.is_proper() {
                assert_eq!(coloring_to_creases(&fc, cp), Err(Error::ImproperColoring));
                continue;
            }
            let cfg = coloring_to_creases(&fc, cp).unwrap();
            assert_eq!(creases_to_coloring(&cfg, cp, fc.colors[0]).unwrap(), fc);
            n += 1;
        }
        assert_eq!(n, 114);
    }
}

#[test]
fn count_identity() {
    // colourable configurations are in 3-to-1 correspondence with colourings;
    // the rest wind around the torus by a non-multiple of 3
    for cp in [CpKind::Miura, CpKind::Trapezoid] {
        for s in [Shape::new(2, 2), Shape::new(2, 4), Shape::new(4, 2), Shape::new(4, 4), Shape::new(2, 6)] {
            let c = count_colorable(cp, s).unwrap();
            let k = count_colorings(s, ColorFugacities::UNIT).unwrap();
            assert_eq!(k, 3.0 * c.consistent as f64, "{cp:?} {s:?}");
            let ff = count_flat_foldable(cp, s).unwrap();
            assert_eq!(c.consistent + c.winding, ff);
            // observed on every feasible torus: the totals coincide
            assert_eq!(k, ff as f64);
        }
    }
}

#[test]
fn transfer_count_matches_brute_force() {
    let z = [1.0, 0.7, 2.5];
    for (m, n) in [(2, 2), (2, 3), (3, 3), (3, 4), (2, 5)] {
        let s = Shape::new(m, n);
        let a = count_colorings(s, ColorFugacities(z)).unwrap();
        let b = brute_colorings(s, z);
        assert!((a - b).abs() <= 1e-12 * b, "{m}x{n}: {a} {b}");
    }
}

#[test]
fn two_colourings_only() {
    // z2 = 0: the two checkerboards on even tori, none on odd ones
    for (m, n, want) in [(2, 2, 2.0), (4, 4, 2.0), (4, 6, 2.0), (3, 4, 0.0)] {
        let k = count_colorings(Shape::new(m, n), ColorFugacities([1.0, 1.0, 0.0])).unwrap();
        assert_eq!(k, want, "{m}x{n}");
    }
    // one face of colour 2 in a checkerboard: z2 appears linearly with MN·2 terms
    let s = Shape::new(4, 4);
    let h = 1e-6;
    let d = (count_colorings(s, ColorFugacities([1.0, 1.0, h])).unwrap() - 2.0) / h;
    assert!((d - 32.0).abs() < 1e-3, "{d}");
}

#[test]
fn growth_approaches_the_entropy_constant() {
    let w = (4.0f64 / 3.0).powf(1.5);
    let mut prev = f64::INFINITY;
    for n in [2, 4, 6, 8] {
        let g = count_colorings(Shape::new(n, n), ColorFugacities::UNIT).unwrap().powf(1.0 / (n * n) as f64);
        assert!(g > w && g < prev, "{n}: {g}");
        prev = g;
    }
    assert!(prev - w < 0.03);
}

#[test]
fn kite_defect_lines_shift_colours() {
    // kite defects are staircases through the vertices of one anti-diagonal
    let cp = CpKind::Kite;
    let s = Shape::new(4, 4);
    let g = cp.ground_state(s).unwrap();
    let gc = creases_to_coloring(&g, cp, 0).unwrap();
    let off = |fc: &FaceColoring, x: usize, y: usize| (3 + fc.get(x, y) - gc.get(x, y)) % 3;
    let mut lines_seen = 0;
    for cfg in configs(cp, s) {
        let Ok(fc) = creases_to_coloring(&cfg, cp, 0) else { continue };
        // the offset from the ground colouring is constant along face anti-diagonals
        let band: Vec<u8> = (0..4).map(|d| off(&fc, d, 0)).collect();
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(off(&fc, x, y), band[(x + y) % 4]);
            }
        }
        // and changes by one exactly across reversed vertex diagonals
        for d in 0..4 {
            let reversed = (0..4).all(|x| {
                let y = (d + 4 - x) % 4;
                cfg.edges[s.right_edge(x, y)] != g.edges[s.right_edge(x, y)]
                    && cfg.edges[s.up_edge(x, y)] != g.edges[s.up_edge(x, y)]
            });
            let (below, above) = (band[(d + 3) % 4], band[d]);
            assert_eq!(reversed, below != above);
            if reversed {
                lines_seen += 1;
            }
        }
    }
    assert!(lines_seen > 0);
}

#[test]
fn kite_map_is_not_surjective() {
    let s = Shape::new(4, 4);
    let mut fc = creases_to_coloring(&CpKind::Kite.ground_state(s).unwrap(), CpKind::Kite, 0).unwrap();
    fc.colors[s.site(1, 2)] = 2;
    assert!(fc.is_proper());
    assert!(matches!(coloring_to_creases(&fc, CpKind::Kite), Err(Error::MaskViolation { .. })));
}

#[test]
fn barreto_defects_have_no_colouring() {
    let s = Shape::new(4, 4);
    let mut cfg = CpKind::BarretoMars.ground_state(s).unwrap();
    assert!(creases_to_coloring(&cfg, CpKind::BarretoMars, 0).is_ok());
    cfg.flip_face(1, 1);
    assert_eq!(creases_to_coloring(&cfg, CpKind::BarretoMars, 0), Err(Error::Unsupported));
    assert_eq!(creases_to_coloring(&cfg, CpKind::SimpleSquare, 0), Err(Error::Unsupported));
}

#[test]
fn locally_invalid_configurations_are_rejected() {
    let s = Shape::new(2, 2);
    let mut cfg = CpKind::Miura.ground_state(s).unwrap();
    cfg.edges[0] = cfg.edges[0].reversed();
    assert_eq!(creases_to_coloring(&cfg, CpKind::Miura, 0), Err(Error::ColoringInconsistent));
}

#[test]
fn sixvertex_weight_relations() {
    let z = ColorFugacities([0.7, 1.3, 2.2]);
    let w = colored_sixvertex_weights(z).unwrap();
    let f = |j: usize| z.0[j % 3];
    for j in 0..3 {
        let (zj, zm, zp) = (f(j), f(j + 2), f(j + 1));
        assert_eq!(w.get(1, j), w.get(2, j));
        assert!((w.get(1, j).powi(4) - zj * zj * zm * zp).abs() < 1e-13);
        assert!((w.get(3, j).powi(4) - zj * zm * zm * zp).abs() < 1e-13);
        assert!((w.get(4, j).powi(4) - zj * zm * zp * zp).abs() < 1e-13);
        assert!((w.get(5, j).powi(2) - zj * zj * zm * zm).abs() < 1e-13);
        assert!((w.get(6, j + 2).powi(2) - zj * zj * zm * zm).abs() < 1e-13);
    }
    // the defect family only has z2 free
    let w = colored_sixvertex_weights(ColorFugacities::defect(3.0)).unwrap();
    for j in 0..3 {
        let (zj, zm) = (f2(j), f2(j + 2));
        assert!((w.get(5, j).powi(2) - zj * zj * zm * zm).abs() < 1e-13);
    }
    assert_eq!(colored_sixvertex_weights(ColorFugacities([1.0, 0.0, 1.0])), Err(Error::InvalidWeight));
}

fn f2(j: usize) -> f64 {
    [1.0, 1.0, 3.0][j % 3]
}
