//! Oracle / Pfaffian / closed-form comparisons on small tori.

use std::collections::BTreeMap;

use flatfold_core::coloring::{count_colorable, count_colorings, ColorFugacities};
use flatfold_core::dimer::finite_Z;
use flatfold_core::enumerate::{count_flat_foldable, transfer_Z};
use flatfold_core::freeenergy::kite_Z;
use flatfold_core::model::{defect_family, CpKind, Staggering};
use flatfold_core::sixteen::{sixteen_finite_Z, SixteenVertexWeights};
use flatfold_core::{Result, Shape};
use rand::Rng;
use serde::Serialize;

use crate::draws::{ff_model, rng};
use crate::enumeration::{exact_Z, par_enumerate_Z, to_f64};
use crate::output::{Report, SCHEMA_VERSION};

/// What to compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Random free-fermion simple-square draws on all four staggerings.
    Square,
    Miura,
    Trapezoid,
    /// Defect family at `y ∈ {0.3, 0.7, 1}` against `(1 + y⁴)^{MN/2}`.
    Barreto,
    /// Random kite draws against the transfer-matrix closed form.
    Kite,
    /// Colour counts against three times the consistently colourable
    /// crease configurations.
    Coloring,
    /// Solvable 16-vertex draws: transfer matrix against the even Pfaffian.
    Sixteen,
}

impl Suite {
    pub const DEFAULT: [Suite; 6] = [Suite::Square, Suite::Miura, Suite::Trapezoid, Suite::Barreto, Suite::Kite, Suite::Sixteen];

    fn family(self) -> &'static str {
        match self {
            Suite::Barreto => "defect-y",
            Suite::Coloring => "unit-fugacity",
            _ => "random-free-fermion",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Square => "square",
            Suite::Miura => "miura",
            Suite::Trapezoid => "trapezoid",
            Suite::Barreto => "barreto",
            Suite::Kite => "kite",
            Suite::Coloring => "coloring",
            Suite::Sixteen => "sixteen",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub draws: usize,
    pub tol: f64,
    /// Oracle in exact rational arithmetic.
    pub exact: bool,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 1, draws: 20, tol: 1e-10, exact: false, threads: crate::enumeration::default_threads() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Row {
    pub suite: &'static str,
    pub staggering: String,
    pub m: usize,
    pub n: usize,
    pub draw: usize,
    pub oracle: f64,
    pub pfaffian: Option<f64>,
    pub closed_form: Option<f64>,
    pub rel_err: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<&'static str, f64>,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / a.abs().max(b.abs())).abs()
    }
}

impl Row {
    fn new(suite: Suite, st: &str, s: Shape, draw: usize, oracle: f64, pf: Option<f64>, cf: Option<f64>) -> Row {
        let rel_err = pf.iter().chain(cf.iter()).map(|&x| rel(oracle, x)).fold(0.0, f64::max);
        Row {
            suite: suite.name(),
            staggering: st.to_string(),
            m: s.m,
            n: s.n,
            draw,
            oracle,
            pfaffian: pf,
            closed_form: cf,
            rel_err,
            extra: BTreeMap::new(),
        }
    }
}

/// Tori of at most 16 edges that tile with the staggering and have an even
/// number of columns.
pub fn small_shapes(st: Staggering) -> Vec<Shape> {
    let (pm, pn) = st.period();
    let mut out = Vec::new();
    for m in 1..=8 {
        for n in (2..=8).step_by(2) {
            if m * n <= 8 && m % pm == 0 && n % pn == 0 {
                out.push(Shape::new(m, n));
            }
        }
    }
    out
}

fn oracle(model: &flatfold_core::StaggeredModel, s: Shape, o: &VerifyOptions) -> Result<f64> {
    if o.exact {
        Ok(to_f64(&exact_Z(model, s, o.threads)?.0))
    } else {
        Ok(par_enumerate_Z(model, s, o.threads)?.value)
    }
}

fn random_suite(suite: Suite, cp: CpKind, sts: &[Staggering], o: &VerifyOptions, rows: &mut Vec<Row>) -> Result<()> {
    let mut r = rng(o.seed ^ (suite as u64) << 32);
    for &st in sts {
        for d in 0..o.draws {
            let m = ff_model(&mut r, cp, st)?;
            for s in small_shapes(st) {
                let e = oracle(&m, s, o)?;
                let p = finite_Z(&m, s)?;
                let k = if cp == CpKind::Kite { Some(kite_Z(&m.v, &m.w, s)?) } else { None };
                rows.push(Row::new(suite, &format!("{st:?}"), s, d, e, Some(p), k));
            }
        }
    }
    Ok(())
}

pub fn run_suite(suite: Suite, o: &VerifyOptions) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    match suite {
        Suite::Square => random_suite(
            suite,
            CpKind::SimpleSquare,
            &[Staggering::Homogeneous, Staggering::ColumnTwo, Staggering::BipartiteTwo, Staggering::ColumnFour],
            o,
            &mut rows,
        )?,
        Suite::Miura => random_suite(suite, CpKind::Miura, &[Staggering::ColumnFour], o, &mut rows)?,
        Suite::Trapezoid => random_suite(suite, CpKind::Trapezoid, &[Staggering::BipartiteTwo], o, &mut rows)?,
        Suite::Kite => random_suite(suite, CpKind::Kite, &[Staggering::BipartiteTwo], o, &mut rows)?,
        Suite::Barreto => {
            for (d, y) in [0.3f64, 0.7, 1.0].into_iter().enumerate() {
                let m = defect_family(CpKind::BarretoMars, y);
                for s in [Shape::new(2, 2), Shape::new(2, 4), Shape::new(4, 2), Shape::new(4, 4)] {
                    let e = oracle(&m, s, o)?;
                    let closed = (1.0 + y.powi(4)).powi((s.sites() / 2) as i32);
                    let mut row = Row::new(suite, "ColumnFour", s, d, e, Some(finite_Z(&m, s)?), Some(closed));
                    row.extra.insert("y", y);
                    rows.push(row);
                }
            }
        }
        Suite::Coloring => {
            for (d, cp) in [CpKind::Miura, CpKind::Trapezoid].into_iter().enumerate() {
                for s in [Shape::new(2, 2), Shape::new(2, 4), Shape::new(4, 2), Shape::new(4, 4), Shape::new(2, 6)] {
                    let colorings = count_colorings(s, ColorFugacities::UNIT)?;
                    let c = count_colorable(cp, s)?;
                    let mut row = Row::new(suite, &format!("{cp:?}"), s, d, colorings, None, Some(3.0 * c.consistent as f64));
                    row.extra.insert("flat_foldable", count_flat_foldable(cp, s)? as f64);
                    row.extra.insert("consistent", c.consistent as f64);
                    row.extra.insert("winding", c.winding as f64);
                    rows.push(row);
                }
            }
        }
        Suite::Sixteen => {
            let mut r = rng(o.seed ^ (suite as u64) << 32);
            for d in 0..o.draws {
                let x = solvable_sixteen(&mut r);
                for s in [Shape::new(2, 2), Shape::new(2, 4), Shape::new(4, 2), Shape::new(4, 4), Shape::new(6, 6)] {
                    let z = transfer_Z(s, &x.tables(s));
                    rows.push(Row::new(suite, "Even", s, d, z, Some(sixteen_finite_Z(&x, s)?), None));
                }
            }
        }
    }
    Ok(rows)
}

/// Symmetric 16-vertex weights on the free-fermion surface, `v3` solved.
pub fn solvable_sixteen<R: Rng>(r: &mut R) -> SixteenVertexWeights {
    loop {
        let o: [f64; 4] = std::array::from_fn(|_| r.gen_range(0.3..1.3));
        let (v1, v5, v7) = (r.gen_range(0.3..1.3), r.gen_range(0.3..1.3), r.gen_range(0.3..1.3));
        let v3 = (o[0] * o[1] + o[2] * o[3] - v5 * v7) / v1;
        if v3 > 0.05 {
            if let Ok(s) = SixteenVertexWeights::symmetric(o, [v1, v3, v5, v7]) {
                return s;
            }
        }
    }
}

/// Run several suites into one report.
pub fn verify(suites: &[Suite], o: &VerifyOptions) -> Result<Report> {
    let mut rows = Vec::new();
    for &s in suites {
        rows.extend(run_suite(s, o)?);
    }
    let max = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let shapes: Vec<[usize; 2]> = {
        let mut v: Vec<[usize; 2]> = rows.iter().map(|r| [r.m, r.n]).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut tolerances = BTreeMap::new();
    tolerances.insert("rel".to_string(), o.tol);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        model: suites.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
        family: {
            let mut f: Vec<&str> = suites.iter().map(|s| s.family()).collect();
            f.dedup();
            f.join(",")
        },
        grid: serde_json::json!({ "shapes": shapes, "seed": o.seed, "draws": o.draws }),
        rows: rows.iter().map(|r| serde_json::to_value(r).expect("row serialises")).collect(),
        max_rel_err: Some(max),
        tolerances,
    })
}
