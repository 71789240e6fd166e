use gfrac::cf::{approximant, cf_limit, modified_approximant, tail_value, CfSpec, EvalOptions, Term};
use gfrac::gfraction::{determinant_check, gap_value_direct, gap_value_structural, GSequence, GapSpec};
use gfrac::hypergeom::{
    cf_spec_for, contiguous_residual, pq_difference_residual, ratio_oracle, schur_class_params, ContiguousRelation,
    Hyp2F1Params, RatioId,
};
use gfrac::pick::{map_halfplane_check, map_moment_check, omega_coefficient, standard_grid, PickMap};
use gfrac::schur::*;
use gfrac::{Complex, ComplexPoly, RationalFn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sample_points;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{cell, Num, Outcome, Params, Status, Table};

pub const SUITES: [&str; 5] = ["cf", "gap", "schur", "hyp", "pick"];

#[derive(Serialize)]
pub struct Check {
    check: String,
    params: Option<Params>,
    worst: Num,
    tol: Num,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct Report {
    suite: String,
    seed: u64,
    total: usize,
    passed: usize,
    failed: usize,
    pass: bool,
    checks: Vec<Check>,
}

struct Suite {
    seed: u64,
    checks: Vec<Check>,
}

impl Suite {
    /// Records `worst <= tol`; an evaluation error fails the check.
    fn add(&mut self, name: impl Into<String>, p: Option<(f64, f64, f64)>, tol: f64, worst: gfrac::Result<f64>) {
        let (w, err) = match worst {
            Ok(w) => (w, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.checks.push(Check {
            check: name.into(),
            params: p.map(|(a, b, c)| Params::new(a, b, c)),
            worst: Num(w),
            tol: Num(tol),
            pass: err.is_none() && w <= tol,
            error: err,
        });
    }

    /// Seeded points, a fresh stream per call site.
    fn points(&self, stream: u64, n: usize, radius: f64) -> Vec<Complex> {
        sample_points(self.seed.wrapping_add(stream), n, radius)
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn hp(a: f64, b: f64, cc: f64) -> gfrac::Result<Hyp2F1Params> {
    Hyp2F1Params::new(a, b, cc)
}

fn rel(got: Complex, want: Complex) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

fn max_of(it: impl IntoIterator<Item = gfrac::Result<f64>>) -> gfrac::Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, x| Ok(m.max(x?)))
}

const GAUSS: (f64, f64, f64) = (0.2, 0.6, 1.5);
const TRIPLES: [(f64, f64, f64); 3] = [(0.0, 0.1, 0.4), (0.2, 0.6, 1.5), (-0.5, 0.5, 1.0)];

fn gauss_seq() -> gfrac::Result<GSequence> {
    Ok(GSequence::Gauss(hp(GAUSS.0, GAUSS.1, GAUSS.2)?))
}

fn suite_cf(s: &mut Suite) {
    let pts = s.points(1, 5, 0.9);
    let det = (|| {
        let g = gauss_seq()?;
        let spec = gfrac::gfraction::gfrac_spec(&g)?;
        Ok(pts
            .iter()
            .flat_map(|&z| (1..=50).map(move |k| (k, z)))
            .map(|(k, z)| determinant_check(&g, &approximant(&spec, k, z), z).1)
            .fold(0.0, f64::max))
    })();
    s.add("g-fraction determinant identity, k <= 50", Some(GAUSS), 1e-12, det);

    let pts = s.points(2, 5, 0.5);
    let tail = (|| {
        let spec = gfrac::gfraction::gfrac_spec(&gauss_seq()?)?;
        let opts = EvalOptions::default();
        max_of(pts.iter().flat_map(|&z| [1usize, 3, 7, 15].map(|k| (k, z))).map(|(k, z)| {
            let full = cf_limit(&spec, z, opts)?.value;
            let t = tail_value(&spec, k, z, 2000, 1e-13)?;
            Ok(rel(modified_approximant(&approximant(&spec, k, z), -t.value)?, full))
        }))
    })();
    s.add("modified approximant with exact tail equals the limit", Some(GAUSS), 5e-13, tail);

    let deep = (|| {
        let spec = CfSpec::new(Term::Constant(c(0.0, 0.0)), |_| (Term::Constant(c(1.0, 0.0)), Term::Constant(c(3.0, 0.0))));
        let v = approximant(&spec, 1500, c(0.0, 0.0)).value(c(0.0, 0.0))?;
        Ok((v.re - (13f64.sqrt() - 3.0) / 2.0).abs())
    })();
    s.add("rescaled evaluation at depth 1500", None, 1e-15, deep);

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(3));
    let polys: Vec<ComplexPoly> = (0..10)
        .map(|_| ComplexPoly::new((0..6).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect()))
        .collect();
    let pts = s.points(4, 20, 2.0);
    let recip = max_of(polys.iter().flat_map(|p| pts.iter().map(move |&z| (p, z))).map(|(p, z)| {
        let n = p.degree() + 1;
        let want = z.powu(n as u32) * p.eval(c(1.0, 0.0) / z.conj()).conj();
        Ok((p.reciprocal(n)?.eval(z) - want).norm() / want.norm().max(1.0))
    }));
    s.add("reciprocal polynomial evaluation", None, 1e-12, recip);
}

fn suite_gap(s: &mut Suite) {
    let gaps = [
        GapSpec::Single(2),
        GapSpec::Single(3),
        GapSpec::Block { k: 2, l: 2 },
        GapSpec::Block { k: 1, l: 3 },
        GapSpec::Pair { k: 2, l: 5 },
        GapSpec::Pair { k: 1, l: 3 },
    ];
    let pts = s.points(10, 5, 0.7);
    let opts = EvalOptions::default();
    for gap in gaps {
        let worst = (|| {
            let g = gauss_seq()?;
            max_of(pts.iter().map(|&z| {
                let d = gap_value_direct(&g, gap, z, opts)?.value;
                Ok(rel(gap_value_structural(&g, gap, z, opts)?, d))
            }))
        })();
        s.add(format!("gap structural vs direct, gap {gap}"), Some(GAUSS), 1e-9, worst);
    }
    let pts = s.points(11, 5, 0.7);
    let seq = GSequence::Explicit(vec![0.3, 0.7, 0.2, 0.9, 0.5, 0.4, 0.6, 0.1, 0.8, 0.35]);
    let worst = max_of(pts.iter().flat_map(|&z| gaps.map(|g| (g, z))).map(|(gap, z)| {
        let d = gap_value_direct(&seq, gap, z, opts)?.value;
        Ok(rel(gap_value_structural(&seq, gap, z, opts)?, d))
    }));
    s.add("gap structural vs direct, explicit sequence", None, 1e-9, worst);
}

fn example() -> SchurParams {
    SchurParams::new(AlphaSeq::Example31)
}

fn example_t() -> gfrac::Result<(RationalFn, TransferMatrix)> {
    let f = example().seq.closed_form().ok_or_else(|| gfrac::Error::Unsupported("no closed form".into()))?;
    Ok((f, perturb_transfer_matrix(&example(), 1, c(0.5, 0.0))?))
}

fn poly_dev(p: &ComplexPoly, want: &[f64]) -> f64 {
    (0..want.len().max(p.coeffs().len()))
        .map(|j| (p.coeff(j) - c(*want.get(j).unwrap_or(&0.0), 0.0)).norm())
        .fold(0.0, f64::max)
}

fn suite_schur(s: &mut Suite) {
    let pts = s.points(20, 20, 0.9);
    let fp = (|| {
        let (f, t) = example_t()?;
        let fp = perturbed_schur_fn(map_of(f), &t);
        max_of(pts.iter().map(|&z| {
            let want = 2.0 * (z * z + 3.0 * z + 5.0) / (z * z - 3.0 * z + 20.0);
            Ok((fp(z)? - want).norm())
        }))
    })();
    s.add("example perturbed Schur function", None, 1e-12, fp);

    let cp = (|| {
        let (f, t) = example_t()?;
        let cp = perturbed_caratheodory_rational(&schur_to_caratheodory_rational(&f)?, &t)?;
        max_of(pts.iter().map(|&z| {
            let want = (2.0 * z.powu(3) + 7.0 * z * z + 7.0 * z + 20.0) / (-2.0 * z.powu(3) - 5.0 * z * z - 13.0 * z + 20.0);
            Ok((cp.eval(z)? - want).norm())
        }))
    })();
    s.add("example perturbed Caratheodory function", None, 1e-10, cp);

    let tm = example_t().map(|(_, t)| {
        [
            poly_dev(&t.t11, &[-1.0 / 12.0, 0.5, 1.0 / 12.0]),
            poly_dev(&t.t12, &[1.0 / 24.0, 0.0, -1.0 / 6.0]),
            poly_dev(&t.t21, &[-1.0 / 6.0, 0.0, 1.0 / 24.0]),
            poly_dev(&t.t22, &[1.0 / 12.0, 0.5, -1.0 / 12.0]),
            poly_dev(&t.p, &[2.0 / 3.0, 1.0 / 12.0]),
            poly_dev(&t.q, &[-1.0 / 3.0, -1.0 / 6.0]),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    });
    s.add("example transfer matrix coefficients", None, 1e-14, tm);

    let poles = (|| {
        let (f, t) = example_t()?;
        let cp = perturbed_caratheodory_rational(&schur_to_caratheodory_rational(&f)?, &t)?.cancel(1e-10)?;
        let min = cp.den().roots()?.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
        Ok((1.0 - min).max(0.0))
    })();
    s.add("example perturbed Caratheodory poles outside the open disk", None, 1e-8, poles);

    let sub = (|| {
        let (f, t) = example_t()?;
        subordination_check(&f, perturbed_schur_fn(map_of(f.clone()), &t), &subordination_grid())
    })();
    match sub {
        Ok(r) => s.checks.push(Check {
            check: "example subordination max |omega(z)|/|z|".into(),
            params: None,
            worst: Num(r.max_ratio),
            tol: Num(1.0),
            pass: r.all_below_one && r.omega_at_zero.norm() == 0.0,
            error: None,
        }),
        Err(e) => s.add("example subordination max |omega(z)|/|z|", None, 1.0, Err(e)),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(21));
    let mut alphas = |n: usize| -> Vec<Complex> {
        (0..n)
            .map(|_| Complex::from_polar(rng.gen_range(0.0..0.85), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect()
    };
    let params = SchurParams::explicit(alphas(11));
    let pts = s.points(22, 20, 1.0);
    let recip = (|| {
        let pairs = schur_pairs(&params, 21)?;
        let zp = ComplexPoly::monomial(c(1.0, 0.0), 1);
        let mut worst: f64 = 0.0;
        for n in 0..=10 {
            let (e, o) = (&pairs[2 * n], &pairs[2 * n + 1]);
            let cands = [
                (&o.a, &zp * &e.b.reciprocal(n)?),
                (&o.b, &zp * &e.a.reciprocal(n)?),
                (&e.a, o.b.reciprocal(n + 1)?),
                (&e.b, o.a.reciprocal(n + 1)?),
            ];
            for &z in &pts {
                for (lhs, rhs) in &cands {
                    worst = worst.max(rel(lhs.eval(z), rhs.eval(z)));
                }
            }
        }
        Ok(worst)
    })();
    s.add("reciprocal relations, n <= 10", None, 1e-12, recip);

    let params = SchurParams::explicit(alphas(8));
    let beta = alphas(1)[0];
    let pts = s.points(23, 5, 0.85);
    let ident = max_of((1..=3).flat_map(|k| pts.iter().flat_map(move |&z| (0..=4).map(move |dp| (k, z, dp)))).map(
        |(k, z, dp)| {
            let t = perturb_transfer_matrix(&params, k, beta)?;
            transfer_identity_residual(&params, &t, 2 * k + dp, z)
        },
    ));
    s.add("transfer matrix identity, random parameters", None, 1e-11, ident);

    let cases = [
        (c(0.3, 0.0), c(0.2, 0.0), c(-0.1, 0.0)),
        (c(0.2, 0.1), c(0.1, -0.3), c(0.4, 0.2)),
        (c(-0.35, 0.0), c(0.0, 0.5), c(-0.2, -0.6)),
    ];
    let pts = s.points(24, 20, 0.9);
    let cor = max_of(cases.iter().flat_map(|&cs| pts.iter().map(move |&z| (cs, z))).map(|((slope, a0, beta), z)| {
        let f = RationalFn::new(ComplexPoly::new(vec![a0, slope]), ComplexPoly::constant(c(1.0, 0.0)))?;
        let a1 = slope / (1.0 - a0.norm_sqr());
        let got = affine_perturbation(slope, a0, a0, a1, beta)?;
        let want = replace_parameter_rational(&f, 1, beta)?;
        Ok((got.eval(z)? - want.eval(z)?).norm())
    }));
    s.add("affine perturbation vs parameter substitution", None, 1e-12, cor);

    let gp = SchurParams::explicit(vec![c(0.0, 0.3), c(0.5, 0.0), c(-0.2, 0.1), c(0.3, 0.3), c(-0.1, -0.4), c(0.2, 0.0)]);
    let gb = c(0.0, 0.25);
    let steps: gfrac::Result<Vec<BilinearStep>> = (1..=5).map(|j| gamma_bilinear(&gp, 1, gb, j)).collect();
    match steps {
        Ok(steps) => {
            let res = steps.iter().map(|x| x.residual).fold(0.0, f64::max);
            s.add("gamma bilinear residual, j <= 5", None, 1e-12, Ok(res));
            let lo = steps.iter().map(|x| x.invariant).fold(f64::INFINITY, f64::min);
            let hi = steps.iter().map(|x| x.invariant).fold(f64::NEG_INFINITY, f64::max);
            s.add("gamma bilinear invariant spread", None, 1e-12, Ok(hi - lo));
        }
        Err(e) => s.add("gamma bilinear residual, j <= 5", None, 1e-12, Err(e)),
    }
    let real = SchurParams::explicit((0..21).map(|j| c(0.9 * ((j as f64) * 1.3).sin(), 0.0)).collect());
    let g1 = gamma_sequence(&real, 20).map(|g| g.gammas.iter().map(|x| (x - c(1.0, 0.0)).norm()).fold(0.0, f64::max));
    s.add("real parameters give gamma = 1, p <= 20", None, 1e-14, g1);
}

fn suite_hyp(s: &mut Suite) {
    let ids = [
        RatioId::Gauss,
        RatioId::Kustner,
        RatioId::G(1),
        RatioId::G(2),
        RatioId::F(1),
        RatioId::F(2),
        RatioId::F(3),
        RatioId::F(4),
    ];
    let pts = s.points(30, 5, 0.5);
    let opts = EvalOptions::default();
    for (a, b, cc) in [GAUSS, (0.0, 0.1, 0.4)] {
        for id in ids {
            let worst = (|| {
                let p = hp(a, b, cc)?;
                let (spec, _) = cf_spec_for(id, &p)?;
                max_of(pts.iter().map(|&w| Ok((cf_limit(&spec, w, opts)?.value - ratio_oracle(id, &p, w)?).norm())))
            })();
            s.add(format!("{id} fraction vs series ratio"), Some((a, b, cc)), 1e-9, worst);
        }
    }
    let gap2 = (|| {
        let p = hp(0.0, 0.1, 0.4)?;
        let g = GSequence::Kustner(p);
        max_of(pts.iter().map(|&w| {
            let d = gap_value_direct(&g, GapSpec::Single(2), w, opts)?.value;
            Ok((ratio_oracle(RatioId::FGap2, &p, w)? - d).norm())
        }))
    })();
    s.add("F(2) gap assembly vs gapped Kustner fraction", Some((0.0, 0.1, 0.4)), 1e-9, gap2);

    let avals = [-0.5, 0.0, 0.3, 0.7, 1.2];
    let bvals = [0.0, 0.2, 0.5, 0.9, 1.1];
    let cvals = [1.2, 1.5, 1.8, 2.3, 3.1];
    let mut lattice = Vec::new();
    for a in avals {
        for b in bvals {
            for cc in cvals {
                lattice.push((a, b, cc));
            }
        }
    }
    let pts = s.points(31, 3, 0.5);
    for rel in ContiguousRelation::ALL {
        let worst = max_of(
            lattice
                .iter()
                .flat_map(|&t| pts.iter().map(move |&w| (t, w)))
                .map(|((a, b, cc), w)| contiguous_residual(rel, &hp(a, b, cc)?, w)),
        );
        s.add(format!("contiguous relation {}, 5x5x5 lattice", rel.name()), None, 1e-12, worst);
    }
    let pq = max_of((0..=4).flat_map(|j| pts.iter().map(move |&w| (j, w))).map(|(j, w)| {
        let (rp, rq) = pq_difference_residual(&hp(GAUSS.0, GAUSS.1, GAUSS.2)?, j, w)?;
        Ok(rp.max(rq))
    }));
    s.add("P/Q difference equation, j <= 4", Some(GAUSS), 1e-13, pq);

    let class = max_of([1.0, 2.0, 3.5].into_iter().flat_map(|b| (0..=20).map(move |j| (b, j))).map(|(b, j)| {
        Ok((schur_class_params(b - 0.5, b, b, j)?.alpha - (-b / (b + j as f64))).abs())
    }));
    s.add("class special case alpha_j = -b/(b+j), j <= 20", None, 0.0, class);
    let bridge = max_of(TRIPLES.into_iter().flat_map(|t| (1..=20).map(move |j| (t, j))).map(|((a, b, cc), j)| {
        let f1 = GSequence::ShiftedF { params: hp(a, b, cc)?, n: 1 };
        Ok((schur_class_params(a, b, cc, j - 1)?.alpha - (1.0 - 2.0 * f1.get(j))).abs())
    }));
    s.add("bridge alpha_(j-1) = 1 - 2 k_j, j <= 20", None, 1e-15, bridge);
}

fn suite_pick(s: &mut Suite) {
    let grid = standard_grid();
    for (a, b, cc) in TRIPLES {
        let p = match hp(a, b, cc) {
            Ok(p) => p,
            Err(e) => {
                s.add("parameters", Some((a, b, cc)), 0.0, Err(e));
                continue;
            }
        };
        for map in PickMap::ALL {
            let tm = map_moment_check(map, &p, 8, 1e-10).map(|r| r.worst);
            s.add(format!("{map} totally monotone, K = 8"), Some((a, b, cc)), 1e-10, tm);
            let hpos = map_halfplane_check(map, &p, &grid, EvalOptions::default()).and_then(|r| {
                if r.failures.is_empty() {
                    Ok(r.worst)
                } else {
                    Err(gfrac::Error::Domain(format!("{} grid evaluations failed", r.failures.len())))
                }
            });
            s.add(format!("{map} half-plane positivity"), Some((a, b, cc)), -gfrac::pick::HALFPLANE_TOL, hpos);
        }
        let om = omega_coefficient(&p).map(|(got, want)| (got - want).abs());
        s.add("omega coefficient k3 + (1 - k3) k2", Some((a, b, cc)), 1e-12, om);
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let selected: Vec<&str> = match cfg.suite.as_str() {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => {
            return Err(CliError::input(format!(
                "unknown suite '{other}' (one of all, {})",
                SUITES.join(", ")
            )))
        }
    };
    let mut suite = Suite { seed: cfg.seed, checks: Vec::new() };
    for name in selected {
        let before = suite.checks.len();
        match name {
            "cf" => suite_cf(&mut suite),
            "gap" => suite_gap(&mut suite),
            "schur" => suite_schur(&mut suite),
            "hyp" => suite_hyp(&mut suite),
            _ => suite_pick(&mut suite),
        }
        for ch in &mut suite.checks[before..] {
            ch.check = format!("{name}: {}", ch.check);
        }
    }
    let passed = suite.checks.iter().filter(|c| c.pass).count();
    let total = suite.checks.len();
    let report = Report {
        suite: cfg.suite.clone(),
        seed: cfg.seed,
        total,
        passed,
        failed: total - passed,
        pass: passed == total,
        checks: suite.checks,
    };
    let table = Table {
        header: vec!["check", "a", "b", "c", "worst", "tol", "pass"],
        rows: report
            .checks
            .iter()
            .map(|ch| {
                let p = |x: fn(&Params) -> f64| ch.params.as_ref().map_or(String::new(), |q| cell(x(q)));
                vec![
                    ch.check.clone(),
                    p(|q| q.a.0),
                    p(|q| q.b.0),
                    p(|q| q.c.0),
                    cell(ch.worst.0),
                    cell(ch.tol.0),
                    ch.pass.to_string(),
                ]
            })
            .collect(),
    };
    let out = Outcome::new(&report, Some(table))?;
    Ok(if report.pass {
        out
    } else {
        out.with_status(Status::Failed, format!("{} of {} checks failed", report.failed, report.total))
    })
}
