use gfrac::schur::{
    perturb_transfer_matrix, perturbed_schur_fn, schur_function_value, subordination_check, subordination_grid,
};
use rayon::prelude::*;
use serde::Serialize;

use super::{sample_points, AlphaSource};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{cell, coeff_list, Cx, Num, Outcome, Table};

pub const SAMPLE_COUNT: usize = 20;
pub const SAMPLE_RADIUS: f64 = 0.9;

#[derive(Serialize)]
struct Sample {
    z: Cx,
    f: Option<Cx>,
    /// Through the transfer matrix.
    f_pert: Option<Cx>,
    /// Schur fraction of the substituted sequence.
    f_subst: Option<Cx>,
    abs_diff: Num,
    error: Option<String>,
}

#[derive(Serialize)]
struct Subordination {
    points: usize,
    max_ratio: Num,
    worst_z: Cx,
    omega_at_zero: Cx,
    all_below_one: bool,
}

#[derive(Serialize)]
struct PerturbRecord {
    alphas: String,
    k: usize,
    beta: Cx,
    alpha_k: Cx,
    scalar: Cx,
    z_power: u32,
    t11: Vec<[Num; 2]>,
    t12: Vec<[Num; 2]>,
    t21: Vec<[Num; 2]>,
    t22: Vec<[Num; 2]>,
    p: Vec<[Num; 2]>,
    q: Vec<[Num; 2]>,
    p_star: Vec<[Num; 2]>,
    q_star: Vec<[Num; 2]>,
    samples: Vec<Sample>,
    max_abs_diff: Num,
    subordination: Option<Subordination>,
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let src = AlphaSource::load(&cfg.alphas)?;
    let t = perturb_transfer_matrix(&src.params, cfg.k, cfg.beta)?;
    let pert = src.params.with_replacement(cfg.k, cfg.beta)?;
    let f = src.function(cfg);
    let fp = perturbed_schur_fn(f.clone(), &t);

    let mut points = Vec::new();
    if cfg.z_given {
        points.push(cfg.z);
    }
    points.extend(sample_points(cfg.seed, SAMPLE_COUNT, SAMPLE_RADIUS));

    let (tol, depth) = (cfg.tol.min(1e-14), cfg.depth);
    let samples: Vec<Sample> = points
        .par_iter()
        .map(|&z| {
            let fz = f(z);
            let via_t = fp(z);
            let subst = schur_function_value(&pert, z, tol, depth);
            let diff = match (&via_t, &subst) {
                (Ok(a), Ok(b)) => (a - b).norm(),
                _ => f64::NAN,
            };
            let error = [&fz, &via_t, &subst]
                .iter()
                .find_map(|r| r.as_ref().err().map(|e| e.to_string()));
            Sample {
                z: z.into(),
                f: fz.ok().map(Cx::from),
                f_pert: via_t.ok().map(Cx::from),
                f_subst: subst.ok().map(Cx::from),
                abs_diff: Num(diff),
                error,
            }
        })
        .collect();
    let max_abs_diff = samples.iter().map(|s| s.abs_diff.0).fold(0.0, |m: f64, d| if d.is_nan() { m } else { m.max(d) });

    let subordination = match &src.closed {
        Some(r) if r.den().degree() == 0 && r.num().degree() == 1 => {
            let rep = subordination_check(r, fp.clone(), &subordination_grid())?;
            Some(Subordination {
                points: rep.points,
                max_ratio: Num(rep.max_ratio),
                worst_z: rep.worst_z.into(),
                omega_at_zero: rep.omega_at_zero.into(),
                all_below_one: rep.all_below_one,
            })
        }
        _ => None,
    };

    let table = Table {
        header: vec!["z_re", "z_im", "f_re", "f_im", "f_pert_re", "f_pert_im", "f_subst_re", "f_subst_im", "abs_diff"],
        rows: samples
            .iter()
            .map(|s| {
                let part = |c: &Option<Cx>| match c {
                    Some(c) => [cell(c.re.0), cell(c.im.0)],
                    None => [String::new(), String::new()],
                };
                let mut row = vec![cell(s.z.re.0), cell(s.z.im.0)];
                row.extend(part(&s.f));
                row.extend(part(&s.f_pert));
                row.extend(part(&s.f_subst));
                row.push(cell(s.abs_diff.0));
                row
            })
            .collect(),
    };

    let rec = PerturbRecord {
        alphas: cfg.alphas.clone(),
        k: cfg.k,
        beta: cfg.beta.into(),
        alpha_k: src.params.alpha(cfg.k).into(),
        scalar: t.scalar.into(),
        z_power: t.z_power,
        t11: coeff_list(&t.t11),
        t12: coeff_list(&t.t12),
        t21: coeff_list(&t.t21),
        t22: coeff_list(&t.t22),
        p: coeff_list(&t.p),
        q: coeff_list(&t.q),
        p_star: coeff_list(&t.p_star),
        q_star: coeff_list(&t.q_star),
        samples,
        max_abs_diff: Num(max_abs_diff),
        subordination,
    };
    Outcome::new(&rec, Some(table))
}
