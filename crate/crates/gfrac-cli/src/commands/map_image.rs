use std::sync::Arc;

use gfrac::cf::cf_limit;
use gfrac::gfraction::gap_value_direct;
use gfrac::gfraction::{GSequence, GapSpec};
use gfrac::hypergeom::{cf_spec_for, RatioId};
use gfrac::schur::{perturb_transfer_matrix, perturbed_caratheodory, perturbed_schur_fn, schur_to_caratheodory, ComplexMap};
use gfrac::{Complex, Error};
use rayon::prelude::*;
use serde::Serialize;

use super::{eval_options, params, AlphaSource};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{cell, Num, Outcome, Table};

pub const FUNCTIONS: [&str; 6] = ["f", "f-pert", "carat", "carat-pert", "kustner-F", "F-gap2"];

#[derive(Serialize)]
struct Point {
    theta: Num,
    in_re: Num,
    in_im: Num,
    out_re: Num,
    out_im: Num,
    status: &'static str,
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::Pole { .. } => "pole",
        Error::Convergence { .. } => "nonconvergent",
        _ => "error",
    }
}

fn build(cfg: &RunConfig, name: &str) -> CliResult<ComplexMap> {
    let schur = || -> CliResult<(AlphaSource, ComplexMap)> {
        let src = AlphaSource::load(&cfg.alphas)?;
        let f = src.function(cfg);
        Ok((src, f))
    };
    Ok(match name {
        "f" => schur()?.1,
        "f-pert" => {
            let (src, f) = schur()?;
            perturbed_schur_fn(f, &perturb_transfer_matrix(&src.params, cfg.k, cfg.beta)?)
        }
        "carat" => schur_to_caratheodory(schur()?.1),
        "carat-pert" => {
            let (src, f) = schur()?;
            let t = perturb_transfer_matrix(&src.params, cfg.k, cfg.beta)?;
            perturbed_caratheodory(schur_to_caratheodory(f), &t)
        }
        "kustner-F" => {
            let (spec, _) = cf_spec_for(RatioId::Kustner, &params(cfg)?)?;
            let opts = eval_options(cfg);
            Arc::new(move |w| Ok(cf_limit(&spec, w, opts)?.value))
        }
        "F-gap2" => {
            let g = GSequence::Kustner(params(cfg)?);
            gfrac::gfraction::gfrac_spec(&g)?;
            let opts = eval_options(cfg);
            Arc::new(move |w| Ok(gap_value_direct(&g, GapSpec::Single(2), w, opts)?.value))
        }
        other => {
            return Err(CliError::input(format!(
                "unknown function '{other}' (one of {})",
                FUNCTIONS.join(", ")
            )))
        }
    })
}

/// `samples` points on `|z| = radius`, theta ascending over `[0, 2 pi)`.
pub fn circle(radius: f64, samples: usize) -> Vec<(f64, Complex)> {
    (0..samples)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / samples as f64;
            (t, Complex::from_polar(radius, t))
        })
        .collect()
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let name = cfg.function_or("f");
    let f = build(cfg, &name)?;
    if !(cfg.radius > 0.0 && cfg.radius < 1.0) {
        return Err(CliError::input("radius must lie in (0, 1)"));
    }
    let points: Vec<Point> = circle(cfg.radius, cfg.samples)
        .par_iter()
        .map(|&(theta, z)| {
            let (out, status) = match f(z) {
                Ok(v) if v.re.is_finite() && v.im.is_finite() => (v, "ok"),
                Ok(_) => (Complex::new(f64::NAN, f64::NAN), "pole"),
                Err(e) => (Complex::new(f64::NAN, f64::NAN), status_of(&e)),
            };
            Point {
                theta: Num(theta),
                in_re: Num(z.re),
                in_im: Num(z.im),
                out_re: Num(out.re),
                out_im: Num(out.im),
                status,
            }
        })
        .collect();
    let table = Table {
        header: vec!["theta", "in_re", "in_im", "out_re", "out_im", "status"],
        rows: points
            .iter()
            .map(|p| {
                vec![
                    cell(p.theta.0),
                    cell(p.in_re.0),
                    cell(p.in_im.0),
                    cell(p.out_re.0),
                    cell(p.out_im.0),
                    p.status.to_string(),
                ]
            })
            .collect(),
    };
    Outcome::new(&points, Some(table))
}
