pub mod eval;
pub mod gap;
pub mod map_image;
pub mod moment;
pub mod schur;
pub mod verify;

use std::sync::Arc;

use gfrac::cf::EvalOptions;
use gfrac::hypergeom::{Hyp2F1Params, RatioId};
use gfrac::schur::{map_of, schur_function_value, AlphaSeq, ComplexMap, SchurParams};
use gfrac::{Complex, RationalFn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub fn params(cfg: &RunConfig) -> CliResult<Hyp2F1Params> {
    Ok(Hyp2F1Params::new(cfg.a, cfg.b, cfg.c)?)
}

pub fn family(cfg: &RunConfig, default: &str) -> CliResult<RatioId> {
    Ok(cfg.function_or(default).parse::<RatioId>()?)
}

/// Engine options; the CF tolerance never exceeds the engine default.
pub fn eval_options(cfg: &RunConfig) -> EvalOptions {
    EvalOptions {
        tol: cfg.tol.min(EvalOptions::default().tol),
        max_depth: cfg.depth,
    }
}

/// Parameters plus the closed-form Schur function when one is known.
pub struct AlphaSource {
    pub params: SchurParams,
    pub closed: Option<RationalFn>,
}

impl AlphaSource {
    pub fn load(src: &str) -> CliResult<Self> {
        let seq = if src == "example31" {
            AlphaSeq::Example31
        } else if let Some(rest) = src.strip_prefix("class:") {
            let v: Vec<f64> = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::input(format!("bad class parameters '{rest}'")))?;
            if v.len() != 3 {
                return Err(CliError::input("class source needs a,b,c"));
            }
            AlphaSeq::SchurClass { a: v[0], b: v[1], c: v[2] }
        } else {
            AlphaSeq::Explicit(read_alpha_file(src)?)
        };
        let params = SchurParams::new(seq);
        let closed = params.seq.closed_form();
        Ok(AlphaSource { params, closed })
    }

    /// The Schur function: exact when known, otherwise the converged approximant.
    pub fn function(&self, cfg: &RunConfig) -> ComplexMap {
        match &self.closed {
            Some(r) => map_of(r.clone()),
            None => {
                let p = self.params.clone();
                let (tol, depth) = (cfg.tol.min(1e-14), cfg.depth);
                Arc::new(move |z| schur_function_value(&p, z, tol, depth))
            }
        }
    }
}

fn read_alpha_file(path: &str) -> CliResult<Vec<Complex>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read alpha file '{path}': {e}")))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::input(format!("{path}:{}: '{s}' is not a number", i + 1)))
        };
        let z = match parts.as_slice() {
            [re] => Complex::new(num(re)?, 0.0),
            [re, im] => Complex::new(num(re)?, num(im)?),
            _ => return Err(CliError::input(format!("{path}:{}: expected 're im'", i + 1))),
        };
        out.push(gfrac::complex(z.re, z.im)?);
    }
    if out.is_empty() {
        return Err(CliError::input(format!("alpha file '{path}' is empty")));
    }
    Ok(out)
}

/// Seeded sample points, uniform in the disk of the given radius.
pub fn sample_points(seed: u64, n: usize, radius: f64) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            Complex::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
        })
        .collect()
}
