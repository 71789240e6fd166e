//! Flags, the optional JSON config file, and defaults. Flags win over the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gfrac::Complex;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::output::Format;

pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Parser, Debug)]
#[command(name = "gfrac", version, about = "g-fractions, Schur fractions and hypergeometric ratios")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Evaluate a named fraction at one point.
    Eval,
    /// Compare the structural gap formula with direct evaluation.
    GapCompare,
    /// Transfer matrix and perturbed Schur function for alpha_k -> beta.
    SchurPerturb,
    /// Image of a circle under one of the functions, as curve data.
    MapImage,
    /// Run a verification suite.
    Verify,
    /// Totally monotone check of a map's Taylor coefficients.
    MomentCheck,
}

/// Every flag is optional here; `RunConfig::resolve` fills defaults.
#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Flags {
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z_re: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z_im: Option<f64>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// `k`, `k..m` (inclusive block) or `k,l` (pair)
    #[arg(long, global = true)]
    pub gap: Option<String>,
    /// `example31`, `class:a,b,c`, or a file with one `re im` pair per line
    #[arg(long, global = true)]
    pub alphas: Option<String>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta_re: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta_im: Option<f64>,
    /// Family for eval and gap-compare, curve for map-image, map index for moment-check
    #[arg(long, global = true)]
    pub function: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true)]
    pub suite: Option<String>,
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Explicit moment file for moment-check, one value per line
    #[arg(long, global = true)]
    pub nu: Option<PathBuf>,
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Flags {
    /// Fields set here win; the rest come from `base`.
    fn over(self, base: Flags) -> Flags {
        macro_rules! pick {
            ($($f:ident),*) => { Flags { $($f: self.$f.or(base.$f),)* } };
        }
        pick!(a, b, c, z_re, z_im, depth, tol, gap, alphas, k, beta_re, beta_im, function, radius, samples, order, suite, format, out, nu, config)
    }
}

/// Fully resolved settings.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: Complex,
    /// Whether a point was given explicitly.
    pub z_given: bool,
    pub depth: usize,
    pub tol: f64,
    pub gap: String,
    pub alphas: String,
    pub k: usize,
    pub beta: Complex,
    pub function: Option<String>,
    pub radius: f64,
    pub samples: usize,
    pub order: usize,
    pub suite: String,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub nu: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(flags: Flags) -> CliResult<Self> {
        let merged = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
                let file: Flags = serde_json::from_str(&text)
                    .map_err(|e| CliError::input(format!("bad config {}: {e}", path.display())))?;
                flags.over(file)
            }
            None => flags,
        };
        let seed = match std::env::var("GFRAC_SEED") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::input(format!("GFRAC_SEED = '{s}' is not an unsigned integer")))?,
            Err(_) => DEFAULT_SEED,
        };
        let cfg = RunConfig {
            a: merged.a.unwrap_or(0.2),
            b: merged.b.unwrap_or(0.6),
            c: merged.c.unwrap_or(1.5),
            z_given: merged.z_re.is_some() || merged.z_im.is_some(),
            z: Complex::new(merged.z_re.unwrap_or(0.3), merged.z_im.unwrap_or(0.0)),
            depth: merged.depth.unwrap_or(2000),
            tol: merged.tol.unwrap_or(1e-10),
            gap: merged.gap.unwrap_or_else(|| "2".into()),
            alphas: merged.alphas.unwrap_or_else(|| "example31".into()),
            k: merged.k.unwrap_or(1),
            beta: Complex::new(merged.beta_re.unwrap_or(0.5), merged.beta_im.unwrap_or(0.0)),
            function: merged.function,
            radius: merged.radius.unwrap_or(0.9),
            samples: merged.samples.unwrap_or(720),
            order: merged.order.unwrap_or(8),
            suite: merged.suite.unwrap_or_else(|| "all".into()),
            format: merged.format.as_deref().unwrap_or("json").parse()?,
            out: merged.out,
            nu: merged.nu,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        let finite = [self.a, self.b, self.c, self.z.re, self.z.im, self.beta.re, self.beta.im, self.radius];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(CliError::input("numeric flags must be finite"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::input("tol must be positive"));
        }
        if self.depth == 0 {
            return Err(CliError::input("depth must be positive"));
        }
        if self.samples < 8 {
            return Err(CliError::input("samples must be at least 8"));
        }
        Ok(())
    }

    pub fn function_or(&self, default: &str) -> String {
        self.function.clone().unwrap_or_else(|| default.to_string())
    }
}
