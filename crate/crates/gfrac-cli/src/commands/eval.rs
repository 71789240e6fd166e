use gfrac::cf::cf_limit;
use gfrac::hypergeom::cf_spec_for;
use gfrac::Error;
use serde::Serialize;

use super::{family, params};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{cell, Cx, Num, Outcome, Params, Status, Table};

#[derive(Serialize)]
struct EvalRecord {
    family: String,
    params: Params,
    z: Cx,
    value_re: Num,
    value_im: Num,
    depth_used: usize,
    converged: bool,
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let id = family(cfg, "kustner")?;
    let p = params(cfg)?;
    let (spec, _) = cf_spec_for(id, &p)?;
    let opts = gfrac::cf::EvalOptions {
        tol: cfg.tol,
        max_depth: cfg.depth,
    };
    let (value, depth, converged, err) = match cf_limit(&spec, cfg.z, opts) {
        Ok(l) => (l.value, l.depth, true, None),
        Err(Error::Convergence { depth, last, .. }) => (last, depth, false, Some(depth)),
        Err(e) => return Err(e.into()),
    };
    let rec = EvalRecord {
        family: id.to_string(),
        params: Params::new(p.a, p.b, p.c),
        z: cfg.z.into(),
        value_re: Num(value.re),
        value_im: Num(value.im),
        depth_used: depth,
        converged,
    };
    let table = Table {
        header: vec!["family", "a", "b", "c", "z_re", "z_im", "value_re", "value_im", "depth_used", "converged"],
        rows: vec![vec![
            rec.family.clone(),
            cell(p.a),
            cell(p.b),
            cell(p.c),
            cell(cfg.z.re),
            cell(cfg.z.im),
            cell(value.re),
            cell(value.im),
            depth.to_string(),
            converged.to_string(),
        ]],
    };
    let out = Outcome::new(&rec, Some(table))?;
    Ok(match err {
        Some(d) => out.with_status(Status::NotConverged, format!("no convergence within {d} terms")),
        None => out,
    })
}
