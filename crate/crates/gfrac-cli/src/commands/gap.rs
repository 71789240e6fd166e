use gfrac::gfraction::{gap_value_direct, gap_value_structural, GapSpec};
use gfrac::hypergeom::g_sequence_for;
use serde::Serialize;

use super::{eval_options, family, params};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{cell, Cx, Num, Outcome, Params, Status, Table};

#[derive(Serialize)]
struct GapRecord {
    family: String,
    params: Params,
    gap: String,
    z: Cx,
    direct: Cx,
    direct_depth: usize,
    structural: Cx,
    abs_diff: Num,
    tol: Num,
    pass: bool,
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let id = family(cfg, "gauss")?;
    let p = params(cfg)?;
    let gap: GapSpec = cfg.gap.parse()?;
    let g = g_sequence_for(id, &p)?;
    let opts = eval_options(cfg);
    let direct = gap_value_direct(&g, gap, cfg.z, opts)?;
    let structural = gap_value_structural(&g, gap, cfg.z, opts)?;
    let diff = (direct.value - structural).norm();
    let pass = diff <= cfg.tol;
    let rec = GapRecord {
        family: id.to_string(),
        params: Params::new(p.a, p.b, p.c),
        gap: cfg.gap.clone(),
        z: cfg.z.into(),
        direct: direct.value.into(),
        direct_depth: direct.depth,
        structural: structural.into(),
        abs_diff: Num(diff),
        tol: Num(cfg.tol),
        pass,
    };
    let table = Table {
        header: vec![
            "family", "gap", "z_re", "z_im", "direct_re", "direct_im", "structural_re", "structural_im", "abs_diff", "tol", "pass",
        ],
        rows: vec![vec![
            rec.family.clone(),
            rec.gap.clone(),
            cell(cfg.z.re),
            cell(cfg.z.im),
            cell(direct.value.re),
            cell(direct.value.im),
            cell(structural.re),
            cell(structural.im),
            cell(diff),
            cell(cfg.tol),
            pass.to_string(),
        ]],
    };
    let out = Outcome::new(&rec, Some(table))?;
    Ok(if pass {
        out
    } else {
        out.with_status(Status::Failed, format!("structural and direct values differ by {diff:e}"))
    })
}
