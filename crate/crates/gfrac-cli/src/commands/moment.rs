use gfrac::pick::{map_moment_check, totally_monotone_check, CheckReport, MomentSeq, PickMap};
use serde::Serialize;

use super::params;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{cell, Num, Outcome, Params, Status, Table};

#[derive(Serialize)]
struct Location {
    j: usize,
    k: usize,
}

#[derive(Serialize)]
struct MomentRecord {
    check: String,
    params: Option<Params>,
    order: usize,
    worst: Num,
    pass: bool,
    slack: Num,
    location: Option<Location>,
    coefficients: Vec<Num>,
}

fn read_nu(path: &std::path::Path) -> CliResult<MomentSeq> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read moment file '{}': {e}", path.display())))?;
    let mut nu = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        nu.push(t.parse::<f64>().map_err(|_| {
            CliError::input(format!("{}:{}: '{t}' is not a number", path.display(), i + 1))
        })?);
    }
    Ok(MomentSeq::new(nu)?)
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let slack = cfg.tol;
    let (report, nu): (CheckReport, Vec<f64>) = match &cfg.nu {
        Some(path) => {
            let nu = read_nu(path)?;
            let mut r = totally_monotone_check(&nu, cfg.order, slack)?;
            r.name = format!("{} totally-monotone", path.display());
            (r, nu.nu[..=cfg.order].to_vec())
        }
        None => {
            let map: PickMap = cfg.function_or("thm41-1").parse()?;
            let p = params(cfg)?;
            let r = map_moment_check(map, &p, cfg.order, slack)?;
            let nu = gfrac::pick::taylor_of_map(map.base(), &p, cfg.order)?.nu;
            (r, nu)
        }
    };
    let rec = MomentRecord {
        check: report.name.clone(),
        params: report.params.map(|(a, b, c)| Params::new(a, b, c)),
        order: report.order,
        worst: Num(report.worst),
        pass: report.pass,
        slack: Num(report.slack),
        location: report.location.map(|(j, k)| Location { j, k }),
        coefficients: nu.iter().copied().map(Num).collect(),
    };
    let (j, k) = report.location.map_or((String::new(), String::new()), |(j, k)| (j.to_string(), k.to_string()));
    let table = Table {
        header: vec!["check", "order", "worst", "slack", "pass", "j", "k"],
        rows: vec![vec![
            rec.check.clone(),
            rec.order.to_string(),
            cell(report.worst),
            cell(slack),
            rec.pass.to_string(),
            j,
            k,
        ]],
    };
    let out = Outcome::new(&rec, Some(table))?;
    Ok(if report.pass {
        out
    } else {
        let at = report.location.map_or(String::new(), |(j, k)| format!(" at j = {j}, k = {k}"));
        out.with_status(Status::Failed, format!("moment check failed: violation {:e}{at}", report.worst))
    })
}
