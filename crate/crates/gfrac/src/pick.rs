//! Desk-scale certificates for Hausdorff moment structure: totally monotone
//! Taylor coefficients and positivity of the imaginary part on the upper half-plane.

use rayon::prelude::*;

use crate::cf::{cf_limit, EvalOptions};
use crate::core_math::{real, series_divide, Complex};
use crate::gfraction::{gfrac_spec, gfrac_spec_unchecked, kustner_k, GSequence};
use crate::hypergeom::{hyp2f1_coeffs, ratio_params, Hyp2F1Params, RatioId};
use crate::{Error, Result};

/// Moments `nu_j`, normally with `nu_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSeq {
    pub nu: Vec<f64>,
}

impl MomentSeq {
    pub fn new(nu: Vec<f64>) -> Result<Self> {
        if let Some(j) = nu.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("moment {j} is not finite")));
        }
        Ok(MomentSeq { nu })
    }
}

/// One of the six maps built from `F(a+1,b+1;c+1)`, `F(a+1,b;c+1)` and `F(a+2,b+1;c+2)`.
/// Even indices are `w` times the preceding odd one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PickMap(u8);

impl PickMap {
    pub const ALL: [PickMap; 6] = [PickMap(1), PickMap(2), PickMap(3), PickMap(4), PickMap(5), PickMap(6)];

    pub fn new(index: u8) -> Result<Self> {
        if (1..=6).contains(&index) {
            Ok(PickMap(index))
        } else {
            Err(Error::domain(format!("map index {index} is not in 1..6")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn times_w(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// The odd map this one is built from.
    pub fn base(self) -> PickMap {
        PickMap(self.0 - (1 - self.0 % 2))
    }

    /// Numerator and denominator parameters of the base ratio.
    pub fn ratio(self, p: &Hyp2F1Params) -> Result<(Hyp2F1Params, Hyp2F1Params)> {
        Ok(match self.base().0 {
            1 => (p.shifted(1.0, 1.0, 1.0)?, p.shifted(1.0, 0.0, 1.0)?),
            3 => (p.shifted(2.0, 1.0, 2.0)?, p.shifted(1.0, 0.0, 1.0)?),
            _ => (p.shifted(2.0, 1.0, 2.0)?, p.shifted(1.0, 1.0, 1.0)?),
        })
    }
}

impl std::fmt::Display for PickMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "thm41-{}", self.0)
    }
}

impl std::str::FromStr for PickMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix("thm41-").unwrap_or(t);
        let n: u8 = t.parse().map_err(|_| Error::domain(format!("unknown map '{s}'")))?;
        PickMap::new(n)
    }
}

/// `-1 < a <= c` and `0 <= b <= c`.
pub fn check_hypothesis(p: &Hyp2F1Params) -> Result<()> {
    if !(-1.0 < p.a && p.a <= p.c && 0.0 <= p.b && p.b <= p.c) {
        return Err(Error::domain(format!(
            "(a, b, c) = ({}, {}, {}) violates -1 < a <= c, 0 <= b <= c",
            p.a, p.b, p.c
        )));
    }
    Ok(())
}

fn coeff_ratio(num: &Hyp2F1Params, den: &Hyp2F1Params, k: usize) -> Result<Vec<f64>> {
    let n: Vec<Complex> = hyp2f1_coeffs(num, k).into_iter().map(real).collect();
    let d: Vec<Complex> = hyp2f1_coeffs(den, k).into_iter().map(real).collect();
    Ok(series_divide(&n, &d, k)?.into_iter().map(|c| c.re).collect())
}

/// First `k + 1` Maclaurin coefficients of a map; the `w` variants are shifted by one.
pub fn taylor_of_map(map: PickMap, p: &Hyp2F1Params, k: usize) -> Result<MomentSeq> {
    check_hypothesis(p)?;
    let (num, den) = map.ratio(p)?;
    let mut nu = coeff_ratio(&num, &den, k)?;
    if map.times_w() {
        nu.insert(0, 0.0);
        nu.truncate(k + 1);
    }
    MomentSeq::new(nu)
}

/// Maclaurin coefficients of a plain catalog ratio.
pub fn taylor_of_ratio(id: RatioId, p: &Hyp2F1Params, k: usize) -> Result<MomentSeq> {
    let (num, den) = ratio_params(id, p)?
        .ok_or_else(|| Error::Unsupported(format!("{id} is not a plain ratio of two series")))?;
    MomentSeq::new(coeff_ratio(&num, &den, k)?)
}

/// Outcome of a check. `pass` iff `worst <= slack`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub params: Option<(f64, f64, f64)>,
    /// Difference order, or grid size.
    pub order: usize,
    pub worst: f64,
    pub pass: bool,
    pub slack: f64,
    /// `(j, k)` of the worst difference, or `(grid index, 0)`.
    pub location: Option<(usize, usize)>,
    /// Grid points where evaluation failed, with the error text.
    pub failures: Vec<(usize, String)>,
}

/// Forward differences `(-1)^k Delta^k nu_j` for all `j + k <= order`; violation is
/// `max(0, -min)`.
pub fn totally_monotone_check(nu: &MomentSeq, order: usize, slack: f64) -> Result<CheckReport> {
    if order < 1 {
        return Err(Error::domain("order must be at least 1"));
    }
    if nu.nu.len() < order + 1 {
        return Err(Error::domain(format!(
            "need {} moments, got {}",
            order + 1,
            nu.nu.len()
        )));
    }
    let mut row: Vec<f64> = nu.nu[..=order].to_vec();
    let mut worst = 0.0;
    let mut location = None;
    for k in 0..=order {
        // row[j] = (-1)^k Delta^k nu_j
        for (j, &v) in row.iter().enumerate() {
            if -v > worst {
                worst = -v;
                location = Some((j, k));
            }
        }
        row = row.windows(2).map(|w| w[0] - w[1]).collect();
    }
    Ok(CheckReport {
        name: "totally-monotone".into(),
        params: None,
        order,
        worst,
        pass: worst <= slack,
        slack,
        location,
        failures: Vec::new(),
    })
}

/// Moment check of one map; the `w` variants drop their leading zero first.
pub fn map_moment_check(map: PickMap, p: &Hyp2F1Params, order: usize, slack: f64) -> Result<CheckReport> {
    let nu = taylor_of_map(map.base(), p, order)?;
    let mut r = totally_monotone_check(&nu, order, slack)?;
    r.name = format!("{map} totally-monotone");
    r.params = Some((p.a, p.b, p.c));
    Ok(r)
}

pub const HALFPLANE_TOL: f64 = -1e-12;

/// `n x n` grid over `[re0, re1] x [im0, im1]`, row-major with the real part fastest.
pub fn rect_grid(re: (f64, f64), im: (f64, f64), n: usize) -> Vec<Complex> {
    let step = |(lo, hi): (f64, f64), i: usize| {
        if n < 2 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(Complex::new(step(re, j), step(im, i)));
        }
    }
    out
}

/// The 20 x 20 grid over `(-3, 0.9) x (0.01, 2)`.
pub fn standard_grid() -> Vec<Complex> {
    rect_grid((-3.0, 0.9), (0.01, 2.0), 20)
}

/// Minimum of `Im fn` over the grid; pass iff above `-1e-12` and every point evaluated.
/// Points are evaluated in parallel and reported by grid index.
pub fn halfplane_positivity<F>(name: &str, f: F, grid: &[Complex]) -> CheckReport
where
    F: Fn(Complex) -> Result<Complex> + Sync,
{
    let vals: Vec<Result<Complex>> = grid.par_iter().map(|&w| f(w)).collect();
    let mut min_im = f64::INFINITY;
    let mut location = None;
    let mut failures = Vec::new();
    for (i, v) in vals.into_iter().enumerate() {
        match v {
            Ok(v) if v.im.is_finite() => {
                if v.im < min_im {
                    min_im = v.im;
                    location = Some((i, 0));
                }
            }
            Ok(_) => failures.push((i, "non-finite value".to_string())),
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    let worst = (-min_im).max(0.0);
    CheckReport {
        name: name.to_string(),
        params: None,
        order: grid.len(),
        worst,
        pass: failures.is_empty() && min_im > HALFPLANE_TOL,
        slack: -HALFPLANE_TOL,
        location,
        failures,
    }
}

/// Value of a map through continued fractions, valid on the cut plane.
/// Map 1 is the `F_2` fraction, map 5 a Gauss fraction at `(b+1, a+2, c+2)`, map 3 their product.
pub fn map_value(map: PickMap, p: &Hyp2F1Params, w: Complex, opts: EvalOptions) -> Result<Complex> {
    check_hypothesis(p)?;
    let base = match map.base().0 {
        1 => map1(p, w, opts)?,
        3 => map1(p, w, opts)? * map5(p, w, opts)?,
        _ => map5(p, w, opts)?,
    };
    Ok(if map.times_w() { w * base } else { base })
}

fn map1(p: &Hyp2F1Params, w: Complex, opts: EvalOptions) -> Result<Complex> {
    let spec = gfrac_spec(&GSequence::ShiftedF { params: *p, n: 2 })?;
    Ok(cf_limit(&spec, w, opts)?.value)
}

fn map5(p: &Hyp2F1Params, w: Complex, opts: EvalOptions) -> Result<Complex> {
    let q = Hyp2F1Params::new(p.b + 1.0, p.a + 2.0, p.c + 2.0)?;
    Ok(cf_limit(&gfrac_spec_unchecked(&GSequence::Gauss(q)), w, opts)?.value)
}

pub fn map_halfplane_check(map: PickMap, p: &Hyp2F1Params, grid: &[Complex], opts: EvalOptions) -> Result<CheckReport> {
    check_hypothesis(p)?;
    let mut r = halfplane_positivity(&format!("{map} half-plane"), |w| map_value(map, p, w, opts), grid);
    r.params = Some((p.a, p.b, p.c));
    Ok(r)
}

/// `(w-coefficient of map 3, k_3 + (1 - k_3) k_2)`.
pub fn omega_coefficient(p: &Hyp2F1Params) -> Result<(f64, f64)> {
    let nu = taylor_of_map(PickMap(3), p, 1)?;
    let (k2, k3) = (kustner_k(p, 2), kustner_k(p, 3));
    Ok((nu.nu[1], k3 + (1.0 - k3) * k2))
}
