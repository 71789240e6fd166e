//! Gauss 2F1 by its power series, contiguous relations, and the catalog of
//! hypergeometric ratios that have g-fraction expansions.

use crate::cf::CfSpec;
use crate::core_math::{Complex, ONE, ZERO};
use crate::gfraction::{gap_sequence, gfrac_spec, kustner_k, GSequence, GapSpec};
use crate::{Error, Result};

/// Series oracle radius.
pub const ORACLE_RADIUS: f64 = 0.9;
const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 100_000;

/// `(a, b, c)` with `c` off the non-positive integers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

fn nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite(format!("2F1 parameters ({a}, {b}, {c})")));
        }
        if nonpositive_integer(c) {
            return Err(Error::domain(format!("c = {c} is a non-positive integer")));
        }
        Ok(Hyp2F1Params { a, b, c })
    }

    pub fn shifted(&self, da: f64, db: f64, dc: f64) -> Result<Self> {
        Hyp2F1Params::new(self.a + da, self.b + db, self.c + dc)
    }

    pub fn swapped(&self) -> Self {
        Hyp2F1Params {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (a + i as f64))
}

pub fn pochhammer_complex(a: Complex, n: usize) -> Complex {
    (0..n).fold(ONE, |acc, i| acc * (a + i as f64))
}

/// `F(a, b; c; w)` summed until two consecutive terms fall below `1e-16 |sum|`.
pub fn hyp2f1(p: &Hyp2F1Params, w: Complex) -> Result<Complex> {
    if w.norm() > ORACLE_RADIUS {
        return Err(Error::domain(format!("|w| = {} exceeds the series radius {ORACLE_RADIUS}", w.norm())));
    }
    let mut term = ONE;
    let mut sum = ONE;
    let mut small = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= w * ((p.a + nf) * (p.b + nf) / ((p.c + nf) * (nf + 1.0)));
        sum += term;
        if term.norm() < SERIES_REL_TOL * sum.norm() || term == ZERO {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence {
        depth: SERIES_MAX_TERMS,
        last: sum,
        prev: sum - term,
    })
}

/// Maclaurin coefficients `(a)_n (b)_n / ((c)_n n!)`, `n <= k`.
pub fn hyp2f1_coeffs(p: &Hyp2F1Params, k: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(k + 1);
    let mut t = 1.0;
    for n in 0..=k {
        v.push(t);
        let nf = n as f64;
        t *= (p.a + nf) * (p.b + nf) / ((p.c + nf) * (nf + 1.0));
    }
    v
}

/// The three contiguous relations used by the fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContiguousRelation {
    /// `F(a,b;c) - F(a,b-1;c-1) = a(c-b)/((c-1)c) w F(a+1,b;c+1)`
    GaussStep,
    /// `F(a,b;c) = (1-w) F(a+1,b;c) + (c-b)/c w F(a+1,b;c+1)`
    KustnerSplit,
    /// `F(a+1,b;c) - F(a,b;c) = (b/c) w F(a+1,b+1;c+1)`
    AStep,
}

impl ContiguousRelation {
    pub const ALL: [ContiguousRelation; 3] = [
        ContiguousRelation::GaussStep,
        ContiguousRelation::KustnerSplit,
        ContiguousRelation::AStep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ContiguousRelation::GaussStep => "gauss-step",
            ContiguousRelation::KustnerSplit => "kustner-split",
            ContiguousRelation::AStep => "a-step",
        }
    }
}

/// `|LHS - RHS| / max(1, |LHS|)`.
pub fn contiguous_residual(rel: ContiguousRelation, p: &Hyp2F1Params, w: Complex) -> Result<f64> {
    let (a, b, c) = (p.a, p.b, p.c);
    let f = |da, db, dc| -> Result<Complex> { hyp2f1(&p.shifted(da, db, dc)?, w) };
    let (lhs, rhs) = match rel {
        ContiguousRelation::GaussStep => (
            f(0.0, 0.0, 0.0)? - f(0.0, -1.0, -1.0)?,
            a * (c - b) / ((c - 1.0) * c) * w * f(1.0, 0.0, 1.0)?,
        ),
        ContiguousRelation::KustnerSplit => (
            f(0.0, 0.0, 0.0)?,
            (ONE - w) * f(1.0, 0.0, 0.0)? + (c - b) / c * w * f(1.0, 0.0, 1.0)?,
        ),
        ContiguousRelation::AStep => (
            f(1.0, 0.0, 0.0)? - f(0.0, 0.0, 0.0)?,
            b / c * w * f(1.0, 1.0, 1.0)?,
        ),
    };
    Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
}

/// Named ratio in the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioId {
    /// `F(a,b;c)/F(a,b-1;c-1)`
    Gauss,
    /// `F(a+1,b;c)/F(a,b;c)`
    Kustner,
    /// Tail ratios of the Gauss fraction, `G_0` = Gauss.
    G(usize),
    /// Ratios whose fraction starts with an inserted term, `n >= 1`; `F_1` = Kustner.
    F(usize),
    /// Kustner fraction with its parameter of index 2 removed.
    FGap2,
}

impl std::fmt::Display for RatioId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RatioId::Gauss => write!(f, "gauss"),
            RatioId::Kustner => write!(f, "kustner"),
            RatioId::G(n) => write!(f, "G{n}"),
            RatioId::F(n) => write!(f, "F{n}"),
            RatioId::FGap2 => write!(f, "F-gap2"),
        }
    }
}

impl std::str::FromStr for RatioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let idx = |rest: &str| {
            rest.trim_start_matches('_')
                .parse::<usize>()
                .map_err(|_| Error::domain(format!("unknown ratio family '{s}'")))
        };
        match t.to_ascii_lowercase().as_str() {
            "gauss" => return Ok(RatioId::Gauss),
            "kustner" => return Ok(RatioId::Kustner),
            "f-gap2" | "fgap2" | "f_gap2" => return Ok(RatioId::FGap2),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix('G') {
            return Ok(RatioId::G(idx(rest)?));
        }
        if let Some(rest) = t.strip_prefix('F') {
            let n = idx(rest)?;
            if n == 0 {
                return Err(Error::domain("F_n needs n >= 1"));
            }
            return Ok(RatioId::F(n));
        }
        Err(Error::domain(format!("unknown ratio family '{s}'")))
    }
}

/// Parameter shift `const + per_j * j` on each of `(a, b, c)`.
#[derive(Clone, Copy, Debug)]
struct Shift([(i32, i32); 3]);

impl Shift {
    fn at(&self, j: usize) -> (f64, f64, f64) {
        let v = |k: usize| (self.0[k].0 + self.0[k].1 * j as i32) as f64;
        (v(0), v(1), v(2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Gauss,
    Kustner,
    G,
    F,
}

/// One catalog row: family, parity of n (None = no index), index offset
/// (n = 2j + offset), numerator and denominator shifts.
struct Entry {
    family: Family,
    offset: Option<usize>,
    num: Shift,
    den: Shift,
}

const CATALOG: &[Entry] = &[
    Entry { family: Family::Gauss, offset: None, num: Shift([(0, 0), (0, 0), (0, 0)]), den: Shift([(0, 0), (-1, 0), (-1, 0)]) },
    Entry { family: Family::Kustner, offset: None, num: Shift([(1, 0), (0, 0), (0, 0)]), den: Shift([(0, 0), (0, 0), (0, 0)]) },
    Entry { family: Family::G, offset: Some(0), num: Shift([(0, 1), (0, 1), (0, 2)]), den: Shift([(0, 1), (-1, 1), (-1, 2)]) },
    Entry { family: Family::G, offset: Some(1), num: Shift([(1, 1), (0, 1), (1, 2)]), den: Shift([(0, 1), (0, 1), (0, 2)]) },
    Entry { family: Family::F, offset: Some(1), num: Shift([(1, 1), (0, 1), (0, 2)]), den: Shift([(0, 1), (0, 1), (0, 2)]) },
    Entry { family: Family::F, offset: Some(2), num: Shift([(1, 1), (1, 1), (1, 2)]), den: Shift([(1, 1), (0, 1), (1, 2)]) },
];

/// Numerator and denominator parameters of a plain (two-function) ratio.
pub fn ratio_params(id: RatioId, p: &Hyp2F1Params) -> Result<Option<(Hyp2F1Params, Hyp2F1Params)>> {
    let (family, n) = match id {
        RatioId::Gauss => (Family::Gauss, None),
        RatioId::Kustner => (Family::Kustner, None),
        RatioId::G(n) => (Family::G, Some(n)),
        RatioId::F(n) => (Family::F, Some(n)),
        RatioId::FGap2 => return Ok(None),
    };
    let entry = CATALOG.iter().find(|e| {
        e.family == family
            && match (e.offset, n) {
                (None, None) => true,
                (Some(o), Some(n)) => n >= o && (n - o) % 2 == 0,
                _ => false,
            }
    });
    let entry = entry.ok_or_else(|| Error::domain(format!("{id} is not in the catalog")))?;
    let j = match (entry.offset, n) {
        (Some(o), Some(n)) => (n - o) / 2,
        _ => 0,
    };
    let (na, nb, nc) = entry.num.at(j);
    let (da, db, dc) = entry.den.at(j);
    Ok(Some((p.shifted(na, nb, nc)?, p.shifted(da, db, dc)?)))
}

fn checked_ratio(num: Complex, den: Complex, w: Complex) -> Result<Complex> {
    if den == ZERO {
        return Err(Error::Pole { z: w });
    }
    Ok(num / den)
}

/// The named ratio from series evaluations.
pub fn ratio_oracle(id: RatioId, p: &Hyp2F1Params, w: Complex) -> Result<Complex> {
    match ratio_params(id, p)? {
        Some((np, dp)) => checked_ratio(hyp2f1(&np, w)?, hyp2f1(&dp, w)?, w),
        None => {
            let r = checked_ratio(
                hyp2f1(&p.shifted(2.0, 2.0, 3.0)?, w)?,
                hyp2f1(&p.shifted(2.0, 1.0, 2.0)?, w)?,
                w,
            )?;
            f_gap2_assembly(p, w, r)
        }
    }
}

/// `c/(c - b w) - [b(b+1)(c-b)/(c+2) w^2 R] / [(c-b)(b+1)(c-b w)/(c+2) w R - (c-b w)^2]`
/// with `R = F(a+2,b+2;c+3)/F(a+2,b+1;c+2)`.
pub fn f_gap2_assembly(p: &Hyp2F1Params, w: Complex, r: Complex) -> Result<Complex> {
    let (b, c) = (p.b, p.c);
    let cbw = c - b * w;
    let num = b * (b + 1.0) * (c - b) / (c + 2.0) * w * w * r;
    let den = (c - b) * (b + 1.0) * cbw / (c + 2.0) * w * r - cbw * cbw;
    if cbw == ZERO || den == ZERO {
        return Err(Error::Pole { z: w });
    }
    Ok(c / cbw - num / den)
}

/// Parameter sequence of the fraction for `id`.
pub fn g_sequence_for(id: RatioId, p: &Hyp2F1Params) -> Result<GSequence> {
    Ok(match id {
        RatioId::Gauss => {
            p.shifted(0.0, -1.0, -1.0)?;
            GSequence::Gauss(*p)
        }
        RatioId::Kustner => GSequence::Kustner(*p),
        RatioId::G(0) => {
            p.shifted(0.0, -1.0, -1.0)?;
            GSequence::Gauss(*p)
        }
        RatioId::G(n) => GSequence::ShiftedG { params: *p, n },
        RatioId::F(0) => return Err(Error::domain("F_n needs n >= 1")),
        RatioId::F(1) => GSequence::Kustner(*p),
        RatioId::F(n) => GSequence::ShiftedF { params: *p, n },
        RatioId::FGap2 => gap_sequence(&GSequence::Kustner(*p), GapSpec::Single(2))?,
    })
}

/// Validated fraction whose limit is `ratio_oracle(id)`.
pub fn cf_spec_for(id: RatioId, p: &Hyp2F1Params) -> Result<(CfSpec, GSequence)> {
    let g = g_sequence_for(id, p)?;
    Ok((gfrac_spec(&g)?, g))
}

/// `P_j`: `P_{2i} = F(a+i,b+i;c+2i)`, `P_{2i+1} = F(a+i+1,b+i;c+2i+1)`.
fn p_seq(p: &Hyp2F1Params, j: usize, w: Complex) -> Result<Complex> {
    let i = (j / 2) as f64;
    if j.is_multiple_of(2) {
        hyp2f1(&p.shifted(i, i, 2.0 * i)?, w)
    } else {
        hyp2f1(&p.shifted(i + 1.0, i, 2.0 * i + 1.0)?, w)
    }
}

/// Gauss fraction coefficients `d_{2i+1} = (b+i)(c-a+i)/((c+2i)(c+2i+1))`,
/// `d_{2i} = (a+i)(c-b+i)/((c+2i-1)(c+2i))`.
pub fn gauss_d(p: &Hyp2F1Params, n: usize) -> f64 {
    let (a, b, c) = (p.a, p.b, p.c);
    if n % 2 == 1 {
        let i = ((n - 1) / 2) as f64;
        (b + i) * (c - a + i) / ((c + 2.0 * i) * (c + 2.0 * i + 1.0))
    } else {
        let i = (n / 2) as f64;
        (a + i) * (c - b + i) / ((c + 2.0 * i - 1.0) * (c + 2.0 * i))
    }
}

/// Residuals of `P_j = P_{j+1} - d_{j+1} w P_{j+2}` for `P` and for its companion
/// `Q` (the same construction with `a` and `b` exchanged).
pub fn pq_difference_residual(p: &Hyp2F1Params, j: usize, w: Complex) -> Result<(f64, f64)> {
    let res = |q: &Hyp2F1Params| -> Result<f64> {
        let lhs = p_seq(q, j, w)?;
        let rhs = p_seq(q, j + 1, w)? - gauss_d(q, j + 1) * w * p_seq(q, j + 2, w)?;
        Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
    };
    Ok((res(p)?, res(&p.swapped())?))
}

/// `F_{n+1}` rebuilt from `G_n`: `E_{n+1} = 1 - (1 - 1/G_n)/k_n`, returns `E_{n+1}/(1 - w)`.
pub fn f_from_g_route(p: &Hyp2F1Params, n: usize, w: Complex) -> Result<Complex> {
    let g = ratio_oracle(RatioId::G(n), p, w)?;
    let k = kustner_k(p, n);
    if g == ZERO || k == 0.0 || w == ONE {
        return Err(Error::Pole { z: w });
    }
    let e = ONE - (ONE - ONE / g) / k;
    Ok(e / (ONE - w))
}

/// Schur parameter of the class tied to these fractions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchurClassParam {
    pub alpha: f64,
    pub valid: bool,
}

/// `alpha_j = (c - 2b)/(c + j)` for even j, `(c - 2a - 1)/(c + j)` for odd j.
pub fn schur_class_params(a: f64, b: f64, c: f64, j: usize) -> Result<SchurClassParam> {
    let den = c + j as f64;
    if den == 0.0 {
        return Err(Error::domain("c + j = 0"));
    }
    let num = if j.is_multiple_of(2) { c - 2.0 * b } else { c - 2.0 * a - 1.0 };
    let alpha = num / den;
    Ok(SchurClassParam {
        alpha,
        valid: alpha.abs() <= 1.0,
    })
}
