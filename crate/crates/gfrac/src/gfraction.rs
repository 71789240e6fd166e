//! g-fractions `1/(1 - d_1 z/(1 - d_2 z/(1 - ...)))`, `d_j = (1 - g_{j-1}) g_j`,
//! and the structural formulas for fractions with deleted parameters.

use std::str::FromStr;

use crate::cf::{self, approximant, cf_limit, CfSpec, EvalOptions, Limit, Term};
use crate::core_math::{real, Complex, ONE, ZERO};
use crate::hypergeom::Hyp2F1Params;
use crate::{Error, Result};

/// How many terms of a generated sequence are checked for validity.
pub const VALIDATION_DEPTH: usize = 512;

/// Sign in `X_k Y_{k-1} - X_{k-1} Y_k = SIGMA z^{k-1} prod d_j` for the engine's indexing.
pub const SIGMA: f64 = 1.0;

/// `g_n` of the Gauss fraction: `g_{2p} = (c-a+p-1)/(c+2p-1)`, `g_{2p+1} = (c-b+p)/(c+2p)`.
pub fn gauss_g(p: &Hyp2F1Params, n: usize) -> f64 {
    let q = (n / 2) as f64;
    if n.is_multiple_of(2) {
        (p.c - p.a + q - 1.0) / (p.c + 2.0 * q - 1.0)
    } else {
        (p.c - p.b + q) / (p.c + 2.0 * q)
    }
}

/// `k_n = 1 - g_n`, written directly: `k_{2p} = (a+p)/(c+2p-1)`, `k_{2p+1} = (b+p)/(c+2p)`.
pub fn kustner_k(p: &Hyp2F1Params, n: usize) -> f64 {
    let q = (n / 2) as f64;
    if n.is_multiple_of(2) {
        (p.a + q) / (p.c + 2.0 * q - 1.0)
    } else {
        (p.b + q) / (p.c + 2.0 * q)
    }
}

/// Which parameters are missing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapSpec {
    /// `g_k` removed.
    Single(usize),
    /// `g_k, ..., g_{k+l-1}` removed.
    Block { k: usize, l: usize },
    /// `g_k` and `g_l` removed, `l = k + m + 1` with `m >= 1`.
    Pair { k: usize, l: usize },
}

impl GapSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |index, reason: &str| {
            Err(Error::Validity {
                index,
                reason: reason.to_string(),
            })
        };
        match *self {
            GapSpec::Single(0) | GapSpec::Block { k: 0, .. } | GapSpec::Pair { k: 0, .. } => {
                bad(0, "gap index must be at least 1")
            }
            GapSpec::Block { k, l: 0 } => bad(k, "block length must be at least 1"),
            GapSpec::Pair { k, l } if l < k + 2 => bad(l, "pair gap needs l >= k + 2"),
            _ => Ok(()),
        }
    }

    /// Position in the original sequence of entry `j` of the gapped one.
    fn source_index(&self, j: usize) -> usize {
        match *self {
            GapSpec::Single(k) => {
                if j < k {
                    j
                } else {
                    j + 1
                }
            }
            GapSpec::Block { k, l } => {
                if j < k {
                    j
                } else {
                    j + l
                }
            }
            GapSpec::Pair { k, l } => {
                if j < k {
                    j
                } else if j < l - 1 {
                    j + 1
                } else {
                    j + 2
                }
            }
        }
    }
}

/// `"3"` is a single gap, `"2..4"` the inclusive block `g_2, g_3, g_4`, `"2,5"` a pair.
impl FromStr for GapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::domain(format!("bad gap spec '{s}'")))
        };
        let gap = if let Some((a, b)) = s.split_once("..") {
            let (k, last) = (num(a)?, num(b)?);
            if last < k {
                return Err(Error::domain(format!("empty block in gap spec '{s}'")));
            }
            GapSpec::Block { k, l: last - k + 1 }
        } else if let Some((a, b)) = s.split_once(',') {
            GapSpec::Pair { k: num(a)?, l: num(b)? }
        } else {
            GapSpec::Single(num(s)?)
        };
        gap.validate()?;
        Ok(gap)
    }
}

impl std::fmt::Display for GapSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            GapSpec::Single(k) => write!(f, "{k}"),
            GapSpec::Block { k, l } => write!(f, "{k}..{}", k + l - 1),
            GapSpec::Pair { k, l } => write!(f, "{k},{l}"),
        }
    }
}

/// A parameter sequence `g_0, g_1, ...`.
#[derive(Clone, Debug, PartialEq)]
pub enum GSequence {
    /// Finite list; entries past the end read as 0, which terminates the fraction.
    Explicit(Vec<f64>),
    Gauss(Hyp2F1Params),
    /// `(0, k_1, k_2, ...)`.
    Kustner(Hyp2F1Params),
    /// `(g_n, g_{n+1}, ...)` of the Gauss sequence.
    ShiftedG { params: Hyp2F1Params, n: usize },
    /// `(0, k_n, k_{n+1}, ...)`, `n >= 1`.
    ShiftedF { params: Hyp2F1Params, n: usize },
    /// Index deletion applied to another sequence.
    Gapped { base: Box<GSequence>, gap: GapSpec },
}

impl GSequence {
    pub fn get(&self, j: usize) -> f64 {
        match self {
            GSequence::Explicit(v) => v.get(j).copied().unwrap_or(0.0),
            GSequence::Gauss(p) => gauss_g(p, j),
            GSequence::Kustner(p) => {
                if j == 0 {
                    0.0
                } else {
                    kustner_k(p, j)
                }
            }
            GSequence::ShiftedG { params, n } => gauss_g(params, n + j),
            GSequence::ShiftedF { params, n } => {
                if j == 0 {
                    0.0
                } else {
                    kustner_k(params, n + j - 1)
                }
            }
            GSequence::Gapped { base, gap } => base.get(gap.source_index(j)),
        }
    }

    /// `d_j = (1 - g_{j-1}) g_j`, `j >= 1`.
    pub fn d(&self, j: usize) -> f64 {
        (1.0 - self.get(j - 1)) * self.get(j)
    }

    fn check_len(&self) -> usize {
        match self {
            GSequence::Explicit(v) => v.len(),
            _ => VALIDATION_DEPTH,
        }
    }

    /// Every checked `g_j` finite and in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        if let GSequence::ShiftedF { n: 0, .. } = self {
            return Err(Error::domain("shifted F_n sequence needs n >= 1"));
        }
        if let GSequence::Gapped { gap, .. } = self {
            gap.validate()?;
        }
        for j in 0..self.check_len() {
            let g = self.get(j);
            if !(0.0..=1.0).contains(&g) {
                return Err(Error::Validity {
                    index: j,
                    reason: format!("g_{j} = {g} is outside [0, 1]"),
                });
            }
        }
        Ok(())
    }
}

/// Spec of the g-fraction; rejects invalid parameters.
pub fn gfrac_spec(g: &GSequence) -> Result<CfSpec> {
    g.validate()?;
    Ok(gfrac_spec_unchecked(g))
}

/// Spec without the `[0, 1]` check, for fractions that converge anyway.
pub fn gfrac_spec_unchecked(g: &GSequence) -> CfSpec {
    let g = g.clone();
    CfSpec::stieltjes(ONE, move |n| real(g.d(n)))
}

pub fn gap_sequence(g: &GSequence, gap: GapSpec) -> Result<GSequence> {
    gap.validate()?;
    Ok(GSequence::Gapped {
        base: Box::new(g.clone()),
        gap,
    })
}

/// Ground truth: the gapped fraction evaluated directly.
pub fn gap_value_direct(g: &GSequence, gap: GapSpec, z: Complex, opts: EvalOptions) -> Result<Limit> {
    cf_limit(&gfrac_spec(&gap_sequence(g, gap)?)?, z, opts)
}

/// `H_n = g_n z/(1 - (1-g_n) g_{n+1} z/(1 - ...))`.
pub fn h_tail(g: &GSequence, n: usize, z: Complex, opts: EvalOptions) -> Result<Complex> {
    let g = g.clone();
    let spec = CfSpec::new(Term::Constant(ZERO), move |m| {
        let a = if m == 1 { g.get(n) } else { -g.d(n + m - 1) };
        (Term::Linear(real(a)), Term::Constant(ONE))
    });
    Ok(cf_limit(&spec, z, opts)?.value)
}

/// `h(k; z) = (1 - g_{k-1}) H_{k+1}(z)`.
pub fn h_single(g: &GSequence, k: usize, z: Complex, opts: EvalOptions) -> Result<Complex> {
    Ok((1.0 - g.get(k - 1)) * h_tail(g, k + 1, z, opts)?)
}

/// `S_k - prod_{j<k} d_j z^{k-1} h / (Y_{k-1} Y_k h - Y_k^2)` on the original fraction.
fn outer_formula(g: &GSequence, k: usize, h: Complex, z: Complex) -> Result<Complex> {
    let pair = approximant(&gfrac_spec_unchecked(g), k, z);
    let s_k = pair.value(z)?;
    let mut prod = SIGMA * z.powu(k as u32 - 1);
    for j in 1..k {
        prod *= g.d(j);
    }
    let prod = prod / pair.square_scale();
    let den = pair.y_prev * pair.y_cur * h - pair.y_cur * pair.y_cur;
    if den == ZERO {
        return Err(Error::Pole { z });
    }
    Ok(s_k - prod * h / den)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("gap index must be at least 1"));
    }
    Ok(())
}

/// Value with `g_k` removed, from the original approximants and a tail.
pub fn gap_value_structural_single(g: &GSequence, k: usize, z: Complex, opts: EvalOptions) -> Result<Complex> {
    check_k(k)?;
    g.validate()?;
    outer_formula(g, k, h_single(g, k, z, opts)?, z)
}

/// Value with `g_k, ..., g_{k+l-1}` removed.
pub fn gap_value_structural_block(
    g: &GSequence,
    k: usize,
    l: usize,
    z: Complex,
    opts: EvalOptions,
) -> Result<Complex> {
    check_k(k)?;
    GapSpec::Block { k, l }.validate()?;
    g.validate()?;
    let h = (1.0 - g.get(k - 1)) * h_tail(g, k + l, z, opts)?;
    outer_formula(g, k, h, z)
}

/// Value with `g_k` and `g_l` removed (`l = k + m + 1`).
///
/// The inner tail uses the m-th approximant of
/// `-d_{k+1} z/(1 - d_{k+2} z/(1 - ... /(1 - d_{k+m} z)))`, corrected by `h(l; z)`.
pub fn gap_value_structural_pair(
    g: &GSequence,
    k: usize,
    l: usize,
    z: Complex,
    opts: EvalOptions,
) -> Result<Complex> {
    check_k(k)?;
    GapSpec::Pair { k, l }.validate()?;
    g.validate()?;
    let m = l - k - 1;
    let kk = 1.0 - g.get(k);
    if kk == 0.0 {
        return Err(Error::domain(format!("pair gap needs g_{k} != 1")));
    }
    let h_l = h_single(g, l, z, opts)?;
    let inner = inner_tail_spec(g, k);
    let pair = approximant(&inner, m, z);
    let s_m = pair.value(z)?;
    let mut prod = z.powu(m as u32);
    for j in k + 1..=k + m {
        prod *= g.d(j);
    }
    let prod = prod / pair.square_scale();
    let den = pair.y_cur * pair.y_cur - pair.y_prev * pair.y_cur * h_l;
    if den == ZERO {
        return Err(Error::Pole { z });
    }
    let v = s_m - prod * h_l / den;
    let h = -(1.0 - g.get(k - 1)) * v / kk;
    outer_formula(g, k, h, z)
}

/// `-d_{k+1} z/(1 - d_{k+2} z/(1 - ...))` with head 0.
pub fn inner_tail_spec(g: &GSequence, k: usize) -> CfSpec {
    let g = g.clone();
    CfSpec::new(Term::Constant(ZERO), move |i| {
        (Term::Linear(real(-g.d(k + i))), Term::Constant(ONE))
    })
}

pub fn gap_value_structural(g: &GSequence, gap: GapSpec, z: Complex, opts: EvalOptions) -> Result<Complex> {
    match gap {
        GapSpec::Single(k) => gap_value_structural_single(g, k, z, opts),
        GapSpec::Block { k, l } => gap_value_structural_block(g, k, l, z, opts),
        GapSpec::Pair { k, l } => gap_value_structural_pair(g, k, l, z, opts),
    }
}

/// `X_k Y_{k-1} - X_{k-1} Y_k - SIGMA z^{k-1} prod_{j<k} d_j`, true units, plus its scaled size.
pub fn determinant_check(g: &GSequence, pair: &cf::ApproximantPair, z: Complex) -> (Complex, f64) {
    let s = pair.square_scale();
    let l1 = pair.x_cur * pair.y_prev * s;
    let l2 = pair.x_prev * pair.y_cur * s;
    let mut rhs = real(SIGMA);
    if pair.k >= 1 {
        rhs *= z.powu(pair.k as u32 - 1);
        for j in 1..pair.k {
            rhs *= g.d(j);
        }
    }
    let res = l1 - l2 - rhs;
    let scale = 1f64.max(l1.norm()).max(l2.norm()).max(rhs.norm());
    (res, res.norm() / scale)
}
