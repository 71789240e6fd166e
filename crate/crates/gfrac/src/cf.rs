//! Generic continued fractions
//!
//! ```text
//! b_0 + a_1/(b_1 + a_2/(b_2 + ...))
//! ```
//!
//! evaluated by the forward (Wallis) recurrence
//! `A_n = b_n A_{n-1} + a_n A_{n-2}` and the same for `B_n`, with
//! `A_{-1} = 1, B_{-1} = 0, A_0 = b_0, B_0 = 1`.

use std::sync::Arc;

use crate::core_math::{is_finite, Complex, ComplexPoly, ONE, ZERO};
use crate::{Error, Result};

/// A partial numerator or denominator: either a constant or `c * z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Term {
    Constant(Complex),
    Linear(Complex),
}

impl Term {
    pub fn at(self, z: Complex) -> Complex {
        match self {
            Term::Constant(c) => c,
            Term::Linear(c) => c * z,
        }
    }

    pub fn coefficient(self) -> Complex {
        match self {
            Term::Constant(c) | Term::Linear(c) => c,
        }
    }

    pub fn as_poly(self) -> ComplexPoly {
        match self {
            Term::Constant(c) => ComplexPoly::constant(c),
            Term::Linear(c) => ComplexPoly::monomial(c, 1),
        }
    }
}

type TermFn = dyn Fn(usize) -> (Term, Term) + Send + Sync;

/// Description of a continued fraction: head `b_0` and a pure generator
/// `n -> (a_n, b_n)` for `n >= 1`.
#[derive(Clone)]
pub struct CfSpec {
    head: Term,
    terms: Arc<TermFn>,
}

impl std::fmt::Debug for CfSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CfSpec")
            .field("head", &self.head)
            .field("a_1", &self.terms.as_ref()(1).0)
            .finish_non_exhaustive()
    }
}

impl CfSpec {
    pub fn new(head: Term, terms: impl Fn(usize) -> (Term, Term) + Send + Sync + 'static) -> Self {
        CfSpec {
            head,
            terms: Arc::new(terms),
        }
    }

    /// `leading / (1 - c_1 z / (1 - c_2 z / (1 - ...)))`, the shape of a g-fraction
    /// with `c_n = d_n`.
    pub fn stieltjes(leading: Complex, coeff: impl Fn(usize) -> Complex + Send + Sync + 'static) -> Self {
        CfSpec::new(Term::Constant(ZERO), move |n| {
            if n == 1 {
                (Term::Constant(leading), Term::Constant(ONE))
            } else {
                (Term::Linear(-coeff(n - 1)), Term::Constant(ONE))
            }
        })
    }

    pub fn head(&self) -> Term {
        self.head
    }

    /// `(a_n, b_n)` for `n >= 1`.
    pub fn term(&self, n: usize) -> (Term, Term) {
        (self.terms)(n)
    }

    /// The tail `a_{k+1}/(b_{k+1} + a_{k+2}/(...))` as a spec with head 0.
    pub fn shifted(&self, k: usize) -> CfSpec {
        let inner = Arc::clone(&self.terms);
        CfSpec::new(Term::Constant(ZERO), move |n| inner(k + n))
    }
}

/// `(X_{k-1}, X_k, Y_{k-1}, Y_k)` at a fixed z. The stored values equal the
/// true ones times `2^{-scale_exp}`; ratios are unaffected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproximantPair {
    pub k: usize,
    pub x_prev: Complex,
    pub x_cur: Complex,
    pub y_prev: Complex,
    pub y_cur: Complex,
    pub scale_exp: i32,
}

impl ApproximantPair {
    /// `X_k / Y_k`.
    pub fn value(&self, z: Complex) -> Result<Complex> {
        if self.y_cur == ZERO {
            return Err(Error::Pole { z });
        }
        Ok(self.x_cur / self.y_cur)
    }

    /// Factor that converts stored products of two entries to true values.
    pub fn square_scale(&self) -> f64 {
        2f64.powi(2 * self.scale_exp)
    }
}

const RESCALE_HI: f64 = 1e100;
const RESCALE_LO: f64 = 1e-100;

/// Incremental Wallis recurrence.
#[derive(Clone)]
pub struct Wallis<'a> {
    spec: &'a CfSpec,
    z: Complex,
    pair: ApproximantPair,
}

impl<'a> Wallis<'a> {
    pub fn new(spec: &'a CfSpec, z: Complex) -> Self {
        Wallis {
            spec,
            z,
            pair: ApproximantPair {
                k: 0,
                x_prev: ONE,
                x_cur: spec.head().at(z),
                y_prev: ZERO,
                y_cur: ONE,
                scale_exp: 0,
            },
        }
    }

    pub fn pair(&self) -> ApproximantPair {
        self.pair
    }

    pub fn step(&mut self) -> ApproximantPair {
        let n = self.pair.k + 1;
        let (a, b) = self.spec.term(n);
        let (a, b) = (a.at(self.z), b.at(self.z));
        let p = &mut self.pair;
        let x = b * p.x_cur + a * p.x_prev;
        let y = b * p.y_cur + a * p.y_prev;
        p.x_prev = p.x_cur;
        p.y_prev = p.y_cur;
        p.x_cur = x;
        p.y_cur = y;
        p.k = n;
        let m = [p.x_prev, p.x_cur, p.y_prev, p.y_cur]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if m > RESCALE_HI || (m > 0.0 && m < RESCALE_LO) {
            // Powers of two keep the rescaling exact.
            let e = m.log2().floor() as i32;
            let f = 2f64.powi(-e);
            p.x_prev *= f;
            p.x_cur *= f;
            p.y_prev *= f;
            p.y_cur *= f;
            p.scale_exp += e;
        }
        *p
    }
}

/// The k-th pair `(X_{k-1}, X_k, Y_{k-1}, Y_k)`. `k = 0` gives `(1, b_0, 0, 1)`.
pub fn approximant(spec: &CfSpec, k: usize, z: Complex) -> ApproximantPair {
    let mut w = Wallis::new(spec, z);
    for _ in 0..k {
        w.step();
    }
    w.pair()
}

/// Numerator and denominator polynomials `(X_k, Y_k)`.
pub fn approximant_polys(spec: &CfSpec, k: usize) -> (ComplexPoly, ComplexPoly) {
    let mut xp = ComplexPoly::constant(ONE);
    let mut x = spec.head().as_poly();
    let mut yp = ComplexPoly::zero();
    let mut y = ComplexPoly::constant(ONE);
    for n in 1..=k {
        let (a, b) = spec.term(n);
        let (a, b) = (a.as_poly(), b.as_poly());
        let xn = &(&b * &x) + &(&a * &xp);
        let yn = &(&b * &y) + &(&a * &yp);
        xp = std::mem::replace(&mut x, xn);
        yp = std::mem::replace(&mut y, yn);
    }
    (x, y)
}

/// `(X_k - h X_{k-1}) / (Y_k - h Y_{k-1})`.
pub fn modified_approximant(pair: &ApproximantPair, h: Complex) -> Result<Complex> {
    let den = pair.y_cur - h * pair.y_prev;
    let v = (pair.x_cur - h * pair.x_prev) / den;
    if den == ZERO || !is_finite(v) {
        return Err(Error::Pole { z: h });
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    pub tol: f64,
    pub max_depth: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tol: 1e-13,
            max_depth: 2000,
        }
    }
}

/// Converged value and the number of partial quotients consumed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limit {
    pub value: Complex,
    pub depth: usize,
}

/// First approximant with `|v_k - v_{k-1}| < tol max(1, |v_k|)`.
pub fn cf_limit(spec: &CfSpec, z: Complex, opts: EvalOptions) -> Result<Limit> {
    check_options(opts)?;
    let mut w = Wallis::new(spec, z);
    let mut prev = w.pair().value(z).ok();
    let mut last = prev.unwrap_or(ZERO);
    for _ in 0..opts.max_depth {
        let pair = w.step();
        let cur = pair.value(z).ok().filter(|v| is_finite(*v));
        if let (Some(c), Some(p)) = (cur, prev) {
            if (c - p).norm() < opts.tol * c.norm().max(1.0) {
                return Ok(Limit {
                    value: c,
                    depth: pair.k,
                });
            }
        }
        if let Some(c) = cur {
            last = c;
        }
        prev = cur;
    }
    let p = w.pair();
    Err(Error::Convergence {
        depth: opts.max_depth,
        last,
        prev: if p.y_prev != ZERO { p.x_prev / p.y_prev } else { last },
    })
}

/// Value of the tail starting at index `k + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailValue {
    pub value: Complex,
    pub start_index: usize,
    pub depth_used: usize,
}

/// `t_k = a_{k+1}/(b_{k+1} + a_{k+2}/(b_{k+2} + ...))` by forward recurrence.
pub fn tail_value(spec: &CfSpec, k: usize, z: Complex, depth: usize, tol: f64) -> Result<TailValue> {
    if depth < 2 {
        return Err(Error::domain("tail depth must be at least 2"));
    }
    let lim = cf_limit(&spec.shifted(k), z, EvalOptions { tol, max_depth: depth })?;
    Ok(TailValue {
        value: lim.value,
        start_index: k + 1,
        depth_used: lim.depth.max(1),
    })
}

/// `X_k Y_{k-1} - X_{k-1} Y_k - (-1)^{k-1} prod_{i=1}^k a_i(z)`, in true
/// (unscaled) units, together with the residual scaled by the size of the terms.
pub fn determinant_check(pair: &ApproximantPair, spec: &CfSpec, z: Complex) -> (Complex, f64) {
    let s = pair.square_scale();
    let l1 = pair.x_cur * pair.y_prev * s;
    let l2 = pair.x_prev * pair.y_cur * s;
    let mut rhs = if pair.k % 2 == 1 { ONE } else { -ONE };
    for i in 1..=pair.k {
        rhs *= spec.term(i).0.at(z);
    }
    let res = l1 - l2 - rhs;
    let scale = 1f64.max(l1.norm()).max(l2.norm()).max(rhs.norm());
    (res, res.norm() / scale)
}

fn check_options(opts: EvalOptions) -> Result<()> {
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.max_depth < 1 {
        return Err(Error::domain("tol must be positive and max_depth at least 1"));
    }
    Ok(())
}
