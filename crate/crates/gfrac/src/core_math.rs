//! Complex scalars, polynomials with complex coefficients, rational functions,
//! polynomial roots and truncated power-series division.

use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

pub type Complex = num_complex::Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Checked constructor: rejects NaN and infinite components.
pub fn complex(re: f64, im: f64) -> Result<Complex> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex::new(re, im))
    } else {
        Err(Error::NonFinite(format!("complex({re}, {im})")))
    }
}

pub(crate) fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

pub(crate) fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Polynomial with ascending-degree coefficients, trailing exact zeros removed.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| real(c)).collect())
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// `c z^n`
    pub fn monomial(c: Complex, n: usize) -> Self {
        let mut v = vec![ZERO; n + 1];
        v[n] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex {
        self.coeffs.get(j).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `z^n conj(p(1/conj z))`: coefficient `j` becomes `conj(c_{n-j})`.
    pub fn reciprocal(&self, n: usize) -> Result<Self> {
        if !self.is_zero() && self.degree() > n {
            return Err(Error::InvalidDegree {
                requested: n,
                actual: self.degree(),
            });
        }
        Ok(Self::new((0..=n).map(|j| self.coeff(n - j).conj()).collect()))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// Multiply by `z^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![ZERO; n];
        v.extend_from_slice(&self.coeffs);
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    /// All roots with multiplicity.
    ///
    /// Exact zero roots are split off first; the rest come from a
    /// Durand-Kerner (Weierstrass) iteration followed by a Newton polish.
    pub fn roots(&self) -> Result<Vec<Complex>> {
        if self.is_zero() {
            return Err(Error::domain("roots of the zero polynomial"));
        }
        if self.degree() == 0 {
            return Err(Error::domain("roots of a nonzero constant"));
        }
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == ZERO).count();
        let reduced = Self::new(self.coeffs[lead_zeros..].to_vec());
        let mut roots = vec![ZERO; lead_zeros];
        if reduced.degree() > 0 {
            roots.extend(durand_kerner(&reduced)?);
        }
        let bound = 1e-8 * self.max_abs_coeff();
        for &r in &roots {
            let res = self.eval(r).norm();
            // Large roots are judged on the relative scale of the evaluation.
            let scale = r.norm().max(1.0).powi(self.degree() as i32);
            if res > bound * scale {
                return Err(Error::Convergence {
                    depth: ROOT_MAX_ITER,
                    last: r,
                    prev: real(res),
                });
            }
        }
        Ok(roots)
    }
}

const ROOT_MAX_ITER: usize = 200;
const ROOT_TOL: f64 = 1e-15;

fn durand_kerner(p: &ComplexPoly) -> Result<Vec<Complex>> {
    let n = p.degree();
    let lead = p.leading();
    let monic: Vec<Complex> = p.coeffs.iter().map(|&c| c / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let mp = ComplexPoly { coeffs: monic };
    let rho = mp.coeff(0).norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex> = (0..n)
        .map(|j| Complex::from_polar(rho, std::f64::consts::TAU * j as f64 / n as f64 + 0.4))
        .collect();
    // Stop on stagnation rather than on residual: clustered roots keep
    // improving long after the residual looks small.
    for _ in 0..ROOT_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let mut den = ONE;
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den == ZERO {
                den = real(1e-12);
            }
            let zi = z[i];
            let step = mp.eval(zi) / den;
            z[i] = zi - step;
            max_step = max_step.max(step.norm() / zi.norm().max(1.0));
        }
        if max_step < ROOT_TOL {
            break;
        }
    }
    let dp = mp.derivative();
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = dp.eval(*r);
            if d == ZERO {
                break;
            }
            let step = mp.eval(*r) / d;
            let cand = *r - step;
            if mp.eval(cand).norm() < mp.eval(*r).norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
    Ok(z)
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut v = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        ComplexPoly::new(v)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        self.scale(-ONE)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ComplexPoly {
            type Output = ComplexPoly;
            fn $m(self, rhs: ComplexPoly) -> ComplexPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn poly_eval(p: &ComplexPoly, z: Complex) -> Complex {
    p.eval(z)
}

pub fn poly_reciprocal(p: &ComplexPoly, n: usize) -> Result<ComplexPoly> {
    p.reciprocal(n)
}

pub fn poly_roots(p: &ComplexPoly) -> Result<Vec<Complex>> {
    p.roots()
}

/// Quotient of two polynomials, kept without implicit cancellation.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    num: ComplexPoly,
    den: ComplexPoly,
}

impl RationalFn {
    pub fn new(num: ComplexPoly, den: ComplexPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        Ok(RationalFn { num, den })
    }

    pub fn polynomial(p: ComplexPoly) -> Self {
        RationalFn {
            num: p,
            den: ComplexPoly::constant(ONE),
        }
    }

    pub fn num(&self) -> &ComplexPoly {
        &self.num
    }

    pub fn den(&self) -> &ComplexPoly {
        &self.den
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        let d = self.den.eval(z);
        if d == ZERO {
            return Err(Error::Pole { z });
        }
        let v = self.num.eval(z) / d;
        if !is_finite(v) {
            return Err(Error::Pole { z });
        }
        Ok(v)
    }

    /// Remove numerator/denominator root pairs closer than `tol`, then
    /// scale so the denominator's lowest nonzero coefficient is kept.
    ///
    /// Numeric cancellation: both polynomials are rebuilt from their
    /// remaining roots and leading coefficients.
    pub fn cancel(&self, tol: f64) -> Result<Self> {
        if self.num.is_zero() {
            return RationalFn::new(ComplexPoly::zero(), ComplexPoly::constant(ONE));
        }
        let mut nr = if self.num.degree() > 0 { self.num.roots()? } else { Vec::new() };
        let mut dr = if self.den.degree() > 0 { self.den.roots()? } else { Vec::new() };
        let mut i = 0;
        while i < nr.len() {
            let hit = dr
                .iter()
                .enumerate()
                .filter(|(_, d)| (**d - nr[i]).norm() <= tol)
                .min_by(|a, b| {
                    (*a.1 - nr[i]).norm().total_cmp(&(*b.1 - nr[i]).norm())
                })
                .map(|(j, _)| j);
            match hit {
                Some(j) => {
                    dr.remove(j);
                    nr.remove(i);
                }
                None => i += 1,
            }
        }
        let build = |roots: &[Complex], lead: Complex| {
            roots.iter().fold(ComplexPoly::constant(lead), |acc, &r| {
                &acc * &ComplexPoly::new(vec![-r, ONE])
            })
        };
        RationalFn::new(build(&nr, self.num.leading()), build(&dr, self.den.leading()))
    }

    /// Divide numerator and denominator by the denominator's constant term
    /// (or its lowest nonzero coefficient).
    pub fn normalized(&self) -> Self {
        let c = self
            .den
            .coeffs()
            .iter()
            .copied()
            .find(|&c| c != ZERO)
            .unwrap_or(ONE);
        RationalFn {
            num: self.num.scale(ONE / c),
            den: self.den.scale(ONE / c),
        }
    }
}

pub fn rational_eval(r: &RationalFn, z: Complex) -> Result<Complex> {
    r.eval(z)
}

/// First `k + 1` Maclaurin coefficients of `num / den`.
pub fn series_divide(num: &[Complex], den: &[Complex], k: usize) -> Result<Vec<Complex>> {
    let d0 = den.first().copied().unwrap_or(ZERO);
    if d0 == ZERO {
        return Err(Error::ZeroConstantTerm);
    }
    let at = |v: &[Complex], j: usize| v.get(j).copied().unwrap_or(ZERO);
    let mut q = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut s = at(num, n);
        for j in 1..=n.min(den.len().saturating_sub(1)) {
            s -= den[j] * q[n - j];
        }
        q.push(s / d0);
    }
    Ok(q)
}

/// First `k + 1` coefficients of the product of two series.
pub fn series_mul(a: &[Complex], b: &[Complex], k: usize) -> Vec<Complex> {
    (0..=k)
        .map(|n| {
            (0..=n)
                .filter(|&j| j < a.len() && n - j < b.len())
                .map(|j| a[j] * b[n - j])
                .sum()
        })
        .collect()
}
