//! Schur fractions, the transfer-matrix description of a single parameter
//! replacement, Carathéodory functions and the gamma sequence.
//!
//! Numerators and denominators follow
//!
//! ```text
//! A_{2n}   = alpha_n A_{2n-1} + A_{2n-2}
//! A_{2n+1} = conj(alpha_n) z A_{2n} + (1 - |alpha_n|^2) z A_{2n-1}
//! ```
//!
//! (same for `B`) with `A_{-1} = 1, B_{-1} = 0`, so that `A_0 = alpha_0, B_0 = 1,
//! A_1 = z, B_1 = conj(alpha_0) z`. In matrix form
//! `[[A_{2p+1}, B_{2p+1}], [A_{2p}, B_{2p}]] = [[z, conj(alpha_p) z], [alpha_p, 1]] * (previous)`.

use std::sync::Arc;

use crate::core_math::{real, Complex, ComplexPoly, RationalFn, ONE, ZERO};
use crate::hypergeom::schur_class_params;
use crate::{Error, Result};

/// Largest index for which coefficient vectors are built; deeper work is per point.
pub const SYMBOLIC_LIMIT: usize = 120;

/// Source of Schur parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSeq {
    /// Entries past the end read as 0.
    Explicit(Vec<Complex>),
    /// `alpha_0 = 1/2`, `alpha_n = 2/(2n+1)`; Schur function `(1+z)/2`.
    Example31,
    /// `alpha_j = (c-2b)/(c+j)` (j even), `(c-2a-1)/(c+j)` (j odd).
    SchurClass { a: f64, b: f64, c: f64 },
}

impl AlphaSeq {
    pub fn get(&self, j: usize) -> Complex {
        match self {
            AlphaSeq::Explicit(v) => v.get(j).copied().unwrap_or(ZERO),
            AlphaSeq::Example31 => {
                if j == 0 {
                    real(0.5)
                } else {
                    real(2.0 / (2.0 * j as f64 + 1.0))
                }
            }
            AlphaSeq::SchurClass { a, b, c } => {
                real(schur_class_params(*a, *b, *c, j).map(|s| s.alpha).unwrap_or(f64::NAN))
            }
        }
    }

    /// Known closed form of the Schur function, when there is one.
    pub fn closed_form(&self) -> Option<RationalFn> {
        match self {
            AlphaSeq::Example31 => Some(
                RationalFn::new(ComplexPoly::from_real(&[0.5, 0.5]), ComplexPoly::constant(ONE)).ok()?,
            ),
            _ => None,
        }
    }
}

/// Parameters plus an optional replacement `alpha_k -> beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurParams {
    pub seq: AlphaSeq,
    pub replacement: Option<(usize, Complex)>,
}

impl SchurParams {
    pub fn new(seq: AlphaSeq) -> Self {
        SchurParams { seq, replacement: None }
    }

    pub fn explicit(alphas: Vec<Complex>) -> Self {
        Self::new(AlphaSeq::Explicit(alphas))
    }

    pub fn with_replacement(&self, k: usize, beta: Complex) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("replacement index must be at least 1"));
        }
        if beta.norm() > 1.0 {
            return Err(Error::Validity {
                index: k,
                reason: format!("|beta| = {} exceeds 1", beta.norm()),
            });
        }
        Ok(SchurParams {
            seq: self.seq.clone(),
            replacement: Some((k, beta)),
        })
    }

    pub fn alpha(&self, j: usize) -> Complex {
        match self.replacement {
            Some((k, beta)) if k == j => beta,
            _ => self.seq.get(j),
        }
    }

    pub fn validate(&self, up_to: usize) -> Result<()> {
        for j in 0..=up_to {
            let a = self.alpha(j);
            if a.norm().is_nan() || a.norm() > 1.0 {
                return Err(Error::Validity {
                    index: j,
                    reason: format!("|alpha_{j}| = {} exceeds 1", a.norm()),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchurPair {
    pub index: usize,
    pub a: ComplexPoly,
    pub b: ComplexPoly,
}

/// `A_n, B_n` for `n = 0..=up_to`.
pub fn schur_pairs(params: &SchurParams, up_to: usize) -> Result<Vec<SchurPair>> {
    if up_to > SYMBOLIC_LIMIT {
        return Err(Error::domain(format!(
            "symbolic pairs are limited to index {SYMBOLIC_LIMIT}; use schur_values"
        )));
    }
    params.validate(up_to / 2 + 1)?;
    let z = ComplexPoly::monomial(ONE, 1);
    let mut out = Vec::with_capacity(up_to + 1);
    let (mut a_prev, mut b_prev) = (ComplexPoly::constant(ONE), ComplexPoly::zero());
    let (mut a_cur, mut b_cur) = (ComplexPoly::constant(params.alpha(0)), ComplexPoly::constant(ONE));
    out.push(SchurPair { index: 0, a: a_cur.clone(), b: b_cur.clone() });
    for idx in 1..=up_to {
        let n = idx / 2;
        let al = params.alpha(n);
        let (a_new, b_new) = if idx % 2 == 0 {
            (
                &a_cur.scale(al) + &a_prev,
                &b_cur.scale(al) + &b_prev,
            )
        } else {
            let w = real(1.0 - al.norm_sqr());
            (
                &(&z * &a_cur).scale(al.conj()) + &(&z * &a_prev).scale(w),
                &(&z * &b_cur).scale(al.conj()) + &(&z * &b_prev).scale(w),
            )
        };
        a_prev = std::mem::replace(&mut a_cur, a_new);
        b_prev = std::mem::replace(&mut b_cur, b_new);
        out.push(SchurPair { index: idx, a: a_cur.clone(), b: b_cur.clone() });
    }
    Ok(out)
}

/// `(A_n(z), B_n(z))` for `n = 0..=up_to`, per point.
pub fn schur_values(params: &SchurParams, up_to: usize, z: Complex) -> Vec<(Complex, Complex)> {
    let mut out = Vec::with_capacity(up_to + 1);
    let (mut ap, mut bp) = (ONE, ZERO);
    let (mut ac, mut bc) = (params.alpha(0), ONE);
    out.push((ac, bc));
    for idx in 1..=up_to {
        let al = params.alpha(idx / 2);
        let (an, bn) = if idx % 2 == 0 {
            (al * ac + ap, al * bc + bp)
        } else {
            let w = 1.0 - al.norm_sqr();
            (al.conj() * z * ac + w * z * ap, al.conj() * z * bc + w * z * bp)
        };
        ap = ac;
        bp = bc;
        ac = an;
        bc = bn;
        // Keep magnitudes bounded; ratios are all that is used downstream.
        let m = ac.norm().max(bc.norm());
        if m > 1e100 {
            let f = 2f64.powi(-(m.log2().floor() as i32));
            ap *= f;
            bp *= f;
            ac *= f;
            bc *= f;
        }
        out.push((ac, bc));
    }
    out
}

/// Even approximant `A_{2n}(z)/B_{2n}(z)`.
pub fn schur_approximant(params: &SchurParams, n: usize, z: Complex) -> Result<Complex> {
    params.validate(n)?;
    let (a, b) = *schur_values(params, 2 * n, z).last().expect("nonempty");
    if b == ZERO {
        return Err(Error::Pole { z });
    }
    Ok(a / b)
}

/// Limit of the even approximants, stopping on a successive difference below `tol`.
pub fn schur_function_value(params: &SchurParams, z: Complex, tol: f64, max_n: usize) -> Result<Complex> {
    params.validate(max_n)?;
    let vals = schur_values(params, 2 * max_n, z);
    let mut prev: Option<Complex> = None;
    for n in 0..=max_n {
        let (a, b) = vals[2 * n];
        if b == ZERO {
            prev = None;
            continue;
        }
        let v = a / b;
        if let Some(p) = prev {
            if (v - p).norm() < tol * v.norm().max(1.0) {
                return Ok(v);
            }
        }
        prev = Some(v);
    }
    let (a, b) = vals[2 * max_n];
    let (c, d) = vals[2 * max_n - 2];
    Err(Error::Convergence {
        depth: max_n,
        last: a / b,
        prev: c / d,
    })
}

/// The 2x2 polynomial matrix relating numerators/denominators after
/// `alpha_k -> beta` to the original ones:
///
/// `s * [[A'_{2p+1}, A'_{2p}], [B'_{2p+1}, B'_{2p}]] = T * [[A_{2p+1}, A_{2p}], [B_{2p+1}, B_{2p}]]`
///
/// with `s = scalar * z^z_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    pub k: usize,
    pub beta: Complex,
    pub t11: ComplexPoly,
    pub t12: ComplexPoly,
    pub t21: ComplexPoly,
    pub t22: ComplexPoly,
    pub p: ComplexPoly,
    pub q: ComplexPoly,
    pub p_star: ComplexPoly,
    pub q_star: ComplexPoly,
    pub scalar: Complex,
    pub z_power: u32,
}

impl TransferMatrix {
    pub fn factor_at(&self, z: Complex) -> Complex {
        self.scalar * z.powu(self.z_power)
    }

    pub fn at(&self, z: Complex) -> [[Complex; 2]; 2] {
        [
            [self.t11.eval(z), self.t12.eval(z)],
            [self.t21.eval(z), self.t22.eval(z)],
        ]
    }
}

/// Transfer matrix for replacing `alpha_k` by `beta`.
///
/// `p = (alpha_k - beta) B_{2k-1} + (1 - beta conj(alpha_k)) B_{2k-2}`,
/// `q = (beta - alpha_k) A_{2k-1} - (1 - conj(alpha_k) beta) A_{2k-2}`, with
/// reciprocals at degree `k`; scalar `z^k prod_{j<=k} (1 - |alpha_j|^2)`.
pub fn perturb_transfer_matrix(params: &SchurParams, k: usize, beta: Complex) -> Result<TransferMatrix> {
    if k == 0 {
        return Err(Error::domain("replacement index must be at least 1"));
    }
    if beta.norm() > 1.0 {
        return Err(Error::Validity {
            index: k,
            reason: format!("|beta| = {} exceeds 1", beta.norm()),
        });
    }
    params.validate(k)?;
    let mut scalar = ONE;
    for j in 0..=k {
        let w = 1.0 - params.alpha(j).norm_sqr();
        if w == 0.0 {
            return Err(Error::Degenerate {
                index: j,
                reason: "unimodular parameter makes the scalar factor vanish".into(),
            });
        }
        scalar *= w;
    }
    let pairs = schur_pairs(params, 2 * k - 1)?;
    let (a1, b1) = (&pairs[2 * k - 1].a, &pairs[2 * k - 1].b);
    let (a2, b2) = (&pairs[2 * k - 2].a, &pairs[2 * k - 2].b);
    let ak = params.alpha(k);
    let p = &b1.scale(ak - beta) + &b2.scale(ONE - beta * ak.conj());
    let q = &a1.scale(beta - ak) - &a2.scale(ONE - ak.conj() * beta);
    let p_star = p.reciprocal(k)?;
    let q_star = q.reciprocal(k)?;
    Ok(TransferMatrix {
        k,
        beta,
        t11: &(&p * a1) + &(&q_star * a2),
        t12: &(&q * a1) + &(&p_star * a2),
        t21: &(&p * b1) + &(&q_star * b2),
        t22: &(&q * b1) + &(&p_star * b2),
        p,
        q,
        p_star,
        q_star,
        scalar: real(scalar.re),
        z_power: k as u32,
    })
}

/// Scaled residual of the transfer identity at index `p >= 2k`, point `z`.
pub fn transfer_identity_residual(params: &SchurParams, t: &TransferMatrix, p: usize, z: Complex) -> Result<f64> {
    if p < 2 * t.k {
        return Err(Error::domain(format!("identity exposed for p >= 2k = {}", 2 * t.k)));
    }
    let pert = params.with_replacement(t.k, t.beta)?;
    let o = schur_values(params, 2 * p + 1, z);
    let n = schur_values(&pert, 2 * p + 1, z);
    let s = t.factor_at(z);
    let m = t.at(z);
    let orig = [[o[2 * p + 1].0, o[2 * p].0], [o[2 * p + 1].1, o[2 * p].1]];
    let new = [[n[2 * p + 1].0, n[2 * p].0], [n[2 * p + 1].1, n[2 * p].1]];
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..2 {
        for j in 0..2 {
            let lhs = s * new[i][j];
            let rhs = m[i][0] * orig[0][j] + m[i][1] * orig[1][j];
            worst = worst.max((lhs - rhs).norm());
            scale = scale.max(lhs.norm()).max(rhs.norm());
        }
    }
    Ok(worst / scale)
}

/// A complex function of one variable that may fail at poles.
pub type ComplexMap = Arc<dyn Fn(Complex) -> Result<Complex> + Send + Sync>;

pub fn map_of(r: RationalFn) -> ComplexMap {
    Arc::new(move |z| r.eval(z))
}

fn mobius(n: Complex, d: Complex, z: Complex) -> Result<Complex> {
    let v = n / d;
    if d == ZERO || !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Pole { z });
    }
    Ok(v)
}

/// `z -> (T12 + T11 f)/(T22 + T21 f)`.
///
/// Both sides carry the factor `z^k`, so the quotient is `0/0` at the origin;
/// there the value is `f(0)`, which a replacement at `k >= 1` leaves alone.
pub fn perturbed_schur_fn(f: ComplexMap, t: &TransferMatrix) -> ComplexMap {
    let t = t.clone();
    Arc::new(move |z| {
        let fz = f(z)?;
        if z == ZERO {
            return Ok(fz);
        }
        let m = t.at(z);
        mobius(m[0][1] + m[0][0] * fz, m[1][1] + m[1][0] * fz, z)
    })
}

/// Same action on a rational `f`, without cancellation.
pub fn perturbed_schur_rational(f: &RationalFn, t: &TransferMatrix) -> Result<RationalFn> {
    let (n, d) = (f.num(), f.den());
    RationalFn::new(&(&t.t12 * d) + &(&t.t11 * n), &(&t.t22 * d) + &(&t.t21 * n))
}

/// `C = (1 + z f)/(1 - z f)`.
pub fn schur_to_caratheodory(f: ComplexMap) -> ComplexMap {
    Arc::new(move |z| {
        let zf = z * f(z)?;
        mobius(ONE + zf, ONE - zf, z)
    })
}

/// `f = (C - 1)/(z (C + 1))`, undefined at `z = 0`.
pub fn caratheodory_to_schur(c: ComplexMap) -> ComplexMap {
    Arc::new(move |z| {
        if z == ZERO {
            return Err(Error::domain("the inverse map is undefined at z = 0"));
        }
        let cz = c(z)?;
        mobius(cz - ONE, z * (cz + ONE), z)
    })
}

fn z_poly() -> ComplexPoly {
    ComplexPoly::monomial(ONE, 1)
}

pub fn schur_to_caratheodory_rational(f: &RationalFn) -> Result<RationalFn> {
    let zn = &z_poly() * f.num();
    RationalFn::new(f.den() + &zn, f.den() - &zn)
}

pub fn caratheodory_to_schur_rational(c: &RationalFn) -> Result<RationalFn> {
    RationalFn::new(c.num() - c.den(), &z_poly() * &(c.num() + c.den()))
}

/// `(Y-, Y+, W-, W+)` with
/// `Y+- = z(T22 + z T12) +- (T21 + z T11)`, `W+- = z(T22 - z T12) +- (T21 - z T11)`.
pub fn carath_coefficients(t: &TransferMatrix) -> [ComplexPoly; 4] {
    let z = z_poly();
    let ya = &z * &(&t.t22 + &(&z * &t.t12));
    let yb = &t.t21 + &(&z * &t.t11);
    let wa = &z * &(&t.t22 - &(&z * &t.t12));
    let wb = &t.t21 - &(&z * &t.t11);
    [&ya - &yb, &ya + &yb, &wa - &wb, &wa + &wb]
}

/// `z -> (Y- + Y+ C)/(W- + W+ C)`; `C(0) = 1` is returned at the origin, where
/// the quotient is `0/0`.
pub fn perturbed_caratheodory(c: ComplexMap, t: &TransferMatrix) -> ComplexMap {
    let [ym, yp, wm, wp] = carath_coefficients(t);
    Arc::new(move |z| {
        let cz = c(z)?;
        if z == ZERO {
            return Ok(cz);
        }
        mobius(ym.eval(z) + yp.eval(z) * cz, wm.eval(z) + wp.eval(z) * cz, z)
    })
}

pub fn perturbed_caratheodory_rational(c: &RationalFn, t: &TransferMatrix) -> Result<RationalFn> {
    let [ym, yp, wm, wp] = carath_coefficients(t);
    let (n, d) = (c.num(), c.den());
    RationalFn::new(&(&ym * d) + &(&yp * n), &(&wm * d) + &(&wp * n))
}

/// Schur parameters of a rational Schur function by the Schur algorithm
/// `f_{j+1} = (f_j - alpha_j)/(z (1 - conj(alpha_j) f_j))`.
/// Stops early after a unimodular parameter.
pub fn schur_parameters(f: &RationalFn, n: usize) -> Result<Vec<Complex>> {
    Ok(schur_steps(f, n)?.0)
}

/// Parameters `alpha_0..alpha_{n-1}` and the remaining function `f_n` as `(num, den)`.
fn schur_steps(f: &RationalFn, n: usize) -> Result<(Vec<Complex>, ComplexPoly, ComplexPoly)> {
    let (mut num, mut den) = (f.num().clone(), f.den().clone());
    let mut alphas = Vec::with_capacity(n);
    for j in 0..n {
        let d0 = den.coeff(0);
        if d0 == ZERO {
            return Err(Error::Degenerate {
                index: j,
                reason: "Schur step hits a zero denominator at the origin".into(),
            });
        }
        let al = num.coeff(0) / d0;
        alphas.push(al);
        if al.norm() >= 1.0 - 1e-15 {
            break;
        }
        let top = &num - &den.scale(al);
        let bottom = &den - &num.scale(al.conj());
        // top(0) vanishes by construction; divide by z
        let mut c = top.coeffs().to_vec();
        if !c.is_empty() {
            c.remove(0);
        }
        num = ComplexPoly::new(c);
        den = bottom;
    }
    Ok((alphas, num, den))
}

/// Exact rational oracle for `alpha_k -> beta`: run the Schur algorithm to
/// `f_{k+1}`, then rebuild with `beta` in place of `alpha_k`.
pub fn replace_parameter_rational(f: &RationalFn, k: usize, beta: Complex) -> Result<RationalFn> {
    let (alphas, mut num, mut den) = schur_steps(f, k + 1)?;
    if alphas.len() <= k {
        return Err(Error::Degenerate {
            index: alphas.len() - 1,
            reason: "the Schur algorithm terminated before the replaced index".into(),
        });
    }
    let z = z_poly();
    for j in (0..=k).rev() {
        let al = if j == k { beta } else { alphas[j] };
        let zn = &z * &num;
        let new_num = &den.scale(al) + &zn;
        let new_den = &den + &zn.scale(al.conj());
        num = new_num;
        den = new_den;
    }
    RationalFn::new(num, den)
}

/// Result of replacing `alpha_1` by `beta_1` for `f(z) = c z + d`, in the cubic form
/// `(A z^3 + B z^2 + C z + D)/(A^ z^3 + B^ z^2 + C^ z + D^)`.
pub fn affine_perturbation(c: Complex, d: Complex, alpha0: Complex, alpha1: Complex, beta1: Complex) -> Result<RationalFn> {
    let (a0, al, be) = (alpha0, alpha1, beta1);
    let a0c = a0.conj();
    let n0 = a0.norm_sqr();
    let cap_a = (al - be) * a0c * c;
    let cap_b = (be - al) * (ONE - a0c * d) + c * (ONE - be * al.conj()) - c * n0 * (ONE - al * be.conj());
    let cap_c = (ONE - al * be.conj()) * (a0 - d * n0) + (ONE - al.conj() * be) * (d - a0) + c * a0 * (be.conj() - al.conj());
    let cap_d = (be.conj() - al.conj()) * (d - a0) * a0;
    let ha = (al - be) * a0c * a0c * c;
    let hb = (be - al) * (ONE - a0c * d) * a0c + c * (ONE - be * al.conj()) * a0c - c * (ONE - al * be.conj()) * a0c;
    let hc = (ONE - al * be.conj()) * (ONE - d * a0c) + (ONE - be * al.conj()) * (d * a0c - n0) + c * (be.conj() - al.conj());
    let hd = (be.conj() - al.conj()) * (d - a0);
    RationalFn::new(
        ComplexPoly::new(vec![cap_d, cap_c, cap_b, cap_a]),
        ComplexPoly::new(vec![hd, hc, hb, ha]),
    )
}

/// Outcome of comparing `f_pert` with an affine `f` through `omega = f^{-1} o f_pert`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubordinationReport {
    pub points: usize,
    pub max_ratio: f64,
    pub worst_z: Complex,
    pub omega_at_zero: Complex,
    pub all_below_one: bool,
}

/// `n_r x n_theta` polar grid with radii `radius * i / n_r`, `i = 1..=n_r`.
pub fn polar_grid(radius: f64, n_r: usize, n_theta: usize) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n_r * n_theta);
    for i in 1..=n_r {
        let r = radius * i as f64 / n_r as f64;
        for j in 0..n_theta {
            out.push(Complex::from_polar(r, std::f64::consts::TAU * j as f64 / n_theta as f64));
        }
    }
    out
}

/// The default 1000-point grid in `0 < |z| <= 0.95`.
pub fn subordination_grid() -> Vec<Complex> {
    polar_grid(0.95, 25, 40)
}

/// `omega(z)` for affine `f`, or an unsupported error.
pub fn omega_map(f: &RationalFn, f_pert: ComplexMap) -> Result<ComplexMap> {
    if f.den().degree() != 0 || f.num().degree() > 1 {
        return Err(Error::Unsupported("subordination check needs an affine f".into()));
    }
    let d0 = f.den().coeff(0);
    let slope = f.num().coeff(1) / d0;
    let intercept = f.num().coeff(0) / d0;
    if slope == ZERO {
        return Err(Error::Unsupported("constant f is not invertible".into()));
    }
    Ok(Arc::new(move |z| Ok((f_pert(z)? - intercept) / slope)))
}

pub fn subordination_check(f: &RationalFn, f_pert: ComplexMap, grid: &[Complex]) -> Result<SubordinationReport> {
    let omega = omega_map(f, f_pert)?;
    let mut max_ratio: f64 = 0.0;
    let mut worst_z = ZERO;
    for &z in grid {
        if z == ZERO {
            continue;
        }
        let r = omega(z)?.norm() / z.norm();
        if r > max_ratio {
            max_ratio = r;
            worst_z = z;
        }
    }
    Ok(SubordinationReport {
        points: grid.len(),
        max_ratio,
        worst_z,
        omega_at_zero: omega(ZERO)?,
        all_below_one: max_ratio < 1.0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSeq {
    pub gammas: Vec<Complex>,
}

/// `gamma_0 = 1`, `gamma_{p+1} = (gamma_p - conj(alpha_p))/(1 - alpha_p gamma_p)`.
pub fn gamma_sequence(params: &SchurParams, up_to: usize) -> Result<GammaSeq> {
    let mut g = Vec::with_capacity(up_to + 1);
    g.push(ONE);
    for p in 0..up_to {
        let al = params.alpha(p);
        let den = ONE - al * g[p];
        if den == ZERO {
            return Err(Error::Degenerate {
                index: p,
                reason: "1 - alpha_p gamma_p vanishes".into(),
            });
        }
        g.push((g[p] - al.conj()) / den);
    }
    Ok(GammaSeq { gammas: g })
}

/// Coefficients of the bilinear map sending `gamma_{k+j}` to its perturbed value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilinearStep {
    pub a: Complex,
    pub b: Complex,
    pub residual: f64,
    /// `|a|^2 - |b|^2`.
    pub invariant: f64,
}

/// `(a_{k+j}, b_{k+j})` by the recursion, and the residual against the
/// gamma sequence of the substituted parameters.
pub fn gamma_bilinear(params: &SchurParams, k: usize, beta: Complex, j: usize) -> Result<BilinearStep> {
    if j == 0 {
        return Err(Error::domain("j must be at least 1"));
    }
    let nb = beta.norm_sqr();
    if nb >= 1.0 {
        return Err(Error::Degenerate {
            index: k,
            reason: "unimodular beta".into(),
        });
    }
    let ak = params.alpha(k);
    let mut a = (ONE - ak.conj() * beta) / (1.0 - nb);
    let mut b = (beta.conj() - ak.conj()) / (1.0 - nb);
    for i in 2..=j {
        let al = params.alpha(k + i - 1);
        let w = 1.0 - al.norm_sqr();
        if w <= 0.0 {
            return Err(Error::Degenerate {
                index: k + i - 1,
                reason: "unimodular parameter in the bilinear update".into(),
            });
        }
        let x = a - al.conj() * b.conj();
        let y = b - al.conj() * a.conj();
        a = (x + al * y) / w;
        b = (al.conj() * x + y) / w;
    }
    let g = gamma_sequence(params, k + j)?.gammas[k + j];
    let gp = gamma_sequence(&params.with_replacement(k, beta)?, k + j)?.gammas[k + j];
    let pred = mobius(a.conj() * g - b, -b.conj() * g + a, g)?;
    Ok(BilinearStep {
        a,
        b,
        residual: (gp - pred).norm(),
        invariant: a.norm_sqr() - b.norm_sqr(),
    })
}

/// `alpha = 1 - 2g`.
pub fn alpha_from_g(g: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::Validity {
            index: 0,
            reason: format!("g = {g} is outside [0, 1]"),
        });
    }
    Ok(1.0 - 2.0 * g)
}

/// `g = (1 - alpha)/2`.
pub fn g_from_alpha(alpha: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::Validity {
            index: 0,
            reason: format!("alpha = {alpha} is outside [-1, 1]"),
        });
    }
    Ok((1.0 - alpha) / 2.0)
}
