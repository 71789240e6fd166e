mod common;

use common::{disk_points, rel_close};
use gfrac::cf::*;
use gfrac::gfraction::{gfrac_spec, GSequence};
use gfrac::hypergeom::Hyp2F1Params;
use gfrac::{core_math, Complex, ComplexPoly};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn cplx() -> impl Strategy<Value = Complex> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b))
}

fn poly() -> impl Strategy<Value = Vec<Complex>> {
    proptest::collection::vec(cplx(), 1..8)
}

proptest! {
    #[test]
    fn reciprocal_is_involution(coeffs in poly(), extra in 0usize..3) {
        let p = ComplexPoly::new(coeffs);
        let n = p.degree() + extra;
        let back = p.reciprocal(n).unwrap().reciprocal(n).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn reciprocal_evaluation(coeffs in poly(), z in cplx()) {
        prop_assume!(z.norm() > 1e-3);
        let p = ComplexPoly::new(coeffs);
        let n = p.degree();
        let lhs = p.reciprocal(n).unwrap().eval(z);
        let rhs = z.powu(n as u32) * p.eval(Complex::new(1.0, 0.0) / z.conj()).conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()).max(1.0));
    }

    #[test]
    fn series_round_trip(num in poly(), den in poly(), k in 0usize..10) {
        prop_assume!(den[0].norm() > 0.5);
        let q = core_math::series_divide(&num, &den, k).unwrap();
        let back = core_math::series_mul(&q, &den, k);
        for j in 0..=k {
            let want = num.get(j).copied().unwrap_or_default();
            prop_assert!((back[j] - want).norm() <= 1e-13 * (1.0 + q.iter().map(|x| x.norm()).fold(0.0, f64::max)));
        }
    }

    #[test]
    fn roots_have_small_residual(coeffs in proptest::collection::vec(cplx(), 2..7)) {
        let p = ComplexPoly::new(coeffs);
        prop_assume!(p.degree() >= 1 && p.leading().norm() > 0.1);
        let roots = p.roots().unwrap();
        prop_assert_eq!(roots.len(), p.degree());
        let total: f64 = roots.iter().map(|&r| p.eval(r).norm() / r.norm().max(1.0).powi(p.degree() as i32)).sum();
        prop_assert!(total <= 1e-8 * p.leading().norm().max(p.max_abs_coeff()));
    }
}

#[test]
fn reciprocal_at_100_points() {
    let p = ComplexPoly::new(vec![c(0.5, -1.0), c(2.0, 0.3), c(0.0, 1.0), c(-1.5, 0.25)]);
    let rp = p.reciprocal(5).unwrap();
    for z in disk_points(7, 100, 2.0) {
        let want = z.powu(5) * p.eval(c(1.0, 0.0) / z.conj()).conj();
        assert!(rel_close(rp.eval(z), want, 1e-12));
    }
}

fn gauss() -> CfSpec {
    gfrac_spec(&GSequence::Gauss(Hyp2F1Params::new(0.2, 0.6, 1.5).unwrap())).unwrap()
}

#[test]
fn denominator_degree_bound() {
    let spec = gauss();
    for k in 1..=12 {
        let (x, y) = approximant_polys(&spec, k);
        assert!(y.degree() <= k / 2, "k = {k}: deg Y = {}", y.degree());
        // the polynomial and the per-point recurrence agree
        let z = c(0.3, -0.2);
        let pair = approximant(&spec, k, z);
        let v = x.eval(z) / y.eval(z);
        assert!(rel_close(v, pair.value(z).unwrap(), 1e-13));
    }
}

#[test]
fn modified_approximant_with_exact_tail() {
    let spec = gauss();
    let z = c(0.35, 0.25);
    let opts = EvalOptions::default();
    let full = cf_limit(&spec, z, opts).unwrap().value;
    for k in [1, 3, 7, 15] {
        let tail = tail_value(&spec, k, z, 2000, 1e-13).unwrap();
        assert_eq!(tail.start_index, k + 1);
        let pair = approximant(&spec, k, z);
        let v = modified_approximant(&pair, -tail.value).unwrap();
        assert!((v - full).norm() <= 5e-13 * full.norm().max(1.0));
    }
}

#[test]
fn tail_at_origin_is_zero() {
    // every partial numerator past the first is linear in z
    let spec = gauss();
    for k in 1..5 {
        assert_eq!(tail_value(&spec, k, c(0.0, 0.0), 50, 1e-13).unwrap().value, c(0.0, 0.0));
    }
}

#[test]
fn engine_determinant_for_schur_like_terms() {
    // alternating constant and linear partial numerators
    let spec = CfSpec::new(Term::Constant(c(0.3, 0.0)), |n| {
        let a = if n % 2 == 1 {
            Term::Linear(c(0.2, 0.1 * n as f64))
        } else {
            Term::Constant(c(1.0 / n as f64, -0.3))
        };
        (a, Term::Constant(c(1.0, 0.0)))
    });
    let z = c(0.5, 0.4);
    for k in 1..30 {
        let (_, scaled) = determinant_check(&approximant(&spec, k, z), &spec, z);
        assert!(scaled < 1e-12);
    }
}

#[test]
fn deep_evaluation_survives_rescaling() {
    // a_n = 1, b_n = 3: converges to (sqrt(13) - 3)/2 with growing Y_k
    let spec = CfSpec::new(Term::Constant(c(0.0, 0.0)), |_| (Term::Constant(c(1.0, 0.0)), Term::Constant(c(3.0, 0.0))));
    let pair = approximant(&spec, 1500, c(0.0, 0.0));
    assert!(pair.scale_exp != 0);
    let want = (13f64.sqrt() - 3.0) / 2.0;
    assert!((pair.value(c(0.0, 0.0)).unwrap().re - want).abs() < 1e-15);
}
