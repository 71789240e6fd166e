mod common;

use common::{close, disk_points, rel_close};
use gfrac::schur::*;
use gfrac::{Complex, ComplexPoly, RationalFn};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn r(x: f64) -> Complex {
    c(x, 0.0)
}

fn example() -> SchurParams {
    SchurParams::new(AlphaSeq::Example31)
}

fn affine(slope: Complex, intercept: Complex) -> RationalFn {
    RationalFn::new(ComplexPoly::new(vec![intercept, slope]), ComplexPoly::constant(r(1.0))).unwrap()
}

fn poly_close(p: &ComplexPoly, want: &[f64], tol: f64) -> bool {
    (0..want.len().max(p.coeffs().len())).all(|j| (p.coeff(j) - r(*want.get(j).unwrap_or(&0.0))).norm() <= tol)
}

fn true_example_pert(z: Complex) -> Complex {
    2.0 * (z * z + 3.0 * z + 5.0) / (z * z - 3.0 * z + 20.0)
}

#[test]
fn example_closed_forms() {
    let pairs = schur_pairs(&example(), 13).unwrap();
    for z in disk_points(1, 10, 0.9) {
        let one = r(1.0);
        for m in 1..=6usize {
            let mf = m as f64;
            let den = (2.0 * mf + 1.0) * (z - one) * (z - one);
            let pw = |e: usize| z.powu(e as u32);
            let a2m = 0.5 + (2.0 * pw(m + 2) - 2.0 * (mf + 1.0) * z * z + 2.0 * mf * z) / den;
            let b2m = one + (pw(m + 2) + pw(m + 1) - (2.0 * mf + 1.0) * z * z + (2.0 * mf - 1.0) * z) / den;
            let a2m1 = (z + z * z - (2.0 * mf + 3.0) * pw(m + 2) + (2.0 * mf + 1.0) * pw(m + 3)) / den;
            let b2m1 = pw(m + 1) / 2.0 + 2.0 * (z - (mf + 1.0) * pw(m + 1) + mf * pw(m + 2)) / den;
            assert!(rel_close(pairs[2 * m].a.eval(z), a2m, 1e-12), "A_{}", 2 * m);
            assert!(rel_close(pairs[2 * m].b.eval(z), b2m, 1e-12), "B_{}", 2 * m);
            assert!(rel_close(pairs[2 * m + 1].a.eval(z), a2m1, 1e-12), "A_{}", 2 * m + 1);
            assert!(rel_close(pairs[2 * m + 1].b.eval(z), b2m1, 1e-12), "B_{}", 2 * m + 1);
        }
    }
}

#[test]
fn example_transfer_entries() {
    let t = perturb_transfer_matrix(&example(), 1, r(0.5)).unwrap();
    assert!(poly_close(&t.p, &[2.0 / 3.0, 1.0 / 12.0], 1e-14));
    assert!(poly_close(&t.q, &[-1.0 / 3.0, -1.0 / 6.0], 1e-14));
    assert!(poly_close(&t.p_star, &[1.0 / 12.0, 2.0 / 3.0], 1e-14));
    assert!(poly_close(&t.q_star, &[-1.0 / 6.0, -1.0 / 3.0], 1e-14));
    assert!(poly_close(&t.t11, &[-1.0 / 12.0, 0.5, 1.0 / 12.0], 1e-14));
    assert!(poly_close(&t.t21, &[-1.0 / 6.0, 0.0, 1.0 / 24.0], 1e-14));
    assert!(poly_close(&t.t22, &[1.0 / 12.0, 0.5, -1.0 / 12.0], 1e-14));
    // The constant term comes out as 1/24; the substitution oracle below confirms it.
    assert!(poly_close(&t.t12, &[1.0 / 24.0, 0.0, -1.0 / 6.0], 1e-14));
    assert_eq!(t.z_power, 1);
    assert!((t.scalar - r(0.75 * (1.0 - 4.0 / 9.0))).norm() < 1e-15);
}

#[test]
fn example_perturbed_function() {
    let f = example().seq.closed_form().unwrap();
    let t = perturb_transfer_matrix(&example(), 1, r(0.5)).unwrap();
    let by_t = perturbed_schur_fn(map_of(f.clone()), &t);
    let by_rational = perturbed_schur_rational(&f, &t).unwrap();
    let oracle = replace_parameter_rational(&f, 1, r(0.5)).unwrap();
    for z in disk_points(2, 20, 0.9) {
        let want = true_example_pert(z);
        assert!(close(by_t(z).unwrap(), want, 1e-12));
        assert!(close(by_rational.eval(z).unwrap(), want, 1e-12));
        assert!(close(oracle.eval(z).unwrap(), want, 1e-12));
        // deep approximant of the substituted sequence
        let pert = example().with_replacement(1, r(0.5)).unwrap();
        assert!(close(schur_function_value(&pert, z, 1e-15, 4000).unwrap(), want, 1e-9));
    }
    // Taylor check: f'(0) = alpha_0 and the linear coefficient is (1 - |alpha_0|^2) beta.
    let h = 1e-4;
    let d = (by_t(r(h)).unwrap() - by_t(r(-h)).unwrap()) / (2.0 * h);
    assert!((d - r(0.375)).norm() < 1e-7);
}

#[test]
fn example_caratheodory() {
    let f = example().seq.closed_form().unwrap();
    let t = perturb_transfer_matrix(&example(), 1, r(0.5)).unwrap();
    let carat = schur_to_caratheodory_rational(&f).unwrap();
    let cp = perturbed_caratheodory_rational(&carat, &t).unwrap();
    let cp_map = perturbed_caratheodory(map_of(carat.clone()), &t);
    let composed = schur_to_caratheodory(perturbed_schur_fn(map_of(f.clone()), &t));
    for z in disk_points(3, 20, 0.9) {
        let want = (2.0 * z.powu(3) + 7.0 * z * z + 7.0 * z + 20.0) / (-2.0 * z.powu(3) - 5.0 * z * z - 13.0 * z + 20.0);
        assert!(close(cp.eval(z).unwrap(), want, 1e-10));
        assert!(close(cp_map(z).unwrap(), want, 1e-10));
        assert!(close(composed(z).unwrap(), want, 1e-10));
        let c0 = (2.0 + z + z * z) / (2.0 - z - z * z);
        assert!(close(carat.eval(z).unwrap(), c0, 1e-12));
    }
}

#[test]
fn caratheodory_round_trip() {
    let f: ComplexMap = std::sync::Arc::new(|z: Complex| Ok((z * z + 0.3) / (2.0 - z)));
    let back = caratheodory_to_schur(schur_to_caratheodory(f.clone()));
    for z in disk_points(4, 50, 0.95) {
        assert!(close(back(z).unwrap(), f(z).unwrap(), 1e-13));
    }
    let zero: ComplexMap = std::sync::Arc::new(|_| Ok(r(0.0)));
    assert_eq!(schur_to_caratheodory(zero)(c(0.3, 0.2)).unwrap(), r(1.0));
}

#[test]
fn example_subordination() {
    let f = example().seq.closed_form().unwrap();
    let t = perturb_transfer_matrix(&example(), 1, r(0.5)).unwrap();
    let fp = perturbed_schur_fn(map_of(f.clone()), &t);
    let rep = subordination_check(&f, fp.clone(), &subordination_grid()).unwrap();
    assert_eq!(rep.points, 1000);
    assert!(rep.all_below_one, "{rep:?}");
    assert!(rep.omega_at_zero.norm() < 1e-15);
    let omega = omega_map(&f, fp).unwrap();
    let z = r(0.5);
    let want = 3.0 * z * (z + 5.0) / (z * z - 3.0 * z + 20.0);
    assert!(close(omega(z).unwrap(), want, 1e-14));
    assert!((omega(z).unwrap().norm() / 0.5 - 0.88).abs() < 1e-12);
    // The alternative z(z - 3) numerator gives -0.2 at the same point.
    let alt = 3.0 * z * (z - 3.0) / (z * z - 3.0 * z + 20.0);
    assert!(close(alt, r(-0.2), 1e-15));
}

#[test]
fn pole_cubic_roots() {
    let p = ComplexPoly::from_real(&[20.0, -13.0, 7.0, -2.0]);
    let roots = p.roots().unwrap();
    let s = 15f64.sqrt() / 2.0;
    for want in [r(2.5), c(0.5, s), c(0.5, -s)] {
        assert!(roots.iter().any(|&x| (x - want).norm() < 1e-8));
    }
}

#[test]
fn reciprocal_relations() {
    let params = SchurParams::explicit(vec![
        c(0.3, 0.1),
        c(-0.2, 0.4),
        c(0.5, -0.3),
        c(0.1, 0.1),
        c(-0.6, 0.2),
        c(0.0, -0.7),
        c(0.25, 0.25),
        c(0.4, 0.0),
        c(-0.1, -0.5),
        c(0.2, 0.6),
        c(-0.3, -0.3),
    ]);
    let pairs = schur_pairs(&params, 21).unwrap();
    let zp = ComplexPoly::monomial(r(1.0), 1);
    for n in 0..=10 {
        let (e, o) = (&pairs[2 * n], &pairs[2 * n + 1]);
        let a_odd = &zp * &e.b.reciprocal(n).unwrap();
        let b_odd = &zp * &e.a.reciprocal(n).unwrap();
        let a_even = o.b.reciprocal(n + 1).unwrap();
        let b_even = o.a.reciprocal(n + 1).unwrap();
        for z in disk_points(5 + n as u64, 20, 1.0) {
            assert!(rel_close(o.a.eval(z), a_odd.eval(z), 1e-12));
            assert!(rel_close(o.b.eval(z), b_odd.eval(z), 1e-12));
            assert!(rel_close(e.a.eval(z), a_even.eval(z), 1e-12));
            assert!(rel_close(e.b.eval(z), b_even.eval(z), 1e-12));
        }
    }
}

#[test]
fn combined_recurrence_holds() {
    // Eliminating A_{2n}: A_{2n+1} = z A_{2n-1} + conj(alpha_n) z A_{2n-2}.
    let params = SchurParams::explicit(vec![c(0.2, 0.3), c(-0.4, 0.1), c(0.3, -0.3), c(0.1, 0.5)]);
    let z = c(0.3, -0.4);
    let v = schur_values(&params, 9, z);
    for n in 1..4 {
        let al = params.alpha(n);
        for (lhs, p1, p2) in [
            (v[2 * n + 1].0, v[2 * n - 1].0, v[2 * n - 2].0),
            (v[2 * n + 1].1, v[2 * n - 1].1, v[2 * n - 2].1),
        ] {
            assert!(close(lhs, z * p1 + al.conj() * z * p2, 1e-14));
        }
    }
}

#[test]
fn no_op_perturbation() {
    let params = SchurParams::explicit(vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.3), c(0.1, 0.1)]);
    for k in 1..=3 {
        let t = perturb_transfer_matrix(&params, k, params.alpha(k)).unwrap();
        for z in disk_points(11, 10, 0.9) {
            let f: ComplexMap = std::sync::Arc::new(|z: Complex| Ok(0.3 * z + c(0.1, 0.2)));
            let fp = perturbed_schur_fn(f.clone(), &t);
            assert!(close(fp(z).unwrap(), f(z).unwrap(), 1e-12));
            for p in 2 * k..2 * k + 2 {
                assert!(transfer_identity_residual(&params, &t, p, z).unwrap() < 1e-12);
            }
        }
    }
}

#[test]
fn identity_for_random_real_alphas_k2() {
    let params = SchurParams::explicit(vec![r(0.31), r(-0.42), r(0.17), r(0.55), r(-0.23), r(0.08)]);
    let t = perturb_transfer_matrix(&params, 2, r(0.1)).unwrap();
    for z in disk_points(12, 10, 0.95) {
        for p in [4, 5] {
            assert!(transfer_identity_residual(&params, &t, p, z).unwrap() <= 1e-12);
        }
    }
    assert!(transfer_identity_residual(&params, &t, 3, r(0.2)).is_err());
}

/// Alternative readings: reciprocals at degree `2k-1`, factor `z^z_power`.
fn variant_residual(params: &SchurParams, k: usize, beta: Complex, p: usize, z: Complex, z_power: u32) -> f64 {
    let t = perturb_transfer_matrix(params, k, beta).unwrap();
    let pairs = schur_pairs(params, 2 * k - 1).unwrap();
    let d = 2 * k - 1;
    let ps = t.p.reciprocal(d).unwrap();
    let qs = t.q.reciprocal(d).unwrap();
    let (a1, b1, a2, b2) = (&pairs[d].a, &pairs[d].b, &pairs[d - 1].a, &pairs[d - 1].b);
    let t11 = &(&t.p * a1) + &(&qs * a2);
    let t12 = &(&t.q * a1) + &(&ps * a2);
    let t21 = &(&t.p * b1) + &(&qs * b2);
    let t22 = &(&t.q * b1) + &(&ps * b2);
    let s = t.scalar * z.powu(z_power);
    let o = schur_values(params, 2 * p + 1, z);
    let n = schur_values(&params.with_replacement(k, beta).unwrap(), 2 * p + 1, z);
    let m = [[t11.eval(z), t12.eval(z)], [t21.eval(z), t22.eval(z)]];
    let orig = [[o[2 * p + 1].0, o[2 * p].0], [o[2 * p + 1].1, o[2 * p].1]];
    let new = [[n[2 * p + 1].0, n[2 * p].0], [n[2 * p + 1].1, n[2 * p].1]];
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let lhs = s * new[i][j];
            let rhs = m[i][0] * orig[0][j] + m[i][1] * orig[1][j];
            worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300));
        }
    }
    worst
}

#[test]
fn degree_2k_minus_1_reading_fails_beyond_k1() {
    let params = SchurParams::explicit(vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.3), c(0.1, 0.1), c(-0.3, 0.2)]);
    let z = c(0.4, 0.3);
    let beta = c(0.2, -0.1);
    // degree 2k-1 equals k at k = 1 only
    assert!(variant_residual(&params, 1, beta, 2, z, 1) < 1e-12);
    assert!(variant_residual(&params, 2, beta, 4, z, 2) > 1e-3);
    assert!(variant_residual(&params, 3, beta, 6, z, 3) > 1e-3);
    // and the factor z^{k-1} is off by one power of z
    assert!(variant_residual(&params, 1, beta, 2, z, 0) > 1e-3);
}

#[test]
fn affine_perturbation_matches_substitution() {
    let cases = [
        (r(0.3), r(0.2), r(-0.1)),
        (c(0.2, 0.1), c(0.1, -0.3), c(0.4, 0.2)),
        (c(-0.35, 0.0), c(0.0, 0.5), c(-0.2, -0.6)),
    ];
    for (slope, a0, beta) in cases {
        let f = affine(slope, a0);
        let alphas = schur_parameters(&f, 2).unwrap();
        assert!(close(alphas[0], a0, 1e-15));
        let a1 = slope / (1.0 - a0.norm_sqr());
        assert!(close(alphas[1], a1, 1e-15));
        let got = affine_perturbation(slope, a0, a0, a1, beta).unwrap();
        let want = replace_parameter_rational(&f, 1, beta).unwrap();
        let seq = SchurParams::explicit(schur_parameters(&f, 60).unwrap()).with_replacement(1, beta).unwrap();
        for z in disk_points(13, 20, 0.9) {
            let g = got.eval(z).unwrap();
            assert!(close(g, want.eval(z).unwrap(), 1e-12));
            assert!(close(g, schur_approximant(&seq, 40, z).unwrap(), 1e-10));
        }
        // both constant terms vanish when d = alpha_0
        assert!(got.num().coeff(0).norm() < 1e-15 && got.den().coeff(0).norm() < 1e-15);
    }
}

#[test]
fn gamma_bilinear_complex_case() {
    let params = SchurParams::explicit(vec![c(0.0, 0.3), r(0.5), c(-0.2, 0.1), c(0.3, 0.3), c(-0.1, -0.4), c(0.2, 0.0)]);
    let beta = c(0.0, 0.25);
    let inv = (1.0 - 0.25) / (1.0 - 0.0625);
    for j in 1..=5 {
        let s = gamma_bilinear(&params, 1, beta, j).unwrap();
        assert!(s.residual <= 1e-12, "j = {j}: {}", s.residual);
        assert!((s.invariant - inv).abs() <= 1e-12);
    }
}

#[test]
fn real_alphas_fix_gamma() {
    let params = SchurParams::explicit((0..21).map(|j| r(0.9 * ((j as f64) * 1.3).sin())).collect());
    let g = gamma_sequence(&params, 20).unwrap();
    assert!(g.gammas.iter().all(|x| (x - r(1.0)).norm() <= 1e-14));
}

#[test]
fn real_parameters_give_g_in_unit_interval() {
    for j in 0..50 {
        let a = ((j as f64) * 0.7).cos();
        let g = g_from_alpha(a).unwrap();
        assert!((0.0..=1.0).contains(&g));
    }
}

#[test]
fn class_special_case() {
    for b in [1.0, 2.0, 3.5] {
        let seq = AlphaSeq::SchurClass { a: b - 0.5, b, c: b };
        for j in 0..=20 {
            assert_eq!(seq.get(j).re, -b / (b + j as f64));
        }
    }
}

fn small_complex() -> impl Strategy<Value = Complex> {
    (0.0f64..0.85, 0.0f64..std::f64::consts::TAU).prop_map(|(m, t)| Complex::from_polar(m, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transfer_identity(
        alphas in proptest::collection::vec(small_complex(), 8),
        beta in small_complex(),
        k in 1usize..=3,
        dp in 0usize..=4,
        z in small_complex(),
    ) {
        let params = SchurParams::explicit(alphas);
        let t = perturb_transfer_matrix(&params, k, beta).unwrap();
        let res = transfer_identity_residual(&params, &t, 2 * k + dp, z).unwrap();
        prop_assert!(res <= 1e-11, "residual {res}");
    }

    #[test]
    fn action_matches_substitution(
        alphas in proptest::collection::vec(small_complex(), 6),
        beta in small_complex(),
        k in 1usize..=3,
        z in small_complex(),
    ) {
        let params = SchurParams::explicit(alphas);
        // f is exactly the fraction with these parameters followed by zeros.
        let pairs = schur_pairs(&params, 12).unwrap();
        let f = RationalFn::new(pairs[12].a.clone(), pairs[12].b.clone()).unwrap();
        let t = perturb_transfer_matrix(&params, k, beta).unwrap();
        let got = perturbed_schur_fn(map_of(f.clone()), &t)(z).unwrap();
        let want = schur_approximant(&params.with_replacement(k, beta).unwrap(), 6, z).unwrap();
        prop_assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0));
        let exact = replace_parameter_rational(&f, k, beta).unwrap().eval(z).unwrap();
        prop_assert!((exact - want).norm() <= 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn bilinear_invariant(
        alphas in proptest::collection::vec(small_complex(), 8),
        beta in small_complex(),
        k in 1usize..=2,
    ) {
        let params = SchurParams::explicit(alphas);
        let want = (1.0 - params.alpha(k).norm_sqr()) / (1.0 - beta.norm_sqr());
        for j in 1..=5 {
            let s = gamma_bilinear(&params, k, beta, j).unwrap();
            prop_assert!(s.residual <= 1e-10);
            prop_assert!((s.invariant - want).abs() <= 1e-10 * want.max(1.0));
        }
    }
}
