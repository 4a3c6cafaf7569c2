mod common;

use common::{c, rel_err, rng, shift};
use proptest::prelude::*;
use vmrt_core::cones::{annihilator, sample_point, tangent_space_closed_form, tangent_space_jacobian};
use vmrt_core::linalg::{random_c64, random_cvec, unit};
use vmrt_core::sff::{
    base_locus_report, check_pair_nondegenerate, gauss_map, sff_closed_form, sff_kernel, sff_oracle,
};
use vmrt_core::tensor::{outer, pairing, sym_square};
fn dot(a: &CVec, b: &CVec) -> vmrt_core::C64 {
    pairing(a, b).unwrap()
}

use vmrt_core::{CVec, ConeModel, ConePoint, Params, Stratum, Subspace, RANK_TOL};

fn cat(parts: &[CVec]) -> CVec {
    CVec::from_iterator(parts.iter().map(|p| p.len()).sum(), parts.iter().flat_map(|p| p.iter().copied()))
}

fn sym(u: &CVec, v: &CVec) -> CVec {
    sym_square(u, v).unwrap()
}

/// `Dφ·a` for the Segre and symplectic parametrizations.
fn velocity(p: &Params, a: &Params) -> CVec {
    match (p, a) {
        (Params::Segre { u, w }, Params::Segre { u: du, w: dw }) => outer(du, w) + outer(u, dw),
        (Params::Symplectic { u, q, c: cc }, Params::Symplectic { u: du, q: dq, c: dc }) => cat(&[
            outer(du, q) + outer(u, dq),
            sym(u, u) * *dc + sym(u, du) * (cc * 2.0),
        ]),
        _ => unreachable!(),
    }
}

fn random_velocity(p: &Params, r: &mut impl rand::Rng) -> Params {
    let blocks = p.blocks().iter().map(|b| random_cvec(b.len(), r)).collect();
    Params::from_blocks(p.family(), blocks)
}

/// `∂s∂t φ(p + s a + t b)` by a central mixed difference, projected off the
/// Jacobian tangent space. The parametrizations are polynomial of degree at
/// most three, so the difference is exact up to rounding.
fn hessian_oracle(model: &ConeModel, beta: &ConePoint, a: &Params, b: &Params) -> CVec {
    let h = 1e-3;
    let phi = |s: f64, t: f64| {
        model.parametrize(&shift(&shift(&beta.params, a, s), b, t)).unwrap().coords
    };
    let mixed = (phi(h, h) - phi(h, -h) - phi(-h, h) + phi(-h, -h)) / c(4.0 * h * h);
    tangent_space_jacobian(model, beta).unwrap().quotient_project(&mixed)
}

#[test]
fn closed_form_matches_mixed_differences() {
    let mut r = rng(20);
    let models = [
        ConeModel::segre(2, 3).unwrap(),
        ConeModel::symplectic(2, 4).unwrap(),
        ConeModel::symplectic(2, 5).unwrap(),
        ConeModel::symplectic(3, 5).unwrap(),
        ConeModel::symplectic(3, 6).unwrap(),
    ];
    for model in &models {
        for s in Stratum::BOTH {
            for _ in 0..20 {
                let beta = sample_point(model, s, &mut r).unwrap();
                let sigma = sff_closed_form(model, &beta).unwrap();
                let a = random_velocity(&beta.params, &mut r);
                let b = random_velocity(&beta.params, &mut r);
                let got = sigma.eval(&velocity(&beta.params, &a), &velocity(&beta.params, &b)).unwrap();
                let want = hessian_oracle(model, &beta, &a, &b);
                assert!(rel_err(&got, &want) < 1e-6, "{} {:?}: {:e}", model.name(), s, rel_err(&got, &want));
            }
        }
    }
}

#[test]
fn closed_form_matches_the_oracle_on_f4() {
    let mut r = rng(21);
    let model = ConeModel::f4();
    for s in Stratum::BOTH {
        for _ in 0..30 {
            let beta = sample_point(&model, s, &mut r).unwrap();
            let sigma = sff_closed_form(&model, &beta).unwrap();
            let xi = sigma.tangent.sample(&mut r);
            let zeta = sigma.tangent.sample(&mut r);
            let got = sigma.eval(&xi, &zeta).unwrap();
            let want = sff_oracle(&model, &beta, &xi, &zeta).unwrap();
            assert!(rel_err(&got, &want) < 1e-6, "{:?}: {:e}", s, rel_err(&got, &want));
        }
    }
}

#[test]
fn closed_form_matches_the_oracle_on_sub_cones() {
    let mut r = rng(22);
    for model in [
        ConeModel::odd_symplectic(3, 5, 1).unwrap(),
        ConeModel::f4_b3_default(),
        ConeModel::f4_c2_default(),
    ] {
        for s in Stratum::BOTH {
            for _ in 0..10 {
                let beta = sample_point(&model, s, &mut r).unwrap();
                let sigma = sff_closed_form(&model, &beta).unwrap();
                let tb = tangent_space_closed_form(&model, &beta).unwrap();
                let (xi, zeta) = (tb.sample(&mut r), sigma.tangent.sample(&mut r));
                let got = sigma.eval(&xi, &zeta).unwrap();
                let want = sff_oracle(&model, &beta, &xi, &zeta).unwrap();
                assert!(rel_err(&got, &want) < 1e-6, "{}", model.name());
            }
        }
    }
}

#[test]
fn position_vector_is_in_the_kernel() {
    let mut r = rng(23);
    for model in [ConeModel::symplectic(2, 4).unwrap(), ConeModel::f4()] {
        for s in Stratum::BOTH {
            let beta = sample_point(&model, s, &mut r).unwrap();
            let sigma = sff_closed_form(&model, &beta).unwrap();
            let zeta = sigma.tangent.sample(&mut r);
            assert!(sff_oracle(&model, &beta, beta.vector(), &zeta).unwrap().norm() < 1e-6);
            assert!(sigma.eval(beta.vector(), &zeta).unwrap().norm() < 1e-10);
        }
    }
}

fn symplectic_point(model: &ConeModel, u: CVec, q: CVec, cc: f64) -> ConePoint {
    model.point(Params::Symplectic { u, q, c: c(cc) }).unwrap()
}

#[test]
fn symplectic_values_at_a_linear_point() {
    let mut r = rng(24);
    let model = ConeModel::symplectic(3, 5).unwrap();
    let (u, q) = (random_cvec(3, &mut r), random_cvec(4, &mut r));
    let beta = symplectic_point(&model, u.clone(), q.clone(), 0.0);
    let sigma = sff_closed_form(&model, &beta).unwrap();
    let (u2, q2) = (random_cvec(3, &mut r), random_cvec(4, &mut r));
    let z6 = CVec::zeros(6);

    let xi = cat(&[outer(&u2, &q), z6.clone()]);
    let zeta = cat(&[outer(&u, &q2), z6.clone()]);
    let want = sigma.tangent.quotient_project(&cat(&[outer(&u2, &q2), z6.clone()]));
    assert!(rel_err(&sigma.eval(&xi, &zeta).unwrap(), &want) < 1e-8);
    assert!(rel_err(&sff_oracle(&model, &beta, &xi, &zeta).unwrap(), &want) < 1e-6);

    let square = cat(&[CVec::zeros(12), sym(&u, &u)]);
    let want = sigma.tangent.quotient_project(&cat(&[CVec::zeros(12), sym(&u, &u2) * c(2.0)]));
    assert!(want.norm() > 1e-3);
    assert!(rel_err(&sigma.eval(&xi, &square).unwrap(), &want) < 1e-8);
    assert!(rel_err(&sff_oracle(&model, &beta, &xi, &square).unwrap(), &want) < 1e-6);
}

#[test]
fn symplectic_fiber_directions_are_null_at_a_generic_point() {
    let mut r = rng(25);
    let model = ConeModel::symplectic(2, 4).unwrap();
    let (u, q) = (random_cvec(2, &mut r), random_cvec(4, &mut r));
    let beta = symplectic_point(&model, u.clone(), q, 0.8);
    let sigma = sff_closed_form(&model, &beta).unwrap();
    let xi = cat(&[outer(&u, &random_cvec(4, &mut r)), CVec::zeros(3)]);
    let zeta = cat(&[outer(&u, &random_cvec(4, &mut r)), CVec::zeros(3)]);
    assert!(sigma.eval(&xi, &zeta).unwrap().norm() < 1e-10);
    assert!(sff_oracle(&model, &beta, &xi, &zeta).unwrap().norm() < 1e-6);
}

fn f4_vec(g1: CVec, g2: CVec) -> CVec {
    cat(&[g1, g2, CVec::zeros(5)])
}

#[test]
fn f4_value_at_a_linear_point() {
    let mut r = rng(26);
    let model = ConeModel::f4();
    let e = random_cvec(3, &mut r);
    let q = random_cvec(2, &mut r);
    let beta = model.point(Params::F4 { e: e.clone(), f: CVec::zeros(3), q: q.clone() }).unwrap();
    let sigma = sff_closed_form(&model, &beta).unwrap();
    let ann = annihilator(&Subspace::span(3, std::slice::from_ref(&e), RANK_TOL).unwrap()).unwrap();
    let q2 = sym(&q, &q);
    for _ in 0..5 {
        let e2 = random_cvec(3, &mut r);
        let f2 = ann.sample(&mut r);
        let xi = f4_vec(outer(&e2, &q), CVec::zeros(9));
        let zeta = f4_vec(CVec::zeros(6), outer(&f2, &q2));
        // e read as a vector of E with ⟨e, e⟩ = 1
        let scaled = &e * (-dot(&e2, &f2) / dot(&e, &e));
        let want = sigma.tangent.quotient_project(&f4_vec(CVec::zeros(6), outer(&scaled, &q2)));
        assert!(want.norm() > 1e-4);
        assert!(rel_err(&sigma.eval(&xi, &zeta).unwrap(), &want) < 1e-8);
        assert!(rel_err(&sff_oracle(&model, &beta, &xi, &zeta).unwrap(), &want) < 1e-6);
    }
}

#[test]
fn f4_fiber_directions_are_null_at_a_generic_point() {
    let mut r = rng(27);
    let model = ConeModel::f4();
    for _ in 0..5 {
        let beta = sample_point(&model, Stratum::Generic, &mut r).unwrap();
        let Params::F4 { e, q, .. } = &beta.params else { unreachable!() };
        let ann = annihilator(&Subspace::span(3, std::slice::from_ref(e), RANK_TOL).unwrap()).unwrap();
        let q2 = sym(q, q);
        let xi = f4_vec(CVec::zeros(6), outer(&ann.sample(&mut r), &q2));
        let zeta = f4_vec(CVec::zeros(6), outer(&ann.sample(&mut r), &q2));
        let sigma = sff_closed_form(&model, &beta).unwrap();
        assert!(sigma.eval(&xi, &zeta).unwrap().norm() < 1e-10);
        assert!(sff_oracle(&model, &beta, &xi, &zeta).unwrap().norm() < 1e-6);
    }
}

#[test]
fn kernels_along_the_two_fibration_directions() {
    let mut r = rng(28);
    let model = ConeModel::symplectic(3, 5).unwrap();
    // U_a = first two covectors, Q_a = first three basis vectors
    let u = &unit(3, 0) + &unit(3, 1) * random_c64(&mut r);
    let q = &unit(4, 0) + &unit(4, 2) * random_c64(&mut r);
    let beta = symplectic_point(&model, u.clone(), q.clone(), 0.0);
    let sigma = sff_closed_form(&model, &beta).unwrap();
    let z6 = CVec::zeros(6);
    let lift = |g1: CVec, g2: CVec| cat(&[g1, g2]);

    let e1 = Subspace::span(18, &[0, 1].map(|j| lift(outer(&unit(3, j), &q), z6.clone())), RANK_TOL).unwrap();
    let want1 = Subspace::span(18, &[0, 1, 2].map(|j| lift(outer(&unit(3, j), &q), z6.clone())), RANK_TOL).unwrap();
    assert!(sff_kernel(&sigma, &e1).unwrap().equal_within(&want1, 1e-6));

    let e2 = Subspace::span(18, &[0, 1, 2].map(|j| lift(outer(&u, &unit(4, j)), z6.clone())), RANK_TOL).unwrap();
    let mut gens: Vec<CVec> = (0..4).map(|j| lift(outer(&u, &unit(4, j)), z6.clone())).collect();
    gens.push(lift(CVec::zeros(12), sym(&u, &u)));
    let want2 = Subspace::span(18, &gens, RANK_TOL).unwrap();
    assert!(sff_kernel(&sigma, &e2).unwrap().equal_within(&want2, 1e-6));
}

#[test]
fn pairs_are_nondegenerate() {
    let mut r = rng(29);
    let pairs = [
        (ConeModel::symplectic(2, 4).unwrap(), ConeModel::odd_symplectic(2, 4, 0).unwrap()),
        (ConeModel::symplectic(3, 5).unwrap(), ConeModel::odd_symplectic(3, 5, 1).unwrap()),
        (ConeModel::f4(), ConeModel::f4_b3_default()),
        (ConeModel::f4(), ConeModel::f4_c2_default()),
    ];
    for (amb, sub) in &pairs {
        for s in Stratum::BOTH {
            for _ in 0..10 {
                let beta = sample_point(sub, s, &mut r).unwrap();
                let rep = check_pair_nondegenerate(amb, sub, &beta).unwrap();
                assert!(rep.nondegenerate, "{} {:?} {:?}", sub.name(), s, rep);
            }
        }
    }
}

#[test]
fn segre_line_is_degenerate() {
    let mut r = rng(30);
    let amb = ConeModel::segre(3, 3).unwrap();
    let line = ConeModel::segre_line(3, 3).unwrap();
    for _ in 0..20 {
        let beta = sample_point(&line, Stratum::Generic, &mut r).unwrap();
        let rep = check_pair_nondegenerate(&amb, &line, &beta).unwrap();
        assert!(rep.kernel_dim > 1 && !rep.nondegenerate);
    }
    let beta = sample_point(&line, Stratum::Generic, &mut r).unwrap();
    assert!(check_pair_nondegenerate(&line, &line, &beta).is_err());
}

#[test]
fn base_locus_component_counts() {
    let mut r = rng(31);
    let cases = [
        (ConeModel::odd_symplectic(2, 4, 0).unwrap(), Stratum::DegenerateLinear, 2),
        (ConeModel::odd_symplectic(2, 4, 0).unwrap(), Stratum::Generic, 1),
        (ConeModel::f4_b3_default(), Stratum::DegenerateLinear, 3),
    ];
    for (model, s, count) in &cases {
        for _ in 0..10 {
            let beta = sample_point(model, *s, &mut r).unwrap();
            let rep = base_locus_report(model, &beta, 20, &mut r).unwrap();
            assert_eq!(rep.component_count, *count, "{} {:?} {:?}", model.name(), s, rep);
            assert_eq!(rep.off_nonnull, rep.off_probes);
            assert_eq!(rep.off_probes, 20);
        }
    }
}

#[test]
fn gauss_map_is_scale_invariant_and_constant_in_dimension() {
    let mut r = rng(32);
    let model = ConeModel::f4();
    let beta = sample_point(&model, Stratum::Generic, &mut r).unwrap();
    let g0 = gauss_map(&model, &beta).unwrap();
    for _ in 0..20 {
        let lam = random_c64(&mut r) + c(0.05);
        let g = gauss_map(&model, &model.scale_point(&beta, lam).unwrap()).unwrap();
        assert!(g.equal_within(&g0, 1e-6));
    }
    let dir = Params::from_blocks(
        vmrt_core::Family::F4,
        vec![random_cvec(3, &mut r), CVec::zeros(3), random_cvec(2, &mut r)],
    );
    for i in 1..=10 {
        // moving e* and q keeps ⟨e*, f⟩ = 0 only if f stays annihilated; move f to match
        let p = shift(&beta.params, &dir, 0.05 * i as f64);
        let Params::F4 { e, f, q } = p else { unreachable!() };
        let f = &f - &e.conjugate() * (dot(&e, &f) / c(e.norm_squared()));
        let pt = model.point(Params::F4 { e, f, q }).unwrap();
        assert_eq!(pt.stratum, Stratum::Generic);
        assert_eq!(gauss_map(&model, &pt).unwrap().dim(), g0.dim());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closed_form_is_symmetric_and_normal(seed in any::<u64>(), idx in 0usize..4, generic in any::<bool>()) {
        let model = [
            ConeModel::symplectic(2, 4).unwrap(),
            ConeModel::symplectic(3, 6).unwrap(),
            ConeModel::f4(),
            ConeModel::f4_b3_default(),
        ][idx].clone();
        let mut r = rng(seed);
        let s = if generic { Stratum::Generic } else { Stratum::DegenerateLinear };
        let beta = sample_point(&model, s, &mut r).unwrap();
        let sigma = sff_closed_form(&model, &beta).unwrap();
        prop_assert!(sigma.symmetry_error() < 1e-10);
        prop_assert!(sigma.tangent_leak() < 1e-10);
        let (x, y) = (sigma.tangent.sample(&mut r), sigma.tangent.sample(&mut r));
        let lam = random_c64(&mut r);
        let lhs = sigma.eval(&(&x * lam + &y), &y).unwrap();
        let rhs = sigma.eval(&x, &y).unwrap() * lam + sigma.eval(&y, &y).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lam.norm()));
    }

    #[test]
    fn oracle_is_bilinear_in_the_second_slot(seed in any::<u64>()) {
        let model = ConeModel::f4();
        let mut r = rng(seed);
        let beta = sample_point(&model, Stratum::Generic, &mut r).unwrap();
        let t = tangent_space_closed_form(&model, &beta).unwrap();
        let (x, y, z) = (t.sample(&mut r), t.sample(&mut r), t.sample(&mut r));
        let lhs = sff_oracle(&model, &beta, &x, &(&y + &z)).unwrap();
        let rhs = sff_oracle(&model, &beta, &x, &y).unwrap() + sff_oracle(&model, &beta, &x, &z).unwrap();
        prop_assert!(rel_err(&lhs, &rhs) < 1e-6);
    }
}
