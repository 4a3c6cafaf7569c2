use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{c, random_cvec};
use crate::tensor::{outer, sym};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_models() -> Vec<ConeModel> {
    vec![
        ConeModel::segre(2, 3).unwrap(),
        ConeModel::symplectic(2, 4).unwrap(),
        ConeModel::symplectic(3, 6).unwrap(),
        ConeModel::odd_symplectic(3, 5, 1).unwrap(),
        ConeModel::f4(),
        ConeModel::f4_b3_default(),
        ConeModel::f4_c2_default(),
    ]
}

#[test]
fn constructor_bounds() {
    assert!(ConeModel::symplectic(1, 3).is_err());
    assert!(ConeModel::symplectic(3, 3).is_err());
    assert!(ConeModel::odd_symplectic(2, 4, 2).is_err());
    assert!(ConeModel::segre(0, 2).is_err());
    let line = Subspace::span(3, &[unit(3, 0)], RANK_TOL).unwrap();
    // e₁ does not annihilate e₁*
    assert!(matches!(ConeModel::f4_c2(line.clone(), line), Err(Error::ConstraintViolation(_))));
}

#[test]
fn symplectic_parametrization_layout() {
    let model = ConeModel::symplectic(2, 4).unwrap();
    let u = random_cvec(2, &mut rng(1));
    let q = random_cvec(4, &mut rng(2));
    let cc = c(0.7);
    let v = model.parametrize(&Params::Symplectic { u: u.clone(), q: q.clone(), c: cc }).unwrap();
    assert!((v.block("U⊗Q").unwrap() - outer(&u, &q)).norm() < 1e-14);
    assert!((v.block("S²U").unwrap() - sym(&u, &u) * cc).norm() < 1e-14);
}

#[test]
fn f4_parametrization_layout() {
    let model = ConeModel::f4();
    let e = unit(3, 0);
    let f = unit(3, 1) * c(2.0);
    let q = CVec::from_vec(vec![c(1.0), c(-1.0)]);
    let v = model.parametrize(&Params::F4 { e: e.clone(), f: f.clone(), q: q.clone() }).unwrap();
    assert!((v.block("g-1").unwrap() - outer(&e, &q)).norm() < 1e-14);
    assert!((v.block("g-2").unwrap() - outer(&f, &sym(&q, &q))).norm() < 1e-14);
    assert!(v.block("g-3").unwrap().norm() == 0.0);
    assert!(v.block("g-4").unwrap().norm() == 0.0);
}

#[test]
fn f4_rejects_unpaired_parameters() {
    let model = ConeModel::f4();
    let p = Params::F4 { e: unit(3, 0), f: unit(3, 0), q: unit(2, 0) };
    assert!(matches!(model.parametrize(&p), Err(Error::ConstraintViolation(_))));
}

#[test]
fn sub_cone_rejects_outside_parameters() {
    let model = ConeModel::odd_symplectic(2, 4, 0).unwrap();
    // the last basis vector of Q is outside Q_a
    let p = Params::Symplectic { u: unit(2, 0), q: unit(4, 3), c: c(1.0) };
    assert!(matches!(model.parametrize(&p), Err(Error::ConstraintViolation(_))));
}

#[test]
fn sampled_points_have_requested_stratum_and_unit_norm() {
    let mut r = rng(3);
    for model in all_models() {
        for s in Stratum::BOTH {
            let beta = sample_point(&model, s, &mut r).unwrap();
            assert!((beta.vector().norm() - 1.0).abs() < 1e-12, "{}", model.name());
            if model.family() != Family::Segre {
                assert_eq!(beta.stratum, s, "{}", model.name());
            }
            assert!(model.membership(&beta.coords, 1e-8).unwrap(), "{}", model.name());
        }
    }
}

#[test]
fn locate_recovers_the_point() {
    let mut r = rng(4);
    for model in all_models() {
        for s in Stratum::BOTH {
            let beta = sample_point(&model, s, &mut r).unwrap();
            let found = model.locate(beta.vector(), 1e-8).unwrap();
            let v = model.parametrize(&found.params).unwrap();
            assert!((&v.coords - beta.vector()).norm() < 1e-9, "{}", model.name());
            assert_eq!(found.stratum, beta.stratum);
        }
    }
}

#[test]
fn zero_vector_is_not_a_member() {
    for model in all_models() {
        let z = AmbientVector::new(model.ambient().clone(), CVec::zeros(model.ambient().total_dim()))
            .unwrap();
        assert!(!model.membership(&z, 1e-8).unwrap(), "{}", model.name());
    }
}

#[test]
fn balanced_parameters_give_the_same_point() {
    let mut r = rng(5);
    for model in all_models() {
        let beta = sample_point(&model, Stratum::Generic, &mut r).unwrap();
        let p = beta.params.scaled(c(3.0));
        let b = p.balanced();
        let v1 = model.parametrize(&p).unwrap().coords;
        let v2 = model.parametrize(&b).unwrap().coords;
        assert!((&v1 - &v2).norm() < 1e-10 * v1.norm(), "{}", model.name());
    }
}

#[test]
fn scale_point_scales_the_vector() {
    let model = ConeModel::f4();
    let beta = sample_point(&model, Stratum::Generic, &mut rng(6)).unwrap();
    let lam = C64::new(0.3, -1.2);
    let scaled = model.scale_point(&beta, lam).unwrap();
    assert!((scaled.vector() - beta.vector() * lam).norm() < 1e-12);
}

#[test]
fn distinguished_subspaces() {
    let b3 = ConeModel::f4_b3_default();
    let d = b3.distinguished();
    assert_eq!(d.len(), 2);
    assert_eq!((d[0].1.dim(), d[1].1.dim()), (1, 2));
    let odd = ConeModel::odd_symplectic(3, 5, 1).unwrap();
    let d = odd.distinguished();
    assert_eq!((d[0].1.dim(), d[1].1.dim()), (2, 3));
    assert!(ConeModel::f4().distinguished().is_empty());
}

#[test]
fn annihilator_of_a_line() {
    let line = Subspace::span(3, &[unit(3, 0)], RANK_TOL).unwrap();
    let ann = annihilator(&line).unwrap();
    assert_eq!(ann.dim(), 2);
    assert!(ann.contains(&unit(3, 1)) && ann.contains(&unit(3, 2)));
}

#[test]
fn local_coordinates_round_trip() {
    let mut r = rng(7);
    for model in all_models() {
        let beta = sample_point(&model, Stratum::Generic, &mut r).unwrap();
        let z = model.params_to_local(&beta.params).unwrap();
        assert_eq!(z.len(), model.local_dim());
        let back = model.params_from_local(&z);
        for (a, b) in back.blocks().iter().zip(beta.params.blocks()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
