//! Isotropy-group elements acting on the tangent spaces: Levi factors of
//! the symplectic and F4 parabolics and the unipotent piece `h₁` of F4.

mod experiments;
mod samplers;

pub use experiments::{
    find_intersections, levi_equivalence_forward, tangency_implies_equality_experiment,
    tangency_test, IsotropySampler, LeviReport, StratumShape, TangencyReport,
};
pub use samplers::{
    hyperplane_transport, random_f4_levi, random_h1, random_sl, random_symplectic,
    random_symplectic_levi, stabilizer_element,
};

use crate::ambient::{AmbientVector, GradedAmbient};
use crate::cones::{annihilator, ConeKind, ConeModel, Family};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec, Subspace, C64, RANK_TOL};
use crate::tensor::{
    cross, flatten, omega_matrix, s2_dim, s2_map, s2_pairs, sym_from_matrix, sym_to_matrix,
    unflatten,
};

/// A linear automorphism of a graded ambient preserving its cone.
#[derive(Debug, Clone)]
pub enum GroupElement {
    Identity,
    /// `u⊗q + c u² ↦ Au⊗Sq + c (Au)²` with `S` symplectic.
    SymplecticLevi { a: CMat, s: CMat },
    /// `e*⊗q + f⊗q² ↦ t Ae*⊗Bq + t² A⁻ᵀf⊗(Bq)²`, `det A = det B = 1`.
    F4Levi { t: C64, a: CMat, b: CMat },
    /// `h₁ = 1 + dh₁` with `dh₁(f⊗q²) = Σ ⟨q′*,q⟩ f(e′)⊗q` over the terms
    /// `e′⊗q′*` of its parameter in `E⊗Q*`.
    F4UnipotentH1 { terms: Vec<(CVec, CVec)> },
    /// Composite, applied right to left.
    Product(Vec<GroupElement>),
}

fn f4_ranges() -> [std::ops::Range<usize>; 4] {
    [0..6, 6..15, 15..17, 17..20]
}

impl GroupElement {
    /// Levi element of the symplectic parabolic; checks `SᵀΩS = Ω` to 1e-10.
    pub fn symplectic_levi(a: CMat, s: CMat) -> Result<Self> {
        if !a.is_square() || a.clone().try_inverse().is_none() {
            return Err(Error::invalid("A must be an invertible square matrix"));
        }
        let n = s.nrows();
        let omega = omega_matrix(n)?;
        if !s.is_square() || (s.transpose() * &omega * &s - &omega).norm() > 1e-10 * s.norm_squared().max(1.0) {
            return Err(Error::invalid("S does not preserve the symplectic form"));
        }
        Ok(GroupElement::SymplecticLevi { a, s })
    }

    /// Levi element of the F4 parabolic; checks the determinants to 1e-10.
    pub fn f4_levi(t: C64, a: CMat, b: CMat) -> Result<Self> {
        if t.norm() == 0.0 {
            return Err(Error::invalid("t must be nonzero"));
        }
        if a.shape() != (3, 3) || b.shape() != (2, 2) {
            return Err(Error::invalid("F4 Levi needs A: 3x3 and B: 2x2"));
        }
        if (a.determinant() - c(1.0)).norm() > 1e-10 || (b.determinant() - c(1.0)).norm() > 1e-10 {
            return Err(Error::invalid("F4 Levi factors must have determinant 1"));
        }
        Ok(GroupElement::F4Levi { t, a, b })
    }

    /// `h₁` with parameter `Σ e′ᵢ⊗q′*ᵢ`.
    pub fn f4_h1(terms: Vec<(CVec, CVec)>) -> Result<Self> {
        if terms.iter().any(|(e, q)| e.len() != 3 || q.len() != 2) {
            return Err(Error::invalid("h₁ terms live in E⊗Q* = C³⊗C²"));
        }
        Ok(GroupElement::F4UnipotentH1 { terms })
    }

    /// `h_0 h_1 ⋯` applied right to left; nested products are flattened.
    pub fn product(parts: Vec<GroupElement>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                GroupElement::Product(inner) => flat.extend(inner),
                GroupElement::Identity => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => GroupElement::Identity,
            1 => flat.pop().expect("one element"),
            _ => GroupElement::Product(flat),
        }
    }

    pub fn is_levi(&self) -> bool {
        match self {
            GroupElement::Identity
            | GroupElement::SymplecticLevi { .. }
            | GroupElement::F4Levi { .. } => true,
            GroupElement::F4UnipotentH1 { .. } => false,
            GroupElement::Product(parts) => parts.iter().all(|p| p.is_levi()),
        }
    }

    pub fn check_ambient(&self, ambient: &GradedAmbient) -> Result<()> {
        match self {
            GroupElement::Identity => Ok(()),
            GroupElement::SymplecticLevi { a, s } => {
                let k = a.nrows();
                let expect = GradedAmbient::symplectic(k, s.nrows() / 2)?;
                if *ambient != expect {
                    return Err(Error::invalid("symplectic Levi element on a foreign ambient"));
                }
                Ok(())
            }
            GroupElement::F4Levi { .. } | GroupElement::F4UnipotentH1 { .. } => {
                if *ambient != GradedAmbient::f4() {
                    return Err(Error::invalid("F4 element on a foreign ambient"));
                }
                Ok(())
            }
            GroupElement::Product(parts) => parts.iter().try_for_each(|p| p.check_ambient(ambient)),
        }
    }

    /// The action on flat coordinates.
    pub fn apply(&self, ambient: &GradedAmbient, v: &CVec) -> Result<CVec> {
        self.check_ambient(ambient)?;
        if v.len() != ambient.total_dim() {
            return Err(Error::invalid("vector from a different ambient"));
        }
        Ok(self.apply_unchecked(v))
    }

    fn apply_unchecked(&self, v: &CVec) -> CVec {
        match self {
            GroupElement::Identity => v.clone(),
            GroupElement::SymplecticLevi { a, s } => {
                let k = a.nrows();
                let n = s.nrows();
                let m = unflatten(&v.rows(0, k * n).into_owned(), k, n);
                let sq = sym_to_matrix(&v.rows(k * n, s2_dim(k)).into_owned(), k);
                let m2 = a * m * s.transpose();
                let sq2 = a * sq * a.transpose();
                let mut out = flatten(&m2);
                out = CVec::from_iterator(v.len(), out.iter().copied().chain(sym_from_matrix(&sq2).iter().copied()));
                out
            }
            GroupElement::F4Levi { t, a, b } => {
                let [r1, r2, r3, r4] = f4_ranges();
                let a_inv_t = a.clone().try_inverse().expect("det 1").transpose();
                let g1 = unflatten(&v.rows(r1.start, r1.len()).into_owned(), 3, 2);
                let g2 = unflatten(&v.rows(r2.start, r2.len()).into_owned(), 3, 3);
                let g1 = a * g1 * b.transpose() * *t;
                let g2 = a_inv_t * g2 * s2_map(b).transpose() * (t * t);
                let g3 = b * v.rows(r3.start, r3.len()) * (t * t * t);
                let g4 = a * v.rows(r4.start, r4.len()) * (t * t * t * t);
                let parts = [flatten(&g1), flatten(&g2), g3, g4];
                CVec::from_iterator(20, parts.iter().flat_map(|p| p.iter().copied()))
            }
            GroupElement::F4UnipotentH1 { terms } => {
                let mut out = v.clone();
                let g2 = unflatten(&v.rows(6, 9).into_owned(), 3, 3);
                let pairs = s2_pairs(2);
                let mut add = CMat::zeros(3, 2);
                for (e_prime, q_star) in terms {
                    for i in 0..3 {
                        let fe = cross(&crate::linalg::unit(3, i), e_prime);
                        for (s, &(p, r)) in pairs.iter().enumerate() {
                            let coef = g2[(i, s)];
                            if coef == c(0.0) {
                                continue;
                            }
                            // contraction of the S²Q basis vector with q′*
                            let mut iota = CVec::zeros(2);
                            if p == r {
                                iota[p] += q_star[p];
                            } else {
                                iota[r] += q_star[p];
                                iota[p] += q_star[r];
                            }
                            add += &fe * iota.transpose() * coef;
                        }
                    }
                }
                let g1 = unflatten(&v.rows(0, 6).into_owned(), 3, 2) + add;
                out.rows_mut(0, 6).copy_from(&flatten(&g1));
                out
            }
            GroupElement::Product(parts) => {
                parts.iter().rev().fold(v.clone(), |acc, p| p.apply_unchecked(&acc))
            }
        }
    }

    pub fn act(&self, v: &AmbientVector) -> Result<AmbientVector> {
        AmbientVector::new(v.ambient.clone(), self.apply(&v.ambient, &v.coords)?)
    }

    /// Matrix of the action on flat coordinates.
    pub fn matrix(&self, ambient: &GradedAmbient) -> Result<CMat> {
        self.check_ambient(ambient)?;
        let n = ambient.total_dim();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            m.set_column(j, &self.apply_unchecked(&crate::linalg::unit(n, j)));
        }
        Ok(m)
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        let inv = |m: &CMat| {
            m.clone().try_inverse().ok_or_else(|| Error::Internal("singular group element".into()))
        };
        Ok(match self {
            GroupElement::Identity => GroupElement::Identity,
            GroupElement::SymplecticLevi { a, s } => {
                GroupElement::SymplecticLevi { a: inv(a)?, s: inv(s)? }
            }
            GroupElement::F4Levi { t, a, b } => {
                GroupElement::F4Levi { t: c(1.0) / t, a: inv(a)?, b: inv(b)? }
            }
            // dh₁ squares to zero
            GroupElement::F4UnipotentH1 { terms } => GroupElement::F4UnipotentH1 {
                terms: terms.iter().map(|(e, q)| (-e, q.clone())).collect(),
            },
            GroupElement::Product(parts) => GroupElement::Product(
                parts.iter().rev().map(|p| p.inverse()).collect::<Result<_>>()?,
            ),
        })
    }

    /// Induced map on the base coordinate of the cone fibration (`u` for
    /// the symplectic family, `q` for F4) of dimension `n`.
    pub fn base_map(&self, family: Family, n: usize) -> Result<CMat> {
        match (self, family) {
            (GroupElement::Identity, _) => Ok(CMat::identity(n, n)),
            (GroupElement::SymplecticLevi { a, .. }, Family::Symplectic) if a.nrows() == n => {
                Ok(a.clone())
            }
            (GroupElement::F4Levi { b, .. }, Family::F4) if n == 2 => Ok(b.clone()),
            (GroupElement::F4UnipotentH1 { .. }, Family::F4) if n == 2 => Ok(CMat::identity(2, 2)),
            (GroupElement::Product(parts), _) => {
                let mut m = CMat::identity(n, n);
                for p in parts {
                    m *= p.base_map(family, n)?;
                }
                Ok(m)
            }
            _ => Err(Error::invalid("group element does not act on this family")),
        }
    }

    /// Base values (ambient side, `q ∈ Q`) over which some `h₁` factor acts
    /// trivially on the fiber: the images of `ker q′*`.
    pub fn special_base_values(&self, family: Family) -> Result<Vec<CVec>> {
        if family != Family::F4 {
            return Ok(vec![]);
        }
        let parts: Vec<&GroupElement> = match self {
            GroupElement::Product(parts) => parts.iter().collect(),
            other => vec![other],
        };
        let mut out = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            if let GroupElement::F4UnipotentH1 { terms } = p {
                let mut left = CMat::identity(2, 2);
                for q in &parts[..i] {
                    left *= q.base_map(family, 2)?;
                }
                let rows = CMat::from_fn(terms.len(), 2, |r, j| terms[r].1[j]);
                let k = crate::linalg::kernel(&rows, RANK_TOL)?;
                for j in 0..k.dim() {
                    out.push(&left * k.vector(j));
                }
            }
        }
        Ok(out)
    }

    /// Transport of the parameter subspaces `(first, second)` of a section
    /// cone: `(U′, Q′)` for the symplectic family, `(R*, R′)` for F4. An
    /// `h₁` factor replaces `R*` by `R* + h₁(R′)`, where `h₁(R′)` is spanned
    /// by the contractions `f(e′)`.
    pub fn transport(&self, family: Family, first: &Subspace, second: &Subspace) -> Result<(Subspace, Subspace)> {
        match (self, family) {
            (GroupElement::Identity, _) => Ok((first.clone(), second.clone())),
            (GroupElement::SymplecticLevi { a, s }, Family::Symplectic) => {
                Ok((first.image(a)?, second.image(s)?))
            }
            (GroupElement::F4Levi { a, .. }, Family::F4) => {
                let a_inv_t = a.clone().try_inverse().expect("det 1").transpose();
                Ok((first.image(a)?, second.image(&a_inv_t)?))
            }
            (GroupElement::F4UnipotentH1 { terms }, Family::F4) => {
                let mut gens: Vec<CVec> = (0..first.dim()).map(|j| first.vector(j)).collect();
                for (e_prime, _) in terms {
                    for j in 0..second.dim() {
                        gens.push(cross(&second.vector(j), e_prime));
                    }
                }
                Ok((Subspace::span(3, &gens, RANK_TOL)?, second.clone()))
            }
            (GroupElement::Product(parts), _) => {
                let mut cur = (first.clone(), second.clone());
                for p in parts.iter().rev() {
                    cur = p.transport(family, &cur.0, &cur.1)?;
                }
                Ok(cur)
            }
            _ => Err(Error::invalid("group element does not act on this family")),
        }
    }
}

/// `h` applied to an ambient vector.
pub fn act(h: &GroupElement, v: &AmbientVector) -> Result<AmbientVector> {
    h.act(v)
}

/// The sub-cone with distinguished subspaces transported by `h`: `U_a ↦
/// A U_a`, `Q_a ↦ S Q_a`, resp. `F* ↦ h₀F* + h₀h₁(F*⊥)`, `F*⊥ ↦ h₀F*⊥`.
/// Returns the original model when the transported subspaces agree with
/// the old ones, and a section model otherwise (a Schubert model when the
/// new subspaces keep the B3 or C2 shape).
///
/// For Levi elements the result is exactly `hB`. With an `h₁` factor the
/// image `hB` is no longer a section cone; the returned model is the
/// section cone by the transported subspaces, which contains it.
pub fn act_on_subcone(h: &GroupElement, sub: &ConeModel) -> Result<ConeModel> {
    h.check_ambient(sub.ambient())?;
    let d = sub.distinguished();
    if matches!(sub.kind(), ConeKind::Transformed { .. }) || d.is_empty() {
        return Err(Error::invalid(format!("{} is not a sub-cone with distinguished subspaces", sub.name())));
    }
    let (first, second) = match sub.spaces() {
        crate::cones::Spaces::Symplectic { u, q } => (u.clone(), q.clone()),
        crate::cones::Spaces::F4 { e, f } => (e.clone(), f.clone()),
        crate::cones::Spaces::Segre { .. } => {
            return Err(Error::invalid("no group action on the Segre baseline"))
        }
    };
    let (n1, n2) = h.transport(sub.family(), &first, &second)?;
    if n1.equal_within(&first, 1e-8) && n2.equal_within(&second, 1e-8) {
        return Ok(sub.clone());
    }
    match sub.family() {
        Family::Symplectic => {
            let k = first.ambient_dim();
            let l = k + second.ambient_dim() / 2;
            ConeModel::symplectic_section(k, l, n1, n2)
        }
        Family::F4 => {
            if n1.dim() == 1 && n2.dim() == 2 && annihilator(&n1)?.equal_within(&n2, 1e-8) {
                ConeModel::f4_b3(n1)
            } else if n1.dim() == 1 && n2.dim() == 1 && annihilator(&n1)?.contains_subspace(&n2, 1e-8) {
                ConeModel::f4_c2(n1, n2)
            } else {
                ConeModel::f4_section(n1, n2)
            }
        }
        Family::Segre => unreachable!("handled above"),
    }
}
