//! Tangency and equivalence experiments for sub-cones moved by isotropy
//! elements.

use rand::Rng;

use super::samplers::stabilizer_parts;
use super::{act_on_subcone, random_f4_levi, random_h1, random_symplectic_levi, GroupElement};
use crate::cones::{
    annihilator, fiber_degree_split, fiber_dimension, fiber_span, sample_point,
    tangent_space_jacobian, ConeKind, ConeModel, DegreeSplit, Family, Spaces, Stratum,
};
use crate::error::{Error, Result};
use crate::linalg::{random_cvec, CVec, Subspace, COMPARE_TOL, RANK_TOL};
use crate::sff::base_locus_report;

/// True iff the Jacobian tangent spaces of both cones at `β` agree.
pub fn tangency_test(sub1: &ConeModel, sub2: &ConeModel, beta: &CVec) -> Result<bool> {
    let p1 = sub1.locate(beta, 1e-8)?;
    let p2 = sub2.locate(beta, 1e-8)?;
    let t1 = tangent_space_jacobian(sub1, &p1)?;
    let t2 = tangent_space_jacobian(sub2, &p2)?;
    Ok(t1.equal_within(&t2, COMPARE_TOL))
}

/// Common points of two cones of the same family, searched fiber by fiber
/// over the given base values: one random point of the intersection of
/// the two fiber spans, kept if it lies on both cones.
pub fn find_intersections<R: Rng + ?Sized>(
    m1: &ConeModel,
    m2: &ConeModel,
    base_values: &[CVec],
    rng: &mut R,
) -> Result<Vec<CVec>> {
    if m1.family() != m2.family() || m1.ambient() != m2.ambient() {
        return Err(Error::invalid("cones of different families"));
    }
    let mut out = Vec::new();
    for b in base_values {
        let l1 = fiber_span(m1, b)?;
        let l2 = fiber_span(m2, b)?;
        let common = l1.intersect(&l2)?;
        if common.dim() == 0 {
            continue;
        }
        let v = common.sample(rng);
        let av = crate::ambient::AmbientVector::new(m1.ambient().clone(), v.clone())?;
        if m1.membership(&av, 1e-8)? && m2.membership(&av, 1e-8)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// How isotropy elements are drawn in the tangency experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsotropySampler {
    Identity,
    /// Elements fixing the distinguished subspaces.
    Stabilizer,
    /// Stabilizers, partial stabilizers and generic elements in turn.
    Mixed,
}

impl IsotropySampler {
    pub fn sample<R: Rng + ?Sized>(&self, sub: &ConeModel, rng: &mut R) -> Result<GroupElement> {
        match self {
            IsotropySampler::Identity => Ok(GroupElement::Identity),
            IsotropySampler::Stabilizer => super::stabilizer_element(sub, rng),
            IsotropySampler::Mixed => {
                let which = rng.random_range(0..4);
                if which == 0 {
                    return super::stabilizer_element(sub, rng);
                }
                match sub.family() {
                    Family::F4 => {
                        let (stab, _) = stabilizer_parts(sub, rng)?;
                        let levi = if which == 1 { stab } else { random_f4_levi(rng)? };
                        let parts = if which == 2 {
                            vec![levi]
                        } else {
                            vec![levi, random_h1(rng)?]
                        };
                        Ok(GroupElement::product(parts))
                    }
                    Family::Symplectic => {
                        let (stab, _) = stabilizer_parts(sub, rng)?;
                        let Spaces::Symplectic { u, q } = sub.spaces() else {
                            unreachable!("symplectic family")
                        };
                        let k = u.ambient_dim();
                        let m = q.ambient_dim() / 2;
                        let generic = random_symplectic_levi(k, m, rng)?;
                        match (which, stab, generic) {
                            (
                                1,
                                GroupElement::SymplecticLevi { a, .. },
                                GroupElement::SymplecticLevi { s, .. },
                            ) => GroupElement::symplectic_levi(a, s),
                            (
                                2,
                                GroupElement::SymplecticLevi { s, .. },
                                GroupElement::SymplecticLevi { a, .. },
                            ) => GroupElement::symplectic_levi(a, s),
                            (_, _, g) => Ok(g),
                        }
                    }
                    Family::Segre => Err(Error::invalid("no group action on the Segre baseline")),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TangencyReport {
    /// Sampled elements whose cone met the original one.
    pub found: usize,
    pub attempts: usize,
    pub points: usize,
    pub tangent: usize,
    /// Tangent points where the transported subspaces agree and `hB = B`.
    pub tangent_equal: usize,
    /// Tangent points without `hB = B`.
    pub tangent_violations: usize,
    pub nontangent: usize,
    /// Intersections with the two-dimensional section `{e* ∈ R*, f ∈ R′}`.
    pub section_probes: usize,
    pub section_points: usize,
    pub section_tangent: usize,
}

/// Whether sampled points of `hb` lie on `b`.
fn image_inside<R: Rng + ?Sized>(b: &ConeModel, hb: &ConeModel, rng: &mut R) -> Result<bool> {
    for stratum in Stratum::BOTH {
        for _ in 0..3 {
            let p = sample_point(hb, stratum, rng)?;
            if !b.membership(&p.coords, 1e-8)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn base_values<R: Rng + ?Sized>(
    sub: &ConeModel,
    hb: &ConeModel,
    h: &GroupElement,
    rng: &mut R,
) -> Result<Vec<CVec>> {
    let common = sub.base_subspace()?.intersect(&hb.base_subspace()?)?;
    let mut out = Vec::new();
    if common.dim() > 0 {
        out.push(common.sample(rng));
    }
    out.extend(h.special_base_values(sub.family())?);
    Ok(out)
}

/// Sample isotropy elements `h` until `trials` of them give cones `hB`
/// meeting `B` (at most `10 · trials` draws). At each common point found,
/// tangency of `B` and `hB` is tested; tangent points are checked for
/// `hB = B` through the transported subspaces and sampled points.
///
/// For the F4 B3 case the two-dimensional section `{e* ∈ R*, f ∈ R′}`,
/// with `R′` a random line in `F*⊥` and `R* = ann(R′)`, is intersected
/// with `B` in `trials` further probes and tested the same way.
pub fn tangency_implies_equality_experiment<R: Rng + ?Sized>(
    sub: &ConeModel,
    sampler: IsotropySampler,
    trials: usize,
    rng: &mut R,
) -> Result<TangencyReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let mut rep = TangencyReport::default();
    while rep.found < trials && rep.attempts < 10 * trials {
        rep.attempts += 1;
        let h = sampler.sample(sub, rng)?;
        let hb = ConeModel::transformed(sub, h.clone())?;
        let hull = act_on_subcone(&h, sub)?;
        let bases = base_values(sub, &hb, &h, rng)?;
        let pts = find_intersections(sub, &hb, &bases, rng)?;
        if pts.is_empty() {
            continue;
        }
        rep.found += 1;
        let same = hull.same_cone(sub);
        for v in &pts {
            rep.points += 1;
            if tangency_test(sub, &hb, v)? {
                rep.tangent += 1;
                if same && image_inside(sub, &hb, rng)? {
                    rep.tangent_equal += 1;
                } else {
                    rep.tangent_violations += 1;
                }
            } else {
                rep.nontangent += 1;
            }
        }
    }
    if matches!(sub.kind(), ConeKind::F4SchubertB3) {
        let Spaces::F4 { f: f_perp, .. } = sub.spaces() else { unreachable!("F4 family") };
        for _ in 0..trials {
            rep.section_probes += 1;
            let r_prime = Subspace::span(3, &[f_perp.sample(rng)], RANK_TOL)?;
            let r_star = annihilator(&r_prime)?;
            let section = ConeModel::f4_section(r_star, r_prime)?;
            let q = random_cvec(2, rng);
            for v in find_intersections(sub, &section, &[q], rng)? {
                rep.section_points += 1;
                if tangency_test(sub, &section, &v)? {
                    rep.section_tangent += 1;
                }
            }
        }
    }
    Ok(rep)
}

/// Shape data of one stratum, before and after the group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumShape {
    pub stratum: Stratum,
    /// Distinct fiber dimensions seen.
    pub fiber_dims: (Vec<usize>, Vec<usize>),
    /// Distinct base-locus component counts seen.
    pub component_counts: (Vec<usize>, Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviReport {
    /// Sampled image points lying on the ambient cone, out of `samples`.
    pub on_ambient: usize,
    pub samples: usize,
    pub strata: Vec<StratumShape>,
    pub degree_split: (DegreeSplit, DegreeSplit),
}

impl LeviReport {
    pub fn preserved(&self) -> bool {
        self.on_ambient == self.samples
            && self.degree_split.0 == self.degree_split.1
            && self
                .strata
                .iter()
                .all(|s| s.fiber_dims.0 == s.fiber_dims.1 && s.component_counts.0 == s.component_counts.1)
    }
}

fn shape_of<R: Rng + ?Sized>(
    model: &ConeModel,
    stratum: Stratum,
    samples: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>, Vec<crate::cones::ConePoint>)> {
    let mut dims = Vec::new();
    let mut counts = Vec::new();
    let mut pts = Vec::new();
    for _ in 0..samples {
        let p = sample_point(model, stratum, rng)?;
        dims.push(fiber_dimension(model, &p)?);
        counts.push(base_locus_report(model, &p, 20, rng)?.component_count);
        pts.push(p);
    }
    dims.sort_unstable();
    dims.dedup();
    counts.sort_unstable();
    counts.dedup();
    Ok((dims, counts, pts))
}

/// Checks that `hB` for a Levi element `h` is again a section of the
/// ambient cone with the shape of `B`: sampled points lie on the ambient
/// cone, and fiber dimensions, base-locus component counts (per stratum)
/// and the degree split in the base coordinate agree with those of `B`.
pub fn levi_equivalence_forward<R: Rng + ?Sized>(
    sub: &ConeModel,
    h: &GroupElement,
    samples: usize,
    rng: &mut R,
) -> Result<LeviReport> {
    if !h.is_levi() {
        return Err(Error::invalid("levi_equivalence_forward needs a Levi element"));
    }
    let hb = ConeModel::transformed(sub, h.clone())?;
    let ambient = sub.ambient_model();
    let mut on_ambient = 0;
    let mut strata = Vec::new();
    for stratum in Stratum::BOTH {
        let (d0, c0, _) = shape_of(sub, stratum, samples, rng)?;
        let (d1, c1, pts) = shape_of(&hb, stratum, samples, rng)?;
        for p in &pts {
            if ambient.membership(&p.coords, 1e-8)? {
                on_ambient += 1;
            }
        }
        strata.push(StratumShape { stratum, fiber_dims: (d0, d1), component_counts: (c0, c1) });
    }
    let split = (fiber_degree_split(sub, rng)?, fiber_degree_split(&hb, rng)?);
    Ok(LeviReport { on_ambient, samples: 2 * samples, strata, degree_split: split })
}
