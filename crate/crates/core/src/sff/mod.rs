//! Second fundamental forms of the cones: closed form, finite-difference
//! oracle, kernels, pair nondegeneracy and base loci.
//!
//! Values live in the orthogonal complement of the full cone's tangent
//! space `T_β Ã`, which represents the quotient `V / T_β Ã`.

mod oracle;

pub use oracle::sff_oracle;

use rand::Rng;

use crate::cones::{
    base_locus_candidates, d_phi, param_tangents, tangent_space_closed_form,
    tangent_space_jacobian, ConeModel, ConePoint, Params,
};
use crate::error::{Error, Result};
use crate::linalg::{c, hstack, kernel, lstsq, CMat, CVec, Subspace, RANK_TOL};
use crate::tensor::{dot, outer, sym};

/// The Gauss map `β ↦ T_β` (Jacobian tangent space).
pub fn gauss_map(model: &ConeModel, beta: &ConePoint) -> Result<Subspace> {
    tangent_space_jacobian(model, beta)
}

/// `σ_β` of a full cone on an orthonormal basis `t_i` of `T_β Ã`.
#[derive(Debug, Clone)]
pub struct SffRep {
    /// The point, as a point of the full cone.
    pub base: ConePoint,
    pub tangent: Subspace,
    /// Name of the cone whose tangent space defines the quotient.
    pub quotient_of: String,
    values: Vec<CVec>,
}

impl SffRep {
    pub fn dim(&self) -> usize {
        self.tangent.dim()
    }

    /// `σ(t_i, t_j)`.
    pub fn value(&self, i: usize, j: usize) -> &CVec {
        &self.values[i * self.dim() + j]
    }

    fn check_tangent(&self, v: &CVec) -> Result<CVec> {
        if !self.tangent.contains_within(v, 1e-8) {
            return Err(Error::invalid(format!(
                "vector is not tangent (residual {:.2e})",
                self.tangent.residual(v)
            )));
        }
        Ok(self.tangent.coordinates(v))
    }

    /// `σ(ξ, ζ)` by bilinear extension.
    pub fn eval(&self, xi: &CVec, zeta: &CVec) -> Result<CVec> {
        let a = self.check_tangent(xi)?;
        let b = self.check_tangent(zeta)?;
        Ok(self.eval_coords(&a, &b))
    }

    fn eval_coords(&self, a: &CVec, b: &CVec) -> CVec {
        let d = self.dim();
        let mut out = CVec::zeros(self.tangent.ambient_dim());
        for i in 0..d {
            if a[i] == c(0.0) {
                continue;
            }
            for j in 0..d {
                out += self.value(i, j) * (a[i] * b[j]);
            }
        }
        out
    }

    /// Largest `|σ(t_i,t_j) - σ(t_j,t_i)|`.
    pub fn symmetry_error(&self) -> f64 {
        let d = self.dim();
        let mut err: f64 = 0.0;
        for i in 0..d {
            for j in 0..i {
                err = err.max((self.value(i, j) - self.value(j, i)).norm());
            }
        }
        err
    }

    /// Largest component of a value inside `T_β Ã`.
    pub fn tangent_leak(&self) -> f64 {
        self.values.iter().map(|v| self.tangent.project(v).norm()).fold(0.0, f64::max)
    }
}

fn lin_comb(ps: &[Params], x: &CVec) -> Params {
    let mut blocks: Vec<CVec> = ps[0].blocks().iter().map(|b| b * c(0.0)).collect();
    for (p, &xj) in ps.iter().zip(x.iter()) {
        for (acc, b) in blocks.iter_mut().zip(p.blocks()) {
            *acc += b * xj;
        }
    }
    Params::from_blocks(ps[0].family(), blocks)
}

fn concat(parts: &[CVec]) -> CVec {
    CVec::from_iterator(
        parts.iter().map(|p| p.len()).sum(),
        parts.iter().flat_map(|p| p.iter().copied()),
    )
}

/// Second-order term of the parametrization along parameter velocities
/// `a`, `b`, including the correction that keeps F4 curves on
/// `⟨e*, f⟩ = 0`. Modulo the tangent space this is `σ(Dφ·a, Dφ·b)`.
pub(crate) fn sigma_hat(p: &Params, a: &Params, b: &Params) -> CVec {
    match (p, a, b) {
        (Params::Segre { .. }, Params::Segre { u: au, w: aw }, Params::Segre { u: bu, w: bw }) => {
            outer(au, bw) + outer(bu, aw)
        }
        (
            Params::Symplectic { u, c: cc, .. },
            Params::Symplectic { u: au, q: aq, c: ac },
            Params::Symplectic { u: bu, q: bq, c: bc },
        ) => concat(&[
            outer(au, bq) + outer(bu, aq),
            sym(au, bu) * (cc * c(2.0)) + sym(u, bu) * (ac * c(2.0)) + sym(u, au) * (bc * c(2.0)),
        ]),
        (
            Params::F4 { e, f, q },
            Params::F4 { e: ae, f: af, q: aq },
            Params::F4 { e: be, f: bf, q: bq },
        ) => {
            let second = concat(&[
                outer(ae, bq) + outer(be, aq),
                outer(af, &(sym(q, bq) * c(2.0)))
                    + outer(bf, &(sym(q, aq) * c(2.0)))
                    + outer(f, &(sym(aq, bq) * c(2.0))),
                CVec::zeros(5),
            ]);
            // second derivative of ⟨e*, f⟩ along the curve, compensated by
            // a second-order velocity w with ⟨w_e, f⟩ + ⟨e, w_f⟩ = -D²g
            let d2g = dot(ae, bf) + dot(be, af);
            if d2g == c(0.0) {
                return second;
            }
            let zero3 = CVec::zeros(3);
            let w = if e.norm() >= f.norm() && e.norm() > 0.0 {
                Params::F4 { e: zero3, f: e.conjugate() * (-d2g / c(e.norm_squared())), q: q * c(0.0) }
            } else {
                Params::F4 { e: f.conjugate() * (-d2g / c(f.norm_squared())), f: zero3, q: q * c(0.0) }
            };
            second + d_phi(p, &w)
        }
        _ => panic!("velocity family does not match the point"),
    }
}

/// `σ_β` of the full cone containing `model`, assembled on an orthonormal
/// basis of `T_β Ã` from parameter preimages of the basis vectors.
pub fn sff_closed_form(model: &ConeModel, beta: &ConePoint) -> Result<SffRep> {
    model.check_point(beta)?;
    let amb = model.ambient_model();
    let p = model.ambient_params(beta)?;
    let point = amb.point(p.clone())?;
    let tangent = tangent_space_closed_form(&amb, &point)?;
    let gens = param_tangents(amb.spaces(), &p)?;
    let n = amb.ambient().total_dim();
    let g = hstack(&gens.iter().map(|a| d_phi(&p, a)).collect::<Vec<_>>(), n);
    let pre: Vec<Params> = (0..tangent.dim())
        .map(|i| lstsq(&g, &tangent.vector(i), RANK_TOL).map(|x| lin_comb(&gens, &x)))
        .collect::<Result<_>>()?;
    let d = tangent.dim();
    let mut values = vec![CVec::zeros(n); d * d];
    for i in 0..d {
        for j in i..d {
            let v = tangent.quotient_project(&sigma_hat(&p, &pre[i], &pre[j]));
            values[j * d + i] = v.clone();
            values[i * d + j] = v;
        }
    }
    Ok(SffRep { base: point, tangent, quotient_of: amb.name(), values })
}

/// `Ker σ(·, E) = {ζ ∈ T : σ(ζ, ξ) = 0 for all ξ ∈ E}`.
pub fn sff_kernel(sigma: &SffRep, e: &Subspace) -> Result<Subspace> {
    if !sigma.tangent.contains_subspace(e, 1e-8) {
        return Err(Error::invalid("E is not contained in the tangent space"));
    }
    let d = sigma.dim();
    let n = sigma.tangent.ambient_dim();
    if e.dim() == 0 {
        return Ok(sigma.tangent.clone());
    }
    let mut m = CMat::zeros(n * e.dim(), d);
    for j in 0..e.dim() {
        let b = sigma.tangent.coordinates(&e.vector(j));
        for i in 0..d {
            let mut col = CVec::zeros(n);
            for l in 0..d {
                col += sigma.value(i, l) * b[l];
            }
            m.view_mut((j * n, i), (n, 1)).copy_from(&col);
        }
    }
    let k = kernel(&m, RANK_TOL)?;
    Subspace::column_space(&(sigma.tangent.basis() * k.basis()), RANK_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NondegeneracyReport {
    pub kernel_dim: usize,
    /// Sine of the angle between `β` and the kernel.
    pub angle: f64,
    pub nondegenerate: bool,
}

/// `Ker σ_β(·, T_β B̃) = ℂβ` for the full cone's form at a point of the
/// sub-cone; decided at angle 1e-6.
pub fn check_pair_nondegenerate(
    ambient_model: &ConeModel,
    sub_model: &ConeModel,
    beta: &ConePoint,
) -> Result<NondegeneracyReport> {
    if !ambient_model.is_ambient_cone() || !sub_model.ambient_model().same_cone(ambient_model) {
        return Err(Error::invalid(format!(
            "{} is not a section of {}",
            sub_model.name(),
            ambient_model.name()
        )));
    }
    let sigma = sff_closed_form(sub_model, beta)?;
    let tb = tangent_space_closed_form(sub_model, beta)?;
    let k = sff_kernel(&sigma, &tb)?;
    let b = beta.vector();
    let angle = k.residual(b) / b.norm();
    Ok(NondegeneracyReport {
        kernel_dim: k.dim(),
        angle,
        nondegenerate: k.dim() == 1 && angle < 1e-6,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseLocusReport {
    /// Per candidate: `σ(v,v) = 0` on random samples, to 1e-8.
    pub null: Vec<bool>,
    /// Per candidate: lies inside the restricting subspace.
    pub contained: Vec<bool>,
    /// Distinct null candidates.
    pub component_count: usize,
    /// Null candidates not contained in another null candidate.
    pub maximal_components: usize,
    /// Random unit vectors at distance >= 1e-2 from every candidate.
    pub off_probes: usize,
    /// Off-candidate probes with `|σ(v,v)| > 1e-4`.
    pub off_nonnull: usize,
}

const NULL_TOL: f64 = 1e-8;
const NONNULL_TOL: f64 = 1e-4;
const OFF_DISTANCE: f64 = 1e-2;

fn quad(sigma: &SffRep, v: &CVec) -> f64 {
    let a = sigma.tangent.coordinates(v);
    sigma.eval_coords(&a, &a).norm()
}

/// Tests the candidate components of `{v ∈ S : σ(v,v) = 0}` for `S =
/// restricted_to`, and probes `probes` random vectors of `S` away from
/// all candidates.
pub fn base_locus<R: Rng + ?Sized>(
    sigma: &SffRep,
    restricted_to: &Subspace,
    candidates: &[Subspace],
    probes: usize,
    rng: &mut R,
) -> Result<BaseLocusReport> {
    if !sigma.tangent.contains_subspace(restricted_to, 1e-8) {
        return Err(Error::invalid("restricting subspace is not tangent"));
    }
    let mut null = Vec::new();
    let mut contained = Vec::new();
    for cand in candidates {
        contained.push(restricted_to.contains_subspace(cand, 1e-8));
        let is_null = cand.dim() > 0
            && (0..5).all(|_| {
                let v = cand.sample(rng);
                sigma.tangent.contains_within(&v, 1e-8) && quad(sigma, &v) <= NULL_TOL
            });
        null.push(is_null);
    }
    let mut component_count = 0;
    let mut maximal_components = 0;
    for (i, ci) in candidates.iter().enumerate() {
        if !null[i] {
            continue;
        }
        let others = || candidates.iter().enumerate().filter(|&(j, _)| j != i && null[j]);
        if !others().any(|(j, cj)| j < i && cj.equal_within(ci, 1e-8)) {
            component_count += 1;
        }
        let absorbed = others().any(|(j, cj)| {
            cj.contains_subspace(ci, 1e-8) && (cj.dim() > ci.dim() || j < i)
        });
        if !absorbed {
            maximal_components += 1;
        }
    }
    let mut off_probes = 0;
    let mut off_nonnull = 0;
    let mut attempts = 0;
    while off_probes < probes && attempts < 50 * probes {
        attempts += 1;
        let v = restricted_to.sample(rng);
        if candidates.iter().any(|cand| cand.residual(&v) < OFF_DISTANCE) {
            continue;
        }
        off_probes += 1;
        if quad(sigma, &v) > NONNULL_TOL {
            off_nonnull += 1;
        }
    }
    Ok(BaseLocusReport {
        null,
        contained,
        component_count,
        maximal_components,
        off_probes,
        off_nonnull,
    })
}

/// Base locus of the full cone's form on `T_β B̃`, with the candidates of
/// [`base_locus_candidates`].
pub fn base_locus_report<R: Rng + ?Sized>(
    model: &ConeModel,
    beta: &ConePoint,
    probes: usize,
    rng: &mut R,
) -> Result<BaseLocusReport> {
    let sigma = sff_closed_form(model, beta)?;
    let tb = tangent_space_closed_form(model, beta)?;
    let cands = base_locus_candidates(model, beta)?;
    base_locus(&sigma, &tb, &cands, probes, rng)
}
