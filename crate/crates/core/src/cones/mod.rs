//! Affine cone models of the VMRTs: the symplectic cone `{u⊗q + c u²}`,
//! its odd-symplectic sub-cones, the F4 cone `{e*⊗q + f⊗q² : ⟨e*,f⟩ = 0}`
//! with its Schubert sub-cones, and the Segre cone as a baseline.
//!
//! Every model carries the subspaces its parameters are restricted to.
//! Ambient cones use the full spaces; sub-cones are linear sections.

mod family;
mod probes;
pub mod roots;
mod sample;
pub mod schubert;
mod tangent;

use std::sync::Arc;

use crate::ambient::{AmbientVector, GradedAmbient};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::linalg::{kernel, unit, CMat, CVec, Subspace, C64, RANK_TOL};
use crate::tensor::dot;

pub use family::Params;
pub use probes::{
    base_locus_candidates, fiber_degree_split, fiber_dimension, fiber_span, DegreeSplit,
};
pub use sample::sample_point;
pub use tangent::{tangent_space_closed_form, tangent_space_jacobian};

pub(crate) use family::{d_phi, param_tangents};
pub(crate) use tangent::jacobian_tangent_at;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    /// `u⊗q + c u²` with `c ≠ 0`, resp. `e*⊗q + f⊗q²` with `f ≠ 0`.
    Generic,
    /// `u⊗q`, resp. `e*⊗q`.
    DegenerateLinear,
}

impl Stratum {
    pub const BOTH: [Stratum; 2] = [Stratum::DegenerateLinear, Stratum::Generic];

    pub fn name(self) -> &'static str {
        match self {
            Stratum::Generic => "generic",
            Stratum::DegenerateLinear => "linear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Segre,
    Symplectic,
    F4,
}

#[derive(Debug, Clone)]
pub enum ConeKind {
    SegreBaseline { dim_u: usize, dim_w: usize },
    /// `U⊗w₁`: the Segre cone cut down to a single line in `W`.
    SegreLine { dim_u: usize, dim_w: usize },
    SymplecticVmrt { k: usize, l: usize },
    OddSymplecticSubVmrt { k: usize, l: usize, a: usize },
    /// `{u⊗q + c u² : u ∈ U′, q ∈ Q′}` for arbitrary subspaces.
    SymplecticSection { k: usize, l: usize },
    F4Alpha3Vmrt,
    F4SchubertB3,
    F4SchubertC2,
    /// `{e*⊗q + f⊗q² : e* ∈ R*, f ∈ R′, ⟨e*,f⟩ = 0}` for arbitrary subspaces.
    F4Section,
    /// Image of a cone under a linear group element.
    Transformed { base: Box<ConeModel>, h: GroupElement },
}

#[derive(Debug, Clone)]
pub(crate) enum Spaces {
    Segre { u: Subspace, w: Subspace },
    Symplectic { u: Subspace, q: Subspace },
    F4 { e: Subspace, f: Subspace },
}

impl Spaces {
    fn family(&self) -> Family {
        match self {
            Spaces::Segre { .. } => Family::Segre,
            Spaces::Symplectic { .. } => Family::Symplectic,
            Spaces::F4 { .. } => Family::F4,
        }
    }

    fn list(&self) -> [&Subspace; 2] {
        match self {
            Spaces::Segre { u, w } => [u, w],
            Spaces::Symplectic { u, q } => [u, q],
            Spaces::F4 { e, f } => [e, f],
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConeModel {
    kind: ConeKind,
    ambient: Arc<GradedAmbient>,
    spaces: Spaces,
}

/// A point of a cone. For a [`ConeKind::Transformed`] model the parameters
/// are those of the base cone.
#[derive(Debug, Clone)]
pub struct ConePoint {
    pub params: Params,
    pub stratum: Stratum,
    pub coords: AmbientVector,
}

impl ConePoint {
    pub fn vector(&self) -> &CVec {
        &self.coords.coords
    }
}

fn span_units(n: usize, idx: &[usize]) -> Subspace {
    let cols: Vec<CVec> = idx.iter().map(|&i| unit(n, i)).collect();
    Subspace::span(n, &cols, RANK_TOL).expect("unit vectors are independent")
}

/// `{f : ⟨e*, f⟩ = 0 for all e* ∈ s}` under the dual-basis pairing.
pub fn annihilator(s: &Subspace) -> Result<Subspace> {
    kernel(&s.basis().transpose(), RANK_TOL)
}

fn check_symplectic(k: usize, l: usize) -> Result<()> {
    if !(1 < k && k < l) {
        return Err(Error::invalid(format!("symplectic cone needs 1 < k < l, got k={k}, l={l}")));
    }
    Ok(())
}

impl ConeModel {
    pub fn segre(dim_u: usize, dim_w: usize) -> Result<Self> {
        if dim_u == 0 || dim_w == 0 {
            return Err(Error::invalid("Segre factors must be nonzero"));
        }
        Ok(ConeModel {
            kind: ConeKind::SegreBaseline { dim_u, dim_w },
            ambient: Arc::new(GradedAmbient::segre(dim_u, dim_w)?),
            spaces: Spaces::Segre {
                u: Subspace::full(dim_u, RANK_TOL),
                w: Subspace::full(dim_w, RANK_TOL),
            },
        })
    }

    pub fn segre_line(dim_u: usize, dim_w: usize) -> Result<Self> {
        let mut m = ConeModel::segre(dim_u, dim_w)?;
        m.kind = ConeKind::SegreLine { dim_u, dim_w };
        m.spaces = Spaces::Segre { u: Subspace::full(dim_u, RANK_TOL), w: span_units(dim_w, &[0]) };
        Ok(m)
    }

    pub fn symplectic(k: usize, l: usize) -> Result<Self> {
        check_symplectic(k, l)?;
        let m = l - k;
        Ok(ConeModel {
            kind: ConeKind::SymplecticVmrt { k, l },
            ambient: Arc::new(GradedAmbient::symplectic(k, m)?),
            spaces: Spaces::Symplectic {
                u: Subspace::full(k, RANK_TOL),
                q: Subspace::full(2 * m, RANK_TOL),
            },
        })
    }

    /// `U_a` = first `k - a` covectors, `Q_a` = first `2m - 1` basis vectors.
    pub fn odd_symplectic(k: usize, l: usize, a: usize) -> Result<Self> {
        check_symplectic(k, l)?;
        if a >= k {
            return Err(Error::invalid(format!("odd-symplectic sub-cone needs a < k, got a={a}")));
        }
        let m = l - k;
        let mut model = ConeModel::symplectic(k, l)?;
        model.kind = ConeKind::OddSymplecticSubVmrt { k, l, a };
        model.spaces = Spaces::Symplectic {
            u: span_units(k, &(0..k - a).collect::<Vec<_>>()),
            q: span_units(2 * m, &(0..2 * m - 1).collect::<Vec<_>>()),
        };
        Ok(model)
    }

    pub fn symplectic_section(k: usize, l: usize, u: Subspace, q: Subspace) -> Result<Self> {
        check_symplectic(k, l)?;
        let m = l - k;
        if u.ambient_dim() != k || q.ambient_dim() != 2 * m {
            return Err(Error::invalid("section subspaces do not live in U and Q"));
        }
        if u.dim() == 0 {
            return Err(Error::invalid("section with U′ = 0 is empty"));
        }
        let mut model = ConeModel::symplectic(k, l)?;
        model.kind = ConeKind::SymplecticSection { k, l };
        model.spaces = Spaces::Symplectic { u, q };
        Ok(model)
    }

    pub fn f4() -> Self {
        ConeModel {
            kind: ConeKind::F4Alpha3Vmrt,
            ambient: Arc::new(GradedAmbient::f4()),
            spaces: Spaces::F4 { e: Subspace::full(3, RANK_TOL), f: Subspace::full(3, RANK_TOL) },
        }
    }

    /// B3 case: `e* ∈ F*`, `f ∈ F*⊥`.
    pub fn f4_b3(f_star: Subspace) -> Result<Self> {
        if f_star.ambient_dim() != 3 || f_star.dim() != 1 {
            return Err(Error::invalid("F* must be a line in E*"));
        }
        let perp = annihilator(&f_star)?;
        let mut m = ConeModel::f4();
        m.kind = ConeKind::F4SchubertB3;
        m.spaces = Spaces::F4 { e: f_star, f: perp };
        Ok(m)
    }

    /// C2 case: `e* ∈ F*`, `f ∈ F′ ⊆ F*⊥`.
    pub fn f4_c2(f_star: Subspace, f_prime: Subspace) -> Result<Self> {
        if f_star.ambient_dim() != 3 || f_star.dim() != 1 {
            return Err(Error::invalid("F* must be a line in E*"));
        }
        if f_prime.ambient_dim() != 3 || f_prime.dim() != 1 {
            return Err(Error::invalid("F′ must be a line in E"));
        }
        if !annihilator(&f_star)?.contains_subspace(&f_prime, 1e-8) {
            return Err(Error::ConstraintViolation("F′ is not contained in F*⊥".into()));
        }
        let mut m = ConeModel::f4();
        m.kind = ConeKind::F4SchubertC2;
        m.spaces = Spaces::F4 { e: f_star, f: f_prime };
        Ok(m)
    }

    /// `F* = span{e₁*}`, `F*⊥ = span{e₂, e₃}`.
    pub fn f4_b3_default() -> Self {
        ConeModel::f4_b3(span_units(3, &[0])).expect("default subspaces")
    }

    /// `F* = span{e₁*}`, `F′ = span{e₂}`.
    pub fn f4_c2_default() -> Self {
        ConeModel::f4_c2(span_units(3, &[0]), span_units(3, &[1])).expect("default subspaces")
    }

    pub fn f4_section(e: Subspace, f: Subspace) -> Result<Self> {
        if e.ambient_dim() != 3 || f.ambient_dim() != 3 {
            return Err(Error::invalid("section subspaces do not live in E* and E"));
        }
        let mut m = ConeModel::f4();
        m.kind = ConeKind::F4Section;
        m.spaces = Spaces::F4 { e, f };
        Ok(m)
    }

    /// The cone `h·base`.
    pub fn transformed(base: &ConeModel, h: GroupElement) -> Result<Self> {
        h.check_ambient(&base.ambient)?;
        let (inner, g) = base.base_and_h();
        let h = match g {
            Some(g) => GroupElement::product(vec![h, g.clone()]),
            None => h,
        };
        Ok(ConeModel {
            kind: ConeKind::Transformed { base: Box::new(inner.clone()), h },
            ambient: base.ambient.clone(),
            spaces: base.spaces.clone(),
        })
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn ambient(&self) -> &Arc<GradedAmbient> {
        &self.ambient
    }

    pub fn family(&self) -> Family {
        self.spaces.family()
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ConeKind::SegreBaseline { dim_u, dim_w } => format!("Segre({dim_u},{dim_w})"),
            ConeKind::SegreLine { dim_u, dim_w } => format!("SegreLine({dim_u},{dim_w})"),
            ConeKind::SymplecticVmrt { k, l } => format!("Symplectic({k},{l})"),
            ConeKind::OddSymplecticSubVmrt { k, l, a } => format!("OddSymplectic({k},{l},{a})"),
            ConeKind::SymplecticSection { k, l } => format!("SymplecticSection({k},{l})"),
            ConeKind::F4Alpha3Vmrt => "F4".into(),
            ConeKind::F4SchubertB3 => "F4-B3".into(),
            ConeKind::F4SchubertC2 => "F4-C2".into(),
            ConeKind::F4Section => "F4Section".into(),
            ConeKind::Transformed { base, .. } => format!("h·{}", base.name()),
        }
    }

    /// True for the full cones (Segre, symplectic, F4).
    pub fn is_ambient_cone(&self) -> bool {
        matches!(
            self.kind,
            ConeKind::SegreBaseline { .. } | ConeKind::SymplecticVmrt { .. } | ConeKind::F4Alpha3Vmrt
        )
    }

    /// The full cone this model is a linear section (or image) of.
    pub fn ambient_model(&self) -> ConeModel {
        match &self.kind {
            ConeKind::Transformed { base, .. } => base.ambient_model(),
            _ => match &self.spaces {
                Spaces::Segre { u, w } => {
                    ConeModel::segre(u.ambient_dim(), w.ambient_dim()).expect("valid dims")
                }
                Spaces::Symplectic { u, q } => {
                    let k = u.ambient_dim();
                    ConeModel::symplectic(k, k + q.ambient_dim() / 2).expect("valid dims")
                }
                Spaces::F4 { .. } => ConeModel::f4(),
            },
        }
    }

    /// Named distinguished subspaces (empty for transformed models).
    pub fn distinguished(&self) -> Vec<(&'static str, &Subspace)> {
        match (&self.kind, &self.spaces) {
            (ConeKind::Transformed { .. }, _) => vec![],
            (ConeKind::SegreLine { .. }, Spaces::Segre { w, .. }) => vec![("W′", w)],
            (ConeKind::OddSymplecticSubVmrt { .. }, Spaces::Symplectic { u, q }) => {
                vec![("U_a", u), ("Q_a", q)]
            }
            (ConeKind::SymplecticSection { .. }, Spaces::Symplectic { u, q }) => {
                vec![("U′", u), ("Q′", q)]
            }
            (ConeKind::F4SchubertB3, Spaces::F4 { e, f }) => vec![("F*", e), ("F*⊥", f)],
            (ConeKind::F4SchubertC2, Spaces::F4 { e, f }) => vec![("F*", e), ("F′", f)],
            (ConeKind::F4Section, Spaces::F4 { e, f }) => vec![("R*", e), ("R′", f)],
            _ => vec![],
        }
    }

    pub(crate) fn spaces(&self) -> &Spaces {
        &self.spaces
    }

    /// Same family and ambient, and equal parameter subspaces.
    pub fn same_cone(&self, other: &ConeModel) -> bool {
        if matches!(self.kind, ConeKind::Transformed { .. })
            || matches!(other.kind, ConeKind::Transformed { .. })
        {
            return false;
        }
        self.family() == other.family()
            && self.ambient == other.ambient
            && self
                .spaces
                .list()
                .iter()
                .zip(other.spaces.list())
                .all(|(a, b)| a.equal_within(b, 1e-8))
    }

    pub(crate) fn base_and_h(&self) -> (&ConeModel, Option<&GroupElement>) {
        match &self.kind {
            ConeKind::Transformed { base, h } => {
                let (inner, g) = base.base_and_h();
                assert!(g.is_none(), "nested transformed models are flattened on construction");
                (inner, Some(h))
            }
            _ => (self, None),
        }
    }

    /// Basis matrices of the local coordinate blocks.
    pub(crate) fn block_bases(&self) -> Vec<CMat> {
        match &self.spaces {
            Spaces::Segre { u, w } => vec![u.basis().clone(), w.basis().clone()],
            Spaces::Symplectic { u, q } => {
                vec![u.basis().clone(), q.basis().clone(), CMat::identity(1, 1)]
            }
            Spaces::F4 { e, f } => vec![e.basis().clone(), f.basis().clone(), CMat::identity(2, 2)],
        }
    }

    /// Index of the block that parametrizes the base of the fibration
    /// (`u` for the symplectic and Segre families, `q` for F4).
    pub(crate) fn base_block(&self) -> usize {
        match self.family() {
            Family::Segre | Family::Symplectic => 0,
            Family::F4 => 2,
        }
    }

    /// Subspace swept by the base coordinate of the cone's points.
    pub fn base_subspace(&self) -> Result<Subspace> {
        let (base, h) = self.base_and_h();
        let s = Subspace::column_space(&base.block_bases()[base.base_block()], RANK_TOL)?;
        match h {
            Some(h) => s.image(&h.base_map(self.family(), s.ambient_dim())?),
            None => Ok(s),
        }
    }

    pub fn local_dim(&self) -> usize {
        self.block_bases().iter().map(|b| b.ncols()).sum()
    }

    pub(crate) fn local_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = vec![];
        let mut at = 0;
        for b in self.block_bases() {
            out.push(at..at + b.ncols());
            at += b.ncols();
        }
        out
    }

    /// Local coordinates of parameters lying in the model's subspaces.
    pub fn params_to_local(&self, p: &Params) -> Result<CVec> {
        let blocks = p.blocks();
        let bases = self.block_bases();
        if blocks.len() != bases.len() || p.family() != self.family() {
            return Err(Error::invalid("parameters of the wrong family"));
        }
        let mut z = Vec::new();
        for (x, b) in blocks.iter().zip(&bases) {
            if x.len() != b.nrows() {
                return Err(Error::invalid(format!(
                    "parameter block of length {} where {} is expected",
                    x.len(),
                    b.nrows()
                )));
            }
            let coeffs = b.adjoint() * x;
            let resid = (x - b * &coeffs).norm();
            if resid > 1e-8 * x.norm().max(1e-300) {
                return Err(Error::ConstraintViolation(format!(
                    "parameter block leaves its subspace (residual {resid:.2e})"
                )));
            }
            z.extend(coeffs.iter().copied());
        }
        Ok(CVec::from_vec(z))
    }

    pub fn params_from_local(&self, z: &CVec) -> Params {
        let bases = self.block_bases();
        let mut blocks = Vec::with_capacity(bases.len());
        let mut at = 0;
        for b in &bases {
            blocks.push(b * z.rows(at, b.ncols()));
            at += b.ncols();
        }
        Params::from_blocks(self.family(), blocks)
    }

    /// Parametrization without validation.
    pub(crate) fn eval_params(&self, p: &Params) -> CVec {
        let (base, h) = self.base_and_h();
        let v = family::eval(base.family(), p);
        match h {
            Some(h) => h.apply(&self.ambient, &v).expect("ambient checked on construction"),
            None => v,
        }
    }

    pub(crate) fn eval_local(&self, z: &CVec) -> CVec {
        self.eval_params(&self.params_from_local(z))
    }

    pub(crate) fn constraint_local(&self, z: &CVec) -> Option<C64> {
        match self.params_from_local(z) {
            Params::F4 { e, f, .. } => Some(dot(&e, &f)),
            _ => None,
        }
    }

    /// Ambient coordinates of the parametrized point, after checking the
    /// parameters against the model.
    pub fn parametrize(&self, p: &Params) -> Result<AmbientVector> {
        self.params_to_local(p)?;
        if let Params::F4 { e, f, .. } = p {
            let pe = dot(e, f);
            if pe.norm() > 1e-10 * (e.norm() * f.norm()).max(1.0) {
                return Err(Error::ConstraintViolation(format!(
                    "⟨e*, f⟩ = {:.3e} is not zero",
                    pe.norm()
                )));
            }
        }
        AmbientVector::new(self.ambient.clone(), self.eval_params(p))
    }

    /// Validated point with its stratum read off from the parameters.
    pub fn point(&self, p: Params) -> Result<ConePoint> {
        let coords = self.parametrize(&p)?;
        let stratum = p.stratum();
        Ok(ConePoint { params: p, stratum, coords })
    }

    /// The point `λβ`, obtained by rescaling parameters.
    pub fn scale_point(&self, beta: &ConePoint, lambda: C64) -> Result<ConePoint> {
        let params = beta.params.scaled(lambda);
        let coords = AmbientVector::new(self.ambient.clone(), self.eval_params(&params))?;
        Ok(ConePoint { params, stratum: beta.stratum, coords })
    }

    /// Cone membership by block-structure tests at relative tolerance `tol`.
    pub fn membership(&self, v: &AmbientVector, tol: f64) -> Result<bool> {
        if v.ambient.as_ref() != self.ambient.as_ref() {
            return Err(Error::invalid("vector from a different ambient"));
        }
        Ok(self.locate_params(&v.coords, tol)?.is_some())
    }

    fn locate_params(&self, v: &CVec, tol: f64) -> Result<Option<Params>> {
        let (base, h) = self.base_and_h();
        let w = match h {
            Some(h) => h.inverse()?.apply(&self.ambient, v)?,
            None => v.clone(),
        };
        let Some(p) = family::decompose(&base.spaces, &w, tol) else {
            return Ok(None);
        };
        // restrict to the model's subspaces
        let mut blocks = p.blocks();
        for (x, b) in blocks.iter_mut().zip(base.block_bases()) {
            let coeffs = b.adjoint() * &*x;
            let proj = &b * coeffs;
            if (&*x - &proj).norm() > tol * x.norm() {
                return Ok(None);
            }
            *x = proj;
        }
        Ok(Some(Params::from_blocks(base.family(), blocks)))
    }

    /// The cone point at ambient coordinates `v`, with recovered parameters.
    pub fn locate(&self, v: &CVec, tol: f64) -> Result<ConePoint> {
        if v.len() != self.ambient.total_dim() {
            return Err(Error::invalid("vector from a different ambient"));
        }
        let p = self
            .locate_params(v, tol)?
            .ok_or_else(|| Error::invalid(format!("vector is not on {}", self.name())))?;
        let stratum = p.stratum();
        Ok(ConePoint {
            params: p,
            stratum,
            coords: AmbientVector::new(self.ambient.clone(), v.clone())?,
        })
    }

    /// Parameters of `β` as a point of the full ambient cone.
    pub(crate) fn ambient_params(&self, beta: &ConePoint) -> Result<Params> {
        match &self.kind {
            ConeKind::Transformed { .. } => {
                let amb = self.ambient_model();
                Ok(amb.locate(beta.vector(), 1e-6)?.params)
            }
            _ => Ok(beta.params.clone()),
        }
    }

    pub(crate) fn check_point(&self, beta: &ConePoint) -> Result<()> {
        if beta.coords.ambient.as_ref() != self.ambient.as_ref() {
            return Err(Error::invalid("point from a different ambient"));
        }
        let z = self.params_to_local(&beta.params)?;
        let v = self.eval_local(&z);
        let scale = beta.vector().norm().max(1e-300);
        if (&v - beta.vector()).norm() > 1e-8 * scale {
            return Err(Error::invalid(format!("point is not on {}", self.name())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
