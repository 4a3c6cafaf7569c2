use super::{d_phi, param_tangents, ConeModel, ConePoint};
use crate::error::Result;
use crate::fd;
use crate::linalg::{c, kernel, CMat, CVec, Subspace, C64, RANK_TOL};

/// Tangent space spanned by the generator families of the cone at `β`.
pub fn tangent_space_closed_form(model: &ConeModel, beta: &ConePoint) -> Result<Subspace> {
    model.check_point(beta)?;
    let (base, h) = model.base_and_h();
    let gens: Vec<CVec> = param_tangents(&base.spaces, &beta.params)?
        .iter()
        .map(|a| d_phi(&beta.params, a))
        .collect();
    let n = model.ambient.total_dim();
    let t = Subspace::span(n, &gens, RANK_TOL)?;
    match h {
        Some(h) => t.image(&h.matrix(&model.ambient)?),
        None => Ok(t),
    }
}

/// Tangent space as the column space of the finite-difference Jacobian of
/// the parametrization in local coordinates.
pub fn tangent_space_jacobian(model: &ConeModel, beta: &ConePoint) -> Result<Subspace> {
    model.check_point(beta)?;
    let z = model.params_to_local(&beta.params)?;
    Ok(jacobian_tangent_at(model, &z)?.space)
}

/// Jacobian data at local coordinates `z`.
pub(crate) struct LocalTangent {
    /// Tangent space.
    pub space: Subspace,
    /// `J K`: Jacobian over real and imaginary directions, restricted to
    /// the linearized constraint.
    pub jk: CMat,
    /// Constraint-compatible directions in `(Re, Im)` local coordinates.
    pub k: CMat,
}

impl LocalTangent {
    /// Complex local-coordinate direction mapped to `ξ` by the differential.
    pub fn lift(&self, xi: &CVec) -> Result<CVec> {
        let y = crate::linalg::lstsq(&self.jk, xi, RANK_TOL)?;
        let d = &self.k * y;
        let p = d.len() / 2;
        Ok(d.rows(0, p) + d.rows(p, p) * C64::i())
    }
}

pub(crate) fn fd_step(z: &CVec) -> f64 {
    1e-3 * z.norm().max(1.0)
}

pub(crate) fn jacobian_tangent_at(model: &ConeModel, z: &CVec) -> Result<LocalTangent> {
    let f = |x: &CVec| model.eval_local(x);
    let h = fd_step(z);
    let j = fd::jacobian_re_im(&f, z, h);
    let p = z.len();
    let k = match model.constraint_local(z) {
        None => CMat::identity(2 * p, 2 * p),
        Some(_) => {
            let g = |x: &CVec| model.constraint_local(x).expect("constrained family");
            let grad = fd::gradient(&g, z, h);
            let scale = grad.norm();
            if scale == 0.0 {
                CMat::identity(2 * p, 2 * p)
            } else {
                let row = CMat::from_fn(1, 2 * p, |_, col| {
                    if col < p {
                        grad[col] / c(scale)
                    } else {
                        grad[col - p] * C64::i() / c(scale)
                    }
                });
                kernel(&row, RANK_TOL)?.basis().clone()
            }
        }
    };
    let jk = &j * &k;
    let space = Subspace::column_space(&jk, RANK_TOL)?;
    Ok(LocalTangent { space, jk, k })
}
