//! Finite-difference second fundamental form: differentiate the moving
//! projection `P_{T(z(t))} ζ` along a curve with velocity `ξ`.

use crate::cones::{jacobian_tangent_at, ConeModel, ConePoint};
use crate::error::{Error, Result};
use crate::fd;
use crate::linalg::{c, CVec};

/// Pulls `z` back onto `⟨e*, f⟩ = 0` by Newton steps along `conj ∇g`.
fn retract(model: &ConeModel, z: CVec) -> Result<CVec> {
    let Some(_) = model.constraint_local(&z) else {
        return Ok(z);
    };
    let g = |x: &CVec| model.constraint_local(x).expect("constrained family");
    let mut z = z;
    for _ in 0..20 {
        let gz = g(&z);
        if gz.norm() <= 1e-15 * z.norm_squared().max(1.0) {
            return Ok(z);
        }
        let grad = fd::gradient(&g, &z, 1e-3 * z.norm().max(1.0));
        let s = grad.norm_squared();
        if s == 0.0 {
            break;
        }
        z -= grad.conjugate() * (gz / c(s));
    }
    let gz = g(&z);
    if gz.norm() <= 1e-12 * z.norm_squared().max(1.0) {
        Ok(z)
    } else {
        Err(Error::Internal(format!("retraction did not converge (|g| = {:.2e})", gz.norm())))
    }
}

/// `σ_β(ξ, ζ)` of the full cone containing `model`, computed by central
/// differences of the moving tangent projection with one Richardson step.
/// Both vectors must lie in `T_β Ã` (to 1e-8).
pub fn sff_oracle(model: &ConeModel, beta: &ConePoint, xi: &CVec, zeta: &CVec) -> Result<CVec> {
    model.check_point(beta)?;
    let amb = model.ambient_model();
    // balanced parameters keep the difference steps well scaled
    let p = model.ambient_params(beta)?.balanced();
    let z0 = amb.params_to_local(&p)?;
    let t0 = jacobian_tangent_at(&amb, &z0)?;
    for (name, v) in [("ξ", xi), ("ζ", zeta)] {
        if !t0.space.contains_within(v, 1e-8) {
            return Err(Error::invalid(format!(
                "{name} is not tangent (residual {:.2e})",
                t0.space.residual(v)
            )));
        }
    }
    let a = t0.lift(xi)?;
    let scale = a.norm();
    if scale == 0.0 {
        return Ok(CVec::zeros(zeta.len()));
    }
    let dir = &a / c(scale);
    let rho = |t: f64| -> Result<CVec> {
        let z = retract(&amb, &z0 + &dir * c(t))?;
        Ok(jacobian_tangent_at(&amb, &z)?.space.project(zeta))
    };
    let central = |h: f64| -> Result<CVec> { Ok((rho(h)? - rho(-h)?) / c(2.0 * h)) };
    let h = 1e-4 * z0.norm().max(1.0);
    let (d1, d2, d4) = (central(h)?, central(h / 2.0)?, central(h / 4.0)?);
    let r1 = (&d2 * c(4.0) - &d1) / c(3.0);
    let r2 = (&d4 * c(4.0) - &d2) / c(3.0);
    let diff = (&r1 - &r2).norm();
    if diff > 1e-5 * (1.0 + r2.norm()) {
        return Err(Error::Richardson {
            gap: diff,
            coarse_norm: r1.norm(),
            fine_norm: r2.norm(),
            coarse: r1.iter().copied().collect(),
            fine: r2.iter().copied().collect(),
        });
    }
    Ok(t0.space.quotient_project(&r2) * c(scale))
}
