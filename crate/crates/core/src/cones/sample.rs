use rand::Rng;

use super::{ConeModel, ConePoint, Params, Spaces, Stratum};
use crate::ambient::AmbientVector;
use crate::error::{Error, Result};
use crate::linalg::{c, kernel, random_c64, CMat, CVec, RANK_TOL};
use crate::tensor::dot;

const MAX_RETRIES: usize = 32;

/// A random point of the given stratum, normalized to unit length.
///
/// Parameter blocks are complex normal in the model's subspaces; for the
/// F4 family `f` is then drawn from the part of its subspace annihilated
/// by `e*`. The linear stratum has the quadratic block exactly zero.
/// The Segre cone has a single stratum and ignores the request.
pub fn sample_point<R: Rng + ?Sized>(
    model: &ConeModel,
    stratum: Stratum,
    rng: &mut R,
) -> Result<ConePoint> {
    let (base, _) = model.base_and_h();
    for _ in 0..MAX_RETRIES {
        let Some(p) = draw(&base.spaces, stratum, rng)? else {
            continue;
        };
        let v = model.eval_params(&p);
        let n = v.norm();
        if !n.is_finite() || n <= 1e-6 {
            continue;
        }
        let p = p.scaled(c(1.0 / n)).balanced();
        let expected = if base.family() == super::Family::Segre {
            Stratum::Generic
        } else {
            stratum
        };
        if p.stratum() != expected {
            continue;
        }
        let coords = AmbientVector::new(model.ambient.clone(), model.eval_params(&p))?;
        return Ok(ConePoint { stratum: expected, params: p, coords });
    }
    Err(Error::Internal(format!(
        "no {} point of {} after {MAX_RETRIES} draws",
        stratum.name(),
        model.name()
    )))
}

fn draw_in(basis: &CMat, rng: &mut (impl Rng + ?Sized)) -> CVec {
    let coeffs = CVec::from_fn(basis.ncols(), |_, _| random_c64(rng));
    basis * coeffs
}

fn draw<R: Rng + ?Sized>(spaces: &Spaces, stratum: Stratum, rng: &mut R) -> Result<Option<Params>> {
    Ok(Some(match spaces {
        Spaces::Segre { u, w } => Params::Segre { u: draw_in(u.basis(), rng), w: draw_in(w.basis(), rng) },
        Spaces::Symplectic { u, q } => Params::Symplectic {
            u: draw_in(u.basis(), rng),
            q: draw_in(q.basis(), rng),
            c: match stratum {
                Stratum::Generic => random_c64(rng),
                Stratum::DegenerateLinear => c(0.0),
            },
        },
        Spaces::F4 { e: es, f: fs } => {
            let e = draw_in(es.basis(), rng);
            let q = CVec::from_fn(2, |_, _| random_c64(rng));
            let f = match stratum {
                Stratum::DegenerateLinear => CVec::zeros(3),
                Stratum::Generic => {
                    let row = CMat::from_fn(1, fs.dim(), |_, j| dot(&e, &fs.vector(j)) / c(e.norm()));
                    let k = kernel(&row, RANK_TOL)?;
                    if k.dim() == 0 {
                        return Ok(None);
                    }
                    fs.basis() * draw_in(k.basis(), rng)
                }
            };
            Params::F4 { e, f, q }
        }
    }))
}

