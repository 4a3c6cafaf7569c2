//! Parametrizations, their differentials, and rank-one decompositions.

use super::{Family, Spaces, Stratum};
use crate::error::Result;
use crate::linalg::{c, kernel, CMat, CVec, C64, RANK_TOL};
use crate::tensor::{dot, outer, sym, sym_from_matrix, sym_to_matrix, unflatten};

/// Named parameter blocks of a cone point, as vectors in the full spaces
/// `U, W`, `U, Q` or `E*, E, Q`.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Segre { u: CVec, w: CVec },
    Symplectic { u: CVec, q: CVec, c: C64 },
    F4 { e: CVec, f: CVec, q: CVec },
}

impl Params {
    pub fn family(&self) -> Family {
        match self {
            Params::Segre { .. } => Family::Segre,
            Params::Symplectic { .. } => Family::Symplectic,
            Params::F4 { .. } => Family::F4,
        }
    }

    pub fn blocks(&self) -> Vec<CVec> {
        match self {
            Params::Segre { u, w } => vec![u.clone(), w.clone()],
            Params::Symplectic { u, q, c } => vec![u.clone(), q.clone(), CVec::from_element(1, *c)],
            Params::F4 { e, f, q } => vec![e.clone(), f.clone(), q.clone()],
        }
    }

    pub fn from_blocks(family: Family, mut b: Vec<CVec>) -> Params {
        match family {
            Family::Segre => {
                let w = b.pop().expect("two blocks");
                let u = b.pop().expect("two blocks");
                Params::Segre { u, w }
            }
            Family::Symplectic => {
                let cc = b.pop().expect("three blocks")[0];
                let q = b.pop().expect("three blocks");
                let u = b.pop().expect("three blocks");
                Params::Symplectic { u, q, c: cc }
            }
            Family::F4 => {
                let q = b.pop().expect("three blocks");
                let f = b.pop().expect("three blocks");
                let e = b.pop().expect("three blocks");
                Params::F4 { e, f, q }
            }
        }
    }

    /// Stratum read off from the parameters: the `u²` resp. `f⊗q²` term
    /// counts as absent below 1e-10 of the point's size.
    pub fn stratum(&self) -> Stratum {
        match self {
            Params::Segre { .. } => Stratum::Generic,
            Params::Symplectic { u, q, c } => {
                let quad = c.norm() * u.norm_squared();
                if quad <= 1e-10 * (u.norm() * q.norm() + quad) {
                    Stratum::DegenerateLinear
                } else {
                    Stratum::Generic
                }
            }
            Params::F4 { e, f, q } => {
                let quad = f.norm() * q.norm_squared();
                if quad <= 1e-10 * (e.norm() * q.norm() + quad) {
                    Stratum::DegenerateLinear
                } else {
                    Stratum::Generic
                }
            }
        }
    }

    /// Parameters of `λβ`.
    pub fn scaled(&self, lambda: C64) -> Params {
        match self {
            Params::Segre { u, w } => Params::Segre { u: u * lambda, w: w.clone() },
            Params::Symplectic { u, q, c } => {
                Params::Symplectic { u: u.clone(), q: q * lambda, c: c * lambda }
            }
            Params::F4 { e, f, q } => Params::F4 { e: e * lambda, f: f * lambda, q: q.clone() },
        }
    }

    /// The same point with parameter blocks of comparable norms, using the
    /// rescaling symmetry of the parametrization.
    pub fn balanced(&self) -> Params {
        let ratio = |a: f64, b: f64| if a > 0.0 && b > 0.0 { (b / a).sqrt() } else { 1.0 };
        match self {
            Params::Segre { u, w } => {
                let l = ratio(u.norm(), w.norm());
                Params::Segre { u: u * c(l), w: w / c(l) }
            }
            Params::Symplectic { u, q, c: cc } => {
                let l = ratio(u.norm(), q.norm());
                Params::Symplectic { u: u * c(l), q: q / c(l), c: cc / c(l * l) }
            }
            Params::F4 { e, f, q } => {
                let l = if e.norm() > 0.0 {
                    ratio(q.norm(), e.norm())
                } else if f.norm() > 0.0 && q.norm() > 0.0 {
                    (f.norm() / q.norm()).cbrt()
                } else {
                    1.0
                };
                Params::F4 { e: e / c(l), f: f / c(l * l), q: q * c(l) }
            }
        }
    }

    fn zero_like(&self) -> Params {
        match self {
            Params::Segre { u, w } => Params::Segre { u: u * c(0.0), w: w * c(0.0) },
            Params::Symplectic { u, q, .. } => {
                Params::Symplectic { u: u * c(0.0), q: q * c(0.0), c: c(0.0) }
            }
            Params::F4 { e, f, q } => Params::F4 { e: e * c(0.0), f: f * c(0.0), q: q * c(0.0) },
        }
    }
}

fn concat(parts: &[CVec]) -> CVec {
    CVec::from_iterator(
        parts.iter().map(|p| p.len()).sum(),
        parts.iter().flat_map(|p| p.iter().copied()),
    )
}

/// `u⊗w`, `u⊗q + c u²` or `e*⊗q + f⊗q²` in flat coordinates.
pub(crate) fn eval(family: Family, p: &Params) -> CVec {
    match (family, p) {
        (Family::Segre, Params::Segre { u, w }) => outer(u, w),
        (Family::Symplectic, Params::Symplectic { u, q, c }) => {
            concat(&[outer(u, q), sym(u, u) * *c])
        }
        (Family::F4, Params::F4 { e, f, q }) => {
            concat(&[outer(e, q), outer(f, &sym(q, q)), CVec::zeros(5)])
        }
        _ => panic!("parameter family does not match the model"),
    }
}

/// Differential of the parametrization at `p` applied to the velocity `a`.
pub(crate) fn d_phi(p: &Params, a: &Params) -> CVec {
    match (p, a) {
        (Params::Segre { u, w }, Params::Segre { u: du, w: dw }) => outer(du, w) + outer(u, dw),
        (Params::Symplectic { u, q, c: cc }, Params::Symplectic { u: du, q: dq, c: dc }) => {
            concat(&[
                outer(du, q) + outer(u, dq),
                sym(u, du) * (cc * c(2.0)) + sym(u, u) * *dc,
            ])
        }
        (Params::F4 { e, f, q }, Params::F4 { e: de, f: df, q: dq }) => concat(&[
            outer(de, q) + outer(e, dq),
            outer(df, &sym(q, q)) + outer(f, &(sym(q, dq) * c(2.0))),
            CVec::zeros(5),
        ]),
        _ => panic!("velocity family does not match the point"),
    }
}

/// Parameter velocities spanning the tangent space of the section cone
/// cut out by `spaces` at `p`. These are the generator families of the
/// tangent space: `u′⊗q + 2c u∘u′`, `u⊗q′`, `u²`; `e*⊗q′ + f⊗2q∘q′` and
/// `e′*⊗q + f′⊗q²` with `⟨e′*,f⟩ + ⟨e*,f′⟩ = 0`.
pub(crate) fn param_tangents(spaces: &Spaces, p: &Params) -> Result<Vec<Params>> {
    let zero = p.zero_like();
    let mut out = Vec::new();
    match (spaces, p) {
        (Spaces::Segre { u: us, w: ws }, Params::Segre { .. }) => {
            for j in 0..us.dim() {
                let mut a = zero.clone();
                if let Params::Segre { u, .. } = &mut a {
                    *u = us.vector(j);
                }
                out.push(a);
            }
            for j in 0..ws.dim() {
                let mut a = zero.clone();
                if let Params::Segre { w, .. } = &mut a {
                    *w = ws.vector(j);
                }
                out.push(a);
            }
        }
        (Spaces::Symplectic { u: us, q: qs }, Params::Symplectic { .. }) => {
            for j in 0..us.dim() {
                let mut a = zero.clone();
                if let Params::Symplectic { u, .. } = &mut a {
                    *u = us.vector(j);
                }
                out.push(a);
            }
            for j in 0..qs.dim() {
                let mut a = zero.clone();
                if let Params::Symplectic { q, .. } = &mut a {
                    *q = qs.vector(j);
                }
                out.push(a);
            }
            let mut a = zero.clone();
            if let Params::Symplectic { c: cc, .. } = &mut a {
                *cc = c(1.0);
            }
            out.push(a);
        }
        (Spaces::F4 { e: es, f: fs }, Params::F4 { e, f, .. }) => {
            for j in 0..2 {
                let mut a = zero.clone();
                if let Params::F4 { q, .. } = &mut a {
                    *q = crate::linalg::unit(2, j);
                }
                out.push(a);
            }
            // linearized constraint ⟨e′*, f⟩ + ⟨e*, f′⟩ = 0 on E_s × F_s
            let (de, df) = (es.dim(), fs.dim());
            let mut row = CMat::zeros(1, de + df);
            for j in 0..de {
                row[(0, j)] = dot(&es.vector(j), f);
            }
            for j in 0..df {
                row[(0, de + j)] = dot(e, &fs.vector(j));
            }
            let k = kernel(&row, RANK_TOL)?;
            for j in 0..k.dim() {
                let col = k.vector(j);
                let mut a = zero.clone();
                if let Params::F4 { e: ae, f: af, .. } = &mut a {
                    *ae = es.basis() * col.rows(0, de);
                    *af = fs.basis() * col.rows(de, df);
                }
                out.push(a);
            }
        }
        _ => panic!("parameter family does not match the model"),
    }
    Ok(out)
}

/// `(x, y)` with `m = x yᵀ`, provided `σ₂ <= tol σ₁`.
fn rank_one(m: &CMat) -> (CVec, CVec, f64) {
    let Ok((u, s, vt)) = crate::linalg::svd(m) else {
        return (CVec::zeros(m.nrows()), CVec::zeros(m.ncols()), f64::INFINITY);
    };
    let x = u.column(0) * c(s[0]);
    let y = vt.row(0).transpose();
    let ratio = if s.len() > 1 && s[0] > 0.0 { s[1] / s[0] } else { 0.0 };
    (x, y, ratio)
}

fn rank_one_checked(m: &CMat, tol: f64) -> Option<(CVec, CVec)> {
    let (x, y, ratio) = rank_one(m);
    (ratio <= tol).then_some((x, y))
}

/// Recover parameters from ambient coordinates via the block structure,
/// or `None` if `v` is not on the full cone of this family.
pub(crate) fn decompose(spaces: &Spaces, v: &CVec, tol: f64) -> Option<Params> {
    let nv = v.norm();
    if nv == 0.0 || !nv.is_finite() {
        return None;
    }
    match spaces {
        Spaces::Segre { u, w } => {
            let m = unflatten(v, u.ambient_dim(), w.ambient_dim());
            let (x, y) = rank_one_checked(&m, tol)?;
            Some(Params::Segre { u: x, w: y })
        }
        Spaces::Symplectic { u, q } => {
            let (k, n) = (u.ambient_dim(), q.ambient_dim());
            let m = unflatten(&v.rows(0, k * n).into_owned(), k, n);
            let s = sym_to_matrix(&v.rows(k * n, v.len() - k * n).into_owned(), k);
            let (uu, qq) = if m.norm() > tol * nv {
                let (x, y) = rank_one_checked(&m, tol)?;
                let nx = x.norm();
                (x / c(nx), y * c(nx))
            } else {
                // pure c u²: a symmetric rank-one matrix
                let (x, _, ratio) = rank_one(&s);
                if ratio > tol {
                    return None;
                }
                (x.normalize(), CVec::zeros(n))
            };
            let ubar = uu.conjugate();
            let cc = (uu.adjoint() * &s * &ubar)[(0, 0)];
            let resid = sym_from_matrix(&(&s - &uu * uu.transpose() * cc)).norm();
            (resid <= tol * nv).then_some(Params::Symplectic { u: uu, q: qq, c: cc })
        }
        Spaces::F4 { .. } => {
            if v.rows(15, 5).norm() > tol * nv {
                return None;
            }
            let g1 = unflatten(&v.rows(0, 6).into_owned(), 3, 2);
            let g2 = unflatten(&v.rows(6, 9).into_owned(), 3, 3);
            let (e, f, q) = if g1.norm() > tol * nv {
                let (x, y) = rank_one_checked(&g1, tol)?;
                let ny = y.norm();
                let q = y / c(ny);
                let e = x * c(ny);
                let sq = sym(&q, &q);
                let f = &g2 * sq.conjugate() / c(sq.norm_squared());
                (e, f, q)
            } else {
                let (x, y) = rank_one_checked(&g2, tol)?;
                let (a, b, d) = (y[0], y[1], y[2]);
                if (b * b - a * d).norm() > tol * y.norm_squared() {
                    return None;
                }
                let q = if a.norm() >= d.norm() {
                    let r = a.sqrt();
                    CVec::from_vec(vec![r, b / r])
                } else {
                    let r = d.sqrt();
                    CVec::from_vec(vec![b / r, r])
                };
                (CVec::zeros(3), x, q)
            };
            let sq = sym(&q, &q);
            let resid = (&g2 - &f * sq.transpose()).norm();
            if resid > tol * nv {
                return None;
            }
            if dot(&e, &f).norm() > tol * (e.norm() * f.norm()).max(tol * nv * nv) {
                return None;
            }
            Some(Params::F4 { e, f, q })
        }
    }
}
