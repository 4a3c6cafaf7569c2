use rand::Rng;

use super::GroupElement;
use crate::cones::{ConeKind, ConeModel, Spaces};
use crate::error::{Error, Result};
use crate::linalg::{c, kernel, random_c64, random_cmat, random_cvec, CMat, CVec, Subspace, RANK_TOL};
use crate::tensor::{cross, omega_matrix, symplectic_form};

fn expm(x: &CMat) -> CMat {
    x.clone().exp()
}

/// Random element of norm `r ∈ [0.3, 1)` in the span of `basis`.
fn random_in_algebra<R: Rng + ?Sized>(basis: &[CMat], n: usize, rng: &mut R) -> CMat {
    let mut x = CMat::zeros(n, n);
    for b in basis {
        x += b * random_c64(rng);
    }
    let norm = x.norm();
    if norm == 0.0 {
        return x;
    }
    let r: f64 = rng.random_range(0.3..1.0);
    x * c(r / norm)
}

/// Basis of `{X ∈ gl(n) : constraint(X) = 0}` for a linear constraint.
fn lie_kernel<F: Fn(&CMat) -> CVec>(n: usize, constraint: F) -> Result<Vec<CMat>> {
    let probe = constraint(&CMat::zeros(n, n));
    let mut m = CMat::zeros(probe.len().max(1), n * n);
    for j in 0..n * n {
        let mut e = CMat::zeros(n, n);
        e[(j % n, j / n)] = c(1.0);
        let col = constraint(&e);
        m.view_mut((0, j), (col.len(), 1)).copy_from(&col);
    }
    let k = kernel(&m, RANK_TOL)?;
    Ok((0..k.dim())
        .map(|i| CMat::from_column_slice(n, n, k.vector(i).as_slice()))
        .collect())
}

/// `P⊥ X v` over the basis vectors `v` of `s`: zero iff `X s ⊆ s`.
fn preserves(x: &CMat, s: &Subspace) -> Vec<CVec> {
    (0..s.dim()).map(|j| s.quotient_project(&(x * s.vector(j)))).collect()
}

fn concat(parts: Vec<CVec>) -> CVec {
    let n = parts.iter().map(|p| p.len()).sum();
    CVec::from_iterator(n, parts.iter().flat_map(|p| p.iter().copied()))
}

/// `exp X` for a random traceless `X`.
pub fn random_sl<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let mut x = random_cmat(n, n, rng);
    let tr = x.trace() / c(n as f64);
    for i in 0..n {
        x[(i, i)] -= tr;
    }
    let r: f64 = rng.random_range(0.3..1.0);
    let norm = x.norm();
    expm(&(x * c(r / norm)))
}

/// `exp X` for a random Hamiltonian `X = Ωᵀ Sym`; preserves `ω`.
pub fn random_symplectic<R: Rng + ?Sized>(dim_q: usize, rng: &mut R) -> Result<CMat> {
    let omega = omega_matrix(dim_q)?;
    let m = random_cmat(dim_q, dim_q, rng);
    let sym = (&m + m.transpose()) * c(0.5);
    let x = omega.transpose() * sym;
    let r: f64 = rng.random_range(0.3..1.0);
    let norm = x.norm();
    Ok(expm(&(x * c(r / norm))))
}

pub fn random_symplectic_levi<R: Rng + ?Sized>(k: usize, m: usize, rng: &mut R) -> Result<GroupElement> {
    GroupElement::symplectic_levi(random_sl(k, rng), random_symplectic(2 * m, rng)?)
}

pub fn random_f4_levi<R: Rng + ?Sized>(rng: &mut R) -> Result<GroupElement> {
    let t = (random_c64(rng) * c(0.5)).exp();
    GroupElement::f4_levi(t, random_sl(3, rng), random_sl(2, rng))
}

/// `h₁` with a single random term `e′⊗q′*`.
pub fn random_h1<R: Rng + ?Sized>(rng: &mut R) -> Result<GroupElement> {
    GroupElement::f4_h1(vec![(random_cvec(3, rng), random_cvec(2, rng))])
}

/// Random element fixing the distinguished subspaces of a sub-cone: Levi
/// part from the exponential of the stabilizing subalgebra and, for F4, an
/// `h₁` term with `f(e′) ∈ R*` for all `f ∈ R′`.
pub fn stabilizer_element<R: Rng + ?Sized>(sub: &ConeModel, rng: &mut R) -> Result<GroupElement> {
    let (levi, h1) = stabilizer_parts(sub, rng)?;
    Ok(match h1 {
        Some(h1) => GroupElement::product(vec![levi, h1]),
        None => levi,
    })
}

/// Levi and `h₁` factors of [`stabilizer_element`].
pub(crate) fn stabilizer_parts<R: Rng + ?Sized>(
    sub: &ConeModel,
    rng: &mut R,
) -> Result<(GroupElement, Option<GroupElement>)> {
    if matches!(sub.kind(), ConeKind::Transformed { .. }) {
        return Err(Error::invalid("stabilizers are sampled for untransformed sub-cones"));
    }
    match sub.spaces() {
        Spaces::Symplectic { u, q } => {
            let k = u.ambient_dim();
            let n = q.ambient_dim();
            let omega = omega_matrix(n)?;
            let xa = lie_kernel(k, |x| concat(preserves(x, u)))?;
            let xs = lie_kernel(n, |x| {
                let ham = x.transpose() * &omega + &omega * x;
                let mut parts = preserves(x, q);
                parts.push(CVec::from_column_slice(ham.as_slice()));
                concat(parts)
            })?;
            let a = expm(&random_in_algebra(&xa, k, rng));
            let s = expm(&random_in_algebra(&xs, n, rng));
            Ok((GroupElement::symplectic_levi(a, s)?, None))
        }
        Spaces::F4 { e, f } => {
            // A R* ⊆ R*, A⁻ᵀ R′ ⊆ R′, tr A = 0
            let xa = lie_kernel(3, |x| {
                let mut parts = preserves(x, e);
                parts.extend(preserves(&x.transpose(), f));
                parts.push(CVec::from_element(1, x.trace()));
                concat(parts)
            })?;
            let a = expm(&random_in_algebra(&xa, 3, rng));
            let t = (random_c64(rng) * c(0.5)).exp();
            let levi = GroupElement::f4_levi(t, a, random_sl(2, rng))?;
            // e′ with R′ × e′ ⊆ R*
            let mut rows = CMat::zeros(3 * f.dim().max(1), 3);
            for j in 0..f.dim() {
                for i in 0..3 {
                    let img = e.quotient_project(&cross(&f.vector(j), &crate::linalg::unit(3, i)));
                    rows.view_mut((3 * j, i), (3, 1)).copy_from(&img);
                }
            }
            let ker = kernel(&rows, RANK_TOL)?;
            if ker.dim() == 0 {
                return Ok((levi, None));
            }
            let h1 = GroupElement::f4_h1(vec![(ker.sample(rng), random_cvec(2, rng))])?;
            Ok((levi, Some(h1)))
        }
        Spaces::Segre { .. } => Err(Error::invalid("no group action on the Segre baseline")),
    }
}

/// The ω-dual vector `v` of a hyperplane: `H = {x : ω(v, x) = 0}`.
fn omega_dual(h: &Subspace) -> Result<CVec> {
    let n = h.ambient_dim();
    if h.dim() + 1 != n {
        return Err(Error::invalid(format!("expected a hyperplane of C^{n}, got dimension {}", h.dim())));
    }
    let normal = h.complement()?.vector(0);
    // vᵀΩ x = n̄ᵀ x for all x  ⇔  Ωᵀ v = n̄
    let omega = omega_matrix(n)?;
    Ok(omega * normal.conjugate())
}

/// Symplectic basis `P` (`PᵀΩP = Ω`) whose first column is `v`.
fn symplectic_basis(v: &CVec) -> Result<CMat> {
    let n = v.len();
    let m = n / 2;
    let mut pool: Vec<CVec> = (0..n).map(|i| crate::linalg::unit(n, i)).collect();
    let mut p = CMat::zeros(n, n);
    let mut first = Some(v.clone());
    for i in 0..m {
        let x = match first.take() {
            Some(x) => x,
            None => {
                let (idx, _) = pool
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                    .ok_or_else(|| Error::Internal("symplectic basis pool exhausted".into()))?;
                let x = pool.swap_remove(idx);
                let nx = x.norm();
                x / c(nx)
            }
        };
        let (idx, w) = pool
            .iter()
            .enumerate()
            .map(|(j, y)| (j, symplectic_form(&x, y).expect("even dimension")))
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .ok_or_else(|| Error::Internal("symplectic basis pool exhausted".into()))?;
        if w.norm() < 1e-12 {
            return Err(Error::Internal("degenerate symplectic completion".into()));
        }
        let y = pool.swap_remove(idx) / w;
        p.set_column(i, &x);
        p.set_column(n - 1 - i, &y);
        // project the pool onto the ω-complement of span{x, y}
        pool = pool
            .into_iter()
            .map(|z| {
                let zy = symplectic_form(&z, &y).expect("even dimension");
                let zx = symplectic_form(&z, &x).expect("even dimension");
                &z - &x * zy + &y * zx
            })
            .filter(|z| z.norm() > 1e-10)
            .collect();
    }
    Ok(p)
}

/// A symplectic `S` with `S·Q_a = Q_a′`, built by completing the ω-duals
/// of the two hyperplanes to symplectic bases.
pub fn hyperplane_transport(qa: &Subspace, qa2: &Subspace) -> Result<CMat> {
    let n = qa.ambient_dim();
    if qa2.ambient_dim() != n || n % 2 == 1 {
        return Err(Error::invalid("hyperplanes must live in the same even-dimensional space"));
    }
    let v = omega_dual(qa)?;
    let v2 = omega_dual(qa2)?;
    if qa.equal_within(qa2, 1e-10) {
        return Ok(CMat::identity(n, n));
    }
    let p = symplectic_basis(&(&v / c(v.norm())))?;
    let p2 = symplectic_basis(&(&v2 / c(v2.norm())))?;
    let p_inv = p.try_inverse().ok_or_else(|| Error::Internal("singular symplectic basis".into()))?;
    Ok(p2 * p_inv)
}
