//! Dense complex linear algebra: SVD-based rank decisions and subspaces.
//!
//! Rank thresholds are `tol * max(1, largest singular value)`. A singular
//! value inside `(threshold / 10, threshold * 10)` makes the decision
//! unstable and is reported as [`Error::Degenerate`] instead of guessed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVec = DVector<C64>;
pub type CMat = DMatrix<C64>;

/// Default tolerance for rank and kernel decisions.
pub const RANK_TOL: f64 = 1e-8;
/// Default tolerance for comparing independently computed objects.
pub const COMPARE_TOL: f64 = 1e-6;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Complex standard normal sample, E|z|^2 = 1.
pub fn random_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_cvec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| random_c64(rng))
}

pub fn random_cmat<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_c64(rng))
}

/// Unit basis vector.
pub fn unit(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = c(1.0);
    v
}

pub fn hstack(cols: &[CVec], n: usize) -> CMat {
    let mut m = CMat::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

struct Decomp {
    u: CMat,
    s: Vec<f64>,
    v_t: CMat,
}

// faer's SVD is used instead of nalgebra's, whose complex SVD can lose
// accuracy on matrices with clustered singular values.
fn decompose(m: &CMat) -> Result<Decomp> {
    let a = faer::Mat::<C64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let svd = a.svd().map_err(|e| Error::Internal(format!("SVD failed: {e:?}")))?;
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    let k = m.nrows().min(m.ncols());
    Ok(Decomp {
        u: CMat::from_fn(m.nrows(), m.nrows(), |i, j| u[(i, j)]),
        s: (0..k).map(|i| s[i].re).collect(),
        v_t: CMat::from_fn(m.ncols(), m.ncols(), |i, j| v[(j, i)].conj()),
    })
}

/// Full SVD `m = U diag(s) Vᴴ`, singular values in nonincreasing order.
pub(crate) fn svd(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let d = decompose(m)?;
    Ok((d.u, d.s, d.v_t))
}

fn threshold(s: &[f64], tol: f64) -> f64 {
    let top = s.iter().copied().fold(0.0_f64, f64::max);
    tol * top.max(1.0)
}

fn split_rank(s: &[f64], tol: f64) -> Result<usize> {
    let thr = threshold(s, tol);
    let mut rank = 0;
    for &x in s {
        if x > thr / 10.0 && x < thr * 10.0 {
            return Err(Error::Degenerate { value: x, threshold: thr });
        }
        if x >= thr * 10.0 {
            rank += 1;
        }
    }
    Ok(rank)
}

/// Number of singular values above the threshold.
pub fn numerical_rank(m: &CMat, tol: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    split_rank(&decompose(m)?.s, tol)
}

/// Right null space of `m`.
pub fn kernel(m: &CMat, tol: f64) -> Result<Subspace> {
    let n = m.ncols();
    if n == 0 {
        return Ok(Subspace::zero(0, tol));
    }
    if m.nrows() == 0 {
        return Ok(Subspace::full(n, tol));
    }
    let d = decompose(m)?;
    let rank = split_rank(&d.s, tol)?;
    let cols: Vec<CVec> = (rank..n).map(|i| d.v_t.row(i).adjoint()).collect();
    debug_assert_eq!(cols.len(), n - rank);
    Ok(Subspace { basis: hstack(&cols, n), tol })
}

/// Minimum-norm least-squares solution of `m x = b`.
pub fn lstsq(m: &CMat, b: &CVec, tol: f64) -> Result<CVec> {
    if m.ncols() == 0 {
        return Ok(CVec::zeros(0));
    }
    let d = decompose(m)?;
    let thr = threshold(&d.s, tol);
    let mut x = CVec::zeros(m.ncols());
    for (i, &si) in d.s.iter().enumerate() {
        if si > thr {
            let coef = d.u.column(i).dotc(b) / si;
            x += d.v_t.row(i).adjoint() * coef;
        }
    }
    Ok(x)
}

/// A linear subspace of C^n stored as an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
    tol: f64,
}

impl Subspace {
    pub fn zero(n: usize, tol: f64) -> Self {
        Subspace { basis: CMat::zeros(n, 0), tol }
    }

    pub fn full(n: usize, tol: f64) -> Self {
        Subspace { basis: CMat::identity(n, n), tol }
    }

    /// Column space of `m`.
    pub fn column_space(m: &CMat, tol: f64) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() == 0 || n == 0 {
            return Ok(Subspace::zero(n, tol));
        }
        let d = decompose(m)?;
        let rank = split_rank(&d.s, tol)?;
        Ok(Subspace { basis: d.u.columns(0, rank).into_owned(), tol })
    }

    pub fn span(n: usize, vectors: &[CVec], tol: f64) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::invalid(format!("vector of length {} in C^{n}", v.len())));
        }
        Subspace::column_space(&hstack(vectors, n), tol)
    }

    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: CMat, tol: f64) -> Result<Self> {
        let gram = basis.adjoint() * &basis;
        let err = (gram - CMat::identity(basis.ncols(), basis.ncols())).norm();
        if err > tol.max(1e-12) {
            return Err(Error::invalid(format!("basis is not orthonormal (error {err:.2e})")));
        }
        Ok(Subspace { basis, tol })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn vector(&self, i: usize) -> CVec {
        self.basis.column(i).into_owned()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim() {
            return Err(Error::invalid(format!(
                "ambient mismatch: C^{n} against a subspace of C^{}",
                self.ambient_dim()
            )));
        }
        Ok(())
    }

    /// Coordinates of the orthogonal projection in this basis.
    pub fn coordinates(&self, v: &CVec) -> CVec {
        self.basis.adjoint() * v
    }

    pub fn project(&self, v: &CVec) -> CVec {
        &self.basis * self.coordinates(v)
    }

    /// Component of `v` orthogonal to the subspace.
    pub fn quotient_project(&self, v: &CVec) -> CVec {
        v - self.project(v)
    }

    pub fn residual(&self, v: &CVec) -> f64 {
        self.quotient_project(v).norm()
    }

    pub fn contains(&self, v: &CVec) -> bool {
        self.contains_within(v, self.tol)
    }

    /// Relative containment test: `|v - Pv| <= tol |v|`.
    pub fn contains_within(&self, v: &CVec, tol: f64) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        let n = v.norm();
        n == 0.0 || self.residual(v) <= tol * n
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: f64) -> bool {
        other.ambient_dim() == self.ambient_dim()
            && (0..other.dim()).all(|j| self.residual(&other.vector(j)) <= tol)
    }

    pub fn equal(&self, other: &Subspace) -> bool {
        self.equal_within(other, self.tol)
    }

    pub fn equal_within(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim()
            && self.contains_subspace(other, tol)
            && other.contains_subspace(self, tol)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other.ambient_dim())?;
        let mut m = CMat::zeros(self.ambient_dim(), self.dim() + other.dim());
        m.columns_mut(0, self.dim()).copy_from(&self.basis);
        m.columns_mut(self.dim(), other.dim()).copy_from(&other.basis);
        Subspace::column_space(&m, self.tol)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other.ambient_dim())?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.ambient_dim(), self.tol));
        }
        let mut m = CMat::zeros(self.ambient_dim(), a + b);
        m.columns_mut(0, a).copy_from(&self.basis);
        m.columns_mut(a, b).copy_from(&(-&other.basis));
        let k = kernel(&m, self.tol)?;
        let coeffs = k.basis.rows(0, a).into_owned();
        Subspace::column_space(&(&self.basis * coeffs), self.tol)
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Result<Subspace> {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            return Ok(Subspace::full(n, self.tol));
        }
        kernel(&self.basis.adjoint(), self.tol)
    }

    /// Image under the linear map `m`.
    pub fn image(&self, m: &CMat) -> Result<Subspace> {
        if m.ncols() != self.ambient_dim() {
            return Err(Error::invalid("map does not act on this ambient"));
        }
        Subspace::column_space(&(m * &self.basis), self.tol)
    }

    /// Unit vector with complex normal coordinates in the basis.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CVec {
        if self.dim() == 0 {
            return CVec::zeros(self.ambient_dim());
        }
        let v = &self.basis * random_cvec(self.dim(), rng);
        let n = v.norm();
        v / c(n)
    }
}
