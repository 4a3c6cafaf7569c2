//! Tensor, symmetric and wedge constructions on coordinate vectors.
//!
//! `S²V` uses coordinates `(i, j)`, `i <= j`, in lexicographic order, and
//! `(u∘v)_ij = (u_i v_j + u_j v_i) / 2`, so `u∘u` has coordinates `u_i u_j`.

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec, C64};

pub fn s2_dim(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Flat index of the pair `(i, j)`; the order of the arguments is irrelevant.
pub fn s2_index(i: usize, j: usize, k: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // pairs whose first index is below i, then the offset within row i
    i * k - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Pairs `(i, j)` in coordinate order.
pub fn s2_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(s2_dim(k));
    for i in 0..k {
        for j in i..k {
            out.push((i, j));
        }
    }
    out
}

pub(crate) fn sym(u: &CVec, v: &CVec) -> CVec {
    let k = u.len();
    let mut out = CVec::zeros(s2_dim(k));
    for (idx, (i, j)) in s2_pairs(k).into_iter().enumerate() {
        out[idx] = (u[i] * v[j] + u[j] * v[i]) * 0.5;
    }
    out
}

/// The symmetric product `u∘v`.
pub fn sym_square(u: &CVec, v: &CVec) -> Result<CVec> {
    if u.len() != v.len() {
        return Err(Error::invalid(format!("sym_square of lengths {} and {}", u.len(), v.len())));
    }
    Ok(sym(u, v))
}

/// Symmetric matrix with `M_ij = M_ji = s_ij`; `u∘u` maps to `u uᵀ`.
pub fn sym_to_matrix(s: &CVec, k: usize) -> CMat {
    let mut m = CMat::zeros(k, k);
    for (idx, (i, j)) in s2_pairs(k).into_iter().enumerate() {
        m[(i, j)] = s[idx];
        m[(j, i)] = s[idx];
    }
    m
}

pub fn sym_from_matrix(m: &CMat) -> CVec {
    let k = m.nrows();
    let mut s = CVec::zeros(s2_dim(k));
    for (idx, (i, j)) in s2_pairs(k).into_iter().enumerate() {
        s[idx] = (m[(i, j)] + m[(j, i)]) * 0.5;
    }
    s
}

/// Matrix of the induced map `u∘v ↦ (Bu)∘(Bv)` on `S²`.
pub fn s2_map(b: &CMat) -> CMat {
    let k = b.nrows();
    let pairs = s2_pairs(k);
    let mut out = CMat::zeros(pairs.len(), pairs.len());
    for (col, &(i, j)) in pairs.iter().enumerate() {
        // the coordinate vector of (i, j) is e_i∘e_i, or 2 e_i∘e_j off the diagonal
        let w = if i == j { 1.0 } else { 2.0 };
        let img = sym(&b.column(i).into_owned(), &b.column(j).into_owned()) * c(w);
        out.set_column(col, &img);
    }
    out
}

/// Flat row-major coordinates of `u⊗v`.
pub fn outer(u: &CVec, v: &CVec) -> CVec {
    let mut out = CVec::zeros(u.len() * v.len());
    for i in 0..u.len() {
        for j in 0..v.len() {
            out[i * v.len() + j] = u[i] * v[j];
        }
    }
    out
}

/// Reshape flat `U⊗V` coordinates into a `dim U x dim V` matrix.
pub fn unflatten(x: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |i, j| x[i * cols + j])
}

pub fn flatten(m: &CMat) -> CVec {
    let (r, cl) = m.shape();
    CVec::from_fn(r * cl, |idx, _| m[(idx / cl, idx % cl)])
}

pub(crate) fn cross(a: &CVec, b: &CVec) -> CVec {
    CVec::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// `∧²E* → E` through the Levi-Civita symbol.
pub fn wedge_to_e(f1: &CVec, f2: &CVec) -> Result<CVec> {
    if f1.len() != 3 || f2.len() != 3 {
        return Err(Error::invalid("wedge_to_e needs vectors of length 3"));
    }
    Ok(cross(f1, f2))
}

/// Contraction `f(e′)` of `f ∈ ∧²E* ≅ E` with `e′ ∈ E`, as a covector.
///
/// For `f = f1∧f2` this is `⟨f1,e′⟩f2 − ⟨f2,e′⟩f1`, which in the cross
/// product picture is `f × e′`.
pub fn wedge_contract(f: &CVec, e_prime: &CVec) -> Result<CVec> {
    if f.len() != 3 || e_prime.len() != 3 {
        return Err(Error::invalid("wedge_contract needs vectors of length 3"));
    }
    Ok(cross(f, e_prime))
}

/// Evaluation `⟨e*, f⟩ = Σ e*_i f_i` (bilinear, no conjugation).
pub fn pairing(e: &CVec, f: &CVec) -> Result<C64> {
    if e.len() != f.len() {
        return Err(Error::invalid(format!("pairing of lengths {} and {}", e.len(), f.len())));
    }
    Ok(dot(e, f))
}

pub(crate) fn dot(e: &CVec, f: &CVec) -> C64 {
    e.iter().zip(f.iter()).map(|(a, b)| a * b).sum()
}

/// Gram matrix of ω: basis vector `i` pairs with `n - 1 - i` (0-based),
/// `ω(e_i, e_{n-1-i}) = 1` for `i < n/2`.
pub fn omega_matrix(n: usize) -> Result<CMat> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::invalid(format!("symplectic form needs even dimension, got {n}")));
    }
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = if i < n / 2 { c(1.0) } else { c(-1.0) };
    }
    Ok(m)
}

pub fn symplectic_form(q: &CVec, q2: &CVec) -> Result<C64> {
    if q.len() != q2.len() {
        return Err(Error::invalid("symplectic_form of vectors with different lengths"));
    }
    let om = omega_matrix(q.len())?;
    Ok((q.transpose() * om * q2)[(0, 0)])
}
