//! Fibration probes: fibers over the base coordinate (`u` for the
//! symplectic family, `q` for F4), their dimension and span, the degree
//! split of the parametrization along base lines, and the candidate
//! components of the base locus of the second fundamental form.

use rand::Rng;

use super::{d_phi, ConeModel, ConePoint, Params, Spaces};
use crate::error::{Error, Result};
use crate::fd;
use crate::linalg::{c, kernel, numerical_rank, random_cvec, CMat, CVec, Subspace, C64, RANK_TOL};
use crate::tensor::{dot, outer, sym};

/// Number of fiber directions of each polynomial degree in the base
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeSplit {
    pub linear: usize,
    pub quadratic: usize,
    /// Directions of any other degree (expected to be zero).
    pub other: usize,
}

fn full_dims(model: &ConeModel) -> Vec<usize> {
    model.block_bases().iter().map(|b| b.nrows()).collect()
}

/// Base coordinate of the base cone corresponding to an ambient-side base
/// value of a transformed model.
fn pull_back_base(model: &ConeModel, base_value: &CVec) -> Result<CVec> {
    let (_, h) = model.base_and_h();
    match h {
        None => Ok(base_value.clone()),
        Some(h) => {
            let m = h.base_map(model.family(), base_value.len())?;
            let inv = m.try_inverse().ok_or_else(|| Error::Internal("singular base map".into()))?;
            Ok(inv * base_value)
        }
    }
}

/// Parameters with the base block set to `b`, one fiber block set to `x`
/// and the rest zero.
fn probe_params(model: &ConeModel, b: &CVec, fiber_block: usize, x: CVec) -> Params {
    let bb = model.base_block();
    let dims = full_dims(model);
    let blocks = (0..dims.len())
        .map(|i| {
            if i == bb {
                b.clone()
            } else if i == fiber_block {
                x.clone()
            } else {
                CVec::zeros(dims[i])
            }
        })
        .collect();
    Params::from_blocks(model.family(), blocks)
}

/// Linear span of the fiber of the cone over the base value `b`, given in
/// ambient-side coordinates (`u ∈ U`, `q ∈ Q`). Every fiber here is a
/// linear family in the fiber parameters, so the span is the image of the
/// fiber parametrization (with the F4 constraint dropped).
pub fn fiber_span(model: &ConeModel, base_value: &CVec) -> Result<Subspace> {
    let bases = model.block_bases();
    let bb = model.base_block();
    if base_value.len() != bases[bb].nrows() {
        return Err(Error::invalid("base value of the wrong dimension"));
    }
    let b = pull_back_base(model, base_value)?;
    let mut gens = Vec::new();
    for (j, basis) in bases.iter().enumerate() {
        if j == bb {
            continue;
        }
        for col in 0..basis.ncols() {
            let p = probe_params(model, &b, j, basis.column(col).into_owned());
            gens.push(model.eval_params(&p));
        }
    }
    Subspace::span(model.ambient().total_dim(), &gens, RANK_TOL)
}

/// Dimension of the fiber through `β` of the projection to the base
/// coordinate, as the rank of the Jacobian in the fiber directions.
pub fn fiber_dimension(model: &ConeModel, beta: &ConePoint) -> Result<usize> {
    model.check_point(beta)?;
    let z = model.params_to_local(&beta.params)?;
    let p = z.len();
    let f = |x: &CVec| model.eval_local(x);
    let h = super::tangent::fd_step(&z);
    let j = fd::jacobian_re_im(&f, &z, h);
    let mut rows: Vec<CVec> = Vec::new();
    for i in model.local_ranges()[model.base_block()].clone() {
        rows.push(crate::linalg::unit(2 * p, i));
        rows.push(crate::linalg::unit(2 * p, p + i));
    }
    if model.constraint_local(&z).is_some() {
        let g = |x: &CVec| model.constraint_local(x).expect("constrained family");
        let grad = fd::gradient(&g, &z, h);
        let s = grad.norm();
        if s > 0.0 {
            rows.push(CVec::from_fn(2 * p, |i, _| {
                if i < p {
                    grad[i] / c(s)
                } else {
                    grad[i - p] * C64::i() / c(s)
                }
            }));
        }
    }
    let cmat = CMat::from_fn(rows.len(), 2 * p, |r, col| rows[r][col]);
    let k = kernel(&cmat, RANK_TOL)?;
    numerical_rank(&(&j * k.basis()), RANK_TOL)
}

/// Degree of a polynomial curve sampled at `t = 0, 1, 2, 3`, read off from
/// its forward differences.
fn poly_degree(samples: &[CVec]) -> usize {
    let mut diffs: Vec<Vec<CVec>> = vec![samples.to_vec()];
    for d in 1..samples.len() {
        let prev = &diffs[d - 1];
        diffs.push(prev.windows(2).map(|w| &w[1] - &w[0]).collect());
    }
    let scale = samples.iter().map(|s| s.norm()).fold(0.0, f64::max).max(1e-300);
    (0..samples.len())
        .rev()
        .find(|&d| diffs[d].iter().any(|x| x.norm() > 1e-9 * scale))
        .unwrap_or(0)
}

/// Degree of the parametrization in the base coordinate along a random
/// base line `b₀ + t b₁`, per fiber basis direction.
pub fn fiber_degree_split<R: Rng + ?Sized>(model: &ConeModel, rng: &mut R) -> Result<DegreeSplit> {
    let bases = model.block_bases();
    let bb = model.base_block();
    let b0 = &bases[bb] * random_cvec(bases[bb].ncols(), rng);
    let b1 = &bases[bb] * random_cvec(bases[bb].ncols(), rng);
    let mut split = DegreeSplit { linear: 0, quadratic: 0, other: 0 };
    for (j, basis) in bases.iter().enumerate() {
        if j == bb {
            continue;
        }
        for col in 0..basis.ncols() {
            let samples: Vec<CVec> = (0..4)
                .map(|t| {
                    let b = &b0 + &b1 * c(t as f64);
                    model.eval_params(&probe_params(model, &b, j, basis.column(col).into_owned()))
                })
                .collect();
            match poly_degree(&samples) {
                1 => split.linear += 1,
                2 => split.quadratic += 1,
                _ => split.other += 1,
            }
        }
    }
    Ok(split)
}

/// Candidate linear components of the base locus `{v : σ(v,v) = 0}` of
/// the full cone's form restricted to the tangent space of `model` at `β`:
///
/// * symplectic: `{u′⊗q + 2c u∘u′ : u′ ∈ U′}` and `u⊗Q′ + ℂu²`;
/// * F4: `{e′⊗q : e′ ∈ R*, ⟨e′,f⟩ = 0}`, `{e⊗q′ + f⊗2q∘q′}` and
///   `{f′⊗q² : f′ ∈ R′, ⟨e,f′⟩ = 0}`;
/// * Segre: `U′⊗w` and `u⊗W′`.
///
/// For a transformed model the candidates of the base cone are mapped by
/// the group element.
pub fn base_locus_candidates(model: &ConeModel, beta: &ConePoint) -> Result<Vec<Subspace>> {
    model.check_point(beta)?;
    let (base, h) = model.base_and_h();
    let n = model.ambient().total_dim();
    let p = &beta.params;
    let span = |gens: Vec<CVec>| Subspace::span(n, &gens, RANK_TOL);
    let mut out = Vec::new();
    match (&base.spaces, p) {
        (Spaces::Segre { u: us, w: ws }, Params::Segre { u, w }) => {
            out.push(span((0..us.dim()).map(|j| outer(&us.vector(j), w)).collect())?);
            out.push(span((0..ws.dim()).map(|j| outer(u, &ws.vector(j))).collect())?);
        }
        (Spaces::Symplectic { u: us, q: qs }, Params::Symplectic { u, q, .. }) => {
            let zu = CVec::zeros(u.len());
            let zq = CVec::zeros(q.len());
            let first = (0..us.dim())
                .map(|j| d_phi(p, &Params::Symplectic { u: us.vector(j), q: zq.clone(), c: c(0.0) }))
                .collect();
            out.push(span(first)?);
            let mut second: Vec<CVec> = (0..qs.dim())
                .map(|j| d_phi(p, &Params::Symplectic { u: zu.clone(), q: qs.vector(j), c: c(0.0) }))
                .collect();
            second.push(d_phi(p, &Params::Symplectic { u: zu, q: zq, c: c(1.0) }));
            out.push(span(second)?);
        }
        (Spaces::F4 { e: es, f: fs }, Params::F4 { e, f, q }) => {
            let pad = |g1: CVec, g2: CVec| {
                CVec::from_iterator(
                    n,
                    g1.iter().chain(g2.iter()).copied().chain(std::iter::repeat_n(c(0.0), 5)),
                )
            };
            let es_f = restrict(es, f)?;
            out.push(span(
                (0..es_f.dim()).map(|j| pad(outer(&es_f.vector(j), q), CVec::zeros(9))).collect(),
            )?);
            let mid = (0..2)
                .map(|j| {
                    let dq = crate::linalg::unit(2, j);
                    pad(outer(e, &dq), outer(f, &(sym(q, &dq) * c(2.0))))
                })
                .collect();
            out.push(span(mid)?);
            let fs_e = restrict(fs, e)?;
            out.push(span(
                (0..fs_e.dim())
                    .map(|j| pad(CVec::zeros(6), outer(&fs_e.vector(j), &sym(q, q))))
                    .collect(),
            )?);
        }
        _ => return Err(Error::invalid("parameters of the wrong family")),
    }
    match h {
        None => Ok(out),
        Some(h) => {
            let m = h.matrix(model.ambient())?;
            out.iter().map(|s| s.image(&m)).collect()
        }
    }
}

/// `{x ∈ s : ⟨x, y⟩ = 0}`.
fn restrict(s: &Subspace, y: &CVec) -> Result<Subspace> {
    let scale = y.norm();
    if scale == 0.0 {
        return Ok(s.clone());
    }
    let row = CMat::from_fn(1, s.dim(), |_, j| dot(&s.vector(j), y) / c(scale));
    let k = kernel(&row, RANK_TOL)?;
    Subspace::column_space(&(s.basis() * k.basis()), RANK_TOL)
}
