//! The verification suites. Each suite is a list of cases; a case owns an
//! RNG stream derived from the seed, the suite's canonical index and the
//! case index, so parallel and serial runs agree.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use vmrt_core::cones::roots::f4_root_grading;
use vmrt_core::cones::schubert::{SchubertClass, SchubertShape};
use vmrt_core::cones::{
    fiber_degree_split, fiber_dimension, fiber_span, sample_point, tangent_space_closed_form,
    tangent_space_jacobian,
};
use vmrt_core::group::{
    levi_equivalence_forward, random_f4_levi, random_symplectic_levi,
    tangency_implies_equality_experiment, IsotropySampler,
};
use vmrt_core::linalg::random_cvec;
use vmrt_core::sff::{base_locus_report, check_pair_nondegenerate, sff_closed_form, sff_oracle};
use vmrt_core::tensor::{outer, pairing, sym_square};
use vmrt_core::{AmbientVector, CVec, ConeModel, Family, Stratum};

use crate::config::{ScenarioConfig, Suite};
use crate::report::{Bound, CaseParams, CaseReport, SuiteReport};

type CaseFn = Box<dyn Fn(&mut ChaCha8Rng, &mut CaseReport) -> vmrt_core::Result<()> + Send + Sync>;

struct Case {
    params: CaseParams,
    stratum: Option<Stratum>,
    run: CaseFn,
}

impl Case {
    fn new(
        params: CaseParams,
        stratum: Option<Stratum>,
        run: impl Fn(&mut ChaCha8Rng, &mut CaseReport) -> vmrt_core::Result<()> + Send + Sync + 'static,
    ) -> Self {
        Case { params, stratum, run: Box::new(run) }
    }
}

/// The RNG of case `case` of `suite`.
pub fn case_rng(seed: u64, suite: Suite, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.index() << 32) | case as u64);
    rng
}

fn params(model: &str, trials: usize) -> CaseParams {
    CaseParams { model: model.to_owned(), trials, ..CaseParams::default() }
}

fn kl_params(model: &str, k: usize, l: usize, a: Option<usize>, trials: usize) -> CaseParams {
    CaseParams { model: model.to_owned(), k: Some(k), l: Some(l), a, trials, variant: None }
}

fn run_cases(cfg: &ScenarioConfig, suite: Suite, cases: Vec<Case>) -> SuiteReport {
    let start = Instant::now();
    let reports: Vec<CaseReport> = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| {
            let mut rng = case_rng(cfg.seed, suite, i);
            let mut rep = CaseReport::new(case.params.clone(), case.stratum.map(|s| s.name()));
            if let Err(e) = (case.run)(&mut rng, &mut rep) {
                rep.error(&e);
            }
            rep
        })
        .collect();
    SuiteReport::from_cases(suite.name(), reports, start.elapsed())
}

pub fn run_suite(cfg: &ScenarioConfig, suite: Suite) -> SuiteReport {
    let cases = match suite {
        Suite::SffAgreement => sff_agreement(cfg),
        Suite::Nondegeneracy => nondegeneracy(cfg),
        Suite::BaseLocus => base_locus(cfg),
        Suite::Tangency => tangency(cfg),
        Suite::LeviForward => levi_forward(cfg),
        Suite::Classifier => vec![classifier(cfg)],
        Suite::F4Grading => vec![f4_grading()],
        Suite::ConeSanity => cone_sanity(cfg),
    };
    run_cases(cfg, suite, cases)
}

fn max_abs(v: &CVec) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Largest componentwise difference relative to the larger of 1 and the
/// largest reference component.
pub fn rel_error(got: &CVec, want: &CVec) -> f64 {
    max_abs(&(got - want)) / max_abs(want).max(1.0)
}

fn sff_agreement(cfg: &ScenarioConfig) -> Vec<Case> {
    let trials = cfg.trials.sff;
    let tol = cfg.tolerances.sff;
    let mut targets: Vec<(CaseParams, ConeModel)> = cfg
        .pairs
        .iter()
        .map(|&(k, l)| {
            (kl_params("symplectic", k, l, None, trials), ConeModel::symplectic(k, l).expect("validated grid"))
        })
        .collect();
    targets.push((params("f4", trials), ConeModel::f4()));
    let mut cases = Vec::new();
    for (p, model) in targets {
        for s in Stratum::BOTH {
            let model = model.clone();
            cases.push(Case::new(p.clone(), Some(s), move |rng, rep| {
                let mut worst: f64 = 0.0;
                let mut largest: f64 = 0.0;
                for _ in 0..trials {
                    let beta = sample_point(&model, s, rng)?;
                    let sigma = sff_closed_form(&model, &beta)?;
                    let xi = sigma.tangent.sample(rng);
                    let zeta = sigma.tangent.sample(rng);
                    let got = sigma.eval(&xi, &zeta)?;
                    let want = sff_oracle(&model, &beta, &xi, &zeta)?;
                    worst = worst.max(rel_error(&got, &want));
                    largest = largest.max(max_abs(&want));
                }
                rep.metric("max_rel_error", worst, Bound::Le(tol));
                rep.metric("max_abs_value", largest, Bound::Info);
                Ok(())
            }));
        }
    }
    cases
}

/// The sub-cone and whether the pair is expected to be nondegenerate.
struct PairSpec {
    params: CaseParams,
    ambient: ConeModel,
    sub: ConeModel,
    nondegenerate: bool,
    note: Option<&'static str>,
}

fn pair_specs(cfg: &ScenarioConfig, trials: usize) -> Vec<PairSpec> {
    let mut out = Vec::new();
    for (k, l, a) in cfg.triples() {
        let linear = a + 1 == k;
        out.push(PairSpec {
            params: kl_params("odd-symplectic", k, l, Some(a), trials),
            ambient: ConeModel::symplectic(k, l).expect("validated grid"),
            sub: ConeModel::odd_symplectic(k, l, a).expect("validated grid"),
            nondegenerate: !linear,
            note: linear.then_some("U_a is a line, so the sub-cone is a linear space and its kernel exceeds Cβ"),
        });
    }
    out.push(PairSpec {
        params: params("f4-b3", trials),
        ambient: ConeModel::f4(),
        sub: ConeModel::f4_b3_default(),
        nondegenerate: true,
        note: None,
    });
    out.push(PairSpec {
        params: params("f4-c2", trials),
        ambient: ConeModel::f4(),
        sub: ConeModel::f4_c2_default(),
        nondegenerate: true,
        note: None,
    });
    out
}

fn nondegeneracy(cfg: &ScenarioConfig) -> Vec<Case> {
    let trials = cfg.trials.nondegeneracy;
    let tol = cfg.tolerances.angle;
    let mut cases = Vec::new();
    for spec in pair_specs(cfg, trials) {
        for s in Stratum::BOTH {
            let (amb, sub, expect, note) = (spec.ambient.clone(), spec.sub.clone(), spec.nondegenerate, spec.note);
            cases.push(Case::new(spec.params.clone(), Some(s), move |rng, rep| {
                pair_case(&amb, &sub, s, trials, expect, tol, rng, rep)?;
                if let Some(n) = note {
                    rep.note(n);
                }
                Ok(())
            }));
        }
    }
    let segre = ConeModel::segre(3, 3).expect("static dims");
    let line = ConeModel::segre_line(3, 3).expect("static dims");
    let mut p = params("segre-line", trials);
    p.variant = Some("negative control".into());
    cases.push(Case::new(p, None, move |rng, rep| {
        pair_case(&segre, &line, Stratum::Generic, trials, false, tol, rng, rep)
    }));
    cases
}

#[allow(clippy::too_many_arguments)]
fn pair_case(
    amb: &ConeModel,
    sub: &ConeModel,
    s: Stratum,
    trials: usize,
    expect_nondegenerate: bool,
    tol: f64,
    rng: &mut ChaCha8Rng,
    rep: &mut CaseReport,
) -> vmrt_core::Result<()> {
    let mut dmin = usize::MAX;
    let mut dmax = 0;
    let mut worst_angle: f64 = 0.0;
    let mut hits = 0;
    for _ in 0..trials {
        let beta = sample_point(sub, s, rng)?;
        let r = check_pair_nondegenerate(amb, sub, &beta)?;
        dmin = dmin.min(r.kernel_dim);
        dmax = dmax.max(r.kernel_dim);
        worst_angle = worst_angle.max(r.angle);
        let nondeg = r.kernel_dim == 1 && r.angle < tol;
        if nondeg == expect_nondegenerate {
            hits += 1;
        }
    }
    if expect_nondegenerate {
        rep.count("nondegenerate", hits, Bound::Eq(trials as f64));
        rep.count("kernel_dim_max", dmax, Bound::Eq(1.0));
        rep.metric("max_angle", worst_angle, Bound::Le(tol));
    } else {
        rep.count("degenerate", hits, Bound::Eq(trials as f64));
        rep.count("kernel_dim_min", dmin, Bound::Gt(1.0));
        rep.count("kernel_dim_max", dmax, Bound::Info);
    }
    Ok(())
}

fn base_locus(cfg: &ScenarioConfig) -> Vec<Case> {
    let trials = cfg.trials.base_locus;
    let probes = cfg.trials.probes;
    let frac = cfg.tolerances.off_nonnull_fraction;
    // expected component counts per stratum; `None` checks only that the
    // count is the same at every sampled point
    let mut targets: Vec<(CaseParams, ConeModel, [Option<usize>; 2], bool)> = cfg
        .triples()
        .into_iter()
        .map(|(k, l, a)| {
            let linear_space = a + 1 == k;
            let expected = if linear_space { [None, None] } else { [Some(2), Some(1)] };
            (
                kl_params("odd-symplectic", k, l, Some(a), trials),
                ConeModel::odd_symplectic(k, l, a).expect("validated grid"),
                expected,
                linear_space,
            )
        })
        .collect();
    targets.push((params("f4-b3", trials), ConeModel::f4_b3_default(), [Some(3), None], false));
    targets.push((params("f4-c2", trials), ConeModel::f4_c2_default(), [None, None], false));
    let mut cases = Vec::new();
    for (p, model, expected, linear_space) in targets {
        for (s, expect) in Stratum::BOTH.into_iter().zip(expected) {
            let model = model.clone();
            cases.push(Case::new(p.clone(), Some(s), move |rng, rep| {
                let (mut cmin, mut cmax, mut mmin, mut mmax) = (usize::MAX, 0, usize::MAX, 0);
                let (mut off, mut nonnull) = (0, 0);
                let mut hits = 0;
                for _ in 0..trials {
                    let beta = sample_point(&model, s, rng)?;
                    let r = base_locus_report(&model, &beta, probes, rng)?;
                    cmin = cmin.min(r.component_count);
                    cmax = cmax.max(r.component_count);
                    mmin = mmin.min(r.maximal_components);
                    mmax = mmax.max(r.maximal_components);
                    off += r.off_probes;
                    nonnull += r.off_nonnull;
                    if expect.is_none_or(|e| e == r.component_count) {
                        hits += 1;
                    }
                }
                match expect {
                    Some(e) => {
                        rep.count("matching_points", hits, Bound::Eq(trials as f64));
                        rep.count("component_count_min", cmin, Bound::Eq(e as f64));
                        rep.count("component_count_max", cmax, Bound::Eq(e as f64));
                    }
                    None => {
                        rep.count("component_count_min", cmin, Bound::Info);
                        rep.count("component_count_spread", cmax - cmin, Bound::Eq(0.0));
                    }
                }
                if linear_space {
                    // σ vanishes on the whole tangent space of a linear sub-cone
                    rep.count("maximal_components_max", mmax, Bound::Eq(1.0));
                    rep.note("U_a is a line: the sub-cone is linear and its tangent space is one null component");
                } else {
                    rep.count("maximal_components_min", mmin, Bound::Info);
                    rep.count("maximal_components_max", mmax, Bound::Info);
                }
                rep.count("off_probes", off, Bound::Info);
                if off > 0 {
                    rep.metric("off_nonnull_fraction", nonnull as f64 / off as f64, Bound::Ge(frac));
                } else {
                    rep.note("the tangent space of the sub-cone is covered by the candidates; no off-candidate probes");
                }
                Ok(())
            }));
        }
    }
    cases
}

fn tangency(cfg: &ScenarioConfig) -> Vec<Case> {
    let trials = cfg.trials.tangency;
    let mut targets: Vec<(CaseParams, ConeModel)> = cfg
        .triples()
        .into_iter()
        .map(|(k, l, a)| {
            (
                kl_params("odd-symplectic", k, l, Some(a), trials),
                ConeModel::odd_symplectic(k, l, a).expect("validated grid"),
            )
        })
        .collect();
    targets.push((params("f4-b3", trials), ConeModel::f4_b3_default()));
    targets.push((params("f4-c2", trials), ConeModel::f4_c2_default()));
    let mut cases = Vec::new();
    for (p, model) in targets {
        for (sampler, name) in [(IsotropySampler::Stabilizer, "stabilizer"), (IsotropySampler::Mixed, "mixed")] {
            let mut p = p.clone();
            p.variant = Some(name.into());
            let model = model.clone();
            cases.push(Case::new(p, None, move |rng, rep| {
                let r = tangency_implies_equality_experiment(&model, sampler, trials, rng)?;
                rep.count("found", r.found, Bound::Info);
                rep.count("attempts", r.attempts, Bound::Info);
                rep.count("points", r.points, Bound::Info);
                rep.count("tangent", r.tangent, Bound::Info);
                rep.count("tangent_violations", r.tangent_violations, Bound::Eq(0.0));
                if matches!(sampler, IsotropySampler::Stabilizer) {
                    rep.count("found_shortfall", trials - r.found, Bound::Eq(0.0));
                    rep.count("tangent_equal_shortfall", r.points - r.tangent_equal, Bound::Eq(0.0));
                } else {
                    rep.count("nontangent", r.nontangent, Bound::Info);
                }
                if r.section_probes > 0 {
                    rep.count("section_points", r.section_points, Bound::Gt(0.0));
                    rep.count("section_tangent", r.section_tangent, Bound::Eq(0.0));
                }
                Ok(())
            }));
        }
    }
    cases
}

fn levi_forward(cfg: &ScenarioConfig) -> Vec<Case> {
    let samples = cfg.trials.levi;
    let mut cases = Vec::new();
    for (k, l, a) in cfg.triples() {
        let model = ConeModel::odd_symplectic(k, l, a).expect("validated grid");
        cases.push(Case::new(kl_params("odd-symplectic", k, l, Some(a), samples), None, move |rng, rep| {
            let h = random_symplectic_levi(k, l - k, rng)?;
            levi_case(&model, &h, samples, rng, rep)
        }));
    }
    for (name, model) in [("f4-b3", ConeModel::f4_b3_default()), ("f4-c2", ConeModel::f4_c2_default())] {
        cases.push(Case::new(params(name, samples), None, move |rng, rep| {
            let h = random_f4_levi(rng)?;
            levi_case(&model, &h, samples, rng, rep)
        }));
    }
    cases
}

fn levi_case(
    model: &ConeModel,
    h: &vmrt_core::GroupElement,
    samples: usize,
    rng: &mut ChaCha8Rng,
    rep: &mut CaseReport,
) -> vmrt_core::Result<()> {
    let r = levi_equivalence_forward(model, h, samples, rng)?;
    rep.count("on_ambient", r.on_ambient, Bound::Eq(r.samples as f64));
    rep.count("preserved", r.preserved() as usize, Bound::Eq(1.0));
    rep.count("split_linear", r.degree_split.1.linear, Bound::Eq(r.degree_split.0.linear as f64));
    rep.count("split_quadratic", r.degree_split.1.quadratic, Bound::Eq(r.degree_split.0.quadratic as f64));
    for st in &r.strata {
        rep.note(format!(
            "{}: fiber dims {:?} -> {:?}, component counts {:?} -> {:?}",
            st.stratum.name(),
            st.fiber_dims.0,
            st.fiber_dims.1,
            st.component_counts.0,
            st.component_counts.1
        ));
    }
    Ok(())
}

/// Class of a shape read directly off the three clauses. The linear and
/// odd symplectic clauses overlap at `a = k - 1, b = 2ℓ - k`; the linear
/// reading is taken there.
pub fn classifier_table(k: usize, l: usize, a: usize, b: usize) -> SchubertClass {
    let clause1 = a < k && ((k < b && b <= l) || b == 2 * l - a);
    let clause3 = a + 1 == k && l < b && b <= 2 * l - k;
    let clause2 = a < k && b + a + 1 == 2 * l;
    if clause1 {
        SchubertClass::HomogeneousSubdiagram
    } else if clause3 {
        SchubertClass::LinearSpace { dim: b - k }
    } else if clause2 {
        SchubertClass::OddSymplectic { rank: l - 1, marks: (k - a, k - a - 1) }
    } else {
        SchubertClass::NotSmoothListed
    }
}

fn classifier(cfg: &ScenarioConfig) -> Case {
    let max_l = cfg.trials.classifier_max_l;
    let mut p = params("schubert-shapes", 1);
    p.l = Some(max_l);
    Case::new(p, None, move |_, rep| {
        let shapes = SchubertShape::enumerate(max_l);
        let mut mismatches = 0;
        let mut counts = [0usize; 4];
        for s in &shapes {
            let got = s.classify();
            if got != classifier_table(s.k, s.l, s.a, s.b) {
                mismatches += 1;
                rep.note(format!("({}, {}, {}, {}): {}", s.k, s.l, s.a, s.b, got.label()));
            }
            counts[match got {
                SchubertClass::HomogeneousSubdiagram => 0,
                SchubertClass::OddSymplectic { .. } => 1,
                SchubertClass::LinearSpace { .. } => 2,
                SchubertClass::NotSmoothListed => 3,
            }] += 1;
        }
        rep.count("shapes", shapes.len(), Bound::Gt(0.0));
        rep.count("mismatches", mismatches, Bound::Eq(0.0));
        rep.count("homogeneous", counts[0], Bound::Info);
        rep.count("odd_symplectic", counts[1], Bound::Info);
        rep.count("linear", counts[2], Bound::Info);
        rep.count("not_listed", counts[3], Bound::Info);
        Ok(())
    })
}

fn f4_grading() -> Case {
    Case::new(params("f4", 1), None, |_, rep| {
        let g = f4_root_grading();
        for (level, want) in [(0, 12), (1, 6), (2, 9), (3, 2), (4, 3)] {
            let d = g.dims.get(&level).copied().unwrap_or(0);
            rep.count(&format!("dim_g{level}"), d, Bound::Eq(want as f64));
        }
        let asym = (1..=4).filter(|l| g.dims.get(l) != g.dims.get(&-l)).count();
        rep.count("asymmetric_levels", asym, Bound::Eq(0.0));
        rep.count("total_dim", g.total_dim(), Bound::Eq(52.0));
        rep.count("roots", g.num_roots, Bound::Eq(48.0));
        rep.metric("c1", g.c1 as f64, Bound::Eq(7.0));
        Ok(())
    })
}

/// Expected tangent and fiber dimensions of a model.
struct Shape {
    tangent: usize,
    fiber: usize,
    split: Option<(usize, usize)>,
    /// The cone is a linear subspace, so sums of points stay on it.
    linear: bool,
}

fn cone_sanity(cfg: &ScenarioConfig) -> Vec<Case> {
    let trials = cfg.trials.cone_sanity;
    let mut targets: Vec<(CaseParams, ConeModel, Shape)> = Vec::new();
    targets.push((
        params("segre(2,3)", trials),
        ConeModel::segre(2, 3).expect("static dims"),
        Shape { tangent: 4, fiber: 3, split: None, linear: false },
    ));
    for &(k, l) in &cfg.pairs {
        let m = l - k;
        targets.push((
            kl_params("symplectic", k, l, None, trials),
            ConeModel::symplectic(k, l).expect("validated grid"),
            Shape { tangent: k + 2 * m, fiber: 2 * m + 1, split: None, linear: false },
        ));
    }
    for (k, l, a) in cfg.triples() {
        let m = l - k;
        targets.push((
            kl_params("odd-symplectic", k, l, Some(a), trials),
            ConeModel::odd_symplectic(k, l, a).expect("validated grid"),
            Shape { tangent: k - a + 2 * m - 1, fiber: 2 * m, split: None, linear: a + 1 == k },
        ));
    }
    targets.push((params("f4", trials), ConeModel::f4(), Shape { tangent: 6, fiber: 5, split: None, linear: false }));
    targets.push((
        params("f4-b3", trials),
        ConeModel::f4_b3_default(),
        Shape { tangent: 4, fiber: 3, split: Some((1, 2)), linear: false },
    ));
    targets.push((
        params("f4-c2", trials),
        ConeModel::f4_c2_default(),
        Shape { tangent: 3, fiber: 2, split: Some((1, 1)), linear: false },
    ));
    let mut cases = Vec::new();
    for (p, model, shape) in targets {
        let strata: Vec<Stratum> =
            if model.family() == Family::Segre { vec![Stratum::Generic] } else { Stratum::BOTH.to_vec() };
        let model = std::sync::Arc::new(model);
        let shape = std::sync::Arc::new(shape);
        for s in strata {
            let (model, shape) = (model.clone(), shape.clone());
            let stratum = (model.family() != Family::Segre).then_some(s);
            cases.push(Case::new(p.clone(), stratum, move |rng, rep| sanity_case(&model, &shape, s, trials, rng, rep)));
        }
    }
    cases
}

fn sanity_case(
    model: &ConeModel,
    shape: &Shape,
    s: Stratum,
    trials: usize,
    rng: &mut ChaCha8Rng,
    rep: &mut CaseReport,
) -> vmrt_core::Result<()> {
    let (mut members, mut dim_ok, mut jac_ok, mut fiber_ok, mut sums_ok) = (0, 0, 0, 0, 0);
    let mut split_ok = 0;
    for _ in 0..trials {
        let beta = sample_point(model, s, rng)?;
        members += model.membership(&beta.coords, 1e-8)? as usize;
        let t = tangent_space_closed_form(model, &beta)?;
        dim_ok += (t.dim() == shape.tangent) as usize;
        jac_ok += tangent_space_jacobian(model, &beta)?.equal_within(&t, 1e-6) as usize;
        fiber_ok += (fiber_dimension(model, &beta)? == shape.fiber) as usize;
        let other = sample_point(model, Stratum::Generic, rng)?;
        let sum = AmbientVector::new(model.ambient().clone(), beta.vector() + other.vector())?;
        sums_ok += (model.membership(&sum, 1e-6)? == shape.linear) as usize;
        if let Some((lin, quad)) = shape.split {
            let d = fiber_degree_split(model, rng)?;
            split_ok += (d.linear == lin && d.quadratic == quad && d.other == 0) as usize;
        }
    }
    let n = trials as f64;
    rep.count("members", members, Bound::Eq(n));
    rep.count("tangent_dim_matches", dim_ok, Bound::Eq(n));
    rep.count("expected_tangent_dim", shape.tangent, Bound::Info);
    rep.count("jacobian_matches", jac_ok, Bound::Eq(n));
    rep.count("fiber_dim_matches", fiber_ok, Bound::Eq(n));
    rep.count("expected_fiber_dim", shape.fiber, Bound::Info);
    let name = if shape.linear { "sums_on_cone" } else { "sums_off_cone" };
    rep.count(name, sums_ok, Bound::Eq(n));
    if shape.split.is_some() {
        rep.count("degree_split_matches", split_ok, Bound::Eq(n));
    }
    if matches!(model.kind(), vmrt_core::ConeKind::F4Alpha3Vmrt) {
        let (on, off) = quadric_probe(model, trials, rng)?;
        rep.count("quadric_points_on_cone", on, Bound::Eq(n));
        rep.count("off_quadric_points_off_cone", off, Bound::Eq(n));
    }
    Ok(())
}

/// Inside the span `E*⊗q ⊕ E⊗q²` of the fiber over `[q]`, points with
/// `⟨e*, f⟩ = 0` lie on the cone and points with `⟨e*, f⟩ ≠ 0` do not.
fn quadric_probe(model: &ConeModel, trials: usize, rng: &mut ChaCha8Rng) -> vmrt_core::Result<(usize, usize)> {
    let (mut on, mut off) = (0, 0);
    for _ in 0..trials {
        let q = random_cvec(2, rng);
        let span = fiber_span(model, &q)?;
        let e = random_cvec(3, rng);
        let f = random_cvec(3, rng);
        let f_on = &f - &e.conjugate() * (pairing(&e, &f)? / vmrt_core::C64::new(e.norm_squared(), 0.0));
        let q2 = sym_square(&q, &q)?;
        let vec_of = |f: &CVec| -> CVec {
            let mut v = CVec::zeros(model.ambient().total_dim());
            v.rows_mut(0, 6).copy_from(&outer(&e, &q));
            v.rows_mut(6, 9).copy_from(&outer(f, &q2));
            v
        };
        for (f, want) in [(&f_on, true), (&f, false)] {
            let v = vec_of(f);
            if !span.contains_within(&v, 1e-8) {
                continue;
            }
            let member = model.membership(&AmbientVector::new(model.ambient().clone(), v)?, 1e-8)?;
            if member && want {
                on += 1;
            }
            if !member && !want {
                off += 1;
            }
        }
    }
    Ok((on, off))
}

pub fn run(cfg: &ScenarioConfig) -> Vec<SuiteReport> {
    cfg.suites.iter().map(|&s| run_suite(cfg, s)).collect()
}
