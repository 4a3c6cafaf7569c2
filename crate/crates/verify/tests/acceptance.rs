//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vmrt_core::cones::roots::f4_root_grading;
use vmrt_core::cones::schubert::{SchubertClass, SchubertShape};
use vmrt_core::cones::{fiber_degree_split, fiber_dimension, fiber_span, sample_point, tangent_space_jacobian};
use vmrt_core::group::{tangency_implies_equality_experiment, IsotropySampler};
use vmrt_core::linalg::random_cvec;
use vmrt_core::sff::{base_locus_report, check_pair_nondegenerate};
use vmrt_core::tensor::{outer, pairing, sym_square};
use vmrt_core::{AmbientVector, CVec, ConeModel, Stratum, C64};
use vmrt_verify::config::Trials;
use vmrt_verify::suites::run_suite;
use vmrt_verify::{ScenarioConfig, Suite};

const SEED: u64 = 20_241_016;

/// Relative componentwise agreement of closed form and oracle.
const SFF_TOL: f64 = 1e-6;
const SFF_TRIPLES: usize = 200;
const SYMPLECTIC_PAIRS: [(usize, usize); 4] = [(2, 4), (2, 5), (3, 5), (3, 6)];
/// Sine of the angle between β and the kernel.
const ANGLE_TOL: f64 = 1e-6;
const POINTS: usize = 100;
const OFF_NONNULL_MIN: usize = 99;
const ISOTROPY_TRIALS: usize = 100;
const GRADING: [(i64, usize); 5] = [(0, 12), (1, 6), (2, 9), (3, 2), (4, 3)];
const MAX_L: usize = 6;
const EXAMPLE_CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/default.toml");

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn sff_config() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::with_seed(SEED);
    cfg.pairs = SYMPLECTIC_PAIRS.to_vec();
    cfg.trials = Trials { sff: SFF_TRIPLES, ..Trials::default() };
    cfg.tolerances.sff = SFF_TOL;
    cfg
}

/// Worst error over the cases of `model`, with the case count.
fn sff_cases(report: &vmrt_verify::SuiteReport, model: &str) -> (usize, usize, f64, Vec<String>) {
    let mut n = 0;
    let mut triples = 0;
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for c in report.cases.iter().filter(|c| c.params.model == model) {
        n += 1;
        triples += c.params.trials;
        match c.get("max_rel_error") {
            Some(e) => worst = worst.max(e),
            None => {
                worst = f64::INFINITY;
                errors.extend(c.diagnostics.iter().cloned());
            }
        }
    }
    (n, triples, worst, errors)
}

fn criterion_1_2(report: &vmrt_verify::SuiteReport) -> (Outcome, Outcome) {
    let (n, triples, worst, errs) = sff_cases(report, "symplectic");
    let c1 = outcome(
        n == 2 * SYMPLECTIC_PAIRS.len() && triples == n * SFF_TRIPLES && worst <= SFF_TOL,
        format!("{n} cases, {triples} triples, max rel error {worst:.3e} (tol {SFF_TOL:e}) {errs:?}"),
    );
    let (n, triples, worst, errs) = sff_cases(report, "f4");
    let c2 = outcome(
        n == 2 && triples == n * SFF_TRIPLES && worst <= SFF_TOL,
        format!("{n} cases, {triples} triples, max rel error {worst:.3e} (tol {SFF_TOL:e}) {errs:?}"),
    );
    (c1, c2)
}

fn criterion_3() -> vmrt_core::Result<Outcome> {
    let pairs = [
        (ConeModel::symplectic(2, 4)?, ConeModel::odd_symplectic(2, 4, 0)?),
        (ConeModel::symplectic(3, 5)?, ConeModel::odd_symplectic(3, 5, 1)?),
        (ConeModel::f4(), ConeModel::f4_b3_default()),
        (ConeModel::f4(), ConeModel::f4_c2_default()),
    ];
    let mut r = rng(3);
    let mut good = 0;
    let mut total = 0;
    let mut worst: f64 = 0.0;
    for (amb, sub) in &pairs {
        for s in Stratum::BOTH {
            for _ in 0..POINTS {
                let beta = sample_point(sub, s, &mut r)?;
                let rep = check_pair_nondegenerate(amb, sub, &beta)?;
                total += 1;
                worst = worst.max(rep.angle);
                if rep.kernel_dim == 1 && rep.angle < ANGLE_TOL {
                    good += 1;
                }
            }
        }
    }
    let segre = ConeModel::segre(3, 3)?;
    let line = ConeModel::segre_line(3, 3)?;
    let mut control = 0;
    for _ in 0..POINTS {
        let beta = sample_point(&line, Stratum::Generic, &mut r)?;
        if check_pair_nondegenerate(&segre, &line, &beta)?.kernel_dim > 1 {
            control += 1;
        }
    }
    Ok(outcome(
        good == total && total == 4 * 2 * POINTS && control == POINTS,
        format!("{good}/{total} nondegenerate, max angle {worst:.3e}; Segre line kernel > 1 in {control}/{POINTS}"),
    ))
}

fn criterion_4() -> vmrt_core::Result<Outcome> {
    let cases = [
        ("odd-symplectic(2,4,0) linear", ConeModel::odd_symplectic(2, 4, 0)?, Stratum::DegenerateLinear, 2),
        ("odd-symplectic(2,4,0) generic", ConeModel::odd_symplectic(2, 4, 0)?, Stratum::Generic, 1),
        ("f4-b3 linear", ConeModel::f4_b3_default(), Stratum::DegenerateLinear, 3),
    ];
    let mut r = rng(4);
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, model, s, want) in &cases {
        let (mut hits, mut off, mut nonnull) = (0, 0, 0);
        for _ in 0..POINTS {
            let beta = sample_point(model, *s, &mut r)?;
            // one off-candidate probe per point
            let rep = base_locus_report(model, &beta, 1, &mut r)?;
            hits += (rep.component_count == *want) as usize;
            off += rep.off_probes;
            nonnull += rep.off_nonnull;
        }
        pass &= hits == POINTS && off == POINTS && nonnull >= OFF_NONNULL_MIN;
        parts.push(format!("{name}: count {want} in {hits}/{POINTS}, off-candidate non-null {nonnull}/{off}"));
    }
    Ok(outcome(pass, parts.join("; ")))
}

fn criterion_5() -> vmrt_core::Result<Outcome> {
    let mut r = rng(5);
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, model) in [("f4-b3", ConeModel::f4_b3_default()), ("f4-c2", ConeModel::f4_c2_default())] {
        for (sname, sampler) in [("stabilizer", IsotropySampler::Stabilizer), ("mixed", IsotropySampler::Mixed)] {
            let rep = tangency_implies_equality_experiment(&model, sampler, ISOTROPY_TRIALS, &mut r)?;
            let ok = rep.found == ISOTROPY_TRIALS
                && rep.tangent_violations == 0
                && rep.tangent_equal == rep.tangent
                && (sname != "stabilizer" || rep.tangent == rep.points);
            pass &= ok;
            parts.push(format!(
                "{name}/{sname}: found {}, points {}, tangent {}, tangent and equal {}",
                rep.found, rep.points, rep.tangent, rep.tangent_equal
            ));
            if name == "f4-b3" && sname == "stabilizer" {
                pass &= rep.section_probes == ISOTROPY_TRIALS && rep.section_points >= ISOTROPY_TRIALS;
                pass &= rep.section_tangent == 0;
                parts.push(format!(
                    "section pair: {} tangent of {} points in {} probes",
                    rep.section_tangent, rep.section_points, rep.section_probes
                ));
            }
        }
    }
    Ok(outcome(pass, parts.join("; ")))
}

fn criterion_6() -> Outcome {
    let g = f4_root_grading();
    let want: BTreeMap<i64, usize> = GRADING.iter().flat_map(|&(k, d)| [(k, d), (-k, d)]).collect();
    outcome(
        g.dims == want && g.total_dim() == 52 && g.c1 == 7,
        format!("dims {:?}, total {}, c1 {}", g.dims, g.total_dim(), g.c1),
    )
}

fn criterion_7() -> vmrt_core::Result<Outcome> {
    let mut r = rng(7);
    let mut bad = 0;
    let mut checked = 0;
    for (k, l) in SYMPLECTIC_PAIRS {
        let model = ConeModel::symplectic(k, l)?;
        for i in 0..POINTS {
            let s = Stratum::BOTH[i % 2];
            let beta = sample_point(&model, s, &mut r)?;
            checked += 1;
            bad += (tangent_space_jacobian(&model, &beta)?.dim() != k + 2 * (l - k)) as usize;
        }
    }
    let f4 = ConeModel::f4();
    let (mut fiber_bad, mut on, mut off) = (0, 0, 0);
    for i in 0..POINTS {
        let beta = sample_point(&f4, Stratum::BOTH[i % 2], &mut r)?;
        checked += 1;
        bad += (tangent_space_jacobian(&f4, &beta)?.dim() != 6) as usize;
        let gen = sample_point(&f4, Stratum::Generic, &mut r)?;
        fiber_bad += (fiber_dimension(&f4, &gen)? != 5) as usize;
        // inside the fiber span over [q]: ⟨e*, f⟩ = 0 is on the cone, ≠ 0 is off it
        let q = random_cvec(2, &mut r);
        let span = fiber_span(&f4, &q)?;
        let e = random_cvec(3, &mut r);
        let f = random_cvec(3, &mut r);
        let f0 = &f - &e.conjugate() * (pairing(&e, &f)? / C64::new(e.norm_squared(), 0.0));
        let q2 = sym_square(&q, &q)?;
        for (ff, want) in [(&f0, true), (&f, false)] {
            let mut v = CVec::zeros(20);
            v.rows_mut(0, 6).copy_from(&outer(&e, &q));
            v.rows_mut(6, 9).copy_from(&outer(ff, &q2));
            if !span.contains_within(&v, 1e-8) {
                continue;
            }
            let member = f4.membership(&AmbientVector::new(f4.ambient().clone(), v)?, 1e-8)?;
            if want && member {
                on += 1;
            }
            if !want && !member {
                off += 1;
            }
        }
    }
    Ok(outcome(
        bad == 0 && fiber_bad == 0 && on == POINTS && off == POINTS,
        format!(
            "{} tangent-dimension mismatches in {checked} points; F4 fiber dim 5 at {}/{POINTS}; quadric on {on}/{POINTS}, off {off}/{POINTS}",
            bad,
            POINTS - fiber_bad
        ),
    ))
}

/// The three clauses, transcribed separately from the library.
fn table(k: usize, l: usize, a: usize, b: usize) -> SchubertClass {
    if a < k && ((k < b && b <= l) || b == 2 * l - a) {
        return SchubertClass::HomogeneousSubdiagram;
    }
    if a == k - 1 && l < b && b <= 2 * l - k {
        return SchubertClass::LinearSpace { dim: b - k };
    }
    if a < k && b == 2 * l - a - 1 {
        return SchubertClass::OddSymplectic { rank: l - 1, marks: (k - a, k - a - 1) };
    }
    SchubertClass::NotSmoothListed
}

fn criterion_8() -> vmrt_core::Result<Outcome> {
    let mut n = 0;
    let mut mismatches = Vec::new();
    for l in 2..=MAX_L {
        for k in 2..l {
            for a in 0..k {
                for b in k + 1..=2 * l - a {
                    n += 1;
                    let got = SchubertShape::new(k, l, a, b)?.classify();
                    if got != table(k, l, a, b) {
                        mismatches.push((k, l, a, b));
                    }
                }
            }
        }
    }
    let enumerated = SchubertShape::enumerate(MAX_L).len();
    Ok(outcome(
        mismatches.is_empty() && enumerated == n,
        format!("{n} shapes with l <= {MAX_L}, {} mismatches {mismatches:?}", mismatches.len()),
    ))
}

fn criterion_9() -> vmrt_core::Result<Outcome> {
    let mut r = rng(9);
    let b3 = ConeModel::f4_b3_default();
    let c2 = ConeModel::f4_c2_default();
    let (mut ok_b3, mut ok_c2) = (0, 0);
    for _ in 0..POINTS {
        let d = fiber_degree_split(&b3, &mut r)?;
        ok_b3 += (d.linear == 1 && d.quadratic == 2 && d.other == 0) as usize;
        let d = fiber_degree_split(&c2, &mut r)?;
        ok_c2 += (d.linear == 1 && d.quadratic == 1 && d.other == 0) as usize;
    }
    Ok(outcome(
        ok_b3 == POINTS && ok_c2 == POINTS,
        format!("B3 (1,2) in {ok_b3}/{POINTS}, C2 (1,1) in {ok_c2}/{POINTS}"),
    ))
}

fn cli_run(out: &Path) -> Result<(i32, Vec<u8>), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_vmrt-verify"))
        .args(["--config", EXAMPLE_CONFIG, "--format", "both", "--out"])
        .arg(out)
        .env_remove("VMRT_VERIFY_OUT")
        .output()
        .map_err(|e| e.to_string())?;
    let code = status.status.code().unwrap_or(-1);
    let bytes = std::fs::read(out.join("report.json")).map_err(|e| e.to_string())?;
    Ok((code, bytes))
}

fn criterion_10() -> Outcome {
    let base = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = std::fs::remove_dir_all(&base);
    match (cli_run(&base.join("a")), cli_run(&base.join("b"))) {
        (Ok((c1, r1)), Ok((c2, r2))) => outcome(
            r1 == r2 && c1 == 0 && c2 == 0 && !r1.is_empty(),
            format!("exit codes {c1} and {c2}, {} and {} bytes, identical: {}", r1.len(), r2.len(), r1 == r2),
        ),
        (a, b) => outcome(false, format!("run failed: {:?} {:?}", a.err(), b.err())),
    }
}

fn or_error(r: vmrt_core::Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| outcome(false, format!("error: {e}")))
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut timed = |n, name, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        results.push((n, name, o, t.elapsed().as_secs_f64()));
    };

    let t = Instant::now();
    let sff = run_suite(&sff_config(), Suite::SffAgreement);
    let sff_secs = t.elapsed().as_secs_f64();
    let (c1, c2) = criterion_1_2(&sff);
    let mut c1 = Some(c1);
    let mut c2 = Some(c2);
    timed(1, "symplectic second fundamental form vs oracle", &mut || c1.take().expect("once"));
    timed(2, "F4 second fundamental form vs oracle", &mut || c2.take().expect("once"));
    timed(3, "pair nondegeneracy and Segre control", &mut || or_error(criterion_3()));
    timed(4, "base-locus component counts", &mut || or_error(criterion_4()));
    timed(5, "tangency implies equality", &mut || or_error(criterion_5()));
    timed(6, "F4 grading and c1", &mut criterion_6);
    timed(7, "tangent and fiber dimensions", &mut || or_error(criterion_7()));
    timed(8, "Schubert classifier table", &mut || or_error(criterion_8()));
    timed(9, "degree split in q", &mut || or_error(criterion_9()));
    timed(10, "byte-identical CLI reports", &mut criterion_10);

    let mut failed = 0;
    for (n, name, o, secs) in &results {
        let secs = if *n <= 2 { sff_secs } else { *secs };
        println!(
            "criterion {n:>2}: {} {name} ({secs:.1} s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += (!o.pass) as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
