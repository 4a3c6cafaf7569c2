//! Scenario configuration: a TOML file, then the output-directory
//! environment override, then command-line flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::VerifyError;

/// Environment variable that overrides the output directory of the file.
pub const OUT_DIR_ENV: &str = "VMRT_VERIFY_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    SffAgreement,
    Nondegeneracy,
    BaseLocus,
    Tangency,
    LeviForward,
    Classifier,
    F4Grading,
    ConeSanity,
}

impl Suite {
    /// Canonical order; a suite's position here seeds its RNG streams.
    pub const ALL: [Suite; 8] = [
        Suite::SffAgreement,
        Suite::Nondegeneracy,
        Suite::BaseLocus,
        Suite::Tangency,
        Suite::LeviForward,
        Suite::Classifier,
        Suite::F4Grading,
        Suite::ConeSanity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SffAgreement => "sff-agreement",
            Suite::Nondegeneracy => "nondegeneracy",
            Suite::BaseLocus => "base-locus",
            Suite::Tangency => "tangency",
            Suite::LeviForward => "levi-forward",
            Suite::Classifier => "classifier",
            Suite::F4Grading => "f4-grading",
            Suite::ConeSanity => "cone-sanity",
        }
    }

    pub fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::Usage(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Structured,
    Markdown,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Trials {
    /// Random (β, ξ, ζ) triples per model and stratum.
    pub sff: usize,
    /// Points per pair and stratum.
    pub nondegeneracy: usize,
    /// Points per sub-cone and stratum.
    pub base_locus: usize,
    /// Off-candidate probes per base-locus point.
    pub probes: usize,
    /// Isotropy elements with a found intersection, per sub-cone and sampler.
    pub tangency: usize,
    /// Points per stratum on each side of a Levi comparison.
    pub levi: usize,
    /// Points per model and stratum.
    pub cone_sanity: usize,
    /// Largest ℓ enumerated by the classifier suite.
    pub classifier_max_l: usize,
}

impl Default for Trials {
    fn default() -> Self {
        Trials {
            sff: 20,
            nondegeneracy: 10,
            base_locus: 10,
            probes: 20,
            tangency: 10,
            levi: 3,
            cone_sanity: 20,
            classifier_max_l: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative agreement of the closed-form and oracle forms.
    pub sff: f64,
    /// Sine of the angle between β and a one-dimensional kernel.
    pub angle: f64,
    /// Smallest fraction of off-candidate probes that must be non-null.
    pub off_nonnull_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { sff: 1e-6, angle: 1e-6, off_nonnull_fraction: 0.99 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    pairs: Option<Vec<[usize; 2]>>,
    a: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputFile {
    dir: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    suites: Option<Vec<String>>,
    #[serde(default)]
    grid: GridFile,
    #[serde(default)]
    trials: Trials,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    output: OutputFile,
}

/// Values given on the command line; `None` leaves the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub seed: u64,
    #[serde(serialize_with = "suite_names")]
    pub suites: Vec<Suite>,
    /// `(k, ℓ)` pairs of the symplectic grid.
    pub pairs: Vec<(usize, usize)>,
    /// Explicit `a` values; `None` means `0..k` for each pair.
    pub a_values: Option<Vec<usize>>,
    pub trials: Trials,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub format: Format,
}

fn suite_names<S: serde::Serializer>(suites: &[Suite], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(suites.iter().map(|x| x.name()))
}

pub const DEFAULT_PAIRS: [(usize, usize); 4] = [(2, 4), (2, 5), (3, 5), (3, 6)];

impl ScenarioConfig {
    /// Defaults for everything but the seed.
    pub fn with_seed(seed: u64) -> Self {
        ScenarioConfig {
            seed,
            suites: Suite::ALL.to_vec(),
            pairs: DEFAULT_PAIRS.to_vec(),
            a_values: None,
            trials: Trials::default(),
            tolerances: Tolerances::default(),
            out_dir: PathBuf::from("reports"),
            format: Format::Both,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, VerifyError> {
        Self::assemble(Some(text), None, &Overrides::default())
    }

    /// File values, then `env_out`, then `ov`; validated.
    pub fn assemble(file: Option<&str>, env_out: Option<PathBuf>, ov: &Overrides) -> Result<Self, VerifyError> {
        let parsed: ConfigFile = match file {
            Some(text) => toml::from_str(text).map_err(|e| VerifyError::Usage(format!("config: {e}")))?,
            None => ConfigFile::default(),
        };
        let seed = ov
            .seed
            .or(parsed.seed)
            .ok_or_else(|| VerifyError::Usage("a seed is required (config `seed` or --seed)".into()))?;
        let mut cfg = ScenarioConfig::with_seed(seed);
        let names = if ov.suites.is_empty() { parsed.suites } else { Some(ov.suites.clone()) };
        if let Some(names) = names {
            let mut suites = names.iter().map(|n| n.parse()).collect::<Result<Vec<Suite>, _>>()?;
            suites.sort();
            suites.dedup();
            cfg.suites = suites;
        }
        if let Some(pairs) = parsed.grid.pairs {
            cfg.pairs = pairs.into_iter().map(|[k, l]| (k, l)).collect();
        }
        cfg.a_values = parsed.grid.a;
        cfg.trials = parsed.trials;
        cfg.tolerances = parsed.tolerances;
        if let Some(tol) = ov.tol {
            cfg.tolerances.sff = tol;
            cfg.tolerances.angle = tol;
        }
        if let Some(dir) = ov.out.clone().or(env_out).or(parsed.output.dir) {
            cfg.out_dir = dir;
        }
        if let Some(f) = ov.format.or(parsed.output.format) {
            cfg.format = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::Usage(m));
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        if self.pairs.is_empty() {
            return bad("the (k, l) grid is empty".into());
        }
        for &(k, l) in &self.pairs {
            if !(1 < k && k < l && l <= 8) {
                return bad(format!("grid pair (k={k}, l={l}) violates 1 < k < l <= 8"));
            }
        }
        if let Some(a) = &self.a_values {
            if a.is_empty() {
                return bad("grid.a is empty".into());
            }
        }
        let t = &self.trials;
        for (name, v) in [
            ("sff", t.sff),
            ("nondegeneracy", t.nondegeneracy),
            ("base_locus", t.base_locus),
            ("probes", t.probes),
            ("tangency", t.tangency),
            ("levi", t.levi),
            ("cone_sanity", t.cone_sanity),
        ] {
            if v == 0 {
                return bad(format!("trials.{name} must be at least 1"));
            }
        }
        if !(3..=8).contains(&t.classifier_max_l) {
            return bad(format!("trials.classifier_max_l = {} is outside 3..=8", t.classifier_max_l));
        }
        let tol = &self.tolerances;
        for (name, v) in [("sff", tol.sff), ("angle", tol.angle)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&tol.off_nonnull_fraction) {
            return bad("tolerances.off_nonnull_fraction must lie in [0, 1]".into());
        }
        Ok(())
    }

    /// `(k, ℓ, a)` triples: the configured `a` values below `k`, or all of
    /// `0..k`.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &(k, l) in &self.pairs {
            match &self.a_values {
                Some(av) => out.extend(av.iter().filter(|&&a| a < k).map(|&a| (k, l, a))),
                None => out.extend((0..k).map(|a| (k, l, a))),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_is_required() {
        assert!(matches!(ScenarioConfig::from_toml(""), Err(VerifyError::Usage(_))));
        let cfg = ScenarioConfig::from_toml("seed = 3").unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.suites.len(), 8);
        assert_eq!(cfg.pairs, DEFAULT_PAIRS.to_vec());
    }

    #[test]
    fn grid_bounds() {
        assert!(ScenarioConfig::from_toml("seed = 1\n[grid]\npairs = [[3, 3]]").is_err());
        assert!(ScenarioConfig::from_toml("seed = 1\n[grid]\npairs = [[2, 9]]").is_err());
        assert!(ScenarioConfig::from_toml("seed = 1\n[grid]\npairs = [[1, 4]]").is_err());
        assert!(ScenarioConfig::from_toml("seed = 1\n[trials]\nsff = 0").is_err());
        assert!(ScenarioConfig::from_toml("seed = 1\nbogus = 2").is_err());
    }

    #[test]
    fn triples_default_and_filtered() {
        let cfg = ScenarioConfig::from_toml("seed = 1\n[grid]\npairs = [[2, 4], [3, 5]]").unwrap();
        assert_eq!(cfg.triples(), vec![(2, 4, 0), (2, 4, 1), (3, 5, 0), (3, 5, 1), (3, 5, 2)]);
        let cfg = ScenarioConfig::from_toml("seed = 1\n[grid]\npairs = [[2, 4], [3, 5]]\na = [1, 2]").unwrap();
        assert_eq!(cfg.triples(), vec![(2, 4, 1), (3, 5, 1), (3, 5, 2)]);
    }

    #[test]
    fn flags_override_the_file() {
        let ov = Overrides {
            suites: vec!["classifier".into(), "f4-grading".into()],
            seed: Some(9),
            tol: Some(1e-5),
            out: Some("x".into()),
            format: Some(Format::Markdown),
        };
        let cfg = ScenarioConfig::assemble(Some("seed = 1\n[output]\ndir = \"y\""), Some("z".into()), &ov).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.suites, vec![Suite::Classifier, Suite::F4Grading]);
        assert_eq!(cfg.tolerances.sff, 1e-5);
        assert_eq!(cfg.out_dir, PathBuf::from("x"));
        assert_eq!(cfg.format, Format::Markdown);
        let cfg = ScenarioConfig::assemble(Some("seed = 1\n[output]\ndir = \"y\""), Some("z".into()), &Overrides::default())
            .unwrap();
        assert_eq!(cfg.out_dir, PathBuf::from("z"));
        let bad = Overrides { suites: vec!["nope".into()], ..Overrides::default() };
        assert!(ScenarioConfig::assemble(Some("seed = 1"), None, &bad).is_err());
    }
}
