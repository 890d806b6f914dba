//! Run configuration: a line-oriented `key = value` file with `[section]`
//! headers.
//!
//! ```text
//! file    := line*
//! line    := blank | comment | header | entry
//! comment := '#' any*
//! header  := '[' name ']'
//! entry   := key '=' value
//! ```
//!
//! Keys before the first header belong to the top-level section. Leading and
//! trailing whitespace is ignored, a value may be empty only where noted, and
//! a key may appear once per section. Unknown sections and keys are errors.
//!
//! | section      | keys                                                               |
//! |--------------|--------------------------------------------------------------------|
//! | (top level)  | `mode` (verify, iterate, solve-bvp), `seed`, `out`                 |
//! | `[carrier]`  | `kind` (half_line, interval, grid), `lo`, `hi`, `n`                |
//! | `[bundle]`   | `preset`, `mapping`, `alpha`, `zeta`, `beta`, `g`, `lambda`, `k`, `r` |
//! | `[sampling]` | `grid_lo`, `grid_hi`, `grid_per_axis`, `random_lo`, `random_hi`, `random_pairs`, `axiom_hi`, `axiom_grid_per_axis`, `axiom_random` |
//! | `[picard]`   | `tolerance`, `max_iterations`, `divergence_bound`, `x0`            |
//! | `[bvp]`      | `rhs`, `n`, `tolerance`, `max_iterations`, `verify_pairs`          |
//!
//! `lambda` replaces `zeta` by `zeta1:lambda`; `k` and `r` together replace
//! `g` by `cclass_c:k,r`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Verify,
    Iterate,
    SolveBvp,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Verify => "verify",
            Mode::Iterate => "iterate",
            Mode::SolveBvp => "solve-bvp",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CarrierSpec {
    HalfLine,
    Interval { lo: f64, hi: f64 },
    Grid { n: usize },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BundleSpec {
    pub preset: Option<String>,
    pub mapping: Option<String>,
    pub alpha: Option<String>,
    pub zeta: Option<String>,
    pub beta: Option<String>,
    pub g: Option<String>,
    pub lambda: Option<f64>,
    pub k: Option<f64>,
    pub r: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingSpec {
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_per_axis: usize,
    pub random_lo: f64,
    pub random_hi: f64,
    pub random_pairs: usize,
    /// Upper end of the `(t, s)` and `(s, t)` samples for the axiom checks.
    pub axiom_hi: f64,
    pub axiom_grid_per_axis: usize,
    pub axiom_random: usize,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            grid_lo: 0.0,
            grid_hi: 1.0,
            grid_per_axis: 101,
            random_lo: 0.0,
            random_hi: 1.0,
            random_pairs: 100,
            axiom_hi: 10.0,
            axiom_grid_per_axis: 50,
            axiom_random: 7_500,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardSpec {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub divergence_bound: f64,
    pub x0: f64,
}

impl Default for PicardSpec {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 1000,
            divergence_bound: 1e9,
            x0: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BvpSpec {
    pub rhs: String,
    pub n: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub verify_pairs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub carrier: CarrierSpec,
    pub bundle: BundleSpec,
    pub sampling: SamplingSpec,
    pub picard: PicardSpec,
    pub bvp: Option<BvpSpec>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("", &["mode", "seed", "out"]),
    ("carrier", &["kind", "lo", "hi", "n"]),
    ("bundle", &["preset", "mapping", "alpha", "zeta", "beta", "g", "lambda", "k", "r"]),
    (
        "sampling",
        &[
            "grid_lo",
            "grid_hi",
            "grid_per_axis",
            "random_lo",
            "random_hi",
            "random_pairs",
            "axiom_hi",
            "axiom_grid_per_axis",
            "axiom_random",
        ],
    ),
    ("picard", &["tolerance", "max_iterations", "divergence_bound", "x0"]),
    ("bvp", &["rhs", "n", "tolerance", "max_iterations", "verify_pairs"]),
];

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
}

/// Raw `section -> key -> entry` map after syntax checks.
#[derive(Debug, Default)]
struct Document {
    sections: BTreeMap<String, (usize, BTreeMap<String, Entry>)>,
}

fn usage(line: usize, field: &str, message: impl Into<String>) -> CliError {
    CliError::Usage {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn parse_document(text: &str) -> Result<Document, CliError> {
    let mut doc = Document::default();
    doc.sections.insert(String::new(), (0, BTreeMap::new()));
    let mut current = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| usage(line, trimmed, "section header is missing ']'"))?
                .trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) || name.is_empty() {
                return Err(usage(line, name, "unknown section"));
            }
            if doc.sections.contains_key(name) {
                return Err(usage(line, name, "section appears twice"));
            }
            doc.sections.insert(name.to_string(), (line, BTreeMap::new()));
            current = name.to_string();
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| usage(line, trimmed, "expected 'key = value'"))?;
        let (key, value) = (key.trim(), value.trim());
        let allowed = SECTIONS
            .iter()
            .find(|(s, _)| *s == current)
            .map(|(_, keys)| *keys)
            .unwrap_or(&[]);
        if !allowed.contains(&key) {
            let place = if current.is_empty() { "top level".to_string() } else { format!("[{current}]") };
            return Err(usage(line, key, format!("unknown key in {place}")));
        }
        let section = &mut doc.sections.get_mut(&current).expect("section registered").1;
        if section.contains_key(key) {
            return Err(usage(line, key, "key appears twice"));
        }
        section.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
    Ok(doc)
}

impl Document {
    fn has(&self, section: &str) -> bool {
        self.sections.contains_key(section)
    }

    fn entry(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section).and_then(|(_, m)| m.get(key))
    }

    fn string(&self, section: &str, key: &str) -> Result<Option<String>, CliError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some(e) if e.value.is_empty() => Err(usage(e.line, key, "value is empty")),
            Some(e) => Ok(Some(e.value.clone())),
        }
    }

    fn parsed<T: FromStr>(&self, section: &str, key: &str, what: &str) -> Result<Option<T>, CliError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| usage(e.line, key, format!("expected {what}, got {:?}", e.value))),
        }
    }

    fn real(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        let v: Option<f64> = self.parsed(section, key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => {
                let line = self.entry(section, key).map_or(0, |e| e.line);
                Err(usage(line, key, "number must be finite"))
            }
            other => Ok(other),
        }
    }

    fn count(&self, section: &str, key: &str) -> Result<Option<usize>, CliError> {
        self.parsed(section, key, "a non-negative integer")
    }

    fn line_of(&self, section: &str, key: &str) -> usize {
        self.entry(section, key)
            .map(|e| e.line)
            .or_else(|| self.sections.get(section).map(|(l, _)| *l))
            .unwrap_or(0)
    }
}

impl FromStr for RunConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let doc = parse_document(text)?;

        let mode = match doc.string("", "mode")?.as_deref() {
            Some("verify") => Mode::Verify,
            Some("iterate") => Mode::Iterate,
            Some("solve-bvp") => Mode::SolveBvp,
            Some(other) => {
                return Err(usage(
                    doc.line_of("", "mode"),
                    "mode",
                    format!("expected verify, iterate or solve-bvp, got {other:?}"),
                ))
            }
            None => return Err(usage(0, "mode", "missing required key")),
        };
        let seed = doc
            .parsed::<u64>("", "seed", "a 64-bit unsigned integer")?
            .unwrap_or(geraghty_core::framework::sampling::DEFAULT_SEED);
        let out = doc.string("", "out")?.map(PathBuf::from);

        let carrier = if mode == Mode::SolveBvp {
            CarrierSpec::Grid { n: 0 }
        } else {
            if !doc.has("carrier") {
                return Err(usage(0, "carrier", format!("mode {} needs a [carrier] section", mode.as_str())));
            }
            match doc.string("carrier", "kind")?.as_deref() {
                Some("half_line") => CarrierSpec::HalfLine,
                Some("interval") => {
                    let lo = doc.real("carrier", "lo")?;
                    let hi = doc.real("carrier", "hi")?;
                    match (lo, hi) {
                        (Some(lo), Some(hi)) => CarrierSpec::Interval { lo, hi },
                        _ => {
                            return Err(usage(
                                doc.line_of("carrier", "kind"),
                                "lo",
                                "interval carrier needs lo and hi",
                            ))
                        }
                    }
                }
                Some("grid") => {
                    let n = doc.count("carrier", "n")?.ok_or_else(|| {
                        usage(doc.line_of("carrier", "kind"), "n", "grid carrier needs n")
                    })?;
                    CarrierSpec::Grid { n }
                }
                Some(other) => {
                    return Err(usage(
                        doc.line_of("carrier", "kind"),
                        "kind",
                        format!("expected half_line, interval or grid, got {other:?}"),
                    ))
                }
                None => return Err(usage(doc.line_of("carrier", "kind"), "kind", "missing required key")),
            }
        };

        let bundle = BundleSpec {
            preset: doc.string("bundle", "preset")?,
            mapping: doc.string("bundle", "mapping")?,
            alpha: doc.string("bundle", "alpha")?,
            zeta: doc.string("bundle", "zeta")?,
            beta: doc.string("bundle", "beta")?,
            g: doc.string("bundle", "g")?,
            lambda: doc.real("bundle", "lambda")?,
            k: doc.real("bundle", "k")?,
            r: doc.real("bundle", "r")?,
        };
        if bundle.k.is_some() != bundle.r.is_some() {
            let key = if bundle.k.is_some() { "k" } else { "r" };
            return Err(usage(doc.line_of("bundle", key), key, "k and r must be given together"));
        }
        if mode == Mode::Verify && !doc.has("bundle") {
            return Err(usage(0, "bundle", "mode verify needs a [bundle] section"));
        }
        if mode == Mode::Iterate && bundle.preset.is_none() && bundle.mapping.is_none() {
            return Err(usage(doc.line_of("bundle", "mapping"), "mapping", "mode iterate needs a mapping"));
        }

        let d = SamplingSpec::default();
        let sampling = SamplingSpec {
            grid_lo: doc.real("sampling", "grid_lo")?.unwrap_or(d.grid_lo),
            grid_hi: doc.real("sampling", "grid_hi")?.unwrap_or(d.grid_hi),
            grid_per_axis: doc.count("sampling", "grid_per_axis")?.unwrap_or(d.grid_per_axis),
            random_lo: doc.real("sampling", "random_lo")?.unwrap_or(d.random_lo),
            random_hi: doc.real("sampling", "random_hi")?.unwrap_or(d.random_hi),
            random_pairs: doc.count("sampling", "random_pairs")?.unwrap_or(d.random_pairs),
            axiom_hi: doc.real("sampling", "axiom_hi")?.unwrap_or(d.axiom_hi),
            axiom_grid_per_axis: doc
                .count("sampling", "axiom_grid_per_axis")?
                .unwrap_or(d.axiom_grid_per_axis),
            axiom_random: doc.count("sampling", "axiom_random")?.unwrap_or(d.axiom_random),
        };
        for (key, lo, hi) in [
            ("grid_hi", sampling.grid_lo, sampling.grid_hi),
            ("random_hi", sampling.random_lo, sampling.random_hi),
            ("axiom_hi", 0.0, sampling.axiom_hi),
        ] {
            if !(hi > lo) {
                return Err(usage(doc.line_of("sampling", key), key, "upper end must exceed lower end"));
            }
        }

        let d = PicardSpec::default();
        let picard = PicardSpec {
            tolerance: doc.real("picard", "tolerance")?.unwrap_or(d.tolerance),
            max_iterations: doc.count("picard", "max_iterations")?.unwrap_or(d.max_iterations),
            divergence_bound: doc.real("picard", "divergence_bound")?.unwrap_or(d.divergence_bound),
            x0: doc.real("picard", "x0")?.unwrap_or(d.x0),
        };

        let bvp = if mode == Mode::SolveBvp {
            if !doc.has("bvp") {
                return Err(usage(0, "bvp", "mode solve-bvp needs a [bvp] section"));
            }
            let rhs = doc
                .string("bvp", "rhs")?
                .ok_or_else(|| usage(doc.line_of("bvp", "rhs"), "rhs", "missing required key"))?;
            Some(BvpSpec {
                rhs,
                n: doc.count("bvp", "n")?.unwrap_or(geraghty_core::metric::DEFAULT_GRID_INTERVALS),
                tolerance: doc.real("bvp", "tolerance")?.unwrap_or(picard.tolerance),
                max_iterations: doc.count("bvp", "max_iterations")?.unwrap_or(picard.max_iterations),
                verify_pairs: doc.count("bvp", "verify_pairs")?.unwrap_or(20),
            })
        } else {
            None
        };

        Ok(RunConfig {
            mode,
            seed,
            out,
            carrier,
            bundle,
            sampling,
            picard,
            bvp,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VERIFY: &str = "\
# Example run
mode = verify
seed = 7

[carrier]
kind = half_line

[bundle]
preset = example31_bundle

[sampling]
random_hi = 3
";

    #[test]
    fn parses_verify_config() {
        let c: RunConfig = VERIFY.parse().unwrap();
        assert_eq!(c.mode, Mode::Verify);
        assert_eq!(c.seed, 7);
        assert_eq!(c.carrier, CarrierSpec::HalfLine);
        assert_eq!(c.bundle.preset.as_deref(), Some("example31_bundle"));
        assert_eq!(c.sampling.random_hi, 3.0);
        assert_eq!(c.sampling.grid_per_axis, 101);
        assert!(c.bvp.is_none());
    }

    #[test]
    fn parses_bvp_config() {
        let c: RunConfig = "mode = solve-bvp\n[bvp]\nrhs = pi2sin\nn = 50\n".parse().unwrap();
        let b = c.bvp.unwrap();
        assert_eq!((b.rhs.as_str(), b.n, b.tolerance), ("pi2sin", 50, 1e-10));
    }

    fn err(text: &str) -> (usize, String) {
        match text.parse::<RunConfig>() {
            Err(CliError::Usage { line, field, .. }) => (line, field),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_and_field() {
        assert_eq!(err("mode = verify\nseed = -1\n"), (2, "seed".into()));
        assert_eq!(err("mode = verify\nseed = 18446744073709551616\n"), (2, "seed".into()));
        assert_eq!(err("mode = verify\n[carrier]\nkind = torus\n"), (3, "kind".into()));
        assert_eq!(err("mode = verify\n[carrier]\nwidth = 3\n"), (3, "width".into()));
        assert_eq!(err("mode = verify\n\n[nowhere]\n"), (3, "nowhere".into()));
        assert_eq!(err("mode = fly\n"), (1, "mode".into()));
        assert_eq!(err("mode = verify\nmode = iterate\n"), (2, "mode".into()));
        assert_eq!(err("mode verify\n"), (1, "mode verify".into()));
        assert_eq!(err("seed = 1\n"), (0, "mode".into()));
        assert_eq!(err("mode = verify\n[carrier]\nkind = half_line\n[bundle]\nk = 2\n"), (5, "k".into()));
        assert_eq!(err("mode = verify\n[carrier]\nkind = half_line\n[bundle]\nlambda = nan\n"), (5, "lambda".into()));
    }

    #[test]
    fn mode_sections_are_required() {
        assert_eq!(err("mode = verify\n").1, "carrier");
        assert_eq!(err("mode = verify\n[carrier]\nkind = half_line\n").1, "bundle");
        assert_eq!(err("mode = solve-bvp\n").1, "bvp");
        assert_eq!(err("mode = iterate\n[carrier]\nkind = half_line\n").1, "mapping");
    }
}
