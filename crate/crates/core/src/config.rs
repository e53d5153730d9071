//! Run configuration files.
//!
//! A configuration is a list of `key = value` lines grouped under the
//! sections `[system]`, `[quantum]`, `[classical]` and `[run]`. Text after
//! `#` is a comment. Only the six system keys are required:
//!
//! ```text
//! [system]
//! k = 0.25
//! J = 10
//! T = 50
//! N0 = 50
//! I = 31.830988618379067
//! tau_eps = 1
//! ```
//!
//! [`RunSpec::emit`] writes the resolved configuration with every default
//! spelled out; parsing that text gives back the same [`RunSpec`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::ensemble::{RingConfig, RingWidth};
use crate::error::Error;
use crate::params::SystemParams;
use crate::quantum::{OverlapMode, OverlapModel};

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_KICKS: usize = 25;

/// Problem found while reading a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "`{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            key: None,
            message: message.into(),
        }
    }

    fn key(key: &str, line: Option<usize>, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            key: Some(key.to_string()),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumSection {
    pub overlap: OverlapModel,
    /// Also write the S-matrix as `(re, im)` pairs.
    pub dump_smatrix: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSection {
    /// Ensemble size, and samples per ring for transition matrices.
    pub samples: usize,
    pub ring: RingConfig,
    /// Also evolve the coarse-grained Markov chain.
    pub markov: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub kicks: usize,
    pub seed: u64,
    pub outdir: String,
    /// Prefix of every output file.
    pub name: String,
    /// Action scale factors for `sweep` and `smatrix-check`.
    pub scales: Vec<f64>,
    pub edge_cutoff: f64,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    /// Seed orbits for `sos`.
    pub sos_seeds: usize,
    /// Kicks at which ensemble positions are written.
    pub snapshots: Vec<usize>,
    /// Trailing kicks used by the purity-scaling check.
    pub window: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            kicks: DEFAULT_KICKS,
            seed: 0,
            outdir: "out".into(),
            name: "run".into(),
            scales: vec![1.0],
            edge_cutoff: 0.8,
            workers: 0,
            sos_seeds: 200,
            snapshots: Vec::new(),
            window: 10,
        }
    }
}

/// Fully resolved run specification.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub system: SystemParams,
    pub quantum: QuantumSection,
    pub classical: ClassicalSection,
    pub run: RunSection,
}

const SECTIONS: [(&str, &[&str]); 4] = [
    ("system", &["k", "J", "T", "N0", "I", "tau_eps", "hbar_eff"]),
    ("quantum", &["overlap_mode", "sigma_eps", "dump_smatrix"]),
    ("classical", &["samples", "energy_jitter", "ring", "markov"]),
    (
        "run",
        &[
            "kicks",
            "seed",
            "outdir",
            "name",
            "scales",
            "edge_cutoff",
            "workers",
            "sos_seeds",
            "snapshots",
            "window",
        ],
    ),
];

struct Entry {
    line: usize,
    value: String,
}

/// Raw `section.key → value` table with line numbers.
struct Table(BTreeMap<String, Entry>);

impl Table {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        let mut section: Option<&'static str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        ConfigError::at(line, format!("malformed section header `{body}`"))
                    })?
                    .trim();
                let known = SECTIONS.iter().find(|(s, _)| *s == name);
                section = Some(
                    known
                        .ok_or_else(|| ConfigError::at(line, format!("unknown section [{name}]")))?
                        .0,
                );
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| {
                ConfigError::at(line, format!("expected `key = value`, got `{body}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.starts_with('=') || key.contains(char::is_whitespace) {
                return Err(ConfigError::at(line, format!("malformed line `{body}`")));
            }
            let sec = section
                .ok_or_else(|| ConfigError::key(key, Some(line), "key outside of any section"))?;
            let keys = SECTIONS.iter().find(|(s, _)| *s == sec).unwrap().1;
            if !keys.contains(&key) {
                return Err(ConfigError::key(
                    &format!("{sec}.{key}"),
                    Some(line),
                    "unknown key",
                ));
            }
            let full = format!("{sec}.{key}");
            if let Some(prev) = map.get(&full) {
                let prev: &Entry = prev;
                return Err(ConfigError::key(
                    &full,
                    Some(line),
                    format!("duplicate key (first set on line {})", prev.line),
                ));
            }
            map.insert(
                full,
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(Table(map))
    }

    fn get<T: FromStr>(&self, key: &str, kind: &str) -> Result<Option<T>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| {
                ConfigError::key(
                    key,
                    Some(e.line),
                    format!("expected {kind}, got `{}`", e.value),
                )
            }),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.get(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => Err(self.invalid(key, "must be finite")),
            _ => Ok(v),
        }
    }

    fn required<T>(&self, key: &str, v: Option<T>) -> Result<T, ConfigError> {
        v.ok_or_else(|| ConfigError::key(key, None, "missing required key"))
    }

    fn list<T: FromStr>(&self, key: &str, kind: &str) -> Result<Option<Vec<T>>, ConfigError> {
        let Some(e) = self.0.get(key) else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse().map_err(|_| {
                    ConfigError::key(
                        key,
                        Some(e.line),
                        format!("expected a list of {kind}, got `{s}`"),
                    )
                })
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.0.get(key).map(|e| e.line)
    }

    fn invalid(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::key(key, self.line(key), message)
    }
}

fn system_key(name: &str) -> &'static str {
    match name {
        "k" => "system.k",
        "J" => "system.J",
        "T" => "system.T",
        "N0" => "system.N0",
        "I" => "system.I",
        "tau_eps" => "system.tau_eps",
        "hbar_eff" => "system.hbar_eff",
        "sigma_eps" => "quantum.sigma_eps",
        _ => "system",
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    let t = Table::parse(text)?;

    let k = t.float("system.k")?;
    let j = t.get::<i64>("system.J", "an integer")?;
    let tt = t.get::<i64>("system.T", "an integer")?;
    let n0 = t.get::<i64>("system.N0", "an integer")?;
    let inertia = t.float("system.I")?;
    let tau = t.float("system.tau_eps")?;
    let hbar = t.float("system.hbar_eff")?;
    let mut system = SystemParams {
        k: t.required("system.k", k)?,
        j: t.required("system.J", j)?,
        t: t.required("system.T", tt)?,
        n0: t.required("system.N0", n0)?,
        inertia: t.required("system.I", inertia)?,
        tau_eps: t.required("system.tau_eps", tau)?,
        hbar_eff: 1.0,
    };
    system.hbar_eff = hbar.unwrap_or(1.0 / system.j.max(1) as f64);
    system.validate().map_err(|e| match e {
        Error::InvalidParam { name, reason } => t.invalid(system_key(name), reason),
        other => ConfigError::key("system", None, other.to_string()),
    })?;

    let mode = match t
        .get::<String>("quantum.overlap_mode", "a string")?
        .as_deref()
    {
        None | Some("orthogonal") => OverlapMode::Orthogonal,
        Some("gaussian") => OverlapMode::Gaussian,
        Some(other) => {
            return Err(t.invalid(
                "quantum.overlap_mode",
                format!("expected `orthogonal` or `gaussian`, got `{other}`"),
            ))
        }
    };
    let sigma_eps = t.float("quantum.sigma_eps")?.unwrap_or(0.0);
    if sigma_eps < 0.0 || (mode == OverlapMode::Gaussian && sigma_eps <= 0.0) {
        return Err(t.invalid(
            "quantum.sigma_eps",
            format!("must be positive for gaussian overlap, got {sigma_eps}"),
        ));
    }
    let quantum = QuantumSection {
        overlap: OverlapModel { mode, sigma_eps },
        dump_smatrix: t
            .get("quantum.dump_smatrix", "true or false")?
            .unwrap_or(false),
    };

    let samples = t
        .get::<usize>("classical.samples", "a non-negative integer")?
        .unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(t.invalid("classical.samples", "must be at least 1"));
    }
    let energy_jitter = t.float("classical.energy_jitter")?.unwrap_or(0.0);
    if energy_jitter < 0.0 {
        return Err(t.invalid("classical.energy_jitter", "must be non-negative"));
    }
    let width = match t.get::<String>("classical.ring", "a string")?.as_deref() {
        None | Some("slice") => RingWidth::Slice,
        Some("thin") => RingWidth::Thin,
        Some(other) => {
            return Err(t.invalid(
                "classical.ring",
                format!("expected `slice` or `thin`, got `{other}`"),
            ))
        }
    };
    let classical = ClassicalSection {
        samples,
        ring: RingConfig {
            width,
            energy_jitter,
        },
        markov: t.get("classical.markov", "true or false")?.unwrap_or(false),
    };

    let d = RunSection::default();
    let run = RunSection {
        kicks: t
            .get("run.kicks", "a non-negative integer")?
            .unwrap_or(d.kicks),
        seed: t
            .get("run.seed", "a non-negative integer")?
            .unwrap_or(d.seed),
        outdir: t.get("run.outdir", "a path")?.unwrap_or(d.outdir),
        name: t.get("run.name", "a name")?.unwrap_or(d.name),
        scales: t.list("run.scales", "numbers")?.unwrap_or(d.scales),
        edge_cutoff: t.float("run.edge_cutoff")?.unwrap_or(d.edge_cutoff),
        workers: t
            .get("run.workers", "a non-negative integer")?
            .unwrap_or(d.workers),
        sos_seeds: t
            .get("run.sos_seeds", "a non-negative integer")?
            .unwrap_or(d.sos_seeds),
        snapshots: t
            .list("run.snapshots", "non-negative integers")?
            .unwrap_or(d.snapshots),
        window: t
            .get("run.window", "a non-negative integer")?
            .unwrap_or(d.window),
    };
    let spec = RunSpec {
        system,
        quantum,
        classical,
        run,
    };
    spec.check_run().map_err(|e| ConfigError {
        line: e.key.as_deref().and_then(|k| t.line(k)),
        ..e
    })?;
    Ok(spec)
}

impl RunSpec {
    /// Range checks on the `[run]` section. Used after parsing and after
    /// command-line overrides.
    pub fn check_run(&self) -> Result<(), ConfigError> {
        let r = &self.run;
        let bad = |key: &str, msg: String| Err(ConfigError::key(key, None, msg));
        if r.kicks == 0 {
            return bad("run.kicks", "must be at least 1".into());
        }
        if r.outdir.is_empty() {
            return bad("run.outdir", "must not be empty".into());
        }
        if r.name.is_empty() || r.name.contains(['/', '\\']) {
            return bad("run.name", format!("not a valid file prefix: `{}`", r.name));
        }
        if r.scales.is_empty() {
            return bad("run.scales", "needs at least one scale".into());
        }
        if let Some(s) = r.scales.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return bad("run.scales", format!("scales must be positive, got {s}"));
        }
        if !(0.0..=1.0).contains(&r.edge_cutoff) {
            return bad(
                "run.edge_cutoff",
                format!("must lie in [0, 1], got {}", r.edge_cutoff),
            );
        }
        if r.window == 0 || r.window > r.kicks {
            return bad(
                "run.window",
                format!("must lie in [1, kicks={}], got {}", r.kicks, r.window),
            );
        }
        Ok(())
    }

    /// Resolved configuration text with every key written out.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        let p = &self.system;
        let q = &self.quantum;
        let c = &self.classical;
        let r = &self.run;
        let list = |v: Vec<String>| v.join(", ");
        // `{:?}` on f64 is the shortest text that parses back exactly
        let _ = write!(
            s,
            "[system]\nk = {:?}\nJ = {}\nT = {}\nN0 = {}\nI = {:?}\ntau_eps = {:?}\nhbar_eff = {:?}\n\n",
            p.k, p.j, p.t, p.n0, p.inertia, p.tau_eps, p.hbar_eff
        );
        let mode = match q.overlap.mode {
            OverlapMode::Orthogonal => "orthogonal",
            OverlapMode::Gaussian => "gaussian",
        };
        let _ = write!(
            s,
            "[quantum]\noverlap_mode = {mode}\nsigma_eps = {:?}\ndump_smatrix = {}\n\n",
            q.overlap.sigma_eps, q.dump_smatrix
        );
        let ring = match c.ring.width {
            RingWidth::Slice => "slice",
            RingWidth::Thin => "thin",
        };
        let _ = write!(
            s,
            "[classical]\nsamples = {}\nenergy_jitter = {:?}\nring = {ring}\nmarkov = {}\n\n",
            c.samples, c.ring.energy_jitter, c.markov
        );
        let _ = write!(
            s,
            "[run]\nkicks = {}\nseed = {}\noutdir = {}\nname = {}\nscales = {}\nedge_cutoff = {:?}\n\
             workers = {}\nsos_seeds = {}\nsnapshots = {}\nwindow = {}\n",
            r.kicks,
            r.seed,
            r.outdir,
            r.name,
            list(r.scales.iter().map(|x| format!("{x:?}")).collect()),
            r.edge_cutoff,
            r.workers,
            r.sos_seeds,
            list(r.snapshots.iter().map(|x| x.to_string()).collect()),
            r.window
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[system]
k = 0.25
J = 10
T = 50
N0 = 50   # centre channel
I = 31.830988618379067
tau_eps = 1
";

    #[test]
    fn minimal_config_gets_defaults() {
        let spec = parse_config(MINIMAL).unwrap();
        assert_eq!(spec.system.j, 10);
        assert_eq!(spec.system.hbar_eff, 0.1);
        assert_eq!(spec.classical.samples, 100_000);
        assert_eq!(spec.run.kicks, 25);
        assert_eq!(spec.run.seed, 0);
        assert_eq!(spec.quantum.overlap, OverlapModel::orthogonal());
        assert_eq!(spec.classical.ring.width, RingWidth::Slice);
    }

    #[test]
    fn emit_is_a_fixed_point() {
        let spec = parse_config(MINIMAL).unwrap();
        let text = spec.emit();
        let again = parse_config(&text).unwrap();
        assert_eq!(again, spec);
        assert_eq!(again.emit(), text);
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let text = MINIMAL.replace("k = 0.25", "k == 1");
        let e = parse_config(&text).unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = parse_config("[system]\n\nthis is not a pair\n").unwrap_err();
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn duplicate_unknown_and_mistyped_keys() {
        let e = parse_config(&format!("{MINIMAL}k = 1\n")).unwrap_err();
        assert_eq!((e.line, e.key.as_deref()), (Some(8), Some("system.k")));
        assert!(e.message.contains("duplicate"));

        let e = parse_config(&format!("{MINIMAL}[extra]\n")).unwrap_err();
        assert_eq!(e.line, Some(8));

        let e = parse_config(&format!("{MINIMAL}kk = 1\n")).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("system.kk"));

        let e = parse_config(&MINIMAL.replace("J = 10", "J = ten")).unwrap_err();
        assert_eq!((e.line, e.key.as_deref()), (Some(3), Some("system.J")));
    }

    #[test]
    fn missing_and_out_of_range_values() {
        let e = parse_config(&MINIMAL.replace("tau_eps = 1\n", "")).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("system.tau_eps"));

        let e = parse_config(&MINIMAL.replace("N0 = 50", "N0 = 70")).unwrap_err();
        assert_eq!((e.line, e.key.as_deref()), (Some(5), Some("system.N0")));

        let e = parse_config(&format!("{MINIMAL}[run]\nkicks = 0\n")).unwrap_err();
        assert_eq!((e.line, e.key.as_deref()), (Some(9), Some("run.kicks")));

        let e =
            parse_config(&format!("{MINIMAL}[quantum]\noverlap_mode = gaussian\n")).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("quantum.sigma_eps"));
    }

    #[test]
    fn full_config_round_trips() {
        let text = format!(
            "{MINIMAL}[quantum]\noverlap_mode = gaussian\nsigma_eps = 0.5\ndump_smatrix = true\n\
             [classical]\nsamples = 500\nenergy_jitter = 0.01\nring = thin\nmarkov = true\n\
             [run]\nkicks = 12\nseed = 7\noutdir = results/a\nname = fig1_a\nscales = 0.2, 0.4, 1, 10\n\
             workers = 3\nsnapshots = 0, 10\nwindow = 4\n"
        );
        let spec = parse_config(&text).unwrap();
        assert_eq!(spec.run.scales, vec![0.2, 0.4, 1.0, 10.0]);
        assert_eq!(spec.run.snapshots, vec![0, 10]);
        assert_eq!(spec.classical.ring.width, RingWidth::Thin);
        assert_eq!(parse_config(&spec.emit()).unwrap(), spec);
    }
}
