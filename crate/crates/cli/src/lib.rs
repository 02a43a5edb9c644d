//! Scenario runner and report plumbing behind the `idele` binary.

mod parse;
mod scenarios;

use std::time::Instant;

use serde_json::{json, Map, Value};

use idele_core::curve::Curve;
use idele_core::gf::{Fe, Field};
use idele_core::verdict::{Check, CheckStatus};
use idele_core::{Error, Result};

pub use parse::{parse_divisor, parse_json_arg, parse_target};
pub use scenarios::SCENARIOS;

/// `P^1` or the Weierstrass curve `y^2 = x^3 + a·x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveSpec {
    P1 { q: u32 },
    Elliptic { q: u32, a: String, b: String },
}

impl CurveSpec {
    pub fn q(&self) -> u32 {
        match self {
            CurveSpec::P1 { q } | CurveSpec::Elliptic { q, .. } => *q,
        }
    }

    pub fn build(&self) -> Result<Curve> {
        let k = field_of_order(self.q())?;
        match self {
            CurveSpec::P1 { .. } => Ok(Curve::p1(&k)),
            CurveSpec::Elliptic { a, b, .. } => {
                let (a, b): (Fe, Fe) = (k.parse(a)?, k.parse(b)?);
                Curve::elliptic(&k, a, b)
            }
        }
    }
}

/// `F_q` for a prime power `q`.
pub fn field_of_order(q: u32) -> Result<Field> {
    if q < 2 {
        return Err(Error::Precondition(format!("q = {q} is not a prime power")));
    }
    let p = (2..=q).find(|p| q.is_multiple_of(*p)).expect("q >= 2 has a prime factor");
    let (mut e, mut r) = (0, q);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 {
        return Err(Error::Precondition(format!("q = {q} is not a prime power")));
    }
    Field::new(p, e)
}

/// Everything a scenario reads.
#[derive(Clone, Debug)]
pub struct Config {
    pub curve: CurveSpec,
    pub window: u32,
    pub seed: u64,
    pub trials: usize,
}

impl Config {
    pub fn new(curve: CurveSpec, window: u32, seed: u64, trials: usize) -> Config {
        Config { curve, window, seed, trials }
    }
}

/// Result of one command: checks sorted by name plus a scenario payload.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub curve: String,
    pub q: u32,
    pub window: u32,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub data: Value,
    pub wall_time: f64,
}

impl RunReport {
    pub fn new(command: &str, curve: &Curve, window: u32, seed: u64) -> RunReport {
        RunReport {
            command: command.to_string(),
            curve: curve.describe(),
            q: curve.field().order(),
            window,
            seed,
            checks: Vec::new(),
            data: Value::Null,
            wall_time: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.status.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status.is_failure())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// JSON with keys in sorted order.
    pub fn to_json(&self) -> Value {
        let mut checks = self.checks.clone();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        json!({
            "command": self.command,
            "curve": self.curve,
            "q": self.q,
            "window": self.window,
            "seed": self.seed,
            "checks": checks,
            "data": self.data,
            "version": env!("CARGO_PKG_VERSION"),
            "wall_time": self.wall_time,
        })
    }

    pub fn canonical(&self) -> String {
        canonical_string(&self.to_json())
    }

    /// The canonical form with `wall_time` removed, for reproducibility checks.
    pub fn canonical_without_wall_time(&self) -> String {
        let mut v = self.to_json();
        if let Value::Object(m) = &mut v {
            m.remove("wall_time");
        }
        canonical_string(&v)
    }

    /// One line per check for stderr.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} on {} (window {}, seed {}): {}\n",
            self.command,
            self.curve,
            self.window,
            self.seed,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skip",
            };
            out.push_str(&format!("  [{tag}] {}\n", c.name));
        }
        out.push_str(&format!("  wall time {:.3}s\n", self.wall_time));
        out
    }
}

fn sort_value(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), sort_value(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_value).collect()),
        other => other.clone(),
    }
}

/// Compact JSON with object keys sorted at every level.
pub fn canonical_string(v: &Value) -> String {
    serde_json::to_string(&sort_value(v)).expect("JSON values serialize")
}

/// Run a named scenario and stamp the wall time.
pub fn run_scenario(name: &str, config: &Config) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = scenarios::dispatch(name, config)?;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Fold per-trial checks into one check per name: fail if any failed, pass
/// if any passed, otherwise skipped. Counts and up to three failing
/// witnesses are kept.
pub fn aggregate(name_prefix: &str, checks: impl IntoIterator<Item = Check>) -> Vec<Check> {
    use std::collections::BTreeMap;
    let mut acc: BTreeMap<String, (usize, usize, usize, Vec<Value>)> = BTreeMap::new();
    for c in checks {
        let e = acc.entry(c.name.clone()).or_default();
        match c.status {
            CheckStatus::Pass => e.0 += 1,
            CheckStatus::Fail => {
                e.1 += 1;
                if e.3.len() < 3 {
                    e.3.push(c.witness);
                }
            }
            CheckStatus::Skipped => e.2 += 1,
        }
    }
    acc.into_iter()
        .map(|(name, (pass, fail, skipped, witnesses))| {
            let status = if fail > 0 {
                CheckStatus::Fail
            } else if pass > 0 {
                CheckStatus::Pass
            } else {
                CheckStatus::Skipped
            };
            Check::new(
                format!("{name_prefix}{name}"),
                status,
                json!({"pass": pass, "fail": fail, "skipped": skipped, "failures": witnesses}),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(field_of_order(9).unwrap().order(), 9);
        assert_eq!(field_of_order(7).unwrap().order(), 7);
        assert!(field_of_order(6).is_err());
        assert!(field_of_order(1).is_err());
    }

    #[test]
    fn canonical_sorts_nested_keys() {
        let v = json!({"b": {"z": 1, "a": 2}, "a": [ {"y": 0, "x": 1} ]});
        assert_eq!(canonical_string(&v), r#"{"a":[{"x":1,"y":0}],"b":{"a":2,"z":1}}"#);
    }

    #[test]
    fn aggregate_statuses() {
        let checks = vec![
            Check::pass("a"),
            Check::skipped("a", "x"),
            Check::skipped("b", "x"),
            Check::new("c", CheckStatus::Fail, json!(1)),
            Check::pass("c"),
        ];
        let out = aggregate("s/", checks);
        let st: Vec<_> = out.iter().map(|c| (c.name.as_str(), c.status)).collect();
        assert_eq!(
            st,
            vec![("s/a", CheckStatus::Pass), ("s/b", CheckStatus::Skipped), ("s/c", CheckStatus::Fail)]
        );
    }
}
