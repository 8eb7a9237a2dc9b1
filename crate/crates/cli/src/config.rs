use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use miop::base::{Family, FamilyParams};
use miop::exact::{parse_rational, Rational};
use miop::multi_indexed::DeletionSet;
use miop::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Base,
    Virtual,
    Casoratian,
    Chain,
    Multi,
    Limits,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Base,
        Suite::Virtual,
        Suite::Casoratian,
        Suite::Chain,
        Suite::Multi,
        Suite::Limits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Base => "base",
            Suite::Virtual => "virtual",
            Suite::Casoratian => "casoratian",
            Suite::Chain => "chain",
            Suite::Multi => "multi",
            Suite::Limits => "limits",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?} (expected json or csv)"))),
        }
    }
}

/// Everything a run depends on. Parameters stay strings so the config
/// serialises exactly as it was given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Family,
    pub params: BTreeMap<String, String>,
    pub deletions: Vec<usize>,
    pub n_max: usize,
    pub x_max: i64,
    pub rel_tol: String,
    pub format: Format,
    pub suites: Vec<Suite>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: Family::Meixner,
            params: [("beta", "1"), ("c", "1/2")]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            deletions: vec![1],
            n_max: 3,
            x_max: 20,
            rel_tol: "1e-20".into(),
            format: Format::Json,
            suites: Suite::ALL.to_vec(),
        }
    }
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Setup {
    pub params: FamilyParams,
    pub deletions: DeletionSet,
    pub rel_tol: Rational,
}

/// `"beta=1,c=1/2"`.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, String>, Error> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got {part:?}")))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("parameter {k:?} given twice")));
        }
    }
    Ok(out)
}

/// `"1,3"`; empty or `"none"` is the empty set.
pub fn parse_deletions(s: &str) -> Result<Vec<usize>, Error> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    if s.is_empty() || s == "none" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|d| {
            d.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not a deletion label: {d:?}")))
        })
        .collect()
}

pub fn parse_suites(s: &str) -> Result<Vec<Suite>, Error> {
    if s.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut suites = s.split(',').map(Suite::from_str).collect::<Result<Vec<_>, _>>()?;
    suites.sort();
    suites.dedup();
    Ok(suites)
}

impl RunConfig {
    pub fn setup(&self) -> Result<Setup, Error> {
        let names: &[&str] = match self.family {
            Family::Meixner => &["beta", "c"],
            Family::LittleQJacobi => &["a", "b", "q"],
            Family::LittleQLaguerre => &["a", "q"],
        };
        if let Some(k) = self.params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(Error::Parse(format!(
                "unknown parameter {k:?} for {} (expected {})",
                self.family,
                names.join(", ")
            )));
        }
        let get = |k: &str| -> Result<Rational, Error> {
            let v = self
                .params
                .get(k)
                .ok_or_else(|| Error::Parse(format!("{} needs parameter {k}", self.family)))?;
            parse_rational(v)
        };
        let params = match self.family {
            Family::Meixner => FamilyParams::meixner(get("beta")?, get("c")?)?,
            Family::LittleQJacobi => FamilyParams::little_q_jacobi(get("a")?, get("b")?, get("q")?)?,
            Family::LittleQLaguerre => FamilyParams::little_q_laguerre(get("a")?, get("q")?)?,
        };
        let deletions = DeletionSet::new(&params, self.deletions.clone())?;
        let rel_tol = parse_rational(&self.rel_tol)?;
        if rel_tol <= Rational::from_integer(0.into()) {
            return Err(Error::Parse(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.x_max < 0 {
            return Err(Error::Parse(format!("x_max must be non-negative, got {}", self.x_max)));
        }
        if self.suites.is_empty() {
            return Err(Error::Parse("no suite selected".into()));
        }
        Ok(Setup { params, deletions, rel_tol })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let p = parse_params("beta=5/2, c=1/3").unwrap();
        assert_eq!(p["beta"], "5/2");
        assert!(parse_params("beta=1,beta=2").is_err());
        assert!(parse_params("beta").is_err());
        assert_eq!(parse_deletions("{1,3}").unwrap(), vec![1, 3]);
        assert_eq!(parse_deletions("none").unwrap(), Vec::<usize>::new());
        assert!(parse_deletions("1,x").is_err());
        assert_eq!(parse_suites("multi,base,multi").unwrap(), vec![Suite::Base, Suite::Multi]);
        assert_eq!(parse_suites("all").unwrap().len(), 6);
        assert!(parse_suites("nope").is_err());
    }

    #[test]
    fn setup_validates() {
        assert!(RunConfig::default().setup().is_ok());
        let mut cfg = RunConfig::default();
        cfg.params.insert("a".into(), "1/2".into());
        assert!(cfg.setup().is_err());
        let mut cfg = RunConfig::default();
        cfg.rel_tol = "0".into();
        assert!(cfg.setup().is_err());
        let mut cfg = RunConfig::default();
        cfg.deletions = vec![1, 1];
        assert!(cfg.setup().is_err());
    }

    #[test]
    fn config_round_trips() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }
}
