//! Key=value experiment configuration: parsing, schema validation, and
//! typed access.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Value type of one configuration key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    UInt,
    /// Comma-separated unsigned integers, e.g. `8,16,32`.
    UIntList,
    Float,
    Text,
    Bool,
}

impl ParamKind {
    pub fn name(&self) -> &'static str {
        match self {
            ParamKind::UInt => "uint",
            ParamKind::UIntList => "uint-list",
            ParamKind::Float => "float",
            ParamKind::Text => "text",
            ParamKind::Bool => "bool",
        }
    }

    fn validate(&self, key: &str, value: &str) -> Result<()> {
        let ok = match self {
            ParamKind::UInt => value.parse::<usize>().is_ok(),
            ParamKind::UIntList => {
                !value.trim().is_empty()
                    && value
                        .split(',')
                        .all(|tok| tok.trim().parse::<usize>().is_ok())
            }
            ParamKind::Float => value.parse::<f64>().is_ok_and(f64::is_finite),
            ParamKind::Text => true,
            ParamKind::Bool => matches!(value, "true" | "false"),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "key '{key}' expects a {} value, got '{value}'",
                self.name()
            )))
        }
    }
}

/// Schema entry for one experiment parameter.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
    pub help: &'static str,
}

/// Registry entry: name, one-line summary, and parameter schema.
#[derive(Debug, Clone, Copy)]
pub struct ExperimentSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
}

impl ExperimentSpec {
    fn param(&self, key: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.key == key)
    }
}

/// Ordered raw key=value pairs; later occurrences of a key win.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub pairs: Vec<(String, String)>,
}

impl RawConfig {
    /// Parses config text: one `key=value` per line, blank lines and
    /// `#`-comments ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse(format!(
                    "line {}: expected key=value, got '{line}'",
                    lineno + 1
                )));
            };
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(RawConfig { pairs })
    }

    /// Appends an override; later entries take precedence in resolution.
    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.pairs.push((key.into(), value.into()));
    }
}

/// Fully validated configuration: every key known, every value parseable,
/// defaults filled in.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub spec: &'static ExperimentSpec,
    pub seed: u64,
    pub plot: bool,
    values: BTreeMap<String, String>,
}

impl ResolvedConfig {
    pub fn name(&self) -> &'static str {
        self.spec.name
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("key '{key}' missing from resolved config"))
    }

    pub fn get_usize(&self, key: &str) -> usize {
        self.raw(key).parse().expect("validated at resolution")
    }

    pub fn get_usize_list(&self, key: &str) -> Vec<usize> {
        self.raw(key)
            .split(',')
            .map(|tok| tok.trim().parse().expect("validated at resolution"))
            .collect()
    }

    pub fn get_f64(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("validated at resolution")
    }

    pub fn get_str(&self, key: &str) -> &str {
        self.raw(key)
    }

    pub fn get_bool(&self, key: &str) -> bool {
        self.raw(key) == "true"
    }

    /// Metadata lines embedded at the top of every output file: format
    /// version, experiment name, and the full resolved configuration.
    pub fn echo_lines(&self) -> Vec<String> {
        let mut out = vec![
            "# format-version: 1".to_string(),
            format!("# experiment: {}", self.spec.name),
            format!("# seed = {}", self.seed),
            format!("# plot = {}", self.plot),
        ];
        for p in self.spec.params {
            out.push(format!("# {} = {}", p.key, self.raw(p.key)));
        }
        out
    }
}

/// Validates raw pairs against an experiment schema, rejecting unknown keys
/// and malformed values, and fills in defaults.
pub fn resolve(
    raw: &RawConfig,
    spec_for: impl Fn(&str) -> Option<&'static ExperimentSpec>,
) -> Result<ResolvedConfig> {
    let name = raw
        .pairs
        .iter()
        .rev()
        .find(|(k, _)| k == "experiment")
        .map(|(_, v)| v.clone())
        .ok_or_else(|| Error::Parse("missing 'experiment' key".into()))?;
    let spec =
        spec_for(&name).ok_or_else(|| Error::UnknownExperiment(name.clone()))?;

    let mut seed_text = "0".to_string();
    let mut plot_text = "false".to_string();
    let mut values: BTreeMap<String, String> = spec
        .params
        .iter()
        .map(|p| (p.key.to_string(), p.default.to_string()))
        .collect();

    for (key, value) in &raw.pairs {
        match key.as_str() {
            "experiment" => {}
            "seed" => {
                if value.parse::<u64>().is_err() {
                    return Err(Error::Parse(format!(
                        "key 'seed' expects a uint value, got '{value}'"
                    )));
                }
                seed_text = value.clone();
            }
            "plot" => {
                if !matches!(value.as_str(), "true" | "false") {
                    return Err(Error::Parse(format!(
                        "key 'plot' expects a bool value, got '{value}'"
                    )));
                }
                plot_text = value.clone();
            }
            other => {
                let Some(p) = spec.param(other) else {
                    return Err(Error::Parse(format!(
                        "unknown key '{other}' for experiment '{}'",
                        spec.name
                    )));
                };
                p.kind.validate(other, value)?;
                values.insert(other.to_string(), value.clone());
            }
        }
    }
    Ok(ResolvedConfig {
        spec,
        seed: seed_text.parse().unwrap(),
        plot: plot_text == "true",
        values,
    })
}
