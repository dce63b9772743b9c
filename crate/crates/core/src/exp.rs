//! Config-driven experiment runner: a registry of named experiments,
//! plain-text key=value configuration, and deterministic CSV/SVG artifacts.
//!
//! Every run embeds its fully resolved configuration as `#`-prefixed echo
//! lines at the top of the CSV, so an output file is a complete record of
//! how it was produced. Identical configurations produce byte-identical
//! files.

mod config;
mod defs;
mod plot;

pub use config::{ExperimentSpec, ParamKind, ParamSpec, RawConfig, ResolvedConfig};
pub use defs::registry;

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::write_text;

/// Table produced by one experiment run: a header, data rows, and plot
/// renderings keyed by a file-name suffix.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub plots: Vec<(&'static str, String)>,
}

/// Looks up a registered experiment by name.
pub fn find_spec(name: &str) -> Option<&'static ExperimentSpec> {
    defs::find_spec(name)
}

/// Validates raw key=value pairs against the registry and fills defaults.
pub fn resolve(raw: &RawConfig) -> Result<ResolvedConfig> {
    config::resolve(raw, defs::find_spec)
}

/// Renders the full CSV text: `#` echo lines, header row, data rows, all
/// with LF line endings.
pub fn render_csv(cfg: &ResolvedConfig, out: &ExperimentOutput) -> String {
    let mut s = String::new();
    for line in cfg.echo_lines() {
        s.push_str(&line);
        s.push('\n');
    }
    s.push_str(&out.header.join(","));
    s.push('\n');
    for row in &out.rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Runs the experiment named in `cfg` and writes its artifacts under
/// `out_dir` (created if missing): `<name>.csv` always, plus one
/// `<name>_<suffix>.svg` per plot when plotting is enabled. Returns the
/// paths written, CSV first.
pub fn run_experiment(cfg: &ResolvedConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let output = defs::run(cfg)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let csv_path = out_dir.join(format!("{}.csv", cfg.name()));
    write_text(&csv_path, &render_csv(cfg, &output))?;
    written.push(csv_path);
    if cfg.plot {
        for (suffix, svg) in &output.plots {
            let path = out_dir.join(format!("{}_{}.svg", cfg.name(), suffix));
            write_text(&path, svg)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// One human-readable line per registered experiment: name, summary, and
/// every key with its default.
pub fn list_lines() -> Vec<String> {
    registry()
        .iter()
        .map(|spec| {
            let keys: Vec<String> = spec
                .params
                .iter()
                .map(|p| format!("{}={}", p.key, p.default))
                .collect();
            format!("{}: {} [{}]", spec.name, spec.summary, keys.join(" "))
        })
        .collect()
}

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Machine-readable registry schema: one CSV row per parameter.
pub fn schema_csv() -> String {
    let mut s = String::from("experiment,key,kind,default\n");
    for spec in registry() {
        for p in spec.params {
            s.push_str(&format!(
                "{},{},{},{}\n",
                spec.name,
                p.key,
                p.kind.name(),
                csv_field(p.default)
            ));
        }
    }
    s
}

/// Multi-line description of one experiment: summary, parameters with
/// kinds and defaults, and the keys shared by every experiment.
pub fn describe(name: &str) -> Result<String> {
    let spec = find_spec(name).ok_or_else(|| Error::UnknownExperiment(name.to_string()))?;
    let mut s = format!("{}\n  {}\n\nparameters:\n", spec.name, spec.summary);
    for p in spec.params {
        s.push_str(&format!(
            "  {} ({}, default {}): {}\n",
            p.key,
            p.kind.name(),
            p.default,
            p.help
        ));
    }
    s.push_str(
        "\ncommon keys: experiment (name to run), seed (unsigned integer, default 0), \
         plot (true/false, default false)\n",
    );
    Ok(s)
}

/// Process exit code for a runner failure: 2 for an unknown experiment,
/// 3 for malformed configuration or bad parameter values, 4 for
/// filesystem failures, 1 for any other internal error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownExperiment(_) => 2,
        Error::Parse(_) | Error::InvalidArgument(_) => 3,
        Error::Io(_) => 4,
        _ => 1,
    }
}
