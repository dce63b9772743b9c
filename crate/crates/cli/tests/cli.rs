//! End-to-end tests for the `numbench` binary: verbs, exit codes, artifact
//! layout, and bit-level reproducibility of written CSV files.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_numbench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should execute")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

/// Splits a rendered CSV into (metadata lines, header, data rows).
fn split_csv(text: &str) -> (Vec<&str>, &str, Vec<&str>) {
    let mut meta = Vec::new();
    let mut header = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') {
            assert!(header.is_none(), "metadata after the header row");
            meta.push(line);
        } else if header.is_none() {
            header = Some(line);
        } else {
            rows.push(line);
        }
    }
    (meta, header.expect("csv should have a header row"), rows)
}

#[test]
fn list_prints_one_line_per_experiment_with_at_least_twelve() {
    let out = run(&["list"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(
        lines.len() >= 12,
        "expected at least 12 experiments, got {}",
        lines.len()
    );
    for line in &lines {
        assert!(line.contains(": "), "malformed listing line: {line}");
        assert!(line.ends_with(']'), "listing line lacks defaults: {line}");
    }
    assert!(lines.iter().any(|l| l.starts_with("stopping_times: ")));
    assert!(lines.iter().any(|l| l.starts_with("osi_scan: ")));
}

#[test]
fn machine_listing_emits_the_parameter_schema_as_csv() {
    let plain = stdout_of(&run(&["list"]));
    let out = run(&["list", "--machine"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("experiment,key,kind,default"));
    let body: Vec<&str> = lines.collect();
    for listing_line in plain.lines() {
        let name = listing_line.split(':').next().unwrap();
        assert!(
            body.iter().any(|row| row.starts_with(&format!("{name},"))),
            "schema is missing experiment {name}"
        );
    }
    assert!(body.contains(&"stopping_times,eps,float,1e-3"));
    // List-valued defaults contain commas and must be quoted.
    assert!(body.contains(&"two_grid,m_list,uint-list,\"3,7,15\""));
}

#[test]
fn describe_shows_parameters_and_rejects_unknown_names() {
    let out = run(&["describe", "stopping_times"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with("stopping_times\n"));
    for key in ["p", "n", "eps", "trials", "seed", "plot"] {
        assert!(text.contains(key), "describe output lacks {key}");
    }

    let bad = run(&["describe", "perpetual_motion"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr_of(&bad).contains("unknown experiment"));
    assert!(stdout_of(&bad).is_empty());
}

#[test]
fn failure_exit_codes_are_distinct_by_cause() {
    let dir = tempfile::tempdir().unwrap();
    let out_arg = dir.path().to_str().unwrap();

    let unknown = run(&["run", "perpetual_motion", "--out", out_arg]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr_of(&unknown).contains("unknown experiment"));

    let bad_value = run(&[
        "run",
        "stopping_times",
        "--set",
        "trials=plenty",
        "--out",
        out_arg,
    ]);
    assert_eq!(bad_value.status.code(), Some(3));
    assert!(stderr_of(&bad_value).contains("trials"));

    let bad_key = run(&[
        "run",
        "stopping_times",
        "--set",
        "bogus_knob=1",
        "--out",
        out_arg,
    ]);
    assert_eq!(bad_key.status.code(), Some(3));

    // A regular file in the middle of the output path cannot become a
    // directory, so artifact creation must fail with the I/O exit code.
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "occupied").unwrap();
    let sub = blocker.join("sub");
    let unwritable = run(&[
        "run",
        "stopping_times",
        "--set",
        "trials=2",
        "--out",
        sub.to_str().unwrap(),
    ]);
    assert_eq!(unwritable.status.code(), Some(4));
}

#[test]
fn paired_stopping_time_run_writes_the_documented_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "run",
        "stopping_times",
        "--set",
        "p=1",
        "--set",
        "n=64",
        "--set",
        "eps=1e-3",
        "--set",
        "trials=20",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let path = dir.path().join("stopping_times.csv");
    assert!(stdout_of(&out).contains("stopping_times.csv"));
    let bytes = std::fs::read(&path).unwrap();
    assert!(!bytes.contains(&b'\r'), "CSV must use LF line endings");
    assert_eq!(bytes.last(), Some(&b'\n'));

    let text = String::from_utf8(bytes).unwrap();
    let (meta, header, rows) = split_csv(&text);
    assert_eq!(meta[0], "# format-version: 1");
    assert_eq!(meta[1], "# experiment: stopping_times");
    assert!(meta.contains(&"# seed = 7"));
    assert!(meta.contains(&"# eps = 1e-3"));
    assert_eq!(header, "trial,t_cg,t_rcd");
    assert_eq!(rows.len(), 20);
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 3);
        assert_eq!(cells[0], i.to_string(), "rows must be ordered by trial");
        for cell in &cells[1..] {
            let steps: u64 = cell.parse().expect("step counts are integers");
            assert!(steps >= 1);
        }
    }
}

#[test]
fn injection_scan_example_writes_a_failure_rate_table_reproducibly() {
    let args = |out_dir: &Path| {
        vec![
            "run".to_string(),
            "osi_scan".to_string(),
            "--set".into(),
            "family=sparsestack".into(),
            "--set".into(),
            "n=4096".into(),
            "--set".into(),
            "r=16".into(),
            "--set".into(),
            "k=32".into(),
            "--set".into(),
            "zeta=4".into(),
            "--set".into(),
            "trials=200".into(),
            "--seed".into(),
            "1".into(),
            "--out".into(),
            out_dir.to_str().unwrap().to_string(),
        ]
    };
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let first = bin().args(args(dir_a.path())).output().unwrap();
    assert!(first.status.success(), "stderr: {}", stderr_of(&first));
    let second = bin().args(args(dir_b.path())).output().unwrap();
    assert!(second.status.success());

    let bytes_a = std::fs::read(dir_a.path().join("osi_scan.csv")).unwrap();
    let bytes_b = std::fs::read(dir_b.path().join("osi_scan.csv")).unwrap();
    assert_eq!(bytes_a, bytes_b, "identical runs must be byte-identical");

    let text = String::from_utf8(bytes_a).unwrap();
    let (meta, header, rows) = split_csv(&text);
    assert!(meta.contains(&"# seed = 1"));
    assert_eq!(
        header,
        "family,n,r,k,zeta,threshold,trials,failures,failure_rate"
    );
    assert_eq!(rows.len(), 1, "one grid cell means one data row");
    let cells: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(cells[1], "4096");
    assert_eq!(cells[3], "32");
    assert_eq!(cells[6], "200");
    let rate: f64 = cells[8].parse().unwrap();
    assert!((0.0..=1.0).contains(&rate));
}

#[test]
fn config_file_and_flags_compose_with_later_sources_winning() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.cfg");
    std::fs::write(
        &config,
        "experiment = generate\n# a comment line\nreps = 6\ndelta = 0.3\n",
    )
    .unwrap();

    // The positional name replaces the config file's experiment, --set
    // replaces one config value, and --seed replaces the default seed.
    let out = run(&[
        "run",
        "sign_error",
        "--config",
        config.to_str().unwrap(),
        "--set",
        "reps=3",
        "--seed",
        "11",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = std::fs::read_to_string(dir.path().join("sign_error.csv")).unwrap();
    let (meta, _, rows) = split_csv(&text);
    assert!(meta.contains(&"# experiment: sign_error"));
    assert!(meta.contains(&"# reps = 3"));
    assert!(meta.contains(&"# delta = 0.3"));
    assert!(meta.contains(&"# seed = 11"));
    assert_eq!(rows.len(), 3);
}

#[test]
fn plot_flag_writes_svg_artifacts_next_to_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "run",
        "sign_error",
        "--set",
        "reps=4",
        "--plot",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let printed = stdout_of(&out);
    assert!(printed.contains("sign_error.csv"));
    assert!(printed.contains("sign_error_convergence.svg"));

    let svg = std::fs::read_to_string(dir.path().join("sign_error_convergence.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("</svg>"));

    let csv = std::fs::read_to_string(dir.path().join("sign_error.csv")).unwrap();
    let (meta, _, _) = split_csv(&csv);
    assert!(meta.contains(&"# plot = true"));
}

#[test]
fn seed_flag_selects_the_random_stream() {
    let dir = tempfile::tempdir().unwrap();
    let csv_for = |label: &str, seed: &str| {
        let sub = dir.path().join(label);
        let out = run(&[
            "run",
            "stopping_times",
            "--set",
            "trials=5",
            "--seed",
            seed,
            "--out",
            sub.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(sub.join("stopping_times.csv")).unwrap()
    };
    let a1 = csv_for("a1", "3");
    let a2 = csv_for("a2", "3");
    let b = csv_for("b", "4");
    assert_eq!(a1, a2, "same seed must reproduce the same bytes");
    assert_ne!(a1, b, "different seeds must give different draws");
}
