// End-to-end runs of the pacsdiv binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pacsdiv_cli::exit;
use serde_json::Value;
use sha2::{Digest, Sha256};

const GOLDEN_ARGS: [&str; 10] = [
    "--windows",
    "2000-2002,2002-2004,2004-2006",
    "--cohorts",
    "2000-2003,2003-2006",
    "--horizon",
    "2",
    "--period",
    "2000-2006",
    "--groups",
    "0-1,2-3,4-8,9+",
];

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden_corpus.jsonl")
}

fn pacsdiv(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pacsdiv"));
    cmd.env_remove("PACSDIV_OUT_DIR").args(args);
    cmd
}

fn run_in(out: &Path, input: &Path, extra: &[&str]) -> Output {
    pacsdiv(extra)
        .arg("--input")
        .arg(input)
        .arg("--out-dir")
        .arg(out)
        .output()
        .unwrap()
}

fn golden(out: &Path, command: &str, extra: &[&str]) -> Output {
    let mut args: Vec<&str> = GOLDEN_ARGS.to_vec();
    args.extend_from_slice(extra);
    args.push(command);
    run_in(out, &fixture(), &args)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn record(doi: &str, year: i32, authors: &[&str], pacs: &[&str], refs: &[&str]) -> String {
    serde_json::json!({
        "doi": doi,
        "title": doi,
        "authors": authors,
        "date": format!("{year}-06-01"),
        "pacs": pacs,
        "refs": refs,
    })
    .to_string()
}

#[test]
fn every_command_matches_golden() {
    let out = tempfile::tempdir().unwrap();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden");
    for command in pacsdiv_cli::Command::ALL {
        let name = command.name();
        let o = golden(out.path(), name, &[]);
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let got = fs::read_to_string(out.path().join(format!("{name}.csv"))).unwrap();
        let want = fs::read_to_string(dir.join(format!("{name}.csv"))).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for name in ["flows", "diversity-citations"] {
        golden(a.path(), name, &["--threads", "1"]);
        golden(b.path(), name, &["--threads", "3"]);
        for file in [format!("{name}.csv"), format!("{name}.meta.json")] {
            assert_eq!(
                fs::read(a.path().join(&file)).unwrap(),
                fs::read(b.path().join(&file)).unwrap(),
                "{file}"
            );
        }
    }
}

#[test]
fn json_rows_mirror_csv() {
    let out = tempfile::tempdir().unwrap();
    assert!(golden(out.path(), "groups", &["--format", "json"])
        .status
        .success());
    let v: Value =
        serde_json::from_slice(&fs::read(out.path().join("groups.json")).unwrap()).unwrap();
    assert_eq!(
        v["columns"],
        serde_json::json!(["window", "active_authors", "G1", "G2", "G3", "G4"])
    );
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["window"], "2000-2002");
    assert_eq!(rows[0]["active_authors"], 3);
    assert_eq!(rows[0]["G1"], serde_json::json!(0.333333));
    assert_eq!(rows[2]["G2"], serde_json::json!(0.6));
}

#[test]
fn meta_sidecar_records_inputs_and_settings() {
    let out = tempfile::tempdir().unwrap();
    assert!(golden(out.path(), "citation-age", &[]).status.success());
    let meta: Value =
        serde_json::from_slice(&fs::read(out.path().join("citation-age.meta.json")).unwrap())
            .unwrap();
    let digest = hex::encode(Sha256::digest(fs::read(fixture()).unwrap()));
    assert_eq!(meta["command"], "citation-age");
    assert_eq!(meta["output"], "citation-age.csv");
    assert_eq!(meta["corpus"]["file"], "golden_corpus.jsonl");
    assert_eq!(meta["corpus"]["sha256"], digest.as_str());
    assert_eq!(meta["corpus"]["records"], 12);
    assert_eq!(meta["config"]["horizon"], 2);
    assert_eq!(meta["config"]["cohorts"], "2000-2003,2003-2006");
    assert_eq!(meta["config"]["zero_pacs"], "exclude");
    assert!(meta["config"].get("threads").is_none());
    assert_eq!(meta["ingest"]["negative_age_citations"], 1);
    assert_eq!(meta["ingest"]["dangling_references"], 1);
    assert!(meta["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("negative")));
}

#[test]
fn out_dir_from_environment() {
    let out = tempfile::tempdir().unwrap();
    let status = pacsdiv(&["validate", "--input"])
        .arg(fixture())
        .env("PACSDIV_OUT_DIR", out.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.path().join("validate.csv").exists());
}

#[test]
fn config_file_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from-config");
    let config = write(
        dir.path(),
        "run.toml",
        &format!(
            "input = {:?}\nout_dir = {:?}\ncohorts = \"2000-2003\"\nhorizon = 5\nformat = \"json\"\n",
            fixture(),
            out
        ),
    );
    let status = pacsdiv(&[
        "citation-age",
        "--horizon",
        "2",
        "--config",
        config.to_str().unwrap(),
    ])
    .env("PACSDIV_OUT_DIR", dir.path().join("from-env"))
    .status()
    .unwrap();
    assert!(status.success());
    let meta: Value =
        serde_json::from_slice(&fs::read(out.join("citation-age.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["horizon"], 2);
    assert_eq!(meta["config"]["cohorts"], "2000-2003");
    assert_eq!(meta["output"], "citation-age.json");
    assert!(!dir.path().join("from-env").exists());
}

#[test]
fn exit_codes_by_failure_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let good = record("a", 2000, &["X"], &["04.25"], &[]);
    let bad_json = write(dir.path(), "bad.jsonl", &format!("{good}\n{{not json\n"));
    let duplicate = write(dir.path(), "dup.jsonl", &format!("{good}\n{good}\n"));
    let unknown_key = write(dir.path(), "bad.toml", "horizen = 3\n");

    let code = |o: Output| o.status.code().unwrap();
    assert_eq!(
        code(run_in(
            &out,
            &dir.path().join("missing.jsonl"),
            &["summary"]
        )),
        exit::IO
    );
    assert_eq!(
        code(run_in(&out, &bad_json, &["summary"])),
        exit::INPUT_FORMAT
    );
    assert_eq!(
        code(run_in(&out, &duplicate, &["summary"])),
        exit::DUPLICATE_DOI
    );
    assert_eq!(
        code(run_in(
            &out,
            &fixture(),
            &["--windows", "2000-1990", "groups"]
        )),
        exit::CONFIG
    );
    assert_eq!(
        code(run_in(
            &out,
            &fixture(),
            &["--horizon", "0", "citation-age"]
        )),
        exit::CONFIG
    );
    assert_eq!(
        code(run_in(
            &out,
            &fixture(),
            &["--config", unknown_key.to_str().unwrap(), "summary"]
        )),
        exit::CONFIG
    );
    assert_eq!(
        code(run_in(
            &out,
            &fixture(),
            &["--cohorts", "1950-1960", "citation-age"]
        )),
        exit::EMPTY_SELECTION
    );
    assert_eq!(
        code(run_in(
            &out,
            &fixture(),
            &["--period", "1950-1960", "summary"]
        )),
        exit::EMPTY_SELECTION
    );
    assert_eq!(code(pacsdiv(&[]).output().unwrap()), exit::USAGE);
    assert_eq!(
        code(pacsdiv(&["summary", "--no-such-flag"]).output().unwrap()),
        exit::USAGE
    );
    assert_eq!(code(pacsdiv(&["summary"]).output().unwrap()), exit::CONFIG);

    // failed runs leave nothing behind
    assert!(!out.exists() || fs::read_dir(&out).unwrap().next().is_none());
}

#[test]
fn errors_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let duplicate = write(
        dir.path(),
        "dup.jsonl",
        &format!("{0}\n{0}\n", record("10.1/x", 2000, &["X"], &[], &[])),
    );
    let o = run_in(dir.path(), &duplicate, &["summary"]);
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(
        stderr.contains("10.1/x") && stderr.contains("line 2"),
        "{stderr}"
    );
}

#[test]
fn lenient_ingest_reports_dropped_lines() {
    let dir = tempfile::tempdir().unwrap();
    let lines = [
        record("a", 2000, &["X"], &["04.25"], &[]),
        "{broken".to_string(),
        record("b", 2001, &["Y"], &["07.05"], &["a"]),
        record("a", 2002, &["Z"], &[], &[]),
    ];
    let input = write(dir.path(), "in.jsonl", &(lines.join("\n") + "\n"));
    let o = run_in(dir.path(), &input, &["--skip-invalid-lines", "validate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dropped = fs::read_to_string(dir.path().join("dropped_records.csv")).unwrap();
    let rows: Vec<&str> = dropped.lines().collect();
    assert_eq!(rows[0], "line,reason");
    assert_eq!(rows.len(), 3);
    assert!(
        rows[1].starts_with("2,") && rows[2].starts_with("4,"),
        "{dropped}"
    );
    let report = fs::read_to_string(dir.path().join("validate.csv")).unwrap();
    assert!(
        report.contains("lines_read,4\n")
            && report.contains("records_accepted,2\n")
            && report.contains("lines_dropped,2\n")
    );
}

#[test]
fn known_codes_only_counted() {
    let dir = tempfile::tempdir().unwrap();
    let known = write(dir.path(), "codes.txt", "# subset\n04.25\n07.05\n");
    let o = golden(
        dir.path(),
        "validate",
        &["--known-codes", known.to_str().unwrap()],
    );
    assert!(o.status.success());
    let report = fs::read_to_string(dir.path().join("validate.csv")).unwrap();
    assert!(report.contains("records_accepted,12\n"));
    let unknown: usize = report
        .lines()
        .find_map(|l| l.strip_prefix("unknown_codes,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(unknown > 0);
}

#[test]
fn default_settings_on_synthetic_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "synthetic.jsonl",
        &pacsdiv_cli::synth::jsonl(4000, 3),
    );
    for name in ["groups", "share", "diversity-citations"] {
        let o = run_in(dir.path(), &input, &[name]);
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let groups = fs::read_to_string(dir.path().join("groups.csv")).unwrap();
    let rows: Vec<&str> = groups.lines().collect();
    assert_eq!(rows[0], "window,active_authors,G1,G2,G3,G4");
    let windows: Vec<&str> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap())
        .collect();
    assert_eq!(
        windows,
        [
            "1985-1990",
            "1990-1995",
            "1995-2000",
            "2000-2005",
            "2005-2010"
        ]
    );

    let share = fs::read_to_string(dir.path().join("share.csv")).unwrap();
    assert!(share.starts_with("diversity,1985-1994,1994-2003\n"));
    assert!(share.ends_with("\n") && share.lines().last().unwrap().starts_with("9+,"));

    let dc = fs::read_to_string(dir.path().join("diversity-citations.csv")).unwrap();
    let ages: std::collections::BTreeSet<u32> = dc
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ages, (0..=10).collect());
    for band in ["low", "medium", "high"] {
        assert!(dc.contains(&format!(",band,{band},")), "{band}");
    }
}

#[test]
fn cumulative_mode_is_labelled() {
    let out = tempfile::tempdir().unwrap();
    assert!(
        golden(out.path(), "flows", &["--author-mode", "cumulative"])
            .status
            .success()
    );
    let meta: Value =
        serde_json::from_slice(&fs::read(out.path().join("flows.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["author_mode"], "cumulative");
    assert!(meta["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n == "author diversity mode: cumulative"));
}
