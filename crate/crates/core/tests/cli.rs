use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use starsylv::{ExactMatrix, FieldTag};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn starsylv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starsylv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("json report")
}

/// `# key: value` lines of a text report.
fn text_fields(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_scalar_fixture() {
    let out = starsylv(&["solve", path_str(&fixture("scalar_fixture.ssys"))]);
    assert_eq!(code(&out), 0);
    let x = ExactMatrix::parse_text(&stdout(&out), FieldTag::Rationals).unwrap();
    assert_eq!(x, ExactMatrix::from_i64_rows(FieldTag::Rationals, &[&[2]]));
    assert!(stdout(&out).contains("# dim: 0"));
}

#[test]
fn solve_inconsistent_reports_rank_evidence() {
    let out = starsylv(&["solve", path_str(&fixture("inconsistent_gf3.ssys"))]);
    assert_eq!(code(&out), 1);
    let fields = text_fields(&stdout(&out));
    assert!(fields.contains(&("rank".into(), "0".into())));
    assert!(fields.contains(&("augmented_rank".into(), "1".into())));
    let out = starsylv(&["oracle", path_str(&fixture("inconsistent_gf3.ssys"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("# solutions: 0"));
}

#[test]
fn malformed_header_exits_2_with_position() {
    let out = starsylv(&["solve", path_str(&fixture("malformed_header.ssys"))]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("line 3, column 8"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn conjugate_fixtures() {
    let out = starsylv(&[
        "--json",
        "solve",
        path_str(&fixture("conj_inconsistent.ssys")),
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["verdict"], "inconsistent");
    let out = starsylv(&[
        "--json",
        "solve",
        path_str(&fixture("conj_consistent.ssys")),
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["dim"], 1);
    assert_eq!(report["realified"], true);
    assert_eq!(report["x"], serde_json::json!([["i"]]));
    let out = starsylv(&["extract", path_str(&fixture("conj_inconsistent.ssys"))]);
    assert_eq!(code(&out), 1);
}

#[test]
fn char2_gate() {
    let gf2 = fixture("gf2.ssys");
    let out = starsylv(&["solve", path_str(&gf2)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("characteristic 2"));
    let out = starsylv(&["--probe-char2-enable", "solve", path_str(&gf2)]);
    assert_eq!(code(&out), 0);
    let out = starsylv(&["--probe-char2-enable", "extract", path_str(&gf2)]);
    assert_eq!(code(&out), 2);
    let out = starsylv(&["--probe-char2-enable", "oracle", path_str(&gf2)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn witness_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.ssys");
    let x = dir.path().join("x.mat");
    let s = dir.path().join("s.mat");
    let out = starsylv(&[
        "gen",
        "--field",
        "Q",
        "--m",
        "2",
        "--n",
        "3",
        "--ell",
        "2",
        "--seed",
        "11",
        "--out",
        path_str(&sys),
        "--solution-out",
        path_str(&x),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = starsylv(&["witness", path_str(&sys), "--solution", path_str(&x)]);
    assert_eq!(code(&out), 0);
    std::fs::write(&s, stdout(&out)).unwrap();
    let out = starsylv(&["verify", path_str(&sys), "--s", path_str(&s)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("# accepted: true"));
    let out = starsylv(&["analyze", path_str(&sys), "--s", path_str(&s)]);
    assert_eq!(code(&out), 0);
    let fields = text_fields(&stdout(&out));
    assert!(fields.contains(&("claim_i".into(), "true".into())));
    assert!(fields.contains(&("twist_ok".into(), "true".into())));

    // The identity is not a witness once C is nonzero.
    let id = dir.path().join("id.mat");
    std::fs::write(&id, ExactMatrix::identity(FieldTag::Rationals, 5).to_text()).unwrap();
    let out = starsylv(&["verify", path_str(&sys), "--s", path_str(&id)]);
    assert_eq!(code(&out), 1);
    let out = starsylv(&["analyze", path_str(&sys), "--s", path_str(&id)]);
    assert_eq!(code(&out), 2);

    // A matrix that is not a solution cannot produce a witness.
    let out = starsylv(&["witness", path_str(&sys), "--solution", path_str(&s)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn extract_matches_solve_output_shape() {
    let out = starsylv(&["extract", path_str(&fixture("scalar_fixture.ssys"))]);
    assert_eq!(code(&out), 0);
    let x = ExactMatrix::parse_text(&stdout(&out), FieldTag::Rationals).unwrap();
    assert_eq!(x, ExactMatrix::from_i64_rows(FieldTag::Rationals, &[&[2]]));
    assert!(stdout(&out).contains("# residual_zero: true"));
}

#[test]
fn analyze_reports_claim_iv_everywhere() {
    for name in [
        "scalar_fixture.ssys",
        "inconsistent_gf3.ssys",
        "conj_inconsistent.ssys",
        "conj_consistent.ssys",
    ] {
        let out = starsylv(&["--json", "analyze", path_str(&fixture(name))]);
        assert_eq!(code(&out), 0, "{name}");
        let report = json(&out);
        assert_eq!(report["claim_iv"], true);
        assert_eq!(report["claim_i"], Value::Null);
        assert!(report["dim_d"].is_u64() && report["dim_d0"].is_u64());
    }
}

#[test]
fn gen_is_byte_identical() {
    let args = [
        "gen", "--field", "GF", "3", "--m", "2", "--n", "2", "--ell", "2", "--seed", "7",
    ];
    let a = starsylv(&args);
    let b = starsylv(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let (fa, fb) = (dir.path().join("a.ssys"), dir.path().join("b.ssys"));
    for f in [&fa, &fb] {
        let mut full = args.to_vec();
        full.extend(["--out", path_str(f)]);
        assert_eq!(code(&starsylv(&full)), 0);
    }
    assert_eq!(std::fs::read(&fa).unwrap(), std::fs::read(&fb).unwrap());
    assert_eq!(std::fs::read(&fa).unwrap(), a.stdout);
}

#[test]
fn json_and_text_agree_on_verdict_fields() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("p.ssys");
    assert_eq!(
        code(&starsylv(&[
            "gen",
            "--field",
            "GF",
            "5",
            "--m",
            "2",
            "--n",
            "1",
            "--ell",
            "2",
            "--seed",
            "3",
            "--perturb",
            "--out",
            path_str(&sys)
        ])),
        0
    );
    for sub in ["solve", "extract", "analyze", "oracle"] {
        let text = starsylv(&[sub, path_str(&sys)]);
        let js = starsylv(&["--json", sub, path_str(&sys)]);
        assert_eq!(code(&text), code(&js), "{sub}");
        let report = json(&js);
        for (k, v) in text_fields(&stdout(&text)) {
            let shown = match &report[&k] {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(shown, v, "{sub} field {k}");
        }
    }
}

#[test]
fn exit_codes_are_total() {
    let cases: &[&[&str]] = &[
        &[],
        &["--version"],
        &["solve"],
        &["solve", "/definitely/missing.ssys"],
        &["verify", "x"],
        &["gen", "--field", "R", "--m", "1", "--n", "1"],
        &["oracle", "--cap", "nope", "x"],
        &["probe-char2"],
    ];
    for args in cases {
        let c = code(&starsylv(args));
        assert!((0..=2).contains(&c), "{args:?} exited {c}");
    }
}

#[test]
fn probe_dumps_anomalies() {
    let dir = tempfile::tempdir().unwrap();
    let out = starsylv(&[
        "--probe-char2-enable",
        "--json",
        "probe-char2",
        "--samples",
        "40",
        "--seed",
        "1",
        "--dump-dir",
        path_str(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["a_without_b"], 0);
    let dumped = std::fs::read_dir(dir.path()).unwrap().count() as u64;
    assert_eq!(Some(dumped), report["b_without_a"].as_u64());
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        assert!(std::fs::read_to_string(&path)
            .unwrap()
            .starts_with("field GF 2\n"));
        let out = starsylv(&["--probe-char2-enable", "oracle", path_str(&path)]);
        assert_eq!(code(&out), 1, "dumped instances are unsolvable");
    }
}
