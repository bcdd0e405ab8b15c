mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use baseball_highlights::cli::{
    cmd_build_table, cmd_evaluate, cmd_run, cmd_sweep, BackendChoice, Overrides, EXIT_BACKEND,
    EXIT_INPUT, EXIT_OK, MANIFEST_FILE, SCORED_FILE, SELECTION_FILE,
};
use baseball_highlights::eval::GroundTruth;
use baseball_highlights::reflection::HighlightSelection;
use baseball_highlights::sabermetrics::build_we_table;
use baseball_highlights::WETable;

struct Captured {
    code: i32,
    out: String,
    err: String,
}

fn capture(f: impl FnOnce(&mut Vec<u8>, &mut Vec<u8>) -> i32) -> Captured {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = f(&mut out, &mut err);
    Captured {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn golden_config() -> PathBuf {
    common::fixture("golden/run.toml")
}

fn run_into(dir: &Path, overrides: Overrides) -> Captured {
    let overrides = Overrides { out_dir: Some(dir.to_path_buf()), ..overrides };
    capture(|out, err| cmd_run(&golden_config(), &overrides, out, err))
}

/// The golden config with some keys replaced, written next to the fixtures it references.
fn variant_config(dir: &Path, edit: impl Fn(String) -> String) -> PathBuf {
    let text = fs::read_to_string(golden_config()).unwrap();
    let fixtures = common::fixture("golden");
    let text = text.replace("\"../", &format!("\"{}/../", fixtures.display()));
    let path = dir.join("run.toml");
    fs::write(&path, edit(text)).unwrap();
    path
}

#[test]
fn build_table_is_deterministic_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = common::fixture("corpus");
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let first = capture(|o, e| cmd_build_table(&corpus, &a, 9, None, o, e));
    let second = capture(|o, e| cmd_build_table(&corpus, &b, 9, None, o, e));
    assert_eq!((first.code, second.code), (EXIT_OK, EXIT_OK));
    assert!(first.out.contains("corpus games: 20"), "{}", first.out);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let expected = build_we_table(&common::corpus20(), 9).unwrap();
    assert_eq!(WETable::read(&a).unwrap(), expected);

    let stamped = dir.path().join("c.json");
    capture(|o, e| cmd_build_table(&corpus, &stamped, 9, Some("2024-05-01T00:00:00Z".into()), o, e));
    assert_eq!(WETable::read(&stamped).unwrap().metadata().built_at.as_deref(), Some("2024-05-01T00:00:00Z"));
}

#[test]
fn build_table_rejects_empty_or_missing_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let empty = capture(|o, e| cmd_build_table(dir.path(), &out, 9, None, o, e));
    assert_eq!(empty.code, EXIT_INPUT);
    assert!(empty.err.contains("empty corpus"));
    let missing = capture(|o, e| cmd_build_table(&dir.path().join("nope"), &out, 9, None, o, e));
    assert_eq!(missing.code, EXIT_INPUT);
    assert!(!out.exists());
}

#[test]
fn golden_run_is_byte_identical() {
    let expected = common::fixture("golden/expected");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let start = Instant::now();
    let first = run_into(a.path(), Overrides::default());
    let second = run_into(b.path(), Overrides::default());
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert_eq!((first.code, second.code), (EXIT_OK, EXIT_OK), "{}", first.err);
    for name in [SCORED_FILE, SELECTION_FILE, MANIFEST_FILE] {
        let golden = fs::read(expected.join(name)).unwrap();
        assert_eq!(fs::read(a.path().join(name)).unwrap(), golden, "{name}");
        assert_eq!(fs::read(b.path().join(name)).unwrap(), golden, "{name}");
    }
    assert!(first.out.contains("P=1.000 R=0.833 F1=0.909"), "{}", first.out);
}

#[test]
fn oversized_k_warns_and_selects_every_play() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_into(dir.path(), Overrides { k: Some(500), ..Overrides::default() });
    assert_eq!(run.code, EXIT_OK);
    assert!(run.err.contains("k=500 exceeds"), "{}", run.err);
    let selection = HighlightSelection::read(dir.path().join(SELECTION_FILE)).unwrap();
    assert_eq!(selection.k_effective, common::heldout(0).plays.len());
    assert_eq!(selection.k_requested, 500);
}

#[test]
fn missing_table_fails_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = variant_config(dir.path(), |t| t.replace("we_table.json", "no_such_table.json"));
    let run = capture(|o, e| cmd_run(&config, &Overrides::default(), o, e));
    assert_eq!(run.code, EXIT_INPUT);
    assert!(run.err.contains("no_such_table.json"), "{}", run.err);
}

#[test]
fn malformed_game_log_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, "{\"game_id\":\"x\"}\n").unwrap();
    let config = variant_config(dir.path(), |t| {
        t.replacen(
            &format!("game_log = \"{}/../heldout/heldout-000.jsonl\"", common::fixture("golden").display()),
            &format!("game_log = \"{}\"", bad.display()),
            1,
        )
    });
    let run = capture(|o, e| cmd_run(&config, &Overrides { out_dir: Some(dir.path().join("out")), ..Overrides::default() }, o, e));
    assert_eq!(run.code, EXIT_INPUT);
    assert!(run.err.contains("[parse]"), "{}", run.err);
    assert!(!dir.path().join("out").join(SCORED_FILE).exists());
}

#[test]
fn unreachable_backend_exits_with_backend_code() {
    let dir = tempfile::tempdir().unwrap();
    let config = variant_config(dir.path(), |t| {
        t.replace("deterministic = true", "deterministic = false")
            .replace("model_name = \"gpt-4o\"", "model_name = \"gpt-4o\"\nendpoint = \"http://127.0.0.1:1/v1\"\nmax_retries = 0")
    });
    if std::env::var("LLM_ENDPOINT").is_ok() {
        return;
    }
    let overrides = Overrides {
        backend: Some(BackendChoice::Http),
        out_dir: Some(dir.path().join("out")),
        ..Overrides::default()
    };
    let run = capture(|o, e| cmd_run(&config, &overrides, o, e));
    assert_eq!(run.code, EXIT_BACKEND, "{}", run.err);
    assert!(run.err.contains("[decide]"), "{}", run.err);
    assert!(!dir.path().join("out").join(SELECTION_FILE).exists());
}

#[test]
fn deterministic_configs_refuse_the_http_backend() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_into(dir.path(), Overrides { backend: Some(BackendChoice::Http), ..Overrides::default() });
    assert_eq!(run.code, EXIT_INPUT);
    assert!(run.err.contains("deterministic"));
}

#[test]
fn evaluate_prints_the_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let selection = HighlightSelection {
        game_id: "g".into(),
        chosen: [1, 2, 3, 4]
            .iter()
            .map(|&id| baseball_highlights::reflection::ChosenPlay { play_id: id, final_score: 0, clip_start_ms: 0, clip_end_ms: 0 })
            .collect(),
        k_requested: 4,
        k_effective: 4,
    };
    let (sel, gt) = (dir.path().join("s.json"), dir.path().join("gt.json"));
    fs::write(&sel, selection.to_json()).unwrap();
    fs::write(&gt, GroundTruth::new("g", [2, 3, 5]).to_json()).unwrap();
    let run = capture(|o, e| cmd_evaluate(&sel, &gt, o, e));
    assert_eq!(run.code, EXIT_OK);
    assert_eq!(run.out.lines().next(), Some("P=0.500 R=0.667 F1=0.571"));

    let missing = capture(|o, e| cmd_evaluate(&sel, &dir.path().join("none.json"), o, e));
    assert_eq!(missing.code, EXIT_INPUT);
}

#[test]
fn sweep_writes_nine_rows() {
    let dir = tempfile::tempdir().unwrap();
    let overrides = Overrides { out_dir: Some(dir.path().to_path_buf()), ..Overrides::default() };
    let run = capture(|o, e| cmd_sweep(&golden_config(), None, &overrides, o, e));
    assert_eq!(run.code, EXIT_OK, "{}", run.err);
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert_eq!(csv.lines().next(), Some("k,mean_f1"));
    assert!(run.out.contains("argmax_k="));

    let custom = capture(|o, e| cmd_sweep(&golden_config(), Some(vec![5, 15]), &overrides, o, e));
    assert_eq!(custom.code, EXIT_OK);
    assert_eq!(fs::read_to_string(dir.path().join("sweep.csv")).unwrap().lines().count(), 3);
}

#[test]
fn binary_exposes_the_subcommands() {
    let exe = env!("CARGO_BIN_EXE_highlights");
    let help = Command::new(exe).arg("--help").output().unwrap();
    let text = String::from_utf8_lossy(&help.stdout);
    for sub in ["build-table", "run", "evaluate", "sweep"] {
        assert!(text.contains(sub), "{text}");
    }
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(exe)
        .args(["run", "--config"])
        .arg(golden_config())
        .args(["--backend", "mock", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    assert_eq!(
        fs::read(dir.path().join(MANIFEST_FILE)).unwrap(),
        fs::read(common::fixture("golden/expected").join(MANIFEST_FILE)).unwrap()
    );
    let missing = Command::new(exe).args(["run", "--config", "/nonexistent/run.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}
