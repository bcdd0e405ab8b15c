//! Command implementations behind the `highlights` binary.
//!
//! Each command writes human-readable output to `out`, diagnostics to `err`,
//! and returns a process exit code: 0 success, 1 input or config error,
//! 2 backend error, 3 internal invariant failure.

mod config;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub use config::{BackendChoice, ConfigError, RunConfig, SelectorChoice, SweepConfig, SweepGame};

use crate::eval::{precision_recall_f1, sweep_k, wpa_baseline_select, EvalError, GroundTruth};
use crate::gamelog::{read_game_log, GameLog};
use crate::llm::{Backend, HttpBackend, LlmContext, MockBackend, PromptLibrary};
use crate::pipeline::{run_pipeline, score_game, PipelineError};
use crate::reflection::{apply_preferences, select_top_k, HighlightSelection};
use crate::sabermetrics::{annotate_game, build_we_table, WETable};
use crate::scoring::scored_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BACKEND: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const SCORED_FILE: &str = "scored.jsonl";
pub const SELECTION_FILE: &str = "selection.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SWEEP_JSON_FILE: &str = "sweep.json";
pub const SWEEP_CSV_FILE: &str = "sweep.csv";

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub backend: Option<BackendChoice>,
    pub k: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn pipeline(err: PipelineError) -> Self {
        let code = if err.is_backend_failure() {
            EXIT_BACKEND
        } else if matches!(err, PipelineError::Invariant(_)) {
            EXIT_INTERNAL
        } else {
            EXIT_INPUT
        };
        Failure {
            code,
            message: format!("[{}] {err}", err.stage()),
        }
    }
}

fn finish(result: Result<(), Failure>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Failure::input(format!("cannot read corpus directory {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == "jsonl"))
        .collect();
    files.sort();
    Ok(files)
}

/// Builds a win expectancy table from every `*.jsonl` game log in `corpus_dir`.
pub fn cmd_build_table(
    corpus_dir: &Path,
    out_path: &Path,
    max_inning_bucket: u32,
    built_at: Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = (|| {
        let files = corpus_files(corpus_dir)?;
        if files.is_empty() {
            return Err(Failure::input(format!(
                "empty corpus: no .jsonl game logs in {}",
                corpus_dir.display()
            )));
        }
        let corpus = files
            .iter()
            .map(|f| read_game_log(f).map_err(|e| Failure::input(format!("{}: {e}", f.display()))))
            .collect::<Result<Vec<GameLog>, _>>()?;
        let mut table = build_we_table(&corpus, max_inning_bucket)
            .map_err(|e| Failure::input(e.to_string()))?;
        table.set_built_at(built_at.clone());
        table.write(out_path).map_err(|e| Failure::input(e.to_string()))?;
        let _ = writeln!(out, "corpus games: {}", corpus.len());
        let _ = writeln!(out, "table entries: {}", table.entries().len());
        let _ = writeln!(out, "avg |dWE|: {:.16e}", table.avg_abs_dwe());
        let _ = writeln!(out, "wrote {}", out_path.display());
        Ok(())
    })();
    finish(result, err)
}

fn load_config(config_path: &Path, overrides: &Overrides) -> Result<RunConfig, Failure> {
    let mut config = RunConfig::load(config_path).map_err(|e| Failure::input(e.to_string()))?;
    if let Some(backend) = overrides.backend {
        config.backend = backend;
    }
    if let Some(k) = overrides.k {
        config.preferences.k = k;
    }
    if let Some(dir) = &overrides.out_dir {
        config.out_dir = dir.clone();
    }
    config.llm.validate().map_err(|e| Failure::input(e.to_string()))?;
    Ok(config)
}

fn make_backend(config: &RunConfig) -> Result<Box<dyn Backend>, Failure> {
    match config.backend {
        BackendChoice::Mock => Ok(Box::new(MockBackend)),
        BackendChoice::Http => HttpBackend::from_env(&config.llm)
            .map(|b| Box::new(b) as Box<dyn Backend>)
            .map_err(|e| Failure {
                code: EXIT_BACKEND,
                message: e.to_string(),
            }),
    }
}

fn load_prompts(config: &RunConfig) -> Result<PromptLibrary, Failure> {
    match &config.prompt_dir {
        Some(dir) => PromptLibrary::load(dir).map_err(|e| Failure::input(e.to_string())),
        None => Ok(PromptLibrary::bundled()),
    }
}

fn load_table(config: &RunConfig) -> Result<WETable, Failure> {
    WETable::read(&config.we_table).map_err(|e| Failure::input(format!("[parse] {e}")))
}

fn load_game(path: &Path) -> Result<GameLog, Failure> {
    read_game_log(path).map_err(|e| Failure::input(format!("[parse] {}: {e}", path.display())))
}

/// Writes files in order; on any failure removes the ones already written.
fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, contents) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(Failure::input(format!("cannot write {}: {e}", path.display())));
        }
        written.push(path);
    }
    Ok(written)
}

/// Runs the whole pipeline for the configured game and writes the audit
/// report, the selection and the clip manifest.
pub fn cmd_run(config_path: &Path, overrides: &Overrides, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        let config = load_config(config_path, overrides)?;
        config.check_inputs(true).map_err(|e| Failure::input(e.to_string()))?;
        let table = load_table(&config)?;
        let log = load_game(config.game_log.as_ref().expect("checked"))?;
        let prompts = load_prompts(&config)?;
        let backend = make_backend(&config)?;
        let ctx = LlmContext::new(backend.as_ref(), &prompts, &config.llm);

        let output = run_pipeline(&table, &log, &ctx, &config.preferences, &config.clip)
            .map_err(Failure::pipeline)?;

        if config.preferences.k > output.selection.k_effective {
            let _ = writeln!(
                err,
                "warning: k={} exceeds the {} eligible plays; selecting all of them",
                config.preferences.k, output.selection.k_effective
            );
        }
        for warning in &output.warnings {
            let _ = writeln!(err, "warning: {warning:?}");
        }
        if output.table_misses > 0 {
            let _ = writeln!(err, "warning: {} win expectancy lookups used fallbacks", output.table_misses);
        }

        let written = write_outputs(
            &config.out_dir,
            &[
                (SCORED_FILE, scored_report(&output.scored)),
                (SELECTION_FILE, output.selection.to_json()),
                (MANIFEST_FILE, output.manifest.to_json()),
            ],
        )?;
        let _ = writeln!(
            out,
            "{}: {} plays scored, {} selected (k={})",
            log.game_id,
            output.scored.len(),
            output.selection.k_effective,
            output.selection.k_requested
        );
        for path in written {
            let _ = writeln!(out, "wrote {}", path.display());
        }
        if let Some(gt_path) = &config.ground_truth {
            let gt = GroundTruth::read(gt_path).map_err(|e| Failure::input(e.to_string()))?;
            let report = precision_recall_f1(&output.selection.play_ids(), &gt)
                .map_err(|e| Failure::input(e.to_string()))?;
            let _ = writeln!(out, "P={:.3} R={:.3} F1={:.3}", report.precision, report.recall, report.f1);
        }
        Ok(())
    })();
    finish(result, err)
}

/// Scores a saved selection against a ground-truth file.
pub fn cmd_evaluate(selection_path: &Path, gt_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        let selection =
            HighlightSelection::read(selection_path).map_err(|e| Failure::input(e.to_string()))?;
        let gt = GroundTruth::read(gt_path).map_err(|e| Failure::input(e.to_string()))?;
        if gt.game_id != selection.game_id {
            let _ = writeln!(
                err,
                "warning: selection is for {} but ground truth is for {}",
                selection.game_id, gt.game_id
            );
        }
        let report = precision_recall_f1(&selection.play_ids(), &gt)
            .map_err(|e| Failure::input(e.to_string()))?;
        let _ = writeln!(out, "P={:.3} R={:.3} F1={:.3}", report.precision, report.recall, report.f1);
        let _ = writeln!(
            out,
            "selected={} gt={} matched={}",
            report.selected_count, report.gt_count, report.intersection_count
        );
        Ok(())
    })();
    finish(result, err)
}

enum SweepFailure {
    Eval(EvalError),
    Other(Failure),
}

impl From<EvalError> for SweepFailure {
    fn from(e: EvalError) -> Self {
        SweepFailure::Eval(e)
    }
}

/// Mean F1 over the configured games for each k of the grid.
pub fn cmd_sweep(
    config_path: &Path,
    k_grid: Option<Vec<usize>>,
    overrides: &Overrides,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = (|| {
        let config = load_config(config_path, overrides)?;
        config.check_inputs(false).map_err(|e| Failure::input(e.to_string()))?;
        let mut pairs: Vec<(PathBuf, PathBuf)> = config
            .sweep
            .games
            .iter()
            .map(|g| (g.game_log.clone(), g.ground_truth.clone()))
            .collect();
        if pairs.is_empty() {
            match (&config.game_log, &config.ground_truth) {
                (Some(log), Some(gt)) => pairs.push((log.clone(), gt.clone())),
                _ => return Err(Failure::input("sweep needs [[sweep.games]] or game_log + ground_truth")),
            }
        }
        let grid = k_grid.unwrap_or_else(|| config.sweep.k_grid.clone());
        let table = load_table(&config)?;
        let prompts = load_prompts(&config)?;
        let backend = make_backend(&config)?;
        let ctx = LlmContext::new(backend.as_ref(), &prompts, &config.llm);

        // Rankings do not depend on k, so each game is scored once.
        let mut games = Vec::with_capacity(pairs.len());
        for (log_path, gt_path) in &pairs {
            let log = load_game(log_path)?;
            let gt = GroundTruth::read(gt_path).map_err(|e| Failure::input(e.to_string()))?;
            gt.check_against(&log).map_err(|e| Failure::input(e.to_string()))?;
            let ranked = match config.sweep.selector {
                SelectorChoice::Pipeline => {
                    let (_, scored) = score_game(&table, &log, &ctx).map_err(Failure::pipeline)?;
                    let (preferred, _) = apply_preferences(&scored, &log, &config.preferences)
                        .map_err(|e| Failure::input(e.to_string()))?;
                    Ranked::Pipeline(log.game_id.clone(), preferred)
                }
                SelectorChoice::WpaBaseline => {
                    let annotated = annotate_game(&table, &log)
                        .map_err(|e| Failure::pipeline(PipelineError::Annotate(e)))?;
                    Ranked::Baseline(annotated)
                }
            };
            games.push((ranked, gt));
        }

        let report = sweep_k(
            &games,
            |ranked: &Ranked, k| -> Result<BTreeSet<i64>, SweepFailure> {
                match ranked {
                    Ranked::Pipeline(game_id, preferred) => select_top_k(game_id, preferred, k)
                        .map(|s| s.play_ids())
                        .map_err(|e| SweepFailure::Other(Failure::input(e.to_string()))),
                    Ranked::Baseline(annotated) => Ok(wpa_baseline_select(annotated, k)?),
                }
            },
            &grid,
        )
        .map_err(|e| match e {
            SweepFailure::Eval(e) => Failure::input(e.to_string()),
            SweepFailure::Other(f) => f,
        })?;

        let _ = writeln!(out, "{:>4}  {}", "k", "mean_f1");
        for entry in &report.entries {
            let _ = writeln!(out, "{:>4}  {:.4}", entry.k, entry.mean_f1);
        }
        let _ = writeln!(out, "argmax_k={}", report.argmax_k);
        write_outputs(
            &config.out_dir,
            &[(SWEEP_JSON_FILE, report.to_json()), (SWEEP_CSV_FILE, report.to_csv())],
        )?;
        Ok(())
    })();
    finish(result, err)
}

enum Ranked {
    Pipeline(String, Vec<crate::reflection::PreferredPlay>),
    Baseline(Vec<crate::sabermetrics::AnnotatedPlay>),
}
