// Precision / recall / F1 against ground truth, the WPA-only baseline, and a
// K sweep comparing both selectors.
//
// Ground truth here is built to reward context: every high-impact play plus
// moderate swings from the 7th inning on.
//
// ```text
// cargo run --example evaluate_and_sweep -- [--write-gt <game.jsonl>...]
// ```

use std::collections::BTreeSet;
use std::error::Error;
use std::path::Path;

use baseball_highlights::eval::{
    precision_recall_f1, sweep_k, wpa_baseline_select, EvalError, GroundTruth, DEFAULT_K_GRID,
};
use baseball_highlights::gamelog::read_game_log;
use baseball_highlights::llm::{ImportanceBand, LLMRequestConfig, LlmContext, MockBackend, PromptLibrary};
use baseball_highlights::pipeline::score_game;
use baseball_highlights::reflection::{select_top_k, PreferredPlay};
use baseball_highlights::sabermetrics::annotate_game;
use baseball_highlights::{AnnotatedPlay, GameLog, WETable};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

pub fn contextual_ground_truth(game_id: &str, annotated: &[AnnotatedPlay]) -> GroundTruth {
    let ids = annotated.iter().filter_map(|a| {
        let keep = match ImportanceBand::for_wpa(a.wpa) {
            ImportanceBand::High => true,
            ImportanceBand::Moderate => a.play.state_before.inning >= 7,
            ImportanceBand::Low => false,
        };
        keep.then_some(a.play.id)
    });
    GroundTruth::new(game_id, ids)
}

fn heldout_games() -> Result<Vec<GameLog>, Box<dyn Error>> {
    (0..6)
        .map(|i| Ok(read_game_log(format!("{FIXTURES}/heldout/heldout-{i:03}.jsonl"))?))
        .collect()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let table = WETable::read(format!("{FIXTURES}/we_table.json"))?;
    let prompts = PromptLibrary::bundled();
    let config = LLMRequestConfig::default();
    let ctx = LlmContext::new(&MockBackend, &prompts, &config);

    let mut pipeline_games = Vec::new();
    let mut baseline_games = Vec::new();
    for game in heldout_games()? {
        let gt = GroundTruth::read(format!("{FIXTURES}/heldout/{}.gt.json", game.game_id))?;
        let (annotated, scored) = score_game(&table, &game, &ctx)?;
        let preferred: Vec<PreferredPlay> = scored.into_iter().map(PreferredPlay::neutral).collect();

        let selection = select_top_k(&game.game_id, &preferred, gt.gt_play_ids.len())?;
        let report = precision_recall_f1(&selection.play_ids(), &gt)?;
        println!(
            "{}: |gt|={:>2}  P={:.3} R={:.3} F1={:.3}",
            game.game_id,
            gt.gt_play_ids.len(),
            report.precision,
            report.recall,
            report.f1
        );
        pipeline_games.push(((game.game_id.clone(), preferred), gt.clone()));
        baseline_games.push((annotated, gt));
    }

    let pipeline = sweep_k::<_, Box<dyn Error>, _>(
        &pipeline_games,
        |(id, preferred), k| Ok(select_top_k(id, preferred, k)?.play_ids()),
        &DEFAULT_K_GRID,
    )?;
    let baseline = sweep_k::<_, EvalError, _>(
        &baseline_games,
        |annotated, k| wpa_baseline_select(annotated, k),
        &DEFAULT_K_GRID,
    )?;
    println!("{:>4}  {:>8}  {:>8}", "k", "pipeline", "wpa-only");
    for (p, b) in pipeline.entries.iter().zip(&baseline.entries) {
        println!("{:>4}  {:>8.4}  {:>8.4}", p.k, p.mean_f1, b.mean_f1);
    }
    println!(
        "best: pipeline k={} F1={:.4}, wpa-only k={} F1={:.4}",
        pipeline.argmax_k,
        pipeline.best_mean_f1(),
        baseline.argmax_k,
        baseline.best_mean_f1()
    );
    Ok(())
}

fn write_ground_truth(table: &WETable, game_path: &Path) -> Result<(), Box<dyn Error>> {
    let game = read_game_log(game_path)?;
    let gt = contextual_ground_truth(&game.game_id, &annotate_game(table, &game)?);
    let out = game_path.with_file_name(format!("{}.gt.json", game.game_id));
    std::fs::write(&out, gt.to_json())?;
    let ids: BTreeSet<i64> = gt.gt_play_ids;
    println!("{}: {} ground-truth plays", out.display(), ids.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.split_first() {
        Some((flag, games)) if flag == "--write-gt" => {
            let table = WETable::read(format!("{FIXTURES}/we_table.json"))?;
            for game in games {
                write_ground_truth(&table, Path::new(game))?;
            }
            Ok(())
        }
        _ => run_example(),
    }
}
