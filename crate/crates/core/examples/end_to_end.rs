// The command-line workflow end to end: build a table, run the pipeline on a
// game, evaluate the selection and sweep K.
//
// ```text
// cargo run --example end_to_end
// ```

use std::error::Error;
use std::fs;
use std::io;

use baseball_highlights::cli::{cmd_build_table, cmd_evaluate, cmd_run, cmd_sweep, Overrides, EXIT_OK};
use baseball_highlights::eval::GroundTruth;
use baseball_highlights::gamelog::write_game_log;
use baseball_highlights::sabermetrics::{annotate_game, DEFAULT_MAX_INNING_BUCKET};
use baseball_highlights::synth::{synthetic_corpus, synthetic_game, SynthOptions};
use baseball_highlights::WETable;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let root = dir.path();
    let corpus_dir = root.join("corpus");
    fs::create_dir_all(&corpus_dir)?;
    for game in synthetic_corpus("hist", 150, 5) {
        write_game_log(corpus_dir.join(format!("{}.jsonl", game.game_id)), &game)?;
    }
    let (mut out, mut err) = (io::stdout(), io::stderr());

    let table_path = root.join("we_table.json");
    let code = cmd_build_table(&corpus_dir, &table_path, DEFAULT_MAX_INNING_BUCKET, None, &mut out, &mut err);
    assert_eq!(code, EXIT_OK);

    let game = synthetic_game("tonight", 99, &SynthOptions::default());
    write_game_log(root.join("tonight.jsonl"), &game)?;
    let table = WETable::read(&table_path)?;
    let big_swings = annotate_game(&table, &game)?
        .into_iter()
        .filter(|a| a.wpa.abs() >= 0.15)
        .map(|a| a.play.id);
    fs::write(root.join("tonight.gt.json"), GroundTruth::new("tonight", big_swings).to_json())?;

    fs::write(
        root.join("run.toml"),
        r#"game_log = "tonight.jsonl"
we_table = "we_table.json"
ground_truth = "tonight.gt.json"
out_dir = "out"

[preferences]
k = 12

[sweep]
k_grid = [5, 10, 15, 20]

[[sweep.games]]
game_log = "tonight.jsonl"
ground_truth = "tonight.gt.json"
"#,
    )?;
    let config = root.join("run.toml");
    assert_eq!(cmd_run(&config, &Overrides::default(), &mut out, &mut err), EXIT_OK);
    println!("{}", fs::read_to_string(root.join("out/manifest.json"))?.lines().take(9).collect::<Vec<_>>().join("\n"));

    let code = cmd_evaluate(&root.join("out/selection.json"), &root.join("tonight.gt.json"), &mut out, &mut err);
    assert_eq!(code, EXIT_OK);
    assert_eq!(cmd_sweep(&config, None, &Overrides::default(), &mut out, &mut err), EXIT_OK);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
