// Generate a seeded corpus of synthetic game logs and write it as JSONL.
//
// ```text
// cargo run --example synthetic_corpus -- <out-dir> [games] [seed] [prefix]
// ```

use std::error::Error;
use std::path::Path;

use baseball_highlights::gamelog::{read_game_log, validate_log, write_game_log};
use baseball_highlights::synth::synthetic_corpus;

pub fn write_corpus(dir: &Path, prefix: &str, games: usize, seed: u64) -> Result<usize, Box<dyn Error>> {
    std::fs::create_dir_all(dir)?;
    let corpus = synthetic_corpus(prefix, games, seed);
    let mut plays = 0;
    for game in &corpus {
        let issues = validate_log(game);
        if !issues.is_empty() {
            return Err(format!("{}: {issues:?}", game.game_id).into());
        }
        let path = dir.join(format!("{}.jsonl", game.game_id));
        write_game_log(&path, game)?;
        assert_eq!(&read_game_log(&path)?, game);
        plays += game.plays.len();
    }
    Ok(plays)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let plays = write_corpus(dir.path(), "game", 5, 42)?;
    println!("wrote 5 games ({plays} plays) to {}", dir.path().display());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first() {
        None => run_example(),
        Some(dir) => {
            let games = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(20);
            let seed = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(2024);
            let prefix = args.get(3).map(String::as_str).unwrap_or("game");
            let plays = write_corpus(Path::new(dir), prefix, games, seed)?;
            println!("wrote {games} games ({plays} plays) to {dir}");
            Ok(())
        }
    }
}
