// Build a win expectancy table from a corpus, query it, and round-trip it
// through JSON.
//
// ```text
// cargo run --example build_we_table
// ```

use std::error::Error;

use baseball_highlights::gamelog::GameOutcome;
use baseball_highlights::sabermetrics::{build_we_table, LookupSource, DEFAULT_MAX_INNING_BUCKET};
use baseball_highlights::synth::synthetic_corpus;
use baseball_highlights::{GameState, Half, WETable};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let corpus = synthetic_corpus("hist", 300, 3);
    let table = build_we_table(&corpus, DEFAULT_MAX_INNING_BUCKET)?;
    println!(
        "{} games -> {} states, average |dWE| per play {:.4}",
        table.metadata().corpus_size,
        table.entries().len(),
        table.avg_abs_dwe()
    );

    let states = [
        ("first pitch", GameState::INITIAL),
        ("bottom 9th, 2 out, bases loaded, down 1", GameState::new(9, Half::Bottom, 2, 0b111, -1)),
        ("top 7th, nobody on, home up 3", GameState::new(7, Half::Top, 0, 0, 3)),
        ("bottom 14th, runner on 2nd, tied", GameState::new(14, Half::Bottom, 1, 0b010, 0)),
    ];
    for (label, state) in states {
        let (we, source) = table.lookup_detailed(&state, None);
        let source = match source {
            LookupSource::Table => "table".to_string(),
            LookupSource::NearestScore(key) => format!("nearest diff {}", key.score_diff_bucket),
            LookupSource::Neutral => "neutral".to_string(),
            LookupSource::Terminal => "terminal".to_string(),
        };
        println!("{label:<42} WE={we:.3} ({source})");
    }
    let final_state = GameState::new(9, Half::Bottom, 3, 0, 2);
    println!("terminal home win: {}", table.lookup_we(&final_state, Some(GameOutcome::HomeWin)));

    let reloaded = WETable::from_json(&table.to_json())?;
    assert_eq!(reloaded, table);
    println!("JSON round trip: identical");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
