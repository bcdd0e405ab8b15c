// Annotate a game with win expectancy, WPA and leverage.
//
// ```text
// cargo run --example annotate_game -- [we_table.json game.jsonl]
// ```

use std::error::Error;

use baseball_highlights::gamelog::read_game_log;
use baseball_highlights::llm::ImportanceBand;
use baseball_highlights::sabermetrics::{annotate_game, build_we_table, DEFAULT_MAX_INNING_BUCKET};
use baseball_highlights::synth::{synthetic_corpus, synthetic_game, SynthOptions};
use baseball_highlights::{AnnotatedPlay, GameLog, WETable};

fn report(table: &WETable, game: &GameLog) -> Result<Vec<AnnotatedPlay>, Box<dyn Error>> {
    let annotated = annotate_game(table, game)?;
    println!(
        "{}: {} plays, {} table misses, {} neutral fallbacks",
        game.game_id,
        annotated.len(),
        table.misses(),
        table.neutral_fallbacks()
    );

    let mut top: Vec<&AnnotatedPlay> = annotated.iter().collect();
    top.sort_by(|a, b| b.wpa.abs().total_cmp(&a.wpa.abs()));
    println!("{:>4}  {:<16} {:>7} {:>7} {:>7} {:>6}  result", "id", "inning", "WE0", "WE1", "WPA", "LI");
    for a in top.iter().take(8) {
        println!(
            "{:>4}  {:<16} {:>7.3} {:>7.3} {:>+7.3} {:>6.2}  {}",
            a.play.id,
            a.play.state_before.inning_label(),
            a.we_before,
            a.we_after,
            a.wpa,
            a.li,
            a.play.result
        );
    }

    let mut bands = [0usize; 3];
    for a in &annotated {
        bands[ImportanceBand::for_wpa(a.wpa) as usize] += 1;
    }
    println!("bands: low={} moderate={} high={}", bands[0], bands[1], bands[2]);

    let total: f64 = annotated.iter().map(|a| a.wpa).sum();
    let first = annotated.first().map_or(0.0, |a| a.we_before);
    let last = annotated.last().map_or(0.0, |a| a.we_after);
    println!("sum WPA {total:+.6} = final WE {last:.3} - initial WE {first:.3}");
    Ok(annotated)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let corpus = synthetic_corpus("hist", 200, 11);
    let table = build_we_table(&corpus, DEFAULT_MAX_INNING_BUCKET)?;
    let game = synthetic_game("demo", 5, &SynthOptions::default());
    let annotated = report(&table, &game)?;
    let sum: f64 = annotated.iter().map(|a| a.wpa).sum();
    assert_eq!(sum, annotated.last().unwrap().we_after - annotated[0].we_before);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.as_slice() {
        [table, game] => {
            report(&WETable::read(table)?, &read_game_log(game)?)?;
            Ok(())
        }
        _ => run_example(),
    }
}
