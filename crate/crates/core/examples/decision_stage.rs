// Decision stage: base score, narrative adjustment and leverage rank bonus,
// with the per-play audit ledger.
//
// ```text
// cargo run --example decision_stage
// ```

use std::error::Error;

use baseball_highlights::llm::{LLMRequestConfig, LlmContext, MockBackend, PromptLibrary};
use baseball_highlights::sabermetrics::{annotate_game, build_we_table, DEFAULT_MAX_INNING_BUCKET};
use baseball_highlights::scoring::{bonus_for_position, decide, li_rank_correction, rank_plays, scored_report};
use baseball_highlights::synth::{synthetic_corpus, synthetic_game, SynthOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let table = build_we_table(&synthetic_corpus("hist", 300, 3), DEFAULT_MAX_INNING_BUCKET)?;
    let game = synthetic_game("demo", 8, &SynthOptions::default());
    let annotated = annotate_game(&table, &game)?;

    let prompts = PromptLibrary::bundled();
    let config = LLMRequestConfig::default();
    let ctx = LlmContext::new(&MockBackend, &prompts, &config);
    let scored = decide(&ctx, &annotated)?;

    let mut ranked = scored.clone();
    ranked.sort_by(|a, b| b.final_score.cmp(&a.final_score).then(a.play_id.cmp(&b.play_id)));
    println!("{:>4} {:>7} {:>5} {:>4} {:>4} {:>4} {:>5}", "id", "WPA", "LI", "base", "adj", "li+", "final");
    for s in ranked.iter().take(10) {
        println!(
            "{:>4} {:>+7.3} {:>5.2} {:>4} {:>4} {:>4} {:>5}",
            s.play_id, s.wpa, s.li, s.base_score, s.llm_adjustment, s.li_bonus, s.final_score
        );
        assert!(s.is_additive());
    }

    let ranks = rank_plays(&annotated);
    let positive = ranks.iter().filter(|r| r.delta_r > 0).count();
    let bonuses = li_rank_correction(&ranks);
    println!(
        "{positive} plays rank higher by LI than by |WPA|; {} bonus points awarded",
        bonuses.values().sum::<u32>()
    );
    println!(
        "bonus schedule: {:?}",
        (1..=22).map(bonus_for_position).collect::<Vec<_>>()
    );
    let report = scored_report(&scored);
    println!("ledger: {} lines, first:\n{}", report.lines().count(), report.lines().next().unwrap_or(""));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
