// Reflection stage: viewer preferences, top-K selection in broadcast order,
// and the clip manifest.
//
// ```text
// cargo run --example select_highlights
// ```

use std::collections::BTreeSet;
use std::error::Error;

use baseball_highlights::llm::{LLMRequestConfig, LlmContext, MockBackend, PromptLibrary};
use baseball_highlights::pipeline::score_game;
use baseball_highlights::reflection::{
    apply_preferences, emit_manifest, select_top_k, ClipOptions, KeyPlayers, LateInningBonus,
    Preferences, Theme,
};
use baseball_highlights::sabermetrics::{build_we_table, DEFAULT_MAX_INNING_BUCKET};
use baseball_highlights::synth::{synthetic_corpus, synthetic_game, SynthOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let table = build_we_table(&synthetic_corpus("hist", 300, 3), DEFAULT_MAX_INNING_BUCKET)?;
    let game = synthetic_game("demo", 13, &SynthOptions::default());
    let prompts = PromptLibrary::bundled();
    let config = LLMRequestConfig::default();
    let ctx = LlmContext::new(&MockBackend, &prompts, &config);
    let (_, scored) = score_game(&table, &game, &ctx)?;

    let star = game.plays.iter().rev().find_map(|p| p.actor.clone()).unwrap_or_default();
    let prefs = Preferences {
        late_inning_bonus: LateInningBonus {
            innings: BTreeSet::from([8, 9]),
            points: 10,
        },
        key_players: KeyPlayers {
            names: BTreeSet::from([star.clone(), "Nobody Here".to_string()]),
            points: 5,
        },
        theme: Theme::Offense,
        k: 8,
    };
    let (preferred, warnings) = apply_preferences(&scored, &game, &prefs)?;
    for w in &warnings {
        println!("warning: {w:?}");
    }
    let mut selection = select_top_k(&game.game_id, &preferred, prefs.k)?;
    let manifest = emit_manifest(&mut selection, &game, &ClipOptions::default())?;
    println!("offense highlights featuring {star} (+5) and the 8th/9th (+10):");
    for clip in &manifest.clips {
        println!(
            "  {:>3}  {:>8}..{:<8} ms  score {:>3}  {}",
            clip.play_id, clip.clip_start_ms, clip.clip_end_ms, clip.final_score, clip.result
        );
    }
    assert!(manifest.clips.windows(2).all(|w| w[0].clip_end_ms <= w[1].clip_start_ms));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
