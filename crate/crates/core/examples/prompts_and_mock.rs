// Render the three prompt templates and drive them through the deterministic
// mock backend, including band clamping and response validation.
//
// ```text
// cargo run --example prompts_and_mock
// ```

use std::collections::BTreeSet;
use std::error::Error;

use baseball_highlights::gamelog::context_window;
use baseball_highlights::llm::{
    adjust_scores, analysis_payload, analyze_wpa, render_prompt, transform_wpa_scores,
    validate_response, AdjustInput, ImportanceBand, LLMRequestConfig, LlmContext, MockBackend,
    PromptLibrary, ScoreResponse, TemplateId, TransformInput,
};
use baseball_highlights::synth::{synthetic_game, SynthOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let game = synthetic_game("demo", 21, &SynthOptions::default());
    let prompts = PromptLibrary::bundled();
    let config = LLMRequestConfig::default();
    let ctx = LlmContext::new(&MockBackend, &prompts, &config);

    let play = &game.plays[30];
    let window = context_window(&game, play.id, 5)?;
    let wpa = 0.183;
    let payload = analysis_payload(play, window, wpa);
    let prompt = render_prompt(&prompts, TemplateId::WpaAnalysis, payload.as_object().unwrap())?;
    println!("--- rendered analysis prompt (tail) ---");
    for line in prompt.lines().rev().take(12).collect::<Vec<_>>().into_iter().rev() {
        println!("{line}");
    }

    let analysis = analyze_wpa(&ctx, play, window, wpa)?;
    println!("--- analysis ---\n{}", analysis.wpa_analysis);

    let inputs: Vec<TransformInput> = [0.20, 0.052, -0.01]
        .iter()
        .zip(&game.plays[40..43])
        .map(|(&wpa, play)| TransformInput::from_play(play, wpa))
        .collect();
    let base = transform_wpa_scores(&ctx, &inputs)?;
    let adjust: Vec<AdjustInput> = inputs
        .iter()
        .zip(&base)
        .map(|(input, base)| AdjustInput {
            id: input.id,
            result: input.result.clone(),
            inning_info: input.inning_info.clone(),
            base_score: base.score,
            wpa_analysis: analysis.wpa_analysis.clone(),
        })
        .collect();
    let adjusted = adjust_scores(&ctx, &adjust)?;
    for ((input, base), adjusted) in inputs.iter().zip(&base).zip(&adjusted) {
        let band = ImportanceBand::for_wpa(input.wpa);
        println!(
            "play {:>3} WPA {:+.3} band {band:<9} base {:>2} adjusted {:>2}",
            input.id, input.wpa, base.score, adjusted.score
        );
        assert!(band.range().contains(&base.score));
    }

    let expected = BTreeSet::from([7, 8]);
    let fenced = "```json\n[{\"id\": 7, \"score\": 44}, {\"id\": 8, \"score\": 12}]\n```";
    let ok: Vec<ScoreResponse> = validate_response(fenced, &expected)?;
    println!("fenced reply parsed: {:?}", ok.iter().map(|r| (r.play_id, r.score)).collect::<Vec<_>>());
    let err = validate_response::<ScoreResponse>("[{\"id\": 7, \"score\": 44}, {\"id\": 9, \"score\": 3}]", &expected)
        .unwrap_err();
    println!("wrong ids rejected: {err}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
