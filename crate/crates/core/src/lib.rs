//! Baseball highlight selection.
//!
//! A game log is annotated with win expectancy, win probability added and
//! leverage from a historical table ([`sabermetrics`]). A language model
//! (or the deterministic mock in [`llm`]) writes a short context analysis per
//! play, turns WPA into a base score and adds a narrative adjustment.
//! [`scoring`] adds a leverage rank bonus, [`reflection`] applies viewer
//! preferences and picks the top K plays with clip windows, and [`eval`]
//! measures selections against ground-truth highlight sets.

pub mod cli;
pub mod eval;
pub mod gamelog;
pub mod llm;
pub mod pipeline;
pub mod reflection;
pub mod sabermetrics;
pub mod scoring;
pub mod synth;

pub use gamelog::{GameLog, GameState, Half, Play};
pub use sabermetrics::{AnnotatedPlay, WETable};
pub use scoring::ScoredPlay;
