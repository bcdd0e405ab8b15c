use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::eval::DEFAULT_K_GRID;
use crate::llm::{BackendKind, LLMRequestConfig};
use crate::reflection::{ClipOptions, Preferences};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Mock,
    Http,
}

impl BackendChoice {
    pub fn kind(self) -> BackendKind {
        match self {
            BackendChoice::Mock => BackendKind::DeterministicMock,
            BackendChoice::Http => BackendKind::HttpChatCompletion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectorChoice {
    #[default]
    Pipeline,
    WpaBaseline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGame {
    pub game_log: PathBuf,
    pub ground_truth: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub selector: SelectorChoice,
    pub k_grid: Vec<usize>,
    pub games: Vec<SweepGame>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            selector: SelectorChoice::Pipeline,
            k_grid: DEFAULT_K_GRID.to_vec(),
            games: Vec::new(),
        }
    }
}

/// Everything needed to reproduce a run. Relative paths resolve against the
/// config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub game_log: Option<PathBuf>,
    pub we_table: PathBuf,
    pub ground_truth: Option<PathBuf>,
    /// Bundled templates are used when absent.
    pub prompt_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    #[serde(default = "default_backend")]
    pub backend: BackendChoice,
    /// Refuse any backend that is not deterministic.
    #[serde(default)]
    pub deterministic: bool,
    #[serde(default)]
    pub llm: LLMRequestConfig,
    #[serde(default)]
    pub preferences: Preferences,
    #[serde(default)]
    pub clip: ClipOptions,
    #[serde(default)]
    pub sweep: SweepConfig,
}

fn default_backend() -> BackendChoice {
    BackendChoice::Mock
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("{what} not found: {path}")]
    MissingPath { what: &'static str, path: String },
    #[error("{0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let mut config: RunConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_relative_to(base);
        Ok(config)
    }

    fn resolve_relative_to(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = self.game_log.as_mut() {
            fix(p);
        }
        fix(&mut self.we_table);
        if let Some(p) = self.ground_truth.as_mut() {
            fix(p);
        }
        if let Some(p) = self.prompt_dir.as_mut() {
            fix(p);
        }
        fix(&mut self.out_dir);
        for game in &mut self.sweep.games {
            fix(&mut game.game_log);
            fix(&mut game.ground_truth);
        }
    }

    /// Input paths must exist before any work starts.
    pub fn check_inputs(&self, need_game_log: bool) -> Result<(), ConfigError> {
        let exists = |what: &'static str, p: &Path| {
            if p.exists() {
                Ok(())
            } else {
                Err(ConfigError::MissingPath {
                    what,
                    path: p.display().to_string(),
                })
            }
        };
        exists("win expectancy table", &self.we_table)?;
        if need_game_log {
            match &self.game_log {
                Some(p) => exists("game log", p)?,
                None => return Err(ConfigError::Invalid("config has no game_log".into())),
            }
        }
        if let Some(p) = &self.ground_truth {
            exists("ground truth", p)?;
        }
        if let Some(p) = &self.prompt_dir {
            exists("prompt directory", p)?;
        }
        for game in &self.sweep.games {
            exists("game log", &game.game_log)?;
            exists("ground truth", &game.ground_truth)?;
        }
        if self.preferences.k == 0 {
            return Err(ConfigError::Invalid("preferences.k must be at least 1".into()));
        }
        if self.deterministic && self.backend != BackendChoice::Mock {
            return Err(ConfigError::Invalid(
                "deterministic runs require the mock backend".into(),
            ));
        }
        Ok(())
    }
}
