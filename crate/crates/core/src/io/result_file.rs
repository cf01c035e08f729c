use std::path::Path;

use serde::{Deserialize, Serialize};

use super::game_file::{Game, GameFile};
use crate::approx::ApproxMsneResult;
use crate::dynamics::StopReason;
use crate::error::{Error, Result};
use crate::game::{StrategyProfile, UnitSphereStrategy};
use crate::multiplayer::{verify_multi_ne, MarkovCertificate, MultiProfile, NormMode};
use crate::solver::{verify_ne, FoundEquilibrium, NeBranch};
use crate::spectral::SpectralResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredEquilibrium {
    /// Unit 2-norm strategies, one per player.
    pub strategies: Vec<Vec<f64>>,
    /// Per-player scalings `λ_k` in `contraction_k = λ_k x_k`.
    pub payoffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<NeBranch>,
    /// Eigenvalue of `AB` the equilibrium was derived from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<f64>,
}

impl From<&FoundEquilibrium> for StoredEquilibrium {
    fn from(f: &FoundEquilibrium) -> Self {
        let p = &f.certificate.profile;
        StoredEquilibrium {
            strategies: vec![p.x.values().to_vec(), p.y.values().to_vec()],
            payoffs: vec![f.certificate.lambda, f.certificate.mu],
            branch: Some(f.branch),
            eigenvalue: Some(f.eigenvalue),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningSummary {
    pub rounds: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitted_ratio: Option<f64>,
}

/// Machine-readable command output. Embeds the game so stored equilibria can
/// be re-verified without the original input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub game: GameFile,
    pub verify_tol: f64,
    pub equilibria: Vec<StoredEquilibrium>,
    #[serde(default)]
    pub continuum: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectralResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approximation: Option<ApproxMsneResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markov: Option<MarkovCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning: Option<LearningSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

impl ResultFile {
    pub fn new(command: impl Into<String>, game: GameFile, verify_tol: f64) -> Self {
        ResultFile {
            command: command.into(),
            method: None,
            game,
            verify_tol,
            equilibria: Vec::new(),
            continuum: false,
            spectrum: None,
            approximation: None,
            markov: None,
            learning: None,
            trace: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Re-run the equilibrium verifier on every stored profile at `verify_tol`.
    pub fn reverify(&self) -> Result<Vec<bool>> {
        let game = self.game.to_game()?;
        self.equilibria
            .iter()
            .map(|e| match &game {
                Game::TwoPlayer(g) => {
                    if e.strategies.len() != 2 {
                        return Err(Error::validation(
                            "equilibria.strategies",
                            "expected two strategies",
                        ));
                    }
                    // Stored values are unit vectors up to serialization rounding.
                    let s = |v: &Vec<f64>| UnitSphereStrategy::new(v.clone(), false);
                    let p = StrategyProfile::new(s(&e.strategies[0])?, s(&e.strategies[1])?);
                    Ok(verify_ne(g, &p, self.verify_tol)?.is_accepted())
                }
                Game::Multi(t) => {
                    let p = MultiProfile::new(e.strategies.clone(), NormMode::L2)?;
                    Ok(verify_multi_ne(t, &p, self.verify_tol)?.accepted)
                }
            })
            .collect()
    }
}

pub fn save_result(result: &ResultFile, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, result.to_json()?)?;
    Ok(())
}

pub fn load_result(path: impl AsRef<Path>) -> Result<ResultFile> {
    ResultFile::from_json(&super::read_file(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{PayoffMatrix, TwoPlayerGame};
    use crate::solver::enumerate_ne;
    use crate::spectral::IterationConfig;

    #[test]
    fn stored_equilibria_reverify() {
        let g = TwoPlayerGame::new(
            PayoffMatrix::diagonal(&[2.0, 1.0]),
            PayoffMatrix::diagonal(&[1.0, 3.0]),
        )
        .unwrap();
        let report = enumerate_ne(&g, &IterationConfig::default()).unwrap();
        let mut r = ResultFile::new("solve", GameFile::two_player(&g), 1e-10);
        r.equilibria = report
            .equilibria
            .iter()
            .map(StoredEquilibrium::from)
            .collect();
        r.spectrum = Some(report.spectrum_summary);
        let back = ResultFile::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        let ok = back.reverify().unwrap();
        assert_eq!(ok.len(), 4);
        assert!(ok.iter().all(|v| *v));

        let mut tampered = back;
        tampered.equilibria[0].strategies[0] = vec![0.6, 0.8];
        assert!(!tampered.reverify().unwrap()[0]);
    }
}
