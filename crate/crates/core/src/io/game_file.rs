use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{PayoffMatrix, TwoPlayerGame};
use crate::multiplayer::{markov_check_and_scale, GameTensor, MARKOV_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    TwoPlayer,
    MultiPlayer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl From<&PayoffMatrix> for MatrixSpec {
    fn from(m: &PayoffMatrix) -> Self {
        MatrixSpec {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().to_vec(),
        }
    }
}

/// On-disk game description. Which payload fields must be present depends on `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub kind: GameKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub players: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensors: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Game {
    TwoPlayer(TwoPlayerGame),
    Multi(GameTensor),
}

impl Game {
    pub fn is_positive(&self) -> bool {
        match self {
            Game::TwoPlayer(g) => crate::game::is_positive_game(g),
            Game::Multi(t) => t.is_positive(),
        }
    }
}

/// A validated game with its file metadata and precomputed flags.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGame {
    pub game: Game,
    pub file: GameFile,
    pub is_positive: bool,
    /// Only computed for multiplayer games.
    pub is_markov: Option<bool>,
}

fn matrix(ms: &Option<MatrixSpec>, field: &str) -> Result<PayoffMatrix> {
    let ms = ms
        .as_ref()
        .ok_or_else(|| Error::validation(field, "missing for a two_player game"))?;
    PayoffMatrix::new(ms.rows, ms.cols, ms.data.clone()).map_err(|e| match e {
        Error::Validation { field: f, message } => {
            Error::validation(format!("{field}.{f}"), message)
        }
        other => other,
    })
}

impl GameFile {
    pub fn two_player(game: &TwoPlayerGame) -> Self {
        GameFile {
            kind: GameKind::TwoPlayer,
            name: None,
            description: None,
            seed: None,
            a: Some(game.a().into()),
            b: Some(game.b().into()),
            players: None,
            actions: None,
            tensors: None,
        }
    }

    pub fn multi_player(game: &GameTensor) -> Self {
        GameFile {
            kind: GameKind::MultiPlayer,
            name: None,
            description: None,
            seed: None,
            a: None,
            b: None,
            players: Some(game.player_count()),
            actions: Some(game.actions().to_vec()),
            tensors: Some(game.tensors().to_vec()),
        }
    }

    pub fn from_game(game: &Game) -> Self {
        match game {
            Game::TwoPlayer(g) => GameFile::two_player(g),
            Game::Multi(t) => GameFile::multi_player(t),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = Some(description.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Validate the payload and build the game.
    pub fn to_game(&self) -> Result<Game> {
        match self.kind {
            GameKind::TwoPlayer => {
                for (field, present) in [
                    ("players", self.players.is_some()),
                    ("actions", self.actions.is_some()),
                    ("tensors", self.tensors.is_some()),
                ] {
                    if present {
                        return Err(Error::validation(
                            field,
                            "not allowed for a two_player game",
                        ));
                    }
                }
                let a = matrix(&self.a, "a")?;
                let b = matrix(&self.b, "b")?;
                Ok(Game::TwoPlayer(TwoPlayerGame::new(a, b)?))
            }
            GameKind::MultiPlayer => {
                for (field, present) in [("a", self.a.is_some()), ("b", self.b.is_some())] {
                    if present {
                        return Err(Error::validation(
                            field,
                            "not allowed for a multi_player game",
                        ));
                    }
                }
                let actions = self.actions.clone().ok_or_else(|| {
                    Error::validation("actions", "missing for a multi_player game")
                })?;
                let tensors = self.tensors.clone().ok_or_else(|| {
                    Error::validation("tensors", "missing for a multi_player game")
                })?;
                if let Some(p) = self.players {
                    if p != actions.len() {
                        return Err(Error::validation(
                            "players",
                            format!("declares {p} players but actions lists {}", actions.len()),
                        ));
                    }
                }
                Ok(Game::Multi(GameTensor::new(actions, tensors)?))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Parse and validate a game, precomputing positivity and (for tensors) the Markov flag.
pub fn parse_game(text: &str) -> Result<LoadedGame> {
    let file = GameFile::from_json(text)?;
    let game = file.to_game()?;
    let is_positive = game.is_positive();
    let is_markov = match &game {
        Game::TwoPlayer(_) => None,
        Game::Multi(t) => Some(markov_check_and_scale(t, MARKOV_TOL)?.1.is_markov),
    };
    Ok(LoadedGame {
        game,
        file,
        is_positive,
        is_markov,
    })
}

pub fn load_game(path: impl AsRef<Path>) -> Result<LoadedGame> {
    parse_game(&super::read_file(path.as_ref())?)
}

pub fn save_game(file: &GameFile, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, file.to_json()?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_two_player() {
        let text = r#"{"kind":"two_player","a":{"rows":2,"cols":2,"data":[1,1,1,1]},"b":{"rows":2,"cols":2,"data":[1,1,1,1]}}"#;
        let g = parse_game(text).unwrap();
        assert!(g.is_positive);
        assert_eq!(g.is_markov, None);
        assert!(matches!(g.game, Game::TwoPlayer(_)));
    }

    #[test]
    fn errors_name_the_field() {
        let bad = r#"{"kind":"two_player","a":{"rows":2,"cols":2,"data":[1,1,1]},"b":{"rows":2,"cols":2,"data":[1,1,1,1]}}"#;
        let e = parse_game(bad).unwrap_err();
        assert!(
            matches!(e, Error::Validation { ref field, .. } if field == "a.data"),
            "{e}"
        );

        let missing = r#"{"kind":"two_player","a":{"rows":1,"cols":1,"data":[1]}}"#;
        assert!(parse_game(missing).unwrap_err().to_string().contains("b"));

        let shapes = r#"{"kind":"two_player","a":{"rows":2,"cols":3,"data":[1,1,1,1,1,1]},"b":{"rows":2,"cols":3,"data":[1,1,1,1,1,1]}}"#;
        assert!(matches!(
            parse_game(shapes),
            Err(Error::DimensionMismatch { .. })
        ));

        let players = r#"{"kind":"multi_player","players":3,"actions":[1,1],"tensors":[[1],[1]]}"#;
        assert!(parse_game(players)
            .unwrap_err()
            .to_string()
            .contains("players"));

        let syntax = "{\"kind\": \"two_player\",\n \"a\": [}";
        let e = parse_game(syntax).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
        assert!(e.to_string().contains("line 2"), "{e}");

        let unknown = r#"{"kind":"two_player","c":1}"#;
        assert!(parse_game(unknown)
            .unwrap_err()
            .to_string()
            .contains("unknown field"));
    }

    #[test]
    fn round_trip_is_exact() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let g = crate::random::random_game(&mut rng, 3, 4, -1.0, 1.0);
        let f = GameFile::two_player(&g).with_name("r").with_seed(4);
        let back = GameFile::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_game().unwrap(), Game::TwoPlayer(g));
        let third = f64::from_bits(0x3fd5_5555_5555_5555);
        let t = GameTensor::shared(2, 1, vec![third]).unwrap();
        let f = GameFile::multi_player(&t);
        assert_eq!(
            GameFile::from_json(&f.to_json().unwrap())
                .unwrap()
                .to_game()
                .unwrap(),
            Game::Multi(t)
        );
    }
}
