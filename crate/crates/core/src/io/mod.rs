//! Game and result files, trace export and seeded game generation.

mod game_file;
mod generate;
mod result_file;
mod trace;

pub use game_file::{
    load_game, parse_game, save_game, Game, GameFile, GameKind, LoadedGame, MatrixSpec,
};
pub use generate::{
    gen_random, EntryDistribution, GameShape, MARKOV_SPREAD, MAX_GENERATED_ENTRIES,
};
pub use result_file::{load_result, save_result, LearningSummary, ResultFile, StoredEquilibrium};
pub use trace::{write_multi_trace_csv, write_trace_csv};

fn read_file(path: &std::path::Path) -> crate::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}
