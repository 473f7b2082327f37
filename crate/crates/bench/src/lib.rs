//! Fixtures shared by the benchmarks.

use qlnash_core::random::{self, global_game, individual_game, GlobalGameParams};
use qlnash_core::spec_file::example_spec;
use qlnash_core::Game;

/// The two-player ramp example on `[0, 2]²` at grid step `step`.
pub fn example_game(step: &str) -> Game {
    example_spec(step)
        .resolve()
        .expect("example spec is valid")
        .game
}

pub fn global_corpus(games: u64) -> Vec<Game> {
    (0..games)
        .map(|seed| global_game(&mut random::rng(seed), GlobalGameParams::default()))
        .collect()
}

pub fn individual_corpus(games: u64) -> Vec<Game> {
    (0..games)
        .map(|seed| individual_game(&mut random::rng(seed), 2, 5))
        .collect()
}
