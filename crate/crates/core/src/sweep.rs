//! Existence sweep: how often seeded random games have Nash and efficient
//! Nash points. Empty cases are kept with their certificates.

use serde::Serialize;

use crate::error::Result;
use crate::game::{EfficientNashCertificate, EfficientNashMethod, Game, NashCertificate};
use crate::random::{global_game, individual_game, rng, GlobalGameParams};
use crate::spec_file::GameSpecFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepParams {
    pub seed: u64,
    pub games: usize,
    pub global: GlobalGameParams,
    /// Space size bound for the two-player individual-model games.
    pub individual_max_size: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            seed: 0,
            games: 200,
            global: GlobalGameParams::default(),
            individual_max_size: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    Global,
    Individual,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmptyCase {
    pub index: usize,
    pub kind: CorpusKind,
    pub game: GameSpecFile,
    /// When there is no Nash point: one refuting certificate per profile.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nash_refutations: Vec<NashCertificate>,
    /// When Nash points exist but none is efficient: their certificates.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub efficiency_refutations: Vec<EfficientNashCertificate>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct KindSummary {
    pub games: usize,
    pub nonempty_nash: usize,
    pub nonempty_efficient_nash: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub games: usize,
    pub nonempty_nash: usize,
    pub nonempty_efficient_nash: usize,
    pub global: KindSummary,
    pub individual: KindSummary,
    pub empty_cases: Vec<EmptyCase>,
}

impl SweepReport {
    pub fn nash_fraction(&self) -> f64 {
        self.nonempty_nash as f64 / self.games.max(1) as f64
    }

    pub fn efficient_fraction(&self) -> f64 {
        self.nonempty_efficient_nash as f64 / self.games.max(1) as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} games (seed {}): nonempty Nash {}/{} ({:.3}), nonempty efficient Nash {}/{} ({:.3})\n",
            self.games,
            self.seed,
            self.nonempty_nash,
            self.games,
            self.nash_fraction(),
            self.nonempty_efficient_nash,
            self.games,
            self.efficient_fraction()
        );
        for (name, k) in [("global", &self.global), ("individual", &self.individual)] {
            out += &format!(
                "  {name}: {} games, nonempty Nash {}, nonempty efficient Nash {}\n",
                k.games, k.nonempty_nash, k.nonempty_efficient_nash
            );
        }
        for c in &self.empty_cases {
            let what = if c.nash_refutations.is_empty() {
                "no efficient Nash point"
            } else {
                "no Nash point"
            };
            out += &format!("  empty: game {} ({:?}): {what}\n", c.index, c.kind);
        }
        out
    }
}

/// The `index`-th corpus game for `seed`: even indices are global-model
/// games, odd indices two-player individual-model games.
pub fn corpus_game(params: &SweepParams, index: usize) -> (CorpusKind, Game) {
    let mut r = rng(params
        .seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(index as u64));
    if index.is_multiple_of(2) {
        (CorpusKind::Global, global_game(&mut r, params.global))
    } else {
        (
            CorpusKind::Individual,
            individual_game(&mut r, 2, params.individual_max_size),
        )
    }
}

pub fn existence_sweep(params: &SweepParams, budget: u64) -> Result<SweepReport> {
    let mut report = SweepReport {
        seed: params.seed,
        games: params.games,
        nonempty_nash: 0,
        nonempty_efficient_nash: 0,
        global: KindSummary::default(),
        individual: KindSummary::default(),
        empty_cases: Vec::new(),
    };
    for index in 0..params.games {
        let (kind, game) = corpus_game(params, index);
        let nash = game.nash_enumerate(budget)?;
        let efficient = game.efficient_nash_enumerate(EfficientNashMethod::Brute, budget)?;
        let summary = match kind {
            CorpusKind::Global => &mut report.global,
            CorpusKind::Individual => &mut report.individual,
        };
        summary.games += 1;
        if !nash.is_empty() {
            summary.nonempty_nash += 1;
            report.nonempty_nash += 1;
        }
        if !efficient.is_empty() {
            summary.nonempty_efficient_nash += 1;
            report.nonempty_efficient_nash += 1;
            continue;
        }
        let nash_refutations = if nash.is_empty() {
            game.profiles()
                .map(|x| game.is_nash(&x))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let efficiency_refutations = nash
            .iter()
            .map(|x| game.efficient_nash_certificate(x))
            .collect::<Result<Vec<_>>>()?;
        report.empty_cases.push(EmptyCase {
            index,
            kind,
            game: GameSpecFile::from_game(&game),
            nash_refutations,
            efficiency_refutations,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_is_deterministic_and_consistent() {
        let params = SweepParams {
            seed: 5,
            games: 40,
            ..SweepParams::default()
        };
        let a = existence_sweep(&params, 1_000_000).unwrap();
        let b = existence_sweep(&params, 1_000_000).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.global.games + a.individual.games, 40);
        assert_eq!(a.global.nonempty_nash, a.global.games);
        assert_eq!(a.games - a.nonempty_efficient_nash, a.empty_cases.len());
        for c in &a.empty_cases {
            assert!(c.nash_refutations.iter().all(|n| !n.is_nash));
            assert!(c
                .efficiency_refutations
                .iter()
                .all(|e| !e.is_efficient_nash));
        }
    }
}
