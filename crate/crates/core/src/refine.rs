//! Grid refinement: re-solve a grid game with piecewise-linear components at
//! a sequence of step sizes and tabulate the equilibria at each.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::EfficientNashMethod;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::spec_file::{ComponentSpec, GameSpecFile, PayoffSpec, SpaceSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefineRow {
    #[serde(with = "crate::rational::as_string")]
    pub step: Rational,
    /// Grid points per player.
    pub grid_points: Vec<usize>,
    pub profiles: u128,
    pub nash_count: usize,
    pub efficient_nash: Vec<Vec<String>>,
    pub off_grid_breakpoints: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefineReport {
    pub rows: Vec<RefineRow>,
}

/// `file` with every grid strategy space switched to `step`.
pub fn with_step(file: &GameSpecFile, step: &Rational) -> Result<GameSpecFile> {
    if file.constraints.is_some() {
        return Err(Error::spec(
            "constraints",
            "refinement needs unconstrained grid spaces",
        ));
    }
    match &file.payoffs {
        PayoffSpec::Global { components } => {
            for (i, row) in components.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if !matches!(c, ComponentSpec::Pwl { .. }) {
                        return Err(Error::spec(
                            format!("payoffs.components[{i}][{j}]"),
                            "refinement needs piecewise-linear components",
                        ));
                    }
                }
            }
        }
        PayoffSpec::Individual { .. } => {
            return Err(Error::spec(
                "payoffs",
                "refinement needs globally quasi-Leontief piecewise-linear payoffs",
            ))
        }
    }
    let mut out = file.clone();
    for (i, p) in out.players.iter_mut().enumerate() {
        match &mut p.strategy_space {
            SpaceSpec::Grid { step: s, .. } => *s = format_rational(step),
            _ => {
                return Err(Error::spec(
                    format!("players[{i}].strategy_space"),
                    "refinement needs grid strategy spaces",
                ))
            }
        }
    }
    Ok(out)
}

/// One row per step. Efficient Nash points come from the E-map fixed
/// points and are checked against the direct scan.
pub fn refine(file: &GameSpecFile, steps: &[Rational], budget: u64) -> Result<RefineReport> {
    let mut rows = Vec::with_capacity(steps.len());
    for step in steps {
        let loaded = with_step(file, step)?.resolve()?;
        let game = &loaded.game;
        let nash = game.nash_enumerate(budget)?;
        let fixed = game.efficient_nash_enumerate(EfficientNashMethod::FixedPoint, budget)?;
        let brute: Vec<_> = nash
            .iter()
            .filter(|x| game.is_efficient_nash(x).unwrap_or(false))
            .cloned()
            .collect();
        if fixed != brute {
            return Err(Error::InvariantViolation(format!(
                "E-map fixed points differ from efficient Nash points at step {step}"
            )));
        }
        rows.push(RefineRow {
            step: *step,
            grid_points: game.spaces().iter().map(|s| s.len()).collect(),
            profiles: game.profile_count(),
            nash_count: nash.len(),
            efficient_nash: fixed.iter().map(|x| game.labels(x)).collect(),
            off_grid_breakpoints: loaded
                .off_grid
                .iter()
                .map(|o| o.discretized.off_grid_breakpoints.len())
                .sum(),
        });
    }
    Ok(RefineReport { rows })
}

/// Parses a comma-separated list of positive rationals such as `1/4,1/8`.
pub fn parse_steps(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|s| {
            let r = parse_rational(s.trim()).map_err(|m| Error::spec("--steps", m))?;
            if r <= Rational::from_integer(0) {
                return Err(Error::spec("--steps", format!("step {r} is not positive")));
            }
            Ok(r)
        })
        .collect()
}

impl RefineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("step\tpoints\tprofiles\tnash\tefficient nash\n");
        for r in &self.rows {
            let points: Vec<String> = r.grid_points.iter().map(|p| p.to_string()).collect();
            let eff: Vec<String> = r
                .efficient_nash
                .iter()
                .map(|p| format!("({})", p.join(", ")))
                .collect();
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.step,
                points.join("x"),
                r.profiles,
                r.nash_count,
                eff.join(" ")
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec_file::example_spec;

    #[test]
    fn example_refines_to_bottom_and_first_step() {
        let steps = parse_steps("1/4, 1/8,1/16").unwrap();
        let report = refine(&example_spec("1"), &steps, 1_000_000).unwrap();
        for row in &report.rows {
            let h = format_rational(&row.step);
            assert_eq!(
                row.efficient_nash,
                vec![vec!["0".to_string(), "0".to_string()], vec![h.clone(), h]]
            );
        }
        assert_eq!(report.rows[0].profiles, 81);
        assert_eq!(report.rows[0].nash_count, 57);
    }

    #[test]
    fn rejects_tables_and_bad_steps() {
        assert!(parse_steps("1/4,0").is_err());
        assert!(parse_steps("x").is_err());
        let mut file = example_spec("1/2");
        if let PayoffSpec::Global { components } = &mut file.payoffs {
            components[0][0] = ComponentSpec::Table {
                values: vec!["0".into(); 5],
            };
        }
        assert!(with_step(&file, &Rational::new(1, 4)).is_err());
    }
}
