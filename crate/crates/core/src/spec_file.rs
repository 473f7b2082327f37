//! JSON game specification files.
//!
//! Every number in the format is an exact rational written as a string
//! (`"3/4"`, `"2"`). Strategy spaces are explicit meet tables, grids on an
//! interval (chains under `min`), or boxes (products of per-axis grids).
//! Global payoffs list one component per (player, factor) pair, either as a
//! piecewise-linear function of a grid coordinate or as a value table in
//! element order. Individual payoffs list one table per player in
//! lexicographic profile order (first player most significant).

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, PayoffModel};
use crate::grid::Grid;
use crate::leontief::TabulatedFunction;
use crate::pwl::{Discretized, PiecewiseLinear};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::semilattice::{ElementSet, FiniteInfSemilattice, ProductSemilattice};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpecFile {
    pub schema_version: u32,
    pub players: Vec<PlayerSpec>,
    /// Per-player allowed strategies by label; `null` means the whole space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<Option<Vec<String>>>>,
    pub payoffs: PayoffSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub name: String,
    pub strategy_space: SpaceSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lower: String,
    pub upper: String,
    pub step: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Explicit {
        elements: Vec<String>,
        meet_table: Vec<Vec<String>>,
    },
    Grid {
        lower: String,
        upper: String,
        step: String,
    },
    Box {
        axes: Vec<GridSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PayoffSpec {
    Global { components: Vec<Vec<ComponentSpec>> },
    Individual { tables: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentSpec {
    /// `[x, y]` pairs with strictly increasing `x` and weakly increasing `y`.
    Pwl {
        breakpoints: Vec<[String; 2]>,
    },
    Table {
        values: Vec<String>,
    },
}

/// A validated game together with what was learned while building it.
#[derive(Clone, Debug)]
pub struct LoadedGame {
    pub file: GameSpecFile,
    pub game: Game,
    /// The grid of each player with a one-dimensional grid space.
    pub grids: Vec<Option<Grid>>,
    /// Off-grid breakpoints per piecewise-linear component `(i, j)`.
    pub off_grid: Vec<OffGridBreakpoints>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffGridBreakpoints {
    pub player: usize,
    pub factor: usize,
    #[serde(flatten)]
    pub discretized: Discretized,
}

fn rat(text: &str, location: &str) -> Result<Rational> {
    parse_rational(text).map_err(|m| Error::spec(location, m))
}

fn grid_from(lower: &str, upper: &str, step: &str, location: &str) -> Result<Grid> {
    let grid = Grid::new(
        rat(lower, &format!("{location}.lower"))?,
        rat(upper, &format!("{location}.upper"))?,
        rat(step, &format!("{location}.step"))?,
    );
    grid.map_err(|e| Error::spec(location, e.to_string()))
}

impl GridSpec {
    pub fn from_grid(grid: &Grid) -> Self {
        GridSpec {
            lower: format_rational(&grid.lower),
            upper: format_rational(&grid.upper),
            step: format_rational(&grid.step),
        }
    }
}

impl SpaceSpec {
    pub fn grid(grid: &Grid) -> Self {
        SpaceSpec::Grid {
            lower: format_rational(&grid.lower),
            upper: format_rational(&grid.upper),
            step: format_rational(&grid.step),
        }
    }

    pub fn resolve(&self, location: &str) -> Result<(FiniteInfSemilattice, Option<Grid>)> {
        match self {
            SpaceSpec::Grid { lower, upper, step } => {
                let grid = grid_from(lower, upper, step, location)?;
                Ok((grid.space(), Some(grid)))
            }
            SpaceSpec::Box { axes } => {
                if axes.is_empty() {
                    return Err(Error::spec(location, "a box needs at least one axis"));
                }
                let factors = axes
                    .iter()
                    .enumerate()
                    .map(|(k, a)| {
                        grid_from(
                            &a.lower,
                            &a.upper,
                            &a.step,
                            &format!("{location}.axes[{k}]"),
                        )
                        .map(|g| Arc::new(g.space()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let product = ProductSemilattice::new(factors)?;
                Ok((product.flatten(), None))
            }
            SpaceSpec::Explicit {
                elements,
                meet_table,
            } => {
                if elements.is_empty() {
                    return Err(Error::spec(location, "no elements"));
                }
                let index = |name: &str, at: String| {
                    elements
                        .iter()
                        .position(|e| e == name)
                        .ok_or_else(|| Error::spec(at, format!("unknown element {name:?}")))
                };
                for (k, name) in elements.iter().enumerate() {
                    if elements[..k].contains(name) {
                        return Err(Error::spec(
                            format!("{location}.elements[{k}]"),
                            format!("duplicate element {name:?}"),
                        ));
                    }
                }
                let table = meet_table
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(c, name)| {
                                index(name, format!("{location}.meet_table[{r}][{c}]"))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let report = crate::semilattice::check_axioms(&table);
                if !report.is_valid() {
                    let shown: Vec<String> = report
                        .violations
                        .iter()
                        .take(3)
                        .map(|v| describe_violation(v, elements))
                        .collect();
                    return Err(Error::spec(
                        format!("{location}.meet_table"),
                        format!("invalid meet table: {}", shown.join("; ")),
                    ));
                }
                let space = FiniteInfSemilattice::from_table(table, Some(elements.clone()))?;
                Ok((space, None))
            }
        }
    }
}

pub fn resolve_space(
    space: &SpaceSpec,
    location: &str,
) -> Result<(FiniteInfSemilattice, Option<Grid>)> {
    space.resolve(location)
}

fn describe_violation(v: &crate::semilattice::AxiomViolation, names: &[String]) -> String {
    use crate::semilattice::AxiomViolation as V;
    let n = |e: &usize| names.get(*e).map(String::as_str).unwrap_or("?");
    match v {
        V::Commutativity { a, b, ab, ba } => format!(
            "commutativity fails at ({}, {}): meet gives {} one way and {} the other",
            n(a),
            n(b),
            n(ab),
            n(ba)
        ),
        V::Associativity { a, b, c } => {
            format!("associativity fails at ({}, {}, {})", n(a), n(b), n(c))
        }
        V::Idempotence { a, meet } => format!("meet({}, {}) = {}", n(a), n(a), n(meet)),
        V::Antisymmetry { a, b } => format!("antisymmetry fails at ({}, {})", n(a), n(b)),
        V::Transitivity { a, b, c } => {
            format!("transitivity fails at ({}, {}, {})", n(a), n(b), n(c))
        }
        other => other.to_string(),
    }
}

impl GameSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GameSpecFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::spec(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    file.schema_version
                ),
            ));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    /// Builds the validated game: semilattice axioms, grid arithmetic,
    /// isotone breakpoints and quasi-Leontief checks all run here.
    pub fn resolve(&self) -> Result<LoadedGame> {
        let n = self.players.len();
        if n == 0 {
            return Err(Error::spec("players", "at least one player is required"));
        }
        let mut spaces = Vec::with_capacity(n);
        let mut grids = Vec::with_capacity(n);
        for (i, p) in self.players.iter().enumerate() {
            let (space, grid) = p
                .strategy_space
                .resolve(&format!("players[{i}].strategy_space"))?;
            spaces.push(Arc::new(space));
            grids.push(grid);
        }

        let constraints = match &self.constraints {
            None => None,
            Some(list) => {
                if list.len() != n {
                    return Err(Error::spec(
                        "constraints",
                        format!("{} entries for {n} players", list.len()),
                    ));
                }
                let sets = list
                    .iter()
                    .zip(&spaces)
                    .enumerate()
                    .map(|(i, (entry, space))| match entry {
                        None => Ok(space.full_set()),
                        Some(labels) => {
                            let members = labels
                                .iter()
                                .enumerate()
                                .map(|(k, l)| {
                                    space.index_of(l).ok_or_else(|| {
                                        Error::spec(
                                            format!("constraints[{i}][{k}]"),
                                            format!("unknown strategy {l:?}"),
                                        )
                                    })
                                })
                                .collect::<Result<Vec<_>>>()?;
                            ElementSet::new(space.len(), members)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(sets)
            }
        };

        let mut off_grid = Vec::new();
        let model = match &self.payoffs {
            PayoffSpec::Global { components } => {
                if components.len() != n || components.iter().any(|row| row.len() != n) {
                    return Err(Error::spec(
                        "payoffs.components",
                        format!("expected a {n}x{n} matrix of components"),
                    ));
                }
                let mut rows = Vec::with_capacity(n);
                for (i, row) in components.iter().enumerate() {
                    let mut out = Vec::with_capacity(n);
                    for (j, c) in row.iter().enumerate() {
                        let location = format!("payoffs.components[{i}][{j}]");
                        let (f, d) =
                            resolve_component(c, &spaces[j], grids[j].as_ref(), &location)?;
                        let cert = f.is_quasi_leontief();
                        if !cert.is_ql {
                            let message = if f.is_isotone() {
                                "component is not quasi-Leontief".to_string()
                            } else {
                                "non-isotone component".to_string()
                            };
                            return Err(Error::spec(location, message));
                        }
                        if let Some(d) = d {
                            if !d.off_grid_breakpoints.is_empty() {
                                off_grid.push(OffGridBreakpoints {
                                    player: i,
                                    factor: j,
                                    discretized: d,
                                });
                            }
                        }
                        out.push(f);
                    }
                    rows.push(out);
                }
                PayoffModel::Global { components: rows }
            }
            PayoffSpec::Individual { tables } => {
                let parsed = tables
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        t.iter()
                            .enumerate()
                            .map(|(k, v)| rat(v, &format!("payoffs.tables[{i}][{k}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                PayoffModel::Individual { tables: parsed }
            }
        };

        let game = Game::new(spaces, constraints, model).map_err(|e| match e {
            Error::Spec { .. } => e,
            other => Error::spec("payoffs", other.to_string()),
        })?;
        Ok(LoadedGame {
            file: self.clone(),
            game,
            grids,
            off_grid,
        })
    }

    /// An explicit-form file describing `game` exactly: every space as a meet
    /// table, every payoff as a value table.
    pub fn from_game(game: &Game) -> Self {
        let players = game
            .spaces()
            .iter()
            .enumerate()
            .map(|(i, s)| PlayerSpec {
                name: format!("player{}", i + 1),
                strategy_space: SpaceSpec::Explicit {
                    elements: s.labels().to_vec(),
                    meet_table: s
                        .table()
                        .iter()
                        .map(|row| row.iter().map(|&e| s.label(e).to_string()).collect())
                        .collect(),
                },
            })
            .collect();
        let constraints = (!game.is_unconstrained()).then(|| {
            game.constraints()
                .iter()
                .zip(game.spaces())
                .map(|(c, s)| {
                    (!c.is_full()).then(|| c.iter().map(|e| s.label(e).to_string()).collect())
                })
                .collect()
        });
        let payoffs = match game.model() {
            PayoffModel::Global { components } => PayoffSpec::Global {
                components: components
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|f| ComponentSpec::Table {
                                values: f.values().iter().map(format_rational).collect(),
                            })
                            .collect()
                    })
                    .collect(),
            },
            PayoffModel::Individual { tables } => PayoffSpec::Individual {
                tables: tables
                    .iter()
                    .map(|t| t.iter().map(format_rational).collect())
                    .collect(),
            },
        };
        GameSpecFile {
            schema_version: SCHEMA_VERSION,
            players,
            constraints,
            payoffs,
        }
    }
}

fn resolve_component(
    spec: &ComponentSpec,
    space: &Arc<FiniteInfSemilattice>,
    grid: Option<&Grid>,
    location: &str,
) -> Result<(TabulatedFunction, Option<Discretized>)> {
    match spec {
        ComponentSpec::Table { values } => {
            let values = values
                .iter()
                .enumerate()
                .map(|(k, v)| rat(v, &format!("{location}.values[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let f = TabulatedFunction::new(space.clone(), values)
                .map_err(|e| Error::spec(location, e.to_string()))?;
            Ok((f, None))
        }
        ComponentSpec::Pwl { breakpoints } => {
            let grid = grid.ok_or_else(|| {
                Error::spec(
                    location,
                    "piecewise-linear components need a grid strategy space",
                )
            })?;
            let points = breakpoints
                .iter()
                .enumerate()
                .map(|(k, [x, y])| {
                    let at = format!("{location}.breakpoints[{k}]");
                    Ok((rat(x, &at)?, rat(y, &at)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let pwl =
                PiecewiseLinear::new(points).map_err(|e| Error::spec(location, e.to_string()))?;
            let d = pwl
                .discretize(grid)
                .map_err(|e| Error::spec(location, e.to_string()))?;
            let f = TabulatedFunction::new(space.clone(), d.values.clone())?;
            Ok((f, Some(d)))
        }
    }
}

pub fn parse_spec_str(text: &str) -> Result<LoadedGame> {
    GameSpecFile::from_json(text)?.resolve()
}

pub fn parse_spec(path: impl AsRef<Path>) -> Result<LoadedGame> {
    let text = std::fs::read_to_string(path)?;
    parse_spec_str(&text)
}

pub fn write_spec(path: impl AsRef<Path>, file: &GameSpecFile) -> Result<()> {
    std::fs::write(path, file.to_json() + "\n")?;
    Ok(())
}

/// The two-player example on `[0, 2]²`: `u_{i,i}(x) = min(2x, 2)` and
/// `u_{i,j}(x) = x / 2` for `i != j`.
pub fn example_spec(step: &str) -> GameSpecFile {
    let ramp = ComponentSpec::Pwl {
        breakpoints: [["0", "0"], ["1", "2"], ["2", "2"]]
            .map(|p| p.map(String::from))
            .to_vec(),
    };
    let half = ComponentSpec::Pwl {
        breakpoints: [["0", "0"], ["2", "1"]]
            .map(|p| p.map(String::from))
            .to_vec(),
    };
    let space = SpaceSpec::Grid {
        lower: "0".into(),
        upper: "2".into(),
        step: step.into(),
    };
    GameSpecFile {
        schema_version: SCHEMA_VERSION,
        players: vec![
            PlayerSpec {
                name: "player1".into(),
                strategy_space: space.clone(),
            },
            PlayerSpec {
                name: "player2".into(),
                strategy_space: space,
            },
        ],
        constraints: None,
        payoffs: PayoffSpec::Global {
            components: vec![vec![ramp.clone(), half.clone()], vec![half, ramp]],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn example_resolves() {
        let loaded = example_spec("1/4").resolve().unwrap();
        assert!(loaded.game.is_global());
        assert_eq!(loaded.game.profile_count(), 81);
        assert!(loaded.off_grid.is_empty());
        let c = loaded.game.component(0, 0).unwrap();
        assert_eq!(c.value(3), frac(3, 2));
        assert_eq!(loaded.game.component(0, 1).unwrap().value(8), int(1));
        assert_eq!(loaded.game.component(0, 0).unwrap().value(0), int(0));
    }

    #[test]
    fn rejects_non_isotone_breakpoints() {
        let mut file = example_spec("1/4");
        if let PayoffSpec::Global { components } = &mut file.payoffs {
            components[0][1] = ComponentSpec::Pwl {
                breakpoints: vec![["0".into(), "1".into()], ["1".into(), "0".into()]],
            };
        }
        let err = file.resolve().unwrap_err().to_string();
        assert!(err.contains("non-isotone"), "{err}");
    }

    #[test]
    fn rejects_bad_meet_table() {
        let text = r#"{
          "schema_version": 1,
          "players": [{"name": "p", "strategy_space": {"kind": "explicit",
             "elements": ["bot", "a", "b"],
             "meet_table": [["bot","bot","bot"],["bot","a","a"],["bot","b","b"]]}}],
          "payoffs": {"kind": "global", "components": [[{"kind": "table", "values": ["0","0","0"]}]]}
        }"#;
        let err = parse_spec_str(text).unwrap_err().to_string();
        assert!(err.contains("meet_table"), "{err}");
        assert!(err.contains("commutativity fails at (a, b)"), "{err}");
    }

    #[test]
    fn rejects_malformed_rationals() {
        let err = parse_spec_str(&example_spec("0.25").to_json())
            .unwrap_err()
            .to_string();
        assert!(err.contains("players[0].strategy_space.step"), "{err}");
    }

    #[test]
    fn rejects_non_ql_individual_sections() {
        let text = r#"{
          "schema_version": 1,
          "players": [{"name": "p", "strategy_space": {"kind": "explicit",
             "elements": ["bot", "a", "b"],
             "meet_table": [["bot","bot","bot"],["bot","a","bot"],["bot","bot","b"]]}}],
          "payoffs": {"kind": "individual", "tables": [["0", "1", "2"]]}
        }"#;
        let err = parse_spec_str(text).unwrap_err().to_string();
        assert!(err.contains("not quasi-Leontief"), "{err}");
    }

    #[test]
    fn flags_off_grid_breakpoints() {
        let loaded = example_spec("2/3").resolve().unwrap();
        assert_eq!(loaded.off_grid.len(), 2);
        assert_eq!(
            loaded.off_grid[0].discretized.off_grid_breakpoints,
            vec![int(1)]
        );
    }

    #[test]
    fn box_spaces_are_products() {
        let text = r#"{
          "schema_version": 1,
          "players": [{"name": "p", "strategy_space": {"kind": "box",
             "axes": [{"lower":"0","upper":"1","step":"1/2"},{"lower":"0","upper":"1","step":"1"}]}}],
          "constraints": [["(0,0)", "(1/2,0)"]],
          "payoffs": {"kind": "global", "components": [[{"kind": "table", "values": ["0","0","1","1","1","2"]}]]}
        }"#;
        let loaded = parse_spec_str(text).unwrap();
        assert_eq!(loaded.game.space(0).len(), 6);
        assert_eq!(loaded.game.space(0).label(3), "(1/2,1)");
        assert_eq!(loaded.game.constraints()[0].len(), 2);
    }

    #[test]
    fn explicit_export_round_trips() {
        let loaded = example_spec("1/4").resolve().unwrap();
        let exported = GameSpecFile::from_game(&loaded.game);
        let back = parse_spec_str(&exported.to_json()).unwrap();
        assert_eq!(back.game, loaded.game);
    }

    #[test]
    fn wrong_schema_version() {
        let mut file = example_spec("1");
        file.schema_version = 9;
        assert!(parse_spec_str(&file.to_json()).is_err());
    }
}
