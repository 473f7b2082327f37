//! Solve reports: the JSON documents written by the command-line tool.
//!
//! A report echoes the input specification, the validation results and
//! every listed profile together with the certificate that justifies it, so
//! [`SolveReport::revalidate`] can check it against the game again.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    Characterization, EfficiencyCase, EfficientNashCertificate, EfficientNashMethod, Game,
    NashCertificate, PlayerEfficiency, StrategyProfile,
};
use crate::semilattice::{check_axioms, AxiomReport};
use crate::spec_file::{GameSpecFile, LoadedGame, OffGridBreakpoints, SpaceSpec};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub budget: u64,
    /// Leaves out the generation timestamp so reruns are byte-identical.
    pub deterministic: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: crate::game::DEFAULT_BUDGET,
            deterministic: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NashMethod {
    Brute,
    Decoupled,
    Characterize,
}

impl NashMethod {
    pub fn name(self) -> &'static str {
        match self {
            NashMethod::Brute => "brute",
            NashMethod::Decoupled => "decoupled",
            NashMethod::Characterize => "characterize",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EfficientMethod {
    Brute,
    FixedPoint,
    Iterate {
        start: Vec<String>,
        max_steps: usize,
    },
}

impl EfficientMethod {
    pub fn name(&self) -> &'static str {
        match self {
            EfficientMethod::Brute => "brute",
            EfficientMethod::FixedPoint => "fixed-point",
            EfficientMethod::Iterate { .. } => "iterate",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub method: String,
    pub budget: u64,
    pub profiles: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Validation {
    pub axioms: Vec<AxiomReport>,
    pub payoff_model: &'static str,
    pub constraints_comprehensive: Vec<bool>,
    pub off_grid_breakpoints: Vec<OffGridBreakpoints>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NashEntry {
    pub labels: Vec<String>,
    pub certificate: NashCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterization: Option<Characterization>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EfficientEntry {
    pub labels: Vec<String>,
    pub certificate: EfficientNashCertificate,
    /// Per-player (a1)/(a2) analysis; global model with comprehensive
    /// constraints only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<Vec<PlayerEfficiency>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationReport {
    pub start: Vec<String>,
    pub max_steps: usize,
    pub trace: Vec<Vec<String>>,
    pub fixed_point: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Irrelevance {
    pub labels: Vec<String>,
    pub players: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Normalized {
    pub labels: Vec<String>,
    pub normalized: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub own_strategy_irrelevance: Vec<Irrelevance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_nash: Option<Vec<String>>,
    pub normalized: Vec<Normalized>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub command: String,
    pub metadata: Metadata,
    pub spec: GameSpecFile,
    pub validation: Validation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nash: Option<Vec<NashEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficient_nash: Option<Vec<EfficientEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iteration: Option<IterationReport>,
    pub diagnostics: Diagnostics,
}

const CONNECTED_NOTE: &str = "players in case a2 on a connected strategy set would additionally \
need x_i in argmin(u_ii; S_i); finite grids are not connected, so this refinement is not applied";

fn timestamp(opts: &Options) -> Option<u64> {
    if opts.deterministic {
        None
    } else {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs())
    }
}

fn comprehensive(game: &Game) -> bool {
    game.constraints()
        .iter()
        .zip(game.spaces())
        .all(|(s, space)| space.is_comprehensive(s))
}

fn validation(loaded: &LoadedGame) -> Validation {
    let game = &loaded.game;
    Validation {
        axioms: game.spaces().iter().map(|s| s.check_axioms()).collect(),
        payoff_model: if game.is_global() {
            "global"
        } else {
            "individual"
        },
        constraints_comprehensive: game
            .constraints()
            .iter()
            .zip(game.spaces())
            .map(|(s, space)| space.is_comprehensive(s))
            .collect(),
        off_grid_breakpoints: loaded.off_grid.clone(),
    }
}

fn skeleton(loaded: &LoadedGame, command: &str, method: &str, opts: &Options) -> SolveReport {
    SolveReport {
        schema_version: REPORT_SCHEMA_VERSION,
        command: command.to_string(),
        metadata: Metadata {
            method: method.to_string(),
            budget: opts.budget,
            profiles: loaded.game.profile_count(),
            generated_at: timestamp(opts),
        },
        spec: loaded.file.clone(),
        validation: validation(loaded),
        nash: None,
        efficient_nash: None,
        iteration: None,
        diagnostics: Diagnostics::default(),
    }
}

fn nash_entries(game: &Game, method: NashMethod, budget: u64) -> Result<Vec<NashEntry>> {
    let profiles = match method {
        NashMethod::Brute => game.nash_enumerate(budget)?,
        NashMethod::Decoupled => game.decoupled_nash(budget)?,
        NashMethod::Characterize => {
            let brute = game.nash_enumerate(budget)?;
            let mut found = Vec::new();
            for x in game.profiles() {
                if game.characterize_nash(&x)?.is_nash {
                    found.push(x);
                }
            }
            if found != brute {
                return Err(Error::InvariantViolation(
                    "N1/N2 characterization disagrees with direct enumeration".into(),
                ));
            }
            found
        }
    };
    profiles
        .into_iter()
        .map(|x| {
            let certificate = game.is_nash(&x)?;
            if !certificate.is_nash {
                return Err(Error::InvariantViolation(format!(
                    "listed profile {:?} is not a Nash point",
                    game.labels(&x)
                )));
            }
            let characterization = match method {
                NashMethod::Characterize => Some(game.characterize_nash(&x)?),
                _ => None,
            };
            Ok(NashEntry {
                labels: game.labels(&x),
                certificate,
                characterization,
            })
        })
        .collect()
}

fn player_names(file: &GameSpecFile, players: &[usize]) -> Vec<String> {
    players
        .iter()
        .map(|&i| file.players[i].name.clone())
        .collect()
}

fn nash_diagnostics(
    loaded: &LoadedGame,
    nash: &[StrategyProfile],
    budget: u64,
) -> Result<Diagnostics> {
    let game = &loaded.game;
    let mut d = Diagnostics::default();
    if !game.is_global() {
        return Ok(d);
    }
    for x in nash {
        let players = game.own_strategy_irrelevance(x)?;
        if !players.is_empty() {
            d.own_strategy_irrelevance.push(Irrelevance {
                labels: game.labels(x),
                players: player_names(&loaded.file, &players),
            });
        }
    }
    if comprehensive(game) {
        d.maximal_nash = Some(game.labels(&game.maximal_nash(budget)?));
        for x in nash {
            let y = game.normalize_nash(x)?;
            d.normalized.push(Normalized {
                labels: game.labels(x),
                normalized: game.labels(&y),
            });
        }
    } else {
        d.notes.push(
            "constraint sets are not comprehensive; maximal and normalized forms skipped".into(),
        );
    }
    Ok(d)
}

fn efficient_entries(game: &Game, profiles: &[StrategyProfile]) -> Result<Vec<EfficientEntry>> {
    let analysed = game.is_global() && comprehensive(game);
    profiles
        .iter()
        .map(|x| {
            let certificate = game.efficient_nash_certificate(x)?;
            if !certificate.is_efficient_nash {
                return Err(Error::InvariantViolation(format!(
                    "listed profile {:?} is not an efficient Nash point",
                    game.labels(x)
                )));
            }
            let efficiency = if analysed {
                let per_player = (0..game.players())
                    .map(|i| game.efficiency_report(x, i))
                    .collect::<Result<Vec<_>>>()?;
                if per_player.iter().any(|p| !p.efficient) {
                    return Err(Error::InvariantViolation(format!(
                        "case analysis rejects efficient Nash point {:?}",
                        game.labels(x)
                    )));
                }
                Some(per_player)
            } else {
                None
            };
            Ok(EfficientEntry {
                labels: game.labels(x),
                certificate,
                efficiency,
            })
        })
        .collect()
}

fn efficient_notes(entries: &[EfficientEntry]) -> Vec<String> {
    let a2 = entries.iter().any(|e| {
        e.efficiency
            .as_ref()
            .is_some_and(|ps| ps.iter().any(|p| p.case == EfficiencyCase::A2))
    });
    if a2 {
        vec![CONNECTED_NOTE.to_string()]
    } else {
        Vec::new()
    }
}

pub fn nash_report(loaded: &LoadedGame, method: NashMethod, opts: &Options) -> Result<SolveReport> {
    let game = &loaded.game;
    let mut report = skeleton(loaded, "nash", method.name(), opts);
    let entries = nash_entries(game, method, opts.budget)?;
    let profiles: Vec<StrategyProfile> = entries
        .iter()
        .map(|e| e.certificate.profile.clone())
        .collect();
    report.diagnostics = nash_diagnostics(loaded, &profiles, opts.budget)?;
    report.nash = Some(entries);
    report.revalidate(game)?;
    Ok(report)
}

pub fn efficient_nash_report(
    loaded: &LoadedGame,
    method: &EfficientMethod,
    opts: &Options,
) -> Result<SolveReport> {
    let game = &loaded.game;
    let mut report = skeleton(loaded, "efficient-nash", method.name(), opts);
    match method {
        EfficientMethod::Brute | EfficientMethod::FixedPoint => {
            let m = if *method == EfficientMethod::Brute {
                EfficientNashMethod::Brute
            } else {
                EfficientNashMethod::FixedPoint
            };
            let profiles = game.efficient_nash_enumerate(m, opts.budget)?;
            let entries = efficient_entries(game, &profiles)?;
            report.diagnostics.notes = efficient_notes(&entries);
            report.efficient_nash = Some(entries);
        }
        EfficientMethod::Iterate { start, max_steps } => {
            let x = game.profile_from_labels(start)?;
            let trace = game.e_map_iterate(&x, *max_steps)?;
            if let Some(fixed) = &trace.fixed_point {
                report.efficient_nash = Some(efficient_entries(game, std::slice::from_ref(fixed))?);
            } else {
                report
                    .diagnostics
                    .notes
                    .push(format!("no fixed point reached within {max_steps} steps"));
            }
            report.iteration = Some(IterationReport {
                start: start.clone(),
                max_steps: *max_steps,
                trace: trace.trace.iter().map(|p| game.labels(p)).collect(),
                fixed_point: trace.fixed_point.as_ref().map(|p| game.labels(p)),
            });
        }
    }
    report.revalidate(game)?;
    Ok(report)
}

/// Nash points, efficient Nash points and all diagnostics in one document.
/// Efficient Nash points come from the fixed-point method when the game is
/// unconstrained, cross-checked against the direct scan.
pub fn full_report(loaded: &LoadedGame, opts: &Options) -> Result<SolveReport> {
    let game = &loaded.game;
    let method = if game.is_unconstrained() {
        "fixed-point"
    } else {
        "brute"
    };
    let mut report = skeleton(loaded, "report", method, opts);
    let nash = nash_entries(game, NashMethod::Brute, opts.budget)?;
    let profiles: Vec<StrategyProfile> =
        nash.iter().map(|e| e.certificate.profile.clone()).collect();
    report.diagnostics = nash_diagnostics(loaded, &profiles, opts.budget)?;
    let brute = game.efficient_nash_enumerate(EfficientNashMethod::Brute, opts.budget)?;
    if game.is_unconstrained() {
        let fixed = game.efficient_nash_enumerate(EfficientNashMethod::FixedPoint, opts.budget)?;
        if fixed != brute {
            return Err(Error::InvariantViolation(
                "E-map fixed points differ from the efficient Nash points".into(),
            ));
        }
    }
    let efficient = efficient_entries(game, &brute)?;
    report.diagnostics.notes.extend(efficient_notes(&efficient));
    report.nash = Some(nash);
    report.efficient_nash = Some(efficient);
    report.revalidate(game)?;
    Ok(report)
}

impl SolveReport {
    /// Re-checks every listed profile against its certificate.
    pub fn revalidate(&self, game: &Game) -> Result<()> {
        let fail = |what: &str, labels: &[String]| {
            Err(Error::InvariantViolation(format!(
                "{what} {labels:?} does not re-validate against its certificate"
            )))
        };
        for entry in self.nash.iter().flatten() {
            let c = &entry.certificate;
            if !c.is_nash || !c.verify(game) || game.labels(&c.profile) != entry.labels {
                return fail("Nash point", &entry.labels);
            }
        }
        for entry in self.efficient_nash.iter().flatten() {
            let c = &entry.certificate;
            let nash_ok = c.nash.is_nash && c.nash.verify(game);
            let efficient_ok = (0..game.players()).all(|i| {
                c.efficient_for.get(i) == Some(&true)
                    && game.is_efficient_for(&c.nash.profile, i).unwrap_or(false)
            });
            if !nash_ok || !efficient_ok || game.labels(&c.nash.profile) != entry.labels {
                return fail("efficient Nash point", &entry.labels);
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.spec.players.iter().map(|p| p.name.as_str()).collect();
        let _ = writeln!(
            out,
            "{} ({}), {} players, {} profiles",
            self.command,
            self.metadata.method,
            names.len(),
            self.metadata.profiles
        );
        for o in &self.validation.off_grid_breakpoints {
            let points: Vec<String> = o
                .discretized
                .off_grid_breakpoints
                .iter()
                .map(|r| r.to_string())
                .collect();
            let _ = writeln!(
                out,
                "warning: component ({}, {}) has breakpoints off the grid: {}",
                names[o.player],
                names[o.factor],
                points.join(", ")
            );
        }
        if let Some(nash) = &self.nash {
            let _ = writeln!(out, "Nash points: {}", nash.len());
            for e in nash {
                let _ = writeln!(out, "  ({})", e.labels.join(", "));
            }
        }
        if let Some(eff) = &self.efficient_nash {
            let _ = writeln!(out, "efficient Nash points: {}", eff.len());
            for e in eff {
                let _ = writeln!(out, "  ({})", e.labels.join(", "));
            }
        }
        if let Some(it) = &self.iteration {
            let steps: Vec<String> = it
                .trace
                .iter()
                .map(|p| format!("({})", p.join(", ")))
                .collect();
            let _ = writeln!(out, "iteration: {}", steps.join(" -> "));
            match &it.fixed_point {
                Some(p) => {
                    let _ = writeln!(out, "fixed point: ({})", p.join(", "));
                }
                None => {
                    let _ = writeln!(out, "no fixed point within {} steps", it.max_steps);
                }
            }
        }
        let d = &self.diagnostics;
        if let Some(m) = &d.maximal_nash {
            let _ = writeln!(out, "maximal Nash point: ({})", m.join(", "));
        }
        for n in &d.normalized {
            if n.labels != n.normalized {
                let _ = writeln!(
                    out,
                    "normalized: ({}) -> ({})",
                    n.labels.join(", "),
                    n.normalized.join(", ")
                );
            }
        }
        for i in &d.own_strategy_irrelevance {
            let _ = writeln!(
                out,
                "own strategy irrelevant at ({}): {}",
                i.labels.join(", "),
                i.players.join(", ")
            );
        }
        for note in &d.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

/// Axiom check of every strategy space, without building the game.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub schema_version: u32,
    pub players: Vec<PlayerAxioms>,
    pub valid: bool,
    /// First error met while building the full game, if the spaces are valid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlayerAxioms {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl AxiomCheck {
    pub fn run(file: &GameSpecFile) -> Self {
        let players: Vec<PlayerAxioms> = file
            .players
            .iter()
            .map(|p| {
                let (report, error) = match raw_axioms(&p.strategy_space) {
                    Ok(r) => (Some(r), None),
                    Err(e) => (None, Some(e)),
                };
                PlayerAxioms {
                    name: p.name.clone(),
                    report,
                    error,
                }
            })
            .collect();
        let spaces_ok = players
            .iter()
            .all(|p| p.report.as_ref().is_some_and(|r| r.is_valid()));
        let error = if spaces_ok {
            file.resolve().err().map(|e| e.to_string())
        } else {
            None
        };
        AxiomCheck {
            schema_version: REPORT_SCHEMA_VERSION,
            valid: spaces_ok && error.is_none(),
            players,
            error,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.players {
            match (&p.report, &p.error) {
                (Some(r), _) if r.is_valid() => {
                    let _ = writeln!(out, "{}: {} elements, axioms hold", p.name, r.size);
                }
                (Some(r), _) => {
                    let _ = writeln!(out, "{}: {} violations", p.name, r.violations.len());
                    for v in &r.violations {
                        let _ = writeln!(out, "  {v}");
                    }
                }
                (None, Some(e)) => {
                    let _ = writeln!(out, "{}: {e}", p.name);
                }
                (None, None) => {}
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "{}", if self.valid { "valid" } else { "invalid" });
        out
    }
}

fn raw_axioms(space: &SpaceSpec) -> std::result::Result<AxiomReport, String> {
    match space {
        SpaceSpec::Explicit {
            elements,
            meet_table,
        } => {
            let table = meet_table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|name| {
                            elements
                                .iter()
                                .position(|e| e == name)
                                .ok_or_else(|| format!("unknown element {name:?} in meet table"))
                        })
                        .collect::<std::result::Result<Vec<_>, _>>()
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(check_axioms(&table))
        }
        other => crate::spec_file::resolve_space(other, "strategy_space")
            .map(|(space, _)| space.check_axioms())
            .map_err(|e| e.to_string()),
    }
}
