//! Abstract games `(u_i, S_i, X_i)` with quasi-Leontief payoffs.
//!
//! Two payoff models are supported. A *global* model stores components
//! `u_{i,j}` on `X_j` and evaluates `u_i(x) = min_j u_{i,j}(x_j)`. An
//! *individual* model stores one full table per player over `∏ X_j`; every
//! section `u_i[x_{-i}]` must be quasi-Leontief.
//!
//! Deviations in the Nash test range over the constraint sets `S_i`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::leontief::{QuasiLeontief, TabulatedFunction};
use crate::rational::Rational;
use crate::semilattice::{Element, ElementSet, FiniteInfSemilattice, ProductSemilattice};

/// Default cap on the number of profiles a brute-force scan may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// One strategy per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct StrategyProfile(pub Vec<Element>);

impl StrategyProfile {
    pub fn new(coordinates: Vec<Element>) -> Self {
        StrategyProfile(coordinates)
    }

    pub fn coordinates(&self) -> &[Element] {
        &self.0
    }

    pub fn get(&self, player: usize) -> Element {
        self.0[player]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(x_{-i}; z)`.
    pub fn with(&self, player: usize, z: Element) -> Self {
        let mut next = self.0.clone();
        next[player] = z;
        StrategyProfile(next)
    }
}

impl From<Vec<Element>> for StrategyProfile {
    fn from(v: Vec<Element>) -> Self {
        StrategyProfile(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PayoffModel {
    /// `components[i][j]` is `u_{i,j}`, defined on `X_j`.
    Global {
        components: Vec<Vec<TabulatedFunction>>,
    },
    /// `tables[i][k]` is `u_i` at the profile with lexicographic index `k`.
    Individual { tables: Vec<Vec<Rational>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlayerNashStatus {
    pub player: usize,
    #[serde(with = "crate::rational::as_string")]
    pub payoff: Rational,
    pub is_best_response: bool,
    /// A strategy in `S_i` that strictly improves the payoff.
    pub deviation_witness: Option<Element>,
    /// `x_i ∈ argmax(u_{i,i}; S_i)`; global model only.
    pub n1: Option<bool>,
    /// `u_{i,i}(x_i) >= ũ_i(x_{-i})`; global model only.
    pub n2: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NashCertificate {
    pub profile: StrategyProfile,
    pub players: Vec<PlayerNashStatus>,
    pub is_nash: bool,
}

impl NashCertificate {
    /// Re-checks every claim against the game: best responses by a fresh
    /// scan, deviation witnesses by direct evaluation.
    pub fn verify(&self, game: &Game) -> bool {
        if game.check_feasible(&self.profile).is_err() || self.players.len() != game.players() {
            return false;
        }
        let x = &self.profile;
        let statuses_ok = self.players.iter().enumerate().all(|(i, status)| {
            let current = game.payoff_at(i, x);
            if status.player != i || status.payoff != current {
                return false;
            }
            match (status.is_best_response, status.deviation_witness) {
                (true, None) => game.constraints[i]
                    .iter()
                    .all(|z| game.payoff_at(i, &x.with(i, z)) <= current),
                (false, Some(z)) => {
                    game.constraints[i].contains(z) && game.payoff_at(i, &x.with(i, z)) > current
                }
                _ => false,
            }
        });
        statuses_ok && self.is_nash == self.players.iter().all(|p| p.is_best_response)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NashConditions {
    pub player: usize,
    pub n1: bool,
    pub n2: bool,
}

/// Nash verdict from the N1/N2 characterization alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Characterization {
    pub profile: StrategyProfile,
    pub conditions: Vec<NashConditions>,
    pub is_nash: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EfficiencyCase {
    /// `ũ_i(x_{-i}) >= u_{i,i}(x_i)`.
    A1,
    /// `u_{i,i}(x_i) > ũ_i(x_{-i})`.
    A2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlayerEfficiency {
    pub player: usize,
    pub case: EfficiencyCase,
    #[serde(with = "crate::rational::as_string")]
    pub own_value: Rational,
    /// `ũ_i(x_{-i})`; absent for a single-player game.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub tilde: Option<Rational>,
    pub in_efficient_set: bool,
    /// `w ∈ S_i` with `u_{i,i}(x_i) > u_{i,i}(w) >= ũ_i(x_{-i})`.
    pub a2_witness: Option<Element>,
    pub efficient: bool,
}

fn serialize_opt_rational<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfficientNashCertificate {
    pub nash: NashCertificate,
    /// `x_i ∈ E(u_i[x_{-i}]|S_i; S_i)` per player.
    pub efficient_for: Vec<bool>,
    pub is_efficient_nash: bool,
}

/// Value of the E-map at one profile: a product of per-player chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EMapValue {
    pub coordinates: Vec<ElementSet>,
    pub least: StrategyProfile,
    pub greatest: StrategyProfile,
}

impl EMapValue {
    pub fn contains(&self, x: &StrategyProfile) -> bool {
        x.len() == self.coordinates.len()
            && x.coordinates()
                .iter()
                .zip(&self.coordinates)
                .all(|(&e, set)| set.contains(e))
    }

    pub fn profiles(&self) -> impl Iterator<Item = StrategyProfile> + '_ {
        Profiles::new(&self.coordinates)
    }

    pub fn len(&self) -> usize {
        self.coordinates.iter().map(|c| c.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EMapTrace {
    pub trace: Vec<StrategyProfile>,
    pub fixed_point: Option<StrategyProfile>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EfficientNashMethod {
    /// Filter all Nash points by the direct efficiency definition.
    Brute,
    /// Scan for profiles with `x ∈ E(x)`.
    FixedPoint,
}

/// Lexicographic iterator over a product of element sets.
pub struct Profiles<'a> {
    sets: &'a [ElementSet],
    cursor: Option<Vec<usize>>,
}

impl<'a> Profiles<'a> {
    pub fn new(sets: &'a [ElementSet]) -> Self {
        let cursor = if sets.iter().any(|s| s.is_empty()) {
            None
        } else {
            Some(vec![0; sets.len()])
        };
        Profiles { sets, cursor }
    }
}

impl Iterator for Profiles<'_> {
    type Item = StrategyProfile;

    fn next(&mut self) -> Option<StrategyProfile> {
        let cursor = self.cursor.as_mut()?;
        let profile = StrategyProfile(
            cursor
                .iter()
                .zip(self.sets)
                .map(|(&k, s)| s.as_slice()[k])
                .collect(),
        );
        let mut i = cursor.len();
        loop {
            if i == 0 {
                self.cursor = None;
                break;
            }
            i -= 1;
            cursor[i] += 1;
            if cursor[i] < self.sets[i].len() {
                break;
            }
            cursor[i] = 0;
        }
        Some(profile)
    }
}

fn profile_count(sets: &[ElementSet]) -> u128 {
    sets.iter().map(|s| s.len() as u128).product()
}

fn ensure_budget(required: u128, budget: u64) -> Result<()> {
    if required > budget as u128 {
        Err(Error::BudgetExceeded {
            required,
            budget: budget as u128,
        })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Game {
    spaces: Vec<Arc<FiniteInfSemilattice>>,
    constraints: Vec<ElementSet>,
    model: PayoffModel,
    product: ProductSemilattice,
    /// Validated `u_{i,i}` for the global model.
    own: Vec<QuasiLeontief>,
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.spaces == other.spaces
            && self.constraints == other.constraints
            && self.model == other.model
    }
}

impl Game {
    /// Builds and validates a game. `constraints` defaults to `S_i = X_i`.
    pub fn new(
        spaces: Vec<Arc<FiniteInfSemilattice>>,
        constraints: Option<Vec<ElementSet>>,
        model: PayoffModel,
    ) -> Result<Self> {
        let n = spaces.len();
        let product = ProductSemilattice::new(spaces.clone())
            .map_err(|_| Error::InvalidGame("a game needs at least one player".into()))?;
        let constraints =
            constraints.unwrap_or_else(|| spaces.iter().map(|s| s.full_set()).collect());
        if constraints.len() != n {
            return Err(Error::InvalidGame(format!(
                "{} constraint sets for {n} players",
                constraints.len()
            )));
        }
        for (i, (s, space)) in constraints.iter().zip(&spaces).enumerate() {
            if s.universe() != space.len() {
                return Err(Error::InvalidGame(format!(
                    "constraint set of player {i} is not a subset of its strategy space"
                )));
            }
            if s.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "constraint set of player {i} is empty"
                )));
            }
        }

        let mut own = Vec::new();
        match &model {
            PayoffModel::Global { components } => {
                if components.len() != n || components.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidGame(format!(
                        "global model needs a {n}x{n} component matrix"
                    )));
                }
                for (i, row) in components.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        if c.space() != &spaces[j] {
                            return Err(Error::InvalidGame(format!(
                                "component u[{i}][{j}] is not defined on the space of player {j}"
                            )));
                        }
                        let cert = c.is_quasi_leontief();
                        if !cert.is_ql {
                            return Err(Error::NotQuasiLeontief(format!(
                                "component u[{i}][{j}] fails the meet-min law at {:?}",
                                cert.meet_min_violation
                            )));
                        }
                    }
                    own.push(QuasiLeontief::new(row[i].clone())?);
                }
            }
            PayoffModel::Individual { tables } => {
                if tables.len() != n {
                    return Err(Error::InvalidGame(format!(
                        "{} payoff tables for {n} players",
                        tables.len()
                    )));
                }
                for (i, t) in tables.iter().enumerate() {
                    if t.len() != product.len() {
                        return Err(Error::InvalidGame(format!(
                            "payoff table of player {i} has {} entries, expected {}",
                            t.len(),
                            product.len()
                        )));
                    }
                }
            }
        }

        let game = Game {
            spaces,
            constraints,
            model,
            product,
            own,
        };
        if let PayoffModel::Individual { .. } = game.model {
            game.validate_sections()?;
        }
        Ok(game)
    }

    fn validate_sections(&self) -> Result<()> {
        for i in 0..self.players() {
            let mut sets: Vec<ElementSet> = self.spaces.iter().map(|s| s.full_set()).collect();
            sets[i] = self.spaces[i].set([0]).expect("nonempty space");
            for base in Profiles::new(&sets) {
                let section = self.section_at(i, &base);
                let cert = section.is_quasi_leontief();
                if !cert.is_ql {
                    return Err(Error::NotQuasiLeontief(format!(
                        "section of player {i} at opponents {:?} is not quasi-Leontief",
                        self.labels(&base)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn players(&self) -> usize {
        self.spaces.len()
    }

    pub fn spaces(&self) -> &[Arc<FiniteInfSemilattice>] {
        &self.spaces
    }

    pub fn space(&self, player: usize) -> &Arc<FiniteInfSemilattice> {
        &self.spaces[player]
    }

    pub fn constraints(&self) -> &[ElementSet] {
        &self.constraints
    }

    pub fn model(&self) -> &PayoffModel {
        &self.model
    }

    pub fn is_global(&self) -> bool {
        matches!(self.model, PayoffModel::Global { .. })
    }

    pub fn is_unconstrained(&self) -> bool {
        self.constraints.iter().all(|s| s.is_full())
    }

    pub fn product(&self) -> &ProductSemilattice {
        &self.product
    }

    pub fn labels(&self, x: &StrategyProfile) -> Vec<String> {
        x.coordinates()
            .iter()
            .zip(&self.spaces)
            .map(|(&e, s)| s.label(e).to_string())
            .collect()
    }

    pub fn profile_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<StrategyProfile> {
        if labels.len() != self.players() {
            return Err(Error::InvalidProfile(format!(
                "expected {} coordinates, got {}",
                self.players(),
                labels.len()
            )));
        }
        labels
            .iter()
            .zip(&self.spaces)
            .map(|(l, s)| {
                s.index_of(l.as_ref()).ok_or_else(|| {
                    Error::InvalidProfile(format!("unknown strategy {:?}", l.as_ref()))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(StrategyProfile)
    }

    pub fn check_profile(&self, x: &StrategyProfile) -> Result<()> {
        self.product.encode(x.coordinates()).map(|_| ())
    }

    pub fn check_feasible(&self, x: &StrategyProfile) -> Result<()> {
        self.check_profile(x)?;
        for (player, (&e, s)) in x.coordinates().iter().zip(&self.constraints).enumerate() {
            if !s.contains(e) {
                return Err(Error::OutsideConstraints { player, element: e });
            }
        }
        Ok(())
    }

    /// `u_{i,j}` for the global model.
    pub fn component(&self, i: usize, j: usize) -> Option<&TabulatedFunction> {
        match &self.model {
            PayoffModel::Global { components } => Some(&components[i][j]),
            PayoffModel::Individual { .. } => None,
        }
    }

    pub fn own_component(&self, i: usize) -> Result<&QuasiLeontief> {
        self.own.get(i).ok_or(Error::ModelMismatch(
            "u_{i,i} exists only for global payoffs",
        ))
    }

    pub fn payoff(&self, player: usize, x: &StrategyProfile) -> Result<Rational> {
        self.check_profile(x)?;
        self.check_player(player)?;
        Ok(self.payoff_at(player, x))
    }

    pub(crate) fn payoff_at(&self, player: usize, x: &StrategyProfile) -> Rational {
        match &self.model {
            PayoffModel::Global { components } => components[player]
                .iter()
                .zip(x.coordinates())
                .map(|(c, &e)| c.value(e))
                .min()
                .expect("at least one player"),
            PayoffModel::Individual { tables } => {
                let k = self
                    .product
                    .encode(x.coordinates())
                    .expect("validated profile");
                tables[player][k]
            }
        }
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player < self.players() {
            Ok(())
        } else {
            Err(Error::InvalidProfile(format!("no player {player}")))
        }
    }

    /// `z ↦ u_i(x_{-i}; z)` on `X_i`.
    pub fn section(&self, player: usize, x: &StrategyProfile) -> Result<TabulatedFunction> {
        self.check_profile(x)?;
        self.check_player(player)?;
        Ok(self.section_at(player, x))
    }

    fn section_at(&self, player: usize, x: &StrategyProfile) -> TabulatedFunction {
        TabulatedFunction::from_fn(self.spaces[player].clone(), |z| {
            self.payoff_at(player, &x.with(player, z))
        })
    }

    /// `ũ_i(x_{-i}) = min_{j != i} u_{i,j}(x_j)`.
    pub fn tilde(&self, player: usize, x: &StrategyProfile) -> Result<Rational> {
        if !self.is_global() {
            return Err(Error::ModelMismatch(
                "ũ_i is undefined for individual payoffs",
            ));
        }
        if self.players() < 2 {
            return Err(Error::InvalidGame("ũ_i needs at least two players".into()));
        }
        self.check_profile(x)?;
        self.check_player(player)?;
        Ok(self.tilde_at(player, x).expect("two or more players"))
    }

    /// `None` stands for the empty minimum of a one-player game.
    fn tilde_at(&self, player: usize, x: &StrategyProfile) -> Option<Rational> {
        let PayoffModel::Global { components } = &self.model else {
            return None;
        };
        components[player]
            .iter()
            .zip(x.coordinates())
            .enumerate()
            .filter(|&(j, _)| j != player)
            .map(|(_, (c, &e))| c.value(e))
            .min()
    }

    fn require_global(&self, op: &'static str) -> Result<()> {
        if self.is_global() {
            Ok(())
        } else {
            Err(Error::ModelMismatch(op))
        }
    }

    fn require_comprehensive(&self) -> Result<()> {
        for (i, (s, space)) in self.constraints.iter().zip(&self.spaces).enumerate() {
            if !space.is_comprehensive(s) {
                return Err(Error::HypothesisViolated(format!(
                    "constraint set of player {i} is not comprehensive"
                )));
            }
        }
        Ok(())
    }

    fn require_unconstrained(&self) -> Result<()> {
        if self.is_unconstrained() {
            Ok(())
        } else {
            Err(Error::Constrained)
        }
    }

    pub fn is_nash(&self, x: &StrategyProfile) -> Result<NashCertificate> {
        self.check_feasible(x)?;
        let players: Vec<PlayerNashStatus> = (0..self.players())
            .map(|i| {
                let current = self.payoff_at(i, x);
                let witness = self.constraints[i]
                    .iter()
                    .find(|&z| self.payoff_at(i, &x.with(i, z)) > current);
                let (n1, n2) = match self.own.get(i) {
                    Some(_) => {
                        let c = self.conditions_at(i, x);
                        (Some(c.n1), Some(c.n2))
                    }
                    None => (None, None),
                };
                PlayerNashStatus {
                    player: i,
                    payoff: current,
                    is_best_response: witness.is_none(),
                    deviation_witness: witness,
                    n1,
                    n2,
                }
            })
            .collect();
        let is_nash = players.iter().all(|p| p.is_best_response);
        Ok(NashCertificate {
            profile: x.clone(),
            players,
            is_nash,
        })
    }

    fn conditions_at(&self, i: usize, x: &StrategyProfile) -> NashConditions {
        let u = &self.own[i];
        let own_value = u.value(x.get(i));
        let best = self.constraints[i]
            .iter()
            .map(|z| u.value(z))
            .max()
            .expect("nonempty constraint");
        NashConditions {
            player: i,
            n1: own_value == best,
            n2: self.tilde_at(i, x).is_some_and(|t| own_value >= t),
        }
    }

    /// Every Nash point in `∏ S_i`, in lexicographic order.
    pub fn nash_enumerate(&self, budget: u64) -> Result<Vec<StrategyProfile>> {
        ensure_budget(profile_count(&self.constraints), budget)?;
        let mut out = Vec::new();
        for x in Profiles::new(&self.constraints) {
            if self.is_nash(&x)?.is_nash {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// `∏_i proj_i argmax(u_i; ∏ S_j)`; every member is a Nash point.
    pub fn decoupled_nash(&self, budget: u64) -> Result<Vec<StrategyProfile>> {
        self.require_global("decoupled_nash")?;
        ensure_budget(profile_count(&self.constraints), budget)?;
        let all: Vec<StrategyProfile> = Profiles::new(&self.constraints).collect();
        let projections: Vec<ElementSet> = (0..self.players())
            .map(|i| {
                let best = all
                    .iter()
                    .map(|x| self.payoff_at(i, x))
                    .max()
                    .expect("nonempty");
                let coords = all
                    .iter()
                    .filter(|x| self.payoff_at(i, x) == best)
                    .map(|x| x.get(i));
                self.spaces[i].set(coords).expect("own space")
            })
            .collect();
        Ok(Profiles::new(&projections).collect())
    }

    /// A Nash point that is also maximal in `∏ S_i`: for each player pick
    /// `z^[i] ∈ Max(S) ∩ argmax(u_i; S)` and keep its `i`-th coordinate.
    pub fn maximal_nash(&self, budget: u64) -> Result<StrategyProfile> {
        self.require_global("maximal_nash")?;
        self.require_comprehensive()?;
        ensure_budget(profile_count(&self.constraints), budget)?;
        let maxima: Vec<ElementSet> = self
            .constraints
            .iter()
            .zip(&self.spaces)
            .map(|(s, space)| space.maximal_elements(s))
            .collect::<Result<_>>()?;
        let is_maximal = |x: &StrategyProfile| {
            x.coordinates()
                .iter()
                .zip(&maxima)
                .all(|(&e, m)| m.contains(e))
        };
        let all: Vec<StrategyProfile> = Profiles::new(&self.constraints).collect();
        let mut coordinates = Vec::with_capacity(self.players());
        for i in 0..self.players() {
            let best = all
                .iter()
                .map(|x| self.payoff_at(i, x))
                .max()
                .expect("nonempty");
            let z = all
                .iter()
                .find(|x| is_maximal(x) && self.payoff_at(i, x) == best)
                .ok_or_else(|| {
                    Error::InvariantViolation(format!(
                        "no maximal element of S maximizes the payoff of player {i}"
                    ))
                })?;
            coordinates.push(z.get(i));
        }
        let x = StrategyProfile(coordinates);
        if !is_maximal(&x) || !self.is_nash(&x)?.is_nash {
            return Err(Error::InvariantViolation(
                "maximal construction did not produce a maximal Nash point".into(),
            ));
        }
        Ok(x)
    }

    /// Nash verdict from `N1 ∨ N2` per player.
    pub fn characterize_nash(&self, x: &StrategyProfile) -> Result<Characterization> {
        self.require_global("characterize_nash")?;
        self.require_comprehensive()?;
        self.check_feasible(x)?;
        let conditions: Vec<NashConditions> = (0..self.players())
            .map(|i| self.conditions_at(i, x))
            .collect();
        let is_nash = conditions.iter().all(|c| c.n1 || c.n2);
        Ok(Characterization {
            profile: x.clone(),
            conditions,
            is_nash,
        })
    }

    /// Applies `u_{i,i}°` coordinatewise to a Nash point.
    pub fn normalize_nash(&self, x: &StrategyProfile) -> Result<StrategyProfile> {
        self.require_global("normalize_nash")?;
        self.require_comprehensive()?;
        if !self.is_nash(x)?.is_nash {
            return Err(Error::NotNash);
        }
        let y = StrategyProfile(
            x.coordinates()
                .iter()
                .enumerate()
                .map(|(i, &e)| self.own[i].circ(e))
                .collect(),
        );
        let payoffs_drop =
            (0..self.players()).all(|i| self.payoff_at(i, &y) <= self.payoff_at(i, x));
        if !self.is_nash(&y)?.is_nash || !payoffs_drop {
            return Err(Error::InvariantViolation(
                "normalized profile lost the Nash property".into(),
            ));
        }
        Ok(y)
    }

    /// Efficiency of a Nash point for one player through the (a1)/(a2)
    /// case split, cross-checked against the direct condition
    /// `[z ∈ S_i, u_{i,i}(z) >= min(u_{i,i}(x_i), ũ_i)] ⇒ z >= x_i`.
    pub fn efficiency_report(
        &self,
        x: &StrategyProfile,
        player: usize,
    ) -> Result<PlayerEfficiency> {
        self.require_global("efficiency_report")?;
        self.require_comprehensive()?;
        self.check_player(player)?;
        if !self.is_nash(x)?.is_nash {
            return Err(Error::NotNash);
        }
        let u = &self.own[player];
        let s_i = &self.constraints[player];
        let space = &self.spaces[player];
        let xi = x.get(player);
        let own_value = u.value(xi);
        let tilde = self.tilde_at(player, x);
        let case = match tilde {
            Some(t) if own_value > t => EfficiencyCase::A2,
            _ => EfficiencyCase::A1,
        };
        let in_efficient_set = u.efficient_set(s_i).contains(xi);
        let a2_witness = match (case, tilde) {
            (EfficiencyCase::A2, Some(t)) => s_i.iter().find(|&w| {
                let v = u.value(w);
                own_value > v && v >= t
            }),
            _ => None,
        };
        let efficient = match case {
            EfficiencyCase::A1 => in_efficient_set,
            EfficiencyCase::A2 => in_efficient_set && a2_witness.is_none(),
        };
        let threshold = tilde.map_or(own_value, |t| own_value.min(t));
        let direct = s_i
            .iter()
            .all(|z| u.value(z) < threshold || space.leq(xi, z));
        if direct != efficient {
            return Err(Error::InvariantViolation(format!(
                "case analysis and direct efficiency scan disagree for player {player}"
            )));
        }
        Ok(PlayerEfficiency {
            player,
            case,
            own_value,
            tilde,
            in_efficient_set,
            a2_witness,
            efficient,
        })
    }

    /// `x_i ∈ E(u_i[x_{-i}]|S_i; S_i)`.
    pub fn is_efficient_for(&self, x: &StrategyProfile, player: usize) -> Result<bool> {
        let section = self.section(player, x)?;
        Ok(section
            .efficient_set(&self.constraints[player])
            .contains(x.get(player)))
    }

    pub fn efficient_nash_certificate(
        &self,
        x: &StrategyProfile,
    ) -> Result<EfficientNashCertificate> {
        let nash = self.is_nash(x)?;
        let efficient_for = (0..self.players())
            .map(|i| self.is_efficient_for(x, i))
            .collect::<Result<Vec<_>>>()?;
        let is_efficient_nash = nash.is_nash && efficient_for.iter().all(|&e| e);
        Ok(EfficientNashCertificate {
            nash,
            efficient_for,
            is_efficient_nash,
        })
    }

    pub fn is_efficient_nash(&self, x: &StrategyProfile) -> Result<bool> {
        Ok(self.efficient_nash_certificate(x)?.is_efficient_nash)
    }

    /// Players `i` with `u_{i,i}(x_i) > ũ_i(x_{-i})`: near `x` their payoff
    /// depends only on the other players' strategies.
    pub fn own_strategy_irrelevance(&self, x: &StrategyProfile) -> Result<Vec<usize>> {
        self.require_global("own_strategy_irrelevance")?;
        self.check_profile(x)?;
        Ok((0..self.players())
            .filter(|&i| {
                self.tilde_at(i, x)
                    .is_some_and(|t| self.own[i].value(x.get(i)) > t)
            })
            .collect())
    }

    /// `E(x) = ∏_i argmax(u_i[x_{-i}], E(u_i[x_{-i}], X_i))`.
    pub fn e_map(&self, x: &StrategyProfile) -> Result<EMapValue> {
        self.require_unconstrained()?;
        self.check_profile(x)?;
        let mut coordinates = Vec::with_capacity(self.players());
        let mut least = Vec::with_capacity(self.players());
        let mut greatest = Vec::with_capacity(self.players());
        for i in 0..self.players() {
            let space = &self.spaces[i];
            let section = QuasiLeontief::new(self.section_at(i, x))
                .map_err(|e| Error::InvariantViolation(format!("section of player {i}: {e}")))?;
            let efficient = section.efficient_set(&space.full_set());
            let best = section.argmax_set(&efficient).map_err(|_| {
                Error::InvariantViolation(format!("empty efficient set for player {i}"))
            })?;
            let (lo, hi) = match (space.least(&best), space.greatest(&best)) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => {
                    return Err(Error::InvariantViolation(format!(
                        "E-map coordinate of player {i} is not a chain"
                    )))
                }
            };
            least.push(lo);
            greatest.push(hi);
            coordinates.push(best);
        }
        Ok(EMapValue {
            coordinates,
            least: StrategyProfile(least),
            greatest: StrategyProfile(greatest),
        })
    }

    pub fn efficient_nash_enumerate(
        &self,
        method: EfficientNashMethod,
        budget: u64,
    ) -> Result<Vec<StrategyProfile>> {
        match method {
            EfficientNashMethod::Brute => {
                let mut out = Vec::new();
                for x in self.nash_enumerate(budget)? {
                    if self.is_efficient_nash(&x)? {
                        out.push(x);
                    }
                }
                Ok(out)
            }
            EfficientNashMethod::FixedPoint => {
                self.require_unconstrained()?;
                ensure_budget(profile_count(&self.constraints), budget)?;
                let mut out = Vec::new();
                for x in Profiles::new(&self.constraints) {
                    if self.e_map(&x)?.contains(&x) {
                        out.push(x);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Follows `x ↦ m(E(x))` from `start` until `x ∈ E(x)` or `max_steps`
    /// applications of the E-map.
    pub fn e_map_iterate(&self, start: &StrategyProfile, max_steps: usize) -> Result<EMapTrace> {
        self.require_unconstrained()?;
        self.check_profile(start)?;
        let mut trace = vec![start.clone()];
        let mut x = start.clone();
        for step in 0..=max_steps {
            let e = self.e_map(&x)?;
            if e.contains(&x) {
                if !self.is_efficient_nash(&x)? {
                    return Err(Error::InvariantViolation(
                        "E-map fixed point is not an efficient Nash point".into(),
                    ));
                }
                return Ok(EMapTrace {
                    trace,
                    fixed_point: Some(x),
                });
            }
            if step == max_steps {
                break;
            }
            x = e.least;
            trace.push(x.clone());
        }
        Ok(EMapTrace {
            trace,
            fixed_point: None,
        })
    }

    /// All profiles of `∏ S_i` in lexicographic order.
    pub fn profiles(&self) -> Profiles<'_> {
        Profiles::new(&self.constraints)
    }

    pub fn profile_count(&self) -> u128 {
        profile_count(&self.constraints)
    }
}
