//! Seeded generators for the property corpora: small semilattices,
//! quasi-Leontief components, comprehensive constraint sets and games.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::game::{Game, PayoffModel, Profiles};
use crate::leontief::TabulatedFunction;
use crate::rational::Rational;
use crate::semilattice::{Element, ElementSet, FiniteInfSemilattice};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A chain of `len` elements labelled `c0 < c1 < ...`.
pub fn chain(len: usize) -> FiniteInfSemilattice {
    FiniteInfSemilattice::chain((0..len).map(|k| format!("c{k}")).collect()).expect("len >= 1")
}

/// A random intersection-closed family of subsets of a 3-element ground set,
/// ordered by inclusion. Every finite inf-semilattice arises this way up to
/// isomorphism for a large enough ground set; three bits give non-chains of
/// all the small shapes needed here.
pub fn intersection_family<R: Rng>(rng: &mut R, max_size: usize) -> FiniteInfSemilattice {
    let max_size = max_size.max(1);
    let mut family: Vec<u8> = vec![rng.gen_range(0..8)];
    for _ in 0..12 {
        let mut candidate = family.clone();
        candidate.push(rng.gen_range(0..8));
        let closed = close_under_intersection(candidate);
        if closed.len() <= max_size {
            family = closed;
        }
    }
    family.sort_by_key(|m| (m.count_ones(), *m));
    let index = |m: u8| family.iter().position(|&f| f == m).expect("closed family");
    let table = family
        .iter()
        .map(|&a| family.iter().map(|&b| index(a & b)).collect())
        .collect();
    let labels = family.iter().map(|&m| mask_label(m)).collect();
    FiniteInfSemilattice::from_table(table, Some(labels)).expect("intersection is a meet")
}

fn close_under_intersection(mut family: Vec<u8>) -> Vec<u8> {
    family.sort_unstable();
    family.dedup();
    loop {
        let mut added = false;
        for i in 0..family.len() {
            for j in 0..family.len() {
                let m = family[i] & family[j];
                if !family.contains(&m) {
                    family.push(m);
                    added = true;
                }
            }
        }
        if !added {
            return family;
        }
    }
}

fn mask_label(mask: u8) -> String {
    let bits: Vec<String> = (0..8)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| b.to_string())
        .collect();
    format!("{{{}}}", bits.join(","))
}

/// A chain or an intersection family with between 1 and `max_size` elements.
pub fn semilattice<R: Rng>(rng: &mut R, max_size: usize) -> FiniteInfSemilattice {
    if rng.gen_bool(0.5) {
        chain(rng.gen_range(1..=max_size.max(1)))
    } else {
        intersection_family(rng, max_size)
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(0..=3), rng.gen_range(1..=2))
}

/// A random quasi-Leontief function: pick a chain `⊥ = a_0 < a_1 < ...` and
/// strictly increasing levels, and let `u(x)` be the level of the largest
/// `a_k` below `x`. Upper level sets are then the principal up-sets `↑a_k`.
pub fn ql_function<R: Rng>(rng: &mut R, space: &Arc<FiniteInfSemilattice>) -> TabulatedFunction {
    let mut anchors = vec![space.bottom()];
    loop {
        let last = *anchors.last().expect("nonempty");
        let above: Vec<Element> = space
            .elements()
            .filter(|&e| e != last && space.leq(last, e))
            .collect();
        if above.is_empty() || rng.gen_bool(0.35) {
            break;
        }
        anchors.push(*above.choose(rng).expect("nonempty"));
    }
    let mut levels = vec![small_rational(rng)];
    for _ in 1..anchors.len() {
        let step = Rational::new(rng.gen_range(1..=3), rng.gen_range(1..=2));
        levels.push(levels.last().copied().expect("nonempty") + step);
    }
    TabulatedFunction::from_fn(space.clone(), |x| {
        let k = anchors
            .iter()
            .rposition(|&a| space.leq(a, x))
            .expect("bottom is below everything");
        levels[k]
    })
}

/// Any function with small rational values; usually not quasi-Leontief.
pub fn arbitrary_function<R: Rng>(
    rng: &mut R,
    space: &Arc<FiniteInfSemilattice>,
) -> TabulatedFunction {
    let values = space.elements().map(|_| small_rational(rng)).collect();
    TabulatedFunction::new(space.clone(), values).expect("one value per element")
}

/// The down-closure of a few random elements: nonempty and comprehensive.
pub fn comprehensive_subset<R: Rng>(rng: &mut R, space: &FiniteInfSemilattice) -> ElementSet {
    let picks = rng.gen_range(1..=2);
    let seeds: Vec<Element> = (0..picks).map(|_| rng.gen_range(0..space.len())).collect();
    space.down_closure(&space.set(seeds).expect("in range"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlobalGameParams {
    pub max_players: usize,
    pub max_space_size: usize,
    pub comprehensive_constraints: bool,
}

impl Default for GlobalGameParams {
    fn default() -> Self {
        GlobalGameParams {
            max_players: 3,
            max_space_size: 6,
            comprehensive_constraints: false,
        }
    }
}

pub fn global_game<R: Rng>(rng: &mut R, params: GlobalGameParams) -> Game {
    let n = rng.gen_range(1..=params.max_players.max(1));
    let spaces: Vec<Arc<FiniteInfSemilattice>> = (0..n)
        .map(|_| Arc::new(semilattice(rng, params.max_space_size)))
        .collect();
    let components = (0..n)
        .map(|_| spaces.iter().map(|s| ql_function(rng, s)).collect())
        .collect();
    let constraints = params.comprehensive_constraints.then(|| {
        spaces
            .iter()
            .map(|s| comprehensive_subset(rng, s))
            .collect()
    });
    Game::new(spaces, constraints, PayoffModel::Global { components })
        .expect("generated components are quasi-Leontief")
}

/// A game whose every section `u_i[x_{-i}]` is an independent random
/// quasi-Leontief function on `X_i`.
pub fn individual_game<R: Rng>(rng: &mut R, players: usize, max_space_size: usize) -> Game {
    let spaces: Vec<Arc<FiniteInfSemilattice>> = (0..players)
        .map(|_| Arc::new(semilattice(rng, max_space_size)))
        .collect();
    let full: Vec<ElementSet> = spaces.iter().map(|s| s.full_set()).collect();
    let total: usize = spaces.iter().map(|s| s.len()).product();
    let mut tables = vec![vec![Rational::from_integer(0); total]; players];
    for (i, table) in tables.iter_mut().enumerate() {
        let mut bases = full.clone();
        bases[i] = spaces[i].set([0]).expect("nonempty");
        for base in Profiles::new(&bases) {
            let section = ql_function(rng, &spaces[i]);
            for z in spaces[i].elements() {
                let x = base.with(i, z);
                table[index_of(&spaces, x.coordinates())] = section.value(z);
            }
        }
    }
    Game::new(spaces, None, PayoffModel::Individual { tables })
        .expect("generated sections are quasi-Leontief")
}

fn index_of(spaces: &[Arc<FiniteInfSemilattice>], tuple: &[Element]) -> usize {
    tuple
        .iter()
        .zip(spaces)
        .fold(0, |acc, (&e, s)| acc * s.len() + e)
}
