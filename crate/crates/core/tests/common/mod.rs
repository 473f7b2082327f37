//! Reference implementations used by the integration suites. Each one works
//! from the raw tables (meet table, payoff values, constraint lists) with the
//! plainest possible scan, so it shares no logic with the solvers.

#![allow(dead_code)]

use std::sync::Arc;

use qlnash_core::{Element, FiniteInfSemilattice, Game, PayoffModel, Rational, TabulatedFunction};

pub struct Space {
    pub n: usize,
    pub meet: Vec<Vec<Element>>,
}

impl Space {
    pub fn of(s: &FiniteInfSemilattice) -> Self {
        Space {
            n: s.len(),
            meet: s.table(),
        }
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.meet[a][b] == a
    }

    pub fn meet_of(&self, set: &[Element]) -> Option<Element> {
        let (&first, rest) = set.split_first()?;
        Some(rest.iter().fold(first, |m, &e| self.meet[m][e]))
    }

    pub fn up(&self, a: Element) -> Vec<Element> {
        (0..self.n).filter(|&e| self.leq(a, e)).collect()
    }

    pub fn is_chain(&self, set: &[Element]) -> bool {
        set.iter()
            .all(|&a| set.iter().all(|&b| self.leq(a, b) || self.leq(b, a)))
    }

    pub fn maximal(&self, set: &[Element]) -> Vec<Element> {
        set.iter()
            .copied()
            .filter(|&a| !set.iter().any(|&b| b != a && self.leq(a, b)))
            .collect()
    }

    /// Closed under meets and order-convex, checked from the definitions.
    pub fn is_inf_convex(&self, set: &[Element]) -> bool {
        let closed = set
            .iter()
            .all(|&a| set.iter().all(|&b| set.contains(&self.meet[a][b])));
        let convex = set.iter().all(|&a| {
            set.iter().all(|&c| {
                (0..self.n).all(|b| !(self.leq(a, b) && self.leq(b, c)) || set.contains(&b))
            })
        });
        closed && convex
    }
}

/// Every upper level set at an attained value is `↑m` for some `m`.
pub fn is_ql(space: &Space, values: &[Rational]) -> bool {
    values.iter().all(|&t| {
        let set: Vec<Element> = (0..space.n).filter(|&e| values[e] >= t).collect();
        let m = space.meet_of(&set).expect("attained level");
        space.up(m) == set
    })
}

/// `{x ∈ S : y ∈ S, u(y) >= u(x) ⇒ y >= x}`.
pub fn efficient(space: &Space, values: &[Rational], set: &[Element]) -> Vec<Element> {
    set.iter()
        .copied()
        .filter(|&x| {
            set.iter()
                .all(|&y| values[y] < values[x] || space.leq(x, y))
        })
        .collect()
}

pub fn argmax(values: &[Rational], set: &[Element]) -> Vec<Element> {
    let best = set.iter().map(|&e| values[e]).max().expect("nonempty");
    set.iter().copied().filter(|&e| values[e] == best).collect()
}

pub struct Oracle {
    pub spaces: Vec<Space>,
    pub constraints: Vec<Vec<Element>>,
    pub global: Option<Vec<Vec<Vec<Rational>>>>,
    pub tables: Option<Vec<Vec<Rational>>>,
}

impl Oracle {
    pub fn of(game: &Game) -> Self {
        let (global, tables) = match game.model() {
            PayoffModel::Global { components } => (
                Some(
                    components
                        .iter()
                        .map(|row| row.iter().map(|f| f.values().to_vec()).collect())
                        .collect(),
                ),
                None,
            ),
            PayoffModel::Individual { tables } => (None, Some(tables.clone())),
        };
        Oracle {
            spaces: game.spaces().iter().map(|s| Space::of(s)).collect(),
            constraints: game
                .constraints()
                .iter()
                .map(|c| c.iter().collect())
                .collect(),
            global,
            tables,
        }
    }

    pub fn players(&self) -> usize {
        self.spaces.len()
    }

    fn index(&self, x: &[Element]) -> usize {
        x.iter()
            .zip(&self.spaces)
            .fold(0, |acc, (&e, s)| acc * s.n + e)
    }

    pub fn payoff(&self, i: usize, x: &[Element]) -> Rational {
        match (&self.global, &self.tables) {
            (Some(c), _) => x
                .iter()
                .enumerate()
                .map(|(j, &e)| c[i][j][e])
                .min()
                .expect("players"),
            (_, Some(t)) => t[i][self.index(x)],
            _ => unreachable!(),
        }
    }

    pub fn own(&self, i: usize, e: Element) -> Rational {
        self.global.as_ref().expect("global model")[i][i][e]
    }

    /// `min_{j != i} u_{i,j}(x_j)`, `None` for a single player.
    pub fn tilde(&self, i: usize, x: &[Element]) -> Option<Rational> {
        let c = self.global.as_ref().expect("global model");
        x.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(j, &e)| c[i][j][e])
            .min()
    }

    pub fn profiles(&self) -> Vec<Vec<Element>> {
        let mut out = vec![Vec::new()];
        for set in &self.constraints {
            out = out
                .into_iter()
                .flat_map(|p| {
                    set.iter().map(move |&e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn section(&self, i: usize, x: &[Element]) -> Vec<Rational> {
        (0..self.spaces[i].n)
            .map(|z| {
                let mut y = x.to_vec();
                y[i] = z;
                self.payoff(i, &y)
            })
            .collect()
    }

    pub fn is_nash(&self, x: &[Element]) -> bool {
        (0..self.players()).all(|i| {
            let current = self.payoff(i, x);
            let section = self.section(i, x);
            self.constraints[i].iter().all(|&z| section[z] <= current)
        })
    }

    pub fn nash(&self) -> Vec<Vec<Element>> {
        self.profiles()
            .into_iter()
            .filter(|x| self.is_nash(x))
            .collect()
    }

    pub fn is_efficient_nash(&self, x: &[Element]) -> bool {
        self.is_nash(x)
            && (0..self.players()).all(|i| {
                let section = self.section(i, x);
                efficient(&self.spaces[i], &section, &self.constraints[i]).contains(&x[i])
            })
    }

    pub fn efficient_nash(&self) -> Vec<Vec<Element>> {
        self.profiles()
            .into_iter()
            .filter(|x| self.is_efficient_nash(x))
            .collect()
    }

    /// Direct efficiency condition for player `i` at a Nash point of a
    /// global game: `z ∈ S_i, u_{i,i}(z) >= min(u_{i,i}(x_i), ũ_i) ⇒ z >= x_i`.
    pub fn direct_efficient(&self, i: usize, x: &[Element]) -> bool {
        let own = self.own(i, x[i]);
        let threshold = self.tilde(i, x).map_or(own, |t| own.min(t));
        self.constraints[i]
            .iter()
            .all(|&z| self.own(i, z) < threshold || self.spaces[i].leq(x[i], z))
    }

    pub fn decoupled(&self) -> Vec<Vec<Element>> {
        let all = self.profiles();
        let mut out = vec![Vec::new()];
        for i in 0..self.players() {
            let best = all
                .iter()
                .map(|x| self.payoff(i, x))
                .max()
                .expect("nonempty");
            let mut coords: Vec<Element> = all
                .iter()
                .filter(|x| self.payoff(i, x) == best)
                .map(|x| x[i])
                .collect();
            coords.sort_unstable();
            coords.dedup();
            out = out
                .into_iter()
                .flat_map(|p| {
                    coords.iter().map(move |&e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn is_maximal(&self, x: &[Element]) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, &e)| self.spaces[i].maximal(&self.constraints[i]).contains(&e))
    }
}

/// A random intersection-closed family over a `bits`-element ground set with
/// at most `max_size` members, as a semilattice.
pub fn intersection_space(seed: u64, bits: u32, max_size: usize) -> FiniteInfSemilattice {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let universe = 1u32 << bits;
    let mut family: Vec<u32> = vec![(next() % universe as u64) as u32];
    for _ in 0..40 {
        let mut candidate = family.clone();
        candidate.push((next() % universe as u64) as u32);
        loop {
            let mut added = false;
            for a in candidate.clone() {
                for b in candidate.clone() {
                    if !candidate.contains(&(a & b)) {
                        candidate.push(a & b);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        candidate.sort_unstable();
        candidate.dedup();
        if candidate.len() <= max_size {
            family = candidate;
        }
    }
    family.sort_by_key(|m| (m.count_ones(), *m));
    let index = |m: u32| family.iter().position(|&f| f == m).unwrap();
    let table = family
        .iter()
        .map(|&a| family.iter().map(|&b| index(a & b)).collect())
        .collect();
    let labels = family.iter().map(|m| format!("{m:b}")).collect();
    FiniteInfSemilattice::from_table(table, Some(labels)).unwrap()
}

/// All functions with values in `0..levels` on `space`, as tables.
pub fn all_functions(space: &Arc<FiniteInfSemilattice>, levels: i64) -> Vec<TabulatedFunction> {
    let n = space.len();
    let total = (levels as usize).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let values = (0..n)
                .map(|_| {
                    let v = (code % levels as usize) as i64;
                    code /= levels as usize;
                    Rational::from_integer(v)
                })
                .collect();
            TabulatedFunction::new(space.clone(), values).unwrap()
        })
        .collect()
}
