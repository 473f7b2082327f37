//! Quasi-Leontief functions on a finite inf-semilattice.
//!
//! A function `u` is quasi-Leontief when `u(x ∧ y) = min(u(x), u(y))` for all
//! pairs; on a finite space this is the same as every nonempty upper level
//! set `{u >= t}` being a principal up-set `↑m_t`. The map `t ↦ m_t` is the
//! residual `sharp`, and `circ(x) = sharp(u(x))` is the least element with the
//! same value as `x`.

use std::ops::Deref;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::semilattice::{Element, ElementSet, FiniteInfSemilattice, ProductSemilattice};

/// A total rational-valued table on one space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabulatedFunction {
    space: Arc<FiniteInfSemilattice>,
    values: Vec<Rational>,
}

/// Upper level set `{u >= level}` whose meet falls outside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelWitness {
    #[serde(with = "crate::rational::as_string")]
    pub level: Rational,
    pub meet: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QlCertificate {
    pub is_ql: bool,
    /// First pair with `u(a ∧ b) != min(u(a), u(b))`.
    pub meet_min_violation: Option<(Element, Element)>,
    /// First attained level whose upper level set is not principal.
    pub level_witness: Option<LevelWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InfQuasiconcavity {
    pub holds: bool,
    pub violation: Option<(Element, Element)>,
}

impl TabulatedFunction {
    pub fn new(space: Arc<FiniteInfSemilattice>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::FunctionLength {
                expected: space.len(),
                found: values.len(),
            });
        }
        Ok(TabulatedFunction { space, values })
    }

    pub fn from_fn(space: Arc<FiniteInfSemilattice>, f: impl Fn(Element) -> Rational) -> Self {
        let values = space.elements().map(f).collect();
        TabulatedFunction { space, values }
    }

    pub fn constant(space: Arc<FiniteInfSemilattice>, value: Rational) -> Self {
        Self::from_fn(space, |_| value)
    }

    pub fn space(&self) -> &Arc<FiniteInfSemilattice> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    #[inline]
    pub fn value(&self, e: Element) -> Rational {
        self.values[e]
    }

    /// Distinct attained values in ascending order.
    pub fn levels(&self) -> Vec<Rational> {
        let mut levels = self.values.clone();
        levels.sort();
        levels.dedup();
        levels
    }

    pub fn upper_level_set(&self, level: Rational) -> ElementSet {
        self.level_set(|v| v >= level)
    }

    pub fn strict_upper_level_set(&self, level: Rational) -> ElementSet {
        self.level_set(|v| v > level)
    }

    fn level_set(&self, keep: impl Fn(Rational) -> bool) -> ElementSet {
        let members = self.space.elements().filter(|&e| keep(self.values[e]));
        self.space.set(members).expect("elements of own space")
    }

    pub fn is_quasi_leontief(&self) -> QlCertificate {
        let s = &self.space;
        let mut meet_min_violation = None;
        'pairs: for a in s.elements() {
            for b in s.elements() {
                if self.value(s.meet(a, b)) != self.value(a).min(self.value(b)) {
                    meet_min_violation = Some((a, b));
                    break 'pairs;
                }
            }
        }
        let mut level_witness = None;
        for level in self.levels() {
            let set = self.upper_level_set(level);
            let m = s.meet_all(set.iter()).expect("attained level is nonempty");
            let principal = set.contains(m) && s.up_set(m) == set;
            if !principal {
                level_witness = Some(LevelWitness { level, meet: m });
                break;
            }
        }
        QlCertificate {
            is_ql: meet_min_violation.is_none() && level_witness.is_none(),
            meet_min_violation,
            level_witness,
        }
    }

    pub fn is_isotone(&self) -> bool {
        let s = &self.space;
        s.elements().all(|a| {
            s.elements()
                .all(|b| !s.leq(a, b) || self.value(a) <= self.value(b))
        })
    }

    /// Checks `inf over [[x1,x2]] of u >= min(u(x1), u(x2))` for every pair.
    pub fn check_inf_quasiconcavity(&self) -> InfQuasiconcavity {
        let s = &self.space;
        for x1 in s.elements() {
            for x2 in s.elements() {
                let floor = self.value(x1).min(self.value(x2));
                let bracket = s.bracket(x1, x2).expect("elements of own space");
                if bracket.iter().any(|z| self.value(z) < floor) {
                    return InfQuasiconcavity {
                        holds: false,
                        violation: Some((x1, x2)),
                    };
                }
            }
        }
        InfQuasiconcavity {
            holds: true,
            violation: None,
        }
    }

    /// Whether `{u > t}` is inf-convex for every real `t`.
    pub fn strict_level_sets_inf_convex(&self) -> bool {
        // {u > t} only changes at attained values; below the minimum it is the
        // whole space, which is always inf-convex.
        self.levels().into_iter().all(|t| {
            self.space
                .is_inf_convex(&self.strict_upper_level_set(t))
                .inf_convex
        })
    }

    /// Whether `{u >= t}` is inf-convex for every real `t`.
    pub fn upper_level_sets_inf_convex(&self) -> bool {
        self.levels().into_iter().all(|t| {
            self.space
                .is_inf_convex(&self.upper_level_set(t))
                .inf_convex
        })
    }

    pub fn argmax_set(&self, set: &ElementSet) -> Result<ElementSet> {
        let best = set
            .iter()
            .map(|e| self.value(e))
            .max()
            .ok_or(Error::EmptySet("argmax_set"))?;
        Ok(self
            .space
            .set(set.iter().filter(|&e| self.value(e) == best))
            .expect("subset of own space"))
    }

    /// `{x ∈ S : y ∈ S and u(y) >= u(x) imply y >= x}`.
    pub fn efficient_set(&self, set: &ElementSet) -> ElementSet {
        let s = &self.space;
        let members = set.iter().filter(|&x| {
            set.iter()
                .all(|y| self.value(y) < self.value(x) || s.leq(x, y))
        });
        s.set(members).expect("subset of own space")
    }

    pub fn into_quasi_leontief(self) -> Result<QuasiLeontief> {
        QuasiLeontief::new(self)
    }
}

/// A function validated as quasi-Leontief, with its residual tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLeontief {
    function: TabulatedFunction,
    /// `(level, sharp(level))` for every attained level, ascending.
    sharp_table: Vec<(Rational, Element)>,
    circ_table: Vec<Element>,
}

impl QuasiLeontief {
    pub fn new(function: TabulatedFunction) -> Result<Self> {
        let cert = function.is_quasi_leontief();
        if !cert.is_ql {
            return Err(Error::NotQuasiLeontief(describe_failure(&function, &cert)));
        }
        let s = function.space().clone();
        let sharp_table: Vec<(Rational, Element)> = function
            .levels()
            .into_iter()
            .map(|t| {
                let set = function.upper_level_set(t);
                (t, s.meet_all(set.iter()).expect("attained level"))
            })
            .collect();
        let circ_table = s
            .elements()
            .map(|x| {
                let v = function.value(x);
                let i = sharp_table
                    .binary_search_by(|(t, _)| t.cmp(&v))
                    .expect("value is an attained level");
                sharp_table[i].1
            })
            .collect();
        Ok(QuasiLeontief {
            function,
            sharp_table,
            circ_table,
        })
    }

    pub fn function(&self) -> &TabulatedFunction {
        &self.function
    }

    /// Least element `m` with `u(m) >= t`; `None` when no element reaches `t`.
    pub fn sharp(&self, t: Rational) -> Option<Element> {
        let i = self.sharp_table.partition_point(|(level, _)| *level < t);
        self.sharp_table.get(i).map(|&(_, m)| m)
    }

    pub fn circ(&self, x: Element) -> Element {
        self.circ_table[x]
    }

    pub fn sharp_table(&self) -> &[(Rational, Element)] {
        &self.sharp_table
    }

    pub fn fixed_points(&self) -> ElementSet {
        let s = self.function.space();
        s.set(s.elements().filter(|&x| self.circ(x) == x))
            .expect("own space")
    }

    pub fn image(&self) -> ElementSet {
        let s = self.function.space();
        s.set(s.elements().map(|x| self.circ(x)))
            .expect("own space")
    }
}

impl Deref for QuasiLeontief {
    type Target = TabulatedFunction;

    fn deref(&self) -> &TabulatedFunction {
        &self.function
    }
}

fn describe_failure(f: &TabulatedFunction, cert: &QlCertificate) -> String {
    let s = f.space();
    if let Some(w) = &cert.level_witness {
        format!(
            "level set {{u >= {}}} has meet {} with value {}",
            w.level,
            s.label(w.meet),
            f.value(w.meet)
        )
    } else if let Some((a, b)) = cert.meet_min_violation {
        format!(
            "u({} ∧ {}) != min(u({}), u({}))",
            s.label(a),
            s.label(b),
            s.label(a),
            s.label(b)
        )
    } else {
        "unknown failure".to_string()
    }
}

/// `x ↦ min_j u_j(x_j)` on a product space.
#[derive(Clone, Debug)]
pub struct MinAggregate {
    product: ProductSemilattice,
    components: Vec<TabulatedFunction>,
}

impl MinAggregate {
    pub fn new(product: ProductSemilattice, components: Vec<TabulatedFunction>) -> Result<Self> {
        if components.len() != product.factors().len() {
            return Err(Error::FactorMismatch {
                index: components.len().min(product.factors().len()),
            });
        }
        for (index, (c, factor)) in components.iter().zip(product.factors()).enumerate() {
            if c.space() != factor {
                return Err(Error::FactorMismatch { index });
            }
        }
        Ok(MinAggregate {
            product,
            components,
        })
    }

    pub fn product(&self) -> &ProductSemilattice {
        &self.product
    }

    pub fn eval(&self, tuple: &[Element]) -> Result<Rational> {
        self.product.encode(tuple)?;
        Ok(self.eval_unchecked(tuple))
    }

    fn eval_unchecked(&self, tuple: &[Element]) -> Rational {
        self.components
            .iter()
            .zip(tuple)
            .map(|(c, &e)| c.value(e))
            .min()
            .expect("at least one factor")
    }

    /// The aggregate as a table on the flattened product.
    pub fn tabulate(&self) -> TabulatedFunction {
        let flat = Arc::new(self.product.flatten());
        TabulatedFunction::from_fn(flat, |i| self.eval_unchecked(&self.product.decode(i)))
    }
}

/// Builds the min-aggregate of one component per factor.
pub fn min_aggregate(components: Vec<TabulatedFunction>) -> Result<MinAggregate> {
    let product = ProductSemilattice::new(components.iter().map(|c| c.space().clone()).collect())?;
    MinAggregate::new(product, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v3() -> Arc<FiniteInfSemilattice> {
        Arc::new(
            FiniteInfSemilattice::from_table(
                vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]],
                None,
            )
            .unwrap(),
        )
    }

    /// Element k is k/4 on [0, 2].
    fn grid() -> Arc<FiniteInfSemilattice> {
        Arc::new(FiniteInfSemilattice::chain((0..9).map(|k| format!("{k}/4")).collect()).unwrap())
    }

    fn point(k: Element) -> Rational {
        frac(k as i64, 4)
    }

    /// min(2x, 2) on the grid.
    fn ramp() -> TabulatedFunction {
        TabulatedFunction::from_fn(grid(), |k| (int(2) * point(k)).min(int(2)))
    }

    fn table(space: Arc<FiniteInfSemilattice>, vals: &[i64]) -> TabulatedFunction {
        TabulatedFunction::new(space, vals.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn ql_examples() {
        let c = table(v3(), &[0, 0, 1]).is_quasi_leontief();
        assert!(c.is_ql && c.level_witness.is_none() && c.meet_min_violation.is_none());

        let c = table(v3(), &[0, 1, 2]).is_quasi_leontief();
        assert!(!c.is_ql);
        assert_eq!(
            c.level_witness,
            Some(LevelWitness {
                level: int(1),
                meet: 0
            })
        );
        assert_eq!(c.meet_min_violation, Some((1, 2)));

        assert!(ramp().is_quasi_leontief().is_ql);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(matches!(
            TabulatedFunction::new(v3(), vec![int(0)]),
            Err(Error::FunctionLength {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn sharp_examples() {
        let u = ramp().into_quasi_leontief().unwrap();
        assert_eq!(u.sharp(int(1)), Some(2));
        assert_eq!(u.sharp(int(3)), None);
        assert_eq!(u.sharp(int(0)), Some(0));
        // unattained level between grid values
        assert_eq!(u.sharp(frac(3, 4)), Some(2));

        let err = table(v3(), &[0, 1, 2]).into_quasi_leontief().unwrap_err();
        assert!(matches!(err, Error::NotQuasiLeontief(_)));
    }

    #[test]
    fn circ_examples() {
        let u = ramp().into_quasi_leontief().unwrap();
        assert_eq!(u.circ(8), 4);
        assert_eq!(u.circ(3), 3);
        let w = table(v3(), &[0, 0, 1]).into_quasi_leontief().unwrap();
        assert_eq!(w.circ(1), 0);
    }

    #[test]
    fn efficient_set_examples() {
        let u = ramp().into_quasi_leontief().unwrap();
        let all = u.space().full_set();
        assert_eq!(u.efficient_set(&all).as_slice(), &[0, 1, 2, 3, 4]);
        assert_eq!(u.efficient_set(&all), u.fixed_points());
        assert_eq!(u.efficient_set(&all), u.image());

        let c = TabulatedFunction::constant(grid(), int(1));
        assert_eq!(c.efficient_set(&c.space().full_set()).as_slice(), &[0]);

        let w = table(v3(), &[0, 0, 1]);
        assert_eq!(w.efficient_set(&w.space().full_set()).as_slice(), &[0, 2]);

        assert!(w.efficient_set(&ElementSet::empty(3)).is_empty());
    }

    #[test]
    fn argmax_examples() {
        let u = ramp();
        let all = u.space().full_set();
        assert_eq!(u.argmax_set(&all).unwrap().as_slice(), &[4, 5, 6, 7, 8]);
        let c = TabulatedFunction::constant(grid(), int(1));
        assert_eq!(c.argmax_set(&all).unwrap(), all);
        let single = u.space().set([3]).unwrap();
        assert_eq!(u.argmax_set(&single).unwrap(), single);
        assert!(u.argmax_set(&ElementSet::empty(9)).is_err());
    }

    #[test]
    fn min_aggregate_examples() {
        let g = grid();
        let half = TabulatedFunction::from_fn(g.clone(), |k| point(k) / int(2));
        let u1 = min_aggregate(vec![ramp(), half.clone()]).unwrap();
        assert_eq!(u1.eval(&[4, 4]).unwrap(), frac(1, 2));
        assert_eq!(u1.eval(&[0, 0]).unwrap(), int(0));
        let u2 = min_aggregate(vec![half, ramp()]).unwrap();
        assert_eq!(u2.eval(&[4, 4]).unwrap(), frac(1, 2));
        assert!(u1.tabulate().is_quasi_leontief().is_ql);
        assert!(u1.eval(&[9, 0]).is_err());

        let p = ProductSemilattice::new(vec![g.clone(), g]).unwrap();
        assert!(matches!(
            MinAggregate::new(p, vec![ramp(), table(v3(), &[0, 0, 0])]),
            Err(Error::FactorMismatch { index: 1 })
        ));
    }

    #[test]
    fn inf_quasiconcavity_examples() {
        assert!(ramp().check_inf_quasiconcavity().holds);
        let r = table(v3(), &[0, 1, 2]).check_inf_quasiconcavity();
        assert_eq!(r.violation, Some((1, 2)));
        assert!(
            TabulatedFunction::constant(v3(), int(3))
                .check_inf_quasiconcavity()
                .holds
        );
    }
}
