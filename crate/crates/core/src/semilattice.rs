//! Finite inf-semilattices given by an explicit meet table.
//!
//! Elements are plain indices `0..len`; labels are carried for display only.
//! The order is the one induced by the meet: `a <= b` iff `a ∧ b = a`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Element = usize;

/// One failed instance of a semilattice axiom in a candidate meet table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    Shape {
        row: usize,
        len: usize,
        expected: usize,
    },
    OutOfRange {
        a: Element,
        b: Element,
        value: Element,
    },
    Idempotence {
        a: Element,
        meet: Element,
    },
    Commutativity {
        a: Element,
        b: Element,
        ab: Element,
        ba: Element,
    },
    Associativity {
        a: Element,
        b: Element,
        c: Element,
    },
    Antisymmetry {
        a: Element,
        b: Element,
    },
    Transitivity {
        a: Element,
        b: Element,
        c: Element,
    },
    NoBottom,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Shape { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            AxiomViolation::OutOfRange { a, b, value } => {
                write!(f, "meet({a},{b}) = {value} is not an element")
            }
            AxiomViolation::Idempotence { a, meet } => write!(f, "meet({a},{a}) = {meet} != {a}"),
            AxiomViolation::Commutativity { a, b, ab, ba } => {
                write!(f, "commutativity fails at ({a},{b}): {ab} vs {ba}")
            }
            AxiomViolation::Associativity { a, b, c } => {
                write!(f, "associativity fails at ({a},{b},{c})")
            }
            AxiomViolation::Antisymmetry { a, b } => {
                write!(f, "antisymmetry fails: {a} <= {b} <= {a}")
            }
            AxiomViolation::Transitivity { a, b, c } => {
                write!(
                    f,
                    "transitivity fails: {a} <= {b} <= {c} but not {a} <= {c}"
                )
            }
            AxiomViolation::NoBottom => write!(f, "no bottom element"),
        }
    }
}

/// Result of an exhaustive scan of a meet table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub size: usize,
    pub violations: Vec<AxiomViolation>,
    pub bottom: Option<Element>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scans a raw meet table for every violated axiom instance.
pub fn check_axioms(table: &[Vec<Element>]) -> AxiomReport {
    let n = table.len();
    let mut violations = Vec::new();
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != n {
            violations.push(AxiomViolation::Shape {
                row,
                len: entries.len(),
                expected: n,
            });
        }
    }
    if !violations.is_empty() {
        return AxiomReport {
            size: n,
            violations,
            bottom: None,
        };
    }
    for (a, entries) in table.iter().enumerate() {
        for (b, &value) in entries.iter().enumerate() {
            if value >= n {
                violations.push(AxiomViolation::OutOfRange { a, b, value });
            }
        }
    }
    if !violations.is_empty() {
        return AxiomReport {
            size: n,
            violations,
            bottom: None,
        };
    }

    let m = |a: usize, b: usize| table[a][b];
    let leq = |a: usize, b: usize| m(a, b) == a;
    for a in 0..n {
        if m(a, a) != a {
            violations.push(AxiomViolation::Idempotence { a, meet: m(a, a) });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if m(a, b) != m(b, a) {
                violations.push(AxiomViolation::Commutativity {
                    a,
                    b,
                    ab: m(a, b),
                    ba: m(b, a),
                });
            }
            if leq(a, b) && leq(b, a) {
                violations.push(AxiomViolation::Antisymmetry { a, b });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = m(a, b);
            for c in 0..n {
                if m(ab, c) != m(a, m(b, c)) {
                    violations.push(AxiomViolation::Associativity { a, b, c });
                }
                if leq(a, b) && leq(b, c) && !leq(a, c) {
                    violations.push(AxiomViolation::Transitivity { a, b, c });
                }
            }
        }
    }

    let bottom = if n == 0 {
        None
    } else {
        let candidate = (1..n).fold(0, m);
        (0..n).all(|e| leq(candidate, e)).then_some(candidate)
    };
    if bottom.is_none() {
        violations.push(AxiomViolation::NoBottom);
    }
    AxiomReport {
        size: n,
        violations,
        bottom,
    }
}

/// A finite inf-semilattice with a validated meet table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInfSemilattice {
    size: usize,
    meet: Vec<Element>,
    labels: Vec<String>,
    bottom: Element,
}

impl FiniteInfSemilattice {
    /// Builds a space from a square meet table, rejecting tables that fail
    /// any axiom.
    pub fn from_table(table: Vec<Vec<Element>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::EmptySet("a semilattice"));
        }
        let report = check_axioms(&table);
        if !report.is_valid() {
            return Err(Error::InvalidMeetTable {
                violations: report.violations,
            });
        }
        let labels = match labels {
            Some(labels) if labels.len() != n => {
                return Err(Error::InvalidGame(format!(
                    "{} labels for {} elements",
                    labels.len(),
                    n
                )))
            }
            Some(labels) => labels,
            None => (0..n).map(|e| e.to_string()).collect(),
        };
        Ok(FiniteInfSemilattice {
            size: n,
            meet: table.into_iter().flatten().collect(),
            labels,
            bottom: report.bottom.expect("valid table has a bottom"),
        })
    }

    /// A chain `0 < 1 < ... < n-1` under `min`.
    pub fn chain(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySet("a chain"));
        }
        let mut meet = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                meet.push(a.min(b));
            }
        }
        Ok(FiniteInfSemilattice {
            size: n,
            meet,
            labels,
            bottom: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }

    pub fn label(&self, e: Element) -> &str {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bottom(&self) -> Element {
        self.bottom
    }

    /// The full meet table, row by row.
    pub fn table(&self) -> Vec<Vec<Element>> {
        self.meet
            .chunks(self.size)
            .map(|row| row.to_vec())
            .collect()
    }

    pub fn check_axioms(&self) -> AxiomReport {
        check_axioms(&self.table())
    }

    /// Meet of two elements. Panics on out-of-range ids, like slice indexing.
    #[inline]
    pub fn meet(&self, a: Element, b: Element) -> Element {
        assert!(a < self.size && b < self.size, "element out of range");
        self.meet[a * self.size + b]
    }

    #[inline]
    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.meet(a, b) == a
    }

    pub fn checked_meet(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.meet(a, b))
    }

    pub fn checked_leq(&self, a: Element, b: Element) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq(a, b))
    }

    pub fn check(&self, e: Element) -> Result<()> {
        if e < self.size {
            Ok(())
        } else {
            Err(Error::UnknownElement {
                element: e,
                size: self.size,
            })
        }
    }

    /// Meet of a finite family; `None` for an empty family.
    pub fn meet_all(&self, elements: impl IntoIterator<Item = Element>) -> Option<Element> {
        elements.into_iter().reduce(|acc, e| self.meet(acc, e))
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.size)
    }

    pub fn set(&self, members: impl IntoIterator<Item = Element>) -> Result<ElementSet> {
        ElementSet::new(self.size, members)
    }

    /// `{z : a <= z <= b}`.
    pub fn interval(&self, a: Element, b: Element) -> Result<ElementSet> {
        if !self.checked_leq(a, b)? {
            return Err(Error::NotOrdered { lower: a, upper: b });
        }
        Ok(self.collect(|z| self.leq(a, z) && self.leq(z, b)))
    }

    /// `[x1 ∧ x2, x1] ∪ [x1 ∧ x2, x2]`.
    pub fn bracket(&self, x1: Element, x2: Element) -> Result<ElementSet> {
        let m = self.checked_meet(x1, x2)?;
        Ok(self.collect(|z| self.leq(m, z) && (self.leq(z, x1) || self.leq(z, x2))))
    }

    pub fn up_set(&self, a: Element) -> ElementSet {
        self.collect(|z| self.leq(a, z))
    }

    /// Smallest downward-closed set containing `set`.
    pub fn down_closure(&self, set: &ElementSet) -> ElementSet {
        self.collect(|z| set.iter().any(|x| self.leq(z, x)))
    }

    pub fn is_inf_convex(&self, set: &ElementSet) -> InfConvexity {
        let members = set.as_slice();
        let sub_semilattice = members
            .iter()
            .all(|&x| members.iter().all(|&y| set.contains(self.meet(x, y))));
        let order_convex = members.iter().all(|&x| {
            members.iter().all(|&y| {
                !self.leq(x, y)
                    || self
                        .elements()
                        .all(|z| !(self.leq(x, z) && self.leq(z, y)) || set.contains(z))
            })
        });
        let bracket_closed = members.iter().all(|&x| {
            members.iter().all(|&y| {
                let m = self.meet(x, y);
                self.elements().all(|z| {
                    !(self.leq(m, z) && (self.leq(z, x) || self.leq(z, y))) || set.contains(z)
                })
            })
        });
        InfConvexity {
            inf_convex: sub_semilattice && order_convex,
            sub_semilattice,
            order_convex,
            bracket_closed,
        }
    }

    /// Downward closed: `y <= x` and `x ∈ S` imply `y ∈ S`.
    pub fn is_comprehensive(&self, set: &ElementSet) -> bool {
        set.iter()
            .all(|x| self.elements().all(|y| !self.leq(y, x) || set.contains(y)))
    }

    pub fn maximal_elements(&self, set: &ElementSet) -> Result<ElementSet> {
        if set.is_empty() {
            return Err(Error::EmptySet("maximal_elements"));
        }
        Ok(self.filter(set, |x| set.iter().all(|y| !self.leq(x, y) || x == y)))
    }

    pub fn is_chain(&self, set: &ElementSet) -> bool {
        set.iter()
            .all(|x| set.iter().all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    /// The element of `set` below all others, if any.
    pub fn least(&self, set: &ElementSet) -> Option<Element> {
        set.iter().find(|&x| set.iter().all(|y| self.leq(x, y)))
    }

    /// The element of `set` above all others, if any.
    pub fn greatest(&self, set: &ElementSet) -> Option<Element> {
        set.iter().find(|&x| set.iter().all(|y| self.leq(y, x)))
    }

    fn collect(&self, keep: impl Fn(Element) -> bool) -> ElementSet {
        ElementSet::from_sorted(self.size, self.elements().filter(|&z| keep(z)).collect())
    }

    fn filter(&self, set: &ElementSet, keep: impl Fn(Element) -> bool) -> ElementSet {
        ElementSet::from_sorted(self.size, set.iter().filter(|&z| keep(z)).collect())
    }
}

/// The three equivalent readings of inf-convexity, computed independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InfConvexity {
    pub inf_convex: bool,
    pub sub_semilattice: bool,
    pub order_convex: bool,
    pub bracket_closed: bool,
}

impl InfConvexity {
    pub fn agrees(&self) -> bool {
        self.inf_convex == self.bracket_closed
    }
}

/// A subset of a finite space, stored as sorted element ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    universe: usize,
    members: Vec<Element>,
}

impl Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.members.iter())
    }
}

impl ElementSet {
    pub fn new(universe: usize, members: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut members: Vec<Element> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&e| e >= universe) {
            return Err(Error::UnknownElement {
                element: bad,
                size: universe,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(ElementSet { universe, members })
    }

    fn from_sorted(universe: usize, members: Vec<Element>) -> Self {
        ElementSet { universe, members }
    }

    pub fn full(universe: usize) -> Self {
        ElementSet::from_sorted(universe, (0..universe).collect())
    }

    pub fn empty(universe: usize) -> Self {
        ElementSet::from_sorted(universe, Vec::new())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.universe
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.members
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet::from_sorted(
            self.universe,
            self.iter().filter(|&e| other.contains(e)).collect(),
        )
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut members = self.members.clone();
        members.extend(other.iter());
        members.sort_unstable();
        members.dedup();
        ElementSet::from_sorted(self.universe.max(other.universe), members)
    }
}

/// Cartesian product of finite inf-semilattices with componentwise meet.
///
/// Tuples are encoded in mixed radix with the first factor most significant,
/// so index order is the lexicographic order of tuples.
#[derive(Clone, Debug)]
pub struct ProductSemilattice {
    factors: Vec<Arc<FiniteInfSemilattice>>,
    strides: Vec<usize>,
    len: usize,
}

impl ProductSemilattice {
    pub fn new(factors: Vec<Arc<FiniteInfSemilattice>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::NoFactors);
        }
        let mut strides = vec![1; factors.len()];
        let mut len: usize = 1;
        for i in (0..factors.len()).rev() {
            strides[i] = len;
            len = len
                .checked_mul(factors[i].len())
                .ok_or_else(|| Error::InvalidGame("product space too large".into()))?;
        }
        Ok(ProductSemilattice {
            factors,
            strides,
            len,
        })
    }

    pub fn factors(&self) -> &[Arc<FiniteInfSemilattice>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn encode(&self, tuple: &[Element]) -> Result<usize> {
        if tuple.len() != self.factors.len() {
            return Err(Error::InvalidProfile(format!(
                "expected {} coordinates, got {}",
                self.factors.len(),
                tuple.len()
            )));
        }
        let mut index = 0;
        for ((&e, factor), stride) in tuple.iter().zip(&self.factors).zip(&self.strides) {
            factor.check(e)?;
            index += e * stride;
        }
        Ok(index)
    }

    pub fn decode(&self, index: usize) -> Vec<Element> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(factor, stride)| (index / stride) % factor.len())
            .collect()
    }

    pub fn meet(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(f, (&x, &y))| f.meet(x, y))
            .collect()
    }

    pub fn leq(&self, a: &[Element], b: &[Element]) -> bool {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .all(|(f, (&x, &y))| f.leq(x, y))
    }

    pub fn bottom(&self) -> Vec<Element> {
        self.factors.iter().map(|f| f.bottom()).collect()
    }

    pub fn tuple_label(&self, tuple: &[Element]) -> String {
        if self.factors.len() == 1 {
            return self.factors[0].label(tuple[0]).to_string();
        }
        let parts: Vec<&str> = self
            .factors
            .iter()
            .zip(tuple)
            .map(|(f, &e)| f.label(e))
            .collect();
        format!("({})", parts.join(","))
    }

    /// The product as an explicit semilattice over tuple indices.
    pub fn flatten(&self) -> FiniteInfSemilattice {
        let n = self.len;
        let tuples: Vec<Vec<Element>> = (0..n).map(|i| self.decode(i)).collect();
        let mut meet = Vec::with_capacity(n * n);
        for a in &tuples {
            for b in &tuples {
                let m = self.meet(a, b);
                meet.push(self.encode(&m).expect("componentwise meet stays in range"));
            }
        }
        FiniteInfSemilattice {
            size: n,
            meet,
            labels: tuples.iter().map(|t| self.tuple_label(t)).collect(),
            bottom: self.encode(&self.bottom()).expect("bottom in range"),
        }
    }

    /// Product of per-factor sets, as a set of flattened indices.
    pub fn product_set(&self, sets: &[ElementSet]) -> Result<ElementSet> {
        if sets.len() != self.factors.len() {
            return Err(Error::InvalidProfile("one set per factor required".into()));
        }
        let members =
            (0..self.len).filter(|&i| self.decode(i).iter().zip(sets).all(|(&e, s)| s.contains(e)));
        ElementSet::new(self.len, members)
    }
}

/// Convenience wrapper around [`ProductSemilattice::new`].
pub fn product(factors: Vec<Arc<FiniteInfSemilattice>>) -> Result<ProductSemilattice> {
    ProductSemilattice::new(factors)
}
