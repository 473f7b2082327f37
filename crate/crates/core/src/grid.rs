//! Uniform rational grids on an interval, viewed as chains under `min`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::semilattice::{Element, FiniteInfSemilattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    #[serde(with = "crate::rational::as_string")]
    pub lower: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub upper: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub step: Rational,
}

impl Grid {
    pub fn new(lower: Rational, upper: Rational, step: Rational) -> Result<Self> {
        if lower > upper {
            return Err(Error::InvalidGrid(format!(
                "lower {lower} exceeds upper {upper}"
            )));
        }
        if step <= Rational::from_integer(0) {
            return Err(Error::InvalidGrid(format!("step {step} is not positive")));
        }
        if !((upper - lower) / step).is_integer() {
            return Err(Error::InvalidGrid(format!(
                "({upper} - {lower}) / {step} is not an integer"
            )));
        }
        Ok(Grid { lower, upper, step })
    }

    /// Re-checks the invariants of a grid built by deserialization.
    pub fn validated(self) -> Result<Self> {
        Grid::new(self.lower, self.upper, self.step)
    }

    pub fn len(&self) -> usize {
        ((self.upper - self.lower) / self.step).to_integer() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: Element) -> Rational {
        self.lower + self.step * Rational::from_integer(k as i64)
    }

    pub fn points(&self) -> Vec<Rational> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Index of `value` if it is a grid point.
    pub fn index_of(&self, value: Rational) -> Option<Element> {
        if value < self.lower || value > self.upper {
            return None;
        }
        let k = (value - self.lower) / self.step;
        k.is_integer().then(|| k.to_integer() as usize)
    }

    pub fn space(&self) -> FiniteInfSemilattice {
        FiniteInfSemilattice::chain(self.points().iter().map(format_rational).collect())
            .expect("a grid has at least one point")
    }

    pub fn with_step(&self, step: Rational) -> Result<Self> {
        Grid::new(self.lower, self.upper, step)
    }
}
