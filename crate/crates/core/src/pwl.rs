//! Isotone piecewise-linear functions with rational breakpoints.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<(Rational, Rational)>,
}

/// Grid tabulation of a piecewise-linear component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discretized {
    #[serde(skip)]
    pub values: Vec<Rational>,
    /// Interior breakpoints that do not coincide with a grid point.
    #[serde(serialize_with = "serialize_points")]
    pub off_grid_breakpoints: Vec<Rational>,
}

fn serialize_points<S: serde::Serializer>(points: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(points.iter().map(|p| p.to_string()))
}

impl PiecewiseLinear {
    /// Breakpoints must have strictly increasing abscissae and weakly
    /// increasing values.
    pub fn new(breakpoints: Vec<(Rational, Rational)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Pwl("no breakpoints".into()));
        }
        for (i, pair) in breakpoints.windows(2).enumerate() {
            let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
            if x1 <= x0 {
                return Err(Error::Pwl(format!(
                    "breakpoints {i} and {} are not strictly increasing ({x0} then {x1})",
                    i + 1
                )));
            }
            if y1 < y0 {
                return Err(Error::Pwl(format!(
                    "non-isotone component: value drops from {y0} at {x0} to {y1} at {x1}"
                )));
            }
        }
        Ok(PiecewiseLinear { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (
            self.breakpoints[0].0,
            self.breakpoints[self.breakpoints.len() - 1].0,
        )
    }

    /// Exact linear interpolation; `None` outside the domain.
    pub fn eval(&self, x: Rational) -> Option<Rational> {
        let (from, to) = self.domain();
        if x < from || x > to {
            return None;
        }
        let i = self.breakpoints.partition_point(|&(bx, _)| bx <= x);
        if i == 0 {
            return Some(self.breakpoints[0].1);
        }
        let (x0, y0) = self.breakpoints[i - 1];
        if x0 == x || i == self.breakpoints.len() {
            return Some(y0);
        }
        let (x1, y1) = self.breakpoints[i];
        Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    pub fn discretize(&self, grid: &Grid) -> Result<Discretized> {
        let (from, to) = self.domain();
        if grid.lower < from || grid.upper > to {
            return Err(Error::Pwl(format!(
                "grid [{}, {}] lies outside the domain [{from}, {to}]",
                grid.lower, grid.upper
            )));
        }
        let values = grid
            .points()
            .into_iter()
            .map(|x| self.eval(x).expect("grid inside domain"))
            .collect();
        let off_grid_breakpoints = self
            .breakpoints
            .iter()
            .map(|&(x, _)| x)
            .filter(|&x| x > grid.lower && x < grid.upper && grid.index_of(x).is_none())
            .collect();
        Ok(Discretized {
            values,
            off_grid_breakpoints,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ramp() -> PiecewiseLinear {
        PiecewiseLinear::new(vec![(int(0), int(0)), (int(1), int(2)), (int(2), int(2))]).unwrap()
    }

    fn half() -> PiecewiseLinear {
        PiecewiseLinear::new(vec![(int(0), int(0)), (int(2), int(1))]).unwrap()
    }

    #[test]
    fn evaluates_ramp_components() {
        assert_eq!(ramp().eval(frac(3, 4)), Some(frac(3, 2)));
        assert_eq!(ramp().eval(int(1)), Some(int(2)));
        assert_eq!(ramp().eval(frac(7, 4)), Some(int(2)));
        assert_eq!(half().eval(int(2)), Some(int(1)));
        assert_eq!(half().eval(int(0)), Some(int(0)));
        assert_eq!(half().eval(int(3)), None);
    }

    #[test]
    fn discretizes_on_grid() {
        let g = Grid::new(int(0), int(2), frac(1, 4)).unwrap();
        let d = ramp().discretize(&g).unwrap();
        assert_eq!(d.values[3], frac(3, 2));
        assert_eq!(d.values[0], int(0));
        assert!(d.off_grid_breakpoints.is_empty());

        let coarse = Grid::new(int(0), int(2), frac(2, 3)).unwrap();
        let d = ramp().discretize(&coarse).unwrap();
        assert_eq!(d.off_grid_breakpoints, vec![int(1)]);

        let wide = Grid::new(int(0), int(3), int(1)).unwrap();
        assert!(ramp().discretize(&wide).is_err());
    }

    #[test]
    fn rejects_bad_breakpoints() {
        let err = PiecewiseLinear::new(vec![(int(0), int(1)), (int(1), int(0))]).unwrap_err();
        assert!(err.to_string().contains("non-isotone"));
        assert!(PiecewiseLinear::new(vec![(int(1), int(0)), (int(1), int(1))]).is_err());
        assert!(PiecewiseLinear::new(vec![]).is_err());
    }
}
