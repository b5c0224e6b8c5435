//! Sample grids over `(t, x, ξ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `count` values from `min` to `max`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridRange {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn single(v: f64) -> Self {
        Self::linear(v, v, 1)
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min {
            return Err(Error::InvalidParameter(format!(
                "grid range [{}, {}] is not an ordered finite interval",
                self.min, self.max
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidParameter("grid count must be positive".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        let n = (self.count - 1) as f64;
        let v = match self.spacing {
            Spacing::Linear => (0..self.count)
                .map(|i| self.min + (self.max - self.min) * (i as f64 / n))
                .collect(),
            Spacing::Log => {
                if self.min <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "log spacing needs a positive minimum".into(),
                    ));
                }
                let (l0, l1) = (self.min.ln(), self.max.ln());
                (0..self.count)
                    .map(|i| (l0 + (l1 - l0) * (i as f64 / n)).exp())
                    .collect()
            }
        };
        let mut v: Vec<f64> = v;
        // pin the endpoints exactly
        v[0] = self.min;
        v[self.count - 1] = self.max;
        Ok(v)
    }
}

/// Cartesian product of `t`-values, `x`-points and `ξ`-points, iterated with
/// `t` outermost and `ξ` innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    t: Vec<f64>,
    x: Vec<Vec<f64>>,
    xi: Vec<Vec<f64>>,
}

impl SampleGrid {
    pub fn new(t: Vec<f64>, x: Vec<Vec<f64>>, xi: Vec<Vec<f64>>) -> Result<Self> {
        if t.is_empty() || x.is_empty() || xi.is_empty() {
            return Err(Error::InvalidParameter("grid axes must be nonempty".into()));
        }
        if t.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidParameter("t values must be sorted ascending".into()));
        }
        let finite = |v: &Vec<f64>| v.iter().all(|c| c.is_finite());
        if !t.iter().all(|c| c.is_finite()) || !x.iter().all(finite) || !xi.iter().all(finite) {
            return Err(Error::InvalidParameter("grid values must be finite".into()));
        }
        Ok(Self { t, x, xi })
    }

    /// Product grid from one range for `t` and one range per coordinate of
    /// `x` and `ξ`.
    pub fn from_ranges(t: &GridRange, x: &[GridRange], xi: &[GridRange]) -> Result<Self> {
        Self::new(t.values()?, product(x)?, product(xi)?)
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn xi(&self) -> &[Vec<f64>] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.t.len() * self.x.len() * self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, idx: usize) -> Point {
        let nxi = self.xi.len();
        let nx = self.x.len();
        let k = idx % nxi;
        let j = (idx / nxi) % nx;
        let i = idx / (nxi * nx);
        Point::new(self.t[i], self.x[j].clone(), self.xi[k].clone())
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Evaluates `f` at every point, in grid order. Runs in parallel when the
    /// `parallel` feature is on; the output order never changes.
    pub fn map<T: Send>(&self, f: impl Fn(&Point) -> T + Sync + Send) -> Vec<T> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..self.len())
                .into_par_iter()
                .map(|i| f(&self.point(i)))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..self.len()).map(|i| f(&self.point(i))).collect()
        }
    }
}

fn product(axes: &[GridRange]) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![Vec::new()];
    for r in axes {
        let vals = r.values()?;
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(GridRange::linear(0.0, 1.0, 3).values().unwrap(), vec![0.0, 0.5, 1.0]);
        let l = GridRange::log(1e-3, 1.0, 4).values().unwrap();
        assert_eq!(l[0], 1e-3);
        assert!((l[1] - 1e-2).abs() < 1e-15);
        assert_eq!(l[3], 1.0);
        assert!(GridRange::log(0.0, 1.0, 4).values().is_err());
        assert!(GridRange::linear(1.0, 0.0, 4).values().is_err());
        assert!(GridRange::linear(0.0, 1.0, 0).values().is_err());
    }

    #[test]
    fn product_order() {
        let g = SampleGrid::from_ranges(
            &GridRange::linear(0.0, 1.0, 2),
            &[GridRange::linear(-1.0, 1.0, 2)],
            &[GridRange::single(3.0)],
        )
        .unwrap();
        assert_eq!(g.len(), 4);
        let pts: Vec<_> = g.points().map(|p| (p.t, p.x[0], p.xi[0])).collect();
        assert_eq!(pts, vec![(0.0, -1.0, 3.0), (0.0, 1.0, 3.0), (1.0, -1.0, 3.0), (1.0, 1.0, 3.0)]);
        assert_eq!(g.map(|p| p.t), vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn unsorted_t_rejected() {
        assert!(SampleGrid::new(vec![1.0, 0.0], vec![vec![]], vec![vec![]]).is_err());
        assert!(SampleGrid::new(vec![], vec![vec![]], vec![vec![]]).is_err());
    }
}
