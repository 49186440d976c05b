use crate::error::{Error, Result};

/// A continuous piecewise-linear function given by its vertices.
///
/// Evaluation interpolates linearly between vertices, is constant to the
/// left of the first vertex and continues with `tail_slope` after the last.
/// Majorants on the half line always carry an explicit vertex at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
    tail_slope: f64,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, tail_slope: f64) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptyInput);
        }
        if xs.len() != ys.len() {
            return Err(Error::Malformed(format!(
                "{} abscissas but {} ordinates",
                xs.len(),
                ys.len()
            )));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) || !tail_slope.is_finite() {
            return Err(Error::Malformed("non-finite vertex".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(
                "vertex abscissas must be strictly increasing".into(),
            ));
        }
        Ok(Self { xs, ys, tail_slope })
    }

    pub(crate) fn from_parts(xs: Vec<f64>, ys: Vec<f64>, tail_slope: f64) -> Self {
        debug_assert!(!xs.is_empty() && xs.len() == ys.len());
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        Self { xs, ys, tail_slope }
    }

    /// The zero function, as a single origin vertex.
    pub fn zero() -> Self {
        Self::from_parts(vec![0.0], vec![0.0], 0.0)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn tail_slope(&self) -> f64 {
        self.tail_slope
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v <= x);
        let last = self.xs.len() - 1;
        if k == 0 {
            self.ys[0]
        } else if k > last {
            if x == self.xs[last] {
                self.ys[last]
            } else {
                self.ys[last] + self.tail_slope * (x - self.xs[last])
            }
        } else {
            let i = k - 1;
            if x == self.xs[i] {
                return self.ys[i];
            }
            let (x0, x1) = (self.xs[i], self.xs[i + 1]);
            let (y0, y1) = (self.ys[i], self.ys[i + 1]);
            y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
        }
    }

    /// Segment slopes, left to right (excluding the tail slope).
    pub fn slopes(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| c * y).collect(),
            tail_slope: c * self.tail_slope,
        }
    }

    /// `a * p + b * q` on the merged vertex set.
    pub fn combine(a: f64, p: &Self, b: f64, q: &Self) -> Self {
        let xs = merge_sorted(&p.xs, &q.xs);
        let ys = xs.iter().map(|&x| a * p.eval(x) + b * q.eval(x)).collect();
        Self::from_parts(xs, ys, a * p.tail_slope + b * q.tail_slope)
    }
}

/// Sorted union of two strictly increasing slices.
pub(crate) fn merge_sorted(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_extends() {
        let p = PiecewiseLinear::new(vec![0.0, 2.0], vec![0.0, 1.0], 0.0).unwrap();
        assert_eq!(p.eval(1.0), 0.5);
        assert_eq!(p.eval(2.0), 1.0);
        assert_eq!(p.eval(7.0), 1.0);
        let q = PiecewiseLinear::new(vec![1.0, 2.0], vec![1.0, 3.0], -1.0).unwrap();
        assert_eq!(q.eval(0.0), 1.0);
        assert_eq!(q.eval(4.0), 1.0);
    }

    #[test]
    fn combine_on_merged_vertices() {
        let p = PiecewiseLinear::new(vec![0.0, 2.0], vec![0.0, 1.0], 0.0).unwrap();
        let q = PiecewiseLinear::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 2.0], 0.0).unwrap();
        let d = PiecewiseLinear::combine(1.0, &q, -1.0, &p);
        assert_eq!(d.xs(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(d.ys(), &[0.0, 1.5, 1.0, 1.0]);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(PiecewiseLinear::new(vec![1.0, 0.0], vec![0.0, 0.0], 0.0).is_err());
        assert!(PiecewiseLinear::new(vec![], vec![], 0.0).is_err());
    }

    #[test]
    fn merge_dedups() {
        assert_eq!(
            merge_sorted(&[0.0, 1.0, 3.0], &[1.0, 2.0]),
            vec![0.0, 1.0, 2.0, 3.0]
        );
    }
}
