use crate::error::{Error, Result};

/// A right-continuous piecewise-constant function on `[0, inf)`.
///
/// The function equals `base` on `[0, knots[0])`, `values[i]` on
/// `[knots[i], knots[i + 1])` and `values[last]` from the last knot on.
/// A function without knots is the constant `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
    base: f64,
}

impl StepFunction {
    pub fn new(knots: Vec<f64>, values: Vec<f64>, base: f64) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::Malformed(format!(
                "{} knots but {} values",
                knots.len(),
                values.len()
            )));
        }
        if !base.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Malformed("non-finite value".into()));
        }
        if knots.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Malformed(
                "knots must be finite and nonnegative".into(),
            ));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed("knots must be strictly increasing".into()));
        }
        Ok(Self {
            knots,
            values,
            base,
        })
    }

    pub(crate) fn from_parts(knots: Vec<f64>, values: Vec<f64>, base: f64) -> Self {
        debug_assert_eq!(knots.len(), values.len());
        debug_assert!(knots.windows(2).all(|w| w[0] < w[1]));
        Self {
            knots,
            values,
            base,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            knots: Vec::new(),
            values: Vec::new(),
            base: c,
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Value on `[last knot, inf)`.
    pub fn tail(&self) -> f64 {
        self.values.last().copied().unwrap_or(self.base)
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Right-continuous evaluation `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.knots.partition_point(|&k| k <= x) {
            0 => self.base,
            k => self.values[k - 1],
        }
    }

    /// Left limit `f(x-)`.
    pub fn left_limit(&self, x: f64) -> f64 {
        match self.knots.partition_point(|&k| k < x) {
            0 => self.base,
            k => self.values[k - 1],
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            knots: self.knots.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            base: c * self.base,
        }
    }

    /// True when `base <= values[0] <= values[1] <= ...`.
    pub fn is_nondecreasing(&self) -> bool {
        let mut prev = self.base;
        for &v in &self.values {
            if v < prev {
                return false;
            }
            prev = v;
        }
        true
    }

    /// Restriction to `[0, b]`, dropping knots beyond `b`.
    pub fn truncate(&self, b: f64) -> Self {
        let k = self.knots.partition_point(|&x| x <= b);
        Self {
            knots: self.knots[..k].to_vec(),
            values: self.values[..k].to_vec(),
            base: self.base,
        }
    }
}

/// Empirical distribution function of a sample of nonnegative reals.
///
/// Tied observations collapse into a single knot carrying the combined jump.
pub fn ecdf(sample: &[f64]) -> Result<StepFunction> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(bad) = sample.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::DomainViolation(format!("sample entry {bad}")));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (knots, counts) = distinct_with_counts(&sorted);
    Ok(weighted_ecdf_unchecked(
        &knots,
        &counts,
        sorted.len() as u64,
    ))
}

/// ECDF putting mass `counts[j] / sum(counts)` at `knots[j]`.
pub fn weighted_ecdf(knots: &[f64], counts: &[u64]) -> Result<StepFunction> {
    if knots.len() != counts.len() {
        return Err(Error::Malformed("knots and counts differ in length".into()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    if knots.windows(2).any(|w| w[0] >= w[1]) || knots.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::DomainViolation(
            "knots must be finite, nonnegative, increasing".into(),
        ));
    }
    Ok(weighted_ecdf_unchecked(knots, counts, total))
}

pub(crate) fn weighted_ecdf_unchecked(knots: &[f64], counts: &[u64], total: u64) -> StepFunction {
    let n = total as f64;
    let mut acc = 0u64;
    let values = counts
        .iter()
        .map(|&c| {
            acc += c;
            acc as f64 / n
        })
        .collect();
    StepFunction::from_parts(knots.to_vec(), values, 0.0)
}

/// Distinct values of a sorted slice with their multiplicities.
pub(crate) fn distinct_with_counts(sorted: &[f64]) -> (Vec<f64>, Vec<u64>) {
    let mut knots: Vec<f64> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for &x in sorted {
        match knots.last() {
            Some(&last) if last == x => *counts.last_mut().unwrap() += 1,
            _ => {
                knots.push(x);
                counts.push(1);
            }
        }
    }
    (knots, counts)
}

/// `a * f + b * g` on the merged knot set.
pub fn affine_combine(a: f64, f: &StepFunction, b: f64, g: &StepFunction) -> StepFunction {
    let (fk, gk) = (f.knots(), g.knots());
    let mut knots = Vec::with_capacity(fk.len().max(gk.len()));
    let mut values = Vec::with_capacity(fk.len().max(gk.len()));
    let (mut i, mut j) = (0, 0);
    let (mut fv, mut gv) = (f.base(), g.base());
    while i < fk.len() || j < gk.len() {
        let x = match (fk.get(i), gk.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        if fk.get(i) == Some(&x) {
            fv = f.values()[i];
            i += 1;
        }
        if gk.get(j) == Some(&x) {
            gv = g.values()[j];
            j += 1;
        }
        knots.push(x);
        values.push(a * fv + b * gv);
    }
    StepFunction::from_parts(knots, values, a * f.base() + b * g.base())
}
