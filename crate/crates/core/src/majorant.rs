//! Least concave majorants.
//!
//! The majorant of a step function or a piecewise-linear function is the
//! upper concave hull of finitely many points: the function only attains
//! its supremum over each constancy interval at the left end, and a
//! piecewise-linear function is dominated by a concave function as soon as
//! its vertices are. The hull is built by a single monotone-chain pass.

use crate::error::{Error, Result};
use crate::piecewise::{affine_combine, PiecewiseLinear, StepFunction};

/// Output of a majorant computation.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantResult {
    pub hull: PiecewiseLinear,
    /// Indices of input knots (or vertices) where the hull touches the input.
    pub touching: Vec<usize>,
    /// Abscissa of the hull maximum when trailing decreasing edges were
    /// replaced by a constant (half line only).
    pub flattened_from: Option<f64>,
}

/// Indices of the upper concave hull of points with strictly increasing
/// abscissas. A point is removed only when it lies strictly below the chord
/// of its neighbours, so collinear points stay on the hull, and the stored
/// chain has nonincreasing slopes in exactly the arithmetic used by
/// [`PiecewiseLinear::slopes`].
pub(crate) fn upper_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        while let [.., a, b] = stack[..] {
            let left = (ys[b] - ys[a]) / (xs[b] - xs[a]);
            let right = (ys[i] - ys[b]) / (xs[i] - xs[b]);
            if left < right {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    stack
}

/// Least bounded concave majorant of `f` on `[0, inf)`.
///
/// A bounded concave function on the half line is nondecreasing, so hull
/// edges of negative slope are replaced by the constant hull maximum. For
/// an ECDF this never triggers and the result is the Grenander estimator of
/// the distribution function.
pub fn lcm_halfline(f: &StepFunction) -> MajorantResult {
    let mut xs = Vec::with_capacity(f.len() + 1);
    let mut ys = Vec::with_capacity(f.len() + 1);
    let mut tags: Vec<Option<usize>> = Vec::with_capacity(f.len() + 1);
    if f.knots().first().is_none_or(|&k| k > 0.0) {
        xs.push(0.0);
        ys.push(f.base());
        tags.push(None);
    }
    for (i, (&x, &y)) in f.knots().iter().zip(f.values()).enumerate() {
        xs.push(x);
        ys.push(y);
        tags.push(Some(i));
    }

    let mut hull = upper_hull(&xs, &ys);
    let mut flattened_from = None;
    if let Some(cut) = hull
        .windows(2)
        .position(|w| (ys[w[1]] - ys[w[0]]) / (xs[w[1]] - xs[w[0]]) < 0.0)
    {
        hull.truncate(cut + 1);
        flattened_from = Some(xs[hull[cut]]);
    }

    let mut touching: Vec<usize> = hull.iter().filter_map(|&i| tags[i]).collect();
    if flattened_from.is_some() {
        let top = *hull.last().unwrap();
        let peak = ys[top];
        touching.extend(
            (top + 1..xs.len())
                .filter(|&i| ys[i] == peak)
                .filter_map(|i| tags[i]),
        );
    }

    let hx = hull.iter().map(|&i| xs[i]).collect();
    let hy = hull.iter().map(|&i| ys[i]).collect();
    MajorantResult {
        hull: PiecewiseLinear::from_parts(hx, hy, 0.0),
        touching,
        flattened_from,
    }
}

/// Functions whose majorant on a compact interval is the hull of finitely
/// many points.
pub trait HullPoints {
    /// Candidate points on `[a, b]`, with the index of the knot or vertex
    /// each one came from.
    fn hull_points(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>, Vec<Option<usize>>);
}

/// A step function that drops at a knot must be majorized against its left
/// limit there as well, so each candidate point carries the larger of the
/// two one-sided values.
impl HullPoints for StepFunction {
    fn hull_points(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>, Vec<Option<usize>>) {
        let knots = self.knots();
        let tag_at = |x: f64| knots.binary_search_by(|k| k.total_cmp(&x)).ok();
        let upper = |x: f64| self.eval(x).max(self.left_limit(x));
        let mut xs = vec![a];
        let mut ys = vec![self.eval(a)];
        let mut tags = vec![tag_at(a)];
        for (i, &x) in knots.iter().enumerate() {
            if x > a && x < b {
                xs.push(x);
                ys.push(upper(x));
                tags.push(Some(i));
            }
        }
        xs.push(b);
        ys.push(upper(b));
        tags.push(tag_at(b));
        (xs, ys, tags)
    }
}

impl HullPoints for PiecewiseLinear {
    fn hull_points(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>, Vec<Option<usize>>) {
        let vx = self.xs();
        let tag_at = |x: f64| vx.binary_search_by(|k| k.total_cmp(&x)).ok();
        let mut xs = vec![a];
        let mut ys = vec![self.eval(a)];
        let mut tags = vec![tag_at(a)];
        for (i, (&x, &y)) in vx.iter().zip(self.ys()).enumerate() {
            if x > a && x < b {
                xs.push(x);
                ys.push(y);
                tags.push(Some(i));
            }
        }
        xs.push(b);
        ys.push(self.eval(b));
        tags.push(tag_at(b));
        (xs, ys, tags)
    }
}

/// Least concave majorant on the compact interval `[a, b]`.
///
/// No flattening is applied; the hull may decrease. The returned function
/// is meaningful on `[a, b]` only.
pub fn lcm_interval<F: HullPoints + ?Sized>(f: &F, a: f64, b: f64) -> Result<MajorantResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::DegenerateInterval(a, b));
    }
    let (xs, ys, tags) = f.hull_points(a, b);
    let hull = upper_hull(&xs, &ys);
    let touching = hull.iter().filter_map(|&i| tags[i]).collect();
    let hx = hull.iter().map(|&i| xs[i]).collect();
    let hy = hull.iter().map(|&i| ys[i]).collect();
    Ok(MajorantResult {
        hull: PiecewiseLinear::from_parts(hx, hy, 0.0),
        touching,
        flattened_from: None,
    })
}

/// Grenander density estimator: the left derivative of the majorant.
///
/// Returned as a right-continuous step function whose jumps sit at hull
/// vertices; `left_limit(x)` gives the left derivative at `x`, and the
/// value is `0` past the last vertex.
pub fn grenander_slopes(m: &MajorantResult) -> StepFunction {
    let slopes = m.hull.slopes();
    if slopes.is_empty() {
        return StepFunction::constant(m.hull.tail_slope());
    }
    let knots = m.hull.xs()[1..].to_vec();
    let mut values: Vec<f64> = slopes[1..].to_vec();
    values.push(m.hull.tail_slope());
    StepFunction::from_parts(knots, values, slopes[0])
}

/// Rescaled-bootstrap difference quotient `[M(F + t h) - M(F)] / t`.
pub fn dd_estimate(fn_: &StepFunction, h: &StepFunction, t_n: f64) -> Result<PiecewiseLinear> {
    check_bandwidth(t_n)?;
    let base = lcm_halfline(fn_).hull;
    Ok(dd_from_base(&base, fn_, h, t_n))
}

pub(crate) fn check_bandwidth(t_n: f64) -> Result<()> {
    if !(t_n > 0.0) || !t_n.is_finite() {
        return Err(Error::InvalidBandwidth(t_n));
    }
    Ok(())
}

/// [`dd_estimate`] with the majorant of `fn_` precomputed.
pub(crate) fn dd_from_base(
    base_hull: &PiecewiseLinear,
    fn_: &StepFunction,
    h: &StepFunction,
    t_n: f64,
) -> PiecewiseLinear {
    let operand = affine_combine(1.0, fn_, t_n, h);
    let perturbed = lcm_halfline(&operand).hull;
    PiecewiseLinear::combine(1.0 / t_n, &perturbed, -1.0 / t_n, base_hull)
}
