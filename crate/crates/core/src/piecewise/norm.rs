//! Exact sup distances and weighted `L_p` distances between a
//! piecewise-linear function and a step function.
//!
//! Between consecutive breakpoints (vertices of the linear function, knots
//! of the step function) the difference is affine, so the supremum is
//! attained at a breakpoint value or at a left limit, and the `L_p` integral
//! splits into segments on which the integrand is smooth.

use super::linear::{merge_sorted, PiecewiseLinear};
use super::quadrature::GaussLegendre;
use super::step::StepFunction;
use super::weight::WeightSpec;
use crate::error::{Error, Result};

/// Region over which a distance is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    HalfLine,
    Interval(f64, f64),
}

fn breakpoints(m: &PiecewiseLinear, f: &StepFunction, domain: Domain, extra: &[f64]) -> Vec<f64> {
    let merged = merge_sorted(m.xs(), f.knots());
    let (lo, hi) = match domain {
        Domain::HalfLine => (0.0, merged.last().copied().unwrap_or(0.0).max(0.0)),
        Domain::Interval(a, b) => (a, b),
    };
    let mut pts = Vec::with_capacity(merged.len() + extra.len() + 2);
    pts.push(lo);
    pts.extend(merged.into_iter().filter(|&x| x > lo && x < hi));
    if !extra.is_empty() {
        let inner: Vec<f64> = extra
            .iter()
            .copied()
            .filter(|&x| x > lo && x < hi)
            .collect();
        pts = merge_sorted(&pts, &inner);
    }
    if hi > lo {
        pts.push(hi);
    }
    pts
}

/// `sup_{x >= 0} |m(x) - f(x)|`.
pub fn sup_diff(m: &PiecewiseLinear, f: &StepFunction) -> f64 {
    sup_diff_on(m, f, Domain::HalfLine)
}

/// Supremum of `|m - f|` over `domain`, evaluating the difference and its
/// left limit at every breakpoint.
pub fn sup_diff_on(m: &PiecewiseLinear, f: &StepFunction, domain: Domain) -> f64 {
    if domain == Domain::HalfLine && m.tail_slope() != 0.0 {
        return f64::INFINITY;
    }
    let pts = breakpoints(m, f, domain, &[]);
    let mut best = 0.0f64;
    for (k, &x) in pts.iter().enumerate() {
        let mx = m.eval(x);
        best = best.max((mx - f.eval(x)).abs());
        if k > 0 {
            best = best.max((mx - f.left_limit(x)).abs());
        }
    }
    best
}

/// `max |m(x) - f(x)|` over `x = 0` and the breakpoints of `m` and `f`,
/// using right-continuous values only.
///
/// For an ECDF this is the largest gap at the observations. It falls short
/// of [`sup_diff`] by up to one jump of `f`.
pub fn sup_diff_points(m: &PiecewiseLinear, f: &StepFunction) -> f64 {
    if m.tail_slope() != 0.0 {
        return f64::INFINITY;
    }
    breakpoints(m, f, Domain::HalfLine, &[])
        .into_iter()
        .map(|x| (m.eval(x) - f.eval(x)).abs())
        .fold(0.0, f64::max)
}

/// Weighted `L_p` distance on the half line with the default quadrature.
///
/// `p = f64::INFINITY` gives [`sup_diff`] and ignores the weight.
pub fn lp_diff(m: &PiecewiseLinear, f: &StepFunction, p: f64, w: &WeightSpec) -> Result<f64> {
    lp_diff_on(m, f, p, w, Domain::HalfLine, GaussLegendre::default_rule())
}

pub fn lp_diff_on(
    m: &PiecewiseLinear,
    f: &StepFunction,
    p: f64,
    w: &WeightSpec,
    domain: Domain,
    rule: &GaussLegendre,
) -> Result<f64> {
    check_order(p)?;
    if p == f64::INFINITY {
        return Ok(sup_diff_on(m, f, domain));
    }
    let pts = breakpoints(m, f, domain, &w.kinks());
    let mut total = 0.0;
    for seg in pts.windows(2) {
        let (x0, x1) = (seg[0], seg[1]);
        let fv = f.eval(x0);
        total += integrate_affine(m.eval(x0) - fv, m.eval(x1) - fv, x0, x1, p, w, rule);
    }
    if domain == Domain::HalfLine {
        let x_end = *pts.last().unwrap();
        let d = m.eval(x_end) - f.eval(x_end);
        let slope = m.tail_slope();
        if slope == 0.0 {
            if d != 0.0 {
                total += d.abs().powf(p) * w.tail_mass(x_end);
            }
        } else {
            let far = match (w.support_end(), w) {
                (Some(end), _) => end,
                (None, WeightSpec::Exponential { rate }) => x_end + 60.0 / rate,
                (None, _) => unreachable!("weights without finite support are exponential"),
            };
            if far > x_end {
                let pieces = 32;
                let h = (far - x_end) / pieces as f64;
                for i in 0..pieces {
                    let a = x_end + h * i as f64;
                    let b = a + h;
                    total += integrate_affine(
                        d + slope * (a - x_end),
                        d + slope * (b - x_end),
                        a,
                        b,
                        p,
                        w,
                        rule,
                    );
                }
            }
        }
    }
    Ok(total.powf(1.0 / p))
}

pub(crate) fn check_order(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidOrder(p));
    }
    Ok(())
}

/// `int_{x0}^{x1} |d(x)|^p g(x) dx` for affine `d` with endpoint values
/// `d0`, `d1`, splitting at a sign change so each piece is smooth.
fn integrate_affine(
    d0: f64,
    d1: f64,
    x0: f64,
    x1: f64,
    p: f64,
    w: &WeightSpec,
    rule: &GaussLegendre,
) -> f64 {
    if x1 <= x0 || (d0 == 0.0 && d1 == 0.0) {
        return 0.0;
    }
    let piece = |a: f64, b: f64, da: f64, db: f64| {
        rule.integrate(
            |x| {
                let d = da + (db - da) * ((x - a) / (b - a));
                d.abs().powf(p) * w.eval(x)
            },
            a,
            b,
        )
    };
    if d0 * d1 < 0.0 {
        let r = x0 + (x1 - x0) * (d0 / (d0 - d1));
        if r > x0 && r < x1 {
            return piece(x0, r, d0, 0.0) + piece(r, x1, 0.0, d1);
        }
    }
    piece(x0, x1, d0, d1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::step::ecdf;

    fn line_half() -> PiecewiseLinear {
        PiecewiseLinear::new(vec![0.0, 2.0], vec![0.0, 1.0], 0.0).unwrap()
    }

    #[test]
    fn sup_just_left_of_knot() {
        let f = ecdf(&[1.0, 2.0]).unwrap();
        assert_eq!(sup_diff(&line_half(), &f), 0.5);
    }

    #[test]
    fn sup_at_points_skips_left_limits() {
        let f = ecdf(&[1.0, 2.0]).unwrap();
        assert_eq!(sup_diff_points(&line_half(), &f), 0.0);
        let f = ecdf(&[1.0, 2.0, 4.0]).unwrap();
        let m = PiecewiseLinear::new(vec![0.0, 4.0], vec![0.0, 1.0], 0.0).unwrap();
        // gaps at 1, 2 and 4 are 1/12, 1/6 and 0
        assert!((sup_diff_points(&m, &f) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn sup_three_points() {
        let f = ecdf(&[1.0, 2.0, 4.0]).unwrap();
        let m = PiecewiseLinear::new(
            vec![0.0, 1.0, 2.0, 4.0],
            vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
            0.0,
        )
        .unwrap();
        assert!((sup_diff(&m, &f) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sup_equal_constants() {
        let m = PiecewiseLinear::new(vec![0.0], vec![1.0], 0.0).unwrap();
        assert_eq!(sup_diff(&m, &StepFunction::constant(1.0)), 0.0);
    }

    #[test]
    fn l1_uniform_weight() {
        let f = ecdf(&[1.0, 2.0]).unwrap();
        let w = WeightSpec::uniform(2.0).unwrap();
        let v = lp_diff(&line_half(), &f, 1.0, &w).unwrap();
        assert!((v - 0.5).abs() < 1e-15, "{v}");
    }

    #[test]
    fn l2_exponential_weight_against_trapezoid() {
        let f = ecdf(&[1.0, 2.0]).unwrap();
        let m = line_half();
        let w = WeightSpec::exponential(1.0).unwrap();
        let v = lp_diff(&m, &f, 2.0, &w).unwrap();
        // trapezoid oracle on each smooth piece [0,1] and [1,2], using the
        // one-sided limits of the integrand at the jump
        let trap = |a: f64, b: f64, d: &dyn Fn(f64) -> f64| {
            let n = 50_000;
            let h = (b - a) / n as f64;
            let g = |x: f64| d(x).powi(2) * (-x).exp();
            let mut s = 0.5 * (g(a) + g(b));
            for i in 1..n {
                s += g(a + h * i as f64);
            }
            s * h
        };
        let s = trap(0.0, 1.0, &|x| x / 2.0) + trap(1.0, 2.0, &|x| x / 2.0 - 0.5);
        let oracle = s.sqrt();
        assert!(((v - oracle) / oracle).abs() < 1e-6, "{v} vs {oracle}");
    }

    #[test]
    fn infinity_delegates() {
        let f = ecdf(&[1.0, 2.0, 4.0]).unwrap();
        let m = line_half();
        let w = WeightSpec::default();
        assert_eq!(
            lp_diff(&m, &f, f64::INFINITY, &w).unwrap(),
            sup_diff(&m, &f)
        );
    }

    #[test]
    fn invalid_order() {
        let f = ecdf(&[1.0]).unwrap();
        let w = WeightSpec::default();
        assert_eq!(
            lp_diff(&line_half(), &f, 0.5, &w),
            Err(Error::InvalidOrder(0.5))
        );
        assert!(lp_diff(&line_half(), &f, f64::NAN, &w).is_err());
    }

    #[test]
    fn interval_domain() {
        let f = StepFunction::new(vec![1.0, 2.0], vec![2.0, 1.0], 0.0).unwrap();
        let m = PiecewiseLinear::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 1.0], 0.0).unwrap();
        // m - f is 2x on [0, 1), then (3 - x) - 2 on [1, 2)
        let s = sup_diff_on(&m, &f, Domain::Interval(0.0, 2.0));
        assert_eq!(s, 2.0);
        let s = sup_diff_on(&m, &f, Domain::Interval(1.0, 2.0));
        assert_eq!(s, 1.0);
    }

    #[test]
    fn tail_contribution_with_exponential_weight() {
        // m - f = 1 on [1, inf): contributes exp(-1)
        let m = PiecewiseLinear::new(vec![0.0, 1.0], vec![0.0, 1.0], 0.0).unwrap();
        let f = StepFunction::zero();
        let w = WeightSpec::exponential(1.0).unwrap();
        let v = lp_diff(&m, &f, 1.0, &w).unwrap();
        // int_0^1 x e^{-x} dx + e^{-1} = 1 - 2/e + 1/e
        let want = 1.0 - 1.0 / 1f64.exp();
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
    }
}
