//! Monotone hazard and monotone regression tests.
//!
//! Both reuse the concavity test on a compact interval. An increasing
//! hazard rate is a convex cumulative hazard `Lambda`, so the test is run
//! on `theta = -Lambda` over `[0, b]`. An increasing regression function is
//! a convex cumulative sum diagram, and the test is run on `-cusum` over
//! `[0, 1]`. The interval majorant does not flatten, and the distance is
//! taken over the interval only.

use rand::Rng;
use serde::Serialize;

use crate::conctest::{
    assemble_report, bootstrap_draws, SupEval, TestConfig, TestReport, TuningRule,
};
use crate::error::{Error, Result};
use crate::majorant::{check_bandwidth, lcm_interval, HullPoints};
use crate::piecewise::{
    affine_combine, distinct_with_counts, lp_diff_on, Domain, GaussLegendre, PiecewiseLinear,
    StepFunction,
};

/// Degeneracy rate `s_n = n^{-power} (log n)^{log_power}` of the strictly
/// convex side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegeneracyRate {
    pub power: f64,
    pub log_power: f64,
}

impl Default for DegeneracyRate {
    fn default() -> Self {
        Self {
            power: 2.0 / 3.0,
            log_power: 1.0,
        }
    }
}

impl DegeneracyRate {
    pub fn eval(&self, n: usize) -> f64 {
        let n = n as f64;
        n.powf(-self.power) * n.ln().powf(self.log_power)
    }
}

/// `sqrt(n) s_n / kappa_n` at `n`.
pub fn degeneracy_ratio(kappa: TuningRule, s: DegeneracyRate, n: usize) -> Result<f64> {
    Ok((n as f64).sqrt() * s.eval(n) / kappa.eval(n)?)
}

/// Whether `sqrt(n) s_n / kappa_n -> 0`, decided from the exponents.
pub fn degeneracy_vanishes(kappa: TuningRule, s: DegeneracyRate) -> bool {
    // sqrt(n) s_n / kappa_n = n^{e} (log n)^{l}
    let (e, l) = match kappa {
        TuningRule::Power(k) => (0.5 - s.power + k, s.log_power),
        TuningRule::InvLog => (0.5 - s.power, s.log_power + 1.0),
    };
    e < 0.0 || (e == 0.0 && l < 0.0)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct HazardConfig {
    pub base: TestConfig,
    /// Right end of the testing interval; the 0.95 empirical quantile when
    /// unset.
    pub b: Option<f64>,
    pub s_rule: DegeneracyRate,
}

impl HazardConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        check_degeneracy(self.base.kappa_rule, self.s_rule)
    }
}

fn check_degeneracy(kappa: TuningRule, s: DegeneracyRate) -> Result<()> {
    if !degeneracy_vanishes(kappa, s) {
        return Err(Error::InvalidConfig(format!(
            "kappa rule {kappa} does not dominate sqrt(n) s_n"
        )));
    }
    Ok(())
}

fn sorted_sample(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(bad) = sample.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::DomainViolation(format!("sample entry {bad}")));
    }
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Nelson-Aalen cumulative hazard with weights: the jump at distinct value
/// `j` is `w_j / (n - sum_{k<j} w_k)`. Only knots accepted by `keep` jump.
fn weighted_hazard(knots: &[f64], weights: &[u64], keep: impl Fn(f64) -> bool) -> StepFunction {
    let n: u64 = weights.iter().sum();
    let mut at_risk = n;
    let mut acc = 0.0;
    let mut ks = Vec::new();
    let mut vs = Vec::new();
    for (&x, &w) in knots.iter().zip(weights) {
        if !keep(x) {
            break;
        }
        if w > 0 {
            acc += w as f64 / at_risk as f64;
            ks.push(x);
            vs.push(acc);
        }
        at_risk -= w;
    }
    StepFunction::from_parts(ks, vs, 0.0)
}

/// Empirical cumulative hazard on `[0, b]`: jump `d / (n - i + 1)` at the
/// `i`-th order statistic, `d` being the number of observations tied there.
pub fn cumulative_hazard(sample: &[f64], b: f64) -> Result<StepFunction> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::DegenerateInterval(0.0, b));
    }
    let sorted = sorted_sample(sample)?;
    let (knots, counts) = distinct_with_counts(&sorted);
    Ok(weighted_hazard(&knots, &counts, |x| x <= b))
}

/// `||m - f||` over `[a, b]` with the configured order and weight.
fn interval_distance(
    m: &PiecewiseLinear,
    f: &StepFunction,
    cfg: &TestConfig,
    a: f64,
    b: f64,
) -> Result<f64> {
    if cfg.p == f64::INFINITY && cfg.sup == SupEval::Observations {
        return Ok(corner_sup(m, f, a, b));
    }
    lp_diff_on(
        m,
        f,
        cfg.p,
        &cfg.weight,
        Domain::Interval(a, b),
        GaussLegendre::default_rule(),
    )
}

/// `max |m - f|` over the points the interval majorant is built from,
/// with `f` taken as the larger of its one-sided values at each knot.
fn corner_sup(m: &PiecewiseLinear, f: &StepFunction, a: f64, b: f64) -> f64 {
    let (xs, ys, _) = f.hull_points(a, b);
    xs.iter()
        .zip(&ys)
        .map(|(&x, &y)| (m.eval(x) - y).abs())
        .fold(0.0, f64::max)
}

fn hazard_endpoint(sorted: &[f64], b: Option<f64>) -> Result<f64> {
    let b = match b {
        Some(b) => b,
        None => {
            let k = ((0.95 * sorted.len() as f64) - 1e-9).ceil().max(1.0) as usize;
            sorted[k - 1]
        }
    };
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::DegenerateInterval(0.0, b));
    }
    Ok(b)
}

/// Test of a nondecreasing hazard rate (convex cumulative hazard) on
/// `[0, b]`.
///
/// The jump of the cumulative hazard at `b` itself is left out, so the
/// test is effectively on `[0, b)`.
pub fn hazard_test(sample: &[f64], hcfg: &HazardConfig) -> Result<TestReport> {
    hcfg.validate()?;
    let cfg = &hcfg.base;
    let sorted = sorted_sample(sample)?;
    let n = sorted.len();
    if n < 10 {
        return Err(Error::InvalidConfig(format!(
            "hazard test needs n >= 10, got {n}"
        )));
    }
    let b = hazard_endpoint(&sorted, hcfg.b)?;
    let (knots, counts) = distinct_with_counts(&sorted);
    let owner: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(j, &c)| std::iter::repeat_n(j, c as usize))
        .collect();
    let before_b = |x: f64| x < b;
    let theta = weighted_hazard(&knots, &counts, before_b).scale(-1.0);
    let base = lcm_interval(&theta, 0.0, b)?.hull;
    let root_n = (n as f64).sqrt();
    let stat = root_n * interval_distance(&base, &theta, cfg, 0.0, b)?;

    let kappa_n = cfg.kappa_rule.eval(n)?;
    let t_n = cfg.t_rule.eval(n)?;
    check_bandwidth(t_n)?;
    let draws = bootstrap_draws(cfg.b, cfg.seed, |rng| {
        let mut w = vec![0u64; knots.len()];
        for _ in 0..n {
            w[owner[rng.random_range(0..n)]] += 1;
        }
        let theta_star = weighted_hazard(&knots, &w, before_b).scale(-1.0);
        let h = affine_combine(root_n, &theta_star, -root_n, &theta);
        let perturbed = lcm_interval(&affine_combine(1.0, &theta, t_n, &h), 0.0, b)?.hull;
        let dd = PiecewiseLinear::combine(1.0 / t_n, &perturbed, -1.0 / t_n, &base);
        interval_distance(&dd, &h, cfg, 0.0, b)
    })?;
    assemble_report(n, stat, kappa_n, t_n, &draws, cfg)
}

/// Regression pairs sorted by the covariate.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSample {
    z: Vec<f64>,
    y: Vec<f64>,
}

impl RegressionSample {
    pub fn new(z: &[f64], y: &[f64]) -> Result<Self> {
        if z.len() != y.len() {
            return Err(Error::Malformed(format!(
                "{} covariates, {} responses",
                z.len(),
                y.len()
            )));
        }
        if z.len() < 2 {
            return Err(Error::InvalidConfig(
                "regression needs at least 2 pairs".into(),
            ));
        }
        if z.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::DomainViolation("non-finite regression value".into()));
        }
        let mut idx: Vec<usize> = (0..z.len()).collect();
        idx.sort_by(|&i, &j| z[i].total_cmp(&z[j]).then(i.cmp(&j)));
        Ok(Self {
            z: idx.iter().map(|&i| z[i]).collect(),
            y: idx.iter().map(|&i| y[i]).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Responses in covariate order.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Paired resample: `n` draws with replacement, re-sorted by covariate.
    fn resample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.len();
        // self is sorted by z, so sorting the drawn indices sorts the pairs
        let mut idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        idx.sort_unstable();
        idx.iter().map(|&i| self.y[i]).collect()
    }
}

fn cusum_of(y: &[f64]) -> PiecewiseLinear {
    let n = y.len() as f64;
    let mut xs = Vec::with_capacity(y.len() + 1);
    let mut ys = Vec::with_capacity(y.len() + 1);
    xs.push(0.0);
    ys.push(0.0);
    let mut acc = 0.0;
    for (i, &v) in y.iter().enumerate() {
        acc += v;
        xs.push((i + 1) as f64 / n);
        ys.push(acc / n);
    }
    PiecewiseLinear::from_parts(xs, ys, 0.0)
}

/// Cumulative sum diagram: vertices `(i/n, (1/n) sum_{j<=i} Y_(j))`.
pub fn cusum(rs: &RegressionSample) -> PiecewiseLinear {
    cusum_of(&rs.y)
}

fn pl_distance(m: &PiecewiseLinear, g: &PiecewiseLinear, cfg: &TestConfig) -> Result<f64> {
    let d = PiecewiseLinear::combine(1.0, m, -1.0, g);
    let rule = GaussLegendre::default_rule();
    lp_diff_on(
        &d,
        &StepFunction::zero(),
        cfg.p,
        &cfg.weight,
        Domain::Interval(0.0, 1.0),
        rule,
    )
}

/// Test of a nondecreasing regression function (convex cumulative sum
/// diagram) with the paired bootstrap.
pub fn regress_test(rs: &RegressionSample, cfg: &TestConfig) -> Result<TestReport> {
    cfg.validate()?;
    let n = rs.len();
    let theta = cusum(rs).scale(-1.0);
    let base = lcm_interval(&theta, 0.0, 1.0)?.hull;
    let root_n = (n as f64).sqrt();
    let stat = root_n * pl_distance(&base, &theta, cfg)?;

    let kappa_n = cfg.kappa_rule.eval(n)?;
    let t_n = cfg.t_rule.eval(n)?;
    check_bandwidth(t_n)?;
    let draws = bootstrap_draws(cfg.b, cfg.seed, |rng| {
        let theta_star = cusum_of(&rs.resample(rng)).scale(-1.0);
        let h = PiecewiseLinear::combine(root_n, &theta_star, -root_n, &theta);
        let operand = PiecewiseLinear::combine(1.0, &theta, t_n, &h);
        let perturbed = lcm_interval(&operand, 0.0, 1.0)?.hull;
        let dd = PiecewiseLinear::combine(1.0 / t_n, &perturbed, -1.0 / t_n, &base);
        pl_distance(&dd, &h, cfg)
    })?;
    assemble_report(n, stat, kappa_n, t_n, &draws, cfg)
}
