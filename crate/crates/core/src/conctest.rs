//! Bootstrap test of concavity of a distribution function on the half line.
//!
//! The statistic is `sqrt(n) * ||M F_n - F_n||_p`. Its critical value is the
//! larger of a fixed floor `kappa_n` and a bootstrap quantile. The floor
//! handles strictly concave nulls, where the statistic vanishes faster than
//! `1/sqrt(n)` and the limit law degenerates at zero.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::majorant::{check_bandwidth, dd_from_base, lcm_halfline};
use crate::piecewise::{
    affine_combine, check_order, distinct_with_counts, lp_diff, sup_diff_points,
    weighted_ecdf_unchecked, PiecewiseLinear, StepFunction, WeightSpec,
};
use crate::rng::{substream, StreamRng};
use rand::Rng;

/// Tuning sequence indexed by the sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TuningRule {
    /// `n^{-e}` for exponent `e > 0`.
    Power(f64),
    /// `1 / log n`.
    InvLog,
}

impl TuningRule {
    /// `n^{-1/k}`.
    pub fn root(k: f64) -> Self {
        TuningRule::Power(1.0 / k)
    }

    pub fn eval(&self, n: usize) -> Result<f64> {
        match *self {
            TuningRule::Power(e) => {
                if n < 1 {
                    return Err(Error::UndefinedTuning(format!("n = {n}")));
                }
                Ok((n as f64).powf(-e))
            }
            TuningRule::InvLog => {
                if n < 2 {
                    return Err(Error::UndefinedTuning(format!("1/log n at n = {n}")));
                }
                Ok(1.0 / (n as f64).ln())
            }
        }
    }

    /// `n7`, `log`, or `pow:<e>`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TuningRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TuningRule::InvLog => write!(f, "log"),
            TuningRule::Power(e) => {
                let k = 1.0 / e;
                if (k - k.round()).abs() < 1e-9 {
                    write!(f, "n{}", k.round() as i64)
                } else {
                    write!(f, "pow:{e}")
                }
            }
        }
    }
}

impl FromStr for TuningRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidConfig(format!("unknown tuning rule {s:?}"));
        if s == "log" {
            return Ok(TuningRule::InvLog);
        }
        let e = if let Some(k) = s.strip_prefix("pow:") {
            k.parse::<f64>().map_err(|_| bad())?
        } else if let Some(k) = s.strip_prefix('n') {
            1.0 / k.parse::<f64>().map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        if !(e > 0.0 && e.is_finite()) {
            return Err(bad());
        }
        Ok(TuningRule::Power(e))
    }
}

impl Serialize for TuningRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn tuning(rule: TuningRule, n: usize) -> Result<f64> {
    rule.eval(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Rescaled,
    Standard,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rescaled" => Ok(Scheme::Rescaled),
            "standard" => Ok(Scheme::Standard),
            _ => Err(Error::InvalidConfig(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Where the `p = inf` distance is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SupEval {
    /// Supremum over the half line, left limits included.
    Exact,
    /// Maximum over the observations and hull vertices only.
    Observations,
}

impl FromStr for SupEval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(SupEval::Exact),
            "observations" => Ok(SupEval::Observations),
            _ => Err(Error::InvalidConfig(format!(
                "unknown sup evaluation {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestConfig {
    #[serde(serialize_with = "serialize_order")]
    pub p: f64,
    pub weight: WeightSpec,
    pub alpha: f64,
    #[serde(rename = "B")]
    pub b: usize,
    pub kappa_rule: TuningRule,
    pub t_rule: TuningRule,
    pub scheme: Scheme,
    pub seed: u64,
    /// Floor the critical value at `kappa_n`. Turning this off yields the
    /// plain bootstrap test.
    pub kw_selection: bool,
    pub sup: SupEval,
}

fn serialize_order<S: serde::Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

impl Default for TestConfig {
    fn default() -> Self {
        Self {
            p: f64::INFINITY,
            weight: WeightSpec::default(),
            alpha: 0.05,
            b: 500,
            kappa_rule: TuningRule::root(7.0),
            t_rule: TuningRule::root(5.0),
            scheme: Scheme::Rescaled,
            seed: 0,
            kw_selection: true,
            sup: SupEval::Exact,
        }
    }
}

impl TestConfig {
    /// The configured distance between `m` and `f`.
    pub fn distance(&self, m: &PiecewiseLinear, f: &StepFunction) -> Result<f64> {
        if self.p == f64::INFINITY && self.sup == SupEval::Observations {
            return Ok(sup_diff_points(m, f));
        }
        lp_diff(m, f, self.p, &self.weight)
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.p)?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        if self.b == 0 {
            return Err(Error::InvalidConfig("B must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrawsSummary {
    pub count: usize,
    pub mean: f64,
    /// 1-based order statistic used for `c_star`.
    pub quantile_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub n: usize,
    pub statistic: f64,
    pub xi_n: f64,
    pub kappa_n: f64,
    pub t_n: f64,
    pub c_star: f64,
    pub c_final: f64,
    pub reject: bool,
    pub draws_summary: DrawsSummary,
    pub seed: u64,
}

/// Sorted sample reduced to distinct values with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    knots: Vec<f64>,
    counts: Vec<u64>,
    /// Distinct-value index of each sorted observation.
    owner: Vec<usize>,
    ecdf: StepFunction,
}

impl EmpiricalSample {
    pub fn new(sample: &[f64]) -> Result<Self> {
        let ecdf = crate::piecewise::ecdf(sample)?;
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        let (knots, counts) = distinct_with_counts(&sorted);
        let owner = counts
            .iter()
            .enumerate()
            .flat_map(|(j, &c)| std::iter::repeat_n(j, c as usize))
            .collect();
        Ok(Self {
            knots,
            counts,
            owner,
            ecdf,
        })
    }

    pub fn n(&self) -> usize {
        self.owner.len()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Multiplicity of each distinct value.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn ecdf(&self) -> &StepFunction {
        &self.ecdf
    }

    /// Empirical-bootstrap weights on the distinct values: `n` draws with
    /// replacement from the observations.
    pub fn resample_counts<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let n = self.n();
        let mut w = vec![0u64; self.knots.len()];
        for _ in 0..n {
            w[self.owner[rng.random_range(0..n)]] += 1;
        }
        w
    }

    /// ECDF of the reweighted sample.
    pub fn reweighted(&self, weights: &[u64]) -> Result<StepFunction> {
        if weights.len() != self.knots.len() {
            return Err(Error::Malformed(format!(
                "{} weights for {} distinct values",
                weights.len(),
                self.knots.len()
            )));
        }
        let got: u64 = weights.iter().sum();
        let expected = self.n() as u64;
        if got != expected {
            return Err(Error::InvalidResample { got, expected });
        }
        Ok(weighted_ecdf_unchecked(&self.knots, weights, expected))
    }
}

/// `sqrt(n) * ||M F_n - F_n||_p`.
pub fn statistic(sample: &[f64], cfg: &TestConfig) -> Result<f64> {
    check_order(cfg.p)?;
    let s = EmpiricalSample::new(sample)?;
    let hull = lcm_halfline(s.ecdf()).hull;
    statistic_from(&s, &hull, cfg)
}

pub(crate) fn statistic_from(
    s: &EmpiricalSample,
    hull: &PiecewiseLinear,
    cfg: &TestConfig,
) -> Result<f64> {
    let root_n = (s.n() as f64).sqrt();
    Ok(root_n * cfg.distance(hull, s.ecdf())?)
}

/// One rescaled-bootstrap draw `||[M(F_n + t h) - M F_n] / t - h||_p` with
/// `h = sqrt(n) (F_n^* - F_n)`.
pub fn rescaled_boot_draw(
    s: &EmpiricalSample,
    weights: &[u64],
    cfg: &TestConfig,
    t_n: f64,
) -> Result<f64> {
    check_bandwidth(t_n)?;
    let base = lcm_halfline(s.ecdf()).hull;
    rescaled_with_base(s, &base, weights, cfg, t_n)
}

pub(crate) fn rescaled_with_base(
    s: &EmpiricalSample,
    base: &PiecewiseLinear,
    weights: &[u64],
    cfg: &TestConfig,
    t_n: f64,
) -> Result<f64> {
    let boot = s.reweighted(weights)?;
    let root_n = (s.n() as f64).sqrt();
    let h = affine_combine(root_n, &boot, -root_n, s.ecdf());
    let dd = dd_from_base(base, s.ecdf(), &h, t_n);
    cfg.distance(&dd, &h)
}

/// One standard-bootstrap draw
/// `sqrt(n) ||(M F_n^* - F_n^*) - (M F_n - F_n)||_p`.
pub fn standard_boot_draw(s: &EmpiricalSample, weights: &[u64], cfg: &TestConfig) -> Result<f64> {
    let base = lcm_halfline(s.ecdf()).hull;
    standard_with_base(s, &base, weights, cfg)
}

pub(crate) fn standard_with_base(
    s: &EmpiricalSample,
    base: &PiecewiseLinear,
    weights: &[u64],
    cfg: &TestConfig,
) -> Result<f64> {
    let boot = s.reweighted(weights)?;
    let root_n = (s.n() as f64).sqrt();
    let boot_hull = lcm_halfline(&boot).hull;
    let m = PiecewiseLinear::combine(root_n, &boot_hull, -root_n, base);
    let g = affine_combine(root_n, &boot, -root_n, s.ecdf());
    cfg.distance(&m, &g)
}

/// `(c_star, c_final)`: the `ceil((1 - alpha) B)`-th order statistic of the
/// draws, and its maximum with `kappa_n`.
pub fn critical_value(draws: &[f64], alpha: f64, kappa_n: f64) -> Result<(f64, f64)> {
    let (c_star, _) = bootstrap_quantile(draws, alpha)?;
    Ok((c_star, kappa_n.max(c_star)))
}

pub(crate) fn bootstrap_quantile(draws: &[f64], alpha: f64) -> Result<(f64, usize)> {
    if draws.is_empty() {
        return Err(Error::NoBootstrapDraws);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let b = sorted.len();
    let k = (((1.0 - alpha) * b as f64) - 1e-9)
        .ceil()
        .clamp(1.0, b as f64) as usize;
    Ok((sorted[k - 1], k))
}

/// `B` draws, draw `b` computed from substream `(seed, b)`.
pub(crate) fn bootstrap_draws<F>(b: usize, seed: u64, draw: F) -> Result<Vec<f64>>
where
    F: Fn(&mut StreamRng) -> Result<f64> + Sync,
{
    (0..b as u64)
        .into_par_iter()
        .map(|i| draw(&mut substream(seed, i)))
        .collect()
}

/// Combine a statistic and its bootstrap draws into a decision.
pub(crate) fn assemble_report(
    n: usize,
    statistic: f64,
    kappa_n: f64,
    t_n: f64,
    draws: &[f64],
    cfg: &TestConfig,
) -> Result<TestReport> {
    let (c_star, idx) = bootstrap_quantile(draws, cfg.alpha)?;
    let c_final = if cfg.kw_selection {
        kappa_n.max(c_star)
    } else {
        c_star
    };
    let report = TestReport {
        n,
        statistic,
        xi_n: statistic / kappa_n,
        kappa_n,
        t_n,
        c_star,
        c_final,
        reject: statistic > c_final,
        draws_summary: DrawsSummary {
            count: draws.len(),
            mean: draws.iter().sum::<f64>() / draws.len() as f64,
            quantile_index: idx,
        },
        seed: cfg.seed,
    };
    debug_assert!(!cfg.kw_selection || report.c_final == report.kappa_n.max(report.c_star));
    debug_assert_eq!(report.reject, report.statistic > report.c_final);
    Ok(report)
}

/// Full test: statistic, tuning values, `B` bootstrap draws and decision.
///
/// The result depends only on the sample and `cfg`, not on the number of
/// worker threads.
pub fn run_test(sample: &[f64], cfg: &TestConfig) -> Result<TestReport> {
    cfg.validate()?;
    let s = EmpiricalSample::new(sample)?;
    let n = s.n();
    let kappa_n = cfg.kappa_rule.eval(n)?;
    let t_n = cfg.t_rule.eval(n)?;
    check_bandwidth(t_n)?;
    let base = lcm_halfline(s.ecdf()).hull;
    let stat = statistic_from(&s, &base, cfg)?;
    let draws = bootstrap_draws(cfg.b, cfg.seed, |rng| {
        let w = s.resample_counts(rng);
        match cfg.scheme {
            Scheme::Rescaled => rescaled_with_base(&s, &base, &w, cfg, t_n),
            Scheme::Standard => standard_with_base(&s, &base, &w, cfg),
        }
    })?;
    assemble_report(n, stat, kappa_n, t_n, &draws, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::Design;

    fn sup_cfg() -> TestConfig {
        TestConfig::default()
    }

    #[test]
    fn statistic_examples() {
        let cfg = sup_cfg();
        let want = 3f64.sqrt() / 3.0;
        assert!((statistic(&[1.0, 2.0, 3.0], &cfg).unwrap() - want).abs() < 1e-15);
        assert!((statistic(&[1.0, 2.0, 4.0], &cfg).unwrap() - want).abs() < 1e-15);
        let l1 = TestConfig {
            p: 1.0,
            weight: WeightSpec::uniform(2.0).unwrap(),
            ..sup_cfg()
        };
        let v = statistic(&[1.0, 2.0], &l1).unwrap();
        assert!((v - 2f64.sqrt() * 0.5).abs() < 1e-15);
    }

    #[test]
    fn observation_sup_is_smaller() {
        let x = Design::Piecewise.sample(80, &mut substream(12, 0));
        let exact = statistic(&x, &sup_cfg()).unwrap();
        let obs = statistic(
            &x,
            &TestConfig {
                sup: SupEval::Observations,
                ..sup_cfg()
            },
        )
        .unwrap();
        assert!(obs <= exact && exact - obs <= 1.0 / 80f64.sqrt() + 1e-12);
    }

    #[test]
    fn tuning_examples() {
        assert!((tuning(TuningRule::root(7.0), 128).unwrap() - 0.5).abs() < 1e-15);
        assert!((tuning(TuningRule::InvLog, 7).unwrap() - 0.513_898_6).abs() < 1e-6);
        assert!((tuning(TuningRule::root(3.0), 1000).unwrap() - 0.1).abs() < 1e-15);
        assert!(tuning(TuningRule::InvLog, 1).is_err());
    }

    #[test]
    fn tuning_labels_round_trip() {
        for s in ["n3", "n7", "log", "pow:0.3"] {
            assert_eq!(s.parse::<TuningRule>().unwrap().to_string(), s);
        }
        assert!("m7".parse::<TuningRule>().is_err());
        assert!("n0".parse::<TuningRule>().is_err());
    }

    #[test]
    fn critical_value_examples() {
        let draws: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        assert_eq!(critical_value(&draws, 0.05, 0.0).unwrap().0, 0.95);
        assert_eq!(critical_value(&[0.1], 0.05, 0.3).unwrap(), (0.1, 0.3));
        assert_eq!(critical_value(&[0.0; 10], 0.05, 0.2).unwrap(), (0.0, 0.2));
        assert_eq!(critical_value(&[], 0.05, 0.2), Err(Error::NoBootstrapDraws));
    }

    #[test]
    fn critical_value_monotone_in_level() {
        let draws: Vec<f64> = (0..37).map(|i| ((i * 17) % 37) as f64).collect();
        let mut last = f64::NEG_INFINITY;
        for k in 1..100 {
            let alpha = 1.0 - k as f64 / 100.0;
            let (c, _) = critical_value(&draws, alpha, 0.0).unwrap();
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn identical_resample_gives_zero() {
        let s = EmpiricalSample::new(&[0.3, 0.3, 1.0, 2.5]).unwrap();
        let w = s.counts().to_vec();
        assert_eq!(rescaled_boot_draw(&s, &w, &sup_cfg(), 0.3).unwrap(), 0.0);
        assert_eq!(standard_boot_draw(&s, &w, &sup_cfg()).unwrap(), 0.0);
    }

    #[test]
    fn weight_sum_mismatch() {
        let s = EmpiricalSample::new(&[1.0, 2.0]).unwrap();
        assert_eq!(
            rescaled_boot_draw(&s, &[2, 1], &sup_cfg(), 0.5),
            Err(Error::InvalidResample {
                got: 3,
                expected: 2
            })
        );
        assert!(standard_boot_draw(&s, &[1], &sup_cfg()).is_err());
        assert_eq!(
            rescaled_boot_draw(&s, &[1, 1], &sup_cfg(), 0.0),
            Err(Error::InvalidBandwidth(0.0))
        );
    }

    /// Dense-grid sup of `|g|` on `[0, 5]`, with left limits approximated by
    /// points just below each grid node.
    fn grid_sup(g: impl Fn(f64) -> f64) -> f64 {
        let mut best = 0.0f64;
        for i in 0..=10_000 {
            let x = 5.0 * i as f64 / 10_000.0;
            best = best.max(g(x).abs()).max(g((x - 1e-9).max(0.0)).abs());
        }
        best
    }

    #[test]
    fn n2_draws_against_grid() {
        let s = EmpiricalSample::new(&[1.0, 2.0]).unwrap();
        let cfg = sup_cfg();
        let t = 1.0 / 2f64.sqrt();
        let root_n = 2f64.sqrt();
        let fn_ = |x: f64| {
            if x < 1.0 {
                0.0
            } else if x < 2.0 {
                0.5
            } else {
                1.0
            }
        };
        let fstar = |x: f64| if x < 1.0 { 0.0 } else { 1.0 };
        let mfn = |x: f64| (x / 2.0).min(1.0);
        let mfstar = |x: f64| x.min(1.0);
        let h = |x: f64| root_n * (fstar(x) - fn_(x));
        let rescaled = grid_sup(|x| (mfstar(x) - mfn(x)) / t - h(x));
        let standard = grid_sup(|x| root_n * ((mfstar(x) - fstar(x)) - (mfn(x) - fn_(x))));
        let r = rescaled_boot_draw(&s, &[2, 0], &cfg, t).unwrap();
        let d = standard_boot_draw(&s, &[2, 0], &cfg).unwrap();
        assert!((r - rescaled).abs() < 1e-6, "{r} vs {rescaled}");
        assert!((d - standard).abs() < 1e-6, "{d} vs {standard}");
        assert!((r - root_n / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rescaled_matches_standard_at_unit_bandwidth() {
        let mut rng = substream(3, 0);
        for n in [5usize, 20, 80] {
            let x = Design::Piecewise.sample(n, &mut rng);
            let s = EmpiricalSample::new(&x).unwrap();
            let t = 1.0 / (n as f64).sqrt();
            for _ in 0..20 {
                let w = s.resample_counts(&mut rng);
                let r = rescaled_boot_draw(&s, &w, &sup_cfg(), t).unwrap();
                let d = standard_boot_draw(&s, &w, &sup_cfg()).unwrap();
                assert!((r - d).abs() < 1e-12 * (1.0 + d), "{r} vs {d}");
            }
        }
    }

    #[test]
    fn scale_equivariance() {
        let x = Design::HalfNormal.sample(60, &mut substream(4, 0));
        let cfg = sup_cfg();
        let base = statistic(&x, &cfg).unwrap();
        let doubled: Vec<f64> = x.iter().map(|v| v * 4.0).collect();
        assert_eq!(statistic(&doubled, &cfg).unwrap(), base);
        let scaled: Vec<f64> = x.iter().map(|v| v * 3.7).collect();
        assert!((statistic(&scaled, &cfg).unwrap() - base).abs() < 1e-13);
    }

    #[test]
    fn huge_floor_never_rejects() {
        let x: Vec<f64> = (1..=50).map(|i| i as f64 / 50.0).collect();
        let cfg = TestConfig {
            kappa_rule: TuningRule::Power(1e-9),
            b: 50,
            ..sup_cfg()
        };
        let r = run_test(&x, &cfg).unwrap();
        assert!(!r.reject);
        assert!(r.statistic <= r.kappa_n);
    }

    #[test]
    fn report_invariants() {
        let x = Design::compare2(0.3)
            .unwrap()
            .sample(100, &mut substream(8, 0));
        let cfg = TestConfig {
            b: 99,
            seed: 5,
            ..sup_cfg()
        };
        let r = run_test(&x, &cfg).unwrap();
        assert_eq!(r.c_final, r.kappa_n.max(r.c_star));
        assert_eq!(r.reject, r.statistic > r.c_final);
        assert_eq!(r.xi_n, r.statistic / r.kappa_n);
        assert_eq!(r.draws_summary.count, 99);
        assert_eq!(r.draws_summary.quantile_index, 95);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let x = Design::Piecewise.sample(150, &mut substream(6, 0));
        let cfg = TestConfig {
            b: 64,
            seed: 77,
            ..sup_cfg()
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_test(&x, &cfg).unwrap())
        };
        assert_eq!(run(1), run(8));
    }

    #[test]
    fn plain_bootstrap_ignores_floor() {
        let x = Design::HalfNormal.sample(100, &mut substream(2, 0));
        let cfg = TestConfig {
            b: 40,
            scheme: Scheme::Standard,
            kw_selection: false,
            ..sup_cfg()
        };
        let r = run_test(&x, &cfg).unwrap();
        assert_eq!(r.c_final, r.c_star);
    }

    #[test]
    fn invalid_config() {
        let x = [1.0, 2.0, 3.0];
        assert!(run_test(
            &x,
            &TestConfig {
                alpha: 1.0,
                ..sup_cfg()
            }
        )
        .is_err());
        assert!(run_test(&x, &TestConfig { b: 0, ..sup_cfg() }).is_err());
        assert!(run_test(
            &x,
            &TestConfig {
                p: 0.5,
                ..sup_cfg()
            }
        )
        .is_err());
        assert!(run_test(&[], &sup_cfg()).is_err());
    }
}
