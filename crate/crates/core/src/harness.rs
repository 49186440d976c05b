//! Monte Carlo experiments: rejection-rate tables and the convergence-rate
//! check for the Grenander estimator.
//!
//! Every replicate draws its data from a stream keyed by the master seed,
//! the experiment, the cell coordinates and the replicate index. All tuning
//! rules in a table share the same samples and the same bootstrap weights,
//! so differences between columns are not Monte Carlo noise between
//! independent datasets.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::conctest::{
    bootstrap_draws, bootstrap_quantile, rescaled_with_base, standard_with_base, statistic_from,
    EmpiricalSample, Scheme, SupEval, TestConfig, TuningRule,
};
use crate::designs::{local_path, Design, LocalPath, PathBase};
use crate::error::{Error, Result};
use crate::majorant::lcm_halfline;
use crate::piecewise::{ecdf, sup_diff, WeightSpec};
use crate::rng::{label_id, mix, substream};

/// Environment variable that fixes the worker-pool size.
pub const THREADS_ENV: &str = "SHAPE_TEST_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SizePointwise,
    SizeLocal,
    Compare1,
    Compare2,
    Rate,
}

impl ExperimentKind {
    pub fn id(&self) -> &'static str {
        match self {
            ExperimentKind::SizePointwise => "size-pointwise",
            ExperimentKind::SizeLocal => "size-local",
            ExperimentKind::Compare1 => "compare1",
            ExperimentKind::Compare2 => "compare2",
            ExperimentKind::Rate => "rate",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "size-pointwise" => ExperimentKind::SizePointwise,
            "size-local" => ExperimentKind::SizeLocal,
            "compare1" => ExperimentKind::Compare1,
            "compare2" => ExperimentKind::Compare2,
            "rate" => ExperimentKind::Rate,
            _ => return Err(Error::InvalidConfig(format!("unknown experiment {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// Null design for the size experiments, and the path base for
    /// `size-local`. Ignored by the comparison experiments.
    pub design: Design,
    /// `eta` for `size-local`, `lambda` for the comparisons.
    pub params: Vec<f64>,
    pub ns: Vec<usize>,
    pub reps: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub alpha: f64,
    pub p: f64,
    pub weight: WeightSpec,
    pub kappa_rules: Vec<TuningRule>,
    pub t_rules: Vec<TuningRule>,
    /// Add the plain standard-bootstrap column.
    pub standard: bool,
    pub sup: SupEval,
    pub seed: u64,
}

impl ExperimentSpec {
    /// Desk-scale defaults (`R = 500`, `B = 300`) over the full tuning grid.
    pub fn new(kind: ExperimentKind) -> Self {
        let (design, params, standard) = match kind {
            ExperimentKind::SizePointwise => (Design::Piecewise, vec![], true),
            ExperimentKind::SizeLocal => (Design::Piecewise, vec![1.0], true),
            ExperimentKind::Compare1 => (Design::Compare1 { lambda: 1.0 }, vec![1.0], false),
            ExperimentKind::Compare2 => (Design::Compare2 { lambda: 0.3 }, vec![0.3], false),
            ExperimentKind::Rate => (Design::Exponential { rate: 1.0 }, vec![], false),
        };
        Self {
            kind,
            design,
            params,
            ns: vec![100],
            reps: 500,
            b: 300,
            alpha: 0.05,
            p: f64::INFINITY,
            weight: WeightSpec::default(),
            kappa_rules: vec![
                TuningRule::root(7.0),
                TuningRule::root(8.0),
                TuningRule::InvLog,
            ],
            t_rules: (3..=7).map(|k| TuningRule::root(k as f64)).collect(),
            standard,
            sup: SupEval::Exact,
            seed: 0,
        }
    }

    /// Full scale, `R = 1000` and `B = 500`.
    pub fn full_scale(mut self) -> Self {
        self.reps = 1000;
        self.b = 500;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.reps == 0 {
            return bad("reps must be at least 1");
        }
        if self.ns.is_empty() {
            return bad("empty n grid");
        }
        if self.kind != ExperimentKind::Rate {
            if self.kappa_rules.is_empty() && self.t_rules.is_empty() && !self.standard {
                return bad("no tuning rules and no standard column");
            }
            if self.kappa_rules.is_empty() && !self.t_rules.is_empty() {
                return bad("t rules need at least one kappa rule");
            }
            self.test_config(Scheme::Rescaled).validate()?;
        }
        match self.kind {
            ExperimentKind::SizeLocal
                if !matches!(self.design, Design::HalfNormal | Design::Piecewise) =>
            {
                return bad("size-local takes design f1 or f2 as the path base");
            }
            ExperimentKind::SizeLocal | ExperimentKind::Compare1 | ExperimentKind::Compare2
                if self.params.is_empty() =>
            {
                return bad("empty parameter grid");
            }
            _ => {}
        }
        for &n in &self.ns {
            if n < 2 {
                return bad("sample sizes must be at least 2");
            }
            for r in self.kappa_rules.iter().chain(&self.t_rules) {
                r.eval(n)?;
            }
            for d in self.designs_at(n)? {
                d.validated()?;
            }
        }
        Ok(())
    }

    fn test_config(&self, scheme: Scheme) -> TestConfig {
        TestConfig {
            p: self.p,
            weight: self.weight.clone(),
            alpha: self.alpha,
            b: self.b.max(1),
            scheme,
            sup: self.sup,
            seed: self.seed,
            ..TestConfig::default()
        }
    }

    /// `(param, design)` for every parameter value at sample size `n`.
    fn designs_at(&self, n: usize) -> Result<Vec<Design>> {
        match self.kind {
            ExperimentKind::SizePointwise | ExperimentKind::Rate => Ok(vec![self.design]),
            ExperimentKind::SizeLocal => {
                let base = match self.design {
                    Design::HalfNormal => PathBase::HalfNormal,
                    _ => PathBase::Piecewise,
                };
                self.params
                    .iter()
                    .map(|&eta| local_path(&LocalPath { base, eta }, n))
                    .collect()
            }
            ExperimentKind::Compare1 => self.params.iter().map(|&l| Design::compare1(l)).collect(),
            ExperimentKind::Compare2 => self.params.iter().map(|&l| Design::compare2(l)).collect(),
        }
    }
}

/// Rejection-fraction table. Each row has leading label cells followed by
/// one value per value column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub label_columns: Vec<String>,
    pub value_columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

impl Table {
    pub fn header(&self) -> Vec<String> {
        self.label_columns
            .iter()
            .chain(&self.value_columns)
            .cloned()
            .collect()
    }

    /// Value in the row whose labels equal `labels`, column `column`.
    pub fn get(&self, labels: &[&str], column: &str) -> Option<f64> {
        let j = self.value_columns.iter().position(|c| c == column)?;
        self.rows
            .iter()
            .find(|r| {
                r.labels
                    .iter()
                    .map(String::as_str)
                    .eq(labels.iter().copied())
            })
            .map(|r| r.values[j])
    }
}

/// Label used for a rescaled test in the comparison tables: `R37` is
/// `t = n^{-1/3}`, `kappa = n^{-1/7}`; `L` stands for the `1/log n` floor.
pub fn test_label(t: TuningRule, kappa: TuningRule) -> String {
    let part = |r: TuningRule| match r {
        TuningRule::InvLog => "L".to_string(),
        TuningRule::Power(e) => {
            let k = 1.0 / e;
            if (k - k.round()).abs() < 1e-9 {
                format!("{}", k.round() as i64)
            } else {
                format!("({e})")
            }
        }
    };
    format!("R{}{}", part(t), part(kappa))
}

fn format_param(x: f64) -> String {
    format!("{x}")
}

/// Decisions of one replicate: `[t][kappa]` for the rescaled scheme, then
/// the standard decision.
struct ReplicateOutcome {
    rescaled: Vec<Vec<bool>>,
    standard: Option<bool>,
}

fn replicate(sample: &[f64], spec: &ExperimentSpec, boot_seed: u64) -> Result<ReplicateOutcome> {
    let cfg = spec.test_config(Scheme::Rescaled);
    let s = EmpiricalSample::new(sample)?;
    let n = s.n();
    let base = lcm_halfline(s.ecdf()).hull;
    let stat = statistic_from(&s, &base, &cfg)?;
    let kappas: Vec<f64> = spec
        .kappa_rules
        .iter()
        .map(|r| r.eval(n))
        .collect::<Result<_>>()?;
    let mut rescaled = Vec::with_capacity(spec.t_rules.len());
    for rule in &spec.t_rules {
        let t_n = rule.eval(n)?;
        let draws = bootstrap_draws(spec.b, boot_seed, |rng| {
            let w = s.resample_counts(rng);
            rescaled_with_base(&s, &base, &w, &cfg, t_n)
        })?;
        let (c_star, _) = bootstrap_quantile(&draws, spec.alpha)?;
        rescaled.push(kappas.iter().map(|&k| stat > k.max(c_star)).collect());
    }
    let standard = if spec.standard {
        let draws = bootstrap_draws(spec.b, boot_seed, |rng| {
            let w = s.resample_counts(rng);
            standard_with_base(&s, &base, &w, &cfg)
        })?;
        let (c_star, _) = bootstrap_quantile(&draws, spec.alpha)?;
        Some(stat > c_star)
    } else {
        None
    };
    Ok(ReplicateOutcome { rescaled, standard })
}

/// Rejection fractions over `reps` replicates for one `(design, n)` cell:
/// `[t][kappa]` and the standard column.
fn run_cell(
    spec: &ExperimentSpec,
    design: &Design,
    param_index: usize,
    n: usize,
) -> Result<(Vec<Vec<f64>>, Option<f64>)> {
    let kind = label_id(spec.kind.id());
    let outcomes: Vec<ReplicateOutcome> = (0..spec.reps as u64)
        .into_par_iter()
        .map(|r| {
            let cell = mix(&[spec.seed, kind, param_index as u64, n as u64, r]);
            let sample = design.sample(n, &mut substream(cell, 0));
            replicate(&sample, spec, mix(&[cell, 1]))
        })
        .collect::<Result<_>>()?;
    let reps = spec.reps as f64;
    let frac = |count: usize| count as f64 / reps;
    let rescaled = (0..spec.t_rules.len())
        .map(|i| {
            (0..spec.kappa_rules.len())
                .map(|j| frac(outcomes.iter().filter(|o| o.rescaled[i][j]).count()))
                .collect()
        })
        .collect();
    let standard = spec
        .standard
        .then(|| frac(outcomes.iter().filter(|o| o.standard == Some(true)).count()));
    Ok((rescaled, standard))
}

/// Run every cell of `spec`.
///
/// Size experiments give rows `(n, kappa)` (prefixed by `eta` for local
/// size) and columns `t` plus `standard`. Comparison experiments give rows
/// `(n, test)` with test labels such as `R37` and one column per `lambda`.
/// The rate experiment gives one row per `n` with the median and mean sup
/// distance.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Table> {
    spec.validate()?;
    match spec.kind {
        ExperimentKind::Rate => {
            let r = rate_check(&spec.design, &spec.ns, spec.reps, spec.seed)?;
            Ok(r.table())
        }
        ExperimentKind::SizePointwise | ExperimentKind::SizeLocal => size_table(spec),
        ExperimentKind::Compare1 | ExperimentKind::Compare2 => compare_table(spec),
    }
}

fn size_table(spec: &ExperimentSpec) -> Result<Table> {
    let local = spec.kind == ExperimentKind::SizeLocal;
    let mut label_columns = vec!["n".to_string(), "kappa".to_string()];
    if local {
        label_columns.insert(0, "eta".to_string());
    }
    let mut value_columns: Vec<String> = spec.t_rules.iter().map(|r| r.label()).collect();
    if spec.standard {
        value_columns.push("standard".to_string());
    }
    let params: Vec<Option<f64>> = if local {
        spec.params.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let mut rows = Vec::new();
    for (pi, param) in params.iter().enumerate() {
        for &n in &spec.ns {
            let design = spec.designs_at(n)?[pi];
            let (rescaled, standard) = run_cell(spec, &design, pi, n)?;
            let kappa_rows: Vec<Option<TuningRule>> = if spec.kappa_rules.is_empty() {
                vec![None]
            } else {
                spec.kappa_rules.iter().copied().map(Some).collect()
            };
            for (j, kappa) in kappa_rows.iter().enumerate() {
                let mut labels = vec![n.to_string(), kappa.map_or("-".into(), |k| k.label())];
                if let Some(eta) = param {
                    labels.insert(0, format_param(*eta));
                }
                let mut values: Vec<f64> = rescaled.iter().map(|col| col[j]).collect();
                values.extend(standard);
                rows.push(TableRow { labels, values });
            }
        }
    }
    Ok(Table {
        label_columns,
        value_columns,
        rows,
    })
}

fn compare_table(spec: &ExperimentSpec) -> Result<Table> {
    let label_columns = vec!["n".to_string(), "test".to_string()];
    let value_columns: Vec<String> = spec.params.iter().map(|&l| format_param(l)).collect();
    let mut rows = Vec::new();
    for &n in &spec.ns {
        let designs = spec.designs_at(n)?;
        let mut cells = Vec::with_capacity(designs.len());
        for (pi, d) in designs.iter().enumerate() {
            cells.push(run_cell(spec, d, pi, n)?);
        }
        for (i, &t) in spec.t_rules.iter().enumerate() {
            for (j, &k) in spec.kappa_rules.iter().enumerate() {
                rows.push(TableRow {
                    labels: vec![n.to_string(), test_label(t, k)],
                    values: cells.iter().map(|(r, _)| r[i][j]).collect(),
                });
            }
        }
        if spec.standard {
            rows.push(TableRow {
                labels: vec![n.to_string(), "standard".to_string()],
                values: cells.iter().map(|(_, s)| s.unwrap_or(f64::NAN)).collect(),
            });
        }
    }
    Ok(Table {
        label_columns,
        value_columns,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub ns: Vec<usize>,
    pub medians: Vec<f64>,
    pub means: Vec<f64>,
    /// Least-squares slope of `log median` on `log n`.
    pub slope: f64,
    /// 95% percentile interval for the slope from resampling replicates
    /// within each `n`.
    pub ci: (f64, f64),
}

impl RateReport {
    pub fn table(&self) -> Table {
        Table {
            label_columns: vec!["n".to_string()],
            value_columns: vec!["median".to_string(), "mean".to_string()],
            rows: self
                .ns
                .iter()
                .zip(self.medians.iter().zip(&self.means))
                .map(|(n, (&md, &mn))| TableRow {
                    labels: vec![n.to_string()],
                    values: vec![md, mn],
                })
                .collect(),
        }
    }
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

const RATE_RESAMPLES: usize = 400;

/// `||M F_n - F_n||_inf` over `reps` samples at each `n`, with the log-log
/// slope of the medians against `n`.
pub fn rate_check(design: &Design, ns: &[usize], reps: usize, seed: u64) -> Result<RateReport> {
    if ns.len() < 3 {
        return Err(Error::InvalidConfig(
            "rate check needs at least 3 sample sizes".into(),
        ));
    }
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1".into()));
    }
    if !design.is_concave() {
        return Err(Error::InvalidConfig(format!(
            "design {} is not concave",
            design.id()
        )));
    }
    let kind = label_id("rate");
    let mut samples: Vec<Vec<f64>> = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 2 {
            return Err(Error::InvalidConfig(
                "sample sizes must be at least 2".into(),
            ));
        }
        let dists = (0..reps as u64)
            .into_par_iter()
            .map(|r| {
                let x = design.sample(n, &mut substream(mix(&[seed, kind, n as u64, r]), 0));
                let f = ecdf(&x)?;
                Ok(sup_diff(&lcm_halfline(&f).hull, &f))
            })
            .collect::<Result<Vec<f64>>>()?;
        samples.push(dists);
    }
    let log_n: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let medians: Vec<f64> = samples.iter().map(|d| median(&mut d.clone())).collect();
    let means: Vec<f64> = samples
        .iter()
        .map(|d| d.iter().sum::<f64>() / d.len() as f64)
        .collect();
    if medians.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::InvalidConfig("a median sup distance is zero".into()));
    }
    let slope = ols_slope(&log_n, &medians.iter().map(|m| m.ln()).collect::<Vec<_>>());

    let mut slopes: Vec<f64> = (0..RATE_RESAMPLES as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(mix(&[seed, kind, u64::MAX, b]), 0);
            let logs: Vec<f64> = samples
                .iter()
                .map(|d| {
                    let mut re: Vec<f64> = (0..d.len())
                        .map(|_| d[rand::Rng::random_range(&mut rng, 0..d.len())])
                        .collect();
                    median(&mut re).max(f64::MIN_POSITIVE).ln()
                })
                .collect();
            ols_slope(&log_n, &logs)
        })
        .collect();
    slopes.sort_by(f64::total_cmp);
    let at = |q: f64| slopes[((q * RATE_RESAMPLES as f64) as usize).min(RATE_RESAMPLES - 1)];
    Ok(RateReport {
        ns: ns.to_vec(),
        medians,
        means,
        slope,
        ci: (at(0.025), at(0.975)),
    })
}

/// Run `f` in a pool sized by [`THREADS_ENV`] if it is set, otherwise in
/// the global pool.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let threads: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV}={v:?}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}
