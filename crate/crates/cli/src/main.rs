mod input;
mod settings;

use std::io::Write;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};
use serde_json::{json, Value};
use shapetest::conctest::{run_test, Scheme, SupEval, TestConfig, TestReport, TuningRule};
use shapetest::designs::Design;
use shapetest::harness::{
    rate_check, run_experiment, with_thread_pool, ExperimentKind, ExperimentSpec, Table,
};
use shapetest::piecewise::WeightSpec;
use shapetest::shapext::{
    hazard_test, regress_test, DegeneracyRate, HazardConfig, RegressionSample,
};
use shapetest::Error;

use settings::{parse_order, Settings};

/// Version of the JSON report layout.
const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptyInput
            | Error::DomainViolation(_)
            | Error::Malformed(_)
            | Error::DegenerateInterval(..)
            | Error::InvalidResample { .. } => CliError::Data(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
        }
    }
}

fn opt(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).value_name("VALUE").help(help)
}

fn switch(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .action(ArgAction::SetTrue)
        .help(help)
}

fn config_arg() -> Arg {
    opt(
        "config",
        "Flat key=value file; command-line flags take precedence",
    )
}

fn test_args() -> Vec<Arg> {
    vec![
        opt("p", "Norm order, a number >= 1 or inf [default: inf]"),
        opt(
            "weight",
            "Weight for p < inf: exp[:rate] or uniform:<upper> [default: exp:1]",
        ),
        opt("alpha", "Nominal level [default: 0.05]"),
        opt("B", "Bootstrap repetitions [default: 500]"),
        opt(
            "kappa",
            "Floor rule kappa_n: n<k>, pow:<e> or log [default: n7]",
        ),
        opt("tn", "Step rule t_n: n<k>, pow:<e> or log [default: n5]"),
        opt("scheme", "rescaled or standard [default: rescaled]"),
        opt(
            "sup",
            "Sup evaluation: exact or observations [default: exact]",
        ),
        opt("seed", "Bootstrap seed [default: 0]"),
        opt("out", "Write the JSON report here instead of stdout"),
        switch("exit-on-reject", "Exit with status 3 when the test rejects"),
        config_arg(),
    ]
}

fn sample_input() -> Vec<Arg> {
    vec![
        opt(
            "input",
            "Sample file: one value per line, or a CSV with --column ('-' reads stdin)",
        ),
        opt("column", "CSV column holding the sample"),
    ]
}

fn cli() -> Command {
    Command::new("shapetest")
        .about("Bootstrap tests of concavity, monotone hazard and monotone regression")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .subcommand(
            Command::new("test")
                .about("Test concavity of the distribution function of a sample")
                .args(sample_input())
                .args(test_args()),
        )
        .subcommand(
            Command::new("hazard-test")
                .about("Test for a nondecreasing hazard rate on [0, end]")
                .args(sample_input())
                .arg(opt(
                    "end",
                    "Right end of the testing interval [default: 0.95 sample quantile]",
                ))
                .arg(opt(
                    "s-power",
                    "Degeneracy rate exponent of n [default: 2/3]",
                ))
                .arg(opt(
                    "s-log-power",
                    "Degeneracy rate exponent of log n [default: 1]",
                ))
                .args(test_args()),
        )
        .subcommand(
            Command::new("regress-test")
                .about("Test for a nondecreasing regression function from z,y pairs")
                .arg(opt(
                    "input",
                    "Two-column CSV of z,y pairs ('-' reads stdin)",
                ))
                .args(test_args()),
        )
        .subcommand(
            Command::new("simulate")
                .about("Run a Monte Carlo rejection-rate experiment and write a CSV table")
                .args([
                    opt(
                        "experiment",
                        "size-pointwise, size-local, compare1, compare2 or rate",
                    ),
                    opt(
                        "design",
                        "Null design or path base: f1, f2, exp[:rate], ...",
                    ),
                    opt(
                        "params",
                        "Comma list of eta (size-local) or lambda (comparisons)",
                    ),
                    opt("ns", "Comma list of sample sizes").alias("n"),
                    opt("reps", "Monte Carlo replications [default: 500]"),
                    opt("B", "Bootstrap repetitions [default: 300]"),
                    opt("alpha", "Nominal level [default: 0.05]"),
                    opt("p", "Norm order [default: inf]"),
                    opt("weight", "Weight for p < inf [default: exp:1]"),
                    opt("kappa", "Comma list of floor rules [default: n7,n8,log]"),
                    opt("tn", "Comma list of step rules [default: n3,n4,n5,n6,n7]"),
                    opt(
                        "standard",
                        "Add the standard-bootstrap column: true or false",
                    ),
                    opt("sup", "Sup evaluation: exact or observations"),
                    opt("seed", "Master seed [default: 0]"),
                    opt("out", "Write the CSV here instead of stdout"),
                    switch(
                        "full-scale",
                        "Use R = 1000 and B = 500 unless given explicitly",
                    ),
                    config_arg(),
                ]),
        )
        .subcommand(
            Command::new("rate")
                .about("Estimate the convergence rate of the Grenander distribution estimator")
                .args([
                    opt("design", "Concave design [default: exp]"),
                    opt("ns", "Comma list of at least three sample sizes").alias("n"),
                    opt("reps", "Replications per n [default: 200]"),
                    opt("seed", "Master seed [default: 0]"),
                    opt("out", "Write the per-n CSV here instead of stdout"),
                    config_arg(),
                ]),
        )
}

fn known_keys(cmd: &Command, name: &str) -> Vec<String> {
    cmd.find_subcommand(name)
        .map(|c| c.get_arguments().map(|a| a.get_id().to_string()).collect())
        .unwrap_or_default()
}

fn test_config(s: &Settings) -> Result<TestConfig, CliError> {
    let mut cfg = TestConfig::default();
    if let Some(p) = s.raw("p") {
        cfg.p = parse_order(p)?;
    }
    if let Some(w) = s.raw("weight") {
        cfg.weight = WeightSpec::parse(w).map_err(|e| CliError::Usage(format!("--weight: {e}")))?;
    }
    if let Some(a) = s.get("alpha")? {
        cfg.alpha = a;
    }
    if let Some(b) = s.get("B")? {
        cfg.b = b;
    }
    if let Some(k) = s.get::<TuningRule>("kappa")? {
        cfg.kappa_rule = k;
    }
    if let Some(t) = s.get::<TuningRule>("tn")? {
        cfg.t_rule = t;
    }
    if let Some(sc) = s.get::<Scheme>("scheme")? {
        cfg.scheme = sc;
    }
    if let Some(sup) = s.get::<SupEval>("sup")? {
        cfg.sup = sup;
    }
    if let Some(seed) = s.get("seed")? {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(s: &Settings, body: &str) -> Result<(), CliError> {
    match s.raw("out") {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| CliError::Data(format!("{path}: {e}")))
        }
        None => {
            print!("{body}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn emit_report(s: &Settings, test: &str, report: &TestReport) -> Result<u8, CliError> {
    let mut v = serde_json::to_value(report).map_err(|e| CliError::Data(e.to_string()))?;
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("test".into(), json!(test));
    }
    let body = serde_json::to_string_pretty(&v).map_err(|e| CliError::Data(e.to_string()))? + "\n";
    write_out(s, &body)?;
    Ok(if report.reject && s.flag("exit-on-reject")? {
        3
    } else {
        0
    })
}

fn required<'a>(s: &'a Settings, key: &str) -> Result<&'a str, CliError> {
    s.raw(key)
        .ok_or_else(|| CliError::Usage(format!("--{key} is required")))
}

fn cmd_test(s: &Settings) -> Result<u8, CliError> {
    let cfg = test_config(s)?;
    let x = input::read_sample(required(s, "input")?, s.raw("column"))?;
    let report = run_test(&x, &cfg)?;
    emit_report(s, "concavity", &report)
}

fn cmd_hazard(s: &Settings) -> Result<u8, CliError> {
    let mut hcfg = HazardConfig {
        base: test_config(s)?,
        b: s.get("end")?,
        s_rule: DegeneracyRate::default(),
    };
    if let Some(v) = s.get("s-power")? {
        hcfg.s_rule.power = v;
    }
    if let Some(v) = s.get("s-log-power")? {
        hcfg.s_rule.log_power = v;
    }
    hcfg.validate()?;
    let x = input::read_sample(required(s, "input")?, s.raw("column"))?;
    let report = hazard_test(&x, &hcfg)?;
    emit_report(s, "hazard", &report)
}

fn cmd_regress(s: &Settings) -> Result<u8, CliError> {
    let cfg = test_config(s)?;
    let (z, y) = input::read_pairs(required(s, "input")?)?;
    let rs = RegressionSample::new(&z, &y).map_err(|e| CliError::Data(e.to_string()))?;
    let report = regress_test(&rs, &cfg)?;
    emit_report(s, "regression", &report)
}

fn table_csv(t: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Data(e.to_string());
    w.write_record(t.header()).map_err(fail)?;
    for row in &t.rows {
        let fields = row
            .labels
            .iter()
            .cloned()
            .chain(row.values.iter().map(|v| v.to_string()));
        w.write_record(fields.collect::<Vec<_>>()).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Data(e.to_string()))
}

fn design(s: &Settings) -> Result<Option<Design>, CliError> {
    s.raw("design")
        .map(|d| Design::parse(d).map_err(|e| CliError::Usage(format!("--design {d:?}: {e}"))))
        .transpose()
}

fn cmd_simulate(s: &Settings) -> Result<u8, CliError> {
    let kind: ExperimentKind = required(s, "experiment")?.parse()?;
    let mut spec = ExperimentSpec::new(kind);
    if s.flag("full-scale")? {
        spec = spec.full_scale();
    }
    if let Some(d) = design(s)? {
        spec.design = d;
    }
    if let Some(v) = s.list("params")? {
        spec.params = v;
    }
    if let Some(v) = s.list("ns")? {
        spec.ns = v;
    }
    if let Some(v) = s.get("reps")? {
        spec.reps = v;
    }
    if let Some(v) = s.get("B")? {
        spec.b = v;
    }
    if let Some(v) = s.get("alpha")? {
        spec.alpha = v;
    }
    if let Some(p) = s.raw("p") {
        spec.p = parse_order(p)?;
    }
    if let Some(w) = s.raw("weight") {
        spec.weight =
            WeightSpec::parse(w).map_err(|e| CliError::Usage(format!("--weight: {e}")))?;
    }
    if let Some(v) = s.list("kappa")? {
        spec.kappa_rules = v;
    }
    if let Some(v) = s.list("tn")? {
        spec.t_rules = v;
    }
    if let Some(v) = s.get("standard")? {
        spec.standard = v;
    }
    if let Some(v) = s.get("sup")? {
        spec.sup = v;
    }
    if let Some(v) = s.get("seed")? {
        spec.seed = v;
    }
    spec.validate()?;
    let table = with_thread_pool(|| run_experiment(&spec))??;
    write_out(s, &table_csv(&table)?)?;
    Ok(0)
}

fn cmd_rate(s: &Settings) -> Result<u8, CliError> {
    let design = design(s)?.unwrap_or(Design::Exponential { rate: 1.0 });
    let ns: Vec<usize> = s
        .list("ns")?
        .unwrap_or_else(|| vec![500, 1000, 2000, 4000, 8000]);
    let reps = s.get("reps")?.unwrap_or(200);
    let seed = s.get("seed")?.unwrap_or(0);
    let report = with_thread_pool(|| rate_check(&design, &ns, reps, seed))??;
    let csv = table_csv(&report.table())?;
    match s.raw("out") {
        Some(_) => write_out(s, &csv)?,
        None => print!("{csv}"),
    }
    println!("slope={}", report.slope);
    println!("ci={},{}", report.ci.0, report.ci.1);
    Ok(0)
}

fn run(m: &ArgMatches, cmd: &Command) -> Result<u8, CliError> {
    let (name, sub) = m.subcommand().expect("subcommand is required");
    let known = known_keys(cmd, name);
    let known: Vec<&str> = known.iter().map(String::as_str).collect();
    let s = Settings::from_matches(sub, &known)?;
    match name {
        "test" => cmd_test(&s),
        "hazard-test" => cmd_hazard(&s),
        "regress-test" => cmd_regress(&s),
        "simulate" => cmd_simulate(&s),
        "rate" => cmd_rate(&s),
        _ => unreachable!("clap rejects unknown subcommands"),
    }
}

fn main() -> ExitCode {
    let cmd = cli();
    let matches = match cmd.clone().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(&matches, &cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("shapetest: {e}");
            ExitCode::from(e.code())
        }
    }
}
