//! Oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use rand::Rng;
use shapetest::designs::Design;
use shapetest::majorant::{lcm_halfline, lcm_interval};
use shapetest::piecewise::{ecdf, PiecewiseLinear, StepFunction};
use shapetest::rng::{substream, StreamRng};

pub fn random_step(rng: &mut StreamRng, max_knots: usize, monotone: bool) -> StepFunction {
    let k = rng.random_range(1..=max_knots);
    let mut knots: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..10.0)).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut values: Vec<f64> = (0..knots.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let mut base: f64 = rng.random_range(-1.0..1.0);
    if monotone {
        values.sort_by(f64::total_cmp);
        base = base.min(values[0]);
    }
    StepFunction::new(knots, values, base).unwrap()
}

/// Points a concave majorant must lie above: every value and every left
/// limit inside the domain.
pub fn constraint_points(f: &StepFunction, a: f64, b: Option<f64>) -> Vec<(f64, f64)> {
    let mut pts = vec![(a, f.eval(a))];
    for &x in f.knots() {
        if x > a && b.is_none_or(|b| x <= b) {
            pts.push((x, f.left_limit(x)));
            if b.is_none_or(|b| x < b) {
                pts.push((x, f.eval(x)));
            }
        }
    }
    if let Some(b) = b {
        pts.push((b, f.left_limit(b)));
        pts.push((b, f.eval(b)));
    }
    pts
}

/// Pointwise infimum over all lines through two constraint points that lie
/// above every constraint point. On the half line only nonnegative slopes
/// are admissible (the majorant is bounded), and the horizontal line at the
/// maximum is added.
pub fn chord_oracle(pts: &[(f64, f64)], halfline: bool, grid: &[f64]) -> Vec<f64> {
    let mut lines = Vec::new();
    for (i, &(x0, y0)) in pts.iter().enumerate() {
        for &(x1, y1) in &pts[i + 1..] {
            if x1 == x0 {
                continue;
            }
            let s = (y1 - y0) / (x1 - x0);
            if halfline && s < 0.0 {
                continue;
            }
            if pts.iter().all(|&(x, y)| y0 + s * (x - x0) >= y - 1e-12) {
                lines.push((x0, y0, s));
            }
        }
    }
    let top = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    lines.push((0.0, top, 0.0));
    grid.iter()
        .map(|&x| {
            lines
                .iter()
                .map(|&(x0, y0, s)| y0 + s * (x - x0))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

pub fn grid(a: f64, b: f64, f: &StepFunction, m: &PiecewiseLinear) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=400).map(|i| a + (b - a) * i as f64 / 400.0).collect();
    g.extend(f.knots().iter().copied().filter(|&x| x >= a && x <= b));
    g.extend(m.xs().iter().copied().filter(|&x| x >= a && x <= b));
    g
}

pub fn step_sup(f: &StepFunction, g: &StepFunction) -> f64 {
    let mut pts: Vec<f64> = f.knots().iter().chain(g.knots()).copied().collect();
    pts.push(0.0);
    pts.iter()
        .map(|&x| (f.eval(x) - g.eval(x)).abs())
        .fold(0.0, f64::max)
}

pub fn linear_sup(p: &PiecewiseLinear, q: &PiecewiseLinear) -> f64 {
    let pts: Vec<f64> = p.xs().iter().chain(q.xs()).copied().collect();
    pts.iter()
        .map(|&x| (p.eval(x) - q.eval(x)).abs())
        .fold(0.0, f64::max)
}

/// Largest hull-vs-oracle gap over `cases` random instances, on the half
/// line or on random intervals.
pub fn oracle_gap(seed: u64, cases: usize, interval: bool) -> f64 {
    let mut rng = substream(seed, 0);
    let mut worst = 0.0f64;
    for case in 0..cases {
        let (m, g, oracle) = if interval {
            let f = random_step(&mut rng, 50, false);
            let a = rng.random_range(0.0..3.0);
            let b = rng.random_range(6.0..10.5);
            let m = lcm_interval(&f, a, b).unwrap().hull;
            let g = grid(a, b, &f, &m);
            let o = chord_oracle(&constraint_points(&f, a, Some(b)), false, &g);
            (m, g, o)
        } else {
            let f = random_step(&mut rng, 50, case % 2 == 0);
            let m = lcm_halfline(&f).hull;
            let g = grid(0.0, 12.0, &f, &m);
            let o = chord_oracle(&constraint_points(&f, 0.0, None), true, &g);
            (m, g, o)
        };
        for (&x, &o) in g.iter().zip(&oracle) {
            worst = worst.max((m.eval(x) - o).abs());
        }
    }
    worst
}

/// Number of contraction violations over `cases` random step pairs.
pub fn contraction_violations(seed: u64, cases: usize) -> usize {
    let mut rng = substream(seed, 0);
    (0..cases)
        .filter(|case| {
            let f = random_step(&mut rng, 40, case % 3 == 0);
            let g = random_step(&mut rng, 40, case % 3 == 0);
            linear_sup(&lcm_halfline(&f).hull, &lcm_halfline(&g).hull) > step_sup(&f, &g)
        })
        .count()
}

pub const CONCAVE_DESIGNS: [Design; 5] = [
    Design::HalfNormal,
    Design::Piecewise,
    Design::Exponential { rate: 1.0 },
    Design::Compare1 { lambda: -2.0 },
    Design::Compare1 { lambda: 0.0 },
];

/// `(sup |hull - F|, sup |ecdf - F|)` for draw `run`; the first is taken
/// over a grid refining the hull vertices and the second exactly.
pub fn marshall_gaps(seed: u64, run: u64) -> (f64, f64) {
    let d = CONCAVE_DESIGNS[run as usize % CONCAVE_DESIGNS.len()];
    let n = 10 + (run as usize * 37) % 490;
    let x = d.sample(n, &mut substream(seed, run));
    let fn_ = ecdf(&x).unwrap();
    let hull = lcm_halfline(&fn_).hull;
    let mut ecdf_gap = 0.0f64;
    for (&k, &v) in fn_.knots().iter().zip(fn_.values()) {
        let fk = d.cdf(k).unwrap();
        ecdf_gap = ecdf_gap
            .max((v - fk).abs())
            .max((fn_.left_limit(k) - fk).abs());
    }
    let mut pts: Vec<f64> = fn_.knots().to_vec();
    pts.push(0.0);
    for w in hull.xs().windows(2) {
        pts.extend((1..20).map(|i| w[0] + (w[1] - w[0]) * i as f64 / 20.0));
    }
    let last = *hull.xs().last().unwrap();
    pts.extend((1..=20).map(|i| last * (1.0 + i as f64 / 10.0)));
    let hull_gap = pts
        .iter()
        .map(|&x| (hull.eval(x) - d.cdf(x).unwrap()).abs())
        .fold(0.0, f64::max);
    (hull_gap, ecdf_gap)
}
