mod common;

use common::*;
use shapetest::majorant::lcm_halfline;
use shapetest::piecewise::StepFunction;
use shapetest::rng::substream;

#[test]
fn halfline_hull_matches_chord_oracle() {
    let gap = oracle_gap(11, 1000, false);
    assert!(gap <= 1e-12, "{gap}");
}

#[test]
fn interval_hull_matches_chord_oracle() {
    let gap = oracle_gap(12, 1000, true);
    assert!(gap <= 1e-12, "{gap}");
}

#[test]
fn majorizes_values_and_left_limits() {
    let mut rng = substream(13, 0);
    for _ in 0..500 {
        let f = random_step(&mut rng, 50, false);
        let m = lcm_halfline(&f).hull;
        for &x in f.knots() {
            assert!(m.eval(x) >= f.eval(x));
            assert!(m.eval(x) >= f.left_limit(x));
        }
        let s = m.slopes();
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        assert!(s.iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn idempotent_on_its_own_hull() {
    let mut rng = substream(14, 0);
    for _ in 0..300 {
        let f = random_step(&mut rng, 50, true);
        let m = lcm_halfline(&f).hull;
        let last = *m.xs().last().unwrap();
        let mut knots: Vec<f64> = (1..=500).map(|i| last * i as f64 / 500.0).collect();
        knots.extend(m.xs().iter().copied().filter(|&x| x > 0.0));
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let values = knots.iter().map(|&x| m.eval(x)).collect();
        let fine = StepFunction::new(knots, values, m.eval(0.0)).unwrap();
        let again = lcm_halfline(&fine).hull;
        for x in grid(0.0, last * 1.1, &fine, &again) {
            assert!((again.eval(x) - m.eval(x)).abs() <= 1e-12);
        }
    }
}

#[test]
fn sup_norm_contraction() {
    assert_eq!(contraction_violations(15, 1000), 0);
}

#[test]
fn marshall_lemma() {
    for run in 0..1000 {
        let (hull_gap, ecdf_gap) = marshall_gaps(16, run);
        assert!(hull_gap <= ecdf_gap, "run {run}: {hull_gap} > {ecdf_gap}");
    }
}
