use rand::Rng;
use shapetest::designs::{Design, F2T_MAX};
use shapetest::piecewise::ecdf;
use shapetest::rng::substream;

fn all_designs() -> Vec<Design> {
    vec![
        Design::HalfNormal,
        Design::Piecewise,
        Design::half_normal_path(0.5).unwrap(),
        Design::half_normal_path(3.0).unwrap(),
        Design::piecewise_path(0.1).unwrap(),
        Design::piecewise_path(F2T_MAX).unwrap(),
        Design::compare1(-2.0).unwrap(),
        Design::compare1(0.0).unwrap(),
        Design::compare1(1.0).unwrap(),
        Design::compare2(0.3).unwrap(),
        Design::compare2(0.8).unwrap(),
        Design::exponential(1.0).unwrap(),
        Design::exponential(2.5).unwrap(),
    ]
}

/// Density discontinuities, so that the trapezoid rule never straddles one.
fn breaks(d: &Design) -> Vec<f64> {
    match d {
        Design::Piecewise | Design::PiecewisePath { .. } => vec![0.5, 0.9],
        Design::Compare2 { lambda } => vec![*lambda],
        _ => vec![],
    }
}

#[test]
fn quantile_cdf_round_trip() {
    for d in all_designs() {
        let mut rng = substream(21, 0);
        for _ in 0..1000 {
            let u: f64 = rng.random_range(0.0..1.0);
            let x = d.quantile(u).unwrap();
            assert!((d.cdf(x).unwrap() - u).abs() <= 1e-10, "{d:?} u={u}");
        }
    }
}

#[test]
fn densities_integrate_to_one() {
    for d in all_designs() {
        let end = if d.support_end().is_finite() {
            d.support_end()
        } else {
            d.quantile(1.0 - 1e-15).unwrap()
        };
        let mut edges = vec![0.0];
        edges.extend(breaks(&d));
        edges.push(end);
        let mut total = 0.0;
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let cells = 200_000;
            let h = (b - a) / cells as f64;
            // one-sided values at the piece ends
            let pdf = |x: f64| d.pdf(x.clamp(a + 1e-12, b - 1e-12)).unwrap();
            let inner: f64 = (1..cells).map(|i| pdf(a + h * i as f64)).sum();
            total += h * (inner + 0.5 * (pdf(a) + pdf(b)));
        }
        assert!((total - 1.0).abs() <= 1e-6, "{d:?}: {total}");
    }
}

#[test]
fn dkw_goodness_of_fit() {
    let n = 10_000;
    let bound = 1.63 / (n as f64).sqrt();
    for d in all_designs() {
        let mut within = 0;
        for run in 0..100 {
            let x = d.sample(n, &mut substream(22, run));
            let f = ecdf(&x).unwrap();
            let gap = f
                .knots()
                .iter()
                .zip(f.values())
                .map(|(&k, &v)| {
                    let c = d.cdf(k).unwrap();
                    (v - c).abs().max((f.left_limit(k) - c).abs())
                })
                .fold(0.0, f64::max);
            if gap < bound {
                within += 1;
            }
        }
        assert!(within >= 99, "{d:?}: {within}/100");
    }
}

#[test]
fn compare1_curvature_sign() {
    for (lambda, concave) in [
        (-3.0, true),
        (-0.5, true),
        (0.0, true),
        (0.5, false),
        (2.0, false),
    ] {
        let d = Design::compare1(lambda).unwrap();
        assert_eq!(d.is_concave(), concave);
        let h = 1e-2;
        for i in 1..100 {
            let x = i as f64 * h;
            let second = d.cdf(x + h).unwrap() - 2.0 * d.cdf(x).unwrap() + d.cdf(x - h).unwrap();
            if lambda < 0.0 {
                assert!(second < 0.0, "lambda {lambda} x {x}");
            } else if lambda > 0.0 {
                assert!(second > 0.0, "lambda {lambda} x {x}");
            } else {
                assert!(second.abs() < 1e-14);
            }
        }
    }
}
