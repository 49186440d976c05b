//! Simulation distributions on the half line.
//!
//! | id     | design                                   | null? |
//! |--------|------------------------------------------|-------|
//! | `f1`   | half-normal                              | strictly concave cdf |
//! | `f2`   | three-piece density, flat then exponential | concave, not strictly |
//! | `f1t`  | half-normal tilted by `exp(-t x)`         | strictly concave |
//! | `f2t`  | three-piece density with masses moved by `t` | concave, not strictly |
//! | `cmp1` | `(e^{lx} - 1)/(e^l - 1)` on `[0, 1]`       | iff `l <= 0` |
//! | `cmp2` | quadratic then uniform on `[0, 1]`        | never |
//! | `exp`  | exponential                              | strictly concave |

use std::f64::consts::{FRAC_2_SQRT_PI, SQRT_2};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use statrs::function::erf::{erf, erfc};

use crate::error::{Error, Result};

/// Largest `t` for which the `f2t` density stays nonincreasing
/// (`e^{2t} <= 3`).
pub const F2T_MAX: f64 = 0.549_306_144_334_054_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "id", rename_all = "lowercase")]
pub enum Design {
    #[serde(rename = "f1")]
    HalfNormal,
    #[serde(rename = "f2")]
    Piecewise,
    #[serde(rename = "f1t")]
    HalfNormalPath { t: f64 },
    #[serde(rename = "f2t")]
    PiecewisePath { t: f64 },
    #[serde(rename = "cmp1")]
    Compare1 { lambda: f64 },
    #[serde(rename = "cmp2")]
    Compare2 { lambda: f64 },
    #[serde(rename = "exp")]
    Exponential { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Cdf,
    Pdf,
    PdfDeriv,
    Quantile,
}

impl Design {
    pub fn half_normal_path(t: f64) -> Result<Self> {
        Self::HalfNormalPath { t }.validated()
    }

    pub fn piecewise_path(t: f64) -> Result<Self> {
        Self::PiecewisePath { t }.validated()
    }

    pub fn compare1(lambda: f64) -> Result<Self> {
        Self::Compare1 { lambda }.validated()
    }

    pub fn compare2(lambda: f64) -> Result<Self> {
        Self::Compare2 { lambda }.validated()
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::Exponential { rate }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            Design::HalfNormalPath { t } if !(t >= 0.0 && t.is_finite()) => {
                Err(Error::PathLeavesModel(t))
            }
            Design::PiecewisePath { t } if !(0.0..=F2T_MAX).contains(&t) => {
                Err(Error::PathLeavesModel(t))
            }
            Design::Compare1 { lambda } if !lambda.is_finite() => {
                Err(Error::InvalidConfig(format!("cmp1 lambda {lambda}")))
            }
            Design::Compare2 { lambda } if !(lambda > 0.0 && lambda < 1.0) => Err(
                Error::InvalidConfig(format!("cmp2 requires lambda in (0, 1), got {lambda}")),
            ),
            Design::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                Err(Error::InvalidConfig(format!("exp rate {rate}")))
            }
            d => Ok(d),
        }
    }

    /// Parse `id[:param]`, e.g. `f2`, `f2t:0.05`, `cmp1:-1`, `exp:2`.
    pub fn parse(s: &str) -> Result<Self> {
        let (id, param) = match s.split_once(':') {
            Some((id, p)) => {
                let v: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("bad design parameter in {s:?}")))?;
                (id.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        let need = |p: Option<f64>| {
            p.ok_or_else(|| Error::InvalidConfig(format!("design {id} needs a parameter")))
        };
        match id {
            "f1" => Ok(Design::HalfNormal),
            "f2" => Ok(Design::Piecewise),
            "f1t" => Self::half_normal_path(need(param)?),
            "f2t" => Self::piecewise_path(need(param)?),
            "cmp1" => Self::compare1(need(param)?),
            "cmp2" => Self::compare2(need(param)?),
            "exp" => Self::exponential(param.unwrap_or(1.0)),
            _ => Err(Error::InvalidConfig(format!("unknown design {id:?}"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Design::HalfNormal => "f1",
            Design::Piecewise => "f2",
            Design::HalfNormalPath { .. } => "f1t",
            Design::PiecewisePath { .. } => "f2t",
            Design::Compare1 { .. } => "cmp1",
            Design::Compare2 { .. } => "cmp2",
            Design::Exponential { .. } => "exp",
        }
    }

    pub fn has_closed_quantile(&self) -> bool {
        !matches!(self, Design::HalfNormal | Design::HalfNormalPath { .. })
    }

    /// The density of `cmp2` vanishes at `lambda` and jumps; it is the one
    /// design without a usable `-f'/f^2`.
    pub fn has_density_derivative(&self) -> bool {
        !matches!(self, Design::Compare2 { .. })
    }

    /// True when the cdf is concave on the half line.
    pub fn is_concave(&self) -> bool {
        match self {
            Design::Compare1 { lambda } => *lambda <= 0.0,
            Design::Compare2 { .. } => false,
            _ => true,
        }
    }

    pub fn support_end(&self) -> f64 {
        match self {
            Design::Compare1 { .. } | Design::Compare2 { .. } => 1.0,
            _ => f64::INFINITY,
        }
    }

    pub fn evaluate(&self, kind: Quantity, x: f64) -> Result<f64> {
        match kind {
            Quantity::Cdf => self.cdf(x),
            Quantity::Pdf => self.pdf(x),
            Quantity::PdfDeriv => self.pdf_deriv(x),
            Quantity::Quantile => self.quantile(x),
        }
    }

    fn check_x(x: f64) -> Result<()> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::DomainViolation(format!("x = {x}")));
        }
        Ok(())
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        Ok(match *self {
            Design::HalfNormal => half_normal_cdf(x, 0.0),
            Design::HalfNormalPath { t } => half_normal_cdf(x, t),
            Design::Piecewise => piecewise_cdf(x, 0.0),
            Design::PiecewisePath { t } => piecewise_cdf(x, t),
            Design::Compare1 { lambda } => {
                if x >= 1.0 {
                    1.0
                } else if lambda == 0.0 {
                    x
                } else {
                    (lambda * x).exp_m1() / lambda.exp_m1()
                }
            }
            Design::Compare2 { lambda } => {
                if x < lambda {
                    lambda - (x - lambda) * (x - lambda) / lambda
                } else if x < 1.0 {
                    x
                } else {
                    1.0
                }
            }
            Design::Exponential { rate } => -(-rate * x).exp_m1(),
        })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        Ok(match *self {
            Design::HalfNormal => half_normal_pdf(x, 0.0),
            Design::HalfNormalPath { t } => half_normal_pdf(x, t),
            Design::Piecewise => piecewise_pdf(x, 0.0),
            Design::PiecewisePath { t } => piecewise_pdf(x, t),
            Design::Compare1 { lambda } => {
                if x > 1.0 {
                    0.0
                } else if lambda == 0.0 {
                    1.0
                } else {
                    lambda * (lambda * x).exp() / lambda.exp_m1()
                }
            }
            Design::Compare2 { lambda } => {
                if x < lambda {
                    2.0 * (lambda - x) / lambda
                } else if x < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Design::Exponential { rate } => rate * (-rate * x).exp(),
        })
    }

    /// Right derivative of the density.
    pub fn pdf_deriv(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if !self.has_density_derivative() {
            return Err(Error::MissingCapability(format!(
                "{} has no density derivative",
                self.id()
            )));
        }
        Ok(match *self {
            Design::HalfNormal => -x * half_normal_pdf(x, 0.0),
            Design::HalfNormalPath { t } => -(x + t) * half_normal_pdf(x, t),
            Design::Piecewise | Design::PiecewisePath { .. } => {
                if x < 0.9 {
                    0.0
                } else {
                    -self.pdf(x)?
                }
            }
            Design::Compare1 { lambda } => {
                if x >= 1.0 || lambda == 0.0 {
                    0.0
                } else {
                    lambda * lambda * (lambda * x).exp() / lambda.exp_m1()
                }
            }
            Design::Exponential { rate } => -rate * rate * (-rate * x).exp(),
            Design::Compare2 { .. } => unreachable!(),
        })
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::DomainViolation(format!("probability {u}")));
        }
        if u == 1.0 && self.support_end().is_infinite() {
            return Err(Error::DomainViolation(
                "quantile at 1 of an unbounded design".into(),
            ));
        }
        Ok(match *self {
            Design::HalfNormal => {
                invert_cdf(|x| half_normal_cdf(x, 0.0), |x| half_normal_pdf(x, 0.0), u)
            }
            Design::HalfNormalPath { t } => {
                invert_cdf(|x| half_normal_cdf(x, t), |x| half_normal_pdf(x, t), u)
            }
            Design::Piecewise => piecewise_quantile(u, 0.0),
            Design::PiecewisePath { t } => piecewise_quantile(u, t),
            Design::Compare1 { lambda } => {
                if lambda == 0.0 {
                    u
                } else {
                    (u * lambda.exp_m1()).ln_1p() / lambda
                }
            }
            Design::Compare2 { lambda } => {
                if u < lambda {
                    lambda - (lambda * (lambda - u)).sqrt()
                } else {
                    u
                }
            }
            Design::Exponential { rate } => -(-u).ln_1p() / rate,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match *self {
            Design::HalfNormal => (0..n)
                .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
                .collect(),
            // acceptance is Phi(-t), so fall back to inversion far out
            Design::HalfNormalPath { t } if t <= 1.0 => (0..n)
                .map(|_| loop {
                    let x = rng.sample::<f64, _>(StandardNormal) - t;
                    if x >= 0.0 {
                        break x;
                    }
                })
                .collect(),
            _ => (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    self.quantile(u).expect("u in [0, 1)")
                })
                .collect(),
        }
    }
}

/// Cdf of `N(-t, 1)` conditioned on `[0, inf)`.
fn half_normal_cdf(x: f64, t: f64) -> f64 {
    if t == 0.0 && x < 1.0 {
        return erf(x / SQRT_2);
    }
    1.0 - erfc((x + t) / SQRT_2) / erfc(t / SQRT_2)
}

fn half_normal_pdf(x: f64, t: f64) -> f64 {
    // 1 / a(t) = sqrt(2/pi) / erfc(t / sqrt 2)
    let norm = FRAC_2_SQRT_PI / SQRT_2 / erfc(t / SQRT_2);
    norm * (-(x + t) * (x + t) / 2.0).exp()
}

/// Piece levels `(c1, c2, c3)` of the `f2t` density; `t = 0` is `f2`.
fn piecewise_levels(t: f64) -> (f64, f64, f64) {
    let (em, ep) = ((-t).exp(), t.exp());
    let b = 20.0 - 15.0 * em - 4.0 * ep;
    (1.5 * em, 0.5 * ep, b / 20.0)
}

fn piecewise_pdf(x: f64, t: f64) -> f64 {
    let (c1, c2, c3) = piecewise_levels(t);
    if x < 0.5 {
        c1
    } else if x < 0.9 {
        c2
    } else {
        c3 * (0.9 - x).exp()
    }
}

fn piecewise_cdf(x: f64, t: f64) -> f64 {
    let (c1, c2, c3) = piecewise_levels(t);
    let m1 = 0.5 * c1;
    let m2 = m1 + 0.4 * c2;
    if x < 0.5 {
        c1 * x
    } else if x < 0.9 {
        m1 + c2 * (x - 0.5)
    } else {
        m2 - c3 * (0.9 - x).exp_m1()
    }
}

fn piecewise_quantile(u: f64, t: f64) -> f64 {
    let (c1, c2, c3) = piecewise_levels(t);
    let m1 = 0.5 * c1;
    let m2 = m1 + 0.4 * c2;
    if u < m1 {
        u / c1
    } else if u < m2 {
        0.5 + (u - m1) / c2
    } else {
        0.9 - (-(u - m2) / c3).ln_1p()
    }
}

/// Bracketed Newton iteration with bisection fallback for an increasing
/// cdf on `[0, inf)`.
fn invert_cdf(cdf: impl Fn(f64) -> f64, pdf: impl Fn(f64) -> f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while cdf(hi) < u {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = cdf(x) - u;
        if g == 0.0 {
            return x;
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = pdf(x);
        let newton = x - g / d;
        let next = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-12 * x.max(1e-3) || hi - lo <= 1e-15 * hi.max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

/// `inf -f'(x) / f(x)^2` over `[0, F^{-1}(1 - eps)]`, located on a
/// `10^4`-point grid and refined once around the grid minimiser. A
/// diagnostic, not a certified global minimum.
pub fn beta_bar(design: &Design, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::DomainViolation(format!("eps = {eps}")));
    }
    if !design.has_density_derivative() {
        return Err(Error::MissingCapability(format!(
            "{} has no density derivative",
            design.id()
        )));
    }
    let upper = design.quantile(1.0 - eps)?;
    let ratio = |x: f64| -> Result<f64> {
        let f = design.pdf(x)?;
        Ok(-design.pdf_deriv(x)? / (f * f))
    };
    const GRID: usize = 10_000;
    let scan = |a: f64, b: f64| -> Result<(usize, f64, f64)> {
        let h = (b - a) / (GRID - 1) as f64;
        let mut best = (0, a, f64::INFINITY);
        for i in 0..GRID {
            let x = if i == GRID - 1 { b } else { a + h * i as f64 };
            let r = ratio(x)?;
            if r < best.2 {
                best = (i, x, r);
            }
        }
        Ok(best)
    };
    let (i, _, coarse) = scan(0.0, upper)?;
    let h = upper / (GRID - 1) as f64;
    let a = (h * i.saturating_sub(1) as f64).max(0.0);
    let b = (h * (i + 1) as f64).min(upper);
    let (_, _, fine) = scan(a, b)?;
    Ok(coarse.min(fine))
}

/// Which null design a local path passes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PathBase {
    HalfNormal,
    Piecewise,
}

/// Local path evaluated at `t = eta / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalPath {
    pub base: PathBase,
    pub eta: f64,
}

pub fn local_path(path: &LocalPath, n: usize) -> Result<Design> {
    let t = path.eta / (n as f64).sqrt();
    if t == 0.0 {
        return Ok(match path.base {
            PathBase::HalfNormal => Design::HalfNormal,
            PathBase::Piecewise => Design::Piecewise,
        });
    }
    match path.base {
        PathBase::HalfNormal => Design::half_normal_path(t),
        PathBase::Piecewise => Design::piecewise_path(t),
    }
}
