use serde::Serialize;

use crate::error::{Error, Result};

/// Weighting function `g` of the weighted `L_p` distance.
///
/// `Uniform` is `1` on `[0, upper]` and zero afterwards. That violates strict
/// positivity on the half line; it is kept because it makes the `p = 1`
/// distance an ordinary area between curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightSpec {
    Uniform {
        upper: f64,
    },
    /// Exponential density `rate * exp(-rate * x)`.
    Exponential {
        rate: f64,
    },
    /// Linear interpolation of `(xs[i], gs[i])`, zero outside the table.
    Tabulated {
        xs: Vec<f64>,
        gs: Vec<f64>,
    },
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec::Exponential { rate: 1.0 }
    }
}

impl WeightSpec {
    pub fn uniform(upper: f64) -> Result<Self> {
        if !(upper.is_finite() && upper > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "uniform weight upper bound {upper}"
            )));
        }
        Ok(WeightSpec::Uniform { upper })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "exponential weight rate {rate}"
            )));
        }
        Ok(WeightSpec::Exponential { rate })
    }

    pub fn tabulated(xs: Vec<f64>, gs: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != gs.len() {
            return Err(Error::InvalidConfig(
                "tabulated weight needs >= 2 matching points".into(),
            ));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) || xs[0] < 0.0 {
            return Err(Error::InvalidConfig(
                "tabulated weight abscissas must increase from >= 0".into(),
            ));
        }
        if gs.iter().any(|g| !g.is_finite() || *g < 0.0) || gs.iter().all(|g| *g == 0.0) {
            return Err(Error::InvalidConfig(
                "tabulated weight must be nonnegative and nonzero".into(),
            ));
        }
        Ok(WeightSpec::Tabulated { xs, gs })
    }

    /// Parse `exp[:rate]` or `uniform:upper`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |a: Option<&str>| -> Result<Option<f64>> {
            a.map(|a| {
                a.parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("bad weight parameter in {s:?}")))
            })
            .transpose()
        };
        match kind {
            "exp" | "exponential" => Self::exponential(num(arg)?.unwrap_or(1.0)),
            "uniform" => match num(arg)? {
                Some(c) => Self::uniform(c),
                None => Err(Error::InvalidConfig(
                    "uniform weight needs an upper bound".into(),
                )),
            },
            _ => Err(Error::InvalidConfig(format!("unknown weight {s:?}"))),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Uniform { upper } => {
                if (0.0..=*upper).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            WeightSpec::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            WeightSpec::Tabulated { xs, gs } => {
                if x < xs[0] || x > xs[xs.len() - 1] {
                    return 0.0;
                }
                let k = xs.partition_point(|&v| v <= x).min(xs.len() - 1).max(1);
                let (x0, x1) = (xs[k - 1], xs[k]);
                gs[k - 1] + (gs[k] - gs[k - 1]) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// `int_x^inf g(u) du`.
    pub fn tail_mass(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Uniform { upper } => (upper - x.max(0.0)).max(0.0),
            WeightSpec::Exponential { rate } => (-rate * x.max(0.0)).exp(),
            WeightSpec::Tabulated { xs, gs } => {
                let mut mass = 0.0;
                for i in 0..xs.len() - 1 {
                    let (a, b) = (xs[i].max(x), xs[i + 1]);
                    if b > a {
                        mass += 0.5 * (b - a) * (self.eval(a) + gs[i + 1]);
                    }
                }
                mass
            }
        }
    }

    /// Abscissas where `g` is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            WeightSpec::Uniform { upper } => vec![*upper],
            WeightSpec::Exponential { .. } => Vec::new(),
            WeightSpec::Tabulated { xs, .. } => xs.clone(),
        }
    }

    /// Right end of the support, if finite.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            WeightSpec::Uniform { upper } => Some(*upper),
            WeightSpec::Exponential { .. } => None,
            WeightSpec::Tabulated { xs, .. } => xs.last().copied(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_masses() {
        assert_eq!(WeightSpec::uniform(2.0).unwrap().tail_mass(0.5), 1.5);
        let e = WeightSpec::exponential(2.0).unwrap();
        assert!((e.tail_mass(1.0) - (-2.0f64).exp()).abs() < 1e-15);
        let t = WeightSpec::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 0.0]).unwrap();
        assert!((t.tail_mass(0.0) - 1.5).abs() < 1e-15);
        assert!((t.tail_mass(1.5) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid() {
        assert!(WeightSpec::uniform(0.0).is_err());
        assert!(WeightSpec::exponential(-1.0).is_err());
        assert!(WeightSpec::tabulated(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
    }
}
