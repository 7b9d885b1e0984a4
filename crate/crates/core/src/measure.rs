//! Piecewise-constant probability measures on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{EflError, Result};

/// A nonatomic measure with piecewise-constant density, normalized to total mass 1.
///
/// `breakpoints` run from 0 to 1 and are strictly increasing; segment `k`
/// spans `breakpoints[k]..breakpoints[k + 1]` with density `densities[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct Measure {
    breakpoints: Vec<f64>,
    densities: Vec<f64>,
    prefix: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    breakpoints: Vec<f64>,
    densities: Vec<f64>,
}

impl TryFrom<RawMeasure> for Measure {
    type Error = EflError;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        Measure::new(raw.breakpoints, raw.densities)
    }
}

impl From<Measure> for RawMeasure {
    fn from(m: Measure) -> Self {
        RawMeasure {
            breakpoints: m.breakpoints,
            densities: m.densities,
        }
    }
}

impl Measure {
    /// Validates and rescales so the total mass is exactly 1.
    pub fn new(breakpoints: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || densities.len() + 1 != breakpoints.len() {
            return Err(EflError::InvalidMeasure(
                "need k+1 breakpoints for k densities".into(),
            ));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(EflError::InvalidMeasure("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(EflError::InvalidMeasure("breakpoints must be strictly increasing".into()));
        }
        if densities.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
            return Err(EflError::InvalidMeasure("densities must be finite and nonnegative".into()));
        }
        let total: f64 = densities
            .iter()
            .zip(breakpoints.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum();
        if !(total > 0.0) {
            return Err(EflError::InvalidMeasure("total mass must be positive".into()));
        }
        let densities: Vec<f64> = densities.into_iter().map(|d| d / total).collect();
        let mut prefix = Vec::with_capacity(breakpoints.len());
        prefix.push(0.0);
        for (d, w) in densities.iter().zip(breakpoints.windows(2)) {
            let last = *prefix.last().unwrap();
            prefix.push(last + d * (w[1] - w[0]));
        }
        Ok(Self {
            breakpoints,
            densities,
            prefix,
        })
    }

    pub fn uniform() -> Self {
        Self::new(vec![0.0, 1.0], vec![1.0]).expect("uniform measure")
    }

    /// Uniform measure supported on `[c, d]`.
    pub fn uniform_on(c: f64, d: f64) -> Result<Self> {
        if !(0.0 <= c && c < d && d <= 1.0) {
            return Err(EflError::InvalidMeasure(format!("bad support [{c}, {d}]")));
        }
        let mut bps = vec![0.0];
        let mut dens = vec![];
        if c > 0.0 {
            bps.push(c);
            dens.push(0.0);
        }
        if d < 1.0 {
            bps.push(d);
        }
        dens.push(1.0);
        if d < 1.0 {
            dens.push(0.0);
        }
        bps.push(1.0);
        Self::new(bps, dens)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn max_density(&self) -> f64 {
        self.densities.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_density(&self) -> f64 {
        self.densities.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Mass of `[0, x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        // last segment whose left end is <= x
        let k = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.prefix[k] + self.densities[k] * (x - self.breakpoints[k])
    }

    pub fn mass(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            0.0
        } else {
            self.cdf(b) - self.cdf(a)
        }
    }

    pub fn total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Smallest `x` with `cdf(x) >= target`.
    pub fn quantile(&self, target: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        if target >= 1.0 {
            return 1.0;
        }
        let k = self.prefix.partition_point(|&m| m < target) - 1;
        let d = self.densities[k];
        if d == 0.0 {
            self.breakpoints[k + 1]
        } else {
            (self.breakpoints[k] + (target - self.prefix[k]) / d).min(self.breakpoints[k + 1])
        }
    }
}
