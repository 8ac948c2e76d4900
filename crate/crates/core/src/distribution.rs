//! The two-parameter Weibull distribution.

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::SortedSample;
use crate::special::ln_gamma;

/// Shape α and scale β of a Weibull distribution, both positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    shape: f64,
    scale: f64,
}

impl WeibullParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "shape",
                value: shape,
                reason: "must be positive and finite",
            });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: scale,
                reason: "must be positive and finite",
            });
        }
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Density (α/β)(x/β)^{α−1} exp{−(x/β)^α}.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        let z = x / self.scale;
        let log_pdf =
            (self.shape / self.scale).ln() + (self.shape - 1.0) * z.ln() - z.powf(self.shape);
        Ok(log_pdf.exp())
    }

    /// Distribution function 1 − exp{−(x/β)^α}.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(self.cdf_unchecked(x))
    }

    #[inline]
    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        -(-(x / self.scale).powf(self.shape)).exp_m1()
    }

    /// Quantile β[−ln(1−p)]^{1/α} for p in (0, 1).
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(prob > 0.0 && prob < 1.0) {
            return Err(Error::Domain {
                what: "probability",
                value: prob,
                reason: "must lie in (0, 1)",
            });
        }
        Ok(self.quantile_unchecked(prob))
    }

    #[inline]
    fn quantile_unchecked(&self, prob: f64) -> f64 {
        self.scale * (-(-prob).ln_1p()).powf(1.0 / self.shape)
    }

    /// Draws `n` variates by inversion and returns them sorted. The result is
    /// a pure function of the generator state.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SortedSample> {
        if n < 2 {
            return Err(Error::SampleTooSmall { min: 2, got: n });
        }
        let mut draws: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.quantile_unchecked(u)
            })
            .collect();
        // Extremely small shapes can underflow the lower tail to zero.
        if draws.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::Overflow("sampled variate outside (0, inf)"));
        }
        draws.sort_by(f64::total_cmp);
        Ok(SortedSample::from_sorted_unchecked(draws))
    }

    /// Non-central moment μ_r = β^r Γ(r/α + 1).
    pub fn raw_moment(&self, r: u32) -> Result<f64> {
        if r == 0 {
            return Err(Error::Domain {
                what: "moment order",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        let r = f64::from(r);
        let log_moment = r * self.scale.ln() + ln_gamma(r / self.shape + 1.0);
        let m = log_moment.exp();
        if !m.is_finite() {
            return Err(Error::Overflow("raw moment"));
        }
        Ok(m)
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "x",
            value: x,
            reason: "must be positive",
        })
    }
}
