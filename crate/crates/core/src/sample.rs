//! Validated, ascending-ordered samples with a cached log transform.

use crate::error::{Error, Result};

/// Positive observations sorted ascending, with `logs[i] == values[i].ln()`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
    logs: Vec<f64>,
}

impl SortedSample {
    /// Validates and sorts `values`. Non-positive or non-finite entries are
    /// rejected with the indices (in input order) of every offender.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        let bad: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !(v.is_finite() && **v > 0.0))
            .map(|(i, _)| i)
            .collect();
        if !bad.is_empty() {
            return Err(Error::InvalidSample {
                reason: "observations must be positive and finite",
                indices: bad,
            });
        }
        if values.len() < 2 {
            return Err(Error::SampleTooSmall {
                min: 2,
                got: values.len(),
            });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self::from_sorted_unchecked(values))
    }

    pub(crate) fn from_sorted_unchecked(values: Vec<f64>) -> Self {
        let logs = values.iter().map(|v| v.ln()).collect();
        Self { values, logs }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction requires at least two observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn all_equal(&self) -> bool {
        self.min() == self.max()
    }

    pub fn has_ties(&self) -> bool {
        self.values.windows(2).any(|w| w[0] == w[1])
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn mean_log(&self) -> f64 {
        self.logs.iter().sum::<f64>() / self.len() as f64
    }

    /// Multiplies every observation by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    /// Raises every observation to the power `k > 0`; ordering is preserved.
    pub fn powered(&self, k: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v.powf(k)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_caches_logs() {
        let s = SortedSample::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        for (v, l) in s.values().iter().zip(s.logs()) {
            assert_eq!(*l, v.ln());
        }
    }

    #[test]
    fn rejects_non_positive_with_indices() {
        let err = SortedSample::new(vec![1.0, -1.0, 0.0, f64::NAN, 2.0]).unwrap_err();
        match err {
            Error::InvalidSample { indices, .. } => assert_eq!(indices, vec![1, 2, 3]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(SortedSample::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn rejects_single_point() {
        assert!(matches!(
            SortedSample::new(vec![1.0]),
            Err(Error::SampleTooSmall { got: 1, .. })
        ));
    }

    #[test]
    fn detects_ties() {
        assert!(SortedSample::new(vec![1.0, 2.0, 2.0]).unwrap().has_ties());
        assert!(!SortedSample::new(vec![1.0, 2.0]).unwrap().has_ties());
        assert!(SortedSample::new(vec![4.0, 4.0]).unwrap().all_equal());
    }
}
