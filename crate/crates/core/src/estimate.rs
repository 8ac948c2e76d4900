//! Method tags and fitted results.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::WeibullParams;
use crate::error::{Error, Result};

/// The ten estimation methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "USTAT")]
    Ustat,
    #[serde(rename = "MLE")]
    Mle,
    #[serde(rename = "WMLE")]
    Wmle,
    #[serde(rename = "GLS1")]
    Gls1,
    #[serde(rename = "GLS2")]
    Gls2,
    #[serde(rename = "WLS")]
    Wls,
    #[serde(rename = "LM")]
    Lm,
    #[serde(rename = "MLM")]
    Mlm,
    #[serde(rename = "PM")]
    Pm,
    #[serde(rename = "MM")]
    Mm,
}

impl Method {
    /// All methods in the order the comparison tables list them.
    pub const ALL: [Method; 10] = [
        Method::Ustat,
        Method::Mle,
        Method::Wmle,
        Method::Gls1,
        Method::Gls2,
        Method::Wls,
        Method::Lm,
        Method::Mlm,
        Method::Pm,
        Method::Mm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ustat => "USTAT",
            Method::Mle => "MLE",
            Method::Wmle => "WMLE",
            Method::Gls1 => "GLS1",
            Method::Gls2 => "GLS2",
            Method::Wls => "WLS",
            Method::Lm => "LM",
            Method::Mlm => "MLM",
            Method::Pm => "PM",
            Method::Mm => "MM",
        }
    }

    /// Parses a comma-separated list; `all` expands to every method.
    /// Duplicates are dropped, first occurrence wins.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok.eq_ignore_ascii_case("all") {
                for m in Method::ALL {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
                continue;
            }
            let m: Method = tok.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(Error::UnknownMethod(s.to_string()));
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        let m = match up.as_str() {
            "USTAT" | "U" | "U-STATISTIC" => Method::Ustat,
            "MLE" => Method::Mle,
            "WMLE" => Method::Wmle,
            "GLS1" => Method::Gls1,
            "GLS2" => Method::Gls2,
            "WLS" => Method::Wls,
            "LM" => Method::Lm,
            "MLM" => Method::Mlm,
            "PM" => Method::Pm,
            "MM" => Method::Mm,
            _ => return Err(Error::UnknownMethod(s.to_string())),
        };
        Ok(m)
    }
}

/// Numeric side information from a fit.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
    pub bracket: Option<(f64, f64)>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub method: Method,
    pub params: WeibullParams,
    pub diagnostics: Diagnostics,
}

impl EstimateResult {
    pub(crate) fn new(method: Method, shape: f64, scale: f64) -> Result<Self> {
        Ok(Self {
            method,
            params: WeibullParams::new(shape, scale)?,
            diagnostics: Diagnostics::default(),
        })
    }

    pub(crate) fn with_diagnostics(mut self, diagnostics: Diagnostics) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    pub fn shape(&self) -> f64 {
        self.params.shape()
    }

    pub fn scale(&self) -> f64 {
        self.params.scale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
    }

    #[test]
    fn parse_list_expands_all() {
        assert_eq!(Method::parse_list("all").unwrap().len(), 10);
        assert_eq!(
            Method::parse_list("lm, MLE,LM").unwrap(),
            vec![Method::Lm, Method::Mle]
        );
        assert!(Method::parse_list("LM,BOGUS").is_err());
        assert!(Method::parse_list("").is_err());
    }
}
