//! Per-dataset fit reports and their flat key-value serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::dataset::Dataset;
use crate::distribution::WeibullParams;
use crate::error::{Error, Result};
use crate::estimate::Method;
use crate::fitter::Fitter;
use crate::gof::{gof_report, GofReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct MethodFit {
    pub params: WeibullParams,
    pub gof: GofReport,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodFailure {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodOutcome {
    Fitted(MethodFit),
    Failed(MethodFailure),
}

impl MethodOutcome {
    pub fn fit(&self) -> Option<&MethodFit> {
        match self {
            MethodOutcome::Fitted(f) => Some(f),
            MethodOutcome::Failed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub dataset: String,
    pub n: usize,
    pub tool_version: String,
    /// Left empty unless the caller stamps it, so repeated runs serialize identically.
    pub timestamp: Option<String>,
    pub entries: Vec<(Method, MethodOutcome)>,
}

impl FitReport {
    pub fn get(&self, m: Method) -> Option<&MethodOutcome> {
        self.entries.iter().find(|(k, _)| *k == m).map(|(_, v)| v)
    }

    pub fn any_failed(&self) -> bool {
        self.entries
            .iter()
            .any(|(_, o)| matches!(o, MethodOutcome::Failed(_)))
    }

    /// Fixed-width table with 4 decimals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dataset: {} (n = {})", self.dataset, self.n);
        let _ = writeln!(
            out,
            "{:<7}{:>11}{:>11}{:>9}{:>9}",
            "method", "alpha", "beta", "KS", "CVM"
        );
        for (m, o) in &self.entries {
            match o {
                MethodOutcome::Fitted(f) => {
                    let _ = writeln!(
                        out,
                        "{:<7}{:>11.4}{:>11.4}{:>9.4}{:>9.4}",
                        m.name(),
                        f.params.shape(),
                        f.params.scale(),
                        f.gof.ks,
                        f.gof.cvm
                    );
                    for w in &f.warnings {
                        let _ = writeln!(out, "       warning: {w}");
                    }
                }
                MethodOutcome::Failed(e) => {
                    let _ = writeln!(out, "{:<7}  failed ({}): {}", m.name(), e.kind, e.message);
                }
            }
        }
        out
    }

    /// Flat document: run-level keys plus `<METHOD>.<field>` entries.
    pub fn to_json(&self) -> String {
        let mut map: BTreeMap<String, Value> = BTreeMap::new();
        map.insert("dataset".into(), self.dataset.clone().into());
        map.insert("n".into(), self.n.into());
        map.insert("tool_version".into(), self.tool_version.clone().into());
        if let Some(ts) = &self.timestamp {
            map.insert("timestamp".into(), ts.clone().into());
        }
        let names: Vec<&str> = self.entries.iter().map(|(m, _)| m.name()).collect();
        map.insert("methods".into(), names.join(",").into());
        for (m, o) in &self.entries {
            let key = |f: &str| format!("{}.{f}", m.name());
            match o {
                MethodOutcome::Fitted(f) => {
                    map.insert(key("status"), "ok".into());
                    map.insert(key("alpha"), f.params.shape().into());
                    map.insert(key("beta"), f.params.scale().into());
                    map.insert(key("ks"), f.gof.ks.into());
                    map.insert(key("cvm"), f.gof.cvm.into());
                    if !f.warnings.is_empty() {
                        map.insert(key("warnings"), f.warnings.join("; ").into());
                    }
                }
                MethodOutcome::Failed(e) => {
                    map.insert(key("status"), "failed".into());
                    map.insert(key("error_kind"), e.kind.clone().into());
                    map.insert(key("error"), e.message.clone().into());
                }
            }
        }
        let obj: Map<String, Value> = map.into_iter().collect();
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let perr = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message,
        };
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?;
        let obj = v
            .as_object()
            .ok_or_else(|| perr("expected an object".into()))?;
        let text_field = |k: &str| -> Result<String> {
            obj.get(k)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| perr(format!("missing string `{k}`")))
        };
        let num_field = |k: &str| -> Result<f64> {
            obj.get(k)
                .and_then(Value::as_f64)
                .ok_or_else(|| perr(format!("missing number `{k}`")))
        };
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| perr("missing `n`".into()))? as usize;
        let methods = Method::parse_list(&text_field("methods")?)?;
        let mut entries = Vec::with_capacity(methods.len());
        for m in methods {
            let name = m.name();
            let outcome = match text_field(&format!("{name}.status"))?.as_str() {
                "ok" => {
                    let params = WeibullParams::new(
                        num_field(&format!("{name}.alpha"))?,
                        num_field(&format!("{name}.beta"))?,
                    )?;
                    let warnings = obj
                        .get(&format!("{name}.warnings"))
                        .and_then(Value::as_str)
                        .map(|w| w.split("; ").map(str::to_string).collect())
                        .unwrap_or_default();
                    MethodOutcome::Fitted(MethodFit {
                        params,
                        gof: GofReport {
                            ks: num_field(&format!("{name}.ks"))?,
                            cvm: num_field(&format!("{name}.cvm"))?,
                            n,
                        },
                        warnings,
                    })
                }
                "failed" => MethodOutcome::Failed(MethodFailure {
                    kind: text_field(&format!("{name}.error_kind"))?,
                    message: text_field(&format!("{name}.error"))?,
                }),
                other => return Err(perr(format!("bad status `{other}` for {name}"))),
            };
            entries.push((m, outcome));
        }
        Ok(Self {
            dataset: text_field("dataset")?,
            n,
            tool_version: text_field("tool_version")?,
            timestamp: obj
                .get("timestamp")
                .and_then(Value::as_str)
                .map(str::to_string),
            entries,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }
}

/// Fits each method in turn and scores it; failures are kept in the report.
///
/// A dataset that cannot form a sample (for instance a single observation)
/// fails every method with the same reason.
pub fn fit_dataset(dataset: &Dataset, methods: &[Method], fitter: &Fitter) -> FitReport {
    let sample = dataset.sorted();
    let mut entries = Vec::with_capacity(methods.len());
    for &m in methods {
        let outcome = match sample.as_ref() {
            Err(e) => failure(e),
            Ok(s) => match fitter.fit(m, s) {
                Ok(r) => MethodOutcome::Fitted(MethodFit {
                    gof: gof_report(s.values(), &r.params),
                    params: r.params,
                    warnings: r.diagnostics.warnings,
                }),
                Err(e) => failure(&e),
            },
        };
        entries.push((m, outcome));
    }
    FitReport {
        dataset: dataset.name.clone(),
        n: dataset.observations.len(),
        tool_version: TOOL_VERSION.to_string(),
        timestamp: None,
        entries,
    }
}

fn failure(e: &Error) -> MethodOutcome {
    MethodOutcome::Failed(MethodFailure {
        kind: e.kind().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitter::FitOptions;

    #[test]
    fn json_round_trip_is_exact() {
        let d = Dataset::lifetime48();
        let f = Fitter::new(FitOptions::default());
        let r = fit_dataset(&d, &[Method::Lm, Method::Wmle, Method::Mle], &f);
        assert!(r.any_failed());
        let back = FitReport::from_json(&r.to_json(), Path::new("mem")).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn constant_data_fails_structurally() {
        let d = Dataset {
            name: "c".into(),
            observations: vec![2.0; 3],
            source: "mem".into(),
        };
        let r = fit_dataset(&d, &[Method::Ustat], &Fitter::default());
        match r.get(Method::Ustat).unwrap() {
            MethodOutcome::Failed(e) => assert_eq!(e.kind, "degenerate_sample"),
            o => panic!("unexpected {o:?}"),
        }
    }
}
