//! File formats of the command-line surface: the points input (JSON), the
//! result document (JSON), and the per-iteration trace (CSV).
//!
//! Parsers never panic on malformed input; errors carry the offending point
//! index where one exists.

use std::fmt;

use serde::{Deserialize, Serialize};

use hypersc::hyperboloid::{HPoint, HTangent};
use hypersc::meb::MebInstance;

#[derive(Debug)]
pub enum FormatError {
    /// Not parseable as the expected document at all.
    Parse(String),
    /// Parsed but semantically invalid; `index` names the offending point
    /// when the problem is point-specific.
    Invalid { index: Option<usize>, msg: String },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Parse(msg) => write!(f, "parse error: {msg}"),
            FormatError::Invalid {
                index: Some(i),
                msg,
            } => write!(f, "point {i}: {msg}"),
            FormatError::Invalid { index: None, msg } => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for FormatError {}

/// Input points document.
///
/// `model` is `"hyperboloid"` (each point has `dim + 1` ambient coordinates
/// on the sheet) or `"tangent"` (each point has `dim` coordinates, mapped
/// through the exponential at the apex).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsFile {
    pub model: String,
    pub kappa: f64,
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

pub fn parse_points_file(bytes: &[u8]) -> Result<PointsFile, FormatError> {
    serde_json::from_slice(bytes).map_err(|e| FormatError::Parse(e.to_string()))
}

/// Validates the document and builds a solver instance.
pub fn points_file_to_instance(pf: &PointsFile, epsilon: f64) -> Result<MebInstance, FormatError> {
    if !(pf.kappa.is_finite() && pf.kappa > 0.0) {
        return Err(FormatError::Invalid {
            index: None,
            msg: format!("kappa must be positive, got {}", pf.kappa),
        });
    }
    if pf.dim < 2 {
        return Err(FormatError::Invalid {
            index: None,
            msg: format!("dim must be >= 2, got {}", pf.dim),
        });
    }
    if pf.points.is_empty() {
        return Err(FormatError::Invalid {
            index: None,
            msg: "no points".into(),
        });
    }
    let mut points = Vec::with_capacity(pf.points.len());
    match pf.model.as_str() {
        "hyperboloid" => {
            for (i, coords) in pf.points.iter().enumerate() {
                if coords.len() != pf.dim + 1 {
                    return Err(FormatError::Invalid {
                        index: Some(i),
                        msg: format!("expected {} coordinates, got {}", pf.dim + 1, coords.len()),
                    });
                }
                let p =
                    HPoint::new(coords.clone(), pf.kappa).map_err(|e| FormatError::Invalid {
                        index: Some(i),
                        msg: e.to_string(),
                    })?;
                points.push(p);
            }
        }
        "tangent" => {
            let apex = HPoint::apex(pf.dim, pf.kappa);
            for (i, coords) in pf.points.iter().enumerate() {
                if coords.len() != pf.dim {
                    return Err(FormatError::Invalid {
                        index: Some(i),
                        msg: format!("expected {} coordinates, got {}", pf.dim, coords.len()),
                    });
                }
                let mut ambient = vec![0.0];
                ambient.extend_from_slice(coords);
                let v = HTangent::new(apex.clone(), ambient).map_err(|e| FormatError::Invalid {
                    index: Some(i),
                    msg: e.to_string(),
                })?;
                let p = apex.exp(&v).map_err(|e| FormatError::Invalid {
                    index: Some(i),
                    msg: e.to_string(),
                })?;
                points.push(p);
            }
        }
        other => {
            return Err(FormatError::Invalid {
                index: None,
                msg: format!("unknown model {other:?} (expected \"hyperboloid\" or \"tangent\")"),
            })
        }
    }
    MebInstance::new(points, pf.kappa, epsilon).map_err(|e| FormatError::Invalid {
        index: None,
        msg: e.to_string(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IterationCounts {
    pub centering: Option<u64>,
    pub path: Option<u64>,
    pub oracle: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConfigEcho {
    pub command: String,
    pub points_file: Option<String>,
    pub model: Option<String>,
    pub kappa: f64,
    pub dim: usize,
    pub num_points: usize,
    pub epsilon: Option<f64>,
    pub iters: Option<u64>,
}

/// Solver output document; `radius = sqrt(s)` by construction.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultFile {
    pub method: String,
    pub center: Vec<f64>,
    pub radius: f64,
    pub s: f64,
    pub gap_certificate: Option<f64>,
    /// Dual barrier-norm of the objective at the start point (diagnostic).
    pub alpha0: Option<f64>,
    pub iterations: IterationCounts,
    pub config_echo: ConfigEcho,
}

pub fn parse_result_file(bytes: &[u8]) -> Result<ResultFile, FormatError> {
    let rf: ResultFile =
        serde_json::from_slice(bytes).map_err(|e| FormatError::Parse(e.to_string()))?;
    if !rf.radius.is_finite() || !rf.s.is_finite() {
        return Err(FormatError::Invalid {
            index: None,
            msg: "non-finite radius or s".into(),
        });
    }
    if (rf.radius - rf.s.max(0.0).sqrt()).abs() > 1e-12 * rf.radius.abs().max(1.0) {
        return Err(FormatError::Invalid {
            index: None,
            msg: format!("radius {} is not sqrt(s) for s = {}", rf.radius, rf.s),
        });
    }
    Ok(rf)
}

pub const TRACE_HEADER: &str = "iter,phase,t,lambda,objective,gap_bound";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iter: u64,
    pub phase: String,
    pub t: f64,
    pub lambda: f64,
    pub objective: f64,
    /// Empty column during the centering phase.
    pub gap_bound: Option<f64>,
}

pub fn render_trace_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.iter,
            r.phase,
            crate::jsonfmt::fmt_f64(r.t),
            crate::jsonfmt::fmt_f64(r.lambda),
            crate::jsonfmt::fmt_f64(r.objective),
            r.gap_bound.map(crate::jsonfmt::fmt_f64).unwrap_or_default(),
        ));
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRow>, FormatError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == TRACE_HEADER => {}
        other => {
            return Err(FormatError::Parse(format!(
                "bad header {:?} (expected {TRACE_HEADER:?})",
                other.unwrap_or("")
            )))
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(FormatError::Parse(format!(
                "line {}: expected 6 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str, what: &str| -> Result<f64, FormatError> {
            s.parse::<f64>()
                .map_err(|_| FormatError::Parse(format!("line {}: bad {what} {s:?}", lineno + 2)))
        };
        rows.push(TraceRow {
            iter: fields[0].parse().map_err(|_| {
                FormatError::Parse(format!("line {}: bad iter {:?}", lineno + 2, fields[0]))
            })?,
            phase: fields[1].to_string(),
            t: parse_f(fields[2], "t")?,
            lambda: parse_f(fields[3], "lambda")?,
            objective: parse_f(fields[4], "objective")?,
            gap_bound: if fields[5].is_empty() {
                None
            } else {
                Some(parse_f(fields[5], "gap_bound")?)
            },
        });
    }
    Ok(rows)
}

/// Structural invariants of a trace: iterations strictly increasing within
/// each phase, no gap bound in the centering phase, non-increasing gap
/// bounds along the path.
pub fn validate_trace(rows: &[TraceRow]) -> Result<(), FormatError> {
    let mut last_iter: std::collections::HashMap<&str, u64> = std::collections::HashMap::new();
    let mut last_gap: Option<f64> = None;
    for r in rows {
        if let Some(prev) = last_iter.get(r.phase.as_str()) {
            if r.iter <= *prev {
                return Err(FormatError::Invalid {
                    index: None,
                    msg: format!("iter {} not increasing within phase {}", r.iter, r.phase),
                });
            }
        }
        last_iter.insert(r.phase.as_str(), r.iter);
        match (r.phase.as_str(), r.gap_bound) {
            ("center", Some(_)) => {
                return Err(FormatError::Invalid {
                    index: None,
                    msg: "gap_bound present in centering phase".into(),
                })
            }
            ("path", Some(g)) => {
                if let Some(prev) = last_gap {
                    if g > prev + 1e-15 {
                        return Err(FormatError::Invalid {
                            index: None,
                            msg: "gap_bound increased along the path".into(),
                        });
                    }
                }
                last_gap = Some(g);
            }
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_file_parses_and_validates() {
        let good = br#"{"model":"tangent","kappa":1.0,"dim":2,"points":[[0.0,0.0],[1.0,0.5]]}"#;
        let pf = parse_points_file(good).unwrap();
        let inst = points_file_to_instance(&pf, 1e-4).unwrap();
        assert_eq!(inst.points.len(), 2);

        // Hyperboloid model with an off-sheet point names the index.
        let bad = br#"{"model":"hyperboloid","kappa":1.0,"dim":2,"points":[[1.0,0.0,0.0],[1.0,0.5,0.0]]}"#;
        let pf = parse_points_file(bad).unwrap();
        let err = points_file_to_instance(&pf, 1e-4).unwrap_err();
        assert!(err.to_string().starts_with("point 1:"), "{err}");

        assert!(parse_points_file(b"not json").is_err());
        assert!(
            parse_points_file(br#"{"model":"poincare","kappa":1,"dim":2,"points":[[0,0]]}"#)
                .and_then(|pf| points_file_to_instance(&pf, 1e-4))
                .is_err()
        );
    }

    #[test]
    fn trace_round_trip() {
        let rows = vec![
            TraceRow {
                iter: 0,
                phase: "center".into(),
                t: 0.0,
                lambda: 0.5,
                objective: 2.0,
                gap_bound: None,
            },
            TraceRow {
                iter: 1,
                phase: "path".into(),
                t: 0.25,
                lambda: 0.1,
                objective: 1.5,
                gap_bound: Some(4.0),
            },
            TraceRow {
                iter: 2,
                phase: "path".into(),
                t: 0.5,
                lambda: 0.1,
                objective: 1.2,
                gap_bound: Some(2.0),
            },
        ];
        let text = render_trace_csv(&rows);
        let parsed = parse_trace_csv(&text).unwrap();
        assert_eq!(rows, parsed);
        validate_trace(&parsed).unwrap();
        assert!(parse_trace_csv("nonsense\n1,2,3").is_err());
    }
}
