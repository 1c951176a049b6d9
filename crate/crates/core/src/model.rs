//! Models: a system plus optional constraint and auxiliary matrices, loaded
//! from the catalog or from a JSON model file.
//!
//! Model file layout (all matrices are arrays of rows):
//!
//! ```json
//! { "n": 1, "m": 2, "A0": [[1,0],[0,1]], "A": [[[0,-1],[-1,0]]], "L": [[0,0],[0,1]],
//!   "constraint": {"m1": 1, "Q": [[[0,0]]], "R": [[0,0]]},
//!   "S": [[0,0],[0,0]], "K": {"kalman": {"mu": 0.5, "kappa": [0,3,4], "nu": 1}},
//!   "S_tilde": [[0]] }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::compensator::CompensatorSpec;
use crate::constraint::ConstraintBlock;
use crate::error::{Error, Result};
use crate::linalg::{from_rows, to_rows, RMat};
use crate::report::ConditionName;
use crate::system::{Envelope, HyperbolicSystem};

/// What a model is predicted to satisfy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    /// Conditions that must pass; other reported conditions are informational.
    pub conditions: Vec<ConditionName>,
    pub dissipativity: Option<(u32, u32)>,
    pub envelope: Option<Envelope>,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub sys: HyperbolicSystem,
    pub constraint: Option<ConstraintBlock>,
    pub s: Option<RMat>,
    pub k: Option<CompensatorSpec>,
    pub s_tilde: Option<RMat>,
    pub expected: Expected,
}

type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    pub m1: usize,
    #[serde(rename = "Q")]
    pub q: Vec<Rows>,
    #[serde(rename = "R")]
    pub r: Rows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "A0")]
    pub a0: Rows,
    #[serde(rename = "A")]
    pub a: Vec<Rows>,
    #[serde(rename = "L")]
    pub l: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintFile>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Rows>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<CompensatorSpec>,
    #[serde(rename = "S_tilde", default, skip_serializing_if = "Option::is_none")]
    pub s_tilde: Option<Rows>,
}

fn matrix(name: &str, rows: &Rows, shape: (usize, usize)) -> Result<RMat> {
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("{name}: entries must be finite")));
    }
    let m = from_rows(rows).ok_or_else(|| Error::Parse(format!("{name}: rows have different lengths")))?;
    if m.shape() != shape && !(rows.is_empty() && shape.0 * shape.1 == 0) {
        return Err(Error::Parse(format!("{name}: expected {}x{}, got {}x{}", shape.0, shape.1, m.nrows(), m.ncols())));
    }
    Ok(m)
}

impl ModelFile {
    pub fn into_model(self, name: impl Into<String>) -> Result<Model> {
        let (n, m) = (self.n, self.m);
        if n == 0 || m == 0 {
            return Err(Error::Parse("n and m must be positive".into()));
        }
        if self.a.len() != n {
            return Err(Error::Parse(format!("A: expected {n} matrices, got {}", self.a.len())));
        }
        let a0 = matrix("A0", &self.a0, (m, m))?;
        let a = self.a.iter().enumerate().map(|(j, x)| matrix(&format!("A[{j}]"), x, (m, m))).collect::<Result<Vec<_>>>()?;
        let l = matrix("L", &self.l, (m, m))?;
        let sys = HyperbolicSystem::new(a0, a, l)?;
        let constraint = match self.constraint {
            Some(c) => {
                if c.q.len() != n {
                    return Err(Error::Parse(format!("constraint.Q: expected {n} matrices, got {}", c.q.len())));
                }
                let q = c.q.iter().enumerate().map(|(j, x)| matrix(&format!("constraint.Q[{j}]"), x, (c.m1, m))).collect::<Result<Vec<_>>>()?;
                let r = matrix("constraint.R", &c.r, (c.m1, m))?;
                Some(ConstraintBlock::new(q, r)?)
            }
            None => None,
        };
        let s = self.s.as_ref().map(|x| matrix("S", x, (m, m))).transpose()?;
        let s_tilde = match (&self.s_tilde, &constraint) {
            (Some(x), Some(cb)) => Some(matrix("S_tilde", x, (cb.m1(), cb.m1()))?),
            (Some(_), None) => return Err(Error::Parse("S_tilde given without a constraint".into())),
            _ => None,
        };
        Ok(Model {
            name: name.into(),
            sys,
            constraint,
            s,
            k: self.k,
            s_tilde,
            expected: Expected { conditions: vec![ConditionName::A], dissipativity: None, envelope: None },
        })
    }
}

impl Model {
    pub fn to_file(&self) -> ModelFile {
        let sys = &self.sys;
        ModelFile {
            n: sys.n(),
            m: sys.m(),
            a0: to_rows(sys.a0()),
            a: sys.a_matrices().iter().map(to_rows).collect(),
            l: to_rows(sys.l()),
            constraint: self.constraint.as_ref().map(|cb| ConstraintFile {
                m1: cb.m1(),
                q: cb.q_matrices().iter().map(to_rows).collect(),
                r: to_rows(cb.r()),
            }),
            s: self.s.as_ref().map(to_rows),
            k: self.k.clone(),
            s_tilde: self.s_tilde.as_ref().map(to_rows),
        }
    }

    pub fn from_json(text: &str, name: impl Into<String>) -> Result<Model> {
        if text.trim().is_empty() {
            return Err(Error::Parse("empty model file".into()));
        }
        let f: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        f.into_model(name)
    }

    pub fn load(path: &Path) -> Result<Model> {
        let text = std::fs::read_to_string(path)?;
        Model::from_json(&text, format!("file:{}", path.display()))
    }

    /// `builtin:<name>?k=v&...` or a path to a model file.
    pub fn from_source(src: &str) -> Result<Model> {
        match src.strip_prefix("builtin:") {
            Some(rest) => builtin(rest),
            None => Model::load(Path::new(src)),
        }
    }
}

fn parse_query(q: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for pair in q.split('&').filter(|p| !p.is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{pair}'")))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

fn take_f64(q: &mut BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match q.remove(key) {
        Some(v) => v.parse().map_err(|_| Error::Parse(format!("parameter {key}: '{v}' is not a number"))),
        None => Ok(default),
    }
}

fn builtin(spec: &str) -> Result<Model> {
    let (name, query) = spec.split_once('?').unwrap_or((spec, ""));
    let mut q = parse_query(query)?;
    let model = match name {
        "timoshenko" => {
            let a = take_f64(&mut q, "a", 2.0)?;
            let gamma = take_f64(&mut q, "gamma", 1.0)?;
            catalog::timoshenko(a, gamma)?
        }
        "euler-maxwell" => {
            let rho = take_f64(&mut q, "rho", 1.0)?;
            let pprime = take_f64(&mut q, "pprime", 1.0)?;
            let b = match q.remove("B") {
                Some(v) => {
                    let parts: Vec<f64> = v
                        .split(',')
                        .map(|x| x.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Parse(format!("parameter B: '{v}' is not a list of numbers")))?;
                    <[f64; 3]>::try_from(parts).map_err(|_| Error::Parse("parameter B needs three components".into()))?
                }
                None => [0.0, 0.0, 1.0],
            };
            catalog::euler_maxwell(rho, pprime, b)?
        }
        "damped-wave" => catalog::symmetric_toy()?,
        other => return Err(Error::Parse(format!("unknown builtin model '{other}' (timoshenko, euler-maxwell, damped-wave)"))),
    };
    if let Some(k) = q.keys().next() {
        return Err(Error::Parse(format!("unknown parameter '{k}' for builtin:{name}")));
    }
    Ok(model)
}
