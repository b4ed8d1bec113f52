//! JSON form: `{"period": ℓ, "pieces": [{"kind", "interval", "params"}]}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CogwheelKappa, CogwheelSpec, CurvatureFunction, CurvaturePiece, PieceKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceDoc {
    pub kind: String,
    pub interval: [f64; 2],
    pub params: Value,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub shift: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reversed: bool,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvatureDoc {
    pub period: f64,
    pub pieces: Vec<PieceDoc>,
}

fn parse<T: serde::de::DeserializeOwned>(kind: &str, v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::InvalidSpec(format!("{kind} params: {e}")))
}

impl PieceDoc {
    fn to_kind(&self) -> Result<PieceKind> {
        Ok(match self.kind.as_str() {
            "bump" => {
                let b: super::BumpSum = parse("bump", &self.params)?;
                b.validate()?;
                PieceKind::Bump(b)
            }
            "trig" => {
                let t: super::TrigPoly = parse("trig", &self.params)?;
                t.validate()?;
                PieceKind::Trig(t)
            }
            "cogwheel" => {
                let c: CogwheelSpec = parse("cogwheel", &self.params)?;
                PieceKind::Cogwheel(CogwheelKappa::new(c)?)
            }
            "sampled" => {
                let p: super::SampledKappa = parse("sampled", &self.params)?;
                p.validate()?;
                PieceKind::Sampled(p)
            }
            other => return Err(Error::InvalidSpec(format!("unknown piece kind `{other}`"))),
        })
    }
}

fn kind_params(kind: &PieceKind) -> Value {
    let v = match kind {
        PieceKind::Bump(b) => serde_json::to_value(b),
        PieceKind::Trig(t) => serde_json::to_value(t),
        PieceKind::Cogwheel(c) => serde_json::to_value(&c.spec),
        PieceKind::Sampled(p) => serde_json::to_value(p),
    };
    v.expect("curvature parameters serialize")
}

impl CurvatureDoc {
    pub fn from_function(f: &CurvatureFunction) -> Self {
        // Pieces sharing a kind allocation reuse one parameter serialization.
        let mut cache: Vec<(*const PieceKind, Value)> = Vec::new();
        let pieces = f
            .pieces()
            .iter()
            .map(|p| {
                let key = Arc::as_ptr(&p.kind);
                let params = match cache.iter().find(|(k, _)| *k == key) {
                    Some((_, v)) => v.clone(),
                    None => {
                        let v = kind_params(&p.kind);
                        cache.push((key, v.clone()));
                        v
                    }
                };
                PieceDoc {
                    kind: p.kind.name().to_string(),
                    interval: [p.start, p.end],
                    params,
                    shift: p.shift,
                    reversed: p.reversed,
                }
            })
            .collect();
        CurvatureDoc { period: f.period(), pieces }
    }

    pub fn to_function(&self) -> Result<CurvatureFunction> {
        let mut kinds: Vec<(String, Value, Arc<PieceKind>)> = Vec::new();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for d in &self.pieces {
            let kind = match kinds.iter().find(|(k, v, _)| *k == d.kind && *v == d.params) {
                Some((_, _, a)) => a.clone(),
                None => {
                    let a = Arc::new(d.to_kind()?);
                    kinds.push((d.kind.clone(), d.params.clone(), a.clone()));
                    a
                }
            };
            pieces.push(CurvaturePiece {
                start: d.interval[0],
                end: d.interval[1],
                shift: d.shift,
                reversed: d.reversed,
                kind,
            });
        }
        CurvatureFunction::new(self.period, pieces)
    }
}

impl CurvatureFunction {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CurvatureDoc = serde_json::from_str(text)?;
        doc.to_function()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CurvatureDoc::from_function(self)).expect("document serializes")
    }
}
