use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Field, NormOracle, Polytope, Representation, Space, SubspaceNorm, SumMode};
use crate::error::{Error, Result};

/// Serialized form of a [`Space`]:
/// `{field, dim, rep: {kind, vertices?, facets?, family?, params?}, expr}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub field: Field,
    pub dim: usize,
    pub rep: RepJson,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
}

fn rows(vs: &[DVector<f64>]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.iter().copied().collect()).collect()
}

fn vectors(rows: &[Vec<f64>]) -> Vec<DVector<f64>> {
    rows.iter().map(|r| DVector::from_column_slice(r)).collect()
}

fn exponent_to_json(p: f64) -> Value {
    if p.is_infinite() {
        json!("inf")
    } else {
        json!(p)
    }
}

fn exponent_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::input("bad exponent")),
        _ => Err(Error::input("exponent must be a number or \"inf\"")),
    }
}

impl Space {
    pub fn to_json(&self) -> Result<SpaceJson> {
        let rep = match self.rep() {
            Representation::Polytope(p) => RepJson {
                kind: "polytope".into(),
                vertices: Some(rows(p.vertices())),
                facets: Some(rows(p.facets())),
                family: None,
                params: None,
            },
            Representation::Oracle(o) => {
                let (family, params) = match o {
                    NormOracle::Lp { p } => ("lp", json!({ "p": exponent_to_json(*p) })),
                    NormOracle::Hilbert => ("hilbert", json!({})),
                    NormOracle::Subspace(s) | NormOracle::SubspaceDual(s) => {
                        let basis: Vec<Vec<f64>> =
                            s.basis().column_iter().map(|c| c.iter().copied().collect()).collect();
                        (
                            "subspace",
                            json!({
                                "ambient_facets": rows(s.ambient_facets()),
                                "basis": basis,
                                "dual": matches!(o, NormOracle::SubspaceDual(_)),
                            }),
                        )
                    }
                    NormOracle::Sum { mode, parts } => (
                        "sum",
                        json!({
                            "mode": mode,
                            "left": parts.0.to_json()?,
                            "right": parts.1.to_json()?,
                        }),
                    ),
                    NormOracle::Custom(c) => ("custom", json!({ "name": c.name })),
                };
                RepJson {
                    kind: "oracle".into(),
                    vertices: None,
                    facets: None,
                    family: Some(family.into()),
                    params: Some(params),
                }
            }
        };
        Ok(SpaceJson {
            field: self.field(),
            dim: self.dim(),
            rep,
            expr: self.expr().to_string(),
        })
    }

    pub fn from_json(j: &SpaceJson) -> Result<Space> {
        let space = match j.rep.kind.as_str() {
            "polytope" => {
                if j.field != Field::Real {
                    return Err(Error::unsupported("complex spaces cannot carry a polytope"));
                }
                let vs = j
                    .rep
                    .vertices
                    .as_ref()
                    .ok_or_else(|| Error::input("polytope without vertices"))?;
                let fs = j
                    .rep
                    .facets
                    .as_ref()
                    .ok_or_else(|| Error::input("polytope without facets"))?;
                Space::from_polytope(Polytope::from_parts(vectors(vs), vectors(fs))?, j.expr.clone())
            }
            "oracle" => {
                let family = j
                    .rep
                    .family
                    .as_deref()
                    .ok_or_else(|| Error::input("oracle without family"))?;
                let params = j.rep.params.clone().unwrap_or(Value::Null);
                let oracle = match family {
                    "lp" => NormOracle::Lp {
                        p: exponent_from_json(&params["p"])?,
                    },
                    "hilbert" => NormOracle::Hilbert,
                    "subspace" => {
                        let facets: Vec<Vec<f64>> = serde_json::from_value(params["ambient_facets"].clone())?;
                        let basis: Vec<Vec<f64>> = serde_json::from_value(params["basis"].clone())?;
                        let cols = vectors(&basis);
                        if cols.is_empty() {
                            return Err(Error::input("empty subspace basis"));
                        }
                        let s = Arc::new(SubspaceNorm::new(vectors(&facets), DMatrix::from_columns(&cols))?);
                        if params["dual"].as_bool().unwrap_or(false) {
                            NormOracle::SubspaceDual(s)
                        } else {
                            NormOracle::Subspace(s)
                        }
                    }
                    "sum" => {
                        let mode: SumMode = serde_json::from_value(params["mode"].clone())?;
                        let left: SpaceJson = serde_json::from_value(params["left"].clone())?;
                        let right: SpaceJson = serde_json::from_value(params["right"].clone())?;
                        NormOracle::Sum {
                            mode,
                            parts: Arc::new((Space::from_json(&left)?, Space::from_json(&right)?)),
                        }
                    }
                    "custom" => {
                        return Err(Error::unsupported("custom norms cannot be deserialized"));
                    }
                    other => return Err(Error::input(format!("unknown oracle family '{other}'"))),
                };
                Space::from_oracle(j.field, j.dim, oracle, j.expr.clone())?
            }
            other => return Err(Error::input(format!("unknown representation kind '{other}'"))),
        };
        Error::check_dim(j.dim, space.dim())?;
        Ok(space)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json()?)?)
    }

    pub fn from_json_str(s: &str) -> Result<Space> {
        Space::from_json(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polytope_json_shape() {
        let s = Space::from_polytope(Polytope::cube(2).unwrap(), "linf(2)");
        let v: Value = serde_json::to_value(s.to_json().unwrap()).unwrap();
        assert_eq!(v["field"], "real");
        assert_eq!(v["dim"], 2);
        assert_eq!(v["rep"]["kind"], "polytope");
        assert_eq!(v["rep"]["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(v["expr"], "linf(2)");
        assert!(v["rep"].get("family").is_none());
    }

    #[test]
    fn oracle_json_roundtrip() {
        let l = Space::from_oracle(Field::Complex, 3, NormOracle::Lp { p: f64::INFINITY }, "x").unwrap();
        let back = Space::from_json_str(&l.to_json_string().unwrap()).unwrap();
        assert_eq!(back.field(), Field::Complex);
        assert!(matches!(back.oracle(), Some(NormOracle::Lp { p }) if p.is_infinite()));
        assert!(Space::from_json_str(r#"{"field":"real","dim":2,"rep":{"kind":"blob"},"expr":""}"#).is_err());
    }
}
