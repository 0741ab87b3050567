//! JSON formats for fans, covers, piecewise-linear functions and bundles.
//!
//! A fan is referenced either by the name of a bundled fan, by a path to a
//! fan file (relative to the referring document), or inline.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cover::{CoverCell, CoverPoset};
use crate::data;
use crate::error::{Error, Result};
use crate::fan::{Fan, FanData};
use crate::klyachko::{Filtration, KlyachkoData, Piece, SplittingCertificate};
use crate::linalg::{Rational, Subspace};
use crate::monodromy::{MonodromyAssignment, MonodromyContext};
use crate::pl::PLFunction;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanRef {
    Named(String),
    Inline(FanData),
}

impl FanRef {
    pub fn resolve(&self, dir: Option<&Path>) -> Result<Fan> {
        match self {
            FanRef::Inline(d) => Fan::from_data(d),
            FanRef::Named(name) => {
                if let Some(text) = data::fan_text(name) {
                    return Fan::from_json(text);
                }
                let path = dir.map_or_else(|| Path::new(name).to_path_buf(), |d| d.join(name));
                load_fan(&path)
            }
        }
    }
}

pub fn load_fan(path: &Path) -> Result<Fan> {
    Fan::from_json(&std::fs::read_to_string(path)?)
}

/// A fan by bundled name or file path.
pub fn fan_by_name_or_path(name: &str) -> Result<Fan> {
    FanRef::Named(name.to_string()).resolve(None)
}

pub fn rational_to_json(x: &Rational) -> Value {
    if x.is_integer() {
        match i64::try_from(x.to_integer()) {
            Ok(v) => json!(v),
            Err(_) => json!(x.to_integer().to_string()),
        }
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Format(format!("{n} is not an integer"))),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Format(format!("expected a rational, found {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Format(format!("cannot parse {s:?} as a rational"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn vector_from_json(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::Format(format!("expected an array, found {v}")))?
        .iter()
        .map(rational_from_json)
        .collect()
}

fn vectors_to_json(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(rational_to_json).collect())).collect())
}

#[derive(Debug, Serialize, Deserialize)]
struct CoverDoc {
    fan: FanRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cells: Option<Vec<CoverCell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monodromy: Option<MonodromyAssignment>,
}

/// Reads a cover given by explicit cells and face pairs or by a monodromy
/// assignment over the referenced fan.
pub fn cover_from_json(text: &str, dir: Option<&Path>) -> Result<CoverPoset> {
    let doc: CoverDoc = serde_json::from_str(text)?;
    let fan = Arc::new(doc.fan.resolve(dir)?);
    match (doc.cells, doc.monodromy) {
        (Some(cells), None) => {
            let faces: Vec<(usize, usize)> = doc.faces.unwrap_or_default().iter().map(|p| (p[0], p[1])).collect();
            CoverPoset::new(fan, cells, &faces)
        }
        (None, Some(a)) => MonodromyContext::new(fan)?.build_cover(&a),
        _ => Err(Error::Format("a cover needs exactly one of \"cells\" or \"monodromy\"".into())),
    }
}

/// Writes a cover with explicit cells and its covering pairs.
pub fn cover_to_json(cover: &CoverPoset, fan: FanRef) -> String {
    let doc = CoverDoc {
        fan,
        cells: Some(cover.cells().to_vec()),
        faces: Some(cover.covering_pairs().into_iter().map(|(a, b)| [a, b]).collect()),
        monodromy: None,
    };
    serde_json::to_string_pretty(&doc).expect("covers serialize")
}

/// `{"cells": [{"base": k, "copy": j, "u": [...]}]}` with `k` the index of
/// the base maximal cone.
pub fn pl_to_json(f: &PLFunction) -> Value {
    let cover = f.cover();
    let fan = cover.fan();
    let cells: Vec<Value> = f
        .cells()
        .iter()
        .zip(f.slopes())
        .map(|(&c, u)| {
            let cell = cover.cell(c);
            json!({
                "base": fan.max_index(cell.base).unwrap(),
                "copy": cell.copy,
                "u": Value::Array(u.iter().map(rational_to_json).collect()),
            })
        })
        .collect();
    json!({ "cells": cells })
}

pub fn pl_from_json(cover: Arc<CoverPoset>, v: &Value) -> Result<PLFunction> {
    let fan = cover.fan().clone();
    let mut slopes: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    let cells = v["cells"].as_array().ok_or_else(|| Error::Format("missing \"cells\"".into()))?;
    for entry in cells {
        let k = entry["base"].as_u64().ok_or_else(|| Error::Format("missing \"base\"".into()))? as usize;
        let copy = entry["copy"].as_u64().ok_or_else(|| Error::Format("missing \"copy\"".into()))? as usize;
        if k >= fan.num_max_cones() {
            return Err(Error::Format(format!("no maximal cone {k}")));
        }
        let base = fan.max_cones()[k];
        let cell = (0..cover.len())
            .find(|&c| cover.cell(c).base == base && cover.cell(c).copy == copy)
            .ok_or_else(|| Error::Format(format!("no cell ({k}, {copy})")))?;
        slopes.insert(cell, vector_from_json(&entry["u"])?);
    }
    let ordered = cover
        .maximal_cells()
        .iter()
        .map(|c| slopes.remove(c).ok_or_else(|| Error::Format(format!("no slope for cell {c}"))))
        .collect::<Result<Vec<_>>>()?;
    PLFunction::new(cover, ordered)
}

/// Filtration data with an optional splitting.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub data: KlyachkoData,
    pub certificate: Option<SplittingCertificate>,
}

fn subspace_from_json(rank: usize, v: &Value) -> Result<Subspace> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Format("a subspace is a list of vectors".into()))?
        .iter()
        .map(vector_from_json)
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(rank, &rows)
}

fn keyed<'a>(v: &'a Value, field: &str, count: usize) -> Result<Vec<Option<&'a Value>>> {
    let mut out = vec![None; count];
    let Some(map) = v.get(field) else { return Ok(out) };
    let map = map.as_object().ok_or_else(|| Error::Format(format!("\"{field}\" must be an object")))?;
    for (key, value) in map {
        let i: usize = key.parse().map_err(|_| Error::Format(format!("bad index {key:?} in \"{field}\"")))?;
        if i >= count {
            return Err(Error::Format(format!("index {i} out of range in \"{field}\"")));
        }
        out[i] = Some(value);
    }
    Ok(out)
}

pub fn bundle_from_json(text: &str, dir: Option<&Path>) -> Result<Bundle> {
    let v: Value = serde_json::from_str(text)?;
    let fan_ref: FanRef = serde_json::from_value(v.get("fan").cloned().ok_or_else(|| Error::Format("missing \"fan\"".into()))?)?;
    let fan = Arc::new(fan_ref.resolve(dir)?);
    let rank = v["rank"].as_u64().ok_or_else(|| Error::Format("missing \"rank\"".into()))? as usize;
    let mut filtrations = Vec::with_capacity(fan.num_rays());
    for (r, entry) in keyed(&v, "filtrations", fan.num_rays())?.into_iter().enumerate() {
        let entry = entry.ok_or_else(|| Error::InvalidBundle(format!("no filtration for ray {r}")))?;
        let steps = entry
            .as_array()
            .ok_or_else(|| Error::Format("a filtration is a list of steps".into()))?
            .iter()
            .map(|s| {
                let t = s["threshold"].as_i64().ok_or_else(|| Error::Format("missing \"threshold\"".into()))?;
                Ok((t, subspace_from_json(rank, &s["subspace"])?))
            })
            .collect::<Result<Vec<_>>>()?;
        filtrations.push(Filtration::new(rank, steps)?);
    }
    let data = KlyachkoData::new(fan.clone(), rank, filtrations)?;
    let certificate = if v.get("splittings").is_some() {
        let mut cones = Vec::with_capacity(fan.num_max_cones());
        for (k, entry) in keyed(&v, "splittings", fan.num_max_cones())?.into_iter().enumerate() {
            let entry = entry.ok_or_else(|| Error::InvalidBundle(format!("no splitting for cone {k}")))?;
            let pieces = entry
                .as_array()
                .ok_or_else(|| Error::Format("a splitting is a list of pieces".into()))?
                .iter()
                .map(|p| {
                    let u = p["u"]
                        .as_array()
                        .ok_or_else(|| Error::Format("missing \"u\"".into()))?
                        .iter()
                        .map(|x| x.as_i64().ok_or_else(|| Error::Format("functionals are integral".into())))
                        .collect::<Result<Vec<i64>>>()?;
                    Ok(Piece { u, subspace: subspace_from_json(rank, &p["subspace"])? })
                })
                .collect::<Result<Vec<_>>>()?;
            cones.push(pieces);
        }
        Some(SplittingCertificate { cones })
    } else {
        None
    };
    Ok(Bundle { data, certificate })
}

pub fn bundle_to_json(bundle: &Bundle, fan: FanRef) -> Value {
    let filtrations: serde_json::Map<String, Value> = bundle
        .data
        .filtrations()
        .iter()
        .enumerate()
        .map(|(r, f)| {
            let steps: Vec<Value> =
                f.steps().iter().map(|(t, s)| json!({"threshold": t, "subspace": vectors_to_json(s.basis())})).collect();
            (r.to_string(), Value::Array(steps))
        })
        .collect();
    let mut doc = json!({
        "fan": serde_json::to_value(fan).expect("fan references serialize"),
        "rank": bundle.data.rank(),
        "filtrations": filtrations,
    });
    if let Some(cert) = &bundle.certificate {
        let splittings: serde_json::Map<String, Value> = cert
            .cones
            .iter()
            .enumerate()
            .map(|(k, pieces)| {
                let ps: Vec<Value> =
                    pieces.iter().map(|p| json!({"u": p.u, "subspace": vectors_to_json(p.subspace.basis())})).collect();
                (k.to_string(), Value::Array(ps))
            })
            .collect();
        doc["splittings"] = Value::Object(splittings);
    }
    doc
}
