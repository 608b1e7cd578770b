//! Flat JSON wire formats for every value the command-line tools exchange.
//!
//! Coefficients travel as canonical rational strings: reduced, positive
//! denominator, and no `"/1"` suffix on integers. Serialization uses
//! sorted object keys throughout, so output bytes are deterministic, and
//! `parse -> serialize` is the identity on canonical forms.

use crate::chord::{lc_normalize, LinearChord};
use crate::error::{AlgebraError, Result};
use crate::expansion::Expansion;
use crate::homgoldman::{HGElement, PairingLattice};
use crate::necklace::Necklace;
use crate::sig::{BasisSymbol, SurfaceSignature, Word};
use crate::tensor::{PairTensor, Q, Tensor};
use num::One;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::str::FromStr;

/// Canonical string form of a rational: `"p"` or `"p/q"` with `q > 1`.
pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a rational from its canonical (or any `p/q`) string form.
pub fn q_from_string(text: &str) -> Result<Q> {
    let bad = || AlgebraError::Parse(format!("bad rational {text:?}"));
    match text.split_once('/') {
        None => {
            let n = num::BigInt::from_str(text).map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
        Some((p, q)) => {
            let p = num::BigInt::from_str(p).map_err(|_| bad())?;
            let q = num::BigInt::from_str(q).map_err(|_| bad())?;
            if q == num::BigInt::from(0) {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
    }
}

fn get<'v>(obj: &'v Value, key: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| AlgebraError::Parse(format!("missing field {key:?}")))
}

fn get_usize(obj: &Value, key: &str) -> Result<usize> {
    get(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| AlgebraError::Parse(format!("field {key:?} must be a non-negative integer")))
}

fn get_str<'v>(obj: &'v Value, key: &str) -> Result<&'v str> {
    get(obj, key)?
        .as_str()
        .ok_or_else(|| AlgebraError::Parse(format!("field {key:?} must be a string")))
}

fn get_array<'v>(obj: &'v Value, key: &str) -> Result<&'v Vec<Value>> {
    get(obj, key)?
        .as_array()
        .ok_or_else(|| AlgebraError::Parse(format!("field {key:?} must be an array")))
}

fn word_to_json(w: &Word) -> Value {
    Value::Array(w.0.iter().map(|s| Value::String(s.to_string())).collect())
}

fn word_from_json(v: &Value) -> Result<Word> {
    let arr = v
        .as_array()
        .ok_or_else(|| AlgebraError::Parse("word must be an array of symbols".into()))?;
    let mut out = Vec::with_capacity(arr.len());
    for s in arr {
        let text = s
            .as_str()
            .ok_or_else(|| AlgebraError::Parse("word letters must be strings".into()))?;
        out.push(BasisSymbol::parse(text)?);
    }
    Ok(Word(out))
}

pub fn tensor_to_json(t: &Tensor) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .iter()
        .map(|(w, c)| json!({"word": word_to_json(w), "coeff": q_to_string(c)}))
        .collect();
    json!({
        "genus": t.sig().genus,
        "boundary_extra": t.sig().boundary_extra,
        "trunc": t.sig().trunc,
        "terms": terms,
    })
}

pub fn tensor_from_json(v: &Value) -> Result<Tensor> {
    let sig = SurfaceSignature::new(
        get_usize(v, "genus")?,
        get_usize(v, "boundary_extra")?,
        get_usize(v, "trunc")?,
    )?;
    let mut out = Tensor::zero(sig);
    for term in get_array(v, "terms")? {
        let w = word_from_json(get(term, "word")?)?;
        for &s in &w.0 {
            sig.check_symbol(s)?;
        }
        if w.len() > sig.trunc {
            return Err(AlgebraError::Parse(format!(
                "word of length {} exceeds truncation {}",
                w.len(),
                sig.trunc
            )));
        }
        out.add_term(w, q_from_string(get_str(term, "coeff")?)?);
    }
    Ok(out)
}

pub fn pair_tensor_to_json(t: &PairTensor) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .iter()
        .map(|((l, r), c)| {
            json!({"left": word_to_json(l), "right": word_to_json(r), "coeff": q_to_string(c)})
        })
        .collect();
    json!({
        "genus": t.sig().genus,
        "boundary_extra": t.sig().boundary_extra,
        "trunc": t.sig().trunc,
        "terms": terms,
    })
}

pub fn pair_tensor_from_json(v: &Value) -> Result<PairTensor> {
    let sig = SurfaceSignature::new(
        get_usize(v, "genus")?,
        get_usize(v, "boundary_extra")?,
        get_usize(v, "trunc")?,
    )?;
    let mut out = PairTensor::zero(sig);
    for term in get_array(v, "terms")? {
        let l = word_from_json(get(term, "left")?)?;
        let r = word_from_json(get(term, "right")?)?;
        for &s in l.0.iter().chain(r.0.iter()) {
            sig.check_symbol(s)?;
        }
        out.add_term(l, r, q_from_string(get_str(term, "coeff")?)?);
    }
    Ok(out)
}

/// A necklace is serialized as its tensor plus a `"necklace": true` marker;
/// the cyclic-invariance invariant is re-checked on load.
pub fn necklace_to_json(u: &Necklace) -> Value {
    let mut obj = tensor_to_json(u.value());
    obj.as_object_mut()
        .expect("tensor json is an object")
        .insert("necklace".into(), Value::Bool(true));
    obj
}

pub fn necklace_from_json(v: &Value) -> Result<Necklace> {
    if get(v, "necklace")? != &Value::Bool(true) {
        return Err(AlgebraError::Parse("expected \"necklace\": true".into()));
    }
    Necklace::new(tensor_from_json(v)?)
}

fn sig_to_json(sig: SurfaceSignature) -> Value {
    json!({
        "genus": sig.genus,
        "boundary_extra": sig.boundary_extra,
        "trunc": sig.trunc,
    })
}

fn sig_from_json(v: &Value) -> Result<SurfaceSignature> {
    SurfaceSignature::new(
        get_usize(v, "genus")?,
        get_usize(v, "boundary_extra")?,
        get_usize(v, "trunc")?,
    )
}

pub fn expansion_to_json(e: &Expansion) -> Value {
    let mut log_values = Map::new();
    for (g, t) in e.log_values() {
        log_values.insert(g.to_string(), tensor_to_json(t));
    }
    json!({
        "sig": sig_to_json(e.sig()),
        "log_values": Value::Object(log_values),
    })
}

pub fn expansion_from_json(v: &Value) -> Result<Expansion> {
    let sig = sig_from_json(get(v, "sig")?)?;
    let obj = get(v, "log_values")?
        .as_object()
        .ok_or_else(|| AlgebraError::Parse("log_values must be an object".into()))?;
    let mut values = BTreeMap::new();
    for (key, tv) in obj {
        let g = crate::freegroup::Generator::parse(key)?;
        values.insert(g, tensor_from_json(tv)?);
    }
    Expansion::new(sig, values)
}

pub fn diagram_to_json(c: &LinearChord) -> Value {
    let pairs: Vec<Value> = c
        .pairs()
        .iter()
        .map(|&(i, j)| json!([i, j]))
        .collect();
    json!({
        "m": c.chords(),
        "pairs": pairs,
        "sign": c.sign(),
    })
}

pub fn diagram_from_json(v: &Value) -> Result<LinearChord> {
    let m = get_usize(v, "m")?;
    let mut pairs = Vec::with_capacity(m);
    for p in get_array(v, "pairs")? {
        let arr = p
            .as_array()
            .ok_or_else(|| AlgebraError::Parse("pairs must be two-element arrays".into()))?;
        if arr.len() != 2 {
            return Err(AlgebraError::Parse("pairs must be two-element arrays".into()));
        }
        let i = arr[0]
            .as_u64()
            .ok_or_else(|| AlgebraError::Parse("pair entries must be positive integers".into()))?;
        let j = arr[1]
            .as_u64()
            .ok_or_else(|| AlgebraError::Parse("pair entries must be positive integers".into()))?;
        pairs.push((i as usize, j as usize));
    }
    if pairs.len() != m {
        return Err(AlgebraError::Parse(format!(
            "declared {m} chords but found {}",
            pairs.len()
        )));
    }
    let sign = get(v, "sign")?
        .as_i64()
        .filter(|s| *s == 1 || *s == -1)
        .ok_or_else(|| AlgebraError::Parse("sign must be 1 or -1".into()))?;
    let c = lc_normalize(&pairs)?;
    if sign * c.sign() < 0 {
        // represent the negated diagram by the label-swapped first pair
        let mut flipped = c.pairs().to_vec();
        let (i, j) = flipped[0];
        flipped[0] = (j, i);
        return lc_normalize(&flipped);
    }
    Ok(c)
}

pub fn lattice_to_json(l: &PairingLattice) -> Value {
    json!({
        "rank": l.rank(),
        "matrix": l.matrix(),
    })
}

pub fn lattice_from_json(v: &Value) -> Result<PairingLattice> {
    let rank = get_usize(v, "rank")?;
    let rows = get_array(v, "matrix")?;
    let mut matrix = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| AlgebraError::Parse("matrix rows must be arrays".into()))?;
        let mut out_row = Vec::with_capacity(row.len());
        for e in row {
            out_row.push(
                e.as_i64()
                    .ok_or_else(|| AlgebraError::Parse("matrix entries must be integers".into()))?,
            );
        }
        matrix.push(out_row);
    }
    if matrix.len() != rank {
        return Err(AlgebraError::Parse(format!(
            "declared rank {rank} but matrix has {} rows",
            matrix.len()
        )));
    }
    PairingLattice::new(matrix)
}

pub fn hg_to_json(u: &HGElement) -> Value {
    let terms: Vec<Value> = u
        .terms()
        .iter()
        .map(|(x, c)| json!({"vec": x, "coeff": q_to_string(c)}))
        .collect();
    json!({
        "rank": u.rank(),
        "terms": terms,
    })
}

pub fn hg_from_json(v: &Value) -> Result<HGElement> {
    let rank = get_usize(v, "rank")?;
    let mut out = HGElement::zero(rank);
    for term in get_array(v, "terms")? {
        let vec_v = get_array(term, "vec")?;
        let mut x = Vec::with_capacity(vec_v.len());
        for e in vec_v {
            x.push(
                e.as_i64()
                    .ok_or_else(|| AlgebraError::Parse("vec entries must be integers".into()))?,
            );
        }
        if x.len() != rank {
            return Err(AlgebraError::Parse(format!(
                "class vector length {} does not match rank {rank}",
                x.len()
            )));
        }
        out.add_term(x, q_from_string(get_str(term, "coeff")?)?);
    }
    Ok(out)
}

/// Compact deterministic rendering (sorted keys, no whitespace).
pub fn to_bytes(v: &Value) -> String {
    serde_json::to_string(v).expect("in-memory JSON always serializes")
}

pub fn from_bytes(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| AlgebraError::Parse(format!("bad JSON: {e}")))
}
