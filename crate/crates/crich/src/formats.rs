//! JSON documents exchanged by the command line.
//!
//! Every object written carries `"format": 1`. Readers accept the bare
//! array forms for sets, families and block systems, and also an object
//! wrapping them under a named key, so any emitted document can be fed
//! back in.

use std::path::Path;

use crich_core::cr::{CrWitness, FunFamily, SeqFun};
use crich_core::semigroup::Family;
use crich_core::transfer::{CompressionPlan, Compressed};
use crich_core::{BlockSeq, Element, ElementSet, FinSet, FiniteSemigroup, SetFamily};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

pub const FORMAT: u64 = 1;

fn format_one() -> u64 {
    FORMAT
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupDoc {
    #[serde(default = "format_one")]
    pub format: u64,
    pub n: usize,
    pub table: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqFunDoc {
    pub values: Vec<u32>,
    pub default: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    #[serde(default = "format_one")]
    pub format: u64,
    pub m: usize,
    pub a: Vec<u32>,
    pub t: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDoc {
    #[serde(default = "format_one")]
    pub format: u64,
    pub blocks: Vec<Vec<u32>>,
    pub d: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompressedDoc {
    #[serde(default = "format_one")]
    pub format: u64,
    pub set: Vec<u32>,
    pub word: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn check_format(v: &Value) -> Result<(), CliError> {
    match v.get("format") {
        None => Ok(()),
        Some(f) if f.as_u64() == Some(FORMAT) => Ok(()),
        Some(f) => Err(bad(format!("unsupported format version {f}"))),
    }
}

/// Inline JSON if the argument looks like JSON, otherwise the file it names.
pub fn read_value(arg: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(serde_json::from_str(arg)?);
    }
    let text = std::fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.into(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Pulls `key` out of a wrapping object; other values pass through.
fn unwrap_key(v: Value, key: &str) -> Result<Value, CliError> {
    match v {
        Value::Object(mut map) if map.contains_key(key) => {
            check_format(&Value::Object(map.clone()))?;
            Ok(map.remove(key).expect("checked"))
        }
        other => Ok(other),
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, CliError> {
    Ok(serde_json::from_value(v)?)
}

// semigroups

/// A semigroup argument: inline JSON, a file, or a family name such as
/// `cyclic:3` or `trivial`.
pub fn load_semigroup(arg: &str, skip_validate: bool) -> Result<(FiniteSemigroup, Option<String>), CliError> {
    let trimmed = arg.trim_start();
    if !trimmed.starts_with('{') && !Path::new(arg).exists() {
        if let Ok(fam) = arg.parse::<Family>() {
            return Ok((fam.build()?, Some(fam.to_string())));
        }
    }
    semigroup_from_value(read_value(arg)?, skip_validate)
}

pub fn semigroup_from_value(v: Value, skip_validate: bool) -> Result<(FiniteSemigroup, Option<String>), CliError> {
    check_format(&v)?;
    let doc: SemigroupDoc = from_value(v)?;
    if doc.n != doc.table.len() {
        return Err(bad(format!("\"n\" is {} but the table has {} rows", doc.n, doc.table.len())));
    }
    let sgp = if skip_validate {
        FiniteSemigroup::from_rows_unchecked(&doc.table)?
    } else {
        FiniteSemigroup::from_rows(&doc.table)?
    };
    Ok((sgp, doc.name))
}

pub fn semigroup_doc(sgp: &FiniteSemigroup, name: Option<&str>) -> Value {
    json!(SemigroupDoc { format: FORMAT, n: sgp.order(), table: sgp.rows(), name: name.map(str::to_owned) })
}

// element sets

/// A target subset: a JSON array of element indices, or `all`.
pub fn load_element_set(arg: &str, sgp: &FiniteSemigroup) -> Result<ElementSet, CliError> {
    if arg.trim() == "all" {
        return Ok(ElementSet::full(sgp.order()));
    }
    let idx: Vec<u32> = from_value(unwrap_key(read_value(arg)?, "set")?)?;
    Ok(ElementSet::from_indices(sgp, idx)?)
}

pub fn element_set_value(set: &ElementSet) -> Value {
    json!(set.iter().map(|e| e.0).collect::<Vec<_>>())
}

// finite sets, families of sets, block systems

pub fn finset_from_value(v: Value) -> Result<FinSet, CliError> {
    let members: Vec<u32> = from_value(v)?;
    Ok(FinSet::from_members(members)?)
}

pub fn finset_value(s: FinSet) -> Value {
    json!(s.to_vec())
}

pub fn load_set_family(arg: &str) -> Result<SetFamily, CliError> {
    let sets: Vec<Value> = from_value(unwrap_key(read_value(arg)?, "family")?)?;
    sets.into_iter().map(finset_from_value).collect::<Result<SetFamily, _>>()
}

pub fn set_family_value(fam: &SetFamily) -> Value {
    Value::Array(fam.iter().map(finset_value).collect())
}

pub fn blockseq_from_value(v: Value) -> Result<BlockSeq, CliError> {
    let blocks: Vec<Value> = from_value(v)?;
    let blocks = blocks.into_iter().map(finset_from_value).collect::<Result<Vec<_>, _>>()?;
    Ok(BlockSeq::new(blocks)?)
}

pub fn load_blockseq(arg: &str) -> Result<BlockSeq, CliError> {
    blockseq_from_value(unwrap_key(read_value(arg)?, "blocks")?)
}

pub fn blockseq_value(b: &BlockSeq) -> Value {
    Value::Array(b.blocks().iter().map(|&s| finset_value(s)).collect())
}

// sequences and families of sequences

fn element(sgp: &FiniteSemigroup, idx: u32) -> Result<Element, CliError> {
    Ok(sgp.element(idx)?)
}

pub fn seqfun_from_doc(doc: SeqFunDoc, sgp: &FiniteSemigroup) -> Result<SeqFun, CliError> {
    let values = doc.values.iter().map(|&v| element(sgp, v)).collect::<Result<Vec<_>, _>>()?;
    Ok(SeqFun::new(values, element(sgp, doc.default)?)?)
}

pub fn seqfun_value(f: &SeqFun) -> Value {
    json!(SeqFunDoc { values: f.values().iter().map(|e| e.0).collect(), default: f.default_value().0 })
}

/// A family: an array of sequence objects, or `{"format": 1, "funs": [...]}`.
pub fn load_family(arg: &str, sgp: &FiniteSemigroup) -> Result<FunFamily, CliError> {
    family_from_value(read_value(arg)?, sgp)
}

pub fn family_from_value(v: Value, sgp: &FiniteSemigroup) -> Result<FunFamily, CliError> {
    let docs: Vec<SeqFunDoc> = match unwrap_key(v, "funs")? {
        single @ Value::Object(_) => vec![from_value(single)?],
        other => from_value(other)?,
    };
    let funs = docs.into_iter().map(|d| seqfun_from_doc(d, sgp)).collect::<Result<Vec<_>, _>>()?;
    Ok(FunFamily::new(funs)?)
}

pub fn family_value(funs: &[SeqFun]) -> Value {
    json!({ "format": FORMAT, "funs": funs.iter().map(seqfun_value).collect::<Vec<_>>() })
}

// witnesses

pub fn witness_from_doc(doc: WitnessDoc, sgp: &FiniteSemigroup) -> Result<CrWitness, CliError> {
    if doc.format != FORMAT {
        return Err(bad(format!("unsupported format version {}", doc.format)));
    }
    if doc.m != doc.t.len() {
        return Err(bad(format!("\"m\" is {} but \"t\" has {} entries", doc.m, doc.t.len())));
    }
    let a = doc.a.iter().map(|&v| element(sgp, v)).collect::<Result<Vec<_>, _>>()?;
    Ok(CrWitness::new(a, doc.t)?)
}

/// A witness document, or any document holding one under `"witness"`.
pub fn load_witness(arg: &str, sgp: &FiniteSemigroup) -> Result<CrWitness, CliError> {
    let v = unwrap_key(read_value(arg)?, "witness")?;
    if v.is_null() {
        return Err(bad("the document holds no witness"));
    }
    witness_from_doc(from_value(v)?, sgp)
}

pub fn witness_doc(w: &CrWitness) -> WitnessDoc {
    WitnessDoc {
        format: FORMAT,
        m: w.m(),
        a: w.word().iter().map(|e| e.0).collect(),
        t: w.indices().to_vec(),
    }
}

pub fn witness_value(w: &CrWitness) -> Value {
    json!(witness_doc(w))
}

// compression

pub fn load_plan(arg: &str, sgp: &FiniteSemigroup) -> Result<CompressionPlan, CliError> {
    let v = read_value(arg)?;
    check_format(&v)?;
    let doc: PlanDoc = from_value(v)?;
    let blocks = doc.blocks.into_iter().map(|b| finset_from_value(json!(b))).collect::<Result<Vec<_>, _>>()?;
    Ok(CompressionPlan::new(BlockSeq::new(blocks)?, element(sgp, doc.d)?))
}

pub fn plan_value(plan: &CompressionPlan) -> Value {
    json!(PlanDoc {
        format: FORMAT,
        blocks: plan.blocks().blocks().iter().map(|b| b.to_vec()).collect(),
        d: plan.filler().0,
    })
}

pub fn load_compressed(arg: &str, sgp: &FiniteSemigroup) -> Result<Compressed, CliError> {
    let v = read_value(arg)?;
    check_format(&v)?;
    let doc: CompressedDoc = from_value(v)?;
    let word = doc.word.iter().map(|&v| element(sgp, v)).collect::<Result<Vec<_>, _>>()?;
    Ok(Compressed { set: FinSet::from_members(doc.set)?, word })
}

pub fn compressed_value(out: &Compressed) -> Result<Value, CliError> {
    let witness = out.to_witness()?;
    Ok(json!(CompressedDoc {
        format: FORMAT,
        set: out.set.to_vec(),
        word: out.word.iter().map(|e| e.0).collect(),
        witness: Some(witness_doc(&witness)),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteSemigroup {
        Family::Cyclic(2).build().unwrap()
    }

    #[test]
    fn semigroup_round_trip() {
        let s = Family::FullTransformation(2).build().unwrap();
        let doc = semigroup_doc(&s, Some("full_transformation(2)"));
        assert_eq!(doc["format"], 1);
        let (back, name) = semigroup_from_value(doc, false).unwrap();
        assert_eq!(back, s);
        assert_eq!(name.as_deref(), Some("full_transformation(2)"));
    }

    #[test]
    fn semigroup_refusals() {
        let v = json!({"n": 2, "table": [[0, 1], [1, 1], [0, 0]]});
        assert!(matches!(semigroup_from_value(v, false), Err(CliError::Input(_))));
        let v = json!({"n": 2, "table": [[1, 0], [0, 0]]});
        assert!(semigroup_from_value(v.clone(), false).is_err());
        assert!(semigroup_from_value(v, true).is_ok());
        let v = json!({"format": 2, "n": 1, "table": [[0]]});
        assert!(semigroup_from_value(v, false).is_err());
        let v = json!({"n": 1, "table": [[0]], "extra": 0});
        assert!(semigroup_from_value(v, false).is_err());
    }

    #[test]
    fn family_forms() {
        let s = z2();
        let bare = family_from_value(json!([{"values": [1, 0], "default": 0}]), &s).unwrap();
        let single = family_from_value(json!({"values": [1, 0], "default": 0}), &s).unwrap();
        let wrapped = family_from_value(family_value(bare.funs()), &s).unwrap();
        assert_eq!(bare, single);
        assert_eq!(bare, wrapped);
        assert!(family_from_value(json!([{"values": [2], "default": 0}]), &s).is_err());
    }

    #[test]
    fn witness_round_trip() {
        let s = z2();
        let w = CrWitness::new(vec![Element(0), Element(1), Element(0)], vec![1, 3]).unwrap();
        let v = witness_value(&w);
        assert_eq!(v, json!({"format": 1, "m": 2, "a": [0, 1, 0], "t": [1, 3]}));
        assert_eq!(witness_from_doc(serde_json::from_value(v).unwrap(), &s).unwrap(), w);
        let lying = json!({"m": 3, "a": [0, 1, 0], "t": [1, 3]});
        assert!(witness_from_doc(serde_json::from_value(lying).unwrap(), &s).is_err());
    }

    #[test]
    fn sets_and_blocks() {
        let fam = set_family_value(&SetFamily::new(vec![
            FinSet::from_members([2u32, 1]).unwrap(),
            FinSet::singleton(3).unwrap(),
        ]));
        assert_eq!(fam, json!([[1, 2], [3]]));
        let b = blockseq_from_value(json!([[1, 2], [4]])).unwrap();
        assert_eq!(blockseq_value(&b), json!([[1, 2], [4]]));
        assert!(blockseq_from_value(json!([[1, 4], [2]])).is_err());
        assert!(finset_from_value(json!([])).is_err());
    }
}
