//! File formats: structures, expanded structures, fragment manifests, level
//! chains, and coloring documents.
//!
//! Everything is JSON with a fixed key order, two-space indentation, inline
//! integer arrays, and a trailing newline, so any document round-trips
//! byte-exactly through parse/serialize.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::arrows::Coloring;
use crate::error::{Error, Result};
use crate::expansions::{
    ClassFragment, ExpandedStructure, ExpansionSignature, FragmentSignature, PatternClasses,
};
use crate::koenig::LevelChain;
use crate::kriz::WitnessFamily;
use crate::structure::{FiniteStructure, RelationSymbol, Signature};

/// Minimal JSON document model with deterministic key order.
enum JVal {
    Null,
    Int(u64),
    Str(String),
    Arr(Vec<JVal>),
    Obj(Vec<(String, JVal)>),
}

impl JVal {
    fn write(&self, indent: usize, out: &mut String) {
        match self {
            JVal::Null => out.push_str("null"),
            JVal::Int(v) => out.push_str(&v.to_string()),
            JVal::Str(s) => out.push_str(&serde_json::to_string(s).unwrap()),
            JVal::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                } else if items.iter().all(|i| matches!(i, JVal::Int(_))) {
                    out.push('[');
                    for (i, item) in items.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        item.write(indent, out);
                    }
                    out.push(']');
                } else {
                    out.push_str("[\n");
                    for (i, item) in items.iter().enumerate() {
                        out.push_str(&"  ".repeat(indent + 1));
                        item.write(indent + 1, out);
                        if i + 1 < items.len() {
                            out.push(',');
                        }
                        out.push('\n');
                    }
                    out.push_str(&"  ".repeat(indent));
                    out.push(']');
                }
            }
            JVal::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                let scalar = fields
                    .iter()
                    .all(|(_, v)| matches!(v, JVal::Int(_) | JVal::Str(_) | JVal::Null));
                if scalar && fields.len() <= 3 {
                    out.push('{');
                    for (i, (k, v)) in fields.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        out.push_str(&serde_json::to_string(k).unwrap());
                        out.push_str(": ");
                        v.write(indent, out);
                    }
                    out.push('}');
                } else {
                    out.push_str("{\n");
                    for (i, (k, v)) in fields.iter().enumerate() {
                        out.push_str(&"  ".repeat(indent + 1));
                        out.push_str(&serde_json::to_string(k).unwrap());
                        out.push_str(": ");
                        v.write(indent + 1, out);
                        if i + 1 < fields.len() {
                            out.push(',');
                        }
                        out.push('\n');
                    }
                    out.push_str(&"  ".repeat(indent));
                    out.push('}');
                }
            }
        }
    }

    fn render(&self) -> String {
        let mut out = String::new();
        self.write(0, &mut out);
        out.push('\n');
        out
    }
}

fn signature_value(sig: &Signature) -> JVal {
    JVal::Arr(
        sig.relations()
            .iter()
            .map(|r| {
                JVal::Obj(vec![
                    ("name".to_string(), JVal::Str(r.name.clone())),
                    ("arity".to_string(), JVal::Int(r.arity as u64)),
                ])
            })
            .collect(),
    )
}

fn structure_value(s: &FiniteStructure) -> JVal {
    let relations = JVal::Obj(
        s.signature()
            .relations()
            .iter()
            .enumerate()
            .map(|(idx, sym)| {
                let tuples = JVal::Arr(
                    s.tuples(idx)
                        .iter()
                        .map(|t| JVal::Arr(t.iter().map(|&x| JVal::Int(x as u64)).collect()))
                        .collect(),
                );
                (sym.name.clone(), tuples)
            })
            .collect(),
    );
    JVal::Obj(vec![
        ("signature".to_string(), signature_value(s.signature())),
        ("size".to_string(), JVal::Int(s.size() as u64)),
        ("relations".to_string(), relations),
    ])
}

/// Canonical text form of a structure document.
pub fn structure_to_string(s: &FiniteStructure) -> String {
    structure_value(s).render()
}

fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::parse(format!("{} must be a JSON object", what)))
}

fn field<'v>(obj: &'v serde_json::Map<String, Value>, key: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(format!("missing field {:?}", key)))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::parse(format!("{} must be a non-negative integer", what)))
}

fn parse_signature_value(v: &Value) -> Result<Signature> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::parse("signature must be a list"))?;
    let mut symbols = Vec::new();
    for entry in arr {
        let obj = as_object(entry, "signature entry")?;
        let name = field(obj, "name")?
            .as_str()
            .ok_or_else(|| Error::parse("relation name must be a string"))?;
        let arity = as_usize(field(obj, "arity")?, "arity")?;
        symbols.push(RelationSymbol::new(name, arity));
    }
    Signature::new(symbols)
}

fn parse_structure_value(v: &Value) -> Result<FiniteStructure> {
    let obj = as_object(v, "structure")?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "signature" | "size" | "relations") {
            return Err(Error::parse(format!("unknown structure field {:?}", key)));
        }
    }
    let signature = parse_signature_value(field(obj, "signature")?)?;
    let size = as_usize(field(obj, "size")?, "size")?;
    let rels = as_object(field(obj, "relations")?, "relations")?;
    let mut tuples: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    for (name, list) in rels {
        let arr = list
            .as_array()
            .ok_or_else(|| Error::parse(format!("relation {:?} must map to a list", name)))?;
        let mut parsed = Vec::new();
        for t in arr {
            let tuple = t
                .as_array()
                .ok_or_else(|| Error::parse("tuples must be integer lists"))?
                .iter()
                .map(|x| as_usize(x, "tuple entry"))
                .collect::<Result<Vec<usize>>>()?;
            parsed.push(tuple);
        }
        tuples.insert(name.clone(), parsed);
    }
    FiniteStructure::new(signature, size, tuples)
}

pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("invalid JSON: {}", e)))?;
    parse_structure_value(&v)
}

pub fn read_structure_file(path: &Path) -> Result<FiniteStructure> {
    let text = std::fs::read_to_string(path)?;
    parse_structure(&text).map_err(|e| Error::parse(format!("{}: {}", path.display(), e)))
}

pub fn write_structure_file(path: &Path, s: &FiniteStructure) -> Result<()> {
    std::fs::write(path, structure_to_string(s))?;
    Ok(())
}

fn expansion_value(exp: &ExpansionSignature) -> JVal {
    JVal::Obj(vec![
        ("base_signature".to_string(), signature_value(exp.base())),
        (
            "patterns".to_string(),
            JVal::Arr(
                exp.patterns()
                    .iter()
                    .map(|pc| {
                        JVal::Obj(vec![
                            ("pattern".to_string(), structure_value(&pc.pattern)),
                            (
                                "predicates".to_string(),
                                JVal::Arr(
                                    pc.predicates.iter().map(|p| JVal::Str(p.clone())).collect(),
                                ),
                            ),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "order_symbol".to_string(),
            exp.order_symbol()
                .map_or(JVal::Null, |s| JVal::Str(s.to_string())),
        ),
    ])
}

fn parse_expansion_value(v: &Value) -> Result<ExpansionSignature> {
    let obj = as_object(v, "expansion")?;
    let base = parse_signature_value(field(obj, "base_signature")?)?;
    let patterns_v = field(obj, "patterns")?
        .as_array()
        .ok_or_else(|| Error::parse("patterns must be a list"))?;
    let mut patterns = Vec::new();
    for p in patterns_v {
        let pobj = as_object(p, "pattern entry")?;
        let pattern = parse_structure_value(field(pobj, "pattern")?)?;
        let predicates = field(pobj, "predicates")?
            .as_array()
            .ok_or_else(|| Error::parse("predicates must be a list"))?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::parse("predicate names must be strings"))
            })
            .collect::<Result<Vec<String>>>()?;
        patterns.push(PatternClasses {
            pattern,
            predicates,
        });
    }
    let order_symbol = match field(obj, "order_symbol")? {
        Value::Null => None,
        Value::String(s) => Some(s.clone()),
        _ => return Err(Error::parse("order_symbol must be a string or null")),
    };
    ExpansionSignature::new(base, patterns, order_symbol)
}

/// Canonical text form of an expanded structure document.
pub fn expanded_to_string(e: &ExpandedStructure) -> String {
    JVal::Obj(vec![
        ("expansion".to_string(), expansion_value(e.signature())),
        ("structure".to_string(), structure_value(e.structure())),
    ])
    .render()
}

pub fn parse_expanded(text: &str) -> Result<ExpandedStructure> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("invalid JSON: {}", e)))?;
    let obj = as_object(&v, "expanded structure")?;
    let sig = parse_expansion_value(field(obj, "expansion")?)?;
    let structure = parse_structure_value(field(obj, "structure")?)?;
    ExpandedStructure::new(sig, structure)
}

pub fn read_expanded_file(path: &Path) -> Result<ExpandedStructure> {
    let text = std::fs::read_to_string(path)?;
    parse_expanded(&text).map_err(|e| Error::parse(format!("{}: {}", path.display(), e)))
}

pub fn write_expanded_file(path: &Path, e: &ExpandedStructure) -> Result<()> {
    std::fs::write(path, expanded_to_string(e))?;
    Ok(())
}

/// Write a fragment as `manifest.json` plus one structure file per member
/// (`m000.rst`, ...) inside `dir`; returns the manifest path.
pub fn save_fragment(dir: &Path, fragment: &ClassFragment) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for (i, member) in fragment.members().iter().enumerate() {
        let name = format!("m{:03}.rst", i);
        write_structure_file(&dir.join(&name), member)?;
        names.push(name);
    }
    let mut fields = Vec::new();
    match fragment.signature() {
        FragmentSignature::Base(sig) => {
            fields.push(("signature".to_string(), signature_value(sig)));
        }
        FragmentSignature::Expanded(exp) => {
            fields.push(("signature".to_string(), signature_value(exp.base())));
            fields.push(("expansion".to_string(), expansion_value(exp)));
        }
    }
    fields.push((
        "members".to_string(),
        JVal::Arr(names.into_iter().map(JVal::Str).collect()),
    ));
    let manifest = dir.join("manifest.json");
    std::fs::write(&manifest, JVal::Obj(fields).render())?;
    Ok(manifest)
}

/// Load a fragment from its manifest; member paths are relative to the
/// manifest's directory.
pub fn load_fragment(manifest: &Path) -> Result<ClassFragment> {
    let text = std::fs::read_to_string(manifest)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::parse(format!("invalid JSON: {}", e)))?;
    let obj = as_object(&v, "fragment manifest")?;
    let base = parse_signature_value(field(obj, "signature")?)?;
    let sig = match obj.get("expansion") {
        Some(Value::Null) | None => FragmentSignature::Base(base),
        Some(exp) => {
            let parsed = parse_expansion_value(exp)?;
            if parsed.base() != &base {
                return Err(Error::parse(
                    "expansion base does not match the manifest signature",
                ));
            }
            FragmentSignature::Expanded(parsed)
        }
    };
    let dir = manifest.parent().unwrap_or_else(|| Path::new("."));
    let mut members = Vec::new();
    for name in field(obj, "members")?
        .as_array()
        .ok_or_else(|| Error::parse("members must be a list"))?
    {
        let name = name
            .as_str()
            .ok_or_else(|| Error::parse("member entries must be strings"))?;
        members.push(read_structure_file(&dir.join(name))?);
    }
    ClassFragment::new(sig, members)
}

/// Load a level chain document referencing structure files:
/// `{"ambient": ..., "levels": [[...]], "pattern": ..., "top": ...}`.
pub fn load_level_chain(path: &Path) -> Result<LevelChain> {
    let text = std::fs::read_to_string(path)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::parse(format!("invalid JSON: {}", e)))?;
    let obj = as_object(&v, "level chain")?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let read = |key: &str| -> Result<FiniteStructure> {
        let name = field(obj, key)?
            .as_str()
            .ok_or_else(|| Error::parse(format!("{} must be a file name", key)))?;
        read_structure_file(&dir.join(name))
    };
    let ambient = read("ambient")?;
    let pattern = read("pattern")?;
    let top = read("top")?;
    let mut levels = Vec::new();
    for level in field(obj, "levels")?
        .as_array()
        .ok_or_else(|| Error::parse("levels must be a list of integer lists"))?
    {
        let subset: BTreeSet<usize> = level
            .as_array()
            .ok_or_else(|| Error::parse("each level must be an integer list"))?
            .iter()
            .map(|x| as_usize(x, "level element"))
            .collect::<Result<_>>()?;
        levels.push(subset);
    }
    LevelChain::new(top, levels, pattern, ambient)
}

/// Canonical coloring document: the copies in order, the color budget, and
/// the assignment.
pub fn coloring_to_string(coloring: &Coloring) -> String {
    JVal::Obj(vec![
        (
            "copies".to_string(),
            JVal::Arr(
                coloring
                    .copy_set()
                    .copies()
                    .iter()
                    .map(|c| JVal::Arr(c.subset().iter().map(|&x| JVal::Int(x as u64)).collect()))
                    .collect(),
            ),
        ),
        ("k".to_string(), JVal::Int(coloring.k() as u64)),
        (
            "assignment".to_string(),
            JVal::Arr(
                coloring
                    .assignment()
                    .iter()
                    .map(|&v| JVal::Int(v as u64))
                    .collect(),
            ),
        ),
    ])
    .render()
}

/// Witness-family document: relation strings paired with their defeating
/// colorings.
pub fn witness_family_to_string(family: &WitnessFamily, product: &Coloring) -> String {
    JVal::Obj(vec![
        (
            "entries".to_string(),
            JVal::Arr(
                family
                    .entries()
                    .iter()
                    .map(|(relation, coloring)| {
                        JVal::Obj(vec![
                            ("relation".to_string(), JVal::Str(relation.rgs_string())),
                            ("k".to_string(), JVal::Int(coloring.k() as u64)),
                            (
                                "assignment".to_string(),
                                JVal::Arr(
                                    coloring
                                        .assignment()
                                        .iter()
                                        .map(|&v| JVal::Int(v as u64))
                                        .collect(),
                                ),
                            ),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "product".to_string(),
            JVal::Obj(vec![
                ("k".to_string(), JVal::Int(product.k() as u64)),
                (
                    "assignment".to_string(),
                    JVal::Arr(
                        product
                            .assignment()
                            .iter()
                            .map(|&v| JVal::Int(v as u64))
                            .collect(),
                    ),
                ),
            ]),
        ),
    ])
    .render()
}
