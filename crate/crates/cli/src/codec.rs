//! JSON encodings of fields, matrices, sheaves, complexes and gluing data.
//!
//! Decoding goes through [`Node`] so every error carries a JSON pointer.
//! Encoding produces `serde_json::Value`s whose maps are key-sorted, so
//! printing them gives the canonical form.

use std::collections::BTreeMap;

use galdesc::complexes::{BoundedComplex, StrictComplexGStructure};
use galdesc::field::{Elem, Field, GaloisGroup};
use galdesc::gluing::{GluingData, GluingGStructure, LocalSystemDisc};
use galdesc::linalg::Matrix;
use galdesc::poset::{FinPoset, MonotoneMap};
use galdesc::semilinear::GStructure;
use galdesc::sheaf::{PosetSheaf, SheafMorphism};
use galdesc::sheaf_descent::SheafGStructure;
use serde_json::{json, Map, Value};

use crate::doc::{Node, Res, SchemaError};

/// A tower `F_0 ⊂ F_1 ⊂ …` together with the automorphism group of the
/// top level over the one below it.
#[derive(Clone, Debug)]
pub struct Tower {
    pub fields: Vec<Field>,
    /// Generator images supplied for each extension level.
    pub hints: Vec<Vec<Elem>>,
    pub group: Option<GaloisGroup>,
}

impl Tower {
    pub fn top(&self) -> &Field {
        self.fields.last().expect("non-empty tower")
    }

    /// The field directly below the top, or the top itself without
    /// extensions.
    pub fn base(&self) -> &Field {
        let n = self.fields.len();
        &self.fields[n.saturating_sub(2)]
    }

    pub fn group(&self, node: &Node) -> Result<&GaloisGroup, SchemaError> {
        self.group
            .as_ref()
            .ok_or_else(|| node.err("this command needs a field with at least one extension"))
    }
}

pub fn decode_tower(node: &Node, assert_irreducible: bool) -> Res<Tower> {
    let base_node = node.get("base")?;
    let base = match base_node.value() {
        Value::String(s) if s == "Q" => Field::rationals(),
        Value::Object(_) => {
            let p = base_node.get("prime")?;
            p.schema(Field::prime(p.usize()? as u64))?
        }
        _ => return Err(base_node.err("expected \"Q\" or {\"prime\": p}").into()),
    };
    let mut fields = vec![base];
    let mut hints = Vec::new();
    let exts = match node.opt("extensions") {
        Some(e) => e.items()?,
        None => Vec::new(),
    };
    for ext in exts {
        let below = fields.last().expect("non-empty").clone();
        let modulus = ext
            .get("modulus")?
            .items()?
            .iter()
            .map(|c| decode_elem(c, &below))
            .collect::<Result<Vec<_>, _>>()?;
        let symbol = ext.get("generator")?.str()?;
        if symbol.is_empty() || !symbol.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(ext
                .get("generator")?
                .err("generator must be a non-empty alphabetic name")
                .into());
        }
        let field = ext.schema(Field::extension(&below, modulus, symbol, assert_irreducible))?;
        let level_hints = match ext.opt("automorphisms") {
            Some(a) => a
                .items()?
                .iter()
                .map(|h| decode_elem(h, &field))
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        fields.push(field);
        hints.push(level_hints);
    }
    let group = match hints.last() {
        Some(h) => {
            let top = fields.last().expect("non-empty");
            Some(node.schema(GaloisGroup::automorphisms(top, h))?)
        }
        None => None,
    };
    Ok(Tower { fields, hints, group })
}

pub fn encode_tower(t: &Tower) -> Value {
    let base = match t.fields[0].characteristic() {
        0 => json!("Q"),
        p => json!({ "prime": p }),
    };
    let exts: Vec<Value> = t.fields[1..]
        .iter()
        .zip(&t.hints)
        .map(|(f, hints)| {
            let ext = f.as_extension().expect("extension level");
            let mut obj = Map::new();
            obj.insert("generator".into(), json!(ext.symbol()));
            obj.insert(
                "modulus".into(),
                Value::Array(ext.modulus().iter().map(|c| encode_elem(ext.base(), c)).collect()),
            );
            if !hints.is_empty() {
                obj.insert(
                    "automorphisms".into(),
                    Value::Array(hints.iter().map(|h| encode_elem(f, h)).collect()),
                );
            }
            Value::Object(obj)
        })
        .collect();
    json!({ "base": base, "extensions": exts })
}

pub fn decode_elem(node: &Node, field: &Field) -> Result<Elem, SchemaError> {
    node.schema(field.parse(node.str()?))
}

pub fn encode_elem(field: &Field, a: &Elem) -> Value {
    Value::String(field.format(a))
}

pub fn decode_matrix(node: &Node, field: &Field) -> Result<Matrix, SchemaError> {
    let rows = node.get("rows")?.usize()?;
    let cols = node.get("cols")?.usize()?;
    let data = node.get("data")?;
    let row_nodes = data.items()?;
    if row_nodes.len() != rows {
        return Err(data.err(format!("expected {rows} rows, found {}", row_nodes.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for r in row_nodes {
        let entries = r.items()?;
        if entries.len() != cols {
            return Err(r.err(format!("expected {cols} entries, found {}", entries.len())));
        }
        for e in entries {
            out.push(decode_elem(&e, field)?);
        }
    }
    Ok(Matrix::new(field, rows, cols, out))
}

pub fn encode_matrix(m: &Matrix) -> Value {
    let k = m.field();
    let data: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(|a| encode_elem(k, a)).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "data": data })
}

pub fn encode_matrices(ms: &[Matrix]) -> Value {
    Value::Array(ms.iter().map(encode_matrix).collect())
}

pub fn decode_matrices(node: &Node, field: &Field) -> Result<Vec<Matrix>, SchemaError> {
    node.items()?.iter().map(|m| decode_matrix(m, field)).collect()
}

pub fn decode_poset(node: &Node) -> Result<FinPoset, SchemaError> {
    let n = node.get("points")?.usize()?;
    let covers = node
        .get("covers")?
        .items()?
        .iter()
        .map(|c| {
            let pair = c.items()?;
            if pair.len() != 2 {
                return Err(c.err("a cover is a pair [x, y]"));
            }
            Ok((pair[0].usize()?, pair[1].usize()?))
        })
        .collect::<Result<Vec<_>, _>>()?;
    node.schema(FinPoset::from_covers(n, &covers))
}

fn sorted_covers(p: &FinPoset) -> Vec<(usize, usize)> {
    let mut c = p.covers().to_vec();
    c.sort_unstable();
    c
}

pub fn encode_poset(p: &FinPoset) -> Value {
    let covers: Vec<Value> = sorted_covers(p).iter().map(|&(x, y)| json!([x, y])).collect();
    json!({ "points": p.len(), "covers": covers })
}

/// Stalks and restrictions; the poset is read from the node when present.
pub fn decode_sheaf(node: &Node, field: &Field, poset: Option<&FinPoset>) -> Res<PosetSheaf> {
    let poset = match (node.opt("poset"), poset) {
        (Some(p), _) => decode_poset(&p)?,
        (None, Some(p)) => p.clone(),
        (None, None) => return Err(node.err("missing key \"poset\"").into()),
    };
    let stalks_node = node.get("stalks")?;
    let dims = stalks_node
        .items()?
        .iter()
        .map(|d| d.usize())
        .collect::<Result<Vec<_>, _>>()?;
    if dims.len() != poset.len() {
        return Err(stalks_node
            .err(format!("{} stalks for {} points", dims.len(), poset.len()))
            .into());
    }
    let mut res = BTreeMap::new();
    for r in node.get("restrictions")?.items()? {
        let cover = r.get("cover")?;
        let pair = cover.items()?;
        if pair.len() != 2 {
            return Err(cover.err("a cover is a pair [x, y]").into());
        }
        let (x, y) = (pair[0].usize()?, pair[1].usize()?);
        if !poset.covers().contains(&(x, y)) {
            return Err(cover.err(format!("({x}, {y}) is not a covering pair")).into());
        }
        if res.insert((x, y), decode_matrix(&r.get("matrix")?, field)?).is_some() {
            return Err(cover.err("duplicate restriction").into());
        }
    }
    for &(x, y) in poset.covers() {
        if !res.contains_key(&(x, y)) {
            return Err(node
                .get("restrictions")?
                .err(format!("missing restriction for cover ({x}, {y})"))
                .into());
        }
    }
    node.core(PosetSheaf::new(field, &poset, dims, res))
}

/// Encodes stalks and restrictions, with the poset when `with_poset`.
pub fn encode_sheaf(s: &PosetSheaf, with_poset: bool) -> Map<String, Value> {
    let mut obj = Map::new();
    if with_poset {
        obj.insert("poset".into(), encode_poset(s.poset()));
    }
    obj.insert("stalks".into(), json!(s.stalk_dims()));
    let res: Vec<Value> = sorted_covers(s.poset())
        .iter()
        .map(|&(x, y)| json!({ "cover": [x, y], "matrix": encode_matrix(s.restriction(x, y)) }))
        .collect();
    obj.insert("restrictions".into(), Value::Array(res));
    obj
}

/// A map from group element names to matrices.
pub fn decode_cocycle(node: &Node, group: &GaloisGroup, dim: usize) -> Res<GStructure> {
    let l = group.field();
    let mut mats: Vec<Option<Matrix>> = vec![None; group.len()];
    for (key, m) in node.entries()? {
        let image = node
            .schema(l.parse(key))
            .map_err(|_| m.err(format!("{key:?} is not a field element")))?;
        let g = group
            .elements()
            .iter()
            .position(|a| a.generator_image() == &image)
            .ok_or_else(|| m.err(format!("{key:?} does not name a group element")))?;
        if mats[g].is_some() {
            return Err(m.err("group element listed twice").into());
        }
        mats[g] = Some(decode_matrix(&m, l)?);
    }
    let mats = mats
        .into_iter()
        .enumerate()
        .map(|(g, m)| m.ok_or_else(|| node.err(format!("missing matrix for group element {:?}", group.name(g)))))
        .collect::<Result<Vec<_>, _>>()?;
    for (g, m) in mats.iter().enumerate() {
        if m.shape() != (dim, dim) {
            return Err(node
                .err(format!("matrix for {:?} must be {dim}x{dim}", group.name(g)))
                .into());
        }
    }
    node.core(GStructure::new(l, dim, mats))
}

pub fn encode_cocycle(gs: &GStructure, group: &GaloisGroup) -> Value {
    let obj: Map<String, Value> = (0..group.len())
        .map(|g| (group.name(g), encode_matrix(gs.matrix(g))))
        .collect();
    Value::Object(obj)
}

pub fn decode_sheaf_structure(node: &Node, sheaf: &PosetSheaf, group: &GaloisGroup) -> Res<SheafGStructure> {
    let items = node.items()?;
    if items.len() != sheaf.poset().len() {
        return Err(node
            .err(format!("{} structures for {} points", items.len(), sheaf.poset().len()))
            .into());
    }
    let points = items
        .iter()
        .enumerate()
        .map(|(x, n)| decode_cocycle(n, group, sheaf.stalk_dim(x)))
        .collect::<Res<Vec<_>>>()?;
    node.core(SheafGStructure::new(sheaf, points))
}

pub fn encode_sheaf_structure(s: &SheafGStructure, group: &GaloisGroup) -> Value {
    Value::Array(s.points().iter().map(|gs| encode_cocycle(gs, group)).collect())
}

pub fn encode_morphism(m: &SheafMorphism) -> Value {
    encode_matrices(m.comps())
}

pub fn decode_complex(node: &Node, field: &Field) -> Res<BoundedComplex> {
    let poset = decode_poset(&node.get("poset")?)?;
    let min_deg = node.get("min_degree")?.i64()?;
    let terms = node
        .get("terms")?
        .items()?
        .iter()
        .map(|t| decode_sheaf(t, field, Some(&poset)))
        .collect::<Res<Vec<_>>>()?;
    let diff_node = node.get("differentials")?;
    let diff_items = diff_node.items()?;
    if diff_items.len() + 1 != terms.len().max(1) {
        return Err(diff_node
            .err(format!("{} differentials for {} terms", diff_items.len(), terms.len()))
            .into());
    }
    let diffs = diff_items
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let comps = decode_matrices(d, field)?;
            d.core(SheafMorphism::new(&terms[i], &terms[i + 1], comps))
        })
        .collect::<Res<Vec<_>>>()?;
    node.core(BoundedComplex::new(min_deg, terms, diffs))
}

pub fn decode_complex_structure(node: &Node, c: &BoundedComplex, group: &GaloisGroup) -> Res<StrictComplexGStructure> {
    let terms = node.get("terms")?.items()?;
    let structures = terms
        .iter()
        .zip(c.terms())
        .map(|(t, sheaf)| decode_sheaf_structure(&t.get("structure")?, sheaf, group))
        .collect::<Res<Vec<_>>>()?;
    Ok(StrictComplexGStructure {
        min_deg: c.min_deg(),
        terms: structures,
    })
}

pub fn encode_complex(c: &BoundedComplex, s: Option<(&StrictComplexGStructure, &GaloisGroup)>) -> Map<String, Value> {
    let terms: Vec<Value> = c
        .terms()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut obj = encode_sheaf(t, false);
            if let Some((s, group)) = s {
                obj.insert("structure".into(), encode_sheaf_structure(&s.terms[i], group));
            }
            Value::Object(obj)
        })
        .collect();
    let diffs: Vec<Value> = c.diffs().iter().map(encode_morphism).collect();
    let mut obj = Map::new();
    obj.insert("poset".into(), encode_poset(c.poset()));
    obj.insert("min_degree".into(), json!(c.min_deg()));
    obj.insert("terms".into(), Value::Array(terms));
    obj.insert("differentials".into(), Value::Array(diffs));
    obj
}

pub fn decode_gluing(node: &Node, field: &Field) -> Res<GluingData> {
    let t_node = node.get("monodromy")?;
    let t = decode_matrix(&t_node, field)?;
    let ls = t_node.core(LocalSystemDisc::new(t))?;
    let phi_dim = node.get("phi_dim")?.usize()?;
    let u = decode_matrix(&node.get("u")?, field)?;
    let v = decode_matrix(&node.get("v")?, field)?;
    node.core(GluingData::new(&ls, phi_dim, u, v))
}

pub fn decode_gluing_structure(node: &Node, gd: &GluingData, group: &GaloisGroup) -> Res<GluingGStructure> {
    let s = node.get("structure")?;
    Ok(GluingGStructure {
        v: decode_cocycle(&s.get("v")?, group, gd.local_system().dim())?,
        phi: decode_cocycle(&s.get("phi")?, group, gd.phi_dim())?,
    })
}

pub fn encode_gluing(gd: &GluingData, s: Option<(&GluingGStructure, &GaloisGroup)>) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("monodromy".into(), encode_matrix(gd.local_system().monodromy()));
    obj.insert("phi_dim".into(), json!(gd.phi_dim()));
    obj.insert("u".into(), encode_matrix(gd.u()));
    obj.insert("v".into(), encode_matrix(gd.v()));
    if let Some((s, group)) = s {
        obj.insert(
            "structure".into(),
            json!({ "v": encode_cocycle(&s.v, group), "phi": encode_cocycle(&s.phi, group) }),
        );
    }
    obj
}

pub fn decode_map(node: &Node) -> Result<MonotoneMap, SchemaError> {
    let source = decode_poset(&node.get("source")?)?;
    let target = decode_poset(&node.get("target")?)?;
    let images = node
        .get("images")?
        .items()?
        .iter()
        .map(|i| i.usize())
        .collect::<Result<Vec<_>, _>>()?;
    node.schema(MonotoneMap::new(&source, &target, images))
}

pub fn encode_map(f: &MonotoneMap) -> Value {
    json!({
        "source": encode_poset(f.source()),
        "target": encode_poset(f.target()),
        "images": f.images(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(v: Value) -> Tower {
        decode_tower(&Node::root(&v), false).unwrap()
    }

    #[test]
    fn gaussian_tower_round_trips() {
        let v = json!({"base": "Q", "extensions": [{"modulus": ["1", "0", "1"], "generator": "i", "automorphisms": ["-1*i"]}]});
        let t = tower(v.clone());
        assert_eq!(t.group.as_ref().unwrap().len(), 2);
        assert_eq!(encode_tower(&t), v);
    }

    #[test]
    fn finite_tower_canonicalizes_coefficients() {
        let t = tower(json!({"base": {"prime": 2}, "extensions": [{"modulus": ["1", "1", "1"], "generator": "w"}]}));
        assert_eq!(t.group.as_ref().unwrap().len(), 2);
        assert_eq!(
            encode_tower(&t),
            json!({"base": {"prime": 2}, "extensions": [{"modulus": ["1 mod 2", "1 mod 2", "1 mod 2"], "generator": "w"}]})
        );
    }

    #[test]
    fn reducible_modulus_is_a_schema_error() {
        let v = json!({"base": {"prime": 2}, "extensions": [{"modulus": ["1", "0", "1"], "generator": "w"}]});
        match decode_tower(&Node::root(&v), false) {
            Err(crate::doc::Failure::Schema(e)) => assert_eq!(e.pointer, "/extensions/0"),
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn matrix_shape_errors_point_at_the_row() {
        let q = Field::rationals();
        let v = json!({"rows": 2, "cols": 2, "data": [["1", "0"], ["0"]]});
        assert_eq!(decode_matrix(&Node::root(&v), &q).unwrap_err().pointer, "/data/1");
        let ok = json!({"rows": 1, "cols": 2, "data": [["1/2", "-3"]]});
        let m = decode_matrix(&Node::root(&ok), &q).unwrap();
        assert_eq!(encode_matrix(&m), ok);
    }

    #[test]
    fn sheaf_round_trips() {
        let q = Field::rationals();
        let v = json!({
            "poset": {"points": 2, "covers": [[0, 1]]},
            "stalks": [1, 1],
            "restrictions": [{"cover": [0, 1], "matrix": {"rows": 1, "cols": 1, "data": [["2"]]}}]
        });
        let s = decode_sheaf(&Node::root(&v), &q, None).unwrap();
        assert_eq!(Value::Object(encode_sheaf(&s, true)), v);
    }
}
