//! Command dispatch and certificate assembly.

use clap::ValueEnum;
use galdesc::complexes::{
    check_strict, descend_complex_strict, extend_complex, two_term_descent_via_cohomology, Route,
};
use galdesc::field::GaloisGroup;
use galdesc::gluing::{check_gluing_gstructure, descend_gluing, extend_gluing};
use galdesc::poset::FinPoset;
use galdesc::semilinear::{check_gstructure, conjugate_matrix, descend, GStructure};
use galdesc::sheaf::hom_global;
use galdesc::sheaf_descent::{
    check_compat_hom, check_compat_pullback, check_compat_pushforward, check_sheaf_gstructure, descend_sheaf,
    extend_sheaf, SheafGStructure,
};
use galdesc::suites::{selftest, SelftestReport, SelftestSizes};
use galdesc::Error;
use serde_json::{json, Map, Value};

use crate::codec::*;
use crate::doc::{Failure, Node, Res, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Extend,
    DescendVect,
    DescendSheaf,
    DescendComplex,
    DescendGluing,
    CheckGstructure,
    CheckCompat,
    HomBasis,
    Selftest,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Extend => "extend",
            Command::DescendVect => "descend-vect",
            Command::DescendSheaf => "descend-sheaf",
            Command::DescendComplex => "descend-complex",
            Command::DescendGluing => "descend-gluing",
            Command::CheckGstructure => "check-gstructure",
            Command::CheckCompat => "check-compat",
            Command::HomBasis => "hom-basis",
            Command::Selftest => "selftest",
            Command::Verify => "verify",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::value_variants().iter().copied().find(|c| c.name() == s)
    }

    fn reference(self) -> &'static str {
        match self {
            Command::Extend => "extension of scalars with the natural semilinear structure",
            Command::DescendVect => "Galois descent for vector spaces via invariants of a semilinear action",
            Command::DescendSheaf => "Galois descent for sheaves on finite posets",
            Command::DescendComplex => "termwise descent of complexes with strict semilinear structures",
            Command::DescendGluing => "descent of gluing data for perverse sheaves on a disc",
            Command::CheckGstructure => "cocycle and compatibility conditions for semilinear structures",
            Command::CheckCompat => "compatibility of extension of scalars with pullback, pushforward and Hom",
            Command::HomBasis => "global morphisms as sections of the internal Hom sheaf",
            Command::Selftest => "randomized invariant suites",
            Command::Verify => "independent re-check of certificate witnesses",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Overrides the seed recorded in a selftest input document.
    pub seed: Option<u64>,
    pub assert_irreducible: bool,
}

/// Everything a certificate records about one run.
pub struct Report {
    pub command: Command,
    pub status: Status,
    pub summary: String,
    pub witnesses: Value,
    pub input: Value,
    pub field: Option<Value>,
    pub error: Option<Value>,
}

impl Report {
    pub fn certificate(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
        obj.insert("status".into(), json!(self.status.name()));
        obj.insert("summary".into(), json!(self.summary));
        obj.insert(
            "provenance".into(),
            json!({ "operation": self.command.name(), "reference": self.command.reference() }),
        );
        obj.insert("witnesses".into(), self.witnesses.clone());
        obj.insert("input".into(), self.input.clone());
        if let Some(f) = &self.field {
            obj.insert("field".into(), f.clone());
        }
        if let Some(e) = &self.error {
            obj.insert("error".into(), e.clone());
        }
        Value::Object(obj)
    }
}

/// Prints a value in canonical form: sorted keys, two-space indentation
/// and a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// State accumulated while a command runs, used to describe failures.
#[derive(Default)]
pub struct Ctx {
    pub tower: Option<Tower>,
}

impl Ctx {
    fn group(&self) -> Option<&GaloisGroup> {
        self.tower.as_ref().and_then(|t| t.group.as_ref())
    }
}

pub struct Success {
    pub summary: String,
    pub witnesses: Value,
    pub input: Value,
    /// A mathematical failure detected after the input was fully read.
    pub failed: bool,
}

/// Runs `command` on `input`. Never panics on bad input: every outcome is
/// turned into a report.
pub fn run(command: Command, input: Option<&Value>, opts: Options) -> Report {
    let mut ctx = Ctx::default();
    let raw = input.cloned().unwrap_or(Value::Null);
    let result = match (command, input) {
        (Command::Selftest, _) => run_selftest(input, opts),
        (Command::Verify, Some(v)) => crate::verify::verify(v, opts),
        (_, Some(v)) => dispatch(command, v, opts, &mut ctx),
        (_, None) => Err(Failure::Schema(
            Node::root(&raw).err("this command needs an input document"),
        )),
    };
    let field = ctx.tower.as_ref().map(encode_tower);
    match result {
        Ok(s) => Report {
            command,
            status: if s.failed { Status::Fail } else { Status::Pass },
            summary: s.summary,
            witnesses: s.witnesses,
            input: s.input,
            field,
            error: None,
        },
        Err(Failure::Math(e)) => Report {
            command,
            status: Status::Fail,
            summary: e.to_string(),
            witnesses: json!({ "failure": failure_json(&e, ctx.group()) }),
            input: raw,
            field,
            error: None,
        },
        Err(Failure::Schema(e)) => Report {
            command,
            status: Status::Error,
            summary: e.to_string(),
            witnesses: json!({}),
            input: raw,
            field,
            error: Some(json!({ "pointer": e.pointer, "message": e.message })),
        },
    }
}

fn variant_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

/// A structured description of a core error, naming group elements by
/// their generator images.
pub fn failure_json(e: &Error, group: Option<&GaloisGroup>) -> Value {
    let name = |g: usize| match group {
        Some(gr) if g < gr.len() => json!(gr.name(g)),
        _ => json!(g),
    };
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(variant_name(e)));
    obj.insert("message".into(), json!(e.to_string()));
    let mut put = |k: &str, v: Value| {
        obj.insert(k.into(), v);
    };
    match e {
        Error::NotCocycle { g, h } => put("pair", json!([name(*g), name(*h)])),
        Error::NotCocycleAt { x, g, h } => {
            put("point", json!(x));
            put("pair", json!([name(*g), name(*h)]));
        }
        Error::Singular(g) | Error::NotEquivariant { g } | Error::NotMonodromyEquivariant { g } => {
            put("element", name(*g))
        }
        Error::SingularAt { x, g } | Error::NotEquivariantAt { x, g } => {
            put("point", json!(x));
            put("element", name(*g));
        }
        Error::NotSheafMorphism { x, y, g } => {
            put("cover", json!([x, y]));
            put("element", name(*g));
        }
        Error::NotEquivariantMap { map, g } => {
            put("map", json!(map));
            put("element", name(*g));
        }
        Error::NotStrict { degree, x, g } => {
            put("degree", json!(degree));
            put("point", json!(x));
            put("element", name(*g));
        }
        Error::DescentFailed { found, expected } => {
            put("found", json!(found));
            put("expected", json!(expected));
        }
        Error::DescentFailedAt { x, found, expected } => {
            put("point", json!(x));
            put("found", json!(found));
            put("expected", json!(expected));
        }
        Error::NotFixedRestriction { x, y } => put("cover", json!([x, y])),
        Error::PathDependence(x, y) => put("points", json!([x, y])),
        Error::NotComplex { degree, x } | Error::NotChainMap { degree, x } => {
            put("degree", json!(degree));
            put("point", json!(x));
        }
        Error::RelationViolated { difference } => put("difference", encode_matrix(difference)),
        Error::NotGalois { order, degree } => {
            put("order", json!(order));
            put("degree", json!(degree));
        }
        _ => {}
    }
    Value::Object(obj)
}

fn ok(summary: impl Into<String>, witnesses: Value, input: Value) -> Res<Success> {
    Ok(Success {
        summary: summary.into(),
        witnesses,
        input,
        failed: false,
    })
}

/// The canonical input document: version, field, kind and body.
fn document(tower: &Tower, kind: &str, body: Map<String, Value>) -> Value {
    let mut obj = body;
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("field".into(), encode_tower(tower));
    obj.insert("kind".into(), json!(kind));
    Value::Object(obj)
}

/// A decoded input object and its optional structure.
pub enum Object {
    Vector {
        dim: usize,
        structure: Option<GStructure>,
    },
    Sheaf {
        sheaf: galdesc::sheaf::PosetSheaf,
        structure: Option<SheafGStructure>,
    },
    Complex {
        complex: galdesc::complexes::BoundedComplex,
        structure: Option<galdesc::complexes::StrictComplexGStructure>,
    },
    Gluing {
        data: galdesc::gluing::GluingData,
        structure: Option<galdesc::gluing::GluingGStructure>,
    },
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Vector { .. } => "vector",
            Object::Sheaf { .. } => "sheaf",
            Object::Complex { .. } => "complex",
            Object::Gluing { .. } => "gluing",
        }
    }

    pub fn encode(&self, tower: &Tower) -> Value {
        let group = tower.group.as_ref();
        let body = match self {
            Object::Vector { dim, structure } => {
                let mut m = Map::new();
                m.insert("dim".into(), json!(dim));
                if let (Some(s), Some(g)) = (structure, group) {
                    m.insert("structure".into(), encode_cocycle(s, g));
                }
                m
            }
            Object::Sheaf { sheaf, structure } => {
                let mut m = encode_sheaf(sheaf, true);
                if let (Some(s), Some(g)) = (structure, group) {
                    m.insert("structure".into(), encode_sheaf_structure(s, g));
                }
                m
            }
            Object::Complex { complex, structure } => {
                encode_complex(complex, structure.as_ref().and_then(|s| group.map(|g| (s, g))))
            }
            Object::Gluing { data, structure } => {
                encode_gluing(data, structure.as_ref().and_then(|s| group.map(|g| (s, g))))
            }
        };
        document(tower, self.kind(), body)
    }
}

/// Reads a vector, sheaf, complex or gluing document. Structures are read
/// when present and the tower has a group.
pub fn decode_object(root: &Node, tower: &Tower, over_base: bool, allowed: &[&str]) -> Res<Object> {
    let kind = root.expect_kind(allowed)?;
    let field = if over_base { tower.base() } else { tower.top() };
    let group = || tower.group(root);
    Ok(match kind {
        "vector" => {
            let dim = root.get("dim")?.usize()?;
            let structure = match root.opt("structure") {
                Some(s) => Some(decode_cocycle(&s, group()?, dim)?),
                None => None,
            };
            Object::Vector { dim, structure }
        }
        "sheaf" => {
            let sheaf = decode_sheaf(root, field, None)?;
            let structure = match root.opt("structure") {
                Some(s) => Some(decode_sheaf_structure(&s, &sheaf, group()?)?),
                None => None,
            };
            Object::Sheaf { sheaf, structure }
        }
        "complex" => {
            let complex = decode_complex(root, field)?;
            let terms = root.get("terms")?.items()?;
            let with = terms.iter().filter(|t| t.opt("structure").is_some()).count();
            let structure = if with == 0 {
                None
            } else if with < terms.len() {
                return Err(root
                    .get("terms")?
                    .err("either every term or no term carries a structure")
                    .into());
            } else {
                Some(decode_complex_structure(root, &complex, group()?)?)
            };
            Object::Complex { complex, structure }
        }
        "gluing" => {
            let data = decode_gluing(root, field)?;
            let structure = match root.opt("structure") {
                Some(_) => Some(decode_gluing_structure(root, &data, group()?)?),
                None => None,
            };
            Object::Gluing { data, structure }
        }
        _ => unreachable!("kind checked"),
    })
}

pub fn read_tower(root: &Node, opts: Options, ctx: &mut Ctx) -> Res<Tower> {
    root.check_version()?;
    let tower = decode_tower(&root.get("field")?, opts.assert_irreducible)?;
    ctx.tower = Some(tower.clone());
    Ok(tower)
}

fn dispatch(command: Command, input: &Value, opts: Options, ctx: &mut Ctx) -> Res<Success> {
    let root = Node::root(input);
    let tower = read_tower(&root, opts, ctx)?;
    match command {
        Command::Extend => extend(&root, &tower),
        Command::DescendVect => descend_vect(&root, &tower),
        Command::DescendSheaf => descend_sheaf_cmd(&root, &tower),
        Command::DescendComplex => descend_complex_cmd(&root, &tower),
        Command::DescendGluing => descend_gluing_cmd(&root, &tower),
        Command::CheckGstructure => check_gstructure_cmd(&root, &tower),
        Command::CheckCompat => check_compat(&root, &tower),
        Command::HomBasis => hom_basis(&root, &tower),
        Command::Selftest | Command::Verify => unreachable!("handled by run"),
    }
}

fn math<T>(r: galdesc::Result<T>) -> Res<T> {
    r.map_err(Failure::Math)
}

fn require_structure<T>(s: Option<T>, root: &Node) -> Res<T> {
    s.ok_or_else(|| root.err("missing key \"structure\"").into())
}

fn extend(root: &Node, tower: &Tower) -> Res<Success> {
    let group = tower.group(root)?;
    let obj = decode_object(root, tower, true, &["vector", "sheaf", "complex", "gluing"])?;
    let input = obj.encode(tower);
    let extended = match &obj {
        Object::Vector { dim, .. } => Object::Vector {
            dim: *dim,
            structure: Some(GStructure::natural(group, *dim)),
        },
        Object::Sheaf { sheaf, .. } => {
            let (s, st) = extend_sheaf(sheaf, group);
            Object::Sheaf {
                sheaf: s,
                structure: Some(st),
            }
        }
        Object::Complex { complex, .. } => {
            let (c, s) = extend_complex(complex, group);
            Object::Complex {
                complex: c,
                structure: Some(s),
            }
        }
        Object::Gluing { data, .. } => {
            let (d, s) = math(extend_gluing(data, group))?;
            Object::Gluing {
                data: d,
                structure: Some(s),
            }
        }
    };
    ok(
        format!("extended {} to {}", obj.kind(), group.field()),
        json!({ "object": extended.encode(tower) }),
        input,
    )
}

fn descend_vect(root: &Node, tower: &Tower) -> Res<Success> {
    let group = tower.group(root)?;
    let Object::Vector { dim, structure } = decode_object(root, tower, false, &["vector"])? else {
        unreachable!()
    };
    let gs = require_structure(structure, root)?;
    let input = Object::Vector {
        dim,
        structure: Some(gs.clone()),
    }
    .encode(tower);
    let kf = math(descend(&gs, group))?;
    ok(
        format!("descended to dimension {} over {}", kf.kdim, group.base()),
        json!({
            "kdim": kf.kdim,
            "kbasis": encode_matrix(&kf.kbasis),
            "kbasis_inverse": encode_matrix(&kf.kbasis_inverse),
        }),
        input,
    )
}

fn descend_sheaf_cmd(root: &Node, tower: &Tower) -> Res<Success> {
    let group = tower.group(root)?;
    let Object::Sheaf { sheaf, structure } = decode_object(root, tower, false, &["sheaf"])? else {
        unreachable!()
    };
    let sgs = require_structure(structure, root)?;
    let input = Object::Sheaf {
        sheaf,
        structure: Some(sgs.clone()),
    }
    .encode(tower);
    let kf = math(descend_sheaf(&sgs, group))?;
    let bases: Vec<_> = kf.kforms.iter().map(|k| k.kbasis.clone()).collect();
    ok(
        format!("descended sheaf with stalk dimensions {:?}", kf.ksheaf.stalk_dims()),
        json!({
            "descended": Value::Object(encode_sheaf(&kf.ksheaf, true)),
            "bases": encode_matrices(&bases),
            "iso": encode_morphism(&kf.iso),
        }),
        input,
    )
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::CohomologyFirst => "cohomology-first",
        Route::ComplexFirst => "complex-first",
    }
}

fn descend_complex_cmd(root: &Node, tower: &Tower) -> Res<Success> {
    let group = tower.group(root)?;
    let Object::Complex { complex, structure } = decode_object(root, tower, false, &["complex"])? else {
        unreachable!()
    };
    let s = require_structure(structure, root)?;
    let input = Object::Complex {
        complex: complex.clone(),
        structure: Some(s.clone()),
    }
    .encode(tower);
    let kf = math(descend_complex_strict(&complex, &s, group))?;
    let iso: Vec<Value> = kf
        .iso
        .comps()
        .iter()
        .map(|(deg, m)| json!({ "degree": deg, "components": encode_morphism(m) }))
        .collect();
    let mut witnesses = Map::new();
    witnesses.insert("descended".into(), Value::Object(encode_complex(&kf.complex, None)));
    witnesses.insert("iso".into(), Value::Array(iso));
    let mut failed = false;
    if complex.terms().len() == 2 {
        let report = math(two_term_descent_via_cohomology(&complex, &s, group))?;
        failed = !report.passed();
        let degrees: Vec<Value> = report
            .degrees
            .iter()
            .map(|d| {
                json!({
                    "degree": d.degree,
                    "cohomology_first_dims": d.cohomology_first_dims,
                    "complex_first_dims": d.complex_first_dims,
                    "comparison": d.comparison.as_ref().map(encode_morphism),
                })
            })
            .collect();
        let routes: Vec<Value> = report
            .certificates
            .iter()
            .map(|c| json!({ "degree": c.degree, "route": route_name(c.route), "iso": encode_matrices(&c.iso) }))
            .collect();
        witnesses.insert(
            "cross_check".into(),
            json!({ "passed": report.passed(), "degrees": degrees, "routes": routes }),
        );
    }
    Ok(Success {
        summary: format!(
            "descended complex in degrees {}..={}",
            kf.complex.min_deg(),
            kf.complex.max_deg()
        ),
        witnesses: Value::Object(witnesses),
        input,
        failed,
    })
}

fn descend_gluing_cmd(root: &Node, tower: &Tower) -> Res<Success> {
    let group = tower.group(root)?;
    let Object::Gluing { data, structure } = decode_object(root, tower, false, &["gluing"])? else {
        unreachable!()
    };
    let s = require_structure(structure, root)?;
    let input = Object::Gluing {
        data: data.clone(),
        structure: Some(s.clone()),
    }
    .encode(tower);
    let kf = math(descend_gluing(&data, &s, group))?;
    ok(
        format!(
            "descended gluing data with dim V = {}, dim Phi = {}",
            kf.data.local_system().dim(),
            kf.data.phi_dim()
        ),
        json!({
            "descended": Value::Object(encode_gluing(&kf.data, None)),
            "a": encode_matrix(kf.iso.a()),
            "b": encode_matrix(kf.iso.b()),
            "v_basis": encode_matrix(&kf.v_form.kbasis),
            "phi_basis": encode_matrix(&kf.phi_form.kbasis),
        }),
        input,
    )
}

fn check_gstructure_cmd(root: &Node, tower: &Tower) -> Res<Success> {
    let group = tower.group(root)?;
    let obj = decode_object(root, tower, false, &["vector", "sheaf", "complex", "gluing"])?;
    let input = obj.encode(tower);
    let witnesses = match &obj {
        Object::Vector { structure, .. } => {
            let gs = require_structure(structure.as_ref(), root)?;
            match check_gstructure(gs, group) {
                Ok(cert) => json!({ "pairs_checked": cert.pairs.len() }),
                Err(Error::NotCocycle { g, h }) => {
                    let lhs = gs.matrix(group.compose(g, h));
                    let rhs = gs.matrix(g).mul(&conjugate_matrix(group.get(g), gs.matrix(h)));
                    let e = Error::NotCocycle { g, h };
                    return Ok(Success {
                        summary: e.to_string(),
                        witnesses: json!({
                            "failure": failure_json(&e, Some(group)),
                            "lhs": encode_matrix(lhs),
                            "rhs": encode_matrix(&rhs),
                        }),
                        input,
                        failed: true,
                    });
                }
                Err(e) => return Err(Failure::Math(e)),
            }
        }
        Object::Sheaf { structure, .. } => {
            let s = require_structure(structure.as_ref(), root)?;
            let cert = math(check_sheaf_gstructure(s, group))?;
            json!({ "squares_checked": cert.squares.len() })
        }
        Object::Complex { complex, structure } => {
            let s = require_structure(structure.as_ref(), root)?;
            for t in &s.terms {
                math(check_sheaf_gstructure(t, group))?;
            }
            math(check_strict(complex, s, group))?;
            json!({ "degrees_checked": s.terms.len() })
        }
        Object::Gluing { data, structure } => {
            let s = require_structure(structure.as_ref(), root)?;
            let cert = math(check_gluing_gstructure(data, s, group))?;
            json!({ "psi_structure": encode_cocycle(&cert.psi, group) })
        }
    };
    ok(format!("{} structure is valid", obj.kind()), witnesses, input)
}

fn check_compat(root: &Node, tower: &Tower) -> Res<Success> {
    let group = tower.group(root)?;
    root.expect_kind(&["compat"])?;
    let k = tower.base();
    let op_node = root.get("operation")?;
    let op = op_node.str()?;
    let mut body = Map::new();
    body.insert("operation".into(), json!(op));
    let report = match op {
        "pullback" | "pushforward" => {
            let f = decode_map(&root.get("map")?)?;
            let on: &FinPoset = if op == "pullback" { f.target() } else { f.source() };
            let sheaf_node = root.get("sheaf")?;
            let sheaf = decode_sheaf(&sheaf_node, k, None)?;
            if sheaf.poset() != on {
                return Err(sheaf_node
                    .err(format!(
                        "sheaf must live on the map's {}",
                        if op == "pullback" { "target" } else { "source" }
                    ))
                    .into());
            }
            body.insert("map".into(), encode_map(&f));
            body.insert("sheaf".into(), Value::Object(encode_sheaf(&sheaf, true)));
            if op == "pullback" {
                check_compat_pullback(&f, &sheaf, group)
            } else {
                check_compat_pushforward(&f, &sheaf, group)
            }
        }
        "hom" => {
            let f = decode_sheaf(&root.get("sheaf")?, k, None)?;
            let other_node = root.get("other")?;
            let g = decode_sheaf(&other_node, k, None)?;
            if f.poset() != g.poset() {
                return Err(other_node.err("both sheaves must live on the same poset").into());
            }
            body.insert("sheaf".into(), Value::Object(encode_sheaf(&f, true)));
            body.insert("other".into(), Value::Object(encode_sheaf(&g, true)));
            check_compat_hom(&f, &g, group)
        }
        _ => return Err(op_node.err("operation must be pullback, pushforward or hom").into()),
    };
    let failures: Vec<String> = report.failures.iter().map(|f| format!("{f:?}")).collect();
    Ok(Success {
        summary: format!(
            "{} compatibility {}",
            report.kind.name(),
            if report.passed() { "holds" } else { "fails" }
        ),
        witnesses: json!({
            "lhs_dims": report.lhs_dims,
            "rhs_dims": report.rhs_dims,
            "comparison": encode_matrices(&report.comparison),
            "failures": failures,
        }),
        input: document(tower, "compat", body),
        failed: !report.passed(),
    })
}

fn hom_basis(root: &Node, tower: &Tower) -> Res<Success> {
    root.expect_kind(&["hom"])?;
    let l = tower.top();
    let f = decode_sheaf(&root.get("source")?, l, None)?;
    let target_node = root.get("target")?;
    let g = decode_sheaf(&target_node, l, None)?;
    if f.poset() != g.poset() {
        return Err(target_node.err("both sheaves must live on the same poset").into());
    }
    let mut body = Map::new();
    body.insert("source".into(), Value::Object(encode_sheaf(&f, true)));
    body.insert("target".into(), Value::Object(encode_sheaf(&g, true)));
    let basis = math(hom_global(&f, &g))?;
    ok(
        format!("Hom has dimension {}", basis.len()),
        json!({ "dim": basis.len(), "basis": basis.iter().map(encode_morphism).collect::<Vec<_>>() }),
        document(tower, "hom", body),
    )
}

/// Seed and suite sizes from an optional selftest document.
pub fn selftest_params(input: Option<&Value>) -> Res<(Option<u64>, SelftestSizes)> {
    let mut sizes = SelftestSizes::default();
    let Some(v) = input else { return Ok((None, sizes)) };
    let root = Node::root(v);
    root.check_version()?;
    root.expect_kind(&["selftest"])?;
    let seed = match root.opt("seed") {
        Some(s) => Some(s.usize()? as u64),
        None => None,
    };
    if let Some(s) = root.opt("sizes") {
        for (key, n) in s.entries()? {
            let slot = match key {
                "vect" => &mut sizes.vect,
                "sheaf" => &mut sizes.sheaf,
                "hom" => &mut sizes.hom,
                "maps" => &mut sizes.maps,
                "morphisms" => &mut sizes.morphisms,
                "gluing" => &mut sizes.gluing,
                "complexes" => &mut sizes.complexes,
                _ => return Err(n.err(format!("unknown suite size {key:?}")).into()),
            };
            *slot = n.usize()?;
        }
    }
    Ok((seed, sizes))
}

pub fn selftest_input(seed: u64, sizes: SelftestSizes) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "selftest",
        "seed": seed,
        "sizes": {
            "vect": sizes.vect,
            "sheaf": sizes.sheaf,
            "hom": sizes.hom,
            "maps": sizes.maps,
            "morphisms": sizes.morphisms,
            "gluing": sizes.gluing,
            "complexes": sizes.complexes,
        },
    })
}

pub fn selftest_witnesses(r: &SelftestReport) -> Value {
    let suites: Vec<Value> = r
        .suites
        .iter()
        .map(|s| {
            json!({
                "name": s.name,
                "instances": s.instances,
                "passed": s.passed,
                "input_hash": s.input_hash,
                "failures": s.failures.iter().map(|(i, m)| json!({ "instance": i, "message": m })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "seed": r.seed, "suites": suites })
}

fn run_selftest(input: Option<&Value>, opts: Options) -> Res<Success> {
    let (doc_seed, sizes) = selftest_params(input)?;
    let seed = opts.seed.or(doc_seed).unwrap_or(0);
    let report = selftest(seed, sizes);
    let total: usize = report.suites.iter().map(|s| s.instances).sum();
    let passed: usize = report.suites.iter().map(|s| s.passed).sum();
    Ok(Success {
        summary: format!("{passed}/{total} instances passed in {} suites", report.suites.len()),
        witnesses: selftest_witnesses(&report),
        input: selftest_input(seed, sizes),
        failed: !report.ok(),
    })
}
