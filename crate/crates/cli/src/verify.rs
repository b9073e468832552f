//! Re-checks a certificate from its serialized matrices.
//!
//! Passing certificates are checked identity by identity with plain matrix
//! arithmetic. Failing and erroring certificates are checked by re-running
//! the operation on the recorded input and comparing the outcome.

use galdesc::field::GaloisGroup;
use galdesc::gluing::{GluingData, GluingMorphism};
use galdesc::linalg::Matrix;
use galdesc::semilinear::{conjugate_matrix, GStructure};
use galdesc::sheaf::{hom_global_direct, PosetSheaf, SheafMorphism};
use galdesc::sheaf_descent::SheafGStructure;
use galdesc::suites::selftest;
use serde_json::{json, Value};

use crate::codec::*;
use crate::commands::{
    decode_object, read_tower, run, selftest_params, selftest_witnesses, Command, Ctx, Object, Options, Status, Success,
};
use crate::doc::{Node, Res};

struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn all_ok(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }
}

/// `A_g · g(M) = M` for every group element.
fn fixed_by(m: &Matrix, gs: &GStructure, group: &GaloisGroup) -> bool {
    group
        .elements()
        .iter()
        .enumerate()
        .all(|(g, aut)| gs.matrix(g).mul(&conjugate_matrix(aut, m)) == *m)
}

fn invertible(m: &Matrix) -> bool {
    m.is_square() && m.rank() == m.rows()
}

pub fn verify(cert: &Value, opts: Options) -> Res<Success> {
    let root = Node::root(cert);
    root.check_version()?;
    let op_node = root.get("provenance")?.get("operation")?;
    let op = op_node.str()?;
    let command = Command::from_name(op)
        .filter(|c| *c != Command::Verify)
        .ok_or_else(|| op_node.err(format!("unknown operation {op:?}")))?;
    let status_node = root.get("status")?;
    let status = match status_node.str()? {
        "pass" => Status::Pass,
        "fail" => Status::Fail,
        "error" => Status::Error,
        s => return Err(status_node.err(format!("unknown status {s:?}")).into()),
    };
    let input = root.get("input")?;
    let witnesses = root.get("witnesses")?;
    let mut checks = Checks(Vec::new());
    let rerun_needed = status != Status::Pass || matches!(command, Command::CheckGstructure | Command::DescendComplex);
    if status == Status::Pass {
        match command {
            Command::Extend => verify_extend(&input, &witnesses, opts, &mut checks)?,
            Command::DescendVect => verify_descend_vect(&input, &witnesses, opts, &mut checks)?,
            Command::DescendSheaf => verify_descend_sheaf(&input, &witnesses, opts, &mut checks)?,
            Command::DescendComplex => verify_descend_complex(&input, &witnesses, opts, &mut checks)?,
            Command::DescendGluing => verify_descend_gluing(&input, &witnesses, opts, &mut checks)?,
            Command::CheckCompat => verify_compat(&witnesses, &mut checks)?,
            Command::HomBasis => verify_hom(&input, &witnesses, opts, &mut checks)?,
            Command::Selftest => verify_selftest(&input, &witnesses, &mut checks)?,
            Command::CheckGstructure | Command::Verify => {}
        }
    }
    if rerun_needed {
        let raw = input.value();
        let again = run(command, (!raw.is_null()).then_some(raw), opts);
        checks.add("re-running the operation reproduces the status", again.status == status);
        let recorded = witnesses.value().get("failure").and_then(|f| f.get("kind"));
        let fresh = again.witnesses.get("failure").and_then(|f| f.get("kind"));
        checks.add("re-running the operation reproduces the failure", recorded == fresh);
        if status == Status::Error {
            let recorded = root.value().get("error").and_then(|e| e.get("pointer"));
            let fresh = again.error.as_ref().and_then(|e| e.get("pointer"));
            checks.add(
                "re-running the operation reproduces the error location",
                recorded == fresh,
            );
        }
    }
    let ok = checks.all_ok();
    let list: Vec<Value> = checks.0.iter().map(|(n, ok)| json!({ "check": n, "ok": ok })).collect();
    Ok(Success {
        summary: format!(
            "{} certificate for {op}: {}/{} checks hold",
            status.name(),
            checks.0.iter().filter(|c| c.1).count(),
            checks.0.len()
        ),
        witnesses: json!({ "operation": op, "certificate_status": status.name(), "checks": list }),
        input: cert.clone(),
        failed: !ok,
    })
}

fn verify_extend(input: &Node, w: &Node, opts: Options, checks: &mut Checks) -> Res<()> {
    let mut ctx = Ctx::default();
    let tower = read_tower(input, opts, &mut ctx)?;
    let group = tower.group(input)?;
    let l = group.field();
    let src = decode_object(input, &tower, true, &["vector", "sheaf", "complex", "gluing"])?;
    let obj_node = w.get("object")?;
    let obj = decode_object(&obj_node, &tower, false, &[src.kind()])?;
    let natural = |gs: &GStructure| gs.matrices().iter().all(Matrix::is_identity);
    match (&src, &obj) {
        (Object::Vector { dim: a, .. }, Object::Vector { dim: b, structure }) => {
            checks.add("dimension is preserved", a == b);
            checks.add("structure is natural", structure.as_ref().is_some_and(natural));
        }
        (Object::Sheaf { sheaf: a, .. }, Object::Sheaf { sheaf: b, structure }) => {
            checks.add("sheaf entries are the embedded input", a.extend_to(l) == *b);
            checks.add(
                "structure is natural",
                structure.as_ref().is_some_and(|s| s.points().iter().all(natural)),
            );
        }
        (Object::Complex { complex: a, .. }, Object::Complex { complex: b, structure }) => {
            checks.add("complex entries are the embedded input", a.extend_to(l) == *b);
            checks.add(
                "structure is natural",
                structure
                    .as_ref()
                    .is_some_and(|s| s.terms.iter().all(|t| t.points().iter().all(natural))),
            );
        }
        (Object::Gluing { data: a, .. }, Object::Gluing { data: b, structure }) => {
            let embedded = a.local_system().monodromy().extend_to(l) == *b.local_system().monodromy()
                && a.u().extend_to(l) == *b.u()
                && a.v().extend_to(l) == *b.v();
            checks.add("gluing entries are the embedded input", embedded);
            checks.add(
                "structure is natural",
                structure.as_ref().is_some_and(|s| natural(&s.v) && natural(&s.phi)),
            );
        }
        _ => checks.add("object kind matches the input", false),
    }
    Ok(())
}

fn verify_descend_vect(input: &Node, w: &Node, opts: Options, checks: &mut Checks) -> Res<()> {
    let mut ctx = Ctx::default();
    let tower = read_tower(input, opts, &mut ctx)?;
    let group = tower.group(input)?;
    let Object::Vector {
        dim,
        structure: Some(gs),
    } = decode_object(input, &tower, false, &["vector"])?
    else {
        return Err(input.err("missing structure").into());
    };
    let l = group.field();
    let kdim = w.get("kdim")?.usize()?;
    let b = decode_matrix(&w.get("kbasis")?, l)?;
    let binv = decode_matrix(&w.get("kbasis_inverse")?, l)?;
    checks.add("K-dimension equals L-dimension", kdim == dim);
    checks.add("basis shape", b.shape() == (dim, dim) && binv.shape() == (dim, dim));
    if b.shape() == (dim, dim) && binv.shape() == (dim, dim) {
        checks.add("basis times inverse is the identity", b.mul(&binv).is_identity());
        checks.add("basis vectors are invariant", fixed_by(&b.transpose(), &gs, group));
    }
    Ok(())
}

/// Checks a pointwise iso `L ⊗ F_K → F` against a structure.
fn check_sheaf_iso(
    sheaf: &PosetSheaf,
    sgs: &SheafGStructure,
    ksheaf: &PosetSheaf,
    iso: &[Matrix],
    group: &GaloisGroup,
    label: &str,
    checks: &mut Checks,
) {
    let l = group.field();
    let poset = sheaf.poset();
    checks.add(format!("{label}: descended poset matches"), ksheaf.poset() == poset);
    checks.add(format!("{label}: one component per point"), iso.len() == poset.len());
    if ksheaf.poset() != poset || iso.len() != poset.len() {
        return;
    }
    for x in poset.points() {
        let shape_ok = iso[x].shape() == (sheaf.stalk_dim(x), ksheaf.stalk_dim(x));
        checks.add(
            format!("{label}: component {x} is invertible"),
            shape_ok && invertible(&iso[x]),
        );
        if shape_ok {
            checks.add(
                format!("{label}: component {x} is invariant"),
                fixed_by(&iso[x], sgs.at(x), group),
            );
        }
    }
    for &(x, y) in poset.covers() {
        let lhs = sheaf.restriction(x, y).mul(&iso[x]);
        let rhs = iso[y].mul(&ksheaf.restriction(x, y).extend_to(l));
        checks.add(format!("{label}: restriction square ({x}, {y}) commutes"), lhs == rhs);
    }
}

fn verify_descend_sheaf(input: &Node, w: &Node, opts: Options, checks: &mut Checks) -> Res<()> {
    let mut ctx = Ctx::default();
    let tower = read_tower(input, opts, &mut ctx)?;
    let group = tower.group(input)?;
    let Object::Sheaf {
        sheaf,
        structure: Some(sgs),
    } = decode_object(input, &tower, false, &["sheaf"])?
    else {
        return Err(input.err("missing structure").into());
    };
    let ksheaf = decode_sheaf(&w.get("descended")?, group.base(), None)?;
    let iso = decode_matrices(&w.get("iso")?, group.field())?;
    let bases = decode_matrices(&w.get("bases")?, group.field())?;
    checks.add(
        "bases are the transposed iso components",
        bases.len() == iso.len() && bases.iter().zip(&iso).all(|(b, i)| b.transpose() == *i),
    );
    check_sheaf_iso(&sheaf, &sgs, &ksheaf, &iso, group, "sheaf", checks);
    Ok(())
}

fn verify_descend_complex(input: &Node, w: &Node, opts: Options, checks: &mut Checks) -> Res<()> {
    let mut ctx = Ctx::default();
    let tower = read_tower(input, opts, &mut ctx)?;
    let group = tower.group(input)?;
    let Object::Complex {
        complex,
        structure: Some(s),
    } = decode_object(input, &tower, false, &["complex"])?
    else {
        return Err(input.err("missing structure").into());
    };
    let kc = decode_complex(&w.get("descended")?, group.base())?;
    checks.add("degrees match", kc.degrees() == complex.degrees());
    let mut isos = Vec::new();
    for entry in w.get("iso")?.items()? {
        let deg = entry.get("degree")?.i64()?;
        isos.push((deg, decode_matrices(&entry.get("components")?, group.field())?));
    }
    checks.add("one iso per degree", isos.iter().map(|(d, _)| *d).eq(complex.degrees()));
    if kc.degrees() != complex.degrees() || !isos.iter().map(|(d, _)| *d).eq(complex.degrees()) {
        return Ok(());
    }
    for (deg, iso) in &isos {
        check_sheaf_iso(
            &complex.term(*deg),
            s.at(*deg),
            &kc.term(*deg),
            iso,
            group,
            &format!("degree {deg}"),
            checks,
        );
    }
    let l = group.field();
    for w2 in isos.windows(2) {
        let ((i, a), (_, b)) = (&w2[0], &w2[1]);
        let (d, dk) = (complex.diff(*i), kc.diff(*i));
        for x in complex.poset().points() {
            if a.len() <= x || b.len() <= x {
                continue;
            }
            let lhs = d.comp(x).mul(&a[x]);
            let rhs = b[x].mul(&dk.comp(x).extend_to(l));
            checks.add(
                format!("differential square in degree {i} at point {x} commutes"),
                lhs == rhs,
            );
        }
    }
    Ok(())
}

fn verify_descend_gluing(input: &Node, w: &Node, opts: Options, checks: &mut Checks) -> Res<()> {
    let mut ctx = Ctx::default();
    let tower = read_tower(input, opts, &mut ctx)?;
    let group = tower.group(input)?;
    let Object::Gluing {
        data,
        structure: Some(s),
    } = decode_object(input, &tower, false, &["gluing"])?
    else {
        return Err(input.err("missing structure").into());
    };
    let l = group.field();
    let kd = decode_gluing(&w.get("descended")?, group.base())?;
    let a = decode_matrix(&w.get("a")?, l)?;
    let b = decode_matrix(&w.get("b")?, l)?;
    checks.add("a is invertible", invertible(&a));
    checks.add("b is invertible", invertible(&b));
    let shapes = a.shape() == (data.local_system().dim(), kd.local_system().dim())
        && b.shape() == (data.phi_dim(), kd.phi_dim());
    checks.add("iso shapes", shapes);
    if !shapes {
        return Ok(());
    }
    checks.add("a is invariant", fixed_by(&a, &s.v, group));
    checks.add("b is invariant", fixed_by(&b, &s.phi, group));
    let extended = kd.local_system().monodromy().extend_to(l);
    let lifted = galdesc::gluing::LocalSystemDisc::new(extended)
        .and_then(|ls| GluingData::new(&ls, kd.phi_dim(), kd.u().extend_to(l), kd.v().extend_to(l)));
    let morphism_ok = lifted
        .and_then(|src| GluingMorphism::new(&src, &data, a.clone(), b.clone()))
        .is_ok();
    checks.add("(a, b) is a morphism of gluing data", morphism_ok);
    Ok(())
}

fn verify_compat(w: &Node, checks: &mut Checks) -> Res<()> {
    let dims = |key: &str| -> Res<Vec<usize>> {
        Ok(w.get(key)?
            .items()?
            .iter()
            .map(|d| d.usize())
            .collect::<Result<Vec<_>, _>>()?)
    };
    let (lhs, rhs) = (dims("lhs_dims")?, dims("rhs_dims")?);
    checks.add("stalk dimensions agree", lhs == rhs);
    checks.add("no recorded failures", w.get("failures")?.items()?.is_empty());
    let comparison = w.get("comparison")?;
    let items = comparison.items()?;
    checks.add("one comparison per point", items.len() == lhs.len());
    for (x, m) in items.iter().enumerate() {
        let rows = m.get("rows")?.usize()?;
        let cols = m.get("cols")?.usize()?;
        checks.add(
            format!("comparison {x} has shape lhs x rhs"),
            lhs.get(x) == Some(&rows) && rhs.get(x) == Some(&cols),
        );
    }
    Ok(())
}

fn verify_hom(input: &Node, w: &Node, opts: Options, checks: &mut Checks) -> Res<()> {
    let mut ctx = Ctx::default();
    let tower = read_tower(input, opts, &mut ctx)?;
    let l = tower.top();
    let f = decode_sheaf(&input.get("source")?, l, None)?;
    let g = decode_sheaf(&input.get("target")?, l, None)?;
    let dim = w.get("dim")?.usize()?;
    let basis = w.get("basis")?.items()?;
    checks.add("dimension matches the basis length", dim == basis.len());
    let mut flat = Vec::new();
    for (i, m) in basis.iter().enumerate() {
        let comps = decode_matrices(m, l)?;
        match SheafMorphism::new(&f, &g, comps) {
            Ok(phi) => {
                checks.add(format!("basis element {i} commutes with restrictions"), true);
                flat.push(phi.flatten());
            }
            Err(_) => checks.add(format!("basis element {i} commutes with restrictions"), false),
        }
    }
    if flat.len() == basis.len() && !flat.is_empty() {
        let cols = flat[0].len();
        let m = Matrix::from_rows(l, cols, flat);
        checks.add("basis is linearly independent", m.rank() == basis.len());
    }
    let direct = hom_global_direct(&f, &g)
        .map(|s| s.dim())
        .map_err(crate::doc::Failure::Math)?;
    checks.add(
        "dimension matches a direct solve of the naturality equations",
        direct == dim,
    );
    Ok(())
}

fn verify_selftest(input: &Node, w: &Node, checks: &mut Checks) -> Res<()> {
    let (seed, sizes) = selftest_params(Some(input.value()))?;
    let seed = seed.ok_or_else(|| input.err("missing key \"seed\""))?;
    let again = selftest_witnesses(&selftest(seed, sizes));
    checks.add(
        "re-running the suites reproduces every count and hash",
        &again == w.value(),
    );
    Ok(())
}
