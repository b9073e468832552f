//! Gluing data on a disc around a single divisor.
//!
//! An object is a local system on the punctured disc (a vector space `V`
//! with monodromy `T`), its unipotent nearby cycles `Ψ` (the generalized
//! 1-eigenspace of `T` with the induced action `t`), a space `Φ`, and maps
//! `u: Ψ → Φ`, `v: Φ → Ψ` with
//!
//! ```text
//! v ∘ u = id − t
//! ```
//!
//! No condition is imposed on `u ∘ v`. All maps on `Ψ` are written in the
//! RREF basis of `Ψ ⊆ V`.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldAut, GaloisGroup};
use crate::linalg::{generalized_eigenspace, kernel, Matrix, Subspace};
use crate::semilinear::{check_gstructure, conjugate_matrix, descend, morphism_in_kforms, GStructure, KForm};

/// `(V, T)` with `T` invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystemDisc {
    monodromy: Matrix,
}

impl LocalSystemDisc {
    pub fn new(monodromy: Matrix) -> Result<Self> {
        if !monodromy.is_square() {
            return Err(Error::NotSquare {
                rows: monodromy.rows(),
                cols: monodromy.cols(),
            });
        }
        if !monodromy.is_invertible() {
            return Err(Error::SingularMonodromy);
        }
        Ok(LocalSystemDisc { monodromy })
    }

    pub fn trivial(field: &Field, dim: usize) -> Self {
        LocalSystemDisc {
            monodromy: Matrix::identity(field, dim),
        }
    }

    pub fn field(&self) -> &Field {
        self.monodromy.field()
    }

    pub fn dim(&self) -> usize {
        self.monodromy.rows()
    }

    pub fn monodromy(&self) -> &Matrix {
        &self.monodromy
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearbyCycles {
    pub psi: Subspace,
    /// `T` on `Ψ`, in the RREF basis of `Ψ`.
    pub t_action: Matrix,
}

impl NearbyCycles {
    pub fn dim(&self) -> usize {
        self.psi.dim()
    }

    /// `id − t`.
    pub fn variation(&self) -> Matrix {
        Matrix::identity(self.psi.field(), self.dim()).sub(&self.t_action)
    }
}

pub fn nearby_unipotent(ls: &LocalSystemDisc) -> NearbyCycles {
    let k = ls.field();
    let psi = generalized_eigenspace(&ls.monodromy, &k.one(), ls.dim()).expect("square monodromy");
    let t_action = psi
        .restrict_map(&ls.monodromy)
        .expect("generalized eigenspace is invariant");
    NearbyCycles { psi, t_action }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    ls: LocalSystemDisc,
    nearby: NearbyCycles,
    phi_dim: usize,
    u: Matrix,
    v: Matrix,
}

/// Pass certificate of [`check_gluing`]: `v·u` and `id − t`, which agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCertificate {
    pub vu: Matrix,
    pub variation: Matrix,
}

impl GluingData {
    /// Checks shapes and the relation `v·u = id − t`.
    pub fn new(ls: &LocalSystemDisc, phi_dim: usize, u: Matrix, v: Matrix) -> Result<Self> {
        let nearby = nearby_unipotent(ls);
        let p = nearby.dim();
        if u.shape() != (phi_dim, p) {
            return Err(Error::Shape(format!(
                "u is {}x{}, expected {phi_dim}x{p}",
                u.rows(),
                u.cols()
            )));
        }
        if v.shape() != (p, phi_dim) {
            return Err(Error::Shape(format!(
                "v is {}x{}, expected {p}x{phi_dim}",
                v.rows(),
                v.cols()
            )));
        }
        if u.field() != ls.field() || v.field() != ls.field() {
            return Err(Error::FieldMismatch);
        }
        let gd = GluingData {
            ls: ls.clone(),
            nearby,
            phi_dim,
            u,
            v,
        };
        check_gluing(&gd)?;
        Ok(gd)
    }

    pub fn zero(field: &Field) -> Self {
        let ls = LocalSystemDisc::trivial(field, 0);
        GluingData::new(&ls, 0, Matrix::zeros(field, 0, 0), Matrix::zeros(field, 0, 0)).expect("zero object")
    }

    pub fn field(&self) -> &Field {
        self.ls.field()
    }

    pub fn local_system(&self) -> &LocalSystemDisc {
        &self.ls
    }

    pub fn nearby(&self) -> &NearbyCycles {
        &self.nearby
    }

    pub fn phi_dim(&self) -> usize {
        self.phi_dim
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.ls.dim() == 0 && self.phi_dim == 0
    }
}

pub fn check_gluing(gd: &GluingData) -> Result<RelationCertificate> {
    let vu = gd.v.mul(&gd.u);
    let variation = gd.nearby.variation();
    if vu != variation {
        return Err(Error::RelationViolated {
            difference: vu.sub(&variation),
        });
    }
    Ok(RelationCertificate { vu, variation })
}

/// `(a, b)` between the `V`'s and the `Φ`'s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingMorphism {
    source: GluingData,
    target: GluingData,
    a: Matrix,
    b: Matrix,
    a_psi: Matrix,
}

impl GluingMorphism {
    pub fn new(source: &GluingData, target: &GluingData, a: Matrix, b: Matrix) -> Result<Self> {
        let bad = |s: &str| Err(Error::NotGluingMorphism(s.into()));
        if a.shape() != (target.ls.dim(), source.ls.dim()) || b.shape() != (target.phi_dim, source.phi_dim) {
            return bad("shape");
        }
        if a.mul(source.ls.monodromy()) != target.ls.monodromy().mul(&a) {
            return bad("a does not commute with the monodromies");
        }
        let Some(a_psi) = map_on_subspaces(&a, &source.nearby.psi, &target.nearby.psi) else {
            return bad("a does not map nearby cycles to nearby cycles");
        };
        if b.mul(&source.u) != target.u.mul(&a_psi) {
            return bad("b·u ≠ u'·a");
        }
        if target.v.mul(&b) != a_psi.mul(&source.v) {
            return bad("v'·b ≠ a·v");
        }
        Ok(GluingMorphism {
            source: source.clone(),
            target: target.clone(),
            a,
            b,
            a_psi,
        })
    }

    pub fn identity(gd: &GluingData) -> Self {
        let k = gd.field();
        Self::new(
            gd,
            gd,
            Matrix::identity(k, gd.ls.dim()),
            Matrix::identity(k, gd.phi_dim),
        )
        .expect("identity")
    }

    pub fn zero(source: &GluingData, target: &GluingData) -> Self {
        let k = source.field();
        Self::new(
            source,
            target,
            Matrix::zeros(k, target.ls.dim(), source.ls.dim()),
            Matrix::zeros(k, target.phi_dim, source.phi_dim),
        )
        .expect("zero morphism")
    }

    pub fn source(&self) -> &GluingData {
        &self.source
    }

    pub fn target(&self) -> &GluingData {
        &self.target
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// `a` restricted to the nearby cycles, in their bases.
    pub fn a_psi(&self) -> &Matrix {
        &self.a_psi
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GluingMorphism) -> Result<GluingMorphism> {
        if other.target != self.source {
            return Err(Error::NotGluingMorphism("not composable".into()));
        }
        GluingMorphism::new(&other.source, &self.target, self.a.mul(&other.a), self.b.mul(&other.b))
    }
}

/// Matrix of `a` from the basis of `src` to the basis of `dst`, if `a`
/// maps one into the other.
fn map_on_subspaces(a: &Matrix, src: &Subspace, dst: &Subspace) -> Option<Matrix> {
    let cols = src
        .basis()
        .row_vecs()
        .iter()
        .map(|p| dst.coords(&a.mul_vec(p)))
        .collect::<Option<Vec<_>>>()?;
    Some(Matrix::from_rows(a.field(), dst.dim(), cols).transpose())
}

/// `Σ c_i · basis_i`.
fn expand(s: &Subspace, c: &[Elem]) -> Vec<Elem> {
    s.basis().transpose().mul_vec(c)
}

/// The kernel object and its inclusion into the source.
pub fn kernel_gluing(m: &GluingMorphism) -> Result<(GluingData, GluingMorphism)> {
    let src = &m.source;
    let k = src.field();
    let ka = kernel(&m.a);
    let kb = kernel(&m.b);
    let t = ka
        .restrict_map(src.ls.monodromy())
        .map_err(|_| Error::Internal("ker a is not monodromy invariant".into()))?;
    let ls = LocalSystemDisc::new(t)?;
    let nearby = nearby_unipotent(&ls);
    let internal = |what: &str| Error::Internal(format!("kernel construction: {what}"));

    let u_cols = nearby
        .psi
        .basis()
        .row_vecs()
        .iter()
        .map(|w| {
            let p = expand(&ka, w);
            let c = src.nearby.psi.coords(&p).ok_or_else(|| internal("Ψ of ker a"))?;
            kb.coords(&src.u.mul_vec(&c)).ok_or_else(|| internal("u leaves ker b"))
        })
        .collect::<Result<Vec<_>>>()?;
    let u = Matrix::from_rows(k, kb.dim(), u_cols).transpose();

    let v_cols = kb
        .basis()
        .row_vecs()
        .iter()
        .map(|q| {
            let p = expand(&src.nearby.psi, &src.v.mul_vec(q));
            let w = ka.coords(&p).ok_or_else(|| internal("v leaves ker a"))?;
            nearby.psi.coords(&w).ok_or_else(|| internal("v leaves Ψ"))
        })
        .collect::<Result<Vec<_>>>()?;
    let v = Matrix::from_rows(k, nearby.dim(), v_cols).transpose();

    let kernel_obj = GluingData::new(&ls, kb.dim(), u, v).map_err(|e| internal(&e.to_string()))?;
    let inclusion = GluingMorphism::new(&kernel_obj, src, ka.basis().transpose(), kb.basis().transpose())?;
    Ok((kernel_obj, inclusion))
}

/// `(V, T)` and `Φ` each with a semilinear structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingGStructure {
    pub v: GStructure,
    pub phi: GStructure,
}

impl GluingGStructure {
    pub fn natural(gd: &GluingData, group: &GaloisGroup) -> Self {
        GluingGStructure {
            v: GStructure::natural(group, gd.ls.dim()),
            phi: GStructure::natural(group, gd.phi_dim),
        }
    }
}

/// Pass certificate of [`check_gluing_gstructure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingGCertificate {
    /// The induced structure on `Ψ`.
    pub psi: GStructure,
}

/// The induced structure on `Ψ`: `σ_g` maps `Ψ` to itself because it
/// commutes with the monodromy.
pub fn psi_structure(gd: &GluingData, s: &GStructure, group: &GaloisGroup) -> Result<GStructure> {
    let psi = &gd.nearby.psi;
    let mats = group
        .elements()
        .iter()
        .enumerate()
        .map(|(g, aut)| {
            let moved = s.matrix(g).mul(&conjugate_matrix(aut, &psi.basis().transpose()));
            let cols = (0..moved.cols())
                .map(|j| psi.coords(&moved.col(j)).ok_or(Error::NotMonodromyEquivariant { g }))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_rows(gd.field(), psi.dim(), cols).transpose())
        })
        .collect::<Result<Vec<_>>>()?;
    GStructure::new(gd.field(), psi.dim(), mats)
}

pub fn check_gluing_gstructure(
    gd: &GluingData,
    s: &GluingGStructure,
    group: &GaloisGroup,
) -> Result<GluingGCertificate> {
    if s.v.dim() != gd.ls.dim() || s.phi.dim() != gd.phi_dim {
        return Err(Error::Shape("structure dimensions do not match the gluing data".into()));
    }
    check_gstructure(&s.v, group)?;
    check_gstructure(&s.phi, group)?;
    let t = gd.ls.monodromy();
    for (g, aut) in group.elements().iter().enumerate() {
        if s.v.matrix(g).mul(&conjugate_matrix(aut, t)) != t.mul(s.v.matrix(g)) {
            return Err(Error::NotMonodromyEquivariant { g });
        }
    }
    let psi = psi_structure(gd, &s.v, group)?;
    for (g, aut) in group.elements().iter().enumerate() {
        if s.phi.matrix(g).mul(&conjugate_matrix(aut, &gd.u)) != gd.u.mul(psi.matrix(g)) {
            return Err(Error::NotEquivariantMap { map: "u", g });
        }
        if psi.matrix(g).mul(&conjugate_matrix(aut, &gd.v)) != gd.v.mul(s.phi.matrix(g)) {
            return Err(Error::NotEquivariantMap { map: "v", g });
        }
    }
    Ok(GluingGCertificate { psi })
}

/// Whether nearby cycles commute with extension of scalars for this
/// local system: `Ψ(L ⊗ V) = L ⊗ Ψ(V)` with equal `t`.
pub fn nearby_commutes_with_extension(ls: &LocalSystemDisc, ext: &Field) -> bool {
    let before = nearby_unipotent(ls);
    let after = nearby_unipotent(&LocalSystemDisc {
        monodromy: ls.monodromy.extend_to(ext),
    });
    let extended = Subspace::span(ext, ls.dim(), &before.psi.basis().extend_to(ext));
    after.psi == extended && after.t_action == before.t_action.extend_to(ext)
}

/// Whether nearby cycles commute with conjugation by `g`.
pub fn nearby_commutes_with_conjugation(ls: &LocalSystemDisc, g: &FieldAut) -> bool {
    let before = nearby_unipotent(ls);
    let after = nearby_unipotent(&LocalSystemDisc {
        monodromy: conjugate_matrix(g, &ls.monodromy),
    });
    let conj = Subspace::span(ls.field(), ls.dim(), &conjugate_matrix(g, before.psi.basis()));
    after.psi == conj && after.t_action == conjugate_matrix(g, &before.t_action)
}

pub fn extend_gluing(gd: &GluingData, group: &GaloisGroup) -> Result<(GluingData, GluingGStructure)> {
    let l = group.field();
    if !nearby_commutes_with_extension(&gd.ls, l) {
        return Err(Error::Internal(
            "nearby cycles changed under extension of scalars".into(),
        ));
    }
    let ls = LocalSystemDisc::new(gd.ls.monodromy.extend_to(l))?;
    let ext = GluingData::new(&ls, gd.phi_dim, gd.u.extend_to(l), gd.v.extend_to(l))?;
    let s = GluingGStructure::natural(&ext, group);
    Ok((ext, s))
}

/// `g` applied to every entry of `T`, `u`, `v`.
pub fn conjugate_gluing(gd: &GluingData, g: &FieldAut) -> Result<GluingData> {
    if !nearby_commutes_with_conjugation(&gd.ls, g) {
        return Err(Error::Internal("nearby cycles do not commute with conjugation".into()));
    }
    let ls = LocalSystemDisc::new(conjugate_matrix(g, &gd.ls.monodromy))?;
    GluingData::new(&ls, gd.phi_dim, conjugate_matrix(g, &gd.u), conjugate_matrix(g, &gd.v))
}

/// Moves gluing data and its structure along `P: V → V'` and `Q: Φ → Φ'`.
pub fn transport_gluing(
    gd: &GluingData,
    s: &GluingGStructure,
    group: &GaloisGroup,
    p: &Matrix,
    q: &Matrix,
) -> Result<(GluingData, GluingGStructure)> {
    let p_inv = p.inverse().ok_or(Error::SingularMatrix)?;
    let q_inv = q.inverse().ok_or(Error::SingularMatrix)?;
    let ls = LocalSystemDisc::new(p.mul(gd.ls.monodromy()).mul(&p_inv))?;
    let nearby = nearby_unipotent(&ls);
    let c = map_on_subspaces(p, &gd.nearby.psi, &nearby.psi)
        .ok_or_else(|| Error::Internal("P does not move Ψ onto Ψ'".into()))?;
    let c_inv = c.inverse().ok_or(Error::SingularMatrix)?;
    let moved = GluingData::new(&ls, gd.phi_dim, q.mul(&gd.u).mul(&c_inv), c.mul(&gd.v).mul(&q_inv))?;
    let structure = GluingGStructure {
        v: s.v.transport(group, p)?,
        phi: s.phi.transport(group, q)?,
    };
    Ok((moved, structure))
}

/// Descended gluing data and the isomorphism `L ⊗ data → original`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingKForm {
    pub data: GluingData,
    pub v_form: KForm,
    pub phi_form: KForm,
    pub iso: GluingMorphism,
}

pub fn descend_gluing(gd: &GluingData, s: &GluingGStructure, group: &GaloisGroup) -> Result<GluingKForm> {
    group.require_galois()?;
    check_gluing_gstructure(gd, s, group)?;
    let l = group.field();
    let k = group.base();
    let internal = |what: &str| Error::Internal(format!("gluing descent: {what}"));
    let coerce = |v: Vec<Elem>| -> Result<Vec<Elem>> {
        v.iter()
            .map(|x| group.coerce_down(x))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| internal("coordinates are not fixed"))
    };

    let v_form = descend(&s.v, group)?;
    let phi_form = descend(&s.phi, group)?;
    let t_k = morphism_in_kforms(gd.ls.monodromy(), &v_form, &v_form, group)
        .map_err(|_| internal("monodromy is not fixed"))?;
    let ls_k = LocalSystemDisc::new(t_k)?;
    let nearby_k = nearby_unipotent(&ls_k);

    let u_cols = nearby_k
        .psi
        .basis()
        .extend_to(l)
        .row_vecs()
        .iter()
        .map(|q| {
            let p = v_form.iso().mul_vec(q);
            let c = gd.nearby.psi.coords(&p).ok_or_else(|| internal("Ψ does not descend"))?;
            coerce(phi_form.iso_inverse().mul_vec(&gd.u.mul_vec(&c)))
        })
        .collect::<Result<Vec<_>>>()?;
    let u_k = Matrix::from_rows(k, phi_form.kdim, u_cols).transpose();

    let v_cols = (0..phi_form.kdim)
        .map(|j| {
            let e = phi_form.iso().col(j);
            let p = expand(&gd.nearby.psi, &gd.v.mul_vec(&e));
            let w = coerce(v_form.iso_inverse().mul_vec(&p))?;
            nearby_k.psi.coords(&w).ok_or_else(|| internal("v leaves Ψ"))
        })
        .collect::<Result<Vec<_>>>()?;
    let v_k = Matrix::from_rows(k, nearby_k.dim(), v_cols).transpose();

    let data = GluingData::new(&ls_k, phi_form.kdim, u_k, v_k).map_err(|e| internal(&e.to_string()))?;
    let (extended, _) = extend_gluing(&data, group)?;
    let iso = GluingMorphism::new(&extended, gd, v_form.iso(), phi_form.iso()).map_err(|e| internal(&e.to_string()))?;
    Ok(GluingKForm {
        data,
        v_form,
        phi_form,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{finite_extension, gaussian_rationals};

    fn q() -> Field {
        Field::rationals()
    }

    fn gal() -> GaloisGroup {
        let qi = gaussian_rationals();
        let hint = qi.parse("-1*i").unwrap();
        GaloisGroup::automorphisms(&qi, &[hint]).unwrap()
    }

    fn jordan(k: &Field, u: i64) -> Result<GluingData> {
        let ls = LocalSystemDisc::new(Matrix::from_i64(k, &[&[1, 1], &[0, 1]]))?;
        GluingData::new(
            &ls,
            1,
            Matrix::from_i64(k, &[&[0, u]]),
            Matrix::from_i64(k, &[&[1], &[0]]),
        )
    }

    #[test]
    fn nearby_examples() {
        let k = q();
        let id = nearby_unipotent(&LocalSystemDisc::trivial(&k, 3));
        assert_eq!(id.psi, Subspace::full(&k, 3));
        assert!(id.t_action.is_identity());
        let d = nearby_unipotent(&LocalSystemDisc::new(Matrix::from_i64(&k, &[&[1, 0], &[0, 3]])).unwrap());
        assert_eq!(d.dim(), 1);
        assert_eq!(d.psi.basis(), &Matrix::from_i64(&k, &[&[1, 0]]));
        assert_eq!(d.t_action, Matrix::from_i64(&k, &[&[1]]));
        let j = Matrix::from_i64(&k, &[&[1, 1], &[0, 1]]);
        let n = nearby_unipotent(&LocalSystemDisc::new(j.clone()).unwrap());
        assert_eq!(n.dim(), 2);
        assert_eq!(n.t_action, j);
        assert!(matches!(
            LocalSystemDisc::new(Matrix::zeros(&k, 1, 1)),
            Err(Error::SingularMonodromy)
        ));
    }

    #[test]
    fn relation_examples() {
        let k = q();
        let ls = LocalSystemDisc::trivial(&k, 2);
        GluingData::new(&ls, 3, Matrix::zeros(&k, 3, 2), Matrix::zeros(&k, 2, 3)).unwrap();
        let gd = jordan(&k, -1).unwrap();
        assert_eq!(
            check_gluing(&gd).unwrap().vu,
            Matrix::from_i64(&k, &[&[0, -1], &[0, 0]])
        );
        match jordan(&k, 1) {
            Err(Error::RelationViolated { difference }) => {
                assert_eq!(difference, Matrix::from_i64(&k, &[&[0, 2], &[0, 0]]));
            }
            other => panic!("expected a relation violation, got {other:?}"),
        }
    }

    #[test]
    fn kernel_examples() {
        let k = q();
        let gd = jordan(&k, -1).unwrap();
        let (ker0, _) = kernel_gluing(&GluingMorphism::zero(&gd, &gd)).unwrap();
        assert_eq!(ker0, gd);
        let (ker1, _) = kernel_gluing(&GluingMorphism::identity(&gd)).unwrap();
        assert!(ker1.is_zero());
        let collapse = GluingMorphism::new(&gd, &gd, Matrix::identity(&k, 2), Matrix::zeros(&k, 1, 1));
        assert!(matches!(collapse, Err(Error::NotGluingMorphism(_))));
    }

    #[test]
    fn extension_and_conjugation() {
        let f2 = Field::prime(2).unwrap();
        let f4 = finite_extension(2, &[1, 1, 1], "w").unwrap();
        let g4 = GaloisGroup::automorphisms(&f4, &[]).unwrap();
        let triv = GluingData::new(
            &LocalSystemDisc::trivial(&f2, 2),
            1,
            Matrix::zeros(&f2, 1, 2),
            Matrix::zeros(&f2, 2, 1),
        )
        .unwrap();
        let (ext, s) = extend_gluing(&triv, &g4).unwrap();
        assert_eq!(ext.local_system().monodromy(), &Matrix::identity(&f4, 2));
        check_gluing_gstructure(&ext, &s, &g4).unwrap();

        let g = gal();
        let gd = jordan(&q(), -1).unwrap();
        let (ext, _) = extend_gluing(&gd, &g).unwrap();
        assert_eq!(ext.nearby().dim(), gd.nearby().dim());
        let (z, _) = extend_gluing(&GluingData::zero(&q()), &g).unwrap();
        assert!(z.is_zero());

        assert_eq!(conjugate_gluing(&ext, g.get(1)).unwrap(), ext);
        assert_eq!(conjugate_gluing(&ext, g.get(0)).unwrap(), ext);
        let l = g.field();
        let ti = LocalSystemDisc::new(Matrix::new(l, 1, 1, vec![l.generator()])).unwrap();
        let gi = GluingData::new(&ti, 0, Matrix::zeros(l, 0, 0), Matrix::zeros(l, 0, 0)).unwrap();
        let conj = conjugate_gluing(&gi, g.get(1)).unwrap();
        assert_eq!(l.format(conj.local_system().monodromy().get(0, 0)), "-1*i");
        assert_eq!(conj.nearby().dim(), 0);
    }

    #[test]
    fn descent_examples() {
        let g = gal();
        let l = g.field();
        let gd = jordan(&q(), -1).unwrap();
        let (ext, s) = extend_gluing(&gd, &g).unwrap();
        let kf = descend_gluing(&ext, &s, &g).unwrap();
        assert_eq!(kf.data, gd);

        let ls = LocalSystemDisc::trivial(l, 1);
        let one = GluingData::new(&ls, 1, Matrix::zeros(l, 1, 1), Matrix::zeros(l, 1, 1)).unwrap();
        let i_mat = Matrix::new(l, 1, 1, vec![l.generator()]);
        let twist = GStructure::new(l, 1, vec![Matrix::identity(l, 1), i_mat]).unwrap();
        let s = GluingGStructure {
            v: twist.clone(),
            phi: twist,
        };
        let kf = descend_gluing(&one, &s, &g).unwrap();
        assert_eq!(l.format(kf.v_form.kbasis.get(0, 0)), "1+1*i");
        assert_eq!(l.format(kf.phi_form.kbasis.get(0, 0)), "1+1*i");
        assert!(kf.data.u().is_zero() && kf.data.v().is_zero());
    }

    #[test]
    fn non_equivariant_structures_rejected() {
        let g = gal();
        let l = g.field();
        let t = Matrix::new(l, 2, 2, vec![l.one(), l.one(), l.zero(), l.one()]);
        let ls = LocalSystemDisc::new(t).unwrap();
        let u = Matrix::new(l, 1, 2, vec![l.zero(), l.from_i64(-1)]);
        let v = Matrix::new(l, 2, 1, vec![l.one(), l.zero()]);
        let gd = GluingData::new(&ls, 1, u, v).unwrap();
        let i = l.generator();
        let a = Matrix::new(l, 2, 2, vec![i.clone(), l.zero(), l.zero(), l.neg(&i)]);
        let s = GluingGStructure {
            v: GStructure::new(l, 2, vec![Matrix::identity(l, 2), a]).unwrap(),
            phi: GStructure::natural(&g, 1),
        };
        assert!(matches!(
            check_gluing_gstructure(&gd, &s, &g),
            Err(Error::NotMonodromyEquivariant { g: 1 })
        ));
    }
}
