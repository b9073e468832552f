//! Extension of scalars and Galois descent for sheaves on finite posets.
//!
//! A G-structure on a sheaf of `L`-vector spaces is a G-structure on every
//! stalk such that each `σ_g` is a morphism of sheaves:
//!
//! ```text
//! R_xy · A_g(x) = A_g(y) · g(R_xy)      for every cover x ⋖ y
//! ```
//!
//! Descent is pointwise; the descended restriction maps are the original
//! ones written in the invariant bases, whose entries are then `G`-fixed.
//!
//! Extension of scalars is the pointwise tensor product. Stalks are
//! sections over the minimal open sets, so this presheaf is already a sheaf
//! and the induced G-structure needs no sheafification.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, GaloisGroup};
use crate::linalg::{kernel, Matrix};
use crate::poset::MonotoneMap;
use crate::semilinear::{
    check_equivariant, check_gstructure, conjugate_matrix, from_k_coords, invariant_kform, morphism_in_kforms,
    restrict_map, CocycleCertificate, GStructure, KForm,
};
use crate::sheaf::{
    combine, hom_global, hom_global_direct, pullback, pushforward_with_sections, sheaf_hom, PosetSheaf, Sections,
    SheafMorphism,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafGStructure {
    sheaf: PosetSheaf,
    points: Vec<GStructure>,
}

impl SheafGStructure {
    /// Checks shapes only; see [`check_sheaf_gstructure`].
    pub fn new(sheaf: &PosetSheaf, points: Vec<GStructure>) -> Result<Self> {
        if points.len() != sheaf.poset().len() {
            return Err(Error::Shape(format!(
                "{} pointwise structures for {} points",
                points.len(),
                sheaf.poset().len()
            )));
        }
        for (x, gs) in points.iter().enumerate() {
            if gs.dim() != sheaf.stalk_dim(x) {
                return Err(Error::DimensionMismatch {
                    expected: sheaf.stalk_dim(x),
                    found: gs.dim(),
                });
            }
            if gs.field() != sheaf.field() {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(SheafGStructure {
            sheaf: sheaf.clone(),
            points,
        })
    }

    pub fn natural(sheaf: &PosetSheaf, group: &GaloisGroup) -> Self {
        let points = sheaf
            .stalk_dims()
            .iter()
            .map(|&d| GStructure::natural(group, d))
            .collect();
        SheafGStructure {
            sheaf: sheaf.clone(),
            points,
        }
    }

    pub fn sheaf(&self) -> &PosetSheaf {
        &self.sheaf
    }

    pub fn at(&self, x: usize) -> &GStructure {
        &self.points[x]
    }

    pub fn points(&self) -> &[GStructure] {
        &self.points
    }

    pub fn is_natural(&self) -> bool {
        self.points.iter().all(GStructure::is_natural)
    }

    /// Transports the structure along the pointwise isomorphism `P`:
    /// restrictions become `P_y R P_x⁻¹` and `A_g(x)` becomes
    /// `P_x A_g(x) g(P_x)⁻¹`.
    pub fn transport(&self, group: &GaloisGroup, p: &[Matrix]) -> Result<SheafGStructure> {
        let inverses = p
            .iter()
            .map(|m| m.inverse().ok_or(Error::SingularMatrix))
            .collect::<Result<Vec<_>>>()?;
        let field = self.sheaf.field().clone();
        let sheaf = self
            .sheaf
            .map_restrictions(&field, |x, y, r| p[y].mul(r).mul(&inverses[x]))?;
        let points = self
            .points
            .iter()
            .zip(p)
            .map(|(gs, m)| gs.transport(group, m))
            .collect::<Result<Vec<_>>>()?;
        SheafGStructure::new(&sheaf, points)
    }
}

/// `L ⊗ G` with its natural structure.
pub fn extend_sheaf(g: &PosetSheaf, group: &GaloisGroup) -> (PosetSheaf, SheafGStructure) {
    let ext = g.extend_to(group.field());
    let gs = SheafGStructure::natural(&ext, group);
    (ext, gs)
}

/// Pass certificate of [`check_sheaf_gstructure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafCocycleCertificate {
    pub points: Vec<CocycleCertificate>,
    /// Every `(x, y, g)` whose compatibility square was verified.
    pub squares: Vec<(usize, usize, usize)>,
}

pub fn check_sheaf_gstructure(sgs: &SheafGStructure, group: &GaloisGroup) -> Result<SheafCocycleCertificate> {
    let points = sgs
        .points
        .iter()
        .enumerate()
        .map(|(x, gs)| {
            check_gstructure(gs, group).map_err(|e| match e {
                Error::NotCocycle { g, h } => Error::NotCocycleAt { x, g, h },
                Error::Singular(g) => Error::SingularAt { x, g },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut squares = Vec::new();
    for &(x, y) in sgs.sheaf.poset().covers() {
        let r = sgs.sheaf.restriction(x, y);
        for (g, aut) in group.elements().iter().enumerate() {
            let lhs = r.mul(sgs.points[x].matrix(g));
            let rhs = sgs.points[y].matrix(g).mul(&conjugate_matrix(aut, r));
            if lhs != rhs {
                return Err(Error::NotSheafMorphism { x, y, g });
            }
            squares.push((x, y, g));
        }
    }
    Ok(SheafCocycleCertificate { points, squares })
}

/// A `K`-sheaf together with the isomorphism `L ⊗ ksheaf → F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafKForm {
    pub ksheaf: PosetSheaf,
    pub kforms: Vec<KForm>,
    /// Components `B_xᵀ`.
    pub iso: SheafMorphism,
}

impl SheafKForm {
    /// Inverse of [`SheafKForm::iso`].
    pub fn iso_inverse(&self) -> SheafMorphism {
        let comps = self.kforms.iter().map(KForm::iso_inverse).collect();
        SheafMorphism::new(self.iso.target(), self.iso.source(), comps).expect("inverse of a sheaf isomorphism")
    }

    /// Re-checks the certificate: the iso goes from `L ⊗ ksheaf` to the
    /// original sheaf, commutes with restrictions, is pointwise invertible
    /// and carries the natural structure to the given one.
    pub fn verify(&self, sgs: &SheafGStructure, group: &GaloisGroup) -> Result<()> {
        let extended = self.ksheaf.extend_to(group.field());
        if self.iso.source() != &extended || self.iso.target() != &sgs.sheaf {
            return Err(Error::Internal("iso has the wrong source or target".into()));
        }
        let recheck = SheafMorphism::new(&extended, &sgs.sheaf, self.iso.comps().to_vec())?;
        for (x, kf) in self.kforms.iter().enumerate() {
            if recheck.comp(x) != &kf.iso() {
                return Err(Error::Internal(format!("iso component at {x} differs from the K-form")));
            }
            kf.verify(sgs.at(x), group).map_err(|e| match e {
                Error::NotEquivariant { g } => Error::NotEquivariantAt { x, g },
                other => other,
            })?;
        }
        Ok(())
    }
}

pub fn descend_sheaf(sgs: &SheafGStructure, group: &GaloisGroup) -> Result<SheafKForm> {
    group.require_galois()?;
    check_sheaf_gstructure(sgs, group)?;
    let kforms = sgs
        .points
        .iter()
        .enumerate()
        .map(|(x, gs)| {
            invariant_kform(gs, group).map_err(|e| match e {
                Error::DescentFailed { found, expected } => Error::DescentFailedAt { x, found, expected },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k = group.base();
    let poset = sgs.sheaf.poset();
    let mut res = std::collections::BTreeMap::new();
    for &(x, y) in poset.covers() {
        let c = kforms[y]
            .iso_inverse()
            .mul(sgs.sheaf.restriction(x, y))
            .mul(&kforms[x].iso());
        let data = c
            .data()
            .iter()
            .map(|e| group.coerce_down(e))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::NotFixedRestriction { x, y })?;
        res.insert((x, y), Matrix::new(k, c.rows(), c.cols(), data));
    }
    let ksheaf = PosetSheaf::new(k, poset, sgs.sheaf.stalk_dims().to_vec(), res)?;
    let iso = SheafMorphism::new(
        &ksheaf.extend_to(group.field()),
        &sgs.sheaf,
        kforms.iter().map(KForm::iso).collect(),
    )
    .map_err(|e| Error::Internal(format!("descended iso does not commute: {e}")))?;
    Ok(SheafKForm { ksheaf, kforms, iso })
}

/// Descends a `G`-equivariant morphism to the descended `K`-sheaves.
pub fn descend_sheaf_morphism(
    f: &SheafMorphism,
    src: &SheafGStructure,
    dst: &SheafGStructure,
    group: &GaloisGroup,
) -> Result<SheafMorphism> {
    if f.source() != &src.sheaf || f.target() != &dst.sheaf {
        return Err(Error::Shape("morphism does not match the given structures".into()));
    }
    check_sheaf_equivariant(f, src, dst, group)?;
    let ksrc = descend_sheaf(src, group)?;
    let kdst = descend_sheaf(dst, group)?;
    descend_in_kforms(f, &ksrc, &kdst, group)
}

/// Checks `A_g^dst(x) · g(f_x) = f_x · A_g^src(x)` at every point.
pub fn check_sheaf_equivariant(
    f: &SheafMorphism,
    src: &SheafGStructure,
    dst: &SheafGStructure,
    group: &GaloisGroup,
) -> Result<()> {
    for x in src.sheaf.poset().points() {
        check_equivariant(f.comp(x), src.at(x), dst.at(x), group).map_err(|e| match e {
            Error::NotEquivariant { g } => Error::NotEquivariantAt { x, g },
            other => other,
        })?;
    }
    Ok(())
}

/// Writes an equivariant morphism in already computed K-forms.
pub fn descend_in_kforms(
    f: &SheafMorphism,
    ksrc: &SheafKForm,
    kdst: &SheafKForm,
    group: &GaloisGroup,
) -> Result<SheafMorphism> {
    let comps = ksrc
        .kforms
        .iter()
        .zip(&kdst.kforms)
        .enumerate()
        .map(|(x, (s, d))| morphism_in_kforms(f.comp(x), s, d, group))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::Internal("equivariant morphism has non-fixed coordinates".into()))?;
    SheafMorphism::new(&ksrc.ksheaf, &kdst.ksheaf, comps)
}

/// One way a compatibility comparison can fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatFailure {
    StalkDim { x: usize, lhs: usize, rhs: usize },
    NotIso { x: usize },
    NotCommuting { x: usize, y: usize },
    GlobalDim { lhs: usize, rhs: usize },
    BaseChangeRank { rank: usize, expected: usize },
    Error(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompatKind {
    Pullback,
    Pushforward,
    Hom,
}

impl CompatKind {
    pub fn name(self) -> &'static str {
        match self {
            CompatKind::Pullback => "pullback",
            CompatKind::Pushforward => "pushforward",
            CompatKind::Hom => "hom",
        }
    }
}

/// Outcome of comparing `L ⊗ Op(F)` with `Op(L ⊗ F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatReport {
    pub kind: CompatKind,
    /// Stalk dimensions of `L ⊗ Op(F)`.
    pub lhs_dims: Vec<usize>,
    /// Stalk dimensions of `Op(L ⊗ F)`.
    pub rhs_dims: Vec<usize>,
    /// Natural comparison map, pointwise.
    pub comparison: Vec<Matrix>,
    pub failures: Vec<CompatFailure>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn from_comparison(kind: CompatKind, lhs: &PosetSheaf, rhs: &PosetSheaf, comps: Vec<Matrix>) -> Self {
        let mut failures = Vec::new();
        for x in lhs.poset().points() {
            if lhs.stalk_dim(x) != rhs.stalk_dim(x) {
                failures.push(CompatFailure::StalkDim {
                    x,
                    lhs: lhs.stalk_dim(x),
                    rhs: rhs.stalk_dim(x),
                });
            } else if !comps[x].is_invertible() {
                failures.push(CompatFailure::NotIso { x });
            }
        }
        if failures.is_empty() {
            match SheafMorphism::new(lhs, rhs, comps.clone()) {
                Ok(_) => {}
                Err(Error::NotSheafMorphismSquare(x, y)) => failures.push(CompatFailure::NotCommuting { x, y }),
                Err(e) => failures.push(CompatFailure::Error(e.to_string())),
            }
        }
        CompatReport {
            kind,
            lhs_dims: lhs.stalk_dims().to_vec(),
            rhs_dims: rhs.stalk_dims().to_vec(),
            comparison: comps,
            failures,
        }
    }

    fn error(kind: CompatKind, e: Error) -> Self {
        CompatReport {
            kind,
            lhs_dims: vec![],
            rhs_dims: vec![],
            comparison: vec![],
            failures: vec![CompatFailure::Error(e.to_string())],
        }
    }
}

/// `L ⊗ f⁻¹G` against `f⁻¹(L ⊗ G)`; the comparison is the identity on
/// stalk coordinates.
pub fn check_compat_pullback(f: &MonotoneMap, g: &PosetSheaf, group: &GaloisGroup) -> CompatReport {
    let l = group.field();
    let run = || -> Result<CompatReport> {
        let lhs = pullback(f, g)?.extend_to(l);
        let rhs = pullback(f, &g.extend_to(l))?;
        let comps = lhs.stalk_dims().iter().map(|&d| Matrix::identity(l, d)).collect();
        Ok(CompatReport::from_comparison(CompatKind::Pullback, &lhs, &rhs, comps))
    };
    run().unwrap_or_else(|e| CompatReport::error(CompatKind::Pullback, e))
}

/// `L ⊗ f_*F` against `f_*(L ⊗ F)`; the comparison sends `1 ⊗ s` to the
/// extended section `s`.
pub fn check_compat_pushforward(f: &MonotoneMap, sheaf: &PosetSheaf, group: &GaloisGroup) -> CompatReport {
    let l = group.field();
    let run = || -> Result<CompatReport> {
        let (kpush, ksecs) = pushforward_with_sections(f, sheaf)?;
        let (rhs, lsecs) = pushforward_with_sections(f, &sheaf.extend_to(l))?;
        let lhs = kpush.extend_to(l);
        let comps = ksecs
            .iter()
            .zip(&lsecs)
            .map(|(ks, ls)| section_comparison(l, ks, ls))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompatReport::from_comparison(
            CompatKind::Pushforward,
            &lhs,
            &rhs,
            comps,
        ))
    };
    run().unwrap_or_else(|e| CompatReport::error(CompatKind::Pushforward, e))
}

/// Matrix sending each extended `K`-basis vector of `ks` to its coordinates
/// in the `L`-basis of `ls`.
fn section_comparison(l: &Field, ks: &Sections, ls: &Sections) -> Result<Matrix> {
    let cols = ks
        .space
        .basis()
        .extend_to(l)
        .row_vecs()
        .iter()
        .map(|v| {
            ls.space
                .coords(v)
                .ok_or_else(|| Error::Internal("extended section is not a section".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(l, ls.dim(), cols).transpose())
}

/// `L ⊗ Hom(F, G)` against `Hom(L ⊗ F, L ⊗ G)`, stalkwise and on global
/// sections.
pub fn check_compat_hom(f: &PosetSheaf, g: &PosetSheaf, group: &GaloisGroup) -> CompatReport {
    let l = group.field();
    let run = || -> Result<CompatReport> {
        let khom = sheaf_hom(f, g)?;
        let lhom = sheaf_hom(&f.extend_to(l), &g.extend_to(l))?;
        let lhs = khom.sheaf.extend_to(l);
        let comps = khom
            .stalks
            .iter()
            .zip(&lhom.stalks)
            .map(|(ks, ls)| section_comparison(l, ks, ls))
            .collect::<Result<Vec<_>>>()?;
        let mut report = CompatReport::from_comparison(CompatKind::Hom, &lhs, &lhom.sheaf, comps);

        let kbasis = hom_global(f, g)?;
        let lspace = hom_global_direct(&f.extend_to(l), &g.extend_to(l))?;
        if kbasis.len() != lspace.dim() {
            report.failures.push(CompatFailure::GlobalDim {
                lhs: kbasis.len(),
                rhs: lspace.dim(),
            });
        }
        let width = lspace.ambient_dim();
        let rows: Vec<Vec<Elem>> = kbasis.iter().map(|m| m.extend_to(l).flatten()).collect();
        let extended = Matrix::from_rows(l, width, rows);
        let rank = extended.rank();
        let inside = extended.row_vecs().iter().all(|v| lspace.contains(v));
        if rank != kbasis.len() || rank != lspace.dim() || !inside {
            report.failures.push(CompatFailure::BaseChangeRank {
                rank,
                expected: lspace.dim(),
            });
        }
        Ok(report)
    };
    run().unwrap_or_else(|e| CompatReport::error(CompatKind::Hom, e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalConstancyReport {
    pub ambient: bool,
    pub descended: bool,
}

impl LocalConstancyReport {
    pub fn passed(&self) -> bool {
        self.ambient == self.descended
    }
}

pub fn check_locally_constant_descent(sgs: &SheafGStructure, group: &GaloisGroup) -> Result<LocalConstancyReport> {
    let kform = descend_sheaf(sgs, group)?;
    Ok(LocalConstancyReport {
        ambient: sgs.sheaf.is_locally_constant(),
        descended: kform.ksheaf.is_locally_constant(),
    })
}

/// A `K`-basis of the `G`-equivariant morphisms `F → G`, as `L`-morphisms.
pub fn equivariant_hom(
    src: &SheafGStructure,
    dst: &SheafGStructure,
    group: &GaloisGroup,
) -> Result<Vec<SheafMorphism>> {
    let l = group.field();
    let (f, g) = (&src.sheaf, &dst.sheaf);
    let hom = hom_global_direct(f, g)?;
    let basis = hom.basis();
    let m = hom.dim();
    let n = hom.ambient_dim();
    let inverses = src
        .points
        .iter()
        .map(|gs| {
            gs.matrices()
                .iter()
                .map(|a| a.inverse().ok_or(Error::SingularMatrix))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let act = |gi: usize, v: &[Elem]| -> Vec<Elem> {
        let aut = group.get(gi);
        let phi = SheafMorphism::from_flat(f, g, v).expect("vector in the Hom space");
        let comps: Vec<Matrix> = f
            .poset()
            .points()
            .map(|x| {
                dst.at(x)
                    .matrix(gi)
                    .mul(&conjugate_matrix(aut, phi.comp(x)))
                    .mul(&inverses[x][gi])
            })
            .collect();
        comps.iter().flat_map(|c| c.data().to_vec()).collect()
    };
    let blocks: Vec<Matrix> = (0..group.len())
        .map(|gi| {
            restrict_map(l, m, n, |c| {
                let v = combine(l, basis, c);
                let w = act(gi, &v);
                w.iter().zip(&v).map(|(a, b)| l.sub(a, b)).collect()
            })
        })
        .collect();
    let k = group.base();
    let fixed = kernel(&Matrix::vstack(k, m * l.degree(), &blocks));
    fixed
        .basis()
        .row_vecs()
        .iter()
        .map(|w| {
            let c = from_k_coords(l, w);
            SheafMorphism::from_flat(f, g, &combine(l, basis, &c))
        })
        .collect()
}

/// `f_K ↦ 1 ⊗ f_K` versus the equivariant morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantHomReport {
    /// `dim_K` of the equivariant morphisms `F → G`.
    pub equivariant_dim: usize,
    /// `dim_K Hom(F_K, G_K)` of the descended sheaves.
    pub descended_dim: usize,
    /// Every descended basis morphism, transported back, is equivariant and
    /// descends to itself.
    pub recovered: bool,
    /// Every equivariant basis morphism descends.
    pub all_descend: bool,
}

impl EquivariantHomReport {
    pub fn passed(&self) -> bool {
        self.equivariant_dim == self.descended_dim && self.recovered && self.all_descend
    }
}

pub fn check_equivariant_hom(
    src: &SheafGStructure,
    dst: &SheafGStructure,
    group: &GaloisGroup,
) -> Result<EquivariantHomReport> {
    let l = group.field();
    let ksrc = descend_sheaf(src, group)?;
    let kdst = descend_sheaf(dst, group)?;
    let equivariant = equivariant_hom(src, dst, group)?;
    let kbasis = hom_global(&ksrc.ksheaf, &kdst.ksheaf)?;
    let src_inv = ksrc.iso_inverse();
    let recovered = kbasis.iter().all(|fk| {
        let lifted = kdst.iso.compose(&fk.extend_to(l)).and_then(|m| m.compose(&src_inv));
        match lifted {
            Ok(m) => {
                check_sheaf_equivariant(&m, src, dst, group).is_ok()
                    && descend_in_kforms(&m, &ksrc, &kdst, group).is_ok_and(|d| &d == fk)
            }
            Err(_) => false,
        }
    });
    let all_descend = equivariant
        .iter()
        .all(|m| descend_in_kforms(m, &ksrc, &kdst, group).is_ok());
    Ok(EquivariantHomReport {
        equivariant_dim: equivariant.len(),
        descended_dim: kbasis.len(),
        recovered,
        all_descend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gaussian_rationals;
    use crate::poset::FinPoset;
    use crate::sheaf::sections;

    fn gal() -> GaloisGroup {
        let qi = gaussian_rationals();
        let hint = qi.parse("-1*i").unwrap();
        GaloisGroup::automorphisms(&qi, &[hint]).unwrap()
    }

    fn scalar(l: &Field, s: &str) -> Matrix {
        Matrix::new(l, 1, 1, vec![l.parse(s).unwrap()])
    }

    fn twisted_chain(group: &GaloisGroup, b: &str) -> SheafGStructure {
        let l = group.field();
        let sheaf = PosetSheaf::constant(l, &FinPoset::chain(2), 1);
        let pts = ["i", b]
            .iter()
            .map(|s| GStructure::new(l, 1, vec![scalar(l, "1"), scalar(l, s)]).unwrap())
            .collect();
        SheafGStructure::new(&sheaf, pts).unwrap()
    }

    #[test]
    fn extension_examples() {
        let g = gal();
        let q = Field::rationals();
        let x = FinPoset::chain(2);
        let (ext, gs) = extend_sheaf(&PosetSheaf::constant(&q, &x, 1), &g);
        assert_eq!(ext, PosetSheaf::constant(g.field(), &x, 1));
        assert!(gs.is_natural());
        check_sheaf_gstructure(&gs, &g).unwrap();
        let (z, _) = extend_sheaf(&PosetSheaf::zero(&q, &x), &g);
        assert!(z.is_zero());
        let two = PosetSheaf::from_fn(&q, &x, vec![1, 1], |_, _| Matrix::from_i64(&q, &[&[2]])).unwrap();
        let (e2, _) = extend_sheaf(&two, &g);
        assert_eq!(e2.restriction(0, 1), &Matrix::from_i64(g.field(), &[&[2]]));
    }

    #[test]
    fn extension_commutes_with_sections_over_up_sets() {
        let g = gal();
        let q = Field::rationals();
        let x = FinPoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let f = PosetSheaf::from_fn(&q, &x, vec![2, 1, 1, 1], |a, _| {
            if a == 0 {
                Matrix::from_i64(&q, &[&[1, 1]])
            } else {
                Matrix::from_i64(&q, &[&[1]])
            }
        })
        .unwrap();
        let ext = f.extend_to(g.field());
        for mask in 0u32..16 {
            let set: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            if x.is_up_set(&set) {
                assert_eq!(sections(&f, &set).unwrap().dim(), sections(&ext, &set).unwrap().dim());
            }
        }
    }

    #[test]
    fn twisted_chain_checks_and_descends() {
        let g = gal();
        let good = twisted_chain(&g, "i");
        check_sheaf_gstructure(&good, &g).unwrap();
        let bad = twisted_chain(&g, "-1*i");
        assert!(matches!(
            check_sheaf_gstructure(&bad, &g),
            Err(Error::NotSheafMorphism { x: 0, y: 1, g: 1 })
        ));

        let kf = descend_sheaf(&good, &g).unwrap();
        let q = Field::rationals();
        assert_eq!(kf.ksheaf.stalk_dims(), &[1, 1]);
        assert_eq!(kf.ksheaf.restriction(0, 1), &Matrix::from_i64(&q, &[&[1]]));
        for x in 0..2 {
            assert_eq!(g.field().format(kf.kforms[x].kbasis.get(0, 0)), "1+1*i");
        }
        kf.verify(&good, &g).unwrap();
        let report = check_locally_constant_descent(&good, &g).unwrap();
        assert!(report.ambient && report.descended);
    }

    #[test]
    fn skyscraper_descends() {
        let g = gal();
        let l = g.field();
        let x = FinPoset::chain(2);
        let sky = PosetSheaf::constant_on(l, &x, &[0], 1).unwrap();
        let pts = vec![
            GStructure::new(l, 1, vec![scalar(l, "1"), scalar(l, "i")]).unwrap(),
            GStructure::natural(&g, 0),
        ];
        let sgs = SheafGStructure::new(&sky, pts).unwrap();
        let kf = descend_sheaf(&sgs, &g).unwrap();
        assert_eq!(kf.ksheaf.stalk_dims(), &[1, 0]);
        assert_eq!(l.format(kf.kforms[0].kbasis.get(0, 0)), "1+1*i");
        let report = check_locally_constant_descent(&sgs, &g).unwrap();
        assert!(!report.ambient && !report.descended);
    }

    #[test]
    fn natural_round_trip_and_morphisms() {
        let g = gal();
        let q = Field::rationals();
        let x = FinPoset::chain(2);
        let f = PosetSheaf::from_fn(&q, &x, vec![2, 1], |_, _| Matrix::from_i64(&q, &[&[1, -1]])).unwrap();
        let (ext, gs) = extend_sheaf(&f, &g);
        let kf = descend_sheaf(&gs, &g).unwrap();
        assert_eq!(kf.ksheaf.stalk_dims(), f.stalk_dims());
        kf.verify(&gs, &g).unwrap();

        let fk = SheafMorphism::new(
            &f,
            &f,
            vec![Matrix::from_i64(&q, &[&[3, 0], &[0, 3]]), Matrix::from_i64(&q, &[&[3]])],
        )
        .unwrap();
        let down = descend_sheaf_morphism(&fk.extend_to(g.field()), &gs, &gs, &g).unwrap();
        let back = kf
            .iso
            .compose(&down.extend_to(g.field()))
            .unwrap()
            .compose(&kf.iso_inverse())
            .unwrap();
        assert_eq!(back, fk.extend_to(g.field()));

        let zero = SheafMorphism::zero(&ext, &ext).unwrap();
        assert!(descend_sheaf_morphism(&zero, &gs, &gs, &g).unwrap().is_zero());

        let l = g.field();
        let i = l.generator();
        let id = SheafMorphism::identity(&ext);
        let times_i = SheafMorphism::new(&ext, &ext, id.comps().iter().map(|c| c.scale(&i)).collect()).unwrap();
        assert!(matches!(
            descend_sheaf_morphism(&times_i, &gs, &gs, &g),
            Err(Error::NotEquivariantAt { g: 1, .. })
        ));
    }

    #[test]
    fn compatibility_examples() {
        let g = gal();
        let q = Field::rationals();
        let x = FinPoset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let f = PosetSheaf::from_fn(&q, &x, vec![2, 1, 1], |_, y| {
            Matrix::from_i64(&q, &[if y == 1 { &[1, 0] } else { &[1, 1] }])
        })
        .unwrap();
        let id = MonotoneMap::identity(&x);
        let pt = MonotoneMap::to_point(&x);
        assert!(check_compat_pullback(&id, &f, &g).passed());
        let v = PosetSheaf::constant(&q, &FinPoset::point(), 2);
        assert!(check_compat_pullback(&pt, &v, &g).passed());
        assert!(check_compat_pushforward(&id, &f, &g).passed());
        let report = check_compat_pushforward(&pt, &f, &g);
        assert!(report.passed());
        assert_eq!(report.lhs_dims, vec![sections(&f, &[0, 1, 2]).unwrap().dim()]);
        let open = MonotoneMap::inclusion(&x, &[1, 2]);
        let on_open = pullback(&open, &f).unwrap();
        assert!(check_compat_pushforward(&open, &on_open, &g).passed());

        let c = PosetSheaf::constant(&q, &x, 1);
        let r = check_compat_hom(&c, &c, &g);
        assert!(r.passed());
        assert!(check_compat_hom(&f, &PosetSheaf::zero(&q, &x), &g).passed());
        assert!(check_compat_hom(&f, &f, &g).passed());
    }

    #[test]
    fn equivariant_hom_matches_descended_hom() {
        let g = gal();
        let good = twisted_chain(&g, "i");
        let report = check_equivariant_hom(&good, &good, &g).unwrap();
        assert_eq!(report.equivariant_dim, 1);
        assert!(report.passed());
    }
}
