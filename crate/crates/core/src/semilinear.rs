//! Semilinear group actions on `L^n` and descent to `K`.
//!
//! A G-structure on `V = L^n` is stored as one invertible matrix `A_g` per
//! group element; the corresponding semilinear automorphism is
//! `σ_g(v) = A_g · g(v)` with `g` applied entrywise. Composition follows
//! the group table (`g∘h` applies `h` first), so the cocycle condition
//! reads
//!
//! ```text
//! A_{g∘h} = A_g · g(A_h)
//! ```
//!
//! Descent never averages over the group: the K-form is the simultaneous
//! kernel of `σ_g − id` computed on the restriction of scalars, which works
//! in every characteristic.
//!
//! Coordinates after restriction of scalars use the ordered basis
//! `e_i ⊗ β_j` with `β_j = x^j` the power basis of `L/K`; the field index
//! is minor, so `(v_i)_j` lands at position `i * [L:K] + j`.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldAut, GaloisGroup};
use crate::linalg::{kernel, Matrix};

/// An `L`-vector space `L^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LSpace {
    pub field: Field,
    pub dim: usize,
}

/// Cocycle matrices indexed like the elements of a [`GaloisGroup`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GStructure {
    field: Field,
    dim: usize,
    cocycle: Vec<Matrix>,
}

impl GStructure {
    /// `cocycle[g]` is `A_g`; shapes are checked, the cocycle condition is
    /// not (see [`check_gstructure`]).
    pub fn new(field: &Field, dim: usize, cocycle: Vec<Matrix>) -> Result<Self> {
        for a in &cocycle {
            if a.shape() != (dim, dim) {
                return Err(Error::Shape(format!(
                    "cocycle matrix is {}x{}, expected {dim}x{dim}",
                    a.rows(),
                    a.cols()
                )));
            }
            if a.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(GStructure {
            field: field.clone(),
            dim,
            cocycle,
        })
    }

    /// The natural structure `A_g = I`.
    pub fn natural(group: &GaloisGroup, dim: usize) -> Self {
        let field = group.field();
        GStructure {
            field: field.clone(),
            dim,
            cocycle: vec![Matrix::identity(field, dim); group.len()],
        }
    }

    /// `A_g = P · g(P)⁻¹`, the natural structure transported along `P`.
    pub fn twisted(group: &GaloisGroup, p: &Matrix) -> Result<Self> {
        let cocycle = group
            .elements()
            .iter()
            .map(|g| {
                let inv = conjugate_matrix(g, p).inverse().ok_or(Error::SingularMatrix)?;
                Ok(p.mul(&inv))
            })
            .collect::<Result<Vec<_>>>()?;
        GStructure::new(group.field(), p.rows(), cocycle)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> LSpace {
        LSpace {
            field: self.field.clone(),
            dim: self.dim,
        }
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.cocycle[g]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.cocycle
    }

    pub fn is_natural(&self) -> bool {
        self.cocycle.iter().all(Matrix::is_identity)
    }

    /// `σ_g(v) = A_g · g(v)`.
    pub fn apply(&self, group: &GaloisGroup, g: usize, v: &[Elem]) -> Vec<Elem> {
        let aut = group.get(g);
        let gv: Vec<Elem> = v.iter().map(|x| aut.apply(x)).collect();
        self.cocycle[g].mul_vec(&gv)
    }

    /// Replaces `A_g` by `B · A_g · g(B)⁻¹`, the structure seen through the
    /// change of basis `v ↦ B v`.
    pub fn transport(&self, group: &GaloisGroup, b: &Matrix) -> Result<Self> {
        let cocycle = group
            .elements()
            .iter()
            .zip(&self.cocycle)
            .map(|(g, a)| {
                let inv = conjugate_matrix(g, b).inverse().ok_or(Error::SingularMatrix)?;
                Ok(b.mul(a).mul(&inv))
            })
            .collect::<Result<Vec<_>>>()?;
        GStructure::new(&self.field, self.dim, cocycle)
    }
}

/// Applies `g` to every entry.
pub fn conjugate_matrix(g: &FieldAut, m: &Matrix) -> Matrix {
    m.map_same(|x| g.apply(x))
}

/// Pass certificate of [`check_gstructure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleCertificate {
    /// Every `(g, h)` for which `A_{g∘h} = A_g · g(A_h)` was verified.
    pub pairs: Vec<(usize, usize)>,
    pub identity_checked: bool,
    pub invertibility_checked: Vec<usize>,
}

pub fn check_gstructure(gs: &GStructure, group: &GaloisGroup) -> Result<CocycleCertificate> {
    if gs.field() != group.field() {
        return Err(Error::FieldMismatch);
    }
    if gs.cocycle.len() != group.len() {
        return Err(Error::MissingCocycle(gs.cocycle.len().min(group.len())));
    }
    let id = group.identity_index();
    if !gs.cocycle[id].is_identity() {
        return Err(Error::NotCocycle { g: id, h: id });
    }
    for (g, a) in gs.cocycle.iter().enumerate() {
        if !a.is_invertible() {
            return Err(Error::Singular(g));
        }
    }
    let mut pairs = Vec::with_capacity(group.len() * group.len());
    for g in 0..group.len() {
        for h in 0..group.len() {
            let lhs = &gs.cocycle[group.compose(g, h)];
            let rhs = gs.cocycle[g].mul(&conjugate_matrix(group.get(g), &gs.cocycle[h]));
            if *lhs != rhs {
                return Err(Error::NotCocycle { g, h });
            }
            pairs.push((g, h));
        }
    }
    Ok(CocycleCertificate {
        pairs,
        identity_checked: true,
        invertibility_checked: (0..group.len()).collect(),
    })
}

/// `L ⊗_K K^n` with its natural structure.
pub fn extend_scalars(dim: usize, group: &GaloisGroup) -> (LSpace, GStructure) {
    let gs = GStructure::natural(group, dim);
    (gs.space(), gs)
}

/// Restriction of scalars of `L^dim`.
#[derive(Clone, Debug)]
pub struct RestrictedScalars {
    pub kdim: usize,
    /// `mult[j]` is multiplication by `x^j` on `K^{dim·[L:K]}`.
    pub mult: Vec<Matrix>,
}

pub fn restrict_scalars(v: &LSpace) -> RestrictedScalars {
    let l = &v.field;
    let d = l.degree();
    let k = l.base().cloned().unwrap_or_else(|| l.clone());
    let x = if l.as_extension().is_some() {
        l.generator()
    } else {
        l.one()
    };
    let mult = (0..d)
        .map(|j| {
            let beta = l.pow(&x, j as u128);
            let block = restrict_map(l, 1, 1, |w| vec![l.mul(&beta, &w[0])]);
            Matrix::identity(&k, v.dim).kron(&block)
        })
        .collect();
    RestrictedScalars { kdim: v.dim * d, mult }
}

/// `K`-coordinates of a vector in `L^n`.
pub fn to_k_coords(l: &Field, v: &[Elem]) -> Vec<Elem> {
    match l.as_extension() {
        Some(_) => v.iter().flat_map(|x| l.coeffs(x).to_vec()).collect(),
        None => v.to_vec(),
    }
}

/// Inverse of [`to_k_coords`].
pub fn from_k_coords(l: &Field, w: &[Elem]) -> Vec<Elem> {
    match l.as_extension() {
        Some(e) => w.chunks(e.degree()).map(|c| Elem::Poly(c.to_vec())).collect(),
        None => w.to_vec(),
    }
}

/// The `K`-matrix of a `K`-linear map `L^n_in → L^n_out`.
pub fn restrict_map(l: &Field, n_in: usize, n_out: usize, f: impl Fn(&[Elem]) -> Vec<Elem>) -> Matrix {
    let d = l.degree();
    let k = l.base().cloned().unwrap_or_else(|| l.clone());
    let mut columns = Vec::with_capacity(n_in * d);
    for idx in 0..n_in * d {
        let mut w = vec![k.zero(); n_in * d];
        w[idx] = k.one();
        let image = f(&from_k_coords(l, &w));
        debug_assert_eq!(image.len(), n_out);
        columns.push(to_k_coords(l, &image));
    }
    Matrix::from_rows(&k, n_out * d, columns).transpose()
}

/// The `K`-matrix of `σ_g` on the restriction of scalars.
pub fn restricted_action(gs: &GStructure, group: &GaloisGroup, g: usize) -> Matrix {
    restrict_map(&gs.field, gs.dim, gs.dim, |v| gs.apply(group, g, v))
}

/// A `K`-form: a `K`-basis of the invariants, written in `L`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KForm {
    pub kdim: usize,
    /// Rows are the basis vectors, as vectors of `L^n`.
    pub kbasis: Matrix,
    /// Inverse of `kbasis`, witnessing that `L ⊗ V_K → V` is bijective.
    pub kbasis_inverse: Matrix,
}

impl KForm {
    /// The isomorphism `L^kdim = L ⊗ V_K → V` (columns are basis vectors).
    pub fn iso(&self) -> Matrix {
        self.kbasis.transpose()
    }

    /// Inverse of [`KForm::iso`].
    pub fn iso_inverse(&self) -> Matrix {
        self.kbasis_inverse.transpose()
    }

    /// Re-checks the certificate: the basis is invertible and the iso
    /// intertwines the natural structure with `gs`, i.e.
    /// `A_g · g(Bᵀ) = Bᵀ` for every `g`.
    pub fn verify(&self, gs: &GStructure, group: &GaloisGroup) -> Result<()> {
        if self.kdim != gs.dim() || self.kbasis.shape() != (gs.dim(), gs.dim()) {
            return Err(Error::DescentFailed {
                found: self.kdim,
                expected: gs.dim(),
            });
        }
        if !self.kbasis.mul(&self.kbasis_inverse).is_identity() {
            return Err(Error::SingularMatrix);
        }
        let iso = self.iso();
        for (g, aut) in group.elements().iter().enumerate() {
            if gs.matrix(g).mul(&conjugate_matrix(aut, &iso)) != iso {
                return Err(Error::NotEquivariant { g });
            }
        }
        Ok(())
    }
}

/// Descends `(L^n, σ)` to a `K`-form.
pub fn descend(gs: &GStructure, group: &GaloisGroup) -> Result<KForm> {
    check_gstructure(gs, group)?;
    invariant_kform(gs, group)
}

/// Descent without re-running the cocycle check.
pub(crate) fn invariant_kform(gs: &GStructure, group: &GaloisGroup) -> Result<KForm> {
    let l = gs.field();
    let k = group.base();
    let kdim_total = gs.dim * l.degree();
    let blocks: Vec<Matrix> = (0..group.len())
        .map(|g| restricted_action(gs, group, g).sub(&Matrix::identity(k, kdim_total)))
        .collect();
    let invariants = kernel(&Matrix::vstack(k, kdim_total, &blocks));
    if invariants.dim() != gs.dim {
        return Err(Error::DescentFailed {
            found: invariants.dim(),
            expected: gs.dim,
        });
    }
    let rows = invariants
        .basis()
        .row_vecs()
        .iter()
        .map(|w| from_k_coords(l, w))
        .collect();
    let kbasis = Matrix::from_rows(l, gs.dim, rows);
    let kbasis_inverse = kbasis
        .inverse()
        .ok_or_else(|| Error::Internal("invariant basis is not L-independent".into()))?;
    Ok(KForm {
        kdim: gs.dim,
        kbasis,
        kbasis_inverse,
    })
}

/// Checks `A_g^dst · g(f) = f · A_g^src` for every `g`.
pub fn check_equivariant(f: &Matrix, src: &GStructure, dst: &GStructure, group: &GaloisGroup) -> Result<()> {
    if f.shape() != (dst.dim(), src.dim()) {
        return Err(Error::Shape(format!(
            "morphism is {}x{}, expected {}x{}",
            f.rows(),
            f.cols(),
            dst.dim(),
            src.dim()
        )));
    }
    for (g, aut) in group.elements().iter().enumerate() {
        let lhs = dst.matrix(g).mul(&conjugate_matrix(aut, f));
        let rhs = f.mul(src.matrix(g));
        if lhs != rhs {
            return Err(Error::NotEquivariant { g });
        }
    }
    Ok(())
}

/// Writes `f` in the bases of two `K`-forms and coerces the entries to `K`.
/// The caller guarantees equivariance.
pub fn morphism_in_kforms(f: &Matrix, src: &KForm, dst: &KForm, group: &GaloisGroup) -> Result<Matrix> {
    let c = dst.iso_inverse().mul(f).mul(&src.iso());
    let k = group.base();
    let data = c
        .data()
        .iter()
        .map(|x| group.coerce_down(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::new(k, c.rows(), c.cols(), data))
}

/// Descends an equivariant `L`-linear map to a `K`-linear map between the
/// descended spaces (in their `K`-form bases).
pub fn descend_morphism_vect(f: &Matrix, src: &GStructure, dst: &GStructure, group: &GaloisGroup) -> Result<Matrix> {
    check_equivariant(f, src, dst, group)?;
    let src_form = descend(src, group)?;
    let dst_form = descend(dst, group)?;
    morphism_in_kforms(f, &src_form, &dst_form, group)
        .map_err(|_| Error::Internal("equivariant morphism has non-fixed coordinates".into()))
}

/// Both sides of `Hom_L(L⊗K^n, L⊗K^m) ≅ L ⊗ Hom_K(K^n, K^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomDims {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    /// Rank over `L` of the base-changed matrix units `1 ⊗ E_ij`.
    pub base_change_rank: usize,
}

pub fn hom_dim_check(n: usize, m: usize, ext: &Field) -> HomDims {
    let k = ext.base().cloned().unwrap_or_else(|| ext.clone());
    // K-basis of Hom_K(K^n, K^m): matrix units, flattened row-major
    let units = Matrix::identity(&k, n * m);
    let rhs_dim = units.rank();
    let extended = if ext.as_extension().is_some() {
        units.extend_to(ext)
    } else {
        units
    };
    let base_change_rank = extended.rank();
    // dim_L of all m×n matrices over L
    let lhs_dim = kernel(&Matrix::zeros(ext, 0, n * m)).dim();
    HomDims {
        lhs_dim,
        rhs_dim,
        base_change_rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{finite_extension, gaussian_rationals};

    fn qi_group() -> GaloisGroup {
        let qi = gaussian_rationals();
        let minus_i = qi.parse("-i").unwrap();
        GaloisGroup::automorphisms(&qi, &[minus_i]).unwrap()
    }

    fn f4_group() -> GaloisGroup {
        GaloisGroup::automorphisms(&finite_extension(2, &[1, 1, 1], "w").unwrap(), &[]).unwrap()
    }

    fn one_by_one(group: &GaloisGroup, a: &str) -> GStructure {
        let l = group.field();
        let id = Matrix::identity(l, 1);
        let m = Matrix::from_rows(l, 1, vec![vec![l.parse(a).unwrap()]]);
        GStructure::new(l, 1, vec![id, m]).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        let g = qi_group();
        let l = g.field();
        let m = Matrix::from_rows(l, 2, vec![vec![l.parse("i").unwrap(), l.parse("1+i").unwrap()]]);
        let c = conjugate_matrix(g.get(1), &m);
        assert_eq!(l.format(c.get(0, 0)), "-1*i");
        assert_eq!(l.format(c.get(0, 1)), "1-1*i");
        assert_eq!(conjugate_matrix(g.get(0), &m), m);

        let g4 = f4_group();
        let f4 = g4.field();
        let w = Matrix::from_rows(f4, 1, vec![vec![f4.generator()]]);
        assert_eq!(f4.format(conjugate_matrix(g4.get(1), &w).get(0, 0)), "1+1*w");
    }

    #[test]
    fn cocycle_checks() {
        let g = qi_group();
        assert!(check_gstructure(&GStructure::natural(&g, 3), &g).is_ok());
        let cert = check_gstructure(&one_by_one(&g, "i"), &g).unwrap();
        assert_eq!(cert.pairs.len(), 4);
        assert!(matches!(
            check_gstructure(&one_by_one(&g, "2*i"), &g),
            Err(Error::NotCocycle { g: 1, h: 1 })
        ));
        assert!(matches!(
            check_gstructure(&one_by_one(&g, "0"), &g),
            Err(Error::Singular(1))
        ));
    }

    #[test]
    fn extend_examples() {
        let g = qi_group();
        let (v, s) = extend_scalars(2, &g);
        assert_eq!(v.dim, 2);
        assert!(s.matrix(1).is_identity());
        let (z, s0) = extend_scalars(0, &g);
        assert_eq!(z.dim, 0);
        assert_eq!(s0.matrix(1).shape(), (0, 0));
        let g4 = f4_group();
        let (_, s4) = extend_scalars(1, &g4);
        assert!(s4.matrix(1).is_identity());
    }

    #[test]
    fn restrict_examples() {
        let g = qi_group();
        let r = restrict_scalars(&LSpace {
            field: g.field().clone(),
            dim: 1,
        });
        assert_eq!(r.kdim, 2);
        assert_eq!(r.mult[1], Matrix::from_i64(g.base(), &[&[0, -1], &[1, 0]]));

        let g4 = f4_group();
        let r = restrict_scalars(&LSpace {
            field: g4.field().clone(),
            dim: 1,
        });
        assert_eq!(r.mult[1], Matrix::from_i64(g4.base(), &[&[0, 1], &[1, 1]]));

        let q = Field::rationals();
        let r = restrict_scalars(&LSpace {
            field: q.clone(),
            dim: 3,
        });
        assert_eq!(r.kdim, 3);
        assert!(r.mult[0].is_identity());
    }

    #[test]
    fn descend_examples() {
        let g = qi_group();
        let l = g.field();
        let natural = descend(&GStructure::natural(&g, 1), &g).unwrap();
        assert_eq!(natural.kbasis, Matrix::identity(l, 1));

        let twisted = one_by_one(&g, "i");
        let form = descend(&twisted, &g).unwrap();
        assert_eq!(l.format(form.kbasis.get(0, 0)), "1+1*i");
        form.verify(&twisted, &g).unwrap();

        let g4 = f4_group();
        let f4 = g4.field();
        let s = one_by_one(&g4, "w");
        let form = descend(&s, &g4).unwrap();
        let w = f4.generator();
        assert_eq!(form.kbasis.get(0, 0), &f4.mul(&w, &w));
    }

    #[test]
    fn descent_fails_without_galois_group() {
        let l = crate::field::rational_extension(&[-2, 0, 0, 1], "a", false).unwrap();
        let g = GaloisGroup::automorphisms(&l, &[]).unwrap();
        let s = GStructure::natural(&g, 1);
        assert!(matches!(
            descend(&s, &g),
            Err(Error::DescentFailed { found: 3, expected: 1 })
        ));
    }

    #[test]
    fn morphism_examples() {
        let g = qi_group();
        let l = g.field();
        let nat = GStructure::natural(&g, 1);
        let three = Matrix::from_i64(l, &[&[3]]);
        assert_eq!(
            descend_morphism_vect(&three, &nat, &nat, &g).unwrap(),
            Matrix::from_i64(g.base(), &[&[3]])
        );
        let i = Matrix::from_rows(l, 1, vec![vec![l.generator()]]);
        assert!(matches!(
            descend_morphism_vect(&i, &nat, &nat, &g),
            Err(Error::NotEquivariant { g: 1 })
        ));
        let tw = one_by_one(&g, "i");
        let two = Matrix::from_i64(l, &[&[2]]);
        assert_eq!(
            descend_morphism_vect(&two, &tw, &tw, &g).unwrap(),
            Matrix::from_i64(g.base(), &[&[2]])
        );
    }

    #[test]
    fn hom_dims() {
        let qi = gaussian_rationals();
        let h = hom_dim_check(2, 3, &qi);
        assert_eq!((h.lhs_dim, h.rhs_dim, h.base_change_rank), (6, 6, 6));
        let h = hom_dim_check(0, 4, &qi);
        assert_eq!((h.lhs_dim, h.rhs_dim), (0, 0));
        let f4 = finite_extension(2, &[1, 1, 1], "w").unwrap();
        let h = hom_dim_check(1, 1, &f4);
        assert_eq!((h.lhs_dim, h.rhs_dim), (1, 1));
    }
}
