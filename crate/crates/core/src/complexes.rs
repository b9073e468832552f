//! Bounded complexes of poset sheaves and their descent.
//!
//! Only strict G-structures are handled: every `σ_g` must commute with the
//! differentials on the nose. Structures that commute only up to homotopy
//! are rejected by [`check_strict`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, GaloisGroup};
use crate::linalg::{kernel, Matrix, Subspace};
use crate::poset::FinPoset;
use crate::semilinear::{conjugate_matrix, GStructure};
use crate::sheaf::{transport_sheaf, PosetSheaf, SheafMorphism};
use crate::sheaf_descent::{
    check_sheaf_gstructure, descend_in_kforms, descend_sheaf, extend_sheaf, SheafGStructure, SheafKForm,
};

/// `C^{min} → C^{min+1} → … → C^{max}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedComplex {
    field: Field,
    poset: FinPoset,
    min_deg: i64,
    terms: Vec<PosetSheaf>,
    /// `diffs[k]` goes from `terms[k]` to `terms[k + 1]`.
    diffs: Vec<SheafMorphism>,
}

impl BoundedComplex {
    /// Validates that consecutive differentials compose to zero.
    pub fn new(min_deg: i64, terms: Vec<PosetSheaf>, diffs: Vec<SheafMorphism>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Shape("a complex needs at least one term".into()))?;
        let (field, poset) = (first.field().clone(), first.poset().clone());
        if diffs.len() + 1 != terms.len() {
            return Err(Error::Shape(format!(
                "{} differentials for {} terms",
                diffs.len(),
                terms.len()
            )));
        }
        for t in &terms {
            if t.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if t.poset() != &poset {
                return Err(Error::Shape("terms live on different posets".into()));
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return Err(Error::Shape(format!(
                    "differential in degree {} does not match the terms",
                    min_deg + k as i64
                )));
            }
        }
        for (k, pair) in diffs.windows(2).enumerate() {
            for x in poset.points() {
                if !pair[1].comp(x).mul(pair[0].comp(x)).is_zero() {
                    return Err(Error::NotComplex {
                        degree: min_deg + k as i64,
                        x,
                    });
                }
            }
        }
        Ok(BoundedComplex {
            field,
            poset,
            min_deg,
            terms,
            diffs,
        })
    }

    pub fn single(sheaf: &PosetSheaf, degree: i64) -> Self {
        Self::new(degree, vec![sheaf.clone()], vec![]).expect("single-term complex")
    }

    /// `F → G` in degrees `degree`, `degree + 1`.
    pub fn two_term(d: &SheafMorphism, degree: i64) -> Self {
        Self::new(degree, vec![d.source().clone(), d.target().clone()], vec![d.clone()]).expect("two-term complex")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_deg..=self.max_deg()
    }

    pub fn terms(&self) -> &[PosetSheaf] {
        &self.terms
    }

    pub fn diffs(&self) -> &[SheafMorphism] {
        &self.diffs
    }

    fn index(&self, i: i64) -> Option<usize> {
        (self.degrees().contains(&i)).then(|| (i - self.min_deg) as usize)
    }

    /// `C^i`, zero outside the stored range.
    pub fn term(&self, i: i64) -> PosetSheaf {
        self.index(i)
            .map(|k| self.terms[k].clone())
            .unwrap_or_else(|| PosetSheaf::zero(&self.field, &self.poset))
    }

    /// `d^i: C^i → C^{i+1}`, zero outside the stored range.
    pub fn diff(&self, i: i64) -> SheafMorphism {
        match self.index(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => SheafMorphism::zero(&self.term(i), &self.term(i + 1)).expect("zero differential"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(PosetSheaf::is_zero)
    }

    /// The complex seen through pointwise isomorphisms `p[k][x]` of the
    /// terms: `d ↦ P d P⁻¹`.
    pub fn transport(&self, p: &[Vec<Matrix>]) -> Result<BoundedComplex> {
        let moved = self
            .terms
            .iter()
            .zip(p)
            .map(|(t, pk)| transport_sheaf(t, pk).map(|(m, _)| m))
            .collect::<Result<Vec<_>>>()?;
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let comps = self
                    .poset
                    .points()
                    .map(|x| {
                        let inv = p[k][x].inverse().ok_or(Error::SingularMatrix)?;
                        Ok(p[k + 1][x].mul(d.comp(x)).mul(&inv))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SheafMorphism::new(&moved[k], &moved[k + 1], comps)
            })
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(self.min_deg, moved, diffs)
    }

    pub fn extend_to(&self, ext: &Field) -> BoundedComplex {
        BoundedComplex {
            field: ext.clone(),
            poset: self.poset.clone(),
            min_deg: self.min_deg,
            terms: self.terms.iter().map(|t| t.extend_to(ext)).collect(),
            diffs: self.diffs.iter().map(|d| d.extend_to(ext)).collect(),
        }
    }
}

/// A morphism of complexes, one sheaf morphism per degree in `degrees`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    comps: BTreeMap<i64, SheafMorphism>,
}

impl ChainMap {
    /// Degrees missing from `comps` are zero.
    pub fn new(source: &BoundedComplex, target: &BoundedComplex, comps: BTreeMap<i64, SheafMorphism>) -> Result<Self> {
        let (lo, hi) = span(source, target);
        let mut full = BTreeMap::new();
        for i in lo..=hi {
            let f = match comps.get(&i) {
                Some(f) => {
                    if f.source() != &source.term(i) || f.target() != &target.term(i) {
                        return Err(Error::Shape(format!(
                            "chain map component in degree {i} has the wrong shape"
                        )));
                    }
                    f.clone()
                }
                None => SheafMorphism::zero(&source.term(i), &target.term(i))?,
            };
            full.insert(i, f);
        }
        for i in lo..=hi {
            let (ds, dt) = (source.diff(i), target.diff(i));
            let next = match full.get(&(i + 1)) {
                Some(f) => f.clone(),
                None => SheafMorphism::zero(&source.term(i + 1), &target.term(i + 1))?,
            };
            for x in source.poset.points() {
                if dt.comp(x).mul(full[&i].comp(x)) != next.comp(x).mul(ds.comp(x)) {
                    return Err(Error::NotChainMap { degree: i, x });
                }
            }
        }
        Ok(ChainMap {
            source: source.clone(),
            target: target.clone(),
            comps: full,
        })
    }

    pub fn identity(c: &BoundedComplex) -> Self {
        let comps = c.degrees().map(|i| (i, SheafMorphism::identity(&c.term(i)))).collect();
        Self::new(c, c, comps).expect("identity chain map")
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn comp(&self, i: i64) -> SheafMorphism {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| SheafMorphism::zero(&self.source.term(i), &self.target.term(i)).expect("zero component"))
    }

    pub fn comps(&self) -> &BTreeMap<i64, SheafMorphism> {
        &self.comps
    }
}

fn span(a: &BoundedComplex, b: &BoundedComplex) -> (i64, i64) {
    (a.min_deg.min(b.min_deg), a.max_deg().max(b.max_deg()))
}

/// `H^i` with its chosen cycle representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: i64,
    pub sheaf: PosetSheaf,
    /// Rows are cycles in `C^i_x` whose classes form the stalk basis.
    pub reps: Vec<Matrix>,
    pub boundaries: Vec<Subspace>,
}

impl Cohomology {
    /// Coordinates of the class of the cycle `v ∈ C^i_x`.
    pub fn class(&self, x: usize, v: &[Elem]) -> Result<Vec<Elem>> {
        let reps = &self.reps[x];
        let k = reps.field();
        let n = reps.cols();
        let generators = Matrix::vstack(k, n, &[reps.clone(), self.boundaries[x].basis().clone()]);
        let c = generators
            .transpose()
            .solve(v)
            .map_err(|_| Error::Internal(format!("vector at {x} is not a cycle")))?;
        Ok(c[..reps.rows()].to_vec())
    }

    /// Matrix of the map on cohomology induced by `f` at `x`.
    pub fn induced(&self, x: usize, target: &Cohomology, f: impl Fn(&[Elem]) -> Vec<Elem>) -> Result<Matrix> {
        let k = self.reps[x].field();
        let cols = self.reps[x]
            .row_vecs()
            .iter()
            .map(|r| target.class(x, &f(r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(k, target.reps[x].rows(), cols).transpose())
    }
}

/// `H^i(C)`: pointwise `ker d^i / im d^{i-1}`, represented by cycles
/// completing an RREF basis of the boundaries.
pub fn cohomology_sheaf(c: &BoundedComplex, i: i64) -> Result<Cohomology> {
    let k = &c.field;
    let term = c.term(i);
    let (d_in, d_out) = (c.diff(i - 1), c.diff(i));
    let mut reps = Vec::new();
    let mut boundaries = Vec::new();
    for x in c.poset.points() {
        let n = term.stalk_dim(x);
        let cycles = kernel(d_out.comp(x));
        let b = d_in.comp(x).image();
        let mut span = b.clone();
        let mut chosen: Vec<Vec<Elem>> = Vec::new();
        for z in cycles.basis().row_vecs() {
            if !span.contains(&z) {
                span = span.sum(&Subspace::span(k, n, &Matrix::from_rows(k, n, vec![z.clone()])))?;
                chosen.push(z);
            }
        }
        reps.push(Matrix::from_rows(k, n, chosen));
        boundaries.push(b);
    }
    let dims: Vec<usize> = reps.iter().map(Matrix::rows).collect();
    let mut h = Cohomology {
        degree: i,
        sheaf: PosetSheaf::zero(k, &c.poset),
        reps,
        boundaries,
    };
    let mut res = BTreeMap::new();
    for &(x, y) in c.poset.covers() {
        let r = term.restriction(x, y);
        let cols = h.reps[x]
            .row_vecs()
            .iter()
            .map(|v| h.class(y, &r.mul_vec(v)))
            .collect::<Result<Vec<_>>>()?;
        res.insert((x, y), Matrix::from_rows(k, dims[y], cols).transpose());
    }
    h.sheaf = PosetSheaf::new(k, &c.poset, dims, res)?;
    Ok(h)
}

/// Pointwise subspaces `W_x ⊆ F_x` stable under restriction, as a sheaf
/// in the bases of the `W_x`.
fn subsheaf(f: &PosetSheaf, spaces: &[Subspace]) -> Result<PosetSheaf> {
    let dims = spaces.iter().map(Subspace::dim).collect();
    let mut res = BTreeMap::new();
    for &(x, y) in f.poset().covers() {
        let r = f.restriction(x, y);
        let cols = spaces[x]
            .basis()
            .row_vecs()
            .iter()
            .map(|v| {
                spaces[y]
                    .coords(&r.mul_vec(v))
                    .ok_or_else(|| Error::Internal("subspace is not stable under restriction".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        res.insert((x, y), Matrix::from_rows(f.field(), spaces[y].dim(), cols).transpose());
    }
    PosetSheaf::new(f.field(), f.poset(), dims, res)
}

/// Coordinates of `v` modulo the RREF subspace `b`, in the basis of
/// standard vectors at the non-pivot columns.
fn quotient_coords(k: &Field, b: &Subspace, v: &[Elem]) -> Vec<Elem> {
    let pivots = b.pivots();
    let mut w = v.to_vec();
    for (row, &p) in b.basis().row_vecs().iter().zip(&pivots) {
        let c = w[p].clone();
        if k.is_zero(&c) {
            continue;
        }
        for (wi, ri) in w.iter_mut().zip(row) {
            *wi = k.sub(wi, &k.mul(&c, ri));
        }
    }
    (0..v.len())
        .filter(|j| !pivots.contains(j))
        .map(|j| w[j].clone())
        .collect()
}

fn quotient_sheaf(f: &PosetSheaf, spaces: &[Subspace]) -> Result<PosetSheaf> {
    let k = f.field();
    let dims = f.poset().points().map(|x| f.stalk_dim(x) - spaces[x].dim()).collect();
    let mut res = BTreeMap::new();
    for &(x, y) in f.poset().covers() {
        let r = f.restriction(x, y);
        let cols = complement_basis(k, f.stalk_dim(x), &spaces[x])
            .iter()
            .map(|v| quotient_coords(k, &spaces[y], &r.mul_vec(v)))
            .collect();
        res.insert(
            (x, y),
            Matrix::from_rows(k, f.stalk_dim(y) - spaces[y].dim(), cols).transpose(),
        );
    }
    PosetSheaf::new(k, f.poset(), dims, res)
}

/// Standard basis vectors at the non-pivot columns of `b`.
fn complement_basis(k: &Field, n: usize, b: &Subspace) -> Vec<Vec<Elem>> {
    let pivots = b.pivots();
    (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|j| {
            let mut e = vec![k.zero(); n];
            e[j] = k.one();
            e
        })
        .collect()
}

fn morphism_from_columns(
    source: &PosetSheaf,
    target: &PosetSheaf,
    mut column_images: impl FnMut(usize) -> Vec<Vec<Elem>>,
) -> Result<SheafMorphism> {
    let comps = source
        .poset()
        .points()
        .map(|x| Matrix::from_rows(source.field(), target.stalk_dim(x), column_images(x)).transpose())
        .collect();
    SheafMorphism::new(source, target, comps)
}

/// `τ_{≤a} C` together with its inclusion into `C`.
pub fn truncate_le(c: &BoundedComplex, a: i64) -> Result<(BoundedComplex, ChainMap)> {
    let k = &c.field;
    if a >= c.max_deg() {
        return Ok((c.clone(), ChainMap::identity(c)));
    }
    if a < c.min_deg {
        let zero = BoundedComplex::single(&PosetSheaf::zero(k, &c.poset), c.min_deg);
        let inc = ChainMap::new(&zero, c, BTreeMap::new())?;
        return Ok((zero, inc));
    }
    let top = c.term(a);
    let cycles: Vec<Subspace> = c.poset.points().map(|x| kernel(c.diff(a).comp(x))).collect();
    let z = subsheaf(&top, &cycles)?;
    let mut terms: Vec<PosetSheaf> = (c.min_deg..a).map(|i| c.term(i)).collect();
    terms.push(z.clone());
    let mut diffs: Vec<SheafMorphism> = (c.min_deg..a - 1).map(|i| c.diff(i)).collect();
    if a > c.min_deg {
        let d = c.diff(a - 1);
        let last = morphism_from_columns(&c.term(a - 1), &z, |x| {
            (0..d.comp(x).cols())
                .map(|j| cycles[x].coords(&d.comp(x).col(j)).expect("boundary is a cycle"))
                .collect()
        })?;
        diffs.push(last);
    }
    let t = BoundedComplex::new(c.min_deg, terms, diffs)?;
    let mut comps: BTreeMap<i64, SheafMorphism> = (c.min_deg..a)
        .map(|i| (i, SheafMorphism::identity(&c.term(i))))
        .collect();
    let incl = morphism_from_columns(&z, &top, |x| cycles[x].basis().row_vecs())?;
    comps.insert(a, incl);
    let map = ChainMap::new(&t, c, comps)?;
    Ok((t, map))
}

/// `τ_{≥a} C` together with the projection `C → τ_{≥a} C`.
pub fn truncate_ge(c: &BoundedComplex, a: i64) -> Result<(BoundedComplex, ChainMap)> {
    let k = &c.field;
    if a <= c.min_deg {
        return Ok((c.clone(), ChainMap::identity(c)));
    }
    if a > c.max_deg() {
        let zero = BoundedComplex::single(&PosetSheaf::zero(k, &c.poset), c.max_deg());
        let proj = ChainMap::new(c, &zero, BTreeMap::new())?;
        return Ok((zero, proj));
    }
    let bottom = c.term(a);
    let images: Vec<Subspace> = c.poset.points().map(|x| c.diff(a - 1).comp(x).image()).collect();
    let q = quotient_sheaf(&bottom, &images)?;
    let mut terms = vec![q.clone()];
    terms.extend((a + 1..=c.max_deg()).map(|i| c.term(i)));
    let mut diffs = Vec::new();
    if a < c.max_deg() {
        let d = c.diff(a);
        let first = morphism_from_columns(&q, &c.term(a + 1), |x| {
            complement_basis(k, bottom.stalk_dim(x), &images[x])
                .iter()
                .map(|v| d.comp(x).mul_vec(v))
                .collect()
        })?;
        diffs.push(first);
        diffs.extend((a + 1..c.max_deg()).map(|i| c.diff(i)));
    }
    let t = BoundedComplex::new(a, terms, diffs)?;
    let mut comps: BTreeMap<i64, SheafMorphism> = (a + 1..=c.max_deg())
        .map(|i| (i, SheafMorphism::identity(&c.term(i))))
        .collect();
    let proj = morphism_from_columns(&bottom, &q, |x| {
        (0..bottom.stalk_dim(x))
            .map(|j| {
                let mut e = vec![k.zero(); bottom.stalk_dim(x)];
                e[j] = k.one();
                quotient_coords(k, &images[x], &e)
            })
            .collect()
    })?;
    comps.insert(a, proj);
    let map = ChainMap::new(c, &t, comps)?;
    Ok((t, map))
}

/// Per degree and point, whether the induced map on cohomology is
/// invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub degrees: Vec<(i64, Vec<bool>)>,
    /// Induced matrices, indexed like `degrees`.
    pub induced: Vec<Vec<Matrix>>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.iter().all(|(_, v)| v.iter().all(|&b| b))
    }
}

pub fn quasi_iso_check(f: &ChainMap) -> Result<QuasiIsoReport> {
    let (lo, hi) = span(&f.source, &f.target);
    let mut degrees = Vec::new();
    let mut induced = Vec::new();
    for i in lo..=hi {
        let hs = cohomology_sheaf(&f.source, i)?;
        let ht = cohomology_sheaf(&f.target, i)?;
        let fi = f.comp(i);
        let mats = f
            .source
            .poset
            .points()
            .map(|x| hs.induced(x, &ht, |v| fi.comp(x).mul_vec(v)))
            .collect::<Result<Vec<_>>>()?;
        degrees.push((i, mats.iter().map(Matrix::is_invertible).collect()));
        induced.push(mats);
    }
    Ok(QuasiIsoReport { degrees, induced })
}

/// One [`SheafGStructure`] per degree of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictComplexGStructure {
    pub min_deg: i64,
    pub terms: Vec<SheafGStructure>,
}

impl StrictComplexGStructure {
    pub fn natural(c: &BoundedComplex, group: &GaloisGroup) -> Self {
        StrictComplexGStructure {
            min_deg: c.min_deg,
            terms: c.terms.iter().map(|t| SheafGStructure::natural(t, group)).collect(),
        }
    }

    pub fn at(&self, i: i64) -> &SheafGStructure {
        &self.terms[(i - self.min_deg) as usize]
    }
}

/// Checks every term and `d · A_g^i(x) = A_g^{i+1}(x) · g(d)`.
pub fn check_strict(c: &BoundedComplex, s: &StrictComplexGStructure, group: &GaloisGroup) -> Result<()> {
    if s.min_deg != c.min_deg || s.terms.len() != c.terms.len() {
        return Err(Error::Shape("structure and complex cover different degrees".into()));
    }
    for (t, gs) in c.terms.iter().zip(&s.terms) {
        if gs.sheaf() != t {
            return Err(Error::Shape("structure does not live on the complex".into()));
        }
        check_sheaf_gstructure(gs, group)?;
    }
    for (k, d) in c.diffs.iter().enumerate() {
        let degree = c.min_deg + k as i64;
        for x in c.poset.points() {
            for (g, aut) in group.elements().iter().enumerate() {
                let lhs = d.comp(x).mul(s.terms[k].at(x).matrix(g));
                let rhs = s.terms[k + 1].at(x).matrix(g).mul(&conjugate_matrix(aut, d.comp(x)));
                if lhs != rhs {
                    return Err(Error::NotStrict { degree, x, g });
                }
            }
        }
    }
    Ok(())
}

pub fn extend_complex(c: &BoundedComplex, group: &GaloisGroup) -> (BoundedComplex, StrictComplexGStructure) {
    let ext = c.extend_to(group.field());
    let s = StrictComplexGStructure {
        min_deg: c.min_deg,
        terms: c.terms.iter().map(|t| extend_sheaf(t, group).1).collect(),
    };
    (ext, s)
}

/// Moves a complex and its structure along pointwise isomorphisms
/// `p[k][x]` of the terms.
pub fn transport_complex(
    c: &BoundedComplex,
    s: &StrictComplexGStructure,
    group: &GaloisGroup,
    p: &[Vec<Matrix>],
) -> Result<(BoundedComplex, StrictComplexGStructure)> {
    let moved = c.transport(p)?;
    let terms = s
        .terms
        .iter()
        .zip(p)
        .map(|(gs, pk)| gs.transport(group, pk))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        moved,
        StrictComplexGStructure {
            min_deg: c.min_deg,
            terms,
        },
    ))
}

/// A descended complex with the termwise isomorphism `L ⊗ complex → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexKForm {
    pub complex: BoundedComplex,
    pub terms: Vec<SheafKForm>,
    pub iso: ChainMap,
}

pub fn descend_complex_strict(
    c: &BoundedComplex,
    s: &StrictComplexGStructure,
    group: &GaloisGroup,
) -> Result<ComplexKForm> {
    group.require_galois()?;
    check_strict(c, s, group)?;
    let forms = s
        .terms
        .iter()
        .map(|gs| descend_sheaf(gs, group))
        .collect::<Result<Vec<_>>>()?;
    let diffs = c
        .diffs
        .iter()
        .enumerate()
        .map(|(k, d)| descend_in_kforms(d, &forms[k], &forms[k + 1], group))
        .collect::<Result<Vec<_>>>()?;
    let complex = BoundedComplex::new(c.min_deg, forms.iter().map(|f| f.ksheaf.clone()).collect(), diffs)?;
    let comps = forms
        .iter()
        .enumerate()
        .map(|(k, f)| (c.min_deg + k as i64, f.iso.clone()))
        .collect();
    let iso = ChainMap::new(&complex.extend_to(group.field()), c, comps)?;
    Ok(ComplexKForm {
        complex,
        terms: forms,
        iso,
    })
}

/// The structure induced on `H^i` by a strict structure.
pub fn cohomology_gstructure(h: &Cohomology, s: &SheafGStructure, group: &GaloisGroup) -> Result<SheafGStructure> {
    let points = h
        .sheaf
        .poset()
        .points()
        .map(|x| {
            let mats = (0..group.len())
                .map(|g| h.induced(x, h, |v| s.at(x).apply(group, g, v)))
                .collect::<Result<Vec<_>>>()?;
            GStructure::new(h.sheaf.field(), h.sheaf.stalk_dim(x), mats)
        })
        .collect::<Result<Vec<_>>>()?;
    SheafGStructure::new(&h.sheaf, points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Descend the cohomology sheaves of the `L`-complex.
    CohomologyFirst,
    /// Take the cohomology of the descended complex.
    ComplexFirst,
}

/// A pointwise isomorphism `L ⊗ H_K → H^i(C)` and the route it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteCertificate {
    pub degree: i64,
    pub route: Route,
    pub ksheaf: PosetSheaf,
    pub iso: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: i64,
    pub cohomology_first_dims: Vec<usize>,
    pub complex_first_dims: Vec<usize>,
    /// `K`-rational comparison of the two descended sheaves, if it exists.
    pub comparison: Option<SheafMorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermReport {
    pub degrees: Vec<DegreeComparison>,
    pub certificates: Vec<RouteCertificate>,
}

impl TwoTermReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| {
            d.cohomology_first_dims == d.complex_first_dims
                && d.comparison.as_ref().is_some_and(SheafMorphism::is_pointwise_iso)
        })
    }
}

/// Cross-checks complex descent against descent of the two cohomology
/// sheaves.
pub fn two_term_descent_via_cohomology(
    c: &BoundedComplex,
    s: &StrictComplexGStructure,
    group: &GaloisGroup,
) -> Result<TwoTermReport> {
    if c.terms.len() != 2 {
        return Err(Error::NotTwoTerm);
    }
    let l = group.field();
    let descended = descend_complex_strict(c, s, group)?;
    let mut degrees = Vec::new();
    let mut certificates = Vec::new();
    for i in c.degrees() {
        let h = cohomology_sheaf(c, i)?;
        let hs = cohomology_gstructure(&h, s.at(i), group)?;
        let route1 = descend_sheaf(&hs, group)?;
        certificates.push(RouteCertificate {
            degree: i,
            route: Route::CohomologyFirst,
            ksheaf: route1.ksheaf.clone(),
            iso: route1.iso.comps().to_vec(),
        });

        let hk = cohomology_sheaf(&descended.complex, i)?;
        let term_iso = descended.iso.comp(i);
        let iso2 = c
            .poset
            .points()
            .map(|x| {
                let cols = hk.reps[x]
                    .extend_to(l)
                    .row_vecs()
                    .iter()
                    .map(|r| h.class(x, &term_iso.comp(x).mul_vec(r)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_rows(l, h.sheaf.stalk_dim(x), cols).transpose())
            })
            .collect::<Result<Vec<_>>>()?;
        certificates.push(RouteCertificate {
            degree: i,
            route: Route::ComplexFirst,
            ksheaf: hk.sheaf.clone(),
            iso: iso2.clone(),
        });

        let comparison = route1
            .kforms
            .iter()
            .zip(&iso2)
            .map(|(kf, m)| {
                let c = kf.iso_inverse().mul(m);
                let data = c
                    .data()
                    .iter()
                    .map(|e| group.coerce_down(e))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::new(group.base(), c.rows(), c.cols(), data))
            })
            .collect::<Result<Vec<_>>>()
            .ok()
            .and_then(|comps| SheafMorphism::new(&hk.sheaf, &route1.ksheaf, comps).ok());
        degrees.push(DegreeComparison {
            degree: i,
            cohomology_first_dims: route1.ksheaf.stalk_dims().to_vec(),
            complex_first_dims: hk.sheaf.stalk_dims().to_vec(),
            comparison,
        });
    }
    Ok(TwoTermReport { degrees, certificates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gaussian_rationals;

    fn gal() -> GaloisGroup {
        let qi = gaussian_rationals();
        let hint = qi.parse("-1*i").unwrap();
        GaloisGroup::automorphisms(&qi, &[hint]).unwrap()
    }

    fn scalar(l: &Field, s: &str) -> Matrix {
        Matrix::new(l, 1, 1, vec![l.parse(s).unwrap()])
    }

    fn point_structure(group: &GaloisGroup, sheaf: &PosetSheaf, a: &str) -> SheafGStructure {
        let l = group.field();
        let gs = GStructure::new(l, 1, vec![scalar(l, "1"), scalar(l, a)]).unwrap();
        SheafGStructure::new(sheaf, vec![gs]).unwrap()
    }

    /// `L → L` on a point with `d = [1]`, structures `A_σ = [a0]`, `[a1]`.
    fn twisted_two_term(group: &GaloisGroup, a0: &str, a1: &str) -> (BoundedComplex, StrictComplexGStructure) {
        let l = group.field();
        let p = FinPoset::point();
        let f = PosetSheaf::constant(l, &p, 1);
        let d = SheafMorphism::new(&f, &f, vec![scalar(l, "1")]).unwrap();
        let c = BoundedComplex::two_term(&d, 0);
        let s = StrictComplexGStructure {
            min_deg: 0,
            terms: vec![point_structure(group, &f, a0), point_structure(group, &f, a1)],
        };
        (c, s)
    }

    #[test]
    fn cohomology_examples() {
        let q = Field::rationals();
        let x = FinPoset::chain(2);
        let f = PosetSheaf::constant(&q, &x, 2);
        let acyclic = BoundedComplex::two_term(&SheafMorphism::identity(&f), 0);
        for i in -1..=2 {
            assert!(cohomology_sheaf(&acyclic, i).unwrap().sheaf.is_zero());
        }
        let single = BoundedComplex::single(&f, 0);
        assert_eq!(cohomology_sheaf(&single, 0).unwrap().sheaf, f);
        let kx = PosetSheaf::constant(&q, &x, 1);
        let zero_d = BoundedComplex::two_term(&SheafMorphism::zero(&kx, &kx).unwrap(), 0);
        assert_eq!(cohomology_sheaf(&zero_d, 0).unwrap().sheaf, kx);
        assert_eq!(cohomology_sheaf(&zero_d, 1).unwrap().sheaf, kx);
    }

    #[test]
    fn d_squared_must_vanish() {
        let q = Field::rationals();
        let p = FinPoset::point();
        let f = PosetSheaf::constant(&q, &p, 1);
        let id = SheafMorphism::identity(&f);
        assert!(matches!(
            BoundedComplex::new(0, vec![f.clone(), f.clone(), f], vec![id.clone(), id]),
            Err(Error::NotComplex { degree: 0, x: 0 })
        ));
    }

    #[test]
    fn truncation_examples() {
        let q = Field::rationals();
        let p = FinPoset::point();
        let a = PosetSheaf::constant(&q, &p, 2);
        let b = PosetSheaf::constant(&q, &p, 1);
        let surj = SheafMorphism::new(&a, &b, vec![Matrix::from_i64(&q, &[&[1, 1]])]).unwrap();
        let c = BoundedComplex::two_term(&surj, 0);

        let (same, incl) = truncate_le(&c, 1).unwrap();
        assert_eq!(same, c);
        assert!(quasi_iso_check(&incl).unwrap().is_quasi_iso());
        let (zero, _) = truncate_ge(&c, 2).unwrap();
        assert!(zero.is_zero());

        let (t, incl) = truncate_le(&c, 0).unwrap();
        assert_eq!(t.max_deg(), 0);
        assert_eq!(t.term(0).stalk_dims(), &[1]);
        assert!(quasi_iso_check(&incl).unwrap().is_quasi_iso());

        let inj = SheafMorphism::new(&b, &a, vec![Matrix::from_i64(&q, &[&[1], &[2]])]).unwrap();
        let c2 = BoundedComplex::two_term(&inj, 0);
        let (t2, _) = truncate_le(&c2, 0).unwrap();
        assert_eq!(t2.term(0).stalk_dims(), &[0]);
        let (t3, proj) = truncate_ge(&c2, 1).unwrap();
        assert_eq!(t3.term(1).stalk_dims(), &[1]);
        assert!(quasi_iso_check(&proj).unwrap().is_quasi_iso());
    }

    #[test]
    fn quasi_iso_examples() {
        let q = Field::rationals();
        let x = FinPoset::chain(2);
        let kx = PosetSheaf::constant(&q, &x, 1);
        let c = BoundedComplex::single(&kx, 0);
        assert!(quasi_iso_check(&ChainMap::identity(&c)).unwrap().is_quasi_iso());
        let zero = ChainMap::new(&c, &c, BTreeMap::new()).unwrap();
        assert!(!quasi_iso_check(&zero).unwrap().is_quasi_iso());

        let two = PosetSheaf::constant(&q, &x, 2);
        let d = SheafMorphism::new(&two, &kx, vec![Matrix::from_i64(&q, &[&[1, 1]]); 2]).unwrap();
        let c2 = BoundedComplex::two_term(&d, 0);
        let bad = ChainMap::new(&c2, &c2, [(0, SheafMorphism::identity(&two))].into_iter().collect());
        assert!(matches!(bad, Err(Error::NotChainMap { degree: 0, .. })));
    }

    #[test]
    fn twisted_two_term_descends() {
        let g = gal();
        let (c, s) = twisted_two_term(&g, "i", "i");
        let kf = descend_complex_strict(&c, &s, &g).unwrap();
        let q = Field::rationals();
        assert_eq!(kf.complex.diff(0).comp(0), &Matrix::from_i64(&q, &[&[1]]));
        for t in &kf.terms {
            assert_eq!(g.field().format(t.kforms[0].kbasis.get(0, 0)), "1+1*i");
        }
        let report = two_term_descent_via_cohomology(&c, &s, &g).unwrap();
        assert!(report.passed());
        assert!(report.degrees.iter().all(|d| d.complex_first_dims == vec![0]));
        assert_eq!(report.certificates.len(), 4);
    }

    #[test]
    fn homotopy_only_structure_is_rejected() {
        let g = gal();
        let (c, s) = twisted_two_term(&g, "i", "-1*i");
        assert!(matches!(
            check_strict(&c, &s, &g),
            Err(Error::NotStrict { degree: 0, x: 0, g: 1 })
        ));
        assert!(descend_complex_strict(&c, &s, &g).is_err());
    }

    #[test]
    fn zero_differential_two_term() {
        let g = gal();
        let q = Field::rationals();
        let x = FinPoset::chain(2);
        let kx = PosetSheaf::constant(&q, &x, 1);
        let c = BoundedComplex::two_term(&SheafMorphism::zero(&kx, &kx).unwrap(), 3);
        let (lc, s) = extend_complex(&c, &g);
        let kf = descend_complex_strict(&lc, &s, &g).unwrap();
        assert_eq!(kf.complex, c);
        let report = two_term_descent_via_cohomology(&lc, &s, &g).unwrap();
        assert!(report.passed());
        assert_eq!(report.degrees[0].complex_first_dims, vec![1, 1]);
    }
}
