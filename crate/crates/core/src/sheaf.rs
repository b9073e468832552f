//! Sheaves of finite-dimensional vector spaces on finite posets.
//!
//! With opens = up-sets, a sheaf is determined by its stalks `F_x`
//! (sections over `U_x`) and restriction maps `F_x → F_y` for `x ≤ y`,
//! i.e. a functor on the poset. We store the maps along covering pairs only
//! and check that all composites along cover chains agree.
//!
//! In this model the presheaf-level operations (pullback, tensor product,
//! extension of scalars) are already sheaves: stalks are sections over the
//! minimal open sets, so no sheafification step is needed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{kernel, Matrix, Subspace};
use crate::poset::{FinPoset, MonotoneMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSheaf {
    field: Field,
    poset: FinPoset,
    dims: Vec<usize>,
    res: BTreeMap<(usize, usize), Matrix>,
}

impl PosetSheaf {
    /// Validates shapes and path independence.
    pub fn new(
        field: &Field,
        poset: &FinPoset,
        dims: Vec<usize>,
        res: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::Shape(format!(
                "{} stalk dimensions for {} points",
                dims.len(),
                poset.len()
            )));
        }
        if res.len() != poset.covers().len() {
            return Err(Error::Shape(
                "restriction maps must be given exactly on covering pairs".into(),
            ));
        }
        for &(x, y) in poset.covers() {
            let m = res.get(&(x, y)).ok_or(Error::NotCovering(x, y))?;
            if m.field() != field {
                return Err(Error::FieldMismatch);
            }
            if m.shape() != (dims[y], dims[x]) {
                return Err(Error::Shape(format!(
                    "restriction ({x}, {y}) is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[y],
                    dims[x]
                )));
            }
        }
        let sheaf = PosetSheaf {
            field: field.clone(),
            poset: poset.clone(),
            dims,
            res,
        };
        sheaf.check_path_independence()?;
        Ok(sheaf)
    }

    pub fn from_fn(
        field: &Field,
        poset: &FinPoset,
        dims: Vec<usize>,
        mut f: impl FnMut(usize, usize) -> Matrix,
    ) -> Result<Self> {
        let res = poset.covers().iter().map(|&(x, y)| ((x, y), f(x, y))).collect();
        Self::new(field, poset, dims, res)
    }

    /// The constant sheaf `field^dim`.
    pub fn constant(field: &Field, poset: &FinPoset, dim: usize) -> Self {
        Self::from_fn(field, poset, vec![dim; poset.len()], |_, _| {
            Matrix::identity(field, dim)
        })
        .expect("constant sheaf")
    }

    pub fn zero(field: &Field, poset: &FinPoset) -> Self {
        Self::from_fn(field, poset, vec![0; poset.len()], |_, _| Matrix::zeros(field, 0, 0)).expect("zero sheaf")
    }

    /// Constant on a locally closed subset, zero elsewhere.
    pub fn constant_on(field: &Field, poset: &FinPoset, support: &[usize], dim: usize) -> Result<Self> {
        let sub = poset.induced(support);
        extend_by_zero(poset, support, &PosetSheaf::constant(field, &sub, dim))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn stalk_dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn stalk_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn restriction(&self, x: usize, y: usize) -> &Matrix {
        &self.res[&(x, y)]
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.res
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// The map `F_x → F_y` for `x ≤ y`, along the first cover chain.
    pub fn composite(&self, x: usize, y: usize) -> Matrix {
        let path = self.poset.cover_path(x, y).expect("composite requires x ≤ y");
        path.windows(2)
            .fold(Matrix::identity(&self.field, self.dims[x]), |acc, w| {
                self.restriction(w[0], w[1]).mul(&acc)
            })
    }

    /// Every composite along every cover chain from `x` to `y` agrees.
    pub fn check_path_independence(&self) -> Result<()> {
        let order = self.poset.linear_extension();
        for x in self.poset.points() {
            let mut comp: BTreeMap<usize, Matrix> = BTreeMap::new();
            comp.insert(x, Matrix::identity(&self.field, self.dims[x]));
            for &y in order.iter().filter(|&&y| self.poset.lt(x, y)) {
                let mut found: Option<Matrix> = None;
                for z in self.poset.lower_covers(y).filter(|&z| self.poset.leq(x, z)) {
                    let candidate = self.restriction(z, y).mul(&comp[&z]);
                    match &found {
                        None => found = Some(candidate),
                        Some(prev) if *prev != candidate => {
                            return Err(Error::PathDependence(x, y));
                        }
                        Some(_) => {}
                    }
                }
                comp.insert(y, found.expect("y has a lower cover above x"));
            }
        }
        Ok(())
    }

    /// All restriction maps along covering pairs are invertible.
    pub fn is_locally_constant(&self) -> bool {
        self.res.values().all(Matrix::is_invertible)
    }

    /// Entrywise coercion into an extension of the sheaf's field.
    pub fn extend_to(&self, ext: &Field) -> PosetSheaf {
        PosetSheaf {
            field: ext.clone(),
            poset: self.poset.clone(),
            dims: self.dims.clone(),
            res: self.res.iter().map(|(k, m)| (*k, m.extend_to(ext))).collect(),
        }
    }

    /// Same stalks, restriction maps transformed by `f`.
    pub fn map_restrictions(&self, field: &Field, f: impl Fn(usize, usize, &Matrix) -> Matrix) -> Result<PosetSheaf> {
        let res = self.res.iter().map(|(&(x, y), m)| ((x, y), f(x, y, m))).collect();
        PosetSheaf::new(field, &self.poset, self.dims.clone(), res)
    }

    /// Relabels points (old `x` becomes `perm[x]`).
    pub fn permute(&self, perm: &[usize]) -> PosetSheaf {
        let poset = self.poset.permute(perm);
        let mut dims = vec![0; self.dims.len()];
        for (x, &d) in self.dims.iter().enumerate() {
            dims[perm[x]] = d;
        }
        let res = self
            .res
            .iter()
            .map(|(&(x, y), m)| ((perm[x], perm[y]), m.clone()))
            .collect();
        PosetSheaf::new(&self.field, &poset, dims, res).expect("relabelled sheaf")
    }
}

/// `F_1 ⊕ … ⊕ F_r` on a common poset.
pub fn direct_sum(field: &Field, poset: &FinPoset, summands: &[PosetSheaf]) -> Result<PosetSheaf> {
    for s in summands {
        if s.poset() != poset {
            return Err(Error::Shape("summands live on different posets".into()));
        }
        if s.field() != field {
            return Err(Error::FieldMismatch);
        }
    }
    let dims = poset
        .points()
        .map(|x| summands.iter().map(|s| s.stalk_dim(x)).sum())
        .collect();
    PosetSheaf::from_fn(field, poset, dims, |x, y| {
        let blocks: Vec<Matrix> = summands.iter().map(|s| s.restriction(x, y).clone()).collect();
        Matrix::block_diag(field, &blocks)
    })
}

/// The sheaf with stalks `P_x F_x`: restrictions `P_y R P_x⁻¹`, together
/// with the isomorphism `F → P·F` given by `P`.
pub fn transport_sheaf(f: &PosetSheaf, p: &[Matrix]) -> Result<(PosetSheaf, SheafMorphism)> {
    let inverses = p
        .iter()
        .map(|m| m.inverse().ok_or(Error::SingularMatrix))
        .collect::<Result<Vec<_>>>()?;
    let moved = f.map_restrictions(f.field(), |x, y, r| p[y].mul(r).mul(&inverses[x]))?;
    let iso = SheafMorphism::new(f, &moved, p.to_vec())?;
    Ok((moved, iso))
}

/// Morphism of sheaves on the same poset: one matrix per point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafMorphism {
    source: PosetSheaf,
    target: PosetSheaf,
    comps: Vec<Matrix>,
}

impl SheafMorphism {
    pub fn new(source: &PosetSheaf, target: &PosetSheaf, comps: Vec<Matrix>) -> Result<Self> {
        if source.poset != target.poset {
            return Err(Error::Shape("morphism between sheaves on different posets".into()));
        }
        if source.field != target.field {
            return Err(Error::FieldMismatch);
        }
        if comps.len() != source.poset.len() {
            return Err(Error::Shape(format!(
                "{} components for {} points",
                comps.len(),
                source.poset.len()
            )));
        }
        for (x, c) in comps.iter().enumerate() {
            if c.shape() != (target.dims[x], source.dims[x]) {
                return Err(Error::Shape(format!(
                    "component at {x} is {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    target.dims[x],
                    source.dims[x]
                )));
            }
            if c.field() != &source.field {
                return Err(Error::FieldMismatch);
            }
        }
        for &(x, y) in source.poset.covers() {
            let lhs = target.restriction(x, y).mul(&comps[x]);
            let rhs = comps[y].mul(source.restriction(x, y));
            if lhs != rhs {
                return Err(Error::NotSheafMorphismSquare(x, y));
            }
        }
        Ok(SheafMorphism {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    pub fn identity(f: &PosetSheaf) -> Self {
        let comps = f.dims.iter().map(|&d| Matrix::identity(&f.field, d)).collect();
        Self::new(f, f, comps).expect("identity morphism")
    }

    pub fn zero(source: &PosetSheaf, target: &PosetSheaf) -> Result<Self> {
        let comps = source
            .poset
            .points()
            .map(|x| Matrix::zeros(&source.field, target.dims[x], source.dims[x]))
            .collect();
        Self::new(source, target, comps)
    }

    pub fn source(&self) -> &PosetSheaf {
        &self.source
    }

    pub fn target(&self) -> &PosetSheaf {
        &self.target
    }

    pub fn comp(&self, x: usize) -> &Matrix {
        &self.comps[x]
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn field(&self) -> &Field {
        &self.source.field
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        if other.target != self.source {
            return Err(Error::Shape("composition of non-composable morphisms".into()));
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.mul(b)).collect();
        SheafMorphism::new(&other.source, &self.target, comps)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    pub fn is_pointwise_iso(&self) -> bool {
        self.comps.iter().all(Matrix::is_invertible)
    }

    /// Components concatenated, each flattened row-major.
    pub fn flatten(&self) -> Vec<Elem> {
        self.comps.iter().flat_map(|c| c.data().to_vec()).collect()
    }

    pub fn from_flat(source: &PosetSheaf, target: &PosetSheaf, v: &[Elem]) -> Result<Self> {
        let mut comps = Vec::with_capacity(source.poset.len());
        let mut off = 0;
        for x in source.poset.points() {
            let (r, c) = (target.dims[x], source.dims[x]);
            if off + r * c > v.len() {
                return Err(Error::DimensionMismatch {
                    expected: off + r * c,
                    found: v.len(),
                });
            }
            comps.push(Matrix::new(&source.field, r, c, v[off..off + r * c].to_vec()));
            off += r * c;
        }
        if off != v.len() {
            return Err(Error::DimensionMismatch {
                expected: off,
                found: v.len(),
            });
        }
        Self::new(source, target, comps)
    }

    /// `f_1 ⊕ … ⊕ f_r` between direct sums.
    pub fn direct_sum(source: &PosetSheaf, target: &PosetSheaf, parts: &[SheafMorphism]) -> Result<SheafMorphism> {
        let comps = source
            .poset()
            .points()
            .map(|x| {
                let blocks: Vec<Matrix> = parts.iter().map(|m| m.comp(x).clone()).collect();
                Matrix::block_diag(source.field(), &blocks)
            })
            .collect();
        SheafMorphism::new(source, target, comps)
    }

    pub fn extend_to(&self, ext: &Field) -> SheafMorphism {
        SheafMorphism {
            source: self.source.extend_to(ext),
            target: self.target.extend_to(ext),
            comps: self.comps.iter().map(|c| c.extend_to(ext)).collect(),
        }
    }
}

/// Coordinates of `∏_{x ∈ points} W_x` where the block sizes are given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub points: Vec<usize>,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
}

impl BlockLayout {
    pub fn new(points: Vec<usize>, size: impl Fn(usize) -> usize) -> Self {
        let sizes: Vec<usize> = points.iter().map(|&x| size(x)).collect();
        let mut offsets = Vec::with_capacity(points.len());
        let mut acc = 0;
        for s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        BlockLayout { points, offsets, sizes }
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn index(&self, x: usize) -> Option<usize> {
        self.points.binary_search(&x).ok()
    }

    /// Range of the block of point `x`.
    pub fn block(&self, x: usize) -> std::ops::Range<usize> {
        let i = self.index(x).expect("point in layout");
        self.offsets[i]..self.offsets[i] + self.sizes[i]
    }

    /// Restricts a vector to the blocks of `onto`, whose points must be a
    /// subset of ours with the same block sizes.
    pub fn project(&self, v: &[Elem], onto: &BlockLayout) -> Vec<Elem> {
        onto.points.iter().flat_map(|&x| v[self.block(x)].to_vec()).collect()
    }
}

/// `Γ(U, F)` as a subspace of `∏_{x∈U} F_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sections {
    pub layout: BlockLayout,
    pub space: Subspace,
}

impl Sections {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Matrix of the projection `Γ(U, F) → F_x` in the section basis.
    pub fn projection(&self, x: usize) -> Matrix {
        let block = self.layout.block(x);
        let rows: Vec<Vec<Elem>> = self
            .space
            .basis()
            .row_vecs()
            .into_iter()
            .map(|v| v[block.clone()].to_vec())
            .collect();
        Matrix::from_rows(self.space.field(), block.len(), rows).transpose()
    }
}

pub fn sections(f: &PosetSheaf, open: &[usize]) -> Result<Sections> {
    if !f.poset.is_up_set(open) {
        return Err(Error::NotUpSet);
    }
    let points = f.poset.up_closure(open);
    let layout = BlockLayout::new(points.clone(), |x| f.dims[x]);
    let n = layout.total();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for &(x, y) in f.poset.covers() {
        if !(points.contains(&x) && points.contains(&y)) {
            continue;
        }
        let r = f.restriction(x, y);
        let (bx, by) = (layout.block(x), layout.block(y));
        for i in 0..f.dims[y] {
            let mut row = vec![f.field.zero(); n];
            for j in 0..f.dims[x] {
                row[bx.start + j] = r.get(i, j).clone();
            }
            row[by.start + i] = f.field.sub(&row[by.start + i], &f.field.one());
            rows.push(row);
        }
    }
    let constraints = Matrix::from_rows(&f.field, n, rows);
    Ok(Sections {
        layout,
        space: kernel(&constraints),
    })
}

/// Matrix of the restriction `Γ(big) → Γ(small)` in the section bases.
pub fn restrict_sections(big: &Sections, small: &Sections) -> Result<Matrix> {
    let cols = big
        .space
        .basis()
        .row_vecs()
        .iter()
        .map(|s| {
            let proj = big.layout.project(s, &small.layout);
            small
                .space
                .coords(&proj)
                .ok_or_else(|| Error::Internal("restricted section leaves the section space".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(big.space.field(), small.dim(), cols).transpose())
}

/// `f_* F`, together with the section spaces used as stalk bases.
pub fn pushforward_with_sections(f: &MonotoneMap, sheaf: &PosetSheaf) -> Result<(PosetSheaf, Vec<Sections>)> {
    if f.source() != sheaf.poset() {
        return Err(Error::Shape("sheaf does not live on the source of the map".into()));
    }
    let target = f.target();
    let secs = target
        .points()
        .map(|y| sections(sheaf, &f.preimage_of_star(y)))
        .collect::<Result<Vec<_>>>()?;
    let dims = secs.iter().map(Sections::dim).collect();
    let mut res = BTreeMap::new();
    for &(y, y2) in target.covers() {
        res.insert((y, y2), restrict_sections(&secs[y], &secs[y2])?);
    }
    Ok((PosetSheaf::new(&sheaf.field, target, dims, res)?, secs))
}

pub fn pushforward(f: &MonotoneMap, sheaf: &PosetSheaf) -> Result<PosetSheaf> {
    Ok(pushforward_with_sections(f, sheaf)?.0)
}

/// `f⁻¹ G`: stalk at `x` is `G_{f(x)}`.
pub fn pullback(f: &MonotoneMap, g: &PosetSheaf) -> Result<PosetSheaf> {
    if f.target() != g.poset() {
        return Err(Error::Shape("sheaf does not live on the target of the map".into()));
    }
    let dims = f.source().points().map(|x| g.dims[f.apply(x)]).collect();
    PosetSheaf::from_fn(&g.field, f.source(), dims, |x, y| g.composite(f.apply(x), f.apply(y)))
}

/// Extends a sheaf on the locally closed subset `subset` (with the induced
/// order, points listed in increasing order) by zero.
pub fn extend_by_zero(poset: &FinPoset, subset: &[usize], f: &PosetSheaf) -> Result<PosetSheaf> {
    if !poset.is_locally_closed(subset) {
        return Err(Error::NotLocallyClosed);
    }
    let sub = poset.induced(subset);
    if &sub != f.poset() {
        return Err(Error::Shape("sheaf does not live on the induced subposet".into()));
    }
    let mut pts: Vec<usize> = subset.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let local = |x: usize| pts.binary_search(&x).ok();
    let dims = poset.points().map(|x| local(x).map_or(0, |i| f.dims[i])).collect();
    PosetSheaf::from_fn(&f.field, poset, dims, |x, y| match (local(x), local(y)) {
        (Some(i), Some(j)) => f.restriction(i, j).clone(),
        (lx, ly) => Matrix::zeros(&f.field, ly.map_or(0, |j| f.dims[j]), lx.map_or(0, |i| f.dims[i])),
    })
}

pub fn tensor(f: &PosetSheaf, g: &PosetSheaf) -> Result<PosetSheaf> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    if f.poset != g.poset {
        return Err(Error::Shape("tensor of sheaves on different posets".into()));
    }
    let dims = f.dims.iter().zip(&g.dims).map(|(a, b)| a * b).collect();
    PosetSheaf::from_fn(&f.field, &f.poset, dims, |x, y| {
        f.restriction(x, y).kron(g.restriction(x, y))
    })
}

/// Constraint matrix of natural transformations `F|_U → G|_U`, with
/// coordinates `∏_{y∈U} Hom(F_y, G_y)` (blocks flattened row-major).
fn nat_constraints(f: &PosetSheaf, g: &PosetSheaf, points: &[usize]) -> (BlockLayout, Matrix) {
    let k = &f.field;
    let layout = BlockLayout::new(points.to_vec(), |y| f.dims[y] * g.dims[y]);
    let n = layout.total();
    let mut rows = Vec::new();
    for &(y, z) in f.poset.covers() {
        if !(points.contains(&y) && points.contains(&z)) {
            continue;
        }
        let (rf, rg) = (f.restriction(y, z), g.restriction(y, z));
        let (by, bz) = (layout.block(y).start, layout.block(z).start);
        let (fy, fz) = (f.dims[y], f.dims[z]);
        // (R^G φ_y − φ_z R^F)_{ab} for a < G_z, b < F_y
        for a in 0..g.dims[z] {
            for b in 0..fy {
                let mut row = vec![k.zero(); n];
                for c in 0..g.dims[y] {
                    let idx = by + c * fy + b;
                    row[idx] = k.add(&row[idx], rg.get(a, c));
                }
                for c in 0..fz {
                    let idx = bz + a * fz + c;
                    row[idx] = k.sub(&row[idx], rf.get(c, b));
                }
                rows.push(row);
            }
        }
    }
    (layout, Matrix::from_rows(k, n, rows))
}

/// `Hom(F, G)` with the natural-transformation spaces used as stalk bases.
#[derive(Clone, Debug)]
pub struct HomSheaf {
    pub sheaf: PosetSheaf,
    /// Stalk at `x`: natural transformations `F|_{U_x} → G|_{U_x}`.
    pub stalks: Vec<Sections>,
}

pub fn sheaf_hom(f: &PosetSheaf, g: &PosetSheaf) -> Result<HomSheaf> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    if f.poset != g.poset {
        return Err(Error::Shape("Hom of sheaves on different posets".into()));
    }
    let stalks: Vec<Sections> = f
        .poset
        .points()
        .map(|x| {
            let (layout, c) = nat_constraints(f, g, &f.poset.up_set(x));
            Sections {
                layout,
                space: kernel(&c),
            }
        })
        .collect();
    let dims = stalks.iter().map(Sections::dim).collect();
    let mut res = BTreeMap::new();
    for &(x, y) in f.poset.covers() {
        res.insert((x, y), restrict_sections(&stalks[x], &stalks[y])?);
    }
    Ok(HomSheaf {
        sheaf: PosetSheaf::new(&f.field, &f.poset, dims, res)?,
        stalks,
    })
}

/// A basis of `Hom(F, G) = Γ(X, Hom(F, G))`, as explicit morphisms.
pub fn hom_global(f: &PosetSheaf, g: &PosetSheaf) -> Result<Vec<SheafMorphism>> {
    let hom = sheaf_hom(f, g)?;
    let all: Vec<usize> = f.poset.points().collect();
    let global = sections(&hom.sheaf, &all)?;
    global
        .space
        .basis()
        .row_vecs()
        .iter()
        .map(|v| {
            let comps = f
                .poset
                .points()
                .map(|x| {
                    let coords = &v[global.layout.block(x)];
                    let stalk = &hom.stalks[x];
                    let full = combine(&f.field, stalk.space.basis(), coords);
                    let block = &full[stalk.layout.block(x)];
                    Matrix::new(&f.field, g.dims[x], f.dims[x], block.to_vec())
                })
                .collect();
            SheafMorphism::new(f, g, comps)
        })
        .collect()
}

/// `Hom(F, G)` solved in one step over the whole poset; the flattened
/// morphisms span the same space as [`hom_global`].
pub fn hom_global_direct(f: &PosetSheaf, g: &PosetSheaf) -> Result<Subspace> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    let all: Vec<usize> = f.poset.points().collect();
    Ok(kernel(&nat_constraints(f, g, &all).1))
}

/// `Σ c_k · rows_k`.
pub(crate) fn combine(k: &Field, rows: &Matrix, coeffs: &[Elem]) -> Vec<Elem> {
    let mut out = vec![k.zero(); rows.cols()];
    for (i, c) in coeffs.iter().enumerate() {
        if k.is_zero(c) {
            continue;
        }
        for (o, r) in out.iter_mut().zip(rows.row(i)) {
            *o = k.add(o, &k.mul(c, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    /// 2-chain a=0 < b=1 with stalks (k², k) and res = [1 0].
    fn two_chain() -> PosetSheaf {
        let k = q();
        PosetSheaf::from_fn(&k, &FinPoset::chain(2), vec![2, 1], |_, _| {
            Matrix::from_i64(&k, &[&[1, 0]])
        })
        .unwrap()
    }

    #[test]
    fn path_dependence_detected() {
        let k = q();
        let diamond = FinPoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let bad = PosetSheaf::from_fn(&k, &diamond, vec![1; 4], |x, _| {
            Matrix::from_i64(&k, &[&[if x == 1 { 2 } else { 1 }]])
        });
        assert!(matches!(bad, Err(Error::PathDependence(0, 3))));
    }

    #[test]
    fn sections_examples() {
        let k = q();
        let diamond = FinPoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let c = PosetSheaf::constant(&k, &diamond, 1);
        assert_eq!(sections(&c, &[0, 1, 2, 3]).unwrap().dim(), 1);

        let f = two_chain();
        let s = sections(&f, &[0, 1]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.projection(0).is_invertible());
        for x in 0..2 {
            let sx = sections(&f, &f.poset().up_set(x)).unwrap();
            assert_eq!(sx.dim(), f.stalk_dim(x));
            assert!(sx.projection(x).is_invertible());
        }
        assert!(matches!(sections(&f, &[0]), Err(Error::NotUpSet)));
    }

    #[test]
    fn pushforward_examples() {
        let f = two_chain();
        let id = MonotoneMap::identity(f.poset());
        assert_eq!(pushforward(&id, &f).unwrap().stalk_dims(), f.stalk_dims());
        let pt = pushforward(&MonotoneMap::to_point(f.poset()), &f).unwrap();
        assert_eq!(pt.stalk_dims(), &[2]);
    }

    #[test]
    fn pullback_examples() {
        let k = q();
        let f = two_chain();
        assert_eq!(pullback(&MonotoneMap::identity(f.poset()), &f).unwrap(), f);
        let v = PosetSheaf::constant(&k, &FinPoset::point(), 3);
        let x = FinPoset::chain(3);
        let pulled = pullback(&MonotoneMap::to_point(&x), &v).unwrap();
        assert_eq!(pulled, PosetSheaf::constant(&k, &x, 3));
        let anti = FinPoset::discrete(2);
        let one = PosetSheaf::constant(&k, &FinPoset::point(), 1);
        assert_eq!(
            pullback(&MonotoneMap::to_point(&anti), &one).unwrap(),
            PosetSheaf::constant(&k, &anti, 1)
        );
    }

    #[test]
    fn extend_by_zero_examples() {
        let k = q();
        let f = two_chain();
        assert_eq!(extend_by_zero(f.poset(), &[0, 1], &f).unwrap(), f);
        let x = FinPoset::chain(2);
        let sky = PosetSheaf::constant_on(&k, &x, &[0], 1).unwrap();
        assert_eq!(sky.stalk_dims(), &[1, 0]);
        let open = PosetSheaf::constant_on(&k, &x, &[1], 1).unwrap();
        assert_eq!(open.stalk_dims(), &[0, 1]);
        let c3 = FinPoset::chain(3);
        assert!(matches!(
            PosetSheaf::constant_on(&k, &c3, &[0, 2], 1),
            Err(Error::NotLocallyClosed)
        ));
    }

    #[test]
    fn tensor_examples() {
        let k = q();
        let f = two_chain();
        let unit = PosetSheaf::constant(&k, f.poset(), 1);
        assert_eq!(tensor(&f, &unit).unwrap(), f);
        let p = FinPoset::point();
        let t = tensor(&PosetSheaf::constant(&k, &p, 2), &PosetSheaf::constant(&k, &p, 3)).unwrap();
        assert_eq!(t.stalk_dims(), &[6]);
        let x = FinPoset::chain(2);
        let ku = PosetSheaf::constant_on(&k, &x, &[1], 1).unwrap();
        let kc = PosetSheaf::constant_on(&k, &x, &[0], 1).unwrap();
        assert!(tensor(&ku, &kc).unwrap().is_zero());
    }

    #[test]
    fn hom_examples() {
        let k = q();
        let diamond = FinPoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let c = PosetSheaf::constant(&k, &diamond, 1);
        let h = sheaf_hom(&c, &c).unwrap();
        assert_eq!(sections(&h.sheaf, &[0, 1, 2, 3]).unwrap().dim(), 1);
        let basis = hom_global(&c, &c).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], SheafMorphism::identity(&c));

        let z = PosetSheaf::zero(&k, &diamond);
        assert!(sheaf_hom(&c, &z).unwrap().sheaf.is_zero());

        let x = FinPoset::chain(2);
        let ku = PosetSheaf::constant_on(&k, &x, &[1], 1).unwrap();
        let kx = PosetSheaf::constant(&k, &x, 1);
        assert_eq!(sheaf_hom(&ku, &kx).unwrap().sheaf.stalk_dims(), &[1, 1]);
        let kb = ku;
        let ka = PosetSheaf::constant_on(&k, &x, &[0], 1).unwrap();
        assert!(hom_global(&kb, &ka).unwrap().is_empty());
    }

    #[test]
    fn locally_constant_examples() {
        let k = q();
        let x = FinPoset::chain(2);
        assert!(PosetSheaf::constant(&k, &x, 2).is_locally_constant());
        assert!(!PosetSheaf::constant_on(&k, &x, &[0], 1).unwrap().is_locally_constant());
        let two = PosetSheaf::from_fn(&k, &x, vec![1, 1], |_, _| Matrix::from_i64(&k, &[&[2]])).unwrap();
        assert!(two.is_locally_constant());
    }
}
