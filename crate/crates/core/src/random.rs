//! Seeded generators for randomized test suites.
//!
//! Everything draws from a caller-supplied RNG so instances are
//! reproducible from a seed. Twisted structures are produced by transporting
//! a natural structure along a random isomorphism, which makes them valid
//! by construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complexes::{extend_complex, transport_complex, BoundedComplex, StrictComplexGStructure};
use crate::error::Result;
use crate::field::{Field, GaloisGroup};
use crate::gluing::{extend_gluing, transport_gluing, GluingData, GluingGStructure, LocalSystemDisc};
use crate::linalg::Matrix;
use crate::poset::{FinPoset, MonotoneMap};
use crate::semilinear::GStructure;
use crate::sheaf::{direct_sum, hom_global, transport_sheaf, PosetSheaf, SheafMorphism};
use crate::sheaf_descent::{extend_sheaf, SheafGStructure};

pub fn matrix<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| field.random(rng))
}

pub fn invertible<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A twisted cocycle `B g(B)⁻¹` on `L^dim`.
pub fn twisted_cocycle<R: Rng + ?Sized>(group: &GaloisGroup, dim: usize, rng: &mut R) -> GStructure {
    let b = invertible(group.field(), dim, rng);
    GStructure::twisted(group, &b).expect("invertible twist")
}

/// A poset on `1..=max_points` points; each pair `i < j` is related with
/// probability `density`, then closed transitively.
pub fn poset<R: Rng + ?Sized>(max_points: usize, density: f64, rng: &mut R) -> FinPoset {
    let n = rng.gen_range(1..=max_points);
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    FinPoset::from_relation(leq).expect("transitive closure of a DAG is a partial order")
}

/// A random nonempty locally closed subset: `up(S) ∩ down(T)`.
fn locally_closed<R: Rng + ?Sized>(p: &FinPoset, rng: &mut R) -> Vec<usize> {
    loop {
        let a = rng.gen_range(0..p.len());
        let b = rng.gen_range(0..p.len());
        let up = p.up_set(a);
        let down = p.down_set(b);
        let set: Vec<usize> = up.into_iter().filter(|x| down.contains(x)).collect();
        if !set.is_empty() {
            return set;
        }
    }
}

/// A sum of constant sheaves on locally closed subsets, with stalks of
/// dimension at most `max_dim`, seen through a random pointwise change of
/// basis.
pub fn sheaf<R: Rng + ?Sized>(field: &Field, p: &FinPoset, max_dim: usize, rng: &mut R) -> PosetSheaf {
    let mut summands = Vec::new();
    let mut dims = vec![0; p.len()];
    for _ in 0..rng.gen_range(0..=3) {
        let support = locally_closed(p, rng);
        let d = rng.gen_range(1..=2);
        if support.iter().any(|&x| dims[x] + d > max_dim) {
            continue;
        }
        for &x in &support {
            dims[x] += d;
        }
        summands.push(PosetSheaf::constant_on(field, p, &support, d).expect("locally closed support"));
    }
    let sum = direct_sum(field, p, &summands).expect("summands on one poset");
    let change: Vec<Matrix> = dims.iter().map(|&d| invertible(field, d, rng)).collect();
    transport_sheaf(&sum, &change).expect("invertible change of basis").0
}

/// A monotone map, built along a linear extension of the source.
pub fn monotone_map<R: Rng + ?Sized>(source: &FinPoset, target: &FinPoset, rng: &mut R) -> MonotoneMap {
    for _ in 0..8 {
        let mut image = vec![usize::MAX; source.len()];
        let mut ok = true;
        for x in source.linear_extension() {
            let candidates: Vec<usize> = target
                .points()
                .filter(|&y| source.lower_covers(x).all(|z| target.leq(image[z], y)))
                .collect();
            match candidates.choose(rng) {
                Some(&y) => image[x] = y,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return MonotoneMap::new(source, target, image).expect("built monotone");
        }
    }
    let y = rng.gen_range(0..target.len());
    MonotoneMap::new(source, target, vec![y; source.len()]).expect("constant map")
}

/// A random `K`-linear combination of a basis of `Hom(F, G)`.
pub fn morphism<R: Rng + ?Sized>(f: &PosetSheaf, g: &PosetSheaf, rng: &mut R) -> Result<SheafMorphism> {
    let k = f.field();
    let mut acc = SheafMorphism::zero(f, g)?;
    for b in hom_global(f, g)? {
        let c = k.random(rng);
        let comps = acc
            .comps()
            .iter()
            .zip(b.comps())
            .map(|(a, m)| a.add(&m.scale(&c)))
            .collect();
        acc = SheafMorphism::new(f, g, comps)?;
    }
    Ok(acc)
}

/// `L ⊗ G` for a random `K`-sheaf `G`, with its natural structure moved
/// along a random pointwise isomorphism over `L`.
pub fn twisted_sheaf<R: Rng + ?Sized>(
    group: &GaloisGroup,
    max_points: usize,
    rng: &mut R,
) -> (PosetSheaf, SheafGStructure) {
    let p = poset(max_points, 0.4, rng);
    let g = sheaf(group.base(), &p, 3, rng);
    twist_sheaf(group, &g, rng)
}

pub fn twist_sheaf<R: Rng + ?Sized>(group: &GaloisGroup, g: &PosetSheaf, rng: &mut R) -> (PosetSheaf, SheafGStructure) {
    let (_, natural) = extend_sheaf(g, group);
    let change: Vec<Matrix> = g
        .stalk_dims()
        .iter()
        .map(|&d| invertible(group.field(), d, rng))
        .collect();
    let twisted = natural.transport(group, &change).expect("invertible twist");
    (g.clone(), twisted)
}

/// A complex in degrees `0..=top` built as a direct sum of pieces
/// `F → G` (random morphism) placed at random degrees, then seen through a
/// random termwise change of basis.
pub fn complex<R: Rng + ?Sized>(field: &Field, p: &FinPoset, top: i64, rng: &mut R) -> BoundedComplex {
    let len = (top + 1) as usize;
    let mut terms: Vec<Vec<PosetSheaf>> = vec![Vec::new(); len];
    let mut diffs: Vec<Vec<SheafMorphism>> = vec![Vec::new(); len.saturating_sub(1)];
    let zero = PosetSheaf::zero(field, p);
    for _ in 0..rng.gen_range(1..=3) {
        let a = rng.gen_range(0..len);
        let f = sheaf(field, p, 2, rng);
        if a + 1 < len && rng.gen_bool(0.7) {
            let g = if rng.gen_bool(0.3) {
                f.clone()
            } else {
                sheaf(field, p, 2, rng)
            };
            let d = morphism(&f, &g, rng).expect("random morphism");
            for (k, t) in terms.iter_mut().enumerate() {
                t.push(if k == a {
                    f.clone()
                } else if k == a + 1 {
                    g.clone()
                } else {
                    zero.clone()
                });
            }
            for (k, ds) in diffs.iter_mut().enumerate() {
                let (s, t) = (&terms[k].last().unwrap().clone(), &terms[k + 1].last().unwrap().clone());
                ds.push(if k == a {
                    d.clone()
                } else {
                    SheafMorphism::zero(s, t).unwrap()
                });
            }
        } else {
            for (k, t) in terms.iter_mut().enumerate() {
                t.push(if k == a { f.clone() } else { zero.clone() });
            }
            for (k, ds) in diffs.iter_mut().enumerate() {
                let (s, t) = (&terms[k].last().unwrap().clone(), &terms[k + 1].last().unwrap().clone());
                ds.push(SheafMorphism::zero(s, t).unwrap());
            }
        }
    }
    let sums: Vec<PosetSheaf> = terms.iter().map(|t| direct_sum(field, p, t).unwrap()).collect();
    let ds: Vec<SheafMorphism> = diffs
        .iter()
        .enumerate()
        .map(|(k, parts)| SheafMorphism::direct_sum(&sums[k], &sums[k + 1], parts).unwrap())
        .collect();
    let c = BoundedComplex::new(0, sums, ds).expect("direct sum of complexes");
    let change: Vec<Vec<Matrix>> = c
        .terms()
        .iter()
        .map(|t| t.stalk_dims().iter().map(|&d| invertible(field, d, rng)).collect())
        .collect();
    c.transport(&change).expect("invertible change of basis")
}

/// `L ⊗ C` for a random `K`-complex with its natural structure moved along a
/// random termwise isomorphism.
pub fn twisted_complex<R: Rng + ?Sized>(
    group: &GaloisGroup,
    p: &FinPoset,
    top: i64,
    rng: &mut R,
) -> (BoundedComplex, BoundedComplex, StrictComplexGStructure) {
    let kc = complex(group.base(), p, top, rng);
    let (lc, natural) = extend_complex(&kc, group);
    let change: Vec<Vec<Matrix>> = lc
        .terms()
        .iter()
        .map(|t| {
            t.stalk_dims()
                .iter()
                .map(|&d| invertible(group.field(), d, rng))
                .collect()
        })
        .collect();
    let (moved, s) = transport_complex(&lc, &natural, group, &change).expect("invertible twist");
    (kc, moved, s)
}

/// `P J P⁻¹` with `J` a sum of Jordan blocks whose eigenvalues are `1` or
/// random nonzero elements.
pub fn monodromy<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Matrix {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.gen_range(1..=left);
        let lambda = if rng.gen_bool(0.6) {
            field.one()
        } else {
            field.random_nonzero(rng)
        };
        let jordan = Matrix::from_fn(field, size, size, |i, j| {
            if i == j {
                lambda.clone()
            } else if j == i + 1 {
                field.one()
            } else {
                field.zero()
            }
        });
        blocks.push(jordan);
        left -= size;
    }
    let j = Matrix::block_diag(field, &blocks);
    let p = invertible(field, n, rng);
    p.mul(&j).mul(&p.inverse().expect("invertible"))
}

/// Gluing data with `dim V ≤ max_dim`: `u = Q [P; 0]`, `v = [(id − t) P⁻¹ | R] Q⁻¹`.
pub fn gluing<R: Rng + ?Sized>(field: &Field, max_dim: usize, rng: &mut R) -> GluingData {
    let n = rng.gen_range(0..=max_dim);
    let ls = LocalSystemDisc::new(monodromy(field, n, rng)).expect("invertible monodromy");
    let nearby = crate::gluing::nearby_unipotent(&ls);
    let p_dim = nearby.dim();
    let m = p_dim + rng.gen_range(0..=2);
    let p = invertible(field, p_dim, rng);
    let u0 = Matrix::vstack(field, p_dim, &[p.clone(), Matrix::zeros(field, m - p_dim, p_dim)]);
    let head = nearby.variation().mul(&p.inverse().expect("invertible"));
    let v0 = Matrix::hstack(field, p_dim, &[head, matrix(field, p_dim, m - p_dim, rng)]);
    let q = invertible(field, m, rng);
    let u = q.mul(&u0);
    let v = v0.mul(&q.inverse().expect("invertible"));
    GluingData::new(&ls, m, u, v).expect("relation holds by construction")
}

/// `L ⊗ gd` for random `K`-gluing data, with the natural structure moved
/// along random isomorphisms of `V` and `Φ`.
pub fn twisted_gluing<R: Rng + ?Sized>(
    group: &GaloisGroup,
    max_dim: usize,
    rng: &mut R,
) -> (GluingData, GluingData, GluingGStructure) {
    let kd = gluing(group.base(), max_dim, rng);
    let (ld, natural) = extend_gluing(&kd, group).expect("extension of scalars");
    let p = invertible(group.field(), ld.local_system().dim(), rng);
    let q = invertible(group.field(), ld.phi_dim(), rng);
    let (moved, s) = transport_gluing(&ld, &natural, group, &p, &q).expect("invertible twist");
    (kd, moved, s)
}
