//! Randomized invariant suites shared by the test-suite and the CLI
//! `selftest` command.
//!
//! Each instance draws from its own ChaCha stream seeded from
//! `(seed, suite, index)`, so instances can run in parallel while the
//! report stays identical for a given seed. Every report carries a SHA-256
//! hash over the generated inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::complexes::{
    cohomology_sheaf, descend_complex_strict, extend_complex, truncate_ge, truncate_le, two_term_descent_via_cohomology,
};
use crate::error::Error;
use crate::field::{finite_extension, gaussian_rationals, rational_extension, GaloisGroup};
use crate::gluing::{
    check_gluing, descend_gluing, extend_gluing, kernel_gluing, nearby_commutes_with_conjugation,
    nearby_commutes_with_extension, GluingMorphism, LocalSystemDisc,
};
use crate::linalg::Matrix;
use crate::random;
use crate::semilinear::{conjugate_matrix, descend};
use crate::sheaf::{hom_global, PosetSheaf, SheafMorphism};
use crate::sheaf_descent::{
    check_compat_hom, check_compat_pullback, check_compat_pushforward, descend_sheaf, descend_sheaf_morphism,
    extend_sheaf, SheafGStructure,
};

/// A named Galois extension used by the suites.
#[derive(Clone, Debug)]
pub struct NamedExtension {
    pub name: &'static str,
    pub group: GaloisGroup,
}

fn named(name: &'static str, group: GaloisGroup) -> NamedExtension {
    NamedExtension { name, group }
}

/// `F_4/F_2`, `F_8/F_2`, `F_9/F_3`, `Q(i)/Q` and `Q(ω)/Q` with `ω² + ω + 1 = 0`.
pub fn extensions() -> Vec<NamedExtension> {
    let finite = |p, m: &[i64], s| {
        let f = finite_extension(p, m, s).expect("irreducible modulus");
        GaloisGroup::automorphisms(&f, &[]).expect("finite field automorphisms")
    };
    let qi = gaussian_rationals();
    let conj = qi.parse("-1*i").expect("element");
    let qw = rational_extension(&[1, 1, 1], "w", false).expect("irreducible modulus");
    let other_root = qw.parse("-1-1*w").expect("element");
    vec![
        named("F4/F2", finite(2, &[1, 1, 1], "w")),
        named("F8/F2", finite(2, &[1, 1, 0, 1], "a")),
        named("F9/F3", finite(3, &[1, 0, 1], "i")),
        named("Q(i)/Q", GaloisGroup::automorphisms(&qi, &[conj]).expect("conjugation")),
        named(
            "Q(w)/Q",
            GaloisGroup::automorphisms(&qw, &[other_root]).expect("conjugation"),
        ),
    ]
}

/// The extensions used for sheaf-level suites: `F_4/F_2`, `F_9/F_3`, `Q(i)/Q`.
pub fn sheaf_extensions() -> Vec<NamedExtension> {
    extensions()
        .into_iter()
        .filter(|e| matches!(e.name, "F4/F2" | "F9/F3" | "Q(i)/Q"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub instances: usize,
    pub passed: usize,
    /// `(instance, message)` for every failing instance.
    pub failures: Vec<(usize, String)>,
    /// SHA-256 (hex) over the generated inputs, in instance order.
    pub input_hash: String,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.instances
    }
}

/// Outcome of one instance: a fingerprint of its input and pass/fail.
pub struct Outcome {
    pub fingerprint: String,
    pub result: Result<(), String>,
}

fn outcome(fingerprint: String, result: Result<(), String>) -> Outcome {
    Outcome { fingerprint, result }
}

fn instance_seed(seed: u64, suite: &str, index: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(suite.as_bytes());
    h.update((index as u64).to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

/// Runs `n` instances of `f` in parallel and assembles the report in
/// instance order.
pub fn run_suite<F>(name: &str, seed: u64, n: usize, f: F) -> SuiteReport
where
    F: Fn(usize, &mut ChaCha8Rng) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, name, i));
            f(i, &mut rng)
        })
        .collect();
    let mut h = Sha256::new();
    let mut failures = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        h.update(o.fingerprint.as_bytes());
        h.update(b"\n");
        if let Err(e) = &o.result {
            failures.push((i, e.clone()));
        }
    }
    SuiteReport {
        name: name.to_string(),
        instances: n,
        passed: n - failures.len(),
        failures,
        input_hash: hex::encode(h.finalize()),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Twisted cocycles on `L^n`, `n ≤ 4`: descent succeeds with `dim_K = n`
/// and an invertible basis, and the certificate re-verifies.
pub fn vect_descent(ext: &NamedExtension, seed: u64, n: usize) -> SuiteReport {
    let group = &ext.group;
    run_suite(&format!("vect-descent {}", ext.name), seed, n, |_, rng| {
        let dim = rng.gen_range(1..=4);
        let gs = random::twisted_cocycle(group, dim, rng);
        let fp = format!("{:?}", gs.matrices());
        let result = (|| {
            let kf = descend(&gs, group).map_err(err)?;
            ensure(kf.kdim == dim, || {
                format!("K-dimension {} for L-dimension {dim}", kf.kdim)
            })?;
            ensure(kf.kbasis.is_invertible(), || "K-basis is not L-independent".into())?;
            ensure(kf.kbasis.mul(&kf.kbasis_inverse).is_identity(), || {
                "bad inverse witness".into()
            })?;
            kf.verify(&gs, group).map_err(err)
        })();
        outcome(fp, result)
    })
}

fn permute_structure(sgs: &SheafGStructure, perm: &[usize]) -> SheafGStructure {
    let sheaf = sgs.sheaf().permute(perm);
    let mut points = vec![None; perm.len()];
    for (x, gs) in sgs.points().iter().enumerate() {
        points[perm[x]] = Some(gs.clone());
    }
    SheafGStructure::new(&sheaf, points.into_iter().map(|p| p.expect("permutation")).collect())
        .expect("relabelled structure")
}

/// Twisted sheaf structures on posets with at most five points: descent
/// certificate verifies, the commuting square holds matrix by matrix, and
/// the result does not depend on the labelling of points.
pub fn sheaf_descent(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("sheaf-descent", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let (_, sgs) = random::twisted_sheaf(group, 5, rng);
        let mut perm: Vec<usize> = (0..sgs.sheaf().poset().len()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
        let fp = format!("{:?} {:?}", sgs, perm);
        let result = (|| {
            let kf = descend_sheaf(&sgs, group).map_err(err)?;
            kf.verify(&sgs, group).map_err(err)?;
            let sheaf = sgs.sheaf();
            for x in sheaf.poset().points() {
                let iso = kf.iso.comp(x);
                for (g, aut) in group.elements().iter().enumerate() {
                    ensure(sgs.at(x).matrix(g).mul(&conjugate_matrix(aut, iso)) == *iso, || {
                        format!("structure square fails at point {x}, element {g}")
                    })?;
                }
            }
            for &(x, y) in sheaf.poset().covers() {
                let lhs = sheaf.restriction(x, y).mul(kf.iso.comp(x));
                let rhs = kf
                    .iso
                    .comp(y)
                    .mul(&kf.ksheaf.restriction(x, y).extend_to(group.field()));
                ensure(lhs == rhs, || format!("restriction square fails on ({x}, {y})"))?;
            }
            let permuted = descend_sheaf(&permute_structure(&sgs, &perm), group).map_err(err)?;
            ensure(permuted.ksheaf == kf.ksheaf.permute(&perm), || {
                "descended sheaf depends on labelling".into()
            })?;
            for (x, &px) in perm.iter().enumerate() {
                ensure(permuted.kforms[px] == kf.kforms[x], || {
                    format!("K-form at {x} depends on labelling")
                })?;
            }
            Ok(())
        })();
        outcome(fp, result)
    })
}

fn sheaf_pair(group: &GaloisGroup, rng: &mut ChaCha8Rng) -> (PosetSheaf, PosetSheaf) {
    let p = random::poset(5, 0.4, rng);
    let f = random::sheaf(group.base(), &p, 3, rng);
    let g = random::sheaf(group.base(), &p, 3, rng);
    (f, g)
}

/// `dim_L Hom(L⊗F, L⊗G) = dim_K Hom(F, G)` with a bijective base change.
pub fn hom_compat(ext: &NamedExtension, seed: u64, n: usize) -> SuiteReport {
    let group = &ext.group;
    run_suite(&format!("hom-compat {}", ext.name), seed, n, |_, rng| {
        let (f, g) = sheaf_pair(group, rng);
        let fp = format!("{f:?} {g:?}");
        let report = check_compat_hom(&f, &g, group);
        outcome(fp, ensure(report.passed(), || format!("{:?}", report.failures)))
    })
}

pub fn pullback_compat(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("pullback-compat", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let source = random::poset(5, 0.4, rng);
        let target = random::poset(5, 0.4, rng);
        let f = random::monotone_map(&source, &target, rng);
        let g = random::sheaf(group.base(), &target, 3, rng);
        let fp = format!("{f:?} {g:?}");
        let report = check_compat_pullback(&f, &g, group);
        outcome(fp, ensure(report.passed(), || format!("{:?}", report.failures)))
    })
}

pub fn pushforward_compat(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("pushforward-compat", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let source = random::poset(5, 0.4, rng);
        let target = random::poset(5, 0.4, rng);
        let f = random::monotone_map(&source, &target, rng);
        let sheaf = random::sheaf(group.base(), &source, 3, rng);
        let fp = format!("{f:?} {sheaf:?}");
        let report = check_compat_pushforward(&f, &sheaf, group);
        outcome(fp, ensure(report.passed(), || format!("{:?}", report.failures)))
    })
}

/// `1 ⊗ f_K` descends to exactly `f_K`.
pub fn morphism_recovery(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("morphism-recovery", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let (f, g) = sheaf_pair(group, rng);
        let fk = random::morphism(&f, &g, rng).expect("random morphism");
        let fp = format!("{fk:?}");
        let result = (|| {
            let (lf, sf) = extend_sheaf(&f, group);
            let (lg, sg) = extend_sheaf(&g, group);
            let lifted = fk.extend_to(group.field());
            ensure(lifted.source() == &lf && lifted.target() == &lg, || {
                "extension mismatch".into()
            })?;
            let down = descend_sheaf_morphism(&lifted, &sf, &sg, group).map_err(err)?;
            ensure(down == fk, || "recovered morphism differs".into())
        })();
        outcome(fp, result)
    })
}

/// A pair `(F, G)` with `Hom(F, G) ≠ 0`, and a nonzero basis morphism.
fn pair_with_morphism(group: &GaloisGroup, rng: &mut ChaCha8Rng) -> (PosetSheaf, PosetSheaf, SheafMorphism) {
    loop {
        let (f, g) = sheaf_pair(group, rng);
        let g = if rng.gen_bool(0.5) { g } else { f.clone() };
        if let Some(h) = hom_global(&f, &g).expect("hom").into_iter().next() {
            return (f, g, h);
        }
    }
}

/// `1 ⊗ f_K + α·(1 ⊗ h)` with `α` not fixed is rejected at the first point
/// where `h` is nonzero and the first element moving `α`.
pub fn perturbation_rejection(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("perturbation-rejection", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let l = group.field();
        let (f, g, h) = pair_with_morphism(group, rng);
        let fk = random::morphism(&f, &g, rng).expect("random morphism");
        let fp = format!("{fk:?} {h:?}");
        let result = (|| {
            let alpha = l.generator();
            let (_, sf) = extend_sheaf(&f, group);
            let (_, sg) = extend_sheaf(&g, group);
            let base = fk.extend_to(l);
            let bump = h.extend_to(l);
            let comps = base
                .comps()
                .iter()
                .zip(bump.comps())
                .map(|(a, b)| a.add(&b.scale(&alpha)))
                .collect();
            let perturbed = SheafMorphism::new(base.source(), base.target(), comps).map_err(err)?;
            let x0 = h.comps().iter().position(|c| !c.is_zero()).expect("nonzero morphism");
            let g0 = (0..group.len())
                .find(|&k| group.get(k).apply(&alpha) != alpha)
                .expect("a non-trivial element");
            match descend_sheaf_morphism(&perturbed, &sf, &sg, group) {
                Err(Error::NotEquivariantAt { x, g }) if x == x0 && g == g0 => Ok(()),
                other => Err(format!("expected rejection at ({x0}, {g0}), got {other:?}")),
            }
        })();
        outcome(fp, result)
    })
}

/// Nearby cycles commute with extension of scalars.
pub fn nearby_extension(seed: u64, n: usize) -> SuiteReport {
    let exts = extensions();
    run_suite("nearby-extension", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let dim = rng.gen_range(1..=4);
        let t = random::monodromy(group.base(), dim, rng);
        let fp = format!("{t:?}");
        let ls = LocalSystemDisc::new(t).expect("invertible");
        outcome(
            fp,
            ensure(nearby_commutes_with_extension(&ls, group.field()), || {
                "Ψ or t changed under extension".into()
            }),
        )
    })
}

/// Nearby cycles commute with conjugation by every group element.
pub fn nearby_conjugation(seed: u64, n: usize) -> SuiteReport {
    let exts = extensions();
    run_suite("nearby-conjugation", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let dim = rng.gen_range(1..=4);
        let t = random::monodromy(group.field(), dim, rng);
        let fp = format!("{t:?}");
        let ls = LocalSystemDisc::new(t).expect("invertible");
        let result = group.elements().iter().enumerate().try_for_each(|(g, aut)| {
            ensure(nearby_commutes_with_conjugation(&ls, aut), || {
                format!("Ψ does not commute with conjugation by element {g}")
            })
        });
        outcome(fp, result)
    })
}

/// Gluing descent: exact natural round trip, relation over `K`, iso
/// certificate, and agreement with standalone descent of `V`.
pub fn gluing_descent(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("gluing-descent", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let (kd, ld, s) = random::twisted_gluing(group, 4, rng);
        let fp = format!("{kd:?} {ld:?}");
        let result = (|| {
            let (ext, natural) = extend_gluing(&kd, group).map_err(err)?;
            let back = descend_gluing(&ext, &natural, group).map_err(err)?;
            ensure(back.data == kd, || "natural round trip is not exact".into())?;
            let kf = descend_gluing(&ld, &s, group).map_err(err)?;
            check_gluing(&kf.data).map_err(err)?;
            ensure(kf.iso.a().is_invertible() && kf.iso.b().is_invertible(), || {
                "iso is not invertible".into()
            })?;
            let standalone = descend(&s.v, group).map_err(err)?;
            ensure(standalone == kf.v_form, || {
                "V-component differs from standalone descent".into()
            })?;
            ensure(kf.data.nearby().dim() == kd.nearby().dim(), || {
                "Ψ dimension changed".into()
            })
        })();
        outcome(fp, result)
    })
}

/// `Σ c_k M^k`.
fn poly_of(m: &Matrix, coeffs: &[crate::field::Elem]) -> Matrix {
    let k = m.field();
    let mut acc = Matrix::zeros(k, m.rows(), m.cols());
    let mut power = Matrix::identity(k, m.rows());
    for c in coeffs {
        acc = acc.add(&power.scale(c));
        power = power.mul(m);
    }
    acc
}

/// `ker f ⊆ ker (g∘f)` for endomorphisms `(p(id − T), p(u v))`.
pub fn kernel_functoriality(seed: u64, n: usize) -> SuiteReport {
    let exts = extensions();
    run_suite("kernel-functoriality", seed, n, |i, rng| {
        let k = exts[i % exts.len()].group.base().clone();
        let gd = random::gluing(&k, 4, rng);
        let p: Vec<_> = (0..3).map(|_| k.random(rng)).collect();
        let q: Vec<_> = (0..3).map(|_| k.random(rng)).collect();
        let fp = format!("{gd:?} {p:?} {q:?}");
        let result = (|| {
            let endo = |c: &[crate::field::Elem]| -> Result<GluingMorphism, String> {
                let n_v = Matrix::identity(&k, gd.local_system().dim()).sub(gd.local_system().monodromy());
                GluingMorphism::new(&gd, &gd, poly_of(&n_v, c), poly_of(&gd.u().mul(gd.v()), c)).map_err(err)
            };
            let f = endo(&p)?;
            let g = endo(&q)?;
            let gf = g.compose(&f).map_err(err)?;
            let (kf, inc_f) = kernel_gluing(&f).map_err(err)?;
            let (kgf, _) = kernel_gluing(&gf).map_err(err)?;
            ensure(kf.local_system().dim() <= kgf.local_system().dim(), || {
                "dim ker a".into()
            })?;
            ensure(kf.phi_dim() <= kgf.phi_dim(), || "dim ker b".into())?;
            ensure(
                gf.a().mul(inc_f.a()).is_zero() && gf.b().mul(inc_f.b()).is_zero(),
                || "ker f is not killed by g∘f".into(),
            )
        })();
        outcome(fp, result)
    })
}

/// `H^i(L ⊗ C)` and `L ⊗ H^i(C)` have equal stalk dimensions, and the
/// truncation triangle splits cohomology.
pub fn complex_extension(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("complex-extension", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let p = random::poset(4, 0.4, rng);
        let c = random::complex(group.base(), &p, 2, rng);
        let fp = format!("{c:?}");
        let result = (|| {
            let (lc, _) = extend_complex(&c, group);
            for i in -1..=3 {
                let hk = cohomology_sheaf(&c, i).map_err(err)?;
                let hl = cohomology_sheaf(&lc, i).map_err(err)?;
                ensure(hk.sheaf.stalk_dims() == hl.sheaf.stalk_dims(), || {
                    format!("H^{i} dims differ")
                })?;
                for a in -1..=3 {
                    let (le, _) = truncate_le(&c, a).map_err(err)?;
                    let (ge, _) = truncate_ge(&c, a + 1).map_err(err)?;
                    let h1 = cohomology_sheaf(&le, i).map_err(err)?;
                    let h2 = cohomology_sheaf(&ge, i).map_err(err)?;
                    for x in p.points() {
                        let (d1, d2) = (h1.sheaf.stalk_dim(x), h2.sheaf.stalk_dim(x));
                        let expected = (
                            if i <= a { hk.sheaf.stalk_dim(x) } else { 0 },
                            if i > a { hk.sheaf.stalk_dim(x) } else { 0 },
                        );
                        ensure((d1, d2) == expected, || {
                            format!("truncation at {a} misplaces H^{i} at {x}")
                        })?;
                    }
                }
            }
            Ok(())
        })();
        outcome(fp, result)
    })
}

/// Strict descent of twisted complexes: natural round trip exact, iso
/// certificate present and pointwise invertible.
pub fn complex_descent(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("complex-descent", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let p = random::poset(4, 0.4, rng);
        let (kc, lc, s) = random::twisted_complex(group, &p, 2, rng);
        let fp = format!("{kc:?} {lc:?}");
        let result = (|| {
            let (ext, natural) = extend_complex(&kc, group);
            let back = descend_complex_strict(&ext, &natural, group).map_err(err)?;
            ensure(back.complex == kc, || "natural round trip is not exact".into())?;
            let kf = descend_complex_strict(&lc, &s, group).map_err(err)?;
            for (deg, m) in kf.iso.comps() {
                ensure(m.is_pointwise_iso(), || {
                    format!("iso in degree {deg} is not invertible")
                })?;
            }
            ensure(kf.complex.extend_to(group.field()) == *kf.iso.source(), || {
                "iso source mismatch".into()
            })
        })();
        outcome(fp, result)
    })
}

/// The two descent routes for two-term complexes agree.
pub fn two_route(seed: u64, n: usize) -> SuiteReport {
    let exts = sheaf_extensions();
    run_suite("two-route", seed, n, |i, rng| {
        let group = &exts[i % exts.len()].group;
        let p = random::poset(4, 0.4, rng);
        let (_, lc, s) = random::twisted_complex(group, &p, 1, rng);
        let fp = format!("{lc:?}");
        let result = two_term_descent_via_cohomology(&lc, &s, group)
            .map_err(err)
            .and_then(|r| ensure(r.passed(), || format!("{:?}", r.degrees)));
        outcome(fp, result)
    })
}

/// Instance counts for [`selftest`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelftestSizes {
    pub vect: usize,
    pub sheaf: usize,
    pub hom: usize,
    pub maps: usize,
    pub morphisms: usize,
    pub gluing: usize,
    pub complexes: usize,
}

impl Default for SelftestSizes {
    fn default() -> Self {
        SelftestSizes {
            vect: 200,
            sheaf: 100,
            hom: 50,
            maps: 50,
            morphisms: 100,
            gluing: 100,
            complexes: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }
}

pub fn selftest(seed: u64, sizes: SelftestSizes) -> SelftestReport {
    let mut suites = Vec::new();
    for ext in extensions() {
        suites.push(vect_descent(&ext, seed, sizes.vect));
    }
    suites.push(sheaf_descent(seed, sizes.sheaf));
    for ext in sheaf_extensions() {
        suites.push(hom_compat(&ext, seed, sizes.hom));
    }
    suites.push(pullback_compat(seed, sizes.maps));
    suites.push(pushforward_compat(seed, sizes.maps));
    suites.push(morphism_recovery(seed, sizes.morphisms));
    suites.push(perturbation_rejection(seed, sizes.morphisms));
    suites.push(nearby_extension(seed, sizes.gluing));
    suites.push(nearby_conjugation(seed, sizes.gluing));
    suites.push(gluing_descent(seed, sizes.gluing));
    suites.push(kernel_functoriality(seed, sizes.gluing));
    suites.push(complex_extension(seed, sizes.complexes));
    suites.push(complex_descent(seed, sizes.complexes));
    suites.push(two_route(seed, sizes.complexes));
    SelftestReport { seed, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_deterministic() {
        let sizes = SelftestSizes {
            vect: 3,
            sheaf: 3,
            hom: 2,
            maps: 2,
            morphisms: 2,
            gluing: 2,
            complexes: 2,
        };
        let a = selftest(7, sizes);
        assert!(a.ok(), "{a:?}");
        assert_eq!(a, selftest(7, sizes));
        assert_ne!(a.suites[0].input_hash, selftest(8, sizes).suites[0].input_hash);
    }
}
