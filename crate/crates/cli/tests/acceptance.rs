//! The acceptance run: nine criteria, one PASS/FAIL line each.
//!
//! Built without the libtest harness so the lines are always printed.

use std::process::Command;
use std::time::Instant;

use galdesc::complexes::{
    descend_complex_strict, two_term_descent_via_cohomology, BoundedComplex, StrictComplexGStructure,
};
use galdesc::field::{finite_extension, gaussian_rationals, Elem, Field, GaloisGroup};
use galdesc::gluing::{check_gluing, GluingData, LocalSystemDisc};
use galdesc::linalg::Matrix;
use galdesc::poset::FinPoset;
use galdesc::semilinear::{descend, GStructure};
use galdesc::sheaf::{PosetSheaf, SheafMorphism};
use galdesc::sheaf_descent::SheafGStructure;
use galdesc::suites::{self, SuiteReport};

const SEED: u64 = 0;

struct Outcome {
    ok: bool,
    detail: String,
}

fn suites_outcome(reports: &[SuiteReport]) -> Outcome {
    let ok = reports.iter().all(SuiteReport::ok);
    let detail = reports
        .iter()
        .map(|r| format!("{} {}/{}", r.name, r.passed, r.instances))
        .collect::<Vec<_>>()
        .join(", ");
    let failures: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failures
                .iter()
                .take(3)
                .map(move |(i, m)| format!("{}#{i}: {m}", r.name))
        })
        .collect();
    Outcome {
        ok,
        detail: if failures.is_empty() {
            detail
        } else {
            format!("{detail}; {}", failures.join("; "))
        },
    }
}

fn gaussian_group() -> GaloisGroup {
    let qi = gaussian_rationals();
    let conj = qi.parse("-1*i").unwrap();
    GaloisGroup::automorphisms(&qi, &[conj]).unwrap()
}

fn vector_suite() -> Outcome {
    let start = Instant::now();
    let reports: Vec<_> = suites::extensions()
        .iter()
        .map(|e| suites::vect_descent(e, SEED, 200))
        .collect();
    let mut out = suites_outcome(&reports);
    out.detail = format!("{} in {:.1?}", out.detail, start.elapsed());
    out
}

/// `ker(M)` for a rank-one 2x2 integer matrix, scaled so that the first
/// nonzero coordinate is 1 (as `(numerator, denominator)` pairs).
fn rank_one_kernel(m: [[i64; 2]; 2]) -> [(i64, i64); 2] {
    let row = if m[0] != [0, 0] { m[0] } else { m[1] };
    let (x, y) = (row[1], -row[0]);
    if x != 0 {
        [(1, 1), (y, x)]
    } else {
        [(0, 1), (1, 1)]
    }
}

fn rational(q: &Field, (n, d): (i64, i64)) -> Elem {
    q.div(&q.from_i64(n), &q.from_i64(d)).unwrap()
}

fn worked_fixtures() -> Outcome {
    // Q(i), A_σ = [i]: write v = a + b·i. The action v ↦ i·σ(v) sends
    // 1 ↦ i and i ↦ i·(−i) = 1, so on (a, b) it is [[0, 1], [1, 0]].
    let gaussian_mul = |(a, b): (i64, i64), (c, d): (i64, i64)| (a * c - b * d, a * d + b * c);
    let conj = |(a, b): (i64, i64)| (a, -b);
    let act = |v| gaussian_mul((0, 1), conj(v));
    let (c0, c1) = (act((1, 0)), act((0, 1)));
    let system = [[c0.0 - 1, c1.0], [c0.1, c1.1 - 1]];
    let kernel = rank_one_kernel(system);

    let group = gaussian_group();
    let l = group.field().clone();
    let q = group.base().clone();
    let gs = GStructure::new(
        &l,
        1,
        vec![Matrix::identity(&l, 1), Matrix::new(&l, 1, 1, vec![l.generator()])],
    )
    .unwrap();
    let kf = descend(&gs, &group).unwrap();
    let expected_qi = l.from_coeffs(kernel.iter().map(|&c| rational(&q, c)).collect());
    let got_qi = kf.kbasis.get(0, 0).clone();
    let qi_ok = kf.kdim == 1 && got_qi == expected_qi;

    // F_4 = F_2[w]/(w² + w + 1), elements as bit pairs b0 + b1·w.
    let mul = |x: u8, y: u8| {
        let (a0, a1, b0, b1) = (x & 1, x >> 1, y & 1, y >> 1);
        let (c0, c1, c2) = (a0 & b0, (a0 & b1) ^ (a1 & b0), a1 & b1);
        (c0 ^ c2) | ((c1 ^ c2) << 1)
    };
    let w = 0b10;
    let fixed: Vec<u8> = (1u8..4).filter(|&x| mul(w, mul(x, x)) == x).collect();

    let f4 = finite_extension(2, &[1, 1, 1], "w").unwrap();
    let frob = GaloisGroup::automorphisms(&f4, &[]).unwrap();
    let f2 = frob.base().clone();
    let gs = GStructure::new(
        &f4,
        1,
        vec![Matrix::identity(&f4, 1), Matrix::new(&f4, 1, 1, vec![f4.generator()])],
    )
    .unwrap();
    let kf4 = descend(&gs, &frob).unwrap();
    let f4_ok = fixed.len() == 1 && {
        let x = fixed[0];
        let expected = f4.from_coeffs(vec![f2.from_i64((x & 1) as i64), f2.from_i64((x >> 1) as i64)]);
        kf4.kdim == 1 && *kf4.kbasis.get(0, 0) == expected
    };
    Outcome {
        ok: qi_ok && f4_ok,
        detail: format!(
            "Q(i): {} (oracle kernel {:?}); F_4: {} (oracle fixed points {:?})",
            l.format(&got_qi),
            kernel,
            f4.format(kf4.kbasis.get(0, 0)),
            fixed
        ),
    }
}

fn jordan_fixture() -> (bool, String) {
    let q = Field::rationals();
    let t = [[1i64, 1], [0, 1]];
    let u = [0i64, -1];
    let v = [1i64, 0];
    let variation = [[1 - t[0][0], -t[0][1]], [-t[1][0], 1 - t[1][1]]];
    let vu = [[v[0] * u[0], v[0] * u[1]], [v[1] * u[0], v[1] * u[1]]];
    let det = variation[0][0] * variation[1][1] - variation[0][1] * variation[1][0];
    let oracle_rank = if variation == [[0, 0], [0, 0]] {
        0
    } else if det == 0 {
        1
    } else {
        2
    };

    let ls = LocalSystemDisc::new(Matrix::from_i64(&q, &[&t[0], &t[1]])).unwrap();
    let gd = GluingData::new(
        &ls,
        1,
        Matrix::from_i64(&q, &[&u]),
        Matrix::from_i64(&q, &[&[v[0]], &[v[1]]]),
    )
    .unwrap();
    let cert = check_gluing(&gd).unwrap();
    let rank = Matrix::identity(&q, 2).sub(gd.local_system().monodromy()).rank();
    let ok = oracle_rank == 1
        && rank == oracle_rank
        && cert.vu == Matrix::from_i64(&q, &[&vu[0], &vu[1]])
        && vu == variation;
    (ok, format!("rank(I - t) = {rank}, v·u = {:?}", cert.vu))
}

fn gluing_suite() -> Outcome {
    let mut out = suites_outcome(&[
        suites::nearby_extension(SEED, 100),
        suites::nearby_conjugation(SEED, 100),
        suites::gluing_descent(SEED, 100),
    ]);
    let (ok, detail) = jordan_fixture();
    out.ok &= ok;
    out.detail = format!("{}; Jordan fixture: {detail}", out.detail);
    out
}

/// Terms `L, L` in degrees 0 and 1 on a point with structures `[a0]`,
/// `[a1]` and differential `[d]`.
fn two_term(group: &GaloisGroup, d: i64, a0: &str, a1: &str) -> (BoundedComplex, StrictComplexGStructure) {
    let l = group.field();
    let p = FinPoset::point();
    let line = PosetSheaf::constant(l, &p, 1);
    let diff = SheafMorphism::new(&line, &line, vec![Matrix::from_i64(l, &[&[d]])]).unwrap();
    let c = BoundedComplex::two_term(&diff, 0);
    let structure = |a: &str| {
        let m = Matrix::new(l, 1, 1, vec![l.parse(a).unwrap()]);
        SheafGStructure::new(
            &line,
            vec![GStructure::new(l, 1, vec![Matrix::identity(l, 1), m]).unwrap()],
        )
        .unwrap()
    };
    let s = StrictComplexGStructure {
        min_deg: 0,
        terms: vec![structure(a0), structure(a1)],
    };
    (c, s)
}

fn complex_suite() -> Outcome {
    let mut out = suites_outcome(&[
        suites::complex_extension(SEED, 50),
        suites::complex_descent(SEED, 50),
        suites::two_route(SEED, 50),
    ]);
    let group = gaussian_group();
    let q = group.base();
    let mut fixtures_ok = true;
    for (name, d, a0, a1) in [("twisted", 1, "1*i", "1*i"), ("zero differential", 0, "1*i", "1")] {
        let (c, s) = two_term(&group, d, a0, a1);
        let passed = two_term_descent_via_cohomology(&c, &s, &group).is_ok_and(|r| r.passed());
        fixtures_ok &= passed;
        if !passed {
            out.detail.push_str(&format!("; two-term fixture {name} disagrees"));
        }
    }
    let (c, s) = two_term(&group, 1, "1*i", "1*i");
    let descended = descend_complex_strict(&c, &s, &group).unwrap();
    fixtures_ok &= descended.complex.diff(0).comp(0) == &Matrix::from_i64(q, &[&[1]]);
    out.ok &= fixtures_ok;
    out.detail = format!(
        "{}; two-term fixtures {}",
        out.detail,
        if fixtures_ok { "agree" } else { "disagree" }
    );
    out
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_galdesc"))
            .args(["selftest", "--seed", "0", "--out"])
            .arg(&path)
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (c1, a) = run("first.json");
    let (c2, b) = run("second.json");
    Outcome {
        ok: c1 == Some(0) && c2 == Some(0) && !a.is_empty() && a == b,
        detail: format!("exit codes {c1:?}/{c2:?}, {} bytes, identical: {}", a.len(), a == b),
    }
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("vector-space descent suite", Box::new(vector_suite)),
        ("worked fixtures match derived oracles", Box::new(worked_fixtures)),
        (
            "sheaf descent suite",
            Box::new(|| suites_outcome(&[suites::sheaf_descent(SEED, 100)])),
        ),
        (
            "Hom compatibility",
            Box::new(|| {
                let reports: Vec<_> = suites::sheaf_extensions()
                    .iter()
                    .map(|e| suites::hom_compat(e, SEED, 50))
                    .collect();
                suites_outcome(&reports)
            }),
        ),
        (
            "pullback and pushforward compatibility",
            Box::new(|| suites_outcome(&[suites::pullback_compat(SEED, 50), suites::pushforward_compat(SEED, 50)])),
        ),
        (
            "equivariant morphism recovery and rejection",
            Box::new(|| {
                suites_outcome(&[
                    suites::morphism_recovery(SEED, 100),
                    suites::perturbation_rejection(SEED, 100),
                ])
            }),
        ),
        ("gluing data", Box::new(gluing_suite)),
        ("complexes", Box::new(complex_suite)),
        ("selftest determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let out = check();
        if !out.ok {
            failed += 1;
        }
        println!(
            "{} [{}] {name}: {}",
            if out.ok { "PASS" } else { "FAIL" },
            i + 1,
            out.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
