use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use galdesc::field::GaloisGroup;
use galdesc::gluing::check_gluing;
use galdesc::linalg::Matrix;
use galdesc::random;
use galdesc::semilinear::{descend, GStructure};
use galdesc::sheaf::{hom_global, hom_global_direct};
use galdesc::sheaf_descent::{descend_sheaf, extend_sheaf};
use galdesc::suites;

fn setup(seed: u64, pick: usize) -> (GaloisGroup, ChaCha8Rng) {
    let exts = suites::extensions();
    (exts[pick % exts.len()].group.clone(), ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twisted_structures_descend(seed in any::<u64>(), pick in 0usize..5, dim in 0usize..4) {
        let (group, mut rng) = setup(seed, pick);
        let gs = random::twisted_cocycle(&group, dim, &mut rng);
        let kf = descend(&gs, &group).unwrap();
        prop_assert_eq!(kf.kdim, dim);
        kf.verify(&gs, &group).unwrap();

        let b = random::invertible(group.field(), dim, &mut rng);
        let moved = gs.transport(&group, &b).unwrap();
        let kf2 = descend(&moved, &group).unwrap();
        prop_assert_eq!(kf2.kdim, dim);
        kf2.verify(&moved, &group).unwrap();
    }

    #[test]
    fn natural_structure_descends_to_the_standard_basis(pick in 0usize..5, dim in 0usize..5) {
        let (group, _) = setup(0, pick);
        let kf = descend(&GStructure::natural(&group, dim), &group).unwrap();
        prop_assert!(kf.kbasis.is_identity());
    }

    #[test]
    fn inverse_and_rank_nullity(seed in any::<u64>(), pick in 0usize..5, rows in 0usize..5, cols in 0usize..5) {
        let (group, mut rng) = setup(seed, pick);
        let l = group.field();
        let m = random::matrix(l, rows, cols, &mut rng);
        prop_assert_eq!(m.rank() + m.kernel().dim(), cols);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let sq = random::invertible(l, rows, &mut rng);
        let inv = sq.inverse().unwrap();
        prop_assert!(sq.mul(&inv).is_identity());
        prop_assert!(inv.mul(&sq).is_identity());
    }

    #[test]
    fn elements_round_trip_and_automorphisms_are_ring_maps(seed in any::<u64>(), pick in 0usize..5) {
        let (group, mut rng) = setup(seed, pick);
        let l = group.field();
        let (x, y) = (l.random(&mut rng), l.random(&mut rng));
        prop_assert_eq!(&l.parse(&l.format(&x)).unwrap(), &x);
        for g in group.elements() {
            prop_assert_eq!(g.apply(&l.add(&x, &y)), l.add(&g.apply(&x), &g.apply(&y)));
            prop_assert_eq!(g.apply(&l.mul(&x, &y)), l.mul(&g.apply(&x), &g.apply(&y)));
            prop_assert!(l.is_one(&g.apply(&l.one())));
        }
        let k = group.base();
        let c = k.random(&mut rng);
        prop_assert!(group.is_fixed(&l.embed(c)));
    }

    #[test]
    fn hom_dimensions_agree(seed in any::<u64>(), pick in 0usize..3) {
        let exts = suites::sheaf_extensions();
        let group = &exts[pick % exts.len()].group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = group.field();
        let p = random::poset(4, 0.4, &mut rng);
        let f = random::sheaf(l, &p, 2, &mut rng);
        let g = random::sheaf(l, &p, 2, &mut rng);
        prop_assert_eq!(hom_global(&f, &g).unwrap().len(), hom_global_direct(&f, &g).unwrap().dim());
    }

    #[test]
    fn extended_sheaves_descend_back(seed in any::<u64>(), pick in 0usize..3) {
        let exts = suites::sheaf_extensions();
        let group = &exts[pick % exts.len()].group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::poset(4, 0.4, &mut rng);
        let g = random::sheaf(group.base(), &p, 2, &mut rng);
        let (_, natural) = extend_sheaf(&g, group);
        let kf = descend_sheaf(&natural, group).unwrap();
        kf.verify(&natural, group).unwrap();
        prop_assert_eq!(kf.ksheaf.stalk_dims(), g.stalk_dims());
    }

    #[test]
    fn random_gluing_data_satisfies_the_relation(seed in any::<u64>(), pick in 0usize..5) {
        let (group, mut rng) = setup(seed, pick);
        let field = if rng.gen_bool(0.5) { group.field().clone() } else { group.base().clone() };
        let gd = random::gluing(&field, 3, &mut rng);
        let cert = check_gluing(&gd).unwrap();
        prop_assert_eq!(gd.v().mul(gd.u()), cert.vu.clone());
        prop_assert_eq!(&cert.vu, &cert.variation);

        let n = gd.local_system().dim();
        let t = gd.local_system().monodromy();
        let nilpotent = t.sub(&Matrix::identity(&field, n)).pow(n);
        let psi = &gd.nearby().psi;
        prop_assert_eq!(psi.dim(), n - nilpotent.rank());
        prop_assert_eq!(gd.u().shape(), (gd.phi_dim(), psi.dim()));
        for r in psi.basis().row_vecs() {
            prop_assert!(nilpotent.mul_vec(&r).iter().all(|x| field.is_zero(x)));
            prop_assert!(psi.contains(&t.mul_vec(&r)));
        }
    }
}
