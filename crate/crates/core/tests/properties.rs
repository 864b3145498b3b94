//! Cross-module invariants, checked on random small instances.

use crich_core::cr::{compute_theta, find_witness, verify_witness, CrWitness, FunFamily, SeqFun, WitnessCheck};
use crich_core::exec::Ctx;
use crich_core::finset::{fu_enumerate, is_ip_r_star_within, random_blockseq};
use crich_core::product::{project_family, product_witness, ProductOutcome, ProductQuery};
use crich_core::semigroup::{direct_product, Family};
use crich_core::transfer::{compress_witness, derive_g, verify_compression, CompressionPlan};
use crich_core::{Budget, Element, ElementSet, FinSet, FiniteSemigroup, Sequential, SetFamily};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx() -> Ctx<Sequential> {
    Ctx::new(Sequential, Budget::unlimited())
}

fn small_semigroup() -> impl Strategy<Value = FiniteSemigroup> {
    prop_oneof![
        Just(Family::Trivial),
        (2usize..=4).prop_map(Family::Cyclic),
        (2usize..=3).prop_map(Family::LeftZero),
        (2usize..=3).prop_map(Family::RightZero),
        (2usize..=4).prop_map(Family::ModMult),
        Just(Family::FullTransformation(2)),
    ]
    .prop_map(|f| f.build().unwrap())
}

/// A semigroup, a nonempty target, and up to three tables over `{1..len}`.
fn instance(len: usize) -> impl Strategy<Value = (FiniteSemigroup, ElementSet, Vec<SeqFun>)> {
    small_semigroup().prop_flat_map(move |s| {
        let n = s.order() as u32;
        let target = prop::collection::btree_set(0..n, 1..=n as usize);
        let fun = (prop::collection::vec(0..n, len), 0..n).prop_map(|(v, d)| {
            SeqFun::new(v.into_iter().map(Element).collect(), Element(d)).unwrap()
        });
        (Just(s), target, prop::collection::vec(fun, 1..=3)).prop_map(|(s, t, funs)| {
            let target = ElementSet::from_indices(&s, t).unwrap();
            (s, target, funs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn found_witnesses_verify_and_serve_subfamilies((s, target, funs) in instance(3)) {
        let fam = FunFamily::new(funs).unwrap();
        if let Some(w) = find_witness(&ctx(), &s, &target, &fam, 3).unwrap() {
            prop_assert!(w.reach() <= 3);
            for i in 0..fam.len() {
                let sub = fam.subfamily(&[i]).unwrap();
                prop_assert_eq!(verify_witness(&s, &target, &sub, &w).unwrap(), WitnessCheck::Verified);
            }
        }
    }

    #[test]
    fn theta_grows_with_the_universe((s, target, funs) in instance(4)) {
        let fam = FunFamily::new(funs).unwrap();
        let small = compute_theta(&ctx(), &s, &target, &fam, 3).unwrap();
        let large = compute_theta(&ctx(), &s, &target, &fam, 4).unwrap();
        prop_assert!(small.verify(&s, &target, &fam).unwrap());
        prop_assert_eq!(large.family().restrict(3), small.family().clone());
    }

    #[test]
    fn compression_is_exact((s, _target, funs) in instance(8), seed in any::<u64>(), r in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = random_blockseq(&mut rng, r, 8).unwrap();
        let fam = FunFamily::new(funs).unwrap();
        let n = s.order() as u32;
        for d in 0..n {
            let plan = CompressionPlan::new(blocks.clone(), Element(d));
            let t: Vec<u32> = (1..=r as u32).filter(|i| (seed >> i) & 1 == 1 || *i == r as u32).collect();
            let a = (0..=t.len()).map(|i| Element(((seed >> (8 + 2 * i)) as u32) % n)).collect();
            let short = CrWitness::new(a, t).unwrap();
            let out = compress_witness(&plan, &short).unwrap();
            prop_assert_eq!(out.word.len(), out.set.len() + 1);
            prop_assert!(verify_compression(&s, &fam, &plan, &short, &out).unwrap().is_identical());
            for f in fam.funs() {
                prop_assert_eq!(derive_g(&s, f, &plan).unwrap().r_max(), r);
            }
        }
    }

    #[test]
    fn product_witness_projects_to_both_factors(
        left in 0usize..4,
        right in 0usize..4,
        values in prop::collection::vec(prop::collection::vec(0u32..4, 3), 1..=2),
    ) {
        let pick = |i: usize| [Family::Trivial, Family::LeftZero(2), Family::RightZero(2), Family::Cyclic(2)][i].build().unwrap();
        let (s, t) = (pick(left), pick(right));
        let st = direct_product(&s, &t).unwrap();
        let order = st.order() as u32;
        let funs = values
            .into_iter()
            .map(|v| SeqFun::new(v.into_iter().map(|x| Element(x % order)).collect(), Element(0)).unwrap())
            .collect();
        let fam = FunFamily::new(funs).unwrap();
        let a = ElementSet::from_indices(&s, [0]).unwrap();
        let b = ElementSet::from_indices(&t, [0]).unwrap();
        let query = ProductQuery { k: 2, l_max: 4, l_start: None };
        let ProductOutcome::Found(pw) = product_witness(&ctx(), &s, &a, &t, &b, &fam, query).unwrap() else {
            return Err(TestCaseError::fail("no product witness within 4"));
        };
        let target = a.product(&b, &st).unwrap();
        prop_assert!(verify_witness(&st, &target, &fam, &pw.witness).unwrap().is_verified());
        let lw = CrWitness::new(pw.left.clone(), pw.witness.indices().to_vec()).unwrap();
        let rw = CrWitness::new(pw.right.clone(), pw.witness.indices().to_vec()).unwrap();
        let g = project_family(&st, &fam, 1).unwrap();
        let h = project_family(&st, &fam, 2).unwrap();
        prop_assert!(verify_witness(&s, &a, &g, &lw).unwrap().is_verified());
        prop_assert!(verify_witness(&t, &b, &h, &rw).unwrap().is_verified());
    }

    #[test]
    fn ip_star_is_monotone_in_the_block_count(masks in prop::collection::btree_set(1u64..64, 1..20)) {
        let fam = SetFamily::new(masks.into_iter().map(|m| FinSet::from_mask(m).unwrap()).collect());
        let holds: Vec<bool> = (1..=6).map(|u| is_ip_r_star_within(&ctx(), &fam, u, 6).unwrap().holds()).collect();
        if let Some(first) = holds.iter().position(|&h| h) {
            prop_assert!(holds[first..].iter().all(|&h| h), "{:?}", holds);
        }
    }

    #[test]
    fn finite_unions_are_closed_under_union(seed in any::<u64>(), r in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = random_blockseq(&mut rng, r, 12).unwrap();
        let fu = fu_enumerate(&blocks).unwrap();
        prop_assert_eq!(fu.len(), (1 << r) - 1);
        for x in fu.iter() {
            prop_assert!(blocks.is_finite_union(x));
            for y in fu.iter() {
                prop_assert!(fu.contains(x.union(y)));
            }
        }
    }
}
