//! Block compression of witnesses.
//!
//! Given blocks `H_1 < … < H_r` and a filler `d`, every sequence `f` is
//! compressed to `g_f(n) = f(b(n,1))·d·f(b(n,2))·d·…·d·f(b(n,α_n))`, where
//! `b(n,i)` is the `i`-th smallest member of `H_n` (and `g_f = d` past
//! block `r`). A short witness `(a, t)` for the compressed family expands to
//! a long witness over `L = H_{t(1)} ∪ … ∪ H_{t(m)}`: the letter before the
//! first member of each chosen block is `a(j)`, every other interior letter
//! is `d`, and the last letter is `a(m+1)`. Both witnesses evaluate to the
//! same element for every `f`.
//!
//! [`lemma1_check`] uses this to test, inside a bounded universe, that the
//! set of realisable index sets meets every `r`-block system whenever `r` is
//! large enough for the target.

use alloc::vec::Vec;

use crate::cr::{
    compute_theta_unguarded, family_stream, find_witness_unguarded, interleave, theta_cost, witness_cost,
    CrWitness, FunFamily, SeqFun, ThetaSet,
};
use crate::exec::{Budget, Ctx, Executor, Sequential};
use crate::finset::{count_blockseqs, enumerate_blockseqs_with_limit, is_ip_r_star_within, BlockSeq, FinSet, IpStar, HARD_ENUM_LIMIT};
use crate::semigroup::{Element, ElementSet, FiniteSemigroup};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionPlan {
    blocks: BlockSeq,
    filler: Element,
}

impl CompressionPlan {
    pub fn new(blocks: BlockSeq, filler: Element) -> Self {
        Self { blocks, filler }
    }

    pub fn blocks(&self) -> &BlockSeq {
        &self.blocks
    }

    pub fn filler(&self) -> Element {
        self.filler
    }

    /// `α_n = |H_n|`, 1-based.
    pub fn block_size(&self, n: usize) -> usize {
        self.blocks.blocks()[n - 1].len()
    }

    /// `b(n, i)`, both 1-based.
    pub fn label(&self, n: usize, i: usize) -> u32 {
        self.blocks.blocks()[n - 1].iter().nth(i - 1).expect("i <= α_n")
    }
}

/// The compressed sequence `g_f` with table length `r` and default `d`.
///
/// Blocks reaching past `f`'s table are refused rather than read through
/// the default.
pub fn derive_g(sgp: &FiniteSemigroup, f: &SeqFun, plan: &CompressionPlan) -> Result<SeqFun, Error> {
    f.check_in(sgp)?;
    let d = sgp.element(plan.filler.0)?;
    let support = plan.blocks.support();
    if support.largest() as usize > f.r_max() {
        return Err(Error::BeyondDomain { position: support.largest(), r_max: f.r_max() });
    }
    let values = plan
        .blocks
        .blocks()
        .iter()
        .map(|h| {
            let mut pos = h.iter();
            let first = f.at(pos.next().expect("blocks are nonempty"));
            pos.fold(first, |acc, p| sgp.mul(sgp.mul(acc, d), f.at(p)))
        })
        .collect();
    SeqFun::new(values, d)
}

pub fn derive_family(sgp: &FiniteSemigroup, fam: &FunFamily, plan: &CompressionPlan) -> Result<FunFamily, Error> {
    FunFamily::new(fam.funs().iter().map(|f| derive_g(sgp, f, plan)).collect::<Result<_, _>>()?)
}

/// The long witness rebuilt from a short one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compressed {
    pub set: FinSet,
    pub word: Vec<Element>,
}

impl Compressed {
    pub fn to_witness(&self) -> Result<CrWitness, Error> {
        CrWitness::new(self.word.clone(), self.set.to_vec())
    }
}

/// Expands a witness for the compressed family into `(L, c)`.
pub fn compress_witness(plan: &CompressionPlan, short: &CrWitness) -> Result<Compressed, Error> {
    let blocks = plan.blocks.blocks();
    let mut word = Vec::new();
    let mut set = 0u64;
    for (&tj, &aj) in short.indices().iter().zip(short.word()) {
        let h = *blocks
            .get(tj as usize - 1)
            .ok_or(Error::IndexBeyondPlan { index: tj, blocks: blocks.len() })?;
        set |= h.mask();
        word.push(aj);
        word.extend(core::iter::repeat_n(plan.filler, h.len() - 1));
    }
    word.push(*short.word().last().expect("|a| = m + 1"));
    Ok(Compressed { set: FinSet::from_mask(set)?, word })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressionCheck {
    Identical,
    Differs { fun: usize, long: Element, short: Element },
}

impl CompressionCheck {
    pub fn is_identical(self) -> bool {
        self == CompressionCheck::Identical
    }
}

/// Evaluates both sides for every `f`: the long product over `(c, f, L)` and
/// the short product over `(a, g_f, t)` must be the same element.
pub fn verify_compression(
    sgp: &FiniteSemigroup,
    fam: &FunFamily,
    plan: &CompressionPlan,
    short: &CrWitness,
    out: &Compressed,
) -> Result<CompressionCheck, Error> {
    if out.word.len() != out.set.len() + 1 {
        return Err(Error::LengthMismatch { word: out.word.len(), indices: out.set.len() });
    }
    for &e in out.word.iter().chain(short.word()) {
        sgp.element(e.0)?;
    }
    if let Some(&tj) = short.indices().iter().find(|&&tj| tj as usize > plan.blocks.len()) {
        return Err(Error::IndexBeyondPlan { index: tj, blocks: plan.blocks.len() });
    }
    let s = out.set.to_vec();
    for (i, f) in fam.funs().iter().enumerate() {
        let g = derive_g(sgp, f, plan)?;
        let long = interleave(sgp, &out.word, f, &s);
        let short_v = interleave(sgp, short.word(), &g, short.indices());
        if long != short_v {
            return Ok(CompressionCheck::Differs { fun: i, long, short: short_v });
        }
    }
    Ok(CompressionCheck::Identical)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma1Failure {
    /// No union of the system's blocks is realisable.
    ThetaMissesSystem,
    /// The compressed family has no witness within `r`.
    NoShortWitness,
    /// The expanded witness' index set is not realisable.
    CompressedOutsideTheta,
    /// Long and short products disagree.
    CompressionMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lemma1Verdict {
    Holds { families: u128, systems: u128 },
    Counterexample { family: FunFamily, system: BlockSeq, failure: Lemma1Failure },
}

impl Lemma1Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Lemma1Verdict::Holds { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma1Options {
    /// Also run the compression route for every (family, system) pair.
    pub constructive: bool,
    pub filler: Element,
}

impl Default for Lemma1Options {
    fn default() -> Self {
        Self { constructive: false, filler: Element(0) }
    }
}

/// For every family of `min(k, |S|^n)` tables over `{1..n}` and every
/// `r`-block system inside `{1..n}`, checks that some finite union of the
/// blocks is a realisable index set.
pub fn lemma1_check<E: Executor>(
    ctx: &Ctx<E>,
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    k: usize,
    r: usize,
    n: usize,
    opts: Lemma1Options,
) -> Result<Lemma1Verdict, Error> {
    if k == 0 || r == 0 || n == 0 {
        return Err(Error::ParameterOutOfRange { param: 0, min: 1, max: HARD_ENUM_LIMIT });
    }
    if n > HARD_ENUM_LIMIT {
        return Err(Error::UniverseTooLarge { n, limit: HARD_ENUM_LIMIT });
    }
    let d = sgp.element(opts.filler.0)?;
    let (stream, size, families) = family_stream(sgp.order(), n, k)?;
    let systems = count_blockseqs(r, n);
    let mut per_family = theta_cost(sgp.order(), size, n)
        .saturating_add(systems.saturating_mul(1u128 << n.min(64)));
    if opts.constructive {
        per_family = per_family.saturating_add(systems.saturating_mul(witness_cost(sgp.order(), size, r)));
    }
    ctx.budget.admit(families.saturating_mul(per_family))?;

    let inner = Ctx::new(Sequential, Budget::unlimited());
    let hit = ctx.first_in_stream(stream, |funs| {
        let theta = compute_theta_unguarded(&Sequential, sgp, target, funs, n);
        if let IpStar::Fails(b) = is_ip_r_star_within(&inner, theta.family(), r, n).expect("unlimited budget") {
            return Some((b, Lemma1Failure::ThetaMissesSystem));
        }
        if opts.constructive {
            return constructive_failure(sgp, target, funs, &theta, r, n, d);
        }
        None
    });
    Ok(match hit {
        Some((_, funs, (system, failure))) => Lemma1Verdict::Counterexample { family: FunFamily::new(funs)?, system, failure },
        None => Lemma1Verdict::Holds { families, systems },
    })
}

fn constructive_failure(
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    funs: &[SeqFun],
    theta: &ThetaSet,
    r: usize,
    n: usize,
    d: Element,
) -> Option<(BlockSeq, Lemma1Failure)> {
    let fam = FunFamily::new(funs.to_vec()).ok()?;
    for b in enumerate_blockseqs_with_limit(r, n, HARD_ENUM_LIMIT).expect("n checked") {
        let plan = CompressionPlan::new(b, d);
        let g = derive_family(sgp, &fam, &plan).expect("blocks lie inside the tables");
        let Some(short) = find_witness_unguarded(sgp, target, g.funs(), r) else {
            return Some((plan.blocks, Lemma1Failure::NoShortWitness));
        };
        let out = compress_witness(&plan, &short).expect("t(m) <= r");
        if !verify_compression(sgp, &fam, &plan, &short, &out).is_ok_and(CompressionCheck::is_identical) {
            return Some((plan.blocks, Lemma1Failure::CompressionMismatch));
        }
        if theta.witness(out.set).is_none() {
            return Some((plan.blocks, Lemma1Failure::CompressedOutsideTheta));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cr::{find_witness, verify_witness};
    use crate::semigroup::Family;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: u32) -> Element {
        Element(i)
    }

    fn fs(m: &[u32]) -> FinSet {
        FinSet::from_members(m.iter().copied()).unwrap()
    }

    fn seq(bs: &[&[u32]]) -> BlockSeq {
        BlockSeq::new(bs.iter().map(|b| fs(b)).collect()).unwrap()
    }

    fn ctx() -> Ctx {
        Ctx::default()
    }

    #[test]
    fn derive_g_examples() {
        let z2 = Family::Cyclic(2).build().unwrap();
        let f = SeqFun::new(vec![e(1), e(0), e(1), e(1)], e(0)).unwrap();
        let singles = CompressionPlan::new(seq(&[&[1], &[3], &[4]]), e(1));
        let g = derive_g(&z2, &f, &singles).unwrap();
        assert_eq!(g.values(), &[e(1), e(1), e(1)]);
        assert_eq!(g.default_value(), e(1));

        let ones = SeqFun::constant(e(1), 4).unwrap();
        let pairs = CompressionPlan::new(seq(&[&[1, 2], &[3, 4]]), e(0));
        assert_eq!(derive_g(&z2, &ones, &pairs).unwrap().values(), &[e(0), e(0)]);

        let lz = Family::LeftZero(3).build().unwrap();
        let f = SeqFun::new(vec![e(2), e(1), e(0), e(1)], e(0)).unwrap();
        for d in 0..3 {
            let plan = CompressionPlan::new(seq(&[&[1, 3], &[4]]), e(d));
            assert_eq!(derive_g(&lz, &f, &plan).unwrap().values(), &[e(2), e(1)]);
        }

        let short = SeqFun::constant(e(1), 2).unwrap();
        assert_eq!(
            derive_g(&z2, &short, &pairs),
            Err(Error::BeyondDomain { position: 4, r_max: 2 })
        );
    }

    #[test]
    fn compress_examples() {
        let plan = CompressionPlan::new(BlockSeq::singletons(4).unwrap(), e(0));
        let w = CrWitness::new(vec![e(1), e(2), e(0)], vec![2, 4]).unwrap();
        let out = compress_witness(&plan, &w).unwrap();
        assert_eq!(out.set, fs(&[2, 4]));
        assert_eq!(out.word, w.word());

        let plan = CompressionPlan::new(seq(&[&[1, 2], &[3, 4]]), e(0));
        let w = CrWitness::new(vec![e(1), e(1)], vec![1]).unwrap();
        let out = compress_witness(&plan, &w).unwrap();
        assert_eq!(out.set, fs(&[1, 2]));
        assert_eq!(out.word, vec![e(1), e(0), e(1)]);

        let w = CrWitness::new(vec![e(1), e(1)], vec![3]).unwrap();
        assert_eq!(compress_witness(&plan, &w), Err(Error::IndexBeyondPlan { index: 3, blocks: 2 }));
    }

    #[test]
    fn plan_labels() {
        let plan = CompressionPlan::new(seq(&[&[2, 5], &[7, 8, 9]]), e(0));
        assert_eq!((plan.block_size(1), plan.block_size(2)), (2, 3));
        assert_eq!((plan.label(1, 1), plan.label(1, 2), plan.label(2, 3)), (2, 5, 9));
    }

    #[test]
    fn verify_rejects_bad_shapes() {
        let z2 = Family::Cyclic(2).build().unwrap();
        let fam = FunFamily::new(vec![SeqFun::constant(e(1), 4).unwrap()]).unwrap();
        let plan = CompressionPlan::new(seq(&[&[1, 2], &[3, 4]]), e(0));
        let w = CrWitness::new(vec![e(1), e(1)], vec![1]).unwrap();
        let bad = Compressed { set: fs(&[1, 2]), word: vec![e(0)] };
        assert!(matches!(
            verify_compression(&z2, &fam, &plan, &w, &bad),
            Err(Error::LengthMismatch { .. })
        ));
        // a tampered long word disagrees with the short side
        let mut out = compress_witness(&plan, &w).unwrap();
        assert!(verify_compression(&z2, &fam, &plan, &w, &out).unwrap().is_identical());
        out.word[1] = e(1);
        assert!(!verify_compression(&z2, &fam, &plan, &w, &out).unwrap().is_identical());
    }

    fn random_plan(rng: &mut ChaCha8Rng, order: usize, r: usize, n: usize) -> CompressionPlan {
        let b = crate::finset::random_blockseq(rng, r, n).unwrap();
        CompressionPlan::new(b, e(rng.gen_range(0..order as u32)))
    }

    #[test]
    fn membership_transfers_to_long_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sgs = [
            Family::Cyclic(3).build().unwrap(),
            Family::FullTransformation(2).build().unwrap(),
            Family::ModMult(4).build().unwrap(),
        ];
        let mut transferred = 0;
        for _ in 0..200 {
            let sg = &sgs[rng.gen_range(0..sgs.len())];
            let o = sg.order() as u32;
            let target = ElementSet::from_indices(sg, (0..o).filter(|_| rng.gen_bool(0.5))).unwrap();
            let funs = (0..rng.gen_range(1..=2))
                .map(|_| SeqFun::new((0..8).map(|_| e(rng.gen_range(0..o))).collect(), e(0)).unwrap())
                .collect();
            let fam = FunFamily::new(funs).unwrap();
            let plan = random_plan(&mut rng, sg.order(), 3, 8);
            let g = derive_family(sg, &fam, &plan).unwrap();
            if let Some(short) = find_witness(&ctx(), sg, &target, &g, 3).unwrap() {
                let out = compress_witness(&plan, &short).unwrap();
                let long = out.to_witness().unwrap();
                assert!(verify_witness(sg, &target, &fam, &long).unwrap().is_verified());
                assert_eq!(
                    out.set.len(),
                    short.indices().iter().map(|&t| plan.block_size(t as usize)).sum::<usize>()
                );
                let concat: Vec<u32> = short
                    .indices()
                    .iter()
                    .flat_map(|&t| plan.blocks().blocks()[t as usize - 1].iter())
                    .collect();
                assert_eq!(out.set.to_vec(), concat);
                transferred += 1;
            }
        }
        assert!(transferred > 50);
    }

    #[test]
    fn lemma1_examples() {
        let lz = Family::LeftZero(2).build().unwrap();
        let a = ElementSet::from_indices(&lz, [1]).unwrap();
        let opts = Lemma1Options { constructive: true, filler: e(0) };
        assert!(lemma1_check(&ctx(), &lz, &a, 2, 1, 4, opts).unwrap().holds());

        let z2 = Family::Cyclic(2).build().unwrap();
        let a0 = ElementSet::from_indices(&z2, [0]).unwrap();
        assert!(lemma1_check(&ctx(), &z2, &a0, 2, 2, 4, opts).unwrap().holds());
        let v = lemma1_check(&ctx(), &z2, &a0, 2, 1, 3, Lemma1Options::default()).unwrap();
        let Lemma1Verdict::Counterexample { family, system, failure } = v else { panic!("{v:?}") };
        assert_eq!(failure, Lemma1Failure::ThetaMissesSystem);
        // first family by table order: 000 and 001, realisable iff 3 ∉ L
        assert_eq!(
            family.funs().iter().map(|f| f.values().to_vec()).collect::<Vec<_>>(),
            vec![vec![e(0), e(0), e(0)], vec![e(0), e(0), e(1)]]
        );
        assert_eq!(system, seq(&[&[3]]));
    }

    #[test]
    fn parity_family_misses_single_blocks() {
        let z2 = Family::Cyclic(2).build().unwrap();
        let a0 = ElementSet::from_indices(&z2, [0]).unwrap();
        let fam = FunFamily::new(vec![SeqFun::constant(e(0), 3).unwrap(), SeqFun::constant(e(1), 3).unwrap()]).unwrap();
        let theta = crate::cr::compute_theta(&ctx(), &z2, &a0, &fam, 3).unwrap();
        assert_eq!(
            is_ip_r_star_within(&ctx(), theta.family(), 1, 3).unwrap(),
            IpStar::Fails(seq(&[&[1]]))
        );
        assert!(is_ip_r_star_within(&ctx(), theta.family(), 2, 3).unwrap().holds());
    }
}
