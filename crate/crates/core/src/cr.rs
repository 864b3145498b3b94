//! Interleaved products and combinatorial richness.
//!
//! A set `A ⊆ S` is CR when for every `k` there is an `r` such that every
//! family `F` of at most `k` sequences `ℕ → S` admits `m`, a word
//! `a ∈ S^{m+1}` and indices `t(1) < … < t(m) ≤ r` with
//!
//! ```text
//! a(1)·f(t(1))·a(2)·…·a(m)·f(t(m))·a(m+1) ∈ A   for every f ∈ F.
//! ```
//!
//! Sequences are stored as a finite table plus a default value for every
//! later position; all searches read only finitely many positions.
//!
//! Witness order is canonical: `m` ascending, then `t` lexicographic, then
//! `a` lexicographic. The least witness is what every search returns.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::exec::{binomial, pow_sat, Combinations, Ctx, Executor};
use crate::finset::{FinSet, SetFamily, HARD_ENUM_LIMIT};
use crate::semigroup::{Element, ElementSet, FiniteSemigroup};
use crate::Error;

/// A sequence `ℕ₊ → S`: `values[i - 1]` at position `i ≤ r_max`, `default`
/// everywhere after.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqFun {
    values: Vec<Element>,
    default: Element,
}

impl SeqFun {
    pub fn new(values: Vec<Element>, default: Element) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(Self { values, default })
    }

    pub fn constant(e: Element, r_max: usize) -> Result<Self, Error> {
        Self::new(vec![e; r_max], e)
    }

    #[inline]
    pub fn at(&self, pos: u32) -> Element {
        match pos.checked_sub(1).and_then(|i| self.values.get(i as usize)) {
            Some(&v) => v,
            None => self.default,
        }
    }

    pub fn r_max(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn default_value(&self) -> Element {
        self.default
    }

    pub fn check_in(&self, sgp: &FiniteSemigroup) -> Result<(), Error> {
        for &e in self.values.iter().chain([&self.default]) {
            sgp.element(e.0)?;
        }
        Ok(())
    }

    /// Applies `map` to every value and to the default.
    pub fn map(&self, mut map: impl FnMut(Element) -> Result<Element, Error>) -> Result<Self, Error> {
        Ok(Self {
            values: self.values.iter().map(|&e| map(e)).collect::<Result<_, _>>()?,
            default: map(self.default)?,
        })
    }
}

/// A nonempty set of sequences sharing one table length, kept sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunFamily {
    funs: Vec<SeqFun>,
}

impl FunFamily {
    pub fn new(mut funs: Vec<SeqFun>) -> Result<Self, Error> {
        let first = funs.first().ok_or(Error::EmptyFamily)?.r_max();
        if let Some(f) = funs.iter().find(|f| f.r_max() != first) {
            return Err(Error::DomainMismatch { expected: first, found: f.r_max() });
        }
        funs.sort();
        funs.dedup();
        Ok(Self { funs })
    }

    pub fn funs(&self) -> &[SeqFun] {
        &self.funs
    }

    pub fn len(&self) -> usize {
        self.funs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funs.is_empty()
    }

    pub fn r_max(&self) -> usize {
        self.funs[0].r_max()
    }

    pub fn check_in(&self, sgp: &FiniteSemigroup) -> Result<(), Error> {
        self.funs.iter().try_for_each(|f| f.check_in(sgp))
    }

    /// Nonempty sub-family picked by indices into [`Self::funs`].
    pub fn subfamily(&self, pick: &[usize]) -> Result<Self, Error> {
        Self::new(pick.iter().filter_map(|&i| self.funs.get(i).cloned()).collect())
    }
}

/// `(m, a, t)` with `|a| = m + 1` and `t` strictly increasing from 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrWitness {
    a: Vec<Element>,
    t: Vec<u32>,
}

pub(crate) fn check_shape(a: &[Element], t: &[u32]) -> Result<(), Error> {
    if a.len() != t.len() + 1 {
        return Err(Error::LengthMismatch { word: a.len(), indices: t.len() });
    }
    if t.first() == Some(&0) || t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::IndicesNotIncreasing);
    }
    Ok(())
}

impl CrWitness {
    pub fn new(a: Vec<Element>, t: Vec<u32>) -> Result<Self, Error> {
        if t.is_empty() {
            return Err(Error::EmptyWitness);
        }
        check_shape(&a, &t)?;
        Ok(Self { a, t })
    }

    pub fn m(&self) -> usize {
        self.t.len()
    }

    pub fn word(&self) -> &[Element] {
        &self.a
    }

    pub fn indices(&self) -> &[u32] {
        &self.t
    }

    /// Largest index `t(m)`.
    pub fn reach(&self) -> u32 {
        *self.t.last().expect("m >= 1")
    }

    pub fn index_set(&self) -> Result<FinSet, Error> {
        FinSet::from_members(self.t.iter().copied())
    }
}

/// Unchecked interleaved product; `a.len() == t.len() + 1` is assumed.
#[inline]
pub(crate) fn interleave(sgp: &FiniteSemigroup, a: &[Element], f: &SeqFun, t: &[u32]) -> Element {
    t.iter()
        .zip(&a[1..])
        .fold(a[0], |acc, (&pos, &next)| sgp.mul(sgp.mul(acc, f.at(pos)), next))
}

/// `a(1)·f(t(1))·a(2)·…·f(t(m))·a(m+1)`.
pub fn evaluate_interleaved(
    sgp: &FiniteSemigroup,
    a: &[Element],
    f: &SeqFun,
    t: &[u32],
) -> Result<Element, Error> {
    check_shape(a, t)?;
    for &e in a {
        sgp.element(e.0)?;
    }
    for &pos in t {
        sgp.element(f.at(pos).0)?;
    }
    Ok(interleave(sgp, a, f, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCheck {
    Verified,
    /// The first function (by family order) whose product leaves the target.
    Fails { fun: usize, value: Element },
}

impl WitnessCheck {
    pub fn is_verified(self) -> bool {
        self == WitnessCheck::Verified
    }
}

pub fn verify_witness(
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    fam: &FunFamily,
    w: &CrWitness,
) -> Result<WitnessCheck, Error> {
    if target.universe() != sgp.order() {
        return Err(Error::DomainMismatch { expected: sgp.order(), found: target.universe() });
    }
    fam.check_in(sgp)?;
    for (i, f) in fam.funs().iter().enumerate() {
        let value = evaluate_interleaved(sgp, w.word(), f, w.indices())?;
        if !target.contains(value) {
            return Ok(WitnessCheck::Fails { fun: i, value });
        }
    }
    Ok(WitnessCheck::Verified)
}

/// Lexicographically least word `a` with every `f`'s interleaved product
/// over `t` in the target, if one exists.
///
/// Depth-first over letters in index order; states are the per-function
/// partial products, and states proven dead at a depth are remembered.
pub(crate) fn least_word(
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    funs: &[SeqFun],
    t: &[u32],
) -> Option<Vec<Element>> {
    if target.is_empty() || funs.is_empty() {
        return None;
    }
    // columns[j][i] = funs[i](t(j))
    let columns: Vec<Vec<Element>> = t.iter().map(|&p| funs.iter().map(|f| f.at(p)).collect()).collect();
    let mut search = WordSearch {
        sgp,
        target,
        columns: &columns,
        m: t.len(),
        width: funs.len(),
        dead: vec![BTreeSet::new(); t.len() + 1],
        word: Vec::with_capacity(t.len() + 1),
    };
    search.descend(0, &[]).then_some(search.word)
}

struct WordSearch<'a> {
    sgp: &'a FiniteSemigroup,
    target: &'a ElementSet,
    columns: &'a [Vec<Element>],
    m: usize,
    /// Number of functions tracked in parallel.
    width: usize,
    dead: Vec<BTreeSet<Vec<Element>>>,
    word: Vec<Element>,
}

impl WordSearch<'_> {
    /// Chooses letter `depth` given the partial products `state` (empty
    /// before the first letter).
    fn descend(&mut self, depth: usize, state: &[Element]) -> bool {
        if depth > 0 && self.dead[depth].contains(state) {
            return false;
        }
        for letter in self.sgp.elements() {
            let next: Vec<Element> = if depth == 0 {
                vec![letter; self.width]
            } else {
                state.iter().map(|&s| self.sgp.mul(s, letter)).collect()
            };
            if depth == self.m {
                if next.iter().all(|&v| self.target.contains(v)) {
                    self.word.push(letter);
                    return true;
                }
                continue;
            }
            let next: Vec<Element> = next
                .iter()
                .zip(&self.columns[depth])
                .map(|(&s, &v)| self.sgp.mul(s, v))
                .collect();
            self.word.push(letter);
            if self.descend(depth + 1, &next) {
                return true;
            }
            self.word.pop();
        }
        if depth > 0 {
            self.dead[depth].insert(state.to_vec());
        }
        false
    }
}

/// Rough node count for one word search with `m` indices.
fn word_cost(order: usize, fam: usize, m: usize) -> u128 {
    (m as u128 + 1).saturating_mul(pow_sat(order as u128, fam as u32 + 1).min(pow_sat(order as u128, m as u32 + 1)))
}

pub(crate) fn witness_cost(order: usize, fam: usize, r: usize) -> u128 {
    (1..=r)
        .map(|m| binomial(r as u128, m as u128).saturating_mul(word_cost(order, fam, m)))
        .fold(0, u128::saturating_add)
}

pub(crate) fn find_witness_unguarded(
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    funs: &[SeqFun],
    r: usize,
) -> Option<CrWitness> {
    for m in 1..=r {
        for combo in Combinations::new(r, m) {
            let t: Vec<u32> = combo.iter().map(|&i| i as u32 + 1).collect();
            if let Some(a) = least_word(sgp, target, funs, &t) {
                return Some(CrWitness { a, t });
            }
        }
    }
    None
}

/// The canonically least witness with `t(m) ≤ r`, if any.
pub fn find_witness<E: Executor>(
    ctx: &Ctx<E>,
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    fam: &FunFamily,
    r: usize,
) -> Result<Option<CrWitness>, Error> {
    fam.check_in(sgp)?;
    ctx.budget.admit(witness_cost(sgp.order(), fam.len(), r))?;
    Ok(find_witness_unguarded(sgp, target, fam.funs(), r))
}

/// Lexicographic enumeration of all tables `{1..r} → S`.
pub struct TableFuns {
    order: usize,
    r: usize,
    total: u128,
}

impl TableFuns {
    pub fn new(order: usize, r: usize) -> Self {
        Self { order, r, total: pow_sat(order as u128, r as u32) }
    }

    pub fn count(&self) -> u128 {
        self.total
    }

    /// The `idx`-th table: base-`order` digits of `idx`, position 1 most
    /// significant. Default is element 0.
    pub fn nth(&self, mut idx: u128) -> SeqFun {
        let mut values = vec![Element(0); self.r];
        for slot in values.iter_mut().rev() {
            *slot = Element((idx % self.order as u128) as u32);
            idx /= self.order as u128;
        }
        SeqFun { values, default: Element(0) }
    }
}

/// Enumerated families over `{1..r}`: all of size `min(k, |S|^r)`.
pub(crate) fn family_stream(
    order: usize,
    r: usize,
    k: usize,
) -> Result<(impl Iterator<Item = Vec<SeqFun>>, usize, u128), Error> {
    let tables = TableFuns::new(order, r);
    let total = tables.count();
    if total > usize::MAX as u128 / 2 {
        return Err(Error::CostExceeded { estimate: total, limit: usize::MAX as u128 / 2 });
    }
    let size = k.min(total as usize);
    let count = binomial(total, size as u128);
    let stream = Combinations::new(total as usize, size)
        .map(move |c| c.iter().map(|&i| tables.nth(i as u128)).collect::<Vec<_>>());
    Ok((stream, size, count))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrCheck {
    /// Every enumerated family has a witness.
    Holds { families: u128 },
    /// Canonically first family without a witness.
    Counterexample(FunFamily),
}

impl CrCheck {
    pub fn holds(&self) -> bool {
        matches!(self, CrCheck::Holds { .. })
    }
}

/// Whether every family of `k` tables over `{1..r}` has a witness with
/// `t(m) ≤ r`.
///
/// Only families of size exactly `k` are enumerated: a witness for `F`
/// serves every nonempty subfamily. When fewer than `k` tables exist at all,
/// the single largest family size is used.
pub fn check_cr_at<E: Executor>(
    ctx: &Ctx<E>,
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    k: usize,
    r: usize,
) -> Result<CrCheck, Error> {
    if k == 0 || r == 0 {
        return Err(Error::ParameterOutOfRange { param: 0, min: 1, max: usize::MAX });
    }
    let (mut stream, size, count) = family_stream(sgp.order(), r, k)?;
    if target.is_empty() {
        let first = stream.next().expect("at least one table exists");
        return Ok(CrCheck::Counterexample(FunFamily::new(first)?));
    }
    ctx.budget
        .admit(count.saturating_mul(witness_cost(sgp.order(), size, r)))?;
    let hit = ctx.first_in_stream(stream, |funs| {
        find_witness_unguarded(sgp, target, funs, r).is_none().then_some(())
    });
    Ok(match hit {
        Some((_, funs, ())) => CrCheck::Counterexample(FunFamily::new(funs)?),
        None => CrCheck::Holds { families: count },
    })
}

/// Least `r ≤ r_max` at which [`check_cr_at`] holds.
pub fn find_r<E: Executor>(
    ctx: &Ctx<E>,
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    k: usize,
    r_max: usize,
) -> Result<Option<usize>, Error> {
    if target.is_empty() {
        return Ok(None);
    }
    for r in 1..=r_max {
        if check_cr_at(ctx, sgp, target, k, r)?.holds() {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// The index sets `L ⊆ {1..n}` realisable by one word for the whole family,
/// each with its lexicographically least word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSet {
    domain_bound: usize,
    family: SetFamily,
    /// Aligned with `family`.
    witnesses: Vec<Vec<Element>>,
}

impl ThetaSet {
    pub fn domain_bound(&self) -> usize {
        self.domain_bound
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn witness(&self, l: FinSet) -> Option<&[Element]> {
        self.family.position(l).map(|i| self.witnesses[i].as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (FinSet, &[Element])> {
        self.family.iter().zip(self.witnesses.iter().map(Vec::as_slice))
    }

    /// Re-evaluates every stored word.
    pub fn verify(&self, sgp: &FiniteSemigroup, target: &ElementSet, fam: &FunFamily) -> Result<bool, Error> {
        for (l, a) in self.iter() {
            let w = CrWitness::new(a.to_vec(), l.to_vec())?;
            if !verify_witness(sgp, target, fam, &w)?.is_verified() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn theta_cost(order: usize, fam: usize, n: usize) -> u128 {
    (1..=n)
        .map(|m| binomial(n as u128, m as u128).saturating_mul(word_cost(order, fam, m)))
        .fold(0, u128::saturating_add)
}

pub(crate) fn compute_theta_unguarded<E: Executor>(
    exec: &E,
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    funs: &[SeqFun],
    n: usize,
) -> ThetaSet {
    let candidates = SetFamily::all_subsets(n as u32).expect("n checked by caller");
    let words = exec.map(candidates.sets(), |l| least_word(sgp, target, funs, &l.to_vec()));
    let (sets, witnesses): (Vec<FinSet>, Vec<Vec<Element>>) = candidates
        .iter()
        .zip(words)
        .filter_map(|(l, w)| w.map(|w| (l, w)))
        .unzip();
    // candidates were canonical, so the filtered list still is
    ThetaSet { domain_bound: n, family: SetFamily::new(sets), witnesses }
}

pub fn compute_theta<E: Executor>(
    ctx: &Ctx<E>,
    sgp: &FiniteSemigroup,
    target: &ElementSet,
    fam: &FunFamily,
    n: usize,
) -> Result<ThetaSet, Error> {
    if n > HARD_ENUM_LIMIT {
        return Err(Error::UniverseTooLarge { n, limit: HARD_ENUM_LIMIT });
    }
    fam.check_in(sgp)?;
    ctx.budget.admit(theta_cost(sgp.order(), fam.len(), n))?;
    Ok(compute_theta_unguarded(&ctx.exec, sgp, target, fam.funs(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Family;

    fn e(i: u32) -> Element {
        Element(i)
    }

    fn z(n: usize) -> FiniteSemigroup {
        Family::Cyclic(n).build().unwrap()
    }

    fn set(sg: &FiniteSemigroup, idx: &[u32]) -> ElementSet {
        ElementSet::from_indices(sg, idx.iter().copied()).unwrap()
    }

    fn konst(v: u32, r: usize) -> SeqFun {
        SeqFun::constant(e(v), r).unwrap()
    }

    fn fam(funs: Vec<SeqFun>) -> FunFamily {
        FunFamily::new(funs).unwrap()
    }

    fn ctx() -> Ctx {
        Ctx::default()
    }

    fn fs(m: &[u32]) -> FinSet {
        FinSet::from_members(m.iter().copied()).unwrap()
    }

    #[test]
    fn seqfun_reads_default_past_table() {
        let f = SeqFun::new(vec![e(1), e(2)], e(0)).unwrap();
        assert_eq!((f.at(1), f.at(2), f.at(3), f.at(100)), (e(1), e(2), e(0), e(0)));
        assert_eq!(SeqFun::new(vec![], e(0)), Err(Error::EmptyTable));
    }

    #[test]
    fn family_dedups_and_checks_domain() {
        let f = fam(vec![konst(1, 2), konst(0, 2), konst(1, 2)]);
        assert_eq!(f.len(), 2);
        assert_eq!(
            FunFamily::new(vec![konst(1, 2), konst(1, 3)]),
            Err(Error::DomainMismatch { expected: 2, found: 3 })
        );
        assert_eq!(FunFamily::new(vec![]), Err(Error::EmptyFamily));
    }

    #[test]
    fn interleaved_examples() {
        let t = Family::Trivial.build().unwrap();
        assert_eq!(evaluate_interleaved(&t, &[e(0), e(0)], &konst(0, 1), &[1]), Ok(e(0)));
        let lz = Family::LeftZero(3).build().unwrap();
        let f = SeqFun::new(vec![e(2), e(1), e(0)], e(1)).unwrap();
        assert_eq!(evaluate_interleaved(&lz, &[e(1), e(2), e(0)], &f, &[1, 3]), Ok(e(1)));
        let z3 = z(3);
        let f = SeqFun::new(vec![e(2)], e(0)).unwrap();
        assert_eq!(evaluate_interleaved(&z3, &[e(1), e(2)], &f, &[1]), Ok(e(2)));
        assert_eq!(
            evaluate_interleaved(&z3, &[e(1)], &f, &[1]),
            Err(Error::LengthMismatch { word: 1, indices: 1 })
        );
        assert_eq!(
            evaluate_interleaved(&z3, &[e(1), e(1), e(1)], &f, &[2, 2]),
            Err(Error::IndicesNotIncreasing)
        );
        assert_eq!(evaluate_interleaved(&z3, &[e(1), e(1)], &f, &[0]), Err(Error::IndicesNotIncreasing));
    }

    #[test]
    fn verify_examples() {
        let lz = Family::LeftZero(3).build().unwrap();
        let w = CrWitness::new(vec![e(2), e(0)], vec![1]).unwrap();
        let any = fam(vec![konst(0, 1), konst(1, 1), konst(2, 1)]);
        assert_eq!(verify_witness(&lz, &set(&lz, &[2]), &any, &w), Ok(WitnessCheck::Verified));

        let z2 = z(2);
        let a0 = set(&z2, &[0]);
        let w = CrWitness::new(vec![e(1), e(0)], vec![1]).unwrap();
        assert_eq!(verify_witness(&z2, &a0, &fam(vec![konst(1, 1)]), &w), Ok(WitnessCheck::Verified));
        let both = fam(vec![konst(0, 1), konst(1, 1)]);
        for a in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let w = CrWitness::new(vec![e(a[0]), e(a[1])], vec![1]).unwrap();
            assert!(!verify_witness(&z2, &a0, &both, &w).unwrap().is_verified());
        }
        assert!(CrWitness::new(vec![e(0)], vec![]).is_err());
    }

    #[test]
    fn find_witness_examples() {
        let t = Family::Trivial.build().unwrap();
        let w = find_witness(&ctx(), &t, &ElementSet::full(1), &fam(vec![konst(0, 1)]), 1).unwrap().unwrap();
        assert_eq!((w.word(), w.indices()), (&[e(0), e(0)][..], &[1u32][..]));

        let z2 = z(2);
        let a0 = set(&z2, &[0]);
        let both = fam(vec![konst(0, 2), konst(1, 2)]);
        let w = find_witness(&ctx(), &z2, &a0, &both, 2).unwrap().unwrap();
        assert_eq!(w.indices(), &[1, 2]);
        assert_eq!(w.word(), &[e(0), e(0), e(0)]);
        let both1 = fam(vec![konst(0, 1), konst(1, 1)]);
        assert_eq!(find_witness(&ctx(), &z2, &a0, &both1, 1), Ok(None));
    }

    #[test]
    fn check_cr_examples() {
        let t = Family::Trivial.build().unwrap();
        for k in 1..=3 {
            assert!(check_cr_at(&ctx(), &t, &ElementSet::full(1), k, 1).unwrap().holds());
        }
        for n in 1..=3 {
            let lz = Family::LeftZero(n).build().unwrap();
            for k in 1..=3 {
                assert!(check_cr_at(&ctx(), &lz, &set(&lz, &[0]), k, 1).unwrap().holds());
            }
        }
        let z2 = z(2);
        assert_eq!(
            check_cr_at(&ctx(), &z2, &set(&z2, &[0]), 2, 1),
            Ok(CrCheck::Counterexample(fam(vec![konst(0, 1), SeqFun::new(vec![e(1)], e(0)).unwrap()])))
        );
        assert!(matches!(
            check_cr_at(&ctx(), &z2, &ElementSet::empty(2), 1, 2),
            Ok(CrCheck::Counterexample(_))
        ));
    }

    #[test]
    fn find_r_examples() {
        let t = Family::Trivial.build().unwrap();
        assert_eq!(find_r(&ctx(), &t, &ElementSet::full(1), 3, 4), Ok(Some(1)));
        let z2 = z(2);
        let a0 = set(&z2, &[0]);
        assert_eq!(find_r(&ctx(), &z2, &a0, 1, 4), Ok(Some(1)));
        assert_eq!(find_r(&ctx(), &z2, &a0, 2, 4), Ok(Some(2)));
        assert_eq!(find_r(&ctx(), &z2, &ElementSet::empty(2), 1, 4), Ok(None));
    }

    #[test]
    fn theta_examples() {
        let lz = Family::LeftZero(2).build().unwrap();
        let any = fam(vec![konst(0, 3), konst(1, 3)]);
        let th = compute_theta(&ctx(), &lz, &set(&lz, &[1]), &any, 3).unwrap();
        assert_eq!(th.family().len(), 7);
        assert!(th.verify(&lz, &set(&lz, &[1]), &any).unwrap());

        let z2 = z(2);
        let a0 = set(&z2, &[0]);
        let both = fam(vec![konst(0, 3), konst(1, 3)]);
        let th = compute_theta(&ctx(), &z2, &a0, &both, 3).unwrap();
        assert_eq!(th.family().sets(), &[fs(&[1, 2]), fs(&[1, 3]), fs(&[2, 3])]);
        assert!(th.verify(&z2, &a0, &both).unwrap());

        let one = fam(vec![konst(1, 2)]);
        let th = compute_theta(&ctx(), &z2, &a0, &one, 2).unwrap();
        assert_eq!(th.family().len(), 3);
        assert_eq!(th.witness(fs(&[1])), Some(&[e(0), e(1)][..]));
    }

    #[test]
    fn guards_refuse_oversized_searches() {
        let s = z(6);
        let tight = Ctx::new(crate::Sequential, crate::Budget::new(1000));
        let err = check_cr_at(&tight, &s, &set(&s, &[0]), 2, 3).unwrap_err();
        assert!(err.is_cost_guard());
        assert!(compute_theta(&ctx(), &s, &set(&s, &[0]), &fam(vec![konst(0, 1)]), 21).is_err());
    }

    #[test]
    fn r_monotone_on_tiny_semigroups() {
        let sgs = [
            Family::Trivial.build().unwrap(),
            z(2),
            Family::LeftZero(2).build().unwrap(),
            Family::RightZero(2).build().unwrap(),
            Family::ModMult(2).build().unwrap(),
        ];
        for sg in &sgs {
            for mask in 1u32..(1 << sg.order()) {
                let a = ElementSet::from_indices(sg, (0..sg.order() as u32).filter(|i| mask >> i & 1 == 1)).unwrap();
                for k in 1..=2 {
                    let at = |r| check_cr_at(&ctx(), sg, &a, k, r).unwrap().holds();
                    for r in 1..=2 {
                        if at(r) {
                            assert!(at(r + 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_survive_subfamilies() {
        let z3 = z(3);
        let a = set(&z3, &[0]);
        let big = fam(vec![
            SeqFun::new(vec![e(1), e(2), e(0)], e(0)).unwrap(),
            SeqFun::new(vec![e(2), e(0), e(1)], e(0)).unwrap(),
            konst(1, 3),
        ]);
        let w = find_witness(&ctx(), &z3, &a, &big, 3).unwrap().unwrap();
        assert!(verify_witness(&z3, &a, &big, &w).unwrap().is_verified());
        for pick in [&[0][..], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]] {
            let sub = big.subfamily(pick).unwrap();
            assert!(verify_witness(&z3, &a, &sub, &w).unwrap().is_verified());
        }
    }
}
