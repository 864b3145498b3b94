//! Nonempty finite subsets of the positive integers, block sequences and
//! their finite unions.
//!
//! A [`FinSet`] is a bitmask over `{1..=64}`: bit `i - 1` stands for `i`.
//! Sets order canonically by largest member, then size, then mask value;
//! block sequences order lexicographically by their blocks. Every
//! enumeration below follows these orders, so "the first counterexample" is
//! well defined.
//!
//! IP_r* checks only ever quantify over block systems inside a bounded
//! universe `{1..=n}`; a passing verdict means "IP_r* within `n`" and says
//! nothing about the infinite property.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::seq::index;
use rand::Rng;

use crate::exec::{binomial, Ctx, Executor};
use crate::Error;

/// Hard cap on the universe size of any [`FinSet`].
pub const MAX_MEMBER: u32 = 64;
/// Default universe cap for exhaustive block-system enumeration.
pub const DEFAULT_ENUM_LIMIT: usize = 14;
/// Enumeration refuses universes above this even when asked to.
pub const HARD_ENUM_LIMIT: usize = 20;
/// `fu_enumerate` refuses sequences with more blocks than this.
pub const MAX_FU_BLOCKS: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FinSet(u64);

impl FinSet {
    pub fn from_mask(mask: u64) -> Result<Self, Error> {
        if mask == 0 {
            Err(Error::EmptySet)
        } else {
            Ok(Self(mask))
        }
    }

    pub fn from_members<I>(members: I) -> Result<Self, Error>
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut mask = 0u64;
        for v in members {
            let v = v.into();
            if v == 0 || v > MAX_MEMBER as u64 {
                return Err(Error::MemberOutOfRange { value: v });
            }
            mask |= 1 << (v - 1);
        }
        Self::from_mask(mask)
    }

    pub fn singleton(v: u32) -> Result<Self, Error> {
        Self::from_members([v])
    }

    /// `{1..=n}`.
    pub fn initial(n: u32) -> Result<Self, Error> {
        match n {
            0 => Err(Error::EmptySet),
            64 => Ok(Self(u64::MAX)),
            n if n < 64 => Ok(Self((1u64 << n) - 1)),
            n => Err(Error::MemberOutOfRange { value: n as u64 }),
        }
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn smallest(self) -> u32 {
        self.0.trailing_zeros() + 1
    }

    #[inline]
    pub fn largest(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    /// Never zero.
    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: u32) -> bool {
        (1..=MAX_MEMBER).contains(&v) && self.0 >> (v - 1) & 1 == 1
    }

    pub fn union(self, other: FinSet) -> FinSet {
        FinSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: FinSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: FinSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(v + 1)
    }
}

impl Ord for FinSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.largest()
            .cmp(&other.largest())
            .then(self.len().cmp(&other.len()))
            .then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for FinSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// All nonempty subsets of `{lo..=hi}` in canonical order.
fn subsets_of_interval(lo: u32, hi: u32) -> Vec<FinSet> {
    let mut out = Vec::new();
    for max in lo..=hi {
        let below = max - lo;
        let mut group: Vec<FinSet> = (0u64..1 << below)
            .map(|low| FinSet((low << (lo - 1)) | 1 << (max - 1)))
            .collect();
        group.sort_unstable();
        out.extend(group);
    }
    out
}

/// An ordered sequence of blocks with `max H_n < min H_{n+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSeq(Vec<FinSet>);

/// `Err(BlockOrder { index })` names the first block that starts too early.
pub fn validate_blockseq(blocks: &[FinSet]) -> Result<(), Error> {
    if blocks.is_empty() {
        return Err(Error::NoBlocks);
    }
    match blocks.windows(2).position(|w| w[0].largest() >= w[1].smallest()) {
        Some(i) => Err(Error::BlockOrder { index: i + 1 }),
        None => Ok(()),
    }
}

impl BlockSeq {
    pub fn new(blocks: Vec<FinSet>) -> Result<Self, Error> {
        validate_blockseq(&blocks)?;
        Ok(Self(blocks))
    }

    /// `⟨{1},{2},...,{r}⟩`.
    pub fn singletons(r: u32) -> Result<Self, Error> {
        let blocks = (1..=r).map(FinSet::singleton).collect::<Result<Vec<_>, _>>()?;
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[FinSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> FinSet {
        self.0.iter().copied().reduce(FinSet::union).expect("nonempty")
    }

    /// The first `u` blocks, which form a valid sequence of their own.
    pub fn prefix(&self, u: usize) -> Option<BlockSeq> {
        (1..=self.len()).contains(&u).then(|| BlockSeq(self.0[..u].to_vec()))
    }

    /// Whether `set` is a union of a nonempty selection of blocks.
    pub fn is_finite_union(&self, set: FinSet) -> bool {
        set.is_subset(self.support())
            && self.0.iter().all(|&h| h.is_disjoint(set) || h.is_subset(set))
    }

    /// The block indices (0-based) whose union is `set`, if it is one.
    pub fn decompose(&self, set: FinSet) -> Option<Vec<usize>> {
        self.is_finite_union(set).then(|| {
            self.0
                .iter()
                .enumerate()
                .filter(|(_, h)| h.is_subset(set))
                .map(|(i, _)| i)
                .collect()
        })
    }

    /// Unions over every nonempty selection, indexed by selection bitmask.
    fn unions(&self) -> impl Iterator<Item = FinSet> + '_ {
        let r = self.0.len();
        (1u64..1 << r).map(move |sel| {
            FinSet(
                Members(sel)
                    .map(|i| self.0[i as usize - 1].mask())
                    .fold(0, |acc, m| acc | m),
            )
        })
    }
}

impl fmt::Debug for BlockSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b:?}")?;
        }
        f.write_str("⟩")
    }
}

/// A deduplicated collection of sets kept in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SetFamily(Vec<FinSet>);

impl SetFamily {
    pub fn new(mut sets: Vec<FinSet>) -> Self {
        sets.sort_unstable();
        sets.dedup();
        Self(sets)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Every nonempty subset of `{1..=n}`.
    pub fn all_subsets(n: u32) -> Result<Self, Error> {
        if n as usize > HARD_ENUM_LIMIT {
            return Err(Error::UniverseTooLarge { n: n as usize, limit: HARD_ENUM_LIMIT });
        }
        Ok(Self(if n == 0 { Vec::new() } else { subsets_of_interval(1, n) }))
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = FinSet> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: FinSet) -> bool {
        self.0.binary_search(&s).is_ok()
    }

    pub fn position(&self, s: FinSet) -> Option<usize> {
        self.0.binary_search(&s).ok()
    }

    pub fn first(&self) -> Option<FinSet> {
        self.0.first().copied()
    }

    pub fn intersect(&self, other: &SetFamily) -> SetFamily {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        SetFamily(out)
    }

    /// Members lying inside `{1..=n}`.
    pub fn restrict(&self, n: u32) -> SetFamily {
        SetFamily(self.0.iter().copied().filter(|s| s.largest() <= n).collect())
    }
}

impl FromIterator<FinSet> for SetFamily {
    fn from_iter<I: IntoIterator<Item = FinSet>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// All `2^r - 1` finite unions of the blocks, canonically ordered.
pub fn fu_enumerate(b: &BlockSeq) -> Result<SetFamily, Error> {
    if b.len() > MAX_FU_BLOCKS {
        return Err(Error::TooManyBlocks { r: b.len(), limit: MAX_FU_BLOCKS });
    }
    Ok(SetFamily::new(b.unions().collect()))
}

/// Stream of every `r`-block sequence inside `{1..=n}`, in canonical order.
///
/// The order is lexicographic over blocks, each block position ranging over
/// candidate sets in canonical [`FinSet`] order.
pub struct BlockSeqs {
    r: usize,
    n: u32,
    /// `cands[lo - 1]`: nonempty subsets of `{lo..=n}`.
    cands: Vec<Vec<FinSet>>,
    pos: Vec<usize>,
    cur: Vec<FinSet>,
    started: bool,
    done: bool,
}

pub fn enumerate_blockseqs(r: usize, n: usize) -> Result<BlockSeqs, Error> {
    enumerate_blockseqs_with_limit(r, n, DEFAULT_ENUM_LIMIT)
}

pub fn enumerate_blockseqs_with_limit(r: usize, n: usize, limit: usize) -> Result<BlockSeqs, Error> {
    let limit = limit.min(HARD_ENUM_LIMIT);
    if n > limit {
        return Err(Error::UniverseTooLarge { n, limit });
    }
    let empty = r == 0 || r > n;
    let cands = if empty {
        Vec::new()
    } else {
        (1..=n as u32).map(|lo| subsets_of_interval(lo, n as u32)).collect()
    };
    Ok(BlockSeqs {
        r,
        n: n as u32,
        cands,
        pos: vec![0; r],
        cur: Vec::with_capacity(r),
        started: false,
        done: empty,
    })
}

impl BlockSeqs {
    /// Candidate at `pos[d]` for depth `d`, if it still leaves room for the
    /// remaining blocks.
    fn candidate(&self, d: usize) -> Option<FinSet> {
        let lo = if d == 0 { 1 } else { self.cur[d - 1].largest() + 1 };
        let room = self.n - (self.r - 1 - d) as u32;
        if lo > room {
            return None;
        }
        self.cands[lo as usize - 1]
            .get(self.pos[d])
            .copied()
            .filter(|c| c.largest() <= room)
    }

    fn fill_from(&mut self, d: usize) -> bool {
        for depth in d..self.r {
            self.pos[depth] = 0;
            match self.candidate(depth) {
                Some(c) => self.cur.push(c),
                None => return false,
            }
        }
        true
    }
}

impl Iterator for BlockSeqs {
    type Item = BlockSeq;

    fn next(&mut self) -> Option<BlockSeq> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if !self.fill_from(0) {
                self.done = true;
                return None;
            }
            return Some(BlockSeq(self.cur.clone()));
        }
        let mut d = self.r - 1;
        loop {
            self.cur.truncate(d);
            self.pos[d] += 1;
            if let Some(c) = self.candidate(d) {
                self.cur.push(c);
                let ok = self.fill_from(d + 1);
                debug_assert!(ok, "room check guarantees deeper blocks exist");
                return Some(BlockSeq(self.cur.clone()));
            }
            if d == 0 {
                self.done = true;
                return None;
            }
            d -= 1;
        }
    }
}

/// Number of `r`-block sequences inside `{1..=n}`: choose the used members
/// `U` and cut their sorted list into `r` nonempty runs.
pub fn count_blockseqs(r: usize, n: usize) -> u128 {
    if r == 0 || r > n {
        return 0;
    }
    (r..=n)
        .map(|u| binomial(n as u128, u as u128).saturating_mul(binomial(u as u128 - 1, r as u128 - 1)))
        .fold(0u128, u128::saturating_add)
}

/// Outcome of an IP_r* check restricted to a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpStar {
    /// Every probed system's finite unions meet the family.
    Holds { systems: u128 },
    /// First system (canonical or first sampled) whose unions miss the family.
    Fails(BlockSeq),
}

impl IpStar {
    pub fn holds(&self) -> bool {
        matches!(self, IpStar::Holds { .. })
    }
}

/// Membership test tuned for the family at hand.
struct Probe<'a> {
    family: &'a SetFamily,
    /// Bitmap over masks, present when the universe is small enough.
    bitmap: Option<Vec<u64>>,
}

impl<'a> Probe<'a> {
    fn new(family: &'a SetFamily, n: u32) -> Self {
        let bitmap = (n as usize <= HARD_ENUM_LIMIT).then(|| {
            let mut bits = vec![0u64; ((1usize << n) >> 6) + 1];
            for s in family.iter().filter(|s| s.largest() <= n) {
                bits[(s.mask() >> 6) as usize] |= 1 << (s.mask() & 63);
            }
            bits
        });
        Self { family, bitmap }
    }

    fn meets(&self, b: &BlockSeq) -> bool {
        match &self.bitmap {
            Some(bits) if b.len() < 16 && (1usize << b.len()) <= self.family.len() => b
                .unions()
                .any(|u| bits[(u.mask() >> 6) as usize] >> (u.mask() & 63) & 1 == 1),
            _ => self.family.iter().any(|s| b.is_finite_union(s)),
        }
    }
}

/// Exhaustive IP_r* check over every `r`-block system inside `{1..=n}`.
pub fn is_ip_r_star_within<E: Executor>(
    ctx: &Ctx<E>,
    family: &SetFamily,
    r: usize,
    n: usize,
) -> Result<IpStar, Error> {
    let systems = enumerate_blockseqs_with_limit(r, n, HARD_ENUM_LIMIT)?;
    let total = count_blockseqs(r, n);
    let per = (family.len() as u128).min(1u128 << r.min(64)).max(1);
    ctx.budget.admit(total.saturating_mul(per))?;
    let probe = Probe::new(family, n as u32);
    Ok(match ctx.first_in_stream(systems, |b| (!probe.meets(b)).then_some(())) {
        Some((_, b, ())) => IpStar::Fails(b),
        None => IpStar::Holds { systems: total },
    })
}

/// A random `r`-block system in `{1..=n}`: each member is used with
/// probability 1/2 (redrawn until at least `r` are used), and the sorted used
/// members are cut at `r - 1` uniformly chosen gaps.
pub fn random_blockseq<R: Rng + ?Sized>(rng: &mut R, r: usize, n: usize) -> Option<BlockSeq> {
    if r == 0 || r > n || n > MAX_MEMBER as usize {
        return None;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let used: Vec<u32> = loop {
        let mask = rng.gen::<u64>() & full;
        if mask.count_ones() as usize >= r {
            break Members(mask).collect();
        }
    };
    let mut cuts: Vec<usize> = index::sample(rng, used.len() - 1, r - 1).into_vec();
    cuts.sort_unstable();
    let mut blocks = Vec::with_capacity(r);
    let mut start = 0;
    for c in cuts.into_iter().map(|c| c + 1).chain([used.len()]) {
        blocks.push(FinSet::from_members(used[start..c].iter().copied()).expect("nonempty run"));
        start = c;
    }
    Some(BlockSeq(blocks))
}

/// Sampled IP_r* check for universes too large to enumerate (up to 64).
/// A `Holds` verdict here only covers the sampled systems.
pub fn sample_ip_r_star_within<R: Rng + ?Sized>(
    rng: &mut R,
    family: &SetFamily,
    r: usize,
    n: usize,
    samples: usize,
) -> Result<IpStar, Error> {
    if n > MAX_MEMBER as usize {
        return Err(Error::UniverseTooLarge { n, limit: MAX_MEMBER as usize });
    }
    let probe = Probe::new(family, n as u32);
    let mut probed = 0u128;
    for _ in 0..samples {
        let Some(b) = random_blockseq(rng, r, n) else { break };
        probed += 1;
        if !probe.meets(&b) {
            return Ok(IpStar::Fails(b));
        }
    }
    Ok(IpStar::Holds { systems: probed })
}
