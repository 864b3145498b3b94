//! CR witnesses in `S × T` assembled from the factors.
//!
//! For a family `F` over `S × T`, project to `G = {π₁∘f}` and `H = {π₂∘f}`,
//! compute the realisable index sets of each inside `{1..l}`, and take the
//! canonically least common `L`. Its stored words `a` (for `G`) and `b`
//! (for `H`) pair up letterwise to `c(j) = (a(j), b(j))`, which works for
//! all of `F` at once.
//!
//! No closed form for the intersection constant `l(u, v)` is used; `l` grows
//! from `max(r(A,k), r(B,k))` until the intersection is nonempty. The
//! estimators at the bottom probe `l(u, v)` empirically in small universes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cr::{compute_theta, find_r, verify_witness, CrWitness, FunFamily, ThetaSet, WitnessCheck};
use crate::exec::{Ctx, Executor};
use crate::finset::{count_blockseqs, is_ip_r_star_within, FinSet, SetFamily, HARD_ENUM_LIMIT};
use crate::semigroup::{direct_product, Element, ElementSet, FiniteSemigroup};
use crate::Error;

/// `{π_coord ∘ f : f ∈ F}`, deduplicated (it may shrink).
pub fn project_family(sgp: &FiniteSemigroup, fam: &FunFamily, coord: u8) -> Result<FunFamily, Error> {
    if sgp.factors().is_none() {
        return Err(Error::NotAProduct);
    }
    fam.check_in(sgp)?;
    let funs = fam
        .funs()
        .iter()
        .map(|f| match coord {
            1 => f.map(|e| sgp.project_left(e)),
            2 => f.map(|e| sgp.project_right(e)),
            c => Err(Error::BadCoordinate(c)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    FunFamily::new(funs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductWitness {
    /// Witness in `S × T`, letters encoded as product elements.
    pub witness: CrWitness,
    pub l_used: usize,
    /// The word placing every `π₁∘f` product in `A`.
    pub left: Vec<Element>,
    /// The word placing every `π₂∘f` product in `B`.
    pub right: Vec<Element>,
    pub l_start: usize,
}

/// Why no witness was found by `l_max`, as seen at `l_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductGap {
    pub l_max: usize,
    pub left_empty: bool,
    pub right_empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductOutcome {
    Found(ProductWitness),
    NotFound(ProductGap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductQuery {
    pub k: usize,
    pub l_max: usize,
    /// First `l` to try; `None` starts at `max(r(A,k), r(B,k))` when both
    /// are found within `l_max` and affordable, else at 1.
    pub l_start: Option<usize>,
}

#[allow(clippy::too_many_arguments)]
pub fn product_witness<E: Executor>(
    ctx: &Ctx<E>,
    s: &FiniteSemigroup,
    a: &ElementSet,
    t: &FiniteSemigroup,
    b: &ElementSet,
    fam: &FunFamily,
    query: ProductQuery,
) -> Result<ProductOutcome, Error> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyTarget);
    }
    if fam.len() > query.k {
        return Err(Error::FamilyTooLarge { size: fam.len(), k: query.k });
    }
    if query.l_max > HARD_ENUM_LIMIT {
        return Err(Error::UniverseTooLarge { n: query.l_max, limit: HARD_ENUM_LIMIT });
    }
    let st = direct_product(s, t)?;
    let target = a.product(b, &st)?;
    let g = project_family(&st, fam, 1)?;
    let h = project_family(&st, fam, 2)?;

    let l_start = match query.l_start {
        Some(l) => l.max(1),
        None => {
            let r = |sg, set| match find_r(ctx, sg, set, query.k, query.l_max) {
                Ok(r) => Ok(r),
                Err(e) if e.is_cost_guard() => Ok(None),
                Err(e) => Err(e),
            };
            match (r(s, a)?, r(t, b)?) {
                (Some(ra), Some(rb)) => ra.max(rb),
                _ => 1,
            }
        }
    };

    let mut last: Option<(ThetaSet, ThetaSet)> = None;
    for l in l_start..=query.l_max {
        let left = compute_theta(ctx, s, a, &g, l)?;
        let right = compute_theta(ctx, t, b, &h, l)?;
        if let Some(set) = left.family().intersect(right.family()).first() {
            let aw = left.witness(set).expect("member of left").to_vec();
            let bw = right.witness(set).expect("member of right").to_vec();
            let c = aw
                .iter()
                .zip(&bw)
                .map(|(&x, &y)| st.pair(x, y))
                .collect::<Result<Vec<_>, _>>()?;
            let witness = CrWitness::new(c, set.to_vec())?;
            if verify_witness(&st, &target, fam, &witness)? != WitnessCheck::Verified {
                return Err(Error::Internal("paired witness left A x B"));
            }
            return Ok(ProductOutcome::Found(ProductWitness { witness, l_used: l, left: aw, right: bw, l_start }));
        }
        last = Some((left, right));
    }
    Ok(ProductOutcome::NotFound(ProductGap {
        l_max: query.l_max,
        left_empty: last.as_ref().is_none_or(|(x, _)| x.family().is_empty()),
        right_empty: last.as_ref().is_none_or(|(_, y)| y.family().is_empty()),
    }))
}

/// Least `l ≤ n` at which the family is IP_l* within `{1..n}`.
pub fn least_ip_star_level<E: Executor>(ctx: &Ctx<E>, fam: &SetFamily, n: usize) -> Result<Option<usize>, Error> {
    for l in 1..=n {
        if is_ip_r_star_within(ctx, fam, l, n)?.holds() {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// Which pairs of families an estimate ranged over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeClass {
    /// Every pair of suffixes of the canonical order on `P_f({1..n})`
    /// (families `{L : L ⪰ θ}`), the full family included.
    CanonicalSuffixes,
    /// Seeded random pairs, each family greedily thinned to a minimal
    /// IP_u* (resp. IP_v*) family within `{1..n}`.
    RandomMinimal { samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Report {
    pub u: usize,
    pub v: usize,
    pub n: usize,
    pub class: ProbeClass,
    pub pairs_probed: u128,
    /// Pairs with `X` IP_u* and `Y` IP_v* within `n`.
    pub pairs_admissible: u128,
    /// Admissible pairs whose intersection is not IP_l* for any `l ≤ n`.
    pub pairs_unbounded: u128,
    /// Largest least-`l` over admissible pairs: a lower bound for `l(u, v)`
    /// as far as this universe can see.
    pub bound: Option<usize>,
    pub witness: Option<(SetFamily, SetFamily)>,
}

struct LevelCache<'c, E> {
    ctx: &'c Ctx<E>,
    n: usize,
    seen: BTreeMap<Vec<u64>, Option<usize>>,
}

impl<E: Executor> LevelCache<'_, E> {
    fn level(&mut self, fam: &SetFamily) -> Result<Option<usize>, Error> {
        let key: Vec<u64> = fam.iter().map(FinSet::mask).collect();
        if let Some(&l) = self.seen.get(&key) {
            return Ok(l);
        }
        let l = least_ip_star_level(self.ctx, fam, self.n)?;
        self.seen.insert(key, l);
        Ok(l)
    }
}

fn check_uvn(u: usize, v: usize, n: usize, limit: usize) -> Result<(), Error> {
    if u == 0 || v == 0 || u > n || v > n {
        return Err(Error::ParameterOutOfRange { param: u.max(v), min: 1, max: n });
    }
    if n > limit {
        return Err(Error::UniverseTooLarge { n, limit });
    }
    Ok(())
}

struct Tally {
    report: Lemma2Report,
}

impl Tally {
    fn record(&mut self, x: &SetFamily, y: &SetFamily, level: Option<usize>) {
        self.report.pairs_admissible += 1;
        match level {
            None => self.report.pairs_unbounded += 1,
            Some(l) if self.report.bound.is_none_or(|b| l > b) => {
                self.report.bound = Some(l);
                self.report.witness = Some((x.clone(), y.clone()));
            }
            Some(_) => {}
        }
    }
}

/// Exhaustive over [`ProbeClass::CanonicalSuffixes`].
pub fn estimate_l_exhaustive<E: Executor>(ctx: &Ctx<E>, u: usize, v: usize, n: usize) -> Result<Lemma2Report, Error> {
    check_uvn(u, v, n, 10)?;
    let all = SetFamily::all_subsets(n as u32)?;
    let p = all.len() as u128;
    let systems: u128 = (1..=n).map(|r| count_blockseqs(r, n)).sum();
    ctx.budget
        .admit(p.saturating_mul(p).saturating_mul(p).saturating_add(p.saturating_mul(systems).saturating_mul(p)))?;
    let suffixes: Vec<SetFamily> = (0..all.len()).map(|i| SetFamily::new(all.sets()[i..].to_vec())).collect();
    let mut cache = LevelCache { ctx, n, seen: BTreeMap::new() };
    let mut ok_u = Vec::with_capacity(suffixes.len());
    let mut ok_v = Vec::with_capacity(suffixes.len());
    for x in &suffixes {
        ok_u.push(is_ip_r_star_within(ctx, x, u, n)?.holds());
        ok_v.push(is_ip_r_star_within(ctx, x, v, n)?.holds());
    }
    let mut tally = Tally {
        report: Lemma2Report {
            u,
            v,
            n,
            class: ProbeClass::CanonicalSuffixes,
            pairs_probed: p * p,
            pairs_admissible: 0,
            pairs_unbounded: 0,
            bound: None,
            witness: None,
        },
    };
    let pick = |ok: &[bool]| -> Vec<&SetFamily> { suffixes.iter().zip(ok).filter(|p| *p.1).map(|p| p.0).collect() };
    let (xs, ys) = (pick(&ok_u), pick(&ok_v));
    for &x in &xs {
        for &y in &ys {
            let level = cache.level(&x.intersect(y))?;
            tally.record(x, y, level);
        }
    }
    Ok(tally.report)
}

/// Greedily thins `P_f({1..n})`, visiting members in random order and
/// dropping each one whose removal keeps the family IP_r* within `n`.
pub fn random_minimal_ip_star<E: Executor, R: Rng + ?Sized>(
    ctx: &Ctx<E>,
    rng: &mut R,
    r: usize,
    n: usize,
) -> Result<SetFamily, Error> {
    let mut keep: Vec<FinSet> = SetFamily::all_subsets(n as u32)?.sets().to_vec();
    let mut order = keep.clone();
    order.shuffle(rng);
    for drop in order {
        let trial = SetFamily::new(keep.iter().copied().filter(|&s| s != drop).collect());
        if is_ip_r_star_within(ctx, &trial, r, n)?.holds() {
            keep.retain(|&s| s != drop);
        }
    }
    Ok(SetFamily::new(keep))
}

/// Seeded sampling over [`ProbeClass::RandomMinimal`].
pub fn estimate_l_sampled<E: Executor, R: Rng + ?Sized>(
    ctx: &Ctx<E>,
    rng: &mut R,
    u: usize,
    v: usize,
    n: usize,
    samples: usize,
) -> Result<Lemma2Report, Error> {
    check_uvn(u, v, n, HARD_ENUM_LIMIT.min(10))?;
    let p = (1u128 << n) - 1;
    let systems: u128 = (1..=n).map(|r| count_blockseqs(r, n)).sum();
    ctx.budget
        .admit((samples as u128).saturating_mul(3 * p).saturating_mul(systems).saturating_mul(p))?;
    let mut cache = LevelCache { ctx, n, seen: BTreeMap::new() };
    let mut tally = Tally {
        report: Lemma2Report {
            u,
            v,
            n,
            class: ProbeClass::RandomMinimal { samples },
            pairs_probed: samples as u128,
            pairs_admissible: 0,
            pairs_unbounded: 0,
            bound: None,
            witness: None,
        },
    };
    for _ in 0..samples {
        let x = random_minimal_ip_star(ctx, rng, u, n)?;
        let y = random_minimal_ip_star(ctx, rng, v, n)?;
        let level = cache.level(&x.intersect(&y))?;
        tally.record(&x, &y, level);
    }
    Ok(tally.report)
}
