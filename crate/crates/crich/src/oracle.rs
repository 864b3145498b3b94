//! Brute-force reference implementations.
//!
//! These share no search code with the core crate: they enumerate every
//! candidate, evaluate each product letter by letter from the table, and
//! pick results by explicit comparison.

use crich_core::cr::{CrWitness, SeqFun};
use crich_core::transfer::CompressionPlan;
use crich_core::{Element, ElementSet, FiniteSemigroup};

/// Every associative table on `{0..n}`, in lexicographic order of the
/// row-major table.
pub fn all_semigroups(n: usize) -> Vec<FiniteSemigroup> {
    let cells = n * n;
    let total = n.pow(cells as u32);
    let mut out = Vec::new();
    let mut digits = vec![0usize; cells];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = c % n;
            c /= n;
        }
        let at = |x: usize, y: usize| digits[x * n + y];
        let assoc = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| at(at(x, y), z) == at(x, at(y, z)))));
        if assoc {
            let rows: Vec<Vec<u32>> = digits.chunks(n).map(|r| r.iter().map(|&v| v as u32).collect()).collect();
            out.push(FiniteSemigroup::from_rows(&rows).expect("associative table"));
        }
    }
    out
}

/// Left-to-right product of an explicit word.
pub fn fold(sgp: &FiniteSemigroup, letters: &[Element]) -> Element {
    letters[1..].iter().fold(letters[0], |acc, &y| sgp.mul(acc, y))
}

/// The explicit word `a(1) f(t(1)) a(2) … f(t(m)) a(m+1)`.
pub fn spelled(a: &[Element], f: &SeqFun, t: &[u32]) -> Vec<Element> {
    let mut letters = vec![a[0]];
    for (j, &pos) in t.iter().enumerate() {
        letters.push(f.at(pos));
        letters.push(a[j + 1]);
    }
    letters
}

/// Product of [`spelled`] without building the word.
fn spelled_product(sgp: &FiniteSemigroup, a: &[Element], f: &SeqFun, t: &[u32]) -> Element {
    let mut acc = a[0];
    for (j, &pos) in t.iter().enumerate() {
        acc = sgp.mul(acc, f.at(pos));
        acc = sgp.mul(acc, a[j + 1]);
    }
    acc
}

/// Least witness with indices inside `{1..r}`, found by listing every
/// candidate and taking the minimum of `(m, t, a)`.
pub fn least_witness(sgp: &FiniteSemigroup, target: &ElementSet, funs: &[SeqFun], r: usize) -> Option<CrWitness> {
    let n = sgp.order();
    let mut best: Option<(usize, Vec<u32>, Vec<u32>)> = None;
    for mask in 1u32..(1 << r) {
        let t: Vec<u32> = (1..=r as u32).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
        let len = t.len() + 1;
        for code in 0..n.pow(len as u32) {
            let mut c = code;
            let mut a = vec![Element(0); len];
            for slot in a.iter_mut() {
                *slot = Element((c % n) as u32);
                c /= n;
            }
            if funs.iter().all(|f| target.contains(spelled_product(sgp, &a, f, &t))) {
                let key = (t.len(), t.clone(), a.iter().map(|e| e.0).collect::<Vec<_>>());
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
    }
    best.map(|(_, t, a)| CrWitness::new(a.into_iter().map(Element).collect(), t).expect("well-formed"))
}

/// The expanded witness written out from its description: members of
/// `L = ∪ H_{t(j)}` in increasing order; the letter before the least member
/// of the `j`-th chosen block is `a(j)`, every other letter before a member
/// is the filler, and the word closes with `a(m+1)`.
pub fn expand(plan: &CompressionPlan, short: &CrWitness) -> (Vec<u32>, Vec<Element>) {
    let blocks = plan.blocks().blocks();
    let chosen: Vec<_> = short.indices().iter().map(|&j| blocks[j as usize - 1]).collect();
    let mut set: Vec<u32> = chosen.iter().flat_map(|b| b.to_vec()).collect();
    set.sort_unstable();
    let mut word: Vec<Element> = set
        .iter()
        .map(|&x| match chosen.iter().position(|b| b.smallest() == x) {
            Some(j) => short.word()[j],
            None => plan.filler(),
        })
        .collect();
    word.push(*short.word().last().expect("nonempty word"));
    (set, word)
}

/// `g_f(j)` spelled out as the letters `f(b(j,1)), d, f(b(j,2)), …`.
pub fn compressed_letters(f: &SeqFun, plan: &CompressionPlan, j: u32) -> Vec<Element> {
    let block = plan.blocks().blocks()[j as usize - 1];
    let mut letters = Vec::new();
    for (i, x) in block.iter().enumerate() {
        if i > 0 {
            letters.push(plan.filler());
        }
        letters.push(f.at(x));
    }
    letters
}

/// Both sides of the compression identity, from explicit words only.
pub fn compression_sides(
    sgp: &FiniteSemigroup,
    f: &SeqFun,
    plan: &CompressionPlan,
    short: &CrWitness,
) -> (Element, Element) {
    let (set, word) = expand(plan, short);
    let long = fold(sgp, &spelled(&word, f, &set));
    let mut letters = vec![short.word()[0]];
    for (j, &tj) in short.indices().iter().enumerate() {
        letters.extend(compressed_letters(f, plan, tj));
        letters.push(short.word()[j + 1]);
    }
    (long, fold(sgp, &letters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crich_core::semigroup::Family;
    use crich_core::{BlockSeq, FinSet};

    #[test]
    fn semigroup_counts() {
        // labelled semigroups of orders 1, 2, 3
        assert_eq!(all_semigroups(1).len(), 1);
        assert_eq!(all_semigroups(2).len(), 8);
        assert_eq!(all_semigroups(3).len(), 113);
    }

    #[test]
    fn least_witness_small_cases() {
        let z2 = Family::Cyclic(2).build().unwrap();
        let zero = ElementSet::from_indices(&z2, [0]).unwrap();
        let f = SeqFun::new(vec![Element(1), Element(1)], Element(0)).unwrap();
        let w = least_witness(&z2, &zero, std::slice::from_ref(&f), 2).unwrap();
        assert_eq!(w.indices(), &[1]);
        assert_eq!(w.word(), &[Element(0), Element(1)]);
        let g = SeqFun::new(vec![Element(0), Element(0)], Element(0)).unwrap();
        let w = least_witness(&z2, &zero, &[f.clone(), g.clone()], 2).unwrap();
        assert_eq!(w.indices(), &[1, 2]);
        assert!(least_witness(&z2, &zero, &[f, g], 1).is_none());
    }

    #[test]
    fn expansion_by_hand() {
        let blocks = BlockSeq::new(vec![
            FinSet::from_members([1u32, 2]).unwrap(),
            FinSet::from_members([4u32, 5, 6]).unwrap(),
        ])
        .unwrap();
        let plan = CompressionPlan::new(blocks, Element(9));
        let short = CrWitness::new(vec![Element(1), Element(2), Element(3)], vec![1, 2]).unwrap();
        let (set, word) = expand(&plan, &short);
        assert_eq!(set, [1, 2, 4, 5, 6]);
        assert_eq!(word.iter().map(|e| e.0).collect::<Vec<_>>(), [1, 9, 2, 9, 9, 3]);
    }
}
