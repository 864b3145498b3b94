//! Finite semigroups as dense Cayley tables.
//!
//! Elements are the indices `0..n` and the table is stored row-major, so
//! `x * y` is `table[x * n + y]`. No identity is assumed anywhere.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::Error;

/// Largest semigroup order the type accepts unless a caller raises it.
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// An element of some ambient [`FiniteSemigroup`], by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub u32);

impl Element {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The first place a candidate table fails to be a semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `table[x][y]` is not an element.
    NotClosed { x: u32, y: u32, value: u32 },
    /// `(x*y)*z != x*(y*z)`.
    NotAssociative { x: u32, y: u32, z: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotClosed { x, y, value } => {
                write!(f, "closure fails at ({x},{y}): entry {value}")
            }
            Violation::NotAssociative { x, y, z } => {
                write!(f, "associativity fails at ({x},{y},{z})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSemigroup {
    n: usize,
    table: Vec<u32>,
    /// `Some((n_s, n_t))` when built by [`direct_product`].
    factors: Option<(usize, usize)>,
}

fn flatten(rows: &[Vec<u32>]) -> Result<(usize, Vec<u32>), Error> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::MalformedTable { row: 0, len: 0, n: 1 });
    }
    if n > DEFAULT_MAX_ORDER {
        return Err(Error::TooLarge { n, limit: DEFAULT_MAX_ORDER });
    }
    let mut table = Vec::with_capacity(n * n);
    for (row, entries) in rows.iter().enumerate() {
        if entries.len() != n {
            return Err(Error::MalformedTable { row, len: entries.len(), n });
        }
        table.extend_from_slice(entries);
    }
    Ok((n, table))
}

fn first_violation(n: usize, table: &[u32]) -> Option<Violation> {
    for (i, &v) in table.iter().enumerate() {
        if v as usize >= n {
            return Some(Violation::NotClosed {
                x: (i / n) as u32,
                y: (i % n) as u32,
                value: v,
            });
        }
    }
    let at = |x: usize, y: usize| table[x * n + y] as usize;
    for x in 0..n {
        for y in 0..n {
            let xy = at(x, y);
            for z in 0..n {
                if at(xy, z) != at(x, at(y, z)) {
                    return Some(Violation::NotAssociative {
                        x: x as u32,
                        y: y as u32,
                        z: z as u32,
                    });
                }
            }
        }
    }
    None
}

/// Checks a raw table: `Err(MalformedTable)` for a non-square shape, and
/// `Err(NotASemigroup(v))` with the lexicographically least violation
/// (closure is checked before associativity).
pub fn validate_rows(rows: &[Vec<u32>]) -> Result<(), Error> {
    let (n, table) = flatten(rows)?;
    match first_violation(n, &table) {
        None => Ok(()),
        Some(v) => Err(Error::NotASemigroup(v)),
    }
}

impl FiniteSemigroup {
    /// Builds and fully validates a semigroup from its Cayley table rows.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, Error> {
        let (n, table) = flatten(rows)?;
        if let Some(v) = first_violation(n, &table) {
            return Err(Error::NotASemigroup(v));
        }
        Ok(Self { n, table, factors: None })
    }

    /// Builds a table checking shape and closure only; associativity is
    /// trusted. Closure still has to hold for lookups to stay in bounds.
    pub fn from_rows_unchecked(rows: &[Vec<u32>]) -> Result<Self, Error> {
        let (n, table) = flatten(rows)?;
        if let Some(i) = table.iter().position(|&v| v as usize >= n) {
            return Err(Error::NotASemigroup(Violation::NotClosed {
                x: (i / n) as u32,
                y: (i % n) as u32,
                value: table[i],
            }));
        }
        Ok(Self { n, table, factors: None })
    }

    fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(op(x, y) as u32);
            }
        }
        Self { n, table, factors: None }
    }

    /// Re-runs closure and associativity on this table.
    pub fn validate(&self) -> Result<(), Violation> {
        match first_violation(self.n, &self.table) {
            None => Ok(()),
            Some(v) => Err(v),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.n as u32).map(Element)
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn element(&self, idx: u32) -> Result<Element, Error> {
        if (idx as usize) < self.n {
            Ok(Element(idx))
        } else {
            Err(Error::ElementOutOfRange { idx, n: self.n })
        }
    }

    pub fn contains(&self, x: Element) -> bool {
        x.index() < self.n
    }

    /// Table lookup without range checks beyond slice indexing.
    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        Element(self.table[x.index() * self.n + y.index()])
    }

    pub fn multiply(&self, x: Element, y: Element) -> Result<Element, Error> {
        for e in [x, y] {
            if !self.contains(e) {
                return Err(Error::ElementOutOfRange { idx: e.0, n: self.n });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Left fold of the word. Any other bracketing gives the same element.
    pub fn fold_word(&self, word: &[Element]) -> Result<Element, Error> {
        let (&first, rest) = word.split_first().ok_or(Error::EmptyWord)?;
        for &e in word {
            if !self.contains(e) {
                return Err(Error::ElementOutOfRange { idx: e.0, n: self.n });
            }
        }
        Ok(rest.iter().fold(first, |acc, &e| self.mul(acc, e)))
    }

    /// Factor orders when this semigroup is a direct product.
    pub fn factors(&self) -> Option<(usize, usize)> {
        self.factors
    }

    /// Decodes a product element `i * n_t + j` into `(i, j)`.
    pub fn split(&self, x: Element) -> Result<(Element, Element), Error> {
        let (_, nt) = self.factors.ok_or(Error::NotAProduct)?;
        let x = x.index();
        Ok((Element((x / nt) as u32), Element((x % nt) as u32)))
    }

    /// Encodes `(i, j)` as the product element `i * n_t + j`.
    pub fn pair(&self, i: Element, j: Element) -> Result<Element, Error> {
        let (ns, nt) = self.factors.ok_or(Error::NotAProduct)?;
        if i.index() >= ns {
            return Err(Error::ElementOutOfRange { idx: i.0, n: ns });
        }
        if j.index() >= nt {
            return Err(Error::ElementOutOfRange { idx: j.0, n: nt });
        }
        Ok(Element((i.index() * nt + j.index()) as u32))
    }

    /// First projection `pi_1`.
    pub fn project_left(&self, x: Element) -> Result<Element, Error> {
        self.split(x).map(|p| p.0)
    }

    /// Second projection `pi_2`.
    pub fn project_right(&self, x: Element) -> Result<Element, Error> {
        self.split(x).map(|p| p.1)
    }
}

/// `S x T` with the pair `(i, j)` stored at index `i * |T| + j`.
pub fn direct_product(s: &FiniteSemigroup, t: &FiniteSemigroup) -> Result<FiniteSemigroup, Error> {
    direct_product_with_limit(s, t, DEFAULT_MAX_ORDER)
}

pub fn direct_product_with_limit(
    s: &FiniteSemigroup,
    t: &FiniteSemigroup,
    limit: usize,
) -> Result<FiniteSemigroup, Error> {
    let (ns, nt) = (s.order(), t.order());
    let n = ns.saturating_mul(nt);
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let mut sg = FiniteSemigroup::from_fn(n, |x, y| {
        let (x1, x2) = (Element((x / nt) as u32), Element((x % nt) as u32));
        let (y1, y2) = (Element((y / nt) as u32), Element((y % nt) as u32));
        s.mul(x1, y1).index() * nt + t.mul(x2, y2).index()
    });
    sg.factors = Some((ns, nt));
    Ok(sg)
}

/// Named semigroup families used for test instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Trivial,
    /// Integers mod `n` under addition.
    Cyclic(usize),
    /// `x * y = x`.
    LeftZero(usize),
    /// `x * y = y`.
    RightZero(usize),
    /// Integers mod `n` under multiplication.
    ModMult(usize),
    /// All self-maps of a `d`-point set, `d <= 3`.
    FullTransformation(usize),
}

impl Family {
    pub fn from_name(name: &str, param: Option<usize>) -> Result<Self, Error> {
        let need = || param.ok_or(Error::ParameterOutOfRange { param: 0, min: 1, max: DEFAULT_MAX_ORDER });
        Ok(match name {
            "trivial" => Family::Trivial,
            "cyclic" => Family::Cyclic(need()?),
            "left_zero" => Family::LeftZero(need()?),
            "right_zero" => Family::RightZero(need()?),
            "mod_mult" => Family::ModMult(need()?),
            "full_transformation" => Family::FullTransformation(need()?),
            _ => return Err(Error::UnknownFamily),
        })
    }

    pub fn build(self) -> Result<FiniteSemigroup, Error> {
        let check = |n: usize, max: usize| {
            if (1..=max).contains(&n) {
                Ok(n)
            } else {
                Err(Error::ParameterOutOfRange { param: n, min: 1, max })
            }
        };
        Ok(match self {
            Family::Trivial => FiniteSemigroup::from_fn(1, |_, _| 0),
            Family::Cyclic(n) => {
                let n = check(n, DEFAULT_MAX_ORDER)?;
                FiniteSemigroup::from_fn(n, |x, y| (x + y) % n)
            }
            Family::LeftZero(n) => FiniteSemigroup::from_fn(check(n, DEFAULT_MAX_ORDER)?, |x, _| x),
            Family::RightZero(n) => FiniteSemigroup::from_fn(check(n, DEFAULT_MAX_ORDER)?, |_, y| y),
            Family::ModMult(n) => {
                let n = check(n, DEFAULT_MAX_ORDER)?;
                FiniteSemigroup::from_fn(n, |x, y| (x * y) % n)
            }
            Family::FullTransformation(d) => full_transformation(check(d, 3)?),
        })
    }
}

/// Maps `f: {0..d} -> {0..d}` are indexed by `sum f(i) d^i`; the product
/// `f * g` applies `f` first, then `g`.
fn full_transformation(d: usize) -> FiniteSemigroup {
    let n = d.pow(d as u32);
    let decode = |mut x: usize| {
        let mut img = vec![0usize; d];
        for slot in img.iter_mut() {
            *slot = x % d;
            x /= d;
        }
        img
    };
    let maps: Vec<Vec<usize>> = (0..n).map(decode).collect();
    FiniteSemigroup::from_fn(n, |x, y| {
        maps[x]
            .iter()
            .rev()
            .fold(0, |acc, &i| acc * d + maps[y][i])
    })
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Trivial => f.write_str("trivial"),
            Family::Cyclic(n) => write!(f, "cyclic({n})"),
            Family::LeftZero(n) => write!(f, "left_zero({n})"),
            Family::RightZero(n) => write!(f, "right_zero({n})"),
            Family::ModMult(n) => write!(f, "mod_mult({n})"),
            Family::FullTransformation(d) => write!(f, "full_transformation({d})"),
        }
    }
}

/// Parses `trivial`, `cyclic(3)` or `cyclic:3`.
impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (name, param) = match s.find(['(', ':']) {
            None => (s, None),
            Some(i) => {
                let rest = s[i + 1..].trim_end_matches(')');
                let p = rest.trim().parse::<usize>().map_err(|_| Error::UnknownFamily)?;
                (&s[..i], Some(p))
            }
        };
        Family::from_name(name.trim(), param)
    }
}

/// A subset of a finite semigroup as a bitset over element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    n: usize,
    bits: Vec<u64>,
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        Self { n, bits: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.bits[i / 64] |= 1 << (i % 64);
        }
        s
    }

    pub fn from_indices(sgp: &FiniteSemigroup, idx: impl IntoIterator<Item = u32>) -> Result<Self, Error> {
        let mut s = Self::empty(sgp.order());
        for i in idx {
            s.insert(sgp.element(i)?);
        }
        Ok(s)
    }

    pub fn insert(&mut self, e: Element) {
        self.bits[e.index() / 64] |= 1 << (e.index() % 64);
    }

    #[inline]
    pub fn contains(&self, e: Element) -> bool {
        e.index() < self.n && self.bits[e.index() / 64] >> (e.index() % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Order of the ambient semigroup.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.n as u32).map(Element).filter(|&e| self.contains(e))
    }

    /// `A x B` inside a product semigroup built by [`direct_product`].
    pub fn product(&self, other: &ElementSet, product: &FiniteSemigroup) -> Result<Self, Error> {
        let mut s = Self::empty(product.order());
        for a in self.iter() {
            for b in other.iter() {
                s.insert(product.pair(a, b)?);
            }
        }
        Ok(s)
    }
}
