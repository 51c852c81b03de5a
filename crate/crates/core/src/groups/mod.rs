//! Factor groups with a uniform exact-element interface.
//!
//! Every group in the catalog shares one element type, [`Element`], whose
//! derived equality is exact element equality: integer residues and table
//! indices are stored reduced, lattice points as coordinate tuples and free
//! group elements as freely reduced words.

mod schreier_sims;
mod table;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::{Error, Result};

pub use schreier_sims::{brute_force_order, schreier_sims_order, SCHREIER_SIMS_DEGREE_CAP};
pub use table::CayleyTable;

/// Default cap on ball cardinality.
pub const BALL_CAP: usize = 1_000_000;

/// An element of one of the catalog groups.
///
/// Words of a free group store one signed letter per entry: `k > 0` is the
/// `k`-th generator and `-k` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Int(i64),
    Tuple(Vec<i64>),
    Word(Vec<i8>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(k) => write!(f, "{k}"),
            Element::Tuple(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Element::Word(w) if w.is_empty() => f.write_str("e"),
            Element::Word(w) => {
                for &l in w {
                    f.write_str(letter_char(l).encode_utf8(&mut [0; 4]))?;
                }
                Ok(())
            }
        }
    }
}

fn letter_char(l: i8) -> char {
    let idx = l.unsigned_abs() - 1;
    if l > 0 {
        (b'a' + idx) as char
    } else {
        (b'A' + idx) as char
    }
}

/// The order of a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// `Z/n`, elements `Int(0..n)`.
    Cyclic(u64),
    /// `(Z/n)^dim`, elements `Tuple` with entries in `0..n`.
    CyclicPower { modulus: u64, dim: usize },
    /// `Z`, elements `Int`.
    Integers,
    /// `Z^dim`, elements `Tuple`.
    Lattice(usize),
    /// Free group of the given rank, elements reduced `Word`s.
    Free(u8),
    /// A finite group given by its Cayley table, elements `Int` indices.
    Table(CayleyTable),
}

/// A factor group. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    kind: GroupKind,
}

impl Group {
    pub fn cyclic(n: u64) -> Result<Group> {
        if n == 0 {
            return Err(Error::MalformedGroup("cyclic group needs n >= 1".into()));
        }
        Ok(Group { kind: GroupKind::Cyclic(n) })
    }

    pub fn cyclic_power(modulus: u64, dim: usize) -> Result<Group> {
        if modulus == 0 || dim == 0 {
            return Err(Error::MalformedGroup("cyclic power needs n >= 1 and dim >= 1".into()));
        }
        if modulus.checked_pow(dim as u32).is_none() {
            return Err(Error::MalformedGroup("cyclic power order overflows".into()));
        }
        Ok(Group { kind: GroupKind::CyclicPower { modulus, dim } })
    }

    pub fn integers() -> Group {
        Group { kind: GroupKind::Integers }
    }

    pub fn lattice(dim: usize) -> Result<Group> {
        if dim == 0 {
            return Err(Error::MalformedGroup("lattice needs dim >= 1".into()));
        }
        Ok(Group { kind: GroupKind::Lattice(dim) })
    }

    pub fn free(rank: u8) -> Result<Group> {
        if rank == 0 || rank > 26 {
            return Err(Error::MalformedGroup("free group rank must be in 1..=26".into()));
        }
        Ok(Group { kind: GroupKind::Free(rank) })
    }

    pub fn table(table: CayleyTable) -> Group {
        Group { kind: GroupKind::Table(table) }
    }

    /// The symmetric group on `k` letters as a Cayley table, `k <= 5`.
    pub fn symmetric(k: usize) -> Result<Group> {
        Ok(Group::table(CayleyTable::symmetric(k)?))
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// Short human-readable name, e.g. `Z`, `Z/5`, `(Z/2)^2`, `F2`.
    pub fn name(&self) -> String {
        match &self.kind {
            GroupKind::Cyclic(n) => format!("Z/{n}"),
            GroupKind::CyclicPower { modulus, dim } => format!("(Z/{modulus})^{dim}"),
            GroupKind::Integers => "Z".to_string(),
            GroupKind::Lattice(d) => format!("Z^{d}"),
            GroupKind::Free(r) => format!("F{r}"),
            GroupKind::Table(t) => format!("T{}", t.order()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            GroupKind::Cyclic(n) => Some(*n),
            GroupKind::CyclicPower { modulus, dim } => Some(modulus.pow(*dim as u32)),
            GroupKind::Table(t) => Some(t.order() as u64),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::Cyclic(_) | GroupKind::Integers => Element::Int(0),
            GroupKind::CyclicPower { dim, .. } | GroupKind::Lattice(dim) => Element::Tuple(vec![0; *dim]),
            GroupKind::Free(_) => Element::Word(Vec::new()),
            GroupKind::Table(t) => Element::Int(t.identity() as i64),
        }
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        match (&self.kind, x) {
            (GroupKind::Table(t), Element::Int(k)) => *k == t.identity() as i64,
            (_, Element::Int(k)) => *k == 0,
            (_, Element::Tuple(xs)) => xs.iter().all(|&c| c == 0),
            (_, Element::Word(w)) => w.is_empty(),
        }
    }

    /// Whether `x` is a well-formed element of this group.
    pub fn contains(&self, x: &Element) -> bool {
        match (&self.kind, x) {
            (GroupKind::Cyclic(n), Element::Int(k)) => *k >= 0 && (*k as u64) < *n,
            (GroupKind::CyclicPower { modulus, dim }, Element::Tuple(xs)) => {
                xs.len() == *dim && xs.iter().all(|&c| c >= 0 && (c as u64) < *modulus)
            }
            (GroupKind::Integers, Element::Int(_)) => true,
            (GroupKind::Lattice(d), Element::Tuple(xs)) => xs.len() == *d,
            (GroupKind::Free(r), Element::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() <= *r) && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupKind::Table(t), Element::Int(k)) => *k >= 0 && (*k as usize) < t.order(),
            _ => false,
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y), "{x} or {y} not in {}", self.name());
        match (&self.kind, x, y) {
            (GroupKind::Cyclic(n), Element::Int(a), Element::Int(b)) => {
                Element::Int(((*a as u64 + *b as u64) % n) as i64)
            }
            (GroupKind::Integers, Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (GroupKind::CyclicPower { modulus, .. }, Element::Tuple(a), Element::Tuple(b)) => {
                let m = *modulus as i64;
                Element::Tuple(a.iter().zip(b).map(|(p, q)| (p + q) % m).collect())
            }
            (GroupKind::Lattice(_), Element::Tuple(a), Element::Tuple(b)) => {
                Element::Tuple(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (GroupKind::Free(_), Element::Word(a), Element::Word(b)) => {
                let mut w = a.clone();
                for &l in b {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                Element::Word(w)
            }
            (GroupKind::Table(t), Element::Int(a), Element::Int(b)) => {
                Element::Int(t.mul(*a as usize, *b as usize) as i64)
            }
            _ => panic!("element kind does not match group {}", self.name()),
        }
    }

    pub fn inv(&self, x: &Element) -> Element {
        match (&self.kind, x) {
            (GroupKind::Cyclic(n), Element::Int(a)) => Element::Int(((*n - *a as u64) % n) as i64),
            (GroupKind::Integers, Element::Int(a)) => Element::Int(-a),
            (GroupKind::CyclicPower { modulus, .. }, Element::Tuple(a)) => {
                let m = *modulus as i64;
                Element::Tuple(a.iter().map(|c| (m - c) % m).collect())
            }
            (GroupKind::Lattice(_), Element::Tuple(a)) => Element::Tuple(a.iter().map(|c| -c).collect()),
            (GroupKind::Free(_), Element::Word(w)) => Element::Word(w.iter().rev().map(|l| -l).collect()),
            (GroupKind::Table(t), Element::Int(a)) => Element::Int(t.inv(*a as usize) as i64),
            _ => panic!("element kind does not match group {}", self.name()),
        }
    }

    /// `x^k` for `k >= 0`.
    pub fn pow(&self, x: &Element, k: u64) -> Element {
        let mut acc = self.identity();
        let mut base = x.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Proper length: `|k|` on `Z`, the l1 norm on `Z^d`, word length on free
    /// groups, and 0/1 (identity/other) on finite groups.
    pub fn length(&self, x: &Element) -> u64 {
        match (&self.kind, x) {
            (GroupKind::Integers, Element::Int(a)) => a.unsigned_abs(),
            (GroupKind::Lattice(_), Element::Tuple(a)) => a.iter().map(|c| c.unsigned_abs()).sum(),
            (GroupKind::Free(_), Element::Word(w)) => w.len() as u64,
            _ => u64::from(!self.is_identity(x)),
        }
    }

    /// The closed ball `{x : length(x) <= radius}`, sorted and duplicate-free.
    pub fn ball(&self, radius: u64, cap: usize) -> Result<Vec<Element>> {
        let too_large = || Error::BallTooLarge { radius, cap };
        let mut out = match &self.kind {
            GroupKind::Integers => {
                let r = i64::try_from(radius).map_err(|_| too_large())?;
                if (2 * radius as u128 + 1) > cap as u128 {
                    return Err(too_large());
                }
                (-r..=r).map(Element::Int).collect()
            }
            GroupKind::Lattice(d) => {
                let mut out = Vec::new();
                let mut cur = vec![0i64; *d];
                lattice_ball(&mut cur, 0, radius, &mut out, cap).map_err(|_| too_large())?;
                out
            }
            GroupKind::Free(rank) => {
                let mut out = vec![Element::Word(Vec::new())];
                let mut frontier = vec![Vec::<i8>::new()];
                for _ in 0..radius {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for g in 1..=*rank as i8 {
                            for l in [g, -g] {
                                if w.last() == Some(&-l) {
                                    continue;
                                }
                                let mut nw = w.clone();
                                nw.push(l);
                                next.push(nw);
                                if out.len() + next.len() > cap {
                                    return Err(too_large());
                                }
                            }
                        }
                    }
                    out.extend(next.iter().cloned().map(Element::Word));
                    frontier = next;
                    if frontier.is_empty() {
                        break;
                    }
                }
                out
            }
            _ => {
                if radius == 0 {
                    vec![self.identity()]
                } else {
                    let order = self.order().unwrap_or(u64::MAX);
                    if order > cap as u64 {
                        return Err(too_large());
                    }
                    self.elements()?
                }
            }
        };
        out.sort();
        Ok(out)
    }

    /// All elements of a finite group, in index order (see [`Group::index_of`]).
    pub fn elements(&self) -> Result<Vec<Element>> {
        let n = self.order().ok_or_else(|| Error::NotFinite(self.name()))?;
        Ok((0..n as usize).map(|i| self.element_at(i)).collect())
    }

    /// Position of `x` in [`Group::elements`]; `None` for infinite groups.
    pub fn index_of(&self, x: &Element) -> Option<usize> {
        match (&self.kind, x) {
            (GroupKind::Cyclic(_) | GroupKind::Table(_), Element::Int(k)) => Some(*k as usize),
            (GroupKind::CyclicPower { modulus, .. }, Element::Tuple(xs)) => {
                Some(xs.iter().fold(0usize, |acc, &c| acc * *modulus as usize + c as usize))
            }
            _ => None,
        }
    }

    /// Inverse of [`Group::index_of`]. Panics on infinite groups or
    /// out-of-range indices.
    pub fn element_at(&self, i: usize) -> Element {
        match &self.kind {
            GroupKind::Cyclic(_) | GroupKind::Table(_) => Element::Int(i as i64),
            GroupKind::CyclicPower { modulus, dim } => {
                let m = *modulus as usize;
                let mut xs = vec![0i64; *dim];
                let mut rest = i;
                for slot in xs.iter_mut().rev() {
                    *slot = (rest % m) as i64;
                    rest /= m;
                }
                Element::Tuple(xs)
            }
            _ => panic!("element_at on infinite group {}", self.name()),
        }
    }

    /// Least `k >= 1` with `x^k = e`. Torsion-free kinds answer without
    /// iterating.
    pub fn element_order(&self, x: &Element) -> Order {
        if self.is_identity(x) {
            return Order::Finite(1);
        }
        match (&self.kind, x) {
            (GroupKind::Integers | GroupKind::Lattice(_) | GroupKind::Free(_), _) => Order::Infinite,
            (GroupKind::Cyclic(n), Element::Int(k)) => Order::Finite(n / n.gcd(&(*k as u64))),
            (GroupKind::CyclicPower { modulus, .. }, Element::Tuple(xs)) => {
                Order::Finite(xs.iter().fold(1u64, |acc, &c| acc.lcm(&(modulus / modulus.gcd(&(c as u64))))))
            }
            _ => {
                let mut k = 1;
                let mut p = x.clone();
                while !self.is_identity(&p) {
                    p = self.mul(&p, x);
                    k += 1;
                }
                Order::Finite(k)
            }
        }
    }

    /// Whether a finite group has a nontrivial cyclic 2-Sylow subgroup,
    /// decided by looking for an element of even order whose 2-adic
    /// valuation matches that of the group order.
    pub fn has_cyclic_two_sylow(&self) -> Result<bool> {
        let n = self.order().ok_or_else(|| Error::NotFinite(self.name()))?;
        if n % 2 == 1 {
            return Ok(false);
        }
        let target = n.trailing_zeros();
        Ok(self.elements()?.iter().any(|x| match self.element_order(x) {
            Order::Finite(k) => k.trailing_zeros() == target,
            Order::Infinite => false,
        }))
    }

    /// Parses an element literal: decimal integers, comma tuples, free words
    /// (`a`, `b`, ... with uppercase inverses, `e` for the empty word), or
    /// table indices. Cyclic residues are reduced modulo `n`.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        let bad = || Error::InvalidElement { group: self.name(), literal: s.to_string() };
        let ints = |s: &str| -> Result<Vec<i64>> {
            let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
            inner.split(',').map(|c| c.trim().parse::<i64>().map_err(|_| bad())).collect()
        };
        let x = match &self.kind {
            GroupKind::Cyclic(n) => {
                let k: i64 = s.parse().map_err(|_| bad())?;
                Element::Int(k.rem_euclid(*n as i64))
            }
            GroupKind::Integers => Element::Int(s.parse().map_err(|_| bad())?),
            GroupKind::CyclicPower { modulus, dim } => {
                let xs = ints(s)?;
                if xs.len() != *dim {
                    return Err(bad());
                }
                Element::Tuple(xs.iter().map(|c| c.rem_euclid(*modulus as i64)).collect())
            }
            GroupKind::Lattice(dim) => {
                let xs = ints(s)?;
                if xs.len() != *dim {
                    return Err(bad());
                }
                Element::Tuple(xs)
            }
            GroupKind::Free(rank) => {
                if s.is_empty() || s == "e" {
                    return Ok(self.identity());
                }
                let mut w = Element::Word(Vec::new());
                for c in s.chars() {
                    let l = match c {
                        'a'..='z' => (c as u8 - b'a' + 1) as i8,
                        'A'..='Z' => -((c as u8 - b'A' + 1) as i8),
                        _ => return Err(bad()),
                    };
                    if l.unsigned_abs() > *rank {
                        return Err(bad());
                    }
                    w = self.mul(&w, &Element::Word(vec![l]));
                }
                w
            }
            GroupKind::Table(_) => Element::Int(s.parse().map_err(|_| bad())?),
        };
        if self.contains(&x) {
            Ok(x)
        } else {
            Err(bad())
        }
    }
}

fn lattice_ball(
    cur: &mut Vec<i64>,
    coord: usize,
    budget: u64,
    out: &mut Vec<Element>,
    cap: usize,
) -> core::result::Result<(), ()> {
    if coord == cur.len() {
        if out.len() >= cap {
            return Err(());
        }
        out.push(Element::Tuple(cur.clone()));
        return Ok(());
    }
    let b = budget as i64;
    for c in -b..=b {
        cur[coord] = c;
        lattice_ball(cur, coord + 1, budget - c.unsigned_abs(), out, cap)?;
    }
    cur[coord] = 0;
    Ok(())
}

/// Brute-force closure of `gens` under multiplication, for checking small
/// finite groups and balls.
pub fn closure(group: &Group, gens: &[Element]) -> BTreeSet<Element> {
    let mut seen = BTreeSet::new();
    seen.insert(group.identity());
    let mut frontier = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = group.mul(&x, s);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_five() {
        let g = Group::cyclic(5).unwrap();
        assert_eq!(g.order(), Some(5));
        assert_eq!(g.elements().unwrap().len(), 5);
        assert_eq!(g.mul(&Element::Int(3), &Element::Int(4)), Element::Int(2));
        assert_eq!(g.inv(&Element::Int(2)), Element::Int(3));
    }

    #[test]
    fn free_word_parses_reduced() {
        let f = Group::free(2).unwrap();
        assert_eq!(f.parse_element("aBa").unwrap(), Element::Word(vec![1, -2, 1]));
        assert_eq!(f.parse_element("abBA").unwrap(), f.identity());
        assert_eq!(f.parse_element("aBa").unwrap().to_string(), "aBa");
        assert!(f.parse_element("c").is_err());
    }

    #[test]
    fn balls() {
        let z = Group::integers();
        let b: Vec<_> = z.ball(2, BALL_CAP).unwrap();
        assert_eq!(b, (-2..=2).map(Element::Int).collect::<Vec<_>>());
        assert_eq!(Group::free(2).unwrap().ball(1, BALL_CAP).unwrap().len(), 5);
        assert_eq!(Group::lattice(2).unwrap().ball(1, BALL_CAP).unwrap().len(), 5);
        assert!(matches!(z.ball(10, 5), Err(Error::BallTooLarge { .. })));
        let c = Group::cyclic(6).unwrap();
        assert_eq!(c.ball(0, BALL_CAP).unwrap(), vec![Element::Int(0)]);
        assert_eq!(c.ball(1, BALL_CAP).unwrap().len(), 6);
    }

    #[test]
    fn lattice_ball_matches_brute_force() {
        let g = Group::lattice(2).unwrap();
        for n in 0..5i64 {
            let mut expected = 0;
            for x in -n..=n {
                for y in -n..=n {
                    if x.abs() + y.abs() <= n {
                        expected += 1;
                    }
                }
            }
            assert_eq!(g.ball(n as u64, BALL_CAP).unwrap().len(), expected);
        }
    }

    #[test]
    fn free_ball_is_product_closure() {
        let f = Group::free(2).unwrap();
        let b1 = f.ball(1, BALL_CAP).unwrap();
        let mut acc: BTreeSet<Element> = BTreeSet::new();
        acc.insert(f.identity());
        for n in 1..=4u64 {
            let mut next = BTreeSet::new();
            for x in &acc {
                for y in &b1 {
                    next.insert(f.mul(x, y));
                }
            }
            acc = next;
            let ball: BTreeSet<_> = f.ball(n, BALL_CAP).unwrap().into_iter().collect();
            let filtered: BTreeSet<_> = acc.iter().filter(|x| f.length(x) <= n).cloned().collect();
            assert_eq!(ball, filtered);
            // 1 + 4 (3^n - 1) / 2 reduced words of length <= n
            assert_eq!(ball.len() as u64, 1 + 2 * (3u64.pow(n as u32) - 1));
        }
    }

    #[test]
    fn orders() {
        let c4 = Group::cyclic(4).unwrap();
        assert_eq!(c4.element_order(&Element::Int(2)), Order::Finite(2));
        assert_eq!(Group::integers().element_order(&Element::Int(3)), Order::Infinite);
        let c6 = Group::cyclic(6).unwrap();
        assert_eq!(c6.element_order(&Element::Int(4)), Order::Finite(3));
        let s3 = Group::symmetric(3).unwrap();
        let orders: Vec<_> = s3.elements().unwrap().iter().map(|x| s3.element_order(x)).collect();
        assert_eq!(orders.iter().filter(|o| **o == Order::Finite(2)).count(), 3);
        assert_eq!(orders.iter().filter(|o| **o == Order::Finite(3)).count(), 2);
    }

    #[test]
    fn two_sylow() {
        assert!(Group::cyclic(2).unwrap().has_cyclic_two_sylow().unwrap());
        assert!(Group::cyclic(4).unwrap().has_cyclic_two_sylow().unwrap());
        assert!(Group::symmetric(3).unwrap().has_cyclic_two_sylow().unwrap());
        assert!(!Group::cyclic(3).unwrap().has_cyclic_two_sylow().unwrap());
        assert!(!Group::cyclic_power(2, 2).unwrap().has_cyclic_two_sylow().unwrap());
    }

    #[test]
    fn cyclic_power_indexing() {
        let v = Group::cyclic_power(3, 2).unwrap();
        for (i, x) in v.elements().unwrap().iter().enumerate() {
            assert_eq!(v.index_of(x), Some(i));
        }
        assert_eq!(v.element_at(0), v.identity());
    }
}
