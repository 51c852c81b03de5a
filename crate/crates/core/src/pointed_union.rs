//! The pointed union of two groups and its finitely supported permutations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use num_integer::Integer;

use crate::groups::{Element, Group};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    G,
    H,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::G => Side::H,
            Side::H => Side::G,
        }
    }
}

/// A point of the pointed union. Side payloads are never the identity of
/// their factor; the shared neutral element is always [`Point::Base`].
///
/// The derived order (`Base`, then `G` points, then `H` points, each by
/// payload) is the canonical point order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Base,
    G(Element),
    H(Element),
}

impl Point {
    /// The point of `x` on the given side, collapsing the identity to
    /// [`Point::Base`].
    pub fn on(side: Side, group: &Group, x: Element) -> Point {
        if group.is_identity(&x) {
            Point::Base
        } else {
            match side {
                Side::G => Point::G(x),
                Side::H => Point::H(x),
            }
        }
    }

    pub fn side(&self) -> Option<Side> {
        match self {
            Point::Base => None,
            Point::G(_) => Some(Side::G),
            Point::H(_) => Some(Side::H),
        }
    }

    pub fn payload(&self) -> Option<&Element> {
        match self {
            Point::Base => None,
            Point::G(x) | Point::H(x) => Some(x),
        }
    }

    /// Whether the point lies in the copy of `G` (which contains the basepoint).
    pub fn in_g(&self) -> bool {
        !matches!(self, Point::H(_))
    }

    pub fn in_h(&self) -> bool {
        !matches!(self, Point::G(_))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Base => f.write_str("e"),
            Point::G(x) => write!(f, "g:{x}"),
            Point::H(x) => write!(f, "h:{x}"),
        }
    }
}

/// Left multiplication by `x` on its own side of the union, trivial on the
/// other side.
pub fn apply_factor(side: Side, group: &Group, x: &Element, p: &Point) -> Point {
    if group.is_identity(x) {
        return p.clone();
    }
    match (side, p) {
        (_, Point::Base) => Point::on(side, group, x.clone()),
        (Side::G, Point::G(y)) | (Side::H, Point::H(y)) => Point::on(side, group, group.mul(x, y)),
        _ => p.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    fn from_odd(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl Mul for Parity {
    type Output = Parity;

    fn mul(self, rhs: Parity) -> Parity {
        Parity::from_odd((self == Parity::Odd) != (rhs == Parity::Odd))
    }
}

/// A finitely supported permutation of the pointed union, stored as the
/// mapping on its support. The identity is the empty mapping.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinPerm {
    moved: BTreeMap<Point, Point>,
}

impl FinPerm {
    pub fn identity() -> FinPerm {
        FinPerm::default()
    }

    /// Builds a permutation from `(point, image)` pairs; fixed pairs are
    /// dropped. Fails unless the pairs form a bijection of their key set.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Point, Point)>) -> Result<FinPerm> {
        let mut moved = BTreeMap::new();
        for (p, q) in pairs {
            if p == q {
                continue;
            }
            if let Some(old) = moved.insert(p.clone(), q) {
                return Err(Error::InvalidPermutation(format!("{p} has two images, {old} and {}", moved[&p])));
            }
        }
        let images: BTreeSet<&Point> = moved.values().collect();
        if images.len() != moved.len() || images.iter().any(|q| !moved.contains_key(*q)) {
            return Err(Error::InvalidPermutation("mapping is not a bijection of its support".into()));
        }
        Ok(FinPerm { moved })
    }

    /// Product of cycles, each written `p0 -> p1 -> ... -> p0`. Cycles must
    /// be disjoint.
    pub fn from_cycles(cycles: &[Vec<Point>]) -> Result<FinPerm> {
        let mut pairs = Vec::new();
        let mut seen = BTreeSet::new();
        for c in cycles {
            for (i, p) in c.iter().enumerate() {
                if !seen.insert(p.clone()) {
                    return Err(Error::InvalidPermutation(format!("{p} appears twice")));
                }
                pairs.push((p.clone(), c[(i + 1) % c.len()].clone()));
            }
        }
        FinPerm::from_pairs(pairs)
    }

    /// The 3-cycle `p -> q -> r -> p`.
    pub fn three_cycle(p: Point, q: Point, r: Point) -> Result<FinPerm> {
        if p == q || q == r || p == r {
            return Err(Error::NonDistinctPoints);
        }
        Ok(FinPerm { moved: BTreeMap::from([(p.clone(), q.clone()), (q, r.clone()), (r, p)]) })
    }

    pub fn transposition(p: Point, q: Point) -> Result<FinPerm> {
        if p == q {
            return Err(Error::NonDistinctPoints);
        }
        Ok(FinPerm { moved: BTreeMap::from([(p.clone(), q.clone()), (q, p)]) })
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.moved.get(p).unwrap_or(p).clone()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> + '_ {
        self.moved.keys()
    }

    pub fn support_len(&self) -> usize {
        self.moved.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        self.moved.iter()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let mut moved = BTreeMap::new();
        for (p, q) in &other.moved {
            let r = self.apply(q);
            if *p != r {
                moved.insert(p.clone(), r);
            }
        }
        for (p, q) in &self.moved {
            if !other.moved.contains_key(p) {
                moved.insert(p.clone(), q.clone());
            }
        }
        FinPerm { moved }
    }

    pub fn inverse(&self) -> FinPerm {
        FinPerm { moved: self.moved.iter().map(|(p, q)| (q.clone(), p.clone())).collect() }
    }

    /// Conjugate by a bijection `f` of the ambient set: the permutation
    /// `f(p) -> f(self(p))`. `f` must be injective on the support.
    pub fn relabel(&self, mut f: impl FnMut(&Point) -> Point) -> FinPerm {
        let moved: BTreeMap<Point, Point> = self.moved.iter().map(|(p, q)| (f(p), f(q))).collect();
        debug_assert_eq!(moved.len(), self.moved.len(), "relabeling must be injective");
        FinPerm { moved }
    }

    /// Cycles of length at least two, each starting at its least point, sorted
    /// by that point.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.moved.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start.clone();
            loop {
                seen.insert(p.clone());
                let next = self.apply(&p);
                cycle.push(p);
                if next == *start {
                    break;
                }
                p = next;
            }
            out.push(cycle);
        }
        out
    }

    /// Sum of (cycle length - 1), mod 2.
    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        Parity::from_odd(transpositions % 2 == 1)
    }

    /// Lcm of cycle lengths, `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.cycles().iter().try_fold(1u64, |acc, c| {
            let l = c.len() as u64;
            let g = acc.gcd(&l);
            (acc / g).checked_mul(l)
        })
    }
}

impl Mul for &FinPerm {
    type Output = FinPerm;

    fn mul(self, rhs: &FinPerm) -> FinPerm {
        self.compose(rhs)
    }
}

impl fmt::Display for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        for (i, c) in self.cycles().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("(")?;
            for (j, p) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn g(k: i64) -> Point {
        Point::G(Element::Int(k))
    }

    fn h(k: i64) -> Point {
        Point::H(Element::Int(k))
    }

    #[test]
    fn apply_factor_examples() {
        let z = Group::integers();
        assert_eq!(apply_factor(Side::G, &z, &Element::Int(1), &Point::Base), g(1));
        assert_eq!(apply_factor(Side::H, &z, &Element::Int(1), &g(5)), g(5));
        assert_eq!(apply_factor(Side::G, &z, &Element::Int(-3), &g(3)), Point::Base);
        assert_eq!(apply_factor(Side::H, &z, &Element::Int(-2), &h(2)), Point::Base);
        assert_eq!(apply_factor(Side::H, &z, &Element::Int(2), &h(2)), h(4));
    }

    #[test]
    fn compose_examples() {
        let c = FinPerm::three_cycle(Point::Base, g(1), h(1)).unwrap();
        assert_eq!(&FinPerm::identity() * &c, c);
        assert!((&(&c * &c) * &c).is_identity());
        let t1 = FinPerm::transposition(Point::Base, g(1)).unwrap();
        let t2 = FinPerm::transposition(g(1), h(1)).unwrap();
        // (e g)(g h): h -> g -> e, e -> g, g -> h
        let prod = &t1 * &t2;
        assert_eq!(prod, FinPerm::three_cycle(Point::Base, g(1), h(1)).unwrap());
        let other = &t2 * &t1;
        assert_eq!(other, FinPerm::three_cycle(Point::Base, h(1), g(1)).unwrap());
    }

    #[test]
    fn three_cycle_examples() {
        let c = FinPerm::three_cycle(Point::Base, g(1), h(1)).unwrap();
        assert_eq!(c.apply(&h(1)), Point::Base);
        assert_eq!(c.apply(&Point::Base), g(1));
        assert_eq!(c, FinPerm::three_cycle(g(1), h(1), Point::Base).unwrap());
        assert_eq!(FinPerm::three_cycle(g(1), g(1), h(1)), Err(Error::NonDistinctPoints));
        assert_eq!(c.to_string(), "(e g:1 h:1)");
    }

    #[test]
    fn parity_examples() {
        assert_eq!(FinPerm::identity().parity(), Parity::Even);
        assert_eq!(FinPerm::transposition(g(1), h(3)).unwrap().parity(), Parity::Odd);
        assert_eq!(FinPerm::three_cycle(g(1), h(3), g(2)).unwrap().parity(), Parity::Even);
    }

    #[test]
    fn from_pairs_rejects_non_bijections() {
        assert!(FinPerm::from_pairs(vec![(g(1), g(2))]).is_err());
        assert!(FinPerm::from_pairs(vec![(g(1), g(2)), (g(2), g(2))]).is_err());
        assert!(FinPerm::from_cycles(&[vec![g(1), g(2)], vec![g(2), g(3)]]).is_err());
        let p = FinPerm::from_pairs(vec![(g(1), g(1)), (g(2), h(2)), (h(2), g(2))]).unwrap();
        assert_eq!(p.support_len(), 2);
    }

    #[test]
    fn display_orders_cycles() {
        let p = FinPerm::from_cycles(&[vec![h(2), g(3)], vec![g(1), Point::Base, h(1)]]).unwrap();
        assert_eq!(p.to_string(), "(e h:1 g:1) (g:3 h:2)");
    }

    fn point() -> impl Strategy<Value = Point> {
        prop_oneof![Just(Point::Base), (1i64..6).prop_map(g), (1i64..6).prop_map(h),]
    }

    fn perm() -> impl Strategy<Value = FinPerm> {
        proptest::collection::vec((point(), point()), 0..6).prop_map(|swaps| {
            swaps.into_iter().fold(FinPerm::identity(), |acc, (p, q)| match FinPerm::transposition(p, q) {
                Ok(t) => &acc * &t,
                Err(_) => acc,
            })
        })
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in perm(), b in perm(), c in perm()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn parity_is_a_homomorphism(a in perm(), b in perm()) {
            prop_assert_eq!((&a * &b).parity(), a.parity() * b.parity());
            prop_assert_eq!(a.inverse().parity(), a.parity());
            prop_assert!((&a * &a.inverse()).is_identity());
        }

        #[test]
        fn no_fixed_points_stored(a in perm(), b in perm(), p in point()) {
            let c = &a * &b;
            prop_assert!(c.pairs().all(|(x, y)| x != y));
            if !c.support().any(|q| *q == p) {
                prop_assert_eq!(c.apply(&p), p.clone());
            }
            prop_assert_eq!(c.apply(&p), a.apply(&b.apply(&p)));
        }

        #[test]
        fn factor_action_inverts(k in -20i64..20, p in point()) {
            let z = Group::integers();
            let x = Element::Int(k);
            for side in [Side::G, Side::H] {
                let q = apply_factor(side, &z, &x, &p);
                prop_assert_eq!(apply_factor(side, &z, &z.inv(&x), &q), p.clone());
            }
        }
    }
}
