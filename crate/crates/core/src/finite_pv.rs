//! Glued products of two finite groups as dense permutation groups.
//!
//! The union of two finite groups has `N = |G| + |H| - 1` points, indexed
//! with the basepoint at 0, then the non-identity elements of `G`, then those
//! of `H`, each in the group's element order. The glued product is always
//! `Alt(N)` or `Sym(N)`; it is `Sym(N)` exactly when some element of `G` or
//! `H` acts by an odd translation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::groups::{schreier_sims_order, Element, Group, Order, SCHREIER_SIMS_DEGREE_CAP};
use crate::pointed_union::{Parity, Point, Side};
use crate::{Error, Result};

/// A bijection of `0..N`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DensePerm {
    images: Vec<u32>,
}

impl DensePerm {
    pub fn identity(degree: usize) -> DensePerm {
        DensePerm { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<DensePerm> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &x in &images {
            if x >= n || core::mem::replace(&mut seen[x], true) {
                return Err(Error::NotBijective(n));
            }
        }
        Ok(DensePerm { images: images.into_iter().map(|x| x as u32).collect() })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &DensePerm) -> DensePerm {
        debug_assert_eq!(self.degree(), other.degree());
        DensePerm { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> DensePerm {
        let mut images = alloc::vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        DensePerm { images }
    }

    pub fn parity(&self) -> Parity {
        let mut seen = alloc::vec![false; self.degree()];
        let mut transpositions = 0;
        for start in 0..self.degree() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            transpositions += len.max(1) - 1;
        }
        if transpositions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Point indexing for the union of two finite groups.
#[derive(Clone, Debug)]
pub struct FiniteUnion {
    g: Group,
    h: Group,
    g_order: usize,
    degree: usize,
}

impl FiniteUnion {
    /// Fails unless both groups are finite and the degree is at most `cap`.
    pub fn new(g: Group, h: Group, cap: usize) -> Result<FiniteUnion> {
        let go = g.order().ok_or_else(|| Error::NotFinite(g.name()))? as usize;
        let ho = h.order().ok_or_else(|| Error::NotFinite(h.name()))? as usize;
        let degree = go + ho - 1;
        if degree > cap {
            return Err(Error::DegreeTooLarge { degree, cap });
        }
        Ok(FiniteUnion { g, h, g_order: go, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self, side: Side) -> &Group {
        match side {
            Side::G => &self.g,
            Side::H => &self.h,
        }
    }

    fn rank(group: &Group, x: &Element) -> usize {
        let i = group.index_of(x).expect("finite group element");
        let id = group.index_of(&group.identity()).expect("finite group identity");
        debug_assert_ne!(i, id);
        if i < id {
            i + 1
        } else {
            i
        }
    }

    fn unrank(group: &Group, r: usize) -> Element {
        let id = group.index_of(&group.identity()).expect("finite group identity");
        group.element_at(if r <= id { r - 1 } else { r })
    }

    pub fn index_of(&self, p: &Point) -> usize {
        match p {
            Point::Base => 0,
            Point::G(x) => Self::rank(&self.g, x),
            Point::H(y) => self.g_order - 1 + Self::rank(&self.h, y),
        }
    }

    pub fn point_at(&self, i: usize) -> Point {
        assert!(i < self.degree, "point index {i} out of range");
        if i == 0 {
            Point::Base
        } else if i < self.g_order {
            Point::G(Self::unrank(&self.g, i))
        } else {
            Point::H(Self::unrank(&self.h, i - self.g_order + 1))
        }
    }

    pub fn point(&self, side: Side, x: Element) -> Point {
        Point::on(side, self.group(side), x)
    }

    /// Left translation by `x` on its side, identity on the other block.
    pub fn translation(&self, side: Side, x: &Element) -> DensePerm {
        let group = self.group(side);
        let images = (0..self.degree)
            .map(|i| {
                let p = self.point_at(i);
                self.index_of(&crate::pointed_union::apply_factor(side, group, x, &p)) as u32
            })
            .collect();
        DensePerm { images }
    }
}

/// One dense generator per element of each factor (or per listed generator
/// when `generators` is given), acting regularly on its own block.
pub fn realize_finite(union: &FiniteUnion, generators: Option<(&[Element], &[Element])>) -> Result<Vec<DensePerm>> {
    let (gs, hs) = match generators {
        Some((gs, hs)) => (gs.to_vec(), hs.to_vec()),
        None => (union.g.elements()?, union.h.elements()?),
    };
    let mut out = Vec::new();
    for (side, xs) in [(Side::G, gs), (Side::H, hs)] {
        let group = union.group(side);
        for x in xs {
            if !group.contains(&x) {
                return Err(Error::InvalidElement { group: group.name(), literal: format!("{x}") });
            }
            if !group.is_identity(&x) {
                out.push(union.translation(side, &x));
            }
        }
    }
    Ok(out)
}

/// Sign of the left translation by `x`: with `k` its order, there are
/// `|G| / k` cycles of length `k`.
pub fn translation_sign(group: &Group, x: &Element) -> Result<i8> {
    let n = group.order().ok_or_else(|| Error::NotFinite(group.name()))?;
    let k = match group.element_order(x) {
        Order::Finite(k) => k,
        Order::Infinite => unreachable!("finite group"),
    };
    Ok(if ((n / k) * (k - 1)) % 2 == 0 { 1 } else { -1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Sym,
    Alt,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Sym => "Sym",
            Classification::Alt => "Alt",
        })
    }
}

/// `Sym` iff `G` or `H` has a nontrivial cyclic 2-Sylow subgroup.
pub fn classify(g: &Group, h: &Group) -> Result<Classification> {
    for group in [g, h] {
        match group.order() {
            None => return Err(Error::NotFinite(group.name())),
            Some(1) => return Err(Error::Precondition(format!("{} is trivial", group.name()))),
            Some(_) => {}
        }
    }
    Ok(if g.has_cyclic_two_sylow()? || h.has_cyclic_two_sylow()? { Classification::Sym } else { Classification::Alt })
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u32).map(BigUint::from).product()
}

fn expected_order(c: Classification, degree: usize) -> BigUint {
    match c {
        Classification::Sym => factorial(degree),
        Classification::Alt => factorial(degree) / 2u32,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub classification: Classification,
    pub degree: usize,
    pub order: BigUint,
    pub expected: BigUint,
}

impl Verification {
    pub fn holds(&self) -> bool {
        self.order == self.expected
    }
}

/// Compares [`classify`] with the Schreier–Sims order of the realized group.
pub fn verify_classification(g: &Group, h: &Group) -> Result<Verification> {
    let classification = classify(g, h)?;
    let union = FiniteUnion::new(g.clone(), h.clone(), SCHREIER_SIMS_DEGREE_CAP)?;
    let gens: Vec<Vec<usize>> = realize_finite(&union, None)?.iter().map(DensePerm::images).collect();
    let order = schreier_sims_order(&gens, union.degree())?;
    Ok(Verification {
        classification,
        degree: union.degree(),
        order,
        expected: expected_order(classification, union.degree()),
    })
}

/// Restriction of `⟨K, L⟩ < G ⋈ H` to the invariant subset `K ∪ L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    /// Order of `⟨K, L⟩` acting on all of `G ∪ H`.
    pub ambient_order: BigUint,
    /// Order of its image acting on `K ∪ L`.
    pub restricted_order: BigUint,
    /// Order of `K ⋈ L` predicted by the classification.
    pub expected_order: BigUint,
}

fn subgroup_has_cyclic_two_sylow(group: &Group, sub: &[Element]) -> bool {
    let n = sub.len() as u64;
    n.is_multiple_of(2)
        && sub
            .iter()
            .any(|x| matches!(group.element_order(x), Order::Finite(k) if k.trailing_zeros() == n.trailing_zeros()))
}

/// Restricts the subgroup generated by the subgroups `k < G` and `l < H`
/// (given by their element lists) to the points of `k ∪ l`, which it
/// preserves. The restriction is onto `K ⋈ L`.
pub fn restrict_to_subgroups(g: &Group, h: &Group, k: &[Element], l: &[Element]) -> Result<Restriction> {
    let union = FiniteUnion::new(g.clone(), h.clone(), SCHREIER_SIMS_DEGREE_CAP)?;
    for (side, sub) in [(Side::G, k), (Side::H, l)] {
        let group = union.group(side);
        let set: BTreeSet<&Element> = sub.iter().collect();
        let closed = sub.iter().all(|x| group.contains(x) && sub.iter().all(|y| set.contains(&group.mul(x, y))));
        if !closed || !set.contains(&group.identity()) || set.len() < 2 {
            return Err(Error::Precondition(format!("not a nontrivial subgroup of {}", group.name())));
        }
    }
    let gens = realize_finite(&union, Some((k, l)))?;
    let mut block: Vec<usize> = Vec::new();
    block.extend(k.iter().map(|x| union.index_of(&union.point(Side::G, x.clone()))));
    block.extend(l.iter().filter(|y| !h.is_identity(y)).map(|y| union.index_of(&union.point(Side::H, y.clone()))));
    block.sort_unstable();
    block.dedup();
    let position = |i: usize| block.binary_search(&i).ok();
    let mut restricted = Vec::new();
    for p in &gens {
        let images = block
            .iter()
            .map(|&i| position(p.apply(i)).ok_or_else(|| Error::Precondition("K ∪ L is not invariant".into())))
            .collect::<Result<Vec<_>>>()?;
        restricted.push(images);
    }
    let ambient: Vec<Vec<usize>> = gens.iter().map(DensePerm::images).collect();
    let classification = if subgroup_has_cyclic_two_sylow(g, k) || subgroup_has_cyclic_two_sylow(h, l) {
        Classification::Sym
    } else {
        Classification::Alt
    };
    Ok(Restriction {
        ambient_order: schreier_sims_order(&ambient, union.degree())?,
        restricted_order: schreier_sims_order(&restricted, block.len())?,
        expected_order: expected_order(classification, block.len()),
    })
}
