//! Ping-pong and Følner checks for the action on the pointed union.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::groups::{Element, Group, GroupKind, Order};
use crate::pointed_union::{Point, Side};
use crate::pv_core::{Letter, PvContext, PvElement};
use crate::{Error, Result};

/// Longest word length [`free_semigroup_check`] accepts (2²¹ words).
pub const MAX_SEMIGROUP_LENGTH: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupReport {
    /// Number of nonempty words of length at most `L`: `2^(L+1) − 2`.
    pub words: u64,
    pub all_distinct: bool,
    /// The first two words found to normalize to the same element.
    pub collision: Option<(String, String)>,
}

fn word_string(word: &[bool], g: &Element, h: &Element) -> String {
    word.iter().map(|&is_h| if is_h { format!("H:{h}") } else { format!("G:{g}") }).collect::<Vec<_>>().join(" ")
}

/// Normalizes every nonempty positive word in `g ∈ G` and `h ∈ H` of length
/// at most `max_len` and reports whether they are pairwise distinct.
pub fn free_semigroup_check(ctx: &PvContext, g: &Element, h: &Element, max_len: usize) -> Result<SemigroupReport> {
    for (side, x) in [(Side::G, g), (Side::H, h)] {
        if ctx.group(side).element_order(x) != Order::Infinite {
            return Err(Error::Precondition(format!("{x} has finite order in {}", ctx.group(side).name())));
        }
    }
    if max_len > MAX_SEMIGROUP_LENGTH {
        return Err(Error::BudgetExceeded { needed: max_len as u128, budget: MAX_SEMIGROUP_LENGTH as u128 });
    }
    let letters = [ctx.letter(&Letter::G(g.clone()))?, ctx.letter(&Letter::H(h.clone()))?];
    let mut seen: BTreeMap<PvElement, Vec<bool>> = BTreeMap::new();
    let mut frontier: Vec<(Vec<bool>, PvElement)> = alloc::vec![(Vec::new(), ctx.identity())];
    let mut collision = None;
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (word, sigma) in &frontier {
            for (is_h, letter) in [false, true].into_iter().zip(&letters) {
                let mut w = word.clone();
                w.push(is_h);
                let s = ctx.multiply(sigma, letter);
                if let Some(prev) = seen.get(&s) {
                    collision.get_or_insert_with(|| (word_string(prev, g, h), word_string(&w, g, h)));
                } else {
                    seen.insert(s.clone(), w.clone());
                }
                next.push((w, s));
            }
        }
        frontier = next;
    }
    Ok(SemigroupReport { words: (1u64 << (max_len + 1)) - 2, all_distinct: collision.is_none(), collision })
}

/// A Følner set `A_n g_n` inside `𝔊`, shifted off the basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerSet {
    points: BTreeSet<Point>,
    n: u64,
    shift: Element,
}

impl FolnerSet {
    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn shift(&self) -> &Element {
        &self.shift
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The interval `[−n, n]` of `Z` (or box `[−n, n]^d` of `Z^d`) shifted by
/// `n + 1` in the first coordinate, so that it avoids the identity.
pub fn folner_set(group: &Group, n: u64) -> Result<FolnerSet> {
    let r = i64::try_from(n).map_err(|_| Error::Precondition(format!("n = {n} is too large")))?;
    let (points, shift) = match group.kind() {
        GroupKind::Integers => {
            let points = (1..=2 * r + 1).map(|k| Point::G(Element::Int(k))).collect();
            (points, Element::Int(r + 1))
        }
        GroupKind::Lattice(d) => {
            let side = (2 * r + 1) as u128;
            if side.checked_pow(*d as u32).is_none_or(|size| size > crate::groups::BALL_CAP as u128) {
                return Err(Error::BallTooLarge { radius: n, cap: crate::groups::BALL_CAP });
            }
            let mut points = BTreeSet::new();
            let mut coords = alloc::vec![-r; *d];
            loop {
                let mut shifted = coords.clone();
                shifted[0] += r + 1;
                points.insert(Point::G(Element::Tuple(shifted)));
                // odometer over [−r, r]^d
                let Some(i) = coords.iter().rposition(|&c| c < r) else { break };
                coords[i] += 1;
                coords[i + 1..].iter_mut().for_each(|c| *c = -r);
            }
            let mut shift = alloc::vec![0; *d];
            shift[0] = r + 1;
            (points, Element::Tuple(shift))
        }
        _ => return Err(Error::NoProvider { what: "Følner scheme", group: group.name() }),
    };
    Ok(FolnerSet { points, n, shift })
}

/// `|σF Δ F| / |F|`, computed pointwise.
pub fn folner_ratio(ctx: &PvContext, set: &FolnerSet, sigma: &PvElement) -> Ratio<u64> {
    let image: BTreeSet<Point> = set.points.iter().map(|p| ctx.act(sigma, p)).collect();
    let moved = image.symmetric_difference(&set.points).count() as u64;
    Ratio::new(moved, set.len().max(1) as u64)
}

/// `p/q`, printing the denominator even when it is 1.
pub fn format_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> PvContext {
        PvContext::new(Group::integers(), Group::integers()).unwrap()
    }

    fn int(k: i64) -> Element {
        Element::Int(k)
    }

    #[test]
    fn pong_examples() {
        let ctx = zz();
        let r = free_semigroup_check(&ctx, &int(1), &int(1), 3).unwrap();
        assert_eq!((r.words, r.all_distinct), (14, true));
        for (g, h) in [(1, 1), (2, 3), (-1, 5)] {
            let r = free_semigroup_check(&ctx, &int(g), &int(h), 8).unwrap();
            assert_eq!((r.words, r.all_distinct), (510, true));
        }
        assert!(matches!(free_semigroup_check(&ctx, &int(0), &int(1), 3), Err(Error::Precondition(_))));
        let mixed = PvContext::new(Group::integers(), Group::cyclic(3).unwrap()).unwrap();
        assert!(free_semigroup_check(&mixed, &int(1), &int(1), 3).is_err());
    }

    #[test]
    fn free_and_lattice_factors() {
        let ctx = PvContext::new(Group::lattice(2).unwrap(), Group::free(2).unwrap()).unwrap();
        let r = free_semigroup_check(&ctx, &Element::Tuple(alloc::vec![1, -1]), &Element::Word(alloc::vec![1, 2]), 6)
            .unwrap();
        assert_eq!((r.words, r.collision), (126, None));
    }

    #[test]
    fn folner_sets() {
        let z = Group::integers();
        let f = folner_set(&z, 1).unwrap();
        assert_eq!(f.points().iter().cloned().collect::<Vec<_>>(), [1, 2, 3].map(|k| Point::G(int(k))));
        assert_eq!(f.shift(), &int(2));
        assert_eq!(folner_set(&z, 3).unwrap().len(), 7);
        let b = folner_set(&Group::lattice(2).unwrap(), 2).unwrap();
        assert_eq!(b.len(), 25);
        assert!(!b.points().contains(&Point::Base));
        assert!(matches!(folner_set(&Group::free(2).unwrap(), 1), Err(Error::NoProvider { .. })));
    }

    #[test]
    fn folner_ratios() {
        let ctx = zz();
        let g1 = ctx.letter(&Letter::G(int(1))).unwrap();
        let mut last = Ratio::new(1, 1);
        for n in 1..=100 {
            let f = folner_set(ctx.g(), n).unwrap();
            let r = folner_ratio(&ctx, &f, &g1);
            assert_eq!(r, Ratio::new(2, 2 * n + 1));
            assert!(r < last);
            last = r;
            for k in [-3, 1, 7] {
                let h = ctx.letter(&Letter::H(int(k))).unwrap();
                assert_eq!(folner_ratio(&ctx, &f, &h), Ratio::new(0, 1));
            }
            assert_eq!(folner_ratio(&ctx, &f, &ctx.identity()), Ratio::new(0, 1));
        }
        assert_eq!(format_ratio(&Ratio::new(2, 3)), "2/3");
        assert_eq!(format_ratio(&Ratio::new(0, 5)), "0/1");
    }

    #[test]
    fn lattice_ratio() {
        let ctx = PvContext::new(Group::lattice(2).unwrap(), Group::integers()).unwrap();
        let f = folner_set(ctx.g(), 2).unwrap();
        let e1 = ctx.letter(&Letter::G(Element::Tuple(alloc::vec![1, 0]))).unwrap();
        // one face of 5 points leaves and one enters
        assert_eq!(folner_ratio(&ctx, &f, &e1), Ratio::new(10, 25));
    }
}
