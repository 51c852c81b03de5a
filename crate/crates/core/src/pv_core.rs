//! Elements of the glued product in normal form `g · h · a`.
//!
//! When both factors are infinite every element is uniquely `g h a` with `a`
//! an even finitely supported permutation, and products are normalized by
//!
//! ```text
//! (g1 h1 a1)(g2 h2 a2) = (g1 g2)(h1 h2) · (h2⁻¹ [h1⁻¹, g2⁻¹] h2) · ((g2 h2)⁻¹ a1 (g2 h2)) · a2
//! ```
//!
//! where `[h1⁻¹, g2⁻¹]` is the 3-cycle `(e; h1⁻¹; g2⁻¹)`. When exactly one
//! factor is finite its part is absorbed into the residual permutation and
//! the stored part for that side is always the identity.
//!
//! The pointwise action ([`PvContext::act`]) is the ground truth; debug
//! builds cross-check every product against it.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::groups::{Element, Group, Order, BALL_CAP};
use crate::pointed_union::{apply_factor, FinPerm, Parity, Point, Side};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    BothInfinite,
    /// Exactly one factor is finite; its part lives in the residual.
    Mixed {
        finite: Side,
    },
}

/// An element `g · h · a` of the glued product. Acting on a point, `a` is
/// applied first, then `h`, then `g`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PvElement {
    g: Element,
    h: Element,
    residual: FinPerm,
}

impl PvElement {
    pub fn g(&self) -> &Element {
        &self.g
    }

    pub fn h(&self) -> &Element {
        &self.h
    }

    pub fn part(&self, side: Side) -> &Element {
        match side {
            Side::G => &self.g,
            Side::H => &self.h,
        }
    }

    pub fn residual(&self) -> &FinPerm {
        &self.residual
    }

    pub fn into_parts(self) -> (Element, Element, FinPerm) {
        (self.g, self.h, self.residual)
    }
}

impl fmt::Display for PvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} h={} a={}", self.g, self.h, self.residual)
    }
}

/// A letter of a word in the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    G(Element),
    H(Element),
    Perm(FinPerm),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::G(x) => write!(f, "G:{x}"),
            Letter::H(x) => write!(f, "H:{x}"),
            Letter::Perm(p) => write!(f, "PERM:{p}"),
        }
    }
}

/// Order of a glued-product element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PvOrder {
    Finite(u64),
    Infinite,
    ExceedsCap,
}

/// The two factors of a glued product with at least one of them infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PvContext {
    g: Group,
    h: Group,
    regime: Regime,
    odd_residuals: bool,
}

impl PvContext {
    /// Fails when both factors are finite; that case is handled densely by
    /// [`crate::finite_pv`].
    pub fn new(g: Group, h: Group) -> Result<PvContext> {
        let (regime, odd_residuals) = match (g.is_finite(), h.is_finite()) {
            (false, false) => (Regime::BothInfinite, false),
            (false, true) => (Regime::Mixed { finite: Side::H }, h.has_cyclic_two_sylow()?),
            (true, false) => (Regime::Mixed { finite: Side::G }, g.has_cyclic_two_sylow()?),
            (true, true) => {
                return Err(Error::Regime(format!(
                    "{} and {} are both finite; use the finite backend",
                    g.name(),
                    h.name()
                )))
            }
        };
        Ok(PvContext { g, h, regime, odd_residuals })
    }

    pub fn group(&self, side: Side) -> &Group {
        match side {
            Side::G => &self.g,
            Side::H => &self.h,
        }
    }

    pub fn g(&self) -> &Group {
        &self.g
    }

    pub fn h(&self) -> &Group {
        &self.h
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Whether odd residual permutations are group elements: never when both
    /// factors are infinite, and exactly when the finite factor has a
    /// nontrivial cyclic 2-Sylow otherwise.
    pub fn allows_odd_residuals(&self) -> bool {
        self.odd_residuals
    }

    pub fn name(&self) -> String {
        format!("{}*{}", self.g.name(), self.h.name())
    }

    pub fn identity(&self) -> PvElement {
        PvElement { g: self.g.identity(), h: self.h.identity(), residual: FinPerm::identity() }
    }

    pub fn point(&self, side: Side, x: Element) -> Point {
        Point::on(side, self.group(side), x)
    }

    pub fn is_valid_point(&self, p: &Point) -> bool {
        match p {
            Point::Base => true,
            Point::G(x) => self.g.contains(x) && !self.g.is_identity(x),
            Point::H(x) => self.h.contains(x) && !self.h.is_identity(x),
        }
    }

    /// Checks that `a` is a finitely supported permutation of valid points
    /// whose parity is allowed in this group.
    pub fn check_residual(&self, a: &FinPerm) -> Result<()> {
        if let Some(p) = a.support().find(|p| !self.is_valid_point(p)) {
            return Err(Error::InvalidPermutation(format!("{p} is not a point of {}", self.name())));
        }
        if a.parity() == Parity::Odd && !self.odd_residuals {
            return Err(Error::OddPermutation(format!("{a}")));
        }
        Ok(())
    }

    /// Assembles an element from its parts, enforcing the normal-form
    /// conventions of the regime.
    pub fn element(&self, g: Element, h: Element, residual: FinPerm) -> Result<PvElement> {
        for (side, x) in [(Side::G, &g), (Side::H, &h)] {
            if !self.group(side).contains(x) {
                return Err(Error::InvalidElement { group: self.group(side).name(), literal: format!("{x}") });
            }
        }
        if let Regime::Mixed { finite } = self.regime {
            let x = if finite == Side::G { &g } else { &h };
            if !self.group(finite).is_identity(x) {
                return Err(Error::Regime(format!(
                    "the finite factor's part must be absorbed into the residual, got {x}"
                )));
            }
        }
        self.check_residual(&residual)?;
        Ok(PvElement { g, h, residual })
    }

    /// Left translation by `x` on a finite factor as a permutation.
    pub fn translation(&self, side: Side, x: &Element) -> Result<FinPerm> {
        let group = self.group(side);
        let pairs = group.elements()?.into_iter().map(|y| {
            let p = Point::on(side, group, y.clone());
            (p.clone(), apply_factor(side, group, x, &p))
        });
        FinPerm::from_pairs(pairs)
    }

    pub fn letter(&self, letter: &Letter) -> Result<PvElement> {
        let (side, x) = match letter {
            Letter::Perm(a) => {
                self.check_residual(a)?;
                return Ok(PvElement { residual: a.clone(), ..self.identity() });
            }
            Letter::G(x) => (Side::G, x),
            Letter::H(x) => (Side::H, x),
        };
        let group = self.group(side);
        if !group.contains(x) {
            return Err(Error::InvalidElement { group: group.name(), literal: format!("{x}") });
        }
        let mut out = self.identity();
        match self.regime {
            Regime::Mixed { finite } if finite == side => out.residual = self.translation(side, x)?,
            _ if side == Side::G => out.g = x.clone(),
            _ => out.h = x.clone(),
        }
        Ok(out)
    }

    /// Image of `p` under `σ`.
    pub fn act(&self, sigma: &PvElement, p: &Point) -> Point {
        let p = sigma.residual.apply(p);
        let p = apply_factor(Side::H, &self.h, &sigma.h, &p);
        apply_factor(Side::G, &self.g, &sigma.g, &p)
    }

    /// Image of `p` under `σ⁻¹`.
    pub fn act_inverse(&self, sigma: &PvElement, p: &Point) -> Point {
        let p = apply_factor(Side::G, &self.g, &self.g.inv(&sigma.g), p);
        let p = apply_factor(Side::H, &self.h, &self.h.inv(&sigma.h), &p);
        sigma.residual.inverse().apply(&p)
    }

    pub fn multiply(&self, s1: &PvElement, s2: &PvElement) -> PvElement {
        let out = match self.regime {
            Regime::BothInfinite => self.multiply_both_infinite(s1, s2),
            Regime::Mixed { finite } => {
                let side = finite.other();
                let group = self.group(side);
                let x2_inv = group.inv(s2.part(side));
                let conj = s1.residual.relabel(|p| apply_factor(side, group, &x2_inv, p));
                let part = group.mul(s1.part(side), s2.part(side));
                let residual = conj.compose(&s2.residual);
                match side {
                    Side::G => PvElement { g: part, h: self.h.identity(), residual },
                    Side::H => PvElement { g: self.g.identity(), h: part, residual },
                }
            }
        };
        #[cfg(debug_assertions)]
        self.check_product(s1, s2, &out);
        out
    }

    fn multiply_both_infinite(&self, s1: &PvElement, s2: &PvElement) -> PvElement {
        let (gg, hg) = (&self.g, &self.h);
        let g2_inv = gg.inv(&s2.g);
        let h2_inv = hg.inv(&s2.h);
        let by_h2_inv = |p: &Point| apply_factor(Side::H, hg, &h2_inv, p);
        // h2⁻¹ [h1⁻¹, g2⁻¹] h2, trivial when h1 or g2 is
        let commutator = if hg.is_identity(&s1.h) || gg.is_identity(&s2.g) {
            FinPerm::identity()
        } else {
            FinPerm::three_cycle(Point::Base, Point::H(hg.inv(&s1.h)), Point::G(g2_inv.clone()))
                .expect("distinct points")
                .relabel(by_h2_inv)
        };
        // (g2 h2)⁻¹ a1 (g2 h2)
        let conj = s1.residual.relabel(|p| by_h2_inv(&apply_factor(Side::G, gg, &g2_inv, p)));
        PvElement {
            g: gg.mul(&s1.g, &s2.g),
            h: hg.mul(&s1.h, &s2.h),
            residual: commutator.compose(&conj).compose(&s2.residual),
        }
    }

    /// Points on which a claimed product `out = s1 · s2` is compared with the
    /// action: every transported support, the basepoint, and the images of
    /// the basepoint under the factor parts involved.
    pub fn product_probes(&self, s1: &PvElement, s2: &PvElement, out: &PvElement) -> BTreeSet<Point> {
        let mut probes: BTreeSet<Point> = BTreeSet::new();
        probes.extend(s1.residual.support().cloned());
        probes.extend(s2.residual.support().cloned());
        probes.extend(out.residual.support().cloned());
        probes.extend(s1.residual.support().map(|p| self.act_inverse(s2, p)));
        probes.insert(Point::Base);
        probes.insert(self.point(Side::G, self.g.inv(&s2.g)));
        probes.insert(self.point(Side::H, self.h.inv(&s1.h)));
        probes.insert(self.point(Side::H, self.h.inv(&self.h.mul(&s1.h, &s2.h))));
        probes.insert(self.point(Side::H, self.h.inv(&s2.h)));
        probes
    }

    /// The first point among [`PvContext::product_probes`] and `extra` where
    /// `out` disagrees with acting by `s2` and then `s1`.
    pub fn product_disagreement(
        &self,
        s1: &PvElement,
        s2: &PvElement,
        out: &PvElement,
        extra: &[Point],
    ) -> Option<Point> {
        let probes = self.product_probes(s1, s2, out);
        probes.iter().chain(extra).find(|p| self.act(out, p) != self.act(s1, &self.act(s2, p))).cloned()
    }

    #[cfg(debug_assertions)]
    fn check_product(&self, s1: &PvElement, s2: &PvElement, out: &PvElement) {
        if let Some(p) = self.product_disagreement(s1, s2, out, &[]) {
            panic!("product law disagrees with the action at {p}: ({s1}) * ({s2}) = ({out})");
        }
    }

    /// `σ⁻¹`, by normalizing the word `a⁻¹ · h⁻¹ · g⁻¹`.
    pub fn invert(&self, sigma: &PvElement) -> PvElement {
        let word = [
            PvElement { residual: sigma.residual.inverse(), ..self.identity() },
            PvElement { h: self.h.inv(&sigma.h), ..self.identity() },
            PvElement { g: self.g.inv(&sigma.g), ..self.identity() },
        ];
        word.iter().fold(self.identity(), |acc, x| self.multiply(&acc, x))
    }

    /// Left fold of [`PvContext::multiply`] over the letters.
    pub fn normalize(&self, word: &[Letter]) -> Result<PvElement> {
        word.iter().try_fold(self.identity(), |acc, l| Ok(self.multiply(&acc, &self.letter(l)?)))
    }

    pub fn pow(&self, sigma: &PvElement, k: u64) -> PvElement {
        let mut acc = self.identity();
        let mut base = sigma.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`, the 3-cycle `(e; g; h)` when both are
    /// nontrivial.
    pub fn commutator(&self, g: &Element, h: &Element) -> PvElement {
        if self.g.is_identity(g) || self.h.is_identity(h) {
            return self.identity();
        }
        let residual =
            FinPerm::three_cycle(Point::Base, Point::G(g.clone()), Point::H(h.clone())).expect("distinct points");
        PvElement { residual, ..self.identity() }
    }

    /// The canonical epimorphism onto `G × H`; needs both factors infinite.
    pub fn project(&self, sigma: &PvElement) -> Result<(Element, Element)> {
        match self.regime {
            Regime::BothInfinite => Ok((sigma.g.clone(), sigma.h.clone())),
            Regime::Mixed { finite } => Err(Error::Regime(format!(
                "projection onto the finite factor {} is undefined",
                self.group(finite).name()
            ))),
        }
    }

    /// The canonical epimorphism onto one infinite factor.
    pub fn project_side(&self, sigma: &PvElement, side: Side) -> Result<Element> {
        match self.regime {
            Regime::Mixed { finite } if finite == side => Err(Error::Regime(format!(
                "projection onto the finite factor {} is undefined",
                self.group(side).name()
            ))),
            _ => Ok(sigma.part(side).clone()),
        }
    }

    /// Membership in the kernel of [`PvContext::project`], which is the
    /// group of even finitely supported permutations.
    pub fn in_monolith(&self, sigma: &PvElement) -> Result<bool> {
        if self.regime != Regime::BothInfinite {
            return Err(Error::Regime("the monolith test needs both factors infinite".into()));
        }
        Ok(self.g.is_identity(&sigma.g) && self.h.is_identity(&sigma.h))
    }

    /// Exact order: with `m` the lcm of the factor-part orders, `σ^m` is a
    /// pure permutation and the order is `m` times its order.
    pub fn element_order(&self, sigma: &PvElement, cap: u64) -> PvOrder {
        let mut m = 1u64;
        for side in [Side::G, Side::H] {
            match self.group(side).element_order(sigma.part(side)) {
                Order::Infinite => return PvOrder::Infinite,
                Order::Finite(k) => m = m.lcm(&k),
            }
        }
        if m > cap {
            return PvOrder::ExceedsCap;
        }
        let power = self.pow(sigma, m);
        debug_assert!(self.g.is_identity(&power.g) && self.h.is_identity(&power.h));
        match power.residual.order().and_then(|r| r.checked_mul(m)) {
            Some(k) if k <= cap => PvOrder::Finite(k),
            _ => PvOrder::ExceedsCap,
        }
    }

    /// `σ · h` with `σ = (h; e; h′)`: a lift of `h` that fixes the copy of
    /// `G` pointwise.
    pub fn stabilizer_lift(&self, h: &Element, h_prime: &Element) -> Result<PvElement> {
        if self.h.is_identity(h) || self.h.is_identity(h_prime) || h == h_prime {
            return Err(Error::Precondition("need h nontrivial and h' distinct from h and e".into()));
        }
        let sigma = FinPerm::three_cycle(Point::H(h.clone()), Point::Base, Point::H(h_prime.clone()))?;
        self.normalize(&[Letter::Perm(sigma), Letter::H(h.clone())])
    }
}

type ElementMap = Box<dyn Fn(&Element) -> Element + Send + Sync>;

/// The extension of injective homomorphisms `K → G`, `L → H` between
/// infinite groups to an embedding `K ⋈ L → G ⋈ H`.
pub struct Embedding {
    source: PvContext,
    target: PvContext,
    map_g: ElementMap,
    map_h: ElementMap,
}

impl Embedding {
    /// Checks the maps on all pairs from the source balls of radius
    /// `sample_radius`: images are valid, products are preserved and
    /// distinct elements stay distinct.
    pub fn new(
        source: PvContext,
        target: PvContext,
        map_g: ElementMap,
        map_h: ElementMap,
        sample_radius: u64,
    ) -> Result<Embedding> {
        for (ctx, what) in [(&source, "source"), (&target, "target")] {
            if ctx.regime != Regime::BothInfinite {
                return Err(Error::NotInfinite(format!("{what} factors of {}", ctx.name())));
            }
        }
        for side in [Side::G, Side::H] {
            let (k, g) = (source.group(side), target.group(side));
            let map = if side == Side::G { &map_g } else { &map_h };
            let ball = k.ball(sample_radius, BALL_CAP)?;
            let images: Vec<Element> = ball.iter().map(map).collect();
            if let Some(x) = images.iter().find(|x| !g.contains(x)) {
                return Err(Error::NotEmbedding(format!("{x} is not an element of {}", g.name())));
            }
            if images.iter().collect::<BTreeSet<_>>().len() != images.len() {
                return Err(Error::NotEmbedding(format!("not injective on the {} ball", k.name())));
            }
            for (x, ix) in ball.iter().zip(&images) {
                for (y, iy) in ball.iter().zip(&images) {
                    if map(&k.mul(x, y)) != g.mul(ix, iy) {
                        return Err(Error::NotEmbedding(format!("not multiplicative at ({x}, {y})")));
                    }
                }
            }
        }
        Ok(Embedding { source, target, map_g, map_h })
    }

    pub fn source(&self) -> &PvContext {
        &self.source
    }

    pub fn target(&self) -> &PvContext {
        &self.target
    }

    pub fn map_point(&self, p: &Point) -> Point {
        match p {
            Point::Base => Point::Base,
            Point::G(x) => self.target.point(Side::G, (self.map_g)(x)),
            Point::H(x) => self.target.point(Side::H, (self.map_h)(x)),
        }
    }

    /// Relabels every part of `σ` through the maps.
    pub fn embed(&self, sigma: &PvElement) -> PvElement {
        PvElement {
            g: (self.map_g)(&sigma.g),
            h: (self.map_h)(&sigma.h),
            residual: sigma.residual.relabel(|p| self.map_point(p)),
        }
    }
}

/// Random elements for property checks: factor parts from balls of a fixed
/// radius and residuals supported on a fixed pool of points.
pub struct Sampler {
    g_ball: Vec<Element>,
    h_ball: Vec<Element>,
    pool: Vec<Point>,
    max_support: usize,
}

impl Sampler {
    pub fn new(ctx: &PvContext, radius: u64, max_support: usize) -> Result<Sampler> {
        let g_ball = ctx.g.ball(radius, BALL_CAP)?;
        let h_ball = ctx.h.ball(radius, BALL_CAP)?;
        let mut pool: BTreeSet<Point> = BTreeSet::new();
        pool.extend(g_ball.iter().map(|x| ctx.point(Side::G, x.clone())));
        pool.extend(h_ball.iter().map(|x| ctx.point(Side::H, x.clone())));
        Ok(Sampler { g_ball, h_ball, pool: pool.into_iter().collect(), max_support })
    }

    pub fn pool(&self) -> &[Point] {
        &self.pool
    }

    pub fn element_g<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.g_ball.choose(rng).expect("nonempty ball").clone()
    }

    pub fn element_h<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.h_ball.choose(rng).expect("nonempty ball").clone()
    }

    pub fn nontrivial(&self, side: Side, ctx: &PvContext, rng: &mut (impl Rng + ?Sized)) -> Element {
        let ball = if side == Side::G { &self.g_ball } else { &self.h_ball };
        let group = ctx.group(side);
        loop {
            let x = ball.choose(rng).expect("nonempty ball");
            if !group.is_identity(x) {
                return x.clone();
            }
        }
    }

    pub fn point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        self.pool.choose(rng).expect("nonempty pool").clone()
    }

    /// A uniformly shuffled permutation of a random subset of the pool, made
    /// even when the context requires it.
    pub fn residual<R: Rng + ?Sized>(&self, ctx: &PvContext, rng: &mut R) -> FinPerm {
        let k = rng.gen_range(0..=self.max_support.min(self.pool.len()));
        let pts: Vec<Point> = self.pool.choose_multiple(rng, k).cloned().collect();
        let mut images = pts.clone();
        images.shuffle(rng);
        let a = FinPerm::from_pairs(pts.into_iter().zip(images)).expect("shuffle is a bijection");
        if a.parity() == Parity::Odd && !ctx.allows_odd_residuals() {
            let s: Vec<Point> = a.support().take(2).cloned().collect();
            let t = FinPerm::transposition(s[0].clone(), s[1].clone()).expect("distinct");
            a.compose(&t)
        } else {
            a
        }
    }

    pub fn element<R: Rng + ?Sized>(&self, ctx: &PvContext, rng: &mut R) -> PvElement {
        let mut out = ctx.identity();
        match ctx.regime {
            Regime::BothInfinite => {
                out.g = self.element_g(rng);
                out.h = self.element_h(rng);
            }
            Regime::Mixed { finite: Side::H } => out.g = self.element_g(rng),
            Regime::Mixed { finite: Side::G } => out.h = self.element_h(rng),
        }
        out.residual = self.residual(ctx, rng);
        out
    }

    /// A random word of `len` letters among the factor balls.
    pub fn word<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Letter> {
        (0..len)
            .map(|_| if rng.gen_bool(0.5) { Letter::G(self.element_g(rng)) } else { Letter::H(self.element_h(rng)) })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zz() -> PvContext {
        PvContext::new(Group::integers(), Group::integers()).unwrap()
    }

    fn int(k: i64) -> Element {
        Element::Int(k)
    }

    fn elem(ctx: &PvContext, g: i64, h: i64) -> PvElement {
        ctx.element(int(g), int(h), FinPerm::identity()).unwrap()
    }

    #[test]
    fn act_examples() {
        let ctx = zz();
        assert_eq!(ctx.act(&elem(&ctx, 1, 0), &Point::Base), Point::G(int(1)));
        assert_eq!(ctx.act(&elem(&ctx, 0, 1), &Point::G(int(5))), Point::G(int(5)));
        let c = ctx.commutator(&int(1), &int(1));
        assert_eq!(ctx.act(&c, &Point::Base), Point::G(int(1)));
    }

    #[test]
    fn multiply_examples() {
        let ctx = zz();
        let gh = ctx.multiply(&elem(&ctx, 1, 0), &elem(&ctx, 0, 1));
        assert_eq!(gh, elem(&ctx, 1, 1));
        let hg = ctx.multiply(&elem(&ctx, 0, 1), &elem(&ctx, 1, 0));
        // act-composition on the three moved points: h g sends e -> g:1 -> ...
        let r = FinPerm::three_cycle(Point::Base, Point::H(int(-1)), Point::G(int(-1))).unwrap();
        assert_eq!(hg, ctx.element(int(1), int(1), r).unwrap());
        for p in [Point::Base, Point::G(int(-1)), Point::H(int(-1)), Point::G(int(3))] {
            assert_eq!(ctx.act(&hg, &p), ctx.act(&elem(&ctx, 0, 1), &ctx.act(&elem(&ctx, 1, 0), &p)));
        }
        let s = ctx.commutator(&int(2), &int(-3));
        assert_eq!(ctx.multiply(&s, &ctx.identity()), s);
    }

    #[test]
    fn invert_examples() {
        let ctx = zz();
        assert_eq!(ctx.invert(&ctx.identity()), ctx.identity());
        assert_eq!(ctx.invert(&elem(&ctx, 1, 0)), elem(&ctx, -1, 0));
        let c = ctx.commutator(&int(1), &int(2));
        assert_eq!(ctx.invert(&c), ctx.multiply(&c, &c));
    }

    #[test]
    fn normalize_examples() {
        let ctx = zz();
        assert_eq!(ctx.normalize(&[Letter::G(int(2)), Letter::G(int(3))]).unwrap(), elem(&ctx, 5, 0));
        let w = [Letter::G(int(1)), Letter::H(int(1)), Letter::G(int(-1)), Letter::H(int(-1))];
        let c = ctx.normalize(&w).unwrap();
        assert_eq!(c.to_string(), "g=0 h=0 a=(e g:1 h:1)");
        assert_eq!(ctx.normalize(&[]).unwrap(), ctx.identity());
        let odd = FinPerm::transposition(Point::Base, Point::G(int(1))).unwrap();
        assert!(matches!(ctx.normalize(&[Letter::Perm(odd)]), Err(Error::OddPermutation(_))));
    }

    #[test]
    fn commutator_examples() {
        let ctx = zz();
        assert_eq!(ctx.commutator(&int(0), &int(4)), ctx.identity());
        let c = ctx.commutator(&int(1), &int(1));
        assert!(ctx.pow(&c, 3).residual.is_identity());
        assert_eq!(ctx.pow(&c, 3), ctx.identity());
    }

    #[test]
    fn projections_and_monolith() {
        let ctx = zz();
        let a = FinPerm::three_cycle(Point::G(int(7)), Point::H(int(2)), Point::Base).unwrap();
        let s = ctx.element(int(3), int(-2), a).unwrap();
        assert_eq!(ctx.project(&s).unwrap(), (int(3), int(-2)));
        assert_eq!(ctx.project(&ctx.commutator(&int(4), &int(5))).unwrap(), (int(0), int(0)));
        assert!(ctx.in_monolith(&ctx.commutator(&int(1), &int(1))).unwrap());
        assert!(!ctx.in_monolith(&elem(&ctx, 1, 0)).unwrap());
        assert!(ctx.in_monolith(&ctx.identity()).unwrap());
    }

    #[test]
    fn order_combinatorics() {
        let ctx = zz();
        let c = |g, h| ctx.commutator(&int(g), &int(h));
        assert_eq!(ctx.element_order(&ctx.multiply(&c(1, 1), &c(2, 3)), 1000), PvOrder::Finite(5));
        assert_eq!(ctx.element_order(&ctx.multiply(&c(1, 1), &c(1, 3)), 1000), PvOrder::Finite(2));
        assert_eq!(ctx.element_order(&ctx.multiply(&c(1, 1), &c(1, 1)), 1000), PvOrder::Finite(3));
        assert_eq!(ctx.element_order(&elem(&ctx, 1, 0), 1000), PvOrder::Infinite);
        assert_eq!(ctx.element_order(&ctx.multiply(&c(1, 1), &c(2, 3)), 4), PvOrder::ExceedsCap);
        // the product is the 5-cycle (e; g'; h'; g; h)
        let five = FinPerm::from_cycles(&[vec![
            Point::Base,
            Point::G(int(2)),
            Point::H(int(3)),
            Point::G(int(1)),
            Point::H(int(1)),
        ]])
        .unwrap();
        assert_eq!(ctx.multiply(&c(1, 1), &c(2, 3)).residual, five);
    }

    #[test]
    fn stabilizer_lift_fixes_g() {
        let ctx = zz();
        let lift = ctx.stabilizer_lift(&int(1), &int(2)).unwrap();
        assert_eq!(ctx.act(&lift, &Point::Base), Point::Base);
        for k in -20..20 {
            let p = ctx.point(Side::G, int(k));
            assert_eq!(ctx.act(&lift, &p), p);
        }
        assert_eq!(ctx.project(&lift).unwrap(), (int(0), int(1)));
        // oracle: h first, then the 3-cycle (h; e; h')
        let sigma = FinPerm::three_cycle(Point::H(int(1)), Point::Base, Point::H(int(2))).unwrap();
        for k in -5..5 {
            let p = ctx.point(Side::H, int(k));
            let expected = sigma.apply(&apply_factor(Side::H, ctx.h(), &int(1), &p));
            assert_eq!(ctx.act(&lift, &p), expected);
        }
        assert!(ctx.stabilizer_lift(&int(1), &int(1)).is_err());
        assert!(ctx.stabilizer_lift(&int(0), &int(1)).is_err());
    }

    #[test]
    fn embedding_of_even_integers() {
        let ev = |x: &Element| match x {
            Element::Int(k) => Element::Int(2 * k),
            _ => unreachable!(),
        };
        let emb = Embedding::new(zz(), zz(), Box::new(ev), Box::new(ev), 3).unwrap();
        let src = emb.source().clone();
        let tgt = emb.target().clone();
        assert_eq!(emb.embed(&src.identity()), tgt.identity());
        assert_eq!(emb.embed(&elem(&src, 1, 2)), elem(&tgt, 2, 4));
        assert_eq!(emb.embed(&src.commutator(&int(3), &int(-1))), tgt.commutator(&int(6), &int(-2)));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sampler = Sampler::new(&src, 3, 6).unwrap();
        for _ in 0..200 {
            let (x, y) = (sampler.element(&src, &mut rng), sampler.element(&src, &mut rng));
            assert_eq!(emb.embed(&src.multiply(&x, &y)), tgt.multiply(&emb.embed(&x), &emb.embed(&y)));
        }
    }

    #[test]
    fn embedding_rejects_bad_maps() {
        let zero = |_: &Element| Element::Int(0);
        let id = |x: &Element| x.clone();
        assert!(matches!(Embedding::new(zz(), zz(), Box::new(zero), Box::new(id), 2), Err(Error::NotEmbedding(_))));
        let shift = |x: &Element| match x {
            Element::Int(k) => Element::Int(k + 1),
            _ => unreachable!(),
        };
        assert!(Embedding::new(zz(), zz(), Box::new(shift), Box::new(id), 2).is_err());
        let mixed = PvContext::new(Group::integers(), Group::cyclic(3).unwrap()).unwrap();
        assert!(matches!(Embedding::new(mixed, zz(), Box::new(id), Box::new(id), 2), Err(Error::NotInfinite(_))));
    }

    #[test]
    fn both_finite_is_rejected() {
        let err = PvContext::new(Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Regime(_)));
    }

    #[test]
    fn mixed_regime_absorbs_finite_part() {
        let ctx = PvContext::new(Group::integers(), Group::cyclic(3).unwrap()).unwrap();
        assert!(!ctx.allows_odd_residuals());
        let h = ctx.letter(&Letter::H(int(1))).unwrap();
        assert_eq!(h.h(), &int(0));
        assert_eq!(h.residual().to_string(), "(e h:1 h:2)");
        let c = ctx.normalize(&[Letter::G(int(1)), Letter::H(int(1)), Letter::G(int(-1)), Letter::H(int(2))]).unwrap();
        assert_eq!(c, ctx.commutator(&int(1), &int(1)));
        assert!(ctx.project(&c).is_err());
        assert_eq!(ctx.project_side(&c, Side::G).unwrap(), int(0));
        assert!(ctx.project_side(&c, Side::H).is_err());
        assert!(ctx.in_monolith(&c).is_err());

        let ctx2 = PvContext::new(Group::integers(), Group::cyclic(2).unwrap()).unwrap();
        assert!(ctx2.allows_odd_residuals());
        let t = ctx2.letter(&Letter::H(int(1))).unwrap();
        assert_eq!(t.residual().parity(), Parity::Odd);
        assert_eq!(ctx2.multiply(&t, &t), ctx2.identity());

        let rev = PvContext::new(Group::cyclic(4).unwrap(), Group::integers()).unwrap();
        assert_eq!(rev.regime(), Regime::Mixed { finite: Side::G });
        let w = [Letter::H(int(3)), Letter::G(int(1)), Letter::H(int(-3)), Letter::G(int(3))];
        let x = rev.normalize(&w).unwrap();
        assert_eq!(x, rev.invert(&rev.commutator(&int(1), &int(3))));
    }

    #[test]
    fn free_factor_commutator() {
        let ctx = PvContext::new(Group::free(2).unwrap(), Group::integers()).unwrap();
        let g = ctx.g().parse_element("aB").unwrap();
        let w = [Letter::G(g.clone()), Letter::H(int(4)), Letter::G(ctx.g().inv(&g)), Letter::H(int(-4))];
        let c = ctx.normalize(&w).unwrap();
        assert_eq!(c.to_string(), "g=e h=0 a=(e g:aB h:4)");
    }

    #[test]
    fn random_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ctx in [
            zz(),
            PvContext::new(Group::free(2).unwrap(), Group::lattice(2).unwrap()).unwrap(),
            PvContext::new(Group::integers(), Group::symmetric(3).unwrap()).unwrap(),
            PvContext::new(Group::cyclic_power(2, 2).unwrap(), Group::free(1).unwrap()).unwrap(),
        ] {
            let sampler = Sampler::new(&ctx, 2, 7).unwrap();
            for _ in 0..300 {
                let x = sampler.element(&ctx, &mut rng);
                let y = sampler.element(&ctx, &mut rng);
                let z = sampler.element(&ctx, &mut rng);
                let p = sampler.point(&mut rng);
                let xy = ctx.multiply(&x, &y);
                assert_eq!(ctx.act(&xy, &p), ctx.act(&x, &ctx.act(&y, &p)));
                assert_eq!(ctx.multiply(&xy, &z), ctx.multiply(&x, &ctx.multiply(&y, &z)));
                assert_eq!(ctx.multiply(&x, &ctx.invert(&x)), ctx.identity());
                assert!(ctx.check_residual(xy.residual()).is_ok());
                let w = sampler.word(5, &mut rng);
                let direct = w.iter().rev().fold(p.clone(), |q, l| ctx.act(&ctx.letter(l).unwrap(), &q));
                assert_eq!(ctx.act(&ctx.normalize(&w).unwrap(), &p), direct);
            }
        }
    }
}
