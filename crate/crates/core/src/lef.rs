//! Finite approximations of a glued product.
//!
//! For a window size `n`, each infinite factor is mapped onto a finite
//! quotient that is injective on its ball of radius `4n`, and elements of
//! the window `F_k = B_G(k) B_H(k) Alt(C_k)` (`C_k` the union of the two
//! balls as points) are sent to permutations of the finite union by
//!
//! `Φ(g h a) = T(π g) ∘ T(π h) ∘ π a π⁻¹`.
//!
//! `Φ` is multiplicative on `F_n` and injective on `F_{2n}`. The checks in
//! this module verify both claims, the window closure `F_n F_n ⊆ F_{2n}`, and
//! the two identities the argument rests on.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::finite_pv::{DensePerm, FiniteUnion};
use crate::groups::{Element, Group, GroupKind, BALL_CAP};
use crate::pointed_union::{FinPerm, Parity, Point, Side};
use crate::pv_core::{PvContext, PvElement, Regime};
use crate::{Error, Result};

/// Default pair-check budget for exhaustive modes.
pub const DEFAULT_BUDGET: u128 = 10_000_000;
/// Counterexamples kept verbatim in a report.
pub const MAX_REPORTED_FAILURES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
enum QuotientMap {
    Identity,
    ModInt(u64),
    ModVec(u64),
}

/// A homomorphism onto a finite group that is injective on a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    source: Group,
    target: Group,
    map: QuotientMap,
    radius: u64,
}

impl FiniteQuotient {
    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    /// Radius of the ball on which the projection is known to be injective.
    pub fn injectivity_radius(&self) -> u64 {
        self.radius
    }

    pub fn project(&self, x: &Element) -> Element {
        match (&self.map, x) {
            (QuotientMap::Identity, _) => x.clone(),
            (QuotientMap::ModInt(m), Element::Int(k)) => Element::Int(k.rem_euclid(*m as i64)),
            (QuotientMap::ModVec(m), Element::Tuple(ks)) => {
                Element::Tuple(ks.iter().map(|k| k.rem_euclid(*m as i64)).collect())
            }
            _ => panic!("{x} is not an element of {}", self.source.name()),
        }
    }

    fn verify_injective(&self) -> Result<()> {
        let ball = self.source.ball(self.radius, BALL_CAP)?;
        let mut images: Vec<Element> = ball.iter().map(|x| self.project(x)).collect();
        images.sort();
        if images.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotEmbedding(format!(
                "{} is not injective on the {}-ball",
                self.target.name(),
                self.radius
            )));
        }
        Ok(())
    }
}

/// The default quotient injective on the ball of `radius`: `Z/m` (or
/// `(Z/m)^d`) with `m = 2·radius + 1`, and the identity on finite groups.
pub fn build_quotient(group: &Group, radius: u64) -> Result<FiniteQuotient> {
    build_quotient_with_modulus(group, radius, None)
}

/// As [`build_quotient`] with an explicit modulus, which must be at least
/// `2·radius + 1`.
pub fn build_quotient_with_modulus(group: &Group, radius: u64, modulus: Option<u64>) -> Result<FiniteQuotient> {
    let m = modulus.unwrap_or(2 * radius + 1);
    let (target, map, radius) = match group.kind() {
        _ if group.is_finite() => (group.clone(), QuotientMap::Identity, u64::MAX),
        GroupKind::Integers | GroupKind::Lattice(_) => {
            if m < 2 * radius + 1 {
                return Err(Error::InsufficientRadius { radius: (m - 1) / 2, required: radius });
            }
            match group.kind() {
                GroupKind::Integers => (Group::cyclic(m)?, QuotientMap::ModInt(m), radius),
                GroupKind::Lattice(d) => (Group::cyclic_power(m, *d)?, QuotientMap::ModVec(m), radius),
                _ => unreachable!(),
            }
        }
        _ => return Err(Error::NoProvider { what: "finite quotient", group: group.name() }),
    };
    let q = FiniteQuotient { source: group.clone(), target, map, radius };
    if radius != u64::MAX {
        q.verify_injective()?;
    }
    Ok(q)
}

/// Whether `σ ∈ F_n`: factor parts of length at most `n`, residual supported
/// in `C_n` and of a parity allowed in the window (even unless the context
/// admits odd residuals).
pub fn in_window(ctx: &PvContext, sigma: &PvElement, n: u64) -> bool {
    ctx.g().length(sigma.g()) <= n
        && ctx.h().length(sigma.h()) <= n
        && sigma.residual().support().all(|p| point_in_window(ctx, p, n))
        && (ctx.allows_odd_residuals() || sigma.residual().parity() == Parity::Even)
}

fn point_in_window(ctx: &PvContext, p: &Point, n: u64) -> bool {
    match p {
        Point::Base => true,
        Point::G(x) => ctx.g().length(x) <= n,
        Point::H(y) => ctx.h().length(y) <= n,
    }
}

/// `C_n` in canonical order.
pub fn window_points(ctx: &PvContext, n: u64) -> Result<Vec<Point>> {
    let mut pts: Vec<Point> = Vec::new();
    for side in [Side::G, Side::H] {
        let group = ctx.group(side);
        pts.extend(group.ball(n, BALL_CAP)?.into_iter().map(|x| Point::on(side, group, x)));
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Exhaustive enumeration, or `k` random samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sample(u64),
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            _ => s.strip_prefix("sample:").and_then(|k| k.parse().ok()).map(Mode::Sample).ok_or_else(|| Error::Parse {
                position: 0,
                message: format!("expected exhaustive or sample:<k>, got {s:?}"),
            }),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Sample(k) => write!(f, "sample:{k}"),
        }
    }
}

/// Outcome of one verification harness.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub pairs_checked: u64,
    pub failure_count: u64,
    /// The first [`MAX_REPORTED_FAILURES`] counterexamples, verbatim.
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> CheckReport {
        CheckReport { check: check.into(), ..CheckReport::default() }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn fail(&mut self, detail: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(detail);
        }
    }

    /// Combines reports of disjoint slices of the same check, in order.
    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        self.pairs_checked += other.pairs_checked;
        self.failure_count += other.failure_count;
        let room = MAX_REPORTED_FAILURES - self.failures.len();
        self.failures.extend(other.failures.into_iter().take(room));
        self
    }
}

/// Fails with [`Error::BudgetExceeded`] when `needed > budget`.
pub fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

/// The approximation `Φ_n` together with its quotients.
pub struct Lef {
    ctx: PvContext,
    n: u64,
    qg: FiniteQuotient,
    qh: FiniteQuotient,
    union: FiniteUnion,
    translations: [BTreeMap<Element, DensePerm>; 2],
}

impl Lef {
    /// Uses `Z/m` quotients with `m = modulus` or the default `8n + 1`.
    pub fn new(ctx: PvContext, n: u64, modulus: Option<u64>) -> Result<Lef> {
        if n == 0 {
            return Err(Error::Precondition("window size must be positive".into()));
        }
        let m = modulus.unwrap_or(8 * n + 1);
        let qg = build_quotient_with_modulus(ctx.g(), 4 * n, Some(m))?;
        let qh = build_quotient_with_modulus(ctx.h(), 4 * n, Some(m))?;
        Lef::with_quotients(ctx, n, qg, qh)
    }

    pub fn with_quotients(ctx: PvContext, n: u64, qg: FiniteQuotient, qh: FiniteQuotient) -> Result<Lef> {
        for q in [&qg, &qh] {
            if q.injectivity_radius() < 4 * n {
                return Err(Error::InsufficientRadius { radius: q.injectivity_radius(), required: 4 * n });
            }
        }
        if qg.source() != ctx.g() || qh.source() != ctx.h() {
            return Err(Error::Precondition("quotient sources must be the factors".into()));
        }
        let union = FiniteUnion::new(qg.target().clone(), qh.target().clone(), usize::MAX)?;
        let mut lef = Lef { ctx, n, qg, qh, union, translations: [BTreeMap::new(), BTreeMap::new()] };
        for (i, side) in [Side::G, Side::H].into_iter().enumerate() {
            let ball = lef.ctx.group(side).ball(2 * n, BALL_CAP)?;
            let table = ball.into_iter().map(|x| {
                let t = lef.union.translation(side, &lef.quotient(side).project(&x));
                (x, t)
            });
            lef.translations[i] = table.collect();
        }
        Ok(lef)
    }

    pub fn context(&self) -> &PvContext {
        &self.ctx
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn quotient(&self, side: Side) -> &FiniteQuotient {
        match side {
            Side::G => &self.qg,
            Side::H => &self.qh,
        }
    }

    /// Number of points of the finite union.
    pub fn degree(&self) -> usize {
        self.union.degree()
    }

    /// The pointwise projection `π` onto the finite union.
    pub fn project_point(&self, p: &Point) -> Point {
        match p {
            Point::Base => Point::Base,
            Point::G(x) => self.union.point(Side::G, self.qg.project(x)),
            Point::H(y) => self.union.point(Side::H, self.qh.project(y)),
        }
    }

    fn project_index(&self, p: &Point) -> usize {
        self.union.index_of(&self.project_point(p))
    }

    fn translation(&self, side: Side, x: &Element) -> DensePerm {
        let i = if side == Side::G { 0 } else { 1 };
        match self.translations[i].get(x) {
            Some(t) => t.clone(),
            None => self.union.translation(side, &self.quotient(side).project(x)),
        }
    }

    /// `π a π⁻¹` on the image of the support, identity elsewhere.
    pub fn pushforward(&self, a: &FinPerm) -> DensePerm {
        let mut images: Vec<usize> = (0..self.degree()).collect();
        for (p, q) in a.pairs() {
            images[self.project_index(p)] = self.project_index(q);
        }
        DensePerm::from_images(images).expect("π is injective on the window")
    }

    /// `Φ_n(σ)` for `σ ∈ F_{2n}`.
    pub fn phi(&self, sigma: &PvElement) -> Result<DensePerm> {
        if !in_window(&self.ctx, sigma, 2 * self.n) {
            return Err(Error::OutsideWindow { window: 2 * self.n });
        }
        let tg = self.translation(Side::G, sigma.g());
        let th = self.translation(Side::H, sigma.h());
        Ok(tg.compose(&th.compose(&self.pushforward(sigma.residual()))))
    }

    fn window_balls(&self, k: u64) -> Result<[Vec<Element>; 2]> {
        let ball = |side: Side| -> Result<Vec<Element>> {
            match self.ctx.regime() {
                // the finite factor acts through the residual
                Regime::Mixed { finite } if finite == side => Ok(alloc::vec![self.ctx.group(side).identity()]),
                _ => self.ctx.group(side).ball(k, BALL_CAP),
            }
        };
        Ok([ball(Side::G)?, ball(Side::H)?])
    }

    /// `|F_k|`, saturating.
    pub fn window_size(&self, k: u64) -> Result<u128> {
        let [bg, bh] = self.window_balls(k)?;
        let c = window_points(&self.ctx, k)?.len();
        let perms = if self.ctx.allows_odd_residuals() { factorial(c) } else { factorial(c) / 2 };
        Ok((bg.len() as u128).saturating_mul(bh.len() as u128).saturating_mul(perms))
    }

    /// All of `F_k`, refusing more than `budget` elements.
    pub fn window_elements(&self, k: u64, budget: u128) -> Result<Vec<PvElement>> {
        check_budget(self.window_size(k)?, budget)?;
        let [bg, bh] = self.window_balls(k)?;
        let pts = window_points(&self.ctx, k)?;
        let mut residuals = Vec::new();
        for images in pts.iter().cloned().permutations(pts.len()) {
            let a = FinPerm::from_pairs(pts.iter().cloned().zip(images)).expect("permutation");
            if self.ctx.allows_odd_residuals() || a.parity() == Parity::Even {
                residuals.push(a);
            }
        }
        let mut out = Vec::with_capacity(bg.len() * bh.len() * residuals.len());
        for (x, y) in bg.iter().cartesian_product(&bh) {
            for a in &residuals {
                out.push(self.ctx.element(x.clone(), y.clone(), a.clone())?);
            }
        }
        Ok(out)
    }

    /// A uniformly random element of `F_k`.
    pub fn random_window_element<R: Rng + ?Sized>(&self, k: u64, rng: &mut R) -> Result<PvElement> {
        let [bg, bh] = self.window_balls(k)?;
        let pts = window_points(&self.ctx, k)?;
        let mut images = pts.clone();
        images.shuffle(rng);
        let mut a = FinPerm::from_pairs(pts.iter().cloned().zip(images))?;
        if !self.ctx.allows_odd_residuals() && a.parity() == Parity::Odd {
            a = FinPerm::transposition(pts[0].clone(), pts[1].clone())?.compose(&a);
        }
        let x = bg.choose(rng).expect("nonempty ball").clone();
        let y = bh.choose(rng).expect("nonempty ball").clone();
        self.ctx.element(x, y, a)
    }

    fn check_pair(&self, s1: &PvElement, s2: &PvElement, p1: &DensePerm, p2: &DensePerm, report: &mut CheckReport) {
        report.pairs_checked += 1;
        let product = self.ctx.multiply(s1, s2);
        if !in_window(&self.ctx, &product, 2 * self.n) {
            report.fail(format!("window closure: ({s1}) * ({s2}) = ({product}) not in F{}", 2 * self.n));
            return;
        }
        let lhs = self.phi(&product).expect("checked window");
        if lhs != p1.compose(p2) {
            report.fail(format!("multiplicativity: sigma1=({s1}) sigma2=({s2})"));
        }
    }

    /// Multiplicativity and window closure over the pairs with flat index in
    /// `range` of `elements × elements`, whose images are `images`. Disjoint
    /// ranges can be checked independently and merged.
    pub fn multiplicativity_range(
        &self,
        elements: &[PvElement],
        images: &[DensePerm],
        range: Range<u64>,
    ) -> CheckReport {
        let mut report = CheckReport::new("multiplicativity");
        let len = elements.len() as u64;
        for k in range {
            let (i, j) = ((k / len) as usize, (k % len) as usize);
            self.check_pair(&elements[i], &elements[j], &images[i], &images[j], &mut report);
        }
        report
    }

    /// `Φ_n(σ₁σ₂) = Φ_n(σ₁)Φ_n(σ₂)` and `σ₁σ₂ ∈ F_{2n}` on `F_n × F_n`.
    pub fn check_multiplicativity<R: Rng + ?Sized>(
        &self,
        mode: Mode,
        budget: u128,
        rng: &mut R,
    ) -> Result<CheckReport> {
        match mode {
            Mode::Exhaustive => {
                let size = self.window_size(self.n)?;
                check_budget(size.saturating_mul(size), budget)?;
                let elements = self.window_elements(self.n, budget)?;
                let images = elements.iter().map(|s| self.phi(s)).collect::<Result<Vec<_>>>()?;
                let total = (elements.len() as u64).pow(2);
                Ok(self.multiplicativity_range(&elements, &images, 0..total))
            }
            Mode::Sample(k) => {
                check_budget(k as u128, budget)?;
                let mut report = CheckReport::new("multiplicativity");
                for _ in 0..k {
                    let s1 = self.random_window_element(self.n, rng)?;
                    let s2 = self.random_window_element(self.n, rng)?;
                    let (p1, p2) = (self.phi(&s1)?, self.phi(&s2)?);
                    self.check_pair(&s1, &s2, &p1, &p2, &mut report);
                }
                Ok(report)
            }
        }
    }

    /// `Φ_n(σ) = Φ_n(σ′) ⇒ σ = σ′` on `F_{2n}`. The exhaustive mode sorts
    /// all images, which settles every pair at once.
    pub fn check_injectivity<R: Rng + ?Sized>(&self, mode: Mode, budget: u128, rng: &mut R) -> Result<CheckReport> {
        let mut report = CheckReport::new("injectivity");
        match mode {
            Mode::Exhaustive => {
                let size = self.window_size(2 * self.n)?;
                check_budget(size.saturating_mul(size.saturating_sub(1)) / 2, budget)?;
                let elements = self.window_elements(2 * self.n, budget)?;
                let mut images =
                    elements.iter().enumerate().map(|(i, s)| Ok((self.phi(s)?, i))).collect::<Result<Vec<_>>>()?;
                images.sort_unstable();
                for w in images.windows(2) {
                    if w[0].0 == w[1].0 {
                        report.fail(format!("collision: ({}) and ({})", elements[w[0].1], elements[w[1].1]));
                    }
                }
                report.pairs_checked = (elements.len() as u64) * (elements.len() as u64 - 1) / 2;
            }
            Mode::Sample(k) => {
                check_budget(k as u128, budget)?;
                while report.pairs_checked < k {
                    let s1 = self.random_window_element(2 * self.n, rng)?;
                    let s2 = self.random_window_element(2 * self.n, rng)?;
                    if s1 == s2 {
                        continue;
                    }
                    report.pairs_checked += 1;
                    if self.phi(&s1)? == self.phi(&s2)? {
                        report.fail(format!("collision: ({s1}) and ({s2})"));
                    }
                }
            }
        }
        Ok(report)
    }

    /// `π(x·z) = π(x)·π(z)` for `x` in either factor's `2n`-ball and `z` in
    /// `C_{4n}`.
    pub fn check_weak_equivariance(&self) -> Result<CheckReport> {
        let mut report = CheckReport::new("weak_equivariance");
        let points = window_points(&self.ctx, 4 * self.n)?;
        for side in [Side::G, Side::H] {
            let group = self.ctx.group(side);
            let quotient = self.quotient(side);
            for x in group.ball(2 * self.n, BALL_CAP)? {
                for z in &points {
                    report.pairs_checked += 1;
                    let lhs = self.project_point(&crate::pointed_union::apply_factor(side, group, &x, z));
                    let rhs = crate::pointed_union::apply_factor(
                        side,
                        quotient.target(),
                        &quotient.project(&x),
                        &self.project_point(z),
                    );
                    if lhs != rhs {
                        report.fail(format!("{side:?}:{x} at {z}: {lhs} vs {rhs}"));
                    }
                }
            }
        }
        Ok(report)
    }

    /// `Φ_n(a)(π y) = π(a y)` for every permutation `a` of `C_{2n}` allowed in
    /// the window and every `y ∈ C_{4n}`.
    pub fn check_pushforward(&self, budget: u128) -> Result<CheckReport> {
        let mut report = CheckReport::new("pushforward");
        let support = window_points(&self.ctx, 2 * self.n)?;
        let probes = window_points(&self.ctx, 4 * self.n)?;
        check_budget(factorial(support.len()).saturating_mul(probes.len() as u128), budget)?;
        for images in support.iter().cloned().permutations(support.len()) {
            let a = FinPerm::from_pairs(support.iter().cloned().zip(images)).expect("permutation");
            if !self.ctx.allows_odd_residuals() && a.parity() == Parity::Odd {
                continue;
            }
            let pushed = self.pushforward(&a);
            for y in &probes {
                report.pairs_checked += 1;
                if pushed.apply(self.project_index(y)) != self.project_index(&a.apply(y)) {
                    report.fail(format!("a=({a}) y={y}"));
                }
            }
        }
        Ok(report)
    }

    /// `π` restricted to `C_{4n}` is injective, hence a bijection onto its
    /// image `C′_{4n}`.
    pub fn check_bijection(&self) -> Result<CheckReport> {
        let mut report = CheckReport::new("bijection");
        let points = window_points(&self.ctx, 4 * self.n)?;
        let mut seen: BTreeMap<Point, Point> = BTreeMap::new();
        for p in points {
            report.pairs_checked += 1;
            if let Some(q) = seen.insert(self.project_point(&p), p.clone()) {
                report.fail(format!("{p} and {q} have the same image"));
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pv_core::Letter;
    use alloc::string::ToString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zz() -> PvContext {
        PvContext::new(Group::integers(), Group::integers()).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let q = build_quotient(&Group::integers(), 4).unwrap();
        assert_eq!(q.target().order(), Some(9));
        assert_eq!(q.project(&Element::Int(-4)), Element::Int(5));
        let q = build_quotient(&Group::lattice(2).unwrap(), 2).unwrap();
        assert_eq!(q.target().name(), "(Z/5)^2");
        let c6 = Group::cyclic(6).unwrap();
        let q = build_quotient(&c6, 100).unwrap();
        assert_eq!(q.target(), &c6);
        assert!(matches!(build_quotient(&Group::free(2).unwrap(), 1), Err(Error::NoProvider { .. })));
        assert!(matches!(
            build_quotient_with_modulus(&Group::integers(), 4, Some(8)),
            Err(Error::InsufficientRadius { .. })
        ));
    }

    #[test]
    fn quotient_is_homomorphism() {
        let z2 = Group::lattice(2).unwrap();
        let q = build_quotient(&z2, 3).unwrap();
        let ball = z2.ball(3, BALL_CAP).unwrap();
        for x in &ball {
            for y in &ball {
                assert_eq!(q.project(&z2.mul(x, y)), q.target().mul(&q.project(x), &q.project(y)));
            }
        }
    }

    #[test]
    fn window_examples() {
        let ctx = zz();
        assert!(in_window(&ctx, &ctx.identity(), 0));
        let s = ctx.element(Element::Int(3), Element::Int(0), FinPerm::identity()).unwrap();
        assert!(!in_window(&ctx, &s, 2));
        assert!(in_window(&ctx, &ctx.commutator(&Element::Int(1), &Element::Int(1)), 1));
        assert_eq!(window_points(&ctx, 1).unwrap().len(), 5);
    }

    #[test]
    fn phi_examples() {
        let ctx = zz();
        let lef = Lef::new(ctx.clone(), 1, Some(17)).unwrap();
        assert_eq!(lef.degree(), 33);
        assert!(lef.phi(&ctx.identity()).unwrap().is_identity());
        let g1 = ctx.letter(&Letter::G(Element::Int(1))).unwrap();
        let p = lef.phi(&g1).unwrap();
        // translation by 1 on the G block: e -> g:1 -> g:2 ... g:16 -> e
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(16), 0);
        assert!((17..33).all(|i| p.apply(i) == i));
        let s = ctx.multiply(&g1, &ctx.letter(&Letter::H(Element::Int(1))).unwrap());
        assert_eq!(lef.phi(&ctx.multiply(&s, &s)).unwrap(), lef.phi(&s).unwrap().compose(&lef.phi(&s).unwrap()));
        let far = ctx.element(Element::Int(3), Element::Int(0), FinPerm::identity()).unwrap();
        assert_eq!(lef.phi(&far), Err(Error::OutsideWindow { window: 2 }));
        let q = build_quotient(&Group::integers(), 2).unwrap();
        assert!(matches!(
            Lef::with_quotients(ctx, 1, q.clone(), q),
            Err(Error::InsufficientRadius { radius: 2, required: 4 })
        ));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("exhaustive".parse::<Mode>().unwrap(), Mode::Exhaustive);
        assert_eq!("sample:100".parse::<Mode>().unwrap(), Mode::Sample(100));
        assert!("sample:x".parse::<Mode>().is_err());
        assert_eq!(Mode::Sample(7).to_string(), "sample:7");
    }

    #[test]
    fn window_sizes() {
        let lef = Lef::new(zz(), 1, Some(17)).unwrap();
        assert_eq!(lef.window_size(1).unwrap(), 540);
        assert_eq!(lef.window_size(2).unwrap(), 4_536_000);
        let elements = lef.window_elements(1, DEFAULT_BUDGET).unwrap();
        assert_eq!(elements.len(), 540);
        assert!(matches!(lef.window_elements(2, 1000), Err(Error::BudgetExceeded { .. })));
        let mixed = |h| Lef::new(PvContext::new(Group::integers(), h).unwrap(), 1, None).unwrap();
        assert_eq!(mixed(Group::cyclic(2).unwrap()).window_size(1).unwrap(), 72);
        assert_eq!(mixed(Group::cyclic(3).unwrap()).window_size(1).unwrap(), 180);
    }

    #[test]
    fn sampled_checks_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lef = Lef::new(zz(), 2, None).unwrap();
        let r = lef.check_multiplicativity(Mode::Sample(300), DEFAULT_BUDGET, &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let lef = Lef::new(zz(), 1, Some(17)).unwrap();
        let r = lef.check_injectivity(Mode::Sample(300), DEFAULT_BUDGET, &mut rng).unwrap();
        assert_eq!((r.pairs_checked, r.failure_count), (300, 0));
        assert!(lef.check_weak_equivariance().unwrap().passed());
        assert!(lef.check_bijection().unwrap().passed());
        let r = lef.check_multiplicativity(Mode::Exhaustive, 1000, &mut rng);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn mixed_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for h in [Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()] {
            let lef = Lef::new(PvContext::new(Group::integers(), h).unwrap(), 1, None).unwrap();
            let r = lef.check_multiplicativity(Mode::Exhaustive, DEFAULT_BUDGET, &mut rng).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert!(lef.check_weak_equivariance().unwrap().passed());
        }
    }

    #[test]
    fn broken_quotient_is_detected() {
        // Z/3 is not injective on the 4-ball; bypass the radius guard to see
        // the harness catch it
        let ctx = zz();
        let mut lef = Lef::new(ctx, 1, Some(9)).unwrap();
        let q = FiniteQuotient { map: QuotientMap::ModInt(3), target: Group::cyclic(3).unwrap(), ..lef.qg.clone() };
        lef.qg = q.clone();
        lef.qh = q;
        lef.union = FiniteUnion::new(Group::cyclic(3).unwrap(), Group::cyclic(3).unwrap(), 64).unwrap();
        lef.translations = [BTreeMap::new(), BTreeMap::new()];
        let r = lef.check_bijection().unwrap();
        assert!(!r.passed());
        assert!(r.failures[0].contains("same image"));
    }
}
