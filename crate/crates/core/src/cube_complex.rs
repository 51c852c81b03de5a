//! Vertices of the cube complex on which a glued product of two infinite
//! groups acts: subsets `v` of the point set with `v Δ 𝔊` finite, where `𝔊`
//! is the copy of `G` (including the basepoint).
//!
//! A vertex is stored as its finite ledger against `𝔊`: the points of `𝔊`
//! it lacks (`removed`) and the points of `ℌ ∖ {e}` it contains (`added`).
//! Only vertices and edges are materialized.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::groups::{Element, Group, BALL_CAP};
use crate::pointed_union::{FinPerm, Parity, Point, Side};
use crate::pv_core::{Letter, PvContext, PvElement, Regime};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeVertex {
    removed: BTreeSet<Point>,
    added: BTreeSet<Point>,
}

impl CubeVertex {
    /// Fails unless every removed point lies in `𝔊` and every added point
    /// lies in `ℌ ∖ {e}`.
    pub fn new(removed: impl IntoIterator<Item = Point>, added: impl IntoIterator<Item = Point>) -> Result<CubeVertex> {
        let removed: BTreeSet<Point> = removed.into_iter().collect();
        let added: BTreeSet<Point> = added.into_iter().collect();
        if let Some(p) = removed.iter().find(|p| !p.in_g()) {
            return Err(Error::Precondition(format!("removed point {p} is not in the G copy")));
        }
        if let Some(p) = added.iter().find(|p| !matches!(p, Point::H(_))) {
            return Err(Error::Precondition(format!("added point {p} is not a nontrivial H point")));
        }
        Ok(CubeVertex { removed, added })
    }

    /// The vertex `𝔊` itself, fixed by `G`.
    pub fn g_copy() -> CubeVertex {
        CubeVertex::default()
    }

    /// `𝔊 ∖ {e}`, fixed by `H`.
    pub fn punctured() -> CubeVertex {
        CubeVertex { removed: [Point::Base].into(), added: BTreeSet::new() }
    }

    pub fn removed(&self) -> &BTreeSet<Point> {
        &self.removed
    }

    pub fn added(&self) -> &BTreeSet<Point> {
        &self.added
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.in_g() {
            !self.removed.contains(p)
        } else {
            self.added.contains(p)
        }
    }

    /// `|v ∖ 𝔊| − |𝔊 ∖ v|`.
    pub fn s_invariant(&self) -> i64 {
        self.added.len() as i64 - self.removed.len() as i64
    }

    /// Size of the symmetric difference; adjacent vertices are at distance 1.
    pub fn distance(&self, other: &CubeVertex) -> usize {
        self.removed.symmetric_difference(&other.removed).count()
            + self.added.symmetric_difference(&other.added).count()
    }

    pub fn is_adjacent(&self, other: &CubeVertex) -> bool {
        self.distance(other) == 1
    }

    /// `G` fixes `v` iff `𝔊 ⊆ v`.
    pub fn fixed_by_g(&self) -> bool {
        self.removed.is_empty()
    }

    /// `H` fixes `v` iff `v ⊆ 𝔊 ∖ {e}`.
    pub fn fixed_by_h(&self) -> bool {
        self.added.is_empty() && self.removed.contains(&Point::Base)
    }

    /// The vertex with `p`'s membership flipped.
    pub fn toggle(&self, p: &Point) -> CubeVertex {
        let mut out = self.clone();
        let ledger = if p.in_g() { &mut out.removed } else { &mut out.added };
        if !ledger.remove(p) {
            ledger.insert(p.clone());
        }
        out
    }

    /// All points on which `v` and `𝔊` differ.
    pub fn ledger(&self) -> impl Iterator<Item = &Point> + '_ {
        self.removed.iter().chain(self.added.iter())
    }
}

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |set: &BTreeSet<Point>| set.iter().map(|p| format!("{p}")).collect::<Vec<_>>().join(" ");
        write!(f, "-[{}] +[{}]", list(&self.removed), list(&self.added))
    }
}

fn require_both_infinite(ctx: &PvContext) -> Result<()> {
    match ctx.regime() {
        Regime::BothInfinite => Ok(()),
        Regime::Mixed { .. } => Err(Error::Regime("the cube complex needs both factors infinite".into())),
    }
}

/// The vertex `σ(v)`.
///
/// Outside the finite set `R ∪ A ∪ supp(a) ∪ {e, h⁻¹}` the element maps
/// `𝔊`-points to `𝔊`-points and `ℌ`-points to `ℌ`-points, so only those
/// points can change ledger.
pub fn act_vertex(ctx: &PvContext, sigma: &PvElement, v: &CubeVertex) -> Result<CubeVertex> {
    require_both_infinite(ctx)?;
    let mut exceptional: BTreeSet<Point> = v.ledger().cloned().collect();
    exceptional.extend(sigma.residual().support().cloned());
    exceptional.insert(Point::Base);
    exceptional.insert(ctx.point(Side::H, ctx.h().inv(sigma.h())));
    let mut out = CubeVertex::default();
    for p in &exceptional {
        let q = ctx.act(sigma, p);
        match (q.in_g(), v.contains(p)) {
            (true, false) => {
                out.removed.insert(q);
            }
            (false, true) => {
                out.added.insert(q);
            }
            _ => {}
        }
    }
    Ok(out)
}

/// The first `n` nontrivial elements of `group` ordered by (length, value).
fn first_nontrivial(group: &Group, n: usize) -> Result<Vec<Element>> {
    let mut radius = 1;
    loop {
        let mut ball: Vec<Element> =
            group.ball(radius, BALL_CAP)?.into_iter().filter(|x| !group.is_identity(x)).collect();
        if ball.len() >= n || group.is_finite() {
            ball.sort_by_cached_key(|x| (group.length(x), x.clone()));
            ball.truncate(n);
            return Ok(ball);
        }
        radius += 1;
    }
}

/// The template vertex of `s`-value `n`: `𝔊` plus the first `n` points of
/// `ℌ ∖ {e}`, or `𝔊` minus its first `|n|` points (basepoint first).
pub fn template(ctx: &PvContext, n: i64) -> Result<CubeVertex> {
    require_both_infinite(ctx)?;
    let k = n.unsigned_abs() as usize;
    if n >= 0 {
        let added = first_nontrivial(ctx.h(), k)?.into_iter().map(Point::H);
        CubeVertex::new([], added)
    } else {
        let removed = core::iter::once(Point::Base).chain(first_nontrivial(ctx.g(), k - 1)?.into_iter().map(Point::G));
        CubeVertex::new(removed, [])
    }
}

/// An even permutation carrying `v` onto `w`, where `s(v) = s(w)`. It pairs
/// `v ∩ U` with `w ∩ U` and `U ∖ v` with `U ∖ w` in sorted order (`U` the
/// union of both ledgers), then fixes the parity with a transposition of two
/// `𝔊`-points outside `U`.
fn matching(ctx: &PvContext, v: &CubeVertex, w: &CubeVertex) -> Result<FinPerm> {
    let u: BTreeSet<Point> = v.ledger().chain(w.ledger()).cloned().collect();
    let (v_in, v_out): (Vec<&Point>, Vec<&Point>) = u.iter().partition(|p| v.contains(p));
    let (w_in, w_out): (Vec<&Point>, Vec<&Point>) = u.iter().partition(|p| w.contains(p));
    debug_assert_eq!(v_in.len(), w_in.len());
    let pairs = v_in.into_iter().zip(w_in).chain(v_out.into_iter().zip(w_out));
    let mut tau = FinPerm::from_pairs(pairs.map(|(p, q)| (p.clone(), q.clone())))?;
    if tau.parity() == Parity::Odd {
        let spare: Vec<Point> = first_nontrivial(ctx.g(), u.len() + 2)?
            .into_iter()
            .map(Point::G)
            .filter(|p| !u.contains(p))
            .take(2)
            .collect();
        let swap = FinPerm::transposition(spare[0].clone(), spare[1].clone())?;
        tau = swap.compose(&tau);
    }
    Ok(tau)
}

/// An element of `[G, H]` carrying `v` to `w`, routed through the template
/// vertex of their common fiber and verified before it is returned.
pub fn transporter(ctx: &PvContext, v: &CubeVertex, w: &CubeVertex) -> Result<PvElement> {
    require_both_infinite(ctx)?;
    let (from, to) = (v.s_invariant(), w.s_invariant());
    if from != to {
        return Err(Error::FiberMismatch { from, to });
    }
    if v == w {
        return Ok(ctx.identity());
    }
    let t = template(ctx, from)?;
    let tau_v = matching(ctx, v, &t)?;
    let tau_w = matching(ctx, w, &t)?;
    let a = tau_w.inverse().compose(&tau_v);
    let sigma = ctx.element(ctx.g().identity(), ctx.h().identity(), a)?;
    if act_vertex(ctx, &sigma, v)? != *w || !ctx.in_monolith(&sigma)? {
        return Err(Error::Precondition(format!("transporter failed verification for {v} -> {w}")));
    }
    Ok(sigma)
}

/// All vertices within `radius` of `𝔊` whose ledgers use only points with
/// payload length at most `payload`.
pub fn vertex_ball(ctx: &PvContext, radius: usize, payload: u64) -> Result<Vec<CubeVertex>> {
    require_both_infinite(ctx)?;
    let pool = point_pool(ctx, payload)?;
    let mut out = Vec::new();
    for k in 0..=radius.min(pool.len()) {
        for subset in itertools::Itertools::combinations(pool.iter(), k) {
            let mut v = CubeVertex::default();
            for p in subset {
                v = v.toggle(p);
            }
            out.push(v);
        }
    }
    out.sort();
    Ok(out)
}

/// `𝔊`- and `ℌ`-points with payload length at most `payload`.
pub fn point_pool(ctx: &PvContext, payload: u64) -> Result<Vec<Point>> {
    let mut pool: BTreeSet<Point> = BTreeSet::new();
    for side in [Side::G, Side::H] {
        let group = ctx.group(side);
        pool.extend(group.ball(payload, BALL_CAP)?.into_iter().map(|x| Point::on(side, group, x)));
    }
    Ok(pool.into_iter().collect())
}

/// Index pairs `(i, j)`, `i < j`, of adjacent vertices in `vertices`.
pub fn edges(vertices: &[CubeVertex]) -> Vec<(usize, usize)> {
    let index: BTreeMap<&CubeVertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut out = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        // neighbors with a smaller ledger are found by dropping a ledger point
        for p in v.ledger() {
            if let Some(&j) = index.get(&v.toggle(p)) {
                out.push((j.min(i), j.max(i)));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Adjacent pairs `(x, y)` with `x` fixed by `G` and `y` fixed by `H`.
pub fn adjacent_fixed_pairs(vertices: &[CubeVertex]) -> Vec<(CubeVertex, CubeVertex)> {
    let fixed_h: Vec<&CubeVertex> = vertices.iter().filter(|v| v.fixed_by_h()).collect();
    let mut out = Vec::new();
    for x in vertices.iter().filter(|v| v.fixed_by_g()) {
        for y in &fixed_h {
            if x.is_adjacent(y) {
                out.push((x.clone(), (*y).clone()));
            }
        }
    }
    out
}

/// A random vertex toggling up to `max` points of `pool`.
pub fn random_vertex<R: Rng + ?Sized>(pool: &[Point], max: usize, rng: &mut R) -> CubeVertex {
    let k = rng.gen_range(0..=max.min(pool.len()));
    let mut v = CubeVertex::default();
    for p in pool.choose_multiple(rng, k) {
        v = v.toggle(p);
    }
    v
}

/// One step of the orbit-growth witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthStep {
    pub word: Vec<Letter>,
    pub distance: usize,
}

/// Distances `d(w 𝔊, 𝔊)` along the prefixes of `H:y G:x H:y G:x ...` of
/// length `1..=max_len`, where `x` and `y` are nontrivial. `G` fixes `𝔊`, so
/// the word starts on the `H` side.
pub fn orbit_growth_witness(ctx: &PvContext, x: &Element, y: &Element, max_len: usize) -> Result<Vec<GrowthStep>> {
    require_both_infinite(ctx)?;
    let letters = [Letter::H(y.clone()), Letter::G(x.clone())];
    let elems = [ctx.letter(&letters[0])?, ctx.letter(&letters[1])?];
    let mut sigma = ctx.identity();
    let mut word = Vec::new();
    let mut out = Vec::new();
    for i in 0..max_len {
        sigma = ctx.multiply(&sigma, &elems[i % 2]);
        word.push(letters[i % 2].clone());
        let distance = act_vertex(ctx, &sigma, &CubeVertex::g_copy())?.distance(&CubeVertex::g_copy());
        out.push(GrowthStep { word: word.clone(), distance });
    }
    Ok(out)
}

/// `max d(w 𝔊, 𝔊)` over all words of length `len` in the given letters.
pub fn max_orbit_distance(ctx: &PvContext, letters: &[Letter], len: usize) -> Result<usize> {
    require_both_infinite(ctx)?;
    let elems = letters.iter().map(|l| ctx.letter(l)).collect::<Result<Vec<_>>>()?;
    // depth-first over words, sharing prefixes
    let mut best = 0;
    let mut stack = alloc::vec![(ctx.identity(), 0usize)];
    while let Some((sigma, depth)) = stack.pop() {
        if depth == len {
            let d = act_vertex(ctx, &sigma, &CubeVertex::g_copy())?.distance(&CubeVertex::g_copy());
            best = best.max(d);
            continue;
        }
        for e in &elems {
            stack.push((ctx.multiply(&sigma, e), depth + 1));
        }
    }
    Ok(best)
}
