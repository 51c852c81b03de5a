//! The property-suite runner: every module invariant as a named, seeded,
//! reproducible check.
//!
//! Each check draws from its own ChaCha stream (selected by hashing the
//! check's name), so a check's outcome depends only on the seed and the
//! configuration, never on which other checks ran or in which order.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use glued_core::cube_complex::{self, CubeVertex};
use glued_core::dynamics::{folner_ratio, folner_set, free_semigroup_check};
use glued_core::finite_pv::{classify, restrict_to_subgroups, translation_sign, verify_classification, FiniteUnion};
use glued_core::groups::{brute_force_order, schreier_sims_order, BALL_CAP};
use glued_core::lef::{CheckReport, Lef, Mode};
use glued_core::pointed_union::apply_factor;
use glued_core::pv_core::{Embedding, PvOrder, Sampler};
use glued_core::{Element, FinPerm, Group, Letter, Parity, Point, PvContext, Regime, Side};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::parallel::par_multiplicativity;
use crate::spec::parse_context;

pub const SUITES: [&str; 5] = ["core", "finite", "cube", "lef", "dynamics"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Jsonl,
}

/// Sample counts per check family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Samples {
    pub laws: u64,
    pub commutator: u64,
    pub product: u64,
    pub orders: u64,
    pub cube: u64,
    pub transporter: u64,
    pub injectivity: u64,
    pub lef_n2: u64,
}

impl Default for Samples {
    fn default() -> Samples {
        Samples {
            laws: 1_000,
            commutator: 1_000,
            product: 10_000,
            orders: 100,
            cube: 1_000,
            transporter: 100,
            injectivity: 100_000,
            lef_n2: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextSpec {
    pub left: String,
    pub right: String,
}

/// The optional TOML configuration file. Command-line flags win.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub budget: Option<u64>,
    #[serde(default)]
    pub samples: Samples,
    pub context: Option<ContextSpec>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<ConfigFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: u128,
    pub samples: Samples,
    /// Replaces the default context list of the `core` and `cube` suites.
    pub context: Option<ContextSpec>,
    pub format: Format,
    /// Echoed into reproduction commands.
    pub config_path: Option<PathBuf>,
    pub budget_from_env: bool,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 0,
            budget: glued_core::lef::DEFAULT_BUDGET,
            samples: Samples::default(),
            context: None,
            format: Format::Text,
            config_path: None,
            budget_from_env: false,
        }
    }
}

type CheckFn = fn(&Env, &mut ChaCha8Rng) -> CliResult<CheckReport>;

struct Check {
    suite: &'static str,
    name: &'static str,
    run: CheckFn,
}

const CHECKS: &[Check] = &[
    Check { suite: "core", name: "group_laws", run: group_laws },
    Check { suite: "core", name: "ball_growth", run: ball_growth },
    Check { suite: "core", name: "schreier_sims", run: schreier_sims },
    Check { suite: "core", name: "perm_laws", run: perm_laws },
    Check { suite: "core", name: "commutator_law", run: commutator_law },
    Check { suite: "core", name: "product_law", run: product_law },
    Check { suite: "core", name: "action", run: action },
    Check { suite: "core", name: "inverse_law", run: inverse_law },
    Check { suite: "core", name: "epimorphism", run: epimorphism },
    Check { suite: "core", name: "order_combinatorics", run: order_combinatorics },
    Check { suite: "core", name: "embedding", run: embedding },
    Check { suite: "core", name: "stabilizer_lift", run: stabilizer_lift },
    Check { suite: "finite", name: "classification", run: classification },
    Check { suite: "finite", name: "translation_sign", run: translation_signs },
    Check { suite: "finite", name: "classify_symmetric", run: classify_symmetric },
    Check { suite: "finite", name: "restriction", run: restriction },
    Check { suite: "cube", name: "s_invariance", run: s_invariance },
    Check { suite: "cube", name: "isometry", run: isometry },
    Check { suite: "cube", name: "vertex_action", run: vertex_action },
    Check { suite: "cube", name: "transporter", run: transporter },
    Check { suite: "cube", name: "fiber_mismatch", run: fiber_mismatch },
    Check { suite: "cube", name: "unique_fixed_pair", run: unique_fixed_pair },
    Check { suite: "cube", name: "unbounded_orbits", run: unbounded_orbits },
    Check { suite: "lef", name: "multiplicativity", run: lef_multiplicativity },
    Check { suite: "lef", name: "injectivity", run: lef_injectivity },
    Check { suite: "lef", name: "weak_equivariance", run: lef_weak_equivariance },
    Check { suite: "lef", name: "pushforward", run: lef_pushforward },
    Check { suite: "lef", name: "bijection", run: lef_bijection },
    Check { suite: "lef", name: "sampled_n2", run: lef_sampled_n2 },
    Check { suite: "lef", name: "mixed_z2", run: lef_mixed_z2 },
    Check { suite: "lef", name: "mixed_z3", run: lef_mixed_z3 },
    Check { suite: "dynamics", name: "pong", run: pong },
    Check { suite: "dynamics", name: "folner_g", run: folner_g },
    Check { suite: "dynamics", name: "folner_h", run: folner_h },
];

/// Names of the checks in `suite`.
pub fn check_names(suite: &str) -> Vec<&'static str> {
    CHECKS.iter().filter(|c| c.suite == suite).map(|c| c.name).collect()
}

/// One line of a suite report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub suite: String,
    pub check: String,
    pub passed: bool,
    pub cases: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
    pub repro: Option<String>,
}

struct Env {
    cfg: SuiteConfig,
    contexts: Vec<PvContext>,
}

impl Env {
    fn infinite_contexts(&self) -> impl Iterator<Item = &PvContext> {
        self.contexts.iter().filter(|c| c.regime() == Regime::BothInfinite)
    }
}

fn zz() -> PvContext {
    PvContext::new(Group::integers(), Group::integers()).expect("infinite factors")
}

fn default_contexts() -> Vec<PvContext> {
    let g = |s: &str| crate::spec::parse_group(s).expect("built-in spec");
    [("Z", "Z"), ("F2", "Z"), ("Z^2", "F2"), ("Z", "Z/3"), ("Z/4", "Z"), ("Z", "S3")]
        .into_iter()
        .map(|(l, r)| PvContext::new(g(l), g(r)).expect("built-in context"))
        .collect()
}

fn stream_id(suite: &str, check: &str) -> u64 {
    // FNV-1a; stable across platforms and releases
    format!("{suite}/{check}")
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

fn repro_command(cfg: &SuiteConfig, suite: &str, check: &str) -> String {
    let mut cmd = String::new();
    if cfg.budget_from_env {
        cmd.push_str(&format!("PV_BUDGET={} ", cfg.budget));
    }
    cmd.push_str(&format!("glued suite {suite} --seed {} --only {check}", cfg.seed));
    if let Some(path) = &cfg.config_path {
        cmd.push_str(&format!(" --config {}", path.display()));
    }
    cmd
}

/// Runs `name` (one of [`SUITES`] or `all`), optionally restricted to one
/// check (`check` or `suite/check`). Outcomes come back in canonical order.
pub fn run_suite(name: &str, cfg: &SuiteConfig, only: Option<&str>) -> CliResult<Vec<Outcome>> {
    if name != "all" && !SUITES.contains(&name) {
        return Err(CliError::UnknownSuite(name.to_string()));
    }
    let selected: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| name == "all" || c.suite == name)
        .filter(|c| match only {
            None => true,
            Some(o) => o == c.name || o == format!("{}/{}", c.suite, c.name),
        })
        .collect();
    if selected.is_empty() {
        return Err(CliError::UnknownCheck { suite: name.to_string(), check: only.unwrap_or("").to_string() });
    }
    let contexts = match &cfg.context {
        Some(spec) => vec![parse_context(&spec.left, &spec.right)?],
        None => default_contexts(),
    };
    let env = Env { cfg: cfg.clone(), contexts };
    let outcomes = selected
        .par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(env.cfg.seed);
            rng.set_stream(stream_id(c.suite, c.name));
            let report = (c.run)(&env, &mut rng).unwrap_or_else(|e| {
                let mut r = CheckReport::new(c.name);
                r.fail(format!("error: {e}"));
                r
            });
            Outcome {
                suite: c.suite.to_string(),
                check: c.name.to_string(),
                passed: report.passed(),
                cases: report.pairs_checked,
                failure_count: report.failure_count,
                repro: (!report.passed()).then(|| repro_command(&env.cfg, c.suite, c.name)),
                failures: report.failures,
            }
        })
        .collect();
    Ok(outcomes)
}

/// Renders outcomes; the output contains nothing run-dependent besides
/// the outcomes themselves.
pub fn render(outcomes: &[Outcome], format: Format) -> String {
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut out = String::new();
    match format {
        Format::Text => {
            for o in outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status} {}/{} cases={}", o.suite, o.check, o.cases));
                if !o.passed {
                    out.push_str(&format!(" failures={}", o.failure_count));
                }
                out.push('\n');
                for f in &o.failures {
                    out.push_str(&format!("  {f}\n"));
                }
                if let Some(r) = &o.repro {
                    out.push_str(&format!("  repro: {r}\n"));
                }
            }
            out.push_str(&format!("summary: {} passed, {failed} failed\n", outcomes.len() - failed));
        }
        Format::Jsonl => {
            for o in outcomes {
                out.push_str(&serde_json::to_string(o).expect("serializable"));
                out.push('\n');
            }
            let summary = serde_json::json!({ "summary": { "passed": outcomes.len() - failed, "failed": failed } });
            out.push_str(&format!("{summary}\n"));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// helpers

fn expect(report: &mut CheckReport, ok: bool, detail: impl FnOnce() -> String) {
    report.pairs_checked += 1;
    if !ok {
        report.fail(detail());
    }
}

fn int(k: i64) -> Element {
    Element::Int(k)
}

fn catalog() -> Vec<Group> {
    vec![
        Group::cyclic(2).expect("valid"),
        Group::cyclic(3).expect("valid"),
        Group::cyclic(4).expect("valid"),
        Group::cyclic_power(2, 2).expect("valid"),
        Group::cyclic(5).expect("valid"),
        Group::symmetric(3).expect("valid"),
    ]
}

fn random_element<R: Rng>(group: &Group, radius: u64, rng: &mut R) -> CliResult<Element> {
    let ball = group.ball(radius, BALL_CAP)?;
    Ok(ball.choose(rng).expect("nonempty").clone())
}

// ---------------------------------------------------------------------------
// core

fn group_laws(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("group_laws");
    let mut groups = catalog();
    groups.extend([Group::integers(), Group::lattice(2)?, Group::free(2)?]);
    for g in &groups {
        let ball = g.ball(3, BALL_CAP)?;
        for _ in 0..env.cfg.samples.laws {
            let [x, y, z] = [0; 3].map(|_| ball.choose(rng).expect("nonempty").clone());
            let e = g.identity();
            let ok = g.mul(&g.mul(&x, &y), &z) == g.mul(&x, &g.mul(&y, &z))
                && g.mul(&x, &e) == x
                && g.mul(&e, &x) == x
                && g.is_identity(&g.mul(&x, &g.inv(&x)));
            expect(&mut r, ok, || format!("{}: x={x} y={y} z={z}", g.name()));
        }
    }
    Ok(r)
}

fn ball_growth(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("ball_growth");
    for g in [Group::integers(), Group::lattice(2)?, Group::free(2)?] {
        let unit = g.ball(1, BALL_CAP)?;
        for n in 0..4u64 {
            let (small, big) = (g.ball(n, BALL_CAP)?, g.ball(n + 1, BALL_CAP)?);
            let big_set: BTreeSet<&Element> = big.iter().collect();
            expect(&mut r, small.iter().all(|x| big_set.contains(x)), || {
                format!("{}: ball({n}) ⊄ ball({})", g.name(), n + 1)
            });
            // ball(n) = n-fold products of ball(1)
            let mut products: BTreeSet<Element> = [g.identity()].into();
            for _ in 0..n {
                products = products.iter().flat_map(|x| unit.iter().map(|u| g.mul(x, u))).collect();
            }
            let products: Vec<Element> = products.into_iter().filter(|x| g.length(x) <= n).collect();
            expect(&mut r, products == small, || format!("{}: ball({n}) differs from product closure", g.name()));
        }
    }
    for n in 0..50 {
        let len = Group::integers().ball(n, BALL_CAP)?.len() as u64;
        expect(&mut r, len == 2 * n + 1, || format!("|ball_Z({n})| = {len}"));
    }
    Ok(r)
}

fn schreier_sims(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("schreier_sims");
    for _ in 0..env.cfg.samples.orders {
        let degree = rng.gen_range(2..=7usize);
        let gens: Vec<Vec<usize>> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let mut p: Vec<usize> = (0..degree).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        let fast = schreier_sims_order(&gens, degree)?;
        let slow = brute_force_order(&gens, degree, 5040)?.expect("order at most 7! = 5040");
        expect(&mut r, fast == slow.into(), || format!("gens={gens:?}: {fast} vs {slow}"));
    }
    Ok(r)
}

fn perm_laws(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("perm_laws");
    let ctx = zz();
    let sampler = Sampler::new(&ctx, 3, 6)?;
    let odd = PvContext::new(Group::integers(), Group::cyclic(2)?)?; // allows odd residuals
    for _ in 0..env.cfg.samples.laws {
        let [a, b, c] = [0; 3].map(|_| sampler.residual(&odd, rng));
        let ok = a.compose(&b).compose(&c) == a.compose(&b.compose(&c))
            && a.compose(&b).parity() == a.parity() * b.parity()
            && a.inverse().parity() == a.parity()
            && a.pairs().all(|(p, q)| p != q);
        expect(&mut r, ok, || format!("a={a} b={b} c={c}"));
        let side = if rng.gen_bool(0.5) { Side::G } else { Side::H };
        let x = random_element(ctx.group(side), 3, rng)?;
        let p = sampler.point(rng);
        let back =
            apply_factor(side, ctx.group(side), &ctx.group(side).inv(&x), &apply_factor(side, ctx.group(side), &x, &p));
        expect(&mut r, back == p, || format!("factor action {side:?}:{x} at {p}"));
    }
    Ok(r)
}

fn commutator_law(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("commutator_law");
    for ctx in &env.contexts {
        let sampler = Sampler::new(ctx, 3, 0)?;
        for _ in 0..env.cfg.samples.commutator {
            let g = sampler.nontrivial(Side::G, ctx, rng);
            let h = sampler.nontrivial(Side::H, ctx, rng);
            let word =
                [Letter::G(g.clone()), Letter::H(h.clone()), Letter::G(ctx.g().inv(&g)), Letter::H(ctx.h().inv(&h))];
            let c = ctx.normalize(&word)?;
            let cycle = FinPerm::three_cycle(Point::Base, Point::G(g.clone()), Point::H(h.clone()))?;
            let ok = c == ctx.commutator(&g, &h)
                && *c.residual() == cycle
                && ctx.g().is_identity(c.g())
                && ctx.h().is_identity(c.h())
                && ctx.pow(&c, 3) == ctx.identity();
            expect(&mut r, ok, || format!("{}: g={g} h={h} gave {c}", ctx.name()));
        }
    }
    Ok(r)
}

fn product_law(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("product_law");
    for ctx in &env.contexts {
        let sampler = Sampler::new(ctx, 3, 6)?;
        let wide = Sampler::new(ctx, 8, 0)?;
        for _ in 0..env.cfg.samples.product / env.contexts.len() as u64 {
            let (s1, s2) = (sampler.element(ctx, rng), sampler.element(ctx, rng));
            let out = ctx.multiply(&s1, &s2);
            let extra: Vec<Point> = (0..10).map(|_| wide.point(rng)).collect();
            let bad = ctx.product_disagreement(&s1, &s2, &out, &extra);
            expect(&mut r, bad.is_none(), || {
                format!("{}: ({s1}) * ({s2}) = ({out}) wrong at {}", ctx.name(), bad.unwrap())
            });
        }
    }
    Ok(r)
}

fn action(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("action");
    for ctx in &env.contexts {
        let sampler = Sampler::new(ctx, 3, 6)?;
        for _ in 0..env.cfg.samples.product / env.contexts.len() as u64 {
            let (s1, s2, p) = (sampler.element(ctx, rng), sampler.element(ctx, rng), sampler.point(rng));
            let ok = ctx.act(&ctx.multiply(&s1, &s2), &p) == ctx.act(&s1, &ctx.act(&s2, &p));
            expect(&mut r, ok, || format!("{}: ({s1}) ({s2}) at {p}", ctx.name()));
        }
    }
    Ok(r)
}

fn inverse_law(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("inverse_law");
    for ctx in &env.contexts {
        let sampler = Sampler::new(ctx, 3, 6)?;
        for _ in 0..env.cfg.samples.laws {
            let s = sampler.element(ctx, rng);
            let inv = ctx.invert(&s);
            let ok = ctx.multiply(&s, &inv) == ctx.identity() && ctx.multiply(&inv, &s) == ctx.identity();
            expect(&mut r, ok, || format!("{}: {s}", ctx.name()));
        }
    }
    Ok(r)
}

fn epimorphism(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("epimorphism");
    for ctx in &env.contexts {
        let sampler = Sampler::new(ctx, 3, 6)?;
        let n = env.cfg.samples.product / env.contexts.len() as u64;
        for _ in 0..n {
            let (s1, s2) = (sampler.element(ctx, rng), sampler.element(ctx, rng));
            let prod = ctx.multiply(&s1, &s2);
            match ctx.regime() {
                Regime::BothInfinite => {
                    let (p1, p2, p) = (ctx.project(&s1)?, ctx.project(&s2)?, ctx.project(&prod)?);
                    let hom = p == (ctx.g().mul(&p1.0, &p2.0), ctx.h().mul(&p1.1, &p2.1));
                    let trivial = ctx.g().is_identity(&p.0) && ctx.h().is_identity(&p.1);
                    let ok = hom && ctx.in_monolith(&prod)? == trivial && prod.residual().parity() == Parity::Even;
                    expect(&mut r, ok, || format!("{}: ({s1}) * ({s2})", ctx.name()));
                }
                Regime::Mixed { finite } => {
                    let side = finite.other();
                    let group = ctx.group(side);
                    let hom = ctx.project_side(&prod, side)?
                        == group.mul(&ctx.project_side(&s1, side)?, &ctx.project_side(&s2, side)?);
                    let refuses = ctx.project(&prod).is_err() && ctx.project_side(&prod, finite).is_err();
                    expect(&mut r, hom && refuses, || format!("{}: ({s1}) * ({s2})", ctx.name()));
                }
            }
        }
    }
    Ok(r)
}

fn order_combinatorics(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("order_combinatorics");
    let ctx = zz();
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let k: i64 = rng.gen_range(-20..=20);
        if k != 0 {
            return k;
        }
    };
    for _ in 0..env.cfg.samples.orders {
        let (g, h) = (nonzero(rng), nonzero(rng));
        let (g2, h2) = loop {
            let (a, b) = (nonzero(rng), nonzero(rng));
            if a != g && b != h {
                break (a, b);
            }
        };
        let c = |a: i64, b: i64| ctx.commutator(&int(a), &int(b));
        let order = |a, b, x, y| ctx.element_order(&ctx.multiply(&c(a, b), &c(x, y)), 1000);
        for (expected, got, case) in [
            (5, order(g, h, g2, h2), "distinct"),
            (2, order(g, h, g, h2), "g = g'"),
            (3, order(g, h, g, h), "both equal"),
        ] {
            expect(&mut r, got == PvOrder::Finite(expected), || {
                format!("{case}: [{g},{h}][{g2},{h2}] has order {got:?}, expected {expected}")
            });
        }
    }
    Ok(r)
}

fn embedding(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("embedding");
    // Z ⋈ Z into Z^2 ⋈ F2 via k ↦ (k, -k) and k ↦ a^k
    let target = PvContext::new(Group::lattice(2)?, Group::free(2)?)?;
    let map_g = Box::new(|x: &Element| match x {
        Element::Int(k) => Element::Tuple(vec![*k, -*k]),
        other => other.clone(),
    });
    let map_h = Box::new(|x: &Element| match x {
        Element::Int(k) => Element::Word(vec![if *k > 0 { 1 } else { -1 }; k.unsigned_abs() as usize]),
        other => other.clone(),
    });
    let emb = Embedding::new(zz(), target.clone(), map_g, map_h, 4)?;
    let sampler = Sampler::new(emb.source(), 3, 6)?;
    for _ in 0..env.cfg.samples.laws {
        let (s1, s2) = (sampler.element(emb.source(), rng), sampler.element(emb.source(), rng));
        let lhs = emb.embed(&emb.source().multiply(&s1, &s2));
        let rhs = target.multiply(&emb.embed(&s1), &emb.embed(&s2));
        expect(&mut r, lhs == rhs, || format!("({s1}) * ({s2})"));
        if s1 != s2 {
            expect(&mut r, emb.embed(&s1) != emb.embed(&s2), || format!("({s1}) and ({s2}) collide"));
        }
    }
    Ok(r)
}

fn stabilizer_lift(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("stabilizer_lift");
    for ctx in env.infinite_contexts() {
        let sampler = Sampler::new(ctx, 3, 0)?;
        let probes = Sampler::new(ctx, 4, 0)?;
        for _ in 0..env.cfg.samples.orders {
            let h = sampler.nontrivial(Side::H, ctx, rng);
            let h2 = sampler.nontrivial(Side::H, ctx, rng);
            if h == h2 {
                continue;
            }
            let lift = ctx.stabilizer_lift(&h, &h2)?;
            let fixes_g = probes.pool().iter().filter(|p| p.in_g()).all(|p| ctx.act(&lift, p) == *p);
            let projects = ctx.project(&lift)?.1 == h;
            expect(&mut r, fixes_g && projects, || format!("{}: h={h} h'={h2} gave {lift}", ctx.name()));
        }
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// finite

fn classification(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("classification");
    let cat = catalog();
    for g in &cat {
        for h in &cat {
            if g.order().unwrap() + h.order().unwrap() - 1 > 10 {
                continue;
            }
            let v = verify_classification(g, h)?;
            expect(&mut r, v.holds(), || {
                format!("{}, {}: {}({}) predicted, order {}", g.name(), h.name(), v.classification, v.degree, v.order)
            });
        }
    }
    Ok(r)
}

fn translation_signs(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("translation_sign");
    for g in catalog() {
        let union = FiniteUnion::new(g.clone(), Group::cyclic(2)?, 64)?;
        for x in g.elements()? {
            let sign = translation_sign(&g, &x)?;
            let parity = union.translation(Side::G, &x).parity();
            expect(&mut r, (sign == 1) == parity.is_even(), || {
                format!("{}: {x} sign {sign} parity {parity:?}", g.name())
            });
        }
    }
    Ok(r)
}

fn classify_symmetric(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("classify_symmetric");
    let cat = catalog();
    for g in &cat {
        for h in &cat {
            expect(&mut r, classify(g, h)? == classify(h, g)?, || format!("{}, {}", g.name(), h.name()));
        }
    }
    Ok(r)
}

fn restriction(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("restriction");
    // K = 2Z/6 < Z/6 and L = Z/2: onto K ⋈ L = Sym(4), kernel nontrivial
    let g = Group::cyclic(6)?;
    let h = Group::cyclic(2)?;
    let k: Vec<Element> = [0, 2, 4].map(int).to_vec();
    let res = restrict_to_subgroups(&g, &h, &k, &h.elements()?)?;
    expect(&mut r, res.restricted_order == res.expected_order, || format!("{res:?}"));
    expect(&mut r, res.ambient_order > res.restricted_order, || format!("{res:?}"));
    Ok(r)
}

// ---------------------------------------------------------------------------
// cube

fn s_invariance(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("s_invariance");
    for ctx in env.infinite_contexts() {
        let sampler = Sampler::new(ctx, 3, 6)?;
        let pool = cube_complex::point_pool(ctx, 3)?;
        for _ in 0..env.cfg.samples.cube {
            let (s, v) = (sampler.element(ctx, rng), cube_complex::random_vertex(&pool, 6, rng));
            let w = cube_complex::act_vertex(ctx, &s, &v)?;
            expect(&mut r, w.s_invariant() == v.s_invariant(), || format!("{}: ({s}) on {v}", ctx.name()));
        }
    }
    Ok(r)
}

fn isometry(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("isometry");
    for ctx in env.infinite_contexts() {
        let sampler = Sampler::new(ctx, 3, 6)?;
        let pool = cube_complex::point_pool(ctx, 3)?;
        for _ in 0..env.cfg.samples.cube {
            let s = sampler.element(ctx, rng);
            let (v, w) = (cube_complex::random_vertex(&pool, 6, rng), cube_complex::random_vertex(&pool, 6, rng));
            let d = cube_complex::act_vertex(ctx, &s, &v)?.distance(&cube_complex::act_vertex(ctx, &s, &w)?);
            expect(&mut r, d == v.distance(&w), || format!("{}: ({s}) on {v}, {w}", ctx.name()));
        }
    }
    Ok(r)
}

fn vertex_action(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("vertex_action");
    for ctx in env.infinite_contexts() {
        let sampler = Sampler::new(ctx, 3, 6)?;
        let pool = cube_complex::point_pool(ctx, 3)?;
        for _ in 0..env.cfg.samples.cube {
            let (s1, s2) = (sampler.element(ctx, rng), sampler.element(ctx, rng));
            let v = cube_complex::random_vertex(&pool, 6, rng);
            let lhs = cube_complex::act_vertex(ctx, &ctx.multiply(&s1, &s2), &v)?;
            let rhs = cube_complex::act_vertex(ctx, &s1, &cube_complex::act_vertex(ctx, &s2, &v)?)?;
            expect(&mut r, lhs == rhs, || format!("{}: ({s1}) ({s2}) on {v}", ctx.name()));
        }
    }
    Ok(r)
}

/// A random vertex in the fiber `s`.
fn vertex_in_fiber<R: Rng>(pool: &[Point], s: i64, rng: &mut R) -> CubeVertex {
    loop {
        let v = cube_complex::random_vertex(pool, 8, rng);
        if v.s_invariant() == s {
            return v;
        }
    }
}

fn transporter(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("transporter");
    for ctx in env.infinite_contexts() {
        let pool = cube_complex::point_pool(ctx, 3)?;
        for _ in 0..env.cfg.samples.transporter {
            let s = rng.gen_range(-3..=3);
            let (v, w) = (vertex_in_fiber(&pool, s, rng), vertex_in_fiber(&pool, s, rng));
            let ok = match cube_complex::transporter(ctx, &v, &w) {
                Ok(t) => cube_complex::act_vertex(ctx, &t, &v)? == w && ctx.in_monolith(&t)?,
                Err(_) => false,
            };
            expect(&mut r, ok, || format!("{}: {v} -> {w}", ctx.name()));
        }
    }
    Ok(r)
}

fn fiber_mismatch(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("fiber_mismatch");
    for ctx in env.infinite_contexts() {
        let pool = cube_complex::point_pool(ctx, 3)?;
        for _ in 0..env.cfg.samples.transporter {
            let v = cube_complex::random_vertex(&pool, 6, rng);
            let w = loop {
                let w = cube_complex::random_vertex(&pool, 6, rng);
                if w.s_invariant() != v.s_invariant() {
                    break w;
                }
            };
            let expected = glued_core::Error::FiberMismatch { from: v.s_invariant(), to: w.s_invariant() };
            let got = cube_complex::transporter(ctx, &v, &w);
            expect(&mut r, got.as_ref().err() == Some(&expected), || {
                format!("{}: {v} -> {w} gave {got:?}", ctx.name())
            });
        }
    }
    Ok(r)
}

fn unique_fixed_pair(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("unique_fixed_pair");
    let ctx = zz();
    let vertices = cube_complex::vertex_ball(&ctx, 3, 3)?;
    let pairs = cube_complex::adjacent_fixed_pairs(&vertices);
    r.pairs_checked = vertices.len() as u64;
    if pairs != [(CubeVertex::g_copy(), CubeVertex::punctured())] {
        r.fail(format!("adjacent fixed pairs: {pairs:?}"));
    }
    Ok(r)
}

fn unbounded_orbits(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("unbounded_orbits");
    let ctx = zz();
    for step in cube_complex::orbit_growth_witness(&ctx, &int(1), &int(1), 40)? {
        let len = step.word.len();
        expect(&mut r, 2 * step.distance >= len, || format!("length {len}: distance {}", step.distance));
    }
    let letters: Vec<Letter> = [1, -1].into_iter().flat_map(|k| [Letter::G(int(k)), Letter::H(int(k))]).collect();
    let maxima = (0..=6).map(|l| cube_complex::max_orbit_distance(&ctx, &letters, l)).collect::<Result<Vec<_>, _>>()?;
    expect(&mut r, maxima.windows(2).all(|w| w[0] <= w[1]) && maxima[6] > maxima[0], || format!("maxima {maxima:?}"));
    Ok(r)
}

// ---------------------------------------------------------------------------
// lef

fn lef_zz() -> CliResult<Lef> {
    Ok(Lef::new(zz(), 1, Some(17))?)
}

fn lef_multiplicativity(env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    par_multiplicativity(&lef_zz()?, env.cfg.budget)
}

fn lef_injectivity(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let lef = lef_zz()?;
    let mut r = lef.check_injectivity(Mode::Sample(env.cfg.samples.injectivity), env.cfg.budget, rng)?;
    // distinct residuals on C_2 push forward to distinct permutations
    let support = glued_core::lef::window_points(lef.context(), 2)?;
    for _ in 0..1000 {
        let mut images = support.clone();
        images.shuffle(rng);
        let a = FinPerm::from_pairs(support.iter().cloned().zip(images))?;
        let b = FinPerm::transposition(support[0].clone(), support[1].clone())?.compose(&a);
        expect(&mut r, lef.pushforward(&a) != lef.pushforward(&b), || format!("pushforward of {a} and {b} agree"));
    }
    Ok(r)
}

fn lef_weak_equivariance(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    Ok(lef_zz()?.check_weak_equivariance()?)
}

fn lef_pushforward(env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    Ok(lef_zz()?.check_pushforward(env.cfg.budget)?)
}

fn lef_bijection(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    Ok(lef_zz()?.check_bijection()?)
}

fn lef_sampled_n2(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let lef = Lef::new(zz(), 2, None)?;
    Ok(lef.check_multiplicativity(Mode::Sample(env.cfg.samples.lef_n2), env.cfg.budget, rng)?)
}

fn lef_mixed(env: &Env, h: Group, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let lef = Lef::new(PvContext::new(Group::integers(), h)?, 1, None)?;
    let mut r = par_multiplicativity(&lef, env.cfg.budget)?;
    let inj = lef.check_injectivity(Mode::Sample(env.cfg.samples.injectivity / 10), env.cfg.budget, rng)?;
    r = r.merge(inj);
    Ok(r)
}

fn lef_mixed_z2(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    lef_mixed(env, Group::cyclic(2)?, rng)
}

fn lef_mixed_z3(env: &Env, rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    lef_mixed(env, Group::cyclic(3)?, rng)
}

// ---------------------------------------------------------------------------
// dynamics

fn pong(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("pong");
    let ctx = zz();
    for (g, h) in [(1, 1), (2, 3), (-1, 5)] {
        let rep = free_semigroup_check(&ctx, &int(g), &int(h), 8)?;
        r.pairs_checked += rep.words;
        if !rep.all_distinct || rep.words != 510 {
            r.fail(format!("g={g} h={h}: collision {:?}", rep.collision));
        }
    }
    Ok(r)
}

fn folner_g(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("folner_g");
    let ctx = zz();
    let g1 = ctx.letter(&Letter::G(int(1)))?;
    let mut last = Ratio::new(1u64, 1);
    for n in 1..=100 {
        let set = folner_set(ctx.g(), n)?;
        let q = folner_ratio(&ctx, &set, &g1);
        expect(&mut r, q == Ratio::new(2, 2 * n + 1) && q < last && !set.points().contains(&Point::Base), || {
            format!("n={n}: {q}")
        });
        last = q;
    }
    Ok(r)
}

fn folner_h(_env: &Env, _rng: &mut ChaCha8Rng) -> CliResult<CheckReport> {
    let mut r = CheckReport::new("folner_h");
    let ctx = zz();
    for n in 1..=100 {
        let set = folner_set(ctx.g(), n)?;
        for k in -3..=3 {
            let q = folner_ratio(&ctx, &set, &ctx.letter(&Letter::H(int(k)))?);
            expect(&mut r, *q.numer() == 0, || format!("n={n} H:{k}: {q}"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_unique_per_suite() {
        for s in SUITES {
            let names = check_names(s);
            assert!(!names.is_empty());
            assert_eq!(names.iter().collect::<BTreeSet<_>>().len(), names.len());
        }
    }

    #[test]
    fn stream_ids_differ() {
        assert_ne!(stream_id("core", "action"), stream_id("cube", "action"));
    }

    #[test]
    fn unknown_suite_and_check() {
        let cfg = SuiteConfig::default();
        assert!(matches!(run_suite("nope", &cfg, None), Err(CliError::UnknownSuite(_))));
        assert!(matches!(run_suite("core", &cfg, Some("nope")), Err(CliError::UnknownCheck { .. })));
    }

    #[test]
    fn config_parsing() {
        let cfg: ConfigFile = toml::from_str(
            "seed = 7\nformat = \"jsonl\"\n[samples]\nlaws = 5\n[context]\nleft = \"Z\"\nright = \"F2\"\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.format, Some(Format::Jsonl));
        assert_eq!(cfg.samples.laws, 5);
        assert_eq!(cfg.samples.product, Samples::default().product);
        assert!(toml::from_str::<ConfigFile>("sed = 1").is_err());
    }

    #[test]
    fn small_core_run_is_deterministic() {
        let cfg = SuiteConfig {
            seed: 3,
            samples: Samples { laws: 20, commutator: 20, product: 120, orders: 5, ..Samples::default() },
            ..SuiteConfig::default()
        };
        let a = run_suite("core", &cfg, None).unwrap();
        let b = run_suite("core", &cfg, None).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|o| o.passed), "{}", render(&a, Format::Text));
    }

    #[test]
    fn failures_carry_repro() {
        let cfg = SuiteConfig { seed: 9, budget: 10, budget_from_env: true, ..SuiteConfig::default() };
        let out = run_suite("lef", &cfg, Some("multiplicativity")).unwrap();
        assert!(!out[0].passed);
        assert_eq!(out[0].repro.as_deref(), Some("PV_BUDGET=10 glued suite lef --seed 9 --only multiplicativity"));
        let text = render(&out, Format::Text);
        assert!(text.contains("FAIL lef/multiplicativity"));
        assert!(text.ends_with("summary: 0 passed, 1 failed\n"));
    }
}
