//! Seeded generators and the law-suite engine.
//!
//! A law is either *sampled* (a check of one random instance, repeated
//! `trials` times from per-instance seeds) or *whole* (one exhaustive or
//! bounded check). A failing sampled instance is shrunk, first by its
//! dimension bound and then by its entry height, and the smallest failing
//! parameters are recorded so that [`replay`] reproduces the failure.

use std::fmt::Display;
use std::sync::OnceLock;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{Backend, ConfigError, RunConfig};
use crate::fincat::{
    build_gset_category, check_transitive_phases, enumerate_phased_coproducts, initial_objects, naive_verify,
    FinCatError, GSetCategory,
};
use crate::gp::finite::FiniteGp;
use crate::gp::{check_coherence, check_naturality, GpCategory, GpMorphism, GpObject, POSITIVITY_BOUND};
use crate::matcat::{compact, Matrix};
use crate::phased::{
    self, assoc_iso, biproduct_from_coproduct, check_positive_cancellation, check_positive_free, check_transitive,
    combine, mediating_iso, phases_preserve_projections, Bracketing, CheckVerdict, Mode, PhasedCategory,
    PhasedStructure,
};
use crate::quotient::{canonical_rep, eq_mod_phase, QuotCategory, QuotMorphism};
use crate::scalars::{Involution, PhaseGroup, Ring, RingKind, Scalar};
use crate::transport::{adjunction_checks, functor_by_name, gp_of_functor, invertible_classes, quotient_of_functor};

// ---- generators ----

/// Pool of entries for a height bound; height 0 gives `{0, 1}`.
fn entry_pool(ring: Ring, height: u32) -> Vec<Scalar> {
    if height == 0 {
        return vec![ring.zero(), ring.one()];
    }
    ring.elements_up_to_height(height)
}

/// A random `rows × cols` matrix: zero, identity-like, partial permutation
/// and dense with probabilities 10/10/10/70 percent.
pub fn sample_matrix<R: Rng>(rng: &mut R, ring: Ring, rows: usize, cols: usize, height: u32) -> Matrix {
    let roll = rng.gen_range(0..10);
    let mut m = Matrix::zeros(ring, rows, cols);
    match roll {
        0 => {}
        1 => {
            for i in 0..rows.min(cols) {
                m.set(i, i, ring.one());
            }
        }
        2 => {
            let mut targets: Vec<usize> = (0..rows).collect();
            targets.shuffle(rng);
            for (j, &i) in targets.iter().take(cols).enumerate() {
                m.set(i, j, ring.one());
            }
        }
        _ => {
            let pool = entry_pool(ring, height);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, pool[rng.gen_range(0..pool.len())].clone());
                }
            }
        }
    }
    m
}

/// Deterministic matrix for `(seed, dims, height)`.
pub fn gen_matrix(ring: Ring, seed: u64, dims: (usize, usize), height: u32) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_matrix(&mut rng, ring, dims.0, dims.1, height)
}

pub fn sample_phase<R: Rng>(rng: &mut R, phases: &PhaseGroup) -> Scalar {
    phases.elements()[rng.gen_range(0..phases.len())].clone()
}

/// A random GP morphism `dom^ → cod^`, normalized from `diag(h, p)`.
pub fn sample_gp_morphism<R: Rng>(rng: &mut R, gp: &GpCategory, dom: usize, cod: usize, height: u32) -> GpMorphism {
    let h = sample_matrix(rng, gp.ring(), cod, dom, height);
    let p = sample_phase(rng, gp.quot().phases());
    gp.gp_hom(&h, &p).expect("diag(h, p) with p a global phase is a GP morphism")
}

/// Deterministic GP morphism for `(seed, dims)` with entries of height 2.
pub fn gen_gp_morphism(gp: &GpCategory, seed: u64, dims: (usize, usize)) -> GpMorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_gp_morphism(&mut rng, gp, dims.0, dims.1, 2)
}

// ---- verdicts ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictResult {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub law: String,
    pub backend: String,
    pub mode: String,
    pub result: VerdictResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub trials: usize,
    pub seed: u64,
    pub runtime_ms: u64,
}

impl Verdict {
    /// The verdict with its runtime cleared, for replay comparisons.
    pub fn without_runtime(&self) -> Verdict {
        Verdict { runtime_ms: 0, ..self.clone() }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}

/// Result of checking one instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Fail(Value),
    Unknown(String),
}

fn from_check(v: CheckVerdict) -> Outcome {
    match v {
        CheckVerdict::Holds(_) => Outcome::Pass,
        CheckVerdict::Refuted(w) => Outcome::Fail(w),
        CheckVerdict::Unknown(s) => Outcome::Unknown(s),
    }
}

fn fail(what: impl Display) -> Outcome {
    Outcome::Fail(json!({ "detail": what.to_string() }))
}

fn err<E: Display>(e: E) -> String {
    e.to_string()
}

// ---- context ----

/// Everything a law needs, built once per run.
pub struct Ctx {
    pub config: RunConfig,
    pub ring: Ring,
    pub phases: PhaseGroup,
    pub gp: GpCategory,
    gsets: OnceLock<Result<GSetCategory, FinCatError>>,
}

impl Ctx {
    pub fn new(config: &RunConfig) -> Result<Ctx, ConfigError> {
        config.validate()?;
        let phases = config.phase_group()?;
        Ok(Ctx {
            config: config.clone(),
            ring: phases.ring(),
            gp: GpCategory::from_phases(phases.clone()),
            phases,
            gsets: OnceLock::new(),
        })
    }

    pub fn quot(&self) -> &QuotCategory {
        self.gp.quot()
    }

    pub fn gsets(&self) -> Result<&GSetCategory, String> {
        let built = self.gsets.get_or_init(|| {
            let group = self.config.group().map_err(|e| FinCatError::InvalidGroup(e.to_string()))?;
            build_gset_category(&group, self.config.fincat.max_set_size)
        });
        built.as_ref().map_err(err)
    }

    fn finite_ring(&self) -> bool {
        matches!(self.ring.kind(), RingKind::PrimeField(_))
    }

    fn dagger_closed(&self) -> bool {
        self.phases.check_dagger_closed().is_ok()
    }
}

// ---- law registry ----

pub type SampledFn = fn(&Ctx, &mut ChaCha8Rng, usize, u32) -> Result<Outcome, String>;
pub type WholeFn = fn(&Ctx, u64) -> Result<(Outcome, Mode), String>;

#[derive(Clone, Copy)]
pub enum LawBody {
    Sampled(SampledFn),
    Whole(WholeFn),
}

#[derive(Clone, Copy)]
pub struct Law {
    pub id: &'static str,
    pub backend: Backend,
    pub summary: &'static str,
    pub body: LawBody,
    applies: fn(&Ctx) -> bool,
}

fn always(_: &Ctx) -> bool {
    true
}

fn finite_only(ctx: &Ctx) -> bool {
    ctx.finite_ring()
}

fn dagger_only(ctx: &Ctx) -> bool {
    ctx.dagger_closed()
}

impl Law {
    pub fn applies(&self, ctx: &Ctx) -> bool {
        self.backend == ctx.config.backend && (self.applies)(ctx)
    }
}

pub const fn sampled(id: &'static str, summary: &'static str, f: SampledFn) -> Law {
    Law { id, backend: Backend::Mat, summary, body: LawBody::Sampled(f), applies: always }
}

pub const fn whole(id: &'static str, summary: &'static str, f: WholeFn) -> Law {
    Law { id, backend: Backend::Mat, summary, body: LawBody::Whole(f), applies: always }
}

const fn finite(id: &'static str, summary: &'static str, f: WholeFn) -> Law {
    Law { id, backend: Backend::Fincat, summary, body: LawBody::Whole(f), applies: always }
}

static LAWS: &[Law] = &[
    sampled("quotient-soundness", "eq_mod_phase agrees with an orbit scan; canonical reps are idempotent", law_quotient),
    sampled("copair", "copair equations and phase solving on induced coproducts", law_copair),
    sampled("mediating-iso", "mediating and associativity isos have verified inverses", law_mediating),
    whole("initial-collapse", "κ_A : A → A ∔ 0 is invertible", law_initial),
    sampled("biproduct", "projections are unique, share phases, and daggers match", law_biproduct),
    whole("phase-generator", "I is a phase generator", law_generator),
    sampled("transitivity", "phases are transitive along diagonal maps", law_transitive),
    Law { applies: dagger_only, ..whole("positive-free", "no nontrivial phase is positive", law_positive_free) },
    Law {
        applies: dagger_only,
        ..whole("positive-cancellation", "positive maps related by a phase are equal", law_positive_cancellation)
    },
    sampled("gp-normalization", "normal forms are idempotent and compatible with composition", law_gp_normalization),
    sampled("gp-bracket", "[−] is a functor that reflects isomorphisms", law_gp_bracket),
    sampled("gp-coproduct", "GP coproducts have unique mediating maps and split coprojections", law_gp_coproduct),
    sampled("gp-tensor", "corner-solved tensor agrees with blocks and is bifunctorial", law_gp_tensor),
    sampled("gp-coherence", "pentagon, triangle, unit and hexagon laws", law_gp_coherence),
    sampled("gp-naturality", "naturality of the associator and braiding", law_gp_naturality),
    whole("gp-global-phases", "global phases of GP correspond to ℙ", law_gp_global_phases),
    sampled("gp-biproduct", "GP biproduct equations, and κ† = π for dagger phases", law_gp_biproduct),
    sampled("compact-closure", "snake equations in the base and, after phase correction, in GP", law_compact),
    Law { applies: dagger_only, ..sampled("dagger-compact", "ε = η† ∘ σ gives a dual in GP", law_dagger_compact) },
    sampled("equivalence", "Mat_S ≃ GP(Mat_S / ℙ) on samples", law_equivalence),
    whole("transport", "configured functors pass through the quotient and GP", law_transport),
    Law { applies: finite_only, ..whole("adjunction", "hom-set bijections for the comparison units", law_adjunction) },
    Law { applies: finite_only, ..whole("projective-count", "invertible classes number |GL(2,q)| / |ℙ|", law_projective) },
    finite("fincat-phased-coproducts", "enumerated phased coproducts pass the naive check and match the action", law_fin_coproducts),
    finite("fincat-transitivity", "phases of enumerated coproducts are transitive", law_fin_transitive),
    finite("fincat-initial", "initial objects exist and collapse phased coproducts", law_fin_initial),
    finite("fincat-gp", "GP over G-Set with the regular orbit as unit", law_fin_gp),
];

pub fn laws() -> &'static [Law] {
    LAWS
}

pub fn law(id: &str) -> Option<&'static Law> {
    LAWS.iter().find(|l| l.id == id)
}

// ---- engine ----

fn instance_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| master.next_u64()).collect()
}

fn run_instance(ctx: &Ctx, f: SampledFn, seed: u64, dims: usize, height: u32) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match f(ctx, &mut rng, dims, height) {
        Ok(o) => o,
        Err(e) => fail(e),
    }
}

/// Smallest dimension bound, then smallest height, that still fails.
fn shrink(ctx: &Ctx, f: SampledFn, seed: u64, dims: usize, height: u32, detail: Value) -> Value {
    let (mut best_dims, mut best_height, mut best_detail) = (dims, height, detail);
    for d in 0..dims {
        if let Outcome::Fail(v) = run_instance(ctx, f, seed, d, height) {
            best_dims = d;
            best_detail = v;
            break;
        }
    }
    for h in 0..height {
        if let Outcome::Fail(v) = run_instance(ctx, f, seed, best_dims, h) {
            best_height = h;
            best_detail = v;
            break;
        }
    }
    json!({ "instance_seed": seed, "dims": best_dims, "height": best_height, "detail": best_detail })
}

/// Runs one law for one seed.
pub fn run_law(law: &Law, ctx: &Ctx, seed: u64) -> Verdict {
    let start = Instant::now();
    let trials = ctx.config.trials;
    let (result, counterexample, mode, count) = match law.body {
        LawBody::Sampled(f) => {
            let mut unknown = None;
            let mut failure = None;
            for s in instance_seeds(seed, trials) {
                match run_instance(ctx, f, s, ctx.config.dims_max, ctx.config.height) {
                    Outcome::Pass => {}
                    Outcome::Unknown(msg) => {
                        unknown.get_or_insert(json!({ "instance_seed": s, "reason": msg }));
                    }
                    Outcome::Fail(v) => {
                        failure = Some(shrink(ctx, f, s, ctx.config.dims_max, ctx.config.height, v));
                        break;
                    }
                }
            }
            match (failure, unknown) {
                (Some(c), _) => (VerdictResult::Fail, Some(c), Mode::Sampled(trials), trials),
                (None, Some(u)) => (VerdictResult::Unknown, Some(u), Mode::Sampled(trials), trials),
                (None, None) => (VerdictResult::Pass, None, Mode::Sampled(trials), trials),
            }
        }
        LawBody::Whole(f) => match f(ctx, seed) {
            Ok((Outcome::Pass, mode)) => (VerdictResult::Pass, None, mode, mode_trials(mode)),
            Ok((Outcome::Fail(v), mode)) => (VerdictResult::Fail, Some(v), mode, mode_trials(mode)),
            Ok((Outcome::Unknown(s), mode)) => {
                (VerdictResult::Unknown, Some(json!({ "reason": s })), mode, mode_trials(mode))
            }
            Err(e) => (VerdictResult::Fail, Some(json!({ "error": e })), Mode::Exhaustive, 1),
        },
    };
    Verdict {
        law: law.id.to_string(),
        backend: ctx.config.backend.name().to_string(),
        mode: mode.to_string(),
        result,
        counterexample,
        trials: count,
        seed,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

fn mode_trials(mode: Mode) -> usize {
    match mode {
        Mode::Sampled(n) => n,
        _ => 1,
    }
}

/// Re-runs the failing instance recorded in a sampled verdict, or the whole
/// law for other verdicts.
pub fn replay(ctx: &Ctx, verdict: &Verdict) -> Option<Outcome> {
    replay_law(law(&verdict.law)?, ctx, verdict)
}

/// [`replay`] for a law outside the registry.
pub fn replay_law(law: &Law, ctx: &Ctx, verdict: &Verdict) -> Option<Outcome> {
    match law.body {
        LawBody::Sampled(f) => {
            let c = verdict.counterexample.as_ref()?;
            let seed = c.get("instance_seed")?.as_u64()?;
            let dims = c.get("dims")?.as_u64()? as usize;
            let height = c.get("height")?.as_u64()? as u32;
            Some(run_instance(ctx, f, seed, dims, height))
        }
        LawBody::Whole(f) => Some(match f(ctx, verdict.seed) {
            Ok((o, _)) => o,
            Err(e) => fail(e),
        }),
    }
}

/// Expands `"all"` and checks that every id names a law.
pub fn resolve_laws(ids: &[String], ctx: &Ctx) -> Result<Vec<&'static Law>, ConfigError> {
    let mut out: Vec<&'static Law> = Vec::new();
    for id in ids {
        if id == "all" {
            for l in LAWS.iter().filter(|l| l.applies(ctx)) {
                if !out.iter().any(|o| o.id == l.id) {
                    out.push(l);
                }
            }
        } else {
            let l = law(id).ok_or_else(|| ConfigError::Invalid(format!("unknown law {id:?}")))?;
            if !out.iter().any(|o| o.id == l.id) {
                out.push(l);
            }
        }
    }
    Ok(out)
}

fn thread_count() -> Option<usize> {
    std::env::var("PHASECAT_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}

/// Runs every listed law for every configured seed, in parallel (capped by
/// `PHASECAT_THREADS`), and returns verdicts sorted by `(law, seed)`.
pub fn run_suite(ids: &[String], config: &RunConfig) -> Result<Vec<Verdict>, ConfigError> {
    let ctx = Ctx::new(config)?;
    let laws = resolve_laws(ids, &ctx)?;
    let jobs: Vec<(&Law, u64)> = laws.iter().flat_map(|l| config.seeds.iter().map(move |&s| (*l, s))).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| ConfigError::Invalid(format!("thread pool: {e}")))?;
    let mut verdicts: Vec<Verdict> = pool.install(|| jobs.par_iter().map(|(l, s)| run_law(l, &ctx, *s)).collect());
    verdicts.sort_by(|a, b| (&a.law, a.seed).cmp(&(&b.law, b.seed)));
    Ok(verdicts)
}

pub fn any_failed(verdicts: &[Verdict]) -> bool {
    verdicts.iter().any(|v| v.result == VerdictResult::Fail)
}

/// Human-readable summary table.
pub fn summary_markdown(title: &str, verdicts: &[Verdict]) -> String {
    let mut out = format!("# {title}\n\n| law | backend | seed | mode | result | trials |\n|---|---|---|---|---|---|\n");
    for v in verdicts {
        let result = match v.result {
            VerdictResult::Pass => "pass",
            VerdictResult::Fail => "**FAIL**",
            VerdictResult::Unknown => "unknown",
        };
        out.push_str(&format!("| {} | {} | {} | {} | {} | {} |\n", v.law, v.backend, v.seed, v.mode, result, v.trials));
    }
    let failures: Vec<&Verdict> = verdicts.iter().filter(|v| v.result == VerdictResult::Fail).collect();
    if !failures.is_empty() {
        out.push_str("\n## Counterexamples\n\n");
        for v in failures {
            let c = v.counterexample.as_ref().map(|c| serde_json::to_string_pretty(c).expect("json")).unwrap_or_default();
            out.push_str(&format!("### {} (seed {})\n\n```json\n{c}\n```\n\n", v.law, v.seed));
        }
    }
    let pass = verdicts.iter().filter(|v| v.result == VerdictResult::Pass).count();
    out.push_str(&format!("\n{pass} of {} verdicts pass.\n", verdicts.len()));
    out
}

// ---- Mat laws ----

fn dim<R: Rng>(rng: &mut R, max: usize) -> usize {
    rng.gen_range(0..=max)
}

fn law_quotient(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let (r, c) = (dim(rng, d), dim(rng, d));
    let f = sample_matrix(rng, ctx.ring, r, c, h);
    let g = if rng.gen_bool(0.5) {
        f.scale(&sample_phase(rng, &ctx.phases))
    } else {
        sample_matrix(rng, ctx.ring, r, c, h)
    };
    let brute = ctx.phases.elements().iter().any(|p| f == g.scale(p));
    let fast = eq_mod_phase(&f, &g, &ctx.phases).map_err(err)?;
    if brute != fast {
        return Ok(Outcome::Fail(json!({ "f": f, "g": g, "orbit_scan": brute, "eq_mod_phase": fast })));
    }
    let cf = canonical_rep(&f, &ctx.phases);
    if canonical_rep(&cf, &ctx.phases) != cf || !ctx.phases.elements().iter().any(|p| f.scale(p) == cf) {
        return Ok(Outcome::Fail(json!({ "f": f, "canonical": cf })));
    }
    Ok(Outcome::Pass)
}

fn law_copair(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let q = ctx.quot();
    let k = rng.gen_range(2..=3);
    let dims: Vec<usize> = (0..k).map(|_| dim(rng, d)).collect();
    let cod = dim(rng, d);
    let s = q.induced_phased_structure(&dims);
    let legs: Vec<QuotMorphism> = dims.iter().map(|&n| q.class(&sample_matrix(rng, ctx.ring, cod, n, h))).collect();
    let m = phased::copair(q, &s, &legs).map_err(err)?;
    for (kk, leg) in s.coprojections.iter().zip(&legs) {
        if q.compose(&m, kk).map_err(err)? != *leg {
            return Ok(Outcome::Fail(json!({ "law": "copair equation", "mediating": m, "leg": leg })));
        }
    }
    let all_blocks_nonzero = legs.iter().all(|l| !l.rep().is_zero());
    for u in &s.phases {
        let target = q.compose(&m, u).map_err(err)?;
        let found = phased::find_phase(q, &s, &m, &target).map_err(err)?;
        if q.compose(&m, &found).map_err(err)? != target || (all_blocks_nonzero && found != *u) {
            return Ok(Outcome::Fail(json!({ "law": "find_phase", "mediating": m, "phase": u, "found": found })));
        }
    }
    // copair(f, 0) restricted along the first coprojection is f
    let mut zero_legs = legs.clone();
    for l in zero_legs.iter_mut().skip(1) {
        *l = q.class(&Matrix::zeros(ctx.ring, cod, l.dom()));
    }
    let z = phased::copair(q, &s, &zero_legs).map_err(err)?;
    if q.compose(&z, &s.coprojections[0]).map_err(err)? != legs[0] {
        return Ok(fail("copair with zero legs does not restrict to the first leg"));
    }
    Ok(Outcome::Pass)
}

/// The structure `s` transported along a permutation of its apex.
fn permuted(q: &QuotCategory, s: &PhasedStructure<usize, QuotMorphism>, perm: &[usize]) -> PhasedStructure<usize, QuotMorphism> {
    let p = q.class(&Matrix::permutation(q.ring(), perm));
    let pinv = q.class(&Matrix::permutation(q.ring(), perm).inverse().expect("permutations are invertible"));
    let c = |m: &QuotMorphism| q.compose(&p, m).expect("composable");
    PhasedStructure {
        summands: s.summands.clone(),
        apex: s.apex,
        coprojections: s.coprojections.iter().map(c).collect(),
        projections: None,
        phases: s.phases.iter().map(|u| q.compose(&c(u), &pinv).expect("composable")).collect(),
    }
}

fn law_mediating(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, _h: u32) -> Result<Outcome, String> {
    let q = ctx.quot();
    let n = rng.gen_range(1..=4);
    let dims: Vec<usize> = (0..n).map(|_| dim(rng, d.min(3))).collect();
    let s1 = q.induced_phased_structure(&dims);
    let mut perm: Vec<usize> = (0..s1.apex).collect();
    perm.shuffle(rng);
    let s2 = permuted(q, &s1, &perm);
    let iso = mediating_iso(q, &s1, &s2).map_err(err)?;
    if *iso.forward.rep() != canonical_rep(&Matrix::permutation(ctx.ring, &perm), &ctx.phases) {
        return Ok(Outcome::Fail(json!({ "law": "mediating iso is the permutation", "perm": perm, "iso": iso.forward })));
    }
    let back = mediating_iso(q, &s2, &s1).map_err(err)?;
    let round = q.compose(&back.forward, &iso.forward).map_err(err)?;
    if !s1.phases.contains(&round) {
        return Ok(Outcome::Fail(json!({ "law": "round trip is a phase", "round_trip": round })));
    }
    for u in &s1.phases {
        if phased::phase_inverse(q, &s1, u).is_err() {
            return Ok(Outcome::Fail(json!({ "law": "phases are isomorphisms", "phase": u })));
        }
    }
    let trees = Bracketing::all_over(&(0..n).collect::<Vec<_>>());
    let reference = Bracketing::left_nested(n);
    for t in &trees {
        let iso = assoc_iso(q, &dims, &reference, t).map_err(err)?;
        let s = phased::bracketed_structure(q, &dims, t).map_err(err)?;
        let legs: Vec<QuotMorphism> =
            dims.iter().map(|&k| q.class(&sample_matrix(rng, ctx.ring, 2, k, 1))).collect();
        let m = phased::copair(q, &s, &legs).map_err(err)?;
        let id = q.id(s.apex);
        if q.compose(&iso.inverse, &iso.forward).map_err(err)? != id
            || q.compose(&iso.forward, &iso.inverse).map_err(err)? != id
        {
            return Ok(Outcome::Fail(json!({ "law": "assoc iso is two-sided", "bracketing": t.to_string() })));
        }
        for (kk, leg) in s.coprojections.iter().zip(&legs) {
            if q.compose(&m, kk).map_err(err)? != *leg {
                return Ok(Outcome::Fail(json!({ "law": "bracketed copair", "bracketing": t.to_string() })));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn law_initial(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let q = ctx.quot();
    for n in 0..=ctx.config.dims_max {
        let s = q.induced_phased_structure(&[n, 0]);
        let k = &s.coprojections[0];
        let inv = q.class(&k.rep().inverse().map_err(err)?);
        if q.compose(&inv, k).map_err(err)? != q.id(n) || q.compose(k, &inv).map_err(err)? != q.id(n) {
            return Ok((fail(format!("κ_A : {n} → {n} ∔ 0 is not invertible")), Mode::Exhaustive));
        }
    }
    Ok((Outcome::Pass, Mode::Exhaustive))
}

fn law_biproduct(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, _h: u32) -> Result<Outcome, String> {
    let q = ctx.quot();
    let (n, m) = (dim(rng, d), dim(rng, d));
    let s = biproduct_from_coproduct(q, &q.induced_phased_structure(&[n, m])).map_err(err)?;
    let ps = s.projections.clone().expect("projections attached");
    for i in 0..2 {
        for j in 0..2 {
            let c = q.compose(&ps[i], &s.coprojections[j]).map_err(err)?;
            let want = if i == j { q.id(s.summands[i]) } else { q.zero(&s.summands[j], &s.summands[i]).expect("zeros") };
            if c != want {
                return Ok(Outcome::Fail(json!({ "law": "biproduct equation", "i": i, "j": j, "got": c })));
            }
        }
    }
    if !phases_preserve_projections(q, &s).map_err(err)? {
        return Ok(fail("a phase moves a projection"));
    }
    if ctx.dagger_closed() {
        for i in 0..2 {
            let kd = q.dagger(&s.coprojections[i]).map_err(err)?;
            if kd != ps[i] || q.compose(&kd, &s.coprojections[i]).map_err(err)? != q.id(s.summands[i]) {
                return Ok(Outcome::Fail(json!({ "law": "κ† = π", "index": i })));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn law_generator(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let v = ctx.gp.generator_verdict().clone();
    let mode = match &v {
        CheckVerdict::Holds(m) => *m,
        _ => Mode::Exhaustive,
    };
    Ok((from_check(v), mode))
}

fn law_transitive(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let q = ctx.quot();
    let dims1 = [dim(rng, d), dim(rng, d)];
    let dims2 = [dim(rng, d), dim(rng, d)];
    let s1 = q.induced_phased_structure(&dims1);
    let s2 = q.induced_phased_structure(&dims2);
    let f1 = sample_matrix(rng, ctx.ring, dims2[0], dims1[0], h);
    let f2 = sample_matrix(rng, ctx.ring, dims2[1], dims1[1], h);
    let f = q.class(&f1.direct_sum(&f2).map_err(err)?);
    Ok(from_check(check_transitive(q, &s1, &s2, &f).map_err(err)?))
}

fn law_positive_free(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let q = ctx.quot();
    let v = combine(
        [check_positive_free(q, &[1, 1], POSITIVITY_BOUND), check_positive_free(q, &[2, 1], POSITIVITY_BOUND)],
        Mode::Exhaustive,
    );
    let mode = if ctx.ring.involution() == Involution::Conjugation { Mode::Exhaustive } else { Mode::Bounded(POSITIVITY_BOUND) };
    Ok((from_check(v), mode))
}

fn law_positive_cancellation(ctx: &Ctx, seed: u64) -> Result<(Outcome, Mode), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Matrix> = (0..ctx.config.trials)
        .map(|_| {
            let a = sample_matrix(&mut rng, ctx.ring, 1, 1, 1);
            let b = sample_matrix(&mut rng, ctx.ring, 1, 1, 1);
            a.direct_sum(&b).expect("same ring")
        })
        .collect();
    let v = check_positive_cancellation(ctx.quot(), &[1, 1], &samples, POSITIVITY_BOUND);
    Ok((from_check(v), Mode::Sampled(samples.len())))
}

fn gp_dims(rng: &mut ChaCha8Rng, d: usize) -> GpObject {
    GpObject::new(dim(rng, d))
}

fn law_gp_normalization(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let gp = &ctx.gp;
    let (a, b, c) = (dim(rng, d), dim(rng, d), dim(rng, d));
    let raw = |rng: &mut ChaCha8Rng, dom: usize, cod: usize| -> Result<Matrix, String> {
        let hm = sample_matrix(rng, ctx.ring, cod, dom, h);
        let p = sample_phase(rng, &ctx.phases);
        hm.direct_sum(&Matrix::scalar(ctx.ring, p)).map_err(err)
    };
    let (rf, rg) = (raw(rng, a, b)?, raw(rng, b, c)?);
    let (nf, ng) = (gp.gp_normalize(&rf).map_err(err)?, gp.gp_normalize(&rg).map_err(err)?);
    if gp.gp_normalize(nf.rep()).map_err(err)? != nf {
        return Ok(Outcome::Fail(json!({ "law": "normalization is idempotent", "f": rf })));
    }
    let whole = gp.gp_normalize(&rg.compose(&rf).map_err(err)?).map_err(err)?;
    if whole != gp.compose(&ng, &nf).map_err(err)? {
        return Ok(Outcome::Fail(json!({ "law": "n(g∘f) = n(n(g)∘n(f))", "f": rf, "g": rg })));
    }
    let id = Matrix::identity(ctx.ring, a + 1);
    if gp.gp_normalize(&id).map_err(err)? != gp.identity(GpObject::new(a)) {
        return Ok(fail("normalization moves the identity"));
    }
    Ok(Outcome::Pass)
}

fn law_gp_bracket(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let gp = &ctx.gp;
    let (a, b, c) = (dim(rng, d), dim(rng, d), dim(rng, d));
    let f = sample_gp_morphism(rng, gp, a, b, h);
    let g = sample_gp_morphism(rng, gp, b, c, h);
    let lhs = gp.bracket(&gp.compose(&g, &f).map_err(err)?);
    let rhs = ctx.quot().compose(&gp.bracket(&g), &gp.bracket(&f)).map_err(err)?;
    if lhs != rhs {
        return Ok(Outcome::Fail(json!({ "law": "[g∘f] = [g]∘[f]", "f": f, "g": g })));
    }
    let e = sample_gp_morphism(rng, gp, a, a, h);
    if gp.bracket(&e).rep().is_invertible() {
        let inv = gp.inverse(&e).map_err(err)?;
        if gp.compose(&inv, &e).map_err(err)? != gp.identity(e.dom()) {
            return Ok(Outcome::Fail(json!({ "law": "[−] reflects isomorphisms", "f": e })));
        }
    }
    Ok(Outcome::Pass)
}

fn law_gp_coproduct(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let gp = &ctx.gp;
    let (a, b, c) = (gp_dims(rng, d), gp_dims(rng, d), gp_dims(rng, d));
    let s = gp.gp_coproduct(a, b).map_err(err)?;
    let f = sample_gp_morphism(rng, gp, a.base_dim, c.base_dim, h);
    let g = sample_gp_morphism(rng, gp, b.base_dim, c.base_dim, h);
    let m = gp.gp_copair(&s, &f, &g).map_err(err)?;
    let unique = gp.check_copair_unique(&s, &f, &g, &m).map_err(err)?;
    if !unique.holds() {
        return Ok(from_check(unique));
    }
    // monic: κ ∘ x = κ ∘ y forces x = y through the retraction
    let x = sample_gp_morphism(rng, gp, c.base_dim, a.base_dim, h);
    let kx = gp.compose(&s.coprojections[0], &x).map_err(err)?;
    if gp.compose(&s.retractions[0], &kx).map_err(err)? != x {
        return Ok(Outcome::Fail(json!({ "law": "coprojections are split monic", "x": x })));
    }
    Ok(Outcome::Pass)
}

fn law_gp_tensor(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let gp = &ctx.gp;
    let d = d.min(3);
    let (a, b, a2, b2) = (dim(rng, d), dim(rng, d), dim(rng, d), dim(rng, d));
    let f = sample_gp_morphism(rng, gp, a, a2, h);
    let g = sample_gp_morphism(rng, gp, b, b2, h);
    let t = gp.gp_tensor(&f, &g).map_err(err)?;
    if t != gp.gp_tensor_blockwise(&f, &g).map_err(err)? {
        return Ok(Outcome::Fail(json!({ "law": "corner solve agrees with blocks", "f": f, "g": g })));
    }
    if gp.bracket(&t) != ctx.quot().tensor(&gp.bracket(&f), &gp.bracket(&g)).map_err(err)? {
        return Ok(Outcome::Fail(json!({ "law": "[f ⊗ g] = [f] ⊗ [g]", "f": f, "g": g })));
    }
    let (a3, b3) = (dim(rng, d), dim(rng, d));
    let f2 = sample_gp_morphism(rng, gp, a2, a3, h);
    let g2 = sample_gp_morphism(rng, gp, b2, b3, h);
    let lhs = gp
        .gp_tensor(&gp.compose(&f2, &f).map_err(err)?, &gp.compose(&g2, &g).map_err(err)?)
        .map_err(err)?;
    let rhs = gp.compose(&gp.gp_tensor(&f2, &g2).map_err(err)?, &t).map_err(err)?;
    if lhs != rhs {
        return Ok(Outcome::Fail(json!({ "law": "interchange", "f": f, "g": g, "f2": f2, "g2": g2 })));
    }
    let (oa, ob) = (GpObject::new(a), GpObject::new(b));
    if gp.gp_tensor(&gp.identity(oa), &gp.identity(ob)).map_err(err)? != gp.identity(gp.tensor_obj(oa, ob)) {
        return Ok(fail("id ⊗ id is not the identity"));
    }
    Ok(Outcome::Pass)
}

fn law_gp_coherence(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, _h: u32) -> Result<Outcome, String> {
    let d = d.min(3);
    let (a, b, c) = (gp_dims(rng, d), gp_dims(rng, d), gp_dims(rng, d));
    Ok(from_check(check_coherence(&ctx.gp, a, b, c).map_err(err)?))
}

fn law_gp_naturality(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let gp = &ctx.gp;
    let d = d.min(3);
    let mut m = || {
        let (x, y) = (dim(rng, d), dim(rng, d));
        sample_gp_morphism(rng, gp, x, y, h)
    };
    let (f, g, k) = (m(), m(), m());
    Ok(from_check(check_naturality(gp, &f, &g, &k).map_err(err)?))
}

fn law_gp_global_phases(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    for n in 0..=ctx.config.dims_max {
        let v = ctx.gp.check_global_phase_correspondence(GpObject::new(n)).map_err(err)?;
        if !v.holds() {
            return Ok((from_check(v), Mode::Exhaustive));
        }
    }
    Ok((Outcome::Pass, Mode::Exhaustive))
}

fn law_gp_biproduct(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, _h: u32) -> Result<Outcome, String> {
    let gp = &ctx.gp;
    let (a, b) = (gp_dims(rng, d), gp_dims(rng, d));
    let dagger = ctx.dagger_closed() && gp.positive_free_verdict().holds();
    let bp = gp.gp_biproduct(a, b, dagger).map_err(err)?;
    if dagger {
        for i in 0..2 {
            let k = &bp.coproduct.coprojections[i];
            if gp.compose(&gp.dagger(k).map_err(err)?, k).map_err(err)? != gp.identity(k.dom()) {
                return Ok(Outcome::Fail(json!({ "law": "κ†∘κ = id", "index": i })));
            }
        }
        let mixed = gp.compose(&gp.dagger(&bp.coproduct.coprojections[0]).map_err(err)?, &bp.coproduct.coprojections[1]);
        if mixed.map_err(err)? != bp.zeros[1] {
            return Ok(fail("κ_A† ∘ κ_B is not zero"));
        }
    }
    Ok(Outcome::Pass)
}

fn law_compact(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, _h: u32) -> Result<Outcome, String> {
    let n = dim(rng, d.min(3));
    if !compact(ctx.ring, n).snakes_hold().map_err(err)? {
        return Ok(fail(format!("base snakes fail at {n}")));
    }
    let (p, q) = (sample_phase(rng, &ctx.phases), sample_phase(rng, &ctx.phases));
    ctx.gp.gp_duals(GpObject::new(n), &p, &q).map_err(err)?;
    Ok(Outcome::Pass)
}

fn law_dagger_compact(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, _h: u32) -> Result<Outcome, String> {
    let gp = &ctx.gp;
    let a = GpObject::new(rng.gen_range(1..=d.clamp(1, 3)));
    let p = sample_phase(rng, &ctx.phases);
    let psi = gp.find_isometric_state(a).map_err(err)?;
    let with = gp.gp_dagger_compact(a, &p, Some(&psi)).map_err(err)?;
    let without = gp.gp_dagger_compact(a, &p, None).map_err(err)?;
    if with.epsilon != without.epsilon || with.snake_scalar != without.snake_scalar {
        return Ok(fail("the state changes the dagger dual"));
    }
    Ok(Outcome::Pass)
}

fn law_equivalence(ctx: &Ctx, rng: &mut ChaCha8Rng, d: usize, h: u32) -> Result<Outcome, String> {
    let (r, c) = (dim(rng, d), dim(rng, d));
    let samples: Vec<Matrix> = (0..4).map(|_| sample_matrix(rng, ctx.ring, r, c, h)).collect();
    let report = ctx.gp.equivalence_roundtrip(&samples).map_err(err)?;
    if report.passed() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Fail(json!({ "samples": samples, "falsifications": report.falsifications })))
    }
}

fn law_transport(ctx: &Ctx, seed: u64) -> Result<(Outcome, Mode), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    for name in &ctx.config.functors {
        let f = match functor_by_name(name, ctx.ring) {
            Ok(f) => f,
            Err(e) => return Ok((Outcome::Unknown(format!("{name}: {e}")), Mode::Exhaustive)),
        };
        let dst = if f.target == ctx.ring {
            ctx.phases.clone()
        } else {
            PhaseGroup::all_units(f.target).ok_or_else(|| format!("no unit group for {}", f.target))?
        };
        let q = quotient_of_functor(&f, &ctx.phases, &dst).map_err(err)?;
        let gpf = gp_of_functor(&q).map_err(err)?;
        let d = ctx.config.dims_max.min(3);
        let mut samples = Vec::new();
        let mut cod = dim(&mut rng, d);
        for _ in 0..ctx.config.trials {
            let next = dim(&mut rng, d);
            samples.push(sample_gp_morphism(&mut rng, &ctx.gp, cod, next, ctx.config.height));
            cod = next;
        }
        let base: Vec<Matrix> = samples.iter().map(|s| s.block()).collect();
        f.check_laws(&base).map_err(err)?;
        q.check_well_defined(&base).map_err(err)?;
        checks += gpf.check_laws(&samples).map_err(err)?;
    }
    Ok((Outcome::Pass, Mode::Sampled(checks)))
}

fn law_adjunction(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let report = adjunction_checks(&ctx.phases, ctx.config.dims_max.min(2)).map_err(err)?;
    if report.passed() {
        Ok((Outcome::Pass, Mode::Exhaustive))
    } else {
        Ok((Outcome::Fail(serde_json::to_value(&report).map_err(err)?), Mode::Exhaustive))
    }
}

fn law_projective(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let RingKind::PrimeField(q) = ctx.ring.kind() else {
        return Ok((Outcome::Unknown("needs a finite field".into()), Mode::Exhaustive));
    };
    let gl = ((q * q - 1) * (q * q - q)) as usize;
    let got = invertible_classes(&ctx.phases, 2).ok_or("enumeration failed")?;
    if got * ctx.phases.len() != gl {
        return Ok((Outcome::Fail(json!({ "classes": got, "gl_order": gl, "phases": ctx.phases.len() })), Mode::Exhaustive));
    }
    Ok((Outcome::Pass, Mode::Exhaustive))
}

// ---- finite laws ----

fn law_fin_coproducts(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let gsets = ctx.gsets()?;
    let q = gsets.quotient(true).map_err(err)?;
    let n = q.num_objects();
    let mut witnesses = 0;
    for a in 0..n {
        for b in 0..n {
            let report = enumerate_phased_coproducts(&q, &[a, b]);
            // a witness that is not a disjoint union stands in for a
            // coproduct too large for the size bound
            let fits = gsets.size(a) + gsets.size(b) <= ctx.config.fincat.max_set_size;
            let mut disjoint = 0;
            for w in &report.witnesses {
                witnesses += 1;
                if !naive_verify(&q, w) {
                    return Ok((Outcome::Fail(json!({ "law": "naive two-clause check", "witness": w })), Mode::Exhaustive));
                }
                match gsets.predicted_phases(&q, w) {
                    Some(predicted) => {
                        let mut listed = w.phases.clone();
                        listed.sort();
                        if listed != predicted {
                            return Ok((
                                Outcome::Fail(json!({ "law": "phases match the action", "witness": w, "predicted": predicted })),
                                Mode::Exhaustive,
                            ));
                        }
                        disjoint += 1;
                    }
                    None if fits => {
                        return Ok((
                            Outcome::Fail(json!({ "law": "witnesses are disjoint unions", "witness": w })),
                            Mode::Exhaustive,
                        ))
                    }
                    None => {}
                }
            }
            if fits && disjoint == 0 {
                return Ok((Outcome::Fail(json!({ "law": "disjoint union exists", "summands": [a, b] })), Mode::Exhaustive));
            }
        }
    }
    if witnesses == 0 {
        return Ok((Outcome::Unknown("no phased coproducts within the size bound".into()), Mode::Exhaustive));
    }
    Ok((Outcome::Pass, Mode::Exhaustive))
}

fn law_fin_transitive(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let gsets = ctx.gsets()?;
    let q = gsets.quotient(false).map_err(err)?;
    let n = q.num_objects();
    let mut all = Vec::new();
    for a in 0..n {
        for b in 0..n {
            all.extend(enumerate_phased_coproducts(&q, &[a, b]).witnesses);
        }
    }
    for w1 in &all {
        for w2 in &all {
            let v = check_transitive_phases(&q, w1, w2);
            if !v.holds() {
                return Ok((from_check(v), Mode::Exhaustive));
            }
        }
    }
    Ok((Outcome::Pass, Mode::Exhaustive))
}

fn law_fin_initial(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let gsets = ctx.gsets()?;
    let q = gsets.quotient(false).map_err(err)?;
    let initials = initial_objects(&q);
    if !initials.contains(&gsets.empty()) {
        return Ok((fail("the empty G-set is not initial"), Mode::Exhaustive));
    }
    for a in 0..q.num_objects() {
        let s = PhasedCategory::phased_coproduct(&q, &[a, gsets.empty()]).map_err(err)?;
        let k = s.coprojections[0];
        let invertible = q.hom(s.apex, a).iter().any(|&g| {
            q.compose(g, k) == Some(q.identity(a)) && q.compose(k, g) == Some(q.identity(s.apex))
        });
        if !invertible {
            return Ok((Outcome::Fail(json!({ "law": "κ_A : A → A ∔ 0 is invertible", "object": a })), Mode::Exhaustive));
        }
    }
    Ok((Outcome::Pass, Mode::Exhaustive))
}

fn law_fin_gp(ctx: &Ctx, _seed: u64) -> Result<(Outcome, Mode), String> {
    let gsets = ctx.gsets()?;
    let gp = FiniteGp::new(gsets).map_err(err)?;
    let report = gp.check_equivalence();
    if !report.passed() {
        return Ok((Outcome::Fail(serde_json::to_value(&report).map_err(err)?), Mode::Exhaustive));
    }
    let v = gp.check_coproduct_uniqueness();
    Ok((from_check(v), Mode::Exhaustive))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let g = Ring::gaussian();
        assert_eq!(gen_matrix(g, 7, (2, 2), 3), gen_matrix(g, 7, (2, 2), 3));
        for seed in 0..50 {
            let m = gen_matrix(g, seed, (2, 3), 0);
            assert!(m.entries().iter().all(|x| x.is_zero() || x.is_one()));
        }
    }

    #[test]
    fn some_draw_is_invertible() {
        let g = Ring::gaussian();
        assert!((0..100).any(|s| gen_matrix(g, s, (2, 2), 2).is_invertible()));
    }

    #[test]
    fn empty_law_list() {
        assert!(run_suite(&[], &RunConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn registry_ids_are_unique() {
        let mut ids: Vec<&str> = laws().iter().map(|l| l.id).collect();
        ids.sort();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }
}
