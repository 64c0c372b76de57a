//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits nonzero if any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use phasecat::config::RunConfig;
use phasecat::fincat::{build_gset_category, enumerate_phased_coproducts, naive_verify, FiniteGroup};
use phasecat::gp::finite::FiniteGp;
use phasecat::gp::{check_coherence, check_naturality, GpCategory, GpObject};
use phasecat::harness::{gen_matrix, law, run_law, sample_gp_morphism, sample_matrix, Ctx, VerdictResult};
use phasecat::matcat::{compact, Matrix};
use phasecat::phased::{
    assoc_iso, biproduct_from_coproduct, check_positive_free, mediating_iso, Bracketing, CheckVerdict, Mode,
};
use phasecat::quotient::{canonical_rep, eq_mod_phase, QuotCategory};
use phasecat::scalars::{PhaseGroup, Ring};
use phasecat::transport::{adjunction_checks, functor_by_name, gp_of_functor, invertible_classes, quotient_of_functor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn within(limit: Option<Duration>, start: Instant) -> Result<(), String> {
    match limit {
        Some(l) if start.elapsed() >= l => Err(format!("took {:?}, limit {l:?}", start.elapsed())),
        _ => Ok(()),
    }
}

fn gaussian4() -> PhaseGroup {
    PhaseGroup::gaussian_units(Ring::gaussian())
}

fn mat_config(trials: usize, dims_max: usize) -> RunConfig {
    RunConfig { trials, dims_max, seeds: vec![1], ..RunConfig::default() }
}

fn run_sampled(id: &str, trials: usize, dims_max: usize) -> Result<(), String> {
    let cfg = mat_config(trials, dims_max);
    let ctx = Ctx::new(&cfg).map_err(e)?;
    let l = law(id).ok_or_else(|| format!("no law {id}"))?;
    let v = run_law(l, &ctx, 1);
    ensure(v.result == VerdictResult::Pass, format!("{id}: {:?} {:?}", v.result, v.counterexample))?;
    ensure(v.trials == trials, format!("{id}: ran {} trials", v.trials))
}

/// 1. Quotient soundness on 1000 seeded pairs.
fn quotient_soundness() -> Check {
    let phases = gaussian4();
    let ring = phases.ring();
    let mut related = 0;
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, c) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let f = sample_matrix(&mut rng, ring, r, c, 2);
        let g = if seed % 2 == 0 {
            f.scale(&phases.elements()[rng.gen_range(0..phases.len())])
        } else {
            sample_matrix(&mut rng, ring, r, c, 2)
        };
        let brute = phases.elements().iter().any(|p| f.scale(p) == g);
        let fast = eq_mod_phase(&f, &g, &phases).map_err(e)?;
        ensure(brute == fast, format!("seed {seed}: orbit scan {brute}, eq_mod_phase {fast}"))?;
        related += usize::from(fast);
        let cf = canonical_rep(&f, &phases);
        ensure(canonical_rep(&cf, &phases) == cf, format!("seed {seed}: canonical_rep not idempotent"))?;
        ensure(
            canonical_rep(&g, &phases) == cf || !fast,
            format!("seed {seed}: related matrices with different canonical reps"),
        )?;
    }
    Ok(format!("1000 pairs, {related} phase-related"))
}

/// 2. Copair and phase solving on 500 samples; exhaustive G-Set oracle.
fn phased_clauses() -> Check {
    run_sampled("copair", 500, 4)?;
    let gsets = build_gset_category(&FiniteGroup::cyclic(2), 2).map_err(e)?;
    let q = gsets.quotient(true).map_err(e)?;
    let mut witnesses = 0;
    for a in 0..q.num_objects() {
        for b in 0..q.num_objects() {
            let fits = gsets.size(a) + gsets.size(b) <= 2;
            let mut disjoint = 0;
            for w in enumerate_phased_coproducts(&q, &[a, b]).witnesses {
                ensure(naive_verify(&q, &w), format!("witness {w:?} fails the naive check"))?;
                witnesses += 1;
                // apexes that are not disjoint unions only stand in for a
                // coproduct too large for the size bound
                let Some(predicted) = gsets.predicted_phases(&q, &w) else {
                    ensure(!fits, format!("witness {w:?} is not a disjoint union"))?;
                    continue;
                };
                let mut listed = w.phases.clone();
                listed.sort();
                ensure(listed == predicted, format!("phases {listed:?} but the action predicts {predicted:?}"))?;
                disjoint += 1;
            }
            ensure(!fits || disjoint > 0, format!("no disjoint-union witness for ({a}, {b})"))?;
        }
    }
    ensure(witnesses > 0, "no G-Set witnesses")?;
    Ok(format!("500 sampled copairs; {witnesses} G-Set witnesses verified"))
}

/// 3. Mediating and associativity isos for every bracketing of at most four
/// summands at base dims at most 3.
fn isos() -> Check {
    let q = QuotCategory::new(gaussian4());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    for n in 1..=4usize {
        let mut dim_vectors: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            dim_vectors = dim_vectors.iter().flat_map(|v| (0..=3).map(move |d| [v.clone(), vec![d]].concat())).collect();
        }
        if n == 4 {
            // 4^4 dimension vectors × 120 bracketings is too slow for the gate
            let mut keep = vec![vec![3, 3, 3, 3], vec![0, 1, 2, 3]];
            keep.extend((0..10).map(|_| dim_vectors[rng.gen_range(0..dim_vectors.len())].clone()));
            dim_vectors = keep;
        }
        let reference = Bracketing::left_nested(n);
        let trees = Bracketing::all_with_permutations(n);
        for dims in &dim_vectors {
            for t in &trees {
                let iso = assoc_iso(&q, dims, &reference, t).map_err(|x| format!("{dims:?} {t}: {x}"))?;
                let apex: usize = dims.iter().sum();
                let id = q.id(apex);
                ensure(
                    q.compose(&iso.inverse, &iso.forward).map_err(e)? == id
                        && q.compose(&iso.forward, &iso.inverse).map_err(e)? == id,
                    format!("{dims:?} {t}: not two-sided"),
                )?;
                let s1 = phasecat::phased::bracketed_structure(&q, dims, &reference).map_err(e)?;
                let s2 = phasecat::phased::bracketed_structure(&q, dims, t).map_err(e)?;
                let m = mediating_iso(&q, &s2, &s1).map_err(e)?;
                ensure(
                    q.compose(&m.inverse, &m.forward).map_err(e)? == id
                        && q.compose(&m.forward, &m.inverse).map_err(e)? == id,
                    format!("{dims:?} {t}: mediating iso not two-sided"),
                )?;
                count += 1;
            }
        }
    }
    run_sampled("mediating-iso", 50, 3)?;
    Ok(format!("{count} (dims, bracketing) cases"))
}

/// 4. Dual-path GP copairs agree exactly; coprojections split.
fn gp_coproducts() -> Check {
    let gp = GpCategory::from_phases(gaussian4());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..500 {
        let (a, b, c) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let s = gp.gp_coproduct(GpObject::new(a), GpObject::new(b)).map_err(e)?;
        let f = sample_gp_morphism(&mut rng, &gp, a, c, 2);
        let g = sample_gp_morphism(&mut rng, &gp, b, c, 2);
        let direct = gp.copair_direct(&s, &f, &g).map_err(e)?;
        let via = gp.copair_via_phases(&s, &f, &g).map_err(e)?;
        ensure(direct == via, format!("sample {i}: {direct:?} vs {via:?}"))?;
        ensure(gp.check_copair_unique(&s, &f, &g, &direct).map_err(e)?.holds(), format!("sample {i}: not unique"))?;
        for (k, r) in s.coprojections.iter().zip(&s.retractions) {
            ensure(gp.compose(r, k).map_err(e)? == gp.identity(k.dom()), format!("sample {i}: retraction fails"))?;
        }
    }
    Ok("500 samples, dual paths equal".into())
}

/// 5. Monoidal coherence on 50 sampled triples plus naturality.
fn coherence() -> Check {
    let gp = GpCategory::from_phases(gaussian4());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let d: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=3)).collect();
        let v = check_coherence(&gp, GpObject::new(d[0]), GpObject::new(d[1]), GpObject::new(d[2])).map_err(e)?;
        ensure(v.holds(), format!("triple {i} {d:?}: {v:?}"))?;
        let mut m = || {
            let (x, y) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            sample_gp_morphism(&mut rng, &gp, x, y, 2)
        };
        let (f, g, h) = (m(), m(), m());
        let v = check_naturality(&gp, &f, &g, &h).map_err(e)?;
        ensure(v.holds(), format!("naturality {i}: {v:?}"))?;
    }
    Ok("50 triples: pentagon, triangle, unit, hexagons, naturality".into())
}

/// 6. Global phases of GP correspond to ℙ.
fn global_phases() -> Check {
    let phases = gaussian4();
    let gp = GpCategory::from_phases(phases.clone());
    let gps = gp.global_phases().map_err(e)?;
    ensure(gps.len() == phases.len(), "ℙ_GP has the wrong size")?;
    for n in 0..=4 {
        let a = GpObject::new(n);
        let v = gp.check_global_phase_correspondence(a).map_err(e)?;
        ensure(v.holds(), format!("object {a}: {v:?}"))?;
        for u in gp.quot().block_phases(&[n, 1]) {
            let p = gp.phase_as_global(&u).map_err(e)?;
            let lhs = gp.from_class(&u).map_err(e)?;
            ensure(gp.scalar_action(&p, &gp.identity(a)).map_err(e)? == lhs, format!("{a}: {u:?} is not a scalar"))?;
        }
    }
    Ok(format!("{} global phases, objects 0^..4^", gps.len()))
}

/// 7. Round-trip equivalence on 1000 homs and exhaustively on G-Set.
fn equivalence() -> Check {
    let gp = GpCategory::from_phases(gaussian4());
    let ring = gp.ring();
    let mut falsifications = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for chunk in 0..100 {
        let (r, c) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let samples: Vec<Matrix> = (0..10).map(|k| gen_matrix(ring, chunk * 10 + k, (r, c), 2)).collect();
        falsifications += gp.equivalence_roundtrip(&samples).map_err(e)?.falsifications.len();
    }
    ensure(falsifications == 0, format!("{falsifications} falsifications"))?;
    let gsets = build_gset_category(&FiniteGroup::cyclic(2), 4).map_err(e)?;
    let report = FiniteGp::new(&gsets).map_err(e)?.check_equivalence();
    ensure(report.passed(), format!("G-Set: {:?}", report.falsifications))?;
    Ok(format!("1000 homs; G-Set {} object pairs exhaustive", report.object_pairs))
}

/// 8. Biproduct and dagger laws; positive-freeness both ways.
fn biproducts() -> Check {
    let q = QuotCategory::new(gaussian4());
    for n in 0..=4 {
        for m in 0..=4 {
            let s = biproduct_from_coproduct(&q, &q.induced_phased_structure(&[n, m])).map_err(e)?;
            let ps = s.projections.clone().ok_or("no projections")?;
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j {
                        q.id(s.summands[i])
                    } else {
                        q.class(&Matrix::zeros(q.ring(), s.summands[i], s.summands[j]))
                    };
                    ensure(q.compose(&ps[i], &s.coprojections[j]).map_err(e)? == want, format!("π{i}κ{j} at ({n},{m})"))?;
                }
                ensure(q.dagger(&s.coprojections[i]).map_err(e)? == ps[i], format!("κ† ≠ π at ({n},{m})"))?;
            }
        }
    }
    match check_positive_free(&q, &[1, 1], phasecat::gp::POSITIVITY_BOUND) {
        CheckVerdict::Holds(Mode::Exhaustive) => {}
        other => return Err(format!("positive-free over conjugation: {other:?}")),
    }
    let trivial = PhaseGroup::parse(Ring::gaussian_trivial(), &["1", "-1"]).map_err(e)?;
    let qt = QuotCategory::new(trivial);
    let CheckVerdict::Refuted(w) = check_positive_free(&qt, &[1, 1], phasecat::gp::POSITIVITY_BOUND) else {
        return Err("positive-free not refuted over the identity involution".into());
    };
    let ring = qt.ring();
    let g = Matrix::from_strs(ring, 2, 2, &["0", "i", "1", "0"]).map_err(e)?;
    let p = Matrix::from_strs(ring, 2, 2, &["1", "0", "0", "-1"]).map_err(e)?;
    let witness: Matrix = serde_json::from_value(w["witness"].clone()).map_err(e)?;
    let positive: Matrix = serde_json::from_value(w["positive_representative"].clone()).map_err(e)?;
    ensure(witness == g, format!("witness {witness}"))?;
    ensure(positive == p && g.dagger().compose(&g).map_err(e)? == p, format!("GᵀG = {positive}"))?;
    Ok("dims ≤ 4 exact; refuted with G = [[0,i],[1,0]], GᵀG = diag(1,-1)".into())
}

/// 9. Snakes in the base and in GP; dagger dual with ψ = e₁.
fn compact_closure() -> Check {
    let phases = gaussian4();
    let gp = GpCategory::from_phases(phases.clone());
    let ring = gp.ring();
    for n in 0..=3 {
        ensure(compact(ring, n).snakes_hold().map_err(e)?, format!("base snakes at {n}"))?;
        let a = GpObject::new(n);
        for p in phases.elements() {
            for q in phases.elements() {
                let d = gp.gp_duals(a, p, q).map_err(e)?;
                ensure(gp.snake_left(a, &d.eta, &d.epsilon).map_err(e)? == gp.identity(a), "left snake")?;
                ensure(gp.snake_right(a, &d.eta, &d.epsilon).map_err(e)? == gp.identity(a), "right snake")?;
            }
        }
        if n > 0 {
            let mut e1 = Matrix::zeros(ring, n, 1);
            e1.set(0, 0, ring.one());
            let psi = gp.embed(&e1).map_err(e)?;
            let d = gp.gp_dagger_compact(a, &ring.one(), Some(&psi)).map_err(e)?;
            ensure(d.snake_scalar == gp.identity(gp.unit()), format!("snake scalar at {n}"))?;
        }
    }
    Ok("dims ≤ 3, all phase lifts".into())
}

/// 10. Projective counts over F_2 and F_3.
fn projective_counts() -> Check {
    let f2 = PhaseGroup::all_units(Ring::prime_field(2).map_err(e)?).ok_or("F2 units")?;
    let f3 = PhaseGroup::all_units(Ring::prime_field(3).map_err(e)?).ok_or("F3 units")?;
    let (c2, c3) = (invertible_classes(&f2, 2).ok_or("F2")?, invertible_classes(&f3, 2).ok_or("F3")?);
    ensure(c2 == 6 && c3 == 24, format!("counts {c2}, {c3}"))?;
    Ok(format!("{c2} and {c3} classes"))
}

/// 11. Conjugation transported to GP; comparison unit over F_3.
fn transport() -> Check {
    let phases = gaussian4();
    let gp = GpCategory::from_phases(phases.clone());
    let f = functor_by_name("conjugation", gp.ring()).map_err(e)?;
    let q = quotient_of_functor(&f, &phases, &phases).map_err(e)?;
    let gpf = gp_of_functor(&q).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut samples = Vec::new();
    let mut cod = rng.gen_range(0..=3);
    for _ in 0..100 {
        let next = rng.gen_range(0..=3);
        samples.push(sample_gp_morphism(&mut rng, &gp, cod, next, 2));
        cod = next;
    }
    let checks = gpf.check_laws(&samples).map_err(e)?;
    let f3 = PhaseGroup::parse(Ring::prime_field(3).map_err(e)?, &["1", "2"]).map_err(e)?;
    let report = adjunction_checks(&f3, 2).map_err(e)?;
    ensure(report.passed() && report.phases_are_all_units, format!("{:?}", report.falsifications))?;
    Ok(format!("{checks} functor checks on 100 samples; F_3 unit bijective on {} hom-sets", report.homs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 11] = [
        ("quotient soundness", quotient_soundness, Some(Duration::from_secs(5))),
        ("phased-coproduct clauses", phased_clauses, None),
        ("mediating and associativity isos", isos, None),
        ("GP coproduct uniqueness", gp_coproducts, None),
        ("GP monoidal coherence", coherence, Some(Duration::from_secs(60))),
        ("global-phase correspondence", global_phases, None),
        ("round-trip equivalences", equivalence, None),
        ("biproduct and dagger laws", biproducts, None),
        ("compact closure", compact_closure, None),
        ("projective counting", projective_counts, Some(Duration::from_secs(1))),
        ("transport instances", transport, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f().and_then(|msg| within(*limit, start).map(|_| msg));
        match result {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({:.2?})", i + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({:.2?})", i + 1, start.elapsed());
            }
        }
    }
    println!("{} of 11 criteria pass", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
