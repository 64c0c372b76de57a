use phasecat::config::RunConfig;
use phasecat::harness::{
    any_failed, gen_gp_morphism, replay, replay_law, run_law, run_suite, sample_matrix, sampled, summary_markdown, Ctx,
    Outcome, Verdict, VerdictResult,
};
use phasecat::gp::GpCategory;
use phasecat::scalars::{PhaseGroup, Ring};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn trivial_involution() -> RunConfig {
    RunConfig::from_toml_str(
        "ring = \"gaussian\"\ninvolution = \"identity\"\nphases = [\"1\", \"-1\"]\nsuites = [\"positive-free\"]\ntrials = 5",
    )
    .unwrap()
}

#[test]
fn default_suite_passes_on_gaussian_units() {
    let cfg = RunConfig { trials: 8, seeds: vec![1, 2], ..RunConfig::default() };
    let verdicts = run_suite(&cfg.suites, &cfg).unwrap();
    assert!(!verdicts.is_empty());
    for v in &verdicts {
        assert_eq!(v.result, VerdictResult::Pass, "{}", v.to_json_line());
    }
    assert!(verdicts.windows(2).all(|w| (&w[0].law, w[0].seed) <= (&w[1].law, w[1].seed)));
}

#[test]
fn reruns_are_identical() {
    let cfg = RunConfig { trials: 5, seeds: vec![3, 9], ..RunConfig::default() };
    let strip = |vs: Vec<Verdict>| vs.iter().map(|v| v.without_runtime().to_json_line()).collect::<Vec<_>>();
    let a = strip(run_suite(&cfg.suites, &cfg).unwrap());
    let b = strip(run_suite(&cfg.suites, &cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn positive_free_fails_with_witness_over_the_identity_involution() {
    let cfg = trivial_involution();
    let verdicts = run_suite(&cfg.suites, &cfg).unwrap();
    assert_eq!(verdicts.len(), 1);
    let v = &verdicts[0];
    assert_eq!(v.result, VerdictResult::Fail);
    assert!(any_failed(&verdicts));
    let w = &v.counterexample.as_ref().unwrap()["witness"];
    assert_eq!(w["entries"], json!(["0", "i", "1", "0"]));
    let ctx = Ctx::new(&cfg).unwrap();
    assert!(matches!(replay(&ctx, v), Some(Outcome::Fail(_))));
    assert!(summary_markdown("t", &verdicts).contains("positive-free"));
}

/// Fails whenever a sampled 3 × 3 block has an entry outside `{0, 1}`.
fn fails_on_large_entries(ctx: &Ctx, rng: &mut ChaCha8Rng, dims: usize, height: u32) -> Result<Outcome, String> {
    let n = rng.gen_range(0..=dims);
    let m = sample_matrix(rng, ctx.ring, n, n, height);
    let bad = n >= 2 && m.entries().iter().any(|x| !x.is_zero() && !x.is_one());
    Ok(if bad { Outcome::Fail(json!({ "n": n, "m": m })) } else { Outcome::Pass })
}

#[test]
fn failures_shrink_and_replay() {
    let law = sampled("synthetic", "entries stay in {0, 1}", fails_on_large_entries);
    let cfg = RunConfig { trials: 40, dims_max: 4, height: 3, ..RunConfig::default() };
    let ctx = Ctx::new(&cfg).unwrap();
    let v = run_law(&law, &ctx, 11);
    assert_eq!(v.result, VerdictResult::Fail);
    let c = v.counterexample.as_ref().unwrap();
    let (dims, height) = (c["dims"].as_u64().unwrap(), c["height"].as_u64().unwrap());
    // the law cannot fail below dimension 2 or at height 0
    assert!(dims >= 2 && dims <= 4);
    assert!(height >= 1 && height <= 3);
    assert!(matches!(replay_law(&law, &ctx, &v), Some(Outcome::Fail(_))));
    let again = run_law(&law, &ctx, 11);
    assert_eq!(again.without_runtime(), v.without_runtime());
}

#[test]
fn empty_and_unknown_law_lists() {
    let cfg = RunConfig::default();
    assert!(run_suite(&[], &cfg).unwrap().is_empty());
    assert!(run_suite(&["no-such-law".to_string()], &cfg).is_err());
}

#[test]
fn generated_gp_morphisms_are_deterministic() {
    let gp = GpCategory::from_phases(PhaseGroup::gaussian_units(Ring::gaussian()));
    assert_eq!(gen_gp_morphism(&gp, 5, (2, 3)), gen_gp_morphism(&gp, 5, (2, 3)));
    assert_eq!(gen_gp_morphism(&gp, 5, (2, 3)).rep().rows(), 4);
}

#[test]
fn fincat_suite_passes_and_size_guard_triggers() {
    let cfg = RunConfig::from_toml_str("backend = \"fincat\"\n[fincat]\ngroup = \"Z2\"\nmax_set_size = 2").unwrap();
    let verdicts = run_suite(&cfg.suites, &cfg).unwrap();
    assert_eq!(verdicts.len(), 4);
    assert!(verdicts.iter().all(|v| v.result == VerdictResult::Pass), "{verdicts:?}");

    let big = RunConfig::from_toml_str("backend = \"fincat\"\n[fincat]\nmax_set_size = 5").unwrap();
    let verdicts = run_suite(&big.suites, &big).unwrap();
    assert!(verdicts.iter().all(|v| v.result == VerdictResult::Fail));
    assert!(verdicts[0].counterexample.as_ref().unwrap()["error"].as_str().unwrap().contains("size"));
}
