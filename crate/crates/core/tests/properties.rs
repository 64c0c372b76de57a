use phasecat::gp::{GpCategory, GpMorphism};
use phasecat::harness::sample_gp_morphism;
use phasecat::matcat::Matrix;
use phasecat::quotient::{canonical_rep, eq_mod_phase, QuotCategory};
use phasecat::scalars::{PhaseGroup, Ring};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gaussian4() -> PhaseGroup {
    PhaseGroup::gaussian_units(Ring::gaussian())
}

fn entry() -> impl Strategy<Value = String> {
    (-2i64..=2, -2i64..=2).prop_map(|(re, im)| match (re, im) {
        (r, 0) => r.to_string(),
        (0, i) => format!("{i}i"),
        (r, i) if i > 0 => format!("{r}+{i}i"),
        (r, i) => format!("{r}{i}i"),
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(entry(), rows * cols).prop_map(move |es| {
        let refs: Vec<&str> = es.iter().map(String::as_str).collect();
        Matrix::from_strs(Ring::gaussian(), rows, cols, &refs).expect("valid literals")
    })
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    (0usize..=3, 0usize..=3).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Three composable GP morphisms `f : a → b`, `g : b → c`, `h : c → d`.
fn chain(gp: &GpCategory, seed: u64, dims: [usize; 4]) -> [GpMorphism; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = |x, y| sample_gp_morphism(&mut rng, gp, x, y, 2);
    [m(dims[0], dims[1]), m(dims[1], dims[2]), m(dims[2], dims[3])]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_rep_is_constant_on_orbits(f in any_matrix(), k in 0usize..4) {
        let phases = gaussian4();
        let g = f.scale(&phases.elements()[k]);
        prop_assert_eq!(canonical_rep(&f, &phases), canonical_rep(&g, &phases));
        prop_assert!(eq_mod_phase(&f, &g, &phases).unwrap());
        prop_assert!(eq_mod_phase(&g, &f, &phases).unwrap());
    }

    #[test]
    fn eq_mod_phase_matches_canonical_reps(f in matrix(2, 2), g in matrix(2, 2)) {
        let phases = gaussian4();
        let same = canonical_rep(&f, &phases) == canonical_rep(&g, &phases);
        prop_assert_eq!(eq_mod_phase(&f, &g, &phases).unwrap(), same);
    }

    #[test]
    fn quotient_composition_is_well_defined(f in matrix(2, 3), g in matrix(3, 2), k in 0usize..4, l in 0usize..4) {
        let q = QuotCategory::new(gaussian4());
        let ps = gaussian4();
        let lhs = q.compose(&q.class(&g), &q.class(&f)).unwrap();
        let rhs = q.compose(&q.class(&g.scale(&ps.elements()[k])), &q.class(&f.scale(&ps.elements()[l]))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gp_composition_is_associative_and_unital(seed in any::<u64>(), dims in prop::array::uniform4(0usize..=3)) {
        let gp = GpCategory::from_phases(gaussian4());
        let [f, g, h] = chain(&gp, seed, dims);
        let left = gp.compose(&h, &gp.compose(&g, &f).unwrap()).unwrap();
        let right = gp.compose(&gp.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(gp.compose(&gp.identity(f.cod()), &f).unwrap(), f.clone());
        prop_assert_eq!(gp.compose(&f, &gp.identity(f.dom())).unwrap(), f.clone());
    }

    #[test]
    fn gp_morphisms_are_normalized(seed in any::<u64>(), a in 0usize..=3, b in 0usize..=3) {
        let gp = GpCategory::from_phases(gaussian4());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_gp_morphism(&mut rng, &gp, a, b, 2);
        let corner = f.rep().get(b, a);
        prop_assert!(corner.is_one());
        prop_assert_eq!(gp.gp_normalize(f.rep()).unwrap(), f.clone());
        prop_assert_eq!(gp.from_class(&gp.class_of(&f)).unwrap(), f);
    }

    #[test]
    fn gp_tensor_is_bifunctorial(seed in any::<u64>(), d1 in prop::array::uniform3(0usize..=2), d2 in prop::array::uniform3(0usize..=2)) {
        let gp = GpCategory::from_phases(gaussian4());
        let [f, f2, _] = chain(&gp, seed, [d1[0], d1[1], d1[2], 0]);
        let [g, g2, _] = chain(&gp, seed.wrapping_add(1), [d2[0], d2[1], d2[2], 0]);
        let lhs = gp.gp_tensor(&gp.compose(&f2, &f).unwrap(), &gp.compose(&g2, &g).unwrap()).unwrap();
        let rhs = gp.compose(&gp.gp_tensor(&f2, &g2).unwrap(), &gp.gp_tensor(&f, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(gp.gp_tensor(&f, &g).unwrap(), gp.gp_tensor_blockwise(&f, &g).unwrap());
    }

    #[test]
    fn bracket_is_a_functor(seed in any::<u64>(), dims in prop::array::uniform4(0usize..=3)) {
        let gp = GpCategory::from_phases(gaussian4());
        let [f, g, _] = chain(&gp, seed, dims);
        let lhs = gp.bracket(&gp.compose(&g, &f).unwrap());
        let rhs = gp.quot().compose(&gp.bracket(&g), &gp.bracket(&f)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dagger_is_an_involutive_contravariant_functor(f in matrix(2, 3), g in matrix(3, 2)) {
        let q = QuotCategory::new(gaussian4());
        let (cf, cg) = (q.class(&f), q.class(&g));
        let gf = q.compose(&cg, &cf).unwrap();
        prop_assert_eq!(q.dagger(&gf).unwrap(), q.compose(&q.dagger(&cf).unwrap(), &q.dagger(&cg).unwrap()).unwrap());
        prop_assert_eq!(q.dagger(&q.dagger(&cf).unwrap()).unwrap(), cf);
    }
}
