use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subopt::scenario::ScenarioConfig;
use subopt::{
    assemble, climb, decide, parse_scenario_config, run_episode, run_episode_from,
    DecisionAssignment, DecisionMakerMode, Genotype, Landscape, Mask, Proposal, WeightVector,
};

fn landscape_and_genotype() -> impl Strategy<Value = (Landscape, Genotype)> {
    (1usize..=6)
        .prop_flat_map(|n| {
            (
                Just(n),
                0..n,
                any::<u64>(),
                prop::collection::vec(0.05f64..1.0, n),
                any::<u64>(),
                any::<bool>(),
            )
        })
        .prop_map(|(n, k, seed, raw, bits, equal)| {
            let w = if equal {
                WeightVector::equal(n)
            } else {
                WeightVector::proportional(&raw).unwrap()
            };
            (
                Landscape::generate(n, k, w, seed).unwrap(),
                Genotype::new(bits, n).unwrap(),
            )
        })
}

fn split_landscape() -> impl Strategy<Value = (Landscape, DecisionAssignment, u64)> {
    (1usize..=3, 1usize..=3, any::<u64>(), any::<u64>()).prop_map(|(a, b, seed, sq)| {
        let n = a + b;
        (
            Landscape::generate(n, n - 1, WeightVector::equal(n), seed).unwrap(),
            DecisionAssignment::from_split(a, b).unwrap(),
            sq,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn fitness_in_unit_interval((l, g) in landscape_and_genotype()) {
        let f = l.fitness(&g).unwrap();
        prop_assert!((0.0..1.0).contains(&f));
    }

    #[test]
    fn equal_weight_fitness_is_mean(n in 1usize..=6, seed in any::<u64>(), bits in any::<u64>()) {
        let l = Landscape::generate(n, n - 1, WeightVector::equal(n), seed).unwrap();
        let g = Genotype::new(bits, n).unwrap();
        let mean = (0..n)
            .map(|i| l.tables()[i].get(l.local_configuration(i, &g).unwrap()))
            .sum::<f64>() / n as f64;
        prop_assert!((l.fitness(&g).unwrap() - mean).abs() < 1e-12);
    }

    #[test]
    fn generation_is_pure(n in 1usize..=6, seed in any::<u64>()) {
        let a = Landscape::generate(n, n - 1, WeightVector::equal(n), seed).unwrap();
        let b = Landscape::generate(n, n - 1, WeightVector::equal(n), seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn k0_flip_is_decomposable(n in 1usize..=6, seed in any::<u64>(), bits in any::<u64>(), i in 0usize..6) {
        let i = i % n;
        let l = Landscape::generate(n, 0, WeightVector::equal(n), seed).unwrap();
        let g = Genotype::new(bits, n).unwrap();
        let t = l.tables()[i].values();
        let w = l.weights().as_slice()[i];
        let on = g.with(i, true);
        let off = g.with(i, false);
        let delta = l.fitness(&on).unwrap() - l.fitness(&off).unwrap();
        prop_assert!((delta - w * (t[1] - t[0])).abs() < 1e-12);
    }

    #[test]
    fn climb_is_monotone_and_confined((l, g) in landscape_and_genotype(), mask_bits in 1u64..64) {
        let n = l.n();
        let idx: Vec<usize> = (0..n).filter(|i| mask_bits >> i & 1 == 1).collect();
        prop_assume!(!idx.is_empty());
        let mask = Mask::new(&idx, n).unwrap();
        let path = climb(&l, &g, &mask).unwrap();
        prop_assert_eq!(path[0], g);
        prop_assert!(path.len() <= 1 << mask.len());
        let mut seen = std::collections::HashSet::new();
        for w in path.windows(2) {
            prop_assert!(l.fitness(&w[1]).unwrap() > l.fitness(&w[0]).unwrap());
            prop_assert_eq!(w[0].hamming(&w[1]), 1);
        }
        for p in &path {
            prop_assert!(seen.insert(*p));
            for i in (0..n).filter(|i| !mask.contains(*i)) {
                prop_assert_eq!(p.get(i), g.get(i));
            }
        }
        let end = *path.last().unwrap();
        let f_end = l.fitness(&end).unwrap();
        for i in mask.indices() {
            prop_assert!(l.fitness(&end.flipped(i)).unwrap() <= f_end);
        }
    }

    #[test]
    fn passive_is_identity_and_active_dominates((l, asg, sq) in split_landscape()) {
        let sq = Genotype::new(sq, l.n()).unwrap();
        let p = run_episode_from(&l, &asg, DecisionMakerMode::Passive, sq).unwrap();
        let a = run_episode_from(&l, &asg, DecisionMakerMode::Active, sq).unwrap();
        prop_assert_eq!(p.decision, p.assembled);
        prop_assert_eq!(p.assembled, a.assembled);
        prop_assert!(a.final_fitness >= p.final_fitness);
        prop_assert!(a.final_fitness >= l.fitness(&a.assembled).unwrap());
        prop_assert_eq!(a.final_fitness, l.fitness(&a.decision).unwrap());
        prop_assert_eq!(decide(&l, &p.assembled, DecisionMakerMode::Passive).unwrap(), p.assembled);
    }

    #[test]
    fn episode_is_reproducible_from_rng((l, asg, seed) in split_landscape()) {
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let a = run_episode(&l, &asg, DecisionMakerMode::Active, &mut r1).unwrap();
        let b = run_episode(&l, &asg, DecisionMakerMode::Active, &mut r2).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn assembly_ignores_proposal_order(a in 1usize..=3, b in 1usize..=3, sq in any::<u64>(), pa in any::<u64>(), pb in any::<u64>()) {
        let asg = DecisionAssignment::from_split(a, b).unwrap();
        let sq = Genotype::new(sq, a + b).unwrap();
        let first = Proposal { subordinate: 0, bits: (0..a).map(|i| pa >> i & 1 == 1).collect() };
        let second = Proposal { subordinate: 1, bits: (0..b).map(|i| pb >> i & 1 == 1).collect() };
        let x = assemble(&sq, &[first.clone(), second.clone()], &asg).unwrap();
        let y = assemble(&sq, &[second, first], &asg).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn scenario_config_roundtrips(a in 1usize..=4, b in 1usize..=4, active in any::<bool>(), raw in prop::collection::vec(0.05f64..1.0, 8), k in 0usize..8) {
        let n = a + b;
        let w = WeightVector::proportional(&raw[..n]).unwrap();
        let cfg = ScenarioConfig {
            code: "P1".into(),
            mode: if active { DecisionMakerMode::Active } else { DecisionMakerMode::Passive },
            split: [a, b],
            weights: Some(w.as_slice().to_vec()),
            k: Some(k % n),
        };
        let spec = parse_scenario_config(&serde_json::to_string(&cfg).unwrap()).unwrap();
        let again = parse_scenario_config(&spec.to_json()).unwrap();
        prop_assert_eq!(spec, again);
    }
}
