mod common;

use common::*;
use kcausal::causal::{
    inner_continuity, k_convexity, lemma32_check, lemma43_check, outer_continuity, strong_k_causality,
    Lemma43Options,
};
use kcausal::{k_plus, CausalStructure, Direction, Error, FiniteTopology, PointSet, SamplingScheme, SpacetimeModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SIGNS: [(Direction, bool); 2] = [(Direction::Future, true), (Direction::Past, false)];

/// Compares every optimized checker with its brute-force counterpart.
/// Returns the verdicts (inner future, outer future, strong).
fn agree(n: usize, opens: &[u64], t: &FiniteTopology, k: &[u64], scope: u64) -> (bool, bool, bool) {
    let kr = rel(n, k);
    let sc = PointSet::from_mask(n, scope);
    let mut verdicts = (false, false, false);
    for (sign, future) in SIGNS {
        let inner = inner_continuity(t, &kr, sign, Some(&sc)).unwrap().holds;
        let outer = outer_continuity(t, &kr, sign, Some(&sc)).unwrap().holds;
        assert_eq!(inner, inner_continuous(opens, n, k, future, scope), "inner {sign:?}, k {k:?}, opens {opens:?}");
        assert_eq!(outer, outer_continuous(opens, n, k, future, scope), "outer {sign:?}, k {k:?}, opens {opens:?}");
        if future {
            verdicts.0 = inner;
            verdicts.1 = outer;
        }
    }
    let strong = strong_k_causality(t, &kr, Some(&sc)).unwrap().holds;
    assert_eq!(strong, strongly_k_causal(opens, n, k, scope), "strong, k {k:?}, opens {opens:?}");
    verdicts.2 = strong;
    verdicts
}

#[test]
fn checkers_match_definitions_on_every_three_point_instance() {
    let n = 3;
    let mut seen = [[false; 2]; 3];
    for opens in all_topologies(n) {
        let t = topology(n, &opens);
        for code in 0u64..512 {
            let k: Vec<u64> = (0..n).map(|a| (code >> (3 * a)) & 7).collect();
            let (inner, outer, strong) = agree(n, &opens, &t, &k, 0b111);
            seen[0][inner as usize] = true;
            seen[1][outer as usize] = true;
            seen[2][strong as usize] = true;
        }
    }
    // Both verdicts occur for every checker.
    assert_eq!(seen, [[true; 2]; 3]);
}

fn instance() -> impl Strategy<Value = (usize, Vec<u64>, Vec<u64>, u64)> {
    (2usize..=6, any::<u64>(), 1usize..6, any::<bool>(), any::<u64>()).prop_map(|(n, seed, count, closed, scope)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_cover(&mut rng, n, count);
        let i = random_rel(&mut rng, n, 0.25);
        let k = if closed {
            let t = FiniteTopology::from_generators(n, gens.iter().map(|&g| PointSet::from_mask(n, g)).collect()).unwrap();
            rows(&k_plus(&rel(n, &i), &t).unwrap().rel)
        } else {
            i
        };
        (n, gens, k, scope & full_mask(n))
    })
}

proptest! {
    #[test]
    fn checkers_match_definitions_on_random_instances((n, gens, k, scope) in instance()) {
        let opens = opens_from_generators(n, &gens);
        let t = FiniteTopology::from_generators(n, gens.iter().map(|&g| PointSet::from_mask(n, g)).collect()).unwrap();
        agree(n, &opens, &t, &k, scope);
    }

    #[test]
    fn k_convexity_matches_definition(k in proptest::collection::vec(0u64..64, 6), u in 0u64..64) {
        prop_assert_eq!(k_convexity(&rel(6, &k), &PointSet::from_mask(6, u)), k_convex(&k, u));
    }
}

#[test]
fn checkers_match_definitions_on_small_spacetime_samples() {
    let samples = [
        (SpacetimeModel::minkowski(), SamplingScheme::grid(3, 3)),
        (SpacetimeModel::minkowski(), SamplingScheme::random(9, 1)),
        (SpacetimeModel::minkowski_minus_centre(), SamplingScheme::grid(3, 3)),
        (SpacetimeModel::minkowski_minus_bar(), SamplingScheme::random(9, 4)),
        (SpacetimeModel::cylinder(1.0).unwrap(), SamplingScheme::random(8, 2)),
    ];
    for (model, scheme) in samples {
        let cs = CausalStructure::build(model.sample(&scheme).unwrap(), None).unwrap();
        let n = cs.n();
        let gens: Vec<u64> = cs.topology.generators().iter().map(mask).collect();
        let opens = opens_from_generators(n, &gens);
        agree(n, &opens, &cs.topology, &rows(&cs.k), full_mask(n));
    }
}

fn minkowski_family() -> Vec<SpacetimeModel> {
    vec![
        SpacetimeModel::minkowski(),
        SpacetimeModel::minkowski_minus_centre(),
        SpacetimeModel::minkowski_minus_bar(),
    ]
}

#[test]
fn lemma32_agrees_with_inner_continuity_across_the_minkowski_family() {
    // Interior characterizations agree exactly
    // when both cone-interior maps are inner continuous.
    for model in minkowski_family() {
        for g in [6, 9, 12, 16] {
            let cs = CausalStructure::build(model.sample(&SamplingScheme::grid(g, g)).unwrap(), None).unwrap();
            for scope in [None, Some(cs.scope(None))] {
                let lemma = lemma32_check(&cs.topology, &cs.k, scope.as_ref()).unwrap().holds;
                let inner = SIGNS.iter().all(|&(sign, _)| {
                    inner_continuity(&cs.topology, &cs.k, sign, scope.as_ref()).unwrap().holds
                });
                assert_eq!(lemma, inner, "{:?} {g}x{g}", model.kind);
            }
        }
    }
}

#[test]
fn lemma32_refuses_non_k_causal_input() {
    let cs = CausalStructure::build(SpacetimeModel::cylinder(1.0).unwrap().sample(&SamplingScheme::grid(4, 4)).unwrap(), None).unwrap();
    assert!(matches!(
        lemma32_check(&cs.topology, &cs.k, None),
        Err(Error::NotKCausal(_, _))
    ));
}

#[test]
fn lemma43_sampled_mode_agrees_with_full_enumeration() {
    for model in minkowski_family() {
        let cs = CausalStructure::build(model.sample(&SamplingScheme::grid(10, 10)).unwrap(), None).unwrap();
        let full = lemma43_check(&cs.k, &cs.topology, Lemma43Options::default()).unwrap();
        let sampled = lemma43_check(
            &cs.k,
            &cs.topology,
            Lemma43Options {
                full_threshold: 0,
                samples: 200_000,
                seed: 7,
            },
        )
        .unwrap();
        assert!(full.holds && sampled.holds);
        assert_eq!(full.details["mode"], "full");
        assert_eq!(sampled.details["mode"], "sampled");
    }
}

#[test]
fn lemma43_detects_a_planted_violation() {
    // Discrete topology, so int K(p) = K(p). With 0 ⊑ 1 but 2 ∈ K(1) \ K(0)
    // the first implication fails; k is deliberately not transitive.
    let t = FiniteTopology::discrete(3).unwrap();
    let k = rel(3, &[0b010, 0b100, 0]);
    let report = lemma43_check(&k, &t, Lemma43Options::default()).unwrap();
    assert!(!report.holds);
    assert_eq!(report.witness, Some(kcausal::Witness::Triple { a: 0, b: 1, c: 2 }));
}
