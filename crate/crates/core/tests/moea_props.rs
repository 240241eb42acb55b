use std::sync::Mutex;

use proptest::prelude::*;
use pumatune_core::moea::{
    crowding_distance, dominates, evolve, nondominated_sort, Bounds, EvolveConfig, Individual, OperatorFamily, Problem,
};
use pumatune_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force peeling: repeatedly remove every point that no remaining point dominates.
fn peel(objectives: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let dom = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y);
    let mut remaining: Vec<usize> = (0..objectives.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| dom(&objectives[j], &objectives[i])))
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

fn random_population(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rng.random_range(1..=50);
    let m = rng.random_range(1..=3);
    // coarse integer grid so ties and duplicates actually occur
    (0..n).map(|_| (0..m).map(|_| rng.random_range(0..8) as f64).collect()).collect()
}

#[test]
fn sort_matches_peeling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..200 {
        let pop = random_population(&mut rng);
        assert_eq!(nondominated_sort(&pop), peel(&pop));
    }
}

#[test]
fn dominance_examples() {
    assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap());
    assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
    assert!(!dominates(&[1.0, 3.0], &[3.0, 1.0]).unwrap());
    assert!(!dominates(&[3.0, 1.0], &[1.0, 3.0]).unwrap());
    assert!(dominates(&[1.0], &[1.0, 2.0]).is_err());
}

#[test]
fn crowding_hand_oracles() {
    let inf = f64::INFINITY;
    assert_eq!(crowding_distance(&[0], &[vec![3.0, 1.0]]), vec![inf]);
    assert_eq!(crowding_distance(&[0, 1], &[vec![3.0, 1.0], vec![1.0, 3.0]]), vec![inf, inf]);
    let single = vec![vec![1.0], vec![2.0], vec![4.0]];
    assert_eq!(crowding_distance(&[0, 1, 2], &single), vec![inf, 1.0, inf]);
    let two = vec![vec![1.0, 4.0], vec![2.0, 2.0], vec![4.0, 1.0]];
    assert_eq!(crowding_distance(&[0, 1, 2], &two), vec![inf, 2.0, inf]);
    // second objective flat: it adds nothing to the interior member
    let flat = vec![vec![1.0, 5.0], vec![2.0, 5.0], vec![4.0, 5.0]];
    assert_eq!(crowding_distance(&[0, 1, 2], &flat)[1], 1.0);
}

/// f1 = x1, f2 = 1 + Σ_{i≥2} x_i² − x1 on [0,1]^n. Pareto set: x_{2..n} = 0.
struct Convex {
    n: usize,
}

impl Problem for Convex {
    fn num_variables(&self) -> usize {
        self.n
    }
    fn num_objectives(&self) -> usize {
        2
    }
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![x[0], 1.0 + x[1..].iter().map(|v| v * v).sum::<f64>() - x[0]])
    }
}

/// Records every vector it is asked to evaluate.
struct Recording<P> {
    inner: P,
    seen: Mutex<Vec<Vec<f64>>>,
}

impl<P: Problem> Problem for Recording<P> {
    fn num_variables(&self) -> usize {
        self.inner.num_variables()
    }
    fn num_objectives(&self) -> usize {
        self.inner.num_objectives()
    }
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.seen.lock().unwrap().push(x.to_vec());
        self.inner.evaluate(x)
    }
}

/// Fails on half of the search space.
struct Flaky;

impl Problem for Flaky {
    fn num_variables(&self) -> usize {
        2
    }
    fn num_objectives(&self) -> usize {
        2
    }
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x[0] > 0.5 {
            return Err(pumatune_core::Error::SingularConfiguration);
        }
        Ok(vec![x[0], x[1]])
    }
}

fn config(family: OperatorFamily, n: usize, gens: usize, seed: u64) -> EvolveConfig {
    let mut c = EvolveConfig::new(n, gens, Bounds::uniform(5, 0.0, 1.0).unwrap(), seed);
    c.operators.family = family;
    c
}

fn rank_counts(pop: &[Individual]) -> usize {
    pop.iter().filter(|i| i.rank == 1).count()
}

#[test]
fn convex_problem_fills_the_first_front() {
    for family in [OperatorFamily::RealValued, OperatorFamily::SbxPolynomial] {
        let r = evolve(&Convex { n: 5 }, &config(family, 40, 50, 3)).unwrap();
        let last = r.final_population();
        assert_eq!(rank_counts(last), 40, "{}", family.name());
        // close to the Pareto set
        let worst = last.iter().map(|i| i.genes[1..].iter().map(|v| v * v).sum::<f64>()).fold(0.0, f64::max);
        assert!(worst < 0.05, "{}: {worst}", family.name());
    }
}

#[test]
fn elitism_never_loses_the_best_values() {
    for seed in 0..5 {
        let r = evolve(&Convex { n: 5 }, &config(OperatorFamily::RealValued, 20, 20, seed)).unwrap();
        let mut prev: Vec<f64> = (0..2)
            .map(|k| r.initial.iter().map(|i| i.objectives[k]).fold(f64::INFINITY, f64::min))
            .collect();
        for g in &r.archive {
            let best = g.best_per_objective();
            for k in 0..2 {
                assert!(best[k] <= prev[k]);
            }
            prev = best;
        }
    }
}

#[test]
fn first_front_of_survivors_never_regresses() {
    // every old rank-1 member is kept or dominated by a survivor, unless the
    // merged first front overflowed and was truncated by crowding
    let r = evolve(&Convex { n: 5 }, &config(OperatorFamily::SbxPolynomial, 20, 20, 7)).unwrap();
    let mut prev = r.initial.clone();
    for g in &r.archive {
        for old in prev.iter().filter(|i| i.rank == 1) {
            let covered = g
                .population
                .iter()
                .any(|s| s.objectives == old.objectives || dominates(&s.objectives, &old.objectives).unwrap());
            let truncated = g.population.iter().all(|s| s.rank == 1);
            assert!(covered || truncated);
        }
        prev = g.population.clone();
    }
}

#[test]
fn every_evaluated_vector_is_feasible() {
    for family in [OperatorFamily::RealValued, OperatorFamily::SbxPolynomial] {
        let p = Recording {
            inner: Convex { n: 5 },
            seen: Mutex::new(Vec::new()),
        };
        let cfg = config(family, 16, 15, 11);
        let r = evolve(&p, &cfg).unwrap();
        let seen = p.seen.into_inner().unwrap();
        assert_eq!(seen.len(), 16 * 16);
        assert_eq!(r.evaluations, seen.len());
        assert!(seen.iter().all(|x| cfg.bounds.contains(x)));
        assert!(r.archive.iter().all(|g| g.population.len() == 16));
        assert_eq!(r.archive.len(), 15);
    }
}

#[test]
fn one_generation_selects_from_parents_and_children() {
    let p = Recording {
        inner: Convex { n: 3 },
        seen: Mutex::new(Vec::new()),
    };
    let mut cfg = config(OperatorFamily::RealValued, 10, 1, 5);
    cfg.bounds = Bounds::uniform(3, 0.0, 1.0).unwrap();
    cfg.parallel = false;
    let r = evolve(&p, &cfg).unwrap();
    let seen = p.seen.into_inner().unwrap();
    let fin = r.final_population();
    assert_eq!(fin.len(), 10);
    assert!(fin.iter().all(|i| seen.contains(&i.genes)));
}

#[test]
fn parallel_and_serial_runs_are_identical() {
    for family in [OperatorFamily::RealValued, OperatorFamily::SbxPolynomial] {
        let mut a = config(family, 24, 10, 9);
        a.parallel = true;
        let mut b = a.clone();
        b.parallel = false;
        let p = Convex { n: 5 };
        let ra = evolve(&p, &a).unwrap();
        assert_eq!(ra, evolve(&p, &b).unwrap());
        assert_eq!(ra, evolve(&p, &a).unwrap());
        let mut c = a.clone();
        c.seed = 10;
        assert_ne!(ra, evolve(&p, &c).unwrap());
    }
}

#[test]
fn failing_evaluations_receive_the_sentinel() {
    let mut cfg = config(OperatorFamily::RealValued, 20, 5, 2);
    cfg.bounds = Bounds::uniform(2, 0.0, 1.0).unwrap();
    let r = evolve(&Flaky, &cfg).unwrap();
    for i in &r.initial {
        if i.genes[0] > 0.5 {
            assert_eq!(i.objectives, vec![1e9, 1e9]);
        }
    }
    assert!(r.final_population().iter().all(|i| i.genes[0] <= 0.5 || i.rank > 1));
}

#[test]
fn invalid_configurations_are_rejected() {
    let p = Convex { n: 5 };
    assert!(evolve(&p, &config(OperatorFamily::RealValued, 3, 1, 0)).is_err());
    assert!(evolve(&p, &config(OperatorFamily::RealValued, 0, 1, 0)).is_err());
    assert!(evolve(&p, &config(OperatorFamily::RealValued, 4, 0, 0)).is_err());
    let mut wrong = config(OperatorFamily::RealValued, 4, 1, 0);
    wrong.bounds = Bounds::uniform(2, 0.0, 1.0).unwrap();
    assert!(evolve(&p, &wrong).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fronts_partition_the_population(pop in proptest::collection::vec(proptest::collection::vec(0.0f64..5.0, 2), 1..40)) {
        let fronts = nondominated_sort(&pop);
        let mut all: Vec<usize> = fronts.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..pop.len()).collect::<Vec<_>>());
        // nothing in a front is dominated by anything in the same or a later front
        for (k, f) in fronts.iter().enumerate() {
            for &i in f {
                for later in &fronts[k..] {
                    for &j in later {
                        prop_assert!(!dominates(&pop[j], &pop[i]).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn crowding_is_nonnegative_with_infinite_extremes(pop in proptest::collection::vec(proptest::collection::vec(0.0f64..5.0, 3), 3..30)) {
        let idx: Vec<usize> = (0..pop.len()).collect();
        let d = crowding_distance(&idx, &pop);
        prop_assert!(d.iter().all(|v| *v >= 0.0));
        prop_assert!(d.iter().filter(|v| v.is_infinite()).count() >= 2);
    }
}

#[test]
fn convex_front_fraction_grows_to_the_whole_population() {
    // The fraction is not monotone in general: a child that dominates several
    // old front members shrinks the next first front (seed 1, real-valued: 8 -> 7).
    for family in [OperatorFamily::RealValued, OperatorFamily::SbxPolynomial] {
        let r = evolve(&Convex { n: 5 }, &config(family, 40, 50, 1)).unwrap();
        let sizes: Vec<usize> = std::iter::once(rank_counts(&r.initial))
            .chain(r.archive.iter().map(|g| g.front_size()))
            .collect();
        let full = sizes.iter().position(|&s| s == 40).expect("front fills the population");
        assert!(full <= 30, "{}: {sizes:?}", family.name());
        assert_eq!(*sizes.last().unwrap(), 40);
    }
}
