use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bounds::Bounds;
use super::crowding::crowding_distance;
use super::dominance::nondominated_sort;
use super::operators::OperatorConfig;
use crate::error::{Error, Result};

/// A box-bounded multi-objective minimisation problem.
///
/// `evaluate` must be deterministic and must not draw random numbers; it may be
/// called from several threads at once.
pub trait Problem: Sync {
    fn num_variables(&self) -> usize;
    fn num_objectives(&self) -> usize;
    fn evaluate(&self, genes: &[f64]) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genes: Vec<f64>,
    pub objectives: Vec<f64>,
    /// 1-based front index within the owning population (0 = not yet sorted).
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(genes: Vec<f64>, objectives: Vec<f64>) -> Self {
        Individual {
            genes,
            objectives,
            rank: 0,
            crowding: 0.0,
        }
    }
}

/// Outcome of a crowded comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    First,
    Second,
}

/// Deterministic crowded order: lower rank first, then larger crowding distance.
pub fn crowded_order(a: &Individual, b: &Individual) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.total_cmp(&a.crowding))
}

/// Crowded-comparison operator with a fair coin on exact ties.
pub fn crowded_compare<R: Rng + ?Sized>(a: &Individual, b: &Individual, rng: &mut R) -> Winner {
    match crowded_order(a, b) {
        Ordering::Less => Winner::First,
        Ordering::Greater => Winner::Second,
        Ordering::Equal => {
            if rng.random::<bool>() {
                Winner::First
            } else {
                Winner::Second
            }
        }
    }
}

/// Draws `count` parents by independent binary tournaments with replacement.
pub fn tournament_select<R: Rng + ?Sized>(
    population: &[Individual],
    count: usize,
    rng: &mut R,
) -> Vec<usize> {
    let n = population.len();
    (0..count)
        .map(|_| {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            match crowded_compare(&population[i], &population[j], rng) {
                Winner::First => i,
                Winner::Second => j,
            }
        })
        .collect()
}

/// Sorts `population` into fronts, writes rank and crowding into each member and
/// returns the fronts.
pub fn assign_rank_and_crowding(population: &mut [Individual]) -> Vec<Vec<usize>> {
    let objectives: Vec<Vec<f64>> = population.iter().map(|i| i.objectives.clone()).collect();
    let fronts = nondominated_sort(&objectives);
    for (r, front) in fronts.iter().enumerate() {
        let dist = crowding_distance(front, &objectives);
        for (&i, d) in front.iter().zip(dist) {
            population[i].rank = r + 1;
            population[i].crowding = d;
        }
    }
    fronts
}

/// Keeps the `n` best of `pool` by whole fronts, breaking the last front by crowding.
fn select_survivors(mut pool: Vec<Individual>, n: usize) -> Vec<Individual> {
    let fronts = assign_rank_and_crowding(&mut pool);
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for front in fronts {
        if chosen.len() + front.len() <= n {
            chosen.extend(front);
        } else {
            let mut last = front;
            last.sort_by(|&a, &b| pool[b].crowding.total_cmp(&pool[a].crowding));
            chosen.extend(last.into_iter().take(n - chosen.len()));
        }
        if chosen.len() == n {
            break;
        }
    }
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    let mut survivors: Vec<Individual> = chosen
        .into_iter()
        .map(|i| slots[i].take().expect("each index chosen once"))
        .collect();
    assign_rank_and_crowding(&mut survivors);
    survivors
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    /// Population size `N` (even, ≥ 2).
    pub population_size: usize,
    pub generations: usize,
    pub bounds: Bounds,
    pub operators: OperatorConfig,
    pub seed: u64,
    /// Evaluate each generation's offspring on the rayon pool.
    pub parallel: bool,
    /// Objective value assigned to every objective when evaluation fails.
    pub sentinel: f64,
}

impl EvolveConfig {
    pub fn new(population_size: usize, generations: usize, bounds: Bounds, seed: u64) -> Self {
        EvolveConfig {
            population_size,
            generations,
            bounds,
            operators: OperatorConfig::default(),
            seed,
            parallel: true,
            sentinel: 1e9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "population size must be even and at least 2, got {}",
                self.population_size
            )));
        }
        if self.generations < 1 {
            return Err(Error::invalid("at least one generation is required"));
        }
        self.operators.validate()
    }
}

/// Survivors after one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    /// 1-based generation number.
    pub generation: usize,
    pub population: Vec<Individual>,
}

impl GenerationRecord {
    /// Smallest value of each objective in the population.
    pub fn best_per_objective(&self) -> Vec<f64> {
        best_per_objective(&self.population)
    }

    pub fn front_size(&self) -> usize {
        self.population.iter().filter(|i| i.rank == 1).count()
    }
}

pub(crate) fn best_per_objective(population: &[Individual]) -> Vec<f64> {
    let m = population.first().map_or(0, |i| i.objectives.len());
    (0..m)
        .map(|k| {
            population
                .iter()
                .map(|i| i.objectives[k])
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveResult {
    /// Random initial population, sorted and distanced.
    pub initial: Vec<Individual>,
    /// Survivors of generations 1..=G.
    pub archive: Vec<GenerationRecord>,
    pub evaluations: usize,
}

impl EvolveResult {
    pub fn final_population(&self) -> &[Individual] {
        &self.archive.last().expect("at least one generation").population
    }

    /// Rank-1 members of the final population.
    pub fn final_front(&self) -> Vec<&Individual> {
        self.final_population().iter().filter(|i| i.rank == 1).collect()
    }
}

fn evaluate_all<P: Problem>(
    problem: &P,
    genes: Vec<Vec<f64>>,
    config: &EvolveConfig,
) -> Vec<Individual> {
    let m = problem.num_objectives();
    let eval = |g: Vec<f64>| {
        let objectives = match problem.evaluate(&g) {
            Ok(o) if o.len() == m && o.iter().all(|v| v.is_finite()) => o,
            _ => vec![config.sentinel; m],
        };
        Individual::new(g, objectives)
    };
    if config.parallel {
        genes.into_par_iter().map(eval).collect()
    } else {
        genes.into_iter().map(eval).collect()
    }
}

/// Runs NSGA-II for a fixed number of generations.
///
/// Each generation draws `N` parents by binary tournament, pairs them in draw
/// order, applies crossover then mutation to each pair, evaluates the `N`
/// children, and keeps the best `N` of parents and children combined. One
/// seeded stream drives every random decision, so results do not depend on
/// whether evaluation runs in parallel.
pub fn evolve<P: Problem>(problem: &P, config: &EvolveConfig) -> Result<EvolveResult> {
    config.validate()?;
    if config.bounds.len() != problem.num_variables() {
        return Err(Error::invalid(format!(
            "bounds cover {} genes but the problem has {}",
            config.bounds.len(),
            problem.num_variables()
        )));
    }
    let n = config.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let initial_genes: Vec<Vec<f64>> = (0..n).map(|_| config.bounds.sample(&mut rng)).collect();
    let mut population = evaluate_all(problem, initial_genes, config);
    assign_rank_and_crowding(&mut population);
    let initial = population.clone();
    let mut evaluations = n;

    let mut archive = Vec::with_capacity(config.generations);
    for generation in 1..=config.generations {
        let parents = tournament_select(&population, n, &mut rng);
        let mut children = Vec::with_capacity(n);
        for pair in parents.chunks_exact(2) {
            let (c1, c2) = config.operators.vary(
                &population[pair[0]].genes,
                &population[pair[1]].genes,
                &config.bounds,
                &mut rng,
            );
            children.push(c1);
            children.push(c2);
        }
        let offspring = evaluate_all(problem, children, config);
        evaluations += offspring.len();

        let mut pool = population;
        pool.extend(offspring);
        population = select_survivors(pool, n);
        archive.push(GenerationRecord {
            generation,
            population: population.clone(),
        });
    }

    Ok(EvolveResult {
        initial,
        archive,
        evaluations,
    })
}
