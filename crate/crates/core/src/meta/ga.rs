//! Genetic algorithm: the textbook baseline and the hybrid memetic variant
//! (nearest-neighbour seeding, rank/tournament selection, adaptive
//! crossover choice, stochastic 2-opt, diversity preservation).

use super::alns::adaptive_weight_update;
use super::crossover::{ox_crossover, Crossover};
use super::{random_permutation, roulette};
use crate::instance::DistanceMatrix;
use crate::rng::seeded_rng;
use crate::solve::{check_size, Search, SolveBudget, SolveError, SolveResult};
use crate::tour::{cycle_cost, nearest_neighbor_tour, two_opt_in_place, TwoOptMode};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub population_size: usize,
    /// Per-gene swap probability.
    pub mutation_rate: f64,
    pub elite: usize,
}

impl GaParams {
    fn validate(&self) -> Result<(), SolveError> {
        if self.population_size < 2 {
            return Err(SolveError::InvalidParams("population size must be at least 2".into()));
        }
        if self.elite > self.population_size {
            return Err(SolveError::InvalidParams(format!(
                "elite count {} exceeds population size {}",
                self.elite, self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(SolveError::InvalidParams("mutation rate must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaVariant {
    Baseline,
    HybridR1,
}

/// Knobs of the hybrid variant that are not part of the tuned space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridSettings {
    pub tournament_size: usize,
    /// Share of the population that may hold one cost value before
    /// duplicates are replaced.
    pub diversity_threshold: f64,
    /// Reaction factor for crossover weights.
    pub operator_reaction: f64,
    /// Stochastic 2-opt samples per offspring; `None` means `n`.
    pub two_opt_tries: Option<usize>,
}

impl Default for HybridSettings {
    fn default() -> Self {
        HybridSettings {
            tournament_size: 2,
            diversity_threshold: 0.5,
            operator_reaction: 0.1,
            two_opt_tries: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    NearestNeighbor,
    Random,
}

#[derive(Debug, Clone)]
pub struct Individual {
    pub order: Vec<usize>,
    pub origin: Origin,
}

/// Number of nearest-neighbour individuals the hybrid seeds into a
/// population of `population_size`.
pub fn nn_seed_count(population_size: usize) -> usize {
    if population_size >= 5 {
        (population_size / 5).max(1)
    } else {
        0
    }
}

/// Builds the initial population. The hybrid variant seeds
/// [`nn_seed_count`] nearest-neighbour tours from distinct random start
/// cities (cycling through starts once all `n` are used).
pub fn initial_population<R: Rng + ?Sized>(
    d: &DistanceMatrix,
    population_size: usize,
    variant: GaVariant,
    rng: &mut R,
) -> Vec<Individual> {
    let n = d.n();
    let seeded = match variant {
        GaVariant::Baseline => 0,
        GaVariant::HybridR1 => nn_seed_count(population_size),
    };
    let mut population = Vec::with_capacity(population_size);
    if seeded > 0 {
        let starts = sample(rng, n, seeded.min(n)).into_vec();
        for k in 0..seeded {
            population.push(Individual {
                order: nearest_neighbor_tour(d, starts[k % starts.len()]).into_inner(),
                origin: Origin::NearestNeighbor,
            });
        }
    }
    while population.len() < population_size {
        population.push(Individual {
            order: random_permutation(n, rng),
            origin: Origin::Random,
        });
    }
    population
}

fn swap_mutation<R: Rng + ?Sized>(order: &mut [usize], rate: f64, rng: &mut R) {
    let n = order.len();
    if n < 2 || rate <= 0.0 {
        return;
    }
    for i in 0..n {
        if rng.gen::<f64>() < rate {
            let j = rng.gen_range(0..n);
            order.swap(i, j);
        }
    }
}

struct Member {
    order: Vec<usize>,
    cost: f64,
}

fn sort_by_cost(pop: &mut [Member]) {
    pop.sort_by(|a, b| a.cost.total_cmp(&b.cost));
}

/// Tournament on a population sorted by cost: the lowest index wins.
fn tournament<R: Rng + ?Sized>(len: usize, size: usize, rng: &mut R) -> usize {
    (0..size.max(1)).map(|_| rng.gen_range(0..len)).min().expect("size >= 1")
}

pub fn solve_ga(
    d: &DistanceMatrix,
    p: &GaParams,
    budget: &SolveBudget,
    seed: u64,
    variant: GaVariant,
) -> Result<SolveResult, SolveError> {
    solve_ga_with(d, p, &HybridSettings::default(), budget, seed, variant)
}

/// Generational GA under `budget`. Every offspring and every 2-opt move
/// sample counts as one evaluation. The initial population always
/// completes.
pub fn solve_ga_with(
    d: &DistanceMatrix,
    p: &GaParams,
    settings: &HybridSettings,
    budget: &SolveBudget,
    seed: u64,
    variant: GaVariant,
) -> Result<SolveResult, SolveError> {
    let n = check_size(d)?;
    p.validate()?;
    budget.validate()?;
    let mut rng = seeded_rng(seed);
    let mut search = Search::new(d, budget);

    let mut pop: Vec<Member> = initial_population(d, p.population_size, variant, &mut rng)
        .into_iter()
        .map(|ind| {
            let cost = cycle_cost(&ind.order, d);
            Member { order: ind.order, cost }
        })
        .collect();
    search.count(pop.len() as u64);
    sort_by_cost(&mut pop);
    search.offer(&pop[0].order);

    let tries = settings.two_opt_tries.unwrap_or(n);
    // At least one offspring per generation.
    let elite = p.elite.min(p.population_size - 1);
    let mut op_weights = [1.0; 3];
    let mut fitness = Vec::with_capacity(p.population_size);

    'generations: while !search.exhausted() {
        let mut next: Vec<Member> = pop
            .iter()
            .take(elite)
            .map(|m| Member {
                order: m.order.clone(),
                cost: m.cost,
            })
            .collect();

        if variant == GaVariant::Baseline {
            fitness.clear();
            fitness.extend(pop.iter().map(|m| 1.0 / (m.cost + 1e-12)));
        }

        while next.len() < p.population_size {
            if search.exhausted() {
                break 'generations;
            }
            let (child, parent_best, chosen) = match variant {
                GaVariant::Baseline => {
                    let a = &pop[roulette(&fitness, &mut rng)];
                    let b = &pop[roulette(&fitness, &mut rng)];
                    let child = ox_crossover(&a.order, &b.order, &mut rng);
                    (child, a.cost.min(b.cost), None)
                }
                GaVariant::HybridR1 => {
                    let a = &pop[tournament(pop.len(), settings.tournament_size, &mut rng)];
                    let b = &pop[tournament(pop.len(), settings.tournament_size, &mut rng)];
                    let op = roulette(&op_weights, &mut rng);
                    let child = Crossover::ALL[op].apply(&a.order, &b.order, d, &mut rng);
                    (child, a.cost.min(b.cost), Some(op))
                }
            };
            let mut child = child;
            swap_mutation(&mut child, p.mutation_rate, &mut rng);
            if variant == GaVariant::HybridR1 {
                let used = two_opt_in_place(&mut child, d, TwoOptMode::Stochastic { tries }, &mut rng);
                search.count(used);
            }
            search.count(1);
            let cost = cycle_cost(&child, d);
            let new_best = search.offer_if_promising(&child, cost);
            if let Some(op) = chosen {
                let score = if new_best {
                    3.0
                } else if cost < parent_best {
                    1.0
                } else {
                    0.0
                };
                adaptive_weight_update(&mut op_weights, op, score, settings.operator_reaction);
            }
            next.push(Member { order: child, cost });
        }

        if variant == GaVariant::HybridR1 {
            preserve_diversity(&mut next, settings.diversity_threshold, d, &mut search, &mut rng);
        }
        sort_by_cost(&mut next);
        pop = next;
    }
    Ok(search.finish(seed, false))
}

/// When more than `threshold` of the population shares one cost value,
/// every copy but the first is replaced by a fresh random permutation.
fn preserve_diversity<R: Rng + ?Sized>(
    pop: &mut [Member],
    threshold: f64,
    d: &DistanceMatrix,
    search: &mut Search<'_>,
    rng: &mut R,
) {
    if pop.len() < 2 {
        return;
    }
    sort_by_cost(pop);
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs());
    let (mut run_start, mut best_start, mut best_len) = (0, 0, 1);
    for i in 1..=pop.len() {
        if i == pop.len() || !same(pop[i].cost, pop[run_start].cost) {
            if i - run_start > best_len {
                best_len = i - run_start;
                best_start = run_start;
            }
            run_start = i;
        }
    }
    if (best_len as f64) <= threshold * pop.len() as f64 {
        return;
    }
    let n = d.n();
    for member in &mut pop[best_start + 1..best_start + best_len] {
        member.order = random_permutation(n, rng);
        member.cost = cycle_cost(&member.order, d);
        search.count(1);
    }
}
