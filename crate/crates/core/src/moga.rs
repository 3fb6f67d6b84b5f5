//! Multi-objective genetic search over predictor subsets.
//!
//! Each generation:
//!
//! 1. find the non-dominated members `P*` of the parent population `P`;
//! 2. repeatedly pair a uniform member of `P*` with a uniform member of `P`
//!    and apply single-point crossover until `lambda` offspring exist;
//! 3. apply bit-flip mutation to every offspring;
//! 4. evaluate the offspring (memoized, in parallel);
//! 5. merge parents and offspring and trim back to `N` by repeatedly deleting
//!    the dominated member with the most variables, or the member with the
//!    most variables once nothing is dominated.
//!
//! After the last generation the non-dominated set of `P` is reported.
//! All random draws for a generation happen on one sequential ChaCha8 stream
//! before any evaluation is dispatched, so results do not depend on the
//! number of worker threads.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, EvaluatedModel, ModelMask, ObjectiveVector};
use crate::error::{Error, Result};
use crate::objectives::{Evaluator, ObjectiveSpec};
use crate::pareto::{dominates, nondominated, nondominated_indices, Frontier};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ObjectiveKind {
    InSample,
    CrossValidation { folds: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub iterations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub offspring: usize,
    pub seed: u64,
    pub objective: ObjectiveKind,
    /// Inclusive `(lo, hi)` limits on the number of selected predictors.
    pub complexity_bounds: Option<(usize, usize)>,
    /// Record the population objectives every this many generations.
    pub snapshot_every: Option<usize>,
    /// Report the non-dominated set of every model ever evaluated instead of
    /// the final population's.
    #[serde(default)]
    pub archive: bool,
}

impl GaConfig {
    /// Standard settings for `k` candidate predictors: `N = lambda = k`,
    /// `pc = 0.9`, `pm = 1/k`, 500 generations.
    pub fn for_predictors(k: usize) -> Self {
        let n = k.max(2);
        Self {
            population_size: n,
            iterations: 500,
            crossover_prob: 0.9,
            mutation_prob: 1.0 / k.max(1) as f64,
            offspring: n,
            seed: 0,
            objective: ObjectiveKind::InSample,
            complexity_bounds: None,
            snapshot_every: None,
            archive: false,
        }
    }

    pub fn validate(&self, k: usize, n_rows: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.population_size < 2 {
            return bad(format!("population size {} < 2", self.population_size));
        }
        if self.offspring < 2 {
            return bad(format!("offspring count {} < 2", self.offspring));
        }
        if self.iterations < 1 {
            return bad("at least one iteration is required".into());
        }
        for (name, p) in [("crossover", self.crossover_prob), ("mutation", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} probability {p} outside [0, 1]"));
            }
        }
        if let Some((lo, hi)) = self.complexity_bounds {
            if lo > hi || hi > k {
                return bad(format!("complexity bounds {lo}:{hi} invalid for K={k}"));
            }
        }
        if let ObjectiveKind::CrossValidation { folds } = self.objective {
            if folds < 2 || folds > n_rows {
                return bad(format!("fold count {folds} must be in 2..={n_rows}"));
            }
        }
        if self.snapshot_every == Some(0) {
            return bad("snapshot interval must be positive".into());
        }
        Ok(())
    }
}

/// Population objectives at one generation; generation 0 is the initial
/// population.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub generation: usize,
    pub objectives: Vec<ObjectiveVector>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub generations: usize,
    /// Objective queries, `N + lambda * generations`.
    pub models_evaluated: usize,
    /// Distinct masks actually fitted.
    pub unique_models: usize,
}

#[derive(Clone, Debug)]
pub struct MogaRun {
    pub frontier: Frontier,
    pub population: Vec<EvaluatedModel>,
    pub snapshots: Vec<Snapshot>,
    pub stats: RunStats,
}

/// `n` masks of `k` independent fair bits.
pub fn init_population<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Vec<ModelMask> {
    (0..n).map(|_| ModelMask::new((0..k).map(|_| rng.random_bool(0.5)).collect())).collect()
}

/// Exchanges the suffixes starting at `cut`.
pub fn crossover_at(p1: &ModelMask, p2: &ModelMask, cut: usize) -> (ModelMask, ModelMask) {
    let (a, b) = (p1.bits(), p2.bits());
    let c1 = a[..cut].iter().chain(&b[cut..]).copied().collect();
    let c2 = b[..cut].iter().chain(&a[cut..]).copied().collect();
    (ModelMask::new(c1), ModelMask::new(c2))
}

/// Single-point crossover applied with probability `pc`; the cut point is
/// uniform in `1..K`. Masks shorter than two bits are copied.
pub fn crossover<R: Rng + ?Sized>(p1: &ModelMask, p2: &ModelMask, rng: &mut R, pc: f64) -> (ModelMask, ModelMask) {
    assert_eq!(p1.len(), p2.len(), "parents must have equal length");
    let k = p1.len();
    if rng.random_bool(pc) && k >= 2 {
        let cut = rng.random_range(1..k);
        crossover_at(p1, p2, cut)
    } else {
        (p1.clone(), p2.clone())
    }
}

/// Flips each bit independently with probability `pm`.
pub fn mutate<R: Rng + ?Sized>(mask: &ModelMask, pm: f64, rng: &mut R) -> ModelMask {
    let mut out = mask.clone();
    for j in 0..out.len() {
        if rng.random_bool(pm) {
            out.flip(j);
        }
    }
    out
}

/// Randomly clears set bits (or sets clear bits) until the popcount lies in
/// `lo..=hi`.
pub fn repair_bounds<R: Rng + ?Sized>(mask: &mut ModelMask, lo: usize, hi: usize, rng: &mut R) {
    let count = mask.count_ones();
    if count > hi {
        let on = mask.indices();
        for &j in on.choose_multiple(rng, count - hi) {
            mask.set(j, false);
        }
    } else if count < lo {
        let off: Vec<usize> = (0..mask.len()).filter(|&j| !mask.get(j)).collect();
        for &j in off.choose_multiple(rng, lo - count) {
            mask.set(j, true);
        }
    }
}

fn removal_order(a: &EvaluatedModel, b: &EvaluatedModel) -> std::cmp::Ordering {
    a.objective
        .complexity
        .cmp(&b.objective.complexity)
        .then(a.objective.error.total_cmp(&b.objective.error))
        .then_with(|| a.mask.cmp(&b.mask))
}

/// Trims `merged` to `n` members.
///
/// While any member is dominated, the dominated member with the largest
/// complexity is deleted (ties: larger error, then larger mask). Next,
/// surplus copies of an objective vector are deleted under the same order,
/// so each vector keeps its smallest mask. Once every remaining member is
/// non-dominated and distinct, the member with the largest complexity is
/// deleted. Status is re-evaluated after every deletion. Survivors keep
/// their input order.
///
/// Copies never dominate each other; treating them as ordinary
/// non-dominated members lets duplicates of simple models crowd out the
/// upper end of the frontier until only the intercept-only model remains.
pub fn environmental_selection(merged: Vec<EvaluatedModel>, n: usize) -> Result<Vec<EvaluatedModel>> {
    let m = merged.len();
    if m < n {
        return Err(Error::InvalidParameter(format!("cannot select {n} members from {m}")));
    }
    let mut dominator_count = vec![0usize; m];
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..m {
            if dominates(&merged[i].objective, &merged[j].objective) {
                dominator_count[j] += 1;
                dominated[i].push(j);
            }
        }
    }
    let group: Vec<usize> =
        (0..m).map(|i| (0..=i).find(|&j| merged[j].objective == merged[i].objective).expect("i matches itself")).collect();
    let mut group_alive = vec![0usize; m];
    group.iter().for_each(|&g| group_alive[g] += 1);

    let mut alive = vec![true; m];
    for _ in n..m {
        let pick = |eligible: &dyn Fn(usize) -> bool| {
            (0..m)
                .filter(|&i| alive[i] && eligible(i))
                .max_by(|&a, &b| removal_order(&merged[a], &merged[b]))
        };
        let victim = pick(&|i| dominator_count[i] > 0)
            .or_else(|| pick(&|i| group_alive[group[i]] > 1))
            .or_else(|| pick(&|_| true))
            .expect("at least one candidate remains");
        alive[victim] = false;
        group_alive[group[victim]] -= 1;
        for &j in &dominated[victim] {
            dominator_count[j] -= 1;
        }
    }
    Ok(merged.into_iter().zip(alive).filter_map(|(model, keep)| keep.then_some(model)).collect())
}

/// Runs the search and reports the final non-dominated set.
pub fn run_moga(data: &Dataset, config: &GaConfig) -> Result<MogaRun> {
    run_moga_with(data, config, |_, _| {})
}

/// As [`run_moga`], calling `observer(generation, population)` after the
/// initial evaluation (generation 0) and after every generation.
pub fn run_moga_with<F>(data: &Dataset, config: &GaConfig, mut observer: F) -> Result<MogaRun>
where
    F: FnMut(usize, &[EvaluatedModel]),
{
    let k = data.k();
    config.validate(k, data.n())?;
    let spec = match config.objective {
        ObjectiveKind::InSample => ObjectiveSpec::InSample,
        ObjectiveKind::CrossValidation { folds } => ObjectiveSpec::cross_validation(data.n(), folds, config.seed)?,
    };
    let evaluator = Evaluator::new(data, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);

    let mut masks = init_population(k, config.population_size, &mut rng);
    if let Some((lo, hi)) = config.complexity_bounds {
        masks.iter_mut().for_each(|m| repair_bounds(m, lo, hi, &mut rng));
    }
    let mut population = evaluator.evaluate_batch(&masks);

    let mut snapshots = Vec::new();
    let wants_snapshot = |g: usize| match config.snapshot_every {
        Some(every) => g <= 1 || g.is_multiple_of(every) || g == config.iterations,
        None => false,
    };
    if wants_snapshot(0) {
        snapshots.push(snapshot(0, &population));
    }
    observer(0, &population);

    for generation in 1..=config.iterations {
        let objectives: Vec<ObjectiveVector> = population.iter().map(|m| m.objective).collect();
        let elite = nondominated_indices(&objectives);

        let mut offspring = Vec::with_capacity(config.offspring + 1);
        while offspring.len() < config.offspring {
            let a = &population[*elite.choose(&mut rng).expect("a finite population has a non-dominated member")];
            let b = population.choose(&mut rng).expect("population is non-empty");
            let (c1, c2) = crossover(&a.mask, &b.mask, &mut rng, config.crossover_prob);
            offspring.push(c1);
            offspring.push(c2);
        }
        offspring.truncate(config.offspring);
        for child in offspring.iter_mut() {
            *child = mutate(child, config.mutation_prob, &mut rng);
            if let Some((lo, hi)) = config.complexity_bounds {
                repair_bounds(child, lo, hi, &mut rng);
            }
        }

        let mut merged = population;
        merged.extend(evaluator.evaluate_batch(&offspring));
        population = environmental_selection(merged, config.population_size)?;

        if wants_snapshot(generation) {
            snapshots.push(snapshot(generation, &population));
        }
        observer(generation, &population);
    }

    let frontier = if config.archive {
        Frontier::from_models(&evaluator.evaluated_models())
    } else {
        Frontier::from_models(&population)
    };
    let stats = RunStats {
        generations: config.iterations,
        models_evaluated: evaluator.queries(),
        unique_models: evaluator.unique_evaluations(),
    };
    Ok(MogaRun { frontier, population, snapshots, stats })
}

fn snapshot(generation: usize, population: &[EvaluatedModel]) -> Snapshot {
    Snapshot { generation, objectives: population.iter().map(|m| m.objective).collect() }
}

/// Lowest error per complexity among the non-dominated members, used for
/// progress reporting.
pub fn best_by_complexity(population: &[EvaluatedModel]) -> Vec<ObjectiveVector> {
    nondominated(population).into_iter().map(|m| m.objective).collect()
}
