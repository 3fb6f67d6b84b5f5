//! Dominance and non-dominated filtering for (complexity, error) pairs.

use std::cmp::Ordering;

use crate::data::{EvaluatedModel, ObjectiveVector};

/// `a` dominates `b`: no worse in both objectives and strictly better in at
/// least one.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    a.complexity <= b.complexity
        && a.error <= b.error
        && (a.complexity < b.complexity || a.error < b.error)
}

/// Indices of the members not dominated by any other member, by pairwise
/// comparison. Objective-identical members are all kept.
pub fn nondominated_indices(objectives: &[ObjectiveVector]) -> Vec<usize> {
    (0..objectives.len())
        .filter(|&i| !objectives.iter().any(|o| dominates(o, &objectives[i])))
        .collect()
}

/// Orders by complexity, then error, then mask.
pub fn by_objective_then_mask(a: &EvaluatedModel, b: &EvaluatedModel) -> Ordering {
    a.objective
        .complexity
        .cmp(&b.objective.complexity)
        .then(a.objective.error.total_cmp(&b.objective.error))
        .then_with(|| a.mask.cmp(&b.mask))
}

/// The members of `pop` not dominated by any member, sorted by complexity.
/// Among members with identical objectives only the lexicographically
/// smallest mask is kept.
pub fn nondominated(pop: &[EvaluatedModel]) -> Vec<EvaluatedModel> {
    let objectives: Vec<ObjectiveVector> = pop.iter().map(|m| m.objective).collect();
    let mut keep: Vec<EvaluatedModel> =
        nondominated_indices(&objectives).into_iter().map(|i| pop[i].clone()).collect();
    keep.sort_by(by_objective_then_mask);
    keep.dedup_by(|later, earlier| later.objective == earlier.objective);
    keep
}

/// Mutually non-dominated models, complexity strictly increasing and error
/// strictly decreasing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Frontier {
    models: Vec<EvaluatedModel>,
}

impl Frontier {
    /// Filters `models` down to its non-dominated set.
    pub fn from_models(models: &[EvaluatedModel]) -> Self {
        Self { models: nondominated(models) }
    }

    pub fn models(&self) -> &[EvaluatedModel] {
        &self.models
    }

    pub fn into_models(self) -> Vec<EvaluatedModel> {
        self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EvaluatedModel> {
        self.models.iter()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.models.iter().map(|m| m.objective).collect()
    }

    pub fn at_complexity(&self, complexity: usize) -> Option<&EvaluatedModel> {
        self.models
            .binary_search_by_key(&complexity, |m| m.objective.complexity)
            .ok()
            .map(|i| &self.models[i])
    }

    /// Models with `lo <= complexity <= hi`.
    pub fn in_range(&self, lo: usize, hi: usize) -> impl Iterator<Item = &EvaluatedModel> {
        self.models.iter().filter(move |m| (lo..=hi).contains(&m.objective.complexity))
    }
}

impl<'a> IntoIterator for &'a Frontier {
    type Item = &'a EvaluatedModel;
    type IntoIter = std::slice::Iter<'a, EvaluatedModel>;

    fn into_iter(self) -> Self::IntoIter {
        self.models.iter()
    }
}
