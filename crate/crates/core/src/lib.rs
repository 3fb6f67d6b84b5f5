//! Regression variable selection as a two-objective problem.
//!
//! Every candidate regression model is a bit mask over the predictor columns.
//! Models are scored on two objectives that are both minimized: complexity
//! (number of selected predictors) and error (in-sample or cross-validated
//! mean squared error). A multi-objective genetic algorithm ([`moga`])
//! approximates the set of Pareto-optimal models, i.e. the best-fitting model
//! at each complexity level. Exhaustive enumeration and greedy stepwise
//! selectors ([`baselines`]) serve as oracles and comparison points, and the
//! [`analysis`] module turns a frontier into decision aids (knee detection,
//! information criteria, held-out error, objective-space and hypothesis-space
//! charts).
//!
//! ```
//! use mogavs::{moga::{run_moga, GaConfig}, simdata::gen_example2, data::Dataset};
//!
//! let sim = gen_example2(100, 10, 3).unwrap();
//! let mut config = GaConfig::for_predictors(sim.data.k());
//! config.population_size = 11;
//! config.iterations = 40;
//! let run = run_moga(&sim.data, &config).unwrap();
//! assert!(!run.frontier.is_empty());
//! ```

pub mod analysis;
pub mod baselines;
pub mod data;
pub mod error;
pub mod moga;
pub mod objectives;
pub mod pareto;
pub mod regress;
pub mod simdata;

pub use data::{mask_complexity, Dataset, EvaluatedModel, ModelMask, ObjectiveVector};
pub use error::{Error, Result};
pub use pareto::Frontier;
