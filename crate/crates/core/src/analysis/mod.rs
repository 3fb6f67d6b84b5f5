//! Decision support on a computed frontier.

mod criteria;
mod kappa;
mod knee;
mod plots;

pub use criteria::{criteria_scan, CriteriaRow, CriteriaTable};
pub use kappa::{kappa_metric, kappa_single, train_eval_split};
pub use knee::{knee_of_points, knee_point, KneePoint, PRONOUNCED_KNEE_DISTANCE};
pub use plots::{hs_plot, os_plot, HsMatrix, OsPlot, OsSeries};
