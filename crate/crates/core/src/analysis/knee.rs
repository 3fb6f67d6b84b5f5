use crate::error::{Error, Result};
use crate::pareto::Frontier;

/// Below this normalized chord distance a frontier has no pronounced knee.
pub const PRONOUNCED_KNEE_DISTANCE: f64 = 0.02;

/// Distances within this of the maximum count as ties.
const TIE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KneePoint {
    /// Index into the frontier's models.
    pub index: usize,
    /// Complexity of the knee model (predictor count).
    pub complexity: usize,
    /// Perpendicular distance to the end-to-end chord on min-max normalized
    /// axes.
    pub distance: f64,
    pub pronounced: bool,
}

/// Knee of a frontier: the interior point farthest from the chord joining
/// its first and last points after scaling both axes to `[0, 1]`. Ties go
/// to the smaller complexity.
pub fn knee_point(frontier: &Frontier) -> Result<KneePoint> {
    let points: Vec<(f64, f64)> =
        frontier.iter().map(|m| (m.objective.complexity as f64, m.objective.error)).collect();
    let (index, distance) = knee_of_points(&points)?;
    Ok(KneePoint {
        index,
        complexity: frontier.models()[index].objective.complexity,
        distance,
        pronounced: distance >= PRONOUNCED_KNEE_DISTANCE,
    })
}

/// Index and chord distance of the knee among points sorted by `x`.
pub fn knee_of_points(points: &[(f64, f64)]) -> Result<(usize, f64)> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "knee detection needs at least 3 points, got {}",
            points.len()
        )));
    }
    let scale = |values: Vec<f64>| -> Vec<f64> {
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        values.into_iter().map(|v| if span > 0.0 { (v - lo) / span } else { 0.0 }).collect()
    };
    let xs = scale(points.iter().map(|p| p.0).collect());
    let ys = scale(points.iter().map(|p| p.1).collect());
    let last = points.len() - 1;
    let (dx, dy) = (xs[last] - xs[0], ys[last] - ys[0]);
    let chord = dx.hypot(dy);
    let distance = |i: usize| {
        if chord == 0.0 {
            0.0
        } else {
            (dx * (ys[i] - ys[0]) - dy * (xs[i] - xs[0])).abs() / chord
        }
    };
    let mut best = (1, distance(1));
    for i in 2..last {
        let d = distance(i);
        if d > best.1 + TIE_EPS {
            best = (i, d);
        }
    }
    Ok(best)
}
