//! Search over the unit ball of a space for step functions maximizing a
//! functional. Used by the associate-norm oracle and by the compactness
//! probes. Every candidate is explicitly normalized to (at most) unit norm,
//! so the best objective value found is a *certified lower bound* for the
//! supremum over the ball.
//!
//! The candidate families are the ones that are extremal in the underlying
//! theory: cutoff characteristic functions, concentrated spikes, truncated
//! powers and power-logs — topped up with a cheap coordinate-ascent
//! refinement.

use crate::rinorm::{self, Exactness, SpaceSpec};
use crate::stepfn::{Grid, StepFunction};
use crate::Error;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Search effort knobs. Deterministic for a fixed seed.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct SearchBudget {
    /// Cells of the geometric grid the candidates live on.
    pub grid_cells: usize,
    /// Smallest cell edge of that grid.
    pub min_edge: f64,
    /// Coordinate-ascent sweeps over the best candidate.
    pub ascent_sweeps: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            grid_cells: 48,
            min_edge: 1e-8,
            ascent_sweeps: 2,
            seed: 0,
        }
    }
}

/// Scale `h` so its X-norm is ≤ 1 (using the norm's reported error bound on
/// the safe side). Returns `None` when the norm is 0, infinite, or NaN.
fn normalized(s: &SpaceSpec, h: &StepFunction) -> Option<StepFunction> {
    let nv = rinorm::norm(s, h).ok()?;
    let bound = match nv.exactness {
        Exactness::Quadrature(b) => b,
        _ => 0.0,
    };
    let n = nv.value + bound;
    if !(n.is_finite() && n > 0.0) {
        return None;
    }
    Some(h.scale(1.0 / n))
}

/// Truncated profile `s ↦ s^{-θ} log(2/s)^k` on `(0, support)`, discretized
/// on a geometric grid (right-endpoint values, so decreasing profiles stay
/// decreasing).
fn truncated_profile(theta: f64, k: i32, support: f64, grid: &Grid) -> Option<StepFunction> {
    let mut bp: Vec<f64> = grid
        .breakpoints()
        .iter()
        .map(|&x| x * support)
        .collect();
    *bp.last_mut().unwrap() = support;
    let mut vals: Vec<f64> = bp
        .windows(2)
        .map(|w| {
            let s = w[1];
            s.powf(-theta) * crate::quad::log2s(s).powi(k)
        })
        .collect();
    if support < 1.0 {
        bp.push(1.0);
        vals.push(0.0);
    }
    if vals.iter().any(|v| !v.is_finite()) {
        return None;
    }
    StepFunction::new(bp, vals).ok()
}

/// Maximize `objective` over step functions of X-norm ≤ 1 supported in
/// `(0, support)`. `extra_points` are additional cutoff positions worth
/// trying (typically the breakpoints of the function being paired against).
/// Returns the best value and the (normalized) function achieving it.
pub fn best_in_unit_ball(
    s: &SpaceSpec,
    objective: &dyn Fn(&StepFunction) -> f64,
    support: f64,
    extra_points: &[f64],
    budget: &SearchBudget,
) -> Result<(f64, StepFunction), Error> {
    let grid = Grid::geometric(budget.grid_cells, budget.min_edge);
    let mut cut_points: Vec<f64> = grid
        .breakpoints()
        .iter()
        .map(|&x| x * support)
        .filter(|&x| x > 0.0)
        .collect();
    cut_points.extend(extra_points.iter().cloned().filter(|&x| x > 0.0 && x <= support));
    cut_points.push(support);
    cut_points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cut_points.dedup();

    let mut best: Option<(f64, StepFunction)> = None;
    let mut consider = |h: StepFunction| {
        if let Some(hn) = normalized(s, &h) {
            let v = objective(&hn);
            if v.is_finite() && best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, hn));
            }
        }
    };

    for &b in &cut_points {
        if let Ok(h) = StepFunction::indicator(0.0, b) {
            consider(h);
        }
        // concentrated spike just left of b — extremal when the paired
        // kernel/weight peaks at an interior point rather than at 0
        if let Ok(h) = StepFunction::indicator(b * (1.0 - 1e-3), b) {
            consider(h);
        }
    }
    let mut thetas = vec![0.0, 0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95];
    if s.p.is_finite() {
        thetas.push(1.0 / s.p);
        thetas.push((1.0 / s.p - 0.01).max(0.0));
    }
    for &theta in &thetas {
        for k in [-2, -1, 0, 1, 2] {
            if let Some(h) = truncated_profile(theta, k, support, &grid) {
                consider(h);
            }
        }
    }

    let (mut best_val, mut best_fn) = best.ok_or_else(|| Error::BudgetExhausted {
        context: "unit-ball search: no candidate with finite nonzero norm".into(),
        value: 0.0,
        error_bound: f64::INFINITY,
    })?;

    // Coordinate ascent on the best candidate's own grid; cells reaching
    // beyond the support stay untouched so the restriction is preserved.
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.ascent_sweeps {
        let cells = best_fn.cell_count();
        let mut order: Vec<usize> = (0..cells)
            .filter(|&i| best_fn.breakpoints()[i + 1] <= support * (1.0 + 1e-12))
            .collect();
        order.shuffle(&mut rng);
        for i in order {
            for factor in [1.6, 0.6, 1.15, 0.85] {
                let mut vals = best_fn.values().to_vec();
                if vals[i] == 0.0 {
                    vals[i] = best_fn.max_value() * 0.1;
                } else {
                    vals[i] *= factor;
                }
                let cand = StepFunction::new(best_fn.breakpoints().to_vec(), vals)
                    .expect("perturbed candidate keeps a valid grid");
                if let Some(hn) = normalized(s, &cand) {
                    let v = objective(&hn);
                    if v > best_val {
                        best_val = v;
                        best_fn = hn;
                    }
                }
            }
        }
    }
    Ok((best_val, best_fn))
}
