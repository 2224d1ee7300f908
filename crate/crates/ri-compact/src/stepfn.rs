//! Exact calculus for nonnegative piecewise-constant functions on (0,1):
//! nonincreasing rearrangement, distribution function, maximal (running
//! average) function, and integration. All operations here are exact cell-wise
//! arithmetic — no quadrature.

use crate::Error;

/// A nonnegative piecewise-constant function on (0,1).
///
/// `breakpoints` is strictly increasing, starts at 0 and ends at 1;
/// `values[i]` is the value on the open cell `(breakpoints[i], breakpoints[i+1])`.
/// Signs are dropped at construction (`|f|`): every operator downstream acts
/// on absolute values anyway.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

/// Grid layout on (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Uniform,
    /// Log-spaced toward 0: consecutive cell widths in a constant ratio, so
    /// the smallest cells pile up at the left endpoint where all the limits
    /// `a -> 0+` live.
    Geometric,
}

/// A breakpoint-grid factory: `cells` cells, smallest cell edge `min_edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub kind: GridKind,
    pub cells: usize,
    pub min_edge: f64,
}

impl Grid {
    pub fn uniform(cells: usize) -> Self {
        Grid {
            kind: GridKind::Uniform,
            cells,
            min_edge: 0.0,
        }
    }

    pub fn geometric(cells: usize, min_edge: f64) -> Self {
        Grid {
            kind: GridKind::Geometric,
            cells,
            min_edge,
        }
    }

    /// Full breakpoint vector, 0 and 1 included.
    pub fn breakpoints(&self) -> Vec<f64> {
        let k = self.cells.max(1);
        match self.kind {
            GridKind::Uniform => (0..=k).map(|i| i as f64 / k as f64).collect(),
            GridKind::Geometric => {
                if k == 1 {
                    return vec![0.0, 1.0];
                }
                let e = self.min_edge.clamp(1e-300, 0.5);
                // Widths w_i = e * rho^i with sum 1; solve for rho by bisection
                // (the sum is strictly increasing in rho).
                let sum = |rho: f64| -> f64 {
                    let mut s = 0.0;
                    let mut w = e;
                    for _ in 0..k {
                        s += w;
                        w *= rho;
                    }
                    s
                };
                let (mut lo, mut hi) = (1.0, 2.0);
                while sum(hi) < 1.0 {
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if sum(mid) < 1.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let rho = 0.5 * (lo + hi);
                let mut pts = Vec::with_capacity(k + 1);
                let mut x = 0.0;
                let mut w = e;
                pts.push(0.0);
                for _ in 0..k - 1 {
                    x += w;
                    w *= rho;
                    pts.push(x);
                }
                pts.push(1.0);
                pts
            }
        }
    }

    /// Interior points of the grid (breakpoints with 0 and 1 dropped) — the
    /// sampling points used for limits `a -> 0+`.
    pub fn interior_points(&self) -> Vec<f64> {
        let b = self.breakpoints();
        b[1..b.len() - 1].to_vec()
    }
}

impl StepFunction {
    /// Build from breakpoints and per-cell values. Negative values are
    /// replaced by their absolute values.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, Error> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid("breakpoints", "need at least two points"));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::invalid("breakpoints", "must start at 0"));
        }
        if *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::invalid("breakpoints", "must end at 1"));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("breakpoints", "must be strictly increasing"));
        }
        if values.len() != breakpoints.len() - 1 {
            return Err(Error::invalid(
                "values",
                "length must be breakpoints length - 1",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "must be finite"));
        }
        Ok(StepFunction {
            breakpoints,
            values: values.into_iter().map(f64::abs).collect(),
        })
    }

    /// Constant function `c` on (0,1).
    pub fn constant(c: f64) -> Self {
        StepFunction::new(vec![0.0, 1.0], vec![c]).expect("constant is always valid")
    }

    /// Characteristic function of `(a,b) ∩ (0,1)`, with height `h`.
    pub fn scaled_indicator(a: f64, b: f64, h: f64) -> Result<Self, Error> {
        let (a, b) = (a.max(0.0), b.min(1.0));
        if !(a < b) {
            return Err(Error::invalid("interval", "need a < b within (0,1)"));
        }
        let mut bp = vec![0.0];
        let mut vals = vec![];
        if a > 0.0 {
            bp.push(a);
            vals.push(0.0);
        }
        if b < 1.0 {
            bp.push(b);
            vals.push(h);
            vals.push(0.0);
        } else {
            vals.push(h);
        }
        bp.push(1.0);
        bp.dedup();
        StepFunction::new(bp, vals)
    }

    /// χ_(a,b).
    pub fn indicator(a: f64, b: f64) -> Result<Self, Error> {
        Self::scaled_indicator(a, b, 1.0)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    /// Value on the cell containing `t` (cells are half-open `[b_i, b_{i+1})`).
    pub fn value_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= 1.0 {
            return *self.values.last().unwrap();
        }
        // partition_point gives the first breakpoint > t; its cell index is one less.
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        self.values[idx.saturating_sub(1).min(self.values.len() - 1)]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    /// ∫₀¹ f — exact cell-wise sum.
    pub fn integrate(&self) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(v, w)| v * (w[1] - w[0]))
            .sum()
    }

    /// ∫₀ᵗ f — exact.
    pub fn integrate_to(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let mut acc = 0.0;
        for (v, w) in self.values.iter().zip(self.breakpoints.windows(2)) {
            if w[1] <= t {
                acc += v * (w[1] - w[0]);
            } else if w[0] < t {
                acc += v * (t - w[0]);
                break;
            } else {
                break;
            }
        }
        acc
    }

    /// Nonincreasing rearrangement f*. Output is canonical: adjacent cells of
    /// equal value are merged, so equality tests on rearranged functions are
    /// exact. Ties sort by original position (irrelevant to any norm).
    pub fn rearrange(&self) -> StepFunction {
        let mut cells: Vec<(f64, f64)> = self
            .values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(&v, w)| (v, w[1] - w[0]))
            .collect();
        cells.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut bp = vec![0.0];
        let mut vals: Vec<f64> = vec![];
        let mut x = 0.0;
        for (v, w) in cells {
            x += w;
            if vals.last() == Some(&v) {
                *bp.last_mut().unwrap() = x;
            } else {
                vals.push(v);
                bp.push(x);
            }
        }
        *bp.last_mut().unwrap() = 1.0; // absorb roundoff in the final edge
        StepFunction {
            breakpoints: bp,
            values: vals,
        }
    }

    /// Distribution function: measure of `{ f > λ }`.
    pub fn distribution(&self, lambda: f64) -> Result<f64, Error> {
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(Error::invalid("lambda", "must be a finite value >= 0"));
        }
        Ok(self
            .values
            .iter()
            .zip(self.breakpoints.windows(2))
            .filter(|(v, _)| **v > lambda)
            .map(|(_, w)| w[1] - w[0])
            .sum())
    }

    /// Maximal function f**(t) = (1/t)∫₀ᵗ f*.
    pub fn maximal_average(&self, t: f64) -> Result<f64, Error> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::invalid("t", "must lie in (0,1)"));
        }
        Ok(self.rearrange().integrate_to(t) / t)
    }

    /// ∫₀¹ f·g — exact over the common refinement.
    pub fn integrate_product(&self, g: &StepFunction) -> f64 {
        let mut acc = 0.0;
        let mut i = 0;
        let mut j = 0;
        let mut left = 0.0;
        while left < 1.0 {
            let fe = self.breakpoints[i + 1];
            let ge = g.breakpoints[j + 1];
            let right = fe.min(ge);
            acc += self.values[i] * g.values[j] * (right - left);
            if fe <= right {
                i += 1;
            }
            if ge <= right {
                j += 1;
            }
            left = right;
        }
        acc
    }

    /// Pointwise combination on the common breakpoint refinement.
    pub fn zip_with(&self, g: &StepFunction, op: impl Fn(f64, f64) -> f64) -> StepFunction {
        let mut bp = vec![0.0];
        let mut vals = vec![];
        let mut i = 0;
        let mut j = 0;
        let mut left = 0.0;
        while left < 1.0 {
            let fe = self.breakpoints[i + 1];
            let ge = g.breakpoints[j + 1];
            let right = fe.min(ge);
            vals.push(op(self.values[i], g.values[j]).abs());
            bp.push(right);
            if fe <= right {
                i += 1;
            }
            if ge <= right {
                j += 1;
            }
            left = right;
        }
        StepFunction {
            breakpoints: bp,
            values: vals,
        }
    }

    pub fn add(&self, g: &StepFunction) -> StepFunction {
        self.zip_with(g, |a, b| a + b)
    }

    pub fn scale(&self, c: f64) -> StepFunction {
        StepFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| (v * c).abs()).collect(),
        }
    }

    /// Multiply by χ_(0,a): zero out everything right of `a`, splitting the
    /// cell containing `a` if needed.
    pub fn cutoff(&self, a: f64) -> StepFunction {
        if a >= 1.0 {
            return self.clone();
        }
        let mut bp = vec![];
        let mut vals = vec![];
        for (k, w) in self.breakpoints.windows(2).enumerate() {
            if w[0] >= a {
                break;
            }
            bp.push(w[0]);
            vals.push(self.values[k]);
        }
        if *bp.last().unwrap_or(&0.0) < a && a < 1.0 {
            bp.push(a);
            vals.push(0.0);
        }
        bp.push(1.0);
        // The pushed `a` may duplicate an existing breakpoint; rebuild cleanly.
        let mut cb = vec![bp[0]];
        let mut cv = vec![];
        for (i, &b) in bp[1..].iter().enumerate() {
            if b > *cb.last().unwrap() {
                cb.push(b);
                cv.push(vals[i]);
            }
        }
        StepFunction {
            breakpoints: cb,
            values: cv,
        }
    }

    /// A step function with `k` equal-measure cells and the given values
    /// (used by the brute-force equimeasurable-rearrangement searches).
    pub fn on_equal_cells(values: Vec<f64>) -> Result<Self, Error> {
        let k = values.len();
        if k == 0 {
            return Err(Error::invalid("values", "must be nonempty"));
        }
        let bp = (0..=k).map(|i| i as f64 / k as f64).collect();
        StepFunction::new(bp, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn three_cell() -> StepFunction {
        StepFunction::new(vec![0.0, 0.25, 0.5, 1.0], vec![0.5, 2.0, 1.0]).unwrap()
    }

    #[test]
    fn rearrange_sorts_by_value() {
        let f = three_cell().rearrange();
        assert_eq!(f.breakpoints(), &[0.0, 0.25, 0.75, 1.0]);
        assert_eq!(f.values(), &[2.0, 1.0, 0.5]);
    }

    #[test]
    fn rearrange_is_identity_on_nonincreasing() {
        let f = StepFunction::new(vec![0.0, 0.3, 1.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(f.rearrange(), f);
    }

    #[test]
    fn rearrange_translates_indicator() {
        let f = StepFunction::indicator(0.3, 0.7).unwrap();
        let r = f.rearrange();
        assert_eq!(r.breakpoints().len(), 3);
        assert_relative_eq!(r.breakpoints()[1], 0.4, max_relative = 1e-14);
        assert_eq!(r.values(), &[1.0, 0.0]);
    }

    #[test]
    fn rearrange_idempotent_and_merges_ties() {
        let f = StepFunction::new(vec![0.0, 0.2, 0.5, 1.0], vec![1.0, 1.0, 0.3]).unwrap();
        let r = f.rearrange();
        assert_eq!(r.cell_count(), 2);
        assert_eq!(r.rearrange(), r);
    }

    #[test]
    fn distribution_examples() {
        let f = three_cell();
        assert_relative_eq!(f.distribution(0.9).unwrap(), 0.75);
        assert_eq!(f.distribution(2.0).unwrap(), 0.0);
        assert_eq!(f.distribution(0.0).unwrap(), 1.0);
        assert!(f.distribution(-1.0).is_err());
    }

    #[test]
    fn distribution_survives_rearrangement() {
        let f = three_cell();
        let r = f.rearrange();
        for lam in [0.0, 0.4, 0.5, 0.99, 1.0, 1.5, 2.0, 3.0] {
            assert_relative_eq!(
                f.distribution(lam).unwrap(),
                r.distribution(lam).unwrap(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn maximal_average_examples() {
        let f = three_cell();
        assert_relative_eq!(f.maximal_average(0.5).unwrap(), 1.5);
        let c = StepFunction::constant(3.0);
        assert_relative_eq!(c.maximal_average(0.2).unwrap(), 3.0);
        // f = χ_(0,a): f**(t) = min(1, a/t)
        let chi = StepFunction::indicator(0.0, 0.3).unwrap();
        assert_relative_eq!(chi.maximal_average(0.2).unwrap(), 1.0);
        assert_relative_eq!(chi.maximal_average(0.6).unwrap(), 0.5);
        assert!(f.maximal_average(0.0).is_err());
        assert!(f.maximal_average(1.0).is_err());
    }

    #[test]
    fn maximal_average_dominates_rearrangement() {
        let f = three_cell();
        let r = f.rearrange();
        for i in 1..40 {
            let t = i as f64 / 40.0;
            assert!(f.maximal_average(t).unwrap() >= r.value_at(t) - 1e-14);
        }
    }

    #[test]
    fn integration_examples() {
        assert_relative_eq!(StepFunction::indicator(0.0, 0.35).unwrap().integrate(), 0.35);
        let f = three_cell();
        assert_relative_eq!(
            f.integrate_product(&StepFunction::constant(1.0)),
            f.integrate()
        );
        // Disjoint supports: plain product integral 0, rearranged product 0.5.
        let a = StepFunction::indicator(0.0, 0.5).unwrap();
        let b = StepFunction::indicator(0.5, 1.0).unwrap();
        assert_eq!(a.integrate_product(&b), 0.0);
        assert_relative_eq!(a.rearrange().integrate_product(&b.rearrange()), 0.5);
    }

    #[test]
    fn cutoff_splits_cells() {
        let f = StepFunction::constant(2.0).cutoff(0.3);
        assert_relative_eq!(f.integrate(), 0.6);
        assert_eq!(f.value_at(0.5), 0.0);
        assert_eq!(f.value_at(0.1), 2.0);
        // cutoff at an existing breakpoint must not duplicate it
        let g = three_cell().cutoff(0.25);
        assert_eq!(g.breakpoints(), &[0.0, 0.25, 1.0]);
    }

    #[test]
    fn geometric_grid_has_constant_width_ratio() {
        let g = Grid::geometric(32, 1e-6);
        let bp = g.breakpoints();
        assert_eq!(bp.len(), 33);
        assert_eq!(bp[0], 0.0);
        assert_relative_eq!(bp[1], 1e-6, max_relative = 1e-9);
        assert_eq!(*bp.last().unwrap(), 1.0);
        let widths: Vec<f64> = bp.windows(2).map(|w| w[1] - w[0]).collect();
        let r0 = widths[1] / widths[0];
        for w in widths.windows(2) {
            assert_relative_eq!(w[1] / w[0], r0, max_relative = 1e-6);
        }
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(StepFunction::new(vec![0.0, 0.5], vec![1.0, 2.0]).is_err());
        assert!(StepFunction::new(vec![0.1, 1.0], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
        // negative values are absorbed, not rejected
        let f = StepFunction::new(vec![0.0, 1.0], vec![-2.0]).unwrap();
        assert_eq!(f.values(), &[2.0]);
    }
}
