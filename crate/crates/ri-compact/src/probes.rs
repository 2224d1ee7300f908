//! Numerical compactness probes: curves of cutoff suprema whose decay (or
//! lack of it) witnesses the limit conditions behind almost-compact
//! embeddings, endpoint limit evaluators, and optimal-range / optimal-domain
//! norm computations with brute-force oracles.
//!
//! Suprema over unit balls are never claimed exact: every curve point is a
//! *certified lower bound* achieved by an explicit test function, paired with
//! a heuristic estimate from the dual identity where one is available.

use crate::isoperimetry::IsoProfile;
use crate::kernelops::{self, OperatorSpec, ProfileJ};
use crate::rinorm::{self, Exactness, NormValue, SpaceSpec};
use crate::search::{self, SearchBudget};
use crate::stepfn::{Grid, StepFunction};
use crate::Error;
use serde::{Deserialize, Serialize};

/// Decay verdict read off a probe curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "hint", rename_all = "snake_case")]
pub enum VerdictHint {
    TendsToZero,
    BoundedBelow { value: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbePoint {
    pub a: f64,
    /// Certified: achieved by an explicit normalized test function.
    pub lower_bound: f64,
    /// Heuristic (dual-identity search where available); ≥ lower_bound.
    pub estimate: f64,
    /// False when the unit-ball search exhausted its budget at this point.
    pub budget_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeCurve {
    /// Points in descending `a` order.
    pub points: Vec<ProbePoint>,
    #[serde(flatten)]
    pub hint: VerdictHint,
    /// Which rule/identity produced the curve (CSV `citation` column).
    pub citation: String,
}

impl ProbeCurve {
    pub fn lower_bounds(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lower_bound).collect()
    }
}

/// Probe effort and verdict thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeConfig {
    /// Number of cutoff values a (geometric, descending from 1/2).
    pub a_points: usize,
    /// Smallest cutoff probed.
    pub min_a: f64,
    /// Output sampling resolution for operator images.
    pub grid_cells: usize,
    pub budget: SearchBudget,
    /// Zero-verdict threshold θ: value at smallest a must drop below
    /// θ·(value at a = 1/2).
    pub zero_threshold: f64,
    /// Floor for the bounded-below verdict.
    pub bounded_below_threshold: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            a_points: 9,
            min_a: 1e-5,
            grid_cells: 64,
            budget: SearchBudget::default(),
            zero_threshold: 0.05,
            bounded_below_threshold: 1e-3,
        }
    }
}

impl ProbeConfig {
    fn validate(&self) -> Result<(), Error> {
        if !(self.zero_threshold > 0.0 && self.zero_threshold < 1.0) {
            return Err(Error::invalid("zero_threshold", "must lie in (0,1)"));
        }
        if self.a_points < 4 {
            return Err(Error::invalid("a_points", "need at least 4 cutoff values"));
        }
        if !(self.min_a > 0.0 && self.min_a < 0.5) {
            return Err(Error::invalid("min_a", "must lie in (0, 1/2)"));
        }
        Ok(())
    }

    /// Cutoff values: geometric from 1/2 down to min_a.
    pub fn a_values(&self) -> Vec<f64> {
        let n = self.a_points;
        (0..n)
            .map(|k| 0.5 * (self.min_a / 0.5).powf(k as f64 / (n - 1) as f64))
            .collect()
    }
}

/// Breakpoints of a geometric ∪ uniform grid compressed into `(0, c)`, plus
/// any `extra` points inside: fine near 0 (geometric part) without letting
/// the tail cells grow coarse (uniform part).
fn union_grid(c: f64, cells: usize, extra: &[f64]) -> Vec<f64> {
    let mut bp: Vec<f64> = Grid::geometric(cells, 1e-8)
        .breakpoints()
        .iter()
        .chain(Grid::uniform(cells).breakpoints().iter())
        .map(|&x| x * c)
        .collect();
    bp.extend(extra.iter().cloned().filter(|&x| x > 0.0 && x < c));
    bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bp.dedup();
    bp
}

/// Sample `g` at cell midpoints of the union grid compressed into `(0, c)`,
/// zero beyond c.
pub(crate) fn sample_scaled(
    g: &dyn Fn(f64) -> f64,
    c: f64,
    cells: usize,
    extra: &[f64],
) -> Result<StepFunction, Error> {
    let mut bp = union_grid(c, cells, extra);
    let vals: Vec<f64> = bp
        .windows(2)
        .map(|w| g(0.5 * (w[0] + w[1])))
        .collect();
    let mut vals = vals;
    if c < 1.0 {
        bp.push(1.0);
        vals.push(0.0);
    } else {
        *bp.last_mut().unwrap() = 1.0;
    }
    StepFunction::new(bp, vals)
}

/// Lower bounds found at smaller cutoffs remain valid at larger ones (the
/// supremum is nondecreasing in a), so propagate them forward; estimates are
/// then lifted to stay above the lower bounds.
fn enforce_monotone(points: &mut [ProbePoint]) {
    for i in (0..points.len().saturating_sub(1)).rev() {
        if points[i + 1].lower_bound > points[i].lower_bound {
            points[i].lower_bound = points[i + 1].lower_bound;
        }
    }
    for p in points.iter_mut() {
        if p.estimate < p.lower_bound {
            p.estimate = p.lower_bound;
        }
    }
}

fn hint_from(vals: &[f64], cfg: &ProbeConfig) -> VerdictHint {
    let n = vals.len();
    if n < 4 {
        return VerdictHint::Inconclusive;
    }
    let (v0, vk) = (vals[0], vals[n - 1]);
    let last = &vals[n - 3..];
    let strictly_fast = last[1] < 0.8 * last[0] && last[2] < 0.8 * last[1];
    if v0 > 0.0 && vk < cfg.zero_threshold * v0 && strictly_fast {
        return VerdictHint::TendsToZero;
    }
    let mx = last.iter().cloned().fold(0.0f64, f64::max);
    let mn = last.iter().cloned().fold(f64::INFINITY, f64::min);
    if mn > 0.0 && mx <= 1.05 * mn && vk > cfg.bounded_below_threshold {
        return VerdictHint::BoundedBelow { value: vk };
    }
    VerdictHint::Inconclusive
}

/// Heuristic dual-side value for the domain-cutoff supremum at `a`:
/// sup over the Y′ unit ball of ‖χ_(0,a)·(upstream kernel g*)‖_{X′}, searched
/// with the same budget. Only available when the operator is a plain
/// downstream kernel and both associates have symbolic representatives.
fn dual_estimate_domain(
    x: &SpaceSpec,
    y: &SpaceSpec,
    op: &OperatorSpec,
    a: f64,
    cfg: &ProbeConfig,
) -> Option<f64> {
    let (profile, j) = op.plain_downstream_core().ok()??;
    let yd = rinorm::symbolic_associate(y)?;
    let xd = rinorm::symbolic_associate(x)?;
    let r_op = OperatorSpec::R { profile, j };
    let objective = |g: &StepFunction| -> f64 {
        let gstar = g.rearrange();
        let sampled = match sample_scaled(
            &|t| kernelops::eval_point(&r_op, &gstar, t).unwrap_or(0.0),
            a,
            cfg.grid_cells,
            gstar.breakpoints(),
        ) {
            Ok(s) => s,
            Err(_) => return 0.0,
        };
        rinorm::norm(&xd, &sampled).map(|n| n.value).unwrap_or(0.0)
    };
    // mass beyond a only wastes budget: χ_(0,a)·R g* depends on g* on (0,a)
    // alone, so the optimizer may be restricted there
    search::best_in_unit_ball(&yd, &objective, a, &[], &cfg.budget)
        .ok()
        .map(|(v, _)| v)
}

fn require_downstream(op: &OperatorSpec) -> Result<(), Error> {
    if op.is_downstream() || matches!(op, OperatorSpec::P { .. }) {
        Ok(())
    } else {
        Err(Error::invalid(
            "operator",
            "cutoff probes apply to downstream kernels (H/K/Q/T/P)",
        ))
    }
}

/// Curve of a ↦ sup { ‖op(χ_(0,a)·f)‖_Y : ‖f‖_X ≤ 1 } — the cutoff applied
/// *before* the operator. The search runs over nonincreasing test functions
/// supported in (0,a): cutoffs, spikes, truncated power-logs, plus ascent.
pub fn probe_cutoff_domain(
    x: &SpaceSpec,
    y: &SpaceSpec,
    op: &OperatorSpec,
    cfg: &ProbeConfig,
) -> Result<ProbeCurve, Error> {
    cfg.validate()?;
    require_downstream(op)?;
    let mut points = Vec::new();
    for a in cfg.a_values() {
        // the image of a function supported in (0,a) vanishes beyond a, and
        // is exactly constant between the test function's breakpoints where
        // the kernel is flat — so sample on (0,a) including those points
        let objective = |h: &StepFunction| -> f64 {
            sample_scaled(
                &|t| kernelops::eval_point(op, h, t).unwrap_or(0.0),
                a,
                cfg.grid_cells,
                h.breakpoints(),
            )
            .ok()
            .and_then(|img| rinorm::norm(y, &img).ok())
            .map(|n| n.value)
            .unwrap_or(0.0)
        };
        let (lower, budget_ok) = match search::best_in_unit_ball(x, &objective, a, &[], &cfg.budget)
        {
            Ok((v, _)) => (v, true),
            Err(_) => (0.0, false),
        };
        let estimate = dual_estimate_domain(x, y, op, a, cfg)
            .map_or(lower, |d| d.max(lower));
        points.push(ProbePoint {
            a,
            lower_bound: lower,
            estimate,
            budget_ok,
        });
    }
    enforce_monotone(&mut points);
    let hint = hint_from(
        &points.iter().map(|p| p.lower_bound).collect::<Vec<_>>(),
        cfg,
    );
    Ok(ProbeCurve {
        points,
        hint,
        citation: "cutoff-domain supremum over the unit ball".into(),
    })
}

/// Curve of a ↦ sup { ‖χ_(0,a)·(op f)‖_Y : ‖f‖_X ≤ 1 } — the cutoff applied
/// *after* the operator. Dominates the domain-cutoff curve pointwise, since
/// the kernels are positive.
pub fn probe_cutoff_range(
    x: &SpaceSpec,
    y: &SpaceSpec,
    op: &OperatorSpec,
    cfg: &ProbeConfig,
) -> Result<ProbeCurve, Error> {
    cfg.validate()?;
    require_downstream(op)?;
    let mut points = Vec::new();
    for a in cfg.a_values() {
        let objective = |h: &StepFunction| -> f64 {
            let sampled = match sample_scaled(
                &|t| kernelops::eval_point(op, h, t).unwrap_or(0.0),
                a,
                cfg.grid_cells,
                h.breakpoints(),
            ) {
                Ok(s) => s,
                Err(_) => return 0.0,
            };
            rinorm::norm(y, &sampled).map(|n| n.value).unwrap_or(0.0)
        };
        let (lower, budget_ok) =
            match search::best_in_unit_ball(x, &objective, 1.0, &[a], &cfg.budget) {
                Ok((v, _)) => (v, true),
                Err(_) => (0.0, false),
            };
        points.push(ProbePoint {
            a,
            lower_bound: lower,
            estimate: lower,
            budget_ok,
        });
    }
    enforce_monotone(&mut points);
    let hint = hint_from(
        &points.iter().map(|p| p.lower_bound).collect::<Vec<_>>(),
        cfg,
    );
    Ok(ProbeCurve {
        points,
        hint,
        citation: "cutoff-range supremum over the unit ball".into(),
    })
}

/// Reference value for the L¹-domain simplified-kernel supremum:
/// sup over grid points s < a of s^{m−1}·φ_Y(s)/I(s)^m. The probe's lower
/// bound at `a` reproduces this via spike test functions.
pub fn ll_reference(
    y: &SpaceSpec,
    iso: &IsoProfile,
    m: u32,
    a: f64,
    budget: &SearchBudget,
) -> Result<f64, Error> {
    let grid = Grid::geometric(budget.grid_cells, budget.min_edge);
    let mut sup = 0.0f64;
    for &x in grid.breakpoints().iter().skip(1) {
        let s = x * a;
        let v = s.powi(m as i32 - 1) * rinorm::fundamental_function(y, s)?
            / iso.eval(s).powi(m as i32);
        if v.is_finite() {
            sup = sup.max(v);
        }
    }
    Ok(sup)
}

/// Report of an endpoint limit evaluation: the sampled ratio/norm curve, a
/// verdict on whether the limit is 0, and whether the verdict came from
/// symbolic exponent comparison rather than decay heuristics.
#[derive(Debug, Clone, Serialize)]
pub struct EndpointReport {
    pub curve: Vec<(f64, f64)>,
    pub holds: bool,
    pub symbolic: bool,
    pub note: String,
}

/// Limit condition for L¹ as the domain space: a^{m−1}·φ_X(a)/I(a)^m → 0.
/// Power-family profiles with catalogue specs are decided symbolically by
/// exponent comparison; the curve is reported either way.
pub fn endpoint_l1_into_x(
    iso: &IsoProfile,
    m: u32,
    x: &SpaceSpec,
    cfg: &ProbeConfig,
) -> Result<EndpointReport, Error> {
    cfg.validate()?;
    if m == 0 {
        return Err(Error::invalid("m", "order must be >= 1"));
    }
    let ratio = |a: f64| -> Result<f64, Error> {
        Ok(a.powi(m as i32 - 1) * rinorm::fundamental_function(x, a)? / iso.eval(a).powi(m as i32))
    };
    let mut curve = Vec::new();
    for a in cfg.a_values() {
        curve.push((a, ratio(a)?));
    }
    if let Some(c) = iso.power_exponent() {
        // ratio ≈ a^e·log(2/a)^d with e = (m−1) + 1/p − c·m, d = the log
        // exponent of φ_X; → 0 iff e > 0, or e = 0 and d < 0.
        let (inv_p, d) = rinorm::fundamental_exponents(x);
        let e = crate::rinorm::rat(m as f64 - 1.0) + inv_p - crate::rinorm::rat(c * m as f64);
        let zero = crate::rinorm::rat(0.0);
        let holds = e > zero || (e == zero && d < zero);
        return Ok(EndpointReport {
            curve,
            holds,
            symbolic: true,
            note: "exponent comparison on the power family".into(),
        });
    }
    let vals: Vec<f64> = curve.iter().map(|&(_, v)| v).collect();
    let holds = matches!(hint_from(&vals, cfg), VerdictHint::TendsToZero);
    Ok(EndpointReport {
        curve,
        holds,
        symbolic: false,
        note: "decay heuristic on the sampled ratio".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    FromLinfty,
    IntoLinfty,
}

/// Endpoint limit conditions involving L^∞.
///
/// * `FromLinfty`: ‖χ_(0,a)·(∫_t^1 dr/J)^j‖_X → 0. Holds with no computation
///   when ∫₀¹ dr/J < ∞.
/// * `IntoLinfty`: ‖χ_(0,a)·(1/J)(∫_0^t dr/J)^{j−1}‖_{X′} → 0. Fails outright
///   when ∫₀¹ dr/J = ∞ (no admissible target exists at this endpoint).
pub fn endpoint_linfty(
    profile: &ProfileJ,
    j: u32,
    x: &SpaceSpec,
    direction: Direction,
    cfg: &ProbeConfig,
) -> Result<EndpointReport, Error> {
    cfg.validate()?;
    if j == 0 {
        return Err(Error::invalid("j", "order must be >= 1"));
    }
    let finite = profile.inv_integral_finite();
    match direction {
        Direction::FromLinfty => {
            if finite {
                return Ok(EndpointReport {
                    curve: Vec::new(),
                    holds: true,
                    symbolic: true,
                    note: "finite inverse integral: holds for every order".into(),
                });
            }
            let mut curve = Vec::new();
            for a in cfg.a_values() {
                let g = sample_scaled(
                    &|t| profile.primitive_b(t).powi(j as i32),
                    a,
                    cfg.grid_cells,
                    &[],
                )?;
                curve.push((a, rinorm::norm(x, &g)?.value));
            }
            let vals: Vec<f64> = curve.iter().map(|&(_, v)| v).collect();
            let holds = matches!(hint_from(&vals, cfg), VerdictHint::TendsToZero);
            Ok(EndpointReport {
                curve,
                holds,
                symbolic: false,
                note: "norm decay of the sampled kernel primitive".into(),
            })
        }
        Direction::IntoLinfty => {
            if !finite {
                return Ok(EndpointReport {
                    curve: Vec::new(),
                    holds: false,
                    symbolic: true,
                    note: "divergent inverse integral: no admissible target at this endpoint"
                        .into(),
                });
            }
            let weight =
                |t: f64| profile.inv_integral_from_zero(t).powi(j as i32 - 1) / profile.eval(t);
            let xd = rinorm::symbolic_associate(x).ok_or_else(|| {
                Error::OutOfScope(format!(
                    "no symbolic associate for {x:?}; endpoint norm unavailable"
                ))
            })?;
            let mut curve = Vec::new();
            for a in cfg.a_values() {
                let g = sample_scaled(&weight, a, cfg.grid_cells, &[])?;
                curve.push((a, rinorm::norm(&xd, &g)?.value));
            }
            let vals: Vec<f64> = curve.iter().map(|&(_, v)| v).collect();
            let holds = matches!(hint_from(&vals, cfg), VerdictHint::TendsToZero);
            Ok(EndpointReport {
                curve,
                holds,
                symbolic: false,
                note: "associate-norm decay of the upstream weight".into(),
            })
        }
    }
}

/// ‖f‖ in the associate of the optimal range space: ‖(upstream kernel) f*‖_{X′},
/// computed through the associate-norm search oracle.
pub fn optimal_range_norm(
    x: &SpaceSpec,
    profile: &ProfileJ,
    j: u32,
    f: &StepFunction,
    budget: &SearchBudget,
) -> Result<NormValue, Error> {
    if j == 0 {
        return Err(Error::invalid("j", "order must be >= 1"));
    }
    if f.max_value() == 0.0 {
        return Ok(NormValue::exact(0.0));
    }
    let r_op = OperatorSpec::R {
        profile: profile.clone(),
        j,
    };
    let fstar = f.rearrange();
    let img = sample_scaled(
        &|t| kernelops::eval_point(&r_op, &fstar, t).unwrap_or(0.0),
        1.0,
        budget.grid_cells.max(64),
        fstar.breakpoints(),
    )?;
    Ok(rinorm::associate_norm(x, &img, budget)?.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainNormMode {
    Bruteforce,
    ClosedForm,
}

/// Maximum number of equal-measure cells accepted by the brute-force mode.
pub const BRUTEFORCE_CELL_CAP: usize = 9;

fn is_equal_cell(f: &StepFunction) -> bool {
    let n = f.cell_count();
    f.breakpoints()
        .iter()
        .enumerate()
        .all(|(i, &b)| (b - i as f64 / n as f64).abs() < 1e-9)
}

fn for_each_permutation(values: &mut Vec<f64>, visit: &mut dyn FnMut(&[f64])) {
    // Heap's algorithm
    fn rec(k: usize, v: &mut Vec<f64>, visit: &mut dyn FnMut(&[f64])) {
        if k <= 1 {
            visit(v);
            return;
        }
        for i in 0..k {
            rec(k - 1, v, visit);
            if k % 2 == 0 {
                v.swap(i, k - 1);
            } else {
                v.swap(0, k - 1);
            }
        }
    }
    let n = values.len();
    rec(n, values, visit);
}

/// Norm of `f` in the optimal domain space for the pair (op, Y):
/// sup over rearrangements h of f of ‖H^j_J h‖_Y, plus ‖f‖_{L¹}.
///
/// * `Bruteforce`: f must live on an equal-measure grid with ≤ 9 cells; all
///   cell-value permutations (= all equimeasurable step rearrangements on
///   that grid) are enumerated. Certified lower bound of the full supremum.
/// * `ClosedForm`: only Y = L^∞, j = 1, J nondecreasing with ∫₀¹ ds/J < ∞;
///   returns the exact surrogate ∫ f*/J, which brackets the brute-force
///   value: ∫f*/J ≤ bruteforce ≤ (1 + J(1))·∫f*/J.
pub fn optimal_domain_norm(
    y: &SpaceSpec,
    profile: &ProfileJ,
    j: u32,
    f: &StepFunction,
    mode: DomainNormMode,
) -> Result<NormValue, Error> {
    if j == 0 {
        return Err(Error::invalid("j", "order must be >= 1"));
    }
    match mode {
        DomainNormMode::ClosedForm => {
            if !y.is_linfty() || j != 1 {
                return Err(Error::invalid(
                    "mode",
                    "closed form needs Y = Linfty and order 1",
                ));
            }
            if !profile.nondecreasing || !profile.inv_integral_finite() {
                return Err(Error::OutOfScope(
                    "closed form needs a nondecreasing profile with finite inverse integral"
                        .into(),
                ));
            }
            let fstar = f.rearrange();
            let mut acc = 0.0;
            for (i, w) in fstar.breakpoints().windows(2).enumerate() {
                let v = fstar.values()[i];
                if v > 0.0 {
                    let seg = if w[0] == 0.0 {
                        profile.inv_integral_from_zero(w[1])
                    } else {
                        profile.inv_integral(w[0], w[1])
                    };
                    acc += v * seg;
                }
            }
            Ok(NormValue::exact(acc))
        }
        DomainNormMode::Bruteforce => {
            let n = f.cell_count();
            if n > BRUTEFORCE_CELL_CAP {
                return Err(Error::BudgetExhausted {
                    context: format!(
                        "brute force caps at {BRUTEFORCE_CELL_CAP} equal cells, got {n}"
                    ),
                    value: n as f64,
                    error_bound: f64::INFINITY,
                });
            }
            if !is_equal_cell(f) {
                return Err(Error::invalid(
                    "f",
                    "brute force needs an equal-measure cell grid",
                ));
            }
            let op = OperatorSpec::H {
                profile: profile.clone(),
                j,
            };
            let grid = Grid::geometric(64, 1e-8);
            let bp = f.breakpoints().to_vec();
            let mut vals = f.values().to_vec();
            let mut best = 0.0f64;
            let mut visit = |perm: &[f64]| {
                let h = StepFunction::new(bp.clone(), perm.to_vec())
                    .expect("permutation keeps the valid grid");
                if let Ok(img) = kernelops::apply(&op, &h, &grid) {
                    if let Ok(nv) = rinorm::norm(y, &img) {
                        if nv.value > best {
                            best = nv.value;
                        }
                    }
                }
            };
            for_each_permutation(&mut vals, &mut visit);
            Ok(NormValue {
                value: best + f.integrate(),
                exactness: Exactness::LowerBound,
            })
        }
    }
}

/// Both sides of the cutoff duality identity at a single `a`:
/// left = sup over the X ball of ‖H^m(χ_(0,a)f)‖_Y,
/// right = sup over the Y′ ball of ‖χ_(0,a)·R^m g*‖_{X′},
/// estimated with the same search budget. They agree within search slack.
pub fn duality_identity_check(
    x: &SpaceSpec,
    y: &SpaceSpec,
    profile: &ProfileJ,
    m: u32,
    a: f64,
    cfg: &ProbeConfig,
) -> Result<(f64, f64), Error> {
    cfg.validate()?;
    if !profile.nondecreasing {
        return Err(Error::invalid("profile", "the identity needs J nondecreasing"));
    }
    let op = OperatorSpec::H {
        profile: profile.clone(),
        j: m,
    };
    let objective = |h: &StepFunction| -> f64 {
        sample_scaled(
            &|t| kernelops::eval_point(&op, h, t).unwrap_or(0.0),
            a,
            cfg.grid_cells,
            h.breakpoints(),
        )
        .ok()
        .and_then(|img| rinorm::norm(y, &img).ok())
        .map(|n| n.value)
        .unwrap_or(0.0)
    };
    let (left, _) = search::best_in_unit_ball(x, &objective, a, &[], &cfg.budget)?;
    let right = dual_estimate_domain(x, y, &op, a, cfg).ok_or_else(|| {
        Error::OutOfScope(format!(
            "dual side needs symbolic associates for {x:?} and {y:?}"
        ))
    })?;
    Ok((left, right))
}
