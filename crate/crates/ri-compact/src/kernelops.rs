//! The kernel operators on (0,1) that govern the embedding theory, and their
//! structural identities.
//!
//! Every operator here reduces to one of two forms built from a profile J:
//!
//! * downstream form `H^j_J f(t) = (1/(j−1)!) ∫_t^1 (f(s)/J(s)) W(s)^{j−1} ds`
//!   with `W(s) = ∫_t^s dr/J`;
//! * upstream form `R^j_J f(t) = (1/((j−1)! J(t))) ∫_0^t W̃(s)^{j−1} f(s) ds`
//!   with `W̃(s) = ∫_s^t dr/J`.
//!
//! Since `dW = ds/J(s)`, the downstream form applied to a step function is a
//! telescoping sum of `W^j` differences — *exact* whenever the primitive
//! `B(s) = ∫_s^1 dr/J` has a closed form (all power profiles and L_Φ). The
//! upstream form is exact for `j = 1` and quadrature-evaluated otherwise.

use crate::isoperimetry::{self, IsoFamily, IsoProfile, PhiSpec};
use crate::quad;
use crate::rinorm::{self, SpaceSpec};
use crate::stepfn::{Grid, StepFunction};
use crate::Error;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Family of a kernel profile J on (0,1].
#[derive(Clone)]
pub enum ProfileFamily {
    /// J(s) = s^γ, γ ≤ 1 (γ > 1 violates the standing assumption inf J(t)/t > 0).
    Power(f64),
    /// J = L_Φ.
    LPhi(PhiSpec),
    Custom(String),
}

impl fmt::Debug for ProfileFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileFamily::Power(g) => write!(f, "s^{g}"),
            ProfileFamily::LPhi(p) => write!(f, "L_{:?}", p.family),
            ProfileFamily::Custom(n) => write!(f, "custom({n})"),
        }
    }
}

/// A kernel profile J: evaluator, family tag, and the closed-form primitive
/// `B(s) = ∫_s^1 dr/J` where available. The standing assumption
/// `inf_{(0,1]} J(t)/t > 0` is enforced at construction.
#[derive(Clone)]
pub struct ProfileJ {
    pub family: ProfileFamily,
    eval: RealFn,
    /// True when J is nondecreasing (needed by the R/S comparison results).
    pub nondecreasing: bool,
}

impl fmt::Debug for ProfileJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProfileJ({:?})", self.family)
    }
}

impl ProfileJ {
    /// J ≡ 1.
    pub fn one() -> Self {
        Self::power(0.0).expect("gamma 0 is valid")
    }

    pub fn power(gamma: f64) -> Result<Self, Error> {
        if !(gamma <= 1.0) || !gamma.is_finite() {
            return Err(Error::invalid(
                "gamma",
                "power profiles need gamma <= 1, else inf J(t)/t = 0",
            ));
        }
        Ok(ProfileJ {
            family: ProfileFamily::Power(gamma),
            eval: Arc::new(move |s: f64| s.powf(gamma)),
            nondecreasing: gamma >= 0.0,
        })
    }

    pub fn l_phi(phi: PhiSpec) -> Self {
        let p = phi.clone();
        ProfileJ {
            family: ProfileFamily::LPhi(phi),
            eval: Arc::new(move |s: f64| isoperimetry::l_phi(&p, s)),
            nondecreasing: true,
        }
    }

    /// Custom profile; the standing assumption is checked on a geometric grid.
    pub fn custom(
        name: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        nondecreasing: bool,
    ) -> Result<Self, Error> {
        let eval: RealFn = Arc::new(eval);
        let mut min_ratio = f64::INFINITY;
        for k in 0..=96 {
            let t = 1e-12f64.powf(1.0 - k as f64 / 96.0);
            min_ratio = min_ratio.min(eval(t) / t);
        }
        if !(min_ratio > 1e-9) {
            return Err(Error::invalid(
                "profile",
                format!("inf J(t)/t on the grid is {min_ratio}; standing assumption violated"),
            ));
        }
        Ok(ProfileJ {
            family: ProfileFamily::Custom(name.to_string()),
            eval,
            nondecreasing,
        })
    }

    /// The profile of the simplified kernel built from an isoperimetric
    /// profile: 1/J(s) = s^{m−1}/I(s)^m.
    pub fn from_iso(iso: &IsoProfile, m: u32) -> Result<Self, Error> {
        if m == 0 {
            return Err(Error::invalid("m", "order must be >= 1"));
        }
        if let Some(c) = iso.power_exponent() {
            // I = s^c: J = s^{cm - m + 1}, exponent ≤ 1 iff c ≤ 1
            return Self::power(c * m as f64 - m as f64 + 1.0);
        }
        let i = iso.clone();
        let mf = m as f64;
        Self::custom(
            &format!("{:?}^{m}/s^{}", iso.family, m - 1),
            move |s: f64| i.eval(s).powf(mf) / s.powf(mf - 1.0),
            true,
        )
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.eval)(s)
    }

    /// B(s) = ∫_s^1 dr/J(r). May be +∞ as s → 0 (γ = 1, L_Φ profiles).
    pub fn primitive_b(&self, s: f64) -> f64 {
        debug_assert!(s > 0.0 && s <= 1.0);
        match &self.family {
            ProfileFamily::Power(g) => {
                if *g == 1.0 {
                    -s.ln()
                } else {
                    (1.0 - s.powf(1.0 - g)) / (1.0 - g)
                }
            }
            ProfileFamily::LPhi(phi) => isoperimetry::l_phi_primitive(phi, s),
            ProfileFamily::Custom(_) => {
                let e = self.eval.clone();
                quad::adaptive(&move |r: f64| 1.0 / e(r), s, 1.0, 1e-13, 1e-11).0
            }
        }
    }

    /// ∫_x^y dr/J for 0 < x ≤ y ≤ 1, computed cancellation-free: the power
    /// form subtracts x^c and y^c directly (never 1 − s, which destroys
    /// precision when both endpoints are tiny and close).
    pub fn inv_integral(&self, x: f64, y: f64) -> f64 {
        debug_assert!(x > 0.0 && x <= y && y <= 1.0);
        match &self.family {
            ProfileFamily::Power(g) => {
                if *g == 1.0 {
                    (y / x).ln()
                } else {
                    let c = 1.0 - g;
                    (y.powf(c) - x.powf(c)) / c
                }
            }
            ProfileFamily::LPhi(_) | ProfileFamily::Custom(_) => {
                self.primitive_b(x) - self.primitive_b(y)
            }
        }
    }

    /// ∫_0^t dr/J; +∞ when the inverse integral diverges at 0.
    pub fn inv_integral_from_zero(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0 && t <= 1.0);
        match &self.family {
            ProfileFamily::Power(g) => {
                if *g >= 1.0 {
                    f64::INFINITY
                } else {
                    let c = 1.0 - g;
                    t.powf(c) / c
                }
            }
            ProfileFamily::LPhi(_) => f64::INFINITY,
            ProfileFamily::Custom(_) => {
                if self.inv_integral_finite() {
                    self.primitive_b(1e-12) - self.primitive_b(t)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Is ∫₀¹ dr/J finite?
    pub fn inv_integral_finite(&self) -> bool {
        match &self.family {
            ProfileFamily::Power(g) => *g < 1.0,
            ProfileFamily::LPhi(_) => false,
            ProfileFamily::Custom(_) => {
                // probe B along a shrinking sequence; divergence shows up as
                // unbounded growth
                let b6 = self.primitive_b(1e-6);
                let b9 = self.primitive_b(1e-9);
                (b9 - b6) < 0.05 * b9.abs().max(1.0)
            }
        }
    }
}

/// A kernel operator: one of the seven kinds used by the theory.
#[derive(Debug, Clone)]
pub enum OperatorSpec {
    /// Downstream kernel of order j with profile J.
    H { profile: ProfileJ, j: u32 },
    /// Upstream (associate) kernel of order j with profile J.
    R { profile: ProfileJ, j: u32 },
    /// Simplified downstream kernel: K^m_I f(t) = ∫_t^1 f(s) s^{m−1}/I(s)^m ds.
    K { iso: IsoProfile, m: u32 },
    /// Simplified upstream kernel: S^m_I f(t) = (t^{m−1}/I(t)^m) ∫_0^t f.
    S { iso: IsoProfile, m: u32 },
    /// John-domain kernel: Q^m_n f(t) = ∫_t^1 f(s) s^{m/n−1} ds.
    Q { n: u32, m: u32 },
    /// Maz'ya-class kernel: K^m with I = s^α for α < 1, and the iterated
    /// log kernel H^m_s for α = 1.
    T { alpha: f64, m: u32 },
    /// Product-space kernel with the Φ⁻¹ prefactor.
    P { phi: PhiSpec, m: u32 },
}

/// Reduced form every operator evaluates through.
enum Core {
    Down {
        profile: ProfileJ,
        j: u32,
        prefactor: Option<RealFn>,
    },
    Up {
        profile: ProfileJ,
        j: u32,
    },
}

impl OperatorSpec {
    pub fn order(&self) -> u32 {
        match self {
            OperatorSpec::H { j, .. } | OperatorSpec::R { j, .. } => *j,
            OperatorSpec::K { m, .. }
            | OperatorSpec::S { m, .. }
            | OperatorSpec::Q { m, .. }
            | OperatorSpec::T { m, .. }
            | OperatorSpec::P { m, .. } => *m,
        }
    }

    /// Does this operator map into nonincreasing functions (downstream kernels)?
    pub fn is_downstream(&self) -> bool {
        !matches!(self, OperatorSpec::R { .. } | OperatorSpec::S { .. } | OperatorSpec::P { .. })
    }

    /// The `(profile, order)` of this operator when it reduces to a plain
    /// downstream kernel without prefactor (H/K/Q/T); `None` for R/S/P.
    /// Used by the dual-estimate machinery, which pairs such kernels with
    /// their upstream associates.
    pub fn plain_downstream_core(&self) -> Result<Option<(ProfileJ, u32)>, Error> {
        Ok(match self.core()? {
            Core::Down {
                profile,
                j,
                prefactor: None,
            } => Some((profile, j)),
            _ => None,
        })
    }

    fn core(&self) -> Result<Core, Error> {
        if self.order() == 0 {
            return Err(Error::invalid("order", "must be >= 1"));
        }
        match self {
            OperatorSpec::H { profile, j } => Ok(Core::Down {
                profile: profile.clone(),
                j: *j,
                prefactor: None,
            }),
            OperatorSpec::R { profile, j } => Ok(Core::Up {
                profile: profile.clone(),
                j: *j,
            }),
            OperatorSpec::K { iso, m } => Ok(Core::Down {
                profile: ProfileJ::from_iso(iso, *m)?,
                j: 1,
                prefactor: None,
            }),
            OperatorSpec::S { iso, m } => Ok(Core::Up {
                profile: ProfileJ::from_iso(iso, *m)?,
                j: 1,
            }),
            OperatorSpec::Q { n, m } => {
                if *n < 2 {
                    return Err(Error::invalid("n", "Q needs n >= 2"));
                }
                // 1/J = s^{m/n - 1}
                Ok(Core::Down {
                    profile: ProfileJ::power(1.0 - *m as f64 / *n as f64)?,
                    j: 1,
                    prefactor: None,
                })
            }
            OperatorSpec::T { alpha, m } => {
                if !(*alpha > 0.0 && *alpha <= 1.0) {
                    return Err(Error::invalid("alpha", "T needs alpha in (0,1]"));
                }
                if *alpha < 1.0 {
                    Ok(Core::Down {
                        profile: ProfileJ::power(1.0 - *m as f64 * (1.0 - alpha))?,
                        j: 1,
                        prefactor: None,
                    })
                } else {
                    Ok(Core::Down {
                        profile: ProfileJ::power(1.0)?,
                        j: *m,
                        prefactor: None,
                    })
                }
            }
            OperatorSpec::P { phi, m } => {
                let p = phi.clone();
                let mf = *m as f64;
                let prefactor: RealFn = Arc::new(move |t: f64| {
                    let l = quad::log2s(t);
                    (p.inv(l) / l).powf(mf)
                });
                Ok(Core::Down {
                    profile: ProfileJ::power(1.0)?,
                    j: *m,
                    prefactor: Some(prefactor),
                })
            }
        }
    }
}

/// Exact downstream evaluation via the W-substitution: on each cell of f the
/// integrand is v·W^{j−1} dW, contributing v·(W^j difference)/j.
fn eval_down(profile: &ProfileJ, j: u32, f: &StepFunction, t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 1.0);
    let w = |s: f64| profile.inv_integral(t, s); // increasing in s ≥ t
    let jf = j as f64;
    let mut acc = 0.0;
    for (i, win) in f.breakpoints().windows(2).enumerate() {
        let (x, y) = (win[0].max(t), win[1]);
        if y <= t {
            continue;
        }
        let v = f.values()[i];
        if v > 0.0 {
            acc += v * (w(y).powi(j as i32) - w(x.max(t)).powi(j as i32));
        }
    }
    acc / (quad::factorial(j - 1) * jf)
}

/// Upstream evaluation: exact for j = 1, per-cell adaptive quadrature of the
/// smooth kernel `(B(s) − B(t))^{j−1}` otherwise.
fn eval_up(profile: &ProfileJ, j: u32, f: &StepFunction, t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 1.0);
    let jt = profile.eval(t);
    if j == 1 {
        return f.integrate_to(t) / jt;
    }
    let mut acc = 0.0;
    for (i, win) in f.breakpoints().windows(2).enumerate() {
        let (x, y) = (win[0], win[1].min(t));
        if x >= t {
            break;
        }
        let v = f.values()[i];
        if v > 0.0 {
            let kernel = |s: f64| profile.inv_integral(s, t).powi(j as i32 - 1);
            let (seg, _) = quad::adaptive(&kernel, x, y, 1e-13, 1e-11);
            acc += v * seg;
        }
    }
    acc / (quad::factorial(j - 1) * jt)
}

/// Pointwise value of the operator at `t ∈ (0,1)`.
pub fn eval_point(op: &OperatorSpec, f: &StepFunction, t: f64) -> Result<f64, Error> {
    let core = op.core()?;
    Ok(match core {
        Core::Down {
            profile,
            j,
            prefactor,
        } => {
            let base = eval_down(&profile, j, f, t);
            match prefactor {
                Some(p) => p(t) * base,
                None => base,
            }
        }
        Core::Up { profile, j } => eval_up(&profile, j, f, t),
    })
}

/// Apply the operator to `f`, sampled on the evaluation grid (cell-midpoint
/// values). Downstream outputs are nonincreasing, so midpoint sampling keeps
/// that shape.
pub fn apply(op: &OperatorSpec, f: &StepFunction, grid: &Grid) -> Result<StepFunction, Error> {
    let bp = grid.breakpoints();
    let mut values = Vec::with_capacity(bp.len() - 1);
    for w in bp.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        values.push(eval_point(op, f, mid)?);
    }
    StepFunction::new(bp, values)
}

/// Closed form for the downstream kernel on a characteristic function:
/// `H^j_J χ_(0,a) (t) = χ_(0,a)(t) · (1/j!) (∫_t^a dr/J)^j`.
pub fn char_closed_form(profile: &ProfileJ, j: u32, a: f64, t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 1.0 && a > 0.0 && a <= 1.0);
    if t >= a {
        return 0.0;
    }
    profile.inv_integral(t, a).powi(j as i32) / quad::factorial(j)
}

/// Split points for outer quadrature: the integrand is smooth between the
/// breakpoints of the step factors.
fn union_breakpoints(f: &StepFunction, g: &StepFunction) -> Vec<f64> {
    let mut pts: Vec<f64> = f
        .breakpoints()
        .iter()
        .chain(g.breakpoints())
        .cloned()
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    pts
}

/// |∫ f·(downstream^j g) − ∫ g·(upstream^j f)| — the two kernels are
/// associate, so the residual is quadrature noise only.
pub fn check_associate_identity(
    profile: &ProfileJ,
    j: u32,
    f: &StepFunction,
    g: &StepFunction,
) -> Result<f64, Error> {
    if j == 0 {
        return Err(Error::invalid("j", "order must be >= 1"));
    }
    let pts = union_breakpoints(f, g);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for w in pts.windows(2) {
        let (x, y) = (w[0], w[1]);
        let vf = f.value_at(0.5 * (x + y));
        let vg = g.value_at(0.5 * (x + y));
        if vf > 0.0 {
            let (seg, _) = quad::adaptive(
                &|s: f64| eval_down(profile, j, g, s),
                x.max(1e-300),
                y,
                1e-12,
                1e-10,
            );
            lhs += vf * seg;
        }
        if vg > 0.0 {
            let (seg, _) = quad::adaptive(
                &|s: f64| eval_up(profile, j, f, s),
                x.max(1e-300),
                y,
                1e-12,
                1e-10,
            );
            rhs += vg * seg;
        }
    }
    Ok((lhs - rhs).abs())
}

/// Compare the single-kernel form of order `j` against the literal j-fold
/// iteration of the order-1 kernel, evaluated by nested adaptive quadrature
/// (an independent code path), at the given points. Returns the max deviation.
pub fn check_composition(
    profile: &ProfileJ,
    j: u32,
    f: &StepFunction,
    points: &[f64],
) -> Result<f64, Error> {
    if j < 1 {
        return Err(Error::invalid("j", "order must be >= 1"));
    }
    // iterated(level, t) = (order-1 kernel applied `level` times to f)(t)
    fn iterated(profile: &ProfileJ, level: u32, f: &StepFunction, t: f64) -> f64 {
        if level == 1 {
            return eval_down(profile, 1, f, t);
        }
        let inner = |s: f64| iterated(profile, level - 1, f, s) / profile.eval(s);
        quad::adaptive(&inner, t, 1.0, 1e-11, 1e-9).0
    }
    let mut max_dev = 0.0f64;
    for &t in points {
        let direct = eval_down(profile, j, f, t);
        let composed = iterated(profile, j, f, t);
        max_dev = max_dev.max((direct - composed).abs());
    }
    Ok(max_dev)
}

/// Ratio interval of ‖H-form‖_Y / ‖K-form‖_Y over the given test inputs.
/// Refuses profiles that fail the averaging property ∫₀^s dr/I ≈ s/I(s):
/// without it the equivalence genuinely breaks.
pub fn check_hk_equivalence(
    iso: &IsoProfile,
    m: u32,
    inputs: &[StepFunction],
    y: &SpaceSpec,
    grid: &Grid,
) -> Result<(f64, f64), Error> {
    let aprox = isoperimetry::check_aprox(iso);
    if !aprox.holds {
        return Err(Error::OutOfScope(format!(
            "profile {:?} fails the averaging property; the two kernels need not be equivalent",
            iso.family
        )));
    }
    let profile_i = match iso.power_exponent() {
        Some(c) => ProfileJ::power(c)?,
        None => {
            let i = iso.clone();
            ProfileJ::custom(&format!("{:?}", iso.family), move |s| i.eval(s), true)?
        }
    };
    let h_op = OperatorSpec::H {
        profile: profile_i,
        j: m,
    };
    let k_op = OperatorSpec::K {
        iso: iso.clone(),
        m,
    };
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for f in inputs {
        let hn = rinorm::norm(y, &apply(&h_op, f, grid)?)?.value;
        let kn = rinorm::norm(y, &apply(&k_op, f, grid)?)?.value;
        if kn > 0.0 {
            let r = hn / kn;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Ok((lo, hi))
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

fn profile_to_json(p: &ProfileJ) -> serde_json::Value {
    match &p.family {
        ProfileFamily::Power(g) if *g == 0.0 => serde_json::json!({"family": "one"}),
        ProfileFamily::Power(g) => serde_json::json!({"family": "power", "gamma": g}),
        ProfileFamily::LPhi(phi) => serde_json::json!({"family": "l_phi", "phi": phi}),
        ProfileFamily::Custom(name) => serde_json::json!({"family": "custom", "name": name}),
    }
}

fn profile_from_json(v: &serde_json::Value) -> Result<ProfileJ, String> {
    let fam = v
        .get("family")
        .and_then(|f| f.as_str())
        .ok_or("profile: missing field `family`")?;
    match fam {
        "one" => Ok(ProfileJ::one()),
        "power" => {
            let g = v
                .get("gamma")
                .and_then(|g| g.as_f64())
                .ok_or("power profile: missing numeric `gamma`")?;
            ProfileJ::power(g).map_err(|e| e.to_string())
        }
        "l_phi" => {
            let phi: PhiSpec = serde_json::from_value(
                v.get("phi").cloned().ok_or("l_phi profile: missing `phi`")?,
            )
            .map_err(|e| e.to_string())?;
            Ok(ProfileJ::l_phi(phi))
        }
        other => Err(format!("profile family `{other}` has no JSON form")),
    }
}

fn iso_to_json(i: &IsoProfile) -> serde_json::Value {
    match &i.family {
        IsoFamily::John(n) => serde_json::json!({"family": "john", "n": n}),
        IsoFamily::Mazya(a) => serde_json::json!({"family": "mazya", "alpha": a}),
        IsoFamily::LPhi(phi) => serde_json::json!({"family": "l_phi", "phi": phi}),
        IsoFamily::Custom(name) => serde_json::json!({"family": "custom", "name": name}),
    }
}

fn iso_from_json(v: &serde_json::Value) -> Result<IsoProfile, String> {
    let fam = v
        .get("family")
        .and_then(|f| f.as_str())
        .ok_or("iso profile: missing field `family`")?;
    match fam {
        "john" => {
            let n = v
                .get("n")
                .and_then(|n| n.as_u64())
                .ok_or("john profile: missing integer `n`")?;
            IsoProfile::john(n as u32).map_err(|e| e.to_string())
        }
        "mazya" => {
            let a = v
                .get("alpha")
                .and_then(|a| a.as_f64())
                .ok_or("mazya profile: missing numeric `alpha`")?;
            IsoProfile::mazya(a).map_err(|e| e.to_string())
        }
        "l_phi" => {
            let phi: PhiSpec = serde_json::from_value(
                v.get("phi").cloned().ok_or("l_phi profile: missing `phi`")?,
            )
            .map_err(|e| e.to_string())?;
            Ok(IsoProfile::l_phi(phi))
        }
        other => Err(format!("iso family `{other}` has no JSON form")),
    }
}

impl Serialize for OperatorSpec {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v = match self {
            OperatorSpec::H { profile, j } => {
                serde_json::json!({"kind": "H", "j": j, "profile": profile_to_json(profile)})
            }
            OperatorSpec::R { profile, j } => {
                serde_json::json!({"kind": "R", "j": j, "profile": profile_to_json(profile)})
            }
            OperatorSpec::K { iso, m } => {
                serde_json::json!({"kind": "K", "m": m, "iso": iso_to_json(iso)})
            }
            OperatorSpec::S { iso, m } => {
                serde_json::json!({"kind": "S", "m": m, "iso": iso_to_json(iso)})
            }
            OperatorSpec::Q { n, m } => serde_json::json!({"kind": "Q", "m": m, "n": n}),
            OperatorSpec::T { alpha, m } => {
                serde_json::json!({"kind": "T", "m": m, "alpha": alpha})
            }
            OperatorSpec::P { phi, m } => serde_json::json!({"kind": "P", "m": m, "phi": phi}),
        };
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OperatorSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| D::Error::custom("operator: missing field `kind`"))?;
        let int_field = |name: &str| -> Result<u32, D::Error> {
            v.get(name)
                .and_then(|x| x.as_u64())
                .map(|x| x as u32)
                .ok_or_else(|| D::Error::custom(format!("operator: missing integer `{name}`")))
        };
        match kind {
            "H" | "R" => {
                let j = int_field("j")?;
                let profile = profile_from_json(
                    v.get("profile")
                        .ok_or_else(|| D::Error::custom("operator: missing `profile`"))?,
                )
                .map_err(D::Error::custom)?;
                Ok(if kind == "H" {
                    OperatorSpec::H { profile, j }
                } else {
                    OperatorSpec::R { profile, j }
                })
            }
            "K" | "S" => {
                let m = int_field("m")?;
                let iso = iso_from_json(
                    v.get("iso")
                        .ok_or_else(|| D::Error::custom("operator: missing `iso`"))?,
                )
                .map_err(D::Error::custom)?;
                Ok(if kind == "K" {
                    OperatorSpec::K { iso, m }
                } else {
                    OperatorSpec::S { iso, m }
                })
            }
            "Q" => Ok(OperatorSpec::Q {
                n: int_field("n")?,
                m: int_field("m")?,
            }),
            "T" => {
                let alpha = v
                    .get("alpha")
                    .and_then(|a| a.as_f64())
                    .ok_or_else(|| D::Error::custom("operator T: missing numeric `alpha`"))?;
                Ok(OperatorSpec::T {
                    alpha,
                    m: int_field("m")?,
                })
            }
            "P" => {
                let phi: PhiSpec = serde_json::from_value(
                    v.get("phi")
                        .cloned()
                        .ok_or_else(|| D::Error::custom("operator P: missing `phi`"))?,
                )
                .map_err(|e| D::Error::custom(e.to_string()))?;
                Ok(OperatorSpec::P {
                    phi,
                    m: int_field("m")?,
                })
            }
            other => Err(D::Error::custom(format!("unknown operator kind `{other}`"))),
        }
    }
}
