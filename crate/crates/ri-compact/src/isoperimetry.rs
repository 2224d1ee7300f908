//! Isoperimetric profiles of the model domains: the Φ-machinery of product
//! probability measures (density ∝ e^{−Φ(|x|)} per coordinate), the explicit
//! profile L_Φ, the one-dimensional profile I_Φ obtained by inverting the
//! distribution tail F_Φ, power profiles for John domains and Maz'ya classes,
//! compatibility checks, and the explicit Maz'ya model domain.

use crate::quad;
use crate::Error;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Family tag of a Young-type function Φ.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiFamily {
    /// Φ(t) = t²/2 (Gauss measure).
    Gauss,
    /// Φ(t) = t^β/β, β ≥ 1 (Boltzmann measure).
    Boltzmann(f64),
    Custom(String),
}

/// A strictly increasing convex Φ with Φ(0) = 0 and concave √Φ, together
/// with its derivative, inverse, and the normalization constant c_Φ making
/// c_Φ e^{−Φ(|r|)} a probability density on ℝ. Evaluators are immutable
/// after construction; c_Φ is computed once at build time.
#[derive(Clone)]
pub struct PhiSpec {
    pub family: PhiFamily,
    phi: RealFn,
    dphi: RealFn,
    inv: RealFn,
    c_phi: f64,
}

impl fmt::Debug for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhiSpec({:?}, c={})", self.family, self.c_phi)
    }
}

impl PartialEq for PhiSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

/// c_Φ = 1/(2∫₀^∞ e^{−Φ}), by adaptive quadrature with an analytic tail
/// majorant: for convex Φ, ∫_T^∞ e^{−Φ} ≤ e^{−Φ(T)}/Φ′(T).
fn normalization_constant(phi: &RealFn, dphi: &RealFn) -> f64 {
    let mut t = 4.0;
    while (-phi(t)).exp() / dphi(t).max(1e-300) > 1e-16 {
        t += 4.0;
        if t > 1e4 {
            break;
        }
    }
    let (half, _) = quad::adaptive(&|r: f64| (-phi(r)).exp(), 0.0, t, 1e-14, 1e-13);
    let tail = (-phi(t)).exp() / dphi(t).max(1e-300);
    1.0 / (2.0 * (half + tail))
}

impl PhiSpec {
    pub fn gauss() -> Self {
        let phi: RealFn = Arc::new(|t: f64| 0.5 * t * t);
        let dphi: RealFn = Arc::new(|t: f64| t);
        let inv: RealFn = Arc::new(|y: f64| (2.0 * y).sqrt());
        let c_phi = normalization_constant(&phi, &dphi);
        PhiSpec {
            family: PhiFamily::Gauss,
            phi,
            dphi,
            inv,
            c_phi,
        }
    }

    pub fn boltzmann(beta: f64) -> Result<Self, Error> {
        if !(beta >= 1.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", "must be finite and >= 1"));
        }
        let phi: RealFn = Arc::new(move |t: f64| t.powf(beta) / beta);
        let dphi: RealFn = Arc::new(move |t: f64| t.powf(beta - 1.0));
        let inv: RealFn = Arc::new(move |y: f64| (beta * y).powf(1.0 / beta));
        let c_phi = normalization_constant(&phi, &dphi);
        Ok(PhiSpec {
            family: PhiFamily::Boltzmann(beta),
            phi,
            dphi,
            inv,
            c_phi,
        })
    }

    /// User-supplied Φ. The evaluators are validated (`validate`) before the
    /// spec can be used by anything downstream.
    pub fn custom(
        name: &str,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dphi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, Error> {
        let phi: RealFn = Arc::new(phi);
        let dphi: RealFn = Arc::new(dphi);
        let inv: RealFn = Arc::new(inv);
        let c_phi = normalization_constant(&phi, &dphi);
        let spec = PhiSpec {
            family: PhiFamily::Custom(name.to_string()),
            phi,
            dphi,
            inv,
            c_phi,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn phi(&self, t: f64) -> f64 {
        (self.phi)(t.abs())
    }

    pub fn dphi(&self, t: f64) -> f64 {
        (self.dphi)(t.abs())
    }

    pub fn inv(&self, y: f64) -> f64 {
        (self.inv)(y)
    }

    pub fn c_phi(&self) -> f64 {
        self.c_phi
    }

    /// Check the structural invariants on sampled grids: Φ(0) = 0, Φ strictly
    /// increasing and convex, √Φ concave, and Φ∘Φ⁻¹ = id to 1e−10 relative.
    pub fn validate(&self) -> Result<(), Error> {
        if self.phi(0.0).abs() > 1e-12 {
            return Err(Error::invalid("phi", "Φ(0) must be 0"));
        }
        let grid: Vec<f64> = (0..200).map(|k| 1e-3 * 1.06f64.powi(k)).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| self.phi(t)).collect();
        for w in vals.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid("phi", "must be strictly increasing"));
            }
        }
        // convexity of Φ and concavity of √Φ via difference quotients
        for i in 1..grid.len() - 1 {
            let d1 = (vals[i] - vals[i - 1]) / (grid[i] - grid[i - 1]);
            let d2 = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i]);
            if d2 < d1 * (1.0 - 1e-9) {
                return Err(Error::invalid("phi", "must be convex"));
            }
            let s1 = (vals[i].sqrt() - vals[i - 1].sqrt()) / (grid[i] - grid[i - 1]);
            let s2 = (vals[i + 1].sqrt() - vals[i].sqrt()) / (grid[i + 1] - grid[i]);
            if s2 > s1 * (1.0 + 1e-9) {
                return Err(Error::invalid("phi", "√Φ must be concave"));
            }
        }
        for k in -6..=6 {
            let y = 10f64.powi(k);
            let r = self.phi(self.inv(y));
            if (r - y).abs() > 1e-10 * y {
                return Err(Error::invalid("phi_inv", format!("Φ(Φ⁻¹({y})) = {r}")));
            }
        }
        Ok(())
    }
}

/// L_Φ(t) = t·Φ′(Φ⁻¹(log(2/t))) — the explicit, closed-form profile of the
/// product probability space.
pub fn l_phi(phi: &PhiSpec, t: f64) -> f64 {
    debug_assert!(t > 0.0 && t <= 1.0);
    t * phi.dphi(phi.inv(quad::log2s(t)))
}

/// ∫_s^1 dr/L_Φ = Φ⁻¹(log(2/s)) − Φ⁻¹(log 2): the primitive that makes
/// kernel operators with profile L_Φ exactly integrable.
pub fn l_phi_primitive(phi: &PhiSpec, s: f64) -> f64 {
    phi.inv(quad::log2s(s)) - phi.inv(2f64.ln())
}

/// Tail distribution F_Φ(t) = ∫_t^∞ c_Φ e^{−Φ(|r|)} dr, strictly decreasing
/// from 1 to 0, with F_Φ(0) = 1/2 by symmetry.
pub fn f_phi(phi: &PhiSpec, t: f64) -> f64 {
    if t < 0.0 {
        return 1.0 - f_phi(phi, -t);
    }
    let mut hi = t + 4.0;
    while phi.c_phi() * (-phi.phi(hi)).exp() / phi.dphi(hi).max(1e-300) > 1e-17 {
        hi += 4.0;
        if hi > 1e4 {
            break;
        }
    }
    let (v, _) = quad::adaptive(
        &|r: f64| (-phi.phi(r)).exp(),
        t,
        hi,
        1e-14,
        1e-12,
    );
    let tail = (-phi.phi(hi)).exp() / phi.dphi(hi).max(1e-300);
    phi.c_phi() * (v + tail)
}

/// F_Φ⁻¹ by bisection (kink-safe; Φ′ may vanish or blow up at 0).
pub fn f_phi_inv(phi: &PhiSpec, u: f64) -> Result<f64, Error> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::invalid("u", "must lie in (0,1)"));
    }
    let mut lo = -1.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while f_phi(phi, lo) < u {
        lo *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::BudgetExhausted {
                context: "tail-quantile bracketing (left)".into(),
                value: lo,
                error_bound: f64::INFINITY,
            });
        }
    }
    while f_phi(phi, hi) > u {
        hi *= 2.0;
        guard += 1;
        if guard > 120 {
            return Err(Error::BudgetExhausted {
                context: "tail-quantile bracketing (right)".into(),
                value: hi,
                error_bound: f64::INFINITY,
            });
        }
    }
    // F is strictly decreasing: F(lo) ≥ u ≥ F(hi)
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f_phi(phi, mid) >= u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// I_Φ(t) = c_Φ e^{−Φ(|F_Φ⁻¹(t)|)}, the one-dimensional isoperimetric
/// profile of the measure with density c_Φ e^{−Φ(|r|)}.
pub fn i_phi(phi: &PhiSpec, t: f64) -> Result<f64, Error> {
    let x = f_phi_inv(phi, t)?;
    Ok(phi.c_phi() * (-phi.phi(x)).exp())
}

/// min/max of I_Φ(t)/L_Φ(t) over a log grid of `points` values of
/// t ∈ [1e−6, 1/2]. The two profiles are equivalent; the interval is the
/// empirical constant, asserted only to be bounded and refinement-stable.
pub fn check_iso_equivalence(phi: &PhiSpec, points: usize) -> Result<(f64, f64), Error> {
    let n = points.max(1);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 0..n {
        let t = if n == 1 {
            0.5
        } else {
            1e-6 * (0.5 / 1e-6f64).powf(k as f64 / (n - 1) as f64)
        };
        let ratio = i_phi(phi, t)? / l_phi(phi, t);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

// ---------------------------------------------------------------------------
// Isoperimetric lower-bound profiles
// ---------------------------------------------------------------------------

/// Family tag of an isoperimetric lower-bound profile I on (0,1].
#[derive(Debug, Clone, PartialEq)]
pub enum IsoFamily {
    /// John domain in ℝⁿ: I(t) = t^{1/n'}, n' = n/(n−1).
    John(u32),
    /// Maz'ya class: I(t) = t^α.
    Mazya(f64),
    /// Product probability space: I = L_Φ.
    LPhi(PhiSpec),
    Custom(String),
}

/// An isoperimetric profile: evaluator plus symbolic family tag. The tag is
/// what the symbolic checks (compatibility, endpoint rules) consume; the
/// evaluator feeds the numeric ones.
#[derive(Clone)]
pub struct IsoProfile {
    pub family: IsoFamily,
    eval: RealFn,
}

impl fmt::Debug for IsoProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsoProfile({:?})", self.family)
    }
}

impl IsoProfile {
    pub fn john(n: u32) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::invalid("n", "john domains need n >= 2"));
        }
        let c = 1.0 - 1.0 / n as f64;
        Ok(IsoProfile {
            family: IsoFamily::John(n),
            eval: Arc::new(move |t: f64| t.powf(c)),
        })
    }

    pub fn mazya(alpha: f64) -> Result<Self, Error> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid("alpha", "must lie in (0,1]"));
        }
        Ok(IsoProfile {
            family: IsoFamily::Mazya(alpha),
            eval: Arc::new(move |t: f64| t.powf(alpha)),
        })
    }

    pub fn l_phi(phi: PhiSpec) -> Self {
        let p = phi.clone();
        IsoProfile {
            family: IsoFamily::LPhi(phi),
            eval: Arc::new(move |t: f64| l_phi(&p, t)),
        }
    }

    pub fn custom(name: &str, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        IsoProfile {
            family: IsoFamily::Custom(name.to_string()),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Power exponent when the profile is exactly a power t^c.
    pub fn power_exponent(&self) -> Option<f64> {
        match &self.family {
            IsoFamily::John(n) => Some(1.0 - 1.0 / *n as f64),
            IsoFamily::Mazya(a) => Some(*a),
            _ => None,
        }
    }

    /// Asymptotic shape near 0 as `(c, d)` meaning I(t) ≈ t^c log(2/t)^d,
    /// when the family makes that symbolic. Boltzmann L_Φ ≈ t·(β log 2/t)^{(β−1)/β}.
    pub fn asymptotic_exponents(&self) -> Option<(f64, f64)> {
        match &self.family {
            IsoFamily::John(n) => Some((1.0 - 1.0 / *n as f64, 0.0)),
            IsoFamily::Mazya(a) => Some((*a, 0.0)),
            IsoFamily::LPhi(phi) => match phi.family {
                PhiFamily::Gauss => Some((1.0, 0.5)),
                PhiFamily::Boltzmann(beta) => Some((1.0, (beta - 1.0) / beta)),
                PhiFamily::Custom(_) => None,
            },
            IsoFamily::Custom(_) => None,
        }
    }

    /// ∫₀^s dr/I(r); +∞ when divergent. Closed form for powers and the
    /// (always divergent) L_Φ profiles; numerical divergence detection for
    /// custom profiles.
    pub fn integral_inv_to(&self, s: f64) -> f64 {
        debug_assert!(s > 0.0 && s <= 1.0);
        if let Some(c) = self.power_exponent() {
            return if c < 1.0 {
                s.powf(1.0 - c) / (1.0 - c)
            } else {
                f64::INFINITY
            };
        }
        if let IsoFamily::LPhi(_) = self.family {
            // ∫_0 dr/L_Φ = lim Φ⁻¹(log 2/r) = ∞ for every admissible Φ
            return f64::INFINITY;
        }
        // custom: integrate ∫_ε^s with ε ↓ 0 and detect (non-)convergence
        let integrand = |r: f64| 1.0 / self.eval(r).max(1e-300);
        let mut total = 0.0;
        let mut hi = s;
        for _ in 0..60 {
            let lo = hi / 4.0;
            let (seg, _) = quad::adaptive(&integrand, lo, hi, 1e-13, 1e-10);
            total += seg;
            if seg < 1e-11 * total.max(1.0) {
                return total;
            }
            hi = lo;
            if hi < 1e-300 {
                break;
            }
        }
        f64::INFINITY
    }

    /// Is ∫₀¹ ds/I finite? (Triggers the V = W equivalence note.)
    pub fn inv_integral_finite(&self) -> bool {
        self.integral_inv_to(1.0).is_finite()
    }
}

/// Report of the two-sided comparison ∫₀^s dr/I ≈ s/I(s).
#[derive(Debug, Clone, PartialEq)]
pub struct AproxReport {
    /// min/max of the ratio over the sample grid, when the integral converges.
    pub ratio: Option<(f64, f64)>,
    /// True iff the ratio stays in a refinement-stable bounded interval.
    pub holds: bool,
}

/// Check the averaging property ∫₀^s dr/I ≈ s/I(s) over s ∈ [1e−6, 1]:
/// exact ratio 1/(1−c) for power profiles; divergence (flag false) for I(s)=s
/// and the L_Φ profiles; two-resolution stability check otherwise.
pub fn check_aprox(profile: &IsoProfile) -> AproxReport {
    let ratios = |n: usize| -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for k in 0..n {
            let s = 1e-6 * (1.0 / 1e-6f64).powf(k as f64 / (n - 1) as f64);
            let num = profile.integral_inv_to(s.min(1.0));
            if !num.is_finite() {
                return None;
            }
            let r = num * profile.eval(s.min(1.0)) / s.min(1.0);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Some((lo, hi))
    };
    match ratios(40) {
        None => AproxReport {
            ratio: None,
            holds: false,
        },
        Some((lo, hi)) => {
            let stable = match ratios(80) {
                Some((lo2, hi2)) => {
                    (lo2 - lo).abs() <= 0.05 * lo.abs().max(1e-12)
                        && (hi2 - hi).abs() <= 0.05 * hi.abs().max(1e-12)
                }
                None => false,
            };
            AproxReport {
                ratio: Some((lo, hi)),
                holds: stable && hi.is_finite(),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Domains and compatibility
// ---------------------------------------------------------------------------

/// A concrete domain/measure family the classifier knows about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    /// Bounded John domain in ℝⁿ with Lebesgue measure.
    John { n: u32 },
    /// The whole Maz'ya class of domains with profile ≥ C t^α.
    MazyaClass { alpha: f64, n: u32 },
    /// The explicit model domain realizing the Maz'ya class sharpness.
    MazyaModel { alpha: f64, n: u32 },
    /// ℝⁿ with the product probability measure built from Φ.
    Product { phi: PhiSpec, n: u32 },
}

impl DomainSpec {
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            DomainSpec::John { n } => {
                if *n < 2 {
                    return Err(Error::invalid("n", "john domains need n >= 2"));
                }
            }
            DomainSpec::MazyaClass { alpha, n } | DomainSpec::MazyaModel { alpha, n } => {
                if *n < 2 {
                    return Err(Error::invalid("n", "mazya domains need n >= 2"));
                }
                let lo = 1.0 - 1.0 / *n as f64;
                if !(*alpha >= lo && *alpha <= 1.0) {
                    return Err(Error::invalid(
                        "alpha",
                        format!("must lie in [1/n', 1] = [{lo}, 1]"),
                    ));
                }
            }
            DomainSpec::Product { phi, n } => {
                if *n < 1 {
                    return Err(Error::invalid("n", "product spaces need n >= 1"));
                }
                phi.validate()?;
            }
        }
        Ok(())
    }

    /// The profile the classification theorems attach to this domain.
    pub fn canonical_profile(&self) -> Result<IsoProfile, Error> {
        match self {
            DomainSpec::John { n } => IsoProfile::john(*n),
            DomainSpec::MazyaClass { alpha, .. } | DomainSpec::MazyaModel { alpha, .. } => {
                IsoProfile::mazya(*alpha)
            }
            DomainSpec::Product { phi, .. } => Ok(IsoProfile::l_phi(phi.clone())),
        }
    }
}

/// Outcome of the symbolic smallness comparison (C3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C3 {
    Holds,
    Fails,
    OutOfScope,
}

/// Compatibility report for a (domain, profile) pair: C1 (I nondecreasing)
/// and C2 (inf I(t)/t > 0) numerically on the grid, C3 (I bounded above by
/// the domain's profile near 0) symbolically via exponent comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: C3,
}

pub fn check_compatible(domain: &DomainSpec, profile: &IsoProfile) -> Result<CompatReport, Error> {
    domain.validate()?;
    let grid: Vec<f64> = (0..=64)
        .map(|k| 1e-8f64.powf(1.0 - k as f64 / 64.0))
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&t| profile.eval(t)).collect();
    let c1 = vals.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    // C2: I(t)/t bounded away from 0 — reject profiles whose ratio decays
    // monotonically toward 0 at the left end of the grid
    let ratios: Vec<f64> = grid.iter().zip(&vals).map(|(&t, &v)| v / t).collect();
    let c2 = ratios.iter().all(|r| *r > 0.0)
        && !(ratios[0] < 1e-6 && ratios[0] < 0.5 * ratios[ratios.len() / 2]);
    let c3 = match (profile.asymptotic_exponents(), domain_exponents(domain)) {
        (Some((ci, di)), Some((cd, dd))) => {
            if ci > cd + 1e-15 || (ci == cd && di <= dd + 1e-15) {
                C3::Holds
            } else {
                C3::Fails
            }
        }
        _ => C3::OutOfScope,
    };
    Ok(CompatReport { c1, c2, c3 })
}

/// Asymptotic `(power, log-power)` of the domain's canonical profile.
fn domain_exponents(domain: &DomainSpec) -> Option<(f64, f64)> {
    match domain {
        DomainSpec::John { n } => Some((1.0 - 1.0 / *n as f64, 0.0)),
        DomainSpec::MazyaClass { alpha, .. } | DomainSpec::MazyaModel { alpha, .. } => {
            Some((*alpha, 0.0))
        }
        DomainSpec::Product { phi, .. } => match phi.family {
            PhiFamily::Gauss => Some((1.0, 0.5)),
            PhiFamily::Boltzmann(beta) => Some((1.0, (beta - 1.0) / beta)),
            PhiFamily::Custom(_) => None,
        },
    }
}

// ---------------------------------------------------------------------------
// Maz'ya model domain
// ---------------------------------------------------------------------------

/// Volume of the unit ball in ℝ^d (d small).
pub fn unit_ball_volume(d: u32) -> f64 {
    // κ_d = π^{d/2} / Γ(d/2 + 1), with half-integer Γ in closed form
    let pi = std::f64::consts::PI;
    if d % 2 == 0 {
        let k = d / 2;
        pi.powi(k as i32) / quad::factorial(k)
    } else {
        // Γ(k + 3/2) = (2k+2)!/(4^{k+1} (k+1)!) √π with k = (d-1)/2
        let k = (d - 1) / 2;
        let gamma = quad::factorial(2 * k + 2) / (4f64.powi(k as i32 + 1) * quad::factorial(k + 1))
            * pi.sqrt();
        pi.powi(k as i32) * pi.sqrt() / gamma
    }
}

/// The explicit rotationally symmetric domain of unit volume whose
/// isoperimetric profile realizes the Maz'ya class J_α: a body of revolution
/// about the x_n axis with radius η_α(r) at height r ∈ (0, L_α).
#[derive(Debug, Clone)]
pub struct MazyaModelDomain {
    pub alpha: f64,
    pub n: u32,
    /// Axis length: 1/(1−α), or ∞ when α = 1.
    pub length: f64,
}

pub fn mazya_model_domain(alpha: f64, n: u32) -> Result<MazyaModelDomain, Error> {
    DomainSpec::MazyaModel { alpha, n }.validate()?;
    let length = if alpha == 1.0 {
        f64::INFINITY
    } else {
        1.0 / (1.0 - alpha)
    };
    Ok(MazyaModelDomain { alpha, n, length })
}

impl MazyaModelDomain {
    /// Cross-section radius η_α(r).
    pub fn eta(&self, r: f64) -> f64 {
        let nm1 = (self.n - 1) as f64;
        let kappa = unit_ball_volume(self.n - 1);
        let base = kappa.powf(-1.0 / nm1);
        if self.alpha == 1.0 {
            base * (-r / nm1).exp()
        } else {
            let a = self.alpha;
            base * (1.0 - (1.0 - a) * r).powf(a / ((1.0 - a) * nm1))
        }
    }

    /// Volume above height t: M_α(t) = (1−(1−α)t)^{1/(1−α)}, or e^{−t}.
    pub fn level_volume(&self, t: f64) -> f64 {
        if self.alpha == 1.0 {
            (-t).exp()
        } else {
            (1.0 - (1.0 - self.alpha) * t).max(0.0).powf(1.0 / (1.0 - self.alpha))
        }
    }

    /// ∫_t^{L_α} κ_{n−1} η(r)^{n−1} dr by adaptive quadrature — must agree
    /// with `level_volume(t)`; `volume_by_quadrature() = level at t = 0 = 1`.
    pub fn level_volume_by_quadrature(&self, t: f64) -> f64 {
        let kappa = unit_ball_volume(self.n - 1);
        let nm1 = (self.n - 1) as f64;
        let integrand = |r: f64| kappa * self.eta(r).powf(nm1);
        let hi = if self.length.is_finite() {
            self.length
        } else {
            // e^{-r} tail below 1e-16 at r = 40
            40.0
        };
        let (v, _) = quad::adaptive(&integrand, t, hi, 1e-12, 1e-11);
        v
    }

    pub fn volume_by_quadrature(&self) -> f64 {
        self.level_volume_by_quadrature(0.0)
    }
}

// ---------------------------------------------------------------------------
// Growth regime of Φ
// ---------------------------------------------------------------------------

/// The limit of s/Φ(s) as s → ∞ (exists by convexity: the ratio is
/// nonincreasing).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    ZeroLimit,
    PositiveLimit(f64),
}

/// Classify lim s/Φ(s) by walking s = 2^k until the ratio stabilizes
/// (relative change < 1e−6) or is certifiably heading to 0.
pub fn phi_regime(phi: &PhiSpec) -> Result<Regime, Error> {
    let mut prev = f64::INFINITY;
    for k in 0..400 {
        let s = 2f64.powi(k);
        let r = s / phi.phi(s).max(1e-300);
        if r > prev * (1.0 + 1e-9) {
            return Err(Error::invalid("phi", "s/Φ(s) must be nonincreasing"));
        }
        if r < 1e-9 {
            return Ok(Regime::ZeroLimit);
        }
        if (prev - r).abs() <= 1e-6 * r {
            return Ok(Regime::PositiveLimit(r));
        }
        prev = r;
    }
    Err(Error::BudgetExhausted {
        context: "phi_regime: ratio did not stabilize".into(),
        value: prev,
        error_bound: f64::INFINITY,
    })
}

// ---------------------------------------------------------------------------
// JSON encoding for PhiSpec: {"family":"gauss"} | {"family":"boltzmann","beta":1.5}
// ---------------------------------------------------------------------------

impl Serialize for PhiSpec {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v = match &self.family {
            PhiFamily::Gauss => serde_json::json!({"family": "gauss"}),
            PhiFamily::Boltzmann(beta) => serde_json::json!({"family": "boltzmann", "beta": beta}),
            PhiFamily::Custom(name) => serde_json::json!({"family": "custom", "name": name}),
        };
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PhiSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        let fam = v
            .get("family")
            .and_then(|f| f.as_str())
            .ok_or_else(|| D::Error::custom("phi spec: missing field `family`"))?;
        match fam {
            "gauss" => Ok(PhiSpec::gauss()),
            "boltzmann" => {
                let beta = v
                    .get("beta")
                    .and_then(|b| b.as_f64())
                    .ok_or_else(|| D::Error::custom("boltzmann phi: missing numeric `beta`"))?;
                PhiSpec::boltzmann(beta).map_err(|e| D::Error::custom(e.to_string()))
            }
            other => Err(D::Error::custom(format!(
                "phi family `{other}` has no JSON form (custom Φ is API-only)"
            ))),
        }
    }
}
