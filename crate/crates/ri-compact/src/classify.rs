//! Symbolic compactness classifier: decision tables for the three domain
//! families (John domains, Maz'ya classes, product probability structures),
//! with exact rational threshold arithmetic and verdicts that carry rule
//! citations.
//!
//! The tables are strict-inequality characterizations, so every comparison
//! on (p, q, α, β, m, n) runs in `BigRational`; floats appear only in the
//! numeric fallbacks for custom measure profiles.

use crate::isoperimetry::{self, DomainSpec, PhiFamily, PhiSpec, Regime};
use crate::probes;
use crate::rinorm::{self, rat, Ext, SpaceSpec};
use crate::Error;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A compactness query: does the order-m Sobolev-type space built from X on
/// the given domain embed compactly into Y?
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingQuery {
    pub domain: DomainSpec,
    pub m: u32,
    pub x: SpaceSpec,
    pub y: SpaceSpec,
}

impl EmbeddingQuery {
    pub fn validate(&self) -> Result<(), Error> {
        if self.m == 0 {
            return Err(Error::invalid("m", "order must be >= 1"));
        }
        self.domain.validate()?;
        for (name, s) in [("x", &self.x), ("y", &self.y)] {
            if !s.is_admissible() {
                return Err(Error::InadmissibleSpace(format!(
                    "query field `{name}`: {s:?} is not admissible"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Yes,
    No,
    OutOfScope,
}

/// What the verdict quantifies over: a single domain, or every member of the
/// domain class (Maz'ya classes are characterized class-wide).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    PerDomain,
    ForEveryDomainInClass,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub compact: Compactness,
    /// The decision rule that fired; always present.
    pub rule: String,
    pub sense: Sense,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_range: Option<SpaceSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(compact: Compactness, rule: impl Into<String>, sense: Sense) -> Self {
        Verdict {
            compact,
            rule: rule.into(),
            sense,
            optimal_range: None,
            notes: Vec::new(),
        }
    }

    fn out_of_scope(rule: impl Into<String>, probe_hint: impl Into<String>) -> Self {
        let mut v = Verdict::new(Compactness::OutOfScope, rule, Sense::PerDomain);
        v.notes.push(format!("nearest probe: {}", probe_hint.into()));
        v
    }
}

fn inv(x: f64) -> BigRational {
    Ext::from_f64(x).recip()
}

/// Exact logarithmic exponent of φ_X together with 1/p.
fn phi_exponents(s: &SpaceSpec) -> (BigRational, BigRational) {
    rinorm::fundamental_exponents(s)
}

// ---------------------------------------------------------------------------
// Maz'ya classes
// ---------------------------------------------------------------------------

/// Core Maz'ya-class table with an *exact* α (callers pass (n−1)/n as a true
/// rational, never a rounded float).
fn classify_mazya_exact(
    alpha: &BigRational,
    m: u32,
    x: &SpaceSpec,
    y: &SpaceSpec,
    sense: Sense,
) -> Verdict {
    let one = BigRational::from_integer(1.into());
    let m_rat = BigRational::from_integer(m.into());
    // r = m(1−α), the supercriticality gap
    let r = &m_rat * (&one - alpha);

    if r > one {
        return Verdict::new(
            Compactness::Yes,
            "mazya: m(1-alpha) > 1, compact for every admissible pair",
            sense,
        );
    }
    if r == one {
        return if x.is_l1() && y.is_linfty() {
            Verdict::new(
                Compactness::No,
                "mazya: m(1-alpha) = 1 exceptional pair (L1, Linf)",
                sense,
            )
        } else {
            Verdict::new(
                Compactness::Yes,
                "mazya: m(1-alpha) = 1, compact except for (L1, Linf)",
                sense,
            )
        };
    }

    // r < 1 from here on
    let (ip1, ip2) = (inv(x.p), inv(y.p));
    if x.is_lorentz() && y.is_lorentz() {
        if alpha == &one {
            return if ip1 < ip2 {
                Verdict::new(
                    Compactness::Yes,
                    "mazya-lorentz: alpha = 1 needs p1 > p2",
                    sense,
                )
            } else {
                Verdict::new(
                    Compactness::No,
                    "mazya-lorentz: alpha = 1 and p1 <= p2",
                    sense,
                )
            };
        }
        // α < 1, threshold p1 = 1/(m(1−α)) i.e. 1/p1 = r
        return if ip1 > r {
            if ip2 > &ip1 - &r {
                Verdict::new(
                    Compactness::Yes,
                    "mazya-lorentz subcritical: p2 < p1/(1 - m p1 (1-alpha))",
                    sense,
                )
            } else {
                Verdict::new(
                    Compactness::No,
                    "mazya-lorentz subcritical: p2 >= p1/(1 - m p1 (1-alpha))",
                    sense,
                )
            }
        } else if ip1 == r {
            if ip2 > BigRational::zero() {
                Verdict::new(
                    Compactness::Yes,
                    "mazya-lorentz critical: p1 = 1/(m(1-alpha)) and p2 < inf",
                    sense,
                )
            } else {
                Verdict::new(
                    Compactness::No,
                    "mazya-lorentz critical: p1 = 1/(m(1-alpha)) and p2 = inf",
                    sense,
                )
            }
        } else {
            Verdict::new(
                Compactness::Yes,
                "mazya-lorentz supercritical: p1 > 1/(m(1-alpha))",
                sense,
            )
        };
    }

    // Endpoint rules for genuine log-weighted targets
    if x.is_l1() {
        if alpha == &one {
            // φ_Y(a)/a is bounded below for every admissible Y
            return Verdict::new(
                Compactness::No,
                "mazya endpoint: L1 source with alpha = 1 never compact",
                sense,
            );
        }
        // needs φ_Y(s)/s^{m(1−α)} → 0
        let (ip, d) = phi_exponents(y);
        let yes = ip > r || (ip == r && d < BigRational::zero());
        return Verdict::new(
            if yes { Compactness::Yes } else { Compactness::No },
            "mazya endpoint: L1 source, fundamental-function limit on the target",
            sense,
        );
    }
    if x.is_linfty() {
        if alpha < &one {
            // images of the unit ball are uniformly small near 0
            return Verdict::new(
                Compactness::Yes,
                "mazya endpoint: Linf source with alpha < 1, any admissible target",
                sense,
            );
        }
        // α = 1: needs ‖χ_(0,a)·log(2/s)^m‖_Y → 0
        let yes = if y.p.is_finite() {
            true
        } else {
            rat(y.alpha + m as f64) + inv(y.q) < BigRational::zero()
        };
        return Verdict::new(
            if yes { Compactness::Yes } else { Compactness::No },
            "mazya endpoint: Linf source with alpha = 1, log-power norm limit",
            sense,
        );
    }
    Verdict::out_of_scope(
        "mazya: no decision table for log-weighted spaces away from the L1/Linf endpoints",
        "cutoff-domain probe with the simplified kernel for this profile",
    )
}

/// Maz'ya-class verdict; quantifies over every domain in the class.
pub fn classify_mazya(q: &EmbeddingQuery) -> Result<Verdict, Error> {
    q.validate()?;
    let (alpha, sense) = match &q.domain {
        DomainSpec::MazyaClass { alpha, .. } => (*alpha, Sense::ForEveryDomainInClass),
        DomainSpec::MazyaModel { alpha, .. } => (*alpha, Sense::PerDomain),
        _ => {
            return Err(Error::invalid("domain", "expected a Maz'ya class or model domain"));
        }
    };
    let mut v = classify_mazya_exact(&rat(alpha), q.m, &q.x, &q.y, sense);
    attach_extras(&mut v, q);
    Ok(v)
}

// ---------------------------------------------------------------------------
// John domains
// ---------------------------------------------------------------------------

pub fn classify_john(q: &EmbeddingQuery) -> Result<Verdict, Error> {
    q.validate()?;
    let n = match &q.domain {
        DomainSpec::John { n } => *n,
        _ => return Err(Error::invalid("domain", "expected a John domain")),
    };
    let mut v = if q.m > n {
        Verdict::new(
            Compactness::Yes,
            "john: m > n, compact for every admissible pair",
            Sense::PerDomain,
        )
    } else if q.m == n {
        if q.x.is_l1() && q.y.is_linfty() {
            Verdict::new(
                Compactness::No,
                "john: m = n exceptional pair (L1, Linf)",
                Sense::PerDomain,
            )
        } else {
            Verdict::new(
                Compactness::Yes,
                "john: m = n, compact except for (L1, Linf)",
                Sense::PerDomain,
            )
        }
    } else {
        // m < n: the class-wide Maz'ya table at α = (n−1)/n decides, with the
        // exponent kept as an exact rational
        let alpha = BigRational::new((n as i64 - 1).into(), (n as i64).into());
        let mut v = classify_mazya_exact(&alpha, q.m, &q.x, &q.y, Sense::PerDomain);
        v.rule = format!("john (via mazya table at alpha = (n-1)/n): {}", v.rule);
        v
    };
    attach_extras(&mut v, q);
    Ok(v)
}

// ---------------------------------------------------------------------------
// Product probability structures
// ---------------------------------------------------------------------------

/// The α-shift of the optimal range under the power-type measure profile:
/// +m(β−1)/β for finite p, −m/β at p = ∞ (Gauss behaves as β = 2).
fn beta_of(phi: &PhiSpec) -> Option<BigRational> {
    match &phi.family {
        PhiFamily::Gauss => Some(BigRational::from_integer(2.into())),
        PhiFamily::Boltzmann(b) => Some(rat(*b)),
        PhiFamily::Custom(_) => None,
    }
}

fn classify_product_lz(beta: &BigRational, m: u32, x: &SpaceSpec, y: &SpaceSpec) -> Verdict {
    let (ip1, ip2) = (inv(x.p), inv(y.p));
    let m_rat = BigRational::from_integer(m.into());
    let one = BigRational::from_integer(1.into());
    if ip1 < ip2 {
        return Verdict::new(
            Compactness::Yes,
            "product table: p1 > p2",
            Sense::PerDomain,
        );
    }
    if ip1 > ip2 {
        return Verdict::new(Compactness::No, "product table: p1 < p2", Sense::PerDomain);
    }
    let yes = if x.p.is_finite() {
        let shift = &m_rat * (beta - &one) / beta;
        let (q1, q2) = (Ext::from_f64(x.q), Ext::from_f64(y.q));
        if q1 <= q2 {
            rat(x.alpha) + &shift > rat(y.alpha)
        } else {
            rat(x.alpha) + inv(x.q) + &shift > rat(y.alpha) + inv(y.q)
        }
    } else {
        let shift = -(&m_rat / beta);
        rat(x.alpha) + inv(x.q) + shift > rat(y.alpha) + inv(y.q)
    };
    Verdict::new(
        if yes { Compactness::Yes } else { Compactness::No },
        "product table: equal p, shifted alpha comparison",
        Sense::PerDomain,
    )
}

/// Numeric decay check for the custom-profile endpoint rules: does
/// `a ↦ ‖χ_(0,a)·w‖_S` tend to 0 along a = 2^{−k}?
fn numeric_norm_decays(w: &dyn Fn(f64) -> f64, s: &SpaceSpec) -> Result<bool, Error> {
    let mut vals = Vec::new();
    for k in 1..=14 {
        let a = 0.5f64.powi(k);
        let g = probes::sample_scaled(w, a, 48, &[])?;
        vals.push(rinorm::norm(s, &g)?.value);
    }
    let n = vals.len();
    let decreasing = vals[n - 1] < vals[n - 2] && vals[n - 2] < vals[n - 3];
    Ok(vals[n - 1] < 0.05 * vals[0] && decreasing)
}

pub fn classify_product(q: &EmbeddingQuery) -> Result<Verdict, Error> {
    q.validate()?;
    let phi = match &q.domain {
        DomainSpec::Product { phi, .. } => phi.clone(),
        _ => return Err(Error::invalid("domain", "expected a product domain")),
    };
    // the verdict never depends on the dimension
    let mut v = if q.y.is_linfty() {
        Verdict::new(
            Compactness::No,
            "product: target Linf is never compact",
            Sense::PerDomain,
        )
    } else if let Some(beta) = beta_of(&phi) {
        classify_product_lz(&beta, q.m, &q.x, &q.y)
    } else if q.x.family == rinorm::Family::Lebesgue && q.y.family == rinorm::Family::Lebesgue {
        // custom Φ, Lebesgue pair: decided by the growth regime of Φ
        let yes = match isoperimetry::phi_regime(&phi)? {
            Regime::ZeroLimit => q.y.p <= q.x.p && q.y.p.is_finite(),
            Regime::PositiveLimit(_) => q.y.p < q.x.p,
        };
        Verdict::new(
            if yes { Compactness::Yes } else { Compactness::No },
            "product: Lebesgue pair via measure-profile growth regime",
            Sense::PerDomain,
        )
    } else if q.x.is_l1() {
        // custom Φ, L¹ source: φ_Y(s)/s · (Φ⁻¹(log 2/s)/log(2/s))^m → 0
        let y = q.y.clone();
        let m = q.m as i32;
        let p = phi.clone();
        let mut vals = Vec::new();
        for k in 1..=14 {
            let s = 0.5f64.powi(k);
            let l = crate::quad::log2s(s);
            vals.push(rinorm::fundamental_function(&y, s)? / s * (p.inv(l) / l).powi(m));
        }
        let n = vals.len();
        let yes = vals[n - 1] < 0.05 * vals[0] && vals[n - 1] < vals[n - 3];
        Verdict::new(
            if yes { Compactness::Yes } else { Compactness::No },
            "product endpoint: L1 source, fundamental-function limit on the target",
            Sense::PerDomain,
        )
    } else if q.x.is_linfty() {
        // custom Φ, L^∞ source: ‖χ_(0,a)·Φ⁻¹(log 2/s)^m‖_Y → 0
        let m = q.m as i32;
        let p = phi.clone();
        let w = move |s: f64| p.inv(crate::quad::log2s(s)).powi(m);
        let yes = numeric_norm_decays(&w, &q.y)?;
        Verdict::new(
            if yes { Compactness::Yes } else { Compactness::No },
            "product endpoint: Linf source, inverse-profile norm limit",
            Sense::PerDomain,
        )
    } else {
        Verdict::out_of_scope(
            "product: custom measure profile with no table for this pair",
            "cutoff-domain probe with the prefactored log kernel",
        )
    };
    attach_extras(&mut v, q);
    Ok(v)
}

// ---------------------------------------------------------------------------
// Optimal range lookup
// ---------------------------------------------------------------------------

fn rational_to_f64(r: &BigRational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

fn mazya_range_lookup(alpha: &BigRational, m: u32, x: &SpaceSpec) -> Result<SpaceSpec, Error> {
    let one = BigRational::from_integer(1.into());
    let m_rat = BigRational::from_integer(m.into());
    if alpha == &one {
        return if x.is_linfty() {
            Ok(SpaceSpec::lorentz_zygmund(
                f64::INFINITY,
                f64::INFINITY,
                -(m as f64),
            ))
        } else if x.p.is_finite() && x.is_lorentz() {
            Ok(x.clone())
        } else {
            Err(Error::OutOfScope(
                "no optimal-range row for this space at alpha = 1".into(),
            ))
        };
    }
    if !x.is_lorentz() {
        return Err(Error::OutOfScope(
            "optimal-range rows cover the Lorentz subfamily only".into(),
        ));
    }
    let r = &m_rat * (&one - alpha);
    let ip = inv(x.p);
    if ip > r {
        // p below threshold: exponent bump 1/p ↦ 1/p − m(1−α)
        let new_ip = &ip - &r;
        let p_new = if new_ip.is_zero() {
            f64::INFINITY
        } else {
            1.0 / rational_to_f64(&new_ip)
        };
        Ok(SpaceSpec::lorentz(p_new, x.q))
    } else if ip == r {
        if x.q == 1.0 {
            Ok(SpaceSpec::linfty())
        } else {
            Ok(SpaceSpec::lorentz_zygmund(f64::INFINITY, x.q, -1.0))
        }
    } else {
        // supercritical: the operator image is bounded
        Ok(SpaceSpec::linfty())
    }
}

/// The symbolic optimal range space for X on the given domain family.
pub fn optimal_range_lookup(
    x: &SpaceSpec,
    domain: &DomainSpec,
    m: u32,
) -> Result<SpaceSpec, Error> {
    if m == 0 {
        return Err(Error::invalid("m", "order must be >= 1"));
    }
    if !x.is_admissible() {
        return Err(Error::InadmissibleSpace(format!("{x:?}")));
    }
    match domain {
        DomainSpec::John { n } => {
            if m >= *n {
                Ok(SpaceSpec::linfty())
            } else {
                let alpha = BigRational::new((*n as i64 - 1).into(), (*n as i64).into());
                mazya_range_lookup(&alpha, m, x)
            }
        }
        DomainSpec::MazyaClass { alpha, .. } | DomainSpec::MazyaModel { alpha, .. } => {
            mazya_range_lookup(&rat(*alpha), m, x)
        }
        DomainSpec::Product { phi, .. } => {
            let beta = beta_of(phi).ok_or_else(|| {
                Error::OutOfScope("no optimal-range row for a custom measure profile".into())
            })?;
            let m_rat = BigRational::from_integer(m.into());
            let one = BigRational::from_integer(1.into());
            if x.p.is_finite() {
                let shift = rational_to_f64(&(&m_rat * (&beta - &one) / &beta));
                Ok(SpaceSpec::lorentz_zygmund(x.p, x.q, x.alpha + shift))
            } else {
                let shift = rational_to_f64(&(&m_rat / &beta));
                Ok(SpaceSpec::lorentz_zygmund(x.p, x.q, x.alpha - shift))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Dispatcher
// ---------------------------------------------------------------------------

fn attach_extras(v: &mut Verdict, q: &EmbeddingQuery) {
    if let Ok(r) = optimal_range_lookup(&q.x, &q.domain, q.m) {
        v.optimal_range = Some(r);
    }
    if let Ok(profile) = q.domain.canonical_profile() {
        if profile.inv_integral_finite() {
            v.notes.push(
                "finite inverse profile integral: the zero-trace and full Sobolev-type spaces coincide"
                    .into(),
            );
        }
    }
}

/// Dispatch a query to the table of its domain family. Never guesses:
/// uncovered queries come back `out_of_scope` with a probe suggestion.
pub fn classify(q: &EmbeddingQuery) -> Result<Verdict, Error> {
    match &q.domain {
        DomainSpec::John { .. } => classify_john(q),
        DomainSpec::MazyaClass { .. } | DomainSpec::MazyaModel { .. } => classify_mazya(q),
        DomainSpec::Product { .. } => classify_product(q),
    }
}
