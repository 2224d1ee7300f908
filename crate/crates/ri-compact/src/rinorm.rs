//! Rearrangement-invariant norms of the Lebesgue / Lorentz / Lorentz–Zygmund
//! family on (0,1): admissibility, norm evaluation on step functions,
//! fundamental functions, an associate-norm search oracle, and the
//! continuous / almost-compact embedding rules between two spaces of the
//! family (decided in exact rational arithmetic).

use crate::quad;
use crate::search::{self, SearchBudget};
use crate::stepfn::StepFunction;
use crate::Error;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Extended nonnegative rational: a finite rational or +∞. The derived order
/// (variant order `Fin < Inf`, rationals by value) is exactly the extended-real
/// order, which is what makes the strict-threshold comparisons below exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ext {
    Fin(BigRational),
    Inf,
}

impl Ext {
    /// Exact conversion: every finite f64 is a dyadic rational.
    pub fn from_f64(x: f64) -> Self {
        if x.is_infinite() {
            Ext::Inf
        } else {
            Ext::Fin(BigRational::from_float(x).expect("finite float is rational"))
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ext::Inf)
    }

    /// 1/x with 1/∞ = 0.
    pub fn recip(&self) -> BigRational {
        match self {
            Ext::Inf => BigRational::from_integer(0.into()),
            Ext::Fin(r) => r.recip(),
        }
    }

    pub fn fin(&self) -> Option<&BigRational> {
        match self {
            Ext::Fin(r) => Some(r),
            Ext::Inf => None,
        }
    }
}

/// Exact rational from a finite f64.
pub(crate) fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float is rational")
}

/// α + 1/q as an exact rational (1/∞ = 0).
pub(crate) fn alpha_plus_inv(alpha: f64, q: f64) -> BigRational {
    rat(alpha) + Ext::from_f64(q).recip()
}

/// Space family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lebesgue,
    Lorentz,
    LorentzZygmund,
}

/// Symbolic descriptor of a rearrangement-invariant norm on (0,1):
/// `L^p`, `L^{p,q}`, or `L^{p,q;α}` (weight `s^{1/p-1/q} log(2/s)^α` on f*).
/// `p = q`, `α = 0` are implied where the family omits them.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub family: Family,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

/// Outcome of the admissibility check. Inadmissible is a value, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum Validity {
    Admissible,
    Inadmissible(String),
}

/// How a reported number relates to the true one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exactness {
    /// Closed-form evaluation; error is roundoff only.
    Exact,
    /// Adaptive quadrature with the given absolute error bound.
    Quadrature(f64),
    /// Certified lower bound from a search (true value is ≥ this).
    LowerBound,
}

/// A nonnegative extended-real value with its provenance tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub exactness: Exactness,
}

impl NormValue {
    pub fn exact(value: f64) -> Self {
        NormValue {
            value,
            exactness: Exactness::Exact,
        }
    }
}

/// Result of the associate-norm search: a certified lower bound, the step
/// function achieving it, and — for Lebesgue specs — the exact Hölder dual.
#[derive(Debug, Clone)]
pub struct AssociateNorm {
    pub lower_bound: f64,
    pub achiever: StepFunction,
    pub exact: Option<f64>,
}

impl AssociateNorm {
    /// Best available value: the exact dual when known, else the bound.
    pub fn value(&self) -> NormValue {
        match self.exact {
            Some(v) => NormValue::exact(v),
            None => NormValue {
                value: self.lower_bound,
                exactness: Exactness::LowerBound,
            },
        }
    }
}

impl SpaceSpec {
    pub fn lebesgue(p: f64) -> Self {
        SpaceSpec {
            family: Family::Lebesgue,
            p,
            q: p,
            alpha: 0.0,
        }
    }

    pub fn lorentz(p: f64, q: f64) -> Self {
        SpaceSpec {
            family: Family::Lorentz,
            p,
            q,
            alpha: 0.0,
        }
    }

    pub fn lorentz_zygmund(p: f64, q: f64, alpha: f64) -> Self {
        SpaceSpec {
            family: Family::LorentzZygmund,
            p,
            q,
            alpha,
        }
    }

    /// L¹ and L^∞, the endpoint spaces, come up constantly.
    pub fn l1() -> Self {
        Self::lebesgue(1.0)
    }

    pub fn linfty() -> Self {
        Self::lebesgue(f64::INFINITY)
    }

    /// Is this spec exactly L¹ (in any of its equivalent spellings)?
    pub fn is_l1(&self) -> bool {
        self.p == 1.0 && self.q == 1.0 && self.alpha == 0.0
    }

    /// Is this spec exactly L^∞?
    pub fn is_linfty(&self) -> bool {
        self.p.is_infinite() && self.q.is_infinite() && self.alpha == 0.0
    }

    /// True when (p,q,α) carry no log weight — i.e. the spec lies in the
    /// Lorentz subfamily regardless of how it was spelled.
    pub fn is_lorentz(&self) -> bool {
        self.alpha == 0.0
    }

    /// Admissibility: the parameter set must fall in one of the four ranges
    /// where the defining functional is equivalent to an r.i. norm.
    pub fn validity(&self) -> Validity {
        let (p, q, a) = (self.p, self.q, self.alpha);
        if !(p >= 1.0) || !(q >= 1.0) || !a.is_finite() {
            return Validity::Inadmissible(format!(
                "parameters out of range: p={p}, q={q}, alpha={a}"
            ));
        }
        match self.family {
            Family::Lebesgue => {
                if self.q != self.p || self.alpha != 0.0 {
                    return Validity::Inadmissible("lebesgue requires q=p, alpha=0".into());
                }
            }
            Family::Lorentz => {
                if self.alpha != 0.0 {
                    return Validity::Inadmissible("lorentz requires alpha=0".into());
                }
            }
            Family::LorentzZygmund => {}
        }
        let ok = (p == 1.0 && q == 1.0 && a >= 0.0)
            || (1.0 < p && p.is_finite())
            || (p.is_infinite() && q.is_finite() && a + 1.0 / q < 0.0)
            || (p.is_infinite() && q.is_infinite() && a <= 0.0);
        if ok {
            Validity::Admissible
        } else {
            Validity::Inadmissible(format!(
                "(p={p}, q={q}, alpha={a}) matches none of the admissible ranges"
            ))
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.validity() == Validity::Admissible
    }

    fn require_admissible(&self) -> Result<(), Error> {
        match self.validity() {
            Validity::Admissible => Ok(()),
            Validity::Inadmissible(r) => Err(Error::InadmissibleSpace(r)),
        }
    }
}

/// Supremum of the weight `w(s) = s^{1/p} log(2/s)^α` over a cell `(x, y)` —
/// the q = ∞ norm reduces to cell-wise suprema of this. The weight is monotone
/// or unimodal: the only interior critical point is at `log(2/s) = αp`.
fn weight_sup(p: f64, alpha: f64, x: f64, y: f64) -> f64 {
    let w = |s: f64| -> f64 {
        if s <= 0.0 {
            // limits as s -> 0+: s^{1/p} kills any log power when p < ∞;
            // for p = ∞ the admissible α ≤ 0 gives limit 0 (α < 0) or 1 (α = 0)
            if p.is_finite() {
                0.0
            } else if alpha == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            let base = if p.is_finite() { s.powf(1.0 / p) } else { 1.0 };
            base * quad::log2s(s).powf(alpha)
        }
    };
    let mut sup = w(x).max(w(y));
    if p.is_finite() && alpha > 0.0 {
        let s_star = 2.0 * (-alpha * p).exp();
        if s_star > x && s_star < y {
            sup = sup.max(w(s_star));
        }
    }
    sup
}

/// ‖f‖_{L^{p,q;α}} = ‖f*(s) s^{1/p−1/q} log(2/s)^α‖_{L^q(0,1)}.
///
/// Cell-wise exact antiderivatives wherever the weight has one; adaptive
/// quadrature (with the reported error bound) otherwise.
pub fn norm(s: &SpaceSpec, f: &StepFunction) -> Result<NormValue, Error> {
    s.require_admissible()?;
    let fstar = f.rearrange();
    let (p, q, alpha) = (s.p, s.q, s.alpha);
    if q.is_infinite() {
        let mut sup: f64 = 0.0;
        for (i, w) in fstar.breakpoints().windows(2).enumerate() {
            let v = fstar.values()[i];
            if v > 0.0 {
                sup = sup.max(v * weight_sup(p, alpha, w[0], w[1]));
            }
        }
        return Ok(NormValue::exact(sup));
    }
    // ∫ f*^q s^{q/p-1} L^{qα} ds, then the q-th root
    let a_exp = if p.is_finite() { q / p - 1.0 } else { -1.0 };
    let beta = q * alpha;
    let mut total = 0.0;
    let mut err = 0.0;
    for (i, w) in fstar.breakpoints().windows(2).enumerate() {
        let v = fstar.values()[i];
        if v > 0.0 {
            let (cell, e) = quad::power_log_integral(a_exp, beta, w[0], w[1]);
            total += v.powf(q) * cell;
            err += v.powf(q) * e;
        }
    }
    if !total.is_finite() {
        return Ok(NormValue {
            value: f64::INFINITY,
            exactness: Exactness::Exact,
        });
    }
    let value = total.powf(1.0 / q);
    let exactness = if err == 0.0 {
        Exactness::Exact
    } else {
        // first-order propagation of the integral bound through the q-th root
        let bound = if total > 0.0 {
            value / total * err / q
        } else {
            err.powf(1.0 / q)
        };
        Exactness::Quadrature(bound)
    };
    Ok(NormValue { value, exactness })
}

/// Fundamental function φ_X(t) = ‖χ_(0,t)‖_X.
pub fn fundamental_function(s: &SpaceSpec, t: f64) -> Result<f64, Error> {
    s.require_admissible()?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::invalid("t", "must lie in (0,1]"));
    }
    let (p, q, alpha) = (s.p, s.q, s.alpha);
    if q.is_infinite() {
        return Ok(weight_sup(p, alpha, 0.0, t));
    }
    let a_exp = if p.is_finite() { q / p - 1.0 } else { -1.0 };
    let (v, _) = quad::power_log_integral(a_exp, q * alpha, 0.0, t);
    Ok(v.powf(1.0 / q))
}

/// Asymptotic shape of φ_X near 0 as an exponent pair `(c, d)` meaning
/// φ_X(t) ≈ t^c · log(2/t)^d. Used by the symbolic endpoint rules.
pub fn fundamental_exponents(s: &SpaceSpec) -> (BigRational, BigRational) {
    let inv_p = Ext::from_f64(s.p).recip();
    let d = if s.p.is_finite() {
        rat(s.alpha)
    } else {
        // for p = ∞ the integral ∫_0^t s^{-1} L^{qα} contributes L^{α+1/q}
        // (q < ∞), and the q = ∞ sup is L^α itself
        alpha_plus_inv(s.alpha, s.q)
    };
    (inv_p, d)
}

/// ‖g‖_{X'} = sup { ∫ g*·h* : ‖h‖_X ≤ 1 }, lower-bounded by search over
/// normalized characteristic functions, truncated power/power-log profiles
/// and coordinate ascent. For Lebesgue specs the exact Hölder dual is also
/// computed and must dominate the search value.
pub fn associate_norm(
    s: &SpaceSpec,
    g: &StepFunction,
    budget: &SearchBudget,
) -> Result<AssociateNorm, Error> {
    s.require_admissible()?;
    let gstar = g.rearrange();
    let objective = |h: &StepFunction| gstar.integrate_product(&h.rearrange());
    let extra: Vec<f64> = gstar.breakpoints()[1..].to_vec();
    let (lower_bound, achiever) = search::best_in_unit_ball(s, &objective, 1.0, &extra, budget)?;
    let exact = if s.family == Family::Lebesgue {
        Some(lebesgue_norm_dual(s.p, &gstar))
    } else {
        None
    };
    if let Some(e) = exact {
        debug_assert!(
            lower_bound <= e * (1.0 + 1e-9) + 1e-12,
            "search bound {lower_bound} exceeds exact dual {e}"
        );
    }
    Ok(AssociateNorm {
        lower_bound,
        achiever,
        exact,
    })
}

/// Exact ‖g‖_{p'} for the Hölder dual of L^p.
fn lebesgue_norm_dual(p: f64, gstar: &StepFunction) -> f64 {
    if p == 1.0 {
        gstar.max_value() // dual of L¹ is L^∞
    } else if p.is_infinite() {
        gstar.integrate() // dual of L^∞ is L¹
    } else {
        let pp = p / (p - 1.0);
        norm(&SpaceSpec::lebesgue(pp), gstar)
            .expect("lebesgue p' is admissible")
            .value
    }
}

/// The constant C_X in ∫₀¹ f ≤ C_X‖f‖_X, i.e. ‖1‖_{X'}. Exact (= 1) for
/// every Lebesgue spec on the probability interval; a certified lower bound
/// from the associate search otherwise.
pub fn l1_embedding_constant(s: &SpaceSpec, budget: &SearchBudget) -> Result<NormValue, Error> {
    let one = StepFunction::constant(1.0);
    let a = associate_norm(s, &one, budget)?;
    Ok(a.value())
}

/// Continuous embedding L^{p1,q1;α1}(0,1) → L^{p2,q2;α2}(0,1), decided in
/// exact rational arithmetic.
pub fn continuous_embedding_lz(s1: &SpaceSpec, s2: &SpaceSpec) -> Result<bool, Error> {
    s1.require_admissible()?;
    s2.require_admissible()?;
    let (p1, p2) = (Ext::from_f64(s1.p), Ext::from_f64(s2.p));
    let (q1, q2) = (Ext::from_f64(s1.q), Ext::from_f64(s2.q));
    if p1 > p2 {
        return Ok(true);
    }
    if p1 < p2 {
        return Ok(false);
    }
    let (a1, a2) = (rat(s1.alpha), rat(s2.alpha));
    let (aq1, aq2) = (
        alpha_plus_inv(s1.alpha, s1.q),
        alpha_plus_inv(s2.alpha, s2.q),
    );
    let yes = if q1 <= q2 {
        if p1.is_inf() {
            aq1 >= aq2
        } else {
            a1 >= a2
        }
    } else {
        aq1 > aq2
    };
    Ok(yes)
}

/// Almost-compact embedding L^{p1,q1;α1} →* L^{p2,q2;α2}: the strict-version
/// of the continuous rule. For pure Lorentz specs it degenerates to p1 > p2.
pub fn almost_compact_embedding_lz(s1: &SpaceSpec, s2: &SpaceSpec) -> Result<bool, Error> {
    s1.require_admissible()?;
    s2.require_admissible()?;
    let (p1, p2) = (Ext::from_f64(s1.p), Ext::from_f64(s2.p));
    let (q1, q2) = (Ext::from_f64(s1.q), Ext::from_f64(s2.q));
    if p1 > p2 {
        return Ok(true);
    }
    if p1 < p2 {
        return Ok(false);
    }
    let yes = if !p1.is_inf() && q1 <= q2 {
        rat(s1.alpha) > rat(s2.alpha)
    } else {
        alpha_plus_inv(s1.alpha, s1.q) > alpha_plus_inv(s2.alpha, s2.q)
    };
    Ok(yes)
}

/// A spec whose norm is *equivalent* to the associate norm of `s`, when the
/// associate stays inside the admissible three-family catalogue: Hölder
/// conjugation (p,q,α) ↦ (p′,q′,−α) for 1 < p < ∞, plus the L¹/L^∞ endpoint
/// swaps. Returns `None` when no admissible member represents the associate.
pub fn symbolic_associate(s: &SpaceSpec) -> Option<SpaceSpec> {
    if !s.is_admissible() {
        return None;
    }
    let conj = |r: f64| if r.is_infinite() { 1.0 } else { r / (r - 1.0) };
    if s.p > 1.0 && s.p.is_finite() {
        return Some(match s.family {
            Family::Lebesgue => SpaceSpec::lebesgue(conj(s.p)),
            Family::Lorentz => SpaceSpec::lorentz(conj(s.p), conj(s.q)),
            Family::LorentzZygmund => {
                SpaceSpec::lorentz_zygmund(conj(s.p), conj(s.q), -s.alpha)
            }
        });
    }
    if s.p == 1.0 {
        // admissibility forces q = 1, α ≥ 0
        return Some(if s.alpha == 0.0 {
            SpaceSpec::linfty()
        } else {
            SpaceSpec::lorentz_zygmund(f64::INFINITY, f64::INFINITY, -s.alpha)
        });
    }
    // p = ∞
    if s.q.is_infinite() {
        return Some(if s.alpha == 0.0 {
            SpaceSpec::l1()
        } else {
            SpaceSpec::lorentz_zygmund(1.0, 1.0, -s.alpha)
        });
    }
    None // L^{∞,q;α} with q < ∞: associate leaves the admissible catalogue
}

// ---------------------------------------------------------------------------
// JSON encoding: {"family":"lorentz_zygmund","p":2,"q":1,"alpha":-0.5},
// with "inf" encoding ∞ for p and q.
// ---------------------------------------------------------------------------

fn ext_to_json(x: f64) -> serde_json::Value {
    if x.is_infinite() {
        serde_json::Value::String("inf".into())
    } else {
        serde_json::json!(x)
    }
}

fn ext_from_json(v: &serde_json::Value, field: &str) -> Result<f64, String> {
    match v {
        serde_json::Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        serde_json::Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| format!("field `{field}`: not a finite number")),
        _ => Err(format!("field `{field}`: expected number or \"inf\"")),
    }
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = serde_json::Map::new();
        let fam = match self.family {
            Family::Lebesgue => "lebesgue",
            Family::Lorentz => "lorentz",
            Family::LorentzZygmund => "lorentz_zygmund",
        };
        map.insert("family".into(), fam.into());
        map.insert("p".into(), ext_to_json(self.p));
        if self.family != Family::Lebesgue {
            map.insert("q".into(), ext_to_json(self.q));
        }
        if self.family == Family::LorentzZygmund {
            map.insert("alpha".into(), serde_json::json!(self.alpha));
        }
        serde_json::Value::Object(map).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        let obj = v
            .as_object()
            .ok_or_else(|| D::Error::custom("space spec must be an object"))?;
        let fam = obj
            .get("family")
            .and_then(|f| f.as_str())
            .ok_or_else(|| D::Error::custom("missing field `family`"))?;
        let p = obj
            .get("p")
            .ok_or_else(|| D::Error::custom("missing field `p`"))
            .and_then(|x| ext_from_json(x, "p").map_err(D::Error::custom))?;
        let q = match obj.get("q") {
            Some(x) => Some(ext_from_json(x, "q").map_err(D::Error::custom)?),
            None => None,
        };
        let alpha = match obj.get("alpha") {
            Some(x) => x
                .as_f64()
                .ok_or_else(|| D::Error::custom("field `alpha`: expected number"))?,
            None => 0.0,
        };
        match fam {
            "lebesgue" => Ok(SpaceSpec::lebesgue(p)),
            "lorentz" => Ok(SpaceSpec::lorentz(p, q.unwrap_or(p))),
            "lorentz_zygmund" => Ok(SpaceSpec::lorentz_zygmund(p, q.unwrap_or(p), alpha)),
            other => Err(D::Error::custom(format!("unknown family `{other}`"))),
        }
    }
}
