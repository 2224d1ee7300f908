//! End-to-end acceptance battery. Each test prints exactly one PASS/FAIL
//! line for its criterion before asserting, so the whole gate is readable
//! from the test output alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ri_compact::classify::{classify, Compactness, EmbeddingQuery};
use ri_compact::isoperimetry::{
    check_iso_equivalence, mazya_model_domain, DomainSpec, IsoProfile, PhiSpec,
};
use ri_compact::kernelops::{
    apply, char_closed_form, check_associate_identity, eval_point, OperatorSpec, ProfileJ,
};
use ri_compact::probes::{
    duality_identity_check, optimal_domain_norm, probe_cutoff_domain, DomainNormMode, ProbeConfig,
    VerdictHint,
};
use ri_compact::rinorm::{self, SpaceSpec};
use ri_compact::stepfn::{Grid, StepFunction};
use std::time::Instant;

fn report(n: u32, desc: &str, result: Result<String, String>) {
    match &result {
        Ok(detail) => println!("CRITERION {n:2}: PASS — {desc} ({detail})"),
        Err(why) => println!("CRITERION {n:2}: FAIL — {desc} ({why})"),
    }
    assert!(result.is_ok(), "criterion {n}: {result:?}");
}

fn random_step(rng: &mut ChaCha8Rng, cells: usize) -> StepFunction {
    let mut bp: Vec<f64> = (0..cells - 1)
        .map(|_| rng.gen_range(0.001..0.999))
        .collect();
    bp.push(0.0);
    bp.push(1.0);
    bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bp.dedup();
    let vals: Vec<f64> = (0..bp.len() - 1).map(|_| rng.gen_range(0.0..2.0)).collect();
    StepFunction::new(bp, vals).unwrap()
}

fn profiles_under_test() -> Vec<(&'static str, ProfileJ)> {
    vec![
        ("1", ProfileJ::one()),
        ("s^0.5", ProfileJ::power(0.5).unwrap()),
        ("s", ProfileJ::power(1.0).unwrap()),
        ("gaussian", ProfileJ::l_phi(PhiSpec::gauss())),
    ]
}

#[test]
fn criterion_01_closed_form_operator_identity() {
    let start = Instant::now();
    let grid = Grid::geometric(64, 1e-8);
    let mut worst = 0.0f64;
    let mut checks = 0usize;
    let mut run = || -> Result<(), String> {
        for (name, profile) in profiles_under_test() {
            for j in 1..=3u32 {
                for a in [1.0, 0.1, 0.01] {
                    let f = StepFunction::indicator(0.0, a).unwrap();
                    let op = OperatorSpec::H {
                        profile: profile.clone(),
                        j,
                    };
                    let img = apply(&op, &f, &grid)
                        .map_err(|e| format!("apply failed for J={name}, j={j}: {e}"))?;
                    for (i, w) in img.breakpoints().windows(2).enumerate() {
                        let t = 0.5 * (w[0] + w[1]);
                        let got = img.values()[i];
                        let want = char_closed_form(&profile, j, a, t);
                        let rel = (got - want).abs() / want.abs().max(1e-12);
                        worst = worst.max(rel);
                        checks += 1;
                        if rel > 1e-7 {
                            return Err(format!(
                                "J={name}, j={j}, a={a}, t={t}: got {got}, want {want}, rel {rel:.2e}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    };
    let mut result = run().map(|_| ());
    let elapsed = start.elapsed();
    if result.is_ok() && elapsed.as_secs_f64() >= 10.0 {
        result = Err(format!("runtime {elapsed:?} exceeds 10 s"));
    }
    report(
        1,
        "indicator images match the closed form within 1e-7 relative",
        result.map(|_| format!("{checks} points, worst rel {worst:.2e}, {elapsed:?}")),
    );
}

#[test]
fn criterion_02_associate_identity_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut run = || -> Result<(), String> {
        for (name, profile) in profiles_under_test() {
            for j in 1..=3u32 {
                for k in 0..100 {
                    let f = random_step(&mut rng, 3);
                    let g = random_step(&mut rng, 3);
                    let r = check_associate_identity(&profile, j, &f, &g)
                        .map_err(|e| format!("J={name}, j={j}, pair {k}: {e}"))?;
                    worst = worst.max(r);
                    if r > 1e-6 {
                        return Err(format!("J={name}, j={j}, pair {k}: residual {r:.2e}"));
                    }
                }
            }
        }
        Ok(())
    };
    let result = run();
    report(
        2,
        "pairing identity residual <= 1e-6 on 100 random pairs per configuration",
        result.map(|_| format!("12 configurations, worst residual {worst:.2e}")),
    );
}

fn norm_of(s: &SpaceSpec, f: &StepFunction) -> Result<f64, String> {
    rinorm::norm(s, f).map(|n| n.value).map_err(|e| e.to_string())
}

/// Constant C with ∫₀¹ f ≤ C·‖f‖ for the spec, derived from
/// f*(t)·φ(t) ≤ ‖f‖: C = ∫₀¹ dt/φ(t) (upper-sum estimate with an analytic
/// tail bound valid for the α ≥ 0 specs under test).
fn embedding_constant(s: &SpaceSpec) -> Result<f64, String> {
    if s.p.is_infinite() {
        return Ok(1.0);
    }
    if s.p == 1.0 {
        // φ(t) = t·log(2/t)^α and log(2/t) ≥ log 2
        return Ok((2f64).ln().powf(-s.alpha) * (1.0 + 1e-9));
    }
    let phi = |t: f64| rinorm::fundamental_function(s, t).unwrap_or(f64::NAN);
    let eps: f64 = 1e-10;
    let n = 4000;
    let ratio = (1.0 / eps).powf(1.0 / n as f64);
    let mut c = 0.0;
    let mut lo = eps;
    for _ in 0..n {
        let hi = (lo * ratio).min(1.0);
        // 1/φ is nonincreasing, so the left endpoint gives an upper sum
        c += (hi - lo) / phi(lo);
        lo = hi;
    }
    let pprime = s.p / (s.p - 1.0);
    c += pprime * eps / phi(eps);
    if !c.is_finite() {
        return Err(format!("embedding constant diverged for {s:?}"));
    }
    Ok(c * (1.0 + 1e-6))
}

#[test]
fn criterion_03_norm_axioms_and_quasiconcavity() {
    let specs = [
        SpaceSpec::l1(),
        SpaceSpec::lebesgue(1.5),
        SpaceSpec::lebesgue(2.0),
        SpaceSpec::lebesgue(2.5),
        SpaceSpec::lebesgue(4.0),
        SpaceSpec::linfty(),
        SpaceSpec::lorentz(2.0, 1.0),
        SpaceSpec::lorentz(2.5, 2.0),
        SpaceSpec::lorentz(3.0, 1.0),
        SpaceSpec::lorentz_zygmund(1.0, 1.0, 0.5),
        SpaceSpec::lorentz_zygmund(2.0, 2.0, 1.0),
        SpaceSpec::lorentz_zygmund(3.0, 2.0, 0.25),
    ];
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut run = || -> Result<(), String> {
        // quasiconcavity of the fundamental function on the grid
        let pts = Grid::geometric(64, 1e-8).interior_points();
        for s in &specs {
            let phi: Vec<f64> = pts
                .iter()
                .map(|&t| rinorm::fundamental_function(s, t).unwrap())
                .collect();
            for i in 1..phi.len() {
                if phi[i] < phi[i - 1] * (1.0 - 1e-9)
                    || phi[i] / pts[i] > phi[i - 1] / pts[i - 1] * (1.0 + 1e-9)
                {
                    return Err(format!("fundamental function not quasiconcave for {s:?}"));
                }
            }
        }
        let constants: Vec<f64> = specs
            .iter()
            .map(embedding_constant)
            .collect::<Result<_, _>>()?;
        for _ in 0..200 {
            let f = random_step(&mut rng, 4);
            let g = random_step(&mut rng, 4);
            for (s, c_x) in specs.iter().zip(&constants) {
                let nf = norm_of(s, &f)?;
                let ng = norm_of(s, &g)?;
                let scale = (nf + ng).max(1.0);
                // triangle inequality and homogeneity
                let nsum = norm_of(s, &f.add(&g))?;
                if nsum > nf + ng + tol * scale {
                    return Err(format!("triangle failed for {s:?}: {nsum} > {nf}+{ng}"));
                }
                let nscaled = norm_of(s, &f.scale(2.5))?;
                if (nscaled - 2.5 * nf).abs() > tol * scale {
                    return Err(format!("homogeneity failed for {s:?}"));
                }
                if f.integrate() > 0.0 && nf <= 0.0 {
                    return Err(format!("definiteness failed for {s:?}"));
                }
                // lattice monotonicity: pointwise h <= f implies norms ordered
                let shrink: Vec<f64> = f
                    .values()
                    .iter()
                    .map(|v| v * rng.gen_range(0.0..1.0))
                    .collect();
                let h = StepFunction::new(f.breakpoints().to_vec(), shrink)
                    .map_err(|e| e.to_string())?;
                if norm_of(s, &h)? > nf + tol * scale {
                    return Err(format!("lattice monotonicity failed for {s:?}"));
                }
                // monotone limits along cutoffs increasing to f
                let mut prev = 0.0;
                for a in [0.25, 0.5, 0.75, 1.0] {
                    let na = norm_of(s, &f.cutoff(a))?;
                    if na < prev - tol * scale {
                        return Err(format!("monotone limit failed for {s:?}"));
                    }
                    prev = na;
                }
                if (prev - nf).abs() > tol * scale {
                    return Err(format!("cutoff limit does not reach the norm for {s:?}"));
                }
                // the constant function has finite norm; the L1 embedding holds
                if !norm_of(s, &StepFunction::constant(1.0))?.is_finite() {
                    return Err(format!("constant function norm infinite for {s:?}"));
                }
                if f.integrate() > c_x * nf * (1.0 + tol) {
                    return Err(format!(
                        "L1 embedding failed for {s:?}: {} > {c_x}*{nf}",
                        f.integrate()
                    ));
                }
                // rearrangement invariance
                let nr = norm_of(s, &f.rearrange())?;
                if (nr - nf).abs() > tol * scale {
                    return Err(format!("rearrangement invariance failed for {s:?}"));
                }
            }
        }
        Ok(())
    };
    report(
        3,
        "norm axioms hold on 200 random functions for 12 specs; fundamental functions quasiconcave",
        run().map(|_| "12 specs x 200 functions".to_string()),
    );
}

#[test]
fn criterion_04_hardy_littlewood() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut run = || -> Result<(), String> {
        for k in 0..500 {
            let f = random_step(&mut rng, 5);
            let g = random_step(&mut rng, 5);
            let plain = f.integrate_product(&g);
            let arranged = f.rearrange().integrate_product(&g.rearrange());
            if plain > arranged + 1e-12 * arranged.max(1.0) {
                return Err(format!("pair {k}: {plain} > {arranged}"));
            }
        }
        Ok(())
    };
    report(
        4,
        "rearranged pairing dominates the plain pairing on 500 random pairs",
        run().map(|_| "500 pairs, exact cell arithmetic".to_string()),
    );
}

#[test]
fn criterion_05_upstream_constant_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let factorial = |k: u32| (1..=k.max(1)).product::<u32>() as f64;
    let mut run = || -> Result<(), String> {
        for alpha in [0.5, 0.9] {
            let iso = IsoProfile::mazya(alpha).map_err(|e| e.to_string())?;
            let profile = ProfileJ::power(alpha).map_err(|e| e.to_string())?;
            for m in 1..=3u32 {
                let r_op = OperatorSpec::R {
                    profile: profile.clone(),
                    j: m,
                };
                let s_op = OperatorSpec::S {
                    iso: iso.clone(),
                    m,
                };
                let c_rs = (m as f64).powi(m as i32 - 1) / factorial(m - 1);
                let c_sr = 2f64.powi(m as i32) * factorial(m - 1);
                for k in 0..100 {
                    let fstar = random_step(&mut rng, 4).rearrange();
                    let mut pts = Grid::geometric(24, 1e-8).interior_points();
                    pts.extend(fstar.breakpoints().iter().filter(|&&b| b > 0.0 && b < 1.0));
                    let sup = |op: &OperatorSpec| -> Result<f64, String> {
                        let mut best = 0.0f64;
                        for &t in &pts {
                            best = best.max(eval_point(op, &fstar, t).map_err(|e| e.to_string())?);
                        }
                        Ok(best)
                    };
                    let sup_r = sup(&r_op)?;
                    let sup_s = sup(&s_op)?;
                    let slack = 1.0 + 1e-6;
                    if sup_r > c_rs * sup_s * slack {
                        return Err(format!(
                            "alpha={alpha}, m={m}, f {k}: supR {sup_r} > {c_rs}*supS {sup_s}"
                        ));
                    }
                    if sup_s > c_sr * sup_r * slack {
                        return Err(format!(
                            "alpha={alpha}, m={m}, f {k}: supS {sup_s} > {c_sr}*supR {sup_r}"
                        ));
                    }
                }
            }
        }
        Ok(())
    };
    report(
        5,
        "explicit-constant two-sided bounds between the order-m and simplified upstream kernels",
        run().map(|_| "2 profiles x 3 orders x 100 functions, zero violations".to_string()),
    );
}

#[test]
fn criterion_06_prefactored_kernel_domination() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let factorial = |k: u32| (1..=k.max(1)).product::<u32>() as f64;
    let mut run = || -> Result<(), String> {
        let phis = vec![
            ("gauss", PhiSpec::gauss()),
            ("boltzmann(1)", PhiSpec::boltzmann(1.0).map_err(|e| e.to_string())?),
            ("boltzmann(1.5)", PhiSpec::boltzmann(1.5).map_err(|e| e.to_string())?),
        ];
        for (name, phi) in &phis {
            for m in 1..=2u32 {
                let p_op = OperatorSpec::P { phi: phi.clone(), m };
                let h_op = OperatorSpec::H {
                    profile: ProfileJ::l_phi(phi.clone()),
                    j: m,
                };
                let c = 2f64.powi(m as i32) * factorial(m - 1);
                for k in 0..100 {
                    let f = random_step(&mut rng, 4);
                    for &t in &Grid::geometric(32, 1e-8).interior_points() {
                        let p_val = eval_point(&p_op, &f, t).map_err(|e| e.to_string())?;
                        let h_val = eval_point(&h_op, &f, t).map_err(|e| e.to_string())?;
                        if p_val > c * h_val * (1.0 + 1e-9) + 1e-14 {
                            return Err(format!(
                                "phi={name}, m={m}, f {k}, t={t}: {p_val} > {c}*{h_val}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    };
    report(
        6,
        "prefactored product kernel is dominated by the profile kernel with the stated constant",
        run().map(|_| "3 measures x 2 orders x 100 functions, pointwise".to_string()),
    );
}

#[test]
fn criterion_07_classifier_decision_tables() {
    let leb = SpaceSpec::lebesgue;
    let lor = SpaceSpec::lorentz;
    let lz = SpaceSpec::lorentz_zygmund;
    let l1 = SpaceSpec::l1;
    let linf = SpaceSpec::linfty;
    let inf = f64::INFINITY;
    let john = |n| DomainSpec::John { n };
    let mazya = |alpha| DomainSpec::MazyaClass { alpha, n: 2 };
    let mazya3 = |alpha| DomainSpec::MazyaClass { alpha, n: 3 };
    let gauss = || DomainSpec::Product {
        phi: PhiSpec::gauss(),
        n: 2,
    };
    let boltz = |b: f64| DomainSpec::Product {
        phi: PhiSpec::boltzmann(b).unwrap(),
        n: 2,
    };
    use Compactness::{No, OutOfScope, Yes};
    let table: Vec<(&str, DomainSpec, u32, SpaceSpec, SpaceSpec, Compactness)> = vec![
        ("john supercritical order", john(2), 3, l1(), linf(), Yes),
        ("john m=n exceptional", john(3), 3, l1(), linf(), No),
        ("john m=n lebesgue target", john(3), 3, l1(), leb(7.0), Yes),
        ("john m=n lorentz source", john(3), 3, lor(2.0, 1.0), linf(), Yes),
        ("john n=2 m=n exceptional", john(2), 2, l1(), linf(), No),
        ("john m=n bounded source", john(2), 2, linf(), linf(), Yes),
        ("john supercritical p", john(2), 1, leb(3.0), linf(), Yes),
        ("john critical p, finite target", john(2), 1, leb(2.0), leb(17.0), Yes),
        ("john critical p, sup target", john(2), 1, leb(2.0), linf(), No),
        ("john subcritical inside window", john(2), 1, leb(1.5), leb(5.0), Yes),
        ("john subcritical at threshold", john(2), 1, leb(1.5), leb(6.0), No),
        ("john n=3 exact critical p", john(3), 1, leb(3.0), leb(100.0), Yes),
        ("john n=3 critical sup target", john(3), 1, leb(3.0), linf(), No),
        ("john n=3 order 2 window", john(3), 2, l1(), leb(2.9), Yes),
        ("john n=3 order 2 threshold", john(3), 2, l1(), leb(3.0), No),
        ("mazya lorentz threshold", mazya(0.5), 1, lor(1.5, 1.0), lor(6.0, 1.0), No),
        ("mazya lorentz window", mazya(0.5), 1, lor(1.5, 1.0), lor(5.0, 9.0), Yes),
        ("mazya critical p large target", mazya(0.5), 1, lor(2.0, 1.0), leb(100.0), Yes),
        ("mazya critical p sup target", mazya(0.5), 1, lor(2.0, 3.0), linf(), No),
        ("mazya supercritical p", mazya(0.5), 1, lor(3.0, 2.0), linf(), Yes),
        ("mazya 3/4 order 2 supercritical", mazya(0.75), 2, lor(3.0, 2.0), linf(), Yes),
        ("mazya 3/4 order 2 threshold", mazya(0.75), 2, l1(), leb(2.0), No),
        ("mazya 3/4 order 2 window", mazya(0.75), 2, l1(), leb(1.9), Yes),
        ("mazya critical order exceptional", mazya(0.75), 4, l1(), linf(), No),
        ("mazya critical order generic", mazya(0.75), 4, lor(1.0, 1.0), leb(2.0), Yes),
        ("mazya supercritical order", mazya(0.5), 3, l1(), linf(), Yes),
        ("mazya order 2 exceptional", mazya(0.5), 2, l1(), linf(), No),
        ("mazya order 2 swapped pair", mazya(0.5), 2, linf(), l1(), Yes),
        ("mazya borderline p equal", mazya(1.0), 1, leb(2.0), leb(2.0), No),
        ("mazya borderline p drop", mazya(1.0), 1, leb(3.0), leb(2.0), Yes),
        ("mazya borderline q only", mazya(1.0), 1, lor(2.0, 1.0), lor(2.0, 9.0), No),
        ("mazya borderline sup source", mazya(1.0), 1, linf(), lor(5.0, 2.0), Yes),
        ("mazya borderline l1 pair", mazya(1.0), 1, l1(), l1(), No),
        ("mazya borderline sup log -3", mazya(1.0), 2, linf(), lz(inf, inf, -3.0), Yes),
        ("mazya borderline sup log -2", mazya(1.0), 2, linf(), lz(inf, inf, -2.0), No),
        ("mazya borderline sup log q", mazya(1.0), 1, linf(), lz(inf, 2.0, -2.0), Yes),
        ("mazya borderline sup log q edge", mazya(1.0), 1, linf(), lz(inf, 2.0, -1.5), No),
        ("mazya borderline l1 source any", mazya(1.0), 1, l1(), lz(inf, inf, -5.0), No),
        ("mazya l1 log target neg", mazya(0.5), 1, l1(), lz(2.0, 2.0, -1.0), Yes),
        ("mazya l1 log target pos", mazya(0.5), 1, l1(), lz(2.0, 2.0, 1.0), No),
        ("mazya 3/4 l1 log neg", mazya(0.75), 1, l1(), lz(4.0, 4.0, -0.5), Yes),
        ("mazya 3/4 l1 log pos", mazya(0.75), 1, l1(), lz(4.0, 4.0, 0.5), No),
        ("mazya l1 strong target", mazya(0.5), 1, l1(), lz(1.5, 1.5, -9.0), Yes),
        ("mazya l1 weak target", mazya(0.5), 1, l1(), lz(3.0, 3.0, -9.0), No),
        ("mazya sup source below 1", mazya(0.5), 1, linf(), lz(2.0, 2.0, 3.0), Yes),
        ("mazya 3/4 sup source", mazya(0.75), 1, linf(), lz(inf, 2.0, -2.0), Yes),
        ("mazya log source uncovered", mazya3(0.9), 2, lz(1.0, 1.0, 0.5), leb(2.0), OutOfScope),
        ("mazya log pair uncovered", mazya(0.5), 1, lz(2.0, 2.0, 0.5), lz(2.0, 2.0, -1.0), OutOfScope),
        ("gaussian lebesgue equal", gauss(), 1, leb(2.0), leb(2.0), Yes),
        ("gaussian lebesgue up", gauss(), 1, leb(2.0), leb(3.0), No),
        ("gaussian lebesgue down", gauss(), 1, leb(3.0), leb(2.0), Yes),
        ("gaussian sup target", gauss(), 5, linf(), linf(), No),
        ("exponential l1 pair", boltz(1.0), 1, l1(), l1(), No),
        ("exponential lebesgue drop", boltz(1.0), 1, leb(2.0), leb(1.5), Yes),
        ("beta 3/2 lebesgue equal", boltz(1.5), 1, leb(2.0), leb(2.0), Yes),
        ("gaussian l1 pair", gauss(), 1, l1(), l1(), Yes),
        ("gaussian log shift window", gauss(), 1, lz(2.0, 2.0, 0.0), lz(2.0, 2.0, 0.49), Yes),
        ("gaussian log shift threshold", gauss(), 1, lz(2.0, 2.0, 0.0), lz(2.0, 2.0, 0.5), No),
        ("gaussian q-swap window", gauss(), 1, lz(2.0, 3.0, 0.0), lz(2.0, 2.0, 0.0), Yes),
        ("gaussian q-swap blocked", gauss(), 1, lz(2.0, 3.0, 0.0), lz(2.0, 2.0, 0.375), No),
        ("gaussian sup-scale window", gauss(), 1, lz(inf, 2.0, -1.0), lz(inf, 1.0, -4.0), Yes),
        ("gaussian sup-scale blocked", gauss(), 1, lz(inf, 2.0, -1.0), lz(inf, 2.0, -1.25), No),
        ("beta 2 order 2 sup window", boltz(2.0), 2, lz(inf, inf, -2.0), lz(inf, inf, -3.5), Yes),
        ("beta 2 order 2 sup threshold", boltz(2.0), 2, lz(inf, inf, -2.0), lz(inf, inf, -3.0), No),
    ];
    let count = table.len();
    let run = || -> Result<(), String> {
        for (name, domain, m, x, y, want) in table {
            let v = classify(&EmbeddingQuery { domain, m, x, y }).map_err(|e| format!("{name}: {e}"))?;
            if v.compact != want {
                return Err(format!("{name}: got {:?}, want {want:?} (rule: {})", v.compact, v.rule));
            }
        }
        Ok(())
    };
    assert!(count >= 60, "need at least 60 enumerated queries, have {count}");
    report(
        7,
        "hand-enumerated classifier queries spanning every decision branch",
        run().map(|_| format!("{count} queries, all branches")),
    );
}

#[test]
fn criterion_08_classifier_probe_concordance() {
    let leb = SpaceSpec::lebesgue;
    let lor = SpaceSpec::lorentz;
    let l1 = SpaceSpec::l1;
    let linf = SpaceSpec::linfty;
    // (description, alpha-or-john, m, X, Y, expected-compact)
    struct Case {
        name: &'static str,
        domain: DomainSpec,
        iso: IsoProfile,
        m: u32,
        x: SpaceSpec,
        y: SpaceSpec,
        compact: bool,
    }
    let mazya_case = |name, alpha: f64, m, x, y, compact| Case {
        name,
        domain: DomainSpec::MazyaClass { alpha, n: 2 },
        iso: IsoProfile::mazya(alpha).unwrap(),
        m,
        x,
        y,
        compact,
    };
    let cases = vec![
        mazya_case("l1 into 1.2", 0.5, 1, l1(), leb(1.2), true),
        mazya_case("l1 into l1", 0.5, 1, l1(), l1(), true),
        mazya_case("sup into 2", 0.5, 1, linf(), leb(2.0), true),
        mazya_case("sup into l1", 0.5, 1, linf(), l1(), true),
        mazya_case("6 into sup", 0.5, 1, leb(6.0), linf(), true),
        mazya_case("order2 l1 into 1.2", 0.75, 2, l1(), leb(1.2), true),
        mazya_case("borderline 2 into 4/3", 1.0, 1, leb(2.0), leb(4.0 / 3.0), true),
        mazya_case("borderline sup into 2", 1.0, 1, linf(), leb(2.0), true),
        Case {
            name: "john lorentz identity",
            domain: DomainSpec::John { n: 2 },
            iso: IsoProfile::john(2).unwrap(),
            m: 1,
            x: lor(1.5, 1.0),
            y: lor(1.5, 1.0),
            compact: true,
        },
        mazya_case("3/4 l1 into l1", 0.75, 1, l1(), l1(), true),
        mazya_case("order2 exceptional", 0.5, 2, l1(), linf(), false),
        mazya_case("l1 at threshold 2", 0.5, 1, l1(), leb(2.0), false),
        mazya_case("1.5 at threshold 6", 0.5, 1, leb(1.5), leb(6.0), false),
        mazya_case("borderline 2 into 2", 1.0, 1, leb(2.0), leb(2.0), false),
        mazya_case("borderline 3 into 3", 1.0, 1, leb(3.0), leb(3.0), false),
        mazya_case("order2 l1 at threshold", 0.75, 2, l1(), leb(2.0), false),
        Case {
            name: "john lorentz threshold",
            domain: DomainSpec::John { n: 2 },
            iso: IsoProfile::john(2).unwrap(),
            m: 1,
            x: lor(1.5, 1.0),
            y: lor(6.0, 1.0),
            compact: false,
        },
        mazya_case("borderline lorentz equal", 1.0, 1, lor(4.0, 2.0), lor(4.0, 2.0), false),
        mazya_case("3/4 order 1 threshold", 0.75, 1, leb(4.0 / 3.0), leb(2.0), false),
        mazya_case("borderline order 2 equal", 1.0, 2, leb(2.0), leb(2.0), false),
    ];
    let n_yes = cases.iter().filter(|c| c.compact).count();
    assert_eq!((n_yes, cases.len() - n_yes), (10, 10));
    let cfg = ProbeConfig {
        min_a: 1e-6,
        ..ProbeConfig::default()
    };
    let run = || -> Result<(), String> {
        for c in &cases {
            let v = classify(&EmbeddingQuery {
                domain: c.domain.clone(),
                m: c.m,
                x: c.x.clone(),
                y: c.y.clone(),
            })
            .map_err(|e| format!("{}: {e}", c.name))?;
            let want = if c.compact { Compactness::Yes } else { Compactness::No };
            if v.compact != want {
                return Err(format!("{}: classifier gave {:?}", c.name, v.compact));
            }
            let op = OperatorSpec::K {
                iso: c.iso.clone(),
                m: c.m,
            };
            let start = Instant::now();
            let curve = probe_cutoff_domain(&c.x, &c.y, &op, &cfg)
                .map_err(|e| format!("{}: probe failed: {e}", c.name))?;
            let elapsed = start.elapsed();
            if elapsed.as_secs_f64() >= 30.0 {
                return Err(format!("{}: curve took {elapsed:?}", c.name));
            }
            match (&curve.hint, c.compact) {
                (VerdictHint::TendsToZero, true) | (VerdictHint::BoundedBelow { .. }, false) => {}
                (hint, _) => {
                    let lbs: Vec<f64> = curve.points.iter().map(|p| p.lower_bound).collect();
                    return Err(format!(
                        "{}: hint {hint:?} disagrees with compact={} (curve {lbs:?})",
                        c.name, c.compact
                    ));
                }
            }
        }
        Ok(())
    };
    report(
        8,
        "probe hints agree with classifier verdicts on 10 compact and 10 non-compact configurations",
        run().map(|_| "20 configurations, default thresholds".to_string()),
    );
}

#[test]
fn criterion_09_bruteforce_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let profile = ProfileJ::power(0.5).unwrap();
    let mut run = || -> Result<(), String> {
        for k in 0..50 {
            let vals: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..2.0)).collect();
            let f = StepFunction::on_equal_cells(vals).map_err(|e| e.to_string())?;
            let closed = optimal_domain_norm(
                &SpaceSpec::linfty(),
                &profile,
                1,
                &f,
                DomainNormMode::ClosedForm,
            )
            .map_err(|e| e.to_string())?
            .value;
            let brute = optimal_domain_norm(
                &SpaceSpec::linfty(),
                &profile,
                1,
                &f,
                DomainNormMode::Bruteforce,
            )
            .map_err(|e| e.to_string())?
            .value;
            let lo = closed * (1.0 - 1e-6);
            let hi = 2.0 * closed * (1.0 + 1e-6);
            if !(lo <= brute && brute <= hi) {
                return Err(format!("f {k}: brute {brute} outside [{lo}, {hi}]"));
            }
        }
        let cfg = ProbeConfig::default();
        for a in [1.0, 0.25] {
            let (left, right) = duality_identity_check(
                &SpaceSpec::lebesgue(2.0),
                &SpaceSpec::lebesgue(2.0),
                &ProfileJ::one(),
                1,
                a,
                &cfg,
            )
            .map_err(|e| e.to_string())?;
            let gap = (left - right).abs() / left.max(right);
            if gap > 0.02 {
                return Err(format!("duality at a={a}: left {left}, right {right}, gap {gap:.3}"));
            }
        }
        Ok(())
    };
    report(
        9,
        "brute-force domain norm sits inside the closed-form bracket; duality sides agree within 2%",
        run().map(|_| "50 functions + 2 duality configurations".to_string()),
    );
}

#[test]
fn criterion_10_model_domain_geometry() {
    let run = || -> Result<(), String> {
        for alpha in [0.5, 0.75, 1.0] {
            for n in [2u32, 3] {
                // the model cusp in R^n only exists for alpha >= (n-1)/n,
                // so (1/2, 3) is not a valid combination
                if alpha < (n as f64 - 1.0) / n as f64 {
                    continue;
                }
                let d = mazya_model_domain(alpha, n).map_err(|e| e.to_string())?;
                let vol = d.volume_by_quadrature();
                if (vol - 1.0).abs() > 1e-6 {
                    return Err(format!("alpha={alpha}, n={n}: volume {vol}"));
                }
                let ts: Vec<f64> = if d.length.is_finite() {
                    [0.1, 0.5, 0.9].iter().map(|f| f * d.length).collect()
                } else {
                    vec![0.5, 2.0, 5.0]
                };
                for t in ts {
                    let exact = d.level_volume(t);
                    let quad = d.level_volume_by_quadrature(t);
                    if (exact - quad).abs() > 1e-6 {
                        return Err(format!(
                            "alpha={alpha}, n={n}, t={t}: {exact} vs {quad}"
                        ));
                    }
                }
            }
        }
        Ok(())
    };
    report(
        10,
        "model domain volume is 1 and the level-set identity holds by quadrature",
        run().map(|_| "valid (alpha, n) combinations with alpha >= (n-1)/n, 1e-6".to_string()),
    );
}

#[test]
fn criterion_11_gaussian_profile_machinery() {
    let run = || -> Result<String, String> {
        let gauss = PhiSpec::gauss();
        let c = gauss.c_phi();
        let want = (2.0 * std::f64::consts::PI).sqrt().recip();
        if (c - want).abs() > 1e-10 {
            return Err(format!("profile constant {c} vs {want}"));
        }
        let (lo1, hi1) = check_iso_equivalence(&gauss, 200).map_err(|e| e.to_string())?;
        let (lo2, hi2) = check_iso_equivalence(&gauss, 400).map_err(|e| e.to_string())?;
        if !(lo1.is_finite() && hi1.is_finite() && lo1 > 0.0) {
            return Err(format!("ratio interval degenerate: [{lo1}, {hi1}]"));
        }
        let move_lo = (lo1 - lo2).abs() / lo1;
        let move_hi = (hi1 - hi2).abs() / hi1;
        if move_lo >= 0.01 || move_hi >= 0.01 {
            return Err(format!(
                "interval moved on refinement: [{lo1}, {hi1}] -> [{lo2}, {hi2}]"
            ));
        }
        Ok(format!(
            "constant exact to 1e-10; ratio interval [{lo1:.4}, {hi1:.4}] stable to <1%"
        ))
    };
    report(
        11,
        "gaussian profile constant and refinement-stable profile-equivalence interval",
        run(),
    );
}

#[test]
fn criterion_12_strict_threshold_sensitivity() {
    use Compactness::{No, Yes};
    let leb = SpaceSpec::lebesgue;
    let lz = SpaceSpec::lorentz_zygmund;
    let inf = f64::INFINITY;
    let mazya = |alpha| DomainSpec::MazyaClass { alpha, n: 2 };
    let john = |n| DomainSpec::John { n };
    let gauss = || DomainSpec::Product {
        phi: PhiSpec::gauss(),
        n: 2,
    };
    let boltz2 = || DomainSpec::Product {
        phi: PhiSpec::boltzmann(2.0).unwrap(),
        n: 2,
    };
    // each entry: (domain, m, X, Y at the exact threshold, Y just inside)
    let pairs: Vec<(DomainSpec, u32, SpaceSpec, SpaceSpec, SpaceSpec)> = vec![
        (mazya(0.5), 1, leb(1.0), leb(2.0), leb(2.0 - 1e-9)),
        (mazya(0.5), 1, leb(1.5), leb(6.0), leb(6.0 - 1e-9)),
        (mazya(0.5), 1, leb(1.75), leb(14.0), leb(14.0 - 1e-9)),
        (mazya(0.75), 1, leb(2.0), leb(4.0), leb(4.0 - 1e-9)),
        (mazya(0.75), 2, leb(1.0), leb(2.0), leb(2.0 - 1e-9)),
        (mazya(0.75), 2, leb(1.5), leb(6.0), leb(6.0 - 1e-9)),
        (john(2), 1, leb(1.0), leb(2.0), leb(2.0 - 1e-9)),
        (john(4), 3, leb(1.0), leb(4.0), leb(4.0 - 1e-9)),
        (
            gauss(),
            1,
            lz(2.0, 2.0, 0.0),
            lz(2.0, 2.0, 0.5),
            lz(2.0, 2.0, 0.5 - 1e-9),
        ),
        (
            boltz2(),
            2,
            lz(inf, inf, -2.0),
            lz(inf, inf, -3.0),
            lz(inf, inf, -3.0 - 1e-9),
        ),
    ];
    let count = pairs.len();
    let run = || -> Result<(), String> {
        for (i, (domain, m, x, y_at, y_in)) in pairs.into_iter().enumerate() {
            let at = classify(&EmbeddingQuery {
                domain: domain.clone(),
                m,
                x: x.clone(),
                y: y_at,
            })
            .map_err(|e| format!("pair {i}: {e}"))?;
            let inside = classify(&EmbeddingQuery {
                domain,
                m,
                x,
                y: y_in,
            })
            .map_err(|e| format!("pair {i}: {e}"))?;
            if at.compact != No {
                return Err(format!("pair {i}: exact threshold gave {:?}", at.compact));
            }
            if inside.compact != Yes {
                return Err(format!("pair {i}: inside threshold gave {:?}", inside.compact));
            }
        }
        Ok(())
    };
    report(
        12,
        "verdicts flip exactly at the rational thresholds, not before",
        run().map(|_| format!("{count} threshold pairs, 1e-9 separation")),
    );
}
