//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use ricci_pinch::algebra::{
    decompose, ricci_from_riemann, riemann_inner_product, tr_f_cubed, weyl_quadratic, Metric, Riem4Tensor,
    Sym2Tensor,
};
use ricci_pinch::config::parse_config;
use ricci_pinch::flow::{run, run_with_hook, step, IntegratorConfig, Termination};
use ricci_pinch::geometry::{
    FlowAnsatz, HomogeneousState, ProductSphereState, Scenario, SpaceFormState, UnimodularGroup,
};
use ricci_pinch::monitor::{
    beta, choose_c, default_c1, default_c2, evolution_residuals, reaction_term,
    reaction_upper_bound, MonitorConfig, PointCurvature,
};
use ricci_pinch::runner::{execute, EXIT_PASS};

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Random `g`-trace-free symmetric tensor.
fn random_trace_free(rng: &mut impl Rng, g: &Metric) -> Sym2Tensor {
    let n = g.dim();
    let s = common::random_symmetric(rng, n);
    let tr = s.trace(g).unwrap() / n as f64;
    s.sub(&g.value().scaled(tr)).unwrap()
}

/// Random Weyl tensor for `g` (zero for `n = 3`).
fn random_weyl(rng: &mut impl Rng, g: &Metric) -> Riem4Tensor {
    let n = g.dim();
    if n == 3 {
        return Riem4Tensor::zeros(3);
    }
    let mut t = Riem4Tensor::zeros(n);
    for _ in 0..2 {
        let h = common::random_symmetric(rng, n);
        let k = common::random_symmetric(rng, n);
        t = t.add(&ricci_pinch::algebra::kulkarni_nomizu(&h, &k).unwrap()).unwrap();
    }
    common::weyl_projection(&t, g.value().matrix())
}

fn decomposition_suite() -> Outcome {
    let mut rng = common::rng(1);
    let mut worst = [0.0f64; 5];
    for n in 3..=6 {
        for _ in 0..10_000 {
            let g = common::random_metric(&mut rng, n);
            let rm = common::random_curvature(&mut rng, &g);
            let d = decompose(&rm, &g).map_err(|e| e.to_string())?;
            let rm2 = d.norm_rm * d.norm_rm;
            let ip = |a: &Riem4Tensor, b: &Riem4Tensor| riemann_inner_product(a, b, &g).unwrap();

            let rebuilt = d.u.add(&d.v).unwrap().add(&d.w).unwrap();
            let recon = ip(&rebuilt.sub(&rm).unwrap(), &rebuilt.sub(&rm).unwrap()).sqrt() / d.norm_rm;
            let ortho = [ip(&d.u, &d.v), ip(&d.u, &d.w), ip(&d.v, &d.w)]
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()))
                / rm2;
            let pyth = (rm2 - d.norm_u.powi(2) - d.norm_v.powi(2) - d.norm_w.powi(2)).abs() / rm2;
            let w_trace = ricci_from_riemann(&d.w, &g).unwrap().norm_sq(&g).unwrap().sqrt() / d.norm_rm;
            let f_rel = (d.norm_f - ((n as f64 - 2.0).sqrt() / 2.0) * d.norm_v).abs() / d.norm_rm;

            for (slot, v) in [recon, ortho, pyth, w_trace, f_rel].into_iter().enumerate() {
                worst[slot] = worst[slot].max(v);
            }
        }
    }
    let names = ["reconstruction", "orthogonality", "pythagoras", "W trace", "|F| vs |V|"];
    for (name, v) in names.iter().zip(worst) {
        check(v <= 1e-9, || format!("{name}: worst relative error {v:.3e}"))?;
    }
    Ok(format!(
        "4 x 10^4 tensors, worst rel errors {}",
        names.iter().zip(worst).map(|(n, v)| format!("{n}={v:.1e}")).collect::<Vec<_>>().join(" ")
    ))
}

fn constants_suite() -> Outcome {
    let mut rng = common::rng(2);
    let mut cubic_ratio = 0.0f64;
    let mut weyl_ratio = 0.0f64;
    for n in 3..=6 {
        let c1 = default_c1(n);
        let c2 = default_c2(n);
        for k in 0..100_000 {
            if k % 4 == 0 {
                // Near the extremal direction diag(n-1, -1, ..., -1) in an orthonormal frame.
                let e = Metric::euclidean(n);
                let mut diag = vec![-1.0; n];
                diag[0] = n as f64 - 1.0;
                let pert = common::random_symmetric(&mut rng, n).scaled(rng.gen_range(0.0..0.1));
                let mut f = Sym2Tensor::diagonal(&diag).add(&pert).unwrap();
                let tr = f.trace(&e).unwrap() / n as f64;
                f = f.sub(&Sym2Tensor::diagonal(&vec![tr; n])).unwrap();
                let a = f.norm_sq(&e).unwrap().sqrt();
                let cubic = 2.0 / (n as f64 - 2.0) * tr_f_cubed(&f, &e).unwrap();
                cubic_ratio = cubic_ratio.max(cubic.abs() / (c1 * a.powi(3)));
                continue;
            }
            let g = common::random_metric(&mut rng, n);
            let f = random_trace_free(&mut rng, &g);
            let a = f.norm_sq(&g).unwrap().sqrt();
            let cubic = 2.0 / (n as f64 - 2.0) * tr_f_cubed(&f, &g).unwrap();
            cubic_ratio = cubic_ratio.max(cubic.abs() / (c1 * a.powi(3)));
            if n >= 4 {
                let w = random_weyl(&mut rng, &g);
                let norm_w = riemann_inner_product(&w, &w, &g).unwrap().sqrt();
                let wff = weyl_quadratic(&w, &f, &g).unwrap();
                weyl_ratio = weyl_ratio.max(wff.abs() / (c2 * norm_w * a * a));
            }
        }
        let mut diag = vec![-1.0; n];
        diag[0] = n as f64 - 1.0;
        let e = Metric::euclidean(n);
        let f = Sym2Tensor::diagonal(&diag);
        let lhs = 2.0 / (n as f64 - 2.0) * tr_f_cubed(&f, &e).unwrap();
        let rhs = c1 * f.norm_sq(&e).unwrap().powf(1.5);
        check((lhs - rhs).abs() <= 1e-12 * rhs, || format!("n = {n}: extremal {lhs} vs {rhs}"))?;
    }
    check(cubic_ratio <= 1.0 + 1e-12, || format!("cubic bound exceeded: ratio {cubic_ratio}"))?;
    check(weyl_ratio <= 1.0 + 1e-12, || format!("Weyl bound exceeded: ratio {weyl_ratio}"))?;
    Ok(format!(
        "4 x 10^5 samples, max |cubic|/(c1 a^3) = {cubic_ratio:.6} max |W(F,F)|/(c2|W|a^2) = {weyl_ratio:.4}, extremal equality holds"
    ))
}

fn algebraic_chain_suite() -> Outcome {
    let mut rng = common::rng(3);
    let mut worst_bound = f64::NEG_INFINITY;
    let mut worst_rho = f64::NEG_INFINITY;
    for k in 0..100_000 {
        let n = 3 + k % 4;
        let (c1, c2) = (default_c1(n), default_c2(n));
        let (alpha_sq, gamma) = (c1, c2.sqrt());
        let b = rng.gen_range(0.01..100.0);
        let c = rng.gen_range(0.0..b);
        let g = common::random_metric(&mut rng, n);
        let f = random_trace_free(&mut rng, &g);
        let weyl = random_weyl(&mut rng, &g);
        let norm_f = f.norm_sq(&g).unwrap().sqrt();
        let norm_weyl = riemann_inner_product(&weyl, &weyl, &g).unwrap().sqrt();
        let w = if n == 3 { 0.0 } else { rng.gen_range(0.0..10.0) };
        let a = (alpha_sq + beta(n)) * b + gamma * (b * w).sqrt();

        let bound = reaction_upper_bound(a, b, c, w, n, c1, c2);
        worst_bound = worst_bound.max(bound);

        // A concrete (F, W) with |F| = a and the sampled |W|.
        let s = a / norm_f;
        let tr3 = tr_f_cubed(&f, &g).unwrap() * s.powi(3);
        let wff = if n == 3 {
            0.0
        } else {
            weyl_quadratic(&weyl, &f, &g).unwrap() * s * s * (w / norm_weyl)
        };
        let rho = reaction_term(a, b, c, tr3, wff, n).unwrap();
        worst_rho = worst_rho.max(rho / b);
        check(rho <= bound + 1e-12 * b, || format!("rho {rho} above its bound {bound}"))?;
    }
    check(worst_bound <= 1e-12, || format!("upper bound reached {worst_bound:e}"))?;
    check(worst_rho <= 1e-12, || format!("rho/b reached {worst_rho:e}"))?;
    Ok(format!(
        "10^5 threshold samples, max rho upper bound = {worst_bound:.3e}, max rho/b = {worst_rho:.3e}"
    ))
}

fn exact_flow_suite() -> Outcome {
    // Round S^3: R(t) = 6/(1-4t), extinction at 1/4.
    let s3 = SpaceFormState::new(3, 1.0).unwrap();
    let integ = IntegratorConfig {
        dt_initial: 1e-3,
        t_max: 1.0,
        blowup_threshold: 1e5,
        ..Default::default()
    };
    let trace = run(&s3, &integ, &MonitorConfig::ode()).map_err(|e| e.to_string())?;
    let mut worst_r = 0.0f64;
    let mut reached = 0.0f64;
    let mut t_at = 0.0;
    for s in &trace.samples {
        worst_r = worst_r.max((s.r_min - 6.0 / (1.0 - 4.0 * s.t)).abs() / s.r_min);
        if s.r_min > reached {
            reached = s.r_min;
            t_at = s.t;
        }
    }
    check(reached > 1e4, || format!("S^3 only reached R = {reached}"))?;
    check(worst_r <= 5e-3, || format!("S^3 R(t) off by {worst_r:e}"))?;
    let t_ext = t_at + 1.5 / reached;
    check((t_ext - 0.25).abs() <= 5e-3 * 0.25, || format!("S^3 extinction estimate {t_ext}"))?;
    check(
        trace.termination == Termination::BlowupThresholdHit
            && (trace.t_final - 0.25).abs() <= 5e-3 * 0.25,
        || format!("S^3 run ended {} at {}", trace.termination.name(), trace.t_final),
    )?;

    // Product spheres: r_i^2(t) = r_i^2(0) - 2(p_i - 1) t.
    let mut worst_lin = 0.0f64;
    for (p, q, r1, r2) in [(2, 2, 1.0, 4.0), (3, 2, 2.0, 1.5), (2, 4, 0.5, 3.0)] {
        let state = ProductSphereState::new(p, q, r1, r2).unwrap();
        let integ = IntegratorConfig {
            dt_initial: 1e-3,
            t_max: 1.0,
            blowup_threshold: 1e6,
            ..Default::default()
        };
        run_with_hook(&state, &integ, &MonitorConfig::ode(), |info| {
            let (a, b) = info.state.radii_sq();
            let ea = (a - (r1 - 2.0 * (p as f64 - 1.0) * info.t)).abs();
            let eb = (b - (r2 - 2.0 * (q as f64 - 1.0) * info.t)).abs();
            worst_lin = worst_lin.max(ea).max(eb);
        })
        .map_err(|e| e.to_string())?;
    }
    check(worst_lin <= 1e-10, || format!("product radii off the linear law by {worst_lin:e}"))?;

    // SU(2): fourth order.
    let su2 = HomogeneousState::new(UnimodularGroup::Su2, 1.0, 1.0, 0.5).unwrap();
    let horizon = 0.15;
    let advance = |dt: f64| {
        let mut s = su2.clone();
        for _ in 0..(horizon / dt).round() as usize {
            s = step(&s, dt).unwrap();
        }
        s.coords()
    };
    let reference = advance(1e-5);
    let err = |dt: f64| {
        advance(dt).iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let (e1, e2, e3) = (err(0.01), err(0.005), err(0.0025));
    let (q1, q2) = (e1 / e2, e2 / e3);
    for q in [q1, q2] {
        check((13.0..=19.0).contains(&q), || format!("SU(2) error ratios {q1:.2}, {q2:.2}"))?;
    }
    Ok(format!(
        "S^3 max rel R error {worst_r:.2e} up to R = {reached:.3e}, T ~ {t_ext:.6}; product linear law {worst_lin:.1e}; SU(2) ratios {q1:.2}, {q2:.2}"
    ))
}

fn catalog_verdict_suite() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let catalog = [
        ("round S^3", "scenario=round_sphere\nn=3\nkappa=1\n", true),
        ("SU(2)", "scenario=su2\nA=1\nB=1\nC=0.5\n", true),
        ("Nil", "scenario=nil\nA=1\nB=1\nC=1\n", true),
        ("S^2(1)xS^2(4)", "scenario=product_spheres\np=2\nq=2\nr1sq=1\nr2sq=4\n", false),
        ("neckpinch M=400", "scenario=neckpinch\nn_fiber=3\nM=400\nneck=0.8\n", false),
    ];
    let mut report = Vec::new();
    for (k, (name, family, dim3)) in catalog.iter().enumerate() {
        let text = format!(
            "{family}dt=1e-3\nt_max=50\nblowup_threshold=1e6\noutput={}\n",
            dir.path().join(format!("run{k}.csv")).display()
        );
        let config = parse_config(&text).map_err(|e| format!("{name}: {e}"))?;
        let outcome = execute(&config).map_err(|e| format!("{name}: {e}"))?;
        let trace = &outcome.trace;
        check(outcome.exit_code == EXIT_PASS && outcome.summary.failed == 0, || {
            format!("{name}: {}", outcome.summary_line())
        })?;
        check(outcome.summary.samples == trace.steps + 1, || format!("{name}: samples were thinned"))?;
        let last = trace.samples.last().unwrap();
        match trace.termination {
            Termination::BlowupThresholdHit => {}
            // Nil curvature decays along the flow, so the threshold is never reached.
            Termination::Horizon if *name == "Nil" => {}
            other => return Err(format!("{name}: ended with {}", other.name())),
        }
        if *dim3 {
            check(
                trace.samples.iter().all(|s| s.w_max == 0.0 && s.phi_barrier == trace.monitor.big_c1),
                || format!("{name}: barrier moved off C1"),
            )?;
        }
        report.push(format!(
            "{name} {} t={:.4} |Rm|={:.2e} min_margin={:.3}",
            trace.termination.name(),
            trace.t_final,
            last.rm_max,
            outcome.summary.min_margin
        ));
    }
    Ok(report.join("; "))
}

fn residual_suite() -> Outcome {
    let mut report = Vec::new();
    for (name, state, t0) in [
        ("SU(2)", HomogeneousState::new(UnimodularGroup::Su2, 1.0, 1.0, 0.5).unwrap(), 0.0),
        ("SU(2)", HomogeneousState::new(UnimodularGroup::Su2, 1.0, 1.0, 0.5).unwrap(), 0.1),
        ("Nil", HomogeneousState::new(UnimodularGroup::Nil, 1.0, 1.0, 1.0).unwrap(), 0.0),
        ("Nil", HomogeneousState::new(UnimodularGroup::Nil, 1.0, 1.0, 1.0).unwrap(), 1.0),
    ] {
        let initial = PointCurvature::of_scenario(&state).unwrap()[0].scalar;
        let c = choose_c(initial, None).unwrap();
        let integ = IntegratorConfig { dt_initial: 1e-4, t_max: t0, ..Default::default() };
        let (_, at) = run_with_hook(&state, &integ, &MonitorConfig::ode(), |_| {}).unwrap();
        let before = Scenario::from(at.clone());
        let res = |dt: f64| {
            let after = Scenario::from(step(&at, dt).unwrap());
            let r = evolution_residuals(&before, &after, dt, c).unwrap();
            (r.f2, r.b)
        };
        let dts = [4e-3, 2e-3, 1e-3];
        let r: Vec<_> = dts.iter().map(|&dt| res(dt)).collect();
        for w in r.windows(2) {
            for (coarse, fine) in [(w[0].0, w[1].0), (w[0].1, w[1].1)] {
                let q = coarse / fine;
                check((3.5..=4.5).contains(&q), || {
                    format!("{name} t={t0}: residual ratio {q:.3} ({coarse:e} -> {fine:e})")
                })?;
            }
        }
        let small = res(1e-5);
        check(small.0 <= 1e-6 && small.1 <= 1e-6, || {
            format!("{name} t={t0}: residuals at dt = 1e-5 are {small:?}")
        })?;
        report.push(format!(
            "{name} t={t0}: ratios {:.2}/{:.2}, at 1e-5 F2={:.1e} b={:.1e}",
            r[0].0 / r[1].0,
            r[0].1 / r[1].1,
            small.0,
            small.1
        ));
    }
    Ok(report.join("; "))
}

fn scale_invariance_suite() -> Outcome {
    let lambda = 4.0;
    let base = ProductSphereState::new(2, 2, 1.0, 4.0).unwrap();
    let scaled = ProductSphereState::new(2, 2, lambda, 4.0 * lambda).unwrap();
    let config = |dt: f64, t_max: f64| IntegratorConfig {
        dt_initial: dt,
        t_max,
        blowup_threshold: 1e9,
        ..Default::default()
    };
    let a = run(&base, &config(1e-3, 0.45), &MonitorConfig::ode()).map_err(|e| e.to_string())?;
    let b = run(&scaled, &config(lambda * 1e-3, lambda * 0.45), &MonitorConfig::ode())
        .map_err(|e| e.to_string())?;
    check(a.monitor.c == 0.0 && b.monitor.c == 0.0, || "c = 0 branch not taken".into())?;
    check(a.samples.len() == b.samples.len(), || {
        format!("{} vs {} samples", a.samples.len(), b.samples.len())
    })?;
    let mut worst_t = 0.0f64;
    let mut worst_phi = 0.0f64;
    for (x, y) in a.samples.iter().zip(&b.samples) {
        worst_t = worst_t.max((y.t / lambda - x.t).abs() / x.t.max(1e-300));
        worst_phi = worst_phi.max((x.phi_max - y.phi_max).abs() / x.phi_max);
    }
    check(worst_t <= 1e-12, || format!("sample times drift by {worst_t:e}"))?;
    check(worst_phi <= 1e-8, || format!("phi_max differs by {worst_phi:e}"))?;
    Ok(format!("{} samples, max rel phi_max gap {worst_phi:.2e}", a.samples.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("1 decomposition", decomposition_suite, Duration::from_secs(30)),
        ("2 constant validity", constants_suite, Duration::from_secs(60)),
        ("3 algebraic chain", algebraic_chain_suite, Duration::from_secs(30)),
        ("4 exact flows", exact_flow_suite, Duration::from_secs(120)),
        ("5 catalog verdicts", catalog_verdict_suite, Duration::from_secs(600)),
        ("6 evolution residuals", residual_suite, Duration::from_secs(120)),
        ("7 scale invariance", scale_invariance_suite, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let started = Instant::now();
        let outcome = f();
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => {
                Err(format!("{detail}; took {elapsed:.1?}, budget {budget:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
