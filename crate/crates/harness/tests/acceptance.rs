//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use num_rational::BigRational;
use stechkin_core::constants as cst;
use stechkin_core::constants::VpNormBound;
use stechkin_core::trig::lebesgue_constant;
use stechkin_harness::{run, Campaign, CampaignConfig, Row, VerificationReport};

fn choose(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn rows<'a>(report: &'a VerificationReport, claim: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
    report.rows.iter().filter(move |r| r.claim_id == claim)
}

fn param(r: &Row, key: &str) -> u32 {
    r.params[key].parse().expect("integer parameter")
}

fn no_failures(report: &VerificationReport) -> Result<()> {
    let bad: Vec<String> = report.failures().map(|r| format!("{} {:?}", r.claim_id, r.params)).collect();
    ensure!(bad.is_empty(), "failing rows: {bad:?}");
    Ok(())
}

fn constants_table() -> Result<String> {
    let t = Instant::now();
    let report = run(&CampaignConfig::for_campaign(Campaign::Constants))?;
    no_failures(&report)?;
    let s = 8.0 / 9.0;
    let values = [
        (cst::composite_vp_constant(2.0, s, 1.0, VpNormBound::LogBound)?, 4.999144),
        (cst::composite_vp_constant(2.0, s, 1.0, VpNormBound::IntegerLogBound)?, 4.962628),
        (cst::composite_vp_constant(2.0, s, 1.0, VpNormBound::ExactEll)?, 4.946034),
        (lebesgue_constant(8, 1e-12).value, 2.137730),
    ];
    let worst = values.iter().map(|(v, e)| (v - e).abs()).fold(0.0, f64::max);
    ensure!(worst <= 1e-5, "max deviation {worst:e}");
    ensure!(values[0].0 < 5.0, "composite constant not below 5");
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.1}s");
    Ok(format!("max deviation {worst:.1e}, {secs:.2}s"))
}

fn small_r_table() -> Result<String> {
    let t = Instant::now();
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let cases = [(1, q(1, 1), 5.0 / 4.0), (1, q(2, 1), 17.0 / 16.0), (2, q(1, 1), 517.0 / 192.0), (2, q(2, 1), 3397.0 / 3072.0), (3, q(2, 1), 1.4552)];
    let mut worst: f64 = 0.0;
    for (k, alpha, expected) in &cases {
        let v = cst::small_r_constant(*k, cst::rational_to_f64(alpha))?;
        worst = worst.max((v - expected).abs());
    }
    ensure!(worst <= 1e-4, "max deviation {worst:e}");
    for (k, alpha, expected) in cases.iter().take(4) {
        let exact = cst::rational_to_f64(&cst::small_r_constant_exact(*k, alpha)?);
        ensure!(exact == *expected, "exact value for k={k} is {exact}");
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.2}s");
    Ok(format!("max deviation {worst:.1e}, {secs:.3}s"))
}

fn favard_constants() -> Result<String> {
    let closed = [1.0, PI / 2.0, PI.powi(2) / 8.0, PI.powi(3) / 24.0, 5.0 * PI.powi(4) / 384.0, PI.powi(5) / 240.0, 61.0 * PI.powi(6) / 46080.0];
    let mut worst: f64 = 0.0;
    for (r, c) in closed.iter().enumerate() {
        worst = worst.max((cst::favard(r as u32, 1e-14).value - c).abs());
    }
    ensure!(worst <= 1e-10, "max deviation {worst:e}");
    Ok(format!("F_0..F_6 max deviation {worst:.1e}"))
}

fn mu_identity() -> Result<String> {
    let mut worst: f64 = 0.0;
    for k in 1..=30u32 {
        // finite sum recomputed here in floating point
        let c = choose(2 * k, k);
        let s: f64 = (1..=k).step_by(2).map(|i| choose(2 * k, k + i) / c / f64::from(i * i)).sum();
        let lhs = 1.0 - 8.0 / (PI * PI) * s;
        let (lib_lhs, rhs) = cst::mu_identity_sides(k)?;
        ensure!((lhs - lib_lhs).abs() < 1e-12, "finite sum mismatch at k={k}");
        worst = worst.max((lhs - rhs).abs());
    }
    ensure!(worst <= 1e-9, "identity deviation {worst:e}");
    for k in 1..=200u32 {
        let one_minus = 1.0 - cst::mu_squared(k)?;
        let s = (2.0 * f64::from(k)).sqrt();
        ensure!(2.0 / (3.0 * s) < one_minus && one_minus < 5.0 / (4.0 * s), "bracket fails at k={k}");
    }
    Ok(format!("identity deviation {worst:.1e} for k ≤ 30, bracket holds for k ≤ 200"))
}

fn omega_star(report: &VerificationReport) -> Result<String> {
    let mut seen = 0;
    for r in rows(report, "omega-star-cos") {
        ensure!(r.tolerance <= 1e-6, "tolerance {}", r.tolerance);
        ensure!(!r.status.is_failure(), "n={} k={}", r.params["n"], r.params["k"]);
        let k = param(r, "k");
        let expect = 1.0 - cst::mu_squared(k)?;
        ensure!((r.reference - expect).abs() < 1e-15, "reference drift at k={k}");
        seen += 1;
    }
    ensure!(seen == 24, "expected 24 (n, k) pairs, got {seen}");
    Ok(format!("{seen} pairs within 1e-6"))
}

fn cos_modulus(report: &VerificationReport) -> Result<String> {
    let mut worst: f64 = 0.0;
    let mut seen = 0;
    for r in rows(report, "cos-modulus") {
        let n = param(r, "n");
        if n != 4 && n != 8 {
            continue;
        }
        let rr = param(r, "r");
        let alpha: f64 = r.params["alpha"].parse()?;
        let exact = (2.0 * (alpha * PI / 2.0).sin()).powi(rr as i32);
        worst = worst.max((r.computed - exact).abs());
        seen += 1;
    }
    ensure!(seen == 2 * 8 * 3, "expected 48 cases, got {seen}");
    ensure!(worst <= 1e-6, "max deviation {worst:e}");
    Ok(format!("{seen} cases, max deviation {worst:.1e}"))
}

fn lower_bound() -> Result<String> {
    let mut cfg = CampaignConfig::for_campaign(Campaign::LowerBound);
    cfg.n_range = vec![2, 4, 6, 8, 10, 12, 16];
    let report = run(&cfg)?;
    no_failures(&report)?;
    let eps = 1e-3;
    let mut pairs = 0;
    for r in rows(&report, "step-modulus") {
        let rr = param(r, "r");
        ensure!(r.computed == choose(rr - 1, (rr - 1) / 2), "Step modulus at r={rr}: {}", r.computed);
        pairs += 1;
    }
    ensure!(pairs == 1 + 2 + 3 + 4 + 5 + 6 + 6, "unexpected (n, r) coverage {pairs}");
    for r in rows(&report, "step-best-approx") {
        ensure!(r.computed == 0.5, "E(step) = {}", r.computed);
    }
    for r in rows(&report, "smoothed-step-best-approx") {
        let n = param(r, "n") as f64;
        ensure!(r.computed >= 0.5 - 2.0 * (n - 1.0) * eps - 1e-3, "smoothed E = {} at n={n}", r.computed);
    }
    ensure!(rows(&report, "smoothed-step-ratio").count() == pairs, "missing ratio rows");
    Ok(format!("{pairs} (n, r) pairs with n ≥ 2r"))
}

fn theorem1(t1: &VerificationReport, vp: &VerificationReport, secs: f64) -> Result<String> {
    no_failures(t1)?;
    no_failures(vp)?;
    ensure!(rows(t1, "solver-convergence").count() == 0, "unconverged best approximations");
    let mut worst = f64::NEG_INFINITY;
    let mut seen = 0;
    for s in &t1.ratio_samples {
        if s.omega <= 1e-14 {
            continue;
        }
        let margin = s.e / s.omega - (5.0 * cst::gamma_star_f64(s.r) + 1e-6);
        worst = worst.max(margin);
        seen += 1;
    }
    ensure!(worst <= 0.0, "ratio exceeds 5γ* by {worst:e}");
    let ns: std::collections::BTreeSet<usize> = t1.ratio_samples.iter().map(|s| s.n).collect();
    ensure!(ns.into_iter().collect::<Vec<_>>() == vec![8, 12, 18, 24], "n coverage");
    let direct = rows(vp, "vp-direct").count();
    ensure!(direct > 0, "no direct rows");
    ensure!(secs < 300.0, "took {secs:.0}s");
    Ok(format!("{seen} ratios, worst margin {worst:.3}; {direct} direct checks; {secs:.0}s"))
}

fn operator_identities(ops: &VerificationReport, vp: &VerificationReport) -> Result<String> {
    no_failures(ops)?;
    let dec = rows(ops, "operator-decomposition").map(|r| r.computed).fold(0.0, f64::max);
    ensure!(dec <= 1e-8, "decomposition residual {dec:e}");
    ensure!(rows(ops, "operator-w-bound").count() > 0, "no W bound rows");
    let vp_res = rows(vp, "vp-orthogonality").chain(rows(vp, "vp-reproduction")).map(|r| r.computed).fold(0.0, f64::max);
    ensure!(vp_res <= 1e-10, "VP residual {vp_res:e}");
    Ok(format!("decomposition {dec:.1e}, VP residual {vp_res:.1e}"))
}

fn l2(report: &VerificationReport) -> Result<String> {
    no_failures(report)?;
    let opt = rows(report, "l2-optimality").count();
    let mut worst = f64::NEG_INFINITY;
    for r in rows(report, "l2-chernykh") {
        let rr = param(r, "r");
        ensure!(rr <= 6, "r={rr}");
        ensure!(r.tolerance <= 1e-6, "tolerance {}", r.tolerance);
        worst = worst.max(r.computed - r.reference);
    }
    ensure!(opt > 0 && worst.is_finite(), "missing rows");
    Ok(format!("{opt} optimality checks, worst E₂ − c·ω₂ = {worst:.3}"))
}

fn determinism() -> Result<String> {
    let mut names = Vec::new();
    for c in [Campaign::Constants, Campaign::LowerBound, Campaign::L2Chernykh, Campaign::OperatorIdentities] {
        let cfg = CampaignConfig::for_campaign(c);
        let a = run(&cfg)?.to_json();
        let b = run(&cfg)?.to_json();
        ensure!(a == b, "{} differs between runs", c.name());
        names.push(c.name());
    }
    let mut cfg = CampaignConfig::for_campaign(Campaign::Theorem1Upper);
    cfg.n_range = vec![8];
    ensure!(run(&cfg)?.to_json() == run(&cfg)?.to_json(), "theorem1-upper differs between runs");
    names.push("theorem1-upper");
    Ok(format!("byte-identical: {}", names.join(", ")))
}

fn main() -> ExitCode {
    let results = std::cell::RefCell::new(Vec::new());
    let report = |id: u32, name: &str, r: Result<String>| {
        let line = match &r {
            Ok(d) => format!("criterion {id:>2} PASS  {name}: {d}"),
            Err(e) => format!("criterion {id:>2} FAIL  {name}: {e:#}"),
        };
        println!("{line}");
        results.borrow_mut().push(r.is_ok());
    };

    report(1, "constants table", constants_table());
    report(2, "small-r constants", small_r_table());
    report(3, "Favard constants", favard_constants());
    report(4, "mu identity and bracket", mu_identity());

    let omega = run(&CampaignConfig::for_campaign(Campaign::OmegaStarSharpness)).context("omega-star campaign");
    match &omega {
        Ok(o) => {
            report(5, "smoothed modulus sharpness", omega_star(o));
            report(6, "cosine modulus closed form", cos_modulus(o));
        }
        Err(e) => {
            report(5, "smoothed modulus sharpness", Err(anyhow::anyhow!("{e:#}")));
            report(6, "cosine modulus closed form", Err(anyhow::anyhow!("{e:#}")));
        }
    }

    report(7, "lower bound", lower_bound());

    let t = Instant::now();
    let t1 = run(&CampaignConfig::for_campaign(Campaign::Theorem1Upper));
    let mut vp_cfg = CampaignConfig::for_campaign(Campaign::VpDirect);
    vp_cfg.n_range = vec![8, 12, 18, 24];
    let vp = run(&vp_cfg);
    let secs = t.elapsed().as_secs_f64();
    let vp_ok = match (&t1, &vp) {
        (Ok(a), Ok(b)) => {
            report(8, "upper bound at 2π/n", theorem1(a, b, secs));
            Some(b)
        }
        (Err(e), _) | (_, Err(e)) => {
            report(8, "upper bound at 2π/n", Err(anyhow::anyhow!("{e:#}")));
            None
        }
    };

    let ops = run(&CampaignConfig::for_campaign(Campaign::OperatorIdentities));
    match (ops, vp_ok) {
        (Ok(o), Some(v)) => report(9, "operator identities", operator_identities(&o, v)),
        (Err(e), _) => report(9, "operator identities", Err(e)),
        (_, None) => report(9, "operator identities", Err(anyhow::anyhow!("VP campaign failed"))),
    }

    report(10, "L2 sanity", run(&CampaignConfig::for_campaign(Campaign::L2Chernykh)).and_then(|r| l2(&r)));
    report(11, "determinism", determinism());

    let results = results.into_inner();
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
