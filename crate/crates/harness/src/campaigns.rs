//! Verification campaigns. Each returns a [`VerificationReport`]; rows are
//! computed independently (in parallel) and sorted on assembly.

use std::f64::consts::{PI, TAU};

use anyhow::Context;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stechkin_core::bestapprox::{best_l2, best_uniform, l2_distance, uniform_distance};
use stechkin_core::constants::{self as cst, VpNormBound};
use stechkin_core::fncore::integrate_with_breaks;
use stechkin_core::smoothness::{
    fh_derivative_bound, fh_derivative_norm, identity_minus_u_at, modulus, operator_w_at, operator_w_norm,
    smoothed_modulus, NormIndex,
};
use stechkin_core::trig::{ell_function, fourier_coeffs, lebesgue_constant, vallee_poussin};
use stechkin_core::{GridSpec, PeriodicFunction, TrigPoly};

use crate::config::{Campaign, CampaignConfig};
use crate::corpus::{self, CorpusEntry};
use crate::report::{row, Metadata, RatioSample, Row, Status, VerificationReport};

fn ratio(p: i64, q: i64) -> f64 {
    p as f64 / q as f64
}

pub fn run(cfg: &CampaignConfig) -> anyhow::Result<VerificationReport> {
    cfg.validate()?;
    let (rows, samples) = match cfg.campaign {
        Campaign::Constants => (run_constants_campaign(cfg)?, vec![]),
        Campaign::Theorem1Upper
        | Campaign::Theorem2Alpha
        | Campaign::Theorem3PiOverN
        | Campaign::Theorem4SmallR
        | Campaign::ConjectureSweep => run_stechkin_sweep(cfg)?,
        Campaign::LowerBound => (run_lower_bound(cfg)?, vec![]),
        Campaign::OmegaStarSharpness => {
            let mut rows = run_omega_star_sharpness(cfg)?;
            rows.extend(run_cos_extremal(cfg)?);
            (rows, vec![])
        }
        Campaign::L2Chernykh => (run_l2_chernykh(cfg)?, vec![]),
        Campaign::VpDirect => (run_vp_direct_check(cfg)?, vec![]),
        Campaign::FavardEquality => (run_favard_equality_check(cfg)?, vec![]),
        Campaign::OperatorIdentities => (run_operator_identities(cfg)?, vec![]),
    };
    Ok(VerificationReport::new(Metadata::from_config(cfg), rows, samples))
}

fn k_of(r: u32) -> u32 {
    r.div_ceil(2)
}

// ---------------------------------------------------------------- constants

pub fn run_constants_campaign(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    let tol = cfg.tol("constants", 1e-10);
    let mut rows = Vec::new();

    for (r, q) in [(1u32, 1i64), (2, 2), (4, 6), (6, 20)] {
        let g = cst::gamma_star(r)?;
        let ok = g == BigRational::new(1.into(), q.into());
        rows.push(row("gamma-star", "gamma-star").param("r", r).check(ok, cst::rational_to_f64(&g), ratio(1, q), 0.0));
    }
    let doubling_ok = (1..=20u32).all(|k| cst::gamma_star(2 * k - 1).ok() == cst::gamma_star(2 * k).ok().map(|g| g * BigRational::from_integer(2.into())));
    rows.push(row("gamma-star-doubling", "gamma-star").param("k_max", 20).check(doubling_ok, 0.0, 0.0, 0.0));

    let closed = [
        1.0,
        PI / 2.0,
        PI.powi(2) / 8.0,
        PI.powi(3) / 24.0,
        5.0 * PI.powi(4) / 384.0,
        PI.powi(5) / 240.0,
        61.0 * PI.powi(6) / 46080.0,
    ];
    for (r, &c) in closed.iter().enumerate() {
        let f = cst::favard(r as u32, 1e-13);
        rows.push(row("favard", "favard-constants").param("r", r).equal(f.value, c, tol));
    }
    let fav: Vec<f64> = (0..=12).map(|r| cst::favard(r, 1e-13).value).collect();
    let four_pi = 4.0 / PI;
    let interleaved = (0..=10).step_by(2).all(|r| fav[r] < fav[r + 2])
        && (1..=9).step_by(2).all(|r| fav[r] > fav[r + 2])
        && fav[12] < four_pi
        && four_pi < fav[11];
    rows.push(row("favard-interleaving", "favard-constants").param("r_max", 12).check(interleaved, fav[12], four_pi, 0.0));
    for m in [2u32, 3] {
        rows.push(
            row("favard-euler-cross-check", "favard-constants")
                .param("r", 2 * m)
                .equal(cst::favard_even_from_euler(m), fav[2 * m as usize], tol),
        );
    }
    // terms needed for 1e-6 grow like ln(1e-6)/ln(ρ²); 60 suffices up to ρ ≈ 0.88
    for (rho, terms) in [(0.1, 60u32), (0.5, 60), (0.9, 80)] {
        let s = cst::secant_series(rho, terms);
        let sec = 1.0 / (PI * rho / 2.0).cos();
        rows.push(row("secant-series", "secant-series").param("rho", rho).param("terms", terms).equal(s / sec, 1.0, 1e-6));
    }
    {
        // truncation at 60 terms for ρ = 0.9 against the leading tail (4/π) ρ^{122} / (1 − ρ²)
        let rho: f64 = 0.9;
        let sec = 1.0 / (PI * rho / 2.0).cos();
        let rel = 1.0 - cst::secant_series(rho, 60) / sec;
        let bound = 4.0 / PI * rho.powi(122) / (1.0 - rho * rho) / sec;
        rows.push(row("secant-series-tail", "secant-series").param("rho", rho).param("terms", 60).equal(rel, bound, 1e-12));
    }

    rows.push(row("mu-squared", "mu-squared").param("k", 1).equal(cst::mu_squared(1)?, 4.0 / (PI * PI), 1e-14));
    let mus: Vec<f64> = (1..=200).map(cst::mu_squared).collect::<Result<_, _>>()?;
    let increasing = mus.windows(2).all(|w| w[0] < w[1]) && mus.iter().all(|&m| m < 1.0);
    rows.push(row("mu-squared-monotone", "mu-squared").param("k_max", 200).check(increasing, mus[199], 1.0, 0.0));
    for k in 1..=30u32 {
        let (lhs, rhs) = cst::mu_identity_sides(k)?;
        rows.push(row("mu-identity", "mu-identity").param("k", format!("{k:02}")).equal(lhs, rhs, cfg.tol("mu-identity", 1e-9)));
    }
    let bracket_bad = (1..=200).filter(|&k| !cst::mu_bracket_holds(k).unwrap_or(false)).count();
    rows.push(row("mu-bracket", "mu-bracket").param("k_max", 200).check(bracket_bad == 0, bracket_bad as f64, 0.0, 0.0));
    let wallis_bad = (1..=200u32)
        .filter(|&k| {
            let w = cst::wallis_ratio(k);
            let c = (PI / 2.0).sqrt();
            let kf = f64::from(k);
            !(c * (2.0 * kf).sqrt() <= w && w <= c * (2.0 * kf + 1.0).sqrt())
        })
        .count();
    rows.push(row("wallis-sandwich", "wallis-sandwich").param("k_max", 200).check(wallis_bad == 0, wallis_bad as f64, 0.0, 0.0));

    for (alpha, reference, t) in [(2.0, 2f64.sqrt(), 1e-12), (1.5, 2.0, 1e-12), (4.0 / 3.0, 2.61, 1e-2), (1.25, 3.23, 1e-2)] {
        let (c, _) = cst::c_alpha(alpha)?;
        rows.push(row("c-alpha", "c-alpha").param("alpha", format!("{alpha:.6}")).equal(c, reference, t));
    }
    let ladder_bad = (1..=100)
        .filter(|&i| {
            let alpha = 1.0 + 9.0 * f64::from(i) / 100.0;
            let (c, comp) = cst::c_alpha(alpha).expect("alpha > 1");
            !(c < comp)
        })
        .count();
    rows.push(row("c-alpha-comparator", "c-alpha-comparator").param("points", 100).check(ladder_bad == 0, ladder_bad as f64, 0.0, 0.0));

    let t1 = cfg.tol("vp-constants", 1e-6);
    rows.push(
        row("vp-log-constant", "vp-log-constant")
            .equal(cst::composite_vp_constant(2.0, 8.0 / 9.0, 1.0, VpNormBound::LogBound)?, 4.999144, t1),
    );
    rows.push(
        row("vp-integer-log-constant", "vp-integer-log-constant")
            .equal(cst::composite_vp_constant(2.0, 8.0 / 9.0, 1.0, VpNormBound::IntegerLogBound)?, 4.962628, t1),
    );
    rows.push(
        row("vp-lebesgue-constant", "vp-lebesgue-constant")
            .equal(cst::composite_vp_constant(2.0, 8.0 / 9.0, 1.0, VpNormBound::ExactEll)?, 4.946034, 1e-5),
    );
    let l8 = lebesgue_constant(8, 1e-12);
    rows.push(row("lebesgue-constant", "lebesgue-constant").param("N", 8).equal(l8.value, 2.137730, 1e-5));
    let ell = ell_function(17.0, 1e-6)?;
    rows.push(row("ell-lebesgue-identity", "lebesgue-constant").param("x", 17).equal(ell.value, l8.value, 1e-6));
    let (worst_n, worst_gap) = (1..=32usize)
        .map(|n| (n, lebesgue_constant(n, 1e-10).value - (4.0 / (PI * PI) * (2.0 * n as f64 + 1.0).ln() + 1.0)))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    rows.push(
        row("lebesgue-log-bound", "lebesgue-constant")
            .param("N_max", 32)
            .param("worst_N", worst_n)
            .check(worst_gap < 0.0, worst_gap, 0.0, 0.0),
    );

    let t4 = cfg.tol("small-r", 1e-4);
    for (k, alpha, reference) in [
        (1u32, 1.0, ratio(5, 4)),
        (1, 2.0, ratio(17, 16)),
        (1, 0.5, 2.0),
        (2, 1.0, ratio(517, 192)),
        (2, 2.0, ratio(3397, 3072)),
        (3, 2.0, 1.4552),
    ] {
        rows.push(
            row("small-r-constant", "small-r-constants")
                .param("k", k)
                .param("alpha", alpha)
                .equal(cst::small_r_constant(k, alpha)?, reference, t4),
        );
    }
    for (k, alpha, display) in [(2u32, 1.0, 2.7), (1, 2.0, ratio(17, 16)), (2, 2.0, 1.0 + 1.0 / 9.0), (3, 2.0, 1.5)] {
        rows.push(
            row("small-r-displayed", "small-r-constants")
                .param("k", k)
                .param("alpha", alpha)
                .at_most(cst::small_r_constant(k, alpha)?, display, 1e-12),
        );
    }

    let mut worst = f64::NEG_INFINITY;
    for k in 1..=200u32 {
        let c = cst::pi_over_n_constant(k)?;
        worst = worst.max(c - cst::pi_over_n_comparator(2 * k));
    }
    rows.push(row("pi-over-n-comparator", "pi-over-n-comparator").param("r_max", 400).at_most(worst, 0.0, 0.0));

    for (r, p, q) in [(1u32, 1i64, 2i64), (2, 1, 1), (3, 3, 4)] {
        let c = cst::lower_bound_constant(r)?;
        let ok = c == BigRational::new(p.into(), q.into());
        rows.push(row("lower-bound-constant", "lower-bound-constant").param("r", r).check(ok, cst::rational_to_f64(&c), ratio(p, q), 0.0));
    }
    let identity_ok = (2..=40u32).all(|r| {
        let lhs = cst::gamma_star(r - 1).expect("r ≥ 1") / BigRational::from_integer(2.into());
        let rhs = cst::lower_bound_constant(r).expect("r ≥ 1") * cst::gamma_star(r).expect("r ≥ 1");
        lhs == rhs
    });
    rows.push(row("lower-bound-identity", "lower-bound-constant").param("r_max", 40).check(identity_ok, 0.0, 0.0, 0.0));

    rows.push(row("chernykh-constant", "chernykh-constant").param("r", 1).equal(cst::chernykh_constant(1)?, 0.5f64.sqrt(), 1e-15));
    rows.push(row("chernykh-constant", "chernykh-constant").param("r", 2).equal(cst::chernykh_constant(2)?, (1.0f64 / 6.0).sqrt(), 1e-15));
    let mut worst_factor = 0.0f64;
    for r in 1..=30 {
        let q = cst::chernykh_constant(r)? / cst::chernykh_asymptotic(r);
        worst_factor = worst_factor.max(q.max(1.0 / q));
    }
    rows.push(row("chernykh-asymptotic", "chernykh-constant").param("r_max", 30).at_most(worst_factor, 2.0, 0.0));

    for p in [1.0, 2.0, 4.0] {
        rows.push(row("lp-order-comparator", crate::anchors::EXPLORATORY).param("r", 8).param("p", p).info(cst::lp_order_comparator(8, p), cst::gamma_star_asymptotic(8)));
    }
    Ok(rows)
}

// ------------------------------------------------------------------ sweeps

/// Upper constant `c` with `E ≤ c γ*_r ω_r(f, απ/n)` for the campaign, or
/// `None` when the campaign makes no claim at this `α`.
fn sweep_bound(campaign: Campaign, r: u32, alpha: f64) -> anyhow::Result<Option<(f64, &'static str)>> {
    let k = k_of(r);
    let eps = 1e-12;
    Ok(match campaign {
        Campaign::Theorem1Upper if alpha >= 2.0 - eps => Some((5.0, "upper-two-pi-over-n")),
        Campaign::Theorem2Alpha if alpha > 1.0 + eps && alpha < 2.0 - eps => {
            Some((cst::alpha_upper_constant(alpha)?, "upper-alpha"))
        }
        Campaign::Theorem2Alpha if alpha >= 2.0 - eps => Some((5.0, "upper-two-pi-over-n")),
        Campaign::Theorem3PiOverN if (alpha - 1.0).abs() < eps => Some((
            cst::pi_over_n_constant(k)?.min(cst::small_r_constant(k, 1.0)?),
            "upper-pi-over-n",
        )),
        Campaign::Theorem4SmallR if (alpha - 1.0).abs() < eps || (alpha - 2.0).abs() < eps => {
            Some((cst::small_r_constant(k, alpha)?, "upper-small-r"))
        }
        _ => None,
    })
}

fn ratio_rows(
    cfg: &CampaignConfig,
    entry: &CorpusEntry,
    n: usize,
    grid: &GridSpec,
) -> anyhow::Result<(Vec<Row>, Vec<RatioSample>)> {
    let best = best_uniform(&entry.f, n, grid).with_context(|| format!("E for {}", entry.id))?;
    let e = best.value;
    let tol = cfg.tol("sweep", 1e-6);
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    if !best.converged {
        rows.push(
            row("solver-convergence", crate::anchors::EXPLORATORY)
                .param("f", &entry.id)
                .param("n", n)
                .with_status(best.value, best.lower_bound, 0.0, Status::Fail),
        );
    }
    for &alpha in &cfg.alpha {
        let delta = alpha * PI / n as f64;
        for &r in &cfg.r_range {
            let omega = modulus(&entry.f, r, delta.min(TAU), NormIndex::Sup, grid)?.value;
            let gamma = cst::gamma_star_f64(r);
            let ratio_over_gamma = if omega > 1e-14 { e / (gamma * omega) } else { f64::NAN };
            samples.push(RatioSample { f: entry.id.clone(), n, r, alpha, delta, e, omega, ratio_over_gamma });
            let base = |claim: &str, anchor: &str| {
                row(claim, anchor).param("f", &entry.id).param("n", format!("{n:03}")).param("r", r).param("alpha", alpha)
            };
            if cfg.campaign == Campaign::ConjectureSweep {
                continue;
            }
            if let Some((c, anchor)) = sweep_bound(cfg.campaign, r, alpha)? {
                let claim = format!("{}-ratio", cfg.campaign.name());
                if omega <= 1e-14 {
                    rows.push(base(&claim, anchor).with_status(e, 0.0, tol, Status::Degenerate));
                } else {
                    rows.push(base(&claim, anchor).at_most(e, c * gamma * omega, tol));
                }
            }
        }
    }
    Ok((rows, samples))
}

pub fn run_stechkin_sweep(cfg: &CampaignConfig) -> anyhow::Result<(Vec<Row>, Vec<RatioSample>)> {
    let grid = cfg.grid();
    let work: Vec<(usize, CorpusEntry)> = cfg
        .n_range
        .iter()
        .flat_map(|&n| corpus::build(&cfg.corpus, n, cfg.seed, cfg.random_polys).into_iter().map(move |e| (n, e)))
        .collect();
    let parts: Vec<(Vec<Row>, Vec<RatioSample>)> =
        work.par_iter().map(|(n, e)| ratio_rows(cfg, e, *n, &grid)).collect::<anyhow::Result<_>>()?;
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for (r, s) in parts {
        rows.extend(r);
        samples.extend(s);
    }
    // corpus maxima: empirical lower estimates of the best constant
    for &n in &cfg.n_range {
        for &alpha in &cfg.alpha {
            for &r in &cfg.r_range {
                let max = samples
                    .iter()
                    .filter(|s| s.n == n && s.r == r && s.alpha == alpha && s.ratio_over_gamma.is_finite())
                    .map(|s| s.ratio_over_gamma)
                    .fold(f64::NEG_INFINITY, f64::max);
                let anchor = if cfg.campaign == Campaign::ConjectureSweep {
                    "conjecture-pi-over-n"
                } else {
                    crate::anchors::EXPLORATORY
                };
                rows.push(
                    row(format!("{}-max-ratio", cfg.campaign.name()), anchor)
                        .param("n", format!("{n:03}"))
                        .param("r", r)
                        .param("alpha", alpha)
                        .info(max, 1.0),
                );
            }
        }
    }
    Ok((rows, samples))
}

// ------------------------------------------------------------- lower bound

pub fn run_lower_bound(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    let grid = cfg.grid();
    let eps = cfg.tol("smoothed-step-eps", 1e-3);
    let slack = cfg.tol("lower-bound-slack", 1e-3);
    let smoothed = PeriodicFunction::smoothed_step(eps)?;
    let pairs: Vec<(usize, u32)> = cfg
        .n_range
        .iter()
        .flat_map(|&n| cfg.r_range.iter().filter(move |&&r| n >= 2 * r as usize).map(move |&r| (n, r)))
        .collect();
    let e_step: Vec<(usize, f64, f64)> = cfg
        .n_range
        .par_iter()
        .map(|&n| -> anyhow::Result<_> {
            Ok((n, best_uniform(&PeriodicFunction::Step, n, &grid)?.value, best_uniform(&smoothed, n, &grid)?.value))
        })
        .collect::<anyhow::Result<_>>()?;
    let rows: Vec<Vec<Row>> = pairs
        .par_iter()
        .map(|&(n, r)| -> anyhow::Result<Vec<Row>> {
            let (_, e0, e1) = *e_step.iter().find(|t| t.0 == n).expect("computed for every n");
            let delta = TAU / n as f64;
            let w0 = modulus(&PeriodicFunction::Step, r, delta, NormIndex::Sup, &grid)?.value;
            let w1 = modulus(&smoothed, r, delta, NormIndex::Sup, &grid)?.value;
            let expected = cst::binomial_f64(u64::from(r - 1), u64::from((r - 1) / 2));
            let c_prime = cst::rational_to_f64(&cst::lower_bound_constant(r)?);
            let gamma = cst::gamma_star_f64(r);
            let eps_prime = 2.0 * (n as f64 - 1.0) * eps;
            let base = |c: &str, a: &str| row(c, a).param("n", format!("{n:03}")).param("r", r);
            Ok(vec![
                base("step-modulus", "lower-bound-step").equal(w0, expected, 1e-12),
                base("step-best-approx", "lower-bound-step").equal(e0, 0.5, 1e-12),
                base("step-ratio", "lower-bound-ratio").at_least(e0 / (gamma * w0), c_prime, 1e-12),
                base("smoothed-step-modulus", "lower-bound-smoothed").param("eps", eps).at_most(w1, w0, 1e-12),
                base("smoothed-step-best-approx", "lower-bound-smoothed")
                    .param("eps", eps)
                    .at_least(e1, 0.5 - eps_prime, slack),
                base("smoothed-step-ratio", "lower-bound-ratio")
                    .param("eps", eps)
                    .at_least(e1 / (gamma * w1), c_prime * (1.0 - 2.0 * eps_prime), slack),
            ])
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

// ------------------------------------------------------- ω* sharpness

pub fn run_omega_star_sharpness(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    let grid = cfg.grid();
    let tol = cfg.tol("omega-star", 1e-6);
    let pairs: Vec<(usize, u32)> = cfg
        .n_range
        .iter()
        .flat_map(|&n| cfg.r_range.iter().filter(|r| *r % 2 == 0).map(move |&r| (n, r / 2)))
        .collect();
    let rows: Vec<Vec<Row>> = pairs
        .par_iter()
        .map(|&(n, k)| -> anyhow::Result<Vec<Row>> {
            let f = PeriodicFunction::cos_n(n as u32)?;
            let h = PI / n as f64;
            let ws = smoothed_modulus(&f, k, h, &grid)?.value;
            let w = modulus(&f, 2 * k, h, NormIndex::Sup, &grid)?.value;
            let gamma = cst::gamma_star_f64(2 * k);
            let one_minus = 1.0 - cst::mu_squared(k)?;
            let lower = gamma / one_minus;
            let base = |c: &str, a: &str| row(c, a).param("n", format!("{n:03}")).param("k", format!("{k:02}"));
            let implied = 1.0 / ws;
            let inside = implied >= lower * (1.0 - 1e-6) && implied <= 4.0 / PI * lower * (1.0 + 1e-6);
            Ok(vec![
                base("omega-star-cos", "omega-star-sharpness").equal(ws * gamma, one_minus, tol),
                base("omega-star-bracket", "omega-star-bracket").check(inside, implied, lower, 1e-6 * lower),
                base("omega-star-below-omega", "omega-star-below-omega").at_most(ws, w, 1e-9),
            ])
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// `ω_r(cos nx, απ/n)` against `2^r sin^r(απ/2)` and `E_{n−1}(cos nx) = 1`.
pub fn run_cos_extremal(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    let grid = cfg.grid();
    let tol = cfg.tol("cos-modulus", 1e-6);
    let mut work = Vec::new();
    for &n in &cfg.n_range {
        for r in 1..=8u32 {
            for alpha in [0.25, 0.5, 1.0] {
                work.push((n, r, alpha));
            }
        }
    }
    let mut rows: Vec<Row> = work
        .par_iter()
        .map(|&(n, r, alpha)| -> anyhow::Result<Row> {
            let f = PeriodicFunction::cos_n(n as u32)?;
            let w = modulus(&f, r, alpha * PI / n as f64, NormIndex::Sup, &grid)?.value;
            let exact = (2.0 * (alpha * PI / 2.0).sin()).powi(r as i32);
            Ok(row("cos-modulus", "cos-extremal")
                .param("n", format!("{n:03}"))
                .param("r", format!("{r:02}"))
                .param("alpha", alpha)
                .equal(w, exact, tol))
        })
        .collect::<anyhow::Result<_>>()?;
    for &n in &cfg.n_range {
        let f = PeriodicFunction::cos_n(n as u32)?;
        let e = best_uniform(&f, n, &grid)?;
        rows.push(row("cos-best-approx", "cos-extremal").param("n", format!("{n:03}")).equal(e.value, 1.0, tol));
    }
    Ok(rows)
}

// ------------------------------------------------------------------- L₂

pub fn run_l2_chernykh(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    let grid = cfg.grid();
    let work: Vec<(usize, CorpusEntry)> = cfg
        .n_range
        .iter()
        .flat_map(|&n| corpus::build(&cfg.corpus, n, cfg.seed, cfg.random_polys).into_iter().map(move |e| (n, e)))
        .collect();
    let rows: Vec<Vec<Row>> = work
        .par_iter()
        .map(|(n, entry)| -> anyhow::Result<Vec<Row>> {
            let n = *n;
            let best = best_l2(&entry.f, n, &grid)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (n as u64) << 16);
            let mut min_gap = f64::INFINITY;
            for _ in 0..20 {
                let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.1..0.1)).collect();
                let b: Vec<f64> = (1..n).map(|_| rng.gen_range(-0.1..0.1)).collect();
                let tau = best.minimizer.add(&TrigPoly::new(a, b)?);
                min_gap = min_gap.min(l2_distance(&entry.f, &tau, &grid) - best.value);
            }
            let base = |c: &str, a: &str| row(c, a).param("f", &entry.id).param("n", format!("{n:03}"));
            let mut rows = vec![base("l2-optimality", "l2-optimality").param("trials", 20).at_least(min_gap, 0.0, 1e-8)];
            for &r in &cfg.r_range {
                let w = modulus(&entry.f, r, TAU / n as f64, NormIndex::Lp(2.0), &grid)?.value;
                let c = cst::chernykh_constant(r)?;
                rows.push(base("l2-chernykh", "l2-chernykh").param("r", r).at_most(best.value, c * w, cfg.tol("l2", 1e-6)));
            }
            Ok(rows)
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

// ------------------------------------------------------------------ v_{m,n}

/// Largest `|a_j|, |b_j|`, `j ≤ m`, of `f − τ` by adaptive quadrature.
fn residual_coefficients(f: &PeriodicFunction, tau: &TrigPoly, m: usize) -> f64 {
    let mut breaks = f.breakpoints();
    breaks.extend((1..32).map(|i| TAU * i as f64 / 32.0));
    let mut worst = 0.0f64;
    for j in 0..=m {
        let jf = j as f64;
        let c = integrate_with_breaks(|x| (f.eval(x) - tau.eval(x)) * (jf * x).cos(), 0.0, TAU, &breaks, 1e-13).value / PI;
        worst = worst.max(c.abs());
        if j > 0 {
            let s = integrate_with_breaks(|x| (f.eval(x) - tau.eval(x)) * (jf * x).sin(), 0.0, TAU, &breaks, 1e-13).value / PI;
            worst = worst.max(s.abs());
        }
    }
    worst
}

pub fn run_vp_direct_check(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    let grid = cfg.grid();
    let tol = cfg.tol("vp-direct", 1e-6);
    let work: Vec<(usize, CorpusEntry)> = cfg
        .n_range
        .iter()
        .flat_map(|&n| corpus::build(&cfg.corpus, n, cfg.seed, cfg.random_polys).into_iter().map(move |e| (n, e)))
        .collect();
    let mut rows: Vec<Row> = work
        .par_iter()
        .map(|(n, entry)| -> anyhow::Result<Vec<Row>> {
            let n = *n;
            let m = 8 * n / 9;
            let coeffs = fourier_coeffs(&entry.f, n - 1, &grid);
            let v = vallee_poussin(&coeffs, m, n)?;
            let dist = uniform_distance(&entry.f, &v, &grid);
            let base = |c: &str, a: &str| row(c, a).param("f", &entry.id).param("n", format!("{n:03}")).param("m", m);
            let mut rows = vec![base("vp-orthogonality", "vp-orthogonality").at_most(residual_coefficients(&entry.f, &v, m), 0.0, cfg.tol("vp-orthogonality", 1e-10))];
            for &r in &cfg.r_range {
                let w = modulus(&entry.f, r, TAU / n as f64, NormIndex::Sup, &grid)?.value;
                rows.push(base("vp-direct", "vp-direct").param("r", r).at_most(dist, 5.0 * cst::gamma_star_f64(r) * w, tol));
            }
            Ok(rows)
        })
        .collect::<anyhow::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    // reproduction of T_m
    for &n in &cfg.n_range {
        let m = 8 * n / 9;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(31).wrapping_add(n as u64));
        let a: Vec<f64> = (0..=m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (1..=m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let tau = TrigPoly::new(a, b)?;
        let f = PeriodicFunction::Trig(tau.clone());
        let v = vallee_poussin(&fourier_coeffs(&f, n - 1, &grid), m, n)?;
        let err = v.sub(&tau).sup_norm(&grid).0;
        rows.push(
            row("vp-reproduction", "vp-orthogonality")
                .param("n", format!("{n:03}"))
                .param("m", m)
                .at_most(err, 0.0, cfg.tol("vp-orthogonality", 1e-10)),
        );
    }
    Ok(rows)
}

// --------------------------------------------------------- Favard relation

pub fn run_favard_equality_check(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    const NODES: usize = 512;
    let mut rows = Vec::new();
    for &n in &cfg.n_range {
        let phi = PeriodicFunction::favard_sign(n as u32)?;
        let h = PI / n as f64;
        let xs: Vec<f64> = (0..NODES).map(|j| (j as f64 + 0.5) * TAU / NODES as f64).collect();
        let kmax = cfg.r_range.iter().map(|r| r / 2).max().unwrap_or(1).max(1);
        let second = |i: u32, x: f64| {
            let t = f64::from(i) * h;
            phi.eval(x - t) - 2.0 * phi.eval(x) + phi.eval(x + t)
        };
        for i in 1..=2 * kmax {
            let worst = xs
                .iter()
                .map(|&x| {
                    let expect = if i % 2 == 1 { -4.0 * phi.eval(x) } else { 0.0 };
                    (second(i, x) - expect).abs()
                })
                .fold(0.0, f64::max);
            rows.push(
                row("favard-second-difference", "favard-eigen-relation")
                    .param("n", format!("{n:03}"))
                    .param("i", format!("{i:02}"))
                    .equal(worst, 0.0, 0.0),
            );
        }
        for &r in cfg.r_range.iter().filter(|r| *r % 2 == 0) {
            let k = r / 2;
            let mu2 = cst::mu_squared(k)?;
            let c = cst::binomial_f64(2 * u64::from(k), u64::from(k));
            // h²·U_h''(φ) against −π²μ² φ
            let worst = xs
                .iter()
                .map(|&x| {
                    let lhs: f64 = (1..=k)
                        .map(|i| {
                            let a = cst::binomial_f64(2 * u64::from(k), u64::from(k + i)) / c;
                            let term = 2.0 * a * second(i, x) / f64::from(i * i);
                            if i % 2 == 1 {
                                term
                            } else {
                                -term
                            }
                        })
                        .sum();
                    (lhs + PI * PI * mu2 * phi.eval(x)).abs()
                })
                .fold(0.0, f64::max);
            rows.push(
                row("favard-eigen-relation", "favard-eigen-relation")
                    .param("n", format!("{n:03}"))
                    .param("k", format!("{k:02}"))
                    .equal(worst, 0.0, cfg.tol("favard-eigen", 1e-10)),
            );
        }
    }
    Ok(rows)
}

// ------------------------------------------------------ operator identities

pub fn run_operator_identities(cfg: &CampaignConfig) -> anyhow::Result<Vec<Row>> {
    let grid = cfg.grid();
    let work: Vec<(usize, CorpusEntry, u32)> = cfg
        .n_range
        .iter()
        .flat_map(|&n| {
            let entries = corpus::build(&cfg.corpus, n, cfg.seed, cfg.random_polys.min(2));
            let ks: Vec<u32> = cfg.r_range.iter().filter(|r| *r % 2 == 0).map(|r| r / 2).collect();
            entries.into_iter().flat_map(move |e| ks.clone().into_iter().map(move |k| (n, e.clone(), k)))
        })
        .collect();
    let rows: Vec<Vec<Row>> = work
        .par_iter()
        .map(|(n, entry, k)| -> anyhow::Result<Vec<Row>> {
            let (n, k) = (*n, *k);
            let h = PI / n as f64;
            let base = |c: &str, a: &str| {
                row(c, a).param("f", &entry.id).param("n", format!("{n:03}")).param("k", format!("{k:02}"))
            };
            let worst = (0..16)
                .map(|j| {
                    let x = 0.1 + TAU * j as f64 / 16.0;
                    (operator_w_at(&entry.f, k, h, x) - identity_minus_u_at(&entry.f, k, h, x)).abs()
                })
                .fold(0.0, f64::max);
            let mut rows = vec![base("operator-decomposition", "operator-decomposition").at_most(worst, 0.0, cfg.tol("decomposition", 1e-8))];
            let w_norm = operator_w_norm(&entry.f, k, h, &grid)?;
            let omega = modulus(&entry.f, 2 * k, h, NormIndex::Sup, &grid)?.value;
            let gamma = cst::gamma_star_f64(2 * k);
            rows.push(base("operator-w-bound", "operator-w-bound").at_most(w_norm, gamma * omega, 1e-8));
            if entry.f.spectrum().is_some() {
                let cutoff = 4 * n + 8;
                let d = fh_derivative_norm(&entry.f, k, h, cutoff, &grid)?;
                rows.push(base("fh-derivative-bound", "fh-derivative-bound").at_most(d, fh_derivative_bound(k, h, omega), 1e-8 * d.max(1.0)));
            }
            Ok(rows)
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Campaigns run by `report` when none is named.
pub fn default_campaigns() -> Vec<Campaign> {
    Campaign::ALL.to_vec()
}
