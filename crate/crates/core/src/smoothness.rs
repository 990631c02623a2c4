//! Finite differences, moduli of smoothness and the smoothing operators
//! built from Steklov averages.
//!
//! Two evaluation routes are used throughout. Kinds with an exact
//! trigonometric spectrum are handled through Fourier multipliers; the
//! piecewise linear kinds are evaluated pointwise, with every difference
//! sampled at the shifted breakpoints where its extrema live.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::constants::{binomial_f64, gamma_star_f64};
use crate::error::{invalid, Result};
use crate::fncore::{self, GridSpec, PeriodicFunction, Sampled};
use crate::trig::TrigPoly;

/// Node count of the `Sampled` functions returned by the operators below.
pub const WORKING_NODES: usize = 4096;
/// Number of uniform `h` nodes in the modulus maximisation.
pub const H_NODES: usize = 256;
const H_REFINED: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DifferenceFlavor {
    /// `Δ_h^r(f, x) = Σ_{i=0}^r (−1)^i C(r,i) f(x+ih)`
    Forward,
    /// `Δ̂_t^{2k}(f, x) = Σ_{i=−k}^k (−1)^i C(2k,k+i) f(x+it)`
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceSpec {
    order: u32,
    step: f64,
    flavor: DifferenceFlavor,
}

impl DifferenceSpec {
    pub fn new(order: u32, step: f64, flavor: DifferenceFlavor) -> Result<Self> {
        if order == 0 {
            return Err(invalid("difference order must be positive"));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(invalid(format!("difference step must be positive, got {step}")));
        }
        if flavor == DifferenceFlavor::Central && order % 2 != 0 {
            return Err(invalid(format!("central differences need an even order, got {order}")));
        }
        Ok(Self { order, step, flavor })
    }

    pub fn forward(order: u32, step: f64) -> Result<Self> {
        Self::new(order, step, DifferenceFlavor::Forward)
    }

    pub fn central(order: u32, step: f64) -> Result<Self> {
        Self::new(order, step, DifferenceFlavor::Central)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn flavor(&self) -> DifferenceFlavor {
        self.flavor
    }
}

pub fn difference(f: &PeriodicFunction, spec: &DifferenceSpec, x: f64) -> f64 {
    let r = spec.order;
    match spec.flavor {
        DifferenceFlavor::Forward => forward_difference(|y| f.eval(y), r, spec.step, x),
        DifferenceFlavor::Central => central_difference(|y| f.eval(y), r / 2, spec.step, x),
    }
}

fn forward_difference(f: impl Fn(f64) -> f64, r: u32, h: f64, x: f64) -> f64 {
    (0..=r)
        .map(|i| {
            let c = binomial_f64(u64::from(r), u64::from(i));
            let v = c * f(x + f64::from(i) * h);
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum()
}

fn central_difference(f: impl Fn(f64) -> f64, k: u32, t: f64, x: f64) -> f64 {
    let k = i64::from(k);
    (-k..=k)
        .map(|i| {
            let c = binomial_f64(2 * k as u64, (k + i) as u64);
            let v = c * f(x + i as f64 * t);
            if i.rem_euclid(2) == 0 {
                v
            } else {
                -v
            }
        })
        .sum()
}

/// Norm used inside a modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NormIndex {
    Sup,
    Lp(f64),
}

impl NormIndex {
    fn validate(self) -> Result<Self> {
        match self {
            NormIndex::Lp(p) if !(p >= 1.0) || !p.is_finite() => {
                Err(invalid(format!("L_p moduli need a finite p ≥ 1, got {p}")))
            }
            _ => Ok(self),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModulusFlavor {
    Classic,
    Smoothed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusResult {
    pub value: f64,
    pub argmax_h: f64,
    pub r: u32,
    pub delta: f64,
    pub flavor: ModulusFlavor,
    pub p: NormIndex,
}

/// `‖Δ_h^r f‖_p` at one step `h`.
pub fn difference_norm(f: &PeriodicFunction, r: u32, h: f64, p: NormIndex, grid: &GridSpec) -> f64 {
    if let Some(poly) = spectral_part(f, grid) {
        let diff = poly.apply_multiplier(|j| {
            let z = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, j as f64 * h);
            z.powu(r)
        });
        return match p {
            NormIndex::Sup => diff.sup_norm(grid).0,
            NormIndex::Lp(q) => diff.lp_norm(q, grid),
        };
    }
    let g = |x: f64| forward_difference(|y| f.eval(y), r, h, x);
    let shifts: Vec<f64> = (0..=r).map(|i| f64::from(i) * h).collect();
    let mut pts = shifted_breakpoints(f, &shifts);
    if !f.is_piecewise_linear() {
        pts.extend(grid.points());
    }
    match p {
        NormIndex::Sup => piecewise_sup(&g, &mut pts, f.is_piecewise_linear(), grid),
        NormIndex::Lp(q) if f.is_piecewise_linear() => fncore::lp_norm_piecewise_linear(&g, q, &pts),
        NormIndex::Lp(q) => fncore::lp_norm_piecewise(&g, q, &pts, fncore::NORM_TOL),
    }
}

/// Spectrum used for multiplier-based evaluation, skipping sampled
/// functions whose interpolant is too wide for the grid.
fn spectral_part(f: &PeriodicFunction, grid: &GridSpec) -> Option<TrigPoly> {
    let poly = f.spectrum()?;
    if matches!(f, PeriodicFunction::Sampled(_)) && poly.degree() > 4 * grid.nodes() {
        return None;
    }
    Some(poly)
}

/// Points `b − s (mod 2π)` for breakpoints `b` and shifts `s`, with the
/// midpoints between consecutive ones.
fn shifted_breakpoints(f: &PeriodicFunction, shifts: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = f
        .breakpoints()
        .iter()
        .flat_map(|b| shifts.iter().map(move |s| (b - s).rem_euclid(TAU)))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let n = pts.len();
    let mut mids = Vec::with_capacity(n);
    for i in 0..n {
        let a = pts[i];
        let b = if i + 1 < n { pts[i + 1] } else { pts[0] + TAU };
        mids.push((0.5 * (a + b)).rem_euclid(TAU));
    }
    pts.extend(mids);
    pts
}

fn piecewise_sup(
    g: &impl Fn(f64) -> f64,
    pts: &mut Vec<f64>,
    exact: bool,
    grid: &GridSpec,
) -> f64 {
    if exact {
        pts.iter().map(|&x| g(x).abs()).fold(0.0, f64::max)
    } else {
        fncore::sup_abs_over(g, pts, grid.spacing(), grid.refine_depth()).0
    }
}

/// Known maximising steps injected into the `h` search.
fn injected_steps(f: &PeriodicFunction, delta: f64) -> Vec<f64> {
    match f {
        PeriodicFunction::CosN(n) => vec![delta.min(std::f64::consts::PI / f64::from(*n))],
        _ => vec![delta],
    }
}

/// `ω_r(f, δ)_p = sup_{0<h≤δ} ‖Δ_h^r f‖_p`.
///
/// The supremum over `h` is taken on `256` uniform steps plus the known
/// maximiser for `cos nx`, followed by golden-section refinement of the
/// three best local maxima.
pub fn modulus(
    f: &PeriodicFunction,
    r: u32,
    delta: f64,
    p: NormIndex,
    grid: &GridSpec,
) -> Result<ModulusResult> {
    if r == 0 {
        return Err(invalid("modulus order must be at least 1"));
    }
    if !(delta > 0.0 && delta <= TAU + 1e-12) {
        return Err(invalid(format!("modulus step bound must lie in (0, 2π], got {delta}")));
    }
    let p = p.validate()?;
    let norm = |h: f64| difference_norm(f, r, h, p, grid);
    let hs: Vec<f64> = (1..=H_NODES).map(|j| delta * j as f64 / H_NODES as f64).collect();
    let vals: Vec<f64> = hs.iter().map(|&h| norm(h)).collect();

    let mut best = (vals[H_NODES - 1], delta);
    for (&h, &v) in hs.iter().zip(&vals) {
        if v > best.0 {
            best = (v, h);
        }
    }
    for h in injected_steps(f, delta) {
        let v = norm(h);
        if v > best.0 {
            best = (v, h);
        }
    }
    if grid.refine_depth() > 0 {
        for i in fncore::top_local_maxima(&vals, H_REFINED, false) {
            let lo = if i == 0 { 0.0 } else { hs[i - 1] };
            let hi = if i + 1 < H_NODES { hs[i + 1] } else { delta };
            let (h, v) = fncore::golden_max(|h| if h > 0.0 { norm(h) } else { 0.0 }, lo, hi, grid.refine_depth());
            if v > best.0 {
                best = (v, h);
            }
        }
    }
    Ok(ModulusResult {
        value: best.0,
        argmax_h: best.1,
        r,
        delta,
        flavor: ModulusFlavor::Classic,
        p,
    })
}

/// The hat kernel `φ_h(t) = (1/h)(1 − |t|/h)` on `[−h, h]`.
pub fn hat_kernel(h: f64, t: f64) -> f64 {
    let u = t.abs() / h;
    if u >= 1.0 {
        0.0
    } else {
        (1.0 - u) / h
    }
}

/// `∫_{−h}^{h} 4^k sin^{2k}(jt/2) φ_h(t) dt`: the smoothed central
/// difference of `e^{ijx}` divided by `e^{ijx}`.
pub fn smoothed_difference_multiplier(k: u32, h: f64, j: usize) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let four_k = 4f64.powi(k as i32);
    let jf = j as f64;
    let g = |t: f64| four_k * (0.5 * jf * t).sin().powi(2 * k as i32) * (1.0 - t / h) / h;
    // split at the zeros of sin(jt/2) so every piece is a single bump
    let breaks: Vec<f64> = (1..).map(|m| TAU * m as f64 / jf).take_while(|&t| t < h).collect();
    2.0 * fncore::integrate_with_breaks(g, 0.0, h, &breaks, 1e-15 * four_k).value
}

/// `∫_{−h}^{h} Δ̂_t^{2k}(f, x) φ_h(t) dt` by direct quadrature.
pub fn smoothed_difference_at(f: &PeriodicFunction, k: u32, h: f64, x: f64) -> f64 {
    let g = |t: f64| central_difference(|y| f.eval(y), k, t, x) * hat_kernel(h, t);
    let mut breaks = vec![0.0];
    for i in 1..=i64::from(k) {
        for sign in [-1.0, 1.0] {
            let c = sign * i as f64;
            breaks.extend(kink_parameters(f, x, c, -h, h));
        }
    }
    if f.is_piecewise_linear() {
        return fncore::integrate_piecewise_polynomial(g, -h, h, &breaks, 2);
    }
    fncore::integrate_with_breaks(g, -h, h, &breaks, 1e-13).value
}

/// Values of `t ∈ (lo, hi)` where `x + c·t` hits a breakpoint of `f`.
fn kink_parameters(f: &PeriodicFunction, x: f64, c: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if c == 0.0 {
        return out;
    }
    let (ymin, ymax) = {
        let (a, b) = (x + c * lo, x + c * hi);
        (a.min(b), a.max(b))
    };
    for b in f.breakpoints() {
        let mut m = ((ymin - b) / TAU).floor();
        loop {
            let y = b + TAU * m;
            if y > ymax {
                break;
            }
            if y >= ymin {
                let t = (y - x) / c;
                if t > lo && t < hi {
                    out.push(t);
                }
            }
            m += 1.0;
        }
    }
    out
}

/// `ω*_{2k}(f, h) = ‖∫ Δ̂_t^{2k}(f, ·) φ_h(t) dt‖∞`.
pub fn smoothed_modulus(f: &PeriodicFunction, k: u32, h: f64, grid: &GridSpec) -> Result<ModulusResult> {
    if k == 0 {
        return Err(invalid("ω*_{2k} needs k ≥ 1"));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid(format!("ω*_{{2k}} needs h > 0, got {h}")));
    }
    let value = if let Some(poly) = spectral_part(f, grid) {
        let smoothed = poly.apply_real_multiplier(|j| smoothed_difference_multiplier(k, h, j));
        smoothed.sup_norm(grid).0
    } else {
        let mut pts = fncore::candidate_points(f, grid);
        fncore::sup_abs_over(|x| smoothed_difference_at(f, k, h, x), &mut pts, grid.spacing(), grid.refine_depth()).0
    };
    Ok(ModulusResult {
        value,
        argmax_h: h,
        r: 2 * k,
        delta: h,
        flavor: ModulusFlavor::Smoothed,
        p: NormIndex::Sup,
    })
}

/// Steklov averaging kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SteklovOrder {
    /// hat function (B-spline of order 2) on `[−ih, ih]`
    Two,
    /// B-spline of order `2k` with knots spaced `ih/k` on `[−ih, ih]`
    TwoK(u32),
}

impl SteklovOrder {
    fn spline_order(self) -> u32 {
        match self {
            SteklovOrder::Two => 2,
            SteklovOrder::TwoK(k) => 2 * k,
        }
    }
}

/// Cardinal B-spline `M_m` supported on `[0, m]`, unit mass.
fn cardinal_bspline(m: u32, u: f64) -> f64 {
    if u <= 0.0 || u >= f64::from(m) {
        return 0.0;
    }
    let m = m as usize;
    // vals[j] = M_l(u − j)
    let mut vals: Vec<f64> = (0..=m)
        .map(|j| {
            let v = u - j as f64;
            if (0.0..1.0).contains(&v) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for l in 2..=m {
        let lf = l as f64;
        for j in 0..=(m - l) {
            let v = u - j as f64;
            vals[j] = (v * vals[j] + (lf - v) * vals[j + 1]) / (lf - 1.0);
        }
    }
    vals[0]
}

/// Unit-mass kernel of the given order supported on `[−width, width]`.
pub fn steklov_kernel(order: SteklovOrder, width: f64, t: f64) -> f64 {
    match order {
        SteklovOrder::Two => hat_kernel(width, t),
        SteklovOrder::TwoK(k) => {
            let s = width / f64::from(k);
            cardinal_bspline(2 * k, t / s + f64::from(k)) / s
        }
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Fourier multiplier of the kernel at frequency `j`.
pub fn steklov_multiplier(order: SteklovOrder, width: f64, j: usize) -> f64 {
    let m = order.spline_order();
    sinc(j as f64 * width / f64::from(m)).powi(m as i32)
}

fn check_steklov(h: f64, order: SteklovOrder, i: u32) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid(format!("Steklov step must be positive, got {h}")));
    }
    if i == 0 {
        return Err(invalid("Steklov dilation index must be at least 1"));
    }
    if let SteklovOrder::TwoK(0) = order {
        return Err(invalid("Steklov order 2k needs k ≥ 1"));
    }
    Ok(())
}

/// `I_{ih}(f)(x) = ∫ f(x − t) φ_{ih}(t) dt` by quadrature.
pub fn steklov_at(f: &PeriodicFunction, h: f64, order: SteklovOrder, i: u32, x: f64) -> f64 {
    let width = f64::from(i) * h;
    let m = order.spline_order();
    let spacing = 2.0 * width / f64::from(m);
    let mut breaks: Vec<f64> = (1..m).map(|l| -width + spacing * f64::from(l)).collect();
    breaks.extend(kink_parameters(f, x, -1.0, -width, width));
    let g = |t: f64| f.eval(x - t) * steklov_kernel(order, width, t);
    if f.is_piecewise_linear() {
        return fncore::integrate_piecewise_polynomial(g, -width, width, &breaks, m as usize / 2 + 1);
    }
    fncore::integrate_with_breaks(g, -width, width, &breaks, 1e-13).value
}

fn sample_pointwise(g: impl Fn(f64) -> f64) -> Result<PeriodicFunction> {
    let values: Vec<f64> = (0..WORKING_NODES)
        .map(|i| g(TAU * i as f64 / WORKING_NODES as f64))
        .collect();
    PeriodicFunction::sampled(values)
}

fn sample_spectral(poly: &TrigPoly) -> Result<PeriodicFunction> {
    Ok(PeriodicFunction::Sampled(Sampled::from_trig(poly, WORKING_NODES)?))
}

/// Steklov function `I_{ih}(f)` sampled on the working grid.
pub fn steklov(f: &PeriodicFunction, h: f64, order: SteklovOrder, i: u32) -> Result<PeriodicFunction> {
    check_steklov(h, order, i)?;
    if let Some(poly) = f.spectrum() {
        let width = f64::from(i) * h;
        return sample_spectral(&poly.apply_real_multiplier(|j| steklov_multiplier(order, width, j)));
    }
    sample_pointwise(|x| steklov_at(f, h, order, i, x))
}

fn check_kh(k: u32, h: f64) -> Result<()> {
    if k == 0 {
        return Err(invalid("operator order k must be at least 1"));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid(format!("operator step must be positive, got {h}")));
    }
    Ok(())
}

/// `W_h(f)(x) = C(2k,k)⁻¹ ∫ Δ̂_t^{2k}(f, x) φ_h(t) dt` by direct quadrature.
pub fn operator_w_at(f: &PeriodicFunction, k: u32, h: f64, x: f64) -> f64 {
    smoothed_difference_at(f, k, h, x) / binomial_f64(2 * u64::from(k), u64::from(k))
}

/// `f(x) − U_h(f)(x)` with `U_h = 2 Σ_{i=1}^k (−1)^{i+1} a_i I_{ih}` and hat
/// kernels, `a_i = C(2k,k+i)/C(2k,k)`.
pub fn identity_minus_u_at(f: &PeriodicFunction, k: u32, h: f64, x: f64) -> f64 {
    let c = binomial_f64(2 * u64::from(k), u64::from(k));
    let mut u = 0.0;
    for i in 1..=k {
        let a = binomial_f64(2 * u64::from(k), u64::from(k + i)) / c;
        let term = 2.0 * a * steklov_at(f, h, SteklovOrder::Two, i, x);
        u += if i % 2 == 1 { term } else { -term };
    }
    f.eval(x) - u
}

/// `W_h(f)` sampled on the working grid.
pub fn operator_w(f: &PeriodicFunction, k: u32, h: f64) -> Result<PeriodicFunction> {
    check_kh(k, h)?;
    let c = binomial_f64(2 * u64::from(k), u64::from(k));
    if let Some(poly) = f.spectrum() {
        return sample_spectral(&poly.apply_real_multiplier(|j| smoothed_difference_multiplier(k, h, j) / c));
    }
    sample_pointwise(|x| operator_w_at(f, k, h, x))
}

/// `‖W_h(f)‖∞`, evaluated pointwise for piecewise kinds so that jumps of `f`
/// do not pick up interpolation overshoot.
pub fn operator_w_norm(f: &PeriodicFunction, k: u32, h: f64, grid: &GridSpec) -> Result<f64> {
    check_kh(k, h)?;
    if f.spectrum().is_some() {
        return Ok(fncore::sup_norm(&operator_w(f, k, h)?, grid));
    }
    let mut pts = fncore::candidate_points(f, grid);
    for b in f.breakpoints() {
        for i in 1..=k {
            for s in [-1.0, 1.0] {
                let y = b + s * f64::from(i) * h;
                pts.extend([y - 1e-12, y, y + 1e-12].map(|t: f64| t.rem_euclid(TAU)));
            }
        }
    }
    Ok(fncore::sup_abs_over(|x| operator_w_at(f, k, h, x), &mut pts, grid.spacing(), grid.refine_depth()).0)
}

fn fh_multiplier(k: u32, h: f64, j: usize) -> f64 {
    let gamma = gamma_star_f64(2 * k);
    (1..=k)
        .map(|i| {
            let b = binomial_f64(2 * u64::from(k), u64::from(k + i));
            let term = 2.0 * b * steklov_multiplier(SteklovOrder::TwoK(k), f64::from(i) * h, j);
            if i % 2 == 1 {
                term
            } else {
                -term
            }
        })
        .sum::<f64>()
        * gamma
}

/// `f_h = γ*_{2k} Σ_{i=1}^k (−1)^{i+1} 2 C(2k,k+i) I_{ih}(f)` with Steklov
/// functions of order `2k`, sampled on the working grid.
pub fn smoothing_fh(f: &PeriodicFunction, k: u32, h: f64) -> Result<PeriodicFunction> {
    check_kh(k, h)?;
    if let Some(poly) = f.spectrum() {
        return sample_spectral(&poly.apply_real_multiplier(|j| fh_multiplier(k, h, j)));
    }
    let gamma = gamma_star_f64(2 * k);
    sample_pointwise(|x| {
        (1..=k)
            .map(|i| {
                let b = binomial_f64(2 * u64::from(k), u64::from(k + i));
                let term = 2.0 * b * steklov_at(f, h, SteklovOrder::TwoK(k), i, x);
                if i % 2 == 1 {
                    term
                } else {
                    -term
                }
            })
            .sum::<f64>()
            * gamma
    })
}

/// `‖f_h^{(2k)}‖∞` by spectral differentiation of `f_h` truncated at
/// `cutoff`. Only defined for kinds with an exact spectrum.
pub fn fh_derivative_norm(f: &PeriodicFunction, k: u32, h: f64, cutoff: usize, grid: &GridSpec) -> Result<f64> {
    check_kh(k, h)?;
    let poly = f
        .spectrum()
        .ok_or_else(|| invalid("spectral differentiation needs a polynomial or sampled function"))?;
    let fh = poly.truncate(cutoff).apply_real_multiplier(|j| fh_multiplier(k, h, j));
    Ok(fh.derivative(2 * k).sup_norm(grid).0)
}

/// Right-hand side `γ*_{2k} ω_{2k}(f,h) (k/h)^{2k} Σ_{i=1}^k 2 C(2k,k+i) / i^{2k}`
/// of the derivative bound, given `ω_{2k}(f, h)`.
pub fn fh_derivative_bound(k: u32, h: f64, omega: f64) -> f64 {
    let two_k = 2 * k as i32;
    let sum: f64 = (1..=k)
        .map(|i| 2.0 * binomial_f64(2 * u64::from(k), u64::from(k + i)) / f64::from(i).powi(two_k))
        .sum();
    gamma_star_f64(2 * k) * omega * (f64::from(k) / h).powi(two_k) * sum
}
