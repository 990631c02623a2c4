//! Trigonometric polynomials, Fourier coefficients and the classical
//! summation operators.
//!
//! A [`TrigPoly`] of degree `n` is stored as
//! `τ(x) = a₀/2 + Σ_{j=1}^n (a_j cos jx + b_j sin jx)`; `b[0]` is kept at zero
//! so both coefficient vectors share one index.

use std::f64::consts::{PI, TAU};

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fncore::{self, GridSpec, PeriodicFunction, QuadResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigPoly {
    /// Builds a polynomial from cosine coefficients `a_0..a_n` and sine
    /// coefficients `b_1..b_n`.
    pub fn new(a: Vec<f64>, b_from_one: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(invalid("a trigonometric polynomial needs at least a_0"));
        }
        if b_from_one.len() + 1 != a.len() {
            return Err(invalid(format!(
                "expected {} sine coefficients, got {}",
                a.len() - 1,
                b_from_one.len()
            )));
        }
        let mut b = Vec::with_capacity(a.len());
        b.push(0.0);
        b.extend(b_from_one);
        Ok(Self { a, b })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            a: vec![0.0; n + 1],
            b: vec![0.0; n + 1],
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            a: vec![2.0 * c],
            b: vec![0.0],
        }
    }

    /// `cos nx`.
    pub fn cos_n(n: usize) -> Self {
        let mut p = Self::zeros(n);
        p.a[n] = 1.0;
        p
    }

    /// Number of stored coefficient pairs minus one.
    pub fn stored_degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Index of the highest nonzero coefficient pair.
    pub fn degree(&self) -> usize {
        (0..self.a.len())
            .rev()
            .find(|&j| self.a[j] != 0.0 || self.b[j] != 0.0)
            .unwrap_or(0)
    }

    pub fn a(&self, j: usize) -> f64 {
        self.a.get(j).copied().unwrap_or(0.0)
    }

    pub fn b(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.b.get(j).copied().unwrap_or(0.0)
        }
    }

    pub fn cosine_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn sine_coeffs(&self) -> &[f64] {
        &self.b
    }

    pub(crate) fn set(&mut self, j: usize, a: f64, b: f64) {
        if j >= self.a.len() {
            self.a.resize(j + 1, 0.0);
            self.b.resize(j + 1, 0.0);
        }
        self.a[j] = a;
        self.b[j] = if j == 0 { 0.0 } else { b };
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.stored_degree();
        let mut acc = 0.5 * self.a[0];
        if n == 0 {
            return acc;
        }
        let (s1, c1) = x.sin_cos();
        let (mut s, mut c) = (s1, c1);
        for j in 1..=n {
            if j % 32 == 0 {
                // resynchronise the rotation recurrence
                let (sj, cj) = (j as f64 * x).sin_cos();
                s = sj;
                c = cj;
            }
            acc += self.a[j] * c + self.b[j] * s;
            let cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
        acc
    }

    /// Coefficient-wise linear combination `self + t·other`.
    pub fn axpy(&self, t: f64, other: &TrigPoly) -> TrigPoly {
        let n = self.stored_degree().max(other.stored_degree());
        let mut out = TrigPoly::zeros(n);
        for j in 0..=n {
            out.a[j] = self.a(j) + t * other.a(j);
            out.b[j] = self.b(j) + t * other.b(j);
        }
        out
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, t: f64) -> TrigPoly {
        TrigPoly {
            a: self.a.iter().map(|v| v * t).collect(),
            b: self.b.iter().map(|v| v * t).collect(),
        }
    }

    /// Keeps coefficients of degree `≤ n`.
    pub fn truncate(&self, n: usize) -> TrigPoly {
        let mut out = TrigPoly::zeros(n);
        for j in 0..=n.min(self.stored_degree()) {
            out.a[j] = self.a[j];
            out.b[j] = self.b[j];
        }
        out
    }

    /// Applies a complex multiplier `z_j` to the exponential component of
    /// each frequency: `a_j cos jx + b_j sin jx = Re((a_j − i b_j) e^{ijx})`
    /// becomes `Re(z_j (a_j − i b_j) e^{ijx})`.
    pub fn apply_multiplier(&self, mut z: impl FnMut(usize) -> Complex64) -> TrigPoly {
        let n = self.stored_degree();
        let mut out = TrigPoly::zeros(n);
        for j in 0..=n {
            let c = z(j) * Complex64::new(self.a[j], -self.b[j]);
            out.a[j] = c.re;
            out.b[j] = if j == 0 { 0.0 } else { -c.im };
        }
        if out.b[0] != 0.0 {
            out.b[0] = 0.0;
        }
        out
    }

    /// Real, frequency-dependent multiplier.
    pub fn apply_real_multiplier(&self, mut m: impl FnMut(usize) -> f64) -> TrigPoly {
        self.apply_multiplier(|j| Complex64::new(m(j), 0.0))
    }

    /// `x ↦ τ(x + s)`.
    pub fn shifted(&self, s: f64) -> TrigPoly {
        self.apply_multiplier(|j| Complex64::from_polar(1.0, j as f64 * s))
    }

    /// Derivative of the given order.
    pub fn derivative(&self, order: u32) -> TrigPoly {
        // d/dx e^{ijx} = (ij) e^{ijx}
        self.apply_multiplier(|j| Complex64::new(0.0, j as f64).powu(order))
    }

    /// Values at the `n` uniform nodes `2πm/n`, aliasing folded exactly.
    pub fn sample_uniform(&self, n: usize) -> Vec<f64> {
        let mut spec = vec![Complex64::new(0.0, 0.0); n];
        spec[0] += Complex64::new(0.5 * self.a[0], 0.0);
        for j in 1..=self.stored_degree() {
            let c = Complex64::new(0.5 * self.a[j], -0.5 * self.b[j]);
            spec[j % n] += c;
            spec[(n - j % n) % n] += c.conj();
        }
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_inverse(n).process(&mut spec);
        spec.into_iter().map(|c| c.re).collect()
    }

    /// Trigonometric interpolant of samples at `n` uniform nodes (`n` even,
    /// degree `n/2`, the Nyquist term halved).
    pub fn interpolate_uniform(values: &[f64]) -> TrigPoly {
        let n = values.len();
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_forward(n).process(&mut buf);
        let half = n / 2;
        let mut out = TrigPoly::zeros(half);
        let scale = 2.0 / n as f64;
        out.a[0] = scale * buf[0].re;
        for j in 1..half {
            out.a[j] = scale * buf[j].re;
            out.b[j] = -scale * buf[j].im;
        }
        if n % 2 == 0 {
            out.a[half] = buf[half].re / n as f64;
        } else if half > 0 {
            out.a[half] = scale * buf[half].re;
            out.b[half] = -scale * buf[half].im;
        }
        out
    }

    /// Grid size used for sampling-based norms: at least `grid.nodes()` and
    /// four samples per period of the highest frequency.
    pub(crate) fn working_nodes(&self, grid: &GridSpec) -> usize {
        grid.nodes().max(4 * self.stored_degree() + 4)
    }

    /// `‖τ‖∞` by sampling followed by golden-section refinement of the
    /// largest local maxima. Returns `(value, argmax)`.
    pub fn sup_norm(&self, grid: &GridSpec) -> (f64, f64) {
        let n = self.working_nodes(grid);
        let values = self.sample_uniform(n);
        let step = TAU / n as f64;
        fncore::refine_periodic_max(&values, step, grid.refine_depth(), |x| self.eval(x).abs())
    }

    /// `(∫₀^{2π} |τ|^p)^{1/p}` by the trapezoid rule.
    pub fn lp_norm(&self, p: f64, grid: &GridSpec) -> f64 {
        let n = self.working_nodes(grid);
        let values = self.sample_uniform(n);
        let s: f64 = values.iter().map(|v| v.abs().powf(p)).sum();
        (s * TAU / n as f64).powf(1.0 / p)
    }
}

/// Fourier coefficients of a periodic function up to a cutoff degree.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    coeffs: TrigPoly,
    cutoff: usize,
    source: PeriodicFunction,
}

impl FourierCoeffs {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn as_poly(&self) -> &TrigPoly {
        &self.coeffs
    }

    pub fn source(&self) -> &PeriodicFunction {
        &self.source
    }

    pub fn a(&self, j: usize) -> f64 {
        self.coeffs.a(j)
    }

    pub fn b(&self, j: usize) -> f64 {
        self.coeffs.b(j)
    }
}

/// Fourier coefficients `a_j, b_j`, `j ≤ m`.
///
/// Polynomial and sampled kinds use the trapezoid rule (the DFT of the
/// samples), exact for the polynomial kinds once enough nodes are used. The
/// piecewise kinds use their closed-form coefficients.
pub fn fourier_coeffs(f: &PeriodicFunction, m: usize, grid: &GridSpec) -> FourierCoeffs {
    let mut coeffs = TrigPoly::zeros(m);
    match f {
        PeriodicFunction::Step => {
            // 1 on (π, 2π): a_0 = 1, b_j = -2/(jπ) for odd j
            coeffs.set(0, 1.0, 0.0);
            for j in (1..=m).step_by(2) {
                coeffs.set(j, 0.0, -2.0 / (j as f64 * PI));
            }
        }
        PeriodicFunction::SmoothedStep { eps } => {
            coeffs.set(0, 1.0, 0.0);
            for j in (1..=m).step_by(2) {
                let u = j as f64 * eps;
                coeffs.set(j, 0.0, -2.0 / (j as f64 * PI) * u.sin() / u);
            }
        }
        PeriodicFunction::FavardSign(n) => {
            let n = *n as usize;
            for q in (1..).step_by(2) {
                let j = q * n;
                if j > m {
                    break;
                }
                coeffs.set(j, 0.0, 4.0 / (q as f64 * PI));
            }
        }
        PeriodicFunction::Sampled(s) => {
            coeffs = s.interpolant().truncate(m);
        }
        PeriodicFunction::CosN(_) | PeriodicFunction::Trig(_) => {
            let deg = match f {
                PeriodicFunction::CosN(n) => *n as usize,
                PeriodicFunction::Trig(t) => t.stored_degree(),
                _ => unreachable!(),
            };
            // enough nodes that no frequency of f aliases onto j ≤ m
            let mut nodes = grid.nodes().max(4 * m + 4).max(deg + m + 2);
            nodes += nodes % 2;
            let values: Vec<f64> = (0..nodes).map(|i| f.eval(TAU * i as f64 / nodes as f64)).collect();
            coeffs = TrigPoly::interpolate_uniform(&values).truncate(m);
        }
    }
    FourierCoeffs {
        coeffs,
        cutoff: m,
        source: f.clone(),
    }
}

/// Fourier partial sum `s_i`.
pub fn partial_sum(c: &FourierCoeffs, i: usize) -> Result<TrigPoly> {
    if i > c.cutoff {
        return Err(invalid(format!(
            "partial sum of degree {i} needs coefficients beyond the cutoff {}",
            c.cutoff
        )));
    }
    Ok(c.coeffs.truncate(i))
}

/// de la Vallée Poussin sum `v_{m,n} = (1/(n−m)) Σ_{i=m}^{n−1} s_i`.
///
/// Frequency `j` carries weight 1 for `j ≤ m`, `(n−j)/(n−m)` for `m < j < n`
/// and 0 beyond.
pub fn vallee_poussin(c: &FourierCoeffs, m: usize, n: usize) -> Result<TrigPoly> {
    if m >= n || n > c.cutoff + 1 {
        return Err(invalid(format!(
            "de la Vallée Poussin sum needs 0 ≤ m < n ≤ cutoff + 1, got m={m}, n={n}, cutoff={}",
            c.cutoff
        )));
    }
    let width = (n - m) as f64;
    let src = c.coeffs.truncate(n - 1);
    Ok(src.apply_real_multiplier(|j| {
        if j <= m {
            1.0
        } else {
            (n - j) as f64 / width
        }
    }))
}

/// Fejér sum `σ_n = v_{0,n}`.
pub fn fejer(c: &FourierCoeffs, n: usize) -> Result<TrigPoly> {
    vallee_poussin(c, 0, n)
}

/// Lebesgue constant `L_N = (1/2π) ∫₀^{2π} |D_N(t)| dt` of the Fourier
/// partial-sum operator, integrated piecewise between the zeros of the
/// Dirichlet kernel.
pub fn lebesgue_constant(n: usize, tol: f64) -> QuadResult {
    let m = 2.0 * n as f64 + 1.0;
    let kernel = |t: f64| {
        let s = (0.5 * t).sin();
        if s.abs() < 1e-300 {
            m
        } else {
            ((0.5 * m * t).sin() / s).abs()
        }
    };
    // on [0, π]; the kernel is even
    let mut breaks: Vec<f64> = (1..=n).map(|j| TAU * j as f64 / m).collect();
    breaks.retain(|&t| t < PI);
    let q = fncore::integrate_with_breaks(kernel, 0.0, PI, &breaks, tol * PI);
    QuadResult {
        value: q.value / PI,
        err_estimate: q.err_estimate / PI,
        evaluations: q.evaluations,
        converged: q.converged,
    }
}

/// `ℓ(x) = (2/π) ∫₀^∞ |sin xt · sin t| / t² dt`.
///
/// The integral is taken up to `T` piecewise between the kinks of the
/// integrand; beyond `T` the integrand is replaced by its running mean over
/// `[T/2, T]`, which contributes `(2/π) m / T`.
pub fn ell_function(x: f64, tol: f64) -> Result<QuadResult> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid(format!("ℓ(x) needs a finite x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            err_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    // slow period of |sin xt sin t|; the tail error is at most period/T²
    let period = PI * (1.0 / x).max(1.0);
    let cutoff = 200f64
        .max(200.0 * x)
        .max(200.0 / x)
        .max((period / (0.25 * tol * PI)).sqrt());
    let sinc = |u: f64| if u.abs() < 1e-8 { 1.0 - u * u / 6.0 } else { u.sin() / u };
    let integrand = |t: f64| (x * sinc(x * t) * sinc(t)).abs();
    let kinks = kink_points(x, cutoff);

    let budget_tol = 0.25 * tol * PI / 2.0;
    let head = fncore::integrate_with_breaks(integrand, 0.0, cutoff, &kinks, budget_tol);

    // running mean of |sin xt sin t| over [T/2, T]
    let lo = 0.5 * cutoff;
    let window: Vec<f64> = kinks.iter().copied().filter(|&t| t > lo).collect();
    let mean_q = fncore::integrate_with_breaks(
        |t: f64| ((x * t).sin() * t.sin()).abs(),
        lo,
        cutoff,
        &window,
        budget_tol,
    );
    let mean = mean_q.value / (cutoff - lo);
    let tail = mean / cutoff;
    let tail_err = period / (cutoff * cutoff) + (mean_q.err_estimate / (cutoff - lo)) / cutoff;

    let value = 2.0 / PI * (head.value + tail);
    let err_estimate = 2.0 / PI * (head.err_estimate + tail_err);
    Ok(QuadResult {
        value,
        err_estimate,
        evaluations: head.evaluations + mean_q.evaluations,
        converged: head.converged && mean_q.converged && err_estimate <= tol,
    })
}

fn kink_points(x: f64, upper: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let mut k = 1.0;
    while k * PI < upper {
        pts.push(k * PI);
        k += 1.0;
    }
    let step = PI / x;
    let mut k = 1.0;
    while k * step < upper {
        pts.push(k * step);
        k += 1.0;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    #[test]
    fn eval_matches_direct_sum() {
        let p = TrigPoly::new(vec![1.0, 0.5, -0.25, 0.125], vec![0.3, 0.0, -0.7]).unwrap();
        for &x in &[0.0f64, 0.3, 1.7, -2.0, 5.5] {
            let direct = 0.5
                + 0.5 * x.cos()
                + 0.3 * x.sin()
                - 0.25 * (2.0 * x).cos()
                + 0.125 * (3.0 * x).cos()
                - 0.7 * (3.0 * x).sin();
            assert!((p.eval(x) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn high_degree_eval_stays_accurate() {
        let p = TrigPoly::cos_n(1000);
        for &x in &[0.1, 1.234, 3.0] {
            assert!((p.eval(x) - (1000.0 * x).cos()).abs() < 1e-11);
        }
    }

    #[test]
    fn sampling_and_interpolation_invert() {
        let p = TrigPoly::new(vec![0.4, 1.0, 0.0, -0.5], vec![0.2, 0.6, 0.1]).unwrap();
        let v = p.sample_uniform(16);
        for (i, &vi) in v.iter().enumerate() {
            assert!((vi - p.eval(TAU * i as f64 / 16.0)).abs() < 1e-13);
        }
        let q = TrigPoly::interpolate_uniform(&v);
        for j in 0..=3 {
            assert!((q.a(j) - p.a(j)).abs() < 1e-13);
            assert!((q.b(j) - p.b(j)).abs() < 1e-13);
        }
        assert!(q.a(8).abs() < 1e-13);
    }

    #[test]
    fn degree_ignores_trailing_zeros() {
        let mut p = TrigPoly::zeros(6);
        p.set(2, 0.0, 1.0);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.stored_degree(), 6);
        assert_eq!(TrigPoly::zeros(3).degree(), 0);
    }

    #[test]
    fn shift_and_derivative() {
        let p = TrigPoly::new(vec![0.0, 1.0, 0.5], vec![0.0, -0.3]).unwrap();
        let s = 0.7;
        let q = p.shifted(s);
        let d = p.derivative(1);
        for &x in &[0.0, 1.0, 2.5] {
            assert!((q.eval(x) - p.eval(x + s)).abs() < 1e-14);
            let fd = (p.eval(x + 1e-6) - p.eval(x - 1e-6)) / 2e-6;
            assert!((d.eval(x) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn cos_coefficients_are_unit_vector() {
        let c = fourier_coeffs(&PeriodicFunction::cos_n(3).unwrap(), 5, &grid());
        for j in 0..=5 {
            let expect = if j == 3 { 1.0 } else { 0.0 };
            assert!((c.a(j) - expect).abs() <= 1e-12);
            assert!(c.b(j).abs() <= 1e-12);
        }
    }

    #[test]
    fn step_coefficients_closed_form() {
        let c = fourier_coeffs(&PeriodicFunction::Step, 3, &grid());
        assert_eq!(c.a(0), 1.0);
        assert!((c.b(1) + 2.0 / PI).abs() < 1e-15);
        assert!((c.b(3) + 2.0 / (3.0 * PI)).abs() < 1e-15);
        assert_eq!(c.b(2), 0.0);
        assert_eq!(c.a(1), 0.0);
    }

    #[test]
    fn favard_sign_coefficients() {
        let c = fourier_coeffs(&PeriodicFunction::favard_sign(1).unwrap(), 3, &grid());
        assert!((c.b(1) - 4.0 / PI).abs() < 1e-15);
        assert!((c.b(3) - 4.0 / (3.0 * PI)).abs() < 1e-15);
        assert_eq!(c.b(2), 0.0);
    }

    #[test]
    fn partial_sums_of_cos() {
        let c = fourier_coeffs(&PeriodicFunction::cos_n(3).unwrap(), 5, &grid());
        let s5 = partial_sum(&c, 5).unwrap();
        assert!((s5.a(3) - 1.0).abs() < 1e-12);
        let s2 = partial_sum(&c, 2).unwrap();
        assert!((0..=2).all(|j| s2.a(j).abs() < 1e-12 && s2.b(j).abs() < 1e-12));
        assert!(partial_sum(&c, 6).is_err());
    }

    #[test]
    fn vallee_poussin_limits() {
        let p = TrigPoly::new(vec![0.2, 1.0, -0.4, 0.3, 0.8, 0.1], vec![0.5, 0.2, -0.6, 0.7, 0.9])
            .unwrap();
        let c = fourier_coeffs(&PeriodicFunction::Trig(p.clone()), 6, &grid());
        let v = vallee_poussin(&c, 4, 5).unwrap();
        let s = partial_sum(&c, 4).unwrap();
        for j in 0..=5 {
            assert!((v.a(j) - s.a(j)).abs() < 1e-13 && (v.b(j) - s.b(j)).abs() < 1e-13);
        }
        let fej = fejer(&c, 5).unwrap();
        let v0 = vallee_poussin(&c, 0, 5).unwrap();
        assert_eq!(fej, v0);
        assert!((fej.a(1) - 0.8 * p.a(1)).abs() < 1e-13);
        assert!(vallee_poussin(&c, 3, 3).is_err());
        assert!(vallee_poussin(&c, 3, 8).is_err());
    }

    #[test]
    fn lebesgue_small_values() {
        let l0 = lebesgue_constant(0, 1e-13);
        assert!((l0.value - 1.0).abs() < 1e-12);
        // L_1 = 1/3 + 2√3/π
        let l1 = lebesgue_constant(1, 1e-13);
        assert!((l1.value - (1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI)).abs() < 1e-11);
    }

    #[test]
    fn ell_rejects_negative() {
        assert!(ell_function(-1.0, 1e-6).is_err());
        assert_eq!(ell_function(0.0, 1e-6).unwrap().value, 0.0);
    }
}
