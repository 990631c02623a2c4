//! Named constants of Jackson–Stechkin type inequalities.
//!
//! Binomial ratios are kept exact with big integers; everything that
//! involves `π` is evaluated in `f64`, either from a closed form or through
//! the quadrature and series primitives of [`crate::fncore`].

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fncore::{self, CONSTANT_TOL};
use crate::trig;

/// A constant together with its parameters and an error estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantValue {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub value: f64,
    pub err_estimate: f64,
    pub anchor: String,
}

impl ConstantValue {
    pub fn new(name: &str, value: f64, err_estimate: f64, anchor: &str) -> Self {
        Self {
            name: name.to_string(),
            params: BTreeMap::new(),
            value,
            err_estimate,
            anchor: anchor.to_string(),
        }
    }

    pub fn with_param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in floating point, correctly rounded from the exact value.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    big_to_f64(&binomial(n, k))
}

fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // scale so that both parts stay finite in f64
    let (n, d) = (q.numer(), q.denom());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    if nb < 1000 && db < 1000 {
        return n.to_f64().unwrap() / d.to_f64().unwrap();
    }
    let shift = (nb.max(db) - 900).max(0) as usize;
    let ns: BigInt = n >> shift;
    let ds: BigInt = d >> shift;
    ns.to_f64().unwrap() / ds.to_f64().unwrap()
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `γ*_r = 1 / C(r, ⌊r/2⌋)`.
pub fn gamma_star(r: u32) -> Result<BigRational> {
    if r == 0 {
        return Err(invalid("γ*_r needs r ≥ 1"));
    }
    Ok(ratio(BigUint::one(), binomial(u64::from(r), u64::from(r / 2))))
}

pub fn gamma_star_f64(r: u32) -> f64 {
    1.0 / binomial_f64(u64::from(r), u64::from(r / 2))
}

/// Asymptotic comparator `√r / 2^r` for `γ*_r`.
pub fn gamma_star_asymptotic(r: u32) -> f64 {
    f64::from(r).sqrt() / 2f64.powi(r as i32)
}

/// `a_i = C(2k, k+i) / C(2k, k)`.
pub fn a_ratio(k: u32, i: u32) -> BigRational {
    let k = u64::from(k);
    ratio(binomial(2 * k, k + u64::from(i)), binomial(2 * k, k))
}

/// `b_i = C(2k, k+i)`.
pub fn b_coeff(k: u32, i: u32) -> BigUint {
    binomial(2 * u64::from(k), u64::from(k) + u64::from(i))
}

/// Favard constant `F_r = (4/π) Σ_{i≥0} (−1)^{i(r+1)} / (2i+1)^{r+1}`.
///
/// For even `r` the series alternates; for odd `r` it is positive and the
/// tail is evaluated with an Euler–Maclaurin expansion.
pub fn favard(r: u32, tol: f64) -> ConstantValue {
    let s = r as i32 + 1;
    let scale = 4.0 / PI;
    let (value, err) = if r % 2 == 0 {
        let sum = fncore::alternating_series_sum(|i| (2.0 * i as f64 + 1.0).powi(-s), tol / scale);
        (sum.value, sum.err_bound)
    } else {
        positive_odd_power_sum(s)
    };
    ConstantValue::new("favard", scale * value, scale * err, "favard-constants").with_param("r", f64::from(r))
}

/// `Σ_{i≥0} (2i+1)^{−s}` for `s ≥ 2`: direct sum of the first `N` terms
/// plus the Euler–Maclaurin tail `∫_N^∞ g + g(N)/2 − g'(N)/12 + g'''(N)/720
/// − g⁽⁵⁾(N)/30240`. The error bound is the size of the next correction.
fn positive_odd_power_sum(s: i32) -> (f64, f64) {
    const N: usize = 200;
    let g = |x: f64| (2.0 * x + 1.0).powi(-s);
    // g^(m)(x) = (−s)(−s−1)…(−s−m+1) · 2^m · (2x+1)^{−s−m}
    let deriv = |x: f64, m: i32| {
        let mut c = 1.0;
        for j in 0..m {
            c *= -(s + j) as f64;
        }
        c * 2f64.powi(m) * (2.0 * x + 1.0).powi(-s - m)
    };
    let mut head = 0.0;
    for i in (0..N).rev() {
        head += g(i as f64);
    }
    let x = N as f64;
    let integral = (2.0 * x + 1.0).powi(1 - s) / (2.0 * (s - 1) as f64);
    let tail = integral + 0.5 * g(x) - deriv(x, 1) / 12.0 + deriv(x, 3) / 720.0 - deriv(x, 5) / 30240.0;
    let err = (deriv(x, 7) / 1_209_600.0).abs();
    (head + tail, err)
}

/// Euler numbers `E_0, E_2, …, E_{2m}` (secant numbers with sign).
pub fn euler_numbers(m: usize) -> Vec<BigInt> {
    // Σ_{j=0}^{n} C(2n, 2j) E_{2j} = 0 for n ≥ 1
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=m as u64 {
        let mut s = BigInt::zero();
        for j in 0..n {
            s += BigInt::from(binomial(2 * n, 2 * j)) * &e[j as usize];
        }
        e.push(-s);
    }
    e
}

/// `F_{2m}` from the secant coefficients: `|E_{2m}| π^{2m} / (2^{2m} (2m)!)`.
pub fn favard_even_from_euler(m: u32) -> f64 {
    favard_even_over_pi_power(m) * PI.powi(2 * m as i32)
}

/// The rational `F_{2m} / π^{2m}`.
pub fn favard_even_over_pi_power(m: u32) -> f64 {
    rational_to_f64(&favard_even_rational(m))
}

fn favard_even_rational(m: u32) -> BigRational {
    let e = euler_numbers(m as usize).pop().unwrap().abs();
    let mut den = BigUint::one() << (2 * m as usize);
    for i in 1..=u64::from(2 * m) {
        den *= i;
    }
    BigRational::new(e, BigInt::from(den))
}

/// Partial sum `Σ_{m=0}^{M} F_{2m} ρ^{2m}` of the secant series.
pub fn secant_series(rho: f64, terms: u32) -> f64 {
    (0..=terms)
        .map(|m| favard_even_from_euler(m) * rho.powi(2 * m as i32))
        .sum()
}

/// `(8/π²) Σ_{odd i ≤ k} a_i / i²` kept exact as the rational sum.
fn mu_sum_rational(k: u32) -> BigRational {
    let mut s = BigRational::zero();
    for i in (1..=k).step_by(2) {
        s += a_ratio(k, i) / BigRational::from_integer(BigInt::from(u64::from(i) * u64::from(i)));
    }
    s
}

/// `μ²_{2k} = (8/π²) Σ_{odd i ≤ k} a_i / i²`.
pub fn mu_squared(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(invalid("μ²_{2k} needs k ≥ 1"));
    }
    Ok(8.0 / (PI * PI) * rational_to_f64(&mu_sum_rational(k)))
}

/// `λ_k = 4^k / C(2k, k)`.
pub fn wallis_ratio(k: u32) -> f64 {
    let num = BigUint::one() << (2 * k as usize);
    rational_to_f64(&ratio(num, binomial(2 * u64::from(k), u64::from(k))))
}

/// `J_{2k} = ∫₀^{π/2} t cos^{2k} t dt`.
///
/// Up to `k = 40` this is adaptive quadrature; beyond it the reduction
/// `J_m = ((m−1)/m) J_{m−2} − 1/m²` (integration by parts) from
/// `J_0 = π²/8`.
pub fn t_cos_power_integral(k: u32) -> f64 {
    if k <= 40 {
        fncore::integrate(|t| t * t.cos().powi(2 * k as i32), 0.0, FRAC_PI_2, 1e-15).value
    } else {
        t_cos_power_recurrence(k)
    }
}

pub fn t_cos_power_recurrence(k: u32) -> f64 {
    let mut j = PI * PI / 8.0;
    for i in 1..=k {
        let m = 2.0 * f64::from(i);
        j = (m - 1.0) / m * j - 1.0 / (m * m);
    }
    j
}

/// Both sides of `1 − μ²_{2k} = (8/π²) λ_k ∫₀^{π/2} t cos^{2k} t dt`:
/// `(finite sum, integral)`.
pub fn mu_identity_sides(k: u32) -> Result<(f64, f64)> {
    let lhs = 1.0 - mu_squared(k)?;
    let rhs = 8.0 / (PI * PI) * wallis_ratio(k) * t_cos_power_integral(k);
    Ok((lhs, rhs))
}

/// `2/(3√(2k)) < 1 − μ²_{2k} < 5/(4√(2k))`.
pub fn mu_bracket_holds(k: u32) -> Result<bool> {
    let one_minus = 1.0 - mu_squared(k)?;
    let s = (2.0 * f64::from(k)).sqrt();
    Ok(2.0 / (3.0 * s) < one_minus && one_minus < 5.0 / (4.0 * s))
}

/// Secant constant `c_α = 1 / cos(π/(2α))` and its comparator
/// `(4/π)(1 − α⁻²)⁻¹`.
pub fn c_alpha(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(invalid(format!("c_α needs α > 1, got {alpha}")));
    }
    let value = 1.0 / (PI / (2.0 * alpha)).cos();
    let comparator = 4.0 / PI / (1.0 - 1.0 / (alpha * alpha));
    Ok((value, comparator))
}

/// How the norm factor `1 + ‖v_{m,n}‖ = 1 + ℓ(x_s)`, `x_s = (1+s)/(1−s)`,
/// is bounded in the composite de la Vallée Poussin constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VpNormBound {
    /// `2 + (4/π²) ln(2/(1−s))`, valid for every `s`.
    LogBound,
    /// `2 + (4/π²) ln x_s`, valid when `x_s` is an integer.
    IntegerLogBound,
    /// `1 + ℓ(x_s)` with `ℓ` computed by quadrature.
    ExactEll,
}

/// `(cos(πμ/(2αs)))⁻¹ · [1 + ‖v_{m,n}‖ bound]`.
pub fn composite_vp_constant(alpha: f64, s: f64, mu: f64, mode: VpNormBound) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("s must lie in (0, 1), got {s}")));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(invalid(format!("μ must lie in (0, 1], got {mu}")));
    }
    if !(alpha > 0.0) {
        return Err(invalid(format!("α must be positive, got {alpha}")));
    }
    let rho = mu / (alpha * s);
    if rho >= 1.0 {
        return Err(invalid(format!("secant argument μ/(αs) = {rho} must be below 1")));
    }
    let secant = 1.0 / (FRAC_PI_2 * rho).cos();
    let x_s = (1.0 + s) / (1.0 - s);
    let norm_factor = match mode {
        VpNormBound::LogBound => 2.0 + 4.0 / (PI * PI) * (2.0 / (1.0 - s)).ln(),
        VpNormBound::IntegerLogBound => {
            let rounded = x_s.round();
            if (x_s - rounded).abs() > 1e-9 * x_s {
                return Err(invalid(format!(
                    "the integer log bound needs (1+s)/(1−s) to be an integer, got {x_s}"
                )));
            }
            2.0 + 4.0 / (PI * PI) * rounded.ln()
        }
        VpNormBound::ExactEll => {
            let q = trig::ell_function(x_s, 1e-6)?;
            if !q.converged {
                return Err(Error::NonConvergence {
                    what: "ℓ(x)",
                    estimate: q.value,
                    err_estimate: q.err_estimate,
                });
            }
            1.0 + q.value
        }
    };
    Ok(secant * norm_factor)
}

/// Upper constant at `δ = απ/n` for `α > 1` obtained with `s = 1/√α`, `μ ≤ 1`.
pub fn alpha_upper_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(invalid(format!("α must exceed 1, got {alpha}")));
    }
    composite_vp_constant(alpha, 1.0 / alpha.sqrt(), 1.0, VpNormBound::LogBound)
}

/// Explicit constant at `δ = π/n` for `r = 2k` with `s = √μ`:
/// `(cos(π√μ/2))⁻¹ ((4/π²) ln(2/(1−√μ)) + 2)`, `μ = √(μ²_{2k})`.
pub fn pi_over_n_constant(k: u32) -> Result<f64> {
    let mu = mu_squared(k)?.sqrt();
    let s = mu.sqrt();
    Ok(1.0 / (FRAC_PI_2 * s).cos() * (4.0 / (PI * PI) * (2.0 / (1.0 - s)).ln() + 2.0))
}

/// `2√r ln r + 12√r`.
pub fn pi_over_n_comparator(r: u32) -> f64 {
    let rf = f64::from(r);
    2.0 * rf.sqrt() * rf.ln() + 12.0 * rf.sqrt()
}

/// `c_{2k}(απ/n) = 1 + F_{2k} k^{2k}/(απ)^{2k} Σ_{i=1}^k 2b_i / i^{2k}`.
pub fn small_r_constant(k: u32, alpha: f64) -> Result<f64> {
    if k == 0 || !(alpha > 0.0) {
        return Err(invalid(format!("need k ≥ 1 and α > 0, got k={k}, α={alpha}")));
    }
    let two_k = 2 * k as i32;
    let f = favard(2 * k, CONSTANT_TOL * 1e-2).value;
    let sum: f64 = (1..=k)
        .map(|i| 2.0 * big_to_f64(&b_coeff(k, i)) / f64::from(i).powi(two_k))
        .sum();
    Ok(1.0 + f * (f64::from(k) / (alpha * PI)).powi(two_k) * sum)
}

/// The same constant in exact rational arithmetic for rational `α`, using
/// `F_{2k}/π^{2k} = |E_{2k}| / (2^{2k} (2k)!)`.
pub fn small_r_constant_exact(k: u32, alpha: &BigRational) -> Result<BigRational> {
    if k == 0 || !alpha.is_positive() {
        return Err(invalid("need k ≥ 1 and α > 0"));
    }
    let two_k = 2 * k as i32;
    let kk = BigRational::from_integer(BigInt::from(k));
    let mut sum = BigRational::zero();
    for i in 1..=k {
        let b = BigRational::from_integer(BigInt::from(b_coeff(k, i)));
        let ip = BigRational::from_integer(BigInt::from(i)).pow(two_k);
        sum += b * BigRational::from_integer(BigInt::from(2)) / ip;
    }
    Ok(BigRational::one() + favard_even_rational(k) * (kk / alpha).pow(two_k) * sum)
}

/// Lower-bound factor `c'_r`: `r/(r+1)` for odd `r`, 1 for even `r`.
pub fn lower_bound_constant(r: u32) -> Result<BigRational> {
    if r == 0 {
        return Err(invalid("c'_r needs r ≥ 1"));
    }
    Ok(if r % 2 == 1 {
        BigRational::new(BigInt::from(r), BigInt::from(r + 1))
    } else {
        BigRational::one()
    })
}

/// `c_{r,2} = 1 / √C(2r, r)`.
pub fn chernykh_constant(r: u32) -> Result<f64> {
    if r == 0 {
        return Err(invalid("c_{r,2} needs r ≥ 1"));
    }
    Ok(1.0 / binomial_f64(2 * u64::from(r), u64::from(r)).sqrt())
}

/// Comparator `r^{1/4} / 2^r` for `c_{r,2}`.
pub fn chernykh_asymptotic(r: u32) -> f64 {
    f64::from(r).powf(0.25) / 2f64.powi(r as i32)
}

/// Exploratory `L_p` order comparator `r^{max(1/2p, 1/2p')} 2^{−r}`.
pub fn lp_order_comparator(r: u32, p: f64) -> f64 {
    let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    let e = (1.0 / (2.0 * p)).max(1.0 / (2.0 * q));
    f64::from(r).powf(e) / 2f64.powi(r as i32)
}
