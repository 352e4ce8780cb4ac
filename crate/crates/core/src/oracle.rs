//! Extended-precision evaluation of μ(r), λ(k) and the minimizer x_m(r) by
//! direct minimization of the explicit profile
//!
//! ```text
//! z_r(x) = sqrt( x^2 + ( r - x - sqrt( r^2 - (2 sqrt(r) - x - sqrt(2x - x^2))^2 ) )^2 )
//! ```
//!
//! on the interval [1 - 1/sqrt(2), 1]. The profile has a unique interior
//! minimizer; μ(r) is the minimum value and λ(k) = μ(k²)². This module is
//! the independent ground truth every exact computation is checked against.
//!
//! The primary locator is sign-bisection on the analytic derivative of
//! z_r², cross-checked by an independent golden-section search on z_r
//! (golden-section alone resolves the minimum position only to about the
//! square root of the value tolerance, hence the derivative route).

use crate::error::{Error, Result};
use crate::float::ExtFloat;

/// Guard bits appended to the requested precision for internal work.
const GUARD_BITS: usize = 32;

/// Bisection stops when the bracket width drops below 2^(-p+WIDTH_GUARD).
const WIDTH_GUARD: i64 = 16;

/// A fully evaluated profile point (all radicand intermediates exposed).
#[derive(Clone, Debug)]
pub struct ProfilePoint {
    pub r: ExtFloat,
    pub k: ExtFloat,
    pub x: ExtFloat,
    pub w: ExtFloat,
    pub u: ExtFloat,
    pub v: ExtFloat,
    pub z: ExtFloat,
}

/// Result of a profile minimization.
#[derive(Clone, Debug)]
pub struct MinimizerResult {
    pub r: ExtFloat,
    pub x_m: ExtFloat,
    pub mu: ExtFloat,
    pub lambda: ExtFloat,
    pub derivative_residual: ExtFloat,
    pub precision_bits: usize,
}

/// Left endpoint 1 - 1/sqrt(2) of the feasible interval, at precision `p`.
pub fn interval_left(p: usize) -> ExtFloat {
    let one = ExtFloat::one(p);
    let sqrt2 = ExtFloat::from_i64(2, p).sqrt().expect("sqrt(2)");
    &one - &(&one / &sqrt2)
}

/// Take the square root of a radicand that is nonnegative in exact
/// arithmetic, clamping tiny negative rounding noise (within
/// 2^(-p+8) * scale) to zero.
fn sqrt_clamped(radicand: &ExtFloat, scale_exp: i64, what: &str) -> Result<ExtFloat> {
    if radicand.is_negative() {
        let p = radicand.precision() as i64;
        if radicand.magnitude_below_pow2(-p + 8 + scale_exp.max(0)) {
            return Ok(ExtFloat::zero(radicand.precision()));
        }
        return Err(Error::Domain(format!(
            "{what} radicand is negative beyond rounding noise: {radicand}"
        )));
    }
    radicand.sqrt()
}

fn check_inputs(r: &ExtFloat, x: &ExtFloat) -> Result<()> {
    if r < &ExtFloat::one(r.precision()) {
        return Err(Error::Precondition(format!("r must be >= 1, got {r}")));
    }
    let lo = interval_left(x.precision());
    if x < &lo || x > &ExtFloat::one(x.precision()) {
        return Err(Error::Precondition(format!(
            "x must lie in [1 - 1/sqrt(2), 1], got {x}"
        )));
    }
    Ok(())
}

/// Evaluate the profile z_r(x) with all intermediates.
pub fn profile(r: &ExtFloat, x: &ExtFloat) -> Result<ProfilePoint> {
    check_inputs(r, x)?;
    let p = r.precision().min(x.precision());
    let r = r.with_precision(p);
    let x = x.with_precision(p);
    let two = ExtFloat::from_i64(2, p);
    let k = r.sqrt()?;
    // w = sqrt(2x - x^2), scale O(1)
    let w = sqrt_clamped(&(&(&two * &x) - &(&x * &x)), 0, "w")?;
    let u = &(&(&two * &k) - &x) - &w;
    // v = sqrt(r^2 - u^2), scale O(r^2)
    let r2 = &r * &r;
    let v = sqrt_clamped(&(&r2 - &(&u * &u)), r2.exponent(), "v")?;
    let d = &(&r - &x) - &v;
    let z = (&(&x * &x) + &(&d * &d)).sqrt()?;
    Ok(ProfilePoint { r, k, x, w, u, v, z })
}

/// d(z_r^2)/dx = 2x + 2 (r - x - v) (-1 - v') with
/// w' = (1-x)/w, u' = -1 - w', v' = -u u' / v.
/// Requires an interior point (w > 0 and v > 0).
pub fn profile_derivative(r: &ExtFloat, x: &ExtFloat) -> Result<ExtFloat> {
    let pt = profile(r, x)?;
    if pt.w.is_zero() || pt.v.is_zero() {
        return Err(Error::Domain(
            "profile derivative needs an interior point (w > 0, v > 0)".into(),
        ));
    }
    let p = pt.x.precision();
    let one = ExtFloat::one(p);
    let two = ExtFloat::from_i64(2, p);
    let wp = &(&one - &pt.x) / &pt.w;
    let up = &(-&one) - &wp;
    let vp = &(-&(&pt.u * &up)) / &pt.v;
    let d = &(&pt.r - &pt.x) - &pt.v;
    Ok(&(&two * &pt.x) + &(&two * &(&d * &(&(-&one) - &vp))))
}

/// Locate the unique minimizer of z_r on (1 - 1/sqrt(2), 1).
///
/// Deterministic for fixed precision: sign-bisection of the derivative down
/// to width 2^(-p+16), with an independent golden-section check on z.
pub fn minimize(r: &ExtFloat, precision_bits: usize) -> Result<MinimizerResult> {
    let p = precision_bits;
    let pw = p + GUARD_BITS;
    let r = r.with_precision(pw);
    if r < ExtFloat::one(pw) {
        return Err(Error::Precondition(format!("r must be >= 1, got {r}")));
    }
    let lo = interval_left(pw);
    let hi = ExtFloat::one(pw);
    let span = &hi - &lo;

    // coarse grid scan for a sign-change bracket of the derivative
    const GRID: i64 = 64;
    let step = &span / &ExtFloat::from_i64(2 * GRID, pw);
    let mut prev: Option<(ExtFloat, i32)> = None;
    let mut bracket: Option<(ExtFloat, ExtFloat)> = None;
    for i in 0..GRID {
        let x = &lo + &step.mul_i64(2 * i + 1);
        let d = profile_derivative(&r, &x)?;
        let s = d.signum();
        if let Some((px, ps)) = &prev {
            if *ps < 0 && s >= 0 {
                bracket = Some((px.clone(), x.clone()));
                break;
            }
        }
        prev = Some((x, s));
    }
    let (mut a, mut b) = bracket.ok_or_else(|| {
        Error::Internal(
            "derivative of z_r^2 does not bracket a sign change; contradicts unimodality".into(),
        )
    })?;

    // sign bisection to width 2^(-p+16)
    let half = ExtFloat::from_rational(
        &num_rational::BigRational::new(1.into(), 2.into()),
        pw,
    );
    let width_target = ExtFloat::pow2(-(p as i64) + WIDTH_GUARD, pw);
    while &(&b - &a) > &width_target {
        let mid = (&a + &b) * &half;
        let d = profile_derivative(&r, &mid)?;
        if d.signum() < 0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let x_m = (&a + &b) * &half;
    let at_min = profile(&r, &x_m)?;
    let mu = at_min.z.clone();
    let residual = profile_derivative(&r, &x_m)?.abs();

    // independent golden-section cross-check on z itself
    let mu_golden = golden_section_mu(&r, &lo, &hi, p)?;
    let agreement = (&mu - &mu_golden).abs();
    if !agreement.magnitude_below_pow2(-(p as i64) + 32) {
        return Err(Error::Internal(format!(
            "derivative bisection and golden-section disagree: {agreement}"
        )));
    }

    // round mu first so lambda = mu^2 holds bit-exactly at precision p
    let mu_p = mu.with_precision(p);
    let lambda = &mu_p * &mu_p;
    Ok(MinimizerResult {
        r: r.with_precision(p),
        x_m: x_m.with_precision(p),
        mu: mu_p,
        lambda,
        derivative_residual: residual.with_precision(p),
        precision_bits: p,
    })
}

/// Golden-section minimum value of z_r on [lo, hi], resolved to an
/// x-width of 2^(-p/2-8) (value error then far below 2^-p).
fn golden_section_mu(r: &ExtFloat, lo: &ExtFloat, hi: &ExtFloat, p: usize) -> Result<ExtFloat> {
    let pw = r.precision();
    let five = ExtFloat::from_i64(5, pw);
    let two = ExtFloat::from_i64(2, pw);
    // resp = 2 - phi = (3 - sqrt 5)/2
    let resp = &(&ExtFloat::from_i64(3, pw) - &five.sqrt()?) / &two;
    let zval = |x: &ExtFloat| -> Result<ExtFloat> { Ok(profile(r, x)?.z) };
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut x1 = &a + &(&resp * &(&b - &a));
    let mut x2 = &b - &(&resp * &(&b - &a));
    let mut f1 = zval(&x1)?;
    let mut f2 = zval(&x2)?;
    let tol = ExtFloat::pow2(-(p as i64) / 2 - 8, pw);
    while &(&b - &a) > &tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = &a + &(&resp * &(&b - &a));
            f1 = zval(&x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = &b - &(&resp * &(&b - &a));
            f2 = zval(&x2)?;
        }
    }
    Ok(if f1 < f2 { f1 } else { f2 })
}

/// λ(k) = μ(k²)², evaluated through the minimization oracle; bit-identical
/// to `minimize(k²).lambda` by construction.
pub fn lambda_of_k(k: &ExtFloat, precision_bits: usize) -> Result<ExtFloat> {
    let pw = precision_bits + GUARD_BITS;
    let k = k.with_precision(pw);
    if k < ExtFloat::one(pw) {
        return Err(Error::Precondition(format!("k must be >= 1, got {k}")));
    }
    let r = &k * &k;
    Ok(minimize(&r, precision_bits)?.lambda)
}
