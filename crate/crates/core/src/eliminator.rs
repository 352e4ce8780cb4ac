//! Radical elimination on the critical-point equations of the profile z_r,
//! producing an exact bivariate polynomial P*(k, y) with P*(k, λ(k)) = 0.
//!
//! The system is derived from the explicit profile by clearing the three
//! radicals (w, v and the outer square) and imposing stationarity of z_r²:
//!
//! - E1 = x·w·v − (k² − x − v)·(w·v + u·(w + 1 − x)),  u = 2k − x − w
//! - E2 = w² − 2x + x²
//! - E3 = v² − k⁴ + u²
//! - E4 = y − x² − (k² − x − v)²
//!
//! Elimination order w → v → x (E2 is quadratic in w and E3 quadratic in v,
//! which keeps intermediate degrees minimal):
//!
//! - A1 = Res_w(E1, E2),  A2 = Res_w(E3, E2)
//! - p(k, x) = primitive(Res_v(A1, A2))
//! - h(k, x, y) = primitive(Res_v(E4, A2))
//! - raw(k, y) = Res_x(p, h)
//! - reduced = primitive squarefree-in-y part of raw, spurious
//!   y-independent content in k split off.
//!
//! Squaring the radicals introduces spurious branches; they surface as
//! extra factors of `raw` and are tolerated in `reduced` (the true branch
//! annihilates the full polynomial). All arithmetic here is exact.

use crate::error::{Error, Result};
use crate::float::ExtFloat;
use crate::oracle;
use crate::poly::{gcd_mpoly, MPoly};
use crate::resultant::{resultant, Backend, ResultantRequest};
use crate::var::Var;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type PolyZ = MPoly<BigInt>;

/// The four integer critical-point equations.
#[derive(Clone, Debug)]
pub struct CriticalSystem {
    pub e1: PolyZ,
    pub e2: PolyZ,
    pub e3: PolyZ,
    pub e4: PolyZ,
}

/// Output of the elimination pipeline.
#[derive(Clone, Debug)]
pub struct Eliminant {
    pub p_kx: PolyZ,
    pub h_kxy: PolyZ,
    pub raw: PolyZ,
    pub reduced: PolyZ,
    pub backend: Backend,
}

/// Options for [`eliminate`].
#[derive(Clone, Copy, Debug)]
pub struct EliminateOptions {
    pub backend: Backend,
    /// Split y-independent polynomial content in k off the reduced
    /// eliminant (spurious for the branch geometry).
    pub strip_k_content: bool,
    pub prime_budget: usize,
}

impl Default for EliminateOptions {
    fn default() -> Self {
        EliminateOptions {
            backend: Backend::Auto,
            strip_k_content: true,
            prime_budget: crate::resultant::DEFAULT_PRIME_BUDGET,
        }
    }
}

/// Construct E1..E4, expanded and collected.
pub fn build_system() -> CriticalSystem {
    let k = PolyZ::var(Var::K);
    let x = PolyZ::var(Var::X);
    let w = PolyZ::var(Var::W);
    let v = PolyZ::var(Var::V);
    let y = PolyZ::var(Var::Y);
    let c = PolyZ::from_i64;

    let u = k.clone() * c(2) - x.clone() - w.clone();
    let k2 = k.clone() * k.clone();
    // E1 = x w v - (k^2 - x - v)(w v + u (w + 1 - x))
    let e1 = x.clone() * w.clone() * v.clone()
        - (k2.clone() - x.clone() - v.clone())
            * (w.clone() * v.clone() + u.clone() * (w.clone() + c(1) - x.clone()));
    // E2 = w^2 - 2x + x^2
    let e2 = w.clone() * w.clone() - x.clone() * c(2) + x.clone() * x.clone();
    // E3 = v^2 - k^4 + u^2
    let e3 = v.clone() * v.clone() - k2.clone() * k2.clone() + u.clone() * u;
    // E4 = y - x^2 - (k^2 - x - v)^2
    let d = k2 - x.clone() - v;
    let e4 = y - x.clone() * x - d.clone() * d;
    CriticalSystem { e1, e2, e3, e4 }
}

/// Resultant with the standard degeneracy handling: if it vanishes
/// identically, divide both inputs by their gcd in the eliminated variable
/// and retry once.
fn resultant_nondegenerate(
    f: &PolyZ,
    g: &PolyZ,
    var: Var,
    opts: &EliminateOptions,
) -> Result<PolyZ> {
    let run = |a: &PolyZ, b: &PolyZ| -> Result<PolyZ> {
        let mut req = ResultantRequest::new(a, b, var).with_backend(opts.backend);
        req.prime_budget = opts.prime_budget;
        resultant(&req)
    };
    let r = run(f, g)?;
    if !r.is_zero() {
        return Ok(r);
    }
    let common = gcd_mpoly(f, g)?;
    if common.deg(var) == 0 {
        return Err(Error::Internal(
            "resultant vanished identically without a common factor".into(),
        ));
    }
    let f2 = f
        .div_exact(&common)
        .ok_or_else(|| Error::Internal("gcd does not divide its operand".into()))?;
    let g2 = g
        .div_exact(&common)
        .ok_or_else(|| Error::Internal("gcd does not divide its operand".into()))?;
    let r = run(&f2, &g2)?;
    if r.is_zero() {
        return Err(Error::Structural(
            "resultant still vanishes after removing the common factor; \
             the system is degenerate in this variable"
                .into(),
        ));
    }
    Ok(r)
}

/// Run the elimination pipeline on a critical system.
pub fn eliminate(sys: &CriticalSystem, opts: &EliminateOptions) -> Result<Eliminant> {
    let stage = |name: &str, t: std::time::Instant| {
        log::debug!("eliminate: {name} took {:.2?}", t.elapsed());
    };
    let t = std::time::Instant::now();
    let a1 = resultant_nondegenerate(&sys.e1, &sys.e2, Var::W, opts)?;
    let a2 = resultant_nondegenerate(&sys.e3, &sys.e2, Var::W, opts)?;
    stage("Res_w(E1,E2), Res_w(E3,E2)", t);
    let t = std::time::Instant::now();
    let p_kx = resultant_nondegenerate(&a1, &a2, Var::V, opts)?.normalized_primitive()?;
    stage("p = Res_v(A1,A2)", t);
    let t = std::time::Instant::now();
    let h_kxy = resultant_nondegenerate(&sys.e4, &a2, Var::V, opts)?.normalized_primitive()?;
    stage("h = Res_v(E4,A2)", t);
    let t = std::time::Instant::now();
    let raw = resultant_nondegenerate(&p_kx, &h_kxy, Var::X, opts)?;
    stage("raw = Res_x(p,h)", t);
    let t = std::time::Instant::now();
    let reduced = reduce_raw(&raw, opts.strip_k_content)?;
    stage("reduce(raw)", t);
    Ok(Eliminant {
        p_kx,
        h_kxy,
        raw,
        reduced,
        backend: opts.backend,
    })
}

/// Primitive squarefree-in-y part of the raw eliminant.
fn reduce_raw(raw: &PolyZ, strip_k_content: bool) -> Result<PolyZ> {
    if raw.is_zero() {
        return Err(Error::Structural("raw eliminant is identically zero".into()));
    }
    // content in Z[k] (y-independent spurious factor) and squarefree part
    let (k_content, pp) = raw.content_primitive_in(Var::Y)?;
    let sf = pp.squarefree_part_in(Var::Y)?;
    if strip_k_content {
        Ok(sf)
    } else {
        let k_content = k_content.normalized_primitive()?;
        Ok((&k_content * &sf).normalized_primitive()?)
    }
}

// ---- branch verification ----

/// One row of a [`BranchReport`].
#[derive(Clone, Debug)]
pub struct BranchSample {
    pub k: ExtFloat,
    pub lambda: ExtFloat,
    /// |P*(k, λ)| / Σ|terms|, evaluated in exact rational arithmetic at the
    /// rational values of the float inputs.
    pub scaled_residual: ExtFloat,
    /// |∂P*/∂y (k, λ)| / Σ|terms| on the same scale.
    pub scaled_derivative: ExtFloat,
    /// Set when the derivative magnitude falls below the exceptional-point
    /// tolerance: the sample is a candidate exceptional point.
    pub derivative_flagged: bool,
}

#[derive(Clone, Debug, Default)]
pub struct BranchReport {
    pub samples: Vec<BranchSample>,
}

/// Scaled-derivative threshold under which a sample is flagged as a
/// candidate exceptional point. The scale is the evaluated term-magnitude
/// sum, so healthy branch samples show only generic cancellation (measured
/// 1e-30..1e-16 across k in [1, 5]) while an actual double root drops to
/// the oracle error floor (below 1e-90 at 256 bits). 1e-60 splits the gap.
pub const DERIVATIVE_FLAG_THRESHOLD: &str = "1e-60";

/// Exact evaluation of a bivariate integer polynomial at rational (k, y):
/// returns the integer numerators of the value and of the term-magnitude
/// sum over the common denominator `den(k)^deg_k * den(y)^deg_y` (which
/// cancels in the scaled ratio). All arithmetic is homogeneous integer
/// Horner; no rational normalization ever runs.
pub fn eval_scaled_qq(f: &PolyZ, k_val: &BigRational, y_val: &BigRational) -> (BigInt, BigInt) {
    let (kp, kq) = (k_val.numer().clone(), k_val.denom().clone());
    let (yp, yq) = (y_val.numer().clone(), y_val.denom().clone());
    let dk = f.deg(Var::K);
    let dy = f.deg(Var::Y);
    // power tables for the homogenizing denominators
    let pow_table = |q: &BigInt, n: usize| -> Vec<BigInt> {
        let mut t = Vec::with_capacity(n + 1);
        t.push(BigInt::from(1));
        for i in 1..=n {
            t.push(&t[i - 1] * q);
        }
        t
    };
    let kq_pow = pow_table(&kq, dk);
    let yq_pow = pow_table(&yq, dy);
    let kp_abs = kp.abs();
    let yp_abs = yp.abs();

    let slices = f.coeffs_in(Var::Y);
    let mut value = BigInt::zero();
    let mut scale = BigInt::zero();
    for b in (0..=dy).rev() {
        let (sv, sa) = match slices.get(b) {
            Some(slice) if !slice.is_zero() => {
                let coeffs = slice.coeffs_in(Var::K);
                let mut sv = BigInt::zero();
                let mut sa = BigInt::zero();
                for a in (0..=dk).rev() {
                    let c = coeffs
                        .get(a)
                        .and_then(|p| p.as_constant())
                        .unwrap_or_else(BigInt::zero);
                    sv = sv * &kp + &c * &kq_pow[dk - a];
                    sa = sa * &kp_abs + c.abs() * &kq_pow[dk - a];
                }
                (sv, sa)
            }
            _ => (BigInt::zero(), BigInt::zero()),
        };
        value = value * &yp + sv * &yq_pow[dy - b];
        scale = scale * &yp_abs + sa * &yq_pow[dy - b];
    }
    (value, scale)
}

/// For each sample k: compute λ(k) by the oracle, then evaluate the reduced
/// eliminant and its y-derivative exactly at the rational approximations,
/// reporting scaled residuals and flagging candidate exceptional points.
pub fn verify_branch(
    reduced: &PolyZ,
    samples: &[ExtFloat],
    precision_bits: usize,
) -> Result<BranchReport> {
    let dpoly = reduced.derivative(Var::Y);
    let threshold = ExtFloat::parse_decimal(DERIVATIVE_FLAG_THRESHOLD, 64)?;
    let mut report = BranchReport::default();
    for k in samples {
        let lambda = oracle::lambda_of_k(k, precision_bits)?;
        let kq = k.to_rational();
        let lq = lambda.to_rational();
        let (val, scale) = eval_scaled_qq(reduced, &kq, &lq);
        let scaled_residual = bigint_ratio_to_float(&val, &scale);
        let (dval, dscale) = eval_scaled_qq(&dpoly, &kq, &lq);
        let scaled_derivative = bigint_ratio_to_float(&dval, &dscale);
        let derivative_flagged = scaled_derivative < threshold;
        report.samples.push(BranchSample {
            k: k.clone(),
            lambda,
            scaled_residual,
            scaled_derivative,
            derivative_flagged,
        });
    }
    Ok(report)
}

/// |num/den| as a 64-bit-precision float (0 when num is zero).
fn bigint_ratio_to_float(num: &BigInt, den: &BigInt) -> ExtFloat {
    if num.is_zero() {
        return ExtFloat::zero(64);
    }
    (&ExtFloat::from_bigint(num, 128) / &ExtFloat::from_bigint(den, 128))
        .abs()
        .with_precision(64)
}

// ---- persistence ----

/// Serialize an eliminant (the reduced polynomial plus pipeline metadata)
/// to the documented JSON format. Deterministic: no wall-clock data unless
/// `stamp` is provided.
pub fn eliminant_to_json(el: &Eliminant, stamp: Option<String>) -> serde_json::Value {
    let reduced = &el.reduced;
    serde_json::json!({
        "pipeline": "w,v,x",
        "backend": el.backend.name(),
        "timestamp": stamp,
        "degrees": {
            "k": reduced.deg(Var::K),
            "y": reduced.deg(Var::Y),
            "total": reduced.total_degree(),
        },
        "polynomial": reduced.to_json(),
    })
}

pub fn save_eliminant(path: &std::path::Path, el: &Eliminant, stamp: Option<String>) -> Result<()> {
    let json = eliminant_to_json(el, stamp);
    let mut text = serde_json::to_string_pretty(&json)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Load a persisted eliminant; only the reduced polynomial and metadata are
/// stored on disk.
pub fn load_eliminant(path: &std::path::Path) -> Result<PolyZ> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::MissingArtifact(format!("eliminant file {}: {e}", path.display()))
    })?;
    let json: serde_json::Value = serde_json::from_str(&text)?;
    let poly = json
        .get("polynomial")
        .ok_or_else(|| Error::Structural("eliminant JSON lacks `polynomial`".into()))?;
    PolyZ::from_json(poly)
}

/// The parameterized toy system {2x - k, y - x² - (k - x)²}: eliminating x
/// must give a polynomial proportional to 2y - k² (the calculus minimum of
/// x² + (c - x)²).
pub fn toy_system() -> (PolyZ, PolyZ) {
    let k = PolyZ::var(Var::K);
    let x = PolyZ::var(Var::X);
    let y = PolyZ::var(Var::Y);
    let e1 = x.clone() * PolyZ::from_i64(2) - k.clone();
    let d = &k - &x;
    let e4 = y - &x * &x - &d * &d;
    (e1, e4)
}

/// Eliminate x from the toy system and normalize; exact result 2y - k².
pub fn toy_eliminant(backend: Backend) -> Result<PolyZ> {
    let (e1, e4) = toy_system();
    let req = ResultantRequest::new(&e1, &e4, Var::X).with_backend(backend);
    let raw = resultant(&req)?;
    raw.squarefree_part_in(Var::Y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_float_scaled(f: &PolyZ, point: &[(Var, ExtFloat)], p: usize) -> (ExtFloat, ExtFloat) {
        let val = f
            .eval_convert(
                point,
                |c| ExtFloat::from_bigint(c, p),
                |a, b| a + b,
                |a, b| a * b,
                ExtFloat::one(p),
            )
            .unwrap();
        let abs_point: Vec<(Var, ExtFloat)> =
            point.iter().map(|(v, s)| (*v, s.abs())).collect();
        let scale = f
            .eval_convert(
                &abs_point,
                |c| ExtFloat::from_bigint(c, p).abs(),
                |a, b| a + b,
                |a, b| a * b,
                ExtFloat::one(p),
            )
            .unwrap();
        (val, scale)
    }

    #[test]
    fn e2_vanishes_at_unit_point() {
        let sys = build_system();
        let v = sys.e2.eval_partial(&[
            (Var::X, BigInt::from(1)),
            (Var::W, BigInt::from(1)),
        ]);
        assert!(v.is_zero());
    }

    #[test]
    fn system_degrees_match_construction() {
        let sys = build_system();
        assert_eq!(sys.e1.deg(Var::W), 2);
        assert_eq!(sys.e1.deg(Var::V), 2);
        assert_eq!(sys.e1.deg(Var::K), 3);
        assert_eq!(sys.e1.deg(Var::X), 3);
        assert_eq!(sys.e2.deg(Var::W), 2);
        assert_eq!(sys.e3.deg(Var::K), 4);
        assert_eq!(sys.e4.deg(Var::Y), 1);
        assert_eq!(sys.e4.deg(Var::V), 2);
    }

    #[test]
    fn system_residuals_vanish_at_oracle_minimizer() {
        let p = 256usize;
        let sys = build_system();
        let one = ExtFloat::one(p + 32);
        let m = oracle::minimize(&one, p).unwrap();
        let pt = oracle::profile(&m.r.with_precision(p), &m.x_m).unwrap();
        let point = vec![
            (Var::K, pt.k.clone()),
            (Var::X, pt.x.clone()),
            (Var::W, pt.w.clone()),
            (Var::V, pt.v.clone()),
            (Var::Y, m.lambda.clone()),
        ];
        for (name, eq) in [("E1", &sys.e1), ("E2", &sys.e2), ("E3", &sys.e3), ("E4", &sys.e4)] {
            let (val, scale) = eval_float_scaled(eq, &point, p);
            let scaled = &val.abs() / &scale;
            assert!(
                scaled.magnitude_below_pow2(-120),
                "{name} scaled residual {scaled}"
            );
        }
    }

    #[test]
    fn toy_pipeline_is_exact() {
        for backend in [Backend::Sylvester, Backend::Prs, Backend::Modular] {
            let t = toy_eliminant(backend).unwrap();
            let k = PolyZ::var(Var::K);
            let y = PolyZ::var(Var::Y);
            // 2y - k^2 up to sign; normalization puts the lexicographic
            // leading coefficient (the k^2 term) positive
            let expect = &k * &k - y * PolyZ::from_i64(2);
            assert_eq!(t, expect, "{:?}", backend);
        }
    }

    #[test]
    fn degenerate_resultant_retries_with_gcd() {
        // f and g share the factor (x - k): the raw resultant vanishes, the
        // retry divides it out and succeeds
        let k = PolyZ::var(Var::K);
        let x = PolyZ::var(Var::X);
        let common = &x - &k;
        let f = &common * &(&x - &PolyZ::from_i64(1));
        let g = &common * &(&x + &PolyZ::from_i64(2));
        let opts = EliminateOptions::default();
        let r = resultant_nondegenerate(&f, &g, Var::X, &opts).unwrap();
        // Res_x(x - 1, x + 2) = 3
        assert_eq!(r, PolyZ::from_i64(3));
    }

    #[test]
    fn empty_sample_list_gives_empty_report() {
        let y = PolyZ::var(Var::Y);
        let rep = verify_branch(&y, &[], 128).unwrap();
        assert!(rep.samples.is_empty());
    }
}
