//! Truncated power series over extended-precision floats, and Newton/Hensel
//! lifting of an algebraic branch: from the eliminant P*(k, y) and the seed
//! a = λ(1), compute the Taylor expansion of λ at k = 1 and transform it
//! into the expansion of μ(1 + t) in the radius offset t (μ(r) = √λ(√r)).

use crate::error::{Error, Result};
use crate::float::ExtFloat;
use crate::oracle;
use crate::poly::MPoly;
use crate::var::Var;
use num_bigint::BigInt;
use num_rational::BigRational;

pub type PolyZ = MPoly<BigInt>;

/// Truncated formal power series with [`ExtFloat`] coefficients.
/// Length is always `truncation_order + 1`; arithmetic never silently
/// extends the order.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    coeffs: Vec<ExtFloat>,
    precision_bits: usize,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<ExtFloat>, precision_bits: usize) -> Self {
        assert!(!coeffs.is_empty());
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.with_precision(precision_bits))
            .collect();
        PowerSeries {
            coeffs,
            precision_bits,
        }
    }

    pub fn zero(order: usize, precision_bits: usize) -> Self {
        PowerSeries {
            coeffs: vec![ExtFloat::zero(precision_bits); order + 1],
            precision_bits,
        }
    }

    pub fn constant(c: ExtFloat, order: usize, precision_bits: usize) -> Self {
        let mut s = Self::zero(order, precision_bits);
        s.coeffs[0] = c.with_precision(precision_bits);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn coeff(&self, i: usize) -> &ExtFloat {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[ExtFloat] {
        &self.coeffs
    }

    /// Truncate (or zero-extend) to a new order.
    pub fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ExtFloat::zero(self.precision_bits));
        PowerSeries {
            coeffs,
            precision_bits: self.precision_bits,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() || self.precision_bits != other.precision_bits {
            return Err(Error::Structural(format!(
                "series order/precision mismatch: ({}, {}) vs ({}, {})",
                self.order(),
                self.precision_bits,
                other.order(),
                other.precision_bits
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            precision_bits: self.precision_bits,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            precision_bits: self.precision_bits,
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.order();
        let p = self.precision_bits;
        let mut out = vec![ExtFloat::zero(p); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let t = &self.coeffs[i] * &other.coeffs[j];
                out[i + j] = &out[i + j] + &t;
            }
        }
        Ok(PowerSeries {
            coeffs: out,
            precision_bits: p,
        })
    }

    pub fn scale(&self, c: &ExtFloat) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            precision_bits: self.precision_bits,
        }
    }

    /// Series division self / other; the divisor needs a nonzero constant
    /// term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if other.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "series division needs a nonzero constant term".into(),
            ));
        }
        let n = self.order();
        let p = self.precision_bits;
        let mut out: Vec<ExtFloat> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = self.coeffs[i].clone();
            for j in 1..=i {
                if other.coeffs[j].is_zero() || out[i - j].is_zero() {
                    continue;
                }
                acc = &acc - &(&other.coeffs[j] * &out[i - j]);
            }
            out.push(&acc / &other.coeffs[0]);
        }
        Ok(PowerSeries {
            coeffs: out,
            precision_bits: p,
        })
    }

    /// Square root with S(0) > 0, by the coefficient recurrence
    /// s_n = (a_n - sum_{0<j<n} s_j s_{n-j}) / (2 s_0).
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_positive() {
            return Err(Error::Domain(
                "series square root needs a positive constant term".into(),
            ));
        }
        let n = self.order();
        let p = self.precision_bits;
        let s0 = self.coeffs[0].sqrt()?;
        let two_s0 = s0.mul_i64(2);
        let mut out = vec![s0];
        for i in 1..=n {
            let mut acc = self.coeffs[i].clone();
            for j in 1..i {
                if out[j].is_zero() || out[i - j].is_zero() {
                    continue;
                }
                acc = &acc - &(&out[j] * &out[i - j]);
            }
            out.push(&acc / &two_s0);
        }
        Ok(PowerSeries {
            coeffs: out,
            precision_bits: p,
        })
    }

    /// Composition self ∘ inner (Horner over series); `inner` must have
    /// zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_compatible(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "series composition needs a zero constant term in the inner series".into(),
            ));
        }
        let n = self.order();
        let p = self.precision_bits;
        let mut acc = PowerSeries::constant(self.coeffs[n].clone(), n, p);
        for i in (0..n).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] = &acc.coeffs[0] + &self.coeffs[i];
        }
        Ok(acc)
    }

    /// Horner evaluation at a point.
    pub fn evaluate(&self, t: &ExtFloat) -> ExtFloat {
        let mut acc = ExtFloat::zero(self.precision_bits);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// JSON form `{order, precision_bits, coefficients: [decimal strings]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "precision_bits": self.precision_bits,
            "coefficients": self
                .coeffs
                .iter()
                .map(|c| c.to_decimal_full())
                .collect::<Vec<_>>(),
        })
    }
}

/// The binomial series of (1+t)^(1/2) minus 1: zero constant term, ready
/// for composition.
pub fn sqrt_one_plus_t_minus_one(order: usize, p: usize) -> PowerSeries {
    let mut coeffs = vec![ExtFloat::zero(p); order + 1];
    // c_1 = 1/2, c_{n+1} = c_n (1/2 - n) / (n + 1)
    let half = ExtFloat::from_rational(&BigRational::new(1.into(), 2.into()), p);
    let mut c = half.clone();
    if order >= 1 {
        coeffs[1] = c.clone();
    }
    for n in 1..order {
        let factor = &(&half - &ExtFloat::from_i64(n as i64, p))
            / &ExtFloat::from_i64((n + 1) as i64, p);
        c = &c * &factor;
        coeffs[n + 1] = c.clone();
    }
    PowerSeries::new(coeffs, p)
}

/// Exact Taylor shift: substitute k = center + t into a (k, y)-polynomial,
/// expanded over the integers.
pub fn taylor_shift(poly: &PolyZ, center: &BigInt) -> PolyZ {
    let shift = &PolyZ::var(Var::T) + &PolyZ::constant(center.clone());
    poly.substitute(Var::K, &shift)
}

/// Taylor shift truncated at t-degree `max_t`: identical to
/// [`taylor_shift`] modulo t^(max_t+1). A lift to order N only consumes
/// t-coefficients up to N, so the full shift of a degree-hundreds eliminant
/// is never materialized. Binomial accumulation per term, exact.
pub fn taylor_shift_truncated(poly: &PolyZ, center: &BigInt, max_t: usize) -> PolyZ {
    let deg_k = poly.deg(Var::K);
    // binomial rows C(a, j) * center^(a-j) for j <= max_t, built iteratively
    let mut row: Vec<BigInt> = vec![BigInt::from(1)]; // a = 0
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(deg_k + 1);
    rows.push(row.clone());
    for _ in 1..=deg_k {
        let mut next: Vec<BigInt> = Vec::with_capacity((row.len() + 1).min(max_t + 1));
        for j in 0..row.len().min(max_t) + 1 {
            let from_left = if j > 0 { row[j - 1].clone() } else { BigInt::from(0) };
            let from_same = if j < row.len() {
                &row[j] * center
            } else {
                BigInt::from(0)
            };
            next.push(from_left + from_same);
        }
        next.truncate(max_t + 1);
        rows.push(next.clone());
        row = next;
    }
    let mut out = PolyZ::zero();
    for (ex, c) in poly.terms() {
        let a = ex[Var::K.index()] as usize;
        for (j, binom) in rows[a].iter().enumerate() {
            let mut e = *ex;
            e[Var::K.index()] = 0;
            e[Var::T.index()] = j as u16;
            out += &PolyZ::monomial(e, c * binom);
        }
    }
    out
}

/// A Hensel lift problem: find the power series y(t) with F(t, y(t)) = 0
/// and y(0) = seed.
#[derive(Clone, Debug)]
pub struct LiftProblem {
    /// Polynomial in (t, y).
    pub f: PolyZ,
    pub seed: ExtFloat,
    pub order: usize,
    pub precision_bits: usize,
}

/// Scaled-magnitude tolerances for the Hensel preconditions.
const RESIDUAL_EXP_FRACTION: i64 = 2; // |F(0,a)| scaled < 2^(-p/2)

fn horner_scaled(coeffs: &[ExtFloat], x: &ExtFloat) -> (ExtFloat, ExtFloat) {
    let p = x.precision();
    let mut val = ExtFloat::zero(p);
    let mut mag = ExtFloat::zero(p);
    let ax = x.abs();
    for c in coeffs.iter().rev() {
        val = &(&val * x) + c;
        mag = &(&mag * &ax) + &c.abs();
    }
    (val, mag)
}

/// Newton lifting y_{n+1} = y_n - F(t, y_n)/F_y(t, y_n) in the truncated
/// series ring, doubling the t-adic accuracy per step and capping the
/// working order at the target. Returns all iterates (the last is the
/// result).
pub fn newton_lift_trace(prob: &LiftProblem) -> Result<Vec<PowerSeries>> {
    let n = prob.order;
    let p = prob.precision_bits;
    let seed = prob.seed.with_precision(p);

    // y-slice view of F: c_j(t) as float series
    let slices = prob.f.coeffs_in(Var::Y);
    if slices.len() < 2 {
        return Err(Error::Precondition(
            "lift needs a polynomial of positive y-degree".into(),
        ));
    }
    let to_series = |slice: &PolyZ| -> Result<PowerSeries> {
        let mut coeffs = vec![ExtFloat::zero(p); n + 1];
        for tc in slice.coeffs_in(Var::T).iter().take(n + 1).enumerate() {
            let (pw, cpoly) = tc;
            let c = cpoly.as_constant().ok_or_else(|| {
                Error::Structural("lift polynomial must live in (t, y) only".into())
            })?;
            coeffs[pw] = ExtFloat::from_bigint(&c, p);
        }
        Ok(PowerSeries::new(coeffs, p))
    };
    let c_series: Vec<PowerSeries> = slices.iter().map(|s| to_series(s)).collect::<Result<_>>()?;
    let dslices = prob.f.derivative(Var::Y).coeffs_in(Var::Y);
    let d_series: Vec<PowerSeries> = dslices.iter().map(|s| to_series(s)).collect::<Result<_>>()?;

    // Hensel preconditions at t = 0
    let consts: Vec<ExtFloat> = c_series.iter().map(|s| s.coeff(0).clone()).collect();
    let (f0, f0mag) = horner_scaled(&consts, &seed);
    if !f0mag.is_zero() {
        let scaled = &f0.abs() / &f0mag;
        if !scaled.magnitude_below_pow2(-(p as i64) / RESIDUAL_EXP_FRACTION) {
            return Err(Error::Precondition(format!(
                "seed is not a root at t = 0: scaled residual {scaled}"
            )));
        }
    }
    let dconsts: Vec<ExtFloat> = d_series.iter().map(|s| s.coeff(0).clone()).collect();
    let (d0, d0mag) = horner_scaled(&dconsts, &seed);
    let derivative_ok = !d0.is_zero() && !d0mag.is_zero() && {
        let scaled = &d0.abs() / &d0mag;
        scaled >= ExtFloat::parse_decimal(crate::eliminator::DERIVATIVE_FLAG_THRESHOLD, 64)?
    };
    if !derivative_ok {
        return Err(Error::Precondition(
            "exceptional point; lifting not justified here".into(),
        ));
    }

    // series Horner evaluation of F (or F_y) at the current iterate
    let eval_at = |cs: &[PowerSeries], ys: &PowerSeries, order: usize| -> Result<PowerSeries> {
        let mut acc = cs.last().unwrap().resized(order);
        for c in cs.iter().rev().skip(1) {
            acc = acc.mul(ys)?;
            acc = acc.add(&c.resized(order))?;
        }
        Ok(acc)
    };

    let steps = (usize::BITS - n.leading_zeros()) as usize + 1; // ceil(log2(n+1)) + 1
    let mut iterates = Vec::with_capacity(steps + 1);
    let mut y = PowerSeries::constant(seed.clone(), 0, p);
    iterates.push(y.clone());
    let mut accuracy = 0usize; // exact through t^accuracy
    for _ in 0..steps {
        let target = (2 * accuracy + 1).min(n);
        let yw = y.resized(target);
        let fv = eval_at(&c_series, &yw, target)?;
        let dv = eval_at(&d_series, &yw, target)?;
        let delta = fv.div(&dv)?;
        y = yw.sub(&delta)?;
        accuracy = target;
        iterates.push(y.clone());
        if accuracy == n {
            break;
        }
    }
    // one confirming step at full order (the "+1" in the iteration count)
    let yw = y.resized(n);
    let fv = eval_at(&c_series, &yw, n)?;
    let dv = eval_at(&d_series, &yw, n)?;
    let delta = fv.div(&dv)?;
    y = yw.sub(&delta)?;
    iterates.push(y.clone());
    Ok(iterates)
}

/// Newton lifting; returns the lifted series of the requested order.
pub fn newton_lift(prob: &LiftProblem) -> Result<PowerSeries> {
    Ok(newton_lift_trace(prob)?.pop().expect("nonempty trace"))
}

/// Polish a root of the univariate polynomial `g` (exact integer
/// coefficients, evaluated in floats) by scalar Newton iterations.
pub fn polish_root(g: &PolyZ, var: Var, seed: &ExtFloat, iterations: usize) -> Result<ExtFloat> {
    let p = seed.precision();
    let coeffs: Vec<ExtFloat> = g
        .coeffs_in(var)
        .iter()
        .map(|c| {
            c.as_constant()
                .map(|b| ExtFloat::from_bigint(&b, p))
                .ok_or_else(|| Error::Structural("polish_root needs a univariate polynomial".into()))
        })
        .collect::<Result<_>>()?;
    let dcoeffs: Vec<ExtFloat> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul_i64(i as i64))
        .collect();
    let horner = |cs: &[ExtFloat], x: &ExtFloat| -> ExtFloat {
        let mut acc = ExtFloat::zero(p);
        for c in cs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    };
    let mut x = seed.clone();
    for _ in 0..iterations {
        let fx = horner(&coeffs, &x);
        let dx = horner(&dcoeffs, &x);
        if dx.is_zero() {
            return Err(Error::Precondition("Newton polish hit a critical point".into()));
        }
        x = &x - &(&fx / &dx);
    }
    Ok(x)
}

/// Full pipeline: Taylor coefficients of μ(1 + t) in the radius offset t.
///
/// Seed a = λ(1) from the oracle at precision 2p, polished by scalar Newton
/// on P*(1, y); λ-series by Newton lifting of P*(1 + t_k, y); substitution
/// t_k = sqrt(1 + t) - 1 by composition; final series square root.
pub fn mu_taylor(reduced: &PolyZ, order: usize, precision_bits: usize) -> Result<PowerSeries> {
    let p = precision_bits;
    let seed = lambda_seed(reduced, p)?;
    let shifted = taylor_shift_truncated(reduced, &BigInt::from(1), order);
    let prob = LiftProblem {
        f: shifted,
        seed: seed.with_precision(p),
        order,
        precision_bits: p,
    };
    let lambda_series = newton_lift(&prob)?;
    let inner = sqrt_one_plus_t_minus_one(order, p);
    let lambda_in_r = lambda_series.compose(&inner)?;
    lambda_in_r.sqrt()
}

/// The seed a = λ(1): oracle value at precision 2p polished by scalar
/// Newton on P*(1, y) (the lift assumes an exact root at t = 0, so the seed
/// error must sit far below the series tolerance).
pub fn lambda_seed(reduced: &PolyZ, precision_bits: usize) -> Result<ExtFloat> {
    let p2 = 2 * precision_bits;
    let rough = oracle::lambda_of_k(&ExtFloat::one(p2 + 32), p2)?;
    let at_one = reduced.eval_partial(&[(Var::K, BigInt::from(1))]);
    polish_root(&at_one, Var::Y, &rough, 8)
}
