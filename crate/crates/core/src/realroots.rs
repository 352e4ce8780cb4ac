//! Certified real-root counting, isolation and refinement for exact
//! univariate polynomials: Sturm sequences over the rationals (implemented
//! as integer chains with positive-scale normalization, so every sign is
//! exact) plus interval bisection.

use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::var::Var;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type PolyZ = MPoly<BigInt>;

/// A rational-endpoint interval certified (by Sturm count) to contain
/// exactly one real root of the referenced polynomial in `(lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Fingerprint of the isolated polynomial, so refinement can reject a
    /// mismatched polynomial.
    pub polynomial_id: u64,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lo": rational_string(&self.lo),
            "hi": rational_string(&self.hi),
        })
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    crate::scalar::ExactScalar::from_decimal_str(s)
        .ok_or_else(|| Error::Structural(format!("cannot parse `{s}` as a rational")))
}

/// Stable fingerprint of a univariate polynomial (FNV-1a over the dense
/// coefficient text).
pub fn polynomial_id(f: &PolyZ) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for (ex, c) in f.terms() {
        for b in format!("{ex:?}:{c};").bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Dense coefficient vector of a univariate polynomial in `var`.
fn to_dense(f: &PolyZ, var: Var) -> Result<Vec<BigInt>> {
    if f.is_zero() {
        return Err(Error::Structural("zero polynomial has no root structure".into()));
    }
    let extra: Vec<Var> = f.vars().into_iter().filter(|v| *v != var).collect();
    if !extra.is_empty() {
        return Err(Error::Structural(format!(
            "expected a univariate polynomial in {var}, found extra variables {extra:?}"
        )));
    }
    Ok(f.coeffs_in(var)
        .iter()
        .map(|c| c.as_constant().expect("constant coefficient"))
        .collect())
}

/// The variable of a univariate polynomial (defaults to k for constants).
pub fn main_var(f: &PolyZ) -> Var {
    f.vars().first().copied().unwrap_or(Var::K)
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

/// Sign of f(p/q) for q > 0, exactly: sign of sum c_i p^i q^(n-i).
fn sign_at(coeffs: &[BigInt], point: &BigRational) -> i32 {
    let p = point.numer();
    let q = point.denom();
    let n = coeffs.len().saturating_sub(1);
    let mut acc = BigInt::zero();
    // Horner in p with q-homogenization
    for (i, c) in coeffs.iter().enumerate().rev() {
        if i == n {
            acc = c.clone();
        } else {
            acc = acc * p + c * q.pow((n - i) as u32);
        }
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn positive_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Signed pseudo-remainder scaled so the result equals -(A mod B) up to a
/// positive factor (the Sturm chain step), with content removed.
fn sturm_step(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r: Vec<BigInt> = a.to_vec();
    let mut used = 0usize;
    while r.len() > db {
        // r <- lb*r - lr*x^shift*b, one fraction-free reduction
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = &lr * bc;
            r[shift + i] = &r[shift + i] - &t;
        }
        r.pop();
        r = trim(r);
        used += 1;
        if r.is_empty() {
            break;
        }
    }
    // r = lb^used * (a mod b); the Sturm step needs -(a mod b) up to a
    // positive factor
    let scale_positive = !lb.is_negative() || used % 2 == 0;
    let mut out = r;
    if scale_positive {
        out = out.into_iter().map(|c| -c).collect();
    }
    positive_primitive(trim(out))
}

/// The Sturm chain of a squarefree polynomial (each element scaled by a
/// positive rational, which preserves all signs).
fn sturm_chain(coeffs: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f = positive_primitive(trim(coeffs.to_vec()));
    let mut chain = vec![f.clone()];
    if f.len() <= 1 {
        return chain;
    }
    let der: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    chain.push(positive_primitive(trim(der)));
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() || chain[n - 1].len() <= 1 {
            break;
        }
        let next = sturm_step(&chain[n - 2], &chain[n - 1]);
        if next.is_empty() {
            break;
        }
        chain.push(next);
    }
    chain
}

fn variations(chain: &[Vec<BigInt>], point: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i32;
    for f in chain {
        if f.is_empty() {
            continue;
        }
        let s = sign_at(f, point);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Divide out an exact rational root p/q (multiplicity one): exact division
/// by (q x - p).
fn deflate(coeffs: &[BigInt], root: &BigRational) -> Vec<BigInt> {
    let p = root.numer();
    let q = root.denom();
    // synthetic division: c(x) = (q x - p) d(x); work top down over Q, the
    // quotient of a primitive integer polynomial may be rational, so scale
    // back to a primitive integer vector at the end
    let n = coeffs.len() - 1;
    let mut d: Vec<BigRational> = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // match coefficients of x^(i+1): c_{i+1} = q d_i - p d_{i+1}
        let upper = if i + 1 < n {
            d[i + 1].clone()
        } else {
            BigRational::zero()
        };
        let ci = BigRational::from_integer(coeffs[i + 1].clone());
        d[i] = (ci + BigRational::from_integer(p.clone()) * upper)
            / BigRational::from_integer(q.clone());
    }
    debug_assert_eq!(
        BigRational::from_integer(coeffs[0].clone()),
        -BigRational::from_integer(p.clone()) * &d[0],
        "deflation point must be an exact root"
    );
    // clear denominators and make primitive
    let mut den = BigInt::one();
    for c in &d {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = d
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    positive_primitive(trim(ints))
}

fn ensure_squarefree(chain: &[Vec<BigInt>]) -> Result<()> {
    if let Some(last) = chain.iter().rev().find(|c| !c.is_empty()) {
        if last.len() > 1 && chain.len() > 1 {
            return Err(Error::Structural(
                "polynomial is not squarefree; apply squarefree_part first".into(),
            ));
        }
    }
    Ok(())
}

/// Exact number of real roots of a squarefree univariate `f` in `(lo, hi]`.
pub fn sturm_count(f: &PolyZ, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    let var = main_var(f);
    if lo >= hi {
        return Err(Error::Precondition("need lo < hi".into()));
    }
    let mut coeffs = to_dense(f, var)?;
    if coeffs.len() <= 1 {
        return Ok(0);
    }
    let mut count = 0usize;
    if sign_at(&coeffs, hi) == 0 {
        count += 1;
        coeffs = deflate(&coeffs, hi);
    }
    if !coeffs.is_empty() && coeffs.len() > 1 && sign_at(&coeffs, lo) == 0 {
        coeffs = deflate(&coeffs, lo);
    }
    if coeffs.len() <= 1 {
        return Ok(count);
    }
    let chain = sturm_chain(&coeffs);
    ensure_squarefree(&chain)?;
    let va = variations(&chain, lo);
    let vb = variations(&chain, hi);
    Ok(count + va.saturating_sub(vb))
}

/// Pairwise-disjoint isolating intervals, one per real root of squarefree
/// `f` in `(lo, hi]`.
pub fn isolate_roots(f: &PolyZ, lo: &BigRational, hi: &BigRational) -> Result<Vec<IsolatingInterval>> {
    let id = polynomial_id(f);
    let total = sturm_count(f, lo, hi)?;
    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(lo.clone(), hi.clone(), total)];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(IsolatingInterval {
                lo: a,
                hi: b,
                polynomial_id: id,
            }),
            _ => {
                let mid = (&a + &b) / BigRational::from_integer(2.into());
                let left = sturm_count(f, &a, &mid)?;
                stack.push((mid.clone(), b, n - left));
                stack.push((a, mid, left));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Shrink an isolating interval to the requested width by sign bisection
/// (each step at least halves the width; the chain of intervals is nested).
pub fn refine_root(
    iv: &IsolatingInterval,
    f: &PolyZ,
    target_width: &BigRational,
) -> Result<IsolatingInterval> {
    if polynomial_id(f) != iv.polynomial_id {
        return Err(Error::Precondition(
            "interval does not belong to this polynomial".into(),
        ));
    }
    if target_width <= &BigRational::zero() {
        return Err(Error::Precondition("target width must be positive".into()));
    }
    if iv.width() <= *target_width {
        return Ok(iv.clone());
    }
    let var = main_var(f);
    let mut coeffs = to_dense(f, var)?;
    let id = iv.polynomial_id;
    let two = BigRational::from_integer(2.into());

    // root exactly at the upper endpoint: collapse onto it
    if sign_at(&coeffs, &iv.hi) == 0 {
        let lo = (&iv.hi - target_width).max(iv.lo.clone());
        return Ok(IsolatingInterval {
            lo,
            hi: iv.hi.clone(),
            polynomial_id: id,
        });
    }
    // a root exactly at the (excluded) lower endpoint confuses sign
    // bisection; divide it out
    if sign_at(&coeffs, &iv.lo) == 0 {
        coeffs = deflate(&coeffs, &iv.lo);
    }
    let mut a = iv.lo.clone();
    let mut b = iv.hi.clone();
    let sb = sign_at(&coeffs, &b);
    debug_assert_ne!(sign_at(&coeffs, &a) * sb, 1, "isolating interval must flip sign");
    while &(&b - &a) > target_width {
        let mid = (&a + &b) / &two;
        let sm = sign_at(&coeffs, &mid);
        if sm == 0 {
            // exact rational root: pin the interval onto it
            let lo = (&mid - target_width).max(a.clone());
            return Ok(IsolatingInterval {
                lo,
                hi: mid,
                polynomial_id: id,
            });
        }
        if sm == sb {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(IsolatingInterval {
        lo: a,
        hi: b,
        polynomial_id: id,
    })
}

/// Exact rational roots of `f` among the candidate points.
pub fn rational_roots_among(f: &PolyZ, candidates: &[BigRational]) -> Result<Vec<BigRational>> {
    let var = main_var(f);
    let coeffs = to_dense(f, var)?;
    let mut out = Vec::new();
    for c in candidates {
        if sign_at(&coeffs, c) == 0 {
            out.push(c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> PolyZ {
        PolyZ::var(Var::X)
    }
    fn c(v: i64) -> PolyZ {
        PolyZ::from_i64(v)
    }
    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sturm_count_spec_examples() {
        // x^2 - 2 on (0, 2] -> 1
        let f = x() * x() - c(2);
        assert_eq!(sturm_count(&f, &q(0, 1), &q(2, 1)).unwrap(), 1);
        // (x-1)(x-2)(x-3) on (0, 4] -> 3
        let f = (x() - c(1)) * (x() - c(2)) * (x() - c(3));
        assert_eq!(sturm_count(&f, &q(0, 1), &q(4, 1)).unwrap(), 3);
        // x^2 + 1 on (-10, 10] -> 0
        let f = x() * x() + c(1);
        assert_eq!(sturm_count(&f, &q(-10, 1), &q(10, 1)).unwrap(), 0);
    }

    #[test]
    fn half_open_endpoint_convention() {
        let f = (x() - c(1)) * (x() - c(2));
        // root at the upper endpoint counts
        assert_eq!(sturm_count(&f, &q(0, 1), &q(1, 1)).unwrap(), 1);
        // root at the lower endpoint does not
        assert_eq!(sturm_count(&f, &q(1, 1), &q(3, 2)).unwrap(), 0);
        assert_eq!(sturm_count(&f, &q(1, 1), &q(2, 1)).unwrap(), 1);
    }

    #[test]
    fn non_squarefree_is_rejected() {
        let f = (x() - c(1)) * (x() - c(1));
        assert!(matches!(
            sturm_count(&f, &q(0, 1), &q(2, 1)),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn isolate_spec_examples() {
        // x^2 - 2 on (0, 2]: one interval containing sqrt(2)
        let f = x() * x() - c(2);
        let ivs = isolate_roots(&f, &q(0, 1), &q(2, 1)).unwrap();
        assert_eq!(ivs.len(), 1);
        let sqrt2 = q(14142135624, 10000000000);
        assert!(ivs[0].lo < sqrt2 && sqrt2 <= ivs[0].hi);

        // (x-1)(x-2) on (0, 3]: two disjoint intervals around 1 and 2
        let f = (x() - c(1)) * (x() - c(2));
        let ivs = isolate_roots(&f, &q(0, 1), &q(3, 1)).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].hi <= ivs[1].lo);
        assert!(ivs[0].lo < q(1, 1) && q(1, 1) <= ivs[0].hi);
        assert!(ivs[1].lo < q(2, 1) && q(2, 1) <= ivs[1].hi);

        // prod_{i=1..6} (x - i) on (0, 7]: six intervals
        let mut f = PolyZ::one();
        for i in 1..=6 {
            f = f * (x() - c(i));
        }
        let ivs = isolate_roots(&f, &q(0, 1), &q(7, 1)).unwrap();
        assert_eq!(ivs.len(), 6);
        for (iv, root) in ivs.iter().zip(1..=6) {
            let r = q(root, 1);
            assert!(iv.lo < r && r <= iv.hi, "root {root}");
        }
    }

    #[test]
    fn refine_pins_sqrt_two_to_ten_digits() {
        let f = x() * x() - c(2);
        let ivs = isolate_roots(&f, &q(0, 1), &q(2, 1)).unwrap();
        let target = q(1, 10_000_000_000);
        let tight = refine_root(&ivs[0], &f, &target).unwrap();
        assert!(tight.width() <= target);
        // nested in the original
        assert!(tight.lo >= ivs[0].lo && tight.hi <= ivs[0].hi);
        let sqrt2 = BigRational::new(
            "141421356237309504880168872420969807857".parse().unwrap(),
            "100000000000000000000000000000000000000".parse().unwrap(),
        );
        assert!(tight.lo < sqrt2 && sqrt2 <= tight.hi);
        // already narrow: returned unchanged
        let again = refine_root(&tight, &f, &q(1, 100)).unwrap();
        assert_eq!(again, tight);
    }

    #[test]
    fn refine_collapses_onto_exact_rational_root() {
        // factor (x - 1): refinement around 1 lands exactly on 1
        let f = (x() - c(1)) * (x() - c(3));
        let ivs = isolate_roots(&f, &q(0, 1), &q(2, 1)).unwrap();
        assert_eq!(ivs.len(), 1);
        let tight = refine_root(&ivs[0], &f, &q(1, 1i64 << 40)).unwrap();
        assert_eq!(tight.hi, q(1, 1));
        assert!(tight.lo < q(1, 1));
        assert!(tight.width() <= q(1, 1i64 << 40));
    }

    #[test]
    fn refine_rejects_foreign_interval() {
        let f = x() * x() - c(2);
        let g = x() * x() - c(3);
        let ivs = isolate_roots(&f, &q(0, 1), &q(2, 1)).unwrap();
        assert!(matches!(
            refine_root(&ivs[0], &g, &q(1, 100)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn interval_json_shape() {
        let iv = IsolatingInterval {
            lo: q(1, 3),
            hi: q(2, 1),
            polynomial_id: 7,
        };
        let j = iv.to_json();
        assert_eq!(j["lo"], "1/3");
        assert_eq!(j["hi"], "2");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn partition_additivity(mid_num in -20i64..20) {
            // count over (lo, hi] = count over (lo, m] + count over (m, hi]
            let f = (x() - c(-3)) * (x() - c(1)) * (x() - c(4)) * (x() + c(7));
            let lo = q(-10, 1);
            let hi = q(10, 1);
            let m = q(mid_num, 2);
            prop_assume!(lo < m && m < hi);
            let whole = sturm_count(&f, &lo, &hi).unwrap();
            let left = sturm_count(&f, &lo, &m).unwrap();
            let right = sturm_count(&f, &m, &hi).unwrap();
            prop_assert_eq!(whole, left + right);
        }

        #[test]
        fn isolation_finds_construction_roots(
            roots in proptest::collection::btree_set(-50i64..=50, 1..=8)
        ) {
            let roots: Vec<i64> = roots.iter().copied().collect();
            let mut f = PolyZ::one();
            for r in &roots {
                // rational roots r/2 to exercise non-integers
                f = f * (x() * c(2) - c(*r));
            }
            let ivs = isolate_roots(&f, &q(-100, 1), &q(100, 1)).unwrap();
            prop_assert_eq!(ivs.len(), roots.len());
            for (iv, r) in ivs.iter().zip(&roots) {
                let root = q(*r, 2);
                prop_assert!(iv.lo < root && root <= iv.hi);
            }
        }

        #[test]
        fn refinement_halves_and_stays_nested(seed in 0u64..1000) {
            let f = x() * x() * x() - c(2); // cube root of 2
            let ivs = isolate_roots(&f, &q(0, 1), &q(2, 1)).unwrap();
            let target = q(1, 1 + (seed as i64) * 1000 + 7);
            let tight = refine_root(&ivs[0], &f, &target).unwrap();
            prop_assert!(tight.width() <= target);
            prop_assert!(tight.lo >= ivs[0].lo && tight.hi <= ivs[0].hi);
        }
    }
}
