//! Modular GCD machinery: Brown's algorithm for univariate integer
//! polynomials and a certified coprimality probe, used to keep content and
//! squarefree computations on large eliminants cheap. PRS gcds on
//! degree-hundreds integer polynomials swell catastrophically; single-prime
//! images are enough to certify triviality, and CRT reconstruction plus a
//! final divisibility check gives the nontrivial case exactly.

use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::var::Var;
use crate::zp;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn positive_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return v;
    }
    if v.last().map(|c| c.is_negative()).unwrap_or(false) {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

fn mod_image(v: &[BigInt], p: u64) -> Vec<u64> {
    zp::trim(v.iter().map(|c| zp::bigint_mod(c, p)).collect())
}

fn euclid_gcd_monic(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = zp::rem(&a, &b, p);
        a = b;
        b = r;
    }
    // make monic
    let inv = zp::invmod(*a.last().unwrap(), p);
    a.iter().map(|c| zp::mulmod(*c, inv, p)).collect()
}

/// Exact division over Q with integrality check: `a / g` in Z[x] or None.
fn div_exact_dense(a: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    if g.is_empty() {
        return None;
    }
    let mut rem: Vec<BigRational> = a
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let dg = g.len() - 1;
    let lg = BigRational::from_integer(g.last().unwrap().clone());
    if rem.len() < g.len() {
        return None;
    }
    let mut q = vec![BigRational::zero(); rem.len() - dg];
    for top in (dg..rem.len()).rev() {
        let c = rem[top].clone();
        if c.is_zero() {
            continue;
        }
        let qc = c / &lg;
        let shift = top - dg;
        for (i, gc) in g.iter().enumerate() {
            let t = &qc * BigRational::from_integer(gc.clone());
            rem[shift + i] = &rem[shift + i] - &t;
        }
        q[shift] = qc;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut out = Vec::with_capacity(q.len());
    for c in q {
        if !c.denom().is_one() {
            return None;
        }
        out.push(c.numer().clone());
    }
    Some(trim(out))
}

/// GCD of two nonzero primitive univariate integer polynomials (dense,
/// trimmed), by modular images with CRT reconstruction and a final
/// divisibility verification. Output is primitive with positive leading
/// coefficient.
pub fn gcd_univariate(a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
    let a = positive_primitive(trim(a.to_vec()));
    let b = positive_primitive(trim(b.to_vec()));
    if a.is_empty() || b.is_empty() {
        return Err(Error::Structural("gcd with the zero polynomial".into()));
    }
    if a.len() == 1 || b.len() == 1 {
        return Ok(vec![BigInt::one()]);
    }
    let gamma = a.last().unwrap().gcd(b.last().unwrap());

    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut best_deg = usize::MAX;
    let mut prev: Option<Vec<BigInt>> = None;
    let mut attempts = 0usize;
    for p in zp::prime_sequence() {
        attempts += 1;
        if attempts > 4096 {
            return Err(Error::Internal(
                "modular gcd did not converge within the prime budget".into(),
            ));
        }
        if zp::bigint_mod(a.last().unwrap(), p) == 0 || zp::bigint_mod(b.last().unwrap(), p) == 0 {
            continue;
        }
        let gp = euclid_gcd_monic(mod_image(&a, p), mod_image(&b, p), p);
        let dp = gp.len() - 1;
        if dp == 0 {
            // a trivial image certifies coprimality (degrees only ever
            // grow under specialization for good primes)
            return Ok(vec![BigInt::one()]);
        }
        if dp > best_deg {
            continue; // unlucky prime
        }
        if dp < best_deg {
            best_deg = dp;
            modulus = BigInt::one();
            acc = vec![BigInt::zero(); dp + 1];
            prev = None;
        }
        let gm = zp::bigint_mod(&gamma, p);
        for (i, c) in gp.iter().enumerate() {
            let scaled = zp::mulmod(*c, gm, p);
            acc[i] = zp::crt_step(&acc[i], &modulus, scaled, p);
        }
        modulus *= BigInt::from(p);
        let sym: Vec<BigInt> = acc.iter().map(|c| zp::symmetric(c, &modulus)).collect();
        let candidate = positive_primitive(trim(sym));
        if prev.as_ref() == Some(&candidate) {
            if div_exact_dense(&a, &candidate).is_some() && div_exact_dense(&b, &candidate).is_some()
            {
                return Ok(candidate);
            }
        }
        prev = Some(candidate);
    }
    unreachable!("prime sequence is infinite")
}

/// Certified coprimality of `f` and `g` viewed in `var` over the fraction
/// field of the remaining variables: evaluates every other variable at
/// small integers modulo a word prime (keeping the leading `var`
/// coefficients alive, so the image gcd degree dominates the true gcd
/// degree) and checks the univariate image gcd is constant. `true` is a
/// proof; `false` is merely "not certified here".
pub fn certainly_coprime_in(f: &MPoly<BigInt>, g: &MPoly<BigInt>, var: Var) -> bool {
    if f.is_zero() || g.is_zero() {
        return false;
    }
    if f.deg(var) == 0 || g.deg(var) == 0 {
        return false;
    }
    let mut others: Vec<Var> = Vec::new();
    for v in Var::ALL {
        if v != var && (f.contains_var(v) || g.contains_var(v)) {
            others.push(v);
        }
    }
    let lcf = f.lc_in(var);
    let lcg = g.lc_in(var);
    let mut primes = zp::prime_sequence();
    for _ in 0..2 {
        let p = primes.next().expect("primes");
        'point: for point in 0u64..24 {
            let assign: Vec<(Var, BigInt)> = others
                .iter()
                .map(|v| (*v, BigInt::from(point)))
                .collect();
            for lc in [&lcf, &lcg] {
                let img = lc.eval_partial(&assign);
                let c = img.as_constant().unwrap_or_else(BigInt::zero);
                if zp::bigint_mod(&c, p) == 0 {
                    continue 'point;
                }
            }
            let fu = univariate_image(f, var, &assign, p);
            let gu = univariate_image(g, var, &assign, p);
            if fu.len() <= 1 || gu.len() <= 1 {
                continue;
            }
            let gcd = euclid_gcd_monic(fu, gu, p);
            if gcd.len() == 1 {
                return true;
            }
        }
    }
    false
}

fn univariate_image(f: &MPoly<BigInt>, var: Var, assign: &[(Var, BigInt)], p: u64) -> Vec<u64> {
    let img = f.eval_partial(assign);
    let mut out = vec![0u64; img.deg(var) + 1];
    for (ex, c) in img.terms() {
        let pw = ex[var.index()] as usize;
        out[pw] = zp::addmod(out[pw], zp::bigint_mod(c, p), p);
    }
    zp::trim(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(v: &[i64]) -> Vec<BigInt> {
        trim(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn modular_gcd_matches_construction() {
        // (x-2)(x+3)(2x+1) and (x-2)(2x+1)(x-5): gcd (x-2)(2x+1)
        let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let f1 = dense(&[-2, 1]);
        let f2 = dense(&[3, 1]);
        let f3 = dense(&[1, 2]);
        let f4 = dense(&[-5, 1]);
        let a = mul(&mul(&f1, &f2), &f3);
        let b = mul(&mul(&f1, &f3), &f4);
        let g = gcd_univariate(&a, &b).unwrap();
        assert_eq!(g, mul(&f1, &f3));
    }

    #[test]
    fn modular_gcd_coprime_fast_path() {
        let a = dense(&[1, 0, 1]); // x^2 + 1
        let b = dense(&[2, 1]); // x + 2
        assert_eq!(gcd_univariate(&a, &b).unwrap(), dense(&[1]));
    }

    #[test]
    fn modular_gcd_large_coefficients() {
        // common factor with 200-bit coefficients
        let big: BigInt = BigInt::from(7) << 200;
        let g0 = vec![big.clone() + 1, BigInt::from(3)];
        let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let a = mul(&g0, &dense(&[1, 1, 1]));
        let b = mul(&g0, &dense(&[-4, 0, 0, 1]));
        let g = gcd_univariate(&a, &b).unwrap();
        assert_eq!(g, positive_primitive(g0));
    }

    #[test]
    fn coprime_probe_certifies() {
        let k = MPoly::<BigInt>::var(Var::K);
        let y = MPoly::<BigInt>::var(Var::Y);
        // f = y^2 - k, g = 2y: coprime in y over Q(k)
        let f = &(&y * &y) - &k;
        let g = &y + &y;
        assert!(certainly_coprime_in(&f, &g, Var::Y));
        // f and f shifted share the factor (y - k)
        let shared = &y - &k;
        let a = &shared * &(&y + &MPoly::one());
        let b = &shared * &(&y - &MPoly::one());
        assert!(!certainly_coprime_in(&a, &b, Var::Y));
    }
}
