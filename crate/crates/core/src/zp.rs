//! Word-sized prime-field arithmetic for the multi-modular resultant
//! backend: deterministic prime generation just below 2^62, dense univariate
//! polynomial arithmetic mod p, Euclidean resultants, and Newton
//! interpolation.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Upper bound for generated primes (exclusive): 2^62.
pub const PRIME_CEILING: u64 = 1 << 62;

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // a, b < p < 2^62, no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, valid for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes descending from just below 2^62, deterministically.
pub fn prime_sequence() -> impl Iterator<Item = u64> {
    (0..).map(|i| PRIME_CEILING - 1 - 2 * i).filter(|&n| is_prime_u64(n))
}

/// Residue of a signed big integer in `[0, p)`.
pub fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let base = (u64::MAX % p + 1) % p; // 2^64 mod p
    let mut r: u64 = 0;
    for d in n.magnitude().iter_u64_digits().rev() {
        r = addmod(mulmod(r, base, p), d % p, p);
    }
    if n.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

// ---- dense univariate polynomials over F_p ----
// Representation: little-endian coefficient vector, trimmed (no leading
// zeros); the zero polynomial is the empty vector.

pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

/// Remainder of `a` modulo `b` over F_p; `b` nonzero.
pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(!b.is_empty());
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let lb_inv = invmod(*b.last().unwrap(), p);
    while r.len() > db {
        let lr = *r.last().unwrap();
        if lr != 0 {
            let c = mulmod(lr, lb_inv, p);
            let shift = r.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                let t = mulmod(c, bc, p);
                let idx = shift + i;
                r[idx] = submod(r[idx], t, p);
            }
        }
        r.pop();
    }
    trim(r)
}

/// Resultant of dense univariate polynomials over F_p by the Euclidean
/// remainder sequence. Res of anything with the zero polynomial is 0;
/// Res of two (nonzero) constants is 1.
pub fn resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut res = 1u64;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return mulmod(res, powmod(b[0], da as u64, p), p);
        }
        if da < db {
            std::mem::swap(&mut a, &mut b);
            if da & 1 == 1 && db & 1 == 1 {
                res = p - res;
            }
            continue;
        }
        let r = rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        // Res(a, b) = (-1)^(da*db) * lc(b)^(da - dr) * Res(b, r)
        if da & 1 == 1 && db & 1 == 1 {
            res = p - res;
        }
        res = mulmod(res, powmod(*b.last().unwrap(), (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Newton interpolation through `(xs[i], ys[i])` with pairwise-distinct
/// `xs`; returns the dense coefficient vector (length `xs.len()`, trimmed).
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    if n == 0 {
        return Vec::new();
    }
    // divided differences
    let mut d = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = submod(d[i], d[i - 1], p);
            let den = submod(xs[i], xs[i - j], p);
            d[i] = mulmod(num, invmod(den, p), p);
        }
    }
    // expand Newton form to the monomial basis
    let mut out = vec![d[n - 1]];
    for i in (0..n - 1).rev() {
        // out = out * (x - xs[i]) + d[i]
        let mut next = vec![0u64; out.len() + 1];
        for (j, &c) in out.iter().enumerate() {
            next[j + 1] = addmod(next[j + 1], c, p);
            next[j] = submod(next[j], mulmod(c, xs[i], p), p);
        }
        next[0] = addmod(next[0], d[i], p);
        out = next;
    }
    trim(out)
}

/// Symmetric-range representative of `r mod m` as a signed integer.
pub fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    if r * &two > *m {
        r - m
    } else {
        r.clone()
    }
}

/// One incremental CRT step: given `x ≡ acc (mod m)` find the unique value
/// mod `m*p` congruent to `acc` mod `m` and to `r` mod `p`.
pub fn crt_step(acc: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    let pm = BigInt::from(p);
    let acc_mod_p = bigint_mod(acc, p);
    let diff = submod(r, acc_mod_p, p);
    let m_inv = invmod(bigint_mod(m, p), p);
    let t = mulmod(diff, m_inv, p);
    acc + m * BigInt::from(t)
}
