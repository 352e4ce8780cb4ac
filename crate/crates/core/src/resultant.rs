//! Resultants of exact polynomials in a designated variable.
//!
//! Three interchangeable backends:
//! - `Sylvester`: fraction-free (Bareiss) determinant of the Sylvester
//!   matrix; the reference implementation;
//! - `Prs`: subresultant polynomial remainder sequence; the exact workhorse;
//! - `Modular`: evaluation/interpolation of the surviving variables at
//!   small-integer points modulo word-sized primes with CRT reconstruction;
//!   the performance path for large eliminations.
//!
//! All backends return the resultant with the standard Sylvester-determinant
//! sign convention and agree exactly.

use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::scalar::ExactScalar;
use crate::var::{Expos, Var, NVARS};
use crate::zp;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Default cap on the number of good primes the modular backend may consume
/// before giving up with a retriable resource error.
pub const DEFAULT_PRIME_BUDGET: usize = 4096;

/// Sylvester dimension (deg f + deg g) up to which the `Auto` backend
/// prefers the PRS path; beyond it, intermediate expression swell makes the
/// modular path the better choice.
pub const AUTO_PRS_DIMENSION: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Backend {
    Sylvester,
    Prs,
    Modular,
    #[default]
    Auto,
}

impl Backend {
    pub fn parse(s: &str) -> Result<Backend> {
        match s {
            "sylvester" => Ok(Backend::Sylvester),
            "prs" => Ok(Backend::Prs),
            "modular" => Ok(Backend::Modular),
            "auto" => Ok(Backend::Auto),
            other => Err(Error::Structural(format!("unknown backend `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Sylvester => "sylvester",
            Backend::Prs => "prs",
            Backend::Modular => "modular",
            Backend::Auto => "auto",
        }
    }
}

/// A resultant computation request.
pub struct ResultantRequest<'a> {
    pub f: &'a MPoly<BigInt>,
    pub g: &'a MPoly<BigInt>,
    pub var: Var,
    pub backend: Backend,
    /// Optional per-variable degree bounds for the interpolation; when
    /// absent, Bézout-type bounds are derived from the inputs. Supplied
    /// bounds must dominate the true degrees (checked post hoc).
    pub degree_bounds: Option<Vec<(Var, usize)>>,
    pub prime_budget: usize,
}

impl<'a> ResultantRequest<'a> {
    pub fn new(f: &'a MPoly<BigInt>, g: &'a MPoly<BigInt>, var: Var) -> Self {
        ResultantRequest {
            f,
            g,
            var,
            backend: Backend::Auto,
            degree_bounds: None,
            prime_budget: DEFAULT_PRIME_BUDGET,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }
}

/// Compute `Res_var(f, g)` with the requested backend.
pub fn resultant(req: &ResultantRequest) -> Result<MPoly<BigInt>> {
    if req.f.is_zero() || req.g.is_zero() {
        return Err(Error::Structural(
            "resultant of the zero polynomial is not defined here".into(),
        ));
    }
    let dim = req.f.deg(req.var) + req.g.deg(req.var);
    match req.backend {
        Backend::Sylvester => {
            let m = sylvester_matrix(req.f, req.g, req.var)?;
            det_bareiss(m)
        }
        Backend::Prs => prs_resultant(req.f, req.g, req.var),
        Backend::Modular => modular_resultant(req),
        Backend::Auto => {
            if dim <= AUTO_PRS_DIMENSION {
                prs_resultant(req.f, req.g, req.var)
            } else {
                modular_resultant(req)
            }
        }
    }
}

/// The (m+n)x(m+n) Sylvester matrix of `f` and `g` in `var`; its
/// determinant is the resultant.
pub fn sylvester_matrix<C: ExactScalar>(
    f: &MPoly<C>,
    g: &MPoly<C>,
    var: Var,
) -> Result<Vec<Vec<MPoly<C>>>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Structural(
            "Sylvester matrix of the zero polynomial is not defined".into(),
        ));
    }
    let m = f.deg(var);
    let n = g.deg(var);
    let size = m + n;
    let fc = f.coeffs_in(var); // ascending by power
    let gc = g.coeffs_in(var);
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![MPoly::zero(); size];
        for (j, c) in fc.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MPoly::zero(); size];
        for (j, c) in gc.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Fraction-free determinant (Bareiss) with row pivoting; exact over any
/// [`ExactScalar`] coefficient domain.
pub fn det_bareiss<C: ExactScalar>(mut a: Vec<Vec<MPoly<C>>>) -> Result<MPoly<C>> {
    let n = a.len();
    if n == 0 {
        return Ok(MPoly::one());
    }
    for row in &a {
        if row.len() != n {
            return Err(Error::Structural("determinant of a non-square matrix".into()));
        }
    }
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(MPoly::zero());
            };
            a.swap(k, r);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&pivot * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).ok_or_else(|| {
                    Error::Internal("Bareiss elimination produced a non-exact division".into())
                })?;
            }
            a[i][k] = MPoly::zero();
        }
        prev = pivot;
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Resultant via the subresultant polynomial remainder sequence.
pub fn prs_resultant<C: ExactScalar>(f: &MPoly<C>, g: &MPoly<C>, var: Var) -> Result<MPoly<C>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Structural(
            "resultant of the zero polynomial is not defined here".into(),
        ));
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut neg = false;
    if a.deg(var) < b.deg(var) {
        if a.deg(var) & 1 == 1 && b.deg(var) & 1 == 1 {
            neg = !neg;
        }
        std::mem::swap(&mut a, &mut b);
    }
    // split off contents: Res(ca*A, cb*B) = ca^{deg B} * cb^{deg A} * Res(A, B)
    let (ca, mut a) = a.content_primitive_in(var)?;
    let (cb, mut b) = b.content_primitive_in(var)?;
    let t = &ca.pow(b.deg(var)) * &cb.pow(a.deg(var));
    let mut g_ = MPoly::<C>::one();
    let mut h = MPoly::<C>::one();
    loop {
        let da = a.deg(var);
        let db = b.deg(var);
        if db == 0 {
            break;
        }
        let delta = da - db;
        if da & 1 == 1 && db & 1 == 1 {
            neg = !neg;
        }
        let r = a.prem(&b, var)?;
        a = b;
        if r.is_zero() {
            // positive-degree common factor
            return Ok(MPoly::zero());
        }
        let denom = &g_ * &h.pow(delta);
        b = r
            .div_exact(&denom)
            .ok_or_else(|| Error::Internal("subresultant PRS division failed".into()))?;
        g_ = a.lc_in(var);
        if delta > 0 {
            h = g_
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .ok_or_else(|| Error::Internal("subresultant PRS h-update failed".into()))?;
        }
    }
    let da = a.deg(var);
    let res_pp = if da == 0 {
        MPoly::one()
    } else {
        b.pow(da)
            .div_exact(&h.pow(da - 1))
            .ok_or_else(|| Error::Internal("subresultant PRS finalization failed".into()))?
    };
    let res = &t * &res_pp;
    Ok(if neg { -&res } else { res })
}

// ---- modular backend ----

/// Lightweight sparse polynomial over F_p used inside the modular backend.
#[derive(Clone)]
struct MP64 {
    terms: BTreeMap<Expos, u64>,
}

impl MP64 {
    fn from_bigint_poly(f: &MPoly<BigInt>, p: u64) -> MP64 {
        let mut terms = BTreeMap::new();
        for (ex, c) in f.terms() {
            let r = zp::bigint_mod(c, p);
            if r != 0 {
                terms.insert(*ex, r);
            }
        }
        MP64 { terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn deg(&self, v: Var) -> usize {
        self.terms
            .keys()
            .map(|ex| ex[v.index()] as usize)
            .max()
            .unwrap_or(0)
    }

    /// Coefficient polynomial of `v^deg_v` (zero polynomial if self is 0).
    fn lc_in(&self, v: Var) -> MP64 {
        let d = self.deg(v) as u16;
        let i = v.index();
        let mut terms = BTreeMap::new();
        for (ex, &c) in &self.terms {
            if ex[i] == d {
                let mut e = *ex;
                e[i] = 0;
                terms.insert(e, c);
            }
        }
        MP64 { terms }
    }

    fn substitute(&self, v: Var, s: u64, p: u64) -> MP64 {
        let i = v.index();
        let maxd = self.deg(v);
        let mut pows = Vec::with_capacity(maxd + 1);
        pows.push(1u64);
        for j in 1..=maxd {
            pows.push(zp::mulmod(pows[j - 1], s, p));
        }
        let mut terms: BTreeMap<Expos, u64> = BTreeMap::new();
        for (ex, &c) in &self.terms {
            let mut e = *ex;
            let pw = e[i] as usize;
            e[i] = 0;
            let val = zp::mulmod(c, pows[pw], p);
            let entry = terms.entry(e).or_insert(0);
            *entry = zp::addmod(*entry, val, p);
        }
        terms.retain(|_, c| *c != 0);
        MP64 { terms }
    }

    /// Dense univariate coefficient vector; requires all other exponents 0.
    fn to_univariate(&self, v: Var) -> Vec<u64> {
        let i = v.index();
        let mut out = vec![0u64; self.deg(v) + 1];
        for (ex, &c) in &self.terms {
            debug_assert!(ex
                .iter()
                .enumerate()
                .all(|(j, &e)| j == i || e == 0));
            out[ex[i] as usize] = c;
        }
        zp::trim(out)
    }
}

/// Per-prime image of the resultant in the surviving variables, by nested
/// evaluation and interpolation.
fn modular_image(
    fp: &MP64,
    gp: &MP64,
    var: Var,
    survivors: &[Var],
    bounds: &[usize],
    df: usize,
    dg: usize,
    p: u64,
) -> Result<MP64> {
    if survivors.is_empty() {
        let fu = fp.to_univariate(var);
        let gu = gp.to_univariate(var);
        if zp::deg(&fu) != Some(df) || zp::deg(&gu) != Some(dg) {
            return Err(Error::Internal(
                "modular image lost the main-variable degree".into(),
            ));
        }
        let r = zp::resultant(&fu, &gu, p);
        let mut terms = BTreeMap::new();
        if r != 0 {
            terms.insert([0u16; NVARS], r);
        }
        return Ok(MP64 { terms });
    }
    let u = survivors[0];
    let rest = &survivors[1..];
    let need = bounds[0] + 1;
    let mut points: Vec<u64> = Vec::with_capacity(need);
    let mut values: Vec<MP64> = Vec::with_capacity(need);
    let mut s = 0u64;
    let lcf = fp.lc_in(var);
    let lcg = gp.lc_in(var);
    while points.len() < need {
        if s >= p {
            return Err(Error::Internal("ran out of evaluation points".into()));
        }
        let this = s;
        s += 1;
        // degree-collapsing points are discarded and replaced
        if lcf.substitute(u, this, p).is_zero() || lcg.substitute(u, this, p).is_zero() {
            continue;
        }
        let fs = fp.substitute(u, this, p);
        let gs = gp.substitute(u, this, p);
        let r = modular_image(&fs, &gs, var, rest, &bounds[1..], df, dg, p)?;
        points.push(this);
        values.push(r);
    }
    // per-monomial interpolation in u
    let mut monomials: std::collections::BTreeSet<Expos> = std::collections::BTreeSet::new();
    for v in &values {
        monomials.extend(v.terms.keys().copied());
    }
    let mut terms: BTreeMap<Expos, u64> = BTreeMap::new();
    for mono in monomials {
        let ys: Vec<u64> = values
            .iter()
            .map(|v| v.terms.get(&mono).copied().unwrap_or(0))
            .collect();
        let coeffs = zp::interpolate(&points, &ys, p);
        for (pw, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut e = mono;
                e[u.index()] = pw as u16;
                terms.insert(e, c);
            }
        }
    }
    Ok(MP64 { terms })
}

/// Multi-modular resultant: evaluates the surviving variables at
/// small-integer points modulo word-sized primes, computes univariate
/// resultants in the prime field, interpolates, and reconstructs the integer
/// coefficients by CRT with symmetric-range sign recovery. Stops when two
/// consecutive prime additions leave all coefficients unchanged.
pub fn modular_resultant(req: &ResultantRequest) -> Result<MPoly<BigInt>> {
    let (f, g, var) = (req.f, req.g, req.var);
    if f.is_zero() || g.is_zero() {
        return Err(Error::Structural(
            "resultant of the zero polynomial is not defined here".into(),
        ));
    }
    let df = f.deg(var);
    let dg = g.deg(var);
    if df == 0 {
        return Ok(f.pow(dg));
    }
    if dg == 0 {
        return Ok(g.pow(df));
    }
    let mut survivors: Vec<Var> = Vec::new();
    for v in Var::ALL {
        if v != var && (f.contains_var(v) || g.contains_var(v)) {
            survivors.push(v);
        }
    }
    // Bézout-type bound: deg_u Res <= deg_u(f) deg_var(g) + deg_u(g) deg_var(f)
    let bounds: Vec<usize> = survivors
        .iter()
        .map(|&u| {
            req.degree_bounds
                .as_ref()
                .and_then(|bs| bs.iter().find(|(v, _)| *v == u).map(|(_, b)| *b))
                .unwrap_or(f.deg(u) * dg + g.deg(u) * df)
        })
        .collect();

    let lcf = f.lc_in(var);
    let lcg = g.lc_in(var);
    let threads = rayon::current_num_threads().max(1);
    let chunk = (2 * threads).max(2);

    let mut primes = zp::prime_sequence();
    let mut residues: BTreeMap<Expos, BigInt> = BTreeMap::new();
    let mut modulus = BigInt::from(1);
    let mut prev_snapshot: Option<BTreeMap<Expos, BigInt>> = None;
    let mut stable = 0usize;
    let mut used = 0usize;
    let mut attempts = 0usize;

    loop {
        // gather the next chunk of usable primes
        let mut batch = Vec::with_capacity(chunk);
        while batch.len() < chunk {
            let p = primes
                .next()
                .ok_or_else(|| Error::Internal("prime sequence exhausted".into()))?;
            attempts += 1;
            if attempts > 8 * req.prime_budget {
                return Err(Error::Resource(format!(
                    "modular resultant: no usable primes after {attempts} attempts"
                )));
            }
            // a prime dividing a leading coefficient identically is discarded
            let lcf_dead = lcf.terms().all(|(_, c)| zp::bigint_mod(c, p) == 0);
            let lcg_dead = lcg.terms().all(|(_, c)| zp::bigint_mod(c, p) == 0);
            if lcf_dead || lcg_dead {
                continue;
            }
            batch.push(p);
        }
        // independent per-prime images, deterministic merge order
        let images: Vec<(u64, Result<MP64>)> = batch
            .par_iter()
            .map(|&p| {
                let fp = MP64::from_bigint_poly(f, p);
                let gp = MP64::from_bigint_poly(g, p);
                (p, modular_image(&fp, &gp, var, &survivors, &bounds, df, dg, p))
            })
            .collect();
        for (p, image) in images {
            let image = image?;
            used += 1;
            if used > req.prime_budget {
                return Err(Error::Resource(format!(
                    "modular resultant did not stabilize within {} primes",
                    req.prime_budget
                )));
            }
            // fold into the CRT accumulator
            let mut keys: std::collections::BTreeSet<Expos> =
                residues.keys().copied().collect();
            keys.extend(image.terms.keys().copied());
            for key in keys {
                let acc = residues.remove(&key).unwrap_or_else(BigInt::zero);
                let r = image.terms.get(&key).copied().unwrap_or(0);
                let next = zp::crt_step(&acc, &modulus, r, p);
                if !next.is_zero() {
                    residues.insert(key, next);
                } else {
                    residues.remove(&key);
                }
            }
            modulus *= BigInt::from(p);
            let snapshot: BTreeMap<Expos, BigInt> = residues
                .iter()
                .map(|(k, v)| (*k, zp::symmetric(v, &modulus)))
                .collect();
            if prev_snapshot.as_ref() == Some(&snapshot) {
                stable += 1;
            } else {
                stable = 0;
            }
            prev_snapshot = Some(snapshot);
            if stable >= 2 {
                let result = MPoly::from_terms(
                    prev_snapshot
                        .take()
                        .unwrap()
                        .into_iter()
                        .filter(|(_, c)| !c.is_zero()),
                );
                // post hoc: declared bounds must dominate the result
                for (u, b) in survivors.iter().zip(&bounds) {
                    if !result.is_zero() && result.deg(*u) > *b {
                        return Err(Error::Internal(format!(
                            "interpolated degree in {u} exceeds its bound {b}"
                        )));
                    }
                }
                return Ok(result);
            }
        }
    }
}
