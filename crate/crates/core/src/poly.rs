//! Exact multivariate polynomial arithmetic.
//!
//! Polynomials are stored sparsely as an exponent-vector map over the global
//! variable pool (`k < x < w < v < y < t`), with coefficients in any
//! [`ExactScalar`] domain. Structural algorithms (pseudo-division, content,
//! gcd, squarefree part) operate on a dense coefficient view in a designated
//! main variable, which is the shape elimination workloads want.
//!
//! Normalization conventions:
//! - no zero coefficients are ever stored;
//! - contents are extracted so that primitive parts carry a positive
//!   lexicographic leading coefficient (`f = content * primitive` exactly).

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::var::{Expos, Var, NVARS};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse exact polynomial over the global variable pool.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly<C> {
    terms: BTreeMap<Expos, C>,
}

impl<C: ExactScalar> MPoly<C> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; NVARS], c);
        }
        MPoly { terms }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(C::from_i64(v))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial_in(v, 1, C::one())
    }

    /// `c * v^e`
    pub fn monomial_in(v: Var, e: u16, c: C) -> Self {
        let mut ex = [0u16; NVARS];
        ex[v.index()] = e;
        Self::monomial(ex, c)
    }

    pub fn monomial(ex: Expos, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ex, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Expos, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (ex, c) in it {
            p.add_term(ex, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&[0; NVARS]))
    }

    /// The constant value, if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<C> {
        if self.terms.is_empty() {
            return Some(C::zero());
        }
        if self.is_constant() {
            return self.terms.get(&[0; NVARS]).cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expos, &C)> {
        self.terms.iter()
    }

    /// Variables actually occurring with positive exponent.
    pub fn vars(&self) -> Vec<Var> {
        let mut present = [false; NVARS];
        for ex in self.terms.keys() {
            for (i, &e) in ex.iter().enumerate() {
                if e > 0 {
                    present[i] = true;
                }
            }
        }
        Var::ALL
            .iter()
            .copied()
            .filter(|v| present[v.index()])
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|ex| ex[v.index()] > 0)
    }

    /// Degree in `v`; 0 for the zero polynomial (check [`is_zero`] first
    /// where the distinction matters).
    ///
    /// [`is_zero`]: MPoly::is_zero
    pub fn deg(&self, v: Var) -> usize {
        self.terms
            .keys()
            .map(|ex| ex[v.index()] as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|ex| ex.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Lexicographic leading term (global variable order).
    pub fn leading(&self) -> Option<(&Expos, &C)> {
        self.terms.iter().next_back()
    }

    /// Sign of the lexicographic leading coefficient; `false` for zero.
    pub fn leading_is_negative(&self) -> bool {
        self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }

    pub fn coeff(&self, ex: &Expos) -> C {
        self.terms.get(ex).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, ex: Expos, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(ex) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn map_coeffs<D: ExactScalar>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(ex, c)| (*ex, f(c))))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(ex, v)| (*ex, v.clone() * c.clone())))
    }

    /// Exact scalar division of every coefficient.
    pub fn div_scalar_exact(&self, c: &C) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (ex, v) in &self.terms {
            terms.insert(*ex, C::exact_div(v, c)?);
        }
        Some(MPoly { terms })
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        Self::from_terms(self.terms.iter().filter(|(ex, _)| ex[i] > 0).map(|(ex, c)| {
            let mut e = *ex;
            e[i] -= 1;
            (e, c.clone() * C::from_i64(ex[i] as i64))
        }))
    }

    /// Dense coefficient view in `v`: index = power of `v`, entries free of
    /// `v`. Empty vector for the zero polynomial.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly<C>> {
        if self.is_zero() {
            return Vec::new();
        }
        let i = v.index();
        let deg = self.deg(v);
        let mut out = vec![Self::zero(); deg + 1];
        for (ex, c) in &self.terms {
            let mut e = *ex;
            let p = e[i] as usize;
            e[i] = 0;
            out[p].add_term(e, c.clone());
        }
        out
    }

    /// Rebuild from a dense coefficient view in `v`. Coefficients must not
    /// involve `v`.
    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly<C>]) -> Self {
        let i = v.index();
        let mut p = Self::zero();
        for (pw, c) in coeffs.iter().enumerate() {
            debug_assert!(!c.contains_var(v));
            for (ex, val) in &c.terms {
                let mut e = *ex;
                e[i] = pw as u16;
                p.add_term(e, val.clone());
            }
        }
        p
    }

    /// Leading coefficient viewed in `v` (free of `v`). Zero polynomial maps
    /// to zero.
    pub fn lc_in(&self, v: Var) -> MPoly<C> {
        if self.is_zero() {
            return Self::zero();
        }
        let i = v.index();
        let deg = self.deg(v) as u16;
        Self::from_terms(self.terms.iter().filter(|(ex, _)| ex[i] == deg).map(|(ex, c)| {
            let mut e = *ex;
            e[i] = 0;
            (e, c.clone())
        }))
    }

    /// Substitute a polynomial for `v` (Horner in `v`).
    pub fn substitute(&self, v: Var, by: &MPoly<C>) -> MPoly<C> {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * by) + c;
        }
        acc
    }

    /// Exact partial evaluation at scalar points; variables not assigned
    /// remain symbolic.
    pub fn eval_partial(&self, assignment: &[(Var, C)]) -> MPoly<C> {
        let mut p = self.clone();
        for (v, c) in assignment {
            p = p.substitute(*v, &MPoly::constant(c.clone()));
        }
        p
    }

    /// Full evaluation into another ring (e.g. extended-precision floats)
    /// through a coefficient conversion. The assignment must cover every
    /// variable of the polynomial. Summation order is the deterministic
    /// term order.
    pub fn eval_convert<S>(
        &self,
        point: &[(Var, S)],
        conv: impl Fn(&C) -> S,
        add: impl Fn(&S, &S) -> S,
        mul: impl Fn(&S, &S) -> S,
        one: S,
    ) -> Result<S>
    where
        S: Clone,
    {
        let mut assigned = [None; NVARS];
        for (v, s) in point {
            assigned[v.index()] = Some(s);
        }
        for v in self.vars() {
            if assigned[v.index()].is_none() {
                return Err(Error::Precondition(format!(
                    "evaluation point does not cover variable `{v}`"
                )));
            }
        }
        // power tables
        let mut pows: [Vec<S>; NVARS] = Default::default();
        for v in Var::ALL {
            let i = v.index();
            if let Some(s) = assigned[i] {
                let d = self.deg(v);
                let mut tab = Vec::with_capacity(d + 1);
                tab.push(one.clone());
                for j in 1..=d {
                    let prev = tab[j - 1].clone();
                    tab.push(mul(&prev, s));
                }
                pows[i] = tab;
            }
        }
        let mut acc: Option<S> = None;
        for (ex, c) in &self.terms {
            let mut term = conv(c);
            for (i, &e) in ex.iter().enumerate() {
                if e > 0 {
                    term = mul(&term, &pows[i][e as usize]);
                }
            }
            acc = Some(match acc {
                None => term,
                Some(a) => add(&a, &term),
            });
        }
        Ok(acc.unwrap_or_else(|| conv(&C::zero())))
    }

    /// GCD of all scalar coefficients, carrying the sign of the
    /// lexicographic leading coefficient (so `self / scalar_content()` has a
    /// positive leading coefficient).
    pub fn scalar_content(&self) -> C {
        let mut g = C::zero();
        for c in self.terms.values() {
            g = C::gcd(&g, c);
        }
        if self.leading_is_negative() {
            g = -g;
        }
        g
    }

    /// `f = content * primitive` with the content taken over the scalar
    /// coefficients (all variables kept in the primitive part).
    pub fn scalar_content_primitive(&self) -> Result<(C, MPoly<C>)> {
        if self.is_zero() {
            return Err(Error::Structural(
                "content of the zero polynomial is undefined".into(),
            ));
        }
        let c = self.scalar_content();
        let pp = self
            .div_scalar_exact(&c)
            .ok_or_else(|| Error::Internal("scalar content does not divide".into()))?;
        Ok((c, pp))
    }

    /// Content and primitive part viewed in `v`: the content is the GCD of
    /// the coefficients of `f` as a dense polynomial in `v` (a polynomial in
    /// the remaining variables), signed so that the primitive part has a
    /// positive lexicographic leading coefficient.
    pub fn content_primitive_in(&self, v: Var) -> Result<(MPoly<C>, MPoly<C>)> {
        if self.is_zero() {
            return Err(Error::Structural(
                "content of the zero polynomial is undefined".into(),
            ));
        }
        let coeffs = self.coeffs_in(v);
        let mut g = MPoly::zero();
        for c in &coeffs {
            if !c.is_zero() {
                g = gcd_mpoly(&g, c)?;
            }
        }
        if self.leading_is_negative() {
            g = -&g;
        }
        let pp = self
            .div_exact(&g)
            .ok_or_else(|| Error::Internal("content does not divide".into()))?;
        Ok((g, pp))
    }

    pub fn primitive_in(&self, v: Var) -> Result<MPoly<C>> {
        Ok(self.content_primitive_in(v)?.1)
    }

    /// Primitive part over the scalar content with positive leading
    /// coefficient; the standard normal form for eliminants.
    pub fn normalized_primitive(&self) -> Result<MPoly<C>> {
        Ok(self.scalar_content_primitive()?.1)
    }

    /// `self -= t * g` in place (no full-map clone per call).
    fn sub_assign_mul(&mut self, t_ex: &Expos, t_c: &C, g: &MPoly<C>) {
        for (ex, c) in &g.terms {
            let mut e = [0u16; NVARS];
            for i in 0..NVARS {
                e[i] = ex[i]
                    .checked_add(t_ex[i])
                    .expect("exponent overflow in multiplication");
            }
            self.add_term(e, -(t_c.clone() * c.clone()));
        }
    }

    /// Exact multivariate division, `None` when `g` does not divide.
    pub fn div_exact(&self, g: &MPoly<C>) -> Option<MPoly<C>> {
        if g.is_zero() {
            return None;
        }
        let (g_ex, g_c) = g.leading().unwrap();
        let g_ex = *g_ex;
        let g_c = g_c.clone();
        let mut rem = self.clone();
        let mut q = MPoly::zero();
        while !rem.is_zero() {
            let (r_ex, r_c) = rem.leading().unwrap();
            let mut t_ex = [0u16; NVARS];
            for i in 0..NVARS {
                t_ex[i] = r_ex[i].checked_sub(g_ex[i])?;
            }
            let t_c = C::exact_div(r_c, &g_c)?;
            rem.sub_assign_mul(&t_ex, &t_c, g);
            q.add_term(t_ex, t_c);
        }
        Some(q)
    }

    /// Fraction-free pseudo-division in `v`:
    /// `lc(g)^l * f = q*g + r` with `deg_v(r) < deg_v(g)`, where
    /// `l = deg_v(f) - deg_v(g) + 1` (and `l = 1` when `deg_v(f) < deg_v(g)`,
    /// the defining convention for that corner).
    pub fn pseudo_divrem(&self, g: &MPoly<C>, v: Var) -> Result<(MPoly<C>, MPoly<C>)> {
        if g.is_zero() {
            return Err(Error::DivisionByZero(
                "pseudo-division by the zero polynomial".into(),
            ));
        }
        let n = g.deg(v);
        let m = self.deg(v);
        let d = g.lc_in(v);
        let mut e: usize = if m >= n && !self.is_zero() { m - n + 1 } else { 1 };
        let mut q = MPoly::zero();
        let mut r = self.clone();
        while !r.is_zero() && r.deg(v) >= n {
            let s = MPoly::monomial_in(v, (r.deg(v) - n) as u16, C::one());
            let s = &s * &r.lc_in(v);
            let mut qd = &q * &d;
            qd += &s;
            q = qd;
            let mut rd = &r * &d;
            rd -= &(&s * g);
            r = rd;
            e -= 1;
        }
        let scale = d.pow(e);
        Ok((&q * &scale, &r * &scale))
    }

    /// Pseudo-remainder only.
    pub fn prem(&self, g: &MPoly<C>, v: Var) -> Result<MPoly<C>> {
        Ok(self.pseudo_divrem(g, v)?.1)
    }

    /// Squarefree part in `v`: `primitive(f / gcd(f, df/dv))`, normalized
    /// primitive with positive leading coefficient.
    pub fn squarefree_part_in(&self, v: Var) -> Result<MPoly<C>> {
        if self.is_zero() {
            return Err(Error::Structural(
                "squarefree part of the zero polynomial is undefined".into(),
            ));
        }
        if self.deg(v) == 0 {
            return Ok(MPoly::one());
        }
        let pp = self.primitive_in(v)?;
        let (_, pp) = pp.scalar_content_primitive()?;
        let der = pp.derivative(v);
        if pp.already_coprime_with(&der, v) {
            return Ok(pp);
        }
        let g = gcd_mpoly(&pp, &der)?;
        let sf = pp
            .div_exact(&g)
            .ok_or_else(|| Error::Internal("gcd(f, f') does not divide f".into()))?;
        let sf = sf.primitive_in(v)?;
        let (_, sf) = sf.scalar_content_primitive()?;
        Ok(sf)
    }

    fn already_coprime_with(&self, other: &MPoly<C>, v: Var) -> bool {
        C::coprime_probe(self, other, v)
    }

    /// Serialize to the JSON polynomial format:
    /// `{"vars": [...], "terms": [[[e, ...], "coeff"], ...]}`, exponent-sorted.
    pub fn to_json(&self) -> serde_json::Value {
        let vars = self.vars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (ex, c) in &self.terms {
            let tuple: Vec<serde_json::Value> = vars
                .iter()
                .map(|v| serde_json::Value::from(ex[v.index()]))
                .collect();
            terms.push(serde_json::Value::Array(vec![
                serde_json::Value::Array(tuple),
                serde_json::Value::String(c.to_decimal_string()),
            ]));
        }
        serde_json::json!({
            "vars": vars.iter().map(|v| v.symbol()).collect::<Vec<_>>(),
            "terms": terms,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Structural("polynomial JSON must be an object".into()))?;
        let vars: Vec<Var> = obj
            .get("vars")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Structural("polynomial JSON lacks `vars`".into()))?
            .iter()
            .map(|s| {
                s.as_str()
                    .ok_or_else(|| Error::Structural("variable must be a string".into()))
                    .and_then(Var::parse)
            })
            .collect::<Result<_>>()?;
        let terms = obj
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Structural("polynomial JSON lacks `terms`".into()))?;
        let mut p = Self::zero();
        for t in terms {
            let pair = t
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Structural("term must be [exponents, coeff]".into()))?;
            let exps = pair[0]
                .as_array()
                .filter(|a| a.len() == vars.len())
                .ok_or_else(|| Error::Structural("exponent tuple arity mismatch".into()))?;
            let mut ex = [0u16; NVARS];
            for (v, e) in vars.iter().zip(exps) {
                let e = e
                    .as_u64()
                    .filter(|&e| e <= u16::MAX as u64)
                    .ok_or_else(|| Error::Structural("exponent out of range".into()))?;
                ex[v.index()] = e as u16;
            }
            let c = pair[1]
                .as_str()
                .and_then(C::from_decimal_str)
                .ok_or_else(|| Error::Structural("bad coefficient string".into()))?;
            p.add_term(ex, c);
        }
        Ok(p)
    }
}

/// Full multivariate GCD, normalized primitive with positive leading
/// coefficient. Primitive PRS over the fraction field of the remaining
/// variables, with recursive content management; base case is the scalar GCD.
pub fn gcd_mpoly<C: ExactScalar>(f: &MPoly<C>, g: &MPoly<C>) -> Result<MPoly<C>> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::Structural("gcd(0, 0) is undefined".into()));
    }
    if f.is_zero() {
        let mut r = g.clone();
        if r.leading_is_negative() {
            r = -&r;
        }
        return Ok(r);
    }
    if g.is_zero() {
        let mut r = f.clone();
        if r.leading_is_negative() {
            r = -&r;
        }
        return Ok(r);
    }
    // constants: fall back to the scalar gcd of all coefficients
    if f.is_constant() || g.is_constant() {
        let a = f.scalar_content();
        let b = g.scalar_content();
        let g = C::gcd(&a, &b);
        return Ok(MPoly::constant(g));
    }
    // main variable: the largest variable present in either operand
    let v = *f
        .vars()
        .iter()
        .chain(g.vars().iter())
        .max()
        .expect("nonconstant operands have variables");
    if !f.contains_var(v) {
        // gcd(f, g) = gcd(f, content_v(g))
        let (cg, _) = g.content_primitive_in(v)?;
        return gcd_mpoly(f, &cg);
    }
    if !g.contains_var(v) {
        let (cf, _) = f.content_primitive_in(v)?;
        return gcd_mpoly(&cf, g);
    }
    let (cf, mut a) = f.content_primitive_in(v)?;
    let (cg, mut b) = g.content_primitive_in(v)?;
    let c = gcd_mpoly(&cf, &cg)?;
    // dedicated path for primitive univariate pairs
    if a.vars() == [v] && b.vars() == [v] {
        if let Some(g0) = C::univariate_gcd(&a, &b, v) {
            let mut out = &g0 * &c;
            if out.leading_is_negative() {
                out = -&out;
            }
            return Ok(out);
        }
    }
    if C::coprime_probe(&a, &b, v) {
        let mut out = c;
        if out.leading_is_negative() {
            out = -&out;
        }
        return Ok(out);
    }
    if a.deg(v) < b.deg(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = a.prem(&b, v)?;
        if r.is_zero() {
            break;
        }
        let r = r.primitive_in(v)?;
        a = std::mem::replace(&mut b, r);
    }
    let mut out = &b.primitive_in(v)? * &c;
    if out.leading_is_negative() {
        out = -&out;
    }
    Ok(out)
}

impl<C: ExactScalar> Add for &MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: Self) -> MPoly<C> {
        let mut out = self.clone();
        for (ex, c) in &rhs.terms {
            out.add_term(*ex, c.clone());
        }
        out
    }
}

impl<C: ExactScalar> Sub for &MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: Self) -> MPoly<C> {
        let mut out = self.clone();
        for (ex, c) in &rhs.terms {
            out.add_term(*ex, -c.clone());
        }
        out
    }
}

impl<C: ExactScalar> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(ex, c)| (*ex, -c.clone()))
                .collect(),
        }
    }
}

impl<C: ExactScalar> Mul for &MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: Self) -> MPoly<C> {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut ex = [0u16; NVARS];
                for i in 0..NVARS {
                    ex[i] = ea[i]
                        .checked_add(eb[i])
                        .expect("exponent overflow in multiplication");
                }
                out.add_term(ex, ca.clone() * cb.clone());
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl<C: ExactScalar> $trait for MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: Self) -> MPoly<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: ExactScalar> $trait<&MPoly<C>> for MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: &MPoly<C>) -> MPoly<C> {
                (&self).$method(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: ExactScalar> std::ops::AddAssign<&MPoly<C>> for MPoly<C> {
    fn add_assign(&mut self, rhs: &MPoly<C>) {
        for (ex, c) in &rhs.terms {
            self.add_term(*ex, c.clone());
        }
    }
}

impl<C: ExactScalar> std::ops::SubAssign<&MPoly<C>> for MPoly<C> {
    fn sub_assign(&mut self, rhs: &MPoly<C>) {
        for (ex, c) in &rhs.terms {
            self.add_term(*ex, -c.clone());
        }
    }
}

impl<C: ExactScalar> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        -(&self)
    }
}

fn fmt_poly<C: ExactScalar>(p: &MPoly<C>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let mut first = true;
    for (ex, c) in p.terms.iter().rev() {
        let neg = c.is_negative();
        let mag = if neg { -(c.clone()) } else { c.clone() };
        if first {
            if neg {
                f.write_str("-")?;
            }
            first = false;
        } else if neg {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        let is_const_term = ex.iter().all(|&e| e == 0);
        let coeff_is_one = mag.is_one();
        if !coeff_is_one || is_const_term {
            write!(f, "{}", mag)?;
        }
        let mut printed = !coeff_is_one || is_const_term;
        for v in Var::ALL {
            let e = ex[v.index()];
            if e > 0 {
                if printed {
                    f.write_str("*")?;
                }
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
                printed = true;
            }
        }
    }
    Ok(())
}

impl<C: ExactScalar> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

impl<C: ExactScalar> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type PZ = MPoly<BigInt>;

    fn x() -> PZ {
        PZ::var(Var::X)
    }
    fn k() -> PZ {
        PZ::var(Var::K)
    }
    fn y() -> PZ {
        PZ::var(Var::Y)
    }
    fn c(v: i64) -> PZ {
        PZ::from_i64(v)
    }

    #[test]
    fn difference_of_squares() {
        let f = (x() + c(1)) * (x() - c(1));
        assert_eq!(f, x() * x() - c(1));
        let g = (k() + y()) * (k() - y());
        assert_eq!(g, k() * k() - y() * y());
    }

    #[test]
    fn additive_identity() {
        let f = x() * x() + k() * c(3);
        assert_eq!(&f + &PZ::zero(), f);
    }

    #[test]
    fn pseudo_division_spec_examples() {
        // 4x^2 = (2x-1)(2x+1) + 1
        let f = x() * x();
        let g = x() * c(2) + c(1);
        let (q, r) = f.pseudo_divrem(&g, Var::X).unwrap();
        assert_eq!(q, x() * c(2) - c(1));
        assert_eq!(r, c(1));
        let lhs = f.scale(&BigInt::from(4));
        assert_eq!(lhs, q * g + r);

        // f = x, g = x: lc-scaled quotient, zero remainder
        let (q, r) = x().pseudo_divrem(&x(), Var::X).unwrap();
        assert_eq!(q, c(1));
        assert!(r.is_zero());

        // deg f < deg g: quotient 0, remainder lc(g)^1 * f
        let f = x() + c(1);
        let g = x() * x() * c(3) + c(2);
        let (q, r) = f.pseudo_divrem(&g, Var::X).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, f.scale(&BigInt::from(3)));
    }

    #[test]
    fn pseudo_division_by_zero() {
        assert!(matches!(
            x().pseudo_divrem(&PZ::zero(), Var::X),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn content_primitive_spec_examples() {
        let f = x() * x() * c(6) + x() * c(4);
        let (ct, pp) = f.content_primitive_in(Var::X).unwrap();
        assert_eq!(ct, c(2));
        assert_eq!(pp, x() * x() * c(3) + x() * c(2));

        let kk1 = k() * k() + c(1);
        let f = &(&kk1 * &y()) + &kk1;
        let (ct, pp) = f.content_primitive_in(Var::Y).unwrap();
        assert_eq!(ct, kk1);
        assert_eq!(pp, y() + c(1));

        // primitive input has content 1
        let (ct, _) = pp.content_primitive_in(Var::Y).unwrap();
        assert_eq!(ct, c(1));
    }

    #[test]
    fn content_carries_sign() {
        let f = x() * x() * c(-6) + x() * c(-4);
        let (ct, pp) = f.content_primitive_in(Var::X).unwrap();
        assert_eq!(ct, c(-2));
        assert!(!pp.leading_is_negative());
        assert_eq!(ct * pp, f);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!((y() * y() * y()).derivative(Var::Y), y() * y() * c(3));
        assert_eq!((k() * k() * y()).derivative(Var::Y), k() * k());
        assert!(c(7).derivative(Var::Y).is_zero());
    }

    #[test]
    fn gcd_examples() {
        let g = gcd_mpoly(&(x() * x() - c(1)), &(x() - c(1))).unwrap();
        assert_eq!(g, x() - c(1));

        let g = gcd_mpoly(&(x() * x() + c(1)), &(x() + c(2))).unwrap();
        assert_eq!(g, c(1));

        let a = (y() - c(2)) * (y() - c(2)) * (y() - c(3));
        let b = (y() - c(2)) * (y() - c(5));
        assert_eq!(gcd_mpoly(&a, &b).unwrap(), y() - c(2));

        assert!(gcd_mpoly(&PZ::zero(), &PZ::zero()).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let f = (x() - c(1)) * (x() - c(1)) * (x() + c(2));
        let sf = f.squarefree_part_in(Var::X).unwrap();
        assert_eq!(sf, (x() - c(1)) * (x() + c(2)));
        // idempotence
        assert_eq!(sf.squarefree_part_in(Var::X).unwrap(), sf);
        // x^4 -> x
        let f = x() * x() * x() * x();
        assert_eq!(f.squarefree_part_in(Var::X).unwrap(), x());
    }

    #[test]
    fn eval_examples() {
        let f = k() * k() + c(1);
        let v = f.eval_partial(&[(Var::K, BigInt::from(2))]);
        assert_eq!(v.as_constant(), Some(BigInt::from(5)));

        // partial evaluation of k^2*y at k=3 -> 9y
        let f = k() * k() * y();
        let v = f.eval_partial(&[(Var::K, BigInt::from(3))]);
        assert_eq!(v, y() * c(9));
    }

    #[test]
    fn json_round_trip() {
        let f = k() * k() * y() * c(-3) + x() * c(7) + c(11);
        let j = f.to_json();
        let g = PZ::from_json(&j).unwrap();
        assert_eq!(f, g);
        // zero polynomial
        let z = PZ::zero();
        assert_eq!(PZ::from_json(&z.to_json()).unwrap(), z);
    }

    #[test]
    fn substitute_shift() {
        // k^2 at k = 1+t -> 1 + 2t + t^2
        let f = k() * k();
        let shifted = f.substitute(Var::K, &(PZ::var(Var::T) + c(1)));
        let t = PZ::var(Var::T);
        assert_eq!(shifted, t.clone() * t.clone() + t * c(2) + c(1));
    }

    // ---- property tests ----

    fn arb_poly(vars: &'static [Var], max_deg: u16, max_terms: usize) -> BoxedStrategy<PZ> {
        let term = (
            proptest::collection::vec(0..=max_deg, vars.len()),
            -100i64..=100,
        );
        proptest::collection::vec(term, 0..=max_terms)
            .prop_map(move |terms| {
                PZ::from_terms(terms.into_iter().map(|(exps, c)| {
                    let mut ex = [0u16; NVARS];
                    for (v, e) in vars.iter().zip(exps) {
                        ex[v.index()] = e;
                    }
                    (ex, BigInt::from(c))
                }))
            })
            .boxed()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_poly(&[Var::K, Var::X], 4, 5),
                       b in arb_poly(&[Var::K, Var::X], 4, 5),
                       cc in arb_poly(&[Var::K, Var::X], 4, 5)) {
            prop_assert_eq!((&(&a + &b) + &cc), (&a + &(&b + &cc)));
            prop_assert_eq!((&(&a * &b) * &cc), (&a * &(&b * &cc)));
            prop_assert_eq!(&(&a * &(&b + &cc)), &(&(&a * &b) + &(&a * &cc)));
            prop_assert_eq!(&(&a * &b), &(&b * &a));
        }

        #[test]
        fn mul_degree_additive(a in arb_poly(&[Var::X], 8, 6),
                               b in arb_poly(&[Var::X], 8, 6)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.deg(Var::X), a.deg(Var::X) + b.deg(Var::X));
        }

        #[test]
        fn pseudo_division_identity(f in arb_poly(&[Var::X], 8, 8),
                                    g in arb_poly(&[Var::X], 8, 8)) {
            prop_assume!(!g.is_zero());
            let m = f.deg(Var::X);
            let n = g.deg(Var::X);
            let (q, r) = f.pseudo_divrem(&g, Var::X).unwrap();
            let l = if m >= n && !f.is_zero() { m - n + 1 } else { 1 };
            let lhs = &f * &g.lc_in(Var::X).pow(l);
            prop_assert_eq!(lhs, &(&q * &g) + &r);
            if !r.is_zero() {
                prop_assert!(r.deg(Var::X) < n || n == 0 && r.is_zero());
            }
        }

        #[test]
        fn content_primitive_exact(f in arb_poly(&[Var::K, Var::Y], 5, 6)) {
            prop_assume!(!f.is_zero());
            let (ct, pp) = f.content_primitive_in(Var::Y).unwrap();
            prop_assert_eq!(&(&ct * &pp), &f);
            // content of the primitive part is a unit
            let (c2, _) = pp.content_primitive_in(Var::Y).unwrap();
            prop_assert_eq!(c2.as_constant(), Some(BigInt::from(1)));
        }

        #[test]
        fn squarefree_gcd_property(roots in proptest::collection::vec(-8i64..=8, 1..5)) {
            // product of (x - r) with repetitions
            let mut f = PZ::one();
            for r in &roots {
                f = f * (x() - c(*r));
            }
            let sf = f.squarefree_part_in(Var::X).unwrap();
            // gcd(sf, sf') is constant
            let g = gcd_mpoly(&sf, &sf.derivative(Var::X)).unwrap();
            prop_assert!(g.is_constant());
            // sf divides f
            prop_assert!(f.div_exact(&sf).is_some());
            // sf vanishes exactly at the construction roots
            let mut distinct: Vec<i64> = roots.clone();
            distinct.sort();
            distinct.dedup();
            prop_assert_eq!(sf.deg(Var::X), distinct.len());
            for r in distinct {
                let v = sf.eval_partial(&[(Var::X, BigInt::from(r))]);
                prop_assert!(v.is_zero());
            }
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(&[Var::X], 5, 4),
                            b in arb_poly(&[Var::X], 5, 4),
                            m in arb_poly(&[Var::X], 3, 3)) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !m.is_zero());
            let am = &a * &m;
            let bm = &b * &m;
            let g = gcd_mpoly(&am, &bm).unwrap();
            prop_assert!(am.div_exact(&g).is_some());
            prop_assert!(bm.div_exact(&g).is_some());
            // m divides the gcd
            prop_assert!(g.div_exact(&m.normalized_primitive().unwrap()).is_some()
                || g.div_exact(&m).is_some());
        }
    }
}
