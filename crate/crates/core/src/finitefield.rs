//! Finite fields F_{p^n} and their quadratic extensions.
//!
//! Fields are pinned to a deterministic representation: the modulus is the
//! lexicographically least monic irreducible polynomial of degree n over F_p,
//! and the primitive element θ is the coefficient-lex least element of full
//! multiplicative order. Downstream matrix representations (MUBs, symplectic
//! unitaries) depend on this choice, so regression values stay reproducible.
//!
//! p = 2 is admitted only so the F₄ tables can be checked; every quantum
//! structure built on top requires odd characteristic and rejects p = 2.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactmath::is_prime;

/// The field F_{p^n}, shared behind an `Arc`.
#[derive(Debug)]
pub struct FField {
    p: u32,
    n: u32,
    order: u64,
    /// Monic irreducible modulus, little-endian, length n+1.
    modulus: Vec<u32>,
    /// Coefficients of the least primitive element.
    theta: Vec<u32>,
}

impl PartialEq for FField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}
impl Eq for FField {}

/// Element of F_{p^n} in the polynomial representation.
#[derive(Clone)]
pub struct FFElem {
    field: Arc<FField>,
    /// Length n, entries reduced mod p; coeffs[i] multiplies x^i.
    coeffs: Vec<u32>,
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for FFElem {}

impl std::hash::Hash for FFElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.n.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ff{:?}", self.coeffs)
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.n == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

impl FField {
    /// Builds F_{p^n} with the deterministic modulus and primitive element.
    pub fn new(p: u32, n: u32) -> Result<Arc<FField>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        assert!(n >= 1, "extension degree must be at least 1");
        let order = (p as u64).pow(n);
        let modulus = least_irreducible(p, n);
        let mut field = Arc::new(FField { p, n, order, modulus, theta: vec![] });
        // Primitive element: least in coeff-lex order with full order. The
        // search element borrows the Arc, so move its coefficients out before
        // writing them back through get_mut.
        let theta_coeffs = {
            let f = &field;
            let e = (0..f.order)
                .map(|i| f.elem_from_index(i))
                .find(|e| f.is_primitive(e))
                .expect("every finite field has a primitive element");
            e.coeffs
        };
        Arc::get_mut(&mut field).unwrap().theta = theta_coeffs;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field order d = p^n.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn theta(self: &Arc<Self>) -> FFElem {
        FFElem { field: self.clone(), coeffs: self.theta.clone() }
    }

    pub fn zero(self: &Arc<Self>) -> FFElem {
        FFElem { field: self.clone(), coeffs: vec![0; self.n as usize] }
    }

    pub fn one(self: &Arc<Self>) -> FFElem {
        self.from_int(1)
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_int(self: &Arc<Self>, k: i64) -> FFElem {
        let mut coeffs = vec![0; self.n as usize];
        coeffs[0] = k.rem_euclid(self.p as i64) as u32;
        FFElem { field: self.clone(), coeffs }
    }

    pub fn elem_from_coeffs(self: &Arc<Self>, coeffs: &[u32]) -> FFElem {
        assert_eq!(coeffs.len(), self.n as usize);
        let coeffs = coeffs.iter().map(|c| c % self.p).collect();
        FFElem { field: self.clone(), coeffs }
    }

    /// Element at position `idx` in coefficient-lexicographic order, taking
    /// the degree-(n-1) coefficient as most significant, i.e. idx = Σ cᵢ pⁱ.
    /// Prime-subfield elements occupy the first p positions, matching the
    /// published F₄ table layout.
    pub fn elem_from_index(self: &Arc<Self>, idx: u64) -> FFElem {
        assert!(idx < self.order);
        let n = self.n as usize;
        let mut coeffs = vec![0u32; n];
        let mut rem = idx;
        for c in coeffs.iter_mut().take(n) {
            *c = (rem % self.p as u64) as u32;
            rem /= self.p as u64;
        }
        FFElem { field: self.clone(), coeffs }
    }

    /// Position of `x` in the enumeration: Σ cᵢ pⁱ.
    pub fn index_of(&self, x: &FFElem) -> u64 {
        let mut idx = 0u64;
        for c in x.coeffs.iter().rev() {
            idx = idx * self.p as u64 + *c as u64;
        }
        idx
    }

    /// All elements in coefficient-lexicographic order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.order).map(move |i| self.elem_from_index(i))
    }

    fn is_primitive(self: &Arc<Self>, e: &FFElem) -> bool {
        if e.is_zero() {
            return false;
        }
        let m = self.order - 1;
        for q in prime_factors(m) {
            if e.pow(m / q).is_one() {
                return false;
            }
        }
        true
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut f = 2u64;
    while f * f <= m {
        if m.is_multiple_of(f) {
            out.push(f);
            while m.is_multiple_of(f) {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Lexicographically least monic irreducible polynomial of degree n over F_p,
/// ordering the coefficient tuple (a₀, ..., a_{n-1}) with a₀ most significant.
fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1]; // x itself; arithmetic is plain mod p
    }
    let total = (p as u64).pow(n);
    for t in 0..total {
        let mut tail = vec![0u32; n as usize];
        let mut rem = t;
        for i in (0..n as usize).rev() {
            tail[i] = (rem % p as u64) as u32;
            rem /= p as u64;
        }
        // tail is (a0, ..., a_{n-1}) with a0 varying slowest
        let mut poly = tail;
        poly.push(1);
        if poly_is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Rabin irreducibility: f of degree n is irreducible over F_p iff
/// x^{p^n} = x mod f and gcd(x^{p^{n/q}} - x, f) = 1 for every prime q | n.
fn poly_is_irreducible(f: &[u32], p: u32) -> bool {
    let n = (f.len() - 1) as u32;
    let x = vec![0, 1];
    let mut xp = x.clone();
    let mut powers = vec![]; // x^{p^k} mod f for k = 1..n
    for _ in 0..n {
        xp = poly_modexp(&xp, p as u64, f, p);
        powers.push(xp.clone());
    }
    if poly_mod_sub(&powers[n as usize - 1], &x, p).iter().any(|c| *c != 0) {
        return false;
    }
    for q in prime_factors(n as u64) {
        let k = n as u64 / q;
        let diff = poly_mod_sub(&powers[k as usize - 1], &x, p);
        if poly_gcd(&diff, f, p).len() > 1 {
            return false;
        }
    }
    true
}

fn poly_mod_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out = vec![0u32; len];
    for (i, o) in out.iter_mut().enumerate() {
        let av = a.get(i).copied().unwrap_or(0);
        let bv = b.get(i).copied().unwrap_or(0) % p;
        *o = (av + p - bv) % p;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    // reduce mod f (monic)
    let df = f.len() - 1;
    for i in (df..prod.len()).rev() {
        let c = prod[i] % p as u64;
        if c != 0 {
            prod[i] = 0;
            for (j, &fj) in f.iter().enumerate().take(df) {
                let idx = i - df + j;
                prod[idx] = (prod[idx] + (p as u64 - fj as u64 % p as u64) * c) % p as u64;
            }
        }
    }
    let mut out: Vec<u32> = prod.iter().take(df.max(1)).map(|&c| c as u32).collect();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn poly_modexp(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut acc = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &acc, f, p);
        }
        acc = poly_mulmod(&acc, &acc, f, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    while !(r1.len() == 1 && r1[0] == 0) {
        let r = poly_rem(&r0, &r1, p);
        r0 = r1;
        r1 = r;
    }
    r0
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    if db == 0 {
        return vec![0]; // non-zero constant divisor is a unit
    }
    let lead_inv = mod_inv(b[db], p) as u64;
    let mut rem: Vec<u64> = a.iter().map(|&c| c as u64 % p as u64).collect();
    while rem.len() > db && rem.len() > 1 {
        let dr = rem.len() - 1;
        let c = rem[dr] * lead_inv % p as u64;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let idx = dr - db + j;
                rem[idx] = (rem[idx] + (p as u64 - bj as u64 % p as u64) * c) % p as u64;
            }
        }
        rem.pop();
        while rem.len() > 1 && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    let mut out: Vec<u32> = rem.iter().map(|&c| c as u32).collect();
    if out.is_empty() {
        out.push(0);
    }
    out
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p prime
    let mut result = 1u64;
    let mut acc = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * acc % p as u64;
        }
        acc = acc * acc % p as u64;
        e >>= 1;
    }
    result as u32
}

impl FFElem {
    pub fn field(&self) -> &Arc<FField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Integer value when the element lies in the prime subfield.
    pub fn as_prime_int(&self) -> Option<u32> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    fn same_field(&self, rhs: &FFElem) {
        assert!(
            self.field == rhs.field,
            "elements from different fields: F_{} vs F_{}",
            self.field.order,
            rhs.field.order
        );
    }

    pub fn add(&self, rhs: &FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FFElem { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, rhs: &FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        FFElem { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> FFElem {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|a| (p - a % p) % p).collect();
        FFElem { field: self.field.clone(), coeffs }
    }

    pub fn mul(&self, rhs: &FFElem) -> FFElem {
        self.same_field(rhs);
        let f = &self.field;
        if f.n == 1 {
            let v = self.coeffs[0] as u64 * rhs.coeffs[0] as u64 % f.p as u64;
            return FFElem { field: self.field.clone(), coeffs: vec![v as u32] };
        }
        let mut coeffs = poly_mulmod(&self.coeffs, &rhs.coeffs, &f.modulus, f.p);
        coeffs.resize(f.n as usize, 0);
        FFElem { field: self.field.clone(), coeffs }
    }

    pub fn pow(&self, mut e: u64) -> FFElem {
        let mut result = self.field.one();
        let mut acc = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&acc);
            }
            acc = acc.mul(&acc);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self) -> Result<FFElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order - 2))
    }

    /// Multiplicative order; zero has none.
    pub fn mul_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut acc = self.clone();
        let mut m = 1u64;
        while !acc.is_one() {
            acc = acc.mul(self);
            m += 1;
        }
        Some(m)
    }

    /// Field trace x + x^p + ... + x^{p^{n-1}}, landing in F_p.
    pub fn trace(&self) -> u32 {
        let p = self.field.p as u64;
        let mut acc = self.field.zero();
        let mut x = self.clone();
        for _ in 0..self.field.n {
            acc = acc.add(&x);
            x = x.pow(p);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Legendre symbol: +1 for non-zero squares, -1 for non-squares, 0 at 0,
    /// computed as x^{(d-1)/2}.
    pub fn legendre(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let r = self.pow((self.field.order - 1) / 2);
        if r.is_one() {
            1
        } else {
            -1
        }
    }

    /// Deterministic square root: the coefficient-lex least r with r² = x,
    /// absent for non-squares. Fields are tiny, so enumeration suffices.
    pub fn sqrt(&self) -> Option<FFElem> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.field.p != 2 && self.legendre() < 0 {
            return None;
        }
        let f = &self.field;
        (0..f.order)
            .map(|i| f.elem_from_index(i))
            .find(|r| &r.mul(r) == self)
    }
}

/// F_d together with its quadratic extension F_{d²} and the distinguished
/// elements θ̄ (primitive in F_{d²}) and η = θ̄^{(d-1)/(p-1)}.
pub struct QuadExt {
    pub base: Arc<FField>,
    pub ext: Arc<FField>,
    pub thetabar: FFElem,
    pub eta: FFElem,
    /// Image of the base field in the extension, indexed by base lex index.
    embed_table: Vec<u64>,
    /// Inverse lookup: extension lex index -> base lex index, for elements
    /// fixed by the Frobenius x ↦ x^d.
    retract_table: std::collections::HashMap<u64, u64>,
}

impl QuadExt {
    /// Builds the quadratic extension of an odd-characteristic field.
    pub fn new(base: &Arc<FField>) -> Result<QuadExt> {
        if base.p() == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let d = base.order();
        let ext = FField::new(base.p(), 2 * base.n())?;
        let thetabar = ext.theta();
        let eta = thetabar.pow((d - 1) / (base.p() as u64 - 1));
        // Embedding: send the base generator x to the least root of the base
        // modulus inside the extension, then extend linearly on coefficients.
        let root = if base.n() == 1 {
            ext.zero() // unused: prime subfield embeds by from_int
        } else {
            ext.elements()
                .find(|r| eval_poly(base.modulus(), r).is_zero())
                .expect("base modulus splits in the quadratic extension")
        };
        let mut embed_table = Vec::with_capacity(d as usize);
        let mut retract_table = std::collections::HashMap::new();
        for i in 0..d {
            let b = base.elem_from_index(i);
            let mut acc = ext.zero();
            let mut pw = ext.one();
            for &c in b.coeffs() {
                acc = acc.add(&pw.mul(&ext.from_int(c as i64)));
                pw = pw.mul(&root);
            }
            let j = ext.index_of(&acc);
            embed_table.push(j);
            retract_table.insert(j, i);
        }
        let q = QuadExt { base: base.clone(), ext, thetabar, eta, embed_table, retract_table };
        // Invariants from the construction.
        debug_assert_eq!(q.eta.mul_order(), Some((base.p() as u64 - 1) * (d + 1)));
        debug_assert!(q.retract(&q.thetabar.pow(d + 1)).is_some());
        Ok(q)
    }

    pub fn d(&self) -> u64 {
        self.base.order()
    }

    /// Image of a base-field element in the extension.
    pub fn embed(&self, x: &FFElem) -> FFElem {
        let idx = self.embed_table[self.base.index_of(x) as usize];
        self.ext.elem_from_index(idx)
    }

    /// Pull an extension element back to the base field, if it lies in the
    /// image (equivalently, is fixed by x ↦ x^d).
    pub fn retract(&self, x: &FFElem) -> Option<FFElem> {
        self.retract_table
            .get(&self.ext.index_of(x))
            .map(|&i| self.base.elem_from_index(i))
    }

    /// Modular analogue of i: η^{(p-1)(d+1)/4}, defined when d = 3 mod 4.
    pub fn i_mod(&self) -> Option<FFElem> {
        let d = self.d();
        if d % 4 != 3 {
            return None;
        }
        let e = (self.base.p() as u64 - 1) * (d + 1) / 4;
        Some(self.eta.pow(e))
    }
}

fn eval_poly(poly: &[u32], x: &FFElem) -> FFElem {
    let f = x.field();
    let mut acc = f.zero();
    for &c in poly.iter().rev() {
        acc = acc.mul(x).add(&f.from_int(c as i64));
    }
    acc
}
