//! Exact arbitrary-precision rational and cyclotomic-field arithmetic.
//!
//! A [`CycloNum`] is an element of the cyclotomic field Q(ζ_N), stored as a
//! length-N rational coefficient vector over the powers ζ_N^0..ζ_N^{N-1} and
//! kept in a canonical reduced form: the polynomial remainder modulo the N-th
//! cyclotomic polynomial Φ_N, so that only the first φ(N) coefficients can be
//! non-zero. Canonical form is unique, which makes equality, hashing, and
//! multiset comparison exact.
//!
//! Galois automorphisms g_k : ζ ↦ ζ^k ([`GaloisAut`]) act by permuting
//! exponents and re-reducing. Complex conjugation is g_{N-1}.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Numerator/denominator are arbitrary-precision and
/// the crate keeps them reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Euler totient by trial-division factoring; conductors here are tiny.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut phi = n;
    let mut f = 2u32;
    while f * f <= n {
        if n.is_multiple_of(f) {
            phi -= phi / f;
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Per-conductor data: Φ_N as a monic integer polynomial.
struct Conductor {
    phi: usize,
    /// Coefficients of Φ_N, little-endian, length phi+1, top coefficient 1.
    cyclo_poly: Vec<BigInt>,
}

fn conductor_cache() -> &'static Mutex<HashMap<u32, Arc<Conductor>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Conductor>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn conductor(n: u32) -> Arc<Conductor> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(c) = conductor_cache().lock().unwrap().get(&n) {
        return c.clone();
    }
    // Computed outside the lock: the recursion below re-enters this function
    // for the divisors of n.
    let poly = cyclotomic_poly(n);
    let c = Arc::new(Conductor { phi: euler_phi(n) as usize, cyclo_poly: poly });
    conductor_cache()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert(c)
        .clone()
}

/// Φ_N by dividing x^N - 1 by every Φ_d with d | N, d < N.
fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = conductor(d).cyclo_poly.clone();
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (little-endian, divisor monic).
fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = rem[db + i].clone();
        if !c.is_zero() {
            q[i] = c.clone();
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    q
}

/// Element of the cyclotomic field Q(ζ_N) in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNum {
    n: u32,
    /// Length N; coefficients of ζ^j for j ≥ φ(N) are zero after reduction.
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero(n: u32) -> Self {
        CycloNum { n, coeffs: vec![Rational::zero(); n as usize] }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, Rational::one())
    }

    pub fn from_rational(n: u32, r: Rational) -> Self {
        let mut c = Self::zero(n);
        c.coeffs[0] = r;
        c.reduce();
        c
    }

    pub fn from_int(n: u32, k: i64) -> Self {
        Self::from_rational(n, rat_int(k))
    }

    /// ζ_N^j.
    pub fn root_of_unity(n: u32, j: i64) -> Self {
        let mut c = Self::zero(n);
        let idx = j.rem_euclid(n as i64) as usize;
        c.coeffs[idx] = Rational::one();
        c.reduce();
        c
    }

    /// Builds from an arbitrary length-N coefficient vector, reducing to
    /// canonical form.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), n as usize, "coefficient vector must have length N");
        let mut c = CycloNum { n, coeffs };
        c.reduce();
        c
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational part, provided the number is rational (all other canonical
    /// coefficients zero).
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_same(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::ConductorMismatch(self.n, rhs.n));
        }
        Ok(())
    }

    /// Reduce in place: fold exponents ≥ N via ζ^N = 1 is already guaranteed
    /// by construction, so only the division by Φ_N remains.
    fn reduce(&mut self) {
        let ctx = conductor(self.n);
        let phi = ctx.phi;
        let m = &ctx.cyclo_poly;
        for j in (phi..self.coeffs.len()).rev() {
            if self.coeffs[j].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut self.coeffs[j], Rational::zero());
            // x^j = -c * sum_{i<phi} m_i x^{j-phi+i}
            for i in 0..phi {
                if !m[i].is_zero() {
                    let t = &c * Rational::from_integer(m[i].clone());
                    self.coeffs[j - phi + i] -= t;
                }
            }
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * r).collect();
        CycloNum { n: self.n, coeffs }
    }

    /// Multiplication by ζ_N^j: a cyclic exponent shift plus reduction.
    pub fn mul_root(&self, j: i64) -> Self {
        let n = self.n as usize;
        let shift = j.rem_euclid(self.n as i64) as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[(i + shift) % n] = c.clone();
            }
        }
        let mut out = CycloNum { n: self.n, coeffs };
        out.reduce();
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let n = self.n as usize;
        let mut coeffs = vec![Rational::zero(); n];
        // Convolution with indices folded mod N (ζ^N = 1); iterate over the
        // sparser factor to keep monomial multiplications cheap.
        let (a, b) = if self.nnz() <= rhs.nnz() { (self, rhs) } else { (rhs, self) };
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    coeffs[(i + j) % n] += ai * bj;
                }
            }
        }
        let mut out = CycloNum { n: self.n, coeffs };
        out.reduce();
        Ok(out)
    }

    fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Exact multiplicative inverse via extended Euclid in Q[x] mod Φ_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ctx = conductor(self.n);
        let phi = ctx.phi;
        let modulus: Vec<Rational> = ctx
            .cyclo_poly
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let a: Vec<Rational> = self.coeffs[..phi].to_vec();
        let (g, s) = poly_ext_gcd(&modulus, &a);
        // g is a non-zero constant because Φ_N is irreducible over Q.
        debug_assert!(poly_deg(&g) == Some(0));
        let ginv = g[0].recip();
        let mut coeffs = vec![Rational::zero(); self.n as usize];
        for (i, c) in s.iter().enumerate() {
            coeffs[i] = c * &ginv;
        }
        let mut out = CycloNum { n: self.n, coeffs };
        out.reduce();
        debug_assert!({
            let p = out.try_mul(self).unwrap();
            p == CycloNum::one(self.n)
        });
        Ok(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let inv = rhs.inv()?;
        self.try_mul(&inv)
    }

    /// Complex conjugation, i.e. the Galois automorphism ζ ↦ ζ^{N-1}.
    pub fn conj(&self) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        GaloisAut::new(self.n, self.n - 1).unwrap().apply(self)
    }

    /// |z|^2 = z * conj(z), an exact real cyclotomic number.
    pub fn abs_sq(&self) -> Self {
        self.try_mul(&self.conj()).unwrap()
    }

    /// Numerical embedding ζ_N ↦ exp(2πi/N). `digits` is the requested
    /// relative precision; the f64 embedding provides at most 15 digits.
    pub fn to_complex(&self, digits: u32) -> Complex64 {
        debug_assert!(digits <= 15, "f64 embedding carries at most 15 digits");
        let n = self.n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let ang = 2.0 * std::f64::consts::PI * (j as f64) / n;
                acc += Complex64::from_polar(1.0, ang) * c.to_f64().unwrap();
            }
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        self.to_complex(15)
    }
}

impl fmt::Display for CycloNum {
    /// Compact display: a polynomial in z = ζ_N.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.n, j)?;
            } else {
                write!(f, "{}*z{}^{}", c, self.n, j)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.check_same(rhs).expect("conductor mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycloNum { n: self.n, coeffs }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self.check_same(rhs).expect("conductor mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycloNum { n: self.n, coeffs }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.try_mul(rhs).expect("conductor mismatch")
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        CycloNum { n: self.n, coeffs }
    }
}

fn poly_deg(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Returns (q, r) with a = q*b + r over Q[x].
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead = b[db].recip();
    let mut rem = a.to_vec();
    let mut q = vec![Rational::zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = poly_deg(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] * &lead;
        q[dr - db] = c.clone();
        for i in 0..=db {
            if !b[i].is_zero() {
                let t = &c * &b[i];
                rem[dr - db + i] -= t;
            }
        }
    }
    (poly_trim(q), poly_trim(rem))
}

/// Extended Euclid: returns (g, s) with s*a ≡ g (mod m), g = gcd(m, a).
fn poly_ext_gcd(m: &[Rational], a: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = poly_trim(m.to_vec());
    let mut r1 = poly_trim(a.to_vec());
    let mut s0 = vec![Rational::zero()];
    let mut s1 = vec![Rational::one()];
    while poly_deg(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out = vec![Rational::zero(); len];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(out)
}

/// Galois automorphism g_k : ζ_N ↦ ζ_N^k with gcd(k, N) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisAut {
    n: u32,
    k: u32,
}

impl GaloisAut {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        let k = k % n;
        if n > 1 && (k == 0 || (k as u64).gcd(&(n as u64)) != 1) {
            return Err(Error::BadGaloisExponent { k, n });
        }
        Ok(GaloisAut { n, k: if n == 1 { 0 } else { k } })
    }

    pub fn identity(n: u32) -> Self {
        GaloisAut { n, k: 1 % n }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn is_identity(&self) -> bool {
        self.n == 1 || self.k == 1
    }

    /// Composition: self ∘ rhs acts by ζ ↦ ζ^{k1·k2}.
    pub fn compose(&self, rhs: &GaloisAut) -> Self {
        assert_eq!(self.n, rhs.n, "conductor mismatch");
        GaloisAut { n: self.n, k: ((self.k as u64 * rhs.k as u64) % self.n as u64) as u32 }
    }

    pub fn inverse(&self) -> Self {
        if self.n == 1 {
            return *self;
        }
        let mut k = 1u64;
        let mut acc = self.k as u64;
        let mut e = self.order() - 1;
        while e > 0 {
            if e & 1 == 1 {
                k = k * acc % self.n as u64;
            }
            acc = acc * acc % self.n as u64;
            e >>= 1;
        }
        GaloisAut { n: self.n, k: k as u32 }
    }

    /// Multiplicative order of k mod N.
    pub fn order(&self) -> u32 {
        if self.n == 1 || self.k == 1 {
            return 1;
        }
        let mut m = 1u32;
        let mut acc = self.k as u64;
        while acc != 1 {
            acc = acc * self.k as u64 % self.n as u64;
            m += 1;
        }
        m
    }

    pub fn apply(&self, x: &CycloNum) -> CycloNum {
        assert_eq!(self.n, x.conductor(), "conductor mismatch");
        if self.is_identity() {
            return x.clone();
        }
        let n = self.n as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (j, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[(j * self.k as usize) % n] += c;
            }
        }
        let mut out = CycloNum { n: self.n, coeffs };
        out.reduce();
        out
    }

    /// k-th iterate of the automorphism.
    pub fn power(&self, e: u32) -> Self {
        let mut out = GaloisAut::identity(self.n);
        for _ in 0..e {
            out = out.compose(self);
        }
        out
    }
}

/// Gaussian sum Σ_x ω_p^{x²} in the conductor-4p field, so that both √p
/// (p = 1 mod 4) and i√p (p = 3 mod 4) live alongside i = ζ_{4p}^p.
pub fn gaussian_sum(p: u32) -> Result<CycloNum> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p as u64));
    }
    let n = 4 * p;
    let mut acc = CycloNum::zero(n);
    for x in 0..p as i64 {
        // ω_p = ζ_{4p}^4
        acc = &acc + &CycloNum::root_of_unity(n, 4 * (x * x % p as i64));
    }
    Ok(acc)
}

/// √p as an exact element of Q(ζ_{4p}).
pub fn sqrt_p(p: u32) -> Result<CycloNum> {
    let g = gaussian_sum(p)?;
    if p % 4 == 1 {
        Ok(g)
    } else {
        // g = i√p, and 1/i = -i = ζ_{4p}^{3p}
        Ok(g.mul_root(3 * p as i64))
    }
}

/// i as an element of Q(ζ_{4p}).
pub fn imag_unit(p: u32) -> CycloNum {
    CycloNum::root_of_unity(4 * p, p as i64)
}

/// Hilbert-90 splitting: given g of order m and λ with
/// λ·g(λ)···g^{m-1}(λ) = 1, returns μ ≠ 0 with λ = μ / g(μ).
///
/// Evaluates T(x) = x + a_1 g(x) + ... + a_{m-1} g^{m-1}(x) with
/// a_i = λ g(λ) ··· g^{i-1}(λ) at the monomial basis ζ^0, ζ^1, ... in
/// increasing power until it is non-zero, which linear independence of the
/// automorphisms guarantees will happen.
pub fn hilbert90_split(lambda: &CycloNum, g: &GaloisAut, m: u32) -> Result<CycloNum> {
    let n = lambda.conductor();
    assert_eq!(g.conductor(), n, "conductor mismatch");
    if g.power(m) != GaloisAut::identity(n) {
        return Err(Error::Invalid(format!("automorphism does not have order dividing {m}")));
    }
    // Coefficients a_i and the norm condition.
    let mut a = Vec::with_capacity(m as usize);
    a.push(CycloNum::one(n));
    let mut gi = GaloisAut::identity(n);
    let mut acc = CycloNum::one(n);
    for _ in 0..m {
        acc = acc.try_mul(&gi.apply(lambda))?;
        gi = gi.compose(g);
        a.push(acc.clone());
    }
    if acc != CycloNum::one(n) {
        return Err(Error::NormCondition);
    }
    for j in 0..n as i64 {
        let x = CycloNum::root_of_unity(n, j);
        let mut t = CycloNum::zero(n);
        let mut gi = GaloisAut::identity(n);
        for ai in a.iter().take(m as usize) {
            t = &t + &ai.try_mul(&gi.apply(&x))?;
            gi = gi.compose(g);
        }
        if !t.is_zero() {
            debug_assert_eq!(lambda.try_mul(&g.apply(&t))?, t);
            return Ok(t);
        }
    }
    unreachable!("T is a non-zero map by Dedekind's theorem")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn omega(p: u32) -> CycloNum {
        CycloNum::root_of_unity(p, 1)
    }

    #[test]
    fn minimal_polynomial_relation() {
        // 1 + ω + ... + ω^{p-1} = 0 for p = 5
        let p = 5;
        let mut acc = CycloNum::zero(p);
        for j in 0..p as i64 {
            acc = &acc + &CycloNum::root_of_unity(p, j);
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn root_of_unity_inverse() {
        // ω · ω^{p-1} = 1 for p = 7
        let p = 7;
        let prod = omega(p).try_mul(&CycloNum::root_of_unity(p, 6)).unwrap();
        assert_eq!(prod, CycloNum::one(p));
    }

    #[test]
    fn div_one_by_omega() {
        // 1/ω = ω² in Q(ω_3)
        let p = 3;
        let q = CycloNum::one(p).div(&omega(p)).unwrap();
        assert_eq!(q, CycloNum::root_of_unity(p, 2));
    }

    #[test]
    fn galois_identity_and_conjugation() {
        let p = 5;
        let x = &omega(p) + &CycloNum::from_rational(p, rat(2, 3));
        assert_eq!(GaloisAut::identity(p).apply(&x), x);
        // g_{p-1} is complex conjugation: g_4(ω) = ω^4 = conj(ω)
        let g = GaloisAut::new(p, 4).unwrap();
        assert_eq!(g.apply(&omega(p)), CycloNum::root_of_unity(p, 4));
        let diff = g.apply(&omega(p)).to_c64() - omega(p).to_c64().conj();
        assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn galois_composition_exponents() {
        let p = 7;
        let g2 = GaloisAut::new(p, 2).unwrap();
        let g3 = GaloisAut::new(p, 3).unwrap();
        let x = omega(p);
        assert_eq!(g2.apply(&g3.apply(&x)), GaloisAut::new(p, 6).unwrap().apply(&x));
    }

    #[test]
    fn gaussian_sum_squares() {
        for p in [3u32, 5, 7, 11, 13] {
            let g = gaussian_sum(p).unwrap();
            let sq = g.try_mul(&g).unwrap();
            let sign = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(sq, CycloNum::from_int(4 * p, sign * p as i64), "p = {p}");
        }
        assert!(gaussian_sum(6).is_err());
        assert!(gaussian_sum(2).is_err());
    }

    #[test]
    fn gaussian_sum_matches_float() {
        let g = gaussian_sum(5).unwrap().to_c64();
        assert!((g.re - 5f64.sqrt()).abs() < 1e-12 && g.im.abs() < 1e-12);
        let g7 = gaussian_sum(7).unwrap().to_c64();
        assert!((g7.im - 7f64.sqrt()).abs() < 1e-12 && g7.re.abs() < 1e-12);
        // direct check p = 3: ω⁰ + ω + ω = 1 + 2ω, squared = -3
        let g3 = gaussian_sum(3).unwrap();
        let direct = &CycloNum::one(12) + &CycloNum::root_of_unity(12, 4).mul_rational(&rat_int(2));
        assert_eq!(g3, direct);
    }

    #[test]
    fn sqrt_p_is_real_positive() {
        for p in [3u32, 5, 7, 11] {
            let s = sqrt_p(p).unwrap();
            let sq = s.try_mul(&s).unwrap();
            assert_eq!(sq, CycloNum::from_int(4 * p, p as i64));
            let z = s.to_c64();
            assert!(z.re > 0.0 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn hilbert90_identity_case() {
        let n = 12;
        let lam = CycloNum::one(n);
        let g = GaloisAut::new(n, 5).unwrap();
        let mu = hilbert90_split(&lam, &g, g.order()).unwrap();
        assert_eq!(lam.try_mul(&g.apply(&mu)).unwrap(), mu);
    }

    #[test]
    fn hilbert90_omega_case() {
        // λ = ω, g = g_2 of order 2 in Q(ω_3): μ = 1 + ω works and the
        // search must return some valid μ.
        let p = 3;
        let lam = omega(p);
        let g = GaloisAut::new(p, 2).unwrap();
        let mu = hilbert90_split(&lam, &g, 2).unwrap();
        assert!(!mu.is_zero());
        assert_eq!(lam.try_mul(&g.apply(&mu)).unwrap(), mu);
        // the known witness satisfies the same relation
        let known = &CycloNum::one(p) + &omega(p);
        assert_eq!(lam.try_mul(&g.apply(&known)).unwrap(), known);
    }

    #[test]
    fn hilbert90_rejects_bad_norm() {
        let p = 5;
        let lam = CycloNum::from_int(p, 2);
        let g = GaloisAut::new(p, 2).unwrap();
        assert!(matches!(hilbert90_split(&lam, &g, 4), Err(Error::NormCondition)));
    }

    #[test]
    fn inverse_of_dense_element() {
        let n = 20;
        let x = &(&omega(20).mul_rational(&rat(3, 7)) + &CycloNum::from_int(n, 2))
            - &CycloNum::root_of_unity(n, 7).mul_rational(&rat(5, 3));
        let y = x.inv().unwrap();
        assert_eq!(x.try_mul(&y).unwrap(), CycloNum::one(n));
    }

    #[test]
    fn to_complex_embeddings() {
        assert_eq!(CycloNum::zero(5).to_c64(), Complex64::new(0.0, 0.0));
        let i = CycloNum::root_of_unity(4, 1).to_c64();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    fn arb_cyclo(n: u32) -> impl Strategy<Value = CycloNum> {
        prop::collection::vec((-6i64..7, 1i64..5), n as usize).prop_map(move |v| {
            CycloNum::from_coeffs(n, v.into_iter().map(|(a, b)| rat(a, b)).collect())
        })
    }

    proptest! {
        #[test]
        fn canonical_form_detects_equality(a in arb_cyclo(12), b in arb_cyclo(12)) {
            let diff = &a - &b;
            prop_assert_eq!(diff.is_zero(), a == b);
        }

        #[test]
        fn galois_is_field_homomorphism(a in arb_cyclo(20), b in arb_cyclo(20)) {
            let g = GaloisAut::new(20, 3).unwrap();
            prop_assert_eq!(g.apply(&a.try_mul(&b).unwrap()),
                            g.apply(&a).try_mul(&g.apply(&b)).unwrap());
            prop_assert_eq!(g.apply(&(&a + &b)), &g.apply(&a) + &g.apply(&b));
        }

        #[test]
        fn galois_group_closure(x in arb_cyclo(28), ia in 0usize..12, ib in 0usize..12) {
            let units: Vec<u32> = (1..28).filter(|k| num_integer::gcd(*k, 28) == 1).collect();
            let (ka, kb) = (units[ia], units[ib]);
            let ga = GaloisAut::new(28, ka).unwrap();
            let gb = GaloisAut::new(28, kb).unwrap();
            let gab = GaloisAut::new(28, (ka * kb) % 28).unwrap();
            prop_assert_eq!(ga.apply(&gb.apply(&x)), gab.apply(&x));
        }

        #[test]
        fn mul_inverse_roundtrip(a in arb_cyclo(12)) {
            prop_assume!(!a.is_zero());
            let inv = a.inv().unwrap();
            prop_assert_eq!(a.try_mul(&inv).unwrap(), CycloNum::one(12));
        }
    }
}
