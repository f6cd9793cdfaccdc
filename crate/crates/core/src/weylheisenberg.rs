//! Displacement operators of both Weyl-Heisenberg flavors, plus phase-point
//! operators.
//!
//! The ordinary flavor works in any dimension d, with phases built from
//! τ = -e^{iπ/d} and components taken mod d̄ (= d for odd d, 2d for even d).
//! The Galoisian flavor works in odd prime-power dimensions, indexing the
//! standard basis by field elements and replacing exponents with field traces;
//! its matrices are exact (entries are roots of unity times nothing else), and
//! the exact form is authoritative.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactmath::CycloNum;
use crate::finitefield::{FFElem, FField};
use crate::linalg::{CMat, ExactMat};

/// A point of the ordinary discrete phase space, stored reduced mod d̄.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub u1: u32,
    pub u2: u32,
}

impl Point {
    pub fn new(d: u32, u1: i64, u2: i64) -> Point {
        let m = dbar(d) as i64;
        Point { u1: u1.rem_euclid(m) as u32, u2: u2.rem_euclid(m) as u32 }
    }
}

/// d̄ = d for odd d, 2d for even d.
pub fn dbar(d: u32) -> u32 {
    if d % 2 == 1 {
        d
    } else {
        2 * d
    }
}

/// Symplectic form Ω(u, v) = u₂v₁ - u₁v₂ mod d̄.
pub fn symplectic_form(d: u32, u: Point, v: Point) -> u32 {
    let m = dbar(d) as i64;
    (u.u2 as i64 * v.u1 as i64 - u.u1 as i64 * v.u2 as i64).rem_euclid(m) as u32
}

/// τ = -e^{iπ/d}.
pub fn tau(d: u32) -> Complex64 {
    -Complex64::from_polar(1.0, std::f64::consts::PI / d as f64)
}

/// Ordinary displacement D_u = τ^{u₁u₂} X^{u₁} Z^{u₂} on C^d.
pub fn displacement(d: u32, u: Point) -> CMat {
    let t = tau(d);
    let phase = t.powu((u.u1 as u64 * u.u2 as u64 % dbar(d) as u64) as u32);
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
    // (X^{u1} Z^{u2})|x> = ω^{u2 x} |x + u1>
    CMat::from_fn(d as usize, d as usize, |i, j| {
        if i as u32 == (j as u32 + u.u1) % d {
            phase * omega.powu((u.u2 as u64 * j as u64 % d as u64) as u32)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Galoisian displacement D_u = ω^{tr(u₁u₂/2)} X_{u₁} Z_{u₂} as an exact
/// matrix over Q(ζ_{4p}), with basis states indexed by field elements in
/// enumeration order.
pub fn displacement_galois(f: &Arc<FField>, u1: &FFElem, u2: &FFElem) -> Result<ExactMat> {
    if f.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let p = f.p();
    let d = f.order() as usize;
    let n = 4 * p;
    let inv2 = f.from_int(2).inv()?;
    let phase_exp = u1.mul(u2).mul(&inv2).trace(); // tr(u1 u2 / 2) in F_p
    let mut m = ExactMat::zeros(n, d, d);
    for j in 0..d {
        let x = f.elem_from_index(j as u64);
        let i = f.index_of(&x.add(u1)) as usize;
        // ω^{tr(x u2)} with ω = ζ_{4p}^4
        let e = x.mul(u2).trace();
        let total = (4 * ((phase_exp as u64 + e as u64) % p as u64)) as i64;
        m[(i, j)] = CycloNum::root_of_unity(n, total);
    }
    Ok(m)
}

/// Parity-centered phase-point operator A_u = D_u A₀ D_u†, exact.
pub fn phase_point_op(f: &Arc<FField>, u1: &FFElem, u2: &FFElem) -> Result<ExactMat> {
    let a0 = parity_op(f)?;
    let d = displacement_galois(f, u1, u2)?;
    Ok(d.matmul(&a0).matmul(&d.dagger()))
}

/// A₀ = Σ_x |-x⟩⟨x| as an exact matrix; equals (1/d) Σ_p D_p.
pub fn parity_op(f: &Arc<FField>) -> Result<ExactMat> {
    if f.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let n = 4 * f.p();
    let d = f.order() as usize;
    let mut m = ExactMat::zeros(n, d, d);
    for j in 0..d {
        let x = f.elem_from_index(j as u64);
        let i = f.index_of(&x.neg()) as usize;
        m[(i, j)] = CycloNum::one(n);
    }
    Ok(m)
}
