//! Symplectic unitary representations, the order-3 unitary and its
//! eigenspaces, the standard MUB construction, and the Möbius action on basis
//! labels.
//!
//! Two representations coexist. The ordinary flavor takes 2×2 symplectic
//! matrices over Z_d̄ and produces float matrices defined up to a global phase
//! (pinned only for the order-3 unitary, whose eigenvalue labels matter). The
//! Galoisian flavor takes SL(2, F_d) over an odd prime-power field and, for
//! odd extension degree n, is strictly faithful as an exact-matrix
//! representation: U_{S₁}U_{S₂} = U_{S₁S₂} with no phase slack (faithfulness
//! pins the global constant, which for p = 1 mod 4 needs a sign on top of the
//! published (-i)^{-n(p+3)/2}). For even n the representation is
//! multiplicative up to ±1, with both signs realized.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactmath::{imag_unit, rat, sqrt_p, CycloNum, Rational};
use crate::finitefield::{FFElem, FField};
use crate::linalg::{eig_unitary, CMat, CVec, ExactMat};
use crate::weylheisenberg::{dbar, tau};

/// 2×2 symplectic matrix over Z_d̄ (ordinary flavor).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SympOrd {
    pub d: u32,
    /// row-major [α, β, γ, δ], reduced mod d̄
    pub m: [u32; 4],
}

impl SympOrd {
    pub fn new(d: u32, m: [i64; 4]) -> Result<SympOrd> {
        let db = dbar(d) as i64;
        let r: Vec<u32> = m.iter().map(|x| x.rem_euclid(db) as u32).collect();
        let det = (r[0] as i64 * r[3] as i64 - r[1] as i64 * r[2] as i64).rem_euclid(db);
        if det != 1 {
            return Err(Error::NotSymplectic(format!("det = {det} mod {db}")));
        }
        Ok(SympOrd { d, m: [r[0], r[1], r[2], r[3]] })
    }

    pub fn matmul(&self, rhs: &SympOrd) -> SympOrd {
        assert_eq!(self.d, rhs.d);
        let db = dbar(self.d) as u64;
        let a = &self.m;
        let b = &rhs.m;
        let mul = |x: u32, y: u32| x as u64 * y as u64 % db;
        SympOrd {
            d: self.d,
            m: [
                ((mul(a[0], b[0]) + mul(a[1], b[2])) % db) as u32,
                ((mul(a[0], b[1]) + mul(a[1], b[3])) % db) as u32,
                ((mul(a[2], b[0]) + mul(a[3], b[2])) % db) as u32,
                ((mul(a[2], b[1]) + mul(a[3], b[3])) % db) as u32,
            ],
        }
    }

    /// Action on a phase-space point mod d̄.
    pub fn apply(&self, u: crate::weylheisenberg::Point) -> crate::weylheisenberg::Point {
        let db = dbar(self.d) as i64;
        crate::weylheisenberg::Point::new(
            self.d,
            (self.m[0] as i64 * u.u1 as i64 + self.m[1] as i64 * u.u2 as i64).rem_euclid(db),
            (self.m[2] as i64 * u.u1 as i64 + self.m[3] as i64 * u.u2 as i64).rem_euclid(db),
        )
    }
}

fn inv_mod(a: u32, m: u32) -> Option<u32> {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, a as i64 % m as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i64) as u32)
}

/// Ordinary symplectic unitary for S over Z_d̄, with global phase e^{iφ} = 1
/// in the β-invertible branch. When β is not invertible the operator is built
/// as U_{S₁}U_{S₂} from a deterministic decomposition with both β's
/// invertible, so the result is defined up to the same phase conventions.
pub fn symp_unitary(s: &SympOrd) -> CMat {
    let d = s.d;
    let db = dbar(d);
    if inv_mod(s.m[1], db).is_some() {
        return symp_unitary_beta_inv(s, Complex64::new(1.0, 0.0));
    }
    // S = S₁ S₂ with S₁ = [[0, -1], [1, k]] and S₂ = [[kα+γ, kβ+δ], [-α, -β]];
    // β(S₂) = kβ+δ is invertible for some k because gcd(β, δ) is a unit.
    for k in 0..db {
        let beta2 = ((k as u64 * s.m[1] as u64 + s.m[3] as u64) % db as u64) as u32;
        if inv_mod(beta2, db).is_some() {
            let s1 = SympOrd::new(d, [0, -1, 1, k as i64]).unwrap();
            let s2 = s1_inverse_times(&s1, s);
            let u1 = symp_unitary_beta_inv(&s1, Complex64::new(1.0, 0.0));
            let u2 = symp_unitary_beta_inv(&s2, Complex64::new(1.0, 0.0));
            return u1.matmul(&u2);
        }
    }
    unreachable!("a valid decomposition exists for every symplectic matrix")
}

fn s1_inverse_times(s1: &SympOrd, s: &SympOrd) -> SympOrd {
    // inverse of [[a, b], [c, d]] with det 1 is [[d, -b], [-c, a]]
    let d = s1.d;
    let db = dbar(d) as i64;
    let inv = SympOrd::new(
        d,
        [
            s1.m[3] as i64,
            -(s1.m[1] as i64),
            -(s1.m[2] as i64),
            s1.m[0] as i64,
        ],
    )
    .unwrap();
    let out = inv.matmul(s);
    debug_assert!(
        (out.m[0] as i64 * out.m[3] as i64 - out.m[1] as i64 * out.m[2] as i64).rem_euclid(db)
            == 1
    );
    out
}

fn symp_unitary_beta_inv(s: &SympOrd, phase: Complex64) -> CMat {
    let d = s.d;
    let db = dbar(d) as u64;
    let binv = inv_mod(s.m[1], dbar(d)).expect("β must be invertible here") as u64;
    let t = tau(d);
    let norm = 1.0 / (d as f64).sqrt();
    let (alpha, delta) = (s.m[0] as u64, s.m[3] as u64);
    CMat::from_fn(d as usize, d as usize, |x, y| {
        let (x, y) = (x as u64, y as u64);
        // exponent β⁻¹(αy² - 2xy + δx²) mod d̄
        let e = binv * ((alpha * y % db * y + delta * x % db * x + (2 * db - 2) * x % db * y) % db)
            % db;
        phase * t.powu(e as u32) * norm
    })
}

/// The order-3 unitary built from [[0, -1], [1, -1]] with the global phase
/// pinned to e^{iπ(d-1)/12}, so that U³ = 1 and the eigenvalue labels
/// (1, η, η²) match the published eigenspace-dimension table.
pub struct ZaunerSplit {
    pub d: u32,
    pub matrix: CMat,
    /// Orthonormal bases of the eigenspaces for eigenvalues 1, η, η².
    pub spaces: [Vec<CVec>; 3],
}

impl ZaunerSplit {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.spaces[0].len(), self.spaces[1].len(), self.spaces[2].len())
    }
}

/// Expected eigenspace dimensions for dimension d: rows (1, η, η²).
pub fn zauner_expected_dims(d: u32) -> (usize, usize, usize) {
    let k = (d / 3) as usize;
    match d % 3 {
        0 => (k + 1, k, k - 1),
        1 => (k + 1, k, k),
        _ => (k + 1, k + 1, k),
    }
}

pub fn zauner_matrix(d: u32) -> CMat {
    let s = SympOrd::new(d, [0, -1, 1, -1]).unwrap();
    let phase = Complex64::from_polar(1.0, std::f64::consts::PI * (d as f64 - 1.0) / 12.0);
    symp_unitary_beta_inv(&s, phase)
}

/// Builds the order-3 unitary and splits its eigenspaces by eigenvalue.
pub fn zauner(d: u32) -> Result<ZaunerSplit> {
    assert!(d >= 2, "dimension must be at least 2");
    let m = zauner_matrix(d);
    // order-3 sanity
    let cube = m.pow(3);
    if cube.max_abs_diff(&CMat::identity(d as usize)) > 1e-10 {
        return Err(Error::Invalid("order-3 property fails".into()));
    }
    let eta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let targets = [Complex64::new(1.0, 0.0), eta, eta * eta];
    let eigs = eig_unitary(&m, 1e-10)?;
    let mut spaces: [Vec<CVec>; 3] = [vec![], vec![], vec![]];
    for (lam, basis) in eigs {
        let (idx, dist) = targets
            .iter()
            .enumerate()
            .map(|(i, t)| (i, (lam - t).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if dist > 1e-8 {
            return Err(Error::Invalid(format!("unexpected eigenvalue {lam}")));
        }
        spaces[idx].extend(basis);
    }
    Ok(ZaunerSplit { d, matrix: m, spaces })
}

/// 2×2 matrix over F_d with determinant 1 (Galoisian flavor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SympGal {
    pub m: [FFElem; 4],
}

impl SympGal {
    pub fn new(m: [FFElem; 4]) -> Result<SympGal> {
        let det = m[0].mul(&m[3]).sub(&m[1].mul(&m[2]));
        if !det.is_one() {
            return Err(Error::NotSymplectic(format!("det = {det}")));
        }
        Ok(SympGal { m })
    }

    pub fn from_ints(f: &Arc<FField>, m: [i64; 4]) -> Result<SympGal> {
        SympGal::new([
            f.from_int(m[0]),
            f.from_int(m[1]),
            f.from_int(m[2]),
            f.from_int(m[3]),
        ])
    }

    pub fn field(&self) -> &Arc<FField> {
        self.m[0].field()
    }

    pub fn identity(f: &Arc<FField>) -> SympGal {
        SympGal { m: [f.one(), f.zero(), f.zero(), f.one()] }
    }

    pub fn matmul(&self, rhs: &SympGal) -> SympGal {
        let a = &self.m;
        let b = &rhs.m;
        SympGal {
            m: [
                a[0].mul(&b[0]).add(&a[1].mul(&b[2])),
                a[0].mul(&b[1]).add(&a[1].mul(&b[3])),
                a[2].mul(&b[0]).add(&a[3].mul(&b[2])),
                a[2].mul(&b[1]).add(&a[3].mul(&b[3])),
            ],
        }
    }

    pub fn inverse(&self) -> SympGal {
        SympGal {
            m: [
                self.m[3].clone(),
                self.m[1].neg(),
                self.m[2].neg(),
                self.m[0].clone(),
            ],
        }
    }

    pub fn apply(&self, u: (&FFElem, &FFElem)) -> (FFElem, FFElem) {
        (
            self.m[0].mul(u.0).add(&self.m[1].mul(u.1)),
            self.m[2].mul(u.0).add(&self.m[3].mul(u.1)),
        )
    }
}

/// Global constant in front of the β ≠ 0 branch, as an exact element of
/// Q(ζ_{4p}). The published form is (-i)^{-n(p+3)/2} = i^{n(p+3)/2 mod 4}.
/// For odd n, strict faithfulness U_{S₁}U_{S₂} = U_{S₁S₂} forces an extra
/// (-1) when p = 1 mod 4; for even n the representation is multiplicative
/// only up to ±1 and the published constant is kept as is, which is what
/// produces the -1 sign witnesses in quadratic extensions like d = 9.
fn rep_constant(p: u32, n: u32) -> CycloNum {
    let nn = 4 * p;
    let e = (n as u64 * (p as u64 + 3) / 2) % 4;
    // i^e with i = ζ_{4p}^p
    let mut c = CycloNum::one(nn);
    for _ in 0..e {
        c = c.try_mul(&imag_unit(p)).unwrap();
    }
    if n % 2 == 1 && p % 4 == 1 {
        c = -&c;
    }
    c
}

/// 1/√d as an exact element of Q(ζ_{4p}) for d = p^n.
pub fn inv_sqrt_d(p: u32, n: u32) -> Result<CycloNum> {
    let nn = 4 * p;
    let d = (p as i64).pow(n);
    if n.is_multiple_of(2) {
        let half = (p as i64).pow(n / 2);
        Ok(CycloNum::from_rational(nn, rat(1, half)))
    } else {
        // 1/√d = √p / (p^{(n+1)/2})
        let s = sqrt_p(p)?;
        let denom = (p as i64).pow(n.div_ceil(2));
        let _ = d;
        Ok(s.mul_rational(&rat(1, denom)))
    }
}

/// Exact faithful symplectic unitary for S ∈ SL(2, F_d), d an odd prime
/// power. Satisfies U_{S₁}U_{S₂} = U_{S₁S₂} exactly when n is odd (and up to
/// a sign when n is even).
pub fn symp_unitary_galois(s: &SympGal) -> Result<ExactMat> {
    let f = s.field();
    if f.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let p = f.p();
    let nn = 4 * p;
    let d = f.order() as usize;
    let inv2 = f.from_int(2).inv()?;
    let [alpha, beta, gamma, delta] = &s.m;
    let omega = |e: u32| CycloNum::root_of_unity(nn, 4 * e as i64);
    if beta.is_zero() {
        // l(α) Σ_x ω^{tr(αγ x²/2)} |αx><x|
        let l = alpha.legendre() as i64;
        let mut m = ExactMat::zeros(nn, d, d);
        for j in 0..d {
            let x = f.elem_from_index(j as u64);
            let i = f.index_of(&alpha.mul(&x)) as usize;
            let e = alpha.mul(gamma).mul(&x).mul(&x).mul(&inv2).trace();
            m[(i, j)] = omega(e).mul_rational(&rat(l, 1));
        }
        Ok(m)
    } else {
        let scalar = rep_constant(p, f.n())
            .mul_rational(&rat(beta.neg().legendre() as i64, 1))
            .try_mul(&inv_sqrt_d(p, f.n())?)?;
        let binv = beta.inv()?;
        let mut m = ExactMat::zeros(nn, d, d);
        for i in 0..d {
            let x = f.elem_from_index(i as u64);
            let dx2 = delta.mul(&x).mul(&x);
            for j in 0..d {
                let y = f.elem_from_index(j as u64);
                // tr((δx² - 2xy + αy²) / (2β))
                let q = dx2
                    .sub(&f.from_int(2).mul(&x).mul(&y))
                    .add(&alpha.mul(&y).mul(&y));
                let e = q.mul(&binv).mul(&inv2).trace();
                m[(i, j)] = omega(e).try_mul(&scalar)?;
            }
        }
        Ok(m)
    }
}

/// Basis label for a complete MUB set: an element of F_d or ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Fin(FFElem),
    Inf,
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisLabel::Fin(x) => write!(f, "{x}"),
            BasisLabel::Inf => write!(f, "inf"),
        }
    }
}

/// A complete set of d+1 mutually unbiased bases |b, v⟩ = U_{S_b}|v⟩, exact.
pub struct MUBSet {
    pub field: Arc<FField>,
    /// Basis matrices indexed by b = field element order, then ∞ last; column
    /// v of basis b is the vector |b, v⟩.
    pub bases: Vec<ExactMat>,
}

impl MUBSet {
    pub fn d(&self) -> usize {
        self.field.order() as usize
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        let mut out: Vec<BasisLabel> = self
            .field
            .elements()
            .map(BasisLabel::Fin)
            .collect();
        out.push(BasisLabel::Inf);
        out
    }

    pub fn basis(&self, b: &BasisLabel) -> &ExactMat {
        match b {
            BasisLabel::Fin(x) => &self.bases[self.field.index_of(x) as usize],
            BasisLabel::Inf => &self.bases[self.d()],
        }
    }

    /// |b, v⟩ as an exact vector.
    pub fn vector(&self, b: &BasisLabel, v: usize) -> Vec<CycloNum> {
        let m = self.basis(b);
        (0..m.nrows).map(|i| m[(i, v)].clone()).collect()
    }
}

/// Standard MUB construction from the d+1 symplectic matrices S_b = [[1, b],
/// [0, 1]] and S_∞ = [[0, 1], [-1, 0]].
pub fn mub_standard(f: &Arc<FField>) -> Result<MUBSet> {
    if f.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let mut bases = vec![];
    for b in f.elements() {
        let s = SympGal::new([f.one(), b.clone(), f.zero(), f.one()])?;
        bases.push(symp_unitary_galois(&s)?);
    }
    let sinf = SympGal::new([f.zero(), f.one(), f.from_int(-1), f.zero()])?;
    bases.push(symp_unitary_galois(&sinf)?);
    Ok(MUBSet { field: f.clone(), bases })
}

/// The matrix S_b associated with a basis label.
pub fn mub_symplectic(f: &Arc<FField>, b: &BasisLabel) -> SympGal {
    match b {
        BasisLabel::Fin(x) => SympGal {
            m: [f.one(), x.clone(), f.zero(), f.one()],
        },
        BasisLabel::Inf => SympGal {
            m: [f.zero(), f.one(), f.from_int(-1), f.zero()],
        },
    }
}

/// Möbius action b ↦ (αb + β)/(γb + δ) on F_d ∪ {∞} for any invertible G
/// given by entries [α, β, γ, δ].
pub fn mobius_action(g: &[FFElem; 4], b: &BasisLabel) -> BasisLabel {
    let [alpha, beta, gamma, delta] = g;
    match b {
        BasisLabel::Fin(x) => {
            let denom = gamma.mul(x).add(delta);
            if denom.is_zero() {
                BasisLabel::Inf
            } else {
                let num = alpha.mul(x).add(beta);
                BasisLabel::Fin(num.mul(&denom.inv().unwrap()))
            }
        }
        BasisLabel::Inf => {
            if gamma.is_zero() {
                BasisLabel::Inf
            } else {
                BasisLabel::Fin(alpha.mul(&gamma.inv().unwrap()))
            }
        }
    }
}

/// Checks that w equals a basis column of `mub.basis(b)` up to a scalar of
/// modulus 1; returns the column index when it does.
pub fn identify_basis_vector(mub: &MUBSet, b: &BasisLabel, w: &[CycloNum]) -> Option<usize> {
    // ⟨b, v | w⟩ must be non-zero for exactly one v with |·|² = ⟨w|w⟩.
    let m = mub.basis(b);
    let nn = m.conductor();
    let mut hit = None;
    let mut norm = CycloNum::zero(nn);
    for wx in w {
        norm = &norm + &wx.abs_sq();
    }
    for v in 0..m.ncols {
        let mut ip = CycloNum::zero(nn);
        for x in 0..m.nrows {
            ip = &ip + &m[(x, v)].conj().try_mul(&w[x]).unwrap();
        }
        if !ip.is_zero() {
            if hit.is_some() {
                return None; // overlaps with two columns: not a basis vector
            }
            if ip.abs_sq() != norm {
                return None;
            }
            hit = Some(v);
        }
    }
    hit
}

/// Rational constant as a fraction of two integers, used by tests.
pub fn rational(n: i64, d: i64) -> Rational {
    rat(n, d)
}
