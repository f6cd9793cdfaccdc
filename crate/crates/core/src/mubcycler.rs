//! The MUB-cycler pipeline: suborder and type classification of GL_p
//! elements, cycler existence and enumeration, the canonical cycler built
//! from the quadratic extension, exact eigenvector extraction with the
//! Hilbert-90 rescaling, balancedness verification, the Wigner function of
//! balanced states, and orbit counting under the extended Clifford group.

use std::collections::HashSet;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;

use crate::clifford::{mobius_action, symp_unitary_galois, BasisLabel, SympGal};
use crate::error::{Error, Result};
use crate::exactmath::{hilbert90_split, rat, CycloNum};
use crate::finitefield::{FFElem, FField, QuadExt};
use crate::gunitary::{GLpMat, GUnitary};
use crate::linalg::{exact_nullspace, ExactMat, ExactVec};
use crate::weylheisenberg::{displacement_galois, parity_op, phase_point_op};

/// The s_m sequence: s₀ = 0, s₁ = 1, s_{m+1} = t·s_m - Δ·s_{m-1}, which
/// drives A^m = s_m A - s_{m-1} Δ for 2×2 matrices.
pub struct SmSequence {
    t: FFElem,
    delta: FFElem,
    prev: FFElem,
    cur: FFElem,
}

impl SmSequence {
    pub fn new(t: FFElem, delta: FFElem) -> SmSequence {
        let f = t.field().clone();
        SmSequence { t, delta, prev: f.zero(), cur: f.one() }
    }

    /// s_m for m = 0, 1, 2, ... on successive calls.
    pub fn next_value(&mut self) -> FFElem {
        let out = self.prev.clone();
        let next = self.t.mul(&self.cur).sub(&self.delta.mul(&self.prev));
        self.prev = self.cur.clone();
        self.cur = next;
        out
    }
}

/// Eigenvalue-based classification of GL elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlType {
    /// distinct eigenvalues in F_d
    Type1,
    /// distinct conjugate eigenvalues in the quadratic extension
    Type2,
    /// a repeated eigenvalue
    Type3,
}

/// Classification outcome for one GL_p element.
#[derive(Clone, Debug)]
pub struct CyclerReport {
    pub gl_type: GlType,
    /// least m ≥ 1 with G^m scalar
    pub suborder: u64,
    /// type-2 exponent: eigenvalues are η^r and η^{dr}
    pub r: Option<u64>,
    /// half the multiplicative order of det(G) in F_p^*, when that order is
    /// even
    pub m0: Option<u32>,
    pub delta: u32,
    pub is_cycler: bool,
}

/// Shared per-field data for classification: the quadratic extension and η.
pub struct Classifier {
    pub quad: QuadExt,
}

impl Classifier {
    pub fn new(f: &Arc<FField>) -> Result<Classifier> {
        Ok(Classifier { quad: QuadExt::new(f)? })
    }

    pub fn field(&self) -> &Arc<FField> {
        &self.quad.base
    }

    /// Suborder, type, and the cycling decision for G.
    pub fn classify(&self, g: &GLpMat) -> CyclerReport {
        let f = self.field();
        let d = f.order();
        let t = g.trace();
        let delta_elem = f.from_int(g.delta() as i64);
        let disc = t.mul(&t).sub(&f.from_int(4).mul(&delta_elem));
        let gl_type = match disc.legendre() {
            1 => GlType::Type1,
            -1 => GlType::Type2,
            _ => GlType::Type3,
        };
        let suborder = if g.is_scalar() {
            1
        } else {
            let mut s = SmSequence::new(t.clone(), delta_elem.clone());
            s.next_value(); // s_0
            let mut m = 1u64;
            loop {
                if s.next_value().is_zero() {
                    break m;
                }
                m += 1;
                assert!(m <= d + 1, "suborder is bounded by d+1");
            }
        };
        let r = if gl_type == GlType::Type2 {
            // λ₊ = (t + j)/2 with j = √(t²-4Δ) in the extension; r is the
            // discrete log of λ₊ base η
            let ext_disc = self.quad.embed(&disc);
            let j = ext_disc.sqrt().expect("non-squares of F_d are squares in F_d²");
            let inv2 = self.quad.ext.from_int(2).inv().unwrap();
            let lam = self.quad.embed(&t).add(&j).mul(&inv2);
            let bound = (f.p() as u64 - 1) * (d + 1);
            let mut pw = self.quad.ext.one();
            let mut found = None;
            for e in 0..bound {
                if pw == lam {
                    found = Some(e);
                    break;
                }
                pw = pw.mul(&self.quad.eta);
            }
            // the eigenvalue pair is {η^r, η^{dr}}; which one the square-root
            // branch picked is arbitrary, so normalize to the smaller exponent
            found.map(|e| e.min(e * d % bound))
        } else {
            None
        };
        let ord = mult_order_mod_p(g.delta(), f.p());
        let m0 = if ord.is_multiple_of(2) { Some(ord / 2) } else { None };
        let is_cycler = gl_type == GlType::Type2
            && f.n() % 2 == 1
            && r.is_some_and(|r| r.gcd(&(d + 1)) == 1);
        debug_assert_eq!(is_cycler, suborder == d + 1 && gl_type == GlType::Type2);
        CyclerReport { gl_type, suborder, r, m0, delta: g.delta(), is_cycler }
    }
}

fn mult_order_mod_p(x: u32, p: u32) -> u32 {
    let mut acc = x as u64 % p as u64;
    let mut m = 1;
    while acc != 1 {
        acc = acc * x as u64 % p as u64;
        m += 1;
    }
    m
}

/// The canonical cycler G₀ = [[0, -η^{d+1}], [1, η + η^d]], whose entries lie
/// in F_d; exists exactly when the extension degree n is odd.
pub struct CanonicalCycler {
    pub exists: bool,
    pub g0: Option<GLpMat>,
}

pub fn cycler_canonical(f: &Arc<FField>) -> Result<CanonicalCycler> {
    if f.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if f.n().is_multiple_of(2) {
        return Ok(CanonicalCycler { exists: false, g0: None });
    }
    let q = QuadExt::new(f)?;
    let d = f.order();
    let top = q.eta.pow(d + 1).neg();
    let tr = q.eta.add(&q.eta.pow(d));
    let top_base = q
        .retract(&top)
        .expect("η^{d+1} lies in the base field");
    let tr_base = q.retract(&tr).expect("η + η^d lies in the base field");
    let g0 = GLpMat::new([f.zero(), top_base, f.one(), tr_base])?;
    Ok(CanonicalCycler { exists: true, g0: Some(g0) })
}

/// Exhaustive scan of GL_p(2, F_d).
pub struct CyclerEnumeration {
    pub total_glp: u64,
    pub cyclers: u64,
    /// a few representatives, in scan order
    pub sample: Vec<GLpMat>,
}

/// Counts MUB-cyclers by scanning every 2×2 matrix with determinant in
/// F_p \ {0}. Feasible for d ≤ 11 by default; d ≤ 19 behind the long-run
/// flag.
pub fn enumerate_cyclers(f: &Arc<FField>, long_run: bool) -> Result<CyclerEnumeration> {
    let d = f.order();
    if d > 19 || (d > 11 && !long_run) {
        return Err(Error::GuardExceeded(format!("GL scan over {} matrices", d.pow(4))));
    }
    let cls = Classifier::new(f)?;
    let els: Vec<FFElem> = f.elements().collect();
    // partition the scan by the first matrix row
    let rows: Vec<(usize, usize)> = (0..els.len())
        .flat_map(|a| (0..els.len()).map(move |b| (a, b)))
        .collect();
    let partials: Vec<(u64, u64, Vec<GLpMat>)> = rows
        .par_iter()
        .map(|&(ai, bi)| {
            let mut total = 0u64;
            let mut cyclers = 0u64;
            let mut sample = vec![];
            for c in &els {
                for e in &els {
                    let m = [els[ai].clone(), els[bi].clone(), c.clone(), e.clone()];
                    if let Ok(g) = GLpMat::new(m) {
                        total += 1;
                        if cls.classify(&g).is_cycler {
                            cyclers += 1;
                            if sample.len() < 2 {
                                sample.push(g);
                            }
                        }
                    }
                }
            }
            (total, cyclers, sample)
        })
        .collect();
    let mut out = CyclerEnumeration { total_glp: 0, cyclers: 0, sample: vec![] };
    for (t, c, s) in partials {
        out.total_glp += t;
        out.cyclers += c;
        if out.sample.len() < 8 {
            out.sample.extend(s);
        }
    }
    Ok(out)
}

/// Exact eigenvector data of a MUB-cycling g-unitary.
pub struct CyclerEigenvector {
    pub report: CyclerReport,
    /// dim of the unit eigenspace of U_{G^{2m₀}} (must be 1)
    pub s1_dim: usize,
    /// the eigenvalue of U_G on the raw nullspace vector, before rescaling
    pub lambda: CycloNum,
    /// the Hilbert-90 witness with λ = μ / g(μ)
    pub mu: CycloNum,
    /// exact unit-eigenvalue eigenvector: U_G ψ = ψ
    pub psi: ExactVec,
    /// parity eigenvalue (-1)^{(p-1)/2}
    pub parity_sign: i8,
}

/// Extracts the exact eigenvector of a MUB-cycler: nullspace of
/// U_{G^{2m₀}} - 1 (one-dimensional), eigenvalue λ of U_G on it, and the
/// Hilbert-90 rescaling to eigenvalue exactly 1.
pub fn cycler_eigenvector(g: &GLpMat) -> Result<CyclerEigenvector> {
    let f = g.field().clone();
    let cls = Classifier::new(&f)?;
    let report = cls.classify(g);
    if !report.is_cycler {
        return Err(Error::Invalid("not a MUB-cycler".into()));
    }
    let two_m0 = 2 * report.m0.expect("cyclers have even determinant order");
    let gm = g.pow(two_m0);
    // G^{2m₀} has determinant Δ^{2m₀} = 1: an ordinary symplectic element
    let s = SympGal::new(gm.m.clone())?;
    let u = symp_unitary_galois(&s)?;
    let n = u.conductor();
    let d = f.order() as usize;
    let m = u.sub(&ExactMat::identity(n, d));
    let ns = exact_nullspace(&m);
    if ns.len() != 1 {
        return Err(Error::Invalid(format!(
            "unit eigenspace of U_(G^2m0) has dimension {}, expected 1",
            ns.len()
        )));
    }
    let psi0 = ns.into_iter().next().unwrap();
    let ug = GUnitary::new(g)?;
    let w = ug.apply(&psi0);
    let lead = psi0
        .iter()
        .position(|c| !c.is_zero())
        .expect("nullspace vector is non-zero");
    let lambda = w[lead].div(&psi0[lead])?;
    for (wi, pi) in w.iter().zip(&psi0) {
        if *wi != lambda.try_mul(pi)? {
            return Err(Error::Invalid("nullspace vector is not a U_G eigenvector".into()));
        }
    }
    let mu = hilbert90_split(&lambda, &ug.gal, two_m0)?;
    let psi: ExactVec = psi0.iter().map(|c| mu.try_mul(c).unwrap()).collect();
    debug_assert_eq!(ug.apply(&psi), psi);
    // parity check A ψ = (-1)^{(p-1)/2} ψ
    let a = parity_op(&f)?;
    let apsi = a.matvec(&psi);
    let sign: i8 = if ((f.p() - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let expect: ExactVec = psi
        .iter()
        .map(|c| c.mul_rational(&rat(sign as i64, 1)))
        .collect();
    if apsi != expect {
        return Err(Error::Invalid("parity eigenvalue mismatch".into()));
    }
    Ok(CyclerEigenvector {
        report,
        s1_dim: 1,
        lambda,
        mu,
        psi,
        parity_sign: sign,
    })
}

/// Balancedness verdict with the exact per-basis probability multisets.
pub struct BalancedReport {
    pub balanced: bool,
    /// sorted exact probabilities per basis (d+1 rows of d entries)
    pub multisets: Vec<Vec<CycloNum>>,
    /// Σ_v p² = 2/(d+1) in every basis (the minimum-uncertainty property)
    pub min_uncertainty: bool,
}

/// Computes all d(d+1) outcome probabilities of ψ exactly and compares the
/// per-basis multisets. Balancedness is a sharp algebraic property here: the
/// probabilities are exact real cyclotomic numbers and the comparison is
/// exact equality of sorted coefficient vectors.
pub fn verify_balanced(psi: &[CycloNum], f: &Arc<FField>) -> Result<BalancedReport> {
    let mub = crate::clifford::mub_standard(f)?;
    let n = 4 * f.p();
    let d = f.order() as usize;
    let mut norm = CycloNum::zero(n);
    for c in psi {
        norm = &norm + &c.abs_sq();
    }
    if norm.is_zero() {
        return Err(Error::Invalid("zero vector".into()));
    }
    let norm_inv = norm.inv()?;
    let mut multisets = vec![];
    for b in mub.labels() {
        let basis = mub.basis(&b);
        let mut probs: Vec<CycloNum> = (0..d)
            .map(|v| {
                let mut ip = CycloNum::zero(n);
                for x in 0..d {
                    ip = &ip + &basis[(x, v)].conj().try_mul(&psi[x]).unwrap();
                }
                ip.abs_sq().try_mul(&norm_inv).unwrap()
            })
            .collect();
        probs.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        multisets.push(probs);
    }
    let balanced = multisets.iter().all(|m| m == &multisets[0]);
    let target = CycloNum::from_rational(n, rat(2, d as i64 + 1));
    let min_uncertainty = multisets.iter().all(|probs| {
        let mut acc = CycloNum::zero(n);
        for p in probs {
            acc = &acc + &p.try_mul(p).unwrap();
        }
        acc == target
    });
    Ok(BalancedReport { balanced, multisets, min_uncertainty })
}

/// Wigner function of the distinguished balanced state, with its exact
/// density-matrix reconstruction.
pub struct WignerReport {
    pub d: u32,
    /// row-major d×d grid of W values (float embedding of the exact grid)
    pub grid: Vec<f64>,
    pub exact_grid: Vec<CycloNum>,
    pub sum_is_one: bool,
    pub rho_is_rank1_projector: bool,
    pub rho_invariant_under_cycler: bool,
    /// the cycler built from η whose eigenvector the state is
    pub g: GLpMat,
    pub rho: ExactMat,
}

/// W_p = (1/(d(d+1)))·(1 - d·δ_{p,0} + Σ_{x≠0} l(x²+1)·ω^{tr(x p₁² + x p₂²)})
/// for d = 3 mod 4; the reconstructed ρ = Σ W_p A_p is the rank-1 projector
/// onto the balanced state fixed by the rotation-like cycler.
pub fn balanced_wigner(f: &Arc<FField>) -> Result<WignerReport> {
    let d = f.order();
    if d % 4 != 3 {
        return Err(Error::Invalid(format!("d = {d} is not 3 mod 4")));
    }
    let n = 4 * f.p();
    let dd = d as usize;
    let els: Vec<FFElem> = f.elements().collect();
    let scale = CycloNum::from_rational(n, rat(1, (d * (d + 1)) as i64));
    let mut exact_grid = Vec::with_capacity(dd * dd);
    for p1 in &els {
        for p2 in &els {
            let mut acc = CycloNum::one(n);
            if p1.is_zero() && p2.is_zero() {
                acc = &acc - &CycloNum::from_int(n, d as i64);
            }
            let p1sq = p1.mul(p1);
            let p2sq = p2.mul(p2);
            for x in els.iter().skip(1) {
                let l = x.mul(x).add(&f.one()).legendre() as i64;
                if l == 0 {
                    continue;
                }
                let e = x.mul(&p1sq).add(&x.mul(&p2sq)).trace();
                let term = CycloNum::root_of_unity(n, 4 * e as i64).mul_rational(&rat(l, 1));
                acc = &acc + &term;
            }
            exact_grid.push(acc.try_mul(&scale)?);
        }
    }
    let mut total = CycloNum::zero(n);
    for w in &exact_grid {
        total = &total + w;
    }
    let sum_is_one = total == CycloNum::one(n);
    // ρ = Σ_p W_p A_p
    let mut rho = ExactMat::zeros(n, dd, dd);
    for (i, p1) in els.iter().enumerate() {
        for (j, p2) in els.iter().enumerate() {
            let a = phase_point_op(f, p1, p2)?;
            rho = rho.add(&a.scale(&exact_grid[i * dd + j]));
        }
    }
    let rho_is_rank1_projector =
        rho.matmul(&rho) == rho && rho.trace() == CycloNum::one(n) && !rho.is_zero();
    // the rotation-like cycler: G = [[α, β], [-β, α]] with α = (η + η^d)/2,
    // β = i_M (η - η^d)/2
    let q = QuadExt::new(f)?;
    let im = q.i_mod().expect("d = 3 mod 4 has a modular i");
    let inv2 = q.ext.from_int(2).inv()?;
    let alpha = q.retract(&q.eta.add(&q.eta.pow(d)).mul(&inv2)).unwrap();
    let beta = q
        .retract(&im.mul(&q.eta.sub(&q.eta.pow(d))).mul(&inv2))
        .unwrap();
    let g = GLpMat::new([alpha.clone(), beta.clone(), beta.neg(), alpha])?;
    let ug = GUnitary::new(&g)?;
    let rho_invariant_under_cycler = ug.conjugate_matrix(&rho) == rho;
    let grid = exact_grid.iter().map(|c| c.to_c64().re).collect();
    Ok(WignerReport {
        d: d as u32,
        grid,
        exact_grid,
        sum_is_one,
        rho_is_rank1_projector,
        rho_invariant_under_cycler,
        g,
        rho,
    })
}

/// Expected orbit size for the d = 19 long run (equals 19³·18/2; recorded for
/// the optional run behind the guard).
pub const D19_EXPECTED_ORBIT: u64 = 61_731;

/// Outcome of the orbit count.
pub struct OrbitCount {
    pub count: u64,
    /// d³(d-1)/2, the conjectured census
    pub formula: u64,
}

/// Projective canonical form: scale so the first non-zero component is 1.
fn canonical_state(v: &[CycloNum]) -> ExactVec {
    let lead = v.iter().find(|c| !c.is_zero()).expect("non-zero state");
    let inv = lead.inv().expect("non-zero leading component");
    v.iter().map(|c| c.try_mul(&inv).unwrap()).collect()
}

fn state_key(v: &[CycloNum]) -> Vec<u8> {
    use num_traits::Zero;
    let mut out = vec![];
    for c in v {
        for r in c.coeffs() {
            if r.is_zero() {
                out.push(0xfe);
                continue;
            }
            let (s, bytes) = r.numer().to_bytes_le();
            out.push(if s == num_bigint::Sign::Minus { 1 } else { 2 });
            out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&bytes);
            let (_, dbytes) = r.denom().to_bytes_le();
            out.extend_from_slice(&(dbytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&dbytes);
        }
        out.push(0xff);
    }
    out
}

enum OrbitGen {
    Matrix(ExactMat),
    Conjugation,
}

impl OrbitGen {
    fn apply(&self, v: &[CycloNum]) -> ExactVec {
        match self {
            OrbitGen::Matrix(m) => m.matvec(v),
            OrbitGen::Conjugation => v.iter().map(|c| c.conj()).collect(),
        }
    }
}

/// Breadth-first orbit of the canonical cycler's balanced state under the
/// extended Clifford group (symplectic generators, displacements, complex
/// conjugation), deduplicated by exact projective canonical form. The count
/// is compared against d³(d-1)/2 by the caller.
pub fn balanced_orbit_count(f: &Arc<FField>, long_run: bool) -> Result<OrbitCount> {
    let d = f.order();
    if d > 19 || (d > 11 && !long_run) {
        // d = 19 holds ~62k states of 19 exact components (~0.5 GB of keys
        // plus frontier copies): a long run by this artifact's standards.
        return Err(Error::GuardExceeded(format!("orbit scan in d = {d}")));
    }
    let canon = cycler_canonical(f)?;
    let g0 = canon.g0.ok_or_else(|| {
        Error::Invalid("no cycler exists (even extension degree)".into())
    })?;
    let eig = cycler_eigenvector(&g0)?;
    let start = canonical_state(&eig.psi);
    // generators: SL(2) generators, displacements, and conjugation
    let mut gens: Vec<OrbitGen> = vec![];
    let theta = f.theta();
    for s in [
        SympGal::from_ints(f, [1, 1, 0, 1])?,
        SympGal::new([f.one(), theta.clone(), f.zero(), f.one()])?,
        SympGal::from_ints(f, [0, 1, -1, 0])?,
    ] {
        gens.push(OrbitGen::Matrix(symp_unitary_galois(&s)?));
    }
    for (a, b) in [
        (f.one(), f.zero()),
        (f.zero(), f.one()),
        (theta.clone(), f.zero()),
        (f.zero(), theta),
    ] {
        gens.push(OrbitGen::Matrix(displacement_galois(f, &a, &b)?));
    }
    gens.push(OrbitGen::Conjugation);
    let mut visited: HashSet<Vec<u8>> = HashSet::new();
    visited.insert(state_key(&start));
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let next: Vec<ExactVec> = frontier
            .par_iter()
            .flat_map_iter(|state| {
                gens.iter().map(move |g| canonical_state(&g.apply(state)))
            })
            .collect();
        frontier = vec![];
        for s in next {
            let key = state_key(&s);
            if visited.insert(key) {
                frontier.push(s);
            }
        }
    }
    let formula = d * d * d * (d - 1) / 2;
    Ok(OrbitCount { count: visited.len() as u64, formula })
}

/// The Möbius orbit of basis 0 under a cycler visits all d+1 labels.
pub fn mobius_cycle_length(g: &GLpMat) -> usize {
    let f = g.field();
    let mut seen = HashSet::new();
    let mut b = BasisLabel::Fin(f.zero());
    loop {
        let key = match &b {
            BasisLabel::Fin(x) => f.index_of(x) as i64,
            BasisLabel::Inf => -1,
        };
        if !seen.insert(key) {
            break;
        }
        b = mobius_action(&g.m, &b);
    }
    seen.len()
}
