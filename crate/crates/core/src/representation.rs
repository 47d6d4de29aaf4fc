//! Phase-shift unitaries `rho_n(x)`, dense complex matrices, norms,
//! multiplicativity defects and the Voiculescu pair.
//!
//! Indexing: `rho_n(x)` sends the basis vector `d_j` to
//! `exp(2 pi i p(x, j) / n) d_{j + x1}` with `j` taken mod `n`, starting at
//! `j = 0`. The Voiculescu matrix `v_n` has diagonal
//! `exp(2 pi i (j + 1) / n)`, so for the cocycle `x2*y1` one has
//! `u^a v^b = u^{-1} rho_n(a, b) u`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cohomology::{Cocycle, PolyCocycle};
use crate::error::{Error, Result};
use crate::group::GroupElement;

pub const UNIT_TOL: f64 = 1e-14;
pub const SCALAR_TOL: f64 = 1e-12;
pub const BOUND_SLACK: f64 = 1e-9;
pub const POWER_ITER_TOL: f64 = 1e-12;
pub const POWER_ITER_MAX: usize = 10_000;

/// `exp(2 pi i r / n)` for an integer residue `r`.
pub fn root_of_unity(r: &BigInt, n: usize) -> Complex64 {
    let nn = BigInt::from(n);
    let r = r.mod_floor(&nn).to_usize().expect("residue below n");
    // quarter turns exactly
    if (4 * r) % n == 0 {
        return [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][4 * r / n];
    }
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix(pub DMatrix<Complex64>);

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix(DMatrix::identity(n, n))
    }

    pub fn scalar(n: usize, c: Complex64) -> Self {
        DenseMatrix(DMatrix::identity(n, n) * c)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        DenseMatrix(DMatrix::from_fn(n, n, f))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    fn same_dim(&self, other: &DenseMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::MatrixDimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.same_dim(other)?;
        Ok(DenseMatrix(&self.0 * &other.0))
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.same_dim(other)?;
        Ok(DenseMatrix(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.same_dim(other)?;
        Ok(DenseMatrix(&self.0 - &other.0))
    }

    pub fn scale(&self, c: Complex64) -> DenseMatrix {
        DenseMatrix(&self.0 * c)
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.0
            .clone()
            .lu()
            .try_inverse()
            .map(DenseMatrix)
            .ok_or_else(|| Error::Validation("singular matrix".into()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn operator_norm(&self) -> Result<f64> {
        norm(self, NormKind::Operator)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Frobenius,
    Operator,
}

fn power_iteration(m: &DenseMatrix, start: nalgebra::DVector<Complex64>) -> Result<f64> {
    let mtm = m.0.adjoint() * &m.0;
    let mut v = start.normalize();
    let mut lambda = 0.0f64;
    for _ in 0..POWER_ITER_MAX {
        let w = &mtm * &v;
        let next = v.dotc(&w).re.max(0.0);
        let wn = w.norm();
        if wn == 0.0 {
            return Ok(0.0);
        }
        v = w / Complex64::new(wn, 0.0);
        if (next - lambda).abs() <= POWER_ITER_TOL * next.max(1e-300) {
            return Ok(next.sqrt());
        }
        lambda = next;
    }
    Err(Error::NoConvergence {
        iterations: POWER_ITER_MAX,
        lower_bound: lambda.sqrt(),
    })
}

/// Frobenius norm, or the largest singular value by power iteration on
/// `M* M` from the normalised all-ones vector.
pub fn norm(m: &DenseMatrix, kind: NormKind) -> Result<f64> {
    let frob = m.frobenius_norm();
    match kind {
        NormKind::Frobenius => Ok(frob),
        NormKind::Operator => {
            let n = m.dim();
            if n == 0 || frob == 0.0 {
                return Ok(0.0);
            }
            let ones = nalgebra::DVector::from_element(n, Complex64::one());
            let est = power_iteration(m, ones)?;
            // the operator norm is at least frob / sqrt(n); a start vector
            // orthogonal to the top singular space lands below that
            if est * (1.0 + 1e-9) < frob / (n as f64).sqrt() {
                let alt = nalgebra::DVector::from_fn(n, |j, _| {
                    Complex64::new(1.0 + (j as f64 * 0.7548776662).fract(), (j as f64 * 0.5698402910).fract())
                });
                return power_iteration(m, alt);
            }
            Ok(est)
        }
    }
}

/// Sends `d_j` to `phases[j] d_{j + shift}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseShiftMatrix {
    n: usize,
    shift: usize,
    phases: Vec<Complex64>,
}

impl PhaseShiftMatrix {
    pub fn new(shift: usize, phases: Vec<Complex64>) -> Result<Self> {
        let n = phases.len();
        if n == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        if let Some(j) = phases.iter().position(|z| (z.norm() - 1.0).abs() > UNIT_TOL) {
            return Err(Error::Validation(format!("phase {j} has modulus {}", phases[j].norm())));
        }
        Ok(PhaseShiftMatrix {
            n,
            shift: shift % n,
            phases,
        })
    }

    pub fn identity(n: usize) -> Self {
        PhaseShiftMatrix {
            n,
            shift: 0,
            phases: vec![Complex64::one(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// `self * other`.
    pub fn compose(&self, other: &PhaseShiftMatrix) -> Result<PhaseShiftMatrix> {
        if self.n != other.n {
            return Err(Error::MatrixDimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let phases = (0..n)
            .map(|j| other.phases[j] * self.phases[(j + other.shift) % n])
            .collect();
        Ok(PhaseShiftMatrix {
            n,
            shift: (self.shift + other.shift) % n,
            phases,
        })
    }

    pub fn adjoint(&self) -> PhaseShiftMatrix {
        let n = self.n;
        let phases = (0..n)
            .map(|k| self.phases[(k + n - self.shift) % n].conj())
            .collect();
        PhaseShiftMatrix {
            n,
            shift: (n - self.shift) % n,
            phases,
        }
    }

    pub fn pow(&self, k: i64) -> PhaseShiftMatrix {
        let base = if k < 0 { self.adjoint() } else { self.clone() };
        let mut acc = PhaseShiftMatrix::identity(self.n);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base).expect("equal dimensions");
        }
        acc
    }

    pub fn scale(&self, c: Complex64) -> PhaseShiftMatrix {
        PhaseShiftMatrix {
            n: self.n,
            shift: self.shift,
            phases: self.phases.iter().map(|z| z * c).collect(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n);
        for (j, z) in self.phases.iter().enumerate() {
            m.0[((j + self.shift) % self.n, j)] = *z;
        }
        m
    }

    /// The common phase if this is a scalar matrix, else the first index
    /// that breaks it.
    pub fn as_scalar(&self, tol: f64) -> std::result::Result<Complex64, (usize, String)> {
        if self.shift != 0 {
            return Err((0, format!("shift {} is not 0", self.shift)));
        }
        let c = self.phases[0];
        match self.phases.iter().position(|z| (z - c).norm() > tol) {
            None => Ok(c),
            Some(j) => Err((j, format!("phase {} differs from phase 0 = {}", self.phases[j], c))),
        }
    }

    /// Frobenius and operator norm of `self - other`; closed form when the
    /// shifts agree, dense otherwise.
    pub fn difference_norms(&self, other: &PhaseShiftMatrix) -> Result<(f64, f64)> {
        if self.n != other.n {
            return Err(Error::MatrixDimensionMismatch(self.n, other.n));
        }
        if self.shift == other.shift {
            let diffs: Vec<f64> = self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| (a - b).norm())
                .collect();
            let frob = diffs.iter().map(|d| d * d).sum::<f64>().sqrt();
            let op = diffs.iter().cloned().fold(0.0, f64::max);
            return Ok((frob, op));
        }
        let d = self.to_dense().sub(&other.to_dense())?;
        Ok((d.frobenius_norm(), norm(&d, NormKind::Operator)?))
    }
}

impl fmt::Display for PhaseShiftMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "shift {} phases [", self.shift)?;
        for (j, z) in self.phases.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, "]")
    }
}

pub fn check_coprime(sigma: &PolyCocycle, n: usize) -> Result<()> {
    let den = sigma.denominator();
    if !BigInt::from(n).gcd(den).is_one() {
        return Err(Error::NotCoprime {
            n,
            denominator: den.clone(),
        });
    }
    Ok(())
}

pub fn is_admissible(sigma: &PolyCocycle, n: usize) -> bool {
    n > 0 && check_coprime(sigma, n).is_ok()
}

fn residue(sigma: &PolyCocycle, x: &GroupElement, j: &BigInt, n: &BigInt) -> Result<BigInt> {
    Ok(sigma.eval_at(x, j)?.mod_floor(n))
}

/// `rho_n(x)`: shift `x1 mod n`, phase `exp(2 pi i p(x, j) / n)` at `j`.
pub fn build_rho(sigma: &PolyCocycle, n: usize, x: &GroupElement) -> Result<PhaseShiftMatrix> {
    if n == 0 {
        return Err(Error::Validation("dimension must be positive".into()));
    }
    check_coprime(sigma, n)?;
    sigma.group().check_element(x)?;
    let nn = BigInt::from(n);
    let phases = (0..n)
        .map(|j| Ok(root_of_unity(&residue(sigma, x, &BigInt::from(j), &nn)?, n)))
        .collect::<Result<Vec<_>>>()?;
    // p(x, j) mod n must be n-periodic in j
    let wrap = residue(sigma, x, &nn, &nn)?;
    let first = residue(sigma, x, &BigInt::zero(), &nn)?;
    if wrap != first {
        return Err(Error::Validation(format!(
            "p({x}, n) = {wrap} and p({x}, 0) = {first} differ mod {n}"
        )));
    }
    let shift = x.0[0].mod_floor(&nn).to_usize().expect("residue below n");
    Ok(PhaseShiftMatrix { n, shift, phases })
}

/// `chi_n(x, y) = exp(2 pi i p(x, y1) / n)`.
pub fn chi(sigma: &PolyCocycle, n: usize, x: &GroupElement, y: &GroupElement) -> Result<Complex64> {
    Ok(root_of_unity(&sigma.eval(x, y)?, n))
}

/// Checks `rho(xy) rho(y)^-1 rho(x)^-1 = chi(x, y)^-1 I` and returns `chi`.
pub fn chi_scalar_check(sigma: &PolyCocycle, n: usize, x: &GroupElement, y: &GroupElement) -> Result<Complex64> {
    let g = sigma.group();
    let xy = g.multiply(x, y)?;
    let rx = build_rho(sigma, n, x)?;
    let ry = build_rho(sigma, n, y)?;
    let rxy = build_rho(sigma, n, &xy)?;
    let t = rxy.compose(&ry.adjoint())?.compose(&rx.adjoint())?;
    let c = chi(sigma, n, x, y)?;
    let scalar = t.as_scalar(SCALAR_TOL).map_err(|(index, detail)| Error::NotScalar { index, detail })?;
    if (scalar - c.conj()).norm() > SCALAR_TOL {
        return Err(Error::NotScalar {
            index: 0,
            detail: format!("scalar {scalar} differs from chi^-1 = {}", c.conj()),
        });
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Defect {
    pub sigma_xy: String,
    pub frob: f64,
    pub op: f64,
    pub bound_frob: f64,
    pub bound_op: f64,
}

/// `|| rho(xy) - rho(x) rho(y) ||` in both norms against
/// `2 pi |sigma(x, y)| / sqrt(n)` and `2 pi |sigma(x, y)| / n`.
pub fn defect(sigma: &PolyCocycle, n: usize, x: &GroupElement, y: &GroupElement) -> Result<Defect> {
    let g = sigma.group();
    let xy = g.multiply(x, y)?;
    let rx = build_rho(sigma, n, x)?;
    let ry = build_rho(sigma, n, y)?;
    let rxy = build_rho(sigma, n, &xy)?;
    let (frob, op) = rxy.difference_norms(&rx.compose(&ry)?)?;
    let s = sigma.eval(x, y)?;
    let s_abs = s.to_f64().unwrap_or(f64::INFINITY).abs();
    let d = Defect {
        sigma_xy: s.to_string(),
        frob,
        op,
        bound_frob: 2.0 * PI * s_abs / (n as f64).sqrt(),
        bound_op: 2.0 * PI * s_abs / n as f64,
    };
    if d.frob > d.bound_frob + BOUND_SLACK || d.op > d.bound_op + BOUND_SLACK {
        return Err(Error::BoundViolated {
            witness: format!("n = {n}, x = {x}, y = {y}"),
            measured: d.frob.max(d.op),
            bound: if d.frob > d.bound_frob + BOUND_SLACK { d.bound_frob } else { d.bound_op },
        });
    }
    Ok(d)
}

/// `sqrt(n) |exp(-2 pi i s / n) - 1|`, the exact Frobenius defect.
pub fn exact_frobenius_defect(s: &BigInt, n: usize) -> f64 {
    (n as f64).sqrt() * (root_of_unity(&-s, n) - Complex64::one()).norm()
}

/// `u` the cyclic shift `d_j -> d_{j+1}`, `v = diag(exp(2 pi i (j + 1) / n))`.
pub fn voiculescu_pair(n: usize) -> (PhaseShiftMatrix, PhaseShiftMatrix) {
    assert!(n >= 1);
    let u = PhaseShiftMatrix {
        n,
        shift: 1 % n,
        phases: vec![Complex64::one(); n],
    };
    let v = PhaseShiftMatrix {
        n,
        shift: 0,
        phases: (0..n).map(|j| root_of_unity(&BigInt::from(j + 1), n)).collect(),
    };
    (u, v)
}

/// `|| u v u^-1 v^-1 - exp(-2 pi i / n) I ||_2`.
pub fn voiculescu_commutator_defect(n: usize) -> f64 {
    let (u, v) = voiculescu_pair(n);
    let c = u
        .compose(&v)
        .and_then(|p| p.compose(&u.adjoint()))
        .and_then(|p| p.compose(&v.adjoint()))
        .expect("equal dimensions");
    let target = PhaseShiftMatrix::identity(n).scale(root_of_unity(&BigInt::from(-1), n));
    c.difference_norms(&target).expect("equal dimensions").0
}

/// One row of a defect sweep; `defect` is `None` when `n` is not coprime to
/// the cocycle denominators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub x: String,
    pub y: String,
    pub sigma_xy: String,
    pub defect: Option<Defect>,
}

pub const SWEEP_CSV_HEADER: &str = "n,x,y,sigma_xy,frob_defect,frob_bound,op_defect,op_bound";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        match &self.defect {
            Some(d) => format!(
                "{},{},{},{},{},{},{},{}",
                self.n, self.x, self.y, self.sigma_xy, d.frob, d.bound_frob, d.op, d.bound_op
            ),
            None => format!("{},{},{},{},skipped:not_coprime,,,", self.n, self.x, self.y, self.sigma_xy),
        }
    }
}

/// Defects for every `(n, x, y)` in input order.
pub fn sweep(sigma: &PolyCocycle, ns: &[usize], pairs: &[(GroupElement, GroupElement)]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(ns.len() * pairs.len());
    for &n in ns {
        for (x, y) in pairs {
            let s = sigma.eval(x, y)?;
            let defect = if is_admissible(sigma, n) {
                Some(defect(sigma, n, x, y)?)
            } else {
                None
            };
            rows.push(SweepRow {
                n,
                x: x.to_semicolon_string(),
                y: y.to_semicolon_string(),
                sigma_xy: s.to_string(),
                defect,
            });
        }
    }
    Ok(rows)
}
