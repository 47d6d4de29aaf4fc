//! The winding-number pairing `<rho, c> = (1 / 2 pi i) sum_j k_j Tr log(
//! rho(a_j b_j) rho(b_j)^-1 rho(a_j)^-1)` and the certificate that
//! `rho_n` stays at least 1/24 away from every genuine representation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::cohomology::{boundary2, pair_cocycle_cycle, Chain2, Cocycle, PolyCocycle};
use crate::error::{Error, Result};
use crate::group::{GroupElement, MalcevGroup};
use crate::representation::{build_rho, is_admissible, DenseMatrix, NormKind};

pub const LOG_TOL: f64 = 1e-14;
pub const LOG_MAX_TERMS: usize = 200;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const NORM_MARGIN: f64 = 1e-8;
/// Radius within which a perturbation of a genuine representation must
/// still pair to zero.
pub const STABILITY_RADIUS: f64 = 1.0 / 24.0;

/// `log(M) = sum_{k>=1} (-1)^{k+1} (M - I)^k / k`, requiring `||M - I|| < 1`.
/// Stops once the Frobenius norm of a term (an upper bound on its operator
/// norm) drops below `tol`.
pub fn matrix_log_near_identity(m: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let n = m.dim();
    let x = m.sub(&DenseMatrix::identity(n))?;
    let dist = x.operator_norm()?;
    if dist + NORM_MARGIN >= 1.0 {
        return Err(Error::TooFarFromIdentity(dist));
    }
    let mut sum = DMatrix::<Complex64>::zeros(n, n);
    let mut power = x.0.clone();
    let mut last_norm = f64::INFINITY;
    for k in 1..=LOG_MAX_TERMS {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = &power * Complex64::new(sign / k as f64, 0.0);
        last_norm = term.norm();
        sum += term;
        if last_norm < tol {
            return Ok(DenseMatrix(sum));
        }
        power = &power * &x.0;
    }
    Err(Error::SeriesNotConverged {
        terms: LOG_MAX_TERMS,
        last_norm,
    })
}

/// Matrix exponential by Taylor series with scaling and squaring.
pub fn expm(a: &DenseMatrix) -> DenseMatrix {
    let n = a.dim();
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = &a.0 * Complex64::new(0.5f64.powi(squarings as i32), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=60 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    DenseMatrix(result)
}

/// Which product sits inside the logarithm for the term `[a|b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindingOrder {
    /// `rho(ab) rho(b)^-1 rho(a)^-1`
    Summand,
    /// `rho(ab) rho(a)^-1 rho(b)^-1`
    Precondition,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingResult {
    pub order: WindingOrder,
    pub raw: f64,
    /// Real part of `(1 / 2 pi i) sum k_j Tr log(...)`; zero for unitaries.
    pub imaginary_part: f64,
    pub rounded: Option<i64>,
    pub residual: f64,
    pub is_cycle: bool,
    /// Operator norm of each log argument minus the identity.
    pub per_term_distances: Vec<f64>,
    pub per_term_log_norms: Vec<f64>,
}

pub fn winding_pairing<F>(g: &MalcevGroup, rho: F, c: &Chain2) -> Result<PairingResult>
where
    F: Fn(&GroupElement) -> Result<DenseMatrix>,
{
    winding_pairing_ordered(g, rho, c, WindingOrder::Summand)
}

pub fn winding_pairing_ordered<F>(g: &MalcevGroup, rho: F, c: &Chain2, order: WindingOrder) -> Result<PairingResult>
where
    F: Fn(&GroupElement) -> Result<DenseMatrix>,
{
    let mut images: BTreeMap<GroupElement, (DenseMatrix, DenseMatrix)> = BTreeMap::new();
    for x in c.support(g)? {
        let m = rho(&x)?;
        let inv = m.inverse()?;
        images.insert(x, (m, inv));
    }
    let mut total = Complex64::zero();
    let mut distances = Vec::with_capacity(c.terms().len());
    let mut log_norms = Vec::with_capacity(c.terms().len());
    for (index, (k, a, b)) in c.terms().iter().enumerate() {
        let ab = g.multiply(a, b)?;
        let (first, second) = match order {
            WindingOrder::Summand => (b, a),
            WindingOrder::Precondition => (a, b),
        };
        let arg = images[&ab].0.mul(&images[first].1)?.mul(&images[second].1)?;
        let dist = arg.sub(&DenseMatrix::identity(arg.dim()))?.operator_norm()?;
        distances.push(dist);
        if dist + NORM_MARGIN >= 1.0 {
            return Err(Error::TermOutOfRange { index, norm: dist });
        }
        let log = matrix_log_near_identity(&arg, LOG_TOL)?;
        log_norms.push(log.frobenius_norm());
        let weight = k.to_f64().unwrap_or(f64::NAN);
        total += log.trace() * weight;
    }
    // (1 / 2 pi i) * tr = im(tr) / 2 pi - i re(tr) / 2 pi
    let raw = total.im / (2.0 * PI);
    let imaginary_part = -total.re / (2.0 * PI);
    let nearest = raw.round();
    let residual = (raw - nearest).abs();
    let is_cycle = boundary2(g, c)?.is_empty();
    let rounded = (is_cycle && residual < RESIDUAL_TOL).then_some(nearest as i64);
    Ok(PairingResult {
        order,
        raw,
        imaginary_part,
        rounded,
        residual,
        is_cycle,
        per_term_distances: distances,
        per_term_log_norms: log_norms,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateEntry {
    pub n: usize,
    pub status: String,
    pub pairing: Option<PairingResult>,
    /// The same pairing with the other ordering inside the logarithm.
    pub precondition_order_pairing: Option<PairingResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub group: String,
    pub cocycle: String,
    pub cycle: String,
    pub cocycle_pairing: String,
    pub expected_winding: String,
    pub n_list: Vec<usize>,
    pub entries: Vec<CertificateEntry>,
    pub distance_lower_bound: f64,
    pub statement: String,
    pub log_tol: f64,
    pub residual_tol: f64,
    pub norm_margin: f64,
}

impl CertificateReport {
    pub fn certified(&self) -> impl Iterator<Item = &CertificateEntry> {
        self.entries.iter().filter(|e| e.pairing.is_some())
    }
}

/// For each admissible `n`, checks `<rho_n, c> = -<sigma, c>`; a family
/// within 1/24 of a genuine representation would pair to 0 instead.
pub fn certify_nonperturbability(sigma: &PolyCocycle, c: &Chain2, n_list: &[usize]) -> Result<CertificateReport> {
    let g = sigma.group().clone();
    let boundary = boundary2(&g, c)?;
    if !boundary.is_empty() {
        return Err(Error::NotACycle(boundary.len()));
    }
    let s = pair_cocycle_cycle(sigma, c)?;
    if s.is_zero() {
        return Err(Error::TorsionPairing);
    }
    let expected = -&s;
    let mut entries = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if !is_admissible(sigma, n) {
            entries.push(CertificateEntry {
                n,
                status: "skipped:not_coprime".into(),
                pairing: None,
                precondition_order_pairing: None,
            });
            continue;
        }
        let rho = |x: &GroupElement| build_rho(sigma, n, x).map(|m| m.to_dense());
        let p = winding_pairing(&g, rho, c)?;
        let alt = winding_pairing_ordered(&g, rho, c, WindingOrder::Precondition)?;
        if p.rounded.map(BigInt::from) != Some(expected.clone()) {
            return Err(Error::PairingMismatch {
                n,
                expected: expected.clone(),
                got: format!("raw {} (residual {})", p.raw, p.residual),
            });
        }
        entries.push(CertificateEntry {
            n,
            status: "certified".into(),
            pairing: Some(p),
            precondition_order_pairing: Some(alt),
        });
    }
    if entries.iter().all(|e| e.pairing.is_none()) {
        return Err(Error::NoAdmissibleDimension);
    }
    let statement = format!(
        "For each certified n, <rho_n, c> = {expected} != 0. Any unitary family within 1/24 in \
         operator norm of a genuine representation on the elements a_j, b_j, a_j b_j has pairing 0 \
         with c, so rho_n is at distance at least 1/24 from every genuine representation in operator \
         norm, and hence also in Frobenius norm."
    );
    Ok(CertificateReport {
        group: g.name().to_string(),
        cocycle: sigma.label(),
        cycle: c.to_string(),
        cocycle_pairing: s.to_string(),
        expected_winding: expected.to_string(),
        n_list: n_list.to_vec(),
        entries,
        distance_lower_bound: STABILITY_RADIUS,
        statement,
        log_tol: LOG_TOL,
        residual_tol: RESIDUAL_TOL,
        norm_margin: NORM_MARGIN,
    })
}

fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> DenseMatrix {
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    DenseMatrix(h)
}

/// `exp(i H)` with `H` Hermitian of operator norm `t * 2 asin(max_dist / 2)`
/// for a uniform `t` in `(0, 1]`, so `||U - I|| <= max_dist`.
pub fn random_unitary_near_identity<R: Rng>(rng: &mut R, n: usize, max_dist: f64) -> Result<DenseMatrix> {
    let theta = 2.0 * (max_dist / 2.0).min(1.0).asin();
    let h = random_hermitian(rng, n);
    let hn = h.operator_norm()?;
    let t: f64 = 1.0 - rng.gen_range(0.0..1.0);
    let scale = if hn > 0.0 { t * theta / hn } else { 0.0 };
    Ok(expm(&h.scale(Complex64::new(0.0, scale))))
}

/// `exp(K)` with `K` skew-adjoint and `||K|| < eps`; `||W - I|| < eps`.
pub fn random_perturbation<R: Rng>(rng: &mut R, n: usize, eps: f64) -> Result<DenseMatrix> {
    let h = random_hermitian(rng, n);
    let hn = h.operator_norm()?;
    let t: f64 = rng.gen_range(0.0..0.999);
    let scale = if hn > 0.0 { t * eps / hn } else { 0.0 };
    Ok(expm(&h.scale(Complex64::new(0.0, scale))))
}

/// A direct sum of characters of `Z^m`: `x -> diag(exp(2 pi i <theta_k, x>))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterSum {
    pub frequencies: Vec<Vec<f64>>,
}

impl CharacterSum {
    pub fn trivial(dim: usize, m: usize) -> Self {
        CharacterSum {
            frequencies: vec![vec![0.0; m]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.frequencies.len()
    }

    pub fn matrix(&self, x: &GroupElement) -> Result<DenseMatrix> {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n);
        for (k, freq) in self.frequencies.iter().enumerate() {
            if freq.len() != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: freq.len(),
                    found: x.len(),
                });
            }
            let angle: f64 = freq
                .iter()
                .zip(x.coords())
                .map(|(f, c)| f * c.to_f64().unwrap_or(f64::NAN))
                .sum();
            m.0[(k, k)] = Complex64::from_polar(1.0, 2.0 * PI * angle);
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullTrial {
    pub index: usize,
    pub raw: f64,
    pub rounded: Option<i64>,
    pub residual: f64,
    pub max_perturbation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullTestReport {
    pub epsilon: f64,
    pub seed: u64,
    pub multiplicative: bool,
    pub max_multiplicativity_defect: f64,
    pub trials: Vec<NullTrial>,
}

impl NullTestReport {
    pub fn passed(&self) -> bool {
        self.multiplicative
            && self
                .trials
                .iter()
                .all(|t| t.rounded == Some(0) && t.max_perturbation <= self.epsilon)
    }
}

/// Perturbs a genuine representation on the support of `c` by random
/// unitaries within `eps` and checks that every perturbed family pairs to 0.
pub fn perturbation_null_test<F>(
    g: &MalcevGroup,
    rep: F,
    c: &Chain2,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<NullTestReport>
where
    F: Fn(&GroupElement) -> Result<DenseMatrix>,
{
    let mut worst = 0.0f64;
    for (_, a, b) in c.terms() {
        let lhs = rep(&g.multiply(a, b)?)?;
        let rhs = rep(a)?.mul(&rep(b)?)?;
        worst = worst.max(lhs.sub(&rhs)?.frobenius_norm());
    }
    let support = c.support(g)?;
    let base: BTreeMap<GroupElement, DenseMatrix> = support
        .iter()
        .map(|x| Ok((x.clone(), rep(x)?)))
        .collect::<Result<_>>()?;
    let mut rng = crate::report::SampleConfig::new(trials, 0, seed).rng();
    let mut out = Vec::with_capacity(trials);
    for index in 0..trials {
        let mut perturbed = BTreeMap::new();
        let mut max_perturbation = 0.0f64;
        for x in &support {
            let r = &base[x];
            let w = random_perturbation(&mut rng, r.dim(), eps)?;
            let rp = r.mul(&w)?;
            max_perturbation = max_perturbation.max(rp.sub(r)?.operator_norm()?);
            perturbed.insert(x.clone(), rp);
        }
        let p = winding_pairing(
            g,
            |x: &GroupElement| {
                perturbed
                    .get(x)
                    .cloned()
                    .ok_or_else(|| Error::Validation(format!("{x} outside the support")))
            },
            c,
        )?;
        out.push(NullTrial {
            index,
            raw: p.raw,
            rounded: p.rounded,
            residual: p.residual,
            max_perturbation,
        });
    }
    Ok(NullTestReport {
        epsilon: eps,
        seed,
        multiplicative: worst < 1e-10,
        max_multiplicativity_defect: worst,
        trials: out,
    })
}

pub fn operator_distance(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    crate::representation::norm(&a.sub(b)?, NormKind::Operator)
}
