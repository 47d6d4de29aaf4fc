//! Torsion-free finitely generated nilpotent groups in Mal'cev coordinates.
//!
//! An element is the exponent vector `(x1, .., xm)` of its canonical form
//! `a1^x1 .. am^xm`, and multiplication is given by `m` polynomials
//! `law_i(x1..xm, y1..ym)` with rational coefficients and integer values.
//!
//! Laws must be triangular: `law_i = x_i + y_i + q_i` with `q_i` a
//! polynomial in the coordinates `1..i-1` of both arguments. This follows
//! from the central-series condition on a Mal'cev basis and is what makes
//! coordinate-wise inversion possible.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{law_vars, MultiPoly};
#[cfg(test)]
use crate::poly::Rational;
use crate::report::{random_element, CheckOutcome, SampleConfig, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<BigInt>);

impl GroupElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        GroupElement(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        GroupElement(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn identity(m: usize) -> Self {
        GroupElement(vec![BigInt::zero(); m])
    }

    /// The `i`-th Mal'cev generator (0-based), scaled by `k`.
    pub fn basis(m: usize, i: usize, k: i64) -> Self {
        let mut g = Self::identity(m);
        g.0[i] = BigInt::from(k);
        g
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Semicolon-joined coordinates, as used in CSV output.
    pub fn to_semicolon_string(&self) -> String {
        self.0
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug)]
pub struct MalcevGroup {
    name: String,
    hirsch: usize,
    law: Vec<MultiPoly>,
    // law_i - x_i - y_i
    corrections: Vec<MultiPoly>,
}

/// Groups compare by Hirsch length and law; the name is only a label.
impl PartialEq for MalcevGroup {
    fn eq(&self, other: &Self) -> bool {
        self.hirsch == other.hirsch && self.law == other.law
    }
}

impl MalcevGroup {
    /// Builds a group from its law. Only structural checks are made here;
    /// use [`validate_group`] for the group axioms.
    pub fn new(name: impl Into<String>, law: Vec<MultiPoly>) -> Result<Self> {
        let m = law.len();
        if m == 0 {
            return Err(Error::HirschTooSmall(0));
        }
        let vars = law_vars(m);
        if let Some(p) = law.iter().find(|p| p.vars() != vars.as_slice()) {
            return Err(Error::Parse(format!(
                "law polynomial over {:?}, expected {:?}",
                p.vars(),
                vars
            )));
        }
        let corrections = law
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let lin = &MultiPoly::var(vars.clone(), i) + &MultiPoly::var(vars.clone(), m + i);
                p - &lin
            })
            .collect();
        Ok(MalcevGroup {
            name: name.into(),
            hirsch: m,
            law,
            corrections,
        })
    }

    /// The free abelian group `Z^m`.
    pub fn lattice(m: usize) -> Self {
        let vars = law_vars(m);
        let law = (0..m)
            .map(|i| &MultiPoly::var(vars.clone(), i) + &MultiPoly::var(vars.clone(), m + i))
            .collect();
        MalcevGroup::new(format!("Z^{m}"), law).expect("lattice law is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn hirsch(&self) -> usize {
        self.hirsch
    }

    pub fn law(&self) -> &[MultiPoly] {
        &self.law
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.hirsch)
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement::basis(self.hirsch, i, 1)
    }

    pub fn check_element(&self, x: &GroupElement) -> Result<()> {
        if x.len() != self.hirsch {
            return Err(Error::DimensionMismatch {
                expected: self.hirsch,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let point: Vec<BigInt> = x.0.iter().chain(&y.0).cloned().collect();
        let coords = self
            .law
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.eval_integer(&point).map_err(|v| Error::NonIntegralValue {
                    what: format!("law_{} of {}", i + 1, self.name),
                    value: v.to_string(),
                    at: format!("x = {x}, y = {y}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupElement(coords))
    }

    /// Back-substitution `z_i = -x_i - q_i(x, z_<i)`; needs a triangular law.
    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        let m = self.hirsch;
        let mut point: Vec<BigInt> = x.0.iter().cloned().chain(std::iter::repeat(BigInt::zero()).take(m)).collect();
        for i in 0..m {
            let q = self.corrections[i].eval_integer(&point).map_err(|v| Error::NonIntegralValue {
                what: format!("q_{} of {}", i + 1, self.name),
                value: v.to_string(),
                at: format!("inverse of {x}"),
            })?;
            point[m + i] = -&x.0[i] - q;
        }
        Ok(GroupElement(point.split_off(m)))
    }

    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let xy = self.multiply(x, y)?;
        let xyx = self.multiply(&xy, &self.inverse(x)?)?;
        self.multiply(&xyx, &self.inverse(y)?)
    }

    pub fn power(&self, x: &GroupElement, k: &BigInt) -> Result<GroupElement> {
        let mut base = if k.is_negative() {
            self.inverse(x)?
        } else {
            x.clone()
        };
        let mut e = k.abs();
        let mut acc = self.identity();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if (&e % &two).is_one() {
                acc = self.multiply(&acc, &base)?;
            }
            e /= &two;
            if !e.is_zero() {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// The canonical homomorphism onto `Z`: the first exponent.
    pub fn canonical_hom(&self, x: &GroupElement) -> BigInt {
        x.0[0].clone()
    }

    fn identity_law_outcome(&self) -> CheckOutcome {
        let m = self.hirsch;
        let vars = law_vars(m);
        let xs: Vec<usize> = (0..m).collect();
        let ys: Vec<usize> = (m..2 * m).collect();
        for (i, p) in self.law.iter().enumerate() {
            let right = p.substitute_zero(&ys);
            let want = MultiPoly::var(vars.clone(), i);
            if right != want {
                let residue = &right - &want;
                let at_zero = residue.eval_int(&vec![BigInt::zero(); 2 * m]);
                return CheckOutcome::fail(
                    "identity",
                    i + 1,
                    format!("law_{}(x, 0) - x{} = {residue}; at x = 0 it is {at_zero}", i + 1, i + 1),
                );
            }
            let left = p.substitute_zero(&xs);
            let want = MultiPoly::var(vars.clone(), m + i);
            if left != want {
                let residue = &left - &want;
                return CheckOutcome::fail(
                    "identity",
                    i + 1,
                    format!("law_{}(0, y) - y{} = {residue}", i + 1, i + 1),
                );
            }
        }
        CheckOutcome::pass("identity", m, true)
    }

    fn triangularity_outcome(&self) -> CheckOutcome {
        let m = self.hirsch;
        for (i, q) in self.corrections.iter().enumerate() {
            let bad = (i..m).flat_map(|j| [j, m + j]).find(|&v| q.uses_var(v));
            if let Some(v) = bad {
                return CheckOutcome::fail(
                    "triangularity",
                    i + 1,
                    format!(
                        "law_{} - x{} - y{} = {q} involves {}",
                        i + 1,
                        i + 1,
                        i + 1,
                        q.vars()[v]
                    ),
                );
            }
        }
        CheckOutcome::pass("triangularity", m, true)
    }

    pub fn is_triangular(&self) -> bool {
        self.triangularity_outcome().passed
    }
}

/// Checks identity and triangularity symbolically, then integrality,
/// associativity and two-sided inverses on seeded random triples.
pub fn validate_group(g: &MalcevGroup, cfg: &SampleConfig) -> ValidationReport {
    let mut report = ValidationReport::new(format!("group {} (hirsch {})", g.name(), g.hirsch()));
    report.push(g.identity_law_outcome());
    let triangular = g.triangularity_outcome();
    let is_triangular = triangular.passed;
    report.push(triangular);

    let mut rng = cfg.rng();
    let m = g.hirsch();
    let mut integrality: Option<String> = None;
    let mut assoc: Option<String> = None;
    let mut inverse: Option<String> = None;
    for _ in 0..cfg.samples {
        let x = random_element(&mut rng, m, cfg.bound);
        let y = random_element(&mut rng, m, cfg.bound);
        let z = random_element(&mut rng, m, cfg.bound);
        let lhs = g.multiply(&x, &y).and_then(|xy| g.multiply(&xy, &z));
        let rhs = g.multiply(&y, &z).and_then(|yz| g.multiply(&x, &yz));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                if l != r && assoc.is_none() {
                    assoc = Some(format!("x = {x}, y = {y}, z = {z}: (xy)z = {l}, x(yz) = {r}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                if integrality.is_none() {
                    integrality = Some(e.to_string());
                }
            }
        }
        if is_triangular && inverse.is_none() {
            let e = g.identity();
            match g.inverse(&x) {
                Ok(xi) => {
                    let l = g.multiply(&x, &xi);
                    let r = g.multiply(&xi, &x);
                    match (l, r) {
                        (Ok(l), Ok(r)) if l == e && r == e => {}
                        (Ok(l), Ok(r)) => {
                            inverse = Some(format!("x = {x}, x^-1 = {xi}: x x^-1 = {l}, x^-1 x = {r}"))
                        }
                        (Err(err), _) | (_, Err(err)) => {
                            integrality.get_or_insert_with(|| err.to_string());
                        }
                    }
                }
                Err(err) => {
                    integrality.get_or_insert_with(|| err.to_string());
                }
            }
        }
    }
    let outcome = |name: &str, w: Option<String>| match w {
        None => CheckOutcome::pass(name, cfg.samples, false),
        Some(w) => CheckOutcome::fail(name, cfg.samples, w),
    };
    report.push(outcome("integrality", integrality));
    report.push(outcome("associativity", assoc));
    if is_triangular {
        report.push(outcome("inverse", inverse));
    }
    report
}

/// The quotient `G / <a_m>` with Mal'cev basis the images of `a_1..a_{m-1}`.
pub fn quotient_by_last(g: &MalcevGroup) -> Result<MalcevGroup> {
    let m = g.hirsch();
    if m < 2 {
        return Err(Error::HirschTooSmall(m));
    }
    let last = g.generator(m - 1);
    for i in 0..m - 1 {
        let c = g.commutator(&g.generator(i), &last)?;
        if !c.is_identity() {
            return Err(Error::NotCentral {
                index: i + 1,
                witness: c.to_string(),
            });
        }
    }
    let keep: Vec<usize> = (0..m - 1).chain(m..2 * m - 1).collect();
    let law = g.law()[..m - 1]
        .iter()
        .map(|p| {
            p.substitute_zero(&[m - 1, 2 * m - 1])
                .project_vars(&keep)
                .expect("last coordinates were zeroed")
        })
        .collect();
    MalcevGroup::new(format!("{}/<a{}>", g.name(), m), law)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Lattice(usize),
    Heisenberg3,
    /// A JSON group document.
    FromSpec(String),
}

/// The shipped JSON document for the integer Heisenberg group.
pub const HEISENBERG3_JSON: &str = include_str!("../data/heisenberg3.json");

/// Builds and validates a group (default sampling).
pub fn make_builtin(kind: &GroupKind) -> Result<Arc<MalcevGroup>> {
    let g = match kind {
        GroupKind::Lattice(m) => {
            if *m == 0 {
                return Err(Error::HirschTooSmall(0));
            }
            MalcevGroup::lattice(*m)
        }
        GroupKind::Heisenberg3 => heisenberg3(),
        GroupKind::FromSpec(text) => crate::json::group_from_json(text)?,
    };
    let report = validate_group(&g, &SampleConfig::group_default());
    if !report.passed() {
        let msg = report
            .failures()
            .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::Validation(msg));
    }
    Ok(Arc::new(g))
}

/// `H3`, the central extension of `Z^2` by the cocycle `x2*y1`.
pub fn heisenberg3() -> MalcevGroup {
    let z2 = Arc::new(MalcevGroup::lattice(2));
    let sigma = crate::cohomology::PolyCocycle::z2_skinny(z2);
    crate::extensions::central_extension(&sigma)
        .expect("x2*y1 is a cocycle on Z^2")
        .total()
        .as_ref()
        .clone()
        .with_name("H3")
}

#[cfg(test)]
pub(crate) fn add_constant_to_law(g: &MalcevGroup, index: usize, c: i64) -> Result<MalcevGroup> {
    let mut law = g.law().to_vec();
    let vars = law_vars(g.hirsch());
    law[index] = &law[index] + &MultiPoly::constant(vars, Rational::from_integer(c.into()));
    MalcevGroup::new(format!("{}+{c}", g.name()), law)
}
