//! Low-degree bar complex: 2-cocycles, 1- and 2-chains, boundaries and the
//! integer pairing between them.
//!
//! Cocycles come in two forms. A [`PolyCocycle`] is a polynomial
//! `p(x1..xm, y1)`, so it depends on its second argument only through the
//! canonical homomorphism. A [`KernelCocycle`] is any deterministic
//! pointwise evaluator, which is how section-derived cocycles arise.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{heisenberg3, GroupElement, MalcevGroup};
use crate::poly::{cocycle_vars, MultiPoly, Rational};
use crate::report::{random_element, random_kernel_element, CheckOutcome, SampleConfig, ValidationReport};

pub trait Cocycle: Send + Sync {
    fn group(&self) -> &Arc<MalcevGroup>;
    fn eval(&self, x: &GroupElement, y: &GroupElement) -> Result<BigInt>;
    fn label(&self) -> String;
    fn as_poly(&self) -> Option<&PolyCocycle> {
        None
    }
}

/// A skinny cocycle given by a polynomial `p(x1..xm, y1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCocycle {
    group: Arc<MalcevGroup>,
    poly: MultiPoly,
    name: String,
}

impl PolyCocycle {
    pub fn new(group: Arc<MalcevGroup>, poly: MultiPoly, name: impl Into<String>) -> Result<Self> {
        let vars = cocycle_vars(group.hirsch());
        if poly.vars() != vars.as_slice() {
            return Err(Error::Parse(format!(
                "cocycle polynomial over {:?}, expected {:?}",
                poly.vars(),
                vars
            )));
        }
        Ok(PolyCocycle {
            group,
            poly,
            name: name.into(),
        })
    }

    pub fn zero(group: Arc<MalcevGroup>) -> Self {
        let vars = cocycle_vars(group.hirsch());
        PolyCocycle {
            group,
            poly: MultiPoly::zero(vars),
            name: "zero".into(),
        }
    }

    /// `x2*y1` on `Z^2`.
    pub fn z2_skinny(group: Arc<MalcevGroup>) -> Self {
        assert_eq!(group.hirsch(), 2);
        let vars = cocycle_vars(2);
        let poly = MultiPoly::from_terms(vars, [(vec![0, 1, 1], Rational::one())]);
        PolyCocycle {
            group,
            poly,
            name: "z2_skinny".into(),
        }
    }

    /// `-x3*y1 - x2*y1^2/2 - x2*y1/2` on `H3`: the interpolated output of
    /// [`crate::extensions::lemma_hard_cocycle`] applied to `(Z^2, x2*y1)`.
    pub fn heisenberg_skinny(group: Arc<MalcevGroup>) -> Self {
        assert_eq!(group.hirsch(), 3);
        let vars = cocycle_vars(3);
        let half = Rational::new((-1).into(), 2.into());
        let poly = MultiPoly::from_terms(
            vars,
            [
                (vec![0, 0, 1, 1], -Rational::one()),
                (vec![0, 1, 0, 2], half.clone()),
                (vec![0, 1, 0, 1], half),
            ],
        );
        PolyCocycle {
            group,
            poly,
            name: "heisenberg_skinny".into(),
        }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Least common multiple of the coefficient denominators of `p`.
    pub fn denominator(&self) -> &BigInt {
        self.poly.denominator_lcm()
    }

    /// Evaluates `p(x1..xm, j)`, the value on any `y` with `y1 = j`.
    pub fn eval_at(&self, x: &GroupElement, y1: &BigInt) -> Result<BigInt> {
        self.group.check_element(x)?;
        let point: Vec<BigInt> = x.0.iter().cloned().chain(std::iter::once(y1.clone())).collect();
        self.poly.eval_integer(&point).map_err(|v| Error::NonIntegralValue {
            what: format!("cocycle {}", self.name),
            value: v.to_string(),
            at: format!("x = {x}, y1 = {y1}"),
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        PolyCocycle {
            group: self.group.clone(),
            poly: self.poly.scale(&Rational::from_integer(k.clone())),
            name: format!("{}*{}", k, self.name),
        }
    }

    /// `p(y,z) - p(xy,z) + p(x,yz) - p(x,y)` as a polynomial in the
    /// coordinates of `x`, `y`, `z` (3m variables).
    pub fn coboundary_poly(&self) -> MultiPoly {
        let m = self.group.hirsch();
        let vars: Vec<String> = ["x", "y", "z"]
            .iter()
            .flat_map(|s| (1..=m).map(move |i| format!("{s}{i}")))
            .collect();
        let v = |block: usize, i: usize| MultiPoly::var(vars.clone(), block * m + i);
        // law(a, b) with a, b among the three blocks
        let law = |a: usize, b: usize| -> Vec<MultiPoly> {
            let map: Vec<usize> = (0..m).map(|i| a * m + i).chain((0..m).map(|i| b * m + i)).collect();
            self.group
                .law()
                .iter()
                .map(|p| p.reindex(vars.clone(), &map))
                .collect()
        };
        let sigma = |first: Vec<MultiPoly>, second1: MultiPoly| {
            let mut subs = first;
            subs.push(second1);
            self.poly.compose(&subs)
        };
        let block = |b: usize| (0..m).map(|i| v(b, i)).collect::<Vec<_>>();
        let yz = sigma(block(1), v(2, 0));
        let xy_z = sigma(law(0, 1), v(2, 0));
        let x_yz = sigma(block(0), law(1, 2)[0].clone());
        let xy = sigma(block(0), v(1, 0));
        &(&(&yz - &xy_z) + &x_yz) - &xy
    }
}

impl Cocycle for PolyCocycle {
    fn group(&self) -> &Arc<MalcevGroup> {
        &self.group
    }

    fn eval(&self, x: &GroupElement, y: &GroupElement) -> Result<BigInt> {
        self.group.check_element(y)?;
        self.eval_at(x, &y.0[0])
    }

    fn label(&self) -> String {
        format!("{} = {}", self.name, self.poly)
    }

    fn as_poly(&self) -> Option<&PolyCocycle> {
        Some(self)
    }
}

type KernelFn = dyn Fn(&GroupElement, &GroupElement) -> Result<BigInt> + Send + Sync;

/// A cocycle known only through pointwise evaluation.
#[derive(Clone)]
pub struct KernelCocycle {
    group: Arc<MalcevGroup>,
    label: String,
    f: Arc<KernelFn>,
}

impl fmt::Debug for KernelCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelCocycle")
            .field("group", &self.group.name())
            .field("label", &self.label)
            .finish()
    }
}

impl KernelCocycle {
    pub fn new<F>(group: Arc<MalcevGroup>, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&GroupElement, &GroupElement) -> Result<BigInt> + Send + Sync + 'static,
    {
        KernelCocycle {
            group,
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn from_poly(p: &PolyCocycle) -> Self {
        let inner = p.clone();
        KernelCocycle::new(p.group.clone(), p.name.clone(), move |x, y| inner.eval(x, y))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let f = self.f.clone();
        let k = k.clone();
        KernelCocycle {
            group: self.group.clone(),
            label: format!("{}*{}", k, self.label),
            f: Arc::new(move |x, y| Ok(&k * f(x, y)?)),
        }
    }
}

impl Cocycle for KernelCocycle {
    fn group(&self) -> &Arc<MalcevGroup> {
        &self.group
    }

    fn eval(&self, x: &GroupElement, y: &GroupElement) -> Result<BigInt> {
        self.group.check_element(x)?;
        self.group.check_element(y)?;
        (self.f)(x, y)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Formal integer combination of pairs `[a|b]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chain2 {
    terms: Vec<(BigInt, GroupElement, GroupElement)>,
}

impl Chain2 {
    /// Drops zero coefficients; like terms are not merged.
    pub fn new(terms: Vec<(BigInt, GroupElement, GroupElement)>) -> Self {
        Chain2 {
            terms: terms.into_iter().filter(|(k, _, _)| !k.is_zero()).collect(),
        }
    }

    pub fn from_i64(terms: &[(i64, &[i64], &[i64])]) -> Self {
        Self::new(
            terms
                .iter()
                .map(|(k, a, b)| (BigInt::from(*k), GroupElement::from_i64(a), GroupElement::from_i64(b)))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[(BigInt, GroupElement, GroupElement)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.terms.iter().map(|(c, a, b)| (c * k, a.clone(), b.clone())).collect())
    }

    pub fn plus(&self, other: &Chain2) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).cloned().collect())
    }

    /// Every group element that appears as `a`, `b`, or `ab`.
    pub fn support(&self, g: &MalcevGroup) -> Result<Vec<GroupElement>> {
        let mut out = Vec::new();
        for (_, a, b) in &self.terms {
            let ab = g.multiply(a, b)?;
            for x in [a.clone(), b.clone(), ab] {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Chain2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, a, b)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{k}[{a}|{b}]")?;
        }
        Ok(())
    }
}

/// Formal integer combination of elements, like terms merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chain1 {
    terms: BTreeMap<GroupElement, BigInt>,
}

impl Chain1 {
    pub fn add_term(&mut self, k: BigInt, a: GroupElement) {
        let entry = self.terms.entry(a).or_insert_with(BigInt::zero);
        *entry += k;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coefficient(&self, a: &GroupElement) -> BigInt {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `d[a|b] = [b] - [ab] + [a]`.
pub fn boundary2(g: &MalcevGroup, c: &Chain2) -> Result<Chain1> {
    let mut out = Chain1::default();
    for (k, a, b) in c.terms() {
        out.add_term(k.clone(), b.clone());
        out.add_term(-k, g.multiply(a, b)?);
        out.add_term(k.clone(), a.clone());
    }
    Ok(out)
}

pub fn is_cycle(g: &MalcevGroup, c: &Chain2) -> Result<bool> {
    Ok(boundary2(g, c)?.is_empty())
}

/// `d[a|b|c] = [b|c] - [ab|c] + [a|bc] - [a|b]`.
pub fn boundary3(g: &MalcevGroup, terms: &[(BigInt, GroupElement, GroupElement, GroupElement)]) -> Result<Chain2> {
    let mut out = Vec::with_capacity(4 * terms.len());
    for (k, a, b, c) in terms {
        out.push((k.clone(), b.clone(), c.clone()));
        out.push((-k, g.multiply(a, b)?, c.clone()));
        out.push((k.clone(), a.clone(), g.multiply(b, c)?));
        out.push((-k, a.clone(), b.clone()));
    }
    Ok(Chain2::new(out))
}

/// `<sigma, sum k_i [a_i|b_i]> = sum k_i sigma(a_i, b_i)`, on any chain.
pub fn pair_cocycle_cycle(sigma: &dyn Cocycle, c: &Chain2) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for (k, a, b) in c.terms() {
        acc += k * sigma.eval(a, b)?;
    }
    Ok(acc)
}

/// `[(0,1)|(1,0)] - [(1,0)|(0,1)]` in `Z^2`.
pub fn voiculescu_cycle() -> Chain2 {
    Chain2::from_i64(&[(1, &[0, 1], &[1, 0]), (-1, &[1, 0], &[0, 1])])
}

/// `[a|z^k] - [z^k|a]` with `a` the first and `z` the last Mal'cev
/// generator of a group of Hirsch length `m`.
pub fn central_commutator_cycle(m: usize, k: i64) -> Chain2 {
    let a = GroupElement::basis(m, 0, 1);
    let z = GroupElement::basis(m, m - 1, k);
    Chain2::new(vec![(BigInt::one(), a.clone(), z.clone()), (-BigInt::one(), z, a)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Sampled(SampleConfig),
    /// Every triple with coordinates in `[-radius, radius]`.
    Grid { radius: i64 },
}

impl CheckMode {
    pub fn grid() -> Self {
        CheckMode::Grid { radius: 2 }
    }
}

fn grid_elements(m: usize, radius: i64) -> Vec<GroupElement> {
    let side = (2 * radius + 1) as usize;
    let count = side.pow(m as u32);
    (0..count)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(m);
            for _ in 0..m {
                c.push(BigInt::from((idx % side) as i64 - radius));
                idx /= side;
            }
            GroupElement::new(c)
        })
        .collect()
}

fn max_var_degree(p: &MultiPoly) -> u32 {
    (0..p.nvars()).map(|v| p.degree_in(v)).max().unwrap_or(0)
}

/// Normalisation and the degree-2 cocycle identity
/// `s(y,z) - s(xy,z) + s(x,yz) - s(x,y) = 0`.
pub fn cocycle_check(sigma: &dyn Cocycle, mode: CheckMode) -> ValidationReport {
    let g = sigma.group().clone();
    let m = g.hirsch();
    let mut report = ValidationReport::new(format!("cocycle {} on {}", sigma.label(), g.name()));
    let e = g.identity();

    let identity_at = |x: &GroupElement, y: &GroupElement, z: &GroupElement, s_xy: Option<&BigInt>, s_yz: Option<&BigInt>| -> Result<BigInt> {
        let xy = g.multiply(x, y)?;
        let yz = g.multiply(y, z)?;
        let a = match s_yz {
            Some(v) => v.clone(),
            None => sigma.eval(y, z)?,
        };
        let d = match s_xy {
            Some(v) => v.clone(),
            None => sigma.eval(x, y)?,
        };
        Ok(a - sigma.eval(&xy, z)? + sigma.eval(x, &yz)? - d)
    };

    match mode {
        CheckMode::Sampled(cfg) => {
            let mut rng = cfg.rng();
            let mut norm: Option<String> = None;
            let mut ident: Option<String> = None;
            for _ in 0..cfg.samples {
                let x = random_element(&mut rng, m, cfg.bound);
                let y = random_element(&mut rng, m, cfg.bound);
                let z = random_element(&mut rng, m, cfg.bound);
                if norm.is_none() {
                    match (sigma.eval(&e, &y), sigma.eval(&x, &e)) {
                        (Ok(a), Ok(b)) if a.is_zero() && b.is_zero() => {}
                        (Ok(a), Ok(b)) => {
                            norm = Some(format!("sigma(e, {y}) = {a}, sigma({x}, e) = {b}"))
                        }
                        (Err(err), _) | (_, Err(err)) => norm = Some(err.to_string()),
                    }
                }
                if ident.is_none() {
                    match identity_at(&x, &y, &z, None, None) {
                        Ok(v) if v.is_zero() => {}
                        Ok(v) => ident = Some(format!("x = {x}, y = {y}, z = {z}: coboundary = {v}")),
                        Err(err) => ident = Some(err.to_string()),
                    }
                }
            }
            report.push(match norm {
                None => CheckOutcome::pass("normalization", cfg.samples, false),
                Some(w) => CheckOutcome::fail("normalization", cfg.samples, w),
            });
            report.push(match ident {
                None => CheckOutcome::pass("cocycle identity", cfg.samples, false),
                Some(w) => CheckOutcome::fail("cocycle identity", cfg.samples, w),
            });
        }
        CheckMode::Grid { radius } => {
            let elems = grid_elements(m, radius);
            // A polynomial of degree <= 2r in each variable that vanishes on
            // the grid [-r, r]^k is zero.
            let (norm_conclusive, ident_conclusive) = match sigma.as_poly() {
                Some(p) => (
                    max_var_degree(p.poly()) as i64 <= 2 * radius,
                    max_var_degree(&p.coboundary_poly()) as i64 <= 2 * radius,
                ),
                None => (false, false),
            };
            let mut norm: Option<String> = None;
            for x in &elems {
                match (sigma.eval(&e, x), sigma.eval(x, &e)) {
                    (Ok(a), Ok(b)) if a.is_zero() && b.is_zero() => {}
                    (Ok(a), Ok(b)) => {
                        norm = Some(format!("sigma(e, {x}) = {a}, sigma({x}, e) = {b}"));
                        break;
                    }
                    (Err(err), _) | (_, Err(err)) => {
                        norm = Some(err.to_string());
                        break;
                    }
                }
            }
            report.push(match norm {
                None => CheckOutcome::pass("normalization", elems.len(), norm_conclusive),
                Some(w) => CheckOutcome::fail("normalization", elems.len(), w),
            });

            let n = elems.len();
            let mut pair_values: Vec<Option<BigInt>> = Vec::with_capacity(n * n);
            for x in &elems {
                for y in &elems {
                    pair_values.push(sigma.eval(x, y).ok());
                }
            }
            let mut ident: Option<String> = None;
            let mut evaluated = 0usize;
            'outer: for (i, x) in elems.iter().enumerate() {
                for (j, y) in elems.iter().enumerate() {
                    for (k, z) in elems.iter().enumerate() {
                        evaluated += 1;
                        let s_xy = pair_values[i * n + j].as_ref();
                        let s_yz = pair_values[j * n + k].as_ref();
                        match identity_at(x, y, z, s_xy, s_yz) {
                            Ok(v) if v.is_zero() => {}
                            Ok(v) => {
                                ident = Some(format!("x = {x}, y = {y}, z = {z}: coboundary = {v}"));
                                break 'outer;
                            }
                            Err(err) => {
                                ident = Some(err.to_string());
                                break 'outer;
                            }
                        }
                    }
                }
            }
            report.push(match ident {
                None => CheckOutcome::pass("cocycle identity", evaluated, ident_conclusive),
                Some(w) => CheckOutcome::fail("cocycle identity", evaluated, w),
            });
        }
    }
    report
}

/// Skinniness with respect to the canonical homomorphism `alpha`:
/// `sigma(x, y)` depends on `y` only through `alpha(y)`, and `sigma`
/// vanishes on `ker(alpha) x ker(alpha)`.
pub fn skinny_check(sigma: &dyn Cocycle, cfg: &SampleConfig) -> ValidationReport {
    let g = sigma.group().clone();
    let m = g.hirsch();
    let mut report = ValidationReport::new(format!("skinniness of {} on {}", sigma.label(), g.name()));
    let mut rng = cfg.rng();

    if sigma.as_poly().is_some() {
        // p(x1..xm, y1) reads y only through y1
        report.push(CheckOutcome::pass("alpha dependence", 0, true));
    } else {
        let mut witness = None;
        for _ in 0..cfg.samples {
            let x = random_element(&mut rng, m, cfg.bound);
            let y = random_element(&mut rng, m, cfg.bound);
            let mut y2 = random_element(&mut rng, m, cfg.bound);
            y2.0[0] = y.0[0].clone();
            match (sigma.eval(&x, &y), sigma.eval(&x, &y2)) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(a), Ok(b)) => {
                    witness = Some(format!("x = {x}: sigma(x, {y}) = {a}, sigma(x, {y2}) = {b}"));
                    break;
                }
                (Err(err), _) | (_, Err(err)) => {
                    witness = Some(err.to_string());
                    break;
                }
            }
        }
        report.push(match witness {
            None => CheckOutcome::pass("alpha dependence", cfg.samples, false),
            Some(w) => CheckOutcome::fail("alpha dependence", cfg.samples, w),
        });
    }

    let mut witness = None;
    for _ in 0..cfg.samples {
        let x = random_kernel_element(&mut rng, m, cfg.bound);
        let y = random_kernel_element(&mut rng, m, cfg.bound);
        match sigma.eval(&x, &y) {
            Ok(v) if v.is_zero() => {}
            Ok(v) => {
                witness = Some(format!("sigma({x}, {y}) = {v}"));
                break;
            }
            Err(err) => {
                witness = Some(err.to_string());
                break;
            }
        }
    }
    report.push(match witness {
        None => CheckOutcome::pass("kernel vanishing", cfg.samples, false),
        Some(w) => CheckOutcome::fail("kernel vanishing", cfg.samples, w),
    });
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleKind {
    Z2Skinny,
    HeisenbergSkinny,
}

/// Shipped cocycles together with their groups.
pub fn builtin_cocycle(kind: CocycleKind) -> PolyCocycle {
    match kind {
        CocycleKind::Z2Skinny => PolyCocycle::z2_skinny(Arc::new(MalcevGroup::lattice(2))),
        CocycleKind::HeisenbergSkinny => PolyCocycle::heisenberg_skinny(Arc::new(heisenberg3())),
    }
}

/// The witness 2-cycle each builtin cocycle pairs with to give 1.
pub fn builtin_witness_cycle(kind: CocycleKind) -> Chain2 {
    match kind {
        CocycleKind::Z2Skinny => voiculescu_cycle(),
        CocycleKind::HeisenbergSkinny => central_commutator_cycle(3, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[i64]) -> GroupElement {
        GroupElement::from_i64(v)
    }

    fn z2() -> Arc<MalcevGroup> {
        Arc::new(MalcevGroup::lattice(2))
    }

    fn poly_on_z2(terms: &[(Vec<u32>, i64)]) -> PolyCocycle {
        let p = MultiPoly::from_terms(
            cocycle_vars(2),
            terms.iter().map(|(e, c)| (e.clone(), Rational::from_integer((*c).into()))),
        );
        PolyCocycle::new(z2(), p, "test").unwrap()
    }

    #[test]
    fn z2_skinny_passes_everything() {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        assert_eq!(s.eval(&e(&[0, 1]), &e(&[1, 0])).unwrap(), BigInt::from(1));
        let r = cocycle_check(&s, CheckMode::Sampled(SampleConfig::cocycle_default()));
        assert!(r.passed(), "{r}");
        let r = cocycle_check(&s, CheckMode::grid());
        assert!(r.passed() && r.checks.iter().all(|c| c.conclusive), "{r}");
        assert!(skinny_check(&s, &SampleConfig::cocycle_default()).passed());
        assert!(s.coboundary_poly().is_zero());
    }

    #[test]
    fn x1_y1_is_a_cocycle() {
        let s = poly_on_z2(&[(vec![1, 0, 1], 1)]);
        assert!(cocycle_check(&s, CheckMode::grid()).passed());
    }

    #[test]
    fn unnormalized_is_caught() {
        let s = poly_on_z2(&[(vec![1, 0, 0], 1), (vec![0, 0, 1], 1)]);
        let r = cocycle_check(&s, CheckMode::Sampled(SampleConfig::cocycle_default()));
        let c = r.check("normalization").unwrap();
        assert!(!c.passed);
        assert!(c.witness.as_ref().unwrap().starts_with("sigma(e, "), "{r}");
    }

    #[test]
    fn non_skinny_kernel_is_caught() {
        let s = KernelCocycle::new(z2(), "x2*y2", |x, y| Ok(&x.0[1] * &y.0[1]));
        let r = skinny_check(&s, &SampleConfig::cocycle_default());
        assert!(!r.check("alpha dependence").unwrap().passed);
        assert!(!r.check("kernel vanishing").unwrap().passed);
        // x2*y2 is still a cocycle on Z^2
        assert!(cocycle_check(&s, CheckMode::grid()).passed());
    }

    #[test]
    fn boundaries() {
        let g = MalcevGroup::lattice(2);
        let d = boundary2(&g, &Chain2::from_i64(&[(1, &[1, 0], &[0, 1])])).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.coefficient(&e(&[0, 1])), BigInt::from(1));
        assert_eq!(d.coefficient(&e(&[1, 1])), BigInt::from(-1));
        assert_eq!(d.coefficient(&e(&[1, 0])), BigInt::from(1));
        assert!(is_cycle(&g, &voiculescu_cycle()).unwrap());

        let z1 = MalcevGroup::lattice(1);
        let d = boundary2(&z1, &Chain2::from_i64(&[(1, &[1], &[1])])).unwrap();
        assert_eq!(d.coefficient(&e(&[1])), BigInt::from(2));
        assert_eq!(d.coefficient(&e(&[2])), BigInt::from(-1));
    }

    #[test]
    fn commutator_chain_is_cycle_iff_elements_commute() {
        let h = heisenberg3();
        let pairs = [(e(&[1, 0, 0]), e(&[0, 0, 1]), true), (e(&[1, 0, 0]), e(&[0, 1, 0]), false)];
        for (a, b, commute) in pairs {
            let c = Chain2::new(vec![(1.into(), a.clone(), b.clone()), ((-1).into(), b, a)]);
            assert_eq!(is_cycle(&h, &c).unwrap(), commute);
        }
    }

    #[test]
    fn pairings() {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        assert_eq!(pair_cocycle_cycle(&s, &voiculescu_cycle()).unwrap(), BigInt::from(1));
        assert_eq!(pair_cocycle_cycle(&s, &Chain2::default()).unwrap(), BigInt::zero());
        let s3 = s.scale(&BigInt::from(3));
        assert_eq!(s3.poly().to_string(), "3*x2*y1");
        assert_eq!(pair_cocycle_cycle(&s3, &voiculescu_cycle()).unwrap(), BigInt::from(3));
        assert!(s.scale(&BigInt::zero()).poly().is_zero());

        let h = builtin_cocycle(CocycleKind::HeisenbergSkinny);
        let c1 = builtin_witness_cycle(CocycleKind::HeisenbergSkinny);
        assert_eq!(pair_cocycle_cycle(&h, &c1).unwrap(), BigInt::from(1));
        assert!(h.eval(&e(&[0, 0, 0]), &e(&[2, -1, 3])).unwrap().is_zero());
    }

    #[test]
    fn kernel_scale_matches_poly_scale() {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let k = KernelCocycle::from_poly(&s).scale(&BigInt::from(-4));
        let x = e(&[2, 3]);
        let y = e(&[-1, 5]);
        assert_eq!(k.eval(&x, &y).unwrap(), s.scale(&BigInt::from(-4)).eval(&x, &y).unwrap());
        assert!(cocycle_check(&k, CheckMode::grid()).passed());
    }

    #[test]
    fn heisenberg_skinny_grid_is_conclusive() {
        let s = builtin_cocycle(CocycleKind::HeisenbergSkinny);
        assert_eq!(s.denominator(), &BigInt::from(2));
        assert!(s.coboundary_poly().is_zero());
        let r = cocycle_check(&s, CheckMode::grid());
        assert!(r.passed(), "{r}");
        assert!(r.checks.iter().all(|c| c.conclusive), "{r}");
    }
}
