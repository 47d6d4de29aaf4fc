//! Exact multivariate polynomials over the rationals.
//!
//! Group laws and cocycles are stored as [`MultiPoly`] values. Every
//! polynomial keeps a cached integer form (common denominator plus scaled
//! numerators) so that evaluation at integer points avoids rational
//! normalisation; small inputs take an `i128` path with overflow fallback.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
struct SmallForm {
    denom: i128,
    terms: Vec<(Vec<u32>, i128)>,
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
    denom: BigInt,
    scaled: Vec<(Vec<u32>, BigInt)>,
    small: Option<SmallForm>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

/// Variable names `x1..xm, y1..ym` used by group laws.
pub fn law_vars(m: usize) -> Vec<String> {
    (1..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=m).map(|i| format!("y{i}")))
        .collect()
}

/// Variable names `x1..xm, y1` used by skinny polynomial cocycles.
pub fn cocycle_vars(m: usize) -> Vec<String> {
    (1..=m)
        .map(|i| format!("x{i}"))
        .chain(std::iter::once("y1".to_string()))
        .collect()
}

impl MultiPoly {
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let k = vars.len();
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (exps, coef) in terms {
            assert_eq!(exps.len(), k, "exponent vector length must match variable count");
            if coef.is_zero() {
                continue;
            }
            let entry = map.entry(exps).or_insert_with(Rational::zero);
            *entry += coef;
        }
        map.retain(|_, c| !c.is_zero());
        Self::from_map(vars, map)
    }

    fn from_map(vars: Vec<String>, terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        let denom = terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<(Vec<u32>, BigInt)> = terms
            .iter()
            .map(|(e, c)| (e.clone(), c.numer() * (&denom / c.denom())))
            .collect();
        let small = denom.to_i64().and_then(|d| {
            let terms = scaled
                .iter()
                .map(|(e, c)| c.to_i64().map(|c| (e.clone(), c as i128)))
                .collect::<Option<Vec<_>>>()?;
            Some(SmallForm {
                denom: d as i128,
                terms,
            })
        });
        MultiPoly {
            vars,
            terms,
            denom,
            scaled,
            small,
        }
    }

    pub fn zero(vars: Vec<String>) -> Self {
        Self::from_map(vars, BTreeMap::new())
    }

    pub fn constant(vars: Vec<String>, c: Rational) -> Self {
        let k = vars.len();
        Self::from_terms(vars, [(vec![0; k], c)])
    }

    pub fn var(vars: Vec<String>, index: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        Self::from_terms(vars, [(exps, Rational::one())])
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> &BigInt {
        &self.denom
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(
            self.vars.clone(),
            self.terms.iter().map(|(e, c)| (e.clone(), c * k)),
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), Rational::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Sets the listed variables to zero, keeping the variable list.
    pub fn substitute_zero(&self, vars: &[usize]) -> Self {
        Self::from_map(
            self.vars.clone(),
            self.terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e[v] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        )
    }

    /// Moves variable `i` to position `map[i]` of `new_vars`.
    pub fn reindex(&self, new_vars: Vec<String>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.vars.len());
        let k = new_vars.len();
        Self::from_terms(
            new_vars,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; k];
                for (i, &d) in e.iter().enumerate() {
                    ne[map[i]] += d;
                }
                (ne, c.clone())
            }),
        )
    }

    /// Keeps only the listed variables; `None` if a dropped variable occurs.
    pub fn project_vars(&self, keep: &[usize]) -> Option<Self> {
        let dropped_used = (0..self.vars.len())
            .filter(|v| !keep.contains(v))
            .any(|v| self.uses_var(v));
        if dropped_used {
            return None;
        }
        let vars = keep.iter().map(|&v| self.vars[v].clone()).collect();
        Some(Self::from_terms(
            vars,
            self.terms
                .iter()
                .map(|(e, c)| (keep.iter().map(|&v| e[v]).collect(), c.clone())),
        ))
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes must share
    /// one variable list, which becomes the variable list of the result.
    pub fn compose(&self, subs: &[MultiPoly]) -> Self {
        assert_eq!(subs.len(), self.vars.len());
        let target = subs
            .first()
            .map(|s| s.vars.clone())
            .unwrap_or_default();
        assert!(subs.iter().all(|s| s.vars == target));
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![Self::constant(target.clone(), Rational::one()), s.clone()])
            .collect();
        let mut acc = Self::zero(target.clone());
        for (exps, coef) in &self.terms {
            let mut term = Self::constant(target.clone(), coef.clone());
            for (i, &d) in exps.iter().enumerate() {
                let d = d as usize;
                while powers[i].len() <= d {
                    let next = powers[i].last().unwrap() * &subs[i];
                    powers[i].push(next);
                }
                if d > 0 {
                    term = &term * &powers[i][d];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .filter(|(d, _)| **d > 0)
                    .fold(c.clone(), |acc, (&d, x)| acc * num_traits::pow(x.clone(), d as usize))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Evaluates at an integer point. Returns the exact integer value, or
    /// the non-integral rational as the error.
    pub fn eval_integer(&self, point: &[BigInt]) -> Result<BigInt, Rational> {
        assert_eq!(point.len(), self.vars.len());
        if let Some((num, den)) = self.eval_small(point) {
            if num % den == 0 {
                return Ok(BigInt::from(num / den));
            }
            return Err(Rational::new(num.into(), den.into()));
        }
        let num = self
            .scaled
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .filter(|(d, _)| **d > 0)
                    .fold(c.clone(), |acc, (&d, x)| acc * x.pow(d))
            })
            .fold(BigInt::zero(), |a, b| a + b);
        if self.denom.is_one() {
            return Ok(num);
        }
        let (q, r) = num.div_rem(&self.denom);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Rational::new(num, self.denom.clone()))
        }
    }

    pub fn eval_int(&self, point: &[BigInt]) -> Rational {
        match self.eval_integer(point) {
            Ok(v) => Rational::from_integer(v),
            Err(r) => r,
        }
    }

    fn eval_small(&self, point: &[BigInt]) -> Option<(i128, i128)> {
        let small = self.small.as_ref()?;
        let xs: Vec<i128> = point
            .iter()
            .map(|x| x.to_i64().map(|v| v as i128))
            .collect::<Option<_>>()?;
        let mut sum: i128 = 0;
        for (e, c) in &small.terms {
            let mut t = *c;
            for (&d, &x) in e.iter().zip(&xs) {
                for _ in 0..d {
                    t = t.checked_mul(x)?;
                }
            }
            sum = sum.checked_add(t)?;
        }
        Some((sum, small.denom))
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        assert_eq!(self.vars, other.vars, "variable lists differ");
        let mut map = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = map.entry(e.clone()).or_insert_with(Rational::zero);
            if sign > 0 {
                *entry += c;
            } else {
                *entry -= c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Self::from_map(self.vars.clone(), map)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.combine(rhs, 1)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.combine(rhs, -1)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable lists differ");
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *map.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly::from_map(self.vars.clone(), map)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, coef)) in self.terms.iter().rev().enumerate() {
            let neg = coef.is_negative();
            let abs = coef.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, d)| **d > 0)
                .map(|(v, &d)| {
                    if d == 1 {
                        self.vars[v].clone()
                    } else {
                        format!("{}^{}", self.vars[v], d)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn arithmetic_and_display() {
        let vars = cocycle_vars(2);
        let x2 = MultiPoly::var(vars.clone(), 1);
        let y1 = MultiPoly::var(vars.clone(), 2);
        let p = &x2 * &y1;
        assert_eq!(p.to_string(), "x2*y1");
        let r = &(&p + &p.scale(&q(-1, 2))) - &y1;
        assert_eq!(r.to_string(), "1/2*x2*y1 - y1");
        assert_eq!(r.denominator_lcm(), &BigInt::from(2));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn integer_evaluation_detects_fractions() {
        let vars = vec!["t".to_string()];
        let t = MultiPoly::var(vars.clone(), 0);
        // t(t+1)/2 is integer valued, t/2 is not
        let tri = (&(&t * &t) + &t).scale(&q(1, 2));
        for v in -5..=5 {
            assert_eq!(tri.eval_integer(&ints(&[v])).unwrap(), BigInt::from(v * (v + 1) / 2));
        }
        let half = t.scale(&q(1, 2));
        assert_eq!(half.eval_integer(&ints(&[3])).unwrap_err(), q(3, 2));
    }

    #[test]
    fn big_inputs_take_the_bigint_path() {
        let vars = vec!["t".to_string()];
        let t = MultiPoly::var(vars.clone(), 0);
        let p = t.pow(5);
        let big = BigInt::from(10).pow(30);
        assert_eq!(p.eval_integer(&[big.clone()]).unwrap(), big.pow(5));
    }

    #[test]
    fn compose_substitutes() {
        // p(a, b) = a*b composed with a = u + v, b = u - v gives u^2 - v^2
        let p = MultiPoly::from_terms(vec!["a".into(), "b".into()], [(vec![1, 1], q(1, 1))]);
        let uv = vec!["u".to_string(), "v".to_string()];
        let u = MultiPoly::var(uv.clone(), 0);
        let v = MultiPoly::var(uv.clone(), 1);
        let c = p.compose(&[&u + &v, &u - &v]);
        assert_eq!(c, &u.pow(2) - &v.pow(2));
    }

    #[test]
    fn reindex_and_project() {
        let vars = law_vars(1);
        let p = &MultiPoly::var(vars.clone(), 0) * &MultiPoly::var(vars.clone(), 1);
        let wide = p.reindex(law_vars(2), &[0, 2]);
        assert_eq!(wide.to_string(), "x1*y1");
        assert!(wide.project_vars(&[0, 2]).is_some());
        assert!(wide.project_vars(&[0, 1]).is_none());
        assert!(wide.substitute_zero(&[2]).is_zero());
    }
}
