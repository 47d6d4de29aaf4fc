//! JSON documents for groups, polynomial cocycles and 2-chains.
//!
//! Integers travel as decimal strings so that values beyond 64 bits survive;
//! plain JSON numbers are accepted on input.
//!
//! ```json
//! {"name": "H3", "hirsch": 3,
//!  "law": [[{"coef": ["1", "1"], "x_exps": [1,0,0], "y_exps": [0,0,0]}, ...], ...]}
//! ```
//!
//! A cocycle document has the same monomial encoding with `y_exps` of
//! length one: `{"name": str, "hirsch": m, "poly": [monomial...]}`.
//! A chain document is a list of `{"coef": int, "a": [ints], "b": [ints]}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::cohomology::Chain2;
use crate::error::{Error, Result};
use crate::group::{GroupElement, MalcevGroup};
use crate::poly::{cocycle_vars, law_vars, MultiPoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal(pub BigInt);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Uint(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Decimal(v.into())),
            Raw::Uint(v) => Ok(Decimal(v.into())),
            Raw::Str(s) => BigInt::from_str(s.trim())
                .map(Decimal)
                .map_err(|_| de::Error::custom(format!("invalid decimal integer {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    pub coef: [Decimal; 2],
    pub x_exps: Vec<u32>,
    pub y_exps: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDoc {
    pub name: String,
    pub hirsch: usize,
    pub law: Vec<Vec<MonomialDoc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleDoc {
    pub name: String,
    pub hirsch: usize,
    pub poly: Vec<MonomialDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainTermDoc {
    pub coef: Decimal,
    pub a: Vec<Decimal>,
    pub b: Vec<Decimal>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn monomials_to_poly(monos: &[MonomialDoc], m: usize, y_len: usize) -> Result<MultiPoly> {
    let vars = if y_len == m { law_vars(m) } else { cocycle_vars(m) };
    let mut terms = Vec::with_capacity(monos.len());
    for (k, mono) in monos.iter().enumerate() {
        if mono.x_exps.len() != m || mono.y_exps.len() != y_len {
            return Err(Error::Parse(format!(
                "monomial {k}: expected {m} x-exponents and {y_len} y-exponents, got {} and {}",
                mono.x_exps.len(),
                mono.y_exps.len()
            )));
        }
        if mono.coef[1].0.is_zero() {
            return Err(Error::Parse(format!("monomial {k}: zero denominator")));
        }
        let coef = Rational::new(mono.coef[0].0.clone(), mono.coef[1].0.clone());
        let exps = mono.x_exps.iter().chain(&mono.y_exps).copied().collect();
        terms.push((exps, coef));
    }
    Ok(MultiPoly::from_terms(vars, terms))
}

fn poly_to_monomials(p: &MultiPoly, m: usize) -> Vec<MonomialDoc> {
    p.terms()
        .map(|(e, c)| MonomialDoc {
            coef: [Decimal(c.numer().clone()), Decimal(c.denom().clone())],
            x_exps: e[..m].to_vec(),
            y_exps: e[m..].to_vec(),
        })
        .collect()
}

/// Parses a group document. The group is not validated here.
pub fn group_from_json(text: &str) -> Result<MalcevGroup> {
    let doc: GroupDoc = serde_json::from_str(text).map_err(parse_err)?;
    group_from_doc(&doc)
}

pub fn group_from_doc(doc: &GroupDoc) -> Result<MalcevGroup> {
    let m = doc.hirsch;
    if m == 0 {
        return Err(Error::Parse("hirsch must be positive".into()));
    }
    if doc.law.len() != m {
        return Err(Error::Parse(format!(
            "law has {} polynomials, hirsch is {m}",
            doc.law.len()
        )));
    }
    let law = doc
        .law
        .iter()
        .map(|monos| monomials_to_poly(monos, m, m))
        .collect::<Result<Vec<_>>>()?;
    MalcevGroup::new(doc.name.clone(), law)
}

pub fn group_to_doc(g: &MalcevGroup) -> GroupDoc {
    GroupDoc {
        name: g.name().to_string(),
        hirsch: g.hirsch(),
        law: g.law().iter().map(|p| poly_to_monomials(p, g.hirsch())).collect(),
    }
}

pub fn group_to_json(g: &MalcevGroup) -> String {
    serde_json::to_string_pretty(&group_to_doc(g)).expect("group document serialises")
}

/// Parses a cocycle document into `(name, hirsch, p(x1..xm, y1))`.
pub fn cocycle_poly_from_json(text: &str) -> Result<(String, usize, MultiPoly)> {
    let doc: CocycleDoc = serde_json::from_str(text).map_err(parse_err)?;
    if doc.hirsch == 0 {
        return Err(Error::Parse("hirsch must be positive".into()));
    }
    let p = monomials_to_poly(&doc.poly, doc.hirsch, 1)?;
    Ok((doc.name, doc.hirsch, p))
}

pub fn cocycle_poly_to_json(name: &str, p: &MultiPoly) -> String {
    let m = p.nvars() - 1;
    let doc = CocycleDoc {
        name: name.to_string(),
        hirsch: m,
        poly: poly_to_monomials(p, m),
    };
    serde_json::to_string_pretty(&doc).expect("cocycle document serialises")
}

/// Parses a chain document for a group of Hirsch length `m`.
pub fn chain_from_json(text: &str, m: usize) -> Result<Chain2> {
    let docs: Vec<ChainTermDoc> = serde_json::from_str(text).map_err(parse_err)?;
    let mut terms = Vec::with_capacity(docs.len());
    for (k, t) in docs.into_iter().enumerate() {
        if t.a.len() != m || t.b.len() != m {
            return Err(Error::Parse(format!(
                "chain term {k}: elements must have {m} coordinates"
            )));
        }
        let a = GroupElement::new(t.a.into_iter().map(|d| d.0).collect());
        let b = GroupElement::new(t.b.into_iter().map(|d| d.0).collect());
        terms.push((t.coef.0, a, b));
    }
    Ok(Chain2::new(terms))
}

pub fn chain_to_json(c: &Chain2) -> String {
    let docs: Vec<ChainTermDoc> = c
        .terms()
        .iter()
        .map(|(k, a, b)| ChainTermDoc {
            coef: Decimal(k.clone()),
            a: a.coords().iter().cloned().map(Decimal).collect(),
            b: b.coords().iter().cloned().map(Decimal).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&docs).expect("chain document serialises")
}
