//! Central extensions `0 -> Z -> G_sigma -> G -> 1` built from polynomial
//! cocycles, cocycles recovered from sections, and the construction of a
//! non-torsion skinny class on `G_sigma`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::cohomology::{cocycle_check, skinny_check, CheckMode, Cocycle, KernelCocycle, PolyCocycle};
use crate::error::{Error, Result};
use crate::group::{validate_group, GroupElement, MalcevGroup};
use crate::poly::{cocycle_vars, law_vars, MultiPoly, Rational};
use crate::report::{random_element, SampleConfig};

pub const DEFAULT_DEGREE_BOUND: u32 = 4;

#[derive(Clone, Debug)]
pub struct CentralExtension {
    base: Arc<MalcevGroup>,
    total: Arc<MalcevGroup>,
    cocycle: PolyCocycle,
}

impl CentralExtension {
    pub fn base(&self) -> &Arc<MalcevGroup> {
        &self.base
    }

    pub fn total(&self) -> &Arc<MalcevGroup> {
        &self.total
    }

    pub fn cocycle(&self) -> &PolyCocycle {
        &self.cocycle
    }

    /// `k -> (0, ..., 0, k)`.
    pub fn embed(&self, k: &BigInt) -> GroupElement {
        let mut c = vec![BigInt::zero(); self.total.hirsch()];
        *c.last_mut().unwrap() = k.clone();
        GroupElement::new(c)
    }

    /// Drops the last coordinate.
    pub fn project(&self, g: &GroupElement) -> Result<GroupElement> {
        self.total.check_element(g)?;
        let m = self.base.hirsch();
        Ok(GroupElement::new(g.0[..m].to_vec()))
    }

    /// The canonical section `g -> (g, 0)`.
    pub fn canonical_section(&self, g: &GroupElement) -> GroupElement {
        GroupElement::new(g.0.iter().cloned().chain(std::iter::once(BigInt::zero())).collect())
    }
}

/// Builds `G_sigma` with `law_{m+1} = x_{m+1} + y_{m+1} + p(x, y1)`.
pub fn central_extension(sigma: &PolyCocycle) -> Result<CentralExtension> {
    let base = sigma.group().clone();
    let m = base.hirsch();
    let vars = law_vars(m + 1);
    let base_map: Vec<usize> = (0..m).chain((0..m).map(|j| m + 1 + j)).collect();
    let mut law: Vec<MultiPoly> = base
        .law()
        .iter()
        .map(|p| p.reindex(vars.clone(), &base_map))
        .collect();
    let cocycle_map: Vec<usize> = (0..m).chain(std::iter::once(m + 1)).collect();
    let twist = sigma.poly().reindex(vars.clone(), &cocycle_map);
    let last = &(&MultiPoly::var(vars.clone(), m) + &MultiPoly::var(vars.clone(), 2 * m + 1)) + &twist;
    law.push(last);
    let total = MalcevGroup::new(format!("{}[{}]", base.name(), sigma.name()), law)?;

    let cocycle_report = cocycle_check(sigma, CheckMode::Sampled(SampleConfig::cocycle_default()));
    let group_report = validate_group(&total, &SampleConfig::group_default());
    if !cocycle_report.passed() || !group_report.passed() {
        let msg = cocycle_report
            .failures()
            .chain(group_report.failures())
            .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::InvalidCocycle(msg));
    }
    Ok(CentralExtension {
        base,
        total: Arc::new(total),
        cocycle: sigma.clone(),
    })
}

pub type Section = Arc<dyn Fn(&GroupElement) -> GroupElement + Send + Sync>;

/// The cocycle `theta(g) theta(h) theta(gh)^{-1}` of a set-theoretic section.
pub fn section_cocycle(ext: &CentralExtension, theta: Section, cfg: &SampleConfig) -> Result<KernelCocycle> {
    let base = ext.base.clone();
    let m = base.hirsch();
    let mut rng = cfg.rng();
    let mut probes = vec![base.identity()];
    probes.extend((0..cfg.samples).map(|_| random_element(&mut rng, m, cfg.bound)));
    for g in &probes {
        let lifted = theta(g);
        if ext.project(&lifted)? != *g {
            return Err(Error::NotASection(format!("theta({g}) = {lifted}")));
        }
    }
    let total = ext.total.clone();
    Ok(KernelCocycle::new(base.clone(), "section cocycle", move |g, h| {
        let gh = base.multiply(g, h)?;
        let prod = total.multiply(&total.multiply(&theta(g), &theta(h))?, &total.inverse(&theta(&gh))?)?;
        if prod.0[..m].iter().any(|c| !c.is_zero()) {
            return Err(Error::NotASection(format!(
                "theta({g}) theta({h}) theta({gh})^-1 = {prod} is not central"
            )));
        }
        Ok(prod.0[m].clone())
    }))
}

/// `(g, s) -> (g, k s)`, a homomorphism `G_sigma -> G_{k sigma}`.
pub fn scaling_map(x: &GroupElement, k: &BigInt) -> GroupElement {
    let mut c = x.0.clone();
    if let Some(last) = c.last_mut() {
        *last *= k;
    }
    GroupElement::new(c)
}

/// Element of `(Z x K') x| Z` where `K'` is the kernel of `alpha` on the
/// total group, stored as a total-group element with first coordinate 0.
/// The pair `(w, (free, u))` stands for `a^w (free, u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SemiElement {
    w: BigInt,
    free: BigInt,
    u: GroupElement,
}

struct SemidirectModel {
    total: Arc<MalcevGroup>,
    a: GroupElement,
    a_inv: GroupElement,
}

impl SemidirectModel {
    /// The `Z` coordinate of `u` under `u = iota(z) * (k, 0)`.
    fn central_part(u: &GroupElement) -> &BigInt {
        u.0.last().unwrap()
    }

    /// `eta(free, u) = (free + z(u), a u a^-1)`.
    fn eta(&self, free: &BigInt, u: &GroupElement) -> Result<(BigInt, GroupElement)> {
        let conj = self.total.multiply(&self.total.multiply(&self.a, u)?, &self.a_inv)?;
        Ok((free + Self::central_part(u), conj))
    }

    fn eta_inv(&self, free: &BigInt, u: &GroupElement) -> Result<(BigInt, GroupElement)> {
        let conj = self.total.multiply(&self.total.multiply(&self.a_inv, u)?, &self.a)?;
        Ok((free - Self::central_part(&conj), conj))
    }

    fn eta_pow(&self, k: &BigInt, free: &BigInt, u: &GroupElement) -> Result<(BigInt, GroupElement)> {
        let steps = k
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Validation(format!("exponent {k} too large")))?;
        let mut state = (free.clone(), u.clone());
        for _ in 0..steps {
            state = if k.is_positive() {
                self.eta(&state.0, &state.1)?
            } else {
                self.eta_inv(&state.0, &state.1)?
            };
        }
        Ok(state)
    }

    fn multiply(&self, p: &SemiElement, q: &SemiElement) -> Result<SemiElement> {
        let (free, u) = self.eta_pow(&-&q.w, &p.free, &p.u)?;
        Ok(SemiElement {
            w: &p.w + &q.w,
            free: free + &q.free,
            u: self.total.multiply(&u, &q.u)?,
        })
    }

    fn inverse(&self, p: &SemiElement) -> Result<SemiElement> {
        let (free, u) = self.eta_pow(&p.w, &-&p.free, &self.total.inverse(&p.u)?)?;
        Ok(SemiElement { w: -&p.w, free, u })
    }

    /// `g = a^w u` with `w = alpha(g)`, lifted with free coordinate 0.
    fn section(&self, g: &GroupElement) -> Result<SemiElement> {
        let w = g.0[0].clone();
        let u = self.total.multiply(&self.total.power(&self.a, &-&w)?, g)?;
        debug_assert!(u.0[0].is_zero());
        Ok(SemiElement {
            w,
            free: BigInt::zero(),
            u,
        })
    }
}

/// For a skinny `sigma` on `G`, a skinny cocycle `omega` on `G_sigma`
/// with `<omega, [a|iota(k)] - [iota(k)|a]> = k`.
pub fn lemma_hard_cocycle(ext: &CentralExtension) -> Result<KernelCocycle> {
    let report = skinny_check(&ext.cocycle, &SampleConfig::cocycle_default());
    if !report.passed() {
        let w = report.failures().next().and_then(|c| c.witness.clone()).unwrap_or_default();
        return Err(Error::NotSkinny(w));
    }
    let total = ext.total.clone();
    let a = total.generator(0);
    let image = ext.base.canonical_hom(&ext.project(&a)?);
    if !image.is_one() {
        return Err(Error::NotSurjective(image));
    }
    let model = SemidirectModel {
        a_inv: total.inverse(&a)?,
        a,
        total: total.clone(),
    };
    let label = format!("omega[{}]", total.name());
    Ok(KernelCocycle::new(total.clone(), label, move |g, h| {
        let gh = model.total.multiply(g, h)?;
        let tg = model.section(g)?;
        let th = model.section(h)?;
        let tgh = model.section(&gh)?;
        let prod = model.multiply(&model.multiply(&tg, &th)?, &model.inverse(&tgh)?)?;
        if !prod.w.is_zero() || !prod.u.is_identity() {
            return Err(Error::NotASection(format!(
                "section product for ({g}, {h}) leaves w = {}, u = {}",
                prod.w, prod.u
            )));
        }
        Ok(prod.free)
    }))
}

/// `V^{-1}` for the Vandermonde matrix of the nodes `-d..=d`, so that
/// monomial coefficients are `V^{-1}` applied to node values.
fn inverse_vandermonde(d: i64) -> Vec<Vec<Rational>> {
    let n = (2 * d + 1) as usize;
    let nodes: Vec<Rational> = (-d..=d).map(|s| Rational::from_integer(s.into())).collect();
    // augmented [V | I]
    let mut a: Vec<Vec<Rational>> = nodes
        .iter()
        .enumerate()
        .map(|(i, s)| {
            (0..n)
                .map(|k| num_traits::pow(s.clone(), k))
                .chain((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("Vandermonde on distinct nodes");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Fits `p(x1..xm, y1)` of total degree at most `degree` to a skinny
/// cocycle by exact interpolation on `[-degree, degree]^{m+1}`, then checks
/// the fit on fresh samples and runs the sampled cocycle check.
pub fn interpolate_polynomial_cocycle(omega: &dyn Cocycle, degree: u32) -> Result<PolyCocycle> {
    let g = omega.group().clone();
    let m = g.hirsch();
    let dims = m + 1;
    let d = degree as i64;
    let side = (2 * d + 1) as usize;
    let count = side.pow(dims as u32);

    let mut values: Vec<Rational> = Vec::with_capacity(count);
    for idx in 0..count {
        let mut rest = idx;
        let mut point = Vec::with_capacity(dims);
        for _ in 0..dims {
            point.push(BigInt::from((rest % side) as i64 - d));
            rest /= side;
        }
        let x = GroupElement::new(point[..m].to_vec());
        let mut y = vec![BigInt::zero(); m];
        y[0] = point[m].clone();
        values.push(Rational::from_integer(omega.eval(&x, &GroupElement::new(y))?));
    }

    // apply V^{-1} along every axis; axis k has stride side^k
    let vinv = inverse_vandermonde(d);
    for axis in 0..dims {
        let stride = side.pow(axis as u32);
        let mut next = vec![Rational::zero(); count];
        for (idx, slot) in next.iter_mut().enumerate() {
            let digit = (idx / stride) % side;
            let base = idx - digit * stride;
            let mut acc = Rational::zero();
            for (j, c) in vinv[digit].iter().enumerate() {
                if !c.is_zero() {
                    acc += c * &values[base + j * stride];
                }
            }
            *slot = acc;
        }
        values = next;
    }

    let mut terms = Vec::new();
    for (idx, c) in values.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut rest = idx;
        let exps: Vec<u32> = (0..dims)
            .map(|_| {
                let e = (rest % side) as u32;
                rest /= side;
                e
            })
            .collect();
        let total: u32 = exps.iter().sum();
        if total > degree {
            return Err(Error::DegreeBoundTooSmall {
                degree,
                witness: format!("grid data needs a degree-{total} term, exponents {exps:?}"),
            });
        }
        terms.push((exps, c));
    }
    let poly = MultiPoly::from_terms(cocycle_vars(m), terms);
    let fitted = PolyCocycle::new(g.clone(), poly, format!("interpolated {}", omega.label()))?;

    let cfg = SampleConfig::cocycle_default();
    let bound = d + 3;
    let mut rng = cfg.rng();
    for _ in 0..cfg.samples {
        let x = random_element(&mut rng, m, bound);
        let y_bound = rng.gen_range(1..=bound);
        let y = random_element(&mut rng, m, y_bound);
        let want = omega.eval(&x, &y)?;
        let got = fitted.eval(&x, &y)?;
        if want != got {
            return Err(Error::DegreeBoundTooSmall {
                degree,
                witness: format!("at x = {x}, y = {y}: cocycle {want}, fit {got}"),
            });
        }
    }
    let report = cocycle_check(&fitted, CheckMode::Sampled(cfg));
    if !report.passed() {
        return Err(Error::InvalidCocycle(report.to_string()));
    }
    Ok(fitted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{builtin_cocycle, central_commutator_cycle, pair_cocycle_cycle, CocycleKind};
    use crate::group::heisenberg3;

    fn e(v: &[i64]) -> GroupElement {
        GroupElement::from_i64(v)
    }

    fn z2_ext() -> CentralExtension {
        central_extension(&builtin_cocycle(CocycleKind::Z2Skinny)).unwrap()
    }

    #[test]
    fn heisenberg_is_the_extension_of_z2() {
        let ext = z2_ext();
        assert_eq!(**ext.total(), heisenberg3());
        assert_eq!(ext.embed(&BigInt::from(4)), e(&[0, 0, 4]));
        assert_eq!(ext.project(&e(&[1, 2, 3])).unwrap(), e(&[1, 2]));
    }

    #[test]
    fn zero_cocycle_gives_direct_product() {
        let z2 = Arc::new(MalcevGroup::lattice(2));
        let ext = central_extension(&PolyCocycle::zero(z2)).unwrap();
        assert_eq!(**ext.total(), MalcevGroup::lattice(3));
    }

    #[test]
    fn bad_cocycle_is_rejected() {
        let z2 = Arc::new(MalcevGroup::lattice(2));
        let vars = cocycle_vars(2);
        let p = MultiPoly::from_terms(vars, [(vec![0, 2, 1], Rational::one())]);
        let s = PolyCocycle::new(z2, p, "x2^2*y1").unwrap();
        assert!(matches!(central_extension(&s), Err(Error::InvalidCocycle(_))));
    }

    #[test]
    fn scaling_map_is_a_homomorphism() {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let k = BigInt::from(3);
        let from = central_extension(&s).unwrap();
        let to = central_extension(&s.scale(&k)).unwrap();
        let x = e(&[2, -1, 5]);
        let y = e(&[-3, 2, 1]);
        let lhs = to
            .total()
            .multiply(&scaling_map(&x, &k), &scaling_map(&y, &k))
            .unwrap();
        let rhs = scaling_map(&from.total().multiply(&x, &y).unwrap(), &k);
        assert_eq!(lhs, rhs);
        assert_eq!(scaling_map(&from.embed(&BigInt::one()), &k), to.embed(&k));
    }

    #[test]
    fn canonical_section_recovers_the_cocycle() {
        let ext = z2_ext();
        let e2 = ext.clone();
        let omega = section_cocycle(&ext, Arc::new(move |g| e2.canonical_section(g)), &SampleConfig::cocycle_default()).unwrap();
        assert_eq!(omega.eval(&e(&[1, 1]), &e(&[2, 0])).unwrap(), BigInt::from(2));
        assert_eq!(omega.eval(&e(&[0, 3]), &e(&[-2, 7])).unwrap(), BigInt::from(-6));
    }

    #[test]
    fn shifted_section_differs_by_a_coboundary() {
        // theta'(g) = (g, f(g)) shifts sigma by f(g) + f(h) - f(gh)
        let ext = z2_ext();
        let f = |g: &GroupElement| &g.0[0] * &g.0[0];
        let e2 = ext.clone();
        let shifted = section_cocycle(
            &ext,
            Arc::new(move |g| {
                let mut t = e2.canonical_section(g);
                t.0[2] = f(g);
                t
            }),
            &SampleConfig::cocycle_default(),
        )
        .unwrap();
        let sigma = ext.cocycle();
        for (x, y) in [(e(&[1, 2]), e(&[3, -1])), (e(&[-2, 0]), e(&[5, 5]))] {
            let xy = ext.base().multiply(&x, &y).unwrap();
            let diff = shifted.eval(&x, &y).unwrap() - sigma.eval(&x, &y).unwrap();
            assert_eq!(diff, f(&x) + f(&y) - f(&xy));
        }
        assert!(cocycle_check(&shifted, CheckMode::grid()).passed());
    }

    #[test]
    fn non_section_is_rejected() {
        let ext = z2_ext();
        let err = section_cocycle(
            &ext,
            Arc::new(|g: &GroupElement| {
                let mut c = g.0.clone();
                c[0] += 1;
                c.push(BigInt::zero());
                GroupElement::new(c)
            }),
            &SampleConfig::cocycle_default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotASection(_)));
    }

    #[test]
    fn hard_cocycle_pairs_to_k() {
        let ext = z2_ext();
        let omega = lemma_hard_cocycle(&ext).unwrap();
        for k in [1, 5, -2, 0, 3] {
            let c = central_commutator_cycle(3, k);
            assert_eq!(pair_cocycle_cycle(&omega, &c).unwrap(), BigInt::from(k));
        }
        assert!(omega.eval(&e(&[0, 0, 0]), &e(&[2, -3, 1])).unwrap().is_zero());
    }

    #[test]
    fn hard_cocycle_interpolates_to_the_shipped_polynomial() {
        let ext = z2_ext();
        let omega = lemma_hard_cocycle(&ext).unwrap();
        let fitted = interpolate_polynomial_cocycle(&omega, 3).unwrap();
        let shipped = builtin_cocycle(CocycleKind::HeisenbergSkinny);
        assert_eq!(fitted.poly(), shipped.poly());
        let fitted4 = interpolate_polynomial_cocycle(&omega, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(fitted4.poly(), shipped.poly());
    }

    #[test]
    fn interpolation_of_z2_skinny() {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let k = KernelCocycle::from_poly(&s);
        let fitted = interpolate_polynomial_cocycle(&k, 2).unwrap();
        assert_eq!(fitted.poly(), s.poly());
        assert!(matches!(
            interpolate_polynomial_cocycle(&k, 0),
            Err(Error::DegreeBoundTooSmall { .. })
        ));
        assert!(matches!(
            interpolate_polynomial_cocycle(&k, 1),
            Err(Error::DegreeBoundTooSmall { .. })
        ));
    }

    #[test]
    fn vandermonde_inverse() {
        let vinv = inverse_vandermonde(1);
        // nodes -1, 0, 1; f(s) = s^2 has values 1, 0, 1
        let vals = [Rational::one(), Rational::zero(), Rational::one()];
        let coeffs: Vec<Rational> = vinv
            .iter()
            .map(|row| row.iter().zip(&vals).map(|(a, b)| a * b).sum())
            .collect();
        assert_eq!(coeffs, vec![Rational::zero(), Rational::zero(), Rational::one()]);
    }
}
