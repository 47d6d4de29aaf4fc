//! Resolution of `--group`, `--cocycle` and `--cycle` arguments into
//! library values: builtin names or JSON files.

use std::fs;
use std::sync::Arc;

use nilstab_core::cohomology::{
    builtin_cocycle, central_commutator_cycle, voiculescu_cycle, Chain2, Cocycle, CocycleKind, PolyCocycle,
};
use nilstab_core::group::{heisenberg3, make_builtin, GroupKind, MalcevGroup};
use nilstab_core::json::{chain_from_json, cocycle_poly_from_json, group_from_json};

use crate::Failure;

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

pub fn group_kind(spec: &str) -> Result<GroupKind, Failure> {
    if let Some(m) = spec.strip_prefix("lattice:") {
        let m: usize = m
            .parse()
            .map_err(|_| Failure::Usage(format!("bad lattice rank in {spec:?}")))?;
        return Ok(GroupKind::Lattice(m));
    }
    if spec == "heisenberg3" {
        return Ok(GroupKind::Heisenberg3);
    }
    Ok(GroupKind::FromSpec(read(spec)?))
}

/// The group as written, without validation.
pub fn raw_group(spec: &str) -> Result<Arc<MalcevGroup>, Failure> {
    let g = match group_kind(spec)? {
        GroupKind::Lattice(0) => return Err(Failure::Usage("lattice rank must be positive".into())),
        GroupKind::Lattice(m) => MalcevGroup::lattice(m),
        GroupKind::Heisenberg3 => heisenberg3(),
        GroupKind::FromSpec(text) => group_from_json(&text)?,
    };
    Ok(Arc::new(g))
}

pub fn validated_group(spec: &str) -> Result<Arc<MalcevGroup>, Failure> {
    Ok(make_builtin(&group_kind(spec)?)?)
}

pub fn builtin_kind(spec: &str) -> Option<CocycleKind> {
    match spec {
        "builtin:z2_skinny" => Some(CocycleKind::Z2Skinny),
        "builtin:heisenberg_skinny" => Some(CocycleKind::HeisenbergSkinny),
        _ => None,
    }
}

/// A cocycle bound to `group`; its Hirsch length must match.
pub fn cocycle(spec: &str, group: &Arc<MalcevGroup>) -> Result<PolyCocycle, Failure> {
    let m = group.hirsch();
    let (name, hirsch, poly) = if spec == "zero" {
        return Ok(PolyCocycle::zero(group.clone()));
    } else if let Some(kind) = builtin_kind(spec) {
        let b = builtin_cocycle(kind);
        (b.name().to_string(), b.group().hirsch(), b.poly().clone())
    } else if spec.starts_with("builtin:") {
        return Err(Failure::Usage(format!("unknown builtin cocycle {spec:?}")));
    } else {
        cocycle_poly_from_json(&read(spec)?)?
    };
    if hirsch != m {
        return Err(Failure::Usage(format!(
            "cocycle {name} is for Hirsch length {hirsch}, group {} has {m}",
            group.name()
        )));
    }
    Ok(PolyCocycle::new(group.clone(), poly, name)?)
}

pub fn cycle(spec: &str, m: usize) -> Result<Chain2, Failure> {
    match spec {
        "builtin:voiculescu" => {
            if m != 2 {
                return Err(Failure::Usage("the voiculescu cycle needs Hirsch length 2".into()));
            }
            Ok(voiculescu_cycle())
        }
        "builtin:c1" => Ok(central_commutator_cycle(m, 1)),
        _ => {
            if let Some(k) = spec.strip_prefix("builtin:c:") {
                let k: i64 = k
                    .parse()
                    .map_err(|_| Failure::Usage(format!("bad multiple in {spec:?}")))?;
                return Ok(central_commutator_cycle(m, k));
            }
            if spec.starts_with("builtin:") {
                return Err(Failure::Usage(format!("unknown builtin cycle {spec:?}")));
            }
            Ok(chain_from_json(&read(spec)?, m)?)
        }
    }
}

/// The Voiculescu cycle in Hirsch length 2, `c1` otherwise.
pub fn default_cycle(m: usize) -> Result<Chain2, Failure> {
    if m == 2 {
        cycle("builtin:voiculescu", m)
    } else {
        cycle("builtin:c1", m)
    }
}
