//! Stable string keys for every named map, used by the CLI and reports.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{
    cartan_cp2, eta3_printed, eta_cross, eta_from_eta3, eta_n, induced_sphere_map, phi,
    phi2_closed, phi2_rational, phi2_reduced, phi_steenrod, pointwise_product, psi, sample_sp2_map,
    sp_candidate, zeta, UnitarySphereMap,
};

/// One line of the registry listing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegistryEntry {
    pub name: String,
    pub signature: String,
    pub domain_dim: usize,
    pub target_size: usize,
    pub special: bool,
    pub provenance: String,
}

impl RegistryEntry {
    fn of(map: &UnitarySphereMap) -> Self {
        Self {
            name: map.name().to_string(),
            signature: map.signature(),
            domain_dim: map.domain_dim(),
            target_size: map.target_size(),
            special: map.special(),
            provenance: map.provenance().to_string(),
        }
    }
}

/// Keys shown by the default listing.
pub fn default_keys() -> Vec<String> {
    let mut keys: Vec<String> = (1..=4).map(|k| format!("zeta{k}")).collect();
    keys.extend((1..=4).map(|n| format!("eta{n}")));
    keys.extend(
        [
            "eta3_printed",
            "eta_cross",
            "eta_from_eta3",
            "eta_cross_sq",
            "cartan_cp2",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    keys.extend((2..=5).map(|n| format!("phi.n={n}")));
    keys.extend((2..=5).map(|n| format!("phi_steenrod.n={n}")));
    for n in 2..=4 {
        keys.extend((1..=n).map(|j| format!("psi.n={n},j={j}")));
    }
    for m in 1..=2 {
        keys.push(format!("phi2.m={m}"));
        keys.push(format!("phi2_rational.m={m}"));
        keys.push(format!("phi2_reduced.m={m}"));
    }
    keys.push("sp_candidate.k=3,n=3".into());
    keys.push("sp_sample.m=2".into());
    keys
}

pub fn registry_listing() -> Result<Vec<RegistryEntry>> {
    default_keys()
        .iter()
        .map(|k| lookup(k).map(|m| RegistryEntry::of(&m)))
        .collect()
}

/// Parses `key=value` pairs after the first `.` of a parametrized name.
fn params(rest: &str) -> Option<Vec<(&str, usize)>> {
    rest.split(',')
        .map(|kv| {
            let (k, v) = kv.split_once('=')?;
            Some((k.trim(), v.trim().parse().ok()?))
        })
        .collect()
}

fn param(ps: &[(&str, usize)], key: &str) -> Option<usize> {
    ps.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
}

/// Maximum parameter accepted by lookups (keeps matrices within inline storage).
const MAX_SIZE: usize = 8;

pub fn lookup(name: &str) -> Result<UnitarySphereMap> {
    let unknown = || Error::UnknownMap(name.to_string());
    let in_range = |v: usize, lo: usize| (lo..=MAX_SIZE).contains(&v);
    match name {
        "eta3_printed" => return Ok(eta3_printed()),
        "eta_cross" => return Ok(eta_cross()),
        "eta_from_eta3" => return Ok(eta_from_eta3()),
        "cartan_cp2" => return Ok(cartan_cp2()),
        "eta_cross_sq" => {
            let e = eta_cross();
            return Ok(pointwise_product(&e, &e)?.renamed("eta_cross_sq", "eta_cross times itself"));
        }
        "sp_sample.m=2" => return Ok(sample_sp2_map()),
        _ => {}
    }
    if let Some(k) = name
        .strip_prefix("zeta")
        .and_then(|s| s.parse::<usize>().ok())
    {
        // ζ_k has size 2^{k−1}
        return if (1..=4).contains(&k) {
            Ok(zeta(k))
        } else {
            Err(unknown())
        };
    }
    if let Some(n) = name
        .strip_prefix("eta")
        .and_then(|s| s.parse::<usize>().ok())
    {
        return if in_range(n, 1) {
            eta_n(n)
        } else {
            Err(unknown())
        };
    }
    let (family, rest) = name.split_once('.').ok_or_else(unknown)?;
    let ps = params(rest).ok_or_else(unknown)?;
    let get = |key: &str| param(&ps, key).ok_or_else(unknown);
    let map = match family {
        "phi" => {
            let n = get("n")?;
            if !in_range(n, 1) {
                return Err(unknown());
            }
            phi(n)
        }
        "phi_steenrod" => {
            let n = get("n")?;
            if !in_range(n, 1) {
                return Err(unknown());
            }
            phi_steenrod(n)
        }
        "psi" => {
            let (n, j) = (get("n")?, get("j")?);
            if !in_range(n, 2) || j == 0 || j > n {
                return Err(unknown());
            }
            let g = eta_n(n)?;
            induced_sphere_map(&psi(n, j, &g)?)?.renamed(
                name,
                format!("psi_{j} built from eta{n}, factored through the suspension chart"),
            )
        }
        "phi2" | "phi2_rational" | "phi2_reduced" => {
            let m = get("m")?;
            if !in_range(2 * m, 2) {
                return Err(unknown());
            }
            match family {
                "phi2" => phi2_closed(m),
                "phi2_rational" => phi2_rational(m),
                _ => phi2_reduced(m)?,
            }
        }
        "sp_candidate" => {
            let (k, n) = (get("k")?, get("n")?);
            if (k, n) != (3, 3) {
                return Err(unknown());
            }
            sp_candidate(3, 3, &eta_n(3)?)?.renamed(name, "B(eta3 times its transpose)")
        }
        _ => return Err(unknown()),
    };
    Ok(map)
}
