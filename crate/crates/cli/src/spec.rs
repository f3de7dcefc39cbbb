//! Parsing of the small spec strings the CLI accepts: basis-set selectors,
//! witness selectors, state families, parameter lists, and grids.

use std::collections::BTreeMap;

use mubwit_core::analysis::StateFamily;
use mubwit_core::mubs::{complete_set, d3_fixture, d4_fixtures, fourier_pair, MubSet};
use mubwit_core::states::{isotropic, rho_a, rho_b, rho_x, DensityState};
use mubwit_core::Error as CoreError;

use crate::CliError;

fn domain(msg: impl Into<String>) -> CliError {
    CliError::Core(CoreError::Domain(msg.into()))
}

fn parse_index_list(set: &MubSet, list: &str) -> Result<Vec<String>, CliError> {
    if list == "all" {
        return Ok(set.labels());
    }
    let mut labels = Vec::new();
    for part in list.split(',') {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|_| domain(format!("bad basis index `{part}`")))?;
        if idx >= set.m() {
            return Err(domain(format!(
                "basis index {idx} out of range (set has {} bases)",
                set.m()
            )));
        }
        labels.push(set.basis(idx).label().to_string());
    }
    Ok(labels)
}

/// Resolve a basis-set selector such as `hw:0,1,2`, `hw:all`, `pauli:all`,
/// `d3:0,1,2`, `fourier`, `fixture:ext` or `fixture:unext` into a verified
/// set together with the selected labels.
pub fn resolve_bases(d: usize, spec: &str) -> Result<(MubSet, Vec<String>), CliError> {
    let mut parts = spec.splitn(2, ':');
    let kind = parts.next().unwrap_or("");
    let rest = parts.next();
    let (set, selection) = match kind {
        "hw" => {
            let set = complete_set(d).map_err(CliError::Core)?;
            let labels = parse_index_list(&set, rest.unwrap_or("all"))?;
            (set, labels)
        }
        "pauli" => {
            if d != 2 {
                return Err(domain(format!("pauli bases exist for --d 2 only, got {d}")));
            }
            let set = mubwit_core::mubs::d2_complete();
            let labels = parse_index_list(&set, rest.unwrap_or("all"))?;
            (set, labels)
        }
        "d3" => {
            if d != 3 {
                return Err(domain(format!("the d3 fixture set needs --d 3, got {d}")));
            }
            let set = d3_fixture();
            let labels = parse_index_list(&set, rest.unwrap_or("all"))?;
            (set, labels)
        }
        "fourier" => {
            let set = fourier_pair(d).map_err(CliError::Core)?;
            let labels = set.labels();
            (set, labels)
        }
        "fixture" => {
            if d != 4 {
                return Err(domain(format!("fixture triples need --d 4, got {d}")));
            }
            let mut sub = rest.unwrap_or("").splitn(2, ':');
            let which = sub.next().unwrap_or("");
            let (ext, unext) = d4_fixtures();
            let set = match which {
                "ext" => ext,
                "unext" => unext,
                other => {
                    return Err(domain(format!(
                        "unknown fixture `{other}`; available: ext, unext"
                    )))
                }
            };
            let labels = parse_index_list(&set, sub.next().unwrap_or("all"))?;
            (set, labels)
        }
        other => {
            return Err(domain(format!(
                "unknown basis selector `{other}`; available: hw, pauli, d3, fourier, fixture"
            )))
        }
    };
    Ok((set, selection))
}

/// A parsed scan-witness selector: set spec, shift, gamma flag.
pub struct WitnessSelector {
    pub set: MubSet,
    pub labels: Vec<String>,
    pub s: usize,
    pub gamma: bool,
    pub display: String,
}

/// Parse `hw:0,1,2:s=1[:gamma|:nogamma]`; scans default to the
/// partial-transposed witness, which is the detection configuration.
pub fn resolve_witness(d: usize, spec: &str) -> Result<WitnessSelector, CliError> {
    let segments: Vec<&str> = spec.split(':').collect();
    let mut s_value: Option<usize> = None;
    let mut gamma = true;
    let mut set_end = segments.len();
    for (i, seg) in segments.iter().enumerate() {
        if let Some(v) = seg.strip_prefix("s=") {
            s_value = Some(
                v.parse()
                    .map_err(|_| domain(format!("bad shift `{seg}`")))?,
            );
            set_end = set_end.min(i);
        } else if *seg == "gamma" {
            gamma = true;
            set_end = set_end.min(i);
        } else if *seg == "nogamma" {
            gamma = false;
            set_end = set_end.min(i);
        }
    }
    let s = s_value.ok_or_else(|| domain("witness selector needs an `s=<shift>` segment"))?;
    let set_spec = segments[..set_end].join(":");
    let (set, labels) = resolve_bases(d, &set_spec)?;
    Ok(WitnessSelector {
        set,
        labels,
        s,
        gamma,
        display: set_spec,
    })
}

/// Parse `k=v,k=v` parameter lists.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut map = BTreeMap::new();
    for pair in s.split(',').filter(|p| !p.is_empty()) {
        let mut kv = pair.splitn(2, '=');
        let key = kv.next().unwrap_or("").trim();
        let value = kv
            .next()
            .ok_or_else(|| domain(format!("parameter `{pair}` is not of the form k=v")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| domain(format!("parameter `{pair}` has a non-numeric value")))?;
        map.insert(key.to_string(), value);
    }
    Ok(map)
}

fn require(params: &BTreeMap<String, f64>, key: &str, family: &str) -> Result<f64, CliError> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| domain(format!("state family {family} needs parameter {key}")))
}

/// Build a state from a family name and a parameter map.
pub fn build_state(family: &str, params: &BTreeMap<String, f64>) -> Result<DensityState, CliError> {
    let state = match family {
        "rho_x" => {
            let d = require(params, "d", family)? as usize;
            let s = require(params, "s", family)? as usize;
            let x = require(params, "x", family)?;
            rho_x(d, s, x)
        }
        "rho_a" => rho_a(require(params, "a", family)?),
        "rho_b" => rho_b(require(params, "b", family)?),
        "isotropic" => {
            let d = require(params, "d", family)? as usize;
            isotropic(d, require(params, "p", family)?)
        }
        other => {
            return Err(domain(format!(
                "unknown state family `{other}`; available: rho_x, rho_a, rho_b, isotropic"
            )))
        }
    };
    state.map_err(CliError::Core)
}

/// Resolve a scan state family by name; rho_x inherits the witness shift.
pub fn resolve_family(name: &str, d: usize, witness_s: usize) -> Result<StateFamily, CliError> {
    match name {
        "rho_x" => Ok(StateFamily::RhoX { d, s: witness_s }),
        "rho_a" => {
            if d != 4 {
                return Err(domain("rho_a lives in d = 4"));
            }
            Ok(StateFamily::RhoA)
        }
        "rho_b" => {
            if d != 4 {
                return Err(domain("rho_b lives in d = 4"));
            }
            Ok(StateFamily::RhoB)
        }
        "isotropic" => Ok(StateFamily::Isotropic { d }),
        other => Err(domain(format!(
            "unknown state family `{other}`; available: rho_x, rho_a, rho_b, isotropic"
        ))),
    }
}

/// Parse `x=0.1:2.0:0.1` into a parameter name and an inclusive grid.
pub fn parse_grid(s: &str) -> Result<(String, Vec<f64>), CliError> {
    let mut kv = s.splitn(2, '=');
    let name = kv.next().unwrap_or("").trim().to_string();
    let spec = kv
        .next()
        .ok_or_else(|| domain("grid must look like x=start:end:step"))?;
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(domain("grid must look like x=start:end:step"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| domain(format!("bad grid bounds in `{s}`")))?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || end < start {
        return Err(domain("grid needs start <= end and step > 0"));
    }
    let count = ((end - start) / step + 0.5).floor() as usize + 1;
    let values = (0..count)
        .map(|k| {
            let v = start + step * k as f64;
            // tidy accumulated binary noise so CSV params read like the request
            (v * 1e9).round() / 1e9
        })
        .collect();
    Ok((name, values))
}
