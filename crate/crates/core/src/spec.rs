//! Parsing of group, rack and abelian-group specification strings.
//!
//! * groups: `gdih:3`, `gdih:3,3` (generalized dihedral over `Z/3`,
//!   `Z/3 x Z/3`, with its class of involutions), `sym:3` (with its
//!   transpositions), or a path to a JSON file
//!   `{"order": n, "mul": [[…]], "class": […], "labels": […]}`
//! * racks: `trivial:m` or any group spec (conjugation rack on the class)
//! * abelian `ℓ`-groups: invariant factors `3`, `9`, `3,3`, or `trivial:ℓ`

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{build_generalized_dihedral, AbelianGroupType, ConjClass, Elem, FiniteGroup};
use crate::rack::{conjugation_rack, Rack};

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub spec: String,
    pub group: FiniteGroup,
    pub class: ConjClass,
}

/// Multiplication-table file format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupTableFile {
    pub order: usize,
    pub mul: Vec<Vec<Elem>>,
    pub class: Vec<Elem>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| Error::invalid(format!("'{x}' is not a positive integer"))))
        .collect()
}

pub fn parse_abelian_spec(s: &str) -> Result<AbelianGroupType> {
    if let Some(ell) = s.strip_prefix("trivial:") {
        let ell = ell.trim().parse::<u64>().map_err(|_| Error::invalid(format!("bad prime in '{s}'")))?;
        return AbelianGroupType::trivial(ell);
    }
    AbelianGroupType::from_invariant_factors(&parse_list(s)?)
}

pub fn group_from_table_file(file: &GroupTableFile, name: &str) -> Result<GroupSpec> {
    if file.mul.len() != file.order {
        return Err(Error::invalid(format!("table has {} rows, order is {}", file.mul.len(), file.order)));
    }
    let group = FiniteGroup::from_table(file.mul.clone(), file.labels.clone())?;
    let class = ConjClass::new(&group, file.class.clone())?;
    Ok(GroupSpec { spec: name.to_string(), group, class })
}

pub fn parse_group_spec(s: &str) -> Result<GroupSpec> {
    if let Some(rest) = s.strip_prefix("gdih:") {
        let a = AbelianGroupType::from_invariant_factors(&parse_list(rest)?)?;
        let (group, class) = build_generalized_dihedral(&a)?;
        return Ok(GroupSpec { spec: s.to_string(), group, class });
    }
    if let Some(rest) = s.strip_prefix("sym:") {
        let n: usize = rest.trim().parse().map_err(|_| Error::invalid(format!("bad degree in '{s}'")))?;
        if n < 2 {
            return Err(Error::invalid("sym:n needs n >= 2"));
        }
        let group = FiniteGroup::symmetric(n)?;
        let t = group.elements().find(|&x| group.label(x) == "(1 2)").expect("transposition exists");
        let class = ConjClass::of(&group, t);
        return Ok(GroupSpec { spec: s.to_string(), group, class });
    }
    let path = s.strip_prefix("json:").unwrap_or(s);
    if path.ends_with(".json") || s.starts_with("json:") {
        let text = std::fs::read_to_string(Path::new(path))
            .map_err(|e| Error::invalid(format!("cannot read {path}: {e}")))?;
        let file: GroupTableFile =
            serde_json::from_str(&text).map_err(|e| Error::invalid(format!("bad group table {path}: {e}")))?;
        return group_from_table_file(&file, s);
    }
    Err(Error::invalid(format!("unrecognized group spec '{s}' (expected gdih:…, sym:n or a .json table)")))
}

pub fn parse_rack_spec(s: &str) -> Result<Rack> {
    if let Some(m) = s.strip_prefix("trivial:") {
        let m: usize = m.trim().parse().map_err(|_| Error::invalid(format!("bad size in '{s}'")))?;
        if m == 0 {
            return Err(Error::invalid("rack size must be positive"));
        }
        return Ok(Rack::trivial(m));
    }
    let g = parse_group_spec(s)?;
    Ok(conjugation_rack(&g.group, &g.class))
}
