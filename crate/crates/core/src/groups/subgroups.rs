use std::collections::{BTreeSet, HashMap};

use super::{Elem, ElemSet, FiniteGroup};
use crate::error::{Error, Result};

pub const MAX_SUBGROUP_ORDER: usize = 200;

/// All subgroups of a group, sorted by `(order, element set)`.
///
/// Index 0 is always the trivial subgroup and the last index the whole group.
#[derive(Clone, Debug)]
pub struct SubgroupTable {
    subgroups: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
}

impl SubgroupTable {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn get(&self, id: usize) -> &ElemSet {
        &self.subgroups[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ElemSet> {
        self.subgroups.iter()
    }

    pub fn id_of(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn whole(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// `true` when subgroup `inner` is contained in subgroup `outer`.
    pub fn contains(&self, outer: usize, inner: usize) -> bool {
        self.subgroups[inner].is_subset(&self.subgroups[outer])
    }

    /// `join[h][k]` = id of `⟨H_h, elems[k]⟩`.
    pub fn join_table(&self, g: &FiniteGroup, elems: &[Elem]) -> Vec<Vec<usize>> {
        self.subgroups
            .iter()
            .map(|h| {
                elems
                    .iter()
                    .map(|&x| {
                        if h.contains(x) {
                            self.index[h]
                        } else {
                            let mut gens = *h;
                            gens.insert(x);
                            self.index[&g.closure(&gens)]
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Enumerates every subgroup: start from the cyclic subgroups and join with
/// single elements until no new subgroup appears.
pub fn subgroups(g: &FiniteGroup) -> Result<SubgroupTable> {
    if g.order() > MAX_SUBGROUP_ORDER {
        return Err(Error::Budget {
            what: "subgroup enumeration (group order)",
            needed: g.order() as u128,
            limit: MAX_SUBGROUP_ORDER as u128,
        });
    }
    let mut found: BTreeSet<(usize, ElemSet)> = BTreeSet::new();
    let mut queue = Vec::new();
    for x in g.elements() {
        let h = g.closure(&ElemSet::singleton(x));
        if found.insert((h.len(), h)) {
            queue.push(h);
        }
    }
    while let Some(h) = queue.pop() {
        for x in g.elements() {
            if h.contains(x) {
                continue;
            }
            let mut gens = h;
            gens.insert(x);
            let k = g.closure(&gens);
            if found.insert((k.len(), k)) {
                queue.push(k);
            }
        }
    }
    let subgroups: Vec<ElemSet> = found.into_iter().map(|(_, s)| s).collect();
    let index = subgroups.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    Ok(SubgroupTable { subgroups, index })
}

/// Id of `⟨s⟩` inside `table`.
pub fn generated_subgroup(table: &SubgroupTable, g: &FiniteGroup, s: &ElemSet) -> usize {
    table
        .id_of(&g.closure(s))
        .expect("subgroup table is complete for this group")
}
