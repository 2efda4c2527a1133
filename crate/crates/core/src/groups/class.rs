use serde::{Deserialize, Serialize};

use super::{subgroups, Elem, ElemSet, FiniteGroup};
use crate::error::{Error, Result};

/// A conjugation-invariant subset `c ⊂ G` whose members share one order.
///
/// Usually a single conjugacy class, but orbit enumeration accepts any
/// invariant subset; [`ConjClass::is_single_class`] tells them apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    elements: Vec<Elem>,
    common_order: usize,
}

impl ConjClass {
    pub fn new(g: &FiniteGroup, mut elements: Vec<Elem>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::invalid("class must be nonempty"));
        }
        if let Some(&x) = elements.iter().find(|&&x| x >= g.order()) {
            return Err(Error::invalid(format!("element {x} not in group")));
        }
        let set: ElemSet = elements.iter().copied().collect();
        for &x in &elements {
            for h in g.elements() {
                if !set.contains(g.conj_by(x, h)) {
                    return Err(Error::invalid("subset is not closed under conjugation"));
                }
            }
        }
        let common_order = g.elem_order(elements[0]);
        if elements.iter().any(|&x| g.elem_order(x) != common_order) {
            return Err(Error::invalid("class members have different orders"));
        }
        Ok(ConjClass { elements, common_order })
    }

    /// The conjugacy class of `x`.
    pub fn of(g: &FiniteGroup, x: Elem) -> Self {
        let set: ElemSet = g.elements().map(|h| g.conj_by(x, h)).collect();
        ConjClass { elements: set.iter().collect(), common_order: g.elem_order(x) }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn common_order(&self) -> usize {
        self.common_order
    }

    pub fn as_set(&self) -> ElemSet {
        self.elements.iter().copied().collect()
    }

    /// Position of `x` inside the sorted element list.
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.position(x).is_some()
    }

    pub fn generates(&self, g: &FiniteGroup) -> bool {
        g.closure(&self.as_set()).len() == g.order()
    }

    pub fn is_single_class(&self, g: &FiniteGroup) -> bool {
        ConjClass::of(g, self.elements[0]).elements == self.elements
    }
}

/// Partition of `set` into orbits under conjugation by elements of `by`.
pub(crate) fn conjugacy_orbits(g: &FiniteGroup, set: &ElemSet, by: &ElemSet) -> Vec<ElemSet> {
    let mut seen = ElemSet::new();
    let mut out = Vec::new();
    for x in set.iter() {
        if seen.contains(x) {
            continue;
        }
        let orbit: ElemSet = by.iter().map(|h| g.conj_by(x, h)).collect();
        seen = seen.union(&orbit);
        out.push(orbit);
    }
    out
}

/// `c` generates `G` and is closed under `g ↦ g^n` for `n` prime to `|G|`.
pub fn is_admissible(g: &FiniteGroup, c: &ConjClass) -> bool {
    if !c.generates(g) {
        return false;
    }
    let n = g.order();
    let coprime: Vec<u64> = (1..=n as u64).filter(|&k| gcd(k, n as u64) == 1).collect();
    c.elements().iter().all(|&x| coprime.iter().all(|&k| c.contains(g.pow(x, k))))
}

/// `c` generates `G` and, for every subgroup `H`, `c ∩ H` is empty or one
/// `H`-conjugacy class.
pub fn is_nonsplitting(g: &FiniteGroup, c: &ConjClass) -> bool {
    if !c.generates(g) {
        return false;
    }
    let table = match subgroups(g) {
        Ok(t) => t,
        Err(_) => return false,
    };
    let cset = c.as_set();
    let ok = table.iter().all(|h| {
        let meet = cset.intersection(h);
        meet.is_empty() || conjugacy_orbits(g, &meet, h).len() == 1
    });
    ok
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_generalized_dihedral, AbelianGroupType};

    fn s3() -> (FiniteGroup, ConjClass) {
        let g = FiniteGroup::symmetric(3).unwrap();
        let t = g.elements().find(|&x| g.elem_order(x) == 2).unwrap();
        let c = ConjClass::of(&g, t);
        (g, c)
    }

    #[test]
    fn s3_transpositions_admissible_and_nonsplitting() {
        let (g, c) = s3();
        assert_eq!(c.len(), 3);
        assert!(c.is_single_class(&g));
        assert!(is_admissible(&g, &c));
        assert!(is_nonsplitting(&g, &c));
    }

    #[test]
    fn z4_generator_not_admissible() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let c = ConjClass::new(&g, vec![1]).unwrap();
        assert!(c.generates(&g));
        assert!(!is_admissible(&g, &c));
    }

    #[test]
    fn identity_class_does_not_generate() {
        let (g, _) = s3();
        let c = ConjClass::new(&g, vec![g.identity()]).unwrap();
        assert!(!is_admissible(&g, &c));
        assert!(!is_nonsplitting(&g, &c));
    }

    #[test]
    fn klein_four_involutions_split() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let c = ConjClass::new(&g, vec![1, 2, 3]).unwrap();
        assert!(c.generates(&g));
        assert!(!c.is_single_class(&g));
        assert!(!is_nonsplitting(&g, &c));
    }

    #[test]
    fn rejects_non_invariant_subsets() {
        let (g, c) = s3();
        assert!(ConjClass::new(&g, vec![c.elements()[0]]).is_err());
        assert!(ConjClass::new(&g, vec![]).is_err());
    }

    #[test]
    fn generalized_dihedral_pairs_are_good() {
        for factors in [vec![3u64], vec![9], vec![3, 3], vec![5]] {
            let a = AbelianGroupType::from_invariant_factors(&factors).unwrap();
            let (g, c) = build_generalized_dihedral(&a).unwrap();
            assert!(is_admissible(&g, &c), "{factors:?}");
            assert!(is_nonsplitting(&g, &c), "{factors:?}");
            for h in g.elements() {
                let moved: ElemSet = c.elements().iter().map(|&x| g.conj_by(x, h)).collect();
                assert_eq!(moved, c.as_set());
            }
        }
    }
}
