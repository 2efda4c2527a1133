use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{subgroups, ConjClass, Elem, ElemSet, FiniteGroup, SubgroupTable};

/// Default work budget (tuple visits for BFS, pair visits for the ladder).
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug)]
struct Level {
    /// `left[k][o]`: orbit of `[c_k] · o` for `o` an orbit one level down.
    left: Vec<Vec<u32>>,
    sizes: Vec<u128>,
    monodromy: Vec<Elem>,
    subgroup: Vec<usize>,
    /// Lexicographically smallest tuple of each orbit, stored as `(first
    /// entry position, tail orbit)`; ids are ordered by this pair, which is
    /// the same as ordering by the smallest tuple.
    rep_head: Vec<(u32, u32)>,
}

/// The graded ring `R = ⊕ R_n` with basis `c^n / β_n` for `0 ≤ n ≤ n_max`.
#[derive(Clone, Debug)]
pub struct ComponentRing {
    group: FiniteGroup,
    class: ConjClass,
    subgroups: SubgroupTable,
    /// `join[h][k]` = `⟨H_h, c_k⟩`
    join: Vec<Vec<usize>>,
    /// position in `c` of `c_j c_k c_j^{-1}`
    conj_pos: Vec<Vec<u32>>,
    levels: Vec<Level>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Keeps the smaller root so roots are always class minima.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else if rb < ra {
            self.parent[ra as usize] = rb;
        }
    }
}

impl ComponentRing {
    /// Builds `R_0 … R_{n_max}`; `budget` bounds the total number of pair
    /// visits (`|c|^2 · dim R_{n-2}` per level).
    pub fn build(group: &FiniteGroup, class: &ConjClass, n_max: usize, budget: u128) -> Result<Self> {
        let subgroups = subgroups(group)?;
        let k = class.len();
        let join = subgroups.join_table(group, class.elements());
        let conj_pos = class
            .elements()
            .iter()
            .map(|&gj| {
                class
                    .elements()
                    .iter()
                    .map(|&gk| class.position(group.conj_by(gk, group.inv(gj))).unwrap() as u32)
                    .collect()
            })
            .collect();
        let level0 = Level {
            left: Vec::new(),
            sizes: vec![1],
            monodromy: vec![group.identity()],
            subgroup: vec![subgroups.trivial()],
            rep_head: vec![(u32::MAX, u32::MAX)],
        };
        let mut ring = ComponentRing {
            group: group.clone(),
            class: class.clone(),
            subgroups,
            join,
            conj_pos,
            levels: vec![level0],
        };
        let mut spent: u128 = 0;
        for n in 1..=n_max {
            let prev2 = if n >= 2 { ring.levels[n - 2].sizes.len() } else { 0 };
            let prev = ring.levels[n - 1].sizes.len();
            spent += (k * k * prev2 + k * prev) as u128;
            if spent > budget {
                return Err(Error::Budget { what: "orbit ladder pair visits", needed: spent, limit: budget });
            }
            if k * prev > u32::MAX as usize {
                return Err(Error::Budget { what: "orbit ladder nodes", needed: (k * prev) as u128, limit: u32::MAX as u128 });
            }
            let level = ring.next_level(n);
            ring.levels.push(level);
        }
        Ok(ring)
    }

    fn next_level(&self, n: usize) -> Level {
        let k = self.class.len();
        let prev = &self.levels[n - 1];
        let width = prev.sizes.len();
        let node = |j: usize, o: u32| (j * width) as u32 + o;
        let mut uf = UnionFind::new(k * width);
        if n >= 2 {
            let below = self.levels[n - 2].sizes.len();
            for j in 0..k {
                for h in 0..k {
                    let gh = self.conj_pos[j][h] as usize;
                    for o2 in 0..below as u32 {
                        let lhs = node(j, prev.left[h][o2 as usize]);
                        let rhs = node(gh, prev.left[j][o2 as usize]);
                        uf.union(lhs, rhs);
                    }
                }
            }
        }
        // roots are the minimal nodes, which are the lexicographically
        // smallest (head, tail) pairs; numbering roots in node order gives
        // canonical ids
        let total = k * width;
        let mut id_of_root = vec![u32::MAX; total];
        let mut left = vec![vec![0u32; width]; k];
        let mut sizes = Vec::new();
        let mut monodromy = Vec::new();
        let mut subgroup = Vec::new();
        let mut rep_head = Vec::new();
        for x in 0..total as u32 {
            let r = uf.find(x) as usize;
            let (j, o) = (x as usize / width, x as usize % width);
            if id_of_root[r] == u32::MAX {
                id_of_root[r] = sizes.len() as u32;
                sizes.push(0);
                monodromy.push(self.group.mul(self.class.elements()[j], prev.monodromy[o]));
                subgroup.push(self.join[prev.subgroup[o]][j]);
                rep_head.push((j as u32, o as u32));
            }
            let id = id_of_root[r];
            left[j][o] = id;
            sizes[id as usize] += prev.sizes[o];
            debug_assert_eq!(
                monodromy[id as usize],
                self.group.mul(self.class.elements()[j], prev.monodromy[o])
            );
        }
        Level { left, sizes, monodromy, subgroup, rep_head }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn class(&self) -> &ConjClass {
        &self.class
    }

    pub fn subgroup_table(&self) -> &SubgroupTable {
        &self.subgroups
    }

    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    /// `dim R_n`.
    pub fn dim(&self, n: usize) -> usize {
        self.levels[n].sizes.len()
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n > self.n_max() {
            return Err(Error::IndexOutOfRange { index: n, lo: 0, hi: self.n_max() });
        }
        Ok(())
    }

    /// Left multiplication by `[c_k]`: `R_{n-1} → R_n` as an orbit map.
    pub fn left_map(&self, n: usize, k: usize) -> &[u32] {
        &self.levels[n].left[k]
    }

    pub fn orbit_size(&self, n: usize, o: usize) -> u128 {
        self.levels[n].sizes[o]
    }

    pub fn monodromy(&self, n: usize, o: usize) -> Elem {
        self.levels[n].monodromy[o]
    }

    /// Id (in the subgroup table) of the subgroup generated by the orbit's entries.
    pub fn generated_subgroup(&self, n: usize, o: usize) -> usize {
        self.levels[n].subgroup[o]
    }

    pub fn is_generating(&self, n: usize, o: usize) -> bool {
        self.levels[n].subgroup[o] == self.subgroups.whole()
    }

    /// Lexicographically smallest tuple in the orbit.
    pub fn representative(&self, n: usize, o: usize) -> Vec<Elem> {
        let mut out = Vec::with_capacity(n);
        let mut o = o;
        for m in (1..=n).rev() {
            let (j, tail) = self.levels[m].rep_head[o];
            out.push(self.class.elements()[j as usize]);
            o = tail as usize;
        }
        out
    }

    /// Orbit of an explicit tuple.
    pub fn orbit_of(&self, t: &[Elem]) -> Result<usize> {
        self.check_level(t.len())?;
        self.left_act(t, 0, 0)
    }

    /// `[t] · o` for `o ∈ R_m`.
    pub fn left_act(&self, t: &[Elem], m: usize, o: usize) -> Result<usize> {
        let top = m + t.len();
        self.check_level(top)?;
        let mut cur = o;
        for (i, &x) in t.iter().enumerate().rev() {
            let k = self.class.position(x).ok_or_else(|| Error::invalid(format!("element {x} not in class")))?;
            cur = self.levels[m + t.len() - i].left[k][cur] as usize;
        }
        Ok(cur)
    }

    /// Product of basis elements `o1 ∈ R_a` and `o2 ∈ R_b`.
    pub fn multiply(&self, a: usize, o1: usize, b: usize, o2: usize) -> Result<usize> {
        if a + b > self.n_max() {
            return Err(Error::invalid(format!("grading {a}+{b} exceeds n_max = {}", self.n_max())));
        }
        let rep = self.representative(a, o1);
        self.left_act(&rep, b, o2)
    }

    /// Orbits of generating tuples at level `n` under simultaneous
    /// conjugation; returns a component id per orbit (`None` if the orbit
    /// does not generate).
    pub fn connected_components(&self, n: usize) -> Vec<Option<usize>> {
        let dim = self.dim(n);
        let mut uf = UnionFind::new(dim);
        for o in 0..dim {
            if !self.is_generating(n, o) {
                continue;
            }
            let rep = self.representative(n, o);
            for h in self.group.elements() {
                let moved: Vec<Elem> = rep.iter().map(|&x| self.group.conj_by(x, h)).collect();
                let other = self.orbit_of(&moved).expect("class is conjugation invariant");
                uf.union(o as u32, other as u32);
            }
        }
        let mut ids = vec![None; dim];
        let mut by_root = vec![usize::MAX; dim];
        let mut next = 0;
        for o in 0..dim {
            if !self.is_generating(n, o) {
                continue;
            }
            let r = uf.find(o as u32) as usize;
            if by_root[r] == usize::MAX {
                by_root[r] = next;
                next += 1;
            }
            ids[o] = Some(by_root[r]);
        }
        ids
    }

    /// Orbits at level `n` whose entries generate exactly subgroup `h`.
    pub fn sector(&self, n: usize, h: usize) -> Vec<usize> {
        (0..self.dim(n)).filter(|&o| self.levels[n].subgroup[o] == h).collect()
    }

    /// Subgroups `H` for which some `S_n(H)` with `n ≤ n_max` is nonempty.
    pub fn occurring_subgroups(&self) -> Vec<usize> {
        let mut seen = vec![false; self.subgroups.len()];
        for lvl in &self.levels {
            for &h in &lvl.subgroup {
                seen[h] = true;
            }
        }
        (0..seen.len()).filter(|&h| seen[h]).collect()
    }

    pub fn class_set_in(&self, h: usize) -> ElemSet {
        self.class.as_set().intersection(self.subgroups.get(h))
    }

    pub fn orbit_table(&self, n: usize) -> Result<OrbitTable> {
        self.check_level(n)?;
        let comps = self.connected_components(n);
        let orbits = (0..self.dim(n))
            .map(|o| OrbitRecord {
                orbit_id: o,
                size: self.orbit_size(n, o),
                monodromy: self.monodromy(n, o),
                subgroup: self.generated_subgroup(n, o),
                subgroup_order: self.subgroups.get(self.generated_subgroup(n, o)).len(),
                generating: self.is_generating(n, o),
                component_id: comps[o],
                representative: self.representative(n, o),
            })
            .collect();
        Ok(OrbitTable {
            n,
            class_size: self.class.len(),
            group_order: self.group.order(),
            orbits,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub orbit_id: usize,
    pub size: u128,
    pub monodromy: Elem,
    pub subgroup: usize,
    pub subgroup_order: usize,
    pub generating: bool,
    pub component_id: Option<usize>,
    pub representative: Vec<Elem>,
}

/// Snapshot of the braid orbits on `c^n` with per-orbit metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTable {
    pub n: usize,
    pub class_size: usize,
    pub group_order: usize,
    pub orbits: Vec<OrbitRecord>,
}

impl OrbitTable {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn total_size(&self) -> u128 {
        self.orbits.iter().map(|o| o.size).sum()
    }

    pub fn component_count(&self) -> usize {
        self.orbits.iter().filter_map(|o| o.component_id).max().map_or(0, |m| m + 1)
    }

    /// CSV with columns `orbit_id,size,monodromy,subgroup,generating,component_id`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("orbit_id,size,monodromy,subgroup,generating,component_id\n");
        for o in &self.orbits {
            let comp = o.component_id.map_or(String::new(), |c| c.to_string());
            s.push_str(&format!("{},{},{},{},{},{}\n", o.orbit_id, o.size, o.monodromy, o.subgroup, o.generating, comp));
        }
        s
    }
}
