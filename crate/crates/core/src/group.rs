//! Finite groups given by multiplication tables over element indices.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite group as a multiplication table: `table[i][j]` is the index of
/// the product of elements `i` and `j`. Element 0 need not be the identity;
/// the identity is located on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Group("empty multiplication table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::Group("malformed multiplication table".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Group("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::Group(format!("element {x} has no inverse")))?;
            inverse[x] = inv;
        }
        // associativity: cheap at the sizes we handle (|G| <= 48)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Group(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        if labels.len() != n {
            return Err(Error::Group("label count != group order".into()));
        }
        Ok(FiniteGroup { table, labels, identity, inverse })
    }

    /// Cyclic group of order n, element i = residue i.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::new(table, Some(labels)).expect("cyclic table is a group")
    }

    /// Direct product; element index = i * |h| + j.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let n = g.order();
        let m = h.order();
        let idx = |i: usize, j: usize| i * m + j;
        let table: Vec<Vec<usize>> = (0..n * m)
            .map(|a| {
                let (i1, j1) = (a / m, a % m);
                (0..n * m)
                    .map(|b| {
                        let (i2, j2) = (b / m, b % m);
                        idx(g.mul(i1, i2), h.mul(j1, j2))
                    })
                    .collect()
            })
            .collect();
        let labels =
            (0..n * m).map(|a| format!("({},{})", g.labels[a / m], h.labels[a % m])).collect();
        Self::new(table, Some(labels)).expect("product table is a group")
    }

    /// Unit group (Z/n)^*, elements labelled by their residues.
    pub fn units_mod(n: u64) -> Self {
        let residues: Vec<u64> = (1..n).filter(|a| num_integer::gcd(*a, n) == 1).collect();
        let pos = |r: u64| residues.iter().position(|&x| x == r).unwrap();
        let table: Vec<Vec<usize>> = residues
            .iter()
            .map(|&a| residues.iter().map(|&b| pos(a * b % n)).collect())
            .collect();
        let labels = residues.iter().map(|r| r.to_string()).collect();
        Self::new(table, Some(labels)).expect("unit-group table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.table
    }

    /// Index of the element with the given label, if any.
    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order()).all(|x| self.mul(a, x) == self.mul(x, a))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| self.is_central(a))
    }

    /// Sorted element set of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        if set.is_empty() || !set.contains(&self.identity) {
            return false;
        }
        set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// A small generating set found greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![self.identity];
        // pick highest-order elements first so cyclic groups get one generator
        let mut order_sorted: Vec<usize> = (0..self.order()).collect();
        order_sorted.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        for a in order_sorted {
            if !span.contains(&a) {
                gens.push(a);
                span = self.subgroup_generated(&gens);
                if span.len() == self.order() {
                    break;
                }
            }
        }
        gens
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|a| self.element_order(a) == self.order())
    }

    /// A generator when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&a| self.element_order(a) == self.order())
    }

    /// Left cosets gH of the subgroup `sub`, each sorted, the list sorted by
    /// minimal representative. This fixed ordering is the basis-ordering
    /// convention used by every lattice construction downstream.
    pub fn left_cosets(&self, sub: &[usize]) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in 0..self.order() {
            if assigned[g] {
                continue;
            }
            let mut coset: Vec<usize> = sub.iter().map(|&h| self.mul(g, h)).collect();
            coset.sort_unstable();
            coset.dedup();
            for &x in &coset {
                assigned[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Orbits of left multiplication by the subgroup `d` on the left cosets
    /// of `h`, i.e. the double cosets d\G/h. Each orbit is a sorted list of
    /// coset indices into `left_cosets(h)`.
    pub fn double_coset_orbits(&self, d: &[usize], h: &[usize]) -> Vec<Vec<usize>> {
        let cosets = self.left_cosets(h);
        let coset_of = |x: usize| cosets.iter().position(|c| c.binary_search(&x).is_ok()).unwrap();
        let mut assigned = vec![false; cosets.len()];
        let mut orbits = Vec::new();
        for (ci, coset) in cosets.iter().enumerate() {
            if assigned[ci] {
                continue;
            }
            let rep = coset[0];
            let mut orbit: Vec<usize> = d.iter().map(|&x| coset_of(self.mul(x, rep))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                assigned[x] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Quotient by a central subgroup of order 2 generated by `iota`:
    /// returns the quotient group and the projection on element indices.
    pub fn quotient_by_involution(&self, iota: usize) -> Result<(FiniteGroup, Vec<usize>)> {
        if iota == self.identity || self.mul(iota, iota) != self.identity {
            return Err(Error::Group("not an involution".into()));
        }
        if !self.is_central(iota) {
            return Err(Error::Group("involution is not central".into()));
        }
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            class_of[x] = c;
            class_of[self.mul(iota, x)] = c;
            reps.push(x);
        }
        let table: Vec<Vec<usize>> = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| class_of[self.mul(a, b)]).collect())
            .collect();
        let labels = reps.iter().map(|&r| format!("[{}]", self.labels[r])).collect();
        Ok((FiniteGroup::new(table, Some(labels))?, class_of))
    }

    /// The subgroup `set` as a group in its own right, with the index map
    /// back into the ambient group.
    pub fn subgroup_as_group(&self, set: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(set) {
            return Err(Error::Group("element set is not a subgroup".into()));
        }
        let pos = |x: usize| set.iter().position(|&y| y == x).unwrap();
        let table: Vec<Vec<usize>> =
            set.iter().map(|&a| set.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        let labels = set.iter().map(|&x| self.labels[x].clone()).collect();
        Ok((FiniteGroup::new(table, Some(labels))?, set.to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_mod_13() {
        let g = FiniteGroup::units_mod(13);
        assert_eq!(g.order(), 12);
        assert!(g.is_abelian());
        assert!(g.is_cyclic());
        let three = g.element_by_label("3").unwrap();
        assert_eq!(g.element_order(three), 3);
        let d3 = g.subgroup_generated(&[three]);
        assert_eq!(d3.len(), 3);
        assert_eq!(g.left_cosets(&d3).len(), 4);
    }

    #[test]
    fn quotient_by_involution_works() {
        let g = FiniteGroup::units_mod(15);
        assert_eq!(g.order(), 8);
        let iota = g.element_by_label("14").unwrap();
        let (q, proj) = g.quotient_by_involution(iota).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(proj.len(), 8);
    }

    #[test]
    fn generators_span() {
        for n in [4u64, 8, 15, 20, 24] {
            let g = FiniteGroup::units_mod(n);
            let gens = g.generators();
            assert_eq!(g.subgroup_generated(&gens).len(), g.order());
        }
    }

    #[test]
    fn double_cosets_count() {
        let g = FiniteGroup::units_mod(13);
        let d = g.subgroup_generated(&[g.element_by_label("3").unwrap()]);
        let h = g.subgroup_generated(&[g.element_by_label("5").unwrap()]);
        let orbits = g.double_coset_orbits(&d, &h);
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        assert_eq!(total, g.order() / h.len());
    }
}
