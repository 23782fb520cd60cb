//! Sparse elimination for the large, very sparse differentials that show up
//! in bar resolutions: exact rank and invariant factors, no transforms.
//!
//! Strategy: peel off ±1 pivots chosen by Markowitz cost (lazy heap), with
//! unimodular row/column operations in checked i128 arithmetic, then finish
//! the small remaining core with the dense Smith form over BigInt. Each
//! unit pivot contributes an invariant factor 1, so the leftover chain is
//! exact.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix};

/// Rows are sorted (column, value) lists; a column index tracks which live
/// rows touch each column.
#[derive(Clone)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    row_data: Vec<Vec<(usize, i128)>>,
    col_rows: Vec<HashSet<usize>>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            row_data: vec![Vec::new(); rows],
            col_rows: vec![HashSet::new(); cols],
        }
    }

    /// Accumulate into an entry (build phase).
    pub fn add_to(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        let v: BigInt = v.into();
        if v.is_zero() {
            return;
        }
        let v: i128 = (&v).try_into().expect("sparse build entry fits i128");
        let row = &mut self.row_data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => {
                row[pos].1 = row[pos].1.checked_add(v).expect("sparse build overflow");
                if row[pos].1 == 0 {
                    row.remove(pos);
                    self.col_rows[j].remove(&i);
                }
            }
            Err(pos) => {
                row.insert(pos, (j, v));
                self.col_rows[j].insert(i);
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(|r| r.len()).sum()
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let mut s = Self::zero(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    s.add_to(i, j, m[(i, j)].clone());
                }
            }
        }
        s
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, BigInt)> + '_ {
        self.row_data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, v)| (i, j, BigInt::from(v))))
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows, self.cols);
        for (i, j, v) in self.iter_entries() {
            m[(i, j)] = v;
        }
        m
    }

    /// row_i -= q * row_p, by sorted merge. Maintains the column index.
    fn row_sub(&mut self, i: usize, p: usize, q: i128) {
        if q == 0 {
            return;
        }
        let prow = std::mem::take(&mut self.row_data[p]);
        let irow = std::mem::take(&mut self.row_data[i]);
        let mut out = Vec::with_capacity(irow.len() + prow.len());
        let mut a = irow.into_iter().peekable();
        let mut b = prow.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(ja, _)), Some(&&(jb, vb))) => {
                    if ja < jb {
                        out.push(a.next().unwrap());
                    } else if ja > jb {
                        let nv = q.checked_mul(vb).expect("sparse overflow");
                        out.push((jb, nv.checked_neg().expect("sparse overflow")));
                        self.col_rows[jb].insert(i);
                        b.next();
                    } else {
                        let (j, va) = a.next().unwrap();
                        let (_, vb) = *b.next().unwrap();
                        let nv = va
                            .checked_sub(q.checked_mul(vb).expect("sparse overflow"))
                            .expect("sparse overflow");
                        if nv == 0 {
                            self.col_rows[j].remove(&i);
                        } else {
                            out.push((j, nv));
                        }
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(&&(jb, vb))) => {
                    let nv = q.checked_mul(vb).expect("sparse overflow");
                    out.push((jb, nv.checked_neg().expect("sparse overflow")));
                    self.col_rows[jb].insert(i);
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.row_data[i] = out;
        self.row_data[p] = prow;
    }

    fn clear_row(&mut self, i: usize) {
        let row = std::mem::take(&mut self.row_data[i]);
        for (j, _) in row {
            self.col_rows[j].remove(&i);
        }
    }

    fn entry(&self, i: usize, j: usize) -> i128 {
        match self.row_data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => self.row_data[i][pos].1,
            Err(_) => 0,
        }
    }

    fn markowitz_cost(&self, i: usize, j: usize) -> u64 {
        let r = self.row_data[i].len() as u64;
        let c = self.col_rows[j].len() as u64;
        (r - 1) * (c - 1)
    }

    /// Eliminate ±1 pivots in Markowitz order (lazy heap). Returns the
    /// number of unit pivots used; afterwards no live entry is ±1.
    fn eliminate_units(&mut self, live_rows: &mut [bool]) -> usize {
        let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();
        for i in 0..self.rows {
            for &(j, v) in &self.row_data[i] {
                if v == 1 || v == -1 {
                    heap.push(Reverse((self.markowitz_cost(i, j), i, j)));
                }
            }
        }
        let mut units = 0usize;
        while let Some(Reverse((cost, pi, pj))) = heap.pop() {
            if !live_rows[pi] {
                continue;
            }
            let pval = self.entry(pi, pj);
            if pval != 1 && pval != -1 {
                continue;
            }
            let now = self.markowitz_cost(pi, pj);
            if now > cost {
                heap.push(Reverse((now, pi, pj)));
                continue;
            }
            let others: Vec<usize> =
                self.col_rows[pj].iter().copied().filter(|&r| r != pi).collect();
            for r in others {
                // q = entry / pval, exact since pval = ±1
                let q = self.entry(r, pj) * pval;
                self.row_sub(r, pi, q);
                for &(j, v) in &self.row_data[r] {
                    if v == 1 || v == -1 {
                        heap.push(Reverse((self.markowitz_cost(r, j), r, j)));
                    }
                }
            }
            // remaining entries in the pivot row die under column operations
            // that touch no other row
            self.clear_row(pi);
            live_rows[pi] = false;
            units += 1;
        }
        units
    }

    fn dense_core(&self, live_rows: &[bool]) -> IntMatrix {
        let rset: Vec<usize> =
            (0..self.rows).filter(|&i| live_rows[i] && !self.row_data[i].is_empty()).collect();
        let mut cset: Vec<usize> = rset
            .iter()
            .flat_map(|&i| self.row_data[i].iter().map(|&(j, _)| j))
            .collect();
        cset.sort_unstable();
        cset.dedup();
        let cpos: std::collections::HashMap<usize, usize> =
            cset.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut m = IntMatrix::zero(rset.len(), cset.len());
        for (ri, &i) in rset.iter().enumerate() {
            for &(j, v) in &self.row_data[i] {
                m[(ri, cpos[&j])] = BigInt::from(v);
            }
        }
        m
    }

    /// Exact rank and invariant factors (the full Smith chain, 1's included).
    pub fn rank_and_invariant_factors(mut self) -> (usize, Vec<BigInt>) {
        let mut live_rows = vec![true; self.rows];
        let units = self.eliminate_units(&mut live_rows);
        let core = self.dense_core(&live_rows);
        let snf = smith_normal_form(&core);
        let mut factors = vec![BigInt::one(); units];
        factors.extend(snf.invariant_factors());
        let rank = units + snf.rank();
        (rank, factors)
    }

    pub fn rank(self) -> usize {
        self.rank_and_invariant_factors().0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::cokernel_structure;

    #[test]
    fn sparse_matches_dense() {
        let m = IntMatrix::from_rows(&[
            vec![2, 4, 4, 0],
            vec![-6, 6, 12, 0],
            vec![10, 4, 16, 2],
            vec![0, 0, 0, 0],
        ]);
        let snf = smith_normal_form(&m);
        let (rank, facs) = SparseMat::from_dense(&m).rank_and_invariant_factors();
        assert_eq!(rank, snf.rank());
        assert_eq!(facs, snf.invariant_factors());
    }

    #[test]
    fn sparse_random_agreement() {
        // deterministic pseudo-random fill
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..30 {
            let r = 3 + (next() % 6) as usize;
            let c = 3 + (next() % 6) as usize;
            let m = IntMatrix::from_fn(r, c, |_, _| {
                if next() % 3 == 0 {
                    BigInt::from((next() % 9) as i64 - 4)
                } else {
                    BigInt::zero()
                }
            });
            let snf = smith_normal_form(&m);
            let (rank, facs) = SparseMat::from_dense(&m).rank_and_invariant_factors();
            assert_eq!(rank, snf.rank(), "trial {trial}");
            assert_eq!(facs, snf.invariant_factors(), "trial {trial}");
            let coker = crate::matrix::AbGroupStructure::from_moduli(m.rows() - rank, facs);
            assert_eq!(coker, cokernel_structure(&m), "trial {trial}");
        }
    }
}
