//! Exact integer linear algebra over Z: dense matrices, Smith normal form,
//! kernels, cokernels, and exactness checks for sequences of lattice maps.
//!
//! Everything here is exact; there is no floating point anywhere in this
//! module. Matrices are dense `BigInt` and intended for dimensions up to a
//! few hundred. Larger, very sparse matrices (bar-resolution differentials)
//! go through [`crate::matrix::sparse`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

pub mod sparse;

/// Dense matrix over Z, row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from rows of machine integers (convenience for tests and presets).
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let e = &mut out[(i, j)];
                        *e += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | rhs].
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation [self; rhs].
    pub fn vstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols);
        Self::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                rhs[(i - self.rows, j)].clone()
            }
        })
    }

    /// Keep the given columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Keep the given rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    let tmp = a[(k, j)].clone();
                    a[(k, j)] = a[(p, j)].clone();
                    a[(p, j)] = tmp;
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }
}

/// Smith normal form `U * M * V = D` with unimodular transforms and their
/// inverses; `D` diagonal, nonnegative, with the divisibility chain
/// d1 | d2 | ... .
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

struct SnfCalc {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfCalc {
    fn new(m: &IntMatrix) -> Self {
        SnfCalc {
            a: m.clone(),
            u: IntMatrix::identity(m.rows()),
            u_inv: IntMatrix::identity(m.rows()),
            v: IntMatrix::identity(m.cols()),
            v_inv: IntMatrix::identity(m.cols()),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols() {
            let t = self.a[(i, c)].clone();
            self.a[(i, c)] = self.a[(j, c)].clone();
            self.a[(j, c)] = t;
        }
        for c in 0..self.u.cols() {
            let t = self.u[(i, c)].clone();
            self.u[(i, c)] = self.u[(j, c)].clone();
            self.u[(j, c)] = t;
        }
        for r in 0..self.u_inv.rows() {
            let t = self.u_inv[(r, i)].clone();
            self.u_inv[(r, i)] = self.u_inv[(r, j)].clone();
            self.u_inv[(r, j)] = t;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows() {
            let t = self.a[(r, i)].clone();
            self.a[(r, i)] = self.a[(r, j)].clone();
            self.a[(r, j)] = t;
        }
        for r in 0..self.v.rows() {
            let t = self.v[(r, i)].clone();
            self.v[(r, i)] = self.v[(r, j)].clone();
            self.v[(r, j)] = t;
        }
        for c in 0..self.v_inv.cols() {
            let t = self.v_inv[(i, c)].clone();
            self.v_inv[(i, c)] = self.v_inv[(j, c)].clone();
            self.v_inv[(j, c)] = t;
        }
    }

    /// row_i -= q * row_j  (U tracks left ops, U^{-1} the inverse col op).
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.a.cols() {
            let t = &self.a[(j, c)] * q;
            self.a[(i, c)] -= t;
        }
        for c in 0..self.u.cols() {
            let t = &self.u[(j, c)] * q;
            self.u[(i, c)] -= t;
        }
        for r in 0..self.u_inv.rows() {
            let t = &self.u_inv[(r, i)] * q;
            self.u_inv[(r, j)] += t;
        }
    }

    /// col_i -= q * col_j.
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.a.rows() {
            let t = &self.a[(r, j)] * q;
            self.a[(r, i)] -= t;
        }
        for r in 0..self.v.rows() {
            let t = &self.v[(r, j)] * q;
            self.v[(r, i)] -= t;
        }
        for c in 0..self.v_inv.cols() {
            let t = &self.v_inv[(i, c)] * q;
            self.v_inv[(j, c)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            let t = -self.a[(i, c)].clone();
            self.a[(i, c)] = t;
        }
        for c in 0..self.u.cols() {
            let t = -self.u[(i, c)].clone();
            self.u[(i, c)] = t;
        }
        for r in 0..self.u_inv.rows() {
            let t = -self.u_inv[(r, i)].clone();
            self.u_inv[(r, i)] = t;
        }
    }

    /// Smallest nonzero |entry| in the submatrix at (t..,t..).
    fn select_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                if self.a[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if self.a[(i, j)].abs() < self.a[(bi, bj)].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    fn process(&mut self) {
        let n = self.a.rows().min(self.a.cols());
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.select_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            // clear row and column t, restarting whenever a remainder shrinks the pivot
            loop {
                let mut clean = true;
                for i in t + 1..self.a.rows() {
                    if !self.a[(i, t)].is_zero() {
                        let q = div_round(&self.a[(i, t)], &self.a[(t, t)]);
                        self.row_sub(i, t, &q);
                        if !self.a[(i, t)].is_zero() {
                            self.swap_rows(t, i);
                            clean = false;
                        }
                    }
                }
                for j in t + 1..self.a.cols() {
                    if !self.a[(t, j)].is_zero() {
                        let q = div_round(&self.a[(t, j)], &self.a[(t, t)]);
                        self.col_sub(j, t, &q);
                        if !self.a[(t, j)].is_zero() {
                            self.swap_cols(t, j);
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
            // pivot must divide the rest of the submatrix
            let mut divides_all = true;
            'scan: for i in t + 1..self.a.rows() {
                for j in t + 1..self.a.cols() {
                    if !self.a[(i, j)].mod_floor(&self.a[(t, t)]).is_zero() {
                        // pull the offending row up and redo this pivot
                        self.row_sub(t, i, &(-BigInt::one()));
                        divides_all = false;
                        break 'scan;
                    }
                }
            }
            if !divides_all {
                continue;
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

/// Rounded division: quotient minimizing |a - q*b|.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * 2u32;
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith normal form of `m`: returns transforms with `u * m * v = d`,
/// `u`, `v` unimodular, `d` diagonal with nonnegative entries in a
/// divisibility chain. Empty matrices are legal.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut calc = SnfCalc::new(m);
    calc.process();
    SmithForm { d: calc.a, u: calc.u, u_inv: calc.u_inv, v: calc.v, v_inv: calc.v_inv }
}

/// Finitely generated abelian group in canonical form: free rank plus a
/// torsion divisor chain d1 | d2 | ..., each di >= 2.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbGroupStructure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl std::fmt::Display for AbGroupStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl std::fmt::Debug for AbGroupStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

impl AbGroupStructure {
    pub fn trivial() -> Self {
        AbGroupStructure { free_rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        AbGroupStructure { free_rank: rank, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            AbGroupStructure { free_rank: 0, torsion: vec![BigInt::from(n)] }
        }
    }

    /// Canonical form from an arbitrary multiset of moduli (>= 1 each):
    /// repeated (a, b) -> (gcd, lcm) passes, no factorization needed.
    pub fn from_moduli(free_rank: usize, moduli: Vec<BigInt>) -> Self {
        let mut m: Vec<BigInt> =
            moduli.into_iter().filter(|x| x.abs() > BigInt::one()).map(|x| x.abs()).collect();
        let n = m.len();
        if n > 1 {
            loop {
                let mut changed = false;
                for i in 0..n - 1 {
                    for j in i + 1..n {
                        if !m[j].mod_floor(&m[i]).is_zero() {
                            let g = m[i].gcd(&m[j]);
                            let l = (&m[i] * &m[j]) / &g;
                            m[i] = g;
                            m[j] = l;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        m.retain(|x| !x.is_one());
        m.sort();
        AbGroupStructure { free_rank, torsion: m }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part (the full order when finite).
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product::<BigInt>().max(BigInt::one())
    }

    pub fn direct_sum(&self, other: &AbGroupStructure) -> AbGroupStructure {
        let mut moduli = self.torsion.clone();
        moduli.extend_from_slice(&other.torsion);
        Self::from_moduli(self.free_rank + other.free_rank, moduli)
    }
}

/// Structure of Z^rows / im(M), with M read as a map Z^cols -> Z^rows.
pub fn cokernel_structure(m: &IntMatrix) -> AbGroupStructure {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    AbGroupStructure::from_moduli(m.rows() - rank, snf.invariant_factors())
}

/// Columns form a Z-basis of ker(M). The kernel lattice is saturated:
/// Z^cols / ker is torsion-free by construction.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let idx: Vec<usize> = (rank..m.cols()).collect();
    snf.v.select_columns(&idx)
}

/// Basis of the column span of `m` (columns of the result are independent
/// and generate the same lattice).
pub fn column_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let mut out = IntMatrix::zero(m.rows(), rank);
    for j in 0..rank {
        let d = &snf.d[(j, j)];
        for i in 0..m.rows() {
            out[(i, j)] = &snf.u_inv[(i, j)] * d;
        }
    }
    out
}

/// Solve A * X = B over Z. Returns None when no integer solution exists.
pub fn solve_exact(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), b.rows(), "dimension mismatch in solve");
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let ub = snf.u.mul(b);
    let mut y = IntMatrix::zero(a.cols(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            if i < rank {
                let d = &snf.d[(i, i)];
                let (q, r) = ub[(i, j)].div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[(i, j)] = q;
            } else if !ub[(i, j)].is_zero() {
                return None;
            }
        }
    }
    Some(snf.v.mul(&y))
}

/// Does the column span of `sub` lie inside the column span of `ambient`?
pub fn spans_contain(ambient: &IntMatrix, sub: &IntMatrix) -> bool {
    solve_exact(ambient, sub).is_some()
}

/// Equality of column-span lattices.
pub fn spans_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    spans_contain(a, b) && spans_contain(b, a)
}

/// Structure of L / <den> where the columns of `basis` are a basis of the
/// lattice L and the columns of `den` lie in L.
pub fn quotient_structure(basis: &IntMatrix, den: &IntMatrix) -> Result<AbGroupStructure, Error> {
    let a = solve_exact(basis, den)
        .ok_or_else(|| Error::Lattice("denominator not contained in the given lattice".into()))?;
    Ok(cokernel_structure(&a))
}

/// Exactness of  .. --f--> Z^m --g--> ..  at the middle term:
/// g∘f = 0 and im(f) = ker(g) as lattices (not merely equal rank).
pub fn is_exact_at(f: &IntMatrix, g: &IntMatrix) -> Result<bool, Error> {
    if g.cols() != f.rows() {
        return Err(Error::Lattice(format!(
            "dimension mismatch: g is {}x{}, f is {}x{}",
            g.rows(),
            g.cols(),
            f.rows(),
            f.cols()
        )));
    }
    if !g.mul(f).is_zero() {
        return Ok(false);
    }
    let ker = kernel_basis(g);
    // im(f) ⊆ ker(g) already; the quotient must vanish
    let q = quotient_structure(&ker, f)?;
    Ok(q.is_trivial())
}

/// Basis of the lattice {x in Z^a : M x ∈ col-span(rel)}, the preimage of a
/// relation lattice. With `rel` empty this is just ker(M).
pub fn preimage_basis(m: &IntMatrix, rel: &IntMatrix) -> IntMatrix {
    if rel.cols() == 0 {
        return kernel_basis(m);
    }
    assert_eq!(m.rows(), rel.rows());
    let stacked = m.hstack(&rel.neg());
    let k = kernel_basis(&stacked);
    let idx: Vec<usize> = (0..m.cols()).collect();
    let proj = k.select_rows(&idx);
    column_basis(&proj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "U*M*V != D");
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(m.cols()));
        assert!(snf.u.det().abs().is_one(), "U not unimodular");
        assert!(snf.v.det().abs().is_one(), "V not unimodular");
        let facs = snf.invariant_factors();
        for w in facs.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "divisor chain broken");
        }
        snf
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(3);
        let snf = check_snf(&m);
        assert_eq!(snf.d, IntMatrix::identity(3));
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = check_snf(&m);
        assert_eq!(snf.d, IntMatrix::from_rows(&[vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn snf_rank_one() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![4, 8]]);
        let snf = check_snf(&m);
        assert_eq!(snf.d, IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]));
    }

    #[test]
    fn snf_empty() {
        let m = IntMatrix::zero(0, 3);
        let snf = check_snf(&m);
        assert_eq!(snf.d.rows(), 0);
        assert_eq!(kernel_basis(&m).cols(), 3);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_structure(&IntMatrix::zero(2, 2)), AbGroupStructure::free(2));
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(cokernel_structure(&m), AbGroupStructure::cyclic(6));
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![4, 8]]);
        assert_eq!(
            cokernel_structure(&m),
            AbGroupStructure { free_rank: 1, torsion: vec![BigInt::from(2)] }
        );
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntMatrix::identity(2)).cols(), 0);
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // saturation: invariant factors of the basis are all 1
        let snf = smith_normal_form(&k);
        assert!(snf.invariant_factors().iter().all(|d| d.is_one()));
    }

    #[test]
    fn exactness_examples() {
        // 0 -> Z --id--> Z -> 0
        let f = IntMatrix::identity(1);
        let g = IntMatrix::zero(0, 1);
        assert!(is_exact_at(&f, &g).unwrap());
        // Z --2--> Z --0--> Z has homology Z/2
        let f = IntMatrix::from_rows(&[vec![2]]);
        let g = IntMatrix::zero(1, 1);
        assert!(!is_exact_at(&f, &g).unwrap());
        // mismatched dims error
        let f = IntMatrix::zero(3, 1);
        let g = IntMatrix::zero(1, 2);
        assert!(is_exact_at(&f, &g).is_err());
    }

    #[test]
    fn solve_and_spans() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        let b = IntMatrix::from_rows(&[vec![3], vec![3]]);
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        let b2 = IntMatrix::from_rows(&[vec![1], vec![1]]);
        assert!(solve_exact(&a, &b2).is_none());
    }

    #[test]
    fn from_moduli_canonicalizes() {
        let g = AbGroupStructure::from_moduli(0, vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(g, AbGroupStructure::cyclic(6));
        let g = AbGroupStructure::from_moduli(1, vec![BigInt::from(4), BigInt::from(6)]);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn preimage_of_relations() {
        // {x in Z^2 : x1 + x2 ≡ 0 mod 2} has index 2 in Z^2
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        let rel = IntMatrix::from_rows(&[vec![2]]);
        let pre = preimage_basis(&m, &rel);
        assert_eq!(pre.cols(), 2);
        let q = quotient_structure(&IntMatrix::identity(2), &pre);
        assert_eq!(q.unwrap(), AbGroupStructure::cyclic(2));
    }

    #[test]
    fn div_round_minimizes() {
        for a in -20i64..=20 {
            for b in [-7i64, -3, 2, 5] {
                let q = div_round(&BigInt::from(a), &BigInt::from(b));
                let r = BigInt::from(a) - &q * BigInt::from(b);
                assert!(r.abs() * 2u32 <= BigInt::from(b).abs());
            }
        }
    }
}
