//! Tate cohomology of finite groups on lattices and finite modules, via the
//! normalized bar resolution spliced with the norm map at degree 0, with a
//! periodic-resolution fast path for cyclic groups. Also hypercohomology of
//! two-term complexes (commutative crossed modules) and the local
//! Tate-Nakayama model of torus cohomology.
//!
//! Degrees are capped to [-2, 3]: bar-resolution cost grows with |G|^r, and
//! nothing downstream needs more. Group orders are capped by
//! [`crate::max_group_order`] (default 48, covering all presets).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::group::FiniteGroup;
use crate::matrix::sparse::SparseMat;
use crate::matrix::{
    cokernel_structure, column_basis, preimage_basis, quotient_structure, smith_normal_form,
    solve_exact, spans_contain, spans_equal, AbGroupStructure, IntMatrix,
};
use crate::{galois::CMDatum, Error, Result};

/// A finitely generated abelian group with G-action: Z^rank modulo the
/// column span of `relations` (no columns = a lattice), with one integer
/// action matrix per group element. Action matrices must represent a group
/// homomorphism modulo the relations and preserve the relation lattice.
#[derive(Clone, Debug)]
pub struct GModule {
    pub group: FiniteGroup,
    pub rank: usize,
    pub relations: IntMatrix,
    pub action: Vec<IntMatrix>,
}

impl GModule {
    pub fn new(
        group: FiniteGroup,
        rank: usize,
        relations: IntMatrix,
        action: Vec<IntMatrix>,
    ) -> Result<Self> {
        if relations.rows() != rank {
            return Err(Error::Cohomology("relation matrix has wrong height".into()));
        }
        if action.len() != group.order() {
            return Err(Error::Cohomology("need one action matrix per group element".into()));
        }
        for a in &action {
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::Cohomology("action matrix has wrong shape".into()));
            }
        }
        let m = GModule { group, rank, relations, action };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let id = &self.action[self.group.identity()];
        if !self.congruent_to_zero(&id.sub(&IntMatrix::identity(self.rank))) {
            return Err(Error::Cohomology("identity does not act trivially".into()));
        }
        for g in 0..self.group.order() {
            if self.relations.cols() > 0 {
                let moved = self.action[g].mul(&self.relations);
                if solve_exact(&self.relations, &moved).is_none() {
                    return Err(Error::Cohomology(format!(
                        "action of element {g} does not preserve the relations"
                    )));
                }
            }
        }
        for g in 0..self.group.order() {
            for h in 0..self.group.order() {
                let gh = self.group.mul(g, h);
                let prod = self.action[g].mul(&self.action[h]);
                if !self.congruent_to_zero(&prod.sub(&self.action[gh])) {
                    return Err(Error::Cohomology(format!(
                        "action is not a homomorphism at ({g},{h})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn congruent_to_zero(&self, m: &IntMatrix) -> bool {
        if self.relations.cols() == 0 {
            m.is_zero()
        } else {
            solve_exact(&self.relations, m).is_some()
        }
    }

    pub fn is_lattice(&self) -> bool {
        self.relations.cols() == 0
    }

    /// The abelian group underlying the module.
    pub fn underlying_structure(&self) -> AbGroupStructure {
        cokernel_structure(&self.relations)
    }

    /// Z with trivial action.
    pub fn trivial_lattice(group: FiniteGroup) -> Self {
        let action = vec![IntMatrix::identity(1); group.order()];
        GModule { group, rank: 1, relations: IntMatrix::zero(1, 0), action }
    }

    /// Rank-1 lattice on which each element acts by the sign chi(g).
    pub fn character_lattice(group: FiniteGroup, chi: &[i64]) -> Result<Self> {
        let action = chi.iter().map(|&s| IntMatrix::from_rows(&[vec![s]])).collect();
        GModule::new(group, 1, IntMatrix::zero(1, 0), action)
    }

    /// The induced module Z[G] with the left regular action.
    pub fn induced_zg(group: FiniteGroup) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| {
                IntMatrix::from_fn(
                    n,
                    n,
                    |i, j| if i == group.mul(g, j) { BigInt::one() } else { BigInt::zero() },
                )
            })
            .collect();
        GModule { group, rank: n, relations: IntMatrix::zero(n, 0), action }
    }

    /// Finite cyclic-sum module Z/d1 + Z/d2 + ... with action matrices given
    /// modulo the diagonal relations.
    pub fn finite(group: FiniteGroup, moduli: &[u64], action: Vec<IntMatrix>) -> Result<Self> {
        let k = moduli.len();
        let rel = IntMatrix::from_fn(
            k,
            k,
            |i, j| if i == j { BigInt::from(moduli[i]) } else { BigInt::zero() },
        );
        GModule::new(group, k, rel, action)
    }

    /// Trivial action on Z/d1 + Z/d2 + ...
    pub fn finite_trivial(group: FiniteGroup, moduli: &[u64]) -> Self {
        let k = moduli.len();
        let action = vec![IntMatrix::identity(k); group.order()];
        Self::finite(group, moduli, action).expect("trivial action is valid")
    }

    /// Contragredient module Hom(M, Z) for a lattice: g acts by the
    /// transpose of the inverse action.
    pub fn dual_lattice(&self) -> Result<Self> {
        if !self.is_lattice() {
            return Err(Error::Cohomology("dual only defined for lattices".into()));
        }
        let action: Vec<IntMatrix> = (0..self.group.order())
            .map(|g| self.action[self.group.inv(g)].transpose())
            .collect();
        GModule::new(self.group.clone(), self.rank, IntMatrix::zero(self.rank, 0), action)
    }

    /// Restriction of the module to a subgroup (given as an element set).
    pub fn restrict_to(&self, subgroup: &[usize]) -> Result<Self> {
        let (sub, embed) = self.group.subgroup_as_group(subgroup)?;
        let action = (0..sub.order()).map(|i| self.action[embed[i]].clone()).collect();
        GModule::new(sub, self.rank, self.relations.clone(), action)
    }

    /// Sum of all action matrices (the norm element of Z[G] acting on M).
    pub fn norm_matrix(&self) -> IntMatrix {
        let mut n = IntMatrix::zero(self.rank, self.rank);
        for a in &self.action {
            n = n.add(a);
        }
        n
    }

    fn check_cap(&self) -> Result<()> {
        let cap = crate::max_group_order();
        if self.group.order() > cap {
            return Err(Error::GroupOrderCap(self.group.order(), cap));
        }
        Ok(())
    }
}

/// Nonidentity elements, the alphabet of normalized bar tuples.
fn letters(group: &FiniteGroup) -> Vec<usize> {
    (0..group.order()).filter(|&g| g != group.identity()).collect()
}

fn tuple_unrank(mut idx: usize, r: usize, q: usize) -> Vec<usize> {
    let mut t = vec![0usize; r];
    for slot in t.iter_mut() {
        *slot = idx % q;
        idx /= q;
    }
    t
}

fn tuple_rank(t: &[usize], q: usize) -> usize {
    let mut idx = 0usize;
    for &d in t.iter().rev() {
        idx = idx * q + d;
    }
    idx
}

fn letter_positions(group: &FiniteGroup, ls: &[usize]) -> Vec<Option<usize>> {
    let mut p = vec![None; group.order()];
    for (i, &g) in ls.iter().enumerate() {
        p[g] = Some(i);
    }
    p
}

/// The normalized bar cochain differential d^r : C^r(G, M) -> C^{r+1}(G, M),
/// on coordinates (tuple, module coordinate).
fn bar_differential(m: &GModule, r: usize) -> SparseMat {
    let ls = letters(&m.group);
    let q = ls.len();
    let pos = letter_positions(&m.group, &ls);
    let rank = m.rank;
    let rows = rank * q.pow((r + 1) as u32);
    let cols = rank * q.pow(r as u32);
    let mut d = SparseMat::zero(rows, cols);
    let ident = IntMatrix::identity(rank);
    let add_block = |d: &mut SparseMat, row_t: usize, col_t: usize, mat: &IntMatrix, sign: i64| {
        for a in 0..rank {
            for b in 0..rank {
                let v = &mat[(a, b)];
                if !v.is_zero() {
                    d.add_to(row_t * rank + a, col_t * rank + b, v * sign);
                }
            }
        }
    };
    for row_idx in 0..q.pow((r + 1) as u32) {
        let s = tuple_unrank(row_idx, r + 1, q);
        // first face: g1 acts on f(g2, ..., g_{r+1})
        add_block(&mut d, row_idx, tuple_rank(&s[1..], q), &m.action[ls[s[0]]], 1);
        // middle faces: merge g_i g_{i+1}; the term drops when the product
        // is the identity (normalized cochains vanish there)
        for i in 0..r {
            let prod = m.group.mul(ls[s[i]], ls[s[i + 1]]);
            if let Some(pp) = pos[prod] {
                let mut t: Vec<usize> = Vec::with_capacity(r);
                t.extend_from_slice(&s[..i]);
                t.push(pp);
                t.extend_from_slice(&s[i + 2..]);
                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                add_block(&mut d, row_idx, tuple_rank(&t, q), &ident, sign);
            }
        }
        // last face: forget g_{r+1}
        let sign = if (r + 1) % 2 == 0 { 1 } else { -1 };
        add_block(&mut d, row_idx, tuple_rank(&s[..r], q), &ident, sign);
    }
    d
}

/// The normalized bar chain boundary ∂_n : C_n(G, M) -> C_{n-1}(G, M),
/// with M made a right module through g^{-1}.
fn bar_boundary(m: &GModule, n: usize) -> SparseMat {
    assert!(n >= 1);
    let ls = letters(&m.group);
    let q = ls.len();
    let pos = letter_positions(&m.group, &ls);
    let rank = m.rank;
    let rows = rank * q.pow((n - 1) as u32);
    let cols = rank * q.pow(n as u32);
    let mut d = SparseMat::zero(rows, cols);
    for col_idx in 0..q.pow(n as u32) {
        let t = tuple_unrank(col_idx, n, q);
        // g1^{-1} acts, the tuple loses its head
        let row = tuple_rank(&t[1..], q);
        let a = &m.action[m.group.inv(ls[t[0]])];
        for i in 0..rank {
            for j in 0..rank {
                if !a[(i, j)].is_zero() {
                    d.add_to(row * rank + i, col_idx * rank + j, a[(i, j)].clone());
                }
            }
        }
        for i in 0..n - 1 {
            let prod = m.group.mul(ls[t[i]], ls[t[i + 1]]);
            if let Some(pp) = pos[prod] {
                let mut s: Vec<usize> = Vec::with_capacity(n - 1);
                s.extend_from_slice(&t[..i]);
                s.push(pp);
                s.extend_from_slice(&t[i + 2..]);
                let sign: i64 = if (i + 1) % 2 == 0 { 1 } else { -1 };
                let row = tuple_rank(&s, q);
                for k in 0..rank {
                    d.add_to(row * rank + k, col_idx * rank + k, BigInt::from(sign));
                }
            }
        }
        // drop the tail
        let row = tuple_rank(&t[..n - 1], q);
        let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
        for k in 0..rank {
            d.add_to(row * rank + k, col_idx * rank + k, BigInt::from(sign));
        }
    }
    d
}

/// d^0 : M -> C^1, m ↦ (g ↦ g·m − m).
fn bar_d0(m: &GModule) -> IntMatrix {
    let ls = letters(&m.group);
    if ls.is_empty() {
        return IntMatrix::zero(0, m.rank);
    }
    let blocks: Vec<IntMatrix> =
        ls.iter().map(|&g| m.action[g].sub(&IntMatrix::identity(m.rank))).collect();
    stack_vertical(&blocks)
}

fn stack_vertical(blocks: &[IntMatrix]) -> IntMatrix {
    assert!(!blocks.is_empty());
    let mut out = blocks[0].clone();
    for b in &blocks[1..] {
        out = out.vstack(b);
    }
    out
}

/// Block-diagonal copies of `m`.
fn blockdiag(m: &IntMatrix, copies: usize) -> IntMatrix {
    let mut out = IntMatrix::zero(m.rows() * copies, m.cols() * copies);
    for c in 0..copies {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    out[(c * m.rows() + i, c * m.cols() + j)] = m[(i, j)].clone();
                }
            }
        }
    }
    out
}

/// Cohomology of a free cochain complex at a given spot: only ranks and the
/// invariant factors of the incoming map are needed.
fn free_complex_homology(dim: usize, outgoing: SparseMat, incoming: SparseMat) -> AbGroupStructure {
    let rank_out = outgoing.rank();
    let (rank_in, factors) = incoming.rank_and_invariant_factors();
    AbGroupStructure::from_moduli(dim - rank_out - rank_in, factors)
}

/// ker(outgoing)/im(incoming) for presented modules, all maps dense.
fn subquotient_homology(
    outgoing: &IntMatrix,
    rel_target: &IntMatrix,
    incoming: &IntMatrix,
    rel_here: &IntMatrix,
) -> Result<AbGroupStructure> {
    let cocycles = preimage_basis(outgoing, rel_target);
    let den = incoming.hstack(rel_here);
    quotient_structure(&cocycles, &den)
}

/// Tate cohomology Ĥ^r(G, M) for r in [-2, 3]: the normalized bar
/// resolution for r >= 1 and r = -2 (where Ĥ^{-2} = H_1), spliced through
/// the norm map at the middle (Ĥ^0 = M^G / N·M, Ĥ^{-1} = ker N / I_G·M).
pub fn tate_cohomology(m: &GModule, r: i32) -> Result<AbGroupStructure> {
    m.check_cap()?;
    match r {
        0 => tate_h0(m),
        -1 => tate_h_minus1(m),
        -2 => {
            let d1 = bar_boundary(m, 1);
            let d2 = bar_boundary(m, 2);
            let q = letters(&m.group).len();
            if m.is_lattice() {
                Ok(free_complex_homology(m.rank * q, d1, d2))
            } else {
                subquotient_homology(
                    &d1.to_dense(),
                    &m.relations,
                    &d2.to_dense(),
                    &blockdiag(&m.relations, q),
                )
            }
        }
        1..=3 => {
            let r = r as usize;
            let q = letters(&m.group).len();
            let out = bar_differential(m, r);
            if m.is_lattice() {
                let incoming = if r == 1 {
                    SparseMat::from_dense(&bar_d0(m))
                } else {
                    bar_differential(m, r - 1)
                };
                Ok(free_complex_homology(m.rank * q.pow(r as u32), out, incoming))
            } else {
                let incoming =
                    if r == 1 { bar_d0(m) } else { bar_differential(m, r - 1).to_dense() };
                subquotient_homology(
                    &out.to_dense(),
                    &blockdiag(&m.relations, q.pow((r + 1) as u32)),
                    &incoming,
                    &blockdiag(&m.relations, q.pow(r as u32)),
                )
            }
        }
        _ => Err(Error::Cohomology(format!("degree {r} outside the supported range [-2, 3]"))),
    }
}

/// Basis of the invariant sublattice {x : g·x ≡ x mod relations, all g}.
fn invariant_basis(m: &GModule) -> IntMatrix {
    let gens = m.group.generators();
    if gens.is_empty() {
        return IntMatrix::identity(m.rank);
    }
    let blocks: Vec<IntMatrix> =
        gens.iter().map(|&g| m.action[g].sub(&IntMatrix::identity(m.rank))).collect();
    let stacked = stack_vertical(&blocks);
    let rel = blockdiag(&m.relations, gens.len());
    preimage_basis(&stacked, &rel)
}

/// Plain invariants H^0(G, M) = M^G as an abstract group.
pub fn invariants_structure(m: &GModule) -> Result<AbGroupStructure> {
    let inv = invariant_basis(m);
    quotient_structure(&inv, &m.relations)
}

fn tate_h0(m: &GModule) -> Result<AbGroupStructure> {
    let inv = invariant_basis(m);
    let den = m.norm_matrix().hstack(&m.relations);
    quotient_structure(&inv, &den)
}

fn tate_h_minus1(m: &GModule) -> Result<AbGroupStructure> {
    let ker_n = preimage_basis(&m.norm_matrix(), &m.relations);
    let gens = m.group.generators();
    let mut den = m.relations.clone();
    for &g in &gens {
        den = den.hstack(&m.action[g].sub(&IntMatrix::identity(m.rank)));
    }
    quotient_structure(&ker_n, &den)
}

/// Periodic-resolution path for cyclic groups: Ĥ^{even} = ker(g-1)/im(N),
/// Ĥ^{odd} = ker(N)/im(g-1), for any degree in [-2, 3].
pub fn tate_cyclic(m: &GModule, r: i32) -> Result<AbGroupStructure> {
    m.check_cap()?;
    let g = m
        .group
        .cyclic_generator()
        .ok_or_else(|| Error::Cohomology("group is not cyclic".into()))?;
    let t = m.action[g].sub(&IntMatrix::identity(m.rank));
    let n = m.norm_matrix();
    let (a, b) = if r.rem_euclid(2) == 0 { (t, n) } else { (n, t) };
    let num = preimage_basis(&a, &m.relations);
    let den = b.hstack(&m.relations);
    quotient_structure(&num, &den)
}

/// Ĥ^r ≅ Ĥ^{r+2} for cyclic groups, both sides computed through the
/// general (bar) path.
pub fn cyclic_periodicity_check(m: &GModule, r: i32) -> Result<bool> {
    if !m.group.is_cyclic() {
        return Err(Error::Cohomology("group is not cyclic".into()));
    }
    let a = tate_cohomology(m, r)?;
    let b = tate_cohomology(m, r + 2)?;
    Ok(a == b)
}

/// A commutative crossed module: an equivariant homomorphism rho : A -> B,
/// placed in degrees [0, 1].
#[derive(Clone, Debug)]
pub struct CrossedModule {
    pub a: GModule,
    pub b: GModule,
    pub rho: IntMatrix,
}

impl CrossedModule {
    pub fn new(a: GModule, b: GModule, rho: IntMatrix) -> Result<Self> {
        if a.group != b.group {
            return Err(Error::Cohomology("crossed module terms over different groups".into()));
        }
        if rho.rows() != b.rank || rho.cols() != a.rank {
            return Err(Error::Cohomology("rho has the wrong shape".into()));
        }
        let congruent = |m: &IntMatrix| {
            if b.relations.cols() == 0 {
                m.is_zero()
            } else {
                solve_exact(&b.relations, m).is_some()
            }
        };
        if a.relations.cols() > 0 && !congruent(&rho.mul(&a.relations)) {
            return Err(Error::Cohomology(
                "rho does not map relations of A into relations of B".into(),
            ));
        }
        for g in 0..a.group.order() {
            let diff = rho.mul(&a.action[g]).sub(&b.action[g].mul(&rho));
            if !congruent(&diff) {
                return Err(Error::Cohomology(format!("rho is not equivariant at element {g}")));
            }
        }
        Ok(CrossedModule { a, b, rho })
    }
}

/// Total-complex differential D^n : C^n(A) ⊕ C^{n-1}(B) -> C^{n+1}(A) ⊕ C^n(B),
/// D(α, β) = (dα, ρ∘α − dβ), dense, with the target's relation matrix.
fn total_differential(cm: &CrossedModule, n: usize) -> (IntMatrix, IntMatrix) {
    let q = letters(&cm.a.group).len();
    let da = if n == 0 { bar_d0(&cm.a) } else { bar_differential(&cm.a, n).to_dense() };
    let rho_n = blockdiag(&cm.rho, q.pow(n as u32));
    let d = if n == 0 {
        // T^0 = A; T^1 = C^1(A) ⊕ B
        da.vstack(&rho_n)
    } else {
        let db = if n == 1 { bar_d0(&cm.b) } else { bar_differential(&cm.b, n - 1).to_dense() };
        let dim_b_prev = cm.b.rank * q.pow((n - 1) as u32);
        let top = da.hstack(&IntMatrix::zero(cm.a.rank * q.pow((n + 1) as u32), dim_b_prev));
        let bottom = rho_n.hstack(&db.neg());
        top.vstack(&bottom)
    };
    let rel_tgt = two_block_relations(cm, n + 1, n);
    (d, rel_tgt)
}

fn two_block_relations(cm: &CrossedModule, na: usize, nb: usize) -> IntMatrix {
    let q = letters(&cm.a.group).len();
    let ra = blockdiag(&cm.a.relations, q.pow(na as u32));
    let rb = blockdiag(&cm.b.relations, q.pow(nb as u32));
    let dim_a = cm.a.rank * q.pow(na as u32);
    let dim_b = cm.b.rank * q.pow(nb as u32);
    let top = ra.hstack(&IntMatrix::zero(dim_a, rb.cols()));
    let bottom = IntMatrix::zero(dim_b, ra.cols()).hstack(&rb);
    top.vstack(&bottom)
}

/// Hypercohomology H^r(G, A -> B) of a commutative crossed module placed in
/// degrees [0, 1], for r in {0, 1, 2}.
pub fn hyper_h(cm: &CrossedModule, r: u32) -> Result<AbGroupStructure> {
    cm.a.check_cap()?;
    if r > 2 {
        return Err(Error::Cohomology("hypercohomology degree must be 0, 1, or 2".into()));
    }
    let r = r as usize;
    let (out, rel_tgt) = total_differential(cm, r);
    if r == 0 {
        let cocycles = preimage_basis(&out, &rel_tgt);
        return quotient_structure(&cocycles, &cm.a.relations);
    }
    let (incoming, _) = total_differential(cm, r - 1);
    let q = letters(&cm.a.group).len();
    let rel_here = two_block_relations(cm, r, r - 1);
    debug_assert_eq!(rel_here.rows(), out.cols());
    debug_assert_eq!(out.cols(), cm.a.rank * q.pow(r as u32) + cm.b.rank * q.pow((r - 1) as u32));
    subquotient_homology(&out, &rel_tgt, &incoming, &rel_here)
}

/// Report of the three crossed-module isomorphisms for an exact sequence
/// 0 -> A -> B -> C -> 0: H^0(A->B) = 0, H^1(A->B) ≅ C^G, H^2(A->B) ≅ H^1(G, C).
#[derive(Clone, Debug)]
pub struct CrossedModuleReport {
    pub h0: AbGroupStructure,
    pub h1: AbGroupStructure,
    pub h2: AbGroupStructure,
    pub c_invariants: AbGroupStructure,
    pub h1_of_c: AbGroupStructure,
    pub h0_vanishes: bool,
    pub h1_matches_c_invariants: bool,
    pub h2_matches_h1_of_c: bool,
}

impl CrossedModuleReport {
    pub fn all_hold(&self) -> bool {
        self.h0_vanishes && self.h1_matches_c_invariants && self.h2_matches_h1_of_c
    }
}

/// Verify that 0 -> A --rho--> B --sigma--> C -> 0 is exact as G-modules.
pub fn check_short_exact(
    a: &GModule,
    b: &GModule,
    c: &GModule,
    rho: &IntMatrix,
    sigma: &IntMatrix,
) -> Result<()> {
    // rho injective: the preimage of rel_B is exactly rel_A
    let ker_rho = preimage_basis(rho, &b.relations);
    let rel_a_basis = column_basis(&a.relations);
    if ker_rho.cols() != rel_a_basis.cols() || !spans_contain(&rel_a_basis, &ker_rho) {
        return Err(Error::Cohomology("left map is not injective".into()));
    }
    // sigma surjective
    if !cokernel_structure(&sigma.hstack(&c.relations)).is_trivial() {
        return Err(Error::Cohomology("right map is not surjective".into()));
    }
    // im(rho) = ker(sigma) modulo relations
    let ker_sigma = preimage_basis(sigma, &c.relations);
    let im_rho = column_basis(&rho.hstack(&b.relations));
    if !spans_equal(&ker_sigma, &im_rho) {
        return Err(Error::Cohomology("sequence is not exact in the middle".into()));
    }
    // equivariance of sigma (rho is checked by CrossedModule::new)
    for g in 0..b.group.order() {
        let diff = sigma.mul(&b.action[g]).sub(&c.action[g].mul(sigma));
        let ok = if c.relations.cols() == 0 {
            diff.is_zero()
        } else {
            solve_exact(&c.relations, &diff).is_some()
        };
        if !ok {
            return Err(Error::Cohomology(format!("right map not equivariant at {g}")));
        }
    }
    Ok(())
}

/// Compute both sides of the three isomorphisms independently:
/// hypercohomology of A -> B on one side, invariants and H^1 of C on the
/// other.
pub fn crossed_module_isos_check(
    a: &GModule,
    b: &GModule,
    c: &GModule,
    rho: &IntMatrix,
    sigma: &IntMatrix,
) -> Result<CrossedModuleReport> {
    check_short_exact(a, b, c, rho, sigma)?;
    let cm = CrossedModule::new(a.clone(), b.clone(), rho.clone())?;
    let h0 = hyper_h(&cm, 0)?;
    let h1 = hyper_h(&cm, 1)?;
    let h2 = hyper_h(&cm, 2)?;
    let c_invariants = invariants_structure(c)?;
    let h1_of_c = tate_cohomology(c, 1)?;
    Ok(CrossedModuleReport {
        h0_vanishes: h0.is_trivial(),
        h1_matches_c_invariants: h1 == c_invariants,
        h2_matches_h1_of_c: h2 == h1_of_c,
        h0,
        h1,
        h2,
        c_invariants,
        h1_of_c,
    })
}

/// Local cohomology of a torus in the Tate-Nakayama model.
#[derive(Clone, Debug)]
pub struct LocalCohomology {
    pub structure: AbGroupStructure,
    /// The identification is only exact for unramified decomposition
    /// groups; set when e > 1 at the queried prime.
    pub ramified_caveat: bool,
}

/// H^r(Q_l, T) for r in {1, 2}, modelled as Ĥ^{r-2}(D_l, X_*(T)) with
/// X_*(T) the dual of the character lattice restricted to D_l.
pub fn local_torus_cohomology(
    datum: &CMDatum,
    l: u64,
    charlattice: &GModule,
    r: i32,
) -> Result<LocalCohomology> {
    if r != 1 && r != 2 {
        return Err(Error::Cohomology("local torus cohomology supports r = 1, 2".into()));
    }
    let ld = datum.local(l)?;
    let dual = charlattice.dual_lattice()?;
    let restricted = dual.restrict_to(&ld.decomposition)?;
    let structure = tate_cohomology(&restricted, r - 2)?;
    Ok(LocalCohomology { structure, ramified_caveat: ld.e > 1 })
}

/// H^r(R, T) at the real place: Ĥ^{r-2}(<iota>, X_*(T)).
pub fn real_torus_cohomology(
    datum: &CMDatum,
    charlattice: &GModule,
    r: i32,
) -> Result<LocalCohomology> {
    if r != 1 && r != 2 {
        return Err(Error::Cohomology("local torus cohomology supports r = 1, 2".into()));
    }
    let mut sub = vec![datum.group.identity(), datum.iota];
    sub.sort_unstable();
    let dual = charlattice.dual_lattice()?;
    let restricted = dual.restrict_to(&sub)?;
    let structure = tate_cohomology(&restricted, r - 2)?;
    Ok(LocalCohomology { structure, ramified_caveat: false })
}

/// A pushforward class in Ĥ^0(D, X_*): the group it lives in, and its order.
#[derive(Clone, Debug)]
pub struct PushforwardClass {
    pub ambient: AbGroupStructure,
    pub order: BigInt,
}

impl PushforwardClass {
    pub fn is_zero(&self) -> bool {
        self.order.is_one()
    }
}

/// Image of a rational cocharacter in Ĥ^0(D, X_*): clear denominators
/// (they must divide |D|), check D-invariance of the cleared cocharacter,
/// and reduce modulo the norm image. The normalization makes the identity
/// cocharacter of G_m land on the generator of Z/|D|, matching the
/// convention that a prime element goes to the Frobenius.
pub fn pushforward_local_class(
    cochar: &[BigRational],
    charlattice: &GModule,
    subgroup: &[usize],
) -> Result<PushforwardClass> {
    if cochar.len() != charlattice.rank {
        return Err(Error::Cohomology("cocharacter has the wrong length".into()));
    }
    let dual = charlattice.dual_lattice()?;
    let restricted = dual.restrict_to(subgroup)?;
    let d_order = BigInt::from(subgroup.len() as u64);
    let mut den = BigInt::one();
    for c in cochar {
        den = num_integer::lcm(den, c.denom().clone());
    }
    if !(&d_order % &den).is_zero() {
        return Err(Error::Cohomology(format!(
            "cocharacter denominator {den} does not divide |D| = {d_order}"
        )));
    }
    let cleared: Vec<BigInt> = cochar
        .iter()
        .map(|c| {
            let v = c * BigRational::from(den.clone());
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();
    for g in 0..restricted.group.order() {
        if restricted.action[g].apply(&cleared) != cleared {
            return Err(Error::Cohomology(
                "cleared cocharacter is not invariant under the decomposition group".into(),
            ));
        }
    }
    let inv = invariant_basis(&restricted);
    let norm = restricted.norm_matrix();
    let ambient = quotient_structure(&inv, &norm)?;
    let order = class_order(&inv, &norm, &cleared)?;
    Ok(PushforwardClass { ambient, order })
}

/// Order of the class of `x` in span(basis)/span(den).
fn class_order(basis: &IntMatrix, den: &IntMatrix, x: &[BigInt]) -> Result<BigInt> {
    let xm = IntMatrix::from_fn(x.len(), 1, |i, _| x[i].clone());
    let c = solve_exact(basis, &xm)
        .ok_or_else(|| Error::Cohomology("element is not in the ambient lattice".into()))?;
    let a = solve_exact(basis, den)
        .ok_or_else(|| Error::Cohomology("denominator not inside ambient lattice".into()))?;
    let snf = smith_normal_form(&a);
    let rank = snf.rank();
    let uc = snf.u.mul(&c);
    let mut ord = BigInt::one();
    for i in 0..basis.cols() {
        let v = &uc[(i, 0)];
        if i < rank {
            let d = &snf.d[(i, i)];
            let g = num_integer::gcd(d.clone(), v.clone());
            ord = num_integer::lcm(ord, d / g);
        } else if !v.is_zero() {
            return Err(Error::Cohomology("class has infinite order".into()));
        }
    }
    Ok(ord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z_mod_2_trivial() -> GModule {
        GModule::trivial_lattice(FiniteGroup::cyclic(2))
    }

    #[test]
    fn tate_z2_trivial_z() {
        let m = z_mod_2_trivial();
        assert_eq!(tate_cohomology(&m, 0).unwrap(), AbGroupStructure::cyclic(2));
        assert_eq!(tate_cohomology(&m, 1).unwrap(), AbGroupStructure::trivial());
        assert_eq!(tate_cohomology(&m, 2).unwrap(), AbGroupStructure::cyclic(2));
        assert_eq!(tate_cohomology(&m, 3).unwrap(), AbGroupStructure::trivial());
        assert_eq!(tate_cohomology(&m, -1).unwrap(), AbGroupStructure::trivial());
        assert_eq!(tate_cohomology(&m, -2).unwrap(), AbGroupStructure::cyclic(2));
    }

    #[test]
    fn tate_trivial_group() {
        let m = GModule::trivial_lattice(FiniteGroup::cyclic(1));
        for r in -2..=3 {
            assert!(tate_cohomology(&m, r).unwrap().is_trivial(), "degree {r}");
        }
    }

    #[test]
    fn tate_sign_action() {
        let g = FiniteGroup::cyclic(2);
        let m = GModule::character_lattice(g, &[1, -1]).unwrap();
        assert_eq!(tate_cohomology(&m, 0).unwrap(), AbGroupStructure::trivial());
        assert_eq!(tate_cohomology(&m, 1).unwrap(), AbGroupStructure::cyclic(2));
    }

    #[test]
    fn cyclic_fast_path_agrees_with_bar() {
        for n in [2usize, 3, 4, 5] {
            let m = GModule::trivial_lattice(FiniteGroup::cyclic(n));
            for r in -2..=3 {
                let bar = tate_cohomology(&m, r).unwrap();
                let per = tate_cyclic(&m, r).unwrap();
                assert_eq!(bar, per, "Z/{n} degree {r}");
            }
        }
        // a finite module with sign action
        let g = FiniteGroup::cyclic(2);
        let act = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])];
        let m = GModule::finite(g, &[9], act).unwrap();
        for r in -2..=3 {
            assert_eq!(
                tate_cohomology(&m, r).unwrap(),
                tate_cyclic(&m, r).unwrap(),
                "Z/9 sign, degree {r}"
            );
        }
    }

    #[test]
    fn periodicity_examples() {
        let m = z_mod_2_trivial();
        assert!(cyclic_periodicity_check(&m, 0).unwrap());
        let m3 = GModule::trivial_lattice(FiniteGroup::cyclic(3));
        assert!(cyclic_periodicity_check(&m3, 1).unwrap());
        // Z/4 acting through the quotient Z/2 by -1 on Z
        let g = FiniteGroup::cyclic(4);
        let m4 = GModule::character_lattice(g, &[1, -1, 1, -1]).unwrap();
        assert!(cyclic_periodicity_check(&m4, 0).unwrap());
        // non-cyclic input is an error
        let v4 = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let mv = GModule::trivial_lattice(v4);
        assert!(cyclic_periodicity_check(&mv, 0).is_err());
    }

    #[test]
    fn shapiro_small() {
        let groups = [
            FiniteGroup::cyclic(4),
            FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        ];
        for g in groups {
            let m = GModule::induced_zg(g);
            for r in -2..=2 {
                assert!(
                    tate_cohomology(&m, r).unwrap().is_trivial(),
                    "Z[G] not acyclic at degree {r}"
                );
            }
        }
    }

    #[test]
    fn hyper_h_degenerate_a_zero() {
        // A = 0 puts B alone in degree 1: H^r(0 -> B) = H^{r-1}(G, B),
        // consistent with H^1(A->B) ≅ C(k) = B^G when A = 0
        let g = FiniteGroup::cyclic(2);
        let a = GModule::finite_trivial(g.clone(), &[]);
        let b = GModule::finite_trivial(g.clone(), &[4]);
        let rho = IntMatrix::zero(1, 0);
        let cm = CrossedModule::new(a, b.clone(), rho).unwrap();
        assert!(hyper_h(&cm, 0).unwrap().is_trivial());
        assert_eq!(hyper_h(&cm, 1).unwrap(), invariants_structure(&b).unwrap());
        assert_eq!(hyper_h(&cm, 2).unwrap(), tate_cohomology(&b, 1).unwrap());
    }

    #[test]
    fn hyper_h_z2_into_z4() {
        // G = Z/2 trivial action, A = Z/2 -> B = Z/4 by x -> 2x
        let g = FiniteGroup::cyclic(2);
        let a = GModule::finite_trivial(g.clone(), &[2]);
        let b = GModule::finite_trivial(g.clone(), &[4]);
        let rho = IntMatrix::from_rows(&[vec![2]]);
        let cm = CrossedModule::new(a, b, rho).unwrap();
        assert!(hyper_h(&cm, 0).unwrap().is_trivial());
        assert_eq!(hyper_h(&cm, 1).unwrap(), AbGroupStructure::cyclic(2));
    }

    #[test]
    fn crossed_module_report_z2_z4_z2() {
        let g = FiniteGroup::cyclic(2);
        let a = GModule::finite_trivial(g.clone(), &[2]);
        let b = GModule::finite_trivial(g.clone(), &[4]);
        let c = GModule::finite_trivial(g.clone(), &[2]);
        let rho = IntMatrix::from_rows(&[vec![2]]);
        let sigma = IntMatrix::from_rows(&[vec![1]]);
        let rep = crossed_module_isos_check(&a, &b, &c, &rho, &sigma).unwrap();
        assert!(rep.all_hold(), "{rep:?}");
        assert_eq!(rep.h1, AbGroupStructure::cyclic(2));
    }

    #[test]
    fn crossed_module_rejects_inexact() {
        let g = FiniteGroup::cyclic(2);
        let a = GModule::finite_trivial(g.clone(), &[2]);
        let b = GModule::finite_trivial(g.clone(), &[4]);
        let c = GModule::finite_trivial(g.clone(), &[4]);
        let rho = IntMatrix::from_rows(&[vec![2]]);
        let sigma = IntMatrix::from_rows(&[vec![1]]);
        assert!(crossed_module_isos_check(&a, &b, &c, &rho, &sigma).is_err());
    }

    #[test]
    fn local_cohomology_gm() {
        use crate::galois::make_quadratic_datum;
        let datum = make_quadratic_datum(-1, 3, &[2, 3, 5]).unwrap();
        let gm = GModule::trivial_lattice(datum.group.clone());
        // inert prime, |D| = 2: H^2 = Z/2, H^1 = 0
        let h2 = local_torus_cohomology(&datum, 3, &gm, 2).unwrap();
        assert_eq!(h2.structure, AbGroupStructure::cyclic(2));
        let h1 = local_torus_cohomology(&datum, 3, &gm, 1).unwrap();
        assert!(h1.structure.is_trivial());
        // split prime: trivial decomposition group
        let h2s = local_torus_cohomology(&datum, 5, &gm, 2).unwrap();
        assert!(h2s.structure.is_trivial());
        // ramified prime gets a caveat
        let h2r = local_torus_cohomology(&datum, 2, &gm, 2).unwrap();
        assert!(h2r.ramified_caveat);
        // real place
        let hr = real_torus_cohomology(&datum, &gm, 2).unwrap();
        assert_eq!(hr.structure, AbGroupStructure::cyclic(2));
    }

    #[test]
    fn pushforward_identity_cocharacter() {
        // T = G_m over a cyclic decomposition group of order 4
        let group = FiniteGroup::units_mod(5);
        let gm = GModule::trivial_lattice(group.clone());
        let all: Vec<usize> = (0..group.order()).collect();
        let one = BigRational::from(BigInt::one());
        let cls = pushforward_local_class(&[one.clone()], &gm, &all).unwrap();
        assert_eq!(cls.ambient, AbGroupStructure::cyclic(4));
        assert_eq!(cls.order, BigInt::from(4));
        // trivial decomposition group: zero class
        let cls0 = pushforward_local_class(&[one], &gm, &[group.identity()]).unwrap();
        assert!(cls0.is_zero());
    }
}
