//! Global and local Brauer groups modelled by finitely supported invariant
//! vectors with zero sum, and the kernel/cokernel calculus the Hasse-type
//! statements reduce to: restriction and corestriction on invariants, the
//! finite H^1 models of the Serre and Weil-number tori, the parity cokernel,
//! transition vanishing along towers, and adelic sums of local cohomology.
//!
//! Brauer groups are never materialized: every computation is a kernel or
//! cokernel of an explicit integer congruence system on the invariant
//! coordinates over a finite probe set of primes (the datum's local-data
//! keys, which must contain p and every ramified prime, plus infinity).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{local_torus_cohomology, real_torus_cohomology, GModule};
use crate::galois::{CMDatum, TowerMap};
use crate::matrix::{preimage_basis, quotient_structure, solve_exact, AbGroupStructure, IntMatrix};
use crate::{Error, Result};

/// The five subfields attached to a CM datum, each the fixed field of a
/// subgroup: Q = K^G, K+ = K^<iota>, K(w) = K^D, K(w)+ = K^{D<iota>}, K itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    Q,
    KwPlus,
    KPlus,
    Kw,
    K,
}

impl FieldTag {
    pub fn fixing_subgroup(&self, datum: &CMDatum) -> Vec<usize> {
        let g = &datum.group;
        match self {
            FieldTag::Q => (0..g.order()).collect(),
            FieldTag::KPlus => {
                let mut s = vec![g.identity(), datum.iota];
                s.sort_unstable();
                s
            }
            FieldTag::K => vec![g.identity()],
            FieldTag::Kw => datum.local_data[&datum.p].decomposition.clone(),
            FieldTag::KwPlus => {
                let d = &datum.local_data[&datum.p].decomposition;
                let mut s = d.clone();
                s.extend(d.iter().map(|&x| g.mul(datum.iota, x)));
                s.sort_unstable();
                s.dedup();
                s
            }
        }
    }

    /// Is F1 a subfield of F2 (fixing subgroup of F2 contained in F1's)?
    pub fn is_subfield_of(&self, other: &FieldTag, datum: &CMDatum) -> bool {
        let h1 = self.fixing_subgroup(datum);
        let h2 = other.fixing_subgroup(datum);
        h2.iter().all(|x| h1.binary_search(x).is_ok())
    }
}

/// A place slot: a finite rational prime in the probe set, or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrimeSlot {
    Finite(u64),
    Infinity,
}

/// One place of a subfield: the subset of the Galois group it corresponds
/// to (a double coset), and its local degree over Q_l or R.
#[derive(Clone, Debug)]
pub struct PlaceInfo {
    pub set: Vec<usize>,
    pub degree: u64,
}

/// Places of the subfield `tag` above a slot: orbits of the decomposition
/// group (or of <iota> at infinity) on the cosets of the fixing subgroup.
pub fn places_of(datum: &CMDatum, tag: FieldTag, slot: PrimeSlot) -> Result<Vec<PlaceInfo>> {
    let g = &datum.group;
    let h = tag.fixing_subgroup(datum);
    let d: Vec<usize> = match slot {
        PrimeSlot::Finite(l) => datum.local(l)?.decomposition.clone(),
        PrimeSlot::Infinity => {
            let mut s = vec![g.identity(), datum.iota];
            s.sort_unstable();
            s
        }
    };
    let cosets = g.left_cosets(&h);
    let orbits = g.double_coset_orbits(&d, &h);
    Ok(orbits
        .into_iter()
        .map(|coset_indices| {
            let mut set: Vec<usize> = coset_indices
                .iter()
                .flat_map(|&ci| cosets[ci].iter().copied())
                .collect();
            set.sort_unstable();
            PlaceInfo { degree: coset_indices.len() as u64, set }
        })
        .collect())
}

/// Is a place at infinity real (iota fixes its cosets)?
pub fn is_real_place(info: &PlaceInfo) -> bool {
    info.degree == 1
}

fn mod1(r: &BigRational) -> BigRational {
    let f = r.floor();
    r - f
}

/// An element of Br(F) in invariant coordinates: a finitely supported map
/// from places (slot, place index) to Q/Z, with real invariants in (1/2)Z/Z,
/// complex places zero, and global reciprocity (sum zero).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerElement {
    pub field: FieldTag,
    pub entries: BTreeMap<(PrimeSlot, usize), BigRational>,
}

impl BrauerElement {
    pub fn zero(field: FieldTag) -> Self {
        BrauerElement { field, entries: BTreeMap::new() }
    }

    pub fn new(
        datum: &CMDatum,
        field: FieldTag,
        entries: Vec<((PrimeSlot, usize), BigRational)>,
    ) -> Result<Self> {
        let elt = Self::new_unchecked(field, entries);
        elt.validate(datum)?;
        Ok(elt)
    }

    /// Normalize without the reciprocity/real-place checks. Used for purely
    /// local (adelic) invariant vectors, which need not sum to zero.
    pub fn new_unchecked(
        field: FieldTag,
        entries: Vec<((PrimeSlot, usize), BigRational)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            let v = mod1(&v);
            if !v.is_zero() {
                *map.entry(k).or_insert_with(BigRational::zero) += v;
            }
        }
        for v in map.values_mut() {
            *v = mod1(v);
        }
        map.retain(|_, v| !v.is_zero());
        BrauerElement { field, entries: map }
    }

    pub fn validate(&self, datum: &CMDatum) -> Result<()> {
        let mut total = BigRational::zero();
        for ((slot, idx), inv) in &self.entries {
            let places = places_of(datum, self.field, *slot)?;
            let info = places.get(*idx).ok_or_else(|| {
                Error::Brauer(format!("place index {idx} out of range at {slot:?}"))
            })?;
            if *slot == PrimeSlot::Infinity {
                if is_real_place(info) {
                    let doubled = inv * BigRational::from(BigInt::from(2));
                    if !mod1(&doubled).is_zero() {
                        return Err(Error::Brauer(format!(
                            "real-place invariant {inv} not in (1/2)Z/Z"
                        )));
                    }
                } else if !inv.is_zero() {
                    return Err(Error::Brauer("complex place has nonzero invariant".into()));
                }
            }
            total += inv;
        }
        if !mod1(&total).is_zero() {
            return Err(Error::Brauer(format!("invariants sum to {total}, not 0 (mod 1)")));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All slots of the datum: its probe primes plus infinity.
pub fn slots(datum: &CMDatum) -> Vec<PrimeSlot> {
    let mut s: Vec<PrimeSlot> =
        datum.local_data.keys().map(|&l| PrimeSlot::Finite(l)).collect();
    s.push(PrimeSlot::Infinity);
    s
}

/// inv_w = [E_w : F_v] * inv_v at every place w of the larger field over v.
pub fn restriction(datum: &CMDatum, elt: &BrauerElement, target: FieldTag) -> Result<BrauerElement> {
    if !elt.field.is_subfield_of(&target, datum) {
        return Err(Error::Brauer(format!(
            "{:?} is not a subfield of {target:?}",
            elt.field
        )));
    }
    let mut out: Vec<((PrimeSlot, usize), BigRational)> = Vec::new();
    for ((slot, idx), inv) in &elt.entries {
        let src_places = places_of(datum, elt.field, *slot)?;
        let tgt_places = places_of(datum, target, *slot)?;
        let v = &src_places[*idx];
        for (widx, w) in tgt_places.iter().enumerate() {
            // w lies over v iff its group subset is contained in v's
            if w.set.iter().all(|x| v.set.binary_search(x).is_ok()) {
                let rel = BigRational::from(BigInt::from(w.degree / v.degree));
                out.push(((*slot, widx), mod1(&(inv * rel))));
            }
        }
    }
    BrauerElement::new(datum, target, out)
}

/// inv_v = sum of inv_w over w | v.
pub fn corestriction(
    datum: &CMDatum,
    elt: &BrauerElement,
    target: FieldTag,
) -> Result<BrauerElement> {
    if !target.is_subfield_of(&elt.field, datum) {
        return Err(Error::Brauer(format!(
            "{target:?} is not a subfield of {:?}",
            elt.field
        )));
    }
    let mut out: Vec<((PrimeSlot, usize), BigRational)> = Vec::new();
    for ((slot, idx), inv) in &elt.entries {
        let src_places = places_of(datum, elt.field, *slot)?;
        let tgt_places = places_of(datum, target, *slot)?;
        let w = &src_places[*idx];
        let vidx = tgt_places
            .iter()
            .position(|v| w.set.iter().all(|x| v.set.binary_search(x).is_ok()))
            .ok_or_else(|| Error::Brauer("no place below".into()))?;
        out.push(((*slot, vidx), inv.clone()));
    }
    BrauerElement::new(datum, target, out)
}

/// Which torus the Brauer model belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusKind {
    S,
    P,
}

impl TorusKind {
    fn base(&self) -> FieldTag {
        match self {
            TorusKind::S => FieldTag::KPlus,
            TorusKind::P => FieldTag::KwPlus,
        }
    }

    fn upper(&self) -> FieldTag {
        match self {
            TorusKind::S => FieldTag::K,
            TorusKind::P => FieldTag::Kw,
        }
    }

    fn cor_multiplier(&self, datum: &CMDatum) -> u64 {
        match self {
            TorusKind::S => 1,
            TorusKind::P => datum.local_degree_at_p(),
        }
    }
}

/// The finite H^1 kernel model: invariant vectors on the base-field places
/// killed by restriction to the upper field and by (multiplier x)
/// corestriction to Q, with or without the global reciprocity condition.
#[derive(Clone, Debug)]
pub struct H1Model {
    pub kind: TorusKind,
    pub with_reciprocity: bool,
    /// (slot, place index, local modulus): invariants live in (1/d)Z/Z
    pub place_moduli: Vec<(PrimeSlot, usize, u64)>,
    pub structure: AbGroupStructure,
    pub generators: Vec<BrauerElement>,
    basis: IntMatrix,
    denominators: IntMatrix,
}

fn build_h1_model(datum: &CMDatum, kind: TorusKind, with_reciprocity: bool) -> Result<H1Model> {
    let base = kind.base();
    let upper = kind.upper();
    let c = kind.cor_multiplier(datum);
    // variables: all places of the base field over the probe slots
    let mut place_moduli: Vec<(PrimeSlot, usize, u64)> = Vec::new();
    for slot in slots(datum) {
        let base_places = places_of(datum, base, slot)?;
        let upper_places = places_of(datum, upper, slot)?;
        for (idx, v) in base_places.iter().enumerate() {
            // the restriction to the upper field kills (1/g)Z/Z where g is
            // the gcd of the relative degrees of the places above v
            let mut g = 0u64;
            for w in &upper_places {
                if w.set.iter().all(|x| v.set.binary_search(x).is_ok()) {
                    g = g.gcd(&(w.degree / v.degree));
                }
            }
            debug_assert!(g > 0, "no place above");
            place_moduli.push((slot, idx, g));
        }
    }
    let nv = place_moduli.len();
    // congruence rows: per slot, c * sum inv_v = 0; plus reciprocity
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut row_moduli: Vec<BigInt> = Vec::new();
    let mut push_row = |support: &dyn Fn(usize) -> bool, mult: u64| {
        let l = place_moduli
            .iter()
            .enumerate()
            .filter(|(i, _)| support(*i))
            .fold(1u64, |acc, (_, &(_, _, d))| acc.lcm(&d));
        let mut row = vec![BigInt::zero(); nv];
        for (i, &(_, _, d)) in place_moduli.iter().enumerate() {
            if support(i) {
                row[i] = BigInt::from(mult * (l / d));
            }
        }
        rows.push(row);
        row_moduli.push(BigInt::from(l));
    };
    for slot in slots(datum) {
        let pm = place_moduli.clone();
        push_row(&move |i: usize| pm[i].0 == slot, c);
    }
    if with_reciprocity {
        push_row(&|_s: usize| true, 1);
    }
    let c_matrix = IntMatrix::from_fn(rows.len(), nv, |i, j| rows[i][j].clone());
    let rel = IntMatrix::from_fn(rows.len(), rows.len(), |i, j| {
        if i == j {
            row_moduli[i].clone()
        } else {
            BigInt::zero()
        }
    });
    let basis = preimage_basis(&c_matrix, &rel);
    let denominators = IntMatrix::from_fn(nv, nv, |i, j| {
        if i == j {
            BigInt::from(place_moduli[i].2)
        } else {
            BigInt::zero()
        }
    });
    let structure = quotient_structure(&basis, &denominators)?;
    // generators: basis columns as invariant vectors x_v / d_v mod 1
    let mut generators = Vec::new();
    for jcol in 0..basis.cols() {
        let entries: Vec<((PrimeSlot, usize), BigRational)> = place_moduli
            .iter()
            .enumerate()
            .map(|(i, &(slot, idx, d))| {
                let inv = BigRational::new(basis[(i, jcol)].clone(), BigInt::from(d));
                ((slot, idx), mod1(&inv))
            })
            .filter(|(_, inv)| !inv.is_zero())
            .collect();
        if entries.is_empty() {
            continue;
        }
        let elt = if with_reciprocity {
            BrauerElement::new(datum, kind.base(), entries)?
        } else {
            BrauerElement::new_unchecked(kind.base(), entries)
        };
        if !elt.is_zero() && !generators.contains(&elt) {
            generators.push(elt);
        }
    }
    Ok(H1Model { kind, with_reciprocity, place_moduli, structure, generators, basis, denominators })
}

/// Report of the cg0/cg3-style sequence at finite level: the H^1 kernel
/// models (global and adelic), the Hasse comparison, and the data needed
/// for the H^2 obstruction probe.
#[derive(Clone, Debug)]
pub struct TorusH2Report {
    pub kind: TorusKind,
    pub h1_global: H1Model,
    pub h1_adelic: H1Model,
    /// cokernel of H^1(Q) -> H^1(A); trivial means the map is bijective
    pub hasse_cokernel: AbGroupStructure,
    pub global_to_adelic_bijective: bool,
    pub degenerate_iota_in_d: bool,
}

pub fn torus_h2_sequence(datum: &CMDatum, kind: TorusKind) -> Result<TorusH2Report> {
    let h1_global = build_h1_model(datum, kind, true)?;
    let h1_adelic = build_h1_model(datum, kind, false)?;
    // cokernel of the inclusion of solution lattices, over the shared cover
    let hasse_cokernel = quotient_structure(
        &h1_adelic.basis,
        &h1_global.basis.hstack(&h1_adelic.denominators),
    )?;
    Ok(TorusH2Report {
        kind,
        global_to_adelic_bijective: hasse_cokernel.is_trivial(),
        hasse_cokernel,
        h1_global,
        h1_adelic,
        degenerate_iota_in_d: datum.iota_in_decomposition_at_p(),
    })
}

/// Parity statement for P^K: cokernel of H^1(Q, P^K) -> H^1(A, P^K) is
/// Z/2 exactly when the local degree n(w) is even; computed by the snake
/// kernel of x -> (2x, n(w) x) on Q/Z and cross-checked against the exact
/// lattice cokernel. In the degenerate case (iota in D(w), P^K = G_m) the
/// answer is 0 by Hilbert 90.
#[derive(Clone, Debug)]
pub struct HasseCokernel {
    pub structure: AbGroupStructure,
    pub degenerate_iota_in_d: bool,
}

pub fn hasse_cokernel_p(datum: &CMDatum) -> Result<HasseCokernel> {
    if datum.iota_in_decomposition_at_p() {
        return Ok(HasseCokernel {
            structure: AbGroupStructure::trivial(),
            degenerate_iota_in_d: true,
        });
    }
    // snake kernel of x -> (2x, n x): structure Z/gcd(2, n)
    let n = datum.local_degree_at_p();
    let snake = AbGroupStructure::cyclic(2u64.gcd(&n));
    // exact route through the invariant-vector models
    let report = torus_h2_sequence(datum, TorusKind::P)?;
    if report.hasse_cokernel != snake {
        return Err(Error::Brauer(format!(
            "snake prediction {snake} disagrees with the lattice cokernel {}",
            report.hasse_cokernel
        )));
    }
    Ok(HasseCokernel { structure: snake, degenerate_iota_in_d: false })
}

/// Transition vanishing along a tower: apply the norm-power map
/// b = Nm^{[K+w' : K+w]} (on invariants: corestrict along the base fields
/// and multiply by the local degree of the real-subfield tower) to every
/// generator of the H^1 model of P^{K'} and test annihilation. True means
/// the transition H^1(Q, P^{K'}) -> H^1(Q, P^K) is the zero map.
pub fn transition_vanishing(tower: &TowerMap) -> Result<bool> {
    if tower.small.iota_in_decomposition_at_p() || tower.large.iota_in_decomposition_at_p() {
        return Err(Error::Brauer(
            "transition vanishing needs iota outside D(w) at both levels".into(),
        ));
    }
    let model = build_h1_model(&tower.large, TorusKind::P, true)?;
    let images = transition_images(tower, &model)?;
    Ok(images.iter().all(|e| e.is_zero()))
}

/// The images of the H^1(P^{K'}) generators under the norm-power map, as
/// invariant vectors on the places of K(w)+.
pub fn transition_images(tower: &TowerMap, model: &H1Model) -> Result<Vec<BrauerElement>> {
    let small = &tower.small;
    let large = &tower.large;
    let deg_plus = {
        let np = |d: &CMDatum| -> u64 {
            let dd = &d.local_data[&d.p].decomposition;
            let mut di = dd.clone();
            di.extend(dd.iter().map(|&x| d.group.mul(d.iota, x)));
            di.sort_unstable();
            di.dedup();
            (di.len() / 2) as u64
        };
        np(large) / np(small)
    };
    let base_small = FieldTag::KwPlus;
    let base_large = FieldTag::KwPlus;
    let mut out = Vec::new();
    for gen in &model.generators {
        let mut entries: Vec<((PrimeSlot, usize), BigRational)> = Vec::new();
        for ((slot, idx), inv) in &gen.entries {
            // the slot must exist in the small datum's probe set
            if let PrimeSlot::Finite(l) = slot {
                if !small.local_data.contains_key(l) {
                    return Err(Error::Brauer(format!(
                        "probe prime {l} missing from the smaller datum"
                    )));
                }
            }
            let large_places = places_of(large, base_large, *slot)?;
            let small_places = places_of(small, base_small, *slot)?;
            let w = &large_places[*idx];
            // image place: the one whose group subset contains the image of
            // a representative under the tower surjection
            let rep_img = tower.surjection[w.set[0]];
            let vidx = small_places
                .iter()
                .position(|v| v.set.binary_search(&rep_img).is_ok())
                .ok_or_else(|| Error::Brauer("no image place".into()))?;
            let scaled = inv * BigRational::from(BigInt::from(deg_plus));
            entries.push(((*slot, vidx), mod1(&scaled)));
        }
        out.push(BrauerElement::new(small, base_small, entries)?);
    }
    Ok(out)
}

/// Direct sum over the probe set of the local torus cohomology, plus the
/// real place when requested. Every prime with a nontrivial decomposition
/// group must appear in the probe set (the rest contribute zero).
pub fn adelic_sum(
    datum: &CMDatum,
    charlattice: &GModule,
    r: i32,
    primes: &[u64],
    include_infinity: bool,
) -> Result<AbGroupStructure> {
    for l in datum.nonsplit_primes() {
        if !primes.contains(&l) {
            return Err(Error::Brauer(format!(
                "probe set misses prime {l} with nontrivial decomposition group"
            )));
        }
    }
    let mut acc = AbGroupStructure::trivial();
    for &l in primes {
        let local = local_torus_cohomology(datum, l, charlattice, r)?;
        acc = acc.direct_sum(&local.structure);
    }
    if include_infinity {
        let real = real_torus_cohomology(datum, charlattice, r)?;
        acc = acc.direct_sum(&real.structure);
    }
    Ok(acc)
}

/// The H^2 obstruction probe of the cg0-style sequence: a pair of elements
/// over the upper field and over Q arises from Br(base) exactly when the
/// congruence system Res(x) = b_upper, multiplier * Cor(x) = b_q has a
/// solution in invariant vectors over the probe set.
pub fn arises_from_base(
    datum: &CMDatum,
    kind: TorusKind,
    b_upper: &BrauerElement,
    b_q: &BrauerElement,
) -> Result<bool> {
    if b_upper.field != kind.upper() || b_q.field != FieldTag::Q {
        return Err(Error::Brauer("elements are over the wrong fields".into()));
    }
    b_upper.validate(datum)?;
    b_q.validate(datum)?;
    let base = kind.base();
    let c = kind.cor_multiplier(datum);
    // common denominator for all constraints
    let mut m = BigInt::from(2);
    for inv in b_upper.entries.values().chain(b_q.entries.values()) {
        m = m.lcm(inv.denom());
    }
    for slot in slots(datum) {
        for w in places_of(datum, kind.upper(), slot)? {
            m = m.lcm(&BigInt::from(w.degree));
        }
    }
    m = m.lcm(&BigInt::from(c));
    // variables: base places; real places carry x in (1/2)Z/Z, so their
    // cover coordinate is scaled by m/2
    let mut vars: Vec<(PrimeSlot, usize, BigInt)> = Vec::new();
    for slot in slots(datum) {
        let base_places = places_of(datum, base, slot)?;
        for (idx, info) in base_places.iter().enumerate() {
            let scale = if slot == PrimeSlot::Infinity && is_real_place(info) {
                &m / BigInt::from(2)
            } else {
                BigInt::one()
            };
            vars.push((slot, idx, scale));
        }
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut targets: Vec<BigInt> = Vec::new();
    // restriction constraints: rel_w * x_v = b_upper(w) for every upper place w
    for slot in slots(datum) {
        let base_places = places_of(datum, base, slot)?;
        let upper_places = places_of(datum, kind.upper(), slot)?;
        for (widx, w) in upper_places.iter().enumerate() {
            let vpos = vars
                .iter()
                .position(|(s, vidx, _)| {
                    *s == slot
                        && w.set.iter().all(|x| base_places[*vidx].set.binary_search(x).is_ok())
                })
                .expect("every upper place has a base place below");
            let (_, vidx, scale) = &vars[vpos];
            let rel = w.degree / base_places[*vidx].degree;
            let mut row = vec![BigInt::zero(); vars.len()];
            row[vpos] = BigInt::from(rel) * scale;
            rows.push(row);
            let b = b_upper
                .entries
                .get(&(slot, widx))
                .cloned()
                .unwrap_or_else(BigRational::zero);
            let t = b * BigRational::from(m.clone());
            debug_assert!(t.is_integer());
            targets.push(t.to_integer());
        }
    }
    // corestriction constraints: c * sum over the slot = b_q(slot)
    for slot in slots(datum) {
        let mut row = vec![BigInt::zero(); vars.len()];
        for (i, (s, _, scale)) in vars.iter().enumerate() {
            if *s == slot {
                row[i] = BigInt::from(c) * scale;
            }
        }
        rows.push(row);
        let b = b_q.entries.get(&(slot, 0)).cloned().unwrap_or_else(BigRational::zero);
        let t = b * BigRational::from(m.clone());
        debug_assert!(t.is_integer());
        targets.push(t.to_integer());
    }
    // solvable mod m: target in the span of the columns and m * I
    let a = IntMatrix::from_fn(rows.len(), vars.len() + rows.len(), |i, j| {
        if j < vars.len() {
            rows[i][j].clone()
        } else if j - vars.len() == i {
            m.clone()
        } else {
            BigInt::zero()
        }
    });
    let t = IntMatrix::from_fn(targets.len(), 1, |i, _| targets[i].clone());
    Ok(solve_exact(&a, &t).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{cyclotomic_surjection, identity_tower, make_cyclotomic_datum, make_quadratic_datum, transition};

    const PRIMES: &[u64] = &[2, 3, 5, 13, 19];

    fn gaussian(p: u64) -> CMDatum {
        make_quadratic_datum(-1, p, PRIMES).unwrap()
    }

    #[test]
    fn place_counts() {
        let d = gaussian(5);
        // K over 5 (split): two places of degree 2... over Q_5 the degree is 1 each
        let k5 = places_of(&d, FieldTag::K, PrimeSlot::Finite(5)).unwrap();
        assert_eq!(k5.len(), 2);
        assert!(k5.iter().all(|p| p.degree == 1));
        // K over 3 (inert): one place of degree 2
        let k3 = places_of(&d, FieldTag::K, PrimeSlot::Finite(3)).unwrap();
        assert_eq!(k3.len(), 1);
        assert_eq!(k3[0].degree, 2);
        // K at infinity: one complex place
        let kinf = places_of(&d, FieldTag::K, PrimeSlot::Infinity).unwrap();
        assert_eq!(kinf.len(), 1);
        assert!(!is_real_place(&kinf[0]));
        // K+ = Q here: single real place
        let qinf = places_of(&d, FieldTag::KPlus, PrimeSlot::Infinity).unwrap();
        assert_eq!(qinf.len(), 1);
        assert!(is_real_place(&qinf[0]));
    }

    #[test]
    fn restriction_gaussian_example() {
        // on Q: 1/2 at 5, -1/2 at 3; restrict to K = Q(i)
        let d = gaussian(5);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let elt = BrauerElement::new(
            &d,
            FieldTag::Q,
            vec![
                ((PrimeSlot::Finite(5), 0), half.clone()),
                ((PrimeSlot::Finite(3), 0), -half.clone()),
            ],
        )
        .unwrap();
        let res = restriction(&d, &elt, FieldTag::K).unwrap();
        // over 5 (split): 1/2 at each of the two places; over 3 (inert,
        // degree 2): invariant doubled to 0; total 1/2 + 1/2 = 1 = 0 mod 1
        assert_eq!(res.entries.len(), 2);
        for ((slot, _), inv) in &res.entries {
            assert_eq!(*slot, PrimeSlot::Finite(5));
            assert_eq!(*inv, half);
        }
    }

    #[test]
    fn corestriction_split_cancellation() {
        let d = gaussian(13);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        // 13 splits in Q(i): invariants 1/3, -1/3 at the two places
        let elt = BrauerElement::new(
            &d,
            FieldTag::K,
            vec![
                ((PrimeSlot::Finite(13), 0), third.clone()),
                ((PrimeSlot::Finite(13), 1), -third.clone()),
            ],
        )
        .unwrap();
        let cor = corestriction(&d, &elt, FieldTag::Q).unwrap();
        assert!(cor.is_zero());
        // single inert place with invariant 1/2 corestricts to 1/2... needs
        // a second place for reciprocity; use 3 and infinity is complex, so
        // pair two finite inert-type invariants
        let elt = BrauerElement::new(
            &d,
            FieldTag::K,
            vec![
                ((PrimeSlot::Finite(3), 0), BigRational::new(BigInt::one(), BigInt::from(2))),
                ((PrimeSlot::Finite(19), 0), BigRational::new(BigInt::one(), BigInt::from(2))),
            ],
        )
        .unwrap();
        let cor = corestriction(&d, &elt, FieldTag::Q).unwrap();
        assert_eq!(cor.entries.len(), 2);
    }

    #[test]
    fn cor_res_is_multiplication_by_degree() {
        let d = make_cyclotomic_datum(15, 19, PRIMES).unwrap();
        // [K : K+] = 2
        let fifth = BigRational::new(BigInt::one(), BigInt::from(5));
        let elt = BrauerElement::new(
            &d,
            FieldTag::KPlus,
            vec![
                ((PrimeSlot::Finite(19), 0), fifth.clone()),
                ((PrimeSlot::Finite(19), 1), -fifth.clone()),
            ],
        )
        .unwrap();
        let up = restriction(&d, &elt, FieldTag::K).unwrap();
        let back = corestriction(&d, &up, FieldTag::KPlus).unwrap();
        let doubled = BrauerElement::new(
            &d,
            FieldTag::KPlus,
            elt.entries
                .iter()
                .map(|(k, v)| (*k, v * BigRational::from(BigInt::from(2))))
                .collect(),
        )
        .unwrap();
        assert_eq!(back, doubled);
    }

    #[test]
    fn reciprocity_rejected() {
        let d = gaussian(5);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let bad = BrauerElement::new(&d, FieldTag::Q, vec![((PrimeSlot::Finite(5), 0), half)]);
        assert!(bad.is_err());
    }

    #[test]
    fn hasse_parity_table() {
        // zeta_15 at 19: n(w) = 2 even -> Z/2
        let d = make_cyclotomic_datum(15, 19, PRIMES).unwrap();
        let h = hasse_cokernel_p(&d).unwrap();
        assert_eq!(h.structure, AbGroupStructure::cyclic(2));
        // zeta_13 at 3: n(w) = 3 odd -> 0
        let d = make_cyclotomic_datum(13, 3, PRIMES).unwrap();
        let h = hasse_cokernel_p(&d).unwrap();
        assert!(h.structure.is_trivial());
        // Q(i) at 5: n(w) = 1 -> 0
        let h = hasse_cokernel_p(&gaussian(5)).unwrap();
        assert!(h.structure.is_trivial());
        // degenerate: Q(i) at 3
        let h = hasse_cokernel_p(&gaussian(3)).unwrap();
        assert!(h.structure.is_trivial());
        assert!(h.degenerate_iota_in_d);
    }

    #[test]
    fn cg1_bijectivity_for_s() {
        for d in [
            gaussian(5),
            make_cyclotomic_datum(13, 3, PRIMES).unwrap(),
            make_cyclotomic_datum(15, 19, PRIMES).unwrap(),
        ] {
            let rep = torus_h2_sequence(&d, TorusKind::S).unwrap();
            assert!(rep.global_to_adelic_bijective, "{}", d.label);
            assert_eq!(rep.h1_global.structure, rep.h1_adelic.structure);
        }
    }

    #[test]
    fn h1_model_p_gaussian_trivial() {
        let rep = torus_h2_sequence(&gaussian(5), TorusKind::P).unwrap();
        assert!(rep.h1_global.structure.is_trivial());
    }

    #[test]
    fn transition_vanishing_parity() {
        // identity tower on zeta_15 at 19: degree 1 (odd), H^1 nonzero,
        // identity is not the zero map
        let d = make_cyclotomic_datum(15, 19, PRIMES).unwrap();
        let rep = torus_h2_sequence(&d, TorusKind::P).unwrap();
        assert!(!rep.h1_global.structure.is_trivial(), "test needs a nonzero source");
        let t = identity_tower(&d);
        assert!(!transition_vanishing(&t).unwrap());
        // zeta_13 in zeta_39 at p = 3: local degree 6/3 = 2, even -> zero map
        let small = make_cyclotomic_datum(13, 3, PRIMES).unwrap();
        let large = make_cyclotomic_datum(39, 3, PRIMES).unwrap();
        let surj = cyclotomic_surjection(&small, &large, 13, 39).unwrap();
        let tower = transition(&small, &large, &surj).unwrap();
        assert_eq!(tower.local_degree_at_p, 2);
        let rep_large = torus_h2_sequence(&large, TorusKind::P).unwrap();
        assert!(
            !rep_large.h1_global.structure.is_trivial(),
            "vanishing should not be vacuous"
        );
        assert!(transition_vanishing(&tower).unwrap());
        // degenerate datum errors
        let t3 = identity_tower(&gaussian(3));
        assert!(transition_vanishing(&t3).is_err());
    }

    #[test]
    fn adelic_sum_gm() {
        let d = gaussian(3);
        let gm = GModule::trivial_lattice(d.group.clone());
        // r=2, probe {3, 5} + infinity: Z/2 (inert 3) + 0 (split 5) + Z/2 (real)
        // probe must cover the nonsplit primes of the datum: 2, 3, 19
        let s = adelic_sum(&d, &gm, 2, &[2, 3, 5, 13, 19], true).unwrap();
        // inert 3 and 19, ramified 2, real place: Z/2 each; split 5, 13: 0
        assert_eq!(
            s,
            AbGroupStructure::from_moduli(0, vec![BigInt::from(2); 4])
        );
        // r=1: Hilbert 90 locally, all zero
        let s1 = adelic_sum(&d, &gm, 1, &[2, 3, 5, 13, 19], true).unwrap();
        assert!(s1.is_trivial());
        // empty probe without infinity: must fail because 2, 3 are nonsplit
        assert!(adelic_sum(&d, &gm, 2, &[], false).is_err());
    }

    #[test]
    fn obstruction_probe() {
        let d = make_cyclotomic_datum(15, 19, PRIMES).unwrap();
        // the image of any base element glues
        let fifth = BigRational::new(BigInt::one(), BigInt::from(5));
        let x = BrauerElement::new(
            &d,
            FieldTag::KPlus,
            vec![
                ((PrimeSlot::Finite(19), 0), fifth.clone()),
                ((PrimeSlot::Finite(19), 1), -fifth.clone()),
            ],
        )
        .unwrap();
        let up = restriction(&d, &x, FieldTag::K).unwrap();
        let down = corestriction(&d, &x, FieldTag::Q).unwrap();
        assert!(arises_from_base(&d, TorusKind::S, &up, &down).unwrap());
        // zero pair trivially glues
        let z_up = BrauerElement::zero(FieldTag::K);
        let z_q = BrauerElement::zero(FieldTag::Q);
        assert!(arises_from_base(&d, TorusKind::S, &z_up, &z_q).unwrap());
    }
}
