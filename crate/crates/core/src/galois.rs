//! Galois-theoretic data of a CM field Galois over Q: the finite group, its
//! central involution, per-prime decomposition data, place sets, and tower
//! transitions. Presets cover cyclotomic and imaginary quadratic fields;
//! general data is user-supplied and validated, not derived.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;
use crate::{Error, Result};

/// Decomposition data at a rational prime: the decomposition subgroup of the
/// fixed place above the prime, ramification index e and residue degree f.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub decomposition: Vec<usize>,
    pub e: u64,
    pub f: u64,
}

impl LocalData {
    pub fn local_degree(&self) -> u64 {
        self.e * self.f
    }
}

/// The data (Galois group, complex conjugation, decomposition subgroups,
/// distinguished prime p) of a CM field Galois over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMDatum {
    pub group: FiniteGroup,
    pub iota: usize,
    pub local_data: BTreeMap<u64, LocalData>,
    pub p: u64,
    pub label: String,
}

/// Places of K and of K+ above one rational prime, as cosets of the
/// decomposition subgroup. `x[i]` lists group elements; `y[j]` likewise for
/// cosets of D·<iota>. `fiber[i]` is the index of the y-place under x-place i.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaceSet {
    pub prime: u64,
    pub x: Vec<Vec<usize>>,
    pub y: Vec<Vec<usize>>,
    pub fiber: Vec<usize>,
    pub iota_in_decomposition: bool,
}

impl PlaceSet {
    pub fn x_count(&self) -> usize {
        self.x.len()
    }

    pub fn y_count(&self) -> usize {
        self.y.len()
    }
}

/// A tower K ⊂ K′ given by the surjection Gal(K′/Q) ↠ Gal(K/Q).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerMap {
    pub small: CMDatum,
    pub large: CMDatum,
    /// surjection on element indices, group(K′) → group(K)
    pub surjection: Vec<usize>,
    /// [K′_w : K_w] at the shared distinguished prime
    pub local_degree_at_p: u64,
}

impl CMDatum {
    /// Validates the CM axioms: iota is a central involution, every D_l is a
    /// subgroup of order e*f, and local data exists at the distinguished p.
    pub fn new(
        group: FiniteGroup,
        iota: usize,
        local_data: BTreeMap<u64, LocalData>,
        p: u64,
        label: String,
    ) -> Result<Self> {
        if iota == group.identity() {
            return Err(Error::Datum("iota must be a nontrivial involution".into()));
        }
        if group.mul(iota, iota) != group.identity() {
            return Err(Error::Datum("iota^2 != 1".into()));
        }
        if !group.is_central(iota) {
            return Err(Error::Datum("iota is not central".into()));
        }
        for (l, ld) in &local_data {
            if !group.is_subgroup(&ld.decomposition) {
                return Err(Error::Datum(format!("decomposition set at {l} is not a subgroup")));
            }
            if ld.decomposition.len() as u64 != ld.e * ld.f {
                return Err(Error::Datum(format!(
                    "|D_{l}| = {} but e*f = {}",
                    ld.decomposition.len(),
                    ld.e * ld.f
                )));
            }
        }
        if !local_data.contains_key(&p) {
            return Err(Error::Datum(format!("no local data at the distinguished prime {p}")));
        }
        Ok(CMDatum { group, iota, local_data, p, label })
    }

    pub fn local(&self, l: u64) -> Result<&LocalData> {
        self.local_data
            .get(&l)
            .ok_or_else(|| Error::Datum(format!("no local data at {l} in {}", self.label)))
    }

    /// n(w_K) = e*f at the distinguished prime.
    pub fn local_degree_at_p(&self) -> u64 {
        self.local_data[&self.p].local_degree()
    }

    pub fn iota_in_decomposition_at_p(&self) -> bool {
        self.local_data[&self.p].decomposition.contains(&self.iota)
    }

    /// Places of K and K+ above l.
    pub fn places(&self, l: u64) -> Result<PlaceSet> {
        let ld = self.local(l)?;
        let x = self.group.left_cosets(&ld.decomposition);
        let mut d_iota = ld.decomposition.clone();
        d_iota.extend(ld.decomposition.iter().map(|&s| self.group.mul(self.iota, s)));
        d_iota.sort_unstable();
        d_iota.dedup();
        let y = self.group.left_cosets(&d_iota);
        let fiber = x
            .iter()
            .map(|c| y.iter().position(|yc| yc.binary_search(&c[0]).is_ok()).unwrap())
            .collect();
        Ok(PlaceSet {
            prime: l,
            x,
            y,
            fiber,
            iota_in_decomposition: ld.decomposition.contains(&self.iota),
        })
    }

    /// Primes with nontrivial decomposition group (these must always be in a
    /// Brauer probe set, along with p).
    pub fn nonsplit_primes(&self) -> Vec<u64> {
        self.local_data
            .iter()
            .filter(|(_, ld)| ld.decomposition.len() > 1)
            .map(|(l, _)| *l)
            .collect()
    }
}

fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert!(m >= 1 && a.gcd(&m) == 1);
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// The cyclotomic field Q(zeta_n), n >= 3 and n not ≡ 2 mod 4 (canonical
/// conductor). Decomposition data is computed for the distinguished prime
/// and every prime in `primes`: for l ∤ n the decomposition group is <l>,
/// unramified with f = ord(l mod n); for l | n with n = l^a * m it is the
/// full inertia block over <l mod m>, with e = phi(l^a).
pub fn make_cyclotomic_datum(n: u64, p: u64, primes: &[u64]) -> Result<CMDatum> {
    if n < 3 {
        return Err(Error::Datum(format!("Q(zeta_{n}) is not CM (need n >= 3)")));
    }
    if n % 4 == 2 {
        return Err(Error::Datum(format!(
            "n = {n} ≡ 2 mod 4 is not a canonical conductor (use n/2)"
        )));
    }
    let group = FiniteGroup::units_mod(n);
    let iota = group.element_by_label(&(n - 1).to_string()).expect("-1 is a unit");
    let mut wanted: Vec<u64> = primes.to_vec();
    wanted.push(p);
    wanted.sort_unstable();
    wanted.dedup();
    let mut local_data = BTreeMap::new();
    for l in wanted {
        let ld = if n % l != 0 {
            let gen = group.element_by_label(&(l % n).to_string()).expect("l is a unit mod n");
            let d = group.subgroup_generated(&[gen]);
            let f = d.len() as u64;
            LocalData { decomposition: d, e: 1, f }
        } else {
            let mut m = n;
            let mut la = 1u64;
            while m % l == 0 {
                m /= l;
                la *= l;
            }
            let e = euler_phi(la);
            let f = multiplicative_order(l % m.max(1), m.max(1));
            let lf: Vec<u64> = (0..f)
                .scan(1u64, |acc, _| {
                    let cur = *acc;
                    *acc = *acc * (l % m.max(1)) % m.max(1);
                    Some(cur)
                })
                .collect();
            let d: Vec<usize> = (0..group.order())
                .filter(|&i| {
                    let r: u64 = group.label(i).parse().unwrap();
                    m == 1 || lf.contains(&(r % m))
                })
                .collect();
            debug_assert_eq!(d.len() as u64, e * f);
            LocalData { decomposition: d, e, f }
        };
        local_data.insert(l, ld);
    }
    CMDatum::new(group, iota, local_data, p, format!("Q(zeta_{n})"))
}

/// Kronecker symbol (disc / l) for a fundamental discriminant.
fn kronecker(disc: i64, l: u64) -> i64 {
    if l == 2 {
        return match disc.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0,
        };
    }
    let li = l as i64;
    let a = disc.rem_euclid(li) as u64;
    if a == 0 {
        return 0;
    }
    // Euler's criterion; l is small here
    let mut r = 1u64;
    let mut base = a % l;
    let mut exp = (l - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            r = r * base % l;
        }
        base = base * base % l;
        exp >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Field discriminant of Q(sqrt(d)) for squarefree d < 0.
pub fn quadratic_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// The imaginary quadratic field Q(sqrt(d)), d < 0 squarefree. Splitting at
/// each prime comes from the Kronecker symbol of the field discriminant.
pub fn make_quadratic_datum(d: i64, p: u64, primes: &[u64]) -> Result<CMDatum> {
    if d >= 0 {
        return Err(Error::Datum(format!("d = {d} is not negative")));
    }
    if !is_squarefree(d) {
        return Err(Error::Datum(format!("d = {d} is not squarefree")));
    }
    let table = vec![vec![0, 1], vec![1, 0]];
    let group = FiniteGroup::new(table, Some(vec!["1".into(), "iota".into()]))?;
    let disc = quadratic_discriminant(d);
    let mut wanted: Vec<u64> = primes.to_vec();
    wanted.push(p);
    wanted.sort_unstable();
    wanted.dedup();
    let mut local_data = BTreeMap::new();
    for l in wanted {
        let ld = match kronecker(disc, l) {
            1 => LocalData { decomposition: vec![0], e: 1, f: 1 },
            -1 => LocalData { decomposition: vec![0, 1], e: 1, f: 2 },
            _ => LocalData { decomposition: vec![0, 1], e: 2, f: 1 },
        };
        local_data.insert(l, ld);
    }
    CMDatum::new(group, 1, local_data, p, format!("Q(sqrt({d}))"))
}

/// Validates a surjection group(K′) → group(K) as a tower map: group
/// homomorphism, surjective, iota′ ↦ iota, decomposition groups map into
/// decomposition groups at every shared prime, and equal distinguished p.
pub fn transition(small: &CMDatum, large: &CMDatum, surjection: &[usize]) -> Result<TowerMap> {
    if surjection.len() != large.group.order() {
        return Err(Error::Datum("surjection length != |group(K')|".into()));
    }
    if surjection.iter().any(|&x| x >= small.group.order()) {
        return Err(Error::Datum("surjection image index out of range".into()));
    }
    for a in 0..large.group.order() {
        for b in 0..large.group.order() {
            if surjection[large.group.mul(a, b)] != small.group.mul(surjection[a], surjection[b]) {
                return Err(Error::Datum(format!("surjection is not a homomorphism at ({a},{b})")));
            }
        }
    }
    let mut hit = vec![false; small.group.order()];
    for &x in surjection {
        hit[x] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::Datum("map is not surjective".into()));
    }
    if surjection[large.iota] != small.iota {
        return Err(Error::Datum("iota' does not map to iota".into()));
    }
    if small.p != large.p {
        return Err(Error::Datum("towers must share the distinguished prime".into()));
    }
    for (l, ld_large) in &large.local_data {
        let Some(ld_small) = small.local_data.get(l) else { continue };
        for &s in &ld_large.decomposition {
            if !ld_small.decomposition.contains(&surjection[s]) {
                return Err(Error::Datum(format!(
                    "decomposition group at {l} does not map into the smaller one"
                )));
            }
        }
    }
    let nw_small = small.local_degree_at_p();
    let nw_large = large.local_degree_at_p();
    if nw_large % nw_small != 0 {
        return Err(Error::Datum(format!(
            "local degree {nw_large} at p not divisible by {nw_small}"
        )));
    }
    Ok(TowerMap {
        small: small.clone(),
        large: large.clone(),
        surjection: surjection.to_vec(),
        local_degree_at_p: nw_large / nw_small,
    })
}

/// The reduction map (Z/n')^* → (Z/n)^* for n | n', as a tower surjection.
pub fn cyclotomic_surjection(
    small: &CMDatum,
    large: &CMDatum,
    n_small: u64,
    n_large: u64,
) -> Result<Vec<usize>> {
    if n_large % n_small != 0 {
        return Err(Error::Datum(format!("{n_small} does not divide {n_large}")));
    }
    (0..large.group.order())
        .map(|i| {
            let r: u64 = large
                .group
                .label(i)
                .parse()
                .map_err(|_| Error::Datum("cyclotomic surjection needs residue labels".into()))?;
            small
                .group
                .element_by_label(&(r % n_small).to_string())
                .ok_or_else(|| Error::Datum(format!("residue {r} not a unit mod {n_small}")))
        })
        .collect()
}

/// The identity tower K = K'.
pub fn identity_tower(datum: &CMDatum) -> TowerMap {
    let surjection: Vec<usize> = (0..datum.group.order()).collect();
    transition(datum, datum, &surjection).expect("identity is a valid tower")
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRIMES: &[u64] = &[2, 3, 5, 13, 19];

    #[test]
    fn gaussian_splitting() {
        let d = make_quadratic_datum(-1, 5, PRIMES).unwrap();
        // 5 ≡ 1 mod 4 splits
        let p5 = d.places(5).unwrap();
        assert_eq!(p5.x_count(), 2);
        assert_eq!(p5.y_count(), 1);
        assert!(!p5.iota_in_decomposition);
        // 3 ≡ 3 mod 4 is inert
        let p3 = d.places(3).unwrap();
        assert_eq!(p3.x_count(), 1);
        assert!(p3.iota_in_decomposition);
        assert_eq!(d.local(3).unwrap().f, 2);
        // 2 ramifies
        assert_eq!(d.local(2).unwrap().e, 2);
    }

    #[test]
    fn quadratic_ramified_at_5() {
        let d = make_quadratic_datum(-5, 5, PRIMES).unwrap();
        assert_eq!(d.local(5).unwrap().e, 2);
    }

    #[test]
    fn quadratic_rejects_bad_input() {
        assert!(make_quadratic_datum(4, 5, PRIMES).is_err());
        assert!(make_quadratic_datum(-4, 5, PRIMES).is_err());
    }

    #[test]
    fn cyclotomic_13_at_3() {
        let d = make_cyclotomic_datum(13, 3, PRIMES).unwrap();
        let ld = d.local(3).unwrap();
        assert_eq!(ld.f, 3);
        assert_eq!(ld.e, 1);
        let labels: Vec<u64> =
            ld.decomposition.iter().map(|&i| d.group.label(i).parse().unwrap()).collect();
        assert_eq!(labels, vec![1, 3, 9]);
        assert!(!d.iota_in_decomposition_at_p());
        let ps = d.places(3).unwrap();
        assert_eq!(ps.x_count(), 4);
        assert_eq!(ps.y_count(), 2);
    }

    #[test]
    fn cyclotomic_15_at_19() {
        let d = make_cyclotomic_datum(15, 19, PRIMES).unwrap();
        let ld = d.local(19).unwrap();
        assert_eq!(ld.local_degree(), 2);
        assert!(!d.iota_in_decomposition_at_p());
        // ramified primes 3 and 5
        assert_eq!(d.local(3).unwrap().e, 2);
        assert_eq!(d.local(5).unwrap().e, 4);
    }

    #[test]
    fn cyclotomic_rejects_bad_conductor() {
        assert!(make_cyclotomic_datum(2, 5, PRIMES).is_err());
        assert!(make_cyclotomic_datum(6, 5, PRIMES).is_err());
    }

    #[test]
    fn place_counts_match_orbit_enumeration() {
        // brute force: orbits of <l> acting on (Z/n)^* by multiplication
        for (n, l) in [(13u64, 3u64), (15, 19), (20, 3), (5, 19)] {
            let d = make_cyclotomic_datum(n, l, PRIMES).unwrap();
            let ps = d.places(l).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            let mut orbits = 0usize;
            for a in 1..n {
                if a.gcd(&n) != 1 || seen.contains(&a) {
                    continue;
                }
                orbits += 1;
                let mut x = a;
                loop {
                    seen.insert(x);
                    x = x * (l % n) % n;
                    if x == a {
                        break;
                    }
                }
            }
            assert_eq!(ps.x_count(), orbits, "n={n} l={l}");
            // fundamental identity: sum of e*f over places = |G|
            let ld = d.local(l).unwrap();
            assert_eq!(ps.x_count() as u64 * ld.e * ld.f, d.group.order() as u64);
        }
    }

    #[test]
    fn tower_gaussian_into_zeta20() {
        let small = make_cyclotomic_datum(4, 3, PRIMES).unwrap();
        let large = make_cyclotomic_datum(20, 3, PRIMES).unwrap();
        let surj = cyclotomic_surjection(&small, &large, 4, 20).unwrap();
        let t = transition(&small, &large, &surj).unwrap();
        assert_eq!(t.local_degree_at_p, 2);
    }

    #[test]
    fn tower_identity_and_zeta5_in_zeta15() {
        let d = make_cyclotomic_datum(13, 3, PRIMES).unwrap();
        assert_eq!(identity_tower(&d).local_degree_at_p, 1);
        let small = make_cyclotomic_datum(5, 19, PRIMES).unwrap();
        let large = make_cyclotomic_datum(15, 19, PRIMES).unwrap();
        let surj = cyclotomic_surjection(&small, &large, 5, 15).unwrap();
        let t = transition(&small, &large, &surj).unwrap();
        let expect = large.local_degree_at_p() / small.local_degree_at_p();
        assert_eq!(t.local_degree_at_p, expect);
    }

    #[test]
    fn transition_rejects_wrong_map() {
        let small = make_cyclotomic_datum(4, 3, PRIMES).unwrap();
        let large = make_cyclotomic_datum(20, 3, PRIMES).unwrap();
        // constant map is not surjective (and not a homomorphism onto iota)
        let bad = vec![0; large.group.order()];
        assert!(transition(&small, &large, &bad).is_err());
    }

    #[test]
    fn datum_json_round_trip() {
        let d = make_cyclotomic_datum(13, 3, PRIMES).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: CMDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(d, back);
    }
}
