//! Exact Weil-number arithmetic: certification of pi * conj(pi) = q^m in
//! imaginary quadratic and cyclotomic CM fields, slope vectors and their
//! integral multiples, and the alpha-construction (a generator of the
//! principalized prime power over p, raised to twice the unit index).
//!
//! Valuations are computed only in quadratic fields, where exact ideal
//! arithmetic is elementary; cyclotomic elements get predicate support
//! (is_weil_number) only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classfield::{cyclotomic_polynomial, form_class_group, CycloElement};
use crate::galois::quadratic_discriminant;
use crate::serre_weil::{RhoMap, SerreLattice, WeilLattice};
use crate::{Error, Result};

/// Element a + b*omega of the imaginary quadratic field Q(sqrt(d)), with
/// omega = (1+sqrt(d))/2 for d ≡ 1 mod 4 and omega = sqrt(d) otherwise
/// (so integral coordinates span the maximal order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElt {
    pub d: i64,
    pub a: BigRational,
    pub b: BigRational,
}

/// Trace and norm of omega: omega^2 = t*omega - n.
fn omega_params(d: i64) -> (i64, i64) {
    if d.rem_euclid(4) == 1 {
        (1, (1 - d) / 4)
    } else {
        (0, -d)
    }
}

impl QuadElt {
    pub fn new(d: i64, a: i64, b: i64) -> Self {
        QuadElt { d, a: BigRational::from(BigInt::from(a)), b: BigRational::from(BigInt::from(b)) }
    }

    pub fn zero(d: i64) -> Self {
        Self::new(d, 0, 0)
    }

    pub fn one(d: i64) -> Self {
        Self::new(d, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        QuadElt { d: self.d, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        let (t, n) = omega_params(self.d);
        let t = BigRational::from(BigInt::from(t));
        let n = BigRational::from(BigInt::from(n));
        let a = &self.a * &rhs.a - &n * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + &t * &self.b * &rhs.b;
        QuadElt { d: self.d, a, b }
    }

    /// Complex conjugation: omega -> t - omega.
    pub fn conj(&self) -> Self {
        let (t, _) = omega_params(self.d);
        let t = BigRational::from(BigInt::from(t));
        QuadElt { d: self.d, a: &self.a + &t * &self.b, b: -&self.b }
    }

    /// x * conj(x), always rational.
    pub fn norm(&self) -> BigRational {
        let p = self.mul(&self.conj());
        debug_assert!(p.b.is_zero());
        p.a
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Weil("inverse of zero".into()));
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadElt { d: self.d, a: &c.a / &n, b: &c.b / &n })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.d);
        let mut k = e.unsigned_abs();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let c = BigRational::from(c.clone());
        QuadElt { d: self.d, a: &self.a * &c, b: &self.b * &c }
    }
}

impl std::fmt::Display for QuadElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let omega = if self.d.rem_euclid(4) == 1 {
            format!("(1+sqrt({}))/2", self.d)
        } else {
            format!("sqrt({})", self.d)
        };
        write!(f, "{} + {}*{}", self.a, self.b, omega)
    }
}

/// A CM-field element: quadratic with full arithmetic support, or
/// cyclotomic (predicate support only).
#[derive(Clone, Debug)]
pub enum CMFieldElement {
    Quadratic(QuadElt),
    Cyclotomic { n: u64, element: CycloElement },
}

impl CMFieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            CMFieldElement::Quadratic(x) => x.is_zero(),
            CMFieldElement::Cyclotomic { element, .. } => element.is_zero(),
        }
    }

    /// pi * conj(pi); None when the product is irrational (not CM-real).
    pub fn norm_to_q(&self) -> Option<BigRational> {
        match self {
            CMFieldElement::Quadratic(x) => Some(x.norm()),
            CMFieldElement::Cyclotomic { n, element } => {
                let phi = cyclotomic_polynomial(*n);
                let prod = element.mul(&element.conjugate(&phi), &phi);
                prod.is_rational()
            }
        }
    }
}

/// Verdict of the Weil-number test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeilVerdict {
    Weil { weight: i64 },
    /// the exact value of pi * conj(pi), as the rejection witness
    NotWeil { product: BigRational },
}

/// The unique integer m with pi * conj(pi) = (p^n_exp)^m, or a rejection
/// carrying the exact product. Errors on pi = 0.
pub fn is_weil_number(pi: &CMFieldElement, p: u64, n_exp: u64) -> Result<WeilVerdict> {
    if pi.is_zero() {
        return Err(Error::Weil("zero is not a Weil number".into()));
    }
    let Some(nu) = pi.norm_to_q() else {
        return Err(Error::Weil("pi * conj(pi) is not rational".into()));
    };
    let q = BigInt::from(p).pow(n_exp as u32);
    if let Some(m) = exact_power(&nu, &q) {
        Ok(WeilVerdict::Weil { weight: m })
    } else {
        Ok(WeilVerdict::NotWeil { product: nu })
    }
}

/// m with value = q^m, if any (m may be negative).
fn exact_power(value: &BigRational, q: &BigInt) -> Option<i64> {
    if !value.is_positive() {
        return None;
    }
    if value.is_one() {
        return Some(0);
    }
    let (target, sign) = if value.denom().is_one() {
        (value.numer().clone(), 1i64)
    } else if value.numer().is_one() {
        (value.denom().clone(), -1)
    } else {
        return None;
    };
    let mut m = 0i64;
    let mut acc = target;
    while acc > BigInt::one() {
        let (div, rem) = acc.div_rem(q);
        if !rem.is_zero() {
            return None;
        }
        acc = div;
        m += 1;
    }
    Some(sign * m)
}

/// p-adic valuation of a nonzero rational.
fn ord_p_rational(x: &BigRational, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    v
}

/// Splitting type of p in Q(sqrt(d)).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub fn splitting_type(d: i64, p: u64) -> Splitting {
    let disc = quadratic_discriminant(d);
    match kronecker_disc(disc, p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

fn kronecker_disc(disc: i64, l: u64) -> i64 {
    if l == 2 {
        return match disc.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0,
        };
    }
    let a = disc.rem_euclid(l as i64) as u64;
    if a == 0 {
        return 0;
    }
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

/// ord at the prime (p, omega - r) of an integral element, via content
/// stripping and the residue test x + y r mod p (gcd-with-generator
/// iteration in its exact form).
fn ord_split(x: &QuadElt, p: u64, r: u64) -> i64 {
    assert!(!x.is_zero());
    // clear the rational content first
    let den = num_integer::lcm(x.a.denom().clone(), x.b.denom().clone());
    let cleared = x.scale_int(&den);
    let ord_den = ord_p_rational(&BigRational::from(den), p);
    let pb = BigInt::from(p);
    let mut t = 0i64;
    let mut z = cleared;
    loop {
        let a_div = (z.a.numer() % &pb).is_zero();
        let b_div = (z.b.numer() % &pb).is_zero();
        if a_div && b_div {
            let inv_p = BigRational::new(BigInt::one(), pb.clone());
            z = QuadElt { d: z.d, a: &z.a * &inv_p, b: &z.b * &inv_p };
            t += 1;
        } else {
            break;
        }
    }
    let total = ord_p_rational(&z.norm(), p);
    let here = if total == 0 {
        0
    } else {
        // p divides exactly one of the conjugate primes of z now
        let residue = (z.a.to_integer() + z.b.to_integer() * BigInt::from(r)).mod_floor(&pb);
        if residue.is_zero() {
            total
        } else {
            0
        }
    };
    t + here - ord_den
}

/// Roots of the minimal polynomial of omega modulo a split prime.
fn omega_roots_mod_p(d: i64, p: u64) -> Vec<u64> {
    let (t, n) = omega_params(d);
    (0..p)
        .filter(|&r| {
            let r = r as i64;
            (r * r - t * r + n).rem_euclid(p as i64) == 0
        })
        .collect()
}

/// Slope data of a certified Weil number in a quadratic field: slopes in
/// the order (distinguished place w, its conjugate), the integral multiples
/// f(v) = s(v) * [K_v : Q_p], and the weight.
#[derive(Clone, Debug)]
pub struct SlopeData {
    pub weight: i64,
    pub slopes: Vec<BigRational>,
    pub f_values: Vec<BigInt>,
    pub splitting: Splitting,
}

/// Slopes of pi as a Weil p^n_exp-number in Q(sqrt(d)). For split p the
/// distinguished place is fixed by [`distinguished_root`], keeping slopes,
/// the alpha-construction, and the character lattices consistent.
pub fn slopes(pi: &QuadElt, p: u64, n_exp: u64) -> Result<SlopeData> {
    let verdict = is_weil_number(&CMFieldElement::Quadratic(pi.clone()), p, n_exp)?;
    let WeilVerdict::Weil { weight } = verdict else {
        return Err(Error::Weil("not a Weil number; no slopes".into()));
    };
    let d = pi.d;
    let splitting = splitting_type(d, p);
    let ne = n_exp as i64;
    let (slopes, f_values) = match splitting {
        Splitting::Split => {
            let r = distinguished_root(d, p)?;
            let r_bar = omega_roots_mod_p(d, p)
                .into_iter()
                .find(|&x| x != r)
                .expect("split prime has two roots");
            let s1 = BigRational::new(BigInt::from(ord_split(pi, p, r)), BigInt::from(ne));
            let s2 = BigRational::new(BigInt::from(ord_split(pi, p, r_bar)), BigInt::from(ne));
            // conjugate-slope symmetry
            let m = BigRational::from(BigInt::from(weight));
            if &s1 + &s2 != m {
                return Err(Error::Weil(format!(
                    "slope symmetry fails: {s1} + {s2} != {weight}"
                )));
            }
            let f1 = &s1 * BigRational::from(BigInt::one());
            let f2 = &s2 * BigRational::from(BigInt::one());
            (vec![s1, s2], vec![f1, f2])
        }
        Splitting::Inert => {
            // ord_v = ord_p(N)/2, ord_v(p^n) = n
            let total = ord_p_rational(&pi.norm(), p);
            if total % 2 != 0 {
                return Err(Error::Weil("inert valuation of the norm is odd".into()));
            }
            let s = BigRational::new(BigInt::from(total / 2), BigInt::from(ne));
            let f = &s * BigRational::from(BigInt::from(2));
            (vec![s], vec![f])
        }
        Splitting::Ramified => {
            // ord_v = ord_p(N), ord_v(p^n) = 2n
            let total = ord_p_rational(&pi.norm(), p);
            let s = BigRational::new(BigInt::from(total), BigInt::from(2 * ne));
            let f = &s * BigRational::from(BigInt::from(2));
            (vec![s], vec![f])
        }
    };
    let f_ints: Vec<BigInt> = f_values
        .iter()
        .map(|f| {
            if f.is_integer() {
                Ok(f.to_integer())
            } else {
                Err(Error::Weil(format!("f value {f} is not integral")))
            }
        })
        .collect::<Result<_>>()?;
    // pair condition f(v) + f(iota v) = n(w) * m
    let nw = match splitting {
        Splitting::Split => 1i64,
        _ => 2,
    };
    match splitting {
        Splitting::Split => {
            let sum: BigInt = f_ints.iter().sum();
            if sum != BigInt::from(weight) {
                return Err(Error::Weil("f values do not sum to the weight".into()));
            }
        }
        _ => {
            if BigInt::from(2) * &f_ints[0] != BigInt::from(nw * weight) {
                return Err(Error::Weil("degenerate pair condition fails".into()));
            }
        }
    }
    Ok(SlopeData { weight, slopes, f_values: f_ints, splitting })
}

/// Certificate of a verified Weil number with its slope data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeilNumberCert {
    pub field: String,
    pub element: String,
    pub p: u64,
    pub n_exponent: u64,
    pub weight: i64,
    pub slopes: Vec<String>,
    pub f_values: Vec<String>,
}

/// Certify pi as a Weil p^n_exp-number in Q(sqrt(d)) with slope vector.
/// Slopes must lie in [0, weight] (integral pi), the type invariant.
pub fn certify(pi: &QuadElt, p: u64, n_exp: u64) -> Result<WeilNumberCert> {
    let data = slopes(pi, p, n_exp)?;
    let lo = BigRational::zero();
    let hi = BigRational::from(BigInt::from(data.weight));
    for s in &data.slopes {
        if s < &lo || s > &hi {
            return Err(Error::Weil(format!(
                "slope {s} outside [0, {}]",
                data.weight
            )));
        }
    }
    Ok(WeilNumberCert {
        field: format!("Q(sqrt({}))", pi.d),
        element: pi.to_string(),
        p,
        n_exponent: n_exp,
        weight: data.weight,
        slopes: data.slopes.iter().map(|s| s.to_string()).collect(),
        f_values: data.f_values.iter().map(|f| f.to_string()).collect(),
    })
}

/// Membership of the slope vector in W^K: ambient coordinates are
/// (f at the distinguished place, f at the other places..., weight).
pub fn weil_lattice_coordinates(data: &SlopeData, weil: &WeilLattice) -> Option<Vec<BigInt>> {
    let nx = weil.places.x.len();
    if data.f_values.len() != nx {
        return None;
    }
    let mut ambient = vec![BigInt::zero(); nx + 1];
    // distinguished place first in SlopeData; weil.base_place is its index
    ambient[weil.base_place] = data.f_values[0].clone();
    if nx == 2 {
        ambient[1 - weil.base_place] = data.f_values[1].clone();
    }
    ambient[nx] = BigInt::from(data.weight);
    weil.coordinates_of(&ambient)
}

/// The distinguished root r (defining the place w as the prime (p, omega - r))
/// for a split prime: derived from the canonical generator search, so that
/// the alpha-construction's prime is w itself.
pub fn distinguished_root(d: i64, p: u64) -> Result<u64> {
    let (a, _h, _cl) = principal_power_generator(d, p)?;
    let roots = omega_roots_mod_p(d, p);
    let pb = BigInt::from(p);
    roots
        .into_iter()
        .find(|&r| {
            (a.a.to_integer() + a.b.to_integer() * BigInt::from(r))
                .mod_floor(&pb)
                .is_zero()
        })
        .ok_or_else(|| Error::Weil("generator avoids both primes over p".into()))
}

/// Search for the canonical generator of the first principal power of a
/// prime over the split p: h runs over divisors of the class number in
/// ascending order; for each h, coordinates are scanned y = 1, 2, ... and
/// x descending from p^h to -p^h, first element of norm p^h not divisible
/// by p. Returns (a, h, class number).
fn principal_power_generator(d: i64, p: u64) -> Result<(QuadElt, u64, u64)> {
    if splitting_type(d, p) != Splitting::Split {
        return Err(Error::Weil(format!("p = {p} is not split in Q(sqrt({d}))")));
    }
    let disc = quadratic_discriminant(d);
    let class_number = form_class_group(disc)?.order() as u64;
    let mut divisors: Vec<u64> = (1..=class_number).filter(|h| class_number % h == 0).collect();
    divisors.sort_unstable();
    for &h in &divisors {
        let target = BigRational::from(BigInt::from(p).pow(h as u32));
        let bound = (p as i64).pow(h as u32);
        for y in 1..=bound {
            for x in (-bound..=bound).rev() {
                let cand = QuadElt::new(d, x, y);
                if cand.norm() != target {
                    continue;
                }
                // a genuine generator of a prime power is never divisible by p
                let pb = BigInt::from(p);
                if (cand.a.to_integer().mod_floor(&pb)).is_zero()
                    && (cand.b.to_integer().mod_floor(&pb)).is_zero()
                {
                    continue;
                }
                return Ok((cand, h, class_number));
            }
        }
    }
    Err(Error::Weil(format!(
        "no generator with norm p^h found for p = {p}, d = {d} within |coefficients| <= p^h \
         (h over divisors of the class number {class_number})"
    )))
}

/// Output of the alpha-construction.
#[derive(Clone, Debug)]
pub struct AlphaData {
    pub d: i64,
    pub p: u64,
    /// generator of the principalized prime power, norm p^h
    pub a: QuadElt,
    /// order of the prime class in the class group
    pub h: u64,
    pub class_number: u64,
    /// unit index (U(K) : U(K+)): 2 for d = -1, 3 for d = -3, else 1
    pub unit_index: u64,
    pub alpha: QuadElt,
    /// alpha is a Weil p^base_exponent-number of weight 1
    pub base_exponent: u64,
    pub cert: WeilNumberCert,
    /// root defining the distinguished prime (p, omega - root)
    pub root: u64,
}

/// alpha = a^{2n} where the prime over p to the h-th power is (a) and
/// n = (U(K) : U(K+)). Requires p split (iota outside the decomposition
/// group). The residue degree is 1, so the base exponent is 2nh.
pub fn alpha_construction(d: i64, p: u64) -> Result<AlphaData> {
    let (a, h, class_number) = principal_power_generator(d, p)?;
    let unit_index = match d {
        -1 => 2,
        -3 => 3,
        _ => 1,
    };
    let alpha = a.pow(2 * unit_index as i64)?;
    let base_exponent = 2 * unit_index * h;
    let cert = certify(&alpha, p, base_exponent)?;
    if cert.weight != 1 {
        return Err(Error::Weil(format!("alpha has weight {} instead of 1", cert.weight)));
    }
    let root = distinguished_root(d, p)?;
    // ord_w(alpha) must be the full 2nh (alpha generates w^{2nh})
    let ow = ord_split(&alpha, p, root);
    if ow != base_exponent as i64 {
        return Err(Error::Weil(format!(
            "alpha has ord_w = {ow}, expected {base_exponent}"
        )));
    }
    Ok(AlphaData { d, p, a, h, class_number, unit_index, alpha, base_exponent, cert, root })
}

/// f(alpha) for f in X*(S^K) of a quadratic datum: alpha^{f(1)} * conj(alpha)^{f(iota)},
/// certified as a Weil p^{base}-number of weight wt(f), with its slope
/// vector checked against the image of f under the rho map.
pub fn evaluate_character(
    f_coords: &[BigInt],
    serre: &SerreLattice,
    weil: &WeilLattice,
    rho: &RhoMap,
    alpha: &AlphaData,
) -> Result<WeilNumberCert> {
    if serre.datum.group.order() != 2 {
        return Err(Error::Weil("character evaluation needs a quadratic datum".into()));
    }
    if f_coords.len() != serre.rank() {
        return Err(Error::Weil("f is outside the Serre lattice (wrong length)".into()));
    }
    let id = serre.datum.group.identity();
    let iota = serre.datum.iota;
    let mut f1 = BigInt::zero();
    let mut fi = BigInt::zero();
    let mut wt = BigInt::zero();
    for (j, c) in f_coords.iter().enumerate() {
        f1 += c * serre.value_at(j, id);
        fi += c * serre.value_at(j, iota);
        wt += c * serre.weight_of_basis(j);
    }
    let to_i64 = |x: &BigInt| -> Result<i64> {
        x.try_into().map_err(|_| Error::Weil("exponent too large".into()))
    };
    let value = alpha.alpha.pow(to_i64(&f1)?)?.mul(&alpha.alpha.conj().pow(to_i64(&fi)?)?);
    if value.is_zero() {
        return Err(Error::Weil("f(alpha) is zero".into()));
    }
    let data = slopes(&value, alpha.p, alpha.base_exponent)?;
    if BigInt::from(data.weight) != wt {
        return Err(Error::Weil(format!(
            "f(alpha) has weight {} but wt(f) = {wt}",
            data.weight
        )));
    }
    // slope data must match the rho image of f
    let coords = weil_lattice_coordinates(&data, weil)
        .ok_or_else(|| Error::Weil("slope data of f(alpha) escapes W^K".into()))?;
    let fm = crate::matrix::IntMatrix::from_fn(f_coords.len(), 1, |i, _| f_coords[i].clone());
    let image = rho.matrix.mul(&fm);
    let image_coords: Vec<BigInt> = (0..image.rows()).map(|i| image[(i, 0)].clone()).collect();
    if coords != image_coords {
        return Err(Error::Weil(
            "slopes of f(alpha) disagree with the rho image of f".into(),
        ));
    }
    certify(&value, alpha.p, alpha.base_exponent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_weil_numbers() {
        // 1 + 2i, q = 5: weight 1
        let pi = QuadElt::new(-1, 1, 2);
        let v = is_weil_number(&CMFieldElement::Quadratic(pi), 5, 1).unwrap();
        assert_eq!(v, WeilVerdict::Weil { weight: 1 });
        // -7 + 24i, q = 625: weight 1
        let pi = QuadElt::new(-1, -7, 24);
        let v = is_weil_number(&CMFieldElement::Quadratic(pi), 5, 4).unwrap();
        assert_eq!(v, WeilVerdict::Weil { weight: 1 });
        // 1 + i has norm 2: rejected for q = 5
        let pi = QuadElt::new(-1, 1, 1);
        let v = is_weil_number(&CMFieldElement::Quadratic(pi), 5, 1).unwrap();
        assert_eq!(v, WeilVerdict::NotWeil { product: BigRational::from(BigInt::from(2)) });
        // zero errors
        assert!(is_weil_number(&CMFieldElement::Quadratic(QuadElt::zero(-1)), 5, 1).is_err());
    }

    #[test]
    fn weil_power_homomorphism() {
        // if pi is a Weil q-number of weight m, pi^k is a Weil q^k-number of weight m
        let pi = QuadElt::new(-1, 1, 2);
        for k in 1..=4i64 {
            let v =
                is_weil_number(&CMFieldElement::Quadratic(pi.pow(k).unwrap()), 5, k as u64)
                    .unwrap();
            assert_eq!(v, WeilVerdict::Weil { weight: 1 }, "k = {k}");
        }
    }

    #[test]
    fn cyclotomic_predicate() {
        // 1 + 2*zeta_4 is 1 + 2i
        let phi = cyclotomic_polynomial(4);
        let mut e = CycloElement::zero(4, phi.len() - 1);
        e.coeffs[0] = BigRational::from(BigInt::one());
        e.coeffs[1] = BigRational::from(BigInt::from(2));
        let v = is_weil_number(&CMFieldElement::Cyclotomic { n: 4, element: e }, 5, 1).unwrap();
        assert_eq!(v, WeilVerdict::Weil { weight: 1 });
        // 1 + zeta_5 has irrational pi * conj(pi)
        let phi5 = cyclotomic_polynomial(5);
        let mut e = CycloElement::zero(5, phi5.len() - 1);
        e.coeffs[0] = BigRational::from(BigInt::one());
        e.coeffs[1] = BigRational::from(BigInt::one());
        assert!(is_weil_number(&CMFieldElement::Cyclotomic { n: 5, element: e }, 5, 1).is_err());
    }

    #[test]
    fn slope_examples() {
        // 1 + 2i over split 5: ordinary pair (1, 0)
        let pi = QuadElt::new(-1, 1, 2);
        let s = slopes(&pi, 5, 1).unwrap();
        assert_eq!(s.weight, 1);
        let slope_set: Vec<String> = s.slopes.iter().map(|x| x.to_string()).collect();
        assert!(slope_set == vec!["1", "0"] || slope_set == vec!["0", "1"]);
        let f_sum: BigInt = s.f_values.iter().sum();
        assert_eq!(f_sum, BigInt::one());
        // pi = 3 inert, q = 9: s = 1/2, f = 1
        let pi = QuadElt::new(-1, 3, 0);
        let s = slopes(&pi, 3, 2).unwrap();
        assert_eq!(s.weight, 1);
        assert_eq!(s.slopes[0], BigRational::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(s.f_values[0], BigInt::one());
        // pi = 5 rational, q = 5: weight 2, slopes (1, 1)
        let pi = QuadElt::new(-1, 5, 0);
        let s = slopes(&pi, 5, 1).unwrap();
        assert_eq!(s.weight, 2);
        assert!(s.slopes.iter().all(|x| x.is_one()));
    }

    #[test]
    fn alpha_gaussian_5() {
        let a = alpha_construction(-1, 5).unwrap();
        assert_eq!(a.h, 1);
        assert_eq!(a.unit_index, 2);
        assert_eq!(a.a, QuadElt::new(-1, 2, 1));
        assert_eq!(a.alpha, QuadElt::new(-1, -7, 24));
        assert_eq!(a.base_exponent, 4);
        assert_eq!(a.cert.weight, 1);
    }

    #[test]
    fn alpha_gaussian_13() {
        let a = alpha_construction(-1, 13).unwrap();
        assert_eq!(a.h, 1);
        assert_eq!(a.a, QuadElt::new(-1, 3, 2));
        assert_eq!(a.alpha, QuadElt::new(-1, 3, 2).pow(4).unwrap());
    }

    #[test]
    fn alpha_sqrt_minus5_at_3() {
        let a = alpha_construction(-5, 3).unwrap();
        assert_eq!(a.h, 2);
        assert_eq!(a.class_number, 2);
        assert_eq!(a.a, QuadElt::new(-5, 2, 1));
        assert_eq!(a.unit_index, 1);
        assert_eq!(a.base_exponent, 4);
        // verify the ideal equation: N(a) = 9 and ord_w(a) = 2
        assert_eq!(a.a.norm(), BigRational::from(BigInt::from(9)));
    }

    #[test]
    fn alpha_rejects_nonsplit() {
        assert!(alpha_construction(-1, 3).is_err());
    }

    #[test]
    fn evaluate_character_full_basis_gaussian_5() {
        use crate::galois::make_quadratic_datum;
        use crate::serre_weil::{rho_characters, serre_character_lattice, weil_character_lattice};
        let datum = make_quadratic_datum(-1, 5, &[2, 3, 5, 13, 19]).unwrap();
        let serre = serre_character_lattice(&datum).unwrap();
        let weil = weil_character_lattice(&datum).unwrap();
        let rho = rho_characters(&serre, &weil).unwrap();
        let alpha = alpha_construction(-1, 5).unwrap();
        for j in 0..serre.rank() {
            let mut coords = vec![BigInt::zero(); serre.rank()];
            coords[j] = BigInt::one();
            let cert =
                evaluate_character(&coords, &serre, &weil, &rho, &alpha).unwrap();
            assert_eq!(BigInt::from(cert.weight), serre.weight_of_basis(j));
        }
        // f = 0 gives f(alpha) = 1, weight 0 -- via the zero vector
        let zero = vec![BigInt::zero(); serre.rank()];
        let cert = evaluate_character(&zero, &serre, &weil, &rho, &alpha).unwrap();
        assert_eq!(cert.weight, 0);
    }

    #[test]
    fn evaluate_character_alpha_itself() {
        use crate::galois::make_quadratic_datum;
        use crate::serre_weil::{rho_characters, serre_character_lattice, weil_character_lattice};
        let datum = make_quadratic_datum(-1, 5, &[2, 3, 5, 13, 19]).unwrap();
        let serre = serre_character_lattice(&datum).unwrap();
        let weil = weil_character_lattice(&datum).unwrap();
        let rho = rho_characters(&serre, &weil).unwrap();
        let alpha = alpha_construction(-1, 5).unwrap();
        // find the f with ambient (f(1), f(iota), wt) = (1, 0, 1): f(alpha) = alpha
        let target = [BigInt::one(), BigInt::zero(), BigInt::one()];
        let tm = crate::matrix::IntMatrix::from_fn(3, 1, |i, _| target[i].clone());
        let coords = crate::matrix::solve_exact(&serre.basis, &tm).unwrap();
        let coords: Vec<BigInt> = (0..coords.rows()).map(|i| coords[(i, 0)].clone()).collect();
        let cert = evaluate_character(&coords, &serre, &weil, &rho, &alpha).unwrap();
        assert_eq!(cert.weight, 1);
        assert_eq!(cert.element, QuadElt::new(-1, -7, 24).to_string());
    }
}
