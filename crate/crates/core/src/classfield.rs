//! Class-group and relative-class-number computations: binary quadratic
//! form class groups by reduction and composition, exact generalized
//! Bernoulli numbers B_{1,chi} in cyclotomic coordinates, the relative
//! class number h^-(Q(zeta_l)), and irregular primes from exact Bernoulli
//! numerators. Everything is exact rational/cyclotomic arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::AbGroupStructure;
use crate::{Error, Result};

/// Largest prime conductor accepted by the h^- machinery. Cyclotomic
/// arithmetic is in Q(zeta_{l-1}), degree phi(l-1) <= 96 here.
pub const HMINUS_PRIME_BOUND: u64 = 97;

/// A positive definite binary quadratic form a x^2 + b xy + c y^2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_reduced(&self) -> bool {
        let babs = self.b.abs();
        if babs > self.a || self.a > self.c {
            return false;
        }
        if (babs == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// Gauss reduction to the canonical representative of the class.
    pub fn reduce(&self) -> QuadForm {
        let mut f = self.clone();
        loop {
            // normalize: -a < b <= a
            let two_a = BigInt::from(2) * &f.a;
            let r = {
                // b + 2ak in (-a, a]
                let mut r = f.b.mod_floor(&two_a);
                if r > f.a {
                    r -= &two_a;
                }
                r
            };
            let k = (&r - &f.b) / &two_a;
            let c = &f.a * &k * &k + &f.b * &k + &f.c;
            f = QuadForm { a: f.a.clone(), b: r, c };
            if f.a > f.c {
                f = QuadForm { a: f.c.clone(), b: -&f.b, c: f.a.clone() };
                continue;
            }
            if f.a == f.c && f.b.is_negative() {
                f.b = -f.b;
            }
            break;
        }
        f
    }

    /// Dirichlet composition of forms of the same discriminant.
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let d = self.discriminant();
        assert_eq!(d, other.discriminant(), "discriminant mismatch");
        let (a1, b1) = (&self.a, &self.b);
        let (a2, b2) = (&other.a, &other.b);
        let s = (b1 + b2) / BigInt::from(2);
        let n = (b2 - b1) / BigInt::from(2);
        // y1 a1 + y2 a2 + y3 s = d1 = gcd(a1, a2, s)
        let egcd = |x: &BigInt, y: &BigInt| -> (BigInt, BigInt, BigInt) {
            let (mut r0, mut r1) = (x.clone(), y.clone());
            let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
            let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
            while !r1.is_zero() {
                let q = &r0 / &r1;
                let r2 = &r0 - &q * &r1;
                r0 = std::mem::replace(&mut r1, r2);
                let s2 = &s0 - &q * &s1;
                s0 = std::mem::replace(&mut s1, s2);
                let t2 = &t0 - &q * &t1;
                t0 = std::mem::replace(&mut t1, t2);
            }
            if r0.is_negative() {
                (-r0, -s0, -t0)
            } else {
                (r0, s0, t0)
            }
        };
        let (d0, _u, v) = egcd(a1, a2);
        let (d1, w0, y3) = egcd(&d0, &s);
        // Bezout: (w0*u) a1 + y2 a2 + y3 s = d1 with y2 = w0*v
        let y2 = &w0 * &v;
        let a3 = (a1 * a2) / (&d1 * &d1);
        // b3 = b2 + 2 (a2/d1) (y2 (b1 - b2)/2 - y3 c2) mod 2 a3
        let c2 = &other.c;
        let t = &y2 * (&-&n) - &y3 * c2;
        let b3 = b2 + BigInt::from(2) * (a2 / &d1) * t;
        let two_a3 = BigInt::from(2) * &a3;
        let b3 = b3.mod_floor(&two_a3);
        let c3 = (&b3 * &b3 - &d) / (BigInt::from(4) * &a3);
        QuadForm { a: a3, b: b3, c: c3 }.reduce()
    }

    /// The principal form of discriminant d.
    pub fn principal(d: &BigInt) -> QuadForm {
        let r = d.mod_floor(&BigInt::from(4));
        if r.is_zero() {
            QuadForm { a: BigInt::one(), b: BigInt::zero(), c: -d / BigInt::from(4) }
        } else {
            QuadForm { a: BigInt::one(), b: BigInt::one(), c: (BigInt::one() - d) / BigInt::from(4) }
        }
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }.reduce()
    }

    fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }
}

/// The form class group of a negative discriminant: canonical structure
/// plus the list of reduced primitive forms.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub discriminant: BigInt,
    pub structure: AbGroupStructure,
    pub forms: Vec<QuadForm>,
}

impl FormClassGroup {
    pub fn order(&self) -> usize {
        self.forms.len()
    }

    /// Order of the class of a form in the group.
    pub fn class_order(&self, f: &QuadForm) -> u64 {
        let id = QuadForm::principal(&self.discriminant).reduce();
        let f = f.reduce();
        let mut acc = f.clone();
        let mut k = 1u64;
        while acc != id {
            acc = acc.compose(&f);
            k += 1;
        }
        k
    }
}

/// Enumerate reduced primitive forms and read off the group structure from
/// the order statistics of composition (element counts killed by each prime
/// power determine the invariant factors of a finite abelian group).
pub fn form_class_group(d: i64) -> Result<FormClassGroup> {
    if d >= 0 {
        return Err(Error::ClassField(format!("discriminant {d} must be negative")));
    }
    if !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::ClassField(format!("{d} is not ≡ 0, 1 mod 4")));
    }
    let dd = BigInt::from(d);
    let mut forms = Vec::new();
    let bound = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=bound {
        for b in -a..=a {
            let num = BigInt::from(b) * BigInt::from(b) - &dd;
            let den = BigInt::from(4) * BigInt::from(a);
            if !(&num % &den).is_zero() {
                continue;
            }
            let c = num / den;
            let f = QuadForm { a: a.into(), b: b.into(), c };
            if f.is_reduced() && f.is_primitive() && f.c >= f.a {
                forms.push(f);
            }
        }
    }
    forms.sort();
    forms.dedup();
    // invariant factors from order statistics
    let h = forms.len() as u64;
    let structure = structure_from_orders(&forms, h)?;
    Ok(FormClassGroup { discriminant: dd, structure, forms })
}

fn structure_from_orders(forms: &[QuadForm], h: u64) -> Result<AbGroupStructure> {
    if h == 1 {
        return Ok(AbGroupStructure::trivial());
    }
    // for each prime q | h, count elements killed by q^k to get the q-part
    let mut moduli: Vec<BigInt> = Vec::new();
    let mut rest = h;
    let mut q = 2u64;
    while q * q <= rest || (rest > 1 && q <= rest) {
        if rest % q == 0 {
            while rest % q == 0 {
                rest /= q;
            }
            // count elements x with x^{q^k} = 1
            let mut prev_count = 1u64;
            let mut k = 1u32;
            let mut exps: Vec<u32> = Vec::new();
            loop {
                let qk = q.pow(k);
                let count = forms
                    .iter()
                    .filter(|f| {
                        let mut acc = QuadForm::principal(&f.discriminant()).reduce();
                        for _ in 0..qk {
                            acc = acc.compose(f);
                        }
                        acc == QuadForm::principal(&f.discriminant()).reduce()
                    })
                    .count() as u64;
                // count = q^{sum of min(k, e_i)}: each step k adds one to the
                // exponent for every cyclic factor with e_i >= k
                let step = count / prev_count;
                let mut factors_at_least_k = 0u32;
                let mut s = step;
                while s > 1 {
                    if s % q != 0 {
                        return Err(Error::ClassField("inconsistent order statistics".into()));
                    }
                    s /= q;
                    factors_at_least_k += 1;
                }
                while exps.len() < factors_at_least_k as usize {
                    exps.push(0);
                }
                for e in exps.iter_mut().take(factors_at_least_k as usize) {
                    *e += 1;
                }
                if step == 1 {
                    break;
                }
                prev_count = count;
                k += 1;
            }
            for e in exps {
                if e > 0 {
                    moduli.push(BigInt::from(q.pow(e)));
                }
            }
        }
        q += 1;
    }
    let structure = AbGroupStructure::from_moduli(0, moduli);
    if structure.torsion_order() != BigInt::from(h) {
        return Err(Error::ClassField("structure order does not match form count".into()));
    }
    Ok(structure)
}

// ----- exact cyclotomic arithmetic for B_{1,chi} -----

/// Integer polynomial, ascending coefficients.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    assert!(den[dn].is_one());
    let qn = rem.len() - 1 - dn;
    let mut q = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        q[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
    }
    assert!(rem.iter().all(|x| x.is_zero()), "inexact polynomial division");
    q
}

/// Cyclotomic polynomial Phi_n, ascending integer coefficients.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut result = num;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            result = poly_div_exact(&result, &phi_d);
        }
    }
    result
}

/// Element of Q(zeta_n) as a polynomial of degree < phi(n) in zeta, mod Phi_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    pub n: u64,
    pub coeffs: Vec<BigRational>,
}

impl CycloElement {
    pub fn zero(n: u64, degree: usize) -> Self {
        CycloElement { n, coeffs: vec![BigRational::zero(); degree] }
    }

    pub fn from_rational(n: u64, degree: usize, r: BigRational) -> Self {
        let mut e = Self::zero(n, degree);
        if degree > 0 {
            e.coeffs[0] = r;
        } else {
            assert!(r.is_zero());
        }
        e
    }

    /// zeta^k reduced mod Phi_n.
    pub fn zeta_power(n: u64, phi: &[BigInt], k: u64) -> Self {
        let k = (k % n) as usize;
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        let mut e = CycloElement { n, coeffs };
        e.reduce(phi);
        e
    }

    fn reduce(&mut self, phi: &[BigInt]) {
        let degree = phi.len() - 1;
        while self.coeffs.len() > degree {
            let top = self.coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = self.coeffs.len() - degree;
            // subtract top * x^k * Phi_n (monic, so the leading term cancels)
            for (j, c) in phi.iter().enumerate().take(degree) {
                self.coeffs[k + j] -= &top * BigRational::from(c.clone());
            }
        }
        while self.coeffs.len() < degree {
            self.coeffs.push(BigRational::zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycloElement { n: self.n, coeffs }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloElement { n: self.n, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Self, phi: &[BigInt]) -> Self {
        assert_eq!(self.n, other.n);
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut e = CycloElement { n: self.n, coeffs };
        e.reduce(phi);
        e
    }

    pub fn is_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conjugate(&self, phi: &[BigInt]) -> Self {
        let degree = phi.len() - 1;
        let mut acc = Self::zero(self.n, degree);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (self.n - k as u64 % self.n) % self.n;
            acc = acc.add(&Self::zeta_power(self.n, phi, e).scale(c));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// An odd Dirichlet character mod a prime l, given by its index j against a
/// fixed generator g of (Z/l)^*: chi(g^a) = zeta_{l-1}^{ja}.
#[derive(Clone, Debug)]
pub struct DirichletChar {
    pub modulus: u64,
    pub generator: u64,
    pub index: u64,
    /// discrete logs: dlog[x] = a with g^a = x (mod l), for x in 1..l
    dlog: Vec<u64>,
}

impl DirichletChar {
    pub fn is_odd(&self) -> bool {
        // chi(-1) = zeta^{j (l-1)/2} = (-1)^j
        self.index % 2 == 1
    }

    /// chi(x) as a power of zeta_{l-1}, None when gcd(x, l) > 1.
    pub fn eval_exponent(&self, x: u64) -> Option<u64> {
        let r = (x % self.modulus) as usize;
        if r == 0 {
            return None;
        }
        Some(self.index * self.dlog[r] % (self.modulus - 1))
    }
}

fn primitive_root(l: u64) -> u64 {
    let order = l - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            factors.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'g: for g in 2..l {
        for &q in &factors {
            if pow_mod(g, order / q, l) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// All characters mod the prime l, indexed against a fixed generator.
pub fn characters_mod(l: u64) -> Vec<DirichletChar> {
    let g = primitive_root(l);
    let mut dlog = vec![0u64; l as usize];
    let mut x = 1u64;
    for a in 0..l - 1 {
        dlog[x as usize] = a;
        x = x * g % l;
    }
    (0..l - 1)
        .map(|j| DirichletChar { modulus: l, generator: g, index: j, dlog: dlog.clone() })
        .collect()
}

/// B_{1,chi} = (1/l) * sum_{a=1}^{l-1} chi(a) * a, by direct summation over
/// residues (the primary route).
pub fn b1_direct(chi: &DirichletChar, phi: &[BigInt]) -> CycloElement {
    let l = chi.modulus;
    let n = l - 1;
    let degree = phi.len() - 1;
    let mut acc = CycloElement::zero(n, degree);
    for a in 1..l {
        let e = chi.eval_exponent(a).expect("a is a unit");
        let term = CycloElement::zeta_power(n, phi, e)
            .scale(&BigRational::from(BigInt::from(a)));
        acc = acc.add(&term);
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(l)))
}

/// B_{1,chi} by summation over powers of the generator (the independent
/// oracle route: residues are produced by iterated multiplication, character
/// values by exponent arithmetic, no discrete-log table).
pub fn b1_generator_route(chi: &DirichletChar, phi: &[BigInt]) -> CycloElement {
    let l = chi.modulus;
    let n = l - 1;
    let degree = phi.len() - 1;
    let mut acc = CycloElement::zero(n, degree);
    let mut residue = 1u64;
    for a in 0..n {
        // residue = g^a, chi(residue) = zeta^{j a}
        let e = chi.index * a % n;
        let term = CycloElement::zeta_power(n, phi, e)
            .scale(&BigRational::from(BigInt::from(residue)));
        acc = acc.add(&term);
        residue = residue * chi.generator % l;
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(l)))
}

/// h^-(Q(zeta_l)) = Q * w * prod over odd chi of (-B_{1,chi}/2), with Q = 1
/// and w = 2l for a prime conductor l >= 3. The product is assembled in
/// Q(zeta_{l-1}) and must come out a rational integer.
pub fn relative_class_number(l: u64) -> Result<BigInt> {
    relative_class_number_with(l, b1_direct)
}

/// Same formula with the generator-route B_{1,chi} (the in-repo oracle).
pub fn relative_class_number_oracle(l: u64) -> Result<BigInt> {
    relative_class_number_with(l, b1_generator_route)
}

fn relative_class_number_with(
    l: u64,
    b1: impl Fn(&DirichletChar, &[BigInt]) -> CycloElement,
) -> Result<BigInt> {
    if l < 3 || !is_prime(l) {
        return Err(Error::ClassField(format!("conductor {l} must be an odd prime")));
    }
    if l > HMINUS_PRIME_BOUND {
        return Err(Error::ClassField(format!(
            "conductor {l} exceeds the supported bound {HMINUS_PRIME_BOUND}"
        )));
    }
    let n = l - 1;
    let phi = cyclotomic_polynomial(n);
    let degree = phi.len() - 1;
    let chars = characters_mod(l);
    let minus_half = BigRational::new(-BigInt::one(), BigInt::from(2));
    let mut prod = CycloElement::from_rational(n, degree, BigRational::one());
    for chi in chars.iter().filter(|c| c.is_odd()) {
        let term = b1(chi, &phi).scale(&minus_half);
        prod = prod.mul(&term, &phi);
    }
    let w = BigRational::from(BigInt::from(2 * l));
    let hm = prod.scale(&w);
    let r = hm
        .is_rational()
        .ok_or_else(|| Error::ClassField("h^- product is not rational".into()))?;
    if !r.is_integer() {
        return Err(Error::ClassField(format!("h^- = {r} is not an integer")));
    }
    Ok(r.to_integer())
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// Exact Bernoulli numbers B_0..B_max by the defining recursion
/// sum_{j<=k} C(k+1, j) B_j = 0.
pub fn bernoulli_numbers(max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(max + 1);
    for k in 0..=max {
        if k == 0 {
            b.push(BigRational::one());
            continue;
        }
        // B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(k+1, 0)
        for (j, bj) in b.iter().enumerate() {
            if j > 0 {
                // C(k+1, j) = C(k+1, j-1) * (k+2-j)/j
                binom = &binom * BigInt::from((k + 2 - j) as u64) / BigInt::from(j as u64);
            }
            acc += bj * BigRational::from(binom.clone());
        }
        let kp1 = BigRational::from(BigInt::from((k + 1) as u64));
        b.push(-acc / kp1);
    }
    b
}

/// The von Staudt-Clausen denominator of B_k for even k:
/// product of primes p with (p-1) | k.
pub fn von_staudt_clausen_denominator(k: u64) -> BigInt {
    let mut d = BigInt::one();
    for p in 2..=k + 1 {
        if is_prime(p) && k % (p - 1) == 0 {
            d *= BigInt::from(p);
        }
    }
    d
}

/// Primes l <= bound dividing the numerator of some B_k, even k <= l-3.
/// Denominators are cross-checked against von Staudt-Clausen.
pub fn irregular_primes(bound: u64) -> Result<Vec<u64>> {
    if bound < 3 {
        return Ok(vec![]);
    }
    let kmax = (bound - 3) as usize;
    let bern = bernoulli_numbers(kmax.max(2));
    for k in (2..=kmax).step_by(2) {
        if *bern[k].denom() != von_staudt_clausen_denominator(k as u64) {
            return Err(Error::ClassField(format!(
                "Bernoulli denominator check failed at k = {k}"
            )));
        }
    }
    let mut out = Vec::new();
    for l in 3..=bound {
        if !is_prime(l) {
            continue;
        }
        let irregular = (2..=l.saturating_sub(3))
            .step_by(2)
            .any(|k| (bern[k as usize].numer() % BigInt::from(l)).is_zero());
        if irregular {
            out.push(l);
        }
    }
    Ok(out)
}

fn is_irregular(l: u64) -> Result<bool> {
    Ok(irregular_primes(l)?.contains(&l))
}

/// The divisibility used by the uncountability argument: an irregular prime
/// l divides h^-(Q(zeta_l)). Evaluates both sides; vacuously true for
/// regular l.
pub fn minus_divisibility_check(l: u64) -> Result<bool> {
    if !is_irregular(l)? {
        return Ok(true);
    }
    let hm = relative_class_number(l)?;
    Ok((hm % BigInt::from(l)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_counts() {
        // h(-4) = 1, h(-20) = 2, h(-23) = 3
        assert_eq!(form_class_group(-4).unwrap().order(), 1);
        let g20 = form_class_group(-20).unwrap();
        assert_eq!(g20.order(), 2);
        assert_eq!(g20.structure, AbGroupStructure::cyclic(2));
        let g23 = form_class_group(-23).unwrap();
        assert_eq!(g23.order(), 3);
        assert_eq!(g23.structure, AbGroupStructure::cyclic(3));
    }

    #[test]
    fn group_axioms_small_discriminants() {
        for d in (-200i64..0).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            let g = match form_class_group(d) {
                Ok(g) => g,
                Err(_) => continue,
            };
            let id = QuadForm::principal(&BigInt::from(d)).reduce();
            assert!(g.forms.contains(&id), "identity missing for {d}");
            for f in &g.forms {
                // closure and inverses
                let fi = f.inverse();
                assert!(g.forms.contains(&fi), "inverse escapes for {d}");
                assert_eq!(f.compose(&fi), id, "f * f^-1 != id for {d}");
                for h in &g.forms {
                    let fh = f.compose(h);
                    assert!(g.forms.contains(&fh), "composition escapes for {d}");
                    assert_eq!(fh, h.compose(f), "commutativity for {d}");
                }
            }
        }
    }

    #[test]
    fn composition_associative_spot() {
        let g = form_class_group(-47).unwrap(); // class number 5
        assert_eq!(g.order(), 5);
        for f1 in &g.forms {
            for f2 in &g.forms {
                for f3 in &g.forms {
                    assert_eq!(
                        f1.compose(f2).compose(f3),
                        f1.compose(&f2.compose(f3))
                    );
                }
            }
        }
    }

    #[test]
    fn hminus_small_values() {
        assert_eq!(relative_class_number(3).unwrap(), BigInt::one());
        assert_eq!(relative_class_number(5).unwrap(), BigInt::one());
        assert_eq!(relative_class_number(23).unwrap(), BigInt::from(3));
        assert_eq!(relative_class_number(37).unwrap(), BigInt::from(37));
    }

    #[test]
    fn hminus_routes_agree() {
        for l in [3u64, 7, 11, 23, 29] {
            assert_eq!(
                relative_class_number(l).unwrap(),
                relative_class_number_oracle(l).unwrap(),
                "l = {l}"
            );
        }
    }

    #[test]
    fn b1_routes_agree_per_character() {
        for l in [7u64, 13] {
            let phi = cyclotomic_polynomial(l - 1);
            for chi in characters_mod(l) {
                assert_eq!(b1_direct(&chi, &phi), b1_generator_route(&chi, &phi));
            }
        }
    }

    #[test]
    fn hminus_rejects_out_of_range() {
        assert!(relative_class_number(2).is_err());
        assert!(relative_class_number(4).is_err());
        assert!(relative_class_number(101).is_err());
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[2], BigRational::new(BigInt::one(), BigInt::from(6)));
        assert_eq!(b[4], BigRational::new(BigInt::from(-1), BigInt::from(30)));
        assert_eq!(b[12], BigRational::new(BigInt::from(-691), BigInt::from(2730)));
        assert!(b[3].is_zero() && b[5].is_zero());
    }

    #[test]
    fn irregular_prime_table() {
        assert_eq!(irregular_primes(31).unwrap(), Vec::<u64>::new());
        assert_eq!(irregular_primes(40).unwrap(), vec![37]);
    }

    #[test]
    fn minus_divisibility_small() {
        assert!(minus_divisibility_check(23).unwrap()); // regular, vacuous
        assert!(minus_divisibility_check(37).unwrap()); // 37 | 37
    }
}
