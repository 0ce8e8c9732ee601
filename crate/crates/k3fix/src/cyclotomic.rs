//! Exact arithmetic in the cyclotomic fields Q(zeta_n).
//!
//! Elements are stored by their unique coordinates in the power basis
//! 1, zeta, ..., zeta^(phi(n)-1) modulo the n-th cyclotomic polynomial, so
//! zero-testing and the extraction of rational linear systems are canonical.
//! All coefficients are arbitrary-precision rationals; nothing here rounds.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{rat, Error, Rational, Result};

/// Euler totient of `n`, the degree of the n-th cyclotomic polynomial.
pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Polynomial with integer coefficients, stored low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from ascending coefficients, trimming leading zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x^n - 1.
    pub fn x_pow_minus_one(n: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); n as usize + 1];
        coeffs[0] = -BigInt::one();
        coeffs[n as usize] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly { coeffs: vec![] };
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Division by a monic divisor; the remainder is returned alongside.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let d = divisor.degree().expect("division by zero polynomial");
        assert!(
            divisor.coeffs[d].is_one(),
            "div_rem_monic requires a monic divisor"
        );
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (IntPoly { coeffs: vec![] }, IntPoly::new(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let lead = std::mem::take(&mut rem[k]);
            if lead.is_zero() {
                continue;
            }
            for i in 0..d {
                rem[k - d + i] -= &lead * &divisor.coeffs[i];
            }
            quot[k - d] = lead;
        }
        rem.truncate(d);
        (IntPoly::new(quot), IntPoly::new(rem))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cyclotomic_arc(n: u32) -> Arc<IntPoly> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        IntPoly::from_i64(&[-1, 1])
    } else {
        // Phi_n = (x^n - 1) / prod of Phi_d over proper divisors d of n.
        let mut acc = IntPoly::x_pow_minus_one(n);
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let (quot, rem) = acc.div_rem_monic(&cyclotomic_arc(d));
            assert!(rem.is_zero(), "Phi_{d} must divide x^{n} - 1 exactly");
            acc = quot;
        }
        acc
    };
    let arc = Arc::new(poly);
    cyclotomic_cache()
        .lock()
        .unwrap()
        .insert(n, arc.clone());
    arc
}

/// The n-th cyclotomic polynomial Phi_n, by recursive exact division.
pub fn cyclotomic_polynomial(n: u32) -> IntPoly {
    (*cyclotomic_arc(n)).clone()
}

// ---------------------------------------------------------------------------
// rational polynomial helpers (private): remainder and extended euclid
// ---------------------------------------------------------------------------

fn rp_trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn rp_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rp_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rational::zero());
    }
    for (o, y) in out.iter_mut().zip(b.iter()) {
        *o -= y;
    }
    rp_trim(&mut out);
    out
}

fn rp_div_rem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    rp_trim(&mut rem);
    let dd = den.len() - 1;
    let lead = &den[dd];
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = std::mem::replace(&mut rem[k], Rational::zero());
        if c.is_zero() {
            continue;
        }
        let f = c / lead;
        for i in 0..dd {
            let t = &f * &den[i];
            rem[k - dd + i] -= t;
        }
        quot[k - dd] = f;
    }
    rem.truncate(dd);
    rp_trim(&mut rem);
    (quot, rem)
}

/// Remainder of `poly` modulo Phi_n, padded to length phi(n).
fn reduce_mod_cyclotomic(mut poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = euler_phi(n);
    rp_trim(&mut poly);
    if poly.len() > phi {
        let modulus: Vec<Rational> = cyclotomic_arc(n)
            .coeffs()
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let (_, rem) = rp_div_rem(&poly, &modulus);
        poly = rem;
    }
    poly.resize(phi, Rational::zero());
    poly
}

/// Element of Q(zeta_n) in the power basis modulo Phi_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicNumber {
    conductor: u32,
    coords: Vec<Rational>,
}

impl CyclotomicNumber {
    /// Wraps a coordinate vector of length phi(conductor).
    pub fn from_coords(conductor: u32, coords: Vec<Rational>) -> Result<Self> {
        let phi = euler_phi(conductor);
        if conductor < 1 || coords.len() != phi {
            return Err(Error::BadCoordinates {
                conductor,
                expected: phi,
                got: coords.len(),
            });
        }
        Ok(CyclotomicNumber { conductor, coords })
    }

    pub fn zero(conductor: u32) -> Self {
        CyclotomicNumber {
            conductor,
            coords: vec![Rational::zero(); euler_phi(conductor)],
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(conductor, Rational::one())
    }

    pub fn from_rational(conductor: u32, value: Rational) -> Self {
        let mut coords = vec![Rational::zero(); euler_phi(conductor)];
        coords[0] = value;
        CyclotomicNumber { conductor, coords }
    }

    pub fn from_int(conductor: u32, value: i64) -> Self {
        Self::from_rational(conductor, rat(value))
    }

    /// zeta_n^k reduced into the power basis; `k` may be negative.
    pub fn root_power(conductor: u32, k: i64) -> Self {
        assert!(conductor >= 1, "root_power needs a positive conductor");
        let n = conductor as i64;
        let e = k.rem_euclid(n) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        CyclotomicNumber {
            conductor,
            coords: reduce_mod_cyclotomic(poly, conductor),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// The phi(n) coordinates in the basis 1, zeta, ..., zeta^(phi(n)-1).
    ///
    /// The element is zero iff every coordinate is zero.
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Some(r) iff the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn assert_same_conductor(&self, other: &Self) {
        assert_eq!(
            self.conductor, other.conductor,
            "cyclotomic arithmetic requires equal conductors ({} vs {})",
            self.conductor, other.conductor
        );
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, factor: &Rational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus: Vec<Rational> = cyclotomic_arc(self.conductor)
            .coeffs()
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let mut a = self.coords.clone();
        rp_trim(&mut a);
        // Invariants: r0 = s0*a mod Phi, r1 = s1*a mod Phi.
        let mut r0 = modulus;
        let mut r1 = a;
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = rp_div_rem(&r0, &r1);
            let s = rp_sub(&s0, &rp_mul(&q, &s1));
            r0 = r1;
            s0 = s1;
            r1 = r;
            s1 = s;
        }
        // r0 is a nonzero constant: Phi_n is irreducible over Q.
        assert_eq!(r0.len(), 1, "cyclotomic polynomial must be coprime to any nonzero element");
        let inv_gcd = Rational::one() / &r0[0];
        let inverse: Vec<Rational> = s0.iter().map(|c| c * &inv_gcd).collect();
        Ok(CyclotomicNumber {
            conductor: self.conductor,
            coords: reduce_mod_cyclotomic(inverse, self.conductor),
        })
    }

    /// Image under the Galois automorphism zeta -> zeta^k, gcd(k, n) = 1.
    pub fn galois(&self, k: u32) -> Self {
        assert_eq!(
            (k as i64).gcd(&(self.conductor as i64)),
            1,
            "galois exponent must be coprime to the conductor"
        );
        let n = self.conductor as usize;
        let mut raw = vec![Rational::zero(); n];
        for (e, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                raw[e * k as usize % n] += c;
            }
        }
        CyclotomicNumber {
            conductor: self.conductor,
            coords: reduce_mod_cyclotomic(raw, self.conductor),
        }
    }

    /// Numeric image under zeta_n -> exp(2 pi i / n), as (re, im).
    ///
    /// Test-oracle convenience only; exact results never depend on it.
    pub fn embed(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, c) in self.coords.iter().enumerate() {
            let c = c.to_f64().expect("rational out of f64 range");
            let angle = 2.0 * std::f64::consts::PI * e as f64 / n;
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.assert_same_conductor(rhs);
        CyclotomicNumber {
            conductor: self.conductor,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.assert_same_conductor(rhs);
        CyclotomicNumber {
            conductor: self.conductor,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.assert_same_conductor(rhs);
        let product = rp_mul(&self.coords, &rhs.coords);
        CyclotomicNumber {
            conductor: self.conductor,
            coords: reduce_mod_cyclotomic(product, self.conductor),
        }
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if e == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if e == 1 {
                    write!(f, "z{}", self.conductor)?;
                } else {
                    write!(f, "z{}^{e}", self.conductor)?;
                }
            }
        }
        Ok(())
    }
}

/// Sum of the primitive n-th roots of unity, computed in the field.
///
/// The result is always a rational integer (it equals the Moebius
/// function of n).
pub fn primitive_trace(n: u32) -> i64 {
    assert!(n >= 1, "primitive_trace needs n >= 1");
    let mut acc = CyclotomicNumber::zero(n);
    for k in 1..=n {
        if k.gcd(&n) == 1 {
            acc = &acc + &CyclotomicNumber::root_power(n, k as i64);
        }
    }
    let value = acc
        .as_rational()
        .expect("sum of all primitive roots must be rational");
    assert!(value.is_integer(), "primitive root sum must be an integer");
    value.to_integer().to_i64().expect("trace fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn coords_i64(v: &CyclotomicNumber) -> Vec<i64> {
        v.coords()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                c.to_integer().to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn cyclotomic_poly_small() {
        assert_eq!(cyclotomic_polynomial(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(6), IntPoly::from_i64(&[1, -1, 1]));
        // prime case: all-ones of degree 6
        assert_eq!(
            cyclotomic_polynomial(7),
            IntPoly::from_i64(&[1, 1, 1, 1, 1, 1, 1])
        );
    }

    #[test]
    fn cyclotomic_poly_21_by_product_oracle() {
        let phi21 = cyclotomic_polynomial(21);
        assert_eq!(phi21.degree(), Some(12));
        // Phi_21 * Phi_7 * Phi_3 * Phi_1 = x^21 - 1
        let product = phi21
            .mul(&cyclotomic_polynomial(7))
            .mul(&cyclotomic_polynomial(3))
            .mul(&cyclotomic_polynomial(1));
        assert_eq!(product, IntPoly::x_pow_minus_one(21));
        assert_eq!(
            phi21,
            IntPoly::from_i64(&[1, -1, 0, 1, -1, 0, 1, 0, -1, 1, 0, -1, 1])
        );
    }

    #[test]
    fn root_power_identity_and_wraparound() {
        assert_eq!(
            CyclotomicNumber::root_power(7, 0),
            CyclotomicNumber::one(7)
        );
        // zeta_7^6 = -1 - z - z^2 - z^3 - z^4 - z^5, forced by Phi_7 = 0
        assert_eq!(
            coords_i64(&CyclotomicNumber::root_power(7, 6)),
            vec![-1, -1, -1, -1, -1, -1]
        );
        assert_eq!(
            CyclotomicNumber::root_power(21, 22),
            CyclotomicNumber::root_power(21, 1)
        );
        assert_eq!(
            CyclotomicNumber::root_power(7, -1),
            CyclotomicNumber::root_power(7, 6)
        );
    }

    #[test]
    fn field_inverse_axiom() {
        let one = CyclotomicNumber::one(7);
        let a = &one - &CyclotomicNumber::root_power(7, 1);
        let inv = a.invert().unwrap();
        assert_eq!(&a * &inv, one);
    }

    #[test]
    fn exponents_add_mod_conductor() {
        let prod = &CyclotomicNumber::root_power(7, 3) * &CyclotomicNumber::root_power(7, 5);
        assert_eq!(prod, CyclotomicNumber::root_power(7, 1));
    }

    #[test]
    fn invert_zero_fails() {
        assert_eq!(
            CyclotomicNumber::zero(12).invert(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    #[should_panic(expected = "equal conductors")]
    fn conductor_mismatch_panics() {
        let _ = &CyclotomicNumber::one(7) + &CyclotomicNumber::one(21);
    }

    #[test]
    fn rational_coordinate_examples() {
        assert!(CyclotomicNumber::zero(7)
            .coords()
            .iter()
            .all(Zero::is_zero));
        assert_eq!(
            coords_i64(&CyclotomicNumber::root_power(7, 1)),
            vec![0, 1, 0, 0, 0, 0]
        );
        let v = &CyclotomicNumber::one(7) + &CyclotomicNumber::root_power(7, 6);
        assert_eq!(coords_i64(&v), vec![0, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn primitive_trace_examples() {
        assert_eq!(primitive_trace(21), 1);
        assert_eq!(primitive_trace(42), -1);
        assert_eq!(primitive_trace(1), 1);
        assert_eq!(primitive_trace(7), -1);
    }

    #[test]
    fn bad_coordinate_length_rejected() {
        let err = CyclotomicNumber::from_coords(7, vec![Rational::zero(); 3]).unwrap_err();
        assert_eq!(
            err,
            Error::BadCoordinates { conductor: 7, expected: 6, got: 3 }
        );
    }

    #[test]
    fn galois_permutes_roots() {
        let z = CyclotomicNumber::root_power(21, 2);
        assert_eq!(z.galois(5), CyclotomicNumber::root_power(21, 10));
    }

    #[test]
    fn scale_by_fraction() {
        let v = CyclotomicNumber::from_int(7, 3).scale(&ratio(1, 2));
        assert_eq!(v.as_rational(), Some(ratio(3, 2)));
    }
}
