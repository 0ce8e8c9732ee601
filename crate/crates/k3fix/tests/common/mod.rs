//! Shared oracle helpers for the integration tests.
//!
//! Everything here is deliberately independent of the library's exact
//! arithmetic: complex numbers are plain f64 pairs, the Moebius function is
//! computed by trial-division factorization, determinants by cofactor
//! expansion.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;

use k3fix::enumerate::{enumerate_configs, Scenario};
use k3fix::report::ScenarioFile;
use k3fix::Error;

/// Loads one of the scenarios shipped with the CLI, resolving curve
/// containment the same way the binary does.
pub fn shipped_scenario(name: &str) -> Scenario {
    fn text(name: &str) -> &'static str {
        match name {
            "order7" => include_str!("../../scenarios/order7.json"),
            "order21" => include_str!("../../scenarios/order21.json"),
            "order42" => include_str!("../../scenarios/order42.json"),
            other => panic!("not a shipped scenario: {other}"),
        }
    }
    fn resolve(name: &str) -> Result<Vec<u32>, Error> {
        let scenario = ScenarioFile::from_json(text(name))?.into_scenario(&resolve)?;
        let solutions = enumerate_configs(&scenario, false)?;
        let mut sets: Vec<Vec<u32>> = solutions
            .configs()
            .iter()
            .map(|c| c.curves().genus_list().to_vec())
            .collect();
        sets.dedup();
        assert_eq!(sets.len(), 1, "containment resolution needs a unique curve multiset");
        Ok(sets.remove(0))
    }
    ScenarioFile::from_json(text(name))
        .unwrap()
        .into_scenario(&resolve)
        .unwrap()
}

/// Minimal complex arithmetic for the floating-point embedding oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub fn new(re: f64, im: f64) -> Self {
        Cx { re, im }
    }

    pub fn one() -> Self {
        Cx::new(1.0, 0.0)
    }

    /// exp(2 pi i k / n)
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        Cx::new(angle.cos(), angle.sin())
    }

    pub fn add(self, other: Cx) -> Cx {
        Cx::new(self.re + other.re, self.im + other.im)
    }

    pub fn sub(self, other: Cx) -> Cx {
        Cx::new(self.re - other.re, self.im - other.im)
    }

    pub fn mul(self, other: Cx) -> Cx {
        Cx::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }

    pub fn scale(self, s: f64) -> Cx {
        Cx::new(self.re * s, self.im * s)
    }

    pub fn inv(self) -> Cx {
        let d = self.re * self.re + self.im * self.im;
        Cx::new(self.re / d, -self.im / d)
    }

    pub fn div(self, other: Cx) -> Cx {
        self.mul(other.inv())
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Agreement within `tol`, measured relative to the larger magnitude once it
/// exceeds one (products of height-1000 operands leave absolute comparison
/// meaningless at f64 precision).
pub fn approx_eq(a: (f64, f64), b: Cx, tol: f64) -> bool {
    let a = Cx::new(a.0, a.1);
    let scale = 1.0_f64.max(a.abs()).max(b.abs());
    a.sub(b).abs() <= tol * scale
}

/// Moebius function by trial-division factorization.
pub fn moebius(n: u32) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut factors = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0; // squareful
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient by direct counting.
pub fn phi_by_counting(n: u32) -> usize {
    (1..=n).filter(|k| gcd(*k, n) == 1).count()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion; fine for rank <= 8 oracles.
pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = BigInt::zero();
    for (k, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != k)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = entry * cofactor_det(&minor);
        if k % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// Tiny deterministic xorshift generator for sample-based suites.
pub struct XorShift {
    state: u64,
}

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift { state: seed.max(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform-ish value in [lo, hi].
    pub fn in_range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}
