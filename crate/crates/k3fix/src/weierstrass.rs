//! Diagonal automorphisms on monomial Weierstrass models.
//!
//! A model y^2 = x^3 + sum of a * x^alpha * t^beta together with a diagonal
//! action (x, y, t) -> (zeta^wx x, zeta^wy y, zeta^wt t) is checked
//! symbolically: the equation is preserved up to overall scaling exactly
//! when every monomial, including y^2 and x^3, picks up the same weight
//! mod n. The action on the holomorphic 2-form is read off in the affine
//! chart from omega ~ dx ^ dt / y, giving weight wx + wt - wy; a unit weight
//! mod n makes the action non-symplectic of full order n.

use std::fmt;

use num_integer::Integer;

use crate::{Error, Result};

/// One monomial c * x^a * y^b * t^c in the model equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: i64,
    pub x: u32,
    pub y: u32,
    pub t: u32,
}

impl Monomial {
    pub fn label(&self) -> String {
        let mut s = String::new();
        if self.coeff != 1 || (self.x == 0 && self.y == 0 && self.t == 0) {
            s.push_str(&self.coeff.to_string());
        }
        for (var, e) in [("x", self.x), ("y", self.y), ("t", self.t)] {
            match e {
                0 => {}
                1 => s.push_str(var),
                _ => s.push_str(&format!("{var}^{e}")),
            }
        }
        s
    }
}

/// Weierstrass model y^2 = x^3 + (further monomials), given by the
/// right-hand-side monomial list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialWeierstrass {
    rhs: Vec<Monomial>,
}

impl MonomialWeierstrass {
    /// The right side must contain the monomial x^3.
    pub fn new(rhs: Vec<Monomial>) -> Result<Self> {
        let has_cube = rhs
            .iter()
            .any(|m| m.coeff != 0 && m.x == 3 && m.y == 0 && m.t == 0);
        if !has_cube {
            return Err(Error::InvalidModel(
                "right-hand side must contain the monomial x^3".into(),
            ));
        }
        if rhs.iter().any(|m| m.coeff == 0) {
            return Err(Error::InvalidModel("zero coefficients are not allowed".into()));
        }
        Ok(MonomialWeierstrass { rhs })
    }

    pub fn rhs(&self) -> &[Monomial] {
        &self.rhs
    }
}

impl fmt::Display for MonomialWeierstrass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = ")?;
        for (k, m) in self.rhs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", m.label())?;
        }
        Ok(())
    }
}

/// Diagonal action (x, y, t) -> (zeta^wx x, zeta^wy y, zeta^wt t) of order
/// dividing n, weights stored reduced mod n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalAction {
    order: u32,
    weights: [u32; 3],
}

impl DiagonalAction {
    pub fn new(order: u32, weights: [i64; 3]) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(order));
        }
        let n = order as i64;
        Ok(DiagonalAction {
            order,
            weights: [
                weights[0].rem_euclid(n) as u32,
                weights[1].rem_euclid(n) as u32,
                weights[2].rem_euclid(n) as u32,
            ],
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// (wx, wy, wt) reduced mod the order.
    pub fn weights(&self) -> [u32; 3] {
        self.weights
    }

    /// The k-th power of the action.
    pub fn power(&self, k: u32) -> Self {
        let n = self.order as u64;
        let w = |v: u32| ((v as u64 * k as u64) % n) as u32;
        DiagonalAction {
            order: self.order,
            weights: [w(self.weights[0]), w(self.weights[1]), w(self.weights[2])],
        }
    }

    /// Multiplicative order of the weight vector mod n: the actual order of
    /// the diagonal map, a divisor of n.
    pub fn actual_order(&self) -> u32 {
        let g = self
            .weights
            .iter()
            .fold(self.order, |acc, &w| acc.gcd(&w));
        self.order / g
    }

    fn monomial_weight(&self, m: &Monomial) -> u32 {
        let n = self.order as u64;
        ((m.x as u64 * self.weights[0] as u64
            + m.y as u64 * self.weights[1] as u64
            + m.t as u64 * self.weights[2] as u64)
            % n) as u32
    }
}

/// Checks quasi-invariance of the model equation under the action.
///
/// Returns the common weight mod n when every monomial (y^2, x^3 and the
/// rest of the right-hand side) transforms with one weight; otherwise lists
/// each monomial's weight in the error.
pub fn check_invariance(model: &MonomialWeierstrass, action: &DiagonalAction) -> Result<u32> {
    let lhs_weight = ((2 * action.weights[1] as u64) % action.order as u64) as u32;
    let mut weights = vec![("y^2".to_string(), lhs_weight)];
    for m in model.rhs() {
        weights.push((m.label(), action.monomial_weight(m)));
    }
    if weights.iter().all(|&(_, w)| w == lhs_weight) {
        Ok(lhs_weight)
    } else {
        Err(Error::NonInvariant(weights))
    }
}

/// Weight of the action on the holomorphic 2-form, with unit test mod n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoFormWeight {
    pub weight: u32,
    /// True when the weight generates the full group of n-th roots, i.e.
    /// the action is non-symplectic of full order n.
    pub is_unit: bool,
}

impl TwoFormWeight {
    /// Weight 0 means the 2-form is preserved: symplectic or trivial action.
    pub fn is_symplectic_or_trivial(&self) -> bool {
        self.weight == 0
    }
}

/// Weight of the action on omega ~ dx ^ dt / y in the affine chart:
/// (wx + wt - wy) mod n.
pub fn two_form_weight(action: &DiagonalAction) -> TwoFormWeight {
    let n = action.order as i64;
    let [wx, wy, wt] = action.weights;
    let weight = (wx as i64 + wt as i64 - wy as i64).rem_euclid(n) as u32;
    // gcd(0, n) = n, so weight 0 is a unit only in the trivial case n = 1
    TwoFormWeight { weight, is_unit: weight.gcd(&action.order) == 1 }
}
