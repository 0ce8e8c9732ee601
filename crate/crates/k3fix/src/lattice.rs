//! Even lattices presented by integer Gram matrices.
//!
//! Provides the named lattices that show up in invariant-lattice bookkeeping
//! for K3 automorphisms (U, U(m), the negative-definite root lattices A/D/E,
//! and the determinant-7 lattice K7), direct sums, and exact invariants:
//! determinant by fraction-free integer elimination, signature by symmetric
//! congruence diagonalization over the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::euler_phi;
use crate::{Error, Rational, Result};

/// Rank of the second integral cohomology of a K3 surface.
pub const K3_H2_RANK: usize = 22;

/// Even lattice given by a symmetric integer Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<BigInt>>,
    name: Option<String>,
}

impl Lattice {
    /// Builds a lattice, checking symmetry and evenness of the diagonal.
    pub fn new(gram: Vec<Vec<i64>>, name: Option<&str>) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::InvalidLattice("Gram matrix must be square".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!(
                        "Gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
            if gram[i][i] % 2 != 0 {
                return Err(Error::InvalidLattice(format!(
                    "diagonal entry {} at ({i},{i}) is odd; lattice must be even",
                    gram[i][i]
                )));
            }
        }
        Ok(Lattice {
            gram: gram
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
            name: name.map(str::to_owned),
        })
    }

    /// The rank-0 lattice, the identity for direct sums.
    pub fn empty() -> Self {
        Lattice { gram: vec![], name: None }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Orthogonal direct sum: block-diagonal Gram matrix.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.rank();
        let m = other.rank();
        let mut gram = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                gram[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        let name = if m == 0 {
            self.name.clone()
        } else if n == 0 {
            other.name.clone()
        } else {
            match (self.name(), other.name()) {
                (Some(a), Some(b)) => Some(format!("{a} + {b}")),
                _ => None,
            }
        };
        Lattice { gram, name }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.rank();
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.gram.clone();
        let mut denom = BigInt::one();
        let mut sign = 1i32;
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &denom;
                }
            }
            denom = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Signature by exact symmetric congruence diagonalization.
    ///
    /// Returns (positive, negative, zero) pivot counts; Sylvester's law of
    /// inertia makes the counts independent of the elimination order.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut m: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|e| Rational::from_integer(e.clone())).collect())
            .collect();
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        let mut k = 0;
        while k < n {
            if m[k][k].is_zero() {
                if let Some(r) = (k + 1..n).find(|&r| !m[r][r].is_zero()) {
                    m.swap(k, r);
                    for row in m.iter_mut() {
                        row.swap(k, r);
                    }
                } else if let Some((r, c)) = (k..n)
                    .flat_map(|r| (r + 1..n).map(move |c| (r, c)))
                    .find(|&(r, c)| !m[r][c].is_zero())
                {
                    // No nonzero diagonal left: fold column c into row/col r,
                    // giving diagonal entry 2*m[r][c].
                    for j in 0..n {
                        let t = m[c][j].clone();
                        m[r][j] += t;
                    }
                    for row in m.iter_mut() {
                        let t = row[c].clone();
                        row[r] += t;
                    }
                    if r != k {
                        m.swap(k, r);
                        for row in m.iter_mut() {
                            row.swap(k, r);
                        }
                    }
                } else {
                    zero += n - k;
                    break;
                }
            }
            let pivot = m[k][k].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let factor = &m[i][k] / &pivot;
                for j in 0..n {
                    let t = &factor * &m[k][j];
                    m[i][j] -= t;
                }
                for row in m.iter_mut() {
                    let t = &factor * &row[k];
                    row[i] -= t;
                }
            }
            k += 1;
        }
        (pos, neg, zero)
    }

    pub fn is_even(&self) -> bool {
        // enforced at construction; direct sums preserve it
        (0..self.rank()).all(|i| (&self.gram[i][i] % 2i32).is_zero())
    }

    /// Full invariant record.
    pub fn invariants(&self) -> LatticeInvariants {
        let determinant = self.determinant();
        let (pos, neg, zero) = self.inertia();
        LatticeInvariants {
            rank: self.rank(),
            is_unimodular: determinant.abs().is_one(),
            is_degenerate: determinant.is_zero(),
            determinant,
            signature: (pos, neg),
            null_rank: zero,
            is_even: self.is_even(),
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "<rank-{} lattice>", self.rank()),
        }
    }
}

/// Invariants quoted alongside a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub determinant: BigInt,
    /// (positive, negative) inertia over the nondegenerate part.
    pub signature: (usize, usize),
    /// Dimension of the radical; nonzero exactly when the form degenerates.
    pub null_rank: usize,
    pub is_even: bool,
    pub is_unimodular: bool,
    pub is_degenerate: bool,
}

/// Names accepted by [`named_lattice`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeName {
    /// Even hyperbolic plane.
    U,
    /// Hyperbolic plane with the form multiplied by m.
    UScaled(i64),
    /// Negative-definite root lattice A_m.
    A(usize),
    /// Negative-definite root lattice D_n.
    D(usize),
    /// Negative-definite root lattice E_l, l in {6, 7, 8}.
    E(usize),
    /// Even negative-definite rank-2 lattice of determinant 7.
    K7,
}

impl FromStr for LatticeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || Error::UnknownLattice(s.to_string());
        if s == "U" {
            return Ok(LatticeName::U);
        }
        if s == "K7" {
            return Ok(LatticeName::K7);
        }
        if let Some(inner) = s.strip_prefix("U(").and_then(|r| r.strip_suffix(')')) {
            let m: i64 = inner.trim().parse().map_err(|_| unknown())?;
            return Ok(LatticeName::UScaled(m));
        }
        if let Some(rest) = s.strip_prefix('A') {
            let m: usize = rest.trim_start_matches('_').parse().map_err(|_| unknown())?;
            return Ok(LatticeName::A(m));
        }
        if let Some(rest) = s.strip_prefix('D') {
            let n: usize = rest.trim_start_matches('_').parse().map_err(|_| unknown())?;
            return Ok(LatticeName::D(n));
        }
        if let Some(rest) = s.strip_prefix('E') {
            let l: usize = rest.trim_start_matches('_').parse().map_err(|_| unknown())?;
            return Ok(LatticeName::E(l));
        }
        Err(unknown())
    }
}

/// Standard Gram matrix for a named lattice.
///
/// Root lattices use the negatives of the usual Cartan matrices, so they are
/// negative definite.
pub fn named_lattice(name: &LatticeName) -> Result<Lattice> {
    match *name {
        LatticeName::U => Lattice::new(vec![vec![0, 1], vec![1, 0]], Some("U")),
        LatticeName::UScaled(m) => {
            if m == 0 {
                return Err(Error::UnknownLattice("U(0)".into()));
            }
            Lattice::new(vec![vec![0, m], vec![m, 0]], Some(&format!("U({m})")))
        }
        LatticeName::K7 => Lattice::new(vec![vec![-4, 1], vec![1, -2]], Some("K7")),
        LatticeName::A(m) => {
            if m == 0 {
                return Err(Error::UnknownLattice("A0".into()));
            }
            Ok(neg_cartan_chain(m, &[], &format!("A{m}")))
        }
        LatticeName::D(n) => {
            if n < 4 {
                return Err(Error::UnknownLattice(format!("D{n}")));
            }
            // chain 0-1-...-(n-2), with node n-1 attached to node n-3
            Ok(neg_cartan_chain(n, &[(n - 1, n - 3)], &format!("D{n}")))
        }
        LatticeName::E(l) => {
            if !(6..=8).contains(&l) {
                return Err(Error::UnknownLattice(format!("E{l}")));
            }
            // chain 0-1-...-(l-2), with node l-1 attached to node 2
            Ok(neg_cartan_chain(l, &[(l - 1, 2)], &format!("E{l}")))
        }
    }
}

/// Negated simply-laced Cartan matrix: -2 on the diagonal, +1 on the chain
/// 0-1-...-(k-2) plus the listed extra edges.
fn neg_cartan_chain(k: usize, extra_edges: &[(usize, usize)], name: &str) -> Lattice {
    let mut gram = vec![vec![0i64; k]; k];
    for i in 0..k {
        gram[i][i] = -2;
    }
    let chain_len = if extra_edges.is_empty() { k } else { k - 1 };
    for i in 0..chain_len.saturating_sub(1) {
        gram[i][i + 1] = 1;
        gram[i + 1][i] = 1;
    }
    for &(a, b) in extra_edges {
        gram[a][b] = 1;
        gram[b][a] = 1;
    }
    Lattice::new(gram, Some(name)).expect("root lattice Gram matrices are symmetric and even")
}

/// Parses a direct-sum expression such as `U+E8+A6` or `U(7) ⊕ K7`.
pub fn parse_direct_sum(expr: &str) -> Result<Lattice> {
    let mut acc = Lattice::empty();
    let mut seen = false;
    for part in expr.split(['+', '⊕']) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let lattice = named_lattice(&part.parse()?)?;
        acc = if seen { acc.direct_sum(&lattice) } else { lattice };
        seen = true;
    }
    if !seen {
        return Err(Error::UnknownLattice(expr.to_string()));
    }
    Ok(acc)
}

/// Rank data for an order-I non-symplectic action on the 22-dimensional
/// second cohomology of a K3 surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankScenario {
    pub order: u32,
    /// Rank of the invariant sublattice of the Neron-Severi lattice.
    pub invariant_rank: usize,
}

impl RankScenario {
    pub fn new(order: u32, invariant_rank: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        if invariant_rank > K3_H2_RANK {
            return Err(Error::InfeasibleRanks(format!(
                "invariant rank {invariant_rank} exceeds {K3_H2_RANK}"
            )));
        }
        Ok(RankScenario { order, invariant_rank })
    }
}

/// Outcome of squeezing the transcendental/Neron-Severi rank split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankDeduction {
    /// The inequalities pin a unique split.
    Unique {
        rank_t: usize,
        rank_s: usize,
        /// True exactly when rank_s equals the invariant rank, forcing the
        /// action on the Neron-Severi lattice to be trivial.
        action_on_s_forced_trivial: bool,
    },
    /// Several splits remain feasible.
    Underdetermined { rank_t_candidates: Vec<usize> },
}

/// Deduces the transcendental rank from the invariant rank.
///
/// The transcendental eigenvalues are the primitive order-th roots of unity,
/// each with one common multiplicity, so rank_t is a multiple of phi(order);
/// conjugate eigenvalues pair off, keeping rank_t even. rank_s >=
/// invariant_rank and rank_s + rank_t = 22 bound it from above.
pub fn deduce_ranks(scenario: &RankScenario) -> Result<RankDeduction> {
    let phi = euler_phi(scenario.order);
    let step = if phi % 2 == 0 { phi } else { 2 * phi };
    let max_t = K3_H2_RANK - scenario.invariant_rank;
    let candidates: Vec<usize> = (1..)
        .map(|q| q * step)
        .take_while(|&t| t <= max_t)
        .collect();
    match candidates.as_slice() {
        [] => Err(Error::InfeasibleRanks(format!(
            "no multiple of phi({}) = {phi} fits below {max_t}",
            scenario.order
        ))),
        [rank_t] => {
            let rank_s = K3_H2_RANK - rank_t;
            Ok(RankDeduction::Unique {
                rank_t: *rank_t,
                rank_s,
                action_on_s_forced_trivial: rank_s == scenario.invariant_rank,
            })
        }
        _ => Ok(RankDeduction::Underdetermined {
            rank_t_candidates: candidates,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(name: &str) -> Lattice {
        named_lattice(&name.parse().unwrap()).unwrap()
    }

    #[test]
    fn named_gram_matrices() {
        assert_eq!(
            lat("K7").gram(),
            &[vec![BigInt::from(-4), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(-2)]]
        );
        assert_eq!(
            lat("U").gram(),
            &[vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]]
        );
        assert_eq!(
            lat("U(7)").gram(),
            &[vec![BigInt::from(0), BigInt::from(7)], vec![BigInt::from(7), BigInt::from(0)]]
        );
    }

    #[test]
    fn unknown_names_rejected() {
        assert!(matches!("B3".parse::<LatticeName>(), Err(Error::UnknownLattice(_))));
        assert!(matches!(named_lattice(&LatticeName::E(9)), Err(Error::UnknownLattice(_))));
        assert!(matches!(named_lattice(&LatticeName::A(0)), Err(Error::UnknownLattice(_))));
    }

    #[test]
    fn direct_sum_ranks() {
        let s = lat("U").direct_sum(&lat("E8")).direct_sum(&lat("A6"));
        assert_eq!(s.rank(), 16);
        let t = lat("U").direct_sum(&lat("U")).direct_sum(&lat("K7"));
        assert_eq!(t.rank(), 6);
        let l = lat("E6");
        assert_eq!(l.direct_sum(&Lattice::empty()), l);
    }

    #[test]
    fn determinants() {
        assert_eq!(lat("K7").determinant(), BigInt::from(7));
        assert_eq!(lat("U").determinant(), BigInt::from(-1));
        assert_eq!(lat("U(7)").determinant(), BigInt::from(-49));
        assert_eq!(lat("E8").determinant(), BigInt::from(1));
        assert_eq!(lat("E7").determinant(), BigInt::from(-2));
        assert_eq!(lat("E6").determinant(), BigInt::from(3));
        // det(A_m) = (-1)^m (m+1) for the negated Cartan matrix
        for m in 1..=8usize {
            let expected = if m % 2 == 0 { m as i64 + 1 } else { -(m as i64 + 1) };
            assert_eq!(lat(&format!("A{m}")).determinant(), BigInt::from(expected));
        }
        assert_eq!(lat("D4").determinant(), BigInt::from(4));
    }

    #[test]
    fn transcendental_lattice_of_the_special_order_7_surface() {
        let t = lat("U").direct_sum(&lat("U")).direct_sum(&lat("K7"));
        let inv = t.invariants();
        assert_eq!(inv.determinant, BigInt::from(7));
        assert!(!inv.is_unimodular);
        assert!(inv.is_even);
        assert_eq!(inv.signature, (2, 4));
    }

    #[test]
    fn signatures() {
        assert_eq!(lat("U").inertia(), (1, 1, 0));
        assert_eq!(lat("E8").inertia(), (0, 8, 0));
        assert_eq!(lat("A6").inertia(), (0, 6, 0));
        let s = lat("U").direct_sum(&lat("E8")).direct_sum(&lat("A6"));
        assert_eq!(s.inertia(), (1, 15, 0));
    }

    #[test]
    fn degenerate_form_reported() {
        let l = Lattice::new(vec![vec![0, 0], vec![0, -2]], None).unwrap();
        let inv = l.invariants();
        assert!(inv.is_degenerate);
        assert_eq!(inv.signature, (0, 1));
        assert_eq!(inv.null_rank, 1);
    }

    #[test]
    fn odd_diagonal_rejected() {
        assert!(Lattice::new(vec![vec![1]], None).is_err());
        assert!(Lattice::new(vec![vec![0, 1], vec![2, 0]], None).is_err());
    }

    #[test]
    fn all_named_lattices_even() {
        for name in ["U", "U(3)", "A1", "A7", "D4", "D5", "E6", "E7", "E8", "K7"] {
            assert!(lat(name).is_even(), "{name} must be even");
        }
    }

    #[test]
    fn parse_sum_expression() {
        let l = parse_direct_sum("U + E8 ⊕ A6").unwrap();
        assert_eq!(l.rank(), 16);
        assert!(parse_direct_sum("").is_err());
        assert!(parse_direct_sum("U+Q5").is_err());
    }

    #[test]
    fn rank_deduction_order_7() {
        let d = deduce_ranks(&RankScenario::new(7, 16).unwrap()).unwrap();
        assert_eq!(
            d,
            RankDeduction::Unique { rank_t: 6, rank_s: 16, action_on_s_forced_trivial: true }
        );
    }

    #[test]
    fn rank_deduction_order_21() {
        let d = deduce_ranks(&RankScenario::new(21, 10).unwrap()).unwrap();
        assert_eq!(
            d,
            RankDeduction::Unique { rank_t: 12, rank_s: 10, action_on_s_forced_trivial: true }
        );
    }

    #[test]
    fn rank_deduction_underdetermined_involution() {
        let d = deduce_ranks(&RankScenario::new(2, 0).unwrap()).unwrap();
        let expected: Vec<usize> = (1..=11).map(|q| 2 * q).collect();
        assert_eq!(d, RankDeduction::Underdetermined { rank_t_candidates: expected });
    }

    #[test]
    fn rank_deduction_infeasible() {
        let err = deduce_ranks(&RankScenario::new(7, 20).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InfeasibleRanks(_)));
    }
}
