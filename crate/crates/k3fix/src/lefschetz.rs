//! Lefschetz fixed-point constraints for a purely non-symplectic
//! automorphism of order I on a K3 surface.
//!
//! An isolated fixed point has local eigenvalues (zeta^i, zeta^j) with
//! i + j = 1 (mod I) and contributes 1 / ((1 - zeta^i)(1 - zeta^j)) to the
//! holomorphic fixed-point formula; a fixed curve of genus g contributes
//! (1 - g) (1 + zeta) / (1 - zeta)^2 once its self-intersection is removed
//! by adjunction. Equating the sum of the local terms with the trace
//! 1 + zeta^(I-1) on the structure-sheaf cohomology and reading the identity
//! off coordinate-wise in Q(zeta_I) yields phi(I) rational linear equations
//! in the type multiplicities and the curve total sum(1 - g). Together with
//! the topological (Euler characteristic) count these are the constraints
//! the enumerator searches.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::cyclotomic::{euler_phi, primitive_trace, CyclotomicNumber};
use crate::{rat, Error, Rational, Result};

/// Local eigenvalue pair (i, j) of a fixed point, canonicalized so that
/// 0 <= i <= j < order and i + j = 1 (mod order).
///
/// The pair (0, 1) marks a point on a fixed curve; every isolated point has
/// i >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointType {
    order: u32,
    i: u32,
    j: u32,
}

impl PointType {
    pub fn new(order: u32, i: u32, j: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        let (mut i, mut j) = (i % order, j % order);
        if (i + j) % order != 1 {
            return Err(Error::InvalidPointType { order, i, j });
        }
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        Ok(PointType { order, i, j })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn eigenvalue_exponents(&self) -> (u32, u32) {
        (self.i, self.j)
    }

    /// False only for the curve-point type (0, 1).
    pub fn is_isolated(&self) -> bool {
        self.i >= 2
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// All isolated point types for the given order, in lexicographic order.
///
/// These are the pairs 2 <= i <= j <= order - 1 with i + j = 1 (mod order).
pub fn isolated_point_types(order: u32) -> Vec<PointType> {
    let mut out = Vec::new();
    for i in 2..order {
        for j in i..order {
            if (i + j) % order == 1 {
                out.push(PointType { order, i, j });
            }
        }
    }
    out
}

/// Holomorphic Lefschetz contribution of an isolated fixed point:
/// 1 / ((1 - zeta^i)(1 - zeta^j)).
pub fn point_term(t: &PointType) -> Result<CyclotomicNumber> {
    let (i, j) = t.eigenvalue_exponents();
    if !t.is_isolated() {
        return Err(Error::SingularTerm { order: t.order, i, j });
    }
    let one = CyclotomicNumber::one(t.order);
    let fi = &one - &CyclotomicNumber::root_power(t.order, i as i64);
    let fj = &one - &CyclotomicNumber::root_power(t.order, j as i64);
    (&fi * &fj).invert()
}

/// Per-unit-of-(1 - g) contribution of a fixed curve:
/// (1 + zeta) / (1 - zeta)^2.
///
/// A genus-g fixed curve on a K3 surface has self-intersection 2g - 2, which
/// folds its two-term Lefschetz contribution into (1 - g) times this value.
pub fn curve_unit_term(order: u32) -> Result<CyclotomicNumber> {
    if order < 2 {
        return Err(Error::InvalidOrder(order));
    }
    let one = CyclotomicNumber::one(order);
    let zeta = CyclotomicNumber::root_power(order, 1);
    let denom = &one - &zeta;
    let inv_sq = (&denom * &denom).invert()?;
    Ok(&(&one + &zeta) * &inv_sq)
}

/// Trace side of the holomorphic fixed-point formula: 1 + zeta^(order - 1),
/// the traces on H^0(O) and H^2(O).
///
/// H^1(X, O) vanishes on a K3 surface, so these are the only two terms.
pub fn holomorphic_lhs(order: u32) -> Result<CyclotomicNumber> {
    if order < 2 {
        return Err(Error::InvalidOrder(order));
    }
    let one = CyclotomicNumber::one(order);
    Ok(&one + &CyclotomicNumber::root_power(order, order as i64 - 1))
}

/// Trace of the action on the transcendental lattice: q times the sum of the
/// primitive order-th roots of unity.
pub fn transcendental_trace(order: u32, q: u32) -> i64 {
    q as i64 * primitive_trace(order)
}

/// Euler characteristic of the fixed locus by the topological Lefschetz
/// formula: 2 + trace on the Neron-Severi part + trace on the transcendental
/// part.
///
/// When the action on the Neron-Severi lattice is trivial, `trace_on_s` is
/// its rank.
pub fn euler_characteristic(order: u32, trace_on_s: i64, q: u32) -> i64 {
    2 + trace_on_s + transcendental_trace(order, q)
}

/// Direction of an inequality row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

/// One exact linear equality: sum of coeffs[k] * x_k = constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

/// One exact linear inequality: sum of coeffs[k] * x_k (<= or =) bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityRow {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub bound: Rational,
}

impl InequalityRow {
    pub fn is_satisfied_by(&self, values: &[Rational]) -> bool {
        let lhs: Rational = self
            .coeffs
            .iter()
            .zip(values)
            .map(|(c, v)| c * v)
            .sum();
        match self.sense {
            Sense::Le => lhs <= self.bound,
            Sense::Eq => lhs == self.bound,
        }
    }
}

/// Exact rational linear constraints over named integer unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub variables: Vec<String>,
    pub equalities: Vec<LinearRow>,
    pub inequalities: Vec<InequalityRow>,
}

impl ConstraintSystem {
    pub fn new(variables: Vec<String>) -> Self {
        ConstraintSystem { variables, equalities: vec![], inequalities: vec![] }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn push_equality(&mut self, row: LinearRow) {
        assert_eq!(row.coeffs.len(), self.num_vars(), "row width mismatch");
        self.equalities.push(row);
    }

    pub fn push_inequality(&mut self, row: InequalityRow) {
        assert_eq!(row.coeffs.len(), self.num_vars(), "row width mismatch");
        self.inequalities.push(row);
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// True iff `values` satisfies every equality and inequality exactly.
    pub fn is_satisfied_by(&self, values: &[Rational]) -> bool {
        assert_eq!(values.len(), self.num_vars());
        self.equalities.iter().all(|row| {
            let lhs: Rational = row.coeffs.iter().zip(values).map(|(c, v)| c * v).sum();
            lhs == row.constant
        }) && self.inequalities.iter().all(|row| row.is_satisfied_by(values))
    }

    /// Rank of the equality coefficient matrix, by exact elimination.
    pub fn rank(&self) -> usize {
        let homogeneous: Vec<LinearRow> = self
            .equalities
            .iter()
            .map(|r| LinearRow { coeffs: r.coeffs.clone(), constant: Rational::zero() })
            .collect();
        let order: Vec<usize> = (0..self.num_vars()).collect();
        rref(&homogeneous, &order)
            .expect("a homogeneous system is always consistent")
            .len()
    }

    /// Gaussian elimination preferring pivots on the listed columns first.
    ///
    /// Returns `None` when the equalities are inconsistent over Q.
    pub fn reduced(&self, preferred: &[usize]) -> Option<Elimination> {
        let mut order: Vec<usize> = preferred.to_vec();
        for c in 0..self.num_vars() {
            if !order.contains(&c) {
                order.push(c);
            }
        }
        let rows = rref(&self.equalities, &order)?;
        let pivots: Vec<usize> = rows.iter().map(|(p, _)| *p).collect();
        let free: Vec<usize> = (0..self.num_vars()).filter(|c| !pivots.contains(c)).collect();
        let solved = rows
            .into_iter()
            .map(|(pivot, row)| {
                let terms: Vec<(usize, Rational)> = free
                    .iter()
                    .filter(|&&c| !row.coeffs[c].is_zero())
                    .map(|&c| (c, -row.coeffs[c].clone()))
                    .collect();
                SolvedRow { variable: pivot, constant: row.constant, terms }
            })
            .collect();
        Some(Elimination { variables: self.variables.clone(), rows: solved, free })
    }

    /// Solves for exactly the named dependent variables in terms of the rest.
    ///
    /// Fails unless the dependent columns carry the full rank of the system,
    /// i.e. the remaining variables are genuinely free.
    pub fn solve_for(&self, dependent: &[&str]) -> Result<Elimination> {
        let mut dep_cols = Vec::with_capacity(dependent.len());
        for name in dependent {
            let col = self
                .variable_index(name)
                .ok_or_else(|| Error::Elimination(format!("unknown variable `{name}`")))?;
            dep_cols.push(col);
        }
        let elim = self
            .reduced(&dep_cols)
            .ok_or_else(|| Error::Elimination("inconsistent equality system".into()))?;
        if elim.rows.len() != dep_cols.len()
            || elim.rows.iter().any(|row| !dep_cols.contains(&row.variable))
        {
            return Err(Error::Elimination(format!(
                "variables {dependent:?} are not an independent dependent set (rank {})",
                elim.rows.len()
            )));
        }
        Ok(elim)
    }
}

/// One solved row: variable = constant + sum of coeff * free variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedRow {
    pub variable: usize,
    pub constant: Rational,
    pub terms: Vec<(usize, Rational)>,
}

/// Result of eliminating a constraint system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub variables: Vec<String>,
    pub rows: Vec<SolvedRow>,
    pub free: Vec<usize>,
}

impl Elimination {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The solved expression for `variable`, if it is a pivot.
    pub fn row_for(&self, variable: &str) -> Option<&SolvedRow> {
        let col = self.variables.iter().position(|v| v == variable)?;
        self.rows.iter().find(|row| row.variable == col)
    }

    /// Fills in the pivot variables given values for the free ones.
    pub fn complete(&self, free_values: &BTreeMap<usize, Rational>) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.variables.len()];
        for (&c, v) in free_values {
            values[c] = v.clone();
        }
        for row in &self.rows {
            let mut v = row.constant.clone();
            for (c, coeff) in &row.terms {
                v += coeff * &values[*c];
            }
            values[row.variable] = v;
        }
        values
    }
}

impl fmt::Display for Elimination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            write!(f, "{} = {}", self.variables[row.variable], fmt_rational(&row.constant))?;
            for (c, coeff) in &row.terms {
                if coeff.is_negative() {
                    write!(f, " - {}*{}", fmt_rational(&-coeff), self.variables[*c])?;
                } else {
                    write!(f, " + {}*{}", fmt_rational(coeff), self.variables[*c])?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reduced row echelon form with pivot search following `column_order`.
/// Rows are returned as (pivot column, normalized row). `None` on an
/// inconsistent system.
fn rref(equalities: &[LinearRow], column_order: &[usize]) -> Option<Vec<(usize, LinearRow)>> {
    let mut rows: Vec<LinearRow> = equalities.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
    let mut next_row = 0;
    for &col in column_order {
        let Some(pivot_row) = (next_row..rows.len()).find(|&r| !rows[r].coeffs[col].is_zero())
        else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        let pivot = rows[next_row].coeffs[col].clone();
        for c in rows[next_row].coeffs.iter_mut() {
            *c /= &pivot;
        }
        rows[next_row].constant /= &pivot;
        for r in 0..rows.len() {
            if r == next_row || rows[r].coeffs[col].is_zero() {
                continue;
            }
            let factor = rows[r].coeffs[col].clone();
            let (pivot_coeffs, pivot_const) = {
                let p = &rows[next_row];
                (p.coeffs.clone(), p.constant.clone())
            };
            for (c, pc) in rows[r].coeffs.iter_mut().zip(&pivot_coeffs) {
                *c -= &factor * pc;
            }
            rows[r].constant -= &factor * &pivot_const;
        }
        pivots.push((next_row, col));
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    // any remaining row must be 0 = 0
    for r in next_row..rows.len() {
        if rows[r].coeffs.iter().all(Zero::is_zero) {
            if !rows[r].constant.is_zero() {
                return None;
            }
        } else {
            unreachable!("all columns were offered to the pivot search");
        }
    }
    Some(
        pivots
            .into_iter()
            .map(|(r, col)| (col, rows[r].clone()))
            .collect(),
    )
}

/// Variable name for an isolated point-type multiplicity.
pub fn multiplicity_name(t: &PointType) -> String {
    let (i, j) = t.eigenvalue_exponents();
    format!("m({i},{j})")
}

/// Name of the curve variable sum(1 - g) in every holomorphic system.
pub const G_SUM: &str = "g_sum";

/// Builds the holomorphic Lefschetz constraint system for the given order.
///
/// Variables are the multiplicities of all isolated point types, in
/// lexicographic order, followed by [`G_SUM`]. The single identity in
/// Q(zeta) expands into exactly phi(order) rational equalities.
pub fn build_holomorphic_system(order: u32) -> Result<ConstraintSystem> {
    let types = isolated_point_types(order);
    let mut columns: Vec<CyclotomicNumber> = Vec::with_capacity(types.len() + 1);
    for t in &types {
        columns.push(point_term(t)?);
    }
    columns.push(curve_unit_term(order)?);
    let rhs = holomorphic_lhs(order)?;

    let mut names: Vec<String> = types.iter().map(multiplicity_name).collect();
    names.push(G_SUM.to_string());
    let mut system = ConstraintSystem::new(names);
    for k in 0..euler_phi(order) {
        let coeffs: Vec<Rational> = columns.iter().map(|c| c.coords()[k].clone()).collect();
        system.push_equality(LinearRow { coeffs, constant: rhs.coords()[k].clone() });
    }
    Ok(system)
}

/// Disjoint fixed curves, recorded by their genus multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveContribution {
    genus_list: Vec<u32>,
}

impl CurveContribution {
    pub fn new(mut genus_list: Vec<u32>) -> Self {
        genus_list.sort_unstable();
        CurveContribution { genus_list }
    }

    pub fn none() -> Self {
        CurveContribution { genus_list: vec![] }
    }

    pub fn count(&self) -> usize {
        self.genus_list.len()
    }

    pub fn genus_list(&self) -> &[u32] {
        &self.genus_list
    }

    /// sum over curves of (1 - g); at most `count()` since each term is <= 1.
    pub fn g_sum(&self) -> i64 {
        self.genus_list.iter().map(|&g| 1 - g as i64).sum()
    }

    /// sum over curves of (2 - 2g), the Euler characteristic of the curves.
    pub fn euler(&self) -> i64 {
        2 * self.g_sum()
    }
}

/// A complete fixed-locus configuration: isolated point multiplicities plus
/// curve data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FixedLocusConfig {
    order: u32,
    multiplicities: BTreeMap<PointType, u32>,
    curves: CurveContribution,
}

impl FixedLocusConfig {
    pub fn new(
        order: u32,
        multiplicities: BTreeMap<PointType, u32>,
        curves: CurveContribution,
    ) -> Result<Self> {
        for (t, _) in multiplicities.iter() {
            if t.order() != order {
                return Err(Error::InvalidScenario(format!(
                    "point type {t} has order {}, expected {order}",
                    t.order()
                )));
            }
            if !t.is_isolated() {
                return Err(Error::InvalidScenario(format!(
                    "type {t} is a curve point, not an isolated point"
                )));
            }
        }
        let multiplicities = multiplicities.into_iter().filter(|&(_, m)| m > 0).collect();
        Ok(FixedLocusConfig { order, multiplicities, curves })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn multiplicities(&self) -> &BTreeMap<PointType, u32> {
        &self.multiplicities
    }

    pub fn multiplicity(&self, t: &PointType) -> u32 {
        self.multiplicities.get(t).copied().unwrap_or(0)
    }

    pub fn curves(&self) -> &CurveContribution {
        &self.curves
    }

    /// Total number of isolated fixed points.
    pub fn total_points(&self) -> u32 {
        self.multiplicities.values().sum()
    }

    pub fn g_sum(&self) -> i64 {
        self.curves.g_sum()
    }

    /// Euler characteristic of the configuration: M + sum(2 - 2g).
    pub fn euler(&self) -> i64 {
        self.total_points() as i64 + self.curves.euler()
    }

    /// The configuration as a value vector for `system`'s variables.
    pub fn as_values(&self, system: &ConstraintSystem) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); system.num_vars()];
        for (t, &m) in &self.multiplicities {
            if let Some(col) = system.variable_index(&multiplicity_name(t)) {
                values[col] = rat(m as i64);
            }
        }
        if let Some(col) = system.variable_index(G_SUM) {
            values[col] = rat(self.g_sum());
        }
        values
    }
}

impl fmt::Display for FixedLocusConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, m) in &self.multiplicities {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{m}x{t}")?;
            first = false;
        }
        if self.multiplicities.is_empty() {
            write!(f, "no isolated points")?;
        }
        write!(f, "; curves: ")?;
        if self.curves.count() == 0 {
            write!(f, "none")?;
        } else {
            let genera: Vec<String> =
                self.curves.genus_list().iter().map(|g| format!("g={g}")).collect();
            write!(f, "{}", genera.join(", "))?;
        }
        write!(f, "; M = {}, chi = {}", self.total_points(), self.euler())
    }
}
