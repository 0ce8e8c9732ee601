//! Scenario files and solution reports.
//!
//! Scenarios come in as JSON documents; solutions go out either as JSON
//! (machine form) or as a markdown table (human form). Both forms describe
//! the identical solution set and are byte-deterministic for a given input.

use serde::{Deserialize, Serialize};

use crate::enumerate::{Capacity, CurvePolicy, Scenario, SearchBounds, SolutionSet};
use crate::lefschetz::{PointType, Sense};
use crate::weierstrass::{DiagonalAction, Monomial, MonomialWeierstrass};
use crate::{Error, Result};

/// JSON form of an enumeration scenario.
///
/// `source` fields carry free-text provenance notes for the shipped data and
/// are ignored by the solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: u32,
    pub q: u32,
    #[serde(rename = "trace_on_S")]
    pub trace_on_s: i64,
    #[serde(default)]
    pub capacities: Vec<CapacityFile>,
    #[serde(default)]
    pub forced_zero: Vec<[u32; 2]>,
    #[serde(default)]
    pub curve_policy: CurvePolicyFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityFile {
    pub types: Vec<[u32; 2]>,
    pub bound: i64,
    /// "le" or "eq".
    pub sense: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CurvePolicyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_curves: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus_max: Option<u32>,
    /// Pin the curve multiset to exactly this genus list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curves_exact: Option<Vec<u32>>,
    /// Name of another scenario whose (unique) solution's curves contain
    /// this scenario's curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contained_in: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_sum_min: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_sum_max: Option<i64>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidScenario(format!("JSON parse error: {e}")))
    }

    /// Converts to a solver scenario. `resolve_curves` maps a scenario name
    /// from `curve_policy.contained_in` to the genus list of that scenario's
    /// fixed curves.
    pub fn into_scenario(
        &self,
        resolve_curves: &dyn Fn(&str) -> Result<Vec<u32>>,
    ) -> Result<Scenario> {
        let point = |pair: &[u32; 2], what: &str| -> Result<PointType> {
            PointType::new(self.order, pair[0], pair[1]).map_err(|e| {
                Error::InvalidScenario(format!("{what} [{}, {}]: {e}", pair[0], pair[1]))
            })
        };
        let mut capacities = Vec::with_capacity(self.capacities.len());
        for (k, cap) in self.capacities.iter().enumerate() {
            let sense = match cap.sense.as_str() {
                "le" => Sense::Le,
                "eq" => Sense::Eq,
                other => {
                    return Err(Error::InvalidScenario(format!(
                        "capacities[{k}].sense must be \"le\" or \"eq\", got \"{other}\""
                    )))
                }
            };
            let mut types = Vec::with_capacity(cap.types.len());
            for pair in &cap.types {
                types.push(point(pair, &format!("capacities[{k}].types"))?);
            }
            capacities.push(Capacity { types, bound: cap.bound, sense });
        }
        let mut forced_zero = Vec::with_capacity(self.forced_zero.len());
        for pair in &self.forced_zero {
            forced_zero.push(point(pair, "forced_zero")?);
        }

        let defaults = CurvePolicy::default();
        let contained_in = match &self.curve_policy.contained_in {
            Some(name) => Some(resolve_curves(name)?),
            None => None,
        };
        let curve_policy = CurvePolicy {
            max_curves: self.curve_policy.max_curves.unwrap_or(defaults.max_curves),
            genus_max: self.curve_policy.genus_max.unwrap_or(defaults.genus_max),
            exact: self.curve_policy.curves_exact.clone(),
            contained_in,
        };
        let mut scenario = Scenario::new(
            self.order,
            self.q,
            self.trace_on_s,
            capacities,
            forced_zero,
            curve_policy,
        )?;
        if let Some(b) = &self.bounds {
            scenario.bounds = SearchBounds {
                m_max: b.m_max,
                g_sum_min: b.g_sum_min,
                g_sum_max: b.g_sum_max,
            };
        }
        Ok(scenario)
    }
}

/// JSON form of a Weierstrass model together with a diagonal action.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeierstrassFile {
    pub equation: EquationFile,
    pub action: ActionFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationFile {
    pub monomials: Vec<MonomialFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialFile {
    #[serde(default = "default_coeff")]
    pub coeff: i64,
    #[serde(default)]
    pub x: u32,
    #[serde(default)]
    pub y: u32,
    #[serde(default)]
    pub t: u32,
}

fn default_coeff() -> i64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionFile {
    pub order: u32,
    pub weights: [i64; 3],
}

impl WeierstrassFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidModel(format!("JSON parse error: {e}")))
    }

    pub fn into_model(&self) -> Result<(MonomialWeierstrass, DiagonalAction)> {
        let rhs: Vec<Monomial> = self
            .equation
            .monomials
            .iter()
            .map(|m| Monomial { coeff: m.coeff, x: m.x, y: m.y, t: m.t })
            .collect();
        let model = MonomialWeierstrass::new(rhs)?;
        let action = DiagonalAction::new(self.action.order, self.action.weights)?;
        Ok((model, action))
    }
}

/// Machine-readable record of one enumerated configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    /// Isolated point types with their multiplicities, lexicographic.
    pub points: Vec<PointRecord>,
    /// Total number of isolated points.
    pub isolated_points: u32,
    /// Genus of each fixed curve, ascending.
    pub curves: Vec<u32>,
    pub curve_count: u32,
    pub g_sum: i64,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub i: u32,
    pub j: u32,
    pub multiplicity: u32,
}

/// Full report of an enumeration run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub order: u32,
    /// Euler characteristic required of every solution.
    pub euler: i64,
    pub solutions: Vec<SolutionRecord>,
}

impl Report {
    pub fn new(scenario: &Scenario, solutions: &SolutionSet) -> Self {
        let records = solutions
            .configs()
            .iter()
            .map(|cfg| SolutionRecord {
                points: cfg
                    .multiplicities()
                    .iter()
                    .map(|(t, &m)| {
                        let (i, j) = t.eigenvalue_exponents();
                        PointRecord { i, j, multiplicity: m }
                    })
                    .collect(),
                isolated_points: cfg.total_points(),
                curves: cfg.curves().genus_list().to_vec(),
                curve_count: cfg.curves().count() as u32,
                g_sum: cfg.g_sum(),
                euler: cfg.euler(),
            })
            .collect();
        Report { order: scenario.order, euler: scenario.euler(), solutions: records }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidScenario(format!("report parse error: {e}")))
    }

    /// Markdown table mirroring the m^{i,j} fixed-locus notation.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# Fixed-locus configurations for order {}\n\n",
            self.order
        ));
        out.push_str(&format!("Euler characteristic of the fixed locus: {}\n\n", self.euler));
        if self.solutions.is_empty() {
            out.push_str("No configuration satisfies the constraints (infeasible scenario).\n");
            return out;
        }
        for (k, sol) in self.solutions.iter().enumerate() {
            out.push_str(&format!("## Solution {}\n\n", k + 1));
            out.push_str("| type (i,j) | multiplicity |\n|---|---|\n");
            for p in &sol.points {
                out.push_str(&format!("| ({},{}) | {} |\n", p.i, p.j, p.multiplicity));
            }
            let curves = if sol.curves.is_empty() {
                "none".to_string()
            } else {
                sol.curves
                    .iter()
                    .map(|g| format!("genus {g}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            out.push_str(&format!(
                "\n{} isolated points; curves: {curves}; sum(1-g) = {}; chi = {}\n\n",
                sol.isolated_points, sol.g_sum, sol.euler
            ));
        }
        out
    }

    /// One-line summary, e.g. `1 solution: 11 isolated points + 1 rational curve, chi = 13`.
    pub fn summary(&self) -> String {
        match self.solutions.as_slice() {
            [] => "no solutions (infeasible scenario)".to_string(),
            [sol] => format!(
                "1 solution: {} isolated points + {}, chi = {}",
                sol.isolated_points,
                describe_curves(&sol.curves),
                sol.euler
            ),
            all => format!("{} solutions", all.len()),
        }
    }
}

fn describe_curves(curves: &[u32]) -> String {
    if curves.is_empty() {
        return "no curves".to_string();
    }
    let rational = curves.iter().filter(|&&g| g == 0).count();
    if rational == curves.len() {
        format!("{rational} rational curve{}", if rational == 1 { "" } else { "s" })
    } else {
        let genera: Vec<String> = curves.iter().map(|g| format!("g={g}")).collect();
        format!("curves [{}]", genera.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_configs;

    #[test]
    fn scenario_file_round_trip_to_scenario() {
        let text = r#"{
            "order": 7,
            "q": 1,
            "trace_on_S": 16,
            "capacities": [],
            "forced_zero": [],
            "curve_policy": { "curves_exact": [0, 0] }
        }"#;
        let file = ScenarioFile::from_json(text).unwrap();
        let scenario = file.into_scenario(&|name| {
            Err(Error::InvalidScenario(format!("no scenario named {name}")))
        });
        let scenario = scenario.unwrap();
        assert_eq!(scenario.order, 7);
        assert_eq!(scenario.euler(), 17);
        assert_eq!(scenario.curve_policy.exact, Some(vec![0, 0]));
    }

    #[test]
    fn bad_sense_is_diagnosed() {
        let text = r#"{
            "order": 21, "q": 1, "trace_on_S": 10,
            "capacities": [ { "types": [[2,20]], "bound": 4, "sense": "leq" } ]
        }"#;
        let file = ScenarioFile::from_json(text).unwrap();
        let err = file
            .into_scenario(&|_| Ok(vec![]))
            .unwrap_err();
        assert!(err.to_string().contains("capacities[0].sense"));
    }

    #[test]
    fn bad_point_type_is_diagnosed() {
        let text = r#"{
            "order": 21, "q": 1, "trace_on_S": 10,
            "forced_zero": [[3, 4]]
        }"#;
        let file = ScenarioFile::from_json(text).unwrap();
        let err = file.into_scenario(&|_| Ok(vec![])).unwrap_err();
        assert!(err.to_string().contains("forced_zero"));
    }

    #[test]
    fn report_json_round_trip() {
        let file = ScenarioFile::from_json(
            r#"{ "order": 7, "q": 1, "trace_on_S": 16,
                 "curve_policy": { "curves_exact": [0, 0] } }"#,
        )
        .unwrap();
        let scenario = file.into_scenario(&|_| Ok(vec![])).unwrap();
        let solutions = enumerate_configs(&scenario, false).unwrap();
        let report = Report::new(&scenario, &solutions);
        let parsed = Report::from_json(&report.to_json()).unwrap();
        assert_eq!(parsed, report);
        // byte determinism
        assert_eq!(report.to_json(), Report::new(&scenario, &solutions).to_json());
        assert_eq!(report.to_markdown(), Report::new(&scenario, &solutions).to_markdown());
    }
}
