//! Machine checks for every structural property the families are built to
//! have. Failures are report entries, never errors.

use serde::Serialize;

use super::{
    expected_dist_j, expected_reach_f, expected_reach_fprime, InstanceDescriptor, InstanceError, LabeledInstance, Role,
};
use crate::graph::{bfs_distances, reach_oracle, Distance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub descriptor: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name, passed, detail: detail.into() });
    }

    fn compare<T: PartialEq + std::fmt::Debug>(&mut self, name: &'static str, expected: T, got: T) {
        let detail = format!("expected {expected:?}, got {got:?}");
        self.push(name, expected == got, detail);
    }

    fn param_error(&mut self, name: &'static str, e: InstanceError) {
        self.push(name, false, format!("descriptor parameters invalid: {e}"));
    }
}

/// Checks `inst` against the closed forms for `desc`: vertex and edge
/// counts, role labeling, underlying diameter, and the reachability or
/// distance row of the designated source.
pub fn validate_instance(inst: &LabeledInstance, desc: &InstanceDescriptor) -> ValidationReport {
    let mut report = ValidationReport { descriptor: desc.to_string(), checks: Vec::new() };
    let g = &inst.graph;
    let n = g.n();

    let mut sorted = inst.roles.clone();
    sorted.sort();
    sorted.dedup();
    report.push(
        "roles_bijective",
        inst.roles.len() == n && sorted.len() == n,
        format!("{} roles, {} distinct, {n} vertices", inst.roles.len(), sorted.len()),
    );

    let diameter = g.underlying_diameter();
    match desc {
        InstanceDescriptor::F { k, q, sigma } => {
            let (k, q) = (*k, *q);
            let ones = sigma.iter().filter(|&&b| b).count();
            report.compare("vertex_count", k * q + 2, n);
            report.compare("edge_count", k * q.saturating_sub(1) + ones + k * q + 1, g.edge_count());
            report.compare("source_role", Some(Role::Source), inst.roles.get(inst.source).copied());
            check_diameter(&mut report, diameter, k * q >= 3);
            match expected_reach_f(k, q, sigma) {
                Ok(expected) => {
                    report.compare("reach_from_source", expected, reach_oracle(g).reachable_from(inst.source))
                }
                Err(e) => report.param_error("reach_from_source", e),
            }
        }
        InstanceDescriptor::FPrime { k, q, sigma } => {
            let (k, q) = (*k, *q);
            report.compare("vertex_count", k * q + 1, n);
            report.compare("edge_count", k * q.saturating_sub(1) + k * q, g.edge_count());
            report.push(
                "no_source_vertex",
                !inst.roles.contains(&Role::Source),
                "source-free family must not label any vertex s",
            );
            report.compare("source_role", Some(Role::Sink), inst.roles.get(inst.source).copied());
            check_diameter(&mut report, diameter, k * q >= 3);
            match expected_reach_fprime(k, q, sigma) {
                Ok(expected) => {
                    report.compare("reach_from_source", expected, reach_oracle(g).reachable_from(inst.source))
                }
                Err(e) => report.param_error("reach_from_source", e),
            }
        }
        InstanceDescriptor::J { k, sigma } => {
            let path_vertices: usize = sigma.iter().map(|&s| s + k).sum();
            report.compare("vertex_count", path_vertices + 2, n);
            // path edges, s → every head, everything → u
            let edges = (path_vertices - sigma.len()) + sigma.len() + (path_vertices + 1);
            report.compare("edge_count", edges, g.edge_count());
            report.compare("source_role", Some(Role::Source), inst.roles.get(inst.source).copied());
            check_diameter(&mut report, diameter, true);
            match expected_dist_j(*k, sigma) {
                Ok(expected) => {
                    let got = bfs_distances(g, inst.source);
                    let mismatches: Vec<String> = inst
                        .roles
                        .iter()
                        .enumerate()
                        .filter(|&(v, role)| expected.get(role).map(|&d| Distance::Finite(d)) != Some(got[v]))
                        .map(|(v, role)| format!("{role} (vertex {v}): oracle {}", got[v]))
                        .collect();
                    report.push(
                        "distances_from_source",
                        mismatches.is_empty() && expected.len() == n,
                        if mismatches.is_empty() { "all distances match".to_string() } else { mismatches.join("; ") },
                    );
                }
                Err(e) => report.param_error("distances_from_source", e),
            }
        }
        InstanceDescriptor::RandomDiam1 { n: want, .. } => {
            report.compare("vertex_count", *want, n);
            let pairs = n * (n - 1) / 2;
            report.push(
                "edge_count",
                (pairs..=2 * pairs).contains(&g.edge_count()),
                format!("{} edges, expected between {pairs} and {}", g.edge_count(), 2 * pairs),
            );
            report.push("underlying_complete", g.is_underlying_complete(), format!("underlying diameter {diameter}"));
        }
    }
    report
}

fn check_diameter(report: &mut ValidationReport, diameter: Distance, exactly_two: bool) {
    report.push("diameter_at_most_2", diameter <= Distance::Finite(2), format!("underlying diameter {diameter}"));
    if exactly_two {
        report.push("diameter_exactly_2", diameter == Distance::Finite(2), format!("underlying diameter {diameter}"));
    }
}
