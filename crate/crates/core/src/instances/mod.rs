//! Hard-instance families with a hidden parameter string `σ`, random
//! diameter-1 digraphs, and structural validators for both.
//!
//! Vertex numbering is fixed so that instances are reproducible and the
//! vertices shared across a family keep their ids for every `σ`: the source
//! `s` is 0 (when present), path vertices follow path-major then by
//! position, and the sink `u` is the last id.

mod descriptor;
mod families;
mod random;
mod validate;

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Digraph, GraphJson, VertexId};

pub use descriptor::{DescriptorError, InstanceDescriptor};
pub use families::{expected_dist_j, expected_reach_f, expected_reach_fprime, gen_f, gen_fprime, gen_j};
pub use random::{enumerate_diam1, gen_random_diam1, DEFAULT_ANTIPARALLEL_PROB};
pub use validate::{validate_instance, Check, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("parameter {name} must be at least 1")]
    ZeroParameter { name: &'static str },
    #[error("sigma has length {got}, expected k = {k}")]
    SigmaLength { k: usize, got: usize },
    #[error("sigma entry {value} at position {index} is outside 1..={k}")]
    SigmaOutOfRange { index: usize, value: usize, k: usize },
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
}

/// Named role of a vertex in a generated instance. Paths and positions are
/// 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// `s`
    Source,
    /// `u`
    Sink,
    /// `v_index^path`: the `index`-th named vertex of path `path`.
    PathVertex { path: usize, index: usize },
    /// `u^path`: first vertex of a path whose tail is named separately.
    PathHead { path: usize },
    /// Unnamed vertex at `position` along `path`.
    PathInner { path: usize, position: usize },
    /// Vertex of an unstructured graph.
    Vertex(VertexId),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Source => f.write_str("s"),
            Role::Sink => f.write_str("u"),
            Role::PathVertex { path, index } => write!(f, "v_{index}^{path}"),
            Role::PathHead { path } => write!(f, "u^{path}"),
            Role::PathInner { path, position } => write!(f, "p_{position}^{path}"),
            Role::Vertex(v) => write!(f, "x_{v}"),
        }
    }
}

/// A generated graph together with the role of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInstance {
    pub graph: Digraph,
    /// Indexed by vertex id.
    pub roles: Vec<Role>,
    /// Designated source: `s`, or `u` for the source-free family.
    pub source: VertexId,
}

impl LabeledInstance {
    pub fn vertex_of(&self, role: Role) -> Option<VertexId> {
        self.roles.iter().position(|&r| r == role)
    }
}

struct RoleMap<'a>(&'a [Role]);

impl Serialize for RoleMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, role) in self.0.iter().enumerate() {
            map.serialize_entry(&v.to_string(), &role.to_string())?;
        }
        map.end()
    }
}

impl Serialize for LabeledInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(flatten)]
            graph: GraphJson,
            source: VertexId,
            roles: RoleMap<'a>,
        }
        Repr { graph: GraphJson::from(&self.graph), source: self.source, roles: RoleMap(&self.roles) }.serialize(s)
    }
}

/// Builds the instance a descriptor names.
pub fn generate(desc: &InstanceDescriptor) -> Result<LabeledInstance, InstanceError> {
    match desc {
        InstanceDescriptor::F { k, q, sigma } => gen_f(*k, *q, sigma),
        InstanceDescriptor::J { k, sigma } => gen_j(*k, sigma),
        InstanceDescriptor::FPrime { k, q, sigma } => gen_fprime(*k, *q, sigma),
        InstanceDescriptor::RandomDiam1 { n, p, seed } => {
            if *n == 0 {
                return Err(InstanceError::ZeroParameter { name: "n" });
            }
            if !(0.0..=1.0).contains(p) {
                return Err(InstanceError::BadProbability(*p));
            }
            let graph = gen_random_diam1(*n, *p, *seed);
            Ok(LabeledInstance { roles: (0..*n).map(Role::Vertex).collect(), graph, source: 0 })
        }
    }
}
