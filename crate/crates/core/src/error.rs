use thiserror::Error;

use crate::bt::NodeId;

/// A tree or state machine that cannot run as built.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unresolved names: {}", .0.join(", "))]
    UnresolvedNames(Vec<String>),
    #[error("composite node {node} ({label}) requires at least one child")]
    EmptyComposite { node: NodeId, label: String },
    #[error("guard node {node} ({label}) must have exactly one child, found {found}")]
    GuardArity {
        node: NodeId,
        label: String,
        found: usize,
    },
    #[error("leaf node {node} cannot have children")]
    LeafWithChildren { node: NodeId },
    #[error("duplicate node id {0}")]
    DuplicateNodeId(NodeId),
    #[error("action {behavior} (node {node}) has zero duration")]
    ZeroDuration { node: NodeId, behavior: String },
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("duplicate state {0}")]
    DuplicateState(String),
    #[error("state {0} already has a timeout")]
    DuplicateTimeout(String),
    #[error("timeout on state {0} must be at least one tick")]
    ZeroTimeout(String),
    #[error("priority {priority} used twice on transitions out of {state}")]
    DuplicatePriority { state: String, priority: i32 },
}
