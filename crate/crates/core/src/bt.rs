//! Behavior-tree runtime.
//!
//! A tree is ticked from the root once per simulated tick. Control-flow nodes
//! decide which children receive the tick; leaves evaluate a condition or
//! advance a behavior from the [`Catalogue`]. Every tick of every node
//! yields exactly one [`NodeStatus`].
//!
//! Composite semantics:
//!
//! * `Sequence` ticks children left to right and stops at the first child
//!   that does not succeed.
//! * `Fallback` ticks children left to right and stops at the first child
//!   that does not fail.
//! * `Parallel` ticks every child every tick. Any failure fails the node; it
//!   succeeds once all children succeed.
//! * `Guard` forwards the tick to its only child while its condition holds.
//!   When the condition does not hold it returns `Running` and leaves the
//!   child untouched.
//!
//! Sequences and fallbacks come in a memory variant that resumes at the child
//! that was running on the previous tick. Whenever a composite stops running
//! a child (it switches to another one, or finishes), the abandoned child's
//! subtree is [`reset`](TreeNode::reset).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::catalogue::Catalogue;
use crate::error::ConfigError;
use crate::world::InteractionContext;

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Success,
    Running,
    Failure,
}

impl NodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeStatus::Success => "success",
            NodeStatus::Running => "running",
            NodeStatus::Failure => "failure",
        }
    }
}

impl fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Sequence {
        memory: bool,
    },
    Fallback {
        memory: bool,
    },
    Parallel,
    Guard {
        condition: String,
    },
    Condition {
        name: String,
    },
    /// `duration: None` uses the catalogue's default.
    Action {
        behavior: String,
        duration: Option<u32>,
    },
}

impl NodeKind {
    pub fn is_leaf(&self) -> bool {
        matches!(self, NodeKind::Condition { .. } | NodeKind::Action { .. })
    }

    pub fn is_control(&self) -> bool {
        !self.is_leaf()
    }
}

/// Per-node runtime memory.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeState {
    /// Memory composites: index of the child to resume at.
    pub resume_index: usize,
    /// Actions: ticks advanced in the current activation.
    pub elapsed_ticks: u32,
    /// Composites: child that returned `Running` on the last tick.
    pub running_child: Option<usize>,
}

impl NodeState {
    pub fn is_clear(&self) -> bool {
        *self == NodeState::default()
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    id: NodeId,
    label: Option<String>,
    kind: NodeKind,
    children: Vec<TreeNode>,
    state: NodeState,
    tick_count: u64,
}

impl TreeNode {
    fn composite(kind: NodeKind, label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        Self {
            id: 0,
            label: Some(label.into()),
            kind,
            children,
            state: NodeState::default(),
            tick_count: 0,
        }
    }

    fn leaf(kind: NodeKind) -> Self {
        Self {
            id: 0,
            label: None,
            kind,
            children: Vec::new(),
            state: NodeState::default(),
            tick_count: 0,
        }
    }

    pub fn sequence(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        Self::composite(NodeKind::Sequence { memory: false }, label, children)
    }

    pub fn memory_sequence(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        Self::composite(NodeKind::Sequence { memory: true }, label, children)
    }

    pub fn fallback(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        Self::composite(NodeKind::Fallback { memory: false }, label, children)
    }

    pub fn memory_fallback(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        Self::composite(NodeKind::Fallback { memory: true }, label, children)
    }

    pub fn parallel(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        Self::composite(NodeKind::Parallel, label, children)
    }

    pub fn guard(condition: impl Into<String>, label: impl Into<String>, child: TreeNode) -> Self {
        Self::composite(
            NodeKind::Guard {
                condition: condition.into(),
            },
            label,
            vec![child],
        )
    }

    pub fn condition(name: impl Into<String>) -> Self {
        Self::leaf(NodeKind::Condition { name: name.into() })
    }

    pub fn action(behavior: impl Into<String>) -> Self {
        Self::leaf(NodeKind::Action {
            behavior: behavior.into(),
            duration: None,
        })
    }

    pub fn timed_action(behavior: impl Into<String>, duration: u32) -> Self {
        Self::leaf(NodeKind::Action {
            behavior: behavior.into(),
            duration: Some(duration),
        })
    }

    /// Builds a node from raw parts; used by the parser. Runtime state starts
    /// clear and the id is 0 until [`assign_ids`](Self::assign_ids) runs.
    pub fn from_parts(kind: NodeKind, label: Option<String>, children: Vec<TreeNode>) -> Self {
        Self {
            id: 0,
            label,
            kind,
            children,
            state: NodeState::default(),
            tick_count: 0,
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn children(&self) -> &[TreeNode] {
        &self.children
    }

    pub fn state(&self) -> &NodeState {
        &self.state
    }

    /// How many times this node has been ticked. Not cleared by `reset`.
    pub fn tick_count(&self) -> u64 {
        self.tick_count
    }

    /// Numbers nodes in pre-order starting at 0.
    pub fn assign_ids(&mut self) {
        fn walk(node: &mut TreeNode, next: &mut NodeId) {
            node.id = *next;
            *next += 1;
            for child in &mut node.children {
                walk(child, next);
            }
        }
        let mut next = 0;
        walk(self, &mut next);
    }

    /// Pre-order traversal.
    pub fn iter(&self) -> impl Iterator<Item = &TreeNode> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    pub fn find(&self, label: &str) -> Option<&TreeNode> {
        self.iter().find(|n| n.label() == Some(label))
    }

    pub fn node_count(&self) -> usize {
        self.iter().count()
    }

    /// Composites and guards.
    pub fn control_node_count(&self) -> usize {
        self.iter().filter(|n| n.kind.is_control()).count()
    }

    pub fn leaf_count(&self) -> usize {
        self.iter().filter(|n| n.kind.is_leaf()).count()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(TreeNode::depth).max().unwrap_or(0)
    }

    /// Compares kind, label and children, ignoring ids and runtime state.
    pub fn same_structure(&self, other: &TreeNode) -> bool {
        self.kind == other.kind
            && self.label == other.label
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.same_structure(b))
    }

    /// True when no node in the subtree holds runtime state.
    pub fn is_clear(&self) -> bool {
        self.iter().all(|n| n.state.is_clear())
    }

    /// Checks structure and resolves every name against `catalogue`.
    pub fn validate(&self, catalogue: &dyn Catalogue) -> Result<(), ConfigError> {
        let mut ids = BTreeSet::new();
        let mut unresolved = BTreeSet::new();
        for node in self.iter() {
            if !ids.insert(node.id) {
                return Err(ConfigError::DuplicateNodeId(node.id));
            }
            let label = || node.label.clone().unwrap_or_default();
            match &node.kind {
                NodeKind::Sequence { .. } | NodeKind::Fallback { .. } | NodeKind::Parallel => {
                    if node.children.is_empty() {
                        return Err(ConfigError::EmptyComposite {
                            node: node.id,
                            label: label(),
                        });
                    }
                }
                NodeKind::Guard { condition } => {
                    if node.children.len() != 1 {
                        return Err(ConfigError::GuardArity {
                            node: node.id,
                            label: label(),
                            found: node.children.len(),
                        });
                    }
                    if !catalogue.has_condition(condition) {
                        unresolved.insert(format!("condition {condition}"));
                    }
                }
                NodeKind::Condition { name } => {
                    if !node.children.is_empty() {
                        return Err(ConfigError::LeafWithChildren { node: node.id });
                    }
                    if !catalogue.has_condition(name) {
                        unresolved.insert(format!("condition {name}"));
                    }
                }
                NodeKind::Action { behavior, duration } => {
                    if !node.children.is_empty() {
                        return Err(ConfigError::LeafWithChildren { node: node.id });
                    }
                    if *duration == Some(0) {
                        return Err(ConfigError::ZeroDuration {
                            node: node.id,
                            behavior: behavior.clone(),
                        });
                    }
                    if !catalogue.has_behavior(behavior) {
                        unresolved.insert(format!("behavior {behavior}"));
                    }
                }
            }
        }
        if unresolved.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::UnresolvedNames(
                unresolved.into_iter().collect(),
            ))
        }
    }

    /// Clears runtime state in the whole subtree.
    pub fn reset(&mut self) {
        self.state = NodeState::default();
        for child in &mut self.children {
            child.reset();
        }
    }

    /// Ticks the subtree once. The tree is assumed valid.
    pub fn tick(&mut self, catalogue: &dyn Catalogue, ctx: &mut InteractionContext) -> NodeStatus {
        self.tick_count += 1;
        let TreeNode {
            kind,
            children,
            state,
            ..
        } = self;
        match kind {
            NodeKind::Sequence { memory } => tick_ordered(
                children,
                state,
                *memory,
                NodeStatus::Success,
                catalogue,
                ctx,
            ),
            NodeKind::Fallback { memory } => tick_ordered(
                children,
                state,
                *memory,
                NodeStatus::Failure,
                catalogue,
                ctx,
            ),
            NodeKind::Parallel => tick_parallel(children, state, catalogue, ctx),
            NodeKind::Guard { condition } => {
                if catalogue.evaluate(condition, ctx) {
                    children[0].tick(catalogue, ctx)
                } else {
                    catalogue.guard_blocked(condition, ctx);
                    NodeStatus::Running
                }
            }
            NodeKind::Condition { name } => {
                if catalogue.evaluate(name, ctx) {
                    NodeStatus::Success
                } else {
                    NodeStatus::Failure
                }
            }
            NodeKind::Action { behavior, duration } => {
                let step = state.elapsed_ticks;
                let duration = duration
                    .or_else(|| catalogue.behavior_duration(behavior))
                    .unwrap_or(1);
                match catalogue.perform(behavior, step, ctx) {
                    Some(NodeStatus::Running) => {
                        state.elapsed_ticks = step + 1;
                        NodeStatus::Running
                    }
                    Some(done) => {
                        state.elapsed_ticks = 0;
                        done
                    }
                    None if step + 1 >= duration => {
                        state.elapsed_ticks = 0;
                        NodeStatus::Success
                    }
                    None => {
                        state.elapsed_ticks = step + 1;
                        NodeStatus::Running
                    }
                }
            }
        }
    }
}

/// Sequence (`pass` = Success) and fallback (`pass` = Failure).
fn tick_ordered(
    children: &mut [TreeNode],
    state: &mut NodeState,
    memory: bool,
    pass: NodeStatus,
    catalogue: &dyn Catalogue,
    ctx: &mut InteractionContext,
) -> NodeStatus {
    let start = if memory { state.resume_index } else { 0 };
    let mut outcome = pass;
    let mut running = None;
    for (index, child) in children.iter_mut().enumerate().skip(start) {
        let status = child.tick(catalogue, ctx);
        if status == pass {
            continue;
        }
        if status == NodeStatus::Running {
            running = Some(index);
        }
        outcome = status;
        break;
    }
    if let Some(previous) = state.running_child {
        if running != Some(previous) {
            children[previous].reset();
        }
    }
    state.running_child = running;
    if memory {
        state.resume_index = running.unwrap_or(0);
    }
    outcome
}

fn tick_parallel(
    children: &mut [TreeNode],
    state: &mut NodeState,
    catalogue: &dyn Catalogue,
    ctx: &mut InteractionContext,
) -> NodeStatus {
    let mut any_failure = false;
    let mut first_running = None;
    for (index, child) in children.iter_mut().enumerate() {
        match child.tick(catalogue, ctx) {
            NodeStatus::Failure => any_failure = true,
            NodeStatus::Running => {
                first_running.get_or_insert(index);
            }
            NodeStatus::Success => {}
        }
    }
    let outcome = if any_failure {
        NodeStatus::Failure
    } else if first_running.is_some() {
        NodeStatus::Running
    } else {
        NodeStatus::Success
    };
    if outcome == NodeStatus::Running {
        state.running_child = first_running;
    } else {
        for child in children.iter_mut() {
            child.reset();
        }
        state.running_child = None;
    }
    outcome
}

/// A validated tree bound to the catalogue it was validated against.
#[derive(Debug, Clone)]
pub struct BehaviorTree<C> {
    root: TreeNode,
    catalogue: C,
}

impl<C: Catalogue> BehaviorTree<C> {
    /// Numbers the nodes in pre-order and validates against `catalogue`.
    pub fn new(mut root: TreeNode, catalogue: C) -> Result<Self, ConfigError> {
        root.assign_ids();
        root.validate(&catalogue)?;
        Ok(Self { root, catalogue })
    }

    pub fn tick(&mut self, ctx: &mut InteractionContext) -> NodeStatus {
        self.root.tick(&self.catalogue, ctx)
    }

    pub fn reset(&mut self) {
        self.root.reset();
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn catalogue(&self) -> &C {
        &self.catalogue
    }

    pub fn into_root(self) -> TreeNode {
        self.root
    }
}
