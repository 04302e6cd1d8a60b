//! Deterministic tick loop driving either controller against a scenario.
//!
//! Each tick applies the scenario's events, runs the controller once and
//! flushes the emissions into a [`TickRecord`].

mod trace;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bt::{BehaviorTree, TreeNode};
use crate::catalogue::Catalogue;
use crate::dsl::{ScenarioError, ScenarioScript};
use crate::error::ConfigError;
use crate::fsm::StateMachine;
use crate::interaction::{
    build_photographer_bt, build_photographer_fsm, Abandonment, PhotographerCatalogue,
};
use crate::world::{Action, ActionEmission, InteractionContext, Payload, Tick, WorldError};

pub use trace::{format_record, format_trace, parse_record, parse_trace, TraceError};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid controller: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid scenario: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("world update failed: {0}")]
    World(#[from] WorldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerKind {
    Bt,
    Fsm,
}

impl ControllerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ControllerKind::Bt => "bt",
            ControllerKind::Fsm => "fsm",
        }
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ControllerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bt" => Ok(ControllerKind::Bt),
            "fsm" => Ok(ControllerKind::Fsm),
            other => Err(format!("unknown controller '{other}'")),
        }
    }
}

/// A validated controller ready to run.
#[derive(Debug, Clone)]
pub enum Controller {
    Bt(BehaviorTree<PhotographerCatalogue>),
    Fsm {
        machine: StateMachine,
        catalogue: PhotographerCatalogue,
    },
}

impl Controller {
    pub fn bt(tree: TreeNode, catalogue: PhotographerCatalogue) -> Result<Self, ConfigError> {
        Ok(Controller::Bt(BehaviorTree::new(tree, catalogue)?))
    }

    pub fn fsm(
        machine: StateMachine,
        catalogue: PhotographerCatalogue,
    ) -> Result<Self, ConfigError> {
        machine.validate(&catalogue)?;
        Ok(Controller::Fsm { machine, catalogue })
    }

    /// The reference photographer tree with default parameters.
    pub fn photographer_bt() -> Self {
        Controller::Bt(
            BehaviorTree::new(build_photographer_bt(), PhotographerCatalogue::default())
                .expect("reference tree resolves"),
        )
    }

    /// The reference photographer machine with default parameters.
    pub fn photographer_fsm(mode: Abandonment) -> Self {
        Controller::fsm(
            build_photographer_fsm(mode),
            PhotographerCatalogue::default(),
        )
        .expect("reference machine resolves")
    }

    pub fn kind(&self) -> ControllerKind {
        match self {
            Controller::Bt(_) => ControllerKind::Bt,
            Controller::Fsm { .. } => ControllerKind::Fsm,
        }
    }

    pub fn catalogue(&self) -> &PhotographerCatalogue {
        match self {
            Controller::Bt(tree) => tree.catalogue(),
            Controller::Fsm { catalogue, .. } => catalogue,
        }
    }

    pub fn reset(&mut self) {
        match self {
            Controller::Bt(tree) => tree.reset(),
            Controller::Fsm { machine, .. } => machine.reset(),
        }
    }

    /// Runs one tick or step and returns the status token: the root status
    /// for a tree, the state after the step for a machine.
    pub fn step(&mut self, ctx: &mut InteractionContext) -> String {
        match self {
            Controller::Bt(tree) => tree.tick(ctx).as_str().to_owned(),
            Controller::Fsm { machine, catalogue } => {
                machine.step(catalogue as &dyn Catalogue, ctx);
                machine.current().to_owned()
            }
        }
    }
}

/// What happened during one tick.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TickRecord {
    pub tick: Tick,
    pub controller: ControllerKind,
    pub status: String,
    pub emissions: Vec<ActionEmission>,
    /// Persons tracked after the tick's events were applied.
    pub persons: usize,
    pub hazard: bool,
    pub network: bool,
}

impl fmt::Display for TickRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_record(self))
    }
}

/// Runs `controller` from a fresh context for the whole scenario.
///
/// The controller is reset first, so the same value can be run repeatedly.
pub fn run(
    controller: &mut Controller,
    scenario: &ScenarioScript,
) -> Result<Vec<TickRecord>, SimError> {
    run_with_context(controller, scenario).map(|(records, _)| records)
}

/// Like [`run`], also returning the final context.
pub fn run_with_context(
    controller: &mut Controller,
    scenario: &ScenarioScript,
) -> Result<(Vec<TickRecord>, InteractionContext), SimError> {
    scenario.validate()?;
    controller.reset();
    let mut ctx = InteractionContext::new();
    let mut records = Vec::with_capacity(scenario.duration as usize);
    for tick in 0..scenario.duration {
        ctx.apply_events(scenario.events_at(tick))?;
        let status = controller.step(&mut ctx);
        let (persons, hazard, network) =
            (ctx.person_count(), ctx.hazard_hand_near_arm, ctx.network_ok);
        let emissions = ctx.end_tick();
        records.push(TickRecord {
            tick,
            controller: controller.kind(),
            status,
            emissions,
            persons,
            hazard,
            network,
        });
    }
    Ok((records, ctx))
}

/// The observable emissions of a trace in order, without padding.
pub fn flatten_emissions(trace: &[TickRecord]) -> Vec<(Action, Payload)> {
    trace
        .iter()
        .flat_map(|r| &r.emissions)
        .filter(|e| !e.action.is_padding())
        .map(|e| (e.action, e.payload.clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    /// Index into the flattened emission sequences.
    pub position: usize,
    /// `None` when that trace ended first.
    pub a: Option<(Action, Payload)>,
    pub b: Option<(Action, Payload)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    pub equivalent: bool,
    pub first_divergence: Option<Divergence>,
}

/// Compares the emission sequences of two traces, ignoring padding and
/// absolute ticks.
pub fn compare(a: &[TickRecord], b: &[TickRecord]) -> DivergenceReport {
    let (a, b) = (flatten_emissions(a), flatten_emissions(b));
    let position = (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i));
    let first_divergence = position.map(|position| Divergence {
        position,
        a: a.get(position).cloned(),
        b: b.get(position).cloned(),
    });
    DivergenceReport {
        equivalent: first_divergence.is_none(),
        first_divergence,
    }
}

fn describe(side: &Option<(Action, Payload)>) -> String {
    match side {
        Some((action, payload)) => format!("{action}({payload})"),
        None => "<end of trace>".to_owned(),
    }
}

impl fmt::Display for DivergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_divergence {
            None => write!(f, "equivalent"),
            Some(d) => write!(
                f,
                "diverged at emission {}\n  a: {}\n  b: {}",
                d.position,
                describe(&d.a),
                describe(&d.b)
            ),
        }
    }
}
