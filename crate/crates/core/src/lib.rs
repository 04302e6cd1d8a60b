//! Reactive interaction orchestration for a robot photographer.
//!
//! The crate provides two controller engines over a shared blackboard:
//!
//! * [`bt`]: a behavior-tree runtime (sequence, fallback, parallel, guard).
//! * [`fsm`]: a state-machine runtime with prioritized guarded transitions,
//!   timeouts and interrupt/resume transitions.
//!
//! [`interaction`] builds the photographer interaction for both engines from
//! one leaf [`Catalogue`], [`group`] clusters people into social groups,
//! [`dsl`] parses and prints trees and stimulus scenarios, and [`sim`] runs
//! either controller against a scenario tick by tick and compares traces.

pub mod bt;
pub mod catalogue;
pub mod dsl;
pub mod error;
pub mod fsm;
pub mod group;
pub mod interaction;
pub mod sim;
pub mod world;

pub use bt::{BehaviorTree, NodeKind, NodeStatus, TreeNode};
pub use catalogue::{Catalogue, FixedCatalogue};
pub use error::ConfigError;
pub use fsm::StateMachine;
pub use interaction::PhotographerCatalogue;
pub use world::{Action, ActionEmission, Event, EventKind, InteractionContext, Payload};
