//! Named conditions and behaviors shared by both controller engines.
//!
//! Trees and state machines refer to leaves by name only; a [`Catalogue`]
//! resolves those names at validation time and runs them at tick time.

use std::cell::RefCell;
use std::collections::BTreeMap;

use crate::bt::NodeStatus;
use crate::world::{Action, InteractionContext, Payload};

pub trait Catalogue {
    /// True if `name` is a known condition.
    fn has_condition(&self, name: &str) -> bool;

    /// Default duration of a behavior, or `None` if `name` is unknown.
    fn behavior_duration(&self, name: &str) -> Option<u32>;

    /// Evaluates a condition. Unknown names evaluate to false; callers are
    /// expected to have validated names beforehand.
    fn evaluate(&self, name: &str, ctx: &InteractionContext) -> bool;

    /// Runs one step of a behavior. `step` counts from 0 within the current
    /// activation.
    ///
    /// Returning `None` leaves completion to the duration countdown. Behaviors
    /// that decide their own outcome (waiting on a button, say) return the
    /// status directly.
    fn perform(&self, name: &str, step: u32, ctx: &mut InteractionContext) -> Option<NodeStatus>;

    /// Called when a guard blocks traversal.
    fn guard_blocked(&self, _condition: &str, ctx: &mut InteractionContext) {
        ctx.emit_now(Action::HaltMotionHold, Payload::None);
    }

    fn has_behavior(&self, name: &str) -> bool {
        self.behavior_duration(name).is_some()
    }
}

impl<C: Catalogue + ?Sized> Catalogue for &C {
    fn has_condition(&self, name: &str) -> bool {
        (**self).has_condition(name)
    }

    fn behavior_duration(&self, name: &str) -> Option<u32> {
        (**self).behavior_duration(name)
    }

    fn evaluate(&self, name: &str, ctx: &InteractionContext) -> bool {
        (**self).evaluate(name, ctx)
    }

    fn perform(&self, name: &str, step: u32, ctx: &mut InteractionContext) -> Option<NodeStatus> {
        (**self).perform(name, step, ctx)
    }

    fn guard_blocked(&self, condition: &str, ctx: &mut InteractionContext) {
        (**self).guard_blocked(condition, ctx)
    }
}

/// A catalogue of fixed stubs, handy for exercising engines in isolation.
///
/// Every stub behavior emits `say(<name>)` each step it is performed, so the
/// order in which leaves run is visible in the context's emissions.
/// Conditions and statuses can be changed between ticks through `&self`.
#[derive(Debug, Default, Clone)]
pub struct FixedCatalogue {
    conditions: RefCell<BTreeMap<String, bool>>,
    behaviors: RefCell<BTreeMap<String, StubBehavior>>,
}

#[derive(Debug, Clone, Copy)]
struct StubBehavior {
    duration: u32,
    status: Option<NodeStatus>,
}

impl FixedCatalogue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_condition(self, name: &str, value: bool) -> Self {
        self.set_condition(name, value);
        self
    }

    /// A behavior that completes after `duration` steps.
    pub fn with_action(self, name: &str, duration: u32) -> Self {
        self.behaviors.borrow_mut().insert(
            name.to_owned(),
            StubBehavior {
                duration,
                status: None,
            },
        );
        self
    }

    /// A behavior that always reports `status`.
    pub fn with_status(self, name: &str, status: NodeStatus) -> Self {
        self.behaviors.borrow_mut().insert(
            name.to_owned(),
            StubBehavior {
                duration: 1,
                status: Some(status),
            },
        );
        self
    }

    pub fn set_condition(&self, name: &str, value: bool) {
        self.conditions.borrow_mut().insert(name.to_owned(), value);
    }

    /// Changes the fixed status of a behavior registered with `with_status`.
    pub fn set_status(&self, name: &str, status: NodeStatus) {
        if let Some(stub) = self.behaviors.borrow_mut().get_mut(name) {
            stub.status = Some(status);
        }
    }
}

impl Catalogue for FixedCatalogue {
    fn has_condition(&self, name: &str) -> bool {
        self.conditions.borrow().contains_key(name)
    }

    fn behavior_duration(&self, name: &str) -> Option<u32> {
        self.behaviors.borrow().get(name).map(|b| b.duration)
    }

    fn evaluate(&self, name: &str, _ctx: &InteractionContext) -> bool {
        self.conditions.borrow().get(name).copied().unwrap_or(false)
    }

    fn perform(&self, name: &str, _step: u32, ctx: &mut InteractionContext) -> Option<NodeStatus> {
        let stub = self.behaviors.borrow().get(name).copied()?;
        ctx.say(name);
        stub.status
    }
}
