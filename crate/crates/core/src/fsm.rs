//! Finite-state-machine runtime.
//!
//! States name an activity; guarded transitions move between them. On every
//! [`step`](StateMachine::step) the out-transitions of the current state are
//! tried in ascending priority and the first whose guard holds fires. If
//! nothing fires and the state has a timeout that has elapsed, the timeout
//! fires instead. Otherwise the state's `on_tick` behavior runs.
//!
//! Interrupt transitions record the state they leave in a return slot;
//! resume transitions fire only when the slot names their target, which lets
//! a single halt state return to whichever activity it interrupted.

use std::collections::BTreeSet;

use crate::catalogue::Catalogue;
use crate::error::ConfigError;
use crate::world::InteractionContext;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    pub id: String,
    pub on_entry: Option<String>,
    pub on_tick: Option<String>,
}

impl StateSpec {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            on_entry: None,
            on_tick: None,
        }
    }

    pub fn on_entry(mut self, behavior: impl Into<String>) -> Self {
        self.on_entry = Some(behavior.into());
        self
    }

    pub fn on_tick(mut self, behavior: impl Into<String>) -> Self {
        self.on_tick = Some(behavior.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransitionKind {
    #[default]
    Normal,
    /// Records the source state in the return slot.
    Interrupt,
    /// Fires only when the return slot holds the target state.
    Resume,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: String,
    pub guard: String,
    pub to: String,
    pub priority: i32,
    pub kind: TransitionKind,
}

impl Transition {
    pub fn new(from: &str, guard: &str, to: &str, priority: i32) -> Self {
        Self {
            from: from.into(),
            guard: guard.into(),
            to: to.into(),
            priority,
            kind: TransitionKind::Normal,
        }
    }

    pub fn with_kind(mut self, kind: TransitionKind) -> Self {
        self.kind = kind;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeout {
    pub state: String,
    pub after_ticks: u32,
    pub to: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementCounts {
    pub n_states: usize,
    pub n_transitions: usize,
    pub n_timeouts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMachine {
    states: Vec<StateSpec>,
    transitions: Vec<Transition>,
    timeouts: Vec<Timeout>,
    initial: String,
    current: String,
    ticks_in_state: u32,
    /// (interrupt state, origin) while an interrupt is being handled.
    return_slot: Option<(String, String)>,
}

impl StateMachine {
    pub fn new(initial: impl Into<String>) -> Self {
        let initial = initial.into();
        Self {
            states: Vec::new(),
            transitions: Vec::new(),
            timeouts: Vec::new(),
            current: initial.clone(),
            initial,
            ticks_in_state: 0,
            return_slot: None,
        }
    }

    pub fn with_state(mut self, state: StateSpec) -> Self {
        self.states.push(state);
        self
    }

    pub fn with_transition(mut self, transition: Transition) -> Self {
        self.transitions.push(transition);
        self
    }

    pub fn add_state(&mut self, state: StateSpec) -> Result<(), ConfigError> {
        if self.state(&state.id).is_some() {
            return Err(ConfigError::DuplicateState(state.id));
        }
        self.states.push(state);
        Ok(())
    }

    pub fn add_transition(&mut self, transition: Transition) -> Result<(), ConfigError> {
        for end in [&transition.from, &transition.to] {
            if self.state(end).is_none() {
                return Err(ConfigError::UnknownState(end.clone()));
            }
        }
        if self
            .transitions
            .iter()
            .any(|t| t.from == transition.from && t.priority == transition.priority)
        {
            return Err(ConfigError::DuplicatePriority {
                state: transition.from,
                priority: transition.priority,
            });
        }
        self.transitions.push(transition);
        Ok(())
    }

    /// Registers a timeout that fires after `after_ticks` resident steps in
    /// which no guarded transition fired.
    pub fn add_timeout(
        &mut self,
        state: &str,
        after_ticks: u32,
        to: &str,
    ) -> Result<(), ConfigError> {
        for end in [state, to] {
            if self.state(end).is_none() {
                return Err(ConfigError::UnknownState(end.to_owned()));
            }
        }
        if after_ticks == 0 {
            return Err(ConfigError::ZeroTimeout(state.to_owned()));
        }
        if self.timeout_for(state).is_some() {
            return Err(ConfigError::DuplicateTimeout(state.to_owned()));
        }
        self.timeouts.push(Timeout {
            state: state.to_owned(),
            after_ticks,
            to: to.to_owned(),
        });
        Ok(())
    }

    pub fn states(&self) -> &[StateSpec] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn timeouts(&self) -> &[Timeout] {
        &self.timeouts
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn current(&self) -> &str {
        &self.current
    }

    pub fn ticks_in_state(&self) -> u32 {
        self.ticks_in_state
    }

    /// Origin state recorded by the last interrupt, if still pending.
    pub fn return_slot(&self) -> Option<&str> {
        self.return_slot.as_ref().map(|(_, origin)| origin.as_str())
    }

    pub fn state(&self, id: &str) -> Option<&StateSpec> {
        self.states.iter().find(|s| s.id == id)
    }

    fn timeout_for(&self, state: &str) -> Option<&Timeout> {
        self.timeouts.iter().find(|t| t.state == state)
    }

    /// Forces the machine into `state` with a fresh residency count. Does
    /// not run `on_entry`.
    pub fn set_current(&mut self, state: &str) -> Result<(), ConfigError> {
        if self.state(state).is_none() {
            return Err(ConfigError::UnknownState(state.to_owned()));
        }
        self.current = state.to_owned();
        self.ticks_in_state = 0;
        self.return_slot = None;
        Ok(())
    }

    /// Returns to the initial state and clears runtime data.
    pub fn reset(&mut self) {
        self.current = self.initial.clone();
        self.ticks_in_state = 0;
        self.return_slot = None;
    }

    pub fn count_elements(&self) -> ElementCounts {
        ElementCounts {
            n_states: self.states.len(),
            n_transitions: self.transitions.len(),
            n_timeouts: self.timeouts.len(),
        }
    }

    pub fn validate(&self, catalogue: &dyn Catalogue) -> Result<(), ConfigError> {
        let mut ids = BTreeSet::new();
        for state in &self.states {
            if !ids.insert(state.id.as_str()) {
                return Err(ConfigError::DuplicateState(state.id.clone()));
            }
        }
        if !ids.contains(self.initial.as_str()) {
            return Err(ConfigError::UnknownState(self.initial.clone()));
        }
        let mut priorities = BTreeSet::new();
        for t in &self.transitions {
            for end in [&t.from, &t.to] {
                if !ids.contains(end.as_str()) {
                    return Err(ConfigError::UnknownState(end.clone()));
                }
            }
            if !priorities.insert((t.from.as_str(), t.priority)) {
                return Err(ConfigError::DuplicatePriority {
                    state: t.from.clone(),
                    priority: t.priority,
                });
            }
        }
        let mut timed = BTreeSet::new();
        for t in &self.timeouts {
            for end in [&t.state, &t.to] {
                if !ids.contains(end.as_str()) {
                    return Err(ConfigError::UnknownState(end.clone()));
                }
            }
            if t.after_ticks == 0 {
                return Err(ConfigError::ZeroTimeout(t.state.clone()));
            }
            if !timed.insert(t.state.as_str()) {
                return Err(ConfigError::DuplicateTimeout(t.state.clone()));
            }
        }

        let mut unresolved = BTreeSet::new();
        for t in &self.transitions {
            if !catalogue.has_condition(&t.guard) {
                unresolved.insert(format!("condition {}", t.guard));
            }
        }
        for state in &self.states {
            for behavior in state.on_entry.iter().chain(&state.on_tick) {
                if !catalogue.has_behavior(behavior) {
                    unresolved.insert(format!("behavior {behavior}"));
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

    /// The transition that would fire from the current state, if any.
    fn select(&self, catalogue: &dyn Catalogue, ctx: &InteractionContext) -> Option<&Transition> {
        let mut candidates: Vec<&Transition> = self
            .transitions
            .iter()
            .filter(|t| t.from == self.current)
            .collect();
        candidates.sort_by_key(|t| t.priority);
        candidates.into_iter().find(|t| {
            if t.kind == TransitionKind::Resume && self.return_slot() != Some(t.to.as_str()) {
                return false;
            }
            catalogue.evaluate(&t.guard, ctx)
        })
    }

    /// Advances the machine by one tick. The machine is assumed valid.
    pub fn step(&mut self, catalogue: &dyn Catalogue, ctx: &mut InteractionContext) {
        let fired = self.select(catalogue, ctx).map(|t| (t.to.clone(), t.kind));
        let resident = self.ticks_in_state + 1;
        let fired = fired.or_else(|| {
            self.timeout_for(&self.current)
                .filter(|t| resident >= t.after_ticks)
                .map(|t| (t.to.clone(), TransitionKind::Normal))
        });

        match fired {
            Some((target, kind)) => {
                let leaving_interrupt = self
                    .return_slot
                    .as_ref()
                    .is_some_and(|(halt, _)| *halt == self.current);
                if leaving_interrupt {
                    self.return_slot = None;
                }
                if kind == TransitionKind::Interrupt {
                    self.return_slot = Some((target.clone(), self.current.clone()));
                }
                self.current = target;
                self.ticks_in_state = 0;
                let entry = self.state(&self.current).and_then(|s| s.on_entry.clone());
                if let Some(behavior) = entry {
                    catalogue.perform(&behavior, 0, ctx);
                }
            }
            None => {
                let on_tick = self.state(&self.current).and_then(|s| s.on_tick.clone());
                if let Some(behavior) = on_tick {
                    let period = catalogue.behavior_duration(&behavior).unwrap_or(1).max(1);
                    catalogue.perform(&behavior, self.ticks_in_state % period, ctx);
                }
                self.ticks_in_state = resident;
            }
        }
    }
}
