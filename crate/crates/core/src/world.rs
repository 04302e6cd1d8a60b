//! The shared blackboard both controllers read and write.
//!
//! An [`InteractionContext`] holds everything a condition can observe (people,
//! buttons, hazard and network flags, the clock) plus the bookkeeping that
//! behaviors update as an interaction progresses. Stimuli arrive as [`Event`]s
//! and are applied atomically at the start of a tick; the controller then
//! runs and every action it produces is recorded as an [`ActionEmission`].
//! [`InteractionContext::end_tick`] flushes those emissions and advances the
//! clock.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Simulated time, in ticks.
pub type Tick = u64;

/// Identifier of a tracked person. Always positive.
pub type PersonId = u32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("unknown person {id} at tick {tick}")]
    UnknownPerson { tick: Tick, id: PersonId },
    #[error("person {id} already present at tick {tick}")]
    DuplicatePerson { tick: Tick, id: PersonId },
    #[error("person id must be positive (tick {tick})")]
    ZeroPersonId { tick: Tick },
    #[error("non-finite position for person {id} at tick {tick}")]
    NonFinitePosition { tick: Tick, id: PersonId },
    #[error("event scheduled for tick {event} applied at tick {clock}")]
    EventOutOfTick { event: Tick, clock: Tick },
    #[error("emission stamped tick {emission} but the clock reads {clock}")]
    EmissionTickMismatch { emission: Tick, clock: Tick },
}

/// A tracked body, positioned in meters relative to the cart at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PersonObservation {
    pub person_id: PersonId,
    pub x: f64,
    pub y: f64,
}

impl PersonObservation {
    pub fn new(person_id: PersonId, x: f64, y: f64) -> Self {
        Self { person_id, x, y }
    }

    /// Distance to the robot.
    pub fn range(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance_to(&self, other: &PersonObservation) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One of the three illuminated buttons on the cart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Button {
    Yes,
    No,
    Aux,
}

impl Button {
    pub fn as_str(self) -> &'static str {
        match self {
            Button::Yes => "yes",
            Button::No => "no",
            Button::Aux => "aux",
        }
    }
}

impl fmt::Display for Button {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    PersonAppear { id: PersonId, x: f64, y: f64 },
    PersonMove { id: PersonId, x: f64, y: f64 },
    PersonLeave { id: PersonId },
    ButtonPress(Button),
    HazardOn,
    HazardOff,
    NetworkDown,
    NetworkUp,
}

/// A scheduled stimulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub at_tick: Tick,
    pub kind: EventKind,
}

impl Event {
    pub fn new(at_tick: Tick, kind: EventKind) -> Self {
        Self { at_tick, kind }
    }
}

/// The closed set of observable robot actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Say,
    TakePhoto,
    ShowPhoto,
    HaltMotionHold,
    Idle,
}

impl Action {
    pub const ALL: [Action; 5] = [
        Action::Say,
        Action::TakePhoto,
        Action::ShowPhoto,
        Action::HaltMotionHold,
        Action::Idle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Say => "say",
            Action::TakePhoto => "take_photo",
            Action::ShowPhoto => "show_photo",
            Action::HaltMotionHold => "halt_motion_hold",
            Action::Idle => "idle",
        }
    }

    pub fn from_name(name: &str) -> Option<Action> {
        Action::ALL.into_iter().find(|a| a.as_str() == name)
    }

    /// Waiting-state chatter that says nothing about interaction progress.
    pub fn is_padding(self) -> bool {
        matches!(self, Action::Idle | Action::HaltMotionHold)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Payload {
    None,
    Text(String),
    Photo(u8),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::None => Ok(()),
            Payload::Text(t) => f.write_str(t),
            Payload::Photo(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ActionEmission {
    pub tick: Tick,
    pub action: Action,
    pub payload: Payload,
}

impl ActionEmission {
    pub fn new(tick: Tick, action: Action, payload: Payload) -> Self {
        Self {
            tick,
            action,
            payload,
        }
    }
}

impl fmt::Display for ActionEmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.action, self.payload)
    }
}

/// Interaction blackboard.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteractionContext {
    pub clock: Tick,
    persons: BTreeMap<PersonId, PersonObservation>,
    buttons_pressed_this_tick: BTreeSet<Button>,
    pub hazard_hand_near_arm: bool,
    pub network_ok: bool,
    /// Photos taken in the current episode, at most 3.
    pub photos_taken: u8,
    /// Photos displayed and praised in the current episode.
    pub photos_shown: u8,
    /// Group size captured when the greeting was spoken.
    pub greeting_group_size: u32,
    pub cooldown_until: Tick,
    emissions_this_tick: Vec<ActionEmission>,
}

impl Default for InteractionContext {
    fn default() -> Self {
        Self {
            clock: 0,
            persons: BTreeMap::new(),
            buttons_pressed_this_tick: BTreeSet::new(),
            hazard_hand_near_arm: false,
            network_ok: true,
            photos_taken: 0,
            photos_shown: 0,
            greeting_group_size: 0,
            cooldown_until: 0,
            emissions_this_tick: Vec::new(),
        }
    }
}

impl InteractionContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Persons currently tracked, ordered by id.
    pub fn persons(&self) -> impl Iterator<Item = &PersonObservation> {
        self.persons.values()
    }

    pub fn person_list(&self) -> Vec<PersonObservation> {
        self.persons.values().copied().collect()
    }

    pub fn person(&self, id: PersonId) -> Option<&PersonObservation> {
        self.persons.get(&id)
    }

    pub fn person_count(&self) -> usize {
        self.persons.len()
    }

    /// Edge query: true only during the tick the button was pressed.
    pub fn button_pressed(&self, button: Button) -> bool {
        self.buttons_pressed_this_tick.contains(&button)
    }

    pub fn emissions(&self) -> &[ActionEmission] {
        &self.emissions_this_tick
    }

    /// Applies this tick's stimuli. All events must be stamped with the
    /// current clock. On error the context is left unchanged.
    pub fn apply_events<'a, I>(&mut self, events: I) -> Result<(), WorldError>
    where
        I: IntoIterator<Item = &'a Event>,
    {
        let mut next = self.clone();
        for event in events {
            next.apply_one(event)?;
        }
        *self = next;
        Ok(())
    }

    fn apply_one(&mut self, event: &Event) -> Result<(), WorldError> {
        let tick = self.clock;
        if event.at_tick != tick {
            return Err(WorldError::EventOutOfTick {
                event: event.at_tick,
                clock: tick,
            });
        }
        match event.kind {
            EventKind::PersonAppear { id, x, y } => {
                check_position(tick, id, x, y)?;
                if self.persons.contains_key(&id) {
                    return Err(WorldError::DuplicatePerson { tick, id });
                }
                self.persons.insert(id, PersonObservation::new(id, x, y));
            }
            EventKind::PersonMove { id, x, y } => {
                check_position(tick, id, x, y)?;
                let person = self
                    .persons
                    .get_mut(&id)
                    .ok_or(WorldError::UnknownPerson { tick, id })?;
                person.x = x;
                person.y = y;
            }
            EventKind::PersonLeave { id } => {
                self.persons
                    .remove(&id)
                    .ok_or(WorldError::UnknownPerson { tick, id })?;
            }
            EventKind::ButtonPress(button) => {
                self.buttons_pressed_this_tick.insert(button);
            }
            EventKind::HazardOn => self.hazard_hand_near_arm = true,
            EventKind::HazardOff => self.hazard_hand_near_arm = false,
            EventKind::NetworkDown => self.network_ok = false,
            EventKind::NetworkUp => self.network_ok = true,
        }
        Ok(())
    }

    /// Appends an emission. Its tick must equal the clock.
    pub fn emit(&mut self, emission: ActionEmission) -> Result<(), WorldError> {
        if emission.tick != self.clock {
            return Err(WorldError::EmissionTickMismatch {
                emission: emission.tick,
                clock: self.clock,
            });
        }
        self.emissions_this_tick.push(emission);
        Ok(())
    }

    /// Emits an action stamped with the current clock.
    pub fn emit_now(&mut self, action: Action, payload: Payload) {
        let tick = self.clock;
        self.emissions_this_tick
            .push(ActionEmission::new(tick, action, payload));
    }

    pub fn say(&mut self, text: impl Into<String>) {
        self.emit_now(Action::Say, Payload::Text(text.into()));
    }

    /// Flushes the tick: returns its emissions, clears button edges and
    /// advances the clock by one.
    pub fn end_tick(&mut self) -> Vec<ActionEmission> {
        self.buttons_pressed_this_tick.clear();
        self.clock += 1;
        std::mem::take(&mut self.emissions_this_tick)
    }
}

fn check_position(tick: Tick, id: PersonId, x: f64, y: f64) -> Result<(), WorldError> {
    if id == 0 {
        return Err(WorldError::ZeroPersonId { tick });
    }
    if !x.is_finite() || !y.is_finite() {
        return Err(WorldError::NonFinitePosition { tick, id });
    }
    Ok(())
}
