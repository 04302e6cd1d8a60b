//! The robot-photographer interaction.
//!
//! A person (or group) walks up, the robot greets them with a group-size
//! aware question, waits for a button press, announces the shot, takes three
//! photos and then shows and praises each one. The same leaf catalogue backs
//! a behavior-tree build and a state-machine build so the two architectures
//! can be run side by side.

use std::fmt;

use thiserror::Error;

use crate::bt::{NodeStatus, TreeNode};
use crate::catalogue::Catalogue;
use crate::fsm::{StateMachine, StateSpec, Transition, TransitionKind};
use crate::group::{self, DEFAULT_DIST_THRESHOLD, DEFAULT_ZONE_RADIUS};
use crate::world::{Action, Button, InteractionContext, Payload, Tick};

/// Photos taken per episode.
pub const PHOTOS_PER_EPISODE: u8 = 3;

pub const ANNOUNCE_TEXT: &str = "I am about to take your photo.";
pub const FAREWELL_TEXT: &str = "Maybe next time!";

const PRAISES: [&str; 3] = [
    "You look great in this photo.",
    "What a wonderful smile!",
    "This one is a keeper!",
];

/// Condition and behavior names understood by [`PhotographerCatalogue`].
pub mod names {
    pub const PERSON_DETECTED: &str = "person_detected";
    pub const NO_PERSON: &str = "no_person";
    pub const COOLING_DOWN: &str = "cooling_down";
    pub const NO_HAZARD: &str = "no_hazard";
    pub const HAZARD: &str = "hazard";
    pub const NETWORK_UP: &str = "network_up";
    pub const BUTTON_YES: &str = "button_yes";
    pub const BUTTON_NO: &str = "button_no";
    pub const ALWAYS: &str = "always";
    pub const PHOTOS_COMPLETE: &str = "photos_complete";
    pub const PHOTOS_PRESENTED: &str = "photos_presented";

    pub const IDLE: &str = "idle";
    pub const GREET: &str = "greet";
    pub const AWAIT_CONSENT: &str = "await_consent";
    pub const ANNOUNCE: &str = "announce";
    pub const TAKE_PHOTO: &str = "take_photo";
    pub const SHOW_AND_PRAISE: &str = "show_and_praise";
    pub const FAREWELL: &str = "farewell";
    pub const HALT_MOTION_HOLD: &str = "halt_motion_hold";

    pub const CONDITIONS: [&str; 11] = [
        PERSON_DETECTED,
        NO_PERSON,
        COOLING_DOWN,
        NO_HAZARD,
        HAZARD,
        NETWORK_UP,
        BUTTON_YES,
        BUTTON_NO,
        ALWAYS,
        PHOTOS_COMPLETE,
        PHOTOS_PRESENTED,
    ];

    pub const BEHAVIORS: [&str; 8] = [
        IDLE,
        GREET,
        AWAIT_CONSENT,
        ANNOUNCE,
        TAKE_PHOTO,
        SHOW_AND_PRAISE,
        FAREWELL,
        HALT_MOTION_HOLD,
    ];
}

/// State names of the photographer machine.
pub mod states {
    pub const WAITING: &str = "Waiting";
    pub const GREET: &str = "Greet";
    pub const ASK_CONSENT: &str = "AskConsent";
    pub const ANNOUNCE_PHOTO: &str = "AnnouncePhoto";
    pub const TAKE_PHOTO: &str = "TakePhoto";
    pub const SHOW_PRAISE: &str = "ShowPraise";
    pub const FAREWELL: &str = "Farewell";
    pub const HALT_MOTION: &str = "HaltMotion";
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InteractionError {
    #[error("cannot greet a group of zero")]
    EmptyGroup,
    #[error("photo index {0} out of range 1..=3")]
    PhotoIndex(u32),
}

/// Builds the consent question for a group of `n`.
pub fn greeting_text(n: u32) -> Result<String, InteractionError> {
    const WORDS: [&str; 11] = [
        "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    ];
    match n {
        0 => Err(InteractionError::EmptyGroup),
        1 => Ok("Would you like me to take your photo?".to_owned()),
        2..=12 => Ok(format!(
            "Would you like me to take a photo of the {} of you?",
            WORDS[n as usize - 2]
        )),
        _ => Ok(format!(
            "Would you like me to take a photo of the {n} of you?"
        )),
    }
}

pub fn praise_text(photo_index: u32) -> Result<&'static str, InteractionError> {
    if !(1..=3).contains(&photo_index) {
        return Err(InteractionError::PhotoIndex(photo_index));
    }
    Ok(PRAISES[(photo_index as usize - 1) % PRAISES.len()])
}

/// Timing and perception knobs for the interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionParams {
    pub greet_ticks: u32,
    pub announce_ticks: u32,
    pub photo_ticks: u32,
    /// Per photo: show on the first tick, praise on the last.
    pub praise_ticks: u32,
    pub cooldown_ticks: Tick,
    pub dist_threshold: f64,
    pub zone_radius: f64,
    pub fsm_timeout_ticks: u32,
}

impl Default for InteractionParams {
    fn default() -> Self {
        Self {
            greet_ticks: 2,
            announce_ticks: 1,
            photo_ticks: 1,
            praise_ticks: 2,
            cooldown_ticks: 10,
            dist_threshold: DEFAULT_DIST_THRESHOLD,
            zone_radius: DEFAULT_ZONE_RADIUS,
            fsm_timeout_ticks: 15,
        }
    }
}

/// Leaf conditions and behaviors of the photographer.
#[derive(Debug, Clone, Default)]
pub struct PhotographerCatalogue {
    params: InteractionParams,
}

impl PhotographerCatalogue {
    pub fn new(params: InteractionParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &InteractionParams {
        &self.params
    }

    /// Size of the robot's interaction group, ignoring cooldown.
    pub fn group_size(&self, ctx: &InteractionContext) -> usize {
        let persons = ctx.person_list();
        let clusters = group::cluster_groups(&persons, self.params.dist_threshold);
        group::interaction_group_size(&clusters, &persons, self.params.zone_radius)
    }

    fn greet(&self, step: u32, ctx: &mut InteractionContext) -> Option<NodeStatus> {
        if step > 0 {
            return None;
        }
        let n = self.group_size(ctx) as u32;
        let Ok(text) = greeting_text(n) else {
            return Some(NodeStatus::Failure);
        };
        ctx.greeting_group_size = n;
        ctx.photos_taken = 0;
        ctx.photos_shown = 0;
        ctx.say(text);
        None
    }

    fn show_and_praise(&self, step: u32, ctx: &mut InteractionContext) {
        if ctx.photos_shown >= PHOTOS_PER_EPISODE {
            return;
        }
        let index = ctx.photos_shown + 1;
        if step == 0 {
            ctx.emit_now(Action::ShowPhoto, Payload::Photo(index));
        }
        if step + 1 >= self.params.praise_ticks.max(1) {
            // index is always within 1..=3 here
            if let Ok(text) = praise_text(index as u32) {
                ctx.say(text);
            }
            ctx.photos_shown = index;
            if index == PHOTOS_PER_EPISODE {
                ctx.cooldown_until = ctx.clock + self.params.cooldown_ticks;
            }
        }
    }
}

impl Catalogue for PhotographerCatalogue {
    fn has_condition(&self, name: &str) -> bool {
        names::CONDITIONS.contains(&name)
    }

    fn behavior_duration(&self, name: &str) -> Option<u32> {
        let p = &self.params;
        Some(match name {
            names::IDLE | names::AWAIT_CONSENT | names::FAREWELL | names::HALT_MOTION_HOLD => 1,
            names::GREET => p.greet_ticks,
            names::ANNOUNCE => p.announce_ticks,
            names::TAKE_PHOTO => p.photo_ticks,
            names::SHOW_AND_PRAISE => p.praise_ticks,
            _ => return None,
        })
    }

    fn evaluate(&self, name: &str, ctx: &InteractionContext) -> bool {
        match name {
            names::PERSON_DETECTED => ctx.clock >= ctx.cooldown_until && self.group_size(ctx) >= 1,
            names::NO_PERSON => self.group_size(ctx) == 0,
            names::COOLING_DOWN => ctx.clock < ctx.cooldown_until,
            names::NO_HAZARD => !ctx.hazard_hand_near_arm,
            names::HAZARD => ctx.hazard_hand_near_arm,
            names::NETWORK_UP => ctx.network_ok,
            names::BUTTON_YES => ctx.button_pressed(Button::Yes),
            names::BUTTON_NO => ctx.button_pressed(Button::No),
            names::ALWAYS => true,
            names::PHOTOS_COMPLETE => ctx.photos_taken >= PHOTOS_PER_EPISODE,
            names::PHOTOS_PRESENTED => ctx.photos_shown >= PHOTOS_PER_EPISODE,
            _ => false,
        }
    }

    fn perform(&self, name: &str, step: u32, ctx: &mut InteractionContext) -> Option<NodeStatus> {
        match name {
            names::IDLE => ctx.emit_now(Action::Idle, Payload::None),
            names::GREET => return self.greet(step, ctx),
            names::AWAIT_CONSENT => {
                // a simultaneous no wins over yes
                return Some(if ctx.button_pressed(Button::No) {
                    NodeStatus::Failure
                } else if ctx.button_pressed(Button::Yes) {
                    NodeStatus::Success
                } else {
                    NodeStatus::Running
                });
            }
            names::ANNOUNCE if step == 0 => ctx.say(ANNOUNCE_TEXT),
            names::TAKE_PHOTO if step == 0 && ctx.photos_taken < PHOTOS_PER_EPISODE => {
                ctx.photos_taken += 1;
                ctx.emit_now(Action::TakePhoto, Payload::Photo(ctx.photos_taken));
            }
            names::SHOW_AND_PRAISE => self.show_and_praise(step, ctx),
            names::FAREWELL if step == 0 => {
                ctx.say(FAREWELL_TEXT);
                ctx.cooldown_until = ctx.clock + self.params.cooldown_ticks;
            }
            names::HALT_MOTION_HOLD => ctx.emit_now(Action::HaltMotionHold, Payload::None),
            _ => {}
        }
        None
    }
}

/// Which structural features the photographer tree includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BtOptions {
    /// Wrap the interaction in a Parallel with the presence check.
    pub abandonment: bool,
    /// Guard announce and each photo with the hazard check.
    pub halt: bool,
}

impl Default for BtOptions {
    fn default() -> Self {
        Self {
            abandonment: true,
            halt: true,
        }
    }
}

/// The photographer tree with default parameters and all features.
pub fn build_photographer_bt() -> TreeNode {
    build_photographer_bt_with(&InteractionParams::default(), BtOptions::default())
}

pub fn build_photographer_bt_with(params: &InteractionParams, options: BtOptions) -> TreeNode {
    use names::*;

    let halt_guarded = |label: String, action: TreeNode| {
        if options.halt {
            TreeNode::guard(NO_HAZARD, label, action)
        } else {
            action
        }
    };

    let mut steps = vec![
        TreeNode::timed_action(GREET, params.greet_ticks),
        TreeNode::fallback(
            "consent",
            vec![
                TreeNode::timed_action(AWAIT_CONSENT, 1),
                TreeNode::sequence(
                    "decline",
                    vec![
                        TreeNode::timed_action(FAREWELL, 1),
                        TreeNode::condition(PERSON_DETECTED),
                    ],
                ),
            ],
        ),
        halt_guarded(
            "halt_announce".into(),
            TreeNode::timed_action(ANNOUNCE, params.announce_ticks),
        ),
    ];
    for i in 1..=PHOTOS_PER_EPISODE {
        steps.push(halt_guarded(
            format!("halt_photo_{i}"),
            TreeNode::timed_action(TAKE_PHOTO, params.photo_ticks),
        ));
    }
    for _ in 0..PHOTOS_PER_EPISODE {
        steps.push(TreeNode::timed_action(SHOW_AND_PRAISE, params.praise_ticks));
    }

    let body = TreeNode::guard(
        NETWORK_UP,
        "pause",
        TreeNode::memory_sequence("main", steps),
    );
    let interaction = if options.abandonment {
        TreeNode::parallel("interact", vec![TreeNode::condition(PERSON_DETECTED), body])
    } else {
        body
    };

    let mut root = TreeNode::fallback(
        "root",
        vec![
            TreeNode::sequence(
                "wait",
                vec![
                    TreeNode::condition(NO_PERSON),
                    TreeNode::timed_action(IDLE, 1),
                ],
            ),
            TreeNode::sequence(
                "cooldown",
                vec![
                    TreeNode::condition(COOLING_DOWN),
                    TreeNode::timed_action(IDLE, 1),
                ],
            ),
            interaction,
        ],
    );
    root.assign_ids();
    root
}

/// How the state machine copes with people walking away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Abandonment {
    /// No handling: the machine finishes the interaction regardless.
    None,
    /// A `no_person` transition back to Waiting from every other state.
    #[default]
    Transitions,
    /// A timeout back to Waiting on every other state.
    Timeouts,
}

impl Abandonment {
    pub fn as_str(self) -> &'static str {
        match self {
            Abandonment::None => "none",
            Abandonment::Transitions => "transitions",
            Abandonment::Timeouts => "timeouts",
        }
    }
}

impl std::str::FromStr for Abandonment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Abandonment::None),
            "transitions" => Ok(Abandonment::Transitions),
            "timeouts" => Ok(Abandonment::Timeouts),
            other => Err(format!("unknown abandonment mode {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FsmOptions {
    pub abandonment: Abandonment,
    /// HaltMotion state with interrupt/resume transitions.
    pub halt: bool,
    /// Farewell state for a declined photo.
    pub decline: bool,
}

impl FsmOptions {
    pub fn full(abandonment: Abandonment) -> Self {
        Self {
            abandonment,
            halt: true,
            decline: true,
        }
    }

    /// The six-state nominal machine.
    pub fn basic() -> Self {
        Self {
            abandonment: Abandonment::None,
            halt: false,
            decline: false,
        }
    }
}

/// The full eight-state photographer machine.
pub fn build_photographer_fsm(abandonment: Abandonment) -> StateMachine {
    build_photographer_fsm_with(&InteractionParams::default(), FsmOptions::full(abandonment))
}

pub fn build_photographer_fsm_with(
    params: &InteractionParams,
    options: FsmOptions,
) -> StateMachine {
    use names::*;
    use states::*;

    // priorities: 0 abandonment, 1 hazard, 2+ nominal
    let mut m = StateMachine::new(WAITING)
        .with_state(StateSpec::new(WAITING).on_tick(IDLE))
        .with_state(StateSpec::new(states::GREET).on_entry(names::GREET))
        .with_state(StateSpec::new(ASK_CONSENT))
        .with_state(StateSpec::new(ANNOUNCE_PHOTO).on_entry(ANNOUNCE))
        .with_state(StateSpec::new(states::TAKE_PHOTO).on_tick(names::TAKE_PHOTO))
        .with_state(StateSpec::new(SHOW_PRAISE).on_tick(SHOW_AND_PRAISE))
        .with_transition(Transition::new(WAITING, PERSON_DETECTED, states::GREET, 2))
        .with_transition(Transition::new(states::GREET, ALWAYS, ASK_CONSENT, 2))
        .with_transition(Transition::new(ASK_CONSENT, BUTTON_YES, ANNOUNCE_PHOTO, 3))
        .with_transition(Transition::new(
            ANNOUNCE_PHOTO,
            ALWAYS,
            states::TAKE_PHOTO,
            2,
        ))
        .with_transition(Transition::new(
            states::TAKE_PHOTO,
            PHOTOS_COMPLETE,
            SHOW_PRAISE,
            2,
        ))
        .with_transition(Transition::new(SHOW_PRAISE, PHOTOS_PRESENTED, WAITING, 2));

    if options.decline {
        m = m
            .with_state(StateSpec::new(states::FAREWELL).on_entry(names::FAREWELL))
            .with_transition(Transition::new(ASK_CONSENT, BUTTON_NO, states::FAREWELL, 2))
            .with_transition(Transition::new(states::FAREWELL, ALWAYS, WAITING, 2));
    }

    if options.halt {
        m = m.with_state(StateSpec::new(HALT_MOTION).on_tick(HALT_MOTION_HOLD));
        for (priority, motion) in [(2, ANNOUNCE_PHOTO), (3, states::TAKE_PHOTO)] {
            m = m
                .with_transition(
                    Transition::new(motion, HAZARD, HALT_MOTION, 1)
                        .with_kind(TransitionKind::Interrupt),
                )
                .with_transition(
                    Transition::new(HALT_MOTION, NO_HAZARD, motion, priority)
                        .with_kind(TransitionKind::Resume),
                );
        }
    }

    let others: Vec<String> = m
        .states()
        .iter()
        .map(|s| s.id.clone())
        .filter(|id| id != WAITING)
        .collect();
    match options.abandonment {
        Abandonment::None => {}
        Abandonment::Transitions => {
            for state in &others {
                m = m.with_transition(Transition::new(state, NO_PERSON, WAITING, 0));
            }
        }
        Abandonment::Timeouts => {
            for state in &others {
                m.add_timeout(state, params.fsm_timeout_ticks, WAITING)
                    .expect("fresh machine has no timeouts");
            }
        }
    }
    m
}

/// What each architecture needs to add for abandonment and for halting.
/// Every figure is measured from built artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralEconomyReport {
    /// Control-flow nodes (composites and guards) added to the tree.
    pub bt_nodes_added_for_abandonment: usize,
    /// Leaf nodes added; they reuse existing catalogue conditions.
    pub bt_leaves_added_for_abandonment: usize,
    pub fsm_transitions_added_for_abandonment: usize,
    pub fsm_timeouts_added_for_abandonment: usize,
    pub bt_nodes_added_for_halt: usize,
    pub fsm_transitions_added_for_halt: usize,
    pub fsm_states_added_for_halt: usize,
    pub fsm_non_waiting_states: usize,
}

pub fn structural_economy_report() -> StructuralEconomyReport {
    let params = InteractionParams::default();
    let bt =
        |abandonment, halt| build_photographer_bt_with(&params, BtOptions { abandonment, halt });
    let fsm = |abandonment, halt| {
        build_photographer_fsm_with(
            &params,
            FsmOptions {
                abandonment,
                halt,
                decline: true,
            },
        )
        .count_elements()
    };

    let bt_full = bt(true, true);
    let bt_no_abandon = bt(false, true);
    let bt_no_halt = bt(true, false);

    let fsm_none = fsm(Abandonment::None, true);
    let fsm_transitions = fsm(Abandonment::Transitions, true);
    let fsm_timeouts = fsm(Abandonment::Timeouts, true);
    let fsm_no_halt = fsm(Abandonment::None, false);

    StructuralEconomyReport {
        bt_nodes_added_for_abandonment: bt_full.control_node_count()
            - bt_no_abandon.control_node_count(),
        bt_leaves_added_for_abandonment: bt_full.leaf_count() - bt_no_abandon.leaf_count(),
        fsm_transitions_added_for_abandonment: fsm_transitions.n_transitions
            - fsm_none.n_transitions,
        fsm_timeouts_added_for_abandonment: fsm_timeouts.n_timeouts - fsm_none.n_timeouts,
        bt_nodes_added_for_halt: bt_full.control_node_count() - bt_no_halt.control_node_count(),
        fsm_transitions_added_for_halt: fsm_none.n_transitions - fsm_no_halt.n_transitions,
        fsm_states_added_for_halt: fsm_none.n_states - fsm_no_halt.n_states,
        fsm_non_waiting_states: fsm_none.n_states - 1,
    }
}

impl fmt::Display for StructuralEconomyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            (
                "abandonment",
                "behavior tree",
                "control nodes",
                self.bt_nodes_added_for_abandonment,
            ),
            (
                "abandonment",
                "behavior tree",
                "leaf nodes (reused)",
                self.bt_leaves_added_for_abandonment,
            ),
            (
                "abandonment",
                "state machine",
                "transitions",
                self.fsm_transitions_added_for_abandonment,
            ),
            (
                "abandonment",
                "state machine",
                "timeouts (alt.)",
                self.fsm_timeouts_added_for_abandonment,
            ),
            (
                "halt",
                "behavior tree",
                "control nodes",
                self.bt_nodes_added_for_halt,
            ),
            (
                "halt",
                "state machine",
                "transitions",
                self.fsm_transitions_added_for_halt,
            ),
            (
                "halt",
                "state machine",
                "states",
                self.fsm_states_added_for_halt,
            ),
        ];
        writeln!(
            f,
            "{:<12} {:<14} {:<20} {:>5}",
            "feature", "architecture", "element", "added"
        )?;
        writeln!(f, "{}", "-".repeat(54))?;
        for (feature, arch, element, n) in rows {
            writeln!(f, "{feature:<12} {arch:<14} {element:<20} {n:>5}")?;
        }
        write!(
            f,
            "state machine non-waiting states: {}",
            self.fsm_non_waiting_states
        )
    }
}
