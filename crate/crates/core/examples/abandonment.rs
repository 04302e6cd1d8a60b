//! A visitor walks away at different points of the interaction. The tree
//! falls back to waiting on the very next tick; the state machine needs its
//! extra transitions, or a timeout, to get there.

use shutter::dsl::ScenarioScript;
use shutter::interaction::Abandonment;
use shutter::sim::{run, Controller};
use shutter::world::{Action, Button};
use shutter::{Event, EventKind};

fn scenario(leave_at: u64) -> ScenarioScript {
    let mut events = vec![Event::new(
        0,
        EventKind::PersonAppear {
            id: 1,
            x: 1.0,
            y: 0.5,
        },
    )];
    if leave_at > 3 {
        events.push(Event::new(3, EventKind::ButtonPress(Button::Yes)));
    }
    events.push(Event::new(leave_at, EventKind::PersonLeave { id: 1 }));
    ScenarioScript::new("walk_away", 40, events)
}

/// First tick at or after `from` whose emissions are just `idle`.
fn first_idle(trace: &[shutter::sim::TickRecord], from: u64) -> Option<u64> {
    trace
        .iter()
        .skip(from as usize)
        .find(|r| r.emissions.iter().all(|e| e.action == Action::Idle) && !r.emissions.is_empty())
        .map(|r| r.tick)
}

fn main() {
    let mut controllers = [
        ("bt", Controller::photographer_bt()),
        (
            "fsm/transitions",
            Controller::photographer_fsm(Abandonment::Transitions),
        ),
        (
            "fsm/timeouts",
            Controller::photographer_fsm(Abandonment::Timeouts),
        ),
        ("fsm/none", Controller::photographer_fsm(Abandonment::None)),
    ];
    println!(
        "{:<6} {}",
        "leave",
        controllers
            .iter()
            .map(|(n, _)| format!("{n:>16}"))
            .collect::<String>()
    );
    for leave_at in [1, 2, 3, 4, 5, 6] {
        let s = scenario(leave_at);
        let mut row = format!("{leave_at:<6} ");
        for (_, c) in controllers.iter_mut() {
            let trace = run(c, &s).expect("valid inputs");
            let cell = match first_idle(&trace, leave_at) {
                Some(t) => format!("idle after {}", t - leave_at),
                None => "never idle".to_owned(),
            };
            row.push_str(&format!("{cell:>16}"));
        }
        println!("{row}");
    }
}
