//! Builds a small state machine by hand and shows a timeout firing when no
//! guard does.

use shutter::fsm::{StateSpec, Transition};
use shutter::interaction::names;
use shutter::world::Button;
use shutter::{Event, EventKind, InteractionContext, PhotographerCatalogue, StateMachine};

fn main() {
    let mut machine = StateMachine::new("Waiting")
        .with_state(StateSpec::new("Waiting").on_tick(names::IDLE))
        .with_state(StateSpec::new("AskConsent"))
        .with_state(StateSpec::new("Thanks").on_entry(names::FAREWELL))
        .with_transition(Transition::new(
            "Waiting",
            names::PERSON_DETECTED,
            "AskConsent",
            0,
        ))
        .with_transition(Transition::new(
            "AskConsent",
            names::BUTTON_YES,
            "Thanks",
            0,
        ))
        .with_transition(Transition::new("Thanks", names::ALWAYS, "Waiting", 0));
    machine
        .add_timeout("AskConsent", 10, "Waiting")
        .expect("AskConsent has no timeout yet");

    let catalogue = PhotographerCatalogue::default();
    machine.validate(&catalogue).expect("all names resolve");
    println!("{:?}", machine.count_elements());

    let mut ctx = InteractionContext::new();
    ctx.apply_events(&[Event::new(
        0,
        EventKind::PersonAppear {
            id: 1,
            x: 1.0,
            y: 0.0,
        },
    )])
    .expect("fresh id");
    for _ in 0..14 {
        machine.step(&catalogue, &mut ctx);
        println!(
            "tick {:>2}: {:<10} ({} ticks in state)",
            ctx.clock,
            machine.current(),
            machine.ticks_in_state()
        );
        ctx.end_tick();
    }

    // A yes press within the window wins over the timeout.
    ctx.apply_events(&[Event::new(ctx.clock, EventKind::ButtonPress(Button::Yes))])
        .expect("buttons always apply");
    machine.step(&catalogue, &mut ctx);
    println!("after yes: {}", machine.current());
}
