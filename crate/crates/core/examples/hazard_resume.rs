//! A hand near the arm halts the photo sequence; once it is gone the tree
//! continues from the same photo.

use shutter::dsl::ScenarioScript;
use shutter::interaction::{
    build_photographer_bt_with, BtOptions, InteractionParams, PhotographerCatalogue,
};
use shutter::sim::{run, Controller};
use shutter::world::Button;
use shutter::{Event, EventKind};

fn main() {
    let params = InteractionParams {
        photo_ticks: 2,
        ..InteractionParams::default()
    };
    let tree = build_photographer_bt_with(&params, BtOptions::default());
    let mut controller =
        Controller::bt(tree, PhotographerCatalogue::new(params)).expect("valid tree");

    let scenario = ScenarioScript::new(
        "hand_in_the_way",
        20,
        vec![
            Event::new(
                0,
                EventKind::PersonAppear {
                    id: 1,
                    x: 1.0,
                    y: 0.5,
                },
            ),
            Event::new(3, EventKind::ButtonPress(Button::Yes)),
            Event::new(5, EventKind::HazardOn),
            Event::new(8, EventKind::HazardOff),
            Event::new(15, EventKind::PersonLeave { id: 1 }),
        ],
    );
    for record in run(&mut controller, &scenario).expect("valid inputs") {
        let emitted: Vec<String> = record.emissions.iter().map(|e| e.to_string()).collect();
        println!(
            "tick {:>2} hazard={} {:<8} {}",
            record.tick,
            u8::from(record.hazard),
            record.status,
            emitted.join(", ")
        );
    }
}
