//! Prints the photographer behavior tree and runs it on the solo scenario.

use shutter::dsl::{parse_scenario, print_tree};
use shutter::interaction::build_photographer_bt;
use shutter::sim::{run, Controller};

const SOLO: &str = include_str!("../scenarios/solo.scn");

fn main() {
    print!("{}", print_tree(&build_photographer_bt()));
    println!();

    let scenario = parse_scenario(SOLO).expect("bundled scenario parses");
    let trace = run(&mut Controller::photographer_bt(), &scenario).expect("valid inputs");
    for record in trace.iter().filter(|r| !r.emissions.is_empty()).take(12) {
        let emitted: Vec<String> = record.emissions.iter().map(|e| e.to_string()).collect();
        println!(
            "tick {:>2} [{}] {}",
            record.tick,
            record.status,
            emitted.join(", ")
        );
    }
}
