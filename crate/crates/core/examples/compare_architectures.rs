//! Runs the tree and the state machine over every bundled scenario and
//! compares what they say and do, ignoring idle and halt padding.

use std::fs;
use std::path::Path;

use shutter::dsl::parse_scenario;
use shutter::interaction::Abandonment;
use shutter::sim::{compare, run, Controller};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut paths: Vec<_> = fs::read_dir(&dir)
        .expect("scenario directory exists")
        .map(|e| e.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "scn"))
        .collect();
    paths.sort();

    let mut bt = Controller::photographer_bt();
    let mut fsm = Controller::photographer_fsm(Abandonment::Transitions);
    for path in paths {
        let scenario =
            parse_scenario(&fs::read_to_string(&path).expect("readable")).expect("valid scenario");
        let a = run(&mut bt, &scenario).expect("valid inputs");
        let b = run(&mut fsm, &scenario).expect("valid inputs");
        let report = compare(&a, &b);
        println!(
            "{:<22} {}",
            scenario.name,
            report
                .to_string()
                .replace('\n', "\n                       ")
        );
    }
}
