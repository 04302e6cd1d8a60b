//! How much each architecture has to grow to handle people walking away and
//! hazards near the arm, measured on the built artifacts.

use shutter::interaction::{
    build_photographer_fsm_with, structural_economy_report, Abandonment, FsmOptions,
    InteractionParams,
};

fn main() {
    println!("{}", structural_economy_report());
    println!();
    let params = InteractionParams::default();
    for mode in [
        Abandonment::None,
        Abandonment::Transitions,
        Abandonment::Timeouts,
    ] {
        let counts = build_photographer_fsm_with(&params, FsmOptions::full(mode)).count_elements();
        println!("fsm {:<12} {counts:?}", mode.as_str());
    }
    println!(
        "fsm basic        {:?}",
        build_photographer_fsm_with(&params, FsmOptions::basic()).count_elements()
    );
}
