//! Prints the photographer tree in the text format, parses it back and
//! checks that nothing changed. Also shows a few parse errors.

use shutter::dsl::{parse_scenario, parse_tree, parse_tree_checked, print_tree};
use shutter::interaction::build_photographer_bt;
use shutter::PhotographerCatalogue;

fn main() {
    let tree = build_photographer_bt();
    let text = print_tree(&tree);
    print!("{text}");
    let back = parse_tree(&text).expect("printed trees parse");
    println!("round trip identical: {}", back.same_structure(&tree));

    for bad in [
        "sequence s { }",
        "guard(no_hazard) g {\n  action announce\n  action take_photo\n}",
        "action greet dur=zero",
    ] {
        println!("{:?}\n  -> {}", bad, parse_tree(bad).unwrap_err());
    }
    let unresolved = parse_tree_checked(
        "sequence s { condition sunny action dance }",
        &PhotographerCatalogue::default(),
    );
    println!("unresolved -> {}", unresolved.unwrap_err());
    println!(
        "{}",
        parse_scenario("scenario s ticks 40\n@5 button maybe\n").unwrap_err()
    );
    println!(
        "{}",
        parse_scenario("scenario s ticks 40\n@50 button yes\n").unwrap_err()
    );
}
