//! Clusters people into groups and adapts the greeting to the size of the
//! group nearest the robot.

use shutter::group::{
    cluster_groups, mark_interaction_group, DEFAULT_DIST_THRESHOLD, DEFAULT_ZONE_RADIUS,
};
use shutter::interaction::greeting_text;
use shutter::world::PersonObservation;

fn main() {
    let crowds: [(&str, Vec<(f64, f64)>); 4] = [
        ("alone", vec![(1.0, 0.5)]),
        ("couple", vec![(1.0, 0.3), (1.2, -0.6)]),
        (
            "family and a passer-by",
            vec![(0.8, 0.8), (1.5, 0.1), (0.4, 1.9), (6.0, 4.0)],
        ),
        ("nobody close", vec![(4.0, 0.0), (4.5, 0.5)]),
    ];
    for (title, points) in crowds {
        let persons: Vec<PersonObservation> = points
            .iter()
            .zip(1..)
            .map(|(&(x, y), id)| PersonObservation::new(id, x, y))
            .collect();
        let mut clusters = cluster_groups(&persons, DEFAULT_DIST_THRESHOLD);
        let chosen = mark_interaction_group(&mut clusters, &persons, DEFAULT_ZONE_RADIUS);
        println!("{title}:");
        for c in &clusters {
            println!(
                "  group {:?}{}",
                c.members,
                if c.includes_robot {
                    " <- interacting"
                } else {
                    ""
                }
            );
        }
        let n = chosen.map_or(0, |i| clusters[i].members.len() as u32);
        match greeting_text(n) {
            Ok(text) => println!("  robot: {text}"),
            Err(e) => println!("  robot stays quiet ({e})"),
        }
    }
}
