//! Ticks a small hand-built tree against stub leaves and shows how a memory
//! sequence resumes where it left off.

use shutter::{BehaviorTree, FixedCatalogue, InteractionContext, NodeStatus, TreeNode};

fn main() {
    let catalogue = FixedCatalogue::new()
        .with_condition("ready", true)
        .with_action("wave", 1)
        .with_action("walk", 3)
        .with_action("bow", 1);

    let root = TreeNode::memory_sequence(
        "routine",
        vec![
            TreeNode::condition("ready"),
            TreeNode::action("wave"),
            TreeNode::action("walk"),
            TreeNode::action("bow"),
        ],
    );
    let mut tree = BehaviorTree::new(root, &catalogue).expect("all names resolve");

    let mut ctx = InteractionContext::new();
    loop {
        let status = tree.tick(&mut ctx);
        let emitted: Vec<String> = ctx.end_tick().iter().map(|e| e.to_string()).collect();
        println!(
            "tick {:>2}: {:<8} {}",
            ctx.clock - 1,
            status,
            emitted.join(" ")
        );
        if status != NodeStatus::Running {
            break;
        }
        // The memory sequence resumes at "walk" and does not re-check
        // "ready", so this only matters for the next run.
        catalogue.set_condition("ready", false);
    }

    tree.reset();
    println!("after reset with ready=false: {}", tree.tick(&mut ctx));
}
