//! Acceptance runner: one PASS/FAIL line per criterion.

mod common;

use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use shutter::dsl::{parse_scenario, parse_tree, print_tree, ScenarioError, ScenarioScript};
use shutter::group::cluster_groups;
use shutter::interaction::{
    build_photographer_bt, build_photographer_bt_with, build_photographer_fsm, greeting_text,
    structural_economy_report, Abandonment, BtOptions, InteractionParams, PhotographerCatalogue,
};
use shutter::sim::{compare, run, Controller, TickRecord};
use shutter::world::{Action, PersonObservation};
use shutter::{Event, EventKind};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn bt_semantics() -> Verdict {
    let single = run_single_tick_oracle(&Comp::ROOTS, &Comp::INNER);
    let double = run_two_tick_oracle(&Comp::ROOTS, &Comp::ALL, 3);
    let random = run_random_multi_tick(&Comp::ROOTS, &Comp::ALL, 4, 6, 0xacce97);
    let cases = single.cases + double.cases + random.cases;
    let mismatches = single.mismatches + double.mismatches + random.mismatches;
    let first = [
        single.first_mismatch,
        double.first_mismatch,
        random.first_mismatch,
    ]
    .into_iter()
    .flatten()
    .next();
    verdict(
        mismatches == 0 && single.cases >= 1000,
        format!(
            "{} single-tick, {} two-tick, {} six-tick cases; {mismatches}/{cases} mismatches{}",
            single.cases,
            double.cases,
            random.cases,
            first.map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

/// The solo scenario from the corpus without its leave event.
fn solo_base() -> ScenarioScript {
    let mut s = load_scenario("solo");
    s.events
        .retain(|e| !matches!(e.kind, EventKind::PersonLeave { .. }));
    s
}

fn with_events(base: &ScenarioScript, extra: Vec<Event>) -> ScenarioScript {
    let mut events = base.events.clone();
    events.extend(extra);
    ScenarioScript::new(base.name.clone(), base.duration, events)
}

/// First and last tick of the first interaction episode.
fn interaction_window(trace: &[TickRecord]) -> (u64, u64) {
    let start = trace.iter().position(|r| !is_waiting(r)).unwrap();
    let end = trace[start..]
        .iter()
        .position(is_waiting)
        .map_or(trace.len(), |i| start + i)
        - 1;
    (start as u64, end as u64)
}

fn abandonment_reactivity() -> Verdict {
    let base = solo_base();
    let mut bt = Controller::photographer_bt();
    let full = run(&mut bt, &base).unwrap();
    let (start, end) = interaction_window(&full);
    let mut sweeps = 0;
    let mut ok = 0;
    let mut failures = Vec::new();
    for last_present in start..=end {
        let gone = last_present + 1;
        let trace = run(
            &mut bt,
            &with_events(
                &base,
                vec![Event::new(gone, EventKind::PersonLeave { id: 1 })],
            ),
        )
        .unwrap();
        sweeps += 1;
        let interacting_before = !is_waiting(&trace[last_present as usize]);
        let waiting_after = trace[gone as usize..]
            .iter()
            .all(|r| is_waiting(r) && r.status == "success");
        if interacting_before && waiting_after {
            ok += 1;
        } else {
            failures.push(last_present);
        }
    }
    verdict(
        sweeps > 0 && ok == sweeps,
        format!("window ticks {start}..={end}: {ok}/{sweeps} sweeps show the waiting branch 1 tick after the last sighting{}",
            if failures.is_empty() { String::new() } else { format!(" (failed at {failures:?})") }),
    )
}

fn interruption_resume() -> Verdict {
    let base = solo_base();
    let mut total = 0;
    let mut ok = 0;
    let mut details = Vec::new();
    for photo_ticks in [1, 2] {
        let params = InteractionParams {
            photo_ticks,
            ..InteractionParams::default()
        };
        let mut bt = Controller::bt(
            build_photographer_bt_with(&params, BtOptions::default()),
            PhotographerCatalogue::new(params.clone()),
        )
        .unwrap();
        let nominal = run(&mut bt, &base).unwrap();
        let photo_ticks_seen: Vec<u64> = nominal
            .iter()
            .filter(|r| r.emissions.iter().any(|e| e.action == Action::TakePhoto))
            .map(|r| r.tick)
            .collect();
        let (first, last) = (photo_ticks_seen[0], *photo_ticks_seen.last().unwrap());
        let mut count = 0;
        for len in 1..=5u64 {
            // every window overlapping the photo phase
            for start in first.saturating_sub(len - 1).max(1)..=last {
                let s = with_events(
                    &base,
                    vec![
                        Event::new(start, EventKind::HazardOn),
                        Event::new(start + len, EventKind::HazardOff),
                    ],
                );
                let trace = run(&mut bt, &s).unwrap();
                total += 1;
                count += 1;
                if photo_indices(&trace) == ["1", "2", "3"] && photos_during_hazard(&trace) == 0 {
                    ok += 1;
                }
            }
        }
        details.push(format!(
            "photo_ticks={photo_ticks}: phase {first}..={last}, {count} windows"
        ));
    }
    verdict(
        ok == total,
        format!(
            "{ok}/{total} windows keep photos 1,2,3 in order with none during hazard ({})",
            details.join("; ")
        ),
    )
}

fn structural_economy() -> Verdict {
    let report = structural_economy_report();
    // recount here from the built artifacts
    let with = build_photographer_bt();
    let without = build_photographer_bt_with(
        &InteractionParams::default(),
        BtOptions {
            abandonment: false,
            halt: true,
        },
    );
    let bt_delta = with.control_node_count() - without.control_node_count();
    let none = build_photographer_fsm(Abandonment::None).count_elements();
    let trans = build_photographer_fsm(Abandonment::Transitions).count_elements();
    let touts = build_photographer_fsm(Abandonment::Timeouts).count_elements();
    let non_waiting = none.n_states - 1;
    let pass = bt_delta == 1
        && report.bt_nodes_added_for_abandonment == 1
        && trans.n_transitions - none.n_transitions == non_waiting
        && report.fsm_transitions_added_for_abandonment == non_waiting
        && non_waiting == 7
        && touts.n_timeouts == 7
        && touts.n_transitions == none.n_transitions
        && report.fsm_timeouts_added_for_abandonment == 7;
    verdict(
        pass,
        format!(
            "BT +{} control node; FSM +{} transitions or +{} timeouts for {} non-waiting states",
            report.bt_nodes_added_for_abandonment,
            report.fsm_transitions_added_for_abandonment,
            report.fsm_timeouts_added_for_abandonment,
            report.fsm_non_waiting_states
        ),
    )
}

fn architecture_equivalence() -> Verdict {
    let mut bt = Controller::photographer_bt();
    let mut fsm = Controller::photographer_fsm(Abandonment::Transitions);
    let mut equivalent = 0;
    let mut sizes = std::collections::BTreeSet::new();
    let mut declines = 0;
    let mut failures = Vec::new();
    for name in NOMINAL {
        let s = load_scenario(name);
        let a = run(&mut bt, &s).unwrap();
        let b = run(&mut fsm, &s).unwrap();
        let report = compare(&a, &b);
        if report.equivalent {
            equivalent += 1;
        } else {
            failures.push(format!("{name}: {report}"));
        }
        for e in a.iter().flat_map(|r| &r.emissions) {
            let text = e.to_string();
            for n in 1..=3 {
                if greeting_text(n).is_ok_and(|g| text == format!("say({g})")) {
                    sizes.insert(n);
                }
            }
            declines += usize::from(text.contains("Maybe next time!"));
        }
    }
    let covered = sizes == [1, 2, 3].into() && declines > 0;
    verdict(
        equivalent == NOMINAL.len() && NOMINAL.len() >= 5 && covered,
        format!(
            "{equivalent}/{} nominal scenarios equivalent; group sizes {sizes:?}; decline covered: {}{}",
            NOMINAL.len(),
            declines > 0,
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) }
        ),
    )
}

fn greeting_adaptation() -> Verdict {
    const WORDS: [&str; 11] = [
        "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    ];
    let mut ok = 0;
    for n in 1..=100u32 {
        let expected = match n {
            1 => "Would you like me to take your photo?".to_owned(),
            2..=12 => format!(
                "Would you like me to take a photo of the {} of you?",
                WORDS[n as usize - 2]
            ),
            _ => format!("Would you like me to take a photo of the {n} of you?"),
        };
        ok += usize::from(greeting_text(n).ok() == Some(expected));
    }
    let verbatim = greeting_text(1).unwrap() == "Would you like me to take your photo?"
        && greeting_text(3)
            .unwrap()
            .ends_with("a photo of the three of you?");
    let zero_rejected = greeting_text(0).is_err();
    verdict(
        ok == 100 && verbatim && zero_rejected,
        format!(
            "{ok}/100 template matches; verbatim n=1,3: {verbatim}; n=0 rejected: {zero_rejected}"
        ),
    )
}

fn group_clustering() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x9a0c);
    let instances = 2000;
    let mut ok = 0;
    for _ in 0..instances {
        let n = rng.gen_range(0..=8);
        let spread = rng.gen_range(1.0..6.0);
        let persons: Vec<PersonObservation> = (1..=n)
            .map(|id| {
                PersonObservation::new(
                    id,
                    rng.gen_range(-spread..spread),
                    rng.gen_range(-spread..spread),
                )
            })
            .collect();
        let threshold = rng.gen_range(0.2..2.5);
        let mut got: Vec<Vec<u32>> = cluster_groups(&persons, threshold)
            .into_iter()
            .map(|c| c.members)
            .collect();
        got.sort();
        ok += usize::from(got == brute_force_components(&persons, threshold));
    }
    verdict(
        ok == instances,
        format!("{ok}/{instances} random instances (n <= 8) match brute-force components"),
    )
}

fn dsl_round_trip() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0xd51);
    let trees = 600;
    let mut ok = 0;
    for _ in 0..trees {
        let mut t = random_tree(&mut rng, 4);
        t.assign_ids();
        ok += usize::from(parse_tree(&print_tree(&t)).is_ok_and(|back| back.same_structure(&t)));
    }
    let photographer = build_photographer_bt();
    let reference =
        parse_tree(&print_tree(&photographer)).is_ok_and(|b| b.same_structure(&photographer));

    let corpus = malformed_corpus();
    let mut lines_ok = 0;
    let mut wrong = Vec::new();
    for (path, line, text) in &corpus {
        let reported = match extension(path) {
            "scn" => match parse_scenario(text) {
                Err(ScenarioError::Parse(e)) => Some(e.line),
                _ => None,
            },
            _ => parse_tree(text).err().map(|e| e.line),
        };
        if reported == Some(*line) {
            lines_ok += 1;
        } else {
            wrong.push(format!(
                "{} -> {reported:?}",
                path.file_name().unwrap().to_string_lossy()
            ));
        }
    }
    verdict(
        ok == trees && reference && lines_ok == corpus.len() && !corpus.is_empty(),
        format!(
            "{ok}/{trees} random trees; photographer tree: {reference}; malformed corpus {lines_ok}/{} correct lines{}",
            corpus.len(),
            if wrong.is_empty() { String::new() } else { format!(" {wrong:?}") }
        ),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut checked = 0;
    let mut identical = 0;
    let scenarios = [
        "solo",
        "pair",
        "trio_with_bystander",
        "decline",
        "abandon",
        "hazard",
        "network",
    ];
    for name in scenarios {
        for (controller, mode) in [
            ("bt", "transitions"),
            ("fsm", "transitions"),
            ("fsm", "timeouts"),
        ] {
            let mut outputs = Vec::new();
            for attempt in 0..2 {
                let out = dir
                    .path()
                    .join(format!("{name}.{controller}.{mode}.{attempt}"));
                let status = Command::new(env!("CARGO_BIN_EXE_shutter-sim"))
                    .current_dir(crate_dir())
                    .args(["run", "--controller", controller, "--fsm-mode", mode])
                    .args(["--scenario", &format!("scenarios/{name}.scn")])
                    .arg("--out")
                    .arg(&out)
                    .status()
                    .unwrap();
                outputs.push(status.success().then(|| fs::read(&out).unwrap()));
            }
            checked += 1;
            identical += usize::from(outputs[0].is_some() && outputs[0] == outputs[1]);
        }
    }
    verdict(
        identical == checked,
        format!("{identical}/{checked} repeated shutter-sim runs byte-identical"),
    )
}

type Check = fn() -> Verdict;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("BT semantics oracle", bt_semantics),
        ("Abandonment reactivity", abandonment_reactivity),
        ("Interruption resume", interruption_resume),
        ("Structural economy", structural_economy),
        ("Architecture equivalence", architecture_equivalence),
        ("Greeting adaptation", greeting_adaptation),
        ("Group clustering oracle", group_clustering),
        ("DSL round-trip", dsl_round_trip),
        ("Determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "[{}] {}. {title}: {} ({:.2}s)",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
