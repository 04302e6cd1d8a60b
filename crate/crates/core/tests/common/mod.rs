//! Independent oracles and fixtures shared by the integration tests and the
//! acceptance runner.

#![allow(dead_code)]

use std::cell::{Cell, RefCell};
use std::fs;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::Rng;
use shutter::dsl::{parse_scenario, ScenarioScript};
use shutter::sim::TickRecord;
use shutter::world::{Action, Button, PersonObservation};
use shutter::{Catalogue, Event, EventKind, InteractionContext, NodeKind, NodeStatus, TreeNode};

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn load_scenario(name: &str) -> ScenarioScript {
    let path = crate_dir().join("scenarios").join(format!("{name}.scn"));
    parse_scenario(&fs::read_to_string(&path).unwrap()).unwrap()
}

/// Scenarios without abandonment mid-interaction or interruptions.
pub const NOMINAL: [&str; 6] = [
    "solo",
    "solo_slow_consent",
    "pair",
    "trio",
    "trio_with_bystander",
    "decline",
];

// ---------------------------------------------------------------------------
// Behavior-tree oracle
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comp {
    Seq,
    SeqMem,
    Fb,
    FbMem,
    Par,
}

impl Comp {
    pub const ROOTS: [Comp; 5] = [Comp::Seq, Comp::SeqMem, Comp::Fb, Comp::FbMem, Comp::Par];
    /// Memory variants behave like their plain forms on a first tick, so the
    /// single-tick enumeration leaves them out below the root.
    pub const INNER: [Comp; 3] = [Comp::Seq, Comp::Fb, Comp::Par];
    pub const ALL: [Comp; 5] = Comp::ROOTS;
}

/// A tree shape whose leaves are numbered left to right.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Leaf(usize),
    Node(Comp, Vec<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf(_) => 1,
            Shape::Node(_, c) => c.iter().map(Shape::leaves).sum(),
        }
    }

    /// Engine tree whose leaf `i` is the action `l<i>`.
    pub fn to_tree(&self) -> TreeNode {
        match self {
            Shape::Leaf(i) => TreeNode::action(format!("l{i}")),
            Shape::Node(comp, children) => {
                let kids = children.iter().map(Shape::to_tree).collect();
                let kind = match comp {
                    Comp::Seq => NodeKind::Sequence { memory: false },
                    Comp::SeqMem => NodeKind::Sequence { memory: true },
                    Comp::Fb => NodeKind::Fallback { memory: false },
                    Comp::FbMem => NodeKind::Fallback { memory: true },
                    Comp::Par => NodeKind::Parallel,
                };
                TreeNode::from_parts(kind, Some("n".into()), kids)
            }
        }
    }
}

/// Child templates: a leaf, or an inner composite with 1..=3 leaves.
fn child_templates(inner: &[Comp]) -> Vec<Option<(Comp, usize)>> {
    let mut out = vec![None];
    for &comp in inner {
        for k in 1..=3 {
            out.push(Some((comp, k)));
        }
    }
    out
}

/// Every shape of depth ≤ 2 with at most three children per composite.
pub fn enumerate_shapes(roots: &[Comp], inner: &[Comp]) -> Vec<Shape> {
    let templates = child_templates(inner);
    let mut lists: Vec<Vec<Option<(Comp, usize)>>> = Vec::new();
    for n in 1..=3usize {
        let mut idx = vec![0usize; n];
        loop {
            lists.push(idx.iter().map(|&i| templates[i]).collect());
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < templates.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    let mut shapes = Vec::new();
    for &root in roots {
        for list in &lists {
            let mut next = 0;
            let mut children = Vec::new();
            for t in list {
                match t {
                    None => {
                        children.push(Shape::Leaf(next));
                        next += 1;
                    }
                    Some((comp, k)) => {
                        let leaves = (next..next + k).map(Shape::Leaf).collect();
                        next += k;
                        children.push(Shape::Node(*comp, leaves));
                    }
                }
            }
            shapes.push(Shape::Node(root, children));
        }
    }
    shapes
}

/// Persistent oracle state mirroring the shape.
#[derive(Debug, Clone, Default)]
pub struct OracleState {
    resume: usize,
    running: Option<usize>,
    children: Vec<OracleState>,
}

impl OracleState {
    pub fn for_shape(shape: &Shape) -> Self {
        match shape {
            Shape::Leaf(_) => Self::default(),
            Shape::Node(_, c) => Self {
                children: c.iter().map(Self::for_shape).collect(),
                ..Self::default()
            },
        }
    }

    fn clear(&mut self) {
        self.resume = 0;
        self.running = None;
        for c in &mut self.children {
            c.clear();
        }
    }
}

use NodeStatus::{Failure, Running, Success};

/// Straightforward recursive evaluator written from the node definitions.
/// Records the order in which leaves are visited.
pub fn oracle_tick(
    shape: &Shape,
    st: &mut OracleState,
    leaf: &[NodeStatus],
    visited: &mut Vec<usize>,
) -> NodeStatus {
    match shape {
        Shape::Leaf(i) => {
            visited.push(*i);
            leaf[*i]
        }
        Shape::Node(Comp::Par, children) => {
            let statuses: Vec<NodeStatus> = children
                .iter()
                .zip(st.children.iter_mut())
                .map(|(c, s)| oracle_tick(c, s, leaf, visited))
                .collect();
            let result = if statuses.contains(&Failure) {
                Failure
            } else if statuses.iter().all(|&s| s == Success) {
                Success
            } else {
                Running
            };
            if result == Running {
                st.running = statuses.iter().position(|&s| s == Running);
            } else {
                st.clear();
            }
            result
        }
        Shape::Node(comp, children) => {
            let (memory, keep_going) = match comp {
                Comp::Seq => (false, Success),
                Comp::SeqMem => (true, Success),
                Comp::Fb => (false, Failure),
                Comp::FbMem => (true, Failure),
                Comp::Par => unreachable!(),
            };
            let start = if memory { st.resume } else { 0 };
            let mut result = keep_going;
            let mut now_running = None;
            for (i, (child, child_st)) in children
                .iter()
                .zip(st.children.iter_mut())
                .enumerate()
                .skip(start)
            {
                let s = oracle_tick(child, child_st, leaf, visited);
                if s == keep_going {
                    continue;
                }
                result = s;
                if s == Running {
                    now_running = Some(i);
                }
                break;
            }
            if let Some(prev) = st.running {
                if Some(prev) != now_running {
                    st.children[prev].clear();
                }
            }
            st.running = now_running;
            st.resume = if memory { now_running.unwrap_or(0) } else { 0 };
            result
        }
    }
}

/// Leaves `l0..l8` report whatever status is currently stored for them.
pub struct StubLeaves {
    pub status: [Cell<NodeStatus>; 9],
    pub visited: RefCell<Vec<usize>>,
}

impl Default for StubLeaves {
    fn default() -> Self {
        Self {
            status: std::array::from_fn(|_| Cell::new(Success)),
            visited: RefCell::new(Vec::new()),
        }
    }
}

impl StubLeaves {
    fn index(name: &str) -> Option<usize> {
        let rest = name.strip_prefix('l')?;
        let i: usize = rest.parse().ok()?;
        (i < 9).then_some(i)
    }

    pub fn set(&self, statuses: &[NodeStatus]) {
        for (cell, s) in self.status.iter().zip(statuses) {
            cell.set(*s);
        }
    }
}

impl Catalogue for StubLeaves {
    fn has_condition(&self, _name: &str) -> bool {
        false
    }

    fn behavior_duration(&self, name: &str) -> Option<u32> {
        Self::index(name).map(|_| 1)
    }

    fn evaluate(&self, _name: &str, _ctx: &InteractionContext) -> bool {
        false
    }

    fn perform(&self, name: &str, _step: u32, _ctx: &mut InteractionContext) -> Option<NodeStatus> {
        let i = Self::index(name)?;
        self.visited.borrow_mut().push(i);
        Some(self.status[i].get())
    }
}

/// Decodes `code` as `n` base-3 digits of statuses.
pub fn statuses_from(code: usize, n: usize) -> Vec<NodeStatus> {
    let mut out = Vec::with_capacity(n);
    fill_statuses(code, n, &mut out);
    out
}

fn fill_statuses(mut code: usize, n: usize, out: &mut Vec<NodeStatus>) {
    out.clear();
    for _ in 0..n {
        out.push([Success, Running, Failure][code % 3]);
        code /= 3;
    }
}

#[derive(Debug, Default)]
pub struct OracleOutcome {
    pub cases: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<String>,
}

impl OracleOutcome {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_mismatch.is_none() {
                self.first_mismatch = Some(describe());
            }
        }
    }
}

/// Single tick from a clear state, every status combination of every shape.
pub fn run_single_tick_oracle(roots: &[Comp], inner: &[Comp]) -> OracleOutcome {
    let leaves = StubLeaves::default();
    let mut ctx = InteractionContext::new();
    let mut out = OracleOutcome::default();
    for shape in enumerate_shapes(roots, inner) {
        let n = shape.leaves();
        let mut tree = shape.to_tree();
        let mut st = OracleState::for_shape(&shape);
        let mut statuses = Vec::new();
        let mut visited = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            fill_statuses(code, n, &mut statuses);
            leaves.set(&statuses);
            leaves.visited.borrow_mut().clear();
            tree.reset();
            let got = tree.tick(&leaves, &mut ctx);
            st.clear();
            visited.clear();
            let want = oracle_tick(&shape, &mut st, &statuses, &mut visited);
            let ok = got == want && *leaves.visited.borrow() == visited;
            out.record(ok, || {
                format!("{shape:?} {statuses:?}: engine {got} oracle {want}")
            });
        }
    }
    out
}

/// Two consecutive ticks with independent statuses, for shapes with at most
/// `max_leaves` leaves. Exercises memory and the reset-on-switch rule.
pub fn run_two_tick_oracle(roots: &[Comp], inner: &[Comp], max_leaves: usize) -> OracleOutcome {
    let leaves = StubLeaves::default();
    let mut ctx = InteractionContext::new();
    let mut out = OracleOutcome::default();
    for shape in enumerate_shapes(roots, inner)
        .into_iter()
        .filter(|s| s.leaves() <= max_leaves)
    {
        let n = shape.leaves();
        let mut tree = shape.to_tree();
        let mut st = OracleState::for_shape(&shape);
        let mut statuses = Vec::new();
        let mut visited = Vec::new();
        let combos = 3usize.pow(n as u32);
        for first in 0..combos {
            for second in 0..combos {
                tree.reset();
                st.clear();
                let mut ok = true;
                let mut results = [(Success, Success); 2];
                for (slot, code) in [first, second].into_iter().enumerate() {
                    fill_statuses(code, n, &mut statuses);
                    leaves.set(&statuses);
                    leaves.visited.borrow_mut().clear();
                    let got = tree.tick(&leaves, &mut ctx);
                    visited.clear();
                    let want = oracle_tick(&shape, &mut st, &statuses, &mut visited);
                    ok &= got == want && *leaves.visited.borrow() == visited;
                    results[slot] = (got, want);
                }
                out.record(ok, || {
                    format!(
                        "{shape:?} {:?} then {:?}: engine/oracle {results:?}",
                        statuses_from(first, n),
                        statuses_from(second, n)
                    )
                });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Group oracle
// ---------------------------------------------------------------------------

/// Connected components by depth-first search over the full pair matrix.
pub fn brute_force_components(persons: &[PersonObservation], threshold: f64) -> Vec<Vec<u32>> {
    let n = persons.len();
    let near = |i: usize, j: usize| {
        let dx = persons[i].x - persons[j].x;
        let dy = persons[i].y - persons[j].y;
        (dx * dx + dy * dy).sqrt() <= threshold
    };
    let mut seen = vec![false; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(persons[i].person_id);
            for (j, seen_j) in seen.iter_mut().enumerate() {
                if !*seen_j && near(i, j) {
                    *seen_j = true;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups.sort();
    groups
}

// ---------------------------------------------------------------------------
// Random trees for the text format
// ---------------------------------------------------------------------------

const CONDITIONS: [&str; 6] = [
    "person_detected",
    "no_person",
    "no_hazard",
    "network_up",
    "button_yes",
    "cooling_down",
];
const BEHAVIORS: [&str; 7] = [
    "idle",
    "greet",
    "await_consent",
    "announce",
    "take_photo",
    "show_and_praise",
    "farewell",
];

/// A random valid tree of depth ≤ `depth` and fan-out ≤ 4 with names from
/// the photographer catalogue.
pub fn random_tree(rng: &mut StdRng, depth: usize) -> TreeNode {
    let label = format!("n{}", rng.gen_range(0..1000));
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            TreeNode::condition(CONDITIONS[rng.gen_range(0..CONDITIONS.len())])
        } else {
            let name = BEHAVIORS[rng.gen_range(0..BEHAVIORS.len())];
            let duration = rng.gen_bool(0.5).then(|| rng.gen_range(1..=5));
            TreeNode::from_parts(
                NodeKind::Action {
                    behavior: name.into(),
                    duration,
                },
                None,
                vec![],
            )
        };
    }
    let kind = match rng.gen_range(0..6) {
        0 => NodeKind::Sequence { memory: false },
        1 => NodeKind::Sequence { memory: true },
        2 => NodeKind::Fallback { memory: false },
        3 => NodeKind::Fallback { memory: true },
        4 => NodeKind::Parallel,
        _ => NodeKind::Guard {
            condition: CONDITIONS[rng.gen_range(0..CONDITIONS.len())].into(),
        },
    };
    let fan_out = if matches!(kind, NodeKind::Guard { .. }) {
        1
    } else {
        rng.gen_range(1..=4)
    };
    let children = (0..fan_out).map(|_| random_tree(rng, depth - 1)).collect();
    TreeNode::from_parts(kind, Some(label), children)
}

// ---------------------------------------------------------------------------
// Scenario sweeps
// ---------------------------------------------------------------------------

pub fn solo_events(consent_at: u64) -> Vec<Event> {
    vec![
        Event::new(
            0,
            EventKind::PersonAppear {
                id: 1,
                x: 1.0,
                y: 0.5,
            },
        ),
        Event::new(consent_at, EventKind::ButtonPress(Button::Yes)),
    ]
}

/// A record shows the waiting branch when its only emission is `idle`.
pub fn is_waiting(record: &TickRecord) -> bool {
    record.emissions.len() == 1 && record.emissions[0].action == Action::Idle
}

/// Photo indices emitted in a trace, in order.
pub fn photo_indices(trace: &[TickRecord]) -> Vec<String> {
    trace
        .iter()
        .flat_map(|r| &r.emissions)
        .filter(|e| e.action == Action::TakePhoto)
        .map(|e| e.payload.to_string())
        .collect()
}

/// Photos emitted on ticks where the hazard was active.
pub fn photos_during_hazard(trace: &[TickRecord]) -> usize {
    trace
        .iter()
        .filter(|r| r.hazard)
        .flat_map(|r| &r.emissions)
        .filter(|e| e.action == Action::TakePhoto)
        .count()
}

/// Files in the malformed corpus with the line named in their first-line
/// `# error-line: N` comment.
pub fn malformed_corpus() -> Vec<(PathBuf, usize, String)> {
    let dir = crate_dir().join("tests/data/malformed");
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            let line = text
                .lines()
                .next()
                .and_then(|l| l.strip_prefix("# error-line: "))
                .and_then(|n| n.trim().parse().ok())
                .unwrap_or_else(|| panic!("{} lacks an error-line header", p.display()));
            (p, line, text)
        })
        .collect();
    out.sort();
    out
}

pub fn extension(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

/// Seeded random status sequences of `ticks` ticks, `runs` per shape.
pub fn run_random_multi_tick(
    roots: &[Comp],
    inner: &[Comp],
    runs: usize,
    ticks: usize,
    seed: u64,
) -> OracleOutcome {
    use rand::SeedableRng;

    let mut rng = StdRng::seed_from_u64(seed);
    let leaves = StubLeaves::default();
    let mut ctx = InteractionContext::new();
    let mut out = OracleOutcome::default();
    for shape in enumerate_shapes(roots, inner) {
        let n = shape.leaves();
        let mut tree = shape.to_tree();
        let mut st = OracleState::for_shape(&shape);
        let mut visited = Vec::new();
        for _ in 0..runs {
            tree.reset();
            st.clear();
            let codes: Vec<usize> = (0..ticks)
                .map(|_| rng.gen_range(0..3usize.pow(n as u32)))
                .collect();
            let mut ok = true;
            for &code in &codes {
                let statuses = statuses_from(code, n);
                leaves.set(&statuses);
                leaves.visited.borrow_mut().clear();
                let got = tree.tick(&leaves, &mut ctx);
                visited.clear();
                let want = oracle_tick(&shape, &mut st, &statuses, &mut visited);
                ok &= got == want && *leaves.visited.borrow() == visited;
            }
            out.record(ok, || {
                let seq: Vec<_> = codes.iter().map(|&c| statuses_from(c, n)).collect();
                format!("{shape:?} over {seq:?}")
            });
        }
    }
    out
}
