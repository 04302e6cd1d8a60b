use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shutter::dsl::{parse_scenario, parse_tree_checked, ScenarioScript};
use shutter::interaction::{
    build_photographer_bt, build_photographer_fsm, structural_economy_report, Abandonment,
    PhotographerCatalogue,
};
use shutter::sim::{compare, format_trace, parse_trace, run, Controller};
use shutter::TreeNode;

#[derive(Parser)]
#[command(
    name = "shutter-sim",
    version,
    about = "Run photographer controllers against scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Bt,
    Fsm,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FsmMode {
    None,
    Transitions,
    Timeouts,
}

impl From<FsmMode> for Abandonment {
    fn from(mode: FsmMode) -> Self {
        match mode {
            FsmMode::None => Abandonment::None,
            FsmMode::Transitions => Abandonment::Transitions,
            FsmMode::Timeouts => Abandonment::Timeouts,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the trace(s).
    Run {
        #[arg(long, value_enum)]
        controller: Which,
        #[arg(long)]
        scenario: PathBuf,
        /// Tree file replacing the built-in photographer tree.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "transitions")]
        fsm_mode: FsmMode,
        /// Output file. With `--controller both`, `.bt` and `.fsm` are appended.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the emissions of two trace files.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Parse and validate inputs without running.
    Check {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Print the structural cost of abandonment and halt handling.
    Report,
}

/// Failure with the exit code to report.
struct Failure(u8, String);

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<ScenarioScript, Failure> {
    parse_scenario(&read(path)?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn load_tree(path: Option<&Path>) -> Result<TreeNode, Failure> {
    match path {
        None => Ok(build_photographer_bt()),
        Some(path) => parse_tree_checked(&read(path)?, &PhotographerCatalogue::default())
            .map_err(|e| Failure(2, format!("{}: {e}", path.display()))),
    }
}

fn write_output(out: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(&path, text).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure(2, e.to_string())),
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run {
            controller,
            scenario,
            tree,
            fsm_mode,
            out,
        } => {
            let scenario = load_scenario(&scenario)?;
            let tree = load_tree(tree.as_deref())?;
            let catalogue = PhotographerCatalogue::default();
            let mut controllers = Vec::new();
            if matches!(controller, Which::Bt | Which::Both) {
                let c = Controller::bt(tree, catalogue.clone())
                    .map_err(|e| Failure(2, e.to_string()))?;
                controllers.push(("bt", c));
            }
            if matches!(controller, Which::Fsm | Which::Both) {
                let c = Controller::fsm(build_photographer_fsm(fsm_mode.into()), catalogue)
                    .map_err(|e| Failure(2, e.to_string()))?;
                controllers.push(("fsm", c));
            }
            let both = controllers.len() > 1;
            for (name, mut c) in controllers {
                let trace = run(&mut c, &scenario).map_err(|e| Failure(2, e.to_string()))?;
                let target = match (&out, both) {
                    (Some(path), true) => Some(with_extension(path, name)),
                    (out, _) => out.clone(),
                };
                write_output(target, &format_trace(&trace))?;
            }
            Ok(())
        }
        Command::Compare { a, b } => {
            let parse = |path: &Path| {
                parse_trace(&read(path)?)
                    .map_err(|e| Failure(2, format!("{}: {e}", path.display())))
            };
            let report = compare(&parse(&a)?, &parse(&b)?);
            println!("{report}");
            if report.equivalent {
                Ok(())
            } else {
                Err(Failure(1, String::new()))
            }
        }
        Command::Check { scenario, tree } => {
            let script = load_scenario(&scenario)?;
            load_tree(tree.as_deref())?;
            println!(
                "ok: scenario {} ({} ticks, {} events)",
                script.name,
                script.duration,
                script.events.len()
            );
            Ok(())
        }
        Command::Report => {
            println!("{}", structural_economy_report());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, message)) => {
            if !message.is_empty() {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}
