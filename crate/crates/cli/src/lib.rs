//! Command-line front end: subcommands over the modeling library plus
//! the figure-preset registry.
//!
//! Exit codes: 0 success, 1 validation error, 2 numeric failure
//! (overflow, infeasible/unbounded geometry), 64 usage error.

pub mod error;
pub mod presets;
pub mod scenario;

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ethos::dynamics::{classify_equilibrium, eigen, LinearSystem};
use ethos::games::{phi_eigen, BehaviorMatrix, EigenPair};
use ethos::marker::{marker_curve, marker_value, MarkerParams};
use ethos::portrait::{format_significant, marker_chart_svg};

use error::CliError;
use scenario::{analyze_game, build_game, execute, validate_scenario, RunOutput, Scenario};

#[derive(Parser)]
#[command(
    name = "ethos",
    about = "Dilemma games, behavioral polytopes, and phase-portrait dynamics",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutDir {
    /// Directory for generated files.
    #[arg(long, default_value = "./out")]
    out: PathBuf,
}

#[derive(Args)]
struct JsonInput {
    /// Path to a JSON document, or `-` for stdin.
    #[arg(long, conflicts_with = "json")]
    file: Option<PathBuf>,
    /// Inline JSON document.
    #[arg(long)]
    json: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the behavioral-marker curve or a single marker value.
    Marker {
        /// Midpoint age.
        #[arg(long)]
        a0: f64,
        /// Transition factor.
        #[arg(long)]
        tf: f64,
        /// Circumstantial factor.
        #[arg(long)]
        cf: f64,
        /// Evaluate at this single age and print the value.
        #[arg(long)]
        at: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 100.0)]
        end: f64,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// Also emit an SVG chart next to the CSV.
        #[arg(long)]
        svg: bool,
        /// Basename for emitted files.
        #[arg(long, default_value = "marker")]
        name: String,
        #[command(flatten)]
        out: OutDir,
    },
    /// Analyze a 2x2 game given as JSON.
    Game {
        #[command(flatten)]
        input: JsonInput,
        /// Apply the forced-ethical-behavior bonus before re-analyzing.
        #[arg(long)]
        feb_bonus: Option<f64>,
    },
    /// Build a polytope from vertices or halfspaces given as JSON.
    Polytope {
        #[command(flatten)]
        input: JsonInput,
        /// Also emit a wireframe SVG.
        #[arg(long)]
        svg: bool,
        /// Basename for emitted files.
        #[arg(long, default_value = "polytope")]
        name: String,
        #[command(flatten)]
        out: OutDir,
    },
    /// Run a simulation scenario from a JSON document.
    Simulate {
        #[command(flatten)]
        input: JsonInput,
        #[command(flatten)]
        out: OutDir,
        /// Worker threads for per-trajectory computation.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Classify the equilibrium of a 2x2 system matrix.
    Classify {
        /// Matrix as JSON, e.g. "[[1,2],[3,1]]".
        #[arg(long)]
        matrix: String,
    },
    /// Eigenvalues and eigenvectors of a system or behavior matrix.
    Eigen {
        /// Matrix as JSON, e.g. "[[1,2],[3,1]]" (2x2 or 3x3).
        #[arg(long, conflicts_with_all = ["phi11", "phi21"])]
        matrix: Option<String>,
        /// Behavior-matrix first-row ethical propensity.
        #[arg(long, requires = "phi21")]
        phi11: Option<f64>,
        /// Behavior-matrix second-row ethical propensity.
        #[arg(long, requires = "phi11")]
        phi21: Option<f64>,
    },
    /// Run a named figure preset.
    Preset {
        /// Preset name, e.g. fig7a. See list-presets.
        name: String,
        #[command(flatten)]
        out: OutDir,
        /// Worker threads for per-trajectory computation.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List all presets with their parameters.
    ListPresets,
}

/// Parses arguments and runs the command, returning the process exit
/// code. Separated from `main` so tests can drive it directly.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    64
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn read_input(input: &JsonInput) -> Result<String, CliError> {
    match (&input.file, &input.json) {
        (Some(path), None) => {
            if path.as_os_str() == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| CliError::io("reading stdin", e))?;
                Ok(buf)
            } else {
                std::fs::read_to_string(path)
                    .map_err(|e| CliError::io(&format!("reading {}", path.display()), e))
            }
        }
        (None, Some(text)) => Ok(text.clone()),
        _ => Err(CliError::Validation(
            "exactly one of --file or --json is required".to_string(),
        )),
    }
}

fn parse_matrix(text: &str) -> Result<LinearSystem, CliError> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("matrix JSON: {e}")))?;
    let labels: Vec<String> = ["x", "y", "z"][..rows.len().min(3)]
        .iter()
        .map(|s| s.to_string())
        .collect();
    LinearSystem::new(rows, labels).map_err(CliError::from_dynamics)
}

fn complex_json(c: &num_complex_json::Complex) -> serde_json::Value {
    json!({"re": c.re, "im": c.im})
}

/// Minimal local mirror so the JSON layer does not depend on the
/// num-complex crate directly.
mod num_complex_json {
    pub struct Complex {
        pub re: f64,
        pub im: f64,
    }
}

fn eigenpairs_json(pairs: &[EigenPair]) -> serde_json::Value {
    json!({
        "eigenvalues": pairs
            .iter()
            .map(|p| complex_json(&num_complex_json::Complex { re: p.value.re, im: p.value.im }))
            .collect::<Vec<_>>(),
        "eigenvectors": pairs
            .iter()
            .map(|p| {
                p.vector
                    .iter()
                    .map(|c| complex_json(&num_complex_json::Complex { re: c.re, im: c.im }))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    })
}

fn write_artifacts(out_dir: &Path, output: &RunOutput) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(&format!("creating {}", out_dir.display()), e))?;
    for artifact in &output.artifacts {
        let path = out_dir.join(&artifact.filename);
        std::fs::write(&path, &artifact.contents)
            .map_err(|e| CliError::io(&format!("writing {}", path.display()), e))?;
    }
    Ok(())
}

fn run_scenario_to_dir(scenario: &Scenario, out: &Path, jobs: usize) -> Result<String, CliError> {
    let mut output = execute(scenario, jobs)?;
    write_artifacts(out, &output)?;
    output.summary["out_dir"] = json!(out.display().to_string());
    Ok(output.summary.to_string())
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Marker {
            a0,
            tf,
            cf,
            at,
            start,
            end,
            samples,
            svg,
            name,
            out,
        } => {
            let params = MarkerParams::new(a0, tf, cf).map_err(CliError::from_marker)?;
            if let Some(age) = at {
                let value = marker_value(age, &params).map_err(CliError::from_marker)?;
                return Ok(json!({"age": age, "value": value}).to_string());
            }
            if !name
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
            {
                return Err(CliError::Validation(
                    "name: must match [a-z0-9_]+".to_string(),
                ));
            }
            let curve =
                marker_curve(start, end, samples, &params).map_err(CliError::from_marker)?;
            let mut csv = String::from("age,value\n");
            for (a, v) in curve.ages.iter().zip(&curve.values) {
                csv.push_str(&format_significant(*a, 9));
                csv.push(',');
                csv.push_str(&format_significant(*v, 9));
                csv.push('\n');
            }
            let mut output = RunOutput {
                summary: json!({
                    "kind": "marker",
                    "samples": samples,
                    "files": [format!("{name}.csv")],
                }),
                artifacts: vec![scenario::Artifact {
                    filename: format!("{name}.csv"),
                    contents: csv.into_bytes(),
                }],
            };
            if svg {
                let chart = marker_chart_svg(&[(format!("cf={cf}"), curve)]);
                output.artifacts.push(scenario::Artifact {
                    filename: format!("{name}.svg"),
                    contents: chart.into_bytes(),
                });
                output.summary["files"] = json!([format!("{name}.csv"), format!("{name}.svg")]);
            }
            write_artifacts(&out.out, &output)?;
            output.summary["out_dir"] = json!(out.out.display().to_string());
            Ok(output.summary.to_string())
        }
        Command::Game { input, feb_bonus } => {
            let text = read_input(&input)?;
            let mut spec: scenario::GameScenario = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("game JSON: {e}")))?;
            if feb_bonus.is_some() {
                spec.feb_bonus = feb_bonus;
            }
            let game = build_game(&spec)?;
            let mut result = analyze_game(&game);
            if let Some(bonus) = spec.feb_bonus {
                if !bonus.is_finite() || bonus < 0.0 {
                    return Err(CliError::Validation("feb_bonus: must be >= 0".to_string()));
                }
                let transformed = ethos::games::feb_transform(&game, bonus);
                result["feb"] = json!({
                    "bonus": bonus,
                    "analysis": analyze_game(&transformed),
                });
            }
            Ok(result.to_string())
        }
        Command::Polytope {
            input,
            svg,
            name,
            out,
        } => {
            let text = read_input(&input)?;
            let file = scenario::ScenarioFile {
                name: name.clone(),
                kind: "polytope".to_string(),
                params: serde_json::from_str(&text)
                    .map_err(|e| CliError::Validation(format!("polytope JSON: {e}")))?,
            };
            let scenario = scenario::scenario_from_file(file)?;
            let mut output = execute(&scenario, 1)?;
            if !svg {
                output.artifacts.retain(|a| !a.filename.ends_with(".svg"));
                output.summary["files"] = json!(output
                    .artifacts
                    .iter()
                    .map(|a| a.filename.clone())
                    .collect::<Vec<_>>());
            }
            write_artifacts(&out.out, &output)?;
            output.summary["out_dir"] = json!(out.out.display().to_string());
            Ok(output.summary.to_string())
        }
        Command::Simulate { input, out, jobs } => {
            let text = read_input(&input)?;
            let scenario = validate_scenario(&text)?;
            run_scenario_to_dir(&scenario, &out.out, jobs)
        }
        Command::Classify { matrix } => {
            let system = parse_matrix(&matrix)?;
            let class = classify_equilibrium(&system).map_err(CliError::from_dynamics)?;
            Ok(json!({
                "kind": class.kind.name(),
                "trace": class.trace,
                "determinant": class.determinant,
                "discriminant": class.discriminant,
            })
            .to_string())
        }
        Command::Eigen {
            matrix,
            phi11,
            phi21,
        } => match (matrix, phi11, phi21) {
            (Some(text), None, None) => {
                let system = parse_matrix(&text)?;
                Ok(eigenpairs_json(&eigen(&system)).to_string())
            }
            (None, Some(p11), Some(p21)) => {
                let m = BehaviorMatrix::new(p11, p21).map_err(CliError::from_game)?;
                let pairs = phi_eigen(&m);
                Ok(eigenpairs_json(&pairs).to_string())
            }
            _ => Err(CliError::Validation(
                "provide either --matrix or both --phi11 and --phi21".to_string(),
            )),
        },
        Command::Preset { name, out, jobs } => {
            let registry = presets::registry();
            let Some(scenario) = registry.get(&name) else {
                let known: Vec<&String> = registry.keys().collect();
                return Err(CliError::Validation(format!(
                    "unknown preset {name:?}; known presets: {known:?}"
                )));
            };
            run_scenario_to_dir(scenario, &out.out, jobs)
        }
        Command::ListPresets => {
            let registry = presets::registry();
            let list: Vec<serde_json::Value> = registry
                .values()
                .map(|s| json!({"name": s.name, "kind": s.kind()}))
                .collect();
            Ok(json!({"presets": list, "table": presets::parameter_table()}).to_string())
        }
    }
}
