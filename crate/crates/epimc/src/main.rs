use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use epimc::bisim::{bisim_classes, is_bisimilar};
use epimc::mc::{check_quantified, global_mc, truthset_quantified};
use epimc::model::{KripkeModel, RawModel};
use epimc::qbf::{eval_qbf, encode, solve_by_model_checking, QbfInstance};
use epimc::syntax::{parse_formula, print_formula};
use epimc::translate::translate;
use epimc::updates::{pa_edge_update, pa_world_update, partial_comm_update};

#[derive(Parser)]
#[command(
    name = "epimc",
    about = "Model checking for epistemic logic with distributed knowledge and partial communication",
    after_help = "Exit codes: 0 = true/ok, 1 = false/violations, 2 = error.\n\
                  EPIMC_SEED fixes the seed used by the library's random generators."
)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// Model JSON file.
    #[arg(short, long)]
    model: String,
}

#[derive(Subcommand)]
enum Command {
    /// Truth of a formula at a world (full language, quantifiers included).
    Check {
        #[command(flatten)]
        model: ModelArg,
        /// Evaluation world; defaults to the model's point.
        #[arg(short, long)]
        world: Option<String>,
        #[arg(short, long)]
        formula: String,
    },
    /// All worlds satisfying a communication-fragment formula.
    GlobalCheck {
        #[command(flatten)]
        model: ModelArg,
        #[arg(short, long)]
        formula: String,
    },
    /// Apply a communication or announcement update, printing the result.
    Update {
        #[command(flatten)]
        model: ModelArg,
        /// Sharing group, comma-separated (may be empty).
        #[arg(long, conflicts_with = "announce")]
        share: Option<String>,
        /// Topic formula for --share.
        #[arg(long, requires = "share")]
        topic: Option<String>,
        /// Announced formula (edge-deleting announcement).
        #[arg(long)]
        announce: Option<String>,
        /// With --announce: remove the refuting worlds instead of edges.
        #[arg(long, requires = "announce")]
        worlds: bool,
    },
    /// Collective bisimilarity of two pointed models.
    Bisim {
        #[arg(long)]
        m1: String,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        m2: String,
        #[arg(long)]
        w2: String,
        /// Atoms to respect, comma-separated; defaults to all atoms used.
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Collective bisimulation classes of a model.
    Classes {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Rewrite update modalities away, leaving distributed knowledge only.
    Translate {
        #[arg(short, long)]
        formula: String,
    },
    /// Decide a QBF instance twice: brute force and via the encoding.
    Qbf {
        /// Instance file: `forall x1 exists x2 : (x1 <-> x2)`.
        #[arg(short, long)]
        instance: String,
        /// Also print the gadget model.
        #[arg(long)]
        emit_model: bool,
    },
    /// Check a model file for format violations.
    Validate {
        #[command(flatten)]
        model: ModelArg,
    },
}

fn load_model(path: &str) -> Result<(KripkeModel, Option<String>), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let raw = RawModel::from_json(&text).map_err(|e| e.to_string())?;
    raw.build().map_err(|e| e.to_string())
}

fn parse_atoms(spec: &Option<String>, fallback: BTreeSet<String>) -> BTreeSet<String> {
    match spec {
        None => fallback,
        Some(s) => s
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(str::to_string)
            .collect(),
    }
}

fn parse_group(spec: &str) -> BTreeSet<String> {
    spec.split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(str::to_string)
        .collect()
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Check { model, world, formula } => {
            let (m, point) = load_model(&model.model)?;
            let w = world
                .clone()
                .or(point)
                .ok_or_else(|| "no world given and the model has no point".to_string())?;
            let f = parse_formula(formula).map_err(|e| e.to_string())?;
            let result = if f.has_quantifier() {
                check_quantified(&m, &w, &f)
            } else {
                epimc::semantics::eval(&m, &w, &f)
            }
            .map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", json!({ "result": result }));
            } else {
                println!("{result}");
            }
            Ok(if result { 0 } else { 1 })
        }
        Command::GlobalCheck { model, formula } => {
            let (m, _) = load_model(&model.model)?;
            let f = parse_formula(formula).map_err(|e| e.to_string())?;
            let worlds = global_mc(&m, &f).map_err(|e| e.to_string())?.truthset();
            if cli.json {
                println!("{}", json!({ "worlds": worlds }));
            } else {
                for w in worlds {
                    println!("{w}");
                }
            }
            Ok(0)
        }
        Command::Update { model, share, topic, announce, worlds } => {
            let (m, point) = load_model(&model.model)?;
            let updated = match (share, announce) {
                (Some(group), None) => {
                    let topic = topic
                        .as_ref()
                        .ok_or_else(|| "--share requires --topic".to_string())?;
                    let chi = parse_formula(topic).map_err(|e| e.to_string())?;
                    let t = truthset_quantified(&m, &chi).map_err(|e| e.to_string())?;
                    partial_comm_update(&m, &parse_group(group), &t).map_err(|e| e.to_string())?
                }
                (None, Some(announced)) => {
                    let xi = parse_formula(announced).map_err(|e| e.to_string())?;
                    let t = truthset_quantified(&m, &xi).map_err(|e| e.to_string())?;
                    if *worlds {
                        pa_world_update(&m, &t).map_err(|e| e.to_string())?
                    } else {
                        pa_edge_update(&m, &t).map_err(|e| e.to_string())?
                    }
                }
                _ => return Err("exactly one of --share or --announce is required".to_string()),
            };
            let point = point.filter(|p| updated.has_world(p));
            println!("{}", updated.to_raw(point.as_deref()).to_json());
            Ok(0)
        }
        Command::Bisim { m1, w1, m2, w2, atoms } => {
            let (model1, _) = load_model(m1)?;
            let (model2, _) = load_model(m2)?;
            let all_atoms: BTreeSet<String> =
                model1.atoms().union(&model2.atoms()).cloned().collect();
            let atoms = parse_atoms(atoms, all_atoms);
            let result =
                is_bisimilar(&model1, w1, &model2, w2, &atoms).map_err(|e| e.to_string())?;
            let union = model1.disjoint_union(&model2);
            let classes = bisim_classes(&union, &atoms);
            if cli.json {
                println!(
                    "{}",
                    json!({ "bisimilar": result, "union_blocks": classes.blocks })
                );
            } else {
                println!("{result}");
                for block in &classes.blocks {
                    let names: Vec<&str> = block.iter().map(String::as_str).collect();
                    println!("{{{}}}", names.join(", "));
                }
            }
            Ok(if result { 0 } else { 1 })
        }
        Command::Classes { model, atoms } => {
            let (m, _) = load_model(&model.model)?;
            let atoms = parse_atoms(atoms, m.atoms());
            let classes = bisim_classes(&m, &atoms);
            let formulas: Vec<String> = classes.formulas.iter().map(print_formula).collect();
            if cli.json {
                println!(
                    "{}",
                    json!({ "blocks": classes.blocks, "formulas": formulas })
                );
            } else {
                for (block, f) in classes.blocks.iter().zip(&formulas) {
                    let names: Vec<&str> = block.iter().map(String::as_str).collect();
                    println!("{{{}}}  {f}", names.join(", "));
                }
            }
            Ok(0)
        }
        Command::Translate { formula } => {
            let f = parse_formula(formula).map_err(|e| e.to_string())?;
            let t = translate(&f).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", json!({ "formula": print_formula(&t) }));
            } else {
                println!("{}", print_formula(&t));
            }
            Ok(0)
        }
        Command::Qbf { instance, emit_model } => {
            let text = fs::read_to_string(instance)
                .map_err(|e| format!("cannot read {instance}: {e}"))?;
            let inst = QbfInstance::parse(text.trim()).map_err(|e| e.to_string())?;
            let oracle = eval_qbf(&inst);
            let encoded = solve_by_model_checking(&inst).map_err(|e| e.to_string())?;
            if oracle != encoded {
                return Err(format!(
                    "verdict mismatch: brute force says {oracle}, encoding says {encoded}"
                ));
            }
            if cli.json {
                let mut obj = json!({ "oracle": oracle, "encoded": encoded });
                if *emit_model {
                    let (m, point, f) = encode(&inst);
                    obj["model"] =
                        serde_json::from_str(&m.to_raw(Some(&point)).to_json()).unwrap();
                    obj["formula"] = json!(print_formula(&f));
                }
                println!("{obj}");
            } else {
                println!("oracle: {oracle}");
                println!("encoded: {encoded}");
                if *emit_model {
                    let (m, point, f) = encode(&inst);
                    println!("formula: {}", print_formula(&f));
                    println!("{}", m.to_raw(Some(&point)).to_json());
                }
            }
            Ok(if encoded { 0 } else { 1 })
        }
        Command::Validate { model } => {
            let text = fs::read_to_string(&model.model)
                .map_err(|e| format!("cannot read {}: {e}", model.model))?;
            let raw = RawModel::from_json(&text).map_err(|e| e.to_string())?;
            let violations = raw.validate();
            if cli.json {
                println!("{}", json!({ "violations": violations }));
            } else if violations.is_empty() {
                println!("ok");
            } else {
                for v in &violations {
                    println!("{v}");
                }
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            if cli.json {
                println!("{}", json!({ "error": message }));
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(2)
        }
    }
}
