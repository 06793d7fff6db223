//! hflab: a desk-scale laboratory for staged set theory.
//!
//! Every subcommand evaluates against materialized finite stages or against
//! structures and category tables loaded from JSON files, prints either a
//! human summary or a machine report, and encodes its verdict in the exit
//! status: 0 for holds/true, 1 for fails or false with witness, 2 for usage
//! and resource errors. JSON output wraps the report in an envelope carrying
//! the tool version, the command line, the budgets, and the seed, and reruns
//! with identical inputs are byte-identical.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hflab_core::category::{
    build_coll, cantor_check, check_embedding, classify_size, discrete, freyd_audit,
    freyd_enumerate, functor_category, topos_audit, CategoryError, FinCategory, FreydVerdict,
};
use hflab_core::formula::{parse, Formula, FormulaError};
use hflab_core::hf::{HfError, HfSet};
use hflab_core::hierarchy::{
    build_stage, check_a2, check_a3, check_a4, check_a5, standard_safe_battery,
    universe_lemma_check, HierarchyError, SafeBatteryItem, TierConfig,
};
use hflab_core::model::{
    axiom_audit, elementary_d, satisfies_with_budget, standard_battery, AuditOptions, Assignment,
    BatteryItem, EfOutcome, ModelError, Structure, Verdict, DEFAULT_NODE_BUDGET,
};

#[derive(Parser)]
#[command(name = "hflab", version, about = "Finite stages, axiom audits, and small categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Evaluation budget in visited formula nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Cap on enumerated functions, functors, and composition tables.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    cap: u64,
    /// Seed recorded in every report; sampling, if any, derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula in a structure.
    Eval(EvalArgs),
    /// Audit the axiom battery against a structure.
    Audit(AuditArgs),
    /// Test bounded elementary equivalence of two structures.
    Ef(EfArgs),
    /// Run tier checks over a stage configuration.
    Tiers(TiersArgs),
    /// Operate on small categories.
    #[command(subcommand)]
    Cat(CatCommand),
}

#[derive(Args)]
struct EvalArgs {
    /// Structure: a stage name like V3, or a JSON file.
    #[arg(long)]
    structure: String,
    /// Formula text, or @FILE to read it from a file.
    #[arg(long)]
    formula: String,
    /// Assignment entries var=SET with the set in brace or #code notation.
    #[arg(long)]
    assign: Vec<String>,
}

#[derive(Args)]
struct AuditArgs {
    /// Structure: a stage name like V3, or a JSON file.
    structure: String,
    /// Separation battery file: a JSON array of {"id", "var", "phi"}.
    #[arg(long)]
    battery: Option<PathBuf>,
    /// Headline the literal foundation reading instead of the guarded one.
    #[arg(long)]
    literal_foundation: bool,
}

#[derive(Args)]
struct EfArgs {
    /// Smaller structure: stage name or JSON file.
    left: String,
    /// Larger structure: stage name or JSON file.
    right: String,
    /// Quantifier depth of the game.
    #[arg(long, default_value_t = 1)]
    depth: u32,
    /// Number of parameters drawn from the smaller structure.
    #[arg(long, default_value_t = 1)]
    params: u32,
}

#[derive(Args)]
struct TiersArgs {
    /// Strictly increasing stage indices, e.g. 2,3,4.
    #[arg(long)]
    config: String,
    /// Checks to run, comma separated: A2, A3, A4, A5, lemma.
    #[arg(long, value_delimiter = ',', default_value = "A2,A3,A4,A5,lemma")]
    check: Vec<String>,
    /// Separation battery file for A2 (same shape as for audit).
    #[arg(long)]
    battery: Option<PathBuf>,
    /// Game depth for A3.
    #[arg(long, default_value_t = 1)]
    depth: u32,
    /// Game parameter count for A3.
    #[arg(long, default_value_t = 1)]
    params: u32,
    /// Tier index for the A5 function sweep.
    #[arg(long, default_value_t = 0)]
    tier: usize,
}

#[derive(Subcommand)]
enum CatCommand {
    /// Build the collection category of a stage and validate it.
    Coll {
        #[arg(long)]
        stage: u32,
    },
    /// Validate a category table from a JSON file.
    Validate { file: PathBuf },
    /// Thinness audit via Hom-indexed powers, or exhaustive enumeration.
    Freyd {
        /// Category table file to audit.
        file: Option<PathBuf>,
        /// Enumerate all categories with at most OBJECTS and ARROWS.
        #[arg(long, num_args = 2, value_names = ["OBJECTS", "ARROWS"])]
        enumerate: Option<Vec<usize>>,
    },
    /// Search for surjections x -> P(x) for the von Neumann ordinal x = n.
    Cantor {
        #[arg(long)]
        size: usize,
    },
    /// Build the functor category TARGET^SOURCE.
    Functorcat {
        /// Source shape: discreteN or a JSON file.
        source: String,
        /// Target category: discreteN or a JSON file.
        target: String,
    },
    /// Classify the size of a category table against tiers.
    Classify {
        file: PathBuf,
        /// Strictly increasing stage indices, e.g. 3,4.
        #[arg(long)]
        config: String,
    },
    /// Verify the inclusion of one collection stage into a higher one.
    Embed { lower: u32, upper: u32 },
    /// Audit topos features of a collection stage.
    Topos {
        #[arg(long)]
        stage: u32,
    },
}

/// One finished command: the machine report, the human text, and the exit
/// status encoding the verdict.
struct Outcome {
    report: Value,
    text: String,
    exit: u8,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Formula(FormulaError),
    Hf(HfError),
    Model(ModelError),
    Hierarchy(HierarchyError),
    Category(CategoryError),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Formula(e) => write!(f, "formula: {e}"),
            CliError::Hf(e) => write!(f, "set notation: {e}"),
            CliError::Model(e) => write!(f, "evaluation: {e}"),
            CliError::Hierarchy(e) => write!(f, "{e}"),
            CliError::Category(e) => write!(f, "category: {e}"),
            CliError::Io(msg) => write!(f, "io: {msg}"),
        }
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        CliError::Formula(e)
    }
}
impl From<HfError> for CliError {
    fn from(e: HfError) -> Self {
        CliError::Hf(e)
    }
}
impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(e)
    }
}
impl From<HierarchyError> for CliError {
    fn from(e: HierarchyError) -> Self {
        CliError::Hierarchy(e)
    }
}
impl From<CategoryError> for CliError {
    fn from(e: CategoryError) -> Self {
        CliError::Category(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_line: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli.command, &cli.global) {
        Ok(outcome) => {
            match cli.global.format {
                Format::Text => println!("{}", outcome.text),
                Format::Json => {
                    let envelope = json!({
                        "tool": "hflab",
                        "version": env!("CARGO_PKG_VERSION"),
                        "command": command_line.join(" "),
                        "budgets": { "nodes": cli.global.budget, "cap": cli.global.cap },
                        "seed": cli.global.seed,
                        "report": outcome.report,
                    });
                    println!("{}", serde_json::to_string_pretty(&envelope).expect("report"));
                }
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("hflab: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command, global: &Global) -> Result<Outcome, CliError> {
    match command {
        Command::Eval(args) => cmd_eval(args, global),
        Command::Audit(args) => cmd_audit(args, global),
        Command::Ef(args) => cmd_ef(args, global),
        Command::Tiers(args) => cmd_tiers(args, global),
        Command::Cat(cat) => match cat {
            CatCommand::Coll { stage } => cmd_coll(*stage),
            CatCommand::Validate { file } => cmd_validate(file),
            CatCommand::Freyd { file, enumerate } => cmd_freyd(file.as_deref(), enumerate),
            CatCommand::Cantor { size } => cmd_cantor(*size, global),
            CatCommand::Functorcat { source, target } => cmd_functorcat(source, target, global),
            CatCommand::Classify { file, config } => cmd_classify(file, config),
            CatCommand::Embed { lower, upper } => cmd_embed(*lower, *upper),
            CatCommand::Topos { stage } => cmd_topos(*stage),
        },
    }
}

/// Resolves `V0`..`V5` to the matching stage carrier, anything else to a
/// structure file in the module JSON shape.
fn load_structure(name: &str) -> Result<Structure, CliError> {
    if let Some(rest) = name.strip_prefix('V') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            let k: u32 = rest
                .parse()
                .map_err(|_| CliError::Usage(format!("stage index out of range in '{name}'")))?;
            return Ok(build_stage(k)?.carrier().clone());
        }
    }
    let value = read_json(Path::new(name))?;
    Ok(Structure::from_json(&value)?)
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_formula(spec: &str) -> Result<Formula, CliError> {
    let text = match spec.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => spec.to_string(),
    };
    Ok(parse(text.trim())?)
}

fn load_battery(path: &Path) -> Result<Vec<BatteryItem>, CliError> {
    let value = read_json(path)?;
    let entries = value
        .as_array()
        .ok_or_else(|| CliError::Usage("battery file must be a JSON array".to_string()))?;
    let mut battery = Vec::new();
    for entry in entries {
        let field = |name: &str| -> Result<&str, CliError> {
            entry
                .get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| CliError::Usage(format!("battery entry missing '{name}'")))
        };
        battery.push(BatteryItem {
            id: field("id")?.to_string(),
            var: field("var")?.to_string(),
            phi: parse(field("phi")?)?,
        });
    }
    if battery.is_empty() {
        return Err(CliError::Usage("battery file is empty".to_string()));
    }
    Ok(battery)
}

fn load_category(path: &Path) -> Result<FinCategory, CliError> {
    Ok(FinCategory::from_json(&read_json(path)?)?)
}

/// `discreteN` makes the discrete category on N objects, anything else loads
/// a category table file.
fn load_category_or_discrete(name: &str) -> Result<FinCategory, CliError> {
    if let Some(rest) = name.strip_prefix("discrete") {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            let n: usize = rest
                .parse()
                .map_err(|_| CliError::Usage(format!("object count out of range in '{name}'")))?;
            return Ok(discrete(n));
        }
    }
    load_category(Path::new(name))
}

fn cmd_eval(args: &EvalArgs, global: &Global) -> Result<Outcome, CliError> {
    let structure = load_structure(&args.structure)?;
    let formula = load_formula(&args.formula)?;
    let mut assignment = Assignment::new();
    for entry in &args.assign {
        let (var, set) = entry.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("assignment '{entry}' is not of the form var=SET"))
        })?;
        assignment.insert(var.trim().to_string(), HfSet::parse(set)?);
    }
    let (value, nodes) = satisfies_with_budget(&structure, &formula, &assignment, global.budget)?;
    Ok(Outcome {
        report: json!({ "value": value, "nodes": nodes }),
        text: format!("{value} ({nodes} nodes)"),
        exit: u8::from(!value),
    })
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Holds => "holds".to_string(),
        Verdict::Fails(w) => {
            if w.assignment.is_empty() {
                return format!("fails [{}]", w.residual);
            }
            let assignment: Vec<String> = w
                .assignment
                .iter()
                .map(|(var, value)| format!("{var}={value}"))
                .collect();
            format!("fails at {} [{}]", assignment.join(", "), w.residual)
        }
        Verdict::Sampled { explored } => format!("sampled, undecided after {explored} nodes"),
        Verdict::NotExercised => "not exercised".to_string(),
    }
}

fn cmd_audit(args: &AuditArgs, global: &Global) -> Result<Outcome, CliError> {
    let structure = load_structure(&args.structure)?;
    let battery = match &args.battery {
        Some(path) => load_battery(path)?,
        None => standard_battery(),
    };
    let opts = AuditOptions {
        budget: global.budget,
        literal_foundation: args.literal_foundation,
    };
    let report = axiom_audit(&structure, &battery, &opts)?;
    let mut lines = vec![format!("universe: {} elements", report.card)];
    for row in &report.rows {
        lines.push(format!("{:<12} {}", row.label, verdict_text(&row.verdict)));
    }
    lines.push(format!("foundation: {}", report.foundation));
    let any_fails = report
        .rows
        .iter()
        .any(|r| matches!(r.verdict, Verdict::Fails(_)));
    let any_sampled = report
        .rows
        .iter()
        .any(|r| matches!(r.verdict, Verdict::Sampled { .. }));
    let exit = if any_fails {
        1
    } else if any_sampled {
        2
    } else {
        0
    };
    Ok(Outcome {
        report: report.to_json(),
        text: lines.join("\n"),
        exit,
    })
}

fn cmd_ef(args: &EfArgs, global: &Global) -> Result<Outcome, CliError> {
    let left = load_structure(&args.left)?;
    let right = load_structure(&args.right)?;
    let report = elementary_d(&left, &right, args.depth, args.params, global.budget)?;
    let (text, exit) = match &report.outcome {
        EfOutcome::Elementary => (
            format!(
                "elementary at depth {} with {} parameters ({} tuples checked)",
                report.depth, report.max_params, report.tuples_checked
            ),
            0,
        ),
        EfOutcome::Distinguished {
            params,
            formula,
            left_value,
            right_value,
        } => {
            let binding: Vec<String> = params
                .iter()
                .map(|(var, value)| format!("{var}={value}"))
                .collect();
            (
                format!(
                    "distinguished by \"{formula}\" at {} (left: {left_value}, right: {right_value})",
                    binding.join(", ")
                ),
                1,
            )
        }
    };
    Ok(Outcome {
        report: report.to_json(),
        text,
        exit,
    })
}

fn parse_checks(names: &[String]) -> Result<Vec<&'static str>, CliError> {
    let mut checks = Vec::new();
    for name in names {
        let canonical = match name.to_ascii_lowercase().as_str() {
            "a2" => "A2",
            "a3" => "A3",
            "a4" => "A4",
            "a5" => "A5",
            "lemma" => "lemma",
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown check '{name}' (expected A2, A3, A4, A5, or lemma)"
                )))
            }
        };
        if !checks.contains(&canonical) {
            checks.push(canonical);
        }
    }
    Ok(checks)
}

fn cmd_tiers(args: &TiersArgs, global: &Global) -> Result<Outcome, CliError> {
    let config = TierConfig::parse(&args.config)?;
    let checks = parse_checks(&args.check)?;
    let battery = match &args.battery {
        Some(path) => load_battery(path)?,
        None => standard_battery(),
    };
    let opts = AuditOptions {
        budget: global.budget,
        literal_foundation: false,
    };

    let mut report = serde_json::Map::new();
    let mut lines = Vec::new();
    let mut exit = 0u8;
    for check in checks {
        match check {
            "A2" => {
                let a2 = check_a2(&config, &battery, &opts)?;
                // The exit verdict tracks completeness of the carriers only;
                // individual axiom failures are expected data, not errors.
                for tier in &a2.tiers {
                    lines.push(format!(
                        "A2 tier {} (V_{}): {}",
                        tier.n,
                        tier.k,
                        if tier.complete { "complete" } else { "not complete" }
                    ));
                }
                if !a2.complete_everywhere {
                    exit = exit.max(1);
                }
                report.insert("A2".to_string(), a2.to_json());
            }
            "A3" => {
                let a3 = check_a3(&config, args.depth, args.params, global.budget)?;
                for pair in &a3.pairs {
                    let summary = match &pair.ef.outcome {
                        EfOutcome::Elementary => "elementary".to_string(),
                        EfOutcome::Distinguished { formula, .. } => {
                            exit = exit.max(1);
                            format!("distinguished by \"{formula}\"")
                        }
                    };
                    lines.push(format!(
                        "A3 V_{} into V_{}: {summary}",
                        pair.k_lower, pair.k_upper
                    ));
                }
                report.insert("A3".to_string(), a3.to_json());
            }
            "A4" => {
                let safe: Vec<SafeBatteryItem> = standard_safe_battery();
                let a4 = check_a4(&config, &safe, global.budget)?;
                let members = a4.items.iter().filter(|i| i.member_of_next).count();
                lines.push(format!(
                    "A4: {members}/{} built collections are members of the next tier",
                    a4.items.len()
                ));
                if !a4.all_members {
                    exit = exit.max(1);
                }
                report.insert("A4".to_string(), a4.to_json());
            }
            "A5" => {
                let a5 = check_a5(&config, args.tier, global.cap)?;
                let ranks: Vec<String> =
                    a5.failure_ranks.iter().map(|r| r.to_string()).collect();
                lines.push(format!(
                    "A5 tier {} (V_{}): {} functions checked, {} passed, {} failed{} at ranks [{}]",
                    a5.tier,
                    a5.k,
                    a5.checked,
                    a5.passed,
                    a5.failed,
                    if a5.sampled { " (sampled)" } else { "" },
                    ranks.join(", ")
                ));
                if a5.sampled {
                    exit = exit.max(2);
                }
                report.insert("A5".to_string(), a5.to_json());
            }
            "lemma" => {
                let lemma = universe_lemma_check(&config, global.budget)?;
                for tier in &lemma.tiers {
                    lines.push(format!(
                        "lemma tier {} (V_{}): {}",
                        tier.n,
                        tier.k,
                        if tier.matches { "carrier matches" } else { "carrier differs" }
                    ));
                }
                if !lemma.all_match {
                    exit = exit.max(1);
                }
                report.insert("lemma".to_string(), lemma.to_json());
            }
            _ => unreachable!(),
        }
    }
    Ok(Outcome {
        report: Value::Object(report),
        text: lines.join("\n"),
        exit,
    })
}

fn law_summary(c: &FinCategory) -> Result<(Value, String, u8), CliError> {
    match c.validate()? {
        None => Ok((Value::Null, "laws OK".to_string(), 0)),
        Some(failure) => Ok((failure.to_json(), format!("law failure: {failure}"), 1)),
    }
}

fn cmd_coll(stage: u32) -> Result<Outcome, CliError> {
    let s = build_stage(stage)?;
    let c = build_coll(&s)?;
    let (law, law_text, exit) = law_summary(&c)?;
    Ok(Outcome {
        report: json!({
            "stage": stage,
            "objects": c.object_count(),
            "arrows": c.arrow_count(),
            "thin": c.is_thin(),
            "law_failure": law,
            "category": c.to_json(),
        }),
        text: format!(
            "Coll(V_{stage}): {} objects, {} arrows, {law_text}",
            c.object_count(),
            c.arrow_count()
        ),
        exit,
    })
}

fn cmd_validate(file: &Path) -> Result<Outcome, CliError> {
    let c = load_category(file)?;
    let (law, law_text, exit) = law_summary(&c)?;
    Ok(Outcome {
        report: json!({
            "objects": c.object_count(),
            "arrows": c.arrow_count(),
            "law_failure": law,
        }),
        text: format!(
            "{} objects, {} arrows, {law_text}",
            c.object_count(),
            c.arrow_count()
        ),
        exit,
    })
}

fn cmd_freyd(file: Option<&Path>, enumerate: &Option<Vec<usize>>) -> Result<Outcome, CliError> {
    match (file, enumerate) {
        (Some(path), None) => {
            let c = load_category(path)?;
            let report = freyd_audit(&c)?;
            let text = match report.verdict {
                FreydVerdict::Vacuous => "thin: the power argument is vacuous".to_string(),
                FreydVerdict::Consistent => {
                    let (f, g) = report.parallel_pair.clone().expect("non-thin pair");
                    format!(
                        "non-thin with parallel pair ({f}, {g}); power of {} copies absent: consistent",
                        report.hom_size
                    )
                }
                FreydVerdict::Contradiction => format!(
                    "contradiction: the Hom-indexed power exists with tuplings [{}]",
                    report.tuplings.join(", ")
                ),
            };
            let exit = u8::from(report.verdict == FreydVerdict::Contradiction);
            Ok(Outcome {
                report: report.to_json(),
                text,
                exit,
            })
        }
        (None, Some(bounds)) => {
            let report = freyd_enumerate(bounds[0], bounds[1])?;
            let text = format!(
                "{} categories enumerated ({} valid, {} non-thin), {} violations",
                report.candidates, report.valid, report.non_thin, report.contradictions
            );
            let exit = u8::from(report.contradictions > 0);
            Ok(Outcome {
                report: report.to_json(),
                text,
                exit,
            })
        }
        _ => Err(CliError::Usage(
            "freyd needs exactly one of a category file or --enumerate".to_string(),
        )),
    }
}

fn cmd_cantor(size: usize, global: &Global) -> Result<Outcome, CliError> {
    let x = HfSet::von_neumann(size);
    let report = cantor_check(&x, global.cap as usize)?;
    Ok(Outcome {
        report: report.to_json(),
        text: format!(
            "{} functions checked, {} surjective; {} diagonals verified missing",
            report.functions_checked, report.surjections, report.diagonals_missed
        ),
        exit: u8::from(report.surjections > 0),
    })
}

fn cmd_functorcat(source: &str, target: &str, global: &Global) -> Result<Outcome, CliError> {
    let c = load_category_or_discrete(source)?;
    let d = load_category_or_discrete(target)?;
    let fc = functor_category(&c, &d, global.cap)?;
    let (law, law_text, exit) = law_summary(&fc)?;
    Ok(Outcome {
        report: json!({
            "objects": fc.object_count(),
            "arrows": fc.arrow_count(),
            "law_failure": law,
            "category": fc.to_json(),
        }),
        text: format!(
            "functor category: {} objects, {} arrows, {law_text}",
            fc.object_count(),
            fc.arrow_count()
        ),
        exit,
    })
}

fn cmd_classify(file: &Path, config: &str) -> Result<Outcome, CliError> {
    let c = load_category(file)?;
    let tiers = TierConfig::parse(config)?;
    let report = classify_size(&c, &tiers)?;
    let mut lines = vec![format!(
        "object rank {}, morphism rank {}, largest hom-set rank {}",
        report.ob_rank, report.mor_rank, report.max_homset_rank
    )];
    for flags in &report.tiers {
        let mut found = Vec::new();
        if flags.small {
            found.push("small");
        }
        if flags.locally_small {
            found.push("locally small");
        }
        if flags.tiny {
            found.push("tiny");
        }
        if flags.large {
            found.push("large");
        }
        if flags.very_large {
            found.push("very large");
        }
        lines.push(format!(
            "tier {} (V_{}): {}",
            flags.tier,
            flags.k,
            found.join(", ")
        ));
    }
    Ok(Outcome {
        report: report.to_json(),
        text: lines.join("\n"),
        exit: 0,
    })
}

fn cmd_embed(lower: u32, upper: u32) -> Result<Outcome, CliError> {
    let report = check_embedding(lower, upper)?;
    let text = format!(
        "Coll(V_{lower}) into Coll(V_{upper}): functor laws {}, faithful {}, full {}, terminal preserved {}, {} products preserved {}; embedding {}",
        report.functor_laws,
        report.faithful,
        report.full,
        report.terminal_preserved,
        report.products_checked,
        report.products_preserved,
        if report.embedding { "verified" } else { "REFUTED" }
    );
    Ok(Outcome {
        report: report.to_json(),
        text,
        exit: u8::from(!report.embedding),
    })
}

fn cmd_topos(stage: u32) -> Result<Outcome, CliError> {
    let s = build_stage(stage)?;
    let c = build_coll(&s)?;
    let report = topos_audit(&c)?;
    let feature = |name: &str, check: &hflab_core::category::FeatureCheck| match &check.first_missing
    {
        None => format!("{name}: {}/{} present", check.found, check.checked),
        Some(missing) => format!(
            "{name}: {}/{} present, first missing {missing}",
            check.found, check.checked
        ),
    };
    let lines = vec![
        match &report.terminal {
            Some(label) => format!("terminal: {label}"),
            None => "terminal: none".to_string(),
        },
        feature("binary products", &report.binary_products),
        feature("equalizers", &report.equalizers),
        feature("exponentials", &report.exponentials),
        match &report.subobject_classifier {
            Some((omega, truth)) => format!("subobject classifier: {omega} with truth {truth}"),
            None => "subobject classifier: none".to_string(),
        },
        format!(
            "verdict: {}",
            if report.all_present {
                "all features present"
            } else {
                "boundary failures present"
            }
        ),
    ];
    Ok(Outcome {
        report: report.to_json(),
        text: lines.join("\n"),
        exit: u8::from(!report.all_present),
    })
}
