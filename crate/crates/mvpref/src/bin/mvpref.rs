//! Command-line front end: model ingestion and validation, formula
//! evaluation, cut tables, bounded validity and consequence search,
//! bulldozing, proof checking, axiom soundness suites, preference
//! statements, and reproduction of the bundled worked examples.
//!
//! Exit codes: `0` success/valid/accepted, `1` countermodel/rejected/
//! diff failure, `2` input errors (reported on standard error).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mvpref::doc::{
    parse_chain_spec, read_document, to_json, DocError, ModelDocument,
};
use mvpref::{examples, render};
use mvpref_core::lattice::{Chain, Element};
use mvpref_core::model::PreferenceModel;
use mvpref_core::prefs::{eval_preference, parse_kind};
use mvpref_core::proofs::{check_proof, parse_proof_file, SystemId};
use mvpref_core::relation::FuzzyRelation;
use mvpref_core::search::{
    axiom_soundness_suite, consequence_bounded, is_valid_bounded, ModelClass, SearchBounds,
    Verdict,
};
use mvpref_core::syntax::{self, Formula};
use mvpref_core::transform::{bulldoze, BulldozeReport, LayeredModel};

type Error = Box<dyn std::error::Error>;

const SUCCESS: ExitCode = ExitCode::SUCCESS;
const REFUTED: ExitCode = ExitCode::FAILURE;

/// Many-valued modal preference logic over finite chains.
#[derive(Parser)]
#[command(name = "mvpref", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a model, at one world or at all of them.
    Eval {
        /// Model document (JSON).
        model: PathBuf,
        /// The formula, in the document chain's language.
        formula: String,
        /// Evaluate at this world only.
        #[arg(long)]
        world: Option<String>,
    },
    /// Check that a model document satisfies the preference-model laws.
    Validate {
        /// Model document (JSON).
        model: PathBuf,
        /// Replace the relation by its meet-transitive closure first.
        #[arg(long)]
        repair_closure: bool,
        /// Force the relation's diagonal to the top element first.
        #[arg(long)]
        repair_reflexive: bool,
        /// Write the (possibly repaired) validated model here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Show the cut of a model's relation at a level, alongside the two
    /// strict variants (cut-then-strict and strict-then-cut).
    Cuts {
        /// Model document (JSON).
        model: PathBuf,
        /// Level label in the document's chain.
        level: String,
    },
    /// Search the bounded model space for a countermodel to a formula.
    Validity {
        /// The formula to check.
        formula: String,
        #[command(flatten)]
        bounds: BoundsArgs,
        /// Write a countermodel document here when one is found.
        #[arg(long)]
        countermodel: Option<PathBuf>,
    },
    /// Search for a world where all premises hold fully but the
    /// conclusion does not.
    Consequence {
        /// The conclusion.
        conclusion: String,
        /// A premise (repeatable).
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[command(flatten)]
        bounds: BoundsArgs,
        /// Write a countermodel document here when one is found.
        #[arg(long)]
        countermodel: Option<PathBuf>,
    },
    /// Bulldoze a layered model: replace its clusters by ordered copies.
    Bulldoze {
        /// Layered model document (JSON).
        model: PathBuf,
        /// Copies per cluster world.
        #[arg(long, default_value_t = 2)]
        copies: usize,
        /// Write the bulldozed layered model here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a proof file in a Hilbert system.
    Proof {
        /// The proof file.
        proof: PathBuf,
        /// System: m, cm, mm, mm-minus, p, p-delta.
        #[arg(long, default_value = "p")]
        system: String,
        /// Chain the proof's formulas live in.
        #[arg(long, default_value = "lukasiewicz:3")]
        chain: String,
    },
    /// Check every axiom-schema instance of a system for validity
    /// within bounds.
    Axioms {
        /// System: m, cm, mm, mm-minus, p, p-delta.
        #[arg(long, default_value = "mm")]
        system: String,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Render the bundled worked examples and diff them against their
    /// golden sheets.
    Examples,
    /// Evaluate a preference statement between two formulas on a model.
    Pref {
        /// Model document (JSON).
        model: PathBuf,
        /// Quantifier pattern: ee or ae.
        kind: String,
        /// The left-hand (less preferred) formula.
        phi: String,
        /// The right-hand (more preferred) formula.
        psi: String,
        /// Use the strict possibility modality.
        #[arg(long)]
        strict: bool,
        /// Conjoin both sides with this context formula.
        #[arg(long)]
        context: Option<String>,
    },
}

/// Bounded-search parameters shared by the searching commands.
#[derive(Args)]
struct BoundsArgs {
    /// Chain, as `<family>:<size>` (lukasiewicz or godel).
    #[arg(long, default_value = "lukasiewicz:3")]
    chain: String,
    /// Largest world count to search.
    #[arg(long, default_value_t = 3)]
    max_worlds: usize,
    /// Variables every model assigns (comma-separated), besides the
    /// checked formulas' own.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Random models to try after the exhaustive phase.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Seed for the random phase.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Model class: preference, general-fuzzy, or general-crisp.
    #[arg(long, default_value = "preference")]
    class: String,
    /// Upper bound on the exhaustive-phase model count.
    #[arg(long)]
    budget: Option<u64>,
}

impl BoundsArgs {
    fn to_bounds(&self) -> Result<SearchBounds, Error> {
        let chain = parse_chain_spec(&self.chain)?;
        let mut bounds = SearchBounds::new(chain);
        bounds.max_worlds = self.max_worlds;
        if let Some(vars) = &self.vars {
            bounds.variables = vars.clone();
        }
        bounds.random_samples = self.samples;
        bounds.seed = self.seed;
        bounds.model_class = match self.class.as_str() {
            "preference" => ModelClass::Preference,
            "general-fuzzy" => ModelClass::GeneralFuzzy,
            "general-crisp" => ModelClass::GeneralCrisp,
            other => {
                return Err(format!(
                    "unknown model class `{other}` (expected preference, \
                     general-fuzzy, or general-crisp)"
                )
                .into())
            }
        };
        if let Some(budget) = self.budget {
            bounds.budget = budget;
        }
        Ok(bounds)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Eval { model, formula, world } => cmd_eval(&model, &formula, world.as_deref()),
        Command::Validate { model, repair_closure, repair_reflexive, output } => {
            cmd_validate(&model, repair_closure, repair_reflexive, output.as_deref())
        }
        Command::Cuts { model, level } => cmd_cuts(&model, &level),
        Command::Validity { formula, bounds, countermodel } => {
            cmd_validity(&formula, &bounds, countermodel.as_deref())
        }
        Command::Consequence { conclusion, premises, bounds, countermodel } => {
            cmd_consequence(&premises, &conclusion, &bounds, countermodel.as_deref())
        }
        Command::Bulldoze { model, copies, output } => {
            cmd_bulldoze(&model, copies, output.as_deref())
        }
        Command::Proof { proof, system, chain } => cmd_proof(&proof, &system, &chain),
        Command::Axioms { system, bounds } => cmd_axioms(&system, &bounds),
        Command::Examples => cmd_examples(),
        Command::Pref { model, kind, phi, psi, strict, context } => {
            cmd_pref(&model, &kind, &phi, &psi, strict, context.as_deref())
        }
    }
}

fn load_document(path: &Path) -> Result<ModelDocument, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(read_document(&text)?)
}

fn parse_system(name: &str) -> Result<SystemId, Error> {
    SystemId::from_name(name).ok_or_else(|| {
        format!(
            "unknown system `{name}` (expected m, cm, mm, mm-minus, p, or p-delta)"
        )
        .into()
    })
}

fn value_rows(chain: &Chain, worlds: &[String], values: &[Element]) -> Vec<(String, Vec<String>)> {
    worlds
        .iter()
        .zip(values)
        .map(|(w, &v)| (w.clone(), vec![chain.label(v).to_string()]))
        .collect()
}

fn cmd_eval(path: &Path, formula: &str, world: Option<&str>) -> Result<ExitCode, Error> {
    let doc = load_document(path)?;
    if doc.is_layered() {
        let lm = doc.to_layered_model()?;
        let f = syntax::parse(formula, lm.chain())?;
        let values = lm.eval_all(&f)?;
        return print_values(lm.chain(), lm.worlds(), &values, world);
    }
    let model = doc.to_any_model()?;
    let f = syntax::parse(formula, model.chain())?;
    let values = model.eval_all(&f)?;
    print_values(model.chain(), model.worlds(), &values, world)
}

fn print_values(
    chain: &Chain,
    worlds: &[String],
    values: &[Element],
    world: Option<&str>,
) -> Result<ExitCode, Error> {
    match world {
        Some(name) => {
            let idx = worlds
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| format!("unknown world `{name}`"))?;
            println!("{}", chain.label(values[idx]));
        }
        None => {
            let rows = value_rows(chain, worlds, values);
            print!("{}", render::table("world", &["value".to_string()], &rows));
        }
    }
    Ok(SUCCESS)
}

fn cmd_validate(
    path: &Path,
    repair_closure: bool,
    repair_reflexive: bool,
    output: Option<&Path>,
) -> Result<ExitCode, Error> {
    let doc = load_document(path)?;
    if doc.is_layered() {
        if repair_closure || repair_reflexive {
            return Err("repairs apply to flat relation documents only".into());
        }
        return match doc.to_layered_model() {
            Ok(lm) => {
                println!(
                    "valid layered model: {} worlds, {} weak levels, {} strict levels",
                    lm.size(),
                    lm.weak().len(),
                    lm.strict().len()
                );
                match lm.check_strict_part_condition() {
                    Ok(()) => println!("strict families agree with the strict parts of the cuts"),
                    Err(v) => println!("note: {v} (bulldozing removes clusters)"),
                }
                if let Some(out) = output {
                    fs::write(out, to_json(&ModelDocument::from_layered_model(&lm)))?;
                }
                Ok(SUCCESS)
            }
            Err(DocError::Transform(e)) => {
                println!("invalid: {e}");
                Ok(REFUTED)
            }
            Err(e) => Err(e.into()),
        };
    }

    let chain = doc.chain()?;
    let mut relation = doc.relation_matrix(&chain)?;
    let valuation = doc.valuation_rows(&chain)?;
    if repair_reflexive {
        let top = chain.top();
        relation = FuzzyRelation::from_fn(relation.size(), |u, v| {
            if u == v {
                top
            } else {
                relation.get(u, v)
            }
        });
        println!("applied repair: diagonal forced to {}", chain.label(top));
    }
    if repair_closure {
        relation = relation.meet_transitive_closure();
        println!("applied repair: meet-transitive closure");
    }
    match PreferenceModel::new(chain, doc.worlds.clone(), relation, valuation) {
        Ok(m) => {
            println!(
                "valid preference model: {} worlds, {} variables",
                m.size(),
                m.valuation().len()
            );
            if let Some(out) = output {
                fs::write(out, to_json(&ModelDocument::from_preference_model(&m)))?;
            }
            Ok(SUCCESS)
        }
        Err(e) => {
            println!("invalid: {e}");
            Ok(REFUTED)
        }
    }
}

fn cmd_cuts(path: &Path, level: &str) -> Result<ExitCode, Error> {
    let doc = load_document(path)?;
    let chain = doc.chain()?;
    let relation = doc.relation_matrix(&chain)?;
    let b = chain.element(level)?;
    let worlds = &doc.worlds;
    print!("P_{level}:\n{}", render::crisp_matrix("", worlds, &relation.cut(b)));
    if b == chain.bottom() {
        println!("\nstrict variants are undefined at the bottom level");
        return Ok(SUCCESS);
    }
    let cut_then_strict = relation
        .strict_of_cut(b)
        .expect("positive level checked above");
    print!("\n(P_{level})^<:\n{}", render::crisp_matrix("", worlds, &cut_then_strict));
    print!(
        "\n(P^<)_{level}:\n{}",
        render::crisp_matrix("", worlds, &relation.cut_of_strict(b))
    );
    Ok(SUCCESS)
}

fn report_verdict(
    verdict: &Verdict,
    bounds: &SearchBounds,
    what: &str,
    out: Option<&Path>,
) -> Result<ExitCode, Error> {
    match verdict {
        Verdict::ValidWithinBounds => {
            println!(
                "{what} within bounds (chain size {}, up to {} worlds, class {})",
                bounds.chain.size(),
                bounds.max_worlds,
                bounds.model_class
            );
            Ok(SUCCESS)
        }
        Verdict::CountermodelFound { model, world } => {
            println!("countermodel found at world `{}`", model.worlds()[*world]);
            let doc = ModelDocument::from_any_model(model, Some(*world));
            match out {
                Some(path) => {
                    fs::write(path, to_json(&doc))?;
                    println!("countermodel written to {}", path.display());
                }
                None => print!("{}", to_json(&doc)),
            }
            Ok(REFUTED)
        }
    }
}

fn cmd_validity(
    formula: &str,
    bounds: &BoundsArgs,
    countermodel: Option<&Path>,
) -> Result<ExitCode, Error> {
    let bounds = bounds.to_bounds()?;
    let f = syntax::parse(formula, &bounds.chain)?;
    let verdict = is_valid_bounded(&f, &bounds)?;
    report_verdict(&verdict, &bounds, "valid", countermodel)
}

fn cmd_consequence(
    premises: &[String],
    conclusion: &str,
    bounds: &BoundsArgs,
    countermodel: Option<&Path>,
) -> Result<ExitCode, Error> {
    let bounds = bounds.to_bounds()?;
    let premises: Vec<Formula> = premises
        .iter()
        .map(|p| syntax::parse(p, &bounds.chain))
        .collect::<Result<_, _>>()?;
    let f = syntax::parse(conclusion, &bounds.chain)?;
    let verdict = consequence_bounded(&premises, &f, &bounds)?;
    report_verdict(&verdict, &bounds, "consequence holds", countermodel)
}

fn describe_bulldoze(lm: &LayeredModel, report: &BulldozeReport, out_size: usize) {
    let chain = lm.chain();
    let names = |cluster: &[usize]| {
        let members: Vec<&str> =
            cluster.iter().map(|&w| lm.worlds()[w].as_str()).collect();
        format!("{{{}}}", members.join(", "))
    };
    println!(
        "bulldozed with {} copies per cluster world: {} -> {} worlds",
        report.copy_count,
        lm.size(),
        out_size
    );
    for (pos, level) in report.levels.iter().enumerate() {
        if level.clusters.is_empty() {
            continue;
        }
        let shown: Vec<String> = level
            .clusters
            .iter()
            .zip(&level.parent)
            .map(|(cluster, parent)| match parent {
                Some(p) => {
                    let enclosing = &report.levels[pos - 1].clusters[*p];
                    format!("{} (inside {})", names(cluster), names(enclosing))
                }
                None => names(cluster),
            })
            .collect();
        println!("level {}: clusters {}", chain.label(level.level), shown.join(", "));
    }
    let copied: Vec<&str> =
        report.copied_worlds.iter().map(|&w| lm.worlds()[w].as_str()).collect();
    println!("copied worlds: {}", copied.join(", "));
}

fn cmd_bulldoze(path: &Path, copies: usize, output: Option<&Path>) -> Result<ExitCode, Error> {
    let doc = load_document(path)?;
    let lm = doc.to_layered_model()?;
    let (out, report) = bulldoze(&lm, copies)?;
    describe_bulldoze(&lm, &report, out.size());
    match out.check_strict_part_condition() {
        Ok(()) => println!("output strict families agree with the strict parts of the cuts"),
        Err(v) => println!("note: {v}"),
    }
    if let Some(path) = output {
        fs::write(path, to_json(&ModelDocument::from_layered_model(&out)))?;
        println!("bulldozed model written to {}", path.display());
    }
    Ok(SUCCESS)
}

fn cmd_proof(path: &Path, system: &str, chain_spec: &str) -> Result<ExitCode, Error> {
    let system = parse_system(system)?;
    let chain = parse_chain_spec(chain_spec)?;
    let text = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let proof = parse_proof_file(&text, &chain, system)?;
    match check_proof(&proof, system, &chain) {
        Ok(()) => {
            let conclusion = proof
                .conclusion()
                .map(|f| syntax::print(f, &chain))
                .unwrap_or_else(|| "(empty proof)".to_string());
            println!(
                "accepted in {}: {} premises, {} lines, conclusion {conclusion}",
                system.name(),
                proof.premises.len(),
                proof.lines.len()
            );
            Ok(SUCCESS)
        }
        Err(rejection) => {
            println!("rejected at line {}: {}", rejection.line, rejection.reason);
            Ok(REFUTED)
        }
    }
}

fn cmd_axioms(system: &str, bounds: &BoundsArgs) -> Result<ExitCode, Error> {
    let system = parse_system(system)?;
    let bounds = bounds.to_bounds()?;
    let report = axiom_soundness_suite(system, &bounds)?;
    println!(
        "system {}: {} instances over the {}-element chain, class {}",
        report.system.name(),
        report.entries.len(),
        bounds.chain.size(),
        report.class
    );
    for entry in report.failures() {
        if let Verdict::CountermodelFound { model, world } = &entry.verdict {
            println!(
                "FAIL {}: countermodel at world `{}`",
                entry.label,
                model.worlds()[*world]
            );
        }
    }
    if report.all_valid() {
        println!("all instances valid within bounds");
        Ok(SUCCESS)
    } else {
        println!("{} instance(s) refuted", report.failures().len());
        Ok(REFUTED)
    }
}

fn cmd_examples() -> Result<ExitCode, Error> {
    let runs = examples::run_all();
    let mut all_ok = true;
    for run in &runs {
        if run.ok() {
            println!("example {}: ok", run.id);
        } else {
            all_ok = false;
            println!("example {}: DIFFERS", run.id);
            println!("--- golden ---");
            print!("{}", run.expected);
            println!("--- rendered ---");
            print!("{}", run.actual);
        }
    }
    Ok(if all_ok { SUCCESS } else { REFUTED })
}

fn cmd_pref(
    path: &Path,
    kind: &str,
    phi: &str,
    psi: &str,
    strict: bool,
    context: Option<&str>,
) -> Result<ExitCode, Error> {
    let doc = load_document(path)?;
    let model = doc.to_preference_model()?;
    let chain = model.chain();
    let quantifier = parse_kind(kind)?;
    let phi = syntax::parse(phi, chain)?;
    let psi = syntax::parse(psi, chain)?;
    let context = context.map(|c| syntax::parse(c, chain)).transpose()?;
    let degree =
        eval_preference(&model, quantifier, strict, &phi, &psi, context.as_ref())?;
    println!(
        "{}",
        render::preference_line(chain, quantifier, strict, &phi, &psi, context.as_ref(), degree)
    );
    Ok(SUCCESS)
}
