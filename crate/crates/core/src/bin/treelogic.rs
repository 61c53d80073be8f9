use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use treelogic::check::{mc_ctlsf, mc_ctlspm, mc_pctlpm, oracle_bound, oracle_eval, McResult};
use treelogic::formula::json::state_to_json;
use treelogic::formula::rewrite::eliminate_release_state;
use treelogic::formula::*;
use treelogic::harness::{run_campaign, run_fixtures, star_certificate, CampaignConfig, Suite};
use treelogic::model::RegularTreeModel;
use treelogic::translate::{ctlsf_bridge, ctlspm_to_hta, hta_to_ctlspm, hta_to_pctlpm, pctlpm_to_hta};
use treelogic::tree::{
    dualize_with_registry, linearize_component, structural_report, validate_hesitant, visibility_check,
    DualityRegistry, TreeAutomaton, Visibility,
};
use treelogic::word::{
    accepts_lasso, breakpoint_determinize, is_counter_free, is_looping, LassoWord, Letter, WordAutomaton,
};
use treelogic::{Error, Result};

#[derive(Parser)]
#[command(name = "treelogic", version, about = "Branching-time logics with past and hesitant tree automata")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FormulaIn {
    /// Formula text.
    formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and print a state formula with its JSON tree.
    Parse(FormulaIn),
    /// List the fragments a formula belongs to.
    Classify(FormulaIn),
    /// Negation normal form for PastCTL± or CTL*±.
    Nnf {
        #[command(flatten)]
        input: FormulaIn,
        /// pastctlpm or ctlstarpm (default: the first that fits).
        #[arg(long)]
        target: Option<String>,
    },
    /// Syntactic rewrites: simple, release, closure.
    Rewrite {
        #[command(flatten)]
        input: FormulaIn,
        #[arg(long, default_value = "simple")]
        op: String,
    },
    /// Compile a CTL*± formula to a one-way automaton, or a PastCTL±
    /// formula (or any with --two-way) to a two-way linear one.
    Compile {
        #[command(flatten)]
        input: FormulaIn,
        #[arg(long)]
        two_way: bool,
    },
    /// Translate an automaton back to a formula.
    Decompile {
        automaton: PathBuf,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Structural certificates of an automaton; exit 1 when one fails.
    Check {
        automaton: PathBuf,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Linearise the component of a state.
    Linearize {
        automaton: PathBuf,
        #[arg(long)]
        state: String,
    },
    /// Breakpoint-determinise a looping UBA.
    Breakpoint { automaton: PathBuf },
    /// Model-check a formula; with --oracle, cross-check the root verdict.
    Mc {
        #[command(flatten)]
        input: FormulaIn,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Decide a lasso word `{"prefix": [...], "cycle": [...]}`.
    Lasso {
        automaton: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// The dual automaton (and registry).
    Dual {
        automaton: PathBuf,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Run a seeded campaign and print its report.
    Fuzz {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value = "roundtrip1")]
        suite: String,
        /// Models or words per generated formula.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the named examples and print pass/fail.
    Fixtures,
}

/// Path quantifiers keep the history from the root.
const SEMANTICS: &str = "history-preserving";

enum Outcome {
    Ok(Value),
    Failed(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome::Ok(v)) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("treelogic: {e}");
            ExitCode::from(2)
        }
    }
}

fn print(v: &Value) {
    use std::io::Write;
    let text = match v {
        Value::String(s) => s.clone(),
        other => serde_json::to_string_pretty(other).expect("json"),
    };
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &PathBuf) -> Result<Value> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn formula(input: &FormulaIn) -> Result<StateRef> {
    let text = match (&input.formula, &input.file) {
        (Some(t), None) => t.clone(),
        (None, Some(p)) => read(p)?,
        _ => return Err(Error::Usage("give a formula or --file, not both".into())),
    };
    parse_state(text.trim())
}

fn automaton(path: &PathBuf) -> Result<TreeAutomaton> {
    TreeAutomaton::from_json(&read_json(path)?)
}

fn registry(a: &TreeAutomaton, path: &Option<PathBuf>) -> Result<DualityRegistry> {
    match path {
        Some(p) => DualityRegistry::from_json(&read_json(p)?, &a.states),
        None => Ok(DualityRegistry::new()),
    }
}

/// Word automata carry either plain string letters or valuations.
enum AnyWord {
    Plain(WordAutomaton<String>),
    Sets(WordAutomaton<Valuation>),
}

fn word_automaton(path: &PathBuf) -> Result<AnyWord> {
    let v = read_json(path)?;
    let plain = v["alphabet"].as_array().is_some_and(|a| a.iter().all(Value::is_string));
    Ok(if plain { AnyWord::Plain(WordAutomaton::from_json(&v)?) } else { AnyWord::Sets(WordAutomaton::from_json(&v)?) })
}

fn lasso<L: Letter>(w: &WordAutomaton<L>, text: &str) -> Result<bool> {
    let v: Value = serde_json::from_str(text)?;
    let letters = |key: &str| -> Result<Vec<L>> {
        v[key].as_array().ok_or_else(|| Error::Usage(format!("word without {key}")))?.iter().map(L::from_json).collect()
    };
    accepts_lasso(w, &LassoWord { prefix: letters("prefix")?, cycle: letters("cycle")? })
}

fn breakpoint<L: Letter>(w: &WordAutomaton<L>) -> Result<Outcome> {
    let b = breakpoint_determinize(w)?;
    Ok(Outcome::Ok(json!({
        "automaton": b.to_json(),
        "looping": is_looping(&b).is_some(),
        "counter_free": is_counter_free(&b)?.is_none(),
    })))
}

fn run(cmd: Cmd) -> Result<Outcome> {
    Ok(match cmd {
        Cmd::Parse(input) => {
            let f = formula(&input)?;
            Outcome::Ok(json!({ "text": f.to_string(), "ast": state_to_json(&f), "semantics": SEMANTICS }))
        }
        Cmd::Classify(input) => {
            let f = formula(&input)?;
            let frags: Vec<String> = classify_fragment(&f).iter().map(|g| g.to_string()).collect();
            Outcome::Ok(Value::String(frags.join(" ")))
        }
        Cmd::Nnf { input, target } => {
            let f = formula(&input)?;
            let target = match target.as_deref() {
                Some("pastctlpm") => Fragment::PastCTLpm,
                Some("ctlstarpm") => Fragment::CTLStarPm,
                Some(other) => return Err(Error::Usage(format!("unknown target {other}"))),
                None if in_fragment(&f, Fragment::PastCTLpm) => Fragment::PastCTLpm,
                None => Fragment::CTLStarPm,
            };
            Outcome::Ok(Value::String(to_nnf(&f, target)?.to_string()))
        }
        Cmd::Rewrite { input, op } => {
            let f = formula(&input)?;
            match op.as_str() {
                "simple" => Outcome::Ok(Value::String(to_simple_form(&f)?.to_string())),
                "release" => Outcome::Ok(Value::String(eliminate_release_state(&f).to_string())),
                "bridge" => Outcome::Ok(Value::String(ctlsf_bridge(&f)?.to_string())),
                "closure" => Outcome::Ok(Value::Array(
                    subformula_closure(&f)?.iter().map(|g| Value::String(g.to_string())).collect(),
                )),
                other => return Err(Error::Usage(format!("unknown rewrite {other}"))),
            }
        }
        Cmd::Compile { input, two_way } => {
            let f = formula(&input)?;
            if two_way || !in_fragment(&f, Fragment::CTLStarPm) {
                Outcome::Ok(json!({ "automaton": pctlpm_to_hta(&f)?.to_json() }))
            } else {
                let (a, reg) = ctlspm_to_hta(&f)?;
                Outcome::Ok(json!({ "automaton": a.to_json(), "registry": reg.to_json(&a.states) }))
            }
        }
        Cmd::Decompile { automaton: path, registry: reg } => {
            let a = automaton(&path)?;
            if a.two_way {
                Outcome::Ok(json!({ "formula": hta_to_pctlpm(&a)?.to_string(), "semantics": SEMANTICS }))
            } else {
                let reg = registry(&a, &reg)?;
                let g = hta_to_ctlspm(&a, &reg)?;
                Outcome::Ok(json!({
                    "formula": g.formula.to_string(),
                    "unverified_visibility": g.unverified_visibility,
                    "semantics": SEMANTICS,
                }))
            }
        }
        Cmd::Check { automaton: path, registry: reg } => {
            let a = automaton(&path)?;
            let reg = registry(&a, &reg)?;
            let r = structural_report(&a);
            let violations: Vec<String> = validate_hesitant(&a).violations.iter().map(|v| v.to_string()).collect();
            let mut report = json!({
                "hesitant": r.hesitant,
                "polarised": r.polarised,
                "linear": r.linear,
                "two_way": r.two_way,
                "violations": violations,
            });
            if !a.two_way {
                report["visibility"] = Value::String(match visibility_check(&a, &reg) {
                    Visibility::Visible(_) => "visible".into(),
                    Visibility::Violated(w) => format!("violated in component {}", w.component),
                    Visibility::Unknown { .. } => "unknown".into(),
                });
                report["certified"] = Value::Bool(star_certificate(&a, &reg).is_ok());
            }
            if r.hesitant && r.polarised {
                Outcome::Ok(report)
            } else {
                Outcome::Failed(report)
            }
        }
        Cmd::Linearize { automaton: path, state } => {
            let a = automaton(&path)?;
            let q = a.state_index(&state).ok_or_else(|| Error::Usage(format!("unknown state {state}")))?;
            let lin = linearize_component(&a, q)?;
            let atoms: serde_json::Map<String, Value> =
                lin.atoms.iter().map(|(k, t)| (k.clone(), Value::String(t.render(&a.states)))).collect();
            Outcome::Ok(json!({
                "automaton": lin.automaton.to_json(),
                "atoms": atoms,
                "exit": lin.automaton.states[lin.exit],
                "counter_free": is_counter_free(&lin.automaton)?.is_none(),
            }))
        }
        Cmd::Breakpoint { automaton: path } => match word_automaton(&path)? {
            AnyWord::Plain(w) => breakpoint(&w)?,
            AnyWord::Sets(w) => breakpoint(&w)?,
        },
        Cmd::Mc { input, model, oracle } => {
            let f = formula(&input)?;
            let m = RegularTreeModel::from_json(&read_json(&model)?)?;
            let r: McResult = if in_fragment(&f, Fragment::PastCTLpm) {
                mc_pctlpm(&m, &f)?
            } else if in_fragment(&f, Fragment::CTLStarPm) {
                mc_ctlspm(&m, &f)?
            } else {
                mc_ctlsf(&m, &f)?
            };
            if oracle {
                let fuel = oracle_bound(&m, &f)?;
                let o = oracle_eval(&m, &f, fuel)?;
                if o != r.root {
                    return Ok(Outcome::Failed(json!({ "checker": r.root, "oracle": o, "fuel": fuel, "model": m.to_json() })));
                }
            }
            Outcome::Ok(r.to_json())
        }
        Cmd::Lasso { automaton: path, word } => {
            let b = match word_automaton(&path)? {
                AnyWord::Plain(w) => lasso(&w, &word)?,
                AnyWord::Sets(w) => lasso(&w, &word)?,
            };
            Outcome::Ok(Value::Bool(b))
        }
        Cmd::Dual { automaton: path, registry: reg } => {
            let a = automaton(&path)?;
            let reg = registry(&a, &reg)?;
            let (d, dreg) = dualize_with_registry(&a, &reg)?;
            Outcome::Ok(json!({ "automaton": d.to_json(), "registry": dreg.to_json(&d.states) }))
        }
        Cmd::Fuzz { seed, n, suite, samples, threads } => {
            if n == 0 {
                return Err(Error::Usage("--n must be at least 1".into()));
            }
            let seed = match seed {
                Some(s) => s,
                None => match std::env::var("TREELOGIC_SEED") {
                    Ok(s) => s.parse().map_err(|_| Error::Usage(format!("TREELOGIC_SEED={s} is not a number")))?,
                    Err(_) => 0,
                },
            };
            let mut cfg = CampaignConfig::new(suite.parse::<Suite>()?, seed, n);
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if let Some(t) = threads {
                cfg.threads = t;
            }
            let report = run_campaign(&cfg);
            if report.passed() {
                Outcome::Ok(report.to_json())
            } else {
                Outcome::Failed(report.to_json())
            }
        }
        Cmd::Fixtures => {
            let outcomes = run_fixtures();
            let lines: Vec<String> = outcomes
                .iter()
                .map(|o| format!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail))
                .collect();
            let text = Value::String(lines.join("\n"));
            if outcomes.iter().all(|o| o.passed) {
                Outcome::Ok(text)
            } else {
                Outcome::Failed(text)
            }
        }
    })
}
