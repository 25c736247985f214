use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use twistlab::bits::ElemSet;
use twistlab::companions::{companion_structure, kleene_demo};
use twistlab::formula::{belnap_translate, godel_tarski, parse, Formula};
use twistlab::heyting::FiniteHeyting;
use twistlab::io::{heyting_json, load, poset_json, Document, LoadError, Loaded};
use twistlab::kripke::grz_refutation_search;
use twistlab::order::{enumerate_posets, enumerate_unlabeled, heyting_from_poset};
use twistlab::semantics::{default_twtop_corpus, CheckConfig, Checker, Structure, Validity, Value};
use twistlab::twist::Base;

#[derive(Parser, Debug)]
#[command(
    name = "twistlab",
    version,
    about = "Finite twist-structures, their modal companions and validity checking"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads; 1 runs everything serially, 0 picks a default.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    /// Maximum number of valuations per check (defaults to
    /// TWISTLAB_VALUATION_CAP or 10^7).
    #[arg(long, global = true, value_parser = parse_cap)]
    cap: Option<u128>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum EnumKind {
    Poset,
    Heyting,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a structure file satisfies its laws.
    Validate { path: PathBuf },
    /// Check formulas for validity in a structure; without formulas, the
    /// file's own "formulas" are used.
    Check { path: PathBuf, formulas: Vec<String> },
    /// Translate a formula into the modal language.
    Translate {
        /// Intuitionistic to modal.
        #[arg(long, conflicts_with = "tb", required_unless_present = "tb")]
        gt: bool,
        /// Strong negation to modal with strong negation.
        #[arg(long)]
        tb: bool,
        formula: String,
    },
    /// Lift a twist-structure over a Heyting algebra and compare formulas
    /// with their translations.
    Companion {
        /// Heyting algebra, poset or twist-structure file.
        path: PathBuf,
        /// Comma-separated filter indices (taken from a twist file if omitted).
        #[arg(long)]
        nabla: Option<String>,
        /// Comma-separated ideal indices (taken from a twist file if omitted).
        #[arg(long)]
        delta: Option<String>,
        /// Formula to compare; repeatable. Defaults to the file's formulas,
        /// then to the built-in corpus.
        #[arg(long = "formula")]
        formulas: Vec<String>,
    },
    /// Search all frames up to a size for one refuting a modal formula.
    GrzSearch {
        formula: String,
        #[arg(long, default_value_t = 5)]
        max_worlds: usize,
    },
    /// Run the Kleene-axiom example end to end.
    KleeneDemo,
    /// List small posets or their Heyting algebras.
    Enumerate {
        #[arg(long = "type", value_enum)]
        kind: EnumKind,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// List labeled posets instead of one per isomorphism class.
        #[arg(long)]
        labeled: bool,
    },
}

fn parse_cap(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("cap must be positive".into()),
        Ok(c) => Ok(c),
        Err(e) => Err(e.to_string()),
    }
}

/// What a subcommand produced.
struct Outcome {
    code: u8,
    result: Json,
    text: Vec<String>,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.jobs > 0 {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global();
    }
    let mut cfg = CheckConfig::from_env().parallel(cli.global.jobs != 1);
    if let Some(c) = cli.global.cap {
        cfg.cap = c;
    }
    let name = command_name(&cli.command);
    match run(&cli.command, &cfg) {
        Ok(out) => {
            match cli.global.format {
                Format::Json => {
                    let env = json!({
                        "tool": "twistlab",
                        "version": env!("CARGO_PKG_VERSION"),
                        "command": name,
                        "config": config_echo(&cli.global, &cfg),
                        "exit_code": out.code,
                        "result": out.result,
                    });
                    emit(&serde_json::to_string_pretty(&env).expect("json"));
                }
                Format::Text => {
                    emit(&format!("twistlab {} {name}", env!("CARGO_PKG_VERSION")));
                    for line in &out.text {
                        emit(line);
                    }
                }
            }
            ExitCode::from(out.code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// A closed pipe is not an error worth reporting.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Check { .. } => "check",
        Command::Translate { .. } => "translate",
        Command::Companion { .. } => "companion",
        Command::GrzSearch { .. } => "grz-search",
        Command::KleeneDemo => "kleene-demo",
        Command::Enumerate { .. } => "enumerate",
    }
}

fn config_echo(g: &Global, cfg: &CheckConfig) -> Json {
    json!({
        "format": match g.format { Format::Json => "json", Format::Text => "text" },
        "jobs": g.jobs,
        "parallel": cfg.parallel,
        "valuation_cap": cfg.cap.to_string(),
    })
}

fn run(cmd: &Command, cfg: &CheckConfig) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { path } => Ok(validate(path)),
        Command::Check { path, formulas } => check(path, formulas, cfg),
        Command::Translate { gt, formula, .. } => translate(*gt, formula),
        Command::Companion {
            path,
            nabla,
            delta,
            formulas,
        } => companion(path, nabla.as_deref(), delta.as_deref(), formulas, cfg),
        Command::GrzSearch { formula, max_worlds } => grz(formula, *max_worlds, cfg),
        Command::KleeneDemo => demo(cfg),
        Command::Enumerate {
            kind,
            max_size,
            labeled,
        } => enumerate(*kind, *max_size, *labeled),
    }
}

fn load_doc(path: &Path) -> Result<Document, Failure> {
    load(path).map_err(|e| Failure(e.to_string()))
}

fn validate(path: &Path) -> Outcome {
    match load(path) {
        Ok(doc) => {
            let s = &doc.structure;
            let size = match s {
                Loaded::Poset(p) => p.size(),
                Loaded::Heyting(h) => h.size(),
                Loaded::Tba(b) => b.size(),
                Loaded::Twist(t) => t.size(),
            };
            Outcome {
                code: 0,
                result: json!({"valid": true, "type": s.kind(), "size": size}),
                text: vec![format!("ok: {} with {size} elements", s.kind())],
            }
        }
        Err(e @ LoadError::Invalid { .. }) => Outcome {
            code: 1,
            result: json!({"valid": false, "violation": e.to_string()}),
            text: vec![format!("invalid: {e}")],
        },
        Err(e) => Outcome {
            code: 2,
            result: json!({"error": e.to_string()}),
            text: vec![format!("error: {e}")],
        },
    }
}

fn parse_formula(s: &str) -> Result<Formula, Failure> {
    parse(s).map_err(|e| Failure(format!("cannot parse {s:?}: {e}")))
}

fn labeller(s: Structure<'_>) -> impl Fn(Value) -> String + '_ {
    let lattice: Option<&FiniteHeyting> = match s {
        Structure::Heyting(h) => Some(h),
        Structure::Tba(b) => Some(b.algebra()),
        Structure::Twist(t) => Some(t.lattice()),
    };
    move |v| match (lattice, v) {
        (Some(h), Value::Elem(a)) => h.label(a),
        (Some(h), Value::Pair(a, b)) => format!("({}, {})", h.label(a), h.label(b)),
        (None, v) => format!("{v:?}"),
    }
}

fn check(path: &Path, formulas: &[String], cfg: &CheckConfig) -> Result<Outcome, Failure> {
    let doc = load_doc(path)?;
    let structure: Structure<'_> = match &doc.structure {
        Loaded::Heyting(h) => Structure::Heyting(h),
        Loaded::Tba(b) => Structure::Tba(b),
        Loaded::Twist(t) => Structure::Twist(t),
        Loaded::Poset(_) => return Err(Failure("a poset is not an algebra; use its Heyting algebra".into())),
    };
    let phis: Vec<Formula> = if formulas.is_empty() {
        doc.formulas.clone()
    } else {
        formulas.iter().map(|s| parse_formula(s)).collect::<Result<_, _>>()?
    };
    if phis.is_empty() {
        return Err(Failure("no formulas given".into()));
    }
    let checker = Checker::new(structure, *cfg)?;
    let show = labeller(structure);
    let mut results = Vec::new();
    let mut text = Vec::new();
    let mut code = 0;
    for phi in &phis {
        let v = checker.check(phi)?;
        match &v {
            Validity::Valid => text.push(format!("valid: {phi}")),
            Validity::Refuted(w) => {
                code = 1;
                let vals: Vec<String> = w.valuation.iter().map(|(k, x)| format!("{k} = {}", show(*x))).collect();
                text.push(format!("refuted: {phi}"));
                text.push(format!("  at {} with value {}", vals.join(", "), show(w.value)));
            }
        }
        let mut entry = serde_json::to_value(&v)?;
        entry["formula"] = Json::String(phi.to_string());
        results.push(entry);
    }
    Ok(Outcome {
        code,
        result: Json::Array(results),
        text,
    })
}

fn translate(gt: bool, formula: &str) -> Result<Outcome, Failure> {
    let phi = parse_formula(formula)?;
    let out = if gt {
        godel_tarski(&phi)?
    } else {
        belnap_translate(&phi)?
    };
    Ok(Outcome {
        code: 0,
        result: json!({"input": phi.to_string(), "translation": out.to_string(), "map": if gt { "gt" } else { "tb" }}),
        text: vec![out.to_string()],
    })
}

fn parse_indices(s: &str) -> Result<ElemSet, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| Failure(format!("bad index {t:?}: {e}"))))
        .collect()
}

fn companion(
    path: &Path,
    nabla: Option<&str>,
    delta: Option<&str>,
    formulas: &[String],
    cfg: &CheckConfig,
) -> Result<Outcome, Failure> {
    let doc = load_doc(path)?;
    let (a, from_file): (FiniteHeyting, Option<(ElemSet, ElemSet)>) = match &doc.structure {
        Loaded::Heyting(h) => ((**h).clone(), None),
        Loaded::Poset(p) => (heyting_from_poset(p).0, None),
        Loaded::Twist(t) => match t.base() {
            Base::Heyting(h) => ((**h).clone(), Some((t.nabla(), t.delta()))),
            Base::Tba(_) => return Err(Failure("the base must be a Heyting algebra".into())),
        },
        Loaded::Tba(_) => return Err(Failure("the base must be a Heyting algebra".into())),
    };
    let pick = |flag: Option<&str>, fallback: Option<ElemSet>, name: &str| -> Result<ElemSet, Failure> {
        match (flag, fallback) {
            (Some(s), _) => parse_indices(s),
            (None, Some(x)) => Ok(x),
            (None, None) => Err(Failure(format!("--{name} is required for this file"))),
        }
    };
    let n = pick(nabla, from_file.map(|p| p.0), "nabla")?;
    let d = pick(delta, from_file.map(|p| p.1), "delta")?;
    let corpus: Vec<Formula> = if !formulas.is_empty() {
        formulas.iter().map(|s| parse_formula(s)).collect::<Result<_, _>>()?
    } else if !doc.formulas.is_empty() {
        doc.formulas.clone()
    } else {
        default_twtop_corpus()
    };
    let inst = companion_structure(a, n, d)?;
    let report = inst.report(&corpus, cfg)?;
    let ok = report.mismatches.is_empty() && report.twtop.asserted && report.twtop.mismatches.is_empty();
    let h = inst.source.lattice();
    let set = |s: ElemSet| {
        let items: Vec<String> = s.iter().map(|x| h.label(x)).collect();
        format!("{{{}}}", items.join(", "))
    };
    let text = vec![
        format!(
            "source: {} elements, nabla {}, delta {}, closure {}",
            report.source_size,
            set(report.nabla),
            set(report.delta),
            set(report.closure)
        ),
        format!(
            "lifted algebra: {} elements; companion {} elements; target {} elements",
            report.lifted_size, report.companion_size, report.target_size
        ),
        format!(
            "hypotheses: grz {}, opens equal compatible opens {}",
            report.twtop.base_grz, report.twtop.opens_eq_lambda
        ),
        format!(
            "formulas: {}, mismatches {}, open-pairs mismatches {}",
            report.rows.len(),
            report.mismatches.len(),
            report.twtop.mismatches.len()
        ),
    ];
    Ok(Outcome {
        code: if ok { 0 } else { 1 },
        result: serde_json::to_value(&report)?,
        text,
    })
}

fn grz(formula: &str, max_worlds: usize, cfg: &CheckConfig) -> Result<Outcome, Failure> {
    let phi = parse_formula(formula)?;
    if max_worlds > 6 {
        return Err(Failure("--max-worlds above 6 is not supported".into()));
    }
    let s = grz_refutation_search(&phi, max_worlds, cfg)?;
    let mut result = serde_json::to_value(&s)?;
    result["formula"] = Json::String(phi.to_string());
    if let Some(r) = &s.refutation {
        result["refutation"]["frame"] = poset_json(&r.frame);
    }
    let text = match &s.refutation {
        None => vec![format!(
            "no refutation on the {} frames with at most {max_worlds} worlds (bounded search, not a proof)",
            s.frames_checked
        )],
        Some(r) => vec![
            format!("refuted after {} frames", s.frames_checked),
            serde_json::to_string(&json!({
                "frame": poset_json(&r.frame),
                "valuation": r.valuation,
                "world": r.world,
            }))?,
        ],
    };
    Ok(Outcome {
        code: if s.refutation.is_some() { 1 } else { 0 },
        result,
        text,
    })
}

fn demo(cfg: &CheckConfig) -> Result<Outcome, Failure> {
    let d = kleene_demo(cfg)?;
    let expected = d.kleene.is_valid() && !d.kleene_prime.is_valid() && d.scan.violations.is_empty();
    Ok(Outcome {
        code: if expected { 0 } else { 1 },
        result: serde_json::to_value(&d)?,
        text: d.transcript.clone(),
    })
}

fn enumerate(kind: EnumKind, max_size: usize, labeled: bool) -> Result<Outcome, Failure> {
    if max_size > 6 {
        return Err(Failure("--max-size above 6 is not supported".into()));
    }
    let posets = if labeled {
        enumerate_posets(max_size)
    } else {
        enumerate_unlabeled(max_size)
    };
    let (items, text): (Vec<Json>, Vec<String>) = match kind {
        EnumKind::Poset => posets
            .iter()
            .map(|p| {
                let j = poset_json(p);
                let strict: Vec<String> = p.strict_pairs().map(|(a, b)| format!("{a}<{b}")).collect();
                (j, format!("{} [{}]", p.size(), strict.join(" ")))
            })
            .unzip(),
        EnumKind::Heyting => posets
            .iter()
            .map(|p| {
                let h = heyting_from_poset(p).0;
                let line = format!("{} elements, from a poset of {}", h.size(), p.size());
                (heyting_json(&h), line)
            })
            .unzip(),
    };
    let mut lines = vec![format!("{} structures", items.len())];
    lines.extend(text);
    Ok(Outcome {
        code: 0,
        result: json!({"count": items.len(), "items": items}),
        text: lines,
    })
}
