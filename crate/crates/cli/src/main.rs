//! `relaxrev`: reasoning, relaxation and revision from the command line.
//!
//! Exit codes: 0 success or verdict holds, 1 negative verdict, 2 usage or
//! parse error, 3 budget exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relaxrev::oracle::{check_postulates, joint_signature, PostulateVerdict, RankTable};
use relaxrev::par::Exec;
use relaxrev::reasoner::{self, Reasoner};
use relaxrev::relax::{relax_formula, ConceptOperator, FormulaRelaxMode, OperatorId};
use relaxrev::revise::{revise, Conflict, RevisionConfig};
use relaxrev::syntax::{parse_concept, parse_kb, parse_sentence, render_kb};
use relaxrev::{Concept, Error, KnowledgeBase, Signature};

#[derive(Parser, Debug)]
#[command(name = "relaxrev", version, about = "Relaxation-based revision of DL knowledge bases")]
struct Cli {
    /// Line-oriented key=value output.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Satisfiability and coherence of a KB.
    Check { kb: PathBuf },
    /// Whether a KB entails a sentence such as "A [= B".
    Entails {
        kb: PathBuf,
        sentence: String,
        /// Describe a counter-model when the entailment fails.
        #[arg(long)]
        witness: bool,
    },
    /// Relax every sentence of a KB (or one) by a fixed degree.
    Relax {
        kb: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Only relax the sentence at this 0-based index.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Revise OLD by NEW.
    Revise {
        old: PathBuf,
        new: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        /// Write the revised KB here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check the revision postulates on OLD, NEW by finite enumeration.
    Verify {
        old: PathBuf,
        new: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value_t = 2)]
        domain: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank of every interpretation up to a domain size.
    Rank {
        kb: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value_t = 1)]
        domain: usize,
        #[arg(long, default_value_t = 4)]
        max_sum: u32,
    },
}

#[derive(Args, Debug, Default)]
struct OpArgs {
    /// Concept operator, e.g. kappa_bot, rho_top, rho_e.
    #[arg(long = "op")]
    operator: Option<String>,
    /// lhs (retract left sides) or rhs (relax right sides).
    #[arg(long)]
    mode: Option<String>,
    /// unsat or incoherence.
    #[arg(long)]
    conflict: Option<String>,
    /// Comma-separated exception concepts.
    #[arg(long)]
    exceptions: Option<String>,
    #[arg(long)]
    max_total_degree: Option<u32>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(String, bool), Failure>;

#[derive(Debug, Default)]
struct Settings {
    operator: Option<String>,
    mode: Option<String>,
    conflict: Option<String>,
    exceptions: Option<String>,
    max_total_degree: Option<u32>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Settings, Failure> {
        let mut s = Settings::default();
        let Some(path) = path else { return Ok(s) };
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Failure::Usage(format!("{}:{}: expected `key = value`", path.display(), n + 1));
            let (key, value) = line.split_once('=').ok_or_else(bad)?;
            let value = value.trim().to_string();
            match key.trim() {
                "operator" => s.operator = Some(value),
                "mode" => s.mode = Some(value),
                "conflict" => s.conflict = Some(value),
                "exceptions" => s.exceptions = Some(value.trim_start_matches('[').trim_end_matches(']').to_string()),
                "max_total_degree" => s.max_total_degree = Some(value.parse().map_err(|_| bad())?),
                other => return Err(Failure::Usage(format!("{}:{}: unknown key `{other}`", path.display(), n + 1))),
            }
        }
        Ok(s)
    }

    fn overlay(mut self, a: &OpArgs) -> Settings {
        self.operator = a.operator.clone().or(self.operator);
        self.mode = a.mode.clone().or(self.mode);
        self.conflict = a.conflict.clone().or(self.conflict);
        self.exceptions = a.exceptions.clone().or(self.exceptions);
        self.max_total_degree = a.max_total_degree.or(self.max_total_degree);
        self
    }

    fn revision(&self) -> Result<RevisionConfig, Failure> {
        let id = match &self.operator {
            Some(s) => OperatorId::parse(s).ok_or_else(|| Failure::Usage(format!("unknown operator `{s}`")))?,
            None => OperatorId::KappaBot,
        };
        let mode = match &self.mode {
            Some(s) => FormulaRelaxMode::parse(s).ok_or_else(|| Failure::Usage(format!("unknown mode `{s}`")))?,
            None => match id.direction() {
                relaxrev::relax::Direction::Relax => FormulaRelaxMode::RelaxRhs,
                relaxrev::relax::Direction::Retract => FormulaRelaxMode::RetractLhs,
            },
        };
        let conflict = match &self.conflict {
            Some(s) => Conflict::parse(s).ok_or_else(|| Failure::Usage(format!("unknown conflict `{s}`")))?,
            None => Conflict::Unsat,
        };
        let exceptions = self
            .exceptions
            .iter()
            .flat_map(|s| s.split(','))
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_concept)
            .collect::<Result<Vec<Concept>, _>>()?;
        let operator = ConceptOperator::new(id, exceptions).map_err(|e| Failure::Usage(e.to_string()))?;
        let mut config = RevisionConfig::new(operator, mode, conflict);
        if let Some(d) = self.max_total_degree {
            config.max_total_degree = d;
        }
        Ok(config)
    }
}

fn read_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_kb(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn check(kb: &KnowledgeBase, porcelain: bool) -> Outcome {
    let r = Reasoner::new(kb);
    let sat = r.is_satisfiable()?;
    let unsat_names = if sat { r.unsat_named_concepts()? } else { Vec::new() };
    let names: Vec<&str> = unsat_names.iter().map(|n| n.as_str()).collect();
    let out = if porcelain {
        format!("satisfiable={sat}\ncoherent={}\nunsat_concepts={}\n", sat && names.is_empty(), names.join(","))
    } else if !sat {
        "UNSATISFIABLE\n".to_string()
    } else if names.is_empty() {
        "SATISFIABLE\nCOHERENT\n".to_string()
    } else {
        format!("SATISFIABLE\nINCOHERENT: {}\n", names.join(", "))
    };
    Ok((out, sat))
}

fn entails(kb: &KnowledgeBase, text: &str, witness: bool, porcelain: bool) -> Outcome {
    let s = parse_sentence(text.trim().trim_end_matches('.'))?;
    let kb = kb.with_signature(&kb.signature().merge(&Signature::infer([&s])?)?)?;
    let v = Reasoner::new(&kb).entails_verdict(&s, witness)?;
    let mut out = if porcelain {
        format!("entails={}\n", v.holds)
    } else {
        format!("{}\n", if v.holds { "ENTAILED" } else { "NOT ENTAILED" })
    };
    if let Some(w) = v.witness {
        let _ = writeln!(out, "{}{w}", if porcelain { "witness=" } else { "counter-model: " });
    }
    Ok((out, v.holds))
}

fn relax(kb: &KnowledgeBase, config: &RevisionConfig, k: usize, index: Option<usize>) -> Outcome {
    if let Some(i) = index.filter(|&i| i >= kb.len()) {
        return Err(Failure::Usage(format!("index {i} out of range for {} sentences", kb.len())));
    }
    let sentences = kb
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let deg = if index.is_none_or(|j| j == i) { k } else { 0 };
            relax_formula(s, config.mode, &config.operator, deg, kb)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((render_kb(&kb.with_sentences(sentences)?), true))
}

fn run_revise(old: &KnowledgeBase, new: &KnowledgeBase, config: &RevisionConfig, output: Option<&Path>, porcelain: bool) -> Outcome {
    let r = revise(old, new, config)?;
    if let Some(path) = output {
        fs::write(path, render_kb(&r.revised)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok((if porcelain { r.porcelain() } else { r.report() }, true))
}

fn verify(old: &KnowledgeBase, new: &KnowledgeBase, config: &RevisionConfig, domain: usize, seed: u64) -> Outcome {
    let mut config = config.clone();
    config.exec = Exec::default();
    let report = check_postulates(old, new, &config, domain, seed)?;
    let ok = report.lines.iter().all(|l| !matches!(l.verdict, PostulateVerdict::Fails(_)));
    Ok((report.to_string(), ok))
}

fn rank(kb: &KnowledgeBase, config: &RevisionConfig, domain: usize, max_sum: u32, porcelain: bool) -> Outcome {
    let sig = joint_signature([kb])?;
    let table = RankTable::build(kb, &sig, config.mode, &config.operator, kb, domain, max_sum, Exec::default())?;
    let mut out = String::new();
    for (&(n, i), r) in &table.ranks {
        if porcelain {
            let _ = writeln!(out, "rank.{n}.{i}={r}");
        } else {
            let _ = writeln!(out, "domain {n} interpretation {i}: {r}");
        }
    }
    if !porcelain {
        let _ = writeln!(out, "{} interpretations, {} unreached within {max_sum}", table.ranks.len(), table.unreached());
    }
    Ok((out, true))
}

fn run(cli: &Cli) -> Outcome {
    let settings = Settings::load(cli.config.as_deref())?;
    let p = cli.porcelain;
    match &cli.command {
        Command::Check { kb } => check(&read_kb(kb)?, p),
        Command::Entails { kb, sentence, witness } => entails(&read_kb(kb)?, sentence, *witness, p),
        Command::Relax { kb, op, k, index } => relax(&read_kb(kb)?, &settings.overlay(op).revision()?, *k, *index),
        Command::Revise { old, new, op, output } => {
            run_revise(&read_kb(old)?, &read_kb(new)?, &settings.overlay(op).revision()?, output.as_deref(), p)
        }
        Command::Verify { old, new, op, domain, seed } => {
            verify(&read_kb(old)?, &read_kb(new)?, &settings.overlay(op).revision()?, *domain, *seed)
        }
        Command::Rank { kb, op, domain, max_sum } => {
            rank(&read_kb(kb)?, &settings.overlay(op).revision()?, *domain, *max_sum, p)
        }
    }
}

fn exit_code(e: &Failure) -> u8 {
    match e {
        Failure::Usage(_) => 2,
        Failure::Core(Error::BudgetExceeded { .. } | Error::ResourceExceeded(_)) => 3,
        Failure::Core(Error::ConflictingInput | Error::NotEnoughExceptions { .. }) => 1,
        Failure::Core(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("RELAXREV_BUDGET") {
        match v.trim().parse() {
            Ok(n) => reasoner::set_default_budget(n),
            Err(_) => {
                eprintln!("relaxrev: RELAXREV_BUDGET must be a node count, got `{v}`");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            let msg = match &e {
                Failure::Usage(m) => m.clone(),
                Failure::Core(err) => err.to_string(),
            };
            eprintln!("relaxrev: {msg}");
            ExitCode::from(exit_code(&e))
        }
    }
}
