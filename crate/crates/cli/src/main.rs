mod load;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rtverify::checker::{CertGen, DEFAULT_BUDGET};
use rtverify::search::max_acceptance;
use rtverify::zoo::{catalogue, BuiltinKind};
use rtverify::{
    compile_oneway_verifier, compile_rt_verifier, completeness_check, generate_history_certificate,
    generate_rt_certificate, language_equivalence, print_machine, serialize_heads, soundness_check, verifier_to_nfa,
    CertBound, CertSearch, Certificate, LanguageId, Machine, MultiheadAutomaton, VerifierSpec,
};

use load::{fail, load, load_automaton, load_verifier, Reference, UsageError};

/// Simulate, compile, certify and check multihead automata and finite-state verifiers.
///
/// A MACHINE argument is a machine file or a built-in identifier from `zoo --list`.
#[derive(Parser)]
#[command(name = "rtverify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine on one input and print the outcome and trace.
    Simulate {
        #[arg(long, value_name = "MACHINE")]
        machine: String,
        #[arg(long, default_value = "")]
        input: String,
        /// Certificate text (verifiers only).
        #[arg(long, default_value = "")]
        cert: String,
        /// Fixed coin outcomes such as `01`; without it every outcome is run.
        #[arg(long)]
        bits: Option<String>,
    },
    /// Translate a machine and write the result as a machine file.
    Compile {
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(long, value_name = "MACHINE")]
        machine: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a certificate that proves membership of an input.
    Certify {
        #[arg(long, value_name = "MACHINE")]
        machine: String,
        #[arg(long, default_value = "")]
        input: String,
        /// For automata: the verifier the certificate is meant for.
        #[arg(long, value_enum)]
        construction: Option<Construction>,
    },
    /// Sweep all inputs up to a length and report completeness or soundness.
    Check(CheckArgs),
    /// Look for the first input on which two machines (or a machine and a language) disagree.
    Equiv {
        #[arg(long, value_name = "MACHINE")]
        a: String,
        /// Automaton or language identifier.
        #[arg(long, value_name = "MACHINE|LANGUAGE")]
        b: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Built-in machines and languages.
    Zoo {
        /// List every built-in machine and language.
        #[arg(long)]
        list: bool,
        /// Print one built-in as a machine file.
        #[arg(long, value_name = "ID")]
        show: Option<String>,
        /// Write every built-in (with `ln-rt:2` for the family) into a directory.
        #[arg(long, value_name = "DIR")]
        dump: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    /// Two-head deterministic automaton to one where a single head moves per step.
    #[value(alias = "thm2-serialize")]
    Serialize,
    /// Two-head deterministic automaton to a real-time verifier with one coin.
    #[value(name = "rt-verifier", alias = "thm2")]
    RtVerifier,
    /// k-head automaton to a one-way verifier reading a run history.
    #[value(name = "history-verifier", alias = "thm1-fwd")]
    HistoryVerifier,
    /// Verifier to a multihead nondeterministic automaton.
    #[value(name = "to-nfa", alias = "thm1-bwd")]
    ToNfa,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_name = "MACHINE")]
    verifier: String,
    /// Language identifier (`zoo --list`) or an automaton defining membership.
    #[arg(long, value_name = "LANGUAGE")]
    language: String,
    #[arg(long)]
    max_len: usize,
    /// `|w|+K`, a number, or `unbounded`; defaults to `|w|+2` for real-time
    /// verifiers and `unbounded` for one-way ones.
    #[arg(long, value_parser = parse_bound)]
    cert_bound: Option<CertBound>,
    #[arg(long, conflicts_with = "soundness", required_unless_present = "soundness")]
    completeness: bool,
    #[arg(long)]
    soundness: bool,
    /// Where member certificates come from; `canonical` needs a built-in verifier.
    #[arg(long, value_enum)]
    certs: Option<CertSource>,
    /// How nonmember certificates are explored.
    #[arg(long, value_enum, default_value = "joint")]
    search: SearchMode,
    /// Evaluation ceiling for `--search enumerate`.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Worker threads; the report does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertSource {
    Canonical,
    Search,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchMode {
    Joint,
    Enumerate,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Tsv,
}

fn parse_bound(s: &str) -> Result<CertBound, String> {
    let t = s.trim();
    if t == "unbounded" {
        return Ok(CertBound::Unbounded);
    }
    if let Some(k) = t.strip_prefix("|w|+").or_else(|| t.strip_prefix('+')) {
        return k.parse().map(CertBound::PlusLength).map_err(|_| format!("bad bound `{s}`"));
    }
    if t == "|w|" {
        return Ok(CertBound::PlusLength(0));
    }
    t.parse().map(CertBound::Fixed).map_err(|_| format!("expected `|w|+K`, a number or `unbounded`, got `{s}`"))
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn show(w: &str) -> &str {
    if w.is_empty() {
        "ε"
    } else {
        w
    }
}

fn simulate(machine: &str, input: &str, cert: &str, bits: Option<&str>) -> Result<ExitCode, UsageError> {
    match load(machine)?.machine {
        Machine::Automaton(a) => simulate_automaton(&a, input),
        Machine::Verifier(v) => {
            let c = v.parse_certificate(cert)?;
            match bits {
                Some(b) => simulate_fixed(&v, input, &c, b),
                None => {
                    let mut ok = true;
                    let p = v.acceptance_probability(input, &c)?;
                    println!("probability: {p}");
                    for p in 0..v.branch_count() {
                        let bits = v.branch_bits(p);
                        let run = v.run_fixed_bits(input, &c, &bits)?;
                        let label: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                        println!("bits {}: {} ({}, {} steps)", show(&label), run.verdict, run.reason, run.steps);
                        ok &= run.verdict == rtverify::Verdict::Accept;
                    }
                    Ok(status(ok))
                }
            }
        }
    }
}

fn simulate_fixed(v: &VerifierSpec, input: &str, c: &Certificate, bits: &str) -> Result<ExitCode, UsageError> {
    let bits: Vec<bool> = bits
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => fail(format!("--bits takes 0s and 1s, got `{ch}`")),
        })
        .collect::<Result<_, _>>()?;
    let run = v.run_fixed_bits(input, c, &bits)?;
    println!("{}", run.verdict);
    println!("reason: {}", run.reason);
    println!("steps: {}", run.steps);
    for cfg in &run.trace {
        println!(
            "{}\tinput {}\tcert {}\tbits {}",
            v.state_name(cfg.state),
            cfg.input_pos,
            cfg.cert_pos,
            cfg.bits_used
        );
    }
    Ok(status(run.verdict == rtverify::Verdict::Accept))
}

fn simulate_automaton(a: &MultiheadAutomaton, input: &str) -> Result<ExitCode, UsageError> {
    let tape = a.tape(input)?;
    let positions = |p: &[usize]| p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    if a.is_deterministic() {
        let h = a.run_deterministic(&tape)?;
        let accepted = h.outcome == rtverify::Outcome::Accepted;
        println!("{}", if accepted { "Accept" } else { "Reject" });
        println!("outcome: {}", h.outcome);
        for c in &h.configs {
            println!("{}\theads {}", a.state_name(c.state), positions(&c.positions));
        }
        return Ok(status(accepted));
    }
    match a.find_accepting_run(&tape) {
        Some(run) => {
            println!("Accept");
            for step in &run {
                println!("{}\theads {}\tmove {}", a.state_name(step.config.state), positions(&step.config.positions), step.choice);
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("Reject");
            println!("outcome: no accepting run");
            Ok(ExitCode::from(1))
        }
    }
}

fn compile(construction: Construction, machine: &str) -> Result<Machine, UsageError> {
    let loaded = load(machine)?.machine;
    let automaton = || match &loaded {
        Machine::Automaton(a) => Ok(a),
        Machine::Verifier(_) => fail(format!("{machine}: this construction takes an automaton")),
    };
    Ok(match construction {
        Construction::Serialize => Machine::Automaton(serialize_heads(automaton()?)?.into_automaton()),
        Construction::RtVerifier => Machine::Verifier(compile_rt_verifier(&serialize_heads(automaton()?)?)?),
        Construction::HistoryVerifier => Machine::Verifier(compile_oneway_verifier(automaton()?)?),
        Construction::ToNfa => match &loaded {
            Machine::Verifier(v) => Machine::Automaton(verifier_to_nfa(v)?),
            Machine::Automaton(_) => return fail(format!("{machine}: to-nfa takes a verifier")),
        },
    })
}

fn certify(machine: &str, input: &str, construction: Option<Construction>) -> Result<ExitCode, UsageError> {
    let loaded = load(machine)?;
    let (verifier, cert) = match loaded.machine {
        Machine::Verifier(v) => {
            let cert = match loaded.language {
                Some(l) => l.canonical_certificate(input).ok(),
                None => {
                    let r = max_acceptance(&v, &v.tape(input)?, CertBound::default_for(v.mode()).for_length(input.len()));
                    r.best.is_one().then_some(r.witness)
                }
            };
            (v, cert)
        }
        Machine::Automaton(a) => {
            let rt = a.is_deterministic() && a.head_count() == 2;
            match construction {
                Some(Construction::RtVerifier) | None if rt => {
                    let s = serialize_heads(&a)?;
                    let cert = generate_rt_certificate(&s, input).ok();
                    (compile_rt_verifier(&s)?, cert)
                }
                Some(Construction::RtVerifier) => return fail("rt-verifier certificates need a 2-head deterministic automaton"),
                Some(Construction::HistoryVerifier) | None => {
                    let cert = generate_history_certificate(&a, input).ok();
                    (compile_oneway_verifier(&a)?, cert)
                }
                Some(_) => return fail("certificates exist for rt-verifier and history-verifier only"),
            }
        }
    };
    match cert {
        Some(c) => {
            println!("{}", verifier.render_certificate(&c));
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!("{}: no certificate: {} is not accepted", machine, show(input));
            Ok(ExitCode::from(1))
        }
    }
}

fn check(args: &CheckArgs) -> Result<ExitCode, UsageError> {
    let (v, own_language) = load_verifier(&args.verifier)?;
    let reference = Reference::parse(&args.language)?;
    let lang = reference.membership();
    let bound = args.cert_bound.unwrap_or_else(|| CertBound::default_for(v.mode()));
    let canonical: Option<LanguageId> = match (&reference, own_language) {
        (Reference::Language(l), Some(o)) if *l == o => Some(o),
        _ => None,
    };
    let source = args.certs.unwrap_or(if canonical.is_some() { CertSource::Canonical } else { CertSource::Search });
    if source == CertSource::Canonical && canonical.is_none() {
        return fail("--certs canonical needs a built-in verifier checked against its own language");
    }
    if args.soundness && bound == CertBound::Unbounded && matches!(args.search, SearchMode::Enumerate) {
        return fail("--search enumerate needs a finite --cert-bound");
    }
    let run = || -> Result<rtverify::CheckReport, UsageError> {
        if args.completeness {
            let gen = |w: &str| canonical.and_then(|l| l.canonical_certificate(w).ok());
            let certgen: Option<&CertGen<'_>> = (source == CertSource::Canonical).then_some(&gen as &CertGen<'_>);
            Ok(completeness_check(&v, &args.verifier, lang, certgen, args.max_len, bound))
        } else {
            let method = match args.search {
                SearchMode::Joint => CertSearch::Joint,
                SearchMode::Enumerate => CertSearch::Enumerate { budget: args.budget },
            };
            Ok(soundness_check(&v, &args.verifier, lang, args.max_len, bound, method)?)
        }
    };
    let report = match args.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| UsageError(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    match args.format {
        ReportFormat::Text => print!("{}", report.to_text()),
        ReportFormat::Tsv => print!("{}", report.to_tsv()),
    }
    Ok(status(report.passed()))
}

fn equiv(a: &str, b: &str, max_len: usize) -> Result<ExitCode, UsageError> {
    let m = load_automaton(a)?;
    let reference = Reference::parse(b)?;
    match language_equivalence(&m, reference.membership(), max_len) {
        None => {
            println!("no counterexample up to length {max_len}");
            Ok(ExitCode::SUCCESS)
        }
        Some(w) => {
            println!("counterexample: {}", show(&w));
            Ok(ExitCode::from(1))
        }
    }
}

/// Built-in machines, with the `ln-rt` family represented by `ln-rt:2`.
fn builtins() -> Vec<(String, Machine)> {
    catalogue()
        .into_iter()
        .map(|e| {
            let id = e.id.replace(":N", ":2");
            let m = match e.kind {
                BuiltinKind::Automaton => Machine::Automaton(rtverify::builtin_machine(&id).expect("catalogued")),
                BuiltinKind::Verifier => Machine::Verifier(rtverify::builtin_verifier(&id).expect("catalogued")),
            };
            (id, m)
        })
        .collect()
}

fn zoo(list: bool, show_id: Option<&str>, dump: Option<&PathBuf>) -> Result<ExitCode, UsageError> {
    if !list && show_id.is_none() && dump.is_none() {
        return fail("zoo needs --list, --show ID or --dump DIR");
    }
    if list {
        println!("machines:");
        for e in catalogue() {
            let kind = match e.kind {
                BuiltinKind::Automaton => "automaton",
                BuiltinKind::Verifier => "verifier",
            };
            println!("  {:<14} {:<9} {:<8} {}", e.id, kind, e.language, e.summary);
        }
        println!("languages:");
        for l in LanguageId::all_fixed().into_iter().chain([LanguageId::Mirror(2)]) {
            let alphabet: String = l.alphabet().iter().collect();
            let name = if let LanguageId::Mirror(_) = l { "ln:N".to_string() } else { l.to_string() };
            println!("  {name:<11} alphabet {alphabet}");
        }
    }
    if let Some(id) = show_id {
        print!("{}", print_machine(&load(id)?.machine));
    }
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir)?;
        for (id, m) in builtins() {
            let path = dir.join(format!("{}.txt", id.replace(':', "-")));
            std::fs::write(&path, print_machine(&m))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, UsageError> {
    match cli.command {
        Command::Simulate { machine, input, cert, bits } => simulate(&machine, &input, &cert, bits.as_deref()),
        Command::Compile { construction, machine, out } => {
            let text = print_machine(&compile(construction, &machine)?);
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { machine, input, construction } => certify(&machine, &input, construction),
        Command::Check(args) => check(&args),
        Command::Equiv { a, b, max_len } => equiv(&a, &b, max_len),
        Command::Zoo { list, show, dump } => zoo(list, show.as_deref(), dump.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
