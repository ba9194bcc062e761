//! End-to-end acceptance sweep. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use common::*;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use rtverify::checker::{words, Membership};
use rtverify::constructions::structural_violations;
use rtverify::search::max_acceptance;
use rtverify::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn half() -> DyadicProbability {
    DyadicProbability::new(1, 1).unwrap()
}

fn first_failure(report: &CheckReport) -> String {
    match report.failures().next() {
        Some(r) => format!("{} fails at {:?} with {}", report.verifier, r.input, r.probability),
        None => format!("{} has no failures", report.verifier),
    }
}

fn twin_protocol() -> Outcome {
    let v = builtin_verifier("twin-rt").map_err(|e| e.to_string())?;
    let lang = LanguageId::Twin;
    let gen = |w: &str| lang.canonical_certificate(w).ok();
    let c = completeness_check(&v, "twin-rt", &lang, Some(&gen), 7, CertBound::PlusLength(2));
    ensure(c.passed() && !c.rows.is_empty(), || first_failure(&c))?;
    let s = soundness_check(&v, "twin-rt", &lang, 7, CertBound::PlusLength(2), CertSearch::Joint)
        .map_err(|e| e.to_string())?;
    ensure(s.epsilon() == half(), || format!("soundness error {} instead of 1/2", s.epsilon()))?;
    Ok(format!("{} members at 1, {} nonmembers, error {}", c.rows.len(), s.rows.len(), s.epsilon()))
}

fn serialized_pipeline() -> Outcome {
    let mut notes = Vec::new();
    for (id, lang) in [("twin-1dfa2", LanguageId::Twin), ("equal01-1dfa2", LanguageId::Equal01)] {
        let m = builtin_machine(id).map_err(|e| e.to_string())?;
        let s = serialize_heads(&m).map_err(|e| e.to_string())?;
        let bad = structural_violations(s.automaton());
        ensure(bad.is_empty(), || format!("{id}: {} transitions move both heads", bad.len()))?;
        if let Some(w) = language_equivalence(s.automaton(), &m, 10) {
            return Err(format!("{id}: serialized machine disagrees on {w:?}"));
        }
        let v = compile_rt_verifier(&s).map_err(|e| e.to_string())?;
        let gen = |w: &str| generate_rt_certificate(&s, w).ok();
        let c = completeness_check(&v, id, &lang, Some(&gen), 6, CertBound::PlusLength(2));
        ensure(c.passed(), || first_failure(&c))?;
        let snd = soundness_check(&v, id, &lang, 6, CertBound::PlusLength(2), CertSearch::Joint)
            .map_err(|e| e.to_string())?;
        ensure(snd.epsilon() <= half(), || format!("{id}: soundness error {}", snd.epsilon()))?;
        notes.push(format!("{id}: {} states, error {}", s.automaton().states().len(), snd.epsilon()));
    }
    Ok(notes.join("; "))
}

fn nonpal_protocol() -> Outcome {
    let v = builtin_verifier("nonpal-rt").map_err(|e| e.to_string())?;
    let lang = LanguageId::Nonpal;
    let gen = |w: &str| lang.canonical_certificate(w).ok();
    let c = completeness_check(&v, "nonpal-rt", &lang, Some(&gen), 8, CertBound::PlusLength(2));
    ensure(c.passed(), || first_failure(&c))?;
    let s = soundness_check(&v, "nonpal-rt", &lang, 8, CertBound::PlusLength(2), CertSearch::Joint)
        .map_err(|e| e.to_string())?;
    ensure(s.epsilon() <= half(), || format!("soundness error {}", s.epsilon()))?;
    Ok(format!("{} members at 1, {} palindromes, error {}", c.rows.len(), s.rows.len(), s.epsilon()))
}

fn history_verifier() -> Outcome {
    let n = builtin_machine("nonpal-1nfa2").map_err(|e| e.to_string())?;
    let v = compile_oneway_verifier(&n).map_err(|e| e.to_string())?;
    let lang = LanguageId::Nonpal;
    let gen = |w: &str| generate_history_certificate(&n, w).ok();
    let c = completeness_check(&v, "nonpal-1nfa2 history", &lang, Some(&gen), 6, CertBound::Unbounded);
    ensure(c.passed(), || first_failure(&c))?;
    let s = soundness_check(&v, "nonpal-1nfa2 history", &lang, 6, CertBound::Unbounded, CertSearch::Joint)
        .map_err(|e| e.to_string())?;
    ensure(s.epsilon() <= half(), || format!("soundness error {}", s.epsilon()))?;
    Ok(format!("r = {}, {} members at 1, error {} over unbounded certificates", v.random_bits(), c.rows.len(), s.epsilon()))
}

fn hardwired_automaton() -> Outcome {
    let v = builtin_verifier("twin-rt").map_err(|e| e.to_string())?;
    let n = verifier_to_nfa(&v).map_err(|e| e.to_string())?;
    ensure(n.head_count() == 2, || format!("{} heads", n.head_count()))?;
    match language_equivalence(&n, &LanguageId::Twin, 8) {
        None => Ok(format!("{} states, agrees with the twin oracle up to length 8", n.states().len())),
        Some(w) => Err(format!("disagrees with the twin oracle on {w:?}")),
    }
}

/// `a^i b^j c^k` with every exponent at most 4, filtered by membership.
fn lik_words(member: bool) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..=4 {
        for j in 0..=4 {
            for k in 0..=4 {
                let w = format!("{}{}{}", "a".repeat(i), "b".repeat(j), "c".repeat(k));
                if LanguageId::Lik.contains(&w) == member {
                    out.push(w);
                }
            }
        }
    }
    out
}

/// Words `y1#y2#y3#y4` with binary segments of length at most 2.
fn mirror_words() -> Vec<String> {
    let segs = words(&['0', '1'], 2);
    let mut out = Vec::new();
    for a in &segs {
        for b in &segs {
            for c in &segs {
                for d in &segs {
                    out.push(format!("{a}#{b}#{c}#{d}"));
                }
            }
        }
    }
    out
}

fn worst_over(v: &VerifierSpec, inputs: &[String]) -> (DyadicProbability, String) {
    let mut worst = (DyadicProbability::zero(v.random_bits()), String::new());
    for w in inputs {
        let p = max_acceptance(v, &v.tape(w).unwrap(), Some(w.len() + 2)).best;
        if p > worst.0 {
            worst = (p, w.clone());
        }
    }
    worst
}

fn segment_protocols() -> Outcome {
    let lik = LanguageId::Lik;
    let v = lik.builtin_verifier().map_err(|e| e.to_string())?;
    for w in lik_words(true) {
        let c = lik.canonical_certificate(&w).map_err(|e| e.to_string())?;
        let p = v.acceptance_probability(&w, &c).map_err(|e| e.to_string())?;
        ensure(p.is_one(), || format!("lik member {w:?} accepted with {p}"))?;
    }
    let s = soundness_check(&v, "lik-rt", &lik, 8, CertBound::PlusLength(2), CertSearch::Joint)
        .map_err(|e| e.to_string())?;
    let (blocks, at) = worst_over(&v, &lik_words(false));
    let lik_err = s.epsilon().max(blocks);
    ensure(lik_err <= half(), || format!("lik soundness error {lik_err} (block word {at:?})"))?;

    let ln = LanguageId::Mirror(2);
    let v = ln.builtin_verifier().map_err(|e| e.to_string())?;
    ensure(v.random_bits() == 2, || format!("ln:2 verifier uses {} coins", v.random_bits()))?;
    let candidates = mirror_words();
    let members: Vec<&String> = candidates.iter().filter(|w| ln.contains(w)).collect();
    for w in &members {
        let c = ln.canonical_certificate(w).map_err(|e| e.to_string())?;
        let p = v.acceptance_probability(w, &c).map_err(|e| e.to_string())?;
        ensure(p.is_one(), || format!("ln:2 member {w:?} accepted with {p}"))?;
    }
    let bound = DyadicProbability::new(3, 2).unwrap();
    let s = soundness_check(&v, "ln-rt:2", &ln, 7, CertBound::PlusLength(2), CertSearch::Joint)
        .map_err(|e| e.to_string())?;
    let nonmembers: Vec<String> = candidates.iter().filter(|w| !ln.contains(w)).cloned().collect();
    let (blocks, at) = worst_over(&v, &nonmembers);
    let ln_err = s.epsilon().max(blocks);
    ensure(ln_err <= bound, || format!("ln:2 soundness error {ln_err} (at {at:?})"))?;
    Ok(format!(
        "lik error {lik_err}; ln:2 {} members at 1, error {ln_err} over {} nonmembers",
        members.len(),
        s.rows.len() + nonmembers.len()
    ))
}

fn semantics_cross_checks() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let automata = small_automaton();
    let all = all_words(&LETTERS, 4);
    for case in 0..300 {
        let m = automata.new_tree(&mut runner).map_err(|e| e.to_string())?.current().build();
        for w in &all {
            let fast = m.accepts(w).map_err(|e| e.to_string())?;
            ensure(fast == accepts_by_histories(&m, w), || format!("automaton #{case} disagrees on {w:?}"))?;
        }
    }
    let mut runs = 0usize;
    for mode in [InputMode::RealTime, InputMode::OneWay] {
        let verifiers = small_verifier(mode);
        for case in 0..200 {
            let v = verifiers.new_tree(&mut runner).map_err(|e| e.to_string())?.current().build();
            for w in all_words(&LETTERS, 3) {
                for c in all_certificates(CERT.len(), 2) {
                    let p = v.acceptance_probability(&w, &c).map_err(|e| e.to_string())?;
                    ensure(p.denominator() == 1 << v.random_bits() && p.numerator() == accepting_count(&v, &w, &c), || {
                        format!("{mode:?} verifier #{case}: {p} on {w:?}")
                    })?;
                    if mode == InputMode::RealTime {
                        for bits in bit_strings(v.random_bits()) {
                            let run = v.run_fixed_bits(&w, &c, &bits).map_err(|e| e.to_string())?;
                            ensure(run.steps <= w.len() + 2, || format!("real-time run of {} steps on {w:?}", run.steps))?;
                            runs += 1;
                        }
                    }
                }
            }
        }
    }
    for id in ["twin-rt", "nonpal-rt", "lik-rt", "ln-rt:2"] {
        let v = builtin_verifier(id).map_err(|e| e.to_string())?;
        for w in words(v.input_alphabet(), 6) {
            let tape = v.tape(&w).unwrap();
            let witness = max_acceptance(&v, &tape, Some(w.len() + 2)).witness;
            for bits in bit_strings(v.random_bits()) {
                let run = v.run_fixed_bits(&w, &witness, &bits).map_err(|e| e.to_string())?;
                ensure(run.steps <= w.len() + 2, || format!("{id}: {} steps on {w:?}", run.steps))?;
                runs += 1;
            }
        }
    }
    Ok(format!("300 automata, 400 verifiers, {runs} real-time runs within n+2 steps"))
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../machines")
}

fn determinism() -> Outcome {
    let v = builtin_verifier("nonpal-rt").map_err(|e| e.to_string())?;
    let run = |threads: usize| -> Result<(String, String), String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        pool.install(|| {
            let r = soundness_check(&v, "nonpal-rt", &LanguageId::Nonpal, 7, CertBound::PlusLength(2), CertSearch::Joint)
                .map_err(|e| e.to_string())?;
            Ok((r.to_text(), r.to_tsv()))
        })
    };
    let first = run(1)?;
    for threads in [1, 4, 8] {
        ensure(run(threads)? == first, || format!("report changed with {threads} threads"))?;
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .map_err(|e| format!("machines directory: {e}"))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    ensure(!files.is_empty(), || "no bundled machine files".into())?;
    for f in &files {
        let text = std::fs::read_to_string(f).map_err(|e| e.to_string())?;
        let m = parse_machine_file(&text).map_err(|e| format!("{}: {e}", f.display()))?;
        ensure(print_machine(&m) == text, || format!("{} is not reproduced by printing", f.display()))?;
    }
    Ok(format!("reports identical across 1/4/8 threads; {} bundled files round-trip", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("twin protocol", twin_protocol),
        ("head serialization and one-coin verifier", serialized_pipeline),
        ("non-palindrome protocol", nonpal_protocol),
        ("history verifier for nonpal-1nfa2", history_verifier),
        ("verifier to multihead automaton", hardwired_automaton),
        ("segment protocols lik and ln:2", segment_protocols),
        ("semantics cross-checks", semantics_cross_checks),
        ("determinism and round-trip", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
