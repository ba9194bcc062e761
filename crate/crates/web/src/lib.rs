//! Browser bindings. Each export takes plain strings (a machine file or a
//! built-in identifier, inputs, certificates) and returns a text report.

use rtverify::search::max_acceptance;
use rtverify::{
    builtin_machine, builtin_verifier, compile_oneway_verifier, compile_rt_verifier, generate_history_certificate,
    generate_rt_certificate, parse_machine_file, serialize_heads, soundness_check, CertBound, CertSearch, LanguageId,
    Machine, VerifierSpec,
};
use wasm_bindgen::prelude::*;

/// Largest input length the page may sweep; keeps the tab responsive.
pub const MAX_SWEEP_LEN: usize = 8;

fn load(source: &str) -> Result<Machine, String> {
    let id = source.trim();
    if let Ok(m) = builtin_machine(id) {
        return Ok(Machine::Automaton(m));
    }
    if let Ok(v) = builtin_verifier(id) {
        return Ok(Machine::Verifier(v));
    }
    parse_machine_file(source).map_err(|e| e.to_string())
}

fn verifier(source: &str) -> Result<VerifierSpec, String> {
    match load(source)? {
        Machine::Verifier(v) => Ok(v),
        Machine::Automaton(_) => Err("expected a verifier".into()),
    }
}

/// Runs every coin outcome of a verifier and reports the acceptance probability.
pub fn run_verifier(source: &str, input: &str, cert: &str) -> Result<String, String> {
    let v = verifier(source)?;
    let c = v.parse_certificate(cert).map_err(|e| e.to_string())?;
    let p = v.acceptance_probability(input, &c).map_err(|e| e.to_string())?;
    let mut out = format!("probability {p}\n");
    for pattern in 0..v.branch_count() {
        let bits = v.branch_bits(pattern);
        let run = v.run_fixed_bits(input, &c, &bits).map_err(|e| e.to_string())?;
        let label: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let path: Vec<&str> = run.trace.iter().map(|cfg| v.state_name(cfg.state)).collect();
        out.push_str(&format!("coins {label:>2}: {} ({}) via {}\n", run.verdict, run.reason, path.join(" ")));
    }
    Ok(out)
}

/// Worst acceptance probability over nonmembers up to `max_len`.
pub fn sweep_soundness(source: &str, language: &str, max_len: usize) -> Result<String, String> {
    if max_len > MAX_SWEEP_LEN {
        return Err(format!("the page sweeps at most length {MAX_SWEEP_LEN}"));
    }
    let v = verifier(source)?;
    let lang: LanguageId = language.trim().parse().map_err(|e: rtverify::ZooError| e.to_string())?;
    let bound = CertBound::default_for(v.mode());
    let report = soundness_check(&v, source.trim(), &lang, max_len, bound, CertSearch::Joint).map_err(|e| e.to_string())?;
    Ok(report.to_text())
}

/// Compiles an automaton into a verifier and produces a certificate for `input`.
pub fn compile_and_certify(source: &str, input: &str) -> Result<String, String> {
    let Machine::Automaton(a) = load(source)? else { return Err("expected an automaton".into()) };
    let (v, cert, how) = if a.is_deterministic() && a.head_count() == 2 {
        let s = serialize_heads(&a).map_err(|e| e.to_string())?;
        let v = compile_rt_verifier(&s).map_err(|e| e.to_string())?;
        (v, generate_rt_certificate(&s, input), "real-time verifier, 1 coin")
    } else {
        let v = compile_oneway_verifier(&a).map_err(|e| e.to_string())?;
        (v, generate_history_certificate(&a, input), "one-way history verifier")
    };
    let mut out = format!("{how}: {} states, {} coin(s)\n", v.states().len(), v.random_bits());
    match cert {
        Ok(c) => {
            let p = v.acceptance_probability(input, &c).map_err(|e| e.to_string())?;
            out.push_str(&format!("certificate ({} cells): {}\nprobability {p}\n", c.len(), v.render_certificate(&c)));
        }
        Err(_) => {
            let tape = v.tape(input).map_err(|e| e.to_string())?;
            let worst = max_acceptance(&v, &tape, CertBound::default_for(v.mode()).for_length(input.len()));
            out.push_str(&format!("not accepted; best any certificate reaches is {}\n", worst.best));
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn simulate(source: &str, input: &str, cert: &str) -> Result<String, JsValue> {
    run_verifier(source, input, cert).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn soundness(source: &str, language: &str, max_len: usize) -> Result<String, JsValue> {
    sweep_soundness(source, language, max_len).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn certify(source: &str, input: &str) -> Result<String, JsValue> {
    compile_and_certify(source, input).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twin_run_reports_both_coins() {
        let out = run_verifier("twin-rt", "01#01", "01").unwrap();
        assert!(out.starts_with("probability 2/2^1\n"));
        assert_eq!(out.lines().filter(|l| l.contains("Accept")).count(), 2);
        assert!(run_verifier("twin-1dfa2", "", "").is_err());
    }

    #[test]
    fn soundness_sweep_reports_half() {
        let out = sweep_soundness("nonpal-rt", "nonpal", 5).unwrap();
        assert!(out.contains("worst-error: 1/2^1"));
        assert!(sweep_soundness("nonpal-rt", "nonpal", 20).is_err());
    }

    #[test]
    fn compile_then_certify() {
        let out = compile_and_certify("twin-1dfa2", "01#01").unwrap();
        assert!(out.contains("probability 2/2^1"), "{out}");
        let out = compile_and_certify("nonpal-1nfa2", "010").unwrap();
        assert!(out.contains("not accepted"), "{out}");
    }

    #[test]
    fn machine_text_is_accepted() {
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../machines/twin-rt.txt")).unwrap();
        assert!(run_verifier(&text, "0#0", "0").unwrap().starts_with("probability 2/2^1"));
    }
}
