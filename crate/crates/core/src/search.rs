//! Exact worst-case acceptance over all certificates.
//!
//! The `2^r` hardwired runs of a verifier share one certificate, which each reads
//! one-way. Grouping the runs by the certificate cell they are waiting on gives a
//! finite graph: a node is the tuple of run states (control state, input position,
//! bits used) just before the runs read the next cell, and an edge guesses that
//! cell's symbol. Ending the certificate at a node finishes every run, and the
//! number of accepting runs there is the acceptance count of the certificate
//! spelled by the path. Maximising over the nodes reached within the length bound
//! is therefore the same as maximising over all certificates of bounded length,
//! without enumerating them.

use std::collections::{HashMap, HashSet};

use crate::dyadic::DyadicProbability;
use crate::symbol::Tape;
use crate::verifier::{CertSym, Certificate, Step, Verdict, VerifierSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Branch {
    Live { state: u32, pos: u32, bits: u32 },
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Largest acceptance probability reached.
    pub best: DyadicProbability,
    /// A certificate attaining `best`.
    pub witness: Certificate,
    /// Distinct joint configurations explored.
    pub nodes: usize,
}

struct Searcher<'a> {
    spec: &'a VerifierSpec,
    tape: &'a Tape,
    bits: Vec<Vec<bool>>,
    cache: HashMap<(usize, Branch, CertSym), Branch>,
}

impl Searcher<'_> {
    /// Runs one branch on a fixed certificate cell until it leaves the cell or halts.
    fn advance(&mut self, j: usize, b: Branch, cell: CertSym) -> Branch {
        let Branch::Live { .. } = b else { return b };
        if let Some(&hit) = self.cache.get(&(j, b, cell)) {
            return hit;
        }
        let mut seen = HashSet::new();
        let mut cur = b;
        let out = loop {
            let Branch::Live { state, pos, bits } = cur else { break cur };
            if !seen.insert(cur) {
                break Branch::Rejected;
            }
            match self.spec.step(self.tape, state as usize, pos as usize, bits, &self.bits[j], cell) {
                Step::Halt(Verdict::Accept, _) => break Branch::Accepted,
                Step::Halt(Verdict::Reject, _) => break Branch::Rejected,
                Step::Continue { state, input_pos, bits_used, cert_moved } => {
                    let next = Branch::Live { state: state as u32, pos: input_pos as u32, bits: bits_used };
                    if cert_moved {
                        break next;
                    }
                    cur = next;
                }
            }
        };
        self.cache.insert((j, b, cell), out);
        out
    }

    fn finish(&mut self, node: &[Branch]) -> usize {
        (0..node.len()).filter(|&j| self.advance(j, node[j], CertSym::End) == Branch::Accepted).count()
    }
}

/// Maximum acceptance probability of `spec` on `tape` over every certificate of
/// length at most `bound` (every certificate when `bound` is `None`).
pub fn max_acceptance(spec: &VerifierSpec, tape: &Tape, bound: Option<usize>) -> SearchResult {
    let branches = spec.branch_count();
    let mut s = Searcher { spec, tape, bits: (0..branches).map(|p| spec.branch_bits(p)).collect(), cache: HashMap::new() };
    let initial = if spec.start() == spec.accept() {
        Branch::Accepted
    } else if spec.start() == spec.reject() {
        Branch::Rejected
    } else {
        Branch::Live { state: spec.start() as u32, pos: 0, bits: 0 }
    };

    // Arena of explored nodes with back-pointers for witness reconstruction.
    let mut nodes: Vec<Vec<Branch>> = vec![vec![initial; branches]];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut index: HashMap<Vec<Branch>, usize> = HashMap::from([(nodes[0].clone(), 0)]);
    let mut layer = vec![0usize];
    let mut depth = 0usize;
    // (accepting runs, node id) of the best certificate end seen so far
    let mut best: Option<(usize, usize)> = None;
    let symbols = spec.cert_alphabet().len();

    'outer: while !layer.is_empty() {
        let mut next_layer = Vec::new();
        for &id in &layer {
            let accepted = s.finish(&nodes[id]);
            if best.is_none_or(|(b, _)| accepted > b) {
                best = Some((accepted, id));
            }
            let best_count = best.map_or(0, |(b, _)| b);
            if best_count == branches {
                break 'outer;
            }
            if bound.is_some_and(|b| depth >= b) {
                continue;
            }
            let node = nodes[id].clone();
            let optimistic = node.iter().filter(|b| !matches!(b, Branch::Rejected)).count();
            if optimistic <= best_count || node.iter().all(|b| !matches!(b, Branch::Live { .. })) {
                continue;
            }
            for sym in 0..symbols {
                let child: Vec<Branch> =
                    (0..branches).map(|j| s.advance(j, node[j], CertSym::Sym(sym))).collect();
                if child.iter().filter(|b| !matches!(b, Branch::Rejected)).count() <= best_count {
                    continue;
                }
                if !index.contains_key(&child) {
                    index.insert(child.clone(), nodes.len());
                    parent.push(Some((id, sym)));
                    next_layer.push(nodes.len());
                    nodes.push(child);
                }
            }
        }
        layer = next_layer;
        depth += 1;
    }

    let (best_count, best_node) = best.expect("the root is always evaluated");
    let mut witness = Vec::new();
    let mut cur = best_node;
    while let Some((p, sym)) = parent[cur] {
        witness.push(sym);
        cur = p;
    }
    witness.reverse();
    SearchResult {
        best: DyadicProbability::new(best_count as u64, spec.random_bits()).expect("count is at most 2^r"),
        witness: Certificate(witness),
        nodes: nodes.len(),
    }
}
