//! The m-missing-state automaton: nodes are the subsets of states of size
//! below `m` plus an absorbing sink, and a letter moves a node through the
//! missing-set update. A word reaches the sink from the empty node exactly
//! when it is m-compressing, so reachability and breadth-first layering
//! answer compressibility and shortest-compressing-word queries.

use crate::automaton::{Automaton, StateSet};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};
use serde::Serialize;
use std::collections::VecDeque;

/// Largest universe for which the dense mask-to-node table is built.
const MAX_MSA_STATES: usize = 24;

pub type NodeId = u32;

#[derive(Clone, Debug)]
pub struct Msa {
    n: usize,
    m: usize,
    /// Bitmasks of the non-sink nodes, sorted ascending; index 0 is the
    /// empty set (the start node).
    node_masks: Vec<u64>,
    /// Per non-sink node, the successor under a and b.
    next: Vec<[NodeId; 2]>,
}

impl Msa {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn start(&self) -> NodeId {
        0
    }

    pub fn sink(&self) -> NodeId {
        self.node_masks.len() as NodeId
    }

    /// Node count including the sink: sum of C(n,i) for i < m, plus one.
    pub fn node_count(&self) -> usize {
        self.node_masks.len() + 1
    }

    pub fn node_set(&self, id: NodeId) -> Option<StateSet> {
        self.node_masks
            .get(id as usize)
            .map(|&mask| StateSet::from_bits(self.n, mask))
    }

    /// Successor of a non-sink node; the sink has no outgoing transitions.
    pub fn step(&self, node: NodeId, letter: Letter) -> Option<NodeId> {
        if node == self.sink() {
            None
        } else {
            Some(self.next[node as usize][letter.index()])
        }
    }

    /// Run a word from the start node; stops at the sink.
    pub fn run(&self, w: &Word) -> NodeId {
        let mut cur = self.start();
        for &l in w.letters() {
            match self.step(cur, l) {
                Some(next) => cur = next,
                None => return cur,
            }
        }
        cur
    }

    /// Distance from the start to every node (`None` if unreachable).
    fn distances(&self) -> Vec<Option<u32>> {
        let total = self.node_count();
        let mut dist: Vec<Option<u32>> = vec![None; total];
        dist[self.start() as usize] = Some(0);
        let mut queue = VecDeque::from([self.start()]);
        while let Some(node) = queue.pop_front() {
            if node == self.sink() {
                continue;
            }
            let d = dist[node as usize].expect("queued");
            for letter in [Letter::A, Letter::B] {
                let succ = self.next[node as usize][letter.index()];
                if dist[succ as usize].is_none() {
                    dist[succ as usize] = Some(d + 1);
                    queue.push_back(succ);
                }
            }
        }
        dist
    }

    pub fn sink_reachable(&self) -> bool {
        self.distances()[self.sink() as usize].is_some()
    }

    /// Lexicographically smallest shortest word from the start to the
    /// sink, with a < b.
    pub fn shortest_word_to_sink(&self) -> Option<Word> {
        let total = self.node_count();
        let mut parent: Vec<Option<(NodeId, Letter)>> = vec![None; total];
        let mut seen = vec![false; total];
        seen[self.start() as usize] = true;
        let mut queue = VecDeque::from([self.start()]);
        // FIFO order with a explored before b yields the lexicographically
        // smallest among the shortest paths.
        while let Some(node) = queue.pop_front() {
            if node == self.sink() {
                let mut letters = Vec::new();
                let mut cur = node;
                while let Some((prev, letter)) = parent[cur as usize] {
                    letters.push(letter);
                    cur = prev;
                }
                letters.reverse();
                return Some(Word::new(letters));
            }
            for letter in [Letter::A, Letter::B] {
                let succ = self.next[node as usize][letter.index()];
                if !seen[succ as usize] {
                    seen[succ as usize] = true;
                    parent[succ as usize] = Some((node, letter));
                    queue.push_back(succ);
                }
            }
        }
        None
    }

    /// DOT rendering: subsets named by their members, the sink named SINK,
    /// parallel edges merged into one "a,b" label.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph msa {\n  rankdir=LR;\n");
        let name = |id: NodeId| -> String {
            if id == self.sink() {
                "SINK".to_string()
            } else {
                let set = StateSet::from_bits(self.n, self.node_masks[id as usize]);
                let inner: Vec<String> = set.iter().map(|q| q.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            }
        };
        for id in 0..self.node_masks.len() as NodeId {
            out.push_str(&format!("  \"{}\" [shape=circle];\n", name(id)));
        }
        out.push_str("  \"SINK\" [shape=doublecircle];\n");
        for id in 0..self.node_masks.len() as NodeId {
            let [on_a, on_b] = self.next[id as usize];
            if on_a == on_b {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"a,b\"];\n",
                    name(id),
                    name(on_a)
                ));
            } else {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"a\"];\n",
                    name(id),
                    name(on_a)
                ));
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"b\"];\n",
                    name(id),
                    name(on_b)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Build the m-missing-state automaton of `aut`. Requires `1 <= m <= n`;
/// with m = n the sink is trivially unreachable.
pub fn build_msa(aut: &Automaton, m: usize) -> Result<Msa> {
    let n = aut.n();
    if m == 0 || m > n {
        return Err(Error::BadThreshold { m, n });
    }
    if n > MAX_MSA_STATES {
        return Err(Error::TooManyStates { n, max: MAX_MSA_STATES });
    }
    let mut node_masks: Vec<u64> = (0u64..1 << n)
        .filter(|mask| (mask.count_ones() as usize) < m)
        .collect();
    node_masks.sort_unstable();
    let mut index = vec![u32::MAX; 1 << n];
    for (i, &mask) in node_masks.iter().enumerate() {
        index[mask as usize] = i as u32;
    }
    let sink = node_masks.len() as NodeId;
    let mut next = vec![[sink; 2]; node_masks.len()];
    for (i, &mask) in node_masks.iter().enumerate() {
        let set = StateSet::from_bits(n, mask);
        for letter in [Letter::A, Letter::B] {
            let stepped = aut.missing_step(&set, letter)?;
            next[i][letter.index()] = if stepped.len() < m {
                index[stepped.bits() as usize]
            } else {
                sink
            };
        }
    }
    Ok(Msa { n, m, node_masks, next })
}

/// Outcome of the shortest-compressing-word search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum CompressStatus {
    NotCompressible,
    Compressible { word: Word, length: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressReport {
    #[serde(flatten)]
    pub status: CompressStatus,
    /// Meaningful only when compressible: the shortest compressing word is
    /// longer than k.
    pub proper: bool,
}

/// Tri-state compressibility of an automaton for a fixed k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Compressibility {
    NotCompressible,
    Improper,
    Proper,
}

/// Shortest k-compressing word, ties broken lexicographically with a < b.
pub fn shortest_compressing_word(aut: &Automaton, k: usize) -> Result<CompressReport> {
    let msa = build_msa(aut, k)?;
    match msa.shortest_word_to_sink() {
        None => Ok(CompressReport { status: CompressStatus::NotCompressible, proper: false }),
        Some(word) => {
            let length = word.len();
            Ok(CompressReport {
                status: CompressStatus::Compressible { word, length },
                proper: length > k,
            })
        }
    }
}

pub fn is_k_compressible(aut: &Automaton, k: usize) -> Result<bool> {
    Ok(build_msa(aut, k)?.sink_reachable())
}

/// Decide the tri-state: not compressible, compressible but compressed by
/// a word of length at most k (improper), or proper.
pub fn compressibility(aut: &Automaton, k: usize) -> Result<Compressibility> {
    let report = shortest_compressing_word(aut, k)?;
    Ok(match report.status {
        CompressStatus::NotCompressible => Compressibility::NotCompressible,
        CompressStatus::Compressible { .. } => {
            if report.proper {
                Compressibility::Proper
            } else {
                Compressibility::Improper
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive;

    fn cerny() -> Automaton {
        Automaton::from_images(&[1, 1, 2], &[1, 2, 0]).unwrap()
    }

    #[test]
    fn node_counts() {
        // n=3, m=2: {} plus three singletons plus sink.
        let msa = build_msa(&cerny(), 2).unwrap();
        assert_eq!(msa.node_count(), 5);
        assert!(msa.sink_reachable());

        // Bigger automaton: sum of binomials.
        let aut = Automaton::from_images(&[0, 0, 1, 2, 3], &[1, 2, 3, 4, 0]).unwrap();
        let msa = build_msa(&aut, 3).unwrap();
        assert_eq!(msa.node_count(), 1 + 5 + 10 + 1);
    }

    #[test]
    fn identity_sink_unreachable() {
        for n in 2..=5usize {
            let id: Vec<usize> = (0..n).collect();
            let aut = Automaton::from_images(&id, &id).unwrap();
            for m in 1..n {
                assert!(!build_msa(&aut, m).unwrap().sink_reachable());
            }
        }
    }

    #[test]
    fn threshold_validation() {
        assert!(build_msa(&cerny(), 4).is_err());
        assert!(build_msa(&cerny(), 0).is_err());
        // Threshold equal to the state count is allowed; nothing can lose
        // that many states, so the sink is unreachable.
        let msa = build_msa(&cerny(), 3).unwrap();
        assert!(!msa.sink_reachable());
    }

    #[test]
    fn cerny_shortest_2_compressing() {
        let report = shortest_compressing_word(&cerny(), 2).unwrap();
        match report.status {
            CompressStatus::Compressible { ref word, length } => {
                assert_eq!(word.to_string(), "abba");
                assert_eq!(length, 4);
            }
            _ => panic!("expected compressible"),
        }
        assert!(report.proper);
        assert_eq!(compressibility(&cerny(), 2).unwrap(), Compressibility::Proper);
    }

    #[test]
    fn identity_not_compressible() {
        let aut = Automaton::from_images(&[0, 1], &[0, 1]).unwrap();
        let report = shortest_compressing_word(&aut, 1).unwrap();
        assert_eq!(report.status, CompressStatus::NotCompressible);
    }

    #[test]
    fn four_state_merged_triple_with_cycle() {
        // Kernel triple 0,1,2 -> 2 and 3 -> 3; b the 4-cycle.
        let aut = Automaton::from_images(&[2, 2, 2, 3], &[1, 2, 3, 0]).unwrap();
        let report = shortest_compressing_word(&aut, 3).unwrap();
        match report.status {
            CompressStatus::Compressible { ref word, length } => {
                assert_eq!(word.to_string(), "abba");
                assert_eq!(length, 4);
            }
            _ => panic!("expected compressible"),
        }
        assert!(report.proper);
    }

    #[test]
    fn improper_when_short_word_compresses() {
        // Merged triple {0,1,2} with b swapping 0 and 3: aba already
        // reaches deficiency 3.
        let aut = Automaton::from_images(&[2, 2, 2, 3], &[3, 1, 2, 0]).unwrap();
        let report = shortest_compressing_word(&aut, 3).unwrap();
        match report.status {
            CompressStatus::Compressible { length, .. } => assert_eq!(length, 3),
            _ => panic!("expected compressible"),
        }
        assert!(!report.proper);
        assert_eq!(compressibility(&aut, 3).unwrap(), Compressibility::Improper);
    }

    #[test]
    fn five_state_counterexample_is_compressible() {
        let aut = crate::collapsing::s32_counterexample();
        let msa = build_msa(&aut, 3).unwrap();
        assert!(msa.sink_reachable());
    }

    #[test]
    fn determinism() {
        let aut = Automaton::from_images(&[2, 2, 2, 3], &[1, 2, 3, 0]).unwrap();
        let r1 = shortest_compressing_word(&aut, 3).unwrap();
        let r2 = shortest_compressing_word(&aut, 3).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn sink_iff_deficiency_reaches_m_small() {
        // All 3-state automata, all words up to length 6.
        let maps: Vec<Vec<usize>> = (0..27)
            .map(|i| vec![i % 3, (i / 3) % 3, (i / 9) % 3])
            .collect();
        for a in &maps {
            for b in &maps {
                let aut = Automaton::from_images(a, b).unwrap();
                for m in 1..3usize {
                    let msa = build_msa(&aut, m).unwrap();
                    for len in 0..=6usize {
                        for code in 0..(1u32 << len) {
                            let w = Word::from_code(len, code);
                            let hit_sink = msa.run(&w) == msa.sink();
                            assert_eq!(hit_sink, aut.deficiency(&w) >= m);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_naive_oracle_n3() {
        let maps: Vec<Vec<usize>> = (0..27)
            .map(|i| vec![i % 3, (i / 3) % 3, (i / 9) % 3])
            .collect();
        for a in &maps {
            for b in &maps {
                let aut = Automaton::from_images(a, b).unwrap();
                for k in 1..3usize {
                    let report = shortest_compressing_word(&aut, k).unwrap();
                    let brute = naive::shortest_compressing(&aut, k, 8);
                    match report.status {
                        CompressStatus::NotCompressible => assert!(brute.is_none()),
                        CompressStatus::Compressible { length, .. } => {
                            assert_eq!(brute.map(|(len, _)| len), Some(length));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn short_word_extension_monotonicity() {
        // If some word shorter than k compresses, a length-k word does too,
        // so testing "shortest length > k" matches the length-exactly-k
        // reading of properness.
        let maps: Vec<Vec<usize>> = (0..256)
            .map(|i| vec![i % 4, (i / 4) % 4, (i / 16) % 4, (i / 64) % 4])
            .collect();
        for a in maps.iter().step_by(7) {
            for b in maps.iter().step_by(11) {
                let aut = Automaton::from_images(a, b).unwrap();
                for k in 2..4usize {
                    if let Some((len, w)) = naive::shortest_compressing(&aut, k, k) {
                        if len < k {
                            let mut extended = w.clone();
                            while extended.len() < k {
                                extended.push(Letter::A);
                            }
                            assert!(aut.deficiency(&extended) >= k);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dot_output_shape() {
        let aut = Automaton::from_images(&[0, 1], &[0, 1]).unwrap();
        let msa = build_msa(&aut, 1).unwrap();
        let dot = msa.export_dot();
        assert!(dot.starts_with("digraph msa {"));
        assert!(dot.trim_end().ends_with('}'));
        // Identity letters loop on the empty node.
        assert!(dot.contains("\"{}\" -> \"{}\" [label=\"a,b\"];"));

        // Structural sanity: braces balance and every edge line is well formed.
        let opens = dot.matches('{').count();
        let closes = dot.matches('}').count();
        assert_eq!(opens, closes);
        for line in dot.lines() {
            if line.contains("->") {
                assert!(line.trim_end().ends_with("];"));
                assert!(line.contains("[label=\""));
            }
        }
    }

    #[test]
    fn dot_identity_m2_has_four_nodes() {
        let aut = Automaton::from_images(&[0, 1], &[0, 1]).unwrap();
        let msa = build_msa(&aut, 2).unwrap();
        assert_eq!(msa.node_count(), 4);
        let dot = msa.export_dot();
        let node_lines = dot.lines().filter(|l| l.contains("[shape=")).count();
        assert_eq!(node_lines, 4);
    }

    #[test]
    fn dot_cerny_five_nodes() {
        let msa = build_msa(&cerny(), 2).unwrap();
        let dot = msa.export_dot();
        let node_lines = dot.lines().filter(|l| l.contains("[shape=")).count();
        assert_eq!(node_lines, 5);
        assert!(dot.contains("SINK"));
    }
}
