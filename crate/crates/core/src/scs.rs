//! Exact shortest word containing a given set of factor patterns.
//!
//! A multi-pattern matching automaton (trie with failure links, converted
//! to a dense two-letter DFA) tracks which patterns have been completed;
//! breadth-first search over (matcher node, completed set) pairs finds the
//! minimum length, and the layered predecessor structure reconstructs one
//! or all optimal words.

use crate::error::{Error, Result};
use crate::regex::Regex;
use crate::word::{Letter, Word};
use serde::Serialize;

/// Most patterns the completed-set bitmask supports.
pub const MAX_PATTERNS: usize = 24;

/// Default cap on how many optimal words enumeration may materialize.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Multi-pattern matcher over {a,b} with per-node completed-pattern masks.
pub struct PatternIndex {
    patterns: Vec<Word>,
    /// Dense transitions: next[node][letter].
    next: Vec<[u32; 2]>,
    /// Patterns completed on entering the node, including via suffix links.
    mask: Vec<u32>,
}

impl PatternIndex {
    pub fn build(patterns: &[Word]) -> Result<PatternIndex> {
        if patterns.is_empty() || patterns.iter().any(|p| p.is_empty()) {
            return Err(Error::BadPatternSet);
        }
        if patterns.len() > MAX_PATTERNS {
            return Err(Error::TooManyPatterns { count: patterns.len(), max: MAX_PATTERNS });
        }
        // Trie construction; 0 is the root.
        let mut children: Vec<[Option<u32>; 2]> = vec![[None; 2]];
        let mut mask: Vec<u32> = vec![0];
        for (i, p) in patterns.iter().enumerate() {
            let mut node = 0usize;
            for &l in p.letters() {
                let slot = children[node][l.index()];
                node = match slot {
                    Some(c) => c as usize,
                    None => {
                        children.push([None; 2]);
                        mask.push(0);
                        let c = (children.len() - 1) as u32;
                        children[node][l.index()] = Some(c);
                        c as usize
                    }
                };
            }
            mask[node] |= 1 << i;
        }
        // Failure links by breadth-first order, folding suffix masks and
        // resolving the dense transition table as we go.
        let count = children.len();
        let mut fail = vec![0u32; count];
        let mut next = vec![[0u32; 2]; count];
        let mut queue = std::collections::VecDeque::new();
        for l in 0..2usize {
            match children[0][l] {
                Some(c) => {
                    fail[c as usize] = 0;
                    next[0][l] = c;
                    queue.push_back(c);
                }
                None => next[0][l] = 0,
            }
        }
        while let Some(node) = queue.pop_front() {
            let n = node as usize;
            mask[n] |= mask[fail[n] as usize];
            for l in 0..2usize {
                match children[n][l] {
                    Some(c) => {
                        fail[c as usize] = next[fail[n] as usize][l];
                        next[n][l] = c;
                        queue.push_back(c);
                    }
                    None => next[n][l] = next[fail[n] as usize][l],
                }
            }
        }
        Ok(PatternIndex { patterns: patterns.to_vec(), next, mask })
    }

    pub fn node_count(&self) -> usize {
        self.next.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn full_mask(&self) -> u32 {
        if self.patterns.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.patterns.len()) - 1
        }
    }

    pub fn step(&self, node: u32, letter: Letter) -> u32 {
        self.next[node as usize][letter.index()]
    }

    pub fn node_mask(&self, node: u32) -> u32 {
        self.mask[node as usize]
    }

    /// Which patterns occur in the word as factors.
    pub fn scan(&self, w: &Word) -> u32 {
        let mut node = 0u32;
        let mut seen = 0u32;
        for &l in w.letters() {
            node = self.step(node, l);
            seen |= self.node_mask(node);
        }
        seen
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScsSolution {
    pub length: usize,
    /// Optimal words; all of them if enumeration was requested, otherwise
    /// the lexicographically smallest one. Always in increasing
    /// lexicographic order.
    pub words: Vec<Word>,
    /// Completed-pattern bitmask shared by every reported word.
    pub covered: u32,
    /// Number of optimal words (only exact when enumeration was requested).
    pub optimal_count: u64,
}

pub fn scs_solve(patterns: &[Word], enumerate_all: bool) -> Result<ScsSolution> {
    scs_solve_capped(patterns, enumerate_all, DEFAULT_ENUMERATION_CAP)
}

/// Exact search. States pair a matcher node with the set of completed
/// patterns, so the space is bounded by nodes times 2^patterns.
pub fn scs_solve_capped(
    patterns: &[Word],
    enumerate_all: bool,
    cap: u64,
) -> Result<ScsSolution> {
    let index = PatternIndex::build(patterns)?;
    let nodes = index.node_count() as u64;
    let masks = 1u64 << index.pattern_count();
    let state_count = nodes
        .checked_mul(masks)
        .filter(|&c| c <= (1 << 31))
        .ok_or(Error::TooManyPatterns { count: patterns.len(), max: MAX_PATTERNS })?
        as usize;
    let full = index.full_mask();
    let encode = |node: u32, mask: u32| -> u32 { mask * index.node_count() as u32 + node };
    let decode_node = |state: u32| -> u32 { state % index.node_count() as u32 };
    let decode_mask = |state: u32| -> u32 { state / index.node_count() as u32 };

    const UNSEEN: u16 = u16::MAX;
    let mut dist = vec![UNSEEN; state_count];
    let start = encode(0, 0);
    dist[start as usize] = 0;
    let mut layers: Vec<Vec<u32>> = vec![vec![start]];
    let optimum;
    'bfs: loop {
        let depth = layers.len() - 1;
        assert!(depth < UNSEEN as usize - 1, "search depth exceeds pattern reach");
        let mut next_layer = Vec::new();
        let mut goal_found = false;
        for &state in &layers[depth] {
            let node = decode_node(state);
            let mask = decode_mask(state);
            for letter in [Letter::A, Letter::B] {
                let nn = index.step(node, letter);
                let nm = mask | index.node_mask(nn);
                let ns = encode(nn, nm);
                if dist[ns as usize] == UNSEEN {
                    dist[ns as usize] = (depth + 1) as u16;
                    next_layer.push(ns);
                    if nm == full {
                        goal_found = true;
                    }
                }
            }
        }
        layers.push(next_layer);
        if goal_found {
            optimum = depth + 1;
            break 'bfs;
        }
    }

    // Prune each layer to the states from which a goal at the optimal
    // depth is still reachable.
    let mut onpath = vec![false; state_count];
    for &state in &layers[optimum] {
        if decode_mask(state) == full {
            onpath[state as usize] = true;
        }
    }
    for depth in (0..optimum).rev() {
        for &state in &layers[depth] {
            let node = decode_node(state);
            let mask = decode_mask(state);
            let reaches = [Letter::A, Letter::B].into_iter().any(|letter| {
                let nn = index.step(node, letter);
                let ns = encode(nn, mask | index.node_mask(nn));
                dist[ns as usize] == (depth + 1) as u16 && onpath[ns as usize]
            });
            if reaches {
                onpath[state as usize] = true;
            }
        }
    }

    if enumerate_all {
        // Count optimal words before materializing them.
        let mut count = vec![0u64; state_count];
        for &state in &layers[optimum] {
            if decode_mask(state) == full {
                count[state as usize] = 1;
            }
        }
        for depth in (0..optimum).rev() {
            for &state in &layers[depth] {
                if !onpath[state as usize] {
                    continue;
                }
                let node = decode_node(state);
                let mask = decode_mask(state);
                let mut total = 0u64;
                for letter in [Letter::A, Letter::B] {
                    let nn = index.step(node, letter);
                    let ns = encode(nn, mask | index.node_mask(nn));
                    if dist[ns as usize] == (depth + 1) as u16 {
                        total = total.saturating_add(count[ns as usize]);
                    }
                }
                count[state as usize] = total;
            }
        }
        let total = count[start as usize];
        if total > cap {
            return Err(Error::EnumerationCapExceeded { cap });
        }
        let mut words = Vec::with_capacity(total as usize);
        let mut letters: Vec<Letter> = Vec::with_capacity(optimum);
        // Depth-first with a before b emits words in lexicographic order.
        struct Emitter<'a> {
            index: &'a PatternIndex,
            dist: &'a [u16],
            onpath: &'a [bool],
            full: u32,
            optimum: usize,
        }
        impl Emitter<'_> {
            fn emit(&self, state: u32, depth: usize, letters: &mut Vec<Letter>, words: &mut Vec<Word>) {
                let nodes = self.index.node_count() as u32;
                if depth == self.optimum {
                    debug_assert_eq!(state / nodes, self.full);
                    words.push(Word::new(letters.clone()));
                    return;
                }
                let node = state % nodes;
                let mask = state / nodes;
                for letter in [Letter::A, Letter::B] {
                    let nn = self.index.step(node, letter);
                    let ns = (mask | self.index.node_mask(nn)) * nodes + nn;
                    if self.dist[ns as usize] == (depth + 1) as u16 && self.onpath[ns as usize] {
                        letters.push(letter);
                        self.emit(ns, depth + 1, letters, words);
                        letters.pop();
                    }
                }
            }
        }
        Emitter { index: &index, dist: &dist, onpath: &onpath, full, optimum }
            .emit(start, 0, &mut letters, &mut words);
        debug_assert_eq!(words.len() as u64, total);
        Ok(ScsSolution { length: optimum, words, covered: full, optimal_count: total })
    } else {
        // Follow the lexicographically first on-path branch.
        let mut letters = Vec::with_capacity(optimum);
        let mut state = start;
        for depth in 0..optimum {
            let node = decode_node(state);
            let mask = decode_mask(state);
            let mut advanced = false;
            for letter in [Letter::A, Letter::B] {
                let nn = index.step(node, letter);
                let ns = encode(nn, mask | index.node_mask(nn));
                if dist[ns as usize] == (depth + 1) as u16 && onpath[ns as usize] {
                    letters.push(letter);
                    state = ns;
                    advanced = true;
                    break;
                }
            }
            debug_assert!(advanced);
        }
        Ok(ScsSolution {
            length: optimum,
            words: vec![Word::new(letters)],
            covered: full,
            optimal_count: 1,
        })
    }
}

/// Keep only the optimal words in which every constraint matches some
/// factor. Errors when nothing survives.
pub fn scs_filter(solution: &ScsSolution, constraints: &[Regex]) -> Result<ScsSolution> {
    let words: Vec<Word> = solution
        .words
        .iter()
        .filter(|w| constraints.iter().all(|c| c.matches_factor(w)))
        .cloned()
        .collect();
    if words.is_empty() {
        return Err(Error::ConstraintsUnsatisfiable);
    }
    let count = words.len() as u64;
    Ok(ScsSolution {
        length: solution.length,
        words,
        covered: solution.covered,
        optimal_count: count,
    })
}
