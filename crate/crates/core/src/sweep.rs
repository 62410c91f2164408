//! Exhaustive enumeration of small automata and the verification sweeps:
//! characterization vs oracle, fixed-word coverage, and the five-state
//! pair check. Enumeration is sharded over the first letter and shard
//! results are merged by an order-independent reduction, so runs are
//! deterministic for any thread count.

use crate::automaton::{classify_letter, Automaton, ClassTag, LetterClass, Transformation};
use crate::characterize::{characterize_with, FamilyVerdict};
use crate::collapsing;
use crate::msa::Compressibility;
use crate::word::{Letter, Word};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// Practical bound for exhaustive sweeps.
pub const MAX_SWEEP_STATES: usize = 8;

// ---------------------------------------------------------------------
// Allocation-free missing-set reachability for the hot loops.
// ---------------------------------------------------------------------

/// Upper bound on nodes of the subset graph for n <= 8 (all subsets in
/// the worst case, plus the sink).
const FAST_NODE_CAP: usize = 257;

/// Subset-to-node tables shared by every automaton of one sweep.
#[derive(Clone)]
pub(crate) struct SubsetTables {
    n: usize,
    m: usize,
    node_masks: Vec<u16>,
    index_of: Vec<u8>,
}

impl SubsetTables {
    pub(crate) fn new(n: usize, m: usize) -> SubsetTables {
        assert!(n <= MAX_SWEEP_STATES && m >= 1);
        let node_masks: Vec<u16> =
            (0u16..1 << n).filter(|mask| (mask.count_ones() as usize) < m).collect();
        assert!(node_masks.len() < 256);
        let mut index_of = vec![0u8; 1 << n];
        for (i, &mask) in node_masks.iter().enumerate() {
            index_of[mask as usize] = i as u8;
        }
        SubsetTables { n, m, node_masks, index_of }
    }

    fn node_count(&self) -> usize {
        self.node_masks.len()
    }
}

/// Length of the shortest m-compressing word, or None, by breadth-first
/// search over the missing-set graph. Stack-only.
pub(crate) fn fast_shortest_len(
    tables: &SubsetTables,
    a: &[usize],
    b: &[usize],
) -> Option<u32> {
    let n = tables.n;
    let letters = [a, b];
    let full: u16 = ((1u32 << n) - 1) as u16;
    let mut pre = [[0u16; MAX_SWEEP_STATES]; 2];
    let mut miss = [0u16; 2];
    for (l, images) in letters.iter().enumerate() {
        for q in 0..n {
            pre[l][images[q]] |= 1 << q;
        }
        let mut image = 0u16;
        for (r, &mask) in pre[l][..n].iter().enumerate() {
            if mask != 0 {
                image |= 1 << r;
            }
        }
        miss[l] = full & !image;
    }
    let count = tables.node_count();
    let sink = count as u8;
    let mut next = [[0u8; 2]; FAST_NODE_CAP];
    for (i, &mask) in tables.node_masks.iter().enumerate() {
        for (l, images) in letters.iter().enumerate() {
            let mut out = miss[l];
            let mut bits = mask;
            while bits != 0 {
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let r = images[q];
                if pre[l][r] & !mask == 0 {
                    out |= 1 << r;
                }
            }
            next[i][l] = if (out.count_ones() as usize) < tables.m {
                tables.index_of[out as usize]
            } else {
                sink
            };
        }
    }
    let mut dist = [u8::MAX; FAST_NODE_CAP];
    let mut queue = [0u8; FAST_NODE_CAP];
    let (mut head, mut tail) = (0usize, 0usize);
    dist[0] = 0;
    queue[tail] = 0;
    tail += 1;
    while head < tail {
        let node = queue[head];
        head += 1;
        let d = dist[node as usize];
        for &succ in &next[node as usize] {
            if succ == sink {
                return Some(d as u32 + 1);
            }
            if dist[succ as usize] == u8::MAX {
                dist[succ as usize] = d + 1;
                queue[tail] = succ;
                tail += 1;
            }
        }
    }
    None
}

pub(crate) fn fast_tri_state(
    tables: &SubsetTables,
    a: &[usize],
    b: &[usize],
) -> Compressibility {
    match fast_shortest_len(tables, a, b) {
        None => Compressibility::NotCompressible,
        Some(len) if len as usize <= tables.m => Compressibility::Improper,
        Some(_) => Compressibility::Proper,
    }
}

/// Size of `Q·w` as a bitmask computation.
pub(crate) fn fast_word_deficiency(a: &[usize], b: &[usize], n: usize, w: &Word) -> usize {
    let mut cur: u16 = ((1u32 << n) - 1) as u16;
    for &l in w.letters() {
        let images = if l == Letter::A { a } else { b };
        let mut out = 0u16;
        let mut bits = cur;
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= 1 << images[q];
        }
        cur = out;
    }
    n - cur.count_ones() as usize
}

// ---------------------------------------------------------------------
// Enumeration.
// ---------------------------------------------------------------------

/// Optional per-letter class constraints for enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumFilter {
    pub a: Option<ClassTag>,
    pub b: Option<ClassTag>,
}

/// All transformations on n states in lexicographic image order.
pub fn all_transformations(n: usize) -> Vec<Transformation> {
    assert!((1..=MAX_SWEEP_STATES).contains(&n));
    let count = (n as u64).pow(n as u32);
    let mut out = Vec::with_capacity(count as usize);
    let mut images = vec![0usize; n];
    loop {
        out.push(Transformation::new(images.clone()).expect("valid images"));
        // Odometer increment with the last position fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            images[pos] += 1;
            if images[pos] < n {
                break;
            }
            images[pos] = 0;
        }
    }
}

pub(crate) struct LetterPool {
    pub letters: Vec<Transformation>,
    pub classes: Vec<LetterClass>,
}

pub(crate) fn letter_pool(n: usize) -> LetterPool {
    let letters = all_transformations(n);
    let classes = letters.iter().map(classify_letter).collect();
    LetterPool { letters, classes }
}

fn tag_matches(class: &LetterClass, want: Option<ClassTag>) -> bool {
    want.is_none_or(|tag| class.tag() == tag)
}

/// Every letter pair on n states matching the filter, each exactly once,
/// in lexicographic (a, b) order.
pub fn enumerate_automata(n: usize, filter: EnumFilter) -> impl Iterator<Item = Automaton> {
    let pool = letter_pool(n);
    let indices_a: Vec<usize> = (0..pool.letters.len())
        .filter(|&i| tag_matches(&pool.classes[i], filter.a))
        .collect();
    let indices_b: std::sync::Arc<Vec<usize>> = std::sync::Arc::new(
        (0..pool.letters.len())
            .filter(|&i| tag_matches(&pool.classes[i], filter.b))
            .collect(),
    );
    let letters = std::sync::Arc::new(pool.letters);
    indices_a.into_iter().flat_map(move |ia| {
        let letters = letters.clone();
        let indices_b = indices_b.clone();
        (0..indices_b.len()).map(move |k| {
            let ib = indices_b[k];
            Automaton::new(letters[ia].clone(), letters[ib].clone()).expect("same universe")
        })
    })
}

// ---------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Mismatch {
    pub automaton: String,
    pub expected: String,
    pub got: String,
}

/// Merged outcome of one sweep. Mismatch-style lists are sorted and
/// truncated to a fixed cap after merging; the totals are exact.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SweepReport {
    pub n: usize,
    pub examined: u64,
    pub not_compressible: u64,
    pub improper: u64,
    pub proper: u64,
    pub mismatches: Vec<Mismatch>,
    pub mismatch_total: u64,
    pub menu_failures: Vec<String>,
    pub menu_failure_total: u64,
    pub violators: Vec<String>,
    pub violator_total: u64,
    pub branch_coverage: BTreeMap<String, u64>,
    pub elapsed_ms: u64,
}

const REPORT_LIST_CAP: usize = 100;

#[derive(Default)]
struct Partial {
    examined: u64,
    not_compressible: u64,
    improper: u64,
    proper: u64,
    mismatches: Vec<Mismatch>,
    menu_failures: Vec<String>,
    violators: Vec<String>,
    branch_coverage: BTreeMap<&'static str, u64>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.examined += other.examined;
        self.not_compressible += other.not_compressible;
        self.improper += other.improper;
        self.proper += other.proper;
        self.mismatches.extend(other.mismatches);
        self.menu_failures.extend(other.menu_failures);
        self.violators.extend(other.violators);
        for (k, v) in other.branch_coverage {
            *self.branch_coverage.entry(k).or_insert(0) += v;
        }
        self
    }

    fn into_report(mut self, n: usize, started: Instant) -> SweepReport {
        self.mismatches.sort_by(|x, y| x.automaton.cmp(&y.automaton));
        self.menu_failures.sort();
        self.violators.sort();
        let mismatch_total = self.mismatches.len() as u64;
        let menu_failure_total = self.menu_failures.len() as u64;
        let violator_total = self.violators.len() as u64;
        self.mismatches.truncate(REPORT_LIST_CAP);
        self.menu_failures.truncate(REPORT_LIST_CAP);
        self.violators.truncate(REPORT_LIST_CAP);
        SweepReport {
            n,
            examined: self.examined,
            not_compressible: self.not_compressible,
            improper: self.improper,
            proper: self.proper,
            mismatches: self.mismatches,
            mismatch_total,
            menu_failures: self.menu_failures,
            menu_failure_total,
            violators: self.violators,
            violator_total,
            branch_coverage: self
                .branch_coverage
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }
}

fn verdict_name(v: Compressibility) -> &'static str {
    match v {
        Compressibility::NotCompressible => "NotCompressible",
        Compressibility::Improper => "Improper",
        Compressibility::Proper => "Proper",
    }
}

// ---------------------------------------------------------------------
// Sweeps.
// ---------------------------------------------------------------------

/// Does at least one menu word (or, for the language branch, its
/// designated member, which the menu already contains) 3-compress the
/// automaton?
fn menu_compresses(aut: &Automaton, verdict: &FamilyVerdict) -> bool {
    let n = aut.n();
    let a = aut.a().images();
    let b = aut.b().images();
    verdict
        .word_menu
        .iter()
        .any(|w| fast_word_deficiency(a, b, n, w) >= 3)
}

/// Compare the family characterization against the missing-state oracle
/// for every letter pair in the requested families (all pairs when the
/// list is empty). Expected outcome: no mismatches, no menu failures.
pub fn verify_characterization(n: usize, families: &[(ClassTag, ClassTag)]) -> SweepReport {
    let started = Instant::now();
    let pool = letter_pool(n);
    let tables = SubsetTables::new(n, 3);
    let pair_allowed = |ca: &LetterClass, cb: &LetterClass| -> bool {
        families.is_empty()
            || families
                .iter()
                .any(|&(fa, fb)| ca.tag() == fa && cb.tag() == fb)
    };
    let a_indices: Vec<usize> = (0..pool.letters.len())
        .filter(|&i| {
            families.is_empty() || families.iter().any(|&(fa, _)| pool.classes[i].tag() == fa)
        })
        .collect();
    let chunk = a_indices.len().div_ceil(256).max(1);
    let partial = a_indices
        .par_chunks(chunk)
        .map(|chunk| {
            let mut part = Partial::default();
            let mut scratch = Automaton::new(
                Transformation::identity(n),
                Transformation::identity(n),
            )
            .expect("same universe");
            for &ia in chunk {
                let ta = &pool.letters[ia];
                let ca = pool.classes[ia];
                for (ib, tb) in pool.letters.iter().enumerate() {
                    let cb = pool.classes[ib];
                    if !pair_allowed(&ca, &cb) {
                        continue;
                    }
                    scratch.copy_images_from(ta, tb);
                    part.examined += 1;
                    let verdict = characterize_with(&scratch, ca, cb);
                    *part.branch_coverage.entry(verdict.matched_branch).or_insert(0) += 1;
                    match verdict.verdict {
                        Compressibility::NotCompressible => part.not_compressible += 1,
                        Compressibility::Improper => part.improper += 1,
                        Compressibility::Proper => part.proper += 1,
                    }
                    let oracle = fast_tri_state(&tables, ta.images(), tb.images());
                    if oracle != verdict.verdict {
                        part.mismatches.push(Mismatch {
                            automaton: scratch.to_json(),
                            expected: verdict_name(oracle).to_string(),
                            got: format!(
                                "{} (branch {})",
                                verdict_name(verdict.verdict),
                                verdict.matched_branch
                            ),
                        });
                    }
                    if verdict.verdict == Compressibility::Proper
                        && !menu_compresses(&scratch, &verdict)
                    {
                        part.menu_failures.push(scratch.to_json());
                    }
                }
            }
            part
        })
        .reduce(Partial::default, Partial::merge);
    partial.into_report(n, started)
}

/// List every k-compressible n-state automaton the word fails to
/// k-compress.
pub fn verify_word(word: &Word, n: usize, k: usize) -> SweepReport {
    let started = Instant::now();
    let pool = letter_pool(n);
    let tables = SubsetTables::new(n, k);
    let indices: Vec<usize> = (0..pool.letters.len()).collect();
    let chunk = indices.len().div_ceil(256).max(1);
    let partial = indices
        .par_chunks(chunk)
        .map(|chunk| {
            let mut part = Partial::default();
            for &ia in chunk {
                let ta = pool.letters[ia].images();
                for tb in &pool.letters {
                    part.examined += 1;
                    let tri = fast_tri_state(&tables, ta, tb.images());
                    match tri {
                        Compressibility::NotCompressible => part.not_compressible += 1,
                        Compressibility::Improper => part.improper += 1,
                        Compressibility::Proper => part.proper += 1,
                    }
                    if tri != Compressibility::NotCompressible
                        && fast_word_deficiency(ta, tb.images(), n, word) < k
                    {
                        let aut = Automaton::from_images(ta, tb.images()).expect("valid");
                        part.violators.push(aut.to_json());
                    }
                }
            }
            part
        })
        .reduce(Partial::default, Partial::merge);
    partial.into_report(n, started)
}

/// The five-state check: every 3-compressible automaton on five states is
/// 3-compressed by the 33-letter synchronizing word or by its dual.
pub fn five_state_pair_sweep() -> SweepReport {
    five_state_pair_sweep_with(&collapsing::s32())
}

/// Same check for an arbitrary word.
pub fn five_state_pair_sweep_with(word: &Word) -> SweepReport {
    let started = Instant::now();
    let n = 5;
    let word = word.clone();
    let dual = word.dual();
    let pool = letter_pool(n);
    let tables = SubsetTables::new(n, 3);
    let indices: Vec<usize> = (0..pool.letters.len()).collect();
    let chunk = indices.len().div_ceil(256).max(1);
    let partial = indices
        .par_chunks(chunk)
        .map(|chunk| {
            let mut part = Partial::default();
            for &ia in chunk {
                let ta = pool.letters[ia].images();
                for tb in &pool.letters {
                    part.examined += 1;
                    let tri = fast_tri_state(&tables, ta, tb.images());
                    match tri {
                        Compressibility::NotCompressible => part.not_compressible += 1,
                        Compressibility::Improper => part.improper += 1,
                        Compressibility::Proper => part.proper += 1,
                    }
                    if tri == Compressibility::NotCompressible {
                        continue;
                    }
                    if fast_word_deficiency(ta, tb.images(), n, &word) < 3
                        && fast_word_deficiency(ta, tb.images(), n, &dual) < 3
                    {
                        let aut = Automaton::from_images(ta, tb.images()).expect("valid");
                        part.violators.push(aut.to_json());
                    }
                }
            }
            part
        })
        .reduce(Partial::default, Partial::merge);
    partial.into_report(n, started)
}

/// Smallest image table over all state relabelings of the automaton and
/// of its dual: a canonical representative of its symmetry class.
pub fn canonical_form(aut: &Automaton) -> (Vec<usize>, Vec<usize>) {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in permutations(n - 1) {
            for i in 0..n {
                let mut p = rest.clone();
                p.insert(i, n - 1);
                out.push(p);
            }
        }
        out
    }
    let n = aut.n();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for candidate in [aut.clone(), aut.dual()] {
        for p in permutations(n) {
            let mut na = vec![0usize; n];
            let mut nb = vec![0usize; n];
            for q in 0..n {
                na[p[q]] = p[candidate.a().images()[q]];
                nb[p[q]] = p[candidate.b().images()[q]];
            }
            let key = (na, nb);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.expect("nonempty")
}

/// Run a closure inside a dedicated thread pool of the given size; `None`
/// or zero uses the current (default) pool.
pub fn with_thread_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msa;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_automata(2, EnumFilter::default()).count(), 16);
        let perms = EnumFilter {
            a: Some(ClassTag::Permutation),
            b: Some(ClassTag::Permutation),
        };
        assert_eq!(enumerate_automata(4, perms).count(), 576);
        assert_eq!(all_transformations(4).len(), 256);
        assert_eq!(all_transformations(3).len(), 27);
    }

    #[test]
    fn enumeration_is_lexicographic_and_unique() {
        let all: Vec<String> = enumerate_automata(2, EnumFilter::default())
            .map(|a| a.to_json())
            .collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all.len(), sorted.len());
        assert_eq!(all[0], r#"{"n":2,"a":[0,0],"b":[0,0]}"#);
    }

    #[test]
    fn fast_oracle_agrees_with_msa_n_up_to_4() {
        for n in 2..=4usize {
            let pool = letter_pool(n);
            for k in 1..n.min(4) {
                let tables = SubsetTables::new(n, k);
                for ta in &pool.letters {
                    for tb in &pool.letters {
                        let aut = Automaton::new(ta.clone(), tb.clone()).unwrap();
                        let fast = fast_shortest_len(&tables, ta.images(), tb.images());
                        let slow = msa::shortest_compressing_word(&aut, k).unwrap();
                        match slow.status {
                            msa::CompressStatus::NotCompressible => assert_eq!(fast, None),
                            msa::CompressStatus::Compressible { length, .. } => {
                                assert_eq!(fast, Some(length as u32), "{aut:?} k={k}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fast_oracle_agrees_with_msa_sampled_n5_n6() {
        for (n, step) in [(5usize, 97usize), (6, 977)] {
            let pool = letter_pool(n);
            let tables = SubsetTables::new(n, 3);
            for ta in pool.letters.iter().step_by(step) {
                for tb in pool.letters.iter().step_by(step) {
                    let aut = Automaton::new(ta.clone(), tb.clone()).unwrap();
                    let fast = fast_shortest_len(&tables, ta.images(), tb.images());
                    let slow = msa::shortest_compressing_word(&aut, 3).unwrap();
                    match slow.status {
                        msa::CompressStatus::NotCompressible => assert_eq!(fast, None),
                        msa::CompressStatus::Compressible { length, .. } => {
                            assert_eq!(fast, Some(length as u32), "{aut:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn word_deficiency_matches_general_path() {
        let pool = letter_pool(3);
        let words = ["", "a", "ab", "abba", "bbabab"];
        for ta in pool.letters.iter().step_by(3) {
            for tb in pool.letters.iter().step_by(4) {
                let aut = Automaton::new(ta.clone(), tb.clone()).unwrap();
                for text in words {
                    let w = Word::parse(text).unwrap();
                    assert_eq!(
                        fast_word_deficiency(ta.images(), tb.images(), 3, &w),
                        aut.deficiency(&w)
                    );
                }
            }
        }
    }

    #[test]
    fn characterization_verified_n3() {
        let report = verify_characterization(3, &[]);
        assert_eq!(report.examined, 27 * 27);
        assert_eq!(report.mismatch_total, 0, "{:?}", report.mismatches);
        assert_eq!(report.menu_failure_total, 0);
        // Three-state automata can never lose three states.
        assert_eq!(report.proper, 0);
        assert_eq!(report.improper, 0);
    }

    #[test]
    fn word_sweep_report_shape() {
        let report = verify_word(&Word::parse("abba").unwrap(), 3, 2);
        assert_eq!(report.examined, 729);
        assert_eq!(
            report.not_compressible + report.improper + report.proper,
            report.examined
        );
    }

    #[test]
    fn reports_identical_across_thread_counts() {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| {
                let mut r = verify_characterization(4, &[]);
                r.elapsed_ms = 0;
                r
            });
        let several = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| {
                let mut r = verify_characterization(4, &[]);
                r.elapsed_ms = 0;
                r
            });
        assert_eq!(single, several);
    }
}
