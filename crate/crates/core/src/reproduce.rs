//! The acceptance checks, runnable as a library so the command-line tool
//! and the test suite share one implementation. Each criterion returns a
//! pass/fail outcome with a short detail line.

use crate::automaton::{Automaton, ClassTag, StateSet};
use crate::characterize::ALL_BRANCHES;
use crate::collapsing;
use crate::msa;
use crate::naive;
use crate::regex::Regex;
use crate::scs;
use crate::sweep::{self, SweepReport};
use crate::word::Word;
use std::collections::BTreeSet;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub label: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

fn outcome(
    id: &'static str,
    label: &'static str,
    started: Instant,
    passed: bool,
    detail: String,
) -> CriterionOutcome {
    CriterionOutcome { id, label, passed, detail, elapsed_ms: started.elapsed().as_millis() as u64 }
}

/// Branches that no automaton on up to six states can reach; they need
/// more room and are exercised by the seven-state run instead.
pub const EXPECTED_UNREACHED_AT_6: &[&str] = &[];

pub fn criterion_1_literals() -> CriterionOutcome {
    let started = Instant::now();
    let s = collapsing::s32();
    let w = collapsing::w3();
    let passed = s.len() == 33 && w.len() == 53;
    outcome(
        "C1",
        "transcribed word lengths (33 and 53)",
        started,
        passed,
        format!("|s32|={} |w3|={}", s.len(), w.len()),
    )
}

pub fn criterion_2_synchronizing() -> CriterionOutcome {
    let started = Instant::now();
    let report = sweep::verify_word(&collapsing::s32(), 4, 3);
    let passed = report.violator_total == 0 && report.examined == 65536;
    outcome(
        "C2",
        "s32 3-compresses every 3-compressible 4-state automaton",
        started,
        passed,
        format!(
            "examined={} compressible={} violators={}",
            report.examined,
            report.improper + report.proper,
            report.violator_total
        ),
    )
}

pub fn criterion_3_counterexample() -> CriterionOutcome {
    let started = Instant::now();
    let aut = collapsing::s32_counterexample();
    let full = StateSet::full(5);
    let under = aut.apply_word(&full, &collapsing::s32()).expect("same universe");
    let under_dual = aut
        .apply_word(&full, &collapsing::s32().dual())
        .expect("same universe");
    let got: Vec<usize> = under.iter().collect();
    let got_dual: Vec<usize> = under_dual.iter().collect();
    let passed = got == vec![0, 1, 3] && got_dual == vec![3];
    outcome(
        "C3",
        "five-state counterexample images under s32 and its dual",
        started,
        passed,
        format!("Q.s32={got:?} Q.dual={got_dual:?}"),
    )
}

pub fn criterion_4_five_state_sweep() -> CriterionOutcome {
    let started = Instant::now();
    let report = sweep::five_state_pair_sweep();
    let passed = report.violator_total == 0 && report.examined == 9_765_625;
    let mut detail = format!(
        "examined={} compressible={} violators={}",
        report.examined,
        report.improper + report.proper,
        report.violator_total
    );
    if report.violator_total > 0 {
        // Summarize the escape set up to relabeling and letter exchange.
        let mut classes = std::collections::BTreeSet::new();
        for text in &report.violators {
            if let Ok(aut) = Automaton::from_json(text) {
                classes.insert(sweep::canonical_form(&aut));
            }
        }
        detail.push_str(&format!(
            "; distinct classes up to relabeling and duality: {}",
            classes.len()
        ));
        if let Some((a, b)) = classes.iter().next() {
            detail.push_str(&format!("; representative a={a:?} b={b:?}"));
        }
    }
    outcome(
        "C4",
        "every 3-compressible 5-state automaton falls to s32 or its dual",
        started,
        passed,
        detail,
    )
}

pub fn criterion_5_superstring() -> CriterionOutcome {
    let started = Instant::now();
    let w_all = collapsing::word_set_w();
    let w0 = collapsing::word_set_w0();
    let full = match scs::scs_solve(&w_all, false) {
        Ok(sol) => sol,
        Err(e) => {
            return outcome("C5", "superstring optima 55 and 53", started, false, e.to_string())
        }
    };
    let reduced = match scs::scs_solve_capped(&w0, true, 10_000_000) {
        Ok(sol) => sol,
        Err(e) => {
            return outcome("C5", "superstring optima 55 and 53", started, false, e.to_string())
        }
    };
    let w3 = collapsing::w3();
    let has_w3 = reduced.words.contains(&w3);
    let constraints = [collapsing::script_l().clone(), collapsing::script_l_dual().clone()];
    let filtered = scs::scs_filter(&reduced, &constraints);
    let (filtered_ok, filtered_count, filtered_has_w3) = match &filtered {
        Ok(sol) => (true, sol.words.len(), sol.words.contains(&w3)),
        Err(_) => (false, 0, false),
    };
    let passed =
        full.length == 55 && reduced.length == 53 && has_w3 && filtered_ok && filtered_has_w3;
    outcome(
        "C5",
        "superstring optima 55 and 53, with w3 surviving the language filter",
        started,
        passed,
        format!(
            "scs(W)={} scs(W0)={} optima={} w3-in-optima={} filtered={} w3-in-filtered={}",
            full.length, reduced.length, reduced.optimal_count, has_w3, filtered_count,
            filtered_has_w3
        ),
    )
}

pub fn criterion_6_certificate() -> CriterionOutcome {
    let started = Instant::now();
    let w3 = collapsing::w3();
    let report = collapsing::certificate_3_collapsing(&w3);
    let sweep4 = sweep::verify_word(&w3, 4, 3);
    let sweep5 = sweep::verify_word(&w3, 5, 3);
    let passed =
        report.is_certified && sweep4.violator_total == 0 && sweep5.violator_total == 0;
    outcome(
        "C6",
        "w3 is certified and 3-compresses everything compressible on 4 and 5 states",
        started,
        passed,
        format!(
            "certified={} violators(n=4)={} violators(n=5)={}",
            report.is_certified, sweep4.violator_total, sweep5.violator_total
        ),
    )
}

fn never_family_proper(report: &SweepReport) -> u64 {
    // The never-proper families have no proper branches; any oracle
    // disagreement there would surface as a mismatch, so it suffices to
    // confirm none of their branch identifiers coexist with proper counts.
    let prefixes = ["11-", "12-", "22-", "14-", "24-"];
    report
        .branch_coverage
        .iter()
        .filter(|(k, _)| prefixes.iter().any(|p| k.starts_with(p)))
        .filter(|(k, _)| k.ends_with("-proper"))
        .map(|(_, v)| *v)
        .sum()
}

pub fn criterion_7_oracle_equivalence() -> (CriterionOutcome, SweepReport, SweepReport) {
    let started = Instant::now();
    let rep4 = sweep::verify_characterization(4, &[]);
    let rep5 = sweep::verify_characterization(5, &[]);
    let passed = rep4.mismatch_total == 0
        && rep5.mismatch_total == 0
        && rep4.menu_failure_total == 0
        && rep5.menu_failure_total == 0
        && never_family_proper(&rep4) == 0
        && never_family_proper(&rep5) == 0
        && rep4.examined == 65536
        && rep5.examined == 9_765_625;
    let detail = format!(
        "n=4: {} pairs, {} mismatches; n=5: {} pairs, {} mismatches, {} menu failures, {} proper",
        rep4.examined,
        rep4.mismatch_total,
        rep5.examined,
        rep5.mismatch_total,
        rep5.menu_failure_total,
        rep5.proper
    );
    (
        outcome(
            "C7",
            "characterization equals the oracle on all 4- and 5-state pairs",
            started,
            passed,
            detail,
        ),
        rep4,
        rep5,
    )
}

/// All fourteen letter-type families, for the six-state runs.
fn six_state_families() -> Vec<(ClassTag, ClassTag)> {
    use ClassTag::*;
    vec![
        (Type1, Permutation),
        (Type2, Permutation),
        (Type3, Permutation),
        (Type4, Permutation),
        (Type1, Type1),
        (Type1, Type2),
        (Type1, Type3),
        (Type1, Type4),
        (Type2, Type2),
        (Type2, Type3),
        (Type2, Type4),
        (Type3, Type3),
        (Type3, Type4),
        (Type4, Type4),
    ]
}

pub fn criterion_8_deep_branches(
    rep4: &SweepReport,
    rep5: &SweepReport,
) -> CriterionOutcome {
    let started = Instant::now();
    let rep2 = sweep::verify_characterization(2, &[]);
    let rep3 = sweep::verify_characterization(3, &[]);
    let rep6 = sweep::verify_characterization(6, &six_state_families());
    let rep7 = sweep::verify_characterization(
        7,
        &[(ClassTag::Type3, ClassTag::Permutation)],
    );
    let mut fired: BTreeSet<&str> = BTreeSet::new();
    for rep in [&rep2, &rep3, rep4, rep5, &rep6] {
        for key in rep.branch_coverage.keys() {
            if let Some(known) = ALL_BRANCHES.iter().find(|b| **b == key.as_str()) {
                fired.insert(known);
            }
        }
    }
    let unreached: Vec<&str> = ALL_BRANCHES
        .iter()
        .copied()
        .filter(|b| !fired.contains(b))
        .collect();
    let unexpected: Vec<&str> = unreached
        .iter()
        .copied()
        .filter(|b| !EXPECTED_UNREACHED_AT_6.contains(b))
        .collect();
    let passed = rep6.mismatch_total == 0
        && rep7.mismatch_total == 0
        && rep6.menu_failure_total == 0
        && rep7.menu_failure_total == 0
        && unexpected.is_empty();
    outcome(
        "C8",
        "six-state family sweeps and the deep seven-state run stay clean",
        started,
        passed,
        format!(
            "n=6: {} pairs, {} mismatches; n=7 (3,p): {} pairs, {} mismatches; unreached at n<=6: {:?}",
            rep6.examined, rep6.mismatch_total, rep7.examined, rep7.mismatch_total, unreached
        ),
    )
}

pub fn criterion_9_property_suites() -> CriterionOutcome {
    let started = Instant::now();
    let mut failures: Vec<String> = Vec::new();

    // Missing-state search vs direct word enumeration, and the fold law,
    // exhaustively on up to four states.
    'outer: for n in 2..=4usize {
        let pool = sweep::all_transformations(n);
        for ta in &pool {
            for tb in &pool {
                let aut = Automaton::new(ta.clone(), tb.clone()).expect("same universe");
                for k in [2usize, 3] {
                    if k >= n {
                        continue;
                    }
                    let report = msa::shortest_compressing_word(&aut, k).expect("valid k");
                    let brute = naive::shortest_compressing(&aut, k, 8);
                    let ok = match report.status {
                        msa::CompressStatus::NotCompressible => brute.is_none(),
                        // The enumeration horizon is 8; beyond it the brute
                        // force can only confirm that nothing shorter works.
                        msa::CompressStatus::Compressible { length, .. } if length <= 8 => {
                            brute.map(|(len, _)| len) == Some(length)
                        }
                        msa::CompressStatus::Compressible { .. } => brute.is_none(),
                    };
                    if !ok {
                        failures.push(format!("oracle disagreement at {}", aut.to_json()));
                        break 'outer;
                    }
                }
                for len in 0..=6usize {
                    for code in 0..(1u32 << len) {
                        let w = Word::from_code(len, code);
                        let mut acc = StateSet::empty(n);
                        for l in w.letters() {
                            acc = aut.missing_step(&acc, *l).expect("same universe");
                        }
                        if acc != aut.missing_set(&w) {
                            failures.push(format!(
                                "missing-step fold differs at {} on {w}",
                                aut.to_json()
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }

    // Compiled matcher vs grammar enumeration for the factor language.
    let script_l = collapsing::script_l();
    let members: BTreeSet<String> = script_l
        .enumerate_up_to(10)
        .into_iter()
        .map(|w| w.to_string())
        .collect();
    for len in 0..=10usize {
        for code in 0..(1u32 << len) {
            let w = Word::from_code(len, code);
            if script_l.matches(&w) != members.contains(&w.to_string()) {
                failures.push(format!("language matcher disagreement on {w}"));
            }
        }
    }

    // The three named membership facts.
    let u = Word::parse("bbabaaababb").expect("literal");
    let v = Word::parse("aabbbabaa").expect("literal");
    let b2a3b2 = Word::parse("bbaaabb").expect("literal");
    if !script_l.matches(&u) {
        failures.push("u not in language".into());
    }
    if !collapsing::script_l_dual().matches(&v) {
        failures.push("v not in dual language".into());
    }
    if !script_l.matches(&b2a3b2) {
        failures.push("bbaaabb not in language".into());
    }
    let _ = Regex::parse(collapsing::SCRIPT_L_PATTERN).expect("pattern parses");

    let passed = failures.is_empty();
    let detail = if failures.is_empty() {
        "word-BFS, fold law, matcher enumeration, membership facts all agree".to_string()
    } else {
        failures.join("; ")
    };
    outcome("C9", "property suites", started, passed, detail)
}

/// Run every acceptance criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    let mut out = vec![
        criterion_1_literals(),
        criterion_2_synchronizing(),
        criterion_3_counterexample(),
        criterion_4_five_state_sweep(),
        criterion_5_superstring(),
        criterion_6_certificate(),
    ];
    let (c7, rep4, rep5) = criterion_7_oracle_equivalence();
    out.push(c7);
    out.push(criterion_8_deep_branches(&rep4, &rep5));
    out.push(criterion_9_property_suites());
    out
}
