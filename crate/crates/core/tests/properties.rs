//! Cross-module property tests: randomized invariants plus the heavier
//! deterministic cross-checks that pair independent computation routes.

use collapse_core::automaton::{Automaton, StateSet, Transformation};
use collapse_core::characterize::characterize;
use collapse_core::collapsing;
use collapse_core::msa;
use collapse_core::regex::Regex;
use collapse_core::scs::{scs_solve, PatternIndex};
use collapse_core::sweep;
use collapse_core::word::{Letter, Word};
use proptest::prelude::*;

fn arb_transformation(n: usize) -> impl Strategy<Value = Transformation> {
    proptest::collection::vec(0..n, n).prop_map(|v| Transformation::new(v).expect("in range"))
}

fn arb_automaton(n: usize) -> impl Strategy<Value = Automaton> {
    (arb_transformation(n), arb_transformation(n))
        .prop_map(|(a, b)| Automaton::new(a, b).expect("same universe"))
}

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop_oneof![Just(Letter::A), Just(Letter::B)], 0..=max_len)
        .prop_map(Word::new)
}

proptest! {
    #[test]
    fn deficiency_monotone_under_factors(
        aut in arb_automaton(5),
        prefix in arb_word(4),
        core in arb_word(5),
        suffix in arb_word(4),
    ) {
        let mut letters = prefix.letters().to_vec();
        letters.extend_from_slice(core.letters());
        letters.extend_from_slice(suffix.letters());
        let whole = Word::new(letters);
        prop_assert!(aut.deficiency(&whole) >= aut.deficiency(&core));
    }

    #[test]
    fn deficiency_invariant_under_duality(aut in arb_automaton(6), w in arb_word(8)) {
        prop_assert_eq!(aut.deficiency(&w), aut.dual().deficiency(&w.dual()));
    }

    #[test]
    fn characterization_dualizes(aut in arb_automaton(5)) {
        let plain = characterize(&aut);
        let dual = characterize(&aut.dual());
        prop_assert_eq!(plain.verdict, dual.verdict);
        let mut plain_menu: Vec<String> =
            plain.word_menu.iter().map(|w| w.dual().to_string()).collect();
        let mut dual_menu: Vec<String> =
            dual.word_menu.iter().map(|w| w.to_string()).collect();
        plain_menu.sort();
        dual_menu.sort();
        prop_assert_eq!(plain_menu, dual_menu);
    }

    #[test]
    fn msa_sink_iff_deficiency(aut in arb_automaton(5), w in arb_word(6)) {
        for m in 1..=3usize {
            let msa = msa::build_msa(&aut, m).expect("valid threshold");
            let hits = msa.run(&w) == msa.sink();
            prop_assert_eq!(hits, aut.deficiency(&w) >= m);
        }
    }

    #[test]
    fn pattern_index_matches_naive_scan(
        patterns in proptest::collection::vec(arb_word(5), 1..6),
        w in arb_word(20),
    ) {
        let patterns: Vec<Word> =
            patterns.into_iter().filter(|p| !p.is_empty()).collect();
        prop_assume!(!patterns.is_empty());
        let index = PatternIndex::build(&patterns).expect("buildable");
        let mut naive = 0u32;
        for (i, p) in patterns.iter().enumerate() {
            if w.contains_factor(p) {
                naive |= 1 << i;
            }
        }
        prop_assert_eq!(index.scan(&w), naive);
    }

    #[test]
    fn scs_monotone_under_added_pattern(
        patterns in proptest::collection::vec(arb_word(4), 1..4),
        extra in arb_word(4),
    ) {
        let base: Vec<Word> = patterns.into_iter().filter(|p| !p.is_empty()).collect();
        prop_assume!(!base.is_empty() && !extra.is_empty());
        let mut bigger = base.clone();
        bigger.push(extra);
        let s1 = scs_solve(&base, false).expect("solvable");
        let s2 = scs_solve(&bigger, false).expect("solvable");
        prop_assert!(s2.length >= s1.length);
    }

    #[test]
    fn scs_words_cover_all_patterns(
        patterns in proptest::collection::vec(arb_word(4), 1..5),
    ) {
        let patterns: Vec<Word> =
            patterns.into_iter().filter(|p| !p.is_empty()).collect();
        prop_assume!(!patterns.is_empty());
        let sol = scs_solve(&patterns, true).expect("solvable");
        for w in &sol.words {
            for p in &patterns {
                prop_assert!(w.contains_factor(p));
            }
        }
    }

    #[test]
    fn word_roundtrip_parse_display(w in arb_word(30)) {
        prop_assert_eq!(Word::parse(&w.to_string()).expect("alphabet ok"), w);
    }
}

/// The certificate is sufficient: any certified word must 3-compress
/// every 3-compressible automaton on up to five states. Checked here for
/// a second certified word besides the 53-letter one (which the
/// acceptance suite covers).
#[test]
fn certificate_implies_coverage_small() {
    let mut letters = Vec::new();
    for text in collapsing::W_SET {
        letters.extend_from_slice(Word::parse(text).expect("literal").letters());
    }
    let concatenated = Word::new(letters);
    let report = collapsing::certificate_3_collapsing(&concatenated);
    assert!(report.is_certified, "{:?}", report.missing_requirements);
    for n in [4usize, 5] {
        let sweep = sweep::verify_word(&concatenated, n, 3);
        assert_eq!(sweep.violator_total, 0, "n={n}");
    }
}

/// On five states the 33-letter word alone is not enough: the violator
/// list is nonempty, and the known counterexample is one of its members.
#[test]
fn s32_alone_fails_on_five_states() {
    let report = sweep::verify_word(&collapsing::s32(), 5, 3);
    assert!(report.violator_total > 0);
    let fig = collapsing::s32_counterexample();
    assert!(msa::is_k_compressible(&fig, 3).unwrap());
    assert_eq!(fig.deficiency(&collapsing::s32()), 2);
    assert_eq!(fig.deficiency(&collapsing::s32().dual()), 4);
}

/// Pattern-matching automaton size for the fixed word set, which bounds
/// the superstring search space.
#[test]
fn pattern_index_size_for_w() {
    let index = PatternIndex::build(&collapsing::word_set_w()).expect("buildable");
    assert!(index.node_count() <= 137, "{}", index.node_count());
    assert_eq!(index.pattern_count(), 18);
}

/// The compiled matcher for the factor language agrees with the dual of
/// its dual, and factor matching is consistent with whole-word matching.
#[test]
fn language_dual_involution() {
    let l = collapsing::script_l();
    let double = l.dual().dual();
    for len in 0..=9usize {
        for code in 0..(1u32 << len) {
            let w = Word::from_code(len, code);
            assert_eq!(l.matches(&w), double.matches(&w), "{w}");
        }
    }
}

/// Every verdict the characterization can produce on four states, by
/// count, stays stable. Guards against silent predicate regressions.
#[test]
fn four_state_verdict_census() {
    let report = sweep::verify_characterization(4, &[]);
    assert_eq!(report.examined, 65_536);
    assert_eq!(report.mismatch_total, 0);
    assert_eq!(report.menu_failure_total, 0);
    assert_eq!(
        (report.not_compressible, report.improper, report.proper),
        (14_016, 41_680, 9_840)
    );
}

/// A regex built from the printed pattern parses, and parse errors carry
/// positions.
#[test]
fn regex_parse_surface() {
    assert!(Regex::parse(collapsing::SCRIPT_L_PATTERN).is_ok());
    assert!(Regex::parse("b(a+b").is_err());
}

/// Missing-step fold equals the missing set on random larger instances
/// (the exhaustive small cases live in the acceptance suite).
#[test]
fn missing_step_fold_spot_checks() {
    let aut = collapsing::s32_counterexample();
    for code in 0..256u32 {
        let w = Word::from_code(8, code);
        let mut acc = StateSet::empty(5);
        for l in w.letters() {
            acc = aut.missing_step(&acc, *l).expect("same universe");
        }
        assert_eq!(acc, aut.missing_set(&w));
    }
}
