//! The fixed ingredients of the 3-collapsing-word construction: the word
//! set W whose factors witness every proper family, its reduction W0, the
//! shortest 3-synchronizing word on two letters, the 53-letter
//! 3-collapsing word found by the constrained superstring search, and the
//! factor language that covers the one family branch with no finite menu.

use crate::automaton::Automaton;
use crate::regex::Regex;
use crate::word::Word;
use std::fmt;
use std::sync::LazyLock;

/// The unique (up to duality) shortest 3-synchronizing word on {a,b},
/// length 33.
pub const S32: &str = "abbabaaabbaabababbaabbbabaabaabba";

/// A 3-collapsing word of length 53.
pub const W3: &str = "bbaaabaaabbbabaababaabaabbaabbabbababbabaaababbbabbba";

const _: () = assert!(S32.len() == 33);
const _: () = assert!(W3.len() == 53);

/// Factor language covering the deep type-3/type-4 branch: any word of
/// this language 3-compresses the automata of that branch.
pub const SCRIPT_L_PATTERN: &str = "b(a+b)*(ba)+a(ba)*ab(b|abb)";

/// The 18 menu words collected from all family characterizations (letter
/// roles both ways).
pub const W_SET: [&str; 18] = [
    "abbabba",   // ab2ab2a
    "abbaabba",  // ab2a2b2a
    "ababbaba",  // abab2aba
    "abbbaba",   // ab3aba
    "ababbba",   // abab3a
    "abbbabbba", // ab3ab3a
    "baababaab", // ba2baba2b
    "aabbba",    // a2b3a
    "baabaab",   // ba2ba2b
    "baabbaab",  // ba2b2a2b
    "babaabab",  // baba2bab
    "baaabab",   // ba3bab
    "babaaab",   // baba3b
    "baaabaaab", // ba3ba3b
    "abbababba", // ab2abab2a
    "bbaaab",    // b2a3b
    "aabbbaa",   // a2b3a2
    "bbaaabb",   // b2a3b2
];

/// W without its two longest members, which are replaceable by factors
/// from the language above (and its dual).
pub fn word_set_w0_texts() -> Vec<&'static str> {
    W_SET
        .iter()
        .copied()
        .filter(|w| *w != "aabbbaa" && *w != "bbaaabb")
        .collect()
}

pub fn word_set_w() -> Vec<Word> {
    W_SET.iter().map(|t| Word::parse(t).expect("literal")).collect()
}

pub fn word_set_w0() -> Vec<Word> {
    word_set_w0_texts()
        .iter()
        .map(|t| Word::parse(t).expect("literal"))
        .collect()
}

pub fn s32() -> Word {
    Word::parse(S32).expect("literal")
}

pub fn w3() -> Word {
    Word::parse(W3).expect("literal")
}

static SCRIPT_L: LazyLock<Regex> =
    LazyLock::new(|| Regex::parse(SCRIPT_L_PATTERN).expect("pattern literal"));
static SCRIPT_L_DUAL: LazyLock<Regex> = LazyLock::new(|| SCRIPT_L.dual());

pub fn script_l() -> &'static Regex {
    &SCRIPT_L
}

pub fn script_l_dual() -> &'static Regex {
    &SCRIPT_L_DUAL
}

/// The five-state automaton that the 33-letter synchronizing word fails
/// to 3-compress (its dual compresses it instead).
pub fn s32_counterexample() -> Automaton {
    Automaton::from_images(&[0, 3, 4, 2, 1], &[3, 0, 0, 1, 4]).expect("literal")
}

/// One requirement of the 3-collapsing certificate that a word failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MissingRequirement {
    NotThreeFull,
    MissingFactor(Word),
    /// Neither the long menu word nor any factor from the dual language.
    NoDualLanguageFactor,
    /// Neither the long menu word nor any factor from the language.
    NoLanguageFactor,
}

impl fmt::Display for MissingRequirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MissingRequirement::NotThreeFull => write!(f, "not 3-full"),
            MissingRequirement::MissingFactor(w) => write!(f, "missing factor {w}"),
            MissingRequirement::NoDualLanguageFactor => {
                write!(f, "no factor aabbbaa and no factor in the dual language")
            }
            MissingRequirement::NoLanguageFactor => {
                write!(f, "no factor bbaaabb and no factor in the language")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub is_certified: bool,
    pub missing_requirements: Vec<MissingRequirement>,
}

/// Check the sufficient conditions for a word to be 3-collapsing: it is
/// 3-full, contains all of W0 as factors, and covers the two replaced
/// words either literally or through the factor languages. A word failing
/// the certificate is merely uncertified, not proven non-collapsing.
pub fn certificate_3_collapsing(w: &Word) -> CertificateReport {
    let mut missing = Vec::new();
    if !w.is_k_full(3) {
        missing.push(MissingRequirement::NotThreeFull);
    }
    for pattern in word_set_w0() {
        if !w.contains_factor(&pattern) {
            missing.push(MissingRequirement::MissingFactor(pattern));
        }
    }
    let a_side = Word::parse("aabbbaa").expect("literal");
    if !w.contains_factor(&a_side) && !script_l_dual().matches_factor(w) {
        missing.push(MissingRequirement::NoDualLanguageFactor);
    }
    let b_side = Word::parse("bbaaabb").expect("literal");
    if !w.contains_factor(&b_side) && !script_l().matches_factor(w) {
        missing.push(MissingRequirement::NoLanguageFactor);
    }
    CertificateReport { is_certified: missing.is_empty(), missing_requirements: missing }
}
