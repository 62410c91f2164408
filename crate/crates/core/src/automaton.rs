//! Transformations of a finite state set, two-letter semiautomata, and the
//! classification of letters into the shapes a proper 3-compressible
//! automaton can be built from.
//!
//! States are `0..n-1`. A letter acts as a total map on the states; an
//! automaton is a pair of such maps named `a` and `b`.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type State = usize;

/// Largest universe a [`StateSet`] can hold (one bit per state).
pub const MAX_STATES: usize = 64;

/// A subset of `0..n-1` with bitset semantics.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateSet {
    n: usize,
    bits: u64,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_STATES);
        StateSet { n, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_STATES);
        let bits = if n == 64 { !0 } else { (1u64 << n) - 1 };
        StateSet { n, bits }
    }

    pub fn singleton(n: usize, q: State) -> Self {
        let mut s = Self::empty(n);
        s.insert(q);
        s
    }

    pub fn from_states<I: IntoIterator<Item = State>>(n: usize, states: I) -> Self {
        let mut s = Self::empty(n);
        for q in states {
            s.insert(q);
        }
        s
    }

    pub(crate) fn from_bits(n: usize, bits: u64) -> Self {
        debug_assert!(n == 64 || bits < (1u64 << n));
        StateSet { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, q: State) {
        assert!(q < self.n, "state {q} out of range for {} states", self.n);
        self.bits |= 1 << q;
    }

    pub fn contains(&self, q: State) -> bool {
        q < self.n && self.bits & (1 << q) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        debug_assert_eq!(self.n, other.n);
        StateSet { n: self.n, bits: self.bits | other.bits }
    }

    pub fn is_subset_of(&self, other: &StateSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn complement(&self) -> StateSet {
        StateSet { n: self.n, bits: Self::full(self.n).bits & !self.bits }
    }

    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(q)
            }
        })
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// A total map on `0..n-1`, the action of one letter.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Transformation {
    images: Vec<State>,
}

impl Transformation {
    pub fn new(images: Vec<State>) -> Result<Self> {
        let n = images.len();
        if n > MAX_STATES {
            return Err(Error::TooManyStates { n, max: MAX_STATES });
        }
        for &img in &images {
            if img >= n {
                return Err(Error::StateOutOfRange { state: img, n });
            }
        }
        Ok(Transformation { images })
    }

    pub fn identity(n: usize) -> Self {
        Transformation { images: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[State] {
        &self.images
    }

    pub fn apply_state(&self, q: State) -> State {
        self.images[q]
    }

    /// Image of a subset: `{ images[q] : q in s }`.
    pub fn apply(&self, s: &StateSet) -> Result<StateSet> {
        if s.n() != self.n() {
            return Err(Error::UniverseMismatch { left: s.n(), right: self.n() });
        }
        let mut out = StateSet::empty(self.n());
        for q in s.iter() {
            out.insert(self.images[q]);
        }
        Ok(out)
    }

    pub fn image(&self) -> StateSet {
        let mut out = StateSet::empty(self.n());
        for &img in &self.images {
            out.insert(img);
        }
        out
    }

    /// States with no preimage.
    pub fn missing(&self) -> StateSet {
        self.image().complement()
    }

    pub fn deficiency(&self) -> usize {
        self.n() - self.image().len()
    }

    pub fn is_permutation(&self) -> bool {
        self.deficiency() == 0
    }

    /// Smallest superset of `s` closed under the map (includes `s` itself).
    pub fn orbit(&self, s: &StateSet) -> Result<StateSet> {
        if s.n() != self.n() {
            return Err(Error::UniverseMismatch { left: s.n(), right: self.n() });
        }
        let mut acc = *s;
        loop {
            let next = acc.union(&self.apply(&acc)?);
            if next == acc {
                return Ok(acc);
            }
            acc = next;
        }
    }

    /// Orbit of a single state.
    pub fn orbit_of(&self, q: State) -> StateSet {
        self.orbit(&StateSet::singleton(self.n(), q)).expect("same universe")
    }

    /// Nontrivial kernel classes (groups of states sharing an image),
    /// each sorted, ordered by their smallest member.
    pub fn merged_classes(&self) -> Vec<Vec<State>> {
        let n = self.n();
        let mut by_target: Vec<Vec<State>> = vec![Vec::new(); n];
        for (q, &img) in self.images.iter().enumerate() {
            by_target[img].push(q);
        }
        let mut classes: Vec<Vec<State>> =
            by_target.into_iter().filter(|c| c.len() >= 2).collect();
        classes.sort_by_key(|c| c[0]);
        classes
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// JSON form of an automaton: `{"n": 3, "a": [..], "b": [..]}`.
#[derive(Serialize, Deserialize)]
struct AutomatonJson {
    n: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

/// A two-letter deterministic complete semiautomaton given by the actions
/// of its letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automaton {
    a: Transformation,
    b: Transformation,
}

impl Automaton {
    pub fn new(a: Transformation, b: Transformation) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::UniverseMismatch { left: a.n(), right: b.n() });
        }
        Ok(Automaton { a, b })
    }

    pub fn from_images(a: &[State], b: &[State]) -> Result<Self> {
        Self::new(Transformation::new(a.to_vec())?, Transformation::new(b.to_vec())?)
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn letter(&self, l: Letter) -> &Transformation {
        match l {
            Letter::A => &self.a,
            Letter::B => &self.b,
        }
    }

    pub fn a(&self) -> &Transformation {
        &self.a
    }

    pub fn b(&self) -> &Transformation {
        &self.b
    }

    /// Letter-swapped automaton.
    pub fn dual(&self) -> Automaton {
        Automaton { a: self.b.clone(), b: self.a.clone() }
    }

    /// Overwrite both letters in place, reusing allocations. Enumeration
    /// plumbing for the sweeps.
    pub(crate) fn copy_images_from(&mut self, a: &Transformation, b: &Transformation) {
        self.a.images.clear();
        self.a.images.extend_from_slice(&a.images);
        self.b.images.clear();
        self.b.images.extend_from_slice(&b.images);
    }

    pub fn apply_word(&self, s: &StateSet, w: &Word) -> Result<StateSet> {
        let mut cur = *s;
        for l in w.letters() {
            cur = self.letter(*l).apply(&cur)?;
        }
        Ok(cur)
    }

    /// `|Q| - |Q w|`; zero for the empty word.
    pub fn deficiency(&self, w: &Word) -> usize {
        let full = StateSet::full(self.n());
        self.n() - self.apply_word(&full, w).expect("same universe").len()
    }

    /// `Q \ Qw`.
    pub fn missing_set(&self, w: &Word) -> StateSet {
        let full = StateSet::full(self.n());
        self.apply_word(&full, w).expect("same universe").complement()
    }

    /// One letter of the missing-set update: the states missing after
    /// reading `letter` given that `q1` was already missing. Equals
    /// `M(letter) ∪ { q·letter : q ∈ q1, no state outside q1 shares its image }`.
    pub fn missing_step(&self, q1: &StateSet, letter: Letter) -> Result<StateSet> {
        let t = self.letter(letter);
        if q1.n() != t.n() {
            return Err(Error::UniverseMismatch { left: q1.n(), right: t.n() });
        }
        let mut out = t.missing();
        for q in q1.iter() {
            let img = t.apply_state(q);
            let sole = (0..t.n())
                .filter(|&p| t.apply_state(p) == img)
                .all(|p| q1.contains(p));
            if sole {
                out.insert(img);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&AutomatonJson {
            n: self.n(),
            a: self.a.images.clone(),
            b: self.b.images.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: AutomatonJson = serde_json::from_str(text)?;
        if parsed.a.len() != parsed.n || parsed.b.len() != parsed.n {
            return Err(Error::UniverseMismatch {
                left: parsed.a.len(),
                right: parsed.b.len(),
            });
        }
        Self::new(Transformation::new(parsed.a)?, Transformation::new(parsed.b)?)
    }
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={:?} b={:?}", self.a, self.b)
    }
}

/// The shape of one letter. Every transformation falls in exactly one
/// class. The four numbered types are the only non-permutation shapes a
/// letter of a proper 3-compressible automaton can have; everything else
/// reaches deficiency 3 on its own and is `Heavy`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LetterClass {
    Permutation,
    /// Three states share an image and two of them are the missing pair.
    /// `missing` is sorted; `third` completes the merged triple.
    Type1 { missing: [State; 2], third: State },
    /// Two disjoint merged pairs, one missing state inside each.
    /// Ordered so `pairs[0].0 < pairs[1].0`; each entry is
    /// `(missing, kept)`.
    Type2 { pairs: [(State, State); 2] },
    /// One merged pair and the missing state is one of the pair.
    Type3 { missing: State, mate: State },
    /// One merged pair, the missing state is outside it and maps into it.
    /// `target` is the pair member the missing state maps to.
    Type4 { missing: State, target: State, mate: State },
    Heavy,
}

/// Coarse tag of a [`LetterClass`], used for family labels and filters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum ClassTag {
    Type1,
    Type2,
    Type3,
    Type4,
    Permutation,
    Heavy,
}

impl LetterClass {
    pub fn tag(&self) -> ClassTag {
        match self {
            LetterClass::Permutation => ClassTag::Permutation,
            LetterClass::Type1 { .. } => ClassTag::Type1,
            LetterClass::Type2 { .. } => ClassTag::Type2,
            LetterClass::Type3 { .. } => ClassTag::Type3,
            LetterClass::Type4 { .. } => ClassTag::Type4,
            LetterClass::Heavy => ClassTag::Heavy,
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::Type1 => "1",
            ClassTag::Type2 => "2",
            ClassTag::Type3 => "3",
            ClassTag::Type4 => "4",
            ClassTag::Permutation => "p",
            ClassTag::Heavy => "heavy",
        };
        f.write_str(s)
    }
}

impl ClassTag {
    pub fn parse(s: &str) -> Option<ClassTag> {
        match s {
            "1" => Some(ClassTag::Type1),
            "2" => Some(ClassTag::Type2),
            "3" => Some(ClassTag::Type3),
            "4" => Some(ClassTag::Type4),
            "p" | "P" => Some(ClassTag::Permutation),
            "heavy" | "h" => Some(ClassTag::Heavy),
            _ => None,
        }
    }
}

/// Classify one letter. Total: every transformation matches exactly one
/// class.
pub fn classify_letter(t: &Transformation) -> LetterClass {
    let deficiency = t.deficiency();
    if deficiency == 0 {
        return LetterClass::Permutation;
    }
    let missing: Vec<State> = t.missing().iter().collect();
    let classes = t.merged_classes();
    match deficiency {
        1 => {
            // Exactly one merged pair.
            debug_assert!(classes.len() == 1 && classes[0].len() == 2);
            let (p, q) = (classes[0][0], classes[0][1]);
            let m = missing[0];
            if m == p {
                LetterClass::Type3 { missing: p, mate: q }
            } else if m == q {
                LetterClass::Type3 { missing: q, mate: p }
            } else {
                let img = t.apply_state(m);
                if img == p {
                    LetterClass::Type4 { missing: m, target: p, mate: q }
                } else if img == q {
                    LetterClass::Type4 { missing: m, target: q, mate: p }
                } else {
                    LetterClass::Heavy
                }
            }
        }
        2 => {
            if classes.len() == 1 {
                // One merged triple.
                debug_assert_eq!(classes[0].len(), 3);
                let triple = &classes[0];
                if missing.iter().all(|m| triple.contains(m)) {
                    let third = *triple.iter().find(|q| !missing.contains(q)).expect("third");
                    LetterClass::Type1 { missing: [missing[0], missing[1]], third }
                } else {
                    LetterClass::Heavy
                }
            } else {
                // Two merged pairs.
                debug_assert!(classes.len() == 2 && classes.iter().all(|c| c.len() == 2));
                let in_first: Vec<_> = missing.iter().filter(|m| classes[0].contains(m)).collect();
                let in_second: Vec<_> = missing.iter().filter(|m| classes[1].contains(m)).collect();
                if in_first.len() == 1 && in_second.len() == 1 {
                    let pair_of = |class: &[State], m: State| {
                        let kept = if class[0] == m { class[1] } else { class[0] };
                        (m, kept)
                    };
                    let p0 = pair_of(&classes[0], *in_first[0]);
                    let p1 = pair_of(&classes[1], *in_second[0]);
                    let pairs = if p0.0 < p1.0 { [p0, p1] } else { [p1, p0] };
                    LetterClass::Type2 { pairs }
                } else {
                    // Both missing in one pair, or some missing outside both.
                    LetterClass::Heavy
                }
            }
        }
        _ => LetterClass::Heavy,
    }
}

/// The family label of an automaton: the classes of both letters, oriented
/// so that the letter with the smaller class tag comes first (permutations
/// last). `swapped` records whether dualization was applied to reach that
/// orientation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AutomatonClass {
    pub first: LetterClass,
    pub second: LetterClass,
    pub swapped: bool,
}

impl AutomatonClass {
    pub fn label(&self) -> (ClassTag, ClassTag) {
        (self.first.tag(), self.second.tag())
    }

    pub fn label_string(&self) -> String {
        format!("({},{})", self.first.tag(), self.second.tag())
    }
}

fn rank(tag: ClassTag) -> u8 {
    match tag {
        ClassTag::Type1 => 1,
        ClassTag::Type2 => 2,
        ClassTag::Type3 => 3,
        ClassTag::Type4 => 4,
        ClassTag::Permutation => 5,
        ClassTag::Heavy => 6,
    }
}

/// Classify an automaton from its letters' classes.
pub fn classify_automaton_with(ca: LetterClass, cb: LetterClass) -> AutomatonClass {
    if rank(ca.tag()) > rank(cb.tag()) {
        AutomatonClass { first: cb, second: ca, swapped: true }
    } else {
        AutomatonClass { first: ca, second: cb, swapped: false }
    }
}

pub fn classify_automaton(aut: &Automaton) -> AutomatonClass {
    classify_automaton_with(classify_letter(aut.a()), classify_letter(aut.b()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images.to_vec()).unwrap()
    }

    /// The three-state Cerny automaton: a merges 0 into 1, b cycles
    /// 0 -> 1 -> 2 -> 0.
    fn cerny() -> Automaton {
        Automaton::from_images(&[1, 1, 2], &[1, 2, 0]).unwrap()
    }

    #[test]
    fn apply_identity_and_constant() {
        let id = Transformation::identity(3);
        let s = StateSet::from_states(3, [0, 2]);
        assert_eq!(id.apply(&s).unwrap(), s);

        let c = t(&[0, 0, 0]);
        assert_eq!(
            c.apply(&StateSet::full(3)).unwrap(),
            StateSet::singleton(3, 0)
        );
    }

    #[test]
    fn apply_cerny_letter() {
        let a = t(&[1, 1, 2]);
        assert_eq!(
            a.apply(&StateSet::full(3)).unwrap(),
            StateSet::from_states(3, [1, 2])
        );
    }

    #[test]
    fn apply_universe_mismatch() {
        let a = t(&[1, 1, 2]);
        assert!(a.apply(&StateSet::full(4)).is_err());
    }

    #[test]
    fn deficiency_identity_letters() {
        let aut = Automaton::from_images(&[0, 1, 2], &[0, 1, 2]).unwrap();
        for w in ["", "a", "ab", "bba"] {
            assert_eq!(aut.deficiency(&Word::parse(w).unwrap()), 0);
        }
    }

    #[test]
    fn missing_set_examples() {
        // Merged triple 0,1,2 -> 2 with 3 fixed: reading "a" misses {0,1}.
        let aut = Automaton::from_images(&[2, 2, 2, 3], &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            aut.missing_set(&Word::parse("a").unwrap()),
            StateSet::from_states(4, [0, 1])
        );
        // Empty word misses nothing.
        assert_eq!(aut.missing_set(&Word::new(vec![])), StateSet::empty(4));
    }

    #[test]
    fn missing_set_cerny_abba() {
        let aut = cerny();
        let m = aut.missing_set(&Word::parse("abba").unwrap());
        assert_eq!(m.len(), 2);
        assert_eq!(m, StateSet::from_states(3, [0, 2]));
    }

    #[test]
    fn missing_step_permutation_translates() {
        let aut = Automaton::from_images(&[1, 1, 2], &[1, 2, 0]).unwrap();
        for bits in 0u64..8 {
            let q1 = StateSet::from_bits(3, bits);
            let stepped = aut.missing_step(&q1, Letter::B).unwrap();
            assert_eq!(stepped, aut.b().apply(&q1).unwrap());
        }
    }

    #[test]
    fn missing_step_from_empty_is_letter_missing() {
        let aut = cerny();
        assert_eq!(
            aut.missing_step(&StateSet::empty(3), Letter::A).unwrap(),
            aut.a().missing()
        );
    }

    #[test]
    fn missing_step_cerny_singleton() {
        // Present states {0,2} map to {1,2}, so only 0 is missing after a.
        let aut = cerny();
        let q1 = StateSet::singleton(3, 1);
        assert_eq!(
            aut.missing_step(&q1, Letter::A).unwrap(),
            StateSet::singleton(3, 0)
        );
    }

    #[test]
    fn missing_step_fold_equals_missing_set_small() {
        // Exhaustive over all 3-state automata and words up to length 5.
        let maps: Vec<Vec<usize>> = (0..27)
            .map(|i| vec![i % 3, (i / 3) % 3, (i / 9) % 3])
            .collect();
        for a in &maps {
            for b in &maps {
                let aut = Automaton::from_images(a, b).unwrap();
                for len in 0..=5usize {
                    for code in 0..(1u32 << len) {
                        let w = Word::from_code(len, code);
                        let mut acc = StateSet::empty(3);
                        for l in w.letters() {
                            acc = aut.missing_step(&acc, *l).unwrap();
                        }
                        assert_eq!(acc, aut.missing_set(&w));
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let id = Transformation::identity(4);
        assert_eq!(id.orbit_of(1), StateSet::singleton(4, 1));

        let four_cycle = t(&[1, 2, 3, 0]);
        assert_eq!(four_cycle.orbit_of(0), StateSet::full(4));

        // Transposition (0 2) fixing 1 and 3.
        let swap = t(&[2, 1, 0, 3]);
        assert_eq!(
            swap.orbit(&StateSet::from_states(4, [0, 1])).unwrap(),
            StateSet::from_states(4, [0, 1, 2])
        );
    }

    #[test]
    fn dual_is_involutive() {
        let aut = cerny();
        assert_eq!(aut.dual().dual(), aut);
        let w = Word::parse("abba").unwrap();
        assert_eq!(w.dual().dual(), w);
        assert_eq!(w.dual(), Word::parse("baab").unwrap());
    }

    #[test]
    fn dual_preserves_deficiency() {
        let maps: Vec<Vec<usize>> = (0..27)
            .map(|i| vec![i % 3, (i / 3) % 3, (i / 9) % 3])
            .collect();
        for a in maps.iter().step_by(4) {
            for b in maps.iter().step_by(5) {
                let aut = Automaton::from_images(a, b).unwrap();
                for code in 0..16u32 {
                    let w = Word::from_code(4, code);
                    assert_eq!(aut.deficiency(&w), aut.dual().deficiency(&w.dual()));
                }
            }
        }
    }

    #[test]
    fn classify_basic_shapes() {
        assert_eq!(classify_letter(&Transformation::identity(5)), LetterClass::Permutation);

        // 0,1,2 -> 2 and 3 fixed: merged triple {0,1,2}, missing {0,1}.
        assert_eq!(
            classify_letter(&t(&[2, 2, 2, 3])),
            LetterClass::Type1 { missing: [0, 1], third: 2 }
        );

        // Pairs {0,1}->2 and {2,3}->3: missing {0,1}? image={2,3} so missing {0,1}.
        // Both missing in... 0 in first pair, 1 in first pair -> heavy.
        assert_eq!(classify_letter(&t(&[2, 2, 3, 3])), LetterClass::Heavy);

        // Type 2: pairs {0,1} and {2,3}, image misses 0 and 2.
        // 0,1 -> 1; 2,3 -> 3: image {1,3}, n=4: missing {0,2}.
        assert_eq!(
            classify_letter(&t(&[1, 1, 3, 3])),
            LetterClass::Type2 { pairs: [(0, 1), (2, 3)] }
        );

        // Type 3: pair {0,1} -> 1, rest fixed: missing {0}.
        assert_eq!(
            classify_letter(&t(&[1, 1, 2])),
            LetterClass::Type3 { missing: 0, mate: 1 }
        );

        // Type 4: pair {0,1} -> 0, 2 -> 1: missing 2, maps to pair member 1.
        assert_eq!(
            classify_letter(&t(&[0, 0, 1])),
            LetterClass::Type4 { missing: 2, target: 1, mate: 0 }
        );

        // Deficiency-1 with missing state mapping outside the pair: heavy.
        // pair {0,1} -> 0; 2 -> 3; 3 -> 1... image {0,3,1} missing {2}; 2->3 not in pair.
        assert_eq!(classify_letter(&t(&[0, 0, 3, 1])), LetterClass::Heavy);

        // Deficiency >= 3.
        assert_eq!(classify_letter(&t(&[0, 0, 0, 0])), LetterClass::Heavy);
    }

    #[test]
    fn classify_is_total_n_up_to_5() {
        for n in 1..=5usize {
            let count = n.pow(n as u32);
            for idx in 0..count {
                let mut images = Vec::with_capacity(n);
                let mut k = idx;
                for _ in 0..n {
                    images.push(k % n);
                    k /= n;
                }
                let tr = Transformation::new(images).unwrap();
                let class = classify_letter(&tr);
                // Witness consistency checks.
                match class {
                    LetterClass::Permutation => assert_eq!(tr.deficiency(), 0),
                    LetterClass::Type1 { missing, third } => {
                        assert_eq!(tr.deficiency(), 2);
                        assert!(missing[0] < missing[1]);
                        let m = tr.missing();
                        assert!(m.contains(missing[0]) && m.contains(missing[1]));
                        assert_eq!(tr.apply_state(missing[0]), tr.apply_state(third));
                    }
                    LetterClass::Type2 { pairs } => {
                        assert_eq!(tr.deficiency(), 2);
                        assert!(pairs[0].0 < pairs[1].0);
                        for (m, kept) in pairs {
                            assert!(tr.missing().contains(m));
                            assert_eq!(tr.apply_state(m), tr.apply_state(kept));
                        }
                    }
                    LetterClass::Type3 { missing, mate } => {
                        assert_eq!(tr.deficiency(), 1);
                        assert!(tr.missing().contains(missing));
                        assert_eq!(tr.apply_state(missing), tr.apply_state(mate));
                    }
                    LetterClass::Type4 { missing, target, mate } => {
                        assert_eq!(tr.deficiency(), 1);
                        assert!(tr.missing().contains(missing));
                        assert_eq!(tr.apply_state(missing), target);
                        assert_eq!(tr.apply_state(target), tr.apply_state(mate));
                        assert!(missing != target && missing != mate);
                    }
                    LetterClass::Heavy => {}
                }
            }
        }
    }

    #[test]
    fn automaton_class_orientation() {
        let type3 = t(&[1, 1, 2, 3]);
        let perm = t(&[0, 1, 2, 3]);
        let c1 = classify_automaton(&Automaton::new(type3.clone(), perm.clone()).unwrap());
        assert_eq!(c1.label(), (ClassTag::Type3, ClassTag::Permutation));
        assert!(!c1.swapped);

        let c2 = classify_automaton(&Automaton::new(perm, type3).unwrap());
        assert_eq!(c2.label(), (ClassTag::Type3, ClassTag::Permutation));
        assert!(c2.swapped);
    }

    #[test]
    fn json_round_trip() {
        let aut = cerny();
        let text = aut.to_json();
        assert_eq!(text, r#"{"n":3,"a":[1,1,2],"b":[1,2,0]}"#);
        let back = Automaton::from_json(&text).unwrap();
        assert_eq!(back, aut);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_bad_images() {
        assert!(Automaton::from_json(r#"{"n":2,"a":[0,2],"b":[0,1]}"#).is_err());
        assert!(Automaton::from_json(r#"{"n":3,"a":[0,1],"b":[0,1,2]}"#).is_err());
    }
}
