//! Deciding 3-compressibility of two-letter semiautomata.
//!
//! The crate builds transformations and automata, classifies letters into
//! the shapes proper 3-compressible automata are made of, decides
//! compressibility through missing-state automata, carries an executable
//! characterization of every proper family, searches for exact shortest
//! superstrings under factor constraints, and sweeps all small automata
//! to verify the whole construction, including the 53-letter 3-collapsing
//! word.

pub mod automaton;
pub mod characterize;
pub mod collapsing;
mod error;
pub mod msa;
pub mod naive;
pub mod regex;
pub mod reproduce;
pub mod scs;
pub mod sweep;
pub mod word;

pub use automaton::{
    classify_automaton, classify_letter, Automaton, AutomatonClass, ClassTag, LetterClass, State,
    StateSet, Transformation,
};
pub use characterize::{characterize, FamilyVerdict, MenuLanguage};
pub use error::{Error, Result};
pub use msa::{build_msa, compressibility, shortest_compressing_word, CompressReport, Compressibility};
pub use word::{Letter, Word};
