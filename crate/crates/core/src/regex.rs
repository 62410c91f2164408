//! A minimal regular-expression engine over the alphabet `{a, b}`.
//!
//! Grammar: literals `a` and `b`, juxtaposition for concatenation, infix
//! `|` for alternation, postfix `*` and `+`, and parentheses. Compilation
//! uses the position construction, giving an epsilon-free nondeterministic
//! matcher whose states fit in one machine word.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ast {
    Lit(Letter),
    Cat(Box<Ast>, Box<Ast>),
    Alt(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
    Plus(Box<Ast>),
}

impl Ast {
    fn dual(&self) -> Ast {
        match self {
            Ast::Lit(l) => Ast::Lit(l.other()),
            Ast::Cat(l, r) => Ast::Cat(Box::new(l.dual()), Box::new(r.dual())),
            Ast::Alt(l, r) => Ast::Alt(Box::new(l.dual()), Box::new(r.dual())),
            Ast::Star(x) => Ast::Star(Box::new(x.dual())),
            Ast::Plus(x) => Ast::Plus(Box::new(x.dual())),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::RegexParse { position: self.pos, message: message.into() }
    }

    fn parse_alt(&mut self) -> Result<Ast> {
        let mut node = self.parse_cat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.parse_cat()?;
            node = Ast::Alt(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn parse_cat(&mut self) -> Result<Ast> {
        let mut node = self.parse_postfix()?;
        while matches!(self.peek(), Some('a' | 'b' | '(')) {
            let rhs = self.parse_postfix()?;
            node = Ast::Cat(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn parse_postfix(&mut self) -> Result<Ast> {
        let mut node = self.parse_atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    node = Ast::Star(Box::new(node));
                }
                Some('+') => {
                    self.pos += 1;
                    node = Ast::Plus(Box::new(node));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some('a') => {
                self.pos += 1;
                Ok(Ast::Lit(Letter::A))
            }
            Some('b') => {
                self.pos += 1;
                Ok(Ast::Lit(Letter::B))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_alt()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of pattern")),
        }
    }
}

/// Glushkov data for one subexpression over literal positions.
#[derive(Clone)]
struct PosInfo {
    nullable: bool,
    first: u64,
    last: u64,
}

/// A compiled regex: an epsilon-free nondeterministic matcher over the
/// literal positions of the pattern.
#[derive(Clone, Debug)]
pub struct Regex {
    ast: Ast,
    /// Letter at each position.
    letters: Vec<Letter>,
    /// Positions that can start a match.
    first: u64,
    /// Positions that can end a match.
    last: u64,
    nullable: bool,
    /// follow[p] = positions that may come right after p.
    follow: Vec<u64>,
}

impl Regex {
    pub fn parse(text: &str) -> Result<Regex> {
        let mut parser = Parser::new(text);
        if parser.peek().is_none() {
            return Err(parser.error("empty pattern"));
        }
        let ast = parser.parse_alt()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(Self::compile(ast))
    }

    fn compile(ast: Ast) -> Regex {
        let mut letters = Vec::new();
        let mut follow = Vec::new();
        let info = Self::build(&ast, &mut letters, &mut follow);
        assert!(letters.len() <= 64, "pattern too large");
        Regex {
            ast,
            letters,
            first: info.first,
            last: info.last,
            nullable: info.nullable,
            follow,
        }
    }

    fn build(node: &Ast, letters: &mut Vec<Letter>, follow: &mut Vec<u64>) -> PosInfo {
        match node {
            Ast::Lit(l) => {
                let p = letters.len();
                letters.push(*l);
                follow.push(0);
                PosInfo { nullable: false, first: 1 << p, last: 1 << p }
            }
            Ast::Cat(lhs, rhs) => {
                let li = Self::build(lhs, letters, follow);
                let ri = Self::build(rhs, letters, follow);
                let mut bits = li.last;
                while bits != 0 {
                    let p = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    follow[p] |= ri.first;
                }
                PosInfo {
                    nullable: li.nullable && ri.nullable,
                    first: if li.nullable { li.first | ri.first } else { li.first },
                    last: if ri.nullable { li.last | ri.last } else { ri.last },
                }
            }
            Ast::Alt(lhs, rhs) => {
                let li = Self::build(lhs, letters, follow);
                let ri = Self::build(rhs, letters, follow);
                PosInfo {
                    nullable: li.nullable || ri.nullable,
                    first: li.first | ri.first,
                    last: li.last | ri.last,
                }
            }
            Ast::Star(inner) | Ast::Plus(inner) => {
                let ii = Self::build(inner, letters, follow);
                let mut bits = ii.last;
                while bits != 0 {
                    let p = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    follow[p] |= ii.first;
                }
                PosInfo {
                    nullable: ii.nullable || matches!(node, Ast::Star(_)),
                    first: ii.first,
                    last: ii.last,
                }
            }
        }
    }

    /// Letter-swapped pattern.
    pub fn dual(&self) -> Regex {
        Self::compile(self.ast.dual())
    }

    /// Does the whole word belong to the language?
    pub fn matches(&self, w: &Word) -> bool {
        let mut states = 0u64;
        let mut started = false;
        for &l in w.letters() {
            let sources = if started { states } else { self.first };
            let mut next = 0u64;
            let mut bits = sources;
            while bits != 0 {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if !started {
                    if self.letters[p] == l {
                        next |= 1 << p;
                    }
                } else {
                    let mut fb = self.follow[p];
                    while fb != 0 {
                        let q = fb.trailing_zeros() as usize;
                        fb &= fb - 1;
                        if self.letters[q] == l {
                            next |= 1 << q;
                        }
                    }
                }
            }
            states = next;
            started = true;
            if states == 0 {
                return false;
            }
        }
        if !started {
            self.nullable
        } else {
            states & self.last != 0
        }
    }

    /// Does some factor of the word belong to the language?
    pub fn matches_factor(&self, w: &Word) -> bool {
        if self.nullable {
            return true;
        }
        // Run the matcher from every start position, all in one pass:
        // reseed the start states at each step.
        let mut states = 0u64;
        for &l in w.letters() {
            let mut next = 0u64;
            let mut bits = states;
            while bits != 0 {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let mut fb = self.follow[p];
                while fb != 0 {
                    let q = fb.trailing_zeros() as usize;
                    fb &= fb - 1;
                    if self.letters[q] == l {
                        next |= 1 << q;
                    }
                }
            }
            // A fresh match may start here.
            let mut fb = self.first;
            while fb != 0 {
                let q = fb.trailing_zeros() as usize;
                fb &= fb - 1;
                if self.letters[q] == l {
                    next |= 1 << q;
                }
            }
            if next & self.last != 0 {
                return true;
            }
            states = next;
        }
        false
    }

    /// Enumerate every word of the language up to the given length by
    /// expanding the syntax tree. Test oracle for the compiled matcher.
    pub fn enumerate_up_to(&self, max_len: usize) -> Vec<Word> {
        fn lang(node: &Ast, max_len: usize) -> Vec<Vec<Letter>> {
            match node {
                Ast::Lit(l) => {
                    if max_len >= 1 {
                        vec![vec![*l]]
                    } else {
                        vec![]
                    }
                }
                Ast::Alt(l, r) => {
                    let mut out = lang(l, max_len);
                    out.extend(lang(r, max_len));
                    out.sort();
                    out.dedup();
                    out
                }
                Ast::Cat(l, r) => {
                    let left = lang(l, max_len);
                    let right = lang(r, max_len);
                    let mut out = Vec::new();
                    for lw in &left {
                        for rw in &right {
                            if lw.len() + rw.len() <= max_len {
                                let mut w = lw.clone();
                                w.extend_from_slice(rw);
                                out.push(w);
                            }
                        }
                    }
                    out.sort();
                    out.dedup();
                    out
                }
                Ast::Star(inner) | Ast::Plus(inner) => {
                    let base = lang(inner, max_len);
                    let mut out: Vec<Vec<Letter>> = if matches!(node, Ast::Star(_)) {
                        vec![vec![]]
                    } else {
                        base.clone()
                    };
                    loop {
                        let mut grew = false;
                        let mut next = out.clone();
                        for w in &out {
                            for bw in &base {
                                if bw.is_empty() {
                                    continue;
                                }
                                if w.len() + bw.len() <= max_len {
                                    let mut ext = w.clone();
                                    ext.extend_from_slice(bw);
                                    if !next.contains(&ext) {
                                        next.push(ext);
                                        grew = true;
                                    }
                                }
                            }
                        }
                        out = next;
                        if !grew {
                            break;
                        }
                    }
                    out.sort();
                    out.dedup();
                    out
                }
            }
        }
        let mut result: Vec<Word> = lang(&self.ast, max_len).into_iter().map(Word::new).collect();
        result.sort();
        result.dedup();
        result
    }
}
