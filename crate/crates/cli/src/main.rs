use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use collapse_core::automaton::{Automaton, ClassTag, LetterClass};
use collapse_core::characterize::{characterize, MenuLanguage};
use collapse_core::collapsing;
use collapse_core::msa;
use collapse_core::regex::Regex;
use collapse_core::reproduce;
use collapse_core::scs;
use collapse_core::sweep;
use collapse_core::word::Word;
use serde_json::json;
use std::fs;
use std::process::ExitCode;

/// Toolkit for 3-compressibility of two-letter semiautomata and short
/// 3-collapsing words.
#[derive(Parser)]
#[command(name = "collapse", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an automaton's letters and report its family verdict.
    Classify {
        /// JSON file: {"n": N, "a": [..], "b": [..]}
        file: String,
    },
    /// Shortest k-compressing word and properness.
    Compress {
        file: String,
        #[arg(long)]
        k: usize,
    },
    /// Emit the m-missing-state automaton in DOT format.
    MsaDot {
        file: String,
        #[arg(long)]
        m: usize,
    },
    /// Check a word against every k-compressible n-state automaton.
    VerifyWord {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compare the family characterization with the brute-force oracle.
    VerifyCharacterization {
        #[arg(long)]
        n: usize,
        /// Family as "i,j" with i,j in {1,2,3,4,p}, e.g. "3,p".
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// The five-state check against the 33-letter word and its dual.
    Sweep5 {
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Exact shortest word containing all patterns from a file.
    Scs {
        /// One pattern per line, letters a and b only.
        #[arg(long)]
        patterns: String,
        /// Enumerate every optimal word instead of just one.
        #[arg(long)]
        all: bool,
        /// Regex that must match some factor of each reported word
        /// (implies --all). May be repeated.
        #[arg(long = "constraint", requires = "all")]
        constraints: Vec<String>,
    },
    /// Check the sufficient conditions for a word to be 3-collapsing.
    Certificate {
        #[arg(long)]
        word: String,
    },
    /// Run the full verification suite and print a pass/fail table.
    Reproduce {
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn read_automaton(path: &str) -> Result<Automaton> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    Automaton::from_json(text.trim()).map_err(|e| anyhow!("{path}: {e}"))
}

fn letter_class_json(class: &LetterClass) -> serde_json::Value {
    match class {
        LetterClass::Permutation => json!({"class": "p"}),
        LetterClass::Type1 { missing, third } => {
            json!({"class": "1", "missing": missing, "third": third})
        }
        LetterClass::Type2 { pairs } => json!({
            "class": "2",
            "pairs": [
                {"missing": pairs[0].0, "kept": pairs[0].1},
                {"missing": pairs[1].0, "kept": pairs[1].1},
            ],
        }),
        LetterClass::Type3 { missing, mate } => {
            json!({"class": "3", "missing": missing, "mate": mate})
        }
        LetterClass::Type4 { missing, target, mate } => {
            json!({"class": "4", "missing": missing, "target": target, "mate": mate})
        }
        LetterClass::Heavy => json!({"class": "heavy"}),
    }
}

fn parse_family(text: &str) -> Result<(ClassTag, ClassTag)> {
    let (left, right) = text
        .split_once(',')
        .ok_or_else(|| anyhow!("family must look like \"3,p\""))?;
    let a = ClassTag::parse(left.trim()).ok_or_else(|| anyhow!("bad class {left:?}"))?;
    let b = ClassTag::parse(right.trim()).ok_or_else(|| anyhow!("bad class {right:?}"))?;
    Ok((a, b))
}

fn parse_word(text: &str) -> Result<Word> {
    Word::parse(text).map_err(|e| anyhow!("{e}"))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Classify { file } => {
            let aut = read_automaton(&file)?;
            let verdict = characterize(&aut);
            let class = verdict.family;
            let menu: Vec<String> = verdict.word_menu.iter().map(|w| w.to_string()).collect();
            let out = json!({
                "n": aut.n(),
                "family": class.label_string(),
                "swapped": class.swapped,
                "a": letter_class_json(&if class.swapped { class.second } else { class.first }),
                "b": letter_class_json(&if class.swapped { class.first } else { class.second }),
                "verdict": format!("{:?}", verdict.verdict),
                "branch": verdict.matched_branch,
                "menu": menu,
                "menu_language": verdict.menu_language.map(|l| match l {
                    MenuLanguage::ScriptL => "script-l",
                    MenuLanguage::ScriptLDual => "script-l-dual",
                }),
            });
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Compress { file, k } => {
            let aut = read_automaton(&file)?;
            let report = msa::shortest_compressing_word(&aut, k).map_err(|e| anyhow!("{e}"))?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::MsaDot { file, m } => {
            let aut = read_automaton(&file)?;
            let msa = msa::build_msa(&aut, m).map_err(|e| anyhow!("{e}"))?;
            print!("{}", msa.export_dot());
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyWord { word, n, k, threads } => {
            let word = parse_word(&word)?;
            if !(2..=sweep::MAX_SWEEP_STATES).contains(&n) {
                return Err(anyhow!("n must be between 2 and {}", sweep::MAX_SWEEP_STATES));
            }
            if k >= n {
                return Err(anyhow!("k must be below n"));
            }
            let report =
                sweep::with_thread_pool(threads, || sweep::verify_word(&word, n, k));
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.violator_total == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::VerifyCharacterization { n, family, threads } => {
            if !(2..=sweep::MAX_SWEEP_STATES).contains(&n) {
                return Err(anyhow!("n must be between 2 and {}", sweep::MAX_SWEEP_STATES));
            }
            let families: Vec<(ClassTag, ClassTag)> = match family {
                Some(text) => vec![parse_family(&text)?],
                None => vec![],
            };
            let report = sweep::with_thread_pool(threads, || {
                sweep::verify_characterization(n, &families)
            });
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.mismatch_total == 0 && report.menu_failure_total == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Sweep5 { threads } => {
            let report = sweep::with_thread_pool(threads, sweep::five_state_pair_sweep);
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.violator_total == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Scs { patterns, all, constraints } => {
            let text = fs::read_to_string(&patterns)
                .with_context(|| format!("reading {patterns}"))?;
            let words: Vec<Word> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(parse_word)
                .collect::<Result<_>>()?;
            let mut solution =
                scs::scs_solve(&words, all).map_err(|e| anyhow!("{e}"))?;
            if !constraints.is_empty() {
                let compiled: Vec<Regex> = constraints
                    .iter()
                    .map(|c| Regex::parse(c).map_err(|e| anyhow!("{e}")))
                    .collect::<Result<_>>()?;
                solution = scs::scs_filter(&solution, &compiled).map_err(|e| anyhow!("{e}"))?;
            }
            println!("length {}", solution.length);
            println!("words {}", solution.optimal_count);
            for w in &solution.words {
                println!("{w}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certificate { word } => {
            let word = parse_word(&word)?;
            let report = collapsing::certificate_3_collapsing(&word);
            let missing: Vec<String> =
                report.missing_requirements.iter().map(|m| m.to_string()).collect();
            let out = json!({
                "word": word.to_string(),
                "length": word.len(),
                "certified": report.is_certified,
                "missing_requirements": missing,
            });
            println!("{out}");
            Ok(if report.is_certified { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Reproduce { threads } => {
            let outcomes = sweep::with_thread_pool(threads, reproduce::run_all);
            let mut all_passed = true;
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                all_passed &= o.passed;
                println!("{} {}  {}  [{} ms]  {}", o.id, status, o.label, o.elapsed_ms, o.detail);
            }
            println!(
                "{}/{} criteria passed",
                outcomes.iter().filter(|o| o.passed).count(),
                outcomes.len()
            );
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
