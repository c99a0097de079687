//! Pushdown automata with empty-stack and final-state acceptance, move
//! classification, and push complexity: the minimum number of push moves
//! over accepting computations of a word.
//!
//! A transition writing a stack word of length >= 2 is a push move, length 0
//! a pop move, length 1 a neutral move. The minimum-push search is exact
//! within an explicit push budget: inside a budget B the stack height cannot
//! exceed 1 + B*(max written length - 1), so the configuration space is
//! finite and a cheapest-first search terminates.

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::Limits;
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdaMode {
    EmptyStack,
    FinalState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    Push,
    Pop,
    Neutral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdaTransition {
    pub from: String,
    /// `None` reads no input (a λ-move).
    pub input: Option<char>,
    pub top: char,
    pub to: String,
    /// Replacement for the popped top, leftmost symbol becoming the new top.
    pub write: Vec<char>,
}

impl PdaTransition {
    pub fn kind(&self) -> MoveKind {
        match self.write.len() {
            0 => MoveKind::Pop,
            1 => MoveKind::Neutral,
            _ => MoveKind::Push,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda {
    states: Vec<String>,
    input_alphabet: BTreeSet<char>,
    stack_alphabet: BTreeSet<char>,
    transitions: Vec<PdaTransition>,
    start: String,
    stack_start: char,
    accepting: BTreeSet<String>,
    mode: PdaMode,
}

/// Result of the minimum-push search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PushOutcome {
    Found(u64),
    Rejected,
    /// Some computation was cut off at the push budget, so rejection is not
    /// certain.
    CapExceeded,
}

impl PushOutcome {
    pub fn value(&self) -> Option<u64> {
        match self {
            PushOutcome::Found(v) => Some(*v),
            _ => None,
        }
    }
}

const MAX_WRITE_LEN: usize = 8;

impl Pda {
    pub fn new(
        start: impl Into<String>,
        stack_start: char,
        mode: PdaMode,
        accepting: impl IntoIterator<Item = String>,
        transitions: Vec<PdaTransition>,
    ) -> Result<Pda> {
        let start = start.into();
        let mut states = BTreeSet::from([start.clone()]);
        let mut input_alphabet = BTreeSet::new();
        let mut stack_alphabet = BTreeSet::from([stack_start]);
        for t in &transitions {
            if t.write.len() > MAX_WRITE_LEN {
                return Err(Error::Invalid(format!(
                    "stack word longer than {MAX_WRITE_LEN} symbols"
                )));
            }
            states.insert(t.from.clone());
            states.insert(t.to.clone());
            if let Some(c) = t.input {
                if !c.is_ascii_lowercase() {
                    return Err(Error::Invalid(format!("bad input letter `{c}`")));
                }
                input_alphabet.insert(c);
            }
            stack_alphabet.insert(t.top);
            stack_alphabet.extend(t.write.iter().copied());
        }
        let accepting: BTreeSet<String> = accepting.into_iter().collect();
        states.extend(accepting.iter().cloned());
        Ok(Pda {
            states: states.into_iter().collect(),
            input_alphabet,
            stack_alphabet,
            transitions,
            start,
            stack_start,
            accepting,
            mode,
        })
    }

    /// Parses the `.pda` file format: `mode:`, `start:`, `stack-start:`,
    /// optional `final:`, then transition lines `q a Z -> p W` with `_` for
    /// λ input and for the empty stack word.
    pub fn parse(text: &str) -> Result<Pda> {
        let mut mode = None;
        let mut start = None;
        let mut stack_start = None;
        let mut accepting: Vec<String> = Vec::new();
        let mut transitions = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("mode:") {
                mode = Some(match rest.trim() {
                    "empty-stack" => PdaMode::EmptyStack,
                    "final-state" => PdaMode::FinalState,
                    other => {
                        return Err(Error::Syntax {
                            line: line_no,
                            msg: format!("unknown mode `{other}`"),
                        })
                    }
                });
                continue;
            }
            if let Some(rest) = line.strip_prefix("start:") {
                start = Some(rest.trim().to_string());
                continue;
            }
            if let Some(rest) = line.strip_prefix("stack-start:") {
                let sym = rest.trim();
                if sym.chars().count() != 1 {
                    return Err(Error::Syntax {
                        line: line_no,
                        msg: "stack-start must be a single symbol".into(),
                    });
                }
                stack_start = sym.chars().next();
                continue;
            }
            if let Some(rest) = line.strip_prefix("final:") {
                accepting.extend(rest.split_whitespace().map(str::to_string));
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Syntax {
                line: line_no,
                msg: "expected `q a Z -> p W`".into(),
            })?;
            let lhs_toks: Vec<&str> = lhs.split_whitespace().collect();
            let rhs_toks: Vec<&str> = rhs.split_whitespace().collect();
            if lhs_toks.len() != 3 || rhs_toks.len() != 2 {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: "expected `q a Z -> p W`".into(),
                });
            }
            let input = match lhs_toks[1] {
                "_" => None,
                tok if tok.chars().count() == 1 => tok.chars().next(),
                _ => {
                    return Err(Error::Syntax {
                        line: line_no,
                        msg: "input must be a single letter or `_`".into(),
                    })
                }
            };
            if lhs_toks[2].chars().count() != 1 {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: "stack top must be a single symbol".into(),
                });
            }
            let write: Vec<char> = match rhs_toks[1] {
                "_" => Vec::new(),
                w => w.chars().collect(),
            };
            transitions.push(PdaTransition {
                from: lhs_toks[0].to_string(),
                input,
                top: lhs_toks[2].chars().next().unwrap(),
                to: rhs_toks[0].to_string(),
                write,
            });
        }
        let mode = mode.ok_or(Error::MissingStart)?;
        let start = start.ok_or(Error::MissingStart)?;
        let stack_start = stack_start.ok_or(Error::MissingStart)?;
        Pda::new(start, stack_start, mode, accepting, transitions)
    }

    pub fn mode(&self) -> PdaMode {
        self.mode
    }

    pub fn transitions(&self) -> &[PdaTransition] {
        &self.transitions
    }

    pub fn input_alphabet(&self) -> &BTreeSet<char> {
        &self.input_alphabet
    }

    pub fn accepting(&self) -> &BTreeSet<String> {
        &self.accepting
    }

    pub fn start_state(&self) -> &str {
        &self.start
    }

    pub fn stack_start_symbol(&self) -> char {
        self.stack_start
    }

    fn check_word(&self, word: &str) -> Result<Vec<char>> {
        let chars: Vec<char> = word.chars().collect();
        for &c in &chars {
            if !self.input_alphabet.contains(&c) {
                return Err(Error::AlphabetViolation(c));
            }
        }
        Ok(chars)
    }

    /// Minimum number of push moves over accepting computations, searched
    /// cheapest-first up to `push_cap`.
    pub fn push_word_capped(&self, word: &str, push_cap: u64, limits: &Limits) -> Result<PushOutcome> {
        let chars = self.check_word(word)?;
        let n = chars.len();
        let max_grow = self
            .transitions
            .iter()
            .map(|t| t.write.len().saturating_sub(1))
            .max()
            .unwrap_or(0);

        // stack as Vec with the top at the end
        type Config = (usize, usize, Vec<char>);
        let state_index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let start_cfg: Config = (state_index[self.start.as_str()], 0, vec![self.stack_start]);

        let mut heap: BinaryHeap<(Reverse<u64>, Config)> = BinaryHeap::new();
        let mut settled: HashMap<Config, u64> = HashMap::new();
        heap.push((Reverse(0), start_cfg));
        let mut truncated = false;
        let mut nodes: u64 = 0;

        while let Some((Reverse(cost), cfg)) = heap.pop() {
            if settled.contains_key(&cfg) {
                continue;
            }
            settled.insert(cfg.clone(), cost);
            nodes += 1;
            if nodes > limits.search_nodes {
                return Err(Error::BudgetExceeded("push search nodes".into()));
            }
            let (state, pos, stack) = cfg;
            let accepted = pos == n
                && match self.mode {
                    PdaMode::EmptyStack => stack.is_empty(),
                    PdaMode::FinalState => self.accepting.contains(&self.states[state]),
                };
            if accepted {
                return Ok(PushOutcome::Found(cost));
            }
            let Some(&top) = stack.last() else {
                continue; // empty stack halts the machine
            };
            for t in &self.transitions {
                if state_index[t.from.as_str()] != state || t.top != top {
                    continue;
                }
                let next_pos = match t.input {
                    None => pos,
                    Some(c) => {
                        if pos < n && chars[pos] == c {
                            pos + 1
                        } else {
                            continue;
                        }
                    }
                };
                let next_cost = cost + u64::from(t.kind() == MoveKind::Push);
                if next_cost > push_cap {
                    truncated = true;
                    continue;
                }
                let mut next_stack = stack.clone();
                next_stack.pop();
                next_stack.extend(t.write.iter().rev());
                debug_assert!(next_stack.len() <= 1 + (next_cost as usize) * max_grow.max(1));
                let next_cfg = (state_index[t.to.as_str()], next_pos, next_stack);
                if !settled.contains_key(&next_cfg) {
                    heap.push((Reverse(next_cost), next_cfg));
                }
            }
        }
        Ok(if truncated {
            PushOutcome::CapExceeded
        } else {
            PushOutcome::Rejected
        })
    }

    fn default_cap(word: &str) -> u64 {
        word.chars().count() as u64 + 16
    }

    pub fn push_word(&self, word: &str) -> Result<PushOutcome> {
        self.push_word_capped(word, Self::default_cap(word), &Limits::default())
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        match self.push_word(word)? {
            PushOutcome::Found(_) => Ok(true),
            PushOutcome::Rejected => Ok(false),
            PushOutcome::CapExceeded => Err(Error::BudgetExceeded(
                "push cap hit while deciding acceptance".into(),
            )),
        }
    }

    /// Per-length maxima of `push_word` over all words; non-members count 0.
    pub fn push_profile(&self, n_max: u32, limits: &Limits) -> Result<Profile> {
        let alphabet: Vec<char> = self.input_alphabet.iter().copied().collect();
        let mut profile = Profile::new(n_max);
        for n in 1..=n_max {
            let count = (alphabet.len() as u64).checked_pow(n).unwrap_or(u64::MAX);
            if count > limits.words_per_length {
                return Err(Error::BudgetExceeded(format!(
                    "{count} words of length {n} exceeds the enumeration budget"
                )));
            }
            let words = all_words(&alphabet, n);
            let best = words
                .par_iter()
                .map(|w| {
                    self.push_word(w)
                        .map(|o| o.value().unwrap_or(0))
                })
                .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
            profile.set(n, best);
        }
        Ok(profile)
    }

    /// Standard acceptance-mode conversion with a fresh bottom marker. The
    /// construction always applies, even when the machine is already in the
    /// target mode; it adds exactly one push move (the initial marker push)
    /// to any accepting computation.
    pub fn convert_mode(&self, to: PdaMode) -> Pda {
        let bottom = self.fresh_stack_symbol();
        let new_start = self.fresh_state("init");
        let mut transitions = vec![PdaTransition {
            from: new_start.clone(),
            input: None,
            top: bottom,
            to: self.start.clone(),
            write: vec![self.stack_start, bottom],
        }];
        transitions.extend(self.transitions.iter().cloned());
        let stack_symbols: Vec<char> = self
            .stack_alphabet
            .iter()
            .copied()
            .chain([bottom])
            .collect();
        match to {
            PdaMode::EmptyStack => {
                let drain = self.fresh_state("drain");
                // which states may start draining depends on the source mode
                let triggers: Vec<String> = match self.mode {
                    PdaMode::FinalState => self.accepting.iter().cloned().collect(),
                    // already accepting by empty stack: the old machine has
                    // emptied everything when the marker surfaces
                    PdaMode::EmptyStack => self.states.clone(),
                };
                for q in triggers {
                    match self.mode {
                        PdaMode::FinalState => {
                            for &sym in &stack_symbols {
                                transitions.push(PdaTransition {
                                    from: q.clone(),
                                    input: None,
                                    top: sym,
                                    to: drain.clone(),
                                    write: Vec::new(),
                                });
                            }
                        }
                        PdaMode::EmptyStack => {
                            transitions.push(PdaTransition {
                                from: q.clone(),
                                input: None,
                                top: bottom,
                                to: drain.clone(),
                                write: Vec::new(),
                            });
                        }
                    }
                }
                for &sym in &stack_symbols {
                    transitions.push(PdaTransition {
                        from: drain.clone(),
                        input: None,
                        top: sym,
                        to: drain.clone(),
                        write: Vec::new(),
                    });
                }
                Pda::new(new_start, bottom, PdaMode::EmptyStack, [], transitions).unwrap()
            }
            PdaMode::FinalState => {
                let new_final = self.fresh_state("acc");
                match self.mode {
                    PdaMode::EmptyStack => {
                        // the old machine accepted by emptying its stack,
                        // which now exposes the marker
                        for q in &self.states {
                            transitions.push(PdaTransition {
                                from: q.clone(),
                                input: None,
                                top: bottom,
                                to: new_final.clone(),
                                write: vec![bottom],
                            });
                        }
                    }
                    PdaMode::FinalState => {
                        for q in &self.accepting {
                            for &sym in &stack_symbols {
                                transitions.push(PdaTransition {
                                    from: q.clone(),
                                    input: None,
                                    top: sym,
                                    to: new_final.clone(),
                                    write: vec![sym],
                                });
                            }
                        }
                    }
                }
                Pda::new(
                    new_start,
                    bottom,
                    PdaMode::FinalState,
                    [new_final],
                    transitions,
                )
                .unwrap()
            }
        }
    }

    fn fresh_stack_symbol(&self) -> char {
        "XYZWVUTSRQPONMLKJIHGFEDCBA0123456789"
            .chars()
            .find(|c| !self.stack_alphabet.contains(c))
            .expect("ran out of stack symbols")
    }

    fn fresh_state(&self, hint: &str) -> String {
        let mut name = format!("{hint}#0");
        let mut k = 0;
        while self.states.contains(&name) {
            k += 1;
            name = format!("{hint}#{k}");
        }
        name
    }
}

pub(crate) fn all_words(alphabet: &[char], n: u32) -> Vec<String> {
    let mut words = vec![String::new()];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&c| {
                    let mut x = w.clone();
                    x.push(c);
                    x
                })
            })
            .collect();
    }
    words
}

impl fmt::Display for Pda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "mode: {}",
            match self.mode {
                PdaMode::EmptyStack => "empty-stack",
                PdaMode::FinalState => "final-state",
            }
        )?;
        writeln!(f, "start: {}", self.start)?;
        writeln!(f, "stack-start: {}", self.stack_start)?;
        if !self.accepting.is_empty() {
            let finals: Vec<&str> = self.accepting.iter().map(String::as_str).collect();
            writeln!(f, "final: {}", finals.join(" "))?;
        }
        for t in &self.transitions {
            let input = t.input.map_or("_".to_string(), |c| c.to_string());
            let write = if t.write.is_empty() {
                "_".to_string()
            } else {
                t.write.iter().collect()
            };
            writeln!(f, "{} {} {} -> {} {}", t.from, input, t.top, t.to, write)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn anbn_pda_accepts_balanced_words() {
        let p = corpus::anbn_pda();
        assert!(p.accepts("aabb").unwrap());
        assert!(p.accepts("ab").unwrap());
        assert!(!p.accepts("abb").unwrap());
        assert!(!p.accepts("ba").unwrap());
        assert!(!p.accepts("").unwrap());
    }

    #[test]
    fn empty_word_accepted_when_initial_config_accepts() {
        let p = corpus::neutral_pda();
        assert!(p.accepts("").unwrap());
    }

    #[test]
    fn push_counts_one_per_a() {
        let p = corpus::anbn_pda();
        assert_eq!(p.push_word("aaabbb").unwrap(), PushOutcome::Found(3));
        assert_eq!(p.push_word("ab").unwrap(), PushOutcome::Found(1));
        assert_eq!(p.push_word("ba").unwrap(), PushOutcome::Rejected);
    }

    #[test]
    fn neutral_machine_pushes_nothing() {
        let p = corpus::neutral_pda();
        assert_eq!(p.push_word("aabb").unwrap(), PushOutcome::Found(0));
    }

    #[test]
    fn push_profile_of_anbn() {
        let p = corpus::anbn_pda();
        let profile = p.push_profile(8, &Limits::default()).unwrap();
        for n in 1..=8u32 {
            let expect = if n % 2 == 0 { u64::from(n) / 2 } else { 0 };
            assert_eq!(profile.get(n), expect, "length {n}");
            assert!(profile.get(n) <= u64::from(n));
        }
    }

    #[test]
    fn move_classification_partitions() {
        let p = corpus::anbn_pda_empty_stack();
        for t in p.transitions() {
            let kinds = [
                t.write.len() >= 2,
                t.write.is_empty(),
                t.write.len() == 1,
            ];
            assert_eq!(kinds.iter().filter(|&&k| k).count(), 1);
            match t.kind() {
                MoveKind::Push => assert!(t.write.len() >= 2),
                MoveKind::Pop => assert!(t.write.is_empty()),
                MoveKind::Neutral => assert_eq!(t.write.len(), 1),
            }
        }
    }

    #[test]
    fn convert_mode_round_trip_preserves_language() {
        let p = corpus::anbn_pda();
        let empty = p.convert_mode(PdaMode::EmptyStack);
        let back = empty.convert_mode(PdaMode::FinalState);
        for n in 0..=10u32 {
            for w in all_words(&['a', 'b'], n) {
                let orig = p.accepts(&w).unwrap();
                assert_eq!(empty.accepts(&w).unwrap(), orig, "empty-stack on {w:?}");
                assert_eq!(back.accepts(&w).unwrap(), orig, "round trip on {w:?}");
            }
        }
    }

    #[test]
    fn conversion_shifts_push_count_by_at_most_one() {
        let p = corpus::anbn_pda();
        let converted = p.convert_mode(PdaMode::EmptyStack);
        for w in ["ab", "aabb", "aaabbb", "aaaabbbb"] {
            let before = p.push_word(w).unwrap().value().unwrap();
            let after = converted.push_word(w).unwrap().value().unwrap();
            assert!(after.abs_diff(before) <= 1, "{w}: {before} vs {after}");
        }
    }

    #[test]
    fn conversion_applies_even_in_target_mode() {
        let p = corpus::anbn_pda();
        let again = p.convert_mode(PdaMode::FinalState);
        assert_ne!(p, again);
        assert!(again.accepts("aabb").unwrap());
        assert!(!again.accepts("abb").unwrap());
    }

    #[test]
    fn parse_render_round_trip() {
        let p = corpus::anbn_pda();
        let text = p.to_string();
        assert_eq!(Pda::parse(&text).unwrap(), p);
    }

    #[test]
    fn parser_caps_stack_words() {
        let text = "mode: final-state\nstart: q\nstack-start: Z\nfinal: q\nq a Z -> q ZZZZZZZZZ\n";
        assert!(Pda::parse(text).is_err());
    }
}
