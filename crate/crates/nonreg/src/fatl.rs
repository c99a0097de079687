//! Finite automata with translucent letters. A letter is translucent in a
//! state when the transition map leaves it undefined there; the head may
//! jump over a non-empty, wholly translucent prefix to read the first letter
//! it can see, and the skipped prefix stays in place. Jumping complexity
//! (jc) counts the jump steps of the cheapest accepting computation.
//!
//! In any configuration at most one position is readable (the first letter
//! with a defined transition), so computations branch only on target states.

use crate::error::{Error, Result};
use crate::nfa::Nfa;
use crate::profile::Profile;
use crate::{Boundedness, Limits};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fatl {
    states: Vec<String>,
    alphabet: BTreeSet<char>,
    delta: BTreeMap<(String, char), BTreeSet<String>>,
    start: String,
    accepting: BTreeSet<String>,
}

impl Fatl {
    pub fn new(
        start: impl Into<String>,
        accepting: impl IntoIterator<Item = String>,
        transitions: impl IntoIterator<Item = (String, char, String)>,
    ) -> Result<Fatl> {
        let start = start.into();
        let mut states = BTreeSet::from([start.clone()]);
        let mut alphabet = BTreeSet::new();
        let mut delta: BTreeMap<(String, char), BTreeSet<String>> = BTreeMap::new();
        for (from, letter, to) in transitions {
            if !letter.is_ascii_lowercase() {
                return Err(Error::Invalid(format!("bad input letter `{letter}`")));
            }
            states.insert(from.clone());
            states.insert(to.clone());
            alphabet.insert(letter);
            delta.entry((from, letter)).or_default().insert(to);
        }
        let accepting: BTreeSet<String> = accepting.into_iter().collect();
        states.extend(accepting.iter().cloned());
        Ok(Fatl {
            states: states.into_iter().collect(),
            alphabet,
            start,
            accepting,
            delta,
        })
    }

    /// Parses the `.fatl` format: `start:` and `final:` headers plus one
    /// `q a p` line per transition. A missing line for (q, a) makes `a`
    /// translucent in `q`; the alphabet is the set of letters that occur.
    pub fn parse(text: &str) -> Result<Fatl> {
        let mut start = None;
        let mut accepting: Vec<String> = Vec::new();
        let mut transitions = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("start:") {
                start = Some(rest.trim().to_string());
                continue;
            }
            if let Some(rest) = line.strip_prefix("final:") {
                accepting.extend(rest.split_whitespace().map(str::to_string));
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 || toks[1].chars().count() != 1 {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: "expected `q a p`".into(),
                });
            }
            transitions.push((
                toks[0].to_string(),
                toks[1].chars().next().unwrap(),
                toks[2].to_string(),
            ));
        }
        let start = start.ok_or(Error::MissingStart)?;
        Fatl::new(start, accepting, transitions)
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn delta(&self) -> &BTreeMap<(String, char), BTreeSet<String>> {
        &self.delta
    }

    pub fn is_deterministic(&self) -> bool {
        self.delta.values().all(|set| set.len() == 1)
    }

    pub fn start_state(&self) -> &str {
        &self.start
    }

    pub fn accepting_contains(&self, state: &str) -> bool {
        self.accepting.contains(state)
    }

    fn check_word(&self, word: &str) -> Result<()> {
        for c in word.chars() {
            if !self.alphabet.contains(&c) {
                return Err(Error::AlphabetViolation(c));
            }
        }
        Ok(())
    }

    /// The unique consumable position of `rest` in `state`: the first index
    /// whose letter has a defined transition (everything before it is
    /// translucent). Reading index 0 is a head read, any other a jump.
    fn consumable(&self, state: &str, rest: &str) -> Option<(usize, char)> {
        for (idx, c) in rest.chars().enumerate() {
            if self.delta.contains_key(&(state.to_string(), c)) {
                return Some((idx, c));
            }
        }
        None
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        Ok(self.jc_word(word)?.is_some())
    }

    /// Minimum number of jump steps over the accepting computations of
    /// `word`; `None` when rejected. Each step consumes one letter, so cost
    /// maps over (state, remaining word) swept by remaining length are exact.
    pub fn jc_word(&self, word: &str) -> Result<Option<u64>> {
        self.check_word(word)?;
        let mut costs: HashMap<(String, String), u64> =
            HashMap::from([((self.start.clone(), word.to_string()), 0)]);
        for _ in 0..word.chars().count() {
            let mut next: HashMap<(String, String), u64> = HashMap::new();
            for ((state, rest), cost) in &costs {
                let Some((idx, letter)) = self.consumable(state, rest) else {
                    continue;
                };
                let step = u64::from(idx > 0);
                let mut remaining: String = rest.chars().take(idx).collect();
                remaining.extend(rest.chars().skip(idx + 1));
                for to in &self.delta[&(state.clone(), letter)] {
                    let entry = next
                        .entry((to.clone(), remaining.clone()))
                        .or_insert(u64::MAX);
                    *entry = (*entry).min(cost + step);
                }
            }
            if next.is_empty() {
                return Ok(None);
            }
            costs = next;
        }
        Ok(costs
            .iter()
            .filter(|((state, _), _)| self.accepting.contains(state))
            .map(|(_, &cost)| cost)
            .min())
    }

    /// Per-length maxima of `jc_word` over all words; non-members count 0.
    pub fn jc_profile(&self, n_max: u32, limits: &Limits) -> Result<Profile> {
        let alphabet: Vec<char> = self.alphabet.iter().copied().collect();
        let mut profile = Profile::new(n_max);
        for n in 1..=n_max {
            let count = (alphabet.len() as u64).checked_pow(n).unwrap_or(u64::MAX);
            if count > limits.words_per_length {
                return Err(Error::BudgetExceeded(format!(
                    "{count} words of length {n} exceeds the enumeration budget"
                )));
            }
            let words = crate::pda::all_words(&alphabet, n);
            let best = words
                .par_iter()
                .map(|w| self.jc_word(w).map(|v| v.unwrap_or(0)))
                .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
            profile.set(n, best);
        }
        Ok(profile)
    }

    /// The transition map read as an ordinary NFA: the language of the
    /// jump-free computations, which equals the budget construction at c = 0.
    pub fn zero_jump_language(&self) -> Nfa {
        let mut nfa = Nfa::new(self.alphabet.iter().copied());
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        for _ in &self.states {
            nfa.add_state();
        }
        nfa.set_initial(index[self.start.as_str()]);
        for f in &self.accepting {
            nfa.set_accepting(index[f.as_str()]);
        }
        for ((from, letter), targets) in &self.delta {
            for to in targets {
                nfa.add_transition(index[from.as_str()], Some(*letter), index[to.as_str()]);
            }
        }
        nfa
    }

    /// Builds an NFA recognizing exactly the words of the language whose
    /// jumping complexity is at most `c`.
    ///
    /// The NFA scans left to right while simulating the automaton in its own
    /// consumption order. A jump is guessed as an ε-move that consumes a
    /// future letter and leaves a pending obligation (guessed letter, state
    /// the jump left from, and whether anything has been skipped yet); the
    /// scan discharges translucency obligations as it passes skipped
    /// positions and resolves a pending letter when it reaches it. The
    /// skipped prefix of a jump must be non-empty, which is what the
    /// per-entry flag enforces.
    pub fn build_bounded_nfa(&self, c: u32) -> FatlBudgetNfa {
        type Pending = Vec<(char, usize, bool)>;
        type Key = (usize, Pending, u32);
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let defined = |state: usize, letter: char| {
            self.delta
                .contains_key(&(self.states[state].clone(), letter))
        };
        let targets = |state: usize, letter: char| -> Vec<usize> {
            self.delta
                .get(&(self.states[state].clone(), letter))
                .map(|set| set.iter().map(|s| index[s.as_str()]).collect())
                .unwrap_or_default()
        };

        let mut nfa = Nfa::new(self.alphabet.iter().copied());
        let mut key_index: HashMap<Key, usize> = HashMap::new();
        let mut queue: VecDeque<Key> = VecDeque::new();

        let intern = |key: Key,
                          nfa: &mut Nfa,
                          queue: &mut VecDeque<Key>,
                          key_index: &mut HashMap<Key, usize>|
         -> usize {
            if let Some(&i) = key_index.get(&key) {
                return i;
            }
            let i = nfa.add_state();
            if key.1.is_empty() && self.accepting.contains(&self.states[key.0]) {
                nfa.set_accepting(i);
            }
            key_index.insert(key.clone(), i);
            queue.push_back(key);
            i
        };

        let start_key: Key = (index[self.start.as_str()], Vec::new(), c);
        let s0 = intern(start_key, &mut nfa, &mut queue, &mut key_index);
        nfa.set_initial(s0);

        while let Some(key) = queue.pop_front() {
            let from = key_index[&key];
            let (state, pending, budget) = &key;

            // guess a jump: consume a future letter now (ε in the scan)
            if *budget > 0 {
                for &x in &self.alphabet {
                    for to in targets(*state, x) {
                        let mut next_pending = pending.clone();
                        next_pending.push((x, *state, false));
                        let next: Key = (to, next_pending, budget - 1);
                        let target = intern(next, &mut nfa, &mut queue, &mut key_index);
                        nfa.add_transition(from, None, target);
                    }
                }
            }

            for &a in &self.alphabet {
                // head read: this scanned letter is consumed right now, which
                // is after every pending jump, so it sits in each one's
                // skipped range: it must be translucent for all of them
                if pending.iter().all(|&(_, s, _)| !defined(s, a)) {
                    for to in targets(*state, a) {
                        let next_pending: Pending =
                            pending.iter().map(|&(x, s, _)| (x, s, true)).collect();
                        let next: Key = (to, next_pending, *budget);
                        let target = intern(next, &mut nfa, &mut queue, &mut key_index);
                        nfa.add_transition(from, Some(a), target);
                    }
                }

                // resolve pending entry i: the scan reached the position the
                // i-th guessed jump consumed. Entries guessed earlier are
                // still waiting further right, so for them this position was
                // unconsumed and inside their skipped range.
                for i in 0..pending.len() {
                    let (x, _, skipped) = pending[i];
                    if x != a || !skipped {
                        continue;
                    }
                    if !pending[..i].iter().all(|&(_, s, _)| !defined(s, a)) {
                        continue;
                    }
                    let mut next_pending: Pending = Vec::with_capacity(pending.len() - 1);
                    for (j, &(xx, ss, flag)) in pending.iter().enumerate() {
                        if j == i {
                            continue;
                        }
                        // this position was consumed after the jumps guessed
                        // before i, so their skipped prefixes are non-empty
                        next_pending.push((xx, ss, flag || j < i));
                    }
                    let next: Key = (*state, next_pending, *budget);
                    let target = intern(next, &mut nfa, &mut queue, &mut key_index);
                    nfa.add_transition(from, Some(a), target);
                }
            }
        }
        FatlBudgetNfa {
            nfa,
            state_count: key_index.len(),
        }
    }

    /// Bounded-exhaustive check of `jc(n) <= c`: scan words by length and
    /// lexicographic order, keep only those outside `L(M, <=c)` via the
    /// complement of the budget automaton, and test automaton membership on
    /// the survivors.
    pub fn decide_jc_bounded(&self, c: u32, search_bound: u32, limits: &Limits) -> Result<Boundedness> {
        let complement = self.build_bounded_nfa(c).nfa.complement();
        let alphabet: Vec<char> = self.alphabet.iter().copied().collect();
        let mut nodes: u64 = 0;
        for n in 1..=search_bound {
            for word in crate::pda::all_words(&alphabet, n) {
                nodes += u64::from(n);
                if nodes > limits.search_nodes {
                    return Ok(Boundedness::Unknown);
                }
                if !complement.accepts(&word)? {
                    continue; // measure within budget (or trivially outside L)
                }
                if self.accepts(&word)? {
                    debug_assert!(matches!(self.jc_word(&word), Ok(Some(v)) if v > u64::from(c)));
                    return Ok(Boundedness::Counterexample(word));
                }
            }
        }
        Ok(Boundedness::BoundedUpTo(search_bound))
    }
}

/// The budget automaton for `L(M, <=c)`.
#[derive(Debug, Clone)]
pub struct FatlBudgetNfa {
    pub nfa: Nfa,
    pub state_count: usize,
}

impl fmt::Display for Fatl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        if !self.accepting.is_empty() {
            let finals: Vec<&str> = self.accepting.iter().map(String::as_str).collect();
            writeln!(f, "final: {}", finals.join(" "))?;
        }
        for ((from, letter), targets) in &self.delta {
            for to in targets {
                writeln!(f, "{from} {letter} {to}")?;
            }
        }
        Ok(())
    }
}

/// The four-state example whose language is regular while its jumping
/// complexity grows linearly: `{b^n a b^m c : n+m >= 1} ∪ {b^n c a : n >= 1}`.
pub fn build_paper_example() -> Fatl {
    Fatl::new(
        "q0",
        ["q3".to_string()],
        [
            ("q0".to_string(), 'b', "q1".to_string()),
            ("q1".to_string(), 'b', "q1".to_string()),
            ("q1".to_string(), 'c', "q2".to_string()),
            ("q2".to_string(), 'a', "q3".to_string()),
        ],
    )
    .unwrap()
}

/// Membership predicate for the paper-example language.
pub fn paper_example_member(word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    // b^n a b^m c with n + m >= 1
    let n = chars.iter().take_while(|&&c| c == 'b').count();
    if chars.get(n) == Some(&'a') {
        let m = chars[n + 1..].iter().take_while(|&&c| c == 'b').count();
        if n + 1 + m + 1 == chars.len() && chars.last() == Some(&'c') && n + m >= 1 {
            return true;
        }
    }
    // b^n c a with n >= 1
    n >= 1 && chars.len() == n + 2 && chars[n] == 'c' && chars[n + 1] == 'a'
}

/// A deterministic two-state machine accepting the words with equally many
/// a's and b's: each state can read one letter and jumps across the other.
pub fn build_equal_ab() -> Fatl {
    Fatl::new(
        "p",
        ["p".to_string()],
        [
            ("p".to_string(), 'a', "q".to_string()),
            ("q".to_string(), 'b', "p".to_string()),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn paper_example_reads_bca_without_jumping() {
        let m = build_paper_example();
        assert!(m.accepts("bca").unwrap());
        assert_eq!(m.jc_word("bca").unwrap(), Some(0));
        assert!(!m.accepts("ca").unwrap());
        assert!(!m.accepts("ba").unwrap());
    }

    #[test]
    fn paper_example_jumps_over_leading_a() {
        let m = build_paper_example();
        // consuming b and c requires jumping across the pending a
        assert_eq!(m.jc_word("abc").unwrap(), Some(2));
        assert!(m.accepts("bac").unwrap());
        assert_eq!(m.jc_word("bac").unwrap(), Some(1));
    }

    #[test]
    fn jc_of_marked_b_runs_is_linear() {
        let m = build_paper_example();
        for n in 1..=6u64 {
            let word = format!("a{}c", "b".repeat(n as usize));
            assert_eq!(m.jc_word(&word).unwrap(), Some(n + 1), "word {word}");
        }
    }

    #[test]
    fn equal_count_machine() {
        let m = build_equal_ab();
        assert!(m.is_deterministic());
        assert!(m.accepts("abba").unwrap());
        assert!(m.accepts("").unwrap());
        assert!(!m.accepts("aab").unwrap());
        assert_eq!(m.jc_word("abba").unwrap(), Some(1));
        // fetching each a across the pending b's costs one jump per pair
        for n in 1..=5u64 {
            let word = format!("{}{}", "b".repeat(n as usize), "a".repeat(n as usize));
            assert_eq!(m.jc_word(&word).unwrap(), Some(n), "word {word}");
        }
    }

    #[test]
    fn empty_word_accepted_iff_start_final() {
        let m = build_equal_ab();
        assert!(m.accepts("").unwrap());
        let p = build_paper_example();
        assert!(!p.accepts("").unwrap());
    }

    #[test]
    fn total_delta_machine_never_jumps() {
        let m = corpus::total_delta_fatl();
        let p = m.jc_profile(6, &Limits::default()).unwrap();
        for n in 1..=6 {
            assert_eq!(p.get(n), 0);
        }
    }

    #[test]
    fn equal_ab_profile_meets_half_length() {
        let m = build_equal_ab();
        let p = m.jc_profile(8, &Limits::default()).unwrap();
        for n in [2u32, 4, 6, 8] {
            assert!(p.get(n) >= u64::from(n) / 2, "length {n}: {}", p.get(n));
            assert!(p.get(n) <= u64::from(n));
        }
    }

    #[test]
    fn zero_jump_language_matches_direct_runs() {
        let m = build_paper_example();
        let z = m.zero_jump_language();
        assert!(z.accepts("bca").unwrap());
        assert!(!z.accepts("abc").unwrap());
        let bounded = m.build_bounded_nfa(0);
        assert!(z.equivalent_up_to(&bounded.nfa, 12));
    }

    #[test]
    fn bounded_nfa_matches_oracle_small() {
        let m = build_paper_example();
        for c in 0..=2u32 {
            let bounded = m.build_bounded_nfa(c);
            for n in 0..=8u32 {
                for w in crate::pda::all_words(&['a', 'b', 'c'], n) {
                    let jc = m.jc_word(&w).unwrap();
                    let expect = matches!(jc, Some(v) if v <= u64::from(c));
                    assert_eq!(bounded.nfa.accepts(&w).unwrap(), expect, "c={c} w={w:?}");
                }
            }
        }
    }

    #[test]
    fn decide_finds_counterexamples() {
        let m = build_paper_example();
        assert_eq!(
            m.decide_jc_bounded(3, 12, &Limits::default()).unwrap(),
            Boundedness::Counterexample("abbbc".to_string())
        );
        let eq = build_equal_ab();
        let Boundedness::Counterexample(w) = eq.decide_jc_bounded(2, 10, &Limits::default()).unwrap()
        else {
            panic!("expected a counterexample")
        };
        assert!(eq.jc_word(&w).unwrap().unwrap() > 2);
        let mut first = None;
        'outer: for n in 1..=10u32 {
            for cand in crate::pda::all_words(&['a', 'b'], n) {
                if matches!(eq.jc_word(&cand).unwrap(), Some(v) if v > 2) {
                    first = Some(cand);
                    break 'outer;
                }
            }
        }
        assert_eq!(Some(w), first, "counterexample must be length-lex minimal");
        let total = corpus::total_delta_fatl();
        assert_eq!(
            total.decide_jc_bounded(0, 8, &Limits::default()).unwrap(),
            Boundedness::BoundedUpTo(8)
        );
    }

    #[test]
    fn deterministic_machines_have_unique_computations() {
        let m = build_equal_ab();
        for w in ["ab", "abba", "baba"] {
            let brute = crate::oracle::brute_jc(&m, w, &Limits::default()).unwrap();
            assert_eq!(brute.accepting_computations, 1, "word {w}");
        }
    }

    #[test]
    fn parse_render_round_trip() {
        let m = build_paper_example();
        assert_eq!(Fatl::parse(&m.to_string()).unwrap(), m);
    }
}
