//! Degree of non-regularity: the minimum number of non-regular rule
//! applications over all derivations of a word, the per-length profile, the
//! budget-bounded regular construction for `L(G, <=c)`, and the exact
//! boundedness decision built on top of it.
//!
//! All algorithms that need a normal form run on quasi Chomsky normal form;
//! `dnreg_word` itself searches leftmost derivations of any proper grammar
//! directly, so callers can measure either the original grammar or its
//! transformed version.

use crate::error::{Error, Result};
use crate::grammar::{classify_rule, Grammar, RuleClass, Sym};
use crate::nfa::Nfa;
use crate::oracle;
use crate::profile::Profile;
use crate::Limits;
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

/// A leftmost derivation: rule indices paired with the 0-based position of
/// the rewritten nonterminal in the sentential form at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<(usize, usize)>,
    pub word: String,
}

impl Derivation {
    /// Replays the steps from the start symbol; returns the derived word if
    /// every step rewrites the leftmost nonterminal as recorded.
    pub fn replay(&self, g: &Grammar) -> Option<String> {
        let mut form: Vec<Sym> = vec![Sym::N(g.start().to_string())];
        for &(rule_idx, position) in &self.steps {
            let rule = g.rules().get(rule_idx)?;
            let leftmost = form.iter().position(|s| !s.is_terminal())?;
            if leftmost != position {
                return None;
            }
            match &form[leftmost] {
                Sym::N(n) if *n == rule.lhs => {}
                _ => return None,
            }
            form.splice(leftmost..=leftmost, rule.rhs.iter().cloned());
        }
        let mut word = String::new();
        for sym in &form {
            match sym {
                Sym::T(c) => word.push(*c),
                Sym::N(_) => return None,
            }
        }
        Some(word)
    }

    /// Number of non-regular rule applications in this derivation.
    pub fn non_regular_steps(&self, g: &Grammar) -> u64 {
        self.steps
            .iter()
            .filter(|(idx, _)| classify_rule(&g.rules()[*idx]) == RuleClass::NonRegular)
            .count() as u64
    }
}

fn check_word(g: &Grammar, word: &str) -> Result<Vec<char>> {
    let chars: Vec<char> = word.chars().collect();
    for &c in &chars {
        if !g.terminals().contains(&c) {
            return Err(Error::AlphabetViolation(c));
        }
    }
    Ok(chars)
}

/// Search state: `pos` letters of the target already matched, `suffix` the
/// rest of the sentential form (empty or starting with a nonterminal).
type SearchState = (usize, Vec<Sym>);

/// Minimum number of non-regular rule applications over all derivations of
/// `word`, or `None` when the word is not in the language. Expects a proper
/// grammar (`Grammar::prepared` gives one); properness makes derivations
/// non-contracting, which bounds the search space by the word length.
pub fn dnreg_word(g: &Grammar, word: &str) -> Result<Option<u64>> {
    Ok(dnreg_search(g, word, false)?.map(|(cost, _)| cost))
}

/// Like [`dnreg_word`] but also returns a witnessing least-non-regular
/// derivation.
pub fn dnreg_word_with_derivation(g: &Grammar, word: &str) -> Result<Option<(u64, Derivation)>> {
    Ok(dnreg_search(g, word, true)?.map(|(cost, d)| (cost, d.expect("requested derivation"))))
}

fn dnreg_search(
    g: &Grammar,
    word: &str,
    want_derivation: bool,
) -> Result<Option<(u64, Option<Derivation>)>> {
    if !g.is_proper() {
        return Err(Error::NotProper);
    }
    let chars = check_word(g, word)?;
    let n = chars.len();

    // uniform-cost search over leftmost sentential forms, cost = non-regular
    // applications; forms never shrink in a proper grammar, so anything
    // longer than the target is dead
    let start: SearchState = (0, vec![Sym::N(g.start().to_string())]);
    let mut heap: BinaryHeap<(Reverse<u64>, SearchState)> = BinaryHeap::new();
    let mut settled: HashSet<SearchState> = HashSet::new();
    let mut parents: HashMap<SearchState, (SearchState, usize)> = HashMap::new();
    heap.push((Reverse(0), start.clone()));

    while let Some((Reverse(cost), state)) = heap.pop() {
        if !settled.insert(state.clone()) {
            continue;
        }
        let (pos, suffix) = &state;
        if *pos == n && suffix.is_empty() {
            let derivation = want_derivation.then(|| {
                let mut steps = Vec::new();
                let mut cur = state.clone();
                while let Some((prev, rule_idx)) = parents.get(&cur) {
                    steps.push((*rule_idx, prev.0));
                    cur = prev.clone();
                }
                steps.reverse();
                Derivation {
                    steps,
                    word: word.to_string(),
                }
            });
            return Ok(Some((cost, derivation)));
        }
        let Some(Sym::N(head)) = suffix.first() else {
            continue;
        };
        for (rule_idx, rule) in g.rules_for(head) {
            let mut new_pos = *pos;
            let mut new_suffix: Vec<Sym> = Vec::with_capacity(rule.rhs.len() + suffix.len());
            new_suffix.extend(rule.rhs.iter().cloned());
            new_suffix.extend(suffix[1..].iter().cloned());
            // eagerly match leading terminals against the target
            let mut dead = false;
            let mut consumed = 0;
            for sym in &new_suffix {
                match sym {
                    Sym::T(c) => {
                        if new_pos < n && chars[new_pos] == *c {
                            new_pos += 1;
                            consumed += 1;
                        } else {
                            dead = true;
                            break;
                        }
                    }
                    Sym::N(_) => break,
                }
            }
            if dead {
                continue;
            }
            new_suffix.drain(..consumed);
            if new_pos + new_suffix.len() > n {
                continue;
            }
            let next: SearchState = (new_pos, new_suffix);
            if settled.contains(&next) {
                continue;
            }
            let step_cost = u64::from(classify_rule(rule) == RuleClass::NonRegular);
            heap.push((Reverse(cost + step_cost), next.clone()));
            if want_derivation {
                parents.entry(next).or_insert((state.clone(), rule_idx));
            }
        }
    }
    Ok(None)
}

/// Per-length maxima of `dnreg_word` over all words of each length;
/// non-members contribute 0.
pub fn dnreg_profile(g: &Grammar, n_max: u32, limits: &Limits) -> Result<Profile> {
    if !g.is_proper() {
        return Err(Error::NotProper);
    }
    let alphabet: Vec<char> = g.terminals().iter().copied().collect();
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
            .map(|w| dnreg_word(g, w).map(|v| v.unwrap_or(0)))
            .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
        profile.set(n, best);
    }
    Ok(profile)
}

/// The budget automaton for `L(G, <=c)`, together with its state labels.
///
/// States are pairs of a pending-nonterminal stack (leftmost obligations of
/// a simulated leftmost derivation) and a remaining budget. Regular steps
/// consume a letter; non-regular expansions are ε-moves that deepen the
/// stack and cost budget, so the stack never exceeds `c + 1` symbols.
#[derive(Debug, Clone)]
pub struct DnregBudgetNfa {
    pub nfa: Nfa,
    pub labels: Vec<(Vec<String>, u32)>,
}

/// Builds an NFA recognizing exactly the words of `g` with degree of
/// non-regularity at most `c`. Requires quasi Chomsky normal form.
pub fn build_bounded_nfa(g: &Grammar, c: u32) -> Result<DnregBudgetNfa> {
    if !g.is_quasi_chomsky() {
        return Err(Error::NotQuasiChomsky);
    }
    let mut nfa = Nfa::new(g.terminals().iter().copied());
    let mut labels: Vec<(Vec<String>, u32)> = Vec::new();
    let mut index: HashMap<(Vec<String>, u32), usize> = HashMap::new();
    let mut queue: VecDeque<(Vec<String>, u32)> = VecDeque::new();

    let intern = |label: (Vec<String>, u32),
                      nfa: &mut Nfa,
                      labels: &mut Vec<(Vec<String>, u32)>,
                      queue: &mut VecDeque<(Vec<String>, u32)>,
                      index: &mut HashMap<(Vec<String>, u32), usize>|
     -> usize {
        if let Some(&i) = index.get(&label) {
            return i;
        }
        let i = nfa.add_state();
        if label.0.is_empty() {
            nfa.set_accepting(i);
        }
        index.insert(label.clone(), i);
        labels.push(label.clone());
        queue.push_back(label);
        i
    };

    let start_label = (vec![g.start().to_string()], c);
    let start = intern(start_label, &mut nfa, &mut labels, &mut queue, &mut index);
    nfa.set_initial(start);

    while let Some(label) = queue.pop_front() {
        let from = index[&label];
        let (stack, budget) = &label;
        let Some(head) = stack.first() else { continue };
        debug_assert!(stack.len() as u32 <= c + 1);
        for (_, rule) in g.rules_for(head) {
            match rule.rhs.as_slice() {
                [Sym::T(a)] => {
                    let next = (stack[1..].to_vec(), *budget);
                    let to = intern(next, &mut nfa, &mut labels, &mut queue, &mut index);
                    nfa.add_transition(from, Some(*a), to);
                }
                [Sym::T(a), Sym::N(b)] => {
                    let mut next_stack = vec![b.clone()];
                    next_stack.extend_from_slice(&stack[1..]);
                    let next = (next_stack, *budget);
                    let to = intern(next, &mut nfa, &mut labels, &mut queue, &mut index);
                    nfa.add_transition(from, Some(*a), to);
                }
                [Sym::N(b), Sym::N(d)] => {
                    if *budget > 0 {
                        let mut next_stack = vec![b.clone(), d.clone()];
                        next_stack.extend_from_slice(&stack[1..]);
                        let next = (next_stack, budget - 1);
                        let to = intern(next, &mut nfa, &mut labels, &mut queue, &mut index);
                        nfa.add_transition(from, None, to);
                    }
                }
                _ => unreachable!("quasi Chomsky normal form"),
            }
        }
    }
    Ok(DnregBudgetNfa { nfa, labels })
}

/// Result of the on-the-fly bounded recognizer, with the search-size witness
/// used by the complexity assertions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecognizerRun {
    pub accepted: bool,
    /// Distinct (position, stack, budget) triples visited.
    pub visited: u64,
}

/// Decides `w ∈ L(g, <=d)` by simulating the budget automaton on the fly,
/// without materializing it. Requires quasi Chomsky normal form.
pub fn bounded_recognizer(g: &Grammar, word: &str, d: u32) -> Result<RecognizerRun> {
    if !g.is_quasi_chomsky() {
        return Err(Error::NotQuasiChomsky);
    }
    let chars = check_word(g, word)?;
    let n = chars.len();
    type Cfg = (Vec<String>, u32);

    let expand_closure = |set: &mut HashSet<Cfg>, visited: &mut u64| {
        let mut work: Vec<Cfg> = set.iter().cloned().collect();
        while let Some((stack, budget)) = work.pop() {
            let Some(head) = stack.first() else { continue };
            if budget == 0 {
                continue;
            }
            for (_, rule) in g.rules_for(head) {
                if let [Sym::N(b), Sym::N(dd)] = rule.rhs.as_slice() {
                    let mut next_stack = vec![b.clone(), dd.clone()];
                    next_stack.extend_from_slice(&stack[1..]);
                    let next = (next_stack, budget - 1);
                    if set.insert(next.clone()) {
                        *visited += 1;
                        work.push(next);
                    }
                }
            }
        }
    };

    let mut visited: u64 = 0;
    let mut current: HashSet<Cfg> = HashSet::new();
    current.insert((vec![g.start().to_string()], d));
    visited += 1;
    expand_closure(&mut current, &mut visited);

    for &letter in &chars {
        let mut next: HashSet<Cfg> = HashSet::new();
        for (stack, budget) in &current {
            let Some(head) = stack.first() else { continue };
            for (_, rule) in g.rules_for(head) {
                match rule.rhs.as_slice() {
                    [Sym::T(a)] if *a == letter => {
                        if next.insert((stack[1..].to_vec(), *budget)) {
                            visited += 1;
                        }
                    }
                    [Sym::T(a), Sym::N(b)] if *a == letter => {
                        let mut next_stack = vec![b.clone()];
                        next_stack.extend_from_slice(&stack[1..]);
                        if next.insert((next_stack, *budget)) {
                            visited += 1;
                        }
                    }
                    _ => {}
                }
            }
        }
        expand_closure(&mut next, &mut visited);
        current = next;
        if current.is_empty() {
            break;
        }
    }

    let accepted = current.iter().any(|(stack, _)| stack.is_empty());
    let p = g.nonterminals().len() as u64;
    let bound = (n as u64 + 1) * (u64::from(d) + 1) * p.pow(d + 1);
    debug_assert!(
        visited <= bound,
        "visited {visited} exceeds (n+1)(d+1)p^(d+1) = {bound}"
    );
    Ok(RecognizerRun { accepted, visited })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DnregDecision {
    Bounded,
    /// A shortest (then lexicographically smallest) word whose degree
    /// exceeds the budget.
    Unbounded(String),
}

/// Decides whether `dnreg_G(n) <= c` holds for all n, exactly: intersect the
/// grammar with the complement of the budget automaton and test emptiness.
/// The measure is taken on the internal quasi-Chomsky form of `g`.
pub fn decide_dnreg_bounded(g: &Grammar, c: u32) -> Result<DnregDecision> {
    let gq = g.prepared()?.to_quasi_normal_form()?.to_quasi_chomsky()?;
    let budget = build_bounded_nfa(&gq, c)?;
    let outside = budget.nfa.complement();
    let intersection = oracle::intersect_grammar_nfa(&gq, &outside)?;
    match oracle::cfg_emptiness(&intersection) {
        oracle::CfgEmptiness::Empty => Ok(DnregDecision::Bounded),
        oracle::CfgEmptiness::NonEmpty(witness) => Ok(DnregDecision::Unbounded(witness)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn dnreg_of_balanced_words() {
        let g = corpus::anbn_grammar();
        assert_eq!(dnreg_word(&g, "aabb").unwrap(), Some(1));
        assert_eq!(dnreg_word(&g, "ab").unwrap(), Some(0));
        assert_eq!(dnreg_word(&g, "aab").unwrap(), None);
    }

    #[test]
    fn right_linear_words_cost_nothing() {
        let g = corpus::right_linear_grammar();
        assert_eq!(dnreg_word(&g, "a").unwrap(), Some(0));
        assert_eq!(dnreg_word(&g, "aba").unwrap(), Some(0));
    }

    #[test]
    fn alphabet_violation_reported() {
        let g = corpus::anbn_grammar();
        assert_eq!(dnreg_word(&g, "abc"), Err(Error::AlphabetViolation('c')));
    }

    #[test]
    fn witness_derivation_replays() {
        let g = corpus::anbn_grammar();
        let (cost, derivation) = dnreg_word_with_derivation(&g, "aaabbb").unwrap().unwrap();
        assert_eq!(cost, 2);
        assert_eq!(derivation.replay(&g), Some("aaabbb".to_string()));
        assert_eq!(derivation.non_regular_steps(&g), 2);
    }

    #[test]
    fn profile_of_anbn() {
        let g = corpus::anbn_grammar();
        let p = dnreg_profile(&g, 8, &Limits::default()).unwrap();
        assert_eq!(p.get(2), 0);
        assert_eq!(p.get(4), 1);
        assert_eq!(p.get(6), 2);
        assert_eq!(p.get(8), 3);
        for n in [1u32, 3, 5, 7] {
            assert_eq!(p.get(n), 0);
        }
    }

    #[test]
    fn profile_shrinks_under_union_with_regular_cover() {
        let anbn = corpus::anbn_grammar();
        let covered = corpus::covered_anbn_grammar();
        let pa = dnreg_profile(&anbn, 8, &Limits::default()).unwrap();
        let pc = dnreg_profile(&covered, 8, &Limits::default()).unwrap();
        for n in 1..=8 {
            assert!(pc.get(n) <= pa.get(n));
        }
    }

    fn anbn_qcnf() -> Grammar {
        corpus::anbn_grammar()
            .prepared()
            .unwrap()
            .to_quasi_normal_form()
            .unwrap()
            .to_quasi_chomsky()
            .unwrap()
    }

    #[test]
    fn bounded_nfa_cuts_at_budget() {
        let gq = anbn_qcnf();
        let budget = build_bounded_nfa(&gq, 2).unwrap();
        let words = budget.nfa.words_up_to(12);
        let expect: std::collections::BTreeSet<String> =
            ["ab", "aabb", "aaabbb"].iter().map(|s| s.to_string()).collect();
        assert_eq!(words, expect);
    }

    #[test]
    fn bounded_nfa_state_count_within_bound() {
        let gq = anbn_qcnf();
        for c in 0..=3u32 {
            let budget = build_bounded_nfa(&gq, c).unwrap();
            let p = gq.nonterminals().len() as u64;
            let bound = (p.pow(c + 2) - 1) / (p - 1) * (u64::from(c) + 1);
            assert!((budget.nfa.n_states() as u64) <= bound);
            for (stack, b) in &budget.labels {
                assert!(stack.len() as u32 <= c + 1);
                assert!(*b <= c);
            }
        }
    }

    #[test]
    fn bounded_nfa_budget_zero_keeps_right_linear_language() {
        let g = corpus::right_linear_grammar()
            .prepared()
            .unwrap()
            .to_quasi_normal_form()
            .unwrap()
            .to_quasi_chomsky()
            .unwrap();
        let budget = build_bounded_nfa(&g, 0).unwrap();
        for n in 0..=10u32 {
            for w in crate::pda::all_words(&['a', 'b'], n) {
                let in_l = dnreg_word(&g, &w).unwrap().is_some();
                assert_eq!(budget.nfa.accepts(&w).unwrap(), in_l, "{w:?}");
            }
        }
    }

    #[test]
    fn recognizer_matches_nfa() {
        let gq = anbn_qcnf();
        assert!(bounded_recognizer(&gq, "aaabbb", 2).unwrap().accepted);
        assert!(!bounded_recognizer(&gq, "aaabbb", 1).unwrap().accepted);
        assert!(!bounded_recognizer(&gq, "aab", 4).unwrap().accepted);
    }

    #[test]
    fn decide_unbounded_with_shortest_witness() {
        let g = corpus::anbn_grammar();
        assert_eq!(
            decide_dnreg_bounded(&g, 3).unwrap(),
            DnregDecision::Unbounded("aaaaabbbbb".to_string())
        );
    }

    #[test]
    fn decide_bounded_cases() {
        assert_eq!(
            decide_dnreg_bounded(&corpus::right_linear_grammar(), 0).unwrap(),
            DnregDecision::Bounded
        );
        assert_eq!(
            decide_dnreg_bounded(&corpus::covered_anbn_grammar(), 0).unwrap(),
            DnregDecision::Bounded
        );
    }

    #[test]
    fn dnreg_is_at_most_word_length() {
        let g = anbn_qcnf();
        for n in 1..=8u32 {
            for w in crate::pda::all_words(&['a', 'b'], n) {
                if let Some(v) = dnreg_word(&g, &w).unwrap() {
                    assert!(v <= u64::from(n));
                }
            }
        }
    }
}
