//! Ground-truth engines: exhaustive language enumeration, reference measure
//! computation by enumerating every accepting derivation or computation
//! (no pruning beyond termination bounds), the grammar/automaton
//! intersection and emptiness pipeline, and growth-curve fitting.
//!
//! Everything here is deliberately slow and simple; the optimized searches
//! in the device modules are tested against these.

use crate::dnreg;
use crate::efa::Efa;
use crate::error::{Error, Result};
use crate::fatl::Fatl;
use crate::grammar::{classify_rule, Grammar, Rule, RuleClass, Sym};
use crate::groups::identity;
use crate::nfa::Nfa;
use crate::pda::{all_words, MoveKind, Pda, PdaMode};
use crate::profile::Profile;
use crate::Limits;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Everything that can answer "is this word in your language".
pub trait Acceptor: Sync {
    fn alphabet_chars(&self) -> Vec<char>;
    fn accepts_word(&self, word: &str) -> Result<bool>;
}

impl Acceptor for Pda {
    fn alphabet_chars(&self) -> Vec<char> {
        self.input_alphabet().iter().copied().collect()
    }
    fn accepts_word(&self, word: &str) -> Result<bool> {
        self.accepts(word)
    }
}

impl Acceptor for Efa {
    fn alphabet_chars(&self) -> Vec<char> {
        self.alphabet().iter().copied().collect()
    }
    fn accepts_word(&self, word: &str) -> Result<bool> {
        self.accepts(word)
    }
}

impl Acceptor for Fatl {
    fn alphabet_chars(&self) -> Vec<char> {
        self.alphabet().iter().copied().collect()
    }
    fn accepts_word(&self, word: &str) -> Result<bool> {
        self.accepts(word)
    }
}

impl Acceptor for Nfa {
    fn alphabet_chars(&self) -> Vec<char> {
        self.alphabet().iter().copied().collect()
    }
    fn accepts_word(&self, word: &str) -> Result<bool> {
        self.accepts(word)
    }
}

/// Grammar membership with the ε case handled up front: the grammar is
/// reduced and made proper once, and the empty word is answered from the
/// nullability of the start symbol.
pub struct GrammarMembership {
    terminals: Vec<char>,
    nullable_start: bool,
    proper: Option<Grammar>,
}

impl GrammarMembership {
    pub fn new(g: &Grammar) -> Result<GrammarMembership> {
        let nullable_start = g.nullable_set().contains(g.start());
        let proper = match g.reduce() {
            Err(Error::EmptyLanguage) => None,
            Err(e) => return Err(e),
            Ok(reduced) => match reduced.make_proper() {
                Ok(p) => Some(p.reduce()?),
                Err(Error::EpsilonInLanguage) => {
                    // measure the ε-free remainder of the language
                    match strip_epsilon(&reduced)? {
                        Some(p) => Some(p),
                        None => None,
                    }
                }
                Err(e) => return Err(e),
            },
        };
        Ok(GrammarMembership {
            terminals: g.terminals().iter().copied().collect(),
            nullable_start,
            proper,
        })
    }

    pub fn proper_grammar(&self) -> Option<&Grammar> {
        self.proper.as_ref()
    }
}

/// Proper grammar for `L(g) \ {ε}`, or `None` when that set is empty.
fn strip_epsilon(g: &Grammar) -> Result<Option<Grammar>> {
    let nullable = g.nullable_set();
    let mut rules: Vec<Rule> = Vec::new();
    let mut seen = BTreeSet::new();
    for rule in g.rules() {
        let optional: Vec<usize> = rule
            .rhs
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Sym::N(n) if nullable.contains(n) => Some(i),
                _ => None,
            })
            .collect();
        for mask in 0u32..(1 << optional.len()) {
            let drop: BTreeSet<usize> = (0..optional.len())
                .filter(|bit| mask & (1 << bit) != 0)
                .map(|bit| optional[bit])
                .collect();
            let rhs: Vec<Sym> = rule
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, s)| s.clone())
                .collect();
            if !rhs.is_empty() && seen.insert((rule.lhs.clone(), rhs.clone())) {
                rules.push(Rule::new(rule.lhs.clone(), rhs));
            }
        }
    }
    let lambda_free = match Grammar::new(g.start().to_string(), rules) {
        Ok(g) => g,
        Err(Error::UndeclaredStart(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    match lambda_free.reduce() {
        Ok(reduced) => Ok(Some(reduced.make_proper()?.reduce()?)),
        Err(Error::EmptyLanguage) => Ok(None),
        Err(e) => Err(e),
    }
}

impl Acceptor for GrammarMembership {
    fn alphabet_chars(&self) -> Vec<char> {
        self.terminals.clone()
    }
    fn accepts_word(&self, word: &str) -> Result<bool> {
        if word.is_empty() {
            return Ok(self.nullable_start);
        }
        match &self.proper {
            None => Ok(false),
            Some(g) => Ok(dnreg::dnreg_word(g, word)?.is_some()),
        }
    }
}

/// A language given directly by a membership predicate.
pub struct PredicateLanguage {
    pub alphabet: Vec<char>,
    pub member: fn(&str) -> bool,
}

impl Acceptor for PredicateLanguage {
    fn alphabet_chars(&self) -> Vec<char> {
        self.alphabet.clone()
    }
    fn accepts_word(&self, word: &str) -> Result<bool> {
        Ok((self.member)(word))
    }
}

/// An exact finite slice of a language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSlice {
    pub max_len: u32,
    pub words: BTreeSet<String>,
}

impl LanguageSlice {
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// Words sorted by length then lexicographically, one per line, the
    /// empty word rendered as `_`.
    pub fn serialize(&self) -> String {
        let mut sorted: Vec<&String> = self.words.iter().collect();
        sorted.sort_by_key(|w| (w.chars().count(), (*w).clone()));
        let mut out = String::new();
        for w in sorted {
            if w.is_empty() {
                out.push('_');
            } else {
                out.push_str(w);
            }
            out.push('\n');
        }
        out
    }
}

/// Exhaustive membership over every word up to `max_len`.
pub fn enumerate<A: Acceptor + ?Sized>(
    device: &A,
    max_len: u32,
    limits: &Limits,
) -> Result<LanguageSlice> {
    let alphabet = device.alphabet_chars();
    let mut words = BTreeSet::new();
    for n in 0..=max_len {
        let count = (alphabet.len() as u64).checked_pow(n).unwrap_or(u64::MAX);
        if count > limits.words_per_length {
            return Err(Error::BudgetExceeded(format!(
                "{count} words of length {n} exceeds the enumeration budget"
            )));
        }
        let layer = all_words(&alphabet, n);
        let accepted: Vec<String> = layer
            .into_par_iter()
            .filter_map(|w| match device.accepts_word(&w) {
                Ok(true) => Some(Ok(w)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<Vec<_>>>()?;
        words.extend(accepted);
    }
    Ok(LanguageSlice { max_len, words })
}

/// Reference profile: enumerate every word of each length and take the
/// brute-force measure maximum.
pub fn brute_profile<F>(alphabet: &[char], n_max: u32, limits: &Limits, measure: F) -> Result<Profile>
where
    F: Fn(&str) -> Result<Option<u64>> + Sync,
{
    let mut profile = Profile::new(n_max);
    for n in 1..=n_max {
        let count = (alphabet.len() as u64).checked_pow(n).unwrap_or(u64::MAX);
        if count > limits.words_per_length {
            return Err(Error::BudgetExceeded(format!(
                "{count} words of length {n} exceeds the enumeration budget"
            )));
        }
        let words = all_words(alphabet, n);
        let best = words
            .par_iter()
            .map(|w| measure(w).map(|v| v.unwrap_or(0)))
            .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
        profile.set(n, best);
    }
    Ok(profile)
}

/// Result of a reference measure run: the minimum over all accepting
/// derivations/computations, and how many of them there were.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteOutcome {
    pub min: Option<u64>,
    pub accepting_computations: u64,
}

/// Reference degree of non-regularity: enumerate every leftmost derivation
/// whose sentential form stays within the target length (proper grammars are
/// non-contracting) and at most `2|w| - 1` steps, and take the minimum count
/// of non-regular applications among those deriving exactly `w`.
pub fn brute_dnreg(g: &Grammar, word: &str, limits: &Limits) -> Result<BruteOutcome> {
    if !g.is_proper() {
        return Err(Error::NotProper);
    }
    let target: Vec<char> = word.chars().collect();
    let max_steps = 2 * target.len().max(1) - 1;
    let mut best: Option<u64> = None;
    let mut count: u64 = 0;
    let mut nodes: u64 = 0;

    struct Dfs<'a> {
        g: &'a Grammar,
        target: &'a [char],
        max_steps: usize,
        limits: &'a Limits,
    }
    impl Dfs<'_> {
        fn run(
            &self,
            form: &[Sym],
            steps: usize,
            cost: u64,
            best: &mut Option<u64>,
            count: &mut u64,
            nodes: &mut u64,
        ) -> Result<()> {
            *nodes += 1;
            if *nodes > self.limits.search_nodes {
                return Err(Error::BudgetExceeded("brute dnreg nodes".into()));
            }
            let leftmost = form.iter().position(|s| !s.is_terminal());
            match leftmost {
                None => {
                    let derived: Vec<char> = form
                        .iter()
                        .map(|s| match s {
                            Sym::T(c) => *c,
                            Sym::N(_) => unreachable!(),
                        })
                        .collect();
                    if derived == self.target {
                        *count += 1;
                        *best = Some(best.map_or(cost, |b| b.min(cost)));
                    }
                    Ok(())
                }
                Some(idx) => {
                    if steps == self.max_steps {
                        return Ok(());
                    }
                    let Sym::N(head) = &form[idx] else { unreachable!() };
                    for (_, rule) in self.g.rules_for(head) {
                        let mut next: Vec<Sym> = Vec::with_capacity(form.len() + rule.rhs.len());
                        next.extend_from_slice(&form[..idx]);
                        next.extend(rule.rhs.iter().cloned());
                        next.extend_from_slice(&form[idx + 1..]);
                        if next.len() > self.target.len() {
                            continue; // termination bound: forms never shrink
                        }
                        let step = u64::from(classify_rule(rule) == RuleClass::NonRegular);
                        self.run(&next, steps + 1, cost + step, best, count, nodes)?;
                    }
                    Ok(())
                }
            }
        }
    }

    let dfs = Dfs { g, target: &target, max_steps, limits };
    dfs.run(
        &[Sym::N(g.start().to_string())],
        0,
        0,
        &mut best,
        &mut count,
        &mut nodes,
    )?;
    Ok(BruteOutcome { min: best, accepting_computations: count })
}

/// Reference push complexity: enumerate every computation within generous
/// step, stack, and push termination bounds.
pub fn brute_push(p: &Pda, word: &str, limits: &Limits) -> Result<BruteOutcome> {
    let target: Vec<char> = word.chars().collect();
    for &c in &target {
        if !p.input_alphabet().contains(&c) {
            return Err(Error::AlphabetViolation(c));
        }
    }
    let n = target.len();
    let max_steps = 4 * (n + 2) + 8;
    let max_stack = n + 4;
    let max_pushes = (n + 8) as u64;
    let mut best: Option<u64> = None;
    let mut count: u64 = 0;
    let mut nodes: u64 = 0;

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        p: &Pda,
        target: &[char],
        state: &str,
        pos: usize,
        stack: &[char],
        steps: usize,
        pushes: u64,
        bounds: (usize, usize, u64),
        best: &mut Option<u64>,
        count: &mut u64,
        nodes: &mut u64,
        limits: &Limits,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > limits.search_nodes {
            return Err(Error::BudgetExceeded("brute push nodes".into()));
        }
        let accepted = pos == target.len()
            && match p.mode() {
                PdaMode::EmptyStack => stack.is_empty(),
                PdaMode::FinalState => p.accepting().contains(state),
            };
        if accepted {
            *count += 1;
            *best = Some(best.map_or(pushes, |b| b.min(pushes)));
        }
        let (max_steps, max_stack, max_pushes) = bounds;
        if steps == max_steps {
            return Ok(());
        }
        let Some(&top) = stack.last() else {
            return Ok(());
        };
        for t in p.transitions() {
            if t.from != state || t.top != top {
                continue;
            }
            let next_pos = match t.input {
                None => pos,
                Some(c) if pos < target.len() && target[pos] == c => pos + 1,
                Some(_) => continue,
            };
            let next_pushes = pushes + u64::from(t.kind() == MoveKind::Push);
            if next_pushes > max_pushes {
                continue;
            }
            let mut next_stack = stack.to_vec();
            next_stack.pop();
            next_stack.extend(t.write.iter().rev());
            if next_stack.len() > max_stack {
                continue;
            }
            dfs(
                p, target, &t.to, next_pos, &next_stack, steps + 1, next_pushes, bounds, best,
                count, nodes, limits,
            )?;
        }
        Ok(())
    }

    let initial_stack = vec![p.stack_start_symbol()];
    dfs(
        p,
        &target,
        p.start_state(),
        0,
        &initial_stack,
        0,
        0,
        (max_steps, max_stack, max_pushes),
        &mut best,
        &mut count,
        &mut nodes,
        limits,
    )?;
    Ok(BruteOutcome { min: best, accepting_computations: count })
}

/// Reference group memory complexity: enumerate every computation (one
/// transition per letter) and count non-identity steps.
pub fn brute_gmc(a: &Efa, word: &str, limits: &Limits) -> Result<BruteOutcome> {
    let chars: Vec<char> = word.chars().collect();
    for &c in &chars {
        if !a.alphabet().contains(&c) {
            return Err(Error::AlphabetViolation(c));
        }
    }
    let mut best: Option<u64> = None;
    let mut count: u64 = 0;
    let mut nodes: u64 = 0;
    let id = identity(a.group());

    struct Dfs<'a> {
        a: &'a Efa,
        chars: &'a [char],
        limits: &'a Limits,
    }
    impl Dfs<'_> {
        fn run(
            &self,
            state: &str,
            pos: usize,
            reg: crate::groups::GroupElement,
            cost: u64,
            best: &mut Option<u64>,
            count: &mut u64,
            nodes: &mut u64,
        ) -> Result<()> {
            *nodes += 1;
            if *nodes > self.limits.search_nodes {
                return Err(Error::BudgetExceeded("brute gmc nodes".into()));
            }
            if pos == self.chars.len() {
                if self.a.accepting_contains(state) && reg.is_identity() {
                    *count += 1;
                    *best = Some(best.map_or(cost, |b| b.min(cost)));
                }
                return Ok(());
            }
            for t in self.a.transitions() {
                if t.from != state || t.letter != self.chars[pos] {
                    continue;
                }
                let step = u64::from(!t.elem.is_identity());
                self.run(
                    &t.to,
                    pos + 1,
                    reg.mul(&t.elem).expect("same group"),
                    cost + step,
                    best,
                    count,
                    nodes,
                )?;
            }
            Ok(())
        }
    }

    let dfs = Dfs { a, chars: &chars, limits };
    dfs.run(a.start_state(), 0, id, 0, &mut best, &mut count, &mut nodes)?;
    Ok(BruteOutcome { min: best, accepting_computations: count })
}

/// Reference jumping complexity: enumerate every computation (the consumed
/// position is forced, targets branch) and count jumps.
pub fn brute_jc(m: &Fatl, word: &str, limits: &Limits) -> Result<BruteOutcome> {
    for c in word.chars() {
        if !m.alphabet().contains(&c) {
            return Err(Error::AlphabetViolation(c));
        }
    }
    let mut best: Option<u64> = None;
    let mut count: u64 = 0;
    let mut nodes: u64 = 0;

    struct Dfs<'a> {
        m: &'a Fatl,
        limits: &'a Limits,
    }
    impl Dfs<'_> {
        fn run(
            &self,
            state: &str,
            rest: &str,
            cost: u64,
            best: &mut Option<u64>,
            count: &mut u64,
            nodes: &mut u64,
        ) -> Result<()> {
            *nodes += 1;
            if *nodes > self.limits.search_nodes {
                return Err(Error::BudgetExceeded("brute jc nodes".into()));
            }
            if rest.is_empty() {
                if self.m.accepting_contains(state) {
                    *count += 1;
                    *best = Some(best.map_or(cost, |b| b.min(cost)));
                }
                return Ok(());
            }
            let readable = rest
                .chars()
                .enumerate()
                .find(|(_, c)| self.m.delta().contains_key(&(state.to_string(), *c)));
            let Some((idx, letter)) = readable else {
                return Ok(());
            };
            let mut remaining: String = rest.chars().take(idx).collect();
            remaining.extend(rest.chars().skip(idx + 1));
            let step = u64::from(idx > 0);
            for to in &self.m.delta()[&(state.to_string(), letter)] {
                self.run(to, &remaining, cost + step, best, count, nodes)?;
            }
            Ok(())
        }
    }

    let dfs = Dfs { m, limits };
    dfs.run(m.start_state(), word, 0, &mut best, &mut count, &mut nodes)?;
    Ok(BruteOutcome { min: best, accepting_computations: count })
}

/// Bar-Hillel triple construction for the intersection of a grammar with a
/// regular language. The automaton is determinized first when needed.
pub fn intersect_grammar_nfa(g: &Grammar, nfa: &Nfa) -> Result<Grammar> {
    let dfa = if nfa.is_deterministic() && !nfa.has_epsilon_moves() {
        nfa.clone()
    } else {
        nfa.determinize()
    };
    let n_states = dfa.n_states();
    let triple = |p: usize, a: &str, q: usize| format!("I{p}#{a}#{q}");
    let mut rules: Vec<Rule> = Vec::new();

    let start_name = "IStart".to_string();
    let initial = *dfa
        .initial_states()
        .iter()
        .next()
        .ok_or_else(|| Error::Invalid("automaton without initial state".into()))?;
    for &f in dfa.accepting_states() {
        rules.push(Rule::new(
            start_name.clone(),
            vec![Sym::N(triple(initial, g.start(), f))],
        ));
    }

    for rule in g.rules() {
        // every assignment of automaton states to the rule's seam positions
        let k = rule.rhs.len();
        let mut assignment = vec![0usize; k + 1];
        loop {
            // validity: terminal positions must follow the transition function
            let mut ok = true;
            for (i, sym) in rule.rhs.iter().enumerate() {
                if let Sym::T(c) = sym {
                    match dfa.successors(assignment[i], Some(*c)) {
                        Some(set) if set.contains(&assignment[i + 1]) => {}
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                let lhs = triple(assignment[0], &rule.lhs, assignment[k]);
                let rhs: Vec<Sym> = rule
                    .rhs
                    .iter()
                    .enumerate()
                    .map(|(i, sym)| match sym {
                        Sym::T(c) => Sym::T(*c),
                        Sym::N(n) => Sym::N(triple(assignment[i], n, assignment[i + 1])),
                    })
                    .collect();
                rules.push(Rule::new(lhs, rhs));
            }
            // next assignment
            let mut idx = 0;
            loop {
                if idx > k {
                    break;
                }
                assignment[idx] += 1;
                if assignment[idx] < n_states {
                    break;
                }
                assignment[idx] = 0;
                idx += 1;
            }
            if idx > k {
                break;
            }
        }
    }
    Grammar::new(start_name, rules)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfgEmptiness {
    Empty,
    /// A shortest derivable word (ties broken lexicographically).
    NonEmpty(String),
}

/// Emptiness via the generating-nonterminal fixpoint, tracking the
/// length-lexicographically smallest derivable word.
pub fn cfg_emptiness(g: &Grammar) -> CfgEmptiness {
    let better = |a: &(usize, String), b: &(usize, String)| -> bool {
        a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
    };
    let mut best: BTreeMap<String, (usize, String)> = BTreeMap::new();
    loop {
        let mut changed = false;
        for rule in g.rules() {
            let mut len = 0usize;
            let mut word = String::new();
            let mut ok = true;
            for sym in &rule.rhs {
                match sym {
                    Sym::T(c) => {
                        len += 1;
                        word.push(*c);
                    }
                    Sym::N(n) => match best.get(n) {
                        Some((l, w)) => {
                            len += l;
                            word.push_str(w);
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    },
                }
            }
            if !ok {
                continue;
            }
            let candidate = (len, word);
            let improved = match best.get(&rule.lhs) {
                None => true,
                Some(current) => better(&candidate, current),
            };
            if improved {
                best.insert(rule.lhs.clone(), candidate);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    match best.get(g.start()) {
        Some((_, word)) => CfgEmptiness::NonEmpty(word.clone()),
        None => CfgEmptiness::Empty,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthFamily {
    Constant,
    Log,
    Sqrt,
    Linear,
}

impl GrowthFamily {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            GrowthFamily::Constant => 1.0,
            GrowthFamily::Log => n.ln(),
            GrowthFamily::Sqrt => n.sqrt(),
            GrowthFamily::Linear => n,
        }
    }
}

impl fmt::Display for GrowthFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GrowthFamily::Constant => "constant",
            GrowthFamily::Log => "log",
            GrowthFamily::Sqrt => "sqrt",
            GrowthFamily::Linear => "linear",
        };
        write!(f, "{name}")
    }
}

/// Outcome of fitting `value(n) ≈ C * f(n)` on the measured points.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub family: GrowthFamily,
    /// Least-squares constant through the origin.
    pub constant: f64,
    pub max_abs_residual: f64,
    /// Every measured point satisfies `value <= C * f(n) * (1 + tol)`.
    pub consistent_with_big_o: bool,
    /// Largest C' with `value >= C' * f(n)` everywhere (the lower-fit side).
    pub omega_constant: f64,
    pub points_used: usize,
}

pub const DEFAULT_FIT_MIN_N: u32 = 4;
pub const DEFAULT_FIT_TOLERANCE: f64 = 0.15;

/// Least-squares fit of a profile against a growth family, using the lengths
/// from `min_n` up that carry a non-zero value. Verdicts speak only about
/// the measured scale, never about true asymptotics.
pub fn growth_fit(
    profile: &Profile,
    family: GrowthFamily,
    min_n: u32,
    tolerance: f64,
) -> Result<FitReport> {
    let points: Vec<(f64, f64)> = profile
        .iter()
        .filter(|&(n, v)| n >= min_n && v > 0)
        .map(|(n, v)| (f64::from(n), v as f64))
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(n, v)| {
        let f = family.eval(n);
        (num + v * f, den + f * f)
    });
    let constant = if den == 0.0 { 0.0 } else { num / den };
    let mut max_abs_residual: f64 = 0.0;
    let mut consistent = true;
    let mut omega_constant = f64::INFINITY;
    for &(n, v) in &points {
        let f = family.eval(n);
        max_abs_residual = max_abs_residual.max((v - constant * f).abs());
        if v > constant * f * (1.0 + tolerance) {
            consistent = false;
        }
        if f > 0.0 {
            omega_constant = omega_constant.min(v / f);
        }
    }
    Ok(FitReport {
        family,
        constant,
        max_abs_residual,
        consistent_with_big_o: consistent,
        omega_constant,
        points_used: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn enumerate_anbn_grammar() {
        let membership = GrammarMembership::new(&corpus::anbn_grammar()).unwrap();
        let slice = enumerate(&membership, 6, &Limits::default()).unwrap();
        let expect: BTreeSet<String> =
            ["ab", "aabb", "aaabbb"].iter().map(|s| s.to_string()).collect();
        assert_eq!(slice.words, expect);
    }

    #[test]
    fn enumerate_nfa_a_star() {
        let mut nfa = Nfa::new(['a']);
        let s = nfa.add_state();
        nfa.set_initial(s);
        nfa.set_accepting(s);
        nfa.add_transition(s, Some('a'), s);
        let slice = enumerate(&nfa, 3, &Limits::default()).unwrap();
        assert_eq!(slice.words.len(), 4);
        assert!(slice.contains(""));
        assert_eq!(slice.serialize(), "_\na\naa\naaa\n");
    }

    #[test]
    fn enumerate_predicate_language() {
        let device = PredicateLanguage {
            alphabet: vec!['a', 'b', 'c'],
            member: crate::efa::sqrt_language_member,
        };
        let slice = enumerate(&device, 8, &Limits::default()).unwrap();
        assert!(slice.contains("baabc"));
        assert!(!slice.contains("babc"));
    }

    #[test]
    fn brute_dnreg_matches_search() {
        let g = corpus::anbn_grammar();
        let brute = brute_dnreg(&g, "aaabbb", &Limits::default()).unwrap();
        assert_eq!(brute.min, Some(2));
        assert_eq!(brute.accepting_computations, 1);
        assert_eq!(brute_dnreg(&g, "aab", &Limits::default()).unwrap().min, None);
    }

    #[test]
    fn brute_gmc_on_anbn() {
        let a = crate::efa::build_anbn_efa();
        let brute = brute_gmc(&a, "aabb", &Limits::default()).unwrap();
        assert_eq!(brute.min, Some(4));
    }

    #[test]
    fn brute_jc_on_paper_word() {
        let m = crate::fatl::build_paper_example();
        let brute = brute_jc(&m, "bca", &Limits::default()).unwrap();
        assert_eq!(brute.min, Some(0));
    }

    #[test]
    fn intersection_with_superset_keeps_language() {
        // a*b* automaton
        let mut nfa = Nfa::new(['a', 'b']);
        let s0 = nfa.add_state();
        let s1 = nfa.add_state();
        nfa.set_initial(s0);
        nfa.set_accepting(s0);
        nfa.set_accepting(s1);
        nfa.add_transition(s0, Some('a'), s0);
        nfa.add_transition(s0, Some('b'), s1);
        nfa.add_transition(s1, Some('b'), s1);

        let g = corpus::anbn_grammar();
        let inter = intersect_grammar_nfa(&g, &nfa).unwrap();
        let lhs = GrammarMembership::new(&inter).unwrap();
        let rhs = GrammarMembership::new(&g).unwrap();
        let l = enumerate(&lhs, 8, &Limits::default()).unwrap();
        let r = enumerate(&rhs, 8, &Limits::default()).unwrap();
        assert_eq!(l.words, r.words);
    }

    #[test]
    fn intersection_with_a_star_is_empty() {
        let mut nfa = Nfa::new(['a', 'b']);
        let s = nfa.add_state();
        nfa.set_initial(s);
        nfa.set_accepting(s);
        nfa.add_transition(s, Some('a'), s);
        let inter = intersect_grammar_nfa(&corpus::anbn_grammar(), &nfa).unwrap();
        assert_eq!(cfg_emptiness(&inter), CfgEmptiness::Empty);
    }

    #[test]
    fn emptiness_with_witness() {
        assert_eq!(
            cfg_emptiness(&corpus::anbn_grammar()),
            CfgEmptiness::NonEmpty("ab".to_string())
        );
        let dead = Grammar::parse("start: S\nS -> a S\n").unwrap();
        assert_eq!(cfg_emptiness(&dead), CfgEmptiness::Empty);
    }

    #[test]
    fn fit_constant_zero_profile() {
        let p = Profile::new(8);
        // all-zero: no usable points at all
        assert!(matches!(
            growth_fit(&p, GrowthFamily::Constant, 4, 0.15),
            Err(Error::TooFewPoints(0))
        ));
    }

    #[test]
    fn fit_identity_profile_is_linear() {
        let mut p = Profile::new(12);
        for n in 1..=12 {
            p.set(n, u64::from(n));
        }
        let fit = growth_fit(&p, GrowthFamily::Linear, 4, 0.15).unwrap();
        assert!((fit.constant - 1.0).abs() < 1e-9);
        assert!(fit.consistent_with_big_o);
        assert!(fit.max_abs_residual < 1e-9);
    }

    #[test]
    fn fit_verdict_is_order_stable() {
        let mut p = Profile::new(16);
        for n in 1..=16u32 {
            p.set(n, (f64::from(n).sqrt() * 3.0).round() as u64);
        }
        let base = growth_fit(&p, GrowthFamily::Sqrt, 4, 0.15).unwrap();
        let scaled = growth_fit(&p.scaled(5), GrowthFamily::Sqrt, 4, 0.15).unwrap();
        assert_eq!(base.consistent_with_big_o, scaled.consistent_with_big_o);
        assert!((scaled.constant / base.constant - 5.0).abs() < 1e-9);
    }
}
