//! Finite automata extended with a group-valued register. A word is accepted
//! when some computation reads it completely and ends in a final state with
//! the register back at the group identity. Group memory complexity (gmc)
//! counts the register-changing steps of the cheapest accepting computation.
//!
//! Per-word values come from a forward cost map over (state, register)
//! configurations; the per-length profile runs the same cost maps over all
//! words at once, deduplicating map states, which stays exact while avoiding
//! the exponential word enumeration.

use crate::error::{Error, Result};
use crate::groups::{identity, GroupElement, GroupSpec};
use crate::nfa::Nfa;
use crate::profile::Profile;
use crate::{Boundedness, Limits};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfaTransition {
    pub from: String,
    pub letter: char,
    pub to: String,
    pub elem: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Efa {
    states: Vec<String>,
    alphabet: BTreeSet<char>,
    group: GroupSpec,
    transitions: Vec<EfaTransition>,
    start: String,
    accepting: BTreeSet<String>,
}

impl Efa {
    pub fn new(
        group: GroupSpec,
        start: impl Into<String>,
        accepting: impl IntoIterator<Item = String>,
        transitions: Vec<EfaTransition>,
    ) -> Result<Efa> {
        let start = start.into();
        let mut states = BTreeSet::from([start.clone()]);
        let mut alphabet = BTreeSet::new();
        for t in &transitions {
            if *t.elem.spec() != group {
                return Err(Error::SpecMismatch(
                    group.to_string(),
                    t.elem.spec().to_string(),
                ));
            }
            if !t.letter.is_ascii_lowercase() {
                return Err(Error::Invalid(format!("bad input letter `{}`", t.letter)));
            }
            states.insert(t.from.clone());
            states.insert(t.to.clone());
            alphabet.insert(t.letter);
        }
        let accepting: BTreeSet<String> = accepting.into_iter().collect();
        states.extend(accepting.iter().cloned());
        Ok(Efa {
            states: states.into_iter().collect(),
            alphabet,
            group,
            transitions,
            start,
            accepting,
        })
    }

    /// Parses the `.efa` format: `group:`, `start:`, `final:` headers, then
    /// transition lines `q a p <element literal>`.
    pub fn parse(text: &str) -> Result<Efa> {
        let mut group = None;
        let mut start = None;
        let mut accepting: Vec<String> = Vec::new();
        let mut raw_transitions: Vec<(String, char, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("group:") {
                group = Some(GroupSpec::parse(rest.trim())?);
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
            if toks.len() < 4 {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: "expected `q a p <element>`".into(),
                });
            }
            if toks[1].chars().count() != 1 {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: "input must be a single letter".into(),
                });
            }
            raw_transitions.push((
                toks[0].to_string(),
                toks[1].chars().next().unwrap(),
                toks[2].to_string(),
                toks[3..].join(" "),
            ));
        }
        let group = group.ok_or(Error::MissingStart)?;
        let start = start.ok_or(Error::MissingStart)?;
        let transitions = raw_transitions
            .into_iter()
            .map(|(from, letter, to, elem)| {
                Ok(EfaTransition {
                    from,
                    letter,
                    to,
                    elem: GroupElement::parse(&group, &elem)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Efa::new(group, start, accepting, transitions)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transitions(&self) -> &[EfaTransition] {
        &self.transitions
    }

    pub fn start_state(&self) -> &str {
        &self.start
    }

    pub fn accepting_contains(&self, state: &str) -> bool {
        self.accepting.contains(state)
    }

    fn state_index(&self, name: &str) -> usize {
        self.states.iter().position(|s| s == name).unwrap()
    }

    fn check_word(&self, word: &str) -> Result<Vec<char>> {
        let chars: Vec<char> = word.chars().collect();
        for &c in &chars {
            if !self.alphabet.contains(&c) {
                return Err(Error::AlphabetViolation(c));
            }
        }
        Ok(chars)
    }

    /// Transition table indexed by (state index, letter); entries carry the
    /// target state and the transition's index into `self.transitions`.
    fn table(&self) -> HashMap<(usize, char), Vec<(usize, usize)>> {
        let mut table: HashMap<(usize, char), Vec<(usize, usize)>> = HashMap::new();
        for (t_idx, t) in self.transitions.iter().enumerate() {
            table
                .entry((self.state_index(&t.from), t.letter))
                .or_default()
                .push((self.state_index(&t.to), t_idx));
        }
        table
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        Ok(self.gmc_word(word)?.is_some())
    }

    /// Minimum number of non-identity register multiplications over the
    /// accepting computations of `word`; `None` when rejected.
    pub fn gmc_word(&self, word: &str) -> Result<Option<u64>> {
        let chars = self.check_word(word)?;
        let table = self.table();
        let id = identity(&self.group);
        // forward cost map over (state, register); computations advance one
        // letter per step, so a plain left-to-right sweep is exact
        let mut costs: HashMap<(usize, GroupElement), u64> = HashMap::new();
        costs.insert((self.state_index(&self.start), id.clone()), 0);
        for &c in &chars {
            let mut next: HashMap<(usize, GroupElement), u64> = HashMap::new();
            for ((state, reg), cost) in &costs {
                let Some(succs) = table.get(&(*state, c)) else {
                    continue;
                };
                for &(to, t_idx) in succs {
                    let elem = &self.transitions[t_idx].elem;
                    let step = u64::from(!elem.is_identity());
                    let new_reg = reg.mul(elem).expect("same group");
                    let entry = next.entry((to, new_reg)).or_insert(u64::MAX);
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
            .filter(|((state, reg), _)| {
                self.accepting.contains(&self.states[*state]) && reg.is_identity()
            })
            .map(|(_, &cost)| cost)
            .min())
    }

    /// Per-length maxima of `gmc_word` over all words, computed exactly by a
    /// breadth-first sweep over deduplicated cost maps: two word prefixes
    /// inducing the same (state, register) -> cost map have the same future,
    /// so each level keeps one representative per map. Entries that cannot
    /// reach acceptance within the remaining length are dropped first.
    pub fn gmc_profile(&self, n_max: u32, limits: &Limits) -> Result<Profile> {
        let table = self.table();
        let mut interner = RegInterner::new(&self.group);
        let n = n_max as usize;

        // transition application caches on interned registers
        let mut forward: HashMap<(u32, usize), u32> = HashMap::new();
        let mut backward: HashMap<(u32, usize), u32> = HashMap::new();

        // alive[rem] = configurations that accept within <= rem further steps
        let alive = {
            let mut exact: Vec<HashSet<(usize, u32)>> = Vec::with_capacity(n + 1);
            let accept: HashSet<(usize, u32)> = self
                .accepting
                .iter()
                .map(|s| (self.state_index(s), RegInterner::IDENTITY))
                .collect();
            exact.push(accept);
            for level in 0..n {
                let mut prev: HashSet<(usize, u32)> = HashSet::new();
                for &(to, reg) in &exact[level] {
                    for (t_idx, t) in self.transitions.iter().enumerate() {
                        if self.state_index(&t.to) != to {
                            continue;
                        }
                        let pred = *backward.entry((reg, t_idx)).or_insert_with(|| {
                            let val = interner.elems[reg as usize]
                                .mul(&t.elem.inv())
                                .expect("same group");
                            interner.intern(val)
                        });
                        prev.insert((self.state_index(&t.from), pred));
                    }
                }
                exact.push(prev);
            }
            let mut cumulative: Vec<HashSet<(usize, u32)>> = Vec::with_capacity(n + 1);
            let mut acc: HashSet<(usize, u32)> = HashSet::new();
            for set in &exact {
                acc.extend(set.iter().copied());
                cumulative.push(acc.clone());
            }
            cumulative
        };

        // a cost map: sorted (state, register, min cost) entries
        type CostMap = Vec<(usize, u32, u32)>;
        let start_map: CostMap = vec![(self.state_index(&self.start), RegInterner::IDENTITY, 0)];
        let mut level: Vec<CostMap> = vec![start_map];
        let mut profile = Profile::new(n_max);
        let mut processed: u64 = 0;

        for len in 1..=n {
            let rem = n - len;
            let mut next: Vec<CostMap> = Vec::new();
            for map in &level {
                for &c in &self.alphabet {
                    let mut out: HashMap<(usize, u32), u32> = HashMap::new();
                    for &(state, reg, cost) in map {
                        let Some(succs) = table.get(&(state, c)) else {
                            continue;
                        };
                        for &(to, t_idx) in succs {
                            let elem = &self.transitions[t_idx].elem;
                            let new_reg = *forward.entry((reg, t_idx)).or_insert_with(|| {
                                let val = interner.elems[reg as usize]
                                    .mul(elem)
                                    .expect("same group");
                                interner.intern(val)
                            });
                            if !alive[rem].contains(&(to, new_reg)) {
                                continue;
                            }
                            let step = u32::from(!elem.is_identity());
                            let entry = out.entry((to, new_reg)).or_insert(u32::MAX);
                            *entry = (*entry).min(cost + step);
                        }
                    }
                    if out.is_empty() {
                        continue;
                    }
                    let mut canon: CostMap =
                        out.into_iter().map(|((s, r), c)| (s, r, c)).collect();
                    canon.sort_unstable();
                    next.push(canon);
                }
            }
            next.sort_unstable();
            next.dedup();
            processed += next.len() as u64;
            if processed > limits.search_nodes {
                return Err(Error::BudgetExceeded(format!(
                    "gmc profile cost-map states at length {len}"
                )));
            }
            let best = next
                .iter()
                .filter_map(|map| {
                    map.iter()
                        .filter(|(state, reg, _)| {
                            self.accepting.contains(&self.states[*state])
                                && *reg == RegInterner::IDENTITY
                        })
                        .map(|&(_, _, cost)| u64::from(cost))
                        .min()
                })
                .max()
                .unwrap_or(0);
            profile.set(len as u32, best);
            level = next;
            if level.is_empty() {
                break;
            }
        }
        Ok(profile)
    }

    /// Builds an NFA recognizing exactly the words of the language whose gmc
    /// is at most `c`. States are (automaton state, register value, budget):
    /// identity-labelled moves are free, others multiply the register and
    /// spend budget, and acceptance requires the identity register.
    pub fn build_bounded_nfa(&self, c: u32) -> EfaBudgetNfa {
        let table = self.table();
        let id = identity(&self.group);
        let mut nfa = Nfa::new(self.alphabet.iter().copied());
        let mut index: HashMap<(usize, GroupElement, u32), usize> = HashMap::new();
        let mut queue: VecDeque<(usize, GroupElement, u32)> = VecDeque::new();
        let mut registers: BTreeSet<GroupElement> = BTreeSet::new();

        let intern = |key: (usize, GroupElement, u32),
                          nfa: &mut Nfa,
                          queue: &mut VecDeque<(usize, GroupElement, u32)>,
                          index: &mut HashMap<(usize, GroupElement, u32), usize>,
                          registers: &mut BTreeSet<GroupElement>|
         -> usize {
            if let Some(&i) = index.get(&key) {
                return i;
            }
            let i = nfa.add_state();
            if self.accepting.contains(&self.states[key.0]) && key.1.is_identity() {
                nfa.set_accepting(i);
            }
            registers.insert(key.1.clone());
            index.insert(key.clone(), i);
            queue.push_back(key);
            i
        };

        let start_key = (self.state_index(&self.start), id, c);
        let s0 = intern(start_key, &mut nfa, &mut queue, &mut index, &mut registers);
        nfa.set_initial(s0);

        while let Some((state, reg, budget)) = queue.pop_front() {
            let from = index[&(state, reg.clone(), budget)];
            for &letter in &self.alphabet {
                let Some(succs) = table.get(&(state, letter)) else {
                    continue;
                };
                for &(to, t_idx) in succs {
                    let elem = &self.transitions[t_idx].elem;
                    let key = if elem.is_identity() {
                        (to, reg.clone(), budget)
                    } else if budget > 0 {
                        (to, reg.mul(elem).expect("same group"), budget - 1)
                    } else {
                        continue;
                    };
                    let target = intern(key, &mut nfa, &mut queue, &mut index, &mut registers);
                    nfa.add_transition(from, Some(letter), target);
                }
            }
        }
        EfaBudgetNfa {
            nfa,
            register_values: registers,
        }
    }

    /// Bounded-exhaustive check of `gmc(n) <= c`: breadth-first search of
    /// the product of this automaton's configuration graph with the
    /// complement of the budget automaton, up to `search_bound` letters.
    pub fn check_gmc_bounded(&self, c: u32, search_bound: u32, limits: &Limits) -> Result<Boundedness> {
        let complement = self.build_bounded_nfa(c).nfa.complement();
        let dfa_start = *complement
            .initial_states()
            .iter()
            .next()
            .expect("determinized NFA has an initial state");
        let table = self.table();
        let mut interner = RegInterner::new(&self.group);
        let id0 = RegInterner::IDENTITY;

        type Node = (usize, u32, usize);
        let start: Node = (self.state_index(&self.start), id0, dfa_start);
        let mut parents: HashMap<Node, (Node, char)> = HashMap::new();
        let mut seen: HashSet<Node> = HashSet::from([start]);
        let mut queue: VecDeque<(Node, u32)> = VecDeque::from([(start, 0)]);
        let mut nodes: u64 = 0;

        let reconstruct = |node: Node, parents: &HashMap<Node, (Node, char)>| -> String {
            let mut letters = Vec::new();
            let mut cur = node;
            while let Some((prev, letter)) = parents.get(&cur) {
                letters.push(*letter);
                cur = *prev;
            }
            letters.into_iter().rev().collect()
        };

        while let Some((node, depth)) = queue.pop_front() {
            if depth == search_bound {
                continue;
            }
            let (state, reg, dfa) = node;
            for &letter in &self.alphabet {
                let dfa_next = match complement.successors(dfa, Some(letter)) {
                    Some(set) => *set.iter().next().unwrap(),
                    None => continue,
                };
                let Some(succs) = table.get(&(state, letter)) else {
                    continue;
                };
                for &(to, t_idx) in succs {
                    let elem = &self.transitions[t_idx].elem;
                    let new_reg = {
                        let val = interner.elems[reg as usize].mul(elem).expect("same group");
                        interner.intern(val)
                    };
                    let next: Node = (to, new_reg, dfa_next);
                    if !seen.insert(next) {
                        continue;
                    }
                    nodes += 1;
                    if nodes > limits.search_nodes {
                        return Ok(Boundedness::Unknown);
                    }
                    parents.insert(next, (node, letter));
                    let efa_accepts = self.accepting.contains(&self.states[to])
                        && new_reg == RegInterner::IDENTITY;
                    if efa_accepts && complement.accepting_states().contains(&dfa_next) {
                        let word = reconstruct(next, &parents);
                        debug_assert!(matches!(self.gmc_word(&word), Ok(Some(v)) if v > u64::from(c)));
                        return Ok(Boundedness::Counterexample(word));
                    }
                    queue.push_back((next, depth + 1));
                }
            }
        }
        Ok(Boundedness::BoundedUpTo(search_bound))
    }
}

/// Register-value interner shared by the profile and boundedness searches.
struct RegInterner {
    ids: HashMap<GroupElement, u32>,
    elems: Vec<GroupElement>,
}

impl RegInterner {
    const IDENTITY: u32 = 0;

    fn new(spec: &GroupSpec) -> RegInterner {
        let id = identity(spec);
        RegInterner {
            ids: HashMap::from([(id.clone(), 0)]),
            elems: vec![id],
        }
    }

    fn intern(&mut self, elem: GroupElement) -> u32 {
        if let Some(&i) = self.ids.get(&elem) {
            return i;
        }
        let i = self.elems.len() as u32;
        self.ids.insert(elem.clone(), i);
        self.elems.push(elem);
        i
    }
}

/// The budget automaton for `L(A, <=c)` plus the register values it reached.
#[derive(Debug, Clone)]
pub struct EfaBudgetNfa {
    pub nfa: Nfa,
    pub register_values: BTreeSet<GroupElement>,
}

impl fmt::Display for Efa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.group)?;
        writeln!(f, "start: {}", self.start)?;
        if !self.accepting.is_empty() {
            let finals: Vec<&str> = self.accepting.iter().map(String::as_str).collect();
            writeln!(f, "final: {}", finals.join(" "))?;
        }
        for t in &self.transitions {
            writeln!(f, "{} {} {} {}", t.from, t.letter, t.to, t.elem)?;
        }
        Ok(())
    }
}

/// The two-state machine over the additive integers for `a^n b^n`, n >= 1:
/// every `a` adds 1, every `b` subtracts 1.
pub fn build_anbn_efa() -> Efa {
    let z = GroupSpec::Zk(1);
    let one = GroupElement::from_ints(1, &[1]).unwrap();
    let minus_one = GroupElement::from_ints(1, &[-1]).unwrap();
    Efa::new(
        z,
        "q0",
        ["q1".to_string()],
        vec![
            EfaTransition { from: "q0".into(), letter: 'a', to: "q0".into(), elem: one },
            EfaTransition { from: "q0".into(), letter: 'b', to: "q1".into(), elem: minus_one.clone() },
            EfaTransition { from: "q1".into(), letter: 'b', to: "q1".into(), elem: minus_one },
        ],
    )
    .unwrap()
}

/// Batch size for the counting phases of the marked-Goldstine machine.
pub(crate) const SQRT_BATCH: i64 = 6;

/// Membership predicate for the marked Goldstine variant: words
/// `b a^{i_1} b a^{i_2} b ... a^{i_k} b c^m` with all `i_t >= 1`, `k >= 1`,
/// such that some block j has `i_j != j` and the marker length fits:
/// `m = j - i_j` when `j > i_j`, and `m = 1` when `j < i_j`.
pub fn sqrt_language_member(word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    if chars.first() != Some(&'b') {
        return false;
    }
    let mut blocks: Vec<u64> = Vec::new();
    let mut pos = 1;
    loop {
        let run = chars[pos..].iter().take_while(|&&c| c == 'a').count();
        if run == 0 {
            break;
        }
        pos += run;
        if chars.get(pos) != Some(&'b') {
            return false;
        }
        pos += 1;
        blocks.push(run as u64);
    }
    if blocks.is_empty() {
        return false;
    }
    let m = chars[pos..].iter().take_while(|&&c| c == 'c').count() as u64;
    if pos + m as usize != chars.len() || m == 0 {
        return false;
    }
    blocks.iter().enumerate().any(|(idx, &i_j)| {
        let j = idx as u64 + 1;
        (i_j < j && m == j - i_j) || (i_j > j && m == 1)
    })
}

/// An automaton over `Z x Zmod 2` for the marked Goldstine variant. It
/// guesses the witness block, counts block index against block length in the
/// integer component, and certifies the overlong-block case with the parity
/// flag. Counting is batched: the register moves by `SQRT_BATCH` once per
/// batch and residues live in the finite control, so verifying a witness at
/// block j costs about `2j / SQRT_BATCH` register operations.
pub fn build_sqrt_efa() -> Efa {
    let k = SQRT_BATCH;
    let group = GroupSpec::parse("Z^1 x Zmod 2").unwrap();
    let el = |z: i64, p: i64| {
        GroupElement::from_components(vec![
            GroupElement::from_ints(1, &[z]).unwrap(),
            GroupElement::from_residue(2, p),
        ])
        .unwrap()
    };
    let mut ts: Vec<EfaTransition> = Vec::new();
    let mut add = |from: String, letter: char, to: String, elem: GroupElement| {
        ts.push(EfaTransition { from, letter, to, elem });
    };

    // leading marker
    add("s0".into(), 'b', "cs0".into(), el(0, 0));
    for r in 0..k {
        let cs = format!("cs{r}");
        let cm = format!("cm{r}");
        // skim a counted block
        add(cs.clone(), 'a', cm.clone(), el(0, 0));
        add(cm.clone(), 'a', cm.clone(), el(0, 0));
        // count its closing b, one register bump per full batch
        let r2 = (r + 1) % k;
        add(cm.clone(), 'b', format!("cs{r2}"), el(if r2 == 0 { k } else { 0 }, 0));
        // or enter the witness block: settle the count residue and drain
        // this first letter in one move
        add(cs.clone(), 'a', "d1".into(), el(r - 1, 0));
    }
    for r in 0..k {
        let d = format!("d{r}");
        // keep draining the witness block
        let r2 = (r + 1) % k;
        add(d.clone(), 'a', format!("d{r2}"), el(if r2 == 0 { -k } else { 0 }, 0));
        // short-block case: the block ends; settle the drain residue and
        // count the closing b
        let residual = if r == 0 { -1 } else { r - 1 };
        add(d.clone(), 'b', "saS".into(), el(1 - residual, 0));
        // long-block case: stop draining; this letter certifies one extra a
        add(d.clone(), 'a', "w2".into(), el(-residual, 1));
    }
    // short-block case: skim the remaining blocks, then pay the marker down
    add("saS".into(), 'a', "saM".into(), el(0, 0));
    add("saM".into(), 'a', "saM".into(), el(0, 0));
    add("saM".into(), 'b', "saS".into(), el(0, 0));
    add("saS".into(), 'c', "ca1".into(), el(0, 0));
    add("saS".into(), 'c', "accA".into(), el(-1, 0));
    for r in 0..k {
        let ca = format!("ca{r}");
        let r2 = (r + 1) % k;
        add(ca.clone(), 'c', format!("ca{r2}"), el(if r2 == 0 { -k } else { 0 }, 0));
        // guess that this c is the last one and settle the residue
        add(ca.clone(), 'c', "accA".into(), el(-(r + 1), 0));
    }
    // long-block case: skim the rest of the witness block and all later
    // blocks, then read the single marker letter, flipping parity back
    add("w2".into(), 'a', "w2".into(), el(0, 0));
    add("w2".into(), 'b', "sbS".into(), el(0, 0));
    add("sbS".into(), 'a', "sbM".into(), el(0, 0));
    add("sbM".into(), 'a', "sbM".into(), el(0, 0));
    add("sbM".into(), 'b', "sbS".into(), el(0, 0));
    add("sbS".into(), 'c', "accB".into(), el(1, 1));

    Efa::new(group, "s0", ["accA".to_string(), "accB".to_string()], ts).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn anbn_acceptance() {
        let a = build_anbn_efa();
        assert!(a.accepts("aabb").unwrap());
        assert!(a.accepts("ab").unwrap());
        assert!(!a.accepts("abab").unwrap());
        assert!(!a.accepts("").unwrap());
        assert!(!a.accepts("aab").unwrap());
    }

    #[test]
    fn empty_word_accepted_when_start_is_final() {
        let z = GroupSpec::Zk(1);
        let a = Efa::new(z, "q", ["q".to_string()], vec![]).unwrap();
        assert!(a.accepts("").unwrap());
    }

    #[test]
    fn gmc_counts_every_register_change() {
        let a = build_anbn_efa();
        assert_eq!(a.gmc_word("aaabbb").unwrap(), Some(6));
        assert_eq!(a.gmc_word("aabb").unwrap(), Some(4));
        assert_eq!(a.gmc_word("ba").unwrap(), None);
    }

    #[test]
    fn identity_machine_has_zero_gmc() {
        let a = corpus::identity_efa();
        assert_eq!(a.gmc_word("aabbb").unwrap(), Some(0));
        let p = a.gmc_profile(6, &Limits::default()).unwrap();
        for n in 1..=6 {
            assert_eq!(p.get(n), 0);
        }
    }

    #[test]
    fn anbn_profile_is_linear_on_even_lengths() {
        let a = build_anbn_efa();
        let p = a.gmc_profile(10, &Limits::default()).unwrap();
        for n in 1..=10u32 {
            let expect = if n % 2 == 0 { u64::from(n) } else { 0 };
            assert_eq!(p.get(n), expect, "length {n}");
            assert!(p.get(n) <= u64::from(n));
        }
    }

    #[test]
    fn profile_matches_per_word_search() {
        let a = build_anbn_efa();
        let p = a.gmc_profile(8, &Limits::default()).unwrap();
        for n in 1..=8u32 {
            let mut best = 0;
            for w in crate::pda::all_words(&['a', 'b'], n) {
                best = best.max(a.gmc_word(&w).unwrap().unwrap_or(0));
            }
            assert_eq!(p.get(n), best, "length {n}");
        }
    }

    #[test]
    fn bounded_nfa_cuts_at_budget() {
        let a = build_anbn_efa();
        let budget = a.build_bounded_nfa(4);
        let words = budget.nfa.words_up_to(12);
        let expect: BTreeSet<String> = ["ab", "aabb"].iter().map(|s| s.to_string()).collect();
        assert_eq!(words, expect);
    }

    #[test]
    fn budget_zero_keeps_identity_moves_only() {
        let a = corpus::identity_efa();
        let budget = a.build_bounded_nfa(0);
        for n in 0..=8u32 {
            for w in crate::pda::all_words(&['a', 'b'], n) {
                assert_eq!(
                    budget.nfa.accepts(&w).unwrap(),
                    a.accepts(&w).unwrap(),
                    "{w:?}"
                );
            }
        }
    }

    #[test]
    fn register_count_within_generator_bound() {
        let a = build_anbn_efa();
        for c in 0..=4u32 {
            let budget = a.build_bounded_nfa(c);
            let g = 2u64; // distinct non-identity labels: +1 and -1
            let bound: u64 = (0..=c).map(|i| g.pow(i)).sum();
            assert!((budget.register_values.len() as u64) <= bound);
        }
    }

    #[test]
    fn gmc_boundedness_counterexample() {
        let a = build_anbn_efa();
        assert_eq!(
            a.check_gmc_bounded(4, 12, &Limits::default()).unwrap(),
            Boundedness::Counterexample("aaabbb".to_string())
        );
    }

    #[test]
    fn identity_machine_is_bounded() {
        let a = corpus::identity_efa();
        assert_eq!(
            a.check_gmc_bounded(0, 10, &Limits::default()).unwrap(),
            Boundedness::BoundedUpTo(10)
        );
    }

    #[test]
    fn sqrt_language_hand_members() {
        assert!(sqrt_language_member("baabc")); // i1 = 2 > 1, m = 1
        assert!(!sqrt_language_member("babc")); // i1 = 1 = 1: no witness
        assert!(sqrt_language_member("bababc")); // i2 = 1 < 2, m = 2 - 1
        assert!(sqrt_language_member("babaababcc")); // i3 = 1 < 3, m = 2
        assert!(!sqrt_language_member("bc"));
        assert!(!sqrt_language_member("abc"));
        assert!(!sqrt_language_member("babbc")); // empty second block
        assert!(!sqrt_language_member("bab")); // no marker letters
    }

    #[test]
    fn sqrt_machine_matches_predicate_short() {
        let a = build_sqrt_efa();
        for n in 0..=12u32 {
            for w in crate::pda::all_words(&['a', 'b', 'c'], n) {
                assert_eq!(
                    a.accepts(&w).unwrap(),
                    sqrt_language_member(&w),
                    "word {w:?}"
                );
            }
        }
    }

    #[test]
    fn sqrt_machine_uses_parity_component() {
        let a = build_sqrt_efa();
        // elements render as "( z ; p )"; a flip shows as parity 1
        let uses_parity = a
            .transitions()
            .iter()
            .any(|t| t.elem.to_string().ends_with("; 1 )"));
        assert!(uses_parity, "some transition must flip the Zmod 2 component");
    }
}
