//! Context-free grammars: parsing, rule classification, reduction, the
//! proper form, and the two quasi normal forms the measure algorithms run on.
//!
//! A rule is *regular* when it is right-linear: `A -> wB` or `A -> w` with
//! `w` terminal-only (possibly empty). Everything else is non-regular, and
//! counting applications of non-regular rules is what the `dnreg` module is
//! about, so every transformation here is careful about how it maps rule
//! classes.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A grammar symbol. Terminals are single lowercase letters; nonterminal
/// names start with an uppercase letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    T(char),
    N(String),
}

impl Sym {
    pub fn is_terminal(&self) -> bool {
        matches!(self, Sym::T(_))
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::T(c) => write!(f, "{c}"),
            Sym::N(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: String,
    pub rhs: Vec<Sym>,
}

impl Rule {
    pub fn new(lhs: impl Into<String>, rhs: Vec<Sym>) -> Rule {
        Rule { lhs: lhs.into(), rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleClass {
    Regular,
    NonRegular,
}

/// Classifies a rule by shape alone: regular iff the right-hand side is a
/// (possibly empty) terminal word followed by at most one nonterminal.
pub fn classify_rule(rule: &Rule) -> RuleClass {
    let mut seen_nonterminal = false;
    for sym in &rule.rhs {
        if seen_nonterminal {
            // anything after a nonterminal breaks the right-linear shape
            return RuleClass::NonRegular;
        }
        if !sym.is_terminal() {
            seen_nonterminal = true;
        }
    }
    RuleClass::Regular
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: BTreeSet<String>,
    terminals: BTreeSet<char>,
    start: String,
    rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgrammarKind {
    /// `G(A)`: same rules, axiom replaced by `A`.
    WithStart(String),
    /// `G_reg`: only the regular rules are kept.
    RegularPart,
    /// `G_cf`: all context-free rules; the identity for a CFG.
    ContextFreePart,
}

fn valid_nonterminal_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '#')
}

impl Grammar {
    /// Builds a grammar from a start symbol and rules, deriving the symbol
    /// tables from the rules themselves.
    pub fn new(start: impl Into<String>, rules: Vec<Rule>) -> Result<Grammar> {
        let start = start.into();
        let mut nonterminals = BTreeSet::new();
        let mut terminals = BTreeSet::new();
        let mut seen_start = false;
        for rule in &rules {
            if !valid_nonterminal_name(&rule.lhs) {
                return Err(Error::Invalid(format!("bad nonterminal name `{}`", rule.lhs)));
            }
            seen_start |= rule.lhs == start;
            nonterminals.insert(rule.lhs.clone());
            for sym in &rule.rhs {
                match sym {
                    Sym::T(c) => {
                        if !c.is_ascii_lowercase() {
                            return Err(Error::Invalid(format!("bad terminal `{c}`")));
                        }
                        terminals.insert(*c);
                    }
                    Sym::N(n) => {
                        if !valid_nonterminal_name(n) {
                            return Err(Error::Invalid(format!("bad nonterminal name `{n}`")));
                        }
                        seen_start |= *n == start;
                        nonterminals.insert(n.clone());
                    }
                }
            }
        }
        for n in &nonterminals {
            if n.len() == 1 && terminals.contains(&n.chars().next().unwrap()) {
                return Err(Error::DuplicateSymbolKind(n.clone()));
            }
        }
        if !valid_nonterminal_name(&start) {
            return Err(Error::Invalid(format!("bad start symbol `{start}`")));
        }
        if !seen_start {
            return Err(Error::UndeclaredStart(start));
        }
        nonterminals.insert(start.clone());
        Ok(Grammar { nonterminals, terminals, start, rules })
    }

    /// Parses the grammar file format: `#` comment lines, one
    /// `start: <Nonterminal>` header, then `A -> tok tok | tok ...` rule
    /// lines; `_` alone denotes the empty right-hand side.
    pub fn parse(text: &str) -> Result<Grammar> {
        let mut start: Option<String> = None;
        let mut rules = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("start:") {
                if start.is_some() {
                    return Err(Error::Syntax { line: line_no, msg: "repeated start line".into() });
                }
                let name = rest.trim();
                if !valid_nonterminal_name(name) || name.contains('#') {
                    return Err(Error::Syntax {
                        line: line_no,
                        msg: format!("bad start symbol `{name}`"),
                    });
                }
                start = Some(name.to_string());
                continue;
            }
            let (lhs_text, rhs_text) = line.split_once("->").ok_or_else(|| Error::Syntax {
                line: line_no,
                msg: "expected `A -> ...`".into(),
            })?;
            let lhs = lhs_text.trim();
            if !valid_nonterminal_name(lhs) || lhs.contains('#') {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: format!("bad rule head `{lhs}`"),
                });
            }
            for alternative in rhs_text.split('|') {
                let tokens: Vec<&str> = alternative.split_whitespace().collect();
                if tokens.is_empty() {
                    return Err(Error::Syntax {
                        line: line_no,
                        msg: "empty alternative; write `_` for the empty word".into(),
                    });
                }
                let rhs = if tokens == ["_"] {
                    Vec::new()
                } else {
                    tokens
                        .iter()
                        .map(|tok| parse_symbol(tok, line_no))
                        .collect::<Result<Vec<_>>>()?
                };
                rules.push(Rule::new(lhs, rhs));
            }
        }
        let start = start.ok_or(Error::MissingStart)?;
        Grammar::new(start, rules)
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn nonterminals(&self) -> &BTreeSet<String> {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &BTreeSet<char> {
        &self.terminals
    }

    /// Rules with the given head, in declaration order.
    pub fn rules_for<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = (usize, &'a Rule)> {
        self.rules
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.lhs == lhs)
    }

    /// No λ-rules and no chain rules.
    pub fn is_proper(&self) -> bool {
        self.rules
            .iter()
            .all(|r| !r.rhs.is_empty() && !(r.rhs.len() == 1 && !r.rhs[0].is_terminal()))
    }

    /// Every nonterminal both accessible and co-accessible.
    pub fn is_reduced(&self) -> bool {
        let generating = self.generating_set();
        let accessible = self.accessible_set();
        self.nonterminals
            .iter()
            .all(|n| generating.contains(n) && accessible.contains(n))
    }

    pub fn is_quasi_normal_form(&self) -> bool {
        self.rules.iter().all(|r| quasi_shape_ok(r, false))
    }

    pub fn is_quasi_chomsky(&self) -> bool {
        self.rules.iter().all(|r| quasi_shape_ok(r, true))
    }

    fn generating_set(&self) -> BTreeSet<String> {
        let mut generating: BTreeSet<String> = BTreeSet::new();
        loop {
            let mut changed = false;
            for rule in &self.rules {
                if generating.contains(&rule.lhs) {
                    continue;
                }
                let ok = rule.rhs.iter().all(|s| match s {
                    Sym::T(_) => true,
                    Sym::N(n) => generating.contains(n),
                });
                if ok {
                    generating.insert(rule.lhs.clone());
                    changed = true;
                }
            }
            if !changed {
                return generating;
            }
        }
    }

    fn accessible_set(&self) -> BTreeSet<String> {
        let mut accessible = BTreeSet::from([self.start.clone()]);
        let mut work = vec![self.start.clone()];
        while let Some(n) = work.pop() {
            for rule in self.rules.iter().filter(|r| r.lhs == n) {
                for sym in &rule.rhs {
                    if let Sym::N(m) = sym {
                        if accessible.insert(m.clone()) {
                            work.push(m.clone());
                        }
                    }
                }
            }
        }
        accessible
    }

    /// Keeps exactly the accessible and co-accessible nonterminals and the
    /// rules over them; fails with `EmptyLanguage` when the start symbol
    /// generates nothing.
    pub fn reduce(&self) -> Result<Grammar> {
        let generating = self.generating_set();
        if !generating.contains(&self.start) {
            return Err(Error::EmptyLanguage);
        }
        let keep = |rule: &Rule, set: &BTreeSet<String>| {
            set.contains(&rule.lhs)
                && rule.rhs.iter().all(|s| match s {
                    Sym::T(_) => true,
                    Sym::N(n) => set.contains(n),
                })
        };
        let intermediate = Grammar {
            nonterminals: generating.clone(),
            terminals: self.terminals.clone(),
            start: self.start.clone(),
            rules: self
                .rules
                .iter()
                .filter(|r| keep(r, &generating))
                .cloned()
                .collect(),
        };
        let accessible = intermediate.accessible_set();
        let rules: Vec<Rule> = intermediate
            .rules
            .into_iter()
            .filter(|r| accessible.contains(&r.lhs))
            .collect();
        Grammar::new(self.start.clone(), rules)
    }

    /// Nonterminals that derive the empty word.
    pub fn nullable_set(&self) -> BTreeSet<String> {
        let mut nullable = BTreeSet::new();
        loop {
            let mut changed = false;
            for rule in &self.rules {
                if nullable.contains(&rule.lhs) {
                    continue;
                }
                let ok = rule.rhs.iter().all(|s| match s {
                    Sym::T(_) => false,
                    Sym::N(n) => nullable.contains(n),
                });
                if ok {
                    nullable.insert(rule.lhs.clone());
                    changed = true;
                }
            }
            if !changed {
                return nullable;
            }
        }
    }

    /// Equivalent grammar with no λ-productions and no chain-productions.
    /// Fails with `EpsilonInLanguage` when the start symbol is nullable.
    pub fn make_proper(&self) -> Result<Grammar> {
        let nullable = self.nullable_set();
        if nullable.contains(&self.start) {
            return Err(Error::EpsilonInLanguage);
        }

        // λ-elimination: every way of dropping nullable occurrences, minus
        // the empty variant.
        let mut no_lambda: Vec<Rule> = Vec::new();
        let mut seen: BTreeSet<(String, Vec<Sym>)> = BTreeSet::new();
        for rule in &self.rules {
            let optional: Vec<usize> = rule
                .rhs
                .iter()
                .enumerate()
                .filter_map(|(i, s)| match s {
                    Sym::N(n) if nullable.contains(n) => Some(i),
                    _ => None,
                })
                .collect();
            let k = optional.len();
            for mask in 0..(1u32 << k) {
                let drop: BTreeSet<usize> = (0..k)
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
                if rhs.is_empty() {
                    continue;
                }
                if seen.insert((rule.lhs.clone(), rhs.clone())) {
                    no_lambda.push(Rule::new(rule.lhs.clone(), rhs));
                }
            }
        }

        // chain-elimination over the unit-pair closure
        let is_chain =
            |r: &Rule| r.rhs.len() == 1 && !r.rhs[0].is_terminal();
        let mut rules: Vec<Rule> = Vec::new();
        let mut emitted: BTreeSet<(String, Vec<Sym>)> = BTreeSet::new();
        for head in self.nonterminals.iter() {
            // unit closure of `head` within the λ-free rule set
            let mut closure = BTreeSet::from([head.clone()]);
            let mut work = vec![head.clone()];
            while let Some(n) = work.pop() {
                for rule in no_lambda.iter().filter(|r| r.lhs == n && is_chain(r)) {
                    if let Sym::N(m) = &rule.rhs[0] {
                        if closure.insert(m.clone()) {
                            work.push(m.clone());
                        }
                    }
                }
            }
            for rule in no_lambda.iter() {
                if closure.contains(&rule.lhs) && !is_chain(rule) {
                    let key = (head.clone(), rule.rhs.clone());
                    if emitted.insert(key) {
                        rules.push(Rule::new(head.clone(), rule.rhs.clone()));
                    }
                }
            }
        }
        rules.retain(|r| !r.rhs.is_empty());
        Grammar::new(self.start.clone(), rules)
    }

    /// `reduce` then `make_proper` then `reduce` again; the standard
    /// preparation before any measure computation.
    pub fn prepared(&self) -> Result<Grammar> {
        self.reduce()?.make_proper()?.reduce()
    }

    /// Rewrites a reduced, proper grammar into quasi normal form: every rule
    /// is `A -> a`, `A -> aB`, or `A -> α` with `α` nonterminal-only of
    /// length at least two. The rewrite maps each application of a
    /// non-regular rule to exactly one application of a non-regular rule, so
    /// the non-regularity degree of every word is unchanged.
    pub fn to_quasi_normal_form(&self) -> Result<Grammar> {
        if !self.is_proper() || !self.is_reduced() {
            return Err(Error::NotProper);
        }
        let mut fresh = FreshNames::new();
        let mut wrappers: BTreeMap<char, String> = BTreeMap::new();
        let mut rules: Vec<Rule> = Vec::new();
        let mut wrapper_rules: Vec<Rule> = Vec::new();
        for rule in &self.rules {
            match classify_rule(rule) {
                RuleClass::Regular => {
                    // split w / wB into a chain of A -> aB steps
                    let (terminals, tail): (Vec<char>, Option<String>) = {
                        let mut ts = Vec::new();
                        let mut tail = None;
                        for sym in &rule.rhs {
                            match sym {
                                Sym::T(c) => ts.push(*c),
                                Sym::N(n) => tail = Some(n.clone()),
                            }
                        }
                        (ts, tail)
                    };
                    emit_regular_chain(&mut rules, &mut fresh, &rule.lhs, &terminals, tail);
                }
                RuleClass::NonRegular => {
                    let prefix_len = rule
                        .rhs
                        .iter()
                        .take_while(|s| s.is_terminal())
                        .count();
                    let body: Vec<Sym> = rule.rhs[prefix_len..]
                        .iter()
                        .map(|sym| match sym {
                            Sym::N(n) => Sym::N(n.clone()),
                            Sym::T(c) => {
                                let name = wrappers.entry(*c).or_insert_with(|| {
                                    let name = fresh.next_name();
                                    wrapper_rules.push(Rule::new(name.clone(), vec![Sym::T(*c)]));
                                    name
                                });
                                Sym::N(name.clone())
                            }
                        })
                        .collect();
                    debug_assert!(body.len() >= 2, "non-regular remainder must have >= 2 symbols");
                    let mut head = rule.lhs.clone();
                    for (i, sym) in rule.rhs[..prefix_len].iter().enumerate() {
                        let Sym::T(c) = sym else { unreachable!() };
                        let next = fresh.next_name();
                        rules.push(Rule::new(head, vec![Sym::T(*c), Sym::N(next.clone())]));
                        head = next;
                        let _ = i;
                    }
                    rules.push(Rule::new(head, body));
                }
            }
        }
        rules.extend(wrapper_rules);
        Grammar::new(self.start.clone(), rules)
    }

    /// Binarizes the nonterminal-only rules of a quasi-normal-form grammar,
    /// giving quasi Chomsky normal form. A rule with right-hand side of
    /// length k becomes k-1 two-nonterminal rules, so the non-regularity
    /// degree inflates by at most that constant factor.
    pub fn to_quasi_chomsky(&self) -> Result<Grammar> {
        if !self.is_quasi_normal_form() {
            return Err(Error::NotQuasiNormalForm);
        }
        let mut fresh = FreshNames::new();
        let mut rules = Vec::new();
        for rule in &self.rules {
            if rule.rhs.len() <= 2 || rule.rhs[0].is_terminal() {
                rules.push(rule.clone());
                continue;
            }
            let mut head = rule.lhs.clone();
            for sym in &rule.rhs[..rule.rhs.len() - 2] {
                let next = fresh.next_name();
                rules.push(Rule::new(head, vec![sym.clone(), Sym::N(next.clone())]));
                head = next;
            }
            rules.push(Rule::new(head, rule.rhs[rule.rhs.len() - 2..].to_vec()));
        }
        Grammar::new(self.start.clone(), rules)
    }

    /// The classical subgrammars: axiom replacement, the regular part, and
    /// the context-free part (the identity for a CFG).
    pub fn subgrammar(&self, which: SubgrammarKind) -> Result<Grammar> {
        match which {
            SubgrammarKind::WithStart(a) => {
                if !self.nonterminals.contains(&a) {
                    return Err(Error::UnknownNonterminal(a));
                }
                Ok(Grammar {
                    nonterminals: self.nonterminals.clone(),
                    terminals: self.terminals.clone(),
                    start: a,
                    rules: self.rules.clone(),
                })
            }
            SubgrammarKind::RegularPart => Ok(Grammar {
                nonterminals: self.nonterminals.clone(),
                terminals: self.terminals.clone(),
                start: self.start.clone(),
                rules: self
                    .rules
                    .iter()
                    .filter(|r| classify_rule(r) == RuleClass::Regular)
                    .cloned()
                    .collect(),
            }),
            SubgrammarKind::ContextFreePart => Ok(self.clone()),
        }
    }
}

fn quasi_shape_ok(rule: &Rule, binary: bool) -> bool {
    match rule.rhs.as_slice() {
        [Sym::T(_)] => true,
        [Sym::T(_), Sym::N(_)] => true,
        rhs if rhs.len() >= 2 && rhs.iter().all(|s| !s.is_terminal()) => {
            !binary || rhs.len() == 2
        }
        _ => false,
    }
}

fn emit_regular_chain(
    rules: &mut Vec<Rule>,
    fresh: &mut FreshNames,
    lhs: &str,
    terminals: &[char],
    tail: Option<String>,
) {
    match (terminals, &tail) {
        ([], Some(_)) => unreachable!("chain rule in a proper grammar"),
        ([], None) => unreachable!("lambda rule in a proper grammar"),
        ([c], None) => rules.push(Rule::new(lhs, vec![Sym::T(*c)])),
        ([c], Some(b)) => rules.push(Rule::new(lhs, vec![Sym::T(*c), Sym::N(b.clone())])),
        _ => {
            let mut head = lhs.to_string();
            for c in &terminals[..terminals.len() - 1] {
                let next = fresh.next_name();
                rules.push(Rule::new(head, vec![Sym::T(*c), Sym::N(next.clone())]));
                head = next;
            }
            let last = *terminals.last().unwrap();
            let rhs = match tail {
                Some(b) => vec![Sym::T(last), Sym::N(b)],
                None => vec![Sym::T(last)],
            };
            rules.push(Rule::new(head, rhs));
        }
    }
}

/// Fresh nonterminal names `X#k`; user names may not contain `#`, so these
/// never collide, and the counter runs in rule order so transformations are
/// reproducible byte for byte.
struct FreshNames {
    counter: u32,
}

impl FreshNames {
    fn new() -> FreshNames {
        FreshNames { counter: 0 }
    }

    fn next_name(&mut self) -> String {
        let name = format!("X#{}", self.counter);
        self.counter += 1;
        name
    }
}

fn parse_symbol(tok: &str, line: usize) -> Result<Sym> {
    let mut chars = tok.chars();
    let first = chars.next().unwrap();
    if first.is_ascii_lowercase() {
        if tok.len() == 1 {
            return Ok(Sym::T(first));
        }
        return Err(Error::Syntax {
            line,
            msg: format!("terminal `{tok}` must be a single lowercase letter"),
        });
    }
    if valid_nonterminal_name(tok) && !tok.contains('#') {
        return Ok(Sym::N(tok.to_string()));
    }
    Err(Error::Syntax {
        line,
        msg: format!("token `{tok}` is neither a terminal nor a nonterminal"),
    })
}

impl fmt::Display for Grammar {
    /// Canonical file rendering; alternatives of consecutive rules with the
    /// same head are grouped with `|`, so `parse . render` is the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        let mut i = 0;
        while i < self.rules.len() {
            let head = &self.rules[i].lhs;
            let mut alts = Vec::new();
            while i < self.rules.len() && self.rules[i].lhs == *head {
                let rhs = &self.rules[i].rhs;
                if rhs.is_empty() {
                    alts.push("_".to_string());
                } else {
                    let toks: Vec<String> = rhs.iter().map(|s| s.to_string()).collect();
                    alts.push(toks.join(" "));
                }
                i += 1;
            }
            writeln!(f, "{head} -> {}", alts.join(" | "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn anbn() -> Grammar {
        Grammar::parse("start: S\nS -> a S b | a b\n").unwrap()
    }

    #[test]
    fn parse_basic_grammar() {
        let g = anbn();
        assert_eq!(g.rules().len(), 2);
        assert_eq!(g.start(), "S");
        assert_eq!(g.terminals().len(), 2);
    }

    #[test]
    fn parse_lambda_rule() {
        let g = Grammar::parse("start: S\nS -> _\n").unwrap();
        assert_eq!(g.rules().len(), 1);
        assert!(g.rules()[0].rhs.is_empty());
    }

    #[test]
    fn missing_start_line_rejected() {
        assert_eq!(Grammar::parse("S -> a\n"), Err(Error::MissingStart));
    }

    #[test]
    fn undeclared_start_rejected() {
        let err = Grammar::parse("start: Q\nS -> a\n").unwrap_err();
        assert_eq!(err, Error::UndeclaredStart("Q".into()));
    }

    #[test]
    fn classify_examples() {
        let non_reg = Rule::new("S", vec![Sym::T('a'), Sym::N("S".into()), Sym::T('b')]);
        assert_eq!(classify_rule(&non_reg), RuleClass::NonRegular);
        let reg = Rule::new("S", vec![Sym::T('a'), Sym::T('b'), Sym::N("B".into())]);
        assert_eq!(classify_rule(&reg), RuleClass::Regular);
        let lambda = Rule::new("S", vec![]);
        assert_eq!(classify_rule(&lambda), RuleClass::Regular);
    }

    #[test]
    fn reduce_drops_unreachable() {
        let g = Grammar::parse("start: S\nS -> a b\nU -> a\n").unwrap();
        let r = g.reduce().unwrap();
        assert_eq!(r.rules().len(), 1);
        assert!(!r.nonterminals().contains("U"));
    }

    #[test]
    fn reduce_idempotent_on_reduced() {
        let g = anbn();
        assert_eq!(g.reduce().unwrap(), g);
        assert!(g.is_reduced());
    }

    #[test]
    fn reduce_rejects_empty_language() {
        let g = Grammar::parse("start: S\nS -> a S\n").unwrap();
        assert_eq!(g.reduce(), Err(Error::EmptyLanguage));
    }

    #[test]
    fn make_proper_eliminates_chains() {
        let g = Grammar::parse("start: S\nS -> a S b | X\nX -> a b\n").unwrap();
        let p = g.make_proper().unwrap();
        assert!(p.is_proper());
        assert!(p
            .rules()
            .iter()
            .any(|r| r.lhs == "S" && r.rhs == vec![Sym::T('a'), Sym::T('b')]));
    }

    #[test]
    fn make_proper_rejects_nullable_start() {
        let g = Grammar::parse("start: S\nS -> _\n").unwrap();
        assert_eq!(g.make_proper(), Err(Error::EpsilonInLanguage));
    }

    #[test]
    fn make_proper_drops_lambda_rules() {
        // S -> aBb with B nullable
        let g = Grammar::parse("start: S\nS -> a B b\nB -> b | _\n").unwrap();
        let p = g.make_proper().unwrap();
        assert!(p.is_proper());
        // both the B-present and B-dropped variants exist
        assert!(p.rules().iter().any(|r| r.lhs == "S" && r.rhs.len() == 3));
        assert!(p
            .rules()
            .iter()
            .any(|r| r.lhs == "S" && r.rhs == vec![Sym::T('a'), Sym::T('b')]));
    }

    #[test]
    fn quasi_normal_form_shapes() {
        let q = anbn().to_quasi_normal_form().unwrap();
        assert!(q.is_quasi_normal_form());
        // one non-regular rule per original non-regular rule
        let nr = |g: &Grammar| {
            g.rules()
                .iter()
                .filter(|r| classify_rule(r) == RuleClass::NonRegular)
                .count()
        };
        assert_eq!(nr(&anbn()), 1);
        assert_eq!(nr(&q), 1);
    }

    #[test]
    fn quasi_normal_form_fixpoint() {
        let q = anbn().to_quasi_normal_form().unwrap();
        assert_eq!(q.to_quasi_normal_form().unwrap(), q);
    }

    #[test]
    fn terminal_only_rule_splits_into_regular_chain() {
        let g = Grammar::parse("start: S\nS -> a b c\n").unwrap();
        let q = g.to_quasi_normal_form().unwrap();
        assert!(q.is_quasi_normal_form());
        assert_eq!(q.rules().len(), 3);
        assert!(q.rules().iter().all(|r| classify_rule(r) == RuleClass::Regular));
    }

    #[test]
    fn quasi_chomsky_binarizes() {
        let g = Grammar::parse("start: S\nS -> A B C\nA -> a\nB -> b\nC -> c\n").unwrap();
        let q = g.to_quasi_normal_form().unwrap().to_quasi_chomsky().unwrap();
        assert!(q.is_quasi_chomsky());
        assert!(q.rules().iter().all(|r| r.rhs.len() <= 2));
    }

    #[test]
    fn subgrammar_regular_part() {
        let g = anbn();
        let reg = g.subgrammar(SubgrammarKind::RegularPart).unwrap();
        assert_eq!(reg.rules().len(), 1);
        let with_start = g.subgrammar(SubgrammarKind::WithStart("S".into())).unwrap();
        assert_eq!(with_start.rules(), g.rules());
        assert!(g
            .subgrammar(SubgrammarKind::WithStart("Z".into()))
            .is_err());
        assert_eq!(g.subgrammar(SubgrammarKind::ContextFreePart).unwrap(), g);
    }

    #[test]
    fn render_parse_round_trip() {
        let g = anbn();
        assert_eq!(Grammar::parse(&g.to_string()).unwrap(), g);
        let rendered = g.to_string();
        assert_eq!(rendered, "start: S\nS -> a S b | a b\n");
    }

    #[test]
    fn transformations_are_deterministic() {
        let g = Grammar::parse("start: S\nS -> a S b a | a b\n").unwrap();
        let q1 = g.to_quasi_normal_form().unwrap();
        let q2 = g.to_quasi_normal_form().unwrap();
        assert_eq!(q1.to_string(), q2.to_string());
    }

    proptest::proptest! {
        /// classify_rule against an independent shape-regex oracle: encode
        /// the right-hand side as `t`/`N` letters and match `^t*N?$`.
        #[test]
        fn classify_matches_shape_regex(shape in proptest::collection::vec(0..=1usize, 0..8)) {
            let rhs: Vec<Sym> = shape
                .iter()
                .map(|&b| if b == 0 { Sym::T('a') } else { Sym::N("B".into()) })
                .collect();
            let encoded: String = shape.iter().map(|&b| if b == 0 { 't' } else { 'N' }).collect();
            let re = regex::Regex::new("^t*N?$").unwrap();
            let expected = if re.is_match(&encoded) {
                RuleClass::Regular
            } else {
                RuleClass::NonRegular
            };
            let rule = Rule::new("A", rhs);
            proptest::prop_assert_eq!(classify_rule(&rule), expected);
        }
    }
}
