//! The bundled example devices: the machines and grammars every oracle
//! cross-validation suite runs against, and the sources for the CLI's
//! `build-example` subcommand.

use crate::efa::{self, Efa, EfaTransition};
use crate::fatl::{self, Fatl};
use crate::grammar::Grammar;
use crate::groups::{GroupElement, GroupSpec};
use crate::pda::{Pda, PdaMode, PdaTransition};

/// `{a^n b^n : n >= 1}`, one non-regular rule.
pub fn anbn_grammar() -> Grammar {
    Grammar::parse("start: S\nS -> a S b | a b\n").unwrap()
}

/// `(ab)*a`, right-linear: every rule is regular.
pub fn right_linear_grammar() -> Grammar {
    Grammar::parse("start: S\nS -> a T | a\nT -> b S\n").unwrap()
}

/// The balanced rule plus a right-linear cover of `(a|b)+`: every word has a
/// regular derivation, so the degree of non-regularity is identically zero.
pub fn covered_anbn_grammar() -> Grammar {
    Grammar::parse(
        "start: S\nS -> a S b | a b | a R | b R | a | b\nR -> a R | b R | a | b\n",
    )
    .unwrap()
}

/// `{a^n b^n}` with a detour chain rule, for the proper-form tests.
pub fn chain_grammar() -> Grammar {
    Grammar::parse("start: S\nS -> a S b | X\nX -> a b\n").unwrap()
}

pub fn corpus_grammars() -> Vec<(&'static str, Grammar)> {
    vec![
        ("anbn-cfg", anbn_grammar()),
        ("right-linear-cfg", right_linear_grammar()),
        ("covered-anbn-cfg", covered_anbn_grammar()),
    ]
}

/// `{a^n b^n : n >= 1}` accepting by final state; each `a` pushes one
/// counter symbol.
pub fn anbn_pda() -> Pda {
    let t = |from: &str, input: Option<char>, top: char, to: &str, write: &str| PdaTransition {
        from: from.into(),
        input,
        top,
        to: to.into(),
        write: write.chars().collect(),
    };
    Pda::new(
        "q0",
        'Z',
        PdaMode::FinalState,
        ["q2".to_string()],
        vec![
            t("q0", Some('a'), 'Z', "q0", "AZ"),
            t("q0", Some('a'), 'A', "q0", "AA"),
            t("q0", Some('b'), 'A', "q1", ""),
            t("q1", Some('b'), 'A', "q1", ""),
            t("q1", None, 'Z', "q2", "Z"),
        ],
    )
    .unwrap()
}

/// The same language accepting by empty stack.
pub fn anbn_pda_empty_stack() -> Pda {
    let t = |from: &str, input: Option<char>, top: char, to: &str, write: &str| PdaTransition {
        from: from.into(),
        input,
        top,
        to: to.into(),
        write: write.chars().collect(),
    };
    Pda::new(
        "q0",
        'Z',
        PdaMode::EmptyStack,
        [],
        vec![
            t("q0", Some('a'), 'Z', "q0", "AZ"),
            t("q0", Some('a'), 'A', "q0", "AA"),
            t("q0", Some('b'), 'A', "q1", ""),
            t("q1", Some('b'), 'A', "q1", ""),
            t("q1", None, 'Z', "q1", ""),
        ],
    )
    .unwrap()
}

/// `a*b*` with neutral moves only: push complexity identically zero.
pub fn neutral_pda() -> Pda {
    let t = |from: &str, input: Option<char>, top: char, to: &str, write: &str| PdaTransition {
        from: from.into(),
        input,
        top,
        to: to.into(),
        write: write.chars().collect(),
    };
    Pda::new(
        "q0",
        'Z',
        PdaMode::FinalState,
        ["q0".to_string(), "q1".to_string()],
        vec![
            t("q0", Some('a'), 'Z', "q0", "Z"),
            t("q0", Some('b'), 'Z', "q1", "Z"),
            t("q1", Some('b'), 'Z', "q1", "Z"),
        ],
    )
    .unwrap()
}

pub fn corpus_pdas() -> Vec<(&'static str, Pda)> {
    vec![
        ("anbn-pda", anbn_pda()),
        ("anbn-pda-empty-stack", anbn_pda_empty_stack()),
        ("neutral-pda", neutral_pda()),
    ]
}

/// `a*b+` with identity labels only: gmc identically zero.
pub fn identity_efa() -> Efa {
    let zero = GroupElement::from_ints(1, &[0]).unwrap();
    let t = |from: &str, letter: char, to: &str| EfaTransition {
        from: from.into(),
        letter,
        to: to.into(),
        elem: zero.clone(),
    };
    Efa::new(
        GroupSpec::Zk(1),
        "q0",
        ["q1".to_string()],
        vec![t("q0", 'a', "q0"), t("q0", 'b', "q1"), t("q1", 'b', "q1")],
    )
    .unwrap()
}

/// Words over {a, b} with an even number of a's, over `Zmod 2`. Parity is
/// tracked twice: in the finite control (for free) and in the register (one
/// flip per a), so the budget languages stabilize at budget 0 already.
pub fn zmod_parity_efa() -> Efa {
    let id = GroupElement::from_residue(2, 0);
    let flip = GroupElement::from_residue(2, 1);
    let t = |from: &str, letter: char, to: &str, elem: &GroupElement| EfaTransition {
        from: from.into(),
        letter,
        to: to.into(),
        elem: elem.clone(),
    };
    Efa::new(
        GroupSpec::ZMod(2),
        "p0",
        ["p0".to_string(), "r".to_string()],
        vec![
            t("p0", 'a', "p1", &id),
            t("p1", 'a', "p0", &id),
            t("p0", 'b', "p0", &id),
            t("p1", 'b', "p1", &id),
            t("p0", 'a', "r", &flip),
            t("r", 'a', "r", &flip),
            t("r", 'b', "r", &id),
        ],
    )
    .unwrap()
}

pub fn corpus_efas() -> Vec<(&'static str, Efa)> {
    vec![
        ("anbn-efa", efa::build_anbn_efa()),
        ("sqrt-efa", efa::build_sqrt_efa()),
        ("identity-efa", identity_efa()),
        ("zmod-parity-efa", zmod_parity_efa()),
    ]
}

/// A total transition map seen as a FATL: no letter is ever translucent, so
/// the jumping complexity is identically zero.
pub fn total_delta_fatl() -> Fatl {
    Fatl::new(
        "u",
        ["v".to_string()],
        [
            ("u".to_string(), 'a', "u".to_string()),
            ("u".to_string(), 'a', "v".to_string()),
            ("u".to_string(), 'b', "u".to_string()),
            ("v".to_string(), 'a', "v".to_string()),
            ("v".to_string(), 'b', "u".to_string()),
            ("v".to_string(), 'b', "v".to_string()),
        ],
    )
    .unwrap()
}

/// `a^i b a^j`: the single b is fetched across any leading a's, so the
/// jumping complexity is the constant 1.
pub fn skip_b_fatl() -> Fatl {
    Fatl::new(
        "s",
        ["t".to_string()],
        [
            ("s".to_string(), 'b', "t".to_string()),
            ("t".to_string(), 'a', "t".to_string()),
        ],
    )
    .unwrap()
}

pub fn corpus_fatls() -> Vec<(&'static str, Fatl)> {
    vec![
        ("paper-fatl", fatl::build_paper_example()),
        ("equal-ab-fatl", fatl::build_equal_ab()),
        ("total-delta-fatl", total_delta_fatl()),
        ("skip-b-fatl", skip_b_fatl()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes_meet_the_floor() {
        assert!(corpus_grammars().len() >= 2);
        assert!(corpus_pdas().len() >= 2);
        assert!(corpus_efas().len() >= 3);
        assert!(corpus_fatls().len() >= 3);
    }

    #[test]
    fn zmod_machine_language_is_even_a_words() {
        let a = zmod_parity_efa();
        assert!(a.accepts("").unwrap());
        assert!(a.accepts("aab").unwrap());
        assert!(a.accepts("baba").unwrap());
        assert!(!a.accepts("a").unwrap());
        assert!(!a.accepts("baaa").unwrap());
        assert_eq!(a.gmc_word("aa").unwrap(), Some(0));
    }

    #[test]
    fn skip_b_language() {
        let m = skip_b_fatl();
        assert!(m.accepts("b").unwrap());
        assert!(m.accepts("aba").unwrap());
        assert!(m.accepts("aab").unwrap());
        assert!(!m.accepts("a").unwrap());
        assert!(!m.accepts("abb").unwrap());
        assert_eq!(m.jc_word("ab").unwrap(), Some(1));
        assert_eq!(m.jc_word("ba").unwrap(), Some(0));
    }
}
