//! Group arithmetic for automaton registers: `Z^k`, `Z mod m`, free groups of
//! finite rank, and flat direct products of those.
//!
//! Elements are immutable values. Free-group words are kept reduced at all
//! times; `Z^k` entries are arbitrary-precision so register contents can grow
//! with the input length without overflowing.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// Which group a register ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    /// Additive group of integer vectors of the given positive size.
    Zk(u32),
    /// Additive group of integers modulo `m`, `m >= 2`.
    ZMod(u64),
    /// Free group of the given positive rank.
    Free(u32),
    /// Finite direct product; the component list is non-empty and flat.
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    /// Builds a product spec, enforcing non-emptiness and flatness.
    pub fn product(components: Vec<GroupSpec>) -> Result<GroupSpec> {
        if components.is_empty() {
            return Err(Error::Invalid("empty product of groups".into()));
        }
        if components.iter().any(|c| matches!(c, GroupSpec::Product(_))) {
            return Err(Error::Invalid("nested product of groups".into()));
        }
        Ok(GroupSpec::Product(components))
    }

    fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Zk(k) if *k == 0 => Err(Error::Invalid("Z^0 is not supported".into())),
            GroupSpec::ZMod(m) if *m < 2 => Err(Error::Invalid("Zmod needs modulus >= 2".into())),
            GroupSpec::Free(r) if *r == 0 => Err(Error::Invalid("F 0 is not supported".into())),
            GroupSpec::Product(cs) => {
                if cs.is_empty() {
                    return Err(Error::Invalid("empty product of groups".into()));
                }
                for c in cs {
                    if matches!(c, GroupSpec::Product(_)) {
                        return Err(Error::Invalid("nested product of groups".into()));
                    }
                    c.validate()?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Parses a spec literal: `Z^k`, `Zmod m`, `F r`, or components joined
    /// with ` x `.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let parts: Vec<&str> = text.split(" x ").map(str::trim).collect();
        let spec = if parts.len() == 1 {
            Self::parse_atom(parts[0])?
        } else {
            GroupSpec::Product(
                parts
                    .iter()
                    .map(|p| Self::parse_atom(p))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        spec.validate()?;
        Ok(spec)
    }

    fn parse_atom(text: &str) -> Result<GroupSpec> {
        let bad = || Error::Invalid(format!("cannot parse group spec `{text}`"));
        if let Some(k) = text.strip_prefix("Z^") {
            return k.trim().parse().map(GroupSpec::Zk).map_err(|_| bad());
        }
        if let Some(m) = text.strip_prefix("Zmod") {
            return m.trim().parse().map(GroupSpec::ZMod).map_err(|_| bad());
        }
        if let Some(r) = text.strip_prefix('F') {
            return r.trim().parse().map(GroupSpec::Free).map_err(|_| bad());
        }
        Err(bad())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Zk(k) => write!(f, "Z^{k}"),
            GroupSpec::ZMod(m) => write!(f, "Zmod {m}"),
            GroupSpec::Free(r) => write!(f, "F {r}"),
            GroupSpec::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Value {
    Ints(Vec<BigInt>),
    Residue(u64),
    /// Reduced word over generators; `i > 0` is generator `g_i`, `-i` its
    /// inverse. No adjacent cancelling pair.
    Word(Vec<i32>),
    Tuple(Vec<Value>),
}

/// An element of one of the supported groups, tagged with its spec.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    spec: GroupSpec,
    value: Value,
}

/// The neutral element of the given group.
pub fn identity(spec: &GroupSpec) -> GroupElement {
    let value = identity_value(spec);
    GroupElement {
        spec: spec.clone(),
        value,
    }
}

fn identity_value(spec: &GroupSpec) -> Value {
    match spec {
        GroupSpec::Zk(k) => Value::Ints(vec![BigInt::zero(); *k as usize]),
        GroupSpec::ZMod(_) => Value::Residue(0),
        GroupSpec::Free(_) => Value::Word(Vec::new()),
        GroupSpec::Product(cs) => Value::Tuple(cs.iter().map(identity_value).collect()),
    }
}

/// Concatenates two reduced words and cancels at the seam.
fn word_concat(a: &[i32], b: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = a.to_vec();
    for &g in b {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

fn mul_values(spec: &GroupSpec, a: &Value, b: &Value) -> Value {
    match (spec, a, b) {
        (GroupSpec::Zk(_), Value::Ints(x), Value::Ints(y)) => {
            Value::Ints(x.iter().zip(y).map(|(p, q)| p + q).collect())
        }
        (GroupSpec::ZMod(m), Value::Residue(x), Value::Residue(y)) => {
            Value::Residue((x + y) % m)
        }
        (GroupSpec::Free(_), Value::Word(x), Value::Word(y)) => Value::Word(word_concat(x, y)),
        (GroupSpec::Product(cs), Value::Tuple(xs), Value::Tuple(ys)) => Value::Tuple(
            cs.iter()
                .zip(xs.iter().zip(ys))
                .map(|(c, (x, y))| mul_values(c, x, y))
                .collect(),
        ),
        _ => unreachable!("value does not match its spec"),
    }
}

fn inv_value(spec: &GroupSpec, v: &Value) -> Value {
    match (spec, v) {
        (GroupSpec::Zk(_), Value::Ints(x)) => Value::Ints(x.iter().map(|p| -p).collect()),
        (GroupSpec::ZMod(m), Value::Residue(x)) => Value::Residue(if *x == 0 { 0 } else { m - x }),
        (GroupSpec::Free(_), Value::Word(x)) => Value::Word(x.iter().rev().map(|g| -g).collect()),
        (GroupSpec::Product(cs), Value::Tuple(xs)) => {
            Value::Tuple(cs.iter().zip(xs).map(|(c, x)| inv_value(c, x)).collect())
        }
        _ => unreachable!("value does not match its spec"),
    }
}

fn value_is_identity(v: &Value) -> bool {
    match v {
        Value::Ints(x) => x.iter().all(|p| p.is_zero()),
        Value::Residue(x) => *x == 0,
        Value::Word(x) => x.is_empty(),
        Value::Tuple(xs) => xs.iter().all(value_is_identity),
    }
}

impl GroupElement {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Group product. Fails when the operands live in different groups.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(
                self.spec.to_string(),
                other.spec.to_string(),
            ));
        }
        Ok(GroupElement {
            spec: self.spec.clone(),
            value: mul_values(&self.spec, &self.value, &other.value),
        })
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement {
            spec: self.spec.clone(),
            value: inv_value(&self.spec, &self.value),
        }
    }

    pub fn is_identity(&self) -> bool {
        value_is_identity(&self.value)
    }

    /// Builds a `Z^k` element from plain integers.
    pub fn from_ints(k: u32, entries: &[i64]) -> Result<GroupElement> {
        if entries.len() != k as usize {
            return Err(Error::Invalid(format!(
                "expected {k} entries, got {}",
                entries.len()
            )));
        }
        Ok(GroupElement {
            spec: GroupSpec::Zk(k),
            value: Value::Ints(entries.iter().map(|&e| BigInt::from(e)).collect()),
        })
    }

    /// Builds a `Zmod m` element, reducing the argument into `[0, m)`.
    pub fn from_residue(m: u64, r: i64) -> GroupElement {
        GroupElement {
            spec: GroupSpec::ZMod(m),
            value: Value::Residue(r.rem_euclid(m as i64) as u64),
        }
    }

    /// Builds a free-group element from signed generator indices and reduces
    /// it.
    pub fn from_word(rank: u32, letters: &[i32]) -> Result<GroupElement> {
        for &g in letters {
            if g == 0 || g.unsigned_abs() > rank {
                return Err(Error::Invalid(format!(
                    "generator index {g} out of range for F {rank}"
                )));
            }
        }
        let mut reduced = Vec::new();
        for &g in letters {
            if reduced.last() == Some(&-g) {
                reduced.pop();
            } else {
                reduced.push(g);
            }
        }
        Ok(GroupElement {
            spec: GroupSpec::Free(rank),
            value: Value::Word(reduced),
        })
    }

    /// Builds a product element from its components.
    pub fn from_components(components: Vec<GroupElement>) -> Result<GroupElement> {
        let spec = GroupSpec::product(components.iter().map(|c| c.spec.clone()).collect())?;
        Ok(GroupElement {
            spec,
            value: Value::Tuple(components.into_iter().map(|c| c.value).collect()),
        })
    }

    /// Parses an element literal for the given spec. Literals: `[1,-2]` for
    /// `Z^k`, a residue integer for `Zmod m`, a word such as `g1 g2 G1` (with
    /// `G` marking inverses, `1` the empty word) for free groups, and
    /// `( e1 ; e2 ; ... )` for products.
    pub fn parse(spec: &GroupSpec, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        let bad = |msg: &str| Error::Invalid(format!("cannot parse element `{text}`: {msg}"));
        let value = match spec {
            GroupSpec::Zk(k) => {
                let inner = text
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| bad("expected [i1,...,ik]"))?;
                let entries: Vec<BigInt> = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|p| p.trim().parse::<BigInt>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad("bad integer entry"))?
                };
                if entries.len() != *k as usize {
                    return Err(bad(&format!("expected {k} entries")));
                }
                Value::Ints(entries)
            }
            GroupSpec::ZMod(m) => {
                let r: i64 = text.parse().map_err(|_| bad("expected an integer"))?;
                Value::Residue(r.rem_euclid(*m as i64) as u64)
            }
            GroupSpec::Free(rank) => {
                if text == "1" {
                    Value::Word(Vec::new())
                } else {
                    let mut letters = Vec::new();
                    for tok in text.split_whitespace() {
                        let (inverse, idx) = match tok.chars().next() {
                            Some('g') => (false, &tok[1..]),
                            Some('G') => (true, &tok[1..]),
                            _ => return Err(bad("expected g<i> or G<i> tokens")),
                        };
                        let i: u32 = idx.parse().map_err(|_| bad("bad generator index"))?;
                        if i == 0 || i > *rank {
                            return Err(bad("generator index out of range"));
                        }
                        letters.push(if inverse { -(i as i32) } else { i as i32 });
                    }
                    return GroupElement::from_word(*rank, &letters);
                }
            }
            GroupSpec::Product(cs) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad("expected ( e1 ; e2 ; ... )"))?;
                let parts: Vec<&str> = inner.split(';').collect();
                if parts.len() != cs.len() {
                    return Err(bad(&format!("expected {} components", cs.len())));
                }
                let comps: Vec<GroupElement> = cs
                    .iter()
                    .zip(parts)
                    .map(|(c, p)| GroupElement::parse(c, p))
                    .collect::<Result<_>>()?;
                Value::Tuple(comps.into_iter().map(|c| c.value).collect())
            }
        };
        Ok(GroupElement {
            spec: spec.clone(),
            value,
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_value(&self.value, f)
    }
}

fn fmt_value(v: &Value, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match v {
        Value::Ints(xs) => {
            let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
        Value::Residue(r) => write!(f, "{r}"),
        Value::Word(w) => {
            if w.is_empty() {
                return write!(f, "1");
            }
            let parts: Vec<String> = w
                .iter()
                .map(|&g| {
                    if g > 0 {
                        format!("g{g}")
                    } else {
                        format!("G{}", -g)
                    }
                })
                .collect();
            write!(f, "{}", parts.join(" "))
        }
        Value::Tuple(xs) => {
            write!(f, "( ")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, " ; ")?;
                }
                fmt_value(x, f)?;
            }
            write!(f, " )")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zk(entries: &[i64]) -> GroupElement {
        GroupElement::from_ints(entries.len() as u32, entries).unwrap()
    }

    #[test]
    fn identities() {
        assert_eq!(identity(&GroupSpec::Zk(2)), zk(&[0, 0]));
        assert!(identity(&GroupSpec::Free(2)).is_identity());
        let p = GroupSpec::parse("Z^1 x Zmod 2").unwrap();
        let id = identity(&p);
        assert_eq!(id.to_string(), "( [0] ; 0 )");
    }

    #[test]
    fn zk_inverse_pair_cancels() {
        let a = zk(&[3]);
        let b = zk(&[-3]);
        assert!(a.mul(&b).unwrap().is_identity());
        assert_eq!(zk(&[5]).inv(), zk(&[-5]));
    }

    #[test]
    fn zmod_addition_wraps() {
        let one = GroupElement::from_residue(2, 1);
        assert!(one.mul(&one).unwrap().is_identity());
    }

    #[test]
    fn free_mul_reduces_at_seam() {
        // (g1 g2) * (G2 g1) = g1 g1
        let a = GroupElement::from_word(2, &[1, 2]).unwrap();
        let b = GroupElement::from_word(2, &[-2, 1]).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, GroupElement::from_word(2, &[1, 1]).unwrap());
    }

    #[test]
    fn free_inverse_is_antihomomorphism() {
        let a = GroupElement::from_word(2, &[1, 2]).unwrap();
        assert_eq!(a.inv(), GroupElement::from_word(2, &[-2, -1]).unwrap());
        assert!(a.mul(&a.inv()).unwrap().is_identity());
    }

    #[test]
    fn product_inverse_componentwise() {
        let e = GroupElement::from_components(vec![zk(&[1]), GroupElement::from_residue(2, 1)])
            .unwrap();
        let inv = e.inv();
        assert_eq!(inv.to_string(), "( [-1] ; 1 )");
        assert!(e.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn parse_display_round_trip() {
        let cases = [
            ("Z^2", "[1,-1]"),
            ("Zmod 5", "3"),
            ("F 2", "g1 g2 G1"),
            ("F 2", "1"),
            ("Z^1 x Zmod 2", "( [7] ; 1 )"),
        ];
        for (spec_text, elem_text) in cases {
            let spec = GroupSpec::parse(spec_text).unwrap();
            assert_eq!(spec.to_string(), spec_text);
            let e = GroupElement::parse(&spec, elem_text).unwrap();
            assert_eq!(e.to_string(), elem_text);
        }
    }

    #[test]
    fn parse_already_reduced_word() {
        let spec = GroupSpec::Free(2);
        let e = GroupElement::parse(&spec, "g1 g2 G1").unwrap();
        assert_eq!(e, GroupElement::from_word(2, &[1, 2, -1]).unwrap());
        // an unreduced literal normalizes
        let r = GroupElement::parse(&spec, "g1 G1 g2").unwrap();
        assert_eq!(r, GroupElement::from_word(2, &[2]).unwrap());
    }

    #[test]
    fn spec_mismatch_rejected() {
        let a = zk(&[1]);
        let b = GroupElement::from_residue(2, 1);
        assert!(matches!(a.mul(&b), Err(Error::SpecMismatch(_, _))));
    }

    /// Reduces a word by repeatedly scanning for any cancelling pair, the
    /// slow way. Confluence check for the incremental reduction.
    fn naive_reduce(word: &[i32]) -> Vec<i32> {
        let mut w = word.to_vec();
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < w.len() {
                if w[i] == -w[i + 1] {
                    w.drain(i..=i + 1);
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return w;
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn free_reduction_matches_naive_oracle(raw in proptest::collection::vec(-3i32..=3, 0..20)) {
            let letters: Vec<i32> = raw.into_iter().filter(|&g| g != 0).collect();
            let fast = GroupElement::from_word(3, &letters).unwrap();
            let slow = GroupElement::from_word(3, &naive_reduce(&letters)).unwrap();
            proptest::prop_assert_eq!(fast, slow);
        }

        #[test]
        fn zk_associativity(a in proptest::collection::vec(-50i64..=50, 3),
                            b in proptest::collection::vec(-50i64..=50, 3),
                            c in proptest::collection::vec(-50i64..=50, 3)) {
            let (a, b, c) = (zk(&a), zk(&b), zk(&c));
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            proptest::prop_assert_eq!(left, right);
        }
    }
}
