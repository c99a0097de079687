//! Per-length measure profiles: the map `n -> max measure over words of
//! length n`, the empirical object the growth fits run on.

use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    entries: BTreeMap<u32, u64>,
    exhaustive_up_to: u32,
}

impl Profile {
    /// Zero-initialized profile covering lengths `1..=n_max`.
    pub fn new(n_max: u32) -> Profile {
        Profile {
            entries: (1..=n_max).map(|n| (n, 0)).collect(),
            exhaustive_up_to: n_max,
        }
    }

    pub fn set(&mut self, n: u32, value: u64) {
        debug_assert!(n >= 1 && n <= self.exhaustive_up_to);
        self.entries.insert(n, value);
    }

    pub fn get(&self, n: u32) -> u64 {
        self.entries.get(&n).copied().unwrap_or(0)
    }

    pub fn exhaustive_up_to(&self) -> u32 {
        self.exhaustive_up_to
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.entries.iter().map(|(&n, &v)| (n, v))
    }

    /// CSV rendering: a `n,value` header then one row per length, sorted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, v) in self.iter() {
            let _ = writeln!(out, "{n},{v}");
        }
        out
    }

    /// Pointwise scaling; used by the fit order-stability tests.
    pub fn scaled(&self, k: u64) -> Profile {
        Profile {
            entries: self.entries.iter().map(|(&n, &v)| (n, v * k)).collect(),
            exhaustive_up_to: self.exhaustive_up_to,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_sorted_rows() {
        let mut p = Profile::new(3);
        p.set(2, 5);
        assert_eq!(p.to_csv(), "n,value\n1,0\n2,5\n3,0\n");
    }
}
