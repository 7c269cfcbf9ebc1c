use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0 .. n-1}`, stored as its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Validates that `images` is a bijection on `{0 .. n-1}`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![usize::MAX; n];
        for (i, &v) in images.iter().enumerate() {
            if v >= n {
                return Err(Error::EntryRange {
                    index: i,
                    value: v,
                    order: n,
                });
            }
            if seen[v] != usize::MAX {
                return Err(Error::NotABijection(seen[v], i));
            }
            seen[v] = i;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `self` after `other`: the result maps `x` to `self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: (0..self.degree()).map(|x| self.apply(other.apply(x))).collect(),
        }
    }

    /// All permutations of `{0 .. n-1}` in lexicographic order of their image sequences.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == n {
                out.push(Permutation {
                    images: current.clone(),
                });
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    current.push(v);
                    rec(n, current, used, out);
                    current.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }

    /// Cycle notation with 1-based labels, fixed points elided, identity as `(1)`.
    ///
    /// Labels above 9 are space-separated inside a cycle; below that the
    /// rendering is compact, matching the tables this tooling reproduces.
    pub fn cycle_string(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            if cyc.len() > 1 {
                cycles.push(cyc);
            }
        }
        if cycles.is_empty() {
            return "(1)".to_string();
        }
        let sep = if n > 9 { " " } else { "" };
        cycles
            .iter()
            .map(|cyc| {
                let labels: Vec<String> = cyc.iter().map(|&x| (x + 1).to_string()).collect();
                format!("({})", labels.join(sep))
            })
            .collect::<Vec<_>>()
            .join("")
    }

    /// Parses cycle notation back into a permutation on `{0 .. n-1}`.
    ///
    /// Accepts both `(12)` and `(1 2)` spellings; `(1)` denotes the identity.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let mut images: Vec<usize> = (0..n).collect();
        let mut moved = vec![false; n];
        let bad = |msg: &str| Error::PermColumns(format!("{msg}: {text:?}"));
        if text.is_empty() {
            return Err(bad("empty cycle text"));
        }
        let mut rest = text;
        let mut any_cycle = false;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            if !rest_trim.starts_with('(') {
                return Err(bad("expected '('"));
            }
            let close = rest_trim
                .find(')')
                .ok_or_else(|| bad("unbalanced parenthesis"))?;
            let body = &rest_trim[1..close];
            rest = &rest_trim[close + 1..];
            let labels: Vec<usize> = if n > 9 || body.contains(' ') {
                body.split_whitespace()
                    .map(|tok| tok.parse::<usize>().map_err(|_| bad("bad label")))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("bad label")))
                    .collect::<Result<_>>()?
            };
            if labels.is_empty() {
                return Err(bad("empty cycle"));
            }
            for &l in &labels {
                if l == 0 || l > n {
                    return Err(bad("label out of range"));
                }
            }
            if labels.len() == 1 {
                any_cycle = true;
                continue; // explicit fixed point, e.g. "(1)"
            }
            for i in 0..labels.len() {
                let from = labels[i] - 1;
                let to = labels[(i + 1) % labels.len()] - 1;
                if moved[from] {
                    return Err(bad("label repeated across cycles"));
                }
                moved[from] = true;
                images[from] = to;
            }
            any_cycle = true;
        }
        if !any_cycle {
            return Err(bad("no cycles"));
        }
        Permutation::from_images(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
        assert_eq!(p.inverse().compose(&p), Permutation::identity(3));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 2]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn all_is_lexicographic() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].images(), &[0, 1, 2]);
        assert_eq!(all[5].images(), &[2, 1, 0]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn cycle_strings() {
        assert_eq!(Permutation::identity(3).cycle_string(), "(1)");
        let sw = Permutation::from_images(vec![1, 0, 2]).unwrap();
        assert_eq!(sw.cycle_string(), "(12)");
        let rot = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(rot.cycle_string(), "(123)");
        let two = Permutation::from_images(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(two.cycle_string(), "(12)(34)");
    }

    #[test]
    fn parse_round_trip() {
        for p in Permutation::all(4) {
            let parsed = Permutation::parse_cycles(&p.cycle_string(), 4).unwrap();
            assert_eq!(parsed, p);
        }
        // spaced spelling from the published tables
        let p = Permutation::parse_cycles("(1 3 2)", 3).unwrap();
        assert_eq!(p.images(), &[2, 0, 1]);
        assert_eq!(
            Permutation::parse_cycles("(132)", 3).unwrap().images(),
            &[2, 0, 1]
        );
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(Permutation::parse_cycles("", 3).is_err());
        assert!(Permutation::parse_cycles("(14)", 3).is_err());
        assert!(Permutation::parse_cycles("(12)(13)", 3).is_err());
        assert!(Permutation::parse_cycles("(12", 3).is_err());
    }
}
