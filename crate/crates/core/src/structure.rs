use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cayley::{lex_tuples, CayleyOp};
use crate::endomap::Endomap;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Axiom levels, ordered by strength. `CrossedSet` is only defined for
/// binary structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Shelf,
    Rack,
    Quandle,
    CrossedSet,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::Shelf => "shelf",
            Level::Rack => "rack",
            Level::Quandle => "quandle",
            Level::CrossedSet => "crossed-set",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shelf" => Ok(Level::Shelf),
            "rack" => Ok(Level::Rack),
            "quandle" => Ok(Level::Quandle),
            "crossed-set" | "crossed_set" | "crossedset" => Ok(Level::CrossedSet),
            other => Err(Error::Format(format!("unknown level {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomKind {
    /// Twisted right self-distributivity.
    Distributivity,
    /// Some right translation is not a bijection.
    TranslationBijectivity,
    /// `T(x, ..., x) != twist(x)`.
    Diagonal,
    /// The binary crossed-set condition.
    CrossedSet,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomKind::Distributivity => "distributivity",
            AxiomKind::TranslationBijectivity => "translation-bijectivity",
            AxiomKind::Diagonal => "diagonal",
            AxiomKind::CrossedSet => "crossed-set",
        };
        write!(f, "{s}")
    }
}

/// First (lexicographic) counterexample for a failed axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: AxiomKind,
    pub witness: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {:?}", self.axiom, self.witness)
    }
}

impl std::error::Error for AxiomViolation {}

/// Outcome of `check_axioms`.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub level: Level,
    pub outcome: std::result::Result<(), AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// A finite carrier with an n-ary operation and a twisting endomap,
/// certified at `level`.
///
/// Values are immutable once built; the only constructors are the
/// validating gate [`FStructure::new`] / [`FStructure::at_highest_level`]
/// and a crate-private unchecked gate used inside the enumerator, which
/// only emits tables it has already verified.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FStructure {
    op: CayleyOp,
    twist: Endomap,
    level: Level,
}

impl FStructure {
    /// Validating gate: checks the axioms for `level` and certifies the value.
    pub fn new(op: CayleyOp, twist: Endomap, level: Level) -> Result<Self> {
        if op.order() != twist.order() {
            return Err(Error::OrderMismatch(op.order(), twist.order()));
        }
        let report = check_axioms_parts(&op, &twist, level)?;
        match report.outcome {
            Ok(()) => Ok(FStructure { op, twist, level }),
            Err(v) => Err(Error::Axiom(v)),
        }
    }

    /// Certifies at the highest passing level (crossed-set is never inferred).
    pub fn at_highest_level(op: CayleyOp, twist: Endomap) -> Result<Self> {
        if op.order() != twist.order() {
            return Err(Error::OrderMismatch(op.order(), twist.order()));
        }
        match highest_level(&op, &twist)? {
            Some(level) => Ok(FStructure { op, twist, level }),
            None => {
                let report = check_axioms_parts(&op, &twist, Level::Shelf)?;
                Err(Error::Axiom(report.outcome.unwrap_err()))
            }
        }
    }

    /// Interior gate for the enumerator: the caller guarantees the axioms.
    pub(crate) fn new_unchecked(op: CayleyOp, twist: Endomap, level: Level) -> Self {
        debug_assert!(check_axioms_parts(&op, &twist, level)
            .map(|r| r.passed())
            .unwrap_or(false));
        FStructure { op, twist, level }
    }

    pub fn op(&self) -> &CayleyOp {
        &self.op
    }

    pub fn twist(&self) -> &Endomap {
        &self.twist
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn arity(&self) -> usize {
        self.op.arity()
    }

    pub fn order(&self) -> usize {
        self.op.order()
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        self.op.eval(args)
    }

    pub fn into_parts(self) -> (CayleyOp, Endomap) {
        (self.op, self.twist)
    }

    pub fn check(&self, level: Level) -> Result<AxiomReport> {
        check_axioms_parts(&self.op, &self.twist, level)
    }

    pub fn right_translation(&self, tail: &[usize]) -> Result<std::result::Result<Permutation, (usize, usize)>> {
        right_translation_parts(&self.op, tail)
    }

    pub fn is_medial(&self) -> std::result::Result<(), Vec<usize>> {
        is_medial_parts(&self.op)
    }

    /// Whether the twist intertwines the operation: `f(T(x..)) == T(f(x)..)`.
    pub fn twist_is_endomorphism(&self) -> std::result::Result<(), Vec<usize>> {
        twist_is_endomorphism_parts(&self.op, &self.twist)
    }
}

/// Highest passing level among shelf/rack/quandle, or `None`.
pub fn highest_level(op: &CayleyOp, twist: &Endomap) -> Result<Option<Level>> {
    if !check_axioms_parts(op, twist, Level::Shelf)?.passed() {
        return Ok(None);
    }
    if !check_axioms_parts(op, twist, Level::Rack)?.passed() {
        return Ok(Some(Level::Shelf));
    }
    if !check_axioms_parts(op, twist, Level::Quandle)?.passed() {
        return Ok(Some(Level::Rack));
    }
    Ok(Some(Level::Quandle))
}

/// Exhaustive axiom check at the requested level. Levels are cumulative:
/// rack checks shelf first, quandle checks rack first, and the binary
/// crossed-set level checks quandle first. The reported witness is the
/// lexicographically first counterexample of the first failing axiom.
pub fn check_axioms_parts(op: &CayleyOp, twist: &Endomap, level: Level) -> Result<AxiomReport> {
    if op.order() != twist.order() {
        return Err(Error::OrderMismatch(op.order(), twist.order()));
    }
    if level == Level::CrossedSet && op.arity() != 2 {
        return Err(Error::UnsupportedLevel {
            level,
            arity: op.arity(),
        });
    }
    let outcome = (|| {
        if let Some(w) = distributivity_witness(op, twist) {
            return Err(AxiomViolation {
                axiom: AxiomKind::Distributivity,
                witness: w,
            });
        }
        if level >= Level::Rack {
            if let Some(w) = translation_witness(op) {
                return Err(AxiomViolation {
                    axiom: AxiomKind::TranslationBijectivity,
                    witness: w,
                });
            }
        }
        if level >= Level::Quandle {
            for x in 0..op.order() {
                let diag = vec![x; op.arity()];
                if op.eval(&diag) != twist.apply(x) {
                    return Err(AxiomViolation {
                        axiom: AxiomKind::Diagonal,
                        witness: vec![x],
                    });
                }
            }
        }
        if level == Level::CrossedSet {
            for x in 0..op.order() {
                for y in 0..op.order() {
                    if op.eval2(y, x) == twist.apply(y) && op.eval2(x, y) != twist.apply(x) {
                        return Err(AxiomViolation {
                            axiom: AxiomKind::CrossedSet,
                            witness: vec![x, y],
                        });
                    }
                }
            }
        }
        Ok(())
    })();
    Ok(AxiomReport { level, outcome })
}

fn distributivity_witness(op: &CayleyOp, twist: &Endomap) -> Option<Vec<usize>> {
    let n = op.arity();
    let q = op.order();
    // witness tuple is (x1..xn, u1..u_{n-1}), scanned lexicographically
    for tuple in lex_tuples(q, 2 * n - 1) {
        let xs = &tuple[..n];
        let us = &tuple[n..];
        let twisted: Vec<usize> = us.iter().map(|&u| twist.apply(u)).collect();
        let mut lhs_args = Vec::with_capacity(n);
        lhs_args.push(op.eval(xs));
        lhs_args.extend_from_slice(&twisted);
        let lhs = op.eval(&lhs_args);
        let mut rhs_args = Vec::with_capacity(n);
        for &x in xs {
            rhs_args.push(op.translate(x, us));
        }
        let rhs = op.eval(&rhs_args);
        if lhs != rhs {
            return Some(tuple);
        }
    }
    None
}

fn translation_witness(op: &CayleyOp) -> Option<Vec<usize>> {
    let q = op.order();
    for tail in lex_tuples(q, op.arity() - 1) {
        let mut seen = vec![usize::MAX; q];
        for x in 0..q {
            let v = op.translate(x, &tail);
            if seen[v] != usize::MAX {
                let mut w = vec![seen[v], x];
                w.extend_from_slice(&tail);
                return Some(w);
            }
            seen[v] = x;
        }
    }
    None
}

/// The right translation `x -> T(x, tail)` as a permutation, or the first
/// colliding pair of preimages when it is not bijective (the rack-axiom
/// failure signal).
pub fn right_translation_parts(
    op: &CayleyOp,
    tail: &[usize],
) -> Result<std::result::Result<Permutation, (usize, usize)>> {
    if tail.len() != op.arity() - 1 {
        return Err(Error::ArgCount {
            expected: op.arity() - 1,
            got: tail.len(),
        });
    }
    let q = op.order();
    for (i, &a) in tail.iter().enumerate() {
        if a >= q {
            return Err(Error::EntryRange {
                index: i,
                value: a,
                order: q,
            });
        }
    }
    let images: Vec<usize> = (0..q).map(|x| op.translate(x, tail)).collect();
    let mut seen = vec![usize::MAX; q];
    for (x, &v) in images.iter().enumerate() {
        if seen[v] != usize::MAX {
            return Ok(Err((seen[v], x)));
        }
        seen[v] = x;
    }
    Ok(Ok(Permutation::from_images(images)?))
}

/// Medial check: the n x n argument matrix applied row-first equals
/// column-first. For binary ops this is `(a*b)*(c*d) == (a*c)*(b*d)`.
pub fn is_medial_parts(op: &CayleyOp) -> std::result::Result<(), Vec<usize>> {
    let n = op.arity();
    let q = op.order();
    for tuple in lex_tuples(q, n * n) {
        // tuple holds the matrix row-major: entry (i,j) at i*n + j
        let mut rows = Vec::with_capacity(n);
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            rows.push(op.eval(&tuple[i * n..(i + 1) * n]));
        }
        for j in 0..n {
            let col: Vec<usize> = (0..n).map(|i| tuple[i * n + j]).collect();
            cols.push(op.eval(&col));
        }
        if op.eval(&rows) != op.eval(&cols) {
            return Err(tuple);
        }
    }
    Ok(())
}

/// `twist(T(x..)) == T(twist(x)..)` for all tuples.
pub fn twist_is_endomorphism_parts(
    op: &CayleyOp,
    twist: &Endomap,
) -> std::result::Result<(), Vec<usize>> {
    let q = op.order();
    for tuple in lex_tuples(q, op.arity()) {
        let mapped: Vec<usize> = tuple.iter().map(|&x| twist.apply(x)).collect();
        if twist.apply(op.eval(&tuple)) != op.eval(&mapped) {
            return Err(tuple);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::CayleyOp;

    fn trivial3(q: usize, f: Endomap) -> (CayleyOp, Endomap) {
        let op = CayleyOp::from_fn(3, q, |a| f.apply(a[0])).unwrap();
        (op, f)
    }

    fn affine3(m: usize, p: i64, qc: i64, r: i64) -> (CayleyOp, Endomap) {
        let mm = m as i64;
        let op = CayleyOp::from_fn(3, m, |a| {
            ((p * a[0] as i64 + qc * a[1] as i64 + r * a[2] as i64).rem_euclid(mm)) as usize
        })
        .unwrap();
        (op, Endomap::affine(m, p + qc + r, 0))
    }

    #[test]
    fn trivial_ternary_quandle_passes() {
        let (op, f) = trivial3(3, Endomap::identity(3));
        let rep = check_axioms_parts(&op, &f, Level::Quandle).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn trivial_with_constant_twist_is_shelf_not_rack() {
        let (op, f) = trivial3(3, Endomap::constant(3, 0).unwrap());
        assert!(check_axioms_parts(&op, &f, Level::Shelf).unwrap().passed());
        let rack = check_axioms_parts(&op, &f, Level::Rack).unwrap();
        let v = rack.outcome.unwrap_err();
        assert_eq!(v.axiom, AxiomKind::TranslationBijectivity);
        assert_eq!(highest_level(&op, &f).unwrap(), Some(Level::Shelf));
    }

    #[test]
    fn affine_211_mod3_is_quandle_with_identity_twist() {
        let (op, f) = affine3(3, 2, 1, 1);
        assert!(f.is_identity());
        assert!(check_axioms_parts(&op, &f, Level::Quandle).unwrap().passed());
    }

    #[test]
    fn monotone_levels() {
        let (op, f) = affine3(3, 2, 1, 1);
        for lv in [Level::Shelf, Level::Rack, Level::Quandle] {
            assert!(check_axioms_parts(&op, &f, lv).unwrap().passed());
        }
    }

    #[test]
    fn right_translation_dihedral() {
        // x*y = 2y - x mod 3, tail (0): x -> -x
        let op = CayleyOp::from_fn(2, 3, |a| {
            ((2 * a[1] as i64 - a[0] as i64).rem_euclid(3)) as usize
        })
        .unwrap();
        let perm = right_translation_parts(&op, &[0]).unwrap().unwrap();
        assert_eq!(perm.images(), &[0, 2, 1]);
    }

    #[test]
    fn right_translation_affine_tail() {
        // affine (2,1,1) mod 3, tail (1,2): x -> 2x + 3 = 2x
        let (op, _) = affine3(3, 2, 1, 1);
        let perm = right_translation_parts(&op, &[1, 2]).unwrap().unwrap();
        assert_eq!(perm.images(), &[0, 2, 1]);
    }

    #[test]
    fn right_translation_collision_report() {
        let (op, _) = trivial3(3, Endomap::constant(3, 0).unwrap());
        let res = right_translation_parts(&op, &[0, 0]).unwrap();
        assert_eq!(res.unwrap_err(), (0, 1));
    }

    #[test]
    fn crossed_set_requires_binary() {
        let (op, f) = affine3(3, 2, 1, 1);
        assert!(matches!(
            check_axioms_parts(&op, &f, Level::CrossedSet),
            Err(Error::UnsupportedLevel { .. })
        ));
    }

    #[test]
    fn affine_ternary_is_medial() {
        let (op, _) = affine3(5, 2, 3, 1);
        assert!(is_medial_parts(&op).is_ok());
    }

    #[test]
    fn trivial_is_medial() {
        let (op, _) = trivial3(3, Endomap::identity(3));
        assert!(is_medial_parts(&op).is_ok());
    }

    #[test]
    fn unchecked_gate_agrees_with_validator() {
        let (op, f) = affine3(3, 2, 1, 1);
        let s = FStructure::new(op, f, Level::Quandle).unwrap();
        assert_eq!(s.level(), Level::Quandle);
        assert_eq!(s.eval(&[0, 1, 2]), 0);
    }
}
