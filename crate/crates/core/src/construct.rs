//! The named example structures and the twist-along-a-morphism construction.

use crate::cayley::CayleyOp;
use crate::endomap::Endomap;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::morphism::{is_morphism, CarrierMap};
use crate::structure::{highest_level, FStructure, Level};

/// Parameters of an affine structure `T(x1..xn) = S1*x1 + ... + Sn*xn mod m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineParams {
    modulus: usize,
    coeffs: Vec<usize>,
}

impl AffineParams {
    pub fn new(modulus: usize, coeffs: &[i64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroOrder);
        }
        if coeffs.len() < 2 {
            return Err(Error::BadArity(coeffs.len()));
        }
        let m = modulus as i64;
        Ok(AffineParams {
            modulus,
            coeffs: coeffs.iter().map(|&c| c.rem_euclid(m) as usize).collect(),
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[usize] {
        &self.coeffs
    }

    /// The natural twist `x -> (S1 + ... + Sn) x`.
    pub fn natural_twist(&self) -> Endomap {
        let sum: usize = self.coeffs.iter().sum();
        Endomap::affine(self.modulus, sum as i64, 0)
    }
}

/// `T(x, ...) = f(x)`: always a shelf with diagonal `f`, a quandle iff `f`
/// is bijective.
pub fn trivial_f_quandle(f: &Endomap, arity: usize) -> Result<FStructure> {
    let q = f.order();
    let op = CayleyOp::from_fn(arity, q, |args| f.apply(args[0]))?;
    FStructure::at_highest_level(op, f.clone())
}

/// Conjugation on a group: `x * y = y^-1 x f(y)` with a group endomorphism `f`.
pub fn conjugation_f_quandle(g: &FiniteGroup, f: &Endomap) -> Result<FStructure> {
    g.is_endomorphism(f)?;
    let op = CayleyOp::from_fn(2, g.order(), |a| {
        g.mul(g.mul(g.inv(a[1]), a[0]), f.apply(a[1]))
    })?;
    FStructure::at_highest_level(op, f.clone())
}

/// Dihedral structure on `Z_m`: `x * y = 2ay - ax + b` with twist `ax + b`,
/// `a` a unit mod `m`.
pub fn dihedral_f_quandle(m: usize, a: i64, b: i64) -> Result<FStructure> {
    let mm = m as i64;
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    if gcd(a.rem_euclid(mm), mm) != 1 {
        return Err(Error::NotAUnit(a.rem_euclid(mm), m as u64));
    }
    let op = CayleyOp::from_fn(2, m, |args| {
        ((2 * a * args[1] as i64 - a * args[0] as i64 + b).rem_euclid(mm)) as usize
    })?;
    FStructure::at_highest_level(op, Endomap::affine(m, a, b))
}

/// Affine structure; `twist_override` replaces the natural `(sum of coeffs)x`
/// twist when the example calls for it. Validation decides the level.
pub fn affine_structure(params: &AffineParams, twist_override: Option<Endomap>) -> Result<FStructure> {
    let m = params.modulus();
    let op = CayleyOp::from_fn(params.arity(), m, |args| {
        args.iter()
            .zip(params.coeffs())
            .map(|(&x, &c)| x * c)
            .sum::<usize>()
            % m
    })?;
    let twist = twist_override.unwrap_or_else(|| params.natural_twist());
    FStructure::at_highest_level(op, twist)
}

/// The heap of a group: `T(x, y, z) = f(x y^-1 z)`.
pub fn heap_f_quandle(g: &FiniteGroup, f: &Endomap) -> Result<FStructure> {
    g.is_endomorphism(f)?;
    let op = CayleyOp::from_fn(3, g.order(), |a| {
        f.apply(g.mul(g.mul(a[0], g.inv(a[1])), a[2]))
    })?;
    FStructure::at_highest_level(op, f.clone())
}

/// Folds a binary f-quandle `(x * y)` up to arity n:
/// `T(x1..xn) = ((x1 * x2) * f(x3)) * f^2(x4) ... * f^{n-2}(xn)`,
/// with twist `f^{n-1}`.
pub fn induced_from_binary(s: &FStructure, arity: usize) -> Result<FStructure> {
    if s.arity() != 2 {
        return Err(Error::ArityMismatch(s.arity(), 2));
    }
    if s.level() < Level::Quandle {
        return Err(Error::Precondition(
            "induced construction requires a binary f-quandle".into(),
        ));
    }
    if arity < 2 {
        return Err(Error::BadArity(arity));
    }
    let f = s.twist();
    let powers: Vec<Endomap> = (0..arity.saturating_sub(1)).map(|k| f.power(k)).collect();
    let op = CayleyOp::from_fn(arity, s.order(), |args| {
        let mut acc = args[0];
        for (k, &x) in args[1..].iter().enumerate() {
            acc = s.op().eval2(acc, powers[k].apply(x));
        }
        acc
    })?;
    let out = FStructure::new(op, f.power(arity - 1), Level::Quandle)?;
    Ok(out)
}

/// `(Q, beta o T, beta o twist)` for a shelf morphism `beta`. The result is
/// revalidated from scratch: a non-bijective `beta` downgrades rack/quandle
/// inputs to shelf level, which the returned level reports.
pub fn yau_twist(s: &FStructure, beta: &Endomap) -> Result<FStructure> {
    if beta.order() != s.order() {
        return Err(Error::OrderMismatch(beta.order(), s.order()));
    }
    if is_morphism(&CarrierMap::from(beta), s, s)?.is_err() {
        return Err(Error::NotAShelfMorphism);
    }
    let op = CayleyOp::new(
        s.arity(),
        s.order(),
        s.op().table().iter().map(|&v| beta.apply(v)).collect(),
    )?;
    let twist = beta.compose(s.twist());
    match highest_level(&op, &twist)? {
        Some(level) => Ok(FStructure::new(op, twist, level)?),
        None => Err(Error::Precondition(
            "twisted table fails shelf level; input was not a shelf".into(),
        )),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Level;

    #[test]
    fn trivial_structures() {
        let s = trivial_f_quandle(&Endomap::identity(3), 3).unwrap();
        assert_eq!(s.level(), Level::Quandle);
        // binary trivial with a transposition twist
        let f = Endomap::from_images(vec![1, 0]).unwrap();
        let s = trivial_f_quandle(&f, 2).unwrap();
        assert_eq!(s.level(), Level::Quandle);
        assert_eq!(s.op().eval2(0, 1), 1);
        // constant twist: shelf only
        let s = trivial_f_quandle(&Endomap::constant(3, 0).unwrap(), 3).unwrap();
        assert_eq!(s.level(), Level::Shelf);
    }

    #[test]
    fn conjugation_structures() {
        let s3 = FiniteGroup::symmetric(3);
        let s = conjugation_f_quandle(&s3, &Endomap::identity(6)).unwrap();
        assert_eq!(s.level(), Level::Quandle);
        // abelian conjugation is the trivial quandle x * y = x
        let z3 = FiniteGroup::cyclic(3);
        let t = conjugation_f_quandle(&z3, &Endomap::identity(3)).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(t.op().eval2(x, y), x);
            }
        }
        // twist by conjugation with a fixed transposition
        let f = s3.conjugation_by(1);
        let s = conjugation_f_quandle(&s3, &f).unwrap();
        assert_eq!(s.level(), Level::Quandle);
    }

    #[test]
    fn conjugation_rejects_non_endomorphisms() {
        let s3 = FiniteGroup::symmetric(3);
        let bad = Endomap::constant(6, 1).unwrap();
        assert!(conjugation_f_quandle(&s3, &bad).is_err());
    }

    #[test]
    fn dihedral_structures() {
        let r3 = dihedral_f_quandle(3, 1, 0).unwrap();
        assert_eq!(r3.level(), Level::Quandle);
        assert!(r3.twist().is_identity());
        assert_eq!(dihedral_f_quandle(5, 2, 1).unwrap().level(), Level::Quandle);
        assert!(matches!(
            dihedral_f_quandle(4, 2, 0),
            Err(Error::NotAUnit(2, 4))
        ));
    }

    #[test]
    fn affine_structures() {
        let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
        assert_eq!(s.level(), Level::Quandle);
        assert!(s.twist().is_identity());
        // order-2 class representative x+y+z
        let s = affine_structure(&AffineParams::new(2, &[1, 1, 1]).unwrap(), None).unwrap();
        assert!(s.twist().is_identity());
        assert_eq!(s.op().eval3(1, 1, 1), 1);
        // binary Alexander with explicit zero twist
        let s = affine_structure(
            &AffineParams::new(3, &[1, 2]).unwrap(),
            Some(Endomap::constant(3, 0).unwrap()),
        )
        .unwrap();
        assert_eq!(s.level(), Level::Quandle);
        // the override coincides with the natural twist here: 1+2 = 0 mod 3
        assert_eq!(
            AffineParams::new(3, &[1, 2]).unwrap().natural_twist(),
            Endomap::constant(3, 0).unwrap()
        );
    }

    #[test]
    fn affine_rack_iff_first_coeff_unit() {
        let s = affine_structure(&AffineParams::new(4, &[2, 1, 1]).unwrap(), None).unwrap();
        assert_eq!(s.level(), Level::Shelf);
        let s = affine_structure(&AffineParams::new(4, &[3, 2, 1]).unwrap(), None).unwrap();
        assert!(s.level() >= Level::Rack);
    }

    #[test]
    fn heap_structures() {
        let z2 = FiniteGroup::cyclic(2);
        let h = heap_f_quandle(&z2, &Endomap::identity(2)).unwrap();
        // x - y + z = x + y + z mod 2
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    assert_eq!(h.op().eval3(x, y, z), (x + y + z) % 2);
                }
            }
        }
        let z3 = FiniteGroup::cyclic(3);
        let h = heap_f_quandle(&z3, &Endomap::identity(3)).unwrap();
        assert_eq!(h.level(), Level::Quandle);
        let s3 = FiniteGroup::symmetric(3);
        let h = heap_f_quandle(&s3, &Endomap::identity(6)).unwrap();
        assert_eq!(h.level(), Level::Quandle);
        // frozen first lexicographic mediality witness for the S3 heap
        assert_eq!(
            h.is_medial().unwrap_err(),
            vec![0, 0, 0, 0, 0, 1, 0, 2, 0]
        );
    }

    #[test]
    fn heap_degeneracies() {
        for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
            let h = heap_f_quandle(&g, &Endomap::identity(g.order())).unwrap();
            for x in 0..g.order() {
                for y in 0..g.order() {
                    assert_eq!(h.op().eval3(x, y, y), x);
                    assert_eq!(h.op().eval3(y, y, x), x);
                }
            }
        }
    }

    #[test]
    fn conjugation_s3_not_medial() {
        let s3 = FiniteGroup::symmetric(3);
        let s = conjugation_f_quandle(&s3, &Endomap::identity(6)).unwrap();
        // frozen first lexicographic witness (a,b,c,d)
        assert_eq!(s.is_medial().unwrap_err(), vec![1, 0, 1, 2]);
    }

    #[test]
    fn induced_from_dihedral() {
        let r3 = dihedral_f_quandle(3, 1, 0).unwrap();
        let t = induced_from_binary(&r3, 3).unwrap();
        // (x*y)*z with x*y = 2y - x: T(x,y,z) = 2z - 2y + x mod 3
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let expect = ((2 * z as i64 - 2 * y as i64 + x as i64).rem_euclid(3)) as usize;
                    assert_eq!(t.op().eval3(x, y, z), expect);
                }
            }
        }
        // R_{a,b} = R_b o R_a for the induced ternary operation
        for a in 0..3 {
            for b in 0..3 {
                for x in 0..3 {
                    let via_binary = r3.op().eval2(r3.op().eval2(x, a), b);
                    assert_eq!(t.op().eval3(x, a, b), via_binary);
                }
            }
        }
    }

    #[test]
    fn induced_diagonal_is_twist_squared() {
        let s = dihedral_f_quandle(5, 2, 1).unwrap();
        let t = induced_from_binary(&s, 3).unwrap();
        let f2 = s.twist().power(2);
        for x in 0..5 {
            assert_eq!(t.op().eval3(x, x, x), f2.apply(x));
        }
        assert_eq!(t.twist(), &f2);
    }

    #[test]
    fn induced_matches_affine_for_binary_alexander() {
        // m=5, T=2, S=4: induced ternary coefficients (T^2, TS, S(T+S))
        let bin = affine_structure(&AffineParams::new(5, &[2, 4]).unwrap(), None).unwrap();
        let ind = induced_from_binary(&bin, 3).unwrap();
        let aff = affine_structure(
            &AffineParams::new(5, &[4, 8, 4 * 6]).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(ind.op(), aff.op());
        assert_eq!(ind.twist(), aff.twist());
    }

    #[test]
    fn yau_twist_identity_is_noop() {
        let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
        let t = yau_twist(&s, &Endomap::identity(3)).unwrap();
        assert_eq!(t.op(), s.op());
        assert_eq!(t.twist(), s.twist());
    }

    #[test]
    fn yau_twist_by_doubling() {
        let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
        let beta = Endomap::affine(3, 2, 0);
        let t = yau_twist(&s, &beta).unwrap();
        assert_eq!(t.level(), Level::Quandle);
        assert_eq!(t.twist(), &beta);
    }

    #[test]
    fn yau_twist_rejects_non_morphisms() {
        let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
        // x -> x+1 is a morphism here; a constant map is not
        assert!(yau_twist(&s, &Endomap::affine(3, 1, 1)).is_ok());
        let bad = Endomap::constant(3, 1).unwrap();
        assert!(matches!(
            yau_twist(&s, &bad),
            Err(Error::NotAShelfMorphism)
        ));
    }

    #[test]
    fn yau_twist_classical_ternary_from_quandle() {
        // T(x,y,z) = (x*y)*z on R_3, alpha(x) = x+1: alpha must first be a
        // T-morphism; the construction is accepted exactly when it is.
        let r3 = dihedral_f_quandle(3, 1, 0).unwrap();
        let t = induced_from_binary(&r3, 3).unwrap();
        let alpha = Endomap::affine(3, 1, 1);
        let twisted = yau_twist(&t, &alpha);
        let is_t_morphism = is_morphism(&CarrierMap::from(&alpha), &t, &t)
            .unwrap()
            .is_ok();
        assert_eq!(twisted.is_ok(), is_t_morphism);
        if let Ok(tw) = twisted {
            assert_eq!(tw.level(), Level::Quandle);
        }
    }
}
