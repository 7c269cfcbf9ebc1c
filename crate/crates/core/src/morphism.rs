use crate::cayley::lex_tuples;
use crate::endomap::Endomap;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::structure::FStructure;

/// A map between (possibly different) carriers, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierMap {
    codomain: usize,
    images: Vec<usize>,
}

impl CarrierMap {
    pub fn new(images: Vec<usize>, codomain: usize) -> Result<Self> {
        for (i, &v) in images.iter().enumerate() {
            if v >= codomain {
                return Err(Error::EntryRange {
                    index: i,
                    value: v,
                    order: codomain,
                });
            }
        }
        Ok(CarrierMap { codomain, images })
    }

    pub fn domain(&self) -> usize {
        self.images.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain() != self.codomain {
            return false;
        }
        let mut seen = vec![false; self.codomain];
        for &v in &self.images {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }
}

impl From<&Endomap> for CarrierMap {
    fn from(f: &Endomap) -> Self {
        CarrierMap {
            codomain: f.order(),
            images: f.images().to_vec(),
        }
    }
}

/// Where a morphism check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    /// `phi(T1(args)) != T2(phi(args))` at this tuple.
    Op(Vec<usize>),
    /// `phi(f1(x)) != f2(phi(x))` at this element.
    Twist(usize),
    /// Isomorphism was requested but phi is not a bijection.
    NotBijective,
}

/// Checks that `phi` intertwines both operations and both twists.
pub fn is_morphism(
    phi: &CarrierMap,
    s1: &FStructure,
    s2: &FStructure,
) -> Result<std::result::Result<(), MorphismViolation>> {
    if s1.arity() != s2.arity() {
        return Err(Error::ArityMismatch(s1.arity(), s2.arity()));
    }
    if phi.domain() != s1.order() || phi.codomain() != s2.order() {
        return Err(Error::OrderMismatch(phi.domain(), s1.order()));
    }
    for x in 0..s1.order() {
        if phi.apply(s1.twist().apply(x)) != s2.twist().apply(phi.apply(x)) {
            return Ok(Err(MorphismViolation::Twist(x)));
        }
    }
    for tuple in lex_tuples(s1.order(), s1.arity()) {
        let mapped: Vec<usize> = tuple.iter().map(|&x| phi.apply(x)).collect();
        if phi.apply(s1.eval(&tuple)) != s2.eval(&mapped) {
            return Ok(Err(MorphismViolation::Op(tuple)));
        }
    }
    Ok(Ok(()))
}

/// Morphism check plus bijectivity.
pub fn is_isomorphism(
    phi: &CarrierMap,
    s1: &FStructure,
    s2: &FStructure,
) -> Result<std::result::Result<Permutation, MorphismViolation>> {
    match is_morphism(phi, s1, s2)? {
        Err(v) => Ok(Err(v)),
        Ok(()) => {
            if !phi.is_bijective() {
                return Ok(Err(MorphismViolation::NotBijective));
            }
            Ok(Ok(Permutation::from_images(
                (0..phi.domain()).map(|x| phi.apply(x)).collect(),
            )?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::CayleyOp;
    use crate::structure::Level;

    fn affine211() -> FStructure {
        let op = CayleyOp::from_fn(3, 3, |a| (2 * a[0] + a[1] + a[2]) % 3).unwrap();
        FStructure::new(op, Endomap::identity(3), Level::Quandle).unwrap()
    }

    #[test]
    fn identity_is_a_morphism() {
        let s = affine211();
        let id = CarrierMap::from(&Endomap::identity(3));
        assert!(is_morphism(&id, &s, &s).unwrap().is_ok());
        assert!(is_isomorphism(&id, &s, &s).unwrap().is_ok());
    }

    #[test]
    fn shift_is_an_automorphism_of_affine() {
        // x -> x+1 commutes with T since the coefficients sum to 1 mod 3
        let s = affine211();
        let shift = CarrierMap::new(vec![1, 2, 0], 3).unwrap();
        assert!(is_morphism(&shift, &s, &s).unwrap().is_ok());
    }

    #[test]
    fn constant_map_to_point_is_morphism_not_iso() {
        let s = affine211();
        let point =
            FStructure::new(CayleyOp::from_fn(3, 1, |_| 0).unwrap(), Endomap::identity(1), Level::Quandle)
                .unwrap();
        let c = CarrierMap::new(vec![0, 0, 0], 1).unwrap();
        assert!(is_morphism(&c, &s, &point).unwrap().is_ok());
        assert_eq!(
            is_isomorphism(&c, &s, &point).unwrap().unwrap_err(),
            MorphismViolation::NotBijective
        );
    }
}
