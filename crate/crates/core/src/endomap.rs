use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A self-map of `{0 .. q-1}`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endomap {
    images: Vec<usize>,
}

impl Endomap {
    pub fn identity(q: usize) -> Self {
        Endomap {
            images: (0..q).collect(),
        }
    }

    pub fn constant(q: usize, c: usize) -> Result<Self> {
        if c >= q {
            return Err(Error::EntryRange {
                index: 0,
                value: c,
                order: q,
            });
        }
        Ok(Endomap {
            images: vec![c; q],
        })
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let q = images.len();
        if q == 0 {
            return Err(Error::ZeroOrder);
        }
        for (i, &v) in images.iter().enumerate() {
            if v >= q {
                return Err(Error::EntryRange {
                    index: i,
                    value: v,
                    order: q,
                });
            }
        }
        Ok(Endomap { images })
    }

    /// The affine map `x -> a*x + b mod q`.
    pub fn affine(q: usize, a: i64, b: i64) -> Self {
        let m = q as i64;
        Endomap {
            images: (0..q)
                .map(|x| ((a * x as i64 + b).rem_euclid(m)) as usize)
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
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

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &v in &self.images {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn as_permutation(&self) -> Result<Permutation> {
        Permutation::from_images(self.images.clone())
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Endomap) -> Endomap {
        assert_eq!(self.order(), other.order());
        Endomap {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// k-fold composite; `power(0)` is the identity.
    pub fn power(&self, k: usize) -> Endomap {
        let mut acc = Endomap::identity(self.order());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// All `q^q` self-maps in lexicographic order of their image tables.
    pub fn all(q: usize) -> Vec<Endomap> {
        let total = q.pow(q as u32);
        (0..total)
            .map(|mut code| {
                let images = (0..q)
                    .map(|_| {
                        let v = code % q;
                        code /= q;
                        v
                    })
                    .collect();
                Endomap { images }
            })
            .collect()
    }
}

impl From<Permutation> for Endomap {
    fn from(p: Permutation) -> Self {
        Endomap {
            images: p.images().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_and_compose() {
        let f = Endomap::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(f.power(3), Endomap::identity(3));
        assert_eq!(f.power(2), f.compose(&f));
    }

    #[test]
    fn all_endomaps_count_and_order() {
        let all = Endomap::all(2);
        assert_eq!(all.len(), 4);
        assert_eq!(all[0].images(), &[0, 0]);
        assert_eq!(all[3].images(), &[1, 1]);
        assert_eq!(Endomap::all(3).len(), 27);
    }

    #[test]
    fn affine_map() {
        let f = Endomap::affine(5, 2, 1);
        assert_eq!(f.images(), &[1, 3, 0, 2, 4]);
        assert!(f.is_bijective());
        assert!(!Endomap::affine(4, 2, 0).is_bijective());
    }
}
