use crate::endomap::Endomap;
use crate::error::{Error, Result};

/// A finite group given by its multiplication table.
///
/// The table uses the same flat-index contract as `CayleyOp`:
/// `mul(a, b)` is stored at `a + order*b`. Composition convention for
/// permutation groups: `mul(a, b)` applies `b` first, then `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if table.len() != order * order {
            return Err(Error::TableSize {
                expected: order * order,
                got: table.len(),
            });
        }
        for (i, &v) in table.iter().enumerate() {
            if v >= order {
                return Err(Error::EntryRange {
                    index: i,
                    value: v,
                    order,
                });
            }
        }
        let mul = |a: usize, b: usize| table[a + order * b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::BadGroup("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for x in 0..order {
            inverse[x] = (0..order)
                .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                .ok_or_else(|| Error::BadGroup(format!("element {x} has no inverse")))?;
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::BadGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverse,
        })
    }

    /// The cyclic group `Z_m` under addition.
    pub fn cyclic(m: usize) -> Self {
        let table = (0..m * m)
            .map(|i| {
                let (a, b) = (i % m, i / m);
                (a + b) % m
            })
            .collect();
        FiniteGroup::new(m, table).expect("cyclic table is a group")
    }

    /// The symmetric group on `n` letters; elements are the permutations of
    /// `{0..n-1}` in lexicographic order of their image tuples, so index 0 is
    /// the identity.
    pub fn symmetric(n: usize) -> Self {
        let perms = crate::perm::Permutation::all(n);
        let order = perms.len();
        let index_of = |images: &[usize]| -> usize {
            perms
                .iter()
                .position(|p| p.images() == images)
                .expect("composite of permutations is a permutation")
        };
        let mut table = vec![0; order * order];
        for (ai, a) in perms.iter().enumerate() {
            for (bi, b) in perms.iter().enumerate() {
                // apply b first, then a
                let comp = a.compose(b);
                table[ai + order * bi] = index_of(comp.images());
            }
        }
        FiniteGroup::new(order, table).expect("symmetric table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a + self.order * b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Validates `f(xy) == f(x)f(y)`.
    pub fn is_endomorphism(&self, f: &Endomap) -> Result<()> {
        if f.order() != self.order {
            return Err(Error::OrderMismatch(f.order(), self.order));
        }
        for x in 0..self.order {
            for y in 0..self.order {
                if f.apply(self.mul(x, y)) != self.mul(f.apply(x), f.apply(y)) {
                    return Err(Error::NotGroupEndomorphism(x, y));
                }
            }
        }
        Ok(())
    }

    /// Conjugation by the fixed element `t`: `x -> t^-1 x t`.
    pub fn conjugation_by(&self, t: usize) -> Endomap {
        let ti = self.inv(t);
        Endomap::from_images(
            (0..self.order)
                .map(|x| self.mul(self.mul(ti, x), t))
                .collect(),
        )
        .expect("conjugation stays in range")
    }
}
