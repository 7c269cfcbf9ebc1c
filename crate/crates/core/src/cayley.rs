use crate::error::{Error, Result};

/// Flat table of an n-ary operation on `{0 .. q-1}`.
///
/// The entry for the argument tuple `(x1, ..., xn)` sits at flat index
/// `x1 + q*x2 + q^2*x3 + ...` — the first argument varies fastest, so each
/// right translation `x -> T(x, tail)` is a contiguous run of the table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CayleyOp {
    arity: usize,
    order: usize,
    table: Vec<usize>,
}

impl CayleyOp {
    pub fn new(arity: usize, order: usize, table: Vec<usize>) -> Result<Self> {
        if arity < 2 {
            return Err(Error::BadArity(arity));
        }
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let expected = order
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::DimensionOverflow(format!("{order}^{arity}")))?;
        if table.len() != expected {
            return Err(Error::TableSize {
                expected,
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
        Ok(CayleyOp {
            arity,
            order,
            table,
        })
    }

    /// Builds the table by evaluating `op` on every argument tuple.
    pub fn from_fn(arity: usize, order: usize, mut op: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::BadArity(arity));
        }
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let size = order
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::DimensionOverflow(format!("{order}^{arity}")))?;
        let mut table = Vec::with_capacity(size);
        let mut args = vec![0usize; arity];
        for i in 0..size {
            decode_flat(i, order, &mut args);
            table.push(op(&args));
        }
        CayleyOp::new(arity, order, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn flat_index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let mut idx = 0;
        let mut stride = 1;
        for &a in args {
            idx += a * stride;
            stride *= self.order;
        }
        idx
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        self.table[self.flat_index(args)]
    }

    pub fn eval2(&self, x: usize, y: usize) -> usize {
        debug_assert_eq!(self.arity, 2);
        self.table[x + self.order * y]
    }

    pub fn eval3(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert_eq!(self.arity, 3);
        self.table[x + self.order * (y + self.order * z)]
    }

    /// `T(x, tail...)` for a fixed `(n-1)`-tuple tail.
    pub fn translate(&self, x: usize, tail: &[usize]) -> usize {
        debug_assert_eq!(tail.len(), self.arity - 1);
        let mut idx = x;
        let mut stride = self.order;
        for &a in tail {
            idx += a * stride;
            stride *= self.order;
        }
        self.table[idx]
    }
}

/// Decodes a flat index into an argument tuple (first argument fastest).
pub fn decode_flat(mut idx: usize, order: usize, out: &mut [usize]) {
    for slot in out.iter_mut() {
        *slot = idx % order;
        idx /= order;
    }
}

/// Iterator over all `q^k` tuples in ascending flat-index order
/// (first coordinate fastest).
pub fn flat_tuples(order: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = order.pow(len as u32);
    (0..total).map(move |i| {
        let mut t = vec![0; len];
        decode_flat(i, order, &mut t);
        t
    })
}

/// Iterator over all `q^k` tuples in lexicographic order
/// (leftmost coordinate most significant). Used for witness reporting.
pub fn lex_tuples(order: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = order.pow(len as u32);
    (0..total).map(move |i| {
        let mut t = vec![0; len];
        let mut rem = i;
        for slot in t.iter_mut().rev() {
            *slot = rem % order;
            rem /= order;
        }
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_contract() {
        // entry for (x1, x2, x3) lives at x1 + q*x2 + q^2*x3
        let op = CayleyOp::from_fn(3, 3, |a| (2 * a[0] + a[1] + a[2]) % 3).unwrap();
        assert_eq!(op.table()[1 + 3 * 2 + 9 * 0], (2 * 1 + 2) % 3);
        assert_eq!(op.eval3(1, 2, 0), op.eval(&[1, 2, 0]));
        assert_eq!(op.translate(1, &[2, 0]), op.eval3(1, 2, 0));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(CayleyOp::new(3, 2, vec![0; 7]).is_err());
        assert!(CayleyOp::new(3, 2, vec![2; 8]).is_err());
        assert!(CayleyOp::new(1, 2, vec![0, 0]).is_err());
    }

    #[test]
    fn tuple_orders() {
        let flat: Vec<_> = flat_tuples(2, 3).collect();
        assert_eq!(flat[1], vec![1, 0, 0]);
        let lex: Vec<_> = lex_tuples(2, 3).collect();
        assert_eq!(lex[1], vec![0, 0, 1]);
        assert_eq!(lex[4], vec![1, 0, 0]);
    }
}
