//! Exact linear algebra: dense matrices over `Z_m` with Gaussian
//! elimination for prime moduli, and integer Smith normal form with
//! transformation certificates for the general case. No floating point.

use crate::error::{Error, Result};

pub fn is_prime(m: i64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo prime `m`.
pub fn mod_inverse(a: i64, m: i64) -> Result<i64> {
    let a = a.rem_euclid(m);
    let (g, x, _) = egcd(a, m);
    if g != 1 {
        return Err(Error::NotAUnit(a, m as u64));
    }
    Ok(x.rem_euclid(m))
}

/// Dense row-major matrix over `Z_m`, entries kept in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub modulus: i64,
    data: Vec<i64>,
}

impl ModMatrix {
    pub fn zero(rows: usize, cols: usize, modulus: i64) -> Self {
        assert!(modulus >= 1);
        ModMatrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>, modulus: i64) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = ModMatrix::zero(r, c, modulus);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Columns given as vectors of length `rows`.
    pub fn from_columns(cols: &[Vec<i64>], rows: usize, modulus: i64) -> Self {
        let mut m = ModMatrix::zero(rows, cols.len(), modulus);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v.rem_euclid(self.modulus);
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let mut out = ModMatrix::zero(self.rows, other.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0i64;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) * v[j]).rem_euclid(self.modulus);
                }
                acc
            })
            .collect()
    }

    /// Row echelon form over a prime modulus. Returns (reduced matrix, pivot columns).
    fn echelon(&self) -> Result<(ModMatrix, Vec<usize>)> {
        if !is_prime(self.modulus) {
            return Err(Error::Unsupported(format!(
                "elimination over Z_{} requires a prime modulus; use the Smith normal form path",
                self.modulus
            )));
        }
        let m = self.modulus;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let pivot_row = (r..a.rows).find(|&i| a.get(i, c) != 0);
            let Some(p) = pivot_row else { continue };
            for j in 0..a.cols {
                let (x, y) = (a.get(r, j), a.get(p, j));
                a.set(r, j, y);
                a.set(p, j, x);
            }
            let inv = mod_inverse(a.get(r, c), m)?;
            for j in 0..a.cols {
                let v = a.get(r, j) * inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i != r && a.get(i, c) != 0 {
                    let f = a.get(i, c);
                    for j in 0..a.cols {
                        let v = a.get(i, j) - f * a.get(r, j);
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((a, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.echelon()?.1.len())
    }

    /// Basis of the right nullspace over a prime modulus.
    pub fn nullspace(&self) -> Result<Vec<Vec<i64>>> {
        let (a, pivots) = self.echelon()?;
        let m = self.modulus;
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0i64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (-a.get(row, free)).rem_euclid(m);
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// Solves `self * x = rhs` over a prime modulus; `None` when inconsistent.
    pub fn solve(&self, rhs: &[i64]) -> Result<Option<Vec<i64>>> {
        assert_eq!(rhs.len(), self.rows);
        let m = self.modulus;
        let mut aug = ModMatrix::zero(self.rows, self.cols + 1, m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, rhs[i]);
        }
        let (e, pivots) = aug.echelon()?;
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the rhs column: inconsistent
        }
        let mut x = vec![0i64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = e.get(row, self.cols);
        }
        Ok(Some(x))
    }

    /// Whether `v` lies in the column span (prime modulus).
    pub fn column_span_contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// Dense integer matrix used by the Smith normal form routine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v as i128);
            }
        }
        m
    }

    pub fn from_mod(m: &ModMatrix) -> Self {
        let mut out = IntMatrix::zero(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(i, j, m.get(i, j) as i128);
            }
        }
        out
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.get(i, j) + a * other.get(k, j));
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            self.set(a, j, y);
            self.set(b, j, x);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            let (x, y) = (self.get(i, a), self.get(i, b));
            self.set(i, a, y);
            self.set(i, b, x);
        }
    }

    fn add_row(&mut self, target: usize, source: usize, factor: i128) {
        for j in 0..self.cols {
            let v = self.get(target, j) + factor * self.get(source, j);
            self.set(target, j, v);
        }
    }

    fn add_col(&mut self, target: usize, source: usize, factor: i128) {
        for i in 0..self.rows {
            let v = self.get(i, target) + factor * self.get(i, source);
            self.set(i, target, v);
        }
    }

    fn scale_row(&mut self, r: usize, factor: i128) {
        for j in 0..self.cols {
            self.set(r, j, self.get(r, j) * factor);
        }
    }
}

/// `u * input * v = diag(factors)` with unimodular `u`, `v` and the
/// divisibility chain `factors[0] | factors[1] | ...`.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub factors: Vec<i128>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: IntMatrix,
}

impl SmithNormalForm {
    /// Re-multiplies the certificates against the original matrix.
    pub fn verify(&self, input: &IntMatrix) -> bool {
        self.u.mul(input).mul(&self.v) == self.diagonal
    }
}

pub fn smith_normal_form(input: &IntMatrix) -> SmithNormalForm {
    let mut b = input.clone();
    let mut u = IntMatrix::identity(input.rows);
    let mut v = IntMatrix::identity(input.cols);
    let n = input.rows.min(input.cols);

    for k in 0..n {
        loop {
            // smallest nonzero entry of the trailing block to (k, k)
            let mut best: Option<(usize, usize)> = None;
            for i in k..b.rows {
                for j in k..b.cols {
                    let val = b.get(i, j).abs();
                    if val != 0 && best.map_or(true, |(bi, bj)| val < b.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != k {
                b.swap_rows(k, pi);
                u.swap_rows(k, pi);
            }
            if pj != k {
                b.swap_cols(k, pj);
                v.swap_cols(k, pj);
            }
            if b.get(k, k) < 0 {
                b.scale_row(k, -1);
                u.scale_row(k, -1);
            }
            let pivot = b.get(k, k);
            let mut clean = true;
            for i in k + 1..b.rows {
                let q = b.get(i, k).div_euclid(pivot);
                if q != 0 {
                    b.add_row(i, k, -q);
                    u.add_row(i, k, -q);
                }
                if b.get(i, k) != 0 {
                    clean = false;
                }
            }
            for j in k + 1..b.cols {
                let q = b.get(k, j).div_euclid(pivot);
                if q != 0 {
                    b.add_col(j, k, -q);
                    v.add_col(j, k, -q);
                }
                if b.get(k, j) != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue; // leftover remainders become the new minima
            }
            // enforce divisibility of the trailing block by the pivot
            let mut offender = None;
            'scan: for i in k + 1..b.rows {
                for j in k + 1..b.cols {
                    if b.get(i, j) % pivot != 0 {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    b.add_row(k, i, 1);
                    u.add_row(k, i, 1);
                }
                None => break,
            }
        }
    }
    let factors = (0..n).map(|k| b.get(k, k)).collect();
    SmithNormalForm {
        factors,
        u,
        v,
        diagonal: b,
    }
}

/// Invariant factors of the quotient `ker(A mod m) / im(B mod m)` where
/// `A: Z_m^c -> Z_m^r` and `B: Z_m^d -> Z_m^c` with `A*B = 0 mod m`.
/// Trivial factors (1) are dropped; a factor 0 denotes a free `Z_m` summand
/// reported as `m`.
pub fn quotient_invariant_factors(a: &ModMatrix, b: &ModMatrix) -> Result<Vec<i64>> {
    let m = a.modulus as i128;
    assert_eq!(a.modulus, b.modulus);
    assert_eq!(a.cols, b.rows);
    if !a.mul(b).is_zero() {
        return Err(Error::Unsupported(
            "quotient requested but the composite is nonzero mod m".into(),
        ));
    }
    // kernel generators of (A mod m): columns of V scaled by m / gcd(d_i, m),
    // plus untouched columns past the diagonal
    let snf = smith_normal_form(&IntMatrix::from_mod(a));
    let c = a.cols;
    let mut gens: Vec<Vec<i128>> = Vec::new();
    for j in 0..c {
        let d = if j < snf.factors.len() {
            snf.factors[j]
        } else {
            0
        };
        let scale = if d == 0 { 1 } else { m / gcd128(d.abs(), m) };
        if scale % m == 0 {
            continue; // generator is trivial mod m
        }
        gens.push((0..c).map(|i| (snf.v.get(i, j) * scale).rem_euclid(m)).collect());
    }
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    // express the image generators (columns of B and m*e_i) in the kernel basis:
    // solve K * X = [B | 0] over the integers extended by m-multiples of K's
    // columns; equivalently compute SNF of the stacked relation matrix.
    let k_mat = {
        let mut km = IntMatrix::zero(c, gens.len());
        for (j, g) in gens.iter().enumerate() {
            for i in 0..c {
                km.set(i, j, g[i]);
            }
        }
        km
    };
    // Solve K X ≡ B (mod m) column by column via the SNF of K.
    let ksnf = smith_normal_form(&k_mat);
    let mut relations: Vec<Vec<i128>> = Vec::new();
    for col in 0..b.cols {
        let target: Vec<i128> = (0..c).map(|i| b.get(i, col) as i128).collect();
        let x = solve_via_snf(&ksnf, &target, m)?;
        relations.push(x);
    }
    // m * e_i relations on the generators themselves
    for j in 0..gens.len() {
        let mut rel = vec![0i128; gens.len()];
        rel[j] = m;
        relations.push(rel);
    }
    let mut rel_mat = IntMatrix::zero(gens.len(), relations.len());
    for (j, rel) in relations.iter().enumerate() {
        for i in 0..gens.len() {
            rel_mat.set(i, j, rel[i]);
        }
    }
    let rsnf = smith_normal_form(&rel_mat);
    let mut factors: Vec<i64> = Vec::new();
    for i in 0..gens.len() {
        let d = if i < rsnf.factors.len() {
            rsnf.factors[i].abs()
        } else {
            0
        };
        let f = if d == 0 { m } else { gcd128(d, m) };
        if f > 1 {
            factors.push(f as i64);
        }
    }
    factors.sort_unstable();
    Ok(factors)
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Solves `K x ≡ target (mod m)` given the SNF of `K`.
fn solve_via_snf(snf: &SmithNormalForm, target: &[i128], m: i128) -> Result<Vec<i128>> {
    // U K V = D  =>  K (V y) = target with D y = U target (mod m)
    let rows = snf.u.rows;
    let cols = snf.v.rows;
    let mut ut = vec![0i128; rows];
    for i in 0..rows {
        let mut acc = 0i128;
        for j in 0..rows {
            acc += snf.u.get(i, j) * target[j];
        }
        ut[i] = acc.rem_euclid(m);
    }
    let mut y = vec![0i128; cols];
    for i in 0..rows {
        let d = if i < snf.factors.len() {
            snf.factors[i]
        } else {
            0
        };
        if i < cols && d != 0 {
            let g = gcd128(d, m);
            if ut[i] % g != 0 {
                return Err(Error::Unsupported(
                    "image element does not lie in the kernel lattice".into(),
                ));
            }
            // solve d * y ≡ ut (mod m)
            let dd = (d / g).rem_euclid(m / g);
            let tt = (ut[i] / g).rem_euclid(m / g);
            let inv = mod_inverse(dd as i64, (m / g) as i64)? as i128;
            y[i] = (tt * inv).rem_euclid(m / g);
        } else if ut[i] % m != 0 {
            return Err(Error::Unsupported(
                "image element does not lie in the kernel lattice".into(),
            ));
        }
    }
    let mut x = vec![0i128; cols];
    for i in 0..cols {
        let mut acc = 0i128;
        for j in 0..cols {
            acc += snf.v.get(i, j) * y[j];
        }
        x[i] = acc.rem_euclid(m);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace_mod3() {
        let m = ModMatrix::from_rows(vec![vec![1, 2, 0], vec![2, 4, 0], vec![0, 0, 1]], 3);
        assert_eq!(m.rank().unwrap(), 2);
        let ns = m.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(m.apply(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_mod5() {
        let m = ModMatrix::from_rows(vec![vec![2, 1], vec![1, 3]], 5);
        let x = m.solve(&[3, 4]).unwrap().unwrap();
        assert_eq!(m.apply(&x), vec![3, 4]);
        let singular = ModMatrix::from_rows(vec![vec![1, 1], vec![2, 2]], 5);
        assert!(singular.solve(&[1, 0]).unwrap().is_none());
    }

    #[test]
    fn snf_known_values() {
        // diag(2, 0) stays put
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 0]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.factors, vec![2, 0]);
        assert!(snf.verify(&m));
        // [[2,4],[6,8]] has invariant factors (2, 4): d1 = gcd, d1*d2 = |det| = 8
        let m = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.factors, vec![2, 4]);
        assert!(snf.verify(&m));
        // zero matrix: all factors zero
        let m = IntMatrix::zero(3, 2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.factors, vec![0, 0]);
        assert!(snf.verify(&m));
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = IntMatrix::from_rows(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m));
        let nonzero: Vec<i128> = snf.factors.iter().copied().filter(|&d| d != 0).collect();
        for w in nonzero.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        assert_eq!(snf.factors, vec![1, 3, 21, 0]);
    }

    #[test]
    fn quotient_factors_mod4() {
        // ker(0) / im(2): Z_4 / 2Z_4 = Z_2
        let a = ModMatrix::zero(1, 1, 4);
        let b = ModMatrix::from_rows(vec![vec![2]], 4);
        assert_eq!(quotient_invariant_factors(&a, &b).unwrap(), vec![2]);
        // ker(0) / im(0): Z_4
        let b0 = ModMatrix::zero(1, 1, 4);
        assert_eq!(quotient_invariant_factors(&a, &b0).unwrap(), vec![4]);
        // ker(2x) / im(2): {0, 2} / {0, 2} trivial
        let a2 = ModMatrix::from_rows(vec![vec![2]], 4);
        assert_eq!(quotient_invariant_factors(&a2, &b).unwrap(), Vec::<i64>::new());
    }
}
