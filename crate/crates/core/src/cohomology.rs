//! Cohomology of binary and ternary f-structures with scalar coefficient
//! actions over `Z_m`.
//!
//! Degree convention: a p-cochain takes `(n-1)(p-1)+1` arguments, so ternary
//! cochains sit on X, X^3, X^5, ... — the convention carried by the worked
//! low-degree formulas. `delta^0 = 0`, so `H^1 = ker delta^1`.
//!
//! The quandle complex restricts p-cochains (p >= 2) to those vanishing on
//! tuples whose first argument repeats inside the leading block, the
//! higher-arity analogue of the classical `psi(x,x) = 0` condition; this is
//! the regime in which the published kernel dimensions are stated. The
//! rack complex applies no such restriction.

use crate::cayley::decode_flat;
use crate::endomap::Endomap;
use crate::error::{Error, Result};
use crate::linalg::{is_prime, quotient_invariant_factors, ModMatrix};
use crate::par;
use crate::structure::{FStructure, Level};

/// Scalar coefficient action: `eta` multiplies the first slot, `tails[j]`
/// the (j+2)-nd slot, and `g` acts on coefficients (the analogue of the
/// twist on the fiber side). For the Alexander choice `g = eta + sum(tails)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarModuleParams {
    pub modulus: i64,
    pub eta: i64,
    pub tails: Vec<i64>,
    pub g: i64,
}

impl ScalarModuleParams {
    pub fn new(modulus: i64, eta: i64, tails: &[i64], g: i64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::ZeroOrder);
        }
        if tails.is_empty() {
            return Err(Error::BadArity(tails.len() + 1));
        }
        let reduce = |v: i64| v.rem_euclid(modulus);
        let eta = reduce(eta);
        if gcd(eta, modulus) != 1 {
            return Err(Error::NotAUnit(eta, modulus as u64));
        }
        Ok(ScalarModuleParams {
            modulus,
            eta,
            tails: tails.iter().map(|&t| reduce(t)).collect(),
            g: reduce(g),
        })
    }

    /// Alexander-type action with `g` the coefficient sum.
    pub fn alexander(modulus: i64, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::BadArity(coeffs.len()));
        }
        let g = coeffs.iter().sum::<i64>();
        ScalarModuleParams::new(modulus, coeffs[0], &coeffs[1..], g)
    }

    pub fn arity(&self) -> usize {
        self.tails.len() + 1
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of arguments of a p-cochain over an n-ary structure.
pub fn cochain_args(arity: usize, degree: usize) -> usize {
    (arity - 1) * (degree - 1) + 1
}

/// Dense table of a cochain `X^k -> Z_m`, flat-indexed (first argument fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub arity: usize,
    pub order: usize,
    pub modulus: i64,
    pub values: Vec<i64>,
}

impl Cochain {
    pub fn zero(arity: usize, order: usize, modulus: i64, degree: usize) -> Result<Self> {
        let len = checked_dim(order, cochain_args(arity, degree))?;
        Ok(Cochain {
            degree,
            arity,
            order,
            modulus,
            values: vec![0; len],
        })
    }

    pub fn from_values(
        arity: usize,
        order: usize,
        modulus: i64,
        degree: usize,
        values: Vec<i64>,
    ) -> Result<Self> {
        let len = checked_dim(order, cochain_args(arity, degree))?;
        if values.len() != len {
            return Err(Error::TableSize {
                expected: len,
                got: values.len(),
            });
        }
        Ok(Cochain {
            degree,
            arity,
            order,
            modulus,
            values: values.into_iter().map(|v| v.rem_euclid(modulus)).collect(),
        })
    }

    pub fn args(&self) -> usize {
        cochain_args(self.arity, self.degree)
    }

    pub fn get(&self, tuple: &[usize]) -> i64 {
        self.values[flat_index(tuple, self.order)]
    }

    /// Indicator basis cochain of the tuple at `flat`.
    pub fn indicator(arity: usize, order: usize, modulus: i64, degree: usize, flat: usize) -> Result<Self> {
        let mut c = Cochain::zero(arity, order, modulus, degree)?;
        c.values[flat] = 1;
        Ok(c)
    }

    /// Renders the cochain in chi-notation, e.g. `2χ_0 + χ_1` or
    /// `χ_(1,2) + 2χ_(2,1)`.
    pub fn chi_string(&self) -> String {
        let k = self.args();
        let mut terms = Vec::new();
        let mut tuple = vec![0usize; k];
        for (i, &v) in self.values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            decode_flat(i, self.order, &mut tuple);
            let sub = if k == 1 {
                tuple[0].to_string()
            } else {
                format!(
                    "({})",
                    tuple
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            };
            let coeff = if v == 1 { String::new() } else { v.to_string() };
            terms.push(format!("{coeff}χ_{sub}"));
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

fn flat_index(tuple: &[usize], order: usize) -> usize {
    let mut idx = 0;
    let mut stride = 1;
    for &x in tuple {
        idx += x * stride;
        stride *= order;
    }
    idx
}

fn checked_dim(order: usize, args: usize) -> Result<usize> {
    order
        .checked_pow(args as u32)
        .filter(|&n| n <= 1 << 27)
        .ok_or_else(|| Error::DimensionOverflow(format!("{order}^{args}")))
}

/// Left-nested bracket: fold the operation over blocks of `n-1` arguments,
/// twisting the k-th appended block by `f^k`. With a single argument the
/// fold is empty and the bracket is that argument.
pub fn bracket_eval(s: &FStructure, args: &[usize]) -> Result<usize> {
    let n = s.arity();
    if args.is_empty() || (args.len() - 1) % (n - 1) != 0 {
        return Err(Error::ArgCount {
            expected: n,
            got: args.len(),
        });
    }
    let mut acc = args[0];
    let mut pos = 1;
    let mut power = Endomap::identity(s.order());
    let mut first = true;
    while pos < args.len() {
        let block = &args[pos..pos + (n - 1)];
        if !first {
            power = s.twist().compose(&power);
        }
        let mut call = Vec::with_capacity(n);
        call.push(acc);
        call.extend(block.iter().map(|&x| power.apply(x)));
        acc = s.eval(&call);
        pos += n - 1;
        first = false;
    }
    Ok(acc)
}

/// Emits the terms of `(delta^p phi)(out_tuple)` as `(flat input index,
/// coefficient)` pairs. Degree 1 uses the displayed low-degree orientation
/// `eta*phi(x1) + tails*phi(rest) - phi(T(args))`; higher degrees follow the
/// general alternating formula, whose p = 2 instance is exactly the
/// displayed 2-cocycle condition.
fn coboundary_terms(
    s: &FStructure,
    params: &ScalarModuleParams,
    p: usize,
    out: &[usize],
    mut emit: impl FnMut(usize, i64),
) {
    let n = s.arity();
    let q = s.order();
    debug_assert_eq!(out.len(), cochain_args(n, p + 1));
    if p == 1 {
        emit(out[0], params.eta);
        for (j, &t) in params.tails.iter().enumerate() {
            emit(flat_index(&[out[j + 1]], q), t);
        }
        emit(s.eval(out), -1);
        return;
    }
    let step = n - 1;
    for i in 1..=p {
        let sign = if i % 2 == 1 { -1 } else { 1 };
        // block i occupies 0-based positions step*i - (step-1) ..= step*i
        let lo = step * (i - 1) + 1;
        let hi = step * i;
        // eta term: drop the block
        let kept: Vec<usize> = out
            .iter()
            .enumerate()
            .filter(|&(j, _)| j < lo || j > hi)
            .map(|(_, &x)| x)
            .collect();
        emit(flat_index(&kept, q), sign * params.eta);
        // composed term: translate everything before the block, twist after
        let tail: Vec<usize> = out[lo..=hi].to_vec();
        let mut composed: Vec<usize> = Vec::with_capacity(out.len() - step);
        for &x in &out[..lo] {
            composed.push(s.op().translate(x, &tail));
        }
        for &x in &out[hi + 1..] {
            composed.push(s.twist().apply(x));
        }
        emit(flat_index(&composed, q), -sign);
    }
    // tail terms: drop x1 and all of the first block except slot j
    for (j, &t) in params.tails.iter().enumerate() {
        let mut kept: Vec<usize> = Vec::with_capacity(out.len() - step);
        kept.push(out[j + 1]);
        kept.extend_from_slice(&out[step + 1..]);
        emit(flat_index(&kept, q), -t);
    }
}

fn check_compat(s: &FStructure, params: &ScalarModuleParams) -> Result<()> {
    if params.arity() != s.arity() {
        return Err(Error::ArityMismatch(params.arity(), s.arity()));
    }
    if !(2..=3).contains(&s.arity()) {
        return Err(Error::Unsupported(
            "cohomology is provided for arity 2 and 3".into(),
        ));
    }
    Ok(())
}

/// `delta^p phi` as a cochain of degree `p+1`.
pub fn coboundary_apply(
    s: &FStructure,
    params: &ScalarModuleParams,
    phi: &Cochain,
) -> Result<Cochain> {
    check_compat(s, params)?;
    if phi.arity != s.arity() || phi.order != s.order() {
        return Err(Error::OrderMismatch(phi.order, s.order()));
    }
    let p = phi.degree;
    let mut out = Cochain::zero(s.arity(), s.order(), params.modulus, p + 1)?;
    let q = s.order();
    let args = cochain_args(s.arity(), p + 1);
    let mut tuple = vec![0usize; args];
    for row in 0..out.values.len() {
        decode_flat(row, q, &mut tuple);
        let mut acc = 0i64;
        coboundary_terms(s, params, p, &tuple, |idx, coeff| {
            acc += coeff * phi.values[idx];
        });
        out.values[row] = acc.rem_euclid(params.modulus);
    }
    Ok(out)
}

/// Matrix of `delta^p` on the full cochain spaces: column j is
/// `delta(e_j)` for the indicator of the j-th flat-indexed tuple.
#[derive(Debug, Clone)]
pub struct CochainMatrix {
    pub degree_from: usize,
    pub degree_to: usize,
    pub matrix: ModMatrix,
}

pub fn coboundary_matrix(
    s: &FStructure,
    params: &ScalarModuleParams,
    p: usize,
) -> Result<CochainMatrix> {
    check_compat(s, params)?;
    if p == 0 {
        return Err(Error::Unsupported("delta^0 is the zero map".into()));
    }
    let q = s.order();
    let rows = checked_dim(q, cochain_args(s.arity(), p + 1))?;
    let cols = checked_dim(q, cochain_args(s.arity(), p))?;
    if rows.saturating_mul(cols) > 1 << 26 {
        return Err(Error::DimensionOverflow(format!("{rows} x {cols} matrix")));
    }
    let m = params.modulus;
    let row_data: Vec<Vec<i64>> = par::par_map((0..rows).collect(), |row| {
        let mut tuple = vec![0usize; cochain_args(s.arity(), p + 1)];
        decode_flat(row, q, &mut tuple);
        let mut out = vec![0i64; cols];
        coboundary_terms(s, params, p, &tuple, |idx, coeff| {
            out[idx] = (out[idx] + coeff).rem_euclid(m);
        });
        out
    });
    Ok(CochainMatrix {
        degree_from: p,
        degree_to: p + 1,
        matrix: ModMatrix::from_rows(row_data, m),
    })
}

/// Which cochain complex to compute in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    /// Full function spaces.
    Rack,
    /// p-cochains (p >= 2) vanish where the first argument repeats inside
    /// the leading block.
    Quandle,
}

/// Flat indices of the non-degenerate tuples of a degree-p cochain domain.
fn free_coords(s: &FStructure, p: usize, kind: ComplexKind) -> Result<Vec<usize>> {
    let q = s.order();
    let args = cochain_args(s.arity(), p);
    let total = checked_dim(q, args)?;
    if kind == ComplexKind::Rack || p < 2 {
        return Ok((0..total).collect());
    }
    let n = s.arity();
    let mut tuple = vec![0usize; args];
    Ok((0..total)
        .filter(|&i| {
            decode_flat(i, q, &mut tuple);
            !(1..n).any(|j| tuple[j] == tuple[0])
        })
        .collect())
}

/// Result of a cohomology-group computation at one degree.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub modulus: i64,
    /// Dimension of `ker delta^p` on the (possibly restricted) domain.
    pub dim_ker: usize,
    /// Rank of `delta^{p-1}` on its domain (0 at degree 1: `delta^0 = 0`).
    pub dim_im_prev: usize,
    /// `dim_ker - dim_im_prev`, for prime moduli.
    pub h_dim: Option<usize>,
    /// Invariant factors of `ker/im`, for non-prime moduli.
    pub invariant_factors: Option<Vec<i64>>,
    pub kernel_basis: Vec<Cochain>,
    pub image_basis: Vec<Cochain>,
    /// Preimage certificates: `delta(image_preimages[i]) == image_basis[i]`.
    pub image_preimages: Vec<Cochain>,
}

/// Columns of `delta^p` restricted to the free coordinates of the domain;
/// rows stay the full codomain.
fn restricted_columns(
    s: &FStructure,
    params: &ScalarModuleParams,
    p: usize,
    coords: &[usize],
) -> Result<Vec<Vec<i64>>> {
    let cols: Result<Vec<Vec<i64>>> = par::par_map(coords.to_vec(), |j| {
        let phi = Cochain::indicator(s.arity(), s.order(), params.modulus, p, j)?;
        Ok(coboundary_apply(s, params, &phi)?.values)
    })
    .into_iter()
    .collect();
    cols
}

/// `H^p = ker delta^p / im delta^{p-1}` with `delta^0 = 0`. Prime moduli get
/// dimensions, non-prime moduli invariant factors (which requires the
/// restricted complex to close; a genuine containment failure is reported
/// as unsupported rather than silently subtracted away).
pub fn cohomology_group(
    s: &FStructure,
    params: &ScalarModuleParams,
    p: usize,
    kind: ComplexKind,
) -> Result<CohomologyGroup> {
    check_compat(s, params)?;
    if p == 0 {
        return Err(Error::Unsupported("cohomology starts at degree 1".into()));
    }
    if kind == ComplexKind::Quandle && s.level() < Level::Quandle {
        return Err(Error::Precondition(
            "quandle complex requested for a structure below quandle level".into(),
        ));
    }
    let m = params.modulus;
    let q = s.order();
    let dom = free_coords(s, p, kind)?;
    let cols = restricted_columns(s, params, p, &dom)?;
    let out_rows = checked_dim(q, cochain_args(s.arity(), p + 1))?;
    let a = ModMatrix::from_columns(&cols, out_rows, m);

    // previous differential on its own restricted domain
    let (b, prev_dom) = if p == 1 {
        (ModMatrix::zero(dom.len(), 0, m), Vec::new())
    } else {
        let prev = free_coords(s, p - 1, kind)?;
        let pcols = restricted_columns(s, params, p - 1, &prev)?;
        // express image inside the degree-p domain coordinates
        let mut rows = vec![vec![0i64; prev.len()]; dom.len()];
        for (jj, col) in pcols.iter().enumerate() {
            for (ii, &coord) in dom.iter().enumerate() {
                rows[ii][jj] = col[coord];
            }
            // containment check: the image must vanish off the domain
            if kind == ComplexKind::Quandle {
                let in_dom: std::collections::HashSet<usize> = dom.iter().copied().collect();
                for (coord, &v) in col.iter().enumerate() {
                    if v != 0 && !in_dom.contains(&coord) {
                        return Err(Error::Unsupported(format!(
                            "delta of basis cochain {jj} at degree {} leaves the quandle subcomplex",
                            p - 1
                        )));
                    }
                }
            }
        }
        (ModMatrix::from_rows(rows, m), prev)
    };

    if is_prime(m) {
        let dim_ker_vecs = a.nullspace()?;
        let dim_ker = dim_ker_vecs.len();
        let rank_prev = b.rank()?;
        let embed = |coords: &[usize], vals: &[i64], degree: usize| -> Result<Cochain> {
            let mut c = Cochain::zero(s.arity(), q, m, degree)?;
            for (k, &coord) in coords.iter().enumerate() {
                c.values[coord] = vals[k].rem_euclid(m);
            }
            Ok(c)
        };
        let kernel_basis: Result<Vec<Cochain>> = dim_ker_vecs
            .iter()
            .map(|v| embed(&dom, v, p))
            .collect();
        // image basis: delta of the domain indicators at pivot columns
        let mut image_basis = Vec::new();
        let mut image_preimages = Vec::new();
        if p > 1 {
            let mut seen = ModMatrix::zero(dom.len(), 0, m);
            for (jj, &prev_coord) in prev_dom.iter().enumerate() {
                let col = b.column(jj);
                if col.iter().all(|&v| v == 0) {
                    continue;
                }
                let mut candidate = Vec::with_capacity(seen.cols + 1);
                for k in 0..seen.cols {
                    candidate.push(seen.column(k));
                }
                if seen.cols > 0 && seen.column_span_contains(&col)? {
                    continue;
                }
                candidate.push(col.clone());
                seen = ModMatrix::from_columns(&candidate, dom.len(), m);
                image_basis.push(embed(&dom, &col, p)?);
                image_preimages.push(Cochain::indicator(s.arity(), q, m, p - 1, prev_coord)?);
                if image_basis.len() == rank_prev {
                    break;
                }
            }
        }
        Ok(CohomologyGroup {
            degree: p,
            modulus: m,
            dim_ker,
            dim_im_prev: rank_prev,
            h_dim: Some(dim_ker - rank_prev),
            invariant_factors: None,
            kernel_basis: kernel_basis?,
            image_basis,
            image_preimages,
        })
    } else {
        // restrict A's rows to the degree-(p+1) free coordinates? Not needed:
        // kernel is unaffected by extra zero rows. The quotient requires the
        // composite to vanish, which quotient_invariant_factors enforces.
        let a_on_dom = {
            // rows: keep all codomain coordinates
            a.clone()
        };
        let factors = quotient_invariant_factors(&a_on_dom, &b)?;
        Ok(CohomologyGroup {
            degree: p,
            modulus: m,
            dim_ker: 0,
            dim_im_prev: 0,
            h_dim: None,
            invariant_factors: Some(factors),
            kernel_basis: Vec::new(),
            image_basis: Vec::new(),
            image_preimages: Vec::new(),
        })
    }
}

// ---------------------------------------------------------------------------
// the twisted complex: equivariant subspaces and delta o delta
// ---------------------------------------------------------------------------

/// Basis of `{phi : phi(F(t)) = g * phi(t)}` for the componentwise action of
/// the twist on argument tuples. The constraint graph is functional (each
/// coordinate points at its image), so the basis is one vector per
/// component whose cycle length L has `g^L = 1`, computed in linear time.
fn equivariant_basis(
    s: &FStructure,
    params: &ScalarModuleParams,
    p: usize,
) -> Result<Vec<Vec<i64>>> {
    let m = params.modulus;
    if !is_prime(m) {
        return Err(Error::Unsupported(
            "the twisted-complex machinery needs a prime modulus".into(),
        ));
    }
    let q = s.order();
    let args = cochain_args(s.arity(), p);
    let total = checked_dim(q, args)?;
    let mut tau = vec![0usize; total];
    let mut tuple = vec![0usize; args];
    for i in 0..total {
        decode_flat(i, q, &mut tuple);
        let image: Vec<usize> = tuple.iter().map(|&x| s.twist().apply(x)).collect();
        tau[i] = flat_index(&image, q);
    }
    let g = params.g.rem_euclid(m);
    if g == 0 {
        // phi must vanish on the image of tau
        let mut in_image = vec![false; total];
        for &t in &tau {
            in_image[t] = true;
        }
        return Ok((0..total)
            .filter(|&i| !in_image[i])
            .map(|i| {
                let mut v = vec![0i64; total];
                v[i] = 1;
                v
            })
            .collect());
    }
    let ginv = crate::linalg::mod_inverse(g, m)?;
    // component labels via the functional graph
    let mut comp = vec![usize::MAX; total];
    let mut ncomp = 0;
    for start in 0..total {
        if comp[start] != usize::MAX {
            continue;
        }
        // walk forward to find the attached cycle or a labeled node
        let mut path = vec![start];
        let mut cur = start;
        comp[start] = total + ncomp; // temporary mark
        loop {
            cur = tau[cur];
            if comp[cur] == usize::MAX {
                comp[cur] = total + ncomp;
                path.push(cur);
            } else {
                break;
            }
        }
        let label = if comp[cur] >= total { ncomp } else { comp[cur] };
        for &v in &path {
            comp[v] = label;
        }
        if label == ncomp {
            ncomp += 1;
        }
    }
    // for each component: cycle length and a representative on the cycle
    let mut rep = vec![usize::MAX; ncomp];
    let mut cyclen = vec![0usize; ncomp];
    for start in 0..total {
        let c = comp[start];
        if rep[c] != usize::MAX {
            continue;
        }
        // tortoise-free cycle detection by walking far enough
        let mut cur = start;
        for _ in 0..=total {
            cur = tau[cur];
        }
        // cur is on the cycle now
        let anchor = cur;
        let mut len = 1;
        cur = tau[cur];
        while cur != anchor {
            cur = tau[cur];
            len += 1;
        }
        rep[c] = anchor;
        cyclen[c] = len;
    }
    let mut basis = Vec::new();
    for c in 0..ncomp {
        // g^L == 1?
        let mut pw = 1i64;
        for _ in 0..cyclen[c] {
            pw = (pw * g).rem_euclid(m);
        }
        if pw != 1 {
            continue;
        }
        // propagate phi[rep] = 1 through the component by fixpoint sweeps:
        // phi[tau(t)] = g*phi[t]
        let mut v = vec![i64::MIN; total];
        v[rep[c]] = 1;
        let members: Vec<usize> = (0..total).filter(|&i| comp[i] == c).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for &t in &members {
                if v[t] != i64::MIN && v[tau[t]] == i64::MIN {
                    v[tau[t]] = (g * v[t]).rem_euclid(m);
                    changed = true;
                } else if v[t] == i64::MIN && v[tau[t]] != i64::MIN {
                    v[t] = (ginv * v[tau[t]]).rem_euclid(m);
                    changed = true;
                }
            }
        }
        let out: Vec<i64> = v
            .into_iter()
            .map(|x| if x == i64::MIN { 0 } else { x })
            .collect();
        basis.push(out);
    }
    Ok(basis)
}

/// Matrix of `delta^p` between the twist-equivariant subspaces. The basis
/// vectors of distinct components have disjoint supports, so coordinates
/// are read off at the representatives; any residue outside the span means
/// the complex does not close and is reported as an error.
fn restricted_delta(
    s: &FStructure,
    params: &ScalarModuleParams,
    p: usize,
    dom_basis: &[Vec<i64>],
    cod_basis: &[Vec<i64>],
) -> Result<ModMatrix> {
    let m = params.modulus;
    let cod_dim = checked_dim(s.order(), cochain_args(s.arity(), p + 1))?;
    // leading support coordinate of each codomain basis vector
    let lead: Vec<(usize, i64)> = cod_basis
        .iter()
        .map(|v| {
            let i = v.iter().position(|&x| x != 0).expect("basis vector is nonzero");
            (i, v[i])
        })
        .collect();
    let mut out = ModMatrix::zero(cod_basis.len(), dom_basis.len(), m);
    for (j, dvec) in dom_basis.iter().enumerate() {
        let phi = Cochain::from_values(s.arity(), s.order(), m, p, dvec.clone())?;
        let img = coboundary_apply(s, params, &phi)?;
        let mut residual = img.values.clone();
        for (k, &(coord, unit)) in lead.iter().enumerate() {
            let coeff = (residual[coord] * crate::linalg::mod_inverse(unit, m)?).rem_euclid(m);
            if coeff != 0 {
                for (idx, &bv) in cod_basis[k].iter().enumerate() {
                    residual[idx] = (residual[idx] - coeff * bv).rem_euclid(m);
                }
                out.set(k, j, coeff);
            }
        }
        if residual.iter().any(|&v| v != 0) {
            let _ = cod_dim;
            return Err(Error::Unsupported(
                "coboundary leaves the equivariant subspace; the twisted complex does not close"
                    .into(),
            ));
        }
    }
    Ok(out)
}

/// Outcome of `verify_complex`: which composite failed, if any.
#[derive(Debug, Clone)]
pub struct ComplexViolation {
    pub degree: usize,
    pub entry: (usize, usize),
}

/// Verifies `delta^{p+1} o delta^p = 0` for all `p < p_max` on the
/// twist-equivariant subcomplex (the regime in which the coboundary
/// squares to zero; the twist must be an endomorphism of the structure).
pub fn verify_complex(
    s: &FStructure,
    params: &ScalarModuleParams,
    p_max: usize,
) -> Result<std::result::Result<(), ComplexViolation>> {
    check_compat(s, params)?;
    if s.twist_is_endomorphism().is_err() {
        return Err(Error::Precondition(
            "the cohomology twist must be an endomorphism of the structure".into(),
        ));
    }
    if p_max <= 1 {
        return Ok(Ok(()));
    }
    let bases: Result<Vec<Vec<Vec<i64>>>> = (1..=p_max + 1)
        .map(|p| equivariant_basis(s, params, p))
        .collect();
    let bases = bases?;
    let mut deltas = Vec::new();
    for p in 1..=p_max {
        deltas.push(restricted_delta(
            s,
            params,
            p,
            &bases[p - 1],
            &bases[p],
        )?);
    }
    for p in 1..p_max {
        let composite = deltas[p].mul(&deltas[p - 1]);
        if !composite.is_zero() {
            for i in 0..composite.rows {
                for j in 0..composite.cols {
                    if composite.get(i, j) != 0 {
                        return Ok(Err(ComplexViolation {
                            degree: p,
                            entry: (i, j),
                        }));
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{affine_structure, AffineParams};
    use crate::endomap::Endomap;

    fn ternary_example() -> (FStructure, ScalarModuleParams) {
        let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
        let p = ScalarModuleParams::alexander(3, &[2, 1, 1]).unwrap();
        (s, p)
    }

    fn binary_example() -> (FStructure, ScalarModuleParams) {
        let s = affine_structure(
            &AffineParams::new(3, &[1, 2]).unwrap(),
            Some(Endomap::constant(3, 0).unwrap()),
        )
        .unwrap();
        let p = ScalarModuleParams::alexander(3, &[1, 2]).unwrap();
        (s, p)
    }

    #[test]
    fn bracket_low_arities() {
        let (s, _) = ternary_example();
        assert_eq!(bracket_eval(&s, &[2]).unwrap(), 2);
        assert_eq!(bracket_eval(&s, &[0, 1, 2]).unwrap(), s.op().eval3(0, 1, 2));
        // [0,1,2,1,1] = T(T(0,1,2),1,1) = T(0,1,1) = 2
        assert_eq!(bracket_eval(&s, &[0, 1, 2, 1, 1]).unwrap(), 2);
        assert!(bracket_eval(&s, &[0, 1]).is_err());
    }

    #[test]
    fn bracket_iterates_twist_on_diagonal() {
        let s = crate::construct::dihedral_f_quandle(5, 2, 1).unwrap();
        let t = crate::construct::induced_from_binary(&s, 3).unwrap();
        for x in 0..5 {
            assert_eq!(bracket_eval(&t, &[x, x, x]).unwrap(), t.twist().apply(x));
            assert_eq!(
                bracket_eval(&t, &[x, x, x, x, x]).unwrap(),
                t.twist().power(2).apply(x)
            );
        }
    }

    #[test]
    fn one_cocycles_of_the_ternary_example() {
        let (s, p) = ternary_example();
        // phi = 2chi_0 + chi_1 is a 1-cocycle
        let phi = Cochain::from_values(3, 3, 3, 1, vec![2, 1, 0]).unwrap();
        let img = coboundary_apply(&s, &p, &phi).unwrap();
        assert!(img.values.iter().all(|&v| v == 0));
        // phi = chi_0 is not
        let phi = Cochain::from_values(3, 3, 3, 1, vec![1, 0, 0]).unwrap();
        let img = coboundary_apply(&s, &p, &phi).unwrap();
        assert!(img.values.iter().any(|&v| v != 0));
        // linearity sanity: delta(0) = 0
        let zero = Cochain::zero(3, 3, 3, 1).unwrap();
        assert!(coboundary_apply(&s, &p, &zero).unwrap().values.iter().all(|&v| v == 0));
    }

    #[test]
    fn binary_one_cocycle() {
        let (s, p) = binary_example();
        // chi_1 + 2chi_2
        let phi = Cochain::from_values(2, 3, 3, 1, vec![0, 1, 2]).unwrap();
        let img = coboundary_apply(&s, &p, &phi).unwrap();
        assert!(img.values.iter().all(|&v| v == 0));
    }

    #[test]
    fn matrix_agrees_with_apply() {
        let (s, p) = ternary_example();
        let mat = coboundary_matrix(&s, &p, 1).unwrap();
        assert_eq!(mat.matrix.rows, 27);
        assert_eq!(mat.matrix.cols, 3);
        assert_eq!(mat.matrix.rank().unwrap(), 1);
        for j in 0..3 {
            let phi = Cochain::indicator(3, 3, 3, 1, j).unwrap();
            let img = coboundary_apply(&s, &p, &phi).unwrap();
            assert_eq!(mat.matrix.column(j), img.values);
        }
        let mat2 = coboundary_matrix(&s, &p, 2).unwrap();
        assert_eq!(mat2.matrix.rows, 243);
        assert_eq!(mat2.matrix.cols, 27);
    }

    #[test]
    fn ternary_example_dimensions() {
        let (s, p) = ternary_example();
        let h1 = cohomology_group(&s, &p, 1, ComplexKind::Quandle).unwrap();
        assert_eq!(h1.h_dim, Some(2));
        assert_eq!(h1.dim_im_prev, 0);
        let h2 = cohomology_group(&s, &p, 2, ComplexKind::Quandle).unwrap();
        assert_eq!(h2.dim_ker, 3);
        assert_eq!(h2.dim_im_prev, 1);
        assert_eq!(h2.h_dim, Some(2));
        for k in &h2.kernel_basis {
            let img = coboundary_apply(&s, &p, k).unwrap();
            assert!(img.values.iter().all(|&v| v == 0));
        }
        for (img, pre) in h2.image_basis.iter().zip(&h2.image_preimages) {
            let d = coboundary_apply(&s, &p, pre).unwrap();
            assert_eq!(&d, img);
        }
    }

    #[test]
    fn binary_example_dimensions() {
        let (s, p) = binary_example();
        let h1 = cohomology_group(&s, &p, 1, ComplexKind::Quandle).unwrap();
        assert_eq!(h1.h_dim, Some(1));
        let h2 = cohomology_group(&s, &p, 2, ComplexKind::Quandle).unwrap();
        assert_eq!(h2.h_dim, Some(1));
    }

    #[test]
    fn complex_squares_to_zero() {
        let (s, p) = ternary_example();
        assert!(verify_complex(&s, &p, 3).unwrap().is_ok());
        let (s, p) = binary_example();
        assert!(verify_complex(&s, &p, 3).unwrap().is_ok());
    }

    #[test]
    fn rank_nullity_holds() {
        let (s, p) = ternary_example();
        for deg in 1..=2 {
            let mat = coboundary_matrix(&s, &p, deg).unwrap();
            let rank = mat.matrix.rank().unwrap();
            let null = mat.matrix.nullspace().unwrap().len();
            assert_eq!(rank + null, mat.matrix.cols);
        }
    }

    #[test]
    fn one_point_carrier_is_trivial() {
        let op = crate::cayley::CayleyOp::from_fn(3, 1, |_| 0).unwrap();
        let s = FStructure::new(op, Endomap::identity(1), Level::Quandle).unwrap();
        // delta^1 on the point is multiplication by (sum of coeffs) - 1,
        // a unit here, and the degenerate restriction empties C^p for p >= 2
        let p = ScalarModuleParams::alexander(3, &[1, 1, 1]).unwrap();
        for deg in 1..=3 {
            let h = cohomology_group(&s, &p, deg, ComplexKind::Quandle).unwrap();
            assert_eq!(h.h_dim, Some(0), "degree {deg}");
        }
    }

    #[test]
    fn chi_rendering() {
        let c = Cochain::from_values(3, 3, 3, 1, vec![2, 1, 0]).unwrap();
        assert_eq!(c.chi_string(), "2χ_0 + χ_1");
        let mut d = Cochain::zero(2, 3, 3, 2).unwrap();
        d.values[1 + 3 * 2] = 1;
        d.values[2 + 3 * 1] = 2;
        assert_eq!(d.chi_string(), "2χ_(2,1) + χ_(1,2)");
    }
}
