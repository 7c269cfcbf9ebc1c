//! Enumeration of all labeled n-ary f-structures of a given order by pruned
//! backtracking over right-translation columns, plus isomorphism
//! classification via canonical forms.

use crate::cayley::{decode_flat, CayleyOp};
use crate::endomap::Endomap;
use crate::error::{Error, Result};
use crate::par;
use crate::perm::Permutation;
use crate::structure::{FStructure, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistPolicy {
    /// All `q^q` set maps.
    AllEndomaps,
    /// Only the identity (classical, untwisted structures).
    IdentityOnly,
    /// Only bijections.
    BijectiveOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismPolicy {
    /// The twist must be an endomorphism of the operation. At orders <= 3
    /// this turns out not to change the class counts, but it is the reading
    /// the definitions suggest, so it is the default.
    RequireTwistEndomorphism,
    NoRequirement,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub order: usize,
    pub arity: usize,
    pub twist_policy: TwistPolicy,
    pub morphism_policy: MorphismPolicy,
    pub level: Level,
    /// Override the desk-scale guardrails.
    pub force: bool,
}

impl SearchConfig {
    pub fn quandles(order: usize, arity: usize) -> Self {
        SearchConfig {
            order,
            arity,
            twist_policy: TwistPolicy::AllEndomaps,
            morphism_policy: MorphismPolicy::RequireTwistEndomorphism,
            level: Level::Quandle,
            force: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::ZeroOrder);
        }
        if !(2..=3).contains(&self.arity) {
            return Err(Error::Unsupported(format!(
                "enumeration supports arity 2 and 3, got {}",
                self.arity
            )));
        }
        if self.level == Level::CrossedSet {
            return Err(Error::Unsupported(
                "crossed-set enumeration is not provided; filter quandles instead".into(),
            ));
        }
        if self.force {
            return Ok(());
        }
        let limit = match (self.arity, self.level) {
            (_, Level::Shelf) => 2, // columns are arbitrary maps: q^q per column
            (3, _) => 4,
            (2, _) => 5,
            _ => unreachable!(),
        };
        if self.order > limit {
            let cols = self.order.pow((self.arity - 1) as u32);
            let twists: f64 = match self.twist_policy {
                TwistPolicy::AllEndomaps => (self.order as f64).powi(self.order as i32),
                TwistPolicy::IdentityOnly => 1.0,
                TwistPolicy::BijectiveOnly => (1..=self.order).product::<usize>() as f64,
            };
            let per_col: f64 = if self.level == Level::Shelf {
                (self.order as f64).powi(self.order as i32)
            } else {
                (1..=self.order).product::<usize>() as f64
            };
            return Err(Error::Guardrail(format!(
                "order {} arity {} at {} level: ~{:.1e} twists x {:.1e}^{} column assignments before pruning",
                self.order,
                self.arity,
                self.level,
                twists,
                per_col,
                cols,
            )));
        }
        Ok(())
    }
}

fn twist_candidates(cfg: &SearchConfig) -> Vec<Endomap> {
    match cfg.twist_policy {
        TwistPolicy::AllEndomaps => Endomap::all(cfg.order),
        TwistPolicy::IdentityOnly => vec![Endomap::identity(cfg.order)],
        TwistPolicy::BijectiveOnly => Permutation::all(cfg.order)
            .into_iter()
            .map(Endomap::from)
            .collect(),
    }
}

/// One backtracking job: a fixed twist and a fixed first column.
struct SearchJob {
    twist: Endomap,
    first_column: Vec<usize>,
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    twist: &'a Endomap,
    /// Column candidates: permutations (rack and up) or arbitrary maps (shelf).
    candidates: &'a [Vec<usize>],
    /// `cols[t]` = images of `x -> T(x, tail_t)`, tails in ascending flat index.
    cols: Vec<Option<Vec<usize>>>,
    out: Vec<(Endomap, CayleyOp)>,
}

impl<'a> Searcher<'a> {
    fn q(&self) -> usize {
        self.cfg.order
    }

    fn col(&self, tail: &[usize]) -> Option<&Vec<usize>> {
        let q = self.q();
        let mut idx = 0;
        let mut stride = 1;
        for &a in tail {
            idx += a * stride;
            stride *= q;
        }
        self.cols[idx].as_ref()
    }

    /// Re-checks every f-distributivity instance whose four columns are all
    /// assigned. Cheap at desk scale; prunes hard.
    fn distributivity_ok(&self) -> bool {
        let q = self.q();
        let n = self.cfg.arity;
        let tails = q.pow((n - 1) as u32);
        let mut u = vec![0usize; n - 1];
        let mut y = vec![0usize; n - 1];
        for ui in 0..tails {
            decode_flat(ui, q, &mut u);
            let cu = match self.cols[ui] {
                Some(ref c) => c,
                None => continue,
            };
            let fu: Vec<usize> = u.iter().map(|&v| self.twist.apply(v)).collect();
            let cfu = match self.col(&fu) {
                Some(c) => c,
                None => continue,
            };
            for yi in 0..tails {
                decode_flat(yi, q, &mut y);
                let cy = match self.cols[yi] {
                    Some(ref c) => c,
                    None => continue,
                };
                // outer column: (T(y1,u), ..., T(y_{n-1},u))
                let outer: Vec<usize> = y.iter().map(|&v| cu[v]).collect();
                let co = match self.col(&outer) {
                    Some(c) => c,
                    None => continue,
                };
                for x in 0..q {
                    if cfu[cy[x]] != co[cu[x]] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `f(T(x, tail)) == T(f(x), f(tail))` for every decidable instance.
    fn twist_endomorphism_ok(&self) -> bool {
        let q = self.q();
        let n = self.cfg.arity;
        let tails = q.pow((n - 1) as u32);
        let mut t = vec![0usize; n - 1];
        for ti in 0..tails {
            decode_flat(ti, q, &mut t);
            let c = match self.cols[ti] {
                Some(ref c) => c,
                None => continue,
            };
            let ft: Vec<usize> = t.iter().map(|&v| self.twist.apply(v)).collect();
            let cf = match self.col(&ft) {
                Some(c) => c,
                None => continue,
            };
            for x in 0..q {
                if self.twist.apply(c[x]) != cf[self.twist.apply(x)] {
                    return false;
                }
            }
        }
        true
    }

    fn prune_ok(&self) -> bool {
        self.distributivity_ok()
            && (self.cfg.morphism_policy == MorphismPolicy::NoRequirement
                || self.twist_endomorphism_ok())
    }

    fn column_admissible(&self, tail_idx: usize, cand: &[usize]) -> bool {
        if self.cfg.level < Level::Quandle {
            return true;
        }
        // quandle diagonal: the column at tail (x, ..., x) must send x to f(x)
        let q = self.q();
        let n = self.cfg.arity;
        let mut t = vec![0usize; n - 1];
        decode_flat(tail_idx, q, &mut t);
        let first = t[0];
        if t.iter().all(|&v| v == first) {
            return cand[first] == self.twist.apply(first);
        }
        true
    }

    fn run(&mut self, tail_idx: usize) {
        let q = self.q();
        let n = self.cfg.arity;
        let tails = q.pow((n - 1) as u32);
        if tail_idx == tails {
            let mut table = Vec::with_capacity(q.pow(n as u32));
            for col in &self.cols {
                table.extend_from_slice(col.as_ref().expect("all columns assigned"));
            }
            let op = CayleyOp::new(n, q, table).expect("search emits well-formed tables");
            self.out.push((self.twist.clone(), op));
            return;
        }
        for cand in self.candidates {
            if !self.column_admissible(tail_idx, cand) {
                continue;
            }
            self.cols[tail_idx] = Some(cand.clone());
            if self.prune_ok() {
                self.run(tail_idx + 1);
            }
        }
        self.cols[tail_idx] = None;
    }
}

fn column_candidates(cfg: &SearchConfig) -> Vec<Vec<usize>> {
    if cfg.level >= Level::Rack {
        Permutation::all(cfg.order)
            .into_iter()
            .map(|p| p.images().to_vec())
            .collect()
    } else {
        Endomap::all(cfg.order)
            .into_iter()
            .map(|f| f.images().to_vec())
            .collect()
    }
}

fn run_search(cfg: &SearchConfig, parallel: bool) -> Result<Vec<FStructure>> {
    cfg.validate()?;
    let candidates = column_candidates(cfg);
    let mut jobs = Vec::new();
    for twist in twist_candidates(cfg) {
        for cand in &candidates {
            jobs.push(SearchJob {
                twist: twist.clone(),
                first_column: cand.clone(),
            });
        }
    }
    let cfg_ref = &cfg;
    let cands_ref = &candidates;
    let chunks: Vec<Vec<(Endomap, CayleyOp)>> = par::map_items(jobs, parallel, move |job| {
        let tails = cfg_ref.order.pow((cfg_ref.arity - 1) as u32);
        let mut searcher = Searcher {
            cfg: cfg_ref,
            twist: &job.twist,
            candidates: cands_ref,
            cols: vec![None; tails],
            out: Vec::new(),
        };
        if !searcher.column_admissible(0, &job.first_column) {
            return Vec::new();
        }
        searcher.cols[0] = Some(job.first_column.clone());
        if searcher.prune_ok() {
            searcher.run(1);
        }
        searcher.out
    });
    let mut found: Vec<(Endomap, CayleyOp)> = chunks.into_iter().flatten().collect();
    // deterministic emission order: lexicographic on (twist table, op table)
    found.sort();
    Ok(found
        .into_iter()
        .map(|(twist, op)| FStructure::new_unchecked(op, twist, cfg.level))
        .collect())
}

/// All labeled structures satisfying `cfg`, in lexicographic order of
/// `(twist table, op table)`. Parallel over disjoint search-tree prefixes
/// when the `parallel` feature is enabled.
pub fn enumerate(cfg: &SearchConfig) -> Result<Vec<FStructure>> {
    run_search(cfg, true)
}

/// Sequential variant of [`enumerate`] (same output, single worker).
pub fn enumerate_seq(cfg: &SearchConfig) -> Result<Vec<FStructure>> {
    run_search(cfg, false)
}

// ---------------------------------------------------------------------------
// canonical forms and isomorphism
// ---------------------------------------------------------------------------

/// Relabels a structure along a permutation of the carrier. Axioms are
/// invariant under relabeling, so the certified level carries over.
pub fn relabel(s: &FStructure, sigma: &Permutation) -> FStructure {
    let q = s.order();
    let n = s.arity();
    let inv = sigma.inverse();
    let op = CayleyOp::from_fn(n, q, |args| {
        let pre: Vec<usize> = args.iter().map(|&x| inv.apply(x)).collect();
        sigma.apply(s.eval(&pre))
    })
    .expect("relabeling preserves shape");
    let twist = Endomap::from_images(
        (0..q)
            .map(|x| sigma.apply(s.twist().apply(inv.apply(x))))
            .collect(),
    )
    .expect("relabeling preserves shape");
    FStructure::new_unchecked(op, twist, s.level())
}

/// Canonical key: twist table concatenated with the op table.
pub fn canonical_key(s: &FStructure) -> Vec<usize> {
    let mut key = s.twist().images().to_vec();
    key.extend_from_slice(s.op().table());
    key
}

/// Minimum over all `q!` relabelings under the lexicographic order on
/// `(twist table, op table)`. Idempotent; isomorphic inputs agree.
pub fn canonical_form(s: &FStructure) -> FStructure {
    Permutation::all(s.order())
        .iter()
        .map(|sigma| relabel(s, sigma))
        .min_by(|a, b| canonical_key(a).cmp(&canonical_key(b)))
        .expect("at least the identity relabeling")
}

/// A bijection intertwining ops and twists, if one exists.
pub fn are_isomorphic(s1: &FStructure, s2: &FStructure) -> Result<Option<Permutation>> {
    if s1.arity() != s2.arity() {
        return Err(Error::ArityMismatch(s1.arity(), s2.arity()));
    }
    if s1.order() != s2.order() {
        return Err(Error::OrderMismatch(s1.order(), s2.order()));
    }
    for sigma in Permutation::all(s1.order()) {
        let moved = relabel(s1, &sigma);
        if moved.op() == s2.op() && moved.twist() == s2.twist() {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

/// One isomorphism class of the classifier output.
#[derive(Debug, Clone)]
pub struct IsoClassReport {
    pub representative: FStructure,
    pub class_size: usize,
    /// Permutation-column text for ternary structures, per-column cycles
    /// otherwise.
    pub rendering: String,
    pub twist_is_identity: bool,
}

/// Partitions labeled structures into isomorphism classes by canonical form,
/// sorted by canonical representative.
pub fn classify(items: &[FStructure]) -> Vec<IsoClassReport> {
    use std::collections::BTreeMap;
    let canon: Vec<(Vec<usize>, FStructure)> = par::par_map(items.to_vec(), |s| {
        let c = canonical_form(&s);
        (canonical_key(&c), c)
    });
    let mut groups: BTreeMap<Vec<usize>, (FStructure, usize)> = BTreeMap::new();
    for (key, c) in canon {
        groups
            .entry(key)
            .and_modify(|e| e.1 += 1)
            .or_insert((c, 1));
    }
    groups
        .into_values()
        .map(|(rep, class_size)| {
            let rendering = crate::permcol::render_columns(&rep);
            let twist_is_identity = rep.twist().is_identity();
            IsoClassReport {
                representative: rep,
                class_size,
                rendering,
                twist_is_identity,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{affine_structure, AffineParams};

    fn quandle_cfg(order: usize) -> SearchConfig {
        SearchConfig::quandles(order, 3)
    }

    #[test]
    fn order_one_is_forced() {
        let out = enumerate(&quandle_cfg(1)).unwrap();
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn order_two_labeled_count() {
        // 8 labeled ternary f-quandles over Z_2 (both morphism policies agree)
        let out = enumerate(&quandle_cfg(2)).unwrap();
        assert_eq!(out.len(), 8);
        let mut cfg = quandle_cfg(2);
        cfg.morphism_policy = MorphismPolicy::NoRequirement;
        assert_eq!(enumerate(&cfg).unwrap().len(), 8);
    }

    #[test]
    fn order_two_classifies_into_six() {
        let out = enumerate(&quandle_cfg(2)).unwrap();
        let classes = classify(&out);
        assert_eq!(classes.len(), 6);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.class_size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 1, 1, 2, 2]);
        assert_eq!(classes.iter().filter(|c| c.twist_is_identity).count(), 2);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = quandle_cfg(2);
        let a = enumerate(&cfg).unwrap();
        let b = enumerate_seq(&cfg).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.op(), y.op());
            assert_eq!(x.twist(), y.twist());
        }
    }

    #[test]
    fn emission_is_sorted() {
        let out = enumerate(&quandle_cfg(2)).unwrap();
        let keys: Vec<Vec<usize>> = out.iter().map(canonical_key_raw).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        fn canonical_key_raw(s: &FStructure) -> Vec<usize> {
            let mut k = s.twist().images().to_vec();
            k.extend_from_slice(s.op().table());
            k
        }
    }

    #[test]
    fn guardrail_refuses_large_orders() {
        let cfg = quandle_cfg(5);
        assert!(matches!(enumerate(&cfg), Err(Error::Guardrail(_))));
    }

    #[test]
    fn canonical_form_is_idempotent_and_iso_invariant() {
        let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
        let c = canonical_form(&s);
        let cc = canonical_form(&c);
        assert_eq!(c.op(), cc.op());
        assert_eq!(c.twist(), cc.twist());
        let sigma = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let moved = relabel(&s, &sigma);
        let cm = canonical_form(&moved);
        assert_eq!(c.op(), cm.op());
        assert_eq!(c.twist(), cm.twist());
        assert!(are_isomorphic(&s, &moved).unwrap().is_some());
    }

    #[test]
    fn non_isomorphic_order_two_classes() {
        // tau = x and tau = x+1 over Z_2 are distinct classes
        let a = affine_structure(&AffineParams::new(2, &[1, 0, 0]).unwrap(), None).unwrap();
        let op = CayleyOp::from_fn(3, 2, |args| (args[0] + 1) % 2).unwrap();
        let b = FStructure::at_highest_level(op, Endomap::from_images(vec![1, 0]).unwrap()).unwrap();
        assert!(are_isomorphic(&a, &b).unwrap().is_none());
        assert_ne!(canonical_key(&canonical_form(&a)), canonical_key(&canonical_form(&b)));
    }

    #[test]
    fn iso_witness_intertwines() {
        let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
        let sigma = Permutation::from_images(vec![2, 0, 1]).unwrap();
        let moved = relabel(&s, &sigma);
        let w = are_isomorphic(&s, &moved).unwrap().expect("isomorphic by construction");
        let phi = crate::morphism::CarrierMap::new(w.images().to_vec(), 3).unwrap();
        assert!(crate::morphism::is_isomorphism(&phi, &s, &moved).unwrap().is_ok());
    }
}
