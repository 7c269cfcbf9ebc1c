//! The permutation-column notation of the published order-3 tables: for each
//! `z` (ascending) and each `y`, the cycle decomposition of `x -> T(x, y, z)`
//! with 1-based labels. Groups for distinct `z` are joined by `"; "`,
//! entries within a group by `","`.

use crate::cayley::CayleyOp;
use crate::endomap::Endomap;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::structure::FStructure;

/// Renders a ternary structure in permutation-column notation.
pub fn to_permutation_columns(s: &FStructure) -> Result<String> {
    if s.arity() != 3 {
        return Err(Error::Unsupported(format!(
            "permutation-column notation is a ternary rendering, got arity {}",
            s.arity()
        )));
    }
    let q = s.order();
    let mut groups = Vec::with_capacity(q);
    for z in 0..q {
        let mut entries = Vec::with_capacity(q);
        for y in 0..q {
            let images: Vec<usize> = (0..q).map(|x| s.op().eval3(x, y, z)).collect();
            let p = Permutation::from_images(images).map_err(|_| {
                Error::PermColumns(format!("column (y={y}, z={z}) is not a permutation"))
            })?;
            entries.push(p.cycle_string());
        }
        groups.push(entries.join(","));
    }
    Ok(groups.join("; "))
}

/// Rendering used by the classifier: permutation columns for ternary
/// structures, per-column cycles for binary ones, and the raw table as a
/// fallback when a column is not a permutation (shelf-level output).
pub fn render_columns(s: &FStructure) -> String {
    match s.arity() {
        3 => to_permutation_columns(s),
        2 => {
            let q = s.order();
            let cols: Result<Vec<String>> = (0..q)
                .map(|y| {
                    let images: Vec<usize> = (0..q).map(|x| s.op().eval2(x, y)).collect();
                    Ok(Permutation::from_images(images)
                        .map_err(|_| Error::PermColumns("non-permutation column".into()))?
                        .cycle_string())
                })
                .collect();
            cols.map(|c| c.join(","))
        }
        _ => Err(Error::Unsupported("no rendering".into())),
    }
    .unwrap_or_else(|_| format!("table {:?}", s.op().table()))
}

/// Parses permutation-column text back into a ternary structure.
///
/// When `twist` is `None` the diagonal `x -> T(x, x, x)` is used, which is
/// the twist of any quandle-level structure. The result is validated at its
/// highest passing level.
pub fn parse_permutation_columns(text: &str, twist: Option<Endomap>) -> Result<FStructure> {
    let groups: Vec<&str> = text.split(';').map(str::trim).collect();
    let q = groups.len();
    if q == 0 || text.trim().is_empty() {
        return Err(Error::PermColumns("empty input".into()));
    }
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(q * q);
    for group in &groups {
        let entries = split_entries(group)?;
        if entries.len() != q {
            return Err(Error::PermColumns(format!(
                "expected {q} columns per z-group, got {} in {group:?}",
                entries.len()
            )));
        }
        for entry in entries {
            let p = Permutation::parse_cycles(&entry, q)?;
            columns.push(p.images().to_vec());
        }
    }
    let mut table = vec![0usize; q * q * q];
    for z in 0..q {
        for y in 0..q {
            let col = &columns[z * q + y];
            for x in 0..q {
                table[x + q * (y + q * z)] = col[x];
            }
        }
    }
    let op = CayleyOp::new(3, q, table)?;
    let twist = match twist {
        Some(t) => {
            if t.order() != q {
                return Err(Error::OrderMismatch(t.order(), q));
            }
            t
        }
        None => Endomap::from_images((0..q).map(|x| op.eval3(x, x, x)).collect())?,
    };
    FStructure::at_highest_level(op, twist)
}

/// Splits a z-group like `"(1),(1 2),(13)"` into its cycle entries, tolerating
/// whitespace around separators and inside cycles.
fn split_entries(group: &str) -> Result<Vec<String>> {
    let mut entries = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in group.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::PermColumns(format!("unbalanced ')' in {group:?}")))?;
                current.push(ch);
            }
            ',' if depth == 0 => {
                if !current.trim().is_empty() {
                    entries.push(current.trim().to_string());
                }
                current.clear();
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::PermColumns(format!("unbalanced '(' in {group:?}")));
    }
    if !current.trim().is_empty() {
        entries.push(current.trim().to_string());
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::trivial_f_quandle;
    use crate::structure::Level;

    pub(crate) const TAU12: &str = "(1),(12),(13); (12),(1),(23); (13),(23),(1)";

    #[test]
    fn tau12_round_trip_and_rendering() {
        let s = parse_permutation_columns(TAU12, None).unwrap();
        assert_eq!(s.level(), Level::Quandle);
        assert!(s.twist().is_identity());
        assert_eq!(to_permutation_columns(&s).unwrap(), TAU12);
        // against the published Cayley table: T(1,2,1) = 2 in 1-based labels
        assert_eq!(s.op().eval3(0, 1, 0), 1);
    }

    #[test]
    fn trivial_renders_as_identities() {
        let s = trivial_f_quandle(&Endomap::identity(3), 3).unwrap();
        assert_eq!(
            to_permutation_columns(&s).unwrap(),
            "(1),(1),(1); (1),(1),(1); (1),(1),(1)"
        );
    }

    #[test]
    fn spaced_spelling_parses() {
        let spaced = "(1),(1 2),(1 3); (1 2),(1),(2 3); (1 3),(2 3),(1)";
        let a = parse_permutation_columns(spaced, None).unwrap();
        let b = parse_permutation_columns(TAU12, None).unwrap();
        assert_eq!(a.op(), b.op());
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse_permutation_columns("", None).is_err());
        assert!(parse_permutation_columns("(1),(12); (12),(1)", None).is_ok());
        assert!(parse_permutation_columns("(1),(12),(13); (12),(1)", None).is_err());
        assert!(parse_permutation_columns("(1),(14),(13); (12),(1),(23); (13),(23),(1)", None).is_err());
    }

    #[test]
    fn binary_rendering() {
        let s = crate::construct::dihedral_f_quandle(3, 1, 0).unwrap();
        assert_eq!(render_columns(&s), "(23),(13),(12)");
    }
}
