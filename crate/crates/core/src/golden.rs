//! Golden data shipped in-repo: the published order-3 classification tables
//! in permutation-column notation, one class per line. The first file lists
//! the 30 classes with identity twist, the second the 54 classes with a
//! non-trivial twist.

use crate::error::Result;
use crate::permcol::parse_permutation_columns;
use crate::structure::FStructure;

pub const TABLE3: &str = include_str!("../data/table3.txt");
pub const TABLE4: &str = include_str!("../data/table4.txt");

/// The running example structure of the order-3 tables, rendered exactly as
/// published.
pub const TAU12_COLUMNS: &str = "(1),(12),(13); (12),(1),(23); (13),(23),(1)";

pub fn tau12() -> FStructure {
    parse_permutation_columns(TAU12_COLUMNS, None).expect("tau12 line is well-formed")
}

fn parse_table(text: &str) -> Result<Vec<FStructure>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| parse_permutation_columns(line, None))
        .collect()
}

/// The 30 identity-twist classes.
pub fn table3_rows() -> Result<Vec<FStructure>> {
    parse_table(TABLE3)
}

/// The 54 non-trivially twisted classes.
pub fn table4_rows() -> Result<Vec<FStructure>> {
    parse_table(TABLE4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Level;

    #[test]
    fn tables_parse_to_quandles() {
        let t3 = table3_rows().unwrap();
        let t4 = table4_rows().unwrap();
        assert_eq!(t3.len(), 30);
        assert_eq!(t4.len(), 54);
        for s in t3.iter() {
            assert_eq!(s.level(), Level::Quandle);
            assert!(s.twist().is_identity());
        }
        for s in t4.iter() {
            assert_eq!(s.level(), Level::Quandle);
            assert!(!s.twist().is_identity());
        }
    }

    #[test]
    fn tau12_is_a_table3_row() {
        let t = tau12();
        assert!(table3_rows()
            .unwrap()
            .iter()
            .any(|s| s.op() == t.op() && s.twist() == t.twist()));
    }
}
