//! The canonical structure file formats.
//!
//! Text format, version-tagged:
//! ```text
//! fq v1
//! arity 3
//! order 3
//! twist 0 1 2
//! op 0 1 2 1 0 2 ...
//! ```
//! and a JSON mirror `{version, arity, order, twist, op}` with identical
//! ordering. Both round-trip bit-exactly. Streams of structures in the text
//! format are separated by `---` lines.

use serde::{Deserialize, Serialize};

use crate::cayley::CayleyOp;
use crate::endomap::Endomap;
use crate::error::{Error, Result};
use crate::structure::FStructure;

pub const FORMAT_TAG: &str = "fq v1";

/// Raw file contents before axiom validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub version: String,
    pub arity: usize,
    pub order: usize,
    pub twist: Vec<usize>,
    pub op: Vec<usize>,
}

impl StructureFile {
    pub fn from_structure(s: &FStructure) -> Self {
        StructureFile {
            version: FORMAT_TAG.to_string(),
            arity: s.arity(),
            order: s.order(),
            twist: s.twist().images().to_vec(),
            op: s.op().table().to_vec(),
        }
    }

    pub fn into_parts(self) -> Result<(CayleyOp, Endomap)> {
        if self.version != FORMAT_TAG {
            return Err(Error::Format(format!(
                "unsupported version {:?}, expected {FORMAT_TAG:?}",
                self.version
            )));
        }
        if self.twist.len() != self.order {
            return Err(Error::TableSize {
                expected: self.order,
                got: self.twist.len(),
            });
        }
        let op = CayleyOp::new(self.arity, self.order, self.op)?;
        let twist = Endomap::from_images(self.twist)?;
        Ok((op, twist))
    }

    /// Validates at the highest passing level.
    pub fn into_structure(self) -> Result<FStructure> {
        let (op, twist) = self.into_parts()?;
        FStructure::at_highest_level(op, twist)
    }
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_text(s: &FStructure) -> String {
    write_text_raw(&StructureFile::from_structure(s))
}

pub fn write_text_raw(f: &StructureFile) -> String {
    format!(
        "{FORMAT_TAG}\narity {}\norder {}\ntwist {}\nop {}\n",
        f.arity,
        f.order,
        join(&f.twist),
        join(&f.op)
    )
}

pub fn parse_text_raw(text: &str) -> Result<StructureFile> {
    let mut lines = text.lines();
    let bad = |msg: &str| Error::Format(msg.to_string());
    let tag = lines.next().ok_or_else(|| bad("empty file"))?.trim();
    if tag != FORMAT_TAG {
        return Err(Error::Format(format!(
            "bad version line {tag:?}, expected {FORMAT_TAG:?}"
        )));
    }
    let mut field = |name: &str| -> Result<Vec<usize>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Format(format!("missing {name} line")))?
            .trim();
        let rest = line
            .strip_prefix(name)
            .ok_or_else(|| Error::Format(format!("expected {name:?} line, got {line:?}")))?;
        rest.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Format(format!("bad number {tok:?} in {name} line")))
            })
            .collect()
    };
    let arity = field("arity")?;
    let order = field("order")?;
    let twist = field("twist")?;
    let op = field("op")?;
    if arity.len() != 1 || order.len() != 1 {
        return Err(bad("arity/order lines must hold a single number"));
    }
    for extra in lines {
        if !extra.trim().is_empty() {
            return Err(Error::Format(format!("trailing content {extra:?}")));
        }
    }
    Ok(StructureFile {
        version: FORMAT_TAG.to_string(),
        arity: arity[0],
        order: order[0],
        twist,
        op,
    })
}

pub fn parse_text(text: &str) -> Result<FStructure> {
    parse_text_raw(text)?.into_structure()
}

pub fn write_json(s: &FStructure) -> String {
    serde_json::to_string_pretty(&StructureFile::from_structure(s)).expect("plain data serializes")
}

pub fn parse_json(text: &str) -> Result<FStructure> {
    let f: StructureFile = serde_json::from_str(text)?;
    f.into_structure()
}

/// Streams structures joined by `---` separator lines.
pub fn write_stream(items: &[FStructure]) -> String {
    items
        .iter()
        .map(write_text)
        .collect::<Vec<_>>()
        .join("---\n")
}

pub fn parse_stream(text: &str) -> Result<Vec<FStructure>> {
    text.split("---")
        .map(str::trim)
        .filter(|chunk| !chunk.is_empty())
        .map(|chunk| parse_text(&format!("{chunk}\n")))
        .collect()
}
