//! Ends and lines through the base, coded by eventually periodic words.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::vertex::{Tree, Vertex};
use crate::error::{Error, Result};

/// A ray from the base: the infinite word `prefix · block · block · ...`,
/// written `prefix(block)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct End {
    prefix: Vec<u8>,
    block: Vec<u8>,
}

impl End {
    pub fn new(prefix: Vec<u8>, block: Vec<u8>, degree: u8) -> Result<End> {
        let end = End { prefix, block };
        let shown = end.to_string();
        if end.block.is_empty() {
            return Err(Error::InvalidLine(format!("{shown}: empty block")));
        }
        let probe: Vec<u8> = (0..end.prefix.len() + 2 * end.block.len() + 1).map(|i| end.letter(i)).collect();
        if probe.iter().any(|&x| x >= degree) || probe.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLine(format!("{shown}: not a reduced ray in degree {degree}")));
        }
        Ok(end)
    }

    pub fn parse(s: &str, degree: u8) -> Result<End> {
        let bad = || Error::InvalidLine(s.to_string());
        let (prefix, rest) = s.split_once('(').ok_or_else(bad)?;
        let block = rest.strip_suffix(')').ok_or_else(bad)?;
        let digits = |t: &str| -> Result<Vec<u8>> {
            t.chars().map(|c| c.to_digit(10).map(|x| x as u8).ok_or_else(bad)).collect()
        };
        End::new(digits(prefix)?, digits(block)?, degree)
    }

    pub fn letter(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.block[(i - self.prefix.len()) % self.block.len()]
        }
    }

    /// The vertex at distance `k` along the ray.
    pub fn vertex(&self, k: usize) -> Vertex {
        Vertex::from_letters(&(0..k).map(|i| self.letter(i)).collect::<Vec<_>>())
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.prefix {
            write!(f, "{x}")?;
        }
        f.write_str("(")?;
        for x in &self.block {
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Forward,
    Backward,
}

/// A bi-infinite geodesic through the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub tree: Tree,
    pub forward: End,
    pub backward: End,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineDocument {
    degree: u8,
    forward: String,
    backward: String,
}

#[derive(Serialize)]
struct LineEcho {
    degree: u8,
    forward: String,
    backward: String,
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LineEcho {
            degree: self.tree.degree,
            forward: self.forward.to_string(),
            backward: self.backward.to_string(),
        }
        .serialize(s)
    }
}

impl Line {
    pub fn new(tree: Tree, forward: End, backward: End) -> Result<Line> {
        if forward.letter(0) == backward.letter(0) {
            return Err(Error::InvalidLine(format!("{forward} and {backward} leave the base together")));
        }
        Ok(Line { tree, forward, backward })
    }

    /// Ends `(01)` and `(10)`.
    pub fn standard(tree: Tree) -> Line {
        let d = tree.degree;
        Line::new(
            tree,
            End::new(vec![], vec![0, 1], d).expect("standard end"),
            End::new(vec![], vec![1, 0], d).expect("standard end"),
        )
        .expect("standard line")
    }

    /// `{"degree": d, "forward": "prefix(block)", "backward": "prefix(block)"}`.
    pub fn parse(document: &str) -> Result<Line> {
        let doc: LineDocument =
            serde_json::from_str(document).map_err(|e| Error::InvalidLine(e.to_string()))?;
        let tree = Tree::new(doc.degree)?;
        Line::new(tree, End::parse(&doc.forward, doc.degree)?, End::parse(&doc.backward, doc.degree)?)
    }

    pub fn end(&self, side: Side) -> &End {
        match side {
            Side::Forward => &self.forward,
            Side::Backward => &self.backward,
        }
    }

    pub fn vertex(&self, side: Side, k: usize) -> Vertex {
        self.end(side).vertex(k)
    }

    /// A random line with prefixes of length at most 3 and blocks of length
    /// 2 or 3.
    pub fn random(tree: Tree, rng: &mut impl Rng) -> Line {
        let d = tree.degree;
        let mut end = |avoid: Option<u8>| loop {
            let plen = rng.gen_range(0..=3);
            let blen = rng.gen_range(2..=3);
            let prefix: Vec<u8> = (0..plen).map(|_| rng.gen_range(0..d)).collect();
            let block: Vec<u8> = (0..blen).map(|_| rng.gen_range(0..d)).collect();
            if let Ok(e) = End::new(prefix, block, d) {
                if Some(e.letter(0)) != avoid {
                    return e;
                }
            }
        };
        let forward = end(None);
        let backward = end(Some(forward.letter(0)));
        Line::new(tree, forward, backward).expect("distinct first letters")
    }
}
