//! Vertices of the `d`-regular tree, coded as reduced words over `{0..d-1}`.
//!
//! The tree is the Cayley graph of the free product of `d` copies of `Z/2`:
//! the edge `{v, v·x}` has color `x`, so every vertex has one edge of each
//! color. The base vertex is the empty word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u8 = 3;
/// Letters are written as single decimal digits.
pub const MAX_DEGREE: u8 = 10;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn base() -> Self {
        Vertex(Vec::new())
    }

    /// Builds a vertex from letters, cancelling adjacent repeats.
    pub fn from_letters(letters: &[u8]) -> Self {
        let mut v = Vertex::base();
        for &x in letters {
            v.push(x);
        }
        v
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Distance from the base.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_base(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Moves along the edge of color `x`.
    pub fn push(&mut self, x: u8) {
        if self.0.last() == Some(&x) {
            self.0.pop();
        } else {
            self.0.push(x);
        }
    }

    pub fn step(&self, x: u8) -> Vertex {
        let mut v = self.clone();
        v.push(x);
        v
    }

    /// Group product in the free product; `u.mul(v)` is `v` seen from `u`.
    pub fn mul(&self, other: &Vertex) -> Vertex {
        let mut v = self.clone();
        for &x in &other.0 {
            v.push(x);
        }
        v
    }

    pub fn inverse(&self) -> Vertex {
        Vertex(self.0.iter().rev().copied().collect())
    }

    pub fn permute(&self, perm: &[u8]) -> Vertex {
        Vertex(self.0.iter().map(|&x| perm[x as usize]).collect())
    }

    pub fn parent(&self) -> Option<Vertex> {
        if self.0.is_empty() {
            None
        } else {
            Some(Vertex(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn prefix(&self, k: usize) -> Vertex {
        Vertex(self.0[..k].to_vec())
    }

    pub fn common_prefix_len(&self, other: &Vertex) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    pub fn distance(&self, other: &Vertex) -> usize {
        self.len() + other.len() - 2 * self.common_prefix_len(other)
    }

    /// Vertices of the geodesic from `self` to `other`, both included.
    pub fn geodesic(&self, other: &Vertex) -> Vec<Vertex> {
        let c = self.common_prefix_len(other);
        let mut out: Vec<Vertex> = (c..=self.len()).rev().map(|k| self.prefix(k)).collect();
        out.extend((c + 1..=other.len()).map(|k| other.prefix(k)));
        out
    }

    /// `true` if `self` lies in the subtree hanging below `root` (away from
    /// the base), `root` included.
    pub fn descends_from(&self, root: &Vertex) -> bool {
        self.0.starts_with(&root.0)
    }

    pub fn parse(s: &str, degree: u8) -> Result<Vertex> {
        let bad = || Error::InvalidVertex(s.to_string());
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            let x = c.to_digit(10).ok_or_else(bad)? as u8;
            if x >= degree || letters.last() == Some(&x) {
                return Err(bad());
            }
            letters.push(x);
        }
        Ok(Vertex(letters))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The `d`-regular tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tree {
    pub degree: u8,
}

impl Tree {
    pub fn new(degree: u8) -> Result<Tree> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(Error::Malformed(format!(
                "degree {degree} outside {MIN_DEGREE}..={MAX_DEGREE}"
            )));
        }
        Ok(Tree { degree })
    }

    /// Residue field size `q = d - 1`.
    pub fn q(&self) -> u64 {
        u64::from(self.degree) - 1
    }

    pub fn colors(&self) -> std::ops::Range<u8> {
        0..self.degree
    }

    /// Neighbors in increasing color order.
    pub fn neighbors(&self, v: &Vertex) -> Vec<Vertex> {
        self.colors().map(|x| v.step(x)).collect()
    }

    /// The sphere of radius `r` about `center`, ordered by the coding of the
    /// offset word (shortlex within the sphere).
    pub fn sphere(&self, center: &Vertex, r: usize) -> Vec<Vertex> {
        let mut words = vec![Vertex::base()];
        for _ in 0..r {
            let mut next = Vec::with_capacity(words.len() * (self.degree as usize - 1));
            for w in &words {
                for x in self.colors() {
                    if w.last() != Some(x) {
                        let mut n = w.clone();
                        n.0.push(x);
                        next.push(n);
                    }
                }
            }
            words = next;
        }
        words.iter().map(|w| center.mul(w)).collect()
    }

    /// The ball of radius `r` about `center`, sphere by sphere.
    pub fn ball(&self, center: &Vertex, r: usize) -> Vec<Vertex> {
        (0..=r).flat_map(|k| self.sphere(center, k)).collect()
    }

    pub fn ball_size(&self, r: usize) -> usize {
        let q = self.degree as usize - 1;
        1 + (0..r).map(|k| self.degree as usize * q.pow(k as u32)).sum::<usize>()
    }

    pub fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if v.0.iter().any(|&x| x >= self.degree) || v.0.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidVertex(v.to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse(s, 3).unwrap()
    }

    #[test]
    fn words_reduce() {
        assert_eq!(Vertex::from_letters(&[0, 1, 1, 2]), v("02"));
        assert_eq!(v("01").mul(&v("10")), Vertex::base());
        assert_eq!(v("012").inverse(), v("210"));
        assert!(Vertex::parse("00", 3).is_err());
        assert!(Vertex::parse("3", 3).is_err());
    }

    #[test]
    fn distances_and_geodesics() {
        assert_eq!(v("012").distance(&v("02")), 3);
        assert_eq!(v("01").geodesic(&v("2")), vec![v("01"), v("0"), Vertex::base(), v("2")]);
        assert_eq!(v("0").geodesic(&v("0")), vec![v("0")]);
    }

    #[test]
    fn balls_have_the_right_size() {
        let t = Tree::new(3).unwrap();
        for r in 0..6 {
            let b = t.ball(&v("01"), r);
            assert_eq!(b.len(), t.ball_size(r));
            assert!(b.iter().all(|u| u.distance(&v("01")) <= r));
        }
        assert_eq!(Tree::new(4).unwrap().ball_size(2), 1 + 4 + 12);
    }
}
