//! Exact Weyl-group arithmetic through the integer action on the root lattice.
//!
//! Convention: `s_i(alpha_j) = alpha_j - A[i][j] * alpha_i`, so the matrix of
//! `s_i` differs from the identity only in row `i`. The coroot lattice carries
//! the transposed action `s_i(alpha_j^v) = alpha_j^v - A[j][i] * alpha_i^v`.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Mutex;

use serde::Serialize;

use crate::cartan::{coxeter_matrix, CoxeterDiagram, GeneralizedCartanMatrix};
use crate::error::{Error, Result};
use crate::lattice::{coherent_sign, max_finite_order, Int, Matrix, Sign};

/// A word in the Coxeter generators, stored 0-based; parsed and displayed
/// 1-based and whitespace-separated (`"1 2 1"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn repeat(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(Error::Malformed(format!("bad generator index {tok:?} in word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A group element: a word together with its matrix on the root lattice.
#[derive(Debug, Clone)]
pub struct WeylElement {
    word: Word,
    matrix: Matrix,
}

impl WeylElement {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

/// Equality is equality of the group element, i.e. of matrices.
impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Order {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Isometry {
    Elliptic,
    Hyperbolic,
}

/// Positive roots sent to negative roots; its size is the length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionSet {
    pub roots: Vec<Vec<Int>>,
}

/// One element of the Cayley ball, in shortlex order of its least word.
#[derive(Debug, Clone)]
pub struct BallElement {
    pub word: Word,
    pub matrix: Matrix,
    pub inverse: Matrix,
}

#[derive(Debug, Default)]
struct CayleyBall {
    levels: Vec<Vec<BallElement>>,
    seen: HashSet<Matrix>,
}

/// The Weyl group of a generalized Cartan matrix.
#[derive(Debug)]
pub struct WeylGroup {
    gcm: GeneralizedCartanMatrix,
    diagram: CoxeterDiagram,
    generators: Vec<Matrix>,
    dual_generators: Vec<Matrix>,
    ball: Mutex<CayleyBall>,
}

impl WeylGroup {
    pub fn new(gcm: GeneralizedCartanMatrix) -> Self {
        let n = gcm.rank();
        let reflection = |i: usize, dual: bool| {
            let rows: Vec<Vec<Int>> = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            if r != i {
                                Int::from(r == c)
                            } else if c == i {
                                -1
                            } else if dual {
                                -Int::from(gcm.entry(c, i))
                            } else {
                                -Int::from(gcm.entry(i, c))
                            }
                        })
                        .collect()
                })
                .collect();
            Matrix::from_rows(&rows)
        };
        let generators = (0..n).map(|i| reflection(i, false)).collect();
        let dual_generators = (0..n).map(|i| reflection(i, true)).collect();
        WeylGroup {
            diagram: coxeter_matrix(&gcm),
            gcm,
            generators,
            dual_generators,
            ball: Mutex::new(CayleyBall::default()),
        }
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn generator_matrix(&self, i: usize) -> &Matrix {
        &self.generators[i]
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement { word: Word::default(), matrix: Matrix::identity(self.rank()) }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i + 1, rank: self.rank() })
        }
    }

    /// `i` is 0-based.
    pub fn generator(&self, i: usize) -> Result<WeylElement> {
        self.check_index(i)?;
        Ok(WeylElement { word: Word(vec![i]), matrix: self.generators[i].clone() })
    }

    fn word_matrix(&self, word: &Word, dual: bool) -> Result<Matrix> {
        let gens = if dual { &self.dual_generators } else { &self.generators };
        let mut m = Matrix::identity(self.rank());
        for &i in word.letters() {
            self.check_index(i)?;
            m = m.mul(&gens[i])?;
        }
        Ok(m)
    }

    pub fn element(&self, word: Word) -> Result<WeylElement> {
        let matrix = self.word_matrix(&word, false)?;
        Ok(WeylElement { word, matrix })
    }

    /// Matrix of the word in the coroot representation.
    pub fn dual_matrix(&self, word: &Word) -> Result<Matrix> {
        self.word_matrix(word, true)
    }

    pub fn multiply(&self, u: &WeylElement, v: &WeylElement) -> Result<WeylElement> {
        Ok(WeylElement { word: u.word.concat(&v.word), matrix: u.matrix.mul(&v.matrix)? })
    }

    pub fn invert(&self, u: &WeylElement) -> Result<WeylElement> {
        self.element(u.word.reversed())
    }

    pub fn power(&self, u: &WeylElement, k: usize) -> Result<WeylElement> {
        let mut m = Matrix::identity(self.rank());
        for _ in 0..k {
            m = m.mul(&u.matrix)?;
        }
        Ok(WeylElement { word: u.word.repeat(k), matrix: m })
    }

    /// Coxeter length together with the canonical reduced word obtained by
    /// peeling off the smallest right descent at each step.
    pub fn length(&self, w: &WeylElement) -> Result<(usize, Word)> {
        let n = self.rank();
        let mut m = w.matrix.clone();
        let mut peeled = Vec::new();
        while !m.is_identity() {
            let descent = (0..n)
                .find(|&i| coherent_sign(&m.column(i)) == Some(Sign::Minus))
                .ok_or_else(|| Error::Internal("non-identity element without descent".into()))?;
            m = m.mul(&self.generators[descent])?;
            peeled.push(descent);
        }
        peeled.reverse();
        Ok((peeled.len(), Word(peeled)))
    }

    pub fn reduced(&self, w: &WeylElement) -> Result<WeylElement> {
        let (_, word) = self.length(w)?;
        Ok(WeylElement { word, matrix: w.matrix.clone() })
    }

    /// `{ s_{i_l} ... s_{i_{k+1}}(alpha_{i_k}) }` over the canonical reduced word.
    pub fn inversion_set(&self, w: &WeylElement) -> Result<InversionSet> {
        let (_, word) = self.length(w)?;
        let letters = word.letters();
        let n = self.rank();
        let mut roots = Vec::with_capacity(letters.len());
        for k in 0..letters.len() {
            let mut v = vec![0; n];
            v[letters[k]] = 1;
            for &j in &letters[k + 1..] {
                v = self.generators[j].apply(&v)?;
            }
            roots.push(v);
        }
        Ok(InversionSet { roots })
    }

    pub fn order(&self, w: &WeylElement) -> Order {
        let bound = max_finite_order(self.rank());
        let base = w.matrix.to_big();
        let mut power = base.clone();
        for k in 1..=bound {
            if power.is_identity() {
                return Order::Finite(k);
            }
            power = power.mul(&base);
        }
        Order::Infinite
    }

    /// Elliptic iff the element has finite order: a Weyl element fixes a point
    /// of the Davis realization exactly when it generates a finite group.
    pub fn classify_isometry(&self, w: &WeylElement) -> Isometry {
        match self.order(w) {
            Order::Finite(_) => Isometry::Elliptic,
            Order::Infinite => Isometry::Hyperbolic,
        }
    }

    /// Visits the Cayley ball of the given radius in shortlex order, building
    /// levels on demand. Stops early when the visitor breaks.
    pub fn visit_ball<B>(
        &self,
        radius: usize,
        mut visit: impl FnMut(&BallElement) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        let mut ball = self.ball.lock().expect("ball cache poisoned");
        for level in 0..=radius {
            self.ensure_level(&mut ball, level)?;
            if ball.levels[level].is_empty() {
                break;
            }
            for e in &ball.levels[level] {
                if let ControlFlow::Break(b) = visit(e) {
                    return Ok(Some(b));
                }
            }
        }
        Ok(None)
    }

    /// Number of elements of length exactly `level` (0 once the group is
    /// exhausted).
    pub fn sphere_size(&self, level: usize) -> Result<usize> {
        let mut ball = self.ball.lock().expect("ball cache poisoned");
        for l in 0..=level {
            self.ensure_level(&mut ball, l)?;
        }
        Ok(ball.levels[level].len())
    }

    fn ensure_level(&self, ball: &mut CayleyBall, level: usize) -> Result<()> {
        if ball.levels.is_empty() {
            let id = Matrix::identity(self.rank());
            ball.seen.insert(id.clone());
            ball.levels.push(vec![BallElement {
                word: Word::default(),
                matrix: id.clone(),
                inverse: id,
            }]);
        }
        while ball.levels.len() <= level {
            let prev = ball.levels.last().expect("level 0 exists");
            let mut next = Vec::new();
            for e in prev {
                for (i, g) in self.generators.iter().enumerate() {
                    let m = e.matrix.mul(g)?;
                    if ball.seen.contains(&m) {
                        continue;
                    }
                    let inverse = g.mul(&e.inverse)?;
                    let mut word = e.word.clone();
                    word.0.push(i);
                    ball.seen.insert(m.clone());
                    next.push(BallElement { word, matrix: m, inverse });
                }
            }
            ball.levels.push(next);
        }
        Ok(())
    }
}
