//! Real roots, their half-apartments, and how two walls sit relative to each
//! other.
//!
//! A chamber `wC` lies in the half-apartment `D(alpha)` iff `w^{-1}(alpha) > 0`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{coherent_sign, BigMatrix, Int, Sign};
use crate::weyl::{WeylElement, WeylGroup, Word};

/// Maximal order of a product of two reflections in a crossing pair
/// (crystallographic dihedral orders 2, 3, 4, 6).
const MAX_CROSSING_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(Vec<Int>);

impl Root {
    /// Sign-coherent nonzero vector. Whether it is actually a real root is
    /// checked by [`WeylGroup::root_descent`].
    pub fn new(vector: Vec<Int>) -> Result<Self> {
        match coherent_sign(&vector) {
            Some(_) => Ok(Root(vector)),
            None => Err(Error::NotARealRoot(format_vector(&vector))),
        }
    }

    pub fn simple(i: usize, rank: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn vector(&self) -> &[Int] {
        &self.0
    }

    pub fn sign(&self) -> Sign {
        coherent_sign(&self.0).expect("roots are sign-coherent")
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Plus
    }

    pub fn negate(&self) -> Root {
        Root(self.0.iter().map(|x| -x).collect())
    }

    pub fn positive(&self) -> Root {
        if self.is_positive() {
            self.clone()
        } else {
            self.negate()
        }
    }

    pub fn height(&self) -> Int {
        self.0.iter().sum()
    }

    fn simple_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, &x) in self.0.iter().enumerate() {
            match x {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }
}

fn format_vector(v: &[Int]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_vector(&self.0))
    }
}

/// Comma-separated coordinates, e.g. `"1,1,0"`.
impl FromStr for Root {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<Int>().map_err(|_| Error::Malformed(format!("bad root {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Root::new(v)
    }
}

impl Serialize for Root {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coroot(Vec<Int>);

impl Coroot {
    pub fn vector(&self) -> &[Int] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum WallRelation {
    Equal,
    Opposite,
    Crossing,
    Nested { empty_quadrant: (Sign, Sign) },
}

const QUADRANTS: [(Sign, Sign); 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
];

fn quadrant_index(q: (Sign, Sign)) -> usize {
    QUADRANTS.iter().position(|&x| x == q).expect("four quadrants")
}

/// A real root written as `w(alpha_i)` with `w` of the given word.
#[derive(Debug, Clone)]
pub struct RootDescent {
    pub word: Word,
    pub simple: usize,
}

impl WeylGroup {
    pub fn act(&self, w: &WeylElement, alpha: &Root) -> Result<Root> {
        Root::new(w.matrix().apply(alpha.vector())?)
    }

    /// Writes `alpha = w(alpha_j)` by repeatedly reflecting in a simple root
    /// with positive pairing, which lowers the height of a non-simple positive
    /// real root. Fails for vectors that are not real roots.
    pub fn root_descent(&self, alpha: &Root) -> Result<RootDescent> {
        let n = self.rank();
        if alpha.vector().len() != n {
            return Err(Error::Malformed(format!(
                "root {alpha} has {} coordinates, rank is {n}",
                alpha.vector().len()
            )));
        }
        let not_real = || Error::NotARealRoot(alpha.to_string());
        let mut beta = alpha.positive();
        let mut path = Vec::new();
        let simple = loop {
            if let Some(j) = beta.simple_index() {
                break j;
            }
            let pairings = self.simple_pairings(beta.vector());
            let i = (0..n).find(|&i| pairings[i] > 0).ok_or_else(not_real)?;
            let mut next = beta.0.clone();
            next[i] -= pairings[i];
            beta = Root::new(next).map_err(|_| not_real())?;
            if !beta.is_positive() {
                return Err(not_real());
            }
            path.push(i);
        };
        let mut letters = path;
        if !alpha.is_positive() {
            letters.push(simple);
        }
        Ok(RootDescent { word: Word::new(letters), simple })
    }

    /// `<beta, alpha_i^v>` for every simple coroot.
    fn simple_pairings(&self, beta: &[Int]) -> Vec<Int> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| Int::from(self.gcm().entry(i, j)) * beta[j]).sum())
            .collect()
    }

    /// The reflection `r_alpha = w s_j w^{-1}` where `alpha = w(alpha_j)`.
    pub fn reflection_of(&self, alpha: &Root) -> Result<WeylElement> {
        let d = self.root_descent(alpha)?;
        let w = d.word;
        let word = w.concat(&Word::new(vec![d.simple])).concat(&w.reversed());
        let r = self.element(word)?;
        self.reduced(&r)
    }

    pub fn coroot(&self, alpha: &Root) -> Result<Coroot> {
        let d = self.root_descent(alpha)?;
        let mut simple = vec![0; self.rank()];
        simple[d.simple] = 1;
        let v = self.dual_matrix(&d.word)?.apply(&simple)?;
        // A negative root descent ends in s_j, which already flips the sign.
        Ok(Coroot(v))
    }

    /// `<alpha, beta^v>`.
    pub fn pairing(&self, alpha: &Root, beta_coroot: &Coroot) -> Int {
        let n = self.rank();
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc += beta_coroot.0[i] * Int::from(self.gcm().entry(i, j)) * alpha.0[j];
            }
        }
        acc
    }

    /// `+` iff the chamber `wC` lies in `D(alpha)`.
    pub fn side(&self, alpha: &Root, w: &WeylElement) -> Result<Sign> {
        let inv = self.invert(w)?;
        Ok(self.act(&inv, alpha)?.sign())
    }

    /// Crossing test by the product of pairings `<a,b^v><b,a^v>` lying in
    /// `{0, 1, 2, 3}`.
    pub fn crossing_by_pairing(&self, alpha: &Root, beta: &Root) -> Result<bool> {
        self.check_distinct(alpha, beta)?;
        let p = self.pairing(alpha, &self.coroot(beta)?) * self.pairing(beta, &self.coroot(alpha)?);
        if p < 0 {
            return Err(Error::Internal(format!("negative pairing product for {alpha} and {beta}")));
        }
        Ok(p <= 3)
    }

    /// Crossing test by the order of `r_alpha r_beta`: walls cross iff the
    /// product has order at most 6.
    pub fn crossing_by_matrix_order(&self, alpha: &Root, beta: &Root) -> Result<bool> {
        self.check_distinct(alpha, beta)?;
        let ra = self.reflection_of(alpha)?.matrix().to_big();
        let rb = self.reflection_of(beta)?.matrix().to_big();
        let product: BigMatrix = ra.mul(&rb);
        let mut power = product.clone();
        for _ in 1..=MAX_CROSSING_ORDER {
            if power.is_identity() {
                return Ok(true);
            }
            power = power.mul(&product);
        }
        Ok(false)
    }

    fn check_distinct(&self, alpha: &Root, beta: &Root) -> Result<()> {
        if alpha == beta || *alpha == beta.negate() {
            Err(Error::EqualOrOpposite)
        } else {
            Ok(())
        }
    }

    /// Both crossing tests; a disagreement is an invariant breach.
    pub fn walls_cross(&self, alpha: &Root, beta: &Root) -> Result<bool> {
        let by_pairing = self.crossing_by_pairing(alpha, beta)?;
        let by_order = self.crossing_by_matrix_order(alpha, beta)?;
        if by_pairing != by_order {
            return Err(Error::Internal(format!(
                "crossing tests disagree for {alpha} and {beta}: pairing {by_pairing}, order {by_order}"
            )));
        }
        Ok(by_order)
    }

    /// Which of the four sign pairs `(side(alpha, w), side(beta, w))` occur for
    /// `w` in the Cayley ball of the given radius.
    pub fn quadrant_audit(&self, alpha: &Root, beta: &Root, radius: usize) -> Result<[bool; 4]> {
        self.scan_quadrants(alpha, beta, radius, 4)
    }

    /// Equal / Opposite / Crossing, or Nested with the one empty quadrant.
    ///
    /// For distinct parallel walls exactly one of the four intersections
    /// `D(+-alpha) ∩ D(+-beta)` is empty, so witnessing three occupied
    /// quadrants certifies the fourth as the empty one.
    pub fn wall_relation(&self, alpha: &Root, beta: &Root, radius_cap: usize) -> Result<WallRelation> {
        if alpha == beta {
            return Ok(WallRelation::Equal);
        }
        if *alpha == beta.negate() {
            return Ok(WallRelation::Opposite);
        }
        if self.walls_cross(alpha, beta)? {
            return Ok(WallRelation::Crossing);
        }
        let seen = self.scan_quadrants(alpha, beta, radius_cap, 3)?;
        match seen.iter().filter(|&&s| s).count() {
            3 => {
                let empty = QUADRANTS[seen.iter().position(|&s| !s).expect("one quadrant missing")];
                Ok(WallRelation::Nested { empty_quadrant: empty })
            }
            4 => Err(Error::Internal(format!("all four quadrants occupied for parallel walls {alpha}, {beta}"))),
            _ => Err(Error::Inconclusive { cap: radius_cap }),
        }
    }

    /// Depth-first walk over reduced words of length at most `radius`, each
    /// element reached once through its word ending in its largest right
    /// descent. Only `w`, `w^-1 alpha` and `w^-1 beta` are kept per level.
    ///
    /// A reduced gallery crosses each wall at most once, so below a node
    /// that has crossed a wall that side is frozen; subtrees whose reachable
    /// quadrants are all seen are skipped. Stops once `stop_at` quadrants
    /// are seen.
    fn scan_quadrants(&self, alpha: &Root, beta: &Root, radius: usize, stop_at: usize) -> Result<[bool; 4]> {
        struct Frame {
            w: crate::lattice::Matrix,
            u: Vec<Int>,
            v: Vec<Int>,
            depth: usize,
        }
        let n = self.rank();
        let start = (alpha.sign(), beta.sign());
        let mut seen = [false; 4];
        seen[quadrant_index(start)] = true;
        let mut stack = vec![Frame {
            w: crate::lattice::Matrix::identity(n),
            u: alpha.vector().to_vec(),
            v: beta.vector().to_vec(),
            depth: 0,
        }];
        let sign_of = |x: &[Int], r: &Root| {
            coherent_sign(x).ok_or_else(|| Error::Internal(format!("image of {r} is not sign-coherent")))
        };
        while let Some(f) = stack.pop() {
            if seen.iter().filter(|&&s| s).count() >= stop_at {
                break;
            }
            if f.depth == radius {
                continue;
            }
            for s in 0..n {
                if coherent_sign(&f.w.column(s)) != Some(Sign::Plus) {
                    continue;
                }
                let w = f.w.mul(self.generator_matrix(s))?;
                if (s + 1..n).any(|t| coherent_sign(&w.column(t)) == Some(Sign::Minus)) {
                    continue;
                }
                let u = self.generator_matrix(s).apply(&f.u)?;
                let v = self.generator_matrix(s).apply(&f.v)?;
                let q = (sign_of(&u, alpha)?, sign_of(&v, beta)?);
                seen[quadrant_index(q)] = true;
                let a_options: &[Sign] = if q.0 == start.0 { &[Sign::Plus, Sign::Minus] } else { std::slice::from_ref(&q.0) };
                let b_options: &[Sign] = if q.1 == start.1 { &[Sign::Plus, Sign::Minus] } else { std::slice::from_ref(&q.1) };
                let open = a_options
                    .iter()
                    .any(|&a| b_options.iter().any(|&b| !seen[quadrant_index((a, b))]));
                if open {
                    stack.push(Frame { w, u, v, depth: f.depth + 1 });
                }
            }
        }
        Ok(seen)
    }

    /// `D(alpha) ∩ D(beta)` is empty (and the roots are not opposite).
    pub fn disjoint(&self, alpha: &Root, beta: &Root, radius_cap: usize) -> Result<bool> {
        Ok(matches!(
            self.wall_relation(alpha, beta, radius_cap)?,
            WallRelation::Nested { empty_quadrant: (Sign::Plus, Sign::Plus) }
        ))
    }

    /// Orbit of the simple roots under words of length at most `max_len`, in
    /// breadth-first order, with the level at which each root first appears.
    pub fn root_orbit(&self, max_len: usize) -> Result<Vec<(Root, usize)>> {
        let n = self.rank();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut frontier = Vec::new();
        for i in 0..n {
            let r = Root::simple(i, n);
            seen.insert(r.clone());
            out.push((r.clone(), 0));
            frontier.push(r);
        }
        for level in 1..=max_len {
            let mut next = Vec::new();
            for r in &frontier {
                for i in 0..n {
                    let img = Root::new(self.generator_matrix(i).apply(r.vector())?)?;
                    if seen.insert(img.clone()) {
                        out.push((img.clone(), level));
                        next.push(img);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(out)
    }
}

/// Sign of `w^n(alpha)` for `n = 1..=k`, with `w` given by its matrix.
pub(crate) fn power_signs(matrix: &crate::lattice::Matrix, alpha: &Root, k: usize) -> Result<Vec<Sign>> {
    let m = matrix.to_big();
    let mut v: Vec<BigInt> = alpha.vector().iter().map(|&x| BigInt::from(x)).collect();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        v = m.apply(&v);
        out.push(
            crate::lattice::coherent_sign_big(&v)
                .ok_or_else(|| Error::Internal(format!("power image of {alpha} not sign-coherent")))?,
        );
    }
    Ok(out)
}
