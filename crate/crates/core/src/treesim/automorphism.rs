//! Automorphisms of the regular tree, exact or known on a ball.
//!
//! `Rigid` maps `u ↦ c·π(u)` (left multiplication after a color permutation)
//! are exact on the whole tree and closed under composition and inversion.
//! Everything else is known only on a ball and composed lazily; domains are
//! balls with an explicit center so that conjugating by exact maps loses no
//! depth.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::vertex::{Tree, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub center: Vertex,
    pub radius: usize,
}

impl Ball {
    pub fn contains(&self, v: &Vertex) -> bool {
        self.center.distance(v) <= self.radius
    }

    /// Radius of the largest ball about `v` inside this one.
    pub fn room_at(&self, v: &Vertex) -> i64 {
        self.radius as i64 - self.center.distance(v) as i64
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Rigid { shift: Vertex, perm: Vec<u8> },
    Table(Arc<HashMap<Vertex, Vertex>>),
    Composite { outer: Arc<Automorphism>, inner: Arc<Automorphism> },
}

#[derive(Debug, Clone)]
pub struct Automorphism {
    tree: Tree,
    /// `None` for exact maps.
    domain: Option<Ball>,
    kind: Kind,
}

fn identity_perm(d: u8) -> Vec<u8> {
    (0..d).collect()
}

fn invert_perm(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

impl Automorphism {
    pub fn identity(tree: Tree) -> Self {
        Automorphism {
            tree,
            domain: None,
            kind: Kind::Rigid { shift: Vertex::base(), perm: identity_perm(tree.degree) },
        }
    }

    /// `u ↦ shift·perm(u)`.
    pub fn rigid(tree: Tree, shift: Vertex, perm: Vec<u8>) -> Result<Self> {
        tree.check_vertex(&shift)?;
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != identity_perm(tree.degree) {
            return Err(Error::MalformedPortrait(format!("{perm:?} is not a color permutation")));
        }
        Ok(Automorphism { tree, domain: None, kind: Kind::Rigid { shift, perm } })
    }

    /// Translation by `steps` along the standard line towards the end
    /// `(01)^∞`; one step is `u ↦ 0·(0 1)(u)`.
    pub fn standard_translation(tree: Tree, steps: i64) -> Self {
        let mut perm = identity_perm(tree.degree);
        perm.swap(0, 1);
        let one = Automorphism {
            tree,
            domain: None,
            kind: Kind::Rigid { shift: Vertex::from_letters(&[0]), perm },
        };
        let one = if steps < 0 { one.invert().expect("exact maps invert") } else { one };
        let mut out = Automorphism::identity(tree);
        for _ in 0..steps.unsigned_abs() {
            out = one.compose(&out).expect("exact maps compose");
        }
        out
    }

    /// Tabulates `f` on a ball.
    pub fn from_fn(tree: Tree, ball: Ball, f: impl Fn(&Vertex) -> Vertex) -> Self {
        let map = tree.ball(&ball.center, ball.radius).into_iter().map(|u| {
            let image = f(&u);
            (u, image)
        });
        Automorphism { tree, domain: Some(ball), kind: Kind::Table(Arc::new(map.collect())) }
    }

    /// Exchanges the subtrees below the children `v·x` and `v·y` of `v`,
    /// tabulated on `B(base, radius)`. Fixes everything closer to the base
    /// than those children.
    pub fn branch_swap(tree: Tree, v: &Vertex, x: u8, y: u8, radius: usize) -> Result<Self> {
        tree.check_vertex(v)?;
        if x == y || x >= tree.degree || y >= tree.degree || v.last() == Some(x) || v.last() == Some(y)
        {
            return Err(Error::InvalidVertex(format!("{v} has no children of colors {x}, {y}")));
        }
        let mut tau = identity_perm(tree.degree);
        tau.swap(x as usize, y as usize);
        let (a, b) = (v.step(x), v.step(y));
        let vinv = v.inverse();
        Ok(Automorphism::from_fn(tree, Ball { center: Vertex::base(), radius }, |u| {
            if u.descends_from(&a) || u.descends_from(&b) {
                v.mul(&vinv.mul(u).permute(&tau))
            } else {
                u.clone()
            }
        }))
    }

    pub fn tree(&self) -> Tree {
        self.tree
    }

    pub fn degree(&self) -> u8 {
        self.tree.degree
    }

    pub fn domain(&self) -> Option<&Ball> {
        self.domain.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.domain.is_none()
    }

    pub fn defined_at(&self, v: &Vertex) -> bool {
        self.domain.as_ref().map_or(true, |b| b.contains(v))
    }

    /// Radius of the largest ball about `v` inside the domain; `None` if
    /// unbounded.
    pub fn room_at(&self, v: &Vertex) -> Option<i64> {
        self.domain.as_ref().map(|b| b.room_at(v))
    }

    /// Domain radius about the base, the usual depth of a truncated map.
    pub fn depth(&self) -> Option<i64> {
        self.room_at(&Vertex::base())
    }

    pub fn apply(&self, u: &Vertex) -> Option<Vertex> {
        if !self.defined_at(u) {
            return None;
        }
        match &self.kind {
            Kind::Rigid { shift, perm } => Some(shift.mul(&u.permute(perm))),
            Kind::Table(map) => map.get(u).cloned(),
            Kind::Composite { outer, inner } => inner.apply(u).and_then(|w| outer.apply(&w)),
        }
    }

    /// `self ∘ g`. Its domain is `B(c_g, min(R_g, R_f - d(c_f, g(c_g))))`,
    /// which for base-centered maps is the usual `min(R_g, R_f - d(base, g(base)))`.
    pub fn compose(&self, g: &Automorphism) -> Result<Automorphism> {
        if self.tree != g.tree {
            return Err(Error::DegreeMismatch(self.degree(), g.degree()));
        }
        let tree = self.tree;
        if let (Kind::Rigid { shift: c1, perm: p1 }, Kind::Rigid { shift: c2, perm: p2 }) =
            (&self.kind, &g.kind)
        {
            let shift = c1.mul(&c2.permute(p1));
            let perm = p2.iter().map(|&x| p1[x as usize]).collect();
            return Ok(Automorphism { tree, domain: None, kind: Kind::Rigid { shift, perm } });
        }
        let domain = match (&self.domain, &g.domain) {
            (None, Some(bg)) => bg.clone(),
            (Some(bf), None) => {
                let center = g.invert()?.apply(&bf.center).expect("exact maps are total");
                Ball { center, radius: bf.radius }
            }
            (Some(bf), Some(bg)) => {
                let moved = g.apply(&bg.center).expect("center lies in the domain");
                let r = (bg.radius as i64).min(bf.radius as i64 - bf.center.distance(&moved) as i64);
                if r < 1 {
                    return Err(Error::InsufficientDepth { required: 1, available: r });
                }
                Ball { center: bg.center.clone(), radius: r as usize }
            }
            (None, None) => unreachable!("exact maps are rigid"),
        };
        Ok(Automorphism {
            tree,
            domain: Some(domain),
            kind: Kind::Composite { outer: Arc::new(self.clone()), inner: Arc::new(g.clone()) },
        })
    }

    /// Inverse on the image ball `B(f(c), R)`, which contains the usual
    /// `B(base, R - d(base, f(base)))`.
    pub fn invert(&self) -> Result<Automorphism> {
        let tree = self.tree;
        let domain = match &self.domain {
            None => None,
            Some(b) => Some(Ball {
                center: self.apply(&b.center).expect("center lies in the domain"),
                radius: b.radius,
            }),
        };
        let kind = match &self.kind {
            Kind::Rigid { shift, perm } => {
                let inv = invert_perm(perm);
                Kind::Rigid { shift: shift.permute(&inv).inverse(), perm: inv }
            }
            Kind::Table(map) => {
                Kind::Table(Arc::new(map.iter().map(|(u, v)| (v.clone(), u.clone())).collect()))
            }
            Kind::Composite { outer, inner } => Kind::Composite {
                outer: Arc::new(inner.invert()?),
                inner: Arc::new(outer.invert()?),
            },
        };
        Ok(Automorphism { tree, domain, kind })
    }

    pub fn power(&self, n: i64) -> Result<Automorphism> {
        let step = if n < 0 { self.invert()? } else { self.clone() };
        let mut out = Automorphism::identity(self.tree);
        for _ in 0..n.unsigned_abs() {
            out = step.compose(&out)?;
        }
        Ok(out)
    }

    /// `h^n ∘ self ∘ h^{-n}`.
    pub fn conjugate_by_power(&self, h: &Automorphism, n: i64) -> Result<Automorphism> {
        let hn = h.power(n)?;
        hn.compose(&self.compose(&hn.invert()?)?)
    }

    /// Restriction to a ball inside the domain, tabulated.
    pub fn restrict(&self, ball: Ball) -> Result<Automorphism> {
        if let Some(room) = self.room_at(&ball.center) {
            if room < ball.radius as i64 {
                return Err(Error::InsufficientDepth { required: ball.radius as i64, available: room });
            }
        }
        Ok(Automorphism::from_fn(self.tree, ball, |u| self.apply(u).expect("inside the domain")))
    }

    /// Exact maps: identity. Truncated maps: identity on the domain.
    pub fn is_identity(&self) -> bool {
        match (&self.kind, &self.domain) {
            (Kind::Rigid { shift, perm }, _) => shift.is_base() && *perm == identity_perm(self.degree()),
            (_, Some(b)) => {
                self.tree.ball(&b.center, b.radius).iter().all(|u| self.apply(u).as_ref() == Some(u))
            }
            (_, None) => unreachable!("exact maps are rigid"),
        }
    }

    /// First vertex of the domain (in ball order about the center) that is
    /// moved, if any.
    pub fn first_moved(&self) -> Option<Vertex> {
        let b = self.domain.as_ref()?;
        self.tree.ball(&b.center, b.radius).into_iter().find(|u| self.apply(u).as_ref() != Some(u))
    }

    /// Largest `r <= max` such that both maps are defined and agree on
    /// `B(base, r)`; `None` if they already differ at the base.
    pub fn agreement_radius(&self, other: &Automorphism, max: usize) -> Option<usize> {
        let base = Vertex::base();
        let mut agreed = None;
        for r in 0..=max {
            let shell = self.tree.sphere(&base, r);
            let ok = shell.iter().all(|u| {
                let (a, b) = (self.apply(u), other.apply(u));
                a.is_some() && a == b
            });
            if !ok {
                break;
            }
            agreed = Some(r);
        }
        agreed
    }

    pub fn to_portrait(&self, depth: usize) -> Result<Portrait> {
        let base = Vertex::base();
        if let Some(room) = self.room_at(&base) {
            if room < depth as i64 {
                return Err(Error::InsufficientDepth { required: depth as i64, available: room });
            }
        }
        let at = |u: &Vertex| self.apply(u).expect("inside the domain");
        let mut perms = BTreeMap::new();
        for v in self.tree.ball(&base, depth.saturating_sub(1)) {
            let image = at(&v);
            let (children, targets) = match v.parent() {
                None => (self.tree.neighbors(&v), self.tree.neighbors(&image)),
                Some(p) => {
                    let gp = at(&p);
                    (
                        self.tree.neighbors(&v).into_iter().filter(|c| *c != p).collect::<Vec<_>>(),
                        self.tree.neighbors(&image).into_iter().filter(|c| *c != gp).collect(),
                    )
                }
            };
            let perm: Vec<usize> = children
                .iter()
                .map(|c| targets.iter().position(|t| *t == at(c)).expect("isometry"))
                .collect();
            if perm.iter().enumerate().any(|(i, &p)| i != p) {
                perms.insert(v.to_string(), perm);
            }
        }
        Ok(Portrait { degree: self.degree(), depth, base_image: at(&base).to_string(), perms })
    }
}

/// Portrait file: image of the base plus, per vertex, the permutation of its
/// children (all neighbors at the base) by rank in color order. Missing
/// vertices carry the identity, which is the canonical extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Portrait {
    pub degree: u8,
    pub depth: usize,
    pub base_image: String,
    #[serde(default)]
    pub perms: BTreeMap<String, Vec<usize>>,
}

impl Portrait {
    pub fn parse(document: &str) -> Result<Portrait> {
        serde_json::from_str(document).map_err(|e| Error::MalformedPortrait(e.to_string()))
    }

    pub fn to_automorphism(&self) -> Result<Automorphism> {
        let tree = Tree::new(self.degree)?;
        let bad = |m: String| Error::MalformedPortrait(m);
        if self.depth == 0 {
            return Err(bad("depth must be positive".into()));
        }
        let image0 = Vertex::parse(&self.base_image, self.degree)?;
        let mut perms = HashMap::new();
        for (key, perm) in &self.perms {
            let v = Vertex::parse(key, self.degree)?;
            if v.len() >= self.depth {
                return Err(bad(format!("vertex {key} is not inside the depth-{} ball", self.depth)));
            }
            let k = if v.is_base() { self.degree as usize } else { self.degree as usize - 1 };
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != (0..k).collect::<Vec<_>>() {
                return Err(bad(format!("permutation at {key:?} must permute 0..{k}")));
            }
            perms.insert(v, perm.clone());
        }
        let base = Vertex::base();
        let mut map: HashMap<Vertex, Vertex> = HashMap::new();
        map.insert(base.clone(), image0);
        for v in tree.ball(&base, self.depth - 1) {
            let image = map[&v].clone();
            let (children, targets) = match v.parent() {
                None => (tree.neighbors(&v), tree.neighbors(&image)),
                Some(p) => {
                    let gp = map[&p].clone();
                    (
                        tree.neighbors(&v).into_iter().filter(|c| *c != p).collect::<Vec<_>>(),
                        tree.neighbors(&image).into_iter().filter(|c| *c != gp).collect(),
                    )
                }
            };
            let perm = perms.get(&v);
            for (i, c) in children.into_iter().enumerate() {
                let j = perm.map_or(i, |p| p[i]);
                map.insert(c, targets[j].clone());
            }
        }
        Ok(Automorphism {
            tree,
            domain: Some(Ball { center: base, radius: self.depth }),
            kind: Kind::Table(Arc::new(map)),
        })
    }
}

fn random_perm(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

/// Elliptic map fixing `B(base, fix_radius)` pointwise with uniformly random
/// child permutations further out, tabulated to `depth`.
pub fn random_elliptic(tree: Tree, fix_radius: usize, depth: usize, rng: &mut impl Rng) -> Automorphism {
    random_portrait(tree, depth, rng, |v| v.len() >= fix_radius)
        .to_automorphism()
        .expect("generated portraits are valid")
}

/// Elliptic map supported on the subtree below `root`: it fixes `root` and
/// everything outside that subtree.
pub fn random_branch_elliptic(
    tree: Tree,
    root: &Vertex,
    depth: usize,
    rng: &mut impl Rng,
) -> Automorphism {
    random_portrait(tree, depth, rng, |v| !v.is_base() && v.descends_from(root))
        .to_automorphism()
        .expect("generated portraits are valid")
}

fn random_portrait(
    tree: Tree,
    depth: usize,
    rng: &mut impl Rng,
    active: impl Fn(&Vertex) -> bool,
) -> Portrait {
    let mut perms = BTreeMap::new();
    for v in tree.ball(&Vertex::base(), depth.saturating_sub(1)) {
        if active(&v) {
            let k = if v.is_base() { tree.degree as usize } else { tree.degree as usize - 1 };
            let p = random_perm(rng, k);
            if p.iter().enumerate().any(|(i, &x)| i != x) {
                perms.insert(v.to_string(), p);
            }
        }
    }
    Portrait { degree: tree.degree, depth, base_image: String::new(), perms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t3() -> Tree {
        Tree::new(3).unwrap()
    }

    fn v(s: &str) -> Vertex {
        Vertex::parse(s, 3).unwrap()
    }

    #[test]
    fn standard_translation_moves_base_to_zero() {
        let t = Automorphism::standard_translation(t3(), 1);
        assert_eq!(t.apply(&Vertex::base()), Some(v("0")));
        assert_eq!(t.apply(&v("1")), Some(Vertex::base()));
        assert_eq!(t.apply(&v("2")), Some(v("02")));
        let t2 = Automorphism::standard_translation(t3(), 2);
        assert_eq!(t2.apply(&v("0")), Some(v("010")));
        assert!(t.compose(&t.invert().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn portrait_child_swap_has_order_two() {
        let p = Portrait::parse(r#"{"degree":3,"depth":5,"base_image":"","perms":{"":[1,0,2]}}"#)
            .unwrap();
        let g = p.to_automorphism().unwrap();
        assert_eq!(g.apply(&Vertex::base()), Some(Vertex::base()));
        assert_eq!(g.apply(&v("02")), Some(v("12")));
        assert!(!g.is_identity());
        assert!(g.compose(&g).unwrap().is_identity());
        assert_eq!(g.to_portrait(5).unwrap(), p);
    }

    #[test]
    fn malformed_portraits() {
        for doc in [
            r#"{"degree":3,"depth":5,"base_image":"","perms":{"":[1,0]}}"#,
            r#"{"degree":3,"depth":5,"base_image":"","perms":{"0":[0,1,2]}}"#,
            r#"{"degree":3,"depth":5,"base_image":"","perms":{"0":[0,0]}}"#,
            r#"{"degree":3,"depth":5,"base_image":"","perms":{"00":[1,0]}}"#,
            r#"{"degree":3,"depth":5,"base_image":"","extra":1}"#,
        ] {
            assert!(Portrait::parse(doc).and_then(|p| p.to_automorphism()).is_err(), "{doc}");
        }
    }

    #[test]
    fn depth_bookkeeping() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e1 = random_elliptic(t3(), 0, 12, &mut rng);
        let e2 = random_elliptic(t3(), 0, 12, &mut rng);
        assert_eq!(e1.compose(&e2).unwrap().depth(), Some(12));
        let t = Automorphism::standard_translation(t3(), 2);
        let p = t.to_portrait(8).unwrap().to_automorphism().unwrap();
        assert_eq!(p.invert().unwrap().depth(), Some(6));
        assert_eq!(p.compose(&p).unwrap().depth(), Some(6));
        assert_eq!(Automorphism::identity(t3()).compose(&p).unwrap().depth(), Some(8));
        let small = t.to_portrait(1).unwrap().to_automorphism().unwrap();
        assert!(matches!(small.compose(&small), Err(Error::InsufficientDepth { .. })));
    }

    #[test]
    fn random_elliptic_fixes_inner_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e = random_elliptic(t3(), 5, 10, &mut rng);
        for u in t3().ball(&Vertex::base(), 5) {
            assert_eq!(e.apply(&u), Some(u));
        }
    }

    #[test]
    fn branch_swap_fixes_the_rest() {
        let s = Automorphism::branch_swap(t3(), &v("01"), 0, 2, 6).unwrap();
        assert_eq!(s.apply(&v("010")), Some(v("012")));
        assert_eq!(s.apply(&v("0102")), Some(v("0120")));
        assert_eq!(s.apply(&v("02")), Some(v("02")));
        assert!(s.compose(&s).unwrap().is_identity());
    }
}
