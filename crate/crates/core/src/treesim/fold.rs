//! Folding a line through the base onto the standard line by elliptic
//! automorphisms that fix ever larger balls.

use serde::Serialize;

use super::automorphism::Automorphism;
use super::dynamics::{fixed_ball_radius, FixedBall};
use super::line::{Line, Side};
use super::vertex::{Tree, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct FoldStep {
    pub k: usize,
    pub side: Side,
    /// The vertex whose two child branches were exchanged.
    pub at: Vertex,
    pub from: Vertex,
    pub to: Vertex,
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyCheck {
    pub k: usize,
    /// `r(p_{k+1} p_k^{-1}, base)`.
    pub fixed: FixedBall,
    pub required: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldTranscript {
    pub line: Line,
    pub depth: usize,
    pub steps: Vec<FoldStep>,
    pub cauchy: Vec<CauchyCheck>,
    /// `g` maps the line onto the standard line on `B(base, depth)`.
    pub onto_standard: bool,
}

#[derive(Debug, Clone)]
pub struct Fold {
    pub g: Automorphism,
    /// `p_0 = id, p_1, ..., p_R`, with `p_k` the product after level `k`.
    pub partials: Vec<Automorphism>,
    pub transcript: FoldTranscript,
}

fn color_between(v: &Vertex, w: &Vertex, tree: Tree) -> u8 {
    tree.colors().find(|&x| v.step(x) == *w).expect("adjacent vertices")
}

/// At level `k`, on each side in turn, the branch carrying the current image
/// of the line is exchanged with the standard branch at the standard vertex
/// of level `k - 1`; that exchange fixes `B(base, k-1)`.
pub fn fold_line(line: &Line, depth: usize) -> Result<Fold> {
    if depth == 0 {
        return Err(Error::InsufficientDepth { required: 1, available: 0 });
    }
    let tree = line.tree;
    let standard = Line::standard(tree);
    let mut p = Automorphism::identity(tree);
    let mut partials = vec![p.clone()];
    let mut steps = Vec::new();
    for k in 1..=depth {
        for side in [Side::Forward, Side::Backward] {
            let target = standard.vertex(side, k);
            let current = p.apply(&line.vertex(side, k)).expect("inside the fold depth");
            if current != target {
                let at = standard.vertex(side, k - 1);
                let (x, y) = (color_between(&at, &current, tree), color_between(&at, &target, tree));
                let e = Automorphism::branch_swap(tree, &at, x, y, depth)?;
                p = e.compose(&p)?;
                steps.push(FoldStep { k, side, at, from: current, to: target });
            }
        }
        partials.push(p.clone());
    }
    let mut cauchy = Vec::new();
    for k in 1..depth {
        let step = partials[k + 1].compose(&partials[k].invert()?)?;
        let fixed = fixed_ball_radius(&step, &Vertex::base(), None)?;
        let required = k - 1;
        cauchy.push(CauchyCheck { k, fixed, required, ok: fixed.value() >= required as i64 });
    }
    let onto_standard = (0..=depth).all(|k| {
        [Side::Forward, Side::Backward]
            .iter()
            .all(|&s| p.apply(&line.vertex(s, k)) == Some(standard.vertex(s, k)))
    });
    let transcript = FoldTranscript { line: line.clone(), depth, steps, cauchy, onto_standard };
    Ok(Fold { g: p, partials, transcript })
}

/// Translation by `steps` along an arbitrary line through the base: the
/// standard translation conjugated by the fold. Known on `B(base, depth - |steps|)`.
pub fn translation_along(line: &Line, steps: i64, depth: usize) -> Result<Automorphism> {
    if steps == 0 {
        return Err(Error::InvalidLine("translation length must be nonzero".into()));
    }
    let fold = fold_line(line, depth)?;
    let t = Automorphism::standard_translation(line.tree, steps);
    fold.g.invert()?.compose(&t.compose(&fold.g)?)
}
