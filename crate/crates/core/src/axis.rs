//! Walls crossed by the axis of a hyperbolic Weyl element and the
//! half-apartments containing its two ends.
//!
//! The backward chamber `w^{-n}C` lies in `D(alpha)` iff `w^n(alpha) > 0`, so
//! end containment reduces to the eventual sign of an integer sequence.

use std::collections::HashSet;

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::lattice::Sign;
use crate::roots::{power_signs, Root};
use crate::weyl::{Isometry, WeylElement, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndSign {
    EventuallyInside,
    EventuallyOutside,
    Undecided,
}

impl EndSign {
    pub fn swap(self) -> EndSign {
        match self {
            EndSign::EventuallyInside => EndSign::EventuallyOutside,
            EndSign::EventuallyOutside => EndSign::EventuallyInside,
            EndSign::Undecided => EndSign::Undecided,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Towards the attracting end `+xi`.
    Forward,
    /// Towards the repelling end `-xi`.
    Backward,
}

/// A wall separating `w^k C` from `w^{k+1} C`, as a positive root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossedWall {
    pub root: Root,
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisData {
    pub word: String,
    pub crossed: Vec<CrossedWall>,
    pub forward_end: &'static str,
    pub backward_end: &'static str,
}

/// Certified pair of roots with `-xi` inside `D(alpha)` and `+xi` inside
/// `D(beta)`.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaBeta {
    pub alpha: Root,
    pub beta: Root,
    pub alpha_backward: EndSign,
    pub beta_forward: EndSign,
    pub periods_used: usize,
    pub undecided_skipped: usize,
}

pub const MIN_POWER_CAP: usize = 4;

fn require_hyperbolic(group: &WeylGroup, w: &WeylElement) -> Result<()> {
    match group.classify_isometry(w) {
        Isometry::Hyperbolic => Ok(()),
        Isometry::Elliptic => Err(Error::Elliptic),
    }
}

pub fn end_sign(
    group: &WeylGroup,
    alpha: &Root,
    w: &WeylElement,
    direction: Direction,
    power_cap: usize,
) -> Result<EndSign> {
    if power_cap < MIN_POWER_CAP {
        return Err(Error::PowerCapTooSmall(power_cap));
    }
    require_hyperbolic(group, w)?;
    let matrix = match direction {
        Direction::Backward => w.matrix().clone(),
        Direction::Forward => group.invert(w)?.matrix().clone(),
    };
    let signs = power_signs(&matrix, alpha, power_cap)?;
    let window = &signs[power_cap - power_cap.div_ceil(2)..];
    Ok(if window.iter().all(|&s| s == Sign::Plus) {
        EndSign::EventuallyInside
    } else if window.iter().all(|&s| s == Sign::Minus) {
        EndSign::EventuallyOutside
    } else {
        EndSign::Undecided
    })
}

/// `w^k N(w^{-1})` for `k < periods`, positive, first occurrence kept.
pub fn crossed_walls(group: &WeylGroup, w: &WeylElement, periods: usize) -> Result<Vec<CrossedWall>> {
    require_hyperbolic(group, w)?;
    let inv = group.invert(w)?;
    let base = group.inversion_set(&inv)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut wk = group.identity();
    for k in 0..periods {
        let mut level = Vec::new();
        for r in &base.roots {
            let img = group.act(&wk, &Root::new(r.clone())?)?.positive();
            if seen.insert(img.clone()) {
                level.push(img);
            }
        }
        level.sort();
        out.extend(level.into_iter().map(|root| CrossedWall { root, k }));
        wk = group.multiply(&wk, w)?;
    }
    Ok(out)
}

pub fn axis_data(group: &WeylGroup, w: &WeylElement, periods: usize) -> Result<AxisData> {
    Ok(AxisData {
        word: w.word().to_string(),
        crossed: crossed_walls(group, w, periods)?,
        forward_end: "+xi",
        backward_end: "-xi",
    })
}

/// Orients `root` so that the chosen end lies inside; `None` if undecided.
fn orient(
    group: &WeylGroup,
    root: &Root,
    w: &WeylElement,
    direction: Direction,
    power_cap: usize,
) -> Result<Option<(Root, EndSign)>> {
    Ok(match end_sign(group, root, w, direction, power_cap)? {
        EndSign::EventuallyInside => Some((root.clone(), EndSign::EventuallyInside)),
        EndSign::EventuallyOutside => Some((root.negate(), EndSign::EventuallyInside)),
        EndSign::Undecided => None,
    })
}

/// First pair (in candidate order) of crossed walls, oriented towards the
/// repelling and attracting ends, whose half-apartments are disjoint.
/// Periods are added one at a time up to `caps.periods`.
pub fn pick_alpha_beta(group: &WeylGroup, w: &WeylElement, caps: &Caps) -> Result<AlphaBeta> {
    require_hyperbolic(group, w)?;
    if caps.power < MIN_POWER_CAP {
        return Err(Error::PowerCapTooSmall(caps.power));
    }
    let mut undecided = 0;
    let mut tried = 0;
    for periods in 1..=caps.periods.max(1) {
        let walls = crossed_walls(group, w, periods)?;
        tried = walls.len();
        let mut backs = Vec::new();
        let mut fronts = Vec::new();
        undecided = 0;
        for c in &walls {
            match orient(group, &c.root, w, Direction::Backward, caps.power)? {
                Some((r, _)) => backs.push(r),
                None => undecided += 1,
            }
            match orient(group, &c.root, w, Direction::Forward, caps.power)? {
                Some((r, _)) => fronts.push(r),
                None => undecided += 1,
            }
        }
        for alpha in &backs {
            for beta in &fronts {
                if alpha == beta || *alpha == beta.negate() {
                    continue;
                }
                if group.walls_cross(alpha, beta)? {
                    continue;
                }
                match group.disjoint(alpha, beta, caps.bfs_radius) {
                    Ok(true) => {
                        return Ok(AlphaBeta {
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                            alpha_backward: EndSign::EventuallyInside,
                            beta_forward: EndSign::EventuallyInside,
                            periods_used: periods,
                            undecided_skipped: undecided,
                        })
                    }
                    Ok(false) | Err(Error::Inconclusive { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Err(Error::SearchExhausted {
        stage: "pick_alpha_beta".into(),
        detail: format!(
            "no disjoint pair among {tried} crossed walls over {} periods ({undecided} end signs undecided)",
            caps.periods
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::GeneralizedCartanMatrix;

    fn group(rows: &[&[i64]]) -> WeylGroup {
        WeylGroup::new(
            GeneralizedCartanMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap(),
        )
    }

    fn el(g: &WeylGroup, s: &str) -> WeylElement {
        g.element(s.parse().unwrap()).unwrap()
    }

    fn root(s: &str) -> Root {
        s.parse().unwrap()
    }

    #[test]
    fn infinite_dihedral_end_signs_match_chamber_membership() {
        let g = group(&[&[2, -2], &[-2, 2]]);
        let w = el(&g, "1 2");
        let alpha = root("-1,0");
        // Oracle: side(alpha, w^{-n}) directly, n <= 20.
        let winv = g.invert(&w).unwrap();
        let sides: Vec<Sign> =
            (1..=20).map(|n| g.side(&alpha, &g.power(&winv, n).unwrap()).unwrap()).collect();
        let expected = if sides[10..].iter().all(|&s| s == Sign::Plus) {
            EndSign::EventuallyInside
        } else {
            EndSign::EventuallyOutside
        };
        assert_eq!(end_sign(&g, &alpha, &w, Direction::Backward, 20).unwrap(), expected);
        assert_eq!(
            end_sign(&g, &alpha.negate(), &w, Direction::Backward, 20).unwrap(),
            expected.swap()
        );
    }

    #[test]
    fn small_power_cap_is_rejected() {
        let g = group(&[&[2, -2], &[-2, 2]]);
        let w = el(&g, "1 2");
        assert_eq!(
            end_sign(&g, &root("1,0"), &w, Direction::Forward, 3),
            Err(Error::PowerCapTooSmall(3))
        );
    }

    #[test]
    fn elliptic_is_rejected() {
        let g = group(&[&[2, -1], &[-1, 2]]);
        let w = el(&g, "1 2");
        assert_eq!(crossed_walls(&g, &w, 2), Err(Error::Elliptic));
        assert!(matches!(pick_alpha_beta(&g, &w, &Caps::default()), Err(Error::Elliptic)));
    }

    #[test]
    fn two_walls_per_period_in_infinite_dihedral() {
        let g = group(&[&[2, -2], &[-2, 2]]);
        let w = el(&g, "1 2");
        let walls = crossed_walls(&g, &w, 3).unwrap();
        assert_eq!(walls.len(), 6);
        assert!(walls.iter().all(|c| c.root.is_positive()));
        assert_eq!(walls.iter().filter(|c| c.k == 0).count(), 2);
    }

    #[test]
    fn infinite_dihedral_pair() {
        let g = group(&[&[2, -2], &[-2, 2]]);
        let w = el(&g, "1 2");
        let ab = pick_alpha_beta(&g, &w, &Caps::default()).unwrap();
        assert!(g.disjoint(&ab.alpha, &ab.beta, 12).unwrap());
    }
}
