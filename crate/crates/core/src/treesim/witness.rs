//! A sequence in `U_h` converging to an element outside `U_h`.
//!
//! `h` translates along the standard line. `g` fixes the line and, at every
//! line vertex `a`, exchanges the two lowest child branches of the first
//! off-line neighbor of `a`. `g_k` does the same only at positions
//! `>= -(k-1)`, so it fixes everything near the `-ξ` ray far out, while `g`
//! keeps moving vertices at distance 2 from it.

use serde::Serialize;

use super::automorphism::{Automorphism, Ball};
use super::dynamics::{in_contraction, Membership, DEFAULT_SAMPLE_BUDGET};
use super::vertex::{Tree, Vertex};
use crate::error::{Error, Result};

/// Position along the standard line of the projection of `u`, and the length
/// of the on-line prefix.
fn projection(u: &Vertex) -> (i64, usize) {
    let l = u.letters();
    let Some(&first) = l.first() else { return (0, 0) };
    if first > 1 {
        return (0, 0);
    }
    let m = l.iter().enumerate().take_while(|&(i, &x)| x == (first + i as u8 % 2) % 2).count();
    (if first == 0 { m as i64 } else { -(m as i64) }, m)
}

fn line_colors(a: &Vertex) -> [u8; 2] {
    match a.last() {
        None => [0, 1],
        Some(x) => [x, 1 - x],
    }
}

/// The automorphism swapping, at every line position `s` with `keep(s)`, the
/// two lowest child branches of the lowest off-line neighbor.
fn ladder(tree: Tree, depth: usize, keep: impl Fn(i64) -> bool) -> Automorphism {
    Automorphism::from_fn(tree, Ball { center: Vertex::base(), radius: depth }, |u| {
        let (pos, m) = projection(u);
        if !keep(pos) || u.len() < m + 2 {
            return u.clone();
        }
        let a = u.prefix(m);
        let off = tree.colors().find(|c| !line_colors(&a).contains(c)).expect("degree at least 3");
        if u.letters()[m] != off {
            return u.clone();
        }
        let mut kids = tree.colors().filter(|&c| c != off);
        let (x, y) = (kids.next().expect("two children"), kids.next().expect("two children"));
        let z = u.letters()[m + 1];
        if z != x && z != y {
            return u.clone();
        }
        let mut tau: Vec<u8> = tree.colors().collect();
        tau.swap(x as usize, y as usize);
        let rest = Vertex::from_letters(&u.letters()[m + 1..]).permute(&tau);
        a.step(off).mul(&rest)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessStep {
    pub k: usize,
    pub membership: Membership,
    /// Largest `r` with `g_k = g` on `B(base, r)`.
    pub agreement_radius: Option<usize>,
    pub agreement_ok: bool,
    /// `g_k` and `g` differ inside `B(base, k + 2)`.
    pub differs_near_base: bool,
    /// The mirrored `g'_k` (positions `<= k - 1`) against `h^{-1}`.
    pub mirrored_membership: Membership,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessTranscript {
    pub degree: u8,
    pub translation_length: usize,
    pub depth: usize,
    pub limit_membership: Membership,
    pub sequence: Vec<WitnessStep>,
    pub all_checks_pass: bool,
}

pub struct Witness {
    pub h: Automorphism,
    pub limit: Automorphism,
    pub sequence: Vec<Automorphism>,
    pub transcript: WitnessTranscript,
}

pub const MIN_WITNESS_DEPTH: usize = 8;

/// Builds `g` and `g_1, ..., g_{R-4}` on `B(base, R)` and checks each
/// membership claim by [`in_contraction`].
pub fn nonclosed_witness(tree: Tree, translation_length: usize, depth: usize) -> Result<Witness> {
    if depth < MIN_WITNESS_DEPTH {
        return Err(Error::InsufficientDepth { required: MIN_WITNESS_DEPTH as i64, available: depth as i64 });
    }
    if translation_length == 0 {
        return Err(Error::InvalidLine("translation length must be positive".into()));
    }
    let h = Automorphism::standard_translation(tree, translation_length as i64);
    let hinv = h.invert()?;
    let limit = ladder(tree, depth, |_| true);
    let limit_membership = in_contraction(&limit, &h, DEFAULT_SAMPLE_BUDGET)?.membership;
    let mut all = matches!(limit_membership, Membership::Refuted { .. });
    let mut sequence = Vec::new();
    let mut steps = Vec::new();
    for k in 1..=depth - 4 {
        let cut = k as i64 - 1;
        let gk = ladder(tree, depth, |s| s >= -cut);
        let mirrored = ladder(tree, depth, |s| s <= cut);
        let membership = in_contraction(&gk, &h, DEFAULT_SAMPLE_BUDGET)?.membership;
        let mirrored_membership = in_contraction(&mirrored, &hinv, DEFAULT_SAMPLE_BUDGET)?.membership;
        let agreement_radius = gk.agreement_radius(&limit, depth);
        let agreement_ok = agreement_radius.is_some_and(|r| r + 2 >= k);
        let differs_near_base = agreement_radius.map_or(true, |r| r < k + 2);
        all &= matches!(membership, Membership::Verified { .. })
            && matches!(mirrored_membership, Membership::Verified { .. })
            && agreement_ok
            && differs_near_base;
        steps.push(WitnessStep { k, membership, agreement_radius, agreement_ok, differs_near_base, mirrored_membership });
        sequence.push(gk);
    }
    let transcript = WitnessTranscript {
        degree: tree.degree,
        translation_length,
        depth,
        limit_membership,
        sequence: steps,
        all_checks_pass: all,
    };
    Ok(Witness { h, limit, sequence, transcript })
}
