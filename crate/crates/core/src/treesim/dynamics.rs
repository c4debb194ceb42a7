//! Elliptic/hyperbolic classification and the contraction, parabolic and
//! scale tests for truncated tree automorphisms.
//!
//! `g ∈ U_h` iff `h^n g h^{-n}` fixes ever larger balls about a fixed vertex
//! `p`, iff `g` fixes ever larger balls about the points `h^{-n}(p)` running
//! out to the repelling end `-ξ`. Both sides are sampled at the same `n` and
//! truncated to the same available radius, so at finite depth they must
//! agree exactly.

use serde::Serialize;

use super::automorphism::Automorphism;
use super::vertex::Vertex;
use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeIsometry {
    Elliptic {
        #[serde(skip_serializing_if = "Option::is_none")]
        fixed_vertex: Option<Vertex>,
        #[serde(skip_serializing_if = "Option::is_none")]
        inverted_edge: Option<(Vertex, Vertex)>,
    },
    Hyperbolic {
        translation_length: usize,
        /// First vertex of the axis in ball order about the base.
        axis_vertex: Vertex,
        /// Geodesic from `axis_vertex` to its image.
        segment: Vec<Vertex>,
    },
}

impl TreeIsometry {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, TreeIsometry::Elliptic { .. })
    }
}

fn image(g: &Automorphism, v: &Vertex) -> Result<Vertex> {
    g.apply(v).ok_or_else(|| Error::InsufficientDepth {
        required: v.len() as i64,
        available: g.depth().unwrap_or(i64::MAX),
    })
}

/// Minimal displacement over `B(base, ⌈d/2⌉ + 1)` with `d = d(base, g(base))`,
/// which meets the axis or the fixed set.
pub fn classify(g: &Automorphism) -> Result<TreeIsometry> {
    let base = Vertex::base();
    let d0 = base.distance(&image(g, &base)?);
    if let Some(depth) = g.depth() {
        let required = 2 * d0 as i64 + 2;
        if depth < required {
            return Err(Error::InsufficientDepth { required, available: depth });
        }
    }
    let tree = g.tree();
    let mut best: Option<(usize, Vertex)> = None;
    let mut inversion = None;
    for v in tree.ball(&base, d0.div_ceil(2) + 1) {
        let gv = image(g, &v)?;
        let disp = v.distance(&gv);
        if disp == 1 && inversion.is_none() && image(g, &gv)? == v {
            inversion = Some((v.clone(), gv));
        }
        if best.as_ref().map_or(true, |(b, _)| disp < *b) {
            best = Some((disp, v));
        }
    }
    let (min, p) = best.expect("balls are nonempty");
    Ok(match min {
        0 => TreeIsometry::Elliptic { fixed_vertex: Some(p), inverted_edge: None },
        1 if inversion.is_some() => TreeIsometry::Elliptic { fixed_vertex: None, inverted_edge: inversion },
        _ => {
            let gp = image(g, &p)?;
            TreeIsometry::Hyperbolic { translation_length: min, segment: p.geodesic(&gp), axis_vertex: p }
        }
    })
}

/// Largest fixed ball about a vertex, as far as the domain (or a limit)
/// allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "radius", rename_all = "lowercase")]
pub enum FixedBall {
    /// The center itself is moved.
    Moved,
    /// `B(center, r)` is fixed and some vertex at distance `r + 1` is moved.
    Radius(usize),
    /// Everything available is fixed, up to the given radius.
    Saturated(usize),
    /// Exact identity.
    Unbounded,
}

impl FixedBall {
    /// `-1` for a moved center.
    pub fn value(self) -> i64 {
        match self {
            FixedBall::Moved => -1,
            FixedBall::Radius(r) | FixedBall::Saturated(r) => r as i64,
            FixedBall::Unbounded => i64::MAX,
        }
    }

    pub fn is_saturated(self) -> bool {
        matches!(self, FixedBall::Saturated(_) | FixedBall::Unbounded)
    }

    pub fn fixes_center(self) -> bool {
        self != FixedBall::Moved
    }
}

/// The gauge `r(g, center)`. `limit` caps the search below the room the
/// domain leaves about `center`.
pub fn fixed_ball_radius(g: &Automorphism, center: &Vertex, limit: Option<usize>) -> Result<FixedBall> {
    if image(g, center)? != *center {
        return Ok(FixedBall::Moved);
    }
    let room = g.room_at(center).map(|r| r.max(0) as usize);
    let cap = match (room, limit) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    if g.is_exact() {
        // A non-identity map u ↦ c·π(u) fixing a vertex moves one of its
        // neighbors.
        return Ok(if g.is_identity() {
            cap.map_or(FixedBall::Unbounded, FixedBall::Saturated)
        } else {
            FixedBall::Radius(0)
        });
    }
    let cap = cap.expect("truncated maps have bounded room");
    let tree = g.tree();
    for r in 1..=cap {
        if tree.sphere(center, r).iter().any(|u| g.apply(u).as_ref() != Some(u)) {
            return Ok(FixedBall::Radius(r - 1));
        }
    }
    Ok(FixedBall::Saturated(cap))
}

fn moved_near(g: &Automorphism, center: &Vertex, r: usize) -> Option<Vertex> {
    g.tree().sphere(center, r).into_iter().find(|u| g.apply(u).as_ref() != Some(u))
}

/// One sampled point `x_n = h^{-n}(p)` of the ray towards `-ξ`.
#[derive(Debug, Clone, Serialize)]
pub struct RaySample {
    pub n: usize,
    pub vertex: Vertex,
    /// Radius available about `x_n` (for `g`) and about `p` (for the
    /// conjugate), whichever is smaller; `None` if unbounded.
    pub cap: Option<usize>,
    /// `r(g, x_n)`.
    pub along_ray: FixedBall,
    /// `r(h^n g h^{-n}, p)`.
    pub conjugate: FixedBall,
    /// `g(x_n)`.
    pub image: Vertex,
    /// `d(p, h^n g h^{-n}(p))`.
    pub conjugate_displacement: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RayProbe {
    pub p: Vertex,
    pub samples: Vec<RaySample>,
}

fn room(g: &Automorphism, v: &Vertex) -> Option<i64> {
    if g.defined_at(v) {
        g.room_at(v)
    } else {
        Some(-1)
    }
}

/// Samples the ray `h^{-n}(p)` for `n < budget` while both `g` about `x_n`
/// and the conjugate about `p` have room at least 1.
pub fn probe_ray(g: &Automorphism, h: &Automorphism, p: &Vertex, budget: usize) -> Result<RayProbe> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch(g.degree(), h.degree()));
    }
    let hinv = h.invert()?;
    let mut samples = Vec::new();
    let mut x = p.clone();
    let mut conj = g.clone();
    for n in 0..budget {
        if n > 0 {
            x = match hinv.apply(&x) {
                Some(y) => y,
                None => break,
            };
            conj = match conj.compose(&hinv).and_then(|c| h.compose(&c)) {
                Ok(c) => c,
                Err(Error::InsufficientDepth { .. }) => break,
                Err(e) => return Err(e),
            };
        }
        let (ra, rb) = (room(g, &x), room(&conj, p));
        if ra.is_some_and(|r| r < 1) || rb.is_some_and(|r| r < 1) {
            break;
        }
        let cap = match (ra, rb) {
            (Some(a), Some(b)) => Some(a.min(b) as usize),
            (a, b) => a.or(b).map(|r| r as usize),
        };
        let along_ray = fixed_ball_radius(g, &x, cap)?;
        let conjugate = fixed_ball_radius(&conj, p, cap)?;
        let image = image(g, &x)?;
        let conjugate_displacement = p.distance(&image_of(&conj, p)?);
        samples.push(RaySample { n, vertex: x.clone(), cap, along_ray, conjugate, image, conjugate_displacement });
    }
    Ok(RayProbe { p: p.clone(), samples })
}

fn image_of(g: &Automorphism, v: &Vertex) -> Result<Vertex> {
    image(g, v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Membership {
    Verified { r_max: Option<i64> },
    Refuted { witness: Vertex, at_sample: Option<usize> },
    Inconclusive { r_max: Option<i64> },
}

impl Membership {
    pub fn kind(&self) -> &'static str {
        match self {
            Membership::Verified { .. } => "Verified",
            Membership::Refuted { .. } => "Refuted",
            Membership::Inconclusive { .. } => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Verified,
    Refuted(usize),
    Inconclusive,
}

/// Finite-depth reading of "the fixed radius grows without bound": the last
/// unsaturated sample must exceed its predecessor and be followed by
/// saturated ones, and the final samples must be fixed. A last unsaturated
/// sample that does not exceed its predecessor refutes growth.
fn growth_shape(gauge: &[FixedBall]) -> Shape {
    let n = gauge.len();
    if n == 0 {
        return Shape::Inconclusive;
    }
    let tail_fixed = gauge[n.saturating_sub(3)..].iter().all(|f| f.fixes_center());
    let Some(j) = (0..n).rev().find(|&i| !gauge[i].is_saturated()) else {
        return Shape::Verified;
    };
    if j >= 1 && gauge[j].value() <= gauge[j - 1].value() {
        return Shape::Refuted(j);
    }
    if j + 1 < n && tail_fixed {
        Shape::Verified
    } else {
        Shape::Inconclusive
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub isometry_of_h: TreeIsometry,
    pub membership: Membership,
    pub ray_criterion: &'static str,
    pub definition: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<RayProbe>,
}

fn r_max(gauge: &[FixedBall]) -> Option<i64> {
    gauge.iter().map(|f| f.value()).max()
}

/// Decides `g ∈ U_h` by the ray criterion and by the definition; the two
/// must agree.
pub fn in_contraction(g: &Automorphism, h: &Automorphism, budget: usize) -> Result<ContractionReport> {
    let iso = classify(h)?;
    let TreeIsometry::Hyperbolic { axis_vertex, .. } = &iso else {
        let membership = if g.is_identity() {
            Membership::Verified { r_max: g.depth() }
        } else {
            Membership::Refuted { witness: some_moved(g)?, at_sample: None }
        };
        let k = membership.kind();
        return Ok(ContractionReport { isometry_of_h: iso, membership, ray_criterion: k, definition: k, probe: None });
    };
    let probe = probe_ray(g, h, axis_vertex, budget)?;
    let along: Vec<FixedBall> = probe.samples.iter().map(|s| s.along_ray).collect();
    let conj: Vec<FixedBall> = probe.samples.iter().map(|s| s.conjugate).collect();
    let (a, b) = (growth_shape(&along), growth_shape(&conj));
    let name = |s: Shape| match s {
        Shape::Verified => "Verified",
        Shape::Refuted(_) => "Refuted",
        Shape::Inconclusive => "Inconclusive",
    };
    if name(a) != name(b) {
        return Err(Error::Internal(format!(
            "contraction criteria disagree: ray {} vs definition {}",
            name(a),
            name(b)
        )));
    }
    let membership = match a {
        Shape::Verified => Membership::Verified { r_max: r_max(&along) },
        Shape::Inconclusive => Membership::Inconclusive { r_max: r_max(&along) },
        Shape::Refuted(j) => {
            let s = &probe.samples[j];
            let witness = match s.along_ray {
                FixedBall::Moved => s.vertex.clone(),
                f => moved_near(g, &s.vertex, f.value() as usize + 1)
                    .ok_or_else(|| Error::Internal("refuting sample without moved vertex".into()))?,
            };
            Membership::Refuted { witness, at_sample: Some(j) }
        }
    };
    Ok(ContractionReport { isometry_of_h: iso, membership, ray_criterion: name(a), definition: name(b), probe: Some(probe) })
}

fn some_moved(g: &Automorphism) -> Result<Vertex> {
    if let Some(v) = g.first_moved() {
        return Ok(v);
    }
    let base = Vertex::base();
    std::iter::once(base.clone())
        .chain(g.tree().neighbors(&base))
        .find(|u| g.apply(u).as_ref() != Some(u))
        .ok_or_else(|| Error::Internal("non-identity map without moved vertex".into()))
}

const WINDOW: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct ParabolicReport {
    pub isometry_of_h: TreeIsometry,
    /// `g` maps the visible tail of the `-ξ` ray into the axis with constant
    /// shift.
    pub in_parabolic: Option<bool>,
    /// `d(p, h^n g h^{-n} p)` is constant on the final window.
    pub bounded_orbit: bool,
    pub displacements: Vec<usize>,
    pub shifts: Vec<Option<i64>>,
}

/// Signed position of `y` along the axis relative to `x`, positive towards
/// `-ξ`; `None` if `y` is off the axis.
fn axis_shift(h: &Automorphism, len: usize, x: &Vertex, y: &Vertex) -> Option<i64> {
    let hy = h.apply(y)?;
    if y.distance(&hy) != len {
        return None;
    }
    let hx = h.apply(x)?;
    let d = x.distance(y) as i64;
    if y.distance(&hx) == x.distance(y) + len {
        Some(d)
    } else {
        Some(-d)
    }
}

pub fn parabolic_report(g: &Automorphism, h: &Automorphism, budget: usize) -> Result<ParabolicReport> {
    let iso = classify(h)?;
    let (p, len, lag) = match &iso {
        TreeIsometry::Hyperbolic { axis_vertex, translation_length, .. } => {
            (axis_vertex.clone(), *translation_length, 1)
        }
        TreeIsometry::Elliptic { fixed_vertex: Some(v), .. } => (v.clone(), 0, 1),
        TreeIsometry::Elliptic { inverted_edge: Some((v, _)), .. } => (v.clone(), 0, 2),
        TreeIsometry::Elliptic { .. } => unreachable!("elliptic maps fix a vertex or an edge"),
    };
    let probe = probe_ray(g, h, &p, budget)?;
    let n = probe.samples.len();
    if n < WINDOW + lag - 1 {
        return Err(Error::InsufficientDepth { required: (WINDOW + lag - 1) as i64, available: n as i64 });
    }
    let displacements: Vec<usize> = probe.samples.iter().map(|s| s.conjugate_displacement).collect();
    let bounded_orbit = (n - WINDOW + lag..n).all(|i| displacements[i] == displacements[i - lag]);
    let (in_parabolic, shifts) = if iso.is_elliptic() {
        (None, Vec::new())
    } else {
        let shifts: Vec<Option<i64>> =
            probe.samples.iter().map(|s| axis_shift(h, len, &s.vertex, &s.image)).collect();
        let tail = &shifts[n - WINDOW..];
        let ok = tail.iter().all(|s| s.is_some() && *s == tail[0]);
        (Some(ok), shifts)
    };
    Ok(ParabolicReport { isometry_of_h: iso, in_parabolic, bounded_orbit, displacements, shifts })
}

/// `g` fixes the repelling end of the hyperbolic `h`.
pub fn in_parabolic(g: &Automorphism, h: &Automorphism) -> Result<bool> {
    parabolic_report(g, h, DEFAULT_SAMPLE_BUDGET)?.in_parabolic.ok_or(Error::Elliptic)
}

pub fn bounded_orbit(g: &Automorphism, h: &Automorphism, power_cap: usize) -> Result<bool> {
    Ok(parabolic_report(g, h, power_cap)?.bounded_orbit)
}

/// `1` for elliptic maps, `q^ℓ` for hyperbolic ones.
pub fn scale(g: &Automorphism) -> Result<u64> {
    match classify(g)? {
        TreeIsometry::Elliptic { .. } => Ok(1),
        TreeIsometry::Hyperbolic { translation_length, .. } => {
            let q = g.tree().q();
            q.checked_pow(translation_length as u32).ok_or(Error::Overflow)
        }
    }
}
