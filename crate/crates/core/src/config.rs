//! The fundamental hyperbolic configuration and the contraction certificate.
//!
//! For an irreducible indefinite Weyl group and a hyperbolic `w`, a triple of
//! pairwise disjoint, pairwise non-opposite roots `(alpha, beta, gamma)` with
//! `-xi` inside `D(alpha)` and `+xi` inside `D(beta)` shows that the root group
//! of `-gamma` is contracted by both `w` and `w^{-1}`.

use serde::Serialize;

use crate::axis::{end_sign, pick_alpha_beta, Direction, EndSign};
use crate::cartan::{
    classify_type, components, coxeter_matrix, main_theorem_applicable, ComponentKind,
    GeneralizedCartanMatrix, TypeClassification,
};
use crate::error::{Error, Result};
use crate::lattice::Sign;
use crate::roots::Root;
use crate::weyl::{Isometry, Order, WeylElement, WeylGroup, Word};

/// Search budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Maximal word length in the root-orbit search for `gamma`.
    #[serde(rename = "orbit_cap")]
    pub orbit: usize,
    /// Cayley-ball radius for quadrant witnesses.
    pub bfs_radius: usize,
    /// Number of powers inspected when deciding end containment.
    #[serde(rename = "power_cap")]
    pub power: usize,
    /// Periods of the axis scanned for crossed walls.
    pub periods: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { orbit: 12, bfs_radius: 8, power: 32, periods: 4 }
    }
}

impl Caps {
    pub fn doubled(&self) -> Caps {
        Caps {
            orbit: self.orbit * 2,
            bfs_radius: self.bfs_radius * 2,
            power: self.power * 2,
            periods: self.periods * 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relations {
    pub alpha_beta_disjoint: bool,
    pub alpha_gamma_disjoint: bool,
    pub beta_gamma_disjoint: bool,
    pub alpha_beta_not_opposite: bool,
    pub alpha_gamma_not_opposite: bool,
    pub beta_gamma_not_opposite: bool,
}

impl Relations {
    pub fn all(&self) -> bool {
        self.alpha_beta_disjoint
            && self.alpha_gamma_disjoint
            && self.beta_gamma_disjoint
            && self.alpha_beta_not_opposite
            && self.alpha_gamma_not_opposite
            && self.beta_gamma_not_opposite
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndCertificates {
    pub alpha_backward: EndSign,
    pub beta_forward: EndSign,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicConfiguration {
    pub word: Word,
    pub alpha: Root,
    pub beta: Root,
    pub gamma: Root,
    pub relations: Relations,
    pub end_certificates: EndCertificates,
    pub caps_used: Caps,
}

/// First root `gamma` in breadth-first orbit order disjoint from both `alpha`
/// and `beta`. Candidates whose wall relation cannot be decided within the
/// radius cap are skipped and counted.
pub fn find_gamma(group: &WeylGroup, alpha: &Root, beta: &Root, caps: &Caps) -> Result<Root> {
    let mut inconclusive = 0;
    for (gamma, _) in group.root_orbit(caps.orbit)? {
        if gamma == *alpha || gamma == *beta || gamma == alpha.negate() || gamma == beta.negate() {
            continue;
        }
        let check = group
            .disjoint(&gamma, alpha, caps.bfs_radius)
            .and_then(|d| if d { group.disjoint(&gamma, beta, caps.bfs_radius) } else { Ok(false) });
        match check {
            Ok(true) => return Ok(gamma),
            Ok(false) => {}
            Err(Error::Inconclusive { .. }) => inconclusive += 1,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Exhausted { orbit_cap: caps.orbit, inconclusive })
}

fn relations(group: &WeylGroup, a: &Root, b: &Root, c: &Root, radius: usize) -> Result<Relations> {
    let not_opposite = |x: &Root, y: &Root| *x != y.negate();
    Ok(Relations {
        alpha_beta_disjoint: group.disjoint(a, b, radius)?,
        alpha_gamma_disjoint: group.disjoint(a, c, radius)?,
        beta_gamma_disjoint: group.disjoint(b, c, radius)?,
        alpha_beta_not_opposite: not_opposite(a, b),
        alpha_gamma_not_opposite: not_opposite(a, c),
        beta_gamma_not_opposite: not_opposite(b, c),
    })
}

fn with_stage(stage: &str, e: Error) -> Error {
    match e {
        Error::Inconclusive { cap } => Error::SearchExhausted {
            stage: stage.into(),
            detail: format!("wall relation inconclusive at radius {cap}"),
        },
        Error::Exhausted { orbit_cap, inconclusive } => Error::SearchExhausted {
            stage: stage.into(),
            detail: format!(
                "no root within orbit cap {orbit_cap} ({inconclusive} candidates inconclusive)"
            ),
        },
        other => other,
    }
}

pub fn fundamental_configuration(
    gcm: &GeneralizedCartanMatrix,
    word: &Word,
    caps: &Caps,
) -> Result<HyperbolicConfiguration> {
    let applicability = main_theorem_applicable(gcm);
    if !applicability.applicable {
        return Err(Error::NotApplicable(applicability.reason));
    }
    let group = WeylGroup::new(gcm.clone());
    configuration_in(&group, &group.element(word.clone())?, caps)
}

fn configuration_in(
    group: &WeylGroup,
    w: &WeylElement,
    caps: &Caps,
) -> Result<HyperbolicConfiguration> {
    if group.classify_isometry(w) == Isometry::Elliptic {
        return Err(Error::Elliptic);
    }
    let ab = pick_alpha_beta(group, w, caps).map_err(|e| with_stage("pick_alpha_beta", e))?;
    let gamma =
        find_gamma(group, &ab.alpha, &ab.beta, caps).map_err(|e| with_stage("find_gamma", e))?;
    let rel = relations(group, &ab.alpha, &ab.beta, &gamma, caps.bfs_radius)
        .map_err(|e| with_stage("verify", e))?;
    if !rel.all() {
        return Err(Error::Internal(format!("configuration predicates failed: {rel:?}")));
    }
    Ok(HyperbolicConfiguration {
        word: w.word().clone(),
        alpha: ab.alpha,
        beta: ab.beta,
        gamma,
        relations: rel,
        end_certificates: EndCertificates {
            alpha_backward: ab.alpha_backward,
            beta_forward: ab.beta_forward,
        },
        caps_used: *caps,
    })
}

/// Re-checks a configuration from scratch at doubled caps: each pair is
/// audited over the whole Cayley ball rather than by early exit, and both end
/// containments are recomputed with twice as many powers.
pub fn verify_configuration(
    gcm: &GeneralizedCartanMatrix,
    config: &HyperbolicConfiguration,
) -> Result<()> {
    let group = WeylGroup::new(gcm.clone());
    let caps = config.caps_used.doubled();
    let fail = |what: String| Err(Error::Internal(format!("re-verification failed: {what}")));
    let roots = [&config.alpha, &config.beta, &config.gamma];
    for r in roots {
        group.root_descent(r)?;
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (x, y) = (roots[i], roots[j]);
        if *x == y.negate() || x == y {
            return fail(format!("{x} and {y} are equal or opposite"));
        }
        if group.walls_cross(x, y)? {
            return fail(format!("walls of {x} and {y} cross"));
        }
        let seen = group.quadrant_audit(x, y, caps.bfs_radius)?;
        // Quadrant order: (+,+), (+,-), (-,+), (-,-).
        if seen != [false, true, true, true] {
            return fail(format!("quadrants of {x} and {y}: {seen:?}"));
        }
    }
    let w = group.element(config.word.clone())?;
    if end_sign(&group, &config.alpha, &w, Direction::Backward, caps.power)?
        != EndSign::EventuallyInside
    {
        return fail("repelling end not inside alpha".into());
    }
    if end_sign(&group, &config.beta, &w, Direction::Forward, caps.power)?
        != EndSign::EventuallyInside
    {
        return fail("attracting end not inside beta".into());
    }
    if group.side(&config.alpha, &group.identity())? == Sign::Plus
        && group.side(&config.beta, &group.identity())? == Sign::Plus
    {
        return fail("base chamber in both half-apartments".into());
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Assumptions {
    pub contractive_root_groups: &'static str,
    pub note: &'static str,
}

const ASSUMPTIONS: Assumptions = Assumptions {
    contractive_root_groups: "asserted-by-theory",
    note: "root groups of split and almost split Kac-Moody groups over finite fields are \
           contractive (condition FPRS); not verified computationally",
};

#[derive(Debug, Clone, Serialize)]
pub struct ComponentCertificate {
    /// 1-based generator indices of the component in the input matrix.
    pub generators: Vec<usize>,
    pub certificate: ContractionCertificate,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict")]
pub enum Conclusion {
    TrivialContraction { order: u64 },
    NotClosed { configuration: HyperbolicConfiguration, statement: String },
    ProductSplit { components: Vec<ComponentCertificate> },
    NotApplicable { reason: String },
    Inconclusive { stage: String, detail: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionCertificate {
    pub tool_version: &'static str,
    pub input: GeneralizedCartanMatrix,
    pub word: Word,
    pub classification: TypeClassification,
    pub caps: Caps,
    pub conclusion: Conclusion,
    pub assumptions: Assumptions,
}

impl ContractionCertificate {
    /// True if this certificate or any component one stopped on a budget.
    pub fn is_inconclusive(&self) -> bool {
        match &self.conclusion {
            Conclusion::Inconclusive { .. } => true,
            Conclusion::ProductSplit { components } => {
                components.iter().any(|c| c.certificate.is_inconclusive())
            }
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Letters of `word` inside `indices`, renumbered by position in `indices`.
pub fn project_word(word: &Word, indices: &[usize]) -> Word {
    Word::new(
        word.letters()
            .iter()
            .filter_map(|l| indices.iter().position(|i| i == l))
            .collect(),
    )
}

/// Runs the full pipeline. Budget exhaustion becomes an `Inconclusive`
/// conclusion; input errors and failed re-verification are returned as errors.
pub fn analyze(gcm: &GeneralizedCartanMatrix, word: &Word, caps: &Caps) -> Result<ContractionCertificate> {
    if caps.power < crate::axis::MIN_POWER_CAP {
        return Err(Error::PowerCapTooSmall(caps.power));
    }
    let group = WeylGroup::new(gcm.clone());
    let w = group.element(word.clone())?;
    let diagram = coxeter_matrix(gcm);
    let classification = classify_type(&diagram);
    let certificate = |conclusion| ContractionCertificate {
        tool_version: crate::VERSION,
        input: gcm.clone(),
        word: word.clone(),
        classification: classification.clone(),
        caps: *caps,
        conclusion,
        assumptions: ASSUMPTIONS,
    };
    if !classification.irreducible {
        let mut parts = Vec::new();
        for idx in components(&diagram) {
            let sub = gcm.restrict(&idx);
            parts.push(ComponentCertificate {
                generators: idx.iter().map(|i| i + 1).collect(),
                certificate: analyze(&sub, &project_word(word, &idx), caps)?,
            });
        }
        return Ok(certificate(Conclusion::ProductSplit { components: parts }));
    }
    if let Order::Finite(order) = group.order(&w) {
        return Ok(certificate(Conclusion::TrivialContraction { order }));
    }
    match &classification.components[0].kind {
        ComponentKind::Spherical(_) => {
            Err(Error::Internal("infinite-order element in a finite Weyl group".into()))
        }
        ComponentKind::Affine(label) => Ok(certificate(Conclusion::NotApplicable {
            reason: format!("affine: {label} is outside the scope of the non-closedness criterion"),
        })),
        ComponentKind::Indefinite => match configuration_in(&group, &w, caps) {
            Ok(configuration) => {
                verify_configuration(gcm, &configuration)?;
                let statement = format!(
                    "RootGroup({}) ⊆ U_w ∩ U_{{w^-1}}; hence U_w is not closed",
                    configuration.gamma.negate()
                );
                Ok(certificate(Conclusion::NotClosed { configuration, statement }))
            }
            Err(Error::SearchExhausted { stage, detail }) => {
                Ok(certificate(Conclusion::Inconclusive { stage, detail }))
            }
            Err(e) if e.is_inconclusive() => Ok(certificate(Conclusion::Inconclusive {
                stage: "configuration".into(),
                detail: e.to_string(),
            })),
            Err(e) => Err(e),
        },
    }
}
