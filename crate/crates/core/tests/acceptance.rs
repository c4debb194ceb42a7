//! Acceptance run: one PASS/FAIL line per criterion, with wall-clock limits.
//! Every check is made against an oracle implemented here, independently of
//! the library code paths it audits.

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use contraction_core::axis::pick_alpha_beta;
use contraction_core::cartan::{ComponentKind, GeneralizedCartanMatrix};
use contraction_core::config::{find_gamma, fundamental_configuration, verify_configuration, Caps};
use contraction_core::treesim::automorphism::{random_branch_elliptic, random_elliptic};
use contraction_core::treesim::dynamics::{in_contraction, parabolic_report, DEFAULT_SAMPLE_BUDGET};
use contraction_core::treesim::{
    classify, fold_line, nonclosed_witness, scale, seeded_rng, Automorphism, Line, Membership, Side, Tree, Vertex,
};
use contraction_core::{classify_type, coxeter_matrix, parse_gcm, Error, Order, Root, Sign, WallRelation, WeylGroup, Word};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus(name: &str) -> GeneralizedCartanMatrix {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../corpus");
    p.push(format!("{name}.json"));
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    parse_gcm(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn rows(gcm: &GeneralizedCartanMatrix) -> Vec<Vec<i64>> {
    let n = gcm.rank();
    (0..n).map(|i| (0..n).map(|j| gcm.entry(i, j)).collect()).collect()
}

// ---------------------------------------------------------------------------
// Oracles.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Signature {
    Spherical,
    Affine,
    Indefinite,
}

/// Type of each connected component from the eigenvalues of the Gram matrix
/// `B_ij = -cos(pi / m_ij)` (with `-1` for `m_ij = inf`).
fn gram_oracle(a: &[Vec<i64>]) -> Vec<(Vec<usize>, Signature)> {
    let n = a.len();
    let m = |i: usize, j: usize| -> Option<f64> {
        match a[i][j] * a[j][i] {
            0 => Some(2.0),
            1 => Some(3.0),
            2 => Some(4.0),
            3 => Some(6.0),
            _ => None,
        }
    };
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && a[i][j] != 0 {
                let (x, y) = (find(&mut comp, i), find(&mut comp, j));
                comp[x] = y;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut comp, i);
        match groups.iter_mut().find(|g| find(&mut comp.clone(), g[0]) == r) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let k = g.len();
            let b = DMatrix::from_fn(k, k, |x, y| {
                if x == y {
                    1.0
                } else {
                    match m(g[x], g[y]) {
                        Some(mm) => -(std::f64::consts::PI / mm).cos(),
                        None => -1.0,
                    }
                }
            });
            let eig = b.symmetric_eigen().eigenvalues;
            let eps = 1e-9;
            let zero = eig.iter().filter(|l| l.abs() < eps).count();
            let neg = eig.iter().filter(|&&l| l <= -eps).count();
            let sig = if neg == 0 && zero == 0 {
                Signature::Spherical
            } else if neg == 0 && zero == 1 {
                Signature::Affine
            } else {
                Signature::Indefinite
            };
            (g.into_iter().map(|i| i + 1).collect(), sig)
        })
        .collect()
}

/// Reflection `s_i` on simple-root coordinates.
fn reflect_root(a: &[Vec<i64>], i: usize, x: &mut [i128]) {
    let c: i128 = (0..a.len()).map(|j| a[i][j] as i128 * x[j]).sum();
    x[i] -= c;
}

/// Reflection `s_i` on fundamental-weight coordinates.
fn reflect_weight(a: &[Vec<i64>], i: usize, lambda: &mut [i128]) {
    let li = lambda[i];
    for j in 0..a.len() {
        lambda[j] -= li * a[j][i] as i128;
    }
}

/// Cayley ball by breadth-first search, elements keyed by the image of the
/// regular weight `rho = (1, ..., 1)`. Returns `(rho image, distance,
/// matrix of the element on the root lattice)` in breadth-first order.
struct OracleBall {
    elements: Vec<(Vec<i128>, usize, Vec<Vec<i128>>)>,
    index: HashMap<Vec<i128>, usize>,
}

fn oracle_ball(a: &[Vec<i64>], radius: usize) -> OracleBall {
    let n = a.len();
    let rho = vec![1i128; n];
    let id: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut elements = vec![(rho.clone(), 0, id)];
    let mut index = HashMap::from([(rho, 0)]);
    let mut queue = VecDeque::from([0]);
    while let Some(k) = queue.pop_front() {
        let (lam, d, mat) = elements[k].clone();
        if d == radius {
            continue;
        }
        for i in 0..n {
            let mut l2 = lam.clone();
            reflect_weight(a, i, &mut l2);
            if index.contains_key(&l2) {
                continue;
            }
            // Left multiplication by s_i: reflect every column.
            let mut m2 = mat.clone();
            for col in 0..n {
                let mut c: Vec<i128> = (0..n).map(|r| m2[r][col]).collect();
                reflect_root(a, i, &mut c);
                for r in 0..n {
                    m2[r][col] = c[r];
                }
            }
            index.insert(l2.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push((l2, d + 1, m2));
        }
    }
    OracleBall { elements, index }
}

fn all_words(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..n {
                let mut v: Vec<usize> = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn hyperbolic_words(group: &WeylGroup, seed: u64, count: usize, max_len: usize) -> Vec<Word> {
    let mut rng = seeded_rng(seed);
    let n = group.rank();
    let mut out = Vec::new();
    while out.len() < count {
        let len = rng.gen_range(2..=max_len);
        let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let word = Word::new(letters);
        let w = group.element(word.clone()).expect("valid word");
        if group.order(&w) == Order::Infinite {
            out.push(word);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criteria.

fn c1_classification() -> Check {
    use Signature::*;
    let expected: &[(&str, &[(Signature, &str)])] = &[
        ("a2", &[(Spherical, "A2")]),
        ("b2", &[(Spherical, "B2")]),
        ("g2", &[(Spherical, "G2")]),
        ("d4", &[(Spherical, "D4")]),
        ("f4", &[(Spherical, "F4")]),
        ("e8", &[(Spherical, "E8")]),
        ("m_minus1", &[(Spherical, "A2")]),
        ("m_minus2", &[(Spherical, "B2")]),
        ("m_minus3", &[(Spherical, "G2")]),
        ("m_minus5", &[(Affine, "A1~")]),
        ("m_minus6", &[(Affine, "A1~")]),
        ("m_minus10", &[(Affine, "A1~")]),
        ("a1t", &[(Affine, "A1~")]),
        ("affine_a2t", &[(Affine, "A2~")]),
        ("affine_c2t", &[(Affine, "C2~")]),
        ("tri334", &[(Indefinite, "")]),
        ("right_angled", &[(Indefinite, "")]),
        ("right_angled_4", &[(Indefinite, "")]),
        ("line_3_inf", &[(Indefinite, "")]),
        ("reducible_a2_a1t", &[(Spherical, "A2"), (Affine, "A1~")]),
        ("reducible_a2_tri334", &[(Spherical, "A2"), (Indefinite, "")]),
    ];
    for (name, want) in expected {
        let gcm = corpus(name);
        let got = classify_type(&coxeter_matrix(&gcm));
        let oracle = gram_oracle(&rows(&gcm));
        ensure(got.components.len() == want.len(), || format!("{name}: {} components", got.components.len()))?;
        ensure(oracle.len() == want.len(), || format!("{name}: oracle finds {} components", oracle.len()))?;
        for ((c, (sig, label)), (gens, osig)) in got.components.iter().zip(want.iter()).zip(&oracle) {
            let (kind, lab) = match &c.kind {
                ComponentKind::Spherical(l) => (Spherical, l.as_str()),
                ComponentKind::Affine(l) => (Affine, l.as_str()),
                ComponentKind::Indefinite => (Indefinite, ""),
            };
            ensure(kind == *sig && lab == *label, || format!("{name}: got {kind:?} {lab}, want {sig:?} {label}"))?;
            ensure(*osig == kind && *gens == c.generators, || format!("{name}: Gram oracle says {osig:?} on {gens:?}"))?;
        }
    }
    Ok(format!("{} corpus matrices match the tables and the Gram signature", expected.len()))
}

fn c2_word_problem() -> Check {
    let mut checked = 0;
    for name in ["a2", "a1t", "affine_a2t", "tri334"] {
        let gcm = corpus(name);
        let a = rows(&gcm);
        let group = WeylGroup::new(gcm);
        let ball = oracle_ball(&a, 8);
        let mut by_oracle: HashMap<usize, Vec<Vec<i128>>> = HashMap::new();
        let mut by_matrix: HashMap<Vec<Vec<i128>>, usize> = HashMap::new();
        for letters in all_words(a.len(), 8) {
            let mut lam = vec![1i128; a.len()];
            for &i in letters.iter().rev() {
                reflect_weight(&a, i, &mut lam);
            }
            let k = *ball.index.get(&lam).ok_or_else(|| format!("{name}: {letters:?} outside the oracle ball"))?;
            let w = group.element(Word::new(letters.clone())).map_err(|e| e.to_string())?;
            let (len, reduced) = group.length(&w).map_err(|e| e.to_string())?;
            ensure(len == ball.elements[k].1, || {
                format!("{name}: {letters:?} length {len}, oracle {}", ball.elements[k].1)
            })?;
            let again = group.element(reduced).map_err(|e| e.to_string())?;
            ensure(again.matrix() == w.matrix(), || format!("{name}: reduced word of {letters:?} differs"))?;
            let m = w.matrix().rows();
            ensure(m == ball.elements[k].2, || format!("{name}: matrix of {letters:?} disagrees with oracle"))?;
            if let Some(prev) = by_oracle.insert(k, m.clone()) {
                ensure(prev == m, || format!("{name}: equal elements with different matrices"))?;
            }
            if let Some(prev) = by_matrix.insert(m, k) {
                ensure(prev == k, || format!("{name}: distinct elements with equal matrices"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} words agree with breadth-first enumeration"))
}

fn quadrant_sets(ball: &OracleBall, roots: &[Root], radius: usize) -> Vec<Vec<bool>> {
    roots
        .iter()
        .map(|r| {
            ball.elements
                .iter()
                .take_while(|e| e.1 <= radius)
                .map(|(_, _, m)| {
                    let v: Vec<i128> =
                        m.iter().map(|row| row.iter().zip(r.vector()).map(|(x, y)| x * y).sum()).collect();
                    v.iter().all(|&x| x >= 0)
                })
                .collect()
        })
        .collect()
}

fn quadrants(pa: &[bool], pb: &[bool]) -> [bool; 4] {
    let mut q = [false; 4];
    for (&a, &b) in pa.iter().zip(pb) {
        q[match (a, b) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        }] = true;
    }
    q
}

fn c3_wall_trichotomy() -> Check {
    let order = [(Sign::Plus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Minus, Sign::Minus)];
    let mut counts = [0usize; 2];
    for name in ["a1t", "tri334"] {
        let gcm = corpus(name);
        let a = rows(&gcm);
        let group = WeylGroup::new(gcm);
        let roots: Vec<Root> = group.root_orbit(6).map_err(|e| e.to_string())?.into_iter().map(|(r, _)| r).collect();
        let ball = oracle_ball(&a, 14);
        // Sides of w^{-1}: the oracle ball is closed under inversion, so
        // scanning u(alpha) over u in the ball covers every w^{-1}(alpha).
        let q10 = quadrant_sets(&ball, &roots, 10);
        let q14 = quadrant_sets(&ball, &roots, 14);
        for (i, x) in roots.iter().enumerate() {
            for (j, y) in roots.iter().enumerate() {
                if x == y || *x == y.negate() {
                    continue;
                }
                let by_pairing = group.crossing_by_pairing(x, y).map_err(|e| e.to_string())?;
                let by_order = group.crossing_by_matrix_order(x, y).map_err(|e| e.to_string())?;
                ensure(by_pairing == by_order, || format!("{name}: crossing tests disagree on {x}, {y}"))?;
                let o10 = quadrants(&q10[i], &q10[j]);
                let o14 = quadrants(&q14[i], &q14[j]);
                if by_order {
                    ensure(o14.iter().all(|&b| b), || format!("{name}: crossing {x}, {y} without four quadrants"))?;
                    counts[0] += 1;
                    continue;
                }
                ensure(o10.iter().filter(|&&b| b).count() == 3, || format!("{name}: {x}, {y}: {o10:?} at radius 10"))?;
                ensure(o10 == o14, || format!("{name}: {x}, {y} unstable between radius 10 and 14"))?;
                let empty = order[o10.iter().position(|&b| !b).unwrap()];
                match group.wall_relation(x, y, 10).map_err(|e| e.to_string())? {
                    WallRelation::Nested { empty_quadrant } => {
                        ensure(empty_quadrant == empty, || format!("{name}: {x}, {y} wrong empty quadrant"))?
                    }
                    other => return Err(format!("{name}: {x}, {y}: {other:?}")),
                }
                let audit = group.quadrant_audit(x, y, 14).map_err(|e| e.to_string())?;
                ensure(audit == o14, || format!("{name}: {x}, {y} audit {audit:?} vs {o14:?}"))?;
                counts[1] += 1;
            }
        }
    }
    Ok(format!("{} crossing and {} nested ordered pairs", counts[0], counts[1]))
}

fn c4_affine_exclusion() -> Check {
    let caps = Caps::default();
    let mut certified = 0;
    let mut without_pair = 0;
    for (seed, name) in [(40, "affine_a2t"), (41, "a1t")] {
        let group = WeylGroup::new(corpus(name));
        for word in hyperbolic_words(&group, seed, 10, 8) {
            let w = group.element(word.clone()).map_err(|e| e.to_string())?;
            let ab = match pick_alpha_beta(&group, &w, &caps) {
                Ok(ab) => ab,
                Err(e) if e.is_inconclusive() => {
                    without_pair += 1;
                    continue;
                }
                Err(e) => return Err(format!("{name} {word}: {e}")),
            };
            ensure(group.disjoint(&ab.alpha, &ab.beta, caps.bfs_radius) == Ok(true), || {
                format!("{name} {word}: certified pair is not disjoint")
            })?;
            certified += 1;
            match find_gamma(&group, &ab.alpha, &ab.beta, &caps) {
                Err(Error::Exhausted { orbit_cap: 12, .. }) => {}
                other => return Err(format!("{name} {word}: find_gamma gave {other:?}")),
            }
        }
    }
    ensure(certified > 0, || "no certified pair to test".into())?;
    Ok(format!("{certified} certified pairs, all exhausted ({without_pair} words without a pair)"))
}

fn c5_indefinite_success() -> Check {
    let caps = Caps::default();
    let mut done = 0;
    for (seed, name) in [(50, "tri334"), (51, "right_angled")] {
        let gcm = corpus(name);
        let a = rows(&gcm);
        let group = WeylGroup::new(gcm.clone());
        let ball = oracle_ball(&a, caps.bfs_radius);
        for word in hyperbolic_words(&group, seed, 20, 10) {
            let config = fundamental_configuration(&gcm, &word, &caps).map_err(|e| format!("{name} {word}: {e}"))?;
            verify_configuration(&gcm, &config).map_err(|e| format!("{name} {word}: re-verification: {e}"))?;
            // Pairwise disjointness witnessed by the oracle ball: three
            // occupied quadrants, the (+,+) one empty.
            let roots = [config.alpha.clone(), config.beta.clone(), config.gamma.clone()];
            let sets = quadrant_sets(&ball, &roots, caps.bfs_radius);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let q = quadrants(&sets[i], &sets[j]);
                ensure(q == [false, true, true, true], || format!("{name} {word}: oracle quadrants {q:?} for {i},{j}"))?;
            }
            done += 1;
        }
    }
    Ok(format!("{done} configurations found and re-verified at doubled caps"))
}

const DEPTH: usize = 12;

fn random_vertex(tree: Tree, len: usize, rng: &mut impl Rng) -> Vertex {
    let mut v = Vertex::base();
    while v.len() < len {
        let x = rng.gen_range(0..tree.degree);
        if v.last() != Some(x) {
            v.push(x);
        }
    }
    v
}

/// A hyperbolic `h`: the standard translation, possibly conjugated by an
/// elliptic map fixing the base, tabulated deep enough that `h` is known on
/// `B(base, DEPTH)`.
fn random_hyperbolic(tree: Tree, rng: &mut impl Rng) -> Automorphism {
    let steps = rng.gen_range(1..=3);
    let t = Automorphism::standard_translation(tree, steps);
    if rng.gen_bool(0.5) {
        return t;
    }
    let e = random_elliptic(tree, 0, DEPTH + 2 * steps as usize, rng);
    e.compose(&t).and_then(|x| x.compose(&e.invert()?)).expect("conjugates compose")
}

fn random_rigid(tree: Tree, rng: &mut impl Rng) -> Automorphism {
    let mut perm: Vec<u8> = tree.colors().collect();
    perm.shuffle(rng);
    let len = rng.gen_range(0..=3);
    Automorphism::rigid(tree, random_vertex(tree, len, rng), perm).expect("valid rigid map")
}

fn random_g(tree: Tree, rng: &mut impl Rng) -> Automorphism {
    match rng.gen_range(0..5) {
        0 => Automorphism::identity(tree),
        1 => {
            let len = rng.gen_range(1..=3);
            random_branch_elliptic(tree, &random_vertex(tree, len, rng), DEPTH, rng)
        }
        2 => random_elliptic(tree, rng.gen_range(0..=4), DEPTH, rng),
        3 => random_rigid(tree, rng),
        _ => {
            let a = random_branch_elliptic(tree, &random_vertex(tree, 2, rng), DEPTH, rng);
            let b = random_branch_elliptic(tree, &random_vertex(tree, 3, rng), DEPTH, rng);
            a.compose(&b).expect("elliptic maps compose")
        }
    }
}

fn c6_contraction_dichotomy() -> Check {
    let tree = Tree::new(3).unwrap();
    let mut tally: HashMap<&'static str, usize> = HashMap::new();
    for seed in 0..100u64 {
        let mut rng = seeded_rng(600 + seed);
        let h = if seed % 2 == 0 { random_hyperbolic(tree, &mut rng) } else { random_elliptic(tree, 0, DEPTH, &mut rng) };
        let g = random_g(tree, &mut rng);
        let report = in_contraction(&g, &h, DEFAULT_SAMPLE_BUDGET).map_err(|e| format!("pair {seed}: {e}"))?;
        let kind = report.membership.kind();
        if classify(&h).map_err(|e| e.to_string())?.is_elliptic() {
            let verified = matches!(report.membership, Membership::Verified { .. });
            ensure(verified == g.is_identity(), || format!("pair {seed}: elliptic h, {kind}"))?;
        } else {
            ensure(report.ray_criterion == report.definition, || format!("pair {seed}: criteria disagree"))?;
        }
        *tally.entry(kind).or_default() += 1;
    }
    let mut t: Vec<_> = tally.into_iter().collect();
    t.sort();
    Ok(format!("100 pairs, verdicts {t:?}"))
}

fn c7_parabolic() -> Check {
    let tree = Tree::new(3).unwrap();
    let (mut inside, mut outside) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = seeded_rng(700 + seed);
        let h = if seed % 4 == 3 { random_elliptic(tree, 0, DEPTH, &mut rng) } else { random_hyperbolic(tree, &mut rng) };
        let g = match rng.gen_range(0..3) {
            0 => h.power(rng.gen_range(-2..=2)).map_err(|e| e.to_string())?,
            _ => random_g(tree, &mut rng),
        };
        let report = parabolic_report(&g, &h, DEFAULT_SAMPLE_BUDGET).map_err(|e| format!("pair {seed}: {e}"))?;
        match report.in_parabolic {
            None => ensure(report.bounded_orbit, || format!("pair {seed}: elliptic h with unbounded orbit"))?,
            Some(p) => {
                ensure(p == report.bounded_orbit, || format!("pair {seed}: end test {p}, orbit test {}", report.bounded_orbit))?;
                let c = in_contraction(&g, &h, DEFAULT_SAMPLE_BUDGET).map_err(|e| e.to_string())?;
                if matches!(c.membership, Membership::Verified { .. }) {
                    ensure(p, || format!("pair {seed}: in U_h but not in P_h"))?;
                }
                if p {
                    inside += 1;
                } else {
                    outside += 1;
                }
            }
        }
    }
    Ok(format!("{inside} pairs in P_h and {outside} outside, tests agree"))
}

/// `|Stab(base) . h^{-n}(base)|`, counted by enumerating the sphere.
fn orbit_count(tree: Tree, h: &Automorphism, n: i64) -> usize {
    let x = h.power(-n).unwrap().apply(&Vertex::base()).unwrap();
    tree.sphere(&Vertex::base(), x.len()).len()
}

fn c8_scale() -> Check {
    for degree in [3u8, 4] {
        let tree = Tree::new(degree).unwrap();
        for steps in 1..=3i64 {
            let t = Automorphism::standard_translation(tree, steps);
            let ratio = orbit_count(tree, &t, 3) / orbit_count(tree, &t, 2);
            ensure(orbit_count(tree, &t, 3) % orbit_count(tree, &t, 2) == 0, || "orbit sizes not divisible".into())?;
            let s = scale(&t).map_err(|e| e.to_string())?;
            ensure(s == ratio as u64, || format!("degree {degree}, l = {steps}: scale {s}, orbit ratio {ratio}"))?;
        }
    }
    let tree = Tree::new(3).unwrap();
    for seed in 0..100u64 {
        let mut rng = seeded_rng(800 + seed);
        let g = if seed % 2 == 0 { random_g(tree, &mut rng) } else { random_hyperbolic(tree, &mut rng) };
        let s = scale(&g).map_err(|e| format!("g {seed}: {e}"))?;
        let si = scale(&g.invert().map_err(|e| e.to_string())?).map_err(|e| format!("g {seed}: {e}"))?;
        ensure(s == si, || format!("g {seed}: scale {s} vs inverse {si}"))?;
        let elliptic = classify(&g).map_err(|e| e.to_string())?.is_elliptic();
        ensure((s == 1) == elliptic, || format!("g {seed}: scale {s}, elliptic {elliptic}"))?;
    }
    Ok("orbit ratios match q^l; scale symmetric and 1 exactly on elliptic maps".into())
}

fn c9_witness() -> Check {
    let tree = Tree::new(3).unwrap();
    for steps in [1, 2] {
        let w = nonclosed_witness(tree, steps, 14).map_err(|e| e.to_string())?;
        ensure(w.transcript.all_checks_pass, || format!("l = {steps}: transcript checks fail"))?;
        let limit = in_contraction(&w.limit, &w.h, DEFAULT_SAMPLE_BUDGET).map_err(|e| e.to_string())?;
        ensure(matches!(limit.membership, Membership::Refuted { .. }), || format!("l = {steps}: limit not refuted"))?;
        ensure(!w.sequence.is_empty(), || "empty sequence".into())?;
        for (i, gk) in w.sequence.iter().enumerate() {
            let k = i + 1;
            let r = in_contraction(gk, &w.h, DEFAULT_SAMPLE_BUDGET).map_err(|e| e.to_string())?;
            ensure(matches!(r.membership, Membership::Verified { .. }), || format!("l = {steps}: g_{k} not verified"))?;
            // Agreement radius by direct comparison on balls about the base.
            let agree = (0..=14)
                .take_while(|&r| tree.ball(&Vertex::base(), r).iter().all(|v| gk.apply(v) == w.limit.apply(v)))
                .last();
            ensure(agree.map_or(false, |a| a + 2 >= k), || format!("l = {steps}: g_{k} agrees only to {agree:?}"))?;
        }
    }
    Ok("g_k verified in U_h, converging to a refuted limit".into())
}

fn c10_folding() -> Check {
    let tree = Tree::new(3).unwrap();
    let standard = Line::standard(tree);
    for seed in 0..10u64 {
        let line = Line::random(tree, &mut seeded_rng(1000 + seed));
        let fold = fold_line(&line, DEPTH).map_err(|e| format!("line {seed}: {e}"))?;
        for k in 1..fold.partials.len().saturating_sub(1) {
            let step = fold.partials[k + 1].compose(&fold.partials[k].invert().map_err(|e| e.to_string())?);
            let step = step.map_err(|e| e.to_string())?;
            for v in tree.ball(&Vertex::base(), k.saturating_sub(1)) {
                ensure(step.apply(&v) == Some(v.clone()), || format!("line {seed}: p_{} p_{k}^-1 moves {v}", k + 1))?;
            }
        }
        for side in [Side::Forward, Side::Backward] {
            for k in 0..=DEPTH / 2 {
                let image = fold.g.apply(&line.vertex(side, k));
                ensure(image == Some(standard.vertex(side, k)), || format!("line {seed}: {side:?} vertex {k} lands off the standard line"))?;
            }
        }
    }
    Ok("10 random lines folded; partial products are Cauchy".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("1 classification suite", 1, c1_classification),
        ("2 word-problem oracle", 60, c2_word_problem),
        ("3 wall-relation trichotomy", 120, c3_wall_trichotomy),
        ("4 affine exclusion", 120, c4_affine_exclusion),
        ("5 indefinite success", 300, c5_indefinite_success),
        ("6 tree contraction dichotomy", 120, c6_contraction_dichotomy),
        ("7 parabolic = end stabilizer", 120, c7_parabolic),
        ("8 scale laws", 60, c8_scale),
        ("9 non-closedness witness", 60, c9_witness),
        ("10 folding", 60, c10_folding),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= Duration::from_secs(limit) => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit} s limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail} [{:.2} s / {limit} s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
