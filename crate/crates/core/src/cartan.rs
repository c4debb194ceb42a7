//! Generalized Cartan matrices, their Coxeter diagrams, and type
//! classification against the crystallographic spherical and affine tables.

use std::fmt;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_FIELD_SIZE: i64 = 2;

/// A validated generalized Cartan matrix together with its optional label and
/// residue field size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizedCartanMatrix {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    cartan: Vec<Vec<i64>>,
    q: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GcmDocument {
    name: Option<String>,
    cartan: Vec<Vec<i64>>,
    q: Option<i64>,
}

impl GeneralizedCartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        Self::with_details(entries, None, None)
    }

    pub fn with_details(
        entries: Vec<Vec<i64>>,
        name: Option<String>,
        q: Option<i64>,
    ) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i + 1, len: row.len(), rank: n });
            }
        }
        for i in 0..n {
            if entries[i][i] != 2 {
                return Err(Error::DiagonalNotTwo { index: i + 1, value: entries[i][i] });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && entries[i][j] > 0 {
                    return Err(Error::PositiveOffDiagonal {
                        row: i + 1,
                        col: j + 1,
                        value: entries[i][j],
                    });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(Error::ZeroAsymmetry { row: i + 1, col: j + 1 });
                }
            }
        }
        let q = q.unwrap_or(DEFAULT_FIELD_SIZE);
        if q < 2 {
            return Err(Error::InvalidFieldSize(q));
        }
        Ok(GeneralizedCartanMatrix { name, cartan: entries, q })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn field_size(&self) -> i64 {
        self.q
    }

    pub fn transpose(&self) -> Self {
        let n = self.rank();
        let cartan = (0..n).map(|i| (0..n).map(|j| self.cartan[j][i]).collect()).collect();
        GeneralizedCartanMatrix { name: self.name.clone(), cartan, q: self.q }
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let cartan = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.cartan[i][j]).collect())
            .collect();
        GeneralizedCartanMatrix { name: None, cartan, q: self.q }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut cartan = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                cartan[i][j] = self.cartan[i][j];
            }
        }
        for i in 0..b {
            for j in 0..b {
                cartan[a + i][a + j] = other.cartan[i][j];
            }
        }
        GeneralizedCartanMatrix { name: None, cartan, q: self.q }
    }
}

/// Parses the JSON input document `{"name"?, "cartan", "q"?}`.
pub fn parse_gcm(document: &str) -> Result<GeneralizedCartanMatrix> {
    let doc: GcmDocument =
        serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    GeneralizedCartanMatrix::with_details(doc.cartan, doc.name, doc.q)
}

/// Entry of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl Bond {
    /// Crystallographic rule from the product `p = a_ij * a_ji`.
    pub fn from_product(p: i64) -> Bond {
        match p {
            0 => Bond::Finite(2),
            1 => Bond::Finite(3),
            2 => Bond::Finite(4),
            3 => Bond::Finite(6),
            _ => Bond::Infinite,
        }
    }

    /// Edge in the diagram: `m >= 3`.
    pub fn is_edge(self) -> bool {
        !matches!(self, Bond::Finite(1) | Bond::Finite(2))
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{m}"),
            Bond::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Bond {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bond::Finite(m) => s.serialize_u32(*m),
            Bond::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterDiagram {
    m: Vec<Vec<Bond>>,
}

impl CoxeterDiagram {
    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn bond(&self, i: usize, j: usize) -> Bond {
        self.m[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Bond>] {
        &self.m
    }

    fn restrict(&self, indices: &[usize]) -> CoxeterDiagram {
        CoxeterDiagram {
            m: indices.iter().map(|&i| indices.iter().map(|&j| self.m[i][j]).collect()).collect(),
        }
    }

    /// Builds a diagram directly from edge labels; unlisted pairs commute.
    fn from_edges(n: usize, edges: &[(usize, usize, Bond)]) -> CoxeterDiagram {
        let mut m = vec![vec![Bond::Finite(2); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Bond::Finite(1);
        }
        for &(i, j, b) in edges {
            m[i][j] = b;
            m[j][i] = b;
        }
        CoxeterDiagram { m }
    }

    fn graph(&self) -> UnGraph<(), Bond> {
        let n = self.rank();
        let mut g = UnGraph::<(), Bond>::with_capacity(n, n);
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.m[i][j].is_edge() {
                    g.add_edge(nodes[i], nodes[j], self.m[i][j]);
                }
            }
        }
        g
    }
}

pub fn coxeter_matrix(a: &GeneralizedCartanMatrix) -> CoxeterDiagram {
    let n = a.rank();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Bond::Finite(1)
                    } else {
                        Bond::from_product(a.entry(i, j) * a.entry(j, i))
                    }
                })
                .collect()
        })
        .collect();
    CoxeterDiagram { m }
}

/// Connected components of the diagram (edges where `m >= 3`), each sorted,
/// listed by least index. Indices are 0-based.
pub fn components(d: &CoxeterDiagram) -> Vec<Vec<usize>> {
    let n = d.rank();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && d.bond(v, w).is_edge() {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "label")]
pub enum ComponentKind {
    Spherical(String),
    Affine(String),
    Indefinite,
}

impl ComponentKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            ComponentKind::Spherical(_) => "spherical",
            ComponentKind::Affine(_) => "affine",
            ComponentKind::Indefinite => "indefinite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// 1-based generator indices.
    pub generators: Vec<usize>,
    #[serde(flatten)]
    pub kind: ComponentKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeClassification {
    pub components: Vec<Component>,
    pub irreducible: bool,
}

pub fn classify_type(d: &CoxeterDiagram) -> TypeClassification {
    let components: Vec<Component> = components(d)
        .into_iter()
        .map(|idx| {
            let kind = classify_connected(&d.restrict(&idx));
            Component { generators: idx.iter().map(|i| i + 1).collect(), kind }
        })
        .collect();
    let irreducible = components.len() == 1;
    TypeClassification { components, irreducible }
}

fn classify_connected(d: &CoxeterDiagram) -> ComponentKind {
    let g = d.graph();
    for (name, affine, table) in table_diagrams(d.rank()) {
        if is_isomorphic_matching(&g, &table.graph(), |_, _| true, |a, b| a == b) {
            return if affine {
                ComponentKind::Affine(name)
            } else {
                ComponentKind::Spherical(name)
            };
        }
    }
    ComponentKind::Indefinite
}

/// Path on `n` nodes with the given bond labels (length `n - 1`).
fn path_edges(labels: &[Bond]) -> Vec<(usize, usize, Bond)> {
    labels.iter().enumerate().map(|(i, &b)| (i, i + 1, b)).collect()
}

/// Star with arms of the given lengths hanging off node 0.
fn star_edges(arms: &[usize]) -> (usize, Vec<(usize, usize, Bond)>) {
    let three = Bond::Finite(3);
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next, three));
            prev = next;
            next += 1;
        }
    }
    (next, edges)
}

/// Connected crystallographic spherical and affine Coxeter diagrams of rank `n`,
/// as `(label, is_affine, diagram)`.
fn table_diagrams(n: usize) -> Vec<(String, bool, CoxeterDiagram)> {
    let three = Bond::Finite(3);
    let four = Bond::Finite(4);
    let six = Bond::Finite(6);
    let mut out = Vec::new();
    let mut push = |name: String, affine: bool, edges: Vec<(usize, usize, Bond)>| {
        out.push((name, affine, CoxeterDiagram::from_edges(n, &edges)));
    };

    // Spherical.
    push(format!("A{n}"), false, path_edges(&vec![three; n.saturating_sub(1)]));
    if n >= 2 {
        let mut labels = vec![three; n - 1];
        labels[n - 2] = four;
        push(format!("B{n}"), false, path_edges(&labels));
    }
    if n >= 4 {
        let mut edges = path_edges(&vec![three; n - 2]);
        edges.push((n - 3, n - 1, three));
        push(format!("D{n}"), false, edges);
    }
    if (6..=8).contains(&n) {
        let mut edges = path_edges(&vec![three; n - 2]);
        edges.push((2, n - 1, three));
        push(format!("E{n}"), false, edges);
    }
    if n == 4 {
        push("F4".into(), false, path_edges(&[three, four, three]));
    }
    if n == 2 {
        push("G2".into(), false, path_edges(&[six]));
    }

    // Affine, rank n = l + 1.
    if n == 2 {
        push("A1~".into(), true, path_edges(&[Bond::Infinite]));
    }
    if n >= 3 {
        let l = n - 1;
        let mut edges = path_edges(&vec![three; n - 1]);
        edges.push((n - 1, 0, three));
        push(format!("A{l}~"), true, edges);

        let mut labels = vec![three; n - 1];
        labels[0] = four;
        labels[n - 2] = four;
        push(format!("C{l}~"), true, path_edges(&labels));
    }
    if n >= 4 {
        let l = n - 1;
        let mut labels = vec![three; n - 2];
        labels[n - 3] = four;
        let mut edges = path_edges(&labels);
        edges.push((1, n - 1, three));
        push(format!("B{l}~"), true, edges);
    }
    if n >= 5 {
        let l = n - 1;
        // Spine of l - 3 nodes with two leaves at each end.
        let spine = l - 3;
        let mut edges = path_edges(&vec![three; spine - 1]);
        edges.push((0, spine, three));
        edges.push((0, spine + 1, three));
        edges.push((spine - 1, spine + 2, three));
        edges.push((spine - 1, spine + 3, three));
        push(format!("D{l}~"), true, edges);
    }
    let mut star = |name: &str, arms: &[usize]| {
        let (size, edges) = star_edges(arms);
        if size == n {
            push(name.to_string(), true, edges);
        }
    };
    star("E6~", &[2, 2, 2]);
    star("E7~", &[3, 3, 1]);
    star("E8~", &[5, 2, 1]);
    if n == 5 {
        push("F4~".into(), true, path_edges(&[three, three, four, three]));
    }
    if n == 3 {
        push("G2~".into(), true, path_edges(&[three, six]));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub applicable: bool,
    pub reason: String,
}

/// The non-closedness criterion needs an irreducible type that is neither
/// spherical nor affine.
pub fn main_theorem_applicable(a: &GeneralizedCartanMatrix) -> Applicability {
    let t = classify_type(&coxeter_matrix(a));
    if !t.irreducible {
        return Applicability { applicable: false, reason: "reducible".into() };
    }
    match &t.components[0].kind {
        ComponentKind::Indefinite => Applicability {
            applicable: true,
            reason: "irreducible indefinite".into(),
        },
        kind => Applicability { applicable: false, reason: kind.short_name().into() },
    }
}
