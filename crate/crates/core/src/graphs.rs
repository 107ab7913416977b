//! Admissible weighted graphs and admissible triples.
//!
//! An admissible weighted graph is an edge-free graph decorated with a genus
//! weight `g(v) ≥ 0` and a curve-class weight `b(v)` per vertex, an ordered
//! list of positively weighted roots (contact points with the divisor `E`,
//! with contact multiplicity = weight) and an ordered list of legs (ordinary
//! marked points, labelled globally in `1..=k`). It must be *relatively
//! connected*: a single vertex, or every vertex carries at least one root.
//!
//! An admissible triple `η = (Γ₁, Γ₂, I)` pairs such graphs on the two sides
//! of the degenerate fiber, with matching root weights and a connected glued
//! graph (one edge per root pair); `I` is the set of marked-point labels that
//! land on `Γ₁`, derived from its legs. Triples index the terms of the
//! degeneration formula; their numerical shadow is the genus
//! `g(η) = r + 1 − |V| + Σ g(v)`, the H-degree, the multiplicity `m(η)`
//! (product of root weights) and the symmetry order `|Eq(η)|` (root
//! permutations fixing the triple).
//!
//! Vertex identity is by decoration only: a graph is stored with an
//! arbitrary vertex order and compared through its canonical form.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::{AmpleData, BlowupGeometry};
use crate::lattice::LatticeVector;

/// Which relative pair a graph lives on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Side {
    Y1,
    Y2,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Y1 => "Y1",
            Side::Y2 => "Y2",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Vertex {
    pub genus: u32,
    pub cls: LatticeVector,
}

/// A weighted root attached to `vertex`; index in the root list pairs it
/// with the same index on the other side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Root {
    pub vertex: usize,
    pub weight: i64,
}

/// A leg attached to `vertex`, carrying a global marked-point label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Leg {
    pub vertex: usize,
    pub label: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedGraph {
    pub side: Side,
    /// Rank of the ambient curve-class group; kept explicitly so the empty
    /// graph still knows its zero total class.
    pub rank: usize,
    pub vertices: Vec<Vertex>,
    pub roots: Vec<Root>,
    pub legs: Vec<Leg>,
}

impl WeightedGraph {
    pub fn new(
        side: Side,
        rank: usize,
        vertices: Vec<Vertex>,
        roots: Vec<Root>,
        legs: Vec<Leg>,
    ) -> Self {
        WeightedGraph {
            side,
            rank,
            vertices,
            roots,
            legs,
        }
    }

    pub fn empty(side: Side, rank: usize) -> Self {
        WeightedGraph::new(side, rank, Vec::new(), Vec::new(), Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `b(Γ) = Σ_v b(v)`; the zero vector for the empty graph.
    pub fn total_class(&self) -> Result<LatticeVector> {
        let mut total = LatticeVector::zero(self.rank);
        for v in &self.vertices {
            total = total.add(&v.cls)?;
        }
        Ok(total)
    }

    pub fn root_weights(&self) -> Vec<i64> {
        self.roots.iter().map(|r| r.weight).collect()
    }

    pub fn roots_at(&self, vertex: usize) -> usize {
        self.roots.iter().filter(|r| r.vertex == vertex).count()
    }

    pub fn legs_at(&self, vertex: usize) -> usize {
        self.legs.iter().filter(|l| l.vertex == vertex).count()
    }

    pub fn leg_labels(&self) -> BTreeSet<usize> {
        self.legs.iter().map(|l| l.label).collect()
    }

    fn relatively_connected(&self) -> bool {
        self.vertices.len() <= 1 || (0..self.vertices.len()).all(|v| self.roots_at(v) >= 1)
    }

    /// Canonical per-vertex records: decorations plus attached root indices
    /// (with weights) and sorted leg labels, sorted as a whole. Within a
    /// valid graph the records are pairwise distinct, so this determines the
    /// graph up to vertex relabeling.
    fn vertex_records(&self) -> Vec<DecorationRecord> {
        let mut records: Vec<_> = (0..self.vertices.len())
            .map(|v| {
                let roots: Vec<(usize, i64)> = self
                    .roots
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.vertex == v)
                    .map(|(i, r)| (i, r.weight))
                    .collect();
                let legs: Vec<usize> = self
                    .legs
                    .iter()
                    .filter(|l| l.vertex == v)
                    .map(|l| l.label)
                    .sorted()
                    .collect();
                (
                    self.vertices[v].genus,
                    self.vertices[v].cls.coords().to_vec(),
                    roots,
                    legs,
                )
            })
            .collect();
        records.sort();
        records
    }
}

/// A pair of admissible weighted graphs glued along their roots. The label
/// set `I` carried by `Γ₁` is derived data: exactly `gamma1`'s leg labels.
/// (genus, class coords, attached roots as (index, weight), leg labels)
type DecorationRecord = (u32, Vec<i64>, Vec<(usize, i64)>, Vec<usize>);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibleTriple {
    pub gamma1: WeightedGraph,
    pub gamma2: WeightedGraph,
}

/// Canonical form of a triple modulo simultaneous root reordering and
/// vertex relabeling; equal keys identify equivalent terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TripleKey(String);

impl TripleKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TripleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Brute-force symmetry searches iterate over all `r!` root permutations;
/// past this root count the search is refused rather than left to run for
/// hours.
const MAX_SYMMETRY_ROOTS: usize = 9;

/// One failed admissibility clause, reported as data by [`AdmissibleTriple::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    SideMismatch { got: Side, expected: Side },
    RootVertexOutOfRange { side: Side, root: usize },
    LegVertexOutOfRange { side: Side, leg: usize },
    RelativeConnectedness { side: Side },
    ClassRankMismatch { side: Side, vertex: usize },
    ClassNotInCone { side: Side, vertex: usize },
    Stability { side: Side, vertex: usize },
    RootWeightNotPositive { side: Side, root: usize },
    RootCountMismatch { gamma1: usize, gamma2: usize },
    RootWeightMismatch { root: usize },
    GluedGraphDisconnected,
    NoVertices,
    LegLabels { detail: String },
    GenusMismatch { expected: i64, actual: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SideMismatch { got, expected } => {
                write!(f, "graph side {got} where {expected} was expected")
            }
            Violation::RootVertexOutOfRange { side, root } => {
                write!(f, "{side}: root {root} attached to a missing vertex")
            }
            Violation::LegVertexOutOfRange { side, leg } => {
                write!(f, "{side}: leg {leg} attached to a missing vertex")
            }
            Violation::RelativeConnectedness { side } => {
                write!(
                    f,
                    "{side}: relative connectedness fails (a vertex without a root)"
                )
            }
            Violation::ClassRankMismatch { side, vertex } => {
                write!(f, "{side}: vertex {vertex} class has the wrong rank")
            }
            Violation::ClassNotInCone { side, vertex } => {
                write!(f, "{side}: vertex {vertex} class is not effective")
            }
            Violation::Stability { side, vertex } => {
                write!(
                    f,
                    "{side}: vertex {vertex} is unstable (zero class with 2g-2+val <= 0)"
                )
            }
            Violation::RootWeightNotPositive { side, root } => {
                write!(f, "{side}: root {root} weight must be >= 1")
            }
            Violation::RootCountMismatch { gamma1, gamma2 } => {
                write!(f, "root count mismatch: {gamma1} vs {gamma2}")
            }
            Violation::RootWeightMismatch { root } => {
                write!(f, "root weight mismatch at root {root}")
            }
            Violation::GluedGraphDisconnected => write!(f, "glued graph is disconnected"),
            Violation::NoVertices => write!(f, "glued graph has no vertices"),
            Violation::LegLabels { detail } => write!(f, "leg labels: {detail}"),
            Violation::GenusMismatch { expected, actual } => {
                write!(f, "genus mismatch: g(eta) = {actual}, requested {expected}")
            }
        }
    }
}

impl AdmissibleTriple {
    pub fn new(gamma1: WeightedGraph, gamma2: WeightedGraph) -> Self {
        AdmissibleTriple { gamma1, gamma2 }
    }

    pub fn root_count(&self) -> usize {
        self.gamma1.roots.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.gamma1.vertices.len() + self.gamma2.vertices.len()
    }

    /// `I`: the global leg labels carried by `Γ₁`.
    pub fn leg_set(&self) -> BTreeSet<usize> {
        self.gamma1.leg_labels()
    }

    /// `g(η) = r + 1 − |V(Γ)| + Σ g(v)`. Can be negative on candidate
    /// triples during search; never on validated ones.
    pub fn genus(&self) -> i64 {
        let r = self.root_count() as i64;
        let vertices = self.vertex_count() as i64;
        let genus_sum: i64 = self
            .gamma1
            .vertices
            .iter()
            .chain(&self.gamma2.vertices)
            .map(|v| i64::from(v.genus))
            .sum();
        r + 1 - vertices + genus_sum
    }

    /// `d(η) = H₁·b(Γ₁) + H₂·b(Γ₂)`.
    pub fn h_degree(&self, amp: &AmpleData) -> Result<i64> {
        let d1 = amp.h1().pair(&self.gamma1.total_class()?)?;
        let d2 = amp.h2().pair(&self.gamma2.total_class()?)?;
        d1.checked_add(d2).ok_or(Error::Overflow {
            context: "H-degree",
        })
    }

    /// `m(η)`: the product of `Γ₁`'s root weights (1 for the empty product).
    pub fn multiplicity(&self) -> Result<i64> {
        let mut m = 1i64;
        for root in &self.gamma1.roots {
            m = m.checked_mul(root.weight).ok_or(Error::Overflow {
                context: "multiplicity",
            })?;
        }
        Ok(m)
    }

    /// Applies a root permutation simultaneously to both sides:
    /// new root `j` is old root `perm[j]`.
    pub fn permute_roots(&self, perm: &[usize]) -> Self {
        let apply = |g: &WeightedGraph| {
            let roots = perm.iter().map(|&i| g.roots[i]).collect();
            WeightedGraph {
                side: g.side,
                rank: g.rank,
                vertices: g.vertices.clone(),
                roots,
                legs: g.legs.clone(),
            }
        };
        AdmissibleTriple {
            gamma1: apply(&self.gamma1),
            gamma2: apply(&self.gamma2),
        }
    }

    /// Canonical form with the root order fixed: vertex order is normalized
    /// away, so two triples have equal labeled forms iff a decoration- and
    /// attachment-preserving vertex relabeling carries one to the other.
    pub fn labeled_form(&self) -> String {
        let mut out = String::new();
        for graph in [&self.gamma1, &self.gamma2] {
            out.push_str(graph.side.name());
            out.push('{');
            for (genus, cls, roots, legs) in graph.vertex_records() {
                out.push_str(&format!(
                    "(g{genus};b{};R{};L{})",
                    cls.iter().map(|c| c.to_string()).join(","),
                    roots.iter().map(|(i, w)| format!("{i}:{w}")).join(","),
                    legs.iter().map(|l| l.to_string()).join(","),
                ));
            }
            out.push('}');
        }
        out
    }

    /// Canonical key modulo simultaneous root reordering: the minimum of
    /// [`Self::labeled_form`] over all `r!` root permutations.
    pub fn canonical_key(&self) -> Result<TripleKey> {
        let r = self.root_count();
        if r > MAX_SYMMETRY_ROOTS {
            return Err(Error::input(format!(
                "canonical key limited to {MAX_SYMMETRY_ROOTS} roots, got {r}"
            )));
        }
        let key = (0..r)
            .permutations(r)
            .map(|perm| self.permute_roots(&perm).labeled_form())
            .min()
            .unwrap_or_else(|| self.labeled_form());
        Ok(TripleKey(key))
    }

    /// `|Eq(η)|`: the number of root permutations that fix the triple up to
    /// vertex relabeling, by brute force over all `r!` of them.
    pub fn symmetry_order(&self) -> Result<u64> {
        let r = self.root_count();
        if r > MAX_SYMMETRY_ROOTS {
            return Err(Error::input(format!(
                "symmetry order limited to {MAX_SYMMETRY_ROOTS} roots, got {r}"
            )));
        }
        let reference = self.labeled_form();
        let count = (0..r)
            .permutations(r)
            .filter(|perm| self.permute_roots(perm).labeled_form() == reference)
            .count()
            .max(1); // r = 0 has the empty permutation only
        Ok(count as u64)
    }

    /// Checks every admissibility clause plus the requested type `(g, k)`.
    /// Returns an empty list exactly for valid triples.
    pub fn validate(&self, geom: &BlowupGeometry, g: i64, k: usize) -> Result<Vec<Violation>> {
        let mut violations = Vec::new();

        if self.gamma1.side != Side::Y1 {
            violations.push(Violation::SideMismatch {
                got: self.gamma1.side,
                expected: Side::Y1,
            });
        }
        if self.gamma2.side != Side::Y2 {
            violations.push(Violation::SideMismatch {
                got: self.gamma2.side,
                expected: Side::Y2,
            });
        }

        for (graph, cone) in [(&self.gamma1, geom.ne_y1()), (&self.gamma2, geom.ne_y2())] {
            let side = graph.side;
            for (i, root) in graph.roots.iter().enumerate() {
                if root.vertex >= graph.vertices.len() {
                    violations.push(Violation::RootVertexOutOfRange { side, root: i });
                }
                if root.weight < 1 {
                    violations.push(Violation::RootWeightNotPositive { side, root: i });
                }
            }
            for (i, leg) in graph.legs.iter().enumerate() {
                if leg.vertex >= graph.vertices.len() {
                    violations.push(Violation::LegVertexOutOfRange { side, leg: i });
                }
            }
            if !graph.relatively_connected() {
                violations.push(Violation::RelativeConnectedness { side });
            }
            for (i, vertex) in graph.vertices.iter().enumerate() {
                if vertex.cls.rank() != cone.rank() {
                    violations.push(Violation::ClassRankMismatch { side, vertex: i });
                    continue;
                }
                if !cone.contains(&vertex.cls)? {
                    violations.push(Violation::ClassNotInCone { side, vertex: i });
                }
                // contracted components must still be stable
                if vertex.cls.is_zero() {
                    let valence = (graph.roots_at(i) + graph.legs_at(i)) as i64;
                    if 2 * i64::from(vertex.genus) - 2 + valence <= 0 {
                        violations.push(Violation::Stability { side, vertex: i });
                    }
                }
            }
        }

        let r1 = self.gamma1.roots.len();
        let r2 = self.gamma2.roots.len();
        if r1 != r2 {
            violations.push(Violation::RootCountMismatch {
                gamma1: r1,
                gamma2: r2,
            });
        } else {
            for i in 0..r1 {
                if self.gamma1.roots[i].weight != self.gamma2.roots[i].weight {
                    violations.push(Violation::RootWeightMismatch { root: i });
                }
            }
        }

        match self.glued_connected() {
            GluedConnectivity::Connected => {}
            GluedConnectivity::Empty => violations.push(Violation::NoVertices),
            GluedConnectivity::Disconnected => violations.push(Violation::GluedGraphDisconnected),
        }

        // leg labels must partition 1..=k across the two sides
        let mut seen = vec![false; k];
        let mut label_problem = None;
        for leg in self.gamma1.legs.iter().chain(&self.gamma2.legs) {
            if leg.label == 0 || leg.label > k {
                label_problem = Some(format!("label {} outside 1..={k}", leg.label));
                break;
            }
            if seen[leg.label - 1] {
                label_problem = Some(format!("label {} used twice", leg.label));
                break;
            }
            seen[leg.label - 1] = true;
        }
        if label_problem.is_none() {
            if let Some(missing) = seen.iter().position(|&s| !s) {
                label_problem = Some(format!("label {} missing", missing + 1));
            }
        }
        if let Some(detail) = label_problem {
            violations.push(Violation::LegLabels { detail });
        }

        let actual = self.genus();
        if actual != g {
            violations.push(Violation::GenusMismatch {
                expected: g,
                actual,
            });
        }

        Ok(violations)
    }

    fn glued_connected(&self) -> GluedConnectivity {
        let n1 = self.gamma1.vertices.len();
        let n2 = self.gamma2.vertices.len();
        let total = n1 + n2;
        if total == 0 {
            return GluedConnectivity::Empty;
        }
        let mut dsu: Vec<usize> = (0..total).collect();
        fn find(dsu: &mut [usize], mut x: usize) -> usize {
            while dsu[x] != x {
                dsu[x] = dsu[dsu[x]];
                x = dsu[x];
            }
            x
        }
        let r = self.gamma1.roots.len().min(self.gamma2.roots.len());
        for i in 0..r {
            let a = self.gamma1.roots[i].vertex;
            let b = self.gamma2.roots[i].vertex;
            if a >= n1 || b >= n2 {
                continue; // out-of-range attachments are reported separately
            }
            let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, n1 + b));
            dsu[ra] = rb;
        }
        let root0 = find(&mut dsu, 0);
        if (1..total).all(|v| find(&mut dsu, v) == root0) {
            GluedConnectivity::Connected
        } else {
            GluedConnectivity::Disconnected
        }
    }
}

enum GluedConnectivity {
    Connected,
    Disconnected,
    Empty,
}
