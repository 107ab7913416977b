//! The enumeration engine: the finite index set of the degeneration formula
//! for a fixed curve class.
//!
//! For a request `(g, k; β)` the engine first enumerates *splittings*: pairs
//! of effective total classes `(b₁, b₂)` on the two sides with
//! `p₁*b₁ + p₂*b₂ = β` and matching contact totals `E·b₁ = E·b₂ = μ ≥ 0`.
//! Finiteness comes from ample slices: every admissible total satisfies
//! `Hᵢ·bᵢ ≤ L·β` because both degree summands are non-negative. The matching
//! condition is the ground truth for contact data: together with the curve
//! condition it forces the degree identity `H₁·b₁ + H₂·b₂ = L·β`, so the
//! resulting set cannot depend on the choice of L at all — which is exactly
//! what [`check_h_independence`] verifies at run time.
//!
//! Each splitting is then expanded into admissible triples: root counts and
//! ordered weight vectors summing to μ, vertex sets with effective class
//! decompositions, genus labels against the budget
//! `Σ g(v) = g + |V| − r − 1`, and leg distributions. The expansion is
//! sliced into independent work units (one splitting with one weight vector
//! and one root attachment) and runs data-parallel (rayon) when the
//! `parallel` feature is enabled; results are merged and ordered
//! deterministically either way.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::{AmpleData, BlowupGeometry};
use crate::graphs::{AdmissibleTriple, Leg, Root, Side, TripleKey, Vertex, WeightedGraph};
use crate::lattice::{LatticeVector, LinearFunctional};

/// What to enumerate: a fixed curve class on `X`, or everything of a fixed
/// `L`-degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Target {
    Class(LatticeVector),
    Degree(i64),
}

/// A single enumeration request. The ample data is required in both modes:
/// it provides the finiteness bounds even when the answer does not depend
/// on it.
#[derive(Clone, Debug)]
pub struct EnumerationRequest {
    pub g: i64,
    pub k: usize,
    pub target: Target,
    pub amp: AmpleData,
}

impl EnumerationRequest {
    pub fn class_mode(g: i64, k: usize, beta: LatticeVector, amp: AmpleData) -> Result<Self> {
        if g < 0 {
            return Err(Error::input("genus must be non-negative"));
        }
        Ok(EnumerationRequest {
            g,
            k,
            target: Target::Class(beta),
            amp,
        })
    }

    pub fn degree_mode(g: i64, k: usize, d: i64, amp: AmpleData) -> Result<Self> {
        if g < 0 {
            return Err(Error::input("genus must be non-negative"));
        }
        Ok(EnumerationRequest {
            g,
            k,
            target: Target::Degree(d),
            amp,
        })
    }

    fn beta(&self) -> Result<&LatticeVector> {
        match &self.target {
            Target::Class(beta) => Ok(beta),
            Target::Degree(_) => Err(Error::input(
                "operation requires a class-mode request, got degree mode",
            )),
        }
    }
}

/// Sequential or rayon-parallel expansion of splittings. Without the
/// `parallel` feature, `Parallel` silently degrades to sequential; output
/// is identical in every mode.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// A compatible pair of side totals, with the ray data of both sides along
/// `γ` kept for diagnostics: `bᵢ = bᵢ⁰ + lᵢ·γ`, where `bᵢ⁰` is the furthest
/// point down the `γ`-ray still inside the cone (the apex itself when the
/// ray passes through it).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Splitting {
    pub b1: LatticeVector,
    pub b2: LatticeVector,
    pub mu: i64,
    pub b1_0: LatticeVector,
    pub l1: i64,
    pub b2_0: LatticeVector,
    pub l2: i64,
}

/// Which ray conventions make the two-sided display equations
/// `l₁ + l₂ = E·b₁⁰` and `μ = l₂` hold for a splitting: the apex convention
/// reports rays through the apex as `b⁰ = 0`, the non-apex convention as
/// `b⁰ = γ` with one step fewer. They agree unless a side is a pure
/// multiple of `γ`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ConventionReport {
    pub apex: bool,
    pub non_apex: bool,
}

impl Splitting {
    pub fn is_two_sided(&self) -> bool {
        !self.b1.is_zero() && !self.b2.is_zero()
    }

    /// Evaluates the display equations under both ray conventions.
    pub fn display_conventions(&self, geom: &BlowupGeometry) -> Result<ConventionReport> {
        let eval = |b1_0: &LatticeVector, l1: i64, l2: i64| -> Result<bool> {
            let e1 = geom.e_pair_y1().pair(b1_0)?;
            Ok(l1 + l2 == e1 && self.mu == l2)
        };
        let apex = eval(&self.b1_0, self.l1, self.l2)?;
        let adjust = |b0: &LatticeVector, l: i64, gamma: &LatticeVector| -> (LatticeVector, i64) {
            if b0.is_zero() && l >= 1 {
                (gamma.clone(), l - 1)
            } else {
                (b0.clone(), l)
            }
        };
        let (n1, nl1) = adjust(&self.b1_0, self.l1, geom.gamma_y1());
        let (_n2, nl2) = adjust(&self.b2_0, self.l2, geom.gamma_y2());
        let non_apex = eval(&n1, nl1, nl2)?;
        Ok(ConventionReport { apex, non_apex })
    }
}

/// All splittings of `β`, in lexicographic `(b₁, b₂)` order. A class
/// outside `NE(X)` has none (the formula holds vacuously there).
pub fn enumerate_splittings(
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
) -> Result<Vec<Splitting>> {
    let beta = req.beta()?;
    if beta.rank() != geom.rank_x() {
        return Err(Error::RankMismatch {
            context: "curve class",
            expected: geom.rank_x(),
            got: beta.rank(),
        });
    }
    if !geom.ne_x().contains(beta)? {
        return Ok(Vec::new());
    }
    let degree = req.amp.l().pair(beta)?;
    // both degree summands are non-negative, so each side is confined to
    // the slice H_i · b_i <= L·β
    let side1 = geom.ne_y1().enumerate_slice(req.amp.h1(), degree)?;
    let side2 = geom.ne_y2().enumerate_slice(req.amp.h2(), degree)?;
    let mut out = Vec::new();
    for b1 in &side1 {
        let push1 = geom.p1_push().apply(b1)?;
        let m1 = geom.e_pair_y1().pair(b1)?;
        if m1 < 0 {
            continue; // contact totals are sums of positive weights
        }
        for b2 in &side2 {
            let m2 = geom.e_pair_y2().pair(b2)?;
            if m1 != m2 {
                continue;
            }
            let total = push1.add(&geom.p2_push().apply(b2)?)?;
            if &total != beta {
                continue;
            }
            let (b1_0, l1) = geom.ne_y1().ray_decompose(b1, geom.gamma_y1())?;
            let (b2_0, l2) = geom.ne_y2().ray_decompose(b2, geom.gamma_y2())?;
            out.push(Splitting {
                b1: b1.clone(),
                b2: b2.clone(),
                mu: m1,
                b1_0,
                l1,
                b2_0,
                l2,
            });
        }
    }
    out.sort_by(|a, b| (&a.b1, &a.b2).cmp(&(&b.b1, &b.b2)));
    Ok(out)
}

/// All admissible triples for a class-mode request, duplicate-free as
/// labeled triples and sorted by their labeled canonical form.
pub fn enumerate_triples(
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
) -> Result<Vec<AdmissibleTriple>> {
    enumerate_triples_with_mode(req, geom, ExecMode::default())
}

pub fn enumerate_triples_with_mode(
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
    mode: ExecMode,
) -> Result<Vec<AdmissibleTriple>> {
    let splittings = enumerate_splittings(req, geom)?;
    // per-vertex classes live in the same ample slice as the totals;
    // computed once per splitting and shared across its work units
    let contexts = splittings
        .iter()
        .map(|s| {
            Ok(SplittingContext {
                pool1: geom
                    .ne_y1()
                    .enumerate_slice(req.amp.h1(), req.amp.h1().pair(&s.b1)?)?,
                pool2: geom
                    .ne_y2()
                    .enumerate_slice(req.amp.h2(), req.amp.h2().pair(&s.b2)?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let units = expansion_units(&splittings, req)?;
    // each unit dedups its own output by labeled canonical form; merging
    // the keyed maps is deterministic regardless of expansion order
    let per_unit = map_units(&units, mode, |u| {
        expand_unit(u, &splittings, &contexts, req, geom)
    })?;
    let mut merged: BTreeMap<String, AdmissibleTriple> = BTreeMap::new();
    for batch in per_unit {
        for (form, t) in batch {
            merged.entry(form).or_insert(t);
        }
    }
    Ok(merged.into_values().collect())
}

struct SplittingContext {
    pool1: Vec<LatticeVector>,
    pool2: Vec<LatticeVector>,
}

/// An independent slice of the expansion work: one splitting together with
/// a fixed root-weight vector and root attachments. Units touch only
/// immutable geometry data and fill isolated buffers, so they can run on
/// any worker.
struct WorkUnit {
    splitting: usize,
    kind: UnitKind,
}

enum UnitKind {
    OneSided,
    Decorated {
        weights: Vec<i64>,
        assign1: Vec<usize>,
        assign2: Vec<usize>,
        n1: usize,
        n2: usize,
    },
}

fn expansion_units(splittings: &[Splitting], req: &EnumerationRequest) -> Result<Vec<WorkUnit>> {
    let mut units = Vec::new();
    for (index, s) in splittings.iter().enumerate() {
        if s.mu == 0 {
            units.push(WorkUnit {
                splitting: index,
                kind: UnitKind::OneSided,
            });
            continue;
        }
        let mu = usize::try_from(s.mu)
            .map_err(|_| Error::input(format!("contact total {} too large to expand", s.mu)))?;
        // roots: 1 <= r <= mu since weights are positive integers summing
        // to mu
        for r in 1..=mu {
            for weights in compositions(mu, r) {
                // vertices: both sides carry all r roots, so 1 <= n_i <= r
                // (relative connectedness kills anything larger)
                for n1 in 1..=r {
                    for n2 in 1..=r {
                        // genus budget: sum g(v) = g + |V| - r - 1, inverted
                        // from the genus function; negative budgets cannot
                        // close
                        if req.g + (n1 + n2) as i64 - r as i64 - 1 < 0 {
                            continue;
                        }
                        for assign1 in root_assignments(r, n1) {
                            for assign2 in root_assignments(r, n2) {
                                if !glued_connected(n1, n2, &assign1, &assign2) {
                                    continue;
                                }
                                units.push(WorkUnit {
                                    splitting: index,
                                    kind: UnitKind::Decorated {
                                        weights: weights.clone(),
                                        assign1: assign1.clone(),
                                        assign2: assign2.clone(),
                                        n1,
                                        n2,
                                    },
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(units)
}

type UnitOutput = BTreeMap<String, AdmissibleTriple>;

fn map_units<F>(units: &[WorkUnit], mode: ExecMode, f: F) -> Result<Vec<UnitOutput>>
where
    F: Fn(&WorkUnit) -> Result<UnitOutput> + Sync + Send,
{
    match mode {
        ExecMode::Sequential => units.iter().map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                units.par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                units.iter().map(f).collect()
            }
        }
    }
}

fn expand_unit(
    unit: &WorkUnit,
    splittings: &[Splitting],
    contexts: &[SplittingContext],
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
) -> Result<UnitOutput> {
    let s = &splittings[unit.splitting];
    match &unit.kind {
        UnitKind::OneSided => one_sided_triples(s, req, geom),
        UnitKind::Decorated {
            weights,
            assign1,
            assign2,
            n1,
            n2,
        } => {
            let mut out = UnitOutput::new();
            let r = weights.len();
            let budget = req.g + (n1 + n2) as i64 - r as i64 - 1;
            let ctx = &contexts[unit.splitting];
            expand_decorations(
                s, req, geom, &ctx.pool1, &ctx.pool2, weights, assign1, assign2, *n1, *n2, budget,
                &mut out,
            )?;
            Ok(out)
        }
    }
}

/// The rootless one-sided terms of a zero-contact splitting. With both
/// totals nonzero no connected gluing exists and the splitting contributes
/// nothing.
fn one_sided_triples(
    s: &Splitting,
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
) -> Result<UnitOutput> {
    let mut out = UnitOutput::new();
    let genus = genus_label(req.g)?;
    let all_legs = || -> Vec<Leg> { (1..=req.k).map(|label| Leg { vertex: 0, label }).collect() };
    let mut candidates: Vec<AdmissibleTriple> = Vec::new();
    if s.b2.is_zero() && !s.b1.is_zero() {
        candidates.push(AdmissibleTriple::new(
            WeightedGraph::new(
                Side::Y1,
                geom.rank_y1(),
                vec![Vertex {
                    genus,
                    cls: s.b1.clone(),
                }],
                vec![],
                all_legs(),
            ),
            WeightedGraph::empty(Side::Y2, geom.rank_y2()),
        ));
    } else if s.b1.is_zero() && !s.b2.is_zero() {
        candidates.push(AdmissibleTriple::new(
            WeightedGraph::empty(Side::Y1, geom.rank_y1()),
            WeightedGraph::new(
                Side::Y2,
                geom.rank_y2(),
                vec![Vertex {
                    genus,
                    cls: s.b2.clone(),
                }],
                vec![],
                all_legs(),
            ),
        ));
    } else if s.b1.is_zero() && s.b2.is_zero() {
        // β = 0: a single contracted vertex, on either side
        candidates.push(AdmissibleTriple::new(
            WeightedGraph::new(
                Side::Y1,
                geom.rank_y1(),
                vec![Vertex {
                    genus,
                    cls: LatticeVector::zero(geom.rank_y1()),
                }],
                vec![],
                all_legs(),
            ),
            WeightedGraph::empty(Side::Y2, geom.rank_y2()),
        ));
        candidates.push(AdmissibleTriple::new(
            WeightedGraph::empty(Side::Y1, geom.rank_y1()),
            WeightedGraph::new(
                Side::Y2,
                geom.rank_y2(),
                vec![Vertex {
                    genus,
                    cls: LatticeVector::zero(geom.rank_y2()),
                }],
                vec![],
                all_legs(),
            ),
        ));
    }
    for t in candidates {
        if t.validate(geom, req.g, req.k)?.is_empty() {
            out.insert(t.labeled_form(), t);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn expand_decorations(
    s: &Splitting,
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
    pool1: &[LatticeVector],
    pool2: &[LatticeVector],
    weights: &[i64],
    assign1: &[usize],
    assign2: &[usize],
    n1: usize,
    n2: usize,
    budget: i64,
    out: &mut UnitOutput,
) -> Result<()> {
    let classes1 = class_decompositions(pool1, req.amp.h1(), &s.b1, n1)?;
    if classes1.is_empty() {
        return Ok(());
    }
    let classes2 = class_decompositions(pool2, req.amp.h2(), &s.b2, n2)?;
    if classes2.is_empty() {
        return Ok(());
    }
    let genus_splits = weak_compositions(budget, n1 + n2);
    let leg_targets = leg_assignments(req.k, n1 + n2);

    for c1 in &classes1 {
        for c2 in &classes2 {
            for genus in &genus_splits {
                for legs in &leg_targets {
                    let vertices1: Vec<Vertex> = (0..n1)
                        .map(|i| {
                            Ok(Vertex {
                                genus: genus_label(genus[i])?,
                                cls: c1[i].clone(),
                            })
                        })
                        .collect::<Result<_>>()?;
                    let vertices2: Vec<Vertex> = (0..n2)
                        .map(|i| {
                            Ok(Vertex {
                                genus: genus_label(genus[n1 + i])?,
                                cls: c2[i].clone(),
                            })
                        })
                        .collect::<Result<_>>()?;
                    let roots1 = assign1
                        .iter()
                        .zip(weights)
                        .map(|(&vtx, &w)| Root {
                            vertex: vtx,
                            weight: w,
                        })
                        .collect();
                    let roots2 = assign2
                        .iter()
                        .zip(weights)
                        .map(|(&vtx, &w)| Root {
                            vertex: vtx,
                            weight: w,
                        })
                        .collect();
                    let mut legs1 = Vec::new();
                    let mut legs2 = Vec::new();
                    for (label, &slot) in legs.iter().enumerate() {
                        let leg_label = label + 1;
                        if slot < n1 {
                            legs1.push(Leg {
                                vertex: slot,
                                label: leg_label,
                            });
                        } else {
                            legs2.push(Leg {
                                vertex: slot - n1,
                                label: leg_label,
                            });
                        }
                    }
                    let t = AdmissibleTriple::new(
                        WeightedGraph::new(Side::Y1, geom.rank_y1(), vertices1, roots1, legs1),
                        WeightedGraph::new(Side::Y2, geom.rank_y2(), vertices2, roots2, legs2),
                    );
                    if t.validate(geom, req.g, req.k)?.is_empty() {
                        out.entry(t.labeled_form()).or_insert(t);
                    }
                }
            }
        }
    }
    Ok(())
}

fn genus_label(g: i64) -> Result<u32> {
    u32::try_from(g).map_err(|_| Error::input(format!("genus label {g} out of range")))
}

/// Ordered tuples of positive integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts);
    fn rec(remaining: usize, parts_left: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts_left == 0 {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        // each remaining part needs at least 1
        let max = remaining.saturating_sub(parts_left - 1);
        for value in 1..=max {
            current.push(value as i64);
            rec(remaining - value, parts_left - 1, current, out);
            current.pop();
        }
    }
    rec(total, parts, &mut current, &mut out);
    out
}

/// Ordered tuples of non-negative integers summing to `total`.
fn weak_compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts);
    fn rec(remaining: i64, parts_left: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts_left == 0 {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        if parts_left == 1 {
            current.push(remaining);
            out.push(current.clone());
            current.pop();
            return;
        }
        for value in 0..=remaining {
            current.push(value);
            rec(remaining - value, parts_left - 1, current, out);
            current.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut current, &mut out);
    out
}

/// Root-to-vertex maps covering every vertex (relative connectedness needs
/// a root on each vertex once there is more than one).
fn root_assignments(r: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 || r < n {
        return out;
    }
    for assign in (0..r).map(|_| 0..n).multi_cartesian_product() {
        if n >= 2 {
            let mut covered = vec![false; n];
            for &v in &assign {
                covered[v] = true;
            }
            if covered.iter().any(|&c| !c) {
                continue;
            }
        }
        out.push(assign);
    }
    out
}

fn glued_connected(n1: usize, n2: usize, assign1: &[usize], assign2: &[usize]) -> bool {
    let total = n1 + n2;
    if total == 0 {
        return false;
    }
    let mut dsu: Vec<usize> = (0..total).collect();
    fn find(dsu: &mut [usize], mut x: usize) -> usize {
        while dsu[x] != x {
            dsu[x] = dsu[dsu[x]];
            x = dsu[x];
        }
        x
    }
    for (&a, &b) in assign1.iter().zip(assign2) {
        let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, n1 + b));
        dsu[ra] = rb;
    }
    let first = find(&mut dsu, 0);
    (1..total).all(|v| find(&mut dsu, v) == first)
}

/// Ordered tuples of `parts` cone members (drawn from `pool`) summing to
/// `total`, pruned by the h-budget of the remainder.
fn class_decompositions(
    pool: &[LatticeVector],
    h: &LinearFunctional,
    total: &LatticeVector,
    parts: usize,
) -> Result<Vec<Vec<LatticeVector>>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts);
    fn rec(
        pool: &[LatticeVector],
        h: &LinearFunctional,
        remaining: &LatticeVector,
        parts_left: usize,
        current: &mut Vec<LatticeVector>,
        out: &mut Vec<Vec<LatticeVector>>,
    ) -> Result<()> {
        if parts_left == 0 {
            if remaining.is_zero() {
                out.push(current.clone());
            }
            return Ok(());
        }
        let budget = h.pair(remaining)?;
        for c in pool {
            if h.pair(c)? > budget {
                continue;
            }
            current.push(c.clone());
            rec(pool, h, &remaining.sub(c)?, parts_left - 1, current, out)?;
            current.pop();
        }
        Ok(())
    }
    rec(pool, h, total, parts, &mut current, &mut out)?;
    Ok(out)
}

/// All maps from leg labels `1..=k` to vertex slots `0..slots`.
fn leg_assignments(k: usize, slots: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if slots == 0 {
        return Vec::new();
    }
    (0..k).map(|_| 0..slots).multi_cartesian_product().collect()
}

/// One equivalence class of triples under root reordering, with the data
/// entering its formula coefficient.
#[derive(Clone, Debug)]
pub struct TripleClass {
    pub key: TripleKey,
    pub representative: AdmissibleTriple,
    pub multiplicity: i64,
    pub symmetry_order: u64,
    pub labeled_count: usize,
}

/// Groups labeled triples by canonical key, keeping the lexicographically
/// least labeled form as representative. Output is ordered by key.
pub fn reduce_to_classes(triples: &[AdmissibleTriple]) -> Result<Vec<TripleClass>> {
    let mut groups: BTreeMap<TripleKey, Vec<&AdmissibleTriple>> = BTreeMap::new();
    for t in triples {
        groups.entry(t.canonical_key()?).or_default().push(t);
    }
    let mut out = Vec::with_capacity(groups.len());
    for (key, group) in groups {
        let representative = group
            .iter()
            .min_by_key(|t| t.labeled_form())
            .expect("group is nonempty")
            .to_owned()
            .clone();
        let multiplicity = representative.multiplicity()?;
        let symmetry_order = representative.symmetry_order()?;
        out.push(TripleClass {
            key,
            representative,
            multiplicity,
            symmetry_order,
            labeled_count: group.len(),
        });
    }
    Ok(out)
}

/// Degree mode: enumerate the classes of `L`-degree `d` and run the class
/// enumeration for each; the flattened union is the H-degree index set.
pub fn enumerate_by_degree(
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
) -> Result<BTreeMap<LatticeVector, Vec<AdmissibleTriple>>> {
    enumerate_by_degree_with_mode(req, geom, ExecMode::default())
}

pub fn enumerate_by_degree_with_mode(
    req: &EnumerationRequest,
    geom: &BlowupGeometry,
    mode: ExecMode,
) -> Result<BTreeMap<LatticeVector, Vec<AdmissibleTriple>>> {
    let d = match req.target {
        Target::Degree(d) => d,
        Target::Class(_) => {
            return Err(Error::input(
                "operation requires a degree-mode request, got class mode",
            ))
        }
    };
    let mut out = BTreeMap::new();
    if d < 0 {
        return Ok(out);
    }
    let candidates = geom.ne_x().enumerate_slice(req.amp.l(), d)?;
    for beta in candidates {
        if req.amp.l().pair(&beta)? != d {
            continue;
        }
        let class_req =
            EnumerationRequest::class_mode(req.g, req.k, beta.clone(), req.amp.clone())?;
        let triples = enumerate_triples_with_mode(&class_req, geom, mode)?;
        out.insert(beta, triples);
    }
    Ok(out)
}

/// The canonical-key disagreement between two ample choices, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HDifference {
    pub ample_index: usize,
    pub missing: Vec<TripleKey>,
    pub extra: Vec<TripleKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HIndependenceReport {
    pub key_count: usize,
    pub differences: Vec<HDifference>,
}

impl HIndependenceReport {
    pub fn is_independent(&self) -> bool {
        self.differences.is_empty()
    }
}

/// Reruns the enumeration under each ample choice and compares canonical
/// key sets. The sets must agree for every valid input; a reported
/// difference means an engine bug, not a property of the geometry.
pub fn check_h_independence(
    g: i64,
    k: usize,
    beta: &LatticeVector,
    geom: &BlowupGeometry,
    amples: &[AmpleData],
) -> Result<HIndependenceReport> {
    if amples.len() < 2 {
        return Err(Error::input(
            "H-independence check needs at least two ample choices",
        ));
    }
    let mut key_sets: Vec<BTreeSet<TripleKey>> = Vec::with_capacity(amples.len());
    for amp in amples {
        let req = EnumerationRequest::class_mode(g, k, beta.clone(), amp.clone())?;
        let triples = enumerate_triples(&req, geom)?;
        let keys = triples
            .iter()
            .map(|t| t.canonical_key())
            .collect::<Result<BTreeSet<_>>>()?;
        key_sets.push(keys);
    }
    let reference = &key_sets[0];
    let mut differences = Vec::new();
    for (i, keys) in key_sets.iter().enumerate().skip(1) {
        let missing: Vec<TripleKey> = reference.difference(keys).cloned().collect();
        let extra: Vec<TripleKey> = keys.difference(reference).cloned().collect();
        if !missing.is_empty() || !extra.is_empty() {
            differences.push(HDifference {
                ample_index: i,
                missing,
                extra,
            });
        }
    }
    Ok(HIndependenceReport {
        key_count: reference.len(),
        differences,
    })
}

/// Convenience wrapper used by tests and the summary output: the membership
/// and contact data every emitted triple must satisfy.
pub fn verify_matching_identities(
    t: &AdmissibleTriple,
    geom: &BlowupGeometry,
    amp: &AmpleData,
    beta: &LatticeVector,
) -> Result<bool> {
    let b1 = t.gamma1.total_class()?;
    let b2 = t.gamma2.total_class()?;
    let m1 = geom.e_pair_y1().pair(&b1)?;
    let m2 = geom.e_pair_y2().pair(&b2)?;
    let weight_total: i64 = t.gamma1.root_weights().iter().sum();
    let curve = geom
        .p1_push()
        .apply(&b1)?
        .add(&geom.p2_push().apply(&b2)?)?;
    let degree = t.h_degree(amp)? == amp.l().pair(beta)?;
    Ok(m1 == m2 && m1 == weight_total && &curve == beta && degree)
}
