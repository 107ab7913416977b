//! Exhaustive reference enumeration for differential testing.
//!
//! This is the slow, obviously-correct path the engine is measured against:
//! generate *every* decorated graph pair whose data stays inside explicit
//! bounds (vertex counts, a coordinate box for vertex classes, genus labels,
//! root counts and weights), keep those that the validator accepts and whose
//! totals satisfy the splitting conditions, and dedupe up to vertex
//! relabeling. It shares the validator with the engine but none of the
//! engine's search strategy: classes come from a raw coordinate box, not
//! from ample slices, and pairs are joined on their totals directly.
//!
//! Bounds are the caller's promise that the true answer fits strictly
//! inside; any emitted triple that *attains* a bound voids the promise and
//! fails the run, rather than silently truncating the answer.

use std::collections::BTreeMap;
use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::BlowupGeometry;
use crate::graphs::{AdmissibleTriple, Leg, Root, Side, Vertex, WeightedGraph};
use crate::lattice::{ConeModel, LatticeVector};

/// Search-space bounds for [`oracle_enumerate`]; all must be positive.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OracleBounds {
    /// Maximum vertex count per side.
    pub max_vertices: usize,
    /// Maximum absolute value of any vertex-class coordinate.
    pub max_coord: i64,
    /// Maximum genus label on a vertex.
    pub max_genus: u32,
    /// Maximum weight of a single root.
    pub max_root_weight: i64,
    /// Maximum number of roots.
    pub max_roots: usize,
}

/// One side of a candidate pair, before genus and leg decoration.
struct Skeleton {
    classes: Vec<LatticeVector>,
    root_vertices: Vec<usize>,
    pushed: LatticeVector,
    contact: i64,
}

pub fn oracle_enumerate(
    g: i64,
    k: usize,
    beta: &LatticeVector,
    geom: &BlowupGeometry,
    bounds: &OracleBounds,
) -> Result<Vec<AdmissibleTriple>> {
    if bounds.max_vertices == 0
        || bounds.max_coord <= 0
        || bounds.max_genus == 0
        || bounds.max_root_weight <= 0
        || bounds.max_roots == 0
    {
        return Err(Error::BoundsTooSmall(
            "every oracle bound must be positive".into(),
        ));
    }
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

    let skeletons1 = side_skeletons(geom.ne_y1(), geom, Side::Y1, bounds)?;
    let skeletons2 = side_skeletons(geom.ne_y2(), geom, Side::Y2, bounds)?;

    // join on (r, pushforward, contact): the curve condition fixes the
    // pushforward the other side must contribute, and contact totals match
    let mut buckets: HashMap<(usize, Vec<i64>, i64), Vec<&Skeleton>> = HashMap::new();
    for sk in &skeletons2 {
        buckets
            .entry((
                sk.root_vertices.len(),
                sk.pushed.coords().to_vec(),
                sk.contact,
            ))
            .or_default()
            .push(sk);
    }

    let mut found: BTreeMap<String, AdmissibleTriple> = BTreeMap::new();
    for sk1 in &skeletons1 {
        let r = sk1.root_vertices.len();
        let contact = sk1.contact;
        if contact < 0 {
            continue;
        }
        // weights are positive and bounded, so the contact total brackets r
        if contact < r as i64 || contact > r as i64 * bounds.max_root_weight {
            continue;
        }
        let needed = beta.sub(&sk1.pushed)?;
        let Some(matches) = buckets.get(&(r, needed.coords().to_vec(), contact)) else {
            continue;
        };
        let weight_choices = weight_vectors(r, contact, bounds.max_root_weight);
        for sk2 in matches {
            let n1 = sk1.classes.len();
            let n2 = sk2.classes.len();
            let genus_budget = g + (n1 + n2) as i64 - r as i64 - 1;
            if genus_budget < 0 {
                continue;
            }
            // connectivity of the glued graph only depends on the root
            // attachments, so disconnected pairs die before decoration
            if !glued(n1, n2, &sk1.root_vertices, &sk2.root_vertices) {
                continue;
            }
            let genus_choices = bounded_sum_tuples(n1 + n2, genus_budget, bounds.max_genus as i64);
            let leg_choices = leg_maps(k, n1 + n2);
            for weights in &weight_choices {
                for genus in &genus_choices {
                    for legs in &leg_choices {
                        let t = assemble(geom, sk1, sk2, weights, genus, legs)?;
                        if t.validate(geom, g, k)?.is_empty() {
                            found.entry(t.labeled_form()).or_insert(t);
                        }
                    }
                }
            }
        }
    }

    let triples: Vec<AdmissibleTriple> = found.into_values().collect();
    check_saturation(&triples, bounds)?;
    Ok(triples)
}

fn side_skeletons(
    cone: &ConeModel,
    geom: &BlowupGeometry,
    side: Side,
    bounds: &OracleBounds,
) -> Result<Vec<Skeleton>> {
    let rank = cone.rank();
    let push = match side {
        Side::Y1 => geom.p1_push(),
        Side::Y2 => geom.p2_push(),
    };
    let e_pair = match side {
        Side::Y1 => geom.e_pair_y1(),
        Side::Y2 => geom.e_pair_y2(),
    };

    // the class universe: every cone member in the coordinate box
    let mut members = Vec::new();
    for coords in (0..rank)
        .map(|_| -bounds.max_coord..=bounds.max_coord)
        .multi_cartesian_product()
    {
        let v = LatticeVector::new(coords)?;
        if cone.contains(&v)? {
            members.push(v);
        }
    }

    let mut skeletons = Vec::new();
    for n in 0..=bounds.max_vertices {
        let class_tuples: Vec<Vec<LatticeVector>> = if n == 0 {
            vec![Vec::new()]
        } else {
            (0..n)
                .map(|_| members.iter().cloned())
                .multi_cartesian_product()
                .collect()
        };
        for classes in class_tuples {
            let mut total = LatticeVector::zero(rank);
            for c in &classes {
                total = total.add(c)?;
            }
            let pushed = push.apply(&total)?;
            let contact = e_pair.pair(&total)?;
            for r in 0..=bounds.max_roots {
                if r > 0 && n == 0 {
                    continue;
                }
                let assignments: Vec<Vec<usize>> = if r == 0 {
                    vec![Vec::new()]
                } else {
                    (0..r)
                        .map(|_| 0..n)
                        .multi_cartesian_product()
                        .filter(|assign| {
                            // relative connectedness: every one of >= 2
                            // vertices must carry a root
                            n < 2 || (0..n).all(|v| assign.contains(&v))
                        })
                        .collect()
                };
                for root_vertices in assignments {
                    skeletons.push(Skeleton {
                        classes: classes.clone(),
                        root_vertices,
                        pushed: pushed.clone(),
                        contact,
                    });
                }
            }
        }
    }
    Ok(skeletons)
}

fn assemble(
    geom: &BlowupGeometry,
    sk1: &Skeleton,
    sk2: &Skeleton,
    weights: &[i64],
    genus: &[i64],
    legs: &[usize],
) -> Result<AdmissibleTriple> {
    let n1 = sk1.classes.len();
    let build =
        |side: Side, sk: &Skeleton, rank: usize, genus_slice: &[i64]| -> Result<WeightedGraph> {
            let vertices = sk
                .classes
                .iter()
                .zip(genus_slice)
                .map(|(cls, &g)| {
                    Ok(Vertex {
                        genus: u32::try_from(g)
                            .map_err(|_| Error::input("negative genus label"))?,
                        cls: cls.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let roots = sk
                .root_vertices
                .iter()
                .zip(weights)
                .map(|(&vertex, &weight)| Root { vertex, weight })
                .collect();
            Ok(WeightedGraph::new(side, rank, vertices, roots, Vec::new()))
        };
    let mut gamma1 = build(Side::Y1, sk1, geom.rank_y1(), &genus[..n1])?;
    let mut gamma2 = build(Side::Y2, sk2, geom.rank_y2(), &genus[n1..])?;
    for (label, &slot) in legs.iter().enumerate() {
        let leg_label = label + 1;
        if slot < n1 {
            gamma1.legs.push(Leg {
                vertex: slot,
                label: leg_label,
            });
        } else {
            gamma2.legs.push(Leg {
                vertex: slot - n1,
                label: leg_label,
            });
        }
    }
    Ok(AdmissibleTriple::new(gamma1, gamma2))
}

/// All vectors in {1..=max}^r with the given sum.
fn weight_vectors(r: usize, sum: i64, max: i64) -> Vec<Vec<i64>> {
    if r == 0 {
        return if sum == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    (0..r)
        .map(|_| 1..=max)
        .multi_cartesian_product()
        .filter(|w| w.iter().sum::<i64>() == sum)
        .collect()
}

/// All tuples in {0..=max}^parts with the given sum.
fn bounded_sum_tuples(parts: usize, sum: i64, max: i64) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if sum == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    (0..parts)
        .map(|_| 0..=max.min(sum))
        .multi_cartesian_product()
        .filter(|t| t.iter().sum::<i64>() == sum)
        .collect()
}

fn glued(n1: usize, n2: usize, roots1: &[usize], roots2: &[usize]) -> bool {
    let total = n1 + n2;
    if total == 0 {
        return false;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (&a, &b) in roots1.iter().zip(roots2) {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, n1 + b));
        parent[ra] = rb;
    }
    let first = find(&mut parent, 0);
    (1..total).all(|v| find(&mut parent, v) == first)
}

fn leg_maps(k: usize, slots: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if slots == 0 {
        return Vec::new();
    }
    (0..k).map(|_| 0..slots).multi_cartesian_product().collect()
}

/// Any emitted triple that attains a bound means the bounds may be clipping
/// the true answer.
fn check_saturation(triples: &[AdmissibleTriple], bounds: &OracleBounds) -> Result<()> {
    for t in triples {
        for graph in [&t.gamma1, &t.gamma2] {
            if graph.vertices.len() >= bounds.max_vertices {
                return Err(Error::BoundsTooSmall(format!(
                    "a triple attains max_vertices = {}",
                    bounds.max_vertices
                )));
            }
            for v in &graph.vertices {
                if v.cls.coords().iter().any(|c| c.abs() >= bounds.max_coord) {
                    return Err(Error::BoundsTooSmall(format!(
                        "a vertex class attains max_coord = {}",
                        bounds.max_coord
                    )));
                }
                if v.genus >= bounds.max_genus {
                    return Err(Error::BoundsTooSmall(format!(
                        "a genus label attains max_genus = {}",
                        bounds.max_genus
                    )));
                }
            }
        }
        if t.root_count() >= bounds.max_roots {
            return Err(Error::BoundsTooSmall(format!(
                "a triple attains max_roots = {}",
                bounds.max_roots
            )));
        }
        if t.gamma1
            .roots
            .iter()
            .any(|r| r.weight >= bounds.max_root_weight)
        {
            return Err(Error::BoundsTooSmall(format!(
                "a root weight attains max_root_weight = {}",
                bounds.max_root_weight
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_triples, EnumerationRequest};
    use std::collections::BTreeSet;

    fn v(coords: &[i64]) -> LatticeVector {
        LatticeVector::new(coords.to_vec()).unwrap()
    }

    fn generous() -> OracleBounds {
        OracleBounds {
            max_vertices: 3,
            max_coord: 3,
            max_genus: 4,
            max_root_weight: 3,
            max_roots: 3,
        }
    }

    #[test]
    fn line_class_has_two_triples() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        let triples = oracle_enumerate(0, 0, &v(&[1]), &geom, &generous()).unwrap();
        assert_eq!(triples.len(), 2);
    }

    #[test]
    fn line_class_with_one_leg_has_three() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        let triples = oracle_enumerate(0, 1, &v(&[1]), &geom, &generous()).unwrap();
        assert_eq!(triples.len(), 3);
    }

    #[test]
    fn degenerate_bounds_are_refused() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        let mut bounds = generous();
        bounds.max_vertices = 0;
        assert!(matches!(
            oracle_enumerate(0, 0, &v(&[1]), &geom, &bounds),
            Err(Error::BoundsTooSmall(_))
        ));
    }

    #[test]
    fn saturated_bounds_are_detected() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        // the line class needs a root of weight 1; with max_root_weight = 1
        // that weight attains the bound
        let mut bounds = generous();
        bounds.max_root_weight = 1;
        assert!(matches!(
            oracle_enumerate(0, 0, &v(&[1]), &geom, &bounds),
            Err(Error::BoundsTooSmall(_))
        ));
    }

    #[test]
    fn vacuous_class_is_empty() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        assert!(oracle_enumerate(0, 0, &v(&[-1]), &geom, &generous())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn agrees_with_engine_on_small_grid() {
        // both presets over the whole L-degree <= 3 envelope at c = 2
        for preset in ["p2-point", "p3-line"] {
            let geom = BlowupGeometry::preset(preset).unwrap();
            let amp = geom.ample_from_scalar(2).unwrap();
            for g in 0..=2 {
                for k in 0..=2 {
                    for b in 0..=1 {
                        let beta = v(&[b]);
                        let req = EnumerationRequest::class_mode(g, k, beta.clone(), amp.clone())
                            .unwrap();
                        let engine: BTreeSet<_> = enumerate_triples(&req, &geom)
                            .unwrap()
                            .iter()
                            .map(|t| t.canonical_key().unwrap())
                            .collect();
                        let oracle: BTreeSet<_> = oracle_enumerate(g, k, &beta, &geom, &generous())
                            .unwrap()
                            .iter()
                            .map(|t| t.canonical_key().unwrap())
                            .collect();
                        assert_eq!(
                            engine, oracle,
                            "{preset} disagreement at g={g} k={k} beta={b}"
                        );
                    }
                }
            }
        }
    }
}
