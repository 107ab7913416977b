//! Acceptance suite: every release criterion as one test, printing one
//! pass/fail line. Run with `cargo test -p degform-cli --test acceptance
//! -- --nocapture` to see the lines.
//!
//! Everything here is exact integer equality; the only tolerance anywhere
//! is the wall-clock budget of criterion 1.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::Instant;

use degform_core::enumeration::{
    check_h_independence, enumerate_by_degree, enumerate_splittings, enumerate_triples,
    reduce_to_classes, EnumerationRequest, Target,
};
use degform_core::formula::{build_formula, emit, OutputFormat, RequestEcho};
use degform_core::geometry::BlowupGeometry;
use degform_core::lattice::LatticeVector;
use degform_core::oracle::{oracle_enumerate, OracleBounds};
use degform_core::{AdmissibleTriple, AmpleData, TripleKey};

const GRID_G: [i64; 3] = [0, 1, 2];
const GRID_K: [usize; 3] = [0, 1, 2];
const GRID_BETA: [i64; 3] = [0, 1, 2];

fn vx(coords: &[i64]) -> LatticeVector {
    LatticeVector::new(coords.to_vec()).unwrap()
}

fn preset(name: &str) -> (BlowupGeometry, AmpleData) {
    let geom = BlowupGeometry::preset(name).unwrap();
    let amp = geom.ample_from_scalar(2).unwrap();
    (geom, amp)
}

fn engine_run(
    geom: &BlowupGeometry,
    amp: &AmpleData,
    g: i64,
    k: usize,
    beta: i64,
) -> Vec<AdmissibleTriple> {
    let req = EnumerationRequest::class_mode(g, k, vx(&[beta]), amp.clone()).unwrap();
    enumerate_triples(&req, geom).unwrap()
}

fn key_set(triples: &[AdmissibleTriple]) -> BTreeSet<TripleKey> {
    triples.iter().map(|t| t.canonical_key().unwrap()).collect()
}

fn pass(criterion: &str) {
    println!("criterion {criterion}: PASS");
}

/// Bounds that strictly contain every triple of the acceptance grid.
fn grid_bounds() -> OracleBounds {
    OracleBounds {
        max_vertices: 3,
        max_coord: 3,
        max_genus: 4,
        max_root_weight: 3,
        max_roots: 3,
    }
}

#[test]
fn criterion_1_oracle_equivalence_on_the_grid() {
    let started = Instant::now();
    let (geom, amp) = preset("p2-point");
    for g in GRID_G {
        for k in GRID_K {
            for beta in GRID_BETA {
                let engine = key_set(&engine_run(&geom, &amp, g, k, beta));
                let oracle =
                    key_set(&oracle_enumerate(g, k, &vx(&[beta]), &geom, &grid_bounds()).unwrap());
                assert_eq!(engine, oracle, "divergence at g={g} k={k} beta={beta}l");
            }
        }
    }
    // the two pinned cardinalities
    let classes = reduce_to_classes(&engine_run(&geom, &amp, 0, 0, 1)).unwrap();
    assert_eq!(classes.len(), 2, "|classes(0,0;l)|");
    let classes = reduce_to_classes(&engine_run(&geom, &amp, 0, 1, 1)).unwrap();
    assert_eq!(classes.len(), 3, "|classes(0,1;l)|");

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "grid must finish within 60s, took {elapsed:?}"
    );
    pass(&format!(
        "1 (oracle equivalence, 27 grid points, {} ms)",
        elapsed.as_millis()
    ));
}

#[test]
fn criterion_2_h_independence_on_both_presets() {
    for name in ["p2-point", "p3-line"] {
        let geom = BlowupGeometry::preset(name).unwrap();
        let amples: Vec<AmpleData> = [2, 3, 5, 7]
            .iter()
            .map(|&c| geom.ample_from_scalar(c).unwrap())
            .collect();
        for g in GRID_G {
            for k in GRID_K {
                for beta in GRID_BETA {
                    let report = check_h_independence(g, k, &vx(&[beta]), &geom, &amples).unwrap();
                    assert!(
                        report.is_independent(),
                        "{name} g={g} k={k} beta={beta}l: {:?}",
                        report.differences
                    );
                }
            }
        }
    }
    pass("2 (H-independence for c in {2,3,5,7}, both presets, full grid)");
}

#[test]
fn criterion_3_degree_partition() {
    let (geom, amp) = preset("p2-point");
    for d in 0..=4 {
        let req = EnumerationRequest::degree_mode(0, 0, d, amp.clone()).unwrap();
        let partition = enumerate_by_degree(&req, &geom).unwrap();

        // the degree slice, recomputed directly
        let candidates = geom.ne_x().enumerate_slice(amp.l(), d).unwrap();
        let expected_classes: Vec<LatticeVector> = candidates
            .into_iter()
            .filter(|beta| amp.l().pair(beta).unwrap() == d)
            .collect();
        let keys: Vec<LatticeVector> = partition.keys().cloned().collect();
        assert_eq!(keys, expected_classes, "degree-{d} class set");

        // flattening equals the disjoint union of independent per-class runs
        let mut flattened: Vec<String> = partition
            .values()
            .flatten()
            .map(|t| t.labeled_form())
            .collect();
        flattened.sort();
        let mut union: Vec<String> = Vec::new();
        for beta in &expected_classes {
            let req = EnumerationRequest::class_mode(0, 0, beta.clone(), amp.clone()).unwrap();
            let run = enumerate_triples(&req, &geom).unwrap();
            for t in &run {
                let form = t.labeled_form();
                assert!(
                    !union.contains(&form),
                    "labeled triple repeated across classes"
                );
                union.push(form);
            }
        }
        union.sort();
        assert_eq!(flattened, union, "degree-{d} partition");
    }
    pass("3 (degree partition for d in 0..=4, c=2, p2-point)");
}

#[test]
fn criterion_4_matching_and_degree_identities() {
    let mut checked = 0usize;
    for name in ["p2-point", "p3-line"] {
        let (geom, amp) = preset(name);
        for g in GRID_G {
            for k in GRID_K {
                for beta in GRID_BETA {
                    let beta_vec = vx(&[beta]);
                    for t in engine_run(&geom, &amp, g, k, beta) {
                        let b1 = t.gamma1.total_class().unwrap();
                        let b2 = t.gamma2.total_class().unwrap();
                        let m1 = geom.e_pair_y1().pair(&b1).unwrap();
                        let m2 = geom.e_pair_y2().pair(&b2).unwrap();
                        let mu: i64 = t.gamma1.root_weights().iter().sum();
                        assert_eq!(m1, m2, "E-pairing mismatch");
                        assert_eq!(m1, mu, "contact total != root weight sum");
                        let pushed = geom
                            .p1_push()
                            .apply(&b1)
                            .unwrap()
                            .add(&geom.p2_push().apply(&b2).unwrap())
                            .unwrap();
                        assert_eq!(pushed, beta_vec, "curve condition");
                        assert_eq!(
                            t.h_degree(&amp).unwrap(),
                            amp.l().pair(&beta_vec).unwrap(),
                            "degree identity"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(
        checked > 50,
        "expected a substantive triple sample, got {checked}"
    );
    pass(&format!(
        "4 (matching and degree identities on {checked} triples)"
    ));
}

#[test]
fn criterion_5_genus_identity() {
    let mut checked = 0usize;
    for name in ["p2-point", "p3-line"] {
        let (geom, amp) = preset(name);
        for g in GRID_G {
            for k in GRID_K {
                for beta in GRID_BETA {
                    for t in engine_run(&geom, &amp, g, k, beta) {
                        let r = t.root_count() as i64;
                        let v = t.vertex_count() as i64;
                        let genus_sum: i64 = t
                            .gamma1
                            .vertices
                            .iter()
                            .chain(&t.gamma2.vertices)
                            .map(|vert| i64::from(vert.genus))
                            .sum();
                        assert_eq!(r + 1 - v + genus_sum, g, "genus function");
                        assert_eq!(t.genus(), g);
                        checked += 1;
                    }
                }
            }
        }
    }
    pass(&format!("5 (genus identity on {checked} triples)"));
}

/// Lexicographic permutation generator, independent of the library's
/// symmetry search.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| current[i] < current[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

#[test]
fn criterion_6_coefficient_identities() {
    let mut checked = 0usize;
    for name in ["p2-point", "p3-line"] {
        let (geom, amp) = preset(name);
        for g in GRID_G {
            for k in GRID_K {
                for beta in GRID_BETA {
                    let triples = engine_run(&geom, &amp, g, k, beta);
                    for class in reduce_to_classes(&triples).unwrap() {
                        let t = &class.representative;
                        let r = t.root_count();
                        assert!(r <= 4, "grid classes stay within r <= 4");
                        // m(eta): the product of Gamma_1 root weights
                        let product: i64 = t.gamma1.root_weights().iter().product();
                        assert_eq!(class.multiplicity, product);
                        // |Eq(eta)|: brute-force stabilizer order
                        let reference = t.labeled_form();
                        let stabilizer = permutations(r)
                            .into_iter()
                            .filter(|perm| t.permute_roots(perm).labeled_form() == reference)
                            .count() as u64;
                        assert_eq!(class.symmetry_order, stabilizer);
                        checked += 1;
                    }
                }
            }
        }
    }
    pass(&format!("6 (coefficient identities on {checked} classes)"));
}

#[test]
fn criterion_7_geometry_invariants() {
    for name in ["p2-point", "p3-line"] {
        let geom = BlowupGeometry::preset(name).unwrap();
        assert_eq!(
            geom.e_pair_y1().pair(geom.gamma_y1()).unwrap(),
            -1,
            "{name}: E.gamma on Y1"
        );
        assert_eq!(
            geom.e_pair_y2().pair(geom.gamma_y2()).unwrap(),
            1,
            "{name}: E.gamma on Y2"
        );
    }
    let (geom, amp) = preset("p2-point");
    assert_eq!(
        amp.h2().pair(geom.gamma_y2()).unwrap(),
        1,
        "H2.gamma at c=2"
    );
    pass("7 (geometry invariants: E.gamma = -1/+1 and H2.gamma = +1)");
}

#[test]
fn criterion_8_display_conformance() {
    // p3-line: every two-sided triple satisfies the display equations with
    // the ray data as computed (rays through the apex reported at the apex)
    let (geom, amp) = preset("p3-line");
    let mut two_sided = 0usize;
    for g in GRID_G {
        for k in GRID_K {
            for beta in GRID_BETA {
                let req = EnumerationRequest::class_mode(g, k, vx(&[beta]), amp.clone()).unwrap();
                let splittings = enumerate_splittings(&req, &geom).unwrap();
                for t in enumerate_triples(&req, &geom).unwrap() {
                    if t.gamma1.is_empty() || t.gamma2.is_empty() {
                        continue;
                    }
                    let b1 = t.gamma1.total_class().unwrap();
                    let b2 = t.gamma2.total_class().unwrap();
                    let s = splittings
                        .iter()
                        .find(|s| s.b1 == b1 && s.b2 == b2)
                        .expect("every emitted triple comes from a splitting");
                    let e_b1_0 = geom.e_pair_y1().pair(&s.b1_0).unwrap();
                    let mu: i64 = t.gamma1.root_weights().iter().sum();
                    assert_eq!(s.l1 + s.l2, e_b1_0, "l1 + l2 = E.b1_0 on p3-line");
                    assert_eq!(mu, s.l2, "sum of weights = l2 on p3-line");
                    two_sided += 1;
                }
            }
        }
    }
    assert!(
        two_sided > 10,
        "expected two-sided terms on p3-line, got {two_sided}"
    );

    // p2-point: every Y2 ray passes through the apex, where the literal
    // first-past-the-apex reading breaks the weight equation; the engine
    // must detect and report that divergence, not hide it
    let (geom, amp) = preset("p2-point");
    let req = EnumerationRequest::class_mode(0, 0, vx(&[1]), amp.clone()).unwrap();
    let splittings = enumerate_splittings(&req, &geom).unwrap();
    let mut divergent = 0usize;
    for s in &splittings {
        let report = s.display_conventions(&geom).unwrap();
        assert!(report.apex, "apex-convention equations must hold");
        if s.mu > 0 {
            assert!(
                !report.non_apex,
                "the p2-point divergence must be reported, not hidden"
            );
            divergent += 1;
        }
    }
    assert!(divergent > 0, "expected at least one divergent splitting");
    pass(&format!(
        "8 (display conformance: {two_sided} two-sided p3-line triples exact; p2-point divergence reported)"
    ));
}

#[test]
fn criterion_9_cli_determinism() {
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "enumerate",
            "--preset",
            "p2-point",
            "--g",
            "0",
            "--k",
            "0",
            "--beta",
            "1",
            "--ample",
            "2",
            "--format",
            "summary",
        ],
        vec![
            "enumerate",
            "--preset",
            "p2-point",
            "--g",
            "1",
            "--k",
            "2",
            "--beta",
            "2",
            "--ample",
            "2",
            "--format",
            "machine",
        ],
        vec![
            "enumerate",
            "--preset",
            "p3-line",
            "--g",
            "0",
            "--k",
            "1",
            "--beta",
            "1",
            "--ample",
            "2",
            "--format",
            "latex",
        ],
        vec![
            "by-degree",
            "--preset",
            "p2-point",
            "--g",
            "0",
            "--k",
            "0",
            "--d",
            "4",
            "--ample",
            "2",
            "--format",
            "machine",
        ],
        vec![
            "check-h", "--preset", "p3-line", "--g", "0", "--k", "1", "--beta", "1", "--ample",
            "2", "--ample", "3", "--ample", "5", "--ample", "7",
        ],
        vec!["presets"],
    ];
    for args in &commands {
        let first = Command::new(env!("CARGO_BIN_EXE_degform"))
            .args(args)
            .output()
            .expect("binary runs");
        let second = Command::new(env!("CARGO_BIN_EXE_degform"))
            .args(args)
            .output()
            .expect("binary runs");
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(second.status.code(), Some(0));
        assert_eq!(
            first.stdout, second.stdout,
            "stdout must be byte-identical: {args:?}"
        );
    }
    pass(&format!(
        "9 (byte-identical reruns of {} CLI commands)",
        commands.len()
    ));
}

/// Belt-and-braces beyond the numbered list: the machine format emitted by
/// the library round-trips through its own parser on a grid sample.
#[test]
fn machine_round_trip_on_grid_sample() {
    let (geom, amp) = preset("p2-point");
    for (g, k, beta) in [(0, 0, 1), (1, 1, 2), (2, 2, 2)] {
        let triples = engine_run(&geom, &amp, g, k, beta);
        let classes = reduce_to_classes(&triples).unwrap();
        let terms = build_formula(&classes).unwrap();
        let echo = RequestEcho {
            g,
            k,
            target: Target::Class(vx(&[beta])),
        };
        let text = emit(&geom, &echo, &terms, OutputFormat::Machine).unwrap();
        let doc = degform_core::formula::parse_machine(&text).unwrap();
        let parsed = degform_core::formula::terms_from_document(&doc).unwrap();
        assert_eq!(parsed, terms);
    }
    println!("machine round trip: PASS");
}

/// The partition keys of enumerate_by_degree double as a regression pin for
/// the degree slice itself.
#[test]
fn degree_slices_are_pinned() {
    let (geom, amp) = preset("p2-point");
    let mut observed: BTreeMap<i64, usize> = BTreeMap::new();
    for d in 0..=4 {
        let req = EnumerationRequest::degree_mode(0, 0, d, amp.clone()).unwrap();
        observed.insert(d, enumerate_by_degree(&req, &geom).unwrap().len());
    }
    // L = 2l*: degrees 0,2,4 are hit by 0, l, 2l; odd degrees by nothing
    let expected: BTreeMap<i64, usize> = [(0, 1), (1, 0), (2, 1), (3, 0), (4, 1)]
        .into_iter()
        .collect();
    assert_eq!(observed, expected);
    println!("degree slice pins: PASS");
}
