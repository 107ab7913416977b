//! Symbolic assembly of the degeneration formula.
//!
//! Each equivalence class of admissible triples becomes one term with the
//! exact rational coefficient `m(η)/|Eq(η)|`. The relative-invariant factors
//! `Ψ`, the cohomology inputs, the splitting index set `K_η` and the
//! degree-zero bracket are carried as uninterpreted named slots so that
//! downstream tools can substitute computed invariants; this crate never
//! evaluates them.
//!
//! Three output formats: `machine` (schema-versioned JSON that parses back,
//! see [`MachineDocument`]), `latex` (the summation with per-term data
//! tables) and `summary` (one line per term). Emission is byte-deterministic
//! for fixed input.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::enumeration::{Target, TripleClass};
use crate::error::{Error, Result};
use crate::geometry::{format_class, BlowupGeometry};
use crate::graphs::{AdmissibleTriple, Leg, Root, Side, Vertex, WeightedGraph};
use crate::lattice::LatticeVector;

pub const MACHINE_SCHEMA_VERSION: u32 = 1;

/// An uninterpreted relative-invariant factor.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiFactor {
    pub symbol: String,
    pub inputs: Vec<String>,
}

/// One term of the formula: a representative triple with its exact
/// coefficient and symbol slots.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormulaTerm {
    pub eta: AdmissibleTriple,
    pub multiplicity: i64,
    pub symmetry_order: u64,
    pub coeff_num: i64,
    pub coeff_den: i64,
    pub psi1: PsiFactor,
    pub psi2: PsiFactor,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// One term per class, coefficients in lowest terms with the originals
/// retained.
pub fn build_formula(classes: &[TripleClass]) -> Result<Vec<FormulaTerm>> {
    classes
        .iter()
        .map(|class| {
            let m = class.multiplicity;
            let eq = i64::try_from(class.symmetry_order).map_err(|_| Error::Overflow {
                context: "symmetry order",
            })?;
            let g = gcd(m, eq);
            Ok(FormulaTerm {
                eta: class.representative.clone(),
                multiplicity: m,
                symmetry_order: class.symmetry_order,
                coeff_num: m / g,
                coeff_den: eq / g,
                psi1: PsiFactor {
                    symbol: "Psi^{Y1rel}_{Gamma1}".into(),
                    inputs: vec!["j1^*(alpha(0))".into(), "zeta_{eta,1,j}".into()],
                },
                psi2: PsiFactor {
                    symbol: "Psi^{Y2rel}_{Gamma2}".into(),
                    inputs: vec!["j2^*(alpha(0))".into(), "zeta_{eta,2,j}".into()],
                },
            })
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Machine,
    Latex,
    Summary,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "machine" => Ok(OutputFormat::Machine),
            "latex" => Ok(OutputFormat::Latex),
            "summary" => Ok(OutputFormat::Summary),
            other => Err(Error::input(format!(
                "unknown format {other:?} (expected machine, latex or summary)"
            ))),
        }
    }
}

/// The request echoed into every output.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RequestEcho {
    pub g: i64,
    pub k: usize,
    pub target: Target,
}

// ---- machine format -------------------------------------------------------

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineDocument {
    pub schema_version: u32,
    pub geometry_label: String,
    pub basis: BasisRecord,
    pub request: RequestRecord,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisRecord {
    pub x: Vec<String>,
    pub y1: Vec<String>,
    pub y2: Vec<String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestRecord {
    pub g: i64,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<i64>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub coeff: CoeffRecord,
    pub root_count: usize,
    pub root_weights: Vec<i64>,
    /// Dimension marker of the contact space the two factors are paired in.
    pub contact_space: ContactRecord,
    pub gamma1: GraphRecord,
    pub gamma2: GraphRecord,
    pub i_set: Vec<usize>,
    pub factors: FactorsRecord,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffRecord {
    pub num: i64,
    pub den: i64,
    pub multiplicity: i64,
    pub symmetry_order: u64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactRecord {
    pub symbol: String,
    pub power: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub side: String,
    pub rank: usize,
    pub vertices: Vec<VertexRecord>,
    pub roots: Vec<RootRecord>,
    pub legs: Vec<LegRecord>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub genus: u32,
    pub class: Vec<i64>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootRecord {
    pub vertex: usize,
    pub weight: i64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegRecord {
    pub vertex: usize,
    pub label: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorsRecord {
    pub sum_over: String,
    pub bracket: String,
    pub product: String,
    pub psi1: PsiFactor,
    pub psi2: PsiFactor,
}

fn graph_record(graph: &WeightedGraph) -> GraphRecord {
    GraphRecord {
        side: graph.side.name().to_string(),
        rank: graph.rank,
        vertices: graph
            .vertices
            .iter()
            .map(|v| VertexRecord {
                genus: v.genus,
                class: v.cls.coords().to_vec(),
            })
            .collect(),
        roots: graph
            .roots
            .iter()
            .map(|r| RootRecord {
                vertex: r.vertex,
                weight: r.weight,
            })
            .collect(),
        legs: graph
            .legs
            .iter()
            .map(|l| LegRecord {
                vertex: l.vertex,
                label: l.label,
            })
            .collect(),
    }
}

fn graph_from_record(record: &GraphRecord) -> Result<WeightedGraph> {
    let side = match record.side.as_str() {
        "Y1" => Side::Y1,
        "Y2" => Side::Y2,
        other => return Err(Error::input(format!("unknown graph side {other:?}"))),
    };
    let vertices = record
        .vertices
        .iter()
        .map(|v| {
            Ok(Vertex {
                genus: v.genus,
                cls: LatticeVector::new(v.class.clone())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let roots = record
        .roots
        .iter()
        .map(|r| Root {
            vertex: r.vertex,
            weight: r.weight,
        })
        .collect();
    let legs = record
        .legs
        .iter()
        .map(|l| Leg {
            vertex: l.vertex,
            label: l.label,
        })
        .collect();
    Ok(WeightedGraph::new(side, record.rank, vertices, roots, legs))
}

fn term_record(term: &FormulaTerm) -> TermRecord {
    let r = term.eta.root_count();
    TermRecord {
        coeff: CoeffRecord {
            num: term.coeff_num,
            den: term.coeff_den,
            multiplicity: term.multiplicity,
            symmetry_order: term.symmetry_order,
        },
        root_count: r,
        root_weights: term.eta.gamma1.root_weights(),
        contact_space: ContactRecord {
            symbol: "E^r".into(),
            power: r,
        },
        gamma1: graph_record(&term.eta.gamma1),
        gamma2: graph_record(&term.eta.gamma2),
        i_set: term.eta.leg_set().into_iter().collect(),
        factors: FactorsRecord {
            sum_over: "j in K_eta".into(),
            bracket: "[.]_0".into(),
            product: "bullet".into(),
            psi1: term.psi1.clone(),
            psi2: term.psi2.clone(),
        },
    }
}

fn term_from_record(record: &TermRecord) -> Result<FormulaTerm> {
    Ok(FormulaTerm {
        eta: AdmissibleTriple::new(
            graph_from_record(&record.gamma1)?,
            graph_from_record(&record.gamma2)?,
        ),
        multiplicity: record.coeff.multiplicity,
        symmetry_order: record.coeff.symmetry_order,
        coeff_num: record.coeff.num,
        coeff_den: record.coeff.den,
        psi1: record.factors.psi1.clone(),
        psi2: record.factors.psi2.clone(),
    })
}

pub fn build_document(
    geom: &BlowupGeometry,
    request: &RequestEcho,
    terms: &[FormulaTerm],
) -> MachineDocument {
    let (beta, d) = match &request.target {
        Target::Class(beta) => (Some(beta.coords().to_vec()), None),
        Target::Degree(d) => (None, Some(*d)),
    };
    MachineDocument {
        schema_version: MACHINE_SCHEMA_VERSION,
        geometry_label: geom.label().to_string(),
        basis: BasisRecord {
            x: geom.basis_x().to_vec(),
            y1: geom.basis_y1().to_vec(),
            y2: geom.basis_y2().to_vec(),
        },
        request: RequestRecord {
            g: request.g,
            k: request.k,
            beta,
            d,
        },
        terms: terms.iter().map(term_record).collect(),
    }
}

pub fn parse_machine(text: &str) -> Result<MachineDocument> {
    serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

/// Rebuilds the term list from a parsed machine document.
pub fn terms_from_document(doc: &MachineDocument) -> Result<Vec<FormulaTerm>> {
    doc.terms.iter().map(term_from_record).collect()
}

/// Serializes the term list in the requested format.
pub fn emit(
    geom: &BlowupGeometry,
    request: &RequestEcho,
    terms: &[FormulaTerm],
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Machine => {
            let doc = build_document(geom, request, terms);
            let mut text =
                serde_json::to_string_pretty(&doc).map_err(|e| Error::Config(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        OutputFormat::Summary => Ok(emit_summary(geom, request, terms)),
        OutputFormat::Latex => Ok(emit_latex(geom, request, terms)),
    }
}

fn request_line(geom: &BlowupGeometry, request: &RequestEcho) -> String {
    match &request.target {
        Target::Class(beta) => format!(
            "request g={} k={} beta={} (coords {})",
            request.g,
            request.k,
            format_class(beta.coords(), geom.basis_x()),
            beta
        ),
        Target::Degree(d) => format!("request g={} k={} d={}", request.g, request.k, d),
    }
}

fn coeff_string(term: &FormulaTerm) -> String {
    if term.coeff_den == 1 {
        format!("{}", term.coeff_num)
    } else {
        format!("{}/{}", term.coeff_num, term.coeff_den)
    }
}

fn emit_summary(geom: &BlowupGeometry, request: &RequestEcho, terms: &[FormulaTerm]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "geometry {} basis X=[{}] Y1=[{}] Y2=[{}]\n",
        geom.label(),
        geom.basis_x().join(","),
        geom.basis_y1().join(","),
        geom.basis_y2().join(","),
    ));
    out.push_str(&request_line(geom, request));
    out.push('\n');
    out.push_str(&format!("terms {}\n", terms.len()));
    for term in terms {
        let b1 = term
            .eta
            .gamma1
            .total_class()
            .map(|b| format_class(b.coords(), geom.basis_y1()))
            .unwrap_or_else(|_| "?".into());
        let b2 = term
            .eta
            .gamma2
            .total_class()
            .map(|b| format_class(b.coords(), geom.basis_y2()))
            .unwrap_or_else(|_| "?".into());
        let genus1: Vec<String> = term
            .eta
            .gamma1
            .vertices
            .iter()
            .map(|v| v.genus.to_string())
            .collect();
        let genus2: Vec<String> = term
            .eta
            .gamma2
            .vertices
            .iter()
            .map(|v| v.genus.to_string())
            .collect();
        let weights: Vec<String> = term
            .eta
            .gamma1
            .root_weights()
            .iter()
            .map(|w| w.to_string())
            .collect();
        let i_set: Vec<String> = term.eta.leg_set().iter().map(|l| l.to_string()).collect();
        out.push_str(&format!(
            "coeff={} m={} |Eq|={} r={} weights=[{}] b(Gamma1)={} b(Gamma2)={} genus1=[{}] genus2=[{}] I={{{}}}\n",
            coeff_string(term),
            term.multiplicity,
            term.symmetry_order,
            term.eta.root_count(),
            weights.join(","),
            b1,
            b2,
            genus1.join(","),
            genus2.join(","),
            i_set.join(","),
        ));
    }
    out
}

/// Greek-named basis labels become commands in math mode.
fn latex_label(label: &str) -> String {
    const GREEK: &[&str] = &[
        "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
        "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi",
        "omega",
    ];
    if GREEK.contains(&label) {
        format!("\\{label}")
    } else {
        label.to_string()
    }
}

fn latex_class(coords: &[i64], labels: &[String]) -> String {
    let mathed: Vec<String> = labels.iter().map(|l| latex_label(l)).collect();
    format_class(coords, &mathed)
}

fn latex_coeff(term: &FormulaTerm) -> String {
    if term.coeff_den == 1 {
        format!("{}", term.coeff_num)
    } else {
        format!("\\frac{{{}}}{{{}}}", term.coeff_num, term.coeff_den)
    }
}

fn latex_graph_table(graph: &WeightedGraph, labels: &[String], name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("% {name}\n"));
    if graph.is_empty() {
        out.push_str(&format!("% {name} is empty\n"));
        return out;
    }
    out.push_str("\\begin{tabular}{llll}\n");
    out.push_str("vertex & $g(v)$ & $b(v)$ & roots / legs \\\\\n");
    for (i, v) in graph.vertices.iter().enumerate() {
        let roots: Vec<String> = graph
            .roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.vertex == i)
            .map(|(j, r)| format!("$\\mu_{{{}}}={}$", j + 1, r.weight))
            .collect();
        let legs: Vec<String> = graph
            .legs
            .iter()
            .filter(|l| l.vertex == i)
            .map(|l| format!("$x_{{{}}}$", l.label))
            .collect();
        let mut marks = roots;
        marks.extend(legs);
        out.push_str(&format!(
            "$v_{{{}}}$ & ${}$ & ${}$ & {} \\\\\n",
            i + 1,
            v.genus,
            latex_class(v.cls.coords(), labels),
            if marks.is_empty() {
                "--".to_string()
            } else {
                marks.join(", ")
            },
        ));
    }
    out.push_str("\\end{tabular}\n");
    out
}

fn emit_latex(geom: &BlowupGeometry, request: &RequestEcho, terms: &[FormulaTerm]) -> String {
    let mut out = String::new();
    let target = match &request.target {
        Target::Class(beta) => format!("\\beta = {}", latex_class(beta.coords(), geom.basis_x())),
        Target::Degree(d) => format!("d = {d}"),
    };
    out.push_str(&format!(
        "% geometry {}: g = {}, k = {}, {}\n",
        geom.label(),
        request.g,
        request.k,
        target
    ));
    out.push_str(
        "\\Psi^{X}_{(g,k;\\beta)}(\\alpha,\\zeta) = \\sum_{\\eta} \\frac{m(\\eta)}{|\\mathrm{Eq}(\\eta)|} \\sum_{j \\in K_{\\eta}} \\left[ \\Psi^{Y_1^{\\mathrm{rel}}}_{\\Gamma_1}(j_1^*\\alpha(0), \\zeta_{\\eta,1,j}) \\bullet \\Psi^{Y_2^{\\mathrm{rel}}}_{\\Gamma_2}(j_2^*\\alpha(0), \\zeta_{\\eta,2,j}) \\right]_0\n",
    );
    out.push_str(&format!("% expanded over {} terms:\n", terms.len()));
    for (n, term) in terms.iter().enumerate() {
        out.push_str(&format!(
            "% --- term {} (m = {}, |Eq| = {}, r = {}) ---\n",
            n + 1,
            term.multiplicity,
            term.symmetry_order,
            term.eta.root_count()
        ));
        out.push_str(&format!(
            "{} \\cdot \\sum_{{j \\in K_{{\\eta_{{{}}}}}}} \\left[ \\Psi^{{Y_1^{{\\mathrm{{rel}}}}}}_{{\\Gamma_1}} \\bullet \\Psi^{{Y_2^{{\\mathrm{{rel}}}}}}_{{\\Gamma_2}} \\right]_0 \\quad \\text{{in }} H_*(E^{{{}}})\n",
            latex_coeff(term),
            n + 1,
            term.eta.root_count()
        ));
        out.push_str(&latex_graph_table(
            &term.eta.gamma1,
            geom.basis_y1(),
            "\\Gamma_1",
        ));
        out.push_str(&latex_graph_table(
            &term.eta.gamma2,
            geom.basis_y2(),
            "\\Gamma_2",
        ));
        let i_set: Vec<String> = term.eta.leg_set().iter().map(|l| l.to_string()).collect();
        out.push_str(&format!("% I = \\{{{}\\}}\n", i_set.join(",")));
    }
    out
}
