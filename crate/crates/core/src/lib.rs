//! Term enumeration for the degeneration formula of a blow-up, refined to a
//! fixed curve class.
//!
//! Degenerate `X` by blowing up `X × A¹` along `Z × 0`: the special fiber is
//! `Y₁ ∪_E Y₂` with `Y₁ = Bl_Z X` and `Y₂` the completed normal bundle of
//! `Z`. The Gromov-Witten invariants of `X` in a class `β` then decompose
//! into relative invariants of the two sides, summed over a finite index
//! set of admissible triples `η = (Γ₁, Γ₂, I)` with coefficients
//! `m(η)/|Eq(η)|`. This crate computes that index set — the triples, their
//! coefficients, and the symbolic formula skeleton — from pure lattice data
//! (curve-class groups, effective cones, pushforwards, `E`-pairings); the
//! relative invariants themselves are emitted as uninterpreted symbols.
//!
//! Modules, bottom-up:
//!
//! * [`lattice`] — exact integer vectors, functionals, maps, and finitely
//!   generated semigroup cones with decidable membership.
//! * [`geometry`] — the validated lattice package of one blow-up setup,
//!   plus induced ample degree data and the built-in presets.
//! * [`graphs`] — admissible weighted graphs and triples with their
//!   numerical functions, validation, and canonical forms.
//! * [`enumeration`] — the engine: splittings, triples, equivalence
//!   classes, degree-mode partitions, H-independence checks.
//! * [`formula`] — exact-coefficient terms and the machine/latex/summary
//!   emitters.
//! * [`oracle`] — the independent brute-force reference enumeration used
//!   for differential testing.
//!
//! Splitting expansion is data-parallel under the `parallel` feature
//! (enabled by default); disable default features for a fully sequential
//! build. Results are identical and deterministically ordered either way.

pub mod enumeration;
pub mod error;
pub mod formula;
pub mod geometry;
pub mod graphs;
pub mod lattice;
pub mod oracle;

pub use enumeration::{
    check_h_independence, enumerate_by_degree, enumerate_splittings, enumerate_triples,
    enumerate_triples_with_mode, reduce_to_classes, EnumerationRequest, ExecMode, Splitting,
    Target, TripleClass,
};
pub use error::{Error, Result};
pub use formula::{build_formula, emit, parse_machine, FormulaTerm, OutputFormat, RequestEcho};
pub use geometry::{AmpleData, BlowupGeometry, GeometryConfig};
pub use graphs::{AdmissibleTriple, Side, TripleKey, WeightedGraph};
pub use lattice::{ConeModel, LatticeVector, LinearFunctional, LinearMap};
pub use oracle::{oracle_enumerate, OracleBounds};
