//! The lattice package of a blow-up degeneration.
//!
//! Blowing up `X × A¹` along `Z × 0` (with `Z ⊂ X` a smooth center) gives a
//! family over the line whose special fiber is `Y₁ ∪_E Y₂`, with
//! `Y₁ = Bl_Z X`, `Y₂ = P(N_{Z/X} ⊕ O_Z)` and `E = P(N_{Z/X})` the common
//! divisor. All combinatorics downstream only consumes the lattice shadow of
//! this geometry: the three curve-class groups with their effective cones,
//! the pushforwards `p₁*`, `p₂*` to `N₁(X)`, the intersection pairings with
//! `E`, and the fiber line class `γ` (with `E·γ = −1` on `Y₁` and `+1` on
//! `Y₂`). `BlowupGeometry` bundles exactly that data, validated at load.
//!
//! Geometries come from a JSON config (see [`GeometryConfig`]) or from a
//! built-in preset. Whoever supplies the config is responsible for the
//! translation from bundle data to lattice data; the presets document theirs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ConeModel, LatticeVector, LinearFunctional, LinearMap};

/// Degree data induced by a choice of ample `L` on `X`: the restrictions
/// `H₁ = p₁*L − E` and `H₂ = p₂*(L·Z) + E` of the associated relative ample
/// class, as integer functionals. Strict positivity on all cone generators
/// is the load-checked stand-in for "L sufficiently very ample"; it is all
/// the enumeration needs to keep its slices finite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AmpleData {
    l: LinearFunctional,
    h1: LinearFunctional,
    h2: LinearFunctional,
}

impl AmpleData {
    pub fn l(&self) -> &LinearFunctional {
        &self.l
    }

    pub fn h1(&self) -> &LinearFunctional {
        &self.h1
    }

    pub fn h2(&self) -> &LinearFunctional {
        &self.h2
    }
}

/// Validated lattice data for one blow-up degeneration.
#[derive(Clone, PartialEq, Debug)]
pub struct BlowupGeometry {
    label: String,
    codim: u32,
    basis_x: Vec<String>,
    basis_y1: Vec<String>,
    basis_y2: Vec<String>,
    ne_x: ConeModel,
    ne_y1: ConeModel,
    ne_y2: ConeModel,
    p1_push: LinearMap,
    p2_push: LinearMap,
    e_pair_y1: LinearFunctional,
    e_pair_y2: LinearFunctional,
    gamma_y1: LatticeVector,
    gamma_y2: LatticeVector,
    reference_ample: LinearFunctional,
}

/// JSON schema for a geometry config. Unknown fields are rejected.
///
/// Vectors are integer arrays in the declared basis order; matrices are
/// row-major with one row per coordinate of `N₁(X)`. Each `positivity`
/// field must be strictly positive on every listed cone generator: it is
/// the registered functional that bounds all membership searches on that
/// cone. `reference_ample` plays that role for `X` and also defines the
/// scaling `L = c · reference_ample` used by scalar ample parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub schema_version: u32,
    pub label: String,
    pub codim: u32,
    pub x: BaseSpaceConfig,
    pub y1: RelativeSideConfig,
    pub y2: RelativeSideConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpaceConfig {
    pub basis: Vec<String>,
    pub cone_generators: Vec<Vec<i64>>,
    pub reference_ample: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelativeSideConfig {
    pub basis: Vec<String>,
    pub cone_generators: Vec<Vec<i64>>,
    pub positivity: Vec<i64>,
    pub e_pairing: Vec<i64>,
    pub gamma: Vec<i64>,
    pub pushforward: Vec<Vec<i64>>,
}

pub const GEOMETRY_SCHEMA_VERSION: u32 = 1;

/// Names accepted by [`preset_config`] / [`BlowupGeometry::preset`].
pub const PRESET_NAMES: &[&str] = &["p2-point", "p3-line"];

fn vectors(raw: &[Vec<i64>], what: &str) -> Result<Vec<LatticeVector>> {
    raw.iter()
        .map(|c| LatticeVector::new(c.clone()).map_err(|e| Error::geometry(format!("{what}: {e}"))))
        .collect()
}

impl BlowupGeometry {
    /// Parses and validates a JSON geometry config.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: GeometryConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_config(&config)
    }

    /// Loads a built-in preset by name.
    pub fn preset(name: &str) -> Result<Self> {
        Self::from_config(&preset_config(name)?)
    }

    /// Validates a parsed config. Every invariant failure produces a
    /// distinct, named error.
    pub fn from_config(config: &GeometryConfig) -> Result<Self> {
        if config.schema_version != GEOMETRY_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {GEOMETRY_SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        if config.codim == 0 {
            return Err(Error::geometry("codim must be a positive integer"));
        }
        let rank_x = config.x.basis.len();
        let rank_y1 = config.y1.basis.len();
        let rank_y2 = config.y2.basis.len();
        if rank_x == 0 || rank_y1 == 0 || rank_y2 == 0 {
            return Err(Error::geometry("every basis must be nonempty"));
        }

        let reference_ample = LinearFunctional::new(config.x.reference_ample.clone())
            .map_err(|e| Error::geometry(format!("reference_ample: {e}")))?;
        if reference_ample.rank() != rank_x {
            return Err(Error::geometry(format!(
                "reference_ample has rank {}, N1(X) has rank {rank_x}",
                reference_ample.rank()
            )));
        }
        let ne_x = ConeModel::new(
            rank_x,
            vectors(&config.x.cone_generators, "NE(X) generator")?,
            reference_ample.clone(),
        )
        .map_err(|e| Error::geometry(format!("NE(X): {e}")))?;

        let side = |name: &str,
                    cfg: &RelativeSideConfig,
                    rank: usize|
         -> Result<(ConeModel, LinearFunctional, LatticeVector, LinearMap)> {
            let witness = LinearFunctional::new(cfg.positivity.clone())
                .map_err(|e| Error::geometry(format!("{name} positivity: {e}")))?;
            if witness.rank() != rank {
                return Err(Error::geometry(format!(
                    "{name} positivity has rank {}, expected {rank}",
                    witness.rank()
                )));
            }
            let cone = ConeModel::new(
                rank,
                vectors(&cfg.cone_generators, &format!("NE({name}) generator"))?,
                witness,
            )
            .map_err(|e| Error::geometry(format!("NE({name}): {e}")))?;
            let e_pair = LinearFunctional::new(cfg.e_pairing.clone())
                .map_err(|e| Error::geometry(format!("{name} e_pairing: {e}")))?;
            if e_pair.rank() != rank {
                return Err(Error::geometry(format!(
                    "{name} e_pairing has rank {}, expected {rank}",
                    e_pair.rank()
                )));
            }
            let gamma = LatticeVector::new(cfg.gamma.clone())
                .map_err(|e| Error::geometry(format!("{name} gamma: {e}")))?;
            if gamma.rank() != rank {
                return Err(Error::geometry(format!(
                    "{name} gamma has rank {}, expected {rank}",
                    gamma.rank()
                )));
            }
            let push = LinearMap::new(cfg.pushforward.clone(), rank)
                .map_err(|e| Error::geometry(format!("{name} pushforward: {e}")))?;
            if push.target_rank() != rank_x {
                return Err(Error::geometry(format!(
                    "{name} pushforward has {} rows, N1(X) has rank {rank_x}",
                    push.target_rank()
                )));
            }
            Ok((cone, e_pair, gamma, push))
        };

        let (ne_y1, e_pair_y1, gamma_y1, p1_push) = side("Y1", &config.y1, rank_y1)?;
        let (ne_y2, e_pair_y2, gamma_y2, p2_push) = side("Y2", &config.y2, rank_y2)?;

        let eg1 = e_pair_y1.pair(&gamma_y1)?;
        if eg1 != -1 {
            return Err(Error::geometry(format!(
                "E.gamma on Y1 must be -1, got {eg1}"
            )));
        }
        let eg2 = e_pair_y2.pair(&gamma_y2)?;
        if eg2 != 1 {
            return Err(Error::geometry(format!(
                "E.gamma on Y2 must be +1, got {eg2}"
            )));
        }
        if !p1_push.apply(&gamma_y1)?.is_zero() {
            return Err(Error::geometry("p1_push(gamma) must vanish on Y1"));
        }
        if !p2_push.apply(&gamma_y2)?.is_zero() {
            return Err(Error::geometry("p2_push(gamma) must vanish on Y2"));
        }
        if !ne_y1.contains(&gamma_y1)? {
            return Err(Error::geometry("gamma must be an effective class on Y1"));
        }
        if !ne_y2.contains(&gamma_y2)? {
            return Err(Error::geometry("gamma must be an effective class on Y2"));
        }

        Ok(BlowupGeometry {
            label: config.label.clone(),
            codim: config.codim,
            basis_x: config.x.basis.clone(),
            basis_y1: config.y1.basis.clone(),
            basis_y2: config.y2.basis.clone(),
            ne_x,
            ne_y1,
            ne_y2,
            p1_push,
            p2_push,
            e_pair_y1,
            e_pair_y2,
            gamma_y1,
            gamma_y2,
            reference_ample,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    pub fn basis_x(&self) -> &[String] {
        &self.basis_x
    }

    pub fn basis_y1(&self) -> &[String] {
        &self.basis_y1
    }

    pub fn basis_y2(&self) -> &[String] {
        &self.basis_y2
    }

    pub fn rank_x(&self) -> usize {
        self.ne_x.rank()
    }

    pub fn rank_y1(&self) -> usize {
        self.ne_y1.rank()
    }

    pub fn rank_y2(&self) -> usize {
        self.ne_y2.rank()
    }

    pub fn ne_x(&self) -> &ConeModel {
        &self.ne_x
    }

    pub fn ne_y1(&self) -> &ConeModel {
        &self.ne_y1
    }

    pub fn ne_y2(&self) -> &ConeModel {
        &self.ne_y2
    }

    pub fn p1_push(&self) -> &LinearMap {
        &self.p1_push
    }

    pub fn p2_push(&self) -> &LinearMap {
        &self.p2_push
    }

    pub fn e_pair_y1(&self) -> &LinearFunctional {
        &self.e_pair_y1
    }

    pub fn e_pair_y2(&self) -> &LinearFunctional {
        &self.e_pair_y2
    }

    pub fn gamma_y1(&self) -> &LatticeVector {
        &self.gamma_y1
    }

    pub fn gamma_y2(&self) -> &LatticeVector {
        &self.gamma_y2
    }

    pub fn reference_ample(&self) -> &LinearFunctional {
        &self.reference_ample
    }

    /// Induces the degree data of `L`: `H₁ = p₁*L − E` and `H₂ = LZ + E`,
    /// where `LZ` computes `L·(p₂* ·)` and defaults to `L ∘ p₂*`.
    ///
    /// Fails with a named generator when positivity does not hold; such an
    /// `L` is not ample enough to bound the enumeration.
    pub fn induce_ample(
        &self,
        l: &LinearFunctional,
        lz_push: Option<&LinearFunctional>,
    ) -> Result<AmpleData> {
        if l.rank() != self.rank_x() {
            return Err(Error::RankMismatch {
                context: "ample functional",
                expected: self.rank_x(),
                got: l.rank(),
            });
        }
        for g in self.ne_x.generators() {
            if l.pair(g)? <= 0 {
                return Err(Error::geometry(format!(
                    "L not sufficiently ample: L is non-positive on NE(X) generator {}",
                    self.format_class_x(g)
                )));
            }
        }
        let h1 = l.compose(&self.p1_push)?.sub(&self.e_pair_y1)?;
        let lz = match lz_push {
            Some(f) => {
                if f.rank() != self.rank_y2() {
                    return Err(Error::RankMismatch {
                        context: "LZ functional",
                        expected: self.rank_y2(),
                        got: f.rank(),
                    });
                }
                f.clone()
            }
            None => l.compose(&self.p2_push)?,
        };
        let h2 = lz.add(&self.e_pair_y2)?;
        for g in self.ne_y1.generators() {
            let v = h1.pair(g)?;
            if v <= 0 {
                return Err(Error::geometry(format!(
                    "L not sufficiently ample: H1 = {v} on NE(Y1) generator {}",
                    self.format_class_y1(g)
                )));
            }
        }
        for g in self.ne_y2.generators() {
            let v = h2.pair(g)?;
            if v <= 0 {
                return Err(Error::geometry(format!(
                    "L not sufficiently ample: H2 = {v} on NE(Y2) generator {}",
                    self.format_class_y2(g)
                )));
            }
        }
        Ok(AmpleData {
            l: l.clone(),
            h1,
            h2,
        })
    }

    /// `L = c · reference_ample`, the scalar form used by the CLI.
    pub fn ample_from_scalar(&self, c: i64) -> Result<AmpleData> {
        self.induce_ample(&self.reference_ample.scaled(c)?, None)
    }

    pub fn format_class_x(&self, v: &LatticeVector) -> String {
        format_class(v.coords(), &self.basis_x)
    }

    pub fn format_class_y1(&self, v: &LatticeVector) -> String {
        format_class(v.coords(), &self.basis_y1)
    }

    pub fn format_class_y2(&self, v: &LatticeVector) -> String {
        format_class(v.coords(), &self.basis_y2)
    }
}

/// Renders a class in basis labels, e.g. `2s+e`, `s-e`, `0`.
pub fn format_class(coords: &[i64], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in coords.iter().zip(labels) {
        match *c {
            0 => continue,
            1 => {
                if !out.is_empty() {
                    out.push('+');
                }
                out.push_str(label);
            }
            -1 => {
                out.push('-');
                out.push_str(label);
            }
            c if c > 0 => {
                if !out.is_empty() {
                    out.push('+');
                }
                out.push_str(&format!("{c}{label}"));
            }
            c => {
                out.push_str(&format!("{c}{label}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Built-in geometry fixtures with their lattice data spelled out.
pub fn preset_config(name: &str) -> Result<GeometryConfig> {
    match name {
        // X = P², Z a point. N1(X) = Z<l> (the line class).
        //
        // Y1 = Bl_pt P²: basis s (strict transform of a line through the
        // point, s = h − e) and e (the exceptional curve). NE(Y1) = <s, e>.
        // Intersections with the exceptional divisor: E·s = 1, E·e = −1,
        // so e_pairing = (1, −1) and gamma = e. Pushforward: s ↦ l, e ↦ 0.
        //
        // Y2 = P(O ⊕ O over a point) = P², with gamma the line class and
        // E ⊂ Y2 a line: E·gamma = +1. Y2 contracts to the point, so the
        // pushforward vanishes. codim(Z ⊂ X) = 2.
        "p2-point" => Ok(GeometryConfig {
            schema_version: GEOMETRY_SCHEMA_VERSION,
            label: "p2-point".into(),
            codim: 2,
            x: BaseSpaceConfig {
                basis: vec!["l".into()],
                cone_generators: vec![vec![1]],
                reference_ample: vec![1],
            },
            y1: RelativeSideConfig {
                basis: vec!["s".into(), "e".into()],
                cone_generators: vec![vec![1, 0], vec![0, 1]],
                positivity: vec![1, 1],
                e_pairing: vec![1, -1],
                gamma: vec![0, 1],
                pushforward: vec![vec![1, 0]],
            },
            y2: RelativeSideConfig {
                basis: vec!["gamma".into()],
                cone_generators: vec![vec![1]],
                positivity: vec![1],
                e_pairing: vec![1],
                gamma: vec![1],
                pushforward: vec![vec![0]],
            },
        }),
        // X = P³, Z a line. N1(X) = Z<l>.
        //
        // Y1 = Bl_line P³: basis s (strict transform of a line meeting Z
        // once, s = h − gamma) and gamma (ruling fiber of the exceptional
        // divisor over Z). NE(Y1) = <s, gamma>; the two extremal contractions
        // are p1 and the pencil of planes through Z. E·s = 1, E·gamma = −1;
        // s ↦ l, gamma ↦ 0.
        //
        // Y2 = P(O(1) ⊕ O(1) ⊕ O) over Z = P¹: basis z (the section P(O),
        // disjoint from E = P(O(1) ⊕ O(1)), mapping isomorphically onto Z)
        // and gamma (line in a P² fiber). O(E) restricts to the fiber as
        // O(1), so E·gamma = +1 and E·z = 0; z ↦ l, gamma ↦ 0.
        // NE(Y2) = <z, gamma> since both the fiber degree and O_{P(V)}(1)
        // are nef. codim(Z ⊂ X) = 2.
        "p3-line" => Ok(GeometryConfig {
            schema_version: GEOMETRY_SCHEMA_VERSION,
            label: "p3-line".into(),
            codim: 2,
            x: BaseSpaceConfig {
                basis: vec!["l".into()],
                cone_generators: vec![vec![1]],
                reference_ample: vec![1],
            },
            y1: RelativeSideConfig {
                basis: vec!["s".into(), "gamma".into()],
                cone_generators: vec![vec![1, 0], vec![0, 1]],
                positivity: vec![1, 1],
                e_pairing: vec![1, -1],
                gamma: vec![0, 1],
                pushforward: vec![vec![1, 0]],
            },
            y2: RelativeSideConfig {
                basis: vec!["z".into(), "gamma".into()],
                cone_generators: vec![vec![1, 0], vec![0, 1]],
                positivity: vec![1, 1],
                e_pairing: vec![0, 1],
                gamma: vec![0, 1],
                pushforward: vec![vec![1, 0]],
            },
        }),
        other => Err(Error::input(format!(
            "unknown preset {other:?}; available: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[i64]) -> LatticeVector {
        LatticeVector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn p2_point_loads_with_expected_data() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        assert_eq!(geom.rank_x(), 1);
        assert_eq!(geom.rank_y1(), 2);
        assert_eq!(geom.rank_y2(), 1);
        assert_eq!(geom.codim(), 2);
        // checked invariants, re-asserted through the public surface
        assert_eq!(geom.e_pair_y1().pair(geom.gamma_y1()).unwrap(), -1);
        assert_eq!(geom.e_pair_y2().pair(geom.gamma_y2()).unwrap(), 1);
        assert!(geom.p1_push().apply(geom.gamma_y1()).unwrap().is_zero());
        // E·s = 1 on Y1
        assert_eq!(geom.e_pair_y1().pair(&v(&[1, 0])).unwrap(), 1);
        // pushforward (a,b) -> a
        assert_eq!(geom.p1_push().apply(&v(&[3, 2])).unwrap(), v(&[3]));
        assert!(geom.p2_push().apply(&v(&[5])).unwrap().is_zero());
    }

    #[test]
    fn p3_line_loads() {
        let geom = BlowupGeometry::preset("p3-line").unwrap();
        assert_eq!(geom.rank_y2(), 2);
        assert_eq!(geom.e_pair_y1().pair(geom.gamma_y1()).unwrap(), -1);
        assert_eq!(geom.e_pair_y2().pair(geom.gamma_y2()).unwrap(), 1);
        // zero-section class: E·z = 0, p2(z) = l
        assert_eq!(geom.e_pair_y2().pair(&v(&[1, 0])).unwrap(), 0);
        assert_eq!(geom.p2_push().apply(&v(&[1, 0])).unwrap(), v(&[1]));
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(BlowupGeometry::preset("p4-conic").is_err());
    }

    #[test]
    fn induce_ample_p2_point() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        let amp = geom.ample_from_scalar(2).unwrap();
        // H1·s = 2−1 = 1, H1·e = 0−(−1) = 1
        assert_eq!(amp.h1().pair(&v(&[1, 0])).unwrap(), 1);
        assert_eq!(amp.h1().pair(&v(&[0, 1])).unwrap(), 1);
        // H2·gamma = 0+1 = 1
        assert_eq!(amp.h2().pair(&v(&[1])).unwrap(), 1);
    }

    #[test]
    fn induce_ample_rejects_positivity_boundary() {
        let geom = BlowupGeometry::preset("p2-point").unwrap();
        let err = geom.ample_from_scalar(1).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not sufficiently ample"), "{msg}");
        assert!(
            msg.contains('s'),
            "should name the violating generator: {msg}"
        );
    }

    #[test]
    fn induce_ample_p3_line_accepts_c2() {
        let geom = BlowupGeometry::preset("p3-line").unwrap();
        let amp = geom.ample_from_scalar(2).unwrap();
        for g in geom.ne_y1().generators() {
            assert!(amp.h1().pair(g).unwrap() > 0);
        }
        for g in geom.ne_y2().generators() {
            assert!(amp.h2().pair(g).unwrap() > 0);
        }
        // H2 = (2,1) in the (z, gamma) basis
        assert_eq!(amp.h2().coeffs(), &[2, 1]);
    }

    #[test]
    fn config_missing_field_is_rejected() {
        let mut value: serde_json::Value =
            serde_json::to_value(preset_config("p2-point").unwrap()).unwrap();
        value["y2"].as_object_mut().unwrap().remove("gamma");
        let text = serde_json::to_string(&value).unwrap();
        let err = BlowupGeometry::from_json(&text).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
        assert!(err.to_string().contains("gamma"), "{err}");
    }

    #[test]
    fn config_unknown_field_is_rejected() {
        let mut value: serde_json::Value =
            serde_json::to_value(preset_config("p2-point").unwrap()).unwrap();
        value["surprise"] = serde_json::json!(1);
        let text = serde_json::to_string(&value).unwrap();
        assert!(matches!(
            BlowupGeometry::from_json(&text),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn config_with_wrong_gamma_pairing_names_the_invariant() {
        let mut config = preset_config("p2-point").unwrap();
        config.y1.gamma = vec![1, 0]; // E·s = +1, not −1
        let err = BlowupGeometry::from_config(&config).unwrap_err();
        assert_eq!(
            err.to_string(),
            "geometry validation error: E.gamma on Y1 must be -1, got 1"
        );
    }

    #[test]
    fn config_round_trips_through_json() {
        for name in PRESET_NAMES {
            let config = preset_config(name).unwrap();
            let text = serde_json::to_string_pretty(&config).unwrap();
            let geom = BlowupGeometry::from_json(&text).unwrap();
            assert_eq!(geom.label(), *name);
        }
    }

    #[test]
    fn format_class_rendering() {
        let labels = vec!["s".to_string(), "e".to_string()];
        assert_eq!(format_class(&[1, 1], &labels), "s+e");
        assert_eq!(format_class(&[2, -1], &labels), "2s-e");
        assert_eq!(format_class(&[0, 0], &labels), "0");
        assert_eq!(format_class(&[-1, 0], &labels), "-s");
    }

    /// Degree bookkeeping: H1·b1 + H2·b2 == L·(p1 b1 + p2 b2) whenever the
    /// contact totals match, sampled over slice points of both presets.
    #[test]
    fn degree_identity_on_matching_slice_points() {
        for name in PRESET_NAMES {
            let geom = BlowupGeometry::preset(name).unwrap();
            let amp = geom.ample_from_scalar(3).unwrap();
            let s1 = geom.ne_y1().enumerate_slice(amp.h1(), 8).unwrap();
            let s2 = geom.ne_y2().enumerate_slice(amp.h2(), 8).unwrap();
            let mut checked = 0;
            for b1 in &s1 {
                for b2 in &s2 {
                    let m1 = geom.e_pair_y1().pair(b1).unwrap();
                    let m2 = geom.e_pair_y2().pair(b2).unwrap();
                    if m1 != m2 {
                        continue;
                    }
                    let beta = geom
                        .p1_push()
                        .apply(b1)
                        .unwrap()
                        .add(&geom.p2_push().apply(b2).unwrap())
                        .unwrap();
                    let lhs = amp.h1().pair(b1).unwrap() + amp.h2().pair(b2).unwrap();
                    assert_eq!(lhs, amp.l().pair(&beta).unwrap());
                    checked += 1;
                }
            }
            assert!(checked >= 5, "expected a meaningful sample, got {checked}");
        }
    }
}
