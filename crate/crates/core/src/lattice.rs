//! Exact integer lattice arithmetic and finitely generated semigroup cones.
//!
//! All curve-class bookkeeping in this crate runs through the types here:
//! vectors in a fixed basis of a curve-class group, integer functionals and
//! maps between such groups, and `ConeModel`, the sub-semigroup generated by
//! a finite list of vectors (the integral points of an effective cone).
//!
//! Arithmetic is checked 64-bit: overflow is reported as an error, never
//! wrapped. Membership, slice enumeration and ray decomposition are decided
//! by bounded coefficient search; termination is guaranteed by a witness
//! functional that is strictly positive on every generator, registered when
//! the cone is built.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

fn checked_add(a: i64, b: i64, context: &'static str) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow { context })
}

fn checked_mul(a: i64, b: i64, context: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow { context })
}

/// An exact integer vector in a declared basis of a curve-class group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LatticeVector {
    coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::input("lattice vector must have positive rank"));
        }
        Ok(LatticeVector { coords })
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector {
            coords: vec![0; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_rank(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                context,
                expected: self.rank(),
                got: other.rank(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other, "vector addition")?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| checked_add(a, b, "vector addition"))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeVector { coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other, "vector subtraction")?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| {
                b.checked_neg()
                    .and_then(|nb| a.checked_add(nb))
                    .ok_or(Error::Overflow {
                        context: "vector subtraction",
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeVector { coords })
    }

    pub fn scaled(&self, k: i64) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|&a| checked_mul(a, k, "scalar multiplication"))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeVector { coords })
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An integer functional on a curve-class group; pairing is the exact dot
/// product. Houses intersection pairings (`E ·`) and degree functionals
/// (`L ·`, `H ·`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearFunctional {
    coeffs: Vec<i64>,
}

impl LinearFunctional {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::input("functional must have positive rank"));
        }
        Ok(LinearFunctional { coeffs })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Exact integer pairing with a vector of matching rank.
    pub fn pair(&self, v: &LatticeVector) -> Result<i64> {
        if self.rank() != v.rank() {
            return Err(Error::RankMismatch {
                context: "functional pairing",
                expected: self.rank(),
                got: v.rank(),
            });
        }
        let mut acc = 0i64;
        for (&c, &x) in self.coeffs.iter().zip(v.coords()) {
            acc = checked_add(
                acc,
                checked_mul(c, x, "functional pairing")?,
                "functional pairing",
            )?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                context: "functional addition",
                expected: self.rank(),
                got: other.rank(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| checked_add(a, b, "functional addition"))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearFunctional { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let negated = other.scaled(-1)?;
        self.add(&negated)
    }

    pub fn scaled(&self, k: i64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| checked_mul(a, k, "functional scaling"))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearFunctional { coeffs })
    }

    /// Pull back along a linear map: `(f ∘ m)(v) = f(m v)`.
    pub fn compose(&self, m: &LinearMap) -> Result<Self> {
        if self.rank() != m.target_rank() {
            return Err(Error::RankMismatch {
                context: "functional composition",
                expected: m.target_rank(),
                got: self.rank(),
            });
        }
        let mut coeffs = vec![0i64; m.source_rank()];
        for (row, &f) in m.rows().iter().zip(&self.coeffs) {
            for (j, &a) in row.iter().enumerate() {
                coeffs[j] = checked_add(
                    coeffs[j],
                    checked_mul(f, a, "functional composition")?,
                    "functional composition",
                )?;
            }
        }
        Ok(LinearFunctional { coeffs })
    }
}

impl fmt::Display for LinearFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

/// An integer matrix mapping one curve-class group to another, stored as
/// `target_rank` rows of `source_rank` entries. Houses pushforwards.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    rows: Vec<Vec<i64>>,
    source_rank: usize,
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<i64>>, source_rank: usize) -> Result<Self> {
        if rows.is_empty() || source_rank == 0 {
            return Err(Error::input(
                "linear map must have positive source and target rank",
            ));
        }
        for row in &rows {
            if row.len() != source_rank {
                return Err(Error::RankMismatch {
                    context: "linear map row",
                    expected: source_rank,
                    got: row.len(),
                });
            }
        }
        Ok(LinearMap { rows, source_rank })
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.rank() != self.source_rank {
            return Err(Error::RankMismatch {
                context: "linear map application",
                expected: self.source_rank,
                got: v.rank(),
            });
        }
        let mut coords = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut acc = 0i64;
            for (&a, &x) in row.iter().zip(v.coords()) {
                acc = checked_add(
                    acc,
                    checked_mul(a, x, "linear map application")?,
                    "linear map application",
                )?;
            }
            coords.push(acc);
        }
        Ok(LatticeVector { coords })
    }
}

/// A finitely generated sub-semigroup of a lattice: exactly the set
/// `{ Σ cᵢ gᵢ : cᵢ ∈ ℤ≥0 }` over the supplied generators.
///
/// Construction registers a witness functional that must be strictly
/// positive on every generator. Membership and ray decomposition bound
/// their coefficient searches with it; without such a functional the
/// searches would not terminate, so a cone that admits none is rejected
/// as a model error. Zero generators contribute nothing to the semigroup
/// and are dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConeModel {
    rank: usize,
    generators: Vec<LatticeVector>,
    witness: LinearFunctional,
    witness_values: Vec<i64>,
}

impl ConeModel {
    pub fn new(
        rank: usize,
        generators: Vec<LatticeVector>,
        witness: LinearFunctional,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::input("cone rank must be positive"));
        }
        if witness.rank() != rank {
            return Err(Error::RankMismatch {
                context: "cone witness",
                expected: rank,
                got: witness.rank(),
            });
        }
        let mut kept = Vec::new();
        let mut witness_values = Vec::new();
        for g in generators {
            if g.rank() != rank {
                return Err(Error::RankMismatch {
                    context: "cone generator",
                    expected: rank,
                    got: g.rank(),
                });
            }
            if g.is_zero() {
                continue;
            }
            let w = witness.pair(&g)?;
            if w <= 0 {
                return Err(Error::NonPositiveOnGenerator {
                    functional: witness.to_string(),
                    generator: g.to_string(),
                });
            }
            kept.push(g);
            witness_values.push(w);
        }
        Ok(ConeModel {
            rank,
            generators: kept,
            witness,
            witness_values,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn witness(&self) -> &LinearFunctional {
        &self.witness
    }

    /// Decides whether `v` is a non-negative integer combination of the
    /// generators, by exhaustive search over coefficient vectors. Each
    /// coefficient of generator `g` is bounded by `witness(v) / witness(g)`.
    pub fn contains(&self, v: &LatticeVector) -> Result<bool> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                context: "cone membership",
                expected: self.rank,
                got: v.rank(),
            });
        }
        let budget = self.witness.pair(v)?;
        if budget < 0 {
            return Ok(false);
        }
        self.membership_search(0, v.clone(), budget)
    }

    fn membership_search(&self, idx: usize, remaining: LatticeVector, budget: i64) -> Result<bool> {
        if remaining.is_zero() {
            return Ok(true);
        }
        if idx == self.generators.len() {
            return Ok(false);
        }
        let g = &self.generators[idx];
        let wg = self.witness_values[idx];
        let mut current = remaining;
        let mut used = 0i64;
        loop {
            if self.membership_search(idx + 1, current.clone(), budget - used)? {
                return Ok(true);
            }
            used = checked_add(used, wg, "membership search")?;
            if used > budget {
                return Ok(false);
            }
            current = current.sub(g)?;
        }
    }

    /// All semigroup members `v` with `0 ≤ h·v ≤ bound`, without duplicates,
    /// in lexicographic coordinate order. `h` must be strictly positive on
    /// every generator (it doubles as the termination bound here).
    pub fn enumerate_slice(&self, h: &LinearFunctional, bound: i64) -> Result<Vec<LatticeVector>> {
        if h.rank() != self.rank {
            return Err(Error::RankMismatch {
                context: "slice functional",
                expected: self.rank,
                got: h.rank(),
            });
        }
        let mut values = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let w = h.pair(g)?;
            if w <= 0 {
                return Err(Error::NonPositiveOnGenerator {
                    functional: h.to_string(),
                    generator: g.to_string(),
                });
            }
            values.push(w);
        }
        let mut out = BTreeSet::new();
        if bound >= 0 {
            self.slice_search(0, LatticeVector::zero(self.rank), bound, &values, &mut out)?;
        }
        Ok(out.into_iter().collect())
    }

    fn slice_search(
        &self,
        idx: usize,
        current: LatticeVector,
        budget: i64,
        values: &[i64],
        out: &mut BTreeSet<LatticeVector>,
    ) -> Result<()> {
        if idx == self.generators.len() {
            out.insert(current);
            return Ok(());
        }
        let g = &self.generators[idx];
        let wg = values[idx];
        let mut vec = current;
        let mut used = 0i64;
        loop {
            self.slice_search(idx + 1, vec.clone(), budget - used, values, out)?;
            used = checked_add(used, wg, "slice search")?;
            if used > budget {
                return Ok(());
            }
            vec = vec.add(g)?;
        }
    }

    /// Splits `v = v0 + l·gamma` with `l = max { n ≥ 0 : v − n·gamma ∈ cone }`.
    ///
    /// When `v` is a multiple of `gamma` this lands on the apex (`v0 = 0`);
    /// callers wanting the first point *past* the apex add one `gamma` back.
    pub fn ray_decompose(
        &self,
        v: &LatticeVector,
        gamma: &LatticeVector,
    ) -> Result<(LatticeVector, i64)> {
        if !self.contains(v)? {
            return Err(Error::NotInCone {
                context: "ray decomposition",
                vector: v.to_string(),
            });
        }
        if gamma.is_zero() || !self.contains(gamma)? {
            return Err(Error::InvalidRay {
                vector: gamma.to_string(),
            });
        }
        // witness > 0 on every nonzero member, so steps along gamma are bounded
        let wv = self.witness.pair(v)?;
        let wg = self.witness.pair(gamma)?;
        let mut best = 0i64;
        let mut current = v.clone();
        let mut n = 0i64;
        while n <= wv / wg {
            if self.contains(&current)? {
                best = n;
            }
            n += 1;
            current = current.sub(gamma)?;
        }
        let v0 = v.sub(&gamma.scaled(best)?)?;
        Ok((v0, best))
    }
}
