//! Exact arithmetic in free metabelian groups.
//!
//! The crate is organized around four layers:
//! - [`laurent`]: sparse multivariate Laurent polynomials over the integers,
//!   with monic division and canonical box remainders;
//! - [`group`]: the free metabelian group `F_d/F_d''` in triangular normal
//!   form, with word reduction, commutator calculus and the module action
//!   of the abelianization on the derived subgroup;
//! - [`residue`]: the periodized submodule `O` and its complement `M`
//!   inside the derived subgroup, with the canonical residue map;
//! - [`folner`]: transversal balls, support sets, integer lattice bases
//!   and exact invariance/adaptedness statistics.
//!
//! Core arithmetic is generic over the coefficient ring through
//! [`Coefficient`]; the concrete aliases below fix unbounded integers.

pub mod folner;
pub mod group;
pub mod jsonio;
pub mod laurent;
pub mod parse;
pub mod residue;
pub mod sample;
pub mod verify;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

/// Coefficient ring for all polynomial and module arithmetic.
///
/// Any signed integer-like type from the `num` ecosystem qualifies; the
/// crate-level aliases instantiate everything with `num_bigint::BigInt`
/// since normalization can grow coefficients past machine width.
pub trait Coefficient:
    Clone
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Signed
    + Integer
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Coefficient for T where
    T: Clone
        + Eq
        + Ord
        + Hash
        + Debug
        + Display
        + FromStr
        + Signed
        + Integer
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Default exact coefficient type.
pub type Int = num_bigint::BigInt;
/// Exact rational numbers used for ratios and statistics.
pub type Rational = num_rational::Ratio<Int>;

/// Laurent polynomial over [`Int`].
pub type Poly = laurent::LaurentPoly<Int>;
/// Triangular element of the derived subgroup over [`Int`].
pub type NElem = group::NElement<Int>;
/// Unnormalized combination of basic commutators over [`Int`].
pub type RawN = group::RawNCombination<Int>;
/// Normal form of an element of `F_d/F_d''` over [`Int`].
pub type Element = group::GroupElement<Int>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("polynomial is not univariate in s{0}")]
    NotUnivariate(usize),
    #[error("divisor is not monic in s{0}")]
    NotMonic(usize),
    #[error("divisor has degree zero")]
    DegreeZeroDivisor,
    #[error("duplicate divisor variable s{0}")]
    DuplicateVariable(usize),
    #[error("index {0} out of range for rank {1}")]
    IndexOutOfRange(usize, usize),
    #[error("indices ({0},{1}) do not form an ordered pair")]
    BadPair(usize, usize),
    #[error("indices ({0},{1},{2}) are not strictly increasing")]
    BadTriple(usize, usize, usize),
    #[error("invalid target rank {0}")]
    InvalidRank(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element lies outside the lattice")]
    OutsideLattice,
    #[error("witness does not reproduce the value")]
    InconsistentWitness,
    #[error("empty probe list")]
    EmptyProbes,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
