//! Exact-arithmetic kernel for canonical Frobenius lifts, Hecke operators
//! and power operations on truncated p-adic coefficient rings.
//!
//! Everything is computed over two layers of truncation: p-adic integers
//! carried mod p^N ([`padic::PAdicInt`]), and multivariate power series
//! over them cut at a total-degree cap ([`series::BaseElt`]). On top of
//! those sit monic quotient algebras R[x]/(f) with exact linear algebra
//! ([`freealg`]), subgroup enumeration and character-style class functions
//! ([`charfun`]), the bundled height-1 and height-2 theory models
//! ([`models`]), and the operators themselves ([`froblift`]): the trace
//! form of the Frobenius lift, the Hecke operator built from the power
//! operation, and the theta operation it determines.
//!
//! All arithmetic is exact at the carried precision; no floats anywhere.
//! Failures that depend on mathematical input (non-units, non-roots,
//! torsion obstructions) come back as [`Error`]; mixing elements of
//! structurally different rings is a caller bug and panics.

pub mod charfun;
pub mod freealg;
pub mod froblift;
pub mod matrix;
pub mod models;
pub mod padic;
pub mod ring;
pub mod series;

use padic::Valuation;

/// Mathematical failure modes. Structural misuse (mixing primes,
/// mismatched variable sets, foreign parents) panics instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid precision {prec}; need at least 1 digit")]
    InvalidPrecision { prec: i64 },
    #[error("p^prec overflows u64 for p={prime}, prec={prec}")]
    PrecisionOverflow { prime: u64, prec: u32 },
    #[error("not a unit: valuation {valuation}")]
    NotAUnit { valuation: Valuation },
    #[error("not divisible by p^{needed}: valuation {found}")]
    NotDivisible { needed: u32, found: Valuation },
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("claimed root does not annihilate the modulus: remainder {remainder}")]
    NotARoot { remainder: String },
    #[error("matrix is not square: {rows} rows, {cols} cols")]
    NonSquare { rows: usize, cols: usize },
    #[error("expected {expected} roots, got {got}")]
    RootCount { expected: usize, got: usize },
    #[error("power operation image is not topologically nilpotent (M^{tried} still nonzero)")]
    PowerOpDiverged { tried: u32 },
    #[error(
        "torsion obstruction: coefficient of {monomial} in T_p(g) - g^p is a unit ({value})"
    )]
    TorsionObstruction { monomial: String, value: String },
    #[error("model construction failed: {0}")]
    ModelConstruction(String),
    #[error("subgroup enumeration of (Z/{p}^{k})^{n} is too large for desk scale")]
    EnumerationTooLarge { p: u64, n: u32, k: u32 },
    #[error("invalid element: {0}")]
    BadElement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
