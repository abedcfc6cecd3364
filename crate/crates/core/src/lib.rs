//! Exact arithmetic for p-adic formal groups: group-law construction,
//! multiplication-by-p series, strictness of the reduced form system,
//! Eisenstein extension arithmetic with different ideals and the delta
//! function, Newton polygons, and torsion-root lifting in tame extensions.
//!
//! ```
//! use pfg_core::{FormalGroupLaw, PrimeConfig, PrimeContext, rat};
//! use pfg_core::strictness::{decide_strict, extract_forms};
//! use pfg_core::torsion::verify_tame_ramification;
//!
//! let ctx = PrimeContext::new(PrimeConfig::new(3, 1, 8)?)?;
//! let group = FormalGroupLaw::multiplicative(&ctx, 8)?;
//!
//! let forms = extract_forms(&group.mul_by_p()?)?;
//! assert!(decide_strict(&forms).is_strict);
//!
//! // [3](T) = 3T + 3T^2 + T^3 has one torsion slope 1/2; the p-torsion
//! // generates the tame quadratic extension cut out by Z^2 + 3.
//! let report = verify_tame_ramification(&group)?;
//! assert_eq!(report.e, 2);
//! assert!(report.tame);
//! assert_eq!(report.witnesses[0].min_valuation, rat(1, 2));
//! # Ok::<(), pfg_core::Error>(())
//! ```

pub mod error;
pub mod fq;
pub mod group;
pub mod matrix;
pub mod ramified;
pub mod scalar;
pub mod series;
pub mod strictness;
pub mod torsion;
pub mod valuation;

pub use error::{Error, Result};
pub use group::{AxiomReport, EllipticCoefficients, FormalGroupLaw, MulPSeries, Provenance};
pub use matrix::WMatrix;
pub use ramified::{DeltaReport, EisensteinExtension, Ext, RamifiedElement};
pub use scalar::{Ctx, PadicScalar, PrimeConfig, PrimeContext};
pub use strictness::{FormSystem, StrictnessVerdict};
pub use series::{Monomial, MultiSeries, SeriesTuple};
pub use valuation::{rat, Rational, Valuation};
