//! Desk-scale workbench for rapid-decay experiments on concrete groups.
//!
//! The crate has four subsystems:
//!
//! * [`group`] — exact group-element arithmetic for a registry of built-in
//!   models (free groups, `Z^d`, Heisenberg, `BS(1,2)`, `PGL_2(F_p[t,t^-1])`,
//!   finite tables, direct and free products), word metrics, ball/sphere
//!   enumeration, growth and distortion measurement.
//! * [`conv`] — sparse group-algebra functions over a generic coefficient
//!   ring, convolution, `l^1`/`l^2`/Sobolev norms, operator-norm lower
//!   bounds (witness quotients and truncated power iteration) and the
//!   lattice obstruction report.
//! * [`cube`] — one-skeletons of square complexes: hyperplanes, halfspaces,
//!   separation distance, intervals, medians, minimal hyperplane partitions,
//!   dimension via crossing cliques, and the stabilizer blow-up space.
//! * [`relhyp`] — finite truncations of coned-off Cayley graphs, coset
//!   penetration, empirical BCP constants, and the `V_delta`/`C_H`/`C(x,y)`
//!   machinery with its triple-intersection test.
//!
//! All scalar-carrying computations are generic over [`scalar::Coefficient`];
//! exact checks run over rationals, numerical estimation over `f64`. Concrete
//! aliases live at the crate root.

pub mod conv;
pub mod cube;
pub mod error;
pub mod fit;
pub mod group;
pub mod relhyp;
pub mod scalar;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::Ratio;

/// Exact rational scalar used wherever a computation must be bit-exact.
pub type Rational = Ratio<BigInt>;

/// Sparse function with `f64` values (numerical lane).
pub type RealFn = conv::SparseGroupFunction<f64>;
/// Sparse function with exact rational values.
pub type RationalFn = conv::SparseGroupFunction<Rational>;
/// Sparse function with complex `f64` values.
pub type ComplexFn = conv::SparseGroupFunction<Complex<f64>>;
/// Sparse function with exact complex rational values.
pub type RationalComplexFn = conv::SparseGroupFunction<Complex<Rational>>;
