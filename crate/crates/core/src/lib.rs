//! q-special functions, noncommutative rewriting and spectral numerics on the
//! quantum disc.
//!
//! The crate is organised bottom-up:
//!
//! * [`qseries`]: q-Pochhammer symbols, basic hypergeometric series, Jackson
//!   calculus, q-Gamma and q-exponentials.
//! * [`qorth`]: Askey-Wilson type orthogonal polynomial families.
//! * [`ncgroebner`]: Gröbner bases in free algebras over `Q(q^{1/2})`.
//! * [`qdisc`]: the quantum disc, its Fock representation, the quantum group
//!   action, the invariant integral and radial spectral theory.
//! * [`bergman`]: weighted Bergman spaces, Toeplitz operators, the Berezin
//!   transform and the Berezin star product.
//!
//! Everything is generic over a coefficient field implementing [`Scalar`].

pub mod bergman;
pub mod context;
pub mod error;
pub mod matrix;
pub mod ncgroebner;
pub mod poly;
pub mod qdisc;
pub mod qorth;
pub mod qseries;
pub mod quad;
pub mod ratfunc;
pub mod scalar;

pub use context::{Mode, QContext};
pub use error::{QError, Result};
pub use poly::UPoly;
pub use ratfunc::RatFunc;
pub use scalar::{rat, QuadExt, Scalar};
