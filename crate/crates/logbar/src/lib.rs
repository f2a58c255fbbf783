//! Pointed bar complexes of logarithmic de Rham algebras on punctured
//! projective lines, with tangential basepoints and a numerical realization of
//! the period pairing by regularized iterated integrals.
//!
//! The crate is organized bottom-up:
//!
//! * [`exact`] — arbitrary-precision rational/Gaussian-rational scalars and
//!   sparse exact linear algebra (rank, kernel bases).
//! * [`geom`] — scenes (punctured lines), logarithmic one-forms, tangential
//!   basepoints, monomial maps between SNC local models, and functoriality of
//!   tangential data under maps of punctured lines.
//! * [`words`] — the shuffle Hopf algebra of bar words: shuffle product,
//!   deconcatenation coproduct, antipode, counit, and an exhaustive checker
//!   for the Hopf axioms.
//! * [`cdga`] — finitely presented commutative differential graded algebras,
//!   their validation, reduced bar complexes with length filtration, and the
//!   degree-zero bar cohomology.
//! * [`path`] — piecewise paths (lines, arcs, cubic Béziers) with tangential
//!   endpoint data, validation with certified puncture clearance, reversal,
//!   and composition.
//! * [`quad`] / [`regint`] — panel-based Gauss–Legendre transport of iterated
//!   integrals, regularization at tangential basepoints, and the period
//!   pairing.
//! * [`workspace`] / [`suite`] — JSON workspace formats, the CLI surface, and
//!   the acceptance suite.

pub mod cdga;
pub mod exact;
pub mod geom;
pub mod jsonout;
pub mod path;
pub mod quad;
pub mod regint;
pub mod suite;
pub mod words;
pub mod workspace;
