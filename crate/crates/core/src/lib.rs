//! Exact atom enumeration for root-closed submonoids of ℤ².
//!
//! A root-closed monoid `H` with quotient group ℤ² is the set of lattice
//! points of a planar convex cone with apex at the origin. This crate
//! computes the complete set of atoms (irreducible elements) of any such
//! monoid:
//!
//! * [`exact`] — exact arithmetic over rationals and real quadratic
//!   irrationals; every inequality in the library reduces to an exact sign
//!   computation here. No floating point participates in any decision.
//! * [`contfrac`] — regular continued fraction expansions, convergents and
//!   second convergents (intermediate fractions).
//! * [`monoid`] — the four slope-bounded monoid families between the x-axis
//!   and a line of slope `alpha`, with closed-form atom enumeration.
//! * [`cone`] — classification of an arbitrary cone into one of seven
//!   canonical shapes via a unimodular change of basis, atom enumeration in
//!   canonical position and pullback, geometric property flags.
//! * [`oracle`] — independent brute-force ground truth used to verify the
//!   closed-form enumerators. It shares only the exact arithmetic layer
//!   with them, never the enumeration logic.
//!
//! The crate is `no_std` (with `alloc`); all parsing, file formats, and the
//! command-line front end live in the companion `coneatoms` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod contfrac;
pub mod cone;
pub mod exact;
pub mod monoid;
pub mod oracle;
pub mod unimodular;

pub use exact::{ExactError, ExactReal, LatticePoint};
pub use unimodular::{apply_unimodular, Unimodular};

#[cfg(test)]
mod thread_safety {
    // All values are immutable after construction; they may be shared and
    // sent freely. The lazily grown convergent table is single-owner.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn public_types_are_send_and_sync() {
        assert_send_sync::<crate::ExactReal>();
        assert_send_sync::<crate::LatticePoint>();
        assert_send_sync::<crate::Unimodular>();
        assert_send_sync::<crate::contfrac::CfExpansion>();
        assert_send_sync::<crate::contfrac::ConvergentTable>();
        assert_send_sync::<crate::monoid::SpecialMonoid>();
        assert_send_sync::<crate::monoid::AtomReport>();
        assert_send_sync::<crate::cone::ConeSpec>();
        assert_send_sync::<crate::cone::Classification>();
    }
}
