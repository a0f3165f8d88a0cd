//! Witness-producing lifting algorithms for inverse limits of rings and for
//! multiplier rings, checked exactly on finite rings and on finitely
//! described countable rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`finring`] builds exact finite rings, ideals, quotients and morphisms
//!   and parses the ring-spec language.
//! * [`witness`] decides ring properties and produces certificates.
//! * [`lift`] pushes certificates up along a surjection.
//! * [`tower`] runs the lifting steps stage by stage over finite towers.
//! * [`mult`] computes multiplier rings through double centralizers.
//! * [`lazyring`] handles countable rings with finite-support elements,
//!   where statements are certified on explicit probes.
//!
//! ```
//! use ringlift::finring::make_cyclic;
//! use ringlift::witness::partial_inverse;
//!
//! let z6 = make_cyclic(6).unwrap();
//! assert_eq!(partial_inverse(&z6, 5), Some(5));
//! ```

pub mod budget;
mod error;
pub mod finring;
pub mod lazyring;
pub mod lift;
pub mod mult;
pub mod tower;
pub mod witness;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/finite-rings.md")]
    mod finite_rings {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/towers.md")]
    mod towers {}
    #[doc = include_str!("../../../book/src/multipliers.md")]
    mod multipliers {}
    #[doc = include_str!("../../../book/src/lazy-rings.md")]
    mod lazy_rings {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
