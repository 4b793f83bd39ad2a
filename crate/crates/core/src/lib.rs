//! Computable ordinal collapsing.
//!
//! Coded linear orders and predilators, the Veblen term order Γ(X), term
//! systems ψ_ν(D) that realize ν-fixed points of a predilator, and the
//! algorithmic bridges between fixed points and Bachmann-Howard collapses.
//! Every decidable law is backed by an exhaustive checker over bounded
//! fragments.

pub mod check;
pub mod dilator;
pub mod gamma;
pub mod laws;
pub mod morphisms;
pub mod order;
pub mod psi;
pub mod syntax;

pub use check::{Report, Violation};
pub use dilator::{
    Affine, AffineElem, Compose, DilElem, GammaDil, Nf, Omega, Predilator, ReversedOmega,
};
pub use gamma::{Gamma, GammaTerm, PreTerm};
pub use order::{FiniteOrder, LinearOrder, Nu, NuElem, Words};
pub use syntax::ParseError;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub mod intro {}
    #[doc = include_str!("../../../book/src/orders.md")]
    pub mod orders {}
    #[doc = include_str!("../../../book/src/dilators.md")]
    pub mod dilators {}
    #[doc = include_str!("../../../book/src/gamma.md")]
    pub mod gamma {}
    #[doc = include_str!("../../../book/src/psi.md")]
    pub mod psi {}
    #[doc = include_str!("../../../book/src/morphisms.md")]
    pub mod morphisms {}
}
