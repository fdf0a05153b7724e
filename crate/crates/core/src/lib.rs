//! Bound states of a square well with a logarithmic central spike,
//! `−ψ'' − 2g ln|x| ψ = E ψ` on `[−1, 1]` with `ψ(±1) = 0`.
//!
//! - [`perturb`]: first-order energy coefficients in closed form and by
//!   quadrature, and where the first-order lines cross.
//! - [`shooting`]: eigenvalues and wavefunctions by shooting from the wall,
//!   plus rectangular-barrier and WKB approximations.
//! - [`transformed`]: the same problem in the variable `x = −e^{−λ}`.
//! - [`integrate`]: the adaptive Runge–Kutta solver for `y'' = c(x) y`.
//! - [`specfun`]: the sine integral.
//!
//! A guide with worked examples lives in `book/`.

pub mod error;
pub mod integrate;
pub mod perturb;
mod quad;
pub mod shooting;
pub mod specfun;
pub mod transformed;

// The book's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/perturbation.md")]
    mod perturbation {}
    #[doc = include_str!("../../../book/src/shooting.md")]
    mod shooting {}
    #[doc = include_str!("../../../book/src/approximations.md")]
    mod approximations {}
    #[doc = include_str!("../../../book/src/transformed.md")]
    mod transformed {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
