//! Exact partition-function calculus for formal one- and two-matrix models.
//!
//! A formal matrix model is a power series in coupling constants defined
//! term by term through Wick's theorem. Its value admits several very
//! different-looking presentations: a ribbon-graph sum, matrix-derivative
//! and eigenvalue-derivative operator expressions, Slater and Hankel
//! determinants, and products of (bi)orthogonal polynomial norms. This
//! crate computes all of them with exact arithmetic, normalization
//! constants included, and checks that they agree coefficient by
//! coefficient.
//!
//! Modules follow the pipeline:
//!
//! * [`coeffring`]: exact scalars and truncated graded coupling series.
//! * [`wick`]: pairing enumeration, ribbon-graph data, the integral-side
//!   expansion, and the formal two-variable moment rules.
//! * [`entrycalc`]: derivative calculus on explicit matrix entries.
//! * [`eigencalc`]: eigenvalue-level operator calculus and Vandermonde
//!   manipulation.
//! * [`determinants`]: every determinant presentation plus the exact
//!   normalization-constant table.
//! * [`orthopoly`]: biorthogonal and symmetric orthogonal polynomial
//!   machinery over the differential bilinear forms.
//! * [`cli`]: configuration parsing, formulation suites, reports.
//!
//! The book under `book/` walks through the same material with runnable
//! snippets; those snippets are compiled and executed as part of
//! `cargo test --doc`.

pub mod caps;
pub mod cli;
pub mod coeffring;
pub mod determinants;
pub mod eigencalc;
pub mod entrycalc;
pub mod error;
pub mod orthopoly;
pub mod poly;
pub mod potential;
pub mod rat;
pub mod wick;

pub use caps::Caps;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(coefficients, "../../../book/src/coefficients.md");
    chapter!(wick, "../../../book/src/wick.md");
    chapter!(matrix_calculus, "../../../book/src/matrix-calculus.md");
    chapter!(eigenvalues, "../../../book/src/eigenvalues.md");
    chapter!(determinants, "../../../book/src/determinants.md");
    chapter!(orthogonal, "../../../book/src/orthogonal.md");
    chapter!(cli, "../../../book/src/cli.md");
}
