//! Resource caps for the combinatorial enumerations.
//!
//! Pairing counts grow as (2m-1)!! and entry-monomial counts grow
//! combinatorially with matrix size, so the expensive entry points take
//! explicit caps. The defaults are sized for desk-scale verification and
//! can be lifted deliberately.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest matrix size accepted by entry- and eigenvalue-level drivers.
    pub max_matrix_size: usize,
    /// Largest truncation order accepted by the CLI.
    pub max_order: u32,
    /// Largest number of half-edges a pairing enumeration may see.
    pub max_half_edges: u32,
    /// Largest total degree an entry polynomial may reach.
    pub max_entry_degree: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_matrix_size: 4,
            max_order: 4,
            max_half_edges: 16,
            max_entry_degree: 24,
        }
    }
}

impl Caps {
    /// Caps high enough to be out of the way. Factorial blowups become the
    /// caller's problem; this is the `--unsafe-caps` path.
    pub fn unrestricted() -> Self {
        Caps {
            max_matrix_size: 64,
            max_order: 64,
            max_half_edges: 64,
            max_entry_degree: 4096,
        }
    }
}
