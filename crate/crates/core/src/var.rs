//! Variable symbols for the polynomial ring.
//!
//! The ring uses a fixed global variable order `k < x < w < v < y < t`.
//! Every module agrees on this order, so exponent vectors, leading terms
//! and serialized polynomials are unambiguous.

use crate::error::{Error, Result};

/// Number of symbols in the global variable pool.
pub const NVARS: usize = 6;

/// A variable symbol. The declaration order is the global ring order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    K = 0,
    X = 1,
    W = 2,
    V = 3,
    Y = 4,
    T = 5,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::K, Var::X, Var::W, Var::V, Var::Y, Var::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Var::K => "k",
            Var::X => "x",
            Var::W => "w",
            Var::V => "v",
            Var::Y => "y",
            Var::T => "t",
        }
    }

    pub fn parse(s: &str) -> Result<Var> {
        match s {
            "k" => Ok(Var::K),
            "x" => Ok(Var::X),
            "w" => Ok(Var::W),
            "v" => Ok(Var::V),
            "y" => Ok(Var::Y),
            "t" => Ok(Var::T),
            other => Err(Error::Structural(format!("unknown variable `{other}`"))),
        }
    }
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Exponent vector over the global variable pool, indexed by [`Var::index`].
pub type Expos = [u16; NVARS];
