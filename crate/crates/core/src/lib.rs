//! Discrete exterior calculus on cubical lattices `hZ^n`.
//!
//! The crate builds the oriented cube complex of `Z^n`, its cochain spaces with
//! measure `h^{-2j}`, the Hodge-Dirac operator `d + d*`, the equivalent picture
//! on lattice differential forms, the `2^n x 2^n` Fourier symbols of the discrete
//! and continuum operators, and a fiber-wise harness bounding the distance
//! between their resolvents as `h -> 0`. A periodic realization on `(Z_N)^n`
//! provides exact finite-dimensional checks.

pub mod cochains;
pub mod continuum_limit;
pub mod cube_complex;
pub mod error;
pub mod forms;
pub mod sampling;
pub mod symbols;
pub mod torus_lab;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use cochains::{Cochain, GradedCochain, PairSequence};
pub use continuum_limit::{ConvergenceReport, GridSpec, SymbolKind, WindowFunction};
pub use cube_complex::{IndexMap, OrientedCube, Sign, SignedCubeSet};
pub use error::{Error, Result};
pub use forms::{FormField, MultiIndex};
pub use symbols::{FiberScalars, SymbolMatrix};
pub use torus_lab::TorusComplex;

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn check_mesh(h: f64) -> Result<f64> {
    if h.is_finite() && h > 0.0 {
        Ok(h)
    } else {
        Err(Error::InvalidMesh(h))
    }
}

pub(crate) fn check_spectral(z: C64) -> Result<C64> {
    if z.im == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        Err(Error::RealSpectralParameter { re: z.re, im: z.im })
    } else {
        Ok(z)
    }
}
