//! Fourier symbols of the lattice and continuum Hodge-Dirac operators.
//!
//! Under `F f(ξ) = h^n Σ_μ e^{-2πiξ·μ} f(μ)` and the scaling `Ũ_h`, the lattice
//! operator acts fiberwise as a `2^n x 2^n` matrix on `Λ = ⊕_j Λ^j`, ordered by
//! degree and then lexicographically. The `(j+1, j)` block sends `dx^I` to
//! `Σ_α c_α dx^α ∧ dx^I`, where `c_α = a_{h,α}(ξ) = (e^{2πihξ_α} - 1)/h` for the
//! lattice and `c_α = A_α(ξ) = 2πiξ_α` in the continuum; the `(j, j+1)` block is
//! its conjugate transpose.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::{basis, insertion_sign, InsertionFn, MultiIndex};
use crate::{binomial, check_mesh, check_spectral, C64};

const TAU: f64 = std::f64::consts::TAU;

/// A graded `2^n x 2^n` fiber matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolMatrix {
    n: usize,
    matrix: DMatrix<C64>,
    offsets: Vec<usize>,
}

/// `o_j = Σ_{k<j} C(n, k)` for `j = 0..=n+1`.
pub fn grading_offsets(n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n + 2);
    let mut acc = 0;
    out.push(0);
    for j in 0..=n {
        acc += binomial(n, j);
        out.push(acc);
    }
    out
}

impl SymbolMatrix {
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// The `(row_degree, col_degree)` block.
    pub fn block(&self, row_degree: usize, col_degree: usize) -> DMatrix<C64> {
        let (r0, r1) = (self.offsets[row_degree], self.offsets[row_degree + 1]);
        let (c0, c1) = (self.offsets[col_degree], self.offsets[col_degree + 1]);
        self.matrix.view((r0, c0), (r1 - r0, c1 - c0)).into_owned()
    }

    pub fn hermitian_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }
}

/// Assembles the symbol from per-direction coefficients `c_α`.
pub fn symbol_from_coefficients(n: usize, coeffs: &[C64]) -> Result<SymbolMatrix> {
    symbol_from_coefficients_with(n, coeffs, insertion_sign)
}

pub fn symbol_from_coefficients_with(
    n: usize,
    coeffs: &[C64],
    ins: InsertionFn,
) -> Result<SymbolMatrix> {
    if coeffs.len() != n {
        return Err(Error::DimensionMismatch(coeffs.len(), n));
    }
    let offsets = grading_offsets(n);
    let size = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(size, size);
    for j in 0..n {
        for (l, dims) in basis(n, j)?.iter().enumerate() {
            let idx = MultiIndex::new(n, dims.clone())?;
            let col = offsets[j] + l;
            for alpha in 1..=n {
                if idx.contains(alpha) {
                    continue;
                }
                let (sign, k) = ins(&idx, alpha)?;
                let row = offsets[j + 1] + k.offset();
                let v = sign.to_f64() * coeffs[alpha - 1];
                m[(row, col)] += v;
                m[(col, row)] += v.conj();
            }
        }
    }
    Ok(SymbolMatrix {
        n,
        matrix: m,
        offsets,
    })
}

/// `a_{h,l}(ξ) = (e^{2πihξ_l} - 1)/h`, evaluated as `2i sin(πhξ) e^{iπhξ}/h`.
pub fn lattice_coefficient(h: f64, xi: f64) -> C64 {
    let t = std::f64::consts::PI * h * xi;
    C64::new(0.0, 2.0 * t.sin() / h) * C64::from_polar(1.0, t)
}

/// `A_l(ξ) = 2πiξ_l`.
pub fn continuum_coefficient(xi: f64) -> C64 {
    C64::new(0.0, TAU * xi)
}

/// Fiber of `Ũ_h U (d + d*) U* Ũ_h*` at `ξ`.
pub fn discrete_symbol(n: usize, h: f64, xi: &[f64]) -> Result<SymbolMatrix> {
    check_mesh(h)?;
    let coeffs: Vec<C64> = xi.iter().map(|&x| lattice_coefficient(h, x)).collect();
    symbol_from_coefficients(n, &coeffs)
}

/// Fiber of the continuum operator at `ξ`.
pub fn continuum_symbol(n: usize, xi: &[f64]) -> Result<SymbolMatrix> {
    let coeffs: Vec<C64> = xi.iter().map(|&x| continuum_coefficient(x)).collect();
    symbol_from_coefficients(n, &coeffs)
}

/// `Γ = (-1)^j` on the degree-`j` block.
pub fn grading_matrix(n: usize) -> DMatrix<C64> {
    let offsets = grading_offsets(n);
    let mut g = DMatrix::<C64>::zeros(1 << n, 1 << n);
    for j in 0..=n {
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        for i in offsets[j]..offsets[j + 1] {
            g[(i, i)] = C64::new(s, 0.0);
        }
    }
    g
}

/// Scalars entering the fiber resolvents at `(h, z, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberScalars {
    pub h: f64,
    pub z: C64,
    pub xi: Vec<f64>,
    pub a: Vec<C64>,
    pub big_a: Vec<C64>,
    /// `r_z = Σ|a_l|² - z²`.
    pub r_z: C64,
    /// `R_z = 4π²|ξ|² - z²`.
    pub big_r_z: C64,
}

impl FiberScalars {
    pub fn new(h: f64, z: C64, xi: &[f64]) -> Result<Self> {
        check_mesh(h)?;
        let a: Vec<C64> = xi.iter().map(|&x| lattice_coefficient(h, x)).collect();
        let big_a: Vec<C64> = xi.iter().map(|&x| continuum_coefficient(x)).collect();
        let sa: f64 = a.iter().map(|c| c.norm_sqr()).sum();
        let sb: f64 = big_a.iter().map(|c| c.norm_sqr()).sum();
        Ok(Self {
            h,
            z,
            xi: xi.to_vec(),
            a,
            big_a,
            r_z: sa - z * z,
            big_r_z: sb - z * z,
        })
    }
}

/// `(S + z)/r_z` for the lattice symbol or `(S + z)/R_z` for the continuum one;
/// equals `(S - z)^{-1}` because `S² = Σ|c_l|²`.
pub fn fiber_resolvent(
    symbol: &SymbolMatrix,
    scalars: &FiberScalars,
    discrete: bool,
) -> Result<DMatrix<C64>> {
    let z = check_spectral(scalars.z)?;
    let denom = if discrete {
        scalars.r_z
    } else {
        scalars.big_r_z
    };
    let size = symbol.matrix.nrows();
    let mut m = symbol.matrix.clone();
    for i in 0..size {
        m[(i, i)] += z;
    }
    Ok(m.map(|c| c / denom))
}

/// `sqrt(Σ_l 4 sin²(πhξ_l)) / h`, the largest eigenvalue modulus of `H_h(ξ)`.
pub fn symbol_modulus(h: f64, xi: &[f64]) -> f64 {
    xi.iter()
        .map(|&x| lattice_coefficient(h, x).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Frequencies `ξ_l = k/(grid·h)`, `k = 0..grid`, along one axis.
fn sweep_axis(h: f64, grid: usize) -> Vec<f64> {
    (0..grid).map(|k| k as f64 / (grid as f64 * h)).collect()
}

/// Maximum of [`symbol_modulus`] over the product grid on `[0, 1/h)^n`.
///
/// The squared modulus is a sum of per-axis terms, so the maximum is taken axis
/// by axis without enumerating the product grid.
pub fn spectral_radius_sweep(n: usize, h: f64, grid: usize) -> Result<f64> {
    check_mesh(h)?;
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let best = sweep_axis(h, grid)
        .into_iter()
        .map(|x| lattice_coefficient(h, x).norm_sqr())
        .fold(0.0, f64::max);
    Ok((n as f64 * best).sqrt())
}

/// Streams `(ξ, modulus)` over the whole product grid in lexicographic order.
pub fn spectral_sweep_rows(
    n: usize,
    h: f64,
    grid: usize,
    mut sink: impl FnMut(&[f64], f64) -> std::io::Result<()>,
) -> Result<()> {
    check_mesh(h)?;
    let axis = sweep_axis(h, grid);
    let mut k = vec![0usize; n];
    let mut xi = vec![0.0; n];
    loop {
        for (x, &i) in xi.iter_mut().zip(&k) {
            *x = axis[i];
        }
        sink(&xi, symbol_modulus(h, &xi)).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut l = n;
        loop {
            if l == 0 {
                return Ok(());
            }
            l -= 1;
            k[l] += 1;
            if k[l] < grid {
                break;
            }
            k[l] = 0;
        }
    }
}
