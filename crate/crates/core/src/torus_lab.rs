//! The cube complex of the discrete torus `(Z_N)^n` as explicit matrices.
//!
//! Degree-`j` cubes are enumerated as `lin(μ)·C(n,j) + rank(I)` with
//! `lin(μ) = Σ_l μ_l N^{l-1}`. Matrices are written in the orthonormal bases
//! `h^j δ_s`, where `d_j` becomes `d_j/h` and `d_j*` its transpose, so the
//! Hodge-Dirac matrix is real symmetric.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use sprs::{CsMat, TriMat};

use crate::cube_complex::OrientedCube;
use crate::error::{Error, Result};
use crate::forms::{basis, MultiIndex};
use crate::{binomial, check_mesh};

/// Relative threshold below which singular values and eigenvalues count as zero.
pub const RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct TorusComplex {
    n: usize,
    period: usize,
    mesh: f64,
    d: Vec<CsMat<f64>>,
}

impl TorusComplex {
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Number of degree-`j` cubes, `C(n,j)·N^n`.
    pub fn dim(&self, j: usize) -> usize {
        binomial(self.n, j) * self.period.pow(self.n as u32)
    }

    /// Total dimension `2^n N^n`.
    pub fn total_dim(&self) -> usize {
        (0..=self.n).map(|j| self.dim(j)).sum()
    }

    /// Incidence matrix of `d_j` with entries in `{0, ±1}`.
    pub fn d(&self, j: usize) -> Result<&CsMat<f64>> {
        self.d.get(j).ok_or(Error::DegreeOutOfRange {
            op: "d",
            degree: j,
            ambient_dim: self.n,
        })
    }

    /// `d_j*` in the cube basis: `h^{-2} d_{j-1}^T`, mapping degree `j` to `j - 1`.
    pub fn d_star(&self, j: usize) -> Result<CsMat<f64>> {
        if j == 0 || j > self.n {
            return Err(Error::DegreeOutOfRange {
                op: "d_star",
                degree: j,
                ambient_dim: self.n,
            });
        }
        let t = self.d[j - 1].transpose_view().to_csr();
        Ok(t.map(|v| v * self.mesh.powi(-2)))
    }

    pub fn linear_index(&self, mu: &[i64]) -> usize {
        let n = self.period as i64;
        mu.iter().rev().fold(0usize, |acc, &m| {
            acc * self.period + m.rem_euclid(n) as usize
        })
    }

    /// Index of a positive cube in the degree-`j` basis; coordinates wrap.
    pub fn cube_index(&self, cube: &OrientedCube) -> Result<usize> {
        let idx = MultiIndex::new(self.n, cube.dims().to_vec())?;
        Ok(self.linear_index(cube.floor()) * binomial(self.n, cube.degree()) + idx.offset())
    }

    fn point(&self, lin: usize) -> Vec<i64> {
        let mut rest = lin;
        (0..self.n)
            .map(|_| {
                let c = rest % self.period;
                rest /= self.period;
                c as i64
            })
            .collect()
    }

    /// Positive cube for a basis index.
    pub fn cube_at(&self, j: usize, index: usize) -> Result<OrientedCube> {
        let width = binomial(self.n, j);
        let dims = basis(self.n, j)?[index % width].clone();
        OrientedCube::positive(self.point(index / width), dims)
    }

    /// Symmetric Hodge-Dirac matrix: blocks `d_j/h` below and `d_j^T/h` above the
    /// diagonal.
    pub fn dirac_matrix(&self) -> CsMat<f64> {
        let offsets = self.offsets();
        let size = self.total_dim();
        let mut tri = TriMat::new((size, size));
        for (j, d) in self.d.iter().enumerate() {
            for (v, (r, c)) in d.iter() {
                let row = offsets[j + 1] + r;
                let col = offsets[j] + c;
                tri.add_triplet(row, col, v / self.mesh);
                tri.add_triplet(col, row, v / self.mesh);
            }
        }
        tri.to_csr()
    }

    /// Start of each degree block in [`TorusComplex::dirac_matrix`].
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = vec![0];
        for j in 0..=self.n {
            out.push(out[j] + self.dim(j));
        }
        out
    }

    /// `Δ_j = h^{-2}(d_j^T d_j + d_{j-1} d_{j-1}^T)` in the orthonormal basis.
    pub fn laplacian_dense(&self, j: usize) -> Result<DMatrix<f64>> {
        if j > self.n {
            return Err(Error::DegreeOutOfRange {
                op: "laplacian",
                degree: j,
                ambient_dim: self.n,
            });
        }
        let size = self.dim(j);
        let mut lap = DMatrix::<f64>::zeros(size, size);
        if j < self.n {
            let d = to_dense(&self.d[j]);
            lap += d.transpose() * d;
        }
        if j > 0 {
            let d = to_dense(&self.d[j - 1]);
            lap += &d * d.transpose();
        }
        Ok(lap / (self.mesh * self.mesh))
    }

    /// `dim Ker Δ_j` for `j = 0..=n`.
    pub fn harmonic_dimensions(&self) -> Result<Vec<usize>> {
        (0..=self.n)
            .map(|j| {
                let eig = SymmetricEigen::new(self.laplacian_dense(j)?).eigenvalues;
                let top = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let cutoff = RANK_TOLERANCE * top.max(f64::MIN_POSITIVE);
                Ok(eig.iter().filter(|v| v.abs() <= cutoff).count())
            })
            .collect()
    }

    /// Orthogonal splitting of a degree-`j` vector (orthonormal coordinates) into
    /// `Ran d_{j-1}`, `Ker Δ_j` and `Ran d_j*`.
    pub fn hodge_split(&self, f: &DVector<f64>, j: usize) -> Result<HodgeSplit> {
        if j > self.n {
            return Err(Error::DegreeOutOfRange {
                op: "hodge_split",
                degree: j,
                ambient_dim: self.n,
            });
        }
        if f.len() != self.dim(j) {
            return Err(Error::DimensionMismatch(f.len(), self.dim(j)));
        }
        let zero = DVector::<f64>::zeros(f.len());
        let exact = if j > 0 {
            project_onto_range(&to_dense(&self.d[j - 1]), f)
        } else {
            zero.clone()
        };
        let coexact = if j < self.n {
            project_onto_range(&to_dense(&self.d[j]).transpose(), f)
        } else {
            zero
        };
        let harmonic = f - &exact - &coexact;
        Ok(HodgeSplit {
            exact,
            harmonic,
            coexact,
        })
    }

    /// Sorted eigenvalues of [`TorusComplex::dirac_matrix`].
    ///
    /// The matrix is first checked to commute with every lattice shift; it is
    /// then block diagonal in the Bloch basis, and each `2^n x 2^n` block at
    /// `k ∈ (Z_N)^n` is read off the rows at `μ = 0` and diagonalized.
    pub fn dirac_spectrum(&self) -> Result<Vec<f64>> {
        let dmat = self.dirac_matrix();
        let offsets = self.offsets();
        let widths: Vec<usize> = (0..=self.n).map(|j| binomial(self.n, j)).collect();
        let locate = |g: usize| -> (usize, usize, usize) {
            let j = (0..=self.n).rfind(|&j| offsets[j] <= g).expect("in range");
            let local = g - offsets[j];
            (j, local / widths[j], local % widths[j])
        };
        let global = |j: usize, lin: usize, r: usize| offsets[j] + lin * widths[j] + r;

        for l in 0..self.n {
            let shift = |g: usize| {
                let (j, lin, r) = locate(g);
                let mut mu = self.point(lin);
                mu[l] += 1;
                global(j, self.linear_index(&mu), r)
            };
            for (v, (r, c)) in dmat.iter() {
                let moved = dmat.get(shift(r), shift(c)).copied().unwrap_or(0.0);
                if moved != *v {
                    return Err(Error::InvalidArgument(format!(
                        "assembled operator is not invariant under the shift along direction {}",
                        l + 1
                    )));
                }
            }
        }

        let fiber = 1usize << self.n;
        let mut block_row = vec![0usize; fiber];
        let mut b = 0;
        for j in 0..=self.n {
            for r in 0..widths[j] {
                block_row[b] = global(j, 0, r);
                b += 1;
            }
        }
        let fiber_offsets: Vec<usize> = {
            let mut o = vec![0];
            for j in 0..=self.n {
                o.push(o[j] + widths[j]);
            }
            o
        };
        let entries: Vec<Vec<(usize, Vec<i64>, f64)>> = block_row
            .iter()
            .map(|&g| {
                let row = dmat.outer_view(g).expect("row exists");
                row.iter()
                    .map(|(c, &v)| {
                        let (j, lin, r) = locate(c);
                        (fiber_offsets[j] + r, self.point(lin), v)
                    })
                    .collect()
            })
            .collect();

        let cells = self.period.pow(self.n as u32);
        let mut spectrum = Vec::with_capacity(cells * fiber);
        for klin in 0..cells {
            let k = self.point(klin);
            let mut m = DMatrix::<Complex64>::zeros(fiber, fiber);
            for (a, row) in entries.iter().enumerate() {
                for (bcol, mu, v) in row {
                    let phase: f64 = k
                        .iter()
                        .zip(mu)
                        .map(|(kk, mm)| (kk * mm) as f64)
                        .sum::<f64>()
                        * std::f64::consts::TAU
                        / self.period as f64;
                    m[(a, *bcol)] += Complex64::from_polar(*v, phase);
                }
            }
            spectrum.extend(m.symmetric_eigenvalues().iter().copied());
        }
        spectrum.sort_by(f64::total_cmp);
        Ok(spectrum)
    }
}

/// Output of [`TorusComplex::hodge_split`].
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeSplit {
    pub exact: DVector<f64>,
    pub harmonic: DVector<f64>,
    pub coexact: DVector<f64>,
}

/// Dense copy of a sparse matrix.
pub fn to_dense(m: &CsMat<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::<f64>::zeros(m.rows(), m.cols());
    for (v, (r, c)) in m.iter() {
        out[(r, c)] += v;
    }
    out
}

/// Orthogonal projection onto `Ran a`, through the eigenvectors of `a^T a`.
fn project_onto_range(a: &DMatrix<f64>, f: &DVector<f64>) -> DVector<f64> {
    let eig = SymmetricEigen::new(a.transpose() * a);
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = RANK_TOLERANCE * top;
    let atf = a.transpose() * f;
    let mut coeffs = DVector::<f64>::zeros(a.ncols());
    for (k, lam) in eig.eigenvalues.iter().enumerate() {
        if *lam > cutoff {
            let v = eig.eigenvectors.column(k);
            coeffs += v * (v.dot(&atf) / lam);
        }
    }
    a * coeffs
}

/// Builds the periodic complex; `N >= 3` keeps every cube embedded.
pub fn assemble(n: usize, period: usize, h: f64) -> Result<TorusComplex> {
    check_mesh(h)?;
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if period < 3 {
        return Err(Error::PeriodTooSmall(period));
    }
    let mut tc = TorusComplex {
        n,
        period,
        mesh: h,
        d: Vec::with_capacity(n),
    };
    for j in 0..n {
        let rows = tc.dim(j + 1);
        let cols = tc.dim(j);
        let mut tri = TriMat::new((rows, cols));
        for row in 0..rows {
            let s = tc.cube_at(j + 1, row)?;
            for face in s.boundary()?.iter() {
                let (canon, sign) = face.canonical();
                tri.add_triplet(row, tc.cube_index(&canon)?, sign.to_f64());
            }
        }
        tc.d.push(tri.to_csr());
    }
    Ok(tc)
}

/// `±(2/h) sqrt(Σ_l sin²(πk_l/N))` for every `k`, each sign with multiplicity
/// `2^{n-1}`, sorted.
pub fn closed_form_spectrum(n: usize, period: usize, h: f64) -> Vec<f64> {
    let cells = period.pow(n as u32);
    let mult = 1usize << (n - 1);
    let mut out = Vec::with_capacity(cells << n);
    for klin in 0..cells {
        let mut rest = klin;
        let mut s = 0.0;
        for _ in 0..n {
            let k = rest % period;
            rest /= period;
            s += (std::f64::consts::PI * k as f64 / period as f64)
                .sin()
                .powi(2);
        }
        let v = 2.0 * s.sqrt() / h;
        for _ in 0..mult {
            out.push(v);
            out.push(-v);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `row col value` lines.
pub fn to_triplets(m: &CsMat<f64>) -> String {
    let mut s = String::new();
    for (v, (r, c)) in m.iter() {
        s.push_str(&format!("{r} {c} {v}\n"));
    }
    s
}
