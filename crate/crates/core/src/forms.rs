//! Lattice differential forms `Ω^j` on `Z^n` with mesh `h`.
//!
//! A form is stored pointwise as the coefficient vector `(ω_I(μ))_I` over the
//! multi-indices of degree `j` in lexicographic order. The weighted inner product
//! carries `h^{-2j}`, matching `ℓ²(X_h^j)` under [`u_map`].

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cochains::Cochain;
use crate::cube_complex::{combinations, OrientedCube, Sign};
use crate::error::{Error, Result};
use crate::{binomial, check_mesh, C64};

/// Largest ambient dimension with precomputed rank tables.
pub const MAX_DIM: usize = 16;

struct RankTable {
    by_degree: Vec<Vec<Vec<usize>>>,
    rank_of_mask: Vec<u32>,
}

static TABLES: [OnceLock<RankTable>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];

fn mask_of(dims: &[usize]) -> usize {
    dims.iter().fold(0, |m, d| m | 1 << (d - 1))
}

fn table(n: usize) -> Result<&'static RankTable> {
    if n > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "ambient dimension {n} exceeds {MAX_DIM}"
        )));
    }
    Ok(TABLES[n].get_or_init(|| {
        let by_degree: Vec<Vec<Vec<usize>>> = (0..=n).map(|j| combinations(n, j)).collect();
        let mut rank_of_mask = vec![0u32; 1 << n];
        for list in &by_degree {
            for (r, dims) in list.iter().enumerate() {
                rank_of_mask[mask_of(dims)] = r as u32;
            }
        }
        RankTable {
            by_degree,
            rank_of_mask,
        }
    }))
}

/// The lexicographically ordered basis `I^j_1 < ... < I^j_{C(n,j)}`.
pub fn basis(n: usize, j: usize) -> Result<&'static [Vec<usize>]> {
    let t = table(n)?;
    t.by_degree
        .get(j)
        .map(Vec::as_slice)
        .ok_or(Error::DegreeOutOfRange {
            op: "basis",
            degree: j,
            ambient_dim: n,
        })
}

/// A strictly increasing multi-index `I ∈ P^{j,n}_+`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    ambient_dim: usize,
    dims: Vec<usize>,
}

impl MultiIndex {
    pub fn new(ambient_dim: usize, dims: Vec<usize>) -> Result<Self> {
        if ambient_dim > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "ambient dimension {ambient_dim} exceeds {MAX_DIM}"
            )));
        }
        if dims.iter().any(|&d| d == 0 || d > ambient_dim) || dims.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidIndexMap(format!(
                "{dims:?} is not increasing within 1..={ambient_dim}"
            )));
        }
        Ok(Self { ambient_dim, dims })
    }

    /// The `rank`-th multi-index of degree `j`, counting from 1.
    pub fn from_rank(ambient_dim: usize, degree: usize, rank: usize) -> Result<Self> {
        let list = basis(ambient_dim, degree)?;
        if rank == 0 || rank > list.len() {
            return Err(Error::IndexOutOfRange {
                index: rank,
                len: list.len(),
            });
        }
        Ok(Self {
            ambient_dim,
            dims: list[rank - 1].clone(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Lexicographic rank in `1..=C(n, j)`.
    pub fn rank(&self) -> usize {
        self.offset() + 1
    }

    /// Zero-based position in the coefficient vector.
    pub fn offset(&self) -> usize {
        table(self.ambient_dim)
            .expect("dimension checked on construction")
            .rank_of_mask[mask_of(&self.dims)] as usize
    }

    /// `J_I`, the increasing complement.
    pub fn complement(&self) -> MultiIndex {
        Self {
            ambient_dim: self.ambient_dim,
            dims: (1..=self.ambient_dim)
                .filter(|d| !self.dims.contains(d))
                .collect(),
        }
    }

    pub fn contains(&self, alpha: usize) -> bool {
        self.dims.contains(&alpha)
    }
}

/// Reorders `dx^{seq(1)} ∧ ... ∧ dx^{seq(k)}` into `±dx^I`; `None` if a direction
/// repeats.
pub fn wedge_basis(ambient_dim: usize, seq: &[usize]) -> Result<Option<(Sign, MultiIndex)>> {
    let mut inversions = 0usize;
    for (i, a) in seq.iter().enumerate() {
        for b in &seq[i + 1..] {
            if a == b {
                return Ok(None);
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    let mut dims = seq.to_vec();
    dims.sort_unstable();
    Ok(Some((
        Sign::from_parity(inversions),
        MultiIndex::new(ambient_dim, dims)?,
    )))
}

/// `dx^α ∧ dx^I = (-1)^p dx^{I'}` with `p = #{i : I(i) < α}` and `I'` the sorted
/// insertion.
pub fn insertion_sign(index: &MultiIndex, alpha: usize) -> Result<(Sign, MultiIndex)> {
    if alpha == 0 || alpha > index.ambient_dim {
        return Err(Error::IndexOutOfRange {
            index: alpha,
            len: index.ambient_dim,
        });
    }
    if index.contains(alpha) {
        return Err(Error::DirectionPresent(alpha));
    }
    let p = index.dims.iter().filter(|&&d| d < alpha).count();
    let mut dims = index.dims.clone();
    dims.insert(p, alpha);
    Ok((
        Sign::from_parity(p),
        MultiIndex {
            ambient_dim: index.ambient_dim,
            dims,
        },
    ))
}

/// Signature shared by [`insertion_sign`] and substitutes used for fault injection.
pub type InsertionFn = fn(&MultiIndex, usize) -> Result<(Sign, MultiIndex)>;

fn unit_step(n: usize, alpha: usize, step: i64) -> impl Fn(&[i64]) -> Vec<i64> {
    move |mu: &[i64]| {
        let mut v = mu.to_vec();
        debug_assert_eq!(v.len(), n);
        v[alpha - 1] += step;
        v
    }
}

/// A finitely supported section `μ ↦ Σ_I ω_I(μ) dx^I`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormField {
    ambient_dim: usize,
    degree: usize,
    mesh: f64,
    coeffs: BTreeMap<Vec<i64>, Vec<C64>>,
}

type Coeffs = BTreeMap<Vec<i64>, Vec<C64>>;

fn scatter(map: &mut Coeffs, width: usize, mu: Vec<i64>, offset: usize, v: C64) {
    map.entry(mu).or_insert_with(|| vec![C64::default(); width])[offset] += v;
}

fn prune(map: &mut Coeffs) {
    map.retain(|_, v| v.iter().any(|c| *c != C64::default()));
}

impl FormField {
    pub fn new(ambient_dim: usize, degree: usize, mesh: f64) -> Result<Self> {
        check_mesh(mesh)?;
        if degree > ambient_dim {
            return Err(Error::DegreeOutOfRange {
                op: "form",
                degree,
                ambient_dim,
            });
        }
        table(ambient_dim)?;
        Ok(Self {
            ambient_dim,
            degree,
            mesh,
            coeffs: BTreeMap::new(),
        })
    }

    /// `value · dx^I` concentrated at `μ`.
    pub fn monomial(mu: Vec<i64>, index: &MultiIndex, mesh: f64, value: C64) -> Result<Self> {
        let mut w = Self::new(index.ambient_dim, index.degree(), mesh)?;
        w.set(&mu, index, value)?;
        Ok(w)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Length of the coefficient vector, `C(n, j)`.
    pub fn width(&self) -> usize {
        binomial(self.ambient_dim, self.degree)
    }

    fn with_same_shape(&self, degree: usize) -> FormField {
        Self {
            ambient_dim: self.ambient_dim,
            degree,
            mesh: self.mesh,
            coeffs: BTreeMap::new(),
        }
    }

    fn check_index(&self, mu: &[i64], index: &MultiIndex) -> Result<()> {
        if mu.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(mu.len(), self.ambient_dim));
        }
        if index.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch(
                index.ambient_dim,
                self.ambient_dim,
            ));
        }
        if index.degree() != self.degree {
            return Err(Error::DegreeMismatch(index.degree(), self.degree));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &FormField) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(
                self.ambient_dim,
                other.ambient_dim,
            ));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.mesh != other.mesh {
            return Err(Error::MeshMismatch(self.mesh, other.mesh));
        }
        Ok(())
    }

    pub fn get(&self, mu: &[i64], index: &MultiIndex) -> Result<C64> {
        self.check_index(mu, index)?;
        Ok(self
            .coeffs
            .get(mu)
            .map(|v| v[index.offset()])
            .unwrap_or_default())
    }

    pub fn set(&mut self, mu: &[i64], index: &MultiIndex, value: C64) -> Result<()> {
        self.check_index(mu, index)?;
        let width = self.width();
        self.coeffs
            .entry(mu.to_vec())
            .or_insert_with(|| vec![C64::default(); width])[index.offset()] = value;
        prune(&mut self.coeffs);
        Ok(())
    }

    /// Coefficient vector at `μ`, if nonzero.
    pub fn at(&self, mu: &[i64]) -> Option<&[C64]> {
        self.coeffs.get(mu).map(Vec::as_slice)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<i64>, &Vec<C64>)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().flatten().all(|c| *c == C64::default())
    }

    /// `Σ_μ Σ_I ω_I(μ) conj(η_I(μ))`.
    pub fn inner_unweighted(&self, other: &FormField) -> Result<C64> {
        self.check_compatible(other)?;
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(mu, v)| {
                other
                    .coeffs
                    .get(mu)
                    .map(|w| v.iter().zip(w).map(|(a, b)| a * b.conj()).sum::<C64>())
            })
            .sum())
    }

    /// The `ℓ²(hZ^n; Λ^j)` product, weighted by `h^{-2j}`.
    pub fn inner(&self, other: &FormField) -> Result<C64> {
        Ok(self.inner_unweighted(other)? * self.mesh.powi(-2 * self.degree as i32))
    }

    pub fn norm(&self) -> f64 {
        self.inner(self)
            .map(|c| c.re.max(0.0).sqrt())
            .unwrap_or(0.0)
    }

    pub fn scaled(&self, c: C64) -> FormField {
        let mut out = self.clone();
        for v in out.coeffs.values_mut().flatten() {
            *v *= c;
        }
        prune(&mut out.coeffs);
        out
    }

    pub fn axpy(&self, c: C64, other: &FormField) -> Result<FormField> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        let width = self.width();
        for (mu, w) in &other.coeffs {
            let slot = out
                .coeffs
                .entry(mu.clone())
                .or_insert_with(|| vec![C64::default(); width]);
            for (a, b) in slot.iter_mut().zip(w) {
                *a += c * b;
            }
        }
        prune(&mut out.coeffs);
        Ok(out)
    }

    pub fn add(&self, other: &FormField) -> Result<FormField> {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &FormField) -> Result<FormField> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    pub fn max_abs_diff(&self, other: &FormField) -> Result<f64> {
        let d = self.sub(other)?;
        Ok(d.coeffs
            .values()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max))
    }

    /// Pointwise `η ∧ ω`.
    pub fn wedge(&self, other: &FormField) -> Result<FormField> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(
                self.ambient_dim,
                other.ambient_dim,
            ));
        }
        if self.mesh != other.mesh {
            return Err(Error::MeshMismatch(self.mesh, other.mesh));
        }
        let degree = self.degree + other.degree;
        if degree > self.ambient_dim {
            return Err(Error::DegreeOutOfRange {
                op: "wedge",
                degree,
                ambient_dim: self.ambient_dim,
            });
        }
        let n = self.ambient_dim;
        let left = basis(n, self.degree)?;
        let right = basis(n, other.degree)?;
        let mut out = self.with_same_shape(degree);
        let width = out.width();
        for (mu, v) in &self.coeffs {
            let Some(w) = other.coeffs.get(mu) else {
                continue;
            };
            for (a, ia) in v.iter().zip(left) {
                if *a == C64::default() {
                    continue;
                }
                for (b, ib) in w.iter().zip(right) {
                    let seq: Vec<usize> = ia.iter().chain(ib).copied().collect();
                    if let Some((sign, k)) = wedge_basis(n, &seq)? {
                        scatter(
                            &mut out.coeffs,
                            width,
                            mu.clone(),
                            k.offset(),
                            sign.to_f64() * a * b,
                        );
                    }
                }
            }
        }
        prune(&mut out.coeffs);
        Ok(out)
    }

    /// `*dx^I = sign(I J_I) dx^{J_I}`.
    pub fn hodge_star(&self) -> FormField {
        let n = self.ambient_dim;
        let mut out = self.with_same_shape(n - self.degree);
        let width = out.width();
        let list = basis(n, self.degree).expect("checked on construction");
        let images: Vec<(Sign, usize)> = list
            .iter()
            .map(|dims| {
                let i = MultiIndex::new(n, dims.clone()).expect("basis element");
                let j = i.complement();
                let seq: Vec<usize> = i.dims.iter().chain(&j.dims).copied().collect();
                let (sign, _) = wedge_basis(n, &seq).expect("valid").expect("no repeats");
                (sign, j.offset())
            })
            .collect();
        for (mu, v) in &self.coeffs {
            for (c, (sign, off)) in v.iter().zip(&images) {
                scatter(&mut out.coeffs, width, mu.clone(), *off, sign.to_f64() * c);
            }
        }
        prune(&mut out.coeffs);
        out
    }

    fn difference_d(&self, op: &'static str, ins: InsertionFn, forward: bool) -> Result<FormField> {
        let n = self.ambient_dim;
        if self.degree >= n {
            return Err(Error::DegreeOutOfRange {
                op,
                degree: self.degree,
                ambient_dim: n,
            });
        }
        let list = basis(n, self.degree)?;
        let mut out = self.with_same_shape(self.degree + 1);
        let width = out.width();
        for (mu, v) in &self.coeffs {
            for (c, dims) in v.iter().zip(list) {
                if *c == C64::default() {
                    continue;
                }
                let idx = MultiIndex::new(n, dims.clone())?;
                for alpha in 1..=n {
                    if idx.contains(alpha) {
                        continue;
                    }
                    let (sign, k) = ins(&idx, alpha)?;
                    let s = sign.to_f64() * c;
                    let off = k.offset();
                    if forward {
                        // ω(μ+δα) - ω(μ)
                        scatter(&mut out.coeffs, width, mu.clone(), off, -s);
                        scatter(&mut out.coeffs, width, unit_step(n, alpha, -1)(mu), off, s);
                    } else {
                        // ω(μ) - ω(μ-δα)
                        scatter(&mut out.coeffs, width, mu.clone(), off, s);
                        scatter(&mut out.coeffs, width, unit_step(n, alpha, 1)(mu), off, -s);
                    }
                }
            }
        }
        prune(&mut out.coeffs);
        Ok(out)
    }

    /// `d̃ω = Σ_I Σ_α (𝒟_α ω_I) dx^α ∧ dx^I` with forward differences.
    pub fn tilde_d(&self) -> Result<FormField> {
        self.tilde_d_with(insertion_sign)
    }

    pub fn tilde_d_with(&self, ins: InsertionFn) -> Result<FormField> {
        self.difference_d("tilde_d", ins, true)
    }

    /// Exterior derivative built from backward differences `ω(μ) - ω(μ-δα)`.
    pub fn tilde_d_backward(&self) -> Result<FormField> {
        self.difference_d("tilde_d_backward", insertion_sign, false)
    }

    /// Adjoint of [`FormField::tilde_d`] for the weighted product:
    /// `(d̃*η)_I(μ) = h^{-2} Σ_{α ∉ I} s(α, I) (η_{αI}(μ-δα) - η_{αI}(μ))`.
    pub fn tilde_d_star(&self) -> Result<FormField> {
        self.tilde_d_star_with(insertion_sign)
    }

    pub fn tilde_d_star_with(&self, ins: InsertionFn) -> Result<FormField> {
        let n = self.ambient_dim;
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange {
                op: "tilde_d_star",
                degree: 0,
                ambient_dim: n,
            });
        }
        let ratio = self.mesh.powi(-2);
        let list = basis(n, self.degree)?;
        let mut out = self.with_same_shape(self.degree - 1);
        let width = out.width();
        for (mu, v) in &self.coeffs {
            for (c, dims) in v.iter().zip(list) {
                if *c == C64::default() {
                    continue;
                }
                for (pos, &alpha) in dims.iter().enumerate() {
                    let mut rest = dims.clone();
                    rest.remove(pos);
                    let idx = MultiIndex::new(n, rest)?;
                    let (sign, _) = ins(&idx, alpha)?;
                    let s = sign.to_f64() * c * ratio;
                    let off = idx.offset();
                    scatter(&mut out.coeffs, width, unit_step(n, alpha, 1)(mu), off, s);
                    scatter(&mut out.coeffs, width, mu.clone(), off, -s);
                }
            }
        }
        prune(&mut out.coeffs);
        Ok(out)
    }

    /// `h^{-2} (-1)^{n·k+1} * d̃_∇ *` with `k` the output degree and `d̃_∇` the
    /// backward-difference derivative; agrees with [`FormField::tilde_d_star`].
    pub fn tilde_d_star_via_star(&self) -> Result<FormField> {
        let n = self.ambient_dim;
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange {
                op: "tilde_d_star",
                degree: 0,
                ambient_dim: n,
            });
        }
        let k = self.degree - 1;
        let sign = Sign::from_parity(n * k + 1).to_f64();
        let inner = self.hodge_star().tilde_d_backward()?.hodge_star();
        Ok(inner.scaled(C64::new(sign * self.mesh.powi(-2), 0.0)))
    }

    /// `Δ̃ω = h^{-2} Σ_l (2ω(μ) - ω(μ+δ_l) - ω(μ-δ_l))`, coefficientwise.
    pub fn tilde_laplacian(&self) -> FormField {
        let n = self.ambient_dim;
        let ratio = self.mesh.powi(-2);
        let mut out = self.with_same_shape(self.degree);
        let width = out.width();
        for (mu, v) in &self.coeffs {
            for (off, c) in v.iter().enumerate() {
                if *c == C64::default() {
                    continue;
                }
                scatter(
                    &mut out.coeffs,
                    width,
                    mu.clone(),
                    off,
                    c * (2.0 * n as f64 * ratio),
                );
                for l in 1..=n {
                    for step in [-1, 1] {
                        scatter(
                            &mut out.coeffs,
                            width,
                            unit_step(n, l, step)(mu),
                            off,
                            -c * ratio,
                        );
                    }
                }
            }
        }
        prune(&mut out.coeffs);
        out
    }

    /// `h^{-2j-2} Σ_μ Σ_I Σ_α |𝒟_α ω_I(μ)|²` over the directions picked by `sel`.
    /// With [`DirectionSelector::All`] this is `⟨Δ̃ω, ω⟩`.
    pub fn difference_energy(&self, sel: DirectionSelector) -> f64 {
        let n = self.ambient_dim;
        let list = basis(n, self.degree).expect("checked on construction");
        let mut points: BTreeSet<Vec<i64>> = BTreeSet::new();
        for mu in self.coeffs.keys() {
            points.insert(mu.clone());
            for l in 1..=n {
                points.insert(unit_step(n, l, -1)(mu));
            }
        }
        let zero = vec![C64::default(); self.width()];
        let mut total = 0.0;
        for mu in &points {
            let here = self.coeffs.get(mu).unwrap_or(&zero);
            for l in 1..=n {
                let there = self.coeffs.get(&unit_step(n, l, 1)(mu)).unwrap_or(&zero);
                for ((a, b), dims) in there.iter().zip(here).zip(list) {
                    let keep = match sel {
                        DirectionSelector::All => true,
                        DirectionSelector::InIndex => dims.contains(&l),
                        DirectionSelector::Complement => !dims.contains(&l),
                    };
                    if keep {
                        total += (a - b).norm_sqr();
                    }
                }
            }
        }
        total * self.mesh.powi(-2 * self.degree as i32 - 2)
    }

    pub fn write_json_lines<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer(
            &mut w,
            &FormHeader {
                n: self.ambient_dim,
                j: self.degree,
                h: self.mesh,
            },
        )?;
        writeln!(w)?;
        let list = basis(self.ambient_dim, self.degree).expect("checked on construction");
        for (mu, v) in &self.coeffs {
            for (c, dims) in v.iter().zip(list) {
                if *c == C64::default() {
                    continue;
                }
                let line = FormLine {
                    mu: mu.clone(),
                    index: dims.clone(),
                    re: c.re,
                    im: c.im,
                };
                serde_json::to_writer(&mut w, &line)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    pub fn read_json_lines<R: BufRead>(r: R) -> Result<FormField> {
        let perr = |e: &dyn std::fmt::Display| Error::Parse(e.to_string());
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?
            .map_err(|e| perr(&e))?;
        let header: FormHeader = serde_json::from_str(&header).map_err(|e| perr(&e))?;
        let mut w = FormField::new(header.n, header.j, header.h)?;
        for line in lines {
            let line = line.map_err(|e| perr(&e))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: FormLine = serde_json::from_str(&line).map_err(|e| perr(&e))?;
            let idx = MultiIndex::new(header.n, entry.index)?;
            let old = w.get(&entry.mu, &idx)?;
            w.set(&entry.mu, &idx, old + C64::new(entry.re, entry.im))?;
        }
        Ok(w)
    }
}

/// Which directions enter [`FormField::difference_energy`] for each `ω_I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionSelector {
    All,
    InIndex,
    Complement,
}

#[derive(Serialize, Deserialize)]
struct FormHeader {
    n: usize,
    j: usize,
    h: f64,
}

#[derive(Serialize, Deserialize)]
struct FormLine {
    mu: Vec<i64>,
    #[serde(rename = "I")]
    index: Vec<usize>,
    re: f64,
    im: f64,
}

/// `(U_j f)(μ) = Σ_I f(μ; δ_I) dx^I`.
pub fn u_map(f: &Cochain) -> Result<FormField> {
    let n = f.ambient_dim();
    let mut w = FormField::new(n, f.degree(), f.mesh())?;
    for (cube, v) in f.support() {
        let idx = MultiIndex::new(n, cube.dims().to_vec())?;
        w.set(cube.floor(), &idx, *v)?;
    }
    Ok(w)
}

/// Inverse of [`u_map`].
pub fn u_inverse(w: &FormField) -> Result<Cochain> {
    let n = w.ambient_dim;
    let mut f = Cochain::new(n, w.degree, w.mesh)?;
    let list = basis(n, w.degree)?;
    for (mu, v) in &w.coeffs {
        for (c, dims) in v.iter().zip(list) {
            if *c != C64::default() {
                f.set(&OrientedCube::positive(mu.clone(), dims.clone())?, *c)?;
            }
        }
    }
    Ok(f)
}

/// Unweighted component sequences `(f_l(μ))_l`, the image of `Ũ_{j,h}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentField {
    pub ambient_dim: usize,
    pub degree: usize,
    pub values: BTreeMap<Vec<i64>, Vec<C64>>,
}

impl ComponentField {
    pub fn norm(&self) -> f64 {
        self.values
            .values()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `(Ũ_{j,h} ω)_l(μ) = h^{-j} ω_{I^j_l}(μ)`.
pub fn u_scale(w: &FormField) -> ComponentField {
    let s = w.mesh.powi(-(w.degree as i32));
    ComponentField {
        ambient_dim: w.ambient_dim,
        degree: w.degree,
        values: w
            .coeffs
            .iter()
            .map(|(mu, v)| (mu.clone(), v.iter().map(|c| c * s).collect()))
            .collect(),
    }
}

/// `Ũ_{j,h}* f = h^j Σ_l f_l dx^{I^j_l}`.
pub fn u_scale_adjoint(f: &ComponentField, h: f64) -> Result<FormField> {
    let mut w = FormField::new(f.ambient_dim, f.degree, h)?;
    let s = h.powi(f.degree as i32);
    let width = w.width();
    for (mu, v) in &f.values {
        if v.len() != width {
            return Err(Error::DimensionMismatch(v.len(), width));
        }
        w.coeffs
            .insert(mu.clone(), v.iter().map(|c| c * s).collect());
    }
    prune(&mut w.coeffs);
    Ok(w)
}
