//! Square-summable cochains on the oriented cube complex of `hZ^n`.
//!
//! A degree-`j` cochain is an antisymmetric function `f(s̄) = -f(s)`; only the
//! values on positively oriented cubes are stored. The measure is
//! `m(s) = h^{-2j}`, so `d` carries no mesh factor and `d*` carries `h^{-2}`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::cube_complex::{OrientedCube, Sign};
use crate::error::{Error, Result};
use crate::{check_mesh, C64};

/// An element of `ℓ²(X_h^j)` with finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    ambient_dim: usize,
    degree: usize,
    mesh: f64,
    values: BTreeMap<OrientedCube, C64>,
}

fn signed(v: C64, sign: Sign) -> C64 {
    match sign {
        Sign::Plus => v,
        Sign::Minus => -v,
    }
}

impl Cochain {
    /// The zero cochain.
    pub fn new(ambient_dim: usize, degree: usize, mesh: f64) -> Result<Self> {
        check_mesh(mesh)?;
        if degree > ambient_dim {
            return Err(Error::DegreeOutOfRange {
                op: "cochain",
                degree,
                ambient_dim,
            });
        }
        Ok(Self {
            ambient_dim,
            degree,
            mesh,
            values: BTreeMap::new(),
        })
    }

    /// `δ_s`: one on `s`, minus one on `s̄`, zero elsewhere.
    pub fn indicator(cube: &OrientedCube, mesh: f64) -> Result<Self> {
        let mut f = Self::new(cube.ambient_dim(), cube.degree(), mesh)?;
        f.set(cube, C64::new(1.0, 0.0))?;
        Ok(f)
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

    /// `m(s) = h^{-2j}`.
    pub fn measure(&self) -> f64 {
        self.mesh.powi(-2 * self.degree as i32)
    }

    fn check_cube(&self, cube: &OrientedCube) -> Result<()> {
        if cube.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch(
                cube.ambient_dim(),
                self.ambient_dim,
            ));
        }
        if cube.degree() != self.degree {
            return Err(Error::DegreeMismatch(cube.degree(), self.degree));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
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

    /// Value on an arbitrary oriented cube.
    pub fn get(&self, cube: &OrientedCube) -> Result<C64> {
        self.check_cube(cube)?;
        let (canon, sign) = cube.canonical();
        Ok(signed(
            self.values.get(&canon).copied().unwrap_or_default(),
            sign,
        ))
    }

    /// Sets `f(cube) = value` (and hence `f(cube̅) = -value`).
    pub fn set(&mut self, cube: &OrientedCube, value: C64) -> Result<()> {
        self.check_cube(cube)?;
        let (canon, sign) = cube.canonical();
        if value == C64::default() {
            self.values.remove(&canon);
        } else {
            self.values.insert(canon, signed(value, sign));
        }
        Ok(())
    }

    /// `f(cube) += value`.
    pub fn add_at(&mut self, cube: &OrientedCube, value: C64) -> Result<()> {
        self.check_cube(cube)?;
        let (canon, sign) = cube.canonical();
        *self.values.entry(canon).or_default() += signed(value, sign);
        Ok(())
    }

    fn add_canonical(&mut self, canon: OrientedCube, value: C64) {
        *self.values.entry(canon).or_default() += value;
    }

    fn prune(mut self) -> Self {
        self.values.retain(|_, v| *v != C64::default());
        self
    }

    /// Nonzero values on positively oriented cubes, in cube order.
    pub fn support(&self) -> impl Iterator<Item = (&OrientedCube, &C64)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| *v == C64::default())
    }

    /// `⟨f, g⟩ = Σ m(r) f(r) conj(g(r))` over positive cubes.
    pub fn inner(&self, other: &Cochain) -> Result<C64> {
        self.check_compatible(other)?;
        let sum: C64 = self
            .values
            .iter()
            .filter_map(|(k, v)| other.values.get(k).map(|w| v * w.conj()))
            .sum();
        Ok(sum * self.measure())
    }

    pub fn norm(&self) -> f64 {
        let sq: f64 = self.values.values().map(|v| v.norm_sqr()).sum();
        (sq * self.measure()).sqrt()
    }

    pub fn scaled(&self, c: C64) -> Cochain {
        let mut out = self.clone();
        for v in out.values.values_mut() {
            *v *= c;
        }
        out.prune()
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: C64, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.values {
            out.add_canonical(k.clone(), c * v);
        }
        Ok(out.prune())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// Largest pointwise deviation.
    pub fn max_abs_diff(&self, other: &Cochain) -> Result<f64> {
        self.check_compatible(other)?;
        let keys: BTreeSet<&OrientedCube> = self.values.keys().chain(other.values.keys()).collect();
        Ok(keys
            .into_iter()
            .map(|k| {
                let a = self.values.get(k).copied().unwrap_or_default();
                let b = other.values.get(k).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max))
    }

    /// `(d f)(s) = Σ_{r ∈ ∂s} f(r)`.
    pub fn d(&self) -> Result<Cochain> {
        if self.degree >= self.ambient_dim {
            return Err(Error::DegreeOutOfRange {
                op: "d",
                degree: self.degree,
                ambient_dim: self.ambient_dim,
            });
        }
        let mut targets = BTreeSet::new();
        for r in self.values.keys() {
            for s in r.cofaces()?.iter() {
                targets.insert(s.canonical().0);
            }
        }
        let mut out = Cochain::new(self.ambient_dim, self.degree + 1, self.mesh)?;
        for s in targets {
            let mut acc = C64::default();
            for r in s.boundary()?.iter() {
                acc += self.get(r)?;
            }
            out.values.insert(s, acc);
        }
        Ok(out.prune())
    }

    /// `(d* g)(r) = h^{-2} Σ_{r ∈ ∂s} g(s)`, the adjoint of `d`.
    pub fn d_star(&self) -> Result<Cochain> {
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange {
                op: "d_star",
                degree: 0,
                ambient_dim: self.ambient_dim,
            });
        }
        let ratio = self.mesh.powi(-2);
        let mut out = Cochain::new(self.ambient_dim, self.degree - 1, self.mesh)?;
        for (s, v) in &self.values {
            for t in s.boundary()?.iter() {
                let (r, sign) = t.canonical();
                out.add_canonical(r, signed(v * ratio, sign));
            }
        }
        Ok(out.prune())
    }

    /// `Δ_j = d_j* d_j + d_{j-1} d_{j-1}*`, omitting terms that do not exist.
    pub fn hodge_laplacian(&self) -> Result<Cochain> {
        let mut out = Cochain::new(self.ambient_dim, self.degree, self.mesh)?;
        if self.degree < self.ambient_dim {
            out = out.add(&self.d()?.d_star()?)?;
        }
        if self.degree > 0 {
            out = out.add(&self.d_star()?.d()?)?;
        }
        Ok(out)
    }

    /// Writes a `{n, j, h}` header line followed by one `{cube, re, im}` line per
    /// stored value.
    pub fn write_json_lines<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = CochainHeader {
            n: self.ambient_dim,
            j: self.degree,
            h: self.mesh,
        };
        serde_json::to_writer(&mut w, &header)?;
        writeln!(w)?;
        for (k, v) in &self.values {
            let line = CochainLine {
                cube: k.to_string(),
                re: v.re,
                im: v.im,
            };
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_json_lines<R: BufRead>(r: R) -> Result<Cochain> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let header: CochainHeader =
            serde_json::from_str(&header).map_err(|e| Error::Parse(e.to_string()))?;
        let mut f = Cochain::new(header.n, header.j, header.h)?;
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CochainLine =
                serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?;
            let cube: OrientedCube = entry.cube.parse()?;
            f.add_at(&cube, C64::new(entry.re, entry.im))?;
        }
        Ok(f.prune())
    }
}

#[derive(Serialize, Deserialize)]
struct CochainHeader {
    n: usize,
    j: usize,
    h: f64,
}

#[derive(Serialize, Deserialize)]
struct CochainLine {
    cube: String,
    re: f64,
    im: f64,
}

/// `deg_m(s) = Σ_{s ⊂ r} m(r)/m(s)`: the number of cofaces times `h^{-2}`.
pub fn deg_m(cube: &OrientedCube, h: f64) -> Result<f64> {
    check_mesh(h)?;
    Ok(cube.cofaces()?.len() as f64 * h.powi(-2))
}

/// An element of `ℓ²(X) = ⊕_j ℓ²(X^j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedCochain {
    components: Vec<Cochain>,
}

impl GradedCochain {
    pub fn zero(ambient_dim: usize, mesh: f64) -> Result<Self> {
        let components = (0..=ambient_dim)
            .map(|j| Cochain::new(ambient_dim, j, mesh))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    /// `components[j]` must have degree `j`; all share dimension and mesh.
    pub fn from_components(components: Vec<Cochain>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("no components".into()))?;
        let (n, h) = (first.ambient_dim, first.mesh);
        if components.len() != n + 1 {
            return Err(Error::DimensionMismatch(components.len() - 1, n));
        }
        for (j, c) in components.iter().enumerate() {
            if c.degree != j {
                return Err(Error::DegreeMismatch(c.degree, j));
            }
            if c.ambient_dim != n {
                return Err(Error::DimensionMismatch(c.ambient_dim, n));
            }
            if c.mesh != h {
                return Err(Error::MeshMismatch(c.mesh, h));
            }
        }
        Ok(Self { components })
    }

    pub fn ambient_dim(&self) -> usize {
        self.components.len() - 1
    }

    pub fn mesh(&self) -> f64 {
        self.components[0].mesh
    }

    pub fn component(&self, j: usize) -> &Cochain {
        &self.components[j]
    }

    pub fn component_mut(&mut self, j: usize) -> &mut Cochain {
        &mut self.components[j]
    }

    pub fn components(&self) -> &[Cochain] {
        &self.components
    }

    fn zip_with(
        &self,
        other: &GradedCochain,
        f: impl Fn(&Cochain, &Cochain) -> Result<Cochain>,
    ) -> Result<GradedCochain> {
        if self.components.len() != other.components.len() {
            return Err(Error::DimensionMismatch(
                self.ambient_dim(),
                other.ambient_dim(),
            ));
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components: comps })
    }

    pub fn add(&self, other: &GradedCochain) -> Result<GradedCochain> {
        self.zip_with(other, Cochain::add)
    }

    pub fn sub(&self, other: &GradedCochain) -> Result<GradedCochain> {
        self.zip_with(other, Cochain::sub)
    }

    pub fn scaled(&self, c: C64) -> GradedCochain {
        Self {
            components: self.components.iter().map(|f| f.scaled(c)).collect(),
        }
    }

    pub fn inner(&self, other: &GradedCochain) -> Result<C64> {
        if self.components.len() != other.components.len() {
            return Err(Error::DimensionMismatch(
                self.ambient_dim(),
                other.ambient_dim(),
            ));
        }
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &GradedCochain) -> Result<f64> {
        if self.components.len() != other.components.len() {
            return Err(Error::DimensionMismatch(
                self.ambient_dim(),
                other.ambient_dim(),
            ));
        }
        self.components
            .iter()
            .zip(&other.components)
            .try_fold(0.0f64, |m, (a, b)| Ok(m.max(a.max_abs_diff(b)?)))
    }

    /// `D = d + d*`.
    pub fn gauss_bonnet(&self) -> Result<GradedCochain> {
        let n = self.ambient_dim();
        let mut out = GradedCochain::zero(n, self.mesh())?;
        for (j, f) in self.components.iter().enumerate() {
            if j < n {
                out.components[j + 1] = out.components[j + 1].add(&f.d()?)?;
            }
            if j > 0 {
                out.components[j - 1] = out.components[j - 1].add(&f.d_star()?)?;
            }
        }
        Ok(out)
    }

    /// `τ = (-1)^j` on degree `j`.
    pub fn tau(&self) -> GradedCochain {
        Self {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    if j % 2 == 0 {
                        f.clone()
                    } else {
                        f.scaled(C64::new(-1.0, 0.0))
                    }
                })
                .collect(),
        }
    }

    /// `𝔻_m = D + m τ`.
    pub fn dirac_mass(&self, m: f64) -> Result<GradedCochain> {
        self.gauss_bonnet()?
            .add(&self.tau().scaled(C64::new(m, 0.0)))
    }

    pub fn hodge_laplacian(&self) -> Result<GradedCochain> {
        let components = self
            .components
            .iter()
            .map(Cochain::hodge_laplacian)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }
}

/// A pair of finitely supported sequences on `Z`, the target of `𝕌`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairSequence {
    pub first: BTreeMap<i64, C64>,
    pub second: BTreeMap<i64, C64>,
}

impl PairSequence {
    pub fn norm(&self) -> f64 {
        self.first
            .values()
            .chain(self.second.values())
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &PairSequence) -> f64 {
        fn diff(a: &BTreeMap<i64, C64>, b: &BTreeMap<i64, C64>) -> f64 {
            a.keys()
                .chain(b.keys())
                .map(|k| {
                    (a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default())
                        .norm()
                })
                .fold(0.0, f64::max)
        }
        diff(&self.first, &other.first).max(diff(&self.second, &other.second))
    }

    /// `h^{-1} [[m h, D_-], [D_+, -m h]]` with `D_+u(x) = u(x+1) - u(x)` and
    /// `D_- = D_+*`.
    pub fn dirac_mass_1d(&self, m: f64, h: f64) -> PairSequence {
        let get = |s: &BTreeMap<i64, C64>, x: i64| s.get(&x).copied().unwrap_or_default();
        let mut out = PairSequence::default();
        let xs: BTreeSet<i64> = self
            .first
            .keys()
            .chain(self.second.keys())
            .flat_map(|&x| [x - 1, x, x + 1])
            .collect();
        for x in xs {
            let u = get(&self.first, x);
            let v = get(&self.second, x);
            let top = (get(&self.second, x - 1) - v) / h + u * m;
            let bottom = (get(&self.first, x + 1) - u) / h - v * m;
            if top != C64::default() {
                out.first.insert(x, top);
            }
            if bottom != C64::default() {
                out.second.insert(x, bottom);
            }
        }
        out
    }
}

/// `𝕌F(x) = (F((x; +)), h^{-1} F(x, x+1))`. The edge weight makes `𝕌` unitary at
/// every mesh; at `h = 1` it is the plain restriction.
pub fn to_pair_representation_1d(f: &GradedCochain) -> Result<PairSequence> {
    if f.ambient_dim() != 1 {
        return Err(Error::DimensionMismatch(f.ambient_dim(), 1));
    }
    let h = f.mesh();
    let mut out = PairSequence::default();
    for (cube, v) in f.component(0).support() {
        out.first.insert(cube.floor()[0], *v);
    }
    for (cube, v) in f.component(1).support() {
        out.second.insert(cube.floor()[0], v / h);
    }
    Ok(out)
}

/// Inverse of [`to_pair_representation_1d`].
pub fn from_pair_representation_1d(p: &PairSequence, h: f64) -> Result<GradedCochain> {
    let mut g = GradedCochain::zero(1, h)?;
    for (&x, v) in &p.first {
        g.component_mut(0)
            .set(&OrientedCube::vertex(vec![x], Sign::Plus), *v)?;
    }
    for (&x, v) in &p.second {
        g.component_mut(1)
            .set(&OrientedCube::positive(vec![x], vec![1])?, v * h)?;
    }
    Ok(g)
}
