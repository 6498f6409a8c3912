//! Fiberwise certificate for the `O(h)` distance between the lattice and
//! continuum resolvents.
//!
//! The lattice is embedded through a band-limited window `φ̂`. On the Fourier
//! side this is the map `Q_h u(ξ) = Σ_μ φ̂(hξ + μ) u(ξ + μ/h)` onto `1/h`-periodic
//! fibers, with `Q_h Q_h* = 1`. The resolvent difference splits into
//! `Q*[(H_h - z)^{-1} Q - Q (H - z)^{-1}] - (1 - Q*Q)(H - z)^{-1}`; each piece is
//! a finite sum of multipliers composed with translations by `μ/h`, so its norm
//! is bounded by a sum of fiber suprema, which are sampled here on a grid in
//! `hξ ∈ [-1, 1]^n`.

use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};
use crate::symbols::lattice_coefficient;
use crate::{check_mesh, check_spectral, C64};

const TAU: f64 = std::f64::consts::TAU;

fn nu(x: f64) -> f64 {
    x * x * (3.0 - 2.0 * x)
}

/// Meyer-type profile: one on `[-δ, δ]`, zero outside `(-(1-δ), 1-δ)`, with
/// `Σ_k profile(t + k)² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowFunction {
    delta: f64,
}

impl WindowFunction {
    pub fn meyer(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::InvalidWindow(delta));
        }
        Ok(Self { delta })
    }

    /// Half-width of the plateau.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Profile vanishes for `|t| >= support_edge()`.
    pub fn support_edge(&self) -> f64 {
        1.0 - self.delta
    }

    pub fn profile(&self, t: f64) -> f64 {
        let a = t.abs();
        let d = self.delta;
        if a <= d {
            1.0
        } else if a >= 1.0 - d {
            0.0
        } else {
            (std::f64::consts::FRAC_PI_2 * nu((a - d) / (1.0 - 2.0 * d))).cos()
        }
    }

    /// `φ̂(t) = Π_l profile(t_l)`.
    pub fn eval(&self, t: &[f64]) -> f64 {
        t.iter().map(|&x| self.profile(x)).product()
    }

    /// `|Σ_{k ∈ {0, ±1}} profile(t + k)² - 1|`; these are all the nonzero terms when
    /// `|t| <= 1/2`.
    pub fn partition_residual(&self, t: f64) -> f64 {
        let s: f64 = [-1.0, 0.0, 1.0]
            .iter()
            .map(|k| self.profile(t + k).powi(2))
            .sum();
        (s - 1.0).abs()
    }
}

/// The default window, plateau `δ = 1/3`.
pub fn build_window() -> WindowFunction {
    WindowFunction { delta: 1.0 / 3.0 }
}

/// Per axis, the shifts `m` with `profile(t + m) != 0`.
fn active_shifts(window: &WindowFunction, t: f64) -> Vec<i64> {
    let base = (-t).floor() as i64;
    (base - 1..=base + 2)
        .filter(|&m| window.profile(t + m as f64) != 0.0)
        .collect()
}

fn for_each_shift(per_axis: &[Vec<i64>], mut f: impl FnMut(&[i64])) {
    if per_axis.iter().any(Vec::is_empty) {
        return;
    }
    let n = per_axis.len();
    let mut k = vec![0usize; n];
    let mut mu = vec![0i64; n];
    loop {
        for l in 0..n {
            mu[l] = per_axis[l][k[l]];
        }
        f(&mu);
        let mut l = n;
        loop {
            if l == 0 {
                return;
            }
            l -= 1;
            k[l] += 1;
            if k[l] < per_axis[l].len() {
                break;
            }
            k[l] = 0;
        }
    }
}

fn shifted(xi: &[f64], mu: &[i64], h: f64) -> Vec<f64> {
    xi.iter().zip(mu).map(|(x, &m)| x + m as f64 / h).collect()
}

/// `(Q_h u)(ξ) = Σ_μ φ̂(hξ + μ) u(ξ + μ/h)`.
pub fn q_apply(window: &WindowFunction, h: f64, xi: &[f64], u: impl Fn(&[f64]) -> C64) -> C64 {
    let t: Vec<f64> = xi.iter().map(|x| h * x).collect();
    let per_axis: Vec<Vec<i64>> = t.iter().map(|&x| active_shifts(window, x)).collect();
    let mut acc = C64::default();
    for_each_shift(&per_axis, |mu| {
        let tm: Vec<f64> = t.iter().zip(mu).map(|(x, &m)| x + m as f64).collect();
        acc += window.eval(&tm) * u(&shifted(xi, mu, h));
    });
    acc
}

/// `(Q_h* g)(ξ) = φ̂(hξ) g(ξ)` for a `1/h`-periodic `g`.
pub fn q_adjoint_apply(
    window: &WindowFunction,
    h: f64,
    xi: &[f64],
    g: impl Fn(&[f64]) -> C64,
) -> C64 {
    let t: Vec<f64> = xi.iter().map(|x| h * x).collect();
    window.eval(&t) * g(xi)
}

/// `((1 - Q*Q) u)(ξ) = u(ξ) - Σ_{μ ∈ {0,±1}^n} φ̂(hξ) φ̂(hξ + μ) u(ξ + μ/h)`.
pub fn one_minus_qstar_q(
    window: &WindowFunction,
    h: f64,
    xi: &[f64],
    u: impl Fn(&[f64]) -> C64,
) -> C64 {
    let t: Vec<f64> = xi.iter().map(|x| h * x).collect();
    let here = window.eval(&t);
    let per_axis = vec![vec![-1i64, 0, 1]; xi.len()];
    let mut acc = u(xi);
    for_each_shift(&per_axis, |mu| {
        let tm: Vec<f64> = t.iter().zip(mu).map(|(x, &m)| x + m as f64).collect();
        let w = here * window.eval(&tm);
        if w != 0.0 {
            acc -= w * u(&shifted(xi, mu, h));
        }
    });
    acc
}

/// Sampling grid in the dimensionless variable `t = hξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    /// Uniform points on `[-1, 1]`, endpoints included.
    pub points_per_axis: usize,
    /// Geometric refinement points on each side of every window transition.
    pub refine_per_side: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points_per_axis: 64,
            refine_per_side: 6,
        }
    }
}

impl GridSpec {
    pub fn uniform(points_per_axis: usize) -> Self {
        Self {
            points_per_axis,
            refine_per_side: 6,
        }
    }

    /// Sorted sample points `t` on `[-1, 1]`: the uniform grid, geometric clusters
    /// at `±δ` and `±(1-δ)`, and points `±h·2^k` resolving `|ξ| = O(1)`.
    pub fn axis_points(&self, window: &WindowFunction, h: f64) -> Vec<f64> {
        let p = self.points_per_axis.max(2);
        let mut pts: Vec<f64> = (0..p)
            .map(|i| -1.0 + 2.0 * i as f64 / (p - 1) as f64)
            .collect();
        let edges = [window.delta(), window.support_edge()];
        let gap = (window.support_edge() - window.delta()) / 2.0;
        for e in edges {
            for k in 0..self.refine_per_side {
                let eps = gap * 0.25f64.powi(k as i32 + 1);
                for c in [e - eps, e, e + eps] {
                    pts.push(c);
                    pts.push(-c);
                }
            }
        }
        let mut s = h;
        while s < window.delta() {
            pts.push(s);
            pts.push(-s);
            s *= 2.0;
        }
        pts.retain(|x| (-1.0..=1.0).contains(x));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Which operator plays the lattice role in the second bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Lattice,
    /// Substitutes `A_l` for `a_{h,l}`; the second bound is then zero.
    Continuum,
}

/// `‖(H(η) - z)^{-1}‖ = 1/min(|s - z|, |s + z|)` with `s = 2π|η|`.
pub fn continuum_resolvent_norm(eta_norm: f64, z: C64) -> f64 {
    let s = TAU * eta_norm;
    1.0 / (C64::new(s, 0.0) - z)
        .norm()
        .min((C64::new(s, 0.0) + z).norm())
}

/// `sup_{s >= s0} 1/dist(z, {±s})`.
fn resolvent_tail(s0: f64, z: C64) -> f64 {
    let dist = |target: f64| {
        let re = z.re.abs();
        let x = re.max(target);
        ((x - re).powi(2) + z.im.powi(2)).sqrt()
    };
    1.0 / dist(s0)
}

/// Spectral norm of `(H_h + z)/r_z - (H + z)/R_z` at one fiber.
///
/// Both symbols are real combinations `Σ x_k Γ_k` of `2n` anticommuting
/// involutions, with `x = (Re c_l, Im c_l)_l`. The difference is `V·Γ + c` with
/// complex `V = x/r - y/R` and `c = z(1/r - 1/R)`. Any such operator is unitarily
/// a direct sum of copies of `[[c, v1 - i v2], [v1 + i v2, c]]` with
/// `v1² + v2² = V·V` and `|v1|² + |v2|² = |V|²`.
pub fn resolvent_difference_norm(a: &[C64], big_a: &[C64], z: C64) -> f64 {
    let sa: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let sb: f64 = big_a.iter().map(|c| c.norm_sqr()).sum();
    let z2 = z * z;
    let inv_r = 1.0 / (sa - z2);
    let inv_big_r = 1.0 / (sb - z2);
    let c = z * (inv_r - inv_big_r);
    let mut vv = C64::default();
    let mut vnorm = 0.0;
    for (x, y) in a.iter().zip(big_a) {
        for v in [
            x.re * inv_r - y.re * inv_big_r,
            x.im * inv_r - y.im * inv_big_r,
        ] {
            vv += v * v;
            vnorm += v.norm_sqr();
        }
    }
    two_by_two_norm(c, vv, vnorm)
}

/// Largest singular value of `c + v1 σ1 + v2 σ2` given `c`, `v1² + v2²` and
/// `|v1|² + |v2|²`.
fn two_by_two_norm(c: C64, vv: C64, vnorm: f64) -> f64 {
    let frob = 2.0 * (c.norm_sqr() + vnorm);
    let det = (c * c - vv).norm();
    let disc = (frob * frob - 4.0 * det * det).max(0.0);
    ((frob + disc.sqrt()) / 2.0).sqrt()
}

/// The two fiber-sup bounds at one mesh size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberBounds {
    pub le0: f64,
    pub le1: f64,
}

struct Axis {
    t: Vec<f64>,
    phi: [Vec<f64>; 3],
    a: Vec<C64>,
}

fn mu_index(mu: &[i64]) -> usize {
    mu.iter().fold(0, |acc, &m| acc * 3 + (m + 1) as usize)
}

#[derive(Clone)]
struct Partial {
    le0_center: f64,
    le0_shift: Vec<f64>,
    le1: Vec<f64>,
}

impl Partial {
    fn new(n: usize) -> Self {
        let count = 3usize.pow(n as u32);
        Self {
            le0_center: 0.0,
            le0_shift: vec![0.0; count],
            le1: vec![0.0; count],
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.le0_center = self.le0_center.max(other.le0_center);
        for (a, b) in self.le0_shift.iter_mut().zip(&other.le0_shift) {
            *a = a.max(*b);
        }
        for (a, b) in self.le1.iter_mut().zip(&other.le1) {
            *a = a.max(*b);
        }
        self
    }
}

/// Both bounds in one sweep over the grid.
///
/// `le0` bounds `‖(1 - Q*Q)(H - z)^{-1}‖` by
/// `sup (1 - φ̂(hξ)²)‖R(ξ)‖ + Σ_{μ≠0} sup |φ̂(hξ)φ̂(hξ+μ)| ‖R(ξ+μ/h)‖`, where the
/// first supremum also covers `|hξ|_∞ >= 1` in closed form. `le1` bounds
/// `‖Q*[(H_h - z)^{-1}Q - Q(H - z)^{-1}]‖` by
/// `Σ_{μ ∈ {0,±1}^n} sup |φ̂(hξ)φ̂(hξ+μ)| ‖Δ(ξ + μ/h)‖`.
pub fn fiber_bounds(
    h: f64,
    z: C64,
    n: usize,
    window: &WindowFunction,
    grid: &GridSpec,
    kind: SymbolKind,
) -> Result<FiberBounds> {
    check_mesh(h)?;
    let z = check_spectral(z)?;
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let t = grid.axis_points(window, h);
    let axis = Axis {
        phi: [-1.0, 0.0, 1.0].map(|m| t.iter().map(|x| window.profile(x + m)).collect()),
        a: t.iter().map(|x| lattice_coefficient(h, x / h)).collect(),
        t,
    };
    let len = axis.t.len();

    let partial = (0..len)
        .into_par_iter()
        .map(|i0| {
            let mut acc = Partial::new(n);
            let mut idx = vec![0usize; n];
            idx[0] = i0;
            let mut a = vec![C64::default(); n];
            let mut big_a = vec![C64::default(); n];
            let mut mu = vec![0i64; n];
            loop {
                eval_point(
                    &axis, &idx, h, z, kind, &mut a, &mut big_a, &mut mu, &mut acc,
                );
                let mut l = n;
                loop {
                    if l == 1 {
                        return acc;
                    }
                    l -= 1;
                    idx[l] += 1;
                    if idx[l] < len {
                        break;
                    }
                    idx[l] = 0;
                }
            }
        })
        .reduce(|| Partial::new(n), Partial::merge);

    let center = partial.le0_center.max(resolvent_tail(TAU / h, z));
    let zero = mu_index(&vec![0; n]);
    let shifts: f64 = partial
        .le0_shift
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != zero)
        .map(|(_, v)| v)
        .sum();
    Ok(FiberBounds {
        le0: center + shifts,
        le1: partial.le1.iter().sum(),
    })
}

#[allow(clippy::too_many_arguments)]
fn eval_point(
    axis: &Axis,
    idx: &[usize],
    h: f64,
    z: C64,
    kind: SymbolKind,
    a: &mut [C64],
    big_a: &mut [C64],
    mu: &mut [i64],
    acc: &mut Partial,
) {
    let n = idx.len();
    let phi0: f64 = idx.iter().map(|&i| axis.phi[1][i]).product();
    let xi_sq: f64 = idx.iter().map(|&i| (axis.t[i] / h).powi(2)).sum();
    let center = (1.0 - phi0 * phi0) * continuum_resolvent_norm(xi_sq.sqrt(), z);
    acc.le0_center = acc.le0_center.max(center);
    if phi0 == 0.0 {
        return;
    }
    mu.fill(-1);
    loop {
        let mut w = phi0;
        for l in 0..n {
            w *= axis.phi[(mu[l] + 1) as usize][idx[l]];
        }
        if w != 0.0 {
            let mut eta_sq = 0.0;
            for l in 0..n {
                let eta = (axis.t[idx[l]] + mu[l] as f64) / h;
                eta_sq += eta * eta;
                big_a[l] = C64::new(0.0, TAU * eta);
                a[l] = match kind {
                    SymbolKind::Lattice => axis.a[idx[l]],
                    SymbolKind::Continuum => big_a[l],
                };
            }
            let k = mu_index(mu);
            let w = w.abs();
            if mu.iter().any(|&m| m != 0) {
                let r = w * continuum_resolvent_norm(eta_sq.sqrt(), z);
                acc.le0_shift[k] = acc.le0_shift[k].max(r);
            }
            let d = w * resolvent_difference_norm(a, big_a, z);
            acc.le1[k] = acc.le1[k].max(d);
        }
        let mut l = n;
        loop {
            if l == 0 {
                return;
            }
            l -= 1;
            mu[l] += 1;
            if mu[l] <= 1 {
                break;
            }
            mu[l] = -1;
        }
    }
}

/// Bound on `‖(1 - Q_h*Q_h)(H - z)^{-1}‖`.
pub fn lemma_le0_bound(
    h: f64,
    z: C64,
    n: usize,
    window: &WindowFunction,
    grid: &GridSpec,
) -> Result<f64> {
    Ok(fiber_bounds(h, z, n, window, grid, SymbolKind::Continuum)?.le0)
}

/// Bound on `‖Q_h*[(H_h - z)^{-1}Q_h - Q_h(H - z)^{-1}]‖`.
pub fn lemma_le1_bound(
    h: f64,
    z: C64,
    n: usize,
    window: &WindowFunction,
    grid: &GridSpec,
) -> Result<f64> {
    Ok(fiber_bounds(h, z, n, window, grid, SymbolKind::Lattice)?.le1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub bound_le0: f64,
    pub bound_le1: f64,
    pub total: f64,
}

/// Bounds over a decreasing list of mesh sizes with a log-log fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n: usize,
    pub z: C64,
    pub grid: GridSpec,
    pub delta: f64,
    pub rows: Vec<ConvergenceRow>,
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares `(slope, intercept)` of `ln y` against `ln x`.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() < 3 || x.len() != y.len() {
        return Err(Error::SlopeUndefined(x.len().min(y.len())));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// `2^{-k}` for `k = from..=to`.
pub fn dyadic_meshes(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

/// Runs both bounds over `h_list` and fits `total ≈ C h^slope`.
pub fn theorem_rate(
    h_list: &[f64],
    z: C64,
    n: usize,
    window: &WindowFunction,
    grid: &GridSpec,
) -> Result<ConvergenceReport> {
    theorem_rate_with(h_list, z, n, window, grid, SymbolKind::Lattice)
}

pub fn theorem_rate_with(
    h_list: &[f64],
    z: C64,
    n: usize,
    window: &WindowFunction,
    grid: &GridSpec,
    kind: SymbolKind,
) -> Result<ConvergenceReport> {
    check_spectral(z)?;
    if h_list.len() < 3 {
        return Err(Error::SlopeUndefined(h_list.len()));
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::MeshListNotDecreasing);
    }
    let mut rows = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let b = fiber_bounds(h, z, n, window, grid, kind)?;
        rows.push(ConvergenceRow {
            h,
            bound_le0: b.le0,
            bound_le1: b.le1,
            total: b.le0 + b.le1,
        });
    }
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let totals: Vec<f64> = rows.iter().map(|r| r.total).collect();
    let (slope, intercept) = loglog_fit(&hs, &totals)?;
    Ok(ConvergenceReport {
        n,
        z,
        grid: *grid,
        delta: window.delta(),
        rows,
        slope,
        intercept,
    })
}

/// Float as a JSON number with 17 significant digits.
fn sig17(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float parses"))
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "h,bound_le0,bound_le1,total";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.h, r.bound_le0, r.bound_le1, r.total
            ));
        }
        s
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "h": sig17(r.h),
                    "bound_le0": sig17(r.bound_le0),
                    "bound_le1": sig17(r.bound_le1),
                    "total": sig17(r.total),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "z": { "re": sig17(self.z.re), "im": sig17(self.z.im) },
            "grid": {
                "points_per_axis": self.grid.points_per_axis,
                "refine_per_side": self.grid.refine_per_side,
            },
            "window": { "kind": "meyer", "delta": sig17(self.delta) },
            "slope": sig17(self.slope),
            "intercept": sig17(self.intercept),
            "rows": rows,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes")
    }
}
