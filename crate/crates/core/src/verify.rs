//! Seeded invariant suite run by `cubedirac verify`.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::continuum_limit::build_window;
use crate::cube_complex::Sign;
use crate::error::Result;
use crate::forms::{insertion_sign, u_map, wedge_basis, InsertionFn, MultiIndex};
use crate::sampling::{random_cochain, random_cube, random_form, random_frequency, random_graded};
use crate::symbols::{
    grading_matrix, lattice_coefficient, symbol_from_coefficients_with, FiberScalars,
};
use crate::C64;

/// Deliberate defects used to check that the suite detects them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Every insertion sign is negated.
    InsertionSign,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n: 3,
            seed: 0,
            trials: 50,
            fault: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn flipped_insertion_sign(index: &MultiIndex, alpha: usize) -> Result<(Sign, MultiIndex)> {
    insertion_sign(index, alpha).map(|(s, k)| (-s, k))
}

struct Ctx {
    opts: VerifyOptions,
    ins: InsertionFn,
    meshes: [f64; 4],
}

type Check = fn(&Ctx, &mut ChaCha8Rng) -> Result<(bool, String)>;

fn tolerance_check(worst: f64, tol: f64) -> (bool, String) {
    (
        worst <= tol,
        format!("max deviation {worst:.3e} (tol {tol:.0e})"),
    )
}

fn cube_reverse(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    for _ in 0..ctx.opts.trials * 10 {
        let j = rand::Rng::random_range(rng, 0..=n);
        let s = random_cube(rng, n, j, 5);
        if s.reverse().reverse() != s || s.reverse().vertex_set() != s.vertex_set() {
            return Ok((false, format!("reverse fails on {s}")));
        }
    }
    Ok((true, "reverse is an involution preserving vertices".into()))
}

fn boundary_of_reverse(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    for _ in 0..ctx.opts.trials * 10 {
        let j = rand::Rng::random_range(rng, 1..=n);
        let s = random_cube(rng, n, j, 5);
        if !s.reverse().boundary()?.same_set(&s.boundary()?.reversed()) {
            return Ok((false, format!("∂(s̄) != ∂(s)‾ for {s}")));
        }
    }
    Ok((true, "∂(s̄) = ∂(s)‾".into()))
}

fn boundary_involutive(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    if n < 2 {
        return Ok((true, "skipped for n < 2".into()));
    }
    for _ in 0..ctx.opts.trials * 10 {
        let j = rand::Rng::random_range(rng, 2..=n);
        let s = random_cube(rng, n, j, 5);
        let mut faces = Vec::new();
        for r in s.boundary()?.iter() {
            faces.extend(r.boundary()?.into_vec());
        }
        let mut rest = faces.clone();
        for f in &faces {
            if let Some(p) = rest.iter().position(|g| *g == f.reverse()) {
                rest.swap_remove(p);
            }
        }
        if !rest.is_empty() {
            return Ok((false, format!("∂∂ not involutive on {s}")));
        }
    }
    Ok((true, "∂∂(s) pairs every face with its reverse".into()))
}

fn coface_duality(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    for _ in 0..ctx.opts.trials * 5 {
        let j = rand::Rng::random_range(rng, 0..n);
        let r = random_cube(rng, n, j, 3);
        let co = r.cofaces()?;
        if co.len() != 2 * (n - j) {
            return Ok((false, format!("{r} has {} cofaces", co.len())));
        }
        for s in co.iter() {
            if !s.boundary()?.contains(&r) {
                return Ok((false, format!("{s} listed as coface of {r}")));
            }
        }
    }
    Ok((true, "r ∈ ∂s for every listed coface".into()))
}

fn d_squared(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    for _ in 0..ctx.opts.trials {
        for j in 0..n.saturating_sub(1) {
            let f = random_cochain(rng, n, j, 1.0, 6, 3, true);
            let dd = f.d()?.d()?;
            if !dd.is_zero() {
                return Ok((false, format!("d∘d != 0 in degree {j}")));
            }
        }
    }
    Ok((true, "d∘d = 0 exactly".into()))
}

fn cochain_adjoint(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    let mut worst = 0.0f64;
    for &h in &ctx.meshes {
        for _ in 0..ctx.opts.trials / 4 + 1 {
            for j in 0..n {
                let f = random_cochain(rng, n, j, h, 6, 2, false);
                let g = random_cochain(rng, n, j + 1, h, 6, 2, false);
                let lhs = f.d()?.inner(&g)?;
                let rhs = f.inner(&g.d_star()?)?;
                let scale = 1.0 + lhs.norm();
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
    }
    Ok(tolerance_check(worst, 1e-12))
}

fn dirac_square(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    let mut worst = 0.0f64;
    for _ in 0..ctx.opts.trials / 5 + 1 {
        let f = random_graded(rng, n, 0.5, 4, 2);
        let lhs = f.gauss_bonnet()?.gauss_bonnet()?;
        let rhs = f.hodge_laplacian()?;
        worst = worst.max(lhs.max_abs_diff(&rhs)?);
        let anti = f.gauss_bonnet()?.tau().add(&f.tau().gauss_bonnet()?)?;
        worst = worst.max(anti.norm());
    }
    Ok(tolerance_check(worst, 1e-9))
}

fn wedge_insertion(ctx: &Ctx, _rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    for j in 0..n {
        for dims in crate::forms::basis(n, j)? {
            let idx = MultiIndex::new(n, dims.clone())?;
            for alpha in 1..=n {
                if idx.contains(alpha) {
                    continue;
                }
                let seq: Vec<usize> = std::iter::once(alpha).chain(dims.iter().copied()).collect();
                let oracle = wedge_basis(n, &seq)?;
                let got = (ctx.ins)(&idx, alpha)?;
                if oracle.as_ref() != Some(&got) {
                    return Ok((
                        false,
                        format!("dx^{alpha} ∧ dx^{dims:?} has the wrong sign"),
                    ));
                }
            }
        }
    }
    Ok((true, "dx^α ∧ dx^I = sign·dx^I'".into()))
}

fn u_intertwines_d(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    let mut worst = 0.0f64;
    for &h in &ctx.meshes {
        for _ in 0..ctx.opts.trials / 4 + 1 {
            for j in 0..n {
                let f = random_cochain(rng, n, j, h, 6, 2, false);
                let lhs = u_map(&f.d()?)?;
                let rhs = u_map(&f)?.tilde_d_with(ctx.ins)?;
                worst = worst.max(lhs.max_abs_diff(&rhs)?);
                let g = random_cochain(rng, n, j + 1, h, 6, 2, false);
                let lhs = u_map(&g.d_star()?)?;
                let rhs = u_map(&g)?.tilde_d_star_with(ctx.ins)?;
                worst = worst.max(lhs.max_abs_diff(&rhs)? * h * h);
            }
        }
    }
    Ok(tolerance_check(worst, 1e-12))
}

fn forms_square(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    let mut worst = 0.0f64;
    for _ in 0..ctx.opts.trials / 5 + 1 {
        for j in 0..=n {
            let w = random_form(rng, n, j, 1.0, 4, 2);
            let mut sq = w.tilde_laplacian().scaled(C64::new(-1.0, 0.0));
            if j < n {
                sq = sq.add(&w.tilde_d_with(ctx.ins)?.tilde_d_star_with(ctx.ins)?)?;
            }
            if j > 0 {
                sq = sq.add(&w.tilde_d_star_with(ctx.ins)?.tilde_d_with(ctx.ins)?)?;
            }
            worst = worst.max(sq.max_abs_diff(&w.scaled(C64::default()))?);
        }
    }
    Ok(tolerance_check(worst, 1e-12))
}

fn symbol_structure(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    let gamma = grading_matrix(n);
    let mut worst = 0.0f64;
    for _ in 0..ctx.opts.trials * 4 {
        let h = ctx.meshes[rand::Rng::random_range(rng, 0..4)];
        let xi = random_frequency(rng, n, h);
        let coeffs: Vec<C64> = xi.iter().map(|&x| lattice_coefficient(h, x)).collect();
        let s = symbol_from_coefficients_with(n, &coeffs, ctx.ins)?;
        let m = s.matrix();
        let sum: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let scale = 1.0 + sum;
        worst = worst.max(s.hermitian_defect() / scale.sqrt());
        worst = worst.max((&gamma * m * &gamma + m).camax() / scale.sqrt());
        let mut sq = m * m;
        for i in 0..sq.nrows() {
            sq[(i, i)] -= sum;
        }
        worst = worst.max(sq.camax() / scale);
        let z = C64::new(rand::Rng::random_range(rng, -2.0..2.0), 1.0);
        let sc = FiberScalars::new(h, z, &xi)?;
        let r = crate::symbols::fiber_resolvent(&s, &sc, true)?;
        let mut prod = m * &r - r.map(|c| c * z);
        for i in 0..prod.nrows() {
            prod[(i, i)] -= 1.0;
        }
        worst = worst.max(prod.camax());
    }
    Ok(tolerance_check(worst, 1e-12))
}

fn symbol_matches_forms(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = ctx.opts.n;
    let mut worst = 0.0f64;
    let h = 0.5;
    for _ in 0..ctx.opts.trials / 5 + 1 {
        let xi = random_frequency(rng, n, h);
        let s = crate::symbols::discrete_symbol(n, h, &xi)?;
        for j in 0..n {
            for (l, dims) in crate::forms::basis(n, j)?.iter().enumerate() {
                let idx = MultiIndex::new(n, dims.clone())?;
                let w = crate::forms::FormField::monomial(vec![0; n], &idx, h, C64::new(1.0, 0.0))?;
                let dw = w.tilde_d_with(ctx.ins)?;
                let col = s.offsets()[j] + l;
                let mut fourier = vec![C64::default(); crate::binomial(n, j + 1)];
                for (mu, v) in dw.support() {
                    let phase: f64 = mu
                        .iter()
                        .zip(&xi)
                        .map(|(m, x)| -(*m as f64) * x * h)
                        .sum::<f64>()
                        * std::f64::consts::TAU;
                    for (acc, c) in fourier.iter_mut().zip(v) {
                        *acc += c * C64::from_polar(1.0 / h, phase);
                    }
                }
                for (k, val) in fourier.iter().enumerate() {
                    let entry = s.matrix()[(s.offsets()[j + 1] + k, col)];
                    worst = worst.max((entry - val).norm() * h);
                }
            }
        }
    }
    Ok(tolerance_check(worst, 1e-12))
}

fn window_partition(_ctx: &Ctx, _rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let w = build_window();
    let worst = (0..100_000)
        .map(|i| w.partition_residual(-0.5 + i as f64 / 100_000.0))
        .fold(0.0, f64::max);
    let support_ok = w.profile(w.support_edge()) == 0.0 && w.support_edge() < 1.0;
    let (ok, msg) = tolerance_check(worst, 1e-12);
    Ok((ok && support_ok, msg))
}

const CHECKS: &[(&str, Check)] = &[
    ("cube.reverse_involution", cube_reverse),
    ("cube.boundary_of_reverse", boundary_of_reverse),
    ("cube.boundary_involutive", boundary_involutive),
    ("cube.coface_duality", coface_duality),
    ("cochain.d_squared_zero", d_squared),
    ("cochain.d_adjoint", cochain_adjoint),
    ("cochain.dirac_square_and_chirality", dirac_square),
    ("forms.wedge_insertion_sign", wedge_insertion),
    ("forms.u_intertwines_d", u_intertwines_d),
    ("forms.dirac_square_is_laplacian", forms_square),
    ("symbols.structure_and_resolvent", symbol_structure),
    ("symbols.matches_forms", symbol_matches_forms),
    ("window.partition_of_unity", window_partition),
];

/// Runs every check; a check that errors counts as failed.
pub fn run_verify(opts: &VerifyOptions) -> Vec<CheckResult> {
    let ins: InsertionFn = match opts.fault {
        None => insertion_sign,
        Some(Fault::InsertionSign) => flipped_insertion_sign,
    };
    let ctx = Ctx {
        opts: opts.clone(),
        ins,
        meshes: [1.0, 0.5, 0.25, 0.125],
    };
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let start = Instant::now();
            let (passed, detail) = match check(&ctx, &mut rng) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}
