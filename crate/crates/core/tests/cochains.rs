use cubedirac::cochains::{deg_m, from_pair_representation_1d, to_pair_representation_1d};
use cubedirac::sampling::{random_cochain, random_graded, random_integer_value};
use cubedirac::{Cochain, Error, GradedCochain, OrientedCube, PairSequence, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MESHES: [f64; 4] = [1.0, 0.5, 0.25, 0.125];

fn cube(s: &str) -> OrientedCube {
    s.parse().unwrap()
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn box_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn subsets(n: usize, j: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == j)
        .map(|m| (1..=n).filter(|d| m >> (d - 1) & 1 == 1).collect())
        .collect()
}

/// Canonical `j`-cubes with base in `[lo, hi]^n`.
fn box_cubes(n: usize, j: usize, lo: i64, hi: i64) -> Vec<OrientedCube> {
    let mut out = Vec::new();
    for p in box_points(n, lo, hi) {
        for dims in subsets(n, j) {
            out.push(OrientedCube::positive(p.clone(), dims).unwrap());
        }
    }
    out
}

/// Matrix of `op` from degree-`j` indicators on `cols` to values on `rows`.
fn dense(
    op: impl Fn(&Cochain) -> Cochain,
    rows: &[OrientedCube],
    cols: &[OrientedCube],
    h: f64,
) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows.len(), cols.len());
    for (k, s) in cols.iter().enumerate() {
        let out = op(&Cochain::indicator(s, h).unwrap());
        for (i, r) in rows.iter().enumerate() {
            let v = out.get(r).unwrap();
            assert_eq!(v.im, 0.0);
            m[(i, k)] = v.re;
        }
    }
    m
}

#[test]
fn indicator_inner_products() {
    for (j, h) in [(0, 1.0), (1, 0.5), (2, 0.25), (3, 0.125)] {
        let s = OrientedCube::positive(vec![1, -1, 2], (1..=j).collect()).unwrap();
        let f = Cochain::indicator(&s, h).unwrap();
        let expected = h.powi(-2 * j as i32);
        assert!((f.inner(&f).unwrap().re - expected).abs() <= 1e-12 * expected);
        assert!((f.norm() - h.powi(-(j as i32))).abs() <= 1e-12 * expected);
        let g = Cochain::indicator(&s.reverse(), h).unwrap();
        assert_eq!(f.inner(&g).unwrap(), c(-expected));
    }
    let a = Cochain::indicator(&cube("(0,0; 1; +)"), 1.0).unwrap();
    let b = Cochain::indicator(&cube("(0,0; 2; +)"), 1.0).unwrap();
    assert_eq!(a.inner(&b).unwrap(), C64::default());
}

#[test]
fn inner_rejects_mismatches() {
    let a = Cochain::new(2, 1, 1.0).unwrap();
    let b = Cochain::new(2, 1, 0.5).unwrap();
    let c = Cochain::new(2, 0, 1.0).unwrap();
    assert!(a.inner(&b).is_err());
    assert!(a.inner(&c).is_err());
    assert!(Cochain::new(2, 3, 1.0).is_err());
    assert!(Cochain::new(2, 1, 0.0).is_err());
    assert!(Cochain::new(2, 1, f64::NAN).is_err());
}

#[test]
fn inner_is_hermitian() {
    let mut r = rng(1);
    for n in 1..=3 {
        for j in 0..=n {
            let f = random_cochain(&mut r, n, j, 0.5, 12, 2, false);
            let g = random_cochain(&mut r, n, j, 0.5, 12, 2, false);
            let fg = f.inner(&g).unwrap();
            let gf = g.inner(&f).unwrap();
            assert!((fg - gf.conj()).norm() < 1e-12);
            assert!(f.inner(&f).unwrap().re >= 0.0);
        }
    }
}

#[test]
fn antisymmetry_on_reversed_cubes() {
    let s = cube("(0,1,2; 3 1; -)");
    let mut f = Cochain::new(3, 2, 1.0).unwrap();
    f.set(&s, C64::new(2.0, -1.0)).unwrap();
    assert_eq!(f.get(&s.reverse()).unwrap(), C64::new(-2.0, 1.0));
    assert_eq!(f.support_len(), 1);
    assert!(f.support().all(|(k, _)| k.is_canonical()));
}

#[test]
fn d_of_vertex_values_is_a_difference() {
    let x = cube("(2,0; +)");
    let mut f = Cochain::new(2, 0, 1.0).unwrap();
    f.set(&x, c(5.0)).unwrap();
    f.set(&cube("(3,0; +)"), c(7.0)).unwrap();
    let df = f.d().unwrap();
    assert_eq!(df.get(&cube("(2,0; 1; +)")).unwrap(), c(7.0 - 5.0));
    assert_eq!(df.get(&cube("(1,0; 1; +)")).unwrap(), c(5.0));
    assert_eq!(df.get(&cube("(2,0; 2; +)")).unwrap(), c(-5.0));
    assert_eq!(df.get(&cube("(3,0; 1; -)")).unwrap(), c(-2.0));
    assert_eq!(df.support_len(), 7);
}

#[test]
fn operators_on_zero() {
    for n in 1..=3 {
        for j in 0..=n {
            let z = Cochain::new(n, j, 0.25).unwrap();
            if j < n {
                assert!(z.d().unwrap().is_zero());
            } else {
                assert!(matches!(z.d(), Err(Error::DegreeOutOfRange { .. })));
            }
            if j > 0 {
                assert!(z.d_star().unwrap().is_zero());
            } else {
                assert!(matches!(z.d_star(), Err(Error::DegreeOutOfRange { .. })));
            }
            assert!(z.hodge_laplacian().unwrap().is_zero());
        }
        let zero = GradedCochain::zero(n, 0.5).unwrap();
        assert!(zero.gauss_bonnet().unwrap().norm() == 0.0);
    }
}

#[test]
fn d_star_of_an_edge() {
    for h in MESHES {
        let e = cube("(0,0,0; 2; +)");
        let g = Cochain::indicator(&e, h).unwrap().d_star().unwrap();
        assert_eq!(g.support_len(), 2);
        let w = h.powi(-2);
        assert!((g.get(&cube("(0,1,0; +)")).unwrap() - c(w)).norm() < 1e-12 * w);
        assert!((g.get(&cube("(0,0,0; +)")).unwrap() - c(-w)).norm() < 1e-12 * w);
    }
}

/// `d*` is the weighted transpose of `d`, entry by entry, on a box.
#[test]
fn d_star_is_the_weighted_transpose_of_d() {
    for n in 1..=3 {
        for j in 0..n {
            for h in MESHES {
                let inner = box_cubes(n, j, -1, 1);
                let outer = box_cubes(n, j + 1, -2, 2);
                let d = dense(|f| f.d().unwrap(), &outer, &inner, h);
                let ds = dense(|f| f.d_star().unwrap(), &inner, &outer, h);
                let ratio = h.powi(-2);
                let diff = (&ds - d.transpose() * ratio).abs().max();
                assert!(diff <= 1e-12 * ratio, "n={n} j={j} h={h}: {diff}");
                assert!(d.iter().all(|&v| v == 0.0 || v == 1.0 || v == -1.0));
            }
        }
    }
}

#[test]
fn d_squared_vanishes_exactly() {
    let mut r = rng(2);
    for n in 1..=4 {
        for j in 0..(n as usize).saturating_sub(1) {
            for _ in 0..20 {
                let f = random_cochain(&mut r, n, j, 1.0, 8, 3, true);
                assert!(f.d().unwrap().d().unwrap().is_zero());
                let g = random_cochain(&mut r, n, j + 2, 0.5, 8, 3, true);
                let back = g.d_star().unwrap().d_star().unwrap();
                assert!(back.support().all(|(_, v)| v.norm() < 1e-9));
            }
        }
    }
}

#[test]
fn coface_degrees() {
    for n in 1..=4 {
        for h in MESHES {
            let w = h.powi(-2);
            let v = OrientedCube::vertex(vec![0; n], cubedirac::Sign::Plus);
            assert!((deg_m(&v, h).unwrap() - 2.0 * n as f64 * w).abs() < 1e-12 * w);
            if n >= 2 {
                let e = OrientedCube::positive(vec![0; n], vec![1]).unwrap();
                let expected = 2.0 * (n - 1) as f64 * w;
                assert!((deg_m(&e, h).unwrap() - expected).abs() < 1e-12 * w);
            }
            let facet = OrientedCube::positive(vec![0; n], (1..n).collect()).unwrap();
            assert!((deg_m(&facet, h).unwrap() - 2.0 * w).abs() < 1e-12 * w);
            let top = OrientedCube::positive(vec![0; n], (1..=n).collect()).unwrap();
            assert!(deg_m(&top, h).is_err());
        }
    }
}

#[test]
fn one_dimensional_laplacian_quadratic_form() {
    let mut f = Cochain::new(1, 0, 1.0).unwrap();
    let vals = [3.0, -1.0, 4.0, 1.0, -5.0];
    for (x, v) in vals.iter().enumerate() {
        f.set(
            &OrientedCube::vertex(vec![x as i64], cubedirac::Sign::Plus),
            c(*v),
        )
        .unwrap();
    }
    let q = f.hodge_laplacian().unwrap().inner(&f).unwrap();
    let mut padded = vec![0.0];
    padded.extend_from_slice(&vals);
    padded.push(0.0);
    let expected: f64 = padded.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    assert_eq!(q, c(expected));
    let lap = f.hodge_laplacian().unwrap();
    let at = |x: i64| {
        lap.get(&OrientedCube::vertex(vec![x], cubedirac::Sign::Plus))
            .unwrap()
    };
    assert_eq!(at(2), c(2.0 * 4.0 - (-1.0) - 1.0));
}

#[test]
fn laplacian_is_self_adjoint_and_nonnegative() {
    let mut r = rng(3);
    for n in 1..=3 {
        for j in 0..=n {
            for h in [1.0, 0.25] {
                let f = random_cochain(&mut r, n, j, h, 10, 2, false);
                let g = random_cochain(&mut r, n, j, h, 10, 2, false);
                let lf = f.hodge_laplacian().unwrap();
                let lg = g.hodge_laplacian().unwrap();
                let lhs = lf.inner(&g).unwrap();
                let rhs = f.inner(&lg).unwrap();
                assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
                assert!(lf.inner(&f).unwrap().re >= -1e-12);
            }
        }
    }
}

#[test]
fn graded_structure() {
    let mut r = rng(4);
    for n in 1..=3 {
        for h in MESHES {
            let f = random_graded(&mut r, n, h, 6, 2);
            let g = random_graded(&mut r, n, h, 6, 2);
            let df = f.gauss_bonnet().unwrap();
            let dg = g.gauss_bonnet().unwrap();
            let scale = 1.0 + df.norm() * g.norm();
            let lhs = df.inner(&g).unwrap();
            let rhs = f.inner(&dg).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * scale * h.powi(-2 * n as i32));

            let ddf = df.gauss_bonnet().unwrap();
            let lap = f.hodge_laplacian().unwrap();
            let tol = 1e-12 * (1.0 + lap.norm());
            assert!(ddf.max_abs_diff(&lap).unwrap() <= tol);

            let anti = f.tau().gauss_bonnet().unwrap().add(&df.tau()).unwrap();
            assert!(anti.norm() <= 1e-12 * (1.0 + df.norm()));
            assert_eq!(f.tau().tau(), f);

            assert_eq!(f.dirac_mass(0.0).unwrap(), df);
            let m = 0.7;
            let mm = f.dirac_mass(m).unwrap().dirac_mass(m).unwrap();
            let expected = lap.add(&f.scaled(c(m * m))).unwrap();
            assert!(mm.max_abs_diff(&expected).unwrap() <= 1e-12 * (1.0 + expected.norm()));
        }
    }
}

#[test]
fn gauss_bonnet_swaps_parity() {
    let mut f = GradedCochain::zero(2, 1.0).unwrap();
    f.component_mut(1)
        .set(&cube("(0,0; 1; +)"), c(1.0))
        .unwrap();
    let df = f.gauss_bonnet().unwrap();
    assert!(df.component(1).is_zero());
    assert!(!df.component(0).is_zero());
    assert!(!df.component(2).is_zero());
}

#[test]
fn pair_representation_examples() {
    let zero = GradedCochain::zero(1, 1.0).unwrap();
    assert_eq!(
        to_pair_representation_1d(&zero).unwrap(),
        PairSequence::default()
    );
    let flat = GradedCochain::zero(2, 1.0).unwrap();
    assert!(matches!(
        to_pair_representation_1d(&flat),
        Err(Error::DimensionMismatch(2, 1))
    ));

    let mut u = PairSequence::default();
    for (x, v) in [(0, 1.0), (1, -2.0), (2, 0.5)] {
        u.first.insert(x, c(v));
    }
    let f = from_pair_representation_1d(&u, 1.0).unwrap();
    let df = f.gauss_bonnet().unwrap();
    let got = to_pair_representation_1d(&df).unwrap();
    assert!(got.first.values().all(|v| v.norm() == 0.0));
    let mut expected = PairSequence::default();
    for x in -1..=2 {
        let at = |y: i64| u.first.get(&y).copied().unwrap_or_default();
        expected.second.insert(x, at(x + 1) - at(x));
    }
    assert!(got.max_abs_diff(&expected) == 0.0);
}

#[test]
fn pair_representation_is_unitary_and_intertwines() {
    let mut r = rng(5);
    for h in MESHES {
        for _ in 0..25 {
            let f = random_graded(&mut r, 1, h, 10, 6);
            let p = to_pair_representation_1d(&f).unwrap();
            assert!((p.norm() - f.norm()).abs() <= 1e-12 * (1.0 + f.norm()));
            let back = from_pair_representation_1d(&p, h).unwrap();
            assert!(back.max_abs_diff(&f).unwrap() <= 1e-12);
            for m in [0.0, 1.5] {
                let lhs = to_pair_representation_1d(&f.dirac_mass(m).unwrap()).unwrap();
                let rhs = p.dirac_mass_1d(m, h);
                assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + lhs.norm()));
            }
        }
    }
}

#[test]
fn json_lines_header_and_rows() {
    let mut f = Cochain::new(2, 1, 0.5).unwrap();
    f.set(&cube("(1,2; 2; +)"), C64::new(1.5, -0.25)).unwrap();
    let mut buf = Vec::new();
    f.write_json_lines(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let header: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(header["n"], 2);
    assert_eq!(header["j"], 1);
    assert_eq!(header["h"].as_f64(), Some(0.5));
    let row: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(row["cube"], "(1,2; 2; +)");
    assert_eq!(Cochain::read_json_lines(buf.as_slice()).unwrap(), f);
    assert!(Cochain::read_json_lines("{\"n\":2}".as_bytes()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjointness_on_random_pairs(seed in any::<u64>(), n in 1usize..=4, h_idx in 0usize..4) {
        let mut r = rng(seed);
        let h = MESHES[h_idx];
        for j in 0..n {
            let f = random_cochain(&mut r, n, j, h, 6, 2, false);
            let g = random_cochain(&mut r, n, j + 1, h, 6, 2, false);
            let lhs = f.d().unwrap().inner(&g).unwrap();
            let rhs = f.inner(&g.d_star().unwrap()).unwrap();
            let scale = 1.0 + f.d().unwrap().norm() * g.norm();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn nilpotent_on_integer_cochains(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        for j in 0..n - 1 {
            let mut f = random_cochain(&mut r, n, j, 1.0, 5, 4, true);
            f.add_at(&OrientedCube::positive(vec![0; n], (1..=j).collect()).unwrap(),
                random_integer_value(&mut r)).unwrap();
            prop_assert!(f.d().unwrap().d().unwrap().is_zero());
        }
    }
}
