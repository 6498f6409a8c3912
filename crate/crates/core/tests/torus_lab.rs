use std::f64::consts::PI;

use cubedirac::torus_lab::{assemble, closed_form_spectrum, to_dense, to_triplets};
use cubedirac::{binomial, Cochain, Error, C64};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(r: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| r.random_range(-1.0..1.0))
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn grading(tc: &cubedirac::TorusComplex) -> DMatrix<f64> {
    let offsets = tc.offsets();
    let size = tc.total_dim();
    DMatrix::from_fn(size, size, |r, c| {
        if r != c {
            0.0
        } else {
            let j = (0..=tc.ambient_dim()).rfind(|&j| offsets[j] <= r).unwrap();
            if j % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
    })
}

#[test]
fn circle_difference_matrix_is_circulant() {
    let tc = assemble(1, 4, 1.0).unwrap();
    let d = to_dense(tc.d(0).unwrap());
    let first: Vec<f64> = d.row(0).iter().copied().collect();
    assert_eq!(first, vec![-1.0, 1.0, 0.0, 0.0]);
    for e in 1..4 {
        for v in 0..4 {
            assert_eq!(d[(e, v)], d[(0, (v + 4 - e) % 4)]);
        }
    }
}

#[test]
fn cube_counts() {
    let tc = assemble(2, 5, 1.0).unwrap();
    assert_eq!((tc.dim(0), tc.dim(1), tc.dim(2)), (25, 50, 25));
    assert_eq!(tc.total_dim(), 100);
    assert_eq!(tc.offsets(), vec![0, 25, 75, 100]);
    for n in 1..=4 {
        let tc = assemble(n, 3, 0.5).unwrap();
        for j in 0..=n {
            assert_eq!(tc.dim(j), binomial(n, j) * 3usize.pow(n as u32));
        }
        for j in 0..n {
            let d = tc.d(j).unwrap();
            assert_eq!(d.rows(), tc.dim(j + 1));
            assert_eq!(d.cols(), tc.dim(j));
            assert!(d.iter().all(|(v, _)| *v == 1.0 || *v == -1.0));
            for row in 0..d.rows() {
                assert_eq!(d.outer_view(row).unwrap().nnz(), 2 * (j + 1));
            }
        }
        assert!(tc.d(n).is_err());
    }
}

#[test]
fn composition_of_incidences_vanishes() {
    for (n, period) in [(2, 3), (3, 4), (4, 3)] {
        let tc = assemble(n, period, 1.0).unwrap();
        for j in 0..n - 1 {
            let prod = tc.d(j + 1).unwrap() * tc.d(j).unwrap();
            assert!(prod.iter().all(|(v, _)| *v == 0.0), "n={n} j={j}");
        }
    }
}

#[test]
fn incidence_columns_agree_with_cochain_derivative() {
    for (n, period) in [(1, 5), (2, 4), (3, 3)] {
        let tc = assemble(n, period, 1.0).unwrap();
        for j in 0..n {
            let d = to_dense(tc.d(j).unwrap());
            for col in 0..tc.dim(j) {
                let cube = tc.cube_at(j, col).unwrap();
                assert_eq!(tc.cube_index(&cube).unwrap(), col);
                let df = Cochain::indicator(&cube, 1.0).unwrap().d().unwrap();
                let mut expected = vec![0.0; tc.dim(j + 1)];
                for (s, v) in df.support() {
                    expected[tc.cube_index(s).unwrap()] += v.re;
                }
                let got: Vec<f64> = d.column(col).iter().copied().collect();
                assert_eq!(got, expected);
            }
        }
    }
}

#[test]
fn adjoint_carries_the_measure_ratio() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    for h in [1.0, 0.5, 0.125] {
        let tc = assemble(3, 3, h).unwrap();
        for j in 0..3 {
            let f = random_vector(&mut r, tc.dim(j));
            let g = random_vector(&mut r, tc.dim(j + 1));
            let df = to_dense(tc.d(j).unwrap()) * &f;
            let dsg = to_dense(&tc.d_star(j + 1).unwrap()) * &g;
            let lhs = h.powi(-2 * (j as i32 + 1)) * df.dot(&g);
            let rhs = h.powi(-2 * j as i32) * f.dot(&dsg);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
        assert!(tc.d_star(0).is_err());
        assert!(tc.d_star(4).is_err());
    }
}

#[test]
fn harmonic_dimensions_are_binomial() {
    assert_eq!(
        assemble(1, 5, 1.0).unwrap().harmonic_dimensions().unwrap(),
        vec![1, 1]
    );
    assert_eq!(
        assemble(2, 4, 1.0).unwrap().harmonic_dimensions().unwrap(),
        vec![1, 2, 1]
    );
    assert_eq!(
        assemble(3, 3, 1.0).unwrap().harmonic_dimensions().unwrap(),
        vec![1, 3, 3, 1]
    );
    for n in 1..=3 {
        for period in 3..=5 {
            let dims = assemble(n, period, 0.25)
                .unwrap()
                .harmonic_dimensions()
                .unwrap();
            let expected: Vec<usize> = (0..=n).map(|j| binomial(n, j)).collect();
            assert_eq!(dims, expected, "n={n} N={period}");
            let euler: i64 = dims
                .iter()
                .enumerate()
                .map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(euler, 0);
        }
    }
}

/// Rank of an integer matrix over `Z/p` by Gaussian elimination.
fn rank_mod_p(m: &DMatrix<f64>, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| (m[(r, c)] as i64).rem_euclid(p))
                .collect()
        })
        .collect();
    let pow = |mut b: i64, mut e: i64| {
        let mut acc = 1i64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..m.ncols() {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow(a[rank][c], p - 2);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % p;
                for k in 0..m.ncols() {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank-nullity on `d` alone, with exact ranks.
#[test]
fn betti_numbers_by_rank_nullity() {
    for (n, period) in [(1, 3), (2, 3), (2, 4), (2, 5), (3, 3)] {
        let tc = assemble(n, period, 1.0).unwrap();
        let rank = |j: usize| -> usize {
            if j >= n {
                return 0;
            }
            let d = to_dense(tc.d(j).unwrap());
            rank_mod_p(&d, 1_000_000_007).max(rank_mod_p(&d, 998_244_353))
        };
        let betti: Vec<usize> = (0..=n)
            .map(|j| tc.dim(j) - rank(j) - if j > 0 { rank(j - 1) } else { 0 })
            .collect();
        assert_eq!(betti, tc.harmonic_dimensions().unwrap());
    }
}

#[test]
fn hodge_split_properties() {
    let mut r = ChaCha8Rng::seed_from_u64(22);
    for (n, period) in [(1, 5), (2, 4), (3, 3)] {
        let tc = assemble(n, period, 1.0).unwrap();
        for j in 0..=n {
            let f = random_vector(&mut r, tc.dim(j));
            let s = tc.hodge_split(&f, j).unwrap();
            assert!((&s.exact + &s.harmonic + &s.coexact - &f).amax() <= 1e-10);
            assert!(
                s.exact.dot(&s.harmonic).abs() <= 1e-10,
                "n={n} j={j}: {}",
                s.exact.dot(&s.harmonic)
            );
            assert!(s.exact.dot(&s.coexact).abs() <= 1e-10);
            assert!(s.harmonic.dot(&s.coexact).abs() <= 1e-10);
            assert!((tc.laplacian_dense(j).unwrap() * &s.harmonic).amax() <= 1e-10);
            if j > 0 {
                let g = random_vector(&mut r, tc.dim(j - 1));
                let dg = to_dense(tc.d(j - 1).unwrap()) * g;
                let sg = tc.hodge_split(&dg, j).unwrap();
                assert!(sg.harmonic.amax() <= 1e-10);
                assert!(sg.coexact.amax() <= 1e-10);
                assert!((sg.exact - dg).amax() <= 1e-10);
            }
            if j < n {
                assert!((to_dense(tc.d(j).unwrap()) * &s.exact).amax() <= 1e-10);
            }
            let harm_dim = tc.harmonic_dimensions().unwrap()[j];
            assert!(harm_dim >= 1);
        }
        let constant = DVector::from_element(tc.dim(0), 1.0);
        let s = tc.hodge_split(&constant, 0).unwrap();
        assert!((s.harmonic - constant).amax() <= 1e-10);
        assert!(s.coexact.amax() <= 1e-10);
        assert_eq!(s.exact.amax(), 0.0);
        assert!(matches!(
            tc.hodge_split(&DVector::zeros(1), 0),
            Err(Error::DimensionMismatch(1, _))
        ));
    }
}

#[test]
fn quotient_with_period_two_by_hand() {
    // Two vertices, two edges: e0 = [v0, v1], e1 = [v1, v0].
    let d = DMatrix::from_row_slice(2, 2, &[-1.0, 1.0, 1.0, -1.0]);
    let mut full = DMatrix::<f64>::zeros(4, 4);
    full.view_mut((2, 0), (2, 2)).copy_from(&d);
    full.view_mut((0, 2), (2, 2)).copy_from(&d.transpose());
    let ev = sorted_eigenvalues(full);
    let expected = [-2.0, 0.0, 0.0, 2.0];
    for (a, b) in ev.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
    for (a, b) in closed_form_spectrum(1, 2, 1.0).iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(assemble(1, 2, 1.0).unwrap_err(), Error::PeriodTooSmall(2));
}

#[test]
fn period_too_small_is_explained() {
    for period in [0, 1, 2] {
        let err = assemble(2, period, 1.0).unwrap_err();
        assert_eq!(err, Error::PeriodTooSmall(period));
        assert!(err.to_string().contains("N >= 3"));
    }
    assert!(assemble(0, 4, 1.0).is_err());
    assert!(assemble(2, 4, 0.0).is_err());
}

#[test]
fn band_edge_on_the_plane() {
    let tc = assemble(2, 8, 1.0).unwrap();
    let spec = tc.dirac_spectrum().unwrap();
    let top = *spec.last().unwrap();
    assert!((top - 8f64.sqrt()).abs() < 1e-12);
    assert!((spec[0] + 8f64.sqrt()).abs() < 1e-12);
    let circle = assemble(1, 8, 1.0).unwrap().dirac_spectrum().unwrap();
    assert!((circle.last().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn spectrum_matches_full_diagonalization() {
    for (n, period) in [
        (1, 3),
        (1, 16),
        (1, 64),
        (2, 3),
        (2, 8),
        (2, 11),
        (3, 3),
        (3, 4),
        (4, 3),
    ] {
        for h in [1.0, 0.25] {
            let tc = assemble(n, period, h).unwrap();
            assert!(tc.total_dim() <= 1296);
            let dense = sorted_eigenvalues(to_dense(&tc.dirac_matrix()));
            let bloch = tc.dirac_spectrum().unwrap();
            let closed = closed_form_spectrum(n, period, h);
            assert_eq!(dense.len(), tc.total_dim());
            assert_eq!(bloch.len(), dense.len());
            assert_eq!(closed.len(), dense.len());
            let scale = 1.0 / h;
            for ((a, b), c) in dense.iter().zip(&bloch).zip(&closed) {
                assert!(
                    (a - c).abs() <= 1e-10 * scale,
                    "n={n} N={period}: dense {a} vs {c}"
                );
                assert!(
                    (b - c).abs() <= 1e-10 * scale,
                    "n={n} N={period}: bloch {b} vs {c}"
                );
            }
        }
    }
}

#[test]
fn band_edge_gap_shrinks_quadratically() {
    let edge = 2.0;
    let mut prev = f64::INFINITY;
    for period in [5, 11, 21, 41, 81] {
        let top = *closed_form_spectrum(1, period, 1.0).last().unwrap();
        let gap = edge - top;
        let predicted = 2.0 * (1.0 - (PI / (2.0 * period as f64)).cos());
        assert!((gap - predicted).abs() < 1e-12);
        assert!(gap < prev);
        assert!(gap * (period * period) as f64 <= PI * PI / 4.0 + 1e-9);
        prev = gap;
    }
    for period in [4, 16, 64] {
        let top = *closed_form_spectrum(1, period, 1.0).last().unwrap();
        assert!((top - edge).abs() < 1e-12);
    }
}

#[test]
fn dirac_matrix_structure() {
    for (n, period, h) in [(1, 6, 0.5), (2, 4, 1.0), (3, 3, 0.25)] {
        let tc = assemble(n, period, h).unwrap();
        let dm = to_dense(&tc.dirac_matrix());
        assert_eq!(dm, dm.transpose());
        let g = grading(&tc);
        assert_eq!(
            &g * &dm + &dm * &g,
            DMatrix::zeros(tc.total_dim(), tc.total_dim())
        );
        let sq = &dm * &dm;
        let offsets = tc.offsets();
        let mut block = DMatrix::<f64>::zeros(tc.total_dim(), tc.total_dim());
        for j in 0..=n {
            block
                .view_mut((offsets[j], offsets[j]), (tc.dim(j), tc.dim(j)))
                .copy_from(&tc.laplacian_dense(j).unwrap());
        }
        assert!((sq - block).amax() <= 1e-12 / (h * h));
        let radius = dm.clone().singular_values().max();
        assert!(radius <= (4.0 * n as f64).sqrt() / h * (1.0 + 1e-12));
    }
}

#[test]
fn square_equals_laplacian_exactly_at_unit_mesh() {
    let tc = assemble(3, 4, 1.0).unwrap();
    let dm = to_dense(&tc.dirac_matrix());
    let sq = &dm * &dm;
    let offsets = tc.offsets();
    for j in 0..=3 {
        let lap = tc.laplacian_dense(j).unwrap();
        let view = sq.view((offsets[j], offsets[j]), (tc.dim(j), tc.dim(j)));
        assert_eq!(view.into_owned(), lap);
        assert!(lap.diagonal().iter().all(|v| *v == 6.0));
    }
}

#[test]
fn plane_wave_eigenvectors() {
    let tc = assemble(1, 7, 0.5).unwrap();
    let dm = to_dense(&tc.dirac_matrix());
    let mut dc = DMatrix::<C64>::zeros(14, 14);
    for (i, v) in dm.iter().enumerate() {
        dc[(i % 14, i / 14)] = C64::new(*v, 0.0);
    }
    for k in 0..7 {
        let a = (C64::from_polar(1.0, 2.0 * PI * k as f64 / 7.0) - 1.0) / 0.5;
        let lam = a.norm();
        if lam == 0.0 {
            continue;
        }
        let mut v = nalgebra::DVector::<C64>::zeros(14);
        for mu in 0..7 {
            let wave = C64::from_polar(1.0, 2.0 * PI * (k * mu) as f64 / 7.0);
            v[mu] = wave * lam;
            v[7 + mu] = wave * a;
        }
        let dv = &dc * &v;
        assert!((dv - v.map(|c| c * lam)).camax() < 1e-12);
    }
}

#[test]
fn triplet_export() {
    let tc = assemble(1, 3, 1.0).unwrap();
    let text = to_triplets(tc.d(0).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.contains(&"0 0 -1") && lines.contains(&"0 1 1"));
    assert!(lines.contains(&"2 2 -1") && lines.contains(&"2 0 1"));
    let full = to_triplets(&tc.dirac_matrix());
    let mut rebuilt = DMatrix::<f64>::zeros(6, 6);
    for line in full.lines() {
        let f: Vec<&str> = line.split(' ').collect();
        rebuilt[(
            f[0].parse::<usize>().unwrap(),
            f[1].parse::<usize>().unwrap(),
        )] = f[2].parse().unwrap();
    }
    assert_eq!(rebuilt, to_dense(&tc.dirac_matrix()));
}
