use nalgebra::DMatrix;
use proptest::prelude::*;
use scd_stability::rational::Q;
use scd_stability::subspace::{spectral_norm_symmetric, symmetric_eigenvalues, ExactSubspace, Subspace};

/// `(split, columns)` with `n` generic columns in `R^(n+m)`, so the span is
/// an element of `Z_nm`.
fn graph_like() -> impl Strategy<Value = ((usize, usize), Vec<Vec<f64>>)> {
    (1usize..=6, 0usize..=6).prop_flat_map(|(n, m)| {
        let col = prop::collection::vec(-5.0f64..5.0, n + m);
        (Just((n, m)), prop::collection::vec(col, n))
    })
}

type Columns = Vec<Vec<f64>>;

fn pair_in_same_space() -> impl Strategy<Value = ((usize, usize), Columns, Columns)> {
    (1usize..=6, 0usize..=6).prop_flat_map(|(n, m)| {
        let col = prop::collection::vec(-5.0f64..5.0, n + m);
        (Just((n, m)), prop::collection::vec(col.clone(), n), prop::collection::vec(col, n))
    })
}

fn full_dim(split: (usize, usize), cols: &[Vec<f64>]) -> Option<Subspace> {
    let l = Subspace::span(cols, split).ok()?;
    (l.dim() == split.0).then_some(l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjoint_is_an_involution((split, cols) in graph_like()) {
        if let Some(l) = full_dim(split, &cols) {
            let back = l.adjoint().unwrap().adjoint().unwrap();
            prop_assert_eq!(back.split(), split);
            prop_assert!(back.distance(&l).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn adjoint_is_an_isometry((split, a, b) in pair_in_same_space()) {
        if let (Some(l1), Some(l2)) = (full_dim(split, &a), full_dim(split, &b)) {
            let d = l1.distance(&l2).unwrap();
            let d_star = l1.adjoint().unwrap().distance(&l2.adjoint().unwrap()).unwrap();
            prop_assert!((d - d_star).abs() <= 1e-8, "{} vs {}", d, d_star);
            prop_assert!(d <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn complement_projections_sum_to_identity((split, cols) in graph_like(), drop in 0usize..3) {
        let keep = cols.len().saturating_sub(drop);
        let l = Subspace::span(&cols[..keep], split).unwrap();
        let c = l.complement();
        prop_assert_eq!(l.dim() + c.dim(), l.ambient());
        let sum = l.projection() + c.projection();
        let id = DMatrix::<f64>::identity(l.ambient(), l.ambient());
        prop_assert!((sum - id).amax() <= 1e-9);
        let p = l.projection();
        prop_assert!((&p * &p - &p).amax() <= 1e-9);
        prop_assert!((p.trace() - l.dim() as f64).abs() <= 1e-9);
    }

    #[test]
    fn coordinate_intersection_stays_inside((split, cols) in graph_like(), mask_bits in any::<u16>()) {
        let l = Subspace::span(&cols, split).unwrap();
        let mask: Vec<bool> = (0..l.ambient()).map(|i| mask_bits & (1 << i) != 0).collect();
        let s = l.intersect_coordinate(&mask).unwrap();
        for v in s.basis_vectors() {
            prop_assert!(l.contains(&v, 1e-8));
            for (i, &zeroed) in mask.iter().enumerate() {
                if zeroed {
                    prop_assert!(v[i].abs() <= 1e-8);
                }
            }
        }
        // dim(L ∩ E) ≥ dim L − #masked
        let masked = mask.iter().filter(|&&z| z).count();
        prop_assert!(s.dim() + masked >= l.dim());
    }

    #[test]
    fn jacobi_matches_a_reference_eigensolver(entries in prop::collection::vec(-3.0f64..3.0, 36), n in 1usize..=6) {
        let a = DMatrix::from_fn(n, n, |i, j| entries[i * 6 + j] + entries[j * 6 + i]);
        let mut ours = symmetric_eigenvalues(&a);
        let mut theirs: Vec<f64> = nalgebra::SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
        ours.sort_by(f64::total_cmp);
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
        let norm = theirs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        prop_assert!((spectral_norm_symmetric(&a) - norm).abs() <= 1e-9 * (1.0 + norm));
    }

    /// Exact and floating adjoints agree on integer data.
    #[test]
    fn exact_and_float_adjoints_agree(split in (1usize..=3, 0usize..=3), seed in prop::collection::vec(-3i64..=3, 36)) {
        let (n, m) = split;
        let vectors: Vec<Vec<Q>> = (0..n)
            .map(|j| (0..n + m).map(|i| Q::from_integer(seed[j * 6 + i].into())).collect())
            .collect();
        let exact = ExactSubspace::span(split, &vectors);
        if exact.dim() == n {
            let float = exact.to_float();
            let d = exact.adjoint().unwrap().to_float().distance(&float.adjoint().unwrap()).unwrap();
            prop_assert!(d <= 1e-8);
        }
    }
}

/// Perturbing a full-column-rank map by `10^-t` moves the image by at most a
/// fixed multiple of `10^-t`.
#[test]
fn linear_image_is_continuous() {
    let l = Subspace::span(&[vec![1.0, 2.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, -1.0]], (2, 2)).unwrap();
    let a = DMatrix::from_row_slice(4, 4, &[2.0, 1.0, 0.0, 0.0, 0.0, 1.0, 3.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
    let e = DMatrix::from_fn(4, 4, |i, j| ((i * 4 + j) as f64 * 0.37).sin());
    let base = l.linear_image(&a, None).unwrap();
    let mut previous = f64::INFINITY;
    let mut constant: f64 = 0.0;
    for t in 3..=8 {
        let h = 10f64.powi(-t);
        let d = l.linear_image(&(&a + &e * h), None).unwrap().distance(&base).unwrap();
        assert!(d <= previous);
        previous = d;
        constant = constant.max(d / h);
    }
    assert!(constant < 10.0, "fitted constant {constant}");
}

#[test]
fn random_pairs_never_exceed_unit_distance() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let a = scd_stability::fixtures::random_square_subspace(&mut rng, (3, 2));
        let b = scd_stability::fixtures::random_square_subspace(&mut rng, (3, 2));
        assert!(a.distance(&b).unwrap() <= 1.0 + 1e-9);
    }
}
