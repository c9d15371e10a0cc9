use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spdgeom::decompose::{geodesic_project, mostow_spd};
use spdgeom::manifold::{distance, geodesic_symmetry, riem_exp, riem_log};
use spdgeom::sample::{random_orthogonal, random_spd};
use spdgeom::{GeodesicSegment, ProjectionOptions, SpdMatrix, Subspace};

fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

// Block-diagonal orthogonal matrix with the given block sizes.
fn block_orthogonal(rng: &mut ChaCha8Rng, sizes: &[usize]) -> DMatrix<f64> {
    let n = sizes.iter().sum();
    let mut k = DMatrix::zeros(n, n);
    let mut start = 0;
    for &s in sizes {
        k.view_mut((start, start), (s, s))
            .copy_from(&random_orthogonal(rng, s));
        start += s;
    }
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_commutes_with_block_rotations(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = [n.div_ceil(2), n / 2];
        let e = Subspace::block_diagonal(&sizes).unwrap();
        let x = random_spd(&mut rng, n, 1e3);
        let k = block_orthogonal(&mut rng, &sizes);
        let opts = ProjectionOptions::default();
        let p = geodesic_project(&x, &e, &opts).unwrap();
        let rotated = SpdMatrix::from_matrix(&k * x.as_matrix() * k.transpose()).unwrap();
        let q = geodesic_project(&rotated, &e, &opts).unwrap();
        let expected = &k * p.pi.as_matrix() * k.transpose();
        prop_assert!(rel(q.pi.as_matrix(), &expected) <= 1e-9);
    }

    #[test]
    fn projection_is_idempotent(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = Subspace::diagonal(n);
        let x = random_spd(&mut rng, n, 1e3);
        let opts = ProjectionOptions::default();
        let p = geodesic_project(&x, &e, &opts).unwrap();
        let again = geodesic_project(&p.pi, &e, &opts).unwrap();
        prop_assert!(again.iterations <= 1);
        prop_assert!(rel(again.pi.as_matrix(), p.pi.as_matrix()) <= 1e-12);
    }

    #[test]
    fn mostow_factors_commute_with_scaling(seed in any::<u64>(), n in 2usize..6, s in 0.1f64..10.0) {
        // exp(E) contains the multiples of I, so x ↦ s·x moves only e
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = Subspace::diagonal(n);
        let x = random_spd(&mut rng, n, 1e2);
        let opts = ProjectionOptions::default();
        let m = mostow_spd(&x, &e, &opts).unwrap();
        let scaled = SpdMatrix::from_matrix(x.as_matrix() * s).unwrap();
        let ms = mostow_spd(&scaled, &e, &opts).unwrap();
        prop_assert!(rel(ms.f.as_matrix(), m.f.as_matrix()) <= 1e-9);
        prop_assert!(rel(ms.e.as_matrix(), &(m.e.as_matrix() * s.sqrt())) <= 1e-9);
    }

    #[test]
    fn geodesic_points_split_the_distance(seed in any::<u64>(), n in 2usize..6, t in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_spd(&mut rng, n, 1e2);
        let y = random_spd(&mut rng, n, 1e2);
        let seg = GeodesicSegment::new(x.clone(), y.clone()).unwrap();
        let p = seg.at(t).unwrap();
        let d = seg.length();
        prop_assert!((distance(&x, &p).unwrap() - t * d).abs() <= 1e-9 * d.max(1.0));
        prop_assert!((distance(&p, &y).unwrap() - (1.0 - t) * d).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn exp_inverts_log(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_spd(&mut rng, n, 1e2);
        let y = random_spd(&mut rng, n, 1e2);
        let v = riem_log(&x, &y).unwrap();
        let back = riem_exp(&x, &v).unwrap();
        prop_assert!(rel(back.as_matrix(), y.as_matrix()) <= 1e-10);
    }

    #[test]
    fn geodesic_symmetry_is_an_involutive_isometry(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_spd(&mut rng, n, 50.0);
        let y = random_spd(&mut rng, n, 50.0);
        let sy = geodesic_symmetry(&x, &y).unwrap();
        let back = geodesic_symmetry(&x, &sy).unwrap();
        prop_assert!(rel(back.as_matrix(), y.as_matrix()) <= 1e-9);
        let d = distance(&x, &y).unwrap();
        prop_assert!((distance(&x, &sy).unwrap() - d).abs() <= 1e-9 * d.max(1.0));
    }
}
