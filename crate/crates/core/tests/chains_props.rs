use fillbound::chains::{boundary, boundary_matrix, is_cycle, mass, Chain, SimplicialComplex};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_complex(rng: &mut ChaCha8Rng, max_n: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_n);
    let count = rng.gen_range(0..=12);
    let simplices: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(rng);
            vs.truncate(rng.gen_range(1..=n.min(5)));
            vs
        })
        .collect();
    SimplicialComplex::new(n, simplices).unwrap()
}

fn random_chain(rng: &mut ChaCha8Rng, k: &SimplicialComplex, dim: usize) -> Chain {
    Chain::from_terms(dim, (0..k.count(dim)).map(|i| (i, rng.gen_range(-4i64..=4))))
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn boundary_squares_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_complex(&mut rng, 12);
        for dim in 2..=k.dimension() {
            let c = random_chain(&mut rng, &k, dim);
            let d = boundary(&k, &c).unwrap();
            prop_assert!(boundary(&k, &d).unwrap().is_zero());
            prop_assert!(is_cycle(&k, &d).unwrap());
        }
    }

    #[test]
    fn simplex_counts_are_binomially_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_complex(&mut rng, 12);
        for dim in 0..=k.dimension() {
            prop_assert!(k.count(dim) as u64 <= binom(k.n_vertices() as u64, dim as u64 + 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matrix_agrees_with_traversal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_complex(&mut rng, 9);
        for dim in 1..=k.dimension() {
            let c = random_chain(&mut rng, &k, dim);
            let dense = boundary_matrix(&k, dim).unwrap().mul_vec(&c.to_dense(k.count(dim))).unwrap();
            prop_assert_eq!(Chain::from_dense(dim - 1, &dense), boundary(&k, &c).unwrap());
        }
    }

    #[test]
    fn mass_is_subadditive_and_homogeneous(seed in any::<u64>(), n in -6i64..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_complex(&mut rng, 10);
        let dim = rng.gen_range(0..=k.dimension());
        let w: Vec<f64> = (0..k.count(dim)).map(|_| rng.gen_range(0.1..3.0)).collect();
        let (a, b) = (random_chain(&mut rng, &k, dim), random_chain(&mut rng, &k, dim));
        let (ma, mb) = (mass(&w, &a).unwrap(), mass(&w, &b).unwrap());
        prop_assert!(mass(&w, &(&a + &b)).unwrap() <= (ma + mb) * (1.0 + 1e-12));
        let scaled = mass(&w, &a.scaled(&BigInt::from(n))).unwrap();
        prop_assert!((scaled - n.unsigned_abs() as f64 * ma).abs() <= 1e-12 * scaled.max(1.0));
    }
}

#[test]
fn orientation_signs() {
    let k = SimplicialComplex::new(3, [vec![0, 1, 2]]).unwrap();
    let a = Chain::from_simplices(&k, 1, [(vec![1, 0], 1i64)]).unwrap();
    let b = Chain::from_simplices(&k, 1, [(vec![0, 1], -1i64)]).unwrap();
    assert_eq!(a, b);
    let t = Chain::from_simplices(&k, 2, [(vec![2, 0, 1], 1i64)]).unwrap();
    assert_eq!(t, Chain::from_simplices(&k, 2, [(vec![0, 1, 2], 1i64)]).unwrap());
    let d = boundary(&k, &t).unwrap();
    let expect =
        Chain::from_simplices(&k, 1, [(vec![1, 2], 1i64), (vec![0, 2], -1), (vec![0, 1], 1)]).unwrap();
    assert_eq!(d, expect);
}

#[test]
fn rejects_bad_simplices() {
    assert!(SimplicialComplex::new(3, [vec![0, 3]]).is_err());
    assert!(SimplicialComplex::new(3, [vec![0, 0]]).is_err());
    let k = SimplicialComplex::new(3, [vec![0, 1]]).unwrap();
    assert!(Chain::from_simplices(&k, 1, [(vec![1, 2], 1i64)]).is_err());
    assert!(mass(&[1.0], &Chain::elementary(1, 3)).is_err());
}
