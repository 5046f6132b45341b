use super::*;
use crate::oracle::relation_chase;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn algebra(m: u64, d: usize, q: u64, t: u64) -> CyclicAlgebra {
    CyclicAlgebra::from_params(m, d, q, t).unwrap()
}

fn random(alg: &CyclicAlgebra, rng: &mut impl Rng) -> AElem {
    let q = alg.q();
    let v: Vec<u64> = (0..alg.dimension()).map(|_| rng.random_range(0..q)).collect();
    alg.from_flat(&v).unwrap()
}

fn random_l(alg: &CyclicAlgebra, rng: &mut impl Rng) -> LElem {
    random(alg, rng).coords()[0].clone()
}

fn table(alg: &CyclicAlgebra, x: &AElem) -> Vec<Vec<u64>> {
    alg.to_flat(x).chunks(alg.d()).map(<[u64]>::to_vec).collect()
}

#[test]
fn exhaustive_q3_products_match_relation_chasing() {
    let alg = algebra(1, 2, 3, 1);
    assert_eq!(alg.gamma_k().values(), &[2]);
    let elems: Vec<AElem> = (0..81u64)
        .map(|mut k| {
            let v: Vec<u64> = (0..4)
                .map(|_| {
                    let c = k % 3;
                    k /= 3;
                    c
                })
                .collect();
            alg.from_flat(&v).unwrap()
        })
        .collect();
    for x in &elems {
        for y in &elems {
            let want = relation_chase(&table(&alg, x), &table(&alg, y), 2, 3, 2);
            assert_eq!(table(&alg, &alg.mul_naive(x, y)), want);
            assert_eq!(table(&alg, &alg.mul(x, y)), want);
        }
    }
}

#[test]
fn relation_chasing_agrees_on_q2() {
    let alg = algebra(1, 2, 2, 1);
    for a in 0..16u64 {
        for b in 0..16u64 {
            let x = alg.from_flat(&(0..4).map(|i| (a >> i) & 1).collect::<Vec<_>>()).unwrap();
            let y = alg.from_flat(&(0..4).map(|i| (b >> i) & 1).collect::<Vec<_>>()).unwrap();
            let want = relation_chase(&table(&alg, &x), &table(&alg, &y), 2, 2, 1);
            assert_eq!(table(&alg, &alg.mul(&x, &y)), want);
        }
    }
}

#[test]
fn generator_relations() {
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    for (m, d, q, t) in [(1, 2, 5, 1), (16, 2, 97, 1), (9, 3, 19, 2), (16, 4, 97, 3)] {
        let alg = algebra(m, d, q, t);
        let u = alg.u_power(1 % d);
        // u^d = gamma
        let mut acc = alg.one();
        for _ in 0..d {
            acc = alg.mul_naive(&acc, &u);
        }
        assert_eq!(acc, alg.embed_k(&alg.gamma_k()));
        // x u = u theta(x)
        let x = random_l(&alg, &mut rng);
        let lhs = alg.mul_naive(&alg.embed_l(&x), &u);
        let rhs = alg.mul_naive(&u, &alg.embed_l(&alg.tower().theta(&x, 1)));
        assert_eq!(lhs, rhs);
        assert_eq!(alg.mul(&alg.embed_l(&x), &u), lhs);
    }
}

#[test]
fn phi_small_cases() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let alg = algebra(16, 2, 97, 1);
    let tower = alg.tower();
    assert_eq!(alg.phi(&alg.one()).normalize(tower), PhiMatrix::identity(tower));
    let x = random(&alg, &mut rng);
    let (x0, x1) = (&x.coords()[0], &x.coords()[1]);
    let phi = alg.phi(&x).normalize(tower);
    assert_eq!(phi.entry(0, 0), x0);
    assert_eq!(phi.entry(0, 1), &tower.to_coeffs(&alg.gamma_l(&tower.theta(x1, 1))));
    assert_eq!(phi.entry(1, 0), x1);
    assert_eq!(phi.entry(1, 1), &tower.theta(x0, 1));
}

#[test]
fn naive_path_uses_d_cubed_k_multiplications() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    for d in [1usize, 2, 4] {
        let alg = algebra(16, d, 97, 1);
        let (x, y) = (random(&alg, &mut rng), random(&alg, &mut rng));
        let before = alg.ring().counters().snapshot();
        alg.mul_naive(&x, &y);
        let used = alg.ring().counters().snapshot() - before;
        assert_eq!(used.k_mul, (d * d * d) as u64);
        let before = alg.ring().counters().snapshot();
        alg.mul(&x, &y);
        let used = alg.ring().counters().snapshot() - before;
        assert_eq!(used.k_mul, 0);
        assert_eq!(used.forward, (2 * d * d) as u64);
        assert_eq!(used.inverse, (d * d) as u64);
    }
}

#[test]
fn blocks_match_naive_on_many_pairs() {
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    for (m, d, q, t) in [(16, 2, 97, 1), (1, 2, 5, 1), (9, 3, 19, 2), (16, 4, 97, 1), (16, 1, 97, 0)]
    {
        let alg = algebra(m, d, q, t);
        for _ in 0..200 {
            let (x, y) = (random(&alg, &mut rng), random(&alg, &mut rng));
            assert_eq!(alg.mul(&x, &y), alg.mul_naive(&x, &y), "m={m} d={d}");
        }
    }
}

#[test]
fn per_block_law_matches_vectorised_product() {
    let mut rng = ChaCha20Rng::seed_from_u64(14);
    let alg = algebra(16, 4, 97, 1);
    let (x, y) = (random(&alg, &mut rng), random(&alg, &mut rng));
    let (bx, by) = (alg.decompose(&x), alg.decompose(&y));
    let prod = bx.mul(&by, &alg);
    for i in 0..bx.len() {
        assert_eq!(bx.block(i, &alg).mul(&by.block(i, &alg), &alg), prod.block(i, &alg));
    }
}

#[test]
fn decompose_round_trip_and_trivial_blocks() {
    let mut rng = ChaCha20Rng::seed_from_u64(15);
    let alg = algebra(16, 2, 97, 1);
    let x = random(&alg, &mut rng);
    assert_eq!(alg.recompose(&alg.decompose(&x)), x);
    let zero = alg.decompose(&alg.zero());
    let one = alg.decompose(&alg.one());
    for i in 0..zero.len() {
        assert!(zero.block(i, &alg).entries.iter().all(|&v| v == 0));
        assert_eq!(one.block(i, &alg).entries, vec![1, 1, 0, 0]);
    }
}

#[test]
fn noncommutative_and_k_central() {
    let mut rng = ChaCha20Rng::seed_from_u64(16);
    let alg = algebra(16, 2, 97, 1);
    let u = alg.u_power(1);
    let l = alg.embed_l(&alg.tower().basis(0));
    assert_ne!(alg.mul(&u, &l), alg.mul(&l, &u));
    for _ in 0..20 {
        let c = alg.ring().from_coeffs((0..8).map(|_| rng.random_range(0..97)).collect()).unwrap();
        let kc = alg.embed_k(&c);
        let x = random(&alg, &mut rng);
        assert_eq!(alg.mul(&kc, &x), alg.mul(&x, &kc));
    }
}

#[test]
fn dual_gamma_is_inverse() {
    for (m, q, t) in [(1, 5, 1), (16, 97, 3), (9, 19, 2), (12, 13, 5)] {
        let alg = algebra(m, 2, q, t);
        let dual = alg.dual();
        let prod = alg.ring().mul(&alg.gamma_k(), &dual.gamma_k());
        assert_eq!(prod, alg.ring().one());
        assert_eq!(dual.dual().gamma(), alg.gamma());
    }
    // m = 1 with t = 1 is -1
    assert_eq!(algebra(1, 2, 5, 1).gamma_k().values(), &[4]);
}

#[test]
fn transpose_dual_small_case() {
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    let alg = algebra(16, 2, 97, 1);
    let x1 = random_l(&alg, &mut rng);
    let ux1 = alg.mul(&alg.u_power(1), &alg.embed_l(&x1));
    let want = alg
        .from_coords(vec![alg.tower().zero(), alg.tower().to_coeffs(&alg.gamma_l(&alg.tower().theta(&x1, 1)))])
        .unwrap();
    assert_eq!(alg.transpose_dual(&ux1), want);
    assert_eq!(alg.transpose_dual(&alg.one()), alg.one());
}

#[test]
fn inversion() {
    let mut rng = ChaCha20Rng::seed_from_u64(18);
    let alg = algebra(16, 2, 97, 1);
    assert_eq!(alg.invert(&alg.one()).unwrap(), alg.one());
    let mut found = 0;
    for _ in 0..20 {
        let x = random(&alg, &mut rng);
        match alg.invert(&x) {
            Ok(inv) => {
                found += 1;
                assert_eq!(alg.mul(&inv, &x), alg.one());
                assert_eq!(alg.mul(&x, &inv), alg.one());
            }
            Err(e) => {
                assert_eq!(e, ClweError::NotInvertible);
                assert!(!alg.is_invertible(&x));
            }
        }
    }
    assert!(found > 10);
    // zero the whole first block
    let x = random(&alg, &mut rng);
    let mut blocks = alg.decompose(&x);
    let mut b = blocks.block(0, &alg);
    b.entries.fill(0);
    blocks.set_block(&b);
    let singular = alg.recompose(&blocks);
    assert!(!alg.is_invertible(&singular));
    assert_eq!(alg.invert(&singular), Err(ClweError::NotInvertible));
    assert!(!alg.is_invertible(&alg.zero()));
}

fn arb_pair() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (proptest::collection::vec(0u64..97, 32), proptest::collection::vec(0u64..97, 32))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn left_regular_and_homomorphism((a, b) in arb_pair()) {
        let alg = algebra(16, 2, 97, 1);
        let (x, y) = (alg.from_flat(&a).unwrap(), alg.from_flat(&b).unwrap());
        let tower = alg.tower();
        let xy = alg.mul_naive(&x, &y);
        prop_assert_eq!(alg.phi(&x).apply(tower, alg.vec_of(&y)), xy.coords().to_vec());
        prop_assert_eq!(
            alg.phi(&xy).normalize(tower),
            alg.phi(&x).mul(&alg.phi(&y), tower)
        );
    }

    #[test]
    fn associative(a in proptest::collection::vec(0u64..19, 54),
                   b in proptest::collection::vec(0u64..19, 54),
                   c in proptest::collection::vec(0u64..19, 54)) {
        let alg = algebra(9, 3, 19, 2);
        let (x, y, z) = (alg.from_flat(&a).unwrap(), alg.from_flat(&b).unwrap(), alg.from_flat(&c).unwrap());
        prop_assert_eq!(
            alg.mul_naive(&alg.mul_naive(&x, &y), &z),
            alg.mul_naive(&x, &alg.mul_naive(&y, &z))
        );
    }

    #[test]
    fn transpose_dual_matches_matrix_transpose(a in proptest::collection::vec(0u64..97, 128)) {
        let alg = algebra(16, 4, 97, 3);
        let x = alg.from_flat(&a).unwrap();
        let dual = alg.dual();
        let tower = alg.tower();
        prop_assert_eq!(
            alg.phi(&x).transpose().normalize(tower),
            dual.phi(&alg.transpose_dual(&x)).normalize(tower)
        );
    }

    #[test]
    fn blocks_equal_naive((a, b) in arb_pair()) {
        let alg = algebra(16, 2, 97, 1);
        let (x, y) = (alg.from_flat(&a).unwrap(), alg.from_flat(&b).unwrap());
        prop_assert_eq!(alg.mul(&x, &y), alg.mul_naive(&x, &y));
    }
}
