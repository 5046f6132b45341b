//! The discretised CLWE distribution `(a, a s + e)` over `Lambda_q`, the
//! transform to normal form, and invertibility statistics for uniform
//! elements.

use rand::Rng;

use crate::algebra::{AElem, CyclicAlgebra};
use crate::error::{ClweError, Result};
use crate::sampler::{uniform_a, DiscreteGaussian};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClweSample {
    pub a: AElem,
    pub b: AElem,
}

/// `a` uniform, `e` from `dg`, `b = a s + e`.
pub fn clwe_sample<R: Rng + ?Sized>(
    alg: &CyclicAlgebra,
    s: &AElem,
    dg: &DiscreteGaussian,
    rng: &mut R,
) -> ClweSample {
    clwe_sample_logged(alg, s, dg, rng).0
}

/// As [`clwe_sample`], also returning the error term.
pub fn clwe_sample_logged<R: Rng + ?Sized>(
    alg: &CyclicAlgebra,
    s: &AElem,
    dg: &DiscreteGaussian,
    rng: &mut R,
) -> (ClweSample, AElem) {
    let a = uniform_a(alg, rng);
    let e = dg.sample_a(alg, rng);
    let b = alg.add(&alg.mul(&a, s), &e);
    (ClweSample { a, b }, e)
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub samples: Vec<ClweSample>,
    /// Index of the pivot sample whose error becomes the new secret.
    pub pivot: usize,
}

/// Uses the first sample with invertible `a_1` as pivot and maps every
/// `(a_i, b_i)` to `(a_i a_1^-1, a_i a_1^-1 b_1 - b_i)`, which equals
/// `(abar_i, abar_i e_1 - e_i)`.
pub fn normal_form(alg: &CyclicAlgebra, samples: &[ClweSample]) -> Result<NormalForm> {
    let (pivot, a1_inv) = samples
        .iter()
        .enumerate()
        .find_map(|(i, smp)| alg.invert(&smp.a).ok().map(|inv| (i, inv)))
        .ok_or(ClweError::InsufficientSamples(samples.len()))?;
    let b1 = &samples[pivot].b;
    let out = samples
        .iter()
        .map(|smp| {
            let a = alg.mul(&smp.a, &a1_inv);
            let b = alg.sub(&alg.mul(&a, b1), &smp.b);
            ClweSample { a, b }
        })
        .collect();
    Ok(NormalForm {
        samples: out,
        pivot,
    })
}

/// Fraction of `Lambda_q` that is invertible in the split case:
/// `(prod_{i<d} (q^d - q^i) / q^(d^2))^n`.
pub fn invertible_fraction_exact(q: u64, d: u32, n: u64) -> f64 {
    let qf = q as f64;
    let per_block: f64 = (0..d).map(|i| 1.0 - qf.powi(i as i32 - d as i32)).product();
    per_block.powf(n as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FractionEstimate {
    pub fraction: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Monte Carlo estimate of the invertible fraction over uniform draws.
pub fn invertible_fraction_mc<R: Rng + ?Sized>(
    alg: &CyclicAlgebra,
    trials: usize,
    rng: &mut R,
) -> Result<FractionEstimate> {
    if trials < 1000 {
        return Err(ClweError::Params(format!("need at least 1000 trials, got {trials}")));
    }
    let hits = (0..trials)
        .filter(|_| alg.is_invertible(&uniform_a(alg, rng)))
        .count();
    let p = hits as f64 / trials as f64;
    Ok(FractionEstimate {
        fraction: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FqMatrix;
    use crate::sampler::GaussianParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn setup() -> (CyclicAlgebra, ChaCha20Rng) {
        (
            CyclicAlgebra::from_params(16, 2, 97, 1).unwrap(),
            ChaCha20Rng::seed_from_u64(7),
        )
    }

    #[test]
    fn zero_noise_and_zero_secret() {
        let (alg, mut rng) = setup();
        let dg = DiscreteGaussian::new(GaussianParams::new(3.0).unwrap());
        let s = dg.sample_a(&alg, &mut rng);
        let exact = DiscreteGaussian::new(GaussianParams::zero());
        let smp = clwe_sample(&alg, &s, &exact, &mut rng);
        assert_eq!(smp.b, alg.mul(&smp.a, &s));
        let (smp, e) = clwe_sample_logged(&alg, &alg.zero(), &dg, &mut rng);
        assert_eq!(smp.b, e);
        let (smp, e) = clwe_sample_logged(&alg, &s, &dg, &mut rng);
        assert_eq!(alg.sub(&smp.b, &alg.mul(&smp.a, &s)), e);
    }

    #[test]
    fn normal_form_replay() {
        let (alg, mut rng) = setup();
        let dg = DiscreteGaussian::new(GaussianParams::new(3.0).unwrap());
        let s = uniform_a(&alg, &mut rng);
        let (samples, errors): (Vec<_>, Vec<_>) =
            (0..20).map(|_| clwe_sample_logged(&alg, &s, &dg, &mut rng)).unzip();
        let nf = normal_form(&alg, &samples).unwrap();
        let e1 = &errors[nf.pivot];
        for (smp, e) in nf.samples.iter().zip(&errors) {
            assert_eq!(smp.b, alg.sub(&alg.mul(&smp.a, e1), e));
        }
        assert_eq!(nf.samples[nf.pivot].a, alg.one());
        assert!(nf.samples[nf.pivot].b.is_zero());

        let exact = DiscreteGaussian::new(GaussianParams::zero());
        let clean: Vec<_> = (0..5).map(|_| clwe_sample(&alg, &s, &exact, &mut rng)).collect();
        assert!(normal_form(&alg, &clean).unwrap().samples.iter().all(|x| x.b.is_zero()));
    }

    #[test]
    fn normal_form_needs_an_invertible_pivot() {
        let (alg, _) = setup();
        let bad = ClweSample {
            a: alg.zero(),
            b: alg.one(),
        };
        assert_eq!(
            normal_form(&alg, &[bad.clone(), bad]).unwrap_err(),
            ClweError::InsufficientSamples(2)
        );
    }

    #[test]
    fn exact_fraction_small_cases() {
        // all 2x2 matrices over F_2
        let zq = crate::base_ring::Modulus::new(2).unwrap();
        let count = (0u64..16)
            .filter(|b| FqMatrix::from_rows(2, 2, (0..4).map(|i| (b >> i) & 1).collect()).is_invertible(&zq))
            .count();
        assert_eq!(invertible_fraction_exact(2, 2, 1), count as f64 / 16.0);
        assert_eq!(invertible_fraction_exact(2, 2, 1), 0.375);
        assert!((invertible_fraction_exact(97, 1, 8) - (96.0f64 / 97.0).powi(8)).abs() < 1e-15);
        for (q, d, n) in [(97u64, 2u32, 8u64), (3, 3, 5), (12289, 2, 256)] {
            let lower = (1.0 - 1.0 / q as f64).powf((n * d as u64) as f64);
            assert!(invertible_fraction_exact(q, d, n) >= lower);
        }
    }

    #[test]
    fn exact_fraction_matches_block_enumeration() {
        // n = 1, d = 2, q = 3: count invertible algebra elements directly
        let alg = CyclicAlgebra::from_params(1, 2, 3, 1).unwrap();
        let hits = (0..81u64)
            .filter(|&k| {
                let v: Vec<u64> = (0..4).map(|i| k / 3u64.pow(i) % 3).collect();
                alg.is_invertible(&alg.from_flat(&v).unwrap())
            })
            .count();
        assert_eq!(hits, 48);
        assert!((invertible_fraction_exact(3, 2, 1) - 48.0 / 81.0).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_close_to_exact() {
        let (alg, mut rng) = setup();
        let est = invertible_fraction_mc(&alg, 2000, &mut rng).unwrap();
        let exact = invertible_fraction_exact(97, 2, 8);
        assert!((est.fraction - exact).abs() < 3.0 * est.std_error.max(1e-3));
        assert!(invertible_fraction_mc(&alg, 10, &mut rng).is_err());
    }
}
