//! Discrete Gaussian sampling over `Z`, `O_K / q`, `O_L / q` and
//! `Lambda_q`, plus uniform sampling of `Lambda_q`.
//!
//! The integer sampler draws `x` with probability proportional to
//! `exp(-pi x^2 / sigma^2)` on `[-B, B]`, `B = ceil(tailcut * sigma)`, by
//! rejection from a uniform proposal on `[0, B]` followed by a random sign.
//! Higher levels draw independent integer samples coordinate by coordinate:
//! a K-element takes `n` coefficients, an L-element takes `d` K-elements as
//! its l-coordinates and an algebra element takes `d` L-elements.
//!
//! All randomness comes from the caller's generator.

use rand::Rng;

use crate::algebra::{AElem, CyclicAlgebra};
use crate::base_ring::{CyclotomicRing, KElem};
use crate::error::{ClweError, Result};
use crate::field_tower::{FieldTower, LElem};

/// Below this width the distribution is treated as a point mass at zero.
pub const DEGENERATE_SIGMA: f64 = 0.01;

pub const DEFAULT_TAILCUT: f64 = 12.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianParams {
    sigma: f64,
    tailcut: f64,
}

impl GaussianParams {
    /// `sigma = 0` is accepted and means no noise.
    pub fn new(sigma: f64) -> Result<Self> {
        Self::with_tailcut(sigma, DEFAULT_TAILCUT)
    }

    pub fn with_tailcut(sigma: f64, tailcut: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(ClweError::Params(format!("sigma must be finite and non-negative, got {sigma}")));
        }
        if !tailcut.is_finite() || tailcut < 6.0 {
            return Err(ClweError::Params(format!("tailcut must be at least 6, got {tailcut}")));
        }
        Ok(Self { sigma, tailcut })
    }

    /// The zero-noise distribution.
    pub fn zero() -> Self {
        Self {
            sigma: 0.0,
            tailcut: DEFAULT_TAILCUT,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tailcut(&self) -> f64 {
        self.tailcut
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma < DEGENERATE_SIGMA
    }

    /// `ceil(tailcut * sigma)`, or 0 when degenerate.
    pub fn bound(&self) -> i64 {
        if self.is_degenerate() {
            0
        } else {
            (self.tailcut * self.sigma).ceil() as i64
        }
    }

    /// Unnormalised mass `exp(-pi x^2 / sigma^2)`.
    pub fn rho(&self, x: i64) -> f64 {
        if self.is_degenerate() {
            return if x == 0 { 1.0 } else { 0.0 };
        }
        let t = x as f64 / self.sigma;
        (-std::f64::consts::PI * t * t).exp()
    }
}

/// Integer sampler with its acceptance table precomputed.
#[derive(Clone, Debug)]
pub struct DiscreteGaussian {
    params: GaussianParams,
    /// Acceptance probability for `|x|`; the zero entry is halved because
    /// the sign draw is skipped for zero.
    accept: Vec<f64>,
}

impl DiscreteGaussian {
    pub fn new(params: GaussianParams) -> Self {
        let b = params.bound();
        let mut accept: Vec<f64> = (0..=b).map(|x| params.rho(x)).collect();
        accept[0] *= 0.5;
        Self { params, accept }
    }

    pub fn params(&self) -> &GaussianParams {
        &self.params
    }

    pub fn bound(&self) -> i64 {
        self.params.bound()
    }

    pub fn sample_z<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        if self.params.is_degenerate() {
            return 0;
        }
        let b = self.accept.len() - 1;
        loop {
            let x = rng.random_range(0..=b);
            if rng.random::<f64>() < self.accept[x] {
                if x == 0 {
                    return 0;
                }
                return if rng.random::<bool>() { x as i64 } else { -(x as i64) };
            }
        }
    }

    /// `n` independent integer samples as coefficients, reduced mod q.
    pub fn sample_k<R: Rng + ?Sized>(&self, ring: &CyclotomicRing, rng: &mut R) -> KElem {
        let zq = ring.modulus();
        let coeffs = (0..ring.n()).map(|_| zq.from_i64(self.sample_z(rng))).collect();
        ring.from_coeffs(coeffs).expect("ring dimension")
    }

    pub fn sample_l<R: Rng + ?Sized>(&self, tower: &FieldTower, rng: &mut R) -> LElem {
        let coords = (0..tower.d()).map(|_| self.sample_k(tower.ring(), rng)).collect();
        tower.from_coords(coords).expect("tower degree")
    }

    pub fn sample_a<R: Rng + ?Sized>(&self, alg: &CyclicAlgebra, rng: &mut R) -> AElem {
        let coords = (0..alg.d()).map(|_| self.sample_l(alg.tower(), rng)).collect();
        alg.from_coords(coords).expect("algebra degree")
    }
}

/// Every F_q coordinate independently uniform.
pub fn uniform_a<R: Rng + ?Sized>(alg: &CyclicAlgebra, rng: &mut R) -> AElem {
    let q = alg.q();
    let v: Vec<u64> = (0..alg.dimension()).map(|_| rng.random_range(0..q)).collect();
    alg.from_flat(&v).expect("algebra dimension")
}
