use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Monomial, PolyRing, Polynomial, Scalar};
use crate::endomorphism::Endomorphism;

use super::{lambda_n, DynamicsError};

/// One sampled `m`-primary ideal `q` with both sides of the flatness
/// equation `length(R/phi^n(q)R) = length(R/q) * lambda(phi^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NagataSample {
    pub ideal: Vec<Polynomial>,
    pub image: Vec<Polynomial>,
    pub colength: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NagataReport {
    pub n: u32,
    pub lambda: u64,
    pub samples: Vec<NagataSample>,
    /// Index of the first sample violating the equation. A violation
    /// certifies that `phi^n` is not flat, hence that `R` is not regular.
    pub witness: Option<usize>,
}

const COEFF_HEIGHT: i64 = 10;
const MAX_POWER: u32 = 4;
const MAX_EXTRA: usize = 2;
const MAX_TERMS: usize = 3;
const MAX_TERM_DEGREE: u32 = 3;

/// `(x_1^{a_1}, .., x_n^{a_n})` with `a_i` uniform in `[1, 4]`, plus up to two
/// random polynomials without constant term. Over `Q` coefficients are
/// integers of height at most 10; over `F_p` they are uniform residues.
pub fn sample_primary_ideal(ring: &Arc<PolyRing>, rng: &mut impl Rng) -> Vec<Polynomial> {
    let nvars = ring.nvars();
    let field = *ring.field();
    let mut gens: Vec<Polynomial> = (0..nvars)
        .map(|i| {
            let a = rng.random_range(1..=MAX_POWER);
            Polynomial::monomial(ring, Monomial::var(nvars, i, a), field.one())
        })
        .collect();
    let extra = rng.random_range(0..=MAX_EXTRA);
    for _ in 0..extra {
        let nterms = rng.random_range(1..=MAX_TERMS);
        let terms = (0..nterms)
            .map(|_| {
                let degree = rng.random_range(1..=MAX_TERM_DEGREE);
                let mut exps = vec![0u32; nvars];
                for _ in 0..degree {
                    exps[rng.random_range(0..nvars)] += 1;
                }
                (Monomial::from_exponents(&exps), random_scalar(ring, rng))
            })
            .collect();
        let g = Polynomial::from_terms(ring, terms);
        if !g.is_zero() {
            gens.push(g);
        }
    }
    gens
}

fn random_scalar(ring: &PolyRing, rng: &mut impl Rng) -> Scalar {
    let field = ring.field();
    match field.characteristic() {
        0 => field.from_i64(rng.random_range(-COEFF_HEIGHT..=COEFF_HEIGHT)),
        p => field.from_bigint(&BigInt::from(rng.random_range(0..p))),
    }
}

fn image_ideal(phi: &Endomorphism, gens: &[Polynomial], n: u32) -> Vec<Polynomial> {
    let images = phi.iterate(n);
    gens.iter()
        .map(|g| phi.ring().reduce(&g.substitute(&images).expect("same ring")))
        .collect()
}

fn primary_length(phi: &Endomorphism, gens: &[Polynomial], n_cap: u32) -> Result<u64, DynamicsError> {
    let len = phi.ring().local_length(gens, n_cap)?;
    len.finite().ok_or(DynamicsError::IdealNotPrimary { ladder: len.ladder })
}

/// Samples `samples` ideals `q` deterministically from `seed` and tests the
/// flatness equation for `phi^n` on each.
pub fn nagata_sample_test(
    phi: &Endomorphism,
    n: u32,
    samples: usize,
    seed: u64,
    n_cap: u32,
) -> Result<NagataReport, DynamicsError> {
    let lambda = lambda_n(phi, n, n_cap)?;
    let ring = phi.ring().ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let ideal = sample_primary_ideal(&ring, &mut rng);
        let colength = primary_length(phi, &ideal, n_cap)?;
        let image = image_ideal(phi, &ideal, n);
        let lhs = primary_length(phi, &image, n_cap)?;
        let rhs = colength * lambda;
        out.push(NagataSample { ideal, image, colength, lhs, rhs, equal: lhs == rhs });
    }
    let witness = out.iter().position(|s| !s.equal);
    Ok(NagataReport { n, lambda, samples: out, witness })
}

/// `Phi^n(R/a) = R/phi^n(a)R` together with both lengths. The bound
/// `len_out <= len_in * lambda(phi^n)` always holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCyclic {
    pub image: Vec<Polynomial>,
    pub len_in: u64,
    pub len_out: u64,
    pub lambda: u64,
    /// `len_out < len_in * lambda` rather than equality.
    pub strict: bool,
}

pub fn phi_cyclic(
    phi: &Endomorphism,
    gens: &[Polynomial],
    n: u32,
    n_cap: u32,
) -> Result<PhiCyclic, DynamicsError> {
    let len_in = primary_length(phi, gens, n_cap)?;
    let lambda = lambda_n(phi, n, n_cap)?;
    let image = image_ideal(phi, gens, n);
    let len_out = primary_length(phi, &image, n_cap)?;
    let bound = len_in * lambda;
    if len_out > bound {
        return Err(DynamicsError::BoundViolated { len_in, len_out, lambda });
    }
    Ok(PhiCyclic { image, len_in, len_out, lambda, strict: len_out < bound })
}
