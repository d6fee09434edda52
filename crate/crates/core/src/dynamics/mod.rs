//! Length sequences `lambda(phi^n)`, entropy bounds, the Kunz regularity
//! test, Hilbert-Kunz ratios and flatness sampling.
//!
//! Every comparison between lengths is exact integer arithmetic. Logarithms
//! only appear in the decimal renderings carried by [`EntropyRate`].

mod flatness;
mod kunz;

use std::cmp::Ordering;

use num_bigint::BigUint;
use thiserror::Error;

use crate::endomorphism::{Endomorphism, EndomorphismError};
use crate::local::{LocalLength, LocalRingError};

pub use flatness::{nagata_sample_test, phi_cyclic, sample_primary_ideal, NagataReport, NagataSample, PhiCyclic};
pub use kunz::{hk_estimate, kunz_test, HkEstimate, KunzReport, KunzVerdict, QProvenance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("NOT_FINITE_LENGTH: phi^{n}(m)R is not m-primary (no stabilization up to N = {})", ladder.last().map_or(0, |l| l.0))]
    NotFiniteLength { n: u32, ladder: Vec<(u32, u64)> },
    #[error("NOT_FINITE_LENGTH: the input ideal is not m-primary (no stabilization up to N = {})", ladder.last().map_or(0, |l| l.0))]
    IdealNotPrimary { ladder: Vec<(u32, u64)> },
    #[error("Q_UNAVAILABLE: lambda(phi^n) is not multiplicative up to n = {n_max}; supply q explicitly")]
    QUnavailable { n_max: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length bound violated: {len_out} > {len_in} * {lambda}")]
    BoundViolated { len_in: u64, len_out: u64, lambda: u64 },
    #[error(transparent)]
    Ring(#[from] LocalRingError),
    #[error(transparent)]
    Endomorphism(#[from] EndomorphismError),
}

impl DynamicsError {
    /// Mathematical refusals, as opposed to bad input or internal failures.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            DynamicsError::NotFiniteLength { .. }
                | DynamicsError::IdealNotPrimary { .. }
                | DynamicsError::QUnavailable { .. }
        )
    }
}

/// The full truncation ladder for `lambda(phi^n) = length(R / phi^n(m) R)`.
pub fn lambda_ladder(phi: &Endomorphism, n: u32, n_cap: u32) -> Result<LocalLength, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::InvalidParameter("n must be at least 1".into()));
    }
    let images = phi.iterate(n);
    Ok(phi.ring().local_length(&images, n_cap)?)
}

/// `lambda(phi^n)`.
pub fn lambda_n(phi: &Endomorphism, n: u32, n_cap: u32) -> Result<u64, DynamicsError> {
    let len = lambda_ladder(phi, n, n_cap)?;
    len.finite().ok_or(DynamicsError::NotFiniteLength { n, ladder: len.ladder })
}

/// `log(lambda) / n`, kept exactly as the pair `(lambda, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyRate {
    pub n: u32,
    pub lambda: u64,
}

impl EntropyRate {
    /// Exact comparison of `log(a)/m` with `log(b)/n` via `a^n` vs `b^m`.
    pub fn cmp_exact(&self, other: &EntropyRate) -> Ordering {
        let lhs = BigUint::from(self.lambda).pow(other.n);
        let rhs = BigUint::from(other.lambda).pow(self.n);
        lhs.cmp(&rhs)
    }

    /// Whether this rate equals `d * log(p)`, i.e. `lambda = p^(d n)`.
    pub fn equals_log_power(&self, p: u64, d: u32) -> bool {
        BigUint::from(self.lambda) == BigUint::from(p).pow(d * self.n)
    }

    pub fn value(&self) -> f64 {
        (self.lambda as f64).ln() / self.n as f64
    }

    /// Decimal rendering with 12 significant digits.
    pub fn decimal(&self) -> String {
        significant_digits(self.value(), 12)
    }
}

pub(crate) fn significant_digits(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

/// `lambda(phi^n)` for `n = 1..=n_max` with the entropy bounds they imply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSequence {
    pub values: Vec<(u32, u64)>,
    /// `a_n = log(lambda(phi^n)) / n`.
    pub rates: Vec<EntropyRate>,
    /// `min(a_1, .., a_n)` for each prefix.
    pub running_upper_bounds: Vec<EntropyRate>,
    /// `min` over all computed `a_n`. The sequence converges to its infimum,
    /// so this is a certified upper bound on the entropy.
    pub entropy_upper_bound: EntropyRate,
    /// `lambda(phi^n) = lambda(phi)^n` for every computed `n`.
    pub exact_if_multiplicative: bool,
}

impl LambdaSequence {
    pub fn from_values(values: Vec<(u32, u64)>) -> Self {
        assert!(!values.is_empty(), "at least one lambda value");
        let rates: Vec<EntropyRate> = values.iter().map(|&(n, lambda)| EntropyRate { n, lambda }).collect();
        let mut running_upper_bounds: Vec<EntropyRate> = Vec::with_capacity(rates.len());
        for r in &rates {
            let best = match running_upper_bounds.last() {
                Some(prev) if prev.cmp_exact(r) != Ordering::Greater => prev.clone(),
                _ => r.clone(),
            };
            running_upper_bounds.push(best);
        }
        let entropy_upper_bound = running_upper_bounds.last().unwrap().clone();
        let exact_if_multiplicative = match values.iter().find(|v| v.0 == 1) {
            Some(&(_, first)) => values
                .iter()
                .all(|&(n, lambda)| BigUint::from(lambda) == BigUint::from(first).pow(n)),
            None => false,
        };
        LambdaSequence { values, rates, running_upper_bounds, entropy_upper_bound, exact_if_multiplicative }
    }

    pub fn lambda(&self, n: u32) -> Option<u64> {
        self.values.iter().find(|v| v.0 == n).map(|v| v.1)
    }
}

/// Computes `lambda(phi^n)` for `n = 1..=n_max`.
pub fn entropy_report(phi: &Endomorphism, n_max: u32, n_cap: u32) -> Result<LambdaSequence, DynamicsError> {
    if n_max == 0 {
        return Err(DynamicsError::InvalidParameter("n_max must be at least 1".into()));
    }
    let values = (1..=n_max)
        .map(|n| lambda_n(phi, n, n_cap).map(|l| (n, l)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LambdaSequence::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rate_comparison() {
        let a = EntropyRate { n: 1, lambda: 25 };
        let b = EntropyRate { n: 2, lambda: 625 };
        let c = EntropyRate { n: 2, lambda: 50 };
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        assert_eq!(c.cmp_exact(&a), Ordering::Less);
        assert!(b.equals_log_power(5, 2));
        assert!(!c.equals_log_power(5, 2));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(EntropyRate { n: 1, lambda: 25 }.decimal(), "3.21887582487");
        assert_eq!(EntropyRate { n: 1, lambda: 1 }.decimal(), "0");
        assert_eq!(significant_digits(123.456, 4), "123.5");
    }

    #[test]
    fn sequence_bounds() {
        let seq = LambdaSequence::from_values(vec![(1, 10), (2, 50), (3, 250)]);
        assert!(!seq.exact_if_multiplicative);
        assert_eq!(seq.entropy_upper_bound, EntropyRate { n: 3, lambda: 250 });
        assert_eq!(seq.running_upper_bounds[0], EntropyRate { n: 1, lambda: 10 });
        let flat = LambdaSequence::from_values(vec![(1, 6), (2, 36), (3, 216)]);
        assert!(flat.exact_if_multiplicative);
        assert_eq!(flat.entropy_upper_bound, EntropyRate { n: 1, lambda: 6 });
    }
}
