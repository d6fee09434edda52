//! Local rings `R = (k[x]/I)` localized at the origin `m = (x_1, .., x_n)`.
//!
//! Lengths are computed without local orderings. For an ideal `J`, let
//! `L_N = dim_k k[x]/(I + J + m^N)`. The sequence is nondecreasing, and
//! `L_N = L_{N+1}` means `m^N` lies in `I + J + m^{N+1}`; by Nakayama
//! `m^N R_m` is then inside `J R_m`. Since `k[x]/(I + J + m^N)` is supported
//! at the origin alone, its dimension is exactly `length(R/JR)`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, PolyRing, Polynomial};
use crate::groebner::{
    maximal_ideal_power, Colength, GroebnerBasis, GroebnerError, Ideal, DEFAULT_MONOMIAL_CAP,
};

/// Largest truncation degree tried before a length is reported as unknown.
pub const DEFAULT_N_CAP: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalRingError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("relation `{0}` has a nonzero constant term")]
    RelationNotInMaximalIdeal(String),
}

impl From<AlgebraError> for LocalRingError {
    fn from(e: AlgebraError) -> Self {
        LocalRingError::Groebner(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "kind", content = "value")]
pub enum LengthValue {
    Finite(u64),
    InfiniteOrUnknown,
}

/// Result of a truncation ladder. `ladder` holds `(N, L_N)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalLength {
    pub length: LengthValue,
    pub stabilized_at: Option<u32>,
    pub ladder: Vec<(u32, u64)>,
}

impl LocalLength {
    pub fn finite(&self) -> Option<u64> {
        match self.length {
            LengthValue::Finite(n) => Some(n),
            LengthValue::InfiniteOrUnknown => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "verdict")]
pub enum RegularityVerdict {
    /// The Hilbert-Samuel function agrees with that of a regular ring for
    /// every tested `N`. Evidence, not proof.
    RegularUpToN { n_max: u32, embedding_dim: u32 },
    /// `length(R/m^witness)` differs from `binom(witness - 1 + e, e)`.
    NotRegular { witness: u32, length: u64, expected: u64, embedding_dim: u32 },
}

/// `(k[x]/I)` localized at the origin. Every relation lies in `m`.
#[derive(Clone, Debug)]
pub struct LocalRingPresentation {
    relations: Ideal,
}

impl LocalRingPresentation {
    pub fn new(ring: &Arc<PolyRing>, relations: Vec<Polynomial>) -> Result<Self, LocalRingError> {
        let field = *ring.field();
        if let Some(bad) = relations.iter().find(|g| !field.is_zero(&g.constant_term())) {
            return Err(LocalRingError::RelationNotInMaximalIdeal(bad.to_string()));
        }
        Ok(LocalRingPresentation { relations: Ideal::new(ring, relations)? })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.relations.ring()
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn relation_basis(&self) -> &GroebnerBasis {
        self.relations.basis()
    }

    /// Canonical representative of `f` modulo the relations.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.relations.normal_form(f)
    }

    /// `dim_k k[x]/(I + J + m^n)`.
    pub fn truncated_colength(&self, extra: &[Polynomial], n: u32) -> Result<u64, LocalRingError> {
        let ring = self.ring();
        if n == 0 {
            return Ok(0);
        }
        // Terms of degree >= n already lie in m^n.
        let mut gens: Vec<Polynomial> = self
            .relation_basis()
            .elements()
            .iter()
            .chain(extra.iter())
            .map(|g| g.truncate(n))
            .filter(|g| !g.is_zero())
            .collect();
        gens.extend(maximal_ideal_power(ring, n));
        let ideal = Ideal::new(ring, gens)?;
        match ideal.colength(DEFAULT_MONOMIAL_CAP)? {
            Colength::Finite(len) => Ok(len),
            Colength::Infinite => unreachable!("m^n has finite colength"),
        }
    }

    /// `length(R / J R)` via the truncation ladder, or `InfiniteOrUnknown`
    /// when no two consecutive `L_N` agree up to `n_cap`.
    pub fn local_length(&self, gens: &[Polynomial], n_cap: u32) -> Result<LocalLength, LocalRingError> {
        for g in gens {
            if g.ring() != self.ring() {
                return Err(AlgebraError::RingMismatch.into());
            }
        }
        let start = gens.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0).max(2);
        let mut ladder = Vec::new();
        if start > n_cap {
            return Ok(LocalLength { length: LengthValue::InfiniteOrUnknown, stabilized_at: None, ladder });
        }
        let mut prev = self.truncated_colength(gens, start)?;
        ladder.push((start, prev));
        for n in start + 1..=n_cap {
            let cur = self.truncated_colength(gens, n)?;
            debug_assert!(cur >= prev, "truncation ladder must be nondecreasing");
            ladder.push((n, cur));
            if cur == prev {
                if cfg!(debug_assertions) {
                    let extra = self.truncated_colength(gens, n + 1)?;
                    debug_assert_eq!(extra, cur, "ladder moved after stabilizing at N = {}", n - 1);
                }
                return Ok(LocalLength {
                    length: LengthValue::Finite(prev),
                    stabilized_at: Some(n - 1),
                    ladder,
                });
            }
            prev = cur;
        }
        Ok(LocalLength { length: LengthValue::InfiniteOrUnknown, stabilized_at: None, ladder })
    }

    /// `length(R / m^n R)`.
    pub fn hilbert_samuel(&self, n: u32) -> Result<u64, LocalRingError> {
        self.truncated_colength(&[], n)
    }

    /// `dim_k m / (m^2 + I)`.
    pub fn embedding_dim(&self) -> Result<u32, LocalRingError> {
        Ok((self.hilbert_samuel(2)? - 1) as u32)
    }

    /// Compares `length(R/m^N)` with the regular value `binom(N - 1 + e, e)`
    /// for `N = 2..=n_max`, where `e` is the embedding dimension.
    pub fn regularity_check(&self, n_max: u32) -> Result<RegularityVerdict, LocalRingError> {
        let e = self.embedding_dim()?;
        for n in 2..=n_max {
            let length = self.hilbert_samuel(n)?;
            let expected = binomial((n - 1 + e) as u64, e as u64);
            if length != expected {
                return Ok(RegularityVerdict::NotRegular { witness: n, length, expected, embedding_dim: e });
            }
        }
        Ok(RegularityVerdict::RegularUpToN { n_max, embedding_dim: e })
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(FieldSpec::new(p).unwrap(), vars.iter().map(|s| s.to_string()).collect())
            .unwrap()
    }

    fn xy(r: &Arc<PolyRing>) -> (Polynomial, Polynomial) {
        (Polynomial::var(r, 0), Polynomial::var(r, 1))
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 1), 2);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(10, 3), 120);
    }

    #[test]
    fn rejects_units_among_relations() {
        let r = ring(0, &["x"]);
        let x = Polynomial::var(&r, 0);
        let bad = &x + &Polynomial::one(&r);
        assert!(matches!(
            LocalRingPresentation::new(&r, vec![bad]),
            Err(LocalRingError::RelationNotInMaximalIdeal(_))
        ));
    }

    #[test]
    fn frobenius_power_box() {
        let r = ring(5, &["x", "y"]);
        let (x, y) = xy(&r);
        let ring = LocalRingPresentation::new(&r, vec![]).unwrap();
        let len = ring.local_length(&[x.pow(5), y.pow(5)], DEFAULT_N_CAP).unwrap();
        assert_eq!(len.length, LengthValue::Finite(25));
        let (last, prev) = (len.ladder[len.ladder.len() - 1], len.ladder[len.ladder.len() - 2]);
        assert_eq!(last.1, prev.1);
        assert_eq!(len.stabilized_at, Some(prev.0));
    }

    #[test]
    fn cusp_quotient_length() {
        let r = ring(5, &["x", "y"]);
        let (x, y) = xy(&r);
        let ring = LocalRingPresentation::new(&r, vec![&y.pow(2) - &x.pow(3)]).unwrap();
        let len = ring.local_length(&[x.pow(5), y.pow(5)], DEFAULT_N_CAP).unwrap();
        assert_eq!(len.finite(), Some(10));
    }

    #[test]
    fn non_primary_ideal_never_stabilizes() {
        let r = ring(5, &["x", "y"]);
        let (x, y) = xy(&r);
        let ring = LocalRingPresentation::new(&r, vec![]).unwrap();
        let len = ring.local_length(&[x.pow(2), &x * &y], 40).unwrap();
        assert_eq!(len.length, LengthValue::InfiniteOrUnknown);
        assert!(len.ladder.windows(2).all(|w| w[0].1 < w[1].1));
        assert_eq!(len.ladder.last().unwrap().0, 40);
    }

    #[test]
    fn local_length_ignores_points_away_from_origin() {
        // x (x - 1) vanishes at 0 and 1; only the origin counts.
        let r = ring(0, &["x"]);
        let x = Polynomial::var(&r, 0);
        let ring = LocalRingPresentation::new(&r, vec![]).unwrap();
        let f = &x.pow(2) * &(&x - &Polynomial::one(&r));
        assert_eq!(ring.local_length(&[f], 64).unwrap().finite(), Some(2));
    }

    #[test]
    fn hilbert_samuel_examples() {
        let q = ring(0, &["x", "y"]);
        let plane = LocalRingPresentation::new(&q, vec![]).unwrap();
        assert_eq!(plane.hilbert_samuel(3).unwrap(), 6);
        assert_eq!(plane.hilbert_samuel(1).unwrap(), 1);
        let r = ring(5, &["x", "y"]);
        let (x, y) = xy(&r);
        let cusp = LocalRingPresentation::new(&r, vec![&y.pow(2) - &x.pow(3)]).unwrap();
        assert_eq!(cusp.hilbert_samuel(2).unwrap(), 3);
        assert_eq!(cusp.hilbert_samuel(1).unwrap(), 1);
    }

    #[test]
    fn embedding_dimensions() {
        let q = ring(0, &["x", "y"]);
        let (x, y) = xy(&q);
        assert_eq!(LocalRingPresentation::new(&q, vec![]).unwrap().embedding_dim().unwrap(), 2);
        let smooth = LocalRingPresentation::new(&q, vec![&x - &y.pow(2)]).unwrap();
        assert_eq!(smooth.embedding_dim().unwrap(), 1);
        let r = ring(5, &["x", "y"]);
        let (x, y) = xy(&r);
        let cusp = LocalRingPresentation::new(&r, vec![&y.pow(2) - &x.pow(3)]).unwrap();
        assert_eq!(cusp.embedding_dim().unwrap(), 2);
    }

    #[test]
    fn regularity_verdicts() {
        let r = ring(5, &["x", "y"]);
        let (x, y) = xy(&r);
        let plane = LocalRingPresentation::new(&r, vec![]).unwrap();
        assert_eq!(
            plane.regularity_check(6).unwrap(),
            RegularityVerdict::RegularUpToN { n_max: 6, embedding_dim: 2 }
        );
        let cusp = LocalRingPresentation::new(&r, vec![&y.pow(2) - &x.pow(3)]).unwrap();
        assert_eq!(
            cusp.regularity_check(6).unwrap(),
            RegularityVerdict::NotRegular { witness: 3, length: 5, expected: 6, embedding_dim: 2 }
        );
        let q = ring(0, &["x"]);
        let x = Polynomial::var(&q, 0);
        let fat_point = LocalRingPresentation::new(&q, vec![x.pow(2)]).unwrap();
        assert_eq!(
            fat_point.regularity_check(5).unwrap(),
            RegularityVerdict::NotRegular { witness: 3, length: 2, expected: 3, embedding_dim: 1 }
        );
        let smooth_curve = LocalRingPresentation::new(&ring(0, &["x", "y"]), vec![]).unwrap();
        assert!(matches!(smooth_curve.regularity_check(2).unwrap(), RegularityVerdict::RegularUpToN { .. }));
    }
}
