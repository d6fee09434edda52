use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::endomorphism::{ContractingVerdict, Endomorphism};
use crate::local::RegularityVerdict;

use super::{entropy_report, DynamicsError, LambdaSequence};

/// Certificate-style outcome of the Kunz test.
///
/// * A strict drop `lambda(phi^n) < lambda(phi)^n` rules out flatness, and a
///   regular ring makes every finite-length self-map flat, so the drop
///   certifies non-regularity.
/// * Multiplicativity on the computed range together with the contracting
///   property is evidence for regularity only, since `q(phi)` is never
///   computed exactly.
/// * Without the contracting property no conclusion is drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KunzVerdict {
    CertifiedNotRegular { witness: u32, lambda: u64, lambda_one_pow: BigUint },
    ConsistentWithRegular { up_to: u32 },
    InconclusiveNotContracting { up_to: u32 },
}

impl KunzVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            KunzVerdict::CertifiedNotRegular { .. } => "CERTIFIED_NOT_REGULAR",
            KunzVerdict::ConsistentWithRegular { .. } => "CONSISTENT_WITH_REGULAR",
            KunzVerdict::InconclusiveNotContracting { .. } => "INCONCLUSIVE_NOT_CONTRACTING",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunzReport {
    pub lambda_seq: LambdaSequence,
    pub contracting: ContractingVerdict,
    pub verdict: KunzVerdict,
    /// Independent Hilbert-Samuel comparison.
    pub cross_check: RegularityVerdict,
}

pub fn kunz_test(
    phi: &Endomorphism,
    n_max: u32,
    regularity_n_max: u32,
    n_cap: u32,
) -> Result<KunzReport, DynamicsError> {
    if n_max < 2 {
        return Err(DynamicsError::InvalidParameter("n_max must be at least 2".into()));
    }
    let lambda_seq = entropy_report(phi, n_max, n_cap)?;
    let contracting = phi.contracting_check()?;
    let cross_check = phi.ring().regularity_check(regularity_n_max.max(2))?;

    let first = BigUint::from(lambda_seq.lambda(1).expect("n = 1 computed"));
    let drop = lambda_seq.values.iter().find_map(|&(n, lambda)| {
        let power = first.pow(n);
        (BigUint::from(lambda) < power).then_some((n, lambda, power))
    });
    let verdict = match drop {
        Some((witness, lambda, lambda_one_pow)) => {
            KunzVerdict::CertifiedNotRegular { witness, lambda, lambda_one_pow }
        }
        None if contracting.is_contracting() => KunzVerdict::ConsistentWithRegular { up_to: n_max },
        None => KunzVerdict::InconclusiveNotContracting { up_to: n_max },
    };
    Ok(KunzReport { lambda_seq, contracting, verdict, cross_check })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QProvenance {
    UserSupplied,
    InferredFromMultiplicativity,
}

impl QProvenance {
    pub fn label(&self) -> &'static str {
        match self {
            QProvenance::UserSupplied => "user-supplied",
            QProvenance::InferredFromMultiplicativity => "inferred-from-multiplicativity",
        }
    }
}

/// The ratios `lambda(phi^n) / q^n` whose limit, when it exists, is the
/// Hilbert-Kunz multiplicity. No convergence is asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkEstimate {
    pub q: BigRational,
    pub provenance: QProvenance,
    pub ratios: Vec<(u32, BigRational)>,
    pub lambda_seq: LambdaSequence,
}

/// Without `q`, the sequence must be multiplicative and `q = lambda(phi)`;
/// otherwise the limit base is unknown and the estimate is refused.
pub fn hk_estimate(
    phi: &Endomorphism,
    n_max: u32,
    q: Option<BigRational>,
    n_cap: u32,
) -> Result<HkEstimate, DynamicsError> {
    if let Some(q) = &q {
        if !q.is_positive() {
            return Err(DynamicsError::InvalidParameter(format!("q must be positive, got {q}")));
        }
    }
    let lambda_seq = entropy_report(phi, n_max, n_cap)?;
    let (q, provenance) = match q {
        Some(q) => (q, QProvenance::UserSupplied),
        None if lambda_seq.exact_if_multiplicative => (
            BigRational::from_integer(BigInt::from(lambda_seq.lambda(1).expect("n = 1 computed"))),
            QProvenance::InferredFromMultiplicativity,
        ),
        None => return Err(DynamicsError::QUnavailable { n_max }),
    };
    let ratios = lambda_seq
        .values
        .iter()
        .map(|&(n, lambda)| {
            (n, BigRational::from_integer(BigInt::from(lambda)) / q.pow(n as i32))
        })
        .collect();
    debug_assert!(
        provenance == QProvenance::UserSupplied
            || lambda_seq_ratios_are_one(&lambda_seq, &q),
    );
    Ok(HkEstimate { q, provenance, ratios, lambda_seq })
}

fn lambda_seq_ratios_are_one(seq: &LambdaSequence, q: &BigRational) -> bool {
    seq.values.iter().all(|&(n, lambda)| {
        (BigRational::from_integer(BigInt::from(lambda)) / q.pow(n as i32)).is_one()
    })
}
