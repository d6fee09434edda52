//! Buchberger's algorithm, normal forms and standard monomials.
//!
//! Pairs are selected by the normal strategy (smallest lcm first) and pruned
//! with the product and chain criteria. Bases are always returned reduced and
//! monic, so two bases of the same ideal under the same order compare equal.

mod buchberger;
mod staircase;

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, PolyRing, Polynomial};

pub use buchberger::buchberger;
pub use staircase::{
    count_standard_monomials, standard_monomials_of, Colength, StandardMonomials,
    DEFAULT_MONOMIAL_CAP,
};

pub(crate) use buchberger::reduce;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("more than {cap} standard monomials")]
    CapacityExceeded { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    elements: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub(crate) fn from_elements(ring: &Arc<PolyRing>, elements: Vec<Polynomial>) -> Self {
        GroebnerBasis { ring: ring.clone(), elements }
    }

    pub(crate) fn unit(ring: &Arc<PolyRing>) -> Self {
        Self::from_elements(ring, vec![Polynomial::one(ring)])
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| g.leading_monomial().unwrap().clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| g.leading_monomial().unwrap().is_one())
    }

    /// Remainder of `f` on full reduction; `f - normal_form(f)` lies in the ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        reduce(f, &self.elements)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn standard_monomials(&self, cap: usize) -> Result<StandardMonomials, GroebnerError> {
        standard_monomials_of(&self.leading_monomials(), self.ring.nvars(), cap)
    }

    /// `dim_k k[x] / (basis)`.
    pub fn colength(&self, cap: usize) -> Result<Colength, GroebnerError> {
        count_standard_monomials(&self.leading_monomials(), self.ring.nvars(), cap)
    }
}

/// Free-function form of [`GroebnerBasis::normal_form`].
pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    basis.normal_form(f)
}

/// Free-function form of [`GroebnerBasis::standard_monomials`].
pub fn standard_monomials(
    basis: &GroebnerBasis,
    cap: usize,
) -> Result<StandardMonomials, GroebnerError> {
    basis.standard_monomials(cap)
}

/// An ideal of a polynomial ring with a lazily computed Groebner basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    basis: OnceLock<GroebnerBasis>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Result<Self, GroebnerError> {
        if generators.iter().any(|g| g.ring() != ring) {
            return Err(AlgebraError::RingMismatch.into());
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            basis: OnceLock::new(),
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Computed once; concurrent callers all observe the same canonical basis.
    pub fn basis(&self) -> &GroebnerBasis {
        self.basis.get_or_init(|| {
            buchberger(&self.ring, &self.generators).expect("generators share the ideal's ring")
        })
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.basis().normal_form(f)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.basis().contains(f)
    }

    pub fn colength(&self, cap: usize) -> Result<Colength, GroebnerError> {
        self.basis().colength(cap)
    }

    /// The ideal generated by these generators together with `extra`.
    pub fn extended(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<Ideal, GroebnerError> {
        let mut gens = self.generators.clone();
        gens.extend(extra);
        Ideal::new(&self.ring, gens)
    }
}

/// Generators `x^a` of `m^n` for the maximal ideal at the origin.
pub fn maximal_ideal_power(ring: &Arc<PolyRing>, n: u32) -> Vec<Polynomial> {
    let nvars = ring.nvars();
    let one = ring.field().one();
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(
        ring: &Arc<PolyRing>,
        one: &crate::algebra::Scalar,
        exps: &mut Vec<u32>,
        i: usize,
        left: u32,
        out: &mut Vec<Polynomial>,
    ) {
        if i + 1 == exps.len() {
            exps[i] = left;
            out.push(Polynomial::monomial(ring, Monomial::from_exponents(exps), one.clone()));
            exps[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(ring, one, exps, i + 1, left - e, out);
        }
        exps[i] = 0;
    }
    if nvars == 0 {
        if n == 0 {
            out.push(Polynomial::one(ring));
        }
        return out;
    }
    rec(ring, &one, &mut exps, 0, n, &mut out);
    out
}
