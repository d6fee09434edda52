//! Local self-maps of a presented local ring, given by the images of the
//! variables. Coefficients are fixed pointwise.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Polynomial};
use crate::groebner::maximal_ideal_power;
use crate::local::{LocalRingError, LocalRingPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndomorphismError {
    #[error("expected one image per variable ({expected}), got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("NOT_LOCAL: image of `{variable}` is `{image}`, which has a nonzero constant term")]
    NotLocal { variable: String, image: String },
    #[error(
        "WELL_DEFINEDNESS_FAILURE: relation `{relation}` maps to `{normal_form}` modulo the relations, not 0"
    )]
    WellDefinedness { relation: String, normal_form: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ring(#[from] LocalRingError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "verdict")]
pub enum ContractingVerdict {
    Contracting { embedding_dim: u32 },
    /// `phi^e(variable)` is nonzero modulo `m^2 + I`, with residue `residue`.
    NotContracting { embedding_dim: u32, variable: String, residue: String },
}

impl ContractingVerdict {
    pub fn is_contracting(&self) -> bool {
        matches!(self, ContractingVerdict::Contracting { .. })
    }
}

/// A validated local endomorphism with a cache of its iterates.
///
/// Cache entry `n` holds the images of the variables under `phi^n`, each in
/// normal form modulo the relations. Entries are computed deterministically,
/// so racing fills store identical values.
#[derive(Debug)]
pub struct Endomorphism {
    ring: LocalRingPresentation,
    images: Vec<Polynomial>,
    cache: RwLock<BTreeMap<u32, Arc<Vec<Polynomial>>>>,
}

impl Clone for Endomorphism {
    fn clone(&self) -> Self {
        Endomorphism {
            ring: self.ring.clone(),
            images: self.images.clone(),
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl Endomorphism {
    /// Checks arity, locality (`phi(m) ⊆ m`) and that every relation
    /// generator maps into the relation ideal.
    pub fn validate(ring: LocalRingPresentation, images: Vec<Polynomial>) -> Result<Self, EndomorphismError> {
        let poly_ring = ring.ring().clone();
        if images.len() != poly_ring.nvars() {
            return Err(EndomorphismError::ArityMismatch { expected: poly_ring.nvars(), got: images.len() });
        }
        for img in &images {
            if img.ring() != &poly_ring {
                return Err(AlgebraError::RingMismatch.into());
            }
        }
        let field = *poly_ring.field();
        for (i, img) in images.iter().enumerate() {
            if !field.is_zero(&img.constant_term()) {
                return Err(EndomorphismError::NotLocal {
                    variable: poly_ring.variables()[i].clone(),
                    image: img.to_string(),
                });
            }
        }
        for g in ring.relations().generators() {
            let nf = ring.reduce(&g.substitute(&images)?);
            if !nf.is_zero() {
                return Err(EndomorphismError::WellDefinedness {
                    relation: g.to_string(),
                    normal_form: nf.to_string(),
                });
            }
        }
        let reduced: Vec<Polynomial> = images.iter().map(|f| ring.reduce(f)).collect();
        let mut cache = BTreeMap::new();
        cache.insert(1, Arc::new(reduced));
        Ok(Endomorphism { ring, images, cache: RwLock::new(cache) })
    }

    pub fn ring(&self) -> &LocalRingPresentation {
        &self.ring
    }

    /// The images as supplied, before reduction.
    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Images of the variables under `phi^n`, reduced modulo the relations.
    /// `n = 0` gives the identity.
    pub fn iterate(&self, n: u32) -> Arc<Vec<Polynomial>> {
        if n == 0 {
            let ring = self.ring.ring();
            return Arc::new((0..ring.nvars()).map(|i| self.ring.reduce(&Polynomial::var(ring, i))).collect());
        }
        let (mut k, mut current) = {
            let cache = self.cache.read().expect("cache lock");
            if let Some(hit) = cache.get(&n) {
                return hit.clone();
            }
            let (k, v) = cache.range(..n).next_back().expect("entry 1 is always cached");
            (*k, v.clone())
        };
        let first = self.iterate_one();
        while k < n {
            // phi^{k+1}(x_i) = phi^k(phi(x_i)).
            let next: Vec<Polynomial> = first
                .iter()
                .map(|f| self.ring.reduce(&f.substitute(&current).expect("images share the ring")))
                .collect();
            k += 1;
            current = Arc::new(next);
            self.cache.write().expect("cache lock").entry(k).or_insert_with(|| current.clone());
        }
        current
    }

    fn iterate_one(&self) -> Arc<Vec<Polynomial>> {
        self.cache.read().expect("cache lock")[&1].clone()
    }

    /// `phi^{m+n}` obtained by substituting the `n`-th iterate into the
    /// `m`-th, then reducing; agrees with [`Self::iterate`].
    pub fn compose_iterates(&self, m: u32, n: u32) -> Vec<Polynomial> {
        let outer = self.iterate(m);
        let inner = self.iterate(n);
        outer
            .iter()
            .map(|f| self.ring.reduce(&f.substitute(&inner).expect("images share the ring")))
            .collect()
    }

    /// Decides whether `phi` is contracting via the finite criterion
    /// `phi^e(m) R ⊆ m^2` with `e` the embedding dimension.
    pub fn contracting_check(&self) -> Result<ContractingVerdict, EndomorphismError> {
        let e = self.ring.embedding_dim()?;
        let poly_ring = self.ring.ring();
        let square = self.ring.relations().extended(maximal_ideal_power(poly_ring, 2)).map_err(LocalRingError::from)?;
        let iterated = self.iterate(e);
        for (i, img) in iterated.iter().enumerate() {
            let residue = square.normal_form(img);
            if !residue.is_zero() {
                return Ok(ContractingVerdict::NotContracting {
                    embedding_dim: e,
                    variable: poly_ring.variables()[i].clone(),
                    residue: residue.to_string(),
                });
            }
        }
        Ok(ContractingVerdict::Contracting { embedding_dim: e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldSpec, MonomialOrder, OrderKind, PolyRing};

    fn setup(p: u64, relations: impl Fn(&Polynomial, &Polynomial) -> Vec<Polynomial>) -> (LocalRingPresentation, Polynomial, Polynomial) {
        let r = PolyRing::new(FieldSpec::new(p).unwrap(), vec!["x".into(), "y".into()]).unwrap();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let rels = relations(&x, &y);
        (LocalRingPresentation::new(&r, rels).unwrap(), x, y)
    }

    #[test]
    fn frobenius_on_cusp_is_well_defined() {
        let (ring, x, y) = setup(5, |x, y| vec![&y.pow(2) - &x.pow(3)]);
        assert!(Endomorphism::validate(ring, vec![x.pow(5), y.pow(5)]).is_ok());
    }

    #[test]
    fn swap_preserves_node() {
        let (ring, x, y) = setup(0, |x, y| vec![x * y]);
        assert!(Endomorphism::validate(ring, vec![y, x]).is_ok());
    }

    #[test]
    fn constant_term_is_not_local() {
        let (ring, x, y) = setup(0, |_, _| vec![]);
        let one = Polynomial::one(x.ring());
        let err = Endomorphism::validate(ring, vec![&x + &one, y]).unwrap_err();
        assert_eq!(err, EndomorphismError::NotLocal { variable: "x".into(), image: "x + 1".into() });
    }

    #[test]
    fn relation_not_preserved() {
        let (ring, x, y) = setup(0, |x, y| vec![&y.pow(2) - &x.pow(3)]);
        let err = Endomorphism::validate(ring, vec![y.clone(), x.clone()]).unwrap_err();
        match err {
            EndomorphismError::WellDefinedness { relation, normal_form } => {
                assert_eq!(relation, "-x^3 + y^2");
                assert_ne!(normal_form, "0");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arity_is_checked() {
        let (ring, x, _) = setup(0, |_, _| vec![]);
        assert_eq!(
            Endomorphism::validate(ring, vec![x]).unwrap_err(),
            EndomorphismError::ArityMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn power_map_iterates() {
        let (ring, x, y) = setup(0, |_, _| vec![]);
        let phi = Endomorphism::validate(ring, vec![x.pow(2), y.pow(2)]).unwrap();
        assert_eq!(*phi.iterate(3), vec![x.pow(8), y.pow(8)]);
    }

    #[test]
    fn mixed_map_iterates() {
        let (ring, x, y) = setup(0, |_, _| vec![]);
        let phi = Endomorphism::validate(ring, vec![y.pow(2), x.pow(3)]).unwrap();
        assert_eq!(*phi.iterate(2), vec![x.pow(6), y.pow(6)]);
    }

    #[test]
    fn frobenius_cusp_second_iterate() {
        let (ring, x, y) = setup(5, |x, y| vec![&y.pow(2) - &x.pow(3)]);
        let phi = Endomorphism::validate(ring.clone(), vec![x.pow(5), y.pow(5)]).unwrap();
        let it = phi.iterate(2);
        // Representatives depend on the order; compare residue classes.
        assert_eq!(it[0], ring.reduce(&x.pow(25)));
        assert_eq!(it[1], ring.reduce(&(&x.pow(36) * &y)));
        assert_eq!(ring.reduce(&y.pow(25)), it[1]);

        // With y^2 leading (lex, y > x) the representative is x^36 y itself.
        let lex = PolyRing::with_order(
            *x.field(),
            vec!["x".into(), "y".into()],
            MonomialOrder::with_precedence(OrderKind::Lex, vec![1, 0]).unwrap(),
        )
        .unwrap();
        let (lx, ly) = (Polynomial::var(&lex, 0), Polynomial::var(&lex, 1));
        let lring = LocalRingPresentation::new(&lex, vec![&ly.pow(2) - &lx.pow(3)]).unwrap();
        let lphi = Endomorphism::validate(lring, vec![lx.pow(5), ly.pow(5)]).unwrap();
        assert_eq!(*lphi.iterate(2), vec![lx.pow(25), &lx.pow(36) * &ly]);
    }

    #[test]
    fn composition_matches_iteration() {
        let (ring, x, y) = setup(5, |x, y| vec![&y.pow(2) - &x.pow(3)]);
        let phi = Endomorphism::validate(ring, vec![x.pow(5), y.pow(5)]).unwrap();
        for (m, n) in [(1, 1), (1, 2), (2, 1)] {
            assert_eq!(phi.compose_iterates(m, n), *phi.iterate(m + n));
        }
    }

    #[test]
    fn contracting_examples() {
        let (ring, x, y) = setup(5, |x, y| vec![&y.pow(2) - &x.pow(3)]);
        let frob = Endomorphism::validate(ring, vec![x.pow(5), y.pow(5)]).unwrap();
        assert_eq!(frob.contracting_check().unwrap(), ContractingVerdict::Contracting { embedding_dim: 2 });

        let (ring, x, y) = setup(0, |x, y| vec![x * y]);
        let swap = Endomorphism::validate(ring, vec![y, x]).unwrap();
        assert_eq!(
            swap.contracting_check().unwrap(),
            ContractingVerdict::NotContracting { embedding_dim: 2, variable: "x".into(), residue: "x".into() }
        );

        let r = PolyRing::new(FieldSpec::rationals(), vec!["x".into()]).unwrap();
        let line = LocalRingPresentation::new(&r, vec![]).unwrap();
        let id = Endomorphism::validate(line, vec![Polynomial::var(&r, 0)]).unwrap();
        assert!(!id.contracting_check().unwrap().is_contracting());
    }
}
