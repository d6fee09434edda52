use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::{Monomial, PolyRing, Polynomial, Term};

use super::{GroebnerBasis, GroebnerError};

/// Full reduction of `f` by `divisors` (each with a nonzero leading term).
/// No term of the result is divisible by a divisor's leading monomial.
pub(crate) fn reduce(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    reduce_by(f, |lm| divisors.iter().find(|g| leading_divides(g, lm)))
}

/// Like [`reduce`], ignoring `divisors[skip]`.
fn reduce_excluding(f: &Polynomial, divisors: &[Polynomial], skip: usize) -> Polynomial {
    reduce_by(f, |lm| {
        divisors
            .iter()
            .enumerate()
            .find(|(k, g)| *k != skip && leading_divides(g, lm))
            .map(|(_, g)| g)
    })
}

fn leading_divides(g: &Polynomial, m: &Monomial) -> bool {
    g.leading_monomial().is_some_and(|lm| lm.divides(m))
}

fn reduce_by<'a>(
    f: &Polynomial,
    find: impl Fn(&Monomial) -> Option<&'a Polynomial>,
) -> Polynomial {
    let ring = f.ring().clone();
    let field = *ring.field();
    let mut p = f.clone();
    let mut rem: Vec<Term> = Vec::new();
    while let Some((lm, lc)) = p.leading_term().cloned() {
        match find(&lm) {
            Some(g) => {
                let (glm, glc) = g.leading_term().expect("nonzero divisor");
                let shift = lm.checked_div(glm).expect("divisibility checked");
                let c = field.div(&lc, glc);
                p = p.sub_term_multiple(&c, &shift, g);
            }
            None => {
                let mut terms = p.into_terms();
                rem.push(terms.remove(0));
                p = Polynomial::from_canonical_terms(&ring, terms);
            }
        }
    }
    Polynomial::from_canonical_terms(&ring, rem)
}

#[derive(Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, lcm: &Monomial) -> Polynomial {
    let field = f.field();
    let (flm, flc) = f.leading_term().expect("nonzero");
    let (glm, glc) = g.leading_term().expect("nonzero");
    let uf = lcm.checked_div(flm).expect("lcm divisible");
    let ug = lcm.checked_div(glm).expect("lcm divisible");
    let left = f.mul_term(&uf, &field.inv(flc).expect("nonzero"));
    left.sub_term_multiple(&field.inv(glc).expect("nonzero"), &ug, g)
}

struct State<'a> {
    ring: &'a Arc<PolyRing>,
    basis: Vec<Polynomial>,
    pairs: Vec<Pair>,
    pending: HashSet<(usize, usize)>,
}

impl State<'_> {
    fn lm(&self, i: usize) -> &Monomial {
        self.basis[i].leading_monomial().expect("basis elements are nonzero")
    }

    fn add(&mut self, h: Polynomial) {
        let k = self.basis.len();
        self.basis.push(h);
        for i in 0..k {
            // Both criteria below certify a zero S-polynomial outright, so
            // such pairs count as treated from the start.
            if self.basis[i].is_monomial() && self.basis[k].is_monomial() {
                continue;
            }
            if self.lm(i).is_coprime(self.lm(k)) {
                continue;
            }
            let lcm = self.lm(i).lcm(self.lm(k));
            self.pairs.push(Pair { i, j: k, lcm });
            self.pending.insert((i, k));
        }
    }

    /// Normal selection: smallest lcm first, ties broken by index.
    fn select(&mut self) -> Option<Pair> {
        let order = self.ring.order();
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            order
                .compare(&pa.lcm, &pb.lcm)
                .then(pa.j.cmp(&pb.j))
                .then(pa.i.cmp(&pb.i))
        })?;
        let pair = self.pairs.swap_remove(best);
        self.pending.remove(&(pair.i, pair.j));
        Some(pair)
    }

    fn is_pending(&self, a: usize, b: usize) -> bool {
        self.pending.contains(&(a.min(b), a.max(b)))
    }

    /// Buchberger's chain criterion.
    fn skippable(&self, pair: &Pair) -> bool {
        (0..self.basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && self.lm(k).divides(&pair.lcm)
                && !self.is_pending(pair.i, k)
                && !self.is_pending(pair.j, k)
        })
    }
}

/// Reduced Groebner basis of the ideal generated by `gens`, under the ring's
/// monomial order. The result is monic, interreduced and sorted by ascending
/// leading monomial; an empty basis represents the zero ideal.
pub fn buchberger(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Result<GroebnerBasis, GroebnerError> {
    for g in gens {
        if g.ring() != ring {
            return Err(crate::algebra::AlgebraError::RingMismatch.into());
        }
    }
    let order = ring.order();
    let mut input: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    input.sort_by(|a, b| {
        order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });

    let mut state = State { ring, basis: Vec::new(), pairs: Vec::new(), pending: HashSet::new() };
    for g in input {
        let h = reduce(&g, &state.basis);
        if h.is_zero() {
            continue;
        }
        if h.leading_monomial().unwrap().is_one() {
            return Ok(GroebnerBasis::unit(ring));
        }
        state.add(h.monic());
    }

    while let Some(pair) = state.select() {
        if state.skippable(&pair) {
            continue;
        }
        let s = s_polynomial(&state.basis[pair.i], &state.basis[pair.j], &pair.lcm);
        let h = reduce(&s, &state.basis);
        if h.is_zero() {
            continue;
        }
        if h.leading_monomial().unwrap().is_one() {
            return Ok(GroebnerBasis::unit(ring));
        }
        state.add(h.monic());
    }

    Ok(GroebnerBasis::from_elements(ring, interreduce(state.basis)))
}

fn interreduce(basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let lms: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
    let minimal: Vec<Polynomial> = basis
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            !lms.iter().enumerate().any(|(j, m)| {
                j != *i && m.divides(&lms[*i]) && (m != &lms[*i] || j < *i)
            })
        })
        .map(|(_, g)| g.clone())
        .collect();
    let mut reduced: Vec<Polynomial> = (0..minimal.len())
        .map(|i| reduce_excluding(&minimal[i], &minimal, i).monic())
        .collect();
    if let Some(g) = reduced.first() {
        let order = g.ring().order().clone();
        reduced.sort_by(|a, b| order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    }
    reduced
}
