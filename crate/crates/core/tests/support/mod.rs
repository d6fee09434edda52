//! Shared helpers for integration tests, including two brute-force oracles
//! that share no code with the Groebner engine:
//!
//! * `truncated_dim` computes `dim_k k[x]/(K + m^N)` by Gaussian elimination
//!   on the Macaulay matrix of `K` truncated below degree `N`;
//! * `staircase_count` counts monomials outside a monomial ideal by walking
//!   the box spanned by its pure powers.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Arc;

use entrolab::algebra::{FieldSpec, Monomial, PolyRing, Polynomial, Scalar};
use entrolab::endomorphism::Endomorphism;
use entrolab::job::InputSpec;
use entrolab::local::LocalRingPresentation;
use entrolab::parse::parse_polynomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.toml"))
}

pub fn fixture(name: &str) -> InputSpec {
    let src = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    InputSpec::from_toml(&src).expect("fixture parses")
}

pub const FIXTURES: [&str; 6] = ["frob25", "cusp", "swap", "power2", "mixed", "noninvariant"];

pub fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
    PolyRing::new(FieldSpec::new(p).unwrap(), vars.iter().map(|s| s.to_string()).collect()).unwrap()
}

pub fn poly(r: &Arc<PolyRing>, src: &str) -> Polynomial {
    parse_polynomial(src, r).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn polys(r: &Arc<PolyRing>, srcs: &[&str]) -> Vec<Polynomial> {
    srcs.iter().map(|s| poly(r, s)).collect()
}

pub fn local(r: &Arc<PolyRing>, relations: &[&str]) -> LocalRingPresentation {
    LocalRingPresentation::new(r, polys(r, relations)).unwrap()
}

pub fn endo(r: &Arc<PolyRing>, relations: &[&str], images: &[&str]) -> Endomorphism {
    Endomorphism::validate(local(r, relations), polys(r, images)).unwrap()
}

/// Ring, presentation and map described by a fixture with a `[map]`.
pub fn fixture_endo(name: &str) -> Endomorphism {
    let spec = fixture(name);
    let vars: Vec<&str> = spec.variables.iter().map(String::as_str).collect();
    let r = ring(spec.characteristic, &vars);
    let rels: Vec<&str> = spec.relations.iter().map(String::as_str).collect();
    let imgs: Vec<&str> = spec.map.as_ref().unwrap().iter().map(String::as_str).collect();
    endo(&r, &rels, &imgs)
}

// ---------------------------------------------------------------------------
// Macaulay-matrix oracle

trait Arith {
    type V: Clone;
    fn is_zero(&self, a: &Self::V) -> bool;
    fn inv(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
}

struct ModP(u64);

impl Arith for ModP {
    type V = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2).
        let (mut base, mut e, mut acc) = (*a as u128, self.0 - 2, 1u128);
        let p = self.0 as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
}

struct Rat;

impl Arith for Rat {
    type V = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        BigRational::one() / a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
}

fn monomials_below(nvars: usize, n: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, nvars: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, nvars, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(&mut Vec::new(), nvars, n - 1, &mut out);
    }
    out
}

/// Rank of the rows, each a sparse map from column to nonzero value.
fn rank<A: Arith>(f: &A, rows: Vec<BTreeMap<usize, A::V>>) -> usize {
    let mut pivots: HashMap<usize, BTreeMap<usize, A::V>> = HashMap::new();
    for mut row in rows {
        loop {
            let Some((&lead, _)) = row.iter().next() else { break };
            match pivots.get(&lead) {
                None => {
                    let inv = f.inv(&row[&lead]);
                    for v in row.values_mut() {
                        *v = f.mul(v, &inv);
                    }
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let c = row[&lead].clone();
                    for (col, pv) in p {
                        let cur = row.get(col).cloned();
                        let prod = f.mul(&c, pv);
                        let next = match cur {
                            Some(v) => f.sub(&v, &prod),
                            None => f.neg(&prod),
                        };
                        if f.is_zero(&next) {
                            row.remove(col);
                        } else {
                            row.insert(*col, next);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

fn macaulay_rows<V, A: Arith<V = V>>(
    f: &A,
    gens: &[Polynomial],
    n: u32,
    index: &HashMap<Vec<u32>, usize>,
    coeff: impl Fn(&Scalar) -> V,
) -> Vec<BTreeMap<usize, V>> {
    let nvars = gens.first().map_or(0, |g| g.ring().nvars());
    let shifts = monomials_below(nvars, n);
    let mut rows = Vec::new();
    for g in gens {
        for s in &shifts {
            let mut row = BTreeMap::new();
            for (m, c) in g.terms() {
                let e: Vec<u32> = m.exponents().iter().zip(s).map(|(a, b)| a + b).collect();
                if let Some(&col) = index.get(&e) {
                    let v = coeff(c);
                    if !f.is_zero(&v) {
                        row.insert(col, v);
                    }
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    rows
}

/// `dim_k k[x]/(gens + m^n)` by linear algebra on the span of all
/// `monomial * generator` products truncated below degree `n`.
pub fn truncated_dim(r: &Arc<PolyRing>, gens: &[Polynomial], n: u32) -> u64 {
    let monos = monomials_below(r.nvars(), n);
    let index: HashMap<Vec<u32>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let rk = match r.field().characteristic() {
        0 => {
            let rows = macaulay_rows(&Rat, gens, n, &index, |c| match c {
                Scalar::Rational(q) => q.clone(),
                Scalar::Mod(_) => unreachable!(),
            });
            rank(&Rat, rows)
        }
        p => {
            let f = ModP(p);
            let rows = macaulay_rows(&f, gens, n, &index, |c| match c {
                Scalar::Mod(v) => *v,
                Scalar::Rational(_) => unreachable!(),
            });
            rank(&f, rows)
        }
    };
    (monos.len() - rk) as u64
}

// ---------------------------------------------------------------------------
// Staircase oracle

/// Number of monomials not divisible by any of `gens`. Every variable must
/// have a pure power among the generators.
pub fn staircase_count(nvars: usize, gens: &[Vec<u32>]) -> u64 {
    let bounds: Vec<u32> = (0..nvars)
        .map(|i| {
            gens.iter()
                .filter(|g| g.iter().enumerate().all(|(j, &e)| j == i || e == 0) && g[i] > 0)
                .map(|g| g[i])
                .min()
                .expect("pure power for every variable")
        })
        .collect();
    let mut count = 0;
    let mut e = vec![0u32; nvars];
    'outer: loop {
        if !gens.iter().any(|g| g.iter().zip(&e).all(|(a, b)| a <= b)) {
            count += 1;
        }
        for i in 0..nvars {
            e[i] += 1;
            if e[i] < bounds[i] {
                continue 'outer;
            }
            e[i] = 0;
        }
        return count;
    }
}

pub fn monomial_polys(r: &Arc<PolyRing>, gens: &[Vec<u32>]) -> Vec<Polynomial> {
    gens.iter()
        .map(|e| Polynomial::monomial(r, Monomial::from_exponents(e), r.field().one()))
        .collect()
}
