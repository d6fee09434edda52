use crate::algebra::Monomial;

use super::GroebnerError;

/// Largest monomial listing or count accepted before giving up.
pub const DEFAULT_MONOMIAL_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardMonomials {
    Finite(Vec<Monomial>),
    /// Some variable has no pure power among the leading monomials.
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }
}

/// Walks the staircase below `lms` (the leading monomials of a Groebner
/// basis). For every admissible prefix `(e_0, .., e_{n-2})` the last
/// exponent runs over `0..bound`, and `visit(prefix, bound)` is called.
/// Returns `None` if the staircase is infinite.
fn walk(
    lms: &[Monomial],
    nvars: usize,
    cap: usize,
    visit: &mut dyn FnMut(&[u32], u32),
) -> Result<Option<u64>, GroebnerError> {
    if lms.iter().any(Monomial::is_one) {
        return Ok(Some(0));
    }
    if nvars == 0 {
        visit(&[], 1);
        return Ok(Some(1));
    }
    let mut bounds = vec![u32::MAX; nvars];
    for m in lms {
        if let Some(i) = m.pure_power_of() {
            bounds[i] = bounds[i].min(m.exponents()[i]);
        }
    }
    if bounds.contains(&u32::MAX) {
        return Ok(None);
    }
    let active: Vec<&Monomial> = lms.iter().collect();
    let mut prefix = Vec::with_capacity(nvars);
    let mut count = 0u64;
    descend(&active, &bounds, &mut prefix, cap, &mut count, visit)?;
    Ok(Some(count))
}

/// `active` holds the leading monomials whose exponents at the already fixed
/// positions are all `<=` the prefix.
fn descend(
    active: &[&Monomial],
    bounds: &[u32],
    prefix: &mut Vec<u32>,
    cap: usize,
    count: &mut u64,
    visit: &mut dyn FnMut(&[u32], u32),
) -> Result<(), GroebnerError> {
    let depth = prefix.len();
    let last = bounds.len() - 1;
    if depth == last {
        let bound = active.iter().map(|m| m.exponents()[last]).min().unwrap_or(bounds[last]);
        if bound > 0 {
            *count += bound as u64;
            if *count > cap as u64 {
                return Err(GroebnerError::CapacityExceeded { cap });
            }
            visit(prefix, bound);
        }
        return Ok(());
    }
    for e in 0..bounds[depth] {
        let next: Vec<&Monomial> =
            active.iter().copied().filter(|m| m.exponents()[depth] <= e).collect();
        // A leading monomial supported on the prefix divides every extension.
        if next.iter().any(|m| m.exponents()[depth + 1..].iter().all(|&x| x == 0)) {
            break;
        }
        prefix.push(e);
        descend(&next, bounds, prefix, cap, count, visit)?;
        prefix.pop();
    }
    Ok(())
}

/// Monomials outside the monomial ideal generated by `lms`.
pub fn standard_monomials_of(
    lms: &[Monomial],
    nvars: usize,
    cap: usize,
) -> Result<StandardMonomials, GroebnerError> {
    let mut out = Vec::new();
    let mut visit = |prefix: &[u32], bound: u32| {
        let mut exps = prefix.to_vec();
        exps.push(0);
        for e in 0..bound {
            *exps.last_mut().unwrap() = e;
            out.push(Monomial::from_exponents(&exps));
        }
    };
    match walk(lms, nvars, cap, &mut visit)? {
        None => Ok(StandardMonomials::Infinite),
        Some(_) if nvars == 0 && !lms.iter().any(Monomial::is_one) => {
            Ok(StandardMonomials::Finite(vec![Monomial::one(0)]))
        }
        Some(_) => Ok(StandardMonomials::Finite(out)),
    }
}

/// Number of standard monomials, without materializing them.
pub fn count_standard_monomials(
    lms: &[Monomial],
    nvars: usize,
    cap: usize,
) -> Result<Colength, GroebnerError> {
    Ok(match walk(lms, nvars, cap, &mut |_, _| {})? {
        Some(n) => Colength::Finite(n),
        None => Colength::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn box_staircase() {
        let lms = [m(&[2, 0]), m(&[0, 3])];
        let StandardMonomials::Finite(list) = standard_monomials_of(&lms, 2, 100).unwrap() else {
            panic!("finite expected")
        };
        assert_eq!(list.len(), 6);
        assert_eq!(count_standard_monomials(&lms, 2, 100).unwrap(), Colength::Finite(6));
    }

    #[test]
    fn missing_pure_power_is_infinite() {
        assert_eq!(standard_monomials_of(&[m(&[2, 0])], 2, 100).unwrap(), StandardMonomials::Infinite);
        assert_eq!(count_standard_monomials(&[m(&[2, 1]), m(&[3, 0])], 2, 100).unwrap(), Colength::Infinite);
    }

    #[test]
    fn unit_ideal_has_empty_staircase() {
        assert_eq!(count_standard_monomials(&[m(&[0, 0])], 2, 10).unwrap(), Colength::Finite(0));
    }

    #[test]
    fn capacity_is_enforced() {
        let lms = [m(&[100, 0]), m(&[0, 100])];
        assert_eq!(
            count_standard_monomials(&lms, 2, 9_999),
            Err(GroebnerError::CapacityExceeded { cap: 9_999 })
        );
        assert_eq!(count_standard_monomials(&lms, 2, 10_000).unwrap(), Colength::Finite(10_000));
    }

    #[test]
    fn mixed_generators() {
        // (x^3, x y, y^2): 1, x, x^2, y
        let lms = [m(&[3, 0]), m(&[1, 1]), m(&[0, 2])];
        assert_eq!(count_standard_monomials(&lms, 2, 100).unwrap(), Colength::Finite(4));
    }
}
