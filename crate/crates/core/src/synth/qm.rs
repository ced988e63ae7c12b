//! Quine–McCluskey two-level minimization.

use std::collections::HashSet;

use super::table::{Cover, Implicant, TruthTable, TtValue};
use crate::error::{Error, Result};

/// Most variables accepted by [`quine_mccluskey`].
pub const QM_MAX_VARS: usize = 16;

/// All prime implicants of on-set plus don't-cares, sorted.
pub fn prime_implicants(t: &TruthTable) -> Result<Vec<Implicant>> {
    let n = t.num_vars();
    if n > QM_MAX_VARS {
        return Err(Error::Capacity {
            what: "minimization variables",
            found: n,
            limit: QM_MAX_VARS,
        });
    }
    let mut current: Vec<Implicant> = (0..t.rows().len())
        .filter(|&r| t.get(r) != TtValue::Zero)
        .map(|r| Implicant::minterm(r, n))
        .collect();
    let mut primes = Vec::new();
    while !current.is_empty() {
        let set: HashSet<Implicant> = current.iter().copied().collect();
        let mut merged = HashSet::new();
        let mut next = HashSet::new();
        for c in &current {
            let mut bits = c.care & !c.value;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                bits &= bits - 1;
                let partner = Implicant {
                    care: c.care,
                    value: c.value | bit,
                };
                if set.contains(&partner) {
                    merged.insert(*c);
                    merged.insert(partner);
                    next.insert(Implicant {
                        care: c.care & !bit,
                        value: c.value,
                    });
                }
            }
        }
        primes.extend(current.iter().filter(|c| !merged.contains(c)));
        current = next.into_iter().collect();
        current.sort_unstable();
    }
    primes.sort_unstable();
    Ok(primes)
}

/// Minimized cover: essential primes first, then greedily the prime covering
/// most still-uncovered on-set rows (ties: fewer literals, then lower
/// pattern order). The result is checked against `t` on every row.
pub fn quine_mccluskey(t: &TruthTable) -> Result<Cover> {
    let n = t.num_vars();
    let primes = prime_implicants(t)?;
    let on = t.on_set();

    let mut uncovered = vec![false; t.rows().len()];
    for &r in &on {
        uncovered[r] = true;
    }
    let mut chosen = vec![false; primes.len()];
    let mut cover = Vec::new();
    let take = |p: usize, chosen: &mut [bool], uncovered: &mut [bool], cover: &mut Vec<Implicant>| {
        chosen[p] = true;
        cover.push(primes[p]);
        for r in primes[p].rows(n) {
            uncovered[r] = false;
        }
    };

    for &r in &on {
        if !uncovered[r] {
            continue;
        }
        let mut covering = primes.iter().enumerate().filter(|(_, p)| p.covers(r));
        let first = covering.next().map(|(i, _)| i);
        if let (Some(p), None) = (first, covering.next()) {
            take(p, &mut chosen, &mut uncovered, &mut cover);
        }
    }

    loop {
        let best = (0..primes.len())
            .filter(|&p| !chosen[p])
            .map(|p| (primes[p].rows(n).filter(|&r| uncovered[r]).count(), p))
            .filter(|&(gain, _)| gain > 0)
            .max_by(|a, b| {
                a.0.cmp(&b.0)
                    .then(primes[b.1].literal_count().cmp(&primes[a.1].literal_count()))
                    .then(b.1.cmp(&a.1))
            });
        match best {
            Some((_, p)) => take(p, &mut chosen, &mut uncovered, &mut cover),
            None => break,
        }
    }

    let cover = Cover {
        num_vars: n,
        implicants: cover,
    };
    if !cover.matches(t) {
        return Err(Error::Domain("minimized cover disagrees with the truth table".into()));
    }
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(n: usize, on: &[usize]) -> TruthTable {
        let vars = (0..n).map(|i| format!("x{i}")).collect();
        TruthTable::from_fn(vars, |r| on.contains(&r)).unwrap()
    }

    fn patterns(c: &Cover) -> Vec<String> {
        let mut v: Vec<String> = c.implicants.iter().map(|i| i.pattern(c.num_vars)).collect();
        v.sort();
        v
    }

    #[test]
    fn tautology_collapses() {
        let c = quine_mccluskey(&tt(2, &[0, 1, 2, 3])).unwrap();
        assert_eq!(patterns(&c), vec!["--"]);
    }

    #[test]
    fn xor_has_two_primes() {
        let c = quine_mccluskey(&tt(2, &[1, 2])).unwrap();
        assert_eq!(patterns(&c), vec!["01", "10"]);
    }

    /// Brute-force primes: every cube inside on ∪ dc not contained in a
    /// larger such cube.
    fn brute_primes(t: &TruthTable) -> Vec<Implicant> {
        let n = t.num_vars();
        let full = (1u32 << n) - 1;
        let ok = |c: &Implicant| c.rows(n).all(|r| t.get(r) != TtValue::Zero);
        let mut cubes = Vec::new();
        for care in 0..=full {
            let mut value = care;
            loop {
                cubes.push(Implicant { care, value });
                if value == 0 {
                    break;
                }
                value = (value - 1) & care;
            }
        }
        let valid: Vec<Implicant> = cubes.into_iter().filter(|c| ok(c)).collect();
        let mut primes: Vec<Implicant> = valid
            .iter()
            .filter(|c| {
                !valid
                    .iter()
                    .any(|d| d != *c && d.care & c.care == d.care && c.value & d.care == d.value)
            })
            .copied()
            .collect();
        primes.sort_unstable();
        primes
    }

    #[test]
    fn primes_match_brute_force() {
        for on in [&[0usize, 1, 2, 5, 6, 7][..], &[1, 3, 4, 6], &[], &[7]] {
            let t = tt(3, on);
            assert_eq!(prime_implicants(&t).unwrap(), brute_primes(&t), "{on:?}");
        }
    }

    #[test]
    fn cyclic_function_is_covered() {
        let t = tt(3, &[0, 1, 2, 5, 6, 7]);
        let c = quine_mccluskey(&t).unwrap();
        assert!(c.len() <= 4);
        assert!(c.matches(&t));
    }

    #[test]
    fn dont_cares_are_absorbed() {
        let mut rows = vec![TtValue::Zero; 8];
        rows[3] = TtValue::One;
        rows[7] = TtValue::DontCare;
        rows[5] = TtValue::One;
        let t = TruthTable::new(vec!["a".into(), "b".into(), "c".into()], rows).unwrap();
        let c = quine_mccluskey(&t).unwrap();
        assert_eq!(patterns(&c), vec!["-11", "1-1"]);
    }

    #[test]
    fn capacity_guard() {
        let vars: Vec<String> = (0..17).map(|i| format!("v{i}")).collect();
        let t = TruthTable::from_fn(vars, |_| false).unwrap();
        assert!(matches!(quine_mccluskey(&t), Err(Error::Capacity { limit: 16, .. })));
    }
}
