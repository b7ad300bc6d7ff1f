use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Violation;

/// Ground set `{1, …, n}` and ordered triples `⟨α, β, δ⟩` asking for `β`
/// strictly between `α` and `δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetweennessInstance {
    pub elements: usize,
    pub triples: Vec<[usize; 3]>,
}

impl BetweennessInstance {
    pub fn new(elements: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        let b = BetweennessInstance { elements, triples };
        let v = b.violations();
        if v.is_empty() {
            Ok(b)
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, t) in self.triples.iter().enumerate() {
            if t.iter().any(|&x| x == 0 || x > self.elements) {
                out.push(Violation::new(
                    "unknown-element",
                    format!("triple {i} {t:?} outside 1..={}", self.elements),
                ));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                out.push(Violation::new("repeated-element", format!("triple {i} {t:?}")));
            }
        }
        out
    }

    /// True iff `order` (a permutation of `1..=n`) satisfies every triple.
    pub fn is_satisfied_by(&self, order: &[usize]) -> bool {
        let mut rank = vec![usize::MAX; self.elements + 1];
        for (i, &e) in order.iter().enumerate() {
            if e == 0 || e > self.elements || rank[e] != usize::MAX {
                return false;
            }
            rank[e] = i;
        }
        if order.len() != self.elements {
            return false;
        }
        self.triples.iter().all(|&[a, b, d]| {
            let (ra, rb, rd) = (rank[a], rank[b], rank[d]);
            (ra < rb && rb < rd) || (rd < rb && rb < ra)
        })
    }
}

/// First satisfying ordering in lexicographic order, or `None`.
pub fn solve_betweenness(b: &BetweennessInstance, max_elements: usize) -> Result<Option<Vec<usize>>> {
    if b.elements > max_elements {
        return Err(Error::TooLarge(format!(
            "{} elements, oracle bound is {max_elements}",
            b.elements
        )));
    }
    let v = b.violations();
    if !v.is_empty() {
        return Err(Error::Invalid(v));
    }
    let mut perm: Vec<usize> = (1..=b.elements).collect();
    loop {
        if b.is_satisfied_by(&perm) {
            return Ok(Some(perm));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

/// Advances to the next lexicographic permutation; false after the last.
pub(crate) fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triple_is_its_own_order() {
        let b = BetweennessInstance::new(3, vec![[1, 2, 3]]).unwrap();
        assert_eq!(solve_betweenness(&b, 9).unwrap(), Some(vec![1, 2, 3]));
    }

    #[test]
    fn cyclic_triples_are_unsatisfiable() {
        let b = BetweennessInstance::new(3, vec![[1, 2, 3], [2, 3, 1], [3, 1, 2]]).unwrap();
        assert_eq!(solve_betweenness(&b, 9).unwrap(), None);
    }

    #[test]
    fn no_triples_accept_any_order() {
        let b = BetweennessInstance::new(2, vec![]).unwrap();
        assert_eq!(solve_betweenness(&b, 9).unwrap(), Some(vec![1, 2]));
    }

    #[test]
    fn oversized_instance_is_an_error() {
        let b = BetweennessInstance::new(10, vec![]).unwrap();
        assert!(matches!(solve_betweenness(&b, 9), Err(Error::TooLarge(_))));
    }

    #[test]
    fn reversed_order_satisfies_too() {
        let b = BetweennessInstance::new(3, vec![[1, 2, 3]]).unwrap();
        assert!(b.is_satisfied_by(&[3, 2, 1]));
        assert!(!b.is_satisfied_by(&[2, 1, 3]));
    }

    #[test]
    fn permutations_are_lexicographic() {
        let mut p = vec![1, 2, 3];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![1, 3, 2]);
        assert_eq!(seen[5], vec![3, 2, 1]);
    }
}
