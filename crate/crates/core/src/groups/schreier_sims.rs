//! Order of a permutation group from a base and strong generating set.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::{Error, Result};

/// Largest degree accepted by [`schreier_sims_order`].
pub const SCHREIER_SIMS_DEGREE_CAP: usize = 64;

type Perm = Vec<u32>;

// p ∘ q: apply q first.
fn compose(p: &[u32], q: &[u32]) -> Perm {
    q.iter().map(|&x| p[x as usize]).collect()
}

fn inverse(p: &[u32]) -> Perm {
    let mut r = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        r[x as usize] = i as u32;
    }
    r
}

fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

struct Level {
    base: usize,
    own: Vec<Perm>,
    orbit: Vec<usize>,
    // transversal[β] maps the base point to β
    transversal: Vec<Option<Perm>>,
}

struct Chain {
    degree: usize,
    levels: Vec<Level>,
}

impl Chain {
    fn new_level(&mut self, base: usize) {
        let id: Perm = (0..self.degree as u32).collect();
        let mut transversal = vec![None; self.degree];
        transversal[base] = Some(id);
        self.levels.push(Level { base, own: Vec::new(), orbit: vec![base], transversal });
    }

    fn generators(&self, i: usize) -> impl Iterator<Item = &Perm> {
        self.levels[i..].iter().flat_map(|l| l.own.iter())
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let base = self.levels[i].base;
        let gens: Vec<Perm> = self.generators(i).cloned().collect();
        let mut transversal: Vec<Option<Perm>> = vec![None; self.degree];
        transversal[base] = Some((0..self.degree as u32).collect());
        let mut orbit = vec![base];
        let mut queue = VecDeque::from([base]);
        while let Some(beta) = queue.pop_front() {
            for s in &gens {
                let gamma = s[beta] as usize;
                if transversal[gamma].is_none() {
                    let u = transversal[beta].as_ref().expect("orbit point has a representative");
                    transversal[gamma] = Some(compose(s, u));
                    orbit.push(gamma);
                    queue.push_back(gamma);
                }
            }
        }
        let level = &mut self.levels[i];
        level.orbit = orbit;
        level.transversal = transversal;
    }

    /// Sifts `g` through levels `from..`; returns the first level where it
    /// falls out together with the residue, or `None` if it sifts to the
    /// identity.
    fn sift(&self, mut g: Perm, from: usize) -> Option<(usize, Perm)> {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g[level.base] as usize;
            match &level.transversal[beta] {
                Some(u) => g = compose(&inverse(u), &g),
                None => return Some((l, g)),
            }
        }
        if is_identity(&g) {
            None
        } else {
            Some((self.levels.len(), g))
        }
    }

    fn first_failing_schreier_generator(&self, i: usize) -> Option<(usize, Perm)> {
        let level = &self.levels[i];
        let gens: Vec<&Perm> = self.generators(i).collect();
        for &beta in &level.orbit {
            let u_beta = level.transversal[beta].as_ref().expect("orbit point");
            for s in &gens {
                let gamma = s[beta] as usize;
                let u_gamma = level.transversal[gamma].as_ref().expect("orbit is closed");
                let schreier = compose(&inverse(u_gamma), &compose(s, u_beta));
                if let Some(residue) = self.sift(schreier, i + 1) {
                    return Some(residue);
                }
            }
        }
        None
    }

    fn add(&mut self, level: usize, g: Perm) {
        if level == self.levels.len() {
            let moved = g.iter().enumerate().position(|(i, &x)| i as u32 != x).expect("nontrivial residue");
            self.new_level(moved);
        }
        self.levels[level].own.push(g);
    }
}

fn validate(generators: &[Vec<usize>], degree: usize) -> Result<Vec<Perm>> {
    if degree > SCHREIER_SIMS_DEGREE_CAP {
        return Err(Error::DegreeTooLarge { degree, cap: SCHREIER_SIMS_DEGREE_CAP });
    }
    generators
        .iter()
        .map(|g| {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || core::mem::replace(&mut seen[x], true)) {
                return Err(Error::NotBijective(degree));
            }
            Ok(g.iter().map(|&x| x as u32).collect())
        })
        .collect()
}

/// Exact order of the group generated by `generators`, each given as the
/// image list of a bijection of `0..degree`.
pub fn schreier_sims_order(generators: &[Vec<usize>], degree: usize) -> Result<BigUint> {
    let gens = validate(generators, degree)?;
    let mut chain = Chain { degree, levels: Vec::new() };
    for g in gens.into_iter().filter(|g| !is_identity(g)) {
        if chain.levels.iter().all(|l| g[l.base] as usize == l.base) {
            let moved = g.iter().enumerate().position(|(i, &x)| i as u32 != x).expect("nontrivial");
            chain.new_level(moved);
        }
        chain.levels[0].own.push(g);
    }
    let mut i = chain.levels.len() as isize - 1;
    while i >= 0 {
        let level = i as usize;
        chain.rebuild_orbit(level);
        match chain.first_failing_schreier_generator(level) {
            Some((j, residue)) => {
                chain.add(j, residue);
                i = j as isize;
            }
            None => i -= 1,
        }
    }
    Ok(chain.levels.iter().map(|l| BigUint::from(l.orbit.len())).product())
}

/// Order by explicit closure. Returns `None` once more than `cap` elements
/// have been seen.
pub fn brute_force_order(generators: &[Vec<usize>], degree: usize, cap: usize) -> Result<Option<usize>> {
    let gens = validate(generators, degree)?;
    let id: Perm = (0..degree as u32).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for s in &gens {
            let y = compose(s, &x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Ok(None);
                }
                frontier.push(y);
            }
        }
    }
    Ok(Some(seen.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(degree: usize, pts: &[usize]) -> Vec<usize> {
        let mut p: Vec<usize> = (0..degree).collect();
        for (k, &x) in pts.iter().enumerate() {
            p[x] = pts[(k + 1) % pts.len()];
        }
        p
    }

    #[test]
    fn small_examples() {
        assert_eq!(schreier_sims_order(&[cycle(2, &[0, 1])], 2).unwrap(), 2u32.into());
        let s3 = [cycle(3, &[0, 1]), cycle(3, &[0, 1, 2])];
        assert_eq!(brute_force_order(&s3, 3, 100).unwrap(), Some(6));
        assert_eq!(schreier_sims_order(&s3, 3).unwrap(), 6u32.into());
        assert_eq!(schreier_sims_order(&[cycle(5, &[0, 1, 2, 3, 4])], 5).unwrap(), 5u32.into());
        assert_eq!(schreier_sims_order(&[], 4).unwrap(), 1u32.into());
    }

    #[test]
    fn symmetric_and_alternating_at_larger_degree() {
        let n = 12;
        let sym = [cycle(n, &[0, 1]), cycle(n, &(0..n).collect::<Vec<_>>())];
        let fact: BigUint = (1..=n as u32).map(BigUint::from).product();
        assert_eq!(schreier_sims_order(&sym, n).unwrap(), fact);
        let alt: Vec<_> = (2..n).map(|k| cycle(n, &[0, 1, k])).collect();
        assert_eq!(schreier_sims_order(&alt, n).unwrap(), fact / 2u32);
    }

    #[test]
    fn rejects_non_bijections() {
        assert_eq!(schreier_sims_order(&[vec![0, 0]], 2), Err(Error::NotBijective(2)));
        assert_eq!(schreier_sims_order(&[vec![0]], 2), Err(Error::NotBijective(2)));
        assert!(matches!(schreier_sims_order(&[], 65), Err(Error::DegreeTooLarge { .. })));
    }

    fn perm_strategy(degree: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..degree).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn agrees_with_closure(
            (degree, gens) in (2usize..=7)
                .prop_flat_map(|d| (Just(d), proptest::collection::vec(perm_strategy(d), 1..4))),
        ) {
            let brute = brute_force_order(&gens, degree, 5040).unwrap().unwrap();
            prop_assert_eq!(schreier_sims_order(&gens, degree).unwrap(), BigUint::from(brute));
        }
    }
}
