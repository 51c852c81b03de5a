use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::{Error, Result};

/// Tables up to this order are checked for associativity exhaustively.
pub const EXHAUSTIVE_ASSOCIATIVITY_MAX: usize = 64;
/// Number of random triples checked above [`EXHAUSTIVE_ASSOCIATIVITY_MAX`].
pub const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 10_000;

/// A finite group given by a full multiplication table over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
}

impl CayleyTable {
    /// Validates `rows` as a group table: a Latin square with a two-sided
    /// identity and an associative product.
    pub fn new(rows: &[Vec<usize>]) -> Result<CayleyTable> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedGroup("empty table".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedGroup(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::MalformedGroup(format!("row {i} has an entry out of range")));
            }
            if !is_permutation(row.iter().copied(), n) {
                return Err(Error::MalformedGroup(format!("row {i} is not a permutation")));
            }
        }
        for j in 0..n {
            if !is_permutation(rows.iter().map(|r| r[j]), n) {
                return Err(Error::MalformedGroup(format!("column {j} is not a permutation")));
            }
        }
        let identity =
            (0..n).find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x)).ok_or(Error::MissingIdentity)?;
        let mul: Vec<u32> = rows.iter().flatten().map(|&x| x as u32).collect();
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= EXHAUSTIVE_ASSOCIATIVITY_MAX {
            for (a, b, c) in (0..n).cartesian_product(0..n).cartesian_product(0..n).map(|((a, b), c)| (a, b, c)) {
                if !assoc(a, b, c) {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        } else {
            let mut rng = SmallRng::seed_from_u64(0x5eed_7ab1e);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| at(a, b) == identity).expect("latin square row") as u32).collect();
        Ok(CayleyTable { n, mul, inv, identity })
    }

    /// Builds a table from a product on `0..n`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<CayleyTable> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        CayleyTable::new(&rows)
    }

    /// `Sym(k)` with elements indexed by the lexicographic order of their
    /// image lists, so index 0 is the identity. The product `a * b` applies
    /// `b` first.
    pub fn symmetric(k: usize) -> Result<CayleyTable> {
        if k == 0 || k > 5 {
            return Err(Error::MalformedGroup("symmetric table needs 1 <= k <= 5".into()));
        }
        let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under product");
        CayleyTable::from_fn(perms.len(), |a, b| {
            let prod: Vec<usize> = (0..k).map(|i| perms[a][perms[b][i]]).collect();
            index(&prod)
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(|r| r.iter().map(|&x| x as usize).collect()).collect()
    }
}

fn is_permutation(xs: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for x in xs {
        if x >= n || core::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    true
}
