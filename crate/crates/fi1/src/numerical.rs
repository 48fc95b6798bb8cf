//! Subsemigroups of the positive integers: membership, the unique minimal
//! generating set, Frobenius data, and minimal presentations computed from
//! factorization graphs.
//!
//! Structural computations run on the gcd-normalized semigroup; the raw
//! generators are kept so callers can map results back.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// A subsemigroup of the positive integers given by finitely many generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalSgp {
    gens: Vec<u64>,
    gcd: u64,
}

/// A finite commutative presentation on the minimal generators: each
/// relation is a pair of factorizations written as exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalPresentation {
    pub generators: Vec<u64>,
    pub relations: Vec<(Vec<u64>, Vec<u64>)>,
}

impl NumericalSgp {
    pub fn new(gens: impl IntoIterator<Item = u64>) -> Result<NumericalSgp> {
        let gens: BTreeSet<u64> = gens.into_iter().collect();
        if gens.is_empty() {
            return Err(Error::domain("a numerical semigroup needs a generator"));
        }
        if gens.contains(&0) {
            return Err(Error::domain("generators must be positive"));
        }
        let gens: Vec<u64> = gens.into_iter().collect();
        let gcd = gens.iter().copied().fold(0, gcd_u64);
        Ok(NumericalSgp { gens, gcd })
    }

    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    /// Generators divided by their gcd.
    pub fn normalized_gens(&self) -> Vec<u64> {
        self.gens.iter().map(|g| g / self.gcd).collect()
    }

    /// Membership of `k` (in raw units): is `k` a nonempty combination of
    /// the generators? Dynamic program up to `k`.
    pub fn member(&self, k: u64) -> bool {
        if k == 0 {
            return false;
        }
        *self.membership_table(k).last().unwrap()
    }

    /// `reachable[v]` for `v` in `0..=bound`, with `reachable[0] = true`
    /// (the empty combination; excluded from `member`).
    fn membership_table(&self, bound: u64) -> Vec<bool> {
        let bound = bound as usize;
        let mut reachable = vec![false; bound + 1];
        reachable[0] = true;
        for v in 1..=bound {
            reachable[v] = self
                .gens
                .iter()
                .take_while(|g| **g as usize <= v)
                .any(|g| reachable[v - *g as usize]);
        }
        reachable
    }

    /// The unique minimal generating set: members that are not a sum of two
    /// members. Every such element occurs among the given generators.
    pub fn minimal_generators(&self) -> Vec<u64> {
        let max = *self.gens.last().unwrap();
        let table = self.membership_table(max);
        self.gens
            .iter()
            .copied()
            .filter(|g| !(1..*g).any(|s| table[s as usize] && table[(g - s) as usize]))
            .collect()
    }

    /// Largest non-member of the gcd-normalized semigroup, or `None` when
    /// the normalized semigroup is all of the positive integers.
    pub fn frobenius(&self) -> Option<u64> {
        let norm = NumericalSgp {
            gens: self.normalized_gens(),
            gcd: 1,
        };
        if norm.gens[0] == 1 {
            return None;
        }
        // Scan upward until min-generator many consecutive members appear;
        // past that point every integer is a member.
        let run_needed = norm.gens[0] as usize;
        let mut largest_gap = 0u64;
        let mut run = 0usize;
        let mut v = 1u64;
        loop {
            if norm.member(v) {
                run += 1;
                if run >= run_needed {
                    return Some(largest_gap);
                }
            } else {
                largest_gap = v;
                run = 0;
            }
            v += 1;
        }
    }

    /// All gaps of the normalized semigroup, in increasing order.
    pub fn gaps(&self) -> Vec<u64> {
        let frob = match self.frobenius() {
            Some(f) => f,
            None => return Vec::new(),
        };
        let norm = NumericalSgp {
            gens: self.normalized_gens(),
            gcd: 1,
        };
        let table = norm.membership_table(frob);
        (1..=frob).filter(|v| !table[*v as usize]).collect()
    }

    /// All factorizations of `m` (normalized units) over the minimal
    /// generators, as exponent vectors in lexicographic order.
    pub fn factorizations(&self, m: u64) -> Vec<Vec<u64>> {
        let mingens: Vec<u64> = self
            .minimal_generators()
            .iter()
            .map(|g| g / self.gcd)
            .collect();
        let mut out = Vec::new();
        let mut current = vec![0u64; mingens.len()];
        factorize_rec(&mingens, 0, m, &mut current, &mut out);
        out
    }

    /// Minimal presentation on the minimal generators. For every member
    /// whose factorization graph is disconnected, one relation bridges each
    /// further component to the first.
    ///
    /// The scan is complete: a member above `frobenius + 2 * max_generator`
    /// always has a connected factorization graph, because any two
    /// factorizations are bridged through a third that reuses one generator
    /// from each.
    pub fn minimal_presentation(&self) -> NumericalPresentation {
        let generators = self.minimal_generators();
        let mingens_norm: Vec<u64> = generators.iter().map(|g| g / self.gcd).collect();
        let mut relations = Vec::new();
        if mingens_norm.len() >= 2 {
            let frob = self.frobenius().map_or(0i64, |f| f as i64);
            let bound = frob + 2 * *mingens_norm.last().unwrap() as i64;
            let norm = NumericalSgp {
                gens: mingens_norm.clone(),
                gcd: 1,
            };
            let table = norm.membership_table(bound as u64);
            for m in 2 * mingens_norm[0]..=bound as u64 {
                if !table[m as usize] {
                    continue;
                }
                let facts = self.factorizations(m);
                if facts.len() < 2 {
                    continue;
                }
                let components = graph_components(&facts);
                if components.len() < 2 {
                    continue;
                }
                // One relation per bridged component pair, anchored at the
                // component containing the lexicographically least vertex.
                let reps: Vec<Vec<u64>> = components
                    .iter()
                    .map(|c| facts[*c.iter().min().unwrap()].clone())
                    .collect();
                for rep in reps.iter().skip(1) {
                    relations.push((reps[0].clone(), rep.clone()));
                }
            }
        }
        NumericalPresentation {
            generators,
            relations,
        }
    }

    /// Checks bounded completeness of a relation set: for every member up to
    /// `bound` (normalized units), all factorizations over the minimal
    /// generators are connected by single relation applications.
    pub fn relations_connect_up_to(&self, pres: &NumericalPresentation, bound: u64) -> bool {
        let mingens_norm: Vec<u64> = pres.generators.iter().map(|g| g / self.gcd).collect();
        if mingens_norm.len() < 2 {
            return true;
        }
        let norm = NumericalSgp {
            gens: mingens_norm,
            gcd: 1,
        };
        let table = norm.membership_table(bound);
        for m in 1..=bound {
            if !table[m as usize] {
                continue;
            }
            let facts = self.factorizations(m);
            if facts.len() < 2 {
                continue;
            }
            let mut dsu = Dsu::new(facts.len());
            for (i, z) in facts.iter().enumerate() {
                for (j, z2) in facts.iter().enumerate().skip(i + 1) {
                    for (lhs, rhs) in &pres.relations {
                        if applies(z, lhs, rhs, z2) || applies(z, rhs, lhs, z2) {
                            dsu.union(i, j);
                        }
                    }
                }
            }
            let root = dsu.find(0);
            if (1..facts.len()).any(|i| dsu.find(i) != root) {
                return false;
            }
        }
        true
    }
}

/// Does replacing `lhs` by `rhs` inside `z` give `z2`?
fn applies(z: &[u64], lhs: &[u64], rhs: &[u64], z2: &[u64]) -> bool {
    z.iter()
        .zip(lhs)
        .all(|(zi, li)| zi >= li)
        && z.iter()
            .zip(lhs)
            .zip(rhs)
            .zip(z2)
            .all(|(((zi, li), ri), z2i)| zi - li + ri == *z2i)
}

fn factorize_rec(
    gens: &[u64],
    idx: usize,
    remaining: u64,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    if idx == gens.len() {
        return;
    }
    // Counts ascend, so the output comes out in lexicographic order.
    let max_count = remaining / gens[idx];
    for count in 0..=max_count {
        current[idx] = count;
        factorize_rec(gens, idx + 1, remaining - count * gens[idx], current, out);
    }
    current[idx] = 0;
}

/// Connected components of the factorization graph: vertices are exponent
/// vectors, edges join vectors with intersecting support.
fn graph_components(facts: &[Vec<u64>]) -> Vec<Vec<usize>> {
    let mut dsu = Dsu::new(facts.len());
    for (i, z) in facts.iter().enumerate() {
        for (j, z2) in facts.iter().enumerate().skip(i + 1) {
            if z.iter().zip(z2).any(|(a, b)| *a > 0 && *b > 0) {
                dsu.union(i, j);
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..facts.len() {
        let r = dsu.find(i);
        match roots.iter().position(|x| *x == r) {
            Some(pos) => components[pos].push(i),
            None => {
                roots.push(r);
                components.push(vec![i]);
            }
        }
    }
    components
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}
