//! Finitely generated subsemigroups: closure enumeration, the finite
//! presentability decision procedure, constructive witnesses for the
//! non-finitely-presented case, and the decomposition of positive
//! subsemigroups into arithmetic pieces.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::element::{incomparable, Element, Sign};
use crate::error::{Error, Result};
use crate::numerical::NumericalSgp;
use crate::ptrans::{sigma, PartialMap};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A finite generating set; duplicates removed, kept in sorted order so
/// every derived selection is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratorSet")]
pub struct GeneratorSet {
    generators: Vec<Element>,
}

#[derive(Deserialize)]
struct RawGeneratorSet {
    generators: Vec<Element>,
}

impl TryFrom<RawGeneratorSet> for GeneratorSet {
    type Error = Error;

    fn try_from(raw: RawGeneratorSet) -> Result<GeneratorSet> {
        GeneratorSet::new(raw.generators)
    }
}

impl GeneratorSet {
    pub fn new(gens: impl IntoIterator<Item = Element>) -> Result<GeneratorSet> {
        let set: BTreeSet<Element> = gens.into_iter().collect();
        if set.is_empty() {
            return Err(Error::domain("a generating set must be nonempty"));
        }
        Ok(GeneratorSet {
            generators: set.into_iter().collect(),
        })
    }

    pub fn gens(&self) -> &[Element] {
        &self.generators
    }

    pub fn sign_summary(&self) -> SignSummary {
        let mut summary = SignSummary {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for g in &self.generators {
            match g.sign() {
                Sign::Positive => summary.positive += 1,
                Sign::Negative => summary.negative += 1,
                Sign::Zero => summary.zero += 1,
            }
        }
        summary
    }

    pub fn max_dclass_index(&self) -> i64 {
        self.generators
            .iter()
            .map(Element::dclass_index)
            .max()
            .expect("nonempty")
    }

    /// Image under the generator-swapping automorphism.
    pub fn mirror(&self) -> GeneratorSet {
        GeneratorSet::new(self.generators.iter().map(Element::mirror)).expect("nonempty")
    }
}

/// Counts of generators by sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignSummary {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    FinitelyPresented,
    NotFinitelyPresented,
}

/// Number of idempotents of the generated subsemigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdempotentCount {
    Finite(u64),
    Infinite,
}

impl Serialize for IdempotentCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IdempotentCount::Finite(n) => serializer.serialize_u64(*n),
            IdempotentCount::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

/// Output of [`classify`]: the subsemigroup is finitely presented exactly
/// when it has finitely many idempotents, and that happens exactly when the
/// generators do not mix positive and negative elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub idempotent_count: IdempotentCount,
    pub evidence: SignSummary,
}

/// All elements of the generated subsemigroup with D-class index at most
/// `dmax`, by breadth-first closure under right multiplication.
///
/// Discarding products whose index exceeds `dmax` is sound: the index of a
/// product is at least the index of each factor, so every element inside the
/// bound is reached through prefixes that stay inside the bound.
pub fn enumerate_closure(set: &GeneratorSet, dmax: i64) -> Result<BTreeSet<Element>> {
    closure_impl(set, dmax, expand_frontier)
}

/// Sequential variant of [`enumerate_closure`]; the fallback when the
/// `parallel` feature is off, kept callable for comparison benchmarks.
pub fn enumerate_closure_sequential(set: &GeneratorSet, dmax: i64) -> Result<BTreeSet<Element>> {
    closure_impl(set, dmax, expand_frontier_sequential)
}

type FrontierExpand = fn(&[Element], &[Element], i64) -> Result<Vec<Element>>;

fn closure_impl(set: &GeneratorSet, dmax: i64, expand: FrontierExpand) -> Result<BTreeSet<Element>> {
    let gens = set.gens();
    let mut known: BTreeSet<Element> = gens
        .iter()
        .filter(|g| g.dclass_index() <= dmax)
        .copied()
        .collect();
    let mut frontier: Vec<Element> = known.iter().copied().collect();
    while !frontier.is_empty() {
        let products = expand(&frontier, gens, dmax)?;
        frontier = products
            .into_iter()
            .filter(|p| known.insert(*p))
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
    }
    Ok(known)
}

fn right_products(s: &Element, gens: &[Element], dmax: i64) -> Result<Vec<Element>> {
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let prod = s.multiply(g)?;
        if prod.dclass_index() <= dmax {
            out.push(prod);
        }
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
fn expand_frontier(frontier: &[Element], gens: &[Element], dmax: i64) -> Result<Vec<Element>> {
    let nested: Vec<Vec<Element>> = frontier
        .par_iter()
        .map(|s| right_products(s, gens, dmax))
        .collect::<Result<_>>()?;
    Ok(nested.concat())
}

#[cfg(not(feature = "parallel"))]
fn expand_frontier(frontier: &[Element], gens: &[Element], dmax: i64) -> Result<Vec<Element>> {
    expand_frontier_sequential(frontier, gens, dmax)
}

fn expand_frontier_sequential(
    frontier: &[Element],
    gens: &[Element],
    dmax: i64,
) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for s in frontier {
        out.extend(right_products(s, gens, dmax)?);
    }
    Ok(out)
}

/// Closure of a finite set of idempotents. Products of idempotents are
/// idempotent (in the non-mixed setting every factor must be), and the
/// componentwise maxima keep this finite.
pub fn semilattice_closure(idempotents: &[Element]) -> Result<BTreeSet<Element>> {
    for e in idempotents {
        if !e.is_idempotent() {
            return Err(Error::domain("semilattice closure expects idempotents"));
        }
    }
    let mut known: BTreeSet<Element> = idempotents.iter().copied().collect();
    let mut frontier: Vec<Element> = known.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for g in idempotents {
                let prod = s.multiply(g)?;
                if known.insert(prod) {
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    Ok(known)
}

/// Exact idempotent count of the generated subsemigroup. Infinite exactly
/// when the generators contain both a positive and a negative element;
/// otherwise a product is idempotent only when every factor is, so the
/// idempotents are the semilattice closure of the sign-zero generators.
pub fn count_idempotents(set: &GeneratorSet) -> Result<IdempotentCount> {
    let summary = set.sign_summary();
    if summary.positive > 0 && summary.negative > 0 {
        return Ok(IdempotentCount::Infinite);
    }
    let idems: Vec<Element> = set
        .gens()
        .iter()
        .filter(|g| g.is_idempotent())
        .copied()
        .collect();
    if idems.is_empty() {
        return Ok(IdempotentCount::Finite(0));
    }
    Ok(IdempotentCount::Finite(
        semilattice_closure(&idems)?.len() as u64
    ))
}

/// Decides finite presentability of the generated subsemigroup.
pub fn classify(set: &GeneratorSet) -> Result<ClassificationReport> {
    let idempotent_count = count_idempotents(set)?;
    let verdict = match idempotent_count {
        IdempotentCount::Finite(_) => Verdict::FinitelyPresented,
        IdempotentCount::Infinite => Verdict::NotFinitelyPresented,
    };
    Ok(ClassificationReport {
        verdict,
        idempotent_count,
        evidence: set.sign_summary(),
    })
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}

fn lcm_i64(a: i64, b: i64) -> Result<i64> {
    let g = gcd_i64(a, b);
    (a / g).checked_mul(b).ok_or(Error::Range("lcm overflows"))
}

/// Matched powers for a positive `u1` and negative `u2`:
/// `n1 * p1 = n2 * |p2| = lcm(p1, |p2|)`.
fn matched_exponents(u1: &Element, u2: &Element) -> Result<(i64, i64)> {
    if u1.sign() != Sign::Positive {
        return Err(Error::domain("u1 must be positive"));
    }
    if u2.sign() != Sign::Negative {
        return Err(Error::domain("u2 must be negative"));
    }
    let p1 = u1.displacement();
    let p2 = -u2.displacement();
    let m = lcm_i64(p1, p2)?;
    Ok((m / p1, m / p2))
}

/// The idempotent `u1^(n1 x) u2^(n2 x) u2^(n2 y) u1^(n1 y)` with matched
/// exponents, empty factors omitted. Defined for `x + y > 0`.
pub fn idempotent_family(u1: &Element, u2: &Element, x: u64, y: u64) -> Result<Element> {
    if x + y == 0 {
        return Err(Error::domain("the family needs x + y > 0"));
    }
    let (n1, n2) = matched_exponents(u1, u2)?;
    let exp = |n: i64, k: u64| -> Result<i64> {
        n.checked_mul(k as i64).ok_or(Error::Range("exponent overflows"))
    };
    let factors = [
        (u1, exp(n1, x)?),
        (u2, exp(n2, x)?),
        (u2, exp(n2, y)?),
        (u1, exp(n1, y)?),
    ];
    let mut acc: Option<Element> = None;
    for (base, k) in factors {
        if k == 0 {
            continue;
        }
        let factor = base.power(k)?;
        acc = Some(match acc {
            None => factor,
            Some(prev) => prev.multiply(&factor)?,
        });
    }
    let result = acc.expect("x + y > 0 leaves at least one factor");
    debug_assert!(result.is_idempotent());
    Ok(result)
}

/// Constructive evidence that the generated subsemigroup is not finitely
/// presented: two incomparable idempotents far apart in the D-class chain
/// whose images under the level-`m` word map fail to commute, even though
/// the map respects every product inside the low classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub u1: Element,
    pub u2: Element,
    pub n1: i64,
    pub n2: i64,
    pub e: Element,
    pub f: Element,
    pub n: i64,
    pub m: i64,
    /// The two unequal products: image of `e` then `f`, and of `f` then `e`.
    pub obstruction: (PartialMap, PartialMap),
}

/// Builds a [`Witness`] for a mixed-sign generating set.
///
/// `u1`, `u2` are the first positive and first negative generators. `e` is
/// the family idempotent of minimal D-class index (ties resolved toward the
/// right branch), `n` the smallest bound whose classes contain `e` and all
/// generators. `f` walks the opposite family branch until its index reaches
/// `3n`; both branches stay incomparable to `e` throughout.
pub fn non_fp_witness(set: &GeneratorSet) -> Result<Witness> {
    let report = classify(set)?;
    if report.verdict != Verdict::NotFinitelyPresented {
        return Err(Error::domain(
            "witness construction requires a mixed-sign generating set",
        ));
    }
    let u1 = *set
        .gens()
        .iter()
        .find(|g| g.sign() == Sign::Positive)
        .expect("mixed signs");
    let u2 = *set
        .gens()
        .iter()
        .find(|g| g.sign() == Sign::Negative)
        .expect("mixed signs");
    let (n1, n2) = matched_exponents(&u1, &u2)?;

    let right = idempotent_family(&u1, &u2, 1, 0)?;
    let left = idempotent_family(&u1, &u2, 0, 1)?;
    let (e, e_xy) = if right.dclass_index() <= left.dclass_index() {
        (right, (1u64, 0u64))
    } else {
        (left, (0, 1))
    };
    let n = e.dclass_index().max(set.max_dclass_index());
    let target = n.checked_mul(3).ok_or(Error::Range("3n overflows"))?;

    let mut f_xy = if e_xy.0 == 0 {
        // e sits on the left branch; walk the right branch past it.
        (e_xy.1 + 1, 0)
    } else {
        // e sits on the right branch; walk the left branch from y + 2.
        (e_xy.0 - 1, e_xy.1 + 2)
    };
    let f = loop {
        let candidate = idempotent_family(&u1, &u2, f_xy.0, f_xy.1)?;
        if candidate.dclass_index() >= target && incomparable(&e, &candidate)? {
            break candidate;
        }
        if e_xy.0 == 0 {
            f_xy.0 += 1;
        } else {
            f_xy.1 += 1;
        }
    };
    let m = f.dclass_index();

    let level = m as usize;
    let e_map = sigma(&e, level)?;
    let f_map = sigma(&f, level)?;
    let ef = e_map.compose(&f_map)?;
    let fe = f_map.compose(&e_map)?;
    if ef == fe {
        return Err(Error::internal(format!(
            "obstruction maps coincide for e={e}, f={f}, m={m}"
        )));
    }
    Ok(Witness {
        u1,
        u2,
        n1,
        n2,
        e,
        f,
        n,
        m,
        obstruction: (ef, fe),
    })
}

/// One arithmetic piece of a positive subsemigroup: the elements
/// `(-x, p, p + (y - 1))` it contains, listed by their middle component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub x: i64,
    pub y: i64,
    /// Middle components found by the bounded enumeration, ascending.
    pub p_values: Vec<i64>,
    /// Minimal generators (by middle component) of the deep part `p > Q`.
    pub u_min_generators: Vec<i64>,
}

/// Decomposition of a positive subsemigroup: finitely many arithmetic
/// pieces, a finite shallow complement, and per-piece generators of the
/// deep part, which satisfies the product-compatibility condition and is a
/// disjoint union of numerical semigroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Least chain level containing every generator: all of the
    /// subsemigroup satisfies `a <= chain_bound` and `b - p <= chain_bound`.
    pub chain_bound: i64,
    /// D-class cap used for piece detection.
    pub detection_bound: i64,
    /// True when no new piece appeared in the last two index increments
    /// below the cap; false means detection ran out at the cap.
    pub stabilized: bool,
    /// `Q`: deep-part threshold, the largest `max(x, y - 1)` over pieces.
    pub q_bound: i64,
    pub pieces: Vec<Piece>,
    /// Elements realizing the minimal generators of every deep part.
    pub u_generators: Vec<Element>,
    /// The finite shallow layer: elements with `p <= Q`.
    pub complement: Vec<Element>,
}

/// Decomposes the subsemigroup generated by positive elements.
pub fn decompose_positive(set: &GeneratorSet) -> Result<Decomposition> {
    if set.gens().iter().any(|g| g.sign() != Sign::Positive) {
        return Err(Error::domain(
            "decomposition requires every generator to be positive",
        ));
    }
    decompose_impl(set)
}

/// Decomposition of the positive part for a non-negative generating set
/// (idempotents allowed); also returns the finitely many idempotents of the
/// subsemigroup, which form the extra shallow layer.
pub fn decompose_nonnegative(set: &GeneratorSet) -> Result<(Decomposition, Vec<Element>)> {
    if set.gens().iter().any(|g| g.sign() == Sign::Negative) {
        return Err(Error::domain(
            "non-negative decomposition cannot take negative generators",
        ));
    }
    if set.gens().iter().all(|g| g.sign() == Sign::Zero) {
        return Err(Error::domain(
            "the subsemigroup has no positive part to decompose",
        ));
    }
    let idems: Vec<Element> = set
        .gens()
        .iter()
        .filter(|g| g.is_idempotent())
        .copied()
        .collect();
    let idempotents: Vec<Element> = if idems.is_empty() {
        Vec::new()
    } else {
        semilattice_closure(&idems)?.into_iter().collect()
    };
    Ok((decompose_impl(set)?, idempotents))
}

fn decompose_impl(set: &GeneratorSet) -> Result<Decomposition> {
    // Every element of the subsemigroup keeps a <= chain_bound and
    // b - p <= chain_bound: products of non-negative elements never push
    // either attribute past the generators'.
    let chain_bound = set
        .gens()
        .iter()
        .map(|g| g.left_reach().max(g.right_reach() - g.displacement()))
        .max()
        .expect("nonempty");
    let max_idx = set.max_dclass_index();
    // Piece-detection cap. The first factor follows the generator count
    // heuristic; the clamp guarantees that small inputs are still scanned
    // and that every realized piece shows an element with p > Q (doubling a
    // shallow element stays under 4 * chain_bound + 2).
    let detection_bound = (chain_bound.max(2))
        .checked_mul(max_idx + 1)
        .ok_or(Error::Range("detection bound overflows"))?
        .max(4 * chain_bound + 2);

    let closure = enumerate_closure(set, detection_bound)?;

    let mut piece_values: BTreeMap<(i64, i64), Vec<i64>> = BTreeMap::new();
    let mut first_seen: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for el in &closure {
        if el.sign() != Sign::Positive {
            continue;
        }
        let p = el.displacement();
        let key = (el.left_reach(), el.right_reach() - p + 1);
        piece_values.entry(key).or_default().push(p);
        let idx = el.dclass_index();
        first_seen
            .entry(key)
            .and_modify(|v| *v = (*v).min(idx))
            .or_insert(idx);
    }
    if piece_values.is_empty() {
        return Err(Error::internal("positive generators produced no pieces"));
    }
    let last_discovery = *first_seen.values().max().expect("nonempty");
    let stabilized = last_discovery <= detection_bound - 2;

    let q_bound = piece_values
        .keys()
        .map(|(x, y)| (*x).max(y - 1))
        .max()
        .expect("nonempty");

    let mut pieces = Vec::new();
    let mut u_generators = Vec::new();
    for ((x, y), mut values) in piece_values {
        values.sort_unstable();
        values.dedup();
        let deep: Vec<u64> = values
            .iter()
            .filter(|p| **p > q_bound)
            .map(|p| *p as u64)
            .collect();
        if deep.is_empty() {
            return Err(Error::internal(format!(
                "piece ({x}, {y}) shows no element beyond the threshold {q_bound}"
            )));
        }
        let u_min_generators: Vec<i64> = NumericalSgp::new(deep)?
            .minimal_generators()
            .into_iter()
            .map(|p| p as i64)
            .collect();
        for p in &u_min_generators {
            u_generators.push(Element::new(x, *p, p + (y - 1))?);
        }
        pieces.push(Piece {
            x,
            y,
            p_values: values,
            u_min_generators,
        });
    }

    let complement: Vec<Element> = closure
        .iter()
        .filter(|el| el.sign() == Sign::Positive && el.displacement() <= q_bound)
        .copied()
        .collect();

    Ok(Decomposition {
        chain_bound,
        detection_bound,
        stabilized,
        q_bound,
        pieces,
        u_generators,
        complement,
    })
}

/// The product-compatibility condition on a positive generating set:
/// `a_i >= a_j - p_i` and `b_i <= b_j + p_i` for all ordered pairs. Under
/// it, products collapse to a closed form determined by the first and last
/// factors and the total displacement.
pub fn check_nice_condition(set: &GeneratorSet) -> Result<bool> {
    for g in set.gens() {
        if g.sign() != Sign::Positive {
            return Err(Error::domain(
                "the compatibility condition is about positive generators",
            ));
        }
    }
    for gi in set.gens() {
        for gj in set.gens() {
            let ok_a = gi.left_reach() >= gj.left_reach() - gi.displacement();
            let ok_b = gi.right_reach() <= gj.right_reach() + gi.displacement();
            if !ok_a || !ok_b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
