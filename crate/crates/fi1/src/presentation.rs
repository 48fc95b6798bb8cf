//! Semigroup presentations: the defining relation family of the free
//! inverse semigroup and its truncations, relation-satisfaction checks,
//! bounded derivation search over single-relation rewrites, and best-effort
//! presentation synthesis for finitely presented subsemigroups.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{
    classify, decompose_nonnegative, decompose_positive, enumerate_closure, semilattice_closure,
    GeneratorSet, Verdict,
};
use crate::element::{eval_word, Element};
use crate::error::{Error, Result};
use crate::numerical::NumericalSgp;
use crate::ptrans::PartialMap;
use crate::word::{Letter, Word};

/// A word over the alphabet of a [`Presentation`], as symbol indices.
pub type SymWord = Vec<u32>;

/// A finite presentation: named abstract generators and pairs of nonempty
/// words over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Vec<String>,
    relations: Vec<(SymWord, SymWord)>,
}

impl Presentation {
    pub fn new(alphabet: Vec<String>, relations: Vec<(SymWord, SymWord)>) -> Result<Presentation> {
        let distinct: BTreeSet<&String> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() {
            return Err(Error::domain("alphabet symbols must be distinct"));
        }
        let bound = alphabet.len() as u32;
        for (lhs, rhs) in &relations {
            if lhs.is_empty() || rhs.is_empty() {
                return Err(Error::domain("relation sides must be nonempty"));
            }
            if lhs.iter().chain(rhs).any(|s| *s >= bound) {
                return Err(Error::domain("relation uses a symbol outside the alphabet"));
            }
        }
        Ok(Presentation {
            alphabet,
            relations,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn relations(&self) -> &[(SymWord, SymWord)] {
        &self.relations
    }

    pub fn symbol_index(&self, name: &str) -> Option<u32> {
        self.alphabet.iter().position(|s| s == name).map(|i| i as u32)
    }

    /// Renders a symbol word with the alphabet names, space separated.
    pub fn render_word(&self, word: &[u32]) -> String {
        let mut out = String::new();
        for (i, sym) in word.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", self.alphabet[*sym as usize]);
        }
        out
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            alphabet: &'a [String],
            relations: Vec<[Vec<&'a str>; 2]>,
        }
        let named = |w: &SymWord| -> Vec<&str> {
            w.iter().map(|s| self.alphabet[*s as usize].as_str()).collect()
        };
        Repr {
            alphabet: &self.alphabet,
            relations: self
                .relations
                .iter()
                .map(|(l, r)| [named(l), named(r)])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            alphabet: Vec<String>,
            relations: Vec<[Vec<String>; 2]>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let index: HashMap<&str, u32> = repr
            .alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u32))
            .collect();
        let mut relations = Vec::with_capacity(repr.relations.len());
        for [lhs, rhs] in &repr.relations {
            let side = |names: &Vec<String>| -> std::result::Result<SymWord, D::Error> {
                names
                    .iter()
                    .map(|n| {
                        index
                            .get(n.as_str())
                            .copied()
                            .ok_or_else(|| D::Error::custom(format!("unknown symbol {n:?}")))
                    })
                    .collect()
            };
            relations.push((side(lhs)?, side(rhs)?));
        }
        Presentation::new(repr.alphabet, relations).map_err(D::Error::custom)
    }
}

const SYM_X: u32 = 0;
const SYM_XINV: u32 = 1;

fn generator_alphabet() -> Vec<String> {
    vec!["x".to_string(), "x^-1".to_string()]
}

/// Translates a word over `{x, x^-1}` into symbol indices for the
/// two-letter alphabet.
pub fn word_to_symbols(w: &Word) -> SymWord {
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::X => SYM_X,
            Letter::XInv => SYM_XINV,
        })
        .collect()
}

/// Inverse of [`word_to_symbols`].
pub fn symbols_to_word(sym: &[u32]) -> Result<Word> {
    let letters = sym
        .iter()
        .map(|s| match *s {
            SYM_X => Ok(Letter::X),
            SYM_XINV => Ok(Letter::XInv),
            other => Err(Error::domain(format!(
                "symbol {other} is not part of the two-letter alphabet"
            ))),
        })
        .collect::<Result<Vec<Letter>>>()?;
    Word::new(letters)
}

fn block(sym: u32, count: u32) -> impl Iterator<Item = u32> {
    std::iter::repeat_n(sym, count as usize)
}

/// The finite truncation of the defining relation family on `{x, x^-1}`:
/// the two absorption relations `x x^-1 x = x`, `x^-1 x x^-1 = x^-1` plus
/// the commutation family
/// `x^-i x^i x^j x^-j = x^j x^-j x^-i x^i` for all `i + j` in `[1, bound]`.
///
/// Commutation sides evaluate to the idempotent `(-i, 0, j)`, so the
/// truncation at `bound` is exactly the part of the infinite family whose
/// relations hold inside D-class indices up to `bound`.
pub fn fi1_relations(bound: u32) -> Presentation {
    let mut relations = Vec::new();
    relations.push((vec![SYM_X, SYM_XINV, SYM_X], vec![SYM_X]));
    relations.push((vec![SYM_XINV, SYM_X, SYM_XINV], vec![SYM_XINV]));
    for k in 1..=bound {
        for i in 0..=k {
            let j = k - i;
            let lhs: SymWord = block(SYM_XINV, i)
                .chain(block(SYM_X, i))
                .chain(block(SYM_X, j))
                .chain(block(SYM_XINV, j))
                .collect();
            let rhs: SymWord = block(SYM_X, j)
                .chain(block(SYM_XINV, j))
                .chain(block(SYM_XINV, i))
                .chain(block(SYM_X, i))
                .collect();
            relations.push((lhs, rhs));
        }
    }
    Presentation {
        alphabet: generator_alphabet(),
        relations,
    }
}

/// The relations of the defining family whose sides evaluate into D-class
/// indices at most `n`, selected by evaluating each side.
pub fn restricted_relations(n: u32) -> Presentation {
    let full = fi1_relations(n);
    let relations = full
        .relations
        .into_iter()
        .filter(|(lhs, rhs)| {
            let lv = eval_symbol_word(lhs);
            let rv = eval_symbol_word(rhs);
            lv.dclass_index() <= n as i64 && rv.dclass_index() <= n as i64
        })
        .collect();
    Presentation {
        alphabet: generator_alphabet(),
        relations,
    }
}

fn eval_symbol_word(sym: &[u32]) -> Element {
    let word = symbols_to_word(sym).expect("two-letter alphabet");
    eval_word(&word)
}

/// Checks an interpretation against the defining relations under a fallible
/// associative product. Returns the index of the first failing relation, or
/// `None` when every relation is satisfied.
pub fn satisfies<T, F>(p: &Presentation, values: &[T], mul: F) -> Result<Option<usize>>
where
    T: Clone + PartialEq,
    F: Fn(&T, &T) -> Result<T>,
{
    if values.len() != p.alphabet.len() {
        return Err(Error::domain(format!(
            "interpretation covers {} of {} symbols",
            values.len(),
            p.alphabet.len()
        )));
    }
    let eval = |word: &SymWord| -> Result<T> {
        let mut iter = word.iter();
        let first = iter.next().expect("relation sides are nonempty");
        let mut acc = values[*first as usize].clone();
        for sym in iter {
            acc = mul(&acc, &values[*sym as usize])?;
        }
        Ok(acc)
    };
    for (idx, (lhs, rhs)) in p.relations.iter().enumerate() {
        if eval(lhs)? != eval(rhs)? {
            return Ok(Some(idx));
        }
    }
    Ok(None)
}

/// [`satisfies`] for element-valued interpretations.
pub fn satisfies_elements(p: &Presentation, values: &[Element]) -> Result<Option<usize>> {
    satisfies(p, values, |a, b| a.multiply(b))
}

/// [`satisfies`] for partial-map interpretations.
pub fn satisfies_maps(p: &Presentation, values: &[PartialMap]) -> Result<Option<usize>> {
    satisfies(p, values, |a, b| a.compose(b))
}

/// Result of a bounded derivation search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationSearch {
    /// An elementary sequence from `u` to `v`: consecutive words differ by
    /// one relation application.
    Derived(Vec<SymWord>),
    /// No sequence found. `space_exhausted` distinguishes "the whole
    /// rewrite space within the length bound was searched" from "the step
    /// budget ran out".
    NotFoundWithinBudget { space_exhausted: bool },
}

impl DerivationSearch {
    pub fn is_derived(&self) -> bool {
        matches!(self, DerivationSearch::Derived(_))
    }
}

/// All words one relation application away from `w`, within `max_length`.
fn rewrite_neighbors(w: &[u32], p: &Presentation, max_length: usize) -> Vec<SymWord> {
    let mut out = Vec::new();
    for (lhs, rhs) in &p.relations {
        for (pat, rep) in [(lhs, rhs), (rhs, lhs)] {
            if pat.len() > w.len() || w.len() - pat.len() + rep.len() > max_length {
                continue;
            }
            for start in 0..=w.len() - pat.len() {
                if &w[start..start + pat.len()] == pat.as_slice() {
                    let mut next = Vec::with_capacity(w.len() - pat.len() + rep.len());
                    next.extend_from_slice(&w[..start]);
                    next.extend_from_slice(rep);
                    next.extend_from_slice(&w[start + pat.len()..]);
                    out.push(next);
                }
            }
        }
    }
    out
}

/// Bidirectional breadth-first search for an elementary sequence from `u`
/// to `v`, exploring only words of length at most `max_length` and
/// expanding at most `max_steps` words. Frontiers grow level by level and
/// meets resolve toward the lexicographically least meeting word, so the
/// returned sequence is short and fully deterministic.
pub fn derivable(
    u: &SymWord,
    v: &SymWord,
    p: &Presentation,
    max_length: usize,
    max_steps: usize,
) -> Result<DerivationSearch> {
    let bound = p.alphabet.len() as u32;
    for word in [u, v] {
        if word.is_empty() {
            return Err(Error::domain("derivation endpoints must be nonempty"));
        }
        if word.iter().any(|s| *s >= bound) {
            return Err(Error::domain("derivation endpoint uses an unknown symbol"));
        }
    }
    if u == v {
        return Ok(DerivationSearch::Derived(vec![u.clone()]));
    }

    // parent maps; the roots map to None.
    let mut fwd: HashMap<SymWord, Option<SymWord>> = HashMap::new();
    let mut bwd: HashMap<SymWord, Option<SymWord>> = HashMap::new();
    fwd.insert(u.clone(), None);
    bwd.insert(v.clone(), None);
    let mut fwd_frontier: VecDeque<SymWord> = VecDeque::from([u.clone()]);
    let mut bwd_frontier: VecDeque<SymWord> = VecDeque::from([v.clone()]);
    let mut steps = 0usize;

    while !fwd_frontier.is_empty() || !bwd_frontier.is_empty() {
        let expand_fwd = !fwd_frontier.is_empty()
            && (bwd_frontier.is_empty() || fwd_frontier.len() <= bwd_frontier.len());
        let (frontier, visited, other) = if expand_fwd {
            (&mut fwd_frontier, &mut fwd, &bwd)
        } else {
            (&mut bwd_frontier, &mut bwd, &fwd)
        };

        let mut next: VecDeque<SymWord> = VecDeque::new();
        let mut meets: Vec<SymWord> = Vec::new();
        for w in frontier.iter() {
            if steps >= max_steps {
                return Ok(DerivationSearch::NotFoundWithinBudget {
                    space_exhausted: false,
                });
            }
            steps += 1;
            for nb in rewrite_neighbors(w, p, max_length) {
                if visited.contains_key(&nb) {
                    continue;
                }
                visited.insert(nb.clone(), Some(w.clone()));
                if other.contains_key(&nb) {
                    meets.push(nb.clone());
                }
                next.push_back(nb);
            }
        }
        if !meets.is_empty() {
            meets.sort();
            let meet = &meets[0];
            let mut head = chain_to_root(&fwd, meet);
            head.reverse();
            let tail = chain_to_root(&bwd, meet);
            head.extend(tail.into_iter().skip(1));
            return Ok(DerivationSearch::Derived(head));
        }
        *frontier = next;
    }
    Ok(DerivationSearch::NotFoundWithinBudget {
        space_exhausted: true,
    })
}

fn chain_to_root(parents: &HashMap<SymWord, Option<SymWord>>, word: &SymWord) -> Vec<SymWord> {
    let mut out = vec![word.clone()];
    let mut current = word;
    while let Some(Some(parent)) = parents.get(current) {
        out.push(parent.clone());
        current = parent;
    }
    out
}

/// Validates an elementary sequence: each consecutive pair must differ by a
/// single relation application. Returns the relation index used at each
/// step (the first matching relation).
pub fn replay_derivation(seq: &[SymWord], p: &Presentation) -> Result<Vec<usize>> {
    if seq.is_empty() {
        return Err(Error::domain("an elementary sequence is nonempty"));
    }
    let mut used = Vec::new();
    for pair in seq.windows(2) {
        let (w, next) = (&pair[0], &pair[1]);
        let found = p.relations.iter().position(|(lhs, rhs)| {
            one_step(w, lhs, rhs, next) || one_step(w, rhs, lhs, next)
        });
        match found {
            Some(idx) => used.push(idx),
            None => {
                return Err(Error::domain(format!(
                    "step {:?} -> {:?} is not a single relation application",
                    w, next
                )))
            }
        }
    }
    Ok(used)
}

fn one_step(w: &[u32], pat: &[u32], rep: &[u32], target: &[u32]) -> bool {
    if pat.len() > w.len() || w.len() - pat.len() + rep.len() != target.len() {
        return false;
    }
    for start in 0..=w.len() - pat.len() {
        if &w[start..start + pat.len()] != pat {
            continue;
        }
        if target[..start] == w[..start]
            && &target[start..start + rep.len()] == rep
            && target[start + rep.len()..] == w[start + pat.len()..]
        {
            return true;
        }
    }
    false
}

/// A synthesized presentation together with the element interpreting each
/// symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuiltPresentation {
    pub presentation: Presentation,
    pub symbol_values: Vec<Element>,
}

/// Builds a finite presentation for a finitely presented subsemigroup.
///
/// Sign-zero generating sets get the multiplication table of their finite
/// semilattice. Otherwise the subsemigroup decomposes into a finite shallow
/// layer (one symbol per element) and per-piece numerical semigroups (one
/// symbol per minimal generator); relations are the numerical relations of
/// each piece plus one rewrite per symbol pair into the chosen normal form.
/// Non-positive sets are handled through the generator-swapping
/// automorphism.
pub fn build_presentation(set: &GeneratorSet) -> Result<BuiltPresentation> {
    let report = classify(set)?;
    if report.verdict != Verdict::FinitelyPresented {
        return Err(Error::domain(
            "cannot build a finite presentation for a mixed-sign generating set",
        ));
    }
    let summary = set.sign_summary();
    let built = if summary.positive == 0 && summary.negative == 0 {
        build_semilattice(set)?
    } else if summary.negative > 0 {
        let mirrored = build_nonnegative(&set.mirror())?;
        BuiltPresentation {
            presentation: mirrored.presentation,
            symbol_values: mirrored.symbol_values.iter().map(Element::mirror).collect(),
        }
    } else {
        build_nonnegative(set)?
    };
    // Relations are emitted only when both sides hold in the semigroup;
    // re-check before handing the result out.
    if satisfies_elements(&built.presentation, &built.symbol_values)?.is_some() {
        return Err(Error::internal("synthesized relation fails in the semigroup"));
    }
    Ok(built)
}

fn build_semilattice(set: &GeneratorSet) -> Result<BuiltPresentation> {
    let elements: Vec<Element> = semilattice_closure(set.gens())?.into_iter().collect();
    let alphabet: Vec<String> = (1..=elements.len()).map(|i| format!("g{i}")).collect();
    let position: BTreeMap<Element, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (*e, i as u32))
        .collect();
    let mut relations = Vec::new();
    for (i, ei) in elements.iter().enumerate() {
        for (j, ej) in elements.iter().enumerate() {
            let product = ei.multiply(ej)?;
            let target = position[&product];
            relations.push((vec![i as u32, j as u32], vec![target]));
        }
    }
    Ok(BuiltPresentation {
        presentation: Presentation::new(alphabet, relations)?,
        symbol_values: elements,
    })
}

struct PieceSymbols {
    /// Minimal generators of the deep part, ascending.
    mingens: Vec<i64>,
    /// Symbol index for each minimal generator.
    symbols: Vec<u32>,
}

fn build_nonnegative(set: &GeneratorSet) -> Result<BuiltPresentation> {
    let (decomposition, idempotents) = if set.gens().iter().any(|g| g.is_idempotent()) {
        decompose_nonnegative(set)?
    } else {
        (decompose_positive(set)?, Vec::new())
    };

    // Shallow layer: the idempotents and every positive element with
    // p <= Q. One symbol each.
    let shallow: Vec<Element> = idempotents
        .iter()
        .chain(&decomposition.complement)
        .copied()
        .collect::<BTreeSet<Element>>()
        .into_iter()
        .collect();

    let mut alphabet = Vec::new();
    let mut values = Vec::new();
    let mut shallow_index: BTreeMap<Element, u32> = BTreeMap::new();
    for (i, e) in shallow.iter().enumerate() {
        alphabet.push(format!("c{}", i + 1));
        values.push(*e);
        shallow_index.insert(*e, i as u32);
    }

    let mut piece_symbols: BTreeMap<(i64, i64), PieceSymbols> = BTreeMap::new();
    let mut next_u = 1usize;
    for piece in &decomposition.pieces {
        let mut symbols = Vec::new();
        for p in &piece.u_min_generators {
            alphabet.push(format!("u{next_u}"));
            next_u += 1;
            symbols.push(values.len() as u32);
            values.push(Element::new(piece.x, *p, p + (piece.y - 1))?);
        }
        piece_symbols.insert(
            (piece.x, piece.y),
            PieceSymbols {
                mingens: piece.u_min_generators.clone(),
                symbols,
            },
        );
    }

    let q_bound = decomposition.q_bound;
    let normal_form = |v: &Element| -> Result<SymWord> {
        if v.is_idempotent() || v.displacement() <= q_bound {
            return shallow_index
                .get(v)
                .map(|idx| vec![*idx])
                .ok_or_else(|| {
                    Error::internal(format!("{v} is missing from the shallow layer"))
                });
        }
        let key = (
            v.left_reach(),
            v.right_reach() - v.displacement() + 1,
        );
        let piece = piece_symbols.get(&key).ok_or_else(|| {
            Error::internal(format!("piece ({}, {}) was not detected", key.0, key.1))
        })?;
        let exponents = factorize_first(v.displacement(), &piece.mingens).ok_or_else(|| {
            Error::internal(format!(
                "{} is not a combination of the detected generators of piece ({}, {})",
                v.displacement(),
                key.0,
                key.1
            ))
        })?;
        let mut word = Vec::new();
        for (count, sym) in exponents.iter().zip(&piece.symbols) {
            word.extend(std::iter::repeat_n(*sym, *count as usize));
        }
        Ok(word)
    };

    let mut seen: BTreeSet<(SymWord, SymWord)> = BTreeSet::new();
    let mut relations: Vec<(SymWord, SymWord)> = Vec::new();
    let mut push = |lhs: SymWord, rhs: SymWord| {
        if lhs != rhs && seen.insert((lhs.clone(), rhs.clone())) {
            relations.push((lhs, rhs));
        }
    };

    // Numerical relations of each piece, written multiplicatively with the
    // piece symbols in ascending generator order.
    for piece in piece_symbols.values() {
        if piece.mingens.len() < 2 {
            continue;
        }
        let numerical = NumericalSgp::new(piece.mingens.iter().map(|p| *p as u64))?;
        for (lhs, rhs) in numerical.minimal_presentation().relations {
            let to_word = |exps: &[u64]| -> SymWord {
                let mut word = Vec::new();
                for (count, sym) in exps.iter().zip(&piece.symbols) {
                    word.extend(std::iter::repeat_n(*sym, *count as usize));
                }
                word
            };
            push(to_word(&lhs), to_word(&rhs));
        }
    }

    // Every product of two symbols rewrites to the normal form of its value.
    for (i, vi) in values.iter().enumerate() {
        for (j, vj) in values.iter().enumerate() {
            let product = vi.multiply(vj)?;
            let rhs = normal_form(&product)?;
            push(vec![i as u32, j as u32], rhs);
        }
    }

    Ok(BuiltPresentation {
        presentation: Presentation::new(alphabet, relations)?,
        symbol_values: values,
    })
}

/// First factorization of `target` over `gens` (ascending), preferring high
/// multiplicity on the largest generator.
fn factorize_first(target: i64, gens: &[i64]) -> Option<Vec<i64>> {
    fn rec(target: i64, gens: &[i64], exps: &mut Vec<i64>) -> bool {
        if gens.is_empty() {
            return target == 0;
        }
        let idx = gens.len() - 1;
        let g = gens[idx];
        for count in (0..=target / g).rev() {
            exps[idx] = count;
            if rec(target - count * g, &gens[..idx], exps) {
                return true;
            }
        }
        exps[idx] = 0;
        false
    }
    let mut exps = vec![0i64; gens.len()];
    if rec(target, gens, &mut exps) {
        Some(exps)
    } else {
        None
    }
}

/// Options for [`verify_presentation`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Check completeness for all words up to this length.
    pub length_bound: usize,
    /// Length cap while searching for derivations.
    pub derive_max_length: usize,
    /// Expansion budget per derivation search.
    pub derive_max_steps: usize,
    /// Refuse universes larger than this many words.
    pub max_words: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            length_bound: 8,
            derive_max_length: 12,
            derive_max_steps: 200_000,
            max_words: 4_000_000,
        }
    }
}

/// Outcome of [`verify_presentation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub sound: bool,
    /// Index of the first relation failing in the semigroup, if any.
    pub first_failing_relation: Option<usize>,
    pub length_bound: usize,
    pub words_checked: u64,
    pub value_classes: u64,
    /// Pairs with equal value for which the search space within the length
    /// cap was exhausted without a derivation.
    pub underivable_count: u64,
    pub underivable_samples: Vec<(String, String)>,
    /// Pairs for which the derivation search ran out of steps.
    pub budget_exhausted_count: u64,
    pub budget_exhausted_samples: Vec<(String, String)>,
    pub complete: bool,
}

/// Checks a synthesized presentation against the subsemigroup generated by
/// `set`: soundness of each relation (exact), and bounded completeness —
/// every pair of symbol words up to the length bound with equal value must
/// be connected by single-relation rewrites. Derivations are first sought
/// inside the enumerated universe and then by a budgeted bidirectional
/// search allowed to pass through longer words.
pub fn verify_presentation(
    set: &GeneratorSet,
    p: &Presentation,
    symbol_values: &[Element],
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if symbol_values.len() != p.alphabet.len() {
        return Err(Error::domain(format!(
            "interpretation covers {} of {} symbols",
            symbol_values.len(),
            p.alphabet.len()
        )));
    }
    let max_index = symbol_values
        .iter()
        .map(Element::dclass_index)
        .max()
        .ok_or_else(|| Error::domain("presentation has no symbols"))?;
    let closure = enumerate_closure(set, max_index)?;
    for v in symbol_values {
        if !closure.contains(v) {
            return Err(Error::domain(format!(
                "symbol value {v} is not in the generated subsemigroup"
            )));
        }
    }

    let first_failing_relation = satisfies_elements(p, symbol_values)?;
    let sound = first_failing_relation.is_none();

    let k = p.alphabet.len() as u64;
    let length_bound = opts.length_bound;
    let mut universe_size = 0u64;
    let mut level_size = 1u64;
    for _ in 1..=length_bound {
        level_size = level_size
            .checked_mul(k)
            .ok_or(Error::Range("word universe overflows"))?;
        universe_size += level_size;
        if universe_size > opts.max_words {
            return Err(Error::domain(format!(
                "word universe of {k}^1..{k}^{length_bound} exceeds the cap of {} words; \
                 lower the length bound",
                opts.max_words
            )));
        }
    }

    let codec = WordCodec::new(p.alphabet.len() as u32, length_bound);
    let total = codec.total() as usize;

    // Value of every word, computed level by level from its parent prefix.
    let mut word_values: Vec<Element> = Vec::with_capacity(total);
    for id in 0..total {
        let word = codec.decode(id as u64);
        let value = if word.len() == 1 {
            symbol_values[word[0] as usize]
        } else {
            let parent = codec.encode(&word[..word.len() - 1]);
            word_values[parent as usize].multiply(&symbol_values[*word.last().unwrap() as usize])?
        };
        word_values.push(value);
    }

    // Union words connected by one relation application inside the universe.
    let mut dsu: Vec<u32> = (0..total as u32).collect();
    fn find(dsu: &mut [u32], mut x: u32) -> u32 {
        while dsu[x as usize] != x {
            dsu[x as usize] = dsu[dsu[x as usize] as usize];
            x = dsu[x as usize];
        }
        x
    }
    for id in 0..total {
        let word = codec.decode(id as u64);
        for nb in rewrite_neighbors(&word, p, length_bound) {
            let nb_id = codec.encode(&nb);
            let (ra, rb) = (find(&mut dsu, id as u32), find(&mut dsu, nb_id as u32));
            if ra != rb {
                dsu[ra.max(rb) as usize] = ra.min(rb);
            }
        }
    }

    // Group by value (sort instead of hashing so class order is stable).
    let mut by_value: Vec<(Element, u32)> = word_values
        .iter()
        .enumerate()
        .map(|(id, v)| (*v, id as u32))
        .collect();
    by_value.sort_unstable();

    let mut value_classes = 0u64;
    let mut underivable_count = 0u64;
    let mut underivable_samples = Vec::new();
    let mut budget_exhausted_count = 0u64;
    let mut budget_exhausted_samples = Vec::new();
    const MAX_SAMPLES: usize = 20;

    let mut start = 0usize;
    while start < by_value.len() {
        let mut end = start + 1;
        while end < by_value.len() && by_value[end].0 == by_value[start].0 {
            end += 1;
        }
        value_classes += 1;
        let rep_id = by_value[start].1;
        let rep_root = find(&mut dsu, rep_id);
        for &(_, id) in &by_value[start + 1..end] {
            if find(&mut dsu, id) == rep_root {
                continue;
            }
            // Not connected within the universe; allow longer intermediates.
            let rep_word = codec.decode(rep_id as u64);
            let word = codec.decode(id as u64);
            match derivable(&word, &rep_word, p, opts.derive_max_length, opts.derive_max_steps)? {
                DerivationSearch::Derived(_) => {}
                DerivationSearch::NotFoundWithinBudget { space_exhausted: true } => {
                    underivable_count += 1;
                    if underivable_samples.len() < MAX_SAMPLES {
                        underivable_samples.push((p.render_word(&word), p.render_word(&rep_word)));
                    }
                }
                DerivationSearch::NotFoundWithinBudget { space_exhausted: false } => {
                    budget_exhausted_count += 1;
                    if budget_exhausted_samples.len() < MAX_SAMPLES {
                        budget_exhausted_samples
                            .push((p.render_word(&word), p.render_word(&rep_word)));
                    }
                }
            }
        }
        start = end;
    }

    let complete = sound && underivable_count == 0 && budget_exhausted_count == 0;
    Ok(VerificationReport {
        sound,
        first_failing_relation,
        length_bound,
        words_checked: total as u64,
        value_classes,
        underivable_count,
        underivable_samples,
        budget_exhausted_count,
        budget_exhausted_samples,
        complete,
    })
}

/// Fixed-radix codec between words of length `1..=max_len` over `k` symbols
/// and dense ids, ordered by length then lexicographically.
struct WordCodec {
    k: u64,
    offsets: Vec<u64>,
}

impl WordCodec {
    fn new(k: u32, max_len: usize) -> WordCodec {
        let k = k as u64;
        let mut offsets = vec![0u64];
        let mut level = 1u64;
        let mut total = 0u64;
        for _ in 1..=max_len {
            level *= k;
            total += level;
            offsets.push(total);
        }
        WordCodec { k, offsets }
    }

    fn total(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    fn encode(&self, word: &[u32]) -> u64 {
        let mut value = 0u64;
        for sym in word {
            value = value * self.k + *sym as u64;
        }
        self.offsets[word.len() - 1] + value
    }

    fn decode(&self, id: u64) -> SymWord {
        let len = self.offsets.partition_point(|off| *off <= id);
        let mut value = id - self.offsets[len - 1];
        let mut word = vec![0u32; len];
        for slot in word.iter_mut().rev() {
            *slot = (value % self.k) as u32;
            value /= self.k;
        }
        word
    }
}
