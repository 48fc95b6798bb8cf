//! Partial transformations of `{0, ..., n}` and the two distinguished maps
//! that satisfy the defining relations of the free inverse semigroup only up
//! to a bounded D-class index.
//!
//! Maps are written on the right: `(t)(fg) = ((t)f)g`, i.e. [`PartialMap::compose`]
//! applies its receiver first. This convention is pinned by the relation
//! tables in [`schein_check`]: at `n = 1` the products `b a a b` and
//! `a b b a` distinguish the two possible reading orders.

use std::fmt;

use serde::ser::Serializer;
use serde::Serialize;

use crate::element::{canonical_word, Element};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A partial transformation of `{0, ..., n}`, stored as a dense image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialMap {
    images: Vec<Option<usize>>,
}

impl PartialMap {
    /// Builds a map from its image table; entry `t` is the image of `t`,
    /// `None` for undefined. The table length is `n + 1`.
    pub fn new(images: Vec<Option<usize>>) -> Result<PartialMap> {
        if images.is_empty() {
            return Err(Error::domain("a partial map needs at least the point 0"));
        }
        let n = images.len() - 1;
        for (t, img) in images.iter().enumerate() {
            if let Some(v) = img {
                if *v > n {
                    return Err(Error::domain(format!(
                        "image ({t}) = {v} lies outside [0, {n}]"
                    )));
                }
            }
        }
        Ok(PartialMap { images })
    }

    /// The identity map on `{0, ..., n}`.
    pub fn identity(n: usize) -> PartialMap {
        PartialMap {
            images: (0..=n).map(Some).collect(),
        }
    }

    /// The empty (nowhere-defined) map on `{0, ..., n}`.
    pub fn empty(n: usize) -> PartialMap {
        PartialMap {
            images: vec![None; n + 1],
        }
    }

    /// Largest point of the carrier `{0, ..., n}`.
    pub fn degree(&self) -> usize {
        self.images.len() - 1
    }

    pub fn apply(&self, t: usize) -> Option<usize> {
        self.images.get(t).copied().flatten()
    }

    pub fn images(&self) -> &[Option<usize>] {
        &self.images
    }

    pub fn is_empty_map(&self) -> bool {
        self.images.iter().all(Option::is_none)
    }

    /// Left-to-right composition: `self` first, then `g`.
    pub fn compose(&self, g: &PartialMap) -> Result<PartialMap> {
        if self.degree() != g.degree() {
            return Err(Error::domain(format!(
                "cannot compose maps on {{0..{}}} and {{0..{}}}",
                self.degree(),
                g.degree()
            )));
        }
        Ok(self.then(g))
    }

    fn then(&self, g: &PartialMap) -> PartialMap {
        PartialMap {
            images: self
                .images
                .iter()
                .map(|img| img.and_then(|v| g.images[v]))
                .collect(),
        }
    }

    /// `k`-th compositional power by repeated squaring; `power(0)` is the
    /// identity.
    pub fn power(&self, k: u64) -> PartialMap {
        let mut result = PartialMap::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        result
    }
}

impl fmt::Display for PartialMap {
    /// Text form `[img0, img1, ..., imgn]` with `-` for undefined.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (t, img) in self.images.iter().enumerate() {
            if t > 0 {
                f.write_str(", ")?;
            }
            match img {
                Some(v) => write!(f, "{v}")?,
                None => f.write_str("-")?,
            }
        }
        f.write_str("]")
    }
}

impl Serialize for PartialMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The shift `i -> i + 1` on `{0, ..., n}`, undefined at `n`.
pub fn alpha(n: usize) -> PartialMap {
    PartialMap {
        images: (0..=n).map(|i| if i < n { Some(i + 1) } else { None }).collect(),
    }
}

/// The capped predecessor `0 -> 0`, `i -> i - 1`; total on `{0, ..., n}`.
pub fn beta(n: usize) -> PartialMap {
    PartialMap {
        images: (0..=n).map(|i| Some(i.saturating_sub(1))).collect(),
    }
}

/// Evaluates a word under `x -> alpha(n)`, `x^-1 -> beta(n)` with
/// left-to-right composition.
pub fn eval_word(w: &Word, n: usize) -> PartialMap {
    let mut letters = w.letters().iter();
    let first = letters.next().expect("words are nonempty");
    let mut acc = letter_map(*first, n);
    for letter in letters {
        acc = acc.then(&letter_map(*letter, n));
    }
    acc
}

fn letter_map(letter: Letter, n: usize) -> PartialMap {
    match letter {
        Letter::X => alpha(n),
        Letter::XInv => beta(n),
    }
}

/// Image of an element of D-class index at most `m` under the word map at
/// level `m`, using the canonical representative word. Well defined on that
/// range because equal words there have equal images.
pub fn sigma(e: &Element, m: usize) -> Result<PartialMap> {
    let index = e.dclass_index();
    if index < 0 || index as u64 > m as u64 {
        return Err(Error::domain(format!(
            "element of D-class index {index} is outside the domain bound {m}"
        )));
    }
    Ok(eval_word(&canonical_word(e), m))
}

/// One verified inequality `b^i a^i a^j b^j != a^j b^j b^i a^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityWitness {
    pub i: u64,
    pub j: u64,
    pub lhs: PartialMap,
    pub rhs: PartialMap,
}

/// Outcome of [`schein_check`]. The four relation families, each with the
/// lexicographically first counterexample when one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheinReport {
    pub n: usize,
    pub max_ij: u64,
    /// `a b a = a`
    pub absorption_alpha: bool,
    /// `b a b = b`
    pub absorption_beta: bool,
    /// Equality of `b^i a^i a^j b^j` and `a^j b^j b^i a^i` whenever
    /// `i > n`, `j > n` or `i + j <= n`.
    pub first_equality_failure: Option<(u64, u64)>,
    /// Inequality of the same pair whenever `i + j > n` and `i, j <= n`.
    pub first_inequality_failure: Option<(u64, u64)>,
    /// The first pair in the inequality regime, with both product tables.
    pub inequality_witness: Option<InequalityWitness>,
}

impl ScheinReport {
    pub fn passed(&self) -> bool {
        self.absorption_alpha
            && self.absorption_beta
            && self.first_equality_failure.is_none()
            && self.first_inequality_failure.is_none()
    }
}

/// Verifies the four relation families of the two distinguished maps on
/// `{0, ..., n}` by direct table composition, over all `0 < i, j <= max_ij`.
pub fn schein_check(n: usize, max_ij: u64) -> ScheinReport {
    schein_check_impl(n, max_ij, true)
}

/// Sequential variant of [`schein_check`]; the fallback when the `parallel`
/// feature is disabled, kept callable for comparison benchmarks.
pub fn schein_check_sequential(n: usize, max_ij: u64) -> ScheinReport {
    schein_check_impl(n, max_ij, false)
}

struct PairOutcome {
    i: u64,
    j: u64,
    expected_equal: bool,
    equal: bool,
    lhs: PartialMap,
    rhs: PartialMap,
}

fn schein_check_impl(n: usize, max_ij: u64, parallel: bool) -> ScheinReport {
    let a = alpha(n);
    let b = beta(n);

    let absorption_alpha = a.then(&b).then(&a) == a;
    let absorption_beta = b.then(&a).then(&b) == b;

    let n_u = n as u64;
    // Powers up to max_ij, indexed by exponent.
    let a_pows: Vec<PartialMap> = (0..=max_ij).map(|k| a.power(k)).collect();
    let b_pows: Vec<PartialMap> = (0..=max_ij).map(|k| b.power(k)).collect();

    let eval_pair = |i: u64, j: u64| -> PairOutcome {
        let (ai, bi) = (&a_pows[i as usize], &b_pows[i as usize]);
        let (aj, bj) = (&a_pows[j as usize], &b_pows[j as usize]);
        let lhs = bi.then(ai).then(aj).then(bj);
        let rhs = aj.then(bj).then(bi).then(ai);
        let expected_equal = i > n_u || j > n_u || i + j <= n_u;
        let equal = lhs == rhs;
        PairOutcome { i, j, expected_equal, equal, lhs, rhs }
    };

    let pairs: Vec<(u64, u64)> = (1..=max_ij)
        .flat_map(|i| (1..=max_ij).map(move |j| (i, j)))
        .collect();

    let outcomes: Vec<PairOutcome> = if parallel {
        run_pairs(&pairs, eval_pair)
    } else {
        pairs.iter().map(|&(i, j)| eval_pair(i, j)).collect()
    };

    let mut first_equality_failure = None;
    let mut first_inequality_failure = None;
    let mut inequality_witness: Option<InequalityWitness> = None;
    for out in outcomes {
        if out.expected_equal {
            if !out.equal && first_equality_failure.is_none() {
                first_equality_failure = Some((out.i, out.j));
            }
        } else {
            if out.equal && first_inequality_failure.is_none() {
                first_inequality_failure = Some((out.i, out.j));
            }
            if !out.equal && inequality_witness.is_none() {
                inequality_witness = Some(InequalityWitness {
                    i: out.i,
                    j: out.j,
                    lhs: out.lhs,
                    rhs: out.rhs,
                });
            }
        }
    }

    ScheinReport {
        n,
        max_ij,
        absorption_alpha,
        absorption_beta,
        first_equality_failure,
        first_inequality_failure,
        inequality_witness,
    }
}

#[cfg(feature = "parallel")]
fn run_pairs<F>(pairs: &[(u64, u64)], eval_pair: F) -> Vec<PairOutcome>
where
    F: Fn(u64, u64) -> PairOutcome + Sync,
{
    // Pair order is preserved, so the first-failure scan stays deterministic.
    pairs.par_iter().map(|&(i, j)| eval_pair(i, j)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_pairs<F>(pairs: &[(u64, u64)], eval_pair: F) -> Vec<PairOutcome>
where
    F: Fn(u64, u64) -> PairOutcome + Sync,
{
    pairs.iter().map(|&(i, j)| eval_pair(i, j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{elements_up_to, eval_word as eval_element};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn alpha_beta_tables() {
        assert_eq!(alpha(2).images(), &[Some(1), Some(2), None]);
        assert_eq!(beta(2).images(), &[Some(0), Some(0), Some(1)]);
        assert_eq!(alpha(1).images(), &[Some(1), None]);
        assert_eq!(beta(1).images(), &[Some(0), Some(0)]);
        for n in 1..=10 {
            assert_eq!(alpha(n).apply(n), None);
            assert!(beta(n).images().iter().all(Option::is_some));
        }
    }

    #[test]
    fn composition_convention() {
        // alpha then beta fixes 0 and is undefined at 1; beta then alpha
        // sends everything to 1. This pins the reading order.
        let id_partial = alpha(1).compose(&beta(1)).unwrap();
        assert_eq!(id_partial.images(), &[Some(0), None]);
        let other = beta(1).compose(&alpha(1)).unwrap();
        assert_eq!(other.images(), &[Some(1), Some(1)]);
    }

    #[test]
    fn empty_map_absorbs() {
        let f = beta(3);
        let z = PartialMap::empty(3);
        assert_eq!(f.compose(&z).unwrap(), z);
        assert_eq!(z.compose(&f).unwrap(), z);
    }

    #[test]
    fn mismatched_degrees_rejected() {
        assert!(alpha(2).compose(&beta(3)).is_err());
    }

    #[test]
    fn image_bounds_checked() {
        assert!(PartialMap::new(vec![Some(2), None]).is_err());
        assert!(PartialMap::new(vec![]).is_err());
    }

    #[test]
    fn power_matches_iterated_composition() {
        for n in [1usize, 3, 7] {
            for map in [alpha(n), beta(n)] {
                let mut acc = PartialMap::identity(n);
                for k in 0..=(2 * n as u64 + 2) {
                    assert_eq!(map.power(k), acc);
                    acc = acc.then(&map);
                }
            }
        }
    }

    #[test]
    fn eval_word_examples() {
        let m = eval_word(&w("x x^-1"), 3);
        assert_eq!(m.images(), &[Some(0), Some(1), Some(2), None]);
        let c = eval_word(&w("x^-1 x^-1 x^-1 x x x"), 3);
        assert_eq!(c.images(), &[Some(3), Some(3), Some(3), Some(3)]);
    }

    #[test]
    fn eval_word_is_a_homomorphism() {
        let u = w("x x x^-1 x^-1 x");
        let v = w("x^-1 x x x");
        for n in 1..=6 {
            let joined = eval_word(&u.concat(&v), n);
            let split = eval_word(&u, n).compose(&eval_word(&v, n)).unwrap();
            assert_eq!(joined, split);
        }
    }

    #[test]
    fn sigma_examples() {
        let e = Element::new(0, 0, 1).unwrap();
        assert_eq!(sigma(&e, 3).unwrap().images(), &[Some(0), Some(1), Some(2), None]);
        let f = Element::new(3, 0, 0).unwrap();
        assert_eq!(sigma(&f, 3).unwrap().images(), &[Some(3), Some(3), Some(3), Some(3)]);
        assert!(sigma(&f, 2).is_err());
    }

    #[test]
    fn sigma_of_idempotent_is_the_four_block_product() {
        for m in [3usize, 5, 8] {
            for e in elements_up_to(m as i64).into_iter().filter(Element::is_idempotent) {
                let a = e.left_reach() as u64;
                let b = e.right_reach() as u64;
                let blocks = beta(m)
                    .power(a)
                    .then(&alpha(m).power(a))
                    .then(&alpha(m).power(b))
                    .then(&beta(m).power(b));
                assert_eq!(sigma(&e, m).unwrap(), blocks, "{e} at level {m}");
            }
        }
    }

    #[test]
    fn word_evaluations_are_consistent() {
        // The element value of a word determines its map image once the
        // index fits under the level.
        let u = w("x x x^-1");
        let e = eval_element(&u);
        for n in 2..=5 {
            assert_eq!(eval_word(&u, n), sigma(&e, n).unwrap());
        }
    }

    #[test]
    fn schein_check_small_cases() {
        let report = schein_check(1, 2);
        assert!(report.passed(), "{report:?}");
        let witness = report.inequality_witness.unwrap();
        assert_eq!((witness.i, witness.j), (1, 1));
        // b a a b is empty; a b b a maps 0 to 1.
        assert!(witness.lhs.is_empty_map());
        assert_eq!(witness.rhs.images(), &[Some(1), None]);

        // i + j <= n regime: equality at n = 2, i = j = 1.
        let report = schein_check(2, 1);
        assert!(report.passed());
        assert!(report.inequality_witness.is_none());
    }

    #[test]
    fn schein_check_regimes_agree_with_tables() {
        for n in 1..=6 {
            let report = schein_check(n, 2 * n as u64);
            assert!(report.passed(), "n={n}: {report:?}");
            assert!(report.inequality_witness.is_some(), "n={n}");
        }
    }

    #[test]
    fn sequential_and_dispatched_reports_agree() {
        for n in [1usize, 4, 9] {
            assert_eq!(schein_check(n, 2 * n as u64), schein_check_sequential(n, 2 * n as u64));
        }
    }

    #[test]
    fn display_text_form() {
        let m = PartialMap::new(vec![Some(3), Some(3), Some(3), None]).unwrap();
        assert_eq!(m.to_string(), "[3, 3, 3, -]");
    }
}
