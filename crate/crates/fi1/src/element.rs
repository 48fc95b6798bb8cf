//! The triple model of the monogenic free inverse semigroup.
//!
//! An element is a triple `(-a, p, b)` with `a, b >= 0`, `a + b > 0` and
//! `-a <= p <= b`: the walk of the generator on the integer line reaches `a`
//! steps to the left, `b` steps to the right, and ends at displacement `p`.
//! Multiplication is
//! `(-a1, p1, b1)(-a2, p2, b2) = (-max(a1, a2-p1), p1+p2, max(b1, b2+p1))`
//! and inversion is `(-a, p, b)^-1 = (-(a+p), -p, b-p)`.
//!
//! All arithmetic is over checked 64-bit integers; operations whose result
//! would overflow return [`Error::Range`].

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Sign classification of an element by its displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    /// The conventional value -1, 0 or +1.
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// An element `(-a, p, b)` of the monogenic free inverse semigroup.
///
/// `a` is stored as the non-negative left reach; the first component of the
/// written triple is `-a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    a: i64,
    p: i64,
    b: i64,
}

impl Element {
    /// Builds an element from its left reach `a >= 0`, displacement `p` and
    /// right reach `b >= 0`. Requires `a + b > 0` and `-a <= p <= b`.
    pub fn new(a: i64, p: i64, b: i64) -> Result<Element> {
        if a < 0 || b < 0 {
            return Err(Error::domain(format!(
                "reaches must be non-negative, got a={a}, b={b}"
            )));
        }
        let index = a.checked_add(b).ok_or(Error::Range("a + b overflows"))?;
        if index == 0 {
            return Err(Error::domain("(0, 0, 0) is not an element; a + b must be positive"));
        }
        if p < -a || p > b {
            return Err(Error::domain(format!(
                "displacement must satisfy -a <= p <= b, got ({}, {p}, {b})",
                -a
            )));
        }
        Ok(Element { a, p, b })
    }

    /// Builds an element from the written triple `(-a, p, b)`; the first
    /// component must be non-positive.
    pub fn from_triple(neg_a: i64, p: i64, b: i64) -> Result<Element> {
        if neg_a > 0 {
            return Err(Error::domain(format!(
                "first triple component must be non-positive, got {neg_a}"
            )));
        }
        let a = neg_a.checked_neg().ok_or(Error::Range("-a overflows"))?;
        Element::new(a, p, b)
    }

    /// Left reach `a` (non-negative).
    pub fn left_reach(&self) -> i64 {
        self.a
    }

    /// Final displacement `p`.
    pub fn displacement(&self) -> i64 {
        self.p
    }

    /// Right reach `b` (non-negative).
    pub fn right_reach(&self) -> i64 {
        self.b
    }

    /// Product of two elements.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        let a = self
            .a
            .max(other.a.checked_sub(self.p).ok_or(Error::Range("a2 - p1 overflows"))?);
        let p = self
            .p
            .checked_add(other.p)
            .ok_or(Error::Range("p1 + p2 overflows"))?;
        let b = self
            .b
            .max(other.b.checked_add(self.p).ok_or(Error::Range("b2 + p1 overflows"))?);
        Element::new(a, p, b)
    }

    /// Inverse `(-(a+p), -p, b-p)`. Total: the invariants bound every
    /// intermediate by `a + b`.
    pub fn invert(&self) -> Element {
        Element {
            a: self.a + self.p,
            p: -self.p,
            b: self.b - self.p,
        }
    }

    /// `n`-th power for `n >= 1`, via the closed form for repeated
    /// multiplication: the walk repeats its displacement.
    pub fn power(&self, n: i64) -> Result<Element> {
        if n < 1 {
            return Err(Error::domain(format!("power requires n >= 1, got {n}")));
        }
        let stretch = |k: i64| -> Result<i64> {
            self.p.checked_mul(k).ok_or(Error::Range("n * p overflows"))
        };
        match self.p.signum() {
            0 => Ok(*self),
            1 => {
                let p = stretch(n)?;
                let b = self
                    .b
                    .checked_add(stretch(n - 1)?)
                    .ok_or(Error::Range("b + (n-1)p overflows"))?;
                Element::new(self.a, p, b)
            }
            _ => {
                let p = stretch(n)?;
                let a = self
                    .a
                    .checked_sub(stretch(n - 1)?)
                    .ok_or(Error::Range("a - (n-1)p overflows"))?;
                Element::new(a, p, self.b)
            }
        }
    }

    /// An element is idempotent exactly when its displacement is zero.
    pub fn is_idempotent(&self) -> bool {
        self.p == 0
    }

    pub fn sign(&self) -> Sign {
        match self.p.signum() {
            0 => Sign::Zero,
            1 => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    /// Index `a + b` of the D-class containing this element.
    pub fn dclass_index(&self) -> i64 {
        self.a + self.b
    }

    /// The automorphism induced by swapping the generator with its inverse:
    /// `(-a, p, b) |-> (-b, -p, a)`. Exchanges positive and negative
    /// elements and fixes the idempotent semilattice setwise.
    pub fn mirror(&self) -> Element {
        Element {
            a: self.b,
            p: -self.p,
            b: self.a,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", -self.a, self.p, self.b)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (-self.a, self.p, self.b).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (neg_a, p, b) = <(i64, i64, i64)>::deserialize(deserializer)?;
        Element::from_triple(neg_a, p, b).map_err(D::Error::custom)
    }
}

/// Parses the text form `[-a, p, b]`.
impl std::str::FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Element> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse(format!("expected [-a, p, b], got {s:?}")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::parse(format!("expected three components, got {s:?}")));
        }
        let mut nums = [0i64; 3];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::parse(format!("bad integer {:?}: {e}", part.trim())))?;
        }
        Element::from_triple(nums[0], nums[1], nums[2])
    }
}

/// Natural partial order on idempotents:
/// `(-a, 0, b) <= (-c, 0, d)` iff `a >= c` and `b >= d`.
pub fn idempotent_leq(e: &Element, f: &Element) -> Result<bool> {
    require_idempotents(e, f)?;
    Ok(e.a >= f.a && e.b >= f.b)
}

/// Two idempotents are incomparable iff `(a-c)(b-d) < 0`.
pub fn incomparable(e: &Element, f: &Element) -> Result<bool> {
    require_idempotents(e, f)?;
    Ok((e.a - f.a).signum() * (e.b - f.b).signum() < 0)
}

fn require_idempotents(e: &Element, f: &Element) -> Result<()> {
    if !e.is_idempotent() || !f.is_idempotent() {
        return Err(Error::domain(
            "the natural partial order is defined on idempotents only",
        ));
    }
    Ok(())
}

/// Evaluates a word under `x |-> (0, 1, 1)`, `x^-1 |-> (-1, -1, 0)`.
///
/// With prefix sums `s_0 = 0, s_1, ..., s_L` of the letter steps, the value
/// is `(min_i s_i, s_L, max_i s_i)` read as `(-a, p, b)`.
pub fn eval_word(w: &Word) -> Element {
    let mut sum = 0i64;
    let mut min = 0i64;
    let mut max = 0i64;
    for letter in w.letters() {
        sum += letter.step();
        min = min.min(sum);
        max = max.max(sum);
    }
    // Nonempty words move off the origin, so max - min >= 1.
    Element {
        a: -min,
        p: sum,
        b: max,
    }
}

/// The representative word `x^-a x^a x^b x^-b x^p` (empty blocks omitted),
/// which evaluates back to the element.
pub fn canonical_word(e: &Element) -> Word {
    let mut letters = Vec::new();
    push_block(&mut letters, Letter::XInv, e.a);
    push_block(&mut letters, Letter::X, e.a);
    push_block(&mut letters, Letter::X, e.b);
    push_block(&mut letters, Letter::XInv, e.b);
    if e.p >= 0 {
        push_block(&mut letters, Letter::X, e.p);
    } else {
        push_block(&mut letters, Letter::XInv, -e.p);
    }
    Word::new(letters).expect("a + b > 0 so the canonical word is nonempty")
}

fn push_block(letters: &mut Vec<Letter>, letter: Letter, count: i64) {
    for _ in 0..count {
        letters.push(letter);
    }
}

/// All elements of the D-class with index `n` (those with `a + b = n`).
pub fn dclass_elements(n: i64) -> Vec<Element> {
    let mut out = Vec::new();
    if n < 1 {
        return out;
    }
    for a in 0..=n {
        let b = n - a;
        for p in -a..=b {
            out.push(Element { a, p, b });
        }
    }
    out
}

/// All elements with D-class index at most `n`, in (index, a, p) order.
pub fn elements_up_to(n: i64) -> Vec<Element> {
    let mut out = Vec::new();
    for i in 1..=n {
        out.extend(dclass_elements(i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, p: i64, b: i64) -> Element {
        Element::new(a, p, b).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn invariants_enforced() {
        assert!(Element::new(0, 0, 0).is_err());
        assert!(Element::new(-1, 0, 1).is_err());
        assert!(Element::new(1, 2, 1).is_err());
        assert!(Element::new(1, -2, 1).is_err());
        assert!(Element::from_triple(1, 0, 1).is_err());
        assert_eq!(Element::from_triple(-1, -1, 0).unwrap(), e(1, -1, 0));
    }

    #[test]
    fn multiply_matches_word_evaluation() {
        // (0,1,1)(0,1,1) = (0,2,2), independently from the prefix sums of "xx".
        let x = e(0, 1, 1);
        assert_eq!(x.multiply(&x).unwrap(), eval_word(&w("x x")));
        assert_eq!(x.multiply(&x).unwrap(), e(0, 2, 2));
        // (0,1,1)(-1,-1,0) = (0,0,1), the prefix sums of "x x^-1".
        let xinv = e(1, -1, 0);
        assert_eq!(x.multiply(&xinv).unwrap(), eval_word(&w("x x^-1")));
        assert_eq!(x.multiply(&xinv).unwrap(), e(0, 0, 1));
    }

    #[test]
    fn idempotents_square_to_themselves() {
        let f = e(1, 0, 2);
        assert_eq!(f.multiply(&f).unwrap(), f);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(e(0, 1, 1).invert(), e(1, -1, 0));
        assert_eq!(e(2, 0, 3).invert(), e(2, 0, 3));
        for el in elements_up_to(4) {
            assert_eq!(el.invert().invert(), el);
        }
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        for el in elements_up_to(3) {
            let mut acc = el;
            for n in 1..=20 {
                assert_eq!(el.power(n).unwrap(), acc, "power({el}, {n})");
                acc = acc.multiply(&el).unwrap();
            }
        }
        assert_eq!(e(0, 1, 1).power(3).unwrap(), e(0, 3, 3));
        assert_eq!(e(1, -1, 0).power(2).unwrap(), e(2, -2, 0));
        assert_eq!(e(1, 0, 2).power(5).unwrap(), e(1, 0, 2));
        assert!(e(0, 1, 1).power(0).is_err());
    }

    #[test]
    fn idempotent_iff_displacement_zero() {
        assert!(e(2, 0, 1).is_idempotent());
        assert!(!e(0, 1, 1).is_idempotent());
        for el in elements_up_to(3) {
            let squared = el.multiply(&el).unwrap();
            assert_eq!(squared == el, el.is_idempotent(), "{el}");
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(e(0, 2, 2).sign(), Sign::Positive);
        assert_eq!(e(3, 0, 1).sign(), Sign::Zero);
        assert_eq!(e(1, -1, 0).sign(), Sign::Negative);
    }

    #[test]
    fn dclass_index_and_sizes() {
        assert_eq!(e(0, 1, 1).dclass_index(), 1);
        assert_eq!(e(2, 1, 3).dclass_index(), 5);
        for i in 1..=6 {
            let count = dclass_elements(i).len() as i64;
            assert_eq!(count, (i + 1) * (i + 1), "|D_{i}|");
        }
    }

    #[test]
    fn idempotent_order_examples() {
        assert!(idempotent_leq(&e(2, 0, 3), &e(1, 0, 1)).unwrap());
        let f = e(1, 0, 2);
        assert!(idempotent_leq(&f, &f).unwrap());
        assert!(idempotent_leq(&e(0, 1, 1), &f).is_err());
    }

    #[test]
    fn idempotent_order_is_antisymmetric_on_c4() {
        let idems: Vec<Element> = elements_up_to(4)
            .into_iter()
            .filter(Element::is_idempotent)
            .collect();
        for x in &idems {
            for y in &idems {
                if idempotent_leq(x, y).unwrap() && idempotent_leq(y, x).unwrap() {
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn incomparable_agrees_with_order_on_c5() {
        assert!(incomparable(&e(2, 0, 1), &e(1, 0, 3)).unwrap());
        let f = e(1, 0, 2);
        assert!(!incomparable(&f, &f).unwrap());
        let idems: Vec<Element> = elements_up_to(5)
            .into_iter()
            .filter(Element::is_idempotent)
            .collect();
        for x in &idems {
            for y in &idems {
                let neither =
                    !idempotent_leq(x, y).unwrap() && !idempotent_leq(y, x).unwrap();
                assert_eq!(incomparable(x, y).unwrap(), neither, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn eval_word_examples() {
        assert_eq!(eval_word(&w("x")), e(0, 1, 1));
        let expected = e(0, 1, 1)
            .multiply(&e(0, 1, 1))
            .unwrap()
            .multiply(&e(1, -1, 0))
            .unwrap();
        assert_eq!(eval_word(&w("x x x^-1")), expected);
        assert_eq!(eval_word(&w("x x x^-1")), e(0, 1, 2));
        assert_eq!(eval_word(&w("x^-1 x")), e(1, 0, 0));
    }

    #[test]
    fn canonical_word_letters() {
        use Letter::{X, XInv};
        assert_eq!(canonical_word(&e(0, 1, 1)).letters(), &[X, XInv, X]);
        assert_eq!(
            canonical_word(&e(1, 0, 2)).letters(),
            &[XInv, X, X, X, XInv, XInv]
        );
        assert_eq!(
            canonical_word(&e(3, 0, 0)).letters(),
            &[XInv, XInv, XInv, X, X, X]
        );
    }

    #[test]
    fn canonical_word_round_trips_on_c6() {
        for el in elements_up_to(6) {
            assert_eq!(eval_word(&canonical_word(&el)), el, "{el}");
        }
    }

    #[test]
    fn mirror_is_an_involutive_homomorphism() {
        for x in elements_up_to(3) {
            assert_eq!(x.mirror().mirror(), x);
            for y in elements_up_to(3) {
                assert_eq!(
                    x.multiply(&y).unwrap().mirror(),
                    x.mirror().multiply(&y.mirror()).unwrap()
                );
            }
        }
    }

    #[test]
    fn idempotent_poset_is_the_reversed_componentwise_order() {
        // (a, b) -> (-a, 0, b) is an order isomorphism between the grid
        // minus the origin (componentwise, reversed) and the idempotents.
        for a1 in 0..=4i64 {
            for b1 in 0..=4i64 {
                if a1 + b1 == 0 {
                    continue;
                }
                for a2 in 0..=4i64 {
                    for b2 in 0..=4i64 {
                        if a2 + b2 == 0 {
                            continue;
                        }
                        let lhs = idempotent_leq(&e(a1, 0, b1), &e(a2, 0, b2)).unwrap();
                        assert_eq!(lhs, a1 >= a2 && b1 >= b2);
                    }
                }
            }
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        for el in elements_up_to(4) {
            let parsed: Element = el.to_string().parse().unwrap();
            assert_eq!(parsed, el);
        }
        assert_eq!("[-1, -1, 0]".parse::<Element>().unwrap(), e(1, -1, 0));
        assert!("[1, 0, 1]".parse::<Element>().is_err());
        assert!("[0, 0]".parse::<Element>().is_err());
    }

    #[test]
    fn multiplication_overflow_is_a_range_error() {
        let back = Element::new(i64::MAX - 1, -(i64::MAX - 1), 0).unwrap();
        let wide = Element::new(i64::MAX - 1, 0, 1).unwrap();
        assert!(matches!(back.multiply(&wide), Err(Error::Range(_))));
    }
}
