//! Noncommutative polynomials in two letters, with the cyclic calculus.
//!
//! A [`Word`] is a finite string over the alphabet `{x, y}`; a [`FreePoly`]
//! is a finite `Q`-linear combination of words stored sparsely under the
//! canonical term order (degree first, then lexicographic with `x < y`).
//! The module provides the left strike, the cyclic derivative, the cyclic
//! normal form (lexicographically minimal rotation of every word) and
//! abelianisation into the commutative polynomial ring [`CommPoly`].

use crate::rational::{format_coeff_prefix, format_q, Q};
use num::traits::Zero;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// One letter of the two-letter alphabet, ordered `X < Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'x' => Some(Letter::X),
            'y' => Some(Letter::Y),
            _ => None,
        }
    }
}

/// A word over `{x, y}`; the empty word is the monomial `1`.
///
/// Words are ordered by degree first, then lexicographically with `x < y`,
/// which is the canonical term order used everywhere in this crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Parse from a string of `x`/`y` characters, e.g. `"xxyy"`.
    pub fn parse(s: &str) -> Option<Word> {
        s.chars()
            .map(Letter::from_char)
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// Concatenation `self * other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The rotation starting at position `i` (0-based): `w[i..] w[..i]`.
    pub fn rotation(&self, i: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return Word::empty();
        }
        let i = i % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&self.0[..i]);
        Word(v)
    }

    /// The lexicographically minimal rotation (all rotations share a degree,
    /// so this is also minimal in the canonical term order).
    pub fn min_rotation(&self) -> Word {
        (0..self.0.len().max(1))
            .map(|i| self.rotation(i))
            .min()
            .unwrap_or_else(Word::empty)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Render a word with exponents on maximal runs: `xxyxxy` -> `x^2*y*x^2*y`.
fn word_powers(w: &Word) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut run_letter = w.0[0];
    let mut run_len = 1usize;
    for &l in &w.0[1..] {
        if l == run_letter {
            run_len += 1;
        } else {
            parts.push(render_run(run_letter, run_len));
            run_letter = l;
            run_len = 1;
        }
    }
    parts.push(render_run(run_letter, run_len));
    parts.join("*")
}

fn render_run(l: Letter, n: usize) -> String {
    if n == 1 {
        l.as_char().to_string()
    } else {
        format!("{}^{}", l.as_char(), n)
    }
}

/// A sparse noncommutative polynomial: finitely many words with nonzero
/// rational coefficients, kept in canonical term order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreePoly {
    terms: BTreeMap<Word, Q>,
}

impl FreePoly {
    pub fn zero() -> FreePoly {
        FreePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> FreePoly {
        FreePoly::monomial(Word::empty(), Q::from_integer(1.into()))
    }

    /// The single-letter polynomial `x` or `y`.
    pub fn letter(l: Letter) -> FreePoly {
        FreePoly::monomial(Word(vec![l]), Q::from_integer(1.into()))
    }

    pub fn monomial(w: Word, c: Q) -> FreePoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        FreePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest word length present (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Smallest word length present (0 for the zero polynomial).
    pub fn low_degree(&self) -> usize {
        self.terms.keys().map(Word::len).min().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> FreePoly {
        if c.is_zero() {
            return FreePoly::zero();
        }
        FreePoly {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Keep only the terms of word length `<= max_len`.
    pub fn truncate(&self, max_len: usize) -> FreePoly {
        FreePoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= max_len)
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
        }
    }

    /// The homogeneous part in word length `len`.
    pub fn homogeneous_part(&self, len: usize) -> FreePoly {
        FreePoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
        }
    }

    /// Left strike by one letter: on a word `m`, returns `n` if `m = l n`
    /// and `0` otherwise; extended linearly.
    pub fn strike_left(&self, l: Letter) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            if w.0.first() == Some(&l) {
                out.add_term(Word(w.0[1..].to_vec()), c.clone());
            }
        }
        out
    }

    /// Cyclic derivative with respect to one letter: on a word
    /// `w = w_1 w_2 ... w_t` it is the sum over all rotations
    /// `w_j ... w_t w_1 ... w_{j-1}` of the left strike by `l`; extended
    /// linearly.
    pub fn cyclic_derivative(&self, l: Letter) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            for j in 0..w.len() {
                if w.0[j] == l {
                    // strike_left of the rotation starting at j keeps w[j+1..], w[..j]
                    let mut v = Vec::with_capacity(w.len() - 1);
                    v.extend_from_slice(&w.0[j + 1..]);
                    v.extend_from_slice(&w.0[..j]);
                    out.add_term(Word(v), c.clone());
                }
            }
        }
        out
    }

    /// Replace every word by its lexicographically minimal rotation,
    /// combining coefficients.
    pub fn cyclic_normal_form(&self) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.min_rotation(), c.clone());
        }
        out
    }

    /// Abelianisation: send each word to the commutative monomial counting
    /// its letters.
    pub fn abelianize(&self) -> CommPoly {
        let mut out = CommPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(
                w.count(Letter::X) as u32,
                w.count(Letter::Y) as u32,
                c.clone(),
            );
        }
        out
    }

    /// JSON rendering: `{"terms": [{"word": "xxyy", "coeff": "1/2"}, ...]}`
    /// in canonical term order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| json!({"word": w.to_string(), "coeff": format_q(c)}))
            .collect();
        json!({ "terms": terms })
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{}", format_q(&abs))?;
            } else {
                write!(f, "{}{}", format_coeff_prefix(&abs), word_powers(w))?;
            }
        }
        Ok(())
    }
}

impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        FreePoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

/// A sparse commutative polynomial in `x, y`, stored as
/// `(x-exponent, y-exponent) -> coefficient`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CommPoly {
    terms: BTreeMap<(u32, u32), Q>,
}

impl CommPoly {
    pub fn zero() -> CommPoly {
        CommPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(xe: u32, ye: u32, c: Q) -> CommPoly {
        let mut p = CommPoly::zero();
        p.add_term(xe, ye, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, xe: u32, ye: u32) -> Q {
        self.terms.get(&(xe, ye)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, xe: u32, ye: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((xe, ye)).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(xe, ye));
        }
    }

    pub fn scale(&self, c: &Q) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero();
        }
        CommPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Ordinary partial derivative with respect to `x` or `y`.
    pub fn partial(&self, l: Letter) -> CommPoly {
        let mut out = CommPoly::zero();
        for (&(xe, ye), c) in &self.terms {
            match l {
                Letter::X if xe > 0 => {
                    out.add_term(xe - 1, ye, c * Q::from_integer(xe.into()));
                }
                Letter::Y if ye > 0 => {
                    out.add_term(xe, ye - 1, c * Q::from_integer(ye.into()));
                }
                _ => {}
            }
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn low_degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).min().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(xe, ye), c)| json!({"xexp": xe, "yexp": ye, "coeff": format_q(c)}))
            .collect();
        json!({ "terms": terms })
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // order by total degree, then x-exponent descending within a degree
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(a, b)| (a + b, std::cmp::Reverse(a)));
        for (i, &&(xe, ye)) in keys.iter().enumerate() {
            let c = &self.terms[&(xe, ye)];
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut mono = String::new();
            if xe > 0 {
                mono.push_str(&render_run(Letter::X, xe as usize));
            }
            if ye > 0 {
                if xe > 0 {
                    mono.push('*');
                }
                mono.push_str(&render_run(Letter::Y, ye as usize));
            }
            if mono.is_empty() {
                write!(f, "{}", format_q(&abs))?;
            } else {
                write!(f, "{}{}", format_coeff_prefix(&abs), mono)?;
            }
        }
        Ok(())
    }
}

impl Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, -c.clone());
        }
        out
    }
}

impl Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q_frac, q_int};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn mono(s: &str, c: i64) -> FreePoly {
        FreePoly::monomial(w(s), q_int(c))
    }

    #[test]
    fn word_order_is_degree_then_lex() {
        assert!(w("y") < w("xx"));
        assert!(w("xx") < w("xy"));
        assert!(w("xy") < w("yx"));
        assert!(w("") < w("x"));
        assert!(w("xxyy") < w("xyxy"));
    }

    #[test]
    fn strike_left_basics() {
        assert_eq!(mono("xxy", 1).strike_left(Letter::X), mono("xy", 1));
        assert_eq!(mono("yxx", 1).strike_left(Letter::X), FreePoly::zero());
        assert_eq!(mono("x", 1).strike_left(Letter::X), FreePoly::one());
        assert_eq!(mono("xy", 3).strike_left(Letter::Y), FreePoly::zero());
    }

    #[test]
    fn cyclic_derivative_of_cube() {
        // rotations of xxx each strike: 3 x^2
        assert_eq!(mono("xxx", 1).cyclic_derivative(Letter::X), mono("xx", 3));
    }

    #[test]
    fn cyclic_derivative_of_xy() {
        assert_eq!(mono("xy", 1).cyclic_derivative(Letter::X), mono("y", 1));
        assert_eq!(mono("xy", 1).cyclic_derivative(Letter::Y), mono("x", 1));
    }

    #[test]
    fn cyclic_derivative_of_xyx() {
        // rotations: xyx (strike -> yx), yxx (no strike), xxy (strike -> xy)
        let d = mono("xyx", 1).cyclic_derivative(Letter::X);
        assert_eq!(d, &mono("xy", 1) + &mono("yx", 1));
    }

    #[test]
    fn cyclic_derivative_is_rotation_invariant() {
        for s in ["xxyy", "xyxy", "xyyxx", "yxyxx"] {
            let base = mono(s, 1);
            for i in 0..s.len() {
                let rot = FreePoly::monomial(w(s).rotation(i), q_int(1));
                assert_eq!(
                    base.cyclic_derivative(Letter::X),
                    rot.cyclic_derivative(Letter::X),
                    "rotation {i} of {s}"
                );
                assert_eq!(
                    base.cyclic_derivative(Letter::Y),
                    rot.cyclic_derivative(Letter::Y),
                    "rotation {i} of {s}"
                );
            }
        }
    }

    #[test]
    fn cyclic_normal_form_picks_min_rotation() {
        assert_eq!(mono("yx", 1).cyclic_normal_form(), mono("xy", 1));
        assert_eq!(mono("xyx", 1).cyclic_normal_form(), mono("xxy", 1));
        // combining: xy + yx -> 2 xy
        let p = &mono("xy", 1) + &mono("yx", 1);
        assert_eq!(p.cyclic_normal_form(), mono("xy", 2));
    }

    #[test]
    fn mul_is_noncommutative_and_distributes() {
        let x = FreePoly::letter(Letter::X);
        let y = FreePoly::letter(Letter::Y);
        assert_eq!(&x * &y, mono("xy", 1));
        assert_eq!(&y * &x, mono("yx", 1));
        let p = &x + &y;
        let q = &x - &y;
        let expect = &(&mono("xx", 1) - &mono("xy", 1)) + &(&mono("yx", 1) - &mono("yy", 1));
        assert_eq!(&p * &q, expect);
    }

    #[test]
    fn abelianize_counts_letters() {
        let p = &mono("xyx", 1) + &mono("xxy", 2);
        assert_eq!(p.abelianize(), CommPoly::monomial(2, 1, q_int(3)));
    }

    #[test]
    fn display_formats() {
        let p =
            &mono("xxxxyy", 1) + &(&mono("xxxyxy", 1) + &mono("xxyxxy", 1).scale(&q_frac(1, 2)));
        assert_eq!(p.to_string(), "x^4*y^2 + x^3*y*x*y + 1/2*x^2*y*x^2*y");
        assert_eq!(FreePoly::zero().to_string(), "0");
        assert_eq!(FreePoly::one().to_string(), "1");
        let m = &mono("xy", -1) - &mono("yy", 2);
        assert_eq!(m.to_string(), "-x*y - 2*y^2");
    }

    #[test]
    fn json_round_trips_term_order() {
        let p = &mono("yx", 1) + &mono("xxyy", 1).scale(&q_frac(1, 2));
        let v = p.to_json();
        let terms = v["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0]["word"], "yx");
        assert_eq!(terms[0]["coeff"], "1");
        assert_eq!(terms[1]["word"], "xxyy");
        assert_eq!(terms[1]["coeff"], "1/2");
    }

    #[test]
    fn comm_poly_partials() {
        // d/dx (x^3) = 3x^2, d/dy (x^2 y^2) = 2 x^2 y
        let v = CommPoly::monomial(3, 0, q_int(1));
        assert_eq!(v.partial(Letter::X), CommPoly::monomial(2, 0, q_int(3)));
        let u = CommPoly::monomial(2, 2, q_int(1));
        assert_eq!(u.partial(Letter::Y), CommPoly::monomial(2, 1, q_int(2)));
    }

    #[test]
    fn comm_poly_display() {
        let p = CommPoly::monomial(4, 2, q_frac(5, 2));
        assert_eq!(p.to_string(), "5/2*x^4*y^2");
    }
}
