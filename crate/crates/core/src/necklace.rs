//! Cyclic words, necklace polynomials and superpotentials.
//!
//! A necklace of type `(j, k)` is an orbit of the cyclic group acting on
//! words with `j` letters `x` and `k` letters `y`. The necklace polynomial
//!
//! ```text
//! N_{j,k} = 1/(j+k) * sum_{orbits} |orbit| * representative
//! ```
//!
//! and the full monomial sum `Mono_{j,k}` (all such words) satisfy the
//! derivative rule `delta_x N_{j+1,k} = Mono_{j,k}` and its `y`-analogue,
//! which is what makes `N` the right building block for superpotentials:
//! `W = sum lambda_{j,k} N_{j,k}` has cyclic derivatives
//! `sum lambda_{j,k} Mono_{j-1,k}` and `sum lambda_{j,k} Mono_{j,k-1}`.

use crate::geometry::{LambdaTable, Violation};
use crate::ncpoly::{CommPoly, FreePoly, Letter, Word};
use crate::rational::{binomial, q_int};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NecklaceError {
    #[error("the empty necklace (j = k = 0) is not allowed")]
    EmptyIndex,
    #[error("coefficient table violates the setup: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Setup(Vec<Violation>),
}

/// One rotation orbit: the canonical (lexicographically minimal rotation)
/// representative together with the number of distinct words in the orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Necklace {
    pub rep: Word,
    pub orbit_size: usize,
}

/// All rotation orbits of words with `j` letters `x` and `k` letters `y`,
/// sorted by canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub j: u32,
    pub k: u32,
    pub orbits: Vec<Necklace>,
}

impl OrbitDecomposition {
    /// Total number of words, `C(j+k, k)`.
    pub fn word_count(&self) -> usize {
        self.orbits.iter().map(|o| o.orbit_size).sum()
    }
}

/// All words with exactly `j` letters `x` and `k` letters `y`.
fn words_with_counts(j: u32, k: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf: Vec<Letter> = Vec::with_capacity((j + k) as usize);
    fn rec(xs: u32, ys: u32, buf: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if xs == 0 && ys == 0 {
            out.push(Word(buf.clone()));
            return;
        }
        if xs > 0 {
            buf.push(Letter::X);
            rec(xs - 1, ys, buf, out);
            buf.pop();
        }
        if ys > 0 {
            buf.push(Letter::Y);
            rec(xs, ys - 1, buf, out);
            buf.pop();
        }
    }
    rec(j, k, &mut buf, &mut out);
    out
}

/// Decompose the words of type `(j, k)` into rotation orbits.
pub fn enumerate_orbits(j: u32, k: u32) -> Result<OrbitDecomposition, NecklaceError> {
    if j == 0 && k == 0 {
        return Err(NecklaceError::EmptyIndex);
    }
    let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
    for w in words_with_counts(j, k) {
        *counts.entry(w.min_rotation()).or_insert(0) += 1;
    }
    let orbits = counts
        .into_iter()
        .map(|(rep, orbit_size)| Necklace { rep, orbit_size })
        .collect();
    Ok(OrbitDecomposition { j, k, orbits })
}

/// The necklace polynomial `N_{j,k} = 1/(j+k) sum |orbit| * rep`.
pub fn necklace_poly(j: u32, k: u32) -> Result<FreePoly, NecklaceError> {
    let dec = enumerate_orbits(j, k)?;
    let n = q_int((j + k) as i64);
    let mut out = FreePoly::zero();
    for orb in &dec.orbits {
        out.add_term(orb.rep.clone(), q_int(orb.orbit_size as i64) / n.clone());
    }
    Ok(out)
}

/// The monomial sum `Mono_{j,k}`: every word with `j` x's and `k` y's,
/// coefficient 1. `Mono_{0,0} = 1`.
pub fn mono_sum(j: u32, k: u32) -> FreePoly {
    let mut out = FreePoly::zero();
    for w in words_with_counts(j, k) {
        out.add_term(w, q_int(1));
    }
    out
}

/// The cyclic trace expansion of type `(j, k)`: the monomial sum reduced to
/// cyclic normal form. Agrees with `(j+k) * N_{j,k}` reduced the same way.
pub fn trace_expansion(j: u32, k: u32) -> FreePoly {
    mono_sum(j, k).cyclic_normal_form()
}

fn ensure_potential_ready(table: &LambdaTable) -> Result<(), NecklaceError> {
    let violations: Vec<Violation> = table
        .entries()
        .filter(|(&(j, k), _)| j + k <= 2)
        .map(|(&(j, k), _)| Violation::ForbiddenEntry { j, k })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(NecklaceError::Setup(violations))
    }
}

/// The superpotential `W = sum lambda_{j,k} N_{j,k}`, in cyclic normal
/// form. Requires every table entry to sit in total degree >= 3; the empty
/// table gives 0.
pub fn potential(table: &LambdaTable) -> Result<FreePoly, NecklaceError> {
    ensure_potential_ready(table)?;
    let mut w = FreePoly::zero();
    for (&(j, k), v) in table.entries() {
        w = &w + &necklace_poly(j, k).expect("degree >= 3").scale(v);
    }
    Ok(w.cyclic_normal_form())
}

/// The commutative shadow of the superpotential:
/// `V = sum lambda_{j,k}/(j+k) * C(j+k, k) * x^j y^k`.
pub fn commutative_potential(table: &LambdaTable) -> Result<CommPoly, NecklaceError> {
    ensure_potential_ready(table)?;
    let mut v = CommPoly::zero();
    for (&(j, k), val) in table.entries() {
        let c = val * binomial(j + k, k) / q_int((j + k) as i64);
        v.add_term(j, k, c);
    }
    Ok(v)
}
