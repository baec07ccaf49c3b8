//! Two-chart geometry of the curve neighbourhood.
//!
//! The total space is glued from two charts `U1 = Spec K[a, v2, v1]` and
//! `U2 = Spec K[b, w2, w1]` along `a, b != 0` by
//!
//! ```text
//! b  = a^-1
//! w2 = a^-1 v2
//! w1 = a^3 v1 + sum_{j,k} lambda_{j,k} a^(2-k) v2^(j+k-1)
//! ```
//!
//! with inverse
//!
//! ```text
//! a  = b^-1
//! v2 = b^-1 w2
//! v1 = b^3 w1 - sum_{j,k} lambda_{j,k} b^(2-j) w2^(j+k-1)
//! ```
//!
//! The coefficient table [`LambdaTable`] drives everything downstream. From
//! it this module derives the invariants `t` (lowest total degree), `r`
//! (largest `k`-index), `s` (largest `j`-index) and the polynomial family
//! `A, B, A_i, B_i, A_(>=i), B_(>=i)` characterised by
//!
//! ```text
//! sum lambda_{j,k} a^(2-k) v2^(j+k-1) = a^(2-r) v2^(t-1) A,   a and v2 do not divide A,
//! sum lambda_{j,k} b^(2-j) w2^(j+k-1) = b^(2-s) w2^(t-1) B,   b and w2 do not divide B,
//! A_i = sum_{j+k=i} lambda_{j,k} a^(r-k),   A = sum_{i>=t} v2^(i-t) A_i,
//! ```
//!
//! and verifies the overlap identities tying the two sides together.

use crate::rational::{format_q, Q};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Which affine chart an expression lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    U1,
    U2,
}

impl Chart {
    pub fn var_names(self) -> [&'static str; 3] {
        match self {
            Chart::U1 => ["a", "v2", "v1"],
            Chart::U2 => ["b", "w2", "w1"],
        }
    }
}

/// A sparse polynomial in three variables `(c, f2, f1)` (the chart
/// coordinate and the two fibre coordinates), Laurent in the chart
/// coordinate (integer exponent) and polynomial in the fibre coordinates.
///
/// This single representation backs both chart-regular polynomials (where
/// the first exponent happens to be nonnegative) and overlap functions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly3 {
    terms: BTreeMap<(i64, u32, u32), Q>,
}

impl Poly3 {
    pub fn zero() -> Poly3 {
        Poly3 {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Poly3 {
        Poly3::monomial(0, 0, 0, Q::from_integer(1.into()))
    }

    pub fn constant(c: Q) -> Poly3 {
        Poly3::monomial(0, 0, 0, c)
    }

    pub fn monomial(e0: i64, e2: u32, e1: u32, c: Q) -> Poly3 {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((e0, e2, e1), c);
        }
        Poly3 { terms }
    }

    /// `c^n` for the chart coordinate, any integer `n`.
    pub fn coord_pow(n: i64) -> Poly3 {
        Poly3::monomial(n, 0, 0, Q::from_integer(1.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, e0: i64, e2: u32, e1: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((e0, e2, e1)) {
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

    pub fn scale(&self, c: &Q) -> Poly3 {
        if c.is_zero() {
            return Poly3::zero();
        }
        Poly3 {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply by the monomial `c^e0 f2^e2 f1^e1`.
    pub fn mul_monomial(&self, e0: i64, e2: u32, e1: u32) -> Poly3 {
        Poly3 {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b, d), v)| ((a + e0, b + e2, d + e1), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly3 {
        let mut acc = Poly3::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Smallest exponent of the chart coordinate, if nonzero.
    pub fn min_coord_exp(&self) -> Option<i64> {
        self.terms.keys().map(|&(e0, _, _)| e0).min()
    }

    /// True when every chart-coordinate exponent is nonnegative, i.e. the
    /// expression is regular on its chart.
    pub fn is_regular(&self) -> bool {
        self.min_coord_exp().is_none_or(|m| m >= 0)
    }

    /// True when the second-slot (fibre `f2`) exponent is positive in every
    /// term.
    pub fn divisible_by_f2(&self) -> bool {
        self.terms.keys().all(|&(_, e2, _)| e2 > 0)
    }

    /// True when no term involves the fibre coordinates at all.
    pub fn is_coord_only(&self) -> bool {
        self.terms.keys().all(|&(_, e2, e1)| e2 == 0 && e1 == 0)
    }

    pub fn coeff(&self, e0: i64, e2: u32, e1: u32) -> Q {
        self.terms
            .get(&(e0, e2, e1))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Split into (terms with `f2`-exponent zero, terms with positive
    /// `f2`-exponent).
    pub fn split_f2(&self) -> (Poly3, Poly3) {
        let mut pure = Poly3::zero();
        let mut tail = Poly3::zero();
        for (&(e0, e2, e1), c) in &self.terms {
            if e2 == 0 {
                pure.add_term(e0, e2, e1, c.clone());
            } else {
                tail.add_term(e0, e2, e1, c.clone());
            }
        }
        (pure, tail)
    }

    /// Render with explicit variable names, e.g. `["a", "v2", "v1"]`.
    pub fn display_with(&self, vars: [&str; 3]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&(e0, e2, e1), c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if e0 != 0 {
                factors.push(if e0 == 1 {
                    vars[0].to_string()
                } else {
                    format!("{}^{}", vars[0], e0)
                });
            }
            if e2 != 0 {
                factors.push(if e2 == 1 {
                    vars[1].to_string()
                } else {
                    format!("{}^{}", vars[1], e2)
                });
            }
            if e1 != 0 {
                factors.push(if e1 == 1 {
                    vars[2].to_string()
                } else {
                    format!("{}^{}", vars[2], e1)
                });
            }
            let abs_one = abs == Q::from_integer(1.into());
            if factors.is_empty() {
                out.push_str(&format_q(&abs));
            } else if abs_one {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{}*{}", format_q(&abs), factors.join("*")));
            }
        }
        out
    }
}

impl Add for &Poly3 {
    type Output = Poly3;
    fn add(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (&(e0, e2, e1), c) in &rhs.terms {
            out.add_term(e0, e2, e1, c.clone());
        }
        out
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;
    fn sub(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (&(e0, e2, e1), c) in &rhs.terms {
            out.add_term(e0, e2, e1, -c.clone());
        }
        out
    }
}

impl Neg for &Poly3 {
    type Output = Poly3;
    fn neg(self) -> Poly3 {
        Poly3 {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;
    fn mul(self, rhs: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(a1, b1, d1), c1) in &self.terms {
            for (&(a2, b2, d2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, d1 + d2, c1 * c2);
            }
        }
        out
    }
}

/// A polynomial function on one chart: regular, i.e. all chart-coordinate
/// exponents nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPoly {
    pub chart: Chart,
    pub poly: Poly3,
}

impl ChartPoly {
    /// Wrap a regular polynomial; fails if any chart-coordinate exponent is
    /// negative.
    pub fn new(chart: Chart, poly: Poly3) -> Result<ChartPoly, GeometryError> {
        if !poly.is_regular() {
            return Err(GeometryError::NotRegular {
                chart,
                min_exp: poly.min_coord_exp().unwrap_or(0),
            });
        }
        Ok(ChartPoly { chart, poly })
    }
}

impl fmt::Display for ChartPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.display_with(self.chart.var_names()))
    }
}

/// A function on the chart overlap, written in `U1` coordinates: Laurent in
/// `a`, polynomial in `v2, v1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapPoly(pub Poly3);

impl fmt::Display for OverlapPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.display_with(Chart::U1.var_names()))
    }
}

/// The coefficient table `lambda_{j,k}`: finitely many nonzero rationals
/// indexed by pairs of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LambdaTable {
    entries: BTreeMap<(u32, u32), Q>,
}

/// One unsatisfied constraint on a coefficient table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An entry that must vanish is present: the constant/linear entries
    /// `(0,0), (1,0), (0,1)` always, the quadratic entries `(2,0), (1,1),
    /// (0,2)` additionally when the table must describe a `(-3,1)` curve.
    ForbiddenEntry { j: u32, k: u32 },
    /// Every entry vanishes, so the table is degenerate for a `(-3,1)`
    /// neighbourhood.
    DegenerateAllZero,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ForbiddenEntry { j, k } => {
                write!(f, "lambda_({j},{k}) must vanish but is nonzero")
            }
            Violation::DegenerateAllZero => write!(f, "all coefficients vanish"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("duplicate coefficient entry at (j,k)=({0},{1})")]
    DuplicateEntry(u32, u32),
    #[error("zero coefficient stored at (j,k)=({0},{1})")]
    ZeroEntry(u32, u32),
    #[error("coefficient table violates the setup: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Setup(Vec<Violation>),
    #[error(
        "expression on chart {chart:?} is not regular (minimal coordinate exponent {min_exp})"
    )]
    NotRegular { chart: Chart, min_exp: i64 },
    #[error("expected a polynomial on chart {expected:?}, got chart {got:?}")]
    WrongChart { expected: Chart, got: Chart },
    #[error("overlap identity `{name}` failed: lhs = {lhs}, rhs = {rhs}")]
    IdentityFailed {
        name: String,
        lhs: String,
        rhs: String,
    },
}

impl LambdaTable {
    pub fn empty() -> LambdaTable {
        LambdaTable::default()
    }

    /// Build from `(j, k, value)` triples. Duplicate indices and zero values
    /// are rejected.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (u32, u32, Q)>,
    ) -> Result<LambdaTable, GeometryError> {
        let mut map = BTreeMap::new();
        for (j, k, v) in entries {
            if v.is_zero() {
                return Err(GeometryError::ZeroEntry(j, k));
            }
            if map.insert((j, k), v).is_some() {
                return Err(GeometryError::DuplicateEntry(j, k));
            }
        }
        Ok(LambdaTable { entries: map })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.entries.iter()
    }

    pub fn lambda(&self, j: u32, k: u32) -> Q {
        self.entries.get(&(j, k)).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest total degree `j + k` present.
    pub fn max_total_degree(&self) -> Option<u32> {
        self.entries.keys().map(|&(j, k)| j + k).max()
    }

    /// Check the setup constraints. Always forbidden: entries at total
    /// degree <= 1. With `require_minus3_1` additionally: entries at total
    /// degree 2, and the all-zero table.
    pub fn validate(&self, require_minus3_1: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        for &(j, k) in self.entries.keys() {
            if j + k <= 1 || (require_minus3_1 && j + k == 2) {
                out.push(Violation::ForbiddenEntry { j, k });
            }
        }
        if require_minus3_1 && self.entries.is_empty() {
            out.push(Violation::DegenerateAllZero);
        }
        out
    }

    fn ensure(&self, require_minus3_1: bool) -> Result<(), GeometryError> {
        let v = self.validate(require_minus3_1);
        if v.is_empty() {
            Ok(())
        } else {
            Err(GeometryError::Setup(v))
        }
    }

    /// A compact text form like `{ (3,0): 3, (2,2): 1/2 }`.
    pub fn describe(&self) -> String {
        let body = self
            .entries
            .iter()
            .map(|(&(j, k), v)| format!("({j},{k}): {}", format_q(v)))
            .collect::<Vec<_>>()
            .join(", ");
        format!("{{ {body} }}")
    }
}

/// The normal bundle type of the curve, read off the quadratic part of the
/// coefficient table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalBundle {
    /// `O(-3) + O(1)`
    Minus3Plus1,
    /// `O(-2) + O(0)`
    Minus2Zero,
    /// `O(-1) + O(-1)`
    Minus1Minus1,
}

impl fmt::Display for NormalBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalBundle::Minus3Plus1 => write!(f, "(-3,1)"),
            NormalBundle::Minus2Zero => write!(f, "(-2,0)"),
            NormalBundle::Minus1Minus1 => write!(f, "(-1,-1)"),
        }
    }
}

/// Classify the normal bundle from the quadratic coefficients: with
/// `lambda_20, lambda_11, lambda_02` all zero the curve is `(-3,1)`;
/// otherwise the discriminant `lambda_11^2 - lambda_20 * lambda_02`
/// distinguishes `(-2,0)` (zero) from `(-1,-1)` (nonzero).
pub fn classify_normal_bundle(table: &LambdaTable) -> Result<NormalBundle, GeometryError> {
    table.ensure(false)?;
    let l20 = table.lambda(2, 0);
    let l11 = table.lambda(1, 1);
    let l02 = table.lambda(0, 2);
    if l20.is_zero() && l11.is_zero() && l02.is_zero() {
        return Ok(NormalBundle::Minus3Plus1);
    }
    let disc = &l11 * &l11 - &l20 * &l02;
    if disc.is_zero() {
        Ok(NormalBundle::Minus2Zero)
    } else {
        Ok(NormalBundle::Minus1Minus1)
    }
}

/// Glue the `w1`-coordinate: `a^3 v1 + sum lambda_{j,k} a^(2-k) v2^(j+k-1)`
/// as an overlap function in `U1` coordinates.
pub fn glued_w1(table: &LambdaTable) -> Poly3 {
    let mut p = Poly3::monomial(3, 0, 1, Q::from_integer(1.into()));
    for (&(j, k), v) in table.entries() {
        p.add_term(2 - k as i64, j + k - 1, 0, v.clone());
    }
    p
}

/// Inverse glue of the `v1`-coordinate:
/// `b^3 w1 - sum lambda_{j,k} b^(2-j) w2^(j+k-1)` in `U2` coordinates.
pub fn inverse_glued_v1(table: &LambdaTable) -> Poly3 {
    let mut p = Poly3::monomial(3, 0, 1, Q::from_integer(1.into()));
    for (&(j, k), v) in table.entries() {
        p.add_term(2 - j as i64, j + k - 1, 0, -v.clone());
    }
    p
}

/// Substitute the gluing into a `U2`-side polynomial, producing the overlap
/// function in `U1` coordinates: `b -> a^-1`, `w2 -> a^-1 v2`,
/// `w1 -> a^3 v1 + sum lambda a^(2-k) v2^(j+k-1)`.
pub(crate) fn glue_u2_poly(p: &Poly3, table: &LambdaTable) -> Poly3 {
    let gw1 = glued_w1(table);
    let mut out = Poly3::zero();
    for (&(eb, ew2, ew1), c) in p.terms() {
        // b^eb w2^ew2 w1^ew1 -> a^(-eb) (a^-1 v2)^ew2 gw1^ew1
        let base = Poly3::monomial(-eb - ew2 as i64, ew2, 0, c.clone());
        let term = &base * &gw1.pow(ew1);
        out = &out + &term;
    }
    out
}

/// Substitute the inverse gluing into a `U1`-side polynomial, producing the
/// overlap function in `U2` coordinates: `a -> b^-1`, `v2 -> b^-1 w2`,
/// `v1 -> b^3 w1 - sum lambda b^(2-j) w2^(j+k-1)`.
pub(crate) fn glue_u1_poly(p: &Poly3, table: &LambdaTable) -> Poly3 {
    let gv1 = inverse_glued_v1(table);
    let mut out = Poly3::zero();
    for (&(ea, ev2, ev1), c) in p.terms() {
        let base = Poly3::monomial(-ea - ev2 as i64, ev2, 0, c.clone());
        let term = &base * &gv1.pow(ev1);
        out = &out + &term;
    }
    out
}

/// Public form of the glue substitution: takes a polynomial on `U2` and
/// returns the overlap function in `U1` coordinates.
pub fn substitute_glue(p: &ChartPoly, table: &LambdaTable) -> Result<OverlapPoly, GeometryError> {
    if p.chart != Chart::U2 {
        return Err(GeometryError::WrongChart {
            expected: Chart::U2,
            got: p.chart,
        });
    }
    Ok(OverlapPoly(glue_u2_poly(&p.poly, table)))
}

/// The derived invariants of a valid `(-3,1)` coefficient table.
///
/// `a_poly`/`b_poly` are `A`/`B` in the chart variables `(a, v2)` and
/// `(b, w2)`; `a_parts[i]`/`b_parts[i]` are the pure-coordinate slices
/// `A_i`/`B_i` for `t <= i <= max_degree` (all other indices are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryInvariants {
    pub table: LambdaTable,
    pub t: u32,
    pub r: u32,
    pub s: u32,
    pub max_degree: u32,
    pub a_poly: Poly3,
    pub b_poly: Poly3,
    a_parts: BTreeMap<u32, Poly3>,
    b_parts: BTreeMap<u32, Poly3>,
}

impl GeometryInvariants {
    /// `A_i` (zero when `i` is outside `t..=max_degree`).
    pub fn a_part(&self, i: u32) -> Poly3 {
        self.a_parts.get(&i).cloned().unwrap_or_else(Poly3::zero)
    }

    /// `B_i` (zero when out of range).
    pub fn b_part(&self, i: u32) -> Poly3 {
        self.b_parts.get(&i).cloned().unwrap_or_else(Poly3::zero)
    }

    /// `v2^(base-...)`-shifted tail: `sum_{i >= start} v2^(i - v2_base) A_i`.
    /// Requires `v2_base <= start`, so the result is polynomial.
    pub fn a_tail_from(&self, start: u32, v2_base: u32) -> Poly3 {
        assert!(v2_base <= start, "tail base must not exceed start index");
        let mut out = Poly3::zero();
        for (&i, p) in &self.a_parts {
            if i >= start {
                out = &out + &p.mul_monomial(0, i - v2_base, 0);
            }
        }
        out
    }

    /// `sum_{i >= start} w2^(i - w2_base) B_i`.
    pub fn b_tail_from(&self, start: u32, w2_base: u32) -> Poly3 {
        assert!(w2_base <= start, "tail base must not exceed start index");
        let mut out = Poly3::zero();
        for (&i, p) in &self.b_parts {
            if i >= start {
                out = &out + &p.mul_monomial(0, i - w2_base, 0);
            }
        }
        out
    }

    /// `A_(>=i) = sum_{j >= i} v2^(j-t) A_j` (equals `A` for `i <= t`).
    pub fn a_geq(&self, i: u32) -> Poly3 {
        self.a_tail_from(i.max(self.t), self.t)
    }

    /// `B_(>=i)`.
    pub fn b_geq(&self, i: u32) -> Poly3 {
        self.b_tail_from(i.max(self.t), self.t)
    }
}

/// Compute the invariants of a table satisfying the full `(-3,1)` setup.
pub fn invariants(table: &LambdaTable) -> Result<GeometryInvariants, GeometryError> {
    table.ensure(true)?;
    let t = table
        .entries()
        .map(|(&(j, k), _)| j + k)
        .min()
        .expect("nonempty table");
    let max_degree = table.max_total_degree().expect("nonempty table");
    let r = table
        .entries()
        .map(|(&(_, k), _)| k)
        .max()
        .expect("nonempty table");
    let s = table
        .entries()
        .map(|(&(j, _), _)| j)
        .max()
        .expect("nonempty table");

    let mut a_parts: BTreeMap<u32, Poly3> = BTreeMap::new();
    let mut b_parts: BTreeMap<u32, Poly3> = BTreeMap::new();
    for (&(j, k), v) in table.entries() {
        a_parts
            .entry(j + k)
            .or_insert_with(Poly3::zero)
            .add_term((r - k) as i64, 0, 0, v.clone());
        b_parts
            .entry(j + k)
            .or_insert_with(Poly3::zero)
            .add_term((s - j) as i64, 0, 0, v.clone());
    }
    a_parts.retain(|_, p| !p.is_zero());
    b_parts.retain(|_, p| !p.is_zero());

    let inv = GeometryInvariants {
        table: table.clone(),
        t,
        r,
        s,
        max_degree,
        a_poly: Poly3::zero(),
        b_poly: Poly3::zero(),
        a_parts,
        b_parts,
    };
    let a_poly = inv.a_tail_from(t, t);
    let b_poly = inv.b_tail_from(t, t);

    // Characterising properties of A and B: neither the chart coordinate
    // nor the fibre coordinate divides them, and the factored sums match
    // the raw gluing term.
    debug_assert!(a_poly.terms().any(|(&(e0, _, _), _)| e0 == 0));
    debug_assert!(a_poly.terms().any(|(&(_, e2, _), _)| e2 == 0));
    debug_assert!(b_poly.terms().any(|(&(e0, _, _), _)| e0 == 0));
    debug_assert!(b_poly.terms().any(|(&(_, e2, _), _)| e2 == 0));

    Ok(GeometryInvariants {
        a_poly,
        b_poly,
        ..inv
    })
}

fn identity_check(name: &str, lhs: &Poly3, rhs: &Poly3, chart: Chart) -> Result<(), GeometryError> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(GeometryError::IdentityFailed {
            name: name.to_string(),
            lhs: lhs.display_with(chart.var_names()),
            rhs: rhs.display_with(chart.var_names()),
        })
    }
}

/// Verify every overlap identity tying the `A`-side to the `B`-side, plus
/// the structural facts about the gluing itself. Returns the invariants on
/// success; the error names the first offending identity.
pub fn check_overlap_identities(table: &LambdaTable) -> Result<GeometryInvariants, GeometryError> {
    let inv = invariants(table)?;
    let (t, r, s) = (inv.t, inv.r, inv.s);
    let rs = r as i64 + s as i64;

    // The gluing term factors as a^(2-r) v2^(t-1) A.
    let mut glue_sum = Poly3::zero();
    for (&(j, k), v) in table.entries() {
        glue_sum.add_term(2 - k as i64, j + k - 1, 0, v.clone());
    }
    identity_check(
        "glue term = a^(2-r) v2^(t-1) A",
        &glue_sum,
        &inv.a_poly.mul_monomial(2 - r as i64, t - 1, 0),
        Chart::U1,
    )?;
    let mut inv_sum = Poly3::zero();
    for (&(j, k), v) in table.entries() {
        inv_sum.add_term(2 - j as i64, j + k - 1, 0, v.clone());
    }
    identity_check(
        "inverse glue term = b^(2-s) w2^(t-1) B",
        &inv_sum,
        &inv.b_poly.mul_monomial(2 - s as i64, t - 1, 0),
        Chart::U2,
    )?;

    // 2-r is the most negative a-exponent of the glued w1 (and dually 2-s).
    let gw1 = glued_w1(table);
    if gw1.min_coord_exp() != Some(2 - r as i64) {
        return Err(GeometryError::IdentityFailed {
            name: "min a-exponent of glued w1 is 2-r".into(),
            lhs: format!("{:?}", gw1.min_coord_exp()),
            rhs: format!("{}", 2 - r as i64),
        });
    }
    let gv1 = inverse_glued_v1(table);
    if gv1.min_coord_exp() != Some(2 - s as i64) {
        return Err(GeometryError::IdentityFailed {
            name: "min b-exponent of inverse-glued v1 is 2-s".into(),
            lhs: format!("{:?}", gv1.min_coord_exp()),
            rhs: format!("{}", 2 - s as i64),
        });
    }

    // Composing glue with inverse glue fixes the coordinate functions.
    let one = Q::from_integer(1.into());
    let coords = [
        Poly3::monomial(1, 0, 0, one.clone()),
        Poly3::monomial(0, 1, 0, one.clone()),
        Poly3::monomial(0, 0, 1, one),
    ];
    for (name, c) in ["a", "v2", "v1"].iter().zip(coords.iter()) {
        let round_trip = glue_u2_poly(&glue_u1_poly(c, table), table);
        identity_check(
            &format!("glue round trip fixes {name}"),
            &round_trip,
            c,
            Chart::U1,
        )?;
    }
    for (name, c) in ["b", "w2", "w1"].iter().zip(coords.iter()) {
        let round_trip = glue_u1_poly(&glue_u2_poly(c, table), table);
        identity_check(
            &format!("glue round trip fixes {name}"),
            &round_trip,
            c,
            Chart::U2,
        )?;
    }

    // B = b^(r+s-t) A on the overlap, i.e. glue(B) = a^(t-r-s) A.
    identity_check(
        "B = b^(r+s-t) A",
        &glue_u2_poly(&inv.b_poly, table),
        &inv.a_poly.mul_monomial(t as i64 - rs, 0, 0),
        Chart::U1,
    )?;

    // A_i = a^(r+s-i) B_i for every i.
    for i in t..=inv.max_degree {
        identity_check(
            &format!("A_{i} = a^(r+s-{i}) B_{i}"),
            &inv.a_part(i),
            &glue_u2_poly(&inv.b_part(i), table).mul_monomial(rs - i as i64, 0, 0),
            Chart::U1,
        )?;
    }

    // A_(>=i) = a^(r+s-t) B_(>=i) for 3 <= i <= max+1 (the empty tail included).
    for i in 3..=inv.max_degree + 1 {
        identity_check(
            &format!("A_(>={i}) = a^(r+s-t) B_(>={i})"),
            &inv.a_geq(i),
            &glue_u2_poly(&inv.b_geq(i), table).mul_monomial(rs - t as i64, 0, 0),
            Chart::U1,
        )?;
    }

    // The splitting v2^(t-i) A_(>=i) = A_i + v2^(t-i) A_(>=i+1), checked in
    // its polynomial form sum_{j>=i} v2^(j-i) A_j = A_i + sum_{j>=i+1} v2^(j-i) A_j.
    for i in 3..=inv.max_degree {
        let lhs = inv.a_tail_from(i, i);
        let rhs = &inv.a_part(i) + &inv.a_tail_from(i + 1, i);
        identity_check(&format!("split of A at {i}"), &lhs, &rhs, Chart::U1)?;
        let lhs_b = inv.b_tail_from(i, i);
        let rhs_b = &inv.b_part(i) + &inv.b_tail_from(i + 1, i);
        identity_check(&format!("split of B at {i}"), &lhs_b, &rhs_b, Chart::U2)?;
    }

    Ok(inv)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{q_frac, q_int};

    pub(crate) fn table(entries: &[(u32, u32, i64)]) -> LambdaTable {
        LambdaTable::from_entries(entries.iter().map(|&(j, k, v)| (j, k, q_int(v)))).unwrap()
    }

    #[test]
    fn from_entries_rejects_duplicates_and_zeroes() {
        assert_eq!(
            LambdaTable::from_entries([(3, 0, q_int(1)), (3, 0, q_int(2))]),
            Err(GeometryError::DuplicateEntry(3, 0))
        );
        assert_eq!(
            LambdaTable::from_entries([(3, 0, q_int(0))]),
            Err(GeometryError::ZeroEntry(3, 0))
        );
    }

    #[test]
    fn validate_flags_low_entries() {
        let t = table(&[(0, 0, 1), (3, 0, 1)]);
        assert_eq!(
            t.validate(false),
            vec![Violation::ForbiddenEntry { j: 0, k: 0 }]
        );
        let t = table(&[(1, 1, 1)]);
        assert!(t.validate(false).is_empty());
        assert_eq!(
            t.validate(true),
            vec![Violation::ForbiddenEntry { j: 1, k: 1 }]
        );
        assert_eq!(
            LambdaTable::empty().validate(true),
            vec![Violation::DegenerateAllZero]
        );
        assert!(LambdaTable::empty().validate(false).is_empty());
    }

    #[test]
    fn classifier_on_quadratic_parts() {
        assert_eq!(
            classify_normal_bundle(&table(&[(3, 0, 3)])),
            Ok(NormalBundle::Minus3Plus1)
        );
        assert_eq!(
            classify_normal_bundle(&LambdaTable::empty()),
            Ok(NormalBundle::Minus3Plus1)
        );
        // lambda_11 = 1, others zero: disc = 1 -> (-1,-1)
        assert_eq!(
            classify_normal_bundle(&table(&[(1, 1, 1)])),
            Ok(NormalBundle::Minus1Minus1)
        );
        // lambda_20 = 1: disc = 0 -> (-2,0)
        assert_eq!(
            classify_normal_bundle(&table(&[(2, 0, 1)])),
            Ok(NormalBundle::Minus2Zero)
        );
        // lambda_11 = 1, lambda_20 = 1, lambda_02 = 1: disc = 0 -> (-2,0)
        assert_eq!(
            classify_normal_bundle(&table(&[(1, 1, 1), (2, 0, 1), (0, 2, 1)])),
            Ok(NormalBundle::Minus2Zero)
        );
        // lambda_20 = 1, lambda_02 = -1: disc = 1 -> (-1,-1)
        assert_eq!(
            classify_normal_bundle(&table(&[(2, 0, 1), (0, 2, -1)])),
            Ok(NormalBundle::Minus1Minus1)
        );
        assert!(classify_normal_bundle(&table(&[(0, 1, 1)])).is_err());
    }

    #[test]
    fn invariants_of_calibration_tables() {
        let inv = invariants(&table(&[(3, 0, 3)])).unwrap();
        assert_eq!((inv.t, inv.r, inv.s), (3, 0, 3));
        assert_eq!(inv.a_poly, Poly3::constant(q_int(3)));
        assert_eq!(inv.b_poly, Poly3::constant(q_int(3)));

        let inv = invariants(&table(&[(0, 3, 1)])).unwrap();
        assert_eq!((inv.t, inv.r, inv.s), (3, 3, 0));
        assert_eq!(inv.a_poly, Poly3::one());
        assert_eq!(inv.b_poly, Poly3::one());

        let inv = invariants(&table(&[(2, 2, 1)])).unwrap();
        assert_eq!((inv.t, inv.r, inv.s), (4, 2, 2));
        assert_eq!(inv.a_poly, Poly3::one());

        // mixed: A = a^3 + 1, B = b^3 + 1
        let inv = invariants(&table(&[(3, 0, 1), (0, 3, 1)])).unwrap();
        assert_eq!((inv.t, inv.r, inv.s), (3, 3, 3));
        let want = &Poly3::coord_pow(3) + &Poly3::one();
        assert_eq!(inv.a_poly, want);
        assert_eq!(inv.b_poly, want);
        assert_eq!(inv.a_part(3), want);
        assert!(inv.a_part(4).is_zero());
    }

    #[test]
    fn invariants_reject_invalid_tables() {
        assert!(matches!(
            invariants(&LambdaTable::empty()),
            Err(GeometryError::Setup(_))
        ));
        assert!(matches!(
            invariants(&table(&[(1, 1, 1)])),
            Err(GeometryError::Setup(_))
        ));
    }

    #[test]
    fn glue_substitution_on_coordinates() {
        let t = table(&[(3, 0, 3)]);
        // w2 -> a^-1 v2
        let w2 = ChartPoly::new(Chart::U2, Poly3::monomial(0, 1, 0, q_int(1))).unwrap();
        let glued = substitute_glue(&w2, &t).unwrap();
        assert_eq!(glued.0, Poly3::monomial(-1, 1, 0, q_int(1)));
        // w1 -> a^3 v1 + 3 a^2 v2^2
        let w1 = ChartPoly::new(Chart::U2, Poly3::monomial(0, 0, 1, q_int(1))).unwrap();
        let glued = substitute_glue(&w1, &t).unwrap();
        let want = &Poly3::monomial(3, 0, 1, q_int(1)) + &Poly3::monomial(2, 2, 0, q_int(3));
        assert_eq!(glued.0, want);
        // chart mismatch is an error
        let a = ChartPoly::new(Chart::U1, Poly3::coord_pow(1)).unwrap();
        assert!(substitute_glue(&a, &t).is_err());
    }

    #[test]
    fn overlap_identities_on_calibration_tables() {
        for entries in [
            vec![(3u32, 0u32, 3i64)],
            vec![(0, 3, 1)],
            vec![(2, 2, 1)],
            vec![(3, 0, 1), (0, 3, 1)],
            vec![(3, 0, 1), (2, 1, 1), (1, 2, 1), (0, 3, 1)],
            vec![(4, 1, 2), (2, 3, 5)],
        ] {
            let t = table(&entries);
            check_overlap_identities(&t).unwrap_or_else(|e| panic!("{}: {e}", t.describe()));
        }
    }

    #[test]
    fn overlap_identities_with_fractional_values() {
        let t = LambdaTable::from_entries([
            (3, 0, q_frac(1, 2)),
            (1, 3, q_frac(-2, 7)),
            (5, 1, q_int(4)),
        ])
        .unwrap();
        check_overlap_identities(&t).unwrap();
    }

    #[test]
    fn chart_poly_rejects_laurent() {
        assert!(ChartPoly::new(Chart::U1, Poly3::coord_pow(-1)).is_err());
        assert!(ChartPoly::new(Chart::U1, Poly3::coord_pow(2)).is_ok());
    }

    #[test]
    fn poly3_display() {
        let p = &Poly3::monomial(2, 2, 0, q_int(3)) + &Poly3::monomial(-1, 0, 1, q_frac(-1, 2));
        assert_eq!(
            p.display_with(["a", "v2", "v1"]),
            "-1/2*a^-1*v1 + 3*a^2*v2^2"
        );
    }
}
