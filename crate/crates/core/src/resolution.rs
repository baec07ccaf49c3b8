//! The locally free resolution of the structure sheaf of the curve.
//!
//! On the threefold covered by the two charts, the curve admits a length-3
//! resolution by sums of line bundles. Each term is recorded by its twist
//! vector (the powers of the transition function `a` used to glue the chart
//! trivialisations), and each differential by a pair of matrices, one per
//! chart. Entries that genuinely live on the other chart (`b^(2-r) w1` seen
//! from the first chart, `a^(2-s) v1` from the second) are stored
//! pre-expanded as honest polynomials using the overlap relation
//!
//! ```text
//! b^(2-r) w1 = a^(r+1) v1 + v2^(t-1) A
//! a^(2-s) v1 = b^(s+1) w1 - w2^(t-1) B
//! ```
//!
//! `check_gluing` verifies that the two chart matrices agree on the overlap
//! after twisting, which pins every entry down exactly.

use crate::geometry::{
    glue_u2_poly, invariants, Chart, GeometryError, GeometryInvariants, LambdaTable, Poly3,
};
use crate::matrix::Mat;
use crate::rational::q_int;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResolutionError {
    #[error("cannot compose {outer} after {inner}: {outer} has source twists {expected:?} but {inner} has target twists {got:?}")]
    TwistMismatch {
        outer: String,
        inner: String,
        expected: Vec<i64>,
        got: Vec<i64>,
    },
    #[error("gluing fails for {name} at entry ({row},{col}): transported second-chart value {transported} != first-chart value {chart}")]
    GluingFailed {
        name: String,
        row: usize,
        col: usize,
        transported: String,
        chart: String,
    },
}

/// Twists of a sum of line bundles: entry `e` means the chart
/// trivialisations are glued by multiplication with `a^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistVector(pub Vec<i64>);

impl TwistVector {
    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

/// A morphism of twisted sums, given by one matrix per chart. Shapes are
/// `target.rank() x source.rank()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafMorphism {
    pub label: String,
    pub source: TwistVector,
    pub target: TwistVector,
    pub mat_u1: Mat,
    pub mat_u2: Mat,
}

impl SheafMorphism {
    /// `self` after `inner` (matrix product on each chart). The twist
    /// vectors must match up.
    pub fn compose(&self, inner: &SheafMorphism) -> Result<SheafMorphism, ResolutionError> {
        if self.source != inner.target {
            return Err(ResolutionError::TwistMismatch {
                outer: self.label.clone(),
                inner: inner.label.clone(),
                expected: self.source.0.clone(),
                got: inner.target.0.clone(),
            });
        }
        Ok(SheafMorphism {
            label: format!("{}.{}", self.label, inner.label),
            source: inner.source.clone(),
            target: self.target.clone(),
            mat_u1: &self.mat_u1 * &inner.mat_u1,
            mat_u2: &self.mat_u2 * &inner.mat_u2,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.mat_u1.is_zero() && self.mat_u2.is_zero()
    }
}

/// Move a second-chart matrix onto the overlap in first-chart coordinates:
/// `diag(a^target) . sub(m) . diag(a^-source)`, Laurent in `a`.
pub fn transport_to_overlap(
    m: &Mat,
    source: &TwistVector,
    target: &TwistVector,
    table: &LambdaTable,
) -> Mat {
    let sub = m.map(|p| glue_u2_poly(p, table));
    let left: Vec<Poly3> = target.0.iter().map(|&e| Poly3::coord_pow(e)).collect();
    let right: Vec<Poly3> = source.0.iter().map(|&e| Poly3::coord_pow(-e)).collect();
    sub.diag_left(&left).diag_right(&right)
}

/// Check that the two chart matrices of `d` agree on the overlap:
/// `diag(a^target) . sub(mat_u2) == mat_u1 . diag(a^source)` entry by entry,
/// reporting the first offending entry.
pub fn check_gluing(d: &SheafMorphism, table: &LambdaTable) -> Result<(), ResolutionError> {
    let left: Vec<Poly3> = d.target.0.iter().map(|&e| Poly3::coord_pow(e)).collect();
    let right: Vec<Poly3> = d.source.0.iter().map(|&e| Poly3::coord_pow(e)).collect();
    let lhs = d.mat_u2.map(|p| glue_u2_poly(p, table)).diag_left(&left);
    let rhs = d.mat_u1.diag_right(&right);
    let vars = Chart::U1.var_names();
    for row in 0..lhs.rows() {
        for col in 0..lhs.cols() {
            if lhs[(row, col)] != rhs[(row, col)] {
                return Err(ResolutionError::GluingFailed {
                    name: d.label.clone(),
                    row,
                    col,
                    transported: lhs[(row, col)].display_with(vars),
                    chart: rhs[(row, col)].display_with(vars),
                });
            }
        }
    }
    Ok(())
}

/// The full length-3 complex `E3 -> E2 -> E1 -> E0`.
#[derive(Clone, Debug)]
pub struct ResolutionComplex {
    pub invariants: GeometryInvariants,
    /// Twists of `E0, E1, E2, E3` in homological order.
    pub twists: [TwistVector; 4],
    /// `d[n-1]` is the differential `E_n -> E_(n-1)`.
    pub d: [SheafMorphism; 3],
}

impl ResolutionComplex {
    pub fn differential(&self, n: usize) -> &SheafMorphism {
        &self.d[n - 1]
    }
}

fn mono(e0: i64, e2: u32, e1: u32, c: i64) -> Poly3 {
    Poly3::monomial(e0, e2, e1, q_int(c))
}

/// Build the resolution attached to a coefficient table satisfying the
/// `(-3,1)` setup.
pub fn build_resolution(table: &LambdaTable) -> Result<ResolutionComplex, GeometryError> {
    let inv = invariants(table)?;
    let (t, r, s) = (inv.t, inv.r, inv.s);
    let (ri, si) = (r as i64, s as i64);

    let e0 = TwistVector(vec![0]);
    let e1 = TwistVector(vec![2 - si, -1, 2 - ri]);
    let e2 = TwistVector(vec![1 - ri - si, 1 - si, 1 - ri]);
    let e3 = TwistVector(vec![-ri - si]);

    // overlap entries, pre-expanded
    let cross_u1 = &mono(ri + 1, 0, 1, 1) + &inv.a_tail_from(t, 1); // b^(2-r) w1
    let cross_u2 = &mono(si + 1, 0, 1, 1) - &inv.b_tail_from(t, 1); // a^(2-s) v1
    let tail_u1 = inv.a_tail_from(t, 2); // v2^(t-2) A
    let tail_u2 = inv.b_tail_from(t, 2); // w2^(t-2) B

    let d1 = SheafMorphism {
        label: "d1".into(),
        source: e1.clone(),
        target: e0.clone(),
        mat_u1: Mat::from_rows(vec![vec![
            mono(0, 0, 1, 1),
            mono(0, 1, 0, 1),
            cross_u1.clone(),
        ]]),
        mat_u2: Mat::from_rows(vec![vec![
            cross_u2.clone(),
            mono(0, 1, 0, 1),
            mono(0, 0, 1, 1),
        ]]),
    };

    let d2 = SheafMorphism {
        label: "d2".into(),
        source: e2.clone(),
        target: e1.clone(),
        mat_u1: Mat::from_rows(vec![
            vec![mono(ri + 1, 0, 0, 1), mono(0, 1, 0, 1), Poly3::zero()],
            vec![tail_u1, mono(0, 0, 1, -1), cross_u1],
            vec![mono(0, 0, 0, -1), Poly3::zero(), mono(0, 1, 0, -1)],
        ]),
        mat_u2: Mat::from_rows(vec![
            vec![Poly3::one(), mono(0, 1, 0, 1), Poly3::zero()],
            vec![tail_u2, -&cross_u2, mono(0, 0, 1, 1)],
            vec![mono(si + 1, 0, 0, -1), Poly3::zero(), mono(0, 1, 0, -1)],
        ]),
    };

    let d3 = SheafMorphism {
        label: "d3".into(),
        source: e3.clone(),
        target: e2.clone(),
        mat_u1: Mat::from_rows(vec![
            vec![mono(0, 1, 0, 1)],
            vec![mono(ri + 1, 0, 0, -1)],
            vec![mono(0, 0, 0, -1)],
        ]),
        mat_u2: Mat::from_rows(vec![
            vec![mono(0, 1, 0, 1)],
            vec![mono(0, 0, 0, -1)],
            vec![mono(si + 1, 0, 0, -1)],
        ]),
    };

    Ok(ResolutionComplex {
        invariants: inv,
        twists: [e0, e1, e2, e3],
        d: [d1, d2, d3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::table;
    use crate::rational::q_frac;

    fn sample_tables() -> Vec<LambdaTable> {
        vec![
            table(&[(3, 0, 3)]),
            table(&[(0, 3, 1)]),
            table(&[(2, 2, 1)]),
            table(&[(3, 0, 1), (0, 3, 1)]),
            table(&[(3, 0, 1), (2, 1, 1), (1, 2, 1), (0, 3, 1)]),
            LambdaTable::from_entries([(5, 3, q_frac(1, 5)), (3, 5, q_frac(2, 1))]).unwrap(),
        ]
    }

    #[test]
    fn twist_calibrations() {
        let res = build_resolution(&table(&[(3, 0, 3)])).unwrap(); // (t,r,s)=(3,0,3)
        assert_eq!(res.twists[0], TwistVector(vec![0]));
        assert_eq!(res.twists[1], TwistVector(vec![-1, -1, 2]));
        assert_eq!(res.twists[2], TwistVector(vec![-2, -2, 1]));
        assert_eq!(res.twists[3], TwistVector(vec![-3]));
        let res = build_resolution(&table(&[(2, 2, 1)])).unwrap(); // (t,r,s)=(4,2,2)
        assert_eq!(res.twists[1], TwistVector(vec![0, -1, 0]));
        assert_eq!(res.twists[2], TwistVector(vec![-3, -1, -1]));
        assert_eq!(res.twists[3], TwistVector(vec![-4]));
    }

    #[test]
    fn frozen_entries_for_cubic_table() {
        // table {lambda_30 = 3}: A = 3, t = 3, r = 0, s = 3
        let res = build_resolution(&table(&[(3, 0, 3)])).unwrap();
        let d1 = res.differential(1);
        // b^2 w1 = a v1 + 3 v2^2
        assert_eq!(d1.mat_u1[(0, 2)], &mono(1, 0, 1, 1) + &mono(0, 2, 0, 3));
        // a^(-1) v1 = b^4 w1 - 3 w2^2
        assert_eq!(d1.mat_u2[(0, 0)], &mono(4, 0, 1, 1) - &mono(0, 2, 0, 3));
        let d2 = res.differential(2);
        assert_eq!(d2.mat_u1[(1, 0)], mono(0, 1, 0, 3)); // v2^(t-2) A = 3 v2
        assert_eq!(d2.mat_u2[(1, 0)], mono(0, 1, 0, 3)); // w2^(t-2) B = 3 w2
        assert_eq!(d2.mat_u1[(0, 0)], mono(1, 0, 0, 1)); // a^(r+1)
        assert_eq!(d2.mat_u2[(2, 0)], mono(4, 0, 0, -1)); // -b^(s+1)
    }

    #[test]
    fn d_squared_vanishes() {
        for t in sample_tables() {
            let res = build_resolution(&t).unwrap();
            let d1d2 = res.differential(1).compose(res.differential(2)).unwrap();
            let d2d3 = res.differential(2).compose(res.differential(3)).unwrap();
            assert!(d1d2.is_zero(), "d1 d2 != 0 for {}", t.describe());
            assert!(d2d3.is_zero(), "d2 d3 != 0 for {}", t.describe());
        }
    }

    #[test]
    fn gluing_holds() {
        for t in sample_tables() {
            let res = build_resolution(&t).unwrap();
            for n in 1..=3 {
                check_gluing(res.differential(n), &t)
                    .unwrap_or_else(|e| panic!("{e} for {}", t.describe()));
            }
        }
    }

    #[test]
    fn compose_rejects_mismatched_twists() {
        let res = build_resolution(&table(&[(3, 0, 3)])).unwrap();
        let err = res
            .differential(1)
            .compose(res.differential(3))
            .unwrap_err();
        assert!(matches!(err, ResolutionError::TwistMismatch { .. }));
    }

    #[test]
    fn single_entry_mutations_break_gluing() {
        for t in [table(&[(3, 0, 3)]), table(&[(2, 2, 1)])] {
            let res = build_resolution(&t).unwrap();
            for n in 1..=3 {
                let d = res.differential(n);
                for row in 0..d.mat_u1.rows() {
                    for col in 0..d.mat_u1.cols() {
                        for first_chart in [true, false] {
                            let mut m = d.clone();
                            let target = if first_chart {
                                &mut m.mat_u1
                            } else {
                                &mut m.mat_u2
                            };
                            target[(row, col)] = &target[(row, col)] + &Poly3::one();
                            assert!(
                                check_gluing(&m, &t).is_err(),
                                "mutation at {n}:({row},{col}) chart1={first_chart} not caught for {}",
                                t.describe()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn transport_matches_chart_matrix() {
        let t = table(&[(3, 0, 1), (0, 3, 1)]);
        let res = build_resolution(&t).unwrap();
        for n in 1..=3 {
            let d = res.differential(n);
            let moved = transport_to_overlap(&d.mat_u2, &d.source, &d.target, &t);
            assert_eq!(moved, d.mat_u1, "transport of d{n}");
        }
    }
}
