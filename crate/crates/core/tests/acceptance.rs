//! Acceptance gate: ten exact criteria, one test per criterion, each
//! printing its runtime and enforcing the budgeted wall-clock bound.
//! Everything is zero-tolerance equality over exact rationals.

use crepant_core::cech_dg::verify_identity_catalogue;
use crepant_core::corpus::corpus;
use crepant_core::geometry::classify_normal_bundle;
use crepant_core::jacobi::{self, comm_quotient_dims, nc_quotient_dims};
use crepant_core::kadeishvili::{check_stasheff, minimal_model, TransferState};
use crepant_core::necklace::{mono_sum, necklace_poly, trace_expansion};
use crepant_core::rational::{q_frac, q_int};
use crepant_core::resolution::{build_resolution, check_gluing};
use crepant_core::{CommPoly, LambdaTable, Letter, NormalBundle, Poly3, Q};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn timed(name: &str, limit: Duration, body: impl FnOnce()) {
    let t0 = Instant::now();
    body();
    let elapsed = t0.elapsed();
    println!(
        "{name}: pass ({:.3}s, budget {:.0?})",
        elapsed.as_secs_f64(),
        limit
    );
    assert!(
        elapsed < limit,
        "{name} exceeded its {limit:?} budget: {elapsed:?}"
    );
}

#[test]
fn criterion_01_necklace_calibration() {
    timed("01 necklace calibration", Duration::from_millis(1), || {
        let n = necklace_poly(4, 2).unwrap();
        assert_eq!(n.to_string(), "x^4*y^2 + x^3*y*x*y + 1/2*x^2*y*x^2*y");
        let ab = n.abelianize();
        assert_eq!(ab, CommPoly::monomial(4, 2, q_frac(5, 2)));
        assert_eq!(ab.to_string(), "5/2*x^4*y^2");
    });
}

#[test]
fn criterion_02_cyclic_differentiation() {
    timed("02 cyclic differentiation", Duration::from_secs(5), || {
        for j in 0..=10u32 {
            for k in 0..=10 - j {
                let target = mono_sum(j, k);
                let from_x = necklace_poly(j + 1, k)
                    .unwrap()
                    .cyclic_derivative(Letter::X);
                assert_eq!(from_x, target, "x-derivative at ({j},{k})");
                let from_y = necklace_poly(j, k + 1)
                    .unwrap()
                    .cyclic_derivative(Letter::Y);
                assert_eq!(from_y, target, "y-derivative at ({j},{k})");
            }
        }
    });
}

#[test]
fn criterion_03_normal_bundle_classifier() {
    timed(
        "03 normal bundle classifier",
        Duration::from_secs(1),
        || {
            for l20 in -2..=2i64 {
                for l11 in -2..=2i64 {
                    for l02 in -2..=2i64 {
                        let entries = [(2u32, 0u32, l20), (1, 1, l11), (0, 2, l02)];
                        let table = LambdaTable::from_entries(
                            entries
                                .iter()
                                .filter(|e| e.2 != 0)
                                .map(|&(j, k, v)| (j, k, q_int(v))),
                        )
                        .unwrap();
                        let got = classify_normal_bundle(&table).unwrap();
                        let want = if l20 == 0 && l11 == 0 && l02 == 0 {
                            NormalBundle::Minus3Plus1
                        } else if l11 * l11 - l20 * l02 == 0 {
                            NormalBundle::Minus2Zero
                        } else {
                            NormalBundle::Minus1Minus1
                        };
                        assert_eq!(got, want, "classifier at ({l20},{l11},{l02})");
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_04_overlap_identities() {
    timed("04 overlap identities", Duration::from_secs(10), || {
        let tables = corpus();
        assert!(tables.len() >= 20);
        for t in &tables {
            crepant_core::geometry::check_overlap_identities(t)
                .unwrap_or_else(|e| panic!("{}: {e}", t.describe()));
        }
    });
}

#[test]
fn criterion_05_resolution_and_gluing() {
    timed("05 resolution and gluing", Duration::from_secs(10), || {
        for t in &corpus() {
            let res = build_resolution(t).unwrap();
            let d1 = res.differential(1);
            let d2 = res.differential(2);
            let d3 = res.differential(3);
            assert!(
                d1.compose(d2).unwrap().is_zero(),
                "d1 d2 on {}",
                t.describe()
            );
            assert!(
                d2.compose(d3).unwrap().is_zero(),
                "d2 d3 on {}",
                t.describe()
            );
            for d in [d1, d2, d3] {
                check_gluing(d, t).unwrap_or_else(|e| panic!("{}: {e}", t.describe()));
            }
        }
        // every single-entry mutation must be detected
        let mutation_corpus = [
            LambdaTable::from_entries([(3, 0, q_int(3))]).unwrap(),
            LambdaTable::from_entries([(2, 2, q_int(1))]).unwrap(),
            LambdaTable::from_entries([(2, 1, q_int(1)), (0, 4, q_int(-1))]).unwrap(),
        ];
        for t in &mutation_corpus {
            let res = build_resolution(t).unwrap();
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
                                check_gluing(&m, t).is_err(),
                                "mutation d{n}({row},{col}) chart1={first_chart} on {}",
                                t.describe()
                            );
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_06_dg_axioms_and_identities() {
    timed(
        "06 DG axioms and identity catalogue",
        Duration::from_secs(60),
        || {
            for t in &corpus() {
                let report =
                    verify_identity_catalogue(t, 10).unwrap_or_else(|e| panic!("{}: {e}", t.describe()));
                assert!(
                    report.total() > 100,
                    "suspiciously small suite on {}",
                    t.describe()
                );
            }
        },
    );
}

static MODELS: OnceLock<Vec<(LambdaTable, TransferState)>> = OnceLock::new();

fn models() -> &'static [(LambdaTable, TransferState)] {
    MODELS.get_or_init(|| {
        corpus()
            .into_iter()
            .map(|t| {
                let st = minimal_model(&t, 8).unwrap_or_else(|e| panic!("{}: {e}", t.describe()));
                (t, st)
            })
            .collect()
    })
}

#[test]
fn criterion_07_transfer_matches_closed_formulas() {
    let models = models();
    timed(
        "07 transfer matches closed formulas",
        Duration::from_secs(120),
        || {
            for (t, state) in models {
                let checked = state
                    .verify_closed_formula()
                    .unwrap_or_else(|e| panic!("{}: {e}", t.describe()));
                assert!(checked > 0);
            }
        },
    );
}

#[test]
fn criterion_08_a_infinity_relations() {
    let models = models();
    timed("08 A-infinity relations", Duration::from_secs(60), || {
        for (t, state) in models {
            let table = state.table();
            let n = check_stasheff(&table, 8).unwrap_or_else(|e| panic!("{}: {e}", t.describe()));
            assert!(n > 0);
        }
    });
}

#[test]
fn criterion_09_jacobi_dimensions() {
    timed("09 Jacobi dimensions", Duration::from_secs(60), || {
        let empty = LambdaTable::from_entries(Vec::<(u32, u32, Q)>::new()).unwrap();
        let free = nc_quotient_dims(&empty, 4).unwrap();
        assert_eq!(free.cumulative_dim, 31);
        assert_eq!(free.per_degree_dims, vec![1, 2, 4, 8, 16]);

        // words avoiding the factor xx, counted directly
        let cubic = LambdaTable::from_entries([(3, 0, q_int(3))]).unwrap();
        let r = nc_quotient_dims(&cubic, 4).unwrap();
        assert_eq!(r.cumulative_dim, 19);
        for (l, &dim) in r.per_degree_dims.iter().enumerate() {
            // letter i of word m is x when bit i is clear; forbid adjacent x's
            let count = (0u32..1 << l)
                .filter(|m| (0..l.saturating_sub(1)).all(|i| (m >> i) & 3 != 0))
                .count();
            assert_eq!(dim, count, "no-xx count at degree {l}");
        }

        let tables = corpus();
        for idx in [2usize, 4, 10, 12, 22] {
            let t = &tables[idx];
            let nc = nc_quotient_dims(t, 6).unwrap();
            assert_eq!(
                nc.per_degree_dims,
                jacobi::oracle::nc_dims_dense(t, 6).unwrap(),
                "nc dims vs dense oracle on {}",
                t.describe()
            );
            let cm = comm_quotient_dims(t, 6).unwrap();
            assert_eq!(
                cm.per_degree_dims,
                jacobi::oracle::comm_dims_dense(t, 6).unwrap(),
                "commutative dims vs dense oracle on {}",
                t.describe()
            );
        }
    });
}

#[test]
fn criterion_10_trace_expansion() {
    timed("10 trace expansion", Duration::from_secs(5), || {
        for j in 0..=10u32 {
            for k in 0..=10 - j {
                if j + k == 0 {
                    continue;
                }
                let lhs = trace_expansion(j, k);
                let rhs = necklace_poly(j, k)
                    .unwrap()
                    .scale(&q_int((j + k) as i64))
                    .cyclic_normal_form();
                assert_eq!(lhs, rhs, "trace expansion at ({j},{k})");
            }
        }
    });
}
