//! Shared collection of glue-data tables used by the verification suite,
//! the selftest subcommand, and the benches. Every table is a valid
//! (-3,1) configuration with total degree at most 8: single necklaces,
//! mixed tables, fractional coefficients, and degenerate shapes with
//! r = 0 or s = 0.

use crate::geometry::LambdaTable;
use crate::rational::{q_frac, q_int};

pub fn corpus() -> Vec<LambdaTable> {
    fn int(entries: &[(u32, u32, i64)]) -> LambdaTable {
        LambdaTable::from_entries(entries.iter().map(|&(j, k, v)| (j, k, q_int(v)))).unwrap()
    }
    vec![
        int(&[(3, 0, 3)]),
        int(&[(0, 3, 1)]),
        int(&[(2, 2, 1)]),
        int(&[(3, 0, 1), (0, 3, 1)]),
        int(&[(2, 1, 1)]),
        int(&[(1, 2, 1)]),
        int(&[(4, 0, 1)]),
        int(&[(3, 1, 2)]),
        LambdaTable::from_entries([(1, 3, q_frac(1, 2))]).unwrap(),
        int(&[(2, 2, 1), (5, 0, 2)]),
        int(&[(3, 0, 1), (2, 1, 1), (1, 2, 1), (0, 3, 1)]),
        int(&[(4, 1, 1), (2, 3, 2)]),
        LambdaTable::from_entries([(3, 2, q_int(1)), (1, 4, q_frac(1, 3))]).unwrap(),
        int(&[(5, 0, 1), (0, 5, 1)]),
        int(&[(4, 2, 1)]),
        int(&[(3, 3, 1), (6, 0, 1)]),
        int(&[(2, 1, 2), (1, 3, 3)]),
        int(&[(3, 0, 5), (4, 2, 1), (0, 4, 7)]),
        int(&[(6, 2, 1), (2, 6, 1)]),
        int(&[(4, 4, 1)]),
        int(&[(7, 0, 1), (0, 7, 1)]),
        LambdaTable::from_entries([(5, 3, q_frac(1, 5)), (3, 5, q_int(2))]).unwrap(),
        int(&[(2, 1, 1), (0, 4, -1)]), // contracts: Jacobi algebra has dimension 9
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_large_and_valid() {
        let tables = corpus();
        assert!(tables.len() >= 20);
        for t in &tables {
            assert!(t.validate(true).is_empty(), "{}", t.describe());
            assert!(!t.is_empty());
            assert!(t.max_total_degree().unwrap() <= 8);
        }
        // the required calibration members
        let descs: Vec<String> = tables.iter().map(|t| t.describe()).collect();
        for want in ["{ (3,0): 3 }", "{ (0,3): 1 }", "{ (2,2): 1 }"] {
            assert!(descs.iter().any(|d| d == want), "missing {want}: {descs:?}");
        }
    }
}
