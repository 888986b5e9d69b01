use pathfinding::kuhn_munkres::kuhn_munkres_min;
use pathfinding::matrix::Matrix;
use proptest::prelude::*;
use tropsym::{trop_det_full, TropMatrix, TropValue};

fn square(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-20i64..20, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn determinant_is_the_optimal_assignment(rows in square(7)) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let det = trop_det_full(&TropMatrix::from_ints(&refs).unwrap()).unwrap();
        let (cost, _) = kuhn_munkres_min(&Matrix::from_rows(rows.clone()).unwrap());
        prop_assert_eq!(det.value, TropValue::int(cost));
        for sigma in &det.realizers {
            let sum: i64 = (0..rows.len()).map(|i| rows[i][sigma.apply(i)]).sum();
            prop_assert_eq!(sum, cost);
        }
    }
}
