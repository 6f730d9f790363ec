//! Exact k-nearest-neighbour queries under Euclidean and heterogeneous
//! distances.

use rebalance::neighbors::{build_index, DistanceKind};
use rebalance::{ColumnKind, Dataset};

fn main() -> rebalance::Result<()> {
    let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 3.0], vec![1.0, 1.0]];
    let data = Dataset::continuous(rows, vec![0, 0, 1, 1, 0])?;
    let all = data.all_rows();
    let index = build_index(&data, &all, DistanceKind::Euclidean, None)?;
    for n in index.knn(&[0.9, 0.2], 3)? {
        println!("row {} at {:.3}", n.row, n.distance);
    }

    // a nominal column costs the median continuous deviation per mismatch
    let mixed = Dataset::new(
        vec![vec![0.0, 0.0], vec![0.1, 1.0], vec![2.0, 0.0], vec![0.2, 0.0]],
        vec![0, 1, 0, 1],
        vec![ColumnKind::Continuous, ColumnKind::Nominal],
    )?;
    let rows = mixed.all_rows();
    let kind = DistanceKind::for_dataset(&mixed, &rows);
    println!("{kind:?}");
    let index = build_index(&mixed, &rows, kind, None)?;
    println!("neighbours of row 0: {:?}", index.knn_of_row(0, 2)?.iter().map(|n| n.row).collect::<Vec<_>>());
    Ok(())
}
