//! Small named instances.

use crate::tree::{build_tree, EdgeRecord, RootedTree};

/// The ten-node worked example: root 1 with branches towards 2, 5 and 7,
/// every upgraded length equal to 10.
///
/// Base lengths are chosen so that every chain value in the worked tables is
/// reproduced exactly (edge 3 carries 7, the 5-6 chain is 1 then 8).
pub const EXAMPLE1_TEXT: &str = "\
# worked example: 10 nodes, u = 10 everywhere
10 1
2 1 6 10
3 2 7 10
4 2 4 10
5 1 1 10
6 5 8 10
7 1 4 10
8 7 3 10
9 7 4 10
10 9 5 10
";

pub fn example1_records() -> Vec<EdgeRecord> {
    [
        (2, 1, 6),
        (3, 2, 7),
        (4, 2, 4),
        (5, 1, 1),
        (6, 5, 8),
        (7, 1, 4),
        (8, 7, 3),
        (9, 7, 4),
        (10, 9, 5),
    ]
    .into_iter()
    .map(|(c, p, w)| EdgeRecord::new(c, p, w, 10))
    .collect()
}

pub fn example1() -> RootedTree {
    build_tree(&example1_records(), 1).expect("example 1 is a valid tree")
}
