#![allow(dead_code)]

use s6v_core::lattice::{HeightField, Model, PathEnsemble};

/// A fixed 7x7 upright configuration with known height tables, as occupied
/// edges: horizontal edges right of `(x, y)` and vertical edges above it.
pub fn reference_upright() -> PathEnsemble {
    let mut e = PathEnsemble::empty(Model::S6v, 7, 7, 1).unwrap();
    for y in 1..=7 {
        e.set_left(1, y, true);
    }
    let horizontal: &[(std::ops::RangeInclusive<usize>, usize)] =
        &[(1..=3, 1), (1..=1, 3), (4..=7, 3), (1..=3, 4), (1..=2, 5), (1..=7, 6), (1..=4, 7)];
    for (xs, y) in horizontal {
        for x in xs.clone() {
            e.set_h(1, x, *y, true);
        }
    }
    set_vertical(&mut e);
    e
}

/// Its horizontal complement.
pub fn reference_complemented() -> PathEnsemble {
    let mut e = PathEnsemble::empty(Model::Cs6v, 7, 7, 1).unwrap();
    let horizontal: &[(std::ops::RangeInclusive<usize>, usize)] =
        &[(4..=7, 1), (1..=7, 2), (2..=3, 3), (4..=7, 4), (3..=7, 5), (5..=7, 7)];
    for (xs, y) in horizontal {
        for x in xs.clone() {
            e.set_h(1, x, *y, true);
        }
    }
    set_vertical(&mut e);
    e
}

/// Printed height tables, rows `y = 0..=7`, digits for `x = 0..=7`.
pub const REFERENCE_H_LOWER: [&str; 8] =
    ["00000000", "11110000", "21110000", "32111111", "43221111", "54321111", "65432222", "76543222"];
pub const REFERENCE_H_UPPER: [&str; 8] =
    ["00000000", "00001111", "01112222", "01222222", "01223333", "01234444", "01234444", "01234555"];

pub fn table(rows: &[&str; 8]) -> HeightField {
    HeightField::from_fn(7, 7, |x, y| rows[y].as_bytes()[x] as i64 - b'0' as i64)
}

fn set_vertical(e: &mut PathEnsemble) {
    for (x, ys) in [(4, 1..=2), (4, 4..=7), (1, 2..=7), (2, 3..=7), (3, 5..=7), (5, 7..=7)] {
        for y in ys {
            e.set_v(1, x, y, true);
        }
    }
}
