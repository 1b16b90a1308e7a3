mod common;

use common::pr;
use quatord::localclass::{closed_form_count, count_classes, enumerate_classes};
use quatord::quadforms::LocalKind;
use quatord::{OrderCategory, Side};

const CATEGORIES: [OrderCategory; 3] = [OrderCategory::Bass, OrderCategory::Gorenstein, OrderCategory::All];
const SIDES: [Side; 2] = [Side::Division, Side::Matrix];

fn kinds() -> Vec<LocalKind> {
    vec![LocalKind::NonDyadic(pr(3)), LocalKind::NonDyadic(pr(5)), LocalKind::NonDyadic(pr(7)), LocalKind::Dyadic]
}

#[test]
fn enumeration_matches_tables_up_to_12() {
    for kind in kinds() {
        for n in 0..=12 {
            for c in CATEGORIES {
                for s in SIDES {
                    let e = enumerate_classes(kind, n, c, s).unwrap().len() as u64;
                    assert_eq!(e, closed_form_count(kind, n, c, s).unwrap(), "{kind:?} n={n} {c} {s}");
                }
            }
        }
    }
}

#[test]
fn recursion_t_equals_g_plus_shifted_t() {
    for kind in kinds() {
        for n in 3..=12 {
            for s in SIDES {
                let t = |n| count_classes(kind, n, OrderCategory::All, s).unwrap();
                let g = count_classes(kind, n, OrderCategory::Gorenstein, s).unwrap();
                assert_eq!(t(n), g + t(n - 3), "{kind:?} n={n} {s}");
            }
        }
    }
}

#[test]
fn published_cells() {
    let nd = LocalKind::NonDyadic(pr(3));
    let all = OrderCategory::All;
    assert_eq!(count_classes(nd, 5, all, Side::Division).unwrap(), 6);
    assert_eq!(count_classes(nd, 3, all, Side::Matrix).unwrap(), 4);
    for n in [3, 5, 7, 9, 11] {
        assert_eq!(count_classes(nd, n, OrderCategory::Bass, Side::Division).unwrap(), 3);
    }
    let dy = LocalKind::Dyadic;
    assert_eq!(count_classes(dy, 5, all, Side::Division).unwrap(), 6);
    assert_eq!(count_classes(dy, 5, all, Side::Matrix).unwrap(), 8);
    assert_eq!(count_classes(dy, 7, all, Side::Division).unwrap(), 13);
    assert_eq!(count_classes(dy, 7, all, Side::Matrix).unwrap(), 17);
    assert_eq!(count_classes(dy, 9, all, Side::Division).unwrap(), 24);
    assert_eq!(count_classes(dy, 11, all, Side::Division).unwrap(), 40);
}

#[test]
fn hereditary_counts() {
    for kind in kinds() {
        for s in SIDES {
            assert_eq!(count_classes(kind, 1, OrderCategory::All, s).unwrap(), 1);
        }
    }
}
