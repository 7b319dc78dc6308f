use std::sync::Arc;

use peisert_core::classify::census;
use peisert_core::fields::make_tower;
use peisert_core::plane::TowerBasis;

#[test]
fn census_q7() {
    let b = TowerBasis::new(Arc::new(make_tower(7, 1, None).unwrap())).unwrap();
    let rows = census(&b, 3..=6, None).unwrap();
    let snap: Vec<(u32, u32, u32)> = rows.iter().map(|r| (r.graphs, r.strict_ekr, r.without)).collect();
    assert_eq!(snap, vec![(1, 1, 0), (2, 2, 0), (1, 0, 1), (1, 0, 1)]);
}

#[test]
fn census_q9() {
    let b = TowerBasis::new(Arc::new(make_tower(3, 2, None).unwrap())).unwrap();
    let rows = census(&b, 3..=7, None).unwrap();
    let snap: Vec<(u32, u32, u32)> = rows.iter().map(|r| (r.graphs, r.strict_ekr, r.without)).collect();
    assert_eq!(snap, vec![(1, 1, 0), (2, 1, 1), (2, 1, 1), (2, 0, 2), (1, 0, 1)]);
}

#[test]
fn census_q8() {
    let b = TowerBasis::new(Arc::new(make_tower(2, 3, None).unwrap())).unwrap();
    let rows = census(&b, 3..=6, None).unwrap();
    let snap: Vec<(u32, u32, u32)> = rows.iter().map(|r| (r.graphs, r.strict_ekr, r.without)).collect();
    assert_eq!(snap, vec![(1, 1, 0), (1, 1, 0), (1, 0, 1), (1, 0, 1)]);
}

#[test]
fn census_q11() {
    let b = TowerBasis::new(Arc::new(make_tower(11, 1, None).unwrap())).unwrap();
    let rows = census(&b, 3..=9, None).unwrap();
    let snap: Vec<(u32, u32, u32)> = rows.iter().map(|r| (r.graphs, r.strict_ekr, r.without)).collect();
    assert_eq!(
        snap,
        vec![(1, 1, 0), (2, 2, 0), (2, 2, 0), (4, 4, 0), (2, 1, 1), (2, 1, 1), (1, 0, 1)]
    );
}

#[test]
fn census_q13() {
    let b = TowerBasis::new(Arc::new(make_tower(13, 1, None).unwrap())).unwrap();
    let rows = census(&b, 3..=11, None).unwrap();
    let snap: Vec<(u32, u32, u32)> = rows.iter().map(|r| (r.graphs, r.strict_ekr, r.without)).collect();
    assert_eq!(
        snap,
        vec![
            (1, 1, 0), (3, 3, 0), (3, 3, 0), (5, 5, 0), (5, 5, 0),
            (5, 4, 1), (3, 2, 1), (3, 0, 3), (1, 0, 1)
        ]
    );
}
