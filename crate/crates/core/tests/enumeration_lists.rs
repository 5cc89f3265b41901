//! Universal groups and types of the enumerated gradings, against the worked lists.

use finegrad::enumerate::{fine_gradings_so, fine_gradings_sp, fine_gradings_sl, Enumeration, Options};

type Shape = (usize, Vec<i64>);

fn shapes(e: &Enumeration) -> Vec<Shape> {
    let mut v: Vec<Shape> = e.classes.iter().map(|c| (c.report.free_rank, c.report.torsion.clone())).collect();
    v.sort();
    v
}

fn expect(rows: &[(usize, &[i64])]) -> Vec<Shape> {
    let mut v: Vec<Shape> = rows.iter().map(|(r, t)| (*r, t.to_vec())).collect();
    v.sort();
    v
}

#[test]
fn sl8_groups() {
    let e = fine_gradings_sl(8, &Options::default()).unwrap();
    let want = expect(&[
        (7, &[]),
        (3, &[2, 2]),
        (1, &[4, 4]),
        (0, &[2, 2, 4, 4]),
        (0, &[8, 8]),
        (4, &[2]),
        (3, &[2, 2]),
        (2, &[2, 2, 2, 2]),
        (1, &[2; 6]),
        (0, &[2; 8]),
        (2, &[2, 2, 2]),
        (1, &[2, 2, 2, 2]),
        (1, &[2, 2, 4]),
        (0, &[2; 6]),
        (0, &[2, 2, 2, 2, 4]),
        (0, &[2, 2, 2, 2, 4]),
        (0, &[2, 2, 4, 4]),
        (0, &[4, 4, 4]),
        (1, &[2; 5]),
        (0, &[2, 2, 2, 2, 4]),
        (0, &[2; 7]),
    ]);
    assert_eq!(shapes(&e), want);
    assert!(e.classes.iter().all(|c| c.report.verified));
    let dims: Vec<usize> = e.classes.iter().map(|c| c.report.type_.iter().enumerate().map(|(i, n)| (i + 1) * n).sum()).collect();
    assert!(dims.iter().all(|&d| d == 63));
}

#[test]
fn sp8_groups() {
    let e = fine_gradings_sp(8, &Options::default()).unwrap();
    let want = expect(&[(4, &[]), (2, &[2, 2]), (1, &[2, 2, 2]), (0, &[2; 5]), (1, &[2; 4]), (0, &[2, 2, 2, 4]), (0, &[2; 6])]);
    assert_eq!(shapes(&e), want);
}

#[test]
fn so8_premerge_groups_and_types() {
    let e = fine_gradings_so(8, &Options { premerge: true, ..Default::default() }).unwrap();
    let mut got: Vec<(Shape, Vec<usize>)> =
        e.classes.iter().map(|c| ((c.report.free_rank, c.report.torsion.clone()), c.report.type_.clone())).collect();
    got.sort();
    let rows: [(usize, &[i64], &[usize]); 15] = [
        (4, &[], &[24, 0, 0, 1]),
        (3, &[2], &[25, 0, 1]),
        (2, &[2, 2, 2], &[26, 1]),
        (1, &[2; 5], &[28]),
        (0, &[2; 7], &[28]),
        (2, &[2, 2], &[20, 4]),
        (1, &[2, 2, 2], &[25, 0, 1]),
        (1, &[2, 4], &[24, 2]),
        (0, &[2; 5], &[24, 0, 0, 1]),
        (0, &[2, 2, 2, 4], &[25, 0, 1]),
        (0, &[2, 2, 2, 4], &[24, 2]),
        (0, &[2, 2, 2, 4], &[24, 2]),
        (0, &[2, 4, 4], &[26, 1]),
        // [(Q^2, t), ()] and [(Q^3, t), (1)]: 28 one-dimensional components each. The
        // bracket relations leave one more Z_2 character than the diagonal group of
        // the involution accounts for (Z x Z_2^4 and Z_2^6 there).
        (1, &[2; 5], &[28]),
        (0, &[2; 7], &[28]),
    ];
    let mut want: Vec<(Shape, Vec<usize>)> = rows.iter().map(|(r, t, ty)| ((*r, t.to_vec()), ty.to_vec())).collect();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn odd_orthogonal_counts() {
    assert_eq!(fine_gradings_so(5, &Options::default()).unwrap().count(), 3);
    assert_eq!(fine_gradings_so(7, &Options::default()).unwrap().count(), 4);
}

#[test]
fn sp6_uses_small_division_algebras() {
    let e = fine_gradings_sp(6, &Options::default()).unwrap();
    assert!(e.classes.iter().all(|c| c.report.division == "F" || c.report.division == "Q"));
    assert_eq!(e.count_tag(), "unverified count");
}

#[test]
fn deterministic_across_workers() {
    let a = fine_gradings_sl(6, &Options { workers: 1, ..Default::default() }).unwrap();
    let b = fine_gradings_sl(6, &Options { workers: 4, ..Default::default() }).unwrap();
    let key = |e: &Enumeration| e.classes.iter().map(|c| (c.report.tuple.clone(), c.report.group.clone())).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
    let tuples: std::collections::HashSet<_> = a.classes.iter().map(|c| (c.report.division.clone(), c.report.tuple.clone())).collect();
    assert_eq!(tuples.len(), a.count());
}
