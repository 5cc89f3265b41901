use finegrad::enumerate::{Options, Provenance};
use finegrad::octonion_d4::d4_table;

fn shape(free: usize, torsion: &[i64], ty: &[usize]) -> (usize, Vec<i64>, Vec<usize>) {
    (free, torsion.to_vec(), ty.to_vec())
}

#[test]
fn seventeen_rows() {
    let rows = d4_table(&Options::default()).unwrap();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows.iter().map(|r| r.index).collect::<Vec<_>>(), (1..=17).collect::<Vec<_>>());
    assert!(rows.iter().all(|r| r.report.verified));

    let merged: Vec<_> = rows.iter().filter(|r| r.report.provenance == Provenance::Merged).collect();
    assert_eq!(merged.len(), 1);
    assert_eq!(merged[0].report.torsion, vec![2, 2, 2, 4]);
    assert_eq!(merged[0].report.type_, vec![24, 2]);
    assert!(merged[0].source.starts_with("merged: "));
    let sibling = rows.iter().filter(|r| r.report.torsion == [2, 2, 2, 4] && r.report.type_ == [25, 0, 1]).count();
    assert_eq!(sibling, 1);

    let triality: Vec<_> = rows.iter().filter(|r| r.report.provenance == Provenance::Triality).collect();
    let got: Vec<_> =
        triality.iter().map(|r| shape(r.report.free_rank, &r.report.torsion, &r.report.type_)).collect();
    assert_eq!(got, vec![shape(2, &[3], &[26, 1]), shape(0, &[2, 2, 6], &[14, 7]), shape(0, &[3, 3, 3], &[24, 2])]);
    assert_eq!(triality.iter().map(|r| r.source.as_str()).collect::<Vec<_>>(), ["triality-a", "triality-b", "triality-c"]);
}

#[test]
fn every_row_spans_so8() {
    for r in d4_table(&Options::default()).unwrap() {
        let total: usize = r.report.type_.iter().enumerate().map(|(i, c)| (i + 1) * c).sum();
        assert_eq!(total, 28, "row {}", r.index);
    }
}
