use num_bigint::BigInt;
use sperner_core::bounds::{scan_table1, scan_table2, table1_csv, table2_csv};

const TABLE1: &str = include_str!("../../cli/tests/golden/table1.csv");
const TABLE2: &str = include_str!("../../cli/tests/golden/table2.csv");

fn golden_rows() -> Vec<(u64, u64, u64, u64, u64)> {
    TABLE1
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<u64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1], v[2], v[3], v[4])
        })
        .collect()
}

#[test]
fn exact_scan_matches_golden_up_to_1000() {
    let rows = scan_table1(1000);
    let golden = golden_rows();
    let got: Vec<(u64, u64, BigInt)> = rows.iter().map(|r| (r.n, r.k, r.sp.clone())).collect();
    let want: Vec<(u64, u64, BigInt)> = golden.iter().map(|g| (g.0, g.1, g.4.into())).collect();
    assert_eq!(got, want);
    for (row, g) in rows.iter().zip(&golden) {
        assert!(row.witnesses.contains(&(g.2, g.3)), "listed (m,h) for ({}, {}) not a witness", g.0, g.1);
    }
}

#[test]
fn golden_witnesses_are_first() {
    let rows = scan_table1(1000);
    assert_eq!(table1_csv(&rows), TABLE1);
}

#[test]
fn explicit_thresholds_match_golden() {
    let rows: Vec<_> = (3..=10).map(|r| scan_table2(r).unwrap()).collect();
    assert_eq!(table2_csv(&rows), TABLE2);
}
