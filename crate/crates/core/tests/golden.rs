// The fast tables regenerate byte-for-byte; the exceptions table is
// compared in the acceptance suite.

use primnormal::tables::{diff, to_csv, Table};

fn round_trip(t: Table) {
    let (h, rows) = t.build().unwrap();
    let d = diff(t.golden(), &to_csv(&h, &rows));
    assert!(d.is_empty(), "{d:#?}");
}

#[test]
fn cohen_pairs() {
    round_trip(Table::CohenPairs);
}

#[test]
fn c_ps() {
    round_trip(Table::CPs);
}

#[test]
fn golden_files_parse() {
    for t in [Table::CohenPairs, Table::CPs, Table::Exceptions] {
        let mut r = csv::Reader::from_reader(t.golden().as_bytes());
        let width = r.headers().unwrap().len();
        assert!(r.records().all(|rec| rec.unwrap().len() == width));
    }
}
