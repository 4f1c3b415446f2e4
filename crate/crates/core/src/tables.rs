//! Regeneration of the exception tables and comparison against the golden
//! copies shipped in `golden/`.

use serde::Serialize;

use crate::error::Result;
use crate::sieve::{self, Verdict};

pub const GOLDEN_COHEN_PAIRS: &str = include_str!("../golden/cohen_pairs.csv");
pub const GOLDEN_C_PS: &str = include_str!("../golden/c_ps.csv");
pub const GOLDEN_EXCEPTIONS: &str = include_str!("../golden/exceptions.csv");

/// Which table to regenerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    CohenPairs,
    CPs,
    Exceptions,
}

impl Table {
    pub fn golden(self) -> &'static str {
        match self {
            Table::CohenPairs => GOLDEN_COHEN_PAIRS,
            Table::CPs => GOLDEN_C_PS,
            Table::Exceptions => GOLDEN_EXCEPTIONS,
        }
    }

    /// Regenerate as `(header, rows)`.
    pub fn build(self) -> Result<(Vec<String>, Vec<Vec<String>>)> {
        let header = |h: &[&str]| h.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        Ok(match self {
            Table::CohenPairs => (
                header(&["q", "n"]),
                sieve::scan_cohen_pairs()?
                    .into_iter()
                    .map(|(q, n)| vec![q.to_string(), n.to_string()])
                    .collect(),
            ),
            Table::CPs => (
                header(&["p", "s", "C"]),
                sieve::c_ps_domain()
                    .into_iter()
                    .map(|(p, s)| {
                        Ok(vec![
                            p.to_string(),
                            s.to_string(),
                            sieve::compute_C_ps(p, s)?.to_string(),
                        ])
                    })
                    .collect::<Result<_>>()?,
            ),
            Table::Exceptions => (
                header(&["table", "key", "value"]),
                exception_rows()?
                    .into_iter()
                    .map(|r| vec![r.table, r.key, r.value])
                    .collect(),
            ),
        })
    }
}

/// One line of the exceptions table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExceptionRow {
    pub table: String,
    pub key: String,
    pub value: String,
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn row(table: &str, key: &str, value: String) -> ExceptionRow {
    ExceptionRow {
        table: table.into(),
        key: key.into(),
        value,
    }
}

/// Limit of the `n = 4` scan in the exceptions table.
pub const N4_LIMIT: u64 = 25_013;
/// Bound on `q` for the `n = p` and `n = 2p` scans.
pub const COUNTING_LIMIT: u64 = 200;

/// The exception lists: `n = 4`, `n = 5`, `n = ps` with small and large
/// `s`, and `n = p`, `n = 2p`.
pub fn exception_rows() -> Result<Vec<ExceptionRow>> {
    let mut out = Vec::new();
    let n4 = sieve::scan_n4(N4_LIMIT);
    out.push(row("n4", "count", n4.count.to_string()));
    out.push(row(
        "n4",
        "max",
        n4.max_q.map_or("-".into(), |m| m.to_string()),
    ));
    let n5 = sieve::scan_n5(Some(sieve::N5_SAMPLES));
    out.push(row("n5", "exceptions", join(&n5.exceptions)));
    out.push(row("n5", "large-q-failures", join(&n5.large_failures)));
    for (p, s) in sieve::c_ps_domain() {
        let ex = sieve::small_s_exceptions(p, s)?;
        let value = join(ex.iter().map(|(t, v)| match v {
            Verdict::Indeterminate => format!("{t}?"),
            _ => t.to_string(),
        }));
        out.push(row("sievep-small-s", &format!("p={p} s={s}"), value));
    }
    let large = sieve::scan_sievep(16, 6, 23)?;
    out.push(row(
        "sievep-large-s",
        "q<=16 6<=s<=23",
        join(large.iter().map(|r| format!("({},{})", r.q, r.s.unwrap()))),
    ));
    let verdicts = |rs: Vec<sieve::SieveReport>| {
        join(rs.iter().map(|r| match r.verdict {
            Verdict::Indeterminate => format!("{}?", r.q),
            _ => r.q.to_string(),
        }))
    };
    out.push(row(
        "n=p",
        "p>=5",
        verdicts(sieve::scan_n_eq_p(COUNTING_LIMIT, 5)?),
    ));
    out.push(row(
        "n=p",
        "p>=3",
        verdicts(sieve::scan_n_eq_p(COUNTING_LIMIT, 3)?),
    ));
    out.push(row(
        "n=2p",
        "p>=3",
        verdicts(sieve::scan_n_eq_2p(COUNTING_LIMIT, 3)?),
    ));
    Ok(out)
}

/// Render as CSV.
pub fn to_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for r in rows {
        w.write_record(r).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8")
}

/// Lines that differ between a regenerated table and its golden copy.
pub fn diff(golden: &str, regenerated: &str) -> Vec<String> {
    let g: Vec<&str> = golden.lines().collect();
    let r: Vec<&str> = regenerated.lines().collect();
    let mut out = Vec::new();
    for i in 0..g.len().max(r.len()) {
        match (g.get(i), r.get(i)) {
            (Some(a), Some(b)) if a == b => {}
            (a, b) => out.push(format!(
                "line {}: golden {:?}, regenerated {:?}",
                i + 1,
                a.unwrap_or(&""),
                b.unwrap_or(&"")
            )),
        }
    }
    out
}
