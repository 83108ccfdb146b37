//! CSV rendering of convergence tables.
//!
//! Numbers use 17 significant digits so that output is reproducible bit for
//! bit; absent rates are empty fields. Wall-clock time is deliberately left
//! out to keep files deterministic.

use std::fmt::Write as _;

use super::run::RunRecord;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// `n,e_u,rate_u,e_H,rate_H[,e_1,rate_1,e_2,rate_2],s,k,iters`; the invariant
/// columns appear when any record carries them.
pub fn render_csv(records: &[RunRecord]) -> String {
    let with_invariants = records.iter().any(|r| r.e_1.is_some() || r.e_2.is_some());
    let mut out = String::from("n,e_u,rate_u,e_H,rate_H");
    if with_invariants {
        out.push_str(",e_1,rate_1,e_2,rate_2");
    }
    out.push_str(",s,k,iters\n");
    for r in records {
        let _ = write!(out, "{},{},{},{},{}", r.n, num(r.e_u), opt(r.rate_u), num(r.e_h), opt(r.rate_h));
        if with_invariants {
            let _ = write!(out, ",{},{},{},{}", opt(r.e_1), opt(r.rate_1), opt(r.e_2), opt(r.rate_2));
        }
        let _ = writeln!(out, ",{},{},{}", r.s, r.k, num(r.iterations_mean));
    }
    out
}

/// `N,E0,deltaH0` rows of a spectral resolution scan.
pub fn render_scan_csv(rows: &[(usize, f64, f64)]) -> String {
    let mut out = String::from("N,E0,deltaH0\n");
    for (n, e0, dh) in rows {
        let _ = writeln!(out, "{n},{},{}", num(*e0), num(*dh));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, e1: Option<f64>) -> RunRecord {
        RunRecord {
            n,
            wall_time_seconds: 1.25,
            e_u: 0.1,
            rate_u: None,
            e_h: 2e-3,
            rate_h: Some(2.0),
            e_1: e1,
            rate_1: None,
            e_2: e1,
            rate_2: None,
            s: 2,
            k: 4,
            iterations_mean: 7.5,
        }
    }

    #[test]
    fn header_and_rows() {
        let csv = render_csv(&[record(100, None)]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,e_u,rate_u,e_H,rate_H,s,k,iters"));
        assert_eq!(
            lines.next(),
            Some("100,1.0000000000000001e-1,,2.0000000000000000e-3,2.0000000000000000e0,2,4,7.5000000000000000e0")
        );
        let csv = render_csv(&[record(100, Some(1e-14))]);
        assert!(csv.starts_with("n,e_u,rate_u,e_H,rate_H,e_1,rate_1,e_2,rate_2,s,k,iters\n"));
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 12);
    }

    #[test]
    fn values_round_trip_exactly() {
        let v = 0.1f64 + 0.2;
        assert_eq!(num(v).parse::<f64>().unwrap(), v);
    }
}
