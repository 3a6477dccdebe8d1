//! `Ψ` and the best witness bound along a range of `n`.

use mixwidth_core::psi::psi;
use mixwidth_core::witness::best_witness_lower_bound;
use mixwidth_core::Instance;
use serde::Serialize;

use crate::CliError;

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "psi",
    "argmin_set",
    "psi_0",
    "psi_1",
    "psi_2",
    "psi_3",
    "psi_4",
    "psi_5",
    "psi_6",
    "psi_7",
    "witness_lb",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub psi: f64,
    pub argmin: Vec<usize>,
    pub components: [f64; 8],
    pub witness_lb: f64,
}

/// Rows for `n = from..=to`; empty when `from > to`. The `Ψ` column is
/// checked to be nonincreasing.
pub fn compute_sweep(inst: &Instance, from: u64, to: u64) -> Result<Vec<SweepRow>, CliError> {
    let max = inst.dims().max_n();
    if to > max && from <= to {
        return Err(CliError::Config(format!("--n-to {to} exceeds mk/2 = {max}")));
    }
    let mut rows: Vec<SweepRow> = Vec::new();
    for n in from..=to {
        let at = inst.with_n(n)?;
        let est = psi(&at)?;
        if let Some(prev) = rows.last() {
            if est.value > prev.psi * (1.0 + 1e-12) {
                return Err(CliError::Invariant(format!(
                    "psi increased from {} at n = {} to {} at n = {n}",
                    prev.psi, prev.n, est.value
                )));
            }
        }
        rows.push(SweepRow {
            n,
            psi: est.value,
            argmin: est.ties.clone(),
            components: est.component_values(),
            witness_lb: best_witness_lower_bound(&at)?.value,
        });
    }
    Ok(rows)
}

fn join(set: &[usize]) -> String {
    set.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(";")
}

pub fn write_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let mut record = vec![r.n.to_string(), r.psi.to_string(), join(&r.argmin)];
        record.extend(r.components.iter().map(f64::to_string));
        record.push(r.witness_lb.to_string());
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_csv(text: &str) -> Result<Vec<SweepRow>, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CliError::Config(format!("unexpected csv header {header:?}")));
    }
    let bad = |what: &str, s: &str| CliError::Config(format!("bad {what} value {s:?}"));
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let float = |i: usize| record[i].parse::<f64>().map_err(|_| bad(CSV_HEADER[i], &record[i]));
        let argmin = if record[2].is_empty() {
            Vec::new()
        } else {
            record[2]
                .split(';')
                .map(|s| s.parse().map_err(|_| bad("argmin_set", s)))
                .collect::<Result<_, _>>()?
        };
        let mut components = [0.0; 8];
        for (j, c) in components.iter_mut().enumerate() {
            *c = float(3 + j)?;
        }
        rows.push(SweepRow {
            n: record[0].parse().map_err(|_| bad("n", &record[0]))?,
            psi: float(1)?,
            argmin,
            components,
            witness_lb: float(11)?,
        });
    }
    Ok(rows)
}

pub fn render_table(rows: &[SweepRow]) -> String {
    let mut out = format!("{:>6}  {:>14}  {:>10}  {:>14}\n", "n", "psi", "argmin", "witness_lb");
    for r in rows {
        out.push_str(&format!(
            "{:>6}  {:>14.8}  {:>10}  {:>14.8}\n",
            r.n,
            r.psi,
            join(&r.argmin),
            r.witness_lb
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::InstanceFile;

    fn inst() -> Instance {
        InstanceFile::parse(
            r#"{"m":4,"k":6,"n":0,"q":"3","sigma":"4","balls":[{"p":"inf","theta":"2","nu":1},{"p":"1","theta":"5/2","nu":4},{"p":"3/2","theta":"inf","nu":0.3}]}"#,
        )
        .unwrap()
        .to_instance()
        .unwrap()
    }

    #[test]
    fn sweep_is_monotone_and_round_trips() {
        let rows = compute_sweep(&inst(), 0, 12).unwrap();
        assert_eq!(rows.len(), 13);
        assert!(rows.windows(2).all(|w| w[1].psi <= w[0].psi));
        assert!(rows[0].psi.is_finite());
        let text = write_csv(&rows).unwrap();
        let back = read_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.argmin, b.argmin);
            assert!((a.psi - b.psi).abs() <= 1e-12 * a.psi);
            for (x, y) in a.components.iter().zip(&b.components) {
                assert!(x == y || (x - y).abs() <= 1e-12 * x.abs());
            }
        }
    }

    #[test]
    fn empty_range_and_range_errors() {
        let rows = compute_sweep(&inst(), 5, 4).unwrap();
        assert!(rows.is_empty());
        assert_eq!(write_csv(&rows).unwrap().trim_end(), CSV_HEADER.join(","));
        assert!(compute_sweep(&inst(), 0, 13).is_err());
    }
}
