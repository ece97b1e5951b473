//! CSV and report writers. Floats use 17 significant digits so that files
//! are reproducible and round-trip exactly.

use std::fmt::Write as _;

use chaosctl_core::dynamics::ScanRecord;
use chaosctl_core::StateVector;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn nums(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}

/// Ordered `key = value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn push_num(&mut self, key: impl Into<String>, v: f64) {
        self.push(key, num(v));
    }

    pub fn push_vec(&mut self, key: impl Into<String>, v: &[f64]) {
        self.push(key, nums(v));
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = (String, String)>) {
        self.entries.extend(records);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// Reads back rendered `key = value` lines.
    pub fn parse(text: &str) -> Self {
        Self {
            entries: text
                .lines()
                .filter_map(|l| l.split_once(" = "))
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

/// `c,step,component,value,period[,cost]` with one row per grid value,
/// retained step and component. `first_step` is the absolute step number
/// of the first retained point. Components are numbered from 0.
pub fn scan_csv(
    records: &[ScanRecord],
    first_step: usize,
    costs: Option<&[Option<f64>]>,
) -> String {
    let mut s = String::from("c,step,component,value,period");
    if costs.is_some() {
        s.push_str(",cost");
    }
    s.push('\n');
    for (i, rec) in records.iter().enumerate() {
        let cost = costs.map(|c| c[i].map_or_else(String::new, num));
        for (n, x) in rec.retained.iter().enumerate() {
            for (j, v) in x.iter().enumerate() {
                let period = rec
                    .periods
                    .get(j)
                    .map_or_else(|| "error".to_string(), |p| p.to_string());
                let _ = write!(
                    s,
                    "{},{},{},{},{}",
                    num(rec.c),
                    first_step + n,
                    j,
                    num(*v),
                    period
                );
                if let Some(c) = &cost {
                    let _ = write!(s, ",{c}");
                }
                s.push('\n');
            }
        }
    }
    s
}

/// `step,component,value` for an orbit whose first state is step
/// `first_step`.
pub fn orbit_csv(orbit: &[StateVector], first_step: usize) -> String {
    let mut s = String::from("step,component,value\n");
    for (n, x) in orbit.iter().enumerate() {
        for (j, v) in x.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", first_step + n, j, num(*v));
        }
    }
    s
}
