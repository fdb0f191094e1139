//! The table of the first homotopy groups π_r U(n), r ≤ 10, n ≤ 6.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The shipped fixture, one tab-separated line per entry.
pub const FIXTURE: &str = include_str!("../data/table1.tsv");
const HEADER: &str = "r\tn\tgroup\tflags\tstable";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyTableEntry {
    pub r: u8,
    pub n: u8,
    /// "0", "Z", "Z_12", "Z_120+Z_2", ...
    pub group: String,
    /// Every map is homotopic to its transpose.
    pub t: bool,
    /// Every map is homotopic to its complex conjugate.
    pub c: bool,
    pub stable: bool,
}

impl HomotopyTableEntry {
    pub fn flags(&self) -> String {
        match (self.t, self.c) {
            (true, true) => "t,c".into(),
            (true, false) => "t".into(),
            (false, true) => "c".into(),
            (false, false) => "-".into(),
        }
    }

    /// Group with spaces around direct-sum signs.
    pub fn display_group(&self) -> String {
        self.group.replace('+', " + ")
    }

    fn data_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.r,
            self.n,
            self.group,
            self.flags(),
            if self.stable { "yes" } else { "no" }
        )
    }
}

fn parse_line(line: &str) -> Result<HomotopyTableEntry> {
    let bad = || Error::InvalidPoint(format!("table line {line:?}"));
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 5 {
        return Err(bad());
    }
    let (t, c) = match f[3] {
        "t,c" => (true, true),
        "t" => (true, false),
        "c" => (false, true),
        "-" => (false, false),
        _ => return Err(bad()),
    };
    Ok(HomotopyTableEntry {
        r: f[0].parse().map_err(|_| bad())?,
        n: f[1].parse().map_err(|_| bad())?,
        group: f[2].to_string(),
        t,
        c,
        stable: match f[4] {
            "yes" => true,
            "no" => false,
            _ => return Err(bad()),
        },
    })
}

/// All 60 entries in row-major (r, then n) order.
pub fn entries() -> Vec<HomotopyTableEntry> {
    FIXTURE
        .lines()
        .skip(1)
        .map(|l| parse_line(l).expect("fixture is well formed"))
        .collect()
}

pub fn entry(r: u8, n: u8) -> Option<HomotopyTableEntry> {
    entries().into_iter().find(|e| e.r == r && e.n == n)
}

/// Tab-separated entries with a header line.
pub fn render_data() -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for e in entries() {
        out.push_str(&e.data_line());
        out.push('\n');
    }
    out
}

/// Grid of π_r U(n) with flags in brackets; `|` marks the start of the
/// stable range in each row.
pub fn render_pretty() -> String {
    let all = entries();
    let width = 17;
    let mut out = format!("{:>5} |", "r\\n");
    for n in 1..=6 {
        out.push_str(&format!("{n:>width$}"));
    }
    out.push('\n');
    out.push_str(&format!("{}+{}\n", "-".repeat(6), "-".repeat(6 * width)));
    for r in 1..=10u8 {
        out.push_str(&format!("{r:>5} |"));
        for e in all.iter().filter(|e| e.r == r) {
            let mut cell = e.display_group();
            if e.t || e.c {
                cell.push_str(&format!(" [{}]", e.flags()));
            }
            let border_here = e.stable && (e.n == 1 || 2 * (e.n - 1) <= r);
            let marker = if border_here { "|" } else { "" };
            out.push_str(&format!("{:>width$}", format!("{marker}{cell}")));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixty_entries_and_data_round_trip() {
        assert_eq!(entries().len(), 60);
        assert_eq!(render_data(), FIXTURE);
    }

    #[test]
    fn named_entries() {
        let e = entry(6, 2).unwrap();
        assert_eq!((e.group.as_str(), e.t, e.c), ("Z_12", false, true));
        let e = entry(10, 4).unwrap();
        assert_eq!((e.display_group().as_str(), e.flags().as_str()), ("Z_120 + Z_2", "c"));
        let e = entry(4, 2).unwrap();
        assert_eq!((e.group.as_str(), e.flags().as_str()), ("Z_2", "t,c"));
        assert!(entry(11, 1).is_none());
    }

    #[test]
    fn stable_range_is_bott_periodic() {
        for e in entries() {
            assert_eq!(e.stable, e.r < 2 * e.n, "({}, {})", e.r, e.n);
            if e.stable {
                assert_eq!(e.group, if e.r % 2 == 1 { "Z" } else { "0" });
            }
        }
    }

    #[test]
    fn last_stable_and_first_nonstable_groups() {
        // π_{2n−1}U(n) = Z, π_{2n}U(n) = Z_{n!}
        for n in 1..=5u8 {
            assert_eq!(entry(2 * n - 1, n).unwrap().group, "Z");
            let fact: u32 = (1..=n as u32).product();
            let expected = if fact == 1 { "0".to_string() } else { format!("Z_{fact}") };
            assert_eq!(entry(2 * n, n).unwrap().group, expected);
        }
    }

    #[test]
    fn pretty_marks_one_border_per_row() {
        let text = render_pretty();
        let rows: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(rows.len(), 10);
        for row in &rows {
            assert_eq!(row.matches('|').count(), 2, "{row}");
        }
        assert!(text.contains("Z_120 + Z_2 [c]"));
    }
}
