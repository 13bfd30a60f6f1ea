use std::fmt::Write as _;

use serde::Serialize;

/// Per-iteration operation counts of one recursion over the whole network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    pub algorithm: String,
    pub recursion_label: String,
    pub multiplications: u64,
    pub additions: u64,
    pub sign_ops: u64,
    pub exp_ops: u64,
    pub abs_ops: u64,
}

impl ComplexityRow {
    fn new(algorithm: &str, label: &str, mults: u64, adds: u64) -> Self {
        Self {
            algorithm: algorithm.to_owned(),
            recursion_label: label.to_owned(),
            multiplications: mults,
            additions: adds,
            sign_ops: 0,
            exp_ops: 0,
            abs_ops: 0,
        }
    }

    fn sign(mut self, n: u64) -> Self {
        self.sign_ops = n;
        self
    }

    fn exp(mut self, n: u64) -> Self {
        self.exp_ops = n;
        self
    }

    fn abs(mut self, n: u64) -> Self {
        self.abs_ops = n;
        self
    }
}

/// Closed-form operation counts for `m` taps and `n` nodes.
///
/// Rows: DSELMS, DLLAD, DLLCLMS, DQQCLMS and DLECLMS adaptation, then the
/// combination step shared by all of them.
pub fn complexity_table(m: u64, n: u64) -> Vec<ComplexityRow> {
    let adapt_adds = (3 * m - 1) * n;
    vec![
        ComplexityRow::new("DSELMS", "adaptation", (2 * m + 1) * n + m, adapt_adds).sign(n),
        ComplexityRow::new("DLLAD", "adaptation", 2 * m * n + m, adapt_adds).abs(n),
        ComplexityRow::new("DLLCLMS", "adaptation (I) and (II)", (2 * m + 2) * n + m, adapt_adds).sign(n),
        ComplexityRow::new("DQQCLMS", "adaptation (I) and (II)", (2 * m + 3) * n + m, adapt_adds).sign(n),
        ComplexityRow::new("DLECLMS", "adaptation", (2 * m + 5) * n + m, 3 * m * n).exp(n),
        ComplexityRow::new("all", "combination", n * m, (n - 1) * m),
    ]
}

const HEADERS: [&str; 7] = [
    "algorithm",
    "recursion_label",
    "multiplications",
    "additions",
    "sign_ops",
    "exp_ops",
    "abs_ops",
];

fn cells(row: &ComplexityRow) -> [String; 7] {
    [
        row.algorithm.clone(),
        row.recursion_label.clone(),
        row.multiplications.to_string(),
        row.additions.to_string(),
        row.sign_ops.to_string(),
        row.exp_ops.to_string(),
        row.abs_ops.to_string(),
    ]
}

/// Aligned plain-text table; text columns left-aligned, counts right-aligned.
pub fn render_complexity_table(rows: &[ComplexityRow]) -> String {
    let body: Vec<[String; 7]> = rows.iter().map(cells).collect();
    let mut widths = HEADERS.map(str::len);
    for r in &body {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |cols: &[String]| {
        let mut s = String::new();
        for (i, (c, w)) in cols.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            if i < 2 {
                let _ = write!(s, "{c:<w$}");
            } else {
                let _ = write!(s, "{c:>w$}");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&HEADERS.map(String::from));
    for r in &body {
        line(r);
    }
    out
}

pub fn render_complexity_csv(rows: &[ComplexityRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
