//! Shared front-end pieces: the embedded reference spectra, the comparison
//! machinery and its tolerance policy, and small formatting helpers.
//!
//! The reference tables are regression fixtures: ten-value spectra for five
//! parameter sets of the well, embedded in source so that `aimwell tables`
//! is deterministic and self-contained. The first parameter set carries two
//! columns produced by two independent methods — an iterative coefficient
//! recursion (`AIM`) and a tridiagonal matrix representation (`TRA`) — which
//! bound each other's accuracy; the comparison policy grades against the
//! iterative column and the cross-column spread is part of the acceptance
//! record.

use aimwell_core::PotentialParams;
use serde::Serialize;

/// Exit code: everything requested was computed and passed.
pub const EXIT_OK: i32 = 0;
/// Exit code: an internal computation failed.
pub const EXIT_INTERNAL: i32 = 1;
/// Exit code: computed, but with unconverged or unavailable pieces.
pub const EXIT_PARTIAL: i32 = 2;
/// Exit code: a reference comparison exceeded its tolerance.
pub const EXIT_MISMATCH: i32 = 3;
/// Exit code: the invocation itself is invalid.
pub const EXIT_USAGE: i32 = 64;

/// One embedded ten-state reference spectrum.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceTable {
    /// Stable identifier: `table1`, `table2c1`, `table2c2`, `table2c3`,
    /// `table3`.
    pub label: &'static str,
    /// Strength of the `1/(L²−x²)` term.
    pub a: f64,
    /// Strength of the `1/(x²(L²−x²))` term.
    pub b: f64,
    /// Strength of the `1/(L²−x²)²` term.
    pub c: f64,
    /// Box width.
    pub l: f64,
    /// Which method produced the column: `AIM` (iterative recursion) or
    /// `TRA` (tridiagonal representation).
    pub source_column: &'static str,
    /// The ten reference eigenvalues, ascending.
    pub values: [f64; 10],
}

impl ReferenceTable {
    /// The parameter set as the engine consumes it.
    pub fn params(&self) -> PotentialParams {
        PotentialParams::new(self.a, self.b, self.c, self.l)
            .expect("embedded reference parameters are valid")
    }
}

/// Reference spectrum for `A=4, B=4, C=8, L=2`, iterative-recursion column.
/// Rows 3–4 carry a finite-depth bias of ≈1.5e-6/1.9e-6 relative to both the
/// tridiagonal column and this engine's converged values — larger than the
/// 1e-6 policy band those rows are graded at, which the comparison records
/// as an expected mismatch.
pub const TABLE1_AIM: ReferenceTable = ReferenceTable {
    label: "table1",
    a: 4.0,
    b: 4.0,
    c: 8.0,
    l: 2.0,
    source_column: "AIM",
    values: [
        5.972761814,
        11.98341391,
        20.37336112,
        31.18018354,
        44.42201870,
        60.10888564,
        78.24675783,
        98.83966999,
        121.8900467,
        147.4004370,
    ],
};

/// Reference spectrum for `A=4, B=4, C=8, L=2`, tridiagonal-representation
/// column. The engine's converged values agree with this column to better
/// than 1e-9 relative; it is the sharper of the two fixtures.
pub const TABLE1_TRA: ReferenceTable = ReferenceTable {
    label: "table1",
    a: 4.0,
    b: 4.0,
    c: 8.0,
    l: 2.0,
    source_column: "TRA",
    values: [
        5.9727609687,
        11.9834081211,
        20.3733437263,
        31.1801373896,
        44.4219350633,
        60.1087189299,
        78.2465191684,
        98.8392406127,
        121.8895500217,
        147.3993465727,
    ],
};

/// Reference spectrum for `A=0, B=4, C=8, L=2`. Row 9 carries a slow-depth
/// bias of ≈+1.34e-5 relative to the engine's converged value, just over the
/// 1e-5 policy band.
pub const TABLE2_C1: ReferenceTable = ReferenceTable {
    label: "table2c1",
    a: 0.0,
    b: 4.0,
    c: 8.0,
    l: 2.0,
    source_column: "AIM",
    values: [
        4.494939396,
        10.29011799,
        18.52601977,
        29.21393327,
        42.35926566,
        57.96507320,
        76.03310921,
        96.56475520,
        119.5604795,
        145.0222687,
    ],
};

/// Reference spectrum for `A=4, B=0, C=8, L=2`. With `B = 0` the origin
/// admits two boundary behaviors, ψ ~ x (hard-wall) and ψ(0) ≠ 0; this
/// column quantizes the latter, while the engine and the matrix oracle both
/// impose the hard wall, so every row differs at the 0.1–0.7 relative level
/// by branch choice rather than by numerical error.
pub const TABLE2_C2: ReferenceTable = ReferenceTable {
    label: "table2c2",
    a: 4.0,
    b: 0.0,
    c: 8.0,
    l: 2.0,
    source_column: "AIM",
    values: [
        2.145125835,
        5.818782893,
        11.78962660,
        20.14801904,
        30.92900187,
        44.14916533,
        59.81732164,
        77.93893176,
        98.51723995,
        121.5547638,
    ],
};

/// Reference spectrum for `A=4, B=4, C=0, L=2`. The engine matches this
/// column to ≈4e-10 relative.
pub const TABLE2_C3: ReferenceTable = ReferenceTable {
    label: "table2c3",
    a: 4.0,
    b: 4.0,
    c: 0.0,
    l: 2.0,
    source_column: "AIM",
    values: [
        4.669130036,
        9.933633396,
        17.55700304,
        27.59113939,
        40.05865045,
        54.97104983,
        72.33491111,
        92.15431584,
        114.4319637,
        139.1697297,
    ],
};

/// Reference spectrum for `A=−4, B=−4, C=−8, L=2`. Both strength terms are
/// supercritical (`1 + 8B/L² = −7`, `1 + 2C/L² = −3`): no self-adjoint
/// boundary condition is singled out, determinant roots slide with iteration
/// depth instead of settling, and the matrix oracle's lowest level falls
/// without bound under grid refinement. Rows 0–2 are therefore reported
/// without verdicts; rows 3–9 are graded but belong to the same
/// regularization-dependent regime.
pub const TABLE3: ReferenceTable = ReferenceTable {
    label: "table3",
    a: -4.0,
    b: -4.0,
    c: -8.0,
    l: 2.0,
    source_column: "AIM",
    values: [
        -1.434082108e5,
        -251.9142157,
        -69.26639048,
        -3.891328201,
        -1.133144577,
        5.586514083,
        15.34323167,
        28.10647416,
        43.63009092,
        61.99556975,
    ],
};

/// Per-row comparison tolerance for a table label; `None` marks rows that
/// are informational by policy (no verdict).
pub fn row_tolerance(label: &str, row: usize) -> Option<f64> {
    match label {
        "table1" => Some(if row <= 4 { 1e-6 } else { 1e-5 }),
        "table2c1" | "table2c2" | "table2c3" => Some(1e-5),
        "table3" => {
            if row <= 2 {
                None
            } else {
                Some(1e-4)
            }
        }
        _ => None,
    }
}

/// One graded (or informational) row of a reference comparison.
#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    /// State index within the table.
    pub index: usize,
    /// Recomputed eigenvalue; `None` when nothing layable against the
    /// reference was produced (informational supercritical rows).
    pub computed: Option<f64>,
    /// Embedded reference value.
    pub reference: f64,
    /// |computed − reference|.
    pub abs_diff: Option<f64>,
    /// |computed − reference| / |reference|.
    pub rel_diff: Option<f64>,
    /// Policy tolerance; `None` marks an informational row.
    pub tolerance: Option<f64>,
    /// Verdict; `None` for informational rows.
    pub pass: Option<bool>,
}

/// A full table comparison.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    /// Table identifier.
    pub label: &'static str,
    /// Which reference column was graded against.
    pub source_column: &'static str,
    /// Parameter set `[A, B, C, L]`.
    pub params: [f64; 4],
    /// Per-row outcomes.
    pub rows: Vec<RowReport>,
    /// Whether every graded row passed.
    pub passed: bool,
    /// Context for readers of the report.
    pub notes: Vec<String>,
}

/// Grade recomputed values against one embedded table. `computed[i]` of
/// `None` marks a row that produced no comparable value; graded rows without
/// a value fail.
pub fn compare_table(table: &ReferenceTable, computed: &[Option<f64>]) -> TableReport {
    let mut rows = Vec::with_capacity(10);
    let mut passed = true;
    for (i, &reference) in table.values.iter().enumerate() {
        let computed_i = computed.get(i).copied().flatten();
        let tolerance = row_tolerance(table.label, i);
        let (abs_diff, rel_diff) = match computed_i {
            Some(v) => {
                let abs = (v - reference).abs();
                (Some(abs), Some(abs / reference.abs()))
            }
            None => (None, None),
        };
        let pass = tolerance.map(|tol| rel_diff.map(|r| r <= tol).unwrap_or(false));
        if pass == Some(false) {
            passed = false;
        }
        rows.push(RowReport {
            index: i,
            computed: computed_i,
            reference,
            abs_diff,
            rel_diff,
            tolerance,
            pass,
        });
    }
    TableReport {
        label: table.label,
        source_column: table.source_column,
        params: [table.a, table.b, table.c, table.l],
        rows,
        passed,
        notes: Vec::new(),
    }
}

/// Twelve significant digits, scientific notation — the fixed width CSV and
/// text reports use for real values.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Render an optional value for CSV: empty field when absent.
pub fn sig12_opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}
