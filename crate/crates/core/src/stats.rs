//! χ² statistics of λ over segments, the published segment tables, and a
//! scan for eventual periodicity.
//!
//! A segment of length `len` with λ-sum `L` holds `(len + L)/2` values of +1
//! and `(len − L)/2` values of −1, so the one-degree-of-freedom χ² against a
//! fair coin collapses to `L² / len`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summatory::{summatory_at, summatory_range};

/// `2/π`, the squared mean of `|L|/√len` for fair coin tosses. Reported next
/// to mean χ², never asserted.
pub const COIN_TOSS_REFERENCE: f64 = std::f64::consts::FRAC_2_PI;

/// Printed tables quote χ² to at most four decimals.
pub const CHI2_TOLERANCE: f64 = 5e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    /// The `⌊√N⌋` integers ending at `N`.
    SMinus,
    /// The `⌊√N⌋` integers after `N`.
    SPlus,
    Arbitrary,
}

impl SegmentKind {
    pub fn token(self) -> &'static str {
        match self {
            SegmentKind::SMinus => "s_minus",
            SegmentKind::SPlus => "s_plus",
            SegmentKind::Arbitrary => "arbitrary",
        }
    }
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub start: u64,
    pub length: u64,
    pub kind: SegmentKind,
}

impl SegmentSpec {
    pub fn new(start: u64, length: u64, kind: SegmentKind) -> Result<Self> {
        if start == 0 || length == 0 {
            return Err(Error::invalid(format!("segment needs start >= 1 and length >= 1, got ({start}, {length})")));
        }
        if start.checked_add(length - 1).is_none() {
            return Err(Error::Range(format!("segment ({start}, {length}) runs past u64")));
        }
        Ok(SegmentSpec { start, length, kind })
    }

    /// `[N − r + 1, N]` with `r = ⌊√N⌋`.
    pub fn s_minus(n: u64) -> Result<Self> {
        let root = n.isqrt();
        if root == 0 {
            return Err(Error::invalid("segment anchor must be at least 1"));
        }
        Self::new(n - root + 1, root, SegmentKind::SMinus)
    }

    /// `[N + 1, N + r]` with `r = ⌊√N⌋`.
    pub fn s_plus(n: u64) -> Result<Self> {
        let root = n.isqrt();
        if root == 0 {
            return Err(Error::invalid("segment anchor must be at least 1"));
        }
        let start = n.checked_add(1).ok_or_else(|| Error::Range(format!("{n} + 1 overflows")))?;
        Self::new(start, root, SegmentKind::SPlus)
    }

    /// `[1, N]`.
    pub fn prefix(n: u64) -> Result<Self> {
        Self::new(1, n, SegmentKind::Arbitrary)
    }

    pub fn end(&self) -> u64 {
        self.start + (self.length - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareRow {
    pub spec: SegmentSpec,
    #[serde(rename = "L")]
    pub l: i64,
    pub chi2: f64,
}

impl ChiSquareRow {
    pub fn from_sum(spec: SegmentSpec, l: i64) -> Self {
        ChiSquareRow { spec, l, chi2: (l as f64) * (l as f64) / spec.length as f64 }
    }
}

pub fn chi_square_segment(spec: SegmentSpec) -> Result<ChiSquareRow> {
    let l = summatory_range(spec.start, spec.length)?;
    Ok(ChiSquareRow::from_sum(spec, l))
}

/// Pearson's χ² for `plus` heads and `minus` tails against a fair coin.
pub fn chi_square_from_counts(plus: u64, minus: u64) -> Result<f64> {
    let total = plus
        .checked_add(minus)
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::invalid("χ² needs at least one observation"))?;
    let expected = total as f64 / 2.0;
    let dp = plus as f64 - expected;
    let dm = minus as f64 - expected;
    Ok(dp * dp / expected + dm * dm / expected)
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.into_iter().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// The smallest `(t, σ)`, ordered by `t` then `σ`, with `t ≤ max_offset`,
/// `1 ≤ σ ≤ max_period` and `seq[i] == seq[i + σ]` for every `i ≥ t`.
pub fn cycle_scan(seq: &[i8], max_offset: usize, max_period: usize) -> Result<Option<(usize, usize)>> {
    if max_period == 0 {
        return Err(Error::invalid("period bound must be at least 1"));
    }
    let needed = max_offset
        .checked_add(max_period)
        .and_then(|s| s.checked_mul(2))
        .ok_or_else(|| Error::invalid("scan bounds overflow"))?;
    if seq.len() < needed {
        return Err(Error::invalid(format!("cycle scan needs at least {needed} values, got {}", seq.len())));
    }
    let mut best: Option<(usize, usize)> = None;
    for period in 1..=max_period {
        // minimal offset for this period: one past the last mismatch
        let offset = (0..seq.len() - period).rev().find(|&i| seq[i] != seq[i + period]).map_or(0, |i| i + 1);
        if offset <= max_offset && best.is_none_or(|(t, _)| offset < t) {
            best = Some((offset, period));
        }
    }
    Ok(best)
}

/// The published tables that can be recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    /// `S−`/`S+` segments of length about 1000.
    #[serde(rename = "1.1")]
    Squares1000,
    #[serde(rename = "1.2")]
    Squares5000,
    #[serde(rename = "1.3")]
    Squares10000,
    #[serde(rename = "1.4")]
    Squares100000,
    /// Twenty length-1000 windows at arbitrary starts.
    #[serde(rename = "2.1")]
    Arbitrary1000,
    /// L(N) at multiples of 10⁸ up to 10⁹.
    #[serde(rename = "3.1")]
    HundredMillions,
    /// L(N) at record minima.
    #[serde(rename = "3.2")]
    RecordMinima,
}

impl TableId {
    pub const ALL: [TableId; 7] = [
        TableId::Squares1000,
        TableId::Squares5000,
        TableId::Squares10000,
        TableId::Squares100000,
        TableId::Arbitrary1000,
        TableId::HundredMillions,
        TableId::RecordMinima,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Squares1000 => "1.1",
            TableId::Squares5000 => "1.2",
            TableId::Squares10000 => "1.3",
            TableId::Squares100000 => "1.4",
            TableId::Arbitrary1000 => "2.1",
            TableId::HundredMillions => "3.1",
            TableId::RecordMinima => "3.2",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown table {s:?}; expected one of 1.1 1.2 1.3 1.4 2.1 3.1 3.2")))
    }
}

/// One published row: the segment, its printed λ-sum and printed χ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedRow {
    pub spec: SegmentSpec,
    #[serde(rename = "L")]
    pub l: i64,
    pub chi2: f64,
    /// False when the printed range disagrees with the row's own anchor, so
    /// the printed values cannot be attributed to a single segment.
    pub asserted: bool,
}

// (first √N, printed (L, χ²) per row, alternating S− then S+)
const SQUARES_1000: (u64, &[(i64, f64)]) = (
    1000,
    &[
        (6, 0.036),
        (10, 0.100),
        (49, 2.400),
        (-37, 1.368),
        (-12, 0.144),
        (-28, 0.780),
        (3, 0.009),
        (-39, 1.516),
        (12, 0.143),
        (6, 0.036),
    ],
);
const SQUARES_5000: (u64, &[(i64, f64)]) = (
    5000,
    &[
        (0, 0.0),
        (-42, 0.353),
        (-27, 0.148),
        (-103, 2.12),
        (-76, 1.155),
        (48, 0.461),
        (-13, 0.034),
        (119, 2.831),
        (124, 3.072),
        (62, 0.768),
    ],
);
const SQUARES_10000: (u64, &[(i64, f64)]) = (
    10000,
    &[
        (-146, 2.132),
        (-88, 0.774),
        (-11, 0.012),
        (-43, 0.185),
        (8, 0.064),
        (36, 0.130),
        (23, 0.053),
        (-49, 0.240),
        (-20, 0.040),
        (112, 1.254),
    ],
);
const SQUARES_100000: (u64, &[(i64, f64)]) = (
    100_000,
    &[
        (-232, 0.538),
        (340, 1.15),
        (-249, 0.620),
        (-115, 0.132),
        (216, 0.467),
        (456, 2.08),
        (-255, 0.650),
        (-235, 0.552),
        (-44, 0.0194),
        (202, 0.408),
        (-191, 0.364),
        (475, 2.26),
        (134, 0.179),
        (-66, 0.0436),
        (427, 1.82),
        (-303, 0.918),
        (276, 0.762),
        (-210, 0.441),
        (267, 0.713),
        (291, 0.847),
    ],
);
// rows 4 and 6 of the 100 000 table print the same range
const SQUARES_100000_AMBIGUOUS: [usize; 2] = [4, 6];

const ARBITRARY_1000: &[(u64, i64, f64)] = &[
    (10_000_001, 36, 1.296),
    (12_000_001, 28, 0.784),
    (13_000_001, -14, 0.196),
    (15_000_001, 10, 0.10),
    (45_000_001, -18, 0.324),
    (47_000_001, -36, 1.296),
    (56_000_001, 24, 0.576),
    (70_000_001, -44, 1.936),
    (90_000_001, 14, 0.196),
    (95_600_001, 28, 0.784),
    (147_000_001, -26, 0.676),
    (237_000_001, -24, 0.576),
    (400_000_001, 26, 0.676),
    (413_000_001, 10, 0.10),
    (517_000_001, 14, 0.196),
    (530_000_001, -32, 1.024),
    (731_000_001, 50, 2.500),
    (871_000_001, -42, 1.764),
    (979_000_001, -20, 0.400),
    (997_000_001, 14, 0.196),
];

#[allow(clippy::approx_constant)]
const HUNDRED_MILLIONS: &[(u64, i64, f64)] = &[
    (100_000_000, -3884, 0.1508),
    (200_000_000, -11126, 0.6189),
    (300_000_000, -16648, 0.9238),
    (400_000_000, -11200, 0.3136),
    (500_000_000, -18804, 0.7072),
    (600_000_000, -15350, 0.3927),
    (700_000_000, -25384, 0.9204),
    (800_000_000, -19292, 0.4652),
    (900_000_000, -4630, 0.0238),
    (1_000_000_000, -25216, 0.6358),
];

const RECORD_MINIMA: &[(u64, i64, f64)] = &[
    (293, -21, 1.5051),
    (468, -24, 1.2308),
    (684, -28, 1.1462),
    (1_132, -42, 1.5583),
    (1_760, -48, 1.3091),
    (2_804, -66, 1.5535),
    (4_528, -74, 1.2094),
    (7_027, -103, 1.5097),
    (9_840, -128, 1.665),
    (24_426, -186, 1.4164),
    (59_577, -307, 1.582),
    (96_862, -414, 1.7695),
    (386_434, -698, 1.2608),
    (614_155, -991, 1.5991),
    (925_985, -1_253, 1.6955),
    (2_110_931, -1_803, 1.54),
    (3_456_120, -2_254, 1.47),
    (5_306_119, -2_931, 1.619),
    (5_384_780, -2_932, 1.5965),
    (8_803_471, -3_461, 1.3607),
    (12_897_104, -4_878, 1.845),
    (76_015_169, -10_443, 1.4347),
    (184_699_341, -17_847, 1.7245),
    (281_876_941, -19_647, 1.3694),
    (456_877_629, -28_531, 1.7817),
    (712_638_284, -29_736, 1.2408),
    (1_122_289_008, -43_080, 1.6537),
    (1_806_141_032, -50_356, 1.4039),
    (2_719_280_841, -62_567, 1.4396),
    (3_847_002_655, -68_681, 1.2262),
    (4_430_947_670, -73_436, 1.2171),
    (6_321_603_934, -96_460, 1.4719),
    (10_097_286_319, -123_643, 1.514),
    (15_511_912_966, -158_636, 1.6223),
    (24_395_556_935, -172_987, 1.2266),
    (39_769_975_545, -238_673, 1.4324),
    (98_220_859_787, -365_305, 1.3586),
    (149_093_624_694, -461_684, 1.4296),
    (217_295_584_371, -598_109, 1.6463),
    (341_058_604_701, -726_209, 1.5463),
    (576_863_787_872, -900_668, 1.4062),
    (835_018_639_060, -1_038_386, 1.2913),
    (1_342_121_202_207, -1_369_777, 1.398),
    (2_057_920_042_277, -1_767_635, 1.5183),
    (2_147_203_463_859, -1_784_793, 1.4836),
    (3_271_541_048_420, -2_206_930, 1.4888),
    (4_686_763_744_950, -2_259_182, 1.089),
    (5_191_024_637_118, -2_775_466, 1.4839),
    (7_934_523_825_335, -3_003_875, 1.1372),
    (8_196_557_476_890, -3_458_310, 1.4591),
    (12_078_577_080_679, -4_122_117, 1.4068),
    (18_790_887_277_234, -4_752_656, 1.2021),
    (20_999_693_845_505, -5_400_411, 1.3888),
    (29_254_665_607_331, -6_870_529, 1.6136),
    (48_136_689_451_475, -7_816_269, 1.2692),
    (72_204_113_780_255, -11_805_117, 1.9301),
    (117_374_745_179_544, -14_496_306, 1.7904),
    (176_064_978_093_269, -17_555_181, 1.7504),
];

fn square_rows((first_root, printed): (u64, &[(i64, f64)]), ambiguous: &[usize]) -> Vec<PrintedRow> {
    printed
        .iter()
        .enumerate()
        .map(|(i, &(l, chi2))| {
            let square = (first_root + i as u64 / 2).pow(2);
            let spec = if i % 2 == 0 { SegmentSpec::s_minus(square) } else { SegmentSpec::s_plus(square) };
            PrintedRow {
                spec: spec.expect("table anchors are valid"),
                l,
                chi2,
                asserted: !ambiguous.contains(&(i + 1)),
            }
        })
        .collect()
}

fn fixed_rows(rows: &[(u64, i64, f64)], length: Option<u64>) -> Vec<PrintedRow> {
    rows.iter()
        .map(|&(n, l, chi2)| {
            let spec = match length {
                Some(len) => SegmentSpec::new(n, len, SegmentKind::Arbitrary),
                None => SegmentSpec::prefix(n),
            };
            PrintedRow { spec: spec.expect("table anchors are valid"), l, chi2, asserted: true }
        })
        .collect()
}

/// The rows of a published table, in printed order.
pub fn printed_rows(id: TableId) -> Vec<PrintedRow> {
    match id {
        TableId::Squares1000 => square_rows(SQUARES_1000, &[]),
        TableId::Squares5000 => square_rows(SQUARES_5000, &[]),
        TableId::Squares10000 => square_rows(SQUARES_10000, &[]),
        TableId::Squares100000 => square_rows(SQUARES_100000, &SQUARES_100000_AMBIGUOUS),
        TableId::Arbitrary1000 => fixed_rows(ARBITRARY_1000, Some(1000)),
        TableId::HundredMillions => fixed_rows(HUNDRED_MILLIONS, None),
        TableId::RecordMinima => fixed_rows(RECORD_MINIMA, None),
    }
}

/// The printed mean χ², where the table has one.
pub fn printed_mean(id: TableId) -> Option<f64> {
    match id {
        TableId::Squares1000 => Some(0.653),
        TableId::Squares5000 => Some(1.094),
        TableId::Squares10000 => Some(0.488),
        TableId::Squares100000 => Some(0.768),
        TableId::Arbitrary1000 => Some(0.780),
        TableId::HundredMillions => Some(0.5152),
        TableId::RecordMinima => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    /// 1-based row number as printed.
    pub no: usize,
    pub printed: PrintedRow,
    /// `None` when the segment ends beyond the compute budget.
    pub computed: Option<ChiSquareRow>,
}

impl ReportRow {
    /// Whether the recomputed sum equals the printed one; `None` when not
    /// computed or not asserted.
    pub fn l_matches(&self) -> Option<bool> {
        let c = self.computed.as_ref()?;
        self.printed.asserted.then_some(c.l == self.printed.l)
    }

    pub fn chi2_matches(&self) -> Option<bool> {
        let c = self.computed.as_ref()?;
        self.printed.asserted.then_some((c.chi2 - self.printed.chi2).abs() <= CHI2_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub table: TableId,
    pub max_n: u64,
    pub rows: Vec<ReportRow>,
    /// Mean χ² over the computed rows.
    pub mean_chi2: Option<f64>,
    pub printed_mean: Option<f64>,
    pub reference_mean: f64,
}

impl TableReport {
    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|r| r.computed.is_some())
    }

    pub fn computed_rows(&self) -> impl Iterator<Item = &ChiSquareRow> {
        self.rows.iter().filter_map(|r| r.computed.as_ref())
    }
}

/// Recomputes every row of `id` whose segment ends at or below `max_n`.
pub fn table_report(id: TableId, max_n: u64) -> Result<TableReport> {
    let printed = printed_rows(id);
    let in_budget = |p: &PrintedRow| p.spec.end() <= max_n;
    let computed: Vec<Option<ChiSquareRow>> = match id {
        TableId::HundredMillions | TableId::RecordMinima => {
            let targets: Vec<u64> = printed.iter().filter(|p| in_budget(p)).map(|p| p.spec.length).collect();
            let mut sums = summatory_at(&targets)?.into_iter();
            printed
                .iter()
                .map(|p| in_budget(p).then(|| ChiSquareRow::from_sum(p.spec, sums.next().expect("one sum per target"))))
                .collect()
        }
        _ => printed
            .iter()
            .map(|p| in_budget(p).then(|| chi_square_segment(p.spec)).transpose())
            .collect::<Result<_>>()?,
    };
    let rows: Vec<ReportRow> = printed
        .into_iter()
        .zip(computed)
        .enumerate()
        .map(|(i, (printed, computed))| ReportRow { no: i + 1, printed, computed })
        .collect();
    let mean_chi2 = mean(rows.iter().filter_map(|r| r.computed.map(|c| c.chi2)));
    Ok(TableReport {
        table: id,
        max_n,
        rows,
        mean_chi2,
        printed_mean: printed_mean(id),
        reference_mean: COIN_TOSS_REFERENCE,
    })
}

pub const CSV_HEADER: &str = "no,kind,length,from,to,L,chi2";

/// One CSV line per row, numbered from 1, then a `mean` trailer.
pub fn rows_to_csv(rows: &[ChiSquareRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        push_csv_row(&mut out, i + 1, &r.spec, Some(r));
    }
    push_mean(&mut out, mean(rows.iter().map(|r| r.chi2)));
    out
}

/// Rows over budget keep their segment columns and leave `L` and `chi2`
/// empty.
pub fn report_to_csv(report: &TableReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        push_csv_row(&mut out, r.no, &r.printed.spec, r.computed.as_ref());
    }
    push_mean(&mut out, report.mean_chi2);
    out
}

fn push_csv_row(out: &mut String, no: usize, spec: &SegmentSpec, row: Option<&ChiSquareRow>) {
    use std::fmt::Write;
    let _ = write!(out, "{no},{},{},{},{},", spec.kind, spec.length, spec.start, spec.end());
    match row {
        Some(r) => {
            let _ = writeln!(out, "{},{:.4}", r.l, r.chi2);
        }
        None => out.push_str(",\n"),
    }
}

fn push_mean(out: &mut String, m: Option<f64>) {
    use std::fmt::Write;
    match m {
        Some(m) => {
            let _ = writeln!(out, "mean,,,,,,{m:.4}");
        }
        None => out.push_str("mean,,,,,,\n"),
    }
}
