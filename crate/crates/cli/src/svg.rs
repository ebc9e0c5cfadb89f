//! Step plots of tower waves: one band per tower in order of base, then the
//! running L(N) trace underneath.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use liouville_core::summatory::{wave_trace, WaveTrace};
use liouville_core::towers::towers_up_to;
use liouville_core::{liouville_segment, Result, TowerLabel};

pub const TOWERS_PER_PAGE: usize = 40;

const WIDTH: f64 = 960.0;
const LEFT: f64 = 110.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BAND: f64 = 22.0;
const AMPLITUDE: f64 = 8.0;
const TRACE: f64 = 160.0;

/// Waves of the trivial tower and of every tower met by `2..=max_n`.
pub fn collect_waves(max_n: u64) -> Result<Vec<WaveTrace>> {
    let mut labels = vec![TowerLabel::TRIVIAL];
    if max_n >= 2 {
        labels.extend(towers_up_to(max_n)?.into_keys());
    }
    labels.iter().map(|l| wave_trace(l, max_n)).collect()
}

fn page_path(path: &Path, page: usize, pages: usize) -> PathBuf {
    if pages == 1 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{:03}.{}", page + 1, ext.to_string_lossy()),
        None => format!("{stem}-{:03}", page + 1),
    };
    path.with_file_name(name)
}

/// Writes one SVG per group of [`TOWERS_PER_PAGE`] towers and returns the
/// paths written.
pub fn write_pages(path: &Path, waves: &[WaveTrace], max_n: u64) -> Result<Vec<PathBuf>> {
    let lambda = liouville_segment(1, max_n)?;
    let mut running = 0i64;
    let totals: Vec<i64> = lambda
        .values()
        .iter()
        .map(|&v| {
            running += v as i64;
            running
        })
        .collect();
    let pages = waves.len().div_ceil(TOWERS_PER_PAGE);
    let mut written = Vec::with_capacity(pages);
    for (page, chunk) in waves.chunks(TOWERS_PER_PAGE).enumerate() {
        let doc = render_page(chunk, &totals, max_n, page * TOWERS_PER_PAGE, waves.len());
        let target = page_path(path, page, pages);
        fs::write(&target, doc)?;
        written.push(target);
    }
    Ok(written)
}

fn render_page(waves: &[WaveTrace], totals: &[i64], max_n: u64, offset: usize, total: usize) -> String {
    let plot = WIDTH - LEFT - RIGHT;
    let x = |n: u64| LEFT + plot * n as f64 / max_n as f64;
    let trace_top = TOP + BAND * waves.len() as f64 + 20.0;
    let height = trace_top + TRACE + 30.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{LEFT}" y="20">towers {}-{} of {total}, n &lt;= {max_n}</text>"#,
        offset + 1,
        offset + waves.len()
    );

    for (i, w) in waves.iter().enumerate() {
        let base = TOP + BAND * i as f64 + BAND / 2.0;
        let _ = writeln!(s, r#"<text x="4" y="{:.1}">{}</text>"#, base + 4.0, w.label);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{base:.1}" x2="{:.1}" y2="{base:.1}" stroke="#ccc"/>"##,
            WIDTH - RIGHT
        );
        let mut d = format!("M{LEFT:.1},{base:.1}");
        for &(n, c) in &w.steps {
            let _ = write!(d, " H{:.2} V{:.1}", x(n), base - c as f64 * AMPLITUDE);
        }
        let _ = write!(d, " H{:.1}", WIDTH - RIGHT);
        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="black"/>"#);
    }

    let peak = totals.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0).max(1) as f64;
    let mid = trace_top + TRACE / 2.0;
    let y = |v: i64| mid - v as f64 / peak * (TRACE / 2.0 - 4.0);
    let _ = writeln!(s, r#"<text x="4" y="{:.1}">L(n)</text>"#, mid + 4.0);
    let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{mid:.1}" x2="{:.1}" y2="{mid:.1}" stroke="#ccc"/>"##, WIDTH - RIGHT);
    let mut d = format!("M{LEFT:.1},{mid:.1}");
    for (i, &v) in totals.iter().enumerate() {
        let _ = write!(d, " H{:.2} V{:.1}", x(i as u64 + 1), y(v));
    }
    let _ = writeln!(s, r##"<path d="{d}" fill="none" stroke="#b22"/>"##);
    let _ = writeln!(s, r#"<text x="{LEFT}" y="{:.1}">max |L| = {peak}</text>"#, trace_top + TRACE + 20.0);
    s.push_str("</svg>\n");
    s
}
