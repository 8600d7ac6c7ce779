use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cib_core::rating::AgreementReport;
use cib_core::Concept;

use crate::error::CliError;

pub const SUMMARY_CSV: &str = "agreement.csv";
pub const TABLE_TXT: &str = "agreement_table.txt";
pub const ITEMS_CSV: &str = "agreement_items.csv";
pub const VIDEOS_CSV: &str = "agreement_videos.csv";
pub const ITEMS_SVG: &str = "agreement_items.svg";

pub const TABLE_TITLE: &str = "Average percent agreement over the videos";

/// One pairwise comparison, labelled for display.
pub struct Comparison {
    pub label: String,
    pub report: AgreementReport,
}

/// Whole percent, halves away from zero.
fn whole_percent(p: f64) -> i64 {
    p.round() as i64
}

/// Joins names as "a", "a and b", "a, b and c".
fn join_names(names: &[&str]) -> String {
    match names {
        [] => String::new(),
        [one] => (*one).to_string(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

pub fn render_table(comparisons: &[Comparison], dropped: &[Concept]) -> String {
    let mut out = String::new();
    out.push_str(TABLE_TITLE);
    out.push('\n');
    if !dropped.is_empty() {
        let names: Vec<&str> = dropped.iter().map(|c| c.as_str()).collect();
        let _ = writeln!(out, "Dropped CIB items : {}", join_names(&names));
    }
    let head = ("Comparison", "Percentage agreement");
    let width = comparisons
        .iter()
        .map(|c| c.label.len())
        .chain([head.0.len()])
        .max()
        .unwrap_or(0);
    let rule = "-".repeat(width + 2 + head.1.len());
    let _ = writeln!(out, "{rule}");
    let _ = writeln!(out, "{:<width$}  {}", head.0, head.1);
    let _ = writeln!(out, "{rule}");
    for c in comparisons {
        let _ = writeln!(out, "{:<width$}  {}%", c.label, whole_percent(c.report.average));
    }
    let _ = writeln!(out, "{rule}");
    out
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::internal(format!("writing {}: {e}", path.display()))
}

fn items_field(items: &[Concept]) -> String {
    items.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(";")
}

fn write_summary(path: &Path, comparisons: &[Comparison]) -> Result<(), CliError> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(["comparison", "rater_a", "rater_b", "items", "videos", "pairs", "average_percent"])
        .map_err(&err)?;
    for c in comparisons {
        let r = &c.report;
        w.write_record([
            c.label.clone(),
            r.rater_a.clone(),
            r.rater_b.clone(),
            items_field(&r.items),
            r.per_video.len().to_string(),
            r.compared_pairs.to_string(),
            r.average.to_string(),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| CliError::internal(format!("writing {}: {e}", path.display())))
}

/// Rows are items, columns comparisons; blank where a pair shared no video.
fn write_items(path: &Path, items: &[Concept], comparisons: &[Comparison]) -> Result<(), CliError> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    let mut header = vec!["item".to_string()];
    header.extend(comparisons.iter().map(|c| c.label.clone()));
    w.write_record(&header).map_err(&err)?;
    for &item in items {
        let mut row = vec![item.label().to_string()];
        row.extend(comparisons.iter().map(|c| {
            c.report
                .item(item)
                .map(|a| a.percent.to_string())
                .unwrap_or_default()
        }));
        w.write_record(&row).map_err(&err)?;
    }
    w.flush().map_err(|e| CliError::internal(format!("writing {}: {e}", path.display())))
}

fn write_videos(path: &Path, comparisons: &[Comparison]) -> Result<(), CliError> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(["comparison", "video_id", "pairs", "percent"]).map_err(&err)?;
    for c in comparisons {
        for v in &c.report.per_video {
            w.write_record([
                c.label.clone(),
                v.video_id.clone(),
                v.pairs.to_string(),
                v.percent.to_string(),
            ])
            .map_err(&err)?;
        }
    }
    w.flush().map_err(|e| CliError::internal(format!("writing {}: {e}", path.display())))
}

const PALETTE: [&str; 6] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Grouped bar chart of per-item agreement, one bar per comparison.
pub fn render_items_svg(items: &[Concept], comparisons: &[Comparison]) -> String {
    let (left, top, plot_h, bottom) = (50.0, 20.0, 200.0, 70.0);
    let bar_w = 14.0;
    let group_w = bar_w * comparisons.len().max(1) as f64 + 16.0;
    let plot_w = group_w * items.len().max(1) as f64;
    let width = left + plot_w + 20.0;
    let legend_h = 18.0 * comparisons.len() as f64;
    let height = top + plot_h + bottom + legend_h;
    let y_of = |p: f64| top + plot_h * (1.0 - p / 100.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    for tick in (0..=100).step_by(20) {
        let y = y_of(tick as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">{tick}%</text>"##,
            left + plot_w,
            left - 4.0,
            y + 3.0
        );
    }
    for (g, &item) in items.iter().enumerate() {
        let x0 = left + g as f64 * group_w + 8.0;
        for (k, c) in comparisons.iter().enumerate() {
            if let Some(a) = c.report.item(item) {
                let y = y_of(a.percent);
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{y}" width="{bar_w}" height="{}" fill="{}"><title>{}: {}%</title></rect>"#,
                    x0 + k as f64 * bar_w,
                    top + plot_h - y,
                    PALETTE[k % PALETTE.len()],
                    escape(&c.label),
                    whole_percent(a.percent)
                );
            }
        }
        let cx = x0 + bar_w * comparisons.len() as f64 / 2.0;
        let _ = writeln!(
            s,
            r#"<text x="{cx}" y="{}" text-anchor="middle">{}</text>"#,
            top + plot_h + 14.0,
            escape(item.label())
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        top + plot_h,
        left + plot_w
    );
    for (k, c) in comparisons.iter().enumerate() {
        let y = top + plot_h + bottom - 30.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{left}" y="{y}" width="10" height="10" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            PALETTE[k % PALETTE.len()],
            left + 14.0,
            y + 9.0,
            escape(&c.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes every report file into `dir` and returns the rendered table.
pub fn write_reports(
    dir: &Path,
    items: &[Concept],
    dropped: &[Concept],
    comparisons: &[Comparison],
) -> Result<String, CliError> {
    let io = |p: &Path, e: std::io::Error| CliError::internal(format!("writing {}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    write_summary(&dir.join(SUMMARY_CSV), comparisons)?;
    write_items(&dir.join(ITEMS_CSV), items, comparisons)?;
    write_videos(&dir.join(VIDEOS_CSV), comparisons)?;
    let svg = dir.join(ITEMS_SVG);
    fs::write(&svg, render_items_svg(items, comparisons)).map_err(|e| io(&svg, e))?;
    let table = render_table(comparisons, dropped);
    let txt = dir.join(TABLE_TXT);
    fs::write(&txt, &table).map_err(|e| io(&txt, e))?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comparison(label: &str, average: f64) -> Comparison {
        Comparison {
            label: label.into(),
            report: AgreementReport {
                rater_a: "a".into(),
                rater_b: "b".into(),
                items: Concept::ALL.to_vec(),
                per_item: vec![],
                per_video: vec![],
                average,
                compared_pairs: 0,
            },
        }
    }

    #[test]
    fn table_rounds_halves_up_and_aligns() {
        let t = render_table(
            &[comparison("Rater 1 vs. Rater 2", 82.5), comparison("ML vs. Rater 1", 66.4)],
            &[],
        );
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], TABLE_TITLE);
        assert!(lines[4].ends_with("  83%"));
        assert!(lines[5].ends_with("  66%"));
        assert_eq!(lines[4].find("83"), lines[2].find("Percentage"));
    }

    #[test]
    fn dropped_line_names_items() {
        let t = render_table(&[], &[Concept::Gaze, Concept::Vocalization]);
        assert_eq!(t.lines().nth(1), Some("Dropped CIB items : gaze and vocalization"));
        assert_eq!(join_names(&["a", "b", "c"]), "a, b and c");
    }
}
