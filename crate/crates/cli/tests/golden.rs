//! Report layouts checked against `data/golden`. Run with `CIB_BLESS=1` to
//! rewrite the golden files after a deliberate change.

mod common;

#[test]
fn report_tables_match_golden_files() {
    let bad = common::golden_mismatches(std::env::var_os("CIB_BLESS").is_some());
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn golden_tables_have_the_expected_shape() {
    let full = std::fs::read_to_string(common::data("golden/agreement_table.txt")).unwrap();
    let dropped = std::fs::read_to_string(common::data("golden/agreement_table_dropped.txt")).unwrap();
    let rows = |t: &str| -> Vec<String> {
        t.lines()
            .filter(|l| l.contains(" vs. "))
            .map(|l| l.split("  ").next().unwrap().to_string())
            .collect()
    };
    for t in [&full, &dropped] {
        assert!(t.starts_with("Average percent agreement over the videos\n"));
        assert!(t.contains("Comparison"));
        assert!(t.contains("Percentage agreement"));
        assert_eq!(rows(t), ["Rater 1 vs. Rater 2", "ML vs. Rater 1", "ML vs. Rater 2"]);
    }
    assert!(!full.contains("Dropped"));
    assert_eq!(dropped.lines().nth(1), Some("Dropped CIB items : gaze and vocalization"));
}
