#[path = "support/dem_golden.rs"]
mod golden;

#[test]
fn golden_files() {
    let cases = golden::check_all(&golden::data_dir()).unwrap_or_else(|e| panic!("{e}"));
    assert!(cases >= 8, "only {cases} golden cases found");
}
