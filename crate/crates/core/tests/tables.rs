use plexus::basis::{enumerate_stage, DEFAULT_BIT_BUDGET};
use plexus::tables::{
    diff_monadics, diff_polyadics, diff_tree, monadics_table, parse_golden, polyadics_table, rank_row_start,
    render_polyadics, tree_table,
};

const POLYADICS: &str = include_str!("../golden/polyadics.txt");
const MONADICS: &str = include_str!("../golden/monadics.txt");
const TREE: &str = include_str!("../golden/tree.txt");

#[test]
fn polyadics_match_transcription() {
    let rows = polyadics_table(6, DEFAULT_BIT_BUDGET).unwrap();
    let golden = parse_golden(POLYADICS);
    assert_eq!(golden.len(), 52);
    let report = diff_polyadics(&rows, &golden);
    assert!(report.passed(), "{report}");
}

#[test]
fn only_serial_ten_diverges() {
    let rows = polyadics_table(6, DEFAULT_BIT_BUDGET).unwrap();
    let flagged: Vec<_> = rows.iter().filter(|r| r.diverges()).collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0].label, "10");
    assert_eq!((flagged[0].rule, flagged[0].printed), ('+', '-'));
    let text = render_polyadics(&rows);
    let line = text.lines().find(|l| l.contains("DIVERGES")).unwrap();
    assert!(line.contains("printed -") && line.contains("rule +"));
}

#[test]
fn rows_agree_with_enumeration() {
    // Ranks 0..3 are exactly stage 3 in serial order.
    let rows = polyadics_table(3, DEFAULT_BIT_BUDGET).unwrap();
    let stage: Vec<_> = enumerate_stage(3).unwrap().collect();
    assert_eq!(rows.len(), stage.len());
    for (r, m) in rows.iter().zip(&stage) {
        assert_eq!(r.serial.as_ref().unwrap(), &m.serial().unwrap().0);
        assert_eq!(r.rank, m.rank());
    }
}

#[test]
fn high_rank_rows_open_at_exp() {
    let rows = polyadics_table(6, DEFAULT_BIT_BUDGET).unwrap();
    let first5 = rows.iter().find(|r| r.rank == 5).unwrap();
    assert_eq!(first5.serial.as_ref().unwrap(), &rank_row_start(5, DEFAULT_BIT_BUDGET).unwrap());
    let first6 = rows.iter().find(|r| r.rank == 6).unwrap();
    assert_eq!(first6.serial.as_ref().unwrap().bits(), 65537);
    // A small budget keeps the row but drops the serial.
    let small = polyadics_table(6, 1024).unwrap();
    assert!(small.iter().filter(|r| r.rank == 6).all(|r| r.serial.is_none() && r.note.is_some()));
}

#[test]
fn monadics_match_transcription() {
    let rows = monadics_table();
    assert_eq!(rows.len(), 16);
    for r in &rows {
        assert_eq!(r.serial, 1u64 << r.log2_serial);
    }
    let report = diff_monadics(&rows, &parse_golden(MONADICS));
    assert!(report.passed(), "{report}");
}

#[test]
fn tree_matches_transcription() {
    let rows = tree_table(3).unwrap();
    let report = diff_tree(&rows, &parse_golden(TREE));
    assert!(report.passed(), "{report}");
    assert_eq!(rows[3].group, "SO(16,16)");
    assert!(tree_table(4).is_err());
}
