use s6v_core::lmatrix::{l2_golden_table, ln_weight, render_golden_table, ColorVector, VertexKey};

const GOLDEN: &str = include_str!("data/l2_golden.txt");

#[test]
fn two_color_table_is_byte_exact() {
    assert_eq!(render_golden_table(&l2_golden_table()), GOLDEN);
}

#[test]
fn golden_lines_parse_back() {
    for line in GOLDEN.lines() {
        let parts: Vec<&str> = line.split(' ').collect();
        assert_eq!(parts.len(), 5);
        let v: Vec<ColorVector> = parts[..4].iter().map(|s| s.parse().unwrap()).collect();
        let key = VertexKey::new(v[0], v[1], v[2], v[3]).unwrap();
        assert_eq!(ln_weight(&key).to_string(), parts[4]);
    }
}

#[test]
fn annihilated_configurations_are_absent() {
    for line in ["10 10 11 11", "00 00 11 11"] {
        assert!(!GOLDEN.lines().any(|l| l.starts_with(line)));
    }
}
