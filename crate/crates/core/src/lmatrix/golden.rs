use super::color::VertexKey;
use super::ln_weight;
use crate::weights::Weight;

/// All two-color configurations with nonzero weight, in key order.
pub fn l2_golden_table() -> Vec<(VertexKey, Weight)> {
    VertexKey::all(2)
        .map(|key| (key, ln_weight(&key)))
        .filter(|(_, w)| !w.is_zero())
        .collect()
}

/// One `i j k l weight` line per entry, newline terminated.
pub fn render_golden_table(table: &[(VertexKey, Weight)]) -> String {
    table.iter().map(|(key, w)| format!("{key} {w}\n")).collect()
}
