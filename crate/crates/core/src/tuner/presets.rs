use super::space::{ParamConfig, Provenance};
use super::TunerError;
use crate::algorithm::{Algorithm, ParamValues};
use std::collections::BTreeMap;
use std::sync::OnceLock;

pub const PRESET_COLUMNS: [&str; 6] = ["original", "claude", "gemini", "llama", "o1", "r1"];

const PRESET_DATA: &str = include_str!("../../data/presets.toml");

type Table = BTreeMap<String, BTreeMap<String, ParamValues>>;

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let doc: toml::Table = PRESET_DATA.parse().expect("embedded preset table parses");
        let mut out = Table::new();
        for (algorithm, columns) in doc.iter().filter(|(k, _)| *k != "version") {
            let columns = columns.as_table().expect("algorithm entry is a table");
            let entry = out.entry(algorithm.clone()).or_default();
            for (column, values) in columns {
                let values = values
                    .as_table()
                    .expect("column entry is a table")
                    .iter()
                    .map(|(k, v)| {
                        let x = v.as_float().or_else(|| v.as_integer().map(|i| i as f64));
                        (k.clone(), x.expect("preset value is numeric"))
                    })
                    .collect();
                entry.insert(column.clone(), values);
            }
        }
        out
    })
}

/// Tuned values for `algorithm` from the named column.
pub fn preset(algorithm: Algorithm, column: &str) -> Result<ParamConfig, TunerError> {
    if !algorithm.is_stochastic() {
        return Err(TunerError::UnknownAlgorithm(algorithm));
    }
    let column = column.trim().to_ascii_lowercase();
    let values = table()
        .get(algorithm.id())
        .and_then(|cols| cols.get(&column))
        .ok_or_else(|| TunerError::NoSuchColumn(column.clone()))?;
    Ok(ParamConfig {
        algorithm,
        provenance: Provenance::Preset { column },
        values: values.clone(),
    })
}
