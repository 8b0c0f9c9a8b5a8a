use crate::algorithm::{Algorithm, Variant};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

pub const CSV_HEADER: &str =
    "algorithm,variant,config_id,instance,n,seed,rep,best_cost,elapsed_s,evaluations,nodes_expanded,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    TimeoutWithResult,
    Failed,
}

impl RunStatus {
    pub fn has_result(self) -> bool {
        self != RunStatus::Failed
    }
}

/// One row of benchmark output. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub variant: Variant,
    pub config_id: String,
    pub instance: String,
    pub n: usize,
    pub seed: u64,
    pub rep: usize,
    pub best_cost: Option<f64>,
    pub elapsed_s: f64,
    pub evaluations: u64,
    pub nodes_expanded: Option<u64>,
    pub status: RunStatus,
}

impl RunRecord {
    pub(crate) fn sort_key(&self) -> (Algorithm, Variant, &str, &str, usize) {
        (self.algorithm, self.variant, &self.config_id, &self.instance, self.rep)
    }
}

pub fn write_records_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<RunRecord>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<RunRecord> {
        vec![
            RunRecord {
                algorithm: Algorithm::Ga,
                variant: Variant::HybridR1,
                config_id: "r1".into(),
                instance: "rand8_s1".into(),
                n: 8,
                seed: 123,
                rep: 0,
                best_cost: Some(0.1 + 0.2),
                elapsed_s: 0.012345678901234,
                evaluations: 500,
                nodes_expanded: None,
                status: RunStatus::Ok,
            },
            RunRecord {
                algorithm: Algorithm::BranchAndBound,
                variant: Variant::Baseline,
                config_id: "none".into(),
                instance: "x".into(),
                n: 10,
                seed: u64::MAX,
                rep: 1,
                best_cost: None,
                elapsed_s: 1.0,
                evaluations: 0,
                nodes_expanded: Some(77),
                status: RunStatus::Failed,
            },
        ]
    }

    #[test]
    fn header_and_round_trip() {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert_eq!(read_records_csv(text.as_bytes()).unwrap(), sample());
    }

    #[test]
    fn empty_output_still_has_header() {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CSV_HEADER);
    }
}
