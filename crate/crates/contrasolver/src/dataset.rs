//! Line-delimited judgments file I/O.
//!
//! One JSON record per line, one record per prompt:
//! `{"prompt_key": ..., "prompt": ..., "responses": [...], "judgments":
//! [{"i": 0, "j": 1, "conf_fwd": 0.9, "conf_rev": null}, ...]}`.
//! Synthetic instances carry an extra `rewards` array. Floats round-trip
//! exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, BuildOutcome, JudgmentRecord};
use crate::synth::GroundTruthInstance;

/// One prompt's worth of upstream annotator output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub prompt_key: String,
    pub prompt: String,
    pub responses: Vec<String>,
    pub judgments: Vec<JudgmentRecord>,
    /// Hidden per-response rewards, present only for synthetic instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewards: Option<Vec<f64>>,
}

impl PromptRecord {
    pub fn build(&self, delta: f64) -> Result<BuildOutcome> {
        build_graph(
            &self.prompt_key,
            &self.prompt,
            &self.responses,
            &self.judgments,
            delta,
        )
    }

    pub fn from_instance(instance: &GroundTruthInstance) -> Self {
        PromptRecord {
            prompt_key: instance.graph.prompt_key().to_string(),
            prompt: instance.graph.prompt().to_string(),
            responses: instance.graph.response_texts().to_vec(),
            judgments: instance
                .graph
                .edges()
                .iter()
                .map(|e| JudgmentRecord {
                    first: e.src,
                    second: e.dst,
                    confidence_forward: e.weight,
                    confidence_reverse: None,
                })
                .collect(),
            rewards: Some(instance.rewards.clone()),
        }
    }
}

/// Reads records with their 1-based line numbers. Blank lines are skipped.
pub fn read_judgments<R: BufRead>(reader: R) -> Result<Vec<(usize, PromptRecord)>> {
    let mut records = Vec::new();
    for (number, line) in reader.lines().enumerate() {
        let line = line.map_err(Error::Io)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PromptRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: number + 1,
                reason: e.to_string(),
            })?;
        records.push((number + 1, record));
    }
    Ok(records)
}

pub fn read_judgments_file(path: &Path) -> Result<Vec<(usize, PromptRecord)>> {
    let file = File::open(path)?;
    read_judgments(BufReader::new(file))
}

/// Writes one record per line; returns the record count.
pub fn write_judgments<W: Write>(records: &[PromptRecord], mut sink: W) -> Result<usize> {
    let mut written = 0usize;
    for record in records {
        let line = serde_json::to_string(record).expect("prompt records always serialize");
        sink.write_all(line.as_bytes())
            .and_then(|()| sink.write_all(b"\n"))
            .map_err(|source| Error::PartialWrite { written, source })?;
        written += 1;
    }
    sink.flush()
        .map_err(|source| Error::PartialWrite { written, source })?;
    Ok(written)
}

pub fn write_judgments_file(records: &[PromptRecord], path: &Path) -> Result<usize> {
    let file = File::create(path)?;
    write_judgments(records, BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gen_instance;

    #[test]
    fn parses_a_record_line() {
        let line = concat!(
            r#"{"prompt_key":"p1","prompt":"pick one","responses":["a","b"],"#,
            r#""judgments":[{"i":0,"j":1,"conf_fwd":0.9,"conf_rev":0.8}]}"#,
            "\n",
        );
        let records = read_judgments(line.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        let (line_no, record) = &records[0];
        assert_eq!(*line_no, 1);
        assert_eq!(record.prompt_key, "p1");
        assert_eq!(record.judgments[0].confidence_reverse, Some(0.8));
        assert!(record.rewards.is_none());
    }

    #[test]
    fn reports_line_number_of_malformed_record() {
        let data = concat!(
            r#"{"prompt_key":"p1","prompt":"x","responses":["a"],"judgments":[]}"#,
            "\n",
            "not json\n",
        );
        let err = read_judgments(data.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MalformedRecord { line: 2, .. }));
    }

    #[test]
    fn skips_blank_lines() {
        let data = concat!(
            "\n",
            r#"{"prompt_key":"p1","prompt":"x","responses":["a"],"judgments":[]}"#,
            "\n\n",
        );
        let records = read_judgments(data.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].0, 2);
    }

    #[test]
    fn round_trips_synthetic_instance_with_rewards() {
        let instance = gen_instance(4, 3.0, 0.1, 5).unwrap();
        let record = PromptRecord::from_instance(&instance);
        let mut buffer = Vec::new();
        assert_eq!(
            write_judgments(std::slice::from_ref(&record), &mut buffer).unwrap(),
            1
        );
        let back = read_judgments(buffer.as_slice()).unwrap();
        assert_eq!(back[0].1, record);
        // Rebuilding at the synth threshold reproduces the instance graph.
        let rebuilt = back[0].1.build(0.5).unwrap();
        assert_eq!(rebuilt.graph, instance.graph);
    }
}
