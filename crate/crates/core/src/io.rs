//! CSV serialisation of the run outputs.
//!
//! Formats:
//! - step records: `step,mid,ret,volume,spread,delta_v,n_bar` (spread empty
//!   when a side of the book was empty);
//! - event log: `step,seq,type,agent,direction,price,volume` with type one
//!   of `L` (limit deposition), `M` (market submission), `C` (cancellation),
//!   `F` (fill, keyed by the taker); market rows carry an empty price;
//! - market orders: `step,signed_volume,mid_change`;
//! - depth snapshots: `step,side,distance,volume` with side `B` or `A`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matching_engine::{AgentId, DepthProfile, Direction, Volume};
use crate::simulator::{ImpactRecord, StepRecord};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn write_step_records<W: Write>(writer: W, records: &[StepRecord]) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(writer);
    for record in records {
        out.serialize(record)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_step_records<R: Read>(reader: R) -> Result<Vec<StepRecord>, IoError> {
    let mut input = csv::Reader::from_reader(reader);
    let mut records = Vec::new();
    for row in input.deserialize() {
        records.push(row?);
    }
    Ok(records)
}

pub fn write_impact_records<W: Write>(writer: W, impacts: &[ImpactRecord]) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(writer);
    for impact in impacts {
        out.serialize(impact)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_impact_records<R: Read>(reader: R) -> Result<Vec<ImpactRecord>, IoError> {
    let mut input = csv::Reader::from_reader(reader);
    let mut impacts = Vec::new();
    for row in input.deserialize() {
        impacts.push(row?);
    }
    Ok(impacts)
}

#[derive(Debug, Serialize, Deserialize)]
struct DepthRow {
    step: u64,
    side: char,
    distance: f64,
    volume: Volume,
}

pub fn write_depth_snapshots<W: Write>(
    writer: W,
    snapshots: &[(u64, DepthProfile)],
) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(writer);
    for (step, profile) in snapshots {
        for &(distance, volume) in &profile.bid {
            out.serialize(DepthRow {
                step: *step,
                side: 'B',
                distance,
                volume,
            })?;
        }
        for &(distance, volume) in &profile.ask {
            out.serialize(DepthRow {
                step: *step,
                side: 'A',
                distance,
                volume,
            })?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_depth_snapshots<R: Read>(reader: R) -> Result<Vec<(u64, DepthProfile)>, IoError> {
    let mut input = csv::Reader::from_reader(reader);
    let mut snapshots: Vec<(u64, DepthProfile)> = Vec::new();
    for row in input.deserialize() {
        let row: DepthRow = row?;
        if snapshots.last().map(|(s, _)| *s) != Some(row.step) {
            snapshots.push((row.step, DepthProfile::default()));
        }
        let profile = &mut snapshots.last_mut().expect("pushed above").1;
        match row.side {
            'B' => profile.bid.push((row.distance, row.volume)),
            _ => profile.ask.push((row.distance, row.volume)),
        }
    }
    Ok(snapshots)
}

/// Append-only event log sink.
pub struct EventWriter {
    out: csv::Writer<Box<dyn Write + Send>>,
}

impl std::fmt::Debug for EventWriter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("EventWriter")
    }
}

impl EventWriter {
    pub fn new<W: Write + Send + 'static>(writer: W) -> Result<Self, IoError> {
        let mut out = csv::Writer::from_writer(Box::new(writer) as Box<dyn Write + Send>);
        out.write_record(["step", "seq", "type", "agent", "direction", "price", "volume"])?;
        Ok(EventWriter { out })
    }

    #[allow(clippy::too_many_arguments)]
    pub fn write_event(
        &mut self,
        step: u64,
        seq: u64,
        kind: char,
        agent: AgentId,
        direction: Direction,
        price: Option<i64>,
        volume: Volume,
    ) -> Result<(), IoError> {
        self.out.write_record([
            step.to_string(),
            seq.to_string(),
            kind.to_string(),
            agent.to_string(),
            direction.sign().to_string(),
            price.map(|p| p.to_string()).unwrap_or_default(),
            volume.to_string(),
        ])?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), IoError> {
        self.out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_records_round_trip() {
        let records = vec![
            StepRecord {
                step: 2000,
                mid: 1000.5,
                ret: -0.5,
                volume: 12,
                spread: Some(3),
                delta_v: -40,
                n_bar: 210,
            },
            StepRecord {
                step: 2001,
                mid: 1000.5,
                ret: 0.0,
                volume: 0,
                spread: None,
                delta_v: 7,
                n_bar: 208,
            },
        ];
        let mut buf = Vec::new();
        write_step_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("step,mid,ret,volume,spread,delta_v,n_bar\n"));
        assert!(text.contains("2000,1000.5,-0.5,12,3,-40,210"));
        assert!(text.contains("2001,1000.5,0.0,0,,7,208"));
        let back = read_step_records(buf.as_slice()).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn impact_records_round_trip() {
        let impacts = vec![ImpactRecord {
            step: 5,
            signed_volume: -9,
            mid_change: -1.5,
        }];
        let mut buf = Vec::new();
        write_impact_records(&mut buf, &impacts).unwrap();
        let back = read_impact_records(buf.as_slice()).unwrap();
        assert_eq!(back, impacts);
    }

    #[test]
    fn depth_snapshots_round_trip() {
        let snapshots = vec![
            (
                100,
                DepthProfile {
                    bid: vec![(0.5, 4), (2.5, 1)],
                    ask: vec![(1.5, 2)],
                },
            ),
            (
                200,
                DepthProfile {
                    bid: vec![(1.0, 3)],
                    ask: vec![(1.0, 8), (4.0, 2)],
                },
            ),
        ];
        let mut buf = Vec::new();
        write_depth_snapshots(&mut buf, &snapshots).unwrap();
        let back = read_depth_snapshots(buf.as_slice()).unwrap();
        assert_eq!(back, snapshots);
    }

    #[test]
    fn event_writer_formats_rows() {
        let buf: Vec<u8> = Vec::new();
        let shared = std::sync::Arc::new(std::sync::Mutex::new(buf));
        struct SharedWriter(std::sync::Arc<std::sync::Mutex<Vec<u8>>>);
        impl Write for SharedWriter {
            fn write(&mut self, data: &[u8]) -> std::io::Result<usize> {
                self.0.lock().unwrap().extend_from_slice(data);
                Ok(data.len())
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        let mut events = EventWriter::new(SharedWriter(shared.clone())).unwrap();
        events
            .write_event(3, 0, 'L', 17, Direction::Buy, Some(999), 4)
            .unwrap();
        events
            .write_event(3, 1, 'M', 9, Direction::Sell, None, 2)
            .unwrap();
        events.flush().unwrap();
        let text = String::from_utf8(shared.lock().unwrap().clone()).unwrap();
        assert_eq!(
            text,
            "step,seq,type,agent,direction,price,volume\n3,0,L,17,1,999,4\n3,1,M,9,-1,,2\n"
        );
    }
}
