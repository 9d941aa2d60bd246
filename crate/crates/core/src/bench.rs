//! Per-phase timing of the pipeline on synthetic methods.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::corpus::{synthetic_method, unit_of, Profile};
use crate::data_flow::DataFlowAlgorithm;
use crate::frontend::{parse_java, print_unit};
use crate::model::graphs_to_xml;
use crate::pipeline::{transform_unit, Options, PhaseTimes};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub size: usize,
    pub instrs: usize,
    pub df_edges: usize,
    /// Median over the repetitions, per phase.
    pub medians: PhaseTimes,
}

/// Runs the whole pipeline, from source text to XML, `repeats` times per size.
pub fn run_bench(profile: Profile, sizes: &[usize], repeats: usize, algorithm: DataFlowAlgorithm) -> Vec<BenchRow> {
    let repeats = repeats.max(1);
    sizes
        .iter()
        .map(|&size| {
            let source = print_unit(&unit_of(vec![synthetic_method(profile, size)]));
            let mut samples = Vec::with_capacity(repeats);
            let mut instrs = 0;
            let mut df_edges = 0;
            for _ in 0..repeats {
                let mut times = PhaseTimes::default();
                let start = Instant::now();
                let unit = parse_java(&source).expect("synthetic source parses");
                times.read = start.elapsed();
                let options = Options {
                    control_flow: true,
                    data_flow: Some(algorithm),
                };
                let graphs = transform_unit(&unit, options, &mut times).expect("synthetic method transforms");
                let start = Instant::now();
                let xml = graphs_to_xml(&graphs);
                times.write = start.elapsed();
                std::hint::black_box(xml);
                instrs = graphs[0].len();
                df_edges = graphs[0].df_edge_count();
                samples.push(times);
            }
            BenchRow {
                size,
                instrs,
                df_edges,
                medians: medians(&samples),
            }
        })
        .collect()
}

fn median(mut values: Vec<Duration>) -> Duration {
    values.sort();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2
    }
}

fn medians(samples: &[PhaseTimes]) -> PhaseTimes {
    let phase = |i: usize| median(samples.iter().map(|s| s.as_array()[i]).collect());
    PhaseTimes {
        read: phase(0),
        transform: phase(1),
        control_flow: phase(2),
        data_flow: phase(3),
        write: phase(4),
    }
}

/// Tab-separated table: size, instruction count, and microseconds per phase.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = String::from("size\tinstrs");
    for name in PhaseTimes::NAMES {
        let _ = write!(out, "\t{name}_us");
    }
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{}\t{}", row.size, row.instrs);
        for d in row.medians.as_array() {
            let _ = write!(out, "\t{}", d.as_micros());
        }
        out.push('\n');
    }
    out
}
