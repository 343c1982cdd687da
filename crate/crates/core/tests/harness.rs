use std::cell::Cell;
use std::fs;

use devdan_core::harness::write_report;
use devdan_core::streams::{SeaConfig, SeaGenerator};
use devdan_core::{
    aggregate, prequential_run, DatasetSpec, ExperimentConfig, MetricsTimeline, RunOutput,
    TimestampRecord, Variant,
};

fn sea(samples: usize, batch_size: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        dataset: DatasetSpec::Sea {
            samples,
            thresholds: vec![8.0, 9.0, 7.0, 9.5],
            noise: 0.0,
        },
        batch_size,
        seed,
        timing: false,
        ..Default::default()
    }
}

fn nop(n: usize, r: usize, m: usize) -> usize {
    n * r + r + n + r * m + m
}

#[test]
fn every_batch_is_scored_before_it_is_trained_on() {
    let cfg = sea(5_000, 400, 2);
    let stream = SeaGenerator::new(&SeaConfig {
        samples: 5_000,
        seed: 2,
        ..Default::default()
    })
    .unwrap();
    let seen = Cell::new(0usize);
    let out = devdan_core::harness::prequential_run_with(stream, &cfg, |learner, batch| {
        let before = seen.get();
        assert_eq!(
            learner.counters().labels_seen as usize,
            before,
            "batch {}",
            batch.index
        );
        assert_eq!(
            learner.stats().count() as usize,
            before,
            "batch {}",
            batch.index
        );
        seen.set(before + batch.len());
    })
    .unwrap();
    assert_eq!(seen.get(), 5_000);
    assert_eq!(out.timeline.len(), 13);
    assert_eq!(out.counters.labels_seen, 5_000u64);
}

#[test]
fn parameter_count_identity_holds_throughout() {
    let out = prequential_run(&sea(20_000, 500, 4)).unwrap();
    for r in &out.timeline.records {
        assert_eq!(
            r.parameters,
            nop(3, r.hidden_nodes, 2),
            "timestamp {}",
            r.timestamp
        );
        assert!(r.hidden_nodes >= 1);
    }
    assert!(!out.events.is_empty());
    for e in &out.events {
        assert!(e.hidden_after >= 1);
    }
}

#[test]
fn event_log_is_ordered_and_consistent() {
    let out = prequential_run(&sea(30_000, 500, 6)).unwrap();
    for pair in out.events.windows(2) {
        assert!(
            (pair[0].timestamp, pair[0].step) < (pair[1].timestamp, pair[1].step),
            "{:?} then {:?}",
            pair[0],
            pair[1]
        );
    }
    let grows = out
        .events
        .iter()
        .filter(|e| e.kind == devdan_core::EventKind::Grow)
        .count();
    assert_eq!(grows, out.growth_events);
    assert_eq!(
        out.growth_events as i64 - out.prune_events as i64,
        out.final_state.as_ref().unwrap().n_hidden() as i64 - 1
    );
}

#[test]
fn identical_runs_write_identical_files() {
    let cfg = sea(10_000, 500, 8);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let pa = write_report(&prequential_run(&cfg).unwrap(), a.path()).unwrap();
    let pb = write_report(&prequential_run(&cfg).unwrap(), b.path()).unwrap();
    for (x, y) in [
        (pa.timeline, pb.timeline),
        (pa.events, pb.events),
        (pa.summary, pb.summary),
    ] {
        assert_eq!(
            fs::read(&x).unwrap(),
            fs::read(&y).unwrap(),
            "{}",
            x.display()
        );
    }
}

#[test]
fn report_has_one_row_per_batch() {
    let out = prequential_run(&sea(1_500, 500, 1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let paths = write_report(&out, dir.path()).unwrap();
    let timeline = fs::read_to_string(&paths.timeline).unwrap();
    let lines: Vec<&str> = timeline.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[0],
        "timestamp,classification_rate,hidden_nodes,parameters,elapsed_seconds"
    );
    assert!(fs::read_to_string(&paths.events)
        .unwrap()
        .starts_with("timestamp,step,sample,phase,event,unit,hidden_after,"));
    assert!(paths.trace.is_none());

    let summary: RunOutput =
        serde_json::from_str(&fs::read_to_string(&paths.summary).unwrap()).unwrap();
    assert_eq!(summary.summary, out.summary);
}

#[test]
fn traced_run_writes_a_trace() {
    let cfg = ExperimentConfig {
        trace: true,
        ..sea(1_000, 500, 1)
    };
    let out = prequential_run(&cfg).unwrap();
    // The very first sample has no input statistics to estimate from.
    assert_eq!(out.trace.len(), 1_999);
    let dir = tempfile::tempdir().unwrap();
    let paths = write_report(&out, dir.path()).unwrap();
    let trace = fs::read_to_string(paths.trace.unwrap()).unwrap();
    assert_eq!(trace.lines().count(), 2_000);
}

#[test]
fn aggregate_matches_offline_recomputation() {
    let records: Vec<TimestampRecord> = (0..200)
        .map(|k| TimestampRecord {
            timestamp: k,
            classification_rate: 0.5 + 0.4 * ((k * 37 % 101) as f64 / 101.0),
            hidden_nodes: 1 + k % 7,
            parameters: nop(3, 1 + k % 7, 2),
            elapsed_seconds: 0.01 * (k + 1) as f64,
        })
        .collect();
    let rates: Vec<f64> = records.iter().map(|r| r.classification_rate).collect();
    let mean = rates.iter().sum::<f64>() / 200.0;
    let std = (rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / 200.0).sqrt();

    let summary = aggregate(&MetricsTimeline { records }).unwrap();
    assert_eq!(summary.timestamps, 200);
    assert!((summary.classification_rate.mean - mean).abs() < 1e-12);
    assert!((summary.classification_rate.std - std).abs() < 1e-12);
    assert!((summary.total_seconds - 2.0).abs() < 1e-12);
    assert_eq!(summary.final_parameters, nop(3, 1 + 199 % 7, 2));
    assert!(aggregate(&MetricsTimeline::default()).is_err());
}

#[test]
fn fixed_baselines_never_change_shape() {
    for variant in [Variant::FixedAe, Variant::FixedDae] {
        let cfg = ExperimentConfig {
            variant,
            hidden: 6,
            ..sea(5_000, 500, 3)
        };
        let out = prequential_run(&cfg).unwrap();
        assert!(out.events.is_empty());
        assert!(out
            .timeline
            .records
            .iter()
            .all(|r| r.parameters == nop(3, 6, 2)));
    }
}

#[test]
fn csv_stream_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream.csv");
    let mut text = String::from("a,b,label\n");
    for k in 0..900 {
        let a = (k * 13 % 97) as f64;
        let b = (k * 29 % 89) as f64;
        text += &format!("{a},{b},{}\n", usize::from(a > b));
    }
    fs::write(&path, text).unwrap();
    let cfg = ExperimentConfig {
        dataset: DatasetSpec::Csv {
            path,
            label_column: 2,
            classes: None,
            header: true,
        },
        batch_size: 100,
        timing: false,
        ..Default::default()
    };
    let out = prequential_run(&cfg).unwrap();
    assert_eq!(out.timeline.len(), 9);
    assert_eq!(out.final_state.unwrap().n_features(), 2);
}

#[test]
fn config_file_round_trip() {
    let cfg = ExperimentConfig::from_toml_str(
        r#"
        batch_size = 250
        seed = 9
        variant = "fixed-dae"

        [dataset]
        kind = "hyperplane"
        samples = 2000
        features = 6
        drift = 0.002
        "#,
    )
    .unwrap();
    assert_eq!(cfg.batch_size, 250);
    assert_eq!(cfg.variant, Variant::FixedDae);
    assert!(matches!(
        cfg.dataset,
        DatasetSpec::Hyperplane { features: 6, .. }
    ));
    assert!(ExperimentConfig::from_toml_str("batch_sise = 3").is_err());
}

#[test]
fn full_sea_stream_seed_seven() {
    let out = prequential_run(&ExperimentConfig {
        seed: 7,
        timing: false,
        ..Default::default()
    })
    .unwrap();
    assert_eq!(out.timeline.len(), 200);
    assert!(
        out.summary.classification_rate.mean >= 0.88,
        "{:?}",
        out.summary.classification_rate
    );
}
