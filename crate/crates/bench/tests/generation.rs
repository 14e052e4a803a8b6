use ltlsketch::ltl::{apply_substitution, check_consistency, evaluate};
use ltlsketch::sketcher::{Limits, Sketcher};
use ltlsketch_bench::{
    generate_instances, load_instances, run_suite, save_instances, summarize, write_csv, write_json, Algo, BenchRecord,
    Counts, GenParams, SketchKind, CSV_HEADER,
};
use std::time::Duration;

fn counts() -> Counts {
    Counts { positives: 3, negatives: 3 }
}

#[test]
fn samples_are_consistent_with_their_source() {
    for kind in [SketchKind::Type0, SketchKind::Type12] {
        for inst in generate_instances(24, kind, counts(), &GenParams::default(), 5).unwrap() {
            assert!(check_consistency(&inst.intended, &inst.sample).unwrap().consistent(), "{}", inst.id);
            assert_eq!(inst.sample.word_count(), 6);
        }
    }
}

#[test]
fn provenance_restores_the_formula_on_the_sample() {
    for kind in [SketchKind::Type0, SketchKind::Type12] {
        for inst in generate_instances(24, kind, counts(), &GenParams::default(), 9).unwrap() {
            let back = apply_substitution(&inst.sketch, &inst.provenance.substitution()).unwrap();
            assert_eq!(back, inst.intended, "{}", inst.id);
            for (_, w) in inst.sample.words() {
                let props = inst.sample.props();
                assert_eq!(evaluate(&back, w, props).unwrap(), evaluate(&inst.intended, w, props).unwrap());
            }
        }
    }
}

#[test]
fn same_seed_same_instances() {
    let run = || generate_instances(12, SketchKind::Type12, counts(), &GenParams::default(), 42).unwrap();
    let (a, b) = (run(), run());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(
            (&x.id, &x.sketch, &x.sample, &x.provenance, x.seed),
            (&y.id, &y.sketch, &y.sample, &y.provenance, y.seed)
        );
    }
    let other = generate_instances(12, SketchKind::Type12, counts(), &GenParams::default(), 43).unwrap();
    assert!(a.iter().zip(&other).any(|(x, y)| x.sample != y.sample));
}

#[test]
fn instance_directory_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [SketchKind::Type0, SketchKind::Type12] {
        let sub = dir.path().join(kind.as_str());
        let instances = generate_instances(12, kind, counts(), &GenParams::default(), 1).unwrap();
        save_instances(&sub, &instances).unwrap();
        let loaded = load_instances(&sub).unwrap();
        assert_eq!(loaded.len(), instances.len());
        for (x, y) in instances.iter().zip(&loaded) {
            // A hole on a shared node comes back named, so compare DAGs.
            assert_eq!((&x.id, x.kind, &x.intended, x.sketch.dag()), (&y.id, y.kind, &y.intended, y.sketch.dag()));
            assert_eq!(&x.sample, &y.sample);
            assert_eq!((&x.provenance, x.seed), (&y.provenance, y.seed));
        }
    }
}

#[test]
fn suite_output_has_the_declared_columns() {
    let instances = generate_instances(4, SketchKind::Type12, counts(), &GenParams::default(), 2).unwrap();
    let sketcher =
        Sketcher { limits: Limits { max_n: 12, timeout: Some(Duration::from_secs(30)) }, ..Default::default() };
    let records = run_suite(&instances, &[Algo::Learn, Algo::Incr], &sketcher, 2);
    assert_eq!(records.len(), 8);
    for r in &records {
        if r.status == "completed" {
            assert!(r.consistent, "{r:?}");
        }
    }

    let mut csv_out = Vec::new();
    write_csv(&records, &mut csv_out).unwrap();
    let mut reader = csv::Reader::from_reader(csv_out.as_slice());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
    let back: Vec<BenchRecord> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(back, records);

    let mut json_out = Vec::new();
    write_json(&records, &mut json_out).unwrap();
    let value: serde_json::Value = serde_json::from_slice(&json_out).unwrap();
    let first = value[0].as_object().unwrap();
    assert_eq!(first.keys().len(), CSV_HEADER.len());
    assert!(CSV_HEADER.iter().all(|k| first.contains_key(*k)));

    let summary = summarize(&records);
    assert_eq!(summary.iter().map(|s| s.runs).sum::<usize>(), 8);
}
