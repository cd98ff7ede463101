use std::path::Path;

use steinred::eventlog::{parse_event_log, write_event_log};
use steinred::generate::{geometric, RandomFamily};
use steinred::solution::{parse_solution, write_solution};
use steinred::stp::{parse_stp, write_stp, StpError};
use steinred_core::{evaluate_cost, reduce_loop, InstanceBuilder, ModelError, ReduceConfig};

fn data(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("data")
            .join(name),
    )
    .unwrap()
}

#[test]
fn write_then_parse_is_identity_on_random_instances() {
    for seed in 0..1000 {
        let fixed = [0.0, 0.1, 0.5, 1.0][seed as usize % 4];
        let inst = RandomFamily::default()
            .with_fixed_probability(fixed)
            .generate(seed);
        assert_eq!(parse_stp(&write_stp(&inst)).unwrap(), inst, "seed {seed}");
    }
}

#[test]
fn reduced_instances_roundtrip_with_offset_and_log() {
    let mut split = 0;
    for seed in 0..200 {
        let inst = RandomFamily::default().generate(seed);
        let out = reduce_loop(&inst, &ReduceConfig::default());
        let (compact, _) = out.instance.compacted();
        if !compact.is_connected() {
            assert_eq!(
                parse_stp(&write_stp(&compact)),
                Err(StpError::Model(ModelError::Disconnected))
            );
            split += 1;
            continue;
        }
        let back = parse_stp(&write_stp(&out.instance)).unwrap();
        assert_eq!(back.offset(), compact.offset(), "seed {seed}");
        assert_eq!(write_stp(&back), write_stp(&compact), "seed {seed}");
        assert_eq!(
            parse_event_log(&write_event_log(&out.log)).unwrap(),
            out.log,
            "seed {seed}"
        );
        if let Some(tree) = out.incumbent {
            let value = evaluate_cost(&inst, &tree).unwrap();
            let sol = parse_solution(&inst, &write_solution(&inst, &tree, value)).unwrap();
            assert_eq!((sol.value, sol.tree), (value, tree), "seed {seed}");
        }
    }
    assert!(split < 200);
}

#[test]
fn path3_file() {
    let mut b = InstanceBuilder::new(3);
    b.edge(0, 1, 3.0).edge(1, 2, 3.0).prize(1, 4.0);
    let text = write_stp(&b.build().unwrap());
    assert!(text.contains("\nNodes 3\nEdges 2\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("TP ")).count(), 1);
    assert_eq!(text.lines().filter(|l| l.starts_with("T ")).count(), 0);
}

#[test]
fn fig1_file() {
    let inst = parse_stp(&data("fig1.stp")).unwrap();
    assert_eq!((inst.vertex_count(), inst.edge_count()), (7, 9));
    let text = write_stp(&inst);
    let prizes: Vec<&str> = text.lines().filter(|l| l.starts_with("TP ")).collect();
    assert_eq!(prizes.len(), 5);
    assert!(prizes.iter().all(|l| l.ends_with(" 5")));
}

#[test]
fn parser_tolerates_benchmark_quirks() {
    let text = "33d32945 STP File, STP Format Version 1.0\n\
                SECTION Comment\nName \"quirks\"\nCreator \"hand\"\nEND\n\n\
                SECTION Graph\nNodes 3\nEdges 4\nE 1 2 2\nE 2 1 1\nE 2 2 5\nE 2 3 4\nEND\n\
                SECTION Terminals\nTerminals 7\nTP 1 3\nT 3\nEND\n\
                SECTION Coordinates\nDD 1 0 0\nEND\nEOF\n";
    let inst = parse_stp(text).unwrap();
    assert_eq!(inst.edge_count(), 2);
    assert_eq!(inst.cost(0), 1.0);
    assert!(inst.is_fixed(2));
    assert_eq!(inst.prize(0), 3.0);
}

#[test]
fn parser_errors_name_their_line() {
    let head = "33D32945 STP File, STP Format Version 1.0\nSECTION Graph\nNodes 2\nEdges 1\n";
    let cases = [
        (
            format!("{head}E 1 3 1\nEND\nEOF\n"),
            "vertex id 3 out of range 1..=2 at line 5",
        ),
        (
            format!("{head}E 1 2 1\nEND\nSECTION Terminals\nTP 1 -2\nEND\nEOF\n"),
            "negative prize at line 8",
        ),
        (
            format!("{head}E 1 2 x\nEND\nEOF\n"),
            "malformed edge cost 'x' at line 5",
        ),
        (
            format!("{head}END\nEOF\n"),
            "graph declares 1 edges but lists 0",
        ),
        (format!("{head}E 1 2 1\nEND\n"), "missing EOF marker"),
        (
            "SECTION Graph\nEND\nEOF\n".to_string(),
            "missing STP header at line 1",
        ),
    ];
    for (text, message) in cases {
        assert_eq!(parse_stp(&text).unwrap_err().to_string(), message);
    }
}

#[test]
fn vendored_geometric_instance_is_reproducible() {
    let vendored = parse_stp(&data("geo500.stp")).unwrap();
    assert_eq!(vendored, geometric(500, 3, 0.3, 100, 1));
}
