//! End-to-end tests of the binary: documented examples, exit codes,
//! determinism of the emitted JSON.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fi1"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("fi1-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn eval_documented_example() {
    let out = run(&["eval", "x x x^-1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[0,1,2]\n");
}

#[test]
fn classify_documented_example() {
    let gens = write_temp("units.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let out = run(&["classify", gens.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains(r#""verdict":"NotFinitelyPresented""#), "{text}");
    assert!(text.contains(r#""idempotent_count":"infinite""#), "{text}");
}

#[test]
fn schein_verify_documented_example() {
    let out = run(&["schein-verify", "--n", "5", "--max-ij", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains(r#""passed":true"#), "{text}");
    assert!(text.contains(r#""first_equality_failure":null"#), "{text}");
    assert!(text.contains(r#""first_inequality_failure":null"#), "{text}");
}

#[test]
fn criterion_10_documented_examples_are_byte_identical_across_runs() {
    let gens = write_temp("units-c10.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let examples: Vec<Vec<&str>> = vec![
        vec!["classify", gens.to_str().unwrap()],
        vec!["eval", "x x x^-1"],
        vec!["schein-verify", "--n", "5", "--max-ij", "10"],
    ];
    for args in &examples {
        let first = run(args);
        let second = run(args);
        assert!(first.status.success(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.stderr, second.stderr, "{args:?}");
    }
    println!("PASS criterion 10: three documented CLI examples byte-identical across two runs");
}

#[test]
fn element_arithmetic_commands() {
    assert_eq!(stdout(&run(&["mul", "[0,1,1]", "[0,1,1]"])), "[0,2,2]\n");
    assert_eq!(stdout(&run(&["mul", "[0,1,1]", "[-1,-1,0]"])), "[0,0,1]\n");
    assert_eq!(stdout(&run(&["inv", "[0,1,1]"])), "[-1,-1,0]\n");
    assert_eq!(stdout(&run(&["pow", "[0,1,1]", "3"])), "[0,3,3]\n");
    assert_eq!(stdout(&run(&["pow", "[-1,-1,0]", "2"])), "[-2,-2,0]\n");
}

#[test]
fn witness_command_matches_hand_checked_construction() {
    let gens = write_temp("units-w.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let out = run(&["witness", gens.to_str().unwrap()]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["e"], serde_json::json!([0, 0, 1]));
    assert_eq!(value["f"], serde_json::json!([-3, 0, 0]));
    assert_eq!(value["n"], 1);
    assert_eq!(value["m"], 3);
    assert_eq!(value["obstruction"][0], "[3, 3, 3, -]");
    assert_eq!(value["obstruction"][1], "[-, -, -, -]");
}

#[test]
fn closure_command_counts_low_classes() {
    let gens = write_temp("units-c.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let out = run(&["closure", gens.to_str().unwrap(), "--dmax", "2"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["count"], 13);
}

#[test]
fn idempotents_command_shapes() {
    let finite = write_temp("idem.json", r#"{"generators": [[-1,0,2],[0,0,1]]}"#);
    let out = run(&["idempotents", finite.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["idempotent_count"], 2);

    let mixed = write_temp("mixed.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let out = run(&["idempotents", mixed.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["idempotent_count"], "infinite");
}

#[test]
fn numerical_commands() {
    let ns = write_temp("ns.json", r#"{"gens": [3,5]}"#);
    let out = run(&["numerical", "frobenius", ns.to_str().unwrap()]);
    assert_eq!(
        stdout(&out),
        "{\"gens\":[3,5],\"gcd\":1,\"normalized_gens\":[3,5],\"frobenius\":7,\"gaps\":[1,2,4,7]}\n"
    );
    let out = run(&["numerical", "mingens", ns.to_str().unwrap()]);
    assert_eq!(stdout(&out), "{\"gens\":[3,5],\"minimal_generators\":[3,5]}\n");
    let out = run(&["numerical", "presentation", ns.to_str().unwrap()]);
    assert_eq!(
        stdout(&out),
        "{\"generators\":[3,5],\"relations\":[[[0,3],[5,0]]]}\n"
    );
}

#[test]
fn presentation_pipeline() {
    let gens = write_temp("pos.json", r#"{"generators": [[-1,2,3],[-1,3,4]]}"#);
    let out = run(&["presentation", "build", gens.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["presentation"]["alphabet"], serde_json::json!(["u1", "u2"]));

    let out = run(&["presentation", "verify", gens.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["sound"], true);
    assert_eq!(value["complete"], true);
}

#[test]
fn diagram_commands() {
    let out = run(&["munn-dot", "[-2,0,1]", "--text"]);
    assert_eq!(stdout(&out), "o-o-B-o\n");
    let out = run(&["munn-dot", "[0,1,1]"]);
    assert!(stdout(&out).starts_with("digraph munn {"));
    let out = run(&["lattice-dot", "--amax", "2", "--bmax", "2"]);
    assert!(stdout(&out).contains("n_2_0 -> n_1_0;"));
}

#[test]
fn lattice_marking_shows_the_generated_idempotents() {
    // Displacements +-2 only reach even grid points; odd ones stay unmarked.
    let gens = write_temp("even.json", r#"{"generators": [[0,2,2],[-2,-2,0]]}"#);
    let out = run(&[
        "lattice-dot",
        "--amax",
        "3",
        "--bmax",
        "3",
        "--mark",
        gens.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert!(text.contains("n_2_2 [label=\"(-2, 0, 2)\", style=filled, fillcolor=red];"), "{text}");
    assert!(text.contains("n_0_2 [label=\"(0, 0, 2)\", style=filled, fillcolor=red];"), "{text}");
    assert!(text.contains("n_1_1 [label=\"(-1, 0, 1)\"];"), "{text}");
    assert!(text.contains("n_2_1 [label=\"(-2, 0, 1)\"];"), "{text}");
}

#[test]
fn domain_errors_exit_with_two() {
    // Malformed word.
    let out = run(&["eval", "x y"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8(out.stderr).unwrap().is_empty());

    // Malformed element triple.
    let out = run(&["mul", "[1,0,1]", "[0,1,1]"]);
    assert_eq!(out.status.code(), Some(2));

    // Missing file.
    let out = run(&["classify", "/nonexistent/gens.json"]);
    assert_eq!(out.status.code(), Some(2));

    // Domain precondition: decompose needs positive generators.
    let mixed = write_temp("mixed2.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let out = run(&["decompose", mixed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Witness needs mixed signs.
    let pos = write_temp("pos2.json", r#"{"generators": [[0,1,1]]}"#);
    let out = run(&["witness", pos.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_mode_renders_human_output() {
    let gens = write_temp("units-t.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let out = run(&["classify", gens.to_str().unwrap(), "--text"]);
    let text = stdout(&out);
    assert!(text.contains("verdict: NotFinitelyPresented"), "{text}");
    assert!(text.contains("idempotent count: infinite"), "{text}");
}

#[test]
fn text_mode_succeeds_everywhere() {
    let units = write_temp("units-all.json", r#"{"generators": [[0,1,1],[-1,-1,0]]}"#);
    let pos = write_temp("pos-all.json", r#"{"generators": [[-1,2,3],[-1,3,4]]}"#);
    let ns = write_temp("ns-all.json", r#"{"gens": [3,5]}"#);
    let commands: Vec<Vec<&str>> = vec![
        vec!["eval", "x x^-1"],
        vec!["mul", "[0,1,1]", "[0,1,1]"],
        vec!["witness", units.to_str().unwrap()],
        vec!["closure", units.to_str().unwrap(), "--dmax", "2"],
        vec!["idempotents", units.to_str().unwrap()],
        vec!["decompose", pos.to_str().unwrap()],
        vec!["schein-verify", "--n", "3", "--max-ij", "6"],
        vec!["numerical", "frobenius", ns.to_str().unwrap()],
        vec!["numerical", "presentation", ns.to_str().unwrap()],
        vec!["presentation", "build", pos.to_str().unwrap()],
        vec!["presentation", "verify", pos.to_str().unwrap()],
        vec!["lattice-dot", "--amax", "2", "--bmax", "2"],
    ];
    for args in &commands {
        let mut with_text: Vec<&str> = args.clone();
        with_text.push("--text");
        let out = run(&with_text);
        assert!(out.status.success(), "{with_text:?}");
        assert!(!stdout(&out).is_empty(), "{with_text:?}");
    }
}
