use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polya-pila")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_csv_reports_circle_total() {
    let o = run(&["--csv", "count", "--curve", "x^2+y^2-1", "--H", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#polya-pila v1"));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "box_total").unwrap();
    assert_eq!(row[col], "12");
}

#[test]
fn count_json_parses() {
    let o = run(&["count", "--curve", "y - x^2", "--H", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"]["box_total"], 7);
}

#[test]
fn invalid_curve_exits_with_input_error() {
    let o = run(&["count", "--curve", "(x-y)^2", "--H", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_height_hits_guardrail() {
    let o = run(&["count", "--curve", "x^3+y^3-1", "--H", "100000"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn points_lists_unit_box_points() {
    let o = run(&["--csv", "points", "--curve", "x^2+y^2-1", "--H", "5", "--unit-box"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("3/5"), "{text}");
}
