//! End-to-end tests of the `stsep` binary: exit codes, output formats,
//! determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn stsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stsep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

const RING: &str = "\
# four rectangles closing a ring around the source
s 0 0
t 10 0
box -2 -2 -1 2
box -2 1 2 2
box 1 -2 2 2
box -2 -2 2 -1
";

const ANNULUS: &str = "\
s 33/64 31/64
t 15/16 15/16
annulus 1/2 1/2 1/8 3/8
maxdepth 10
";

const TWO_HOLES: &str = "\
s 1/2 1/2
t 1/2 1/16
disc 1/4 1/2 1/8
disc 3/4 1/2 1/8
";

#[test]
fn separate_reports_the_separating_insertion() {
    let path = write_temp("ring.stream", RING);
    let out = stsep(&["separate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("4 k=2 merges=1 cycles=1 status=separated"), "{text}");
    assert!(text.contains("result status=separated first=4"), "{text}");
}

#[test]
fn separate_exits_zero_when_connected() {
    let path = write_temp("single.stream", "s 0 0\nt 10 0\nbox -2 -1 -1 2\n");
    let out = stsep(&["separate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result status=connected"));

    let pair = write_temp(
        "pair.stream",
        "s 0 0\nt 10 0\nbox 2 1 5 4\nbox 3 -2 6 2\n",
    );
    let out = stsep(&["separate", pair.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_one_with_line_numbers() {
    let path = write_temp("bad.stream", "s 0 0\nt 10 0\nbox 0 0 1\n");
    let out = stsep(&["separate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let missing = stsep(&["separate", "/nonexistent/file.stream"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn clockwise_polygons_are_reversed_with_a_warning() {
    let path = write_temp("cw.stream", "s 0 0\nt 10 0\npoly 3 1 3 4 6 1\n");
    let out = stsep(&["separate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("clockwise polygon reversed"));
}

#[test]
fn subdivide_matches_recorded_scene_outcomes() {
    let annulus = write_temp("annulus.scene", ANNULUS);
    let out = stsep(&["subdivide", annulus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stdout(&out).contains("outcome=separated subdivisions=18 green=15 red=11 yellow=28"),
        "{}",
        stdout(&out)
    );

    let holes = write_temp("two_holes.scene", TWO_HOLES);
    let out = stsep(&["subdivide", holes.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("outcome=path_found"), "{}", stdout(&out));
}

#[test]
fn subdivide_exhausts_at_depth_zero() {
    let scene = write_temp("shallow.scene", "s 1/4 1/2\nt 3/4 1/2\ndisc 1/2 1/2 1/8\n");
    let out = stsep(&["subdivide", scene.to_str().unwrap(), "--max-depth", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("outcome=depth_exhausted"));
}

#[test]
fn verify_agrees_and_detects_injected_faults() {
    let path = write_temp("verify.stream", RING);
    let ok = stsep(&["verify", "--stream", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verify ok"));

    let bad = stsep(&[
        "verify",
        "--stream",
        path.to_str().unwrap(),
        "--inject-parity-fault",
        "3",
    ]);
    assert_eq!(bad.status.code(), Some(4));
    assert!(stdout(&bad).contains("mismatch at insertion 4"), "{}", stdout(&bad));

    let scene = write_temp("verify.scene", ANNULUS);
    let ok = stsep(&["verify", "--scene", scene.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verify ok (outcome=separated)"));
}

#[test]
fn verify_rejects_non_axis_streams() {
    let path = write_temp("poly.stream", "s 0 0\nt 10 0\npoly 3 1 6 1 3 4\n");
    let out = stsep(&["verify", "--stream", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("axis-aligned"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let stream = write_temp("det.stream", RING);
    let svg1 = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("det1.svg");
    let svg2 = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("det2.svg");
    let out1 = stsep(&["separate", stream.to_str().unwrap(), "--svg", svg1.to_str().unwrap()]);
    let out2 = stsep(&["separate", stream.to_str().unwrap(), "--svg", svg2.to_str().unwrap()]);
    assert_eq!(out1.stdout, out2.stdout);
    assert_eq!(fs::read(&svg1).unwrap(), fs::read(&svg2).unwrap());

    let scene = write_temp("det.scene", ANNULUS);
    let svg3 = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("det3.svg");
    let svg4 = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("det4.svg");
    let out3 = stsep(&["subdivide", scene.to_str().unwrap(), "--svg", svg3.to_str().unwrap()]);
    let out4 = stsep(&["subdivide", scene.to_str().unwrap(), "--svg", svg4.to_str().unwrap()]);
    assert_eq!(out3.stdout, out4.stdout);
    assert_eq!(fs::read(&svg3).unwrap(), fs::read(&svg4).unwrap());
}

#[test]
fn grid_and_naive_finders_print_identical_replays() {
    let stream = write_temp("finders.stream", RING);
    let naive = stsep(&["separate", stream.to_str().unwrap(), "--finder", "naive"]);
    let grid = stsep(&["separate", stream.to_str().unwrap(), "--finder", "grid"]);
    assert_eq!(naive.status.code(), grid.status.code());
    assert_eq!(naive.stdout, grid.stdout);
}

#[test]
fn bench_prints_one_line_per_size() {
    let out = stsep(&[
        "bench",
        "--sizes",
        "200,400",
        "--extent",
        "40",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("n=200 "));
    assert!(lines[1].starts_with("n=400 "));
    assert!(lines[0].contains("hops_per_op="));
}
