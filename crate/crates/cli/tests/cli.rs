use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dposet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dposet"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Y to rank 6, written through `extend` from the one-point poset.
fn young_file(dir: &Path) -> std::path::PathBuf {
    let seed = dir.join("point.dpo");
    fs::write(&seed, "dpo 1 r=1 ranks=0\nrank 0 1\n0:\n").unwrap();
    let out = dir.join("y6.dpo");
    let o = dposet(&[
        "extend",
        path(&seed),
        "--r",
        "1",
        "--steps",
        "6",
        "-o",
        path(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn linear_space_spectrum() {
    let o = dposet(&["enum-linspaces", "--r", "6", "--spectrum"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("class,hyperedges,t1,p2"));
    let mut p2: Vec<u32> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    p2.sort_unstable();
    assert_eq!(p2, vec![27, 28, 29, 29, 30, 30, 31, 31, 33, 37]);
}

#[test]
fn walks_on_young_all_pass() {
    let dir = tempfile::tempdir().unwrap();
    let y6 = young_file(dir.path());
    let o = dposet(&["walks", path(&y6), "--n", "3", "--check", "all"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("name,value\n"));
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("check_")).collect();
    assert_eq!(checks.len(), 6);
    assert!(checks.iter().all(|l| l.ends_with(",pass")));
}

#[test]
fn search_refutes_one_four_sixteen() {
    let o = dposet(&["search", "--r", "4", "--target", "1,4,16"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "target,verdict\n\"1,4,16\",definitive-none\n");
}

#[test]
fn search_writes_a_valid_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.dpo");
    let o = dposet(&[
        "search",
        "--r",
        "4",
        "--target",
        "1,4,17,60,254",
        "-o",
        path(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(",found"));
    assert_eq!(code(&dposet(&["validate", path(&out)])), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dpo");
    fs::write(
        &bad,
        "dpo 1 r=1 ranks=2\nrank 0 1\n0:\nrank 1 1\n0: 0\nrank 2 1\n0: 0\n",
    )
    .unwrap();
    assert_eq!(code(&dposet(&["validate", path(&bad)])), 1);
    assert_eq!(code(&dposet(&["walks", path(&bad), "--n", "1"])), 1);

    let garbled = dir.path().join("garbled.dpo");
    fs::write(&garbled, "not a poset\n").unwrap();
    assert_eq!(code(&dposet(&["validate", path(&garbled)])), 2);
    assert_eq!(code(&dposet(&["enum-posets", "--r", "1"])), 2);
    assert_eq!(
        code(&dposet(&[
            "numerics",
            "--partitions",
            "5",
            "--interval-demo"
        ])),
        2
    );
    assert_eq!(
        code(&dposet(&[
            "walks",
            path(&bad),
            "--n",
            "1",
            "--check",
            "nope"
        ])),
        2
    );

    let o = dposet(&[
        "enum-posets",
        "--r",
        "1",
        "--ranks",
        "9",
        "--budget-secs",
        "0",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn output_does_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["enum-posets", "--r", "1", "--ranks", "7"],
        &["enum-posets", "--r", "2", "--ranks", "4"],
        &["enum-linspaces", "--r", "7", "--spectrum"],
        &["numerics", "--yr", "2", "50"],
    ];
    for args in runs {
        let one = dposet(&[&["--jobs", "1"], args].concat());
        let eight = dposet(&[&["--jobs", "8"], args].concat());
        assert_eq!(code(&one), 0);
        assert_eq!(one.stdout, eight.stdout, "{args:?}");
    }

    let (c1, c8) = (dir.path().join("c1"), dir.path().join("c8"));
    for (jobs, file) in [("1", &c1), ("8", &c8)] {
        let o = dposet(&[
            "--jobs",
            jobs,
            "enum-posets",
            "--r",
            "1",
            "--ranks",
            "7",
            "--certs",
            path(file),
        ]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(fs::read(&c1).unwrap(), fs::read(&c8).unwrap());
}

#[test]
fn spill_matches_memory() {
    let dir = tempfile::tempdir().unwrap();
    let mem = dposet(&["enum-posets", "--r", "1", "--ranks", "8"]);
    let spill = dposet(&[
        "enum-posets",
        "--r",
        "1",
        "--ranks",
        "8",
        "--spill",
        path(dir.path()),
    ]);
    assert_eq!(code(&spill), 0);
    assert_eq!(mem.stdout, spill.stdout);
    assert!(stdout(&mem).ends_with("8,643\n"));
}

#[test]
fn canonical_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let y6 = young_file(dir.path());
    let a = dir.path().join("a.dpo");
    let b = dir.path().join("b.dpo");
    let step = |from: &Path, to: &Path| {
        let o = dposet(&[
            "extend",
            path(from),
            "--r",
            "1",
            "--steps",
            "0",
            "--canonical",
            "-o",
            path(to),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    step(&y6, &a);
    step(&a, &b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn numerics_csv() {
    let o = dposet(&["numerics", "--zr", "4", "4"]);
    assert_eq!(stdout(&o), "n,value\n0,1\n1,4\n2,17\n3,72\n4,305\n");
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.txt");
    fs::write(&seq, "1,1,2,3,5,7,11\n").unwrap();
    let o = dposet(&["numerics", "--delta", "1", "--seq", path(&seq)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let values: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(values, ["1", "0", "1", "1", "2", "2", "4"]);
}

#[test]
fn plane_summary() {
    let o = dposet(&["plane", "--q", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("q,points,lines,projective_order,p2\n3,13,13,3,"));
}
