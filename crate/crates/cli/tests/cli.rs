use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sweepfv"))
}

fn mesh(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../meshes").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const TWO_CELLS: &str = "4 2 4\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 3\n0 1 EXACT\n1 2 EXACT\n2 3 EXACT\n3 0 EXACT\n";

#[test]
fn run_writes_solution_and_history() {
    let dir = tempfile::tempdir().unwrap();
    let m = mesh("square58.mesh");
    let o = run(&[
        "run", "--case", "euler_nosource", "--mesh", m.to_str().unwrap(), "--driver", "sweep",
        "--cfl", "0.6", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = stdout(&o);
    assert!(summary.starts_with("euler_nosource fe_fast_sweep 0.6 "));
    assert!(summary.trim_end().ends_with("converged=true"));

    let vtk = fs::read_to_string(dir.path().join("solution.vtk")).unwrap();
    assert!(vtk.contains("DATASET UNSTRUCTURED_GRID"));
    assert!(vtk.contains("CELL_DATA 58"));
    for name in ["rho", "u", "v", "p"] {
        assert!(vtk.contains(&format!("SCALARS {name} double 1")));
    }

    let csv = fs::read_to_string(dir.path().join("residue.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iter,resA,dt,cfl,driver"));
    let last = lines.last().unwrap();
    let res: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!(res <= 1e-12);
}

#[test]
fn single_threaded_runs_are_reproducible() {
    let m = mesh("square58.mesh");
    let outputs: Vec<(String, String)> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let o = run(&[
                "run", "--mesh", m.to_str().unwrap(), "--driver", "rk3", "--max-iters", "40",
                "--threads", "1", "--out", dir.path().to_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(6));
            (
                fs::read_to_string(dir.path().join("solution.vtk")).unwrap(),
                fs::read_to_string(dir.path().join("residue.csv")).unwrap(),
            )
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn blow_up_reports_not_converged() {
    let dir = tempfile::tempdir().unwrap();
    let m = mesh("square58.mesh");
    let o = run(&[
        "run", "--mesh", m.to_str().unwrap(), "--driver", "fe", "--cfl", "4",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stdout(&o).contains("converged=false"));
}

#[test]
fn error_exit_codes() {
    let o = run(&["run", "--mesh", "/nonexistent/x.mesh"]);
    assert_eq!(o.status.code(), Some(4));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mesh");
    fs::write(&bad, "3 1 3\n0 0\n1 0\n0 1\n0 1 7\n").unwrap();
    let o = run(&["run", "--mesh", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let m = mesh("square58.mesh");
    let o = run(&["run", "--mesh", m.to_str().unwrap(), "--case", "nope"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["run", "--mesh", m.to_str().unwrap(), "--case", "shock_reflection"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["run", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orderings_of_two_cells() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.mesh");
    fs::write(&path, TWO_CELLS).unwrap();
    let o = run(&["orderings", "--mesh", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0], ["S1+", "S1-", "S2+", "S2-", "S3+", "S3-", "S4+", "S4-"]);
    // centroids (2/3, 1/3) and (1/3, 2/3); from (0,0) they tie, so the lower index leads
    let col = |n: usize| [rows[1][n], rows[2][n]];
    assert_eq!(col(0), ["0", "1"]);
    // from (0,1) cell 1 is nearer
    assert_eq!(col(2), ["1", "0"]);
    assert_eq!(col(3), ["0", "1"]);
    for n in 0..8 {
        let mut c = col(n);
        c.sort();
        assert_eq!(c, ["0", "1"]);
    }
}

#[test]
fn refine_quadruples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fine.mesh");
    let m = mesh("square58.mesh");
    let o = run(&["refine", "--mesh", m.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["stencils", "--mesh", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 232);
}

#[test]
fn accuracy_of_a_constant_solution() {
    let m = mesh("square58.mesh");
    let o = run(&["accuracy", "--case", "free_stream", "--mesh", m.to_str().unwrap(), "--levels", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].contains("n/a"));
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let m = mesh("square58.mesh");
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        format!("case = euler_nosource\nmesh = {}\ndriver = sweep\nmax_iters = 3\nout = res\n", m.display()),
    )
    .unwrap();
    let o = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(6));
    let csv = fs::read_to_string(dir.path().join("res/residue.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}
