use std::path::Path;
use std::process::{Command, Output};

fn tax_ising(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tax-ising"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(path)
        .unwrap();
    let header = reader.headers().unwrap().clone();
    let rows = reader.records().collect::<Result<Vec<_>, _>>().unwrap();
    (header, rows)
}

#[test]
fn run_writes_series_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("series.csv");
    let o = tax_ising(&[
        "run",
        "--temperature",
        "25",
        "--audit-prob",
        "0.9",
        "--punishment",
        "50",
        "--sweeps",
        "300",
        "--size",
        "64",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        ["sweep", "evasion_fraction", "magnetization"]
    );
    assert_eq!(rows.len(), 300);
    let evasion: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(evasion.contains(&0.0));

    let manifest = std::fs::read_to_string(dir.path().join("series.csv.manifest")).unwrap();
    assert!(manifest.contains("audit_probability=0.9\n"));
    assert!(manifest.contains("site_updates_per_second="));
}

#[test]
fn run_single_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one.csv");
    let o = tax_ising(&[
        "run",
        "--sweeps",
        "1",
        "--audit-prob",
        "0",
        "--punishment",
        "0",
        "--temperature",
        "25",
        "--size",
        "16",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(read_csv(&out).1.len(), 1);
}

#[test]
fn run_to_stdout_is_deterministic() {
    let args = [
        "run",
        "--temperature",
        "2.5",
        "--audit-prob",
        "0.05",
        "--punishment",
        "10",
        "--sweeps",
        "50",
        "--size",
        "32",
        "--seed",
        "5",
    ];
    let a = tax_ising(&args);
    let b = tax_ising(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed=5"));
}

#[test]
fn bad_flags_name_the_flag() {
    let o = tax_ising(&[
        "run",
        "--temperature",
        "25",
        "--audit-prob",
        "1.5",
        "--punishment",
        "50",
        "--sweeps",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("audit-prob"));

    let o = tax_ising(&[
        "run",
        "--temperature",
        "-1",
        "--audit-prob",
        "0.5",
        "--punishment",
        "50",
        "--sweeps",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("temperature"));

    let o = tax_ising(&[
        "run",
        "--temperature",
        "25",
        "--audit-prob",
        "0.5",
        "--punishment",
        "50",
        "--sweeps",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweeps"));

    let o = tax_ising(&[
        "run",
        "--temperature",
        "25",
        "--audit-prob",
        "0.5",
        "--punishment",
        "50",
        "--sweeps",
        "5",
        "--size",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("size"));
}

#[test]
fn grid_long_form_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let matrix = dir.path().join("grid.dat");
    let args = [
        "grid",
        "--temperature",
        "25",
        "--punishment",
        "50",
        "--sweeps",
        "30",
        "--size",
        "16",
        "--out",
        out.to_str().unwrap(),
        "--matrix",
        matrix.to_str().unwrap(),
    ];
    let o = tax_ising(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        ["p_a", "sweep", "evasion_fraction"]
    );
    assert_eq!(rows.len(), 101 * 30);
    assert_eq!(&rows[0][0], "0.00");
    assert_eq!(&rows[30][0], "0.01");
    assert_eq!(&rows[101 * 30 - 1][0], "1.00");
    assert_eq!(&rows[101 * 30 - 1][1], "30");

    let m = std::fs::read_to_string(&matrix).unwrap();
    let lines: Vec<&str> = m.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 101);
    assert!(lines.iter().all(|l| l.split_whitespace().count() == 30));

    let first = std::fs::read(&out).unwrap();
    let o = tax_ising(&args);
    assert!(o.status.success());
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn grid_without_punishment_has_no_enforcement() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let o = tax_ising(&[
        "grid",
        "--temperature",
        "25",
        "--punishment",
        "0",
        "--sweeps",
        "60",
        "--size",
        "32",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let (_, rows) = read_csv(&out);
    // every row settles near one half, including p_a = 1
    for row in 0..101 {
        let tail: f64 = rows[row * 60 + 40..row * 60 + 60]
            .iter()
            .map(|r| r[2].parse::<f64>().unwrap())
            .sum::<f64>()
            / 20.0;
        assert!((tail - 0.5).abs() < 0.06, "row {row}: {tail}");
    }
}

#[test]
fn table_default_and_limits() {
    let o = tax_ising(&["table"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for v in [
        "0.982014", "0.880797", "0.119203", "0.017986", "0.064969", "0.460085", "0.420676",
    ] {
        assert!(text.contains(v), "missing {v}");
    }

    let o = tax_ising(&["table", "--temperatures", "1e12"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("0.500000").count(), 5);

    let o = tax_ising(&["table", "--temperatures", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let o = tax_ising(&[
        "verify",
        "--size",
        "3",
        "--temperature",
        "2.5",
        "--sweeps",
        "200000",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("result=PASS"));

    let o = tax_ising(&["verify", "--size", "5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = tax_ising(&[
        "verify",
        "--size",
        "2",
        "--temperature",
        "1e6",
        "--sweeps",
        "100000",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let value = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(value("exact_energy=").abs() < 0.01);
    assert!(value("simulated_energy=").abs() < 0.1);
}

#[test]
fn equilibrium_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eq.csv");
    let o = tax_ising(&[
        "equilibrium",
        "--temperature",
        "25",
        "--audit-prob",
        "0.05",
        "--punishment",
        "10",
        "--size",
        "32",
        "--burn-in",
        "300",
        "--measure",
        "200",
        "--seeds",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(&header[7], "mean_evasion");
    assert_eq!(rows.len(), 1);
    let mean: f64 = rows[0][7].parse().unwrap();
    assert!((mean - 0.38).abs() < 0.05, "{mean}");
    let manifest = std::fs::read_to_string(dir.path().join("eq.csv.manifest")).unwrap();
    assert!(manifest.contains("replicate_seeds="));
}
