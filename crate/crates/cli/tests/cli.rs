use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fuzzycolor_cli::RunReport;
use image::{Rgb, RgbImage};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzycolor"))
}

fn sample_colors() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/sample_colors.csv")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn seed_reports_dominant_colors() {
    let out = run(&["seed", sample_colors().to_str().unwrap(), "--clusters", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("dominant colors: Black, Red, Yellow\n"),
        "{text}"
    );
    let centroids: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("initial centroids"))
        .skip(1)
        .collect();
    assert_eq!(centroids.len(), 3);
    assert!(centroids[0].contains("x10") && centroids[0].contains("(5.00, 2.27, 1.52)"));
    assert!(centroids[1].contains("x5") && centroids[1].contains("(41.01, 45.03, 20.65)"));
    assert!(centroids[2].contains("x6") && centroids[2].contains("(80.70, -5.76, 70.55)"));
}

#[test]
fn seed_rejects_too_many_clusters() {
    let out = run(&[
        "seed",
        sample_colors().to_str().unwrap(),
        "--clusters",
        "15",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("c exceeds reference count 14"), "{err}");
}

#[test]
fn seed_single_color() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    std::fs::write(&path, "47.5,-3.25,12\n").unwrap();
    let out = run(&["seed", path.to_str().unwrap(), "-c", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("v1   x1     (47.50, -3.25, 12.00)"));
}

#[test]
fn seed_with_reference_override() {
    let dir = tempfile::tempdir().unwrap();
    let refs = dir.path().join("refs.csv");
    std::fs::write(&refs, "Dark,10,0,0\nRed,41,45,20\nPale,90,0,0\n").unwrap();
    let out = run(&[
        "seed",
        sample_colors().to_str().unwrap(),
        "-c",
        "2",
        "--refs",
        refs.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("R3   Pale"));
    assert!(!text.contains("Black"));
}

#[test]
fn malformed_csv_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "1,2,3\na,b,c\n").unwrap();
    let out = run(&["cluster", path.to_str().unwrap(), "-c", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
    let missing = run(&["cluster", "/nonexistent/file.csv", "-c", "1"]);
    assert!(!missing.status.success());
}

#[test]
fn cluster_report_has_reference_seeds_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "cluster",
            sample_colors().to_str().unwrap(),
            "-c",
            "3",
            "--init",
            "reference",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());

    let report = RunReport::from_json(std::str::from_utf8(&text).unwrap()).unwrap();
    let seeds: Vec<(usize, [f64; 3])> = report
        .initial_centroids
        .iter()
        .map(|c| (c.point, c.lab))
        .collect();
    assert_eq!(
        seeds,
        vec![
            (10, [5.00, 2.27, 1.52]),
            (5, [41.01, 45.03, 20.65]),
            (6, [80.70, -5.76, 70.55])
        ]
    );
    assert!(report.converged);
    assert_eq!(report.memberships.len(), 10);
    assert_eq!(report.objective_trace.len(), report.iterations + 1);
}

#[test]
fn nonconvergence_still_exits_zero() {
    let out = run(&[
        "cluster",
        sample_colors().to_str().unwrap(),
        "-c",
        "3",
        "--max-iter",
        "1",
        "--epsilon",
        "1e-300",
    ]);
    assert!(out.status.success());
    let report = RunReport::from_json(&stdout(&out)).unwrap();
    assert!(!report.converged);
    assert_eq!(report.iterations, 1);
}

#[test]
fn invalid_config_fails() {
    let out = run(&[
        "cluster",
        sample_colors().to_str().unwrap(),
        "-c",
        "3",
        "--fuzzifier",
        "1",
    ]);
    assert!(!out.status.success());
    let out = run(&[
        "cluster",
        sample_colors().to_str().unwrap(),
        "-c",
        "11",
        "--init",
        "uniform",
    ]);
    assert!(!out.status.success());
}

fn three_blob_image(path: &Path) {
    let colors = [Rgb([200, 30, 40]), Rgb([20, 160, 60]), Rgb([240, 230, 200])];
    let img = RgbImage::from_fn(30, 20, |x, _| colors[(x / 10) as usize]);
    img.save(path).unwrap();
}

#[test]
fn image_outputs_have_input_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("blobs.png");
    let labels = dir.path().join("labels.png");
    let palette = dir.path().join("palette.png");
    let report = dir.path().join("report.json");
    three_blob_image(&input);

    let out = run(&[
        "cluster",
        input.to_str().unwrap(),
        "-c",
        "3",
        "--report",
        report.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--palette",
        palette.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let label_img = image::open(&labels).unwrap().into_rgb8();
    assert_eq!(label_img.dimensions(), (30, 20));
    let mut distinct: Vec<[u8; 3]> = label_img.pixels().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    assert_eq!(distinct.len(), 3);

    let palette_img = image::open(&palette).unwrap().into_rgb8();
    assert_eq!(palette_img.dimensions(), (96, 32));

    let parsed = RunReport::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed.points, 600);
    assert!(parsed.converged);
}

#[test]
fn image_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("blobs.png");
    let labels = dir.path().join("labels.png");
    three_blob_image(&input);
    let out = run(&[
        "cluster",
        input.to_str().unwrap(),
        "-c",
        "3",
        "--init",
        "first",
        "--sample",
        "50",
        "--labels",
        labels.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = RunReport::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.points, 50);
    assert_eq!(
        image::open(&labels).unwrap().into_rgb8().dimensions(),
        (30, 20)
    );
}

#[test]
fn labels_require_an_image() {
    let out = run(&[
        "cluster",
        sample_colors().to_str().unwrap(),
        "-c",
        "3",
        "--labels",
        "/tmp/x.png",
    ]);
    assert!(!out.status.success());
}

#[test]
fn compare_rows() {
    let csv = |args: &[&str]| {
        let out = run(args);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        stdout(&out)
    };
    let path = sample_colors();
    let path = path.to_str().unwrap();

    let text = csv(&["compare", path, "-c", "3", "--inits", "reference,first"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("reference,,") && rows[0].ends_with(",true"));
    assert!(rows[1].starts_with("first,,") && rows[1].ends_with(",true"));

    let text = csv(&[
        "compare", path, "-c", "3", "--inits", "uniform", "--seeds", "4",
    ]);
    assert_eq!(text.lines().count(), 2);

    let text = csv(&[
        "compare",
        path,
        "-c",
        "3",
        "--inits",
        "reference,random",
        "--seeds",
        "1,2,3",
    ]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(
        rows.iter().filter(|r| r.starts_with("reference,")).count(),
        1
    );
    assert_eq!(rows.iter().filter(|r| r.starts_with("random,")).count(), 3);
    assert!(rows.iter().any(|r| r.starts_with("random,2,")));
}

#[test]
fn compare_requires_inits() {
    assert!(
        !run(&["compare", sample_colors().to_str().unwrap(), "-c", "3"])
            .status
            .success()
    );
}

fn report_strategy() -> impl Strategy<Value = RunReport> {
    let f = || prop::num::f64::NORMAL | prop::num::f64::ZERO | prop::num::f64::SUBNORMAL;
    (
        prop::collection::vec([f(), f(), f()], 1..4),
        prop::collection::vec(prop::collection::vec(f(), 3), 0..6),
        prop::collection::vec(f(), 1..5),
        any::<bool>(),
        any::<u64>(),
    )
        .prop_map(
            |(centroids, memberships, trace, converged, seed)| RunReport {
                config: fuzzycolor_cli::report::ConfigEcho {
                    clusters: centroids.len(),
                    init: "random".into(),
                    fuzzifier: 2.0,
                    lambda: 1.0,
                    epsilon: 1e-5,
                    max_iter: 300,
                    seed,
                },
                points: memberships.len(),
                initial_centroids: centroids
                    .iter()
                    .enumerate()
                    .map(|(i, &lab)| fuzzycolor_cli::report::InitialCentroid {
                        point: i + 1,
                        lab,
                        reference: (i % 2 == 0).then(|| format!("ref {i}")),
                    })
                    .collect(),
                final_centroids: centroids,
                labels: vec![0; memberships.len()],
                memberships,
                iterations: trace.len() - 1,
                converged,
                objective_trace: trace,
            },
        )
}

proptest! {
    #[test]
    fn report_round_trips_exactly(report in report_strategy()) {
        let parsed = RunReport::from_json(&report.to_json()).unwrap();
        prop_assert_eq!(parsed, report);
    }
}
