use symstrata::models::{loop_sphere_series, PoincareSeries};
use symstrata::strata::Engines;
use symstrata::Result;
use symstrata_cli::{run, run_with_engines};

fn exec(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args.iter().copied(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn csv_dims(text: &str) -> Vec<u64> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn mapspace_tables() {
    let (code, out, _) = exec(&[
        "betti",
        "mapspace",
        "--m",
        "2",
        "--max-degree",
        "12",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv_dims(&out), [1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0]);

    let (code, out, _) = exec(&[
        "betti",
        "mapspace",
        "--m",
        "3",
        "--max-degree",
        "22",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let d = csv_dims(&out);
    assert_eq!([d[15], d[17], d[19]], [3, 3, 3]);

    let (_, out, _) = exec(&[
        "betti",
        "mapspace",
        "--m",
        "1",
        "--max-degree",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(csv_dims(&out), [1, 0, 0, 1, 0]);
}

#[test]
fn ring_flag() {
    let (code, out, _) = exec(&[
        "betti",
        "mapspace",
        "--m",
        "2",
        "--ring",
        "--max-degree",
        "22",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("relation b2^3 = 0: verified"));
    assert!(out.contains("relation c7^2 = 0: verified"));

    let (code, out, _) = exec(&[
        "betti",
        "mapspace",
        "--m",
        "3",
        "--ring",
        "--max-degree",
        "30",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("relation b4 c13 - 2 b2 b4 c11 = 0: verified"));

    let (code, _, err) = exec(&["betti", "mapspace", "--m", "4", "--ring"]);
    assert_eq!(code, 2);
    assert!(err.contains("--ring"));
}

#[test]
fn usage_errors() {
    let (code, _, err) = exec(&["betti", "mapspace", "--m", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("--m"));
    assert_eq!(exec(&["betti"]).0, 2);
    assert_eq!(exec(&["frobnicate"]).0, 2);
    let (code, _, err) = exec(&["betti", "stratum", "--lambda", "1^x", "--d", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("--lambda"));
    let (code, _, _) = exec(&[
        "betti", "stratum", "--lambda", "2", "--d", "1", "--stable", "--j", "3",
    ]);
    assert_eq!(code, 2);
    assert_eq!(exec(&["--help"]).0, 0);
}

#[test]
fn stratum_tables() {
    let (code, out, _) = exec(&[
        "betti",
        "stratum",
        "--lambda",
        "1^5 2",
        "--d",
        "1",
        "--j",
        "5",
        "--max-degree",
        "7",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv_dims(&out), [1, 2, 2, 2, 2, 1, 0, 0]);

    let (code, out, _) = exec(&[
        "betti",
        "stratum",
        "--lambda",
        "2",
        "--d",
        "2",
        "--stable",
        "--max-degree",
        "12",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv_dims(&out), [1, 0, 0, 2, 0, 0, 2, 0, 0, 2, 0, 0, 2]);

    let (code, out, _) = exec(&[
        "betti",
        "stratum",
        "--lambda",
        "2 3",
        "--d",
        "1",
        "--stable",
        "--max-degree",
        "5",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("# j = 7"));
    let row = |i: usize| {
        out.lines()
            .find(|l| l.split_whitespace().next() == Some(&i.to_string()))
            .unwrap()
            .to_string()
    };
    assert!(row(1).contains("! reference"));
    for (i, want) in [(2, "8"), (3, "12"), (4, "16"), (5, "20")] {
        assert_eq!(row(i).split_whitespace().nth(1), Some(want));
        assert!(!row(i).contains('!'));
    }
}

#[test]
fn json_matches_csv() {
    let base = [
        "betti",
        "stratum",
        "--lambda",
        "2 3",
        "--d",
        "2",
        "--stable",
        "--max-degree",
        "9",
    ];
    let (_, json, _) = exec(&[&base[..], &["--format", "json"]].concat());
    let (_, csv, _) = exec(&[&base[..], &["--format", "csv"]].concat());
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(
        header,
        ["degree", "dim", "section-series", "gerstenhaber", "4k-rule"]
    );
    for (row, line) in v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .zip(csv.lines().skip(1))
    {
        let cells: Vec<u64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells[0], row["degree"].as_u64().unwrap());
        assert_eq!(cells[1], row["dim"].as_u64().unwrap());
        assert_eq!(cells[2], row["engines"]["section-series"].as_u64().unwrap());
        assert_eq!(cells[3], row["engines"]["gerstenhaber"].as_u64().unwrap());
        assert_eq!(cells[4], row["reference"]["4k-rule"].as_u64().unwrap());
    }
    assert_eq!(v["d"], 2);
    assert_eq!(v["discrepancies"][0]["degree"], 3);
}

#[test]
fn compare_formulas() {
    for (d, max, first) in [("2", "12", 6), ("1", "6", 2), ("4", "20", 14)] {
        let (code, out, _) = exec(&["compare-formulas", "--d", d, "--max-degree", max]);
        assert_eq!(code, 0);
        assert!(
            out.contains(&format!("first disagreement at degree {first}")),
            "{out}"
        );
    }
}

#[test]
fn verify_suites() {
    for suite in ["conjecture-g", "conjecture-h", "cp3", "formula-150", "all"] {
        let (code, out, _) = exec(&["verify", suite]);
        assert_eq!(code, 0, "{out}");
        assert!(out.trim_end().ends_with("PASS"));
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "betti",
        "stratum",
        "--lambda",
        "2 3",
        "--d",
        "1",
        "--stable",
        "--max-degree",
        "8",
        "--format",
        "json",
    ];
    assert_eq!(exec(&args), exec(&args));
}

fn broken_loop_sphere(d: u32, max: usize) -> Result<PoincareSeries> {
    let mut c = loop_sphere_series(d, max)?.coefficients().to_vec();
    c[2 * d as usize - 1] = 0;
    Ok(PoincareSeries::new(c))
}

#[test]
fn broken_engine_fails_verification() {
    let engines = Engines {
        loop_sphere: broken_loop_sphere,
        ..Engines::default()
    };
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with_engines(["verify", "conjecture-h"], &engines, &mut out, &mut err);
    let out = String::from_utf8(out).unwrap();
    assert_eq!(code, 1);
    assert!(out.contains("conjecture-h: FAIL"));
    assert!(
        out.contains("FAIL d=1 H_1: closed-form=2 section-series=1 gerstenhaber=2"),
        "{out}"
    );

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let args = [
        "betti",
        "stratum",
        "--lambda",
        "2",
        "--d",
        "2",
        "--stable",
        "--max-degree",
        "6",
    ];
    assert_eq!(run_with_engines(args, &engines, &mut out, &mut err), 1);
    assert!(String::from_utf8(out).unwrap().contains("(engines)"));
}
