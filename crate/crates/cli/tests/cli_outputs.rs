//! Output-format tests: the demo scenario must reproduce the committed
//! golden files byte for byte, and the CSV contracts must hold.

use riscope::{cmd_height_sweep, cmd_simulate, HeightSweepArgs, RisFlag, SimulateArgs};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

fn demo_scenario() -> PathBuf {
    PathBuf::from(format!(
        "{}/../../scenarios/demo-small.json",
        env!("CARGO_MANIFEST_DIR")
    ))
}

fn golden(name: &str) -> Vec<u8> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    fs::read(&path).unwrap_or_else(|e| panic!("missing golden file {path}: {e}"))
}

fn run_simulate(ris: RisFlag, out_dir: &Path) {
    cmd_simulate(&SimulateArgs {
        scenario: demo_scenario(),
        ris,
        workers: None,
        out_dir: out_dir.to_path_buf(),
    })
    .unwrap();
}

#[test]
fn simulate_reproduces_the_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    run_simulate(RisFlag::On, dir.path());
    for name in ["pl_map.csv", "cdf.csv", "summary.json"] {
        let produced = fs::read(dir.path().join(name)).unwrap();
        assert_eq!(produced, golden(&format!("simulate_on/{name}")), "{name} drifted");
    }
}

#[test]
fn height_sweep_reproduces_the_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    cmd_height_sweep(&HeightSweepArgs {
        scenario: demo_scenario(),
        offsets: vec![0.0, 10.0, 20.0, 30.0],
        workers: None,
        out_dir: dir.path().to_path_buf(),
    })
    .unwrap();

    assert_eq!(fs::read(dir.path().join("sweep.csv")).unwrap(), golden("sweep.csv"));
    assert_eq!(
        fs::read(dir.path().join("sweep_summary.json")).unwrap(),
        golden("sweep_summary.json")
    );
    for sub in ["baseline", "offset_0", "offset_10", "offset_20", "offset_30"] {
        for name in ["pl_map.csv", "cdf.csv"] {
            let path = dir.path().join(sub).join(name);
            assert!(path.is_file(), "missing {}", path.display());
        }
    }
}

#[test]
fn csv_headers_match_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    run_simulate(RisFlag::On, dir.path());
    let map = fs::read_to_string(dir.path().join("pl_map.csv")).unwrap();
    let cdf = fs::read_to_string(dir.path().join("cdf.csv")).unwrap();
    assert_eq!(
        map.lines().next().unwrap(),
        "x,y,easting_m,northing_m,pl_min_db,winner_kind,cell_id,ris_id"
    );
    assert_eq!(cdf.lines().next().unwrap(), "pl_db,cum_prob");
}

/// Parses pl_map.csv into (x, y) -> (pl_min_db, winner_kind).
fn parse_map(path: &Path) -> BTreeMap<(u32, u32), (f64, String)> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|line| {
            let parts: Vec<&str> = line.split(',').collect();
            assert_eq!(parts.len(), 8, "bad row: {line}");
            let key = (parts[0].parse().unwrap(), parts[1].parse().unwrap());
            (key, (parts[4].parse().unwrap(), parts[5].to_string()))
        })
        .collect()
}

#[test]
fn enabling_ris_never_raises_a_point() {
    let on_dir = tempfile::tempdir().unwrap();
    let off_dir = tempfile::tempdir().unwrap();
    run_simulate(RisFlag::On, on_dir.path());
    run_simulate(RisFlag::Off, off_dir.path());

    let on = parse_map(&on_dir.path().join("pl_map.csv"));
    let off = parse_map(&off_dir.path().join("pl_map.csv"));
    assert_eq!(on.len(), off.len(), "masks must not depend on the ris flag");

    let mut improved = 0usize;
    for (key, (pl_on, kind_on)) in &on {
        let (pl_off, kind_off) = &off[key];
        assert!(pl_on <= pl_off, "point {key:?} got worse: {pl_on} > {pl_off}");
        assert_ne!(kind_off, "ris_reflected", "no reflected winner with ris off");
        if pl_on < pl_off {
            improved += 1;
            assert_eq!(kind_on, "ris_reflected", "only a panel can improve a point");
        }
    }
    assert!(improved > 0, "the demo scenario should have reflected winners");
}

#[test]
fn masked_rows_are_omitted_and_counted() {
    let dir = tempfile::tempdir().unwrap();
    run_simulate(RisFlag::On, dir.path());

    let map = parse_map(&dir.path().join("pl_map.csv"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(map.len() as u64, summary["evaluated_points"].as_u64().unwrap());
    assert_eq!(
        map.len() as u64 + summary["masked_points"].as_u64().unwrap(),
        40 * 40
    );
    // Grid point (6, 6) sits at (19.5, 19.5), inside the 15..45 block.
    assert!(!map.contains_key(&(6, 6)), "in-building point must be masked");
    // The CDF holds one row per distinct loss value, cumulating to one.
    let cdf = fs::read_to_string(dir.path().join("cdf.csv")).unwrap();
    let last = cdf.lines().last().unwrap();
    assert!(last.ends_with(",1"), "cdf must end at probability one: {last}");
}

#[test]
fn no_scratch_files_are_left_behind() {
    let dir = tempfile::tempdir().unwrap();
    cmd_height_sweep(&HeightSweepArgs {
        scenario: demo_scenario(),
        offsets: vec![0.0, 5.0],
        workers: Some(2),
        out_dir: dir.path().to_path_buf(),
    })
    .unwrap();
    let mut stack = vec![dir.path().to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let entry = entry.unwrap();
            let name = entry.file_name().to_string_lossy().into_owned();
            assert!(!name.ends_with(".tmp"), "scratch file left behind: {name}");
            if entry.path().is_dir() {
                stack.push(entry.path());
            }
        }
    }
}
