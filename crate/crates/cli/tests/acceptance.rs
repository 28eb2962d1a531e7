//! End-to-end checks of the batch binary: every bundled fixture runs
//! twice with byte-identical outputs, golden values appear in the files,
//! and every documented exit code is reachable.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_mcf-ttdl");

/// Runs the binary with a scrubbed environment; `env` adds overrides.
fn run(kind: &str, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.arg(kind).args(args).env_remove("MCF_TTDL_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary should spawn")
}

fn stderr_line(out: &Output, kind: &str) -> String {
    let text = String::from_utf8_lossy(&out.stderr).into_owned();
    assert_eq!(
        text.lines().count(),
        1,
        "stderr must be exactly one line, got: {text:?}"
    );
    assert!(
        text.starts_with(&format!("{kind}: ")),
        "stderr must start with the kind, got: {text:?}"
    );
    text
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal expected")
}

/// File name → contents for every regular file directly inside `dir`.
fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut map = BTreeMap::new();
    for entry in fs::read_dir(dir).expect("output dir should list") {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            map.insert(
                entry.file_name().into_string().unwrap(),
                fs::read(entry.path()).unwrap(),
            );
        }
    }
    map
}

fn fixture_kind(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .find_map(|l| l.trim().strip_prefix("kind = "))
        .unwrap_or_else(|| panic!("{} has no kind line", path.display()))
        .trim()
        .to_string()
}

fn assert_contains(dir: &Path, file: &str, needle: &str) {
    let path = dir.join(file);
    let text =
        fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    assert!(
        text.contains(needle),
        "{} should contain {needle:?}, got:\n{text}",
        path.display()
    );
}

#[test]
fn acceptance_criteria() {
    let work = TempDir::new().unwrap();
    let fx = work.path().join("fixtures");

    // --fixtures emits the bundled configs (the kind argument is not used
    // for anything else in this mode).
    let out = run(
        "design-spacing",
        &["--fixtures", "--out", fx.to_str().unwrap()],
        &[],
    );
    assert_eq!(exit_code(&out), 0, "--fixtures should succeed");
    stderr_line(&out, "design-spacing");

    let mut cfgs: Vec<PathBuf> = fs::read_dir(&fx)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    cfgs.sort();
    assert_eq!(cfgs.len(), 11, "expected the full fixture set");

    // Every fixture runs twice into fresh directories with byte-identical
    // output files.
    let run_a = work.path().join("run_a");
    let run_b = work.path().join("run_b");
    for cfg in &cfgs {
        let kind = fixture_kind(cfg);
        let stem = cfg.file_stem().unwrap().to_str().unwrap();
        let mut snaps = Vec::new();
        for base in [&run_a, &run_b] {
            let dir = base.join(stem);
            let out = run(
                &kind,
                &[
                    "--config",
                    cfg.to_str().unwrap(),
                    "--out",
                    dir.to_str().unwrap(),
                ],
                &[],
            );
            let line = stderr_line(&out, &kind);
            assert_eq!(exit_code(&out), 0, "{stem} should pass: {line}");
            assert!(line.contains("ok"), "{stem}: {line}");
            let snap = snapshot(&dir);
            assert!(!snap.is_empty(), "{stem} wrote no output files");
            snaps.push(snap);
        }
        assert_eq!(
            snaps[0].keys().collect::<Vec<_>>(),
            snaps[1].keys().collect::<Vec<_>>(),
            "{stem}: the two runs wrote different file sets"
        );
        for (name, bytes) in &snaps[0] {
            assert_eq!(
                bytes, &snaps[1][name],
                "{stem}/{name} differs between identical runs"
            );
        }
    }

    // Golden values frozen from the engine: grating spacing for 4.97 GHz,
    // readout wavelength for 20 GHz, the 50 ps hetero tap comb, the
    // 10 GHz three-tap comb with its -9.54 dB sidelobe, and the two
    // diversity modes of the nine-grating demonstrator.
    let a = |stem: &str| run_a.join(stem);
    assert_contains(
        &a("spacing_target"),
        "result.txt",
        "spacing_mm=20.542301486346222",
    );
    assert_contains(&a("wavelength_target"), "result.txt", "lambda_m_nm=1560");
    assert_contains(&a("hetero_spatial_1560"), "taps.csv", "0,737.5,1,core1");
    assert_contains(&a("hetero_spatial_1560"), "taps.csv", "6,1037.5,1,core7");
    assert_contains(&a("three_tap_filter"), "metrics.txt", "fsr_ghz=10");
    assert_contains(
        &a("three_tap_filter"),
        "metrics.txt",
        "sidelobe_level_db=-9.54242509439325",
    );
    assert_contains(
        &a("fbg_wavelength_core6"),
        "taps.csv",
        "1,195.89552182797073,0.28460498941515416,core6@1541.51nm",
    );
    assert_contains(
        &a("fbg_spatial_lambda1"),
        "taps.csv",
        "1,58.76865654839123,0.31622776601683794,core5@1537.07nm",
    );
    assert_contains(&a("hetero_link_check"), "report.txt", "pass=true");

    // A worker-count override must not change a single byte.
    let thr = work.path().join("threads0");
    let cfg = fx.join("three_tap_filter.cfg");
    let out = run(
        "simulate-filter",
        &[
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            thr.to_str().unwrap(),
        ],
        &[("MCF_TTDL_THREADS", "0")],
    );
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        snapshot(&thr),
        snapshot(&run_a.join("three_tap_filter")),
        "MCF_TTDL_THREADS=0 changed the output bytes"
    );

    // Exit 1: a validation kind fails but still writes its report.
    let wide = work.path().join("wide_beam.cfg");
    let text = fs::read_to_string(fx.join("inscription_check.cfg")).unwrap();
    fs::write(&wide, text.replace("width_um = 23", "width_um = 25")).unwrap();
    let dir = work.path().join("exit1");
    let out = run(
        "validate-inscription",
        &[
            "--config",
            wide.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(exit_code(&out), 1, "failed validation must exit 1");
    let line = stderr_line(&out, "validate-inscription");
    assert!(line.contains("single_core_addressability"), "{line}");
    assert_contains(&dir, "report.txt", "pass=false");
    assert_contains(&dir, "report.txt", "single_core_addressability.margin=-2");

    // Exit 2, three ways: a key missing its unit suffix, a config run
    // under the wrong kind, and a malformed thread override.
    let bad = work.path().join("bad_suffix.cfg");
    fs::write(
        &bad,
        "[job]\nkind = design-spacing\n\n[target]\nfsr_ghz = 5\ngroup = 1.4682\n",
    )
    .unwrap();
    let dir = work.path().join("exit2a");
    let out = run(
        "design-spacing",
        &[
            "--config",
            bad.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(exit_code(&out), 2);
    let line = stderr_line(&out, "design-spacing");
    assert!(
        line.contains("'group_index'"),
        "suffix hint missing: {line}"
    );

    let mismatch = work.path().join("kind_mismatch.cfg");
    let text = fs::read_to_string(fx.join("spacing_target.cfg")).unwrap();
    fs::write(
        &mismatch,
        text.replace("kind = design-spacing", "kind = design-wavelength"),
    )
    .unwrap();
    let dir = work.path().join("exit2b");
    let out = run(
        "design-spacing",
        &[
            "--config",
            mismatch.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(exit_code(&out), 2);
    let line = stderr_line(&out, "design-spacing");
    assert!(
        line.contains("declares kind 'design-wavelength'"),
        "kind-mismatch diagnostic missing: {line}"
    );

    let dir = work.path().join("exit2c");
    let out = run(
        "design-spacing",
        &[
            "--config",
            fx.join("spacing_target.cfg").to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ],
        &[("MCF_TTDL_THREADS", "many")],
    );
    assert_eq!(exit_code(&out), 2);
    stderr_line(&out, "design-spacing");

    // Exit 2 also covers flag misuse: --config with --fixtures, neither.
    let out = run(
        "design-spacing",
        &[
            "--config",
            fx.join("spacing_target.cfg").to_str().unwrap(),
            "--fixtures",
            "--out",
            work.path().join("exit2d").to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(exit_code(&out), 2);
    let out = run(
        "design-spacing",
        &["--out", work.path().join("exit2e").to_str().unwrap()],
        &[],
    );
    assert_eq!(exit_code(&out), 2);

    // Exit 3, two ways: --out collides with a file, config unreadable.
    let blocker = work.path().join("blocker");
    fs::write(&blocker, "not a directory").unwrap();
    let out = run(
        "design-spacing",
        &[
            "--config",
            fx.join("spacing_target.cfg").to_str().unwrap(),
            "--out",
            blocker.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(exit_code(&out), 3);
    stderr_line(&out, "design-spacing");

    let out = run(
        "design-spacing",
        &[
            "--config",
            work.path().join("missing.cfg").to_str().unwrap(),
            "--out",
            work.path().join("exit3b").to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(exit_code(&out), 3);
    stderr_line(&out, "design-spacing");

    println!("acceptance 10 (fixture determinism and exit codes): pass");
}
