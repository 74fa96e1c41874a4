use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bloch-braids"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Fresh scratch directory for one test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bloch-braids-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_model(dir: &Path, json: &str) -> PathBuf {
    let path = dir.join("model.json");
    std::fs::write(&path, json).unwrap();
    path
}

#[test]
fn bands_are_byte_identical_across_runs_and_thread_counts() {
    let dir = scratch("determinism");
    let model = configs().join("models/trimer_t1t2.json");
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "0", "1"].iter().enumerate() {
        let out = dir.join(format!("bands{i}.csv"));
        let o = run(bin()
            .env("BLOCH_BRAIDS_THREADS", threads)
            .args(["bands", "--k0", "0.7853981633974483", "--samples", "4096", "--model"])
            .arg(&model)
            .arg("--out")
            .arg(&out));
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert!(outputs[0].starts_with(b"k,re_e1,im_e1,re_e2,im_e2,re_e3,im_e3\n"));
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn dumped_config_replays_the_same_run() {
    let dir = scratch("dump");
    let model = configs().join("models/trimer_t2t1.json");
    let args = ["braid", "--k0", "0.7853981633974483", "--format", "json", "--model"];
    let dumped = run(bin().args(args).arg(&model).arg("--dump-config"));
    assert!(dumped.status.success());
    let config = dir.join("run.json");
    std::fs::write(&config, &dumped.stdout).unwrap();

    let direct = run(bin().args(args).arg(&model));
    let replay = run(bin().arg("run").arg(&config));
    assert!(direct.status.success() && replay.status.success());
    assert_eq!(direct.stdout, replay.stdout);
    let record: serde_json::Value = serde_json::from_slice(&replay.stdout).unwrap();
    assert_eq!(record["word"], "t2 t1");
    assert_eq!(record["arrangement"], "(E3,E1,E2)");
}

#[test]
fn braid_summary_reports_word_and_index() {
    let dir = scratch("summary");
    let out = dir.join("t1t2.csv");
    let o = run(bin().arg("run").arg(configs().join("trimer_t1t2_braid.json")).arg("--out").arg(&out));
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "word: t1 t2, nu: 2");
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("word,exponent_sum,nu,closure,arrangement,k0\nt1 t2,2,2,"));
}

#[test]
fn riemann_writes_eps_next_to_the_loop() {
    let dir = scratch("riemann");
    let out = dir.join("loop.csv");
    let o = run(bin().arg("run").arg(configs().join("dimer_m2_riemann.json")).arg("--out").arg(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("closure: id, enclosed eps: "));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("theta,re_z,im_z,"));
    let eps: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("loop.csv.eps.json")).unwrap()).unwrap();
    assert!(!eps.as_array().unwrap().is_empty());
}

#[test]
fn phase_diagram_csv_marks_degenerate_cells() {
    let dir = scratch("phase");
    let model = write_model(
        &dir,
        r#"{"kind": "dimer", "params": {"alpha": 1.0, "beta": 1.5, "delta": 0.3, "gamma": 0.0, "m": 1}}"#,
    );
    let o = run(bin()
        .args(["phase-diagram", "--axis1", "beta:1.5:1.5:1", "--axis2", "gamma:-1:1:5", "--model"])
        .arg(&model));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta,gamma,word,nu,degenerate_flag");
    assert_eq!(lines[1], "1.5,-1,T1,-1,0");
    assert_eq!(lines[2], "1.5,-0.5,DEGENERATE,,1");
    assert_eq!(lines[3], "1.5,0,e,0,0");
}

#[test]
fn invalid_input_exits_with_one() {
    let dir = scratch("invalid");
    let model = configs().join("models/dimer.json");
    let cases: Vec<Vec<String>> = vec![
        vec!["bands".into(), "--model".into(), dir.join("missing.json").display().to_string()],
        vec!["bands".into(), "--samples".into(), "8".into(), "--model".into(), model.display().to_string()],
        vec!["riemann".into(), "--r".into(), "-1".into(), "--model".into(), model.display().to_string()],
        vec![
            "phase-diagram".into(),
            "--axis1".into(),
            "v:0:1:3".into(),
            "--axis2".into(),
            "gamma:0:1:3".into(),
            "--model".into(),
            model.display().to_string(),
        ],
        vec!["bands".into(), "--bogus".into()],
    ];
    for args in cases {
        let o = run(bin().args(&args));
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let bad_json = write_model(&dir, r#"{"kind": "dimer", "params": {"alpha": 1.0}}"#);
    assert_eq!(run(bin().arg("eps").arg("--model").arg(&bad_json)).status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_with_two() {
    let dir = scratch("numerical");
    let model = write_model(
        &dir,
        r#"{"kind": "dimer", "params": {"alpha": 1.0, "beta": 1.5, "delta": 0.3, "gamma": 0.5, "m": 1}}"#,
    );
    let o = run(bin().arg("bands").arg("--model").arg(&model));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("numerical failure:"));
    let o = run(bin().args(["winding", "--e-ref", "0", "--model"]).arg(&model));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_cleanly() {
    for flag in ["--help", "--version"] {
        assert_eq!(run(bin().arg(flag)).status.code(), Some(0));
    }
}
