use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mifs-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn manifest(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

#[test]
fn oracle_table() {
    let o = run(&["oracle", "--scenario", "I", "--k", "0.2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("feature\tentropy\tmi_class\n"));
    assert!(text.lines().any(|l| l == "V4\t0.5000\t0.1785"), "{text}");
    assert_eq!(text.lines().count(), 11);

    let text = stdout(&run(&["oracle", "--scenario", "II", "--k", "0.8"]));
    let v7 = text.lines().find(|l| l.starts_with("V7\t")).unwrap();
    assert!(v7.ends_with("\t0.1434"), "{v7}");
}

#[test]
fn usage_errors() {
    let o = run(&["oracle", "--scenario", "I", "--k", "1.0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["oracle", "--scenario", "III", "--k", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["order", "--scenario", "I", "--k", "0.2", "--method", "jmi"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    for name in ["mifs", "mrmr", "qmifs", "maxmifs"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn order_lines() {
    let o = run(&["order", "--scenario", "I", "--k", "0.2", "--method", "nmifs"]);
    assert_eq!(stdout(&o), "X X2 Y2 Z2 X-Y | halt: no admissible candidate\n");
    let o = run(&["order", "--scenario", "II", "--k", "0.8", "--method", "maxmifs"]);
    assert_eq!(stdout(&o), "X Y Z W+2 X-Y Z+W 3X+1 Y2 Z2 X2 | halt: all selected\n");
}

#[test]
fn order_trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.tsv");
    let o = run(&[
        "order", "--scenario", "I", "--k", "0.2", "--method", "mifs", "--beta", "0",
        "--trace", trace.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let tsv = std::fs::read_to_string(trace).unwrap();
    assert!(tsv.starts_with("step\tfeature\tobjective\tadmissible\tselected\n"));
    assert!(tsv.contains("indet"), "{tsv}");
}

#[test]
fn order_from_data_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let spec = mifs_lab::ScenarioSpec::new(mifs_lab::Scenario::Uniform, 0.8).unwrap();
    let mut rng = mifs_lab::simlab::replicate_rng(1, 0.8, 2000, 0);
    mifs_lab::simlab::generate_sample(&spec, 2000, &mut rng)
        .unwrap()
        .write_csv_path(&csv)
        .unwrap();
    let args = ["order", "--method", "mifs", "--beta", "1", "--data", csv.to_str().unwrap()];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    assert!(a.starts_with("X Y ") || a.starts_with("X X-Y ") || a.starts_with("3X+1 "), "{a}");

    std::fs::write(&csv, "v1,v2,class\n0.1,0.2,1\n0.3,oops,0\n").unwrap();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 3"));
}

#[test]
fn relevance_report() {
    let fixture = manifest("fixtures/small_joint.json");
    let o = run(&["relevance", "--joint", fixture.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("SR: V1; optimal sets: {V1,V2},{V1,V3}\n"), "{text}");
    assert!(text.contains("irrelevant: V4,V5"));
}

#[test]
fn verify_passes() {
    let o = run(&["verify"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("PASS  MI(C_0.2, X^2) = 0 under N(0,1)"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn simulate_is_reproducible_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("small.conf");
    std::fs::write(&conf, "scenario = I\nk = 0.8\nn = 200\nmethods = mifs:1, nmifs\nreplicates = 20\nseed = 3\n").unwrap();
    let out = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec!["simulate", "--config", conf.to_str().unwrap(), "--out", path.to_str().unwrap()];
        args.extend(extra);
        assert!(run(&args).status.success());
        std::fs::read_to_string(path).unwrap()
    };
    let a = out("a.csv", &[]);
    assert_eq!(a, out("b.csv", &[]));
    assert!(a.starts_with("scenario,k,n,method,beta,frequency,replicates,seed\n"));
    assert!(a.contains("I,0.8,200,mifs,1,"));
    assert!(a.contains("I,0.8,200,nmifs,,"));

    let c = out("c.csv", &["--replicates", "7", "--seed", "9"]);
    assert!(c.lines().skip(1).all(|l| l.ends_with(",7,9")), "{c}");

    let traces = dir.path().join("t.json");
    run(&["simulate", "--config", conf.to_str().unwrap(), "--traces", traces.to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(traces).unwrap()).unwrap();
    assert!(json.is_array() || json.is_object());
}

#[test]
fn simulate_config_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "scenario = I\n# fine\nk = 0.2\ncolour = blue\n").unwrap();
    let o = run(&["simulate", "--config", conf.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 4"));
}

#[test]
fn shipped_configs_parse() {
    for name in ["default", "gaussian", "trend"] {
        mifs_lab::config::load_config(&manifest(&format!("configs/{name}.conf"))).unwrap();
    }
}
