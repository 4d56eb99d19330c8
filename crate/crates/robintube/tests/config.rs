use proptest::prelude::*;
use robintube::config::{BranchConfig, ExperimentConfig};
use robintube::ConfigError;

const BASE: &str = r#"
version = 1
name = "t"

[cross_section]
shape = "disk"
radius = 1.0
h = 0.2
gamma = 1.0

[curve]
preset = "straight"
length = 1.0
"#;

fn with_run(extra: &str) -> Result<ExperimentConfig, ConfigError> {
    ExperimentConfig::from_toml(&format!("{BASE}\n[run]\n{extra}\n"))
}

fn field_path(e: ConfigError) -> String {
    match e {
        ConfigError::Field { path, .. } => path,
        other => panic!("expected a field error, got {other:?}"),
    }
}

#[test]
fn defaults_fill_optional_sections() {
    let cfg = ExperimentConfig::from_toml(BASE).unwrap();
    assert_eq!(cfg.run.branch, BranchConfig::Auto);
    assert_eq!(cfg.run.eps, vec![0.2, 0.1, 0.05, 0.025]);
    assert!(cfg.output.svg && !cfg.output.comparison);
}

#[test]
fn eps_out_of_range_names_the_field() {
    let e = with_run("eps = [1.5, 0.1]").unwrap_err();
    assert_eq!(e.to_string(), "run.eps[0]: must lie in (0, 1), got 1.5");
}

#[test]
fn eps_must_decrease() {
    assert_eq!(field_path(with_run("eps = [0.1, 0.2]").unwrap_err()), "run.eps[1]");
    assert_eq!(field_path(with_run("eps = [0.1, 0.1]").unwrap_err()), "run.eps[1]");
}

#[test]
fn zero_modes_rejected() {
    assert_eq!(field_path(with_run("modes = 0").unwrap_err()), "run.modes");
}

#[test]
fn missing_preset_parameter_is_reported() {
    let text = BASE.replace("preset = \"straight\"", "preset = \"quadratic_well\"");
    let e = ExperimentConfig::from_toml(&text).unwrap_err();
    assert_eq!(e.to_string(), "curve.k: required for preset quadratic_well");
}

#[test]
fn unknown_keys_are_parse_errors() {
    let e = with_run("epsilon = [0.1]").unwrap_err();
    assert!(matches!(e, ConfigError::Parse(ref m) if m.contains("epsilon")), "{e}");
}

#[test]
fn wrong_schema_version() {
    let e = ExperimentConfig::from_toml(&BASE.replace("version = 1", "version = 7")).unwrap_err();
    assert_eq!(field_path(e), "version");
}

#[test]
fn shipped_configs_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            let cfg = ExperimentConfig::load(&p).unwrap();
            cfg.curve_spec().unwrap();
            n += 1;
        }
    }
    assert!(n >= 3);
}

proptest! {
    #[test]
    fn decreasing_eps_lists_in_range_are_accepted(mut v in prop::collection::vec(0.001f64..0.999, 1..6)) {
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v.dedup();
        let list: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
        let text = format!("eps = [{}]", list.join(", "));
        prop_assert!(with_run(&text).is_ok(), "{}", text);
    }

    #[test]
    fn any_eps_at_or_above_one_is_rejected(bad in 1.0f64..10.0, i in 0usize..3) {
        let mut v = [0.5, 0.25, 0.125];
        v[i] = bad;
        let list: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
        let e = with_run(&format!("eps = [{}]", list.join(", "))).unwrap_err();
        prop_assert_eq!(field_path(e), format!("run.eps[{i}]"));
    }
}
