use mudomain::{parse_config, Command};

fn err(text: &str) -> (String, String) {
    let e = parse_config(text).unwrap_err();
    (e.location, e.message)
}

#[test]
fn power_with_defaults() {
    let c = parse_config(r#"{"family":"power","alpha":1.0,"commands":["analyze","boundary"]}"#).unwrap();
    assert_eq!(c.spec.name(), "power");
    assert_eq!((c.n, c.m), (4096, 1024));
    assert_eq!((c.sim.step_dt, c.sim.n_paths), (1e-4, 10_000));
    assert_eq!(c.excision, 1e-3);
    assert!(c.has(Command::Boundary) && !c.has(Command::Simulate));
    assert!(c.formats.csv && c.formats.json);
}

#[test]
fn flatexp_parses_without_parameters() {
    let c = parse_config(r#"{"family":"flatexp"}"#).unwrap();
    assert_eq!(c.spec.name(), "flatexp");
    assert_eq!(c.commands, Command::ALL.to_vec());
}

#[test]
fn negative_alpha_is_rejected_at_its_key() {
    let (loc, msg) = err(r#"{"family":"power","alpha":-0.5}"#);
    assert_eq!(loc, "/alpha");
    assert!(msg.contains("non-negative"), "{msg}");
}

#[test]
fn missing_alpha_is_named() {
    let (loc, msg) = err(r#"{"family":"power"}"#);
    assert_eq!(loc, "/alpha");
    assert!(msg.contains("requires"), "{msg}");
}

#[test]
fn unknown_family_lists_the_choices() {
    let (loc, msg) = err(r#"{"family":"cauchy"}"#);
    assert_eq!(loc, "/family");
    assert!(msg.contains("two_interval_uniform"), "{msg}");
}

#[test]
fn non_positive_dt_is_rejected() {
    for dt in ["0", "-1e-4"] {
        let (loc, _) = err(&format!(r#"{{"family":"uniform","dt":{dt}}}"#));
        assert_eq!(loc, "/dt");
    }
}

#[test]
fn simulate_needs_boundary() {
    let (loc, _) = err(r#"{"family":"uniform","commands":["analyze","simulate"]}"#);
    assert_eq!(loc, "/commands");
}

#[test]
fn stray_keys_are_rejected() {
    let (loc, _) = err(r#"{"family":"uniform","alpha":2}"#);
    assert_eq!(loc, "/alpha");
    let (loc, _) = err(r#"{"family":"uniform","commands":["plot"]}"#);
    assert_eq!(loc, "/commands/0");
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let (loc, _) = err("{\n  \"family\": \"power\",\n  \"alpha\": ,\n}");
    assert!(loc.starts_with("line 3"), "{loc}");
}

#[test]
fn user_tables_in_both_directions() {
    let c = parse_config(r#"{"family":"user_table","table_kind":"cdf","points":[[-1,0],[0,0.5],[1,1]]}"#).unwrap();
    assert_eq!(c.spec.name(), "user_table");
    parse_config(r#"{"family":"user_table","table_kind":"quantile","points":[[0,-1],[1,1]]}"#).unwrap();
    let (loc, _) = err(r#"{"family":"user_table","table_kind":"cdf","points":[[-1,0],[1]]}"#);
    assert_eq!(loc, "/points/1");
    let (loc, _) = err(r#"{"family":"user_table","table_kind":"cdf","points":[[1,0],[-1,1]]}"#);
    assert_eq!(loc, "/points");
}

#[test]
fn overrides_are_applied() {
    let c = parse_config(
        r#"{"family":"uniform","a":-2,"b":2,"N":512,"M":256,"dt":4e-4,"n_paths":100,"seed":9,"max_steps":77,"workers":2,"formats":["json"]}"#,
    )
    .unwrap();
    assert_eq!((c.n, c.m, c.sim.n_paths, c.sim.seed, c.sim.max_steps), (512, 256, 100, 9, 77));
    assert_eq!(c.workers, Some(2));
    assert!(!c.formats.csv && c.formats.json);
    assert_eq!(c.spec.support().hi, 2.0);
}
