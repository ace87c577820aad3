//! CLI contract tests: exit codes, report determinism, cache transparency.

use stb_cli::{execute, run, Command, ComplexArgs};

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("stb".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect()
}

#[test]
fn exit_codes() {
    // 0: verification passes
    assert_eq!(run(argv(&["reduce", "--from", "inf", "--to", "3/7"])), 0);
    // 1: verification failure (wrong CM dimension)
    assert_eq!(
        run(argv(&[
            "cm-check",
            "--poset",
            "simplex-boundary",
            "--k",
            "2",
            "--d",
            "0"
        ])),
        1
    );
    // 2: usage errors (unknown flag, malformed matrix, zero cusp)
    assert_eq!(run(argv(&["reduce", "--frm", "inf", "--to", "1"])), 2);
    assert_eq!(
        run(argv(&[
            "pipeline",
            "verify-prop51",
            "--matrix",
            "1,x;0,1",
            "--bound",
            "2"
        ])),
        2
    );
    assert_eq!(run(argv(&["reduce", "--from", "0/0", "--to", "1"])), 2);
    // 2: non-symplectic input
    assert_eq!(
        run(argv(&[
            "pipeline",
            "verify-prop51",
            "--matrix",
            "2,0;0,1",
            "--bound",
            "2"
        ])),
        2
    );
    // 3: budget exceeded
    assert_eq!(
        run(argv(&[
            "building",
            "--n",
            "2",
            "--q",
            "3",
            "--budget",
            "5",
            "--no-cache"
        ])),
        3
    );
}

#[test]
fn report_determinism_and_cache_transparency() {
    let dir = std::env::temp_dir().join(format!("stb-cache-test-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::env::set_var("STB_CACHE_DIR", &dir);

    let cases = vec![("ia", 1usize, 2i64), ("i-delta", 1, 3), ("ia", 2, 1)];
    for (kind, n, bound) in cases {
        let args = || ComplexArgs {
            kind: kind.into(),
            m: 0,
            n,
            bound,
            restrict_w: false,
            summand: None,
            homology: true,
            budget: 100_000,
        };
        // cold, no cache at all
        let plain = execute(&Command::Complex(args()), false).unwrap();
        // cold run that fills the cache
        let cold = execute(&Command::Complex(args()), true).unwrap();
        // warm run served from the cache
        let warm = execute(&Command::Complex(args()), true).unwrap();
        assert_eq!(warm.results["cache_hit"], true, "{kind} n={n} B={bound}");
        // identical payloads modulo the cache-hit marker and timing
        let strip = |r: &stb_cli::report::Report| {
            let mut v: serde_json::Value =
                serde_json::from_str(&r.canonical_without_timing()).unwrap();
            v["results"]["cache_hit"] = serde_json::json!(null);
            serde_json::to_string(&v).unwrap()
        };
        assert_eq!(strip(&plain), strip(&cold));
        assert_eq!(strip(&cold), strip(&warm));
        // byte-identical reports across repeated identical runs
        let again = execute(&Command::Complex(args()), true).unwrap();
        assert_eq!(
            warm.canonical_without_timing(),
            again.canonical_without_timing()
        );
    }
    std::env::remove_var("STB_CACHE_DIR");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn building_example_report_values() {
    use stb_cli::BuildingArgs;
    let report = execute(
        &Command::Building(BuildingArgs {
            n: 2,
            q: 2,
            variant: "full".into(),
            m: 0,
            dim: None,
            homology: true,
            cm_check: true,
            budget: 20_000,
        }),
        false,
    )
    .unwrap();
    assert!(report.passed);
    assert_eq!(report.results["homology"]["betti"]["1"], 16);
    assert_eq!(report.results["cm"]["passed"], true);
    assert_eq!(report.results["elements"], 30);
}

#[test]
fn json_report_is_written() {
    let path = std::env::temp_dir().join(format!("stb-report-{}.json", std::process::id()));
    let code = run(argv(&[
        "reduce",
        "--from",
        "inf",
        "--to",
        "3/7",
        "--json",
        path.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["schema"], "stb.report.v1");
    assert_eq!(value["certification_level"], "exact");
    assert_eq!(value["results"]["count"], 3);
    assert!(value["timing_ms"].is_number());
    let _ = std::fs::remove_file(&path);
}

#[test]
fn rationals_serialize_as_strings() {
    let report = execute(
        &Command::Reduce {
            from: "inf".into(),
            to: "3/7".into(),
        },
        false,
    )
    .unwrap();
    assert_eq!(report.params["to"], "3/7");
    assert_eq!(report.results["symbols"][0][0], "inf");
}
