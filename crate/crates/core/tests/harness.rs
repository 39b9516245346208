use bloch_lab::bloch::AnalyticFunction;
use bloch_lab::disc::{AutomorphismFlow, DiscPoint};
use bloch_lab::harness::{emit_flow_trace, generate_test_functions, linspace, render_jsonl, run_suite, SuiteConfig};
use num_complex::Complex64;

fn quick() -> SuiteConfig {
    SuiteConfig::from_json(
        r#"{"space":{"d":2,"p":2},"grid":{"n_radii":40,"n_angles":48,"refinement_rounds":2},
            "basis_degree":3,"random_polynomials":2,"isometry_samples":4}"#,
    )
    .unwrap()
}

#[test]
fn disc_suite_with_defaults() {
    let reports = run_suite(&SuiteConfig::default(), "disc").unwrap();
    assert!(reports.len() >= 5);
    assert!(reports.iter().all(|r| r.pass), "{reports:?}");
    assert!(reports.windows(2).all(|w| w[0].check_name < w[1].check_name));
}

#[test]
fn injected_non_reflection_fails() {
    let mut cfg = SuiteConfig { inject_non_reflection: true, ..Default::default() };
    let reports = run_suite(&cfg, "gbp").unwrap();
    let inv = reports.iter().find(|r| r.check_name == "gbp.involution").unwrap();
    assert!(!inv.pass);
    assert!(inv.max_residual > 1e-3);
    cfg.inject_non_reflection = false;
    assert!(run_suite(&cfg, "gbp").unwrap().iter().all(|r| r.pass));
}

#[test]
fn all_is_deterministic() {
    let cfg = quick();
    let a = run_suite(&cfg, "all").unwrap();
    let b = run_suite(&cfg, "all").unwrap();
    assert_eq!(render_jsonl(&cfg, "all", &a).unwrap(), render_jsonl(&cfg, "all", &b).unwrap());
    assert!(a.iter().all(|r| r.pass), "{:?}", a.iter().filter(|r| !r.pass).collect::<Vec<_>>());
}

#[test]
fn errors_for_bad_input() {
    assert!(run_suite(&SuiteConfig::default(), "everything").is_err());
    assert!(SuiteConfig::from_json(r#"{"tolerances":{"norm":0}}"#).and_then(|c| c.validate()).is_err());
    assert!(SuiteConfig::from_json("{").is_err());
}

#[test]
fn corpus_contract() {
    let mut cfg = SuiteConfig::from_json(r#"{"space":{"d":2,"p":2},"basis_degree":3}"#).unwrap();
    let fns = generate_test_functions(&cfg).unwrap();
    for k in 1..=3 {
        for j in 0..2 {
            let mut v = nalgebra::DVector::zeros(2);
            v[j] = Complex64::new(1.0, 0.0);
            assert!(fns.contains(&AnalyticFunction::monomial(k, v)), "z^{k} e_{j}");
        }
    }
    assert!(fns.iter().all(|f| f.eval_raw(Complex64::new(0.0, 0.0)).norm() == 0.0));
    assert_eq!(fns, generate_test_functions(&cfg).unwrap());
    cfg.seed += 1;
    assert_ne!(fns, generate_test_functions(&cfg).unwrap());
}

#[test]
fn elliptic_trace_rows_stay_on_circles() {
    let flow = AutomorphismFlow::elliptic(2.0, Complex64::new(0.0, 0.0)).unwrap();
    let zs = [DiscPoint::from_parts(0.3, 0.4).unwrap()];
    let mut buf = Vec::new();
    emit_flow_trace(&flow, &zs, &linspace(0.0, 3.0, 31), &mut buf).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    let mut n = 0;
    for rec in rd.records() {
        let rec = rec.unwrap();
        let (x, y): (f64, f64) = (rec[3].parse().unwrap(), rec[4].parse().unwrap());
        assert!((x.hypot(y) - 0.5).abs() < 1e-14);
        n += 1;
    }
    assert_eq!(n, 31);
}
