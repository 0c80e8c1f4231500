use blockshrink::exec::Execution;
use blockshrink::model::HolderClass;
use blockshrink::risk::{DnKind, DnSequence, Regime, SuperefficiencyStudy};
use blockshrink::wavelet::build_basis;

fn pointwise_study(reps: usize) -> SuperefficiencyStudy {
    SuperefficiencyStudy {
        regime: Regime::CaseI,
        class: HolderClass::new(1.0, 2.0).unwrap(),
        m_prime: 1.0,
        x0: 0.5,
        d_n: DnSequence {
            kind: DnKind::Constant,
            scale: 1.0,
        },
        b_exponent: 0.5,
        n_grid: vec![1 << 10, 1 << 12, 1 << 14, 1 << 16],
        reps,
        seed: 41,
        j_max: 16,
    }
}

#[test]
fn pointwise_regime_trades_rate_at_f0_for_the_alternative() {
    let spec = build_basis("coif1", 2).unwrap();
    let report = pointwise_study(20_000).run(&spec, Execution::Parallel).unwrap();
    let max_fit = report.max_fit.expect("positive risks");
    assert!((max_fit.slope + 2.0 / 3.0).abs() < 0.15, "max-risk slope {}", max_fit.slope);
    for row in &report.rows {
        assert!(row.at_f0.mean < 0.05 * row.at_alternative.mean, "{row:?}");
    }
    assert_eq!(report.estimator, "local_constant");
}

#[test]
fn regime_mismatch_is_a_precondition_error() {
    let mut study = pointwise_study(10);
    study.d_n = DnSequence {
        kind: DnKind::Log,
        scale: 2.0,
    };
    let issues = study.check();
    assert!(issues.iter().any(|i| i.contains("regime")), "{issues:?}");
    let spec = build_basis("coif1", 2).unwrap();
    assert!(study.run(&spec, Execution::Sequential).is_err());
}

#[test]
fn sequential_and_parallel_studies_agree() {
    let spec = build_basis("coif1", 2).unwrap();
    let mut study = pointwise_study(64);
    study.n_grid = vec![1 << 10, 1 << 11, 1 << 12];
    let a = study.run(&spec, Execution::Sequential).unwrap();
    let b = study.run(&spec, Execution::Parallel).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
