use keycomp::io::{emit_comparison, parse_comparison, ComparisonFormat};
use keycomp::{
    bilateral_doe, compute_kcrv, consistency_check, expected_doe, total_variance, unilateral_doe,
    Comparison, EffectModel, LabResult, UncertaintyBudget,
};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= abs + rel * a.abs().max(b.abs())
}

fn lab_strategy() -> impl Strategy<Value = (f64, f64)> {
    (-100.0..100.0f64, 0.01..10.0f64)
}

fn comparison_strategy(max_labs: usize) -> impl Strategy<Value = Comparison> {
    prop::collection::vec(lab_strategy(), 1..=max_labs).prop_map(|labs| {
        Comparison::new(
            labs.into_iter()
                .enumerate()
                .map(|(i, (x, u))| LabResult::new(format!("L{i}"), x, u))
                .collect(),
            EffectModel::NoneEffect,
        )
    })
}

fn map_labs(c: &Comparison, f: impl Fn(&LabResult) -> (f64, f64)) -> Comparison {
    let mut out = c.clone();
    for (lab, orig) in out.results.iter_mut().zip(&c.results) {
        let (x, u) = f(orig);
        lab.value = x;
        lab.uncertainty = u;
    }
    out
}

fn objective(c: &Comparison, m: f64) -> f64 {
    c.results
        .iter()
        .map(|r| (r.value - m).powi(2) / (r.uncertainty * r.uncertainty))
        .sum()
}

proptest! {
    #[test]
    fn systematic_variance_ignores_lab_effect(
        s_y in 0.0..5.0f64, u_e in 0.0..5.0f64, b1 in -1e3..1e3f64, b2 in -1e3..1e3f64,
    ) {
        let base = UncertaintyBudget::new(s_y, u_e);
        let v1 = total_variance(&base.with_lab_effect(b1), EffectModel::SystematicEffect).unwrap();
        let v2 = total_variance(&base.with_lab_effect(b2), EffectModel::SystematicEffect).unwrap();
        prop_assert_eq!(v1.to_bits(), v2.to_bits());
    }

    #[test]
    fn random_variance_dominates_none(s_y in 0.0..5.0f64, u_e in 0.0..5.0f64, s_b in 0.0..5.0f64) {
        let base = UncertaintyBudget::new(s_y, u_e);
        let none = total_variance(&base, EffectModel::NoneEffect).unwrap();
        let random = total_variance(&base.with_lab_effect_sd(s_b), EffectModel::RandomEffect).unwrap();
        prop_assert!(random >= none);
        let zero = total_variance(&base.with_lab_effect_sd(0.0), EffectModel::RandomEffect).unwrap();
        prop_assert_eq!(zero, none);
        if s_b > 0.0 && s_b * s_b > f64::EPSILON * none {
            prop_assert!(random > none);
        }
    }

    #[test]
    fn validate_is_idempotent(c in comparison_strategy(8), dup in any::<bool>()) {
        let mut c = c;
        if dup && c.len() > 1 {
            c.results[1].lab_id = c.results[0].lab_id.clone();
        }
        match c.clone().validate() {
            Ok(v) => prop_assert_eq!(v.clone().validate(), Ok(v)),
            Err(e) => prop_assert_eq!(c.clone().validate().unwrap_err(), e),
        }
    }

    #[test]
    fn kcrv_bounds_and_weights(c in comparison_strategy(20)) {
        let k = compute_kcrv(&c).unwrap();
        let lo = c.results.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
        let hi = c.results.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
        let min_u = c.results.iter().map(|r| r.uncertainty).fold(f64::INFINITY, f64::min);
        prop_assert!(lo <= k.value && k.value <= hi);
        prop_assert!(k.uncertainty <= min_u);
        prop_assert!((k.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn kcrv_shift_equivariance(c in comparison_strategy(12), shift in -1e3..1e3f64) {
        let k = compute_kcrv(&c).unwrap();
        let shifted = compute_kcrv(&map_labs(&c, |r| (r.value + shift, r.uncertainty))).unwrap();
        let scale = 1.0 + k.value.abs() + shift.abs() + 100.0;
        prop_assert!(close(shifted.value, k.value + shift, 0.0, 1e-13 * scale));
        prop_assert_eq!(shifted.uncertainty, k.uncertainty);
        prop_assert_eq!(shifted.weights, k.weights);
    }

    #[test]
    fn kcrv_scale_equivariance(c in comparison_strategy(12), lambda in 1e-3..1e3f64) {
        let k = compute_kcrv(&c).unwrap();
        let scaled = compute_kcrv(&map_labs(&c, |r| (r.value * lambda, r.uncertainty * lambda))).unwrap();
        prop_assert!(close(scaled.value, k.value * lambda, 1e-12, 1e-12 * lambda * 100.0));
        prop_assert!(close(scaled.uncertainty, k.uncertainty * lambda, 1e-12, 0.0));
        for (a, b) in scaled.weights.iter().zip(&k.weights) {
            prop_assert!(close(*a, *b, 1e-12, 1e-15));
        }
    }

    #[test]
    fn kcrv_minimizes_weighted_squares(c in comparison_strategy(12), eps in 1e-3..1.0f64) {
        let k = compute_kcrv(&c).unwrap();
        let at = objective(&c, k.value);
        let slack = 1e-9 * (1.0 + at);
        prop_assert!(objective(&c, k.value + eps) + slack >= at);
        prop_assert!(objective(&c, k.value - eps) + slack >= at);
    }

    #[test]
    fn merging_identical_values(c in comparison_strategy(10), x in -50.0..50.0f64, u1 in 0.05..5.0f64, u2 in 0.05..5.0f64) {
        let mut split = c.clone();
        split.results.push(LabResult::new("split-a", x, u1));
        split.results.push(LabResult::new("split-b", x, u2));
        let mut merged = c.clone();
        let v = 1.0 / (1.0 / (u1 * u1) + 1.0 / (u2 * u2));
        merged.results.push(LabResult::new("merged", x, v.sqrt()));
        let a = compute_kcrv(&split).unwrap();
        let b = compute_kcrv(&merged).unwrap();
        prop_assert!(close(a.value, b.value, 1e-12, 1e-13));
        prop_assert!(close(a.uncertainty, b.uncertainty, 1e-12, 0.0));
    }

    #[test]
    fn consistency_invariant_under_shift_and_scale(
        c in comparison_strategy(10).prop_filter("two labs", |c| c.len() >= 2),
        shift in -1e3..1e3f64,
        lambda in 1e-2..1e2f64,
    ) {
        let k = compute_kcrv(&c).unwrap();
        let base = consistency_check(&c, &k, 0.05).unwrap();
        let moved = map_labs(&c, |r| ((r.value + shift) * lambda, r.uncertainty * lambda));
        let km = compute_kcrv(&moved).unwrap();
        let other = consistency_check(&moved, &km, 0.05).unwrap();
        prop_assert!(close(other.chi2_obs, base.chi2_obs, 1e-6, 1e-6));
        prop_assert_eq!(other.dof, base.dof);
        if (base.p_value - 0.05).abs() > 1e-6 {
            prop_assert_eq!(other.pass, base.pass);
        }
    }

    #[test]
    fn bilateral_matches_unilateral_difference(c in comparison_strategy(20)) {
        let k = compute_kcrv(&c).unwrap();
        let uni = unilateral_doe(&c, &k, 2.0).unwrap();
        let bi = bilateral_doe(&c, 2.0).unwrap();
        for i in 0..c.len() {
            for j in 0..c.len() {
                prop_assert!((bi[i][j].deviation - (uni[i].deviation - uni[j].deviation)).abs() <= 1e-12 * (1.0 + bi[i][j].deviation.abs()) * 100.0);
                prop_assert_eq!(bi[i][j].deviation, -bi[j][i].deviation);
                prop_assert_eq!(bi[i][j].uncertainty, bi[j][i].uncertainty);
            }
        }
    }

    #[test]
    fn doe_shift_invariance_and_scale_equivariance(
        c in comparison_strategy(12), shift in -1e2..1e2f64, lambda in 1e-2..1e2f64,
    ) {
        let k = compute_kcrv(&c).unwrap();
        let base = unilateral_doe(&c, &k, 2.0).unwrap();

        let shifted = map_labs(&c, |r| (r.value + shift, r.uncertainty));
        let ks = compute_kcrv(&shifted).unwrap();
        let moved = unilateral_doe(&shifted, &ks, 2.0).unwrap();
        for (a, b) in moved.iter().zip(&base) {
            prop_assert!(close(a.deviation, b.deviation, 0.0, 1e-11 * (1.0 + shift.abs() + 100.0)));
            prop_assert_eq!(a.uncertainty, b.uncertainty);
            if (b.deviation.abs() - b.expanded).abs() > 1e-9 * (1.0 + shift.abs() + 100.0) {
                prop_assert_eq!(a.equivalent, b.equivalent);
            }
        }

        let scaled = map_labs(&c, |r| (r.value * lambda, r.uncertainty * lambda));
        let kl = compute_kcrv(&scaled).unwrap();
        let grown = unilateral_doe(&scaled, &kl, 2.0).unwrap();
        for ((a, b), lab) in grown.iter().zip(&base).zip(&c.results) {
            prop_assert!(close(a.deviation, b.deviation * lambda, 1e-10, 1e-11 * lambda * 100.0));
            // u²(dᵢ) is a difference of variances; compare it on the scale of u²(xᵢ).
            let scale = (lambda * lab.uncertainty).powi(2);
            prop_assert!(close(a.uncertainty.powi(2), (b.uncertainty * lambda).powi(2), 0.0, 1e-12 * scale));
            if (b.deviation.abs() - b.expanded).abs() > 1e-9 * (1.0 + b.expanded + 100.0) {
                prop_assert_eq!(a.equivalent, b.equivalent);
            }
        }
    }

    #[test]
    fn weighted_expected_deviations_vanish(
        labs in prop::collection::vec((0.0..1.0f64, 0.01..1.0f64, -2.0..2.0f64), 1..12),
    ) {
        let model = EffectModel::SystematicEffect;
        let c = Comparison::new(
            labs.iter()
                .enumerate()
                .map(|(i, &(s_y, u_e, b))| {
                    let budget = UncertaintyBudget::new(s_y, u_e).with_lab_effect(b);
                    LabResult::with_budget(format!("L{i}"), 10.0 + b, budget, model).unwrap()
                })
                .collect(),
            model,
        );
        let weights = compute_kcrv(&c).unwrap().weights;
        let e = expected_doe(&c).unwrap();
        let weighted: f64 = weights.iter().zip(&e.deviations).map(|(w, d)| w * d).sum();
        prop_assert!(weighted.abs() <= 1e-12);
        for i in 0..c.len() {
            for j in 0..c.len() {
                prop_assert!((e.pairwise[i][j] - (e.deviations[i] - e.deviations[j])).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn csv_canonical_round_trip(labs in prop::collection::vec((-1e6..1e6f64, 1e-6..1e3f64), 1..10)) {
        let c = Comparison::new(
            labs.iter().enumerate().map(|(i, &(x, u))| LabResult::new(format!("lab {i}"), x, u)).collect(),
            EffectModel::NoneEffect,
        );
        let canonical = emit_comparison(&c, ComparisonFormat::Csv);
        let parsed = parse_comparison(&canonical, ComparisonFormat::Csv, Some(EffectModel::NoneEffect)).unwrap();
        prop_assert_eq!(&parsed, &c);
        prop_assert_eq!(emit_comparison(&parsed, ComparisonFormat::Csv), canonical);
    }

    #[test]
    fn json_canonical_round_trip(labs in prop::collection::vec((-1e6..1e6f64, 0.0..1.0f64, 0.0..1.0f64, -1.0..1.0f64), 1..10)) {
        let model = EffectModel::SystematicEffect;
        let c = Comparison {
            results: labs
                .iter()
                .enumerate()
                .filter(|(_, &(_, s_y, u_e, _))| s_y + u_e > 0.0)
                .map(|(i, &(x, s_y, u_e, b))| {
                    LabResult::with_budget(format!("L{i}"), x, UncertaintyBudget::new(s_y, u_e).with_lab_effect(b), model).unwrap()
                })
                .collect(),
            model,
            true_value: Some(3.25),
        };
        prop_assume!(!c.is_empty());
        let canonical = emit_comparison(&c, ComparisonFormat::Json);
        let parsed = parse_comparison(&canonical, ComparisonFormat::Json, None).unwrap();
        prop_assert_eq!(&parsed, &c);
        prop_assert_eq!(emit_comparison(&parsed, ComparisonFormat::Json), canonical);
    }

    #[test]
    fn parsing_arbitrary_bytes_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
        let _ = parse_comparison(&bytes, ComparisonFormat::Csv, Some(EffectModel::NoneEffect));
        let _ = parse_comparison(&bytes, ComparisonFormat::Json, None);
        let _ = keycomp::io::parse_report(&bytes);
        let _ = keycomp::io::parse_sim_spec(&bytes, Default::default());
    }
}
