use cumdir::identify::{DecisionRule, RankRule};
use cumdir::matrix::{abs_determinant, rank_report};
use cumdir::model::{sample_oracle_model, with_mc_cumulants};
use cumdir::theorems::factorized_matrix;
use cumdir::{
    estimate_cumulants, generate_data, identify_direction, identify_from_cumulants,
    population_cumulants, sample_model, BivariateSample, Case, CumulantMatrix, CumulantTable,
    Direction, IdentifyConfig, ModelSpec, NoiseFamily, NoiseSpec, Orientation, Verdict,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn cums(values: &[f64]) -> NoiseSpec {
    NoiseSpec::Cumulants {
        values: values.to_vec(),
    }
}

fn random_table(order: usize, seed: u64) -> CumulantTable {
    let mut state = seed;
    CumulantTable::from_fn(order, |_, _| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    })
}

#[test]
fn orientation_duality_is_exact() {
    for seed in 0..20 {
        let table = random_table(11, seed);
        for k in 2..=6 {
            let yx = CumulantMatrix::build(&table, k, Orientation::YX).unwrap();
            let xy_of_swapped =
                CumulantMatrix::build(&table.swapped(), k, Orientation::XY).unwrap();
            assert_eq!(yx.entries(), xy_of_swapped.entries());
        }
    }
}

#[test]
fn hankel_and_symmetry_structure() {
    let table = random_table(11, 99);
    for k in 2..=6 {
        for orientation in [Orientation::XY, Orientation::YX] {
            let m = CumulantMatrix::build(&table, k, orientation).unwrap();
            for i in 1..=k {
                for j in 1..=k {
                    assert_eq!(m.get(i, j), m.get(j, i));
                    if i < k && j > 1 {
                        assert_eq!(m.get(i + 1, j - 1), m.get(i, j));
                    }
                }
            }
            let det = m.abs_determinant();
            assert!(
                (abs_determinant(&m.entries().transpose()) - det).abs() <= 1e-12 * det.max(1.0)
            );
        }
    }
}

#[test]
fn rank_is_monotone_in_tolerance() {
    let table = random_table(7, 5);
    let m = CumulantMatrix::build(&table, 4, Orientation::XY).unwrap();
    let mut last = usize::MAX;
    for tol in [1e-12, 1e-8, 1e-4, 1e-2, 0.1, 0.5, 0.9] {
        let r = m.rank(tol).rank;
        assert!(r <= last);
        last = r;
    }
}

#[test]
fn one_latent_three_factor_product() {
    let (lx, ly, g) = (0.7, -0.4, 0.5);
    let k5 = [1.3, -0.9, 1.7];
    let model = ModelSpec {
        direction: Direction::XToY,
        gamma: g,
        lambda_x: vec![lx],
        lambda_y: vec![ly],
        latent_noise: vec![cums(&[0.0, 1.0, 0.3, 0.2, k5[0]])],
        noise_x: cums(&[0.0, 1.0, 0.3, 0.2, k5[1]]),
        noise_y: cums(&[0.0, 1.0, 0.3, 0.2, k5[2]]),
        seed: None,
    };
    let table = population_cumulants(&model, 5).unwrap();
    let (alpha, beta) = (lx, g * lx + ly);

    // path and source matrices written out for latent, E_x, E_y
    let path = DMatrix::from_row_slice(
        3,
        3,
        &[
            alpha * alpha,
            1.0,
            0.0,
            alpha * beta,
            g,
            0.0,
            beta * beta,
            g * g,
            1.0,
        ],
    );
    let source = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        alpha * k5[0],
        k5[1],
        0.0 * k5[2],
    ]));
    let product = &path * source * path.transpose();
    let cm = CumulantMatrix::build(&table, 3, Orientation::XY).unwrap();
    let scale = cm.entries().amax();
    assert!((cm.entries() - &product).amax() <= 1e-10 * scale);

    // the mirrored orientation reads loadings as (beta, alpha), so its path
    // matrix has beta in place of alpha and 1 in place of gamma for E_x
    let path_yx = DMatrix::from_row_slice(
        3,
        3,
        &[
            beta * beta,
            g * g,
            1.0,
            alpha * beta,
            g,
            0.0,
            alpha * alpha,
            1.0,
            0.0,
        ],
    );
    let source_yx = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        beta * k5[0],
        g * k5[1],
        k5[2],
    ]));
    let product_yx = &path_yx * source_yx * path_yx.transpose();
    let cm_yx = CumulantMatrix::build(&table, 3, Orientation::YX).unwrap();
    assert!((cm_yx.entries() - &product_yx).amax() <= 1e-10 * cm_yx.entries().amax());

    for orientation in [Orientation::XY, Orientation::YX] {
        let (p, w) = factorized_matrix(&model, 3, orientation).unwrap();
        let built = CumulantMatrix::build(&table, 3, orientation).unwrap();
        assert!(
            (built.entries() - &p * w * p.transpose()).amax() <= 1e-10 * built.entries().amax()
        );
    }
    assert_eq!(rank_report(cm.entries(), 1e-8).rank, 2);
    assert_eq!(rank_report(cm_yx.entries(), 1e-8).rank, 3);
}

#[test]
fn two_latents_population_example() {
    let model = sample_oracle_model(2, Direction::XToY, 7, 4).unwrap();
    let table = population_cumulants(&model, 7).unwrap();
    let r = identify_from_cumulants(&table, &IdentifyConfig::population()).unwrap();
    assert_eq!((r.verdict, r.m, r.k_used), (Verdict::XCausesY, Some(2), 4));
}

#[test]
fn next_order_keeps_the_rank_gap() {
    for m in 0..=3 {
        for seed in 0..10 {
            let model = sample_oracle_model(m, Direction::YToX, 2 * m + 5, seed).unwrap();
            let table = population_cumulants(&model, 2 * m + 5).unwrap();
            let r = identify_from_cumulants(
                &table,
                &IdentifyConfig::population().with_assumed_m(Some(m + 1)),
            )
            .unwrap();
            assert_eq!(r.k_used, m + 3);
            assert_eq!(r.verdict, Verdict::YCausesX);
            let step = r.final_step();
            assert_eq!((step.xy.rank, step.yx.rank), (m + 2, m + 1));
            assert_eq!(r.decided_by, DecisionRule::RankPattern);
        }
    }
}

#[test]
fn population_without_shared_sources_is_zero_off_axis() {
    let model = ModelSpec {
        direction: Direction::None,
        gamma: 0.0,
        lambda_x: vec![],
        lambda_y: vec![],
        latent_noise: vec![],
        noise_x: cums(&[0.0, 1.0, 0.8, 0.3, -0.2]),
        noise_y: cums(&[0.0, 1.0, -0.5, 0.6, 0.4]),
        seed: None,
    };
    let table = population_cumulants(&model, 5).unwrap();
    for d in 2..=5 {
        for (a, b, v) in table.degree(d) {
            if a >= 1 && b >= 1 {
                assert_eq!(v, 0.0);
            }
        }
    }
    let r = identify_from_cumulants(&table, &IdentifyConfig::population()).unwrap();
    assert_eq!(
        (r.verdict, r.m),
        (Verdict::ConditionallyIndependent, Some(0))
    );
}

fn independent_noise_model() -> ModelSpec {
    ModelSpec {
        direction: Direction::None,
        gamma: 0.0,
        lambda_x: vec![],
        lambda_y: vec![],
        latent_noise: vec![],
        noise_x: NoiseSpec::log_abs(NoiseFamily::Laplace, 1.0),
        noise_y: NoiseSpec::log_abs(NoiseFamily::Exponential, 1.0),
        seed: None,
    }
}

#[test]
fn independent_noises_are_conditionally_independent() {
    let data = generate_data(&independent_noise_model(), 100_000, 8).unwrap();
    let r = identify_direction(&data, &IdentifyConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::ConditionallyIndependent);
    assert_eq!((r.m, r.k_used), (Some(0), 2));
    let step = r.final_step();
    assert_eq!((step.xy.rank, step.yx.rank), (1, 1));
    // without the rank test the determinants alone do not tie at this size
    let off = IdentifyConfig {
        rank_rule: RankRule::Off,
        ..IdentifyConfig::default()
    };
    assert!(identify_direction(&data, &off)
        .unwrap()
        .verdict
        .is_directional());
}

#[test]
fn independent_sample_correlation_is_null() {
    let data = generate_data(&independent_noise_model(), 100_000, 9).unwrap();
    let std = data.standardized().unwrap();
    let r: f64 = std.x().iter().zip(std.y()).map(|(a, b)| a * b).sum::<f64>() / data.len() as f64;
    assert!(
        r.abs() < 5.0 / (data.len() as f64).sqrt(),
        "correlation {r}"
    );
}

#[test]
fn unit_edge_with_no_effect_noise_copies_x() {
    let model = ModelSpec {
        direction: Direction::XToY,
        gamma: 1.0,
        lambda_x: vec![],
        lambda_y: vec![],
        latent_noise: vec![],
        noise_x: NoiseSpec::log_abs(NoiseFamily::Uniform, 1.0),
        noise_y: NoiseSpec::Constant { value: 0.0 },
        seed: None,
    };
    let data = generate_data(&model, 1_000, 2).unwrap();
    assert_eq!(data.x(), data.y());
}

#[test]
fn case_two_cross_cumulant_matches_monte_carlo() {
    let model = sample_model(Case::Two, 1, &NoiseFamily::ALL, 12).unwrap();
    let population =
        population_cumulants(&with_mc_cumulants(&model, 3, 10_000_000, 13).unwrap(), 3).unwrap();
    let estimate = estimate_cumulants(&generate_data(&model, 1_000_000, 14).unwrap(), 3).unwrap();
    let (p, e) = (population.get(2, 1), estimate.get(2, 1));
    assert!(((e - p) / p).abs() < 0.02, "estimate {e}, population {p}");
}

#[test]
fn repeated_runs_are_identical() {
    let model = sample_model(Case::Three, 2, &NoiseFamily::ALL, 3).unwrap();
    let data = generate_data(&model, 20_000, 4).unwrap();
    let a = identify_direction(&data, &IdentifyConfig::default()).unwrap();
    let b = identify_direction(&data, &IdentifyConfig::default()).unwrap();
    assert_eq!(a, b);
}

fn model_strategy() -> impl Strategy<Value = (ModelSpec, u64)> {
    (0..3usize, any::<u64>(), any::<u64>(), 0..5usize).prop_map(
        |(m, model_seed, data_seed, fam)| {
            let case = match m {
                0 => Case::One,
                1 => Case::Two,
                _ => Case::Three,
            };
            let m = if case == Case::Three { 2 } else { m };
            (
                sample_model(case, m, &[NoiseFamily::ALL[fam]], model_seed).unwrap(),
                data_seed,
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swapping_inputs_swaps_the_verdict((model, seed) in model_strategy(), assumed in prop::option::of(0..3usize)) {
        let data = generate_data(&model, 3_000, seed).unwrap();
        let config = IdentifyConfig::default().with_assumed_m(assumed);
        let forward = identify_direction(&data, &config).unwrap();
        let backward = identify_direction(&data.swapped(), &config).unwrap();
        prop_assert_eq!(backward.verdict, forward.verdict.swapped());
        prop_assert_eq!(backward.m, forward.m);
        prop_assert_eq!(backward.det_xy, forward.det_yx);
        prop_assert_eq!(backward.det_yx, forward.det_xy);
    }

    #[test]
    fn directional_verdicts_respect_epsilon((model, seed) in model_strategy()) {
        let data = generate_data(&model, 3_000, seed).unwrap();
        let config = IdentifyConfig::default();
        let r = identify_direction(&data, &config).unwrap();
        if r.verdict.is_directional() && r.decided_by == DecisionRule::Determinant {
            prop_assert!((r.det_xy - r.det_yx).abs() >= config.epsilon);
            let cause_is_x = r.verdict == Verdict::XCausesY;
            prop_assert_eq!(cause_is_x, r.det_xy < r.det_yx);
        }
        if r.m.is_some() && !r.forced {
            prop_assert_eq!(r.m, Some(r.k_used - 2));
        }
    }
}

#[test]
fn sample_errors_propagate() {
    let constant =
        BivariateSample::new(vec![1.0; 600], (0..600).map(|i| i as f64).collect()).unwrap();
    assert!(identify_direction(&constant, &IdentifyConfig::default()).is_err());
}
