use std::f64::consts::PI;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{Case, Direction, ModelSpec, NoiseFamily, NoiseSpec};

/// Smallest angle (radians, modulo pi) allowed between the loading
/// directions of two sources in an oracle model.
pub const ORACLE_MIN_ANGLE: f64 = 0.1;

const MAX_ORACLE_ATTEMPTS: usize = 100_000;

/// Uniform on `[-0.8, -0.2] U [0.2, 0.8]`.
fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let magnitude = rng.random_range(0.2..=0.8);
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Direction {
    if rng.random_bool(0.5) {
        Direction::XToY
    } else {
        Direction::YToX
    }
}

fn draw_structure<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    direction: Direction,
) -> (f64, Vec<f64>, Vec<f64>) {
    let gamma = if direction == Direction::None {
        0.0
    } else {
        coefficient(rng)
    };
    let lambda_x = (0..m).map(|_| coefficient(rng)).collect();
    let lambda_y = (0..m).map(|_| coefficient(rng)).collect();
    (gamma, lambda_x, lambda_y)
}

/// A random benchmark model: a direct edge in a random direction, `m` latents,
/// coefficients uniform on `[-0.8, -0.2] U [0.2, 0.8]`, and log-abs noise
/// with each source's family picked from `families` and scale from
/// `[0.5, 1.5]`.
pub fn sample_model(
    case: Case,
    m: usize,
    families: &[NoiseFamily],
    seed: u64,
) -> Result<ModelSpec> {
    if !case.accepts(m) {
        return Err(Error::InvalidModel(format!(
            "case {case} does not allow m = {m}"
        )));
    }
    if families.is_empty() {
        return Err(Error::InvalidModel("no noise families given".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let direction = random_direction(&mut rng);
    let noise = |rng: &mut ChaCha8Rng| {
        let family = *families.choose(rng).expect("non-empty");
        NoiseSpec::log_abs(family, rng.random_range(0.5..=1.5))
    };
    loop {
        let (gamma, lambda_x, lambda_y) = draw_structure(&mut rng, m, direction);
        let latent_noise = (0..m).map(|_| noise(&mut rng)).collect();
        let noise_x = noise(&mut rng);
        let noise_y = noise(&mut rng);
        let model = ModelSpec {
            direction,
            gamma,
            lambda_x,
            lambda_y,
            latent_noise,
            noise_x,
            noise_y,
            seed: Some(seed),
        };
        if model.is_irreducible() {
            return Ok(model);
        }
    }
}

fn min_angle_gap(loadings: &[(f64, f64)]) -> f64 {
    let mut angles: Vec<f64> = loadings
        .iter()
        .map(|&(u, v)| v.atan2(u).rem_euclid(PI))
        .collect();
    angles.sort_by(f64::total_cmp);
    let wrap = angles
        .first()
        .map_or(PI, |first| first + PI - angles[angles.len() - 1]);
    angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min)
}

/// A random model whose sources carry exact cumulants `k_1 ..= k_max_order`,
/// for population-level checks.
///
/// Coefficients follow [`sample_model`]. Source loading directions are kept
/// at least [`ORACLE_MIN_ANGLE`] apart, and each source's cumulants are
/// `k_r = c_r / rho^r` with `rho` the length of its loading vector and `c_r`
/// uniform on `[0.5, 2]` with random sign (`k_1 = 0`, `k_2 > 0`), so that
/// every source adds a comparable amount to the cumulant matrices.
pub fn sample_oracle_model(
    m: usize,
    direction: Direction,
    max_order: usize,
    seed: u64,
) -> Result<ModelSpec> {
    if max_order < 3 {
        return Err(Error::InvalidOrder(max_order));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let placeholder = NoiseSpec::Constant { value: 0.0 };
    for _ in 0..MAX_ORACLE_ATTEMPTS {
        let (gamma, lambda_x, lambda_y) = draw_structure(&mut rng, m, direction);
        let mut model = ModelSpec {
            direction,
            gamma,
            lambda_x,
            lambda_y,
            latent_noise: vec![placeholder.clone(); m],
            noise_x: placeholder.clone(),
            noise_y: placeholder.clone(),
            seed: Some(seed),
        };
        let loadings: Vec<(f64, f64)> = model
            .sources()
            .iter()
            .map(|s| (s.x_loading, s.y_loading))
            .collect();
        let live: Vec<(f64, f64)> = loadings
            .iter()
            .copied()
            .filter(|&(u, v)| u != 0.0 || v != 0.0)
            .collect();
        if !model.is_irreducible() || min_angle_gap(&live) < ORACLE_MIN_ANGLE {
            continue;
        }
        let mut cumulants = loadings.iter().map(|&(u, v)| {
            let rho = u.hypot(v);
            let values = (1..=max_order)
                .map(|r| {
                    let c = rng.random_range(0.5..=2.0);
                    let signed = if r == 1 {
                        0.0
                    } else if r == 2 || rng.random_bool(0.5) {
                        c
                    } else {
                        -c
                    };
                    signed / rho.powi(r as i32)
                })
                .collect();
            NoiseSpec::Cumulants { values }
        });
        for noise in model.latent_noise.iter_mut() {
            *noise = cumulants.next().expect("one per source");
        }
        model.noise_x = cumulants.next().expect("one per source");
        model.noise_y = cumulants.next().expect("one per source");
        return Ok(model);
    }
    Err(Error::InvalidModel(format!(
        "no oracle model with {m} latents met the angle constraint"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_structures() {
        let fams = NoiseFamily::ALL;
        assert_eq!(sample_model(Case::One, 0, &fams, 1).unwrap().m(), 0);
        assert_eq!(sample_model(Case::Two, 1, &fams, 1).unwrap().m(), 1);
        assert_eq!(sample_model(Case::Three, 2, &fams, 1).unwrap().m(), 2);
        assert!(sample_model(Case::Three, 1, &fams, 1).is_err());
        assert!(sample_model(Case::One, 1, &fams, 1).is_err());
        assert!(sample_model(Case::Two, 1, &[], 1).is_err());
    }

    #[test]
    fn draws_respect_ranges_and_seed() {
        let mut directions = [0usize; 2];
        for seed in 0..200 {
            let model = sample_model(Case::Three, 3, &[NoiseFamily::Logistic], seed).unwrap();
            assert_eq!(
                model,
                sample_model(Case::Three, 3, &[NoiseFamily::Logistic], seed).unwrap()
            );
            for c in std::iter::once(model.gamma)
                .chain(model.lambda_x.clone())
                .chain(model.lambda_y.clone())
            {
                assert!((0.2..=0.8).contains(&c.abs()), "{c}");
            }
            for noise in model
                .latent_noise
                .iter()
                .chain([&model.noise_x, &model.noise_y])
            {
                match noise {
                    NoiseSpec::Distribution {
                        family: NoiseFamily::Logistic,
                        scale,
                        log_abs: true,
                    } => assert!((0.5..=1.5).contains(scale)),
                    other => panic!("{other:?}"),
                }
            }
            directions[(model.direction == Direction::YToX) as usize] += 1;
        }
        assert!(directions[0] > 60 && directions[1] > 60, "{directions:?}");
    }

    #[test]
    fn oracle_models_are_valid_and_spread() {
        for m in 0..=4 {
            for seed in 0..20 {
                let model = sample_oracle_model(m, Direction::XToY, 2 * m + 5, seed).unwrap();
                model.validate().unwrap();
                assert!(model.is_irreducible());
                let loadings: Vec<_> = model
                    .sources()
                    .iter()
                    .map(|s| (s.x_loading, s.y_loading))
                    .collect();
                assert!(min_angle_gap(&loadings) >= ORACLE_MIN_ANGLE);
                for (s, (u, v)) in model.sources().iter().zip(&loadings) {
                    let k = s.noise.exact_cumulants(2 * m + 5).unwrap();
                    assert_eq!(k[0], 0.0);
                    let strength = k[2].abs() * u.hypot(*v).powi(3);
                    assert!((0.5..=2.0 + 1e-12).contains(&strength));
                }
            }
        }
    }

    #[test]
    fn angle_gap_wraps_around() {
        // directions at 0.05 and pi - 0.05 are 0.1 apart modulo pi
        let a = (1.0, 0.05f64.tan());
        let b = (-1.0, 0.05f64.tan());
        assert!((min_angle_gap(&[a, b]) - 0.1).abs() < 1e-12);
        assert!((min_angle_gap(&[(1.0, 0.0), (0.0, 1.0)]) - PI / 2.0).abs() < 1e-12);
    }
}
