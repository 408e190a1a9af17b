use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cumulant::BivariateSample;
use crate::error::{Error, Result};

use super::{Direction, ModelSpec, NoiseSpec};

fn source_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n` rows from the structural equations. Each source has its own
/// random stream (`E_x` 0, `E_y` 1, latent `i` at `2 + i`), so the draws of
/// one source do not depend on how many others there are.
pub fn generate_data(model: &ModelSpec, n: usize, seed: u64) -> Result<BivariateSample> {
    model.validate()?;
    if n < 2 {
        return Err(Error::TooFewSamples { n, min: 2 });
    }
    let named = [
        ("E_x".to_string(), &model.noise_x),
        ("E_y".to_string(), &model.noise_y),
    ];
    let latents = model
        .latent_noise
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("L{}", i + 1), s));
    if let Some((name, _)) = named
        .iter()
        .cloned()
        .chain(latents)
        .find(|(_, s)| !s.is_sampleable())
    {
        return Err(Error::CumulantOnlyNoise(name));
    }

    let draw = |spec: &NoiseSpec, stream: u64| spec.sample(n, &mut source_stream(seed, stream));
    let ex = draw(&model.noise_x, 0)?;
    let ey = draw(&model.noise_y, 1)?;
    let mut confound_x = vec![0.0; n];
    let mut confound_y = vec![0.0; n];
    for (i, spec) in model.latent_noise.iter().enumerate() {
        let l = draw(spec, 2 + i as u64)?;
        let (lx, ly) = (model.lambda_x[i], model.lambda_y[i]);
        for t in 0..n {
            confound_x[t] += lx * l[t];
            confound_y[t] += ly * l[t];
        }
    }

    let g = model.gamma;
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for t in 0..n {
        let (xt, yt) = match model.direction {
            Direction::XToY => {
                let xt = confound_x[t] + ex[t];
                (xt, g * xt + confound_y[t] + ey[t])
            }
            Direction::YToX => {
                let yt = confound_y[t] + ey[t];
                (g * yt + confound_x[t] + ex[t], yt)
            }
            Direction::None => (confound_x[t] + ex[t], confound_y[t] + ey[t]),
        };
        x.push(xt);
        y.push(yt);
    }
    BivariateSample::new(x, y)
}
