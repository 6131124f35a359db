//! Room-impulse-response preparation, synthesis, and convolution.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::audio::AudioClip;
use crate::error::{Error, Result};
use crate::rng::{self, tag};

/// A cleaned impulse response: starts at the main impulse peak and is
/// power-normalized so the taps have unit energy.
#[derive(Debug, Clone, PartialEq)]
pub struct RirFilter {
    pub taps: Vec<f64>,
    /// Rate the response was prepared at; convolution partners must match.
    pub sample_rate_hz: u32,
    pub normalized_power: bool,
}

/// Extract the usable filter from a raw impulse-response recording.
///
/// The taps start at the absolute-maximum sample (the main impulse) and
/// run to the end of the recording, optionally truncated to `max_taps`.
/// Power is normalized so the squared taps sum to 1. `flip_time_axis`
/// reverses the taps; it exists for correlation-style engines and
/// defaults to off in callers since convolution here is true convolution.
pub fn prepare_rir(
    raw: &AudioClip,
    flip_time_axis: bool,
    max_taps: Option<usize>,
) -> Result<RirFilter> {
    if raw.is_empty() {
        return Err(Error::EmptySignal);
    }
    let (peak_idx, peak) = raw
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| (i, s.abs()))
        .fold((0, 0.0f64), |best, cur| if cur.1 > best.1 { cur } else { best });
    if peak == 0.0 {
        return Err(Error::DegenerateRir);
    }
    let mut taps: Vec<f64> = raw.samples[peak_idx..].to_vec();
    if let Some(m) = max_taps {
        taps.truncate(m.max(1));
    }
    if flip_time_axis {
        taps.reverse();
    }
    let power: f64 = taps.iter().map(|t| t * t).sum();
    let scale = power.sqrt().recip();
    for t in &mut taps {
        *t *= scale;
    }
    Ok(RirFilter { taps, sample_rate_hz: raw.sample_rate_hz, normalized_power: true })
}

/// Linear convolution truncated to the input length (direct form).
pub fn convolve_truncated(x: &[f64], taps: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for (i, out) in y.iter_mut().enumerate() {
        let j_max = i.min(taps.len() - 1);
        let mut acc = 0.0;
        for j in 0..=j_max {
            acc += taps[j] * x[i - j];
        }
        *out = acc;
    }
    y
}

/// Convolve a clip with a prepared RIR.
///
/// The result is truncated to the input length and peak-normalized back
/// into `[-1, 1]` when the convolution overshoots.
pub fn convolve_rir(clip: &AudioClip, rir: &RirFilter) -> Result<AudioClip> {
    if rir.taps.is_empty() {
        return Err(Error::DegenerateRir);
    }
    if clip.sample_rate_hz != rir.sample_rate_hz {
        return Err(Error::RateMismatch {
            clip_hz: clip.sample_rate_hz,
            rir_hz: rir.sample_rate_hz,
        });
    }
    let mut samples = convolve_truncated(&clip.samples, &rir.taps);
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 1.0 {
        for s in &mut samples {
            *s /= peak;
        }
    }
    Ok(AudioClip { samples, sample_rate_hz: clip.sample_rate_hz })
}

/// Synthesize an exponentially decaying reverberation tail.
///
/// A unit impulse at t = 0 followed by unit-variance noise under the
/// envelope `exp(-6.9 t / rt60)`, which decays by 60 dB over `rt60_s`.
/// Deterministic for a given seed.
pub fn synthesize_rir(duration_s: f64, rt60_s: f64, sample_rate_hz: u32, seed: u64) -> AudioClip {
    assert!(duration_s > 0.0, "duration must be positive");
    assert!(rt60_s > 0.0, "rt60 must be positive");
    let rate = sample_rate_hz as f64;
    let n = ((duration_s * rate).round() as usize).max(1);
    let mut rng = rng::stream(seed, tag::RIR, 0);
    let mut samples = Vec::with_capacity(n);
    samples.push(1.0);
    for i in 1..n {
        let t = i as f64 / rate;
        let noise: f64 = rng.sample(StandardNormal);
        samples.push((-6.9 * t / rt60_s).exp() * noise);
    }
    AudioClip { samples, sample_rate_hz }
}
