//! Raw-signal processing: clips, resampling, filtering, voice-activity
//! detection, and the two augmentation primitives (tanh soft clipping and
//! RIR reverberation).

mod filter;
mod rir;
mod vad;

pub use filter::{
    apply_filter, design_butterworth_bandpass, frequency_response, FilterSpec, SecondOrderSection,
};
pub use rir::{convolve_rir, convolve_truncated, prepare_rir, synthesize_rir, RirFilter};
pub use vad::{detect_voice_activity, VadConfig};

use crate::error::{Error, Result};

/// Mono audio at a fixed sample rate.
///
/// Amplitudes are nominally in `[-1, 1]`; intermediate DSP results may
/// exceed that until a normalizing step (WAV output clamps, RIR
/// convolution peak-normalizes).
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    pub samples: Vec<f64>,
    pub sample_rate_hz: u32,
}

impl AudioClip {
    pub const MIN_RATE_HZ: u32 = 8_000;
    pub const MAX_RATE_HZ: u32 = 48_000;

    /// Canonical processing rate used by the feature pipeline.
    pub const CANONICAL_RATE_HZ: u32 = 16_000;

    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if !(Self::MIN_RATE_HZ..=Self::MAX_RATE_HZ).contains(&sample_rate_hz) {
            return Err(Error::InvalidConfig(format!(
                "sample rate {sample_rate_hz} Hz outside {}..={}",
                Self::MIN_RATE_HZ,
                Self::MAX_RATE_HZ
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig("non-finite sample".into()));
        }
        Ok(Self { samples, sample_rate_hz })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }

    /// Root-mean-square amplitude; 0 for an empty clip.
    pub fn rms(&self) -> f64 {
        rms(&self.samples)
    }
}

pub(crate) fn rms(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    (samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64).sqrt()
}

/// Resample by linear interpolation between neighboring samples.
///
/// Output length is `round(len * target/source)`, so duration is
/// preserved to within one sample period. A constant signal is
/// reproduced exactly.
pub fn resample(clip: &AudioClip, target_rate_hz: u32) -> Result<AudioClip> {
    if clip.is_empty() {
        return Err(Error::EmptySignal);
    }
    if target_rate_hz == clip.sample_rate_hz {
        return Ok(clip.clone());
    }
    let n_in = clip.samples.len();
    let ratio = target_rate_hz as f64 / clip.sample_rate_hz as f64;
    let n_out = ((n_in as f64 * ratio).round() as usize).max(1);
    let step = clip.sample_rate_hz as f64 / target_rate_hz as f64;
    let x = &clip.samples;
    let mut out = Vec::with_capacity(n_out);
    for i in 0..n_out {
        let t = i as f64 * step;
        let lo = t.floor() as usize;
        if lo + 1 < n_in {
            let frac = t - lo as f64;
            out.push(x[lo] * (1.0 - frac) + x[lo + 1] * frac);
        } else {
            out.push(x[n_in - 1]);
        }
    }
    AudioClip::new(out, target_rate_hz)
}

/// Soft clipping: maps each sample `x` to `tanh(gain * x)`.
///
/// Output is bounded in `(-1, 1)` and strictly increasing in `x` for any
/// positive gain.
pub fn tanh_distortion(clip: &AudioClip, gain: f64) -> Result<AudioClip> {
    if !gain.is_finite() || gain <= 0.0 {
        return Err(Error::InvalidGain(gain));
    }
    let samples = clip.samples.iter().map(|x| (gain * x).tanh()).collect();
    Ok(AudioClip { samples, sample_rate_hz: clip.sample_rate_hz })
}
