//! MFCC feature extraction.
//!
//! Each roughly-1 s clip becomes one 40-dimensional vector: Hamming-windowed
//! frames, power spectrum, mel filterbank, log compression, orthonormal
//! DCT-II, then mean pooling over frames. Coefficient 0 (overall
//! log-energy) is included.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::audio::AudioClip;
use crate::dataset::{CorpusItem, LabeledExample};
use crate::error::{Error, Result};

/// A feature vector is a plain row of finite reals.
pub type FeatureVector = Vec<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct MfccConfig {
    pub frame_ms: f64,
    pub hop_ms: f64,
    pub n_mels: usize,
    pub n_coeffs: usize,
    pub fmin_hz: f64,
    pub fmax_hz: f64,
    /// Added to mel energies before the log to guard silent bands.
    pub log_floor: f64,
}

impl Default for MfccConfig {
    fn default() -> Self {
        Self {
            frame_ms: 25.0,
            hop_ms: 10.0,
            n_mels: 40,
            n_coeffs: 40,
            fmin_hz: 20.0,
            fmax_hz: 7_600.0,
            log_floor: 1e-10,
        }
    }
}

impl MfccConfig {
    fn validate(&self, sample_rate_hz: u32) -> Result<()> {
        if self.n_coeffs == 0 || self.n_mels == 0 || self.n_coeffs > self.n_mels {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= n_coeffs ({}) <= n_mels ({})",
                self.n_coeffs, self.n_mels
            )));
        }
        if !(self.fmin_hz >= 0.0 && self.fmin_hz < self.fmax_hz) {
            return Err(Error::InvalidConfig("need 0 <= fmin < fmax".into()));
        }
        if self.fmax_hz > sample_rate_hz as f64 / 2.0 {
            return Err(Error::InvalidConfig(format!(
                "fmax {} Hz above Nyquist {} Hz",
                self.fmax_hz,
                sample_rate_hz as f64 / 2.0
            )));
        }
        if !(self.hop_ms > 0.0 && self.frame_ms >= self.hop_ms) {
            return Err(Error::InvalidConfig("need frame_ms >= hop_ms > 0".into()));
        }
        Ok(())
    }
}

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Cut the clip into Hamming-windowed frames; the last partial frame is
/// dropped.
pub fn frame_and_window(clip: &AudioClip, cfg: &MfccConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate(clip.sample_rate_hz)?;
    let rate = clip.sample_rate_hz as f64;
    let frame_len = ((cfg.frame_ms / 1000.0 * rate).round() as usize).max(1);
    let hop_len = ((cfg.hop_ms / 1000.0 * rate).round() as usize).max(1);
    let n = clip.len();
    if n < frame_len {
        return Err(Error::SignalTooShort { needed: frame_len, got: n });
    }
    let window = hamming(frame_len);
    let n_frames = (n - frame_len) / hop_len + 1;
    Ok((0..n_frames)
        .map(|f| {
            let start = f * hop_len;
            clip.samples[start..start + frame_len]
                .iter()
                .zip(&window)
                .map(|(x, w)| x * w)
                .collect()
        })
        .collect())
}

fn hamming(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    (0..len)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / (len - 1) as f64).cos())
        .collect()
}

/// Power spectrum `|DFT|^2` for bins `0..=N/2`, with N the next power of
/// two at or above the frame length (zero-padded).
pub fn power_spectrum(frame: &[f64]) -> Vec<f64> {
    if frame.is_empty() {
        return Vec::new();
    }
    let n_fft = frame.len().next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_fft);
    let mut buf: Vec<Complex64> = frame
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(n_fft)
        .collect();
    fft.process(&mut buf);
    buf[..=n_fft / 2].iter().map(|c| c.norm_sqr()).collect()
}

/// Triangular mel filterbank as an `n_mels x n_bins` matrix. Centers are
/// equally spaced on the mel scale between `fmin` and `fmax`.
pub fn mel_filterbank(
    cfg: &MfccConfig,
    sample_rate_hz: u32,
    n_bins: usize,
) -> Result<Vec<Vec<f64>>> {
    cfg.validate(sample_rate_hz)?;
    if n_bins < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 spectrum bins, got {n_bins}")));
    }
    let n_fft = 2 * (n_bins - 1);
    let bin_hz = sample_rate_hz as f64 / n_fft as f64;
    let mel_lo = hz_to_mel(cfg.fmin_hz);
    let mel_hi = hz_to_mel(cfg.fmax_hz);
    let points: Vec<f64> = (0..cfg.n_mels + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (cfg.n_mels + 1) as f64))
        .collect();
    let mut bank = Vec::with_capacity(cfg.n_mels);
    for m in 0..cfg.n_mels {
        let (f_lo, f_center, f_hi) = (points[m], points[m + 1], points[m + 2]);
        let row: Vec<f64> = (0..n_bins)
            .map(|k| {
                let f = k as f64 * bin_hz;
                if f <= f_lo || f >= f_hi {
                    0.0
                } else if f <= f_center {
                    (f - f_lo) / (f_center - f_lo)
                } else {
                    (f_hi - f) / (f_hi - f_center)
                }
            })
            .collect();
        bank.push(row);
    }
    Ok(bank)
}

/// Orthonormal DCT-II of `input`, truncated to `n_out` coefficients.
pub fn dct_ii(input: &[f64], n_out: usize) -> Vec<f64> {
    let m = input.len();
    let mf = m as f64;
    (0..n_out.min(m))
        .map(|k| {
            let scale = if k == 0 { (1.0 / mf).sqrt() } else { (2.0 / mf).sqrt() };
            let sum: f64 = input
                .iter()
                .enumerate()
                .map(|(n, &x)| x * (PI * (2 * n + 1) as f64 * k as f64 / (2.0 * mf)).cos())
                .sum();
            scale * sum
        })
        .collect()
}

/// Per-frame MFCC vectors for a clip.
///
/// Clips shorter than 1000 ms are zero-padded up to 1000 ms first, which
/// is how tail windows at inference reach the nominal length.
pub fn mfcc_frames(clip: &AudioClip, cfg: &MfccConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate(clip.sample_rate_hz)?;
    let target = clip.sample_rate_hz as usize;
    let padded;
    let work = if clip.len() < target {
        let mut samples = clip.samples.clone();
        samples.resize(target, 0.0);
        padded = AudioClip { samples, sample_rate_hz: clip.sample_rate_hz };
        &padded
    } else {
        clip
    };
    let frames = frame_and_window(work, cfg)?;
    let frame_len = frames[0].len();
    let n_fft = frame_len.next_power_of_two();
    let n_bins = n_fft / 2 + 1;
    let bank = mel_filterbank(cfg, clip.sample_rate_hz, n_bins)?;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_fft);
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    let mut out = Vec::with_capacity(frames.len());
    for frame in &frames {
        for (slot, &x) in buf.iter_mut().zip(frame.iter()) {
            *slot = Complex64::new(x, 0.0);
        }
        for slot in buf.iter_mut().skip(frame_len) {
            *slot = Complex64::new(0.0, 0.0);
        }
        fft.process(&mut buf);
        let spectrum: Vec<f64> = buf[..n_bins].iter().map(|c| c.norm_sqr()).collect();
        let log_mel: Vec<f64> = bank
            .iter()
            .map(|row| {
                let energy: f64 = row.iter().zip(&spectrum).map(|(w, p)| w * p).sum();
                (energy + cfg.log_floor).ln()
            })
            .collect();
        out.push(dct_ii(&log_mel, cfg.n_coeffs));
    }
    Ok(out)
}

/// Clip-level MFCC vector: the arithmetic mean over frame vectors.
pub fn mfcc(clip: &AudioClip, cfg: &MfccConfig) -> Result<FeatureVector> {
    let frames = mfcc_frames(clip, cfg)?;
    Ok(mean_rows(&frames))
}

pub(crate) fn mean_rows(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let dim = rows.first().map_or(0, Vec::len);
    let mut mean = vec![0.0; dim];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    mean
}

/// MFCC vectors for a whole corpus, carrying labels and provenance over.
pub fn extract_features(items: &[CorpusItem], cfg: &MfccConfig) -> Result<Vec<LabeledExample>> {
    items
        .iter()
        .map(|item| {
            Ok(LabeledExample {
                features: mfcc(&item.clip, cfg)?,
                label: item.label,
                source_id: item.source_id.clone(),
            })
        })
        .collect()
}
