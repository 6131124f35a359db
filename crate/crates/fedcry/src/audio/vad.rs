//! Energy-based voice activity detection.
//!
//! A frame is active when its RMS energy exceeds the whole-clip RMS by
//! the configured threshold (in dB). Active runs are extended by a
//! hangover and merged when they touch. This is a self-contained,
//! deterministic substitute for external VAD engines; the interface
//! admits other detectors.

use crate::audio::{rms, AudioClip};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct VadConfig {
    pub frame_ms: f64,
    /// Threshold relative to whole-clip RMS, in dB (typically negative).
    pub energy_threshold_db: f64,
    /// Number of frames each active run is extended by.
    pub hangover_frames: usize,
}

impl Default for VadConfig {
    fn default() -> Self {
        Self { frame_ms: 30.0, energy_threshold_db: -25.0, hangover_frames: 3 }
    }
}

/// Detect voiced segments as half-open sample ranges `(start, end)`.
///
/// Segments are sorted, disjoint, and within clip bounds. A trailing
/// partial frame is scored over its actual length.
pub fn detect_voice_activity(clip: &AudioClip, cfg: &VadConfig) -> Result<Vec<(usize, usize)>> {
    if !cfg.frame_ms.is_finite() || cfg.frame_ms <= 0.0 {
        return Err(Error::InvalidConfig(format!("frame_ms {} must be positive", cfg.frame_ms)));
    }
    let frame_len =
        ((cfg.frame_ms / 1000.0 * clip.sample_rate_hz as f64).round() as usize).max(1);
    let n = clip.len();
    if n < frame_len {
        return Err(Error::SignalTooShort { needed: frame_len, got: n });
    }
    let n_frames = n.div_ceil(frame_len);
    let threshold = clip.rms() * 10f64.powf(cfg.energy_threshold_db / 20.0);
    let active: Vec<bool> = (0..n_frames)
        .map(|f| {
            let start = f * frame_len;
            let end = (start + frame_len).min(n);
            rms(&clip.samples[start..end]) > threshold
        })
        .collect();

    // Collect runs, extend each by the hangover, merge touching runs.
    let mut segments: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n_frames {
        if active[i] {
            let start = i;
            while i < n_frames && active[i] {
                i += 1;
            }
            let end = (i + cfg.hangover_frames).min(n_frames);
            match segments.last_mut() {
                Some(last) if last.1 >= start => last.1 = end.max(last.1),
                _ => segments.push((start, end)),
            }
        } else {
            i += 1;
        }
    }
    Ok(segments
        .into_iter()
        .map(|(a, b)| (a * frame_len, (b * frame_len).min(n)))
        .collect())
}
