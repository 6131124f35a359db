//! Butterworth band-pass design and biquad-cascade filtering.
//!
//! The design path is the classic analog-prototype route: Butterworth
//! lowpass poles, lowpass-to-bandpass transformation, then the bilinear
//! transform with frequency pre-warping. An order-N prototype yields a
//! cascade of N second-order sections (2N digital poles), applied in
//! direct form II transposed.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::audio::AudioClip;
use crate::error::{Error, Result};

/// Band-pass specification. `order` is the analog prototype order, as
/// in the usual design convention; the band-pass cascade has `order`
/// biquads.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec {
    pub low_cut_hz: f64,
    pub high_cut_hz: f64,
    pub order: usize,
}

impl Default for FilterSpec {
    /// 100–4000 Hz order-4 band-pass: covers infant-cry fundamentals and
    /// dominant harmonics while staying under the 8 kHz corpus Nyquist.
    fn default() -> Self {
        Self { low_cut_hz: 100.0, high_cut_hz: 4_000.0, order: 4 }
    }
}

impl FilterSpec {
    pub fn validate(&self, sample_rate_hz: u32) -> Result<()> {
        if !self.low_cut_hz.is_finite() || self.low_cut_hz <= 0.0 {
            return Err(Error::InvalidFilterSpec(format!(
                "low cut {} Hz must be positive",
                self.low_cut_hz
            )));
        }
        if self.high_cut_hz <= self.low_cut_hz {
            return Err(Error::InvalidFilterSpec(format!(
                "high cut {} Hz must exceed low cut {} Hz",
                self.high_cut_hz, self.low_cut_hz
            )));
        }
        let nyquist = sample_rate_hz as f64 / 2.0;
        if self.high_cut_hz >= nyquist {
            return Err(Error::InvalidFilterSpec(format!(
                "high cut {} Hz must stay below Nyquist {} Hz",
                self.high_cut_hz, nyquist
            )));
        }
        if !matches!(self.order, 2 | 4 | 6 | 8) {
            return Err(Error::InvalidFilterSpec(format!(
                "order {} not in {{2, 4, 6, 8}}",
                self.order
            )));
        }
        Ok(())
    }
}

/// One IIR biquad with `a0` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderSection {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl SecondOrderSection {
    /// Both poles strictly inside the unit circle (Jury conditions).
    pub fn is_stable(&self) -> bool {
        self.a2.abs() < 1.0 && self.a1.abs() < 1.0 + self.a2
    }
}

/// Design a Butterworth band-pass cascade via the bilinear transform.
pub fn design_butterworth_bandpass(
    spec: &FilterSpec,
    sample_rate_hz: u32,
) -> Result<Vec<SecondOrderSection>> {
    spec.validate(sample_rate_hz)?;
    let fs = sample_rate_hz as f64;
    let k = 2.0 * fs;
    // Pre-warp the digital edges onto the analog axis.
    let w_low = k * (PI * spec.low_cut_hz / fs).tan();
    let w_high = k * (PI * spec.high_cut_hz / fs).tan();
    let w0_sq = w_low * w_high;
    let bw = w_high - w_low;

    // Lowpass prototype poles on the unit circle, left half-plane.
    let n_proto = spec.order;
    let mut poles = Vec::with_capacity(2 * spec.order);
    for i in 0..n_proto {
        let theta = PI * (2 * i + n_proto + 1) as f64 / (2 * n_proto) as f64;
        let p = Complex64::new(theta.cos(), theta.sin());
        // Each prototype pole p maps to the roots of s^2 - p*bw*s + w0^2.
        let half = p * (bw / 2.0);
        let disc = (half * half - w0_sq).sqrt();
        poles.push(half + disc);
        poles.push(half - disc);
    }

    // Group the 2N analog poles into real-coefficient quadratics
    // s^2 + c1 s + c0. The pole set is closed under conjugation, so each
    // positive-imaginary pole pairs with its conjugate; any (numerically)
    // real poles pair among themselves.
    let scale = poles.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    let im_tol = 1e-9 * scale;
    let mut quads: Vec<(f64, f64)> = Vec::with_capacity(n_proto);
    let mut reals: Vec<f64> = Vec::new();
    for p in &poles {
        if p.im > im_tol {
            quads.push((-2.0 * p.re, p.norm_sqr()));
        } else if p.im.abs() <= im_tol {
            reals.push(p.re);
        }
    }
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for pair in reals.chunks(2) {
        if pair.len() != 2 {
            return Err(Error::InvalidFilterSpec("failed to pair analog poles".into()));
        }
        quads.push((-(pair[0] + pair[1]), pair[0] * pair[1]));
    }
    if quads.len() != n_proto {
        return Err(Error::InvalidFilterSpec("failed to pair analog poles".into()));
    }

    // Bilinear transform of each analog section bw*s / (s^2 + c1 s + c0).
    let sections: Vec<SecondOrderSection> = quads
        .iter()
        .map(|&(c1, c0)| {
            let a0 = k * k + c1 * k + c0;
            SecondOrderSection {
                b0: bw * k / a0,
                b1: 0.0,
                b2: -bw * k / a0,
                a1: 2.0 * (c0 - k * k) / a0,
                a2: (k * k - c1 * k + c0) / a0,
            }
        })
        .collect();

    for s in &sections {
        if !s.is_stable() {
            return Err(Error::InvalidFilterSpec("designed section is unstable".into()));
        }
    }
    Ok(sections)
}

/// Apply a biquad cascade causally with zero initial state.
///
/// Direct form II transposed; output length equals input length.
pub fn apply_filter(clip: &AudioClip, sections: &[SecondOrderSection]) -> AudioClip {
    let mut out = clip.samples.clone();
    for sec in sections {
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for x in out.iter_mut() {
            let y = sec.b0 * *x + s1;
            s1 = sec.b1 * *x - sec.a1 * y + s2;
            s2 = sec.b2 * *x - sec.a2 * y;
            *x = y;
        }
    }
    AudioClip { samples: out, sample_rate_hz: clip.sample_rate_hz }
}

/// Magnitude of the cascade's frequency response at `freq_hz`.
pub fn frequency_response(
    sections: &[SecondOrderSection],
    freq_hz: f64,
    sample_rate_hz: u32,
) -> f64 {
    let omega = 2.0 * PI * freq_hz / sample_rate_hz as f64;
    let z1 = Complex64::from_polar(1.0, -omega);
    let z2 = z1 * z1;
    sections
        .iter()
        .map(|s| {
            let num = Complex64::new(s.b0, 0.0) + z1 * s.b1 + z2 * s.b2;
            let den = Complex64::new(1.0, 0.0) + z1 * s.a1 + z2 * s.a2;
            (num / den).norm()
        })
        .product()
}
