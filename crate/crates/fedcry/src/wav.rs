//! Mono 16-bit PCM WAV reading and writing.
//!
//! Integer samples map to `[-1, 1]` by division by 32768; writing uses
//! the inverse scaling with clamping, so a read-write round trip
//! reproduces the sample bytes exactly.

use std::path::Path;

use crate::audio::AudioClip;
use crate::error::{Error, Result};

/// Read a mono PCM-16 WAV file.
pub fn read_wav(path: &Path) -> Result<AudioClip> {
    let bytes = std::fs::read(path)?;
    parse_wav(&bytes)
}

fn parse_wav(bytes: &[u8]) -> Result<AudioClip> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::InvalidWav("missing RIFF/WAVE header".into()));
    }
    let mut pos = 12;
    let mut sample_rate: Option<u32> = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_start = pos + 8;
        let body_end = body_start + size;
        if body_end > bytes.len() {
            return Err(Error::InvalidWav("truncated chunk".into()));
        }
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(Error::InvalidWav("fmt chunk too small".into()));
                }
                let format = u16::from_le_bytes([body[0], body[1]]);
                let channels = u16::from_le_bytes([body[2], body[3]]);
                let rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
                let bits = u16::from_le_bytes([body[14], body[15]]);
                if format != 1 {
                    return Err(Error::InvalidWav(format!("unsupported format {format}, want PCM")));
                }
                if channels != 1 {
                    return Err(Error::InvalidWav(format!("{channels} channels, want mono")));
                }
                if bits != 16 {
                    return Err(Error::InvalidWav(format!("{bits} bits per sample, want 16")));
                }
                sample_rate = Some(rate);
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // chunks are word-aligned
        pos = body_end + (size & 1);
    }
    let rate = sample_rate.ok_or_else(|| Error::InvalidWav("no fmt chunk".into()))?;
    let data = data.ok_or_else(|| Error::InvalidWav("no data chunk".into()))?;
    if data.len() % 2 != 0 {
        return Err(Error::InvalidWav("odd data size for 16-bit samples".into()));
    }
    let samples: Vec<f64> = data
        .chunks_exact(2)
        .map(|b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0)
        .collect();
    AudioClip::new(samples, rate)
}

/// Write a mono PCM-16 WAV file. Samples are clamped to `[-1, 1]`.
pub fn write_wav(path: &Path, clip: &AudioClip) -> Result<()> {
    std::fs::write(path, encode_wav(clip))?;
    Ok(())
}

fn encode_wav(clip: &AudioClip) -> Vec<u8> {
    let data_len = (clip.samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&clip.sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate_hz * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in &clip.samples {
        let v = (s.clamp(-1.0, 1.0) * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}
