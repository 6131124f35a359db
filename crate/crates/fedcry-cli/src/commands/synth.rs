//! `synth`: write a labeled synthetic WAV corpus plus a manifest.

use std::fmt::Write as _;

use fedcry::csv::fmt_f64;
use fedcry::dataset::{self, SynthConfig, ASPHYXIA};
use fedcry::wav;

use crate::{AppError, Context, SynthArgs};

use super::{ensure_out_dir, out_path};

pub fn run(ctx: &Context, args: &SynthArgs) -> Result<(), AppError> {
    let d = SynthConfig::default();
    let cfg = SynthConfig {
        n_normal: ctx.config.resolve(args.n_normal, "n-normal", d.n_normal)?,
        n_asphyxia: ctx.config.resolve(args.n_asphyxia, "n-asphyxia", d.n_asphyxia)?,
        duration_ms: ctx.config.resolve(args.duration_ms, "duration-ms", d.duration_ms)?,
        sample_rate_hz: ctx.config.resolve(args.sample_rate, "sample-rate", d.sample_rate_hz)?,
        normal_f0_hz: (
            ctx.config.resolve(args.normal_f0_low, "normal-f0-low", d.normal_f0_hz.0)?,
            ctx.config.resolve(args.normal_f0_high, "normal-f0-high", d.normal_f0_hz.1)?,
        ),
        asphyxia_f0_hz: (
            ctx.config.resolve(args.asphyxia_f0_low, "asphyxia-f0-low", d.asphyxia_f0_hz.0)?,
            ctx.config.resolve(args.asphyxia_f0_high, "asphyxia-f0-high", d.asphyxia_f0_hz.1)?,
        ),
        asphyxia_noise_db: ctx.config.resolve(
            args.asphyxia_noise_db,
            "asphyxia-noise-db",
            d.asphyxia_noise_db,
        )?,
        seed: ctx.seed,
    };
    ensure_out_dir(ctx)?;
    std::fs::create_dir_all(out_path(ctx, "normal"))?;
    std::fs::create_dir_all(out_path(ctx, "asphyxia"))?;

    let clips = dataset::generate_synthetic_corpus(&cfg)?;
    let mut manifest = String::from("file,label,f0_hz,seed\n");
    for clip in &clips {
        let class = if clip.item.label == ASPHYXIA { "asphyxia" } else { "normal" };
        let file = format!("{class}/{}.wav", clip.item.source_id);
        wav::write_wav(&ctx.out.join(&file), &clip.item.clip)?;
        let _ = writeln!(
            manifest,
            "{file},{},{},{}",
            clip.item.label,
            fmt_f64(clip.f0_hz),
            clip.clip_seed
        );
    }
    std::fs::write(out_path(ctx, "manifest.csv"), manifest)?;
    if ctx.verbose {
        eprintln!("synth: wrote {} clips under {}", clips.len(), ctx.out.display());
    }
    println!(
        "corpus: {} ({} normal + {} asphyxia), manifest: {}",
        ctx.out.display(),
        cfg.n_normal,
        cfg.n_asphyxia,
        out_path(ctx, "manifest.csv").display()
    );
    Ok(())
}
