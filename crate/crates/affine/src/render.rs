//! Point clouds and rasters of the attractor.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AffineError, Result};
use crate::params::AffineParams;

const BURN_IN: usize = 100;
/// Points per seeded chunk in chaos mode.
const CHUNK: usize = 1 << 16;
pub const MAX_DEPTH: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    /// Random digit choices from a seed; `n_points` after a burn-in of 100 per chunk.
    Chaos { seed: u64, n_points: usize },
    /// All 2ⁿ words of length n, projected.
    Depth { n_digits: u32 },
}

/// Points of the attractor for the given mode.
pub fn render_attractor(params: &AffineParams, mode: RenderMode) -> Result<Vec<(f64, f64)>> {
    match mode {
        RenderMode::Chaos { seed, n_points } => Ok(chaos(params, seed, n_points)),
        RenderMode::Depth { n_digits } => depth(params, n_digits),
    }
}

fn chaos(params: &AffineParams, seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let mut chunk = 0u64;
    while out.len() < n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let mut p = (0.0, 0.0);
        for _ in 0..BURN_IN {
            p = params.apply_f64(if rng.gen::<bool>() { 1 } else { -1 }, p);
        }
        let take = CHUNK.min(n - out.len());
        for _ in 0..take {
            p = params.apply_f64(if rng.gen::<bool>() { 1 } else { -1 }, p);
            out.push(p);
        }
        chunk += 1;
    }
    out
}

fn depth(params: &AffineParams, n: u32) -> Result<Vec<(f64, f64)>> {
    if n > MAX_DEPTH {
        return Err(AffineError::Domain(format!("depth {n} exceeds {MAX_DEPTH}")));
    }
    let (b1, b2, b3) = params.to_f64();
    let mut out = Vec::with_capacity(1 << n);
    for code in 0u64..(1u64 << n) {
        // Digit i is bit n−1−i, so the output is in lexicographic order.
        let (mut x, mut y, mut fx, mut fy) = (0.0, 0.0, 1.0, 1.0);
        for i in 0..n {
            let e = if code >> (n - 1 - i) & 1 == 1 { 1.0 } else { -1.0 };
            fx /= b1;
            fy /= if e > 0.0 { b3 } else { b2 };
            x += e * fx;
            y += e * fy;
        }
        out.push((x, y));
    }
    Ok(out)
}

/// "x,y" lines with 12 significant digits.
pub fn write_csv<W: Write>(points: &[(f64, f64)], out: &mut W) -> Result<()> {
    writeln!(out, "x,y")?;
    for (x, y) in points {
        writeln!(out, "{:.11e},{:.11e}", x, y)?;
    }
    Ok(())
}

/// 8-bit grayscale hit counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    /// Viewport [−1/(β₁−1), 1/(β₁−1)] × [−1/(m−1), 1/(m−1)] with m = min(β₂, β₃);
    /// intensity 255·(count/max)^{1/2}.
    pub fn from_points(params: &AffineParams, points: &[(f64, f64)], width: usize, height: usize) -> Raster {
        let (b1, b2, b3) = params.to_f64();
        let xr = 1.0 / (b1 - 1.0);
        let yr = 1.0 / (b2.min(b3) - 1.0);
        let mut counts = vec![0u64; width * height];
        for &(x, y) in points {
            let i = ((x + xr) / (2.0 * xr) * width as f64).floor();
            let j = ((yr - y) / (2.0 * yr) * height as f64).floor();
            if i >= 0.0 && j >= 0.0 && (i as usize) < width && (j as usize) < height {
                counts[j as usize * width + i as usize] += 1;
            }
        }
        let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
        let pixels = counts.iter().map(|&c| (255.0 * (c as f64 / max).sqrt()).round() as u8).collect();
        Raster { width, height, pixels }
    }

    /// Binary PGM (P5).
    pub fn write_pgm<W: Write>(&self, out: &mut W) -> Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.pixels)?;
        Ok(())
    }
}
