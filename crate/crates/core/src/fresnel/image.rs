use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::RadialProfile;
use crate::Result;

/// Square grid of relative intensities in the detection plane.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffractionImage {
    pub n: usize,
    /// physical pixel pitch, m
    pub pitch: f64,
    /// row-major `n * n` values of `I_rel`
    pub data: Vec<f64>,
}

/// Builds an `n x n` image from a circularly symmetric profile.
///
/// Pixel centres sit at `(i - (n-1)/2) * pitch` with `pitch = 2 extent / n`,
/// where `extent` is the last profile radius; corner pixels beyond it take
/// the last profile value.
pub fn assemble_image(profile: &RadialProfile, n: usize) -> DiffractionImage {
    let extent = profile.samples.last().map_or(0.0, |s| s.0);
    let pitch = 2.0 * extent / n as f64;
    let half = 0.5 * (n as f64 - 1.0);
    let coords: Vec<f64> = (0..n).map(|i| (i as f64 - half) * pitch).collect();
    let mut data = Vec::with_capacity(n * n);
    for &y in &coords {
        for &x in &coords {
            data.push(profile.at(x.hypot(y)));
        }
    }
    DiffractionImage { n, pitch, data }
}

impl DiffractionImage {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    /// Centre of pixel `i` along either axis, m.
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * (self.n as f64 - 1.0)) * self.pitch
    }

    /// `I_rel` represented by one grey level in the exported graymap.
    pub fn scale(&self) -> f64 {
        let max = self.data.iter().cloned().fold(0.0, f64::max);
        if max > 0.0 {
            max / 65535.0
        } else {
            1.0
        }
    }

    /// Binary 16-bit graymap (P5), big-endian samples.
    pub fn to_pgm(&self) -> Vec<u8> {
        let scale = self.scale();
        let mut out = format!("P5\n{} {}\n65535\n", self.n, self.n).into_bytes();
        out.reserve(2 * self.data.len());
        for &v in &self.data {
            let level = (v / scale).round().clamp(0.0, 65535.0) as u16;
            out.extend_from_slice(&level.to_be_bytes());
        }
        out
    }

    pub fn sidecar(&self, profile: &RadialProfile) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "format = \"P5 16-bit big-endian, row-major\"");
        let _ = writeln!(out, "pixels = {}", self.n);
        let _ = writeln!(out, "pitch_m = {:e}", self.pitch);
        let _ = writeln!(out, "i_rel_per_level = {:e}", self.scale());
        let _ = writeln!(out, "b_m = {:e}", profile.b);
        let _ = writeln!(out, "radius_m = {:e}", profile.radius);
        let _ = writeln!(out, "cp = {}", profile.cp);
        let _ = writeln!(out, "corridor = {}", profile.corridor);
        let _ = writeln!(out, "convolved = {}", profile.convolved);
        let _ = writeln!(
            out,
            "note = \"pixel radii beyond {:e} m are clamped to the last profile sample\"",
            profile.samples.last().map_or(0.0, |s| s.0)
        );
        out
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_pgm())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> RadialProfile {
        RadialProfile {
            samples: (0..101)
                .map(|k| (k as f64 * 1e-9, 1.0 + (k as f64 * 0.3).cos()))
                .collect(),
            b: 1e-4,
            radius: 100e-9,
            cp: false,
            corridor: 0.0,
            convolved: false,
            notes: vec![],
        }
    }

    #[test]
    fn centre_and_rotation_symmetry() {
        let p = profile();
        let img = assemble_image(&p, 51);
        assert_eq!(img.get(25, 25), p.on_axis());
        for r in 0..51 {
            for c in 0..51 {
                // 90 degree rotation maps (r, c) to (c, n-1-r)
                assert_eq!(img.get(r, c), img.get(c, 50 - r));
            }
        }
    }

    #[test]
    fn graymap_layout() {
        let img = assemble_image(&profile(), 8);
        let bytes = img.to_pgm();
        let header = b"P5\n8 8\n65535\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 2 * 64);
        let max_level = bytes[header.len()..]
            .chunks(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .max()
            .unwrap();
        assert_eq!(max_level, 65535);
    }
}
