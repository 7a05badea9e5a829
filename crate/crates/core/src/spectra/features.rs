//! Resonance finding on `transmission − baseline`.
//!
//! A feature is a stretch of the difference curve that stays on one side of
//! zero and clears the noise floor. Neighbouring resonances that overlap
//! (a Zeeman multiplet, say) share one such stretch; it is split at the
//! valley between sub-peaks that are prominent enough.

use super::Spectrum;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureKind {
    /// Transmission above the baseline.
    Transparency,
    /// Transmission below the baseline.
    Absorption,
}

impl FeatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Transparency => "transparency",
            FeatureKind::Absorption => "absorption",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonanceFeature {
    /// Extremum position, rad/s (parabolic interpolation).
    pub center: f64,
    /// Full width at half contrast, rad/s.
    pub fwhm: f64,
    /// Transmission minus baseline transmission at the extremum.
    pub contrast: f64,
    pub kind: FeatureKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureOptions {
    /// Smallest `|T − T_baseline|` counted as signal.
    pub noise_floor: f64,
    /// A sub-peak must rise above its higher neighbouring valley by at least
    /// this fraction of its own height (and by the noise floor).
    pub min_relative_prominence: f64,
}

impl Default for FeatureOptions {
    fn default() -> Self {
        FeatureOptions {
            noise_floor: 1e-4,
            min_relative_prominence: 0.1,
        }
    }
}

/// Features of `spectrum` relative to `baseline`, which must share its axis.
pub fn extract_features(spectrum: &Spectrum, baseline: &Spectrum) -> Result<Vec<ResonanceFeature>> {
    if spectrum.detunings != baseline.detunings {
        return Err(Error::AxisMismatch);
    }
    let diff: Vec<f64> = spectrum
        .transmission
        .iter()
        .zip(&baseline.transmission)
        .map(|(t, b)| t - b)
        .collect();
    let features = find_features(&spectrum.detunings, &diff, &FeatureOptions::default());
    if features.is_empty() {
        Err(Error::NoFeature)
    } else {
        Ok(features)
    }
}

/// Features of a difference curve `signal` sampled at ascending `x`.
pub fn find_features(x: &[f64], signal: &[f64], opts: &FeatureOptions) -> Vec<ResonanceFeature> {
    assert_eq!(x.len(), signal.len());
    let n = signal.len();
    let floor = opts.noise_floor;
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if signal[i].abs() <= floor {
            i += 1;
            continue;
        }
        let positive = signal[i] > 0.0;
        let start = i;
        while i < n && signal[i].abs() > floor && (signal[i] > 0.0) == positive {
            i += 1;
        }
        let sign = if positive { 1.0 } else { -1.0 };
        let y: Vec<f64> = signal.iter().map(|s| sign * s).collect();
        region_features(x, &y, start, i, opts, sign, &mut out);
    }
    out
}

/// `y` is the signal flipped so the region `[start, end)` is positive.
fn region_features(
    x: &[f64],
    y: &[f64],
    start: usize,
    end: usize,
    opts: &FeatureOptions,
    sign: f64,
    out: &mut Vec<ResonanceFeature>,
) {
    let peaks = prominent_peaks(y, start, end, opts);
    // Sub-regions meet at the lowest point between consecutive peaks.
    let mut valleys = Vec::with_capacity(peaks.len() + 1);
    valleys.push(None);
    for w in peaks.windows(2) {
        let v = (w[0] + 1..w[1]).min_by(|&a, &b| y[a].total_cmp(&y[b])).unwrap_or(w[0]);
        valleys.push(Some(v));
    }
    valleys.push(None);

    for (k, &p) in peaks.iter().enumerate() {
        let half = 0.5 * y[p];
        let left = {
            let limit = valleys[k].unwrap_or(0);
            let mut j = p;
            while j > limit && y[j] > half {
                j -= 1;
            }
            if y[j] <= half {
                crossing(x, y, j, j + 1, half)
            } else {
                x[j]
            }
        };
        let right = {
            let limit = valleys[k + 1].unwrap_or(y.len() - 1);
            let mut j = p;
            while j < limit && y[j] > half {
                j += 1;
            }
            if y[j] <= half {
                crossing(x, y, j - 1, j, half)
            } else {
                x[j]
            }
        };
        let contrast = sign * y[p];
        out.push(ResonanceFeature {
            center: vertex(x, y, p),
            fwhm: right - left,
            contrast,
            kind: if contrast > 0.0 {
                FeatureKind::Transparency
            } else {
                FeatureKind::Absorption
            },
        });
    }
}

fn prominent_peaks(y: &[f64], start: usize, end: usize, opts: &FeatureOptions) -> Vec<usize> {
    let mut peaks = Vec::new();
    for j in start..end {
        let rising = j == start || y[j] > y[j - 1];
        let falling = j + 1 == end || y[j] >= y[j + 1];
        if !(rising && falling) {
            continue;
        }
        // Lowest point on each side before something higher appears; the
        // region edge counts as zero. Ties go to the rightmost peak.
        let mut left_base = 0.0;
        let mut lowest = y[j];
        for k in (start..j).rev() {
            if y[k] > y[j] {
                left_base = lowest;
                break;
            }
            lowest = lowest.min(y[k]);
        }
        let mut right_base = 0.0;
        let mut lowest = y[j];
        for &yk in &y[j + 1..end] {
            if yk >= y[j] {
                right_base = lowest;
                break;
            }
            lowest = lowest.min(yk);
        }
        let prominence = y[j] - f64::max(left_base, right_base);
        if prominence > opts.noise_floor.max(opts.min_relative_prominence * y[j]) {
            peaks.push(j);
        }
    }
    peaks
}

/// Abscissa where the segment `a → b` crosses `level`.
fn crossing(x: &[f64], y: &[f64], a: usize, b: usize, level: f64) -> f64 {
    let dy = y[b] - y[a];
    if dy == 0.0 {
        return x[a];
    }
    x[a] + (level - y[a]) * (x[b] - x[a]) / dy
}

/// Vertex of the parabola through the peak sample and its neighbours.
fn vertex(x: &[f64], y: &[f64], p: usize) -> f64 {
    if p == 0 || p + 1 >= x.len() {
        return x[p];
    }
    let (x0, x1, x2) = (x[p - 1], x[p], x[p + 1]);
    let (y0, y1, y2) = (y[p - 1], y[p], y[p + 1]);
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 {
        return x1;
    }
    (x1 - 0.5 * num / den).clamp(x0, x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{khz, mhz};

    fn lorentzian(x: f64, centre: f64, fwhm: f64, depth: f64) -> f64 {
        let h = 0.5 * fwhm;
        depth * h * h / ((x - centre).powi(2) + h * h)
    }

    fn axis(step: f64, half: f64) -> Vec<f64> {
        let n = (half / step).round() as i64;
        (-n..=n).map(|i| i as f64 * step).collect()
    }

    #[test]
    fn recovers_synthetic_lorentzian_dip() {
        let x = axis(khz(20.0), mhz(10.0));
        for centre in [0.0, khz(7.0), khz(-313.0)] {
            let y: Vec<f64> = x.iter().map(|&v| -lorentzian(v, centre, mhz(1.0), 0.3)).collect();
            let f = find_features(&x, &y, &FeatureOptions::default());
            assert_eq!(f.len(), 1);
            assert_eq!(f[0].kind, FeatureKind::Absorption);
            assert!((f[0].fwhm / mhz(1.0) - 1.0).abs() < 0.02, "{}", f[0].fwhm / mhz(1.0));
            assert!((f[0].center - centre).abs() < khz(20.0));
            assert!((f[0].contrast + 0.3).abs() < 0.01);
        }
    }

    #[test]
    fn flat_difference_has_no_feature() {
        let x = axis(khz(20.0), mhz(1.0));
        let y = vec![5e-5; x.len()];
        assert!(find_features(&x, &y, &FeatureOptions::default()).is_empty());
    }

    #[test]
    fn splits_overlapping_triplet() {
        let x = axis(khz(10.0), mhz(5.0));
        let y: Vec<f64> = x
            .iter()
            .map(|&v| {
                [-0.7, 0.0, 0.7]
                    .iter()
                    .map(|c| lorentzian(v, mhz(*c), mhz(0.3), 0.1))
                    .sum()
            })
            .collect();
        let f = find_features(&x, &y, &FeatureOptions::default());
        assert_eq!(f.len(), 3);
        for (feat, c) in f.iter().zip([-0.7, 0.0, 0.7]) {
            assert_eq!(feat.kind, FeatureKind::Transparency);
            assert!((feat.center - mhz(c)).abs() < khz(10.0));
        }
    }

    #[test]
    fn opposite_signs_are_separate() {
        let x = axis(khz(10.0), mhz(5.0));
        let y: Vec<f64> = x
            .iter()
            .map(|&v| lorentzian(v, 0.0, mhz(0.2), 0.2) - lorentzian(v, mhz(2.0), mhz(0.5), 0.1))
            .collect();
        let f = find_features(&x, &y, &FeatureOptions::default());
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].kind, FeatureKind::Transparency);
        assert_eq!(f[1].kind, FeatureKind::Absorption);
    }

    #[test]
    fn small_ripple_is_not_split() {
        let x = axis(khz(10.0), mhz(3.0));
        let y: Vec<f64> = x
            .iter()
            .map(|&v| lorentzian(v, 0.0, mhz(1.0), 0.2) * (1.0 + 0.02 * (v / khz(50.0)).sin().powi(2)))
            .collect();
        assert_eq!(find_features(&x, &y, &FeatureOptions::default()).len(), 1);
    }
}
