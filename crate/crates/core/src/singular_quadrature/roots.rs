use serde::{Deserialize, Serialize};

use super::QuadratureError;

/// Whether a root's slope is far enough from zero to trust its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conditioning {
    Well,
    /// `1e-8 ≤ |f'| / scale ≤ 1e-4`: a simple root sitting close to a
    /// double root, where the classification may flip.
    Ill,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub location: f64,
    pub multiplicity: u8,
    pub conditioning: Conditioning,
    /// `f(location)`.
    pub residual: f64,
    /// Finite-difference `f'(location)`.
    pub slope: f64,
}

/// Search parameters for [`bracket_roots_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    pub lower: f64,
    pub upper: f64,
    pub probes: usize,
    /// Magnitude that `|f|` and `|f'|` thresholds are measured against.
    pub scale: f64,
}

impl RootSearch {
    pub fn new(lower: f64, upper: f64, probes: usize) -> Self {
        Self {
            lower,
            upper,
            probes,
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

/// Finds the roots of `f` on the open interval `(lower, upper)`; `upper` may be
/// `+∞`. Thresholds use `scale = 1`.
pub fn bracket_roots<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    probes: usize,
) -> Result<Vec<Root>, QuadratureError> {
    bracket_roots_with(f, RootSearch::new(lower, upper, probes))
}

pub fn bracket_roots_with<F: Fn(f64) -> f64>(
    f: F,
    search: RootSearch,
) -> Result<Vec<Root>, QuadratureError> {
    let RootSearch {
        lower,
        upper,
        probes,
        scale,
    } = search;
    if probes < 8 {
        return Err(QuadratureError::TooFewProbes(probes));
    }
    if !(lower < upper) || lower.is_nan() || !lower.is_finite() {
        return Err(QuadratureError::InvalidInterval { lower, upper });
    }
    let length = if upper.is_finite() {
        upper - lower
    } else {
        lower.abs().max(1.0)
    };
    let grid = probe_grid(lower, upper, probes, length);
    let samples: Vec<(f64, f64)> = grid
        .into_iter()
        .map(|t| (t, f(t)))
        .filter(|(_, v)| v.is_finite())
        .collect();

    let h_of = |t: f64| 1e-6 * t.abs().max(length.min(1.0)).max(1e-300);
    let slope = |t: f64| {
        let h = h_of(t);
        (f(t + h) - f(t - h)) / (2.0 * h)
    };

    let mut found: Vec<f64> = Vec::new();
    let mut doubles: Vec<f64> = Vec::new();
    for w in samples.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == 0.0 {
            found.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            found.push(bisect(&f, a, b, fa));
        }
    }
    if let Some(&(t, v)) = samples.last() {
        if v == 0.0 {
            found.push(t);
        }
    }
    for w in samples.windows(3) {
        let ((a, fa), (_, ft), (b, fb)) = (w[0], w[1], w[2]);
        if ft == 0.0 || fa.signum() != ft.signum() || fb.signum() != ft.signum() {
            continue;
        }
        if !(ft.abs() <= fa.abs() && ft.abs() <= fb.abs()) {
            continue;
        }
        let Some(star) = extremum(&slope, a, b) else {
            continue;
        };
        let fs = f(star);
        if fs.signum() != ft.signum() && fs != 0.0 {
            found.push(bisect(&f, a, star, fa));
            found.push(bisect(&f, star, b, fs));
        } else if fs.abs() < 1e-13 * scale {
            doubles.push(star);
        }
    }

    let mut roots: Vec<Root> = found
        .into_iter()
        .map(|t| (t, false))
        .chain(doubles.into_iter().map(|t| (t, true)))
        .map(|(t, tangent)| {
            let residual = f(t);
            let s = slope(t);
            let flat = s.abs() < 1e-8 * scale;
            let multiplicity = if tangent || (flat && residual.abs() < 1e-13 * scale) {
                2
            } else {
                1
            };
            let conditioning = if multiplicity == 1 && s.abs() <= 1e-4 * scale {
                Conditioning::Ill
            } else {
                Conditioning::Well
            };
            Root {
                location: t,
                multiplicity,
                conditioning,
                residual,
                slope: s,
            }
        })
        .collect();
    roots.sort_by(|a, b| a.location.total_cmp(&b.location));
    roots.dedup_by(|b, a| (a.location - b.location).abs() <= 1e-12 * a.location.abs().max(length));
    Ok(roots)
}

fn probe_grid(lower: f64, upper: f64, probes: usize, length: f64) -> Vec<f64> {
    let mut grid = Vec::with_capacity(probes + 64);
    for i in 0..probes {
        let tau = (i as f64 + 0.5) / probes as f64;
        let t = if upper.is_finite() {
            lower + (upper - lower) * tau
        } else {
            lower + length * tau / (1.0 - tau)
        };
        grid.push(t);
    }
    for j in 1..=14 {
        let d = 10f64.powi(-j) * length;
        grid.push(lower + d);
        if upper.is_finite() {
            grid.push(upper - d);
        } else {
            grid.push(lower + length * 10f64.powi(j));
        }
    }
    grid.retain(|t| *t > lower && *t < upper);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

/// Locates a sign change of the derivative inside `(a, b)`.
fn extremum<D: Fn(f64) -> f64>(slope: &D, a: f64, b: f64) -> Option<f64> {
    let (mut lo, mut hi) = (a, b);
    let s_lo = slope(lo);
    let s_hi = slope(hi);
    if s_lo.signum() == s_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid).signum() == s_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_pair() {
        let r = bracket_roots(|t| 2.0 * t - 0.4 - t * t, 0.0, f64::INFINITY, 256).unwrap();
        assert_eq!(r.len(), 2);
        let s = 0.6f64.sqrt();
        assert!((r[0].location - (1.0 - s)).abs() < 1e-14);
        assert!((r[1].location - (1.0 + s)).abs() < 1e-14);
        assert!(r.iter().all(|x| x.multiplicity == 1 && x.residual.abs() < 1e-13));
    }

    #[test]
    fn tangent_root() {
        let r = bracket_roots(|t: f64| 1.0 - t * (1.0 - t.ln()), 0.0, std::f64::consts::E, 64)
            .unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert!((r[0].location - 1.0).abs() < 1e-7);
        assert!(r[0].residual.abs() < 1e-13 && r[0].slope.abs() < 1e-8);
    }

    #[test]
    fn monotone_quartic() {
        let r = bracket_roots(|t: f64| t.powi(4) - 1.0, 0.5, 2.0, 8).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 1);
        assert!((r[0].location - 1.0).abs() < 1e-15);
    }

    #[test]
    fn close_pair_between_probes() {
        // Roots at 1 ± 1e-5, far closer than the probe spacing.
        let r = bracket_roots(|t: f64| (t - 1.0).powi(2) - 1e-10, 0.0, 3.0, 16).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].location - (1.0 - 1e-5)).abs() < 1e-12);
        assert_eq!(r[0].conditioning, Conditioning::Ill);
    }

    #[test]
    fn no_roots() {
        assert!(bracket_roots(|t: f64| t * t + 1.0, -1.0, 1.0, 32).unwrap().is_empty());
        assert!(bracket_roots(|t: f64| t, 0.0, 1.0, 4).is_err());
    }
}
