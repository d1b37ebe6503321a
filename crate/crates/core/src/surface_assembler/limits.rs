use serde::{Deserialize, Serialize};

/// A one-sided limit with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSided {
    pub value: f64,
    pub error: f64,
}

const LEVELS: usize = 10;

/// `lim_{δ→0⁺} f(δ)` from `f(h₀·4^{−k})`, accelerated by Aitken's Δ²
/// process (exact for `f = L + a·δ^p`).
pub fn one_sided_limit<F: Fn(f64) -> f64>(f: F, h0: f64) -> OneSided {
    let mut values = Vec::with_capacity(LEVELS);
    for k in 0..LEVELS {
        let v = f(h0 * 0.25f64.powi(k as i32));
        if !v.is_finite() {
            break;
        }
        values.push(v);
    }
    let n = values.len();
    match n {
        0 => OneSided {
            value: f64::NAN,
            error: f64::INFINITY,
        },
        1 | 2 => OneSided {
            value: values[n - 1],
            error: if n == 2 {
                (values[1] - values[0]).abs()
            } else {
                f64::INFINITY
            },
        },
        _ => {
            let aitken = |i: usize| {
                let (a, b, c) = (values[i - 2], values[i - 1], values[i]);
                let den = (c - b) - (b - a);
                if den == 0.0 || !den.is_finite() {
                    c
                } else {
                    let v = c - (c - b) * (c - b) / den;
                    if v.is_finite() {
                        v
                    } else {
                        c
                    }
                }
            };
            let last = aitken(n - 1);
            let prev = if n > 3 { aitken(n - 2) } else { values[n - 1] };
            OneSided {
                value: last,
                error: (last - prev).abs(),
            }
        }
    }
}

/// Five-point central difference `f'(x)`.
pub fn derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_tails() {
        let l = one_sided_limit(|d| 3.0 + 2.0 * d.sqrt(), 0.1);
        assert!((l.value - 3.0).abs() < 1e-12, "{l:?}");
        let l = one_sided_limit(|d| 1.0 + d, 0.1);
        assert!((l.value - 1.0).abs() < 1e-14);
        let l = one_sided_limit(|d| d * d, 0.1);
        assert!(l.value.abs() < 1e-15);
    }

    #[test]
    fn five_point() {
        let d = derivative(&f64::sin, 0.3, 1e-3);
        assert!((d - 0.3f64.cos()).abs() < 1e-12);
    }
}
