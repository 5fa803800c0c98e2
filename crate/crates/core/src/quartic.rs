//! Minimization of `f(z) = a z^4 + b z^2 + c z` over `z >= 0`.

/// Coefficients of `a z^4 + b z^2 + c z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuarticCoeffs {
    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        let z2 = z * z;
        (self.a * z2 + self.b) * z2 + self.c * z
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticMin {
    pub z: f64,
    /// `f(z)`.
    pub value: f64,
    pub used_default: bool,
}

/// Minimizes `f` over `z >= 0`.
///
/// Candidates are the nonnegative real roots of `f'(z) = 4a z^3 + 2b z + c`.
/// When no such stationary point minimizes `f` on the half-line, `z` falls
/// back to `default_value`. The origin counts as a stationary minimizer only
/// when it is a nondegenerate one (`c = 0`, `b > 0`).
pub fn minimize_quartic(q: QuarticCoeffs, default_value: f64) -> QuarticMin {
    let fallback = || QuarticMin {
        z: default_value,
        value: q.eval(default_value),
        used_default: true,
    };
    let QuarticCoeffs { a, b, c } = q;

    if c == 0.0 && b > 0.0 && a >= 0.0 {
        return QuarticMin {
            z: 0.0,
            value: 0.0,
            used_default: false,
        };
    }

    if a <= 0.0 {
        // b z^2 + c z: bounded below on z >= 0 only for b > 0.
        if b > 0.0 {
            let z = -c / (2.0 * b);
            if z > 0.0 {
                return QuarticMin {
                    z,
                    value: q.eval(z),
                    used_default: false,
                };
            }
        }
        return fallback();
    }

    let mut best: Option<(f64, f64)> = None;
    for z in stationary_points(a, b, c) {
        if z > 0.0 {
            let value = q.eval(z);
            if best.is_none_or(|(_, v)| value < v) {
                best = Some((z, value));
            }
        }
    }
    match best {
        // f(0) = 0, so a positive stationary point only wins if it goes below.
        Some((z, value)) if value < 0.0 => QuarticMin {
            z,
            value,
            used_default: false,
        },
        _ => fallback(),
    }
}

/// Real roots of `4a z^3 + 2b z + c` for `a > 0`, one Newton step each.
fn stationary_points(a: f64, b: f64, c: f64) -> Vec<f64> {
    // Depressed cubic t^3 + p t + q = 0.
    let p = b / (2.0 * a);
    let q = c / (4.0 * a);
    let mut roots = Vec::with_capacity(3);
    if c == 0.0 {
        roots.push(0.0);
        if p < 0.0 {
            let s = (-p).sqrt();
            roots.extend([s, -s]);
        }
    } else {
        let half_q = q / 2.0;
        let third_p = p / 3.0;
        let disc = half_q * half_q + third_p * third_p * third_p;
        if disc > 0.0 {
            // One real root. Pick the cube-root branch without cancellation.
            let u = (-half_q - half_q.signum() * disc.sqrt()).cbrt();
            roots.push(if u != 0.0 { u - third_p / u } else { 0.0 });
        } else {
            // Three real roots (p < 0 here since q != 0).
            let m = 2.0 * (-third_p).sqrt();
            let arg = ((3.0 * q) / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            for k in 0..3 {
                roots.push(m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
            }
        }
    }
    for t in &mut roots {
        let g = (*t * *t + p) * *t + q;
        let dg = 3.0 * *t * *t + p;
        if dg != 0.0 {
            let next = *t - g / dg;
            if next.is_finite() {
                *t = next;
            }
        }
    }
    roots
}
