use crate::error::{Error, Result};

/// Offset logarithmic integral `∫_2^x dt / ln t` by adaptive Simpson
/// quadrature.
pub fn li(x: f64) -> Result<f64> {
    if x.is_nan() || x < 3.0 {
        return Err(Error::InvalidInput(format!("li needs x >= 3, got {x}")));
    }
    let f = |t: f64| 1.0 / t.ln();
    let a = 2.0;
    let fa = f(a);
    let fb = f(x);
    let fm = f((a + x) / 2.0);
    let whole = simpson(a, x, fa, fm, fb);
    Ok(adaptive(&f, a, x, fa, fm, fb, whole, 1e-10 * x, 50))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = (a + b) / 2.0;
    let lm = (a + m) / 2.0;
    let rm = (m + b) / 2.0;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((li(1000.0).unwrap() - 176.5644).abs() < 0.01);
        assert!(li(2.5).is_err());
        let mut prev = 0.0;
        for x in [3.0, 10.0, 100.0, 1e4, 1e5] {
            let v = li(x).unwrap();
            assert!(v < x && v > prev);
            prev = v;
        }
    }
}
