//! Derivative-free one- and few-dimensional numerics: bracketing root
//! finding, golden-section search and Nelder-Mead descent.

/// Root of `f` on `[lo, hi]` by bisection. Needs a sign change; returns the
/// midpoint of the final bracket.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Sub-intervals of an `n`-cell uniform grid on `[lo, hi]` across which `f`
/// changes sign.
pub fn sign_brackets(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=n {
        let b = if i == n { hi } else { lo + i as f64 * h };
        let fb = f(b);
        if fa.is_finite() && fb.is_finite() && (fa == 0.0 || fa.signum() != fb.signum()) {
            out.push((a, b));
        }
        a = b;
        fa = fb;
    }
    out
}

/// Minimizer of a unimodal `f` on `[lo, hi]` by golden-section search.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > xtol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    [(c, fc), (d, fd), (x, fx)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Golden-section minimizer refined to the center of the sublevel interval
/// `{f <= f_min + band}`. Flat (for example quartic) minima are resolved far
/// better by the interval center than by comparisons of nearly equal values.
pub fn golden_centered(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64, band: f64) -> (f64, f64) {
    let (t0, f0) = golden_section(&f, lo, hi, xtol);
    let level = f0 + band * f0.abs().max(1.0);
    let g = |t: f64| f(t) - level;
    let left = if g(lo) <= 0.0 { lo } else { bisect(g, lo, t0, 1e-15, 200).unwrap_or(t0) };
    let right = if g(hi) <= 0.0 { hi } else { bisect(g, t0, hi, 1e-15, 200).unwrap_or(t0) };
    let t = 0.5 * (left + right);
    let ft = f(t);
    if ft <= level {
        (t, ft)
    } else {
        (t0, f0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
}

/// Nelder-Mead simplex descent from `x0` with initial edge `step`.
///
/// Stops on `max_iter`, when the best value reaches `f_target`, or when the
/// simplex diameter falls below `xtol`. A collapsed simplex is rebuilt
/// around the incumbent a few times so that premature stalls are retried.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    xtol: f64,
    f_target: f64,
    max_iter: usize,
) -> Minimum {
    let mut best = Minimum {
        x: x0.to_vec(),
        fx: f(x0),
        iterations: 0,
    };
    let mut step = step;
    for _round in 0..4 {
        let remaining = max_iter.saturating_sub(best.iterations);
        if remaining == 0 || best.fx <= f_target {
            break;
        }
        let run = simplex_run(&f, &best.x, step, xtol, f_target, remaining);
        let improved = run.fx < best.fx;
        let iterations = best.iterations + run.iterations;
        if improved {
            best = Minimum { iterations, ..run };
        } else {
            best.iterations = iterations;
            break;
        }
        step = (step * 1e-2).max(xtol * 10.0);
    }
    best
}

fn simplex_run(
    f: &impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    xtol: f64,
    f_target: f64,
    max_iter: usize,
) -> Minimum {
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };
    while iterations < max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(i.cmp(&j)));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if vals[0] <= f_target {
            break;
        }
        let diameter = pts[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&pts[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter <= xtol {
            break;
        }
        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        let worst = pts[n].clone();
        let xr = lerp(&centroid, &worst, -alpha);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = lerp(&centroid, &worst, -gamma);
            let fe = f(&xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let xc = lerp(&centroid, &xr, rho);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = lerp(&centroid, &worst, rho);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < vals[n].min(fr) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for i in 1..=n {
                    pts[i] = lerp(&pts[0], &pts[i], sigma);
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let i = (0..=n)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(i.cmp(&j)))
        .unwrap_or(0);
    Minimum {
        x: pts[i].clone(),
        fx: vals[i],
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_none());
    }

    #[test]
    fn brackets_locate_each_root() {
        let b = sign_brackets(|x| (x - 0.25) * (x - 0.75), 0.0, 1.0, 10);
        assert_eq!(b.len(), 2);
        assert!(b[0].0 <= 0.25 && 0.25 <= b[0].1);
        assert!(b[1].0 <= 0.75 && 0.75 <= b[1].1);
    }

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2), -2.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
        // an offset flattens the minimum below the ulp of the value
        let (x, _) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
    }

    #[test]
    fn centered_search_resolves_flat_minima() {
        let (x, _) = golden_centered(|x| 1.0 + (x - 0.3).powi(4), -2.0, 2.0, 1e-10, 1e-10);
        assert!((x - 0.3).abs() < 1e-9, "{x}");
        let (x, _) = golden_centered(|x| 1.0 + (x - 0.3).powi(2), -2.0, 2.0, 1e-10, 1e-10);
        assert!((x - 0.3).abs() < 1e-9, "{x}");
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], 0.1, 1e-12, 0.0, 5000);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn nelder_mead_reaches_target() {
        let f = |x: &[f64]| x.iter().map(|v| (v - 0.5).powi(2)).sum::<f64>();
        let m = nelder_mead(f, &[0.0, 0.0, 0.0], 0.2, 1e-14, 1e-24, 5000);
        assert!(m.fx <= 1e-20, "{m:?}");
    }
}
