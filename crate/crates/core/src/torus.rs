//! Grid search with local golden-section refinement over the n-torus.

use rayon::prelude::*;
use std::f64::consts::TAU;

/// Best point found by [`maximize`].
#[derive(Debug, Clone, PartialEq)]
pub struct TorusMax {
    pub value: f64,
    pub angles: Vec<f64>,
    pub evaluations: u64,
}

/// Maximizes `f` over `[0, 2π)^n` on a uniform grid with `grid` points per
/// free coordinate, then polishes the best point by `refine` rounds of
/// coordinate-wise golden-section search.
///
/// With `pin_first`, the first angle is held at zero, which is exact when `f`
/// is invariant under a common rotation of all coordinates.
pub fn maximize<F>(n: usize, grid: usize, refine: usize, pin_first: bool, f: F) -> TorusMax
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if n == 0 {
        return TorusMax {
            value: f(&[]),
            angles: vec![],
            evaluations: 1,
        };
    }
    let step = TAU / grid as f64;
    let free = if pin_first { n - 1 } else { n };
    let total = (grid as u64).pow(free as u32);
    let chunk = grid as u64;
    let outer = total.div_ceil(chunk).max(1);
    let best = (0..outer)
        .into_par_iter()
        .map(|o| {
            let mut angles = vec![0.0; n];
            let mut best = (f64::NEG_INFINITY, vec![0.0; n]);
            let lo = o * chunk;
            let hi = (lo + chunk).min(total);
            for idx in lo..hi {
                let mut rem = idx;
                for slot in angles.iter_mut().skip(n - free) {
                    *slot = (rem % grid as u64) as f64 * step;
                    rem /= grid as u64;
                }
                let v = f(&angles);
                if v > best.0 {
                    best = (v, angles.clone());
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, vec![0.0; n]),
            |a, b| if b.0 > a.0 { b } else { a },
        );
    let (mut value, mut angles) = best;
    let mut evaluations = total.max(1);
    let mut h = step;
    for _ in 0..refine {
        for j in (n - free)..n {
            let (v, t, e) = golden(&f, &angles, j, angles[j] - h, angles[j] + h);
            evaluations += e;
            if v > value {
                value = v;
                angles[j] = t;
            }
        }
        h *= 0.5;
    }
    for a in angles.iter_mut() {
        *a = a.rem_euclid(TAU);
    }
    TorusMax {
        value,
        angles,
        evaluations,
    }
}

fn golden<F: Fn(&[f64]) -> f64>(f: &F, base: &[f64], j: usize, mut a: f64, mut b: f64) -> (f64, f64, u64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x = base.to_vec();
    let eval = |t: f64, x: &mut Vec<f64>| {
        x[j] = t;
        f(x)
    };
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = eval(c, &mut x);
    let mut fd = eval(d, &mut x);
    let mut count = 2;
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = eval(c, &mut x);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = eval(d, &mut x);
        }
        count += 1;
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    if fc > fd {
        (fc, c, count)
    } else {
        (fd, d, count)
    }
}
