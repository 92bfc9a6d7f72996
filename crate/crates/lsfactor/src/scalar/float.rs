//! Complex floating-point mirror of the exact scalars.

use num_complex::Complex64;

use super::poly::Poly;
use super::ratfunc::RatFunc;

pub fn poly_to_complex(p: &Poly) -> Vec<Complex64> {
    p.coeffs().iter().map(|c| c.to_complex()).collect()
}

pub fn eval_complex(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, x| acc * z + x)
}

pub fn ratfunc_eval(f: &RatFunc, z: Complex64) -> Complex64 {
    eval_complex(&poly_to_complex(f.num()), z) / eval_complex(&poly_to_complex(f.den()), z)
}

/// All complex roots by simultaneous Aberth iteration.
pub fn roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = c.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|i| monic[i] * i as f64).collect();
    let radius = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let p = eval_complex(&monic, z[i]);
            let dp = eval_complex(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            delta = delta.max(w.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// `true` when the two root multisets agree to `tol` under greedy matching.
pub fn same_roots(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = (0..b.len()).filter(|&j| !used[j]).min_by(|&i, &j| {
            (b[i] - x)
                .norm()
                .partial_cmp(&(b[j] - x).norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        match best {
            Some(j) if (b[j] - x).norm() <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}
