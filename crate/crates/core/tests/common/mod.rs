//! Independent reference implementations shared by the integration tests and
//! the acceptance target. Nothing here calls into the library's numerics.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use chi2nn::network::SingleHiddenLayer;

pub fn data_root() -> PathBuf {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    p.canonicalize().unwrap_or(p)
}

// ---------------------------------------------------------------- chi-square

/// Γ(k/2) for a positive integer k, by the half-integer recursion.
pub fn gamma_half(k: u32) -> f64 {
    let (mut g, mut a) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = k as f64 / 2.0;
    while a < target {
        g *= a;
        a += 1.0;
    }
    g
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let j = j as f64;
                let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Density of χ²(k) after the substitution t = u², i.e. f(u²)·2u.
fn chi2_density_u(u: f64, k: u32) -> f64 {
    let kf = k as f64;
    2.0 * u.powf(kf - 1.0) * (-u * u / 2.0).exp() / (2f64.powf(kf / 2.0) * gamma_half(k))
}

pub fn chi2_density(t: f64, k: u32) -> f64 {
    let kf = k as f64;
    t.powf(kf / 2.0 - 1.0) * (-t / 2.0).exp() / (2f64.powf(kf / 2.0) * gamma_half(k))
}

/// P(X ≤ t) by composite 20-point Gauss-Legendre quadrature in u = √t.
pub fn chi2_cdf_quadrature(t: f64, k: u32) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let rule = gauss_legendre(20);
    let upper = t.sqrt();
    let panels = ((upper / 0.05).ceil() as usize).max(1);
    let h = upper / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for &(x, w) in &rule {
            total += w * chi2_density_u(mid + 0.5 * h * x, k);
        }
    }
    total * 0.5 * h
}

/// Upper-α quantile: Newton iteration on the quadrature CDF.
pub fn chi2_quantile_oracle(k: u32, alpha: f64) -> f64 {
    let kf = k as f64;
    // Wilson-Hilferty start
    let z = normal_upper(alpha);
    let c = 2.0 / (9.0 * kf);
    let mut t = (kf * (1.0 - c + z * c.sqrt()).powi(3)).max(1e-3);
    for _ in 0..100 {
        let step = (chi2_cdf_quadrature(t, k) - (1.0 - alpha)) / chi2_density(t, k);
        let next = (t - step).max(t / 4.0);
        if (next - t).abs() < 1e-13 * t.max(1.0) {
            return next;
        }
        t = next;
    }
    t
}

/// Rough standard-normal upper quantile, only used as a starting point.
fn normal_upper(alpha: f64) -> f64 {
    let p = alpha.min(1.0 - alpha);
    let t = (-2.0 * p.ln()).sqrt();
    let z = t - (2.515517 + 0.802853 * t + 0.010328 * t * t)
        / (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t);
    if alpha < 0.5 {
        z
    } else {
        -z
    }
}

// ------------------------------------------------------------------ binning

/// Section of `x` by checking every hyper-rectangle of a `k`-per-dimension
/// grid on `[lo, hi]`. Values are clamped first; the last section along each
/// dimension is closed on the right; zero-spread dimensions collapse to 0.
pub fn brute_force_section(x: &[f64], lo: &[f64], hi: &[f64], k: usize) -> usize {
    let dims = x.len();
    let total = k.pow(dims as u32);
    let mut found = None;
    for index in 0..total {
        let mut rest = index;
        let mut inside = true;
        for d in 0..dims {
            let coord = rest % k;
            rest /= k;
            if lo[d] >= hi[d] {
                inside &= coord == 0;
                continue;
            }
            let v = x[d].clamp(lo[d], hi[d]);
            let w = (hi[d] - lo[d]) / k as f64;
            let left = v - lo[d] >= coord as f64 * w;
            let right = if coord == k - 1 {
                v <= hi[d]
            } else {
                v - lo[d] < (coord + 1) as f64 * w
            };
            inside &= left && right;
        }
        if inside {
            assert!(found.is_none(), "point {x:?} is in two sections");
            found = Some(index);
        }
    }
    found.expect("point in no section")
}

// ------------------------------------------------------------------ network

/// Weights in plain nested vectors: `w_in[k][j]`, `theta[j]`, `w_out[j]`, `gamma`.
#[derive(Debug, Clone)]
pub struct PlainNet {
    pub w_in: Vec<Vec<f64>>,
    pub theta: Vec<f64>,
    pub w_out: Vec<f64>,
    pub gamma: f64,
}

impl PlainNet {
    pub fn from_params(p: &SingleHiddenLayer) -> Self {
        let (r, h) = p.input_weights.dim();
        Self {
            w_in: (0..r).map(|k| (0..h).map(|j| p.input_weights[[k, j]]).collect()).collect(),
            theta: p.hidden_thresholds.to_vec(),
            w_out: p.output_weights.to_vec(),
            gamma: p.output_threshold,
        }
    }

    pub fn hidden(&self, x: &[f64]) -> Vec<f64> {
        let h = self.theta.len();
        let mut out = vec![0.0; h];
        for j in 0..h {
            let mut s = self.theta[j];
            for k in 0..x.len() {
                s += self.w_in[k][j] * x[k];
            }
            out[j] = 1.0 / (1.0 + (-s).exp());
        }
        out
    }

    pub fn preactivation(&self, x: &[f64]) -> f64 {
        let o = self.hidden(x);
        let mut s = self.gamma;
        for j in 0..o.len() {
            s += self.w_out[j] * o[j];
        }
        s
    }

    pub fn hard(&self, x: &[f64]) -> u8 {
        u8::from(self.preactivation(x) > 0.5)
    }
}

pub fn oracle_v(net: &PlainNet, xs: &[Vec<f64>], sections: &[usize], m: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    for (x, &s) in xs.iter().zip(sections) {
        if net.hard(x) == 1 {
            v[s] += 1.0;
        }
    }
    v
}

pub fn oracle_error(v: &[f64], positives: &[usize], n: usize) -> f64 {
    let n = n as f64;
    let mut e = 0.0;
    for i in 0..v.len() {
        let d = v[i] / n - positives[i] as f64 / n;
        e += d * d;
    }
    e / 2.0
}

/// η with zero-expectation sections either skipped or forcing infinity.
pub fn oracle_eta(v: &[f64], positives: &[usize], strict: bool) -> Option<(f64, u32)> {
    let mut eta = 0.0;
    let mut used = 0u32;
    let mut blown = false;
    for i in 0..v.len() {
        let m = positives[i] as f64;
        if positives[i] > 0 {
            eta += (v[i] - m) * (v[i] - m) / m;
            used += 1;
        } else if strict && v[i] > 0.0 {
            blown = true;
        }
    }
    if used == 0 {
        return None;
    }
    let df = if used > 1 { used - 1 } else { 1 };
    Some((if blown { f64::INFINITY } else { eta }, df))
}

/// Relative discrepancy with an absolute floor for entries near zero.
pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

// ---------------------------------------------------------------- gradients

/// Central differences of `f` with respect to every parameter, in
/// serialization order.
pub fn central_difference<F: Fn(&SingleHiddenLayer) -> f64>(
    net: &SingleHiddenLayer,
    f: F,
    h: f64,
) -> Vec<f64> {
    let count = net.param_count();
    (0..count)
        .map(|i| {
            let mut plus = net.clone();
            let mut minus = net.clone();
            *plus.params_mut().nth(i).unwrap() += h;
            *minus.params_mut().nth(i).unwrap() -= h;
            (f(&plus) - f(&minus)) / (2.0 * h)
        })
        .collect()
}

/// Worst component-wise relative error, with the floor tied to the largest
/// gradient entry so that entries that are zero up to rounding do not count.
pub fn worst_relative_error(analytic: &SingleHiddenLayer, numeric: &[f64]) -> f64 {
    let scale = numeric.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    analytic
        .params()
        .zip(numeric)
        .map(|(&a, &b)| rel_err(a, b, 1e-6 * scale.max(1e-300)))
        .fold(0.0, f64::max)
}
