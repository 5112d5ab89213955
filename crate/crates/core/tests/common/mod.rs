//! Independent numerical oracles shared by the integration suites. These
//! deliberately avoid every closed-form code path they are used to check.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson quadrature over a fixed 32-panel pre-partition.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn basic<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, eps: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let left = basic(f, a, m);
        let right = basic(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, left, eps / 2.0, depth - 1) + rec(f, m, b, right, eps / 2.0, depth - 1)
        }
    }
    let panels = 32;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = lo + h;
            rec(f, lo, hi, basic(f, lo, hi), eps / panels as f64, 40)
        })
        .sum()
}

/// Overlap of two normalized Gaussians by per-axis quadrature.
pub fn overlap_oracle(z1: f64, z2: f64, x: f64) -> f64 {
    let norm = (2.0 * z1 / std::f64::consts::PI).powf(0.75)
        * (2.0 * z2 / std::f64::consts::PI).powf(0.75);
    let half = 10.0 / z1.min(z2).sqrt();
    let axis = |shift: f64| {
        simpson(
            &|r: f64| (-z1 * r * r).exp() * (-z2 * (r - shift) * (r - shift)).exp(),
            -half - shift.abs(),
            half + shift.abs(),
            1e-12,
        )
    };
    norm * axis(x) * axis(0.0) * axis(0.0)
}

/// Kinetic-energy integral: apply -1/2 del^2 to the second Gaussian
/// analytically, integrate the separable pieces numerically.
pub fn kinetic_oracle(z1: f64, z2: f64, x: f64) -> f64 {
    let norm = (2.0 * z1 / std::f64::consts::PI).powf(0.75)
        * (2.0 * z2 / std::f64::consts::PI).powf(0.75);
    let half = 12.0 / z1.min(z2).sqrt();
    let pair = |shift: f64, weight: &dyn Fn(f64) -> f64| {
        simpson(
            &|r: f64| (-z1 * r * r).exp() * weight(r) * (-z2 * (r - shift) * (r - shift)).exp(),
            -half - shift.abs(),
            half + shift.abs(),
            1e-12,
        )
    };
    let one = |shift: f64| pair(shift, &|_| 1.0);
    let quad = |shift: f64| pair(shift, &|r: f64| (r - shift) * (r - shift));
    let (o_x, o_0, q_x, q_0) = (one(x), one(0.0), quad(x), quad(0.0));
    norm * (3.0 * z2 * o_x * o_0 * o_0
        - 2.0 * z2 * z2 * (q_x * o_0 * o_0 + o_x * q_0 * o_0 + o_x * o_0 * q_0))
}

pub fn boys_oracle(x: f64) -> f64 {
    simpson(&|t: f64| (-x * t * t).exp(), 0.0, 1.0, 1e-13)
}

/// Monte Carlo estimate of a four-center repulsion integral with both
/// electrons importance-sampled from their product-Gaussian densities.
/// Returns (estimate, standard error).
pub fn eri_monte_carlo(
    c: [[f64; 3]; 4],
    z: [f64; 4],
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> (f64, f64) {
    let p = z[0] + z[3];
    let q = z[1] + z[2];
    let centroid = |a: [f64; 3], za: f64, b: [f64; 3], zb: f64| {
        let w = za + zb;
        [
            (za * a[0] + zb * b[0]) / w,
            (za * a[1] + zb * b[1]) / w,
            (za * a[2] + zb * b[2]) / w,
        ]
    };
    let pc = centroid(c[0], z[0], c[3], z[3]);
    let qc = centroid(c[1], z[1], c[2], z[2]);
    let d2 = |a: [f64; 3], b: [f64; 3]| {
        (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
    };
    let pi = std::f64::consts::PI;
    let norm: f64 = z.iter().map(|zi| (2.0 * zi / pi).powf(0.75)).product();
    let prefactor = norm
        * (-(z[0] * z[3] / p) * d2(c[0], c[3])).exp()
        * (-(z[1] * z[2] / q) * d2(c[1], c[2])).exp()
        * (pi / p).powf(1.5)
        * (pi / q).powf(1.5);

    // Box-Muller pairs; per-axis std dev 1/sqrt(2 p)
    let sigma_r = 1.0 / (2.0 * p).sqrt();
    let sigma_s = 1.0 / (2.0 * q).sqrt();
    let normal = move |rng: &mut ChaCha8Rng| {
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (2.0 * pi * u2).cos()
    };
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let r = [
            pc[0] + sigma_r * normal(rng),
            pc[1] + sigma_r * normal(rng),
            pc[2] + sigma_r * normal(rng),
        ];
        let s = [
            qc[0] + sigma_s * normal(rng),
            qc[1] + sigma_s * normal(rng),
            qc[2] + sigma_s * normal(rng),
        ];
        let w = 1.0 / d2(r, s).sqrt();
        sum += w;
        sum_sq += w * w;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (prefactor * mean, prefactor * (var / n).sqrt())
}

/// Direct independent-set test by subset enumeration.
pub fn brute_force_independent_set(n: usize, edges: &[(usize, usize)], k: usize) -> bool {
    (0u64..1 << n).any(|mask| {
        mask.count_ones() as usize == k
            && edges
                .iter()
                .all(|&(i, j)| mask >> (i - 1) & 1 == 0 || mask >> (j - 1) & 1 == 0)
    })
}
