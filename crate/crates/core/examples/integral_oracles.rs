//! The closed-form Gaussian integrals next to brute numerical values: a
//! trapezoid scan for the Boys function and pair overlaps, and a quick
//! Monte Carlo estimate for a four-center repulsion integral.

use rand::Rng;
use rand::SeedableRng;

use spinchem::integrals::{boys0, coulomb_pair, eri_four_center, kinetic, overlap};

fn main() {
    println!("{:>8} {:>18} {:>18} {:>10}", "x", "boys0 closed", "trapezoid", "diff");
    for x in [0.0f64, 0.5, 1.0, 5.0, 20.0, 40.0] {
        let steps = 40_000;
        let h = 1.0 / steps as f64;
        let mut acc = 0.5 * (1.0 + (-x).exp());
        for k in 1..steps {
            let t = k as f64 * h;
            acc += (-x * t * t).exp();
        }
        let quad = acc * h;
        println!("{x:>8.2} {:>18.12} {quad:>18.12} {:>10.2e}", boys0(x), (boys0(x) - quad).abs());
    }

    println!("\npair integrals at z1 = 1, z2 = 3:");
    for x in [0.0, 0.7, 1.5, 3.0] {
        println!(
            "  x = {x:.1}: overlap {:+.10}  kinetic {:+.10}  coulomb(z=1) {:+.10}",
            overlap(1.0, 3.0, x),
            kinetic(1.0, 3.0, x),
            coulomb_pair(1.0, x)
        );
    }

    // four-center integral vs a crude Monte Carlo mean over the product
    // Gaussian densities of each electron
    let c = [
        [0.0, 0.0, 0.0],
        [1.0, 0.3, 0.0],
        [0.2, 1.1, 0.4],
        [0.9, -0.2, 0.3],
    ];
    let z = [1.0, 1.7, 0.8, 1.3];
    let closed = eri_four_center(c, z);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let p = z[0] + z[3];
    let q = z[1] + z[2];
    let mix = |a: [f64; 3], za: f64, b: [f64; 3], zb: f64| {
        let w = za + zb;
        [(za * a[0] + zb * b[0]) / w, (za * a[1] + zb * b[1]) / w, (za * a[2] + zb * b[2]) / w]
    };
    let pc = mix(c[0], z[0], c[3], z[3]);
    let qc = mix(c[1], z[1], c[2], z[2]);
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
    let mut normal = |sigma: f64| {
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        sigma * (-2.0 * u1.ln()).sqrt() * (2.0 * pi * u2).cos()
    };
    let samples = 200_000;
    let mut acc = 0.0;
    for _ in 0..samples {
        let sr = 1.0 / (2.0 * p).sqrt();
        let ss = 1.0 / (2.0 * q).sqrt();
        let r = [pc[0] + normal(sr), pc[1] + normal(sr), pc[2] + normal(sr)];
        let s = [qc[0] + normal(ss), qc[1] + normal(ss), qc[2] + normal(ss)];
        acc += 1.0 / d2(r, s).sqrt();
    }
    let estimate = prefactor * acc / samples as f64;
    println!("\nfour-center repulsion integral:");
    println!("  closed form: {closed:.8}");
    println!("  monte carlo: {estimate:.8}  ({samples} samples)");
}
