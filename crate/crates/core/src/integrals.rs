//! Closed-form one- and two-electron integrals over normalized s-type
//! Gaussians, and assembly of the overlap / kinetic / repulsion tensors at
//! the primitive and composite levels.
//!
//! A normalized Gaussian with exponent z is (2z/pi)^{3/4} exp(-z |r|^2).
//! All pair integrals depend only on the center distance; the general
//! four-center repulsion integral reduces through the Gaussian product
//! theorem to a single Boys-function evaluation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::layout::OrbitalLayout;
use crate::{Error, Result};

/// Values whose closed form falls below this are stored as exact zeros.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Dense storage cap for the primitive repulsion tensor.
pub const DENSE_PRIMITIVE_CAP: usize = 48;
/// Dense storage cap for the composite repulsion tensor.
pub const DENSE_COMPOSITE_CAP: usize = 12;

pub fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    dist2(a, b).sqrt()
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

/// Overlap of two normalized Gaussians with exponents z1, z2, centers x apart.
pub fn overlap(z1: f64, z2: f64, x: f64) -> f64 {
    let mu = z1 * z2 / (z1 + z2);
    (2.0 * (z1 * z2).sqrt() / (z1 + z2)).powf(1.5) * (-mu * x * x).exp()
}

/// Kinetic-energy integral -1/2 <xi_z1 | del^2 | xi_z2> at center distance x.
/// Magnitude is bounded by (3/2) max(z1, z2).
pub fn kinetic(z1: f64, z2: f64, x: f64) -> f64 {
    let mu = z1 * z2 / (z1 + z2);
    let pre = 2f64.powf(1.5) * (z1 * z2).powf(1.75) / (z1 + z2).powf(2.5);
    pre * (3.0 - 2.0 * mu * x * x) * (-mu * x * x).exp()
}

/// Boys function of order zero, F_0(x) = int_0^1 exp(-x t^2) dt.
///
/// Three branches: a short Taylor series below 1e-6, a cancellation-free
/// series exp(-x) sum_k (2x)^k / (2k+1)!! in the middle range, and the
/// asymptote sqrt(pi/(4x)) once erf(sqrt(x)) is 1 to machine precision.
/// Adjacent branches agree to better than 1e-15.
pub fn boys0(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 1e-6 {
        1.0 - x / 3.0 + x * x / 10.0
    } else if x < 36.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        while term > sum * 1e-17 {
            k += 1.0;
            term *= 2.0 * x / (2.0 * k + 1.0);
            sum += term;
        }
        (-x).exp() * sum
    } else {
        0.5 * (PI / x).sqrt()
    }
}

/// Repulsion of two unit charge clouds xi_z^2 centered x apart.
pub fn coulomb_pair(z: f64, x: f64) -> f64 {
    (4.0 * z / PI).sqrt() * boys0(z * x * x)
}

/// Exchange-type repulsion integral for two Gaussians x apart.
pub fn exchange_pair(z: f64, x: f64) -> f64 {
    (-z * x * x).exp() * coulomb_pair(z, 0.0)
}

/// Mixed repulsion integral: one squared density against a cross density.
pub fn other_pair(z: f64, x: f64) -> f64 {
    (-z * x * x / 2.0).exp() * coulomb_pair(z, x / 2.0)
}

/// General four-center repulsion integral
///
/// ```text
/// int dr ds  xi_z1(r - c1) xi_z2(s - c2) |r - s|^{-1} xi_z3(s - c3) xi_z4(r - c4)
/// ```
///
/// Electron r carries centers (c1, c4), electron s carries (c2, c3). Each
/// electron pair combines into a single spherical charge distribution via the
/// Gaussian product theorem, leaving one Boys call.
pub fn eri_four_center(c: [[f64; 3]; 4], z: [f64; 4]) -> f64 {
    let norm: f64 = z.iter().map(|zi| (2.0 * zi / PI).powf(0.75)).product();
    let p = z[0] + z[3];
    let q = z[1] + z[2];
    let pre_r = (-(z[0] * z[3] / p) * dist2(c[0], c[3])).exp();
    let pre_s = (-(z[1] * z[2] / q) * dist2(c[1], c[2])).exp();
    let pc = combine(c[0], z[0], c[3], z[3]);
    let qc = combine(c[1], z[1], c[2], z[2]);
    let f = boys0(p * q / (p + q) * dist2(pc, qc));
    norm * pre_r * pre_s * 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt()) * f
}

fn combine(a: [f64; 3], za: f64, b: [f64; 3], zb: f64) -> [f64; 3] {
    let w = za + zb;
    [
        (za * a[0] + zb * b[0]) / w,
        (za * a[1] + zb * b[1]) / w,
        (za * a[2] + zb * b[2]) / w,
    ]
}

fn floor_tiny(v: f64) -> f64 {
    if v.abs() < UNDERFLOW_FLOOR {
        0.0
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Primitive,
    Composite,
}

/// Two-electron tensor, indexed as u[(a,b),(c,d)] where electron r carries
/// orbitals (a, d) and electron s carries (b, c).
#[derive(Debug, Clone)]
pub enum UTensor {
    Dense { n: usize, m: DMatrix<f64> },
    Sparse { n: usize, map: BTreeMap<[u16; 4], f64> },
}

impl UTensor {
    pub fn n(&self) -> usize {
        match self {
            UTensor::Dense { n, .. } | UTensor::Sparse { n, .. } => *n,
        }
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        match self {
            UTensor::Dense { n, m } => m[(a * n + b, c * n + d)],
            UTensor::Sparse { map, .. } => {
                let key = canonical_tuple([a as u16, b as u16, c as u16, d as u16]);
                map.get(&key).copied().unwrap_or(0.0)
            }
        }
    }

    pub fn as_dense(&self) -> Result<&DMatrix<f64>> {
        match self {
            UTensor::Dense { m, .. } => Ok(m),
            UTensor::Sparse { n, .. } => Err(Error::DimensionCap {
                dim: *n,
                cap: DENSE_PRIMITIVE_CAP,
            }),
        }
    }
}

/// The eight index images of (a,b,c,d) that leave a real-orbital repulsion
/// integral unchanged: swaps within each electron and the electron exchange.
pub fn symmetry_images(t: [u16; 4]) -> [[u16; 4]; 8] {
    let [a, b, c, d] = t;
    [
        [a, b, c, d],
        [d, b, c, a],
        [a, c, b, d],
        [d, c, b, a],
        [b, a, d, c],
        [b, d, a, c],
        [c, a, d, b],
        [c, d, a, b],
    ]
}

fn canonical_tuple(t: [u16; 4]) -> [u16; 4] {
    *symmetry_images(t).iter().min().unwrap()
}

/// Coefficient tensors S, T, U (and the identically-zero external potential V)
/// over primitive or composite orbitals.
#[derive(Debug, Clone)]
pub struct CoefficientTensors {
    pub level: Level,
    pub n_basis: usize,
    pub s: DMatrix<f64>,
    pub t: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub u: UTensor,
}

/// Assemble S, T, U over the primitive orbitals of a layout.
pub fn assemble_primitive_tensors(layout: &OrbitalLayout) -> CoefficientTensors {
    let n = layout.num_primitives();
    let mut s = DMatrix::zeros(n, n);
    let mut t = DMatrix::zeros(n, n);
    for a in 0..n {
        let (ca, za) = (layout.center_flat(a), layout.exponent_flat(a));
        for b in a..n {
            let (cb, zb) = (layout.center_flat(b), layout.exponent_flat(b));
            let x = dist(ca, cb);
            let sv = floor_tiny(overlap(za, zb, x));
            let tv = floor_tiny(kinetic(za, zb, x));
            s[(a, b)] = sv;
            s[(b, a)] = sv;
            t[(a, b)] = tv;
            t[(b, a)] = tv;
        }
    }

    let eri_at = |t: [u16; 4]| -> f64 {
        let [a, b, c, d] = t.map(usize::from);
        floor_tiny(eri_four_center(
            [
                layout.center_flat(a),
                layout.center_flat(b),
                layout.center_flat(c),
                layout.center_flat(d),
            ],
            [
                layout.exponent_flat(a),
                layout.exponent_flat(b),
                layout.exponent_flat(c),
                layout.exponent_flat(d),
            ],
        ))
    };

    let u = if n <= DENSE_PRIMITIVE_CAP {
        let mut m = DMatrix::zeros(n * n, n * n);
        for a in 0..n as u16 {
            for b in 0..n as u16 {
                for c in 0..n as u16 {
                    for d in 0..n as u16 {
                        let tuple = [a, b, c, d];
                        if canonical_tuple(tuple) != tuple {
                            continue;
                        }
                        let v = eri_at(tuple);
                        for img in symmetry_images(tuple) {
                            let [x, y, z, w] = img.map(usize::from);
                            m[(x * n + y, z * n + w)] = v;
                        }
                    }
                }
            }
        }
        UTensor::Dense { n, m }
    } else {
        // Schwarz screening: |u[(a,b),(c,d)]| <= q(a,d) q(b,c), so only
        // tuples whose electron pairs both survive the underflow floor are
        // evaluated and stored.
        let mut q = DMatrix::zeros(n, n);
        for a in 0..n {
            for d in a..n {
                let v = eri_at([a as u16, a as u16, d as u16, d as u16]).max(0.0).sqrt();
                q[(a, d)] = v;
                q[(d, a)] = v;
            }
        }
        let mut map = BTreeMap::new();
        for a in 0..n as u16 {
            for b in 0..n as u16 {
                for c in 0..n as u16 {
                    for d in 0..n as u16 {
                        let tuple = [a, b, c, d];
                        if canonical_tuple(tuple) != tuple {
                            continue;
                        }
                        if q[(a as usize, d as usize)] * q[(b as usize, c as usize)]
                            < UNDERFLOW_FLOOR
                        {
                            continue;
                        }
                        let v = eri_at(tuple);
                        if v != 0.0 {
                            map.insert(tuple, v);
                        }
                    }
                }
            }
        }
        UTensor::Sparse { n, map }
    };

    CoefficientTensors {
        level: Level::Primitive,
        n_basis: n,
        s,
        t,
        v: DMatrix::zeros(n, n),
        u,
    }
}

/// Contract primitive-level tensors with the composite amplitudes
/// psi_0 = 1/sqrt(2), psi_{p>0} = 1/sqrt(2d).
pub fn compose_tensors(prim: &CoefficientTensors, layout: &OrbitalLayout) -> Result<CoefficientTensors> {
    assert_eq!(prim.level, Level::Primitive, "compose_tensors expects primitive tensors");
    let n = layout.n();
    let np = layout.num_primitives();
    assert_eq!(prim.n_basis, np);

    // contraction matrix C[(i,p), i] = psi_p
    let mut cmat = DMatrix::zeros(np, n);
    for i in 1..=n {
        for p in 0..=layout.d() {
            cmat[(layout.flat(i, p), i - 1)] = layout.amplitude(p);
        }
    }

    let s = cmat.transpose() * &prim.s * &cmat;
    let t = cmat.transpose() * &prim.t * &cmat;
    let v = cmat.transpose() * &prim.v * &cmat;

    let dense_u = prim.u.as_dense()?;
    if n > DENSE_COMPOSITE_CAP {
        return Err(Error::DimensionCap { dim: n, cap: DENSE_COMPOSITE_CAP });
    }
    let kron = kron_dense(&cmat, &cmat);
    let u = kron.transpose() * dense_u * &kron;

    Ok(CoefficientTensors {
        level: Level::Composite,
        n_basis: n,
        s,
        t,
        v,
        u: UTensor::Dense { n, m: u },
    })
}

pub(crate) fn kron_dense(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let v = a[(i, j)];
            if v == 0.0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = v * b[(k, l)];
                }
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TensorFile {
    level: Level,
    n_basis: usize,
    s: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    /// Row-major (a*n+b, c*n+d) two-electron matrix.
    u: Vec<Vec<f64>>,
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn rows_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Validation("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn tensors_to_json(t: &CoefficientTensors) -> Result<String> {
    let dense = t.u.as_dense()?;
    let file = TensorFile {
        level: t.level,
        n_basis: t.n_basis,
        s: matrix_rows(&t.s),
        t: matrix_rows(&t.t),
        v: matrix_rows(&t.v),
        u: matrix_rows(dense),
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

pub fn tensors_from_json(text: &str) -> Result<CoefficientTensors> {
    let file: TensorFile = serde_json::from_str(text)?;
    let n = file.n_basis;
    let s = rows_matrix(&file.s)?;
    let t = rows_matrix(&file.t)?;
    let v = rows_matrix(&file.v)?;
    let u = rows_matrix(&file.u)?;
    if s.shape() != (n, n) || t.shape() != (n, n) || u.shape() != (n * n, n * n) {
        return Err(Error::Validation("tensor dimensions inconsistent with n_basis".into()));
    }
    Ok(CoefficientTensors {
        level: file.level,
        n_basis: n,
        s,
        t,
        v,
        u: UTensor::Dense { n, m: u },
    })
}

/// Write an FCIDUMP-style text dump of composite-level coefficients.
///
/// Two-electron lines hold chemists' (ab|cd) values; with our index
/// convention (ab|cd) = u[(a,c),(d,b)]. One-electron lines are `t a b 0 0`,
/// the core constant is the final `c 0 0 0 0` line. Orbital indices are
/// 1-based.
pub fn write_fcidump(t: &CoefficientTensors, eta: usize, path: impl AsRef<Path>) -> Result<()> {
    let n = t.n_basis;
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "&FCI NORB={n},NELEC={eta},MS2=0,")?;
    writeln!(out, " ! two-electron lines: chemists' (ab|cd); one-electron: a b 0 0; core: 0 0 0 0")?;
    writeln!(out, "&END")?;
    for a in 1..=n {
        for b in 1..=a {
            for c in 1..=a {
                let dmax = if c == a { b } else { c };
                for d in 1..=dmax {
                    let v = t.u.get(a - 1, c - 1, d - 1, b - 1);
                    if v != 0.0 {
                        writeln!(out, "{v:24.16E} {a:3} {b:3} {c:3} {d:3}")?;
                    }
                }
            }
        }
    }
    for a in 1..=n {
        for b in 1..=a {
            let v = t.t[(a - 1, b - 1)] + t.v[(a - 1, b - 1)];
            if v != 0.0 {
                writeln!(out, "{v:24.16E} {a:3} {b:3}   0   0")?;
            }
        }
    }
    writeln!(out, "{:24.16E}   0   0   0   0", 0.0)?;
    Ok(())
}
