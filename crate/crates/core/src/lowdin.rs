//! Symmetric (Löwdin) orthonormalization of the primitive overlap matrix,
//! tensor transformation into the orthonormal basis, and the closed-form
//! rounded Hamiltonian coefficients.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix2};

use crate::integrals::{
    self, kron_dense, CoefficientTensors, Level, UTensor, DENSE_PRIMITIVE_CAP,
};
use crate::layout::OrbitalLayout;
use crate::{Error, Result};

/// Orthonormality tolerance used for R S R = I checks.
pub const ORTHO_TOL: f64 = 1e-10;

/// S^{-1/2} together with its block-diagonal approximation.
///
/// `r_aprx` inverts only the edge blocks (closed 2x2 form) and is the
/// identity elsewhere; `r_neg = r - r_aprx` collects everything the block
/// approximation misses.
#[derive(Debug, Clone)]
pub struct OrthoTransform {
    pub r: DMatrix<f64>,
    pub r_aprx: DMatrix<f64>,
    pub r_neg: DMatrix<f64>,
    /// Edge -> (flat index, flat index) of its 2x2 block.
    pub blocks: BTreeMap<(usize, usize), (usize, usize)>,
    /// Edge -> overlap epsilon_{i,j} read off S.
    pub epsilons: BTreeMap<(usize, usize), f64>,
}

/// Closed-form inverse square root of a 2x2 overlap block [[1, e], [e, 1]]:
/// on-diagonal and off-diagonal entries.
pub fn block_inv_sqrt(eps: f64) -> (f64, f64) {
    let a = 1.0 / (1.0 + eps).sqrt();
    let b = 1.0 / (1.0 - eps).sqrt();
    (0.5 * (a + b), 0.5 * (a - b))
}

/// Dense symmetric inverse square root via eigendecomposition.
pub fn inv_sqrt_matrix(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = s.clone().symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 1e-10) {
        return Err(Error::Validation(format!(
            "overlap matrix not positive definite enough: min eigenvalue {min}"
        )));
    }
    let mut d = DMatrix::zeros(s.nrows(), s.ncols());
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        d[(k, k)] = 1.0 / l.sqrt();
    }
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Compute R = S^{-1/2}, its block approximation, and their difference.
pub fn inv_sqrt_overlap(s: &DMatrix<f64>, layout: &OrbitalLayout) -> Result<OrthoTransform> {
    let n = layout.num_primitives();
    assert_eq!(s.nrows(), n, "overlap matrix does not match layout");
    let r = inv_sqrt_matrix(s)?;

    let mut r_aprx = DMatrix::identity(n, n);
    let mut blocks = BTreeMap::new();
    let mut epsilons = BTreeMap::new();
    for (&edge, &((i, p), (j, q))) in &layout.pair_map {
        let a = layout.flat(i, p);
        let b = layout.flat(j, q);
        let eps = s[(a, b)];
        let (on, off) = block_inv_sqrt(eps);
        r_aprx[(a, a)] = on;
        r_aprx[(b, b)] = on;
        r_aprx[(a, b)] = off;
        r_aprx[(b, a)] = off;
        blocks.insert(edge, (a, b));
        epsilons.insert(edge, eps);
    }
    let r_neg = &r - &r_aprx;
    Ok(OrthoTransform { r, r_aprx, r_neg, blocks, epsilons })
}

/// Conjugate primitive tensors into the orthonormal basis:
/// S -> R S R (identity), T -> R T R, U -> (R (x) R) U (R (x) R).
pub fn transform_tensors(prim: &CoefficientTensors, xf: &OrthoTransform) -> Result<CoefficientTensors> {
    assert_eq!(prim.level, Level::Primitive, "transform_tensors expects primitive tensors");
    let n = prim.n_basis;
    assert_eq!(xf.r.nrows(), n);

    let s = &xf.r * &prim.s * &xf.r;
    let max_dev = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (s[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0f64, f64::max);
    if max_dev > ORTHO_TOL {
        return Err(Error::Validation(format!(
            "transformed overlap deviates from identity by {max_dev}"
        )));
    }

    let t = &xf.r * &prim.t * &xf.r;
    let v = &xf.r * &prim.v * &xf.r;
    let dense_u = prim.u.as_dense().map_err(|_| Error::DimensionCap {
        dim: n,
        cap: DENSE_PRIMITIVE_CAP,
    })?;
    let rr = kron_dense(&xf.r, &xf.r);
    let u = &rr * dense_u * &rr;

    Ok(CoefficientTensors {
        level: Level::Primitive,
        n_basis: n,
        s,
        t,
        v,
        u: UTensor::Dense { n, m: u },
    })
}

/// Closed-form coefficients of the rounded Hamiltonian: diagonal kinetic
/// constant, per-edge corrected hoppings, and the potential terms supported
/// on B = union over edges of {i,j}^4.
#[derive(Debug, Clone)]
pub struct RoundedCoefficients {
    pub n: usize,
    pub d: usize,
    pub alpha: f64,
    pub beta: f64,
    /// c_T = (t_alpha(0) + t_beta(0)) / 2.
    pub c_t: f64,
    /// c_U^round: onsite potential coefficient u^round_{i,i,i,i}.
    pub c_u: f64,
    /// Edge -> t^round_{i,j} = -(alpha/4d) sqrt(f(omega)).
    pub t_round: BTreeMap<(usize, usize), f64>,
    /// Edge -> omega_{i,j} = alpha gamma^2.
    pub omega: BTreeMap<(usize, usize), f64>,
    /// Edge -> coulomb / exchange / mixed potential coefficients.
    pub u_coul: BTreeMap<(usize, usize), f64>,
    pub u_exch: BTreeMap<(usize, usize), f64>,
    pub u_other: BTreeMap<(usize, usize), f64>,
}

/// f(omega) = omega^2 exp(-omega); decreasing for omega >= 2.
pub fn f_of_omega(omega: f64) -> f64 {
    omega * omega * (-omega).exp()
}

pub fn rounded_coefficients(layout: &OrbitalLayout) -> RoundedCoefficients {
    let (n, d) = (layout.n(), layout.d());
    let df = d as f64;
    let alpha = layout.alpha;
    let beta = layout.beta;
    let c_t = 0.5 * (integrals::kinetic(alpha, alpha, 0.0) + integrals::kinetic(beta, beta, 0.0));
    let c_u = 0.25 * integrals::coulomb_pair(beta, 0.0)
        + 1.0 / (4.0 * df) * integrals::coulomb_pair(alpha, 0.0);

    let mut t_round = BTreeMap::new();
    let mut omega_map = BTreeMap::new();
    let mut u_coul = BTreeMap::new();
    let mut u_exch = BTreeMap::new();
    let mut u_other = BTreeMap::new();
    for (&edge, &g) in &layout.gamma {
        let omega = alpha * g * g;
        t_round.insert(edge, -(alpha / (4.0 * df)) * f_of_omega(omega).sqrt());
        omega_map.insert(edge, omega);
        let scale = 1.0 / (4.0 * df * df);
        u_coul.insert(edge, scale * integrals::coulomb_pair(alpha, g));
        u_exch.insert(edge, scale * integrals::exchange_pair(alpha, g));
        u_other.insert(edge, scale * integrals::other_pair(alpha, g));
    }

    RoundedCoefficients {
        n,
        d,
        alpha,
        beta,
        c_t,
        c_u,
        t_round,
        omega: omega_map,
        u_coul,
        u_exch,
        u_other,
    }
}

impl RoundedCoefficients {
    fn edge(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        let key = (i.min(j), i.max(j));
        if self.t_round.contains_key(&key) {
            Some(key)
        } else {
            None
        }
    }

    /// u^round_{i,j,k,l}: nonzero only on tuples whose distinct indices are
    /// a single vertex or the endpoints of one edge.
    pub fn u_round(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let mut distinct = vec![i, j, k, l];
        distinct.sort_unstable();
        distinct.dedup();
        match distinct.len() {
            1 => self.c_u,
            2 => {
                let (a, b) = (distinct[0], distinct[1]);
                let Some(edge) = self.edge(a, b) else { return 0.0 };
                let t = (i, j, k, l);
                if t == (a, b, b, a) || t == (b, a, a, b) {
                    self.u_coul[&edge]
                } else if t == (a, a, b, b) || t == (b, b, a, a) || t == (a, b, a, b) || t == (b, a, b, a) {
                    self.u_exch[&edge]
                } else {
                    // the eight remaining arrangements with three equal indices
                    self.u_other[&edge]
                }
            }
            _ => 0.0,
        }
    }

    /// All 4-tuples in B (per edge: the 16 tuples over its endpoints, minus
    /// nothing; onsite tuples are shared between edges and emitted once).
    pub fn support(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out: Vec<(usize, usize, usize, usize)> = Vec::new();
        for i in 1..=self.n {
            out.push((i, i, i, i));
        }
        for &(a, b) in self.t_round.keys() {
            for &i in &[a, b] {
                for &j in &[a, b] {
                    for &k in &[a, b] {
                        for &l in &[a, b] {
                            if !(i == j && j == k && k == l) {
                                out.push((i, j, k, l));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// 2x2 edge block of a primitive-level matrix.
pub fn edge_block(m: &DMatrix<f64>, layout: &OrbitalLayout, edge: (usize, usize)) -> Matrix2<f64> {
    let ((i, p), (j, q)) = layout.pair_map[&edge];
    let a = layout.flat(i, p);
    let b = layout.flat(j, q);
    Matrix2::new(m[(a, a)], m[(a, b)], m[(b, a)], m[(b, b)])
}
