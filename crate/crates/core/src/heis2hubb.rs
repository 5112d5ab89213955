//! The Heisenberg -> Fermi-Hubbard reduction and the second-order
//! effective-Hamiltonian machinery behind it.
//!
//! A coupling kappa on an edge becomes a hopping t = sqrt(u0 kappa / 2); at
//! half filling with a dominant onsite repulsion u0 the double-occupancy
//! penalty leaves one electron per site, and second-order perturbation
//! theory yields sum_edges (2 t^2 / u0) (W - 1) on the spin qubits, where
//! W is the two-qubit swap.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::fockspace::SecondQuantizedHamiltonian;
use crate::instances::{HeisenbergInstance, HubbardInstance};
use crate::{Error, Result};

/// Relative tolerance for the zero-ground-eigenvalue check.
pub const GROUND_TOL: f64 = 1e-9;
/// Pseudo-inverse cutoff for the excited-block inversion, relative to the
/// penalty norm.
pub const PINV_CUTOFF: f64 = 1e-12;

/// Dense operator on qubits.
#[derive(Debug, Clone)]
pub struct QubitOperator {
    pub n_qubits: usize,
    pub matrix: DMatrix<f64>,
}

impl QubitOperator {
    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        QubitOperator { n_qubits, matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn identity_scaled(n_qubits: usize, c: f64) -> Self {
        let dim = 1 << n_qubits;
        QubitOperator { n_qubits, matrix: DMatrix::identity(dim, dim) * c }
    }
}

/// kappa (X_i X_j + Y_i Y_j + Z_i Z_j) summed over edges; qubit i sits at
/// bit i - 1, least significant first.
pub fn heisenberg_qubit_hamiltonian(inst: &HeisenbergInstance) -> QubitOperator {
    let n = inst.graph.n;
    let mut op = QubitOperator::zeros(n);
    for &(i, j, kappa) in &inst.graph.edges {
        add_xyz_coupling(&mut op.matrix, i - 1, j - 1, kappa);
    }
    op
}

fn add_xyz_coupling(m: &mut DMatrix<f64>, bi: usize, bj: usize, kappa: f64) {
    let dim = m.nrows();
    for b in 0..dim as u64 {
        let x = (b >> bi) & 1;
        let y = (b >> bj) & 1;
        // ZZ is diagonal; XX + YY flips both bits when they disagree
        m[(b as usize, b as usize)] += kappa * if x == y { 1.0 } else { -1.0 };
        if x != y {
            let flipped = b ^ (1 << bi) ^ (1 << bj);
            m[(flipped as usize, b as usize)] += 2.0 * kappa;
        }
    }
}

/// Two-qubit swap W = (II + XX + YY + ZZ) / 2 on qubits i, j (1-based).
pub fn w_operator(n_qubits: usize, i: usize, j: usize) -> QubitOperator {
    let mut op = QubitOperator::zeros(n_qubits);
    let dim = 1usize << n_qubits;
    for b in 0..dim as u64 {
        let x = (b >> (i - 1)) & 1;
        let y = (b >> (j - 1)) & 1;
        if x == y {
            op.matrix[(b as usize, b as usize)] += 1.0;
        } else {
            let flipped = b ^ (1 << (i - 1)) ^ (1 << (j - 1));
            op.matrix[(flipped as usize, b as usize)] += 1.0;
        }
    }
    op
}

/// c_eff + sum_edges h_eff W_{i,j} as a qubit matrix.
pub fn effective_target(n: usize, c_eff: f64, h_eff: &BTreeMap<(usize, usize), f64>) -> QubitOperator {
    let mut op = QubitOperator::identity_scaled(n, c_eff);
    for (&(i, j), &h) in h_eff {
        op.matrix += w_operator(n, i, j).matrix * h;
    }
    op
}

/// Outcome of the Heisenberg -> Hubbard reduction.
#[derive(Debug, Clone)]
pub struct ReductionCertificate {
    pub hubbard: HubbardInstance,
    /// Energy offset of the effective Hamiltonian: -(2/u0) sum_edges t^2.
    pub c_eff: f64,
    /// Per-edge effective coupling 2 t^2 / u0 (equals kappa by construction).
    pub h_eff: BTreeMap<(usize, usize), f64>,
    /// Whether u0 clears the n^(14 + 3p + 2q) threshold of the hardness
    /// statement.
    pub u0_hypothesis: bool,
}

/// Encode a Heisenberg instance as a half-filled Hubbard instance with
/// hoppings t = +sqrt(u0 kappa / 2).
pub fn reduce_heisenberg_to_hubbard(inst: &HeisenbergInstance, u0: f64) -> Result<ReductionCertificate> {
    inst.validate()?;
    if !(u0 > 0.0) {
        return Err(Error::Validation("u0 must be positive".into()));
    }
    let n = inst.graph.n;
    let mut edges = Vec::new();
    let mut h_eff = BTreeMap::new();
    let mut sum_t2 = 0.0;
    for &(i, j, kappa) in &inst.graph.edges {
        let t = (u0 * kappa / 2.0).sqrt();
        edges.push((i, j, t));
        h_eff.insert((i, j), 2.0 * t * t / u0);
        sum_t2 += t * t;
    }
    let graph = crate::instances::WeightedGraph::new(n, edges, inst.graph.d)?;
    let hubbard = HubbardInstance::new(graph, u0, n, Some(inst.p), Some(inst.q))?;
    let threshold = (n as f64).powf(14.0 + 3.0 * inst.p + 2.0 * inst.q);
    Ok(ReductionCertificate {
        hubbard,
        c_eff: -2.0 * sum_t2 / u0,
        h_eff,
        u0_hypothesis: u0 >= threshold,
    })
}

/// Ground-space basis of the penalty operator.
#[derive(Debug, Clone)]
pub enum GroundBasis {
    /// Penalty was diagonal: basis bitstrings with zero diagonal, ascending.
    Occupation(Vec<u64>),
    /// General penalty: orthonormal ground vectors as matrix columns, over
    /// the listed sector basis.
    Vectors { sector: Vec<u64>, columns: DMatrix<f64> },
}

/// Second-order effective operator on the ground space of the penalty.
#[derive(Debug, Clone)]
pub struct EffectiveOperator {
    pub basis: GroundBasis,
    pub matrix: DMatrix<f64>,
}

/// Pi0 Hpert Pi0 - Pi0 Hpert Pi1 (Pi1 Hpen Pi1)^{-1} Pi1 Hpert Pi0, as an
/// operator on the ground space of `h_pen` within the given particle sector
/// (full space when `eta` is None).
///
/// Preconditions checked numerically: the penalty ground eigenvalue is 0,
/// every other eigenvalue is at least `delta`, and 2 ||h_pert|| <= delta.
pub fn effective_hamiltonian(
    h_pen: &SecondQuantizedHamiltonian,
    h_pert: &SecondQuantizedHamiltonian,
    delta: f64,
    eta: Option<usize>,
) -> Result<EffectiveOperator> {
    if h_pen.modes() != h_pert.modes() {
        return Err(Error::Validation("mode counts differ".into()));
    }
    let cap = crate::fockspace::DENSE_DIM_CAP;
    let (pen_sm, pert_sm) = match eta {
        Some(eta) => (h_pen.sector_restrict(eta, cap)?, h_pert.sector_restrict(eta, cap)?),
        None => (h_pen.jordan_wigner_matrix()?, h_pert.jordan_wigner_matrix()?),
    };
    let pen = pen_sm
        .matrix
        .as_dense()
        .ok_or(Error::DimensionCap { dim: pen_sm.matrix.dim(), cap })?
        .clone();
    let pert = pert_sm
        .matrix
        .as_dense()
        .ok_or(Error::DimensionCap { dim: pert_sm.matrix.dim(), cap })?
        .clone();

    let pert_norm = crate::spectra::sorted_eigenvalues(&pert)
        .iter()
        .fold(0.0f64, |a, &e| a.max(e.abs()));
    if 2.0 * pert_norm > delta * (1.0 + 1e-12) {
        return Err(Error::Hypothesis(format!(
            "2 ||h_pert|| = {} exceeds delta = {delta}",
            2.0 * pert_norm
        )));
    }

    let dim = pen.nrows();
    let offdiag_max = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| pen[(i, j)].abs())
        .fold(0.0f64, f64::max);
    let scale = pen.abs().max();

    if offdiag_max <= 1e-12 * scale.max(1.0) {
        // diagonal penalty: canonical occupation-ordered ground basis
        let diag: Vec<f64> = (0..dim).map(|k| pen[(k, k)]).collect();
        let tol = GROUND_TOL * scale.max(1.0);
        let ground_min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        if ground_min.abs() > tol {
            return Err(Error::Hypothesis(format!(
                "penalty ground eigenvalue {ground_min} is not zero"
            )));
        }
        let ground: Vec<usize> = (0..dim).filter(|&k| diag[k].abs() <= tol).collect();
        let excited: Vec<usize> = (0..dim).filter(|&k| diag[k].abs() > tol).collect();
        if let Some(&k) = excited.iter().find(|&&k| diag[k] < delta * (1.0 - 1e-9)) {
            return Err(Error::Hypothesis(format!(
                "penalty gap {} below delta = {delta}",
                diag[k]
            )));
        }
        let g = ground.len();
        let mut eff = DMatrix::zeros(g, g);
        for (a, &ga) in ground.iter().enumerate() {
            for (b, &gb) in ground.iter().enumerate() {
                let mut v = pert[(ga, gb)];
                for &e in &excited {
                    v -= pert[(ga, e)] * pert[(e, gb)] / diag[e];
                }
                eff[(a, b)] = v;
            }
        }
        let labels: Vec<u64> = ground.iter().map(|&k| pen_sm.basis[k]).collect();
        Ok(EffectiveOperator { basis: GroundBasis::Occupation(labels), matrix: eff })
    } else {
        let se = pen.clone().symmetric_eigen();
        let tol = GROUND_TOL * scale.max(1.0);
        let ground_min = se.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if ground_min.abs() > tol {
            return Err(Error::Hypothesis(format!(
                "penalty ground eigenvalue {ground_min} is not zero"
            )));
        }
        let ground: Vec<usize> =
            (0..dim).filter(|&k| se.eigenvalues[k].abs() <= tol).collect();
        let excited: Vec<usize> =
            (0..dim).filter(|&k| se.eigenvalues[k].abs() > tol).collect();
        if let Some(&k) = excited.iter().find(|&&k| se.eigenvalues[k] < delta * (1.0 - 1e-9)) {
            return Err(Error::Hypothesis(format!(
                "penalty gap {} below delta = {delta}",
                se.eigenvalues[k]
            )));
        }
        let v0 = se.eigenvectors.select_columns(ground.iter());
        let v1 = se.eigenvectors.select_columns(excited.iter());
        let p00 = v0.transpose() * &pert * &v0;
        let p10 = v1.transpose() * &pert * &v0;
        let cutoff = PINV_CUTOFF * scale.max(1.0);
        let mut inv = DMatrix::zeros(excited.len(), excited.len());
        for (idx, &k) in excited.iter().enumerate() {
            let l = se.eigenvalues[k];
            inv[(idx, idx)] = if l.abs() <= cutoff { 0.0 } else { 1.0 / l };
        }
        let eff = p00 - p10.transpose() * inv * p10;
        Ok(EffectiveOperator {
            basis: GroundBasis::Vectors { sector: pen_sm.basis.clone(), columns: v0 },
            matrix: eff,
        })
    }
}

/// Map a half-filled single-occupancy ground basis to qubit indices: the
/// spin of site i becomes qubit i (down-occupancy = |1>). The occupation
/// ordering is monotone in the qubit ordering, so the matrix carries over
/// without permutation; this checks the labels and returns the qubit count.
pub fn qubit_count_of_single_occupancy(labels: &[u64], n: usize) -> Result<usize> {
    if labels.len() != 1 << n {
        return Err(Error::Validation(format!(
            "ground space dimension {} is not 2^{n}",
            labels.len()
        )));
    }
    for (idx, &b) in labels.iter().enumerate() {
        let mut qubit = 0u64;
        for i in 0..n {
            let pair = (b >> (2 * i)) & 3;
            match pair {
                0b01 => {}                       // spin up = |0>
                0b10 => qubit |= 1 << i,         // spin down = |1>
                _ => {
                    return Err(Error::Validation(format!(
                        "state {b:b} is not singly occupied"
                    )))
                }
            }
        }
        if qubit != idx as u64 {
            return Err(Error::Validation("ground basis is not in qubit order".into()));
        }
    }
    Ok(n)
}
