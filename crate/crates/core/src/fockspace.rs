//! Second quantization over spin orbitals: normal-ordered coefficient maps,
//! occupation-basis realization (full space or fixed particle number), the
//! Jordan-Wigner matrix convention, and builders for every Hamiltonian in
//! the reduction chain.
//!
//! Mode convention: spatial orbital i (1-based) with spin sigma maps to mode
//! 2(i-1) + [sigma = -1]; mode k occupies bit k of a basis bitstring, bit 0
//! least significant. Under Jordan-Wigner a_k |b> = (-1)^{popcount below k}
//! |b - e_k>, so occupation-basis realization and the qubit matrix coincide.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::instances::HubbardInstance;
use crate::integrals::{CoefficientTensors, Level};
use crate::lowdin::RoundedCoefficients;
use crate::{Error, Result};

/// Dense realization cap; larger dimensions go to sparse storage.
pub const DENSE_DIM_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

pub const SPINS: [Spin; 2] = [Spin::Up, Spin::Down];

/// Mode index of spatial orbital `i` (1-based) with spin `sigma`.
pub fn mode_index(i: usize, sigma: Spin) -> usize {
    2 * (i - 1) + matches!(sigma, Spin::Down) as usize
}

/// Number-conserving operator as a normal-ordered coefficient map:
/// constant + sum t_{pq} a†_p a_q + sum u_{pqrs} a†_p a†_q a_r a_s.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondQuantizedHamiltonian {
    modes: usize,
    constant: f64,
    one_body: BTreeMap<(usize, usize), f64>,
    two_body: BTreeMap<(usize, usize, usize, usize), f64>,
}

impl SecondQuantizedHamiltonian {
    pub fn new(modes: usize) -> Self {
        SecondQuantizedHamiltonian {
            modes,
            constant: 0.0,
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn add_constant(&mut self, v: f64) {
        self.constant += v;
    }

    /// Accumulate t a†_p a_q.
    pub fn add_one_body(&mut self, p: usize, q: usize, v: f64) {
        debug_assert!(p < self.modes && q < self.modes);
        if v != 0.0 {
            *self.one_body.entry((p, q)).or_insert(0.0) += v;
        }
    }

    /// Accumulate u a†_p a†_q a_r a_s. Terms with p = q or r = s vanish
    /// identically and are dropped.
    pub fn add_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        debug_assert!(p < self.modes && q < self.modes && r < self.modes && s < self.modes);
        if v != 0.0 && p != q && r != s {
            *self.two_body.entry((p, q, r, s)).or_insert(0.0) += v;
        }
    }

    pub fn one_body(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.one_body
    }

    pub fn two_body(&self) -> &BTreeMap<(usize, usize, usize, usize), f64> {
        &self.two_body
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.constant *= c;
        for v in out.one_body.values_mut() {
            *v *= c;
        }
        for v in out.two_body.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::Validation("mode counts differ".into()));
        }
        let mut out = self.clone();
        out.constant -= other.constant;
        for (&k, &v) in &other.one_body {
            *out.one_body.entry(k).or_insert(0.0) -= v;
        }
        for (&k, &v) in &other.two_body {
            *out.two_body.entry(k).or_insert(0.0) -= v;
        }
        Ok(out)
    }

    /// Largest deviation from self-adjointness in the coefficient map.
    ///
    /// Two-body coefficients are compared after antisymmetrization, since
    /// a†p a†q ar as = -a†q a†p ar as describes the same physical term.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut defect = 0.0f64;
        for (&(p, q), &v) in &self.one_body {
            let adj = self.one_body.get(&(q, p)).copied().unwrap_or(0.0);
            defect = defect.max((v - adj).abs());
        }
        let anti = |p: usize, q: usize, r: usize, s: usize| -> f64 {
            let get = |k: (usize, usize, usize, usize)| self.two_body.get(&k).copied().unwrap_or(0.0);
            get((p, q, r, s)) - get((q, p, r, s)) - get((p, q, s, r)) + get((q, p, s, r))
        };
        for &(p, q, r, s) in self.two_body.keys() {
            defect = defect.max((anti(p, q, r, s) - anti(s, r, q, p)).abs());
        }
        defect
    }

    /// Realize over an explicit list of basis bitstrings (sorted ascending).
    pub fn realize_in_basis(&self, basis: &[u64]) -> RealizedMatrix {
        let dim = basis.len();
        let lookup = |state: u64| basis.binary_search(&state).ok();
        if dim <= DENSE_DIM_CAP {
            let mut m = DMatrix::zeros(dim, dim);
            for (col, &state) in basis.iter().enumerate() {
                m[(col, col)] += self.constant;
                self.column_action(state, |target, amp| {
                    if let Some(row) = lookup(target) {
                        m[(row, col)] += amp;
                    }
                });
            }
            RealizedMatrix::Dense(m)
        } else {
            let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
            for (col, &state) in basis.iter().enumerate() {
                if self.constant != 0.0 {
                    triplets.push((col, col, self.constant));
                }
                self.column_action(state, |target, amp| {
                    if let Some(row) = lookup(target) {
                        triplets.push((row, col, amp));
                    }
                });
            }
            RealizedMatrix::Sparse(CsrMatrix::from_triplets(dim, triplets))
        }
    }

    fn column_action(&self, state: u64, mut emit: impl FnMut(u64, f64)) {
        for (&(p, q), &v) in &self.one_body {
            if let Some((s1, sign1)) = annihilate(state, q) {
                if let Some((s2, sign2)) = create(s1, p) {
                    emit(s2, v * sign1 * sign2);
                }
            }
        }
        for (&(p, q, r, s), &v) in &self.two_body {
            if let Some((s1, g1)) = annihilate(state, s) {
                if let Some((s2, g2)) = annihilate(s1, r) {
                    if let Some((s3, g3)) = create(s2, q) {
                        if let Some((s4, g4)) = create(s3, p) {
                            emit(s4, v * g1 * g2 * g3 * g4);
                        }
                    }
                }
            }
        }
    }

    /// Matrix over the fixed-particle-number sector.
    pub fn sector_restrict(&self, eta: usize, cap: usize) -> Result<SectorMatrix> {
        if eta > self.modes {
            return Err(Error::Validation(format!(
                "eta = {eta} exceeds mode count {}",
                self.modes
            )));
        }
        let dim = binomial(self.modes, eta);
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let basis = sector_basis(self.modes, eta);
        let matrix = self.realize_in_basis(&basis);
        Ok(SectorMatrix { modes: self.modes, eta: Some(eta), basis, matrix })
    }

    /// Matrix over the full 2^M occupation basis: the Jordan-Wigner qubit
    /// matrix under the mode ordering above.
    pub fn jordan_wigner_matrix(&self) -> Result<SectorMatrix> {
        if self.modes > 24 {
            return Err(Error::DimensionCap { dim: 1 << self.modes, cap: 1 << 24 });
        }
        let basis: Vec<u64> = (0..(1u64 << self.modes)).collect();
        let matrix = self.realize_in_basis(&basis);
        Ok(SectorMatrix { modes: self.modes, eta: None, basis, matrix })
    }

    /// Export the coefficient map as JSON.
    pub fn to_coefficient_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct File {
            modes: usize,
            constant: f64,
            one_body: Vec<(usize, usize, f64)>,
            two_body: Vec<(usize, usize, usize, usize, f64)>,
        }
        let f = File {
            modes: self.modes,
            constant: self.constant,
            one_body: self.one_body.iter().map(|(&(p, q), &v)| (p, q, v)).collect(),
            two_body: self
                .two_body
                .iter()
                .map(|(&(p, q, r, s), &v)| (p, q, r, s, v))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&f)?;
        s.push('\n');
        Ok(s)
    }

    /// Export realized sector matrix as CSV triplets `row,col,value`.
    pub fn write_sector_triplets(&self, eta: usize, cap: usize, path: impl AsRef<Path>) -> Result<()> {
        let sm = self.sector_restrict(eta, cap)?;
        let mut out = std::fs::File::create(path)?;
        writeln!(out, "row,col,value")?;
        match &sm.matrix {
            RealizedMatrix::Dense(m) => {
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        if m[(i, j)] != 0.0 {
                            writeln!(out, "{i},{j},{:.17e}", m[(i, j)])?;
                        }
                    }
                }
            }
            RealizedMatrix::Sparse(csr) => {
                for (i, j, v) in csr.iter() {
                    writeln!(out, "{i},{j},{v:.17e}")?;
                }
            }
        }
        Ok(())
    }
}

/// a_k on a bitstring: Some((new state, sign)) or None when unoccupied.
pub fn annihilate(state: u64, k: usize) -> Option<(u64, f64)> {
    if state & (1 << k) == 0 {
        None
    } else {
        let parity = (state & ((1u64 << k) - 1)).count_ones();
        Some((state & !(1 << k), if parity % 2 == 0 { 1.0 } else { -1.0 }))
    }
}

/// a†_k on a bitstring.
pub fn create(state: u64, k: usize) -> Option<(u64, f64)> {
    if state & (1 << k) != 0 {
        None
    } else {
        let parity = (state & ((1u64 << k) - 1)).count_ones();
        Some((state | (1 << k), if parity % 2 == 0 { 1.0 } else { -1.0 }))
    }
}

/// Jordan-Wigner matrix of a single annihilation operator over 2^modes.
pub fn annihilation_matrix(modes: usize, k: usize) -> DMatrix<f64> {
    let dim = 1usize << modes;
    let mut m = DMatrix::zeros(dim, dim);
    for state in 0..dim as u64 {
        if let Some((target, sign)) = annihilate(state, k) {
            m[(target as usize, state as usize)] = sign;
        }
    }
    m
}

pub fn creation_matrix(modes: usize, k: usize) -> DMatrix<f64> {
    annihilation_matrix(modes, k).transpose()
}

/// All weight-eta bitstrings over `modes` bits, ascending.
pub fn sector_basis(modes: usize, eta: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(binomial(modes, eta));
    let full = if modes == 64 { u64::MAX } else { (1u64 << modes) - 1 };
    if eta == 0 {
        return vec![0];
    }
    // Gosper's hack over fixed-weight words
    let mut v: u64 = (1u64 << eta) - 1;
    while v <= full {
        out.push(v);
        let t = v | (v - 1);
        let next = (t + 1) | (((!t & t.wrapping_add(1)) - 1) >> (v.trailing_zeros() + 1));
        if next <= v {
            break;
        }
        v = next;
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out as usize
}

#[derive(Debug, Clone)]
pub enum RealizedMatrix {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

impl RealizedMatrix {
    pub fn dim(&self) -> usize {
        match self {
            RealizedMatrix::Dense(m) => m.nrows(),
            RealizedMatrix::Sparse(m) => m.dim,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, RealizedMatrix::Dense(_))
    }

    pub fn as_dense(&self) -> Option<&DMatrix<f64>> {
        match self {
            RealizedMatrix::Dense(m) => Some(m),
            RealizedMatrix::Sparse(_) => None,
        }
    }

    pub fn matvec(&self, x: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        match self {
            RealizedMatrix::Dense(m) => m * x,
            RealizedMatrix::Sparse(m) => m.matvec(x),
        }
    }
}

/// Symmetric sparse matrix in CSR form.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx: Vec<usize> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] = col_idx.len();
                last = Some((r, c));
            }
            row_ptr[r + 1] = col_idx.len();
        }
        for r in 1..=dim {
            row_ptr[r] = row_ptr[r].max(row_ptr[r - 1]);
        }
        CsrMatrix { dim, row_ptr, col_idx, values }
    }

    pub fn matvec(&self, x: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        let mut out = nalgebra::DVector::zeros(self.dim);
        for r in 0..self.dim {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            out[r] = acc;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }
}

/// Realized operator together with its basis labels.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    pub modes: usize,
    pub eta: Option<usize>,
    pub basis: Vec<u64>,
    pub matrix: RealizedMatrix,
}

/// u0 sum_i n_{i,+} n_{i,-}  +  sum_edges t (a†_{i,s} a_{j,s} + h.c.).
pub fn build_hubbard(inst: &HubbardInstance) -> SecondQuantizedHamiltonian {
    let n = inst.graph.n;
    let mut h = SecondQuantizedHamiltonian::new(2 * n);
    for i in 1..=n {
        let up = mode_index(i, Spin::Up);
        let dn = mode_index(i, Spin::Down);
        h.add_two_body(up, dn, dn, up, inst.u0);
    }
    for &(i, j, t) in &inst.graph.edges {
        for sigma in SPINS {
            h.add_one_body(mode_index(i, sigma), mode_index(j, sigma), t);
            h.add_one_body(mode_index(j, sigma), mode_index(i, sigma), t);
        }
    }
    h
}

/// Onsite penalty alone: u0 sum_i n_{i,+} n_{i,-}.
pub fn build_hubbard_penalty(n: usize, u0: f64) -> SecondQuantizedHamiltonian {
    let mut h = SecondQuantizedHamiltonian::new(2 * n);
    for i in 1..=n {
        let up = mode_index(i, Spin::Up);
        let dn = mode_index(i, Spin::Down);
        h.add_two_body(up, dn, dn, up, u0);
    }
    h
}

/// Hopping part alone.
pub fn build_hubbard_hopping(inst: &HubbardInstance) -> SecondQuantizedHamiltonian {
    let mut h = SecondQuantizedHamiltonian::new(2 * inst.graph.n);
    for &(i, j, t) in &inst.graph.edges {
        for sigma in SPINS {
            h.add_one_body(mode_index(i, sigma), mode_index(j, sigma), t);
            h.add_one_body(mode_index(j, sigma), mode_index(i, sigma), t);
        }
    }
    h
}

/// Electronic-structure Hamiltonian from composite-level tensors:
/// sum over sigma of (t + v)_{ij} a†_{i sigma} a_{j sigma}, plus
/// (1/2) sum u_{ijkl} a†_{i tau} a†_{j sigma} a_{k sigma} a_{l tau}.
pub fn build_es_hamiltonian(tensors: &CoefficientTensors) -> Result<SecondQuantizedHamiltonian> {
    if tensors.level != Level::Composite {
        return Err(Error::Validation("electronic-structure builder needs composite tensors".into()));
    }
    let n = tensors.n_basis;
    let mut h = SecondQuantizedHamiltonian::new(2 * n);
    for i in 1..=n {
        for j in 1..=n {
            let tij = tensors.t[(i - 1, j - 1)] + tensors.v[(i - 1, j - 1)];
            for sigma in SPINS {
                h.add_one_body(mode_index(i, sigma), mode_index(j, sigma), tij);
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let u = tensors.u.get(i - 1, j - 1, k - 1, l - 1);
                    if u == 0.0 {
                        continue;
                    }
                    for tau in SPINS {
                        for sigma in SPINS {
                            h.add_two_body(
                                mode_index(i, tau),
                                mode_index(j, sigma),
                                mode_index(k, sigma),
                                mode_index(l, tau),
                                0.5 * u,
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(h)
}

/// Rounded Hamiltonian: diagonal kinetic constant, corrected edge hoppings,
/// and the B-supported potential terms.
pub fn build_rounded(rc: &RoundedCoefficients) -> SecondQuantizedHamiltonian {
    let mut h = SecondQuantizedHamiltonian::new(2 * rc.n);
    for i in 1..=rc.n {
        for sigma in SPINS {
            let m = mode_index(i, sigma);
            h.add_one_body(m, m, rc.c_t);
        }
    }
    for (&(i, j), &t) in &rc.t_round {
        for sigma in SPINS {
            h.add_one_body(mode_index(i, sigma), mode_index(j, sigma), t);
            h.add_one_body(mode_index(j, sigma), mode_index(i, sigma), t);
        }
    }
    for (i, j, k, l) in rc.support() {
        let u = rc.u_round(i, j, k, l);
        if u == 0.0 {
            continue;
        }
        for tau in SPINS {
            for sigma in SPINS {
                h.add_two_body(
                    mode_index(i, tau),
                    mode_index(j, sigma),
                    mode_index(k, sigma),
                    mode_index(l, tau),
                    0.5 * u,
                );
            }
        }
    }
    h
}

/// Main Hamiltonian: onsite double-occupancy penalty u^Coul_beta(0)/4 plus
/// the rounded edge hoppings.
pub fn build_main(rc: &RoundedCoefficients) -> SecondQuantizedHamiltonian {
    let c_main = crate::integrals::coulomb_pair(rc.beta, 0.0) / 4.0;
    let mut h = SecondQuantizedHamiltonian::new(2 * rc.n);
    for i in 1..=rc.n {
        let up = mode_index(i, Spin::Up);
        let dn = mode_index(i, Spin::Down);
        h.add_two_body(up, dn, dn, up, c_main);
    }
    for (&(i, j), &t) in &rc.t_round {
        for sigma in SPINS {
            h.add_one_body(mode_index(i, sigma), mode_index(j, sigma), t);
            h.add_one_body(mode_index(j, sigma), mode_index(i, sigma), t);
        }
    }
    h
}

pub fn main_onsite_coefficient(rc: &RoundedCoefficients) -> f64 {
    crate::integrals::coulomb_pair(rc.beta, 0.0) / 4.0
}

/// Classical (diagonal) Hamiltonian; requires a uniform close distance:
/// u1 sum_i n_{i,+} n_{i,-} + u2 sum_edges sum_{sigma tau} n_{i sigma} n_{j tau}.
pub fn build_classical(
    layout: &crate::layout::OrbitalLayout,
    rc: &RoundedCoefficients,
) -> Result<SecondQuantizedHamiltonian> {
    let gamma = layout
        .uniform_gamma()
        .ok_or_else(|| Error::Validation("classical Hamiltonian needs uniform gamma".into()))?;
    let u1 = rc.c_u;
    let d = rc.d as f64;
    let u2 = 1.0 / (4.0 * d * d) * crate::integrals::coulomb_pair(rc.alpha, gamma);
    Ok(build_classical_from(rc.n, &layout.graph.edge_keys(), u1, u2))
}

pub fn build_classical_from(
    n: usize,
    edges: &[(usize, usize)],
    u1: f64,
    u2: f64,
) -> SecondQuantizedHamiltonian {
    let mut h = SecondQuantizedHamiltonian::new(2 * n);
    for i in 1..=n {
        let up = mode_index(i, Spin::Up);
        let dn = mode_index(i, Spin::Down);
        h.add_two_body(up, dn, dn, up, u1);
    }
    for &(i, j) in edges {
        for sigma in SPINS {
            for tau in SPINS {
                let a = mode_index(i, sigma);
                let b = mode_index(j, tau);
                h.add_two_body(a, b, b, a, u2);
            }
        }
    }
    h
}

/// Total number operator.
pub fn number_operator(modes: usize) -> SecondQuantizedHamiltonian {
    let mut h = SecondQuantizedHamiltonian::new(modes);
    for m in 0..modes {
        h.add_one_body(m, m, 1.0);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::WeightedGraph;

    fn two_site_hubbard(u0: f64, t: f64) -> HubbardInstance {
        let g = WeightedGraph::new(2, vec![(1, 2, t)], 1).unwrap();
        HubbardInstance::new(g, u0, 2, None, None).unwrap()
    }

    fn dense_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn number_operator_pattern() {
        // n_{1,up} over two modes: diagonal by bit 0
        let mut h = SecondQuantizedHamiltonian::new(2);
        h.add_one_body(mode_index(1, Spin::Up), mode_index(1, Spin::Up), 1.0);
        let m = h.jordan_wigner_matrix().unwrap();
        let d = m.matrix.as_dense().unwrap();
        let diag: Vec<f64> = (0..4).map(|k| d[(k, k)]).collect();
        assert_eq!(diag, vec![0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn hopping_spectrum() {
        let mut h = SecondQuantizedHamiltonian::new(2);
        h.add_one_body(0, 1, 1.0);
        h.add_one_body(1, 0, 1.0);
        let m = h.jordan_wigner_matrix().unwrap();
        let e = dense_eigenvalues(m.matrix.as_dense().unwrap());
        let expect = [-1.0, 0.0, 0.0, 1.0];
        for (a, b) in e.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hopping_spectra_integer_spaced() {
        // a†_i a_j + h.c. has eigenvalues in {-1, 0, 1} for every mode pair
        for modes in [2usize, 4, 6] {
            for i in 0..modes {
                for j in (i + 1)..modes {
                    let mut h = SecondQuantizedHamiltonian::new(modes);
                    h.add_one_body(i, j, 1.0);
                    h.add_one_body(j, i, 1.0);
                    let m = h.jordan_wigner_matrix().unwrap();
                    let d = m.matrix.as_dense().unwrap();
                    assert!((d - d.transpose()).abs().max() < 1e-14);
                    for e in dense_eigenvalues(d) {
                        assert!((e - e.round()).abs() < 1e-12, "modes {modes} ({i},{j}): {e}");
                    }
                }
            }
        }
    }

    #[test]
    fn exports_write_coefficients_and_triplets() {
        let inst = two_site_hubbard(8.0, 1.0);
        let h = build_hubbard(&inst);
        let json = h.to_coefficient_json().unwrap();
        assert!(json.contains("two_body"));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["modes"], 4);
        let mut path = std::env::temp_dir();
        path.push(format!("spinchem-triplets-{}.csv", std::process::id()));
        h.write_sector_triplets(2, 1000, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert!(text.starts_with("row,col,value"));
        assert!(text.lines().count() > 5);
    }

    #[test]
    fn canonical_anticommutators() {
        for modes in [2, 4, 6, 8] {
            for i in 0..modes {
                for j in 0..modes {
                    let ai = annihilation_matrix(modes, i);
                    let aj_dag = creation_matrix(modes, j);
                    let anti = &ai * &aj_dag + &aj_dag * &ai;
                    let want = if i == j { 1.0 } else { 0.0 };
                    let dim = 1 << modes;
                    let defect = (&anti - DMatrix::identity(dim, dim) * want).abs().max();
                    assert!(defect < 1e-14, "{{a_{i}, a†_{j}}} defect {defect}");
                    let aj = annihilation_matrix(modes, j);
                    assert!((&ai * &aj + &aj * &ai).abs().max() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn two_site_hubbard_ground_energy() {
        let inst = two_site_hubbard(8.0, 1.0);
        let h = build_hubbard(&inst);
        let sm = h.sector_restrict(2, 10_000).unwrap();
        assert_eq!(sm.basis.len(), 6);
        let e = dense_eigenvalues(sm.matrix.as_dense().unwrap());
        let exact = (8.0 - (64.0f64 + 16.0).sqrt()) / 2.0;
        assert!((e[0] - exact).abs() < 1e-12, "ground {} vs {exact}", e[0]);
    }

    #[test]
    fn hubbard_no_hopping_half_filling() {
        let g = WeightedGraph::new(3, vec![(1, 2, 0.0), (2, 3, 0.0)], 2).unwrap();
        let inst = HubbardInstance::new(g, 5.0, 3, None, None).unwrap();
        let h = build_hubbard(&inst);
        let sm = h.sector_restrict(3, 10_000).unwrap();
        let e = dense_eigenvalues(sm.matrix.as_dense().unwrap());
        assert!(e[0].abs() < 1e-12);
    }

    #[test]
    fn single_site_double_occupancy() {
        let h = build_hubbard_penalty(1, 7.5);
        let sm = h.sector_restrict(2, 100).unwrap();
        assert_eq!(sm.basis.len(), 1);
        let d = sm.matrix.as_dense().unwrap();
        assert!((d[(0, 0)] - 7.5).abs() < 1e-12);
    }

    #[test]
    fn sector_sizes() {
        // eta = 0 and eta = M are one-dimensional
        let h = build_hubbard_penalty(2, 3.0);
        let s0 = h.sector_restrict(0, 100).unwrap();
        assert_eq!(s0.basis.len(), 1);
        assert!((s0.matrix.as_dense().unwrap()[(0, 0)]).abs() < 1e-12);
        let s4 = h.sector_restrict(4, 100).unwrap();
        assert_eq!(s4.basis.len(), 1);
        // full state: both sites doubly occupied
        assert!((s4.matrix.as_dense().unwrap()[(0, 0)] - 6.0).abs() < 1e-12);
        // half-filled two-site Hubbard: 4 of 6 basis states singly occupied
        let singly = sector_basis(4, 2)
            .iter()
            .filter(|&&b| (1..=2).all(|i| ((b >> (2 * (i - 1))) & 3) != 3))
            .count();
        assert_eq!(singly, 4);
    }

    #[test]
    fn es_hamiltonian_diagonal_t_is_subset_sums() {
        use crate::integrals::UTensor;
        let n = 2;
        let t = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.25, 1.0]));
        let tensors = CoefficientTensors {
            level: Level::Composite,
            n_basis: n,
            s: DMatrix::identity(n, n),
            t,
            v: DMatrix::zeros(n, n),
            u: UTensor::Dense { n, m: DMatrix::zeros(n * n, n * n) },
        };
        let h = build_es_hamiltonian(&tensors).unwrap();
        let m = h.jordan_wigner_matrix().unwrap();
        let e = dense_eigenvalues(m.matrix.as_dense().unwrap());
        // subset sums over modes (0.25, 0.25, 1, 1)
        let mut expect: Vec<f64> = (0..16u32)
            .map(|b| {
                let mut s = 0.0;
                if b & 1 != 0 { s += 0.25 }
                if b & 2 != 0 { s += 0.25 }
                if b & 4 != 0 { s += 1.0 }
                if b & 8 != 0 { s += 1.0 }
                s
            })
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn builders_commute_with_number_operator() {
        let inst = two_site_hubbard(4.0, 0.7);
        let h = build_hubbard(&inst);
        let nop = number_operator(4);
        let hm = h.jordan_wigner_matrix().unwrap();
        let nm = nop.jordan_wigner_matrix().unwrap();
        let a = hm.matrix.as_dense().unwrap();
        let b = nm.matrix.as_dense().unwrap();
        assert!((a * b - b * a).abs().max() < 1e-12);
    }

    #[test]
    fn hubbard_spin_flip_spectrum_invariant() {
        let g = WeightedGraph::new(3, vec![(1, 2, 0.5), (2, 3, 0.9)], 2).unwrap();
        let inst = HubbardInstance::new(g.clone(), 6.0, 3, None, None).unwrap();
        let h = build_hubbard(&inst);
        // flipped: exchange up/down mode roles
        let mut flipped = SecondQuantizedHamiltonian::new(6);
        for i in 1..=3 {
            let up = mode_index(i, Spin::Down);
            let dn = mode_index(i, Spin::Up);
            flipped.add_two_body(up, dn, dn, up, 6.0);
        }
        for &(i, j, t) in &g.edges {
            for sigma in [Spin::Down, Spin::Up] {
                flipped.add_one_body(mode_index(i, sigma), mode_index(j, sigma), t);
                flipped.add_one_body(mode_index(j, sigma), mode_index(i, sigma), t);
            }
        }
        let e1 = dense_eigenvalues(h.sector_restrict(3, 1000).unwrap().matrix.as_dense().unwrap());
        let e2 =
            dense_eigenvalues(flipped.sector_restrict(3, 1000).unwrap().matrix.as_dense().unwrap());
        for (a, b) in e1.iter().zip(e2.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_hamiltonian_is_diagonal() {
        let h = build_classical_from(3, &[(1, 2), (2, 3)], 5.0, 0.25);
        let sm = h.sector_restrict(2, 1000).unwrap();
        let d = sm.matrix.as_dense().unwrap();
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                if i != j {
                    assert_eq!(d[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn rounded_diagonal_shift_is_eta_ct() {
        // with no edges, H_round minus its potential part is c_T * N
        let g = WeightedGraph::new(3, vec![], 2).unwrap();
        let layout = crate::layout::place_centers_uniform(
            &g,
            1.0,
            crate::layout::LayoutParams { alpha: 1.0, beta: 2.0, big_gamma: 60.0 },
        )
        .unwrap();
        let rc = crate::lowdin::rounded_coefficients(&layout);
        let mut kinetic_only = build_rounded(&rc);
        kinetic_only.two_body.clear();
        for eta in [0usize, 1, 2, 3] {
            let sm = kinetic_only.sector_restrict(eta, 1000).unwrap();
            let d = sm.matrix.as_dense().unwrap();
            for k in 0..d.nrows() {
                assert!((d[(k, k)] - eta as f64 * rc.c_t).abs() < 1e-12);
            }
        }
        // and the full no-edge operator is c_T N plus the onsite quartic
        let h = build_rounded(&rc);
        let full = h.jordan_wigner_matrix().unwrap();
        let d = full.matrix.as_dense().unwrap();
        for state in 0..d.nrows() as u64 {
            let occ = state.count_ones() as f64;
            let docc = (0..3).filter(|i| (state >> (2 * i)) & 3 == 3).count() as f64;
            let expect = occ * rc.c_t + docc * rc.c_u;
            assert!((d[(state as usize, state as usize)] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn hermiticity_defect_detects_broken_maps() {
        let inst = two_site_hubbard(5.0, 0.3);
        let h = build_hubbard(&inst);
        assert_eq!(h.hermiticity_defect(), 0.0);
        let mut broken = h.clone();
        broken.add_one_body(0, 2, 0.5); // no conjugate partner
        assert!(broken.hermiticity_defect() > 0.4);
        let mut broken2 = h;
        broken2.add_two_body(0, 1, 2, 3, 0.25);
        assert!(broken2.hermiticity_defect() > 0.2);
    }

    #[test]
    fn main_without_edges_counts_double_occupancy() {
        let g = WeightedGraph::new(2, vec![], 1).unwrap();
        let layout = crate::layout::place_centers_uniform(
            &g,
            1.0,
            crate::layout::LayoutParams { alpha: 1.0, beta: 4.0, big_gamma: 50.0 },
        )
        .unwrap();
        let rc = crate::lowdin::rounded_coefficients(&layout);
        let h = build_main(&rc);
        let c_main = main_onsite_coefficient(&rc);
        let m = h.jordan_wigner_matrix().unwrap();
        let d = m.matrix.as_dense().unwrap();
        for state in 0..16u64 {
            let docc = (0..2).filter(|i| (state >> (2 * i)) & 3 == 3).count();
            assert!((d[(state as usize, state as usize)] - docc as f64 * c_main).abs() < 1e-12);
        }
    }

    #[test]
    fn hermiticity_of_builders() {
        let inst = two_site_hubbard(3.0, 0.4);
        for h in [build_hubbard(&inst), build_hubbard_hopping(&inst)] {
            let m = h.jordan_wigner_matrix().unwrap();
            let d = m.matrix.as_dense().unwrap();
            assert!((d - d.transpose()).abs().max() < 1e-14);
        }
    }

    #[test]
    fn binomial_and_sector_basis() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(sector_basis(4, 2).len(), 6);
        assert_eq!(sector_basis(4, 0), vec![0]);
        let b = sector_basis(6, 3);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.iter().all(|x| x.count_ones() == 3));
    }
}
