//! Slater-determinant energies by Wick contraction, exhaustive classical
//! ground-state search for diagonal Hamiltonians, and the independent-set
//! gadget built on them.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::fockspace::{binomial, build_classical_from, SecondQuantizedHamiltonian};
use crate::instances::WeightedGraph;
use crate::{Error, Result};

pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Determinant state |SD(B)> = b†_1 ... b†_eta |0> with b_i = sum_j B_{ij} a_j;
/// rows of B are orthonormal.
#[derive(Debug, Clone)]
pub struct SlaterState {
    b: DMatrix<f64>,
}

impl SlaterState {
    pub fn new(b: DMatrix<f64>) -> Result<Self> {
        let eta = b.nrows();
        let gram = &b * b.transpose();
        let defect = (&gram - DMatrix::identity(eta, eta)).abs().max();
        if defect > ORTHONORMAL_TOL {
            return Err(Error::Validation(format!(
                "rows of B are not orthonormal: defect {defect}"
            )));
        }
        Ok(SlaterState { b })
    }

    /// Occupation-basis determinant: rows are distinct unit vectors.
    pub fn from_occupation(state: u64, modes: usize) -> Self {
        let occupied: Vec<usize> = (0..modes).filter(|&k| state >> k & 1 == 1).collect();
        let mut b = DMatrix::zeros(occupied.len(), modes);
        for (row, &k) in occupied.iter().enumerate() {
            b[(row, k)] = 1.0;
        }
        SlaterState { b }
    }

    pub fn eta(&self) -> usize {
        self.b.nrows()
    }

    pub fn modes(&self) -> usize {
        self.b.ncols()
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.b
    }

    /// One-body density D = B^T B with <a†_p a_q> = D_{pq}.
    pub fn density(&self) -> DMatrix<f64> {
        self.b.transpose() * &self.b
    }

    /// Full-space state vector, built by applying each b† in turn.
    /// Exponential in the mode count; for cross-checks at small sizes.
    pub fn dense_vector(&self) -> DVector<f64> {
        let modes = self.modes();
        let dim = 1usize << modes;
        let mut v = DVector::zeros(dim);
        v[0] = 1.0;
        for row in (0..self.eta()).rev() {
            let mut next = DVector::zeros(dim);
            for state in 0..dim as u64 {
                let amp = v[state as usize];
                if amp == 0.0 {
                    continue;
                }
                for k in 0..modes {
                    let c = self.b[(row, k)];
                    if c == 0.0 {
                        continue;
                    }
                    if let Some((target, sign)) = crate::fockspace::create(state, k) {
                        next[target as usize] += c * sign * amp;
                    }
                }
            }
            v = next;
        }
        v
    }
}

/// <SD(B)| h |SD(B)> via the one-body density and Wick contraction of the
/// quartic terms: <a†p a†q ar as> = D_ps D_qr - D_pr D_qs.
pub fn slater_energy(h: &SecondQuantizedHamiltonian, state: &SlaterState) -> Result<f64> {
    if state.modes() != h.modes() {
        return Err(Error::Validation("mode counts differ".into()));
    }
    let d = state.density();
    let mut e = h.constant();
    for (&(p, q), &v) in h.one_body() {
        e += v * d[(p, q)];
    }
    for (&(p, q, r, s), &v) in h.two_body() {
        e += v * (d[(p, s)] * d[(q, r)] - d[(p, r)] * d[(q, s)]);
    }
    Ok(e)
}

/// Check that `h` is diagonal in the occupation basis and return its energy
/// functional over bitstrings.
fn diagonal_terms(h: &SecondQuantizedHamiltonian) -> Result<(Vec<(usize, f64)>, Vec<(usize, usize, f64)>)> {
    let mut linear = Vec::new();
    for (&(p, q), &v) in h.one_body() {
        if p != q {
            return Err(Error::Validation(format!(
                "one-body term ({p}, {q}) is not diagonal"
            )));
        }
        linear.push((p, v));
    }
    let mut quadratic = Vec::new();
    for (&(p, q, r, s), &v) in h.two_body() {
        // a†p a†q ar as acts diagonally iff {p,q} = {r,s}
        if p == s && q == r {
            quadratic.push((p, q, v)); // +v n_p n_q
        } else if p == r && q == s {
            quadratic.push((p, q, -v)); // -v n_p n_q
        } else {
            return Err(Error::Validation(format!(
                "two-body term ({p},{q},{r},{s}) is not diagonal"
            )));
        }
    }
    Ok((linear, quadratic))
}

pub fn diagonal_energy(h: &SecondQuantizedHamiltonian, state: u64) -> Result<f64> {
    let (linear, quadratic) = diagonal_terms(h)?;
    let occ = |k: usize| (state >> k) & 1 == 1;
    let mut e = h.constant();
    for (p, v) in linear {
        if occ(p) {
            e += v;
        }
    }
    for (p, q, v) in quadratic {
        if occ(p) && occ(q) {
            e += v;
        }
    }
    Ok(e)
}

/// Minimum-energy weight-eta occupation of a diagonal Hamiltonian, by
/// exhaustive scan with branch pruning when all contributions are
/// nonnegative. Ties break toward the smallest bitstring.
pub fn classical_ground(h: &SecondQuantizedHamiltonian, eta: usize) -> Result<(f64, u64)> {
    let modes = h.modes();
    if modes > 30 {
        return Err(Error::DimensionCap { dim: binomial(modes, eta), cap: binomial(30, eta.min(30)) });
    }
    if eta > modes {
        return Err(Error::Validation(format!("eta = {eta} exceeds modes = {modes}")));
    }
    let (linear, quadratic) = diagonal_terms(h)?;
    let monotone = linear.iter().all(|&(_, v)| v >= 0.0) && quadratic.iter().all(|&(_, _, v)| v >= 0.0);
    let mut lin_by_mode = vec![0.0f64; modes];
    for &(p, v) in &linear {
        lin_by_mode[p] += v;
    }
    // each pair lands in both buckets; the energy picks it up when the
    // second of the two modes is taken
    let mut quad_by_mode: Vec<Vec<(usize, f64)>> = vec![Vec::new(); modes];
    for &(p, q, v) in &quadratic {
        quad_by_mode[p].push((q, v));
        quad_by_mode[q].push((p, v));
    }

    let mut best = (f64::INFINITY, 0u64);
    let mut stack: Vec<(usize, usize, u64, f64)> = vec![(0, eta, 0, h.constant())];
    while let Some((next_mode, remaining, state, energy)) = stack.pop() {
        if remaining == 0 {
            if energy < best.0 || (energy == best.0 && state < best.1) {
                best = (energy, state);
            }
            continue;
        }
        if modes - next_mode < remaining {
            continue;
        }
        if monotone && energy >= best.0 {
            continue;
        }
        // skip this mode (explored after taking it, so lower bitstrings win ties)
        stack.push((next_mode + 1, remaining, state, energy));
        // take this mode
        let mut e = energy + lin_by_mode[next_mode];
        for &(other, v) in &quad_by_mode[next_mode] {
            if state >> other & 1 == 1 {
                e += v;
            }
        }
        stack.push((next_mode + 1, remaining - 1, state | 1 << next_mode, e));
    }
    if best.0.is_infinite() {
        return Err(Error::Validation("no state of the requested weight".into()));
    }
    Ok(best)
}

/// Gadget parameters for the independent-set encoding.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GadgetParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl GadgetParams {
    /// beta = 16 n^4 keeps the onsite penalty above 4 n^2 u2.
    pub fn for_graph(n: usize) -> Self {
        GadgetParams { alpha: 1.0, beta: 16.0 * (n as f64).powi(4), gamma: 1.0 }
    }

    pub fn u1(&self, d: usize) -> f64 {
        0.25 * crate::integrals::coulomb_pair(self.beta, 0.0)
            + 1.0 / (4.0 * d as f64) * crate::integrals::coulomb_pair(self.alpha, 0.0)
    }

    pub fn u2(&self, d: usize) -> f64 {
        let df = d as f64;
        1.0 / (4.0 * df * df) * crate::integrals::coulomb_pair(self.alpha, self.gamma)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetResult {
    pub energy: f64,
    /// Occupied spin orbitals of the minimizing state, as mode indices.
    pub occupation: Vec<usize>,
    pub is_independent_set: bool,
    pub u1: f64,
    pub u2: f64,
}

/// Decide k-independent-set through the diagonal gadget Hamiltonian.
pub fn independent_set_check(graph: &WeightedGraph, k: usize) -> Result<bool> {
    Ok(np_gadget(graph, k)?.is_independent_set)
}

/// Build the gadget Hamiltonian for `graph`, scan for its weight-k ground
/// state, and report the witness occupancy.
pub fn np_gadget(graph: &WeightedGraph, k: usize) -> Result<GadgetResult> {
    graph.validate()?;
    if k > graph.n {
        return Err(Error::Validation(format!("k = {k} exceeds n = {}", graph.n)));
    }
    let params = GadgetParams::for_graph(graph.n);
    let u1 = params.u1(graph.d);
    let u2 = params.u2(graph.d);
    let nf = graph.n as f64;
    if u1 <= 4.0 * nf * nf * u2 {
        return Err(Error::Hypothesis(format!(
            "gadget penalty u1 = {u1} must exceed 4 n^2 u2 = {}",
            4.0 * nf * nf * u2
        )));
    }
    let h = build_classical_from(graph.n, &graph.edge_keys(), u1, u2);
    let (energy, state) = classical_ground(&h, k)?;
    let occupation: Vec<usize> = (0..h.modes()).filter(|&m| state >> m & 1 == 1).collect();
    Ok(GadgetResult {
        energy,
        occupation,
        is_independent_set: energy < u2 / 2.0,
        u1,
        u2,
    })
}

/// Local Hartree-Fock search: random orthonormal starts with projected
/// gradient steps. A demonstration utility; exhaustive scans remain the
/// reference for the gadget.
pub fn hartree_fock_search(
    h: &SecondQuantizedHamiltonian,
    eta: usize,
    restarts: usize,
    steps: usize,
    seed: u64,
) -> Result<(f64, SlaterState)> {
    use rand::Rng;
    use rand::SeedableRng;
    let modes = h.modes();
    if eta > modes {
        return Err(Error::Validation("eta exceeds mode count".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, SlaterState)> = None;
    for _ in 0..restarts.max(1) {
        let raw = DMatrix::from_fn(eta, modes, |_, _| rng.random::<f64>() - 0.5);
        let mut b = orthonormalize_rows(raw)?;
        let mut energy = slater_energy(h, &SlaterState { b: b.clone() })?;
        let mut step = 0.1;
        for _ in 0..steps {
            let grad = energy_gradient(h, &b);
            let candidate = orthonormalize_rows(&b - grad * step)?;
            let cand_e = slater_energy(h, &SlaterState { b: candidate.clone() })?;
            if cand_e < energy - 1e-14 {
                b = candidate;
                energy = cand_e;
                step = (step * 1.5).min(1.0);
            } else {
                step *= 0.5;
                if step < 1e-10 {
                    break;
                }
            }
        }
        if best.as_ref().is_none_or(|(e, _)| energy < *e) {
            best = Some((energy, SlaterState { b }));
        }
    }
    Ok(best.unwrap())
}

fn energy_gradient(h: &SecondQuantizedHamiltonian, b: &DMatrix<f64>) -> DMatrix<f64> {
    // dE/dB = 2 B F with F the symmetrized derivative of E w.r.t. D
    let modes = b.ncols();
    let d = b.transpose() * b;
    let mut f = DMatrix::zeros(modes, modes);
    for (&(p, q), &v) in h.one_body() {
        f[(p, q)] += v;
    }
    for (&(p, q, r, s), &v) in h.two_body() {
        f[(p, s)] += v * d[(q, r)];
        f[(q, r)] += v * d[(p, s)];
        f[(p, r)] -= v * d[(q, s)];
        f[(q, s)] -= v * d[(p, r)];
    }
    let sym = (&f + f.transpose()) * 0.5;
    2.0 * b * sym
}

fn orthonormalize_rows(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut b = m;
    for i in 0..b.nrows() {
        for _ in 0..2 {
            for j in 0..i {
                let proj = b.row(i).dot(&b.row(j));
                let uj = b.row(j).into_owned();
                let mut ri = b.row_mut(i);
                ri -= uj * proj;
            }
        }
        let norm = b.row(i).norm();
        if norm < 1e-12 {
            return Err(Error::Validation("degenerate rows during orthonormalization".into()));
        }
        b.row_mut(i).scale_mut(1.0 / norm);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{build_hubbard, mode_index, Spin};
    use crate::instances::HubbardInstance;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn single_electron_energy_is_diagonal_coefficient() {
        let mut h = SecondQuantizedHamiltonian::new(4);
        h.add_one_body(2, 2, 0.75);
        let state = SlaterState::from_occupation(0b0100, 4);
        assert_eq!(slater_energy(&h, &state).unwrap(), 0.75);
    }

    #[test]
    fn occupation_state_on_classical_hamiltonian() {
        let h = build_classical_from(2, &[(1, 2)], 5.0, 0.25);
        // one electron per site: energy u2
        let state = SlaterState::from_occupation(
            1 << mode_index(1, Spin::Up) | 1 << mode_index(2, Spin::Down),
            4,
        );
        assert!((slater_energy(&h, &state).unwrap() - 0.25).abs() < 1e-14);
        // doubly occupied site 1: u1
        let state = SlaterState::from_occupation(
            1 << mode_index(1, Spin::Up) | 1 << mode_index(1, Spin::Down),
            4,
        );
        assert!((slater_energy(&h, &state).unwrap() - 5.0).abs() < 1e-14);
    }

    fn random_orthonormal(eta: usize, modes: usize, seed: u64) -> SlaterState {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(eta, modes, |_, _| rng.random::<f64>() - 0.5);
        SlaterState::new(orthonormalize_rows(raw).unwrap()).unwrap()
    }

    #[test]
    fn wick_matches_dense_expectation_on_hubbard() {
        let g = WeightedGraph::new(2, vec![(1, 2, 1.0)], 1).unwrap();
        let h = build_hubbard(&HubbardInstance::new(g, 8.0, 2, None, None).unwrap());
        let hm = h.jordan_wigner_matrix().unwrap();
        let dense = hm.matrix.as_dense().unwrap();
        for seed in 0..50 {
            let state = random_orthonormal(2, 4, seed);
            let wick = slater_energy(&h, &state).unwrap();
            let v = state.dense_vector();
            let expect = (dense * &v).dot(&v) / v.dot(&v);
            assert!((wick - expect).abs() < 1e-10, "seed {seed}: {wick} vs {expect}");
        }
    }

    #[test]
    fn energy_invariant_under_row_rotation() {
        let g = WeightedGraph::new(2, vec![(1, 2, 0.7)], 1).unwrap();
        let h = build_hubbard(&HubbardInstance::new(g, 3.0, 2, None, None).unwrap());
        let state = random_orthonormal(2, 4, 7);
        let theta: f64 = 0.83;
        let rot =
            DMatrix::from_row_slice(2, 2, &[theta.cos(), theta.sin(), -theta.sin(), theta.cos()]);
        let rotated = SlaterState::new(rot * state.coefficients()).unwrap();
        let e1 = slater_energy(&h, &state).unwrap();
        let e2 = slater_energy(&h, &rotated).unwrap();
        assert!((e1 - e2).abs() < 1e-10);
    }

    #[test]
    fn variational_bound_holds() {
        let g = WeightedGraph::new(2, vec![(1, 2, 1.0)], 1).unwrap();
        let h = build_hubbard(&HubbardInstance::new(g, 8.0, 2, None, None).unwrap());
        let ground = crate::spectra::ground_energy(&h, 2).unwrap().ground_energy;
        for seed in 0..100 {
            let state = random_orthonormal(2, 4, seed);
            assert!(slater_energy(&h, &state).unwrap() >= ground - 1e-10);
        }
    }

    #[test]
    fn non_orthonormal_rejected() {
        let b = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 1.0, 1e-3, 0.0, 0.0]);
        assert!(SlaterState::new(b).is_err());
    }

    #[test]
    fn classical_ground_examples() {
        // path on 3 vertices, 2 electrons on the endpoints -> energy 0
        let h = build_classical_from(3, &[(1, 2), (2, 3)], 100.0, 0.25);
        let (e, state) = classical_ground(&h, 2).unwrap();
        assert_eq!(e, 0.0);
        let occ_sites: Vec<usize> = (1..=3)
            .filter(|&i| {
                state >> mode_index(i, Spin::Up) & 1 == 1 || state >> mode_index(i, Spin::Down) & 1 == 1
            })
            .collect();
        assert_eq!(occ_sites, vec![1, 3]);

        // triangle: any two vertices are adjacent -> energy u2
        let h = build_classical_from(3, &[(1, 2), (1, 3), (2, 3)], 100.0, 0.25);
        let (e, _) = classical_ground(&h, 2).unwrap();
        assert!((e - 0.25).abs() < 1e-14);

        // eta = 0
        let (e, state) = classical_ground(&h, 0).unwrap();
        assert_eq!((e, state), (0.0, 0));
    }

    fn brute_force_independent_set(graph: &WeightedGraph, k: usize) -> bool {
        let n = graph.n;
        (0u64..1 << n).any(|mask| {
            mask.count_ones() as usize == k
                && graph
                    .edge_keys()
                    .iter()
                    .all(|&(i, j)| mask >> (i - 1) & 1 == 0 || mask >> (j - 1) & 1 == 0)
        })
    }

    #[test]
    fn independent_set_examples() {
        let c5 = WeightedGraph::cycle(5, 1.0).unwrap();
        assert!(independent_set_check(&c5, 2).unwrap());
        let k4 = WeightedGraph::complete(4, 1.0).unwrap();
        assert!(!independent_set_check(&k4, 2).unwrap());
        let empty = WeightedGraph::new(4, vec![], 1).unwrap();
        assert!(independent_set_check(&empty, 4).unwrap());
        assert!(independent_set_check(&k4, 0).unwrap());
    }

    #[test]
    fn gadget_agrees_with_enumerator_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.random_range(2..=6usize);
            let mut edges = Vec::new();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    if rng.random::<f64>() < 0.5 {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            let g = match WeightedGraph::new(n, edges, (n - 1).max(1)) {
                Ok(g) => g,
                Err(_) => continue,
            };
            for k in 0..=n {
                assert_eq!(
                    independent_set_check(&g, k).unwrap(),
                    brute_force_independent_set(&g, k),
                    "n = {n}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn hf_search_reaches_classical_ground() {
        let g = WeightedGraph::path(3, 1.0).unwrap();
        let result = np_gadget(&g, 2).unwrap();
        let h = build_classical_from(3, &g.edge_keys(), result.u1, result.u2);
        let (e, state) = hartree_fock_search(&h, 2, 6, 200, 0).unwrap();
        let (ground, _) = classical_ground(&h, 2).unwrap();
        assert!(e >= ground - 1e-10);
        assert!(e - ground < result.u2, "local search landed at {e}, ground {ground}");
        assert_eq!(state.eta(), 2);
    }
}
