//! Slater-determinant energies: Wick-contracted expectation values, the
//! variational bound against the exact sector ground state, and a local
//! Hartree-Fock search on a small Hubbard model.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;

use spinchem::fockspace::build_hubbard;
use spinchem::instances::{HubbardInstance, WeightedGraph};
use spinchem::slater::{hartree_fock_search, slater_energy, SlaterState};
use spinchem::spectra::ground_energy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = WeightedGraph::new(4, vec![(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (1, 4, 1.0)], 2)?;
    let inst = HubbardInstance::new(graph, 4.0, 4, None, None)?;
    let h = build_hubbard(&inst);
    let exact = ground_energy(&h, 4)?.ground_energy;
    println!("4-site Hubbard ring at half filling, u0 = 4, t = 1");
    println!("exact ground energy: {exact:.9}\n");

    // random determinants respect the variational bound
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut best_random = f64::INFINITY;
    for _ in 0..200 {
        let raw = DMatrix::from_fn(4, 8, |_, _| rng.random::<f64>() - 0.5);
        let state = match orthonormalize(raw) {
            Some(s) => s,
            None => continue,
        };
        let e = slater_energy(&h, &state)?;
        assert!(e >= exact - 1e-10, "variational bound violated");
        best_random = best_random.min(e);
    }
    println!("best of 200 random determinants: {best_random:.9}");

    let (hf_energy, hf_state) = hartree_fock_search(&h, 4, 8, 400, 7)?;
    println!("local Hartree-Fock search:       {hf_energy:.9}");
    println!("correlation energy (HF - exact): {:.9}", hf_energy - exact);
    println!("occupied-orbital coefficients:\n{:.4}", hf_state.coefficients());
    Ok(())
}

fn orthonormalize(raw: DMatrix<f64>) -> Option<SlaterState> {
    let mut b = raw;
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
        if norm < 1e-8 {
            return None;
        }
        b.row_mut(i).scale_mut(1.0 / norm);
    }
    SlaterState::new(b).ok()
}
