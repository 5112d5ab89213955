//! Second-order perturbation theory at work: the half-filled Hubbard model
//! with a dominant onsite repulsion reproduces the Heisenberg swap spectrum,
//! with an error falling off as 1/u0^2 relative to the coupling scale.

use spinchem::fockspace::{build_hubbard, build_hubbard_hopping, build_hubbard_penalty};
use spinchem::heis2hubb::{effective_hamiltonian, effective_target, reduce_heisenberg_to_hubbard};
use spinchem::instances::{HeisenbergInstance, WeightedGraph};
use spinchem::spectra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = WeightedGraph::new(2, vec![(1, 2, 1.0)], 1)?;
    let heis = HeisenbergInstance::new(graph, 1.0, 0.5)?;

    println!("single edge, kappa = 1; exact low spectrum vs c_eff + h_eff W\n");
    println!("{:>10} {:>16} {:>16} {:>12}", "u0", "exact ground", "effective", "distance");
    for u0 in [1e2, 1e3, 1e4, 1e5] {
        let cert = reduce_heisenberg_to_hubbard(&heis, u0)?;
        let h = build_hubbard(&cert.hubbard);
        let low = spectra::low_spectrum_projection(&h, 2, u0 / 2.0)?;
        let target = effective_target(2, cert.c_eff, &cert.h_eff);
        let eigs = spectra::sorted_eigenvalues(&target.matrix);
        let distance = low
            .lowest
            .iter()
            .zip(eigs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!(
            "{u0:>10.0} {:>16.10} {:>16.10} {distance:>12.3e}",
            low.ground_energy, eigs[0]
        );
    }

    // the operator itself, projected onto the singly-occupied ground space
    let u0 = 1e4;
    let cert = reduce_heisenberg_to_hubbard(&heis, u0)?;
    let eff = effective_hamiltonian(
        &build_hubbard_penalty(2, u0),
        &build_hubbard_hopping(&cert.hubbard),
        u0,
        Some(2),
    )?;
    let target = effective_target(2, cert.c_eff, &cert.h_eff);
    println!(
        "\nmax |effective - (c_eff + h_eff W)| on the spin qubits: {:.3e}",
        (&eff.matrix - &target.matrix).abs().max()
    );
    Ok(())
}
