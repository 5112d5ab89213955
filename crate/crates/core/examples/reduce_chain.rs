//! Full encoding chain on a triangle: Heisenberg couplings -> Hubbard
//! hoppings -> orbital layout -> coefficient tensors -> second-quantized
//! operators, with the ground energy tracked at each stage.

use spinchem::fockspace::{build_es_hamiltonian, build_main, build_rounded};
use spinchem::heis2hubb::reduce_heisenberg_to_hubbard;
use spinchem::instances::{HeisenbergInstance, WeightedGraph};
use spinchem::integrals::{assemble_primitive_tensors, compose_tensors};
use spinchem::layout::{place_centers, verify_layout, LayoutParams};
use spinchem::lowdin::{inv_sqrt_overlap, rounded_coefficients, transform_tensors};
use spinchem::{bounds, cli, spectra};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = WeightedGraph::new(3, vec![(1, 2, 1.0), (1, 3, 2.0), (2, 3, 0.5)], 2)?;
    let heis = HeisenbergInstance::new(graph, 1.0, 0.5)?;
    let n = heis.graph.n;

    let u0 = 200.0;
    let cert = reduce_heisenberg_to_hubbard(&heis, u0)?;
    println!("Hubbard hoppings (t = sqrt(u0 kappa / 2), u0 = {u0}):");
    for (i, j, t) in &cert.hubbard.graph.edges {
        println!("  edge ({i}, {j}): t = {t:.6}");
    }
    println!("  effective offset c_eff = {:.6}\n", cert.c_eff);

    // encode the hoppings geometrically: solve for each omega, then place
    let beta = 16.0 * (n as f64).powi(4);
    let rho = cli::encoding_rho(beta, u0);
    let t_max = cert.hubbard.graph.edges.iter().map(|e| e.2).fold(0.0f64, f64::max);
    let alpha = (4.0 * heis.graph.d as f64 * rho * t_max
        / spinchem::lowdin::f_of_omega(4.0).sqrt())
    .max(1.0)
        * 1.01;
    let mut gammas = std::collections::BTreeMap::new();
    for &(i, j, t) in &cert.hubbard.graph.edges {
        let omega = bounds::solve_omega(t, alpha, heis.graph.d, rho)?;
        println!("edge ({i}, {j}): omega = {omega:.6}, gamma = {:.6}", (omega / alpha).sqrt());
        gammas.insert((i, j), (omega / alpha).sqrt());
    }
    let big_gamma = 640.0 * (n as f64).powi(18) * beta.powi(3);
    let layout = place_centers(&heis.graph, &gammas, LayoutParams { alpha, beta, big_gamma })?;
    assert!(verify_layout(&layout).is_empty());
    println!("\nlayout: {} primitive Gaussians, Gamma = {big_gamma:.3e}", layout.num_primitives());

    let prim = assemble_primitive_tensors(&layout);
    let xf = inv_sqrt_overlap(&prim.s, &layout)?;
    let composite = compose_tensors(&transform_tensors(&prim, &xf)?, &layout)?;
    let rc = rounded_coefficients(&layout);

    let h_es = build_es_hamiltonian(&composite)?;
    let h_round = build_rounded(&rc);
    let h_main = build_main(&rc);

    println!("\nground energies in the {n}-electron sector:");
    for (name, h) in [("H_ES", &h_es), ("H_round", &h_round), ("H_main", &h_main)] {
        let report = spectra::ground_energy(h, n)?;
        println!("  {name:8}: {:+.9}  (dim {})", report.ground_energy, report.dimension);
    }
    let shift = n as f64 * rc.c_t;
    println!("  diagonal kinetic shift n c_T = {shift:+.9}");

    // H_main is rho times the Hubbard operator on the encoded branch
    // (all hoppings negative); their ground energies agree to solver
    // precision
    let mut encoded = cert.hubbard.clone();
    for e in &mut encoded.graph.edges {
        e.2 = -e.2;
    }
    let hubbard_ground =
        spectra::ground_energy(&spinchem::fockspace::build_hubbard(&encoded), n)?.ground_energy;
    println!("  rho * E(H_Hubb):              {:+.9}", rho * hubbard_ground);
    Ok(())
}
