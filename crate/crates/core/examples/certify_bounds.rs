//! Certify every approximation bound on a compliant instance: assemble the
//! electronic-structure, rounded, main, and classical Hamiltonians for a
//! path graph, measure the sector spectral norms, and print one line per
//! inequality.

use spinchem::bounds::{appendix_bounds, class_bound, offsite_bound, rounding_error_bound};
use spinchem::cli::render_report_table;
use spinchem::fockspace::{build_classical, build_es_hamiltonian, build_main, build_rounded};
use spinchem::instances::WeightedGraph;
use spinchem::integrals::{assemble_primitive_tensors, compose_tensors};
use spinchem::layout::{place_centers_uniform, LayoutParams};
use spinchem::lowdin::{inv_sqrt_overlap, rounded_coefficients, transform_tensors};
use spinchem::spectra::spectral_norm_diff;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = WeightedGraph::path(3, 1.0)?;
    let n = graph.n;
    // alpha = beta = 1, omega = 4, Gamma at the hypothesis boundary: every
    // lemma hypothesis holds exactly
    let big_gamma = 640.0 * (n as f64).powi(18);
    let layout = place_centers_uniform(&graph, 2.0, LayoutParams { alpha: 1.0, beta: 1.0, big_gamma })?;

    let prim = assemble_primitive_tensors(&layout);
    let xf = inv_sqrt_overlap(&prim.s, &layout)?;
    let composite = compose_tensors(&transform_tensors(&prim, &xf)?, &layout)?;
    let rc = rounded_coefficients(&layout);

    let h_es = build_es_hamiltonian(&composite)?;
    let h_round = build_rounded(&rc);
    let h_main = build_main(&rc);
    let h_class = build_classical(&layout, &rc)?;
    let shift = n as f64 * rc.c_t;

    let mut reports = Vec::new();
    reports.push(
        rounding_error_bound(n, layout.alpha, layout.beta, layout.omega_min(), big_gamma)
            .with_measured(spectral_norm_diff(&h_es, &h_round, Some(n))?, 1e-12),
    );
    let mut main_shifted = h_main;
    main_shifted.add_constant(shift);
    reports.push(
        offsite_bound(n, layout.alpha)
            .with_measured(spectral_norm_diff(&h_round, &main_shifted, Some(n))?, 1e-12),
    );
    let mut class_shifted = h_class;
    class_shifted.add_constant(shift);
    reports.push(
        class_bound(n, layout.alpha, layout.uniform_gamma().unwrap())
            .with_measured(spectral_norm_diff(&h_round, &class_shifted, Some(n))?, 1e-12),
    );
    reports.extend(appendix_bounds(&layout, &prim, &xf)?);

    print!("{}", render_report_table(&reports));
    let failures = reports.iter().filter(|r| r.is_failure()).count();
    println!("\n{} reports, {failures} failures", reports.len());
    Ok(())
}
