//! Placement of primitive Gaussian centers so that each interaction-graph
//! edge corresponds to exactly one close pair at its prescribed distance and
//! all other center pairs are far apart.
//!
//! Geometry: one coarse grid cell of size 2*Gamma + 2*gamma_max per close
//! pair or dummy point, laid out along the x-axis with z = 0. Each edge's
//! pair sits at its cell's x coordinate, split along the y-axis at
//! y = +-gamma/2. The two paired points then share one x value, so their
//! distance is exactly gamma in f64 even when Gamma is so large that
//! x +- gamma/2 would round to x. Cross-cell distances are at least
//! 2*Gamma + gamma_max by construction.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instances::WeightedGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LayoutParams {
    pub alpha: f64,
    pub beta: f64,
    /// Far-separation scale Gamma; must exceed every gamma_{i,j}.
    pub big_gamma: f64,
}

/// Primitive-orbital geometry for one interaction graph.
///
/// Primitive (i, p) for vertex i in 1..=n, p in 0..=d maps to flat index
/// (i-1)(d+1) + p. Index p = 0 carries exponent beta, p >= 1 exponent alpha.
/// Composite amplitudes are psi_0 = 1/sqrt(2), psi_{p>0} = 1/sqrt(2d).
#[derive(Debug, Clone)]
pub struct OrbitalLayout {
    pub graph: WeightedGraph,
    pub alpha: f64,
    pub beta: f64,
    pub big_gamma: f64,
    /// Edge -> close-pair distance gamma_{i,j}.
    pub gamma: BTreeMap<(usize, usize), f64>,
    /// Flat primitive index -> center in R^3.
    pub centers: Vec<[f64; 3]>,
    /// Edge {i,j} -> the unique close pair ((i,p), (j,q)).
    pub pair_map: BTreeMap<(usize, usize), ((usize, usize), (usize, usize))>,
}

impl OrbitalLayout {
    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn d(&self) -> usize {
        self.graph.d
    }

    pub fn num_primitives(&self) -> usize {
        self.graph.n * (self.graph.d + 1)
    }

    /// Flat index of primitive (i, p); i is 1-based, p in 0..=d.
    pub fn flat(&self, i: usize, p: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.graph.n && p <= self.graph.d);
        (i - 1) * (self.graph.d + 1) + p
    }

    pub fn unflat(&self, a: usize) -> (usize, usize) {
        (a / (self.graph.d + 1) + 1, a % (self.graph.d + 1))
    }

    pub fn center(&self, i: usize, p: usize) -> [f64; 3] {
        self.centers[self.flat(i, p)]
    }

    pub fn center_flat(&self, a: usize) -> [f64; 3] {
        self.centers[a]
    }

    pub fn exponent(&self, _i: usize, p: usize) -> f64 {
        if p == 0 {
            self.beta
        } else {
            self.alpha
        }
    }

    pub fn exponent_flat(&self, a: usize) -> f64 {
        if a % (self.graph.d + 1) == 0 {
            self.beta
        } else {
            self.alpha
        }
    }

    pub fn amplitude(&self, p: usize) -> f64 {
        if p == 0 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0 / (2.0 * self.graph.d as f64).sqrt()
        }
    }

    pub fn gamma_min(&self) -> f64 {
        self.gamma.values().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn gamma_max(&self) -> f64 {
        self.gamma.values().cloned().fold(0.0, f64::max)
    }

    /// omega_{i,j} = alpha gamma_{i,j}^2 per edge.
    pub fn omega(&self) -> BTreeMap<(usize, usize), f64> {
        self.gamma.iter().map(|(&e, &g)| (e, self.alpha * g * g)).collect()
    }

    pub fn omega_min(&self) -> f64 {
        self.alpha * self.gamma_min().powi(2)
    }

    /// True when gamma is the same on every edge (within 1e-12 relative).
    pub fn uniform_gamma(&self) -> Option<f64> {
        let mut vals = self.gamma.values();
        let first = *vals.next()?;
        for &v in vals {
            if (v - first).abs() > 1e-12 * first.abs() {
                return None;
            }
        }
        Some(first)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = LayoutFile {
            graph: self.graph.clone(),
            alpha: self.alpha,
            beta: self.beta,
            big_gamma: self.big_gamma,
            gamma: self.gamma.iter().map(|(&(i, j), &g)| (i, j, g)).collect(),
            centers: self.centers.clone(),
            pair_map: self
                .pair_map
                .iter()
                .map(|(&(i, j), &((a, p), (b, q)))| {
                    debug_assert!(a == i && b == j);
                    (i, p, j, q)
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LayoutFile = serde_json::from_str(text)?;
        file.graph.validate()?;
        let layout = OrbitalLayout {
            gamma: file.gamma.iter().map(|&(i, j, g)| ((i, j), g)).collect(),
            pair_map: file
                .pair_map
                .iter()
                .map(|&(i, p, j, q)| ((i, j), ((i, p), (j, q))))
                .collect(),
            graph: file.graph,
            alpha: file.alpha,
            beta: file.beta,
            big_gamma: file.big_gamma,
            centers: file.centers,
        };
        if layout.centers.len() != layout.num_primitives() {
            return Err(Error::Validation("center count != n (d + 1)".into()));
        }
        Ok(layout)
    }

    /// XYZ-style listing: primitive count, comment, then one `B|A x y z`
    /// line per center (B for the tight p = 0 Gaussian, A otherwise).
    pub fn to_xyz(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.num_primitives()));
        out.push_str(&format!(
            "orbital layout: n={} d={} alpha={} beta={} Gamma={}\n",
            self.n(),
            self.d(),
            self.alpha,
            self.beta,
            self.big_gamma
        ));
        for a in 0..self.num_primitives() {
            let (_, p) = self.unflat(a);
            let tag = if p == 0 { "B" } else { "A" };
            let c = self.centers[a];
            out.push_str(&format!("{tag} {:.12e} {:.12e} {:.12e}\n", c[0], c[1], c[2]));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct LayoutFile {
    graph: WeightedGraph,
    alpha: f64,
    beta: f64,
    big_gamma: f64,
    /// (i, j, gamma) per edge.
    gamma: Vec<(usize, usize, f64)>,
    centers: Vec<[f64; 3]>,
    /// (i, p, j, q) per edge close pair.
    pair_map: Vec<(usize, usize, usize, usize)>,
}

/// Place centers for `graph` with per-edge close distances `gamma`.
pub fn place_centers(
    graph: &WeightedGraph,
    gamma: &BTreeMap<(usize, usize), f64>,
    params: LayoutParams,
) -> Result<OrbitalLayout> {
    graph.validate()?;
    if !(params.alpha > 0.0 && params.beta > 0.0) {
        return Err(Error::Validation("exponents must be positive".into()));
    }
    for (i, j) in graph.edge_keys() {
        match gamma.get(&(i, j)) {
            Some(&g) if g > 0.0 => {}
            Some(_) => return Err(Error::Validation(format!("gamma({i},{j}) must be positive"))),
            None => return Err(Error::Validation(format!("missing gamma for edge ({i},{j})"))),
        }
    }
    let gamma_max = gamma.values().cloned().fold(0.0f64, f64::max);
    if params.big_gamma <= gamma_max {
        return Err(Error::Validation(format!(
            "Gamma = {} must exceed gamma_max = {gamma_max}",
            params.big_gamma
        )));
    }

    let (n, d) = (graph.n, graph.d);
    let cell = 2.0 * params.big_gamma + 2.0 * gamma_max;
    let mut centers = vec![[f64::NAN; 3]; n * (d + 1)];
    let mut pair_map = BTreeMap::new();

    // one cell per edge; the pair shares the cell's x and splits along y
    let mut cell_idx = 0usize;
    for (i, j) in graph.edge_keys() {
        let g = gamma[&(i, j)];
        let x0 = cell_idx as f64 * cell;
        let p = graph.neighbors(i).iter().position(|&v| v == j).unwrap() + 1;
        let q = graph.neighbors(j).iter().position(|&v| v == i).unwrap() + 1;
        centers[(i - 1) * (d + 1) + p] = [x0, -g / 2.0, 0.0];
        centers[(j - 1) * (d + 1) + q] = [x0, g / 2.0, 0.0];
        pair_map.insert((i, j), ((i, p), (j, q)));
        cell_idx += 1;
    }
    // dummy points: p = 0 and p > deg(i), one cell each
    for i in 1..=n {
        let deg = graph.degree(i);
        for p in (0..=d).filter(|&p| p == 0 || p > deg) {
            centers[(i - 1) * (d + 1) + p] = [cell_idx as f64 * cell, 0.0, 0.0];
            cell_idx += 1;
        }
    }

    Ok(OrbitalLayout {
        graph: graph.clone(),
        alpha: params.alpha,
        beta: params.beta,
        big_gamma: params.big_gamma,
        gamma: gamma.clone(),
        centers,
        pair_map,
    })
}

/// Place centers with the same close distance on every edge.
pub fn place_centers_uniform(graph: &WeightedGraph, gamma: f64, params: LayoutParams) -> Result<OrbitalLayout> {
    let map = graph.edge_keys().into_iter().map(|e| (e, gamma)).collect();
    place_centers(graph, &map, params)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LayoutViolation {
    PairDistance { edge: (usize, usize), expected: f64, actual: f64 },
    FarPairTooClose { a: (usize, usize), b: (usize, usize), distance: f64 },
    GammaNotBelowBigGamma { gamma_max: f64, big_gamma: f64 },
    AmplitudeNormalization { sum: f64 },
    PairMapNotInjective { primitive: (usize, usize) },
    MissingEdgePair { edge: (usize, usize) },
}

impl fmt::Display for LayoutViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutViolation::PairDistance { edge, expected, actual } => write!(
                f,
                "edge {edge:?}: pair distance {actual} differs from gamma {expected}"
            ),
            LayoutViolation::FarPairTooClose { a, b, distance } => {
                write!(f, "far pair {a:?} {b:?} at distance {distance} < Gamma")
            }
            LayoutViolation::GammaNotBelowBigGamma { gamma_max, big_gamma } => {
                write!(f, "gamma_max {gamma_max} >= Gamma {big_gamma}")
            }
            LayoutViolation::AmplitudeNormalization { sum } => {
                write!(f, "composite amplitudes sum of squares {sum} != 1")
            }
            LayoutViolation::PairMapNotInjective { primitive } => {
                write!(f, "primitive {primitive:?} belongs to more than one close pair")
            }
            LayoutViolation::MissingEdgePair { edge } => write!(f, "edge {edge:?} has no close pair"),
        }
    }
}

/// Scan every pairwise distance and the pair bookkeeping; empty iff all
/// layout invariants hold.
pub fn verify_layout(layout: &OrbitalLayout) -> Vec<LayoutViolation> {
    let mut out = Vec::new();
    let n = layout.num_primitives();

    if layout.gamma_max() >= layout.big_gamma {
        out.push(LayoutViolation::GammaNotBelowBigGamma {
            gamma_max: layout.gamma_max(),
            big_gamma: layout.big_gamma,
        });
    }

    let mut close: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    let mut seen_primitives: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&edge, &(a, b)) in &layout.pair_map {
        let fa = layout.flat(a.0, a.1);
        let fb = layout.flat(b.0, b.1);
        close.insert((fa.min(fb), fa.max(fb)), edge);
        for prim in [a, b] {
            *seen_primitives.entry(prim).or_insert(0) += 1;
        }
    }
    for (&prim, &count) in &seen_primitives {
        if count > 1 {
            out.push(LayoutViolation::PairMapNotInjective { primitive: prim });
        }
    }
    for (i, j) in layout.graph.edge_keys() {
        if !layout.pair_map.contains_key(&(i, j)) {
            out.push(LayoutViolation::MissingEdgePair { edge: (i, j) });
        }
    }

    for a in 0..n {
        for b in (a + 1)..n {
            let dist = crate::integrals::dist(layout.centers[a], layout.centers[b]);
            if let Some(&edge) = close.get(&(a, b)) {
                let expected = layout.gamma[&edge];
                if (dist - expected).abs() > 1e-12 * expected {
                    out.push(LayoutViolation::PairDistance { edge, expected, actual: dist });
                }
            } else if dist < layout.big_gamma * (1.0 - 1e-12) {
                out.push(LayoutViolation::FarPairTooClose {
                    a: layout.unflat(a),
                    b: layout.unflat(b),
                    distance: dist,
                });
            }
        }
    }

    let d = layout.d() as f64;
    let sum = 0.5 + d * (1.0 / (2.0 * d));
    if (sum - 1.0).abs() > 1e-12 {
        out.push(LayoutViolation::AmplitudeNormalization { sum });
    }

    out
}
