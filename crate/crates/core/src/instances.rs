//! Problem instances: edge-weighted interaction graphs carrying either a
//! Heisenberg or a Fermi-Hubbard model, with validated JSON I/O.
//!
//! Vertices are 1-indexed and every edge is stored as (i, j, w) with i < j.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance for coefficient-bound checks on f64 weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Edge-weighted graph with a declared degree bound `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub n: usize,
    /// Edges (i, j, w) with 1 <= i < j <= n, sorted, no duplicates.
    pub edges: Vec<(usize, usize, f64)>,
    /// Degree bound: max vertex degree <= d <= n - 1.
    pub d: usize,
}

impl WeightedGraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize, f64)>, d: usize) -> Result<Self> {
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let g = WeightedGraph { n, edges, d };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Validation("graph needs at least 2 vertices".into()));
        }
        let mut seen = BTreeSet::new();
        for &(i, j, w) in &self.edges {
            if i < 1 || j > self.n || i >= j {
                return Err(Error::Validation(format!(
                    "edge ({i}, {j}) violates 1 <= i < j <= n = {}",
                    self.n
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::Validation(format!("duplicate edge ({i}, {j})")));
            }
            if !w.is_finite() {
                return Err(Error::Validation(format!("edge ({i}, {j}) weight not finite")));
            }
        }
        let maxdeg = self.max_degree();
        if self.d < maxdeg.max(1) || self.d > self.n - 1 {
            return Err(Error::Validation(format!(
                "degree bound d = {} outside [max(1, max degree = {maxdeg}), n - 1 = {}]",
                self.d,
                self.n - 1
            )));
        }
        Ok(())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == i || e.1 == i).count()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Neighbors of vertex `i` in ascending order.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.edges
            .iter()
            .find(|&&(a, b, _)| a == i && b == j)
            .map(|&(_, _, w)| w)
    }

    pub fn edge_keys(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(i, j, _)| (i, j)).collect()
    }

    /// Path graph on n vertices with uniform weight.
    pub fn path(n: usize, w: f64) -> Result<Self> {
        let edges = (1..n).map(|i| (i, i + 1, w)).collect();
        Self::new(n, edges, if n > 2 { 2 } else { 1 })
    }

    /// Cycle graph on n >= 3 vertices with uniform weight.
    pub fn cycle(n: usize, w: f64) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1, w)).collect();
        edges.push((1, n, w));
        Self::new(n, edges, 2)
    }

    /// Complete graph on n vertices with uniform weight.
    pub fn complete(n: usize, w: f64) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                edges.push((i, j, w));
            }
        }
        Self::new(n, edges, n - 1)
    }
}

/// Antiferromagnetic Heisenberg instance: weights are couplings kappa >= 0,
/// bounded by n^p; q is the precision exponent the hardness statement uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergInstance {
    pub graph: WeightedGraph,
    pub p: f64,
    pub q: f64,
}

impl HeisenbergInstance {
    pub fn new(graph: WeightedGraph, p: f64, q: f64) -> Result<Self> {
        let inst = HeisenbergInstance { graph, p, q };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        if self.p < 0.0 || self.q < 0.0 {
            return Err(Error::Validation("exponents p, q must be nonnegative".into()));
        }
        let cap = (self.graph.n as f64).powf(self.p) * (1.0 + WEIGHT_TOL);
        for &(i, j, k) in &self.graph.edges {
            if k < 0.0 {
                return Err(Error::Validation(format!("negative coupling on edge ({i}, {j})")));
            }
            if k > cap {
                return Err(Error::Validation(format!(
                    "coupling {k} on edge ({i}, {j}) exceeds n^p = {cap}"
                )));
            }
        }
        Ok(())
    }
}

/// Fermi-Hubbard instance: weights are hoppings t, `u0` the uniform onsite
/// repulsion, `eta` the electron count. When (p, q) are attached the hopping
/// bound |t| <= sqrt(n^p u0) is enforced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HubbardInstance {
    pub graph: WeightedGraph,
    pub u0: f64,
    pub eta: usize,
    pub p: Option<f64>,
    pub q: Option<f64>,
}

impl HubbardInstance {
    pub fn new(graph: WeightedGraph, u0: f64, eta: usize, p: Option<f64>, q: Option<f64>) -> Result<Self> {
        let inst = HubbardInstance { graph, u0, eta, p, q };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        if !(self.u0 > 0.0) {
            return Err(Error::Validation("onsite repulsion u0 must be positive".into()));
        }
        if self.eta < 1 {
            return Err(Error::Validation("electron count eta must be >= 1".into()));
        }
        if self.eta > 2 * self.graph.n {
            return Err(Error::Validation(format!(
                "eta = {} exceeds spin-orbital count {}",
                self.eta,
                2 * self.graph.n
            )));
        }
        if let Some(p) = self.p {
            let cap = ((self.graph.n as f64).powf(p) * self.u0).sqrt() * (1.0 + WEIGHT_TOL);
            for &(i, j, t) in &self.graph.edges {
                if t.abs() > cap {
                    return Err(Error::Validation(format!(
                        "hopping {t} on edge ({i}, {j}) exceeds sqrt(n^p u0) = {cap}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Either kind of instance, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Heisenberg(HeisenbergInstance),
    Hubbard(HubbardInstance),
}

impl Instance {
    pub fn graph(&self) -> &WeightedGraph {
        match self {
            Instance::Heisenberg(h) => &h.graph,
            Instance::Hubbard(h) => &h.graph,
        }
    }

    pub fn as_heisenberg(&self) -> Result<&HeisenbergInstance> {
        match self {
            Instance::Heisenberg(h) => Ok(h),
            Instance::Hubbard(_) => Err(Error::Validation("expected a heisenberg instance".into())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    d: usize,
    edges: Vec<(usize, usize, f64)>,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
}

/// Parse and validate an instance file.
pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    load_instance_str(&text)
}

pub fn load_instance_str(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let graph = WeightedGraph::new(file.n, file.edges, file.d)?;
    match file.kind.as_str() {
        "heisenberg" => {
            let p = file.p.ok_or_else(|| Error::Validation("heisenberg instance requires p".into()))?;
            let q = file.q.ok_or_else(|| Error::Validation("heisenberg instance requires q".into()))?;
            Ok(Instance::Heisenberg(HeisenbergInstance::new(graph, p, q)?))
        }
        "hubbard" => {
            let u0 = file.u0.ok_or_else(|| Error::Validation("hubbard instance requires u0".into()))?;
            let eta = file.eta.ok_or_else(|| Error::Validation("hubbard instance requires eta".into()))?;
            Ok(Instance::Hubbard(HubbardInstance::new(graph, u0, eta, file.p, file.q)?))
        }
        other => Err(Error::Validation(format!("unknown instance kind {other:?}"))),
    }
}

/// Serialize a validated instance; round-trips bit-exactly through
/// [`load_instance`].
pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, instance_to_string(inst)?)?;
    Ok(())
}

pub fn instance_to_string(inst: &Instance) -> Result<String> {
    let file = match inst {
        Instance::Heisenberg(h) => {
            h.validate()?;
            InstanceFile {
                n: h.graph.n,
                d: h.graph.d,
                edges: h.graph.edges.clone(),
                kind: "heisenberg".into(),
                u0: None,
                eta: None,
                p: Some(h.p),
                q: Some(h.q),
            }
        }
        Instance::Hubbard(h) => {
            h.validate()?;
            InstanceFile {
                n: h.graph.n,
                d: h.graph.d,
                edges: h.graph.edges.clone(),
                kind: "hubbard".into(),
                u0: Some(h.u0),
                eta: Some(h.eta),
                p: h.p,
                q: h.q,
            }
        }
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}
