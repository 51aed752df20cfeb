//! Spin networks: undirected weighted coupling graphs with per-site fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected coupling edge between two sites (1-based), in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

/// A network of n spin-1/2 particles: couplings b_ij on edges plus per-site
/// Zeeman frequencies h_i, both in rad/s. Edges are stored once per unordered
/// pair with i < j; every coupling sum in the crate iterates unordered pairs
/// once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinNetwork {
    n: usize,
    edges: Vec<Edge>,
    fields: Vec<f64>,
}

impl SpinNetwork {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>, fields: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidNetwork("need at least one spin".into()));
        }
        if fields.len() != n {
            return Err(Error::InvalidNetwork(format!(
                "{} fields for {} sites",
                fields.len(),
                n
            )));
        }
        if fields.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidNetwork("non-finite field".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (i, j, b) in edges {
            if i == j {
                return Err(Error::InvalidNetwork(format!("self-edge on site {i}")));
            }
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({i},{j}) out of range 1..={n}"
                )));
            }
            if !b.is_finite() {
                return Err(Error::InvalidNetwork(format!("non-finite coupling on ({i},{j})")));
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            if !seen.insert((lo, hi)) {
                return Err(Error::InvalidNetwork(format!("duplicate edge ({lo},{hi})")));
            }
            normalized.push(Edge { i: lo, j: hi, coupling: b });
        }
        Ok(Self { n, edges: normalized, fields })
    }

    /// Uniformly coupled open chain with a field h on both end sites only.
    pub fn chain(n: usize, coupling: f64, end_field: f64) -> Result<Self> {
        let edges = (1..n).map(|i| (i, i + 1, coupling)).collect();
        let mut fields = vec![0.0; n];
        fields[0] = end_field;
        fields[n - 1] = end_field;
        Self::new(n, edges, fields)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn field(&self, site: usize) -> Result<f64> {
        self.check_site(site)?;
        Ok(self.fields[site - 1])
    }

    /// Copy with one site's field replaced.
    pub fn with_field(&self, site: usize, value: f64) -> Result<Self> {
        self.check_site(site)?;
        let mut out = self.clone();
        out.fields[site - 1] = value;
        Ok(out)
    }

    /// Copy with every field replaced.
    pub fn with_fields(&self, fields: Vec<f64>) -> Result<Self> {
        Self::new(
            self.n,
            self.edges.iter().map(|e| (e.i, e.j, e.coupling)).collect(),
            fields,
        )
    }

    /// Copy with the coupling on the unordered edge (i, j) replaced.
    pub fn with_coupling(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let mut out = self.clone();
        let edge = out
            .edges
            .iter_mut()
            .find(|e| e.i == lo && e.j == hi)
            .ok_or_else(|| Error::InvalidNetwork(format!("no edge ({lo},{hi})")))?;
        edge.coupling = value;
        Ok(out)
    }

    /// Copy with every coupling multiplied by `scale`.
    pub fn with_scaled_couplings(&self, scale: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.coupling *= scale;
        }
        out
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n {
            return Err(Error::SiteOutOfRange { site, n: self.n });
        }
        Ok(())
    }
}
