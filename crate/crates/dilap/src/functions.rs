//! Functions on vertices and arcs, viewed as elements of the weighted
//! Hilbert spaces `ℓ₂(V,m)` and `ℓ₂(A,m)` with inner product
//! `⟨φ,ψ⟩ = Σ φ(x)·conj(ψ(x))·m(x)`.
//!
//! A function stores plain values indexed by basis order. Its orthonormal
//! coordinates are the values scaled by `√m(x)`; matrices in this crate act
//! on coordinates, not on values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{GraphId, VertexSubset, WeightedDigraph};

fn weighted_inner(
    values_a: &[Complex64],
    values_b: &[Complex64],
    weights: impl Iterator<Item = f64>,
) -> Complex64 {
    values_a
        .iter()
        .zip(values_b)
        .zip(weights)
        .map(|((a, b), w)| a * b.conj() * w)
        .sum()
}

macro_rules! check_graph {
    ($g:expr, $item:expr) => {
        if $item.graph != $g.id() {
            return Err(Error::GraphMismatch);
        }
    };
}

/// An element of `ℓ₂(V,m)`, stored as one value per vertex in basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    graph: GraphId,
    values: Vec<Complex64>,
}

impl VertexFunction {
    pub fn new(g: &WeightedDigraph, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != g.order() {
            return Err(Error::LengthMismatch { expected: g.order(), got: values.len() });
        }
        Ok(VertexFunction { graph: g.id(), values })
    }

    pub fn from_real(g: &WeightedDigraph, values: &[f64]) -> Result<Self> {
        Self::new(g, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(g: &WeightedDigraph, value: Complex64) -> Self {
        VertexFunction { graph: g.id(), values: vec![value; g.order()] }
    }

    /// The indicator `𝟙_S` (value 1 on `S`, 0 elsewhere).
    pub fn indicator(g: &WeightedDigraph, s: &VertexSubset) -> Result<Self> {
        g.check_subset(s)?;
        let mut values = vec![Complex64::ZERO; g.order()];
        for &v in s.members() {
            values[v] = Complex64::ONE;
        }
        Ok(VertexFunction { graph: g.id(), values })
    }

    /// The canonical unit vector `δ_v`, with value `1/√m(v)` at `v`.
    pub fn delta(g: &WeightedDigraph, vertex: &str) -> Result<Self> {
        let v = g.vertex_index(vertex)?;
        let mut values = vec![Complex64::ZERO; g.order()];
        values[v] = Complex64::new(1.0 / g.vertex(v).weight.sqrt(), 0.0);
        Ok(VertexFunction { graph: g.id(), values })
    }

    pub fn graph(&self) -> GraphId {
        self.graph
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, v: usize) -> Complex64 {
        self.values[v]
    }

    pub fn inner(&self, g: &WeightedDigraph, other: &VertexFunction) -> Result<Complex64> {
        check_graph!(g, self);
        check_graph!(g, other);
        Ok(weighted_inner(&self.values, &other.values, g.vertices().iter().map(|v| v.weight)))
    }

    pub fn norm(&self, g: &WeightedDigraph) -> Result<f64> {
        Ok(self.inner(g, self)?.re.max(0.0).sqrt())
    }

    /// Coordinates with respect to the canonical orthonormal basis:
    /// `φ(v)·√m(v)` per vertex.
    pub fn coordinates(&self, g: &WeightedDigraph) -> Result<Vec<Complex64>> {
        check_graph!(g, self);
        Ok(self
            .values
            .iter()
            .zip(g.vertices())
            .map(|(x, v)| x * v.weight.sqrt())
            .collect())
    }

    pub fn from_coordinates(g: &WeightedDigraph, coordinates: &[Complex64]) -> Result<Self> {
        if coordinates.len() != g.order() {
            return Err(Error::LengthMismatch { expected: g.order(), got: coordinates.len() });
        }
        let values = coordinates
            .iter()
            .zip(g.vertices())
            .map(|(x, v)| x / v.weight.sqrt())
            .collect();
        Ok(VertexFunction { graph: g.id(), values })
    }
}

/// An element of `ℓ₂(A,m)`, stored as one value per arc in basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcFunction {
    graph: GraphId,
    values: Vec<Complex64>,
}

impl ArcFunction {
    pub fn new(g: &WeightedDigraph, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != g.size() {
            return Err(Error::LengthMismatch { expected: g.size(), got: values.len() });
        }
        Ok(ArcFunction { graph: g.id(), values })
    }

    pub fn from_real(g: &WeightedDigraph, values: &[f64]) -> Result<Self> {
        Self::new(g, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(g: &WeightedDigraph) -> Self {
        ArcFunction { graph: g.id(), values: vec![Complex64::ZERO; g.size()] }
    }

    pub fn graph(&self) -> GraphId {
        self.graph
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, a: usize) -> Complex64 {
        self.values[a]
    }

    pub fn inner(&self, g: &WeightedDigraph, other: &ArcFunction) -> Result<Complex64> {
        check_graph!(g, self);
        check_graph!(g, other);
        Ok(weighted_inner(&self.values, &other.values, g.arcs().iter().map(|a| a.weight)))
    }

    pub fn norm(&self, g: &WeightedDigraph) -> Result<f64> {
        Ok(self.inner(g, self)?.re.max(0.0).sqrt())
    }

    /// Coordinates with respect to the canonical orthonormal basis:
    /// `η(a)·√m(a)` per arc.
    pub fn coordinates(&self, g: &WeightedDigraph) -> Result<Vec<Complex64>> {
        check_graph!(g, self);
        Ok(self.values.iter().zip(g.arcs()).map(|(x, a)| x * a.weight.sqrt()).collect())
    }

    pub fn from_coordinates(g: &WeightedDigraph, coordinates: &[Complex64]) -> Result<Self> {
        if coordinates.len() != g.size() {
            return Err(Error::LengthMismatch { expected: g.size(), got: coordinates.len() });
        }
        let values =
            coordinates.iter().zip(g.arcs()).map(|(x, a)| x / a.weight.sqrt()).collect();
        Ok(ArcFunction { graph: g.id(), values })
    }
}

/// A function defined only on a subset of vertices, used for boundary-value
/// (Dirichlet) problems: the domain is the complement of the constrained set.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedVertexFunction {
    graph: GraphId,
    domain: Vec<usize>,
    values: Vec<Complex64>,
}

impl RestrictedVertexFunction {
    pub fn new(g: &WeightedDigraph, domain: &VertexSubset, values: Vec<Complex64>) -> Result<Self> {
        g.check_subset(domain)?;
        if values.len() != domain.len() {
            return Err(Error::LengthMismatch { expected: domain.len(), got: values.len() });
        }
        Ok(RestrictedVertexFunction {
            graph: g.id(),
            domain: domain.members().to_vec(),
            values,
        })
    }

    /// Builds a function on the complement of the boundary set `w`.
    pub fn on_complement(
        g: &WeightedDigraph,
        w: &VertexSubset,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        Self::new(g, &w.complement(g)?, values)
    }

    /// Restricts a globally defined function to `domain`.
    pub fn restrict(
        g: &WeightedDigraph,
        phi: &VertexFunction,
        domain: &VertexSubset,
    ) -> Result<Self> {
        check_graph!(g, phi);
        let values = domain.members().iter().map(|&v| phi.value(v)).collect();
        Self::new(g, domain, values)
    }

    pub fn graph(&self) -> GraphId {
        self.graph
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Checks that the domain is exactly the complement of `w`.
    pub fn domain_is_complement_of(&self, g: &WeightedDigraph, w: &VertexSubset) -> Result<bool> {
        g.check_subset(w)?;
        if self.graph != g.id() {
            return Err(Error::GraphMismatch);
        }
        Ok(self.domain == w.complement(g)?.members())
    }

    /// Extends by zero to a function on all vertices.
    pub fn extend_by_zero(&self, g: &WeightedDigraph) -> Result<VertexFunction> {
        check_graph!(g, self);
        let mut values = vec![Complex64::ZERO; g.order()];
        for (&v, &x) in self.domain.iter().zip(&self.values) {
            values[v] = x;
        }
        VertexFunction::new(g, values)
    }

    pub fn inner(&self, g: &WeightedDigraph, other: &RestrictedVertexFunction) -> Result<Complex64> {
        check_graph!(g, self);
        check_graph!(g, other);
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(weighted_inner(
            &self.values,
            &other.values,
            self.domain.iter().map(|&v| g.vertex(v).weight),
        ))
    }

    pub fn norm(&self, g: &WeightedDigraph) -> Result<f64> {
        Ok(self.inner(g, self)?.re.max(0.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex_graph() -> WeightedDigraph {
        WeightedDigraph::new(
            vec![("u".into(), 4.0), ("v".into(), 9.0)],
            vec![("a".into(), "u".into(), "v".into(), 2.0)],
        )
        .unwrap()
    }

    #[test]
    fn inner_product_is_weighted() {
        let g = two_vertex_graph();
        let phi = VertexFunction::from_real(&g, &[1.0, 2.0]).unwrap();
        let psi = VertexFunction::from_real(&g, &[3.0, -1.0]).unwrap();
        let ip = phi.inner(&g, &psi).unwrap();
        assert_eq!(ip, Complex64::new(1.0 * 3.0 * 4.0 + 2.0 * (-1.0) * 9.0, 0.0));
    }

    #[test]
    fn deltas_are_orthonormal() {
        let g = two_vertex_graph();
        let du = VertexFunction::delta(&g, "u").unwrap();
        let dv = VertexFunction::delta(&g, "v").unwrap();
        assert!((du.norm(&g).unwrap() - 1.0).abs() < 1e-15);
        assert!((dv.norm(&g).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(du.inner(&g, &dv).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn coordinates_round_trip() {
        let g = two_vertex_graph();
        let phi = VertexFunction::new(
            &g,
            vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 3.0)],
        )
        .unwrap();
        let coords = phi.coordinates(&g).unwrap();
        let back = VertexFunction::from_coordinates(&g, &coords).unwrap();
        for (a, b) in phi.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-15);
        }
        // Coordinate norm equals the weighted norm.
        let coord_norm: f64 = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!((coord_norm - phi.norm(&g).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn restricted_functions_check_domains() {
        let g = two_vertex_graph();
        let w = VertexSubset::from_ids(&g, ["u"]).unwrap();
        let f = RestrictedVertexFunction::on_complement(&g, &w, vec![Complex64::ONE]).unwrap();
        assert!(f.domain_is_complement_of(&g, &w).unwrap());
        let full = f.extend_by_zero(&g).unwrap();
        assert_eq!(full.value(0), Complex64::ZERO);
        assert_eq!(full.value(1), Complex64::ONE);
        let bad = RestrictedVertexFunction::on_complement(&g, &w, vec![]);
        assert!(matches!(bad, Err(Error::LengthMismatch { .. })));
    }
}
