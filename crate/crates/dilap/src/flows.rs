//! Circulations, flows between designated source and sink sets, cut
//! capacities and flow values. Conservation laws are evaluated in the
//! graph's stored arc weights; the cut and value identities assemble a
//! second operator with capacity as the arc weight and vertex weight one,
//! matching the two weightings the quantities are defined in.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::functions::{ArcFunction, RestrictedVertexFunction, VertexFunction};
use crate::graph::{GraphId, Orientation, VertexSubset, WeightedDigraph};
use crate::numerics::kernel_and_rank;
use crate::operators::{
    adjoint_first_order, assemble, dirichlet_divergence, dirichlet_gradient,
    evaluate_first_order, OperatorKind,
};
use crate::structure::condensation;

fn default_weight() -> f64 {
    1.0
}

#[derive(Deserialize)]
struct NetworkVertexRecord {
    id: String,
    #[serde(default = "default_weight")]
    weight: f64,
}

#[derive(Deserialize)]
struct NetworkArcRecord {
    id: String,
    tail: String,
    head: String,
    #[serde(default = "default_weight")]
    weight: f64,
    capacity: Option<f64>,
}

#[derive(Deserialize)]
struct NetworkDocument {
    vertices: Vec<NetworkVertexRecord>,
    #[serde(default)]
    arcs: Vec<NetworkArcRecord>,
    #[serde(default)]
    sources: Vec<String>,
    #[serde(default)]
    sinks: Vec<String>,
}

/// A digraph with per-arc capacities and designated source and sink
/// vertices. Vertex weights are forced to one; arc weights are kept
/// separate from capacities, so conservation laws and capacity quantities
/// can use different weightings.
#[derive(Debug, Clone)]
pub struct CapacityNetwork {
    graph: WeightedDigraph,
    capacities: Vec<f64>,
    source_set: Vec<usize>,
    sink_set: Vec<usize>,
    warnings: Vec<String>,
}

impl CapacityNetwork {
    pub fn parse(text: &str) -> Result<Self> {
        let document: NetworkDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::build(document)
    }

    /// Programmatic constructor; arcs are (id, tail, head, weight, capacity).
    pub fn from_parts<V, A, S, T>(vertices: V, arcs: A, sources: S, sinks: T) -> Result<Self>
    where
        V: IntoIterator<Item = String>,
        A: IntoIterator<Item = (String, String, String, f64, f64)>,
        S: IntoIterator<Item = String>,
        T: IntoIterator<Item = String>,
    {
        Self::build(NetworkDocument {
            vertices: vertices
                .into_iter()
                .map(|id| NetworkVertexRecord { id, weight: 1.0 })
                .collect(),
            arcs: arcs
                .into_iter()
                .map(|(id, tail, head, weight, capacity)| NetworkArcRecord {
                    id,
                    tail,
                    head,
                    weight,
                    capacity: Some(capacity),
                })
                .collect(),
            sources: sources.into_iter().collect(),
            sinks: sinks.into_iter().collect(),
        })
    }

    fn build(document: NetworkDocument) -> Result<Self> {
        let mut warnings = Vec::new();
        for v in &document.vertices {
            if v.weight != 1.0 {
                warnings.push(format!("vertex weight on '{}' replaced by 1", v.id));
            }
        }
        let capacities: Vec<f64> = document
            .arcs
            .iter()
            .map(|a| {
                let c = a.capacity.unwrap_or(a.weight);
                if !c.is_finite() {
                    return Err(Error::NonFiniteWeight { kind: "capacity", id: a.id.clone() });
                }
                if c <= 0.0 {
                    return Err(Error::NonPositiveWeight { kind: "capacity", id: a.id.clone() });
                }
                Ok(c)
            })
            .collect::<Result<_>>()?;
        let graph = WeightedDigraph::new(
            document.vertices.into_iter().map(|v| (v.id, 1.0)).collect::<Vec<_>>(),
            document
                .arcs
                .into_iter()
                .map(|a| (a.id, a.tail, a.head, a.weight))
                .collect::<Vec<_>>(),
        )?;

        let resolve = |ids: &[String]| -> Result<Vec<usize>> {
            let mut out = Vec::with_capacity(ids.len());
            for id in ids {
                out.push(graph.vertex_index(id)?);
            }
            out.sort_unstable();
            out.dedup();
            Ok(out)
        };
        let source_set = resolve(&document.sources)?;
        let sink_set = resolve(&document.sinks)?;
        if let Some(&v) = source_set.iter().find(|v| sink_set.binary_search(v).is_ok()) {
            return Err(Error::OverlappingTerminals(graph.vertex(v).id.clone()));
        }

        let cond = condensation(&graph);
        let classes = cond.classes();
        for &v in &source_set {
            if !classes[cond.component_of[v]].counts_as_source() {
                return Err(Error::MisplacedTerminal {
                    vertex: graph.vertex(v).id.clone(),
                    role: "source",
                });
            }
        }
        for &v in &sink_set {
            if !classes[cond.component_of[v]].counts_as_sink() {
                return Err(Error::MisplacedTerminal {
                    vertex: graph.vertex(v).id.clone(),
                    role: "sink",
                });
            }
        }

        Ok(CapacityNetwork { graph, capacities, source_set, sink_set, warnings })
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    pub fn capacity(&self, arc: usize) -> f64 {
        self.capacities[arc]
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_set
    }

    pub fn sink_indices(&self) -> &[usize] {
        &self.sink_set
    }

    pub fn source_ids(&self) -> Vec<String> {
        self.source_set.iter().map(|&v| self.graph.vertex(v).id.clone()).collect()
    }

    pub fn sink_ids(&self) -> Vec<String> {
        self.sink_set.iter().map(|&v| self.graph.vertex(v).id.clone()).collect()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The boundary set W, designated sources and sinks together.
    pub fn boundary(&self) -> Result<VertexSubset> {
        let mut members = self.source_set.clone();
        members.extend_from_slice(&self.sink_set);
        VertexSubset::from_indices(&self.graph, members)
    }

    /// The same digraph reweighted with capacity as the arc weight
    /// (vertex weights stay at one).
    pub fn capacity_graph(&self) -> Result<WeightedDigraph> {
        WeightedDigraph::new(
            self.graph.vertices().iter().map(|v| (v.id.clone(), 1.0)).collect::<Vec<_>>(),
            self.graph
                .arcs()
                .iter()
                .zip(&self.capacities)
                .map(|(a, &c)| {
                    (
                        a.id.clone(),
                        self.graph.vertex(a.tail).id.clone(),
                        self.graph.vertex(a.head).id.clone(),
                        c,
                    )
                })
                .collect::<Vec<_>>(),
        )
    }

    /// Classical single-source single-sink reduction: when more than one
    /// source (resp. sink) is designated, adds a super vertex wired to all
    /// of them. Each super arc gets weight one and a capacity large enough
    /// never to bind (the member's total leaving/entering capacity, at
    /// least one). Never applied implicitly.
    pub fn with_super_vertices(&self) -> Result<CapacityNetwork> {
        let fresh_id = |base: &str| -> String {
            let mut id = base.to_string();
            while self.graph.vertex_index(&id).is_ok()
                || self.graph.arcs().iter().any(|a| a.id.starts_with(&id))
            {
                id.push('_');
            }
            id
        };
        let mut vertices: Vec<String> =
            self.graph.vertices().iter().map(|v| v.id.clone()).collect();
        let mut arcs: Vec<(String, String, String, f64, f64)> = self
            .graph
            .arcs()
            .iter()
            .zip(&self.capacities)
            .map(|(a, &c)| {
                (
                    a.id.clone(),
                    self.graph.vertex(a.tail).id.clone(),
                    self.graph.vertex(a.head).id.clone(),
                    a.weight,
                    c,
                )
            })
            .collect();
        let side_capacity = |arcs_at: &[usize]| -> f64 {
            let total: f64 = arcs_at.iter().map(|&a| self.capacities[a]).sum();
            total.max(1.0)
        };

        let mut sources = self.source_ids();
        if self.source_set.len() > 1 {
            let s = fresh_id("super_source");
            for (k, &v) in self.source_set.iter().enumerate() {
                arcs.push((
                    format!("{s}_a{}", k + 1),
                    s.clone(),
                    self.graph.vertex(v).id.clone(),
                    1.0,
                    side_capacity(self.graph.out_arcs(v)),
                ));
            }
            vertices.push(s.clone());
            sources = vec![s];
        }
        let mut sinks = self.sink_ids();
        if self.sink_set.len() > 1 {
            let t = fresh_id("super_sink");
            for (k, &v) in self.sink_set.iter().enumerate() {
                arcs.push((
                    format!("{t}_a{}", k + 1),
                    self.graph.vertex(v).id.clone(),
                    t.clone(),
                    1.0,
                    side_capacity(self.graph.in_arcs(v)),
                ));
            }
            vertices.push(t.clone());
            sinks = vec![t];
        }
        CapacityNetwork::from_parts(vertices, arcs, sources, sinks)
    }
}

fn arc_functions_from_kernel(g: &WeightedDigraph, kernel: &[Vec<f64>]) -> Result<Vec<ArcFunction>> {
    kernel
        .iter()
        .map(|coords| {
            let coords: Vec<Complex64> = coords.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            ArcFunction::from_coordinates(g, &coords)
        })
        .collect()
}

/// Orthonormal basis of the circulation space, the kernel of the
/// divergence. Every element satisfies the weighted conservation law at
/// every vertex.
pub fn circulation_space(g: &WeightedDigraph) -> Result<Vec<ArcFunction>> {
    let b = assemble(g, OperatorKind::B);
    let divergence = b.entries().transpose();
    arc_functions_from_kernel(g, &kernel_and_rank(&divergence, None).kernel)
}

/// Orthonormal basis of the flow space: arc functions conserved at every
/// vertex outside the designated boundary W.
pub fn flow_space(net: &CapacityNetwork) -> Result<Vec<ArcFunction>> {
    let g = net.graph();
    let w = net.boundary()?;
    let interior = w.complement(g)?;
    if interior.is_empty() {
        return Err(Error::NoInterior);
    }
    let b = assemble(g, OperatorKind::B);
    let divergence = b.entries().transpose();
    let all_cols: Vec<usize> = (0..g.size()).collect();
    let restricted = divergence.submatrix(interior.members(), &all_cols);
    arc_functions_from_kernel(g, &kernel_and_rank(&restricted, None).kernel)
}

/// Norm of the divergence of an arc function, the defect in the weighted
/// conservation law.
pub fn conservation_residual(g: &WeightedDigraph, eta: &ArcFunction) -> Result<f64> {
    adjoint_first_order(g, Orientation::Both, eta)?.norm(g)
}

/// Norm of the divergence away from the boundary set of the network.
pub fn boundary_conservation_residual(net: &CapacityNetwork, eta: &ArcFunction) -> Result<f64> {
    let w = net.boundary()?;
    dirichlet_divergence(net.graph(), &w, eta)?.norm(net.graph())
}

pub fn is_circulation(g: &WeightedDigraph, eta: &ArcFunction, tolerance: f64) -> Result<bool> {
    Ok(conservation_residual(g, eta)? <= tolerance)
}

pub fn is_flow(net: &CapacityNetwork, eta: &ArcFunction, tolerance: f64) -> Result<bool> {
    Ok(boundary_conservation_residual(net, eta)? <= tolerance)
}

/// Residual of the orthogonality relation between circulations and
/// gradients: returns the absolute inner product of `eta` against the
/// gradient of `phi` in the arc space.
pub fn orthogonality_check(
    g: &WeightedDigraph,
    eta: &ArcFunction,
    phi: &VertexFunction,
) -> Result<f64> {
    let gradient = evaluate_first_order(g, Orientation::Both, phi)?;
    Ok(eta.inner(g, &gradient)?.norm())
}

/// Dirichlet counterpart: residual of `eta` against the gradient of an
/// interior function extended by zero over the boundary.
pub fn dirichlet_orthogonality_check(
    net: &CapacityNetwork,
    eta: &ArcFunction,
    phi: &RestrictedVertexFunction,
) -> Result<f64> {
    let w = net.boundary()?;
    let gradient = dirichlet_gradient(net.graph(), &w, phi)?;
    Ok(eta.inner(net.graph(), &gradient)?.norm())
}

/// A real arc function satisfying the conservation law away from the
/// network boundary.
#[derive(Debug, Clone)]
pub struct FlowFunction {
    graph: GraphId,
    values: Vec<f64>,
}

impl FlowFunction {
    /// Validates conservation; a tolerance of `None` uses
    /// `1e-10 * (1 + max |value|)`.
    pub fn new(net: &CapacityNetwork, values: Vec<f64>, tolerance: Option<f64>) -> Result<Self> {
        let g = net.graph();
        if values.len() != g.size() {
            return Err(Error::LengthMismatch { expected: g.size(), got: values.len() });
        }
        let eta = ArcFunction::from_real(g, &values)?;
        let residual = boundary_conservation_residual(net, &eta)?;
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tolerance = tolerance.unwrap_or(1e-10 * (1.0 + scale));
        if residual > tolerance {
            return Err(Error::NotConserved { residual, tolerance });
        }
        Ok(FlowFunction { graph: g.id(), values })
    }

    pub fn from_arc_function(
        net: &CapacityNetwork,
        eta: &ArcFunction,
        tolerance: Option<f64>,
    ) -> Result<Self> {
        let g = net.graph();
        if eta.graph() != g.id() {
            return Err(Error::GraphMismatch);
        }
        let scale = eta.values().iter().fold(0.0f64, |m, z| m.max(z.norm()));
        for (a, z) in eta.values().iter().enumerate() {
            if z.im.abs() > 1e-12 * (1.0 + scale) {
                return Err(Error::ComplexFlow(g.arc(a).id.clone()));
            }
        }
        Self::new(net, eta.values().iter().map(|z| z.re).collect(), tolerance)
    }

    pub fn graph(&self) -> GraphId {
        self.graph
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, arc: usize) -> f64 {
        self.values[arc]
    }

    pub fn as_arc_function(&self, g: &WeightedDigraph) -> Result<ArcFunction> {
        if self.graph != g.id() {
            return Err(Error::GraphMismatch);
        }
        ArcFunction::from_real(g, &self.values)
    }

    pub fn scaled(&self, factor: f64) -> FlowFunction {
        FlowFunction { graph: self.graph, values: self.values.iter().map(|v| v * factor).collect() }
    }
}

#[derive(Deserialize)]
struct FlowValueRecord {
    id: String,
    value: f64,
}

#[derive(Deserialize)]
struct FlowDocument {
    values: Vec<FlowValueRecord>,
}

/// Parses a flow file: arcs not mentioned default to zero, unknown arc ids
/// are an error, and the result must satisfy conservation on the network.
pub fn parse_flow_values(
    net: &CapacityNetwork,
    text: &str,
    tolerance: Option<f64>,
) -> Result<FlowFunction> {
    let document: FlowDocument =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let g = net.graph();
    let mut values = vec![0.0; g.size()];
    for record in document.values {
        let a = g.arc_index(&record.id)?;
        values[a] = record.value;
    }
    FlowFunction::new(net, values, tolerance)
}

#[derive(Debug, Clone)]
pub struct CutReport {
    /// Arc ids leaving the cut set, in basis order.
    pub cut_arcs: Vec<String>,
    pub value: f64,
    pub by_sum: f64,
    pub by_quadratic_form: f64,
    pub tolerance: f64,
    pub agrees: bool,
}

/// Capacity of the out-cut determined by `x`, computed twice: directly as
/// the capacity sum over leaving arcs, and as the quadratic form of the
/// out-Laplacian assembled with capacity as the arc weight.
pub fn cut_capacity(net: &CapacityNetwork, x: &VertexSubset) -> Result<CutReport> {
    let g = net.graph();
    g.check_subset(x)?;
    if let Some(&v) = net.source_set.iter().find(|&&v| !x.contains(v)) {
        return Err(Error::BadCut(g.vertex(v).id.clone()));
    }
    if let Some(&v) = net.sink_set.iter().find(|&&v| x.contains(v)) {
        return Err(Error::BadCut(g.vertex(v).id.clone()));
    }

    let mut cut_arcs = Vec::new();
    let mut by_sum = 0.0;
    for (a, arc) in g.arcs().iter().enumerate() {
        if x.contains(arc.tail) && !x.contains(arc.head) {
            cut_arcs.push(arc.id.clone());
            by_sum += net.capacities[a];
        }
    }

    let cg = net.capacity_graph()?;
    let cx = VertexSubset::from_indices(&cg, x.members().iter().copied())?;
    let indicator = VertexFunction::indicator(&cg, &cx)?;
    let lminus = assemble(&cg, OperatorKind::LMinus);
    let image = VertexFunction::from_coordinates(&cg, &lminus.apply(&indicator.coordinates(&cg)?))?;
    let by_quadratic_form = indicator.inner(&cg, &image)?.re;

    let tolerance = 1e-10 * by_sum.max(1.0);
    Ok(CutReport {
        cut_arcs,
        value: by_sum,
        by_sum,
        by_quadratic_form,
        tolerance,
        agrees: (by_sum - by_quadratic_form).abs() <= tolerance,
    })
}

#[derive(Debug, Clone)]
pub struct ValueReport {
    pub source: String,
    pub value: f64,
    pub by_sum: f64,
    pub by_inner_product: f64,
    pub tolerance: f64,
    pub agrees: bool,
}

/// Net flow out of a designated source vertex, computed twice: as the sum
/// of the flow over leaving arcs, and as the inner product of the gradient
/// of the vertex indicator against the capacity-normalized flow in the
/// capacity weighting.
pub fn flow_value(net: &CapacityNetwork, eta: &FlowFunction, x: &str) -> Result<ValueReport> {
    let g = net.graph();
    if eta.graph() != g.id() {
        return Err(Error::GraphMismatch);
    }
    let v = g.vertex_index(x)?;
    if net.source_set.binary_search(&v).is_err() {
        return Err(Error::NotADesignatedSource(x.to_string()));
    }

    let by_sum: f64 = g.out_arcs(v).iter().map(|&a| eta.values[a]).sum();

    let cg = net.capacity_graph()?;
    let sx = VertexSubset::from_indices(&cg, [v])?;
    let indicator = VertexFunction::indicator(&cg, &sx)?;
    let gradient = evaluate_first_order(&cg, Orientation::Both, &indicator)?;
    let normalized: Vec<Complex64> = eta
        .values
        .iter()
        .zip(&net.capacities)
        .map(|(&value, &c)| Complex64::new(value / c, 0.0))
        .collect();
    let normalized = ArcFunction::new(&cg, normalized)?;
    let by_inner_product = -gradient.inner(&cg, &normalized)?.re;

    let tolerance = 1e-10 * by_sum.abs().max(1.0);
    Ok(ValueReport {
        source: x.to_string(),
        value: by_sum,
        by_sum,
        by_inner_product,
        tolerance,
        agrees: (by_sum - by_inner_product).abs() <= tolerance,
    })
}

/// Inclusive feasibility bounds: `0 <= eta(a) <= c(a)` on every arc.
pub fn is_feasible(net: &CapacityNetwork, eta: &FlowFunction) -> bool {
    eta.values.iter().zip(&net.capacities).all(|(&v, &c)| 0.0 <= v && v <= c)
}
