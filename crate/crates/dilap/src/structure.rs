//! Connectivity structure of a digraph: strongly connected components, the
//! condensation order, source/sink/stream classification, maximal chains,
//! directed components, and the spectral consequences (block decomposition
//! of the one-sided Laplacians, zero-multiplicity counts, triangular form
//! for acyclic digraphs).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::VertexFunction;
use crate::graph::{Orientation, VertexSubset, WeightedDigraph};
use crate::numerics::{
    self, eigenvalues, multiset_match_distance, sort_eigenvalues, MultiplicityMode,
};
use crate::operators::{assemble, OperatorKind, OperatorMatrix};

/// How a strongly connected component sits in the condensation order: no
/// entering arcs (source), no leaving arcs (sink), neither (stream), or
/// both absent (isolated component, counted as source and as sink).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentClass {
    Source,
    Sink,
    SourceAndSink,
    Stream,
}

impl ComponentClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentClass::Source => "source",
            ComponentClass::Sink => "sink",
            ComponentClass::SourceAndSink => "source-and-sink",
            ComponentClass::Stream => "stream",
        }
    }

    pub fn counts_as_source(self) -> bool {
        matches!(self, ComponentClass::Source | ComponentClass::SourceAndSink)
    }

    pub fn counts_as_sink(self) -> bool {
        matches!(self, ComponentClass::Sink | ComponentClass::SourceAndSink)
    }
}

/// Strongly connected components with the induced partial order.
#[derive(Debug, Clone)]
pub struct Condensation {
    /// Components in deterministic order (ascending smallest member);
    /// members are ascending vertex indices.
    pub components: Vec<Vec<usize>>,
    /// Vertex index to component index.
    pub component_of: Vec<usize>,
    /// Deduplicated condensation arcs, sorted.
    pub edges: Vec<(usize, usize)>,
    pub successors: Vec<Vec<usize>>,
    pub predecessors: Vec<Vec<usize>>,
}

struct TarjanState<'g> {
    g: &'g WeightedDigraph,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    counter: usize,
    components: Vec<Vec<usize>>,
}

fn strongconnect(v: usize, st: &mut TarjanState) {
    st.index[v] = Some(st.counter);
    st.low[v] = st.counter;
    st.counter += 1;
    st.stack.push(v);
    st.on_stack[v] = true;
    for &a in st.g.out_arcs(v) {
        let w = st.g.arc(a).head;
        if st.index[w].is_none() {
            strongconnect(w, st);
            st.low[v] = st.low[v].min(st.low[w]);
        } else if st.on_stack[w] {
            st.low[v] = st.low[v].min(st.index[w].unwrap());
        }
    }
    if st.low[v] == st.index[v].unwrap() {
        let mut component = Vec::new();
        loop {
            let w = st.stack.pop().unwrap();
            st.on_stack[w] = false;
            component.push(w);
            if w == v {
                break;
            }
        }
        component.sort_unstable();
        st.components.push(component);
    }
}

pub fn condensation(g: &WeightedDigraph) -> Condensation {
    let n = g.order();
    let mut st = TarjanState {
        g,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        counter: 0,
        components: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            strongconnect(v, &mut st);
        }
    }
    let mut components = st.components;
    components.sort_by_key(|c| c[0]);

    let mut component_of = vec![0; n];
    for (ci, component) in components.iter().enumerate() {
        for &v in component {
            component_of[v] = ci;
        }
    }

    let mut edges: Vec<(usize, usize)> = g
        .arcs()
        .iter()
        .filter_map(|a| {
            let (cu, cv) = (component_of[a.tail], component_of[a.head]);
            (cu != cv).then_some((cu, cv))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();

    let k = components.len();
    let mut successors = vec![Vec::new(); k];
    let mut predecessors = vec![Vec::new(); k];
    for &(u, v) in &edges {
        successors[u].push(v);
        predecessors[v].push(u);
    }

    Condensation { components, component_of, edges, successors, predecessors }
}

impl Condensation {
    pub fn classes(&self) -> Vec<ComponentClass> {
        (0..self.components.len())
            .map(|c| {
                match (self.predecessors[c].is_empty(), self.successors[c].is_empty()) {
                    (true, true) => ComponentClass::SourceAndSink,
                    (true, false) => ComponentClass::Source,
                    (false, true) => ComponentClass::Sink,
                    (false, false) => ComponentClass::Stream,
                }
            })
            .collect()
    }

    /// Reachability closure over the condensation, reflexive.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let k = self.components.len();
        let mut reach = vec![vec![false; k]; k];
        for start in 0..k {
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                if reach[start][u] {
                    continue;
                }
                reach[start][u] = true;
                stack.extend(self.successors[u].iter().copied());
            }
        }
        reach
    }
}

pub fn strongly_connected_components(g: &WeightedDigraph) -> Vec<Vec<String>> {
    condensation(g)
        .components
        .iter()
        .map(|c| c.iter().map(|&v| g.vertex(v).id.clone()).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub components: Vec<Vec<String>>,
    pub classes: Vec<ComponentClass>,
    pub condensation_edges: Vec<(usize, usize)>,
    /// Component counts; an isolated component counts in both tallies.
    pub source_count: usize,
    pub sink_count: usize,
    pub stream_vertices: Vec<String>,
    pub strongly_connected: bool,
    pub d_connected: bool,
    pub acyclic: bool,
}

pub fn classify(g: &WeightedDigraph) -> StructureReport {
    let cond = condensation(g);
    let classes = cond.classes();
    let reach = cond.reachability();
    let k = cond.components.len();
    let d_connected = (0..k).all(|i| (0..k).all(|j| reach[i][j] || reach[j][i]));
    let mut stream_vertices = Vec::new();
    for (ci, component) in cond.components.iter().enumerate() {
        if classes[ci] == ComponentClass::Stream {
            stream_vertices.extend(component.iter().map(|&v| g.vertex(v).id.clone()));
        }
    }
    stream_vertices.sort_by_key(|id| g.vertex_index(id).expect("own vertex id"));
    StructureReport {
        components: cond
            .components
            .iter()
            .map(|c| c.iter().map(|&v| g.vertex(v).id.clone()).collect())
            .collect(),
        source_count: classes.iter().filter(|c| c.counts_as_source()).count(),
        sink_count: classes.iter().filter(|c| c.counts_as_sink()).count(),
        strongly_connected: k <= 1,
        d_connected,
        acyclic: k == g.order() && g.arcs().iter().all(|a| !a.is_loop()),
        condensation_edges: cond.edges.clone(),
        classes,
        stream_vertices,
    }
}

pub fn is_d_connected(g: &WeightedDigraph) -> bool {
    classify(g).d_connected
}

#[derive(Debug, Clone)]
pub struct ChainReport {
    /// Each chain is the vertex set of a maximal chain of components,
    /// listed in basis order.
    pub chains: Vec<Vec<String>>,
    pub truncated: bool,
    pub limit: usize,
}

/// Maximal chains of the condensation order: maximal paths of its Hasse
/// diagram (transitive reduction), each running from a source component to
/// a sink component. Enumeration stops at `limit` chains (at least one) and
/// reports truncation instead of failing.
pub fn maximal_chains(g: &WeightedDigraph, limit: usize) -> ChainReport {
    let limit = limit.max(1);
    let cond = condensation(g);
    let k = cond.components.len();
    let reach = cond.reachability();

    // An edge is transitively redundant when a longer route exists.
    let mut hasse: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(u, v) in &cond.edges {
        let redundant = cond.successors[u].iter().any(|&w| w != v && reach[w][v]);
        if !redundant {
            hasse[u].push(v);
        }
    }

    let mut chains = Vec::new();
    let mut truncated = false;
    let sources: Vec<usize> =
        (0..k).filter(|&c| cond.predecessors[c].is_empty()).collect();
    'outer: for &start in &sources {
        // Depth-first path enumeration with an explicit stack of
        // (component, next child position).
        let mut path: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&(u, child)) = path.last() {
            if child == 0 && cond.successors[u].is_empty() {
                if chains.len() == limit {
                    truncated = true;
                    break 'outer;
                }
                let mut vertices: Vec<usize> = path
                    .iter()
                    .flat_map(|&(c, _)| cond.components[c].iter().copied())
                    .collect();
                vertices.sort_unstable();
                chains.push(vertices.into_iter().map(|v| g.vertex(v).id.clone()).collect());
            }
            if child < hasse[u].len() {
                path.last_mut().unwrap().1 += 1;
                path.push((hasse[u][child], 0));
            } else {
                path.pop();
            }
        }
    }
    ChainReport { chains, truncated, limit }
}

fn component_index_of_subset(
    g: &WeightedDigraph,
    cond: &Condensation,
    s: &VertexSubset,
) -> Result<Option<usize>> {
    g.check_subset(s)?;
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let ci = cond.component_of[s.members()[0]];
    Ok((cond.components[ci] == s.members()).then_some(ci))
}

/// The directed component spanned by a source component `f` and a sink
/// component `s`: the subdigraph induced on the vertices lying on some
/// directed path from `f` to `s`.
pub fn directed_component(
    g: &WeightedDigraph,
    f: &VertexSubset,
    s: &VertexSubset,
) -> Result<WeightedDigraph> {
    let cond = condensation(g);
    let classes = cond.classes();
    let fi = component_index_of_subset(g, &cond, f)?
        .filter(|&c| classes[c].counts_as_source())
        .ok_or(Error::NotASourceComponent)?;
    let si = component_index_of_subset(g, &cond, s)?
        .filter(|&c| classes[c].counts_as_sink())
        .ok_or(Error::NotASinkComponent)?;
    let reach = cond.reachability();
    if !reach[fi][si] {
        return Err(Error::NotReachable);
    }
    let vertices = (0..cond.components.len())
        .filter(|&c| reach[fi][c] && reach[c][si])
        .flat_map(|c| cond.components[c].iter().copied());
    g.induced_subdigraph(&VertexSubset::from_indices(g, vertices)?)
}

/// Compression of a vertex operator matrix to the span of a vertex subset.
pub fn compress(
    g: &WeightedDigraph,
    m: &OperatorMatrix,
    s: &VertexSubset,
) -> Result<OperatorMatrix> {
    if m.graph() != g.id() {
        return Err(Error::GraphMismatch);
    }
    m.compress(&s.ids(g)?)
}

#[derive(Debug, Clone)]
pub struct DecompositionBlock {
    pub members: Vec<String>,
    pub spectrum: Vec<Complex64>,
    /// True for source components (in-orientation) or sink components
    /// (out-orientation); false for the leftover block.
    pub terminal: bool,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub operator: OperatorKind,
    pub full_spectrum: Vec<Complex64>,
    pub blocks: Vec<DecompositionBlock>,
    pub union_spectrum: Vec<Complex64>,
    /// Largest matched distance between the full spectrum and the union of
    /// the block spectra.
    pub distance: f64,
    pub tolerance: f64,
    pub matches: bool,
}

/// Checks the block decomposition of the one-sided Laplacian: the spectrum
/// of the in-Laplacian is the union over source components (and the
/// complement block) of the compressed spectra; dually for the
/// out-Laplacian over sink components.
pub fn spectrum_decomposition_check(
    g: &WeightedDigraph,
    orientation: Orientation,
) -> Result<DecompositionReport> {
    let kind = match orientation {
        Orientation::In => OperatorKind::LPlus,
        Orientation::Out => OperatorKind::LMinus,
        Orientation::Both => {
            return Err(Error::Malformed(
                "spectral decomposition applies to the one-sided Laplacians".into(),
            ));
        }
    };
    let cond = condensation(g);
    let classes = cond.classes();
    let full = assemble(g, kind);
    let full_spectrum = eigenvalues(full.entries())?;

    let mut blocks = Vec::new();
    let mut covered = vec![false; g.order()];
    let mut union_spectrum = Vec::new();
    for (ci, component) in cond.components.iter().enumerate() {
        let terminal = match orientation {
            Orientation::In => classes[ci].counts_as_source(),
            _ => classes[ci].counts_as_sink(),
        };
        if !terminal {
            continue;
        }
        let ids: Vec<String> = component.iter().map(|&v| g.vertex(v).id.clone()).collect();
        let spectrum = eigenvalues(full.compress(&ids)?.entries())?;
        union_spectrum.extend_from_slice(&spectrum);
        for &v in component {
            covered[v] = true;
        }
        blocks.push(DecompositionBlock { members: ids, spectrum, terminal: true });
    }
    let rest: Vec<usize> = (0..g.order()).filter(|&v| !covered[v]).collect();
    if !rest.is_empty() {
        let ids: Vec<String> = rest.iter().map(|&v| g.vertex(v).id.clone()).collect();
        let spectrum = eigenvalues(full.compress(&ids)?.entries())?;
        union_spectrum.extend_from_slice(&spectrum);
        blocks.push(DecompositionBlock { members: ids, spectrum, terminal: false });
    }
    sort_eigenvalues(&mut union_spectrum);

    let distance = multiset_match_distance(&full_spectrum, &union_spectrum);
    let tolerance = 1e-8 * full.entries().frobenius_norm();
    Ok(DecompositionReport {
        operator: kind,
        full_spectrum,
        blocks,
        union_spectrum,
        distance,
        tolerance,
        matches: distance <= tolerance,
    })
}

/// Result of attempting a monotone labeling: either an ordering of the
/// vertex ids under which every arc points forward, or a directed cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Labeling {
    Monotone(Vec<String>),
    Cycle(Vec<String>),
}

/// Monotone (topological) labeling with ties broken by basis order, or a
/// cycle witness. Under a monotone labeling the in-Laplacian matrix is
/// lower triangular and the out-Laplacian upper triangular, with the
/// relative in/out weights on the diagonal.
pub fn acyclic_labeling(g: &WeightedDigraph) -> Labeling {
    let n = g.order();
    let mut indegree: Vec<usize> = (0..n).map(|v| g.in_arcs(v).len()).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(Reverse)
        .collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        placed[v] = true;
        order.push(v);
        for &a in g.out_arcs(v) {
            let h = g.arc(a).head;
            indegree[h] -= 1;
            if indegree[h] == 0 {
                ready.push(Reverse(h));
            }
        }
    }
    if order.len() == n {
        return Labeling::Monotone(order.into_iter().map(|v| g.vertex(v).id.clone()).collect());
    }

    // Walk backwards through unplaced vertices; every one keeps an entering
    // arc from another unplaced vertex, so the walk must close a cycle.
    let start = (0..n).find(|&v| !placed[v]).expect("an unplaced vertex exists");
    let mut position = vec![None; n];
    let mut walk = vec![start];
    position[start] = Some(0);
    loop {
        let current = *walk.last().unwrap();
        let predecessor = g
            .in_arcs(current)
            .iter()
            .map(|&a| g.arc(a).tail)
            .find(|&t| !placed[t])
            .expect("unplaced vertex has an unplaced predecessor");
        if let Some(p) = position[predecessor] {
            // Arcs run walk[i+1] -> walk[i]; follow them forward from the
            // repeated vertex.
            let mut cycle = vec![predecessor];
            cycle.extend(walk[p + 1..].iter().rev().copied());
            return Labeling::Cycle(
                cycle.into_iter().map(|v| g.vertex(v).id.clone()).collect(),
            );
        }
        position[predecessor] = Some(walk.len());
        walk.push(predecessor);
    }
}

/// Kernel characterization: a function lies in the kernel of the one-sided
/// Laplacian exactly when at every vertex with arcs on that side its value
/// is the weighted mean of the values at the far endpoints. Checks that
/// identity within `tolerance` at each such vertex; `Both` checks both sides.
pub fn kernel_mean_check(
    g: &WeightedDigraph,
    phi: &VertexFunction,
    orientation: Orientation,
    tolerance: f64,
) -> Result<bool> {
    if phi.graph() != g.id() {
        return Err(Error::GraphMismatch);
    }
    let check_side = |side: Orientation| -> bool {
        (0..g.order()).all(|v| {
            let arcs = match side {
                Orientation::In => g.in_arcs(v),
                Orientation::Out => g.out_arcs(v),
                Orientation::Both => unreachable!(),
            };
            if arcs.is_empty() {
                return true;
            }
            let total: f64 = arcs.iter().map(|&a| g.arc(a).weight).sum();
            let mean: Complex64 = arcs
                .iter()
                .map(|&a| {
                    let arc = g.arc(a);
                    let far = if side == Orientation::In { arc.tail } else { arc.head };
                    phi.value(far) * arc.weight
                })
                .sum::<Complex64>()
                / total;
            (phi.value(v) - mean).norm() <= tolerance
        })
    };
    Ok(match orientation {
        Orientation::In => check_side(Orientation::In),
        Orientation::Out => check_side(Orientation::Out),
        Orientation::Both => check_side(Orientation::In) && check_side(Orientation::Out),
    })
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub sources: usize,
    pub sinks: usize,
    pub mult0_in_algebraic: usize,
    pub mult0_in_geometric: usize,
    pub mult0_out_algebraic: usize,
    pub mult0_out_geometric: usize,
    pub in_agrees: bool,
    pub out_agrees: bool,
    pub agree: bool,
    pub one_directed_component: bool,
    pub zero_simple_in_both: bool,
    pub corollary_agrees: bool,
}

/// Checks that the zero multiplicity of the in-Laplacian equals the number
/// of source components and that of the out-Laplacian the number of sink
/// components, in both algebraic and geometric readings, plus the
/// corollary: zero is simple in both Laplacians exactly when the digraph
/// has one directed component (one source and one sink).
pub fn verify_source_sink_theorem(
    g: &WeightedDigraph,
    tolerance: Option<f64>,
) -> Result<TheoremReport> {
    let report = classify(g);
    let lp = assemble(g, OperatorKind::LPlus);
    let lm = assemble(g, OperatorKind::LMinus);
    let mult0_in_algebraic =
        numerics::zero_multiplicity(lp.entries(), MultiplicityMode::Algebraic, tolerance)?;
    let mult0_in_geometric =
        numerics::zero_multiplicity(lp.entries(), MultiplicityMode::Geometric, tolerance)?;
    let mult0_out_algebraic =
        numerics::zero_multiplicity(lm.entries(), MultiplicityMode::Algebraic, tolerance)?;
    let mult0_out_geometric =
        numerics::zero_multiplicity(lm.entries(), MultiplicityMode::Geometric, tolerance)?;
    let in_agrees =
        mult0_in_algebraic == report.source_count && mult0_in_geometric == report.source_count;
    let out_agrees =
        mult0_out_algebraic == report.sink_count && mult0_out_geometric == report.sink_count;
    let one_directed_component = report.source_count == 1 && report.sink_count == 1;
    let zero_simple_in_both = mult0_in_algebraic == 1
        && mult0_in_geometric == 1
        && mult0_out_algebraic == 1
        && mult0_out_geometric == 1;
    Ok(TheoremReport {
        sources: report.source_count,
        sinks: report.sink_count,
        mult0_in_algebraic,
        mult0_in_geometric,
        mult0_out_algebraic,
        mult0_out_geometric,
        in_agrees,
        out_agrees,
        agree: in_agrees && out_agrees,
        one_directed_component,
        zero_simple_in_both,
        corollary_agrees: one_directed_component == zero_simple_in_both,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn combinatorial(n: usize, arcs: &[(usize, usize)]) -> WeightedDigraph {
        WeightedDigraph::new(
            (1..=n).map(|i| (format!("v{i}"), 1.0)).collect::<Vec<_>>(),
            arcs.iter()
                .enumerate()
                .map(|(i, &(t, h))| (format!("a{}", i + 1), format!("v{t}"), format!("v{h}"), 1.0))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn cycle_is_one_component_source_and_sink() {
        let g = combinatorial(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let report = classify(&g);
        assert_eq!(report.components.len(), 1);
        assert!(report.strongly_connected);
        assert_eq!(report.classes, vec![ComponentClass::SourceAndSink]);
        assert_eq!(report.source_count, 1);
        assert_eq!(report.sink_count, 1);
        assert!(report.stream_vertices.is_empty());
        assert!(!report.acyclic);
    }

    #[test]
    fn oriented_path_is_d_connected_with_stream_interior() {
        let g = combinatorial(4, &[(1, 2), (2, 3), (3, 4)]);
        let report = classify(&g);
        assert_eq!(report.components.len(), 4);
        assert!(report.d_connected);
        assert!(!report.strongly_connected);
        assert!(report.acyclic);
        assert_eq!(report.source_count, 1);
        assert_eq!(report.sink_count, 1);
        assert_eq!(report.stream_vertices, vec!["v2", "v3"]);
    }

    #[test]
    fn isolated_vertices_count_in_both_tallies() {
        let g = combinatorial(2, &[]);
        let report = classify(&g);
        assert_eq!(report.source_count, 2);
        assert_eq!(report.sink_count, 2);
        assert!(report.acyclic);
        let chains = maximal_chains(&g, 10);
        assert_eq!(chains.chains.len(), 2);
    }

    #[test]
    fn shortcut_edges_do_not_create_chains() {
        // v1 -> v2 -> v3 plus the shortcut v1 -> v3: one maximal chain.
        let g = combinatorial(3, &[(1, 2), (2, 3), (1, 3)]);
        let report = maximal_chains(&g, 100);
        assert_eq!(report.chains, vec![vec!["v1", "v2", "v3"]]);
        assert!(!report.truncated);
    }

    #[test]
    fn chain_limit_truncates_without_failing() {
        // Two parallel two-vertex chains from two sources to two sinks.
        let g = combinatorial(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]);
        let full = maximal_chains(&g, 100);
        assert_eq!(full.chains.len(), 4);
        assert!(!full.truncated);
        let cut = maximal_chains(&g, 2);
        assert_eq!(cut.chains.len(), 2);
        assert!(cut.truncated);
    }

    #[test]
    fn directed_component_requires_valid_terminals() {
        let g = combinatorial(4, &[(1, 3), (1, 2), (3, 4), (2, 4)]);
        let f = VertexSubset::from_ids(&g, ["v1"]).unwrap();
        let s = VertexSubset::from_ids(&g, ["v4"]).unwrap();
        let d = directed_component(&g, &f, &s).unwrap();
        assert_eq!(d.order(), 4);
        let not_source = VertexSubset::from_ids(&g, ["v2"]).unwrap();
        assert!(matches!(
            directed_component(&g, &not_source, &s),
            Err(Error::NotASourceComponent)
        ));
        let h = combinatorial(3, &[(1, 2)]);
        let f = VertexSubset::from_ids(&h, ["v1"]).unwrap();
        let s = VertexSubset::from_ids(&h, ["v3"]).unwrap();
        assert!(matches!(directed_component(&h, &f, &s), Err(Error::NotReachable)));
    }

    #[test]
    fn labeling_is_monotone_with_basis_ties() {
        let g = combinatorial(5, &[(2, 4), (1, 4), (4, 5)]);
        match acyclic_labeling(&g) {
            Labeling::Monotone(order) => {
                assert_eq!(order, vec!["v1", "v2", "v3", "v4", "v5"]);
            }
            Labeling::Cycle(c) => panic!("unexpected cycle {c:?}"),
        }
    }

    #[test]
    fn cycles_and_loops_are_witnessed() {
        let g = combinatorial(3, &[(1, 2), (2, 3), (3, 2)]);
        match acyclic_labeling(&g) {
            Labeling::Cycle(cycle) => {
                assert_eq!(cycle.len(), 2);
                assert!(cycle.contains(&"v2".to_string()) && cycle.contains(&"v3".to_string()));
            }
            Labeling::Monotone(o) => panic!("unexpected order {o:?}"),
        }
        let loop_graph = WeightedDigraph::new(
            vec![("v1".into(), 1.0)],
            vec![("a1".into(), "v1".into(), "v1".into(), 1.0)],
        )
        .unwrap();
        assert_eq!(acyclic_labeling(&loop_graph), Labeling::Cycle(vec!["v1".into()]));
        assert!(!classify(&loop_graph).acyclic);
    }

    #[test]
    fn theorem_holds_on_a_small_fan() {
        let g = combinatorial(3, &[(1, 2), (1, 3)]);
        let report = verify_source_sink_theorem(&g, None).unwrap();
        assert_eq!(report.sources, 1);
        assert_eq!(report.sinks, 2);
        assert!(report.agree);
        assert!(!report.one_directed_component);
        assert!(report.corollary_agrees);
    }

    #[test]
    fn kernel_mean_detects_membership() {
        let g = combinatorial(3, &[(1, 2), (1, 3)]);
        // Out-kernel: value at v1 must equal the mean of v2, v3.
        let phi = VertexFunction::from_real(&g, &[1.5, 1.0, 2.0]).unwrap();
        assert!(kernel_mean_check(&g, &phi, Orientation::Out, 1e-12).unwrap());
        let psi = VertexFunction::from_real(&g, &[1.0, 1.0, 2.0]).unwrap();
        assert!(!kernel_mean_check(&g, &psi, Orientation::Out, 1e-12).unwrap());
    }
}
