//! Weighted multidigraph data model.
//!
//! A digraph here is a finite vertex list, a finite arc list (loops and
//! parallel arcs allowed) and strictly positive weights on both. Arc `a`
//! runs from its tail `∂₋a` to its head `∂₊a`. The file order of vertices
//! and arcs is the canonical basis order used by every matrix in this crate.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// Identity token tying subsets, functions and matrices back to the digraph
/// they were built for. Two separately constructed digraphs never compare
/// equal by id, even when their data agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphId(u64);

fn fresh_graph_id() -> GraphId {
    GraphId(NEXT_GRAPH_ID.fetch_add(1, AtomicOrdering::Relaxed))
}

/// Selects arcs by their relation to a vertex: `In` means arcs ending there
/// (the head side), `Out` arcs starting there (the tail side), `Both` the
/// disjoint union, in which a loop is counted twice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    In,
    Out,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub weight: f64,
}

/// `tail` and `head` are indices into the vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

impl Arc {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// Endpoint selected by orientation: `In` is the head, `Out` the tail.
    pub fn endpoint(&self, orientation: Orientation) -> usize {
        match orientation {
            Orientation::In => self.head,
            Orientation::Out => self.tail,
            Orientation::Both => panic!("endpoint requires a one-sided orientation"),
        }
    }

    /// The endpoint opposite to `orientation`: for `In` the tail, for `Out` the head.
    pub fn far_endpoint(&self, orientation: Orientation) -> usize {
        match orientation {
            Orientation::In => self.tail,
            Orientation::Out => self.head,
            Orientation::Both => panic!("far_endpoint requires a one-sided orientation"),
        }
    }
}

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexRecord {
    id: String,
    #[serde(default = "default_weight")]
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArcRecord {
    id: String,
    tail: String,
    head: String,
    #[serde(default = "default_weight")]
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDocument {
    vertices: Vec<VertexRecord>,
    #[serde(default)]
    arcs: Vec<ArcRecord>,
}

#[derive(Debug)]
pub struct WeightedDigraph {
    id: GraphId,
    vertices: Vec<Vertex>,
    arcs: Vec<Arc>,
    vertex_lookup: HashMap<String, usize>,
    arc_lookup: HashMap<String, usize>,
    in_arcs: Vec<Vec<usize>>,
    out_arcs: Vec<Vec<usize>>,
}

impl Clone for WeightedDigraph {
    /// A clone carries the same identity: it is the same digraph, so
    /// functions and subsets built for the original remain valid on it.
    fn clone(&self) -> Self {
        WeightedDigraph {
            id: self.id,
            vertices: self.vertices.clone(),
            arcs: self.arcs.clone(),
            vertex_lookup: self.vertex_lookup.clone(),
            arc_lookup: self.arc_lookup.clone(),
            in_arcs: self.in_arcs.clone(),
            out_arcs: self.out_arcs.clone(),
        }
    }
}

impl PartialEq for WeightedDigraph {
    /// Structural equality on the data model; identity tokens are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arcs == other.arcs
    }
}

impl WeightedDigraph {
    /// Builds a digraph from `(id, weight)` vertex pairs and
    /// `(id, tail-id, head-id, weight)` arc tuples, in basis order.
    pub fn new<V, A>(vertices: V, arcs: A) -> Result<Self>
    where
        V: IntoIterator<Item = (String, f64)>,
        A: IntoIterator<Item = (String, String, String, f64)>,
    {
        let vertex_records = vertices
            .into_iter()
            .map(|(id, weight)| VertexRecord { id, weight })
            .collect();
        let arc_records = arcs
            .into_iter()
            .map(|(id, tail, head, weight)| ArcRecord { id, tail, head, weight })
            .collect();
        Self::from_document(GraphDocument { vertices: vertex_records, arcs: arc_records })
    }

    /// Parses the JSON graph format. Weights default to 1; every validation
    /// error names the offending id.
    pub fn parse(text: &str) -> Result<Self> {
        let document: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_document(document)
    }

    fn from_document(document: GraphDocument) -> Result<Self> {
        let mut vertex_lookup = HashMap::with_capacity(document.vertices.len());
        let mut vertices = Vec::with_capacity(document.vertices.len());
        for record in document.vertices {
            check_weight(record.weight, "vertex", &record.id)?;
            if vertex_lookup.insert(record.id.clone(), vertices.len()).is_some() {
                return Err(Error::DuplicateVertex(record.id));
            }
            vertices.push(Vertex { id: record.id, weight: record.weight });
        }

        let mut arc_lookup = HashMap::with_capacity(document.arcs.len());
        let mut arcs = Vec::with_capacity(document.arcs.len());
        let mut in_arcs = vec![Vec::new(); vertices.len()];
        let mut out_arcs = vec![Vec::new(); vertices.len()];
        for record in document.arcs {
            check_weight(record.weight, "arc", &record.id)?;
            let resolve = |endpoint: &str| {
                vertex_lookup.get(endpoint).copied().ok_or_else(|| Error::DanglingEndpoint {
                    arc: record.id.clone(),
                    vertex: endpoint.to_string(),
                })
            };
            let tail = resolve(&record.tail)?;
            let head = resolve(&record.head)?;
            if arc_lookup.insert(record.id.clone(), arcs.len()).is_some() {
                return Err(Error::DuplicateArc(record.id));
            }
            out_arcs[tail].push(arcs.len());
            in_arcs[head].push(arcs.len());
            arcs.push(Arc { id: record.id, tail, head, weight: record.weight });
        }

        Ok(WeightedDigraph {
            id: fresh_graph_id(),
            vertices,
            arcs,
            vertex_lookup,
            arc_lookup,
            in_arcs,
            out_arcs,
        })
    }

    /// Serializes back to the JSON graph format, preserving basis order.
    /// `parse(to_json(g))` reproduces `g` up to identity token.
    pub fn to_json(&self) -> String {
        let document = GraphDocument {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexRecord { id: v.id.clone(), weight: v.weight })
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcRecord {
                    id: a.id.clone(),
                    tail: self.vertices[a.tail].id.clone(),
                    head: self.vertices[a.head].id.clone(),
                    weight: a.weight,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&document).expect("graph document serializes")
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn size(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn vertex(&self, index: usize) -> &Vertex {
        &self.vertices[index]
    }

    pub fn arc(&self, index: usize) -> &Arc {
        &self.arcs[index]
    }

    pub fn vertex_ids(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.id.clone()).collect()
    }

    pub fn arc_ids(&self) -> Vec<String> {
        self.arcs.iter().map(|a| a.id.clone()).collect()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertex_lookup.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn arc_index(&self, id: &str) -> Result<usize> {
        self.arc_lookup.get(id).copied().ok_or_else(|| Error::UnknownArc(id.to_string()))
    }

    /// Arc indices incident to vertex `v` (by index), in basis order.
    /// `Both` concatenates the in-list and the out-list, so a loop appears
    /// twice, matching the disjoint-union convention for `A_v`.
    pub fn arcs_at(&self, v: usize, orientation: Orientation) -> Vec<usize> {
        match orientation {
            Orientation::In => self.in_arcs[v].clone(),
            Orientation::Out => self.out_arcs[v].clone(),
            Orientation::Both => {
                let mut all = self.in_arcs[v].clone();
                all.extend_from_slice(&self.out_arcs[v]);
                all
            }
        }
    }

    pub(crate) fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    pub(crate) fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn arc_weight_sum(&self, arcs: &[usize]) -> f64 {
        arcs.iter().map(|&a| self.arcs[a].weight).sum()
    }

    /// Relative weight of the arcs selected at `v`: `m(A±_v)/m(v)`, or the
    /// sum of both sides for `Both`. Empty arc sets give 0.
    pub fn relative_weight(&self, vertex: &str, orientation: Orientation) -> Result<f64> {
        let v = self.vertex_index(vertex)?;
        let total = match orientation {
            Orientation::In => self.arc_weight_sum(&self.in_arcs[v]),
            Orientation::Out => self.arc_weight_sum(&self.out_arcs[v]),
            Orientation::Both => {
                self.arc_weight_sum(&self.in_arcs[v]) + self.arc_weight_sum(&self.out_arcs[v])
            }
        };
        Ok(total / self.vertices[v].weight)
    }

    /// The arcs between two vertex sets, in basis order, with their weight
    /// sum. `Out` selects arcs from `b` to `c`, `In` arcs from `c` to `b`,
    /// `Both` their union (an arc lying in both, which requires it to be a
    /// loop on `b ∩ c`, is listed once).
    pub fn arc_set(
        &self,
        b: &VertexSubset,
        c: &VertexSubset,
        orientation: Orientation,
    ) -> Result<(Vec<String>, f64)> {
        self.check_subset(b)?;
        self.check_subset(c)?;
        let mut ids = Vec::new();
        let mut total = 0.0;
        for arc in &self.arcs {
            let forward = b.contains(arc.tail) && c.contains(arc.head);
            let backward = c.contains(arc.tail) && b.contains(arc.head);
            let selected = match orientation {
                Orientation::Out => forward,
                Orientation::In => backward,
                Orientation::Both => forward || backward,
            };
            if selected {
                ids.push(arc.id.clone());
                total += arc.weight;
            }
        }
        Ok((ids, total))
    }

    pub(crate) fn check_subset(&self, s: &VertexSubset) -> Result<()> {
        if s.graph() == self.id { Ok(()) } else { Err(Error::GraphMismatch) }
    }

    /// Neighbors of `vertex` through arcs of the given orientation, deduplicated,
    /// in basis order. `In` lists tails of entering arcs, `Out` heads of
    /// leaving arcs.
    pub fn neighbors(&self, vertex: &str, orientation: Orientation) -> Result<Vec<String>> {
        let v = self.vertex_index(vertex)?;
        let mut seen = vec![false; self.vertices.len()];
        let push = |list: &[usize], pick_tail: bool, seen: &mut Vec<bool>| {
            for &a in list {
                let u = if pick_tail { self.arcs[a].tail } else { self.arcs[a].head };
                seen[u] = true;
            }
        };
        match orientation {
            Orientation::In => push(&self.in_arcs[v], true, &mut seen),
            Orientation::Out => push(&self.out_arcs[v], false, &mut seen),
            Orientation::Both => {
                push(&self.in_arcs[v], true, &mut seen);
                push(&self.out_arcs[v], false, &mut seen);
            }
        }
        Ok(self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| seen[*i])
            .map(|(_, v)| v.id.clone())
            .collect())
    }

    /// The sets of terminal and initial vertices: vertices with at least one
    /// entering arc, then vertices with at least one leaving arc, each in
    /// basis order.
    pub fn in_out_vertices(&self) -> (Vec<String>, Vec<String>) {
        let heads = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.in_arcs[*i].is_empty())
            .map(|(_, v)| v.id.clone())
            .collect();
        let tails = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.out_arcs[*i].is_empty())
            .map(|(_, v)| v.id.clone())
            .collect();
        (heads, tails)
    }

    /// The subdigraph induced on `s`: the vertices of `s` and every arc with
    /// both endpoints in `s`, weights and relative order inherited. The result
    /// is a fresh digraph with its own identity.
    pub fn induced_subdigraph(&self, s: &VertexSubset) -> Result<WeightedDigraph> {
        self.check_subset(s)?;
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        let vertices = s
            .members()
            .iter()
            .map(|&v| (self.vertices[v].id.clone(), self.vertices[v].weight));
        let arcs = self.arcs.iter().filter(|a| s.contains(a.tail) && s.contains(a.head)).map(|a| {
            (
                a.id.clone(),
                self.vertices[a.tail].id.clone(),
                self.vertices[a.head].id.clone(),
                a.weight,
            )
        });
        WeightedDigraph::new(vertices.collect::<Vec<_>>(), arcs.collect::<Vec<_>>())
    }
}

fn check_weight(weight: f64, kind: &'static str, id: &str) -> Result<()> {
    if !weight.is_finite() {
        return Err(Error::NonFiniteWeight { kind, id: id.to_string() });
    }
    if weight <= 0.0 {
        return Err(Error::NonPositiveWeight { kind, id: id.to_string() });
    }
    Ok(())
}

/// A set of vertices of one digraph, stored as sorted basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    graph: GraphId,
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn from_indices(g: &WeightedDigraph, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = indices.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last()
            && last >= g.order()
        {
            return Err(Error::IndexOutOfRange { index: last, order: g.order() });
        }
        Ok(VertexSubset { graph: g.id(), members })
    }

    pub fn from_ids<S: AsRef<str>>(
        g: &WeightedDigraph,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let indices = ids
            .into_iter()
            .map(|id| g.vertex_index(id.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(g, indices)
    }

    pub fn full(g: &WeightedDigraph) -> Self {
        VertexSubset { graph: g.id(), members: (0..g.order()).collect() }
    }

    pub fn empty(g: &WeightedDigraph) -> Self {
        VertexSubset { graph: g.id(), members: Vec::new() }
    }

    pub fn complement(&self, g: &WeightedDigraph) -> Result<Self> {
        g.check_subset(self)?;
        let members = (0..g.order()).filter(|&v| !self.contains(v)).collect();
        Ok(VertexSubset { graph: self.graph, members })
    }

    pub fn union(&self, other: &VertexSubset) -> Result<Self> {
        if self.graph != other.graph {
            return Err(Error::GraphMismatch);
        }
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Ok(VertexSubset { graph: self.graph, members })
    }

    pub fn graph(&self) -> GraphId {
        self.graph
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ids(&self, g: &WeightedDigraph) -> Result<Vec<String>> {
        g.check_subset(self)?;
        Ok(self.members.iter().map(|&v| g.vertex(v).id.clone()).collect())
    }
}
