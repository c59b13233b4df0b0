//! First- and second-order operators of a weighted multidigraph and their
//! matrices in the canonical orthonormal bases of `ℓ₂(V,m)` and `ℓ₂(A,m)`.
//!
//! First order: the evaluation maps `In: φ ↦ φ∘∂₊`, `Out: φ ↦ -φ∘∂₋` and the
//! gradient (their sum), with adjoints built from weighted arc sums. Second
//! order: the degree, averaging and Laplace operators obtained by composing
//! a first-order map's adjoint with a first-order map. `In` variants read
//! arcs at their terminal vertex, `Out` variants at their initial vertex.
//!
//! Matrices act on orthonormal coordinates (values scaled by the square root
//! of the weight), so all entries are real.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{ArcFunction, RestrictedVertexFunction, VertexFunction};
use crate::graph::{GraphId, Orientation, VertexSubset, WeightedDigraph};
use crate::numerics::Mat;

/// The twelve operator matrices this crate can assemble. `B` kinds map
/// vertex space to arc space; all others are vertex-to-vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    BPlus,
    BMinus,
    B,
    DPlus,
    DMinus,
    D,
    APlus,
    AMinus,
    A,
    LPlus,
    LMinus,
    L,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 12] = [
        OperatorKind::BPlus,
        OperatorKind::BMinus,
        OperatorKind::B,
        OperatorKind::DPlus,
        OperatorKind::DMinus,
        OperatorKind::D,
        OperatorKind::APlus,
        OperatorKind::AMinus,
        OperatorKind::A,
        OperatorKind::LPlus,
        OperatorKind::LMinus,
        OperatorKind::L,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorKind::BPlus => "B+",
            OperatorKind::BMinus => "B-",
            OperatorKind::B => "B",
            OperatorKind::DPlus => "D+",
            OperatorKind::DMinus => "D-",
            OperatorKind::D => "D",
            OperatorKind::APlus => "A+",
            OperatorKind::AMinus => "A-",
            OperatorKind::A => "A",
            OperatorKind::LPlus => "L+",
            OperatorKind::LMinus => "L-",
            OperatorKind::L => "L",
        }
    }

    /// True for the arc-by-vertex incidence kinds.
    pub fn is_first_order(self) -> bool {
        matches!(self, OperatorKind::BPlus | OperatorKind::BMinus | OperatorKind::B)
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown operator kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Vertices,
    Arcs,
}

/// A matrix in the canonical orthonormal bases, tagged with the ids of the
/// basis elements indexing its rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    kind: OperatorKind,
    graph: GraphId,
    row_basis: BasisKind,
    col_basis: BasisKind,
    row_ids: Vec<String>,
    col_ids: Vec<String>,
    entries: Mat,
}

impl OperatorMatrix {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn graph(&self) -> GraphId {
        self.graph
    }

    pub fn row_basis(&self) -> BasisKind {
        self.row_basis
    }

    pub fn col_basis(&self) -> BasisKind {
        self.col_basis
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[String] {
        &self.col_ids
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    /// Applies the matrix to orthonormal coordinates.
    pub fn apply(&self, coordinates: &[Complex64]) -> Vec<Complex64> {
        self.entries.matvec_complex(coordinates)
    }

    /// Principal submatrix on the given row/column ids (compression of the
    /// operator to the span of the corresponding basis vectors). Only defined
    /// for vertex-by-vertex matrices and nonempty id sets.
    pub fn compress(&self, ids: &[String]) -> Result<OperatorMatrix> {
        if self.row_basis != BasisKind::Vertices || self.col_basis != BasisKind::Vertices {
            return Err(Error::NotVertexIndexed);
        }
        if ids.is_empty() {
            return Err(Error::EmptySubset);
        }
        let positions = ids
            .iter()
            .map(|id| {
                self.row_ids
                    .iter()
                    .position(|r| r == id)
                    .ok_or_else(|| Error::MissingBasisId(id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorMatrix {
            kind: self.kind,
            graph: self.graph,
            row_basis: BasisKind::Vertices,
            col_basis: BasisKind::Vertices,
            row_ids: ids.to_vec(),
            col_ids: ids.to_vec(),
            entries: self.entries.submatrix(&positions, &positions),
        })
    }

    /// JSON export: kind, row/col ids, and real/imaginary entry grids
    /// (imaginary parts are identically zero for these operators).
    pub fn export_json(&self) -> serde_json::Value {
        let re: Vec<Vec<f64>> = self.entries.to_rows();
        let im: Vec<Vec<f64>> = vec![vec![0.0; self.entries.cols()]; self.entries.rows()];
        serde_json::json!({
            "kind": self.kind.as_str(),
            "rows": self.row_ids,
            "cols": self.col_ids,
            "re": re,
            "im": im,
        })
    }

    /// CSV export, one line per entry in row-major basis order.
    pub fn export_csv(&self) -> String {
        let mut out = String::from("kind,row,col,re,im\n");
        for (i, row_id) in self.row_ids.iter().enumerate() {
            for (j, col_id) in self.col_ids.iter().enumerate() {
                let v = normalize_zero(self.entries[(i, j)]);
                out.push_str(&format!("{},{},{},{},{}\n", self.kind, row_id, col_id, v, 0.0));
            }
        }
        out
    }
}

fn normalize_zero(x: f64) -> f64 {
    if x == 0.0 { 0.0 } else { x }
}

/// Applies the first-order operator selected by `orientation` to a vertex
/// function: `In` evaluates at the terminal vertex, `Out` at the initial
/// vertex with a sign, `Both` is the gradient (difference head minus tail).
pub fn evaluate_first_order(
    g: &WeightedDigraph,
    orientation: Orientation,
    phi: &VertexFunction,
) -> Result<ArcFunction> {
    if phi.graph() != g.id() {
        return Err(Error::GraphMismatch);
    }
    let values = g
        .arcs()
        .iter()
        .map(|arc| match orientation {
            Orientation::In => phi.value(arc.head),
            Orientation::Out => -phi.value(arc.tail),
            Orientation::Both => phi.value(arc.head) - phi.value(arc.tail),
        })
        .collect();
    ArcFunction::new(g, values)
}

/// Adjoint of the first-order operator selected by `orientation`. For
/// `Both` this is the divergence: at each vertex, entering arcs count
/// positively and leaving arcs negatively, so loops contribute nothing.
pub fn adjoint_first_order(
    g: &WeightedDigraph,
    orientation: Orientation,
    eta: &ArcFunction,
) -> Result<VertexFunction> {
    if eta.graph() != g.id() {
        return Err(Error::GraphMismatch);
    }
    let values = (0..g.order())
        .map(|v| {
            let sum_side = |arcs: &[usize], sign: f64| -> Complex64 {
                arcs.iter().map(|&a| eta.value(a) * (sign * g.arc(a).weight)).sum()
            };
            let total = match orientation {
                Orientation::In => sum_side(g.in_arcs(v), 1.0),
                Orientation::Out => sum_side(g.out_arcs(v), -1.0),
                Orientation::Both => sum_side(g.in_arcs(v), 1.0) + sum_side(g.out_arcs(v), -1.0),
            };
            total / g.vertex(v).weight
        })
        .collect();
    VertexFunction::new(g, values)
}

/// Gradient with boundary conditions: extends a function given on the
/// complement of `w` by zero and applies the gradient. Errors when the
/// function's domain is not exactly that complement.
pub fn dirichlet_gradient(
    g: &WeightedDigraph,
    w: &VertexSubset,
    phi: &RestrictedVertexFunction,
) -> Result<ArcFunction> {
    if !phi.domain_is_complement_of(g, w)? {
        return Err(Error::DomainMismatch);
    }
    evaluate_first_order(g, Orientation::Both, &phi.extend_by_zero(g)?)
}

/// Adjoint of the boundary-conditioned gradient: the divergence restricted
/// to the complement of `w`.
pub fn dirichlet_divergence(
    g: &WeightedDigraph,
    w: &VertexSubset,
    eta: &ArcFunction,
) -> Result<RestrictedVertexFunction> {
    let divergence = adjoint_first_order(g, Orientation::Both, eta)?;
    RestrictedVertexFunction::restrict(g, &divergence, &w.complement(g)?)
}

/// Assembles the operator matrix from its closed-form entries. Weights of
/// parallel arcs aggregate inside an entry; loops never touch off-diagonal
/// entries and are excluded from Laplacian diagonals.
pub fn assemble(g: &WeightedDigraph, kind: OperatorKind) -> OperatorMatrix {
    let entries = match kind {
        OperatorKind::BPlus => incidence(g, Orientation::In),
        OperatorKind::BMinus => incidence(g, Orientation::Out),
        OperatorKind::B => incidence(g, Orientation::Both),
        OperatorKind::DPlus => degree(g, Orientation::In),
        OperatorKind::DMinus => degree(g, Orientation::Out),
        OperatorKind::D => degree(g, Orientation::Both),
        OperatorKind::APlus => averaging(g, Orientation::In),
        OperatorKind::AMinus => averaging(g, Orientation::Out),
        OperatorKind::A => averaging(g, Orientation::In).add(&averaging(g, Orientation::Out)),
        OperatorKind::LPlus => laplacian(g, Orientation::In),
        OperatorKind::LMinus => laplacian(g, Orientation::Out),
        OperatorKind::L => laplacian(g, Orientation::In).add(&laplacian(g, Orientation::Out)),
    };
    matrix_for(g, kind, entries)
}

/// Assembles the same operator by composing incidence matrices, e.g. the
/// in-Laplacian as `(B+)ᵀ B`. Used to cross-check the closed forms.
pub fn assemble_composed(g: &WeightedDigraph, kind: OperatorKind) -> OperatorMatrix {
    let bp = || incidence(g, Orientation::In);
    let bm = || incidence(g, Orientation::Out);
    let b = || incidence(g, Orientation::Both);
    let entries = match kind {
        OperatorKind::BPlus => bp(),
        OperatorKind::BMinus => bm(),
        OperatorKind::B => b(),
        OperatorKind::DPlus => bp().transpose().matmul(&bp()),
        OperatorKind::DMinus => bm().transpose().matmul(&bm()),
        OperatorKind::D => {
            bp().transpose().matmul(&bp()).add(&bm().transpose().matmul(&bm()))
        }
        OperatorKind::APlus => bp().transpose().matmul(&bm()).scale(-1.0),
        OperatorKind::AMinus => bm().transpose().matmul(&bp()).scale(-1.0),
        OperatorKind::A => bp()
            .transpose()
            .matmul(&bm())
            .scale(-1.0)
            .add(&bm().transpose().matmul(&bp()).scale(-1.0)),
        OperatorKind::LPlus => bp().transpose().matmul(&b()),
        OperatorKind::LMinus => bm().transpose().matmul(&b()),
        OperatorKind::L => b().transpose().matmul(&b()),
    };
    matrix_for(g, kind, entries)
}

fn matrix_for(g: &WeightedDigraph, kind: OperatorKind, entries: Mat) -> OperatorMatrix {
    let (row_basis, row_ids) = if kind.is_first_order() {
        (BasisKind::Arcs, g.arc_ids())
    } else {
        (BasisKind::Vertices, g.vertex_ids())
    };
    OperatorMatrix {
        kind,
        graph: g.id(),
        row_basis,
        col_basis: BasisKind::Vertices,
        row_ids,
        col_ids: g.vertex_ids(),
        entries,
    }
}

/// Incidence matrix rows, one per arc: `In` puts `+√(m(a)/m(∂₊a))` at the
/// head, `Out` puts `-√(m(a)/m(∂₋a))` at the tail, `Both` does both, which
/// cancels exactly on loops.
fn incidence(g: &WeightedDigraph, orientation: Orientation) -> Mat {
    let mut m = Mat::zeros(g.size(), g.order());
    for (ai, arc) in g.arcs().iter().enumerate() {
        if orientation != Orientation::Out {
            m[(ai, arc.head)] += (arc.weight / g.vertex(arc.head).weight).sqrt();
        }
        if orientation != Orientation::In {
            m[(ai, arc.tail)] -= (arc.weight / g.vertex(arc.tail).weight).sqrt();
        }
    }
    m
}

fn degree(g: &WeightedDigraph, orientation: Orientation) -> Mat {
    let n = g.order();
    let mut m = Mat::zeros(n, n);
    for v in 0..n {
        let total = match orientation {
            Orientation::In => g.arc_weight_sum(g.in_arcs(v)),
            Orientation::Out => g.arc_weight_sum(g.out_arcs(v)),
            Orientation::Both => {
                g.arc_weight_sum(g.in_arcs(v)) + g.arc_weight_sum(g.out_arcs(v))
            }
        };
        m[(v, v)] = total / g.vertex(v).weight;
    }
    m
}

fn averaging(g: &WeightedDigraph, orientation: Orientation) -> Mat {
    let n = g.order();
    let mut m = Mat::zeros(n, n);
    for arc in g.arcs() {
        let (row, col) = match orientation {
            Orientation::In => (arc.head, arc.tail),
            Orientation::Out => (arc.tail, arc.head),
            Orientation::Both => unreachable!("averaging is assembled one side at a time"),
        };
        if row == col {
            m[(row, col)] += arc.weight / g.vertex(row).weight;
        } else {
            m[(row, col)] +=
                arc.weight / (g.vertex(row).weight * g.vertex(col).weight).sqrt();
        }
    }
    m
}

fn laplacian(g: &WeightedDigraph, orientation: Orientation) -> Mat {
    let n = g.order();
    let mut m = Mat::zeros(n, n);
    for v in 0..n {
        let arcs = match orientation {
            Orientation::In => g.in_arcs(v),
            Orientation::Out => g.out_arcs(v),
            Orientation::Both => unreachable!("laplacian is assembled one side at a time"),
        };
        let mut total = 0.0;
        for &a in arcs {
            if !g.arc(a).is_loop() {
                total += g.arc(a).weight;
            }
        }
        m[(v, v)] = total / g.vertex(v).weight;
    }
    for arc in g.arcs() {
        if arc.is_loop() {
            continue;
        }
        let (row, col) = match orientation {
            Orientation::In => (arc.head, arc.tail),
            Orientation::Out => (arc.tail, arc.head),
            Orientation::Both => unreachable!(),
        };
        m[(row, col)] -= arc.weight / (g.vertex(row).weight * g.vertex(col).weight).sqrt();
    }
    m
}
