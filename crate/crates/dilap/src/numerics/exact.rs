//! Exact-rational linear algebra for the vertex operators.
//!
//! The orthonormal-basis matrices carry square roots, but conjugating by
//! `diag(√m(v))` yields the row form (diagonal `(m(A±_v) - m(loops))/m(v)`,
//! off-diagonal `±m(A±(w,v))/m(v)`), whose entries are rational whenever the
//! weights are. Similar matrices share rank, determinant and spectrum, so
//! exact rank/determinant/multiplicity questions are answered on the row
//! form with fraction-free integer elimination. Any finite `f64` weight is
//! an exact binary fraction, hence admissible.

use num::{BigInt, BigRational, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Orientation, WeightedDigraph};
use crate::operators::OperatorKind;
use crate::structure::{acyclic_labeling, Labeling};

/// Exact rational value of a finite float.
pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::Malformed(format!("weight {x} has no finite rational value")))
}

/// Row form of a vertex-by-vertex operator, exactly. First-order kinds have
/// irrational orthonormal entries and are rejected.
pub fn row_matrix(g: &WeightedDigraph, kind: OperatorKind) -> Result<Vec<Vec<BigRational>>> {
    if kind.is_first_order() {
        return Err(Error::NotVertexIndexed);
    }
    let n = g.order();
    let vertex_weight: Vec<BigRational> =
        g.vertices().iter().map(|v| rational(v.weight)).collect::<Result<_>>()?;
    let arc_weight: Vec<BigRational> =
        g.arcs().iter().map(|a| rational(a.weight)).collect::<Result<_>>()?;
    let mut m = vec![vec![BigRational::zero(); n]; n];

    let add_degree = |m: &mut Vec<Vec<BigRational>>, orientation: Orientation| {
        for v in 0..n {
            let arcs = match orientation {
                Orientation::In => g.in_arcs(v),
                Orientation::Out => g.out_arcs(v),
                Orientation::Both => unreachable!(),
            };
            let total: BigRational =
                arcs.iter().map(|&a| arc_weight[a].clone()).sum();
            m[v][v] += total / &vertex_weight[v];
        }
    };
    let add_averaging = |m: &mut Vec<Vec<BigRational>>, orientation: Orientation| {
        for (ai, arc) in g.arcs().iter().enumerate() {
            let (row, col) = match orientation {
                Orientation::In => (arc.head, arc.tail),
                Orientation::Out => (arc.tail, arc.head),
                Orientation::Both => unreachable!(),
            };
            m[row][col] += &arc_weight[ai] / &vertex_weight[row];
        }
    };
    let add_laplacian = |m: &mut Vec<Vec<BigRational>>, orientation: Orientation| {
        for v in 0..n {
            let arcs = match orientation {
                Orientation::In => g.in_arcs(v),
                Orientation::Out => g.out_arcs(v),
                Orientation::Both => unreachable!(),
            };
            let total: BigRational = arcs
                .iter()
                .filter(|&&a| !g.arc(a).is_loop())
                .map(|&a| arc_weight[a].clone())
                .sum();
            m[v][v] += total / &vertex_weight[v];
        }
        for (ai, arc) in g.arcs().iter().enumerate() {
            if arc.is_loop() {
                continue;
            }
            let (row, col) = match orientation {
                Orientation::In => (arc.head, arc.tail),
                Orientation::Out => (arc.tail, arc.head),
                Orientation::Both => unreachable!(),
            };
            m[row][col] -= &arc_weight[ai] / &vertex_weight[row];
        }
    };

    match kind {
        OperatorKind::DPlus => add_degree(&mut m, Orientation::In),
        OperatorKind::DMinus => add_degree(&mut m, Orientation::Out),
        OperatorKind::D => {
            add_degree(&mut m, Orientation::In);
            add_degree(&mut m, Orientation::Out);
        }
        OperatorKind::APlus => add_averaging(&mut m, Orientation::In),
        OperatorKind::AMinus => add_averaging(&mut m, Orientation::Out),
        OperatorKind::A => {
            add_averaging(&mut m, Orientation::In);
            add_averaging(&mut m, Orientation::Out);
        }
        OperatorKind::LPlus => add_laplacian(&mut m, Orientation::In),
        OperatorKind::LMinus => add_laplacian(&mut m, Orientation::Out),
        OperatorKind::L => {
            add_laplacian(&mut m, Orientation::In);
            add_laplacian(&mut m, Orientation::Out);
        }
        OperatorKind::BPlus | OperatorKind::BMinus | OperatorKind::B => unreachable!(),
    }
    Ok(m)
}

/// Exact rank, and determinant for square input, by fraction-free (Bareiss)
/// elimination after clearing each row's denominators.
pub fn rank_det(rows: &[Vec<BigRational>]) -> (usize, Option<BigRational>) {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(r);
    for row in rows {
        debug_assert_eq!(row.len(), c, "ragged rational matrix");
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        m.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        scale *= lcm;
    }

    let steps = r.min(c);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    let mut last_pivot = BigInt::one();
    for k in 0..steps {
        let pivot = (k..r)
            .flat_map(|i| (k..c).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_zero());
        let Some((pi, pj)) = pivot else { break };
        if pi != k {
            m.swap(pi, k);
            sign = -sign;
        }
        if pj != k {
            for row in &mut m {
                row.swap(pj, k);
            }
            sign = -sign;
        }
        for i in k + 1..r {
            for j in k + 1..c {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
        last_pivot = prev.clone();
        rank += 1;
    }

    let det = if r == c {
        if rank < r {
            Some(BigRational::zero())
        } else {
            Some(BigRational::new(sign * last_pivot, scale))
        }
    } else {
        None
    };
    (rank, det)
}

/// Exact nullity of the operator: order minus exact rank of the row form.
/// Equals the geometric zero multiplicity of the orthonormal-basis matrix.
pub fn zero_multiplicity(g: &WeightedDigraph, kind: OperatorKind) -> Result<usize> {
    let m = row_matrix(g, kind)?;
    let (rank, _) = rank_det(&m);
    Ok(g.order() - rank)
}

/// Exact determinant of the operator (the row form is similar to the
/// orthonormal-basis matrix, so determinants agree).
pub fn determinant(g: &WeightedDigraph, kind: OperatorKind) -> Result<BigRational> {
    let m = row_matrix(g, kind)?;
    let (_, det) = rank_det(&m);
    Ok(det.expect("row matrix is square"))
}

/// Exact spectrum of the in- or out-Laplacian of an acyclic digraph: under a
/// monotone labeling the matrix is triangular with the relative in/out
/// weights on the diagonal, so the spectrum is that multiset, sorted.
pub fn acyclic_spectrum(
    g: &WeightedDigraph,
    orientation: Orientation,
) -> Result<Vec<BigRational>> {
    let arcs_of = |v: usize| match orientation {
        Orientation::In => g.in_arcs(v),
        Orientation::Out => g.out_arcs(v),
        Orientation::Both => unreachable!(),
    };
    if orientation == Orientation::Both {
        return Err(Error::Malformed(
            "exact acyclic spectra exist for the one-sided Laplacians only".into(),
        ));
    }
    if let Labeling::Cycle(_) = acyclic_labeling(g) {
        return Err(Error::NotAcyclic);
    }
    let mut values = Vec::with_capacity(g.order());
    for v in 0..g.order() {
        let total: BigRational = arcs_of(v)
            .iter()
            .map(|&a| rational(g.arc(a).weight))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        values.push(total / rational(g.vertex(v).weight)?);
    }
    values.sort();
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals_from_floats_are_exact() {
        assert_eq!(rational(0.5).unwrap(), big(1, 2));
        assert_eq!(rational(3.0).unwrap(), big(3, 1));
        // 0.1 is a binary fraction, not 1/10.
        assert_ne!(rational(0.1).unwrap(), big(1, 10));
        assert!(rational(f64::NAN).is_err());
    }

    #[test]
    fn bareiss_rank_and_det() {
        let m = vec![
            vec![big(2, 1), big(1, 1)],
            vec![big(1, 1), big(1, 1)],
        ];
        let (rank, det) = rank_det(&m);
        assert_eq!(rank, 2);
        assert_eq!(det.unwrap(), big(1, 1));

        let singular = vec![
            vec![big(1, 2), big(1, 1)],
            vec![big(1, 1), big(2, 1)],
        ];
        let (rank, det) = rank_det(&singular);
        assert_eq!(rank, 1);
        assert_eq!(det.unwrap(), BigRational::zero());

        let fractions = vec![
            vec![big(1, 3), big(1, 6)],
            vec![big(1, 2), big(3, 4)],
        ];
        let (_, det) = rank_det(&fractions);
        // 1/3 * 3/4 - 1/6 * 1/2 = 1/4 - 1/12 = 1/6
        assert_eq!(det.unwrap(), big(1, 6));
    }

    #[test]
    fn row_matrix_rejects_first_order_kinds() {
        let g = WeightedDigraph::new(
            vec![("v".into(), 1.0)],
            std::iter::empty::<(String, String, String, f64)>(),
        )
        .unwrap();
        assert!(matches!(row_matrix(&g, OperatorKind::B), Err(Error::NotVertexIndexed)));
    }
}
