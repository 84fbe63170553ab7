//! Finite-dimensional bound path algebras KQ/I.
//!
//! The basis is computed by filtering the path algebra through the powers of
//! the arrow ideal: for rising N we span (I + J^N) inside the paths of length
//! below N and watch the quotient dimension. For an admissible ideal the
//! dimension stabilizes exactly when J^N lands inside I, which pins both the
//! nilpotency degree and a path basis of the quotient.

use crate::error::AlgebraError;
use crate::matrix::ExactMatrix;
use crate::quiver::{Path, Quiver, Relation};
use crate::scalar::{ExactScalar, FieldSpec};
use std::collections::HashMap;
use std::sync::Arc;

pub const DEFAULT_LENGTH_CAP: usize = 32;
pub const DEFAULT_PATH_BUDGET: usize = 200_000;

/// A bound quiver algebra with an enumerated path basis and reduction tables.
#[derive(Debug)]
pub struct BoundAlgebra {
    field: FieldSpec,
    quiver: Quiver,
    relations: Vec<Relation>,
    /// All paths of length < nilpotency degree, by length then generation order.
    paths: Vec<Path>,
    path_index: HashMap<(usize, Vec<usize>), usize>,
    /// Indices into `paths` whose residues form the basis, ascending.
    basis: Vec<usize>,
    /// Path index -> residue as a combination of basis positions.
    reduce: Vec<Vec<(usize, ExactScalar)>>,
    /// Minimal N with J^N = 0 in the quotient.
    n_nilp: usize,
    monomial: bool,
    quadratic_monomial: bool,
    radical_square_zero: bool,
}

impl BoundAlgebra {
    pub fn build(
        field: FieldSpec,
        quiver: Quiver,
        relations: Vec<Relation>,
    ) -> Result<Arc<BoundAlgebra>, AlgebraError> {
        Self::build_with_caps(field, quiver, relations, DEFAULT_LENGTH_CAP, DEFAULT_PATH_BUDGET)
    }

    pub fn build_with_caps(
        field: FieldSpec,
        quiver: Quiver,
        relations: Vec<Relation>,
        length_cap: usize,
        path_budget: usize,
    ) -> Result<Arc<BoundAlgebra>, AlgebraError> {
        for r in &relations {
            for t in r.terms() {
                if t.coeff.field() != field {
                    return Err(AlgebraError::InadmissibleRelation(
                        "relation coefficient lives in the wrong field".into(),
                    ));
                }
            }
        }

        // Paths grouped by length; grown on demand.
        let mut by_len: Vec<Vec<Path>> = vec![quiver.paths_of_length(0)];
        let mut grow = |by_len: &mut Vec<Vec<Path>>, up_to: usize| {
            while by_len.len() <= up_to {
                let prev = by_len.last().unwrap();
                let mut next = Vec::new();
                for p in prev {
                    let end = p.target(&quiver);
                    for (ai, _) in quiver.out_arrows(end) {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path {
                            source: p.source,
                            arrows,
                        });
                    }
                }
                by_len.push(next);
            }
        };

        let stage = |by_len: &[Vec<Path>], s: usize| -> Result<StageData, AlgebraError> {
            let paths: Vec<Path> = by_len[..s].iter().flatten().cloned().collect();
            let mut index = HashMap::new();
            for (i, p) in paths.iter().enumerate() {
                index.insert((p.source, p.arrows.clone()), i);
            }
            // Generators of (I + J^s)/J^s: truncated products pre * r * post.
            let mut gens: Vec<Vec<(usize, ExactScalar)>> = Vec::new();
            for r in &relations {
                let min = r.min_len();
                for pre in &paths {
                    if pre.target(&quiver) != r.source() || pre.len() + min >= s {
                        continue;
                    }
                    for post in &paths {
                        if post.source != r.target(&quiver) || pre.len() + min + post.len() >= s {
                            continue;
                        }
                        let mut vec_terms: Vec<(usize, ExactScalar)> = Vec::new();
                        for t in r.terms() {
                            if pre.len() + t.path.len() + post.len() >= s {
                                continue;
                            }
                            let whole = pre
                                .then(&t.path, &quiver)
                                .and_then(|x| x.then(post, &quiver))
                                .expect("relation terms are parallel and composable");
                            let idx = index[&(whole.source, whole.arrows)];
                            vec_terms.push((idx, t.coeff.clone()));
                        }
                        if !vec_terms.is_empty() {
                            gens.push(vec_terms);
                        }
                    }
                }
            }
            let mut mat = ExactMatrix::zeros(field, gens.len(), paths.len());
            for (row, g) in gens.iter().enumerate() {
                for (col, c) in g {
                    let prev = mat.get(row, *col);
                    mat.set(row, *col, &prev.add(c));
                }
            }
            let ech = mat.echelon();
            Ok(StageData {
                paths,
                index,
                pivots: ech.pivots().to_vec(),
                rref: ech.rref(),
                dim: 0,
            }
            .with_dim())
        };

        let mut prev: Option<StageData> = None;
        let mut total_paths = by_len[0].len();
        for s in 1..=length_cap {
            grow(&mut by_len, s - 1);
            total_paths = by_len[..s].iter().map(|v| v.len()).sum();
            if total_paths > path_budget {
                return Err(AlgebraError::InfiniteDimensional {
                    cap: length_cap,
                    paths: total_paths,
                });
            }
            let cur = stage(&by_len, s)?;
            if let Some(p) = prev {
                if p.dim == cur.dim {
                    return Ok(Arc::new(Self::finish(field, quiver, relations, p, s - 1)));
                }
            }
            prev = Some(cur);
        }
        Err(AlgebraError::InfiniteDimensional {
            cap: length_cap,
            paths: total_paths,
        })
    }

    fn finish(
        field: FieldSpec,
        quiver: Quiver,
        relations: Vec<Relation>,
        data: StageData,
        n_nilp: usize,
    ) -> BoundAlgebra {
        let StageData {
            paths,
            index,
            pivots,
            rref,
            ..
        } = data;
        let mut basis: Vec<usize> = Vec::new();
        let mut pivot_row: Vec<Option<usize>> = vec![None; paths.len()];
        {
            let mut piv = pivots.iter().enumerate().peekable();
            for c in 0..paths.len() {
                match piv.peek() {
                    Some(&(row, &pc)) if pc == c => {
                        pivot_row[c] = Some(row);
                        piv.next();
                    }
                    _ => basis.push(c),
                }
            }
        }
        let basis_pos: HashMap<usize, usize> =
            basis.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut reduce: Vec<Vec<(usize, ExactScalar)>> = Vec::with_capacity(paths.len());
        for c in 0..paths.len() {
            match pivot_row[c] {
                None => reduce.push(vec![(basis_pos[&c], ExactScalar::one(field))]),
                Some(row) => {
                    // Pivot path: e_c = -sum over free columns of rref[row][f] e_f.
                    let mut combo = Vec::new();
                    for &f in &basis {
                        if !rref.is_zero_at(row, f) {
                            combo.push((basis_pos[&f], rref.get(row, f).neg()));
                        }
                    }
                    reduce.push(combo);
                }
            }
        }

        let monomial = relations
            .iter()
            .all(|r| r.terms().len() == 1);
        let quadratic_monomial = relations
            .iter()
            .all(|r| r.as_quadratic_monomial().is_some());
        let radical_square_zero = quadratic_monomial && {
            let all_len2: std::collections::HashSet<(usize, Vec<usize>)> = quiver
                .paths_of_length(2)
                .into_iter()
                .map(|p| (p.source, p.arrows))
                .collect();
            let rel_paths: std::collections::HashSet<(usize, Vec<usize>)> = relations
                .iter()
                .filter_map(|r| r.as_quadratic_monomial())
                .map(|p| (p.source, p.arrows.clone()))
                .collect();
            rel_paths == all_len2
        };

        BoundAlgebra {
            field,
            quiver,
            relations,
            paths,
            path_index: index,
            basis,
            reduce,
            n_nilp,
            monomial,
            quadratic_monomial,
            radical_square_zero,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Dimension of the algebra over its base field.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Minimal N with J^N = 0.
    pub fn nilpotency_degree(&self) -> usize {
        self.n_nilp
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    pub fn is_quadratic_monomial(&self) -> bool {
        self.quadratic_monomial
    }

    /// Relations are exactly the length-2 paths (vacuously true when the
    /// quiver has no length-2 paths).
    pub fn is_radical_square_zero(&self) -> bool {
        self.radical_square_zero
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_path(&self, pos: usize) -> &Path {
        &self.paths[self.basis[pos]]
    }

    pub fn basis_paths(&self) -> impl Iterator<Item = &Path> {
        self.basis.iter().map(move |&i| &self.paths[i])
    }

    /// Residue of a composable path as a combination of basis positions.
    /// Paths of length >= the nilpotency degree reduce to zero.
    pub fn reduce_path(&self, path: &Path) -> Vec<(usize, ExactScalar)> {
        debug_assert!(path.is_composable(&self.quiver));
        if path.len() >= self.n_nilp {
            return Vec::new();
        }
        let idx = self.path_index[&(path.source, path.arrows.clone())];
        self.reduce[idx].clone()
    }

    /// Layout of the indecomposable projective P_v = A e_v: for each vertex w
    /// the basis positions of the paths from v sitting at w, ascending.
    pub fn projective_layout(&self, v: usize) -> ProjectiveLayout {
        let nv = self.quiver.vertex_count();
        let mut paths_at: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (pos, path) in self.basis_paths().enumerate() {
            if path.source == v {
                paths_at[path.target(&self.quiver)].push(pos);
            }
        }
        let gen_pos = paths_at[v]
            .iter()
            .position(|&pos| self.basis_path(pos).is_empty())
            .expect("trivial path is always a basis element");
        ProjectiveLayout {
            vertex: v,
            paths_at,
            gen_pos,
        }
    }
}

/// Bookkeeping for one indecomposable projective: which basis paths span its
/// vertex spaces and where the generator e_v sits.
#[derive(Debug, Clone)]
pub struct ProjectiveLayout {
    pub vertex: usize,
    pub paths_at: Vec<Vec<usize>>,
    pub gen_pos: usize,
}

impl ProjectiveLayout {
    pub fn dims(&self) -> Vec<usize> {
        self.paths_at.iter().map(|v| v.len()).collect()
    }
}

struct StageData {
    paths: Vec<Path>,
    index: HashMap<(usize, Vec<usize>), usize>,
    pivots: Vec<usize>,
    rref: ExactMatrix,
    dim: usize,
}

impl StageData {
    fn with_dim(mut self) -> StageData {
        self.dim = self.paths.len() - self.pivots.len();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::PathExpr;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    fn loop_quiver() -> Quiver {
        Quiver::new(
            vec!["v".into()],
            vec![("x".into(), "v".into(), "v".into())],
        )
        .unwrap()
    }

    fn rel(q: &Quiver, field: FieldSpec, arrows: Vec<usize>) -> Relation {
        let source = q.arrow(arrows[0]).from;
        Relation::new(
            q,
            vec![PathExpr {
                coeff: ExactScalar::one(field),
                path: Path { source, arrows },
            }],
        )
        .unwrap()
    }

    #[test]
    fn dual_numbers_basis() {
        // K[x]/(x^2): hand enumeration gives basis {e, x} and J^2 = 0.
        let q = loop_quiver();
        let r = rel(&q, f7(), vec![0, 0]);
        let a = BoundAlgebra::build(f7(), q, vec![r]).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.nilpotency_degree(), 2);
        let lens: Vec<usize> = a.basis_paths().map(|p| p.len()).collect();
        assert_eq!(lens, vec![0, 1]);
        assert!(a.is_quadratic_monomial());
        assert!(a.is_radical_square_zero());
    }

    #[test]
    fn a2_path_algebra_basis() {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![("a".into(), "1".into(), "2".into())],
        )
        .unwrap();
        let a = BoundAlgebra::build(f7(), q, vec![]).unwrap();
        // Path enumeration: {e1, e2, a}.
        assert_eq!(a.dim(), 3);
        assert_eq!(a.nilpotency_degree(), 2);
        // Vacuously radical square zero: there are no length-2 paths.
        assert!(a.is_radical_square_zero());
    }

    #[test]
    fn free_loop_is_infinite_dimensional() {
        let q = loop_quiver();
        let err = BoundAlgebra::build(f7(), q, vec![]).unwrap_err();
        assert!(matches!(err, AlgebraError::InfiniteDimensional { .. }));
    }

    #[test]
    fn truncated_polynomials_need_longer_paths() {
        // K[x]/(x^3): basis {e, x, x^2}, nilpotency degree 3, monomial but
        // not quadratic.
        let q = loop_quiver();
        let r = rel(&q, f7(), vec![0, 0, 0]);
        let a = BoundAlgebra::build(f7(), q, vec![r]).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.nilpotency_degree(), 3);
        assert!(a.is_monomial());
        assert!(!a.is_quadratic_monomial());
    }

    #[test]
    fn commutativity_relation_square() {
        // Commuting square: vertices 1,2,3,4, arrows a:1->2, b:1->3, c:2->4,
        // d:3->4, relation c.a - d.b. Basis: 4 vertices + 4 arrows + 1
        // length-2 class = 9.
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "1".into(), "3".into()),
                ("c".into(), "2".into(), "4".into()),
                ("d".into(), "3".into(), "4".into()),
            ],
        )
        .unwrap();
        let f = f7();
        let r = Relation::new(
            &q,
            vec![
                PathExpr {
                    coeff: ExactScalar::one(f),
                    path: Path {
                        source: 0,
                        arrows: vec![0, 2],
                    },
                },
                PathExpr {
                    coeff: ExactScalar::from_i64(f, -1),
                    path: Path {
                        source: 0,
                        arrows: vec![1, 3],
                    },
                },
            ],
        )
        .unwrap();
        let a = BoundAlgebra::build(f, q, vec![r]).unwrap();
        assert_eq!(a.dim(), 9);
        assert_eq!(a.nilpotency_degree(), 3);
        assert!(!a.is_monomial());
        // The two length-2 paths reduce to the same basis element.
        let p1 = Path {
            source: 0,
            arrows: vec![0, 2],
        };
        let p2 = Path {
            source: 0,
            arrows: vec![1, 3],
        };
        assert_eq!(a.reduce_path(&p1), a.reduce_path(&p2));
    }

    #[test]
    fn monomial_basis_matches_path_avoidance() {
        // Independent oracle for monomial ideals: the basis must be exactly
        // the paths that avoid every relation as a consecutive subword.
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "3".into()),
            ],
        )
        .unwrap();
        let f = f7();
        let r = rel(&q, f, vec![0, 1]); // b.a = 0
        let a = BoundAlgebra::build(f, q.clone(), vec![r]).unwrap();
        let mut avoid = Vec::new();
        for len in 0..3 {
            for p in q.paths_of_length(len) {
                let hits_relation = p.arrows.windows(2).any(|w| w == [0, 1]);
                if !hits_relation {
                    avoid.push((p.source, p.arrows));
                }
            }
        }
        let basis: Vec<(usize, Vec<usize>)> = a
            .basis_paths()
            .map(|p| (p.source, p.arrows.clone()))
            .collect();
        assert_eq!(basis.len(), avoid.len());
        for b in &basis {
            assert!(avoid.contains(b));
        }
    }
}
