//! Finite-dimensional representations of a bound quiver algebra and their
//! morphisms: Hom-space computation, radical filtrations, submodules,
//! quotients, and a certified isomorphism test.

use crate::algebra::BoundAlgebra;
use crate::error::{AlgebraError, HomError};
use crate::matrix::{Echelon, ExactMatrix};
use crate::quiver::Path;
use crate::scalar::{ExactScalar, FieldSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A left module: one space per vertex, one matrix per arrow a: i -> j of
/// shape dim_j x dim_i, acting on column vectors.
#[derive(Debug, Clone)]
pub struct Representation {
    alg: Arc<BoundAlgebra>,
    dims: Vec<usize>,
    mats: Vec<ExactMatrix>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.dims == other.dims && self.mats == other.mats
    }
}

impl Representation {
    pub fn new(
        alg: Arc<BoundAlgebra>,
        dims: Vec<usize>,
        mats: Vec<ExactMatrix>,
    ) -> Result<Representation, AlgebraError> {
        let q = alg.quiver();
        if dims.len() != q.vertex_count() || mats.len() != q.arrow_count() {
            return Err(AlgebraError::Linalg(crate::error::LinalgError::ShapeMismatch(
                "dims/mats counts do not match the quiver".into(),
            )));
        }
        for (ai, m) in mats.iter().enumerate() {
            let a = q.arrow(ai);
            if m.rows() != dims[a.to] || m.cols() != dims[a.from] || m.field() != alg.field() {
                return Err(AlgebraError::Linalg(crate::error::LinalgError::ShapeMismatch(
                    format!(
                        "arrow {} wants {}x{} over {}",
                        a.name, dims[a.to], dims[a.from], alg.field()
                    ),
                )));
            }
        }
        let rep = Representation { alg, dims, mats };
        for (ri, rel) in rep.alg.relations().iter().enumerate() {
            let mut acc: Option<ExactMatrix> = None;
            for t in rel.terms() {
                let ev = rep.eval_path(&t.path).scale(&t.coeff);
                acc = Some(match acc {
                    None => ev,
                    Some(a) => a.add(&ev).expect("parallel terms share shape"),
                });
            }
            if let Some(a) = acc {
                if !a.is_zero() {
                    return Err(AlgebraError::RelationNotSatisfied(ri));
                }
            }
        }
        Ok(rep)
    }

    pub(crate) fn new_unchecked(
        alg: Arc<BoundAlgebra>,
        dims: Vec<usize>,
        mats: Vec<ExactMatrix>,
    ) -> Representation {
        Representation { alg, dims, mats }
    }

    pub fn zero(alg: Arc<BoundAlgebra>) -> Representation {
        let q = alg.quiver();
        let dims = vec![0; q.vertex_count()];
        let mats = q
            .arrows()
            .iter()
            .map(|_| ExactMatrix::zeros(alg.field(), 0, 0))
            .collect();
        Representation { alg, dims, mats }
    }

    /// The simple module at a vertex.
    pub fn simple(alg: Arc<BoundAlgebra>, v: usize) -> Representation {
        let q = alg.quiver();
        assert!(v < q.vertex_count());
        let mut dims = vec![0; q.vertex_count()];
        dims[v] = 1;
        let mats = q
            .arrows()
            .iter()
            .map(|a| {
                ExactMatrix::zeros(
                    alg.field(),
                    if a.to == v { 1 } else { 0 },
                    if a.from == v { 1 } else { 0 },
                )
            })
            .collect();
        Representation { alg, dims, mats }
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.alg
    }

    pub fn field(&self) -> FieldSpec {
        self.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero_module(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_matrix(&self, a: usize) -> &ExactMatrix {
        &self.mats[a]
    }

    /// All arrow matrices vanish (the module is presented as semisimple).
    pub fn all_arrows_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// Evaluate a path: the product of arrow matrices, first arrow applied
    /// first. Shape dim_target x dim_source.
    pub fn eval_path(&self, path: &Path) -> ExactMatrix {
        let mut acc = ExactMatrix::identity(self.field(), self.dims[path.source]);
        for &a in &path.arrows {
            acc = self.mats[a].matmul(&acc).expect("path is composable");
        }
        acc
    }

    pub fn direct_sum(parts: &[&Representation]) -> Result<Representation, AlgebraError> {
        assert!(!parts.is_empty());
        let alg = parts[0].alg.clone();
        for p in parts {
            if !Arc::ptr_eq(&p.alg, &alg) {
                return Err(AlgebraError::AlgebraMismatch);
            }
        }
        let q = alg.quiver();
        let dims: Vec<usize> = (0..q.vertex_count())
            .map(|v| parts.iter().map(|p| p.dims[v]).sum())
            .collect();
        let field = alg.field();
        let mats: Vec<ExactMatrix> = (0..q.arrow_count())
            .map(|a| {
                let blocks: Vec<&ExactMatrix> = parts.iter().map(|p| &p.mats[a]).collect();
                ExactMatrix::block_diag(field, &blocks).expect("uniform field")
            })
            .collect();
        Ok(Representation { alg, dims, mats })
    }

    /// Direct sum together with the inclusion and projection of each summand.
    pub fn direct_sum_with_maps(
        parts: &[&Representation],
    ) -> Result<(Representation, Vec<RepMorphism>, Vec<RepMorphism>), AlgebraError> {
        let sum = Representation::direct_sum(parts)?;
        let q = sum.alg.quiver();
        let field = sum.field();
        let mut offsets = vec![vec![0usize; parts.len()]; q.vertex_count()];
        for v in 0..q.vertex_count() {
            let mut off = 0;
            for (k, p) in parts.iter().enumerate() {
                offsets[v][k] = off;
                off += p.dims[v];
            }
        }
        let mut incs = Vec::new();
        let mut projs = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            let mut imats = Vec::new();
            let mut pmats = Vec::new();
            for v in 0..q.vertex_count() {
                let mut inc = ExactMatrix::zeros(field, sum.dims[v], p.dims[v]);
                let mut prj = ExactMatrix::zeros(field, p.dims[v], sum.dims[v]);
                let one = ExactScalar::one(field);
                for i in 0..p.dims[v] {
                    inc.set(offsets[v][k] + i, i, &one);
                    prj.set(i, offsets[v][k] + i, &one);
                }
                imats.push(inc);
                pmats.push(prj);
            }
            incs.push(RepMorphism::new_unchecked((*p).clone(), sum.clone(), imats));
            projs.push(RepMorphism::new_unchecked(sum.clone(), (*p).clone(), pmats));
        }
        Ok((sum, incs, projs))
    }

    /// Per-vertex basis of the radical J.M = sum of arrow images.
    pub fn radical_basis(&self) -> Vec<ExactMatrix> {
        let q = self.alg.quiver();
        let field = self.field();
        (0..q.vertex_count())
            .map(|v| {
                let incoming: Vec<&ExactMatrix> =
                    q.in_arrows(v).map(|(a, _)| &self.mats[a]).collect();
                if incoming.is_empty() {
                    return ExactMatrix::zeros(field, self.dims[v], 0);
                }
                let stacked = ExactMatrix::hstack(field, &incoming).expect("uniform field");
                let ech = stacked.echelon();
                stacked.select_cols(ech.pivots())
            })
            .collect()
    }

    /// Dimension vectors of rad^k for k = 1, 2, ... until the zero module.
    pub fn radical_series(&self) -> Vec<Vec<usize>> {
        let q = self.alg.quiver();
        let field = self.field();
        let mut out = Vec::new();
        // Bases of rad^k as subspaces of the original vertex spaces.
        let mut bases = self.radical_basis();
        loop {
            let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
            let total: usize = dims.iter().sum();
            out.push(dims);
            if total == 0 || out.len() >= self.alg.nilpotency_degree() {
                break;
            }
            bases = (0..q.vertex_count())
                .map(|v| {
                    let parts: Vec<ExactMatrix> = q
                        .in_arrows(v)
                        .map(|(a, arr)| {
                            self.mats[a]
                                .matmul(&bases[arr.from])
                                .expect("shapes chain")
                        })
                        .collect();
                    if parts.is_empty() {
                        return ExactMatrix::zeros(field, self.dims[v], 0);
                    }
                    let refs: Vec<&ExactMatrix> = parts.iter().collect();
                    let stacked = ExactMatrix::hstack(field, &refs).expect("uniform field");
                    let ech = stacked.echelon();
                    stacked.select_cols(ech.pivots())
                })
                .collect();
        }
        out
    }
}

/// The indecomposable projective P_v = A e_v as a representation: the space
/// at w is spanned by the basis paths v -> w and arrows act by path extension.
pub fn projective_rep(alg: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let layout = alg.projective_layout(v);
    rep_from_path_spans(alg, &layout.paths_at)
}

/// The left ideal B.alpha of a monomial algebra, spanned by the basis paths
/// whose first applied arrow is alpha.
pub fn left_ideal_rep(alg: &Arc<BoundAlgebra>, arrow: usize) -> Result<Representation, AlgebraError> {
    if !alg.is_monomial() {
        return Err(AlgebraError::NotMonomial);
    }
    let q = alg.quiver();
    assert!(arrow < q.arrow_count());
    let mut paths_at: Vec<Vec<usize>> = vec![Vec::new(); q.vertex_count()];
    for (pos, path) in alg.basis_paths().enumerate() {
        if path.arrows.first() == Some(&arrow) {
            paths_at[path.target(q)].push(pos);
        }
    }
    Ok(rep_from_path_spans(alg, &paths_at))
}

/// Representation spanned by a set of basis paths that is closed under path
/// extension up to reduction (monomial spans and full projectives are).
fn rep_from_path_spans(alg: &Arc<BoundAlgebra>, paths_at: &[Vec<usize>]) -> Representation {
    let q = alg.quiver();
    let field = alg.field();
    let dims: Vec<usize> = paths_at.iter().map(|p| p.len()).collect();
    let mut mats = Vec::with_capacity(q.arrow_count());
    for (ai, a) in q.arrows().iter().enumerate() {
        let (w, u) = (a.from, a.to);
        let mut m = ExactMatrix::zeros(field, dims[u], dims[w]);
        for (col, &pos) in paths_at[w].iter().enumerate() {
            let mut path = alg.basis_path(pos).clone();
            path.arrows.push(ai);
            for (bpos, coeff) in alg.reduce_path(&path) {
                let row = paths_at[u]
                    .iter()
                    .position(|&x| x == bpos)
                    .expect("span is closed under extension");
                m.set(row, col, &coeff);
            }
        }
        mats.push(m);
    }
    Representation::new_unchecked(alg.clone(), dims, mats)
}

/// A morphism of representations: one matrix per vertex commuting with every
/// arrow action.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMorphism {
    source: Representation,
    target: Representation,
    mats: Vec<ExactMatrix>,
}

impl RepMorphism {
    pub fn new(
        source: Representation,
        target: Representation,
        mats: Vec<ExactMatrix>,
    ) -> Result<RepMorphism, HomError> {
        let f = RepMorphism {
            source,
            target,
            mats,
        };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Representation,
        target: Representation,
        mats: Vec<ExactMatrix>,
    ) -> RepMorphism {
        debug_assert!({
            let f = RepMorphism {
                source: source.clone(),
                target: target.clone(),
                mats: mats.clone(),
            };
            f.validate().is_ok()
        });
        RepMorphism {
            source,
            target,
            mats,
        }
    }

    pub fn validate(&self) -> Result<(), HomError> {
        let q = self.source.alg.quiver();
        if !Arc::ptr_eq(&self.source.alg, &self.target.alg) {
            return Err(HomError::Algebra(AlgebraError::AlgebraMismatch));
        }
        if self.mats.len() != q.vertex_count() {
            return Err(HomError::MorphismShape("one matrix per vertex".into()));
        }
        for v in 0..q.vertex_count() {
            let m = &self.mats[v];
            if m.rows() != self.target.dims[v] || m.cols() != self.source.dims[v] {
                return Err(HomError::MorphismShape(format!(
                    "vertex {v}: got {}x{}, want {}x{}",
                    m.rows(),
                    m.cols(),
                    self.target.dims[v],
                    self.source.dims[v]
                )));
            }
        }
        for (ai, a) in q.arrows().iter().enumerate() {
            let lhs = self.target.mats[ai].matmul(&self.mats[a.from])?;
            let rhs = self.mats[a.to].matmul(&self.source.mats[ai])?;
            if lhs != rhs {
                return Err(HomError::MorphismShape(format!(
                    "square for arrow {} does not commute",
                    a.name
                )));
            }
        }
        Ok(())
    }

    pub fn identity(m: &Representation) -> RepMorphism {
        let mats = (0..m.dims.len())
            .map(|v| ExactMatrix::identity(m.field(), m.dims[v]))
            .collect();
        RepMorphism {
            source: m.clone(),
            target: m.clone(),
            mats,
        }
    }

    pub fn zero(source: &Representation, target: &Representation) -> RepMorphism {
        let mats = (0..source.dims.len())
            .map(|v| ExactMatrix::zeros(source.field(), target.dims[v], source.dims[v]))
            .collect();
        RepMorphism {
            source: source.clone(),
            target: target.clone(),
            mats,
        }
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn vertex_matrix(&self, v: usize) -> &ExactMatrix {
        &self.mats[v]
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// self after other (other applied first).
    pub fn compose(&self, other: &RepMorphism) -> Result<RepMorphism, HomError> {
        if other.target.dims != self.source.dims {
            return Err(HomError::MorphismShape("composition shapes".into()));
        }
        let mats: Result<Vec<ExactMatrix>, _> = (0..self.mats.len())
            .map(|v| self.mats[v].matmul(&other.mats[v]))
            .collect();
        Ok(RepMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            mats: mats?,
        })
    }

    pub fn add(&self, other: &RepMorphism) -> Result<RepMorphism, HomError> {
        let mats: Result<Vec<ExactMatrix>, _> = (0..self.mats.len())
            .map(|v| self.mats[v].add(&other.mats[v]))
            .collect();
        Ok(RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mats: mats?,
        })
    }

    pub fn sub(&self, other: &RepMorphism) -> Result<RepMorphism, HomError> {
        let mats: Result<Vec<ExactMatrix>, _> = (0..self.mats.len())
            .map(|v| self.mats[v].sub(&other.mats[v]))
            .collect();
        Ok(RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mats: mats?,
        })
    }

    pub fn neg(&self) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mats: self.mats.iter().map(|m| m.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mats: self.mats.iter().map(|m| m.scale(s)).collect(),
        }
    }

    /// Two-sided inverse when every vertex matrix is invertible.
    pub fn inverse(&self) -> Option<RepMorphism> {
        let field = self.source.field();
        let mut mats = Vec::with_capacity(self.mats.len());
        for m in &self.mats {
            if m.rows() != m.cols() {
                return None;
            }
            let ech = m.echelon();
            if ech.rank() != m.rows() {
                return None;
            }
            let inv = ech
                .solve(&ExactMatrix::identity(field, m.rows()))
                .ok()??;
            mats.push(inv);
        }
        Some(RepMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            mats,
        })
    }

    /// Flatten to a single column in the Hom-space coordinate order.
    fn flatten(&self) -> ExactMatrix {
        let field = self.source.field();
        let total: usize = self
            .mats
            .iter()
            .map(|m| m.rows() * m.cols())
            .sum();
        let mut out = ExactMatrix::zeros(field, total, 1);
        let mut off = 0;
        for m in &self.mats {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if !m.is_zero_at(r, c) {
                        out.set(off + r * m.cols() + c, 0, &m.get(r, c));
                    }
                }
            }
            off += m.rows() * m.cols();
        }
        out
    }
}

/// A basis of Hom(M, N) as the kernel of the arrow-commutation system. Every
/// morphism's coordinates in this basis are read off at the free unknowns.
#[derive(Debug, Clone)]
pub struct HomBasis {
    source: Representation,
    target: Representation,
    basis: Vec<RepMorphism>,
    free_flat: Vec<usize>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RepMorphism] {
        &self.basis
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    /// Coordinates of a morphism M -> N in this basis, as a column vector.
    pub fn coords(&self, f: &RepMorphism) -> ExactMatrix {
        debug_assert_eq!(f.source.dims, self.source.dims);
        debug_assert_eq!(f.target.dims, self.target.dims);
        let flat = f.flatten();
        let field = self.source.field();
        let mut out = ExactMatrix::zeros(field, self.free_flat.len(), 1);
        for (k, &i) in self.free_flat.iter().enumerate() {
            if !flat.is_zero_at(i, 0) {
                out.set(k, 0, &flat.get(i, 0));
            }
        }
        out
    }
}

/// Solve the commuting-square system defining Hom(M, N). When the source has
/// zero arrow action the system decouples column-by-column and is solved
/// vertex-wise; the result is the same basis the dense path would produce.
pub fn hom_space(m: &Representation, n: &Representation) -> Result<HomBasis, AlgebraError> {
    if !Arc::ptr_eq(&m.alg, &n.alg) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let q = m.alg.quiver();
    let field = m.field();
    let nv = q.vertex_count();
    let offsets: Vec<usize> = {
        let mut off = Vec::with_capacity(nv);
        let mut acc = 0;
        for v in 0..nv {
            off.push(acc);
            acc += n.dims[v] * m.dims[v];
        }
        off
    };
    let total: usize = (0..nv).map(|v| n.dims[v] * m.dims[v]).sum();

    if m.all_arrows_zero() {
        let mut basis = Vec::new();
        let mut free_flat = Vec::new();
        for v in 0..nv {
            if m.dims[v] == 0 || n.dims[v] == 0 {
                continue;
            }
            let (kv, kv_free) = out_arrow_kernel(n, v);
            for (k, &fr) in kv_free.iter().enumerate() {
                for c in 0..m.dims[v] {
                    let mut mats: Vec<ExactMatrix> = (0..nv)
                        .map(|w| ExactMatrix::zeros(field, n.dims[w], m.dims[w]))
                        .collect();
                    for r in 0..n.dims[v] {
                        if !kv.is_zero_at(r, k) {
                            mats[v].set(r, c, &kv.get(r, k));
                        }
                    }
                    basis.push(RepMorphism::new_unchecked(m.clone(), n.clone(), mats));
                    free_flat.push(offsets[v] + fr * m.dims[v] + c);
                }
            }
        }
        return Ok(HomBasis {
            source: m.clone(),
            target: n.clone(),
            basis,
            free_flat,
        });
    }

    // Dense path: one linear system over all vertex matrices at once.
    let rows: usize = q
        .arrows()
        .iter()
        .map(|a| n.dims[a.to] * m.dims[a.from])
        .sum();
    let mut sys = ExactMatrix::zeros(field, rows, total);
    let mut row = 0;
    for (ai, a) in q.arrows().iter().enumerate() {
        let (i, j) = (a.from, a.to);
        let t = &n.mats[ai];
        let s = &m.mats[ai];
        for r in 0..n.dims[j] {
            for c in 0..m.dims[i] {
                // sum_k T[r,k] phi_i[k,c] - sum_l phi_j[r,l] S[l,c] = 0
                for k in 0..n.dims[i] {
                    if !t.is_zero_at(r, k) {
                        let col = offsets[i] + k * m.dims[i] + c;
                        let prev = sys.get(row, col);
                        sys.set(row, col, &prev.add(&t.get(r, k)));
                    }
                }
                for l in 0..m.dims[j] {
                    if !s.is_zero_at(l, c) {
                        let col = offsets[j] + r * m.dims[j] + l;
                        let prev = sys.get(row, col);
                        sys.set(row, col, &prev.sub(&s.get(l, c)));
                    }
                }
                row += 1;
            }
        }
    }
    let ech = sys.echelon();
    let kernel = ech.kernel_basis();
    let free_flat = ech.free_cols();
    let mut basis = Vec::with_capacity(kernel.cols());
    for bk in 0..kernel.cols() {
        let mut mats: Vec<ExactMatrix> = (0..nv)
            .map(|v| ExactMatrix::zeros(field, n.dims[v], m.dims[v]))
            .collect();
        for v in 0..nv {
            for r in 0..n.dims[v] {
                for c in 0..m.dims[v] {
                    let idx = offsets[v] + r * m.dims[v] + c;
                    if !kernel.is_zero_at(idx, bk) {
                        mats[v].set(r, c, &kernel.get(idx, bk));
                    }
                }
            }
        }
        basis.push(RepMorphism::new_unchecked(m.clone(), n.clone(), mats));
    }
    Ok(HomBasis {
        source: m.clone(),
        target: n.clone(),
        basis,
        free_flat,
    })
}

/// Basis of the intersection of the kernels of all arrow actions out of `v`,
/// together with the free row indices that carry each column's defining unit.
pub(crate) fn out_arrow_kernel(n: &Representation, v: usize) -> (ExactMatrix, Vec<usize>) {
    let q = n.alg.quiver();
    let field = n.field();
    let outs: Vec<&ExactMatrix> = q.out_arrows(v).map(|(a, _)| &n.mats[a]).collect();
    if outs.is_empty() {
        let d = n.dims[v];
        return (ExactMatrix::identity(field, d), (0..d).collect());
    }
    let stacked = ExactMatrix::vstack(field, &outs).expect("uniform field");
    let ech = stacked.echelon();
    (ech.kernel_basis(), ech.free_cols())
}

/// Verdict of the isomorphism search.
#[derive(Debug, Clone)]
pub enum IsoVerdict {
    Yes(RepMorphism),
    No(String),
    Unknown,
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }
}

const ISO_ENUM_BUDGET: u64 = 4096;
const ISO_SAMPLE_COUNT: usize = 256;

/// Decide isomorphism: discriminating invariants first (dimension vectors,
/// radical series, Hom dimensions both ways), then a deterministic search for
/// an invertible element of Hom(M, N). `Unknown` only when the search is
/// exhausted without a witness.
pub fn is_isomorphic(
    m: &Representation,
    n: &Representation,
    seed: u64,
) -> Result<IsoVerdict, AlgebraError> {
    if !Arc::ptr_eq(&m.alg, &n.alg) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    if m.dims != n.dims {
        return Ok(IsoVerdict::No(format!(
            "dimension vectors differ: {:?} vs {:?}",
            m.dims, n.dims
        )));
    }
    if m.is_zero_module() {
        return Ok(IsoVerdict::Yes(RepMorphism::zero(m, n)));
    }
    if m.radical_series() != n.radical_series() {
        return Ok(IsoVerdict::No("radical series dimensions differ".into()));
    }
    let fwd = hom_space(m, n)?;
    let bwd = hom_space(n, m)?;
    let end_m = hom_space(m, m)?;
    let end_n = hom_space(n, n)?;
    if fwd.dim() != bwd.dim() || fwd.dim() != end_m.dim() || end_m.dim() != end_n.dim() {
        return Ok(IsoVerdict::No(format!(
            "Hom dimensions differ: hom(M,N)={}, hom(N,M)={}, end(M)={}, end(N)={}",
            fwd.dim(),
            bwd.dim(),
            end_m.dim(),
            end_n.dim()
        )));
    }
    if fwd.dim() == 0 {
        return Ok(IsoVerdict::No("no nonzero morphisms M -> N".into()));
    }

    let d = fwd.dim();
    let field = m.field();
    let check = |coeffs: &[ExactScalar]| -> Option<RepMorphism> {
        let mut acc = RepMorphism::zero(m, n);
        for (b, c) in fwd.basis().iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c)).expect("shapes match");
            }
        }
        let invertible = acc
            .mats
            .iter()
            .all(|mt| mt.rows() == mt.cols() && mt.rank() == mt.rows());
        invertible.then_some(acc)
    };

    // Single basis elements first.
    for b in fwd.basis() {
        let invertible = b
            .mats
            .iter()
            .all(|mt| mt.rows() == mt.cols() && mt.rank() == mt.rows());
        if invertible {
            return Ok(IsoVerdict::Yes(b.clone()));
        }
    }

    let enumerable = match field {
        FieldSpec::Prime(p) => (p as u64).checked_pow(d as u32).map(|t| t <= ISO_ENUM_BUDGET),
        FieldSpec::Rational => 5u64.checked_pow(d as u32).map(|t| t <= ISO_ENUM_BUDGET),
    }
    .unwrap_or(false);

    if enumerable {
        let radix: i64 = match field {
            FieldSpec::Prime(p) => p as i64,
            FieldSpec::Rational => 5,
        };
        let total = (radix as u64).pow(d as u32);
        for mut code in 0..total {
            let mut coeffs = Vec::with_capacity(d);
            for _ in 0..d {
                let digit = (code % radix as u64) as i64;
                code /= radix as u64;
                let val = match field {
                    FieldSpec::Prime(_) => digit,
                    FieldSpec::Rational => digit - 2, // grid [-2, 2]
                };
                coeffs.push(ExactScalar::from_i64(field, val));
            }
            if coeffs.iter().all(|c| c.is_zero()) {
                continue;
            }
            if let Some(w) = check(&coeffs) {
                return Ok(IsoVerdict::Yes(w));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ISO_SAMPLE_COUNT {
            let coeffs: Vec<ExactScalar> = (0..d)
                .map(|_| match field {
                    FieldSpec::Prime(p) => {
                        ExactScalar::from_i64(field, rng.gen_range(0..p as i64))
                    }
                    FieldSpec::Rational => ExactScalar::from_i64(field, rng.gen_range(-2..=2)),
                })
                .collect();
            if coeffs.iter().all(|c| c.is_zero()) {
                continue;
            }
            if let Some(w) = check(&coeffs) {
                return Ok(IsoVerdict::Yes(w));
            }
        }
    }
    Ok(IsoVerdict::Unknown)
}

/// The submodule generated by the given per-vertex column spans, with its
/// embedding. Closure under the arrow action is computed to a fixpoint.
pub fn submodule_spanned(
    e: &Representation,
    gens: &[ExactMatrix],
) -> Result<(Representation, RepMorphism), AlgebraError> {
    let q = e.alg.quiver();
    let field = e.field();
    assert_eq!(gens.len(), q.vertex_count());
    let mut bases: Vec<ExactMatrix> = gens
        .iter()
        .enumerate()
        .map(|(v, g)| {
            assert_eq!(g.rows(), e.dims[v]);
            let ech = g.echelon();
            g.select_cols(ech.pivots())
        })
        .collect();
    loop {
        let mut changed = false;
        for (ai, a) in q.arrows().iter().enumerate() {
            let image = e.mats[ai].matmul(&bases[a.from])?;
            let combined = ExactMatrix::hstack(field, &[&bases[a.to], &image])?;
            let ech = combined.echelon();
            if ech.rank() > bases[a.to].cols() {
                bases[a.to] = combined.select_cols(ech.pivots());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut mats = Vec::with_capacity(q.arrow_count());
    for (ai, a) in q.arrows().iter().enumerate() {
        let rhs = e.mats[ai].matmul(&bases[a.from])?;
        let x = bases[a.to]
            .echelon()
            .solve(&rhs)?
            .expect("closure makes the restriction well-defined");
        mats.push(x);
    }
    let sub = Representation::new_unchecked(e.alg.clone(), dims, mats);
    let emb = RepMorphism::new_unchecked(sub.clone(), e.clone(), bases);
    Ok((sub, emb))
}

/// The quotient by a submodule given per-vertex bases, with its projection.
pub fn quotient_rep(
    e: &Representation,
    sub_bases: &[ExactMatrix],
) -> Result<(Representation, RepMorphism), AlgebraError> {
    let q = e.alg.quiver();
    let field = e.field();
    let mut complements = Vec::with_capacity(q.vertex_count());
    let mut extractors = Vec::with_capacity(q.vertex_count());
    for v in 0..q.vertex_count() {
        let b = &sub_bases[v];
        let s = b.cols();
        let nvd = e.dims[v];
        // Greedily extend the submodule basis by unit vectors.
        let mut chosen: Vec<usize> = Vec::new();
        let mut span = b.clone();
        for k in 0..nvd {
            if span.cols() == nvd {
                break;
            }
            let unit = {
                let mut u = ExactMatrix::zeros(field, nvd, 1);
                u.set(k, 0, &ExactScalar::one(field));
                u
            };
            if !span.echelon().in_image(&unit)? {
                span = ExactMatrix::hstack(field, &[&span, &unit])?;
                chosen.push(k);
            }
        }
        let mut comp = ExactMatrix::zeros(field, nvd, chosen.len());
        for (j, &k) in chosen.iter().enumerate() {
            comp.set(k, j, &ExactScalar::one(field));
        }
        // Coordinate extractor: bottom rows of [B | C]^{-1}.
        let square = ExactMatrix::hstack(field, &[b, &comp])?;
        let inv = square
            .echelon()
            .solve(&ExactMatrix::identity(field, nvd))?
            .expect("basis completion is invertible");
        let rows: Vec<usize> = (s..nvd).collect();
        let mut bottom = ExactMatrix::zeros(field, rows.len(), nvd);
        for (r, &orig) in rows.iter().enumerate() {
            for c in 0..nvd {
                if !inv.is_zero_at(orig, c) {
                    bottom.set(r, c, &inv.get(orig, c));
                }
            }
        }
        complements.push(comp);
        extractors.push(bottom);
    }
    let dims: Vec<usize> = complements.iter().map(|c| c.cols()).collect();
    let mut mats = Vec::with_capacity(q.arrow_count());
    for (ai, a) in q.arrows().iter().enumerate() {
        let x = extractors[a.to]
            .matmul(&e.mats[ai])?
            .matmul(&complements[a.from])?;
        mats.push(x);
    }
    let quot = Representation::new_unchecked(e.alg.clone(), dims, mats);
    let proj = RepMorphism::new_unchecked(e.clone(), quot.clone(), extractors);
    Ok((quot, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{PathExpr, Quiver, Relation};

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    fn dual_numbers() -> Arc<BoundAlgebra> {
        let q = Quiver::new(
            vec!["v".into()],
            vec![("x".into(), "v".into(), "v".into())],
        )
        .unwrap();
        let r = Relation::new(
            &q,
            vec![PathExpr {
                coeff: ExactScalar::one(f7()),
                path: Path {
                    source: 0,
                    arrows: vec![0, 0],
                },
            }],
        )
        .unwrap();
        BoundAlgebra::build(f7(), q, vec![r]).unwrap()
    }

    fn a2() -> Arc<BoundAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![("a".into(), "1".into(), "2".into())],
        )
        .unwrap();
        BoundAlgebra::build(f7(), q, vec![]).unwrap()
    }

    fn cyclic3_rsz() -> Arc<BoundAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                ("a1".into(), "1".into(), "2".into()),
                ("a2".into(), "2".into(), "3".into()),
                ("a3".into(), "3".into(), "1".into()),
            ],
        )
        .unwrap();
        let rels: Vec<Relation> = q
            .paths_of_length(2)
            .into_iter()
            .map(|p| {
                Relation::new(
                    &q,
                    vec![PathExpr {
                        coeff: ExactScalar::one(f7()),
                        path: p,
                    }],
                )
                .unwrap()
            })
            .collect();
        BoundAlgebra::build(f7(), q, rels).unwrap()
    }

    #[test]
    fn projective_of_cyclic3_at_first_vertex() {
        let a = cyclic3_rsz();
        let p1 = projective_rep(&a, 0);
        assert_eq!(p1.dims(), &[1, 1, 0]);
    }

    #[test]
    fn regular_module_of_dual_numbers() {
        let a = dual_numbers();
        let p = projective_rep(&a, 0);
        assert_eq!(p.dims(), &[2]);
        // In basis (e, x) the loop acts by e -> x -> 0.
        let expected = ExactMatrix::from_i64(f7(), 2, 2, &[0, 0, 1, 0]);
        assert_eq!(p.arrow_matrix(0), &expected);
    }

    #[test]
    fn a2_simple_projective() {
        let a = a2();
        let p2 = projective_rep(&a, 1);
        assert_eq!(p2.dims(), &[0, 1]);
    }

    #[test]
    fn hom_dimensions() {
        let a = cyclic3_rsz();
        let s1 = Representation::simple(a.clone(), 0);
        let s2 = Representation::simple(a.clone(), 1);
        assert_eq!(hom_space(&s1, &s1).unwrap().dim(), 1);
        assert_eq!(hom_space(&s1, &s2).unwrap().dim(), 0);
        let p1 = projective_rep(&a, 0);
        // e1 (KQ/J^2) e1 is spanned by e1 alone.
        assert_eq!(hom_space(&p1, &p1).unwrap().dim(), 1);
    }

    #[test]
    fn hom_into_projective_counts_dimension() {
        // dim Hom(P_v, M) = dim M at v, for every v and M.
        let a = cyclic3_rsz();
        let m = Representation::direct_sum(&[
            &projective_rep(&a, 0),
            &Representation::simple(a.clone(), 2),
        ])
        .unwrap();
        for v in 0..3 {
            let pv = projective_rep(&a, v);
            assert_eq!(hom_space(&pv, &m).unwrap().dim(), m.dim_at(v));
        }
    }

    #[test]
    fn hom_basis_morphisms_commute_and_coords_roundtrip() {
        let a = dual_numbers();
        let p = projective_rep(&a, 0);
        let s = Representation::simple(a.clone(), 0);
        let h = hom_space(&p, &p).unwrap();
        assert_eq!(h.dim(), 2);
        for (k, b) in h.basis().iter().enumerate() {
            b.validate().unwrap();
            let coords = h.coords(b);
            for i in 0..h.dim() {
                assert_eq!(coords.is_zero_at(i, 0), i != k);
            }
        }
        let hs = hom_space(&s, &p).unwrap();
        assert_eq!(hs.dim(), 1);
    }

    #[test]
    fn fast_and_dense_hom_agree_on_semisimple_source() {
        let a = cyclic3_rsz();
        let s = Representation::direct_sum(&[
            &Representation::simple(a.clone(), 0),
            &Representation::simple(a.clone(), 0),
            &Representation::simple(a.clone(), 1),
        ])
        .unwrap();
        let p = projective_rep(&a, 0);
        assert!(s.all_arrows_zero());
        let h = hom_space(&s, &p).unwrap();
        // Maps S_1^2 + S_2 -> P_1: columns must land in ker(a1 action) at
        // vertex 1 (the radical), and anywhere at vertex 2.
        for b in h.basis() {
            b.validate().unwrap();
        }
        // Oracle: dim Hom = sum_v m_v * dim ker(out-arrows on P_1 at v).
        let k0 = out_arrow_kernel(&p, 0).0.cols();
        let k1 = out_arrow_kernel(&p, 1).0.cols();
        assert_eq!(h.dim(), 2 * k0 + k1);
        for (k, b) in h.basis().iter().enumerate() {
            let coords = h.coords(b);
            for i in 0..h.dim() {
                assert_eq!(coords.is_zero_at(i, 0), i != k, "basis {k} coord {i}");
            }
        }
    }

    #[test]
    fn iso_verdicts() {
        let a = a2();
        let s1 = Representation::simple(a.clone(), 0);
        let s2 = Representation::simple(a.clone(), 1);
        assert!(is_isomorphic(&s1, &s1, 0).unwrap().is_yes());
        match is_isomorphic(&s1, &s2, 0).unwrap() {
            IsoVerdict::No(reason) => assert!(reason.contains("dimension")),
            v => panic!("expected No, got {v:?}"),
        }
        // Witness composes with its inverse to the identity.
        let p1 = projective_rep(&a, 0);
        if let IsoVerdict::Yes(w) = is_isomorphic(&p1, &p1, 0).unwrap() {
            let winv = w.inverse().unwrap();
            let id = w.compose(&winv).unwrap();
            assert_eq!(id, RepMorphism::identity(&p1));
        } else {
            panic!("projective must be isomorphic to itself");
        }
    }

    #[test]
    fn submodule_and_quotient_are_exact() {
        let a = dual_numbers();
        let p = projective_rep(&a, 0);
        // Submodule generated by the socle vector x.
        let mut gen = ExactMatrix::zeros(f7(), 2, 1);
        gen.set(1, 0, &ExactScalar::one(f7()));
        let (sub, emb) = submodule_spanned(&p, &[gen]).unwrap();
        assert_eq!(sub.dims(), &[1]);
        emb.validate().unwrap();
        let bases: Vec<ExactMatrix> = (0..1).map(|v| emb.vertex_matrix(v).clone()).collect();
        let (quot, proj) = quotient_rep(&p, &bases).unwrap();
        assert_eq!(quot.dims(), &[1]);
        proj.validate().unwrap();
        assert!(proj.compose(&emb).unwrap().is_zero());
        // Generated-by-top submodule is everything.
        let mut top = ExactMatrix::zeros(f7(), 2, 1);
        top.set(0, 0, &ExactScalar::one(f7()));
        let (all, _) = submodule_spanned(&p, &[top]).unwrap();
        assert_eq!(all.dims(), &[2]);
    }

    #[test]
    fn left_ideal_examples() {
        // Two-cycle gentle: arrows a: 1->2, b: 2->1, relations b.a and a.b.
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "1".into()),
            ],
        )
        .unwrap();
        let rels: Vec<Relation> = q
            .paths_of_length(2)
            .into_iter()
            .map(|p| {
                Relation::new(
                    &q,
                    vec![PathExpr {
                        coeff: ExactScalar::one(f7()),
                        path: p,
                    }],
                )
                .unwrap()
            })
            .collect();
        let b = BoundAlgebra::build(f7(), q, rels).unwrap();
        let ba = left_ideal_rep(&b, 0).unwrap();
        assert_eq!(ba.dims(), &[0, 1]);

        let dual = dual_numbers();
        let bx = left_ideal_rep(&dual, 0).unwrap();
        assert_eq!(bx.dims(), &[1]);

        // A3 with the single relation b.a.
        let q3 = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "3".into()),
            ],
        )
        .unwrap();
        let rel = Relation::new(
            &q3,
            vec![PathExpr {
                coeff: ExactScalar::one(f7()),
                path: Path {
                    source: 0,
                    arrows: vec![0, 1],
                },
            }],
        )
        .unwrap();
        let a3 = BoundAlgebra::build(f7(), q3, vec![rel]).unwrap();
        let bb = left_ideal_rep(&a3, 1).unwrap();
        assert_eq!(bb.dims(), &[0, 0, 1]);
        assert!(left_ideal_rep(&a2(), 0).is_ok());
    }

    #[test]
    fn radical_series_of_projective() {
        let a = dual_numbers();
        let p = projective_rep(&a, 0);
        assert_eq!(p.radical_series(), vec![vec![1], vec![0]]);
        let s = Representation::simple(a, 0);
        assert_eq!(s.radical_series(), vec![vec![0]]);
    }
}
