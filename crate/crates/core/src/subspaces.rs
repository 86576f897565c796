//! Subspaces of F_p^d in canonical (RREF) form, their enumeration and lattice
//! operations, and Gaussian binomial coefficients.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gfq::{GfError, GfMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("dimension {k} out of range 0..={n}")]
    DimOutOfRange { k: usize, n: usize },
    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("lower bound is not contained in upper bound")]
    NotNested,
}

/// A subspace of F_p^d stored by its RREF basis without zero rows.
///
/// Ordering is by dimension first and then lexicographic on the RREF entries,
/// which fixes a global deterministic order on subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: GfMatrix,
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient(), self.dim(), self.basis.row_vecs()).cmp(&(other.ambient(), other.dim(), other.basis.row_vecs()))
    }
}

impl Subspace {
    /// Row space of the given vectors.
    pub fn span(p: u32, ambient: usize, vectors: &[Vec<i64>]) -> Result<Self, SubspaceError> {
        let m = if vectors.is_empty() { GfMatrix::zeros(p, 0, ambient)? } else { GfMatrix::from_rows(p, ambient, vectors)? };
        Ok(Subspace { basis: m.row_space() })
    }

    pub fn from_matrix(m: &GfMatrix) -> Self {
        Subspace { basis: m.row_space() }
    }

    pub fn zero(p: u32, ambient: usize) -> Result<Self, SubspaceError> {
        Subspace::span(p, ambient, &[])
    }

    pub fn full(p: u32, ambient: usize) -> Result<Self, SubspaceError> {
        Ok(Subspace { basis: GfMatrix::identity(p, ambient)? })
    }

    pub fn p(&self) -> u32 {
        self.basis.p()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &GfMatrix {
        &self.basis
    }

    fn check_same(&self, other: &Subspace) -> Result<(), SubspaceError> {
        if self.ambient() != other.ambient() {
            return Err(SubspaceError::AmbientMismatch(self.ambient(), other.ambient()));
        }
        if self.p() != other.p() {
            return Err(GfError::ModulusMismatch(self.p(), other.p()).into());
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[u32]) -> Result<bool, SubspaceError> {
        Ok(self.basis.solve_membership(v)?)
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, SubspaceError> {
        self.check_same(other)?;
        for r in 0..other.dim() {
            if !self.basis.solve_membership(other.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check_same(other)?;
        Ok(Subspace::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check_same(other)?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(self.p(), self.ambient());
        }
        // x A = y B  <=>  (x, -y) lies in the left kernel of [A; B].
        let stacked = self.basis.vstack(&other.basis)?;
        let left_kernel = stacked.transpose().kernel();
        let p = self.p() as u64;
        let n = self.ambient();
        let mut vecs = Vec::new();
        for coeffs in left_kernel.row_vecs() {
            let mut v = vec![0i64; n];
            for (i, &c) in coeffs[..a].iter().enumerate() {
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = ((*slot as u64 + c as u64 * self.basis.get(i, j) as u64) % p) as i64;
                }
            }
            vecs.push(v);
        }
        Subspace::span(self.p(), n, &vecs)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `k`-dimensional subspaces of F_p^d, sorted.
///
/// Generated directly as RREF matrices: a choice of pivot columns plus free
/// entries to the right of each pivot in the non-pivot columns.
pub fn enumerate_subspaces(d: usize, k: usize, p: u32) -> Result<Vec<Subspace>, SubspaceError> {
    if k > d {
        return Err(SubspaceError::DimOutOfRange { k, n: d });
    }
    GfMatrix::zeros(p, 0, d)?;
    let mut out = Vec::new();
    for pivots in combinations(d, k) {
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..d {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let total = (p as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut data = vec![0u32; k * d];
            for (r, &pc) in pivots.iter().enumerate() {
                data[r * d + pc] = 1;
            }
            for &(r, c) in &free {
                data[r * d + c] = (code % p as u64) as u32;
                code /= p as u64;
            }
            out.push(Subspace { basis: GfMatrix::from_raw(p, k, d, data) });
        }
    }
    out.sort();
    Ok(out)
}

/// All `W` with `lower <= W <= upper` and `dim W = k`, sorted.
pub fn enumerate_between(lower: &Subspace, upper: &Subspace, k: usize) -> Result<Vec<Subspace>, SubspaceError> {
    if !upper.contains(lower)? {
        return Err(SubspaceError::NotNested);
    }
    let (a, b) = (lower.dim(), upper.dim());
    if k < a || k > b {
        return Err(SubspaceError::DimOutOfRange { k, n: b });
    }
    let p = lower.p();
    let n = lower.ambient();
    // Complement of `lower` inside `upper`: rows of `upper` extending a basis of `lower`.
    let mut current = lower.clone();
    let mut complement: Vec<Vec<u32>> = Vec::new();
    for r in 0..b {
        let row = upper.basis().row(r);
        if !current.contains_vector(row)? {
            complement.push(row.to_vec());
            let ext = GfMatrix::from_raw(p, 1, n, row.to_vec());
            current = Subspace::from_matrix(&current.basis.vstack(&ext)?);
        }
    }
    let r = complement.len();
    let mut out = Vec::new();
    for coeffs in enumerate_subspaces(r, k - a, p)? {
        let mut m = lower.basis.clone();
        for row in coeffs.basis().row_vecs() {
            let mut v = vec![0u32; n];
            for (i, &c) in row.iter().enumerate() {
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = ((*slot as u64 + c as u64 * complement[i][j] as u64) % p as u64) as u32;
                }
            }
            m = m.vstack(&GfMatrix::from_raw(p, 1, n, v))?;
        }
        out.push(Subspace::from_matrix(&m));
    }
    out.sort();
    Ok(out)
}

/// Gaussian binomial `[n choose k]_q`; zero when `k > n`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> BigUint {
    assert!(q >= 2, "gaussian_binomial needs q >= 2");
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// Gaussian binomial with signed arguments; out-of-range input gives zero.
pub fn gaussian_binomial_i(n: i64, k: i64, q: u64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    gaussian_binomial(n as u64, k as u64, q)
}

/// Index of a subspace inside a [`SubspaceLattice`]. Ids follow the global
/// subspace order, so comparing ids compares subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceId(pub u32);

/// Every subspace of F_p^d, indexed, with containment and covering relations.
#[derive(Debug, Clone)]
pub struct SubspaceLattice {
    p: u32,
    d: usize,
    spaces: Vec<Subspace>,
    dims: Vec<usize>,
    contains: Vec<bool>,
    covers_down: Vec<Vec<SubspaceId>>,
    covers_up: Vec<Vec<SubspaceId>>,
    supersets: Vec<Vec<SubspaceId>>,
}

impl SubspaceLattice {
    pub fn new(d: usize, p: u32) -> Result<Self, SubspaceError> {
        let mut spaces = Vec::new();
        for k in 0..=d {
            spaces.extend(enumerate_subspaces(d, k, p)?);
        }
        let n = spaces.len();
        let dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
        let mut contains = vec![false; n * n];
        for (i, big) in spaces.iter().enumerate() {
            for (j, small) in spaces.iter().enumerate() {
                if dims[j] <= dims[i] {
                    contains[i * n + j] = big.contains(small)?;
                }
            }
        }
        let mut covers_down = vec![Vec::new(); n];
        let mut covers_up = vec![Vec::new(); n];
        let mut supersets = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if contains[j * n + i] {
                    supersets[i].push(SubspaceId(j as u32));
                    if dims[j] == dims[i] + 1 {
                        covers_up[i].push(SubspaceId(j as u32));
                        covers_down[j].push(SubspaceId(i as u32));
                    }
                }
            }
        }
        Ok(SubspaceLattice { p, d, spaces, dims, contains, covers_down, covers_up, supersets })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn get(&self, id: SubspaceId) -> &Subspace {
        &self.spaces[id.0 as usize]
    }

    pub fn dim(&self, id: SubspaceId) -> usize {
        self.dims[id.0 as usize]
    }

    pub fn id_of(&self, s: &Subspace) -> Option<SubspaceId> {
        self.spaces.binary_search(s).ok().map(|i| SubspaceId(i as u32))
    }

    pub fn zero(&self) -> SubspaceId {
        SubspaceId(0)
    }

    pub fn full(&self) -> SubspaceId {
        SubspaceId(self.spaces.len() as u32 - 1)
    }

    /// `small <= big`.
    pub fn le(&self, small: SubspaceId, big: SubspaceId) -> bool {
        self.contains[big.0 as usize * self.spaces.len() + small.0 as usize]
    }

    /// Codimension-one subspaces of `id`.
    pub fn covers_down(&self, id: SubspaceId) -> &[SubspaceId] {
        &self.covers_down[id.0 as usize]
    }

    /// Subspaces containing `id` with one more dimension.
    pub fn covers_up(&self, id: SubspaceId) -> &[SubspaceId] {
        &self.covers_up[id.0 as usize]
    }

    /// All subspaces containing `id`, in id order.
    pub fn supersets(&self, id: SubspaceId) -> &[SubspaceId] {
        &self.supersets[id.0 as usize]
    }

    pub fn sum(&self, a: SubspaceId, b: SubspaceId) -> SubspaceId {
        // Smallest common superset: the lattice join.
        *self
            .supersets(a)
            .iter()
            .filter(|&&s| self.le(b, s))
            .min_by_key(|&&s| self.dim(s))
            .expect("full space contains everything")
    }
}
