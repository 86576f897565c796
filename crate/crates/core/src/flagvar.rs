//! Ramified flag varieties of type D over F_p, their partition by dimension
//! vector and by stratum, closed-form point counts, and the type A chain-flag
//! baseline.
//!
//! A ramified flag is a chain
//!
//! ```text
//! 0 <= V_{j_m} <= ... <= V_{j_1} <= U_i, U_k <= U_{j_1} <= ... <= U_{j_m} <= D
//! ```
//!
//! with dimension vector `nu_i = |U_i|`, `nu_k = |U_k|` and
//! `nu_{j_b} = |U_{j_b}| + |V_{j_b}|`. Nodes are indexed `i = 0`, `k = 1`,
//! `j_b = b + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::gfq::{is_prime, GfMatrix};
use crate::subspaces::{gaussian_binomial_i, Subspace, SubspaceError, SubspaceId, SubspaceLattice};

/// Version tag written into every cache file; bump when the format or the
/// canonical order changes.
pub const CACHE_VERSION: u32 = 1;

/// Default bound on the number of flags an enumeration may produce.
pub const DEFAULT_MAX_FLAGS: u64 = 200_000;

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("tail length m must be at least 1")]
    BadShape,
    #[error("q = {0} is not prime")]
    NotPrime(u64),
    #[error("predicted flag count {predicted} exceeds the cap of {cap}")]
    TooLarge { predicted: BigUint, cap: u64 },
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },
}

/// The Dynkin diagram of type D_{m+2}: `i - j_1`, `k - j_1`, `j_1 - j_2 - ... - j_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuiverShape {
    m: usize,
}

impl QuiverShape {
    pub const NODE_I: usize = 0;
    pub const NODE_K: usize = 1;

    pub fn new(m: usize) -> Result<Self, FlagError> {
        if m == 0 {
            return Err(FlagError::BadShape);
        }
        Ok(QuiverShape { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.m + 2
    }

    /// Node index of `j_beta`, `1 <= beta <= m`.
    pub fn node_j(&self, beta: usize) -> usize {
        debug_assert!((1..=self.m).contains(&beta));
        beta + 1
    }

    pub fn node_name(&self, a: usize) -> String {
        match a {
            0 => "i".into(),
            1 => "k".into(),
            _ => format!("j{}", a - 1),
        }
    }

    pub fn parse_node(&self, s: &str) -> Option<usize> {
        match s {
            "i" => Some(0),
            "k" => Some(1),
            _ => {
                let beta: usize = s.strip_prefix('j')?.parse().ok()?;
                (1..=self.m).contains(&beta).then(|| beta + 1)
            }
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = vec![(0, 2), (1, 2)];
        for beta in 1..self.m {
            e.push((beta + 1, beta + 2));
        }
        e
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        cartan_from_edges(self.node_count(), &self.edges())
    }
}

pub(crate) fn cartan_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for (a, row) in c.iter_mut().enumerate() {
        row[a] = 2;
    }
    for &(a, b) in edges {
        c[a][b] = -1;
        c[b][a] = -1;
    }
    c
}

/// Which family of flags a [`FlagIndexedSet`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlagKind {
    /// Ramified flags of type D_{m+2}.
    RamifiedD { m: usize },
    /// Chains `0 <= W_1 <= ... <= W_n <= D` (type A_n).
    ChainA { n: usize },
}

impl FlagKind {
    pub fn node_count(&self) -> usize {
        match *self {
            FlagKind::RamifiedD { m } => m + 2,
            FlagKind::ChainA { n } => n,
        }
    }

    pub fn slot_count(&self) -> usize {
        match *self {
            FlagKind::RamifiedD { m } => 2 * m + 2,
            FlagKind::ChainA { n } => n,
        }
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        match *self {
            FlagKind::RamifiedD { m } => QuiverShape { m }.cartan(),
            FlagKind::ChainA { n } => {
                let edges: Vec<(usize, usize)> = (1..n).map(|h| (h - 1, h)).collect();
                cartan_from_edges(n, &edges)
            }
        }
    }

    /// The node whose coordinate carries `d` in the weight `d*omega - C nu`.
    pub fn top_node(&self) -> usize {
        self.node_count() - 1
    }

    pub fn node_name(&self, a: usize) -> String {
        match *self {
            FlagKind::RamifiedD { m } => QuiverShape { m }.node_name(a),
            FlagKind::ChainA { .. } => format!("{}", a + 1),
        }
    }

    pub fn parse_node(&self, s: &str) -> Option<usize> {
        match *self {
            FlagKind::RamifiedD { m } => QuiverShape { m }.parse_node(s),
            FlagKind::ChainA { n } => {
                let h: usize = s.parse().ok()?;
                (1..=n).contains(&h).then(|| h - 1)
            }
        }
    }

    fn tag(&self) -> String {
        match *self {
            FlagKind::RamifiedD { m } => format!("D-m{m}"),
            FlagKind::ChainA { n } => format!("A-n{n}"),
        }
    }
}

/// A vector in N[I], in node order. Signed so that shifts by simple roots
/// can be formed freely.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(pub Vec<i64>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self + delta * e_a`.
    pub fn shifted(&self, a: usize, delta: i64) -> DimVector {
        let mut v = self.0.clone();
        v[a] += delta;
        DimVector(v)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Semicolon-joined form used in CSV output.
    pub fn joined(&self) -> String {
        self.0.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, x) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// The inequality chain `nu_i + nu_k <= nu_{j_1} <= ... <= nu_{j_m} <= d`.
pub fn satisfies_necessary(nu: &DimVector, m: usize, d: usize) -> bool {
    if nu.len() != m + 2 || !nu.is_nonnegative() {
        return false;
    }
    let v = &nu.0;
    let mut prev = v[0] + v[1];
    for beta in 1..=m {
        if v[beta + 1] < prev {
            return false;
        }
        prev = v[beta + 1];
    }
    prev <= d as i64
}

/// A label `(nu, c)` of a connected component `X_{nu,c}`, where `c_b` is the
/// dimension of `V_{j_b}` and `u_b = nu_{j_b} - c_b` that of `U_{j_b}`.
///
/// `c` is stored by `beta`: `c[0] = c_1`, ..., `c[m-1] = c_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum {
    pub nu: DimVector,
    pub c: Vec<i64>,
}

impl Stratum {
    pub fn m(&self) -> usize {
        self.c.len()
    }

    /// `c_beta`, with `c_{m+1} = 0`.
    pub fn c_at(&self, beta: usize) -> i64 {
        if beta == self.m() + 1 {
            0
        } else {
            self.c[beta - 1]
        }
    }

    /// `nu_{j_beta}`, with `nu_{j_{m+1}} = d`.
    pub fn nu_j(&self, beta: usize, d: usize) -> i64 {
        if beta == self.m() + 1 {
            d as i64
        } else {
            self.nu.0[beta + 1]
        }
    }

    /// `u_beta = dim U_{j_beta}`, with `u_{m+1} = d`.
    pub fn u_at(&self, beta: usize, d: usize) -> i64 {
        self.nu_j(beta, d) - self.c_at(beta)
    }

    pub fn is_valid(&self, d: usize) -> bool {
        let m = self.m();
        if m == 0 || self.nu.len() != m + 2 || !self.nu.is_nonnegative() {
            return false;
        }
        let (ni, nk) = (self.nu.0[0], self.nu.0[1]);
        if self.c_at(m) < 0 || self.c_at(1) > ni.min(nk) {
            return false;
        }
        for beta in 1..m {
            if self.c_at(beta + 1) > self.c_at(beta) {
                return false;
            }
        }
        if self.u_at(1, d) < ni.max(nk) {
            return false;
        }
        (1..=m).all(|beta| self.u_at(beta, d) <= self.u_at(beta + 1, d))
    }

    /// `c` in the reading order `(c_m, ..., c_1)`.
    pub fn c_display(&self) -> String {
        let rev: Vec<String> = self.c.iter().rev().map(i64::to_string).collect();
        format!("({})", rev.join(","))
    }
}

/// All admissible `c` for `nu`, scanning the box `0 <= c_b <= nu_{j_b}`.
pub fn strata_for_nu(nu: &DimVector, m: usize, d: usize) -> Vec<Stratum> {
    if nu.len() != m + 2 || !nu.is_nonnegative() {
        return Vec::new();
    }
    let bounds: Vec<i64> = (1..=m).map(|beta| nu.0[beta + 1]).collect();
    let mut out = Vec::new();
    let mut c = vec![0i64; m];
    loop {
        let s = Stratum { nu: nu.clone(), c: c.clone() };
        if s.is_valid(d) {
            out.push(s);
        }
        let mut pos = 0;
        loop {
            if pos == m {
                out.sort();
                return out;
            }
            c[pos] += 1;
            if c[pos] <= bounds[pos] {
                break;
            }
            c[pos] = 0;
            pos += 1;
        }
    }
}

/// Every nonempty stratum for the shape `m` in dimension `d`.
pub fn all_strata(m: usize, d: usize) -> Vec<Stratum> {
    fn chains(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
        // Non-decreasing sequences of length `len` in [lo, hi].
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in lo..=hi {
            for mut rest in chains(len - 1, first, hi) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for u in chains(m, 0, d as i64) {
        // c_m <= ... <= c_1 <= u_1, stored by beta so reversed order is non-decreasing.
        for c_rev in chains(m, 0, u[0]) {
            let c: Vec<i64> = c_rev.iter().rev().copied().collect();
            for ni in c[0]..=u[0] {
                for nk in c[0]..=u[0] {
                    let mut nu = vec![ni, nk];
                    nu.extend((0..m).map(|b| u[b] + c[b]));
                    out.push(Stratum { nu: DimVector(nu), c: c.clone() });
                }
            }
        }
    }
    out.sort();
    out
}

/// `|X_{nu,c}(F_q)|` by the iterated Grassmannian product; zero for an
/// invalid stratum.
pub fn stratum_count(s: &Stratum, d: usize, q: u64) -> BigUint {
    if !s.is_valid(d) {
        return BigUint::zero();
    }
    let m = s.m();
    let mut total = BigUint::from(1u32);
    // U-chain from the outside in.
    for beta in (1..=m).rev() {
        total *= gaussian_binomial_i(s.u_at(beta + 1, d), s.u_at(beta, d), q);
    }
    // V-chain inside U_{j_1}.
    total *= gaussian_binomial_i(s.u_at(1, d), s.c_at(1), q);
    for beta in 1..m {
        total *= gaussian_binomial_i(s.c_at(beta), s.c_at(beta + 1), q);
    }
    // U_i and U_k between V_{j_1} and U_{j_1}.
    let gap = s.u_at(1, d) - s.c_at(1);
    total *= gaussian_binomial_i(gap, s.nu.0[0] - s.c_at(1), q);
    total *= gaussian_binomial_i(gap, s.nu.0[1] - s.c_at(1), q);
    total
}

/// `|X_nu(F_q)|` as a sum over strata.
pub fn count_x_nu(nu: &DimVector, m: usize, d: usize, q: u64) -> BigUint {
    strata_for_nu(nu, m, d).iter().map(|s| stratum_count(s, d, q)).sum()
}

/// Closed-form `|X(F_q)|` for the ramified variety.
pub fn count_x(m: usize, d: usize, q: u64) -> BigUint {
    all_strata(m, d).iter().map(|s| stratum_count(s, d, q)).sum()
}

/// Closed-form number of chains `W_1 <= ... <= W_n` in F_q^d.
pub fn count_chain_flags(n: usize, d: usize, q: u64) -> BigUint {
    // Dynamic programme over the dimension of the outermost chosen space.
    let mut ways = vec![BigUint::zero(); d + 1];
    for (w, slot) in ways.iter_mut().enumerate() {
        *slot = gaussian_binomial_i(d as i64, w as i64, q);
    }
    for _ in 1..n {
        let mut next = vec![BigUint::zero(); d + 1];
        for (inner, slot) in next.iter_mut().enumerate() {
            for (outer, w) in ways.iter().enumerate().skip(inner) {
                *slot += w * gaussian_binomial_i(outer as i64, inner as i64, q);
            }
        }
        ways = next;
    }
    ways.into_iter().sum()
}

/// A point of the ramified variety with owned subspaces.
///
/// `v` lists `(V_{j_m}, ..., V_{j_1})` and `u` lists `(U_{j_1}, ..., U_{j_m})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamifiedFlag {
    pub v: Vec<Subspace>,
    pub ui: Subspace,
    pub uk: Subspace,
    pub u: Vec<Subspace>,
}

impl RamifiedFlag {
    pub fn m(&self) -> usize {
        self.u.len()
    }

    /// `V_{j_beta}`.
    pub fn v_j(&self, beta: usize) -> &Subspace {
        &self.v[self.m() - beta]
    }

    /// `U_{j_beta}`.
    pub fn u_j(&self, beta: usize) -> &Subspace {
        &self.u[beta - 1]
    }

    pub fn dim_vector(&self) -> DimVector {
        let mut nu = vec![self.ui.dim() as i64, self.uk.dim() as i64];
        nu.extend((1..=self.m()).map(|b| (self.u_j(b).dim() + self.v_j(b).dim()) as i64));
        DimVector(nu)
    }

    pub fn is_valid(&self) -> Result<bool, SubspaceError> {
        let m = self.m();
        if m == 0 || self.v.len() != m {
            return Ok(false);
        }
        for w in self.v.windows(2) {
            if !w[1].contains(&w[0])? {
                return Ok(false);
            }
        }
        let v1 = self.v_j(1);
        if !self.ui.contains(v1)? || !self.uk.contains(v1)? {
            return Ok(false);
        }
        let u1 = self.u_j(1);
        if !u1.contains(&self.ui)? || !u1.contains(&self.uk)? {
            return Ok(false);
        }
        for w in self.u.windows(2) {
            if !w[1].contains(&w[0])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An enumerated flag variety: flags in canonical order with partition indices.
///
/// Flags are ordered by dimension vector, then stratum, then lexicographically
/// on their subspaces from the innermost slot out, so every `X_nu` and every
/// `X_{nu,c}` occupies a contiguous index range.
#[derive(Debug, Clone)]
pub struct FlagIndexedSet {
    kind: FlagKind,
    d: usize,
    q: u32,
    lattice: SubspaceLattice,
    flags: Vec<Vec<SubspaceId>>,
    index: HashMap<Vec<SubspaceId>, usize>,
    nus: Vec<DimVector>,
    by_nu: BTreeMap<DimVector, Range<usize>>,
    by_stratum: BTreeMap<Stratum, Range<usize>>,
}

// Slot layout for ramified flags: [V_{j_m}, ..., V_{j_1}, U_i, U_k, U_{j_1}, ..., U_{j_m}].
pub(crate) fn slot_v(m: usize, beta: usize) -> usize {
    m - beta
}
pub(crate) fn slot_ui(m: usize) -> usize {
    m
}
pub(crate) fn slot_uk(m: usize) -> usize {
    m + 1
}
pub(crate) fn slot_u(m: usize, beta: usize) -> usize {
    m + 1 + beta
}

impl FlagIndexedSet {
    fn build(kind: FlagKind, d: usize, q: u32, lattice: SubspaceLattice, flags: Vec<Vec<SubspaceId>>) -> Self {
        let dims_of = |f: &Vec<SubspaceId>| -> Vec<i64> { f.iter().map(|&s| lattice.dim(s) as i64).collect() };
        let nu_of = |f: &Vec<SubspaceId>| -> DimVector {
            let dims = dims_of(f);
            match kind {
                FlagKind::RamifiedD { m } => {
                    let mut nu = vec![dims[slot_ui(m)], dims[slot_uk(m)]];
                    nu.extend((1..=m).map(|b| dims[slot_u(m, b)] + dims[slot_v(m, b)]));
                    DimVector(nu)
                }
                FlagKind::ChainA { .. } => DimVector(dims),
            }
        };
        let c_of = |f: &Vec<SubspaceId>| -> Vec<i64> {
            match kind {
                FlagKind::RamifiedD { m } => (1..=m).map(|b| lattice.dim(f[slot_v(m, b)]) as i64).collect(),
                FlagKind::ChainA { .. } => Vec::new(),
            }
        };
        let mut keyed: Vec<(DimVector, Vec<i64>, Vec<SubspaceId>)> =
            flags.into_iter().map(|f| (nu_of(&f), c_of(&f), f)).collect();
        keyed.sort();
        keyed.dedup();

        let mut by_nu: BTreeMap<DimVector, Range<usize>> = BTreeMap::new();
        let mut by_stratum: BTreeMap<Stratum, Range<usize>> = BTreeMap::new();
        for (idx, (nu, c, _)) in keyed.iter().enumerate() {
            by_nu.entry(nu.clone()).and_modify(|r| r.end = idx + 1).or_insert(idx..idx + 1);
            if matches!(kind, FlagKind::RamifiedD { .. }) {
                by_stratum
                    .entry(Stratum { nu: nu.clone(), c: c.clone() })
                    .and_modify(|r| r.end = idx + 1)
                    .or_insert(idx..idx + 1);
            }
        }
        let mut nus = Vec::with_capacity(keyed.len());
        let mut out = Vec::with_capacity(keyed.len());
        for (nu, _, f) in keyed {
            nus.push(nu);
            out.push(f);
        }
        let index = out.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        FlagIndexedSet { kind, d, q, lattice, flags: out, index, nus, by_nu, by_stratum }
    }

    pub fn kind(&self) -> FlagKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn lattice(&self) -> &SubspaceLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    /// Subspace ids of flag `idx` in slot order.
    pub fn slots(&self, idx: usize) -> &[SubspaceId] {
        &self.flags[idx]
    }

    pub fn slot_dims(&self, idx: usize) -> Vec<i64> {
        self.flags[idx].iter().map(|&s| self.lattice.dim(s) as i64).collect()
    }

    pub fn index_of(&self, slots: &[SubspaceId]) -> Option<usize> {
        self.index.get(slots).copied()
    }

    pub fn nu(&self, idx: usize) -> &DimVector {
        &self.nus[idx]
    }

    pub fn by_nu(&self) -> &BTreeMap<DimVector, Range<usize>> {
        &self.by_nu
    }

    pub fn by_stratum(&self) -> &BTreeMap<Stratum, Range<usize>> {
        &self.by_stratum
    }

    pub fn realized_nus(&self) -> Vec<DimVector> {
        self.by_nu.keys().cloned().collect()
    }

    /// Owned view of a ramified flag; `None` for chain flags.
    pub fn ramified_flag(&self, idx: usize) -> Option<RamifiedFlag> {
        let FlagKind::RamifiedD { m } = self.kind else {
            return None;
        };
        let f = &self.flags[idx];
        let get = |s: usize| self.lattice.get(f[s]).clone();
        Some(RamifiedFlag {
            v: (0..m).map(get).collect(),
            ui: get(slot_ui(m)),
            uk: get(slot_uk(m)),
            u: (1..=m).map(|b| get(slot_u(m, b))).collect(),
        })
    }

    /// Owned subspaces of a chain flag `(W_1, ..., W_n)`; `None` for ramified flags.
    pub fn chain_flag(&self, idx: usize) -> Option<Vec<Subspace>> {
        match self.kind {
            FlagKind::ChainA { .. } => Some(self.flags[idx].iter().map(|&s| self.lattice.get(s).clone()).collect()),
            FlagKind::RamifiedD { .. } => None,
        }
    }

    /// JSON cache document: parameters plus every flag as a list of RREF row matrices.
    pub fn to_json(&self) -> Value {
        let (kind, shape_key, shape_val) = match self.kind {
            FlagKind::RamifiedD { m } => ("D", "m", m),
            FlagKind::ChainA { n } => ("A", "n", n),
        };
        let flags: Vec<Value> = self
            .flags
            .iter()
            .map(|f| Value::Array(f.iter().map(|&s| json!(self.lattice.get(s).basis().row_vecs())).collect()))
            .collect();
        json!({
            "format": "qschur-flags",
            "version": CACHE_VERSION,
            "kind": kind,
            shape_key: shape_val,
            "d": self.d,
            "q": self.q,
            "flags": flags,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        if v.get("format").and_then(Value::as_str) != Some("qschur-flags") {
            return Err("not a flag cache document".into());
        }
        if v.get("version").and_then(Value::as_u64) != Some(CACHE_VERSION as u64) {
            return Err("stale cache version".into());
        }
        let num = |k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| format!("missing field {k}"));
        let kind = match v.get("kind").and_then(Value::as_str) {
            Some("D") => FlagKind::RamifiedD { m: num("m")? as usize },
            Some("A") => FlagKind::ChainA { n: num("n")? as usize },
            _ => return Err("unknown flag kind".into()),
        };
        let d = num("d")? as usize;
        let q = num("q")? as u32;
        let lattice = SubspaceLattice::new(d, q).map_err(|e| e.to_string())?;
        let raw = v.get("flags").and_then(Value::as_array).ok_or("missing flags")?;
        let mut flags = Vec::with_capacity(raw.len());
        for f in raw {
            let slots = f.as_array().ok_or("flag is not an array")?;
            if slots.len() != kind.slot_count() {
                return Err("wrong slot count".into());
            }
            let mut ids = Vec::with_capacity(slots.len());
            for s in slots {
                let rows: Vec<Vec<i64>> = serde_json::from_value(s.clone()).map_err(|e| e.to_string())?;
                let m = if rows.is_empty() { GfMatrix::zeros(q, 0, d) } else { GfMatrix::from_rows(q, d, &rows) }
                    .map_err(|e| e.to_string())?;
                let sub = Subspace::from_matrix(&m);
                if sub.basis() != &m {
                    return Err("subspace not stored in canonical form".into());
                }
                ids.push(lattice.id_of(&sub).ok_or("unknown subspace")?);
            }
            flags.push(ids);
        }
        let file_order = flags.clone();
        let set = FlagIndexedSet::build(kind, d, q, lattice, flags);
        if set.flags != file_order {
            return Err("flags not in canonical order".into());
        }
        Ok(set)
    }
}

fn check_q(q: u64) -> Result<u32, FlagError> {
    let p = u32::try_from(q).map_err(|_| FlagError::NotPrime(q))?;
    if !is_prime(p) {
        return Err(FlagError::NotPrime(q));
    }
    Ok(p)
}

fn guard(predicted: BigUint, cap: u64) -> Result<(), FlagError> {
    if predicted.to_u64().is_none_or(|n| n > cap) {
        return Err(FlagError::TooLarge { predicted, cap });
    }
    Ok(())
}

/// Enumerates every ramified flag of type D_{m+2} in F_q^d.
///
/// The V-chain is built inside-out, then `U_i`, `U_k`, then the U-chain
/// outward. Fails before enumerating if the closed-form count exceeds `max_flags`.
pub fn enumerate_x(shape: QuiverShape, d: usize, q: u64, max_flags: u64) -> Result<FlagIndexedSet, FlagError> {
    let p = check_q(q)?;
    let m = shape.m();
    guard(count_x(m, d, q), max_flags)?;
    let lat = SubspaceLattice::new(d, p)?;
    let mut flags = Vec::new();
    let mut slots = vec![SubspaceId(0); 2 * m + 2];

    fn outer_u(lat: &SubspaceLattice, m: usize, beta: usize, slots: &mut Vec<SubspaceId>, out: &mut Vec<Vec<SubspaceId>>) {
        if beta > m {
            out.push(slots.clone());
            return;
        }
        for &w in lat.supersets(slots[slot_u(m, beta) - 1]) {
            slots[slot_u(m, beta)] = w;
            outer_u(lat, m, beta + 1, slots, out);
        }
    }

    fn inner_v(lat: &SubspaceLattice, m: usize, beta: usize, slots: &mut Vec<SubspaceId>, out: &mut Vec<Vec<SubspaceId>>) {
        if beta == 0 {
            let v1 = slots[slot_v(m, 1)];
            for &ui in lat.supersets(v1) {
                for &uk in lat.supersets(v1) {
                    slots[slot_ui(m)] = ui;
                    slots[slot_uk(m)] = uk;
                    let join = lat.sum(ui, uk);
                    for &u1 in lat.supersets(join) {
                        slots[slot_u(m, 1)] = u1;
                        outer_u(lat, m, 2, slots, out);
                    }
                }
            }
            return;
        }
        let below = if beta == m { lat.zero() } else { slots[slot_v(m, beta + 1)] };
        for &w in lat.supersets(below) {
            slots[slot_v(m, beta)] = w;
            inner_v(lat, m, beta - 1, slots, out);
        }
    }

    inner_v(&lat, m, m, &mut slots, &mut flags);
    Ok(FlagIndexedSet::build(FlagKind::RamifiedD { m }, d, p, lat, flags))
}

/// Like [`enumerate_x`], reading and writing a JSON cache keyed by `(m, d, q)`.
pub fn enumerate_x_cached(
    shape: QuiverShape,
    d: usize,
    q: u64,
    max_flags: u64,
    cache_dir: Option<&Path>,
) -> Result<FlagIndexedSet, FlagError> {
    let Some(dir) = cache_dir else {
        return enumerate_x(shape, d, q, max_flags);
    };
    let kind = FlagKind::RamifiedD { m: shape.m() };
    let path = cache_path(dir, kind, d, q);
    if let Ok(text) = fs::read_to_string(&path) {
        let cached = serde_json::from_str::<Value>(&text)
            .map_err(|e| e.to_string())
            .and_then(|v| FlagIndexedSet::from_json(&v));
        match cached {
            Ok(set) if set.kind == kind && set.d == d && set.q as u64 == q => return Ok(set),
            // Stale or foreign files are rebuilt below.
            _ => {}
        }
    }
    let set = enumerate_x(shape, d, q, max_flags)?;
    let io_err = |e: std::io::Error| FlagError::Cache { path: path.clone(), reason: e.to_string() };
    fs::create_dir_all(dir).map_err(io_err)?;
    fs::write(&path, set.to_json().to_string()).map_err(io_err)?;
    Ok(set)
}

pub fn cache_path(dir: &Path, kind: FlagKind, d: usize, q: u64) -> PathBuf {
    dir.join(format!("flagvar-{}-d{d}-q{q}-v{CACHE_VERSION}.json", kind.tag()))
}

/// Enumerates every chain `0 <= W_1 <= ... <= W_n <= F_q^d`.
pub fn enumerate_flags_type_a(n: usize, d: usize, q: u64, max_flags: u64) -> Result<FlagIndexedSet, FlagError> {
    if n == 0 {
        return Err(FlagError::BadShape);
    }
    let p = check_q(q)?;
    guard(count_chain_flags(n, d, q), max_flags)?;
    let lat = SubspaceLattice::new(d, p)?;
    let mut flags = Vec::new();
    let mut slots = vec![SubspaceId(0); n];

    fn go(lat: &SubspaceLattice, h: usize, slots: &mut Vec<SubspaceId>, out: &mut Vec<Vec<SubspaceId>>) {
        if h == slots.len() {
            out.push(slots.clone());
            return;
        }
        let below = if h == 0 { lat.zero() } else { slots[h - 1] };
        for &w in lat.supersets(below) {
            slots[h] = w;
            go(lat, h + 1, slots, out);
        }
    }

    go(&lat, 0, &mut slots, &mut flags);
    Ok(FlagIndexedSet::build(FlagKind::ChainA { n }, d, p, lat, flags))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(m: usize) -> QuiverShape {
        QuiverShape::new(m).unwrap()
    }

    // Flags over F_q^1 are 0/1 chains in the containment poset, independent of q.
    fn boolean_chain_count(m: usize) -> usize {
        let mut count = 0;
        let slots = 2 * m + 2;
        for bits in 0u32..(1 << slots) {
            let dim = |s: usize| (bits >> s) & 1;
            let ok_v = (0..m - 1).all(|s| dim(s) <= dim(s + 1));
            let v1 = dim(m - 1);
            let ok_mid = v1 <= dim(m) && v1 <= dim(m + 1) && dim(m) <= dim(m + 2) && dim(m + 1) <= dim(m + 2);
            let ok_u = (m + 2..slots - 1).all(|s| dim(s) <= dim(s + 1));
            if ok_v && ok_mid && ok_u {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn small_variety_sizes() {
        for q in [2, 3] {
            assert_eq!(enumerate_x(shape(2), 1, q, DEFAULT_MAX_FLAGS).unwrap().len(), 8);
            assert_eq!(enumerate_x(shape(1), 1, q, DEFAULT_MAX_FLAGS).unwrap().len(), 6);
        }
        assert_eq!(boolean_chain_count(2), 8);
        assert_eq!(boolean_chain_count(1), 6);
        assert_eq!(boolean_chain_count(3), 10);
        assert_eq!(enumerate_x(shape(3), 1, 2, DEFAULT_MAX_FLAGS).unwrap().len(), 10);
        let x0 = enumerate_x(shape(2), 0, 5, DEFAULT_MAX_FLAGS).unwrap();
        assert_eq!(x0.len(), 1);
        assert_eq!(x0.realized_nus(), vec![DimVector::zero(4)]);
    }

    #[test]
    fn every_flag_is_valid_and_indexed() {
        let x = enumerate_x(shape(2), 2, 2, DEFAULT_MAX_FLAGS).unwrap();
        for idx in 0..x.len() {
            let f = x.ramified_flag(idx).unwrap();
            assert!(f.is_valid().unwrap());
            assert_eq!(&f.dim_vector(), x.nu(idx));
            assert_eq!(x.index_of(x.slots(idx)), Some(idx));
        }
        let covered: usize = x.by_nu().values().map(|r| r.len()).sum();
        assert_eq!(covered, x.len());
        assert_eq!(BigUint::from(x.len()), count_x(2, 2, 2));
    }

    #[test]
    fn resource_guard() {
        let err = enumerate_x(shape(2), 2, 3, 10).unwrap_err();
        assert!(matches!(err, FlagError::TooLarge { cap: 10, .. }));
        assert!(matches!(enumerate_x(shape(1), 1, 4, 100), Err(FlagError::NotPrime(4))));
    }

    #[test]
    fn stratum_count_examples() {
        let nu = DimVector(vec![1, 1, 2]);
        let s0 = Stratum { nu: nu.clone(), c: vec![0] };
        let s1 = Stratum { nu: nu.clone(), c: vec![1] };
        assert_eq!(stratum_count(&s0, 2, 2), BigUint::from(9u32));
        assert_eq!(stratum_count(&s1, 2, 3), BigUint::from(4u32));
        assert_eq!(stratum_count(&s1, 2, 2), BigUint::from(3u32));
        assert_eq!(count_x_nu(&nu, 1, 2, 2), BigUint::from(12u32));
        let bad = Stratum { nu: DimVector(vec![0, 1, 2]), c: vec![1] };
        assert_eq!(stratum_count(&bad, 2, 2), BigUint::zero());
        assert_eq!(count_x_nu(&DimVector::zero(3), 1, 2, 5), BigUint::from(1u32));
    }

    #[test]
    fn enumeration_matches_closed_forms() {
        for m in 1..=2 {
            for d in 0..=2 {
                for q in [2u64, 3] {
                    let x = enumerate_x(shape(m), d, q, DEFAULT_MAX_FLAGS).unwrap();
                    for (s, r) in x.by_stratum() {
                        assert_eq!(BigUint::from(r.len()), stratum_count(s, d, q), "{s:?}");
                    }
                    for s in all_strata(m, d) {
                        let n = x.by_stratum().get(&s).map_or(0, |r| r.len());
                        assert_eq!(BigUint::from(n), stratum_count(&s, d, q));
                    }
                    for (nu, r) in x.by_nu() {
                        assert_eq!(BigUint::from(r.len()), count_x_nu(nu, m, d, q));
                    }
                }
            }
        }
    }

    #[test]
    fn type_a_chains() {
        let a = enumerate_flags_type_a(1, 2, 2, DEFAULT_MAX_FLAGS).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(enumerate_flags_type_a(3, 0, 2, DEFAULT_MAX_FLAGS).unwrap().len(), 1);
        let a = enumerate_flags_type_a(2, 2, 3, DEFAULT_MAX_FLAGS).unwrap();
        for (nu, r) in a.by_nu() {
            let (lo, hi) = (nu.0[0], nu.0[1]);
            let expect = gaussian_binomial_i(2, hi, 3) * gaussian_binomial_i(hi, lo, 3);
            assert_eq!(BigUint::from(r.len()), expect);
        }
        assert_eq!(BigUint::from(a.len()), count_chain_flags(2, 2, 3));
    }

    #[test]
    fn deterministic_and_cached() {
        let a = enumerate_x(shape(2), 2, 3, DEFAULT_MAX_FLAGS).unwrap();
        let b = enumerate_x(shape(2), 2, 3, DEFAULT_MAX_FLAGS).unwrap();
        assert_eq!(a.flags, b.flags);
        let dir = tempfile::tempdir().unwrap();
        let c = enumerate_x_cached(shape(2), 2, 3, DEFAULT_MAX_FLAGS, Some(dir.path())).unwrap();
        let path = cache_path(dir.path(), a.kind(), 2, 3);
        let first = fs::read_to_string(&path).unwrap();
        let d = enumerate_x_cached(shape(2), 2, 3, DEFAULT_MAX_FLAGS, Some(dir.path())).unwrap();
        assert_eq!(c.flags, a.flags);
        assert_eq!(d.flags, a.flags);
        assert_eq!(fs::read_to_string(&path).unwrap(), first);
        // A corrupted cache is rebuilt.
        fs::write(&path, "{\"format\":\"qschur-flags\",\"version\":0}").unwrap();
        let e = enumerate_x_cached(shape(2), 2, 3, DEFAULT_MAX_FLAGS, Some(dir.path())).unwrap();
        assert_eq!(e.flags, a.flags);
        assert_eq!(fs::read_to_string(&path).unwrap(), first);
    }

    #[test]
    fn cartan_matrix() {
        let c = shape(2).cartan();
        assert_eq!(c, vec![vec![2, 0, -1, 0], vec![0, 2, -1, 0], vec![-1, -1, 2, -1], vec![0, 0, -1, 2]]);
        assert_eq!(shape(3).parse_node("j3"), Some(4));
        assert_eq!(shape(3).parse_node("j4"), None);
        assert_eq!(shape(3).node_name(4), "j3");
    }
}
