//! The convolution algebra of functions on `X x X` over Q(sqrt q).
//!
//! Operators are sparse matrices indexed by flags; the product is
//! `(f * g)(U, U~) = sum_{U'} f(U, U') g(U', U~)`. This module builds the
//! generators `E_a`, `F_a`, `K_a^{+-1}` and `1_nu`, checks the quantum group
//! relations among them, extracts the idempotents `1_nu` from the `K_a`, and
//! measures the dimension of the subalgebra they generate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::{ArithError, QRootQ, QuadField};
use crate::flagvar::{slot_u, slot_ui, slot_uk, slot_v, DimVector, FlagIndexedSet, FlagKind};

/// Default bound on the basis size of a closure computation.
pub const DEFAULT_MAX_BASIS: usize = 20_000;

#[derive(Debug, Error)]
pub enum ConvError {
    #[error("operators belong to different algebras")]
    ContextMismatch,
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("malformed generator spec {0:?}")]
    BadSpec(String),
    #[error("closure basis exceeded the cap of {cap} elements")]
    BasisTooLarge { cap: usize },
    #[error("no separating weight vector with entries up to {bound}")]
    NoSeparatingVector { bound: i64 },
    #[error("idempotent extraction failed for {0}")]
    IdempotentMismatch(DimVector),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A sparse function `X x X -> Q(sqrt q)`. Rows are sorted by column and
/// never store zeros, so structural equality is equality of functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvOp {
    ctx: u64,
    rows: Vec<Vec<(u32, QRootQ)>>,
}

impl ConvOp {
    fn zero_in(ctx: u64, n: usize) -> Self {
        ConvOp { ctx, rows: vec![Vec::new(); n] }
    }

    fn from_rows(ctx: u64, rows: Vec<BTreeMap<u32, QRootQ>>) -> Self {
        ConvOp { ctx, rows: rows.into_iter().map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect() }
    }

    /// Number of flags.
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get(&self, row: usize, col: usize) -> QRootQ {
        let r = &self.rows[row];
        match r.binary_search_by_key(&(col as u32), |(c, _)| *c) {
            Ok(i) => r[i].1.clone(),
            Err(_) => QRootQ::zero(),
        }
    }

    pub fn row(&self, row: usize) -> &[(u32, QRootQ)] {
        &self.rows[row]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &QRootQ)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c as usize, v)))
    }

    /// First entry (row-major) where the two operators differ.
    pub fn first_difference(&self, other: &ConvOp) -> Option<(usize, usize, QRootQ, QRootQ)> {
        for r in 0..self.rows.len().max(other.rows.len()) {
            let (a, b) = (self.rows.get(r).map_or(&[][..], |x| x), other.rows.get(r).map_or(&[][..], |x| x));
            if a == b {
                continue;
            }
            let mut cols: Vec<u32> = a.iter().chain(b.iter()).map(|(c, _)| *c).collect();
            cols.sort_unstable();
            cols.dedup();
            for c in cols {
                let (x, y) = (self.get(r, c as usize), other.get(r, c as usize));
                if x != y {
                    return Some((r, c as usize, x, y));
                }
            }
        }
        None
    }

    /// Copy with entry `(row, col)` replaced by `value`.
    pub fn with_entry(&self, row: usize, col: usize, value: QRootQ) -> ConvOp {
        let mut out = self.clone();
        let r = &mut out.rows[row];
        match r.binary_search_by_key(&(col as u32), |(c, _)| *c) {
            Ok(i) if value.is_zero() => {
                r.remove(i);
            }
            Ok(i) => r[i].1 = value,
            Err(_) if value.is_zero() => {}
            Err(i) => r.insert(i, (col as u32, value)),
        }
        out
    }

    /// `[[row, col, scalar], ...]` in row-major order.
    pub fn to_json(&self, field: &QuadField) -> Value {
        Value::Array(self.entries().map(|(r, c, v)| json!([r, c, field.to_json(v)])).collect())
    }

    fn flatten(&self) -> SparseVec {
        let n = self.rows.len() as u64;
        self.entries().map(|(r, c, v)| (r as u64 * n + c as u64, v.clone())).collect()
    }
}

/// Generator functions of the convolution algebra. Nodes are indices into
/// the node list of the flag family (see [`FlagKind::node_name`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
    One(DimVector),
}

impl Generator {
    /// Parses `E:j1`, `F:i`, `K:k`, `Kinv:j2`.
    pub fn parse(kind: FlagKind, s: &str) -> Result<Generator, ConvError> {
        let (head, node) = s.split_once(':').ok_or_else(|| ConvError::BadSpec(s.to_string()))?;
        let a = kind.parse_node(node).ok_or_else(|| ConvError::UnknownNode(node.to_string()))?;
        match head {
            "E" => Ok(Generator::E(a)),
            "F" => Ok(Generator::F(a)),
            "K" => Ok(Generator::K(a)),
            "Kinv" => Ok(Generator::KInv(a)),
            _ => Err(ConvError::BadSpec(s.to_string())),
        }
    }

    pub fn label(&self, kind: FlagKind) -> String {
        match self {
            Generator::E(a) => format!("E:{}", kind.node_name(*a)),
            Generator::F(a) => format!("F:{}", kind.node_name(*a)),
            Generator::K(a) => format!("K:{}", kind.node_name(*a)),
            Generator::KInv(a) => format!("Kinv:{}", kind.node_name(*a)),
            Generator::One(nu) => format!("1:{nu}"),
        }
    }
}

/// Dimensions of the column flag with the boundary conventions
/// `U_{j_{m+1}} = D`, `V_{j_{m+1}} = 0`.
struct RamifiedDims<'a> {
    m: usize,
    d: i64,
    s: &'a [i64],
}

impl RamifiedDims<'_> {
    fn u(&self, beta: usize) -> i64 {
        if beta == self.m + 1 {
            self.d
        } else {
            self.s[slot_u(self.m, beta)]
        }
    }
    fn v(&self, beta: usize) -> i64 {
        if beta == self.m + 1 {
            0
        } else {
            self.s[slot_v(self.m, beta)]
        }
    }
    fn ui(&self) -> i64 {
        self.s[slot_ui(self.m)]
    }
    fn uk(&self) -> i64 {
        self.s[slot_uk(self.m)]
    }
}

/// Which way a generator moves the flag at one slot.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// Row flag one dimension smaller (E).
    Shrink,
    /// Row flag one dimension larger (F).
    Grow,
}

/// For node `a`: the slots a generator may change, each with the exponent of
/// sqrt q as a function of the column flag's dimensions.
fn moves(kind: FlagKind, a: usize, dir: Direction, d: usize, s: &[i64]) -> Vec<(usize, i64)> {
    match kind {
        FlagKind::RamifiedD { m } => {
            let x = RamifiedDims { m, d: d as i64, s };
            let e = dir == Direction::Shrink;
            match a {
                0 | 1 => {
                    let (slot, ua) = if a == 0 { (slot_ui(m), x.ui()) } else { (slot_uk(m), x.uk()) };
                    let exp = if e { -(x.u(1) - ua) } else { -(ua - x.v(1)) };
                    vec![(slot, exp)]
                }
                _ => {
                    let b = a - 1;
                    let (v_exp, u_exp) = match (b, e) {
                        (1, true) => (-(x.ui() + x.uk() - x.v(1) - x.v(2)), -(x.u(2) + 2 * x.v(1) - x.u(1))),
                        (1, false) => (-(x.u(2) - 2 * x.u(1) + x.v(1)), -(x.u(1) - x.ui() - x.uk() - x.v(2))),
                        (_, true) => (
                            -(x.u(b - 1) - x.v(b) - x.v(b + 1)),
                            -(x.u(b + 1) + 2 * x.v(b) - x.u(b) - x.v(b - 1)),
                        ),
                        (_, false) => (
                            -(x.u(b + 1) - 2 * x.u(b) + x.v(b) + x.v(b - 1)),
                            -(-x.v(b + 1) + x.u(b) - x.u(b - 1)),
                        ),
                    };
                    vec![(slot_v(m, b), v_exp), (slot_u(m, b), u_exp)]
                }
            }
        }
        FlagKind::ChainA { n } => {
            let w = |h: usize| -> i64 {
                match h {
                    0 => 0,
                    h if h == n + 1 => d as i64,
                    h => s[h - 1],
                }
            };
            let h = a + 1;
            let exp = match dir {
                Direction::Shrink => -(w(h + 1) - w(h)),
                Direction::Grow => -(w(h) - w(h - 1)),
            };
            vec![(a, exp)]
        }
    }
}

/// Exponent of sqrt q in `K_a` at a flag with slot dimensions `s`.
pub(crate) fn k_exponent(kind: FlagKind, a: usize, d: usize, s: &[i64]) -> i64 {
    match kind {
        FlagKind::RamifiedD { m } => {
            let x = RamifiedDims { m, d: d as i64, s };
            match a {
                0 => x.u(1) + x.v(1) - 2 * x.ui(),
                1 => x.u(1) + x.v(1) - 2 * x.uk(),
                2 => x.u(2) + x.v(2) + x.ui() + x.uk() - 2 * x.u(1) - 2 * x.v(1),
                _ => {
                    let b = a - 1;
                    x.u(b + 1) + x.v(b + 1) + x.u(b - 1) + x.v(b - 1) - 2 * x.u(b) - 2 * x.v(b)
                }
            }
        }
        FlagKind::ChainA { n } => {
            let w = |h: usize| -> i64 {
                match h {
                    0 => 0,
                    h if h == n + 1 => d as i64,
                    h => s[h - 1],
                }
            };
            let h = a + 1;
            w(h + 1) - 2 * w(h) + w(h - 1)
        }
    }
}

/// The algebra of functions on `X x X` for one enumerated flag variety.
#[derive(Debug, Clone)]
pub struct ConvAlgebra {
    flags: FlagIndexedSet,
    field: QuadField,
    ctx: u64,
    cartan: Vec<Vec<i64>>,
}

impl ConvAlgebra {
    pub fn new(flags: FlagIndexedSet) -> Self {
        let field = QuadField::new(flags.q() as u64).expect("flag sets have prime q");
        let kind = flags.kind();
        let (shape, n) = match kind {
            FlagKind::RamifiedD { m } => (1u64, m as u64),
            FlagKind::ChainA { n } => (2u64, n as u64),
        };
        let ctx = shape | n << 4 | (flags.d() as u64) << 20 | (flags.q() as u64) << 28 | (flags.len() as u64) << 40;
        let cartan = kind.cartan();
        ConvAlgebra { flags, field, ctx, cartan }
    }

    pub fn flags(&self) -> &FlagIndexedSet {
        &self.flags
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn kind(&self) -> FlagKind {
        self.flags.kind()
    }

    pub fn node_count(&self) -> usize {
        self.kind().node_count()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn size(&self) -> usize {
        self.flags.len()
    }

    pub fn zero(&self) -> ConvOp {
        ConvOp::zero_in(self.ctx, self.size())
    }

    /// The unit: indicator of the diagonal.
    pub fn unit(&self) -> ConvOp {
        let mut op = self.zero();
        for (r, row) in op.rows.iter_mut().enumerate() {
            row.push((r as u32, QRootQ::one()));
        }
        op
    }

    /// Indicator of the pair `(row, col)`.
    pub fn indicator(&self, row: usize, col: usize) -> ConvOp {
        let mut op = self.zero();
        op.rows[row].push((col as u32, QRootQ::one()));
        op
    }

    fn check(&self, op: &ConvOp) -> Result<(), ConvError> {
        if op.ctx != self.ctx || op.rows.len() != self.size() {
            return Err(ConvError::ContextMismatch);
        }
        Ok(())
    }

    pub fn generator(&self, g: &Generator) -> Result<ConvOp, ConvError> {
        let kind = self.kind();
        let node_ok = |a: usize| if a < self.node_count() { Ok(a) } else { Err(ConvError::UnknownNode(a.to_string())) };
        match g {
            Generator::E(a) => Ok(self.raise_lower(node_ok(*a)?, Direction::Shrink)),
            Generator::F(a) => Ok(self.raise_lower(node_ok(*a)?, Direction::Grow)),
            Generator::K(a) | Generator::KInv(a) => {
                let a = node_ok(*a)?;
                let sign = if matches!(g, Generator::K(_)) { 1 } else { -1 };
                let mut op = self.zero();
                for (t, row) in op.rows.iter_mut().enumerate() {
                    let e = k_exponent(kind, a, self.flags.d(), &self.flags.slot_dims(t));
                    row.push((t as u32, self.field.qpow(sign * e)));
                }
                Ok(op)
            }
            Generator::One(nu) => {
                let mut op = self.zero();
                if let Some(r) = self.flags.by_nu().get(nu) {
                    for t in r.clone() {
                        op.rows[t].push((t as u32, QRootQ::one()));
                    }
                }
                Ok(op)
            }
        }
    }

    fn raise_lower(&self, a: usize, dir: Direction) -> ConvOp {
        let kind = self.kind();
        let lat = self.flags.lattice();
        let mut rows: Vec<BTreeMap<u32, QRootQ>> = vec![BTreeMap::new(); self.size()];
        for col in 0..self.size() {
            let slots = self.flags.slots(col);
            let dims = self.flags.slot_dims(col);
            for (slot, exp) in moves(kind, a, dir, self.flags.d(), &dims) {
                let neighbours = match dir {
                    Direction::Shrink => lat.covers_down(slots[slot]),
                    Direction::Grow => lat.covers_up(slots[slot]),
                };
                let value = self.field.qpow(exp);
                let mut cand = slots.to_vec();
                for &w in neighbours {
                    cand[slot] = w;
                    if let Some(row) = self.flags.index_of(&cand) {
                        rows[row].insert(col as u32, value.clone());
                    }
                }
            }
        }
        ConvOp::from_rows(self.ctx, rows)
    }

    pub fn compose(&self, f: &ConvOp, g: &ConvOp) -> Result<ConvOp, ConvError> {
        self.check(f)?;
        self.check(g)?;
        let mut rows = Vec::with_capacity(self.size());
        for frow in &f.rows {
            let mut acc: BTreeMap<u32, QRootQ> = BTreeMap::new();
            for (k, fv) in frow {
                for (c, gv) in &g.rows[*k as usize] {
                    let p = self.field.mul(fv, gv);
                    acc.entry(*c).and_modify(|x| *x += &p).or_insert(p);
                }
            }
            rows.push(acc);
        }
        Ok(ConvOp::from_rows(self.ctx, rows))
    }

    /// Product of a list of operators, left to right.
    pub fn product(&self, ops: &[&ConvOp]) -> Result<ConvOp, ConvError> {
        let mut acc = self.unit();
        for op in ops {
            acc = self.compose(&acc, op)?;
        }
        Ok(acc)
    }

    /// `sum_i coef_i * op_i`.
    pub fn linear_combination(&self, terms: &[(QRootQ, &ConvOp)]) -> Result<ConvOp, ConvError> {
        let mut rows: Vec<BTreeMap<u32, QRootQ>> = vec![BTreeMap::new(); self.size()];
        for (coef, op) in terms {
            self.check(op)?;
            if coef.is_zero() {
                continue;
            }
            for (r, c, v) in op.entries() {
                let p = self.field.mul(coef, v);
                rows[r].entry(c as u32).and_modify(|x| *x += &p).or_insert(p);
            }
        }
        Ok(ConvOp::from_rows(self.ctx, rows))
    }

    pub fn add(&self, f: &ConvOp, g: &ConvOp) -> Result<ConvOp, ConvError> {
        self.linear_combination(&[(QRootQ::one(), f), (QRootQ::one(), g)])
    }

    pub fn sub(&self, f: &ConvOp, g: &ConvOp) -> Result<ConvOp, ConvError> {
        self.linear_combination(&[(QRootQ::one(), f), (QRootQ::from_int(-1), g)])
    }

    pub fn scale(&self, s: &QRootQ, f: &ConvOp) -> Result<ConvOp, ConvError> {
        self.linear_combination(&[(s.clone(), f)])
    }

    /// `delta_{a,top} d - (C nu)_a`: the weight of `X_nu` at node `a`.
    pub fn weight_exponent(&self, a: usize, nu: &DimVector) -> i64 {
        let top = if a == self.kind().top_node() { self.flags.d() as i64 } else { 0 };
        let c_nu: i64 = self.cartan[a].iter().zip(&nu.0).map(|(c, x)| c * x).sum();
        top - c_nu
    }
}

/// Every generator `E_a`, `F_a`, `K_a`, `K_a^{-1}` of an algebra, built once.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub e: Vec<ConvOp>,
    pub f: Vec<ConvOp>,
    pub k: Vec<ConvOp>,
    pub k_inv: Vec<ConvOp>,
}

impl GeneratorSet {
    pub fn build(alg: &ConvAlgebra) -> Result<Self, ConvError> {
        let n = alg.node_count();
        let all = |mk: fn(usize) -> Generator| (0..n).map(|a| alg.generator(&mk(a))).collect::<Result<Vec<_>, _>>();
        Ok(GeneratorSet { e: all(Generator::E)?, f: all(Generator::F)?, k: all(Generator::K)?, k_inv: all(Generator::KInv)? })
    }

    pub fn get(&self, g: &Generator) -> Option<&ConvOp> {
        match *g {
            Generator::E(a) => self.e.get(a),
            Generator::F(a) => self.f.get(a),
            Generator::K(a) => self.k.get(a),
            Generator::KInv(a) => self.k_inv.get(a),
            Generator::One(_) => None,
        }
    }

    pub fn get_mut(&mut self, g: &Generator) -> Option<&mut ConvOp> {
        match *g {
            Generator::E(a) => self.e.get_mut(a),
            Generator::F(a) => self.f.get_mut(a),
            Generator::K(a) => self.k.get_mut(a),
            Generator::KInv(a) => self.k_inv.get_mut(a),
            Generator::One(_) => None,
        }
    }

    /// The E, F and K^{+-1} operators as one list.
    pub fn all(&self) -> Vec<&ConvOp> {
        self.e.iter().chain(&self.f).chain(&self.k).chain(&self.k_inv).collect()
    }
}

/// The six families of defining relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationFamily {
    /// `K_a K_a^{-1} = 1`, `K_a K_b = K_b K_a`.
    KTorus,
    /// `K_a E_b = v^{c_ab} E_b K_a`, `K_a F_b = v^{-c_ab} F_b K_a`.
    KConjugation,
    /// `E_a F_b - F_b E_a = delta_ab (K_a - K_a^{-1}) / (v - v^{-1})`.
    Commutator,
    SerreE,
    SerreF,
    /// `E_a E_b = E_b E_a`, `F_a F_b = F_b F_a` when `c_ab = 0`.
    Distant,
}

impl fmt::Display for RelationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationFamily::KTorus => "k-torus",
            RelationFamily::KConjugation => "k-conjugation",
            RelationFamily::Commutator => "commutator",
            RelationFamily::SerreE => "serre-e",
            RelationFamily::SerreF => "serre-f",
            RelationFamily::Distant => "distant",
        };
        f.write_str(s)
    }
}

/// One failed relation instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub family: RelationFamily,
    pub relation: String,
    pub nodes: Vec<String>,
    pub row: usize,
    pub col: usize,
    pub lhs: Value,
    pub rhs: Value,
}

/// Summary of a relation scan.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub instances_checked: usize,
    pub per_family: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
}

impl RelationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(
        &mut self,
        alg: &ConvAlgebra,
        family: RelationFamily,
        relation: &str,
        nodes: &[usize],
        lhs: &ConvOp,
        rhs: &ConvOp,
    ) {
        self.instances_checked += 1;
        *self.per_family.entry(family.to_string()).or_default() += 1;
        if let Some((row, col, l, r)) = lhs.first_difference(rhs) {
            let kind = alg.kind();
            self.violations.push(Violation {
                family,
                relation: relation.to_string(),
                nodes: nodes.iter().map(|&a| kind.node_name(a)).collect(),
                row,
                col,
                lhs: alg.field().to_json(&l),
                rhs: alg.field().to_json(&r),
            });
        }
    }
}

/// Checks every instance of the six relation families on the given generators.
pub fn check_relations_with(alg: &ConvAlgebra, g: &GeneratorSet) -> Result<RelationReport, ConvError> {
    let n = alg.node_count();
    let field = alg.field();
    let c = alg.cartan();
    let one = alg.unit();
    let mut rep = RelationReport::default();

    for a in 0..n {
        let p = alg.compose(&g.k[a], &g.k_inv[a])?;
        rep.record(alg, RelationFamily::KTorus, "K_a K_a^-1 = 1", &[a], &p, &one);
        let p = alg.compose(&g.k_inv[a], &g.k[a])?;
        rep.record(alg, RelationFamily::KTorus, "K_a^-1 K_a = 1", &[a], &p, &one);
        for b in a + 1..n {
            let l = alg.compose(&g.k[a], &g.k[b])?;
            let r = alg.compose(&g.k[b], &g.k[a])?;
            rep.record(alg, RelationFamily::KTorus, "K_a K_b = K_b K_a", &[a, b], &l, &r);
        }
    }

    for a in 0..n {
        for b in 0..n {
            let l = alg.compose(&g.k[a], &g.e[b])?;
            let r = alg.scale(&field.qpow(c[a][b]), &alg.compose(&g.e[b], &g.k[a])?)?;
            rep.record(alg, RelationFamily::KConjugation, "K_a E_b = v^c_ab E_b K_a", &[a, b], &l, &r);
            let l = alg.compose(&g.k[a], &g.f[b])?;
            let r = alg.scale(&field.qpow(-c[a][b]), &alg.compose(&g.f[b], &g.k[a])?)?;
            rep.record(alg, RelationFamily::KConjugation, "K_a F_b = v^-c_ab F_b K_a", &[a, b], &l, &r);
        }
    }

    let denom = &field.qpow(1) - &field.qpow(-1);
    let denom_inv = field.inv(&denom)?;
    for a in 0..n {
        for b in 0..n {
            let ef = alg.compose(&g.e[a], &g.f[b])?;
            let fe = alg.compose(&g.f[b], &g.e[a])?;
            let l = alg.sub(&ef, &fe)?;
            let r = if a == b {
                alg.scale(&denom_inv, &alg.sub(&g.k[a], &g.k_inv[a])?)?
            } else {
                alg.zero()
            };
            rep.record(alg, RelationFamily::Commutator, "E_a F_b - F_b E_a = delta_ab [K_a]", &[a, b], &l, &r);
        }
    }

    let bracket = &field.qpow(1) + &field.qpow(-1);
    let zero = alg.zero();
    for a in 0..n {
        for b in 0..n {
            if a == b || c[a][b] != -1 {
                continue;
            }
            for (family, x, name) in
                [(RelationFamily::SerreE, &g.e, "E_a^2 E_b - [2] E_a E_b E_a + E_b E_a^2 = 0"), (RelationFamily::SerreF, &g.f, "F_a^2 F_b - [2] F_a F_b F_a + F_b F_a^2 = 0")]
            {
                let aab = alg.product(&[&x[a], &x[a], &x[b]])?;
                let aba = alg.product(&[&x[a], &x[b], &x[a]])?;
                let baa = alg.product(&[&x[b], &x[a], &x[a]])?;
                let l = alg.linear_combination(&[(QRootQ::one(), &aab), (-&bracket, &aba), (QRootQ::one(), &baa)])?;
                rep.record(alg, family, name, &[a, b], &l, &zero);
            }
        }
    }

    for a in 0..n {
        for b in a + 1..n {
            if c[a][b] != 0 {
                continue;
            }
            let l = alg.compose(&g.e[a], &g.e[b])?;
            let r = alg.compose(&g.e[b], &g.e[a])?;
            rep.record(alg, RelationFamily::Distant, "E_a E_b = E_b E_a", &[a, b], &l, &r);
            let l = alg.compose(&g.f[a], &g.f[b])?;
            let r = alg.compose(&g.f[b], &g.f[a])?;
            rep.record(alg, RelationFamily::Distant, "F_a F_b = F_b F_a", &[a, b], &l, &r);
        }
    }
    Ok(rep)
}

/// Builds the generators and checks every defining relation.
pub fn check_relations(alg: &ConvAlgebra) -> Result<RelationReport, ConvError> {
    check_relations_with(alg, &GeneratorSet::build(alg)?)
}

/// One failed weight-action or support check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightViolation {
    pub check: String,
    pub node: String,
    pub row: usize,
    pub col: usize,
    pub detail: String,
}

/// Verifies `K_a f = v^{delta_{a,top} d - (C nu)_a} f` for every indicator
/// function `f` with rows in `X_nu`, and that `E_a 1_nu` is supported on
/// `X_{nu-a} x X_nu` and `F_a 1_nu` on `X_{nu+a} x X_nu`.
pub fn weight_action_check_with(alg: &ConvAlgebra, g: &GeneratorSet) -> Vec<WeightViolation> {
    let kind = alg.kind();
    let flags = alg.flags();
    let mut out = Vec::new();
    for a in 0..alg.node_count() {
        // K_a * e_{U,U~} = sum_{U'} K_a(U', U) e_{U',U~}: it equals the scalar
        // multiple exactly when column U of K_a is that scalar on the diagonal.
        let mut columns: Vec<Vec<(usize, &QRootQ)>> = vec![Vec::new(); alg.size()];
        for (r, c, v) in g.k[a].entries() {
            columns[c].push((r, v));
        }
        for (u, col) in columns.iter().enumerate() {
            let expect = alg.field().qpow(alg.weight_exponent(a, flags.nu(u)));
            let ok = col.len() == 1 && col[0].0 == u && *col[0].1 == expect;
            if !ok {
                out.push(WeightViolation {
                    check: "K_a f = v^(weight) f".into(),
                    node: kind.node_name(a),
                    row: u,
                    col: u,
                    detail: format!("expected {expect} on the diagonal of X_{}", flags.nu(u)),
                });
            }
        }
        for (op, delta, label) in [(&g.e[a], -1, "E_a 1_nu on X_(nu-a) x X_nu"), (&g.f[a], 1, "F_a 1_nu on X_(nu+a) x X_nu")] {
            for (r, c, _) in op.entries() {
                let want = flags.nu(c).shifted(a, delta);
                if flags.nu(r) != &want {
                    out.push(WeightViolation {
                        check: label.into(),
                        node: kind.node_name(a),
                        row: r,
                        col: c,
                        detail: format!("row in X_{} but column in X_{}", flags.nu(r), flags.nu(c)),
                    });
                }
            }
        }
    }
    out
}

pub fn weight_action_check(alg: &ConvAlgebra) -> Result<Vec<WeightViolation>, ConvError> {
    Ok(weight_action_check_with(alg, &GeneratorSet::build(alg)?))
}

/// Certificate that each `1_nu` is a combination of K-monomials:
/// `1_nu = sum_c coefficients[nu][c] * (prod_a K_a^{n_a})^c`.
#[derive(Clone, Debug)]
pub struct IdempotentCertificate {
    pub n_vector: Vec<i64>,
    pub nus: Vec<DimVector>,
    /// `sum_a n_a b_{a,nu}` for each realized nu, pairwise distinct.
    pub separating_exponents: Vec<i64>,
    pub coefficients: Vec<Vec<QRootQ>>,
}

impl IdempotentCertificate {
    /// Rebuilds every `1_nu` from freshly constructed K operators.
    pub fn evaluate(&self, alg: &ConvAlgebra) -> Result<BTreeMap<DimVector, ConvOp>, ConvError> {
        let monomials = k_monomial_powers(alg, &self.n_vector, self.nus.len())?;
        let mut out = BTreeMap::new();
        if !monomials.iter().all(|op| op.entries().all(|(r, c, _)| r == c)) {
            for (nu, coefs) in self.nus.iter().zip(&self.coefficients) {
                let terms: Vec<(QRootQ, &ConvOp)> = coefs.iter().cloned().zip(monomials.iter()).collect();
                out.insert(nu.clone(), alg.linear_combination(&terms)?);
            }
            return Ok(out);
        }
        // Diagonal monomials: the combination at (t, t) depends only on the
        // tuple of diagonal values at t, so equal tuples share one evaluation.
        let field = alg.field();
        let keys: Vec<Vec<QRootQ>> = (0..alg.size()).map(|t| monomials.iter().map(|op| op.get(t, t)).collect()).collect();
        for (nu, coefs) in self.nus.iter().zip(&self.coefficients) {
            let mut memo: HashMap<&[QRootQ], QRootQ> = HashMap::new();
            let mut rows = vec![BTreeMap::new(); alg.size()];
            for (t, key) in keys.iter().enumerate() {
                let value = memo.entry(key.as_slice()).or_insert_with(|| {
                    let mut acc = QRootQ::zero();
                    for (c, x) in coefs.iter().zip(key) {
                        acc += &field.mul(c, x);
                    }
                    acc
                });
                rows[t].insert(t as u32, value.clone());
            }
            out.insert(nu.clone(), ConvOp::from_rows(alg.ctx, rows));
        }
        Ok(out)
    }

    pub fn to_json(&self, field: &QuadField) -> Value {
        json!({
            "n_vector": self.n_vector,
            "nus": self.nus.iter().map(|nu| nu.0.clone()).collect::<Vec<_>>(),
            "separating_exponents": self.separating_exponents,
            "coefficients": self.coefficients.iter()
                .map(|row| row.iter().map(|x| field.to_json(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// `(prod_a K_a^{n_a})^c` for `c = 0, ..., count - 1`, built by convolution.
fn k_monomial_powers(alg: &ConvAlgebra, n_vector: &[i64], count: usize) -> Result<Vec<ConvOp>, ConvError> {
    let mut base = alg.unit();
    for (a, &na) in n_vector.iter().enumerate() {
        let g = if na >= 0 { Generator::K(a) } else { Generator::KInv(a) };
        let k = alg.generator(&g)?;
        for _ in 0..na.unsigned_abs() {
            base = alg.compose(&base, &k)?;
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut cur = alg.unit();
    for _ in 0..count {
        out.push(cur.clone());
        cur = alg.compose(&cur, &base)?;
    }
    Ok(out)
}

/// Result of expressing every `1_nu` through K-monomials.
#[derive(Clone, Debug)]
pub struct IdempotentExtraction {
    pub certificate: IdempotentCertificate,
    pub reconstructed: BTreeMap<DimVector, ConvOp>,
    /// Realized nu whose reconstruction differs from the direct `1_nu`.
    pub mismatches: Vec<DimVector>,
}

/// Bound on the entries of the search box for a separating vector.
pub const SEPARATING_SEARCH_BOUND: i64 = 6;

/// Expresses each `1_nu` as a Q(sqrt q)-combination of powers of one
/// K-monomial by solving the Vandermonde system in the values of that
/// monomial on the pieces `X_nu`.
///
/// The exponents `b_{a,nu}` are read off the K operators themselves.
pub fn extract_idempotents(alg: &ConvAlgebra) -> Result<IdempotentExtraction, ConvError> {
    let field = *alg.field();
    let flags = alg.flags();
    let nus = flags.realized_nus();
    let n_nodes = alg.node_count();
    let kind = alg.kind();
    let weights: Vec<Vec<i64>> = nus
        .iter()
        .map(|nu| {
            let t = flags.by_nu()[nu].start;
            let dims = flags.slot_dims(t);
            (0..n_nodes).map(|a| k_exponent(kind, a, flags.d(), &dims)).collect()
        })
        .collect();

    let n_vector = find_separating_vector(&weights, SEPARATING_SEARCH_BOUND)?;
    let exps: Vec<i64> = weights.iter().map(|w| w.iter().zip(&n_vector).map(|(x, y)| x * y).sum()).collect();

    // With V[mu][c] = x_mu^c and x_mu = v^{exps[mu]}, column nu of V^{-1}
    // holds the coefficients of the Lagrange polynomial vanishing at every
    // x_mu except x_nu.
    let xs: Vec<QRootQ> = exps.iter().map(|&s| field.qpow(s)).collect();
    let coefficients = lagrange_coefficients(&field, &xs)?;

    let certificate = IdempotentCertificate { n_vector, nus: nus.clone(), separating_exponents: exps, coefficients };
    let reconstructed = certificate.evaluate(alg)?;
    let mut mismatches = Vec::new();
    for nu in &nus {
        if reconstructed[nu] != alg.generator(&Generator::One(nu.clone()))? {
            mismatches.push(nu.clone());
        }
    }
    Ok(IdempotentExtraction { certificate, reconstructed, mismatches })
}

/// Smallest-spread integer vector with pairwise distinct pairings against
/// the given weights, searching boxes of growing radius.
fn find_separating_vector(weights: &[Vec<i64>], bound: i64) -> Result<Vec<i64>, ConvError> {
    let n = weights.first().map_or(0, Vec::len);
    for radius in 0..=bound {
        let mut best: Option<(i64, Vec<i64>)> = None;
        let side = (2 * radius + 1) as u64;
        for code in 0..side.pow(n as u32) {
            let mut c = code;
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let x = (c % side) as i64 - radius;
                    c /= side;
                    x
                })
                .collect();
            if v.iter().map(|x| x.abs()).max().unwrap_or(0) != radius {
                continue;
            }
            let mut vals: Vec<i64> = weights.iter().map(|w| w.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
            vals.sort_unstable();
            if vals.windows(2).any(|p| p[0] == p[1]) {
                continue;
            }
            let spread = vals.last().copied().unwrap_or(0) - vals.first().copied().unwrap_or(0);
            if best.as_ref().is_none_or(|(s, _)| spread < *s) {
                best = Some((spread, v));
            }
        }
        if let Some((_, v)) = best {
            return Ok(v);
        }
    }
    Err(ConvError::NoSeparatingVector { bound })
}

/// Ascending coefficients of `L_nu(x) = prod_{mu != nu} (x - x_mu) / (x_nu - x_mu)`
/// for every `nu`, so that `sum_c L_nu[c] x_mu^c = delta_{mu,nu}`.
fn lagrange_coefficients(field: &QuadField, xs: &[QRootQ]) -> Result<Vec<Vec<QRootQ>>, ConvError> {
    let n = xs.len();
    // P(x) = prod_mu (x - x_mu), ascending.
    let mut p = vec![QRootQ::one()];
    for x in xs {
        let mut next = vec![QRootQ::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= &field.mul(c, x);
        }
        p = next;
    }
    let mut out = Vec::with_capacity(n);
    for (nu, x) in xs.iter().enumerate() {
        // Synthetic division P(x) / (x - x_nu).
        let mut quot = vec![QRootQ::zero(); n];
        let mut carry = QRootQ::zero();
        for k in (1..=n).rev() {
            carry = &p[k] + &field.mul(&carry, x);
            quot[k - 1] = carry.clone();
        }
        let mut denom = QRootQ::one();
        for (mu, y) in xs.iter().enumerate() {
            if mu != nu {
                denom = field.mul(&denom, &(x - y));
            }
        }
        let s = field.inv(&denom)?;
        out.push(quot.iter().map(|c| field.mul(c, &s)).collect());
    }
    Ok(out)
}

type SparseVec = Vec<(u64, QRootQ)>;

/// Incremental echelon basis: each vector has a distinct leading coordinate
/// normalized to one.
struct Echelon {
    field: QuadField,
    pivots: HashMap<u64, usize>,
    basis: Vec<SparseVec>,
}

impl Echelon {
    fn new(field: QuadField) -> Self {
        Echelon { field, pivots: HashMap::new(), basis: Vec::new() }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v`; if something survives, normalizes and inserts it.
    fn insert(&mut self, mut v: SparseVec) -> bool {
        while let Some((lead, coef)) = v.first().cloned() {
            let Some(&bi) = self.pivots.get(&lead) else {
                let s = self.field.inv(&coef).expect("leading coefficient is nonzero");
                for (_, x) in v.iter_mut() {
                    *x = self.field.mul(x, &s);
                }
                self.pivots.insert(lead, self.basis.len());
                self.basis.push(v);
                return true;
            };
            v = axpy(&self.field, &v, &coef, &self.basis[bi]);
        }
        false
    }
}

/// `x - s * y` for sorted sparse vectors.
fn axpy(field: &QuadField, x: &SparseVec, s: &QRootQ, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, -field.mul(s, &y[j].1)));
            j += 1;
        } else {
            let val = &x[i].1 - &field.mul(s, &y[j].1);
            if !val.is_zero() {
                out.push((x[i].0, val));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dimension of the unital subalgebra generated by `generators`.
///
/// Starts from the unit and multiplies every new basis element by every
/// generator on both sides until the span stops growing.
pub fn closure_dimension(alg: &ConvAlgebra, generators: &[&ConvOp], max_basis: usize) -> Result<usize, ConvError> {
    for g in generators {
        alg.check(g)?;
    }
    let mut ech = Echelon::new(*alg.field());
    let mut elems = Vec::new();
    let one = alg.unit();
    ech.insert(one.flatten());
    elems.push(one);
    let mut next = 0;
    while next < elems.len() {
        let b = elems[next].clone();
        next += 1;
        for g in generators {
            for cand in [alg.compose(g, &b)?, alg.compose(&b, g)?] {
                if ech.insert(cand.flatten()) {
                    if ech.len() > max_basis {
                        return Err(ConvError::BasisTooLarge { cap: max_basis });
                    }
                    elems.push(cand);
                }
            }
        }
    }
    Ok(ech.len())
}

/// Block structure of the algebra generated by `E_a`, `F_a`, `K_a^{+-1}`.
#[derive(Clone, Debug)]
pub struct WeightedClosure {
    pub dimension: usize,
    /// `dim 1_nu C 1_nu'` for every nonzero block `(nu, nu')`.
    pub blocks: BTreeMap<(DimVector, DimVector), usize>,
    pub certificate: IdempotentCertificate,
}

/// Dimension of the algebra generated by `E_a`, `F_a`, `K_a^{+-1}`, computed
/// block by block.
///
/// First every `1_nu` is extracted from the K operators and checked, which
/// shows the generated algebra is `sum_{nu,nu'} 1_nu C 1_nu'`. Each left
/// ideal `C 1_nu'` is then the span of words in `E_a`, `F_a` applied to
/// `1_nu'`; the K operators act on each block by a scalar.
pub fn closure_dimension_weighted(alg: &ConvAlgebra, max_basis: usize) -> Result<WeightedClosure, ConvError> {
    let ext = extract_idempotents(alg)?;
    if let Some(nu) = ext.mismatches.first() {
        return Err(ConvError::IdempotentMismatch(nu.clone()));
    }
    let gens = GeneratorSet::build(alg)?;
    let flags = alg.flags();
    let mut blocks = BTreeMap::new();
    let mut total = 0;
    for (nu_col, idem) in &ext.reconstructed {
        let mut ech = Echelon::new(*alg.field());
        let mut elems = vec![idem.clone()];
        ech.insert(idem.flatten());
        *blocks.entry((nu_col.clone(), nu_col.clone())).or_insert(0) += 1;
        let mut next = 0;
        while next < elems.len() {
            let b = elems[next].clone();
            next += 1;
            for x in gens.e.iter().chain(&gens.f) {
                let cand = alg.compose(x, &b)?;
                let Some((row, _, _)) = cand.entries().next() else {
                    continue;
                };
                let nu_row = flags.nu(row).clone();
                if ech.insert(cand.flatten()) {
                    if total + ech.len() > max_basis {
                        return Err(ConvError::BasisTooLarge { cap: max_basis });
                    }
                    *blocks.entry((nu_row, nu_col.clone())).or_insert(0) += 1;
                    elems.push(cand);
                }
            }
        }
        total += ech.len();
    }
    Ok(WeightedClosure { dimension: total, blocks, certificate: ext.certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagvar::{enumerate_flags_type_a, enumerate_x, QuiverShape, DEFAULT_MAX_FLAGS};

    fn alg(m: usize, d: usize, q: u64) -> ConvAlgebra {
        ConvAlgebra::new(enumerate_x(QuiverShape::new(m).unwrap(), d, q, DEFAULT_MAX_FLAGS).unwrap())
    }

    fn find_flag(a: &ConvAlgebra, dims: &[i64]) -> usize {
        (0..a.size()).find(|&t| a.flags().slot_dims(t) == dims).unwrap()
    }

    #[test]
    fn generator_entries_by_hand() {
        // m = 1, d = 1: slots are [V_{j1}, U_i, U_k, U_{j1}].
        let a = alg(1, 1, 2);
        let row = find_flag(&a, &[0, 0, 0, 1]);
        let col = find_flag(&a, &[0, 1, 0, 1]);
        let e_i = a.generator(&Generator::E(0)).unwrap();
        assert_eq!(e_i.get(row, col), QRootQ::one());
        let k_i = a.generator(&Generator::K(0)).unwrap();
        assert_eq!(k_i.get(col, col), a.field().qpow(-1));
        // Flags differing in two slots are never related.
        let far = find_flag(&a, &[0, 1, 1, 1]);
        for g in [Generator::E(0), Generator::E(1), Generator::E(2), Generator::F(0), Generator::F(2)] {
            let op = a.generator(&g).unwrap();
            assert!(op.get(row, far).is_zero() && op.get(far, row).is_zero());
        }
    }

    #[test]
    fn unit_and_idempotents() {
        let a = alg(2, 1, 2);
        let one = a.unit();
        let e = a.generator(&Generator::E(3)).unwrap();
        assert_eq!(a.compose(&one, &e).unwrap(), e);
        assert_eq!(a.compose(&e, &one).unwrap(), e);
        let nus = a.flags().realized_nus();
        let mut sum = a.zero();
        for nu in &nus {
            let p = a.generator(&Generator::One(nu.clone())).unwrap();
            sum = a.add(&sum, &p).unwrap();
            for mu in &nus {
                let r = a.compose(&p, &a.generator(&Generator::One(mu.clone())).unwrap()).unwrap();
                assert_eq!(r, if mu == nu { p.clone() } else { a.zero() });
            }
        }
        assert_eq!(sum, one);
        let empty = a.generator(&Generator::One(DimVector(vec![5, 5, 5, 5]))).unwrap();
        assert!(empty.is_zero());
    }

    #[test]
    fn commutator_example() {
        let a = alg(2, 1, 2);
        let f = a.field();
        let (e, fi) = (a.generator(&Generator::E(0)).unwrap(), a.generator(&Generator::F(0)).unwrap());
        let lhs = a.sub(&a.compose(&e, &fi).unwrap(), &a.compose(&fi, &e).unwrap()).unwrap();
        let k = a.sub(&a.generator(&Generator::K(0)).unwrap(), &a.generator(&Generator::KInv(0)).unwrap()).unwrap();
        let rhs = a.scale(&f.inv(&(&f.qpow(1) - &f.qpow(-1))).unwrap(), &k).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn context_mismatch() {
        let a = alg(1, 1, 2);
        let b = alg(2, 1, 2);
        assert!(matches!(a.compose(&a.unit(), &b.unit()), Err(ConvError::ContextMismatch)));
        assert!(a.generator(&Generator::E(9)).is_err());
        assert!(Generator::parse(a.kind(), "E:j2").is_err());
        assert_eq!(Generator::parse(a.kind(), "Kinv:j1").unwrap(), Generator::KInv(2));
    }

    #[test]
    fn relations_small() {
        for (m, d, q) in [(1, 1, 2), (2, 1, 2), (1, 2, 3)] {
            let rep = check_relations(&alg(m, d, q)).unwrap();
            assert!(rep.is_clean(), "({m},{d},{q}): {:?}", &rep.violations[..rep.violations.len().min(3)]);
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let a = alg(2, 1, 2);
        let mut g = GeneratorSet::build(&a).unwrap();
        let e = g.get_mut(&Generator::E(2)).unwrap();
        let (r, c, v) = e.entries().next().map(|(r, c, v)| (r, c, v.scale_int(2))).unwrap();
        *e = e.with_entry(r, c, v);
        let rep = check_relations_with(&a, &g).unwrap();
        assert!(!rep.is_clean());
    }

    #[test]
    fn weight_action_small() {
        let a = alg(1, 1, 2);
        assert!(weight_action_check(&a).unwrap().is_empty());
        assert_eq!(a.weight_exponent(0, &DimVector(vec![1, 0, 1])), -1);
        let top = a.kind().top_node();
        assert_eq!(a.weight_exponent(top, &DimVector(vec![0, 0, 0])), 1);
    }

    #[test]
    fn idempotent_extraction_small() {
        let a = alg(1, 1, 2);
        let ext = extract_idempotents(&a).unwrap();
        assert_eq!(ext.certificate.nus.len(), 6);
        assert!(ext.mismatches.is_empty());
        let d0 = alg(2, 0, 3);
        let ext = extract_idempotents(&d0).unwrap();
        assert_eq!(ext.reconstructed.values().next().unwrap(), &d0.unit());
        assert_eq!(ext.certificate.coefficients, vec![vec![QRootQ::one()]]);
    }

    #[test]
    fn lagrange_solves_vandermonde() {
        let field = QuadField::new(3).unwrap();
        let xs: Vec<QRootQ> = [-2, 0, 1, 3].iter().map(|&s| field.qpow(s)).collect();
        let coefs = lagrange_coefficients(&field, &xs).unwrap();
        for (nu, row) in coefs.iter().enumerate() {
            for (mu, x) in xs.iter().enumerate() {
                let mut acc = QRootQ::zero();
                let mut pow = QRootQ::one();
                for c in row {
                    acc += &field.mul(c, &pow);
                    pow = field.mul(&pow, x);
                }
                assert_eq!(acc, if mu == nu { QRootQ::one() } else { QRootQ::zero() });
            }
        }
    }

    #[test]
    fn closure_small() {
        let a = alg(1, 1, 2);
        let g = GeneratorSet::build(&a).unwrap();
        assert_eq!(closure_dimension(&a, &g.all(), DEFAULT_MAX_BASIS).unwrap(), 36);
        assert_eq!(closure_dimension_weighted(&a, DEFAULT_MAX_BASIS).unwrap().dimension, 36);
        let one = a.unit();
        assert_eq!(closure_dimension(&a, &[&one], DEFAULT_MAX_BASIS).unwrap(), 1);
        assert!(matches!(closure_dimension(&a, &g.all(), 10), Err(ConvError::BasisTooLarge { cap: 10 })));
    }

    #[test]
    fn type_a_closure() {
        let a = ConvAlgebra::new(enumerate_flags_type_a(1, 2, 2, DEFAULT_MAX_FLAGS).unwrap());
        assert!(check_relations(&a).unwrap().is_clean());
        let g = GeneratorSet::build(&a).unwrap();
        assert_eq!(closure_dimension(&a, &g.all(), DEFAULT_MAX_BASIS).unwrap(), 10);
    }
}
