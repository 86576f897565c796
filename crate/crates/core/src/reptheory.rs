//! Weights, roots and saturated sets for simply-laced Cartan matrices.
//!
//! Weights are written in the fundamental-weight basis. The simple root
//! `alpha_a` has weight coordinates equal to column `a` of `C`, so
//! `lambda = dvec - C nu` is the weight of the `nu`-graded piece.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("Cartan matrix must be square with {0} rows")]
    Shape(usize),
    #[error("Cartan matrix is not symmetric and simply laced")]
    NotSimplyLaced,
    #[error("Cartan matrix is not positive definite (not of finite type)")]
    NotFiniteType,
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("vector has {got} entries, expected {want}")]
    Length { got: usize, want: usize },
}

/// A weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn fundamental(n: usize, a: usize) -> Self {
        let mut w = vec![0; n];
        w[a] = 1;
        Weight(w)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A simply-laced Cartan matrix of finite type together with its positive roots.
#[derive(Clone, Debug)]
pub struct CartanData {
    names: Vec<String>,
    c: Vec<Vec<i64>>,
    inverse: Vec<Vec<BigRational>>,
    positive_roots: Vec<Vec<i64>>,
}

impl CartanData {
    pub fn from_matrix(names: Vec<String>, c: Vec<Vec<i64>>) -> Result<Self, RepError> {
        let n = c.len();
        if names.len() != n || c.iter().any(|r| r.len() != n) {
            return Err(RepError::Shape(n));
        }
        for a in 0..n {
            for b in 0..n {
                let ok = if a == b { c[a][b] == 2 } else { c[a][b] == c[b][a] && (c[a][b] == 0 || c[a][b] == -1) };
                if !ok {
                    return Err(RepError::NotSimplyLaced);
                }
            }
        }
        let inverse = rational_inverse_pd(&c).ok_or(RepError::NotFiniteType)?;
        let positive_roots = positive_roots(&c);
        Ok(CartanData { names, c, inverse, positive_roots })
    }

    fn from_edges(names: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let n = names.len();
        let mut c = vec![vec![0; n]; n];
        for (a, row) in c.iter_mut().enumerate() {
            row[a] = 2;
        }
        for &(a, b) in edges {
            c[a][b] = -1;
            c[b][a] = -1;
        }
        CartanData::from_matrix(names, c).expect("Dynkin diagrams of types A and D are of finite type")
    }

    /// Type `D_{m+2}` with nodes ordered `i, k, j_1, ..., j_m`.
    pub fn type_d(m: usize) -> Self {
        let mut names = vec!["i".to_string(), "k".to_string()];
        names.extend((1..=m).map(|b| format!("j{b}")));
        let mut edges = Vec::new();
        if m >= 1 {
            edges.push((0, 2));
            edges.push((1, 2));
        }
        edges.extend((2..m + 1).map(|a| (a, a + 1)));
        CartanData::from_edges(names, &edges)
    }

    /// Type `A_n` with nodes `1, ..., n` along a path.
    pub fn type_a(n: usize) -> Self {
        let names = (1..=n).map(|h| h.to_string()).collect();
        let edges: Vec<(usize, usize)> = (1..n).map(|a| (a - 1, a)).collect();
        CartanData::from_edges(names, &edges)
    }

    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.c
    }

    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inverse
    }

    /// `dvec - C nu`.
    pub fn weight_of(&self, dvec: &[i64], nu: &[i64]) -> Weight {
        Weight((0..self.rank()).map(|a| dvec[a] - self.c[a].iter().zip(nu).map(|(x, y)| x * y).sum::<i64>()).collect())
    }

    /// `floor(C^{-1} v)` componentwise.
    fn floor_inverse(&self, v: &[i64]) -> Vec<i64> {
        self.inverse
            .iter()
            .map(|row| {
                let s: BigRational = row.iter().zip(v).map(|(x, &y)| x * BigRational::from_integer(y.into())).sum();
                s.floor().to_integer().to_i64().expect("bound fits in i64")
            })
            .collect()
    }

    fn check_len(&self, v: &[i64]) -> Result<(), RepError> {
        if v.len() != self.rank() {
            return Err(RepError::Length { got: v.len(), want: self.rank() });
        }
        Ok(())
    }
}

/// Inverse of a symmetric matrix, or `None` if it is not positive definite
/// (some pivot of the unpivoted elimination is not positive).
fn rational_inverse_pd(c: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = c.len();
    let r = |x: i64| BigRational::from_integer(x.into());
    let mut a: Vec<Vec<BigRational>> = c.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| r((i == j) as i64)).collect()).collect();
    for col in 0..n {
        if !a[col][col].is_positive() {
            return None;
        }
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[row][j] -= t;
                let t = &f * &inv[col][j];
                inv[row][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Closure of the simple roots under `s_a(beta) = beta - (C beta)_a alpha_a`,
/// keeping the positive ones.
fn positive_roots(c: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = c.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut stack: Vec<Vec<i64>> = (0..n).map(|a| (0..n).map(|b| (a == b) as i64).collect()).collect();
    while let Some(beta) = stack.pop() {
        if !seen.insert(beta.clone()) {
            continue;
        }
        for a in 0..n {
            let pairing: i64 = c[a].iter().zip(&beta).map(|(x, y)| x * y).sum();
            let mut img = beta.clone();
            img[a] -= pairing;
            if img.iter().all(|&x| x >= 0) && img.iter().any(|&x| x > 0) && !seen.contains(&img) {
                stack.push(img);
            }
        }
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    out
}

/// `dvec = d` at node `top` and zero elsewhere.
pub fn top_dvec(rank: usize, top: usize, d: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[top] = d;
    v
}

/// One element of a saturated set: the weight and its root-lattice offset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PiElement {
    pub lambda: Weight,
    pub nu: Vec<i64>,
}

/// All `(lambda, nu)` with `lambda = dvec - C nu` dominant and `nu` in N^I,
/// sorted by `nu`.
pub fn pi_set(c: &CartanData, dvec: &[i64]) -> Result<Vec<PiElement>, RepError> {
    c.check_len(dvec)?;
    let bound = c.floor_inverse(dvec);
    let mut out = Vec::new();
    for nu in box_points(&bound) {
        let lambda = c.weight_of(dvec, &nu);
        if lambda.is_dominant() {
            out.push(PiElement { lambda, nu });
        }
    }
    Ok(out)
}

/// Every integer vector `0 <= x <= bound`, in lexicographic order.
fn box_points(bound: &[i64]) -> Vec<Vec<i64>> {
    if bound.iter().any(|&b| b < 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; bound.len()];
    loop {
        out.push(cur.clone());
        let mut i = bound.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < bound[i] {
                cur[i] += 1;
                for x in &mut cur[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// `d_a + sum_{b ~ a} nu_b - 2 nu_a >= 0` at every node `a`.
pub fn feasibility_inequality(dvec: &[i64], nu: &[i64], c: &CartanData) -> bool {
    let n = c.rank();
    (0..n).all(|a| {
        let neighbours: i64 = (0..n).filter(|&b| b != a && c.c[a][b] == -1).map(|b| nu[b]).sum();
        dvec[a] + neighbours - 2 * nu[a] >= 0
    })
}

/// `dim L(lambda) = prod_{alpha > 0} <lambda + rho, alpha> / <rho, alpha>`.
pub fn weyl_dim(c: &CartanData, lambda: &Weight) -> Result<BigUint, RepError> {
    c.check_len(&lambda.0)?;
    if !lambda.is_dominant() {
        return Err(RepError::NotDominant(lambda.clone()));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for alpha in c.positive_roots() {
        let top: i64 = alpha.iter().zip(&lambda.0).map(|(k, l)| k * (l + 1)).sum();
        let height: i64 = alpha.iter().sum();
        num *= top as u64;
        den *= height as u64;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    Ok(quot)
}

/// `sum_{lambda in pi} (dim L(lambda))^2`.
pub fn schur_dimension(c: &CartanData, pi: &[PiElement]) -> Result<BigUint, RepError> {
    let mut total = BigUint::zero();
    for el in pi {
        let d = weyl_dim(c, &el.lambda)?;
        total += &d * &d;
    }
    Ok(total)
}

/// The Weyl group orbit of a weight.
pub fn weyl_orbit(c: &CartanData, lambda: &Weight) -> Result<BTreeSet<Weight>, RepError> {
    c.check_len(&lambda.0)?;
    if !lambda.is_dominant() {
        return Err(RepError::NotDominant(lambda.clone()));
    }
    let n = c.rank();
    let mut seen = BTreeSet::new();
    let mut stack = vec![lambda.clone()];
    while let Some(mu) = stack.pop() {
        if !seen.insert(mu.clone()) {
            continue;
        }
        for a in 0..n {
            if mu.0[a] == 0 {
                continue;
            }
            let img = Weight((0..n).map(|b| mu.0[b] - mu.0[a] * c.c[b][a]).collect());
            if !seen.contains(&img) {
                stack.push(img);
            }
        }
    }
    Ok(seen)
}

/// True iff every dominant `mu` with `lambda - mu` in the positive root cone
/// of some `lambda` in `pi` is itself in `pi`.
pub fn check_saturation(c: &CartanData, pi: &[PiElement]) -> bool {
    let members: BTreeSet<&Weight> = pi.iter().map(|e| &e.lambda).collect();
    pi.iter().all(|el| {
        box_points(&c.floor_inverse(&el.lambda.0)).into_iter().all(|k| {
            let mu = c.weight_of(&el.lambda.0, &k);
            !mu.is_dominant() || members.contains(&mu)
        })
    })
}

/// `nu_i + nu_k <= nu_{j_1} <= ... <= nu_{j_m} <= d`, for type D node order.
pub fn necessary_condition(nu: &[i64], m: usize, d: i64) -> bool {
    if nu.len() != m + 2 || nu.iter().any(|&x| x < 0) {
        return false;
    }
    let mut prev = nu[0] + nu[1];
    for &x in &nu[2..] {
        if x < prev {
            return false;
        }
        prev = x;
    }
    prev <= d
}

/// Type D vectors `nu` satisfying the necessary condition whose weight
/// `d omega_{j_m} - C nu` is not dominant.
pub fn necessary_but_not_in_pi(m: usize, d: i64) -> Vec<Vec<i64>> {
    let c = CartanData::type_d(m);
    let dvec = top_dvec(c.rank(), m + 1, d);
    box_points(&vec![d; m + 2])
        .into_iter()
        .filter(|nu| necessary_condition(nu, m, d) && !c.weight_of(&dvec, nu).is_dominant())
        .collect()
}

/// Number of `n x n` matrices over N with entry sum `d`, by listing every
/// matrix with entries in `0..=d`.
pub fn nat_matrices_with_sum(n: usize, d: u64) -> u64 {
    let cells = (n * n) as u32;
    let side = d + 1;
    (0..side.pow(cells))
        .filter(|&code| {
            let mut c = code;
            let mut sum = 0;
            for _ in 0..cells {
                sum += c % side;
                c /= side;
            }
            sum == d
        })
        .count() as u64
}
