//! Dimension combinatorics of the strata `X_{nu,c}` and their vector bundles.
//!
//! Dimensions over the algebraic closure are checked against point counts:
//! each stratum count is a polynomial in `q` whose degree is the dimension.

use std::collections::BTreeMap;
use std::thread;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::flagvar::{enumerate_x, DimVector, FlagError, QuiverShape, Stratum};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("({nu}, c={c}) is not a nonempty stratum for d={d}")]
    InvalidStratum { nu: DimVector, c: String, d: usize },
    #[error("empty Y_nu for nu={0}")]
    EmptyY(DimVector),
    #[error("count not polynomial over sampled primes {0:?}")]
    NotPolynomial(Vec<u64>),
    #[error("sample primes must be distinct")]
    DuplicatePrimes,
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn require_valid(s: &Stratum, d: usize) -> Result<(), GeometryError> {
    if s.is_valid(d) {
        Ok(())
    } else {
        Err(GeometryError::InvalidStratum { nu: s.nu.clone(), c: s.c_display(), d })
    }
}

/// `sum_{a=i,k} nu_a (nu_{j_1} - nu_a) + sum_b nu_{j_b} (nu_{j_{b+1}} - nu_{j_b})`.
fn grassmannian_part(s: &Stratum, d: usize) -> i64 {
    let nu = &s.nu.0;
    let j1 = s.nu_j(1, d);
    let fork = nu[0] * (j1 - nu[0]) + nu[1] * (j1 - nu[1]);
    let chain: i64 = (1..=s.m()).map(|b| s.nu_j(b, d) * (s.nu_j(b + 1, d) - s.nu_j(b, d))).sum();
    fork + chain
}

/// `sum_b (c_b - c_{b+1}) (nu_{j_{b+1}} - nu_{j_b} - c_{b+1} + c_b)`.
fn correction(s: &Stratum, d: usize) -> i64 {
    (1..=s.m())
        .map(|b| {
            let (cb, cn) = (s.c_at(b), s.c_at(b + 1));
            (cb - cn) * (s.nu_j(b + 1, d) - s.nu_j(b, d) - cn + cb)
        })
        .sum()
}

/// Dimension of the component `X_{nu,c}`.
pub fn dim_x_stratum(s: &Stratum, d: usize) -> Result<i64, GeometryError> {
    require_valid(s, d)?;
    Ok(grassmannian_part(s, d) - correction(s, d))
}

/// Fiber dimension of the vector bundle `Y_{nu,c} -> X_{nu,c}`.
pub fn fiber_dim(s: &Stratum, d: usize) -> Result<i64, GeometryError> {
    require_valid(s, d)?;
    Ok(correction(s, d))
}

/// `sum_b dim Hom(V_{j_b}/V_{j_{b+1}}, U_{j_{b+1}}/U_{j_b})`.
pub fn fiber_dim_hom(s: &Stratum, d: usize) -> Result<i64, GeometryError> {
    require_valid(s, d)?;
    Ok((1..=s.m()).map(|b| (s.c_at(b) - s.c_at(b + 1)) * (s.u_at(b + 1, d) - s.u_at(b, d))).sum())
}

/// One row of the c-independence table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimYEntry {
    pub c: Vec<i64>,
    pub dim_x: i64,
    pub fiber: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimY {
    /// Common value of `dim X_{nu,c} + fiber` when it is independent of `c`.
    pub value: Option<i64>,
    pub table: Vec<DimYEntry>,
}

impl DimY {
    pub fn is_c_independent(&self) -> bool {
        self.value.is_some()
    }
}

/// `dim Y_nu` from every admissible `c`.
pub fn dim_y(nu: &DimVector, m: usize, d: usize) -> Result<DimY, GeometryError> {
    let strata = enumerate_strata(nu, m, d);
    if strata.is_empty() {
        return Err(GeometryError::EmptyY(nu.clone()));
    }
    let mut table = Vec::new();
    for s in &strata {
        table.push(DimYEntry { c: s.c.clone(), dim_x: dim_x_stratum(s, d)?, fiber: fiber_dim(s, d)? });
    }
    let first = table[0].dim_x + table[0].fiber;
    let value = table.iter().all(|e| e.dim_x + e.fiber == first).then_some(first);
    Ok(DimY { value, table })
}

/// Admissible `c` for `nu`: `0 <= c_m <= ... <= c_1 <= min(nu_i, nu_k)` with
/// `max(nu_i, nu_k) <= u_1 <= ... <= u_m <= d`.
pub fn enumerate_strata(nu: &DimVector, m: usize, d: usize) -> Vec<Stratum> {
    if nu.len() != m + 2 || !nu.is_nonnegative() || m == 0 {
        return Vec::new();
    }
    let (ni, nk) = (nu.0[0], nu.0[1]);
    let top = ni.min(nk);
    let mut out = Vec::new();
    // c stored by beta, so c[0] = c_1 is the largest.
    let mut c = vec![0i64; m];
    fn rec(pos: usize, hi: i64, c: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if pos == c.len() {
            f(c);
            return;
        }
        for v in 0..=hi {
            c[pos] = v;
            rec(pos + 1, v, c, f);
        }
    }
    rec(0, top, &mut c, &mut |c: &[i64]| {
        let u: Vec<i64> = (0..m).map(|b| nu.0[b + 2] - c[b]).collect();
        let ok = u[0] >= ni.max(nk) && u.windows(2).all(|w| w[0] <= w[1]) && u[m - 1] <= d as i64;
        if ok {
            out.push(Stratum { nu: nu.clone(), c: c.to_vec() });
        }
    });
    out.sort();
    out
}

/// A polynomial in `q` with integer coefficients, ascending, together with
/// the samples it was fitted to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountPolynomial {
    pub coefficients: Vec<BigInt>,
    pub samples: Vec<(u64, BigUint)>,
}

impl CountPolynomial {
    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coefficients.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        self.coefficients.iter().rev().fold(BigInt::zero(), |acc, c| acc * &q + c)
    }

    /// Coefficients joined by `;`, ascending.
    pub fn coefficient_list(&self) -> String {
        self.coefficients.iter().map(BigInt::to_string).collect::<Vec<_>>().join(";")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients.iter().map(BigInt::to_string).collect::<Vec<_>>(),
            "samples": self.samples.iter().map(|(p, n)| json!([p.to_string(), n.to_string()])).collect::<Vec<_>>(),
        })
    }
}

/// Interpolates through `(p, count)` pairs; fails unless every coefficient is an integer.
pub fn interpolate(samples: &[(u64, BigUint)]) -> Result<CountPolynomial, GeometryError> {
    let primes: Vec<u64> = samples.iter().map(|s| s.0).collect();
    let mut sorted = primes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() {
        return Err(GeometryError::DuplicatePrimes);
    }
    let r = |x: u64| BigRational::from_integer(BigInt::from(x));
    // Lagrange basis, accumulated as coefficient vectors.
    let n = samples.len();
    let mut coef = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in samples.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * r(*xj);
            }
            basis = next;
            denom *= r(*xi) - r(*xj);
        }
        let scale = BigRational::from_integer(BigInt::from(yi.clone())) / denom;
        for (k, b) in basis.iter().enumerate() {
            coef[k] += b * &scale;
        }
    }
    if coef.iter().any(|c| !c.is_integer()) {
        return Err(GeometryError::NotPolynomial(primes));
    }
    let mut coefficients: Vec<BigInt> = coef.into_iter().map(|c| c.to_integer()).collect();
    while coefficients.last().is_some_and(|c| c.is_zero()) {
        coefficients.pop();
    }
    Ok(CountPolynomial { coefficients, samples: samples.to_vec() })
}

/// Enumerated `|X_{nu,c}(F_p)|` for every stratum and every prime. Primes are
/// enumerated in parallel.
pub fn enumerated_stratum_counts(
    m: usize,
    d: usize,
    primes: &[u64],
    max_flags: u64,
) -> Result<BTreeMap<Stratum, Vec<(u64, BigUint)>>, GeometryError> {
    let shape = QuiverShape::new(m)?;
    let per_prime: Vec<Result<BTreeMap<Stratum, usize>, FlagError>> = thread::scope(|scope| {
        let handles: Vec<_> = primes
            .iter()
            .map(|&p| {
                scope.spawn(move || {
                    let flags = enumerate_x(shape, d, p, max_flags)?;
                    Ok(flags.by_stratum().iter().map(|(s, r)| (s.clone(), r.len())).collect())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("enumeration thread panicked")).collect()
    });
    let mut out: BTreeMap<Stratum, Vec<(u64, BigUint)>> = BTreeMap::new();
    let maps = per_prime.into_iter().collect::<Result<Vec<_>, _>>()?;
    for s in crate::flagvar::all_strata(m, d) {
        let row = primes.iter().zip(&maps).map(|(&p, counts)| (p, BigUint::from(counts.get(&s).copied().unwrap_or(0)))).collect();
        out.insert(s, row);
    }
    Ok(out)
}

/// The point-count polynomial of one stratum, from flag enumeration at each prime.
pub fn interpolate_count_polynomial(
    s: &Stratum,
    d: usize,
    primes: &[u64],
    max_flags: u64,
) -> Result<CountPolynomial, GeometryError> {
    if !s.is_valid(d) {
        let samples = primes.iter().map(|&p| (p, BigUint::zero())).collect();
        return Ok(CountPolynomial { coefficients: Vec::new(), samples });
    }
    let counts = enumerated_stratum_counts(s.m(), d, primes, max_flags)?;
    interpolate(&counts[s])
}

/// One line of the stratum table.
#[derive(Clone, Debug)]
pub struct StratumRow {
    pub stratum: Stratum,
    pub dim_x: i64,
    pub fiber_dim: i64,
    pub dim_y: Option<i64>,
    pub polynomial: CountPolynomial,
}

/// Every stratum for `(m, d)` with its dimensions and interpolated count.
pub fn stratum_table(m: usize, d: usize, primes: &[u64], max_flags: u64) -> Result<Vec<StratumRow>, GeometryError> {
    let counts = enumerated_stratum_counts(m, d, primes, max_flags)?;
    let mut dim_ys: BTreeMap<DimVector, Option<i64>> = BTreeMap::new();
    let mut rows = Vec::new();
    for (s, samples) in &counts {
        let dy = match dim_ys.get(&s.nu) {
            Some(v) => *v,
            None => {
                let v = dim_y(&s.nu, m, d)?.value;
                dim_ys.insert(s.nu.clone(), v);
                v
            }
        };
        rows.push(StratumRow {
            stratum: s.clone(),
            dim_x: dim_x_stratum(s, d)?,
            fiber_dim: fiber_dim(s, d)?,
            dim_y: dy,
            polynomial: interpolate(samples)?,
        });
    }
    Ok(rows)
}

/// CSV with columns `nu,c,dim_X,fiber_dim,dim_Y,count_polynomial`. Vectors and
/// coefficient lists are joined by `;`; `c` is written `c_m;...;c_1`.
pub fn stratum_csv(rows: &[StratumRow]) -> Result<String, GeometryError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["nu", "c", "dim_X", "fiber_dim", "dim_Y", "count_polynomial"])?;
    for r in rows {
        let c: Vec<String> = r.stratum.c.iter().rev().map(i64::to_string).collect();
        w.write_record([
            r.stratum.nu.joined(),
            c.join(";"),
            r.dim_x.to_string(),
            r.fiber_dim.to_string(),
            r.dim_y.map_or_else(|| "mismatch".to_string(), |v| v.to_string()),
            r.polynomial.coefficient_list(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// True when the interpolated degree matches the dimension and the leading
/// coefficient is one.
pub fn degree_matches(row: &StratumRow) -> bool {
    row.polynomial.degree() == Some(row.dim_x as usize) && row.polynomial.leading().abs().is_one() && row.polynomial.leading().is_positive()
}
