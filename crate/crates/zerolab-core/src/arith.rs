//! Prime enumeration and the arithmetic-function algebra (Möbius,
//! divisor counting, Dirichlet convolution, Mertens-type prime sums).
//!
//! Everything here works over the rational primes, so prime norms are the
//! primes themselves and enumeration is a plain sieve. Arithmetic-function
//! tables hold `f(1..=limit)` as doubles; the standard functions are
//! integer-valued well inside the exact range of `f64`, so convolution
//! identities hold with exact equality, not just to rounding.

use crate::numerics::KahanSum;
use crate::testfn::FourierPair;
use std::str::FromStr;
use thiserror::Error;

/// Largest sieve limit accepted before a call is rejected as a resource
/// error rather than attempted.
pub const MAX_SIEVE_LIMIT: u64 = 2_000_000_000;

/// Default cap on the prime bound a weighted Mertens sum may request.
pub const DEFAULT_PRIME_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("sieve limit {limit} exceeds the supported maximum {max}")]
    SieveLimitTooLarge { limit: u64, max: u64 },
    #[error("arithmetic function tables have mismatched limits {0} and {1}")]
    LimitMismatch(u64, u64),
    #[error("table limit must be at least 1")]
    EmptyTable,
    #[error("unknown arithmetic function name {0:?}")]
    UnknownFunction(String),
    #[error("weighted prime sum needs primes up to {required}, over the budget {budget}")]
    PrimeBudgetExceeded { required: u64, budget: u64 },
    #[error("parameter {name} = {value} is outside its valid range {range}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

/// Ascending table of all primes up to a limit.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Membership test by binary search (valid for `n <= limit`).
    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Sieve of Eratosthenes up to `limit` inclusive. A limit below 2 yields
/// an empty table; limits past [`MAX_SIEVE_LIMIT`] are rejected.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable, ArithError> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(ArithError::SieveLimitTooLarge {
            limit,
            max: MAX_SIEVE_LIMIT,
        });
    }
    if limit < 2 {
        return Ok(PrimeTable {
            limit,
            primes: Vec::new(),
        });
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        if !composite[p] {
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
        p += 1;
    }
    let primes = (2..=n).filter(|&i| !composite[i]).map(|i| i as u64).collect();
    Ok(PrimeTable { limit, primes })
}

/// An arithmetic function tabulated on `1..=limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithFn {
    values: Vec<f64>,
}

impl ArithFn {
    /// Builds a table from explicit values for `f(1), f(2), …`.
    pub fn from_values(values: Vec<f64>) -> Result<Self, ArithError> {
        if values.is_empty() {
            return Err(ArithError::EmptyTable);
        }
        Ok(Self { values })
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64
    }

    /// `f(n)` for `1 <= n <= limit`; panics outside the tabulated range.
    pub fn at(&self, n: u64) -> f64 {
        self.values[(n - 1) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `(f⋆g)(n) = Σ_{d|n} f(d) g(n/d)` on the shared table range.
///
/// For integer-valued inputs of moderate size every product and sum stays
/// inside the exact integer range of `f64`, so the result is exact.
pub fn dirichlet_convolve(f: &ArithFn, g: &ArithFn) -> Result<ArithFn, ArithError> {
    if f.limit() != g.limit() {
        return Err(ArithError::LimitMismatch(f.limit(), g.limit()));
    }
    let n = f.values.len();
    let mut out = vec![0.0f64; n];
    for d in 1..=n {
        let fd = f.values[d - 1];
        if fd == 0.0 {
            continue;
        }
        let mut m = d;
        let mut q = 1;
        while m <= n {
            out[m - 1] += fd * g.values[q - 1];
            m += d;
            q += 1;
        }
    }
    Ok(ArithFn { values: out })
}

/// The named standard functions of the sieve machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardFn {
    /// Möbius μ.
    Mobius,
    /// Divisor count τ₂ = 1⋆1.
    Tau2,
    /// λ₂ = μ⋆μ.
    Lambda2,
    /// φ₂ = λ₂⋆μ²⋆id.
    Phi2,
    /// Identity n ↦ n.
    Id,
    /// Constant 1.
    One,
}

impl FromStr for StandardFn {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mobius" => Ok(Self::Mobius),
            "tau2" => Ok(Self::Tau2),
            "lambda2" => Ok(Self::Lambda2),
            "phi2" => Ok(Self::Phi2),
            "id" => Ok(Self::Id),
            "one" => Ok(Self::One),
            other => Err(ArithError::UnknownFunction(other.to_string())),
        }
    }
}

fn mobius_table(limit: usize) -> Vec<f64> {
    // Smallest-prime-factor sieve, then factor each n and read off μ.
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    let mut mu = vec![0.0f64; limit];
    mu[0] = 1.0;
    for n in 2..=limit {
        let mut m = n;
        let mut factors = 0u32;
        let mut squarefree = true;
        while m > 1 {
            let p = spf[m] as usize;
            m /= p;
            factors += 1;
            if m % p == 0 {
                squarefree = false;
                break;
            }
        }
        mu[n - 1] = if squarefree {
            if factors % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        };
    }
    mu
}

fn tau2_table(limit: usize) -> Vec<f64> {
    let mut tau = vec![0.0f64; limit];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            tau[m - 1] += 1.0;
        }
    }
    tau
}

/// Tabulates a standard arithmetic function up to `limit >= 1`.
/// `lambda2` and `phi2` are assembled by Dirichlet convolution from μ.
pub fn standard_fn(kind: StandardFn, limit: u64) -> Result<ArithFn, ArithError> {
    if limit == 0 {
        return Err(ArithError::EmptyTable);
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(ArithError::SieveLimitTooLarge {
            limit,
            max: MAX_SIEVE_LIMIT,
        });
    }
    let n = limit as usize;
    let values = match kind {
        StandardFn::Mobius => mobius_table(n),
        StandardFn::Tau2 => tau2_table(n),
        StandardFn::One => vec![1.0; n],
        StandardFn::Id => (1..=n).map(|k| k as f64).collect(),
        StandardFn::Lambda2 => {
            let mu = ArithFn {
                values: mobius_table(n),
            };
            return dirichlet_convolve(&mu, &mu);
        }
        StandardFn::Phi2 => {
            let mu = ArithFn {
                values: mobius_table(n),
            };
            let mu_sq = ArithFn {
                values: mu.values.iter().map(|v| v * v).collect(),
            };
            let id = ArithFn {
                values: (1..=n).map(|k| k as f64).collect(),
            };
            let lambda2 = dirichlet_convolve(&mu, &mu)?;
            return dirichlet_convolve(&dirichlet_convolve(&lambda2, &mu_sq)?, &id);
        }
    };
    Ok(ArithFn { values })
}

/// Parses a function name and tabulates it; unknown names are rejected.
pub fn standard_fn_named(name: &str, limit: u64) -> Result<ArithFn, ArithError> {
    standard_fn(name.parse()?, limit)
}

/// Weighted Mertens-type prime sum
/// `Σ_p φ̂(ν·log p / log_c) · 2 log p / (p^{ν/2} · log_c)`
/// over primes `p ≤ exp(T_φ · log_c / ν)`, by exact enumeration.
///
/// For `ν = 2` this converges to `½·φ(0)` as `log_c` grows, which is the
/// second-moment normalization the family averages lean on. The prime
/// bound grows exponentially in `log_c`, so a budget guards the sieve.
pub fn mertens_weighted_sum(fp: &FourierPair, log_c: f64, nu: u32) -> Result<f64, ArithError> {
    mertens_weighted_sum_with_budget(fp, log_c, nu, DEFAULT_PRIME_BUDGET)
}

/// [`mertens_weighted_sum`] with an explicit prime budget.
pub fn mertens_weighted_sum_with_budget(
    fp: &FourierPair,
    log_c: f64,
    nu: u32,
    budget: u64,
) -> Result<f64, ArithError> {
    if !(log_c > 0.0) || !log_c.is_finite() {
        return Err(ArithError::InvalidParameter {
            name: "log_c",
            value: log_c,
            range: "(0, ∞)",
        });
    }
    if !(nu == 1 || nu == 2) {
        return Err(ArithError::InvalidParameter {
            name: "nu",
            value: nu as f64,
            range: "{1, 2}",
        });
    }
    let bound_real = (fp.support_radius() * log_c / nu as f64).exp();
    if bound_real < 2.0 {
        return Ok(0.0);
    }
    if bound_real > budget as f64 {
        return Err(ArithError::PrimeBudgetExceeded {
            required: bound_real as u64,
            budget,
        });
    }
    let table = sieve_primes(bound_real.floor() as u64)?;
    let mut acc = KahanSum::new();
    for &p in table.primes() {
        let pf = p as f64;
        let log_p = pf.ln();
        let weight = match nu {
            1 => pf.sqrt(),
            _ => pf,
        };
        acc.add(fp.eval_hat(nu as f64 * log_p / log_c) * 2.0 * log_p / (weight * log_c));
    }
    Ok(acc.value())
}

/// `Σ_{p | q} log(p) / p^s` over the distinct prime divisors of `q`,
/// for `s ∈ (0, 1]`. Returns 0 for `q = 1`.
pub fn prime_divisor_log_sum(q: u64, s: f64) -> Result<f64, ArithError> {
    if q == 0 {
        return Err(ArithError::InvalidParameter {
            name: "q",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(ArithError::InvalidParameter {
            name: "s",
            value: s,
            range: "(0, 1]",
        });
    }
    let mut acc = KahanSum::new();
    let mut m = q;
    let mut d: u64 = 2;
    while d * d <= m {
        if m % d == 0 {
            acc.add((d as f64).ln() / (d as f64).powf(s));
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        acc.add((m as f64).ln() / (m as f64).powf(s));
    }
    Ok(acc.value())
}
