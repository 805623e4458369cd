//! Satake-parameter arithmetic, Hecke eigenvalue recursions, the
//! conductor/multiplicity model, and the explicit-formula one-level
//! density engine.
//!
//! A synthetic automorphic representation here is a conductor, a root
//! number, and one Satake parameter per prime up to a stated horizon. For
//! an unramified prime the parameter is `α = e^{iθ}` with `β = α⁻¹`
//! (tempered, trivial central character), so every Hecke quantity is a
//! real trigonometric expression in `θ`. The one-level density of
//! low-lying zeros is computed from the prime side of the explicit
//! formula:
//!
//! `D(π, φ) = φ̂(0) − Σ_{ν≥1} P^{(ν)}`,
//! `P^{(ν)} = (2/log c) Σ_p (α_p^ν + β_p^ν) · φ̂(ν·log p/log c) · log p / p^{ν/2}`,
//!
//! where the compact support of `φ̂` truncates each prime sum at
//! `p ≤ c^{T_φ/ν}`. The `ν ≥ 3` block is controlled by a rigorous numeric
//! majorant built from the `p^{7/64}` temperedness envelope.

use crate::arith::sieve_primes;
use crate::numerics::{KahanSum, linspace};
use crate::testfn::FourierPair;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LfunError {
    #[error("theta = {0} is outside [0, π]")]
    InvalidTheta(f64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{op} is undefined at the ramified prime {prime}")]
    RamifiedOperand { prime: u64, op: &'static str },
    #[error("parameter {name} = {value} is outside its valid range {range}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("local L-factor at p = {prime} is singular at s = {s}")]
    SingularFactor { prime: u64, s: Complex64 },
    #[error("prime horizon {available} is below the required {required}")]
    InsufficientHorizon { required: u64, available: u64 },
    #[error("root number must be +1 or -1, got {0}")]
    BadRootNumber(i64),
    #[error("conductor must be a finite real ≥ 1, got {0}")]
    BadConductor(f64),
    #[error("no Satake data for the prime {prime} inside the horizon")]
    MissingLocal { prime: u64 },
    #[error("duplicate Satake data for the prime {prime}")]
    DuplicateLocal { prime: u64 },
    #[error("Satake data for {prime} lies beyond the horizon {horizon}")]
    LocalBeyondHorizon { prime: u64, horizon: u64 },
    #[error("prime {prime} divides the arithmetic conductor but is marked unramified")]
    ShouldBeRamified { prime: u64 },
    #[error("prime {prime} is marked ramified but does not divide the arithmetic conductor")]
    ShouldBeUnramified { prime: u64 },
    #[error("arithmetic conductor has the prime factor {prime} beyond the horizon {horizon}")]
    ConductorBeyondHorizon { prime: u64, horizon: u64 },
    #[error("arithmetic conductor overflow while multiplying ramified primes")]
    ConductorOverflow,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Satake data at one prime: either `α = e^{iθ}` with `θ ∈ [0, π]`, or a
/// ramified marker.
#[derive(Debug, Clone, PartialEq)]
pub struct SatakeLocal {
    prime: u64,
    class: LocalClass,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalClass {
    Unramified { theta: f64 },
    Ramified,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl SatakeLocal {
    pub fn unramified(prime: u64, theta: f64) -> Result<Self, LfunError> {
        if !is_prime_u64(prime) {
            return Err(LfunError::NotPrime(prime));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(LfunError::InvalidTheta(theta));
        }
        Ok(Self {
            prime,
            class: LocalClass::Unramified { theta },
        })
    }

    pub fn ramified(prime: u64) -> Result<Self, LfunError> {
        if !is_prime_u64(prime) {
            return Err(LfunError::NotPrime(prime));
        }
        Ok(Self {
            prime,
            class: LocalClass::Ramified,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_ramified(&self) -> bool {
        matches!(self.class, LocalClass::Ramified)
    }

    pub fn theta(&self) -> Option<f64> {
        match self.class {
            LocalClass::Unramified { theta } => Some(theta),
            LocalClass::Ramified => None,
        }
    }
}

/// Hecke eigenvalue `λ(p^ν)` by the three-term recursion
/// `λ(p^{ν+1}) = λ(p)·λ(p^ν) − λ(p^{ν−1})`, with `λ(1) = 1` and
/// `λ(p) = 2cos θ`. A ramified prime has eigenvalue 0 for every `ν ≥ 1`.
pub fn hecke_eigenvalue(local: &SatakeLocal, nu: u32) -> f64 {
    match local.class {
        LocalClass::Ramified => {
            if nu == 0 {
                1.0
            } else {
                0.0
            }
        }
        LocalClass::Unramified { theta } => {
            let lambda_p = 2.0 * theta.cos();
            let mut prev = 1.0;
            if nu == 0 {
                return prev;
            }
            let mut curr = lambda_p;
            for _ in 1..nu {
                (prev, curr) = (curr, lambda_p * curr - prev);
            }
            curr
        }
    }
}

/// Dirichlet-series coefficient `a(pⁿ) = Σ_{i+j=n} α^{i−j}`, evaluated as
/// the direct exponential sum (independent of the Hecke recursion, which
/// it provably equals).
pub fn dirichlet_coefficient(local: &SatakeLocal, n: u32) -> Result<f64, LfunError> {
    let LocalClass::Unramified { theta } = local.class else {
        return Err(LfunError::RamifiedOperand {
            prime: local.prime,
            op: "dirichlet_coefficient",
        });
    };
    let mut acc = KahanSum::new();
    for i in 0..=n {
        // α^i β^{n-i} = e^{i(2i-n)θ}; the imaginary parts cancel in pairs.
        acc.add(((2.0 * i as f64 - n as f64) * theta).cos());
    }
    Ok(acc.value())
}

/// Power sum `α^ν + β^ν = 2cos(νθ)` for `ν ≥ 1`.
pub fn power_sum(local: &SatakeLocal, nu: u32) -> Result<f64, LfunError> {
    if nu == 0 {
        return Err(LfunError::InvalidParameter {
            name: "nu",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    let LocalClass::Unramified { theta } = local.class else {
        return Err(LfunError::RamifiedOperand {
            prime: local.prime,
            op: "power_sum",
        });
    };
    Ok(2.0 * (nu as f64 * theta).cos())
}

/// Local Euler factor `(1 − α p^{−s})⁻¹ (1 − α⁻¹ p^{−s})⁻¹` for
/// `Re(s) > 0`. With `|α| = 1` the factor is pole-free on that half
/// plane; the singularity guard can only fire in the `Re(s) → 0` limit.
pub fn local_l_factor(local: &SatakeLocal, s: Complex64) -> Result<Complex64, LfunError> {
    if !(s.re > 0.0) {
        return Err(LfunError::InvalidParameter {
            name: "Re(s)",
            value: s.re,
            range: "(0, ∞)",
        });
    }
    let LocalClass::Unramified { theta } = local.class else {
        return Err(LfunError::RamifiedOperand {
            prime: local.prime,
            op: "local_l_factor",
        });
    };
    let alpha = Complex64::from_polar(1.0, theta);
    let p_s = Complex64::new(local.prime as f64, 0.0).powc(-s);
    let d1 = Complex64::new(1.0, 0.0) - alpha * p_s;
    let d2 = Complex64::new(1.0, 0.0) - p_s / alpha;
    if d1.norm() < 1e-12 || d2.norm() < 1e-12 {
        return Err(LfunError::SingularFactor {
            prime: local.prime,
            s,
        });
    }
    Ok((d1 * d2).inv())
}

/// Multiplicity of an arithmetic conductor `c_arith` inside level `d`:
/// `τ₂(d / c_arith)` when `c_arith | d`, else 0.
pub fn multiplicity(c_arith: u64, d: u64) -> Result<u64, LfunError> {
    if c_arith == 0 || d == 0 {
        return Err(LfunError::InvalidParameter {
            name: "conductor/level",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    if d % c_arith != 0 {
        return Ok(0);
    }
    let mut m = d / c_arith;
    let mut tau: u64 = 1;
    let mut p: u64 = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u64;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            tau *= e + 1;
        }
        p += 1;
    }
    if m > 1 {
        tau *= 2;
    }
    Ok(tau)
}

/// A synthetic automorphic representation: conductor, root number, and
/// Satake data at every prime up to the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoRep {
    conductor: f64,
    arithmetic_conductor: u64,
    root_number: i8,
    prime_horizon: u64,
    locals: BTreeMap<u64, SatakeLocal>,
}

impl AutoRep {
    /// Validates and assembles a representation. Requirements: conductor
    /// is a finite real ≥ 1; the root number is ±1; Satake data exists
    /// for exactly the primes up to the horizon; a prime divides the
    /// arithmetic conductor exactly when its local datum is ramified.
    pub fn new(
        conductor: f64,
        arithmetic_conductor: u64,
        root_number: i8,
        prime_horizon: u64,
        locals: Vec<SatakeLocal>,
    ) -> Result<Self, LfunError> {
        if !conductor.is_finite() || conductor < 1.0 {
            return Err(LfunError::BadConductor(conductor));
        }
        if root_number != 1 && root_number != -1 {
            return Err(LfunError::BadRootNumber(root_number as i64));
        }
        if arithmetic_conductor == 0 {
            return Err(LfunError::InvalidParameter {
                name: "arithmetic_conductor",
                value: 0.0,
                range: "[1, ∞)",
            });
        }
        let mut map = BTreeMap::new();
        for local in locals {
            if local.prime() > prime_horizon {
                return Err(LfunError::LocalBeyondHorizon {
                    prime: local.prime(),
                    horizon: prime_horizon,
                });
            }
            if map.insert(local.prime(), local.clone()).is_some() {
                return Err(LfunError::DuplicateLocal {
                    prime: local.prime(),
                });
            }
        }
        for &p in sieve_primes(prime_horizon)
            .map_err(|_| LfunError::InvalidParameter {
                name: "prime_horizon",
                value: prime_horizon as f64,
                range: "within the sieve limit",
            })?
            .primes()
        {
            let Some(local) = map.get(&p) else {
                return Err(LfunError::MissingLocal { prime: p });
            };
            let divides = arithmetic_conductor % p == 0;
            match (divides, local.is_ramified()) {
                (true, false) => return Err(LfunError::ShouldBeRamified { prime: p }),
                (false, true) => return Err(LfunError::ShouldBeUnramified { prime: p }),
                _ => {}
            }
        }
        // Every prime factor of the arithmetic conductor must fall inside
        // the horizon, or the ramified set could not represent it.
        let mut m = arithmetic_conductor;
        let mut p = 2u64;
        while p * p <= m {
            if m % p == 0 {
                if p > prime_horizon {
                    return Err(LfunError::ConductorBeyondHorizon {
                        prime: p,
                        horizon: prime_horizon,
                    });
                }
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 && m > prime_horizon {
            return Err(LfunError::ConductorBeyondHorizon {
                prime: m,
                horizon: prime_horizon,
            });
        }
        Ok(Self {
            conductor,
            arithmetic_conductor,
            root_number,
            prime_horizon,
            locals: map,
        })
    }

    /// Unramified representation with the same `θ` at every prime up to
    /// the horizon; handy for exact cross-checks (e.g. `θ = π/2` kills
    /// every `P^{(1)}` term and makes `P^{(2)}` a pure Mertens sum).
    pub fn with_constant_theta(
        conductor: f64,
        prime_horizon: u64,
        theta: f64,
    ) -> Result<Self, LfunError> {
        let locals = sieve_primes(prime_horizon)
            .map_err(|_| LfunError::InvalidParameter {
                name: "prime_horizon",
                value: prime_horizon as f64,
                range: "within the sieve limit",
            })?
            .primes()
            .iter()
            .map(|&p| SatakeLocal::unramified(p, theta))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(conductor, 1, 1, prime_horizon, locals)
    }

    pub fn conductor(&self) -> f64 {
        self.conductor
    }

    pub fn arithmetic_conductor(&self) -> u64 {
        self.arithmetic_conductor
    }

    pub fn root_number(&self) -> i8 {
        self.root_number
    }

    pub fn prime_horizon(&self) -> u64 {
        self.prime_horizon
    }

    pub fn local(&self, p: u64) -> Option<&SatakeLocal> {
        self.locals.get(&p)
    }

    pub fn locals(&self) -> impl Iterator<Item = &SatakeLocal> {
        self.locals.values()
    }
}

/// Output of the explicit-formula engine: the density value, the
/// individual prime-power blocks `P^{(ν)}`, and a majorant for everything
/// past `nu_max`.
#[derive(Debug, Clone)]
pub struct EfDensityReport {
    pub value: f64,
    pub per_nu: Vec<f64>,
    pub tail_bound: f64,
}

fn sup_abs_hat(fp: &FourierPair) -> f64 {
    linspace(0.0, fp.support_radius(), 2049)
        .into_iter()
        .map(|y| fp.eval_hat(y).abs())
        .fold(0.0, f64::max)
}

/// Majorant of `Σ_{ν ≥ nu_start} |P^{(ν)}|` using `|α^ν + β^ν| ≤
/// 2·p^{7ν/64}` and `|φ̂| ≤ sup|φ̂|`: each block is
/// `(2/log c)·sup|φ̂|·Σ_{p ≤ c^{T/ν}} 2·p^{7ν/64}·log p / p^{ν/2}`.
/// The ν loop stops when the truncated prime range empties or a block
/// falls below 10⁻¹⁵.
fn tail_majorant(rep: &AutoRep, fp: &FourierPair, nu_start: u32) -> f64 {
    let log_c = rep.conductor.ln();
    if log_c <= 0.0 {
        return 0.0;
    }
    let t = fp.support_radius();
    let sup_hat = sup_abs_hat(fp);
    let mut total = KahanSum::new();
    let mut nu = nu_start.max(1);
    loop {
        let bound = (t * log_c / nu as f64).exp();
        if bound < 2.0 {
            break;
        }
        let table = sieve_primes(bound.floor() as u64).expect("tail prime bound is tiny");
        let mut block = KahanSum::new();
        for &p in table.primes() {
            let pf = p as f64;
            // p^{7ν/64 - ν/2} = p^{-25ν/64}.
            block.add(2.0 * pf.powf(-25.0 * nu as f64 / 64.0) * pf.ln());
        }
        let block = 2.0 / log_c * sup_hat * block.value();
        total.add(block);
        if block < 1e-15 {
            break;
        }
        nu += 1;
    }
    total.value()
}

/// Rigorous numeric majorant of the `ν ≥ 3` block of the explicit
/// formula. Needs Satake data only up to `c^{T_φ/3}`, and that is all the
/// horizon must cover here.
pub fn tail_estimate(rep: &AutoRep, fp: &FourierPair) -> Result<f64, LfunError> {
    let required = prime_cutoff(rep.conductor, fp.support_radius(), 3);
    if required > rep.prime_horizon {
        return Err(LfunError::InsufficientHorizon {
            required,
            available: rep.prime_horizon,
        });
    }
    Ok(tail_majorant(rep, fp, 3))
}

fn prime_cutoff(conductor: f64, t: f64, nu: u32) -> u64 {
    let bound = (t * conductor.ln() / nu as f64).exp();
    if bound < 2.0 {
        return 0;
    }
    bound.floor() as u64
}

/// One-level density of low-lying zeros through the prime side of the
/// explicit formula, truncated at `nu_max ≥ 2` prime-power layers.
///
/// `value = φ̂(0) − Σ_{ν=1}^{nu_max} P^{(ν)}` with each block summed over
/// `p ≤ c^{T_φ/ν}` by compensated accumulation in ascending prime order.
/// Ramified primes contribute 0 to the blocks (their true contribution is
/// budgeted in the tail analysis, not modeled as data). `tail_bound`
/// majorizes every discarded block `ν > nu_max`.
pub fn explicit_formula_density(
    rep: &AutoRep,
    fp: &FourierPair,
    nu_max: u32,
) -> Result<EfDensityReport, LfunError> {
    if nu_max < 2 {
        return Err(LfunError::InvalidParameter {
            name: "nu_max",
            value: nu_max as f64,
            range: "[2, ∞)",
        });
    }
    let required = prime_cutoff(rep.conductor, fp.support_radius(), 1);
    if required > rep.prime_horizon {
        return Err(LfunError::InsufficientHorizon {
            required,
            available: rep.prime_horizon,
        });
    }
    let log_c = rep.conductor.ln();
    let mut per_nu = Vec::with_capacity(nu_max as usize);
    for nu in 1..=nu_max {
        let cutoff = prime_cutoff(rep.conductor, fp.support_radius(), nu);
        if cutoff < 2 {
            per_nu.push(0.0);
            continue;
        }
        let mut block = KahanSum::new();
        for (&p, local) in rep.locals.range(..=cutoff) {
            let Some(theta) = local.theta() else {
                continue;
            };
            let pf = p as f64;
            let log_p = pf.ln();
            block.add(
                2.0 * (nu as f64 * theta).cos() * fp.eval_hat(nu as f64 * log_p / log_c)
                    * log_p
                    / pf.powf(nu as f64 / 2.0),
            );
        }
        per_nu.push(2.0 / log_c * block.value());
    }
    let mut value = KahanSum::new();
    value.add(fp.eval_hat(0.0));
    for &p_nu in &per_nu {
        value.add(-p_nu);
    }
    Ok(EfDensityReport {
        value: value.value(),
        per_nu,
        tail_bound: tail_majorant(rep, fp, nu_max + 1),
    })
}

/// A finite list of zero ordinates attached to a conductor.
#[derive(Debug, Clone, PartialEq)]
pub struct ZerosRecord {
    conductor: f64,
    ordinates: Vec<f64>,
}

impl ZerosRecord {
    pub fn new(conductor: f64, ordinates: Vec<f64>) -> Result<Self, LfunError> {
        if !conductor.is_finite() || conductor < 1.0 {
            return Err(LfunError::BadConductor(conductor));
        }
        if let Some(&bad) = ordinates.iter().find(|o| !o.is_finite()) {
            return Err(LfunError::InvalidParameter {
                name: "ordinate",
                value: bad,
                range: "finite reals",
            });
        }
        Ok(Self {
            conductor,
            ordinates,
        })
    }

    pub fn conductor(&self) -> f64 {
        self.conductor
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }
}

/// One-level density directly from a zeros list:
/// `Σ_j φ(γ_j · log c / 2π)`, the mean-spacing renormalization that
/// makes consecutive low-lying zeros roughly unit-spaced.
pub fn density_from_zeros(z: &ZerosRecord, fp: &FourierPair) -> Result<f64, LfunError> {
    if z.conductor <= 1.0 {
        return Err(LfunError::BadConductor(z.conductor));
    }
    let scale = z.conductor.ln() / (2.0 * PI);
    let mut acc = KahanSum::new();
    for &gamma in &z.ordinates {
        acc.add(fp.eval(scale * gamma));
    }
    Ok(acc.value())
}

fn parse_conductor_header(
    line: &str,
    lineno: usize,
    expect_root: bool,
) -> Result<(f64, i8), LfunError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let bad = |message: String| LfunError::Parse {
        line: lineno,
        message,
    };
    if tokens.first() != Some(&"conductor") {
        return Err(bad("expected header starting with \"conductor\"".into()));
    }
    let c: f64 = tokens
        .get(1)
        .ok_or_else(|| bad("missing conductor value".into()))?
        .parse()
        .map_err(|_| bad(format!("unparseable conductor {:?}", tokens.get(1).unwrap())))?;
    if !expect_root {
        if tokens.len() != 2 {
            return Err(bad("unexpected tokens after the conductor".into()));
        }
        return Ok((c, 1));
    }
    if tokens.get(2) != Some(&"root") {
        return Err(bad("expected \"root\" after the conductor".into()));
    }
    let root = match tokens.get(3) {
        Some(&"+1") => 1,
        Some(&"-1") => -1,
        other => {
            return Err(bad(format!(
                "root number must be +1 or -1, got {:?}",
                other.unwrap_or(&"<missing>")
            )))
        }
    };
    if tokens.len() != 4 {
        return Err(bad("unexpected tokens after the root number".into()));
    }
    Ok((c, root))
}

/// Parses the coefficients text format:
///
/// ```text
/// conductor <real> root <+1|-1>
/// <p> <theta>
/// <p> ramified
/// ```
///
/// The arithmetic conductor is the (squarefree) product of the ramified
/// primes and the horizon is the largest listed prime; every prime up to
/// that horizon must be listed. Errors carry 1-based line numbers.
pub fn parse_coefficients(text: &str) -> Result<AutoRep, LfunError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(LfunError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let (conductor, root) = parse_conductor_header(header, 1, true)?;
    let mut locals = Vec::new();
    let mut q: u64 = 1;
    let mut horizon: u64 = 1;
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| LfunError::Parse {
            line: lineno,
            message,
        };
        let mut tokens = line.split_whitespace();
        let p_tok = tokens.next().expect("non-empty line has a token");
        let p: u64 = p_tok
            .parse()
            .map_err(|_| bad(format!("unparseable prime {p_tok:?}")))?;
        let rest = tokens.next().ok_or_else(|| bad("missing theta or \"ramified\"".into()))?;
        if tokens.next().is_some() {
            return Err(bad("unexpected trailing tokens".into()));
        }
        let local = if rest == "ramified" {
            q = q.checked_mul(p).ok_or(LfunError::ConductorOverflow)?;
            SatakeLocal::ramified(p)
        } else {
            let theta: f64 = rest
                .parse()
                .map_err(|_| bad(format!("unparseable theta {rest:?}")))?;
            SatakeLocal::unramified(p, theta)
        }
        .map_err(|e| bad(e.to_string()))?;
        horizon = horizon.max(p);
        locals.push(local);
    }
    AutoRep::new(conductor, q, root, horizon, locals)
}

/// Serializes a representation in the coefficients format; parsing the
/// output reproduces the representation bit for bit (floats are printed
/// in shortest round-trip form). The format records the horizon only
/// implicitly as the largest listed prime, so a horizon strictly between
/// two primes is restored as the largest prime at or below it; everything
/// the prime sums can observe is identical either way.
pub fn dump_coefficients(rep: &AutoRep) -> String {
    let mut out = String::new();
    let root = if rep.root_number >= 0 { "+1" } else { "-1" };
    let _ = writeln!(out, "conductor {} root {}", rep.conductor, root);
    for (p, local) in &rep.locals {
        match local.theta() {
            Some(theta) => {
                let _ = writeln!(out, "{p} {theta}");
            }
            None => {
                let _ = writeln!(out, "{p} ramified");
            }
        }
    }
    out
}

/// Parses the zeros text format: `conductor <real>` then one real
/// ordinate per line. Complex-looking or multi-token ordinates are
/// rejected with their line number.
pub fn parse_zeros(text: &str) -> Result<ZerosRecord, LfunError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(LfunError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let (conductor, _) = parse_conductor_header(header, 1, false)?;
    let mut ordinates = Vec::new();
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| LfunError::Parse {
            line: lineno,
            message,
        };
        if line.split_whitespace().count() != 1 {
            return Err(bad("expected exactly one ordinate per line".into()));
        }
        let gamma: f64 = line
            .parse()
            .map_err(|_| bad(format!("unparseable real ordinate {line:?}")))?;
        if !gamma.is_finite() {
            return Err(bad(format!("non-finite ordinate {line:?}")));
        }
        ordinates.push(gamma);
    }
    ZerosRecord::new(conductor, ordinates)
}

/// Serializes a zeros record; round-trips bit-exactly through
/// [`parse_zeros`].
pub fn dump_zeros(z: &ZerosRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "conductor {}", z.conductor);
    for gamma in &z.ordinates {
        let _ = writeln!(out, "{gamma}");
    }
    out
}
