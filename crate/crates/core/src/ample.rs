//! Ample divisors from the Perron-Frobenius vector, Reider classes, and the
//! enumeration of admissible Gram matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::config::{connected_components, CurveConfiguration, Divisor, PAIR_BOUND_SQUARED};
use crate::error::{Error, Result};
use crate::linalg::{dot, primitive, rat, IntSymMatrix, Rational};

/// Rational enclosure of the top eigenvalue of a symmetric matrix with
/// non-negative off-diagonal entries, and a positive approximate eigenvector.
#[derive(Debug, Clone, Serialize)]
pub struct PFResult {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub lambda_lo: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub lambda_hi: Rational,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub vector: Vec<Rational>,
    pub shift_used: i64,
}

impl PFResult {
    pub fn width(&self) -> Rational {
        &self.lambda_hi - &self.lambda_lo
    }

    pub fn lambda_f64(&self) -> f64 {
        ((&self.lambda_lo + &self.lambda_hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }
}

fn check_pf_input(g: &IntSymMatrix) -> Result<()> {
    let n = g.dim();
    for i in 0..n {
        for j in 0..n {
            if i != j && g.get(i, j) < 0 {
                return Err(Error::PreconditionViolation(format!(
                    "off-diagonal entry [{i}][{j}] = {} is negative",
                    g.get(i, j)
                )));
            }
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let comps = connected_components(g, &all);
    if comps.len() > 1 {
        return Err(Error::PreconditionViolation(format!(
            "matrix is decomposable into {} blocks",
            comps.len()
        )));
    }
    Ok(())
}

/// Rounds to a dyadic rational with `bits` fractional bits, never below
/// `2^-bits`.
fn dyadic(x: f64, bits: u32) -> Rational {
    let exact = Rational::from_float(x).unwrap_or_else(Rational::one);
    rational_dyadic(&exact, bits)
}

fn rational_dyadic(x: &Rational, bits: u32) -> Rational {
    let scaled = x * Rational::from_integer(BigInt::one() << bits);
    let m = scaled.round().to_integer().max(BigInt::one());
    Rational::new(m, BigInt::one() << bits)
}

const PF_MAX_ITERATIONS: usize = 100_000;

fn shifted(g: &IntSymMatrix) -> (IntSymMatrix, i64) {
    let n = g.dim();
    let shift = g.diagonal_entries().iter().map(|&d| -d).max().unwrap_or(0).max(0) + 1;
    (IntSymMatrix::from_fn(n, |i, j| g.get(i, j) + if i == j { shift } else { 0 }), shift)
}

/// Float power iteration on a non-negative matrix, normalized to max 1.
fn pf_float(m: &IntSymMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut v = vec![1.0f64; n];
    for _ in 0..10_000 {
        let mut w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j) as f64 * v[j]).sum())
            .collect();
        let top = w.iter().cloned().fold(0.0, f64::max);
        w.iter_mut().for_each(|x| *x /= top);
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if delta < 1e-16 {
            break;
        }
    }
    v
}

/// Power iteration on `G + s I` with `s = max(-diag) + 1`. The float phase
/// finds the direction; exact Collatz-Wielandt ratios `min (Mx)_i / x_i` and
/// `max (Mx)_i / x_i` bound the top eigenvalue for any positive `x`.
pub fn pf_eigen(g: &IntSymMatrix, precision: &Rational) -> Result<PFResult> {
    check_pf_input(g)?;
    if !precision.is_positive() {
        return Err(Error::input("precision", "must be positive"));
    }
    let (m, shift) = shifted(g);
    let v = pf_float(&m);

    let need = precision.recip().to_f64().unwrap_or(f64::MAX).log2().ceil().max(0.0) as u32;
    let mut bits = (need + 16).max(64);
    let mut x: Vec<Rational> = v.iter().map(|&t| dyadic(t, bits)).collect();
    let mr = m.to_rational();
    for it in 0..PF_MAX_ITERATIONS {
        let y = mr.mul_vec(&x);
        let ratios: Vec<Rational> = y.iter().zip(&x).map(|(a, b)| a / b).collect();
        let lo = ratios.iter().min().unwrap().clone();
        let hi = ratios.iter().max().unwrap().clone();
        if &hi - &lo < *precision {
            let s = rat(shift);
            return Ok(PFResult {
                lambda_lo: lo - &s,
                lambda_hi: hi - &s,
                vector: x,
                shift_used: shift,
            });
        }
        if it % 64 == 63 {
            bits += 32;
        }
        let top = y.iter().max().unwrap().clone();
        x = y.iter().map(|t| rational_dyadic(&(t / &top), bits)).collect();
    }
    Err(Error::PreconditionViolation(
        "power iteration did not reach the requested precision".into(),
    ))
}

/// A verified ample class `h = sum a_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmpleCertificate {
    #[serde(serialize_with = "crate::report::ser_bigints")]
    pub a: Vec<BigInt>,
    /// `Gamma a`, i.e. `h.E_i`.
    #[serde(serialize_with = "crate::report::ser_bigints")]
    pub products: Vec<BigInt>,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub square: BigInt,
    pub method: String,
}

impl AmpleCertificate {
    /// Checks `a > 0`, `Gamma a > 0` and `a Gamma a > 0` exactly; `None` if
    /// any fails.
    pub fn certify(g: &IntSymMatrix, a: Vec<BigInt>, method: &str) -> Option<Self> {
        if a.len() != g.dim() || a.iter().any(|x| !x.is_positive()) {
            return None;
        }
        let products = g.apply(&a);
        if products.iter().any(|x| !x.is_positive()) {
            return None;
        }
        let square = dot(&a, &products);
        if !square.is_positive() {
            return None;
        }
        Some(Self {
            a,
            products,
            square,
            method: method.to_string(),
        })
    }

    /// Re-runs every check against `g`.
    pub fn verify(&self, g: &IntSymMatrix) -> bool {
        Self::certify(g, self.a.clone(), &self.method).is_some_and(|c| c == *self)
    }

    pub fn divisor(&self) -> Divisor {
        Divisor::new(self.a.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }
}

fn check_ample_input(g: &IntSymMatrix) -> Result<()> {
    check_pf_input(g)?;
    let sig = g.signature();
    if sig.n_plus != 1 {
        return Err(Error::UnsupportedPrecondition(format!(
            "signature {sig} is not hyperbolic"
        )));
    }
    Ok(())
}

/// Rounds the Perron-Frobenius vector (scaled to minimum entry 1) at
/// denominators `10, 100, ...` until the cleared integer vector certifies.
pub fn make_ample(g: &IntSymMatrix) -> Result<AmpleCertificate> {
    check_ample_input(g)?;
    // the float vector is usually good enough; only its rounding is trusted
    let (m, _) = shifted(g);
    let v = pf_float(&m);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        for k in 1..=12 {
            let scale = 10f64.powi(k);
            let a = primitive(v.iter().map(|x| BigInt::from((x / min * scale).round() as i64)).collect());
            if let Some(cert) = AmpleCertificate::certify(g, a, "pf-rounding") {
                return Ok(cert);
            }
        }
    }
    for digits in [12u32, 40, 120] {
        let pf = pf_eigen(g, &Rational::new(BigInt::one(), BigInt::from(10).pow(digits)))?;
        let min = pf.vector.iter().min().unwrap().clone();
        let v: Vec<Rational> = pf.vector.iter().map(|x| x / &min).collect();
        for k in 1..=digits {
            let scale = Rational::from_integer(BigInt::from(10).pow(k));
            let a = primitive(v.iter().map(|x| (x * &scale).round().to_integer()).collect());
            if let Some(cert) = AmpleCertificate::certify(g, a, "pf-rounding") {
                return Ok(cert);
            }
        }
    }
    Err(Error::PreconditionViolation(
        "no rounding of the Perron-Frobenius vector certified".into(),
    ))
}

const MINIMAL_SEARCH_LIMIT: u64 = 200_000_000;

/// Exhaustive search for the certificate with the smallest `h.h` (ties broken
/// lexicographically on `a`). Since every `h.E_i >= 1`,
/// `h.h = sum a_i (Gamma a)_i >= sum a_i`, so only `a` with entry sum at most
/// the best square found so far matter. With `a_1..a_{n-1}` fixed the
/// constraints cut out an interval for `a_n`, and `h.h` is concave in `a_n`
/// (or increasing when `Gamma_nn >= 0`), so only the two endpoints are tried.
///
/// The walk runs under a cap that doubles from `4n` up to the square of the
/// rounding certificate; the first round that finds anything is exhaustive.
pub fn make_ample_minimal(g: &IntSymMatrix) -> Result<AmpleCertificate> {
    let start = make_ample(g)?;
    let Some(start_sq) = start.square.to_i128() else {
        return Err(Error::ResourceGuard(format!(
            "starting certificate has h.h = {}, too large for exhaustive search",
            start.square
        )));
    };
    let n = g.dim();
    let gm: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| g.get(i, j) as i128).collect()).collect();
    let mut cap = 4 * n as i128;
    let mut visited = 0u64;
    let best = loop {
        let last_round = cap >= start_sq;
        let mut search = MinimalSearch {
            g: gm.clone(),
            bound: cap.min(start_sq),
            best: None,
            visited,
        };
        if last_round {
            search.best = start.a.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>();
        }
        search.walk(&mut Vec::with_capacity(n), 0)?;
        visited = search.visited;
        if let Some(a) = search.best {
            break a;
        }
        cap *= 2;
    };
    let a: Vec<BigInt> = best.iter().map(|&x| BigInt::from(x)).collect();
    AmpleCertificate::certify(g, a, "minimal")
        .ok_or_else(|| Error::PreconditionViolation("minimal candidate failed verification".into()))
}

struct MinimalSearch {
    g: Vec<Vec<i128>>,
    /// Square of `best`, or the cap while nothing is found.
    bound: i128,
    best: Option<Vec<i128>>,
    visited: u64,
}

impl MinimalSearch {
    fn offer(&mut self, a: &[i128], sq: i128) {
        let better = match &self.best {
            _ if sq <= 0 || sq > self.bound => false,
            None => true,
            Some(b) => sq < self.bound || a < &b[..],
        };
        if better {
            self.bound = sq;
            self.best = Some(a.to_vec());
        }
    }

    fn walk(&mut self, prefix: &mut Vec<i128>, sum: i128) -> Result<()> {
        let n = self.g.len();
        let last = n - 1;
        if prefix.len() == last {
            self.visited += 1;
            if self.visited > MINIMAL_SEARCH_LIMIT {
                return Err(Error::ResourceGuard(format!(
                    "minimal search exceeded {MINIMAL_SEARCH_LIMIT} candidates"
                )));
            }
            // base_j = (Gamma a)_j without the a_n term
            let base: Vec<i128> = (0..n)
                .map(|j| (0..last).map(|k| self.g[j][k] * prefix[k]).sum())
                .collect();
            let mut lo = 1i128;
            let mut hi = self.bound - sum;
            for j in 0..last {
                let c = self.g[j][last];
                if c > 0 {
                    lo = lo.max(ceil_div(1 - base[j], c));
                } else if base[j] < 1 {
                    return Ok(());
                }
            }
            let d = self.g[last][last];
            if d < 0 {
                hi = hi.min((base[last] - 1).div_euclid(-d));
            } else if d > 0 {
                lo = lo.max(ceil_div(1 - base[last], d));
            } else if base[last] < 1 {
                return Ok(());
            }
            if lo > hi {
                return Ok(());
            }
            for t in [lo, hi] {
                prefix.push(t);
                let sq: i128 = (0..n)
                    .map(|j| prefix[j] * (0..n).map(|k| self.g[j][k] * prefix[k]).sum::<i128>())
                    .sum();
                let a = prefix.clone();
                self.offer(&a, sq);
                prefix.pop();
            }
            return Ok(());
        }
        let remaining = (last - prefix.len()) as i128;
        let mut x = 1i128;
        // the other entries are at least 1 each
        while sum + x + remaining <= self.bound {
            prefix.push(x);
            let r = self.walk(prefix, sum + x);
            prefix.pop();
            r?;
            x += 1;
        }
        Ok(())
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

/// `h' = K + 4h` with its square and its products with the curves.
#[derive(Debug, Clone, Serialize)]
pub struct ReiderClass {
    pub divisor: Divisor,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub square: Rational,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub products: Vec<Rational>,
    pub note: &'static str,
}

pub fn reider_class(config: &CurveConfiguration, cert: &AmpleCertificate) -> Result<ReiderClass> {
    if cert.a.len() != config.len() {
        return Err(Error::input("a", "certificate length differs from the curve count"));
    }
    let k = config.canonical_class()?;
    let divisor = k.divisor.add(&cert.divisor().scaled(&rat(4)));
    let products = config.products(&divisor);
    let square = config.intersect(&divisor, &divisor);
    Ok(ReiderClass {
        divisor,
        square,
        products,
        note: "very ampleness of K + 4h follows from Reider's theorem in characteristic 0",
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerateOptions {
    /// Upper bound on every off-diagonal entry, on top of the pairwise bound.
    pub max_offdiag: Option<i64>,
}

const ENUMERATION_LIMIT: f64 = 2.0e8;
const MAX_RHO: usize = 6;

fn pair_bound(di: i64, dj: i64) -> i64 {
    // largest c with 4 c^2 < 3844 |di dj|
    let rhs = PAIR_BOUND_SQUARED * di.abs() * dj.abs();
    let mut c = ((rhs as f64) / 4.0).sqrt() as i64 + 1;
    while 4 * c * c >= rhs {
        c -= 1;
    }
    c
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Sort key `(-diag..., upper triangle row-major...)`; the canonical form
/// of a matrix is the simultaneous permutation minimizing it.
pub fn canonical_key(m: &IntSymMatrix) -> Vec<i64> {
    let n = m.dim();
    let mut k: Vec<i64> = (0..n).map(|i| -m.get(i, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            k.push(m.get(i, j));
        }
    }
    k
}

pub fn canonical_form(m: &IntSymMatrix) -> IntSymMatrix {
    permutations(m.dim())
        .into_iter()
        .map(|p| m.permuted(&p))
        .min_by_key(canonical_key)
        .expect("at least one permutation")
}

fn is_admissible_shape(m: &IntSymMatrix) -> bool {
    let all: Vec<usize> = (0..m.dim()).collect();
    if connected_components(m, &all).len() != 1 {
        return false;
    }
    let s = m.signature();
    s.n_plus == 1 && s.n_zero == 0
}

/// All admissible Gram matrices up to simultaneous permutation, as canonical
/// representatives in increasing key order: diagonal in `[-delta, -1]`,
/// off-diagonal `c >= 0` with `4 c^2 < 3844 g_ii g_jj`, connected, and of
/// signature `(1, rho - 1)`.
pub fn enumerate_gram(rho: usize, delta: u64, opts: EnumerateOptions) -> Result<Vec<IntSymMatrix>> {
    if rho < 2 {
        return Err(Error::input("rho", "must be at least 2"));
    }
    if delta == 0 {
        return Err(Error::input("delta", "must be positive"));
    }
    if rho > MAX_RHO {
        return Err(Error::ResourceGuard(format!(
            "rho = {rho} exceeds the brute-force canonical form limit {MAX_RHO}"
        )));
    }
    let delta = delta as i64;
    let cap = |b: i64| opts.max_offdiag.map_or(b, |m| b.min(m.max(-1)));
    let estimate = (pair_bound(delta, delta) + 1) as f64;
    let pairs = rho * (rho - 1) / 2;
    let est_total = cap_estimate(estimate, opts.max_offdiag).powi(pairs as i32)
        * (delta as f64).powi(rho as i32);
    if est_total > ENUMERATION_LIMIT {
        return Err(Error::ResourceGuard(format!(
            "about {est_total:.2e} candidate matrices; use --max-offdiag or a smaller rho/delta"
        )));
    }

    let perms = permutations(rho);
    let mut out: Vec<(Vec<i64>, IntSymMatrix)> = Vec::new();
    let mut diag = vec![-1i64; rho];
    loop {
        // diag non-increasing: d_0 >= d_1 >= ...
        let stabilizer: Vec<&Vec<usize>> = perms
            .iter()
            .filter(|p| p.iter().enumerate().all(|(i, &j)| diag[i] == diag[j]))
            .collect();
        let idx: Vec<(usize, usize)> = (0..rho)
            .flat_map(|i| ((i + 1)..rho).map(move |j| (i, j)))
            .collect();
        let bounds: Vec<i64> = idx
            .iter()
            .map(|&(i, j)| {
                let b = cap(pair_bound(diag[i], diag[j]));
                debug_assert!(b < 31 * delta);
                b
            })
            .collect();
        if bounds.iter().all(|&b| b >= 0) {
            let mut off = vec![0i64; idx.len()];
            loop {
                let mut rows = vec![vec![0i64; rho]; rho];
                for i in 0..rho {
                    rows[i][i] = diag[i];
                }
                for (k, &(i, j)) in idx.iter().enumerate() {
                    rows[i][j] = off[k];
                    rows[j][i] = off[k];
                }
                let canonical = stabilizer.iter().all(|p| {
                    let permuted: Vec<i64> = idx.iter().map(|&(i, j)| rows[p[i]][p[j]]).collect();
                    off <= permuted
                });
                if canonical {
                    let m = IntSymMatrix::from_fn(rho, |i, j| rows[i][j]);
                    if is_admissible_shape(&m) {
                        out.push((canonical_key(&m), m));
                    }
                }
                // odometer
                let mut k = idx.len();
                let mut advanced = false;
                while k > 0 {
                    k -= 1;
                    if off[k] < bounds[k] {
                        off[k] += 1;
                        off[k + 1..].iter_mut().for_each(|x| *x = 0);
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
        }
        if !next_diagonal(&mut diag, delta) {
            break;
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, m)| m).collect())
}

fn cap_estimate(bound: f64, cap: Option<i64>) -> f64 {
    match cap {
        Some(c) => bound.min((c.max(-1) + 1) as f64),
        None => bound,
    }
}

/// Next non-increasing tuple with entries in `[-delta, -1]`, in the order
/// that makes `-diag` lexicographically increasing.
fn next_diagonal(d: &mut [i64], delta: i64) -> bool {
    let n = d.len();
    let mut i = n;
    while i > 0 {
        i -= 1;
        if d[i] > -delta {
            d[i] -= 1;
            // the largest suffix still sorted below d[i]
            let v = d[i];
            d[i + 1..].iter_mut().for_each(|x| *x = v);
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationSummary {
    pub rho: usize,
    pub delta_e: u64,
    pub count: usize,
    /// Largest minimal `h.h` over the enumerated matrices.
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub n_effective: BigInt,
    pub n_effective_witness: Vec<Vec<i64>>,
    pub p_e: Option<u64>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub n_prime_effective: Option<Rational>,
    pub n_prime_witness: Option<(Vec<Vec<i64>>, Vec<u64>)>,
    /// Number of (matrix, genus assignment) pairs skipped because
    /// adjunction had no solution.
    pub skipped_assignments: usize,
    pub lambda_positive: bool,
}

fn genus_assignments(rho: usize, p_e: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut g = vec![0u64; rho];
    loop {
        if g.contains(&p_e) {
            out.push(g.clone());
        }
        let mut k = rho;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if g[k] < p_e {
                g[k] += 1;
                g[k + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// `N(rho, delta)` and optionally `N'(rho, delta, p_E)` over the enumerated
/// family, using minimal certificates.
pub fn effective_bounds(
    rho: usize,
    delta: u64,
    p_e: Option<u64>,
    opts: EnumerateOptions,
) -> Result<EnumerationSummary> {
    let mats = enumerate_gram(rho, delta, opts)?;
    let tiny = Rational::new(BigInt::one(), BigInt::from(10u64).pow(12));
    let mut n_eff = BigInt::zero();
    let mut witness = Vec::new();
    let mut n_prime: Option<Rational> = None;
    let mut n_prime_witness = None;
    let mut skipped = 0;
    let mut lambda_positive = true;
    let names: Vec<String> = (1..=rho).map(|i| format!("E{i}")).collect();
    for m in &mats {
        let pf = pf_eigen(m, &tiny)?;
        lambda_positive &= pf.lambda_lo.is_positive();
        let cert = make_ample_minimal(m)?;
        if cert.square > n_eff {
            n_eff = cert.square.clone();
            witness = m.rows();
        }
        let Some(p) = p_e else { continue };
        if !m.diagonal_entries().contains(&-(delta as i64)) {
            continue;
        }
        for genera in genus_assignments(rho, p) {
            let cfg = CurveConfiguration::new(
                "enum",
                names.iter().cloned().zip(genera.iter().copied()).collect(),
                m.rows(),
                None,
            )?;
            let rc = match reider_class(&cfg, &cert) {
                Ok(r) => r,
                Err(Error::AdjunctionInconsistent(_)) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if n_prime.as_ref().is_none_or(|b| rc.square > *b) {
                n_prime = Some(rc.square.clone());
                n_prime_witness = Some((m.rows(), genera.clone()));
            }
        }
    }
    Ok(EnumerationSummary {
        rho,
        delta_e: delta,
        count: mats.len(),
        n_effective: n_eff,
        n_effective_witness: witness,
        p_e,
        n_prime_effective: n_prime,
        n_prime_witness,
        skipped_assignments: skipped,
        lambda_positive,
    })
}
