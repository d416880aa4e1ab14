//! Integral quadratic lattices: hyperbolicity, discriminant forms and the
//! enumeration of classes with bounded square and genus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    dot_rational, floor_sqrt, rat, smith_normal_form, IntSymMatrix, RatMatrix, Rational,
};

/// Non-degenerate integral lattice given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntSymMatrix,
    basis_names: Vec<String>,
}

/// Integer coordinates in a lattice basis.
pub type LatticeVector = Vec<BigInt>;

impl Lattice {
    pub fn new(gram: IntSymMatrix, basis_names: Vec<String>) -> Result<Self> {
        if basis_names.len() != gram.dim() {
            return Err(Error::input(
                "basis_names",
                format!("{} names for rank {}", basis_names.len(), gram.dim()),
            ));
        }
        if gram.det().is_zero() {
            return Err(Error::input("gram", "lattice is degenerate (det = 0)"));
        }
        Ok(Self { gram, basis_names })
    }

    /// Lattice with generated basis names `e1, e2, ...`.
    pub fn from_gram(gram: IntSymMatrix) -> Result<Self> {
        let names = (1..=gram.dim()).map(|i| format!("e{i}")).collect();
        Self::new(gram, names)
    }

    pub fn gram(&self) -> &IntSymMatrix {
        &self.gram
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn rank(&self) -> usize {
        self.gram.dim()
    }

    pub fn is_even(&self) -> bool {
        self.gram.diagonal_entries().iter().all(|d| d % 2 == 0)
    }

    /// True iff the signature is `(1, rank - 1)`.
    pub fn is_hyperbolic(&self) -> bool {
        let s = self.gram.signature();
        s.n_plus == 1 && s.n_zero == 0
    }
}

/// Discriminant group `L*/L` with its finite quadratic form.
///
/// Generator `i` has order `invariant_factors[i]`; `q_values[i]` is its
/// quadratic value reduced into `[0, 2)` and `b_values[i][j]` the bilinear
/// value reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantGroup {
    #[serde(serialize_with = "crate::report::ser_bigints")]
    pub invariant_factors: Vec<BigInt>,
    #[serde(serialize_with = "crate::report::ser_rational_rows")]
    pub generator_lifts: Vec<Vec<Rational>>,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub q_values: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational_rows")]
    pub b_values: Vec<Vec<Rational>>,
}

/// Reduces `x` into `[0, m)`.
pub fn reduce_mod(x: &Rational, m: i64) -> Rational {
    let m = rat(m);
    let k = (x / &m).floor();
    x - k * m
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// `q` of the element with coefficients `c` on the generators, in `[0, 2)`.
    pub fn q(&self, c: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..c.len() {
            if c[i] == 0 {
                continue;
            }
            acc += &self.q_values[i] * rat(c[i] * c[i]);
            for j in (i + 1)..c.len() {
                acc += &self.b_values[i][j] * rat(2 * c[i] * c[j]);
            }
        }
        reduce_mod(&acc, 2)
    }

    /// Bilinear value of two elements, in `[0, 1)`.
    pub fn b(&self, x: &[i64], y: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                if x[i] != 0 && y[j] != 0 {
                    acc += &self.b_values[i][j] * rat(x[i] * y[j]);
                }
            }
        }
        reduce_mod(&acc, 1)
    }

    pub fn factors_u64(&self) -> Option<Vec<u64>> {
        self.invariant_factors.iter().map(|f| f.to_u64()).collect()
    }
}

/// Discriminant group of an even lattice, read off the Smith normal form of
/// the Gram matrix.
pub fn discriminant_group_and_form(l: &Lattice) -> Result<DiscriminantGroup> {
    if !l.is_even() {
        return Err(Error::UnsupportedPrecondition(
            "discriminant forms are only supported for even lattices".into(),
        ));
    }
    let g = l.gram();
    let snf = smith_normal_form(&g.to_int_matrix());
    let n = g.dim();
    // L* = { V S^-1 w }: the columns of V scaled by 1/d_i generate L*/L.
    let mut factors = Vec::new();
    let mut lifts = Vec::new();
    for (i, d) in snf.invariant_factors().into_iter().enumerate() {
        let d = d.abs();
        if d.is_one() {
            continue;
        }
        let col = snf.v.column(i);
        lifts.push(
            col.into_iter()
                .map(|x| Rational::new(x, d.clone()))
                .collect::<Vec<_>>(),
        );
        factors.push(d);
    }
    let k = lifts.len();
    let mut q_values = Vec::with_capacity(k);
    let mut b_values = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        let gi = g.apply_rational(&lifts[i]);
        q_values.push(reduce_mod(&dot_rational(&lifts[i], &gi), 2));
        for j in 0..k {
            b_values[j][i] = reduce_mod(&dot_rational(&lifts[j], &gi), 1);
        }
    }
    debug_assert_eq!(lifts.iter().map(|l| l.len()).max().unwrap_or(n), n);
    Ok(DiscriminantGroup {
        invariant_factors: factors,
        generator_lifts: lifts,
        q_values,
        b_values,
    })
}

/// Positive definite form `P(e) = 2 (e.K)^2 / K^2 - e.e` used to bound the
/// search; it is positive definite exactly when `K^2 > 0` and `K^⊥` is
/// negative definite.
pub fn bounding_form(l: &Lattice, k: &[Rational]) -> Result<(RatMatrix, Vec<Rational>, Rational)> {
    let g = l.gram();
    let functional = g.apply_rational(k);
    let k2 = dot_rational(k, &functional);
    if !k2.is_positive() {
        return Err(Error::UnsupportedPrecondition(format!(
            "K.K = {k2} <= 0; the set of bounded classes may be infinite"
        )));
    }
    let n = g.dim();
    let two = rat(2);
    let p = RatMatrix::from_fn(n, n, |i, j| {
        &two * &functional[i] * &functional[j] / &k2 - rat(g.get(i, j))
    });
    Ok((p, functional, k2))
}

/// All integer vectors `x` with `xᵀ P x <= bound`, for positive definite
/// rational `P`, by exact Fincke-Pohst enumeration.
pub fn short_vectors(p: &RatMatrix, bound: &Rational) -> Result<Vec<Vec<BigInt>>> {
    let n = p.rows();
    // q[i][i] and q[i][j] (j > i) of the completed-square decomposition
    let mut q: Vec<Vec<Rational>> = (0..n).map(|i| p.row(i).to_vec()).collect();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(Error::UnsupportedPrecondition(
                "bounding form is not positive definite (lattice is not hyperbolic?)".into(),
            ));
        }
        for j in (i + 1)..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in (i + 1)..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    if n > 0 {
        fp_recurse(&q, n - 1, bound.clone(), &mut x, &mut out);
    }
    Ok(out)
}

fn fp_recurse(
    q: &[Vec<Rational>],
    i: usize,
    remaining: Rational,
    x: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    let n = q.len();
    let center: Rational = -((i + 1)..n).fold(Rational::zero(), |acc, j| {
        acc + &q[i][j] * Rational::from_integer(x[j].clone())
    });
    let radius2 = &remaining / &q[i][i];
    let r = floor_sqrt(&radius2);
    let lo: BigInt = center.floor().to_integer() - &r - 1;
    let hi: BigInt = center.ceil().to_integer() + &r + 1;
    let mut xi = lo;
    while xi <= hi {
        let dev = Rational::from_integer(xi.clone()) - &center;
        let used = &q[i][i] * &dev * &dev;
        if used <= remaining {
            x[i] = xi.clone();
            let rest = &remaining - used;
            if i == 0 {
                out.push(x.clone());
            } else {
                fp_recurse(q, i - 1, rest, x, out);
            }
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
}

/// Arithmetic genus `(e.e + e.K)/2 + 1` when it is an integer.
fn integral_genus(e2: &Rational, ek: &Rational) -> Option<BigInt> {
    let s = e2 + ek;
    if !s.is_integer() || !s.to_integer().is_even() {
        return None;
    }
    Some(s.to_integer() / 2 + 1)
}

/// Vectors `e` with `-delta <= e.e < 0` and integral arithmetic genus
/// `(e.e + e.K)/2 + 1` in `[0, p_max]`, sorted lexicographically.
///
/// `k` is given in lattice coordinates and may be rational (a canonical class
/// solved from adjunction need not be integral in the curve basis).
pub fn enumerate_bounded_classes(
    l: &Lattice,
    k: &[Rational],
    delta: u64,
    p_max: u64,
) -> Result<Vec<LatticeVector>> {
    if k.len() != l.rank() {
        return Err(Error::input("K", format!("length {} for rank {}", k.len(), l.rank())));
    }
    if delta == 0 {
        return Err(Error::input("delta", "must be positive"));
    }
    let (p, functional, k2) = bounding_form(l, k)?;
    // e.K = 2 p_a - 2 - e.e over the window
    let mut bound = Rational::zero();
    for s in 1..=delta as i64 {
        for pa in 0..=p_max as i64 {
            let t = rat(2 * pa - 2 + s);
            let v = rat(2) * &t * &t / &k2 + rat(s);
            if v > bound {
                bound = v;
            }
        }
    }
    let g = l.gram();
    let mut out: Vec<LatticeVector> = short_vectors(&p, &bound)?
        .into_iter()
        .filter(|e| {
            let e2 = g.bilinear(e, e);
            if !e2.is_negative() || e2 < BigInt::from(-(delta as i64)) {
                return false;
            }
            let eq: Vec<Rational> = e.iter().map(|x| Rational::from_integer(x.clone())).collect();
            let ek = dot_rational(&eq, &functional);
            match integral_genus(&Rational::from_integer(e2), &ek) {
                Some(pa) => !pa.is_negative() && pa <= BigInt::from(p_max),
                None => false,
            }
        })
        .collect();
    out.sort();
    Ok(out)
}
