//! Curve configurations: named curve classes with their intersection matrix
//! and arithmetic genera, together with the invariants, canonical class and
//! subset conditions derived from them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    dot_rational, independent_rows, rat, solve_linear, IntSymMatrix, Rational, Signature,
    Solution,
};

/// One curve of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    pub name: String,
    pub self_int: i64,
    pub genus: u64,
}

/// Curves with pairwise intersections. The diagonal of `gram` carries the
/// self-intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveConfiguration {
    name: String,
    curves: Vec<CurveClass>,
    gram: IntSymMatrix,
    ambient_rank: Option<usize>,
}

/// `(rho, delta_E, p_E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantTriple {
    pub rho: usize,
    pub delta_e: u64,
    pub p_e: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVertex {
    pub name: String,
    pub self_int: i64,
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: i64,
}

/// Dual graph: one vertex per curve, an edge wherever two curves meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    pub components: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub invariants: InvariantTriple,
    pub signature: Signature,
    pub graph: DualGraph,
    pub warnings: Vec<String>,
}

/// Rational combination of the configuration's curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divisor {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub coeffs: Vec<Rational>,
}

impl Divisor {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, f: &Rational) -> Divisor {
        Divisor::new(self.coeffs.iter().map(|c| c * f).collect())
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }
}

/// Canonical class solved from adjunction.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalClass {
    /// Coefficients over the curve list; curves outside `basis` carry zero.
    pub divisor: Divisor,
    pub basis: Vec<usize>,
    /// `K.E_i` for every curve.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub products: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub square: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisorCheck {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub square: Rational,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub products: Vec<Rational>,
    pub nef_on_listed: bool,
}

/// A subset of curves meeting the three selection conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningSubset {
    pub indices: Vec<usize>,
    /// Maximum over pairs of `4 (E_i.E_j)^2 / (E_i^2 E_j^2)`, the square of
    /// `2 (E_i.E_j) / sqrt(E_i^2 E_j^2)`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub max_ratio_squared: Rational,
}

impl SpanningSubset {
    pub fn max_ratio(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.max_ratio_squared.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// `62^2`, the squared bound on `2 (E_i.E_j) / sqrt(E_i^2 E_j^2)`.
pub const PAIR_BOUND_SQUARED: i64 = 3844;

const SUBSET_SEARCH_LIMIT: u128 = 5_000_000;

impl CurveConfiguration {
    /// Builds and structurally validates a configuration.
    pub fn new(
        name: impl Into<String>,
        curves: Vec<(String, u64)>,
        gram: Vec<Vec<i64>>,
        ambient_rank: Option<usize>,
    ) -> Result<Self> {
        if curves.is_empty() {
            return Err(Error::input("curves", "curve list is empty"));
        }
        if gram.len() != curves.len() {
            return Err(Error::input(
                "gram",
                format!("{} rows for {} curves", gram.len(), curves.len()),
            ));
        }
        let gram = IntSymMatrix::new(gram)?;
        let mut seen = BTreeSet::new();
        for (i, (name, _)) in curves.iter().enumerate() {
            if !seen.insert(name.clone()) {
                return Err(Error::input(
                    format!("curves[{i}].name"),
                    format!("duplicate curve name `{name}`"),
                ));
            }
        }
        for i in 0..gram.dim() {
            for j in 0..gram.dim() {
                if i != j && gram.get(i, j) < 0 {
                    return Err(Error::input(
                        format!("gram[{i}][{j}]"),
                        format!(
                            "distinct curves meet non-negatively, got {}",
                            gram.get(i, j)
                        ),
                    ));
                }
            }
        }
        if let Some(r) = ambient_rank {
            if r < gram.rank() {
                return Err(Error::input(
                    "ambient_rank",
                    format!("ambient rank {r} below the span rank {}", gram.rank()),
                ));
            }
        }
        let curves = curves
            .into_iter()
            .enumerate()
            .map(|(i, (name, genus))| CurveClass {
                name,
                self_int: gram.get(i, i),
                genus,
            })
            .collect();
        Ok(Self {
            name: name.into(),
            curves,
            gram,
            ambient_rank,
        })
    }

    /// Builds from explicit curve classes, checking the declared
    /// self-intersections against the diagonal.
    pub fn from_curves(
        name: impl Into<String>,
        curves: Vec<CurveClass>,
        gram: Vec<Vec<i64>>,
        ambient_rank: Option<usize>,
    ) -> Result<Self> {
        for (i, c) in curves.iter().enumerate() {
            if let Some(row) = gram.get(i) {
                if row.get(i) != Some(&c.self_int) {
                    return Err(Error::input(
                        format!("curves[{i}].self_int"),
                        format!(
                            "declared self-intersection {} differs from gram[{i}][{i}]",
                            c.self_int
                        ),
                    ));
                }
            }
        }
        Self::new(
            name,
            curves.into_iter().map(|c| (c.name, c.genus)).collect(),
            gram,
            ambient_rank,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn gram(&self) -> &IntSymMatrix {
        &self.gram
    }

    pub fn ambient_rank(&self) -> Option<usize> {
        self.ambient_rank
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.curves.iter().map(|c| c.name.clone()).collect()
    }

    pub fn genera(&self) -> Vec<u64> {
        self.curves.iter().map(|c| c.genus).collect()
    }

    /// Same configuration with curves reordered: new curve `i` is old curve `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let g = self.gram.permuted(perm);
        Self {
            name: self.name.clone(),
            curves: perm.iter().map(|&p| self.curves[p].clone()).collect(),
            gram: g,
            ambient_rank: self.ambient_rank,
        }
    }

    /// Restriction to a subset of curves.
    pub fn subconfiguration(&self, idx: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            curves: idx.iter().map(|&p| self.curves[p].clone()).collect(),
            gram: self.gram.principal_submatrix(idx),
            ambient_rank: None,
        }
    }

    /// Gram rank, i.e. the dimension of the span of the curves.
    pub fn span_rank(&self) -> usize {
        self.gram.rank()
    }

    /// Indices of a maximal independent subset of curves (greedy, in order).
    pub fn span_basis(&self) -> Vec<usize> {
        independent_rows(&self.gram)
    }

    pub fn signature(&self) -> Signature {
        self.gram.signature()
    }

    /// `rho` is the Gram rank; `delta_E` and `p_E` range over curves with
    /// negative self-intersection.
    pub fn invariants(&self) -> InvariantTriple {
        let exc = self.curves.iter().filter(|c| c.self_int < 0);
        InvariantTriple {
            rho: self.span_rank(),
            delta_e: exc.clone().map(|c| c.self_int.unsigned_abs()).max().unwrap_or(0),
            p_e: exc.map(|c| c.genus).max().unwrap_or(0),
        }
    }

    pub fn dual_graph(&self) -> DualGraph {
        let n = self.len();
        let vertices = self
            .curves
            .iter()
            .map(|c| GraphVertex {
                name: c.name.clone(),
                self_int: c.self_int,
                genus: c.genus,
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let m = self.gram.get(i, j);
                if m > 0 {
                    edges.push(GraphEdge { a: i, b: j, multiplicity: m });
                }
            }
        }
        let all: Vec<usize> = (0..n).collect();
        DualGraph {
            vertices,
            edges,
            components: connected_components(&self.gram, &all),
        }
    }

    pub fn validate(&self) -> Result<Validation> {
        let invariants = self.invariants();
        let signature = self.signature();
        let mut warnings = Vec::new();
        if invariants.rho < 3 {
            warnings.push(format!(
                "rho = {} < 3: finite polyhedral Mori cone statements are only made for rho >= 3",
                invariants.rho
            ));
        }
        if signature.n_plus != 1 {
            warnings.push(format!(
                "span signature {signature} is not hyperbolic (expected one positive direction)"
            ));
        }
        if let Some(r) = self.ambient_rank {
            if r > invariants.rho {
                warnings.push(format!(
                    "curves span rank {} inside an ambient lattice of rank {r}",
                    invariants.rho
                ));
            }
        }
        Ok(Validation {
            invariants,
            signature,
            graph: self.dual_graph(),
            warnings,
        })
    }

    /// Intersection of two divisors.
    pub fn intersect(&self, a: &Divisor, b: &Divisor) -> Rational {
        self.gram.bilinear_rational(&a.coeffs, &b.coeffs)
    }

    /// `D.E_i` for every curve.
    pub fn products(&self, d: &Divisor) -> Vec<Rational> {
        self.gram.apply_rational(&d.coeffs)
    }

    /// Adjunction right-hand side `E_i.K = 2 p_a(E_i) - 2 - E_i^2`.
    fn adjunction_rhs(&self) -> Vec<Rational> {
        self.curves
            .iter()
            .map(|c| rat(2 * c.genus as i64 - 2 - c.self_int))
            .collect()
    }

    /// Solves adjunction on a maximal independent subset and checks the
    /// remaining curves against the solution.
    pub fn canonical_class(&self) -> Result<CanonicalClass> {
        let basis = self.span_basis();
        let rhs = self.adjunction_rhs();
        let sub = self.gram.principal_submatrix(&basis).to_rational();
        let b: Vec<Rational> = basis.iter().map(|&i| rhs[i].clone()).collect();
        let d = match solve_linear(&sub, &b) {
            Solution::Unique(d) => d,
            Solution::Inconsistent | Solution::Underdetermined { .. } => {
                return Err(Error::AdjunctionInconsistent(
                    "basis Gram matrix is singular".into(),
                ))
            }
        };
        let mut coeffs = vec![Rational::zero(); self.len()];
        for (k, &i) in basis.iter().enumerate() {
            coeffs[i] = d[k].clone();
        }
        let divisor = Divisor::new(coeffs);
        let products = self.products(&divisor);
        for (i, (got, want)) in products.iter().zip(&rhs).enumerate() {
            if got != want {
                return Err(Error::AdjunctionInconsistent(format!(
                    "curve `{}` needs K.E = {want} but the solved class gives {got}",
                    self.curves[i].name
                )));
            }
        }
        let square = dot_rational(&divisor.coeffs, &products);
        Ok(CanonicalClass {
            divisor,
            basis,
            products,
            square,
        })
    }

    /// Arithmetic genus `(D.D + D.K)/2 + 1`.
    pub fn genus_of(&self, d: &Divisor) -> Result<Rational> {
        self.check_len(d)?;
        let k = self.canonical_class()?;
        let dk = dot_rational(&d.coeffs, &k.products);
        Ok((self.intersect(d, d) + dk) / rat(2) + Rational::one())
    }

    pub fn check_divisor(&self, d: &Divisor) -> Result<DivisorCheck> {
        self.check_len(d)?;
        let products = self.products(d);
        let square = dot_rational(&d.coeffs, &products);
        let nef_on_listed = products.iter().all(|p| !p.is_negative());
        Ok(DivisorCheck {
            square,
            products,
            nef_on_listed,
        })
    }

    fn check_len(&self, d: &Divisor) -> Result<()> {
        if d.len() != self.len() {
            return Err(Error::input(
                "divisor",
                format!("{} coefficients for {} curves", d.len(), self.len()),
            ));
        }
        Ok(())
    }

    /// Subsets of `rho` curves that span, satisfy the pairwise bound
    /// `4 (E_i.E_j)^2 < 62^2 E_i^2 E_j^2` and have connected dual graph.
    pub fn find_spanning_subsets(&self, first_only: bool) -> Result<Vec<SpanningSubset>> {
        let rho = self.span_rank();
        let candidates: Vec<usize> = (0..self.len()).filter(|&i| self.curves[i].self_int < 0).collect();
        if candidates.len() < rho || rho == 0 {
            return Ok(Vec::new());
        }
        if binomial(candidates.len(), rho) > SUBSET_SEARCH_LIMIT {
            return Err(Error::ResourceGuard(format!(
                "C({}, {rho}) subsets exceed the search limit",
                candidates.len()
            )));
        }
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(rho);
        self.subset_search(&candidates, rho, 0, &mut pick, first_only, &mut out);
        Ok(out)
    }

    fn subset_search(
        &self,
        cands: &[usize],
        size: usize,
        start: usize,
        pick: &mut Vec<usize>,
        first_only: bool,
        out: &mut Vec<SpanningSubset>,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        if pick.len() == size {
            if let Some(s) = self.check_spanning(pick) {
                out.push(s);
            }
            return;
        }
        for k in start..cands.len() {
            if cands.len() - k < size - pick.len() {
                break;
            }
            let c = cands[k];
            // condition (b) is pairwise, so prune early
            if pick.iter().all(|&p| self.pair_bound_ok(p, c)) {
                pick.push(c);
                self.subset_search(cands, size, k + 1, pick, first_only, out);
                pick.pop();
            }
        }
    }

    fn pair_bound_ok(&self, i: usize, j: usize) -> bool {
        let gij = self.gram.get(i, j) as i128;
        let gii = self.gram.get(i, i) as i128;
        let gjj = self.gram.get(j, j) as i128;
        gii < 0 && gjj < 0 && 4 * gij * gij < PAIR_BOUND_SQUARED as i128 * gii * gjj
    }

    fn check_spanning(&self, idx: &[usize]) -> Option<SpanningSubset> {
        let sub = self.gram.principal_submatrix(idx);
        if sub.rank() != idx.len() {
            return None;
        }
        let local: Vec<usize> = (0..idx.len()).collect();
        if connected_components(&sub, &local).len() != 1 {
            return None;
        }
        let mut max = Rational::zero();
        for a in 0..idx.len() {
            for b in (a + 1)..idx.len() {
                let (i, j) = (idx[a], idx[b]);
                if !self.pair_bound_ok(i, j) {
                    return None;
                }
                let gij = self.gram.get(i, j);
                let r = Rational::new(
                    BigInt::from(4 * gij * gij),
                    BigInt::from(self.gram.get(i, i) * self.gram.get(j, j)),
                );
                if r > max {
                    max = r;
                }
            }
        }
        Some(SpanningSubset {
            indices: idx.to_vec(),
            max_ratio_squared: max,
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Connected components of the support graph (edges where the entry is
/// positive) restricted to `vertices`; components and their members are
/// sorted.
pub fn connected_components(gram: &IntSymMatrix, vertices: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; gram.dim()];
    let mut comps = Vec::new();
    let inside: BTreeSet<usize> = vertices.iter().copied().collect();
    for &v in vertices {
        if seen[v] {
            continue;
        }
        let mut stack = vec![v];
        seen[v] = true;
        let mut comp = Vec::new();
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &y in &inside {
                if !seen[y] && y != x && gram.get(x, y) > 0 {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort();
    comps
}
