//! Polyhedral cones in exact arithmetic.
//!
//! The nef side of a configuration is the cone `{x : x.E_i >= 0}`; its
//! extreme rays come from a double description computation, and the
//! configuration is certified when every ray lies in one closed half of the
//! light cone.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::config::{CurveConfiguration, Divisor};
use crate::error::{Error, Result};
use crate::linalg::{
    clear_denominators, dot, integer_kernel, primitive, IntSymMatrix, RatMatrix, Rational,
};

/// Extreme rays of a pointed cone with their mutual products under a
/// quadratic form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RaySet {
    #[serde(serialize_with = "crate::report::ser_bigint_rows")]
    pub rays: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "crate::report::ser_bigints")]
    pub squares: Vec<BigInt>,
    #[serde(serialize_with = "crate::report::ser_bigint_rows")]
    pub products: Vec<Vec<BigInt>>,
}

impl RaySet {
    fn new(mut rays: Vec<Vec<BigInt>>, form: &IntSymMatrix) -> Self {
        rays.sort();
        rays.dedup();
        let products: Vec<Vec<BigInt>> = rays
            .iter()
            .map(|r| rays.iter().map(|s| form.bilinear(r, s)).collect())
            .collect();
        let squares = (0..rays.len()).map(|i| products[i][i].clone()).collect();
        Self {
            rays,
            squares,
            products,
        }
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }
}

struct WorkingRay {
    ray: Vec<BigInt>,
    /// indices of processed inequalities tight at this ray, ascending
    tight: Vec<usize>,
}

fn rank_of_rows(ineqs: &[Vec<BigInt>], idx: &[usize]) -> usize {
    if idx.is_empty() {
        return 0;
    }
    let n = ineqs[0].len();
    RatMatrix::from_fn(idx.len(), n, |i, j| Rational::from_integer(ineqs[idx[i]][j].clone())).rank()
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Extreme rays of `{y : a.y >= 0 for every a in ineqs}`, primitive and in
/// lexicographic order. `form` is only used for the reported products.
///
/// Double description: start from the simplicial cone of `n` independent
/// inequalities and insert the rest one at a time, combining adjacent
/// positive/negative pairs (adjacency by the rank test).
pub fn extreme_rays(ineqs: &[Vec<BigInt>], form: &IntSymMatrix) -> Result<RaySet> {
    let n = form.dim();
    if ineqs.iter().any(|a| a.len() != n) {
        return Err(Error::input("inequalities", format!("all rows must have length {n}")));
    }
    // greedy independent subset
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..ineqs.len() {
        let mut trial = basis.clone();
        trial.push(i);
        if rank_of_rows(ineqs, &trial) == trial.len() {
            basis = trial;
        }
        if basis.len() == n {
            break;
        }
    }
    if basis.len() < n {
        let rows: Vec<Vec<Rational>> = ineqs
            .iter()
            .map(|a| a.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let line = if rows.is_empty() {
            vec![vec![BigInt::from(1); n]]
        } else {
            integer_kernel(&RatMatrix::from_rows(&rows))
        };
        return Err(Error::NotPointed(format!(
            "the cone contains the line spanned by {:?}",
            line.first().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        )));
    }
    let a0 = RatMatrix::from_fn(n, n, |i, j| Rational::from_integer(ineqs[basis[i]][j].clone()));
    let inv = a0.inverse().expect("independent rows");
    let mut rays: Vec<WorkingRay> = (0..n)
        .map(|j| {
            let col = inv.column(j);
            let tight = (0..n).filter(|&i| i != j).map(|i| basis[i]).collect::<Vec<_>>();
            let mut tight = tight;
            tight.sort_unstable();
            WorkingRay {
                ray: clear_denominators(&col),
                tight,
            }
        })
        .collect();
    let mut processed: Vec<usize> = basis.clone();
    processed.sort_unstable();

    for k in 0..ineqs.len() {
        if processed.binary_search(&k).is_ok() {
            continue;
        }
        let a = &ineqs[k];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.ray)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<WorkingRay> = Vec::new();
        for &p in &pos {
            for &m in &neg {
                let common = intersect_sorted(&rays[p].tight, &rays[m].tight);
                if common.len() + 2 < n {
                    continue;
                }
                if rank_of_rows(ineqs, &common) != n - 2 {
                    continue;
                }
                let vp = &vals[p];
                let vm = -&vals[m];
                let ray: Vec<BigInt> = rays[p]
                    .ray
                    .iter()
                    .zip(&rays[m].ray)
                    .map(|(x, y)| x * &vm + y * vp)
                    .collect();
                let mut tight = common;
                tight.push(k);
                tight.sort_unstable();
                next.push(WorkingRay {
                    ray: primitive(ray),
                    tight,
                });
            }
        }
        let mut kept: Vec<WorkingRay> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.tight.push(k);
                r.tight.sort_unstable();
            }
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
        processed.push(k);
        processed.sort_unstable();
    }
    Ok(RaySet::new(rays.into_iter().map(|r| r.ray).collect(), form))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeStatus {
    Certified,
    Refuted,
}

/// Result of the light-cone containment test for the nef side of a
/// configuration. Ray coordinates are over the curves listed in `basis`.
#[derive(Debug, Clone, Serialize)]
pub struct ConeCertificate {
    pub status: ConeStatus,
    pub basis: Vec<usize>,
    pub rays: RaySet,
    /// Index into `rays` of the refuting ray.
    pub witness: Option<usize>,
    /// Indices of rays with square zero (parabolic vertices).
    pub isotropic_rays: Vec<usize>,
}

impl ConeCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == ConeStatus::Certified
    }

    pub fn witness_ray(&self) -> Option<&[BigInt]> {
        self.witness.map(|w| self.rays.rays[w].as_slice())
    }
}

/// Span basis, its Gram matrix and the inequality rows `E_i . (basis)`.
pub fn nef_system(config: &CurveConfiguration) -> (Vec<usize>, IntSymMatrix, Vec<Vec<BigInt>>) {
    let basis = config.span_basis();
    let g = config.gram();
    let form = g.principal_submatrix(&basis);
    let ineqs = (0..config.len())
        .map(|i| basis.iter().map(|&j| BigInt::from(g.get(i, j))).collect())
        .collect();
    (basis, form, ineqs)
}

fn check_certifiable(config: &CurveConfiguration) -> Result<()> {
    let sig = config.signature();
    if sig.n_plus != 1 {
        return Err(Error::UnsupportedPrecondition(format!(
            "curve span has signature {sig}, not hyperbolic"
        )));
    }
    if let Some(r) = config.ambient_rank() {
        if r > sig.rank() {
            return Err(Error::UnsupportedPrecondition(format!(
                "curves span rank {} but the ambient lattice has rank {r}",
                sig.rank()
            )));
        }
    }
    Ok(())
}

/// Decides whether `{x : x.E_i >= 0}` lies in the closed positive light
/// cone: every extreme ray must have `r.r >= 0` and every pair `r.s >= 0`.
pub fn certify_fpmc(config: &CurveConfiguration) -> Result<ConeCertificate> {
    check_certifiable(config)?;
    let (basis, form, ineqs) = nef_system(config);
    let rays = extreme_rays(&ineqs, &form)?;
    let bad_square = rays.squares.iter().position(|s| s.is_negative());
    let bad_pair = (0..rays.len()).find(|&i| rays.products[i].iter().any(|p| p.is_negative()));
    let witness = bad_square.or(bad_pair);
    let isotropic_rays = (0..rays.len()).filter(|&i| rays.squares[i].is_zero()).collect();
    Ok(ConeCertificate {
        status: if witness.is_none() {
            ConeStatus::Certified
        } else {
            ConeStatus::Refuted
        },
        basis,
        rays,
        witness,
        isotropic_rays,
    })
}

/// For three curves: every 2x2 principal Gram submatrix is negative
/// semidefinite.
pub fn two_curve_criterion(config: &CurveConfiguration) -> Result<bool> {
    if config.len() != 3 {
        return Err(Error::input(
            "curves",
            format!("the two-curve criterion needs exactly 3 curves, got {}", config.len()),
        ));
    }
    let g = config.gram();
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (a, b, c) = (g.get(i, i) as i128, g.get(j, j) as i128, g.get(i, j) as i128);
            if a > 0 || b > 0 || a * b - c * c < 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub index: usize,
    pub extremal: bool,
    /// Name of the listed curve with negative square this generator is a
    /// positive multiple of.
    pub matches_curve: Option<String>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub square: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub dot_r: Rational,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlmostReport {
    pub delta_e: u64,
    pub p_e: u64,
    pub condition1: bool,
    pub condition2: bool,
    pub condition2_note: Option<String>,
    pub generators: Vec<GeneratorCheck>,
    pub condition3: bool,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub curve_products: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub max_abs_product: Rational,
    pub r_bound: Option<i64>,
}

impl AlmostReport {
    pub fn passes(&self) -> bool {
        self.condition1 && self.condition2 && self.condition3
    }
}

/// Coordinates of a divisor over the span basis.
fn basis_coordinates(
    config: &CurveConfiguration,
    basis: &[usize],
    form_inv: &RatMatrix,
    d: &Divisor,
) -> Vec<Rational> {
    // y = G_B^{-1} (D.B)
    let prods = config.products(d);
    let rhs: Vec<Rational> = basis.iter().map(|&j| prods[j].clone()).collect();
    form_inv.mul_vec(&rhs)
}

/// Checks the three conditions of an almost finite polyhedral cone against a
/// declared generating set (defaults to the listed curves).
pub fn check_almost_fpmc(
    config: &CurveConfiguration,
    r: &Divisor,
    declared: &[Divisor],
    r_bound: Option<i64>,
) -> Result<AlmostReport> {
    let n = config.len();
    if r.len() != n || declared.iter().any(|d| d.len() != n) {
        return Err(Error::input("divisor", format!("divisors need {n} coefficients")));
    }
    let inv = config.invariants();
    let curve_products = config.products(r);
    let max_abs_product = curve_products
        .iter()
        .map(|p| p.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let condition3 = match r_bound {
        Some(b) => max_abs_product <= Rational::from_integer(BigInt::from(b)),
        None => true,
    };

    let gens: Vec<Divisor> = if declared.is_empty() {
        (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                Divisor::from_ints(&e)
            })
            .collect()
    } else {
        declared.to_vec()
    };

    let (basis, form, _) = nef_system(config);
    let form_inv = form.to_rational().inverse().ok_or_else(|| {
        Error::UnsupportedPrecondition("span Gram matrix is singular".into())
    })?;
    let coords: Vec<Vec<Rational>> = gens
        .iter()
        .map(|g| basis_coordinates(config, &basis, &form_inv, g))
        .collect();
    let curve_coords: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            basis_coordinates(config, &basis, &form_inv, &Divisor::from_ints(&e))
        })
        .collect();
    // dual cone inequalities: (G_B y_g) . x >= 0
    let ineqs: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|y| clear_denominators(&form.to_rational().mul_vec(y)))
        .collect();

    let mut generators = Vec::new();
    let mut condition2_note = None;
    let dual = extreme_rays(&ineqs, &form);
    match dual {
        Err(Error::NotPointed(_)) => {
            condition2_note = Some("declared generators do not span the curve span".into());
        }
        Err(e) => return Err(e),
        Ok(dual) => {
            let dim = basis.len();
            let mut seen: Vec<Vec<BigInt>> = Vec::new();
            for (gi, g) in gens.iter().enumerate() {
                let prim = clear_denominators(&coords[gi]);
                let tight: Vec<usize> = (0..dual.len())
                    .filter(|&k| dot(&ineqs[gi], &dual.rays[k]).is_zero())
                    .collect();
                let tight_rank = if tight.is_empty() {
                    0
                } else {
                    RatMatrix::from_fn(tight.len(), dim, |i, j| {
                        Rational::from_integer(dual.rays[tight[i]][j].clone())
                    })
                    .rank()
                };
                let zero = prim.iter().all(|x| x.is_zero());
                let extremal = !zero && tight_rank + 1 == dim && !seen.contains(&prim);
                if extremal {
                    seen.push(prim.clone());
                }
                let matches_curve = (0..n)
                    .filter(|&i| config.curves()[i].self_int < 0)
                    .find(|&i| clear_denominators(&curve_coords[i]) == prim && !zero)
                    .map(|i| config.curves()[i].name.clone());
                let square = config.intersect(g, g);
                let dot_r = config.intersect(g, r);
                let ok = !extremal
                    || matches_curve.is_some()
                    || (square.is_zero() && dot_r.is_zero());
                generators.push(GeneratorCheck {
                    index: gi,
                    extremal,
                    matches_curve,
                    square,
                    dot_r,
                    ok,
                });
            }
        }
    }
    let condition2 = condition2_note.is_none() && generators.iter().all(|g| g.ok);
    Ok(AlmostReport {
        delta_e: inv.delta_e,
        p_e: inv.p_e,
        condition1: true,
        condition2,
        condition2_note,
        generators,
        condition3,
        curve_products,
        max_abs_product,
        r_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{int, rat};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn ruled_base_rays_n3() {
        let c = fixtures::ruled_base(3, 0);
        let cert = certify_fpmc(&c).unwrap();
        assert!(cert.is_certified());
        assert_eq!(
            cert.rays.rays,
            vec![ints(&[0, 1, 1]), ints(&[1, 3, 2]), ints(&[1, 3, 3])]
        );
        assert_eq!(cert.rays.squares, ints(&[0, 2, 3]));
        assert_eq!(cert.isotropic_rays, vec![0]);
    }

    #[test]
    fn refutation_witness() {
        let c = CurveConfiguration::new(
            "bad",
            vec![("A".into(), 0), ("B".into(), 0), ("C".into(), 0)],
            vec![vec![-1, 2, 0], vec![2, -1, 1], vec![0, 1, -1]],
            None,
        )
        .unwrap();
        let cert = certify_fpmc(&c).unwrap();
        assert_eq!(cert.status, ConeStatus::Refuted);
        assert_eq!(cert.witness_ray().unwrap(), ints(&[2, 1, -3]).as_slice());
        assert_eq!(cert.rays.squares[cert.witness.unwrap()], int(-12));
    }

    #[test]
    fn rank_one_single_inequality() {
        let form = IntSymMatrix::new(vec![vec![-1]]).unwrap();
        let r = extreme_rays(&[ints(&[-1])], &form).unwrap();
        assert_eq!(r.rays, vec![ints(&[-1])]);
        assert_eq!(r.squares, ints(&[-1]));
    }

    #[test]
    fn non_pointed_reports_line() {
        let form = IntSymMatrix::identity(2);
        assert!(matches!(
            extreme_rays(&[ints(&[1, 0])], &form),
            Err(Error::NotPointed(_))
        ));
    }

    #[test]
    fn square_cone_rays() {
        // x >= 0, y >= 0, x + y >= 0 (redundant), x - y >= 0
        let form = IntSymMatrix::identity(2);
        let ineqs = vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1]), ints(&[1, -1])];
        let r = extreme_rays(&ineqs, &form).unwrap();
        assert_eq!(r.rays, vec![ints(&[1, 0]), ints(&[1, 1])]);
    }

    #[test]
    fn not_hyperbolic_is_unsupported() {
        let c = CurveConfiguration::new(
            "neg",
            vec![("A".into(), 0), ("B".into(), 0)],
            vec![vec![-2, 1], vec![1, -2]],
            None,
        )
        .unwrap();
        assert!(matches!(certify_fpmc(&c), Err(Error::UnsupportedPrecondition(_))));
        let spans_less = CurveConfiguration::new(
            "amb",
            vec![("A".into(), 0), ("B".into(), 0), ("C".into(), 0)],
            vec![vec![-1, 1, 0], vec![1, -1, 1], vec![0, 1, -1]],
            Some(4),
        )
        .unwrap();
        assert!(matches!(certify_fpmc(&spans_less), Err(Error::UnsupportedPrecondition(_))));
    }

    #[test]
    fn two_curve_criterion_examples() {
        assert!(two_curve_criterion(&fixtures::ruled_base(3, 0)).unwrap());
        let bad = CurveConfiguration::new(
            "bad",
            vec![("A".into(), 0), ("B".into(), 0), ("C".into(), 0)],
            vec![vec![-1, 2, 0], vec![2, -1, 0], vec![0, 0, -1]],
            None,
        )
        .unwrap();
        assert!(!two_curve_criterion(&bad).unwrap());
        let diag = CurveConfiguration::new(
            "diag",
            vec![("A".into(), 0), ("B".into(), 0), ("C".into(), 0)],
            vec![vec![-1, 0, 0], vec![0, -2, 0], vec![0, 0, -1]],
            None,
        )
        .unwrap();
        assert!(two_curve_criterion(&diag).unwrap());
        let two = fixtures::ruled_base(3, 0).subconfiguration(&[0, 1]);
        assert!(matches!(two_curve_criterion(&two), Err(Error::InputInvalid { .. })));
    }

    #[test]
    fn almost_fpmc_on_certified_config() {
        let c = fixtures::ruled_base(2, 0);
        let k = c.canonical_class().unwrap();
        let rep = check_almost_fpmc(&c, &k.divisor, &[], Some(10)).unwrap();
        assert!(rep.passes(), "{rep:?}");
        assert!(rep.generators.iter().all(|g| g.extremal && g.matches_curve.is_some()));
    }

    #[test]
    fn almost_fpmc_isotropic_generator() {
        let c = fixtures::he8();
        let k = c.canonical_class().unwrap();
        let minus_k = k.divisor.scaled(&rat(-1));
        let mut gens: Vec<Divisor> = (0..c.len())
            .map(|i| {
                let mut e = vec![0; c.len()];
                e[i] = 1;
                Divisor::from_ints(&e)
            })
            .collect();
        gens.push(minus_k.clone());
        let rep = check_almost_fpmc(&c, &k.divisor, &gens, Some(1)).unwrap();
        assert!(rep.passes(), "{rep:?}");
        let last = rep.generators.last().unwrap();
        assert_eq!(last.square, rat(0));
        assert_eq!(last.dot_r, rat(0));
    }

    #[test]
    fn almost_fpmc_spacelike_generator_fails() {
        // Replace the curve F0 by the class E0 + F0 + 2 C' style combination with
        // positive square: the cone it spans has that class as an extremal ray.
        let c = fixtures::ruled_base(1, 0);
        let h = Divisor::from_ints(&[2, 3, 2]);
        let gens = vec![
            Divisor::from_ints(&[1, 0, 0]),
            Divisor::from_ints(&[0, 1, 0]),
            h.clone(),
        ];
        let k = c.canonical_class().unwrap();
        let rep = check_almost_fpmc(&c, &k.divisor, &gens, None).unwrap();
        assert!(!rep.condition2);
        let g = &rep.generators[2];
        assert!(g.extremal && g.matches_curve.is_none());
        assert_eq!(g.square, rat(7));
    }
}
