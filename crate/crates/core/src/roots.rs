//! Root configurations of (-2)-curves: ADE and affine ADE recognition, fiber
//! divisors, and Mordell-Weil torsion from discriminant forms.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::config::{connected_components, CurveConfiguration, Divisor};
use crate::error::{Error, Result};
use crate::lattice::{discriminant_group_and_form, Lattice};
use crate::linalg::{isqrt, kernel_basis, IntSymMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RootType {
    A,
    D,
    E,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::A => "A",
            RootType::D => "D",
            RootType::E => "E",
        })
    }
}

/// Whether `t_n` is a valid finite Dynkin type.
pub fn is_valid_type(t: RootType, n: usize) -> bool {
    match t {
        RootType::A => n >= 1,
        RootType::D => n >= 4,
        RootType::E => (6..=8).contains(&n),
    }
}

fn from_edges(size: usize, edges: &[(usize, usize, i64)]) -> IntSymMatrix {
    let mut rows = vec![vec![0i64; size]; size];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b, m) in edges {
        rows[a][b] += m;
        rows[b][a] += m;
    }
    IntSymMatrix::from_fn(size, |i, j| rows[i][j])
}

/// Star-shaped tree: a center (vertex 0) with paths of the given lengths.
fn star(arms: &[usize]) -> (usize, Vec<(usize, usize, i64)>) {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next, 1));
            prev = next;
            next += 1;
        }
    }
    (next, edges)
}

fn path(n: usize) -> Vec<(usize, usize, i64)> {
    (1..n).map(|i| (i - 1, i, 1)).collect()
}

/// Negative definite Cartan-type Gram matrix of `t_n`: `-2` on the diagonal,
/// `1` on the edges of the Dynkin diagram.
///
/// Panics on an invalid type; check with [`is_valid_type`].
pub fn cartan_matrix(t: RootType, n: usize) -> IntSymMatrix {
    assert!(is_valid_type(t, n), "no root system {t}{n}");
    match t {
        RootType::A => from_edges(n, &path(n)),
        RootType::D => {
            let (size, edges) = star(&[1, 1, n - 3]);
            from_edges(size, &edges)
        }
        RootType::E => {
            let (size, edges) = star(&[1, 2, n - 4]);
            from_edges(size, &edges)
        }
    }
}

/// Gram matrix of the extended diagram of `t_n` (`n + 1` vertices).
pub fn affine_matrix(t: RootType, n: usize) -> IntSymMatrix {
    assert!(is_valid_type(t, n), "no root system {t}{n}");
    match t {
        RootType::A if n == 1 => from_edges(2, &[(0, 1, 2)]),
        RootType::A => {
            let mut e = path(n + 1);
            e.push((n, 0, 1));
            from_edges(n + 1, &e)
        }
        RootType::D => {
            // chain 0..=n-2 with leaves n-1 at 1 and n at n-3
            let mut e = path(n - 1);
            e.push((1, n - 1, 1));
            e.push((n - 3, n, 1));
            from_edges(n + 1, &e)
        }
        RootType::E => {
            let arms: &[usize] = match n {
                6 => &[2, 2, 2],
                7 => &[1, 3, 3],
                _ => &[1, 2, 5],
            };
            let (size, edges) = star(arms);
            from_edges(size, &edges)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum RootKind {
    Finite { root_type: RootType, n: usize },
    Affine { root_type: RootType, n: usize },
    None,
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootKind::Finite { root_type, n } => write!(f, "{root_type}{n}"),
            RootKind::Affine { root_type, n } => write!(f, "{root_type}{n}~"),
            RootKind::None => f.write_str("none"),
        }
    }
}

impl RootKind {
    pub fn is_affine(&self) -> bool {
        matches!(self, RootKind::Affine { .. })
    }
}

/// One connected component of the (-2)-curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootComponentReport {
    pub vertex_names: Vec<String>,
    pub indices: Vec<usize>,
    pub kind: RootKind,
    pub rank: usize,
    #[serde(serialize_with = "ser_opt_bigints")]
    pub marks: Option<Vec<BigInt>>,
}

fn ser_opt_bigints<S: serde::Serializer>(
    v: &Option<Vec<BigInt>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => crate::report::ser_bigints(v, s),
        None => s.serialize_none(),
    }
}

fn weighted_profile(g: &IntSymMatrix, v: usize) -> (i64, Vec<i64>) {
    let mut w: Vec<i64> = (0..g.dim())
        .filter(|&u| u != v && g.get(u, v) != 0)
        .map(|u| g.get(u, v))
        .collect();
    w.sort_unstable();
    (g.get(v, v), w)
}

/// Graph isomorphism of two symmetric matrices under simultaneous
/// permutation, by backtracking in breadth-first order with degree pruning.
pub fn isomorphic(a: &IntSymMatrix, b: &IntSymMatrix) -> bool {
    let n = a.dim();
    if n != b.dim() {
        return false;
    }
    let pa: Vec<_> = (0..n).map(|v| weighted_profile(a, v)).collect();
    let pb: Vec<_> = (0..n).map(|v| weighted_profile(b, v)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    // visit order: BFS over each component so every vertex after the first
    // of a component has an already mapped neighbour
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for u in 0..n {
                if !seen[u] && a.get(u, v) != 0 {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        order: &[usize],
        a: &IntSymMatrix,
        b: &IntSymMatrix,
        pa: &[(i64, Vec<i64>)],
        pb: &[(i64, Vec<i64>)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in 0..b.dim() {
            if used[w] || pa[v] != pb[w] {
                continue;
            }
            let consistent = order[..k]
                .iter()
                .all(|&u| a.get(u, v) == b.get(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(k + 1, order, a, b, pa, pb, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    go(0, &order, a, b, &pa, &pb, &mut map, &mut used)
}

fn finite_templates(size: usize) -> Vec<(RootType, usize)> {
    [RootType::A, RootType::D, RootType::E]
        .into_iter()
        .filter(|&t| is_valid_type(t, size))
        .map(|t| (t, size))
        .collect()
}

fn affine_templates(size: usize) -> Vec<(RootType, usize)> {
    if size < 2 {
        return Vec::new();
    }
    [RootType::A, RootType::D, RootType::E]
        .into_iter()
        .filter(|&t| is_valid_type(t, size - 1))
        .map(|t| (t, size - 1))
        .collect()
}

/// Classifies a connected Gram matrix with `-2` diagonal.
pub fn classify_component(g: &IntSymMatrix) -> (RootKind, Option<Vec<BigInt>>) {
    let sig = g.signature();
    let size = g.dim();
    if sig.n_plus == 0 && sig.n_zero == 0 {
        for (t, n) in finite_templates(size) {
            if isomorphic(g, &cartan_matrix(t, n)) {
                return (RootKind::Finite { root_type: t, n }, None);
            }
        }
    } else if sig.n_plus == 0 && sig.n_zero == 1 {
        for (t, n) in affine_templates(size) {
            if isomorphic(g, &affine_matrix(t, n)) {
                let marks = kernel_basis(g).pop().filter(|m| m.iter().all(|x| x.is_positive()));
                return (RootKind::Affine { root_type: t, n }, marks);
            }
        }
    }
    (RootKind::None, None)
}

/// Splits the (-2)-curves into connected components and classifies each.
pub fn classify_minus2_components(config: &CurveConfiguration) -> Vec<RootComponentReport> {
    let minus2: Vec<usize> = (0..config.len())
        .filter(|&i| config.curves()[i].self_int == -2)
        .collect();
    connected_components(config.gram(), &minus2)
        .into_iter()
        .map(|indices| {
            let sub = config.gram().principal_submatrix(&indices);
            let (kind, marks) = classify_component(&sub);
            let rank = match kind {
                RootKind::Finite { n, .. } | RootKind::Affine { n, .. } => n,
                RootKind::None => sub.rank(),
            };
            RootComponentReport {
                vertex_names: indices.iter().map(|&i| config.curves()[i].name.clone()).collect(),
                indices,
                kind,
                rank,
                marks,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Case2bReport {
    pub holds: bool,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub k_square: Rational,
    pub components: Vec<RootComponentReport>,
    pub total_rank: usize,
    /// `-K.E` for every listed curve.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub minus_k_products: Vec<Rational>,
    pub minus_k_nef_on_listed: bool,
}

/// `K.K = 0`, every (-2)-component affine, and total affine rank 8.
pub fn case2b_criterion(config: &CurveConfiguration) -> Result<Case2bReport> {
    let k = config.canonical_class()?;
    let components = classify_minus2_components(config);
    let total_rank = components.iter().map(|c| c.rank).sum();
    let holds = k.square.is_zero()
        && !components.is_empty()
        && components.iter().all(|c| c.kind.is_affine())
        && total_rank == 8;
    let minus_k_products: Vec<Rational> = k.products.iter().map(|p| -p).collect();
    let minus_k_nef_on_listed = minus_k_products.iter().all(|p| !p.is_negative());
    Ok(Case2bReport {
        holds,
        k_square: k.square,
        components,
        total_rank,
        minus_k_products,
        minus_k_nef_on_listed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberDivisor {
    pub divisor: Divisor,
    /// `m` with `D = -m K` numerically.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub index: Rational,
}

/// The fiber divisor `D = sum a_j E_j` of an affine component and its index
/// `m` with `D = -m K`.
pub fn fiber_divisor_and_index(
    config: &CurveConfiguration,
    component: &RootComponentReport,
) -> Result<FiberDivisor> {
    let marks = match (&component.kind, &component.marks) {
        (RootKind::Affine { .. }, Some(m)) => m,
        _ => {
            return Err(Error::UnsupportedPrecondition(format!(
                "component of kind {} is not affine",
                component.kind
            )))
        }
    };
    let k = config.canonical_class()?;
    let mut coeffs = vec![Rational::zero(); config.len()];
    for (&i, a) in component.indices.iter().zip(marks) {
        coeffs[i] = Rational::from_integer(a.clone());
    }
    let divisor = Divisor::new(coeffs);
    let d_prod = config.products(&divisor);
    let j = k.products.iter().position(|p| !p.is_zero()).ok_or_else(|| {
        Error::UnsupportedPrecondition("K is numerically trivial on the listed curves".into())
    })?;
    let m = -&d_prod[j] / &k.products[j];
    for (i, (d, kp)) in d_prod.iter().zip(&k.products).enumerate() {
        if d + &m * kp != Rational::zero() {
            return Err(Error::NotAntimultiple(format!(
                "D.{} = {d} but -m K.{} = {} for m = {m}",
                config.curves()[i].name,
                config.curves()[i].name,
                -(&m * kp)
            )));
        }
    }
    Ok(FiberDivisor { divisor, index: m })
}

/// One term `k X_n~` of a fiber list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiberType {
    pub count: usize,
    pub root_type: RootType,
    pub n: usize,
    pub affine: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberTypeList {
    pub terms: Vec<FiberType>,
}

impl FiberTypeList {
    pub fn total_rank(&self) -> usize {
        self.terms.iter().map(|t| t.count * t.n).sum()
    }
}

impl fmt::Display for FiberTypeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.count != 1 {
                write!(f, "{}", t.count)?;
            }
            write!(f, "{}{}", t.root_type, t.n)?;
            if t.affine {
                f.write_str("~")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FiberTypeList {
    type Err = Error;

    /// Parses `[k]<A|D|E><n>[~]` terms joined by `+`.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (idx, raw) in s.split('+').enumerate() {
            let path = format!("fibers[{idx}]");
            let term = raw.trim();
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let count = if digits == 0 {
                1
            } else {
                term[..digits]
                    .parse::<usize>()
                    .map_err(|e| Error::input(&path, e.to_string()))?
            };
            let rest = &term[digits..];
            let mut chars = rest.chars();
            let root_type = match chars.next() {
                Some('A') => RootType::A,
                Some('D') => RootType::D,
                Some('E') => RootType::E,
                _ => return Err(Error::input(&path, format!("expected A, D or E in `{term}`"))),
            };
            let rest = chars.as_str();
            let (num, affine) = match rest.strip_suffix('~') {
                Some(num) => (num, true),
                None => (rest, false),
            };
            let n: usize = num
                .parse()
                .map_err(|_| Error::input(&path, format!("bad rank in `{term}`")))?;
            if count == 0 || !is_valid_type(root_type, n) {
                return Err(Error::input(&path, format!("no root system `{term}`")));
            }
            terms.push(FiberType {
                count,
                root_type,
                n,
                affine,
            });
        }
        Ok(FiberTypeList { terms })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MwGroup {
    /// Invariant factors `d_1 | d_2 | ...`, all > 1; empty for the trivial group.
    pub invariant_factors: Vec<u64>,
    pub order: u64,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub det_product: BigInt,
    /// Number of totally isotropic subgroups of the required order.
    pub isotropic_subgroups: usize,
}

fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// Invariant factors (ascending, divisibility chain) from the exponents of
/// the cyclic p-primary summands for every prime.
fn combine_primary(per_prime: &BTreeMap<u64, Vec<u32>>) -> Vec<u64> {
    let len = per_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (&p, exps) in per_prime {
        let mut e = exps.clone();
        e.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &k) in e.iter().enumerate() {
            // i-th largest exponent goes into the i-th largest factor
            out[len - 1 - i] *= p.pow(k);
        }
    }
    out.retain(|&d| d > 1);
    out
}

/// Invariant factors of `Z/m_1 + ... + Z/m_k`.
pub fn invariant_factors_of_cyclic_sum(orders: &[u64]) -> Vec<u64> {
    let mut per_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &m in orders {
        for (p, k) in factorize(m) {
            per_prime.entry(p).or_default().push(k);
        }
    }
    combine_primary(&per_prime)
}

/// Invariant factors of a finite abelian group from the multiset of its
/// element orders: for each prime `p`, `#{x : p^k x = 0} = p^{s_k}` and
/// `s_k - s_{k-1}` counts cyclic summands of order at least `p^k`.
pub fn invariant_factors_from_element_orders(orders: &[u64]) -> Vec<u64> {
    let n = orders.len() as u64;
    let mut per_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, total) in factorize(n) {
        let mut prev_s = 0u32;
        let mut counts_ge: Vec<u32> = Vec::new();
        for k in 1..=total {
            let pk = p.pow(k);
            let c = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let s = factorize(c).get(&p).copied().unwrap_or(0);
            counts_ge.push(s - prev_s);
            prev_s = s;
        }
        // counts_ge[k-1] = number of summands of order >= p^k
        let mut exps = Vec::new();
        for k in 1..=total as usize {
            let here = counts_ge[k - 1] - counts_ge.get(k).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n(k as u32, here as usize));
        }
        per_prime.insert(p, exps);
    }
    combine_primary(&per_prime)
}

fn block_diagonal(blocks: &[IntSymMatrix]) -> IntSymMatrix {
    let n: usize = blocks.iter().map(|b| b.dim()).sum();
    let mut rows = vec![vec![0i64; n]; n];
    let mut off = 0;
    for b in blocks {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                rows[off + i][off + j] = b.get(i, j);
            }
        }
        off += b.dim();
    }
    IntSymMatrix::from_fn(n, |i, j| rows[i][j])
}

/// Root lattice of the finite parts of the fiber types.
pub fn fiber_root_lattice(fibers: &FiberTypeList) -> IntSymMatrix {
    let blocks: Vec<IntSymMatrix> = fibers
        .terms
        .iter()
        .flat_map(|t| std::iter::repeat_n(cartan_matrix(t.root_type, t.n), t.count))
        .collect();
    block_diagonal(&blocks)
}

const GROUP_LIMIT: u64 = 1 << 16;

/// Torsion Mordell-Weil group of an extremal rational elliptic surface with
/// the given reducible fibers: the isomorphism type of the totally isotropic
/// subgroups `H` of the discriminant group with `|H|^2 = |disc|`.
pub fn mw_group(fibers: &FiberTypeList) -> Result<MwGroup> {
    if let Some(t) = fibers.terms.iter().find(|t| !t.affine) {
        return Err(Error::input(
            "fibers",
            format!("fiber type {}{} needs the affine marker `~`", t.root_type, t.n),
        ));
    }
    if fibers.total_rank() != 8 {
        return Err(Error::input(
            "fibers",
            format!("total rank is {}, expected 8", fibers.total_rank()),
        ));
    }
    let gram = fiber_root_lattice(fibers);
    let det_product = gram.det().abs();
    let root = isqrt(&det_product);
    let order = root.to_u64().expect("small order");
    if &root * &root != det_product {
        return Err(Error::Infeasible { order });
    }
    let disc = discriminant_group_and_form(&Lattice::from_gram(gram)?)?;
    let d: Vec<u64> = disc.factors_u64().expect("small factors");
    let size: u64 = d.iter().product();
    if size > GROUP_LIMIT {
        return Err(Error::ResourceGuard(format!("discriminant group of order {size}")));
    }
    let size = size as usize;
    let decode = |mut idx: usize| -> Vec<i64> {
        d.iter()
            .map(|&m| {
                let c = idx % m as usize;
                idx /= m as usize;
                c as i64
            })
            .collect()
    };
    let encode = |c: &[i64]| -> usize {
        let mut idx = 0usize;
        for (ci, &m) in c.iter().zip(&d).rev() {
            idx = idx * m as usize + ci.rem_euclid(m as i64) as usize;
        }
        idx
    };
    let elems: Vec<Vec<i64>> = (0..size).map(decode).collect();
    let isotropic: Vec<usize> = (0..size).filter(|&i| disc.q(&elems[i]).is_zero()).collect();
    let add = |x: usize, y: usize| -> usize {
        let s: Vec<i64> = elems[x].iter().zip(&elems[y]).map(|(a, b)| a + b).collect();
        encode(&s)
    };
    let element_order = |x: usize| -> u64 {
        elems[x]
            .iter()
            .zip(&d)
            .map(|(&c, &m)| m / num_integer::gcd(c as u64, m))
            .fold(1u64, num_integer::lcm)
    };

    // grow totally isotropic subgroups one generator at a time
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![encode(&vec![0; d.len()])]];
    while let Some(h) = stack.pop() {
        if h.len() as u64 == order {
            found.insert(h);
            continue;
        }
        for &x in &isotropic {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            if h.iter().any(|&s| !disc.b(&elems[s], &elems[x]).is_zero()) {
                continue;
            }
            // closure of H + <x>
            let mut multiples = vec![x];
            let mut cur = x;
            loop {
                cur = add(cur, x);
                if h.binary_search(&cur).is_ok() {
                    break;
                }
                multiples.push(cur);
            }
            let mut g: BTreeSet<usize> = h.iter().copied().collect();
            for &m in &multiples {
                for &s in &h {
                    g.insert(add(m, s));
                }
            }
            let g: Vec<usize> = g.into_iter().collect();
            if g.len() as u64 > order || !order.is_multiple_of(g.len() as u64) {
                continue;
            }
            if seen.insert(g.clone()) {
                stack.push(g);
            }
        }
    }
    let types: BTreeSet<Vec<u64>> = found
        .iter()
        .map(|h| {
            let orders: Vec<u64> = h.iter().map(|&x| element_order(x)).collect();
            invariant_factors_from_element_orders(&orders)
        })
        .collect();
    match types.len() {
        0 => Err(Error::Infeasible { order }),
        1 => Ok(MwGroup {
            invariant_factors: types.into_iter().next().unwrap(),
            order,
            det_product,
            isotropic_subgroups: found.len(),
        }),
        _ => Err(Error::Ambiguous(types.into_iter().collect())),
    }
}

/// The table of fiber types with their Mordell-Weil groups, as printed
/// (cyclic orders of the listed summands; empty = trivial).
pub const MW_TABLE: [(&str, &[u64]); 13] = [
    ("E8~", &[]),
    ("D8~", &[2]),
    ("A8~", &[3]),
    ("E7~+A1~", &[2]),
    ("A7~+A1~", &[2, 2]),
    ("E6~+A2~", &[3]),
    ("D5~+A3~", &[4]),
    ("2D4~", &[2, 2]),
    ("2A4~", &[5]),
    ("D6~+2A1~", &[2, 2]),
    ("A5~+A1~+A2~", &[3, 2]),
    ("2A3~+2A1~", &[4, 2]),
    ("4A2~", &[3, 3]),
];

#[derive(Debug, Clone, Serialize)]
pub struct MwRow {
    pub fibers: String,
    pub expected: Vec<u64>,
    pub computed: Option<Vec<u64>>,
    pub error: Option<String>,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub det_product: BigInt,
    /// `order^2 = prod |det|` with `order` the expected group order.
    pub order_check: bool,
    pub pass: bool,
}

/// Runs [`mw_group`] on every table row and compares up to isomorphism.
pub fn verify_mw_table() -> Vec<MwRow> {
    MW_TABLE
        .iter()
        .map(|(fibers, cyclic)| {
            let list: FiberTypeList = fibers.parse().expect("table row parses");
            let expected = invariant_factors_of_cyclic_sum(cyclic);
            let det_product = fiber_root_lattice(&list).det().abs();
            let expected_order: u64 = expected.iter().product();
            let order_check =
                BigInt::from(expected_order) * BigInt::from(expected_order) == det_product;
            let (computed, error) = match mw_group(&list) {
                Ok(g) => (Some(g.invariant_factors), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let pass = order_check && computed.as_ref() == Some(&expected);
            MwRow {
                fibers: list.to_string(),
                expected,
                computed,
                error,
                det_product,
                order_check,
                pass,
            }
        })
        .collect()
}

/// Marks of the extended diagram of `t_n`, for reference and tests.
pub fn affine_marks(t: RootType, n: usize) -> Vec<BigInt> {
    kernel_basis(&affine_matrix(t, n))
        .pop()
        .unwrap_or_else(|| vec![BigInt::one()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::rat;

    fn sorted(v: &[BigInt]) -> Vec<i64> {
        let mut s: Vec<i64> = v.iter().map(|x| x.to_i64().unwrap()).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn cartan_determinants() {
        let cases = [
            (RootType::A, 2, 3),
            (RootType::A, 7, 8),
            (RootType::D, 4, 4),
            (RootType::D, 8, 4),
            (RootType::E, 6, 3),
            (RootType::E, 7, 2),
            (RootType::E, 8, 1),
        ];
        for (t, n, d) in cases {
            let m = cartan_matrix(t, n);
            assert_eq!(m.det().abs(), BigInt::from(d), "{t}{n}");
            assert_eq!(m.signature().n_minus, n);
        }
    }

    #[test]
    fn affine_types_are_corank_one() {
        for (t, n) in [(RootType::A, 1), (RootType::A, 5), (RootType::D, 4), (RootType::D, 8), (RootType::E, 6), (RootType::E, 7), (RootType::E, 8)] {
            let s = affine_matrix(t, n).signature();
            assert_eq!((s.n_plus, s.n_minus, s.n_zero), (0, n, 1), "{t}{n}~");
        }
    }

    #[test]
    fn mark_multisets() {
        assert_eq!(sorted(&affine_marks(RootType::E, 8)), vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
        assert_eq!(sorted(&affine_marks(RootType::D, 8)), vec![1, 1, 1, 1, 2, 2, 2, 2, 2]);
        assert_eq!(sorted(&affine_marks(RootType::A, 4)), vec![1; 5]);
        assert_eq!(sorted(&affine_marks(RootType::E, 6)), vec![1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(sorted(&affine_marks(RootType::E, 7)), vec![1, 1, 2, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn classify_small() {
        let a2 = IntSymMatrix::new(vec![vec![-2, 1], vec![1, -2]]).unwrap();
        assert_eq!(classify_component(&a2).0, RootKind::Finite { root_type: RootType::A, n: 2 });
        let a1t = IntSymMatrix::new(vec![vec![-2, 2], vec![2, -2]]).unwrap();
        let (k, m) = classify_component(&a1t);
        assert_eq!(k, RootKind::Affine { root_type: RootType::A, n: 1 });
        assert_eq!(m.unwrap(), vec![BigInt::from(1), BigInt::from(1)]);
        let bad = IntSymMatrix::new(vec![vec![-2, 3], vec![3, -2]]).unwrap();
        assert_eq!(classify_component(&bad).0, RootKind::None);
    }

    #[test]
    fn d_and_e_not_confused() {
        // E6 and D6 have different branch arm lengths
        assert!(!isomorphic(&cartan_matrix(RootType::E, 6), &cartan_matrix(RootType::D, 6)));
        assert!(!isomorphic(&cartan_matrix(RootType::E, 6), &cartan_matrix(RootType::A, 6)));
        let p = [3, 0, 5, 1, 4, 2];
        let e6 = cartan_matrix(RootType::E, 6);
        assert!(isomorphic(&e6.permuted(&p), &e6));
    }

    #[test]
    fn he8_black_part() {
        let c = fixtures::he8();
        let comps = classify_minus2_components(&c);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].kind, RootKind::Affine { root_type: RootType::E, n: 8 });
        assert_eq!(sorted(comps[0].marks.as_ref().unwrap()), vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
        let rep = case2b_criterion(&c).unwrap();
        assert!(rep.holds);
        let fd = fiber_divisor_and_index(&c, &comps[0]).unwrap();
        assert_eq!(fd.index, rat(1));
        assert_eq!(c.intersect(&fd.divisor, &fd.divisor), rat(0));
    }

    #[test]
    fn ruled_base_is_not_case2b() {
        let rep = case2b_criterion(&fixtures::ruled_base(1, 0)).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.k_square, rat(7));
    }

    #[test]
    fn non_affine_component_rejected() {
        let c = fixtures::ruled_base(2, 0);
        let comps = classify_minus2_components(&c);
        assert!(matches!(
            fiber_divisor_and_index(&c, &comps[0]),
            Err(Error::UnsupportedPrecondition(_))
        ));
    }

    #[test]
    fn fiber_list_parsing() {
        let l: FiberTypeList = "2A3~+2A1~".parse().unwrap();
        assert_eq!(l.total_rank(), 8);
        assert_eq!(l.to_string(), "2A3~+2A1~");
        assert!("D3~".parse::<FiberTypeList>().is_err());
        assert!("X8~".parse::<FiberTypeList>().is_err());
        assert!("E9".parse::<FiberTypeList>().is_err());
        let e: FiberTypeList = "E8".parse().unwrap();
        assert!(matches!(mw_group(&e), Err(Error::InputInvalid { .. })));
        let short: FiberTypeList = "E7~".parse().unwrap();
        assert!(matches!(mw_group(&short), Err(Error::InputInvalid { .. })));
    }

    #[test]
    fn structure_from_orders() {
        // Z/4 + Z/2: orders 1,2,2,2,4,4,4,4
        assert_eq!(invariant_factors_from_element_orders(&[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        assert_eq!(invariant_factors_from_element_orders(&[1, 2, 2, 2]), vec![2, 2]);
        assert_eq!(invariant_factors_from_element_orders(&[1, 2, 3, 3, 6, 6]), vec![6]);
        assert_eq!(invariant_factors_from_element_orders(&[1]), Vec::<u64>::new());
        assert_eq!(invariant_factors_of_cyclic_sum(&[3, 2]), vec![6]);
        assert_eq!(invariant_factors_of_cyclic_sum(&[2, 4]), vec![2, 4]);
    }

    #[test]
    fn mw_examples() {
        let g = |s: &str| mw_group(&s.parse().unwrap()).unwrap().invariant_factors;
        assert_eq!(g("D8~"), vec![2]);
        assert_eq!(g("D5~+A3~"), vec![4]);
        assert_eq!(g("4A2~"), vec![3, 3]);
        assert_eq!(g("E8~"), Vec::<u64>::new());
        assert_eq!(g("A5~+A1~+A2~"), vec![6]);
        assert_eq!(g("2A3~+2A1~"), vec![2, 4]);
    }

    #[test]
    fn a7_a1_has_cyclic_torsion() {
        // the only isotropic subgroup of order 4 in Z/8 + Z/2 is cyclic
        let g = mw_group(&"A7~+A1~".parse().unwrap()).unwrap();
        assert_eq!(g.invariant_factors, vec![4]);
        assert_eq!(g.isotropic_subgroups, 1);
    }

    #[test]
    fn infeasible_lists() {
        // det 7 * 3 = 21 is not a square
        let bad: FiberTypeList = "A6~+A2~".parse().unwrap();
        assert!(matches!(mw_group(&bad), Err(Error::Infeasible { .. })));
        // 8A1 embeds in E8 via the extended Hamming code: lattice-level feasible
        let h: FiberTypeList = "8A1~".parse().unwrap();
        assert_eq!(mw_group(&h).unwrap().invariant_factors, vec![2, 2, 2, 2]);
    }
}
