//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use fpmc::blowup::{BlowupScript, Incidence, Seed, SurfaceState, Step};
use fpmc::linalg::{IntMatrix, IntSymMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::Rng;

/// Product of random elementary integer matrices (determinant +-1).
pub fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let mut e = IntMatrix::identity(n);
        if i == j {
            e.set(i, i, BigInt::from(-1));
        } else {
            e.set(i, j, BigInt::from(rng.gen_range(-2i64..=2)));
        }
        u = u.mul(&e);
    }
    u
}

pub fn congruent(g: &IntSymMatrix, u: &IntMatrix) -> Option<IntSymMatrix> {
    let n = g.dim();
    let gm = g.to_int_matrix();
    let ut = IntMatrix::from_fn(n, n, |i, j| u.get(j, i).clone());
    let p = ut.mul(&gm).mul(u);
    let rows: Option<Vec<Vec<i64>>> = (0..n)
        .map(|i| (0..n).map(|j| p.get(i, j).to_i64()).collect())
        .collect();
    IntSymMatrix::new(rows?).ok()
}

pub fn random_symmetric(rng: &mut StdRng, n: usize, lo: i64, hi: i64) -> IntSymMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(lo..=hi);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    IntSymMatrix::new(rows).unwrap()
}

/// Random non-degenerate 3x3 Gram matrix of curves: negative diagonal,
/// non-negative off-diagonal.
pub fn random_curve_gram3(rng: &mut StdRng) -> IntSymMatrix {
    loop {
        let mut rows = vec![vec![0i64; 3]; 3];
        for i in 0..3 {
            rows[i][i] = -rng.gen_range(1..=4);
            for j in (i + 1)..3 {
                let v = rng.gen_range(0..=5);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let g = IntSymMatrix::new(rows).unwrap();
        if !g.det().is_zero() {
            return g;
        }
    }
}

fn cross(a: &[i64], b: &[i64]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive3(v: [i64; 3]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    v.iter().map(|x| x / g.max(1)).collect()
}

/// Extreme rays of `{x in R^3 : a_i . x >= 0}` by checking every line cut out
/// by two of the planes.
pub fn rays3_oracle(ineqs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..ineqs.len() {
        for j in (i + 1)..ineqs.len() {
            let c = cross(&ineqs[i], &ineqs[j]);
            if c == [0, 0, 0] {
                continue;
            }
            for s in [1, -1] {
                let v = [s * c[0], s * c[1], s * c[2]];
                if ineqs.iter().all(|a| dot3(a, &v) >= 0) {
                    out.push(primitive3(v));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Facet normals of the cone spanned by `rays`, primitive and sorted.
pub fn facets3_oracle(rays: &[Vec<i64>]) -> Vec<Vec<i64>> {
    rays3_oracle(rays)
}

pub fn primitive_i64(v: &[i64]) -> Vec<i64> {
    primitive3([v[0], v[1], v[2]])
}

pub fn to_i64s(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

/// A random script that respects the incidence budget: a point is put on two
/// curves only if they still meet.
pub fn random_script(rng: &mut StdRng, steps: usize) -> BlowupScript {
    let seed = if rng.gen_bool(0.5) {
        Seed::Plane {
            lines: (0..rng.gen_range(1..=3)).map(|i| format!("L{i}")).collect(),
        }
    } else {
        Seed::Ruled {
            n: rng.gen_range(1..=3),
            g: rng.gen_range(0..=2),
            section: "C".into(),
            fibers: (0..rng.gen_range(1..=2)).map(|i| format!("F{i}")).collect(),
        }
    };
    let mut state = fpmc::blowup::seed_config(&seed).unwrap();
    let mut out = Vec::new();
    for k in 0..steps {
        let names: Vec<String> = state.curves.iter().map(|c| c.name.clone()).collect();
        let through = pick_incidences(rng, &state, &names);
        let name = format!("X{k}");
        state.blow_up(&name, &through).unwrap();
        out.push(Step { name, through });
    }
    BlowupScript {
        name: "random".into(),
        seed,
        steps: out,
        track: None,
    }
}

fn pick_incidences(rng: &mut StdRng, state: &SurfaceState, names: &[String]) -> Vec<Incidence> {
    let inc = |c: &str| Incidence { curve: c.into(), mult: 1 };
    match rng.gen_range(0..3) {
        0 => Vec::new(),
        1 => vec![inc(&names[rng.gen_range(0..names.len())])],
        _ => {
            let meeting: Vec<(usize, usize)> = (0..names.len())
                .flat_map(|i| ((i + 1)..names.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| {
                    let a = &state.curve(&names[i]).unwrap().class;
                    let b = &state.curve(&names[j]).unwrap().class;
                    state.product(a, b) >= 1
                })
                .collect();
            if meeting.is_empty() {
                vec![inc(&names[0])]
            } else {
                let (i, j) = meeting[rng.gen_range(0..meeting.len())];
                vec![inc(&names[i]), inc(&names[j])]
            }
        }
    }
}

/// Box search for classes with `-delta <= e.e < 0` and integral genus in
/// `[0, p_max]`, coordinates in `[-r, r]`.
pub fn bounded_classes_box(g: &IntSymMatrix, k: &[num_rational::BigRational], delta: i64, p_max: i64, r: i64) -> Vec<Vec<i64>> {
    use num_rational::BigRational;
    let n = g.dim();
    let mut out = Vec::new();
    let mut e = vec![-r; n];
    loop {
        let eb: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        let sq = g.bilinear(&eb, &eb).to_i64().unwrap();
        if (-delta..0).contains(&sq) {
            let ek: BigRational = (0..n)
                .map(|i| {
                    let ge: i64 = (0..n).map(|j| g.get(i, j) * e[j]).sum();
                    &k[i] * BigRational::from_integer(BigInt::from(ge))
                })
                .sum();
            let two = BigRational::from_integer(BigInt::from(2));
            let pa = (BigRational::from_integer(BigInt::from(sq)) + ek) / two
                + BigRational::from_integer(BigInt::from(1));
            if pa.is_integer() && !pa.is_negative() && pa <= BigRational::from_integer(BigInt::from(p_max)) {
                out.push(e.clone());
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if e[i] < r {
                e[i] += 1;
                e[i + 1..].iter_mut().for_each(|x| *x = -r);
                break;
            }
        }
    }
}

/// Orbit count of admissible 3x3 matrices without canonical forms: each
/// matrix contributes `|Stab| / 3!`. Admissibility is decided independently:
/// with a negative trace, `det > 0` is equivalent to signature `(1, 2)`.
pub fn naive_orbit_count3(delta: i64) -> (usize, usize) {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let bound = |a: i64, b: i64| {
        let rhs = 3844 * a * b;
        (0..).take_while(|c| 4 * c * c < rhs).last().unwrap()
    };
    let mut weighted = 0usize;
    let mut total = 0usize;
    for d0 in 1..=delta {
        for d1 in 1..=delta {
            for d2 in 1..=delta {
                for a in 0..=bound(d0, d1) {
                    for b in 0..=bound(d0, d2) {
                        for c in 0..=bound(d1, d2) {
                            let m = [[-d0, a, b], [a, -d1, c], [b, c, -d2]];
                            let connected = [a > 0, b > 0, c > 0].iter().filter(|x| **x).count() >= 2;
                            let det = -d0 * (d1 * d2 - c * c) - a * (-a * d2 - c * b) + b * (a * c + d1 * b);
                            if !connected || det <= 0 {
                                continue;
                            }
                            total += 1;
                            let stab = perms
                                .iter()
                                .filter(|p| (0..3).all(|i| (0..3).all(|j| m[p[i]][p[j]] == m[i][j])))
                                .count();
                            weighted += stab;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(weighted % 6, 0);
    (weighted / 6, total)
}
