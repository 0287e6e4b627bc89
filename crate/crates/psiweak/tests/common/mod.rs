#![allow(dead_code)] // each test target compiles its own view of this module

//! Brute-force oracles shared by the integration suites.
//!
//! Every oracle here is independent of the implementation path it checks:
//! the Prohorov oracle scans Borel subsets against an ε grid, the
//! bounded-Lipschitz and LP oracles enumerate polytope vertices by active
//! sets, the θ-norm oracle scans a dense α grid, and the min-cut oracle
//! enumerates node partitions.

use psiweak::measure::{DiscreteMeasure, GroundSpace, Point};
use psiweak::opt::{FlowNetwork, LinearProgram};
use psiweak::risk::Modulus;

/// Deterministic xorshift for reproducible random instances in tests.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Random probability weights of a given length (integer-lattice based so
/// they sum to one in floating point exactly enough for construction).
pub fn random_weights(rng: &mut TestRng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.range(0.05, 1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Random measure on the given support points.
pub fn random_measure_on(rng: &mut TestRng, support: &[f64]) -> DiscreteMeasure<f64> {
    let w = random_weights(rng, support.len());
    DiscreteMeasure::from_reals(
        &support
            .iter()
            .zip(w)
            .map(|(&x, w)| (x, w))
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

/// Random support of `k` points with pairwise separation at least `sep`.
pub fn separated_support(rng: &mut TestRng, k: usize, lo: f64, hi: f64, sep: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = Vec::with_capacity(k);
    while pts.len() < k {
        let x = rng.range(lo, hi);
        if pts.iter().all(|p| (p - x).abs() >= sep) {
            pts.push(x);
        }
    }
    pts
}

// ---------------------------------------------------------------------------
// Prohorov oracle: subsets × ε grid
// ---------------------------------------------------------------------------

/// Smallest grid multiple of `step` satisfying the hull inequality
/// `μ(B) ≤ ν(B^ε) + ε` over all support subsets `B`, in both directions.
/// The hull is open (`d < ε`), matching the distance definition.
pub fn prohorov_grid_oracle(
    mu: &DiscreteMeasure<f64>,
    nu: &DiscreteMeasure<f64>,
    space: &GroundSpace<f64>,
    step: f64,
) -> f64 {
    let holds = |eps: f64| -> bool {
        directed_holds(mu, nu, space, eps) && directed_holds(nu, mu, space, eps)
    };

    let max_k = (1.0 / step).ceil() as u64 + 1;
    // predicate is monotone in ε
    let mut lo = 0u64;
    let mut hi = max_k;
    debug_assert!(holds(hi as f64 * step));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if holds(mid as f64 * step) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo as f64 * step
}

fn directed_holds(
    mu: &DiscreteMeasure<f64>,
    nu: &DiscreteMeasure<f64>,
    space: &GroundSpace<f64>,
    eps: f64,
) -> bool {
    let k = mu.support_size();
    assert!(k <= 16, "subset oracle needs tiny supports");
    for mask in 1u32..(1 << k) {
        let mut mu_b = 0.0;
        for (i, (_, v)) in mu.atoms().iter().enumerate() {
            if mask & (1 << i) != 0 {
                mu_b += v;
            }
        }
        let mut nu_hull = 0.0;
        for (q, w) in nu.atoms() {
            let inside = mu.atoms().iter().enumerate().any(|(i, (p, _))| {
                mask & (1 << i) != 0 && space.distance(p, q).unwrap() < eps
            });
            if inside {
                nu_hull += w;
            }
        }
        if mu_b > nu_hull + eps + 1e-14 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Bounded-Lipschitz oracle: exact vertex enumeration
// ---------------------------------------------------------------------------

/// Exact supremum of `Σ cᵢ fᵢ` over the witness polytope
/// `{ |fᵢ| ≤ s, |fᵢ - fⱼ| ≤ L·dᵢⱼ, s + L ≤ 1, s, L ≥ 0 }` by brute-force
/// enumeration of active constraint sets (polytope vertices). Exact up to
/// linear-solve rounding, so far sharper than a value grid.
pub fn bl_vertex_oracle(
    mu: &DiscreteMeasure<f64>,
    nu: &DiscreteMeasure<f64>,
    space: &GroundSpace<f64>,
) -> f64 {
    // signed union support
    let mut pts: Vec<(Point<f64>, f64)> = mu.atoms().to_vec();
    pts.extend(nu.atoms().iter().map(|&(p, w)| (p, -w)));
    pts.sort_by(|(p, _), (q, _)| match (p, q) {
        (Point::Real(a), Point::Real(b)) => a.partial_cmp(b).unwrap(),
        _ => std::cmp::Ordering::Equal,
    });
    let mut union: Vec<(f64, f64)> = Vec::new();
    for (p, w) in pts {
        let x = match p {
            Point::Real(x) => x,
            Point::Label(_) => panic!("oracle is real-line only"),
        };
        match union.last_mut() {
            Some((q, v)) if (*q - x).abs() <= 1e-12 => *v += w,
            _ => union.push((x, w)),
        }
    }
    union.retain(|(_, w)| *w != 0.0);
    let m = union.len();
    if m == 0 {
        return 0.0;
    }
    assert!(m <= 4, "vertex oracle sized for unions of at most 4 atoms");

    // Constraints as rows (a, b): a·z ≤ b over z = (f_1..f_m, s, L).
    let nv = m + 2;
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..m {
        let mut r = vec![0.0; nv];
        r[i] = 1.0;
        r[m] = -1.0;
        rows.push((r.clone(), 0.0));
        r[i] = -1.0;
        rows.push((r, 0.0));
    }
    for i in 0..m {
        for j in i + 1..m {
            let d = space
                .distance(&Point::Real(union[i].0), &Point::Real(union[j].0))
                .unwrap();
            let mut r = vec![0.0; nv];
            r[i] = 1.0;
            r[j] = -1.0;
            r[m + 1] = -d;
            rows.push((r.clone(), 0.0));
            r[i] = -1.0;
            r[j] = 1.0;
            rows.push((r, 0.0));
        }
    }
    let mut budget = vec![0.0; nv];
    budget[m] = 1.0;
    budget[m + 1] = 1.0;
    rows.push((budget, 1.0));
    let mut s_nonneg = vec![0.0; nv];
    s_nonneg[m] = -1.0;
    rows.push((s_nonneg, 0.0));
    let mut l_nonneg = vec![0.0; nv];
    l_nonneg[m + 1] = -1.0;
    rows.push((l_nonneg, 0.0));

    let mut c = vec![0.0; nv];
    for (i, (_, w)) in union.iter().enumerate() {
        c[i] = *w;
    }

    let mut best = 0.0f64; // f = 0 is always feasible
    let n_rows = rows.len();
    let mut idx = vec![0usize; nv];
    enumerate_combinations(n_rows, nv, &mut idx, 0, 0, &mut |chosen| {
        let mut a = vec![vec![0.0; nv + 1]; nv];
        for (r, &ci) in chosen.iter().enumerate() {
            a[r][..nv].copy_from_slice(&rows[ci].0);
            a[r][nv] = rows[ci].1;
        }
        if let Some(z) = gauss_solve(&mut a) {
            let feasible = rows
                .iter()
                .all(|(row, b)| dot(row, &z) <= b + 1e-8);
            if feasible {
                let v = dot(&c, &z);
                if v > best {
                    best = v;
                }
            }
        }
    });
    best
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn enumerate_combinations(
    n: usize,
    k: usize,
    idx: &mut Vec<usize>,
    pos: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == k {
        f(idx);
        return;
    }
    for i in start..n {
        idx[pos] = i;
        enumerate_combinations(n, k, idx, pos + 1, i + 1, f);
    }
}

/// Solve the square augmented system in place; `None` when singular.
pub fn gauss_solve(a: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for j in col..=n {
                        a[row][j] -= f * a[col][j];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

// ---------------------------------------------------------------------------
// LP oracle: vertex enumeration for ≤ 4 variables
// ---------------------------------------------------------------------------

/// Maximum objective over all feasible basic solutions of an LP with
/// non-negative variables, found by enumerating active sets among the
/// inequality rows and the coordinate facets. `None` if no feasible vertex
/// exists.
pub fn lp_vertex_oracle(lp: &LinearProgram<f64>) -> Option<f64> {
    let n = lp.num_vars;
    assert!(n <= 4);
    let mut rows: Vec<(Vec<f64>, f64)> = lp
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs))
        .collect();
    for i in 0..n {
        let mut r = vec![0.0; n];
        r[i] = -1.0;
        rows.push((r, 0.0)); // x_i ≥ 0
    }
    let n_rows = rows.len();
    let mut best: Option<f64> = None;
    let mut idx = vec![0usize; n];
    enumerate_combinations(n_rows, n, &mut idx, 0, 0, &mut |chosen| {
        let mut a = vec![vec![0.0; n + 1]; n];
        for (r, &ci) in chosen.iter().enumerate() {
            a[r][..n].copy_from_slice(&rows[ci].0);
            a[r][n] = rows[ci].1;
        }
        if let Some(x) = gauss_solve(&mut a) {
            let feasible = rows.iter().all(|(row, b)| dot(row, &x) <= b + 1e-8);
            if feasible {
                let v = dot(&lp.objective, &x);
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
    });
    best
}

// ---------------------------------------------------------------------------
// Min-cut oracle: partition enumeration
// ---------------------------------------------------------------------------

/// Minimum cut capacity over all source/sink partitions (≤ 16 nodes).
pub fn min_cut_oracle(net: &FlowNetwork<f64>) -> f64 {
    let n = net.num_nodes;
    assert!(n <= 16);
    let free: Vec<usize> = (0..n)
        .filter(|&v| v != net.source && v != net.sink)
        .collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << free.len()) {
        let mut side = vec![false; n];
        side[net.source] = true;
        for (bit, &v) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                side[v] = true;
            }
        }
        let cut: f64 = net
            .edges()
            .iter()
            .filter(|(u, v, _)| side[*u] && !side[*v])
            .map(|(_, _, c)| *c)
            .sum();
        best = best.min(cut);
    }
    best
}

// ---------------------------------------------------------------------------
// θ-norm oracle: dense grid scan
// ---------------------------------------------------------------------------

/// First grid point `α = k·step` with `λ̂(α) < κ(α)`, scanning from zero.
pub fn theta_norm_grid_oracle(samples: &[f64], kappa: &Modulus<f64>, step: f64) -> f64 {
    let n = samples.len() as f64;
    let survival = |alpha: f64| samples.iter().filter(|&&d| d > alpha).count() as f64 / n;
    let max = samples.iter().cloned().fold(0.0f64, f64::max);
    let mut alpha = 0.0;
    while alpha <= max + 1.0 {
        if alpha > 0.0 && survival(alpha) < kappa.eval(alpha) {
            return alpha;
        }
        alpha += step;
    }
    alpha
}
