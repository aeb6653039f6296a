//! Fraction-free integer linear algebra over `i128`.
//!
//! Small dense matrices only; everything is exact. The Smith normal form
//! records the unimodular transforms so callers (and tests) can re-multiply
//! and confirm `u * m * v == diag`.

/// Dense integer matrix as rows of equal length.
pub type IMat = Vec<Vec<i128>>;

/// The `n x n` identity matrix.
pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Matrix product `a * b`.
pub fn mul(a: &IMat, b: &IMat) -> IMat {
    let (ra, ca) = dims(a);
    let (rb, cb) = dims(b);
    assert_eq!(ca, rb, "dimension mismatch in matrix product");
    let mut out = vec![vec![0i128; cb]; ra];
    for i in 0..ra {
        for k in 0..ca {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cb {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// `m` raised to the `k`-th power (`k >= 0`).
pub fn pow(m: &IMat, k: usize) -> IMat {
    let n = m.len();
    let mut acc = identity(n);
    for _ in 0..k {
        acc = mul(&acc, m);
    }
    acc
}

/// Transpose.
pub fn transpose(m: &IMat) -> IMat {
    let (r, c) = dims(m);
    (0..c).map(|j| (0..r).map(|i| m[i][j]).collect()).collect()
}

fn dims(m: &IMat) -> (usize, usize) {
    let r = m.len();
    let c = if r == 0 { 0 } else { m[0].len() };
    (r, c)
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det(m: &IMat) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(m: &IMat) -> usize {
    let (rows, cols) = dims(m);
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..rows {
            if a[i][c] != 0 {
                let (p, q) = (a[r][c], a[i][c]);
                for j in c..cols {
                    a[i][j] = a[i][j] * p - a[r][j] * q;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Characteristic polynomial of a square matrix by the Faddeev–LeVerrier
/// recurrence. Coefficients are returned highest degree first, so the result
/// always starts with 1 (monic, degree = n).
pub fn char_poly(m: &IMat) -> Vec<i128> {
    let n = m.len();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1i128);
    let mut acc = identity(n);
    for k in 1..=n {
        acc = mul(m, &acc);
        let tr: i128 = (0..n).map(|i| acc[i][i]).sum();
        assert_eq!(tr % k as i128, 0, "Faddeev-LeVerrier division must be exact");
        let c = -tr / k as i128;
        coeffs.push(c);
        for i in 0..n {
            acc[i][i] += c;
        }
    }
    coeffs
}

/// Smith normal form `u * m * v = d` with recorded unimodular transforms.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Full diagonal of the normal form (length = min(rows, cols)),
    /// nonnegative, each entry dividing the next.
    pub diag: Vec<i128>,
    /// Left transform (rows x rows, unimodular).
    pub u: IMat,
    /// Right transform (cols x cols, unimodular).
    pub v: IMat,
}

impl Smith {
    /// Re-multiplies the recorded transforms against `m` and checks the
    /// result is the recorded diagonal.
    pub fn verify(&self, m: &IMat) -> bool {
        let (rows, cols) = dims(m);
        let prod = mul(&mul(&self.u, m), &self.v);
        for i in 0..rows {
            for j in 0..cols {
                let want = if i == j && i < self.diag.len() {
                    self.diag[i]
                } else {
                    0
                };
                if prod[i][j] != want {
                    return false;
                }
            }
        }
        det(&self.u).abs() == 1 && det(&self.v).abs() == 1
    }
}

/// Computes the Smith normal form of an arbitrary integer matrix.
pub fn smith(m: &IMat) -> Smith {
    let (rows, cols) = dims(m);
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // Smallest nonzero entry of the trailing submatrix as pivot.
            let mut piv: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0
                        && piv.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        piv = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = piv else {
                // Trailing submatrix is zero; diagonal entries from t on are 0.
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    row_sub(&mut a, i, t, q);
                    row_sub(&mut u, i, t, q);
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    col_sub(&mut a, j, t, q);
                    col_sub(&mut v, j, t, q);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide every remaining entry to keep the
            // divisibility chain; if not, fold the offending row in and redo.
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if a[i][j] % a[t][t] != 0 {
                        row_add(&mut a, t, i);
                        row_add(&mut u, t, i);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    // Normalize signs on the diagonal by scaling columns of both a and v.
    for t in 0..k {
        if a[t][t] < 0 {
            for r in a.iter_mut() {
                r[t] = -r[t];
            }
            for r in v.iter_mut() {
                r[t] = -r[t];
            }
        }
    }
    let diag = (0..k).map(|t| a[t][t]).collect();
    Smith { diag, u, v }
}

fn swap_cols(m: &mut IMat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_sub(m: &mut IMat, dst: usize, src: usize, q: i128) {
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row) {
        *d -= q * s;
    }
}

fn row_add(m: &mut IMat, dst: usize, src: usize) {
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row) {
        *d += s;
    }
}

fn col_sub(m: &mut IMat, dst: usize, src: usize, q: i128) {
    for row in m.iter_mut() {
        row[dst] -= q * row[src];
    }
}

/// Basis of the integer kernel of a square matrix, read off the Smith form:
/// the columns of `v` matching zero diagonal entries.
pub fn kernel_basis(m: &IMat) -> Vec<Vec<i128>> {
    let n = m.len();
    let s = smith(m);
    let mut basis = Vec::new();
    for j in 0..n {
        let dj = if j < s.diag.len() { s.diag[j] } else { 0 };
        if dj == 0 {
            basis.push((0..n).map(|i| s.v[i][j]).collect());
        }
    }
    basis
}
