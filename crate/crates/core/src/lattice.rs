//! Dense integer matrices: Hermite and Smith normal forms with their
//! unimodular transforms, integer left kernels and sublattice indices.
//!
//! Matrices are row-major `Vec<Vec<BigInt>>`; lattices are spanned by rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigInt], m: &Matrix) -> Vec<BigInt> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| v.iter().zip(m).map(|(x, row)| x * &row[j]).sum()).collect()
}

fn row_axpy(m: &mut Matrix, target: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (a, b) = m.split_at_mut(src);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = m.split_at_mut(target);
        (&mut b[0], &a[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x += k * y;
    }
}

fn col_axpy(m: &mut Matrix, target: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let add = k * &row[src];
        row[target] += add;
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u·a = h`, `u`
/// unimodular, `h` in row echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hnf_with_transform(a: &Matrix, cols: usize) -> (Matrix, Matrix) {
    let m = a.len();
    let mut h = a.clone();
    let mut u = identity(m);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == m {
            break;
        }
        // gcd-eliminate column `col` below pivot_row
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m {
                if !h[r][col].is_zero()
                    && best.map_or(true, |b| h[r][col].abs() < h[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..m {
                if h[r][col].is_zero() {
                    continue;
                }
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                let nq = -q;
                row_axpy(&mut h, r, pivot_row, &nq);
                row_axpy(&mut u, r, pivot_row, &nq);
                if !h[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m && !h[pivot_row][col].is_zero() {
            if h[pivot_row][col].is_negative() {
                for x in h[pivot_row].iter_mut() {
                    *x = -&*x;
                }
                for x in u[pivot_row].iter_mut() {
                    *x = -&*x;
                }
            }
            for r in 0..pivot_row {
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                let nq = -q;
                row_axpy(&mut h, r, pivot_row, &nq);
                row_axpy(&mut u, r, pivot_row, &nq);
            }
            pivot_row += 1;
        }
    }
    (h, u)
}

pub fn is_zero_row(row: &[BigInt]) -> bool {
    row.iter().all(Zero::is_zero)
}

/// Basis of the left kernel `{x : x·a = 0}`.
pub fn left_kernel(a: &Matrix, cols: usize) -> Matrix {
    let (h, u) = hnf_with_transform(a, cols);
    h.iter()
        .zip(u)
        .filter(|(row, _)| is_zero_row(row))
        .map(|(_, urow)| urow)
        .collect()
}

/// Nonzero rows of the Hermite form: a basis of the row lattice.
pub fn row_basis(a: &Matrix, cols: usize) -> Matrix {
    hnf_with_transform(a, cols).0.into_iter().filter(|r| !is_zero_row(r)).collect()
}

pub fn rank(a: &Matrix, cols: usize) -> usize {
    row_basis(a, cols).len()
}

/// Smith normal form `u·a·v = d` with `d` diagonal, its nonzero entries
/// positive and each dividing the next. `v_inv` is kept alongside `v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub u: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

pub fn smith(a: &Matrix, cols: usize) -> Smith {
    let m = a.len();
    let n = cols;
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut v_inv = identity(n);

    // column op: col_t += k col_s  ⇒  v_inv row_s -= k row_t
    let col_op = |d: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, t: usize, s: usize, k: &BigInt| {
        col_axpy(d, t, s, k);
        col_axpy(v, t, s, k);
        let nk = -k;
        row_axpy(v_inv, s, t, &nk);
    };

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    if !d[r][c].is_zero()
                        && best.map_or(true, |(br, bc)| d[r][c].abs() < d[br][bc].abs())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return finish(d, u, v, v_inv, m, n);
            };
            d.swap(t, br);
            u.swap(t, br);
            if bc != t {
                swap_cols(&mut d, t, bc);
                swap_cols(&mut v, t, bc);
                v_inv.swap(t, bc);
            }
            let mut clean = true;
            for r in t + 1..m {
                if d[r][t].is_zero() {
                    continue;
                }
                let q = -d[r][t].div_floor(&d[t][t]);
                row_axpy(&mut d, r, t, &q);
                row_axpy(&mut u, r, t, &q);
                if !d[r][t].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..n {
                if d[t][c].is_zero() {
                    continue;
                }
                let q = -d[t][c].div_floor(&d[t][t]);
                col_op(&mut d, &mut v, &mut v_inv, c, t, &q);
                if !d[t][c].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let mut bad_row = None;
            'scan: for r in t + 1..m {
                for c in t + 1..n {
                    if !d[r][c].is_multiple_of(&d[t][t]) {
                        bad_row = Some(r);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(r) => {
                    let one = BigInt::one();
                    row_axpy(&mut d, t, r, &one);
                    row_axpy(&mut u, t, r, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    finish(d, u, v, v_inv, m, n)
}

fn finish(d: Matrix, u: Matrix, v: Matrix, v_inv: Matrix, m: usize, n: usize) -> Smith {
    let diagonal = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    Smith { diagonal, u, v, v_inv }
}

/// Invariant structure of the abelian group `Z^cols / rowspace(a)`:
/// `(free rank, invariant factors > 1 in divisibility order)`.
pub fn abelian_invariants(a: &Matrix, cols: usize) -> (usize, Vec<BigInt>) {
    let s = smith(a, cols);
    let nonzero: Vec<BigInt> = s.diagonal.iter().filter(|x| !x.is_zero()).cloned().collect();
    let free = cols - nonzero.len();
    let torsion = nonzero.into_iter().filter(|x| !x.is_one()).collect();
    (free, torsion)
}

/// Index `[outer : inner]` of two row lattices of equal rank with
/// `inner ⊆ outer`; `None` when the ranks differ (infinite index).
pub fn sublattice_index(outer: &Matrix, inner: &Matrix, cols: usize) -> Option<BigInt> {
    let det = |a: &Matrix| -> (usize, BigInt) {
        let diag = smith(a, cols).diagonal;
        let nz: Vec<BigInt> = diag.into_iter().filter(|x| !x.is_zero()).collect();
        (nz.len(), nz.iter().product())
    };
    let (ro, do_) = det(outer);
    let (ri, di) = det(inner);
    (ro == ri).then(|| di / do_)
}
