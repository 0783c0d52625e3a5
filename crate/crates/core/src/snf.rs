//! Smith normal form of small integer matrices, with unimodular transforms.

/// `u * a * v = d` with `d` diagonal, positive diagonal entries each dividing
/// the next, `u` and `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub d: Vec<Vec<i64>>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    /// Nonzero diagonal entries, in order.
    pub invariants: Vec<i64>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

struct Work {
    a: Vec<Vec<i64>>,
    u: Vec<Vec<i64>>,
    v: Vec<Vec<i64>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }
    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: i64) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(src) {
                *x -= q * y;
            }
        }
    }
    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: i64) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                r[i] -= q * r[j];
            }
        }
    }
    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -*x;
            }
        }
    }
}

pub fn smith(a: &[Vec<i64>]) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut w = Work { a: a.to_vec(), u: identity(rows), v: identity(cols) };
    let mut invariants = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| w.a[i][j] != 0)
            .min_by_key(|&(i, j)| w.a[i][j].abs())
        else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[i][t] != 0 {
                    let q = w.a[i][t].div_euclid(w.a[t][t]);
                    w.row_sub(i, t, q);
                    if w.a[i][t] != 0 {
                        w.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if w.a[t][j] != 0 {
                    let q = w.a[t][j].div_euclid(w.a[t][t]);
                    w.col_sub(j, t, q);
                    if w.a[t][j] != 0 {
                        w.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| w.a[i][j] % w.a[t][t] != 0));
            match bad {
                Some(i) => {
                    // row_t += row_i, then re-reduce
                    w.row_sub(t, i, -1);
                }
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
        invariants.push(w.a[t][t]);
    }
    Smith { d: w.a, u: w.u, v: w.v, invariants }
}

/// Inverse of a unimodular integer matrix via the adjugate-free route:
/// Gaussian elimination over `Q`, checked integral.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    use crate::linalg::{rref, to_matrix};
    use num_traits::ToPrimitive;
    let n = m.len();
    let mut aug = to_matrix(
        &m.iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| i64::from(i == j)));
                r
            })
            .collect::<Vec<_>>(),
    );
    let pivots = rref(&mut aug);
    assert_eq!(pivots, (0..n).collect::<Vec<_>>(), "matrix is singular");
    aug.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix is not unimodular");
                    x.to_integer().to_i64().expect("entry fits i64")
                })
                .collect()
        })
        .collect()
}
