//! Exact Gaussian elimination over `Q`.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solution set of `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum AffineSolution {
    Unique(Vec<Rational>),
    /// `particular + span(directions)`, directions linearly independent.
    Family { particular: Vec<Rational>, directions: Vec<Vec<Rational>> },
    Inconsistent,
}

pub fn solve(a: &Matrix, b: &[Rational], unknowns: usize) -> AffineSolution {
    assert_eq!(a.len(), b.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), unknowns);
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&unknowns) {
        return AffineSolution::Inconsistent;
    }
    let mut particular = vec![Rational::zero(); unknowns];
    for (row, &c) in pivots.iter().enumerate() {
        particular[c] = aug[row][unknowns].clone();
    }
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return AffineSolution::Unique(particular);
    }
    let directions = free
        .iter()
        .map(|&f| {
            let mut d = vec![Rational::zero(); unknowns];
            d[f] = Rational::one();
            for (row, &c) in pivots.iter().enumerate() {
                d[c] = -aug[row][f].clone();
            }
            d
        })
        .collect();
    AffineSolution::Family { particular, directions }
}

pub fn to_matrix(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect()
}
