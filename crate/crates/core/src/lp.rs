//! Exact linear programming over rationals.
//!
//! Two-phase dense simplex with Bland's rule (so it terminates on degenerate
//! problems), plus enumeration of basic feasible solutions for small
//! polytopes. Problems here have a few dozen rows at most.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Outcome {
    Infeasible,
    Unbounded,
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
}

struct Tableau {
    /// `rows[i]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs followed by minus the objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    enterable: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let factor = self.cost[c].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations; `false` when the objective is unbounded.
    fn optimize(&mut self) -> bool {
        let rhs = self.width();
        loop {
            let Some(enter) = (0..self.enterable).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Minimizes `cost . x` subject to `a x = b`, `x >= 0`. With `cost = None`
/// only feasibility is decided (the returned value is zero).
pub(crate) fn minimize(cost: Option<&[Rational]>, a: &[Vec<Rational>], b: &[Rational]) -> Outcome {
    let m = a.len();
    let n = a
        .first()
        .map_or_else(|| cost.map_or(0, <[Rational]>::len), Vec::len);
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Phase one: artificial columns n..n+m, minimize their sum.
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let negate = bi.is_negative();
        let mut r: Vec<Rational> = Vec::with_capacity(width + 1);
        r.extend(row.iter().map(|v| if negate { -v } else { v.clone() }));
        r.extend((0..m).map(|j| {
            if j == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        }));
        r.push(if negate { -bi } else { bi.clone() });
        rows.push(r);
    }
    let mut phase_one_cost = vec![Rational::zero(); width + 1];
    for r in &rows {
        for j in (0..n).chain(std::iter::once(width)) {
            phase_one_cost[j] -= &r[j];
        }
    }
    let mut t = Tableau {
        rows,
        cost: phase_one_cost,
        basis: (n..n + m).collect(),
        enterable: n,
    };
    t.optimize();
    if !t.cost[width].is_zero() {
        return Outcome::Infeasible;
    }

    // Drive remaining artificial variables out of the basis, dropping rows
    // that turn out to be redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut value = Rational::zero();
    if let Some(c) = cost {
        let mut reduced = vec![Rational::zero(); width + 1];
        reduced[..n].clone_from_slice(c);
        for (row, &bv) in t.rows.iter().zip(&t.basis) {
            let cb = &c[bv];
            if cb.is_zero() {
                continue;
            }
            for j in (0..n).chain(std::iter::once(width)) {
                reduced[j] -= cb * &row[j];
            }
        }
        t.cost = reduced;
        if !t.optimize() {
            return Outcome::Unbounded;
        }
        value = -t.cost[width].clone();
    }

    let mut point = vec![Rational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            point[bv] = row[width].clone();
        }
    }
    Outcome::Optimal { value, point }
}

pub(crate) fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    match minimize(None, a, b) {
        Outcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

/// Whether `point` is a convex combination of `generators`.
pub(crate) fn in_convex_hull(point: &[Rational], generators: &[&[Rational]]) -> bool {
    if generators.is_empty() {
        return false;
    }
    let dim = point.len();
    // Coordinates equal across the point and every generator impose nothing
    // beyond the convexity row.
    let active: Vec<usize> = (0..dim)
        .filter(|&d| generators.iter().any(|g| g[d] != point[d]))
        .collect();
    if active.is_empty() {
        return true;
    }
    let mut a: Vec<Vec<Rational>> = active
        .iter()
        .map(|&d| generators.iter().map(|g| g[d].clone()).collect())
        .collect();
    let mut b: Vec<Rational> = active.iter().map(|&d| point[d].clone()).collect();
    a.push(vec![Rational::from_integer(1.into()); generators.len()]);
    b.push(Rational::from_integer(1.into()));
    feasible(&a, &b).is_some()
}

/// Reduced row echelon form of `[a | b]`; returns the independent rows, or
/// `None` when the system is inconsistent.
fn independent_rows(
    a: &[Vec<Rational>],
    b: &[Rational],
) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let n = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            r.iter()
                .cloned()
                .chain(std::iter::once(bi.clone()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pv = rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v /= &pv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pr;
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    rows.truncate(rank);
    let b = rows.iter_mut().map(|r| r.pop().unwrap()).collect();
    Some((rows, b))
}

/// Solves the square system `m x = rhs`; `None` when singular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = m.len();
    for col in 0..k {
        let p = (col..k).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        rhs.swap(col, p);
        let pv = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &pv;
        }
        rhs[col] /= &pv;
        let pivot_row = m[col].clone();
        let pivot_rhs = rhs[col].clone();
        for i in 0..k {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for (v, pr) in m[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * pr;
                }
                rhs[i] -= &f * &pivot_rhs;
            }
        }
    }
    Some(rhs)
}

/// Every basic feasible solution of `a x = b`, `x >= 0`: the vertices of
/// that polyhedron. Exponential in the number of columns; callers keep the
/// systems small.
pub(crate) fn basic_feasible_solutions(a: &[Vec<Rational>], b: &[Rational]) -> Vec<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let Some((rows, rhs)) = independent_rows(a, b) else {
        return Vec::new();
    };
    let rank = rows.len();
    if rank == 0 {
        // Only x = 0 is basic; feasible since b is consistent.
        return vec![vec![Rational::zero(); n]];
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for cols in (0..n).combinations(rank) {
        let m: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        let Some(xb) = solve_square(m, rhs.clone()) else {
            continue;
        };
        if xb.iter().any(Signed::is_negative) {
            continue;
        }
        let mut x = vec![Rational::zero(); n];
        for (&c, v) in cols.iter().zip(xb) {
            x[c] = v;
        }
        out.push(x);
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn solves_small_program() {
        // min -x - y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![v(&[1, 2, 1, 0]), v(&[3, 1, 0, 1])];
        let b = v(&[4, 6]);
        match minimize(Some(&v(&[-1, -1, 0, 0])), &a, &b) {
            Outcome::Optimal { value, point } => {
                assert_eq!(value, ratio(-14, 5));
                assert_eq!(point[0], ratio(8, 5));
                assert_eq!(point[1], ratio(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let a = vec![v(&[1, 1])];
        assert_eq!(minimize(None, &a, &v(&[-1])), Outcome::Infeasible);
        let a = vec![v(&[1, -1])];
        assert_eq!(
            minimize(Some(&v(&[-1, 0])), &a, &v(&[0])),
            Outcome::Unbounded
        );
    }

    #[test]
    fn handles_redundant_rows() {
        let a = vec![v(&[1, 1, 0]), v(&[2, 2, 0]), v(&[0, 0, 1])];
        let b = v(&[1, 2, 3]);
        match minimize(Some(&v(&[1, 0, 0])), &a, &b) {
            Outcome::Optimal { value, point } => {
                assert_eq!(value, int(0));
                assert_eq!(point, v(&[0, 1, 3]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn convex_hull_membership() {
        let a = v(&[1, 0]);
        let b = v(&[0, 1]);
        let mid = vec![ratio(1, 2), ratio(1, 2)];
        assert!(in_convex_hull(&mid, &[&a, &b]));
        assert!(!in_convex_hull(&a, &[&b]));
        assert!(in_convex_hull(&a, &[&a]));
        assert!(!in_convex_hull(&[int(2), int(-1)], &[&a, &b]));
    }

    #[test]
    fn enumerates_simplex_vertices() {
        let a = vec![v(&[1, 1, 1])];
        let verts = basic_feasible_solutions(&a, &v(&[1]));
        assert_eq!(verts, vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
        assert!(basic_feasible_solutions(&[v(&[1, 1]), v(&[1, 1])], &v(&[1, 2])).is_empty());
    }
}
