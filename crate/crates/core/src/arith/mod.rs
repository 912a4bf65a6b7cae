//! Exact scalar and polynomial kernel. No floating point is used by the engine.

pub mod poly;
pub mod rat;

pub use poly::{poly_arith, Poly, PolyOp, PolyOpResult};
pub use rat::Rat;

/// Solves `m * v = rhs` exactly; `None` when inconsistent. Free variables are set to zero.
pub fn solve_linear(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| row.iter().cloned().chain(std::iter::once(r.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut out = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = a[i][cols].clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_overdetermined_consistent_system() {
        let m = vec![
            vec![Rat::int(1), Rat::int(1)],
            vec![Rat::int(1), Rat::int(-1)],
            vec![Rat::int(2), Rat::int(0)],
        ];
        let v = solve_linear(&m, &[Rat::int(3), Rat::int(1), Rat::int(4)]).unwrap();
        assert_eq!(v, vec![Rat::int(2), Rat::int(1)]);
        assert!(solve_linear(&m, &[Rat::int(3), Rat::int(1), Rat::int(5)]).is_none());
    }
}
