//! Exact rank of small integer matrices.

use num_rational::Ratio;
use num_traits::Zero;

/// Rank over ℚ of the given rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Ratio<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Ratio::from_integer(v as i128)).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c];
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / pivot;
                for j in c..cols {
                    let v = m[r][j] * f;
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Whether two homogeneous systems define the same subspace.
pub fn same_span(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    if ra != rb {
        return false;
    }
    let both: Vec<Vec<i64>> = a.iter().chain(b.iter()).cloned().collect();
    rank(&both) == ra
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]), 2);
        assert_eq!(rank(&[vec![0, 0]]), 0);
        assert!(same_span(
            &[vec![1, 1, 0], vec![0, 1, 1]],
            &[vec![1, 2, 1], vec![1, 0, -1]]
        ));
        assert!(!same_span(&[vec![1, 0]], &[vec![0, 1]]));
    }
}
