//! Small dense determinants: exact cofactor expansion and pivoted LU.

use crate::scalar::Real;

/// Permutations of 0..m with their signs.
pub fn permutations(m: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let m = used.len();
        if prefix.len() == m {
            let mut inv = 0;
            for i in 0..m {
                for j in i + 1..m {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..m {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Determinant by cofactor expansion along the first row, skipping entries
/// for which `is_zero` holds. Intended for m ≤ 5 over exact rings.
pub fn det_cofactor<R: Clone>(
    a: &[Vec<R>],
    zero: &R,
    is_zero: &dyn Fn(&R) -> bool,
    mul: &dyn Fn(&R, &R) -> R,
    add: &dyn Fn(&R, &R) -> R,
    neg: &dyn Fn(&R) -> R,
) -> R {
    let m = a.len();
    if m == 0 {
        return zero.clone();
    }
    if m == 1 {
        return a[0][0].clone();
    }
    let mut acc = zero.clone();
    for j in 0..m {
        if is_zero(&a[0][j]) {
            continue;
        }
        let minor: Vec<Vec<R>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let sub = det_cofactor(&minor, zero, is_zero, mul, add, neg);
        let t = mul(&a[0][j], &sub);
        acc = if j % 2 == 0 { add(&acc, &t) } else { add(&acc, &neg(&t)) };
    }
    acc
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_lu<T: Real>(mut a: Vec<Vec<T>>) -> T {
    let m = a.len();
    let mut det = T::one();
    for c in 0..m {
        let p = (c..m).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        if a[p][c] == T::zero() {
            return T::zero();
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * a[c][c];
        for r in c + 1..m {
            let f = a[r][c] / a[c][c];
            for k in c..m {
                let v = a[c][k];
                a[r][k] = a[r][k] - f * v;
            }
        }
    }
    det
}

/// Solves `a·x = b` with partial pivoting; `None` when singular.
pub fn solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let m = a.len();
    for c in 0..m {
        let p = (c..m).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())?;
        if a[p][c] == T::zero() {
            return None;
        }
        a.swap(p, c);
        b.swap(p, c);
        for r in c + 1..m {
            let f = a[r][c] / a[c][c];
            for k in c..m {
                let v = a[c][k];
                a[r][k] = a[r][k] - f * v;
            }
            let v = b[c];
            b[r] = b[r] - f * v;
        }
    }
    let mut x = vec![T::zero(); m];
    for r in (0..m).rev() {
        let mut s = b[r];
        for k in r + 1..m {
            s = s - a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<i64>(), 0);
    }

    #[test]
    fn cofactor_matches_lu() {
        let a = vec![vec![2.0, -1.0, 0.5], vec![1.0, 3.0, 2.0], vec![0.0, 4.0, -2.0]];
        let exact = det_cofactor(&a, &0.0, &|v: &f64| *v == 0.0, &|x, y| x * y, &|x, y| x + y, &|x| -x);
        assert!((exact - det_lu(a.clone())).abs() < 1e-12);
        let x = solve(a.clone(), vec![1.0, 2.0, 3.0]).unwrap();
        for (row, b) in a.iter().zip([1.0, 2.0, 3.0]) {
            let s: f64 = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert!((s - b).abs() < 1e-12);
        }
    }
}
