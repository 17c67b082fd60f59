//! Symplectic vectors of Pauli terms and row reduction over Z_p.

use crate::pauli::PauliTerm;

/// `(x_1..x_n, z_1..z_n)` over the given site order.
pub fn vector(t: &PauliTerm, sites: &[String]) -> Vec<u32> {
    let mut v = vec![0; 2 * sites.len()];
    for (i, s) in sites.iter().enumerate() {
        let (x, z) = t.power(s);
        v[i] = x;
        v[sites.len() + i] = z;
    }
    v
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&i| (i as u64 * a as u64) % p as u64 == 1).expect("modulus must be prime")
}

/// Rank of the rows over Z_p (p prime).
pub fn rank_mod(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = (*x as u64 * inv as u64 % p as u64) as u32;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] as u64;
                for k in 0..cols {
                    let sub = f * m[rank][k] as u64 % p as u64;
                    m[r][k] = ((m[r][k] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn rank(terms: &[PauliTerm], sites: &[String]) -> usize {
    let Some(first) = terms.first() else { return 0 };
    let rows: Vec<Vec<u32>> = terms.iter().map(|t| vector(t, sites)).collect();
    rank_mod(&rows, first.modulus())
}

/// Solve `Σ c_i rows_i = target` over GF(2); returns the coefficients.
pub fn solve_gf2(rows: &[Vec<u32>], target: &[u32]) -> Option<Vec<u32>> {
    let n = rows.len();
    let cols = target.len();
    // augmented transpose: unknowns are the row coefficients
    let mut a: Vec<Vec<u8>> = (0..cols)
        .map(|c| {
            let mut r: Vec<u8> = rows.iter().map(|row| (row[c] % 2) as u8).collect();
            r.push((target[c] % 2) as u8);
            r
        })
        .collect();
    let mut pivots = vec![];
    let mut row = 0;
    for c in 0..n {
        let Some(p) = (row..cols).find(|&r| a[r][c] == 1) else { continue };
        a.swap(row, p);
        for r in 0..cols {
            if r != row && a[r][c] == 1 {
                let src = a[row].clone();
                for (x, y) in a[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if a[row..].iter().any(|r| r[n] == 1) {
        return None;
    }
    let mut sol = vec![0u32; n];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = a[i][n] as u32;
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_three() {
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        // second row is 2 × first mod 3
        assert_eq!(rank_mod(&rows, 3), 2);
        assert_eq!(rank_mod(&rows, 5), 3);
    }

    #[test]
    fn gf2_solve() {
        let rows = vec![vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(solve_gf2(&rows, &[1, 0, 1]), Some(vec![1, 1]));
        assert_eq!(solve_gf2(&rows, &[1, 0, 0]), None);
    }
}
