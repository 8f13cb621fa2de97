//! Jordan forms of explicit matrices over Q(i), for checking the
//! combinatorial tensor and exterior rules.

use std::collections::BTreeSet;

use katz_forge::jordan::JordanData;
use katz_forge::scalars::Eigenvalue;
use num::complex::Complex;
use num::{BigRational, One, Zero};

pub type Q = Complex<BigRational>;
pub type Matrix = Vec<Vec<Q>>;

/// Eigenvalues allowed in the oracle: 1, -1, i and the symbol l.
pub fn pool() -> Vec<Eigenvalue> {
    vec![
        Eigenvalue::one(),
        Eigenvalue::minus_one(),
        Eigenvalue::root_of_unity(1, 4),
        Eigenvalue::symbol("l"),
    ]
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// i^(4t) * 2^k for t the torsion part and k the exponent of l; injective on
/// the products of pool elements.
pub fn numeric(e: &Eigenvalue) -> Q {
    let t = e.torsion() * rat(4);
    assert!(t.is_integer(), "torsion {} outside mu_4", e);
    let quarter: i64 = t.to_integer().try_into().unwrap();
    let mut z = Q::new(BigRational::one(), BigRational::zero());
    let i = Q::new(BigRational::zero(), BigRational::one());
    for _ in 0..quarter.rem_euclid(4) {
        z = z * i.clone();
    }
    for (name, k) in e.word() {
        assert_eq!(name, "l");
        assert!(k.is_integer());
        let k: i64 = k.to_integer().try_into().unwrap();
        let two = if k >= 0 { rat(2) } else { BigRational::new(1.into(), 2.into()) };
        for _ in 0..k.abs() {
            z = z * Q::new(two.clone(), BigRational::zero());
        }
    }
    z
}

pub fn matrix(j: &JordanData) -> Matrix {
    let n = j.rank();
    let mut m = vec![vec![Q::zero(); n]; n];
    let mut at = 0;
    for (l, b) in j.blocks() {
        let v = numeric(l);
        for k in 0..*b as usize {
            m[at + k][at + k] = v.clone();
            if k + 1 < *b as usize {
                m[at + k][at + k + 1] = Q::one();
            }
        }
        at += *b as usize;
    }
    m
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![Q::zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j].clone() * b[k][l].clone();
                }
            }
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn det(mut m: Matrix) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|r| !m[*r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d = d * m[c][c].clone();
        for r in c + 1..n {
            let f = m[r][c].clone() / m[c][c].clone();
            for k in c..n {
                let x = f.clone() * m[c][k].clone();
                m[r][k] = m[r][k].clone() - x;
            }
        }
    }
    d
}

/// Matrix of the k-th exterior power on the basis of k-subsets.
pub fn exterior(a: &Matrix, k: usize) -> Matrix {
    let idx = subsets(a.len(), k);
    idx.iter()
        .map(|rows| idx.iter().map(|cols| det(rows.iter().map(|r| cols.iter().map(|c| a[*r][*c].clone()).collect()).collect())).collect())
        .collect()
}

fn rank(mut m: Matrix) -> usize {
    let n = m.len();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|i| !m[*i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / m[r][c].clone();
            for k in c..n {
                let x = f.clone() * m[r][k].clone();
                m[i][k] = m[i][k].clone() - x;
            }
        }
        r += 1;
    }
    r
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |s, k| s + a[i][k].clone() * b[k][j].clone())).collect())
        .collect()
}

/// Jordan form of `a`, whose eigenvalues all lie among `candidates`.
pub fn jordan_form(a: &Matrix, candidates: &BTreeSet<Eigenvalue>) -> JordanData {
    let n = a.len();
    let mut blocks = Vec::new();
    for e in candidates {
        let mu = numeric(e);
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = row[i].clone() - mu.clone();
        }
        // ranks of powers until they stabilize
        let mut ranks = vec![n];
        let mut power = shifted.clone();
        loop {
            let r = rank(power.clone());
            if r == *ranks.last().unwrap() {
                break;
            }
            ranks.push(r);
            power = mul(&power, &shifted);
        }
        // number of blocks of size >= k is ranks[k-1] - ranks[k]
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        for k in 1..=at_least.len() {
            let bigger = at_least.get(k).copied().unwrap_or(0);
            for _ in 0..at_least[k - 1] - bigger {
                blocks.push((e.clone(), k as u32));
            }
        }
    }
    let out = JordanData::new(blocks);
    assert_eq!(out.rank(), n, "eigenvalue outside the candidates");
    out
}

/// Every Jordan datum of rank n with eigenvalues from the oracle pool.
pub fn all_types(n: usize) -> Vec<JordanData> {
    fn rec(rem: usize, start: usize, pool: &[Eigenvalue], cur: &mut Vec<(Eigenvalue, u32)>, out: &mut BTreeSet<JordanData>) {
        if rem == 0 {
            out.insert(JordanData::new(cur.clone()));
            return;
        }
        for i in start..pool.len() {
            for b in 1..=rem {
                cur.push((pool[i].clone(), b as u32));
                rec(rem - b, i, pool, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(n, 0, &pool(), &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

fn products(j: &JordanData, k: usize) -> BTreeSet<Eigenvalue> {
    let eigs: Vec<Eigenvalue> = j
        .blocks()
        .iter()
        .flat_map(|(l, b)| std::iter::repeat(l.clone()).take(*b as usize))
        .collect();
    subsets(eigs.len(), k)
        .into_iter()
        .map(|s| s.iter().fold(Eigenvalue::one(), |acc, i| acc.mul(&eigs[*i])))
        .collect()
}

/// Compare `tensor` with the Kronecker product; returns the number of pairs.
pub fn check_tensor(max_rank: usize, max_product: usize) -> Result<usize, String> {
    let types: Vec<JordanData> = (1..=max_rank).flat_map(all_types).collect();
    let mut count = 0;
    for a in &types {
        for b in &types {
            if a.rank() > b.rank() || a.rank() * b.rank() > max_product {
                continue;
            }
            let cands: BTreeSet<Eigenvalue> =
                products(a, 1).iter().flat_map(|x| products(b, 1).into_iter().map(move |y| x.mul(&y))).collect();
            let want = jordan_form(&kron(&matrix(a), &matrix(b)), &cands);
            if a.tensor(b) != want {
                return Err(format!("{} (x) {}: rule {} vs matrix {}", a, b, a.tensor(b), want));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Compare `exterior(k)` with the matrix of minors for all k.
pub fn check_exterior(max_rank: usize) -> Result<usize, String> {
    let mut count = 0;
    for n in 1..=max_rank {
        for a in all_types(n) {
            for k in 1..=n {
                let want = jordan_form(&exterior(&matrix(&a), k), &products(&a, k));
                let got = a.exterior(k).map_err(|e| e.to_string())?;
                if got != want {
                    return Err(format!("L^{} {}: rule {} vs matrix {}", k, a, got, want));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}
