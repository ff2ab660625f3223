//! Shipped generator data: Weyl groups from Cartan matrices, non-crystallographic
//! Coxeter groups from Coxeter matrices, K5 from a Hermitian root Gram matrix,
//! and standard generators for G(r, p, n).
//!
//! All generators act on the basis of simple roots: the reflection in root i
//! sends root j to `α_j − c_ij α_i`.

use crate::cyclo::Cyclotomic;
use crate::linalg::Matrix;

use super::spec::GroupSpec;

/// Reflection matrices `s_i(e_j) = e_j − c[i][j] e_i` for a "Cartan-like" matrix `c`.
pub fn root_reflections(c: &[Vec<Cyclotomic>]) -> Vec<Matrix> {
    let n = c.len();
    (0..n)
        .map(|i| {
            let cols: Vec<Vec<Cyclotomic>> = (0..n)
                .map(|j| {
                    let mut v = vec![Cyclotomic::zero(); n];
                    v[j] = Cyclotomic::one();
                    v[i] = &v[i] - &c[i][j];
                    v
                })
                .collect();
            Matrix::from_columns(&cols)
        })
        .collect()
}

fn int_matrix(a: Vec<Vec<i64>>) -> Vec<Vec<Cyclotomic>> {
    a.into_iter().map(|r| r.into_iter().map(Cyclotomic::from_i64).collect()).collect()
}

/// Cartan matrix from a list of edges `(i, j, a_ij, a_ji)`.
fn cartan(n: usize, edges: &[(usize, usize, i64, i64)]) -> Vec<Vec<Cyclotomic>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j, aij, aji) in edges {
        a[i][j] = aij;
        a[j][i] = aji;
    }
    int_matrix(a)
}

fn chain(n: usize) -> Vec<(usize, usize, i64, i64)> {
    (1..n).map(|i| (i - 1, i, -1, -1)).collect()
}

pub fn weyl(family: char, n: usize) -> Option<Vec<Matrix>> {
    let c = match (family, n) {
        ('A', n) if n >= 1 => cartan(n, &chain(n)),
        ('B', n) | ('C', n) if n >= 2 => {
            let mut e = chain(n - 1);
            e.push((n - 2, n - 1, -1, -2));
            cartan(n, &e)
        }
        ('D', n) if n >= 4 => {
            let mut e = chain(n - 1);
            e.push((n - 3, n - 1, -1, -1));
            cartan(n, &e)
        }
        ('E', n @ 6..=8) => {
            // 1-3-4-5-…, with 2 attached to 4 (0-based: 0-2-3-4-…, 1-3)
            let mut e = vec![(0, 2, -1, -1), (1, 3, -1, -1)];
            e.extend((2..n - 1).map(|i| (i, i + 1, -1, -1)));
            cartan(n, &e)
        }
        ('F', 4) => cartan(4, &[(0, 1, -1, -1), (1, 2, -1, -2), (2, 3, -1, -1)]),
        ('G', 2) => cartan(2, &[(0, 1, -1, -3)]),
        _ => return None,
    };
    Some(root_reflections(&c))
}

/// Coxeter group from a Coxeter matrix: `c_ij = −2cos(π/m_ij)`, which lies in ℚ(ζ_{2m}).
pub fn coxeter(m: &[Vec<u32>]) -> Vec<Matrix> {
    let n = m.len();
    let c: Vec<Vec<Cyclotomic>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Cyclotomic::from_i64(2)
                    } else {
                        let k = m[i][j];
                        let z = Cyclotomic::root_of_unity(1, 2 * k);
                        -(&z + &Cyclotomic::root_of_unity(-1, 2 * k))
                    }
                })
                .collect()
        })
        .collect();
    root_reflections(&c)
}

fn coxeter_chain(labels: &[u32]) -> Vec<Vec<u32>> {
    let n = labels.len() + 1;
    let mut m = vec![vec![2u32; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for (i, &l) in labels.iter().enumerate() {
        m[i][i + 1] = l;
        m[i + 1][i] = l;
    }
    m
}

/// Generators of K5 = G_33: reflections of order 2 in five Eisenstein roots
/// with Hermitian Gram matrix `g` (diagonal 2). The reflection in root i sends
/// root j to `α_j − g[j][i] α_i`.
pub fn k5() -> Vec<Matrix> {
    let w = Cyclotomic::root_of_unity(1, 3);
    let one = Cyclotomic::one();
    let mut g = vec![vec![Cyclotomic::zero(); 5]; 5];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = Cyclotomic::from_i64(2);
    }
    let edges = [(0, 1, -&one), (1, 2, -&w), (2, 3, -&one), (3, 1, -&one), (3, 4, -&one)];
    for (i, j, v) in edges {
        g[j][i] = v.complex_conjugate();
        g[i][j] = v;
    }
    // transpose so that c[i][j] = g[j][i]
    let c: Vec<Vec<Cyclotomic>> =
        (0..5).map(|i| (0..5).map(|j| g[j][i].clone()).collect()).collect();
    root_reflections(&c)
}

/// Standard generators of G(r, p, n).
pub fn monomial_generators(r: u32, p: u32, n: usize) -> Vec<Matrix> {
    let mut gens = Vec::new();
    let perm = |f: &dyn Fn(usize) -> (usize, i64)| {
        let cols: Vec<Vec<Cyclotomic>> = (0..n)
            .map(|k| {
                let (to, a) = f(k);
                let mut v = vec![Cyclotomic::zero(); n];
                v[to] = Cyclotomic::root_of_unity(a, r);
                v
            })
            .collect();
        Matrix::from_columns(&cols)
    };
    for i in 0..n.saturating_sub(1) {
        gens.push(perm(&|k| if k == i { (i + 1, 0) } else if k == i + 1 { (i, 0) } else { (k, 0) }));
    }
    if p < r {
        gens.push(perm(&|k| (k, if k == 0 { p as i64 } else { 0 })));
    }
    if p > 1 && n >= 2 {
        gens.push(perm(&|k| match k {
            0 => (1, 1),
            1 => (0, -1),
            _ => (k, 0),
        }));
    }
    gens
}

/// Parses shipped group names.
pub fn lookup(name: &str) -> Option<GroupSpec> {
    let name = name.trim();
    let upper = name.to_ascii_uppercase();
    if let Some(rest) = upper.strip_prefix("G(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<u32> = rest.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
        if let [r, p, n] = parts[..] {
            if r >= 1 && p >= 1 && r % p == 0 && n >= 1 {
                return Some(GroupSpec::monomial(r, p, n as usize));
            }
        }
        return None;
    }
    if let Some(rest) = upper.strip_prefix("I2(").and_then(|s| s.strip_suffix(')')) {
        let m: u32 = rest.trim().parse().ok()?;
        if m < 2 {
            return None;
        }
        return Some(GroupSpec::explicit(2, coxeter(&coxeter_chain(&[m])), Some(&format!("I2({m})"))));
    }
    if let Some(rest) = upper.strip_prefix("TRIVIAL") {
        let n: usize = if rest.is_empty() { 1 } else { rest.parse().ok()? };
        return (n >= 1).then(|| GroupSpec::explicit(n, Vec::new(), Some(&format!("trivial{n}"))));
    }
    let gens = match upper.as_str() {
        "K5" | "G33" => k5(),
        "H3" => coxeter(&coxeter_chain(&[5, 3])),
        "H4" => coxeter(&coxeter_chain(&[5, 3, 3])),
        _ => {
            let mut chars = upper.chars();
            let family = chars.next()?;
            let n: usize = chars.as_str().parse().ok()?;
            weyl(family, n)?
        }
    };
    let n = gens[0].rows();
    let display = match upper.as_str() {
        "G33" => "K5".to_owned(),
        _ => upper,
    };
    Some(GroupSpec::explicit(n, gens, Some(&display)))
}

/// Names accepted by [`lookup`], for help text.
pub const SHIPPED: &[&str] = &[
    "A<n>", "B<n>", "C<n>", "D<n>", "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(<m>)", "K5",
    "G(<r>,<p>,<n>)", "trivial<n>",
];
