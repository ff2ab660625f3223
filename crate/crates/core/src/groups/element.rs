use crate::cyclo::Cyclotomic;
use crate::linalg::Matrix;

/// A monomial matrix `g e_i = ζ_r^{a_i} e_{σ(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialForm {
    pub r: u32,
    pub perm: Vec<usize>,
    pub exps: Vec<u32>,
}

impl MonomialForm {
    pub fn identity(r: u32, n: usize) -> Self {
        MonomialForm { r, perm: (0..n).collect(), exps: vec![0; n] }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// Membership in G(r, p, n): the exponents sum to a multiple of p.
    pub fn lies_in(&self, p: u32) -> bool {
        self.exps.iter().map(|&a| a as u64).sum::<u64>() % p as u64 == 0
    }

    /// `(σ, a)(τ, b) = (στ, c)` with `c_i = b_i + a_{τ(i)}`.
    pub fn mul(&self, other: &MonomialForm) -> MonomialForm {
        assert_eq!(self.r, other.r);
        assert_eq!(self.rank(), other.rank());
        let perm = other.perm.iter().map(|&t| self.perm[t]).collect();
        let exps = (0..self.rank())
            .map(|i| (other.exps[i] + self.exps[other.perm[i]]) % self.r)
            .collect();
        MonomialForm { r: self.r, perm, exps }
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.rank();
        let cols: Vec<Vec<Cyclotomic>> = (0..n)
            .map(|i| {
                let mut v = vec![Cyclotomic::zero(); n];
                v[self.perm[i]] = Cyclotomic::root_of_unity(self.exps[i] as i64, self.r);
                v
            })
            .collect();
        Matrix::from_columns(&cols)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Monomial(MonomialForm),
    Matrix(Matrix),
}

impl Element {
    pub fn to_matrix(&self) -> Matrix {
        match self {
            Element::Monomial(m) => m.to_matrix(),
            Element::Matrix(m) => m.clone(),
        }
    }

    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Monomial(a), Element::Monomial(b)) => Element::Monomial(a.mul(b)),
            _ => Element::Matrix(self.to_matrix().checked_mul(&other.to_matrix()).expect("equal ranks")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn monomial(r: u32, n: usize) -> impl Strategy<Value = MonomialForm> {
        (Just(()).prop_perturb(move |_, mut rng| {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = (rng.next_u32() as usize) % (i + 1);
                perm.swap(i, j);
            }
            perm
        }), prop::collection::vec(0..r, n))
            .prop_map(move |(perm, exps)| MonomialForm { r, perm, exps })
    }

    proptest! {
        #[test]
        fn monomial_product_matches_matrices((a, b) in (monomial(4, 3), monomial(4, 3))) {
            let prod = a.mul(&b).to_matrix();
            prop_assert_eq!(prod, a.to_matrix().checked_mul(&b.to_matrix()).unwrap());
        }
    }

    #[test]
    fn membership() {
        let m = MonomialForm { r: 4, perm: vec![1, 0], exps: vec![1, 1] };
        assert!(m.lies_in(2));
        assert!(!m.lies_in(4));
    }
}
