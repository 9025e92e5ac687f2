//! The divided power algebra `Γ = k⟨y_1..y_n⟩` on degree-two variables.

use crate::exactlin::{FMatrix, PrimeField};
use crate::PoincareSeries;

/// `C(a, b) mod p` by Lucas' theorem.
pub fn binomial_mod(field: PrimeField, mut a: u64, mut b: u64) -> u32 {
    let p = field.modulus() as u64;
    let mut acc = 1u32;
    while b > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return 0;
        }
        acc = field.mul(acc, small_binomial(field, ai, bi));
        a /= p;
        b /= p;
    }
    acc
}

fn small_binomial(field: PrimeField, a: u64, b: u64) -> u32 {
    let b = b.min(a - b);
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..b {
        num = field.mul(num, ((a - i) % field.modulus() as u64) as u32);
        den = field.mul(den, ((i + 1) % field.modulus() as u64) as u32);
    }
    field.mul(num, field.inv(den))
}

/// Exponent vectors `H ∈ ℕ^n` with `|H| = weight`, in descending lex order.
pub fn monomials(n: usize, weight: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v + 1 == n {
            cur[v] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[v] = e;
            rec(n, v + 1, left - e, cur, out);
        }
    }
    if n == 0 {
        return if weight == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, 0, weight as u32, &mut vec![0; n], &mut out);
    out
}

#[derive(Clone, Copy, Debug)]
pub struct GammaAlgebra {
    pub field: PrimeField,
    pub n: usize,
}

impl GammaAlgebra {
    pub fn new(field: PrimeField, n: usize) -> Self {
        GammaAlgebra { field, n }
    }

    /// `y^(H1) · y^(H2) = Π C(H1_i + H2_i, H1_i) · y^(H1 + H2)`.
    pub fn multiply(&self, h1: &[u32], h2: &[u32]) -> (u32, Vec<u32>) {
        let mut c = 1u32;
        let sum: Vec<u32> = h1.iter().zip(h2).map(|(a, b)| a + b).collect();
        for (a, b) in h1.iter().zip(h2) {
            c = self.field.mul(c, binomial_mod(self.field, (a + b) as u64, *a as u64));
        }
        (c, sum)
    }

    /// `χ_i · y^(H) = y^(H − ε_i)`, or zero.
    pub fn chi(&self, i: usize, h: &[u32]) -> Option<Vec<u32>> {
        (h[i] > 0).then(|| {
            let mut out = h.to_vec();
            out[i] -= 1;
            out
        })
    }

    /// Rank of `χ_i : Γ_{2j} → Γ_{2j−2}`.
    pub fn chi_rank(&self, i: usize, j: usize) -> usize {
        let src = monomials(self.n, j);
        let tgt = monomials(self.n, j - 1);
        let cols: Vec<Vec<u32>> = src
            .iter()
            .map(|h| {
                let mut v = vec![0; tgt.len()];
                if let Some(l) = self.chi(i, h) {
                    v[tgt.iter().position(|t| *t == l).unwrap()] = 1;
                }
                v
            })
            .collect();
        FMatrix::from_columns(self.field, tgt.len(), &cols).rank()
    }
}

/// Hilbert series of `Γ` in homological degree, by counting monomials.
pub fn gamma_hilbert(n: usize, order: usize) -> PoincareSeries {
    let mut c = vec![0i64; order + 1];
    for j in 0..=order / 2 {
        c[2 * j] = monomials(n, j).len() as i64;
    }
    PoincareSeries::from_coeffs(c)
}
