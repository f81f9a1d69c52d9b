//! Exact and truncated arithmetic over F_q, F_q[T], k = F_q(T) and C_infinity.

mod bipoly;
mod field;
mod laurent;
mod parse;
mod poly;
mod rational;

pub use bipoly::BiPoly;
pub use field::{Fe, Fq, MAX_Q};
pub use laurent::{LaurentJson, LaurentNum, EXACT};
pub use parse::{parse_elem, parse_poly, parse_rational, Element};
pub use poly::Poly;
pub use rational::RationalK;

/// D_n = prod_{i<n} (T^{q^n} - T^{q^i}), the product of all monic polynomials of degree n.
pub fn dfac(fq: &Fq, n: u32) -> Poly {
    let t = Poly::var(fq);
    let top = t.frobenius(n);
    (0..n).fold(Poly::one(fq), |acc, i| &acc * &(&top - &t.frobenius(i)))
}

/// L_n = prod_{1<=i<=n} (T^{q^i} - T).
pub fn lfac(fq: &Fq, n: u32) -> Poly {
    let t = Poly::var(fq);
    (1..=n).fold(Poly::one(fq), |acc, i| &acc * &(&t.frobenius(i) - &t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfac_is_product_of_monics() {
        for q in [2, 3] {
            let fq = Fq::new(q).unwrap();
            for n in 0..3 {
                let brute = Poly::monic_of_degree(&fq, n).fold(Poly::one(&fq), |acc, a| &acc * &a);
                assert_eq!(dfac(&fq, n as u32), brute);
            }
        }
    }

    #[test]
    fn dfac_recursion() {
        // D_n = (T^{q^n} - T) D_{n-1}^q
        let fq = Fq::new(3).unwrap();
        let t = Poly::var(&fq);
        for n in 1..4 {
            let rhs = &(&t.frobenius(n) - &t) * &dfac(&fq, n - 1).frobenius(1);
            assert_eq!(dfac(&fq, n), rhs);
        }
        assert_eq!(lfac(&fq, 1), &t.frobenius(1) - &t);
    }
}
