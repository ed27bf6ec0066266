use super::{Ext, Fe, Ke};

impl Ext {
    /// Dickson polynomial `D_k(x)` over F in characteristic two.
    ///
    /// Uses `D_k(y + 1/y) = y^k + y^{-k}` where `y^2 + x y + 1 = 0`; the root
    /// lies in F or in K, so `k` only matters modulo `q^2 - 1`.
    pub fn dickson(&self, k: u128, x: Fe) -> Fe {
        let f = self.base();
        if x.is_zero() {
            // D_k(0) = 0 for k odd, and the recurrence also gives 0 for k even
            return Fe::ZERO;
        }
        // y = x z with z^2 + z = 1/x^2
        let c = f.square(f.inv_or_zero(x));
        let z = match f.solve_artin_schreier(c) {
            Some(z0) => Ke::from_base(z0),
            None => {
                let z0 = f
                    .solve_artin_schreier(c + self.delta())
                    .expect("tr(c + delta) = 0");
                Ke::new(z0, Fe::ONE)
            }
        };
        let y = self.scale(x, z);
        let order = (self.q() as u128).pow(2) - 1;
        let e = k % order;
        let yk = self.pow(y, e);
        let s = yk + self.inv_or_zero(yk);
        debug_assert!(s.in_base());
        s.a
    }
}

#[cfg(test)]
mod tests {
    use super::super::exponent;
    use super::*;

    fn recurrence(k: u32, x: Fe, ext: &Ext) -> Fe {
        let f = ext.base();
        let (mut d0, mut d1) = (Fe::ZERO, x);
        if k == 0 {
            return d0;
        }
        for _ in 1..k {
            let d2 = f.mul(x, d1) + d0;
            d0 = d1;
            d1 = d2;
        }
        d1
    }

    #[test]
    fn d5_closed_form() {
        let k = Ext::with_degree(5).unwrap();
        let f = k.base();
        for x in f.elements() {
            let expect = x + f.pow(x, 3) + f.pow(x, 5);
            assert_eq!(k.dickson(5, x), expect);
            assert_eq!(k.dickson(1, x), x);
        }
    }

    #[test]
    fn matches_recurrence() {
        for m in 1..=5 {
            let k = Ext::with_degree(m).unwrap();
            for x in k.base().elements() {
                for n in 0..40 {
                    // D_0 from the functional form is y^0 + y^0 = 0 too
                    assert_eq!(k.dickson(n as u128, x), recurrence(n, x, &k), "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn composition() {
        for m in 1..=4 {
            let k = Ext::with_degree(m).unwrap();
            for x in k.base().elements() {
                for a in 0..7u128 {
                    for b in 0..7u128 {
                        assert_eq!(k.dickson(a, k.dickson(b, x)), k.dickson(a * b, x));
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_of_d5_at_m5() {
        let k = Ext::with_degree(5).unwrap();
        let inv5 = exponent::mod_inverse(5, 1023).unwrap();
        assert_eq!(inv5, 614);
        for x in k.base().elements() {
            assert_eq!(k.dickson(inv5, k.dickson(5, x)), x);
            assert_eq!(k.dickson(5, k.dickson(inv5, x)), x);
        }
        // inverting 5 modulo q - 1 alone is not enough
        let inv5_small = exponent::mod_inverse(5, 31).unwrap();
        let ok = k
            .base()
            .elements()
            .all(|x| k.dickson(inv5_small, k.dickson(5, x)) == x);
        assert!(!ok);
    }

    #[test]
    fn d5_is_not_a_permutation_of_gf1024() {
        // 5 divides 2^10 + 1, so D_5 is not invertible on GF(2^10)
        let k = Ext::with_degree(10).unwrap();
        let mut seen = vec![false; k.q() as usize];
        let mut collisions = 0;
        for x in k.base().elements() {
            let y = k.dickson(5, x).0 as usize;
            if seen[y] {
                collisions += 1;
            }
            seen[y] = true;
        }
        assert!(collisions > 0);
        assert!(exponent::mod_inverse(5, (1 << 20) - 1).is_err());
    }
}
