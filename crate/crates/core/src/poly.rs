//! Univariate polynomials over a [`Field`], enough to split minimal
//! polynomials: gcds, Bezout cofactors and roots in the base field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, Scalar};

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub field: Field,
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn constant(field: Field, c: Scalar) -> Poly {
        Poly::new(field, vec![c])
    }

    /// `t - a`
    pub fn linear(field: Field, a: &Scalar) -> Poly {
        Poly::new(field, vec![-a, field.one()])
    }

    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().unwrap();
        Poly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        Poly::new(
            self.field,
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(self.field, vec![]);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let inv = d.lead().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::new(self.field, vec![]), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &(&c * dc);
            }
            q[k] = c;
        }
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.field.from_i64(i as i64)).collect(),
        )
    }

    pub fn pow_mod(&self, mut e: BigInt, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.field, self.field.one()).rem(m);
        let two = BigInt::from(2);
        while e > BigInt::zero() {
            if e.is_odd() {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e /= &two;
        }
        acc
    }
}

/// Monic gcd.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// `(g, u, v)` with `u a + v b = g = gcd(a, b)`, `g` monic.
pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let f = a.field;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::constant(f, f.one()), Poly::new(f, vec![]));
    let (mut t0, mut t1) = (Poly::new(f, vec![]), Poly::constant(f, f.one()));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s2 = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = t0.sub(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = r0.lead().inv().unwrap();
    (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
}

/// Distinct roots of `p` in its field, in a deterministic order.
pub fn roots(p: &Poly) -> Vec<Scalar> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = match p.field {
        Field::Prime(q) => prime_roots(p, q),
        Field::Rational => rational_roots(p),
    };
    out.sort_by_key(|s| s.to_string());
    out.dedup();
    out
}

fn prime_roots(p: &Poly, q: u32) -> Vec<Scalar> {
    let f = p.field;
    if q <= 64 {
        return (0..q as i64).map(|a| f.from_i64(a)).filter(|a| p.eval(a).is_zero()).collect();
    }
    // product of the distinct linear factors: gcd(p, t^q - t)
    let m = p.monic();
    let xq = Poly::x(f).pow_mod(BigInt::from(q), &m);
    let lin = gcd(&m, &xq.sub(&Poly::x(f)));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5111);
    let mut out = Vec::new();
    split_linear(&lin, q, &mut rng, &mut out);
    out
}

/// Cantor-Zassenhaus splitting of a squarefree product of linear factors.
fn split_linear(g: &Poly, q: u32, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    let f = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-&g.monic().coeffs[0]),
        Some(_) => {
            let e = BigInt::from((q - 1) / 2);
            loop {
                let a = f.from_i64(rng.gen_range(0..q as i64));
                let h = Poly::new(f, vec![a, f.one()]).pow_mod(e.clone(), g);
                let d = gcd(g, &h.sub(&Poly::constant(f, f.one())));
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < g.degree().unwrap() {
                    let (rest, _) = g.divrem(&d);
                    split_linear(&d, q, rng, out);
                    split_linear(&rest, q, rng, out);
                    return;
                }
            }
        }
    }
}

const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if d > DIVISOR_SEARCH_LIMIT {
            return None;
        }
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn rational_roots(p: &Poly) -> Vec<Scalar> {
    use num_rational::BigRational;
    let f = p.field;
    let mut out = Vec::new();
    // strip factors of t
    let mut coeffs = p.coeffs.clone();
    if coeffs[0].is_zero() {
        out.push(f.zero());
        while coeffs.first().is_some_and(Scalar::is_zero) {
            coeffs.remove(0);
        }
    }
    if coeffs.len() < 2 {
        return out;
    }
    let rats: Vec<BigRational> = coeffs.iter().map(|c| c.as_rational().unwrap().clone()).collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        log::warn!("rational root search skipped: coefficients too large");
        return out;
    };
    for a in &ps {
        for b in &qs {
            for sign in [1, -1] {
                let r = BigRational::new(a * sign, b.clone());
                let s = Scalar::Rat(Box::new(r));
                if p.eval(&s).is_zero() && !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Splits `m` as `g h` with `g = (t - λ)^a` for a root `λ`, `h` coprime to
/// `g` and nonconstant; `None` when every root exhausts `m`.
pub fn coprime_split(m: &Poly) -> Option<(Poly, Poly)> {
    let f = m.field;
    for r in roots(m) {
        let lin = Poly::linear(f, &r);
        let mut g = Poly::constant(f, f.one());
        let mut h = m.monic();
        loop {
            let (q, rem) = h.divrem(&lin);
            if !rem.is_zero() {
                break;
            }
            h = q;
            g = g.mul(&lin);
        }
        if h.degree().unwrap_or(0) > 0 {
            return Some((g, h));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: Field, c: &[i64]) -> Poly {
        Poly::new(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = Field::Prime(32003);
        let a = p(f, &[-1, 0, 1]); // t^2 - 1
        let b = p(f, &[1, 1]); // t + 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, p(f, &[-1, 1]));
        assert_eq!(gcd(&a, &p(f, &[-1, 1])), p(f, &[-1, 1]));
        let (g, u, v) = ext_gcd(&p(f, &[0, 1]), &p(f, &[-1, 1]));
        assert_eq!(g, p(f, &[1]));
        assert_eq!(u.mul(&p(f, &[0, 1])).add(&v.mul(&p(f, &[-1, 1]))), g);
    }

    #[test]
    fn roots_prime_and_rational() {
        let f = Field::Prime(32003);
        // (t - 2)(t - 5)(t^2 + 1)... t^2+1 has roots mod 32003 iff 32003 ≡ 1 mod 4
        let m = p(f, &[-2, 1]).mul(&p(f, &[-5, 1])).mul(&p(f, &[-7, 1]));
        let mut r: Vec<i64> = roots(&m).iter().map(|s| s.to_i64().unwrap()).collect();
        r.sort();
        assert_eq!(r, [2, 5, 7]);
        assert!(roots(&p(f, &[1, 0, 1])).is_empty()); // 32003 ≡ 3 mod 4
        let q = Field::Rational;
        let m = Poly::new(q, vec![q.parse("1/2").unwrap(), q.parse("-3/2").unwrap(), q.one()]);
        let mut r: Vec<String> = roots(&m).iter().map(|s| s.to_string()).collect();
        r.sort();
        assert_eq!(r, ["1", "1/2"]);
        let small = Field::Prime(5);
        assert_eq!(roots(&p(small, &[-4, 0, 1])).len(), 2);
    }

    #[test]
    fn splitting() {
        let f = Field::Prime(32003);
        let m = p(f, &[0, 1]).mul(&p(f, &[0, 1])).mul(&p(f, &[-1, 1]));
        let (g, h) = coprime_split(&m).unwrap();
        assert_eq!(g.mul(&h), m.monic());
        assert!(coprime_split(&p(f, &[0, 0, 1])).is_none());
    }
}
