use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("GF({0}) is not supported (supported orders: 2, 3, 4, 5, 7, 8, 9, 11, 13, 16)")]
    Unsupported(usize),
    #[error("zero has no inverse")]
    ZeroInverse,
}

/// Field elements are encoded as integers `0..q`. For `q = p^m` the integer
/// `c0 + c1·p + … + c_{m-1}·p^{m-1}` is the polynomial `c0 + c1·x + …` reduced
/// modulo the defining polynomial, so `0` is zero and `1` is one.
pub type Element = u8;

/// Reduction rules `x^m = Σ coeffs[i]·x^i` for the non-prime orders.
/// These are the Conway polynomials x²+x+1, x³+x+1, x⁴+x+1 and x²+2x+2.
const EXTENSIONS: &[(usize, &[u8])] = &[(4, &[1, 1]), (8, &[1, 1, 0]), (9, &[1, 1]), (16, &[1, 1, 0, 0])];

pub const SUPPORTED_ORDERS: &[usize] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

/// Finite field GF(q), q ≤ 16, with full addition and multiplication tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallField {
    q: usize,
    p: usize,
    m: usize,
    add: Vec<Element>,
    mul: Vec<Element>,
    neg: Vec<Element>,
    inv: Vec<Element>,
}

impl SmallField {
    pub fn new(q: usize) -> Result<Self, FieldError> {
        let Some((p, m)) = prime_power(q) else {
            return Err(FieldError::NotPrimePower(q));
        };
        if !SUPPORTED_ORDERS.contains(&q) {
            return Err(FieldError::Unsupported(q));
        }
        let reduction: Vec<u8> = if m == 1 {
            Vec::new()
        } else {
            EXTENSIONS.iter().find(|e| e.0 == q).map(|e| e.1.to_vec()).ok_or(FieldError::Unsupported(q))?
        };

        let digits = |a: usize| -> Vec<usize> { (0..m).map(|i| a / p.pow(i as u32) % p).collect() };
        let undigits = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum) as Element;

                let mut prod = vec![0usize; 2 * m];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for d in (m..2 * m).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    prod[d] = 0;
                    for (i, &r) in reduction.iter().enumerate() {
                        prod[d - m + i] = (prod[d - m + i] + c * r as usize) % p;
                    }
                }
                mul[a * q + b] = undigits(&prod[..m]) as Element;
            }
        }

        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse") as Element;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("multiplicative inverse") as Element;
            }
        }
        Ok(Self { q, p, m, add, mul, neg, inv })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.q).map(|x| x as Element)
    }

    #[inline]
    pub fn add(&self, x: Element, y: Element) -> Element {
        self.add[x as usize * self.q + y as usize]
    }

    #[inline]
    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn neg(&self, x: Element) -> Element {
        self.neg[x as usize]
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.mul[x as usize * self.q + y as usize]
    }

    pub fn inv(&self, x: Element) -> Result<Element, FieldError> {
        if x == 0 {
            Err(FieldError::ZeroInverse)
        } else {
            Ok(self.inv[x as usize])
        }
    }

    /// Scales a nonzero vector so its first nonzero coordinate is one.
    /// Returns `None` for the zero vector.
    pub fn normalize(&self, v: &[Element]) -> Option<Vec<Element>> {
        let lead = *v.iter().find(|&&x| x != 0)?;
        let s = self.inv[lead as usize];
        Some(v.iter().map(|&x| self.mul(s, x)).collect())
    }

    pub fn dot(&self, a: &[Element], b: &[Element]) -> Element {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

/// `(p, m)` with `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

pub fn is_prime_power(q: usize) -> bool {
    prime_power(q).is_some()
}
