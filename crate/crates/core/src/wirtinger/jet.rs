use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Complex, JetError, DIVISION_EPS};

/// Highest derivative order a [`Jet`] can carry.
pub const MAX_ORDER: usize = 3;

const LEN: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

/// Position of the partial `∂_z^a ∂_z̄^b` in the dense table, grouped by total degree.
#[inline]
const fn slot(a: usize, b: usize) -> usize {
    let n = a + b;
    n * (n + 1) / 2 + b
}

/// Truncated table of Wirtinger partials `∂_z^a ∂_z̄^b F` for `a + b <= order`.
///
/// `z` and `z̄` are treated as two commuting independent variables. The table
/// stores derivatives (not Taylor coefficients), so `partial(1, 1)` is `F_{z z̄}`.
/// Binary operations between jets of different order truncate to the smaller one.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    order: usize,
    d: [Complex; LEN],
}

impl Jet {
    pub fn constant(value: Complex, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut d = [Complex::new(0.0, 0.0); LEN];
        d[0] = value;
        Self { order, d }
    }

    pub fn real(value: f64, order: usize) -> Self {
        Self::constant(Complex::new(value, 0.0), order)
    }

    /// The coordinate function `z` seeded at `z`.
    pub fn var_z(z: Complex, order: usize) -> Self {
        let mut j = Self::constant(z, order);
        if order >= 1 {
            j.d[slot(1, 0)] = Complex::new(1.0, 0.0);
        }
        j
    }

    /// The coordinate function `z̄` seeded at `z`.
    pub fn var_zbar(z: Complex, order: usize) -> Self {
        let mut j = Self::constant(z.conj(), order);
        if order >= 1 {
            j.d[slot(0, 1)] = Complex::new(1.0, 0.0);
        }
        j
    }

    /// Builds a jet from an explicit partial table, `partial(a, b)` supplying `∂_z^a ∂_z̄^b`.
    pub fn from_partials(order: usize, mut partial: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut j = Self::constant(Complex::new(0.0, 0.0), order);
        for n in 0..=order {
            for b in 0..=n {
                j.d[slot(n - b, b)] = partial(n - b, b);
            }
        }
        j
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn value(&self) -> Complex {
        self.d[0]
    }

    /// `∂_z^a ∂_z̄^b` of the jet; panics if `a + b` exceeds the jet order.
    #[inline]
    pub fn partial(&self, a: usize, b: usize) -> Complex {
        assert!(a + b <= self.order, "partial ({a},{b}) beyond jet order {}", self.order);
        self.d[slot(a, b)]
    }

    /// All `(a, b, value)` triples present in the jet, ordered by total degree.
    pub fn partials(&self) -> impl Iterator<Item = (usize, usize, Complex)> + '_ {
        (0..=self.order).flat_map(move |n| (0..=n).map(move |b| (n - b, b, self.d[slot(n - b, b)])))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut j = *self;
        j.order = order;
        for n in order + 1..=MAX_ORDER {
            for b in 0..=n {
                j.d[slot(n - b, b)] = Complex::new(0.0, 0.0);
            }
        }
        j
    }

    /// The jet of `∂_z F`, one order lower.
    pub fn dz(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        Self::from_partials(self.order - 1, |a, b| self.d[slot(a + 1, b)])
    }

    /// The jet of `∂_z̄ F`, one order lower.
    pub fn dzbar(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        Self::from_partials(self.order - 1, |a, b| self.d[slot(a, b + 1)])
    }

    /// Complex conjugate: `∂_z^a ∂_z̄^b conj(F) = conj(∂_z^b ∂_z̄^a F)`.
    pub fn conj(&self) -> Self {
        Self::from_partials(self.order, |a, b| self.d[slot(b, a)].conj())
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut j = *self;
        for v in j.d.iter_mut() {
            *v *= c;
        }
        j
    }

    pub fn add_scalar(&self, c: Complex) -> Self {
        let mut j = *self;
        j.d[0] += c;
        j
    }

    /// Real part as a jet, `(F + conj F) / 2`.
    pub fn re(&self) -> Self {
        (*self + self.conj()).scale(Complex::new(0.5, 0.0))
    }

    /// Imaginary part as a jet, `(F - conj F) / 2i`.
    pub fn im(&self) -> Self {
        (*self - self.conj()).scale(Complex::new(0.0, -0.5))
    }

    /// Squared modulus `F · conj F`.
    pub fn abs2(&self) -> Self {
        *self * self.conj()
    }

    pub fn try_div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        Ok(*self * rhs.recip()?)
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        let w = self.value();
        if w.norm() < DIVISION_EPS {
            return Err(JetError::DivisionByZero);
        }
        let r = w.inv();
        let r2 = r * r;
        Ok(self.compose([r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2]))
    }

    /// Integer power; negative exponents require a non-zero value.
    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let w = self.value();
        let mut h = [Complex::new(0.0, 0.0); MAX_ORDER + 1];
        for (k, hk) in h.iter_mut().enumerate() {
            let k = k as i32;
            if k > n {
                break;
            }
            let falling: f64 = (0..k).map(|i| f64::from(n - i)).product();
            *hk = falling * w.powi(n - k);
        }
        Ok(self.compose(h))
    }

    /// Chain rule for a holomorphic outer function `h` given `[h(w), h'(w), h''(w), h'''(w)]` at `w = self.value()`.
    ///
    /// Uses the set-partition form of Faà di Bruno's formula, which is exact to the jet order
    /// and keeps every `∂_z̄` partial of a holomorphic argument identically zero.
    pub fn compose(&self, h: [Complex; MAX_ORDER + 1]) -> Self {
        let mut out = Self::constant(h[0], self.order);
        for n in 1..=self.order {
            for b in 0..=n {
                let a = n - b;
                // directions: first `a` entries are ∂_z, remaining `b` are ∂_z̄
                let dirs: Vec<bool> = (0..n).map(|i| i >= a).collect();
                let mut acc = Complex::new(0.0, 0.0);
                for_each_partition(n, &mut |blocks| {
                    let mut term = h[blocks.len()];
                    for block in blocks {
                        let bz = block.iter().filter(|&&i| dirs[i]).count();
                        let az = block.len() - bz;
                        term *= self.d[slot(az, bz)];
                    }
                    acc += term;
                });
                out.d[slot(a, b)] = acc;
            }
        }
        out
    }

    /// Binomial-weighted Leibniz product of two jets truncated to the common order.
    fn leibniz(&self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Self::from_partials(order, |a, b| {
            let mut acc = Complex::new(0.0, 0.0);
            for i in 0..=a {
                for j in 0..=b {
                    let c = (binom(a, i) * binom(b, j)) as f64;
                    acc += c * self.d[slot(i, j)] * rhs.d[slot(a - i, b - j)];
                }
            }
            acc
        })
    }

    /// Compares every partial up to the common order within `tol`.
    pub fn approx_eq(&self, other: &Jet, tol: f64) -> bool {
        let order = self.order.min(other.order);
        (0..=order).all(|n| (0..=n).all(|b| (self.d[slot(n - b, b)] - other.d[slot(n - b, b)]).norm() <= tol))
    }
}

fn binom(n: usize, k: usize) -> usize {
    match (n, k) {
        (_, 0) => 1,
        (n, k) if k == n => 1,
        (n, k) => binom(n - 1, k - 1) + binom(n - 1, k),
    }
}

/// Calls `visit` once for every set partition of `{0, .., n-1}`.
fn for_each_partition(n: usize, visit: &mut dyn FnMut(&[Vec<usize>])) {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, visit: &mut dyn FnMut(&[Vec<usize>])) {
        if i == n {
            visit(blocks);
            return;
        }
        for k in 0..blocks.len() {
            blocks[k].push(i);
            rec(i + 1, n, blocks, visit);
            blocks[k].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, visit);
        blocks.pop();
    }
    rec(0, n, &mut Vec::new(), visit);
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (a, b, v) in self.partials() {
            m.entry(&format_args!("({a},{b})"), &v);
        }
        m.finish()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet::from_partials(order, |a, b| self.d[slot(a, b)] + rhs.d[slot(a, b)])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet::from_partials(order, |a, b| self.d[slot(a, b)] - rhs.d[slot(a, b)])
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.leibniz(&rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl Mul<Complex> for Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(Complex::new(rhs, 0.0))
    }
}

impl Add<Complex> for Jet {
    type Output = Jet;
    fn add(self, rhs: Complex) -> Jet {
        self.add_scalar(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self.add_scalar(Complex::new(rhs, 0.0))
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self.add_scalar(Complex::new(-rhs, 0.0))
    }
}
