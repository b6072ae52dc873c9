use super::{Complex, Jet};

// five-point central weights for f' and f''
const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const D2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

/// Finite-difference estimate of the Wirtinger partials of `f` at `z` up to order 2.
///
/// `f` is sampled on a five-point central stencil in `u` and `v` (and the tensor
/// stencil for the mixed derivative), so the truncation error is `O(h^4)`. The result
/// is built without touching any jet arithmetic and serves as the independent
/// reference for automatic differentiation.
pub fn fd_oracle<F>(f: F, z: Complex, h: f64) -> Jet
where
    F: Fn(Complex) -> Complex,
{
    assert!(h > 0.0, "step must be positive");
    let value = f(z);
    let at = |i: i32, j: i32| f(z + Complex::new(f64::from(i) * h, f64::from(j) * h)) - value;
    let offsets = [-2, -1, 0, 1, 2];

    let mut fu = Complex::new(0.0, 0.0);
    let mut fv = Complex::new(0.0, 0.0);
    let mut fuu = Complex::new(0.0, 0.0);
    let mut fvv = Complex::new(0.0, 0.0);
    for (k, &o) in offsets.iter().enumerate() {
        if D1[k] != 0.0 {
            fu += D1[k] * at(o, 0);
            fv += D1[k] * at(0, o);
        }
        fuu += D2[k] * at(o, 0);
        fvv += D2[k] * at(0, o);
    }
    let mut fuv = Complex::new(0.0, 0.0);
    for (k, &i) in offsets.iter().enumerate() {
        for (l, &j) in offsets.iter().enumerate() {
            let w = D1[k] * D1[l];
            if w != 0.0 {
                fuv += w * at(i, j);
            }
        }
    }
    let (fu, fv) = (fu / h, fv / h);
    let (fuu, fvv, fuv) = (fuu / (h * h), fvv / (h * h), fuv / (h * h));

    let i = Complex::new(0.0, 1.0);
    Jet::from_partials(2, |a, b| match (a, b) {
        (0, 0) => value,
        (1, 0) => 0.5 * (fu - i * fv),
        (0, 1) => 0.5 * (fu + i * fv),
        (2, 0) => 0.25 * (fuu - 2.0 * i * fuv - fvv),
        (1, 1) => 0.25 * (fuu + fvv),
        (0, 2) => 0.25 * (fuu + 2.0 * i * fuv - fvv),
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_derivative() {
        let z = Complex::new(1.0, 1.0);
        let j = fd_oracle(|w| w * w, z, 1e-4);
        assert!((j.partial(1, 0) - 2.0 * z).norm() < 1e-7);
        assert!(j.partial(0, 1).norm() < 1e-7);
    }

    #[test]
    fn modulus_squared() {
        let j = fd_oracle(|w| w * w.conj(), Complex::new(2.0, 0.0), 1e-4);
        assert!((j.partial(1, 0) - Complex::new(2.0, 0.0)).norm() < 1e-7);
        assert!((j.partial(1, 1) - Complex::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn constant_has_zero_partials() {
        let j = fd_oracle(|_| Complex::new(3.5, -1.25), Complex::new(0.2, 0.7), 1e-3);
        for (a, b, v) in j.partials() {
            if a + b > 0 {
                assert!(v.norm() < 1e-12);
            }
        }
    }
}
