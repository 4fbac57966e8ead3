//! Compensated summation used by every reduction that must not depend on
//! thread count.

use num_complex::Complex;
use num_traits::Float;

/// Kahan–Babuška (Neumaier) running sum.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<F> {
    sum: F,
    comp: F,
}

impl<F: Float> Default for KahanSum<F> {
    fn default() -> Self {
        Self { sum: F::zero(), comp: F::zero() }
    }
}

impl<F: Float> KahanSum<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> F {
        self.sum + self.comp
    }
}

/// Sums in slice order with compensation.
pub fn kahan_sum<F: Float>(xs: impl IntoIterator<Item = F>) -> F {
    let mut acc = KahanSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Compensated complex sum in iteration order.
pub fn kahan_sum_complex<F: Float>(xs: impl IntoIterator<Item = Complex<F>>) -> Complex<F> {
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for z in xs {
        re.add(z.re);
        im.add(z.im);
    }
    Complex::new(re.value(), im.value())
}

/// `e(x) = exp(2πix)`, reducing `x` modulo 1 first.
pub fn e<F: Float>(x: F) -> Complex<F> {
    let r = x - x.round();
    let tau = F::from(std::f64::consts::TAU).unwrap();
    Complex::from_polar(F::one(), tau * r)
}
