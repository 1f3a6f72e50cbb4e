//! Compensated accumulation.
//!
//! Power sums over Taylor moduli span many orders of magnitude; the
//! helpers here use Neumaier's variant of Kahan summation, and
//! [`sum_nonnegative`] additionally adds terms in increasing magnitude.

use num_complex::Complex64;

/// Running Neumaier sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise Neumaier sum for complex terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

pub fn sum_complex(terms: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut acc = ComplexNeumaier::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// Sums nonnegative terms smallest first with compensation.
pub fn sum_nonnegative(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.total_cmp(b));
    sum(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let terms = [1.0, 1e100, 1.0, -1e100];
        let naive: f64 = terms.iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(sum(terms), 2.0);
    }

    #[test]
    fn nonnegative_sorted() {
        let mut terms = vec![1e-17; 1000];
        terms.push(1.0);
        let s = sum_nonnegative(terms);
        assert!((s - (1.0 + 1e-14)).abs() < 1e-16);
    }
}
