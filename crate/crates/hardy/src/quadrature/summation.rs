//! Neumaier compensated summation.

/// Running compensated sum (Kahan-Babuska-Neumaier).
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Component-wise compensated sums of `N`-vectors.
#[derive(Debug, Clone, Copy)]
pub struct NeumaierVec<const N: usize> {
    parts: [NeumaierSum; N],
}

impl<const N: usize> Default for NeumaierVec<N> {
    fn default() -> Self {
        NeumaierVec {
            parts: [NeumaierSum::default(); N],
        }
    }
}

impl<const N: usize> NeumaierVec<N> {
    #[inline]
    pub fn add_scaled(&mut self, v: &[f64; N], w: f64) {
        for (p, x) in self.parts.iter_mut().zip(v) {
            p.add(x * w);
        }
    }

    pub fn value(&self) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, p) in out.iter_mut().zip(&self.parts) {
            *o = p.value();
        }
        out
    }
}

/// Compensated sum of a slice.
pub fn neumaier_sum(values: &[f64]) -> f64 {
    let mut s = NeumaierSum::new();
    for &v in values {
        s.add(v);
    }
    s.value()
}
