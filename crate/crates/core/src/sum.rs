/// Neumaier's variant of Kahan summation.
///
/// Keeps a running compensation term so that alternating series with large
/// intermediate terms lose only the digits the terms themselves carry.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let acc: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.total(), 2.0);
    }

    #[test]
    fn beats_naive_on_alternating_harmonic() {
        let n = 1_000_000;
        let terms = (1..=n).map(|k| if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 });
        let acc: CompensatedSum = terms.clone().collect();
        let naive: f64 = terms.sum();
        // ln 2 minus the tail 1/(2n) approximately
        let exact = std::f64::consts::LN_2 - 0.5 / n as f64;
        assert!((acc.total() - exact).abs() <= (naive - exact).abs() + 1e-15);
        assert!((acc.total() - exact).abs() < 1e-12);
    }
}
