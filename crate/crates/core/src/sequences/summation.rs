/// Neumaier's variant of Kahan summation. The running compensation also
/// captures the low-order bits lost when an addend exceeds the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

pub fn compensated_sum(iter: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::new();
    s.extend(iter);
    s.value()
}

/// Partial sums sampled at every power of ten `>= 10`, and the increments
/// between consecutive samples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecadeTrace {
    checkpoints: Vec<(usize, f64)>,
}

impl DecadeTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `partial` if `n` is a decade boundary.
    pub fn observe(&mut self, n: usize, partial: f64) {
        if is_decade(n) {
            self.checkpoints.push((n, partial));
        }
    }

    pub fn checkpoints(&self) -> &[(usize, f64)] {
        &self.checkpoints
    }

    pub fn increments(&self) -> Vec<f64> {
        self.checkpoints
            .windows(2)
            .map(|w| w[1].1 - w[0].1)
            .collect()
    }

    /// Convergent-looking when the last three decade increments (fewer if
    /// fewer exist, at least two) decrease strictly. A tail of exactly zero
    /// increments also counts: the series has stopped moving.
    pub fn verdict(&self) -> bool {
        let inc = self.increments();
        if inc.len() < 2 {
            return false;
        }
        let tail = &inc[inc.len().saturating_sub(3)..];
        tail.iter().all(|&d| d == 0.0) || tail.windows(2).all(|w| w[1] < w[0])
    }
}

fn is_decade(n: usize) -> bool {
    if n < 10 {
        return false;
    }
    let mut m = n;
    while m.is_multiple_of(10) {
        m /= 10;
    }
    m == 1
}
