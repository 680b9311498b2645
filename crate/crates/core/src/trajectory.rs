use num_complex::Complex64 as C64;

/// Sampled amplitudes on a time grid.
///
/// `N = 3` holds `(alpha, beta, gamma)`, `N = 2` holds `(alpha, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    times: Vec<f64>,
    amplitudes: Vec<[C64; N]>,
}

pub type Trajectory3 = Trajectory<3>;
pub type Trajectory2 = Trajectory<2>;

impl<const N: usize> Trajectory<N> {
    /// Panics if the two vectors have different lengths.
    pub fn new(times: Vec<f64>, amplitudes: Vec<[C64; N]>) -> Self {
        assert_eq!(times.len(), amplitudes.len(), "one amplitude vector per time sample");
        Self { times, amplitudes }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn amplitudes(&self) -> &[[C64; N]] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[C64; N])> {
        self.times.iter().copied().zip(self.amplitudes.iter())
    }

    /// Squared norm at each sample.
    pub fn norms(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.iter().map(|c| c.norm_sqr()).sum()).collect()
    }

    /// `max_t | sum |amplitude|^2 - 1 |`.
    pub fn max_norm_deviation(&self) -> f64 {
        self.norms().into_iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Population `|c_level|^2` at each sample.
    pub fn populations(&self, level: usize) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a[level].norm_sqr()).collect()
    }
}

/// `n` equally spaced samples on `[0, t_max]`, endpoints included.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let step = t_max / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { t_max } else { i as f64 * step }).collect()
        }
    }
}
