//! Randomized permanent estimation by squared determinants of randomly
//! signed square-root matrices.
//!
//! Every sample `k` draws its signs from its own ChaCha stream (`seed`,
//! stream `k`), so a report depends only on the matrix, the seed and the
//! sample count. Samples are computed in parallel in fixed-size blocks and
//! folded into the running statistics in index order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assembly::blow_up;
use crate::error::{Error, Result};
use crate::jones::{braid_diagram, jones_via_permanent};
use crate::knotio::BraidWord;

const BLOCK: u64 = 1 << 14;

/// Square root with argument in `[0, pi)`.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

/// Determinant by LU decomposition with partial pivoting.
pub fn det_lu(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("nonempty range");
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest {
            let f = row[col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for (x, t) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * t;
            }
        }
    }
    det
}

/// Positions of the nonzero entries, row-major.
fn support(a: &[Vec<Complex64>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if z.norm() != 0.0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// The sign pattern of sample `index`: one bit per nonzero entry.
pub fn sample_signs(seed: u64, index: u64, nonzeros: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..nonzeros).map(|_| rng.gen()).collect()
}

/// `det(B)^2` where `B` holds `±sqrt(a_ij)`, negated where `negate` is set.
/// `negate` runs over the nonzero entries in row-major order.
pub fn gg_sample_with_signs(a: &[Vec<Complex64>], negate: &[bool]) -> Complex64 {
    let n = a.len();
    let mut b = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (&(i, j), &neg) in support(a).iter().zip(negate) {
        let s = principal_sqrt(a[i][j]);
        b[i][j] = if neg { -s } else { s };
    }
    let d = det_lu(&b);
    d * d
}

pub fn gg_sample(a: &[Vec<Complex64>], rng: &mut impl Rng) -> Complex64 {
    let negate: Vec<bool> = (0..support(a).len()).map(|_| rng.gen()).collect();
    gg_sample_with_signs(a, &negate)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorReport {
    pub samples: u64,
    pub mean: Complex64,
    /// Sum of the real and imaginary sample variances.
    pub variance: f64,
    pub std_error: f64,
    pub ci95_re: (f64, f64),
    pub ci95_im: (f64, f64),
    pub seed: u64,
}

/// One row of the convergence trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub sample_index: u64,
    pub running_mean: Complex64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean_re: f64,
    mean_im: f64,
    m2_re: f64,
    m2_im: f64,
}

impl Welford {
    fn push(&mut self, z: Complex64) {
        self.n += 1;
        let n = self.n as f64;
        let (dr, di) = (z.re - self.mean_re, z.im - self.mean_im);
        self.mean_re += dr / n;
        self.mean_im += di / n;
        self.m2_re += dr * (z.re - self.mean_re);
        self.m2_im += di * (z.im - self.mean_im);
    }

    fn component_variances(&self) -> (f64, f64) {
        if self.n < 2 {
            return (0.0, 0.0);
        }
        let d = (self.n - 1) as f64;
        (self.m2_re / d, self.m2_im / d)
    }

    fn std_error(&self) -> f64 {
        let (vr, vi) = self.component_variances();
        ((vr + vi) / self.n as f64).sqrt()
    }

    fn mean(&self) -> Complex64 {
        Complex64::new(self.mean_re, self.mean_im)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateOptions {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Emit a trace point every this many samples (and after the last).
    pub trace_every: Option<u64>,
}

impl EstimateOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            workers: None,
            trace_every: None,
        }
    }
}

pub fn estimate_permanent(a: &[Vec<Complex64>], samples: u64, seed: u64) -> Result<EstimatorReport> {
    estimate_permanent_with(a, &EstimateOptions::new(samples, seed), |_| {})
}

pub fn estimate_permanent_with(
    a: &[Vec<Complex64>],
    opts: &EstimateOptions,
    mut trace: impl FnMut(TracePoint),
) -> Result<EstimatorReport> {
    if opts.samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let nonzeros = support(a).len();
    let draw = |k: u64| gg_sample_with_signs(a, &sample_signs(opts.seed, k, nonzeros));
    let pool = match opts.workers {
        Some(w) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?,
        ),
        None => None,
    };

    let mut stats = Welford::default();
    let mut start = 0;
    while start < opts.samples {
        let end = (start + BLOCK).min(opts.samples);
        let block = || (start..end).into_par_iter().map(draw).collect::<Vec<_>>();
        let values = match &pool {
            Some(p) => p.install(block),
            None => block(),
        };
        for (k, z) in (start..end).zip(values) {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NumericOverflow { sample: k });
            }
            stats.push(z);
            if let Some(every) = opts.trace_every {
                if stats.n % every.max(1) == 0 || stats.n == opts.samples {
                    trace(TracePoint {
                        sample_index: k,
                        running_mean: stats.mean(),
                        std_error: stats.std_error(),
                    });
                }
            }
        }
        start = end;
    }

    let (vr, vi) = stats.component_variances();
    let n = stats.n as f64;
    let half = |v: f64| 1.96 * (v / n).sqrt();
    Ok(EstimatorReport {
        samples: stats.n,
        mean: stats.mean(),
        variance: vr + vi,
        std_error: stats.std_error(),
        ci95_re: (stats.mean_re - half(vr), stats.mean_re + half(vr)),
        ci95_im: (stats.mean_im - half(vi), stats.mean_im + half(vi)),
        seed: opts.seed,
    })
}

/// `[2]_5 = 2 cos(pi/5)`, the modulus of the unknot at `e^(i pi/5)`.
pub fn quantum_two_at_fifth_root() -> f64 {
    2.0 * (std::f64::consts::PI / 5.0).cos()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesModulusReport {
    pub permanent: EstimatorReport,
    /// `q0^(rot - 2 writhe)`.
    pub prefactor: Complex64,
    pub modulus: f64,
    pub std_error: f64,
    /// `|J(q0)|` from the exact pipeline, when it was run.
    pub exact: Option<f64>,
}

/// Diagrams with at most this many crossings also get the exact value.
pub const EXACT_CROSSING_LIMIT: usize = 12;

pub fn estimate_jones_modulus(b: &BraidWord, q0: Complex64, opts: &EstimateOptions) -> Result<JonesModulusReport> {
    estimate_jones_modulus_with(b, q0, opts, |_| {})
}

pub fn estimate_jones_modulus_with(
    b: &BraidWord,
    q0: Complex64,
    opts: &EstimateOptions,
    trace: impl FnMut(TracePoint),
) -> Result<JonesModulusReport> {
    let d = braid_diagram(b);
    let m = blow_up(&d)?.to_matrix()?.try_map(|p| p.eval(q0))?.to_dense();
    let permanent = estimate_permanent_with(&m, opts, trace)?;
    let prefactor = q0.powi((d.rot_total - 2 * d.writhe) as i32);
    let exact = if d.crossing_count() <= EXACT_CROSSING_LIMIT {
        Some(jones_via_permanent(&d)?.value.eval(q0)?.norm())
    } else {
        None
    };
    Ok(JonesModulusReport {
        modulus: (prefactor * permanent.mean).norm(),
        std_error: prefactor.norm() * permanent.std_error,
        prefactor,
        permanent,
        exact,
    })
}
