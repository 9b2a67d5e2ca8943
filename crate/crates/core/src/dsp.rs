//! Transform and circular-convolution kernels shared by the transmitter and
//! the receivers.
//!
//! Power-of-two transforms run on an in-crate radix-2 kernel so that the
//! multiplications it performs can be counted one by one. Other sizes go
//! through `rustfft` and are charged the radix-2 model cost instead.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::complexity::CmTally;

#[derive(Clone)]
enum Engine {
    Radix2 {
        twiddles: Vec<Complex64>,
        bitrev: Vec<usize>,
    },
    General {
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
    },
}

/// An unnormalized DFT of fixed length.
#[derive(Clone)]
pub(crate) struct Transform {
    len: usize,
    engine: Engine,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.engine {
            Engine::Radix2 { .. } => "radix2",
            Engine::General { .. } => "general",
        };
        f.debug_struct("Transform")
            .field("len", &self.len)
            .field("engine", &kind)
            .finish()
    }
}

impl Transform {
    pub fn new(len: usize) -> Self {
        assert!(len > 0);
        let engine = if len.is_power_of_two() {
            let bits = len.trailing_zeros();
            let bitrev = (0..len)
                .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
                .collect();
            let twiddles = (0..len / 2)
                .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / len as f64))
                .collect();
            Engine::Radix2 { twiddles, bitrev }
        } else {
            let mut planner = FftPlanner::new();
            Engine::General {
                forward: planner.plan_fft_forward(len),
                inverse: planner.plan_fft_inverse(len),
            }
        };
        Self { len, engine }
    }

    /// `X[k] = sum_n x[n] e^{-j2pi nk/L}`, in place.
    pub fn forward(&self, buf: &mut [Complex64], tally: Option<&mut CmTally>) {
        self.run(buf, false, tally);
    }

    /// `x[n] = sum_k X[k] e^{+j2pi nk/L}`, in place, without the `1/L`.
    pub fn inverse(&self, buf: &mut [Complex64], tally: Option<&mut CmTally>) {
        self.run(buf, true, tally);
    }

    fn run(&self, buf: &mut [Complex64], inverse: bool, tally: Option<&mut CmTally>) {
        debug_assert_eq!(buf.len(), self.len);
        match &self.engine {
            Engine::Radix2 { twiddles, bitrev } => {
                let cms = radix2(buf, twiddles, bitrev, inverse);
                if let Some(t) = tally {
                    t.add_complex(cms);
                }
            }
            Engine::General { forward, inverse: inv } => {
                if inverse {
                    inv.process(buf);
                } else {
                    forward.process(buf);
                }
                if let Some(t) = tally {
                    t.add_model(radix2_model_cost(self.len));
                }
            }
        }
    }
}

/// `(L/2) log2 L`, the butterfly-multiplication count of a radix-2 FFT.
pub(crate) fn radix2_model_cost(len: usize) -> f64 {
    len as f64 / 2.0 * (len as f64).log2()
}

/// Iterative decimation-in-time radix-2 FFT. Returns the number of twiddle
/// multiplications executed.
fn radix2(buf: &mut [Complex64], twiddles: &[Complex64], bitrev: &[usize], inverse: bool) -> u64 {
    let len = buf.len();
    for (i, &j) in bitrev.iter().enumerate() {
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut cms = 0u64;
    let mut size = 2;
    while size <= len {
        let half = size / 2;
        let step = len / size;
        for start in (0..len).step_by(size) {
            for j in 0..half {
                let w = twiddles[j * step];
                let w = if inverse { w.conj() } else { w };
                let t = w * buf[start + j + half];
                cms += 1;
                let a = buf[start + j];
                buf[start + j] = a + t;
                buf[start + j + half] = a - t;
            }
        }
        size *= 2;
    }
    cms
}

/// `out = h (*)_M x` with real taps, evaluated directly. Each tap product
/// is a real-by-complex multiplication and is tallied as half a CM.
pub(crate) fn circ_conv_real(
    taps: &[f64],
    x: &[Complex64],
    out: &mut [Complex64],
    tally: Option<&mut CmTally>,
) {
    let m = taps.len();
    debug_assert!(x.len() == m && out.len() == m);
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &xj) in x.iter().enumerate() {
            acc += xj * taps[(k + m - j) % m];
        }
        *o = acc;
    }
    if let Some(t) = tally {
        t.add_real_by_complex((m * m) as u64);
    }
}

/// `buf <- IDFT(DFT(buf) .* spectrum)` where `spectrum` already carries the
/// `1/M` of the inverse transform.
pub(crate) fn circ_conv_spectral(
    transform: &Transform,
    spectrum: &[Complex64],
    buf: &mut [Complex64],
    mut tally: Option<&mut CmTally>,
) {
    transform.forward(buf, tally.as_deref_mut());
    for (b, s) in buf.iter_mut().zip(spectrum) {
        *b *= s;
    }
    if let Some(t) = tally.as_deref_mut() {
        t.add_complex(spectrum.len() as u64);
    }
    transform.inverse(buf, tally);
}

/// Naive `O(M^2)` DFT (or inverse without `1/M`), tallied as `M^2` CMs.
pub(crate) fn naive_dft(x: &[Complex64], inverse: bool, tally: Option<&mut CmTally>) -> Vec<Complex64> {
    let m = x.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let out = (0..m)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(n, &v)| {
                    v * Complex64::from_polar(1.0, sign * 2.0 * PI * ((n * k) % m) as f64 / m as f64)
                })
                .sum()
        })
        .collect();
    if let Some(t) = tally {
        t.add_complex((m * m) as u64);
    }
    out
}

/// Spectrum of a real vector, computed without tallying.
pub(crate) fn real_spectrum(v: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = v.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    Transform::new(v.len()).forward(&mut buf, None);
    buf
}
