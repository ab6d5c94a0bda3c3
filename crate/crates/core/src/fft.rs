//! Unnormalized n-dimensional FFTs over row-major planes, with a process-wide plan cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanKey = (usize, bool);

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry((n, forward))
        .or_insert_with(|| {
            let dir = if forward { FftDirection::Forward } else { FftDirection::Inverse };
            FftPlanner::new().plan_fft(n, dir)
        })
        .clone()
}

/// In-place transform of one plane of `n^d` values (d = 1 or 2, row-major).
/// No normalization is applied in either direction.
pub fn transform_plane(data: &mut [Complex64], n: usize, d: usize, forward: bool) {
    let fft = plan(n, forward);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    if d == 1 {
        fft.process_with_scratch(data, &mut scratch);
        return;
    }
    // rows (axis 1 contiguous)
    for row in data.chunks_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    // columns (axis 0)
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = data[i * n + j];
        }
        fft.process_with_scratch(&mut col, &mut scratch);
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
}
