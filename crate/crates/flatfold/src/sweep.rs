//! Parameter grids and order-preserving parallel evaluation.

use std::thread;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridError(pub String);

impl Grid {
    pub fn single(x: f64) -> Grid {
        Grid { start: x, stop: x, points: 1, scale: Scale::Linear }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.points == 1 {
            return if self.start.is_finite() && self.start >= 0.0 {
                Ok(())
            } else {
                Err(GridError(format!("parameter {} must be finite and non-negative", self.start)))
            };
        }
        if self.points < 2 {
            return Err(GridError("a sweep needs at least 2 points".into()));
        }
        if !(self.start > 0.0 && self.stop > self.start && self.stop.is_finite()) {
            return Err(GridError(format!("sweep bounds must satisfy 0 < start < stop, got {} .. {}", self.start, self.stop)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let n = (self.points - 1) as f64;
        match self.scale {
            Scale::Linear => (0..self.points).map(|i| self.start + (self.stop - self.start) * i as f64 / n).collect(),
            Scale::Log => flatfold_core::latticegas::log_grid(self.start, self.stop, self.points),
        }
    }
}

/// `f` over `xs` on up to `threads` threads, results in input order.
pub fn par_map<T: Send, F: Fn(f64) -> T + Sync>(xs: &[f64], threads: usize, f: F) -> Vec<T> {
    let threads = threads.clamp(1, xs.len().max(1));
    let chunk = xs.len().div_ceil(threads).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = xs
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                s.spawn(move || c.iter().map(|&x| f(x)).collect::<Vec<T>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep thread panicked")).collect()
    })
}

/// Row indices flagged as critical: the row at the transition, or the first
/// row past it when the grid brackets it.
pub fn bracketing_rows(xs: &[f64], transition: Option<f64>) -> Vec<bool> {
    let mut flags = vec![false; xs.len()];
    let Some(c) = transition else { return flags };
    for i in 0..xs.len() {
        let hit = (xs[i] - c).abs() <= 1e-12 * c;
        let crossed = i > 0 && xs[i - 1] < c && xs[i] > c && (xs[i - 1] - c).abs() > 1e-12 * c;
        if hit || crossed {
            flags[i] = true;
        }
    }
    flags
}
