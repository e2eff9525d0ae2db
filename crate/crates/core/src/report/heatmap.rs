//! Shot-density fields: a 2D histogram over the pitch, Gaussian-smoothed
//! with reflective padding at the edges so mass is conserved (shots
//! cluster at the goal line; truncation would bias edge density).

use crate::pitch::{PitchPoint, PITCH_LENGTH, PITCH_WIDTH};
use crate::report::canvas::PitchCanvas;

pub const DEFAULT_CELLS_X: usize = 60;
pub const DEFAULT_CELLS_Y: usize = 40;
pub const DEFAULT_SIGMA: f64 = 1.5;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub cells_x: usize,
    pub cells_y: usize,
    pub sigma: f64,
    /// Row-major, `values[y * cells_x + x]`.
    values: Vec<f64>,
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (4.0 * sigma).ceil() as i64;
    let mut kernel: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= total;
    }
    kernel
}

/// Half-sample symmetric index folding: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
fn reflect(mut i: i64, n: i64) -> usize {
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

fn convolve_axis(values: &[f64], n_rows: usize, n_cols: usize, kernel: &[f64], rows: bool) -> Vec<f64> {
    let radius = (kernel.len() / 2) as i64;
    let mut out = vec![0.0; values.len()];
    for r in 0..n_rows {
        for c in 0..n_cols {
            let mut acc = 0.0;
            for (k, &weight) in kernel.iter().enumerate() {
                let offset = k as i64 - radius;
                let source = if rows {
                    let cc = reflect(c as i64 + offset, n_cols as i64);
                    values[r * n_cols + cc]
                } else {
                    let rr = reflect(r as i64 + offset, n_rows as i64);
                    values[rr * n_cols + c]
                };
                acc += weight * source;
            }
            out[r * n_cols + c] = acc;
        }
    }
    out
}

impl DensityField {
    /// Histogram the locations into `cells_x x cells_y` cells and smooth
    /// with a separable Gaussian of `sigma` cells.
    pub fn from_locations(
        locations: &[PitchPoint],
        cells_x: usize,
        cells_y: usize,
        sigma: f64,
    ) -> Self {
        let cell_w = PITCH_LENGTH / cells_x as f64;
        let cell_h = PITCH_WIDTH / cells_y as f64;
        let mut values = vec![0.0; cells_x * cells_y];
        for p in locations {
            let cx = ((p.x / cell_w) as usize).min(cells_x - 1);
            let cy = ((p.y / cell_h) as usize).min(cells_y - 1);
            values[cy * cells_x + cx] += 1.0;
        }
        let kernel = gaussian_kernel(sigma);
        if kernel.len() > 1 {
            values = convolve_axis(&values, cells_y, cells_x, &kernel, true);
            values = convolve_axis(&values, cells_y, cells_x, &kernel, false);
        }
        Self {
            cells_x,
            cells_y,
            sigma,
            values,
        }
    }

    pub fn value(&self, cx: usize, cy: usize) -> f64 {
        self.values[cy * self.cells_x + cx]
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Values rescaled so the hottest cell is 1; an all-zero field stays 0.
    pub fn normalized(&self) -> Vec<f64> {
        let max = self.max_value();
        if max == 0.0 {
            return self.values.clone();
        }
        self.values.iter().map(|v| v / max).collect()
    }

    /// Render onto a pitch as a color ramp; cold cells are left unpainted.
    pub fn paint(&self, canvas: &mut PitchCanvas) {
        let cell_w = PITCH_LENGTH / self.cells_x as f64;
        let cell_h = PITCH_WIDTH / self.cells_y as f64;
        let normalized = self.normalized();
        for cy in 0..self.cells_y {
            for cx in 0..self.cells_x {
                let t = normalized[cy * self.cells_x + cx];
                if t <= 0.0 {
                    continue;
                }
                let (r, g, b) = ramp(t);
                canvas.underlay(PitchCanvas::rect(
                    cx as f64 * cell_w,
                    cy as f64 * cell_h,
                    cell_w,
                    cell_h,
                    &format!(r#"fill="rgb({r},{g},{b})""#),
                ));
            }
        }
    }
}

/// White-to-red ramp, integer channels for byte-stable output.
fn ramp(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    (lerp(255.0, 178.0), lerp(255.0, 24.0), lerp(255.0, 43.0))
}
