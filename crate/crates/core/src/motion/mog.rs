use crate::ingest::GrayFrame;

use super::{ForegroundMask, MotionError};

/// A stateful per-video background model. One instance must see a video's
/// frames in order; it is not shared between videos.
pub trait BackgroundSubtractor: Send {
    fn name(&self) -> &'static str;

    /// Classifies `frame` against the current model, then updates the model.
    fn apply(&mut self, frame: &GrayFrame) -> Result<ForegroundMask, MotionError>;
}

/// Gaussian-mixture background model settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    /// Components per pixel.
    pub components: usize,
    pub learning_rate: f64,
    /// Match distance in standard deviations.
    pub match_threshold: f64,
    /// Weight fraction that the background components must exceed.
    pub background_ratio: f64,
    pub min_variance: f64,
    /// Variance given to a freshly created component.
    pub initial_variance: f64,
}

impl Default for MixtureParams {
    fn default() -> Self {
        MixtureParams {
            components: 3,
            learning_rate: 0.02,
            match_threshold: 2.5,
            background_ratio: 0.7,
            min_variance: 4.0,
            initial_variance: 225.0,
        }
    }
}

impl MixtureParams {
    pub fn validate(&self) -> Result<(), MotionError> {
        let bad = |m: String| Err(MotionError::Parameter(m));
        if self.components == 0 {
            return bad("mixture needs at least one component".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate < 1.0) {
            return bad(format!("learning rate {} outside (0, 1)", self.learning_rate));
        }
        if !(self.match_threshold > 0.0 && self.match_threshold.is_finite()) {
            return bad(format!("match threshold {} must be positive", self.match_threshold));
        }
        if !(self.background_ratio > 0.0 && self.background_ratio < 1.0) {
            return bad(format!(
                "background ratio {} outside (0, 1)",
                self.background_ratio
            ));
        }
        if !(self.min_variance > 0.0 && self.min_variance.is_finite()) {
            return bad(format!("variance floor {} must be positive", self.min_variance));
        }
        if !(self.initial_variance >= self.min_variance && self.initial_variance.is_finite()) {
            return bad(format!(
                "initial variance {} below the floor {}",
                self.initial_variance, self.min_variance
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Component {
    weight: f64,
    mean: f64,
    variance: f64,
}

impl Component {
    fn fitness(&self) -> f64 {
        self.weight / self.variance.sqrt()
    }
}

/// Per-pixel mixture of Gaussians over intensity.
///
/// Each pixel's components are kept sorted by `weight / sigma`, strongest
/// first. The background is the shortest prefix whose weights sum past
/// `background_ratio`. A pixel is foreground when no background component
/// lies within `match_threshold` standard deviations of its value.
///
/// The first frame only seeds the model and is reported as all background.
#[derive(Debug, Clone)]
pub struct MixtureBackground {
    params: MixtureParams,
    width: u32,
    height: u32,
    // pixel-major, `params.components` entries per pixel
    model: Vec<Component>,
}

impl MixtureBackground {
    pub fn new(params: MixtureParams) -> Result<Self, MotionError> {
        params.validate()?;
        Ok(MixtureBackground {
            params,
            width: 0,
            height: 0,
            model: Vec::new(),
        })
    }

    pub fn params(&self) -> &MixtureParams {
        &self.params
    }

    fn seed(&mut self, frame: &GrayFrame) {
        let k = self.params.components;
        let unused = Component {
            weight: 0.0,
            mean: 0.0,
            variance: self.params.initial_variance,
        };
        self.width = frame.width;
        self.height = frame.height;
        self.model = Vec::with_capacity(frame.pixels.len() * k);
        for &p in &frame.pixels {
            self.model.push(Component {
                weight: 1.0,
                mean: f64::from(p),
                variance: self.params.initial_variance,
            });
            self.model.extend(std::iter::repeat_n(unused, k - 1));
        }
    }

    /// Sum of component weights at pixel `i`.
    pub fn weight_sum(&self, i: usize) -> f64 {
        let k = self.params.components;
        self.model[i * k..(i + 1) * k].iter().map(|c| c.weight).sum()
    }

    /// Smallest component variance anywhere in the model.
    pub fn min_model_variance(&self) -> Option<f64> {
        self.model
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| c.variance)
            .min_by(f64::total_cmp)
    }
}

/// Classifies and updates one pixel's mixture; returns whether the value was
/// foreground.
fn step_pixel(comps: &mut [Component], x: f64, p: &MixtureParams) -> bool {
    let alpha = p.learning_rate;

    let mut cumulative = 0.0;
    let mut background_len = comps.len();
    for (i, c) in comps.iter().enumerate() {
        cumulative += c.weight;
        if cumulative > p.background_ratio {
            background_len = i + 1;
            break;
        }
    }

    let matched = comps.iter().position(|c| {
        c.weight > 0.0 && (x - c.mean).abs() <= p.match_threshold * c.variance.sqrt()
    });
    let foreground = matched.is_none_or(|k| k >= background_len);

    for c in comps.iter_mut() {
        c.weight *= 1.0 - alpha;
    }
    match matched {
        Some(k) => {
            let c = &mut comps[k];
            c.weight += alpha;
            c.mean += alpha * (x - c.mean);
            let d = x - c.mean;
            c.variance = ((1.0 - alpha) * c.variance + alpha * d * d).max(p.min_variance);
        }
        None => {
            // replace the weakest component with one centred on the value
            let last = comps.len() - 1;
            comps[last] = Component {
                weight: alpha,
                mean: x,
                variance: p.initial_variance,
            };
            let total: f64 = comps.iter().map(|c| c.weight).sum();
            for c in comps.iter_mut() {
                c.weight /= total;
            }
        }
    }

    // stable insertion sort by fitness, descending
    for i in 1..comps.len() {
        let mut j = i;
        while j > 0 && comps[j].fitness() > comps[j - 1].fitness() {
            comps.swap(j, j - 1);
            j -= 1;
        }
    }
    foreground
}

impl BackgroundSubtractor for MixtureBackground {
    fn name(&self) -> &'static str {
        "mog"
    }

    fn apply(&mut self, frame: &GrayFrame) -> Result<ForegroundMask, MotionError> {
        if self.model.is_empty() {
            self.seed(frame);
            return Ok(ForegroundMask::background(
                frame.frame_index,
                frame.width,
                frame.height,
            ));
        }
        if (frame.width, frame.height) != (self.width, self.height) {
            return Err(MotionError::DimensionMismatch {
                frame: frame.frame_index,
                got_w: frame.width,
                got_h: frame.height,
                want_w: self.width,
                want_h: self.height,
            });
        }
        let k = self.params.components;
        let params = self.params;
        let values = self
            .model
            .chunks_exact_mut(k)
            .zip(&frame.pixels)
            .map(|(comps, &px)| {
                if step_pixel(comps, f64::from(px), &params) {
                    255
                } else {
                    0
                }
            })
            .collect();
        Ok(ForegroundMask {
            frame_index: frame.frame_index,
            width: frame.width,
            height: frame.height,
            values,
        })
    }
}
