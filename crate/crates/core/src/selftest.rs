//! Embedded oracle suite: every production formula is checked against the
//! independent implementations in [`crate::oracle`] on seeded random inputs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affect::{self, Emotion};
use crate::composites::{activity_arousal, anxiety, attention};
use crate::concept::Concept;
use crate::config::RunConfig;
use crate::gaze::{fit_gaze_rectangle, gaze_score};
use crate::ingest::{AUFrame, EmotionFrame, GazeSample, GrayFrame};
use crate::motion::{
    accumulate_heatmap, activity_score, distinct_count, heatmap_from_frames, kmeans,
    BackgroundSubtractor, ForegroundMask, KMeans, MixtureBackground, MixtureParams,
    ThresholdParams,
};
use crate::oracle;
use crate::rating::{compare_tables, quantize, CibScore, RatingTable};
use crate::synthetic::{synthetic_bundle, synthetic_expected};
use crate::vocalization::{vocalization_score_with, VocalizationWeights, CLOSED_MOUTH_AUS};

/// Relative tolerance for float comparisons against oracles.
pub const REL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, failures: Vec<String>, cases: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{cases} case(s)")
        } else {
            format!("{} of {cases} failed; first: {}", failures.len(), failures[0])
        };
        CheckOutcome {
            name,
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Bucket weights under test; anything but the defaults should fail the
    /// vocalization check.
    pub vocalization_weights: VocalizationWeights,
    pub formula_cases: usize,
    pub agreement_cases: usize,
    pub gaze_cases: usize,
    pub heatmap_shuffles: usize,
    pub kmeans_exhaustive_cases: usize,
    pub kmeans_descent_cases: usize,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: 0,
            vocalization_weights: VocalizationWeights::default(),
            formula_cases: 1000,
            agreement_cases: 200,
            gaze_cases: 100,
            heatmap_shuffles: 50,
            kmeans_exhaustive_cases: 50,
            kmeans_descent_cases: 200,
        }
    }
}

pub fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= REL_TOLERANCE * a.abs().max(b.abs())
}

fn rng(opts: &SelftestOptions, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(opts.seed);
    r.set_stream(stream);
    r
}

fn pct(r: &mut ChaCha8Rng) -> f64 {
    r.random_range(0.0..=100.0)
}

fn random_au_frame(r: &mut ChaCha8Rng, frame_index: u64) -> AUFrame {
    const LEVELS: [f64; 7] = [0.0, 0.5, 0.99, 1.0, 1.5, 3.0, 5.0];
    let mut intensity = BTreeMap::new();
    for au in CLOSED_MOUTH_AUS.into_iter().chain([25, 26]) {
        // sparse frames keep the no-evidence bucket populated
        if r.random_bool(0.4) {
            intensity.insert(au, LEVELS[r.random_range(0..LEVELS.len())]);
        }
    }
    AUFrame {
        frame_index,
        intensity,
    }
}

fn random_emotion_frames(r: &mut ChaCha8Rng) -> Vec<EmotionFrame> {
    let n = r.random_range(1..40);
    (0..n)
        .map(|i| {
            let raw: [f64; 7] = std::array::from_fn(|_| r.random::<f64>());
            let total: f64 = raw.iter().sum();
            EmotionFrame {
                frame_index: i,
                probs: raw.map(|v| v / total),
            }
        })
        .collect()
}

pub fn check_vocalization(opts: &SelftestOptions) -> CheckOutcome {
    let mut r = rng(opts, 1);
    let mut failures = Vec::new();
    for case in 0..opts.formula_cases {
        let n = r.random_range(1..60);
        let frames: Vec<AUFrame> = (0..n).map(|i| random_au_frame(&mut r, i)).collect();
        let got = vocalization_score_with(&frames, &opts.vocalization_weights).ok();
        let want = oracle::vocalization_reference(&frames);
        let ok = match (got, want) {
            (Some(g), Some(w)) => close(g, w),
            (None, None) => true,
            _ => false,
        };
        if !ok {
            failures.push(format!("case {case}: got {got:?}, reference {want:?}"));
        }
    }
    CheckOutcome::new("vocalization weighted mean", failures, opts.formula_cases)
}

pub fn check_arousal_peak(opts: &SelftestOptions) -> CheckOutcome {
    let mut r = rng(opts, 2);
    let mut failures = Vec::new();
    for case in 0..opts.formula_cases {
        let frames = random_emotion_frames(&mut r);
        let summary = affect::summarize(&frames).expect("non-empty");
        let means = oracle::emotion_means_reference(&frames).expect("non-empty");
        let mean_ok = Emotion::ALL
            .iter()
            .all(|&e| close(summary.get(e), means[e.index()]));
        let (got, want) = (affect::arousal_peak(&summary), oracle::peak_reference(&means));
        if !mean_ok || !close(got, want) {
            failures.push(format!("case {case}: peak {got} vs {want}"));
        }
    }
    CheckOutcome::new("arousal peak", failures, opts.formula_cases)
}

pub fn check_composites(opts: &SelftestOptions) -> Vec<CheckOutcome> {
    let mut r = rng(opts, 3);
    let (mut arousal_f, mut anxiety_f, mut attention_f) = (Vec::new(), Vec::new(), Vec::new());
    for case in 0..opts.formula_cases {
        let (a, b, c) = (pct(&mut r), pct(&mut r), pct(&mut r));
        let got = activity_arousal(a, b, c).unwrap();
        let want = oracle::activity_arousal_reference(a, b, c);
        if !close(got, want) {
            arousal_f.push(format!("case {case}: ({a}, {b}, {c}) -> {got} vs {want}"));
        }
        let got = anxiety(a, b, c).unwrap();
        let want = oracle::anxiety_reference(a, b, c);
        if !close(got, want) {
            anxiety_f.push(format!("case {case}: ({a}, {b}, {c}) -> {got} vs {want}"));
        }
        let got = attention(a, b).unwrap();
        let want = oracle::attention_reference(a, b);
        if !close(got, want) {
            attention_f.push(format!("case {case}: ({a}, {b}) -> {got} vs {want}"));
        }
    }
    let n = opts.formula_cases;
    vec![
        CheckOutcome::new("activity-arousal composite", arousal_f, n),
        CheckOutcome::new("anxiety composite", anxiety_f, n),
        CheckOutcome::new("attention composite", attention_f, n),
    ]
}

pub fn check_quantize(opts: &SelftestOptions) -> CheckOutcome {
    let mut r = rng(opts, 4);
    let mut failures = Vec::new();
    // grid points and exact midpoints first, then random percentages
    let mut inputs: Vec<f64> = (0..=16).map(|i| 6.25 * f64::from(i)).collect();
    while inputs.len() < opts.formula_cases {
        inputs.push(pct(&mut r));
    }
    for p in &inputs {
        let got = quantize(*p).map(CibScore::value).ok();
        let want = oracle::quantize_reference(*p);
        if got != want {
            failures.push(format!("{p} -> {got:?} vs {want:?}"));
        }
    }
    CheckOutcome::new("quantize", failures, inputs.len())
}

fn random_gaze(r: &mut ChaCha8Rng, n: usize) -> Vec<GazeSample> {
    (0..n)
        .map(|i| GazeSample {
            frame_index: i as u64,
            timestamp_s: i as f64 / 25.0,
            success: r.random_bool(0.85),
            gaze_angle_x: r.random_range(-0.6..0.6),
            gaze_angle_y: r.random_range(-0.6..0.6),
        })
        .collect()
}

pub fn check_gaze(opts: &SelftestOptions) -> CheckOutcome {
    let mut r = rng(opts, 5);
    let mut failures = Vec::new();
    for case in 0..opts.gaze_cases {
        let n = r.random_range(1..30);
        let mut calibration = random_gaze(&mut r, n);
        calibration[0].success = true;
        let n = r.random_range(1..80);
        let mut scored = random_gaze(&mut r, n);
        scored[0].success = true;
        let rect = fit_gaze_rectangle(&calibration).unwrap();
        let own = gaze_score(&calibration, &rect).unwrap();
        let base = gaze_score(&scored, &rect).unwrap();
        let wider = gaze_score(&scored, &rect.expanded(r.random_range(0.0..0.3))).unwrap();
        let reference = oracle::gaze_reference(&calibration, &scored).unwrap();
        if own != 100.0 || wider < base || !close(base, reference) {
            failures.push(format!(
                "case {case}: self {own}, base {base}, enlarged {wider}, reference {reference}"
            ));
        }
    }
    CheckOutcome::new("gaze self-calibration and monotonicity", failures, opts.gaze_cases)
}

/// Constant video: nothing but the seed frame, so activity must be exactly 0.
pub fn check_constant_video(opts: &SelftestOptions) -> CheckOutcome {
    let mut r = rng(opts, 6);
    let level: u8 = r.random();
    let frames: Vec<GrayFrame> = (0..100).map(|i| GrayFrame::filled(i, 16, 16, level)).collect();
    let mut model = MixtureBackground::new(MixtureParams::default()).unwrap();
    let outcome = heatmap_from_frames(&frames, &mut model, &ThresholdParams::default())
        .and_then(|h| activity_score(&h, None));
    let failures = match outcome {
        Ok(0.0) => vec![],
        other => vec![format!("level {level}: {other:?}")],
    };
    CheckOutcome::new("constant video has zero activity", failures, 1)
}

/// One pixel jumps after a static stretch; per pixel, the mixture must agree
/// with a single adaptive Gaussian.
pub fn check_pixel_jump(opts: &SelftestOptions) -> CheckOutcome {
    let mut r = rng(opts, 7);
    let params = MixtureParams::default();
    let (w, h) = (16u32, 16u32);
    let base: u8 = r.random_range(0..40);
    let target = r.random_range(0..(w * h) as usize);
    let mut frames: Vec<GrayFrame> = (0..40).map(|i| GrayFrame::filled(i, w, h, base)).collect();
    let mut jump = GrayFrame::filled(40, w, h, base);
    jump.pixels[target] = base + 200;
    frames.push(jump);

    let mut model = MixtureBackground::new(params).unwrap();
    let masks: Vec<ForegroundMask> = frames.iter().map(|f| model.apply(f).unwrap()).collect();
    let mut failures = Vec::new();
    for px in 0..(w * h) as usize {
        let mut reference = oracle::SingleGaussianReference::new(f64::from(base), params);
        for (i, frame) in frames.iter().enumerate().skip(1) {
            let want = reference.step(f64::from(frame.pixels[px]));
            if masks[i].is_active(px) != want {
                failures.push(format!("pixel {px}, frame {i}: reference says {want}"));
            }
        }
    }
    let last = masks.last().unwrap();
    if last.active_count() != 1 || !last.is_active(target) {
        failures.push(format!(
            "{} foreground pixel(s) in the jump frame, target {target}",
            last.active_count()
        ));
    }
    CheckOutcome::new("single-pixel jump matches single-Gaussian reference", failures, (w * h) as usize)
}

pub fn check_heatmap(opts: &SelftestOptions) -> Vec<CheckOutcome> {
    let mut r = rng(opts, 8);
    let mut saturation = Vec::new();
    let full: Vec<ForegroundMask> = (0..300)
        .map(|i| ForegroundMask::from_bits(i, 3, 2, &[true; 6]))
        .collect();
    match accumulate_heatmap(&full) {
        Ok(h) if h.counts.iter().all(|&c| c == 255) => {}
        other => saturation.push(format!("{other:?}")),
    }
    let at_254 = accumulate_heatmap(&full[..254]).unwrap();
    if at_254.counts.iter().any(|&c| c != 254) {
        saturation.push("counts below 255 must not saturate early".into());
    }

    let mut order = Vec::new();
    for case in 0..opts.heatmap_shuffles {
        let (w, h) = (r.random_range(1..12u32), r.random_range(1..12u32));
        let n = r.random_range(1..400);
        let density = r.random_range(0.05..0.95);
        let mut masks: Vec<ForegroundMask> = (0..n)
            .map(|i| {
                let bits: Vec<bool> = (0..w * h).map(|_| r.random_bool(density)).collect();
                ForegroundMask::from_bits(i, w, h, &bits)
            })
            .collect();
        let first = accumulate_heatmap(&masks).unwrap();
        masks.shuffle(&mut r);
        let shuffled = accumulate_heatmap(&masks).unwrap();
        let reference = oracle::heatmap_reference(&masks);
        let activity = activity_score(&first, None).unwrap();
        if first != shuffled
            || first.counts != reference
            || !close(activity, oracle::activity_reference(&reference))
        {
            order.push(format!("case {case}: {w}x{h}, {n} masks"));
        }
    }
    vec![
        CheckOutcome::new("heatmap saturates at 255", saturation, 2),
        CheckOutcome::new("heatmap is order invariant", order, opts.heatmap_shuffles),
    ]
}

fn random_points(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| vec![f64::from(r.random_range(-20i32..20)), f64::from(r.random_range(-20i32..20))])
        .collect()
}

pub fn check_kmeans(opts: &SelftestOptions) -> Vec<CheckOutcome> {
    let mut r = rng(opts, 9);
    let mut optimum = Vec::new();
    let mut done = 0;
    while done < opts.kmeans_exhaustive_cases {
        let n = r.random_range(1..=8);
        let points = random_points(&mut r, n);
        let distinct = distinct_count(&points);
        let k = r.random_range(1..=distinct.min(4));
        let (best, centroids) = oracle::exhaustive_kmeans(&points, k);
        match KMeans::new(k, opts.seed).fit_from(&points, centroids) {
            Ok(c) if (c.objective() - best).abs() <= 1e-9 => {}
            Ok(c) => optimum.push(format!("n={n} k={k}: {} vs optimum {best}", c.objective())),
            Err(e) => optimum.push(format!("n={n} k={k}: {e}")),
        }
        done += 1;
    }

    let mut descent = Vec::new();
    for case in 0..opts.kmeans_descent_cases {
        let n = r.random_range(2..60);
        let points = random_points(&mut r, n);
        let k = r.random_range(1..=distinct_count(&points).min(6));
        let seed: u64 = r.random();
        match kmeans(&points, k, seed) {
            Ok(c) => {
                if let Some(i) = c.objective_history.windows(2).position(|w| w[1] > w[0]) {
                    descent.push(format!(
                        "case {case}: objective rose at iteration {}: {:?}",
                        i + 1,
                        c.objective_history
                    ));
                }
            }
            Err(e) => descent.push(format!("case {case}: {e}")),
        }
    }
    vec![
        CheckOutcome::new(
            "k-means reaches the exhaustive optimum from oracle centroids",
            optimum,
            opts.kmeans_exhaustive_cases,
        ),
        CheckOutcome::new("k-means objective never increases", descent, opts.kmeans_descent_cases),
    ]
}

fn random_table(r: &mut ChaCha8Rng, rater: &str) -> RatingTable {
    let videos = r.random_range(1..=50);
    let mut t = RatingTable::new(rater);
    for v in 0..videos {
        for c in Concept::ALL {
            if r.random_bool(0.8) {
                let score = CibScore::from_half_points(r.random_range(2..=10)).unwrap();
                t.insert(format!("video{v:02}"), c, score).unwrap();
            }
        }
    }
    t
}

/// The two-video, two-item table pair with one two-point disagreement.
pub fn agreement_fixture() -> (RatingTable, RatingTable) {
    let s = |v: f64| CibScore::new(v).unwrap();
    let mut a = RatingTable::new("A");
    let mut b = RatingTable::new("B");
    for (video, item, x, y) in [
        ("v1", Concept::Gaze, 3.0, 3.5),
        ("v1", Concept::Vocalization, 3.0, 4.0),
        ("v2", Concept::Gaze, 3.0, 3.0),
        ("v2", Concept::Vocalization, 2.0, 4.0),
    ] {
        a.insert(video, item, s(x)).unwrap();
        b.insert(video, item, s(y)).unwrap();
    }
    (a, b)
}

pub fn check_agreement(opts: &SelftestOptions) -> CheckOutcome {
    let mut r = rng(opts, 10);
    let mut failures = Vec::new();
    for case in 0..opts.agreement_cases {
        let a = random_table(&mut r, "A");
        let b = random_table(&mut r, "B");
        let items: Vec<Concept> = Concept::ALL
            .iter()
            .copied()
            .filter(|_| r.random_bool(0.7))
            .collect();
        let got = compare_tables(&a, &b, &items).ok();
        let want = oracle::agreement_recount(&a, &b, &items);
        let same = match (&got, &want) {
            (Some(g), Some(w)) => {
                g.average == w.average
                    && g.per_video
                        .iter()
                        .map(|v| (v.video_id.clone(), v.percent))
                        .eq(w.per_video.iter().cloned())
                    && g.per_item.iter().map(|i| (i.item, i.percent)).eq(w.per_item.iter().copied())
            }
            (None, None) => true,
            _ => false,
        };
        if !same {
            failures.push(format!("case {case}: items {items:?}"));
        }
    }
    let (a, b) = agreement_fixture();
    match compare_tables(&a, &b, &Concept::ALL) {
        Ok(rep) => {
            let per_video: Vec<f64> = rep.per_video.iter().map(|v| v.percent).collect();
            if per_video != [100.0, 50.0] || rep.average != 75.0 {
                failures.push(format!("fixture: per-video {per_video:?}, average {}", rep.average));
            }
        }
        Err(e) => failures.push(format!("fixture: {e}")),
    }
    CheckOutcome::new("agreement matches nested-loop recount", failures, opts.agreement_cases + 1)
}

/// The synthetic video scores to its hand-computed vector, identically on
/// repeated runs.
pub fn check_synthetic(opts: &SelftestOptions) -> CheckOutcome {
    let cfg = RunConfig {
        seed: opts.seed,
        ..Default::default()
    };
    let bundle = synthetic_bundle();
    let mut failures = Vec::new();
    match (crate::score_video(&bundle, &cfg), crate::score_video(&bundle, &cfg)) {
        (Ok(first), Ok(second)) => {
            for (c, want) in synthetic_expected().iter() {
                let (got, want) = (first.scores.get(c), want.unwrap());
                if !got.is_some_and(|g| (g - want).abs() <= 1e-6) {
                    failures.push(format!("{c}: {got:?} vs {want}"));
                }
            }
            if first.scores != second.scores || first.heatmap != second.heatmap {
                failures.push("two runs differ".into());
            }
        }
        (a, b) => failures.push(format!("{:?} / {:?}", a.err(), b.err())),
    }
    CheckOutcome::new("synthetic video matches hand-computed scores", failures, 7)
}

pub fn run_selftest(opts: &SelftestOptions) -> Vec<CheckOutcome> {
    let mut out = vec![
        check_vocalization(opts),
        check_arousal_peak(opts),
    ];
    out.extend(check_composites(opts));
    out.push(check_quantize(opts));
    out.push(check_gaze(opts));
    out.push(check_constant_video(opts));
    out.push(check_pixel_jump(opts));
    out.extend(check_heatmap(opts));
    out.extend(check_kmeans(opts));
    out.push(check_agreement(opts));
    out.push(check_synthetic(opts));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SelftestOptions {
        SelftestOptions {
            formula_cases: 200,
            agreement_cases: 40,
            gaze_cases: 30,
            heatmap_shuffles: 10,
            kmeans_exhaustive_cases: 15,
            kmeans_descent_cases: 40,
            ..Default::default()
        }
    }

    #[test]
    fn clean_build_passes() {
        for c in run_selftest(&small()) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn tampered_weights_fail_the_vocalization_check() {
        let opts = SelftestOptions {
            vocalization_weights: VocalizationWeights {
                medium: 40.0,
                ..Default::default()
            },
            ..small()
        };
        let outcome = check_vocalization(&opts);
        assert!(!outcome.passed);
        assert!(run_selftest(&opts).iter().filter(|c| !c.passed).count() == 1);
    }

    #[test]
    fn seeded_runs_are_identical() {
        assert_eq!(run_selftest(&small()), run_selftest(&small()));
    }
}
