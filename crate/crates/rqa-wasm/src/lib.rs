//! Browser bindings for the RQA pipeline: descriptor computation,
//! recurrence-plot pixels and shuffle-surrogate significance for a single
//! pasted text.

use wasm_bindgen::prelude::*;

use rqa_core::alphabet::{normalize, Alphabet, SymbolSequence};
use rqa_core::embed::{embed, EmbeddingConfig};
use rqa_core::metrics::compute_metrics;
use rqa_core::recurrence::recurrence_set_grouped;
use rqa_core::surrogate::{significance, surrogate_distribution};

fn js_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn prepare(
    text: &str,
    alphabet: &str,
    m: usize,
    tau: usize,
    lmin: usize,
) -> Result<(SymbolSequence, EmbeddingConfig), String> {
    let alphabet = Alphabet::from_spec(alphabet).map_err(js_err)?;
    let seq = normalize(text, &alphabet, None, "input").map_err(js_err)?;
    let config = EmbeddingConfig {
        dimension: m,
        delay: tau,
        lmin,
        trend_exclude_tail: false,
    };
    config.validate().map_err(js_err)?;
    Ok((seq, config))
}

/// Descriptors for one text as a JSON string:
/// `{"n":..,"n_e":..,"rec":..,"det":..,"maxline":..,"ent":..,"trend":..}`.
#[wasm_bindgen]
pub fn analyze_text(
    text: &str,
    alphabet: &str,
    m: usize,
    tau: usize,
    lmin: usize,
) -> Result<String, String> {
    let (seq, config) = prepare(text, alphabet, m, tau, lmin)?;
    let es = embed(&seq, &config).map_err(js_err)?;
    let metrics = compute_metrics(&recurrence_set_grouped(&es), &config);
    Ok(serde_json::json!({
        "n": seq.len(),
        "n_e": es.effective_len(),
        "rec": metrics.rec_percent,
        "det": metrics.det_percent,
        "maxline": metrics.maxline,
        "ent": metrics.entropy,
        "trend": metrics.trend,
    })
    .to_string())
}

/// Square binary recurrence-plot image, one byte per cell.
#[wasm_bindgen]
pub struct PlotPixels {
    size: usize,
    data: Vec<u8>,
}

#[wasm_bindgen]
impl PlotPixels {
    #[wasm_bindgen(getter)]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Row-major cells, origin top-left, 1 = recurrent.
    #[wasm_bindgen(getter)]
    pub fn data(&self) -> Vec<u8> {
        self.data.clone()
    }
}

/// Render the recurrence plot of a text.
#[wasm_bindgen]
pub fn recurrence_plot(
    text: &str,
    alphabet: &str,
    m: usize,
    tau: usize,
    lmin: usize,
) -> Result<PlotPixels, String> {
    let (seq, config) = prepare(text, alphabet, m, tau, lmin)?;
    let es = embed(&seq, &config).map_err(js_err)?;
    let bmp = rqa_core::plot::recurrence_plot_bitmap(&recurrence_set_grouped(&es));
    let n = bmp.size();
    let mut data = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            if bmp.get(i, j) {
                data[i * n + j] = 1;
            }
        }
    }
    Ok(PlotPixels { size: n, data })
}

/// Shuffle-surrogate significance test as a JSON string with observed
/// values, surrogate mean/sd, z and empirical p for REC and DET.
#[wasm_bindgen]
pub fn surrogate_test(
    text: &str,
    alphabet: &str,
    m: usize,
    tau: usize,
    lmin: usize,
    n_surrogates: usize,
    seed: u64,
) -> Result<String, String> {
    let (seq, config) = prepare(text, alphabet, m, tau, lmin)?;
    let es = embed(&seq, &config).map_err(js_err)?;
    let observed = compute_metrics(&recurrence_set_grouped(&es), &config);
    let summary = surrogate_distribution(&seq, &config, n_surrogates, seed).map_err(js_err)?;
    let sig = significance(&observed, &summary);
    let metric = |s: &rqa_core::surrogate::MetricSignificance| {
        serde_json::json!({
            "observed": s.observed,
            "surrogate_mean": s.surrogate_mean,
            "surrogate_sd": s.surrogate_sd,
            "z": s.z,
            "empirical_p": s.empirical_p,
            "above": s.above,
        })
    };
    Ok(serde_json::json!({
        "n_surrogates": summary.n_surrogates,
        "seed": seed,
        "rng": summary.rng,
        "rec": metric(&sig.rec),
        "det": metric(&sig.det),
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_matches_library() {
        let json = analyze_text("abcabcab", "english-26", 3, 1, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rec"], 20.0);
        assert_eq!(v["det"], 100.0);
        assert_eq!(v["n_e"], 6);
    }

    #[test]
    fn plot_pixels_symmetric() {
        let p = recurrence_plot("abcabcab", "english-26", 3, 1, 2).unwrap();
        assert_eq!(p.size(), 6);
        let d = p.data();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(d[i * 6 + j], d[j * 6 + i]);
            }
        }
        assert_eq!(d.iter().filter(|&&b| b == 1).count(), 12);
    }

    #[test]
    fn surrogate_test_reports_p() {
        let refrain = "abcdefghij".repeat(12);
        let json = surrogate_test(&refrain, "english-26", 3, 1, 2, 20, 9).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["n_surrogates"], 20);
        let p = v["rec"]["empirical_p"].as_f64().unwrap();
        assert!((p - 1.0 / 21.0).abs() < 1e-12, "highly repetitive text beats all surrogates");
    }

    #[test]
    fn bad_input_is_error() {
        assert!(analyze_text("12345", "english-26", 3, 1, 2).is_err());
        assert!(analyze_text("abcdef", "klingon-9", 3, 1, 2).is_err());
    }
}
