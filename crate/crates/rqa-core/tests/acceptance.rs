//! Acceptance suite. Each test exercises one release criterion and prints a
//! PASS line (run with `--nocapture` to see them).

use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rqa_core::alphabet::{letter_histogram, normalize, Alphabet, SymbolSequence};
use rqa_core::corpus::{analyze_corpus, RunConfig};
use rqa_core::embed::{embed, EmbeddingConfig};
use rqa_core::metrics::{compute_metrics, RqaMetrics};
use rqa_core::recurrence::{recurrence_set_grouped, recurrence_set_naive};
use rqa_core::stats::{f_test, pearson, t_critical, welch_t};
use rqa_core::surrogate::{shuffle, significance, surrogate_distribution};

fn test_alphabet(size: u8) -> Alphabet {
    let letters: Vec<char> = ('a'..='z').take(size as usize).collect();
    Alphabet::new("test", &letters).unwrap()
}

fn random_sequence(rng: &mut ChaCha8Rng, alphabet_size: u8, len: usize) -> SymbolSequence {
    let codes: Vec<u8> = (0..len).map(|_| rng.random_range(0..alphabet_size)).collect();
    SymbolSequence::from_codes(codes, test_alphabet(alphabet_size), "rand").unwrap()
}

fn english_text(text: &str) -> SymbolSequence {
    normalize(text, &Alphabet::preset("english-26").unwrap(), None, "t").unwrap()
}

fn metrics_for(seq: &SymbolSequence, cfg: &EmbeddingConfig) -> RqaMetrics {
    let es = embed(seq, cfg).unwrap();
    compute_metrics(&recurrence_set_grouped(&es), cfg)
}

/// Criterion 1: grouped recurrence equals the naive oracle on 200 seeded
/// random sequences, in under 10 s.
#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    while checked < 200 {
        let size = rng.random_range(2..=26u8);
        let len = rng.random_range(10..=400usize);
        let m = rng.random_range(2..=5usize);
        let tau = rng.random_range(1..=2usize);
        let seq = random_sequence(&mut rng, size, len);
        let cfg = EmbeddingConfig {
            dimension: m,
            delay: tau,
            lmin: 2,
            trend_exclude_tail: false,
        };
        let Ok(es) = embed(&seq, &cfg) else { continue };
        assert_eq!(
            recurrence_set_grouped(&es),
            recurrence_set_naive(&es),
            "divergence at size={size} len={len} m={m} tau={tau}"
        );
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("PASS criterion 1: grouped == naive on 200 random sequences ({elapsed:?})");
}

/// Criterion 2: hand-derived metrics for "abcabcab" and "banana" at 1e-9.
#[test]
fn criterion_2_hand_derived_metrics() {
    let cfg = EmbeddingConfig::default();
    let m = metrics_for(&english_text("abcabcab"), &cfg);
    assert!((m.rec_percent - 20.0).abs() < 1e-9);
    assert!((m.det_percent - 100.0).abs() < 1e-9);
    assert_eq!(m.maxline, 3);
    assert!(m.entropy.abs() < 1e-9);
    assert!(m.trend.abs() < 1e-9);

    let b = metrics_for(&english_text("banana"), &cfg);
    assert!((b.rec_percent - 100.0 / 6.0).abs() < 1e-9);
    assert!(b.det_percent.abs() < 1e-9);
    println!("PASS criterion 2: abcabcab and banana metrics match hand derivation");
}

/// Criterion 3: all five metrics bit-identical under random letter
/// bijections, 50 random texts.
#[test]
fn criterion_3_code_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let cfg = EmbeddingConfig::default();
    for _ in 0..50 {
        let size = rng.random_range(2..=26u8);
        let len = rng.random_range(50..=400usize);
        let seq = random_sequence(&mut rng, size, len);

        let mut table: Vec<u8> = (0..size).collect();
        table.shuffle(&mut rng);
        let mapped: Vec<u8> = seq.codes().iter().map(|&c| table[c as usize]).collect();
        let subst =
            SymbolSequence::from_codes(mapped, test_alphabet(size), "subst").unwrap();

        let a = metrics_for(&seq, &cfg);
        let b = metrics_for(&subst, &cfg);
        assert_eq!(a.rec_percent.to_bits(), b.rec_percent.to_bits());
        assert_eq!(a.det_percent.to_bits(), b.det_percent.to_bits());
        assert_eq!(a.maxline, b.maxline);
        assert_eq!(a.entropy.to_bits(), b.entropy.to_bits());
        assert_eq!(a.trend.to_bits(), b.trend.to_bits());
    }
    println!("PASS criterion 3: metrics bit-exact under 50 random letter bijections");
}

/// Refrain text: a fixed 40-letter refrain repeated 10 times with 100
/// random filler letters after each repeat (1400 letters total).
fn refrain_text(rng: &mut ChaCha8Rng) -> SymbolSequence {
    let refrain: Vec<u8> = (0..40).map(|_| rng.random_range(0..26u8)).collect();
    let mut codes = Vec::with_capacity(1400);
    for _ in 0..10 {
        codes.extend_from_slice(&refrain);
        codes.extend((0..100).map(|_| rng.random_range(0..26u8)));
    }
    SymbolSequence::from_codes(codes, test_alphabet(26), "refrain").unwrap()
}

/// Criterion 4: the refrain text beats all 100 surrogates on REC and DET;
/// an i.i.d. text with the same histogram is non-significant in >= 90 of
/// 100 trials. Under 60 s.
#[test]
fn criterion_4_structure_detection() {
    let start = Instant::now();
    let cfg = EmbeddingConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(404);

    let structured = refrain_text(&mut rng);
    let observed = metrics_for(&structured, &cfg);
    let summary = surrogate_distribution(&structured, &cfg, 100, 4040).unwrap();
    let sig = significance(&observed, &summary);
    assert!(
        (sig.rec.empirical_p - 1.0 / 101.0).abs() < 1e-12 && sig.rec.empirical_p <= 0.01,
        "REC p = {}",
        sig.rec.empirical_p
    );
    assert!(
        (sig.det.empirical_p - 1.0 / 101.0).abs() < 1e-12,
        "DET p = {}",
        sig.det.empirical_p
    );

    // i.i.d. counterpart: permutations of the same letters
    let mut non_significant = 0;
    for trial in 0..100u64 {
        let iid = shuffle(&structured, 50_000 + trial);
        assert_eq!(letter_histogram(&iid), letter_histogram(&structured));
        let obs = metrics_for(&iid, &cfg);
        let sm = surrogate_distribution(&iid, &cfg, 100, 60_000 + trial).unwrap();
        if significance(&obs, &sm).rec.empirical_p > 0.05 {
            non_significant += 1;
        }
    }
    assert!(non_significant >= 90, "only {non_significant}/100 trials non-significant");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "PASS criterion 4: refrain p = 1/101 on REC and DET; i.i.d. non-significant in {non_significant}/100 trials ({elapsed:?})"
    );
}

/// Twelve 1200-letter texts over a 6-letter alphabet, ramping in
/// repetitiveness: text k carries round(sqrt(k/11)*30) copies of a fixed
/// 20-letter motif spread evenly among random blocks. The sqrt ramp keeps
/// REC roughly linear in k (recurrent pairs grow with copies squared), and
/// the small alphabet gives random blocks a nonzero DET baseline, so both
/// descriptors rise smoothly instead of saturating.
fn repetitiveness_corpus(rng: &mut ChaCha8Rng) -> Vec<SymbolSequence> {
    const ALPHA: u8 = 6;
    let motif: Vec<u8> = (0..20).map(|_| rng.random_range(0..ALPHA)).collect();
    (0..12usize)
        .map(|k| {
            let copies = ((k as f64 / 11.0).sqrt() * 30.0).round() as usize;
            let mut codes = Vec::with_capacity(1200);
            for b in 0..60 {
                let is_motif = copies > 0 && b * copies / 60 != (b + 1) * copies / 60;
                if is_motif {
                    codes.extend_from_slice(&motif);
                } else {
                    codes.extend((0..20).map(|_| rng.random_range(0..ALPHA)));
                }
            }
            SymbolSequence::from_codes(codes, test_alphabet(ALPHA), format!("level-{k}")).unwrap()
        })
        .collect()
}

/// Criterion 5: REC at m=3 correlates with REC at m=4 and m=5 (r >= 0.9)
/// across the repetitiveness ramp.
#[test]
fn criterion_5_dimension_stability() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let corpus = repetitiveness_corpus(&mut rng);
    let rec_at = |m: usize| -> Vec<f64> {
        let cfg = EmbeddingConfig {
            dimension: m,
            ..Default::default()
        };
        corpus.iter().map(|s| metrics_for(s, &cfg).rec_percent).collect()
    };
    let rec3 = rec_at(3);
    let r34 = pearson(&rec3, &rec_at(4)).unwrap().r;
    let r35 = pearson(&rec3, &rec_at(5)).unwrap().r;
    assert!(r34 >= 0.9, "r(m3,m4) = {r34}");
    assert!(r35 >= 0.9, "r(m3,m5) = {r35}");
    println!("PASS criterion 5: REC stable across dimensions (r34 = {r34:.4}, r35 = {r35:.4})");
}

/// Criterion 6: REC and DET positively coupled over the 12-text corpus.
#[test]
fn criterion_6_rec_det_coupling() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let corpus = repetitiveness_corpus(&mut rng);
    let cfg = EmbeddingConfig::default();
    let (rec, det): (Vec<f64>, Vec<f64>) = corpus
        .iter()
        .map(|s| {
            let m = metrics_for(s, &cfg);
            (m.rec_percent, m.det_percent)
        })
        .unzip();
    let c = pearson(&rec, &det).unwrap();
    assert!(c.r > 0.7, "r = {}", c.r);
    assert!(c.p < 0.05, "p = {}", c.p);
    println!("PASS criterion 6: pearson(REC, DET) = {:.4} (p = {:.2e})", c.r, c.p);
}

/// Criterion 7: statistics against hand-derived and tabulated values.
#[test]
fn criterion_7_statistics_validation() {
    let r = pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
    assert!((r.r - 0.5).abs() < 1e-12);

    let t = welch_t(&[1.0, 2.0, 3.0, 4.0], &[2.0, 4.0, 6.0, 8.0]).unwrap();
    assert!((t.t - (-1.7321)).abs() < 1e-4);

    // sample variances 8 and 2
    let f = f_test(&[0.0, 4.0], &[0.0, 2.0]).unwrap();
    assert!((f.f - 4.0).abs() < 1e-12);

    assert!((t_critical(10.0, 0.05) - 2.228).abs() < 1e-3);
    println!("PASS criterion 7: pearson 0.5, welch -1.7321, F 4.0, t-crit 2.228");
}

/// Criterion 8: byte-identical reports across runs and worker counts;
/// 100,000-letter metrics in under 5 s on the grouped path.
#[test]
fn criterion_8_determinism_and_performance() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut paths: Vec<PathBuf> = Vec::new();
    for k in 0..4 {
        let text: String = (0..600)
            .map(|_| (b'a' + rng.random_range(0..26u8)) as char)
            .collect();
        let p = dir.path().join(format!("t{k}.txt"));
        std::fs::write(&p, text).unwrap();
        paths.push(p);
    }
    let mut cfg = RunConfig::new(Alphabet::preset("english-26").unwrap());
    cfg.n_surrogates = 20;
    cfg.seed = 99;
    let base = analyze_corpus(&paths, &cfg).unwrap().report.to_json();
    for workers in [Some(1), Some(4), None] {
        let mut c = cfg.clone();
        c.workers = workers;
        assert_eq!(
            analyze_corpus(&paths, &c).unwrap().report.to_json(),
            base,
            "report differs at workers={workers:?}"
        );
    }

    let long = random_sequence(&mut ChaCha8Rng::seed_from_u64(881), 21, 100_000);
    let cfg = EmbeddingConfig::default();
    let start = Instant::now();
    let es = embed(&long, &cfg).unwrap();
    let pairs = recurrence_set_grouped(&es);
    let m = compute_metrics(&pairs, &cfg);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "100k-letter metrics took {elapsed:?}");
    assert!(m.rec_percent > 0.0);
    println!(
        "PASS criterion 8: byte-identical reports across worker counts; 100k letters in {elapsed:?} ({} pairs held sparsely)",
        pairs.len()
    );
}
