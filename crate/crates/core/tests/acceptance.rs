//! Acceptance criteria. Each test prints one PASS/FAIL line.

mod common;

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use layoutforge::corpus::{tokenize, AlphabetConfig, LetterStream, Token};
use layoutforge::evaluator::{self, evaluate_parallel, evaluate_with, EvaluateOptions, EvaluationReport};
use layoutforge::layout::{self, build_layout_with, Geometry, KeyboardLayout, Slot};
use layoutforge::partition::{self, HandPartition, PartitionOptions, Rule};
use layoutforge::stats::{self, count_ngrams, NGramTable};
use layoutforge::Hand;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn criterion(id: u32, name: &str, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) => println!("[PASS] criterion {id}: {name} ({elapsed:.2?})"),
        Err(e) => {
            println!("[FAIL] criterion {id}: {name} ({elapsed:.2?})");
            resume_unwind(e);
        }
    }
}

fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: {actual} differs from {expected} by more than {tol}"
    );
}

const TOTAL_LETTERS: u64 = 821_914;
const INVOLVEMENT_KA: u64 = 38_291;

/// Published association rows for ক: (digraph, count, support, confidence).
const KA_ROWS: [(&str, u64, f64, f64); 7] = [
    ("কে", 8316, 1.011785, 21.717897),
    ("কা", 8000, 0.973338, 20.892638),
    ("কর", 4134, 0.502972, 10.796271),
    ("কি", 3094, 0.376438, 8.080228),
    ("এক", 2062, 0.250878, 5.385077),
    ("তক", 1231, 0.149772, 3.214855),
    ("বক", 1153, 0.140282, 3.011151),
];

/// The seven rows plus one digraph of ক with the virama, sized so that ক's
/// involvement total is 38291. The extra digraph touches none of the seed
/// letters.
fn ka_fixture() -> NGramTable {
    let listed: u64 = KA_ROWS.iter().map(|r| r.1).sum();
    assert_eq!(listed, 27_990);
    let mut rows: Vec<(String, u64)> = KA_ROWS.iter().map(|r| (r.0.to_string(), r.1)).collect();
    rows.push(("ক্".to_string(), INVOLVEMENT_KA - listed));
    NGramTable::from_counts(2, rows, TOTAL_LETTERS).unwrap()
}

/// The ten reference monogram counts (top symbol read as the vowel sign া),
/// padded with filler letters so the counts sum to the reference total.
fn reference_mono() -> NGramTable {
    let top = [
        ("া", 74300),
        ("ে", 45525),
        ("র", 41844),
        ("ি", 37010),
        ("ক", 31214),
        ("ই", 28996),
        ("ব", 28212),
        ("ত", 21451),
        ("প", 18419),
        ("ম", 17202),
    ];
    let mut rows: Vec<(String, u64)> = top.iter().map(|(g, n)| (g.to_string(), *n)).collect();
    let mut remaining = TOTAL_LETTERS - rows.iter().map(|r| r.1).sum::<u64>();
    let used: Vec<char> = top.iter().map(|(g, _)| g.chars().next().unwrap()).collect();
    for c in bangla_letters().into_iter().filter(|c| !used.contains(c)) {
        if remaining == 0 {
            break;
        }
        let n = remaining.min(16_000);
        rows.push((c.to_string(), n));
        remaining -= n;
    }
    assert_eq!(remaining, 0);
    NGramTable::from_counts(1, rows, TOTAL_LETTERS).unwrap()
}

#[test]
fn criterion_1_association_arithmetic() {
    criterion(1, "association table arithmetic", || {
        let start = Instant::now();
        let di = ka_fixture();
        assert_eq!(di.involvement_total('ক'), INVOLVEMENT_KA);
        for (gram, count, support, confidence) in KA_ROWS {
            assert_eq!(di.count(gram), count);
            assert_close(di.support(gram).unwrap(), support, 1e-5, gram);
            assert_close(di.digraph_confidence('ক', gram).unwrap(), confidence, 1e-4, gram);
        }
        // The reference top monogram pins the corpus total.
        assert_close(100.0 * 74_300.0 / TOTAL_LETTERS as f64, 9.039875, 1e-5, "total");
        assert!(start.elapsed() < Duration::from_secs(1));
    });
}

#[test]
fn criterion_2_worked_example() {
    criterion(2, "seed sets, side scores and placement of ক", || {
        let mono = reference_mono();
        let di = ka_fixture();
        let ranking = stats::ranked_monograms(&mono).unwrap();
        assert_eq!(ranking[0].letter, 'া');
        assert_eq!(ranking[0].count, 74_300);
        assert_close(ranking[0].percentage, 9.039875, 1e-5, "top percentage");

        let mut p = partition::initialize(&ranking).unwrap();
        assert_eq!(p.right(), &['া', 'ি']);
        assert_eq!(p.left(), &['ে', 'র']);

        let left = stats::side_scores('ক', p.left(), &di).unwrap();
        let right = stats::side_scores('ক', p.right(), &di).unwrap();
        assert_close(left.cumulative_support, 1.514757, 1e-5, "left support");
        assert_close(left.cumulative_confidence, 32.514168, 1e-5, "left confidence");
        assert_close(right.cumulative_support, 1.349776, 1e-5, "right support");
        assert_close(right.cumulative_confidence, 28.972866, 1e-5, "right confidence");

        let ka = &ranking[4];
        assert_eq!(ka.letter, 'ক');
        let d = p.assign('ক', ka.count, &di, &PartitionOptions::default()).unwrap();
        assert_eq!((d.hand, d.rule), (Hand::Right, Rule::LeftDominant));
        assert_eq!(p.right(), &['া', 'ি', 'ক']);
        assert_eq!(p.left(), &['ে', 'র']);
    });
}

#[test]
fn criterion_3_partition_oracle() {
    criterion(3, "partition matches independent replay on 100 corpora", || {
        let start = Instant::now();
        let mut rng = StdRng::seed_from_u64(3);
        let pool = bangla_letters();
        let cfg = AlphabetConfig::bangla();
        for trial in 0..100 {
            let size = rng.gen_range(12..=30);
            let mut alphabet = pool.clone();
            alphabet.shuffle(&mut rng);
            alphabet.truncate(size);
            let letters = rng.gen_range(200..=2000);
            let text = random_corpus(&mut rng, &alphabet, letters);
            let stream = tokenize(&text, &cfg);
            assert_eq!(stream.letter_count(), letters);
            let mono = count_ngrams(&stream, 1).unwrap();
            let di = count_ngrams(&stream, 2).unwrap();
            if mono.len() < 4 {
                continue;
            }
            let p = partition::partition_all(&mono, &di, &PartitionOptions::default()).unwrap();

            let mono_rows: Vec<(char, u64)> = mono.iter().map(|(g, n)| (g.chars().next().unwrap(), n)).collect();
            let di_rows: Vec<((char, char), u64)> = di
                .iter()
                .map(|(g, n)| {
                    let mut cs = g.chars();
                    ((cs.next().unwrap(), cs.next().unwrap()), n)
                })
                .collect();
            let (left, right, steps) = oracle_partition(&mono_rows, &di_rows, mono.total_letters());
            assert_eq!(p.left(), left.as_slice(), "trial {trial}");
            assert_eq!(p.right(), right.as_slice(), "trial {trial}");
            let assigned = &p.trace()[4..];
            assert_eq!(assigned.len(), steps.len());
            for (d, s) in assigned.iter().zip(&steps) {
                assert_eq!(d.letter, s.letter);
                assert_eq!(d.hand, s.hand);
                assert_eq!(d.left.cumulative_support, s.left_support);
                assert_eq!(d.left.cumulative_confidence, s.left_confidence);
                assert_eq!(d.right.cumulative_support, s.right_support);
                assert_eq!(d.right.cumulative_confidence, s.right_confidence);
            }
            assert_eq!(HandPartition::replay(p.trace()).unwrap(), p);
        }
        assert!(start.elapsed() < Duration::from_secs(10), "{:?}", start.elapsed());
    });
}

fn random_stream(rng: &mut StdRng, alphabet: &[char], max_len: usize) -> LetterStream {
    let len = rng.gen_range(0..=max_len);
    LetterStream::from_tokens((0..len).map(|_| {
        if rng.gen_bool(0.2) {
            Token::Boundary
        } else {
            Token::Letter(*alphabet.choose(rng).unwrap())
        }
    }))
}

#[test]
fn criterion_4_ngram_oracle() {
    criterion(4, "n-gram counts match brute force on 200 streams", || {
        let mut rng = StdRng::seed_from_u64(4);
        let pool = bangla_letters();
        for _ in 0..200 {
            let size = rng.gen_range(1..=pool.len());
            let stream = random_stream(&mut rng, &pool[..size], 1000);
            for n in 1..=3 {
                let table = count_ngrams(&stream, n).unwrap();
                let expected = brute_force_ngrams(stream.tokens(), n);
                let actual: std::collections::BTreeMap<String, u64> =
                    table.iter().map(|(g, c)| (g.to_string(), c)).collect();
                assert_eq!(actual, expected, "n={n}");
            }
            if stream.is_empty() {
                continue;
            }
            let mono = count_ngrams(&stream, 1).unwrap();
            assert_eq!(mono.sum_counts(), mono.total_letters());
            let total: f64 = mono.iter().map(|(g, _)| mono.support(g).unwrap()).sum();
            assert_close(total, 100.0, 1e-9, "monogram support sum");

            let di = count_ngrams(&stream, 2).unwrap();
            assert!(di.sum_counts() <= mono.total_letters() - stream.word_count() as u64);
            for (g, _) in mono.iter() {
                let c = g.chars().next().unwrap();
                let involvement = di.involvement_total(c);
                assert!(involvement <= 2 * mono.count(g));
                if involvement == 0 {
                    continue;
                }
                let sum: f64 = di
                    .iter()
                    .filter(|(d, _)| d.contains(c))
                    .map(|(d, _)| di.digraph_confidence(c, d).unwrap())
                    .sum();
                assert_close(sum, 100.0, 1e-9, "confidence sum");
            }
        }
    });
}

fn random_layout(rng: &mut StdRng, alphabet: &[char]) -> KeyboardLayout {
    let g = Geometry::default();
    let mut slots: Vec<Slot> = (0..90).map(|i| Slot::new(i / 30, (i / 10) % 3, i % 10)).collect();
    slots.shuffle(rng);
    let keys: Vec<(char, Slot)> = alphabet
        .iter()
        .filter(|_| rng.gen_bool(0.8))
        .copied()
        .zip(slots)
        .collect();
    KeyboardLayout::new("random", g, keys).unwrap()
}

#[test]
fn criterion_5_evaluator_oracle() {
    criterion(5, "evaluator conservation, oracle, mirror and chunk merge", || {
        let mut rng = StdRng::seed_from_u64(5);
        let pool = bangla_letters();
        for _ in 0..200 {
            let alphabet = &pool[..rng.gen_range(2..=20)];
            let layout = random_layout(&mut rng, alphabet);
            let stream = random_stream(&mut rng, alphabet, 1000);
            let opts = EvaluateOptions::default();
            let r = evaluate_with(&layout, &stream, opts);
            assert_eq!(r.left_load + r.right_load + r.not_determined, r.total_letters);
            assert_eq!(r.total_letters, stream.letter_count() as u64);
            assert!(r.hand_switching <= 2 * r.left_load.min(r.right_load));
            if r.left_load > 0 && r.right_load > 0 {
                assert!(r.hand_switching < r.left_load + r.right_load);
            }

            let o = rescan(stream.tokens(), |c| layout.hand_of(c));
            assert_eq!(
                (r.hand_switching, r.left_load, r.right_load, r.not_determined),
                (o.switching, o.left, o.right, o.not_determined)
            );

            let m = evaluate_with(&layout.mirrored().unwrap(), &stream, opts);
            assert_eq!(m.hand_switching, r.hand_switching);
            assert_eq!(m.not_determined, r.not_determined);
            assert_eq!((m.left_load, m.right_load), (r.right_load, r.left_load));

            for reset in [false, true] {
                let opts = EvaluateOptions { reset_on_boundary: reset };
                let seq = evaluate_with(&layout, &stream, opts);
                for chunk in [1, 2, 7, 64, 5000] {
                    assert_eq!(evaluate_parallel(&layout, &stream, opts, chunk), seq, "chunk {chunk} reset {reset}");
                }
            }
        }
    });
}

fn sample_inputs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    files
}

fn run_all(inputs: &[PathBuf], out: &Path) {
    let baseline = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/baselines/codepoint-order.json");
    let status = Command::new(env!("CARGO_BIN_EXE_layoutforge"))
        .arg("run-all")
        .args(inputs)
        .arg("--baseline")
        .arg(baseline)
        .arg("--out")
        .arg(out)
        .env_remove("LAYOUTFORGE_CONFIG")
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_6_determinism() {
    criterion(6, "run-all is byte-identical across runs and input orders", || {
        let inputs = sample_inputs();
        assert!(inputs.len() >= 2);
        let bytes: u64 = inputs.iter().map(|p| std::fs::metadata(p).unwrap().len()).sum();
        assert!((40_000..=60_000).contains(&bytes), "sample corpus is {bytes} bytes");

        let tmp = tempfile::tempdir().unwrap();
        let start = Instant::now();
        run_all(&inputs, &tmp.path().join("a"));
        assert!(start.elapsed() < Duration::from_secs(5), "{:?}", start.elapsed());
        run_all(&inputs, &tmp.path().join("b"));
        let mut reversed = inputs.clone();
        reversed.reverse();
        run_all(&reversed, &tmp.path().join("c"));

        let a = dir_contents(&tmp.path().join("a"));
        let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
        for expected in ["mono.tsv", "di.tsv", "tri.tsv", "summary.json", "partition.json", "layout.json", "reports.tsv", "report-optimized.json"] {
            assert!(names.contains(&expected), "missing {expected}");
        }
        assert_eq!(a, dir_contents(&tmp.path().join("b")));
        assert_eq!(a, dir_contents(&tmp.path().join("c")));
    });
}

#[test]
fn criterion_7_comparison_fixture() {
    criterion(7, "comparison of the reference three-layout results", || {
        let reports = [
            EvaluationReport::from_counts("Bijoy keyboard layout", 358_873, 475_556, 242_526, 138_643),
            EvaluationReport::from_counts("Proposed layout 3", 358_672, 319_946, 363_077, 173_702),
            EvaluationReport::from_counts("Proposed optimal keyboard layout", 410_113, 380_058, 340_903, 133_290),
        ];
        let table = evaluator::compare(&reports).unwrap();
        let order: Vec<u64> = table.rows.iter().map(|r| r.hand_switching).collect();
        assert_eq!(order, vec![410_113, 358_873, 358_672]);
        assert_eq!(table.rows[0].layout, "Proposed optimal keyboard layout");
        let text = table.render();
        let first_data_line = text.lines().nth(2).unwrap();
        assert!(first_data_line.starts_with("Proposed optimal keyboard layout"));
        assert!(first_data_line.contains("410113"));
    });
}

#[test]
fn criterion_8_layout_rules() {
    criterion(8, "home row, layer overflow and byte-stable layout files", || {
        use layoutforge::partition::Decision;
        let g = Geometry::default();
        let home = g.columns() / 2;
        let base_capacity = g.rows() * home;
        let letters = bangla_letters();
        let count_of = |i: usize| 1000 - i as u64;
        let replay = |n: usize, hand: Hand| {
            let trace: Vec<Decision> = (0..n)
                .map(|i| Decision {
                    letter: letters[i],
                    count: count_of(i),
                    left: Default::default(),
                    right: Default::default(),
                    hand,
                    rule: Rule::Otherwise,
                })
                .collect();
            HandPartition::replay(&trace).unwrap()
        };

        for hand in [Hand::Left, Hand::Right] {
            // Exactly one home row worth of letters.
            let p = replay(home, hand);
            let freq = p.frequencies();
            let l = build_layout_with(&p, |c| freq[&c], g.clone()).unwrap();
            let inner = if hand == Hand::Left { home - 1 } else { home };
            for i in 0..home {
                let slot = l.placement(letters[i]).unwrap().slot;
                assert_eq!((slot.layer, slot.row), (0, g.home_row()));
                let distance = slot.column.abs_diff(inner);
                assert_eq!(distance, i, "frequency order must run inner to outer");
            }

            // Spill past the base layer into shift, then ctrl.
            let n = 2 * base_capacity + 3;
            let p = replay(n, hand);
            let freq = p.frequencies();
            let l = build_layout_with(&p, |c| freq[&c], g.clone()).unwrap();
            for i in 0..n {
                let layer = l.placement(letters[i]).unwrap().slot.layer;
                assert_eq!(layer, i / base_capacity, "letter {i}");
            }
            let text = layout::serialize_layout(&l);
            let parsed = layout::parse_layout(&text).unwrap();
            assert_eq!(parsed, l);
            assert_eq!(layout::serialize_layout(&parsed), text);
        }
    });
}
