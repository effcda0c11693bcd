use proptest::prelude::*;
use roofinv::metrics::{confusion, metrics, ClassMetrics, ConfusionMatrix};
use roofinv::RoofClass;

fn matrix(counts: Vec<Vec<u64>>) -> ConfusionMatrix {
    let labels = (0..counts.len()).map(|i| format!("c{i}")).collect();
    ConfusionMatrix::from_counts(labels, counts).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

#[test]
fn hand_computed_examples() {
    let m = metrics(&matrix(vec![vec![50, 0], vec![0, 50]]));
    for c in &m.per_class {
        assert_eq!((c.precision, c.recall, c.f1), (1.0, 1.0, 1.0));
    }
    let m = metrics(&matrix(vec![vec![8, 2], vec![2, 8]]));
    for c in &m.per_class {
        assert!(close(c.precision, 0.8) && close(c.recall, 0.8) && close(c.f1, 0.8));
    }
    assert!(close(m.micro.f1, 0.8));
}

#[test]
fn table_consistent_matrix_gives_overall_096() {
    // 500 validation images, 100 per class; 96% on the diagonal overall.
    let diag = [97u64, 95, 94, 97, 97];
    let mut counts = vec![vec![0u64; 5]; 5];
    for (i, &d) in diag.iter().enumerate() {
        counts[i][i] = d;
        counts[i][(i + 1) % 5] = 100 - d;
    }
    let m = metrics(&matrix(counts));
    assert_eq!(m.total, 500);
    assert!((m.micro.f1 - 0.96).abs() <= 0.005, "{}", m.micro.f1);
}

#[test]
fn confusion_examples() {
    use RoofClass::*;
    let t = [SimpleGable, CrossHip, Unknown];
    let cm = confusion(&t, &t).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            let expect = u64::from(i == j && [0, 4, 5].contains(&i));
            assert_eq!(cm.counts()[i][j], expect);
        }
    }
    let cm = confusion(&[SimpleGable], &[SimpleHip]).unwrap();
    assert_eq!(cm.counts()[0][3], 1);
    assert_eq!(cm.total(), 1);
    assert!(confusion(&[SimpleGable], &[]).is_err());
}

/// Direct-definition oracle computed from scratch.
struct Oracle {
    p: Vec<f64>,
    r: Vec<f64>,
    f: Vec<f64>,
    micro: f64,
    macro_p: f64,
    macro_r: f64,
    macro_f: f64,
}

fn oracle(c: &[Vec<u64>]) -> Oracle {
    let n = c.len();
    let (mut p, mut r, mut f) = (vec![], vec![], vec![]);
    let mut total = 0u64;
    let mut diag = 0u64;
    let mut supported = vec![];
    for i in 0..n {
        let tp = c[i][i];
        let mut col = 0;
        let mut row = 0;
        for k in 0..n {
            col += c[k][i];
            row += c[i][k];
            total += c[i][k];
        }
        diag += tp;
        let pi = if col == 0 { 0.0 } else { tp as f64 / col as f64 };
        let ri = if row == 0 { 0.0 } else { tp as f64 / row as f64 };
        let fi = if pi + ri == 0.0 { 0.0 } else { 2.0 * pi * ri / (pi + ri) };
        p.push(pi);
        r.push(ri);
        f.push(fi);
        if row > 0 {
            supported.push(i);
        }
    }
    let micro = if total == 0 { 0.0 } else { diag as f64 / total as f64 };
    let k = supported.len().max(1) as f64;
    let mean = |v: &[f64]| supported.iter().map(|&i| v[i]).sum::<f64>() / k;
    Oracle { micro, macro_p: mean(&p), macro_r: mean(&r), macro_f: mean(&f), p, r, f }
}

fn check_against_oracle(counts: &[Vec<u64>], m: &ClassMetrics) -> Result<(), TestCaseError> {
    let o = oracle(counts);
    for (i, c) in m.per_class.iter().enumerate() {
        prop_assert!(close(c.precision, o.p[i]) && close(c.recall, o.r[i]) && close(c.f1, o.f[i]));
        prop_assert_eq!(c.support, counts[i].iter().sum::<u64>());
    }
    prop_assert!(close(m.micro.precision, o.micro) && close(m.micro.recall, o.micro) && close(m.micro.f1, o.micro));
    prop_assert!(close(m.macro_avg.precision, o.macro_p));
    prop_assert!(close(m.macro_avg.recall, o.macro_r));
    prop_assert!(close(m.macro_avg.f1, o.macro_f));
    Ok(())
}

fn counts_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (2usize..=6)
        .prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(0u64..=50, n), n))
        .prop_filter("needs a nonzero count", |c| c.iter().flatten().any(|&v| v > 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metrics_match_oracle(counts in counts_strategy()) {
        let m = metrics(&matrix(counts.clone()));
        check_against_oracle(&counts, &m)?;
    }

    #[test]
    fn self_confusion_scores_one(xs in proptest::collection::vec(0usize..6, 1..200)) {
        let labels: Vec<RoofClass> = xs.iter().map(|&i| RoofClass::ALL[i]).collect();
        let m = metrics(&confusion(&labels, &labels).unwrap());
        for c in m.per_class.iter().filter(|c| c.support > 0) {
            prop_assert_eq!((c.precision, c.recall, c.f1), (1.0, 1.0, 1.0));
        }
        prop_assert_eq!(m.micro.f1, 1.0);
        prop_assert_eq!(m.macro_avg.f1, 1.0);
    }

    #[test]
    fn confusion_matches_tally(pairs in proptest::collection::vec((0usize..6, 0usize..6), 0..1000)) {
        let t: Vec<RoofClass> = pairs.iter().map(|p| RoofClass::ALL[p.0]).collect();
        let p: Vec<RoofClass> = pairs.iter().map(|p| RoofClass::ALL[p.1]).collect();
        let cm = confusion(&t, &p).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let mut n = 0u64;
                for k in 0..pairs.len() {
                    if pairs[k] == (i, j) {
                        n += 1;
                    }
                }
                prop_assert_eq!(cm.counts()[i][j], n);
            }
        }
        prop_assert_eq!(cm.total(), pairs.len() as u64);
    }

    #[test]
    fn class_permutation_is_equivariant(counts in counts_strategy(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = counts.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let permuted: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| counts[perm[i]][perm[j]]).collect()).collect();
        let a = metrics(&matrix(counts));
        let b = metrics(&matrix(permuted));
        for i in 0..n {
            let (x, y) = (&b.per_class[i], &a.per_class[perm[i]]);
            prop_assert!(close(x.precision, y.precision) && close(x.recall, y.recall) && close(x.f1, y.f1));
            prop_assert_eq!(x.support, y.support);
        }
        prop_assert!(close(a.micro.f1, b.micro.f1));
        prop_assert!(close(a.macro_avg.precision, b.macro_avg.precision));
        prop_assert!(close(a.macro_avg.recall, b.macro_avg.recall));
        prop_assert!(close(a.macro_avg.f1, b.macro_avg.f1));
    }
}
