//! One line per acceptance criterion; run with `--nocapture` to see them.

use std::time::Instant;

use lowdim::cutout::{build_cutout, CutoutSet, GapSequence, GrowthRule, LiminfWindow};
use lowdim::metric_cover::{cover_report, Ball};
use lowdim::spectrum::{
    empirical_spectrum_point, full_report, run_suite, Approximation, Check, ReportConfig, SuiteConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LN2: f64 = std::f64::consts::LN_2;
const EXAMPLE_HORIZON: usize = 60_000;

fn ternary(depth: usize, horizon: usize) -> CutoutSet {
    build_cutout(GapSequence::ternary(), depth, horizon).unwrap()
}

fn example(depth: usize, horizon: usize) -> CutoutSet {
    build_cutout(GapSequence::example(0.4, 0.6, GrowthRule::Default).unwrap(), depth, horizon).unwrap()
}

fn uniform(d: f64, depth: usize, horizon: usize) -> CutoutSet {
    build_cutout(GapSequence::uniform_ratio(d).unwrap(), depth, horizon).unwrap()
}

struct Ledger(Vec<(u32, bool)>);

impl Ledger {
    fn record(&mut self, n: u32, ok: bool, detail: String) {
        println!("criterion {n} {}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.0.push((n, ok));
    }
}

/// `log s_k` for the example set straight from its block rule.
fn oracle_example_log_s(alpha: f64, beta: f64, horizon: usize) -> Vec<f64> {
    let mut l = vec![1usize];
    while *l.last().unwrap() <= horizon + 1 {
        let i = l.len();
        let prev = l[i - 1];
        l.push((2 * prev + i + 1).max(i * prev));
    }
    let mut out = vec![0.0];
    let mut acc = 0.0;
    for k in 1..=horizon {
        let i = l.iter().rposition(|&b| b <= k).unwrap() + 1;
        let is_alpha = k + i >= l[i];
        acc -= LN2 / if is_alpha { alpha } else { beta };
        out.push(acc);
    }
    out
}

fn criterion_1(ledger: &mut Ledger) {
    let start = Instant::now();
    let set = ternary(2, 20_100);
    let w = LiminfWindow::new(100, 2000).unwrap();
    let target = LN2 / 3f64.ln();
    let mut worst: f64 = 0.0;
    for i in 1..=9 {
        let theta = i as f64 / 10.0;
        worst = worst.max((set.exact_lower_spectrum(theta, &w).unwrap() - target).abs());
    }
    let assouad = set.exact_lower_assouad(2000, &w).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-6 && (assouad - target).abs() <= 1e-6 && secs < 5.0;
    ledger.record(
        1,
        ok,
        format!("ternary max|spectrum - log2/log3| = {worst:.2e}, lower Assouad error {:.2e}, {secs:.2}s", (assouad - target).abs()),
    );
}

fn criterion_2(ledger: &mut Ledger) {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [0.2, 0.35, 0.5, 0.6] {
        let report = full_report(&uniform(d, 14, 10_000), 0.5, &ReportConfig::default()).unwrap();
        let worst = report
            .values()
            .iter()
            .map(|v| v.map_or(f64::INFINITY, |v| (v - d).abs()))
            .fold(0.0, f64::max);
        ok &= worst <= 0.05 && report.chain_ok;
        parts.push(format!("d={d}: max dev {worst:.3e}, chain_ok={}", report.chain_ok));
    }
    ledger.record(2, ok, parts.join("; "));
}

fn criterion_3(ledger: &mut Ledger) {
    let set = example(2, EXAMPLE_HORIZON);
    let w = LiminfWindow::new(2, EXAMPLE_HORIZON - 8).unwrap();
    let assouad = set.exact_lower_assouad(8, &w).unwrap();
    let quasi = set.quasi_lower(&[0.9, 0.95, 0.99], None).unwrap().value;

    // formula scans on an independently built scale table at twice the horizon
    let big = 2 * EXAMPLE_HORIZON;
    let log_s = oracle_example_log_s(0.4, 0.6, big);
    let mut oracle_assouad = f64::INFINITY;
    for m in 2..=8 {
        for k in 1..=big - 8 {
            oracle_assouad = oracle_assouad.min(m as f64 * LN2 / (log_s[k] - log_s[k + m]));
        }
    }
    let theta = 0.99;
    let last = (1..big).take_while(|&k| log_s[big] < log_s[k] / theta).last().unwrap();
    let mut oracle_quasi = f64::INFINITY;
    for k in (last / 10).max(1)..=last {
        let target = log_s[k] / theta;
        let n = (k..=big).take_while(|&j| log_s[j] >= target).count() - 1;
        let frac = (log_s[k + n] - target) / (log_s[k + n] - log_s[k + n + 1]);
        oracle_quasi = oracle_quasi.min((n as f64 + frac) * LN2 / ((1.0 - 1.0 / theta) * log_s[k]));
    }

    let ok = (0.35..=0.45).contains(&assouad) && (0.5..=0.65).contains(&quasi) && quasi - assouad >= 0.1;
    ledger.record(
        3,
        ok,
        format!(
            "horizon {EXAMPLE_HORIZON}: lower Assouad {assouad:.6} (oracle at {big}: {oracle_assouad:.6}), quasi-lower {quasi:.6} (oracle {oracle_quasi:.6}), gap {:.6}",
            quasi - assouad
        ),
    );
}

fn criterion_4(ledger: &mut Ledger) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0;
    let mut total = 0;
    for set in [ternary(12, 100), example(12, 100)] {
        let approx = Approximation::of(&set, 12).unwrap();
        for _ in 0..500 {
            let center = rng.random_range(0.0..=1.0);
            let radius = rng.random_range(1e-4f64.ln()..=0.0).exp();
            let r = rng.random_range(approx.resolution.ln()..=0.0).exp();
            let rep = cover_report(&approx.union, Some(Ball::new(center, radius).unwrap()), r);
            total += 1;
            if !rep.sandwich_ok() {
                violations += 1;
            }
        }
    }
    ledger.record(4, violations == 0, format!("{total} queries, {violations} violations of M_4r <= N_r <= M_r"));
}

fn criterion_5(ledger: &mut Ledger) {
    let start = Instant::now();
    let config = SuiteConfig { cover_queries: 200, ..SuiteConfig::default() };
    let checks = [Check::CoverProduct, Check::PackingProduct, Check::ComparablePacking];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, set) in [("ternary", ternary(12, 100)), ("example", example(12, 100))] {
        for o in run_suite(&set, &config, &checks).unwrap() {
            ok &= o.passed;
            parts.push(format!("{name}/{}={}", o.name, o.passed));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ledger.record(5, ok && secs < 60.0, format!("200 queries each: {}; {secs:.1}s", parts.join(", ")));
}

fn corpus() -> Vec<(&'static str, CutoutSet)> {
    vec![
        ("ternary", ternary(12, EXAMPLE_HORIZON)),
        ("uniform(0.5)", uniform(0.5, 12, EXAMPLE_HORIZON)),
        ("example", example(12, EXAMPLE_HORIZON)),
    ]
}

fn criterion_6(ledger: &mut Ledger, sets: &[(&str, CutoutSet)]) {
    let config = SuiteConfig { prop31_pairs: 100, ..SuiteConfig::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, set) in sets {
        for o in run_suite(set, &config, &[Check::Prop31, Check::Cor33]).unwrap() {
            ok &= o.passed;
            parts.push(format!("{name}/{}={} (worst {:.4} vs {:.4})", o.name, o.passed, o.lhs, o.rhs));
        }
    }
    ledger.record(6, ok, parts.join(", "));
}

fn criterion_7(ledger: &mut Ledger, sets: &[(&str, CutoutSet)]) {
    let config = SuiteConfig::default();
    let checks = [Check::Theorem1, Check::Theorem2, Check::Theorem3, Check::Lemma51];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, set) in sets {
        for o in run_suite(set, &config, &checks).unwrap() {
            ok &= o.passed;
            parts.push(format!("{name}/{}={}", o.name, o.passed));
        }
    }
    let docs = [
        r#"{"kind":"ternary"}"#,
        r#"{"kind":"uniform-ratio","d":0.5}"#,
        r#"{"kind":"example","alpha":0.4,"beta":0.6}"#,
    ];
    let horizon = EXAMPLE_HORIZON.to_string();
    for doc in docs {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = lowdim::cli::run(
            ["lowdim", "verify", "--gaps", doc, "--depth", "12", "--horizon", &horizon],
            &mut out,
            &mut err,
        );
        ok &= code == 0;
        parts.push(format!("verify {doc} exit {code}"));
    }
    ledger.record(7, ok, parts.join(", "));
}

fn criterion_8(ledger: &mut Ledger) {
    let set = ternary(14, 2000);
    let config = SuiteConfig { structure_queries: 500, bracket_thetas: vec![0.3, 0.5, 0.7], ..SuiteConfig::default() };
    let out = run_suite(&set, &config, &[Check::Lemma61, Check::Lemma63]).unwrap();
    let ok = out.iter().all(|o| o.passed);
    let parts: Vec<String> = out
        .iter()
        .map(|o| {
            let failures = o.witnesses.iter().find(|w| w.0 == "failures").map_or(f64::NAN, |w| w.1);
            format!("{}={} ({failures} failures)", o.name, o.passed)
        })
        .collect();
    ledger.record(8, ok, format!("ternary level 14: {}", parts.join(", ")));
}

fn criterion_9(ledger: &mut Ledger) {
    let set = ternary(12, 200);
    let approx = Approximation::of(&set, 12).unwrap();
    let centers = approx.union.endpoints();
    // R = 3^-k with k/θ an integer, so both scales fall on levels
    let grids: [(f64, &[i32]); 3] = [(0.4, &[2, 4]), (0.5, &[2, 3, 4, 5]), (0.6, &[3, 6])];
    let mut ok = true;
    let mut parts = Vec::new();
    for (theta, ks) in grids {
        let radii: Vec<f64> = ks.iter().map(|&k| 3f64.powi(-k)).collect();
        let empirical = empirical_spectrum_point(&approx, theta, &radii, &centers).unwrap();
        let w = set.auto_window(theta).unwrap();
        let exact = set.exact_lower_spectrum(theta, &w).unwrap();
        ok &= (empirical - exact).abs() <= 0.08;
        parts.push(format!("θ={theta}: empirical {empirical:.4} vs exact {exact:.4}"));
    }
    ledger.record(9, ok, parts.join(", "));
}

#[test]
fn acceptance() {
    let mut ledger = Ledger(Vec::new());
    criterion_1(&mut ledger);
    criterion_2(&mut ledger);
    criterion_3(&mut ledger);
    criterion_4(&mut ledger);
    criterion_5(&mut ledger);
    let sets = corpus();
    criterion_6(&mut ledger, &sets);
    criterion_7(&mut ledger, &sets);
    criterion_8(&mut ledger);
    criterion_9(&mut ledger);
    let failed: Vec<u32> = ledger.0.iter().filter(|c| !c.1).map(|c| c.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
