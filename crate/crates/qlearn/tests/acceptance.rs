//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion over all of them so every line is printed even when one fails.

use std::process::Command;

use qlearn::experiments::{self, quantum_runs, simon_trial};
use qlearn::{run, ExperimentConfig, ExperimentKind, LearnerKind, OutputFormat};
use qlearn_core::learners::{classical_halving_learn, nested_bv_learn};
use qlearn_core::partitions::{
    algorithm4_build_partition, algorithm5_learn_partition, count_invariant, count_subspaces, enumerate_subspaces,
};
use qlearn_core::qsim::{
    bbht_subset_search, euclidean_distance, measurement_distribution, random_state, tv_distance, FamilyMember,
    OracleSpec, StateVector,
};
use qlearn_core::zoo::{self, ClassSpec, ConceptFamily, ParityFamily};
use qlearn_core::{concept, pacsim, Concept, ConceptClass, Error, Rational, SplitMix64};

const SEED: u64 = 0x00c0_ffee;

struct Verdict {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: u32, name: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { id, name, pass, detail }
}

/// Exact fraction `num/den` compared by cross-multiplication.
#[derive(Clone, Copy, Debug)]
struct Frac(u64, u64);

impl Frac {
    fn lt(self, o: Frac) -> bool {
        self.0 * o.1 < o.0 * self.1
    }
    fn eq_rational(self, r: Rational) -> bool {
        self.0 * r.denom() == r.numer() * self.1
    }
}

/// Per-input bitmask of the concepts that output 1 there.
fn column_masks(class: &ConceptClass) -> Vec<u32> {
    (0..class.domain_size())
        .map(|x| (0..class.len()).filter(|&c| class.value(c, x)).fold(0u32, |m, c| m | 1 << c))
        .collect()
}

/// Brute-force min over accepted subsets (size ≥ 2) of max over inputs of the
/// minority fraction.
fn brute_gamma(class: &ConceptClass, accept: impl Fn(u32) -> bool) -> Option<Frac> {
    let cols = column_masks(class);
    let mut best: Option<Frac> = None;
    for mask in 1u32..(1u32 << class.len()) {
        let size = mask.count_ones() as u64;
        if size < 2 || !accept(mask) {
            continue;
        }
        let top = cols
            .iter()
            .map(|c| {
                let ones = (c & mask).count_ones() as u64;
                ones.min(size - ones)
            })
            .max()
            .unwrap_or(0);
        let g = Frac(top, size);
        if best.is_none_or(|b| g.lt(b)) {
            best = Some(g);
        }
    }
    best
}

fn random_classes(count: usize, max_n: u32, max_size: usize, seed: u64) -> Vec<ConceptClass> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|i| {
            let n = 1 + (i as u32 % max_n);
            let room = if n >= 3 { max_size } else { max_size.min((1usize << (1 << n)) - 1) };
            let size = 2 + rng.below(room as u64 - 1) as usize;
            zoo::random_class(n, size, rng.next_u64()).unwrap()
        })
        .collect()
}

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v[(v.len() - 1) / 2]
}

fn criterion_1() -> Verdict {
    let spec = ClassSpec::Parity { n: 8 };
    let family = ParityFamily::new(8).unwrap();
    let mut exact = 0;
    let mut one_query = 0;
    for a in 0..256u64 {
        let target = FamilyMember { family: &family, index: a };
        let r = nested_bv_learn(&spec, &target, &mut SplitMix64::derive(SEED, a)).unwrap();
        let truth = Concept::from_fn(8, |x| (a & x as u64).count_ones() % 2 == 1).unwrap();
        exact += usize::from(r.hypothesis.as_ref() == Some(&truth));
        one_query += usize::from(r.ledger.quantum() == 1 && r.ledger.classical() == 0);
    }
    verdict(
        1,
        "Bernstein-Vazirani on parity n=8",
        exact == 256 && one_query == 256,
        format!("{exact}/256 exact, {one_query}/256 with exactly one quantum query"),
    )
}

fn criterion_2() -> Verdict {
    let inputs: Vec<usize> = (0..64).collect();
    let mut found = 0;
    let mut over = 0;
    for t in 0..1000u64 {
        let mut rng = SplitMix64::derive(SEED ^ 2, t);
        let marked = rng.below(64) as usize;
        let f = Concept::from_fn(6, |x| x == marked).unwrap();
        let mut oracle = OracleSpec::new(&f);
        let out = bbht_subset_search(&mut oracle, &inputs, &mut rng).unwrap();
        let calls = oracle.ledger().total();
        over += usize::from(calls > 36);
        found += usize::from(out.found == Some(marked) && calls <= 36);
    }
    let rate = found as f64 / 1000.0;
    verdict(2, "BBHT |I|=64, one marked", rate >= 0.45 && over == 0, format!("success {rate:.3} within 36 calls, {over} runs over budget"))
}

fn criterion_3() -> Verdict {
    let mut failures = 0;
    for class in random_classes(200, 4, 16, SEED ^ 3) {
        let g = brute_gamma(&class, |_| true).unwrap();
        let inputs = concept::build_semirich_set(&class).unwrap();
        let size_ok = inputs.len() as u64 * g.0 <= g.1;
        let rich = (0..class.len())
            .filter(|&c| {
                let ones = inputs.iter().filter(|&&x| class.value(c, x)).count() as u64;
                ones * g.1 >= g.0 * inputs.len() as u64
            })
            .count();
        if !(size_ok && 2 * rich >= class.len()) {
            failures += 1;
        }
    }
    verdict(3, "semi-rich input set on 200 random classes", failures == 0, format!("{failures} failures"))
}

fn ceil_log2(x: f64) -> u64 {
    x.log2().ceil() as u64
}

fn criterion_4() -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for (arg, gamma) in [("delta:n=5", (1u64, 32u64)), ("parity:n=6", (1, 3))] {
        let (_, class) = experiments::load_class(arg).unwrap();
        let size = class.len() as f64;
        let inv = gamma.1 / gamma.0;
        let cap = ceil_log2(size) * ceil_log2(3.0 * size.log2()) * (4.5 * (inv as f64).sqrt()).ceil() as u64;
        let runs = quantum_runs(&class, 300, SEED ^ 4).unwrap();
        let rate = runs.iter().filter(|r| r.0.success).count() as f64 / 300.0;
        let worst = runs.iter().map(|r| r.1).max().unwrap();
        pass &= rate >= 0.60 && worst <= cap;
        detail.push(format!("{arg}: success {rate:.3}, worst search queries {worst} <= cap {cap}"));
    }
    verdict(4, "quantum exact learner success and query cap", pass, detail.join("; "))
}

fn halving_fixtures() -> Vec<ConceptClass> {
    let mut v: Vec<ConceptClass> = ["delta:n=3", "delta:n=4", "parity:n=3", "parity:n=4", "nestedbv:n=4,d=2"]
        .iter()
        .map(|a| experiments::load_class(a).unwrap().1)
        .collect();
    v.extend(random_classes(30, 4, 16, SEED ^ 5));
    v
}

fn criterion_5() -> Verdict {
    let mut runs = 0;
    let mut bad = 0;
    for class in halving_fixtures() {
        let g = brute_gamma(&class, |_| true).unwrap();
        let gf = g.0 as f64 / g.1 as f64;
        let bound = ((class.len() as f64).log2() / -(1.0 - gf).log2() - 1e-12).ceil() as u64;
        for t in 0..class.len() {
            let r = classical_halving_learn(&class, class.row(t)).unwrap();
            runs += 1;
            if r.hypothesis.as_ref() != Some(class.row(t)) || r.ledger.classical() > bound {
                bad += 1;
            }
        }
    }
    verdict(5, "classical halving exact and within bound", bad == 0, format!("{runs} runs, {bad} violations"))
}

fn criterion_6() -> Verdict {
    let mut bad = 0;
    let mut mismatched = 0;
    for class in random_classes(200, 4, 16, SEED ^ 6) {
        let g = concept::gamma_hat(&class).unwrap().gamma_hat;
        let n = class.domain_size() as u64;
        if g < Rational::new(1, n + 1) || g > Rational::new(1, 2) {
            bad += 1;
        }
        if !brute_gamma(&class, |_| true).unwrap().eq_rational(g) {
            mismatched += 1;
        }
    }
    let grid_bad = (1..=1000)
        .map(|i| 0.5 * f64::from(i) / 1001.0)
        .filter(|&x| (1.0 - x).powf((1.0 / x).floor()) >= 0.5)
        .count();
    verdict(
        6,
        "gamma-hat bounds and (1-x)^floor(1/x) < 1/2",
        bad == 0 && mismatched == 0 && grid_bad == 0,
        format!("{bad} out of bounds, {mismatched} differ from brute force, {grid_bad}/1000 grid failures"),
    )
}

fn criterion_7() -> Verdict {
    let mut classes = vec![zoo::delta_class(3).unwrap()];
    classes.extend(random_classes(24, 4, 16, SEED ^ 7).into_iter().filter(|c| c.len() >= 3));
    let mut cases = 0;
    let mut problems = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let g = brute_gamma(class, |_| true).unwrap();
        let mut ks = vec![2, 4, 8, class.len()];
        ks.retain(|&k| k <= class.len());
        ks.dedup();
        for k in ks {
            cases += 1;
            let (p, memo) = algorithm4_build_partition(class, k).unwrap();
            let mut seen = vec![0u32; class.len()];
            for piece in p.pieces() {
                for c in piece.iter() {
                    seen[c] += 1;
                }
            }
            if p.len() != k || p.pieces().iter().any(|s| s.is_empty()) || seen.iter().any(|&s| s != 1) {
                problems.push(format!("class {ci} k={k}: not {k} disjoint covering pieces"));
            }
            for (_, e) in memo.entries() {
                let g_len = e.ground.len() as u64;
                let zero = e.zero.intersection(&e.ground).len() as u64;
                let star = e.star.intersection(&e.ground).len() as u64;
                if !(4 * zero > g_len && 2 * zero <= g_len && 2 * star >= g_len && star < g_len) {
                    problems.push(format!("class {ci} k={k}: split {zero}+{star} of {g_len}"));
                }
            }
            let cap = ((k as f64).log2() + 1.0).ceil() as u64 * (g.1 / g.0);
            for t in 0..class.len() {
                let r = algorithm5_learn_partition(class, &p, &memo, class.row(t)).unwrap();
                if !p.pieces()[r.piece].contains(t) || r.ledger.classical() > cap {
                    problems.push(format!("class {ci} k={k} target {t}: piece or cap ({} > {cap})", r.ledger.classical()));
                }
            }
            let owner: Vec<usize> = (0..class.len()).map(|c| p.piece_of(c)).collect();
            let gp = brute_gamma(class, |mask| {
                let size = mask.count_ones() as usize;
                let mut per = vec![0usize; k];
                for c in (0..class.len()).filter(|c| mask >> c & 1 == 1) {
                    per[owner[c]] += 1;
                }
                per.into_iter().max().unwrap() < (3 * size).div_ceil(4)
            });
            if gp.map(|x| x.0 * g.1 != g.0 * x.1).unwrap_or(true) {
                problems.push(format!("class {ci} k={k}: gamma_P {gp:?} != gamma {g:?}"));
            }
        }
    }
    let detail = format!("{cases} (class, k) cases, {} problems{}", problems.len(), problems.first().map(|p| format!(", first: {p}")).unwrap_or_default());
    verdict(7, "partition pipeline", problems.is_empty(), detail)
}

/// Gaussian binomial `[m choose l]_2` by its product formula.
fn gaussian_binomial(m: u32, l: u32) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..l {
        num *= (1u128 << (m - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

fn criterion_8() -> Verdict {
    let mut ok = true;
    for m in 2..=5u32 {
        for l in 1..m {
            let listed = enumerate_subspaces(m, l).unwrap().len() as u128;
            let closed = count_subspaces(m, l).unwrap();
            ok &= listed == gaussian_binomial(m, l) && closed == listed.into();
        }
    }
    for m in 2..=6u32 {
        for l in 1..m {
            let nml = gaussian_binomial(m, l);
            let (lo, hi) = ((m * l) as i64 - (l * l) as i64 - l as i64, (m * l + l) as i64 - (l * l) as i64);
            ok &= lo <= 0 || nml >= 1u128 << lo;
            ok &= nml <= 1u128 << hi;
            ok &= count_subspaces(m, l).unwrap() == nml.into();
        }
    }
    let n42 = count_subspaces(4, 2).unwrap();
    let i31 = count_invariant(3, 1).unwrap();
    ok &= n42 == 35u32.into() && i31 == 1680u32.into();
    verdict(8, "subspace and invariant-function counts", ok, format!("N(4,2) = {n42}, I(3,1) = {i31}"))
}

fn criterion_9() -> Verdict {
    let small: Vec<_> = (0..200u64).map(|i| simon_trial(6, 2, &mut SplitMix64::derive(SEED ^ 9, i)).unwrap()).collect();
    let rate = small.iter().filter(|t| t.correct && t.quantum <= 18).count() as f64 / 200.0;
    let perp = small.iter().all(|t| t.samples_in_perp);
    let gap: Vec<_> = (0..100u64).map(|i| simon_trial(8, 5, &mut SplitMix64::derive(SEED ^ 90, i)).unwrap()).collect();
    let q = median(gap.iter().map(|t| t.quantum).collect());
    let c = median(gap.iter().map(|t| t.classical).collect());
    verdict(
        9,
        "Simon partition learner and separation",
        rate >= 0.60 && perp && q <= 24 && c >= 4 * q,
        format!(
            "m=6,l=2: success {rate:.3} within 18, samples in perp {perp}; m=8,l=5: quantum median {q}, classical median {c} (ratio {:.2}, need >= 4)",
            c as f64 / q as f64
        ),
    )
}

fn fidelity_triple(rng: &mut SplitMix64) -> (StateVector, StateVector, Vec<usize>) {
    let qubits = 2 + rng.below(3) as u32;
    let dim = 1usize << qubits;
    loop {
        let projector: Vec<usize> = (0..dim).filter(|_| rng.below(2) == 1).collect();
        let inside = |x: usize| projector.contains(&x);
        let shrink = 0.05 + 0.3 * rng.next_f64();
        let a = random_state(qubits, rng).unwrap();
        let b = random_state(qubits, rng).unwrap();
        let s0 = StateVector::normalized(
            (0..dim).map(|x| a.amplitude(x) * if inside(x) { 1.0 } else { shrink }).collect(),
        );
        let s1 = StateVector::normalized(
            (0..dim).map(|x| b.amplitude(x) * if inside(x) { shrink } else { 1.0 }).collect(),
        );
        if let (Ok(s0), Ok(s1)) = (s0, s1) {
            if pacsim::fidelity_bound_terms(&s0, &s1, &projector).is_ok() {
                return (s0, s1, projector);
            }
        }
    }
}

fn criterion_10() -> Verdict {
    let rows = experiments::pac_formula_rows().unwrap();
    let formulas_ok = rows.iter().all(|r| r.pass);
    let worst = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    let mut product_ok = true;
    for eps in [1.0 / 64.0, 1.0 / 32.0] {
        let (c0, c1, d) = pacsim::two_point_instance(eps).unwrap();
        for t in 1..=4 {
            let product = pacsim::t_copy_inner_product(&c0, &c1, &d, t).unwrap();
            product_ok &= (product - (1.0 - 3.0 * eps).powi(t as i32)).abs() <= 1e-9;
        }
    }
    let mut rng = SplitMix64::new(SEED ^ 10);
    let mut tv_bad = 0;
    for _ in 0..100 {
        let q = 1 + rng.below(6) as u32;
        let a = random_state(q, &mut rng).unwrap();
        let b = random_state(q, &mut rng).unwrap();
        let tv = tv_distance(&measurement_distribution(&a), &measurement_distribution(&b)).unwrap();
        tv_bad += usize::from(tv > 4.0 * euclidean_distance(&a, &b).unwrap() + 1e-12);
    }
    let mut fid_bad = 0;
    for _ in 0..200 {
        let (s0, s1, projector) = fidelity_triple(&mut rng);
        fid_bad += usize::from(!pacsim::fidelity_bound_check(&s0, &s1, &projector).unwrap());
    }
    let same = StateVector::basis(2, 1).unwrap();
    let refuses = pacsim::fidelity_bound_check(&same, &same, &[1]) == Err(Error::NoSeparatingDelta);
    verdict(
        10,
        "PAC formula suite",
        formulas_ok && product_ok && tv_bad == 0 && fid_bad == 0 && refuses,
        format!(
            "{} formula rows, max abs err {worst:e}; TV violations {tv_bad}/100; fidelity violations {fid_bad}/200",
            rows.len()
        ),
    )
}

fn criterion_11() -> Verdict {
    let configs = [
        ExperimentConfig::new(ExperimentKind::Learn).with_class("delta:n=5").with_trials(300).with_seed(7),
        ExperimentConfig::new(ExperimentKind::Learn).with_class("parity:n=4").with_learner(LearnerKind::Halving).with_trials(16),
        ExperimentConfig::new(ExperimentKind::Partition).with_class("rand:n=4,size=12,seed=1").with_k(4),
        ExperimentConfig::new(ExperimentKind::SimonGap).with_subspace(6, 2).with_trials(200).with_seed(3),
        ExperimentConfig::new(ExperimentKind::PacFormulas),
    ];
    let mut same = 0;
    for c in &configs {
        let a = run(c).unwrap().to_bytes(OutputFormat::Csv).unwrap();
        let b = run(c).unwrap().to_bytes(OutputFormat::Csv).unwrap();
        same += usize::from(a == b && !a.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let cli = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_qlearn"))
            .args(["learn", "--class", "delta:n=4", "--trials", "50", "--seed", "11", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let cli_same = cli("a.csv") == cli("b.csv");
    verdict(
        11,
        "byte-identical re-runs",
        same == configs.len() && cli_same,
        format!("{same}/{} in-process configs identical, CLI re-run identical: {cli_same}", configs.len()),
    )
}

#[test]
fn acceptance() {
    let verdicts = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ];
    for v in &verdicts {
        println!("{} criterion {:>2} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.id, v.name, v.detail);
    }
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.pass).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn family_trait_is_object_safe() {
    let f: Box<dyn ConceptFamily> = Box::new(ParityFamily::new(3).unwrap());
    assert_eq!(f.size(), 8);
}
