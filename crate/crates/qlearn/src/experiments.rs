//! Experiment drivers and the fixed benchmark sweep.

use std::io::Write;

use anyhow::{bail, Context, Result};
use qlearn_core::learners::{
    self, classical_halving_learn, halving_query_bound, nested_bv_learn, quantum_exact_learn, trial_setup,
    Quantiles, TrialOutcome, TrialReport,
};
use qlearn_core::pacsim;
use qlearn_core::partitions::{
    self, algorithm4_build_partition, algorithm5_learn_partition, classical_collision_baseline,
    gamma_hat_partition, provable_level_bound, simon_partition_learn,
};
use qlearn_core::qsim::{gf2, FamilyMember, FunctionOracle, SubspaceF2};
use qlearn_core::zoo::{self, ClassSpec};
use qlearn_core::{concept, ConceptClass, Rational, SplitMix64};

use crate::config::{ExperimentConfig, ExperimentKind, LearnerKind, OutputFormat};
use crate::formats;
use crate::report::{self, FormulaRow, ReportRow};
use crate::trials::{par_map, par_run_trials};

/// Success-rate floor for learners whose contract is 2/3, with sampling slack
/// for 200 to 300 trials.
pub const SUCCESS_FLOOR: f64 = 0.60;
pub const FORMULA_TOLERANCE: f64 = 1e-9;

/// Output of [`run`]. Formula comparisons use their own column set.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Rows(Vec<ReportRow>),
    Formulas(Vec<FormulaRow>),
}

impl Report {
    pub fn passed(&self) -> bool {
        match self {
            Report::Rows(rows) => rows.iter().all(|r| r.pass),
            Report::Formulas(rows) => rows.iter().all(|r| r.pass),
        }
    }

    pub fn write<W: Write>(&self, format: OutputFormat, out: W) -> Result<()> {
        match (self, format) {
            (Report::Rows(r), OutputFormat::Csv) => report::write_csv(r, out),
            (Report::Rows(r), OutputFormat::Json) => report::write_json_lines(r, out),
            (Report::Formulas(r), OutputFormat::Csv) => report::write_csv(r, out),
            (Report::Formulas(r), OutputFormat::Json) => report::write_json_lines(r, out),
        }
    }

    pub fn to_bytes(&self, format: OutputFormat) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }

    pub fn rows(&self) -> &[ReportRow] {
        match self {
            Report::Rows(r) => r,
            Report::Formulas(_) => &[],
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let class = || config.class.as_deref().expect("validated");
    Ok(match config.kind {
        ExperimentKind::Gamma => Report::Rows(vec![gamma_row(class())?]),
        ExperimentKind::Learn => Report::Rows(vec![learn_row(class(), config.learner, config.trials, config.seed)?]),
        ExperimentKind::Partition => {
            let k = config.k.expect("validated");
            let (row, doc) = partition_row(class(), k)?;
            if let Some(path) = &config.partition_out {
                std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Report::Rows(vec![row])
        }
        ExperimentKind::SimonGap => Report::Rows(vec![simon_gap_row(
            config.m.expect("validated"),
            config.l.expect("validated"),
            config.trials,
            config.seed,
        )?]),
        ExperimentKind::PacFormulas => Report::Formulas(pac_formula_rows()?),
        ExperimentKind::Bench => Report::Rows(bench_suite(config.seed)?),
    })
}

/// Parses a class argument: a class spec, or `file:PATH` for a JSON class.
pub fn load_class(arg: &str) -> Result<(Option<ClassSpec>, ConceptClass)> {
    if let Some(path) = arg.strip_prefix("file:") {
        return Ok((None, formats::read_class(path.as_ref())?));
    }
    let spec = parse_spec(arg)?;
    let class = spec.materialize()?;
    Ok((Some(spec), class))
}

fn parse_spec(arg: &str) -> Result<ClassSpec> {
    let spec: ClassSpec = arg.parse().with_context(|| format!("invalid class spec {arg:?}"))?;
    spec.validate().with_context(|| format!("invalid class spec {arg:?}"))?;
    Ok(spec)
}

fn fmt_ratio(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn class_row(experiment: &str, arg: &str, class: &ConceptClass) -> ReportRow {
    let mut row = ReportRow::new(experiment, arg);
    row.size = Some(class.len() as u64);
    row.n = Some(class.n());
    row
}

pub fn gamma_row(arg: &str) -> Result<ReportRow> {
    let (spec, class) = load_class(arg)?;
    let g = zoo::gamma_report(&class, spec.as_ref())?;
    let mut row = class_row("gamma", arg, &class);
    row.gamma_hat = Some(fmt_ratio(g.gamma_hat));
    row.bound_name = "inverse_floor".into();
    row.bound = Some(g.inverse_floor());
    let domain = class.domain_size() as u64;
    row.check("gamma>=1/(N+1)", g.gamma_hat >= Rational::new(1, domain + 1));
    row.check("gamma<=1/2", g.gamma_hat <= Rational::new(1, 2));
    row.note(&format!(
        "{} witness of {} concepts",
        if g.exhaustive { "exhaustive" } else { "analytic" },
        g.witness_subset.len()
    ));
    Ok(row)
}

pub fn learn_row(arg: &str, learner: LearnerKind, trials: usize, seed: u64) -> Result<ReportRow> {
    if learner == LearnerKind::Nestedbv {
        return nested_bv_row(arg, trials, seed);
    }
    let (spec, class) = load_class(arg)?;
    let gamma = zoo::gamma_report(&class, spec.as_ref()).ok().map(|g| g.gamma_hat);
    let mut row = class_row("learn", arg, &class);
    row.learner = learner.to_string();
    row.trials = trials;
    row.gamma_hat = gamma.map(fmt_ratio);
    let size = class.len() as u64;
    let report = match learner {
        LearnerKind::Quantum => {
            let Some(g) = gamma else { bail!("γ̂ unavailable for {arg}: class too large for the exhaustive search") };
            let runs = quantum_runs(&class, trials, seed)?;
            let cap = learners::quantum_query_cap(class.len(), g);
            row.bound_name = "quantum_cap".into();
            row.bound = Some(cap);
            let worst_search = runs.iter().map(|r| r.1).max().unwrap_or(0);
            let report = TrialReport::from_outcomes(seed, runs.into_iter().map(|r| r.0).collect());
            row.check("success>=0.60", report.success_rate >= SUCCESS_FLOOR);
            row.check("search_queries<=cap", worst_search <= cap);
            row.note(&format!("max search-phase queries {worst_search}"));
            row.note(&format!("max outer iterations {}", report.max_outer_iterations()));
            report
        }
        LearnerKind::Halving => {
            let report = par_run_trials(size, trials, seed, |t, _| classical_halving_learn(&class, class.row(t as usize)))?;
            row.check("exact", report.successes == report.trials);
            if let Some(g) = gamma {
                let bound = halving_query_bound(class.len(), g);
                row.bound_name = "halving_bound".into();
                row.bound = Some(bound);
                row.check("classical<=bound", report.outcomes.iter().all(|o| o.classical <= bound));
            }
            report
        }
        LearnerKind::Nestedbv => unreachable!(),
    };
    row.success_rate = Some(report.success_rate);
    row.quantum(report.quantum);
    row.classical(report.classical);
    row.derive_ratios();
    row.r_over_nq_q2 = None;
    Ok(row)
}

/// Runs the quantum learner on seeded trials. Each run also reports the
/// queries charged inside the search phase, where Grover iterations and
/// verifications share one budget.
pub fn quantum_runs(class: &ConceptClass, trials: usize, seed: u64) -> Result<Vec<(TrialOutcome, u64)>> {
    Ok(par_map(trials, seed, |i, _| {
        let (target, mut rng) = trial_setup(class.len() as u64, trials, seed, i);
        let r = quantum_exact_learn(class, class.row(target as usize), &mut rng)?;
        let search = r.ledger.phase("search");
        Ok::<_, qlearn_core::Error>((TrialOutcome::from_result(target, &r), search.quantum + search.classical))
    })?)
}

/// Exact block Bernstein–Vazirani on a parity-type family, without
/// materializing the class.
fn nested_bv_row(arg: &str, trials: usize, seed: u64) -> Result<ReportRow> {
    let spec = parse_spec(arg)?;
    let Some(family) = spec.family()? else {
        bail!("learner nestedbv needs a parity, nestedbv or prefixed class, got {arg}")
    };
    let expected = match spec {
        ClassSpec::Parity { .. } => 1,
        ClassSpec::NestedBv { n, d } => u64::from(zoo::NestedBvFamily::new(n, d)?.blocks()),
        ClassSpec::PrefixedParity { k, .. } => 1 << k,
        _ => bail!("learner nestedbv needs a parity, nestedbv or prefixed class, got {arg}"),
    };
    let report = par_run_trials(family.size(), trials, seed, |t, rng| {
        nested_bv_learn(&spec, &FamilyMember { family: family.as_ref(), index: t }, rng)
    })?;
    let mut row = ReportRow::new("learn", arg);
    row.size = Some(family.size());
    row.n = Some(family.input_bits());
    row.learner = LearnerKind::Nestedbv.to_string();
    row.trials = trials;
    row.success_rate = Some(report.success_rate);
    row.quantum(report.quantum);
    row.classical(report.classical);
    row.bound_name = "block_count".into();
    row.bound = Some(expected);
    row.check("exact", report.successes == report.trials);
    row.check("quantum==blocks", report.outcomes.iter().all(|o| o.quantum == expected));
    row.derive_ratios();
    row.r_over_nq_q2 = None;
    Ok(row)
}

/// `⌈log₂ k + 1⌉ · ⌊1/γ̂⌋`.
pub fn partition_query_cap(k: usize, gamma_hat: Rational) -> u64 {
    ((k as f64).log2() + 1.0).ceil() as u64 * (gamma_hat.denom() / gamma_hat.numer())
}

pub fn partition_row(arg: &str, k: usize) -> Result<(ReportRow, formats::PartitionDocument)> {
    let (_, class) = load_class(arg)?;
    let g = concept::gamma_hat(&class)?.gamma_hat;
    let (partition, memo) = algorithm4_build_partition(&class, k)?;
    let mut row = class_row("partition", arg, &class);
    row.learner = "algorithm5".into();
    row.trials = class.len();
    row.gamma_hat = Some(fmt_ratio(g));
    row.check("pieces==k", partition.len() == k && partition.pieces().iter().all(|p| !p.is_empty()));
    let quarter = Rational::new(1, 4);
    let half = Rational::new(1, 2);
    row.check(
        "split_ratios",
        memo.entries().all(|(_, e)| {
            let (zero, star) = e.split_ratios();
            zero > quarter && zero <= half && star >= half && star < Rational::from_integer(1)
        }),
    );
    let mut counts = Vec::with_capacity(class.len());
    let mut exact = true;
    for t in 0..class.len() {
        let r = algorithm5_learn_partition(&class, &partition, &memo, class.row(t))?;
        exact &= r.piece == partition.piece_of(t);
        counts.push(r.ledger.classical());
    }
    let cap = partition_query_cap(k, g);
    let worst = counts.iter().copied().max().unwrap_or(0);
    row.success_rate = Some(if exact { 1.0 } else { 0.0 });
    row.classical(Quantiles::of(counts));
    row.bound_name = "partition_cap".into();
    row.bound = Some(cap);
    row.check("exact", exact);
    row.check("classical<=cap", worst <= cap);
    let floor = (k as f64).log2() / ((class.domain_size() + 1) as f64).log2();
    row.check("worst>=counting_floor", worst as f64 >= floor - 1e-12);
    if class.len() <= concept::GAMMA_HAT_CAP {
        let gp = gamma_hat_partition(&class, &partition)?.gamma_hat_p;
        row.check("gamma_p==gamma", gp == Some(g));
    }
    let levels = memo.outer_iterations();
    row.check("levels<=provable_bound", levels <= provable_level_bound(class.len()));
    let short = learners::ceil_log2(k) + 1;
    row.note(&format!("levels {levels}, ceil(log2 k)+1 = {short}, max |I| {}", memo.max_inputs()));
    let doc = formats::PartitionDocument::new(&partition, &memo);
    Ok((row, doc))
}

/// One Simon-versus-collision trial on a random `ℓ`-dimensional hidden subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimonTrial {
    pub quantum: u64,
    pub correct: bool,
    pub samples_in_perp: bool,
    pub classical: u64,
    pub classical_found: bool,
    pub classical_correct: bool,
}

pub fn simon_trial(m: u32, l: u32, rng: &mut SplitMix64) -> Result<SimonTrial> {
    let basis: Vec<u64> = loop {
        let b: Vec<u64> = (0..l).map(|_| rng.below(1 << m)).collect();
        if gf2::gf2_rank(&b) == l as usize {
            break b;
        }
    };
    let v = SubspaceF2::new(m, &basis)?;
    let f = zoo::v_invariant_function(v.basis(), m, rng.next_u64())?;
    let mut oracle = FunctionOracle::new(&f);
    let r = simon_partition_learn(&mut oracle, l, rng)?;
    let perp = v.orthogonal_complement();
    let mut baseline = FunctionOracle::new(&f);
    let c = classical_collision_baseline(&mut baseline, l, rng, 1 << m)?;
    Ok(SimonTrial {
        quantum: oracle.ledger().quantum(),
        correct: r.complete && r.subspace == v,
        samples_in_perp: r.samples.iter().all(|&y| perp.contains(y)),
        classical: c.queries,
        classical_found: c.subspace.is_some(),
        classical_correct: c.subspace.is_none_or(|s| s == v && zoo::verify_v_invariant(&f, &s)),
    })
}

pub fn simon_gap_row(m: u32, l: u32, trials: usize, seed: u64) -> Result<ReportRow> {
    if l >= m || m > zoo::MAX_MULTI_OUTPUT_BITS {
        bail!("simon-gap needs ℓ < m ≤ {}, got m = {m}, ℓ = {l}", zoo::MAX_MULTI_OUTPUT_BITS);
    }
    let results = par_map(trials, seed, |_, rng| simon_trial(m, l, rng))?;
    let mut row = ReportRow::new("simon-gap", &format!("vinv:m={m},l={l}"));
    row.n = Some(m);
    row.learner = "simon|collision".into();
    row.trials = trials;
    let successes = results.iter().filter(|r| r.correct).count();
    row.success_rate = Some(successes as f64 / trials as f64);
    let q = Quantiles::of(results.iter().map(|r| r.quantum));
    let c = Quantiles::of(results.iter().map(|r| r.classical));
    row.quantum(q);
    row.classical(c);
    row.bound_name = "3m".into();
    row.bound = Some(3 * u64::from(m));
    row.check("success>=0.60", row.success_rate.unwrap_or(0.0) >= SUCCESS_FLOOR);
    row.check("quantum<=3m", q.max <= 3 * u64::from(m));
    row.check("samples_in_perp", results.iter().all(|r| r.samples_in_perp));
    row.check("baseline_correct_when_found", results.iter().all(|r| r.classical_correct));
    let found = results.iter().filter(|r| r.classical_found).count();
    row.note(&format!(
        "classical/quantum median ratio {:.3}; baseline found V in {found}/{trials}",
        c.median as f64 / q.median.max(1) as f64
    ));
    Ok(row)
}

fn pac_register_bits(d: u32) -> u32 {
    learners::ceil_log2(d as usize + 1)
}

/// Closed forms against explicit state vectors over the grid `t ≤ 4`,
/// `ε ∈ {1/64, 1/32}`, `d ∈ {4, 8}`, plus the threshold formula.
pub fn pac_formula_rows() -> Result<Vec<FormulaRow>> {
    let mut rows = Vec::new();
    let epsilons = [1.0 / 64.0, 1.0 / 32.0];
    for &eps in &epsilons {
        let (c0, c1, dist) = pacsim::two_point_instance(eps)?;
        for t in 1..=4 {
            rows.push(FormulaRow::new(
                "t_copy_inner_product",
                format!("eps={eps},T={t}"),
                (1.0 - 3.0 * eps).powi(t as i32),
                pacsim::t_copy_inner_product_explicit(&c0, &c1, &dist, t)?,
                FORMULA_TOLERANCE,
            ));
        }
    }
    for d in [4u32, 8] {
        for &eps in &epsilons {
            let inst = pacsim::ehkv_instance(d, eps, pac_register_bits(d))?;
            let last = inst.concepts.len() - 1;
            for t in 1..=4 {
                for concept in [0, last] {
                    let params = format!("d={d},eps={eps},t={t},concept={concept}");
                    let phi = pacsim::phi_t_state(&inst, concept, t)?;
                    let psi = pacsim::psi_t_state(&inst, concept, t)?;
                    rows.push(FormulaRow::new(
                        "psi_phi_inner",
                        params.clone(),
                        pacsim::psi_phi_inner_closed(eps, t),
                        psi.state.inner(&phi.state)?.re,
                        FORMULA_TOLERANCE,
                    ));
                    rows.push(FormulaRow::new(
                        "alpha_squared",
                        params,
                        pacsim::alpha_squared_closed(eps, t),
                        phi.alpha * phi.alpha,
                        FORMULA_TOLERANCE,
                    ));
                }
            }
        }
    }
    for eps in [1.0 / 64.0, 1.0 / 32.0, 0.1] {
        for delta in [0.01, 0.05, 0.1, 0.2] {
            rows.push(FormulaRow::new(
                "pac_threshold",
                format!("eps={eps},delta={delta}"),
                pacsim::pac_threshold_closed(eps, delta) as f64,
                pacsim::pac_threshold_search(eps, delta) as f64,
                0.0,
            ));
        }
    }
    Ok(rows)
}

fn merge_comparison(quantum: &ReportRow, classical: &ReportRow) -> ReportRow {
    let mut row = ReportRow::new("bench-compare", &quantum.class);
    row.size = quantum.size;
    row.n = quantum.n;
    row.gamma_hat = quantum.gamma_hat.clone().or_else(|| classical.gamma_hat.clone());
    row.learner = format!("{}|{}", quantum.learner, classical.learner);
    row.trials = quantum.trials;
    row.quantum_min = quantum.quantum_min;
    row.quantum_median = quantum.quantum_median;
    row.quantum_max = quantum.quantum_max;
    row.classical_min = classical.classical_min;
    row.classical_median = classical.classical_median;
    row.classical_max = classical.classical_max;
    row.derive_ratios();
    row
}

/// The fixed fixture sweep. Rows come out in a fixed order.
pub fn bench_suite(seed: u64) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for arg in ["parity:n=2", "delta:n=3", "parity:n=6", "delta:n=5", "rand:n=4,size=12,seed=1"] {
        rows.push(gamma_row(arg)?);
    }
    for arg in ["delta:n=5", "parity:n=6"] {
        let q = learn_row(arg, LearnerKind::Quantum, 300, seed)?;
        let size = q.size.unwrap_or(1) as usize;
        let h = learn_row(arg, LearnerKind::Halving, size, seed)?;
        let cmp = merge_comparison(&q, &h);
        rows.extend([q, h, cmp]);
    }
    for (arg, trials) in [("parity:n=8", 256), ("nestedbv:n=16,d=2", 64)] {
        rows.push(learn_row(arg, LearnerKind::Nestedbv, trials, seed)?);
    }
    let prefixed = "prefixed:n=5,k=2";
    let q = learn_row(prefixed, LearnerKind::Nestedbv, 200, seed)?;
    let mut h = learn_row(prefixed, LearnerKind::Halving, 200, seed)?;
    let (n, k) = (5u32, 2u32);
    let info = (1u64 << k) * u64::from(n - k);
    h.bound_name = "information_floor".into();
    h.bound = Some(info);
    h.check("halving>=2^k(n-k)", h.classical_min.is_some_and(|c| c >= info));
    let mut cmp = merge_comparison(&q, &h);
    cmp.check("quantum==4", q.quantum_min == Some(4) && q.quantum_max == Some(4));
    cmp.check("classical>=12", h.classical_min.is_some_and(|c| c >= 12));
    rows.extend([q, h, cmp]);
    for arg in ["delta:n=3", "rand:n=4,size=12,seed=1"] {
        let size = load_class(arg)?.1.len();
        let mut ks = vec![2, 4, 8, size];
        ks.dedup();
        for k in ks {
            rows.push(partition_row(arg, k)?.0);
        }
    }
    rows.push(simon_gap_row(6, 2, 200, seed)?);
    let mut gap = simon_gap_row(8, 5, 100, seed)?;
    gap.check("quantum_median<=24", gap.quantum_median.is_some_and(|q| q <= 24));
    rows.push(gap);
    let formulas = pac_formula_rows()?;
    let mut pac = ReportRow::new("pac-formulas", "two-point|hard-instance");
    pac.trials = formulas.len();
    pac.check("all_within_tolerance", formulas.iter().all(|f| f.pass));
    let worst = formulas.iter().map(|f| f.abs_err).fold(0.0, f64::max);
    pac.note(&format!("max abs_err {worst:e}"));
    rows.push(pac);
    let mut counts = ReportRow::new("subspace-count", "N_{m,l}, m<=5");
    let mut agree = true;
    for m in 2..=5u32 {
        for l in 1..m {
            let listed = partitions::enumerate_subspaces(m, l)?.len();
            agree &= partitions::count_subspaces(m, l)? == listed.into();
        }
    }
    counts.check("enumeration==closed_form", agree);
    rows.push(counts);
    Ok(rows)
}
