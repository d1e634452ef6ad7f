//! The five subcommands. Each returns the rendered report plus a pass flag;
//! the caller maps a failed verification to exit code 2.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wiretap_core::channels::{
    cq_state, depolarizing_environment_channel, tensor_power_channel, CQChannel, DepolarizingSpec,
    Distribution, DEFAULT_MEMORY_CAP,
};
use wiretap_core::codes::{
    privacy_amp_experiment, resolvability_experiment, EnsembleReport, ResolvabilitySpec,
};
use wiretap_core::exponents::{e_phi_with_s, e_psi_with_s, finite_n_bounds_grid};
use wiretap_core::gf::{hash_family_partition_permutation, hash_family_toeplitz_2c, HashFamily};
use wiretap_core::hermitian::{random_density, DensityMatrix};
use wiretap_core::quantities::{
    channel_phi, channel_psi, cond_renyi_sigma, d1_criteria, eta, mutual_info,
    phi_minimizer, psi_extended, psi_pair, psi_star_pair, rel_entropy, rel_entropy_lower,
    D1Variant, MutualInfoVariant,
};

use crate::spec::{
    BoundsConfig, CliError, CliResult, ExponentsConfig, FamilySpec, SimulateConfig, Units,
};

/// Formats a value with 12 significant digits in plain decimal notation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).clamp(0, 320) as usize;
    format!("{:.*}", decimals, x)
}

fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}

pub fn cmd_exponents(config: &ExponentsConfig, units: Units, grid: usize) -> CliResult<(String, bool)> {
    let we = config.eve.build()?;
    let p = Distribution::new(config.p.clone())?;
    let u = units.tag();
    let mut out = String::new();
    out.push_str(&format!(
        "R[{u}],e_psi[{u}],s_psi,e_phi[{u}],s_phi,half_e_psi[{u}],two_e_phi[{u}]\n"
    ));
    for r_out in config.rates.points()? {
        let r = units.to_nats(r_out);
        let (ep, sp) = e_psi_with_s(r, &we, &p, grid)?;
        let (ef, sf) = e_phi_with_s(r, &we, &p, grid)?;
        out.push_str(&csv_line(&[
            sig12(r_out),
            sig12(units.from_nats(ep)),
            sig12(sp),
            sig12(units.from_nats(ef)),
            sig12(sf),
            sig12(units.from_nats(0.5 * ep)),
            sig12(units.from_nats(2.0 * ef)),
        ]));
        out.push('\n');
    }
    Ok((out, true))
}

/// Default sweep: qubit environment channel with marginal (0.9, 0.1),
/// rates 0.47..1.0 bits in 0.005 steps, four exponent curves plus an
/// ordering verdict footer.
pub fn cmd_fig1(units: Units, grid: usize) -> CliResult<(String, bool)> {
    let px = Distribution::new(vec![0.9, 0.1])?;
    let pz = Distribution::new(vec![0.5, 0.5])?;
    let spec = DepolarizingSpec::independent(2, &px, &pz)?;
    let we = depolarizing_environment_channel(&spec);
    let p = Distribution::uniform(2);
    let u = units.tag();
    let mut out = String::new();
    out.push_str(&format!(
        "R[{u}],e_psi[{u}],e_phi[{u}],half_e_psi[{u}],two_e_phi[{u}]\n"
    ));
    let mut ordering_ok = true;
    for i in 0..=106 {
        let r_bits = 0.47 + 0.005 * i as f64;
        let r = r_bits * std::f64::consts::LN_2;
        let (ep, _) = e_psi_with_s(r, &we, &p, grid)?;
        let (ef, _) = e_phi_with_s(r, &we, &p, grid)?;
        if !(0.5 * ep <= ef + 1e-9 && ef <= ep + 1e-9) {
            ordering_ok = false;
        }
        let r_out = units.from_nats(r);
        out.push_str(&csv_line(&[
            sig12(r_out),
            sig12(units.from_nats(ep)),
            sig12(units.from_nats(ef)),
            sig12(units.from_nats(0.5 * ep)),
            sig12(units.from_nats(2.0 * ef)),
        ]));
        out.push('\n');
    }
    out.push_str(&format!("footer,ordering,{}\n", if ordering_ok { "pass" } else { "fail" }));
    Ok((out, ordering_ok))
}

pub fn cmd_bounds(config: &BoundsConfig, units: Units, grid: usize) -> CliResult<(String, bool)> {
    let wb = config.bob.build()?;
    let we = config.eve.build()?;
    let p = Distribution::new(config.p.clone())?;
    let q1 = match (&config.q, config.l) {
        (Some(q), None) => Distribution::new(q.clone())?,
        (None, Some(l)) => Distribution::uniform(l),
        (None, None) => Distribution::uniform(1),
        (Some(_), Some(_)) => {
            return Err(CliError::spec("give either `q` or `l`, not both"));
        }
    };
    let u = units.tag();
    let mut out = String::new();
    out.push_str(&format!(
        "n,m_total,l_total,eps_bound,s_eps,info_bound[{u}],s_info,d1_bound,s_d1\n"
    ));
    for &n in &config.n {
        let m_n = (config.m as u128)
            .checked_pow(n)
            .filter(|&m| m <= usize::MAX as u128)
            .ok_or_else(|| CliError::spec(format!("M^{n} overflows")))?
            as usize;
        let wbn = tensor_power_channel(&wb, n, DEFAULT_MEMORY_CAP)?;
        let wen = tensor_power_channel(&we, n, DEFAULT_MEMORY_CAP)?;
        let pn = p.tensor_power(n);
        let qn = q1.tensor_power(n);
        let b = finite_n_bounds_grid(m_n, &qn, &wbn, &wen, &pn, config.corollary, grid)?;
        out.push_str(&csv_line(&[
            n.to_string(),
            b.m.to_string(),
            b.l.to_string(),
            sig12(b.eps_bound),
            sig12(b.s_eps),
            sig12(units.from_nats(b.info_bound)),
            sig12(b.s_info),
            sig12(b.d1_bound),
            sig12(b.s_d1),
        ]));
        out.push('\n');
    }
    Ok((out, true))
}

fn render_report(report: &EnsembleReport, mean_tag: &str) -> String {
    let mut out = String::from("check,label,s,lhs,rhs,verdict\n");
    for c in &report.checks {
        out.push_str(&csv_line(&[
            "check".into(),
            c.label.into(),
            sig12(c.s),
            sig12(c.lhs),
            sig12(c.rhs),
            if c.holds { "pass".into() } else { "fail".into() },
        ]));
        out.push('\n');
    }
    out.push_str(&format!(
        "summary,mode,{},trials,{},mean_{mean_tag},{},se_{mean_tag},{}\n",
        if report.exhaustive { "exhaustive" } else { "monte_carlo" },
        report.trials,
        sig12(report.mean_d),
        sig12(report.se_d),
    ));
    out
}

fn build_family(spec: &FamilySpec) -> CliResult<HashFamily> {
    Ok(match spec {
        FamilySpec::PartitionPermutation { domain, range } => {
            hash_family_partition_permutation(*domain, *range)?
        }
        FamilySpec::Toeplitz { q, l2, rows } => hash_family_toeplitz_2c(*q, *l2, *rows)?,
    })
}

pub fn cmd_simulate(config: &SimulateConfig, _units: Units, seed: u64) -> CliResult<(String, bool)> {
    // divergence means are reported in nats; the hashed criterion is a
    // dimensionless trace distance
    let mean_tag = match config {
        SimulateConfig::PrivacyAmp { .. } => "d1[1]",
        _ => "d[nats]",
    };
    let report = match config {
        SimulateConfig::Lee1 { channel, p, pa, s_grid, trials } => {
            let w = channel.build()?;
            let p = Distribution::new(p.clone())?;
            let pa = Distribution::new(pa.clone())?;
            resolvability_experiment(
                &ResolvabilitySpec::Lee1 { w: &w, p: &p, pa: &pa },
                s_grid,
                *trials,
                seed,
            )?
        }
        SimulateConfig::Lee2 { channel, q, k, l, s_grid, trials } => {
            let w = channel.build()?;
            resolvability_experiment(
                &ResolvabilitySpec::Lee2 { w: &w, q: *q, k: *k, l: *l },
                s_grid,
                *trials,
                seed,
            )?
        }
        SimulateConfig::Lee3 { channel, q, k, l, pa, s_grid, trials } => {
            let w = channel.build()?;
            let pa = Distribution::new(pa.clone())?;
            resolvability_experiment(
                &ResolvabilitySpec::Lee3 { w: &w, q: *q, k: *k, l: *l, pa: &pa },
                s_grid,
                *trials,
                seed,
            )?
        }
        SimulateConfig::PrivacyAmp { probs, states, family, s } => {
            let states: Vec<DensityMatrix> =
                states.iter().map(|m| m.build()).collect::<CliResult<_>>()?;
            let state = wiretap_core::channels::JointCQState::new(
                Distribution::new(probs.clone())?,
                states,
            )?;
            let family = build_family(family)?;
            let sigma = state.quantum_marginal();
            privacy_amp_experiment(&state, &family, &sigma, *s)?
        }
    };
    // exhaustive verdicts are hard; Monte-Carlo results are informational
    let pass = !report.exhaustive || report.all_hold();
    Ok((render_report(&report, mean_tag), pass))
}

struct SuiteOutcome {
    name: &'static str,
    instances: usize,
    passes: usize,
    near_equality: usize,
    worst_margin: f64,
}

const VERIFY_SUITES: &[(&str, &str)] = &[
    ("lower-divergence", "pinched relative entropy below standard relative entropy"),
    ("lower-cgf", "pinched cumulant generator below standard cumulant generator"),
    ("psi-le-phi", "channel psi below the concavified phi on s in (0,1)"),
    ("minimizer-optimality", "closed-form reference state minimizes the extended psi"),
    ("phi-interpolation", "(1+t) phi(t/(1+t)) below psi(t)"),
    ("exponent-chain", "half e_psi <= e_phi <= e_psi"),
    ("renyi-monotone", "sigma-conditional Renyi entropy non-increasing in order"),
    ("pinsker", "squared trace-distance criterion below twice the information"),
    ("fannes", "information below the continuity envelope of the distance"),
];

pub fn list_verify_suites() -> String {
    let mut out = String::from("suite,statement\n");
    for (name, desc) in VERIFY_SUITES {
        out.push_str(&format!("{name},{desc}\n"));
    }
    out
}

/// Self-generating inequality suites: 20 random instances each (dim <= 4,
/// alphabet <= 5), margins must stay below the tolerance.
pub fn cmd_verify(seed: u64, tol: f64) -> CliResult<(String, bool)> {
    let fail_thresh = if tol > 0.0 { tol } else { 1e-8 };
    let near_thresh = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = 20;
    let mut outcomes = Vec::new();

    let mut run = |name: &'static str,
                   mut margin_fn: Box<dyn FnMut(&mut ChaCha8Rng) -> f64>,
                   rng: &mut ChaCha8Rng| {
        let mut passes = 0;
        let mut near = 0;
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..instances {
            let margin = margin_fn(rng);
            worst = worst.max(margin);
            if margin <= fail_thresh {
                passes += 1;
                if tol <= 0.0 && margin > 0.0 && margin <= near_thresh {
                    near += 1;
                }
            }
        }
        outcomes.push(SuiteOutcome {
            name,
            instances,
            passes,
            near_equality: near,
            worst_margin: worst,
        });
    };

    fn random_instance(rng: &mut ChaCha8Rng) -> (CQChannel, Distribution) {
        let letters = 2 + (rand::Rng::gen_range(rng, 0..4)) as usize;
        let dim = 2 + (rand::Rng::gen_range(rng, 0..3)) as usize;
        let w = CQChannel::random(letters, dim, rng);
        let p = Distribution::random(letters, rng);
        (w, p)
    }

    run(
        "lower-divergence",
        Box::new(|rng| {
            let dim = 2 + rand::Rng::gen_range(rng, 0..3) as usize;
            let rho = random_density(dim, rng);
            let sigma = random_density(dim, rng);
            rel_entropy_lower(&rho, &sigma).unwrap() - rel_entropy(&rho, &sigma).unwrap()
        }),
        &mut rng,
    );
    run(
        "lower-cgf",
        Box::new(|rng| {
            let dim = 2 + rand::Rng::gen_range(rng, 0..3) as usize;
            let rho = random_density(dim, rng);
            let sigma = random_density(dim, rng);
            [0.25, 0.5, 0.75, 1.0]
                .iter()
                .map(|&s| psi_star_pair(s, &rho, &sigma).unwrap() - psi_pair(s, &rho, &sigma).unwrap())
                .fold(f64::NEG_INFINITY, f64::max)
        }),
        &mut rng,
    );
    run(
        "psi-le-phi",
        Box::new(|rng| {
            let (w, p) = random_instance(rng);
            [0.1, 0.25, 0.5, 0.75, 0.9]
                .iter()
                .map(|&s| channel_psi(s, &w, &p).unwrap() - channel_phi(s, &w, &p).unwrap())
                .fold(f64::NEG_INFINITY, f64::max)
        }),
        &mut rng,
    );
    run(
        "minimizer-optimality",
        Box::new(|rng| {
            let (w, p) = random_instance(rng);
            let mut worst = f64::NEG_INFINITY;
            for &t in &[0.25, 0.75] {
                let star = phi_minimizer(t, &w, &p).unwrap();
                let at_star = psi_extended(t, &w, &p, star.op()).unwrap();
                for _ in 0..20 {
                    let sigma = random_density(w.output_dim(), rng);
                    let at_sigma = psi_extended(t, &w, &p, sigma.op()).unwrap();
                    worst = worst.max(at_star - at_sigma);
                }
            }
            worst
        }),
        &mut rng,
    );
    run(
        "phi-interpolation",
        Box::new(|rng| {
            let (w, p) = random_instance(rng);
            [0.25, 0.5, 1.0]
                .iter()
                .map(|&t| {
                    (1.0 + t) * channel_phi(t / (1.0 + t), &w, &p).unwrap()
                        - channel_psi(t, &w, &p).unwrap()
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }),
        &mut rng,
    );
    run(
        "exponent-chain",
        Box::new(|rng| {
            let (w, p) = random_instance(rng);
            let i = mutual_info(&w, &p, MutualInfoVariant::I).unwrap();
            let r = 1.2 * i + 0.1;
            let (ep, _) = e_psi_with_s(r, &w, &p, 128).unwrap();
            let (ef, _) = e_phi_with_s(r, &w, &p, 128).unwrap();
            (0.5 * ep - ef).max(ef - ep)
        }),
        &mut rng,
    );
    run(
        "renyi-monotone",
        Box::new(|rng| {
            let (w, p) = random_instance(rng);
            let state = cq_state(&w, &p).unwrap();
            let sigma = state.quantum_marginal();
            let grid: Vec<f64> = (1..=12).map(|i| i as f64 / 12.0).collect();
            let vals: Vec<f64> =
                grid.iter().map(|&s| cond_renyi_sigma(&state, &sigma, s).unwrap()).collect();
            vals.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
        }),
        &mut rng,
    );
    run(
        "pinsker",
        Box::new(|rng| {
            let (w, p) = random_instance(rng);
            let state = cq_state(&w, &p).unwrap();
            let d1 = d1_criteria(&state, D1Variant::D1);
            let i = mutual_info(&w, &p, MutualInfoVariant::I).unwrap();
            d1 * d1 - 2.0 * i
        }),
        &mut rng,
    );
    run(
        "fannes",
        Box::new(|rng| {
            let (w, p) = random_instance(rng);
            let state = cq_state(&w, &p).unwrap();
            let d1 = d1_criteria(&state, D1Variant::D1);
            if d1 > 1.0 / std::f64::consts::E {
                return f64::NEG_INFINITY; // envelope applies below 1/e only
            }
            let i = mutual_info(&w, &p, MutualInfoVariant::I).unwrap();
            i - eta(d1, (w.output_dim() as f64).ln())
        }),
        &mut rng,
    );

    let mut out = String::from("suite,instances,passes,near_equality,worst_margin[nats]\n");
    let mut all_pass = true;
    for o in &outcomes {
        if o.passes != o.instances {
            all_pass = false;
        }
        out.push_str(&csv_line(&[
            o.name.into(),
            o.instances.to_string(),
            o.passes.to_string(),
            o.near_equality.to_string(),
            sig12(o.worst_margin),
        ]));
        out.push('\n');
    }
    out.push_str(&format!("footer,verdict,{}\n", if all_pass { "pass" } else { "fail" }));
    Ok((out, all_pass))
}
