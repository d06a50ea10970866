//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use mdmb_core::envelope::{concavify_weighted, Budget, WeightedEnvelopeQuery};
use mdmb_core::fixtures;
use mdmb_core::geometry::is_generic;
use mdmb_core::mechanism::{audit_deviations, check_ic, construct_optimal_mdmb, sender_payoff, CanonicalMDMB};
use mdmb_core::model::{Belief, PriorDomain, SubjectivePrior};
use mdmb_core::oracle::{
    audit_report, binary_lambda_line, grid_concavify, grid_min_lambda, AuditSettings, GridSpec, VertexOracle,
};
use mdmb_core::rational::{frac, int, to_fraction_string as show, Rational};
use mdmb_core::solvers::{
    protocol_report, value_bp, value_ct, value_md, value_mdmb, value_mdmb_binary, value_mdmb_budget, verify_saddle,
    PosteriorDistribution, SaddleCertificate, SaddleMode,
};
use mdmb_core::PiecewiseValueStructure;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn bin(h: Rational) -> Belief {
    Belief::new(vec![h.clone(), int(1) - h]).unwrap()
}

fn salesman(mu0: &Rational) -> PiecewiseValueStructure {
    fixtures::salesman(mu0.clone()).value_structure().unwrap()
}

fn closed_forms() -> Outcome {
    for mu0 in [frac(1, 10), frac(1, 4), frac(2, 5)] {
        let s = salesman(&mu0);
        let expected = &mu0 / (int(1) - &mu0);
        let v = ok(value_mdmb(&s))?.0;
        ensure!(v == expected, "V* at {} is {}, expected {}", show(&mu0), show(&v), show(&expected));
        let md = ok(value_md(&s))?;
        let ct = ok(value_ct(&s))?;
        ensure!(md.is_zero() && ct.is_zero(), "MD {} and CT {} at {} should be 0", show(&md), show(&ct), show(&mu0));
    }
    for mu0 in [frac(1, 2), frac(3, 5)] {
        let v = ok(value_mdmb(&salesman(&mu0)))?.0;
        ensure!(v == int(1), "V* at {} is {}, expected 1", show(&mu0), show(&v));
    }
    Ok("5 priors exact".into())
}

fn budget_curve() -> Outcome {
    for (c, mu0) in [(int(2), frac(1, 4)), (int(3), frac(1, 10)), (frac(3, 2), frac(2, 5))] {
        let expected = (&c - int(1)) * &mu0 / (&c * (int(1) - &mu0) - &mu0);
        let v = ok(value_mdmb_budget(&salesman(&mu0), &c))?.0;
        ensure!(v == expected, "V_C at C={}, prior {} is {}, expected {}", show(&c), show(&mu0), show(&v), show(&expected));
    }
    for c in [frac(1, 2), int(1)] {
        for mu0 in [frac(1, 10), frac(1, 4), frac(2, 5)] {
            let v = ok(value_mdmb_budget(&salesman(&mu0), &c))?.0;
            ensure!(v.is_zero(), "V_C at C={}, prior {} is {}, expected 0", show(&c), show(&mu0), show(&v));
        }
    }
    Ok("3 curve points and 6 zero points exact".into())
}

fn pricing_example() -> Outcome {
    let s = fixtures::pricing().value_structure().unwrap();
    for (t, expected) in [(0, int(3)), (1, int(3)), (2, frac(8, 3))] {
        let q = WeightedEnvelopeQuery::max_only(&s, SubjectivePrior::point_mass(3, t));
        let v = ok(concavify_weighted(&q))?.value;
        ensure!(v == expected, "cav at type {t} is {}, expected {}", show(&v), show(&expected));
    }
    let (v, cert) = ok(value_mdmb(&s))?;
    ensure!(v == frac(5, 2), "V* is {}", show(&v));
    ensure!(ok(verify_saddle(&s, &cert, &SaddleMode::Simplex))?.holds(), "solver certificate rejected");

    let tau = ok(PosteriorDistribution::new(
        vec![
            (Belief::new(vec![frac(1, 2), frac(1, 4), frac(1, 4)]).unwrap(), frac(2, 3)),
            (Belief::new(vec![int(0), frac(1, 2), frac(1, 2)]).unwrap(), frac(1, 3)),
        ],
        s.prior(),
    ))?;
    let lam = SubjectivePrior::simplex(vec![int(0), frac(1, 2), frac(1, 2)]).unwrap();
    let cert = ok(SaddleCertificate::with_max_selection(&s, lam, &tau))?;
    let verdict = ok(verify_saddle(&s, &cert, &SaddleMode::Simplex))?;
    ensure!(verdict.holds(), "published certificate rejected: {:?}", verdict.violation);
    ensure!(
        verdict.per_type_payoffs == vec![int(3), frac(5, 2), frac(5, 2)],
        "directional payoffs {:?}",
        verdict.per_type_payoffs.iter().map(show).collect::<Vec<_>>()
    );
    Ok("envelopes 3, 3, 8/3; V* 5/2; saddle verified".into())
}

fn three_action_example() -> Outcome {
    let s = fixtures::three_action_binary(frac(1, 5)).value_structure().unwrap();
    let ct = ok(value_ct(&s))?;
    let md = ok(value_md(&s))?;
    let v = ok(value_mdmb(&s))?.0;
    let bp = ok(value_bp(&s))?;
    ensure!(ct == md && md == v && bp > v, "CT {} MD {} V* {} BP {}", show(&ct), show(&md), show(&v), show(&bp));
    ensure!(v == frac(1, 4) && bp == frac(3, 10), "values {} and {}", show(&v), show(&bp));

    let own = SubjectivePrior::from_belief(s.prior());
    let low = ok(grid_concavify(&s, &own, &Budget::Unlimited, GridSpec::new(1000).unwrap()))?;
    let oracle = ok(VertexOracle::new(&s))?;
    let exact_bp = ok(oracle.concavify(&own, &Budget::Unlimited))?;
    ensure!(low <= bp && exact_bp == bp, "BP oracle bounds {} / {}", show(&low), show(&exact_bp));
    ensure!(ok(oracle.quasiconcavify())? == ct, "CT oracle disagrees");
    let line = ok(binary_lambda_line(&int(0), &frac(1, 128), 129, PriorDomain::Simplex))?;
    let (upper, _) = ok(grid_min_lambda(&s, &line, &Budget::Unlimited))?;
    ensure!(upper == v, "lambda-grid upper bound {} differs from V*", show(&upper));
    Ok(format!("CT = MD = V* = 1/4 < BP = 3/10; grid lower bound {}", show(&low)))
}

fn kinked_example() -> Outcome {
    let s = fixtures::kinked_abstract(fixtures::kinked_abstract_prior());
    let md = ok(value_md(&s))?;
    let v = ok(value_mdmb(&s))?.0;
    let ct = ok(value_ct(&s))?;
    ensure!(md == frac(7, 3) && v == frac(7, 3), "MD {} V* {}", show(&md), show(&v));
    ensure!(ct < frac(7, 3), "CT {} is not below 7/3", show(&ct));
    Ok(format!("MD = V* = 7/3, CT = {}", show(&ct)))
}

fn check_mechanism(s: &PiecewiseValueStructure, m: &CanonicalMDMB) -> Result<(), String> {
    ensure!(ok(check_ic(s, m))?.iter().flatten().all(|r| r.is_zero()), "nonzero IC residual");
    ensure!(m.x.iter().all(|x| !x.is_negative()), "negative burn");
    ok(m.check_invariants(s))?;
    ensure!(audit_deviations(m).is_empty(), "profitable misreport");
    Ok(())
}

fn mechanism_suite() -> Outcome {
    let deltas: Vec<Rational> = (1..=8).map(|k| Rational::new(1.into(), (1i64 << k).into())).collect();
    let mu0 = frac(1, 4);
    let s = salesman(&mu0);
    let scheme = ok(PosteriorDistribution::new(vec![(bin(frac(1, 2)), frac(1, 2)), (bin(int(0)), frac(1, 2))], s.prior()))?;
    let pricing = fixtures::pricing().value_structure().unwrap();
    let tau = ok(PosteriorDistribution::new(
        vec![
            (Belief::new(vec![frac(1, 2), frac(1, 4), frac(1, 4)]).unwrap(), frac(2, 3)),
            (Belief::new(vec![int(0), frac(1, 2), frac(1, 2)]).unwrap(), frac(1, 3)),
        ],
        pricing.prior(),
    ))?;
    let (_, cert_s) = ok(value_mdmb(&s))?;
    let (_, cert_p) = ok(value_mdmb(&pricing))?;
    let cases = [
        ("salesman", &s, scheme, frac(1, 3)),
        ("salesman/solver", &s, cert_s.posterior(), frac(1, 3)),
        ("pricing", &pricing, tau, frac(5, 2)),
        ("pricing/solver", &pricing, cert_p.posterior(), frac(5, 2)),
    ];
    let mut built = 0;
    for (name, st, p, vstar) in cases {
        let revealed_max = (0..st.dim())
            .map(|t| st.value_at(Belief::point_mass(st.dim(), t).weights()).unwrap())
            .max()
            .unwrap();
        let mut prev: Option<Rational> = None;
        for d in &deltas {
            let m = ok(construct_optimal_mdmb(st, &p, d))?;
            check_mechanism(st, &m).map_err(|e| format!("{name} at delta {}: {e}", show(d)))?;
            let pay = ok(sender_payoff(st, &m))?;
            if name == "salesman" {
                let expected = (int(1) - d) * &mu0 / (int(1) - &mu0);
                ensure!(pay == expected, "salesman payoff {} at delta {}", show(&pay), show(d));
            }
            ensure!(pay >= (int(1) - d) * &vstar, "{name}: payoff {} below (1-delta)V*", show(&pay));
            ensure!((&pay - &vstar).abs() <= d * (&revealed_max + &vstar), "{name}: payoff {} too far from V*", show(&pay));
            if let Some(prev) = &prev {
                ensure!(&pay >= prev && pay <= vstar, "{name}: payoff not monotone toward V*");
            }
            prev = Some(pay);
            built += 1;
        }
    }
    Ok(format!("{built} mechanisms, IC exact, payoffs monotone"))
}

/// Random Bayes-plausible split of `prior` into three atoms.
fn random_split(rng: &mut ChaCha8Rng, prior: &Belief) -> Vec<(Belief, Rational)> {
    let n = prior.dim();
    let zero_sum = |rng: &mut ChaCha8Rng| {
        let mut r: Vec<Rational> = (0..n - 1).map(|_| int(rng.gen_range(-4..=4))).collect();
        let last = -r.iter().sum::<Rational>();
        r.push(last);
        r
    };
    let w: Vec<Rational> = {
        let raw: Vec<i64> = (0..3).map(|_| rng.gen_range(1..=5)).collect();
        let total: i64 = raw.iter().sum();
        raw.into_iter().map(|x| frac(x, total)).collect()
    };
    let r1 = zero_sum(rng);
    let r2 = zero_sum(rng);
    let r3: Vec<Rational> = (0..n).map(|t| -(&w[0] * &r1[t] + &w[1] * &r2[t]) / &w[2]).collect();
    let dirs = [r1, r2, r3];
    let mut eps = int(1);
    loop {
        let atoms: Vec<Vec<Rational>> = dirs
            .iter()
            .map(|d| prior.weights().iter().zip(d).map(|(p, x)| p + &eps * x).collect())
            .collect();
        if atoms.iter().all(|a| a.iter().all(|x| !x.is_negative())) {
            return atoms.into_iter().zip(w).map(|(a, wi)| (Belief::new(a).unwrap(), wi)).collect();
        }
        eps /= int(2);
    }
}

fn random_interior(rng: &mut ChaCha8Rng, n: usize) -> Belief {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=50)).collect();
    let total: i64 = raw.iter().sum();
    Belief::new(raw.into_iter().map(|x| frac(x, total)).collect()).unwrap()
}

fn property_suite() -> Outcome {
    let budgets = [frac(1, 2), int(1), int(2)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x00ac_ce97);
    let (mut binary, mut prop9, mut prop7, mut splits, mut mechanisms) = (0, 0, 0, 0, 0);
    let (mut sampled, mut strict) = (0usize, 0usize);
    for seed in 0..200u64 {
        let game = fixtures::random_game(1000 + seed, 3, 4);
        let s = ok(game.value_structure())?;
        let report = ok(protocol_report(&s, &budgets)).map_err(|e| format!("game {seed}: {e}"))?;
        let (vstar, cert) = ok(value_mdmb(&s))?;
        ensure!(vstar == report.mdmb, "game {seed}: V* differs between calls");
        let payoffs = ok(SaddleCertificate::with_max_selection(&s, cert.lambda_star.clone(), &cert.posterior()))?;
        ensure!(
            payoffs.per_type_payoffs.iter().min() == Some(&vstar),
            "game {seed}: max-min of p* is not V*"
        );
        if s.dim() == 2 {
            binary += 1;
            ensure!(ok(value_mdmb_binary(&s))? == vstar, "game {seed}: binary shortcut disagrees");
        }
        if report.mdmb == report.bp {
            prop9 += 1;
            ensure!(report.ct == report.bp && report.md == report.bp, "game {seed}: V* = BP but CT/MD differ");
        }
        let generic = ok(is_generic(&game))?.generic;
        if generic && report.mdmb == report.md {
            prop7 += 1;
            ensure!(report.ct == report.mdmb, "game {seed}: generic, V* = MD but CT = {}", show(&report.ct));
        }
        for _ in 0..2 {
            let split = random_split(&mut rng, s.prior());
            let mut per_type = vec![Rational::zero(); s.dim()];
            for (b, w) in &split {
                let v = ok(value_mdmb(&ok(s.with_prior(b.clone()))?))?.0;
                for (t, pt) in per_type.iter_mut().enumerate() {
                    *pt += w * &b.weights()[t] / &s.prior().weights()[t] * &v;
                }
            }
            let rhs = per_type.into_iter().min().unwrap();
            ensure!(vstar >= rhs, "game {seed}: split bound {} exceeds V* {}", show(&rhs), show(&vstar));
            splits += 1;
        }
        let m = ok(construct_optimal_mdmb(&s, &cert.posterior(), &frac(1, 4)))?;
        check_mechanism(&s, &m).map_err(|e| format!("game {seed}: {e}"))?;
        mechanisms += 1;
        if generic && report.ct < report.bp {
            for _ in 0..20 {
                let p = ok(s.with_prior(random_interior(&mut rng, s.dim())))?;
                sampled += 1;
                if ok(value_md(&p))? < ok(value_mdmb(&p))?.0 {
                    strict += 1;
                }
            }
        }
    }
    for k in 1..10 {
        let mu0 = frac(k, 20);
        let s = salesman(&mu0);
        ensure!(ok(value_md(&s))? < ok(value_mdmb(&s))?.0, "no strict gain at salesman prior {}", show(&mu0));
    }
    Ok(format!(
        "200 games; {binary} binary, {prop9} with V* = BP, {prop7} generic with V* = MD, {splits} splits, \
         {mechanisms} mechanisms; MD < V* at {strict}/{sampled} sampled priors"
    ))
}

fn oracle_dominance() -> Outcome {
    let budgets = [int(1), int(2)];
    let fixtures: Vec<(&str, PiecewiseValueStructure)> = vec![
        ("salesman 1/4", salesman(&frac(1, 4))),
        ("salesman 3/5", salesman(&frac(3, 5))),
        ("three-action 1/5", fixtures::three_action_binary(frac(1, 5)).value_structure().unwrap()),
        ("pricing", fixtures::pricing().value_structure().unwrap()),
        ("kinked", fixtures::kinked_abstract(fixtures::kinked_abstract_prior())),
        ("single action", fixtures::single_action().value_structure().unwrap()),
    ];
    let mut worst = Rational::zero();
    for (name, s) in &fixtures {
        let settings = AuditSettings::for_dim(s.dim());
        let lip = s.pieces().iter().map(|p| p.vmax.abs().max(p.vmin.abs())).max().unwrap_or_else(Rational::zero);
        let min_prior = s.prior().weights().iter().min().unwrap().clone();
        for row in ok(audit_report(s, &budgets))? {
            ensure!(row.satisfied, "{name}: {row}");
            let c = budgets.iter().find(|c| row.protocol == format!("MDMB[C={}]", show(c))).cloned().unwrap_or_else(Rational::zero);
            let step = Rational::new(1.into(), (settings.lambda_steps as i64).into());
            let lambda_slack = int(2) * step * (&lip + &c);
            let grid_slack = int(2) * (&lip + &c)
                / (Rational::from_integer((settings.grid.resolution() as i64).into()) * &min_prior);
            if let Some(u) = &row.upper {
                let gap = u - &row.exact;
                ensure!(gap <= lambda_slack, "{name} {}: upper gap {} exceeds slack {}", row.protocol, show(&gap), show(&lambda_slack));
                worst = worst.max(gap);
            }
            if let Some(l) = &row.lower {
                let gap = &row.exact - l;
                ensure!(gap <= grid_slack, "{name} {}: lower gap {} exceeds slack {}", row.protocol, show(&gap), show(&grid_slack));
                worst = worst.max(gap);
            }
        }
    }
    Ok(format!("{} fixtures, largest gap {}", fixtures.len(), show(&worst)))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("salesman closed forms", closed_forms),
        ("budget curve", budget_curve),
        ("pricing example and saddle", pricing_example),
        ("three-action binary example", three_action_example),
        ("kinked abstract example", kinked_example),
        ("mechanism suite", mechanism_suite),
        ("property suite", property_suite),
        ("oracle dominance", oracle_dominance),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {e} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
