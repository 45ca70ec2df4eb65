//! Acceptance gate: one PASS/FAIL line per criterion, each with its time budget.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cakecut::cake::{Cake, Distribution, Fraction, Partition, PlayerId, Valuation};
use cakecut::cake::{is_envy_free, is_equitable, is_proportional};
use cakecut::engine::{deviate, equilibrium_profile, play, GameConfig, Rule};
use cakecut::equilibrium::{certify_nash, payoff_curve, Grid, ValueTable, Verdict};
use cakecut::metrics::{
    gini_asymptotic, gini_idealized_bruteforce, gini_limit, gini_vanilla_exact, poa, rw_complexity,
};
use cakecut::open_game::{choose_bigger, compose_game, count_queries, play_composed, Chooser};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn f(n: i64, d: i64) -> Fraction {
    Fraction::new(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vanilla_distribution() -> Outcome {
    for n in 2..=12 {
        let config = GameConfig::unit(n, Rule::Vanilla).map_err(|e| e.to_string())?;
        let (partition, _) = play(&config, &equilibrium_profile(&config)).map_err(|e| e.to_string())?;
        let expected: Vec<Fraction> = (1..=n).map(|m| Fraction::pow2(-(m.min(n - 1) as i32))).collect();
        ensure(partition.shares() == expected, || format!("n = {n}: {:?}", partition.shares()))?;
    }
    Ok("shares 2^-m exactly for n = 2..12".into())
}

fn bp_fairness() -> Outcome {
    for n in 2..=12 {
        let config = GameConfig::unit(n, Rule::BiggestPlayer).map_err(|e| e.to_string())?;
        let (partition, trace) = play(&config, &equilibrium_profile(&config)).map_err(|e| e.to_string())?;
        ensure(partition.shares().iter().all(|s| *s == f(1, n as i64)), || {
            format!("n = {n}: {:?}", partition.shares())
        })?;
        ensure(trace.cuts() == n - 1, || format!("n = {n}: {} cuts", trace.cuts()))?;
        ensure(partition.interior_cuts().len() == n - 1, || format!("n = {n}: pieces not contiguous"))?;
    }
    Ok("shares 1/n with n-1 cuts for n = 2..12".into())
}

fn nash_certification() -> Outcome {
    let grid = Grid::new(2520).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for n in 2..=8 {
        let config = GameConfig::unit(n, Rule::BiggestPlayer).map_err(|e| e.to_string())?;
        let cert = certify_nash(&config, &equilibrium_profile(&config), grid).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::NoProfitableDeviation, || format!("n = {n}: {:?}", cert.best_deviation()))?;
        for r in &cert.players {
            ensure(r.strictly_loss_inducing, || format!("n = {n}: {} has a non-negative delta", r.player))?;
            checked += r.deviations_checked;
        }
    }
    Ok(format!("{checked} deviations, all strictly loss-inducing, n = 2..8, L = 2520"))
}

fn gini_reproduction() -> Outcome {
    let g6 = gini_vanilla_exact(6).map_err(|e| e.to_string())?;
    ensure(g6 == f(49, 96), || format!("G(6) = {g6}"))?;
    ensure((g6.to_f64() - 0.5).abs() <= 0.02, || format!("G(6) = {} vs 0.5", g6.to_decimal(6)))?;
    let mut mismatches = Vec::new();
    for n in 2..=20 {
        let formula = gini_asymptotic(n).map_err(|e| e.to_string())?;
        let brute = gini_idealized_bruteforce(n).map_err(|e| e.to_string())?;
        if formula != brute {
            mismatches.push(format!("n={n}: {formula} vs {brute}"));
        }
    }
    ensure(mismatches.is_empty(), || {
        format!(
            "G(6) = 49/96 ok; 2^(1-n)+1-3/n differs from the rank sum at {} of 19 n, first {}",
            mismatches.len(),
            mismatches[0]
        )
    })?;
    Ok("G(6) = 49/96; formula equals rank sum for n = 2..20".into())
}

fn gini_formula_agreement() -> Outcome {
    let gap = |n: usize| -> Result<Fraction, String> {
        Ok((gini_vanilla_exact(n).map_err(|e| e.to_string())? - gini_limit(n).map_err(|e| e.to_string())?).abs())
    };
    for n in 8..=20 {
        let g = gap(n)?;
        ensure(g <= f(1, 10), || format!("n = {n}: gap {}", g.to_decimal(6)))?;
    }
    for n in 5..20 {
        let (a, b) = (gap(n)?, gap(n + 1)?);
        ensure(b < a, || format!("gap not decreasing at n = {n}"))?;
    }
    Ok(format!("gap {} at n = 8, decreasing from n = 5", gap(8)?.to_decimal(4)))
}

fn price_of_anarchy() -> Outcome {
    let mut worst = 0.0f64;
    for n in 6..=20 {
        let r = poa(n, Rule::Vanilla).map_err(|e| e.to_string())?;
        let g = gini_vanilla_exact(n).map_err(|e| e.to_string())?;
        ensure(r.poa == Fraction::one() / (Fraction::one() - g), || format!("n = {n}: poa {}", r.poa))?;
        let rel = ((&r.poa / Fraction::new(n as i64, 3)).to_f64() - 1.0).abs();
        worst = worst.max(rel);
        ensure(rel <= 0.15, || format!("n = {n}: {:.3} off n/3", rel))?;
    }
    for n in 2..=20 {
        let r = poa(n, Rule::BiggestPlayer).map_err(|e| e.to_string())?;
        ensure(r.poa == Fraction::one(), || format!("bp n = {n}: poa {}", r.poa))?;
    }
    Ok(format!("max relative gap to n/3 is {:.3}; bp poa = 1", worst))
}

fn payoff_asymmetry() -> Outcome {
    let grid = Grid::new(2520).map_err(|e| e.to_string())?;
    let h = f(1, 2520);
    let mut ratios = Vec::new();
    for n in [2usize, 3, 5, 10] {
        let curve = payoff_curve(n, grid).map_err(|e| e.to_string())?;
        let at = |eps: &Fraction| curve.iter().find(|p| p.epsilon == *eps).map(|p| p.payoff_norm.clone());
        let peaks: Vec<_> = curve.iter().filter(|p| p.payoff_norm >= Fraction::one()).collect();
        ensure(peaks.len() == 1 && peaks[0].epsilon.is_zero() && peaks[0].payoff_norm == Fraction::one(), || {
            format!("n = {n}: {} points at or above 1", peaks.len())
        })?;
        let left = (Fraction::one() - at(&-&h).ok_or("missing -h")?) / &h;
        let right = (Fraction::one() - at(&h).ok_or("missing +h")?) / &h;
        ensure(left == Fraction::from(n), || format!("n = {n}: left slope {left}"))?;
        ensure(right == Fraction::from(n) / Fraction::from(n - 1), || format!("n = {n}: right slope {right}"))?;
        if n == 2 {
            ensure(curve.iter().all(|p| at(&-&p.epsilon) == Some(p.payoff_norm.clone())), || {
                "n = 2 curve not symmetric".into()
            })?;
        }
        let ratio = &left / &right;
        ensure(ratio == Fraction::from(n - 1), || format!("n = {n}: ratio {ratio}"))?;
        ratios.push(ratio);
    }
    ensure(ratios.windows(2).all(|w| w[0] < w[1]), || "ratios not increasing".into())?;
    Ok(format!("slope ratios {:?} for n = 2, 3, 5, 10", ratios))
}

fn rw_counts() -> Outcome {
    for n in 2..=12 {
        for rule in [Rule::Vanilla, Rule::BiggestPlayer] {
            let config = GameConfig::unit(n, rule).map_err(|e| e.to_string())?;
            let (_, trace) = play(&config, &equilibrium_profile(&config)).map_err(|e| e.to_string())?;
            let q = count_queries(&trace.events).map_err(|e| e.to_string())?;
            let expected = 4 + 3 * (n as u64 - 2);
            ensure(q.total() == expected && trace.queries == q, || format!("{rule} n = {n}: {q:?}"))?;
            ensure(rw_complexity(n).map_err(|e| e.to_string())? == expected, || format!("n = {n}"))?;
        }
    }
    Ok("4 + 3(n-2) for both rules, n = 2..12".into())
}

fn oracle_equivalence() -> Outcome {
    let grid = Grid::new(60).map_err(|e| e.to_string())?;
    let mut games = 0;
    for rule in [Rule::Vanilla, Rule::BiggestPlayer] {
        for n in 2..=5 {
            let config = GameConfig::unit(n, rule).map_err(|e| e.to_string())?;
            let choosers: Vec<Chooser> = match rule {
                Rule::Vanilla => vec![choose_bigger(); n - 1],
                Rule::BiggestPlayer => {
                    let table = Arc::new(ValueTable::build(n, grid).map_err(|e| e.to_string())?);
                    vec![table.chooser(); n - 1]
                }
            };
            let eq = equilibrium_profile(&config);
            for alpha in grid.points() {
                let profile = deviate(&eq, PlayerId(1), alpha.clone()).map_err(|e| e.to_string())?;
                let game = compose_game(&config, &profile, &choosers).map_err(|e| e.to_string())?;
                let composed = play_composed(&config, &game).map_err(|e| e.to_string())?;
                let direct = play(&config, &profile).map_err(|e| e.to_string())?;
                ensure(composed == direct, || format!("{rule} n = {n} first cut {alpha}"))?;
                games += 1;
            }
        }
    }
    Ok(format!("{games} games identical in partition and trace"))
}

fn fairness_coincidence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut equal_cases, mut unequal_cases) = (0, 0);
    for trial in 0..1000 {
        let n = rng.gen_range(2..=10usize);
        let equal = trial % 2 == 0;
        let sizes: Vec<Fraction> = if equal {
            vec![f(1, n as i64); n]
        } else {
            // move a random positive amount from one player to another
            let from = rng.gen_range(0..n);
            let to = (from + rng.gen_range(1..n)) % n;
            let delta = f(rng.gen_range(1..=100), 100 * n as i64);
            (0..n)
                .map(|i| {
                    let base = f(1, n as i64);
                    if i == from {
                        base - &delta
                    } else if i == to {
                        base + &delta
                    } else {
                        base
                    }
                })
                .collect()
        };
        let cake = Cake::unit();
        let p = Partition::from_sizes(cake.clone(), &sizes).map_err(|e| e.to_string())?;
        let vals = vec![Valuation::homogeneous(cake); n];
        let flags = [
            is_proportional(&p, &vals).map_err(|e| e.to_string())?,
            is_envy_free(&p, &vals).map_err(|e| e.to_string())?,
            is_equitable(&p, &vals).map_err(|e| e.to_string())?,
        ];
        let d = Distribution::from_partition(&p).map_err(|e| e.to_string())?;
        let dflags = [d.is_proportional(), d.is_envy_free(), d.is_equitable()];
        ensure(flags == [equal; 3] && dflags == flags, || format!("trial {trial}: {sizes:?} -> {flags:?}"))?;
        if equal {
            equal_cases += 1;
        } else {
            unequal_cases += 1;
        }
    }
    Ok(format!("{equal_cases} equal partitions all fair, {unequal_cases} perturbed all unfair"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "vanilla equilibrium distribution", Duration::from_secs(1), vanilla_distribution),
        (2, "biggest player fairness", Duration::from_secs(1), bp_fairness),
        (3, "nash certification", Duration::from_secs(60), nash_certification),
        (4, "gini reproduction", Duration::from_secs(1), gini_reproduction),
        (5, "gini vs 1-3/n", Duration::from_secs(1), gini_formula_agreement),
        (6, "price of anarchy", Duration::from_secs(1), price_of_anarchy),
        (7, "payoff asymmetry", Duration::from_secs(10), payoff_asymmetry),
        (8, "robertson-webb counts", Duration::from_secs(1), rw_counts),
        (9, "lens/engine equivalence", Duration::from_secs(30), oracle_equivalence),
        (10, "fairness notions coincide", Duration::from_secs(5), fairness_coincidence),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over the {:?} budget", budget)),
            Err(detail) => ("FAIL", detail),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {id:>2} {name}: {detail} [{:.3}s]", elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
