//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p lwcodes --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lwcodes::channel::{apply, enumerate_states, Cell, ChannelState};
use lwcodes::codes::{flip_code, groupflip_code, LinearCode};
use lwcodes::duality::verify_duality;
use lwcodes::gf2::BitVector;
use lwcodes::lwc::{analyze, kuznetsov_bounds, singleton_bound, AdditiveCode};
use lwcodes::sim::{self, CodeRef, DefectInjection, SimConfig, UpdateModel};
use lwcodes::Error;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn messages(k: usize) -> impl Iterator<Item = BitVector> {
    (0..1u64 << k).map(move |v| BitVector::from_u64(v, k))
}

/// The code set shared by the masking and cost-bound criteria.
fn code_set() -> Vec<(String, AdditiveCode)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("flip{n}"), AdditiveCode::build(flip_code(n).unwrap()).unwrap()));
    }
    for n in [6, 8] {
        out.push((format!("groupflip({n},2)"), AdditiveCode::build(groupflip_code(n, 2).unwrap()).unwrap()));
    }
    out.push(("hamming7-lwc".into(), AdditiveCode::build(LinearCode::hamming7().parity_check().clone()).unwrap()));
    out
}

fn single_defect_states(n: usize) -> Vec<ChannelState> {
    enumerate_states(n, 1).unwrap().collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn masking_guarantee() -> Check {
    let start = Instant::now();
    let mut cases = 0u64;
    for (name, code) in code_set() {
        let d_star = analyze(&code).map_err(|e| e.to_string())?.d_star;
        for t in 0..d_star {
            for s in enumerate_states(code.n(), t).unwrap() {
                for m in messages(code.k()) {
                    let enc = code.encode_initial(&m, &s).map_err(|e| format!("{name}: m={m} s={s}: {e}"))?;
                    let read = apply(&enc.codeword, &s).unwrap();
                    let got = code.decode(&read).unwrap();
                    ensure(got == m, || format!("{name}: m={m} s={s} decoded {got}"))?;
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}, limit 30 s"))?;
    Ok(format!("{cases} encode/decode cases, {elapsed:.2?}"))
}

fn theorem_rewrite_bound() -> Check {
    let mut total = 0u64;
    for (name, code) in code_set() {
        let r_star = analyze(&code).unwrap().r_star.ok_or(format!("{name}: no r*"))?;
        let mut witnessed = false;
        for s in single_defect_states(code.n()) {
            for m in messages(code.k()) {
                let prev = code.encode_initial(&m, &s).map_err(|e| e.to_string())?;
                for m2 in messages(code.k()) {
                    let dist = m.distance(&m2);
                    let next = code.encode_update(&prev.codeword, &m2, &s).map_err(|e| e.to_string())?;
                    let cost = next.report.rewrite_cost.unwrap();
                    let bound = dist + r_star - 1;
                    ensure(next.report.minimal, || format!("{name}: non-minimal update"))?;
                    ensure(cost <= bound, || format!("{name}: s={s} {m}->{m2} cost {cost} > {bound}"))?;
                    ensure(code.decode(&next.codeword).unwrap() == m2, || format!("{name}: update mis-decodes"))?;
                    witnessed |= cost == bound;
                    total += 1;
                }
            }
        }
        ensure(witnessed, || format!("{name}: equality never reached"))?;
    }
    Ok(format!("{total} updates within ∥m−m′∥ + r★ − 1, equality reached for every code"))
}

fn corollary_write_bound() -> Check {
    let mut total = 0u64;
    for (name, code) in code_set() {
        let r_star = analyze(&code).unwrap().r_star.ok_or(format!("{name}: no r*"))?;
        let mut witnessed = false;
        for s in single_defect_states(code.n()) {
            for m in messages(code.k()) {
                let enc = code.encode_initial(&m, &s).map_err(|e| e.to_string())?;
                let cost = enc.report.write_cost.unwrap();
                let bound = m.weight() + r_star;
                ensure(cost <= bound, || format!("{name}: s={s} m={m} cost {cost} > {bound}"))?;
                witnessed |= cost == bound;
                total += 1;
            }
        }
        ensure(witnessed, || format!("{name}: equality never reached"))?;
    }
    Ok(format!("{total} initial writes within ∥m∥ + r★, equality reached for every code"))
}

fn cyclic_locality() -> Check {
    let mut c0s: Vec<(String, LinearCode)> = vec![
        ("simplex(7,3)".into(), LinearCode::simplex7()),
        ("hamming(7,4)".into(), LinearCode::hamming7()),
        ("dual of hamming(7,4)".into(), LinearCode::hamming7().dual()),
    ];
    for n in 3..=8 {
        c0s.push((format!("even-weight({n})"), LinearCode::even_weight(n).unwrap()));
    }
    let mut seen = Vec::new();
    for (name, c0) in c0s {
        let d0 = c0.min_distance().unwrap();
        let code = AdditiveCode::build(c0.generator().clone()).map_err(|e| e.to_string())?;
        ensure(code.c0().same_code(&c0), || format!("{name}: C0 mismatch"))?;
        let a = analyze(&code).unwrap();
        ensure(a.locality.iter().all(|&l| l == Some(d0 - 1)), || format!("{name}: locality {:?}, d0 = {d0}", a.locality))?;
        seen.push(format!("{name}:{}", d0 - 1));
    }
    Ok(format!("uniform locality = d0 − 1 [{}]", seen.join(", ")))
}

fn duality_identities() -> Check {
    let mut lrcs: Vec<(String, LinearCode)> = vec![
        ("hamming(7,4)".into(), LinearCode::hamming7()),
        ("simplex(7,3)".into(), LinearCode::simplex7()),
        ("repetition(4)".into(), LinearCode::repetition(4).unwrap()),
    ];
    for n in 2..=8 {
        lrcs.push((format!("spc({n})"), LinearCode::even_weight(n).unwrap()));
    }
    for (name, lrc) in &lrcs {
        let rep = verify_duality(lrc).map_err(|e| e.to_string())?;
        let expect = (rep.lrc.d, Some(rep.lrc.d_dual - 1));
        ensure((rep.lwc.d_star, rep.lwc.r_star) == expect && rep.identities_hold, || {
            format!("{name}: (d*, r*) = ({}, {:?}) vs (d, d⊥−1) = {expect:?}", rep.lwc.d_star, rep.lwc.r_star)
        })?;
    }
    let h = verify_duality(&LinearCode::hamming7()).unwrap();
    let bound = singleton_bound(7, 4, 3).unwrap();
    ensure(bound == 3 && h.lrc.optimal && h.lwc.optimal && h.lwc.d_star == bound, || {
        format!("hamming optimality: bound {bound}, lrc {}, lwc {}", h.lrc.optimal, h.lwc.optimal)
    })?;
    Ok(format!("{} codes satisfy (d★, r★) = (d, d⊥ − 1); hamming optimal at bound 3", lrcs.len()))
}

fn kuznetsov() -> Check {
    for n in 2..=8 {
        let code = AdditiveCode::build(flip_code(n).unwrap()).unwrap();
        let b = kuznetsov_bounds(n, 1).unwrap();
        ensure(code.k() == b.upper, || format!("flip{n}: k = {} but upper = {}", code.k(), b.upper))?;
    }
    let mut pairs = 0;
    for n in 0..=64 {
        for t in 0..=n {
            let b = kuznetsov_bounds(n, t).unwrap();
            ensure(b.lower <= b.upper, || format!("n={n} t={t}: lower {} > upper {}", b.lower, b.upper))?;
            pairs += 1;
        }
    }
    Ok(format!("flip codes meet n − 1 at t = 1; lower ≤ upper on {pairs} (n, t) pairs"))
}

/// Largest cost of a single-bit update of the message bit stored in a stuck cell.
fn worst_stuck_update(code: &AdditiveCode) -> usize {
    let mut worst = 0;
    for (j, &cell) in code.information_positions().iter().enumerate() {
        for v in [false, true] {
            let mut cells = vec![Cell::Normal; code.n()];
            cells[cell] = Cell::Stuck(v);
            let s = ChannelState::new(cells);
            for m in messages(code.k()) {
                let prev = code.encode_initial(&m, &s).unwrap();
                let mut m2 = m.clone();
                m2.flip(j);
                let next = code.encode_update(&prev.codeword, &m2, &s).unwrap();
                worst = worst.max(next.report.rewrite_cost.unwrap());
            }
        }
    }
    worst
}

fn toy_examples() -> Check {
    let mut seen = Vec::new();
    for n in [4, 6, 8] {
        let flip = worst_stuck_update(&AdditiveCode::build(flip_code(n).unwrap()).unwrap());
        let group = worst_stuck_update(&AdditiveCode::build(groupflip_code(n, 2).unwrap()).unwrap());
        ensure(flip == n - 1, || format!("flip{n}: worst {flip}, expected {}", n - 1))?;
        ensure(group == n / 2 - 1, || format!("groupflip({n},2): worst {group}, expected {}", n / 2 - 1))?;
        seen.push(format!("n={n}: {flip}/{group}"));
    }
    Ok(format!("worst stuck-cell update flip/groupflip [{}]", seen.join(", ")))
}

fn simulator_consistency() -> Check {
    let start = Instant::now();
    let code = AdditiveCode::build(LinearCode::hamming7().parity_check().clone()).unwrap();
    // Exhaustive oracle: every message against every three-defect state.
    let (mut failures, mut total) = (0u64, 0u64);
    let states: Vec<_> = enumerate_states(7, 3).unwrap().collect();
    ensure(states.len() == 280, || format!("{} three-defect states", states.len()))?;
    for m in messages(4) {
        for s in &states {
            match code.encode_initial(&m, s) {
                Ok(_) => {}
                Err(Error::Masking(_)) => failures += 1,
                Err(e) => return Err(e.to_string()),
            }
            total += 1;
        }
    }
    let p = failures as f64 / total as f64;

    let trials = 100_000u64;
    let cfg = SimConfig {
        code: CodeRef::Named("hamming7-lwc".into()),
        beta: 0.0,
        trials,
        updates_per_trial: 0,
        update_model: UpdateModel::default(),
        seed: 2024,
        defects: DefectInjection::Exact { count: 3 },
        fixed_state: false,
    };
    let res = sim::run(&cfg).map_err(|e| e.to_string())?;
    let observed = res.summary.masking_failure_rate;
    let half_width = 2.5758 * (p * (1.0 - p) / trials as f64).sqrt();
    let elapsed = start.elapsed();
    ensure((observed - p).abs() <= half_width, || format!("observed {observed:.5}, exact {p:.5} ± {half_width:.5}"))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}, limit 60 s"))?;
    Ok(format!("observed {observed:.5} vs exact {p:.5} ± {half_width:.5} (99%), {elapsed:.2?}"))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("sim.json");
    std::fs::write(
        &config,
        r#"{"code": "groupflip8", "beta": 0.05, "trials": 300, "updates_per_trial": 6,
            "update_model": {"kind": "hamming-ball", "radius": 2}, "seed": 77}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_lwc"))
            .args(["simulate", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "CSV outputs differ".into())?;
    let rows = outputs[0].iter().filter(|&&b| b == b'\n').count();
    Ok(format!("two runs produced identical {rows}-line CSV ({} bytes)", outputs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 masking guarantee", masking_guarantee),
        ("2 rewrite cost bound", theorem_rewrite_bound),
        ("3 initial write cost bound", corollary_write_bound),
        ("4 cyclic locality", cyclic_locality),
        ("5 duality identities", duality_identities),
        ("6 defect-channel bounds", kuznetsov),
        ("7 toy examples", toy_examples),
        ("8 simulator consistency", simulator_consistency),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
