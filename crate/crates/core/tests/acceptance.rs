//! Acceptance checks. Runs without the libtest harness so every criterion
//! prints its own PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use chaser::guidance::{
    angles_for_element, angles_to_unit_vector, fly_transfer, q_value, DagSession, Element, QlawParams, SteeringLaw,
    TargetSpec, ThrustAngles, TransferOptions,
};
use chaser::io::{parse_tle_lines, TleError};
use chaser::maneuvers::{plane_change, PropulsionLedger, SpacecraftConfig, FeasibilityFlag};
use chaser::mission::{run_mission, ScenarioConfig};
use chaser::orbital::{
    cartesian_to_coe, coe_to_cartesian, solve_kepler, wrap_pi, CartesianState, ClassicalOrbitalElements, GravContext,
};
use chaser::propagation::{
    gve_sensitivity, propagate_cartesian, propagate_cartesian_dense, propagate_gve, IntegratorConfig,
    PerturbationConfig, ThrustProfile,
};
use nalgebra::Vector3;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(limit: Duration, t: Duration) -> Check {
    ensure(t < limit, format!("runtime {:.3} s (limit {} s)", t.as_secs_f64(), limit.as_secs_f64()))
}

fn cli_values(args: &[&str], keys: &[&str]) -> Result<Vec<f64>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_chaser")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    keys.iter()
        .map(|k| {
            text.lines()
                .find_map(|l| {
                    let mut it = l.split_whitespace();
                    (it.next() == Some(k)).then(|| it.next()?.parse().ok()).flatten()
                })
                .ok_or_else(|| format!("{k} missing from output"))
        })
        .collect()
}

fn hohmann_raise() -> Check {
    let v = cli_values(&["plan-hohmann", "--r1", "6928.14", "--r2", "7046.14"], &["dv1_ms", "dv2_ms"])?;
    let (e1, e2) = ((v[0] - 31.9573).abs(), (v[1] - 31.8226).abs());
    ensure(
        e1 <= 0.5 && e2 <= 0.5,
        format!("dv1 {:.4} m/s (err {e1:.4}), dv2 {:.4} m/s (err {e2:.4}), tol 0.5", v[0], v[1]),
    )
}

fn deorbit() -> Check {
    let v = cli_values(&["plan-deorbit", "--alt", "250", "--r", "7046.14"], &["dv1_ms", "dv2_ms"])?;
    let (e1, e2) = ((v[0].abs() - 115.849).abs(), (v[1].abs() - 117.634).abs());
    ensure(
        e1 <= 0.5 && e2 <= 0.5,
        format!("|dv1| {:.4} m/s (err {e1:.4}), |dv2| {:.4} m/s (err {e2:.4}), tol 0.5", v[0].abs(), v[1].abs()),
    )
}

fn plane_change_check() -> Check {
    let ctx = GravContext::default();
    let dv = plane_change(ctx.circular_speed(7046.14), 3.3f64.to_radians()).map_err(|e| e.to_string())? * 1000.0;
    ensure((dv - 433.2).abs() <= 2.0, format!("dv {dv:.3} m/s, want 433.2 ± 2"))
}

fn proximity() -> Check {
    let mut msgs = Vec::new();
    let mut ok = true;
    for j2 in [false, true] {
        let mut cfg = ScenarioConfig::reference();
        cfg.perturbations.j2 = j2;
        let t0 = Instant::now();
        let log = run_mission(&cfg).map_err(|e| format!("j2={j2}: {e}"))?;
        let t = t0.elapsed();
        let p = log.proximity.ok_or("no proximity result")?;
        let a = p.achieved * 1000.0;
        let d = (p.achieved - p.desired) * 1000.0;
        let pass = if j2 {
            d.iter().all(|x| x.abs() <= 5.0)
        } else {
            (a.y - 1.0).abs() <= 0.1 && a.x.abs() <= 0.1 && a.z.abs() <= 0.1
        };
        ok &= pass && t < Duration::from_secs(60);
        msgs.push(format!(
            "{}: RIC [{:.2e}, {:.6}, {:.2e}] m in {:.3} s",
            if j2 { "J2" } else { "two-body" },
            a.x,
            a.y,
            a.z,
            t.as_secs_f64()
        ));
    }
    ensure(ok, msgs.join("; "))
}

fn element_rate(el: Element, c: &ClassicalOrbitalElements, f: &Vector3<f64>) -> f64 {
    gve_sensitivity(c, &GravContext::default()).row(el.index()).transpose().dot(f)
}

fn dag_argmax() -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(5);
    let betas: Vec<f64> = (0..=16).map(|k| -FRAC_PI_2 + PI * k as f64 / 16.0).collect();
    for _ in 0..1000 {
        let c = ClassicalOrbitalElements::new(
            rng.gen_range(6600.0..20000.0),
            rng.gen_range(0.0..0.8),
            rng.gen_range(0.01..PI - 0.01),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
        )
        .map_err(|e| e.to_string())?;
        let mut els = vec![(Element::A, false), (Element::E, false), (Element::I, true), (Element::Raan, true)];
        if c.e > 0.01 {
            els.push((Element::Argp, true));
        }
        for (el, out_of_plane) in els {
            let f = angles_to_unit_vector(angles_for_element(el, &c).map_err(|e| e.to_string())?);
            let ours = element_rate(el, &c, &f);
            let mut grid = f64::MIN;
            for j in 0..64 {
                let alpha = -PI + TAU * j as f64 / 64.0;
                for &beta in if out_of_plane { &betas[..] } else { &[0.0][..] } {
                    grid = grid.max(element_rate(el, &c, &angles_to_unit_vector(ThrustAngles { alpha, beta })));
                }
            }
            let scale = gve_sensitivity(&c, &GravContext::default()).row(el.index()).norm();
            if ours < grid - 1e-12 * scale.max(1.0) {
                return Err(format!("{el} at {c:?}: {ours:e} < grid {grid:e}"));
            }
        }
    }
    Ok(1000)
}

fn reference_transfer() -> (ClassicalOrbitalElements, TargetSpec) {
    let c0 = ClassicalOrbitalElements::from_degrees(6928.14, 0.00472, 95.0, 140.372, 216.9, 120.0).unwrap();
    let spec = TargetSpec::new()
        .with(Element::A, 7046.14, c0.a, 1.0)
        .unwrap()
        .with(Element::I, 98.3f64.to_radians(), c0.i, 0.01f64.to_radians())
        .unwrap();
    (c0, spec)
}

fn guidance_suite() -> Check {
    let t0 = Instant::now();
    let ctx = GravContext::default();
    let n = dag_argmax()?;

    let (c0, spec) = reference_transfer();
    let params = QlawParams::default();
    let opts = TransferOptions {
        accel: 0.4 / 24.0 / 1000.0,
        hold: 10.0,
        ..TransferOptions::default()
    };
    let r = fly_transfer(&c0, &spec, &mut SteeringLaw::Qlaw(params), &opts, &ctx).map_err(|e| e.to_string())?;
    let per_orbit = (c0.period(&ctx) / opts.hold).round() as usize;
    let qs: Vec<f64> = r.samples.iter().map(|(_, c)| q_value(c, &spec, &params, &ctx).unwrap()).collect();
    let means: Vec<f64> = qs.chunks(per_orbit).map(|w| w.iter().sum::<f64>() / w.len() as f64).collect();
    let descending = means.windows(2).all(|w| w[1] <= w[0]);

    let d = fly_transfer(&c0, &spec, &mut SteeringLaw::Dag(DagSession::new(0.0)), &TransferOptions::default(), &ctx)
        .map_err(|e| e.to_string())?;
    let f = d.final_elements();
    let (da, di) = ((f.a - 7046.14).abs(), (f.i.to_degrees() - 98.3).abs());
    let t = t0.elapsed();
    ensure(
        descending && r.converged && d.converged && da <= 1.0 && di <= 0.01 && t < Duration::from_secs(300),
        format!(
            "argmax ok on {n} states; Q-law Q non-increasing over {} orbit means; DAG a err {da:.3} km, i err {di:.5} deg after {:.1} d; {:.2} s",
            means.len(),
            d.elapsed / 86400.0,
            t.as_secs_f64()
        ),
    )
}

fn oracles() -> Check {
    let t0 = Instant::now();
    let ctx = GravContext::default();
    let coe = ClassicalOrbitalElements::from_degrees(7200.0, 0.05, 60.0, 30.0, 45.0, 10.0).unwrap();
    let period = coe.period(&ctx);
    let pert = PerturbationConfig::two_body().with_thrust(ThrustProfile::constant_ric(Vector3::new(2e-7, 5e-7, -4e-7)));
    let integ = IntegratorConfig::default();
    let g = propagate_gve(&coe, period, &pert, &integ).map_err(|e| e.to_string())?;
    let s = propagate_cartesian(&coe_to_cartesian(&coe, &ctx).unwrap(), period, &pert, &integ).map_err(|e| e.to_string())?;
    let (c, _) = cartesian_to_coe(&s, &ctx).map_err(|e| e.to_string())?;
    let gve_err = [
        (g.a - c.a) / c.a,
        (g.e - c.e) / c.e,
        wrap_pi(g.i - c.i) / c.i,
        wrap_pi(g.raan - c.raan) / c.raan,
        wrap_pi(g.argp - c.argp) / c.argp,
    ]
    .iter()
    .fold(0.0f64, |m, x| m.max(x.abs()));

    let s0 = coe_to_cartesian(&coe, &ctx).unwrap();
    let (e0, h0) = (s0.energy(&ctx), s0.angular_momentum().norm());
    let states = propagate_cartesian_dense(&s0, 10.0 * period, &PerturbationConfig::two_body(), &integ)
        .map_err(|e| e.to_string())?;
    let cons = states.iter().fold(0.0f64, |m, s| {
        m.max(((s.energy(&ctx) - e0) / e0).abs()).max(((s.angular_momentum().norm() - h0) / h0).abs())
    });
    let t = t0.elapsed();
    ensure(
        gve_err <= 1e-6 && cons <= 1e-9 && t < Duration::from_secs(30),
        format!("GVE vs Cartesian max rel {gve_err:.2e}; energy/|h| max rel {cons:.2e}; {:.3} s", t.as_secs_f64()),
    )
}

const TLES: [(&str, &str); 2] = [
    (
        "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927",
        "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537",
    ),
    (
        "1 99001U 22001A   22020.26041667  .00000000  00000-0  00000-0 0  9992",
        "2 99001  98.3000 140.3720 0000000   0.0000   0.0000 14.67830339    13",
    ),
];

fn tle_mutations() -> Result<usize, String> {
    let weight = |b: u8| match b {
        b'0'..=b'9' => u32::from(b - b'0'),
        b'-' => 1,
        _ => 0,
    };
    let mut n = 0;
    for (l1, l2) in TLES {
        for which in 0..2 {
            let line = if which == 0 { l1 } else { l2 };
            for col in 2..69 {
                for &ch in b"0123456789 -+.AZ" {
                    let orig = line.as_bytes()[col];
                    if ch == orig {
                        continue;
                    }
                    let mut b = line.as_bytes().to_vec();
                    b[col] = ch;
                    let m = String::from_utf8(b).unwrap();
                    let res = if which == 0 { parse_tle_lines(&m, l2) } else { parse_tle_lines(l1, &m) };
                    let must_fail = if col == 68 { true } else { weight(ch) != weight(orig) };
                    let is_checksum = matches!(res, Err(TleError::Checksum { .. }));
                    let good = if col == 68 && !ch.is_ascii_digit() {
                        res.is_err()
                    } else if must_fail {
                        is_checksum
                    } else {
                        !is_checksum
                    };
                    if !good {
                        return Err(format!("line {} col {} -> {:?}: {res:?}", which + 1, col + 1, ch as char));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn conversions() -> Check {
    let t0 = Instant::now();
    let ctx = GravContext::default();
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 10_000 {
        let r = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            * rng.gen_range(6600.0..40000.0);
        let dir = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if r.norm() < 6600.0 || dir.norm() < 1e-3 {
            continue;
        }
        let v = dir.normalize() * ctx.circular_speed(r.norm()) * rng.gen_range(0.3..1.35);
        let Ok((coe, _)) = cartesian_to_coe(&CartesianState::new(r, v, 0.0), &ctx) else { continue };
        let back = coe_to_cartesian(&coe, &ctx).map_err(|e| e.to_string())?;
        worst = worst.max((back.r - r).norm() / r.norm()).max((back.v - v).norm() / v.norm());
        count += 1;
    }

    let mut kepler = 0.0f64;
    for ei in 0..100 {
        let e = ei as f64 * 0.0099;
        for mi in 0..=720 {
            let m = -TAU + mi as f64 * (2.0 * TAU / 720.0);
            let big_e = solve_kepler(m, e).map_err(|e| e.to_string())?;
            kepler = kepler.max((big_e - e * big_e.sin() - m).abs());
        }
    }
    let mutations = tle_mutations()?;
    let t = t0.elapsed();
    ensure(
        worst <= 1e-9 && kepler <= 1e-12 && t < Duration::from_secs(30),
        format!(
            "round trip max rel {worst:.2e} over {count} states; Kepler residual {kepler:.2e}; {mutations} TLE mutations checked; {:.3} s",
            t.as_secs_f64()
        ),
    )
}

fn feasibility() -> Check {
    // burn magnitudes of the reference mission budget, m/s
    let budget: [f64; 7] = [
        31.9573,
        31.8226,
        Vector3::new(-13.9376, 433.119, 33.3713).norm(),
        Vector3::new(75.1297, -32.1772, -12.7527).norm(),
        Vector3::new(42.5346, 30.9693, -3.31569).norm(),
        115.849,
        117.634,
    ];
    let total: f64 = budget.iter().sum();
    let mut masses = vec![3.0];
    while *masses.last().unwrap() < 1000.0 {
        masses.push(masses.last().unwrap() * 1.25);
    }
    let mut unflagged = Vec::new();
    for &m in &masses {
        let mut ledger = PropulsionLedger::new(SpacecraftConfig {
            dry_mass: 0.5 * m,
            propellant_mass: 0.5 * m,
            ..SpacecraftConfig::default()
        });
        for (k, dv) in budget.iter().enumerate() {
            ledger.burn(&format!("dv{}", k + 1), dv / 1000.0);
        }
        if !ledger.flags.iter().any(|f| matches!(f, FeasibilityFlag::ImpulseBudgetExceeded { .. })) {
            unflagged.push(m);
        }
    }
    ensure(
        unflagged.is_empty(),
        format!(
            "{total:.1} m/s budget flagged for all {} masses in [3, {:.0}] kg{}",
            masses.len(),
            masses.last().unwrap(),
            if unflagged.is_empty() { String::new() } else { format!("; unflagged: {unflagged:?}") }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 8] = [
        ("1 hohmann raise", hohmann_raise, Some(Duration::from_secs(1))),
        ("2 de-orbit", deorbit, Some(Duration::from_secs(1))),
        ("3 plane change", plane_change_check, Some(Duration::from_secs(1))),
        ("4 proximity", proximity, None),
        ("5 guidance laws", guidance_suite, None),
        ("6 propagation oracles", oracles, None),
        ("7 conversions and parsing", conversions, None),
        ("8 feasibility ledger", feasibility, Some(Duration::from_secs(1))),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let t0 = Instant::now();
        let mut res = f();
        let t = t0.elapsed();
        if let (Some(limit), Ok(msg)) = (limit, &res) {
            res = within(limit, t).map(|rt| format!("{msg}; {rt}")).map_err(|rt| format!("{msg}; {rt}"));
        }
        match res {
            Ok(msg) => println!("PASS  criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
