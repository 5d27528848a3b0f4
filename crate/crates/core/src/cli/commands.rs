use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::report::CheckReport;
use super::suites::{run_suite, SuiteInput, SUITES};
use super::{Command, GroupMode, KernelKind, RunConfig, RunOutput, TransformMode, SCHEMA};
use crate::error::{Error, Result};
use crate::fuchsian::{counting_n, enumerate_ball, MultiplierSystem};
use crate::geom::Point;
use crate::kernels::{
    digamma_term, geometric_kernel, heat_kernel_m, modular_domain_inputs, poisson_free, poisson_kernel_m,
    resolvent_kernel, sup_norm_constants, KernelParams, KernelRecord, KernelValue,
};
use crate::shc::{
    forward_h, h_continued, h_gs_closed, phi_inverse, q_forward_derivative, q_prime, EvenTestFunction,
    ProfileFunction, WaveTestParams,
};

pub(super) fn dispatch(cfg: &RunConfig) -> Result<RunOutput> {
    match &cfg.command {
        Command::Kernel(kind) => kernel(cfg, *kind),
        Command::Transform(mode) => transform(cfg, *mode),
        Command::Group(GroupMode::Ball) => group_ball(cfg),
        Command::Group(GroupMode::Count) => group_count(cfg),
        Command::Constants => constants(cfg),
        Command::Check(name) => check(cfg, name),
    }
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

#[derive(Serialize)]
#[serde(untagged)]
enum Entry {
    Value(KernelRecord),
    Failed {
        kernel: &'static str,
        z: [f64; 2],
        w: [f64; 2],
        error: String,
    },
}

#[derive(Serialize)]
struct KernelArtifact<'a> {
    schema: u32,
    config: &'a RunConfig,
    records: Vec<Entry>,
}

fn kernel(cfg: &RunConfig, kind: KernelKind) -> Result<RunOutput> {
    let ms = cfg.multiplier_system()?;
    let k = cfg.weight_k;
    let r = cfg.trunc_r;
    let zero = Complex64::new(0.0, 0.0);
    // one job per (point pair, parameter)
    let params: Vec<f64> = match kind {
        KernelKind::Geom | KernelKind::Resolvent => (0..cfg.s_list.len()).map(|i| i as f64).collect(),
        KernelKind::Heat => cfg.t_list.clone(),
        KernelKind::Poisson => cfg.u_list.clone(),
    };
    let jobs: Vec<((Point, Point), f64)> = cfg
        .points
        .iter()
        .flat_map(|&pq| params.iter().map(move |&p| (pq, p)))
        .collect();
    let name = match kind {
        KernelKind::Geom => "geom",
        KernelKind::Resolvent => "resolvent",
        KernelKind::Heat => "heat",
        KernelKind::Poisson => "poisson",
    };
    let eval = |(z, w): (Point, Point), p: f64| -> Result<KernelRecord> {
        Ok(match kind {
            KernelKind::Geom | KernelKind::Resolvent => {
                let s = cfg.s_list[p as usize];
                let kp = KernelParams::new(s, k, r)?;
                let v = if kind == KernelKind::Geom {
                    geometric_kernel(z, w, &kp, &ms)?
                } else {
                    resolvent_kernel(z, w, &kp, &ms)?
                };
                KernelRecord::new(name, z, w, s, k, r, &v)
            }
            KernelKind::Heat => KernelRecord::new(name, z, w, zero, k, r, &heat_kernel_m(p, z, w, r, &ms)?).with_time(p),
            KernelKind::Poisson => {
                let v = if cfg.group_sum {
                    poisson_kernel_m(p, cfg.shift, z, w, r, &ms, cfg.tolerance("poisson_tail", 1e-6))?
                } else {
                    let q = poisson_free(p, cfg.shift, z, w, k)?;
                    KernelValue {
                        value: q.value,
                        tail_bound: q.error,
                        terms_used: 1,
                    }
                };
                KernelRecord::new(name, z, w, zero, k, r, &v).with_poisson(p, cfg.shift)
            }
        })
    };
    let records: Vec<Entry> = jobs
        .par_iter()
        .map(|&(pq, p)| match eval(pq, p) {
            Ok(rec) => Entry::Value(rec),
            Err(e) => Entry::Failed {
                kernel: name,
                z: [pq.0.x, pq.0.y],
                w: [pq.1.x, pq.1.y],
                error: e.to_string(),
            },
        })
        .collect();
    let failed = records.iter().any(|e| matches!(e, Entry::Failed { .. }));
    Ok(RunOutput {
        bytes: json(&KernelArtifact { schema: SCHEMA, config: cfg, records })?,
        failed,
    })
}

fn wave(s: Complex64, k: f64) -> Result<WaveTestParams> {
    WaveTestParams::new(s, k).map_err(|e| Error::config("s", e.to_string()))
}

fn transform(cfg: &RunConfig, mode: TransformMode) -> Result<RunOutput> {
    let k = cfg.weight_k;
    match mode {
        TransformMode::Forward => {
            let jobs: Vec<(WaveTestParams, f64)> = cfg
                .s_list
                .iter()
                .map(|&s| wave(s, k))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flat_map(|p| cfg.r_list.iter().map(move |&r| (p, r)))
                .collect();
            let rows: Vec<Result<(Complex64, f64)>> = jobs
                .par_iter()
                .map(|&(p, r)| {
                    let phi = ProfileFunction::phi_s(&p)?;
                    let q = forward_h(&phi, Complex64::new(r, 0.0), k)?;
                    Ok((q.value, q.error))
                })
                .collect();
            trace_csv("r", &jobs, rows)
        }
        TransformMode::Inverse => {
            let jobs: Vec<(WaveTestParams, f64)> = cfg
                .s_list
                .iter()
                .map(|&s| wave(s, k))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flat_map(|p| cfg.x_list.iter().map(move |&x| (p, x)))
                .collect();
            let rows: Vec<Result<(Complex64, f64)>> = jobs
                .par_iter()
                .map(|&(p, x)| {
                    let g = EvenTestFunction::g_s(&p)?;
                    let q = phi_inverse(|y| q_prime(&g, y).0, x, k)?;
                    Ok((q.value, q.error))
                })
                .collect();
            trace_csv("x", &jobs, rows)
        }
        TransformMode::H => {
            let jobs: Vec<(WaveTestParams, f64)> = cfg
                .s_list
                .iter()
                .flat_map(|&s| cfg.r_list.iter().map(move |&r| (WaveTestParams::unchecked(s, k), r)))
                .collect();
            let rows: Vec<Result<(Complex64, f64)>> = jobs
                .par_iter()
                .map(|&(p, r)| {
                    let r = Complex64::new(r, 0.0);
                    let direct = 1f64.max(k.abs());
                    let v = if p.s.re > direct {
                        h_gs_closed(&p, r)?
                    } else {
                        let n = ((direct + 0.5 - p.s.re) / 2.0).floor() as usize + 1;
                        h_continued(&p, r, n)?
                    };
                    Ok((v, 0.0))
                })
                .collect();
            trace_csv("r", &jobs, rows)
        }
        TransformMode::Roundtrip => roundtrip(cfg),
    }
}

fn trace_csv(point: &str, jobs: &[(WaveTestParams, f64)], rows: Vec<Result<(Complex64, f64)>>) -> Result<RunOutput> {
    let mut failed = false;
    let mut out = Vec::with_capacity(rows.len());
    for ((p, x), row) in jobs.iter().zip(rows) {
        let (v, err) = row.unwrap_or_else(|_| {
            failed = true;
            (Complex64::new(f64::NAN, f64::NAN), f64::NAN)
        });
        out.push(vec![num(p.s.re), num(p.s.im), num(*x), num(v.re), num(v.im), num(err)]);
    }
    Ok(RunOutput {
        bytes: csv_bytes(&["s_re", "s_im", point, "re", "im", "error"], &out)?,
        failed,
    })
}

/// Residuals of the pipeline: forward transform against the closed form,
/// and both inverse routes back to the profile.
fn roundtrip(cfg: &RunConfig) -> Result<RunOutput> {
    let k = cfg.weight_k;
    let tol = cfg.tolerance("roundtrip", 1e-5);
    let params = cfg.s_list.iter().map(|&s| wave(s, k)).collect::<Result<Vec<_>>>()?;
    let mut jobs: Vec<(&'static str, WaveTestParams, f64)> = Vec::new();
    for &p in &params {
        jobs.extend(cfg.r_list.iter().map(|&r| ("forward", p, r)));
        jobs.extend(cfg.x_list.iter().map(|&x| ("test_function_to_profile", p, x)));
        jobs.extend(cfg.x_list.iter().map(|&x| ("profile_round_trip", p, x)));
    }
    let residuals: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(stage, p, pt)| {
            let phi = ProfileFunction::phi_s(&p)?;
            match stage {
                "forward" => {
                    let r = Complex64::new(pt, 0.0);
                    let want = h_gs_closed(&p, r)?;
                    Ok((forward_h(&phi, r, k)?.value - want).norm() / want.norm())
                }
                "test_function_to_profile" => {
                    let g = EvenTestFunction::g_s(&p)?;
                    Ok((phi_inverse(|y| q_prime(&g, y).0, pt, k)?.value - phi.eval(pt)).norm())
                }
                _ => {
                    let back = phi_inverse(
                        |y| q_forward_derivative(&phi, y, k).map_or(Complex64::new(f64::NAN, 0.0), |q| q.value),
                        pt,
                        k,
                    )?;
                    Ok((back.value - phi.eval(pt)).norm())
                }
            }
        })
        .collect();
    let mut failed = false;
    let mut rows = Vec::new();
    for ((stage, p, pt), res) in jobs.iter().zip(residuals) {
        let res = res.unwrap_or(f64::NAN);
        let passed = res <= tol;
        failed |= !passed;
        rows.push(vec![
            stage.to_string(),
            num(p.s.re),
            num(p.s.im),
            num(*pt),
            num(res),
            num(tol),
            passed.to_string(),
        ]);
    }
    Ok(RunOutput {
        bytes: csv_bytes(&["stage", "s_re", "s_im", "point", "residual", "tolerance", "passed"], &rows)?,
        failed,
    })
}

#[derive(Serialize)]
struct BallArtifact {
    z: [f64; 2],
    w: [f64; 2],
    #[serde(rename = "R")]
    radius_sigma: f64,
    certified: bool,
    count: usize,
    /// column order a, b, c, d
    rows: Vec<[i64; 4]>,
}

#[derive(Serialize)]
struct GroupArtifact<'a> {
    schema: u32,
    config: &'a RunConfig,
    balls: Vec<BallArtifact>,
}

fn group_ball(cfg: &RunConfig) -> Result<RunOutput> {
    let balls = cfg
        .points
        .iter()
        .map(|&(z, w)| {
            let b = enumerate_ball(z, w, cfg.trunc_r)?;
            Ok(BallArtifact {
                z: [z.x, z.y],
                w: [w.x, w.y],
                radius_sigma: b.radius_sigma,
                certified: b.certified,
                count: b.len(),
                rows: b.rows(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunOutput {
        bytes: json(&GroupArtifact { schema: SCHEMA, config: cfg, balls })?,
        failed: false,
    })
}

fn group_count(cfg: &RunConfig) -> Result<RunOutput> {
    let jobs: Vec<((Point, Point), f64)> = cfg
        .points
        .iter()
        .flat_map(|&pq| cfg.rho_list.iter().map(move |&rho| (pq, rho)))
        .collect();
    let counts: Vec<Result<usize>> = jobs.par_iter().map(|&((z, w), rho)| counting_n(rho, z, w)).collect();
    let mut rows = Vec::new();
    for (((z, w), rho), n) in jobs.iter().zip(counts) {
        rows.push(vec![
            format!("{}{:+}i", z.x, z.y),
            format!("{}{:+}i", w.x, w.y),
            num(*rho),
            n?.to_string(),
        ]);
    }
    Ok(RunOutput {
        bytes: csv_bytes(&["z", "w", "rho", "count"], &rows)?,
        failed: false,
    })
}

#[derive(Serialize)]
struct ConstantsArtifact<'a> {
    schema: u32,
    config: &'a RunConfig,
    inputs: crate::kernels::SupNormInputs,
    constants: crate::kernels::SupNormConstants,
    /// digamma term at s = |k| + 2, t = s + 1
    digamma_term: f64,
}

fn constants(cfg: &RunConfig) -> Result<RunOutput> {
    let k = cfg.weight_k;
    let inputs = modular_domain_inputs(k, cfg.d_dim, cfg.y_cut)?;
    let constants = sup_norm_constants(&inputs)?;
    let s = k.abs() + 2.0;
    let digamma_term = digamma_term(s, s + 1.0, k, cfg.d_dim)?;
    Ok(RunOutput {
        bytes: json(&ConstantsArtifact {
            schema: SCHEMA,
            config: cfg,
            inputs,
            constants,
            digamma_term,
        })?,
        failed: false,
    })
}

/// Runs the named suite (or all of them) and returns the report.
pub fn check_report(cfg: &RunConfig, name: &str) -> Result<CheckReport> {
    let ms: MultiplierSystem = cfg.multiplier_system()?;
    let mut inp = SuiteInput::new(cfg.seed, ms);
    inp.tolerances = cfg.tolerances.clone();
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    let suites = names.iter().map(|n| run_suite(n, &inp)).collect::<Result<Vec<_>>>()?;
    Ok(CheckReport {
        schema: SCHEMA,
        seed: cfg.seed,
        k: cfg.weight_k,
        multiplier: cfg.multiplier,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

fn check(cfg: &RunConfig, name: &str) -> Result<RunOutput> {
    let report = check_report(cfg, name)?;
    Ok(RunOutput {
        bytes: json(&report)?,
        failed: !report.passed,
    })
}
