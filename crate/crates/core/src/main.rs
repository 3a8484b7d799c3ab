use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zd_lab::burgers::{alternating_sum, branches};
use zd_lab::error::{Error, Result};
use zd_lab::fourier::TorusFunction;
use zd_lab::io::{
    load_datum, write_branches_csv, write_coefficients_csv, write_lemma_csv, write_profile_csv,
    write_report_json, write_sweep_csv, write_trotter_csv, ExperimentConfig,
};
use zd_lab::kinetic::{as_profile_quadrature, godunov_reference, l1_distance, trotter_entropy};
use zd_lab::properties::run_default_suite;
use zd_lab::raney::verify_lemmas;
use zd_lab::spectral::{bo_coeff_rows, epsilon_sweep, zd_profile};

#[derive(Parser)]
#[command(name = "zd-lab", version, about = "Zero-dispersion laboratory for Benjamin-Ono on the circle")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Zero-dispersion profiles from all three routes plus a diff summary
    Zd {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long = "t", value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long = "K", default_value_t = 256)]
        order: usize,
        #[arg(long, default_value_t = 16)]
        kmax: usize,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 128)]
        nquad: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Dispersive coefficients at fixed epsilon values
    BoEps {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long = "t")]
        time: f64,
        #[arg(long = "eps", value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[arg(long = "K", default_value_t = 256)]
        order: usize,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Error-vs-epsilon convergence table
    Sweep {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long = "t")]
        time: f64,
        #[arg(long = "eps", value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[arg(long = "K", default_value_t = 256)]
        order: usize,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Multivalued characteristic branches on a grid
    Burgers {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long = "t", value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Trotter entropy ladder against the Godunov reference
    Trotter {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long = "t")]
        time: f64,
        #[arg(long = "steps", value_delimiter = ',', default_values_t = [4usize, 8, 16, 32, 64])]
        steps: Vec<usize>,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long, default_value_t = 1024)]
        cells: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Exhaustive verification of the shift-word lemmas
    Raney {
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 3)]
        dmax: usize,
        #[arg(long = "m-bound", default_value_t = 3)]
        m_bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full property suite with JSON report
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn config(
    datum: &TorusFunction,
    times: &[f64],
    order: usize,
    k_max: usize,
    grid_n: usize,
    n_quad: usize,
    epsilons: &[f64],
    seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        datum: datum.clone(),
        times: times.to_vec(),
        order,
        k_max,
        grid_n,
        n_quad,
        epsilons: epsilons.to_vec(),
        seed,
    }
}

fn grid_points(n: usize) -> Vec<f64> {
    (0..n).map(|j| std::f64::consts::TAU * j as f64 / n as f64).collect()
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Zd { datum, times, order, kmax, grid, nquad, out } => {
            let u0 = load_datum(&datum)?;
            let cfg = config(&u0, &times, order, kmax, grid, nquad, &[], 0);
            let hash = cfg.hash();
            let xs = grid_points(grid);
            let mut diff_rows = Vec::new();
            for (i, &t) in times.iter().enumerate() {
                let spectral = zd_profile(&u0, t, order, kmax)?;
                let spec_rows: Vec<(f64, f64)> =
                    xs.iter().map(|&x| (x, spectral.eval(x))).collect();
                let quad_rows: Vec<(f64, f64)> = xs
                    .iter()
                    .map(|&x| Ok((x, as_profile_quadrature(&u0, t, x, nquad)?)))
                    .collect::<Result<_>>()?;
                let char_rows: Vec<(f64, f64)> = xs
                    .iter()
                    .map(|&x| Ok((x, alternating_sum(&branches(&u0, t, x, 1024)?)?)))
                    .collect::<Result<_>>()?;
                write_profile_csv(&out.join(format!("zd_spectral_{i}.csv")), &hash, &spec_rows)?;
                write_profile_csv(&out.join(format!("zd_quadrature_{i}.csv")), &hash, &quad_rows)?;
                write_profile_csv(
                    &out.join(format!("zd_characteristics_{i}.csv")),
                    &hash,
                    &char_rows,
                )?;
                let d1 = spec_rows
                    .iter()
                    .zip(&quad_rows)
                    .fold(0.0_f64, |m, (a, b)| m.max((a.1 - b.1).abs()));
                let d2 = quad_rows
                    .iter()
                    .zip(&char_rows)
                    .fold(0.0_f64, |m, (a, b)| m.max((a.1 - b.1).abs()));
                diff_rows.push((t, d1, d2));
                println!("t={t}: |spectral - quadrature| = {d1:.3e}, |quadrature - characteristics| = {d2:.3e}");
            }
            let mut text = format!("# config={hash}\nt,spectral_vs_quadrature,quadrature_vs_characteristics\n");
            for (t, d1, d2) in diff_rows {
                text.push_str(&format!("{t:.16e},{d1:.16e},{d2:.16e}\n"));
            }
            std::fs::write(out.join("zd_diff.csv"), text)
                .map_err(|e| Error::InvalidArgument(format!("cannot write diff summary: {e}")))?;
            Ok(0)
        }
        Cmd::BoEps { datum, time, epsilons, order, kmax, out } => {
            let u0 = load_datum(&datum)?;
            let cfg = config(&u0, &[time], order, kmax, 0, 0, &epsilons, 0);
            let rows = bo_coeff_rows(&u0, time, &epsilons, kmax, order)?;
            write_coefficients_csv(&out.join("bo_eps.csv"), &cfg.hash(), &rows)?;
            println!("wrote {} coefficient rows", rows.len());
            Ok(0)
        }
        Cmd::Sweep { datum, time, epsilons, order, kmax, out } => {
            let u0 = load_datum(&datum)?;
            let cfg = config(&u0, &[time], order, kmax, 0, 0, &epsilons, 0);
            let rows = epsilon_sweep(&u0, time, kmax, &epsilons, order, None)?;
            write_sweep_csv(&out.join("sweep.csv"), &cfg.hash(), &rows)?;
            for r in &rows {
                println!("eps={:.4}: max error {:.6e}", r.epsilon, r.max_abs_error);
            }
            Ok(0)
        }
        Cmd::Burgers { datum, times, grid, out } => {
            let u0 = load_datum(&datum)?;
            let cfg = config(&u0, &times, 0, 0, grid, 0, &[], 0);
            let mut rows = Vec::new();
            for &t in &times {
                for &x in &grid_points(grid) {
                    rows.push(branches(&u0, t, x, 1024)?);
                }
            }
            write_branches_csv(&out.join("branches.csv"), &cfg.hash(), &rows)?;
            let caustics = rows.iter().filter(|b| b.caustic).count();
            println!("dumped {} points ({caustics} flagged as caustic)", rows.len());
            Ok(0)
        }
        Cmd::Trotter { datum, time, steps, grid, cells, out } => {
            let u0 = load_datum(&datum)?;
            let cfg = config(&u0, &[time], 0, 0, grid, 0, &[], 0);
            let reference = godunov_reference(&u0, time, cells)?;
            let mut rows = Vec::new();
            for &n in &steps {
                let approx = trotter_entropy(&u0, time, n, grid)?;
                let err = l1_distance(&approx, &reference, 4096);
                println!("n={n}: L1 error {err:.6e}");
                rows.push((n, err));
            }
            write_trotter_csv(&out.join("trotter.csv"), &cfg.hash(), &rows)?;
            Ok(0)
        }
        Cmd::Raney { kmax, dmax, m_bound, out } => {
            let rows = verify_lemmas(kmax, dmax, m_bound)?;
            println!("k,d,M,words_checked,failures");
            let mut failed = false;
            for r in &rows {
                println!("{},{},{},{},{}", r.k, r.d, r.m_bound, r.words_checked, r.failures);
                failed |= r.failures > 0;
            }
            if let Some(dir) = out {
                let cfg = config(&TorusFunction::constant(0.0), &[], kmax, dmax, 0, 0, &[], 0);
                write_lemma_csv(&dir.join("raney.csv"), &cfg.hash(), &rows)?;
            }
            Ok(if failed { 1 } else { 0 })
        }
        Cmd::Verify { seed, out } => {
            let reports = run_default_suite(seed)?;
            write_report_json(&out.join("report.json"), &reports)?;
            let mut failed = false;
            for r in &reports {
                println!(
                    "{} [{}]: {} (measured {:.6e}, bound {:.6e}, slack {:.3e})",
                    r.property,
                    r.inputs,
                    if r.pass { "pass" } else { "FAIL" },
                    r.measured,
                    r.bound,
                    r.slack
                );
                failed |= !r.pass;
            }
            Ok(if failed { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
