use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wcep_core::bench::{self, BenchConfig, OutputFormat};
use wcep_core::complexity::{cost_aw_pinv, cost_two_pinv, cost_wa_pinv, recommend, CostBreakdown, PinvCostModel};
use wcep_core::dense::pinv;
use wcep_core::gen::gen_random_pair;
use wcep_core::genin::{core_ep, drazin};
use wcep_core::io::{read_matrix_file, write_matrix, MatrixFormat};
use wcep_core::verify::residuals;
use wcep_core::{Error, Matrix, Method, Tolerance, WeightedPair};

/// Weighted core-EP inverses and related generalized inverses of dense
/// complex matrices.
#[derive(Parser, Debug)]
#[command(name = "wcep", version)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true, default_value_t = f64::EPSILON)]
    rank_rtol: f64,
    /// Absolute residual tolerance (scaled by the size of the terms).
    #[arg(long, global = true, default_value_t = 1e-9)]
    atol: f64,
    /// Relative residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    rtol: f64,
    /// Input matrix format (mtx, coord, csv); inferred from the extension by default.
    #[arg(long, global = true)]
    input_format: Option<String>,
    /// Output matrix format (mtx, coord, csv).
    #[arg(long, global = true, default_value = "mtx")]
    output_format: String,
    /// Write the result matrix here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moore-Penrose pseudoinverse of A.
    Pinv {
        #[arg(short = 'A', value_name = "FILE")]
        a: PathBuf,
    },
    /// Core-EP inverse of a square A.
    CoreEp {
        #[arg(short = 'A', value_name = "FILE")]
        a: PathBuf,
        /// Power exponent, at least the index (default max(index, 1)).
        #[arg(long)]
        l: Option<usize>,
    },
    /// Drazin inverse of a square A.
    Drazin {
        #[arg(short = 'A', value_name = "FILE")]
        a: PathBuf,
    },
    /// W-weighted core-EP inverse of A.
    Wcep {
        #[command(flatten)]
        pair: PairFiles,
        /// def, eq13, eq28, eq29, svd, fullrank or qr.
        #[arg(long, default_value = "def")]
        method: String,
        /// Power exponent for eq13/eq28/eq29, at least k (default k).
        #[arg(long)]
        l: Option<usize>,
    },
    /// Residuals of a candidate X for the pair (A, W).
    Verify {
        #[command(flatten)]
        pair: PairFiles,
        #[arg(long = "x", value_name = "FILE")]
        x: PathBuf,
    },
    /// Timing and residual table on generated instances.
    Bench {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Overrides the table format from the config (csv, markdown).
        #[arg(long)]
        format: Option<String>,
    },
    /// Flop counts of the pseudoinverse formulas.
    Complexity {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        /// lower-bound, svd or svd:C.
        #[arg(long, default_value = "lower-bound")]
        pinv_model: String,
        /// csv or markdown.
        #[arg(long, default_value = "markdown")]
        format: String,
    },
    /// Seeded random pair with a prescribed index.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination for A; both matrices go to stdout when omitted.
        #[arg(long, value_name = "FILE", requires = "out_w")]
        out_a: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "out_a")]
        out_w: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct PairFiles {
    #[arg(short = 'A', value_name = "FILE")]
    a: PathBuf,
    #[arg(short = 'W', value_name = "FILE")]
    w: PathBuf,
}

struct Ctx {
    tol: Tolerance,
    input: Option<MatrixFormat>,
    output: MatrixFormat,
    out_path: Option<PathBuf>,
}

impl Ctx {
    fn read(&self, path: &Path) -> Result<Matrix, Error> {
        read_matrix_file(path, self.input).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("{}: {io}", path.display())),
            Error::Parse { line, msg } => Error::Parse {
                line,
                msg: format!("{}: {msg}", path.display()),
            },
            e => e,
        })
    }

    fn pair(&self, files: &PairFiles) -> Result<WeightedPair, Error> {
        WeightedPair::new(self.read(&files.a)?, self.read(&files.w)?, &self.tol)
    }

    fn emit_matrix(&self, m: &Matrix) -> Result<(), Error> {
        self.emit(&write_matrix(m, self.output))
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out_path {
            Some(p) => std::fs::write(p, text).map_err(Error::from),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn pinv_model(s: &str) -> Result<PinvCostModel, Error> {
    match s {
        "lower-bound" | "lower_bound" => Ok(PinvCostModel::LowerBound),
        "svd" | "svd-based" | "svd_based" => Ok(PinvCostModel::svd_based()),
        _ => {
            let c = s
                .strip_prefix("svd:")
                .and_then(|c| c.parse::<f64>().ok())
                .filter(|c| c.is_finite() && *c > 0.0)
                .ok_or_else(|| {
                    Error::Config(format!("unknown pinv model '{s}', expected lower-bound, svd or svd:C with C > 0"))
                })?;
            Ok(PinvCostModel::SvdBased { c })
        }
    }
}

fn cost_table(rows: &[(&str, CostBreakdown)], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        out.push_str("formula,term,flops\n");
        for (name, c) in rows {
            for t in &c.terms {
                let _ = writeln!(out, "{name},{},{}", t.label, t.flops);
            }
            let _ = writeln!(out, "{name},total,{}", c.total);
        }
        return out;
    }
    for (name, c) in rows {
        let _ = writeln!(out, "### {name}\n");
        let mut cells: Vec<(&str, String)> = c.terms.iter().map(|t| (t.label, t.flops.to_string())).collect();
        cells.push(("total", c.total.to_string()));
        let lw = cells.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max("term".len());
        let fw = cells.iter().map(|(_, f)| f.len()).max().unwrap_or(0).max("flops".len());
        let _ = writeln!(out, "| {:<lw$} | {:>fw$} |", "term", "flops");
        let _ = writeln!(out, "|{}|{}|", "-".repeat(lw + 2), "-".repeat(fw + 2));
        for (label, flops) in &cells {
            let _ = writeln!(out, "| {label:<lw$} | {flops:>fw$} |");
        }
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let o = &cli.opts;
    let ctx = Ctx {
        tol: Tolerance::new(o.rank_rtol, o.atol, o.rtol)?,
        input: o.input_format.as_deref().map(str::parse).transpose()?,
        output: o.output_format.parse()?,
        out_path: o.output.clone(),
    };
    let tol = &ctx.tol;

    match &cli.command {
        Command::Pinv { a } => ctx.emit_matrix(&pinv(&ctx.read(a)?, tol)?)?,
        Command::CoreEp { a, l } => ctx.emit_matrix(&core_ep(&ctx.read(a)?, *l, tol)?)?,
        Command::Drazin { a } => ctx.emit_matrix(&drazin(&ctx.read(a)?, tol)?)?,
        Command::Wcep { pair, method, l } => {
            let method: Method = method.parse()?;
            let p = ctx.pair(pair)?;
            ctx.emit_matrix(&method.compute(&p, *l, tol)?)?;
        }
        Command::Verify { pair, x } => {
            let p = ctx.pair(pair)?;
            let x = ctx.read(x)?;
            let r = residuals(&p, &x, tol)?;
            let mut out = format!("k = {} (ind(AW) = {}, ind(WA) = {})\n", p.k(), p.k_aw(), p.k_wa());
            for (name, abs, rel) in [("r1", r.r1, r.r1_rel), ("r2", r.r2, r.r2_rel), ("r3", r.r3, r.r3_rel)] {
                let _ = writeln!(out, "{name} = {abs:.6e} (relative {rel:.6e})");
            }
            let _ = writeln!(out, "verdict: {}", if r.pass { "pass" } else { "fail" });
            ctx.emit(&out)?;
            if !r.pass {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Bench { config, format } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| Error::Config(format!("{}: {e}", config.display())))?;
            let cfg: BenchConfig = text.parse::<BenchConfig>()?.with_env_seed()?;
            let fmt: OutputFormat = match format {
                Some(f) => f.parse()?,
                None => cfg.format,
            };
            eprintln!(
                "bench: {} size(s), target index {}, seed {}, {} repetition(s)",
                cfg.sizes.len(),
                cfg.target_index,
                cfg.seed,
                cfg.repetitions
            );
            let rows = bench::run_bench(&cfg, tol)?;
            ctx.emit(&bench::render(&rows, fmt))?;
        }
        Command::Complexity {
            m,
            n,
            l,
            pinv_model: model,
            format,
        } => {
            if *m == 0 || *n == 0 || *l == 0 {
                return Err(Error::Config("m, n and l must be positive".into()));
            }
            let csv = match format.as_str() {
                "csv" => true,
                "markdown" | "md" => false,
                other => return Err(Error::Config(format!("unknown output format '{other}'"))),
            };
            let model = pinv_model(model)?;
            let aw = cost_aw_pinv(*m, *n, *l, model);
            let two = cost_two_pinv(*m, *n, *l, model);
            let wa = cost_wa_pinv(*m, *n, *l, model);
            let (aw_total, two_total) = (aw.total, two.total);
            let rec = recommend(*m, *n, *l, model);
            let mut out = cost_table(&[("eq28", aw), ("eq29", wa), ("eq13", two)], csv);
            if !csv {
                let cmp = if two_total > aw_total { ">" } else { "<=" };
                let _ = writeln!(out, "eq13 total {two_total} {cmp} eq28 total {aw_total}");
                let _ = writeln!(out, "recommended for m = {m}, n = {n}: {}", rec.method);
            }
            ctx.emit(&out)?;
        }
        Command::Gen {
            m,
            n,
            index,
            seed,
            out_a,
            out_w,
        } => {
            let p = gen_random_pair(*m, *n, *index, *seed)?;
            let (ta, tw) = (write_matrix(p.a(), ctx.output), write_matrix(p.w(), ctx.output));
            match (out_a, out_w) {
                (Some(fa), Some(fw)) => {
                    std::fs::write(fa, ta)?;
                    std::fs::write(fw, tw)?;
                    eprintln!("wrote {}x{} pair with k = {}", m, n, p.k());
                }
                _ => ctx.emit(&format!("{ta}\n{tw}"))?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
