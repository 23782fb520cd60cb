//! Batch command-line interface: build preset CM data, run the named
//! verification suites, and print class-field tables, as human-readable
//! text or schema-versioned JSON.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use cmtorus_core::galois::{make_cyclotomic_datum, make_quadratic_datum, CMDatum};
use cmtorus_core::presets::STANDARD_PRIMES;
use cmtorus_core::report::Report;
use cmtorus_core::{classfield, verify};

#[derive(Parser)]
#[command(name = "cmtorus", version, about = "Exact verification of Serre/Weil-number torus data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a CM datum (preset or from JSON) and print its local data
    Datum {
        /// conductor n of Q(zeta_n), n >= 3 and not 2 mod 4
        #[arg(long, conflicts_with = "quadratic", conflicts_with = "file")]
        cyclotomic: Option<u64>,
        /// squarefree d < 0 for Q(sqrt(d))
        #[arg(long, allow_hyphen_values = true, conflicts_with = "file")]
        quadratic: Option<i64>,
        /// load a serialized datum instead of building a preset
        #[arg(long)]
        file: Option<PathBuf>,
        /// distinguished prime p
        #[arg(long, default_value_t = 5)]
        p: u64,
        /// probe primes (comma separated); defaults to 2,3,5,13,19
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite across the presets
    Verify {
        /// one of: e15, e18, e25, rho, cg4, cg5n, crossed, il01p, alpha
        suite: String,
        /// run across every preset (the default; kept for symmetry)
        #[arg(long, default_value_t = true)]
        all_presets: bool,
        /// fan independent presets out across threads
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
    /// Class-group and relative-class-number tables
    Classfield {
        /// h^-(Q(zeta_l)) for a prime l
        #[arg(long)]
        hminus: Option<u64>,
        /// irregular primes up to this bound
        #[arg(long)]
        irregular: Option<u64>,
        /// form class group of a negative discriminant
        #[arg(long, allow_hyphen_values = true)]
        forms: Option<i64>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (mut report, json) = match run(cli) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if json {
        println!("{}", report.to_json());
    } else {
        report.timing_ms = Some(started.elapsed().as_millis());
        print!("{}", report.render_text());
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<(Report, bool), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Datum { cyclotomic, quadratic, file, p, primes, json } => {
            let probe = if primes.is_empty() { STANDARD_PRIMES.to_vec() } else { primes };
            let datum = if let Some(path) = file {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str::<CMDatum>(&text)?
            } else if let Some(n) = cyclotomic {
                make_cyclotomic_datum(n, p, &probe)?
            } else if let Some(d) = quadratic {
                make_quadratic_datum(d, p, &probe)?
            } else {
                return Err("need --cyclotomic, --quadratic, or --file".into());
            };
            Ok((datum_report(&datum)?, json))
        }
        Command::Verify { suite, all_presets: _, parallel, json } => {
            let report = verify::run_suite(&suite, parallel)?;
            Ok((report, json))
        }
        Command::Classfield { hminus, irregular, forms, json } => {
            let report = classfield_report(hminus, irregular, forms)?;
            Ok((report, json))
        }
    }
}

fn datum_report(datum: &CMDatum) -> Result<Report, Box<dyn std::error::Error>> {
    let mut report = Report::new("datum").input("label", &datum.label).input("p", datum.p);
    report.set_output("group_order", datum.group.order());
    report.set_output("iota", datum.iota);
    report.set_output("n_w", datum.local_degree_at_p());
    report.set_output("iota_in_decomposition_at_p", datum.iota_in_decomposition_at_p());
    report.set_output("datum", datum);
    let mut table = Vec::new();
    for &l in datum.local_data.keys() {
        let places = datum.places(l)?;
        let ld = datum.local(l)?;
        table.push(serde_json::json!({
            "prime": l,
            "e": ld.e,
            "f": ld.f,
            "x_count": places.x_count(),
            "y_count": places.y_count(),
            "iota_in_decomposition": places.iota_in_decomposition,
        }));
        // fundamental identity: sum of e*f over places = |G|
        let ok = places.x_count() as u64 * ld.e * ld.f == datum.group.order() as u64;
        report.verdict(&format!("sum of e*f over places of {l} equals |G|"), ok);
    }
    report.set_output("places", table);
    Ok(report)
}

fn classfield_report(
    hminus: Option<u64>,
    irregular: Option<u64>,
    forms: Option<i64>,
) -> Result<Report, Box<dyn std::error::Error>> {
    let mut report = Report::new("classfield");
    let mut any = false;
    if let Some(l) = hminus {
        any = true;
        let h = classfield::relative_class_number(l)?;
        let oracle = classfield::relative_class_number_oracle(l)?;
        report.set_output(&format!("hminus_{l}"), h.to_string());
        report.verdict(&format!("h^-(Q(zeta_{l})) = {h}: dual B1 routes agree"), h == oracle);
    }
    if let Some(bound) = irregular {
        any = true;
        let primes = classfield::irregular_primes(bound)?;
        report.set_output("irregular_primes", &primes);
        report.verdict(&format!("irregular primes up to {bound}: {} found", primes.len()), true);
    }
    if let Some(d) = forms {
        any = true;
        let g = classfield::form_class_group(d)?;
        report.set_output("form_class_group", g.structure.to_string());
        report.set_output(
            "reduced_forms",
            g.forms.iter().map(|f| format!("({}, {}, {})", f.a, f.b, f.c)).collect::<Vec<_>>(),
        );
        report.verdict(
            &format!("h({d}) = {} with structure {}", g.order(), g.structure),
            g.structure.torsion_order() == num_bigint::BigInt::from(g.order() as u64),
        );
    }
    if !any {
        return Err("need at least one of --hminus, --irregular, --forms".into());
    }
    Ok(report)
}
