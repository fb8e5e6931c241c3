use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use permajones::assembly::{blow_up, export_coordinates, export_numeric, read_numeric_matrix};
use permajones::gadget::{appendix_identities, verify_gadget, Gadget};
use permajones::jones::{
    braid_diagram, jones_skein, jones_statesum, jones_via_permanent, jones_via_permanent_with, timed_record,
    verify_theorem_with_budget, Route,
};
use permajones::knotio::{parse_braid, BraidWord, Sign};
use permajones::montecarlo::{
    estimate_jones_modulus_with, estimate_permanent_with, quantum_two_at_fifth_root, EstimateOptions, EstimatorReport,
    TracePoint, EXACT_CROSSING_LIMIT,
};
use permajones::permanent::{permanent_cycle_covers, permanent_numeric, permanent_ryser};
use permajones::Error;
use serde_json::json;

use crate::{BenchArgs, BraidSource, EstimateArgs, Failure, Format, JonesArgs, MatrixArgs, SelftestArgs};

type Outcome = Result<(), Failure>;

const SELFTEST_BRAIDS: [&str; 10] = [
    "1:",
    "2: 1",
    "2: -1",
    "2: 1 1",
    "2: -1 -1",
    "2: 1 1 1",
    "2: -1 -1 -1",
    "3: 1 -2 1 -2",
    "3: 1 1 2 -1 2",
    "4: 1 -2 3 -2 1",
];

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_braid(src: &BraidSource) -> Result<BraidWord, Failure> {
    let text = match (&src.braid, &src.file) {
        (Some(b), _) => b.clone(),
        (None, Some(path)) => read_file(path)?,
        (None, None) => return Err(Failure::Io("give a braid word or --file".into())),
    };
    Ok(parse_braid(&text)?)
}

/// Parses "re,im", a real number, or "exp:<angle>" with angles such as
/// "2pi/5", "pi/5" or "0.3".
pub fn parse_q0(s: &str) -> Result<Complex64, Error> {
    let bad = || Error::InvalidArgument(format!("cannot read evaluation point '{s}'"));
    let s = s.trim();
    if let Some(angle) = s.strip_prefix("exp:") {
        let angle = angle.trim();
        let theta = match angle.split_once("pi") {
            Some((coeff, rest)) => {
                let c: f64 = if coeff.is_empty() {
                    1.0
                } else {
                    coeff.parse().map_err(|_| bad())?
                };
                let d: f64 = match rest.strip_prefix('/') {
                    Some(d) => d.parse().map_err(|_| bad())?,
                    None if rest.is_empty() => 1.0,
                    None => return Err(bad()),
                };
                c * PI / d
            }
            None => angle.parse().map_err(|_| bad())?,
        };
        return Ok(Complex64::from_polar(1.0, theta));
    }
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0)),
    }
}

pub fn jones(a: &JonesArgs) -> Outcome {
    let b = load_braid(&a.source)?;
    if a.verify {
        let report = verify_theorem_with_budget(&b, a.skein_budget)?;
        match a.format {
            Format::Human => println!("{report}"),
            Format::Json => {
                let records = Route::ALL
                    .into_iter()
                    .map(|r| timed_record(&b, r, a.skein_budget))
                    .collect::<Result<Vec<_>, _>>()?;
                println!("{}", serde_json::to_string_pretty(&records).expect("records serialize"));
            }
        }
        return if report.agree() {
            Ok(())
        } else {
            Err(Failure::Mismatch(format!("routes disagree on {b}")))
        };
    }

    let record = timed_record(&b, a.route.into(), a.skein_budget)?;
    match a.format {
        Format::Human => println!("{}", record.jones),
        Format::Json => println!("{}", serde_json::to_string_pretty(&record).expect("record serializes")),
    }
    Ok(())
}

pub fn matrix(a: &MatrixArgs) -> Outcome {
    let b = load_braid(&a.source)?;
    let graph = blow_up(&braid_diagram(&b))?;
    let m = graph.to_matrix()?;
    let text = match &a.numeric {
        Some(q0) => export_numeric(&graph.header(), &m, parse_q0(q0)?)?,
        None => export_coordinates(&graph.header(), &m),
    };
    print!("{text}");
    Ok(())
}

fn with_trace<T>(
    path: Option<&Path>,
    run: impl FnOnce(&mut dyn FnMut(TracePoint)) -> Result<T, Error>,
) -> Result<T, Failure> {
    let Some(path) = path else {
        return Ok(run(&mut |_| {})?);
    };
    let io = |e: csv::Error| Failure::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["sample_index", "running_mean_re", "running_mean_im", "std_error"])
        .map_err(io)?;
    let mut first_err = None;
    let out = run(&mut |t| {
        if first_err.is_some() {
            return;
        }
        let row = [
            t.sample_index.to_string(),
            t.running_mean.re.to_string(),
            t.running_mean.im.to_string(),
            t.std_error.to_string(),
        ];
        if let Err(e) = w.write_record(&row) {
            first_err = Some(e);
        }
    })?;
    if let Some(e) = first_err {
        return Err(io(e));
    }
    w.flush().map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(out)
}

fn deviation(mean: Complex64, exact: Complex64, se: f64) -> f64 {
    let d = (mean - exact).norm();
    if se > 0.0 {
        d / se
    } else if d == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn report_json(r: &EstimatorReport) -> serde_json::Value {
    json!({
        "samples": r.samples,
        "seed": r.seed,
        "mean": [r.mean.re, r.mean.im],
        "variance": r.variance,
        "std_error": r.std_error,
        "ci95_re": [r.ci95_re.0, r.ci95_re.1],
        "ci95_im": [r.ci95_im.0, r.ci95_im.1],
    })
}

fn print_report(r: &EstimatorReport) {
    println!("samples      {}", r.samples);
    println!("seed         {}", r.seed);
    println!("mean         {} {:+}i", r.mean.re, r.mean.im);
    println!("variance     {}", r.variance);
    println!("std_error    {}", r.std_error);
    println!("ci95 re      [{}, {}]", r.ci95_re.0, r.ci95_re.1);
    println!("ci95 im      [{}, {}]", r.ci95_im.0, r.ci95_im.1);
}

pub fn estimate(a: &EstimateArgs) -> Outcome {
    let q0 = parse_q0(&a.q0)?;
    let mut opts = EstimateOptions::new(a.samples, a.seed);
    opts.workers = a.workers;
    opts.trace_every = a.trace.as_ref().map(|_| a.trace_every);

    if let Some(path) = &a.matrix_file {
        let (_, m) = read_numeric_matrix(&read_file(path)?, q0)?;
        let dense = m.to_dense();
        let report = with_trace(a.trace.as_deref(), |t| estimate_permanent_with(&dense, &opts, t))?;
        let exact = if dense.len() <= a.max_dim {
            Some(permanent_numeric(&dense, a.max_dim)?)
        } else {
            None
        };
        match a.format {
            Format::Human => {
                print_report(&report);
                if let Some(e) = exact {
                    println!("exact        {} {:+}i", e.re, e.im);
                    println!("deviation    {} std_error", deviation(report.mean, e, report.std_error));
                }
            }
            Format::Json => {
                let mut v = json!({ "permanent": report_json(&report) });
                if let Some(e) = exact {
                    v["exact"] = json!([e.re, e.im]);
                    v["deviation_sigma"] = json!(deviation(report.mean, e, report.std_error));
                }
                println!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
            }
        }
        return Ok(());
    }

    let b = load_braid(&a.source)?;
    let report = with_trace(a.trace.as_deref(), |t| estimate_jones_modulus_with(&b, q0, &opts, t))?;
    let d = braid_diagram(&b);
    let exact_per = if d.crossing_count() <= EXACT_CROSSING_LIMIT {
        let m = blow_up(&d)?.to_matrix()?.try_map(|p| p.eval(q0))?;
        Some(permanent_cycle_covers(&m))
    } else {
        None
    };
    let per = &report.permanent;
    match a.format {
        Format::Human => {
            println!("braid        {b}");
            println!("q0           {} {:+}i", q0.re, q0.im);
            print_report(per);
            if let Some(e) = exact_per {
                println!("exact per    {} {:+}i", e.re, e.im);
                println!("deviation    {} std_error", deviation(per.mean, e, per.std_error));
            }
            println!("|J(q0)|      {} +- {}", report.modulus, report.std_error);
            if let Some(x) = report.exact {
                println!("exact |J|    {x}");
            }
            println!("[2]_5        {}", quantum_two_at_fifth_root());
        }
        Format::Json => {
            let mut v = json!({
                "braid": b.to_string(),
                "q0": [q0.re, q0.im],
                "permanent": report_json(per),
                "jones_modulus": report.modulus,
                "jones_modulus_std_error": report.std_error,
                "quantum_two_fifth": quantum_two_at_fifth_root(),
            });
            if let Some(e) = exact_per {
                v["exact_permanent"] = json!([e.re, e.im]);
                v["deviation_sigma"] = json!(deviation(per.mean, e, per.std_error));
            }
            if let Some(x) = report.exact {
                v["exact_jones_modulus"] = json!(x);
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
        }
    }
    Ok(())
}

fn load_gadget(path: Option<&Path>, sign: Sign) -> Result<Gadget, Failure> {
    let g = match path {
        Some(p) => read_file(p)?.parse::<Gadget>()?,
        None => Gadget::shipped(sign).clone(),
    };
    if g.sign() != sign {
        return Err(Error::InvalidGadget(format!("expected a {sign} gadget")).into());
    }
    Ok(g)
}

pub fn selftest(a: &SelftestArgs) -> Outcome {
    let positive = load_gadget(a.positive_gadget.as_deref(), Sign::Positive)?;
    let negative = load_gadget(a.negative_gadget.as_deref(), Sign::Negative)?;
    let mut failed = 0;
    let mut check = |ok: bool, label: &str| {
        println!("{} {label}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    };

    for (k, ok) in appendix_identities().into_iter().enumerate() {
        check(ok, &format!("weight identity {}", k + 1));
    }
    for g in [&positive, &negative] {
        let report = verify_gadget(g);
        check(report.passed(), &format!("{} gadget contract", g.sign()));
        for c in report.failures() {
            println!("     {} expected {} got {}", c.pattern, c.expected, c.actual);
        }
    }
    for s in SELFTEST_BRAIDS {
        let b: BraidWord = s.parse()?;
        let d = braid_diagram(&b);
        let per = jones_via_permanent_with(&d, &positive, &negative)?.value;
        let sum = jones_statesum(&d)?.value;
        let skein = jones_skein(&b, permajones::jones::DEFAULT_SKEIN_BUDGET)?.value;
        let ok = per == sum && sum == skein;
        check(ok, &format!("routes agree on \"{s}\""));
        if !ok {
            println!("     permanent {per}\n     statesum  {sum}\n     skein     {skein}");
        }
    }

    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{failed} check(s) failed")))
    }
}

pub fn bench(a: &BenchArgs) -> Outcome {
    let n = a.dim;
    let m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let t = (a.seed as f64 + 1.0) * (0.618_034 * (i * n + j) as f64 + 0.1);
                    Complex64::from_polar(0.5 + 0.5 * t.sin().abs(), t)
                })
                .collect()
        })
        .collect();
    let start = Instant::now();
    let p = permanent_ryser(&m, n.max(1))?;
    println!(
        "numeric ryser {n}x{n}: {:.1} ms (per = {} {:+}i)",
        start.elapsed().as_secs_f64() * 1e3,
        p.re,
        p.im
    );

    let start = Instant::now();
    let trefoil: BraidWord = "2: 1 1 1".parse()?;
    let j = jones_via_permanent(&braid_diagram(&trefoil))?.value;
    println!(
        "exact trefoil pipeline (21x21): {:.1} ms ({j})",
        start.elapsed().as_secs_f64() * 1e3
    );
    Ok(())
}
