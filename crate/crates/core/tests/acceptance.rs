//! One PASS/FAIL line per acceptance criterion.

use std::process::ExitCode;
use std::time::Instant;

use fcimc::checks::{self, Options, Report, Suite};
use fcimc::syntax::{parse, Signature};

struct Criterion {
    number: u8,
    title: &'static str,
    suites: &'static [Suite],
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, title: "cz ⊆ ips(X ∪ cz, X) iff X ≠ ∅", suites: &[Suite::Notbot] },
    Criterion { number: 2, title: "negation elimination yields equivalent positive existential formulas", suites: &[Suite::Posex] },
    Criterion { number: 3, title: "ips characterization and φ_ips", suites: &[Suite::Ipschar] },
    Criterion { number: 4, title: "endpoint lemma", suites: &[Suite::Endpoints] },
    Criterion { number: 5, title: "membership and inclusion in endpoint coordinates", suites: &[Suite::Member, Suite::Subset] },
    Criterion { number: 6, title: "W→L and L→W translations", suites: &[Suite::W2l, Suite::L2w] },
    Criterion { number: 7, title: "L→existential L pipeline", suites: &[Suite::Pipeline] },
    Criterion { number: 8, title: "kernel laws, normal forms, round-trips", suites: &[Suite::Kernel] },
];

/// Corpus requirements that the suites take for granted.
fn corpus_problems(number: u8) -> Vec<String> {
    let mut out = Vec::new();
    let mut need = |name: &str, corpus: &[&str], sig: Signature, symbols: &[&str]| {
        if corpus.len() < 10 {
            out.push(format!("{name} has {} formulas", corpus.len()));
        }
        for text in corpus {
            if let Err(e) = parse(text, sig) {
                out.push(format!("{name}: {text:?}: {e}"));
            }
        }
        for sym in symbols {
            if !corpus.iter().any(|t| t.contains(sym)) {
                out.push(format!("{name} never uses {sym}"));
            }
        }
    };
    let w_symbols = ["cup(", "cap(", "min(", "max(", "ips(", "cz", "bot", "sub", "!"];
    let l_symbols = ["cup(", "cap(", "min(", "max(", "l(", "r(", "cz", "bot", "sub"];
    match number {
        2 => need("posex corpus", checks::W_QF_CORPUS, Signature::W, &["!"]),
        6 => {
            need("W corpus", checks::W_CORPUS, Signature::W, &w_symbols);
            need("L corpus", checks::L_CORPUS, Signature::L, &l_symbols);
        }
        7 => need("pipeline corpus", checks::PIPELINE_CORPUS, Signature::L, &[]),
        _ => {}
    }
    out
}

fn main() -> ExitCode {
    let opts = Options { seed: 0x5eed, ..Options::default() };
    let mut all_ok = true;
    for c in CRITERIA {
        let start = Instant::now();
        let mut reports: Vec<Report> = Vec::new();
        let mut problems = corpus_problems(c.number);
        for &suite in c.suites {
            match checks::run(suite, &opts) {
                Ok(r) => reports.push(r),
                Err(e) => problems.push(format!("{suite}: {e}")),
            }
        }
        let ok = problems.is_empty() && reports.iter().all(Report::ok);
        all_ok &= ok;
        let summary: Vec<String> = reports.iter().map(|r| format!("{} {r}", r.suite)).collect();
        println!(
            "{} criterion {}: {} [{}] ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            c.number,
            c.title,
            summary.join("; "),
            start.elapsed().as_secs_f64()
        );
        for r in &reports {
            for note in &r.notes {
                println!("    note: {note}");
            }
            for f in r.failures.iter().take(5) {
                println!("    counterexample ({}): {f}", r.suite);
            }
        }
        for p in &problems {
            println!("    problem: {p}");
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
