use std::process::{Command, Output};

use fcimc::{classify, parse, Class, Signature};

fn fcimc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcimc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_prints_truth_value() {
    let o = fcimc(&["eval", "--sig", "l", "--let", "X=[1,2]+[4,*)", "max(X) = bot"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");

    let o = fcimc(&["eval", "--sig", "w", "--let", "X={2}", "--pool", "{0,1,2}", "E Y. cap(Y,X) = Y & !(Y = bot)"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "true\n"));
}

#[test]
fn notbot_summary() {
    let o = fcimc(&["check", "--suite", "notbot"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "checked=32 failures=0\n");
}

#[test]
fn pipeline_rejects_essential_universal() {
    let o = fcimc(&["pipeline", "A Y. (Y sub X -> Y = X)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("fragment error"), "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let o = fcimc(&["parse", "--sig", "l", "l(X) = ips(X,X)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 8"), "{}", stderr(&o));
    assert_eq!(fcimc(&["eval", "--sig", "l", "--let", "X=[3,1]", "X = X"]).status.code(), Some(2));
    assert_eq!(fcimc(&["check", "--suite", "notbot", "--pool-size", "9"]).status.code(), Some(2));
    assert_eq!(fcimc(&["translate", "--dir", "sideways", "X = X"]).status.code(), Some(2));
}

#[test]
fn outputs_reparse_with_promised_class() {
    let cases: [(&[&str], Signature, Class); 4] = [
        (&["posex", "!(X = Y) | min(X) = cz"], Signature::W, Class::PositiveExistential),
        (&["translate", "--dir", "w2l", "ips(X,Y) = cz"], Signature::L, Class::Existential),
        (&["translate", "--dir", "l2w", "min(X) = max(X)"], Signature::W, Class::QuantifierFree),
        (&["pipeline", "!(min(X) = cz)"], Signature::L, Class::Existential),
    ];
    for (args, sig, class) in cases {
        let o = fcimc(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let text = stdout(&o);
        let g = parse(text.lines().next().unwrap(), sig).unwrap();
        let got = classify(&g);
        let fits = match class {
            Class::PositiveExistential => got == class,
            Class::Existential => got.is_existential(),
            _ => got != Class::Other,
        };
        assert!(fits, "{args:?} gave {} ({got:?})", g);
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["pipeline", "E Y. l(X) = Y & !(Y = bot)"][..],
        &["--json", "check", "--suite", "pipeline", "--seed", "5"][..],
        &["translate", "--dir", "l2w", "X sub Y"][..],
    ] {
        let (a, b) = (fcimc(args), fcimc(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn json_envelope_for_check() {
    let o = fcimc(&["--json", "check", "--suite", "ipschar"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "check");
    assert_eq!(v["result"]["suite"], "ipschar");
    assert!(v["result"]["checked"].as_u64().unwrap() > 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}
