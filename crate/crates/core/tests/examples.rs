//! Worked examples through the public API.

use fcimc::fci::{endpoint_pairing_holds, Piece};
use fcimc::semantics::{default_pool, eval_default, eval_term, Assignment, LStruct, WStruct};
use fcimc::transforms::{
    delta_domain, delta_term, phi_in, phi_ips, phi_subseteq, pipeline, to_positive_existential,
    translate_l_to_w, translate_w_to_l,
};
use fcimc::{classify, parse, Class, Error, FciSet, FinSet, Point, Segment, Signature, Term};

fn p(t: &str) -> Point {
    t.parse().unwrap()
}

fn s(t: &str) -> FinSet {
    t.parse().unwrap()
}

fn f(t: &str) -> FciSet {
    t.parse().unwrap()
}

fn wa(pairs: &[(&str, &str)]) -> Assignment<FinSet> {
    pairs.iter().map(|(k, v)| (k.to_string(), s(v))).collect()
}

fn la(pairs: &[(&str, &str)]) -> Assignment<FciSet> {
    pairs.iter().map(|(k, v)| (k.to_string(), f(v))).collect()
}

fn w(t: &str) -> fcimc::Formula {
    parse(t, Signature::W).unwrap()
}

fn l(t: &str) -> fcimc::Formula {
    parse(t, Signature::L).unwrap()
}

#[test]
fn points() {
    assert_eq!(Point::midpoint(&p("0"), &p("1")).unwrap(), p("1/2"));
    assert_eq!(Point::midpoint(&p("1/3"), &p("1/2")).unwrap(), p("5/12"));
    assert!(Point::midpoint(&p("2"), &p("2")).is_err());
    assert_eq!(p("7/2").above(), p("9/2"));
}

#[test]
fn finite_sets() {
    assert_eq!(s("{1,3}").union(&s("{3,5}")), s("{1,3,5}"));
    assert_eq!(s("{1,3}").intersect(&s("{3,5}")), s("{3}"));
    assert_eq!(s("{1,2,5}").rel_complement(&s("{2}")), s("{1,5}"));
    assert_eq!(s("{1/2, 3}").min_s(), s("{1/2}"));
    assert_eq!(s("{0,2,7}").max_s(), s("{7}"));
    assert_eq!(s("{1,2,5}").successor_in(&p("1")).unwrap(), Some(p("2")));
    assert_eq!(s("{1,2,5}").successor_in(&p("5")).unwrap(), None);
    assert_eq!(s("{0}").ips(&s("{}")), s("{}"));
    assert_eq!(s("{1,2,5}").ips(&s("{2,5}")), s("{1,2}"));
    assert_eq!(s("{0,1,3}").ips(&s("{1}")), s("{0}"));
}

#[test]
fn interval_unions() {
    let seg = |a: &str, b: &str| Piece::Segment(Segment::new(p(a), p(b)).unwrap());
    assert_eq!(FciSet::normalize([seg("1", "2"), seg("2", "3")]), f("[1,3]"));
    assert_eq!(FciSet::normalize([seg("0", "1"), seg("1/2", "3")]), f("[0,3]"));
    assert_eq!(
        FciSet::normalize([Piece::Ray(p("5")), seg("3", "4"), seg("6", "7")]),
        f("[3,4]+[5,*)")
    );
    assert_eq!(f("[0,2]+[3,*)").intersect_f(&f("[1,4]")), f("[1,2]+[3,4]"));
    assert!(f("[0,1]").intersect_f(&f("[2,3]")).is_empty());
    assert!(f("[1,*)").max_f().is_empty());
    assert_eq!(f("[1/2,2]+[3,4]").min_f(), f("{1/2}"));
    assert_eq!(f("[0,1]+[2,*)").left_pts(), s("{0,2}"));
    assert_eq!(f("[0,1]+[2,*)").right_pts(), s("{1}"));
    assert!(f("empty").is_bounded() && f("[0,5]").is_bounded());
    assert!(!f("[0,1]+[2,*)").is_bounded());
    assert!(!f("[1,2]+[4,*)").contains(&p("3")));
    assert!(f("[1,2]+[4,*)").contains(&p("100")));
    assert!(f("[1,2]").subseteq_f(&f("[0,3]")));
}

#[test]
fn witnesses_and_endpoints() {
    let d = FciSet::witness_d(&s("{1,2,5}"), &s("{2,5}"), &s("{1,2}")).unwrap();
    assert_eq!(d, f("[0,1]+{2}+[5,*)"));
    assert_eq!(
        FciSet::witness_d(&s("{0,1}"), &s("{0,1}"), &s("{0}")).unwrap(),
        f("{0}+[1,*)")
    );
    assert_eq!(
        FciSet::build_from_endpoints(&s("{0,3}"), &s("{1}")).unwrap(),
        f("[0,1]+[3,*)")
    );
    assert_eq!(
        FciSet::build_from_endpoints(&s("{2,5}"), &s("{3,6}")).unwrap(),
        f("[2,3]+[5,6]")
    );
    assert!(endpoint_pairing_holds(&s("{0,3}"), &s("{1}")));
    assert!(!endpoint_pairing_holds(&s("{}"), &s("{1}")));
}

#[test]
fn evaluation() {
    let y1 = wa(&[("Y", "{1}")]);
    assert_eq!(
        eval_term::<WStruct>(&Term::ips(Term::cup(Term::var("Y"), Term::cz()), Term::var("Y")), &y1)
            .unwrap(),
        s("{0}")
    );
    assert!(eval_default::<WStruct>(&w("cz sub ips(cup(X,cz),X)"), &wa(&[("X", "{2}")])).unwrap());
    assert!(!eval_default::<LStruct>(&l("l(X) = r(X)"), &la(&[("X", "[1,2]")])).unwrap());
    assert!(!eval_default::<WStruct>(&w("E Y. Y sub cap(X,bot) & cz sub Y"), &wa(&[("X", "{3}")]))
        .unwrap());
    assert_eq!(
        default_pool::<LStruct>(&la(&[("X", "[1,2]")])).points(),
        &s("{0, 1/2, 1, 3/2, 2, 3}")
    );
    assert_eq!(default_pool::<LStruct>(&la(&[])).points(), &s("{0, 1}"));
}

#[test]
fn formula_templates() {
    let d = delta_term(&Term::var("X"), &Term::var("Y"));
    assert_eq!(eval_term::<WStruct>(&d, &wa(&[("X", "{1,2}"), ("Y", "{2,3}")])).unwrap(), s("{1,3}"));

    let ips = phi_ips();
    let at = |a: &str, b: &str, c: &str| {
        let asg: Assignment<FciSet> = [("X", a), ("Y", b), ("Z", c)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), FciSet::embed_finset(&s(v))))
            .collect();
        eval_default::<LStruct>(&ips, &asg).unwrap()
    };
    assert!(at("{1,2,5}", "{2,5}", "{1,2}"));
    assert!(at("{}", "{1}", "{}"));
    assert!(!at("{1,2,5}", "{2,5}", "{1}"));

    let member = |z: &str| {
        eval_default::<WStruct>(&phi_in(), &wa(&[("X_l", "{1,3}"), ("X_r", "{2}"), ("Z", z)])).unwrap()
    };
    assert!(!member("{5/2}"));
    assert!(member("{7/2}"));

    let sub = wa(&[("X_l", "{1}"), ("X_r", "{2}"), ("Y_l", "{0}"), ("Y_r", "{3}")]);
    assert!(eval_default::<WStruct>(&phi_subseteq(), &sub).unwrap());

    let delta = delta_domain();
    assert!(eval_default::<WStruct>(&delta, &wa(&[("X_l", "{0,3}"), ("X_r", "{1}")])).unwrap());
    assert!(!eval_default::<WStruct>(&delta, &wa(&[("X_l", "{}"), ("X_r", "{1}")])).unwrap());
}

#[test]
fn negation_elimination() {
    let g = to_positive_existential(&w("!(X = bot)")).unwrap();
    assert_eq!(classify(&g), Class::PositiveExistential);
    assert!(eval_default::<WStruct>(&g, &wa(&[("X", "{1}")])).unwrap());
    assert!(!eval_default::<WStruct>(&g, &wa(&[("X", "{}")])).unwrap());
    assert_eq!(to_positive_existential(&w("X = cz")).unwrap(), w("X = cz"));
    assert!(matches!(
        to_positive_existential(&w("A Y. cap(Y,X) = Y")),
        Err(Error::Fragment(_))
    ));
}

#[test]
fn translations() {
    let g = translate_w_to_l(&w("cz sub ips(cup(X,cz),X)")).unwrap();
    assert!(classify(&g).is_existential());
    for (x, want) in [("{2}", true), ("{}", false)] {
        let a: Assignment<FciSet> = [("X".to_string(), FciSet::embed_finset(&s(x)))].into();
        assert_eq!(eval_default::<LStruct>(&g, &a).unwrap(), want);
    }
    assert!(translate_w_to_l(&w("A Y. Y = X")).is_err());

    let t = translate_l_to_w(&l("X = bot")).unwrap();
    let pair = &t.coords["X"];
    for (xl, xr, want) in [("{}", "{}", true), ("{0}", "{}", false), ("{1}", "{2}", false)] {
        let a = wa(&[(pair.left.as_str(), xl), (pair.right.as_str(), xr)]);
        assert_eq!(eval_default::<WStruct>(&t.formula, &a).unwrap(), want);
    }
}

#[test]
fn pipeline_examples() {
    let g = pipeline(&l("X = bot")).unwrap();
    assert!(classify(&g).is_existential());
    assert!(eval_default::<LStruct>(&g, &la(&[("X", "empty")])).unwrap());
    assert!(!eval_default::<LStruct>(&g, &la(&[("X", "[0,1]")])).unwrap());

    let f = l("l(X) = r(X) & !(X = bot)");
    let g = pipeline(&f).unwrap();
    let mut rng = fcimc::oracle::rng(11);
    for _ in 0..50 {
        let pts = fcimc::oracle::random_points(&mut rng, 5);
        let a: Assignment<FciSet> =
            [("X".to_string(), fcimc::oracle::random_fci(&mut rng, &pts, 3, true))].into();
        assert_eq!(
            eval_default::<LStruct>(&f, &a).unwrap(),
            eval_default::<LStruct>(&g, &a).unwrap(),
            "{a:?}"
        );
    }
    assert!(matches!(
        pipeline(&l("A Y. (Y sub X -> Y = X)")),
        Err(Error::Fragment(_))
    ));
}

#[test]
fn signature_errors() {
    assert!(matches!(parse("l(X) = ips(X,X)", Signature::L), Err(Error::Signature(_))));
    assert!(matches!(parse("l(X) = X", Signature::W), Err(Error::Signature(_))));
}
