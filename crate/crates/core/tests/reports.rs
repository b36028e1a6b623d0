use brim::verify::corpus::{generate_corpus, summarize, CorpusConfig, ItemOutcome};
use brim::verify::{report, verify_corpus, InvariantReport, ReportOptions};
use brim::{Gf, Ideal, Module, Session};

#[test]
fn reports_replay_from_json() {
    let s = Session::default();
    let cfg = CorpusConfig { size: 25, seed: 4, ..CorpusConfig::default() };
    for it in generate_corpus::<Gf>(&cfg, &s).unwrap() {
        let rep = report(&it.module, ReportOptions { seed: it.seed, limit_pmax: None }, &s).unwrap();
        let back: InvariantReport = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(back, rep);
        assert!(back.replays());
        if back.ic_status == "witness_not_closed" {
            let adj = back.len_r_adj.unwrap();
            assert_ne!(back.e_m, back.len_f_m + adj, "item {}", it.index);
        }
    }
}

#[test]
fn converse_of_identity_fails_for_m121() {
    let s = Session::default();
    let rep = report(&Module::<Gf>::family_mabc(1, 2, 1).unwrap(), ReportOptions::default(), &s).unwrap();
    assert!(rep.length_multiplicity_identity());
    assert_ne!(rep.ic_status, "certified");
}

#[test]
fn deterministic_across_runs() {
    let s = Session::default();
    let cfg = CorpusConfig { size: 15, seed: 9, hard: true, limit_pmax: Some(7), ..CorpusConfig::default() };
    let a = verify_corpus::<Gf>(&cfg, &s).unwrap();
    assert_eq!(a, verify_corpus::<Gf>(&cfg, &s).unwrap());
    assert_eq!(a.exit_code(), 0, "{}", a.to_text());
    assert!(a.items.iter().any(|i| i.kind == "dense"));
}

#[test]
fn tampered_reports_are_flagged() {
    let s = Session::default();
    let mm = Module::from_ideal(&Ideal::<Gf>::maximal());
    let mut rep = report(&mm.direct_sum(&mm), ReportOptions::default(), &s).unwrap();
    rep.e_m = 10;
    let sum = summarize(vec![ItemOutcome { index: 0, kind: "edited".into(), report: Some(rep), error: None }]);
    assert!(!sum.violations.is_empty());
    assert_eq!(sum.exit_code(), 1);
}
