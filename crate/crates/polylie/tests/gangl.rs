use polylie::gangl::*;

fn run(weight: usize) -> SuiteReport {
    let t = std::time::Instant::now();
    let rep = match gangl_suite(weight) {
        Ok(r) => r,
        Err(e) => panic!("weight {weight}: {e}"),
    };
    eprintln!("weight {weight}: {} steps in {:?}", rep.steps.len(), t.elapsed());
    rep
}

#[test]
fn weight_four_chain_passes() {
    let rep = run(4);
    assert!(rep.passed());
    assert!(rep.steps.iter().any(|s| s.step_id.contains("Li_{2;1,1}")));
}

#[test]
fn weight_six_chain_passes() {
    let rep = run(6);
    assert!(rep.passed());
}

#[test]
fn other_weights_are_rejected() {
    assert!(matches!(gangl_suite(5), Err(GanglError::Weight(5))));
}

fn entry(rep: &SuiteReport, label: &str) -> usize {
    rep.ledger.entries().iter().find(|e| e.label.starts_with(label)).map(|e| e.id).unwrap()
}

#[test]
fn claims_need_their_instances() {
    let rep = run(6);
    let qsq = parse_qs("Q(0,1,2,3)⊗S(0,1,3,4,5)⊗Q(0,1,5,6)").unwrap();
    assert!(!qsq.is_zero());
    assert!(!check_equiv("bare", &qsq, &rep.ledger, &[]).unwrap().holds);
    let d1 = entry(&rep, "D1");
    assert!(!check_equiv("d1 only", &qsq, &rep.ledger, &[Use::plain(d1)]).unwrap().holds);

    let t0 = parse_qs("[2,4,3,1]⊗[2,0,3,1]⊗[2,4,0,6,5]").unwrap();
    let gen = entry(&rep, "Q⊗S⊗Q for arbitrary");
    let tight = check_equiv("generic only", &t0, &rep.ledger, &[Use::new(gen, LabelMap::sending(&(0..13).collect::<Vec<_>>(), &[2, 4, 3, 1, 2, 4, 0, 6, 5, 2, 0, 3, 1]).unwrap())]);
    assert!(tight.is_err() || !tight.unwrap().holds);
}

#[test]
fn weight_four_needs_the_orbit() {
    let rep = run(4);
    let x = parse_qs("S(0,1,2,5,4)⊗Q(2,3,4,5)").unwrap();
    let rel = entry(&rep, "S⊗Q equals Q⊗S");
    assert!(!check_equiv("one", &x, &rep.ledger, &[Use::plain(rel)]).unwrap().holds);
}

#[test]
fn audit_is_reproducible() {
    let a = run(6);
    let b = run(6);
    assert_eq!(a.steps, b.steps);
    for s in &a.steps {
        assert!(s.verdict);
        assert_eq!(s.claim_hash.len(), 64);
        for u in &s.instances {
            assert!(u.entry < a.ledger.len());
            assert!(s.ledger_entries_used.contains(&u.entry));
        }
    }
}

#[test]
fn use_round_trips_through_text() {
    for s in ["3@(13)(46)", "0@[0,2,0,1,3,1,4,5,6]"] {
        let u: Use = s.parse().unwrap();
        let back: Use = u.to_string().parse().unwrap();
        assert_eq!(u, back);
    }
}

#[test]
fn zagier_configuration_holds_as_printed() {
    assert!(kummer_symbol().unwrap().is_zero());
    assert!(zagier_configuration_symbol().unwrap().is_zero());
}
