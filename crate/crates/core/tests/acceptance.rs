//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use cpnet_core::classes::{
    enumerate_class, enumerate_nets, kz_lower_bound, rtd, separable_class_over_sep, structural_report, td, td_class,
    vcd, Budget, ConceptClass, StructuralReport,
};
use cpnet_core::generate::random_tree;
use cpnet_core::graph::is_consistent;
use cpnet_core::learners::{
    learn_kbounded_complete, learn_kbounded_incomplete, learn_tree_complete, learn_tree_incomplete,
    learn_with_corruption, LearnResult, Strategy,
};
use cpnet_core::oracles::{hopeless_corruption_set, sample_corruption_set, CorruptionMode, OracleSession};
use cpnet_core::teaching::{
    find_conflict_pair, teaching_set_incomplete, teaching_set_maximal, teaching_set_universal, verify_teaching_set,
};
use cpnet_core::universal::{construct_minimal, UniversalSet};
use cpnet_core::{instance_space, max_size, ClassSpec, CpNet};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    ensure(got == want, || format!("{what}: got {got:?}, want {want:?}"))
}

fn e(err: cpnet_core::Error) -> String {
    err.to_string()
}

fn class(spec: &ClassSpec) -> Result<ConceptClass, String> {
    enumerate_class(spec).map_err(e)
}

fn dims(c: &ConceptClass) -> Result<(usize, usize, usize), String> {
    let b = Budget::default();
    Ok((vcd(c, b).map_err(e)?, td_class(c, b).map_err(e)?, rtd(c, b).map_err(e)?))
}

fn complete_dimensions() -> Check {
    let spec = ClassSpec::complete(3, 2, 2).map_err(e)?;
    let (v, t, r) = dims(&class(&spec)?)?;
    eq("vcd", v, (1 << 3) - 1)?;
    eq("rtd", r, max_size(&spec) as usize)?;
    eq("td", t, 3 * (1 << 2))?;
    let (v, t, r) = dims(&class(&ClassSpec::complete(3, 2, 0).map_err(e)?)?)?;
    eq("separable (vcd, td, rtd)", (v, t, r), (3, 3, 3))
}

fn incomplete_dimensions() -> Check {
    for k in 0..2 {
        let c = dims(&class(&ClassSpec::complete(2, 2, k).map_err(e)?)?)?;
        let i = dims(&class(&ClassSpec::incomplete(2, 2, k).map_err(e)?)?)?;
        eq(&format!("vcd at k={k}"), i.0, c.0)?;
        if k == 0 {
            eq("td at k=0", i.1, 2 * 2)?;
        }
    }
    Ok(())
}

fn worked_teaching_dimensions() -> Check {
    let c = class(&ClassSpec::complete(3, 2, 2).map_err(e)?)?;
    for (name, net, want) in [("full chain", full_chain(), 7), ("fork", fork(), 9), ("single edge", single_edge(), 10)] {
        let pos = c.position_of_net(&net).ok_or_else(|| format!("{name} not in class"))?;
        eq(name, td(&c, pos, Budget::default()).map_err(e)?, want)?;
    }
    Ok(())
}

fn sweep(
    spec: &ClassSpec,
    budget: impl Fn(&CpNet) -> usize,
    run: impl Fn(&mut OracleSession) -> cpnet_core::Result<LearnResult>,
) -> Result<usize, String> {
    let (_, nets) = enumerate_nets(spec, 1_000_000_000).map_err(e)?;
    for (net, _) in &nets {
        let mut s = OracleSession::perfect(net.clone());
        let r = run(&mut s).map_err(|err| format!("{net:?}: {err}"))?;
        ensure(same_concept(&r.net, net), || format!("wrong net for {net:?}"))?;
        ensure(r.queries_used <= budget(net), || format!("{} queries for {net:?}", r.queries_used))?;
    }
    Ok(nets.len())
}

fn minimal(z: usize, k: usize) -> Result<UniversalSet, String> {
    construct_minimal(2, z, k, 1_000_000_000).map_err(e)
}

fn learner_sweeps() -> Check {
    let log = |n: usize| ceil_log2(n);
    let s = ClassSpec::complete(3, 2, 1).map_err(e)?;
    sweep(&s, |t| 2 * 3 + t.edge_count() * log(3), |o| learn_tree_complete(o, &s))?;
    for n in 1..=3 {
        for k in 0..n {
            let s = ClassSpec::complete(n, 2, k).map_err(e)?;
            let u = minimal(n - 1, k)?;
            let size = u.len();
            sweep(&s, |t| n * size + t.edge_count() * log(n), |o| learn_kbounded_complete(o, &s, &u))?;
        }
    }
    let s = ClassSpec::complete(4, 2, 2).map_err(e)?;
    let u = four_vector_set();
    sweep(&s, |t| 4 * 4 + t.edge_count() * log(4), |o| learn_kbounded_complete(o, &s, &u))?;
    for k in 0..2 {
        let s = ClassSpec::incomplete(2, 2, k).map_err(e)?;
        let u = minimal(1, k)?;
        let size = u.len();
        sweep(&s, |t| 2 * 2 * size + 2 * t.edge_count() * log(2), |o| learn_kbounded_incomplete(o, &s, &u))?;
    }
    let s = ClassSpec::incomplete(2, 2, 1).map_err(e)?;
    sweep(&s, |t| 4 * 2 + 2 * t.edge_count() * log(2), |o| learn_tree_incomplete(o, &s))?;
    Ok(())
}

fn corruption_robustness() -> Check {
    let spec = ClassSpec::complete(7, 2, 1).map_err(e)?;
    for (mode, strategy, bound) in
        [(CorruptionMode::MaliciousBound, Strategy::Mal, 7 / 2 - 1 - 1), (CorruptionMode::LimitedBound, Strategy::Lim, 7 - 2 - 2)]
    {
        for seed in 0..100u64 {
            let (l, cert) = sample_corruption_set(&spec, mode, seed).map_err(e)?;
            ensure(cert <= bound, || format!("{mode:?} seed {seed}: certificate {cert}"))?;
            let target = random_tree(7, 2, &mut ChaCha8Rng::seed_from_u64(1000 + seed)).map_err(e)?;
            let mut s = match mode {
                CorruptionMode::MaliciousBound => OracleSession::malicious(target.clone(), l),
                CorruptionMode::LimitedBound => OracleSession::limited(target.clone(), l),
            };
            let r = learn_with_corruption(&mut s, &spec, strategy, None).map_err(|err| format!("{mode:?} seed {seed}: {err}"))?;
            ensure(same_concept(&r.net, &target), || format!("{mode:?} seed {seed}: wrong net"))?;
        }
    }
    let (l, a, b) = hopeless_corruption_set(&spec, 6, &[1]).map_err(e)?;
    eq("hopeless |L|", l.len(), 1 << (7 - 1 - 1))?;
    ensure(!same_concept(&a, &b), || "hopeless targets coincide".into())?;
    let transcript = |t: &CpNet| {
        let mut s = OracleSession::limited(t.clone(), l.clone());
        let out = learn_with_corruption(&mut s, &spec, Strategy::Lim, None).map(|r| r.net);
        let answers: Vec<_> = instance_space(&spec, false).iter().map(|x| s.answer(x)).collect();
        (out, s.log().to_vec(), answers)
    };
    let (ta, tb) = (transcript(&a), transcript(&b));
    eq("hopeless learner output", &ta.0, &tb.0)?;
    eq("hopeless transcripts", &ta.1, &tb.1)?;
    eq("hopeless answers", &ta.2, &tb.2)
}

fn appendix_audits() -> Check {
    let bound = kz_lower_bound(7, 6, 21).map_err(e)?;
    eq("kz bound", bound, Ratio::new(357, 2))?;
    ensure(bound > Ratio::from_integer(127), || "kz bound does not exceed 2^7 - 1".into())?;
    let all = StructuralReport { is_maximum: true, is_maximal: true, is_intersection_closed: true, is_extremal: true };
    let none = StructuralReport { is_maximum: false, is_maximal: false, is_intersection_closed: false, is_extremal: false };
    let sep = separable_class_over_sep(3, 2).map_err(e)?;
    eq("separable report", structural_report(&sep, Budget::default()).map_err(e)?, all)?;
    let tree = class(&ClassSpec::complete(2, 2, 1).map_err(e)?)?;
    eq("tree report", structural_report(&tree, Budget::default()).map_err(e)?, none)
}

fn property_suites() -> Check {
    let mut nets = Vec::new();
    for spec in [ClassSpec::complete(3, 2, 2), ClassSpec::complete(2, 3, 1), ClassSpec::incomplete(2, 2, 1)] {
        let spec = spec.map_err(e)?;
        let (_, found) = enumerate_nets(&spec, 1_000_000_000).map_err(e)?;
        nets.extend(found.into_iter().map(|(n, _)| n));
    }
    for net in &nets {
        if net.is_complete() {
            for x in instance_space(net.spec(), false) {
                ensure(net.evaluate(&x) != net.evaluate(&x.reversed()), || format!("{x} not complementary in {net:?}"))?;
            }
        }
        ensure(is_consistent(net).map_err(e)?, || format!("inconsistent acyclic net {net:?}"))?;
        for child in 0..net.n() {
            for parent in (0..net.n()).filter(|&p| p != child) {
                let is_parent = net.parents(child).contains(&parent);
                ensure(find_conflict_pair(net, child, parent).is_some() == is_parent, || {
                    format!("conflict pair for {parent} → {child} in {net:?}")
                })?;
            }
        }
    }
    let spec = ClassSpec::complete(3, 2, 2).map_err(e)?;
    let c = class(&spec)?;
    let u = minimal(2, 2)?;
    for concept in c.concepts() {
        let net = concept.net.as_ref().ok_or("concept without net")?;
        let t = teaching_set_universal(net, &spec, &u).map_err(e)?;
        ensure(verify_teaching_set(&t, &c), || format!("universal teaching set fails for {net:?}"))?;
        if cpnet_core::model::is_maximal_in_class(net) {
            let t = teaching_set_maximal(net, &spec).map_err(e)?;
            ensure(verify_teaching_set(&t, &c), || format!("maximal teaching set fails for {net:?}"))?;
        }
    }
    let spec = ClassSpec::incomplete(2, 2, 1).map_err(e)?;
    let c = class(&spec)?;
    let u = minimal(1, 1)?;
    for concept in c.concepts() {
        let net = concept.net.as_ref().ok_or("concept without net")?;
        let t = teaching_set_incomplete(net, &spec, &u).map_err(e)?;
        ensure(verify_teaching_set(&t, &c), || format!("incomplete teaching set fails for {net:?}"))?;
    }
    for spec in [ClassSpec::complete(3, 2, 2), ClassSpec::complete(3, 2, 1), ClassSpec::complete(2, 3, 1)] {
        let c = class(&spec.map_err(e)?)?;
        let full: u128 = if c.width() == 128 { u128::MAX } else { (1 << c.width()) - 1 };
        ensure(c.labels().iter().all(|&l| c.contains(!l & full)), || "class not closed under complement".into())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("complete class dimensions at n=3", complete_dimensions),
        ("incomplete class dimensions at n=2", incomplete_dimensions),
        ("teaching dimension of the three worked nets", worked_teaching_dimensions),
        ("learner exactness sweeps", learner_sweeps),
        ("corruption robustness", corruption_robustness),
        ("bound and structure audits", appendix_audits),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  {name} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.1}s): {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
