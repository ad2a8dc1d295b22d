// SPDX-License-Identifier: Apache-2.0
//! Acceptance run: one line per criterion, exit status 1 if any fails.

use std::time::{Duration, Instant};

use access::{symplectify, symplectify_structure, subsets_of_size, Subset};
use classical_protocols::{css_audit, spir_audit, CssProtocol, SpirProtocol};
use constructions::{
    construct_cqmmsp, construct_eammsp, construct_qqmmsp, mds_l78, mds_pp8, mutate_negative, search_bundle, LevelSource, SearchSpec,
};
use field_tower::{field_build, Fe, Field};
use mmsp::fixtures::{example1, example1_qq, example2, example2_amended, example3};
use mmsp::{a1_a2_agree, accepts_one, b1_b2_agree, classify, classify_verdict, rate, rejects_one, BundleClass, MmspBundle, RateKind};
use num_rational::Ratio;
use quantum_sim::{
    audit_qqss, audit_spir, audit_ss, backend_agreement_set, convert_flow5, flow5_agreement, lemma_l6_check, Channel, EaSim, QqSim, Scheme,
    SpirScheme,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symplinalg::{is_mds, MatGF};

const STATE_TOL: f64 = 1e-9;
const BACKEND_TOL: f64 = 1e-12;
const INFO_TOL: f64 = 1e-6;

type Outcome = Result<(bool, String), String>;

struct Fixture {
    name: String,
    bundle: MmspBundle,
}

fn fx(name: impl Into<String>, bundle: MmspBundle) -> Fixture {
    Fixture { name: name.into(), bundle }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn vectors(f: &Field, len: usize) -> Vec<Vec<Fe>> {
    let q = f.q();
    (0..q.pow(len as u32))
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = i % q;
                    i /= q;
                    f.elem(d).expect("digit")
                })
                .collect()
        })
        .collect()
}

fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (0..1u32 << n).map(Subset)
}

fn row_structure(b: &MmspBundle) -> Result<access::AccessStructure, String> {
    let fs = b.structure().map_err(err)?;
    Ok(if b.class == BundleClass::Plain { fs } else { symplectify_structure(&fs) })
}

// ---------------------------------------------------------------- fixtures

fn positives() -> Result<Vec<Fixture>, String> {
    let mut out = vec![
        fx("example1", example1()),
        fx("example1 qq", example1_qq()),
        fx("example2 amended", example2_amended()),
        fx("example3 p=3", example3(3)),
    ];
    let specs = [
        SearchSpec::css(2, 1, 2),
        SearchSpec::css(2, 1, 3),
        SearchSpec::css(3, 1, 3),
        SearchSpec::css(3, 2, 3),
        SearchSpec::ea(2, 1, 2, 1),
        SearchSpec::ea(2, 1, 2, 2),
        SearchSpec::ea(2, 1, 3, 1),
        SearchSpec::ea(2, 1, 3, 2),
        SearchSpec::ea(3, 1, 3, 1),
        SearchSpec::ea(3, 1, 3, 2),
        SearchSpec::ea(3, 2, 3, 2),
        SearchSpec::cq(2, 1, 2),
        SearchSpec::cq(2, 1, 3),
        SearchSpec::cq(3, 1, 3),
        SearchSpec::cq(3, 2, 3),
        SearchSpec::qq(2, 1, 2),
        SearchSpec::qq(2, 1, 3),
        SearchSpec::qq(3, 1, 3),
        SearchSpec::qq(3, 2, 3),
    ];
    for (i, s) in specs.iter().enumerate() {
        let name = format!("{:?}({},{},{}) y1={}", s.class, s.r, s.t, s.n, s.y1).to_lowercase();
        match search_bundle(3, s, 100 + i as u64, 4000).map_err(err)? {
            Some(b) => out.push(fx(name, b)),
            None => return Err(format!("search found no {name}")),
        }
    }
    Ok(out)
}

fn negatives(pos: &[Fixture]) -> Result<Vec<Fixture>, String> {
    let mut out = vec![fx("example2 printed", example2())];
    for (i, p) in pos.iter().enumerate() {
        if let Some(b) = mutate_negative(&p.bundle, 7 + i as u64, 500).map_err(err)? {
            out.push(fx(format!("{} mutated", p.name), b));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- 1

fn examples() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let budget = Duration::from_secs(1);

    let t = Instant::now();
    let v = classify(&example1()).map_err(err)?;
    let qq = mmsp::is_qqmds(&example1().g1, &example1().f).map_err(err)?;
    let slow = t.elapsed() > budget;
    ok &= v.ok() && qq && !slow;
    notes.push(format!("ex1 mmsp={} qqmds={}", v.ok(), qq));

    let t = Instant::now();
    let printed = classify(&example2()).map_err(err)?;
    let amended = classify_verdict(&example2_amended()).map_err(err)?;
    ok &= printed.ok() && t.elapsed() <= budget;
    let why = match &printed.mmsp.counterexample {
        Some(c) => format!(" ({c:?})"),
        None => String::new(),
    };
    notes.push(format!("ex2 printed mmsp={}{why}, amended mmsp={amended}", printed.ok()));

    let t = Instant::now();
    let b = example3(3);
    let (g, f, n) = (b.g(), b.f.clone(), b.n());
    let pairs = subsets_of_size(n, 2).map(|s| accepts_one(&g, &f, symplectify(s, n))).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let singles = subsets_of_size(n, 1).map(|s| rejects_one(&g, &f, symplectify(s, n))).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let q = f.field().q() as u32;
    // log|M| over the log-dimension of one player's share: one qudit each
    let per_share = Ratio::new(b.x() as i64, 1);
    let total = rate(RateKind::Eass, 2, 1, n).map_err(err)?;
    let realized = Ratio::new(b.x() as i64, n as i64);
    let ex3 = pairs.iter().all(|&x| x) && singles.iter().all(|&x| x) && per_share == Ratio::from(2) && total == realized;
    ok &= ex3 && t.elapsed() <= budget;
    notes.push(format!(
        "ex3 q={q} pairs accepted={} singletons rejected={} per-share rate={per_share} total rate={realized}",
        pairs.iter().all(|&x| x),
        singles.iter().all(|&x| x)
    ));
    Ok((ok, notes.join("; ")))
}

// ---------------------------------------------------------------- 2

#[derive(Default)]
struct Tally {
    compared: usize,
    mismatches: Vec<String>,
}

impl Tally {
    fn add(&mut self, name: &str, proto: &str, audit: bool, verdict: bool) {
        self.compared += 1;
        if audit != verdict {
            self.mismatches.push(format!("{proto} on {name}: audit {audit}, classify {verdict}"));
        }
    }
}

fn audit_all(fx: &Fixture, tally: &mut Tally, per: &mut std::collections::BTreeMap<&'static str, usize>) -> Result<(), String> {
    let b = &fx.bundle;
    let verdict = classify_verdict(b).map_err(err)?;
    let mut note = |proto: &'static str, audit: bool, tally: &mut Tally| {
        *per.entry(proto).or_default() += 1;
        tally.add(&fx.name, proto, audit, verdict);
    };
    if b.class != BundleClass::Qq {
        let fs = row_structure(b)?;
        let css = css_audit(&CssProtocol::new(b.g(), b.f.clone(), fs.clone()).map_err(err)?).map_err(err)?;
        note("CSS", css.secure, tally);
        let spir = spir_audit(&SpirProtocol::standard(b.g(), b.f.clone(), 2, fs).map_err(err)?).map_err(err)?;
        note("CSPIR", spir.secure, tally);
    }
    match b.class {
        BundleClass::Plain => {}
        BundleClass::Ea => {
            note("EASS", audit_ss(b, Scheme::Eass).map_err(err)?.secure, tally);
            note("EASPIR", audit_spir(b, SpirScheme::Easpir, 2).map_err(err)?.secure, tally);
        }
        BundleClass::Cq => {
            note("CQSS", audit_ss(b, Scheme::Cqss).map_err(err)?.secure, tally);
            note("CQSPIR", audit_spir(b, SpirScheme::Cqspir, 2).map_err(err)?.secure, tally);
        }
        BundleClass::Qq => note("QQSS", audit_qqss(b).map_err(err)?.secure, tally),
    }
    Ok(())
}

fn equivalence(pos: &[Fixture], neg: &[Fixture]) -> Outcome {
    let mut tally = Tally::default();
    let mut per = std::collections::BTreeMap::new();
    for f in pos.iter().chain(neg) {
        audit_all(f, &mut tally, &mut per).map_err(|e| format!("{}: {e}", f.name))?;
    }
    let counts: Vec<String> = per.iter().map(|(k, v)| format!("{k} {v}")).collect();
    let ok = pos.len() >= 20 && neg.len() >= 20 && tally.mismatches.is_empty();
    let mut detail = format!("{} positive, {} negative, {} comparisons ({})", pos.len(), neg.len(), tally.compared, counts.join(", "));
    if let Some(m) = tally.mismatches.first() {
        detail.push_str(&format!("; {} mismatches, first: {m}", tally.mismatches.len()));
    }
    Ok((ok, detail))
}

// ---------------------------------------------------------------- 3

fn lemma_conditions(fixtures: &[&Fixture]) -> Outcome {
    let mut checked = 0usize;
    let check = |g: &MatGF, f: &MatGF, checked: &mut usize| -> Result<Option<Subset>, String> {
        for s in all_subsets(g.rows()) {
            *checked += 1;
            if !a1_a2_agree(g, f, s).map_err(err)? || !b1_b2_agree(g, f, s).map_err(err)? {
                return Ok(Some(s));
            }
        }
        Ok(None)
    };
    for fx in fixtures {
        if let Some(s) = check(&fx.bundle.g(), &fx.bundle.f, &mut checked)? {
            return Ok((false, format!("{} disagrees on rows {s:?}", fx.name)));
        }
    }
    let fields = [field_build(2, 1, None), field_build(3, 1, None), field_build(5, 1, None), field_build(3, 2, None)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e55);
    let mut random = 0;
    for f in fields {
        let f = f.map_err(err)?;
        for _ in 0..100 {
            let m = MatGF::from_fn(&f, 6, 4, |_, _| f.random(&mut rng));
            let split = rng.gen_range(1..4);
            let (g, fm) = (m.col_range(0, split), m.col_range(split, 4));
            random += 1;
            if let Some(s) = check(&g, &fm, &mut checked)? {
                return Ok((false, format!("random 6x4 over F{} disagrees on rows {s:?}", f.q())));
            }
        }
    }
    Ok((true, format!("{} fixtures + {random} random 6x4 matrices, {checked} (G,F,subset) cases", fixtures.len())))
}

// ---------------------------------------------------------------- 4

struct Built {
    kind: RateKind,
    r: usize,
    t: usize,
    n: usize,
    bundle: MmspBundle,
}

fn construction_theorems(built: &mut Vec<Built>) -> Outcome {
    let mut count = 0;
    let mut checks = 0;
    let mut fail = None;
    let mut keep = |kind, r, t, n, c: constructions::Construction| -> Result<(), String> {
        count += 1;
        checks += c.report.checks.len();
        let verdict = classify_verdict(&c.bundle).map_err(err)?;
        if (!c.report.all_ok() || !verdict) && fail.is_none() {
            fail = Some(format!("{kind:?} ({r},{t},{n}): {}", c.report.first_failure().unwrap_or("classify")));
        }
        built.push(Built { kind, r, t, n, bundle: c.bundle });
        Ok(())
    };
    for p in [2, 3] {
        for n in 1..=5usize {
            for r in 1..=n {
                for t in 1..r {
                    for y1 in 1..=(2 * t).min(n) {
                        keep(RateKind::Eass, r, t, n, construct_eammsp(r, t, n, y1, p).map_err(err)?)?;
                    }
                    if 2 * r > n {
                        keep(RateKind::Cqss, r, t, n, construct_cqmmsp(r, t, n, p).map_err(err)?)?;
                        keep(RateKind::Qqss, r, t, n, construct_qqmmsp(r, t, n, p).map_err(err)?)?;
                    }
                }
            }
        }
    }
    // randomized staircase MDS suites
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let mut suites = 0;
    for i in 0..20u64 {
        let r_rows = rng.gen_range(3..=6);
        let l = rng.gen_range(1..r_rows - 1);
        let mut src = LevelSource::auto(3, r_rows + 1, 0x5 + i).map_err(err)?;
        let m = mds_pp8(l, r_rows, &mut src).map_err(err)?;
        let k = rng.gen_range(l + 1..r_rows);
        let mut src = LevelSource::auto(3, r_rows + k, 0x50 + i).map_err(err)?;
        let m2 = mds_l78(l, k, r_rows, &mut src).map_err(err)?;
        suites += 2;
        if (!is_mds(&m).map_err(err)? || !is_mds(&m2).map_err(err)?) && fail.is_none() {
            fail = Some(format!("staircase case l={l} k={k} rows={r_rows} is not MDS"));
        }
    }
    let detail = format!("{count} bundles over p = 2 and 3, {checks} invariant checks, {suites} staircase MDS cases");
    Ok(match fail {
        None => (true, detail),
        Some(f) => (false, format!("{detail}; first failure {f}")),
    })
}

// ---------------------------------------------------------------- 5

fn qq_lemmas(qq: &[&Fixture]) -> Outcome {
    let mut worst_fid: f64 = 1.0;
    let mut worst_gap: f64 = 0.0;
    let mut channels = 0;
    for fx in qq {
        let sim = QqSim::new(&fx.bundle).map_err(err)?;
        let fs = fx.bundle.structure().map_err(err)?;
        for a in fs.accept_sets() {
            worst_fid = worst_fid.min(sim.round_trip(a).map_err(err)?.choi_fidelity().map_err(err)?);
        }
        for a in all_subsets(fx.bundle.n()).filter(|s| !s.is_empty()) {
            let (i_dc, i_ch) = lemma_l6_check(&sim.channel(a).map_err(err)?, sim.sim.q, sim.xp).map_err(err)?;
            worst_gap = worst_gap.max((i_dc - i_ch).abs());
            channels += 1;
        }
    }
    for d in [2, 3, 5] {
        let q = d as u32;
        for ch in [Channel::<f64>::identity(d), Channel::<f64>::depolarizing(d)] {
            let (i_dc, i_ch) = lemma_l6_check(&ch, q, 1).map_err(err)?;
            worst_gap = worst_gap.max((i_dc - i_ch).abs());
            channels += 1;
        }
    }
    let ok = worst_fid >= 1.0 - STATE_TOL && worst_gap <= INFO_TOL;
    Ok((ok, format!("{} QQ fixtures, min Choi fidelity {worst_fid:.12}, max |I_dc - I_ch| {worst_gap:.2e} over {channels} channels", qq.len())))
}

// ---------------------------------------------------------------- 6

fn backends(fixtures: &[&Fixture]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for fx in fixtures {
        let b = &fx.bundle;
        let (sb, scheme) = match b.class {
            BundleClass::Ea => (b.clone(), Scheme::Eass),
            BundleClass::Cq => (b.clone(), Scheme::Cqss),
            BundleClass::Qq => (b.with_class(BundleClass::Ea), Scheme::Eass),
            BundleClass::Plain => continue,
        };
        let sim = EaSim::new(&sb, scheme).map_err(|e| format!("{}: {e}", fx.name))?;
        let f = b.f.field();
        let msgs = vectors(f, b.x());
        let rands = vectors(f, b.y2());
        for a in all_subsets(b.n()).filter(|s| !s.is_empty()) {
            worst = worst.max(backend_agreement_set(&sim, a, &msgs, &rands).map_err(err)?);
            cases += msgs.len() * rands.len();
        }
    }
    Ok((worst <= BACKEND_TOL, format!("{} fixtures, {cases} (set, m, u) cases, largest gap {worst:.2e}", fixtures.len())))
}

// ---------------------------------------------------------------- 7

fn flow5(ea: &[&Fixture]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut sampled = Vec::new();
    let mut failed = Vec::new();
    for fx in ea {
        let conv = convert_flow5(&fx.bundle, SpirScheme::Easpir).map_err(err)?;
        worst = worst.max(flow5_agreement(&conv).map_err(err)?);
        if !conv.exhaustive {
            sampled.push(fx.name.clone());
        }
        if !conv.audit().map_err(err)?.secure {
            failed.push(fx.name.clone());
        }
    }
    let ok = worst <= BACKEND_TOL && failed.is_empty() && sampled.is_empty();
    let mut detail = format!("{} EASPIR fixtures, largest gap {worst:.2e}", ea.len());
    if !failed.is_empty() {
        detail.push_str(&format!("; EASS audit fails on {}", failed.join(", ")));
    }
    if !sampled.is_empty() {
        detail.push_str(&format!("; query block sampled on {}", sampled.join(", ")));
    }
    Ok((ok, detail))
}

// ---------------------------------------------------------------- 8

fn expected(kind: RateKind, r: i64, t: i64, n: i64) -> Option<Ratio<i64>> {
    let num = match kind {
        RateKind::Css => r - t,
        RateKind::Cqss if t > 0 && 2 * r >= n => 2 * r - (2 * t).max(n),
        RateKind::Qqss if 2 * r > n => r - t.max(n - r),
        RateKind::Eass | RateKind::Easpir if t > 0 => 2 * (r - t),
        RateKind::Cqspir if t > 0 && 2 * t >= n => 2 * (r - t),
        _ => return None,
    };
    Some(Ratio::new(num, n))
}

/// log|M| / log D in units of log q: message symbols over player qudits.
fn realized(kind: RateKind, b: &MmspBundle) -> Ratio<i64> {
    let msg = match kind {
        RateKind::Qqss => b.x() / 2,
        _ => b.x(),
    };
    Ratio::new(msg as i64, b.n() as i64)
}

fn rates(built: &[Built], plain: &[&Fixture]) -> Outcome {
    let kinds = [RateKind::Css, RateKind::Cqss, RateKind::Qqss, RateKind::Eass, RateKind::Cqspir, RateKind::Easpir];
    let mut closed = 0;
    for n in 1..=6usize {
        for r in 1..=n {
            for t in 0..r {
                for kind in kinds {
                    let want = expected(kind, r as i64, t as i64, n as i64);
                    let got = rate(kind, r, t, n).ok();
                    if want != got {
                        return Ok((false, format!("{kind:?} ({r},{t},{n}): rate gives {got:?}, closed form {want:?}")));
                    }
                    closed += want.is_some() as usize;
                }
            }
        }
    }
    let mut realized_n = 0;
    let mut check = |kind: RateKind, r: usize, t: usize, b: &MmspBundle| -> Result<Option<String>, String> {
        let want = rate(kind, r, t, b.n()).map_err(err)?;
        let got = realized(kind, b);
        realized_n += 1;
        Ok((want != got).then(|| format!("{kind:?} ({r},{t},{}): realized {got}, formula {want}", b.n())))
    };
    for c in built {
        let mut kinds = vec![c.kind];
        if c.kind == RateKind::Eass {
            kinds.push(RateKind::Easpir);
        }
        if c.kind == RateKind::Cqss && 2 * c.t >= c.n {
            kinds.push(RateKind::Cqspir);
        }
        for k in kinds {
            if let Some(bad) = check(k, c.r, c.t, &c.bundle)? {
                return Ok((false, bad));
            }
        }
    }
    for fx in plain {
        let p = &fx.bundle.params;
        if let Some(bad) = check(RateKind::Css, p.r.unwrap_or(0), p.t.unwrap_or(0), &fx.bundle)? {
            return Ok((false, bad));
        }
    }
    Ok((true, format!("{closed} admissible closed forms for n <= 6, {realized_n} realized rates equal")))
}

// ---------------------------------------------------------------- driver

struct Line {
    id: usize,
    name: &'static str,
    tol: &'static str,
    budget: Duration,
}

fn report(line: &Line, outcome: Outcome, took: Duration) -> bool {
    let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let ok = ok && took <= line.budget;
    println!(
        "criterion {} {}: {} [{}; {:.1}s of {}s] {}",
        line.id,
        if ok { "PASS" } else { "FAIL" },
        line.name,
        line.tol,
        took.as_secs_f64(),
        line.budget.as_secs(),
        detail
    );
    ok
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn main() {
    let lines = [
        Line { id: 1, name: "worked examples", tol: "exact", budget: Duration::from_secs(3) },
        Line { id: 2, name: "audit verdict = classify", tol: "exact, states 1e-9", budget: Duration::from_secs(600) },
        Line { id: 3, name: "(A1)<=>(A2), (B1)<=>(B2)", tol: "exact", budget: Duration::from_secs(30) },
        Line { id: 4, name: "constructions", tol: "exact", budget: Duration::from_secs(300) },
        Line { id: 5, name: "recovery and dense coding", tol: "fidelity 1e-9, information 1e-6", budget: Duration::from_secs(120) },
        Line { id: 6, name: "dense = symplectic track", tol: "1e-12", budget: Duration::from_secs(120) },
        Line { id: 7, name: "SPIR to sharing conversion", tol: "1e-12", budget: Duration::from_secs(60) },
        Line { id: 8, name: "rates", tol: "exact rationals", budget: Duration::from_secs(10) },
    ];
    let mut all = true;

    let (out, took) = timed(examples);
    all &= report(&lines[0], out, took);

    let (fixtures, fix_time) = timed(|| positives().and_then(|p| negatives(&p).map(|n| (p, n))));
    let (pos, neg) = match fixtures {
        Ok(v) => v,
        Err(e) => {
            for line in &lines[1..] {
                report(line, Err(format!("fixtures: {e}")), Duration::ZERO);
            }
            std::process::exit(1);
        }
    };
    let (out, took) = timed(|| equivalence(&pos, &neg));
    all &= report(&lines[1], out, took + fix_time);

    let every: Vec<&Fixture> = pos.iter().chain(&neg).collect();
    let (out, took) = timed(|| lemma_conditions(&every));
    all &= report(&lines[2], out, took);

    let mut built = Vec::new();
    let (out, took) = timed(|| construction_theorems(&mut built));
    all &= report(&lines[3], out, took);

    let qq: Vec<&Fixture> = pos.iter().filter(|f| f.bundle.class == BundleClass::Qq).collect();
    let (out, took) = timed(|| qq_lemmas(&qq));
    all &= report(&lines[4], out, took);

    let (out, took) = timed(|| backends(&every));
    all &= report(&lines[5], out, took);

    let ea: Vec<&Fixture> = pos.iter().filter(|f| f.bundle.class == BundleClass::Ea).collect();
    let (out, took) = timed(|| flow5(&ea));
    all &= report(&lines[6], out, took);

    let plain: Vec<&Fixture> = pos.iter().filter(|f| f.bundle.class == BundleClass::Plain).collect();
    let (out, took) = timed(|| rates(&built, &plain));
    all &= report(&lines[7], out, took);

    if !all {
        std::process::exit(1);
    }
}
