//! One line per acceptance criterion; exits nonzero if any is red.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use nichols::braiding::{total_degree, BraidedSpace, Degree};
use nichols::cartan::{self, CartanDatum};
use nichols::cli::{jacobi_check, kernel_check, JobConfig};
use nichols::freealg::Flavor;
use nichols::liealg::{self, LieSpan, Status};
use nichols::nichols::{Height, NicholsBasis, SuperLetters};
use nichols::words::format_word_n;
use nichols::CycScalar;

type Outcome = Result<String, String>;

fn configs() -> Vec<JobConfig> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut paths: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths.iter().map(|p| JobConfig::load(p).unwrap()).collect()
}

fn build(m: u32, q: &[&[&str]], cutoff: u32) -> (NicholsBasis, SuperLetters) {
    let rows: Vec<Vec<&str>> = q.iter().map(|r| r.to_vec()).collect();
    let space = Arc::new(BraidedSpace::parse(m, &rows).unwrap());
    let basis = NicholsBasis::build(&space, cutoff).unwrap();
    let letters = SuperLetters::compute(&basis).unwrap();
    (basis, letters)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion1() -> Outcome {
    let (basis, letters) = build(6, &[&["z^2", "-z^2"], &["1", "-1"]], 12);
    ensure(basis.dimension() == Some(36), || format!("dim B = {:?}", basis.dimension()))?;
    let mut words: Vec<String> = letters.records.iter().map(|r| format_word_n(&r.word, 2)).collect();
    words.sort();
    ensure(words == ["1", "112", "12", "2"], || format!("D = {words:?}"))?;
    // listed in decreasing lex order: 2, 12, 112, 1
    let mut recs: Vec<_> = letters.records.iter().collect();
    recs.sort_by(|a, b| b.word.cmp(&a.word));
    let orders: Vec<Option<u32>> = recs.iter().map(|r| r.ord).collect();
    ensure(orders == [Some(2), Some(3), Some(2), Some(3)], || format!("orders {orders:?}"))?;
    let span = LieSpan::closure(&basis, Flavor::Std).unwrap();
    ensure(span.stabilized && span.dim() == 35, || format!("dim L = {}", span.dim_label()))?;
    let (ds, _) = liealg::direct_sum(&basis, &span).unwrap();
    ensure(ds.holds == Some(true), || "B(V) ≠ F ⊕ L(V)".into())?;
    Ok("dim B = 36, D = {1,2,12,112}, orders (2,3,2,3), dim L = 35, B = F ⊕ L".into())
}

fn criterion2() -> Outcome {
    for n in 2..=12u32 {
        let (basis, letters) = build(n, &[&["z"]], n + 1);
        let h = basis.hilbert();
        ensure(h == vec![1; n as usize], || format!("N={n}: hilbert {h:?}"))?;
        ensure(letters.records.len() == 1 && letters.records[0].word == [1], || format!("N={n}: D"))?;
        ensure(letters.records[0].height == Height::Finite { value: n }, || {
            format!("N={n}: height {:?}", letters.records[0].height)
        })?;
        let span = LieSpan::closure(&basis, Flavor::Std).unwrap();
        ensure(span.stabilized && span.dim() == n as usize - 1, || {
            format!("N={n}: dim L {}", span.dim())
        })?;
    }
    Ok("N = 2..12: hilbert all ones of length N, D = {1}, height N, dim L = N-1".into())
}

/// Restricted monomial counts per Zⁿ-degree, up to total degree `top`.
fn monomial_counts(n: usize, letters: &SuperLetters, top: u32) -> BTreeMap<Degree, u64> {
    let mut series: BTreeMap<Degree, u64> = BTreeMap::new();
    series.insert(vec![0; n], 1);
    for r in &letters.records {
        let step = total_degree(&r.degree);
        let h = match r.height {
            Height::Finite { value } => value,
            _ => top / step + 1,
        };
        let mut next: BTreeMap<Degree, u64> = BTreeMap::new();
        for (d, c) in &series {
            for e in 0..h {
                let nd: Degree = d.iter().zip(&r.degree).map(|(a, b)| a + e * b).collect();
                if total_degree(&nd) > top {
                    break;
                }
                *next.entry(nd).or_default() += c;
            }
        }
        series = next;
    }
    series
}

fn criterion3(configs: &[JobConfig]) -> Outcome {
    let ranks: Vec<usize> = configs.iter().map(|c| c.n).collect();
    ensure(configs.len() >= 8, || format!("{} configs", configs.len()))?;
    ensure(ranks.contains(&1) && ranks.contains(&2) && ranks.contains(&3), || {
        "ranks 1-3 not all shipped".into()
    })?;
    ensure(configs.iter().all(|c| c.m <= 12), || "M > 12".into())?;
    let mut degrees = 0;
    for c in configs {
        let basis = NicholsBasis::build(&c.space, c.cutoff).unwrap();
        let letters = SuperLetters::compute(&basis).unwrap();
        let top = basis.top_degree().unwrap_or(c.cutoff);
        let counts = monomial_counts(c.n, &letters, top);
        for (d, block) in basis.blocks() {
            let expect = counts.get(d).copied().unwrap_or(0);
            ensure(expect == block.dim() as u64, || {
                format!("{}: degree {d:?} pbw {expect} vs {}", c.name, block.dim())
            })?;
            degrees += 1;
        }
        for (d, x) in &counts {
            ensure(*x == 0 || basis.block_dim(d) as u64 == *x, || {
                format!("{}: degree {d:?} has no block", c.name)
            })?;
        }
    }
    Ok(format!("{} configs, {degrees} degrees agree", configs.len()))
}

fn criterion4(configs: &[JobConfig]) -> Outcome {
    let mut n = 0;
    for c in configs {
        let basis = NicholsBasis::build(&c.space, c.cutoff).unwrap();
        let r = kernel_check(&c.space, &basis, 8).unwrap();
        ensure(r.status == Status::Pass, || {
            format!("{}: {} {}", c.name, r.detail, r.witness.clone().unwrap_or_default())
        })?;
        n += 1;
    }
    Ok(format!("ker S_m = radical = B(V) kernel on {n} configs through total degree 8"))
}

fn criterion5() -> Outcome {
    let r = liealg::nilpotency_sweep(12, 4).unwrap();
    ensure(r.status == Status::Pass, || format!("{} {:?}", r.detail, r.witness))?;
    Ok(r.detail)
}

fn criterion6() -> Outcome {
    let (basis, _) = build(6, &[&["z^2", "-z^2"], &["1", "-1"]], 4);
    let a3 = Arc::new(BraidedSpace::parse(3, &[vec!["z", "z", "1"], vec!["1", "z", "z^2"], vec!["z", "1", "-1"]]).unwrap());
    for (space, seed) in [(basis.space().clone(), 50u64), (a3, 3)] {
        let r = jacobi_check(&space, seed, 200);
        ensure(r.status == Status::Pass, || format!("{} {:?}", r.detail, r.witness))?;
    }
    let mut recursions = 0;
    let mut flat = 0;
    for m in 2..=6u32 {
        let z = |e: u32| CycScalar::zeta_pow(m, e as i64);
        let minus = CycScalar::from_int(m, -1);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let aux = liealg::pair_space(m, &z(a), &z(b), &z(c), &minus);
                    for k in 1..=3 {
                        liealg::power_bracket_identities(&aux, k)
                            .map_err(|e| format!("power bracket identities M={m} ({a},{b},{c}): {e}"))?;
                        recursions += 1;
                    }
                }
                let aux = liealg::pair_space(m, &CycScalar::one(m), &z(a), &z(b), &minus);
                for k in 1..=4 {
                    liealg::flat_power_identities(&aux, k).map_err(|e| format!("flat power identities M={m} ({a},{b}): {e}"))?;
                    flat += 1;
                }
            }
        }
    }
    Ok(format!(
        "jacobi 2×200 triples; recursion + determinant {recursions} cases (k ≤ 3); flat recursion {flat} cases (k ≤ 4)"
    ))
}

fn criterion7() -> Outcome {
    let mut notes = Vec::new();
    for (n, zz, cutoff) in [(3u32, "z^2", 10u32), (5, "z^4", 17)] {
        let (basis, letters) = build(n, &[&["z", zz], &["1", "z"]], cutoff);
        let space = basis.space().clone();
        ensure(basis.dimension() == Some((n * n * n) as usize), || {
            format!("N={n}: dim B {:?}", basis.dimension())
        })?;
        let k = kernel_check(&space, &basis, 8).unwrap();
        ensure(k.status == Status::Pass, || format!("N={n}: kernels {}", k.detail))?;
        let datum = CartanDatum::of(&space).ok_or("no Cartan datum")?;
        ensure(datum.type_label() == "A2", || datum.type_label())?;
        let pres = cartan::presentation(&space, &datum, &letters);
        for r in pres.verify(&basis, &letters).unwrap() {
            ensure(r.status == Status::Pass, || format!("N={n}: {} {}", r.name, r.detail))?;
        }
        ensure(pres.serre.len() == 2 && pres.powers.len() == 3, || "relation count".into())?;
        let u = cartan::uniqueness_check(&datum, &letters, cutoff);
        ensure(u.status == Status::Pass, || u.detail.clone())?;
        ensure(cartan::orthogonal_pairs(&space, &letters).is_empty(), || {
            "orthogonal pairs on A2".into()
        })?;
        let span = LieSpan::closure(&basis, Flavor::Std).unwrap();
        let (rep, check) = cartan::cartan_bound(&space, &datum, &letters, &span);
        let rep = rep.ok_or_else(|| check.detail.clone())?;
        let expect = (n as i64 - 1).pow(3) + (n as i64 / 2 - 1) * 3;
        ensure(rep.bound == expect && check.status == Status::Pass, || {
            format!("N={n}: bound {} dim L {}", rep.bound, rep.dim_l)
        })?;
        notes.push(format!("N={n}: dim B {} dim L {} ≥ {}", n * n * n, rep.dim_l, rep.bound));
    }
    Ok(notes.join("; "))
}

fn criterion8(configs: &[JobConfig]) -> Outcome {
    let mut obstructed = 0;
    let mut growth = 0;
    for c in configs {
        let space = &c.space;
        let n = space.rank();
        let has_split = (0..n).any(|i| (0..n).any(|j| i != j && (space.q(i, j) * space.q(j, i)).is_one()));
        let basis = NicholsBasis::build(space, c.cutoff).unwrap();
        let letters = SuperLetters::compute(&basis).unwrap();
        let span = LieSpan::closure(&basis, Flavor::Std).unwrap();
        if has_split && n > 1 {
            let (ds, check) = liealg::direct_sum(&basis, &span).unwrap();
            ensure(
                ds.holds == Some(false) && ds.witness.is_some() && check.status == Status::Pass,
                || format!("{}: {}", c.name, check.detail),
            )?;
            obstructed += 1;
        }
        if liealg::growth_pair(space, &letters).is_some() {
            let cert = liealg::l_infinite_certificate(&basis, &letters);
            ensure(matches!(cert, Some(liealg::InfiniteCertificate::GrowthPair { .. })), || {
                format!("{}: certificate {cert:?}", c.name)
            })?;
            let (g, _) = liealg::pair_growth(&basis, &letters, &span)
                .unwrap()
                .ok_or("no growth certificate")?;
            ensure(c.cutoff >= 10 && g.monotone, || format!("{}: counters {:?}", c.name, g.counters))?;
            growth += 1;
        }
    }
    ensure(obstructed > 0 && growth > 0, || {
        format!("{obstructed} obstructed, {growth} growth configs")
    })?;
    Ok(format!(
        "{obstructed} configs fail the direct sum with witness; {growth} carry a monotone growth certificate"
    ))
}

fn criterion9(configs: &[JobConfig]) -> Outcome {
    let mut finite = 0;
    for c in configs {
        let basis = NicholsBasis::build(&c.space, c.cutoff).unwrap();
        if !basis.is_finite() {
            continue;
        }
        let letters = SuperLetters::compute(&basis).unwrap();
        let minus = LieSpan::closure(&basis, Flavor::Minus).unwrap();
        let std = LieSpan::closure(&basis, Flavor::Std).unwrap();
        let lm = liealg::bound_lminus(&basis, &letters, &minus).unwrap();
        ensure(lm.holds && lm.lhs_exact, || format!("{}: {:?}", c.name, lm.bounds))?;
        let l = liealg::bound_l(&basis, &letters, &std).ok_or_else(|| format!("{}: heights", c.name))?;
        ensure(l.holds && l.lhs_exact, || format!("{}: {:?}", c.name, l.bounds))?;
        finite += 1;
    }
    Ok(format!("both bounds hold on {finite} finite configs"))
}

fn main() {
    let configs = configs();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 example reproduction", Box::new(criterion1)),
        ("2 rank-one laws", Box::new(criterion2)),
        ("3 PBW consistency", Box::new(|| criterion3(&configs))),
        ("4 kernel cross-validation", Box::new(|| criterion4(&configs))),
        ("5 nilpotency criterion sweep", Box::new(criterion5)),
        ("6 identity suites", Box::new(criterion6)),
        ("7 Cartan suite", Box::new(criterion7)),
        ("8 obstruction suite", Box::new(|| criterion8(&configs))),
        ("9 bound suite", Box::new(|| criterion9(&configs))),
    ];
    let mut red = 0;
    for (name, f) in &criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                red += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if red > 0 {
        std::process::exit(1);
    }
}
