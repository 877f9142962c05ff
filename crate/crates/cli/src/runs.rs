//! The experiment runners behind the CLI subcommands.  Each returns a
//! deterministic report plus an aligned text rendering; the `ok` flag
//! distinguishes mathematical failures (exit 1) from budget and IO
//! problems, which surface as errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use repzeta_core::chartab::{ClassAlgebra, DimensionMultiset};
use repzeta_core::groups::{commuting_pair_count, GroupSpec, Scheme};
use repzeta_core::kirillov;
use repzeta_core::rand_chacha::rand_core::SeedableRng;
use repzeta_core::rand_chacha::ChaCha8Rng;
use repzeta_core::rings::witt::WittRing;
use repzeta_core::rings::RingDesc;
use repzeta_core::zetatool::{check_equivalence, random_multiset, sigma_set, CheckMode, ZetaView};
use repzeta_core::{Budgets, Error, Result};

use crate::cache;
use crate::report::{align_table, csv_table, Report};

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub budgets: Budgets,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub text: String,
    pub csv: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeChoice {
    Direct,
    Prop21,
    Both,
}

impl ModeChoice {
    pub fn parse(s: &str) -> Result<ModeChoice> {
        match s {
            "direct" => Ok(ModeChoice::Direct),
            "prop21" => Ok(ModeChoice::Prop21),
            "both" => Ok(ModeChoice::Both),
            other => Err(Error::BadParameter(format!("unknown mode {other:?}"))),
        }
    }

    fn modes(self) -> Vec<CheckMode> {
        match self {
            ModeChoice::Direct => vec![CheckMode::Direct],
            ModeChoice::Prop21 => vec![CheckMode::Prop21],
            ModeChoice::Both => vec![CheckMode::Direct, CheckMode::Prop21],
        }
    }
}

pub fn parse_scheme(s: &str) -> Result<Scheme> {
    match s {
        "gl" => Ok(Scheme::Gl),
        "sl" => Ok(Scheme::Sl),
        "u" => Ok(Scheme::UpperUni),
        "heis" => Ok(Scheme::Heisenberg),
        "diag" => Ok(Scheme::Diagonal),
        other => Err(Error::BadParameter(format!(
            "unknown scheme {other:?} (expected gl, sl, u, heis, diag)"
        ))),
    }
}

fn scheme_slug(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Gl => "gl",
        Scheme::Sl => "sl",
        Scheme::UpperUni => "u",
        Scheme::Heisenberg => "heis",
        Scheme::Diagonal => "diag",
    }
}

/// The two ring families at matching parameters: polynomial truncation
/// and Witt side (integers mod p^k, or the Galois ring for f > 1).
fn ring_pair(p: u64, f: usize, k: u32) -> Result<[(String, &'static str, RingDesc); 2]> {
    let poly = RingDesc::trunc_poly(p, f, k as usize)?;
    let witt = if f == 1 { RingDesc::zmod(p, k)? } else { RingDesc::galois_ring(p, k, f)? };
    let poly_label = if f == 1 {
        format!("F_{p}[t]/(t^{k})")
    } else {
        format!("F_{{{p}^{f}}}[t]/(t^{k})")
    };
    let witt_label = if f == 1 {
        match p.checked_pow(k) {
            Some(q) => format!("Z/{q}"),
            None => format!("Z/{p}^{k}"),
        }
    } else {
        format!("GR({p}^{k},{f})")
    };
    Ok([(poly_label, "poly", poly), (witt_label, "witt", witt)])
}

fn degrees_compact(ms: &DimensionMultiset) -> String {
    ms.degrees
        .iter()
        .map(|(d, m)| format!("{d}^{m}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn pairs_json(pairs: u128) -> Value {
    match u64::try_from(pairs) {
        Ok(v) => json!(v),
        Err(_) => json!(pairs.to_string()),
    }
}

struct Side {
    label: String,
    family: &'static str,
    multiset: DimensionMultiset,
    pairs: u128,
    cache_hit: bool,
    ms: u128,
}

/// Builds one side of a comparison: conjugacy data (through the cache
/// when configured), the degree multiset, and the commuting-pair count.
fn build_side(
    scheme: Scheme,
    n: usize,
    label: String,
    family: &'static str,
    ring: RingDesc,
    cfg: &RunConfig,
) -> Result<Side> {
    let spec = GroupSpec::new(scheme, n, ring)?;
    let start = Instant::now();
    let (data, cache_hit) = cache::load_or_compute(&spec, &cfg.budgets, cfg.cache_dir.as_deref())?;
    let alg = ClassAlgebra::new(&data, &cfg.budgets);
    let multiset = alg.dixon_degrees()?;
    multiset.validate()?;
    let pairs = commuting_pair_count(&data);
    let ms = start.elapsed().as_millis();
    Ok(Side { label, family, multiset, pairs, cache_hit, ms })
}

fn side_json(side: &Side) -> Value {
    json!({
        "ring": side.label,
        "family": side.family,
        "order": side.multiset.order,
        "classes": side.multiset.classes,
        "distinct": side.multiset.distinct_count(),
        "degrees": side.multiset.to_json()["degrees"].clone(),
        "commuting_pairs": pairs_json(side.pairs),
        "cache_hit": side.cache_hit,
    })
}

fn spec_json(scheme: Scheme, n: usize, p: u64, f: usize, k: u32) -> Value {
    json!({"scheme": scheme_slug(scheme), "n": n, "p": p, "f": f, "k": k})
}

/// Compares the degree multisets of the group over the two ring
/// families at level k.  Reports one verdict per requested mode; for
/// unitriangular schemes the coadjoint-orbit degrees are cross-checked
/// against the class-algebra degrees on both sides.
pub fn run_verify(
    scheme: Scheme,
    n: usize,
    p: u64,
    f: usize,
    k: u32,
    mode: ModeChoice,
    cfg: &RunConfig,
) -> Result<RunOutput> {
    let mut report = Report::new("verify-equivalence", spec_json(scheme, n, p, f, k));
    let rings = ring_pair(p, f, k)?;
    let mut sides = Vec::new();
    for (label, family, ring) in rings {
        let side = build_side(scheme, n, label, family, ring, cfg)?;
        report.timing(&format!("{}_ms", side.family), side.ms);
        sides.push(side);
    }
    let [a, b] = <[Side; 2]>::try_from(sides).ok().expect("two sides");

    let mut cross_check = Value::Null;
    if matches!(scheme, Scheme::UpperUni | Scheme::Heisenberg) {
        let mut entries = Vec::new();
        for side in [&a, &b] {
            let spec = GroupSpec::new(scheme, n, ring_for_family(side.family, p, f, k)?)?;
            let orbit = kirillov::orbit_method_degrees(&spec, &cfg.budgets)?;
            let agrees = orbit.degrees == side.multiset.degrees;
            report.ok &= agrees;
            entries.push(json!({"family": side.family, "orbit_agrees": agrees}));
        }
        cross_check = json!(entries);
    }

    let za = ZetaView::new(&a.multiset);
    let zb = ZetaView::new(&b.multiset);
    let mut verdicts = Vec::new();
    let mut rows = vec![vec![
        "mode".to_string(),
        "equal".to_string(),
        "points".to_string(),
        "witness_s".to_string(),
    ]];
    for m in mode.modes() {
        let v = check_equivalence(&za, &zb, m);
        report.ok &= v.equal;
        rows.push(vec![
            m.as_str().to_string(),
            if v.equal { "yes".into() } else { "no".into() },
            v.points.len().to_string(),
            v.witness_s.map_or("-".to_string(), |s| s.to_string()),
        ]);
        verdicts.push(v.to_json());
    }

    report.insert("groups", json!([side_json(&a), side_json(&b)]));
    report.insert("verdicts", json!(verdicts));
    report.insert("unipotent_cross_check", cross_check);

    let mut table = vec![
        vec![
            "ring".to_string(),
            "order".to_string(),
            "classes".to_string(),
            "degrees".to_string(),
        ],
        side_row(&a),
        side_row(&b),
    ];
    table.push(Vec::new());
    table.extend(rows);
    let header = format!(
        "verify {} n={n} p={p} f={f} k={k}\n",
        scheme_slug(scheme)
    );
    let text = format!("{header}{}", align_table(&table));
    Ok(RunOutput { report, text, csv: None })
}

fn ring_for_family(family: &str, p: u64, f: usize, k: u32) -> Result<RingDesc> {
    match family {
        "poly" => RingDesc::trunc_poly(p, f, k as usize),
        _ if f == 1 => RingDesc::zmod(p, k),
        _ => RingDesc::galois_ring(p, k, f),
    }
}

fn side_row(side: &Side) -> Vec<String> {
    vec![
        side.label.clone(),
        side.multiset.order.to_string(),
        side.multiset.classes.to_string(),
        degrees_compact(&side.multiset),
    ]
}

/// Tabulates the number of distinct degrees of the group over F_{p^f}
/// across a list of primes and flags the empirical maximum.
pub fn run_ntable(
    scheme: Scheme,
    n: usize,
    f: usize,
    primes: &[u64],
    cfg: &RunConfig,
) -> Result<RunOutput> {
    if primes.is_empty() {
        return Err(Error::BadParameter("ntable needs at least one prime".into()));
    }
    let mut report = Report::new(
        "n-table",
        json!({"scheme": scheme_slug(scheme), "n": n, "f": f, "primes": primes}),
    );
    let mut rows_json = Vec::new();
    let mut rows = vec![vec![
        "p".to_string(),
        "order".to_string(),
        "classes".to_string(),
        "distinct".to_string(),
        "degrees".to_string(),
    ]];
    let mut csv_rows = Vec::new();
    let mut max_distinct = 0u64;
    for &p in primes {
        let start = Instant::now();
        let spec = GroupSpec::new(scheme, n, RingDesc::field(p, f)?)?;
        let (data, _) = cache::load_or_compute(&spec, &cfg.budgets, cfg.cache_dir.as_deref())?;
        let alg = ClassAlgebra::new(&data, &cfg.budgets);
        let ms = alg.dixon_degrees()?;
        report.timing(&format!("p{p}_ms"), start.elapsed().as_millis());
        let distinct = ms.distinct_count() as u64;
        max_distinct = max_distinct.max(distinct);
        rows.push(vec![
            p.to_string(),
            ms.order.to_string(),
            ms.classes.to_string(),
            distinct.to_string(),
            degrees_compact(&ms),
        ]);
        csv_rows.push(vec![
            p.to_string(),
            ms.order.to_string(),
            ms.classes.to_string(),
            distinct.to_string(),
            degrees_compact(&ms).replace(' ', ";"),
        ]);
        rows_json.push(json!({
            "p": p,
            "order": ms.order,
            "classes": ms.classes,
            "distinct": distinct,
            "degrees": ms.to_json()["degrees"].clone(),
        }));
    }
    let argmax: Vec<u64> = rows_json
        .iter()
        .filter(|r| r["distinct"].as_u64() == Some(max_distinct))
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    report.insert("rows", json!(rows_json));
    report.insert("max_distinct", json!(max_distinct));
    report.insert("argmax_p", json!(argmax));
    let text = format!(
        "ntable {} n={n} f={f}\n{}max distinct = {max_distinct} at p in {argmax:?}\n",
        scheme_slug(scheme),
        align_table(&rows)
    );
    let csv = csv_table(&["p", "order", "classes", "distinct", "degrees"], &csv_rows);
    Ok(RunOutput { report, text, csv: Some(csv) })
}

/// Compares group orders and commuting-pair counts over the two ring
/// families at level k.
pub fn run_pointcount(
    scheme: Scheme,
    n: usize,
    p: u64,
    f: usize,
    k: u32,
    cfg: &RunConfig,
) -> Result<RunOutput> {
    let mut report = Report::new("point-count", spec_json(scheme, n, p, f, k));
    let rings = ring_pair(p, f, k)?;
    let mut sides = Vec::new();
    for (label, family, ring) in rings {
        let spec = GroupSpec::new(scheme, n, ring)?;
        let start = Instant::now();
        let (data, cache_hit) =
            cache::load_or_compute(&spec, &cfg.budgets, cfg.cache_dir.as_deref())?;
        let pairs = commuting_pair_count(&data);
        report.timing(&format!("{family}_ms"), start.elapsed().as_millis());
        sides.push((label, family, data.group.order() as u64, data.classes.len() as u64, pairs, cache_hit));
    }
    let orders_equal = sides[0].2 == sides[1].2;
    let classes_equal = sides[0].3 == sides[1].3;
    let pairs_equal = sides[0].4 == sides[1].4;
    report.ok = orders_equal && classes_equal && pairs_equal;
    let entries: Vec<Value> = sides
        .iter()
        .map(|(label, family, order, classes, pairs, hit)| {
            json!({
                "ring": label,
                "family": family,
                "order": order,
                "classes": classes,
                "commuting_pairs": pairs_json(*pairs),
                "cache_hit": hit,
            })
        })
        .collect();
    report.insert("groups", json!(entries));
    report.insert("orders_equal", json!(orders_equal));
    report.insert("classes_equal", json!(classes_equal));
    report.insert("pairs_equal", json!(pairs_equal));
    let mut rows = vec![vec![
        "ring".to_string(),
        "order".to_string(),
        "classes".to_string(),
        "commuting_pairs".to_string(),
    ]];
    for (label, _, order, classes, pairs, _) in &sides {
        rows.push(vec![
            label.clone(),
            order.to_string(),
            classes.to_string(),
            pairs.to_string(),
        ]);
    }
    let text = format!(
        "pointcount {} n={n} p={p} f={f} k={k}\n{}orders_equal={orders_equal} pairs_equal={pairs_equal}\n",
        scheme_slug(scheme),
        align_table(&rows)
    );
    Ok(RunOutput { report, text, csv: None })
}

/// The characteristic-2 comparison at SL_2, p = 2, k = 4: both rings
/// have 16 elements and both groups have order 3072.  The equality
/// verdict is recorded as an observation, not asserted; structural
/// identities on both multisets still gate the ok flag.
pub fn run_probe_q2(cfg: &RunConfig) -> Result<RunOutput> {
    let (scheme, n, p, f, k) = (Scheme::Sl, 2, 2, 1, 4);
    let mut report = Report::new("counterexample-probe", spec_json(scheme, n, p, f, k));
    let rings = ring_pair(p, f, k)?;
    let mut sides = Vec::new();
    for (label, family, ring) in rings {
        let side = build_side(scheme, n, label, family, ring, cfg)?;
        report.timing(&format!("{}_ms", side.family), side.ms);
        sides.push(side);
    }
    let [a, b] = <[Side; 2]>::try_from(sides).ok().expect("two sides");
    report.ok &= a.multiset.order == 3072 && b.multiset.order == 3072;

    let za = ZetaView::new(&a.multiset);
    let zb = ZetaView::new(&b.multiset);
    let verdicts: Vec<Value> = [CheckMode::Direct, CheckMode::Prop21]
        .into_iter()
        .map(|m| check_equivalence(&za, &zb, m).to_json())
        .collect();
    let equal = verdicts[0]["equal"].as_bool().unwrap();
    report.insert("groups", json!([side_json(&a), side_json(&b)]));
    report.insert("verdicts", json!(verdicts));
    report.insert(
        "observation",
        json!({"equal": equal, "asserted": false}),
    );
    let table = vec![
        vec!["ring".to_string(), "order".to_string(), "classes".to_string(), "degrees".to_string()],
        side_row(&a),
        side_row(&b),
    ];
    let text = format!(
        "probe-q2 sl n=2 p=2 k=4\n{}observed equal = {equal} (recorded, not asserted)\n",
        align_table(&table)
    );
    Ok(RunOutput { report, text, csv: None })
}

fn dixon_of(scheme: Scheme, n: usize, ring: RingDesc, cfg: &RunConfig) -> Result<DimensionMultiset> {
    let spec = GroupSpec::new(scheme, n, ring)?;
    let (data, _) = cache::load_or_compute(&spec, &cfg.budgets, cfg.cache_dir.as_deref())?;
    ClassAlgebra::new(&data, &cfg.budgets).dixon_degrees()
}

/// Fast internal consistency checks over small groups; each check
/// prints one line and the run fails if any check fails.
pub fn run_selftest(cfg: &RunConfig) -> Result<RunOutput> {
    let budgets = &cfg.budgets;
    let mut checks: Vec<(&'static str, bool)> = Vec::new();

    let heis = dixon_of(Scheme::UpperUni, 3, RingDesc::field(3, 1)?, cfg)?;
    let want: BTreeMap<u64, u64> = [(1, 9), (3, 2)].into_iter().collect();
    let spec = GroupSpec::new(Scheme::UpperUni, 3, RingDesc::field(3, 1)?)?;
    let orbit = kirillov::orbit_method_degrees(&spec, budgets)?;
    checks.push((
        "heisenberg degree table",
        heis.degrees == want && orbit.degrees == want,
    ));

    let gl2 = dixon_of(Scheme::Gl, 2, RingDesc::field(3, 1)?, cfg)?;
    let want: BTreeMap<u64, u64> = [(1, 2), (2, 3), (3, 2), (4, 1)].into_iter().collect();
    checks.push(("gl2(f3) degree table", gl2.degrees == want));

    let a = dixon_of(Scheme::Sl, 2, RingDesc::trunc_poly(3, 1, 2)?, cfg)?;
    let b = dixon_of(Scheme::Sl, 2, RingDesc::zmod(3, 2)?, cfg)?;
    let va = ZetaView::new(&a);
    let vb = ZetaView::new(&b);
    let equal = [CheckMode::Direct, CheckMode::Prop21]
        .into_iter()
        .all(|m| check_equivalence(&va, &vb, m).equal);
    checks.push(("level-2 family agreement (sl2, p=3)", a.order == 648 && equal));

    let wr = WittRing::new(3, 1, 2)?;
    let elems = wr.iter_all();
    let mut witt_ok = elems.len() == 9;
    for x in &elems {
        for y in &elems {
            let xi = wr.to_padic(x)?;
            let yi = wr.to_padic(y)?;
            witt_ok &= wr.to_padic(&wr.add(x, y)?)? == (xi + yi) % 9;
            witt_ok &= wr.to_padic(&wr.mul(x, y)?)? == (xi * yi) % 9;
        }
    }
    checks.push(("witt arithmetic (p=3, k=2)", witt_ok));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0013);
    let mut sampled_ok = true;
    for trial in 0..200u32 {
        let x = random_multiset(&mut rng, 3, 64);
        let y = if trial % 2 == 0 { x.clone() } else { random_multiset(&mut rng, 3, 64) };
        let vx = ZetaView::new(&x);
        let vy = ZetaView::new(&y);
        let d = check_equivalence(&vx, &vy, CheckMode::Direct);
        let s = check_equivalence(&vx, &vy, CheckMode::Prop21);
        sampled_ok &= d.equal == s.equal;
    }
    checks.push(("sampling criterion agrees with direct comparison", sampled_ok));

    let s1 = sigma_set(&[1], 3, budgets)?;
    let s2 = sigma_set(&[1, 2], 2, budgets)?;
    let s3 = sigma_set(&[2, 3, 5], 3, budgets)?;
    checks.push((
        "bounded sum sets",
        s1 == [1, 2, 3].into_iter().collect()
            && s2 == [1, 2, 3, 4].into_iter().collect()
            && s3.len() as u64 <= 81,
    ));

    let mut report = Report::new("selftest", json!({}));
    let mut rows = Vec::new();
    for (name, ok) in &checks {
        report.ok &= ok;
        rows.push(vec![
            (*name).to_string(),
            if *ok { "ok".to_string() } else { "FAIL".to_string() },
        ]);
    }
    report.insert(
        "checks",
        json!(checks
            .iter()
            .map(|(name, ok)| json!({"name": name, "ok": ok}))
            .collect::<Vec<_>>()),
    );
    let text = format!("selftest\n{}", align_table(&rows));
    Ok(RunOutput { report, csv: None, text })
}
