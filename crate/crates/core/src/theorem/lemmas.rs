use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::LemmaOutcome;
use super::TheoremError;
use crate::arith::{self, gcd};
use crate::invariants::{self, classify_rp, RpStatus};
use crate::perm::{ElemId, Group, Quotient, Subgroup, DEFAULT_NORMAL_BUDGET};

#[derive(Debug, Clone)]
pub struct LemmaConfig {
    pub seed: u64,
    /// Tuples checked per lemma when exhaustive checking would exceed it.
    pub sample_budget: usize,
    /// Groups above this order skip the quadratic-cost checks.
    pub max_order: usize,
    pub normal_budget: u64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            sample_budget: 10_000,
            max_order: 2_000,
            normal_budget: DEFAULT_NORMAL_BUDGET,
        }
    }
}

fn require_star(g: &Group, p: u64) -> Result<(), TheoremError> {
    let c = classify_rp(g, p)?;
    if c.status == RpStatus::RpStar {
        Ok(())
    } else {
        Err(TheoremError::Inapplicable(format!(
            "group is {:?} for p = {p}, not RpStar",
            c.status
        )))
    }
}

/// For an `RpStar` group: a normal `p`-complement exists.
pub fn check_normal_p_complement(g: &Group, p: u64) -> Result<bool, TheoremError> {
    require_star(g, p)?;
    Ok(g.has_normal_p_complement(p)?)
}

/// For an `RpStar` group: `Z(P) <= Z(G)` for every Sylow `p`-subgroup `P`,
/// checked on every conjugate of the computed one.
pub fn check_sylow_center_central(g: &Group, p: u64) -> Result<bool, TheoremError> {
    require_star(g, p)?;
    let sylow = g.sylow_subgroup(p)?;
    let zp = invariants::subgroup_center(g, &sylow);
    let zg = g.center();
    Ok(g.elements()
        .all(|y| zp.iter().all(|&z| zg.contains(g.conj(z, y)))))
}

/// `(checked, failures)`: for each non-central `x`, some class has no member
/// commuting with `x`.
fn centralizing_every_class_counts(g: &Group) -> (u64, u64) {
    let center = g.center();
    let mut checked = 0;
    let mut failures = 0;
    for x in g.elements().filter(|&x| !center.contains(x)) {
        let cx = g.centralizer_mask(x);
        let avoided = g
            .conjugacy_classes()
            .iter()
            .any(|c| c.members.iter().all(|m| !cx.contains(m.index())));
        checked += 1;
        if !avoided {
            failures += 1;
        }
    }
    (checked, failures)
}

/// An element meeting the centraliser of every class is central: checked by
/// showing every non-central element misses some class entirely.
pub fn check_centralizing_every_class(g: &Group) -> bool {
    centralizing_every_class_counts(g).1 == 0
}

/// Picks which of `len` tuples to check: all of them when within budget,
/// otherwise a seeded sample of `budget` indices in ascending order.
fn select(len: usize, budget: usize, seed: u64, stream: u64) -> (Vec<usize>, bool) {
    if len <= budget {
        return ((0..len).collect(), true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut picked = rand::seq::index::sample(&mut rng, len, budget).into_vec();
    picked.sort_unstable();
    (picked, false)
}

struct Context<'g> {
    g: &'g Group,
    centralizers: Vec<FixedBitSet>,
    normals: Vec<Subgroup>,
}

impl<'g> Context<'g> {
    fn new(g: &'g Group, budget: u64) -> Result<Self, TheoremError> {
        Ok(Self {
            g,
            centralizers: g.elements().map(|x| g.centralizer_mask(x)).collect(),
            normals: g.normal_subgroups(budget)?,
        })
    }

    fn centralizer(&self, x: ElemId) -> &FixedBitSet {
        &self.centralizers[x.index()]
    }

    fn projected_centralizer(&self, q: &Quotient, x: ElemId) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(q.group.order());
        for y in self.centralizer(x).ones() {
            mask.insert(q.project(ElemId(y as u32)).index());
        }
        mask
    }
}

/// Runs every lemma check that applies to `g`, keyed by check name.
pub fn run_lemma_suite(g: &Group, config: &LemmaConfig) -> BTreeMap<String, LemmaOutcome> {
    let mut out = BTreeMap::new();
    let order = g.order() as u64;
    let primes = arith::prime_divisors(order).expect("order is positive");
    let classes: Vec<(u64, RpStatus)> = primes
        .iter()
        .map(|&p| (p, classify_rp(g, p).expect("prime").status))
        .collect();
    let star: Vec<u64> = classes
        .iter()
        .filter(|(_, s)| *s == RpStatus::RpStar)
        .map(|&(p, _)| p)
        .collect();
    let star_star: Vec<u64> = classes
        .iter()
        .filter(|(_, s)| *s == RpStatus::RpStarStar)
        .map(|&(p, _)| p)
        .collect();

    let by_prime = |check: &dyn Fn(u64) -> Result<bool, TheoremError>, primes: &[u64]| {
        let mut failures = 0;
        for &p in primes {
            match check(p) {
                Ok(true) => {}
                Ok(false) => failures += 1,
                Err(e) => return LemmaOutcome::skipped(e.to_string()),
            }
        }
        LemmaOutcome::from_counts(primes.len() as u64, failures, true)
    };

    out.insert(
        "normal_p_complement".to_string(),
        by_prime(&|p| check_normal_p_complement(g, p), &star),
    );
    out.insert(
        "sylow_center_central".to_string(),
        by_prime(&|p| check_sylow_center_central(g, p), &star),
    );
    out.insert(
        "abelian_sylow".to_string(),
        by_prime(
            &|p| {
                let s = g.sylow_subgroup(p)?;
                let gens = s.generators();
                Ok(gens.iter().all(|&a| gens.iter().all(|&b| g.commutes(a, b))))
            },
            &star_star,
        ),
    );
    let factors = if star_star.is_empty() {
        Ok(Vec::new())
    } else {
        g.composition_factors(config.normal_budget)
    };
    out.insert(
        "single_nonabelian_factor".to_string(),
        match factors {
            Ok(factors) => by_prime(
                &|p| {
                    Ok(factors
                        .iter()
                        .filter(|f| !f.abelian && f.order % p == 0)
                        .count()
                        <= 1)
                },
                &star_star,
            ),
            Err(e) => LemmaOutcome::skipped(e.to_string()),
        },
    );

    let heavy = [
        "class_size_divisibility",
        "coprime_centralizer_product",
        "coprime_quotient_centralizer",
        "quotient_centralizer_image",
        "centralizing_every_class",
        "commuting_sylow_equivalence",
        "normal_sylow_direct_centralizer",
    ];
    if g.order() > config.max_order {
        for name in heavy {
            out.insert(
                name.to_string(),
                LemmaOutcome::skipped(format!(
                    "order {order} above lemma limit {}",
                    config.max_order
                )),
            );
        }
        return out;
    }

    let (checked, failures) = centralizing_every_class_counts(g);
    out.insert(
        "centralizing_every_class".to_string(),
        LemmaOutcome::from_counts(checked, failures, true),
    );

    let mut vse_checked = 0;
    let mut vse_failures = 0;
    let mut vse_error = None;
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            match invariants::sylow_commute_criterion(g, p, q) {
                Ok(r) => {
                    vse_checked += 1;
                    if r.class_side != r.subgroup_side {
                        vse_failures += 1;
                    }
                }
                Err(e) => vse_error = Some(e.to_string()),
            }
        }
    }
    out.insert(
        "commuting_sylow_equivalence".to_string(),
        match vse_error {
            Some(e) => LemmaOutcome::skipped(e),
            None => LemmaOutcome::from_counts(vse_checked, vse_failures, true),
        },
    );

    match Context::new(g, config.normal_budget) {
        Ok(ctx) => {
            out.extend(quotient_lemmas(&ctx, config));
            out.insert(
                "coprime_centralizer_product".to_string(),
                coprime_centralizer_product(&ctx, config),
            );
            out.insert(
                "normal_sylow_direct_centralizer".to_string(),
                normal_sylow_direct_centralizer(&ctx, &primes, config),
            );
        }
        Err(e) => {
            for name in [
                "class_size_divisibility",
                "coprime_centralizer_product",
                "coprime_quotient_centralizer",
                "quotient_centralizer_image",
                "normal_sylow_direct_centralizer",
            ] {
                out.insert(name.to_string(), LemmaOutcome::skipped(e.to_string()));
            }
        }
    }
    out
}

/// Checks over `(K, x)` with `K` normal:
/// - `|x^K|` and `|x̄^Ḡ|` divide `|x^G|`;
/// - the image of `C_G(x)` lies in `C_Ḡ(x̄)`;
/// - when `gcd(|x|, |K|) = 1`, that image is all of `C_Ḡ(x̄)`.
fn quotient_lemmas(ctx: &Context<'_>, config: &LemmaConfig) -> Vec<(String, LemmaOutcome)> {
    let g = ctx.g;
    let all: Vec<(usize, ElemId)> = (0..ctx.normals.len())
        .flat_map(|k| g.elements().map(move |x| (k, x)))
        .collect();
    let coprime: Vec<(usize, ElemId)> = all
        .iter()
        .copied()
        .filter(|&(k, x)| gcd(g.element_order(x), ctx.normals[k].order() as u64) == 1)
        .collect();

    let mut quotients: Vec<Option<Result<Quotient, String>>> = vec![None; ctx.normals.len()];
    let mut quotient = |k: usize| -> Result<Quotient, String> {
        quotients[k]
            .get_or_insert_with(|| g.quotient_group(&ctx.normals[k]).map_err(|e| e.to_string()))
            .clone()
    };

    let mut results = Vec::new();
    let mut run = |name: &str,
                   tuples: &[(usize, ElemId)],
                   stream: u64,
                   check: &mut dyn FnMut(&Subgroup, &Quotient, ElemId) -> bool| {
        let (picked, exhaustive) = select(tuples.len(), config.sample_budget, config.seed, stream);
        let mut failures = 0;
        for i in picked.iter().copied() {
            let (k, x) = tuples[i];
            let q = match quotient(k) {
                Ok(q) => q,
                Err(e) => {
                    results.push((name.to_string(), LemmaOutcome::skipped(e)));
                    return;
                }
            };
            if !check(&ctx.normals[k], &q, x) {
                failures += 1;
            }
        }
        results.push((
            name.to_string(),
            LemmaOutcome::from_counts(picked.len() as u64, failures, exhaustive),
        ));
    };

    run("class_size_divisibility", &all, 1, &mut |k, q, x| {
        let in_k = ctx.centralizer(x).intersection(k.mask()).count();
        let class_in_k = k.order() / in_k;
        let class_in_g = g.class_size(x);
        let class_in_quotient = q.group.class_size(q.project(x));
        class_in_g % class_in_k == 0 && class_in_g % class_in_quotient == 0
    });
    run("quotient_centralizer_image", &all, 2, &mut |_, q, x| {
        let image = ctx.projected_centralizer(q, x);
        image.is_subset(&q.group.centralizer_mask(q.project(x)))
    });
    run(
        "coprime_quotient_centralizer",
        &coprime,
        3,
        &mut |_, q, x| ctx.projected_centralizer(q, x) == q.group.centralizer_mask(q.project(x)),
    );
    results
}

/// Commuting `x, y` of coprime orders: `C_G(xy) = C_G(x) ∩ C_G(y)`.
fn coprime_centralizer_product(ctx: &Context<'_>, config: &LemmaConfig) -> LemmaOutcome {
    let g = ctx.g;
    let mut pairs = Vec::new();
    for x in g.elements() {
        for y in ctx.centralizer(x).ones() {
            let y = ElemId(y as u32);
            if gcd(g.element_order(x), g.element_order(y)) == 1 {
                pairs.push((x, y));
            }
        }
    }
    let (picked, exhaustive) = select(pairs.len(), config.sample_budget, config.seed, 4);
    let failures = picked
        .iter()
        .filter(|&&i| {
            let (x, y) = pairs[i];
            let mut both = ctx.centralizer(x).clone();
            both.intersect_with(ctx.centralizer(y));
            *ctx.centralizer(g.mul(x, y)) != both
        })
        .count();
    LemmaOutcome::from_counts(picked.len() as u64, failures as u64, exhaustive)
}

/// A normal Sylow `p`-subgroup split as `A × B` with `A, B` normal in `G`:
/// `C_G(ab) = C_G(a) ∩ C_G(b)` for all `a ∈ A`, `b ∈ B`.
fn normal_sylow_direct_centralizer(
    ctx: &Context<'_>,
    primes: &[u64],
    config: &LemmaConfig,
) -> LemmaOutcome {
    let g = ctx.g;
    let mut tuples = Vec::new();
    for &p in primes {
        let target = arith::p_part(g.order() as u64, p).expect("prime") as usize;
        let Some(sylow) = ctx.normals.iter().find(|h| h.order() == target) else {
            continue;
        };
        let inside: Vec<&Subgroup> = ctx.normals.iter().filter(|h| h.is_subset(sylow)).collect();
        for a in &inside {
            for b in &inside {
                if a.order() * b.order() != target || a.intersection_order(b) != 1 {
                    continue;
                }
                for &x in a.elements() {
                    for &y in b.elements() {
                        tuples.push((x, y));
                    }
                }
            }
        }
    }
    let (picked, exhaustive) = select(tuples.len(), config.sample_budget, config.seed, 5);
    let failures = picked
        .iter()
        .filter(|&&i| {
            let (a, b) = tuples[i];
            let mut both = ctx.centralizer(a).clone();
            both.intersect_with(ctx.centralizer(b));
            *ctx.centralizer(g.mul(a, b)) != both
        })
        .count();
    LemmaOutcome::from_counts(picked.len() as u64, failures as u64, exhaustive)
}
